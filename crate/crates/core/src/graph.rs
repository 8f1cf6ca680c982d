use crate::budget::Budgets;
use crate::error::{Error, Result};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;

/// Simple undirected graph on vertices `0..n`, stored as sorted adjacency
/// lists. No self-loops, no parallel edges; symmetry is a representation
/// invariant (checked in debug builds at construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGraph {
    adj: Vec<Vec<u32>>,
    connected: bool,
}

/// `d`-dimensional discrete torus with `n` vertices per axis: vertex set
/// `(Z/nZ)^d`, edges between points differing by +-1 on one coordinate.
/// Requires `n >= 3` so the two axis neighbors are distinct and the graph
/// stays simple and `2d`-regular.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TorusSpec {
    pub n: usize,
    pub d: usize,
}

impl TorusSpec {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSize(format!(
                "torus side must be at least 3 to avoid parallel edges, got {n}"
            )));
        }
        if d < 1 {
            return Err(Error::InvalidSize("torus dimension must be at least 1".into()));
        }
        Ok(TorusSpec { n, d })
    }

    pub fn vertex_count(&self) -> u128 {
        (0..self.d).fold(1u128, |acc, _| acc.saturating_mul(self.n as u128))
    }

    pub fn degree(&self) -> usize {
        2 * self.d
    }

    /// Vertex index of the given coordinates (least-significant-first
    /// mixed radix: coordinate 0 varies fastest).
    pub fn index_of(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.d);
        coords.iter().rev().fold(0, |acc, &c| acc * self.n + c)
    }

    /// Inverse of [`TorusSpec::index_of`].
    pub fn coords_of(&self, mut v: usize) -> Vec<usize> {
        let mut coords = Vec::with_capacity(self.d);
        for _ in 0..self.d {
            coords.push(v % self.n);
            v /= self.n;
        }
        coords
    }
}

impl FiniteGraph {
    /// Build from an edge list over vertices `0..n`. Duplicate edges (in
    /// either orientation) collapse; self-loops are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u},{v}) references a vertex outside 0..{n}"
                )));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::from_adjacency(adj))
    }

    fn from_adjacency(adj: Vec<Vec<u32>>) -> Self {
        let connected = connected_by_bfs(&adj);
        let g = FiniteGraph { adj, connected };
        debug_assert!(g.symmetric());
        g
    }

    fn symmetric(&self) -> bool {
        self.adj.iter().enumerate().all(|(u, nbrs)| {
            nbrs.iter()
                .all(|&v| self.adj[v as usize].binary_search(&(u as u32)).is_ok())
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first()?.len();
        self.adj.iter().all(|l| l.len() == d).then_some(d)
    }

    /// Edges as `(u, v)` pairs with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adj.iter().enumerate() {
            for &v in nbrs {
                if u < v as usize {
                    out.push((u, v as usize));
                }
            }
        }
        out
    }

    /// Stable identity of the labeled graph: SHA-256 over the canonical
    /// edge list, truncated to 16 hex digits. Used in export metadata.
    pub fn content_hash(&self) -> String {
        let mut text = format!("n={};", self.vertex_count());
        for (u, v) in self.edges() {
            let _ = write!(text, "{u},{v};");
        }
        let digest = Sha256::digest(text.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Cycle `C_n` with vertices `i ~ i+-1 (mod n)`; `n >= 3`.
    pub fn cycle(n: usize, budgets: &Budgets) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSize(format!(
                "cycle needs at least 3 vertices, got {n}"
            )));
        }
        budgets.check_vertices(n as u128)?;
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        FiniteGraph::from_edges(n, &edges)
    }

    /// Complete graph `K_n`; `n >= 2`.
    pub fn complete(n: usize, budgets: &Budgets) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSize(format!(
                "complete graph needs at least 2 vertices, got {n}"
            )));
        }
        budgets.check_vertices(n as u128)?;
        let mut edges = Vec::with_capacity(n * (n - 1) / 2);
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        FiniteGraph::from_edges(n, &edges)
    }

    /// Discrete torus per [`TorusSpec`]. `2d`-regular and vertex-transitive
    /// under coordinate translation.
    pub fn torus(spec: TorusSpec, budgets: &Budgets) -> Result<Self> {
        let count = spec.vertex_count();
        budgets.check_vertices(count)?;
        let n_vertices = count as usize;
        let mut adj = vec![Vec::with_capacity(spec.degree()); n_vertices];
        let mut coords = vec![0usize; spec.d];
        for list in adj.iter_mut() {
            for axis in 0..spec.d {
                let orig = coords[axis];
                for delta in [1, spec.n - 1] {
                    coords[axis] = (orig + delta) % spec.n;
                    list.push(spec.index_of(&coords) as u32);
                }
                coords[axis] = orig;
            }
            // advance mixed-radix counter, least significant axis first
            for c in coords.iter_mut() {
                *c += 1;
                if *c < spec.n {
                    break;
                }
                *c = 0;
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        debug_assert!(adj.iter().all(|l| l.len() == spec.degree()));
        Ok(Self::from_adjacency(adj))
    }

    /// Parse a whitespace-separated edge list: one `u v` pair per line,
    /// `#` starts a comment, blank lines ignored. The graph gets
    /// `max id + 1` vertices; ids never mentioned stay isolated.
    pub fn parse_edge_list(text: &str, budgets: &Budgets) -> Result<Self> {
        let mut edges = Vec::new();
        let mut max_id: Option<usize> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let fail = |msg: String| Error::Parse { line: i + 1, msg };
            let u: usize = tokens
                .next()
                .ok_or_else(|| fail("missing endpoints".into()))?
                .parse()
                .map_err(|_| fail(format!("non-integer vertex id in {line:?}")))?;
            let v: usize = tokens
                .next()
                .ok_or_else(|| fail(format!("expected two vertex ids in {line:?}")))?
                .parse()
                .map_err(|_| fail(format!("non-integer vertex id in {line:?}")))?;
            if tokens.next().is_some() {
                return Err(fail(format!("expected exactly two vertex ids in {line:?}")));
            }
            if u == v {
                return Err(fail(format!("self-loop at vertex {u}")));
            }
            max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
            edges.push((u, v));
        }
        let n = max_id.map_or(0, |m| m + 1);
        budgets.check_vertices(n as u128)?;
        FiniteGraph::from_edges(n, &edges)
    }

    /// Inverse of [`FiniteGraph::parse_edge_list`]: one `u v` line per
    /// edge, `u < v`, sorted. Round-trips to an equal graph.
    pub fn serialize_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

fn connected_by_bfs(adj: &[Vec<u32>]) -> bool {
    let n = adj.len();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    let mut visited = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v as usize] {
                seen[v as usize] = true;
                visited += 1;
                queue.push_back(v as usize);
            }
        }
    }
    visited == n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budgets {
        Budgets::default()
    }

    #[test]
    fn cycle_shape() {
        let g = FiniteGraph::cycle(5, &b()).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.regular_degree(), Some(2));
        assert!(g.is_connected());
        assert!(g.has_edge(4, 0));
        assert!(FiniteGraph::cycle(2, &b()).is_err());
    }

    #[test]
    fn complete_shape() {
        let g = FiniteGraph::complete(5, &b()).unwrap();
        assert_eq!(g.edge_count(), 10);
        assert_eq!(g.regular_degree(), Some(4));
    }

    #[test]
    fn torus_matches_cycle_in_dimension_one() {
        let spec = TorusSpec::new(7, 1).unwrap();
        let t = FiniteGraph::torus(spec, &b()).unwrap();
        let c = FiniteGraph::cycle(7, &b()).unwrap();
        assert_eq!(t, c);
    }

    #[test]
    fn torus_is_regular_and_translation_invariant() {
        let spec = TorusSpec::new(4, 3).unwrap();
        let g = FiniteGraph::torus(spec, &b()).unwrap();
        assert_eq!(g.vertex_count(), 64);
        assert_eq!(g.regular_degree(), Some(6));
        assert!(g.is_connected());
        // translating every vertex by a fixed offset permutes edges onto edges
        let shift = [1usize, 2, 3];
        for v in 0..g.vertex_count() {
            let cv = spec.coords_of(v);
            let tv: Vec<_> = cv.iter().zip(&shift).map(|(c, s)| (c + s) % spec.n).collect();
            for &w in g.neighbors(v) {
                let cw = spec.coords_of(w as usize);
                let tw: Vec<_> = cw.iter().zip(&shift).map(|(c, s)| (c + s) % spec.n).collect();
                assert!(g.has_edge(spec.index_of(&tv), spec.index_of(&tw)));
            }
        }
    }

    #[test]
    fn torus_side_below_three_rejected() {
        assert!(TorusSpec::new(2, 2).is_err());
    }

    #[test]
    fn torus_vertex_budget_enforced() {
        let spec = TorusSpec::new(101, 3).unwrap();
        let err = FiniteGraph::torus(spec, &b()).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
    }

    #[test]
    fn index_round_trip_is_least_significant_first() {
        let spec = TorusSpec::new(5, 3).unwrap();
        assert_eq!(spec.index_of(&[1, 0, 0]), 1);
        assert_eq!(spec.index_of(&[0, 1, 0]), 5);
        assert_eq!(spec.index_of(&[0, 0, 1]), 25);
        for v in 0..125 {
            assert_eq!(spec.index_of(&spec.coords_of(v)), v);
        }
    }

    #[test]
    fn parse_rejects_bad_lines_with_position() {
        let bad = "0 1\n1 2\n2 x\n";
        match FiniteGraph::parse_edge_list(bad, &b()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(FiniteGraph::parse_edge_list("3 3\n", &b()).is_err());
        assert!(FiniteGraph::parse_edge_list("1 2 3\n", &b()).is_err());
    }

    #[test]
    fn parse_collapses_duplicates_and_keeps_isolated_ids() {
        let g = FiniteGraph::parse_edge_list("# example\n0 1\n1 0\n\n1 4\n", &b()).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.degree(2), 0);
        assert!(!g.is_connected());
    }

    #[test]
    fn serialize_round_trip() {
        let g = FiniteGraph::complete(4, &b()).unwrap();
        let text = g.serialize_edge_list();
        let back = FiniteGraph::parse_edge_list(&text, &b()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn hash_distinguishes_graphs() {
        let c4 = FiniteGraph::cycle(4, &b()).unwrap();
        let k4 = FiniteGraph::complete(4, &b()).unwrap();
        assert_ne!(c4.content_hash(), k4.content_hash());
        assert_eq!(c4.content_hash(), FiniteGraph::cycle(4, &b()).unwrap().content_hash());
    }
}
