use crate::error::{Error, Result};

/// Resource limits for graph construction, dense matrix work, and the
/// brute-force oracles. All checks are performed up front so that a
/// too-large request fails fast instead of thrashing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budgets {
    /// Maximum number of vertices a constructed graph may have.
    pub vertices: u64,
    /// Maximum matrix dimension for dense walk-matrix operations.
    pub matrix_dim: u64,
    /// Maximum walk length the DFS oracle will enumerate.
    pub oracle_depth: usize,
    /// Maximum vertex count the DFS oracle will accept.
    pub oracle_vertices: usize,
    /// Maximum estimated leaf count for one DFS oracle enumeration.
    pub oracle_work: u64,
    /// Maximum `d * (2k+1)^d` for the lattice dynamic-programming oracle.
    /// Default is sized so d <= 3 with k <= 16 fits exactly.
    pub dp_states: u64,
    /// Largest k for which exact rational lattice series are computed.
    pub series_exact_k: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            vertices: 1_000_000,
            matrix_dim: 10_000,
            oracle_depth: 12,
            oracle_vertices: 50,
            oracle_work: 200_000_000,
            dp_states: 3 * 33 * 33 * 33,
            series_exact_k: 2048,
        }
    }
}

impl Budgets {
    /// Apply overrides from an `NBWALK_BUDGET`-style string: either a bare
    /// integer (vertex budget) or comma-separated `key=value` pairs with
    /// keys `vertices`, `matrix_dim`, `oracle_depth`, `oracle_vertices`,
    /// `oracle_work`, `dp_states`, `series_exact_k`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(self);
        }
        if let Ok(v) = spec.parse::<u64>() {
            self.vertices = v;
            return Ok(self);
        }
        for (idx, pair) in spec.split(',').enumerate() {
            let mut it = pair.splitn(2, '=');
            let key = it.next().unwrap_or("").trim();
            let val = it.next().ok_or_else(|| Error::Parse {
                line: idx + 1,
                msg: format!("expected key=value in budget override, got {pair:?}"),
            })?;
            let parsed: u64 = val.trim().parse().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: format!("bad integer {val:?} for budget key {key:?}"),
            })?;
            match key {
                "vertices" => self.vertices = parsed,
                "matrix_dim" => self.matrix_dim = parsed,
                "oracle_depth" => self.oracle_depth = parsed as usize,
                "oracle_vertices" => self.oracle_vertices = parsed as usize,
                "oracle_work" => self.oracle_work = parsed,
                "dp_states" => self.dp_states = parsed,
                "series_exact_k" => self.series_exact_k = parsed as usize,
                other => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        msg: format!("unknown budget key {other:?}"),
                    })
                }
            }
        }
        Ok(self)
    }

    /// Read overrides from the `NBWALK_BUDGET` environment variable, if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var("NBWALK_BUDGET") {
            Ok(spec) => Budgets::default().with_overrides(&spec),
            Err(_) => Ok(Budgets::default()),
        }
    }

    pub fn check_vertices(&self, needed: u128) -> Result<()> {
        if needed > self.vertices as u128 {
            return Err(Error::Capacity {
                what: "graph vertices",
                needed,
                budget: self.vertices as u128,
            });
        }
        Ok(())
    }

    pub fn check_matrix_dim(&self, dim: usize) -> Result<()> {
        if dim as u128 > self.matrix_dim as u128 {
            return Err(Error::Capacity {
                what: "matrix dimension",
                needed: dim as u128,
                budget: self.matrix_dim as u128,
            });
        }
        Ok(())
    }

    pub fn check_dp_states(&self, d: usize, k: usize) -> Result<()> {
        let side = 2u128 * k as u128 + 1;
        let mut states = d as u128;
        for _ in 0..d {
            states = states.saturating_mul(side);
            if states > self.dp_states as u128 {
                return Err(Error::Capacity {
                    what: "lattice DP states",
                    needed: states,
                    budget: self.dp_states as u128,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_dp_budget_admits_documented_corners() {
        let b = Budgets::default();
        // d=3, k=16 sits exactly at the default; d=2 reaches k=32 for the
        // plane-lattice cross-checks.
        assert!(b.check_dp_states(3, 16).is_ok());
        assert!(b.check_dp_states(3, 17).is_err());
        assert!(b.check_dp_states(2, 32).is_ok());
    }

    #[test]
    fn override_string_forms() {
        let b = Budgets::default().with_overrides("250000").unwrap();
        assert_eq!(b.vertices, 250_000);
        let b = Budgets::default()
            .with_overrides("vertices=42, oracle_depth=14,dp_states=999")
            .unwrap();
        assert_eq!(b.vertices, 42);
        assert_eq!(b.oracle_depth, 14);
        assert_eq!(b.dp_states, 999);
        assert!(Budgets::default().with_overrides("bogus=1").is_err());
        assert!(Budgets::default().with_overrides("vertices").is_err());
    }
}
