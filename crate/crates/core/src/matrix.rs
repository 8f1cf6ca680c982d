use crate::graph::FiniteGraph;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

/// Dense square matrix over arbitrary-precision integers. Sized for desk
/// scale (thousands of rows); multiplication is the classical cubic
/// algorithm parallelized over output rows, which keeps results identical
/// regardless of thread count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(dim: usize) -> Self {
        IntMatrix {
            dim,
            data: vec![BigInt::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = IntMatrix::zero(dim);
        for i in 0..dim {
            m.data[i * dim + i] = BigInt::one();
        }
        m
    }

    /// 0/1 adjacency matrix of a graph.
    pub fn adjacency(g: &FiniteGraph) -> Self {
        let dim = g.vertex_count();
        let mut m = IntMatrix::zero(dim);
        for u in 0..dim {
            for &v in g.neighbors(u) {
                m.data[u * dim + v as usize] = BigInt::one();
            }
        }
        m
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(entries: &[BigInt]) -> Self {
        let dim = entries.len();
        let mut m = IntMatrix::zero(dim);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * dim + i] = e.clone();
        }
        m
    }

    /// Degree matrix `D` of a graph.
    pub fn degrees(g: &FiniteGraph) -> Self {
        let entries: Vec<BigInt> = (0..g.vertex_count())
            .map(|v| BigInt::from(g.degree(v)))
            .collect();
        IntMatrix::diagonal(&entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|e| !e.is_negative())
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        (0..self.dim).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn add(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim);
        IntMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim);
        IntMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim);
        let dim = self.dim;
        let data: Vec<BigInt> = (0..dim)
            .into_par_iter()
            .flat_map_iter(|i| {
                let lhs_row = self.row(i);
                (0..dim)
                    .map(|j| {
                        let mut acc = BigInt::zero();
                        for (k, a) in lhs_row.iter().enumerate() {
                            if !a.is_zero() {
                                let b = rhs.get(k, j);
                                if !b.is_zero() {
                                    acc += a * b;
                                }
                            }
                        }
                        acc
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        IntMatrix { dim, data }
    }

    /// Multiply on the left by a diagonal matrix given as its entries.
    pub fn scale_rows(&self, diag: &[BigInt]) -> IntMatrix {
        assert_eq!(diag.len(), self.dim);
        let mut out = self.clone();
        for (row, d) in out.data.chunks_mut(self.dim).zip(diag) {
            for v in row.iter_mut() {
                *v *= d;
            }
        }
        out
    }

    /// Exact division of every entry; panics if any entry is not divisible.
    pub fn to_rational(&self, denom: &BigInt) -> RatMatrix {
        RatMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|e| BigRational::new(e.clone(), denom.clone()))
                .collect(),
        }
    }
}

/// Dense square matrix over exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    dim: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zero(dim: usize) -> Self {
        RatMatrix {
            dim,
            data: vec![BigRational::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = RatMatrix::zero(dim);
        for i in 0..dim {
            m.data[i * dim + i] = BigRational::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn row_sums(&self) -> Vec<BigRational> {
        (0..self.dim)
            .map(|i| self.row(i).iter().fold(BigRational::zero(), |a, b| a + b))
            .collect()
    }

    pub fn trace(&self) -> BigRational {
        (0..self.dim)
            .map(|i| self.get(i, i))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn entries_in_unit_interval(&self) -> bool {
        let one = BigRational::one();
        self.data
            .iter()
            .all(|e| !e.is_negative() && *e <= one)
    }

    pub fn sub(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.dim, rhs.dim);
        RatMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> RatMatrix {
        RatMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.dim, rhs.dim);
        let dim = self.dim;
        let data: Vec<BigRational> = (0..dim)
            .into_par_iter()
            .flat_map_iter(|i| {
                let lhs_row = self.row(i);
                (0..dim)
                    .map(|j| {
                        let mut acc = BigRational::zero();
                        for (k, a) in lhs_row.iter().enumerate() {
                            if !a.is_zero() {
                                let b = rhs.get(k, j);
                                if !b.is_zero() {
                                    acc += a * b;
                                }
                            }
                        }
                        acc
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        RatMatrix { dim, data }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budgets;

    #[test]
    fn adjacency_squared_counts_two_step_walks() {
        let g = FiniteGraph::cycle(4, &Budgets::default()).unwrap();
        let a = IntMatrix::adjacency(&g);
        assert!(a.is_symmetric());
        let a2 = a.mul(&a);
        // on C_4 every vertex has two 2-step closed walks and two walks to
        // the opposite corner
        assert_eq!(a2.get(0, 0), &BigInt::from(2));
        assert_eq!(a2.get(0, 2), &BigInt::from(2));
        assert_eq!(a2.get(0, 1), &BigInt::zero());
    }

    #[test]
    fn identity_is_multiplicative_unit() {
        let g = FiniteGraph::complete(5, &Budgets::default()).unwrap();
        let a = IntMatrix::adjacency(&g);
        let i = IntMatrix::identity(5);
        assert_eq!(a.mul(&i), a);
        assert_eq!(i.mul(&a), a);
    }

    #[test]
    fn rational_rows_of_transition_matrix_sum_to_one() {
        let g = FiniteGraph::cycle(5, &Budgets::default()).unwrap();
        let p = IntMatrix::adjacency(&g).to_rational(&BigInt::from(2));
        for s in p.row_sums() {
            assert_eq!(s, BigRational::one());
        }
        assert!(p.entries_in_unit_interval());
    }
}
