
use crate::error::{Error, Result};
use crate::field::Field;

use super::Matrix;

/// Outcome of [`solve_linear`].
#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution<F> {
    Inconsistent,
    /// One particular solution plus a basis of the kernel.
    Solved { solution: Vec<F>, kernel: Vec<Vec<F>> },
}

impl<F> LinearSolution<F> {
    pub fn solution(self) -> Option<Vec<F>> {
        match self {
            LinearSolution::Solved { solution, .. } => Some(solution),
            LinearSolution::Inconsistent => None,
        }
    }
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref<F: Field>(rows: &mut [Vec<F>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = x.clone() * inv.clone();
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.clone() - factor.clone() * p.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn check_fields<F: Field>(rows: &[Vec<F>], rhs: &[F]) -> Result<()> {
    let mut reference: Option<&F> = None;
    for x in rows.iter().flatten().chain(rhs) {
        if x.is_zero() {
            continue;
        }
        match reference {
            None => reference = Some(x),
            Some(r) if !r.compatible(x) => {
                return Err(Error::FieldMismatch(format!("{r} vs {x}")));
            }
            _ => {}
        }
    }
    Ok(())
}

/// Solves `M x = v` exactly by Gauss-Jordan elimination.
///
/// `m` is given by rows; all rows must have the same length.
pub fn solve_linear<F: Field>(m: &[Vec<F>], v: &[F]) -> Result<LinearSolution<F>> {
    if m.is_empty() {
        return Err(Error::InvalidInput("system without equations".into()));
    }
    let cols = m[0].len();
    if m.iter().any(|r| r.len() != cols) || v.len() != m.len() {
        return Err(Error::DimensionMismatch("ragged linear system".into()));
    }
    check_fields(m, v)?;
    let mut aug: Vec<Vec<F>> = m
        .iter()
        .zip(v)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return Ok(LinearSolution::Inconsistent);
    }
    let mut solution = vec![F::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        solution[c] = aug[r][cols].clone();
    }
    let kernel = kernel_from_rref(&aug, &pivots, cols);
    Ok(LinearSolution::Solved { solution, kernel })
}

fn kernel_from_rref<F: Field>(rows: &[Vec<F>], pivots: &[usize], cols: usize) -> Vec<Vec<F>> {
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -rows[r][f].clone();
            }
            v
        })
        .collect()
}

/// Basis of the right kernel of `m` (rows of length `cols`).
pub fn kernel<F: Field>(m: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let mut rows = m.to_vec();
    let pivots = rref(&mut rows, cols);
    kernel_from_rref(&rows, &pivots, cols)
}

/// Rank of a list of vectors.
pub fn rank<F: Field>(vectors: &[Vec<F>]) -> usize {
    match vectors.first() {
        None => 0,
        Some(v) => {
            let mut rows = vectors.to_vec();
            rref(&mut rows, v.len()).len()
        }
    }
}

/// Exact inverse; fails on singular input.
pub fn inverse<F: Field>(a: &Matrix<F>) -> Result<Matrix<F>> {
    let n = a.n();
    let mut aug: Vec<Vec<F>> = a
        .rows()
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            row
        })
        .collect();
    let pivots = rref(&mut aug, n);
    if pivots.len() < n {
        return Err(Error::SingularMatrix);
    }
    Ok(Matrix::from_fn(n, |i, j| aug[i][n + j].clone()))
}

/// Incrementally maintained row space with exact membership tests.
#[derive(Clone, Debug)]
pub struct RowSpace<F> {
    dim: usize,
    /// Echelon rows, each normalized with a leading one at `pivots[k]`.
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> RowSpace<F> {
    pub fn new(dim: usize) -> Self {
        RowSpace { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let factor = w[p].clone();
            for (x, r) in w.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() - factor.clone() * r.clone();
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.dim);
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns whether it enlarged the space.
    pub fn insert(&mut self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.dim);
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("nonzero");
        let w: Vec<F> = w.into_iter().map(|x| x * inv.clone()).collect();
        // keep earlier rows reduced against the new pivot
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let factor = row[p].clone();
                for (x, r) in row.iter_mut().zip(&w) {
                    *x = x.clone() - factor.clone() * r.clone();
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::Zero;
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(v: i64) -> Q {
        Q::from_integer(BigInt::from(v))
    }

    #[test]
    fn identity_system() {
        let m = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
        let v = vec![q(3), q(-7)];
        match solve_linear(&m, &v).unwrap() {
            LinearSolution::Solved { solution, kernel } => {
                assert_eq!(solution, v);
                assert!(kernel.is_empty());
            }
            LinearSolution::Inconsistent => panic!("identity system is consistent"),
        }
    }

    #[test]
    fn zero_equals_one_is_inconsistent() {
        let m = vec![vec![q(0)]];
        assert_eq!(solve_linear(&m, &[q(1)]).unwrap(), LinearSolution::Inconsistent);
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &m {
                let dot = row.iter().zip(v).fold(q(0), |acc, (a, b)| acc + a * b);
                assert_eq!(dot, q(0));
            }
        }
    }

    #[test]
    fn row_space_membership() {
        let mut rs = RowSpace::new(3);
        assert!(rs.insert(&[q(1), q(1), q(0)]));
        assert!(rs.insert(&[q(0), q(1), q(1)]));
        assert!(!rs.insert(&[q(1), q(2), q(1)]));
        assert!(rs.contains(&[q(2), q(0), q(-2)]));
        assert!(!rs.contains(&[q(0), q(0), q(1)]));
        assert_eq!(rs.rank(), 2);
    }

    proptest! {
        #[test]
        fn square_solve_substitutes_back(
            entries in proptest::collection::vec(-4i64..=4, 16),
            rhs in proptest::collection::vec(-4i64..=4, 4),
        ) {
            let a = Matrix::from_fn(4, |i, j| q(entries[i * 4 + j]));
            let v: Vec<Q> = rhs.iter().map(|&x| q(x)).collect();
            match solve_linear(&a.rows(), &v).unwrap() {
                LinearSolution::Solved { solution, kernel } => {
                    prop_assert_eq!(a.mul_vec(&solution), v);
                    for k in kernel {
                        prop_assert!(a.mul_vec(&k).iter().all(|x| x.is_zero()));
                    }
                }
                LinearSolution::Inconsistent => prop_assert!(inverse(&a).is_err()),
            }
            if let Ok(inv) = inverse(&a) {
                prop_assert_eq!(a.mul(&inv), Matrix::identity(4));
            }
        }
    }
}
