//! Exact dense square matrices, linear solving and rational Jordan forms.

mod jordan;
mod solve;

pub use jordan::{jordan_matrix, rational_jordan, JordanBlock, JordanSpec};
pub use solve::{inverse, kernel, rank, solve_linear, LinearSolution, RowSpace};

use std::fmt;
use std::ops::{Index, IndexMut};



use crate::error::{Error, Result};
use crate::field::Field;

/// An `n x n` matrix over `F`, stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    n: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be positive");
        Matrix { n, data: vec![F::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, F::one())
    }

    pub fn scalar(n: usize, c: F) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        assert!(n >= 1, "matrix dimension must be positive");
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix rows must have length n".into()));
        }
        let m = Matrix { n, data: rows.into_iter().flatten().collect() };
        m.check_field()?;
        Ok(m)
    }

    pub fn diagonal(entries: &[F]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n);
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    /// The matrix unit `e_{ij}` (zero-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m[(i, j)] = F::one();
        m
    }

    /// The nilpotent shift `sum e_{i,i+1}`.
    pub fn shift(n: usize) -> Self {
        Self::from_fn(n, |i, j| if j == i + 1 { F::one() } else { F::zero() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<F>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<G: Field>(&self, f: impl Fn(&F) -> Option<G>) -> Option<Matrix<G>> {
        Some(Matrix { n: self.n, data: self.data.iter().map(f).collect::<Option<Vec<_>>>()? })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Whether the matrix is `c I` for some `c`.
    pub fn is_scalar(&self) -> bool {
        let c = &self[(0, 0)];
        (0..self.n).all(|i| (0..self.n).all(|j| if i == j { self[(i, j)] == *c } else { self[(i, j)].is_zero() }))
    }

    pub fn trace(&self) -> F {
        (0..self.n).fold(F::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn diagonal_entries(&self) -> Vec<F> {
        (0..self.n).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| c.clone() * x.clone())
    }

    fn check_field(&self) -> Result<()> {
        if let Some(first) = self.data.first() {
            if let Some(bad) = self.data.iter().find(|x| !first.compatible(x)) {
                return Err(Error::FieldMismatch(format!("entries {first} and {bad}")));
            }
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.n, other.n)));
        }
        if let (Some(a), Some(b)) = (self.data.first(), other.data.first()) {
            // compare a representative pair; entries within one matrix already agree
            let a = self.data.iter().find(|x| !x.is_zero()).unwrap_or(a);
            let b = other.data.iter().find(|x| !x.is_zero()).unwrap_or(b);
            if !a.compatible(b) {
                return Err(Error::FieldMismatch(format!("{a} vs {b}")));
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    let cell = &mut out.data[i * n + j];
                    *cell = cell.clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(self.n), |acc, _| acc.mul(self))
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        (0..self.n)
            .map(|i| (0..self.n).fold(F::zero(), |acc, j| acc + self[(i, j)].clone() * v[j].clone()))
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.n).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn from_columns(cols: &[Vec<F>]) -> Self {
        Self::from_fn(cols.len(), |i, j| cols[j][i].clone())
    }

    /// Row-major flattening, the coordinate vector used by slot solvers.
    pub fn to_vec(&self) -> Vec<F> {
        self.data.clone()
    }

    pub fn from_vec(n: usize, v: Vec<F>) -> Self {
        assert_eq!(v.len(), n * n);
        Matrix { n, data: v }
    }

    pub fn inverse(&self) -> Result<Self> {
        inverse(self)
    }

    /// `P A P^{-1}`.
    pub fn conjugate_by(&self, p: &Self) -> Result<Self> {
        conjugate(self, p)
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.n + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.n + j]
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.data.chunks(self.n).enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Binary matrix operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatOp {
    Add,
    Sub,
    Mul,
    Commutator,
}

/// Checked matrix arithmetic.
pub fn mat_arith<F: Field>(a: &Matrix<F>, b: &Matrix<F>, op: MatOp) -> Result<Matrix<F>> {
    a.check_same_shape(b)?;
    Ok(match op {
        MatOp::Add => a.add(b),
        MatOp::Sub => a.sub(b),
        MatOp::Mul => a.mul(b),
        MatOp::Commutator => a.commutator(b),
    })
}

/// `P A P^{-1}`; fails if `P` is singular.
pub fn conjugate<F: Field>(a: &Matrix<F>, p: &Matrix<F>) -> Result<Matrix<F>> {
    a.check_same_shape(p)?;
    let pinv = inverse(p)?;
    Ok(p.mul(a).mul(&pinv))
}

/// The matrix unit `e_{ij}` with one-based indices.
pub fn matrix_unit<F: Field>(n: usize, i: usize, j: usize) -> Result<Matrix<F>> {
    if n == 0 || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::IndexOutOfRange(format!("e_({i},{j}) in dimension {n}")));
    }
    Ok(Matrix::unit(n, i - 1, j - 1))
}

/// Permutation matrix sending basis vector `e_j` to `e_{perm[j]}`.
pub fn permutation_matrix<F: Field>(perm: &[usize]) -> Matrix<F> {
    let n = perm.len();
    let mut m = Matrix::zeros(n);
    for (j, &i) in perm.iter().enumerate() {
        m[(i, j)] = F::one();
    }
    m
}

impl<F: Field> Matrix<F> {
    /// Sum of `c_k A_k`.
    pub fn linear_combination(terms: &[(F, &Matrix<F>)], n: usize) -> Matrix<F> {
        terms.iter().fold(Matrix::zeros(n), |acc, (c, m)| acc.add(&m.scale(c)))
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar() && self[(0, 0)].is_one()
    }
}
