use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::Field;

use super::solve::{kernel, RowSpace};
use super::{inverse, Matrix};

/// One Jordan block: eigenvalue and size.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanBlock<F> {
    pub eig: F,
    pub size: usize,
}

/// Ordered list of Jordan blocks. The order is significant.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanSpec<F> {
    pub blocks: Vec<JordanBlock<F>>,
}

impl<F: Field> JordanSpec<F> {
    pub fn new(blocks: Vec<(F, usize)>) -> Result<Self> {
        if blocks.is_empty() || blocks.iter().any(|(_, s)| *s == 0) {
            return Err(Error::InvalidInput("Jordan blocks must be nonempty with positive sizes".into()));
        }
        Ok(JordanSpec { blocks: blocks.into_iter().map(|(eig, size)| JordanBlock { eig, size }).collect() })
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.size).sum()
    }

    /// `sum size_j * eig_j`.
    pub fn trace(&self) -> F {
        self.blocks
            .iter()
            .fold(F::zero(), |acc, b| acc + F::from_usize(b.size) * b.eig.clone())
    }

    /// Diagonal entries of the Jordan matrix, position by position.
    pub fn diagonal(&self) -> Vec<F> {
        self.blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.eig.clone(), b.size))
            .collect()
    }

    /// Superdiagonal of the Jordan matrix: ones inside blocks, zeros between.
    pub fn superdiagonal(&self) -> Vec<F> {
        let mut out = Vec::with_capacity(self.n().saturating_sub(1));
        for (k, b) in self.blocks.iter().enumerate() {
            for _ in 1..b.size {
                out.push(F::one());
            }
            if k + 1 < self.blocks.len() {
                out.push(F::zero());
            }
        }
        out
    }

    /// Zero-based position ranges of the blocks.
    pub fn block_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.blocks
            .iter()
            .map(|b| {
                let r = start..start + b.size;
                start += b.size;
                r
            })
            .collect()
    }

    /// Reorders blocks; `order[k]` is the index of the block placed k-th.
    pub fn permuted(&self, order: &[usize]) -> Self {
        JordanSpec { blocks: order.iter().map(|&k| self.blocks[k].clone()).collect() }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> JordanSpec<G> {
        JordanSpec {
            blocks: self.blocks.iter().map(|b| JordanBlock { eig: f(&b.eig), size: b.size }).collect(),
        }
    }
}

/// Block-diagonal matrix with the listed Jordan blocks.
pub fn jordan_matrix<F: Field>(spec: &JordanSpec<F>) -> Matrix<F> {
    let n = spec.n();
    let mut m = Matrix::diagonal(&spec.diagonal());
    for (i, s) in spec.superdiagonal().into_iter().enumerate() {
        m[(i, i + 1)] = s;
    }
    debug_assert_eq!(m.n(), n);
    m
}

type Q = BigRational;

/// Characteristic polynomial `det(xI - A)`, coefficients from degree 0 upward.
pub(crate) fn char_poly(a: &Matrix<Q>) -> Vec<Q> {
    // Faddeev-LeVerrier
    let n = a.n();
    let mut c = vec![Q::zero(); n + 1];
    c[n] = Q::one();
    let mut m = Matrix::<Q>::zeros(n);
    for k in 1..=n {
        m = a.mul(&m).add(&Matrix::scalar(n, c[n - k + 1].clone()));
        let am = a.mul(&m);
        c[n - k] = -am.trace() / Q::from_integer(BigInt::from(k));
    }
    c
}

fn eval_poly(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

/// Divides by `(x - r)`, assuming `r` is a root.
fn deflate(p: &[Q], r: &Q) -> Vec<Q> {
    let deg = p.len() - 1;
    let mut q = vec![Q::zero(); deg];
    let mut carry = Q::zero();
    for k in (1..=deg).rev() {
        carry = &carry * r + &p[k];
        q[k - 1] = carry.clone();
    }
    q
}

const ROOT_SEARCH_LIMIT: u64 = 1_000_000_000_000;

fn divisors(k: &BigInt) -> Result<Vec<u64>> {
    let k = k
        .abs()
        .to_u64()
        .filter(|&v| v <= ROOT_SEARCH_LIMIT)
        .ok_or_else(|| Error::NonSplittingSpectrum(format!("coefficient {k} too large for rational root search")))?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= k {
        if k % d == 0 {
            small.push(d);
            if d * d != k {
                large.push(k / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

/// Rational roots with multiplicity; errors if an irreducible factor of
/// degree two or more remains.
pub(crate) fn rational_roots(p: &[Q]) -> Result<Vec<(Q, usize)>> {
    let mut poly: Vec<Q> = p.to_vec();
    while poly.len() > 1 && poly.last().unwrap().is_zero() {
        poly.pop();
    }
    let mut roots: Vec<(Q, usize)> = Vec::new();
    let mut zero_mult = 0;
    while poly.len() > 1 && poly[0].is_zero() {
        poly.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Q::zero(), zero_mult));
    }
    if poly.len() > 1 {
        let lcm = poly.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = poly.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
        let mut cands: Vec<Q> = Vec::new();
        for num in divisors(&ints[0])? {
            for den in divisors(ints.last().unwrap())? {
                let r = Q::new(BigInt::from(num), BigInt::from(den));
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort_by(|a, b| match a.abs().cmp(&b.abs()) {
            Ordering::Equal => b.cmp(a),
            o => o,
        });
        cands.dedup();
        for r in cands {
            let mut mult = 0;
            while poly.len() > 1 && eval_poly(&poly, &r).is_zero() {
                poly = deflate(&poly, &r);
                mult += 1;
            }
            if mult > 0 {
                roots.push((r, mult));
            }
            if poly.len() == 1 {
                break;
            }
        }
    }
    if poly.len() > 1 {
        return Err(Error::NonSplittingSpectrum(format!(
            "an irreducible factor of degree {} remains",
            poly.len() - 1
        )));
    }
    Ok(roots)
}

/// Jordan form of a matrix whose spectrum is rational.
///
/// Returns `(spec, P)` with `P^{-1} D P = jordan_matrix(spec)`. Eigenvalues are
/// listed by increasing absolute value (positive before negative), blocks of
/// one eigenvalue by decreasing size.
pub fn rational_jordan(d: &Matrix<Q>) -> Result<(JordanSpec<Q>, Matrix<Q>)> {
    let n = d.n();
    let roots = rational_roots(&char_poly(d))?;
    let mut blocks = Vec::new();
    let mut columns: Vec<Vec<Q>> = Vec::new();
    for (lambda, mult) in roots {
        let nil = d.sub(&Matrix::scalar(n, lambda.clone()));
        // kernels of powers until the generalized eigenspace is reached
        let mut kernels: Vec<Vec<Vec<Q>>> = vec![Vec::new()];
        let mut power = Matrix::identity(n);
        while kernels.last().unwrap().len() < mult {
            power = power.mul(&nil);
            let k = kernel(&power.rows(), n);
            if k.len() <= kernels.last().unwrap().len() {
                return Err(Error::Internal("kernel chain stalled".into()));
            }
            kernels.push(k);
        }
        let height = kernels.len() - 1;
        let jumps: Vec<usize> = (0..=height)
            .map(|k| if k == 0 { 0 } else { kernels[k].len() - kernels[k - 1].len() })
            .collect();
        let mut chains: Vec<(Vec<Q>, usize)> = Vec::new();
        for k in (1..=height).rev() {
            let above = if k < height { jumps[k + 1] } else { 0 };
            let needed = jumps[k] - above;
            let mut space = RowSpace::new(n);
            for v in &kernels[k - 1] {
                space.insert(v);
            }
            for (top, len) in &chains {
                let mut w = top.clone();
                for _ in 0..(len - k) {
                    w = nil.mul_vec(&w);
                }
                space.insert(&w);
            }
            let mut found = 0;
            for cand in &kernels[k] {
                if found == needed {
                    break;
                }
                if space.insert(cand) {
                    chains.push((cand.clone(), k));
                    found += 1;
                }
            }
            if found != needed {
                return Err(Error::Internal("could not complete Jordan chains".into()));
            }
        }
        for (top, len) in chains {
            let mut chain = vec![top];
            for _ in 1..len {
                let next = nil.mul_vec(chain.last().unwrap());
                chain.push(next);
            }
            chain.reverse();
            columns.extend(chain);
            blocks.push(JordanBlock { eig: lambda.clone(), size: len });
        }
    }
    let spec = JordanSpec { blocks };
    let p = Matrix::from_columns(&columns);
    let j = inverse(&p)?.mul(d).mul(&p);
    if j != jordan_matrix(&spec) {
        return Err(Error::Internal("Jordan basis check failed".into()));
    }
    Ok((spec, p))
}
