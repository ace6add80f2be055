//! Seeded generators for test and acceptance instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::freealg::{permutations, MultilinearPoly};
use crate::linalg::{jordan_matrix, JordanSpec, Matrix};
use crate::scalar::Scalar;
use crate::Rational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(rng: &mut ChaCha8Rng, r: i64) -> i64 {
    rng.gen_range(-r..=r)
}

pub fn nonzero(rng: &mut ChaCha8Rng, r: i64) -> i64 {
    loop {
        let v = int(rng, r);
        if v != 0 {
            return v;
        }
    }
}

pub fn matrix(rng: &mut ChaCha8Rng, n: usize, r: i64) -> Matrix<Scalar> {
    Matrix::from_fn(n, |_, _| Scalar::from_i64(int(rng, r)))
}

pub fn trace_zero(rng: &mut ChaCha8Rng, n: usize, r: i64) -> Matrix<Scalar> {
    let mut m = matrix(rng, n, r);
    let t = m.trace();
    m[(n - 1, n - 1)] = m[(n - 1, n - 1)].clone() - t;
    m
}

/// Integer matrix of determinant one with its inverse.
pub fn unimodular(rng: &mut ChaCha8Rng, n: usize) -> (Matrix<Scalar>, Matrix<Scalar>) {
    let mut p = Matrix::identity(n);
    let mut pinv = Matrix::identity(n);
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = nonzero(rng, 2);
        let mut e = Matrix::identity(n);
        e[(i, j)] = Scalar::from_i64(c);
        let mut einv = Matrix::identity(n);
        einv[(i, j)] = Scalar::from_i64(-c);
        p = p.mul(&e);
        pinv = einv.mul(&pinv);
    }
    (p, pinv)
}

/// Shapes of trace-zero Jordan data, one per branch of the diagonal plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecKind {
    Nilpotent,
    TwoBlocks,
    /// At least three blocks, generic head and penultimate eigenvalue.
    ManyGeneric,
    /// Penultimate eigenvalue zero.
    ManyZeroPenultimate,
    /// Head contributes nothing to the trace.
    ManyZeroHead,
}

impl SpecKind {
    pub const ALL: [SpecKind; 5] = [
        SpecKind::Nilpotent,
        SpecKind::TwoBlocks,
        SpecKind::ManyGeneric,
        SpecKind::ManyZeroPenultimate,
        SpecKind::ManyZeroHead,
    ];
}

fn composition(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
    cuts.sort();
    let mut parts = Vec::with_capacity(k);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(n)) {
        parts.push(c - prev);
        prev = c;
    }
    parts
}

fn ratio(num: i64, den: usize) -> Scalar {
    Scalar::from_ratio(num, den as i64)
}

/// Random trace-zero Jordan data of the requested shape, `n >= 3`.
pub fn jordan_spec(rng: &mut ChaCha8Rng, n: usize, kind: SpecKind) -> JordanSpec<Scalar> {
    let zero = Scalar::from_i64(0);
    let blocks: Vec<(Scalar, usize)> = match kind {
        SpecKind::Nilpotent => {
            // at least one block of size two so that the target is nonzero
            let k = rng.gen_range(1..n);
            composition(rng, n, k).into_iter().map(|m| (zero.clone(), m)).collect()
        }
        SpecKind::TwoBlocks => {
            let sizes = composition(rng, n, 2);
            let d1 = nonzero(rng, 3);
            vec![
                (Scalar::from_i64(d1), sizes[0]),
                (ratio(-d1 * sizes[0] as i64, sizes[1]), sizes[1]),
            ]
        }
        SpecKind::ManyGeneric | SpecKind::ManyZeroPenultimate | SpecKind::ManyZeroHead => {
            let k = rng.gen_range(3..=n);
            let sizes = composition(rng, n, k);
            let mut eig: Vec<i64> = vec![0; k];
            loop {
                for e in eig.iter_mut().take(k - 2) {
                    *e = if kind == SpecKind::ManyZeroHead { 0 } else { int(rng, 3) };
                }
                eig[k - 2] = if kind == SpecKind::ManyZeroPenultimate { 0 } else { nonzero(rng, 3) };
                let head: i64 = (0..k - 2).map(|j| eig[j] * sizes[j] as i64).sum();
                if kind != SpecKind::ManyZeroHead && head == 0 {
                    continue;
                }
                break;
            }
            let partial: i64 = (0..k - 1).map(|j| eig[j] * sizes[j] as i64).sum();
            let mut blocks: Vec<(Scalar, usize)> =
                (0..k - 1).map(|j| (Scalar::from_i64(eig[j]), sizes[j])).collect();
            blocks.push((ratio(-partial, sizes[k - 1]), sizes[k - 1]));
            blocks
        }
    };
    JordanSpec::new(blocks).expect("valid block sizes")
}

/// Random nonzero trace-zero matrix with rational spectrum: Jordan data of a
/// random shape conjugated by a random unimodular matrix.
pub fn rational_spectrum_target(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Scalar> {
    let kind = SpecKind::ALL[rng.gen_range(0..SpecKind::ALL.len())];
    let j = jordan_matrix(&jordan_spec(rng, n, kind));
    let (p, pinv) = unimodular(rng, n);
    p.mul(&j).mul(&pinv)
}

/// Random nonzero multilinear polynomial with at most `terms` monomials.
pub fn multilinear(rng: &mut ChaCha8Rng, m: usize, terms: usize, r: i64) -> MultilinearPoly<Rational> {
    let perms = permutations(m);
    loop {
        let chosen: Vec<(Vec<usize>, Rational)> = (0..terms.max(1))
            .map(|_| {
                let p = perms[rng.gen_range(0..perms.len())].clone();
                (p, Rational::from_integer(int(rng, r).into()))
            })
            .collect();
        let f = MultilinearPoly::from_terms(m, chosen).expect("valid permutations");
        if !f.is_zero() {
            return f;
        }
    }
}
