//! Multilinear polynomials in noncommuting variables.

mod hall;
mod parse;

pub use hall::{hall_basis, hall_decompose4, HallDecomposition};
pub use parse::{parse_poly, parse_poly_in, Word, WordPoly};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{solve_linear, LinearSolution, Matrix};

/// `sum_sigma alpha_sigma x_{sigma(1)} ... x_{sigma(m)}`.
///
/// Keys are permutations in one-line notation, zero-based. Only nonzero
/// coefficients are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MultilinearPoly<F> {
    m: usize,
    coeffs: BTreeMap<Vec<usize>, F>,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Sign of a permutation as `+1` or `-1`.
pub fn permutation_sign(p: &[usize]) -> i64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = p[k];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// All permutations of `0..m` in lexicographic order.
pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..m).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..m).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

impl<F: Field> MultilinearPoly<F> {
    /// The zero polynomial of degree `m`.
    pub fn zero(m: usize) -> Self {
        MultilinearPoly { m, coeffs: BTreeMap::new() }
    }

    /// Builds from `(permutation, coefficient)` pairs, merging repeats.
    pub fn from_terms(m: usize, terms: impl IntoIterator<Item = (Vec<usize>, F)>) -> Result<Self> {
        let mut f = Self::zero(m);
        for (perm, c) in terms {
            if perm.len() != m || !is_permutation(&perm) {
                return Err(Error::NotMultilinear(format!("{perm:?} is not a permutation of {m} variables")));
            }
            f.add_term(perm, c);
        }
        Ok(f)
    }

    fn add_term(&mut self, perm: Vec<usize>, c: F) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(perm) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &F)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of the monomial `x_{perm(1)} ... x_{perm(m)}` (zero-based).
    pub fn coeff(&self, perm: &[usize]) -> F {
        self.coeffs.get(perm).cloned().unwrap_or_else(F::zero)
    }

    /// Coefficient vector over all permutations in lexicographic order.
    pub fn coeff_vector(&self) -> Vec<F> {
        permutations(self.m).iter().map(|p| self.coeff(p)).collect()
    }

    pub fn coefficient_sum(&self) -> F {
        self.coeffs.values().fold(F::zero(), |acc, c| acc + c.clone())
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(self.m);
        for (p, a) in &self.coeffs {
            out.add_term(p.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "degree mismatch");
        let mut out = self.clone();
        for (p, a) in &other.coeffs {
            out.add_term(p.clone(), a.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> MultilinearPoly<G> {
        let mut out = MultilinearPoly::zero(self.m);
        for (p, a) in &self.coeffs {
            out.add_term(p.clone(), f(a));
        }
        out
    }

    pub fn try_map<G: Field>(&self, f: impl Fn(&F) -> Option<G>) -> Option<MultilinearPoly<G>> {
        let mut out = MultilinearPoly::zero(self.m);
        for (p, a) in &self.coeffs {
            out.add_term(p.clone(), f(a)?);
        }
        Some(out)
    }

    /// Renames variables: `x_k` becomes `x_{tau(k)}` (zero-based).
    pub fn rename(&self, tau: &[usize]) -> Self {
        assert!(tau.len() == self.m && is_permutation(tau));
        let mut out = Self::zero(self.m);
        for (p, a) in &self.coeffs {
            out.add_term(p.iter().map(|&k| tau[k]).collect(), a.clone());
        }
        out
    }

    /// Product `self(x_1..x_m) * other(x_{m+1}..x_{m+k})`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.m + other.m);
        for (p, a) in &self.coeffs {
            for (q, b) in &other.coeffs {
                let mut w = p.clone();
                w.extend(q.iter().map(|&k| k + self.m));
                out.add_term(w, a.clone() * b.clone());
            }
        }
        out
    }

    /// Sets `x_i := 1` (one-based `i`) and relabels the remaining variables.
    pub fn substitute_one(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.m {
            return Err(Error::IndexOutOfRange(format!("variable x{i} of a degree {} polynomial", self.m)));
        }
        let drop = i - 1;
        let mut out = Self::zero(self.m - 1);
        for (p, a) in &self.coeffs {
            let w: Vec<usize> = p
                .iter()
                .filter(|&&k| k != drop)
                .map(|&k| if k > drop { k - 1 } else { k })
                .collect();
            out.add_term(w, a.clone());
        }
        Ok(out)
    }

    /// Whether every single-variable substitution `x_i := 1` vanishes.
    pub fn is_proper(&self) -> bool {
        (1..=self.m).all(|i| self.substitute_one(i).map(|g| g.is_zero()).unwrap_or(false))
    }

    fn check_args(&self, args: &[Matrix<F>]) -> Result<usize> {
        if args.len() != self.m {
            return Err(Error::ArityMismatch { expected: self.m, got: args.len() });
        }
        let Some(first) = args.first() else {
            return Err(Error::InvalidInput("cannot evaluate a polynomial without variables".into()));
        };
        let n = first.n();
        if args.iter().any(|a| a.n() != n) {
            return Err(Error::DimensionMismatch("arguments of different sizes".into()));
        }
        Ok(n)
    }

    /// `sum_sigma alpha_sigma A_{sigma(1)} ... A_{sigma(m)}`.
    pub fn evaluate(&self, args: &[Matrix<F>]) -> Result<Matrix<F>> {
        let n = self.check_args(args)?;
        check_arg_fields(args)?;
        Ok(self.evaluate_unchecked(args, n))
    }

    pub(crate) fn evaluate_unchecked(&self, args: &[Matrix<F>], n: usize) -> Matrix<F> {
        // keys are sorted, so consecutive monomials share prefixes
        let mut prefix: Vec<Matrix<F>> = Vec::with_capacity(self.m + 1);
        prefix.push(Matrix::identity(n));
        let mut last: &[usize] = &[];
        let mut acc = Matrix::zeros(n);
        for (p, a) in &self.coeffs {
            let common = p.iter().zip(last).take_while(|(x, y)| x == y).count();
            prefix.truncate(common + 1);
            let mut dead = prefix.last().unwrap().is_zero();
            for &k in &p[common..] {
                if dead {
                    prefix.push(Matrix::zeros(n));
                    continue;
                }
                let next = prefix.last().unwrap().mul(&args[k]);
                dead = next.is_zero();
                prefix.push(next);
            }
            if !dead {
                acc = acc.add(&prefix[self.m].scale(a));
            }
            last = p;
        }
        acc
    }

    /// The linear map of the free slot (zero-based) as `n^2 x n^2` rows,
    /// in row-major coordinates, with the other arguments fixed.
    pub fn slot_operator(&self, slot: usize, args: &[Matrix<F>]) -> Result<Vec<Vec<F>>> {
        let n = self.check_args(args)?;
        if slot >= self.m {
            return Err(Error::IndexOutOfRange(format!("slot {} of {}", slot + 1, self.m)));
        }
        // group monomials by the word to the left and right of the slot
        let mut sides: Vec<(F, Matrix<F>, Matrix<F>)> = Vec::new();
        let mut cache: BTreeMap<Vec<usize>, Matrix<F>> = BTreeMap::new();
        let mut word = |w: &[usize]| -> Matrix<F> {
            cache
                .entry(w.to_vec())
                .or_insert_with(|| w.iter().fold(Matrix::identity(n), |acc, &k| acc.mul(&args[k])))
                .clone()
        };
        for (p, a) in &self.coeffs {
            let pos = p.iter().position(|&k| k == slot).unwrap();
            let l = word(&p[..pos]);
            let r = word(&p[pos + 1..]);
            if !l.is_zero() && !r.is_zero() {
                sides.push((a.clone(), l, r));
            }
        }
        let nn = n * n;
        let mut rows = vec![vec![F::zero(); nn]; nn];
        for (a, l, r) in &sides {
            // (L E_kl R)_ij = L_ik R_lj
            for i in 0..n {
                for k in 0..n {
                    let lik = &l[(i, k)];
                    if lik.is_zero() {
                        continue;
                    }
                    let alik = a.clone() * lik.clone();
                    for lcol in 0..n {
                        for j in 0..n {
                            let rlj = &r[(lcol, j)];
                            if rlj.is_zero() {
                                continue;
                            }
                            let cell = &mut rows[i * n + j][k * n + lcol];
                            *cell = cell.clone() + alik.clone() * rlj.clone();
                        }
                    }
                }
            }
        }
        Ok(rows)
    }

    /// Solves `f(args with X at slot) = target` for `X`. The entry of `args`
    /// at `slot` (zero-based) is ignored.
    pub fn solve_slot(&self, slot: usize, args: &[Matrix<F>], target: &Matrix<F>) -> Result<Matrix<F>> {
        let rows = self.slot_operator(slot, args)?;
        let n = target.n();
        if args[0].n() != n {
            return Err(Error::DimensionMismatch("target and arguments differ in size".into()));
        }
        match solve_linear(&rows, &target.to_vec())? {
            LinearSolution::Solved { solution, .. } => Ok(Matrix::from_vec(n, solution)),
            LinearSolution::Inconsistent => Err(Error::TargetNotInSlice),
        }
    }
}

fn check_arg_fields<F: Field>(args: &[Matrix<F>]) -> Result<()> {
    let mut reference: Option<&F> = None;
    for a in args {
        for x in a.entries() {
            if x.is_zero() {
                continue;
            }
            match reference {
                None => reference = Some(x),
                Some(r) if !r.compatible(x) => return Err(Error::FieldMismatch(format!("{r} vs {x}"))),
                _ => {}
            }
        }
    }
    Ok(())
}

/// `St_k`, the alternating sum over all orderings.
pub fn standard_poly<F: Field>(k: usize) -> MultilinearPoly<F> {
    assert!(k >= 1);
    let mut f = MultilinearPoly::zero(k);
    for p in permutations(k) {
        let s = permutation_sign(&p);
        f.add_term(p, F::from_i64(s));
    }
    f
}

/// `[x_1, x_2]`.
pub fn commutator_poly<F: Field>() -> MultilinearPoly<F> {
    standard_poly(2)
}

/// `[x1,x2][x3,x4] + lambda [x3,x4][x1,x2]`.
///
/// Evaluated on `(A, B, A, C)` this is `[A,B][A,C] + lambda [A,C][A,B]`.
pub fn two_commutator_poly<F: Field>(lambda: &F) -> MultilinearPoly<F> {
    let c: MultilinearPoly<F> = commutator_poly();
    let p = c.concat(&c);
    p.add(&p.rename(&[2, 3, 0, 1]).scale(lambda))
}

/// Whether some permutation has a nonzero coefficient; returns the first one.
pub fn leading_term<F: Field>(f: &MultilinearPoly<F>) -> Option<(Vec<usize>, F)> {
    f.terms().next().map(|(p, a)| (p.clone(), a.clone()))
}
