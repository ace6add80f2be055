//! Randomized and brute-force solvers used to cross-check the constructive
//! witnesses.

use std::collections::HashSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::freealg::{standard_poly, MultilinearPoly};
use crate::linalg::{inverse, Matrix};
use crate::scalar::{FieldSpec, Scalar};
use crate::witness::{solve_bracket, zero_diag_conjugate, JordanFrame, WitnessCertificate};
use crate::Rational;

/// Default slice budget; the command line reads an override from the environment.
pub const DEFAULT_BUDGET: usize = 100;
pub const BUDGET_ENV: &str = "POLYIMAGE_BUDGET";

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub seed: u64,
    /// Number of slice attempts.
    pub budget: usize,
    /// Random entries are drawn from `[-entry_range, entry_range]`.
    pub entry_range: i64,
    pub field: FieldSpec,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { seed: 0, budget: DEFAULT_BUDGET, entry_range: 3, field: FieldSpec::Rationals }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::InvalidInput("budget must be at least 1".into()));
        }
        if self.entry_range < 1 {
            return Err(Error::InvalidInput("entry_range must be at least 1".into()));
        }
        self.field.validate()
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn random_int(rng: &mut ChaCha8Rng, r: i64) -> i64 {
    rng.gen_range(-r..=r)
}

fn random_matrix<F: Field>(rng: &mut ChaCha8Rng, n: usize, r: i64, embed: &impl Fn(i64) -> F) -> Matrix<F> {
    Matrix::from_fn(n, |_, _| embed(random_int(rng, r)))
}

/// Random matrix with pairwise distinct diagonal entries.
fn distinct_diagonal<F: Field>(rng: &mut ChaCha8Rng, n: usize, r: i64, embed: &impl Fn(i64) -> F) -> Matrix<F> {
    let mut m = random_matrix(rng, n, r, embed);
    let mut used = Vec::new();
    for i in 0..n {
        let mut v = random_int(rng, r.max(n as i64));
        while used.contains(&v) {
            v += 1;
        }
        used.push(v);
        m[(i, i)] = embed(v);
    }
    m
}

fn diagonal_only<F: Field>(m: Matrix<F>) -> Matrix<F> {
    Matrix::diagonal(&m.diagonal_entries())
}

/// Shift plus a random diagonal.
fn shift_diagonal<F: Field>(rng: &mut ChaCha8Rng, n: usize, r: i64, embed: &impl Fn(i64) -> F) -> Matrix<F> {
    let mut m = Matrix::shift(n);
    for i in 0..n {
        m[(i, i)] = embed(random_int(rng, r));
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    Random,
    DistinctDiagonal,
    ShiftDiagonal,
    LineSearch,
    LineSearchSuper,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::DistinctDiagonal => "distinct-diagonal",
            Family::ShiftDiagonal => "shift-diagonal",
            Family::LineSearch => "line-search",
            Family::LineSearchSuper => "line-search-super",
        }
    }
}

/// A change of basis: the search runs on `forward * D * back` and maps the
/// arguments home with `back * M * forward`.
struct Frame {
    name: &'static str,
    forward: Matrix<Scalar>,
    back: Matrix<Scalar>,
}

fn frames(d: &Matrix<Scalar>) -> Vec<Frame> {
    let n = d.n();
    let mut out = vec![Frame { name: "given", forward: Matrix::identity(n), back: Matrix::identity(n) }];
    if let Ok((p, _)) = zero_diag_conjugate(d) {
        if let Ok(pinv) = inverse(&p) {
            out.push(Frame { name: "zero-diagonal", forward: p, back: pinv });
        }
    }
    if let Ok(frame) = JordanFrame::of_matrix(d) {
        if let Ok(pinv) = inverse(&frame.p) {
            out.push(Frame { name: "jordan", forward: pinv, back: frame.p });
        }
    }
    out
}

fn validate_ties(m: usize, ties: &[usize]) -> Result<(Vec<usize>, usize)> {
    let ties: Vec<usize> = if ties.is_empty() { (0..m).collect() } else { ties.to_vec() };
    if ties.len() != m {
        return Err(Error::ArityMismatch { expected: m, got: ties.len() });
    }
    let k = ties.iter().max().map_or(0, |&x| x + 1);
    if (0..k).any(|v| !ties.contains(&v)) {
        return Err(Error::InvalidInput("tie pattern must use variables 0..k without gaps".into()));
    }
    Ok((ties, k))
}

/// Fixes random values for all tied variables but one and solves the induced
/// linear system for the remaining slot.
///
/// `ties[s]` is the variable placed in slot `s`; an empty pattern means no
/// ties. Only variables occurring in exactly one slot can be free.
pub fn linear_slice_search(
    f: &MultilinearPoly<Scalar>,
    ties: &[usize],
    target: &Matrix<Scalar>,
    cfg: &SearchConfig,
) -> Result<WitnessCertificate<Scalar>> {
    cfg.validate()?;
    let m = f.degree();
    let n = target.n();
    let (ties, k) = validate_ties(m, ties)?;
    let free_vars: Vec<usize> = (0..k).filter(|&v| ties.iter().filter(|&&t| t == v).count() == 1).collect();
    if free_vars.is_empty() {
        return Err(Error::InvalidInput("every variable is tied; nothing is linear".into()));
    }
    let line_search = ties == [0, 1, 0, 2];
    let frames = frames(target);
    // (frame, family) pairs tried in rotation; the line search only makes
    // sense against a Jordan matrix
    let mut plans = Vec::new();
    for (fi, frame) in frames.iter().enumerate() {
        if line_search && frame.name == "jordan" {
            plans.push((fi, Family::LineSearch));
            plans.push((fi, Family::LineSearchSuper));
        }
        for family in [Family::DistinctDiagonal, Family::ShiftDiagonal, Family::Random] {
            plans.push((fi, family));
        }
    }
    let is_line = |fam: Family| matches!(fam, Family::LineSearch | Family::LineSearchSuper);
    plans.sort_by_key(|&(fi, fam)| (!is_line(fam), fi == 0 && fam == Family::Random));
    let embed = |v: i64| cfg.field.from_i64(v);
    let mut rng = cfg.rng();
    let mut last = String::from("no attempt");
    for attempt in 0..cfg.budget {
        let (fi, family) = plans[attempt % plans.len()];
        let frame = &frames[fi];
        let t = frame.forward.mul(target).mul(&frame.back);
        let free = free_vars[(attempt / plans.len()) % free_vars.len()];
        let values: Option<Vec<Matrix<Scalar>>> = if is_line(family) {
            line_search_values(&mut rng, &t, cfg, family == Family::LineSearchSuper)
        } else {
            Some(
                (0..k)
                    .map(|v| match family {
                        _ if v == free => Matrix::zeros(n),
                        Family::DistinctDiagonal => diagonal_only(distinct_diagonal(&mut rng, n, cfg.entry_range, &embed)),
                        Family::ShiftDiagonal => shift_diagonal(&mut rng, n, cfg.entry_range, &embed),
                        _ => random_matrix(&mut rng, n, cfg.entry_range, &embed),
                    })
                    .collect(),
            )
        };
        let Some(values) = values else {
            last = format!("attempt {attempt}: line search found no admissible parameter");
            continue;
        };
        let free = if is_line(family) { 1 } else { free };
        let slot = ties.iter().position(|&x| x == free).unwrap();
        let mut args: Vec<Matrix<Scalar>> = ties.iter().map(|&v| values[v].clone()).collect();
        match f.solve_slot(slot, &args, &t) {
            Ok(x) => args[slot] = x,
            Err(e) => {
                last = format!("attempt {attempt}: {e}");
                continue;
            }
        }
        let home: Vec<Matrix<Scalar>> = args.iter().map(|a| frame.back.mul(a).mul(&frame.forward)).collect();
        let route = format!("search/{}/{}/attempt{attempt}", frame.name, family.name());
        let cert = WitnessCertificate::new(f.clone(), home, target.clone(), Some(frame.back.clone()), route);
        if cert.verified {
            return Ok(cert);
        }
        last = format!("attempt {attempt}: solution failed verification");
    }
    Err(Error::SearchExhausted { attempts: cfg.budget, detail: last })
}

fn nonzero_int(rng: &mut ChaCha8Rng, r: i64) -> i64 {
    match random_int(rng, r) {
        0 => 1,
        v => v,
    }
}

/// Moves `x` along `x + s(e_p - e_q)` until `sum weights_i / x_i = 0`, with
/// every `x_i` nonzero.
fn balance(rng: &mut ChaCha8Rng, weights: &[Scalar], mut x: Vec<Scalar>) -> Option<Vec<Scalar>> {
    let len = x.len();
    if len < 2 {
        return None;
    }
    if weights.iter().all(|w| w.is_zero()) {
        return Some(x);
    }
    // moving a coordinate with zero weight cannot balance the sum
    let heavy: Vec<usize> = (0..len).filter(|&i| !weights[i].is_zero()).collect();
    let p = heavy[rng.gen_range(0..heavy.len())];
    let mut q = rng.gen_range(0..len - 1);
    if q >= p {
        q += 1;
    }
    let mut rest = Scalar::zero();
    for i in (0..len).filter(|&i| i != p && i != q) {
        rest = rest + weights[i].clone() * x[i].inv()?;
    }
    let (u, w) = (x[p].clone(), x[q].clone());
    let (dp, dq) = (weights[p].clone(), weights[q].clone());
    // dp/(u+s) + dq/(w-s) + rest = 0, cleared of denominators
    let qa = -rest.clone();
    let qb = rest.clone() * (w.clone() - u.clone()) - dp.clone() + dq.clone();
    let qc = rest * u.clone() * w.clone() + dp * w.clone() + dq * u.clone();
    let s = if qa.is_zero() {
        -qc * qb.inv()?
    } else {
        let disc = qb.clone() * qb.clone() - Scalar::from_i64(4) * qa.clone() * qc;
        let root = disc.sqrt_adjoining().ok()?;
        (-qb + root) * (Scalar::from_i64(2) * qa).inv()?
    };
    x[p] = u + s.clone();
    x[q] = w - s;
    if x.iter().any(|v| v.is_zero()) {
        return None;
    }
    Some(x)
}

/// Values `(S, _, C)` against a Jordan matrix `t`, with `[S,C]` upper
/// bidiagonal and balanced so that the `B` slot is solvable.
///
/// `superdiagonal = false` balances the diagonal of `[S,C]` against the
/// diagonal of `t` (the product shape); `true` uses a pure superdiagonal
/// balanced against the negated prefix sums of the diagonal (the bracket
/// shape).
fn line_search_values(
    rng: &mut ChaCha8Rng,
    t: &Matrix<Scalar>,
    cfg: &SearchConfig,
    superdiagonal: bool,
) -> Option<Vec<Matrix<Scalar>>> {
    let n = t.n();
    if n < 2 {
        return None;
    }
    let r = cfg.entry_range;
    let d = t.diagonal_entries();
    let mut y = Matrix::zeros(n);
    if superdiagonal {
        let mut acc = Scalar::zero();
        let weights: Vec<Scalar> = d[..n - 1]
            .iter()
            .map(|x| {
                acc = acc.clone() - x.clone();
                acc.clone()
            })
            .collect();
        let v0 = (0..n - 1).map(|_| Scalar::from_i64(nonzero_int(rng, r))).collect();
        let v = balance(rng, &weights, v0)?;
        for (i, x) in v.into_iter().enumerate() {
            y[(i, i + 1)] = x;
        }
    } else {
        let mut b0: Vec<i64> = (0..n - 1).map(|_| nonzero_int(rng, r)).collect();
        let sum: i64 = b0.iter().sum();
        if sum == 0 {
            return None;
        }
        b0.push(-sum);
        let b = balance(rng, &d, b0.into_iter().map(Scalar::from_i64).collect())?;
        for (i, x) in b.into_iter().enumerate() {
            y[(i, i)] = x;
        }
        for i in 0..n - 1 {
            y[(i, i + 1)] = Scalar::from_i64(nonzero_int(rng, r));
        }
    }
    let shift = Matrix::shift(n);
    let c = solve_bracket(&shift, &y).ok()?;
    Some(vec![shift, Matrix::zeros(n), c])
}

/// Search for `St_4(A, A^2, B, C) = t`, solving linearly for `B`.
pub fn st4_search<F: Field>(t: &Matrix<F>, cfg: &SearchConfig) -> Result<WitnessCertificate<F>> {
    cfg.validate()?;
    let n = t.n();
    let st4 = standard_poly::<F>(4);
    let embed = |v: i64| F::from_i64(v);
    let mut rng = cfg.rng();
    let mut last = String::from("no attempt");
    for attempt in 0..cfg.budget {
        let a = match attempt % 3 {
            0 => shift_diagonal(&mut rng, n, cfg.entry_range, &embed),
            1 => distinct_diagonal(&mut rng, n, cfg.entry_range, &embed),
            _ => random_matrix(&mut rng, n, cfg.entry_range, &embed),
        };
        let c = random_matrix(&mut rng, n, cfg.entry_range, &embed);
        let mut args = vec![a.clone(), a.mul(&a), Matrix::zeros(n), c];
        match st4.solve_slot(2, &args, t) {
            Ok(b) => args[2] = b,
            Err(e) => {
                last = format!("attempt {attempt}: {e}");
                continue;
            }
        }
        let cert = WitnessCertificate::new(st4.clone(), args, t.clone(), None, format!("st4/search/attempt{attempt}"));
        if cert.verified {
            return Ok(cert);
        }
    }
    Err(Error::SearchExhausted { attempts: cfg.budget, detail: last })
}

/// Exact image of a polynomial on `M_n(F_p)`, by enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImageSummary {
    pub n: usize,
    pub p: u64,
    pub tuples: u64,
    pub image_size: usize,
    /// 1 when zero is a value.
    pub zero: usize,
    /// Nonzero scalar values.
    pub scalar: usize,
    /// Trace-zero values that are not scalar.
    pub traceless: usize,
    pub other: usize,
    pub contains_all_traceless: bool,
    /// One of `zero`, `scalars`, `sl_n`, `full`, `other`.
    pub classification: String,
}

/// Default enumeration budget for [`exhaustive_image`].
pub const DEFAULT_IMAGE_BUDGET: u64 = 20_000_000;

/// Enumerates `f` on all `m`-tuples of `M_n(F_p)`.
pub fn exhaustive_image(f: &MultilinearPoly<Rational>, n: usize, p: u64, budget: u64) -> Result<ImageSummary> {
    if !crate::field::is_prime(p) || p > 251 {
        return Err(Error::InvalidField(format!("exhaustive image needs a small prime, got {p}")));
    }
    let m = f.degree();
    let cells = (n * n) as u32;
    let per_matrix = p.checked_pow(cells).ok_or_else(|| Error::BudgetExceeded("matrix count overflows".into()))?;
    let tuples = per_matrix
        .checked_pow(m as u32)
        .filter(|&t| t <= budget)
        .ok_or_else(|| Error::BudgetExceeded(format!("{p}^({}*{m}) tuples exceed {budget}", n * n)))?;
    let reduce = |r: &Rational| -> Result<u64> {
        let pi = p as i128;
        let num = i128::try_from(r.numer()).map_err(|_| Error::Unsupported("coefficient too large".into()))?;
        let den = i128::try_from(r.denom()).map_err(|_| Error::Unsupported("coefficient too large".into()))?;
        let den = den.rem_euclid(pi) as u64;
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok((num.rem_euclid(pi) as u64) * pow_mod(den, p - 2, p) % p)
    };
    let terms: Vec<(Vec<usize>, u64)> = f
        .terms()
        .map(|(perm, c)| reduce(c).map(|c| (perm.clone(), c)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .collect();
    let all: Vec<Vec<u64>> = (0..per_matrix).map(|code| decode(code, n * n, p)).collect();
    let mut image: HashSet<Vec<u64>> = HashSet::new();
    let mut idx = vec![0usize; m];
    if m == 0 {
        return Err(Error::UnsupportedDegree("degree 0".into()));
    }
    loop {
        let args: Vec<&Vec<u64>> = idx.iter().map(|&i| &all[i]).collect();
        image.insert(eval_mod(&terms, &args, n, p));
        let mut pos = 0;
        loop {
            if pos == m {
                return Ok(summarize(&image, n, p, tuples));
            }
            idx[pos] += 1;
            if idx[pos] < all.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn decode(mut code: u64, len: usize, p: u64) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = code % p;
            code /= p;
            d
        })
        .collect()
}

fn mat_mul_mod(a: &[u64], b: &[u64], n: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = (out[i * n + j] + x * b[k * n + j]) % p;
            }
        }
    }
    out
}

fn eval_mod(terms: &[(Vec<usize>, u64)], args: &[&Vec<u64>], n: usize, p: u64) -> Vec<u64> {
    let mut acc = vec![0; n * n];
    for (perm, c) in terms {
        let mut prod = args[perm[0]].clone();
        for &v in &perm[1..] {
            prod = mat_mul_mod(&prod, args[v], n, p);
        }
        for (a, x) in acc.iter_mut().zip(prod) {
            *a = (*a + c * x) % p;
        }
    }
    acc
}

fn summarize(image: &HashSet<Vec<u64>>, n: usize, p: u64, tuples: u64) -> ImageSummary {
    let trace = |m: &Vec<u64>| (0..n).map(|i| m[i * n + i]).sum::<u64>() % p;
    let is_scalar = |m: &Vec<u64>| {
        (0..n).all(|i| (0..n).all(|j| if i == j { m[i * n + i] == m[0] } else { m[i * n + j] == 0 }))
    };
    let (mut zero, mut scalar, mut traceless, mut other) = (0, 0, 0, 0);
    for m in image {
        if m.iter().all(|&x| x == 0) {
            zero += 1;
        } else if is_scalar(m) {
            scalar += 1;
        } else if trace(m) == 0 {
            traceless += 1;
        } else {
            other += 1;
        }
    }
    let cells = (n * n) as u32;
    let total = p.pow(cells) as usize;
    let traceless_total = p.pow(cells - 1) as usize;
    let traceless_in_image = image.iter().filter(|m| trace(m) == 0).count();
    let contains_all_traceless = traceless_in_image == traceless_total;
    let classification = if image.len() == total {
        "full"
    } else if zero == image.len() {
        "zero"
    } else if contains_all_traceless && traceless_in_image == image.len() {
        "sl_n"
    } else if scalar + zero == image.len() && scalar == (p - 1) as usize {
        "scalars"
    } else {
        "other"
    };
    ImageSummary {
        n,
        p,
        tuples,
        image_size: image.len(),
        zero,
        scalar,
        traceless,
        other,
        contains_all_traceless,
        classification: classification.into(),
    }
}
