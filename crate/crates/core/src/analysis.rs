//! Identity and central-polynomial checks, spans of images, certificate
//! verification.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::freealg::MultilinearPoly;
use crate::linalg::{Matrix, RowSpace};
use crate::witness::{elementary_tuple, WitnessCertificate};
use crate::FBig;

/// Default cap on `(n^2)^m` for exhaustive checks.
pub const DEFAULT_EXHAUSTIVE_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    /// Exhaustive when within budget, randomized otherwise.
    Auto,
    Exhaustive,
    Randomized,
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub mode: CheckMode,
    pub budget: u64,
    pub samples: usize,
    pub seed: u64,
    pub entry_range: i64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { mode: CheckMode::Auto, budget: DEFAULT_EXHAUSTIVE_BUDGET, samples: 200, seed: 0, entry_range: 3 }
    }
}

/// Arguments and value refuting a property.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample<F: Field> {
    pub args: Vec<Matrix<F>>,
    pub value: Matrix<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome<F: Field> {
    pub holds: bool,
    /// `false` only for a randomized "probably holds".
    pub certain: bool,
    pub mode: CheckMode,
    /// Size of the unit-tuple domain (exhaustive) or samples drawn (randomized).
    pub evaluations: u64,
    pub counterexample: Option<Counterexample<F>>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Property {
    Identity,
    Central,
}

impl Property {
    fn holds_for<F: Field>(self, value: &Matrix<F>) -> bool {
        match self {
            Property::Identity => value.is_zero(),
            Property::Central => value.is_scalar(),
        }
    }
}

/// Whether `f` vanishes on `M_n`.
pub fn is_identity<F: Field>(f: &MultilinearPoly<F>, n: usize, cfg: &CheckConfig) -> Result<CheckOutcome<F>> {
    check(f, n, cfg, Property::Identity)
}

/// Whether every value of `f` on `M_n` is a scalar matrix.
pub fn is_central<F: Field>(f: &MultilinearPoly<F>, n: usize, cfg: &CheckConfig) -> Result<CheckOutcome<F>> {
    check(f, n, cfg, Property::Central)
}

fn unit_tuples(n: usize, m: usize) -> Option<u64> {
    ((n * n) as u64).checked_pow(m as u32)
}

fn check<F: Field>(f: &MultilinearPoly<F>, n: usize, cfg: &CheckConfig, prop: Property) -> Result<CheckOutcome<F>> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let total = unit_tuples(n, f.degree());
    let within = total.is_some_and(|t| t <= cfg.budget);
    match cfg.mode {
        CheckMode::Exhaustive if !within => Err(Error::BudgetExceeded(format!(
            "(n^2)^m = {}^{} unit tuples exceed {}",
            n * n,
            f.degree(),
            cfg.budget
        ))),
        CheckMode::Exhaustive | CheckMode::Auto if within => Ok(exhaustive(f, n, total.unwrap(), prop)),
        _ => randomized(f, n, cfg, prop),
    }
}

/// Lehmer rank of a permutation of `0..m`, as an index into `coeff_vector`.
struct Ranker {
    factorials: Vec<usize>,
}

impl Ranker {
    fn new(m: usize) -> Self {
        let mut factorials = vec![1; m + 1];
        for k in 1..=m {
            factorials[k] = factorials[k - 1] * k;
        }
        Ranker { factorials }
    }

    /// Rank contribution of placing `v` at position `pos` given the `used` mask.
    fn step(&self, m: usize, pos: usize, v: usize, used: u64) -> usize {
        let smaller_unused = (!used & ((1u64 << v) - 1)).count_ones() as usize;
        smaller_unused * self.factorials[m - 1 - pos]
    }
}

struct TrailSearch<'a, F> {
    m: usize,
    n: usize,
    coeffs: &'a [F],
    ranker: &'a Ranker,
    edges: Vec<(usize, usize)>,
    value: Vec<F>,
}

impl<F: Field> TrailSearch<'_, F> {
    fn dfs(&mut self, start: usize, at: usize, pos: usize, used: u64, rank: usize) {
        if pos == self.m {
            let c = &self.coeffs[rank];
            if !c.is_zero() {
                let idx = start * self.n + at;
                self.value[idx] = self.value[idx].clone() + c.clone();
            }
            return;
        }
        for s in 0..self.m {
            if used >> s & 1 == 1 || self.edges[s].0 != at {
                continue;
            }
            let r = rank + self.ranker.step(self.m, pos, s, used);
            let to = self.edges[s].1;
            self.dfs(start, to, pos + 1, used | 1 << s, r);
        }
    }
}

/// `f` on the unit tuple with slot `k` holding `e_{edges[k]}`.
fn eval_units<F: Field>(coeffs: &[F], ranker: &Ranker, n: usize, edges: Vec<(usize, usize)>) -> Vec<F> {
    let m = edges.len();
    let mut balance = vec![0i64; n];
    for &(i, j) in &edges {
        balance[i] += 1;
        balance[j] -= 1;
    }
    let plus: Vec<usize> = (0..n).filter(|&v| balance[v] > 0).collect();
    let minus = balance.iter().filter(|&&b| b < 0).count();
    let eulerian = (plus.is_empty() && minus == 0) || (plus.len() == 1 && balance[plus[0]] == 1 && minus == 1);
    let mut search = TrailSearch { m, n, coeffs, ranker, edges, value: vec![F::zero(); n * n] };
    if !eulerian {
        return search.value;
    }
    let starts: Vec<usize> = if plus.is_empty() { (0..n).collect() } else { plus };
    for v in starts {
        search.dfs(v, v, 0, 0, 0);
    }
    search.value
}

fn decode_tuple(mut code: u64, n: usize, m: usize) -> Vec<(usize, usize)> {
    let nn = (n * n) as u64;
    (0..m)
        .map(|_| {
            let c = (code % nn) as usize;
            code /= nn;
            (c / n, c % n)
        })
        .collect()
}

fn exhaustive<F: Field>(f: &MultilinearPoly<F>, n: usize, total: u64, prop: Property) -> CheckOutcome<F> {
    let m = f.degree();
    let coeffs = f.coeff_vector();
    let ranker = Ranker::new(m);
    let hit = (0..total).into_par_iter().find_map_first(|code| {
        let edges = decode_tuple(code, n, m);
        let value = Matrix::from_vec(n, eval_units(&coeffs, &ranker, n, edges.clone()));
        if prop.holds_for(&value) {
            None
        } else {
            let args = edges.iter().map(|&(i, j)| Matrix::unit(n, i, j)).collect();
            Some(Counterexample { args, value })
        }
    });
    CheckOutcome {
        holds: hit.is_none(),
        certain: true,
        mode: CheckMode::Exhaustive,
        evaluations: total,
        counterexample: hit,
    }
}

fn random_args(rng: &mut ChaCha8Rng, n: usize, m: usize, r: i64) -> Vec<Vec<i64>> {
    (0..m).map(|_| (0..n * n).map(|_| rng.gen_range(-r..=r)).collect()).collect()
}

fn to_matrices<G: Field>(raw: &[Vec<i64>], n: usize) -> Vec<Matrix<G>> {
    raw.iter().map(|v| Matrix::from_vec(n, v.iter().map(|&x| G::from_i64(x)).collect())).collect()
}

fn randomized<F: Field>(f: &MultilinearPoly<F>, n: usize, cfg: &CheckConfig, prop: Property) -> Result<CheckOutcome<F>> {
    let m = f.degree();
    // fast path: reduce modulo a large prime, confirm hits exactly
    let reduced: Option<MultilinearPoly<FBig>> = if f.terms().next().is_none_or(|(_, c)| c.characteristic() == 0) {
        f.try_map(|c| c.to_scalar().to_rational().and_then(|r| FBig::from_rational(&r)))
    } else {
        None
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for sample in 0..cfg.samples {
        let raw = random_args(&mut rng, n, m, cfg.entry_range);
        if let Some(g) = &reduced {
            let value = g.evaluate_unchecked(&to_matrices::<FBig>(&raw, n), n);
            if prop.holds_for(&value) {
                continue;
            }
        }
        let args = to_matrices::<F>(&raw, n);
        let value = f.evaluate(&args)?;
        if !prop.holds_for(&value) {
            return Ok(CheckOutcome {
                holds: false,
                certain: true,
                mode: CheckMode::Randomized,
                evaluations: sample as u64 + 1,
                counterexample: Some(Counterexample { args, value }),
            });
        }
    }
    Ok(CheckOutcome {
        holds: true,
        certain: false,
        mode: CheckMode::Randomized,
        evaluations: cfg.samples as u64,
        counterexample: None,
    })
}

/// Exact span of sampled values of a polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanReport<F: Field> {
    pub n: usize,
    pub dimension: usize,
    /// Independent values spanning the computed subspace.
    pub basis: Vec<Matrix<F>>,
    pub contains_sln: bool,
    pub contains_identity: bool,
    pub sample_count: usize,
}

/// Spans random values, elementary-tuple values `e_ij` and their conjugates
/// by `I + e_ji`.
///
/// Samples are drawn in a fixed order, so a larger `samples` only adds
/// vectors and the dimension never decreases.
pub fn span_of_image<F: Field>(f: &MultilinearPoly<F>, n: usize, samples: usize, seed: u64) -> Result<SpanReport<F>> {
    if samples == 0 {
        return Err(Error::InvalidInput("samples must be at least 1".into()));
    }
    let m = f.degree();
    let mut space = RowSpace::new(n * n);
    let mut basis = Vec::new();
    let add = |v: Matrix<F>, space: &mut RowSpace<F>, basis: &mut Vec<Matrix<F>>| {
        if space.insert(v.entries()) {
            basis.push(v);
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let raw = random_args(&mut rng, n, m, 3);
        add(f.evaluate(&to_matrices::<F>(&raw, n))?, &mut space, &mut basis);
    }
    if m >= 3 && !f.is_zero() {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let Ok(cert) = elementary_tuple(f, n, i + 1, j + 1) else {
                    continue;
                };
                let value = cert.target;
                let mut p = Matrix::identity(n);
                p[(j, i)] = F::one();
                let mut pinv = Matrix::identity(n);
                pinv[(j, i)] = -F::one();
                let conj = p.mul(&value).mul(&pinv);
                add(value, &mut space, &mut basis);
                add(conj, &mut space, &mut basis);
            }
        }
    }
    let mut sln = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sln.push(Matrix::unit(n, i, j));
            }
        }
    }
    for i in 0..n.saturating_sub(1) {
        sln.push(Matrix::unit(n, i, i).sub(&Matrix::unit(n, n - 1, n - 1)));
    }
    let contains_sln = sln.iter().all(|e| space.contains(e.entries()));
    let contains_identity = space.contains(Matrix::<F>::identity(n).entries());
    Ok(SpanReport { n, dimension: space.rank(), basis, contains_sln, contains_identity, sample_count: samples })
}

/// Exact re-evaluation of a certificate.
pub fn verify_witness<F: Field>(cert: &WitnessCertificate<F>) -> bool {
    if let Some(p) = &cert.conjugator {
        if p.n() != cert.target.n() || p.inverse().is_err() {
            return false;
        }
    }
    cert.check()
}
