use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::JordanSpec;
use crate::scalar::{sqrt_needed, Scalar};

/// Diagonal data for `[A,B] = diag(a)` and `[A,C] = diag(b_diag) + super(b_super)`
/// such that `[A,B][A,C] + lambda [A,C][A,B]` is the Jordan target.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalPlan {
    pub a: Vec<Scalar>,
    pub b_diag: Vec<Scalar>,
    pub b_super: Vec<Scalar>,
    pub lambda: Scalar,
    /// Which construction produced the plan.
    pub case: String,
}

impl DiagonalPlan {
    /// Checks the zero-sum conditions and both coefficient systems exactly.
    pub fn check(&self, diag: &[Scalar], superdiag: &[Scalar]) -> bool {
        let n = self.a.len();
        let sum = |v: &[Scalar]| v.iter().fold(Scalar::zero(), |acc, x| acc + x.clone());
        if self.b_diag.len() != n || self.b_super.len() + 1 != n || diag.len() != n || superdiag.len() + 1 != n {
            return false;
        }
        if !sum(&self.a).is_zero() || !sum(&self.b_diag).is_zero() {
            return false;
        }
        let one_plus = Scalar::one() + self.lambda.clone();
        let diag_ok = (0..n).all(|i| one_plus.clone() * self.a[i].clone() * self.b_diag[i].clone() == diag[i]);
        let super_ok = (0..n - 1).all(|i| {
            (self.a[i].clone() + self.lambda.clone() * self.a[i + 1].clone()) * self.b_super[i].clone() == superdiag[i]
        });
        diag_ok && super_ok
    }
}

fn sum(v: &[Scalar]) -> Scalar {
    v.iter().fold(Scalar::zero(), |acc, x| acc + x.clone())
}

/// Completes a plan from the `a` values, or explains why it cannot.
fn complete(
    a: Vec<Scalar>,
    diag: &[Scalar],
    superdiag: &[Scalar],
    lambda: &Scalar,
    case: &str,
) -> Result<DiagonalPlan> {
    let n = a.len();
    let one_plus = Scalar::one() + lambda.clone();
    let inv_one_plus = one_plus.inv().ok_or(Error::LambdaIsMinusOne)?;
    let mut b_diag = Vec::with_capacity(n);
    for i in 0..n {
        if diag[i].is_zero() {
            b_diag.push(Scalar::zero());
            continue;
        }
        let inv = a[i]
            .inv()
            .ok_or_else(|| Error::DegenerateDenominator(format!("{case}: a_{} = 0 with nonzero eigenvalue", i + 1)))?;
        b_diag.push(diag[i].clone() * inv * inv_one_plus.clone());
    }
    if !sum(&b_diag).is_zero() {
        return Err(Error::DegenerateDenominator(format!("{case}: diagonal of [A,C] does not sum to zero")));
    }
    let mut b_super = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        if superdiag[i].is_zero() {
            b_super.push(Scalar::zero());
            continue;
        }
        let den = a[i].clone() + lambda.clone() * a[i + 1].clone();
        let inv = den
            .inv()
            .ok_or_else(|| Error::DegenerateDenominator(format!("{case}: a_{} + lambda a_{} = 0", i + 1, i + 2)))?;
        b_super.push(superdiag[i].clone() * inv);
    }
    let plan = DiagonalPlan { a, b_diag, b_super, lambda: lambda.clone(), case: case.to_string() };
    if !plan.check(diag, superdiag) {
        return Err(Error::Internal(format!("{case}: plan fails its own check")));
    }
    Ok(plan)
}

fn nilpotent_plan(n: usize, diag: &[Scalar], superdiag: &[Scalar], lambda: &Scalar) -> Result<DiagonalPlan> {
    let ones = |k: usize| vec![Scalar::one(); k];
    let critical = Scalar::from_ratio(1, n as i64 - 1);
    let mut primary = ones(n - 1);
    primary.push(Scalar::from_i64(-(n as i64 - 1)));
    let mut alternate = ones(n - 2);
    alternate.push(Scalar::zero());
    alternate.push(Scalar::from_i64(-(n as i64 - 2)));
    let attempts = if *lambda == critical {
        vec![(alternate, "nilpotent/alternate"), (primary, "nilpotent")]
    } else {
        vec![(primary, "nilpotent"), (alternate, "nilpotent/alternate")]
    };
    let mut last = None;
    for (a, case) in attempts {
        match complete(a, diag, superdiag, lambda, case) {
            Ok(p) => return Ok(p),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap())
}

fn two_block_plan(
    spec: &JordanSpec<Scalar>,
    diag: &[Scalar],
    superdiag: &[Scalar],
    lambda: &Scalar,
) -> Result<DiagonalPlan> {
    let n = spec.n();
    if spec.blocks[0].size < 2 {
        return Err(Error::DegenerateDenominator("two blocks: the first block must have size at least 2".into()));
    }
    // roots of 2x^2 + 2(n-2)x - (n-2) = 0
    let root = sqrt_needed(n).root();
    let half = Scalar::from_ratio(1, 2);
    let base = Scalar::from_i64(-(n as i64 - 2));
    let abar1 = (base.clone() + root.clone()) * half.clone();
    let abar2 = (base - root) * half;
    for x in [&abar1, &abar2] {
        if x.is_one() || x.is_zero() {
            return Err(Error::Internal(format!("root {x} of the two-block quadratic is 0 or 1")));
        }
    }
    let build = |first: &Scalar, second: &Scalar| {
        let mut a = vec![first.clone(), second.clone()];
        a.extend(std::iter::repeat_n(Scalar::one(), n - 2));
        a
    };
    let mut last = None;
    for (a, case) in [
        (build(&abar1, &abar2), "two-blocks"),
        (build(&abar2, &abar1), "two-blocks/swapped"),
    ] {
        match complete(a, diag, superdiag, lambda, case) {
            Ok(p) => return Ok(p),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap())
}

/// Roots of `p x^2 + q x + r` with `p != 0`, adjoining a square root if needed.
fn quadratic_roots(p: &Scalar, q: &Scalar, r: &Scalar) -> Result<[Scalar; 2]> {
    let disc = q.clone() * q.clone() - Scalar::from_i64(4) * p.clone() * r.clone();
    let s = disc.sqrt_adjoining()?;
    let den = (Scalar::from_i64(2) * p.clone()).inv().ok_or(Error::DivisionByZero)?;
    Ok([(-q.clone() + s.clone()) * den.clone(), (-q.clone() - s) * den])
}

fn is_rational(x: &Scalar) -> bool {
    x.to_rational().is_some()
}

fn many_block_plan(
    spec: &JordanSpec<Scalar>,
    diag: &[Scalar],
    superdiag: &[Scalar],
    lambda: &Scalar,
) -> Result<DiagonalPlan> {
    let k = spec.blocks.len();
    let size = |j: usize| Scalar::from_usize(spec.blocks[j].size);
    let head = &spec.blocks[..k - 2];
    let s = head.iter().fold(Scalar::zero(), |acc, b| acc + Scalar::from_usize(b.size));
    let d = head.iter().fold(Scalar::zero(), |acc, b| acc + Scalar::from_usize(b.size) * b.eig.clone());
    let (mp, mk) = (size(k - 2), size(k - 1));
    let dp = spec.blocks[k - 2].eig.clone();
    let forbidden = -(s.clone() * mp.inv().unwrap());
    let admissible = |x: &Scalar| !x.is_zero() && *x != forbidden;

    let (x, case) = if !d.is_zero() {
        let qa = mp.clone() * d.clone();
        let qb = d.clone() * s.clone() + mk.clone() * d.clone() + mp.clone() * dp.clone() * (mp.clone() + mk.clone());
        let qc = mp.clone() * dp.clone() * s.clone();
        if !dp.is_zero() {
            let roots = quadratic_roots(&qa, &qb, &qc)?;
            // prefer a rational admissible root
            let pick = roots
                .iter()
                .find(|x| admissible(x) && is_rational(x))
                .or_else(|| roots.iter().find(|x| admissible(x)))
                .cloned()
                .ok_or_else(|| Error::DegenerateDenominator("many blocks: no admissible root".into()))?;
            (pick, "many-blocks/subcase1")
        } else {
            (-(s.clone() + mk.clone()) * mp.inv().unwrap(), "many-blocks/subcase2")
        }
    } else if !dp.is_zero() {
        (-(s.clone() * (mp.clone() + mk.clone()).inv().unwrap()), "many-blocks/subcase3")
    } else {
        (Scalar::one(), "many-blocks/subcase3-free")
    };
    if !admissible(&x) {
        return Err(Error::DegenerateDenominator(format!("{case}: root {x} not admissible")));
    }
    let last = -(s + mp * x.clone()) * mk.inv().unwrap();
    let mut a = Vec::with_capacity(spec.n());
    for (j, b) in spec.blocks.iter().enumerate() {
        let v = if j + 2 < k {
            Scalar::one()
        } else if j + 2 == k {
            x.clone()
        } else {
            last.clone()
        };
        a.extend(std::iter::repeat_n(v, b.size));
    }
    complete(a, diag, superdiag, lambda, case)
}

/// Plan for realizing a bidiagonal target with Jordan block data `spec` and
/// superdiagonal `superdiag` as `[A,B][A,C] + lambda [A,C][A,B]` with `A` the shift.
pub fn diagonal_plan(spec: &JordanSpec<Scalar>, lambda: &Scalar, superdiag: &[Scalar]) -> Result<DiagonalPlan> {
    let n = spec.n();
    if (Scalar::one() + lambda.clone()).is_zero() {
        return Err(Error::LambdaIsMinusOne);
    }
    if n < 3 {
        return Err(Error::BelowBound(format!("diagonal plans need n >= 3, got {n}")));
    }
    if !spec.trace().is_zero() {
        return Err(Error::TraceNonzero);
    }
    if superdiag.len() + 1 != n {
        return Err(Error::DimensionMismatch(format!("superdiagonal of length {} for n = {n}", superdiag.len())));
    }
    let diag = spec.diagonal();
    if diag.iter().all(|x| x.is_zero()) {
        nilpotent_plan(n, &diag, superdiag, lambda)
    } else if spec.blocks.len() == 2 {
        two_block_plan(spec, &diag, superdiag, lambda)
    } else {
        many_block_plan(spec, &diag, superdiag, lambda)
    }
}
