use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::freealg::{permutations, standard_poly, two_commutator_poly};
use crate::linalg::{inverse, jordan_matrix, rational_jordan, JordanSpec, Matrix};
use crate::oracle::{linear_slice_search, SearchConfig};
use crate::scalar::Scalar;
use crate::Rational;

use super::basic::solve_bracket;
use super::plan::diagonal_plan;
use super::WitnessCertificate;

/// Jordan data of a target: `P^{-1} D P = jordan_matrix(spec)`.
#[derive(Clone, Debug)]
pub struct JordanFrame {
    pub spec: JordanSpec<Scalar>,
    pub p: Matrix<Scalar>,
}

const MAX_BLOCK_ORDERS: usize = 5040;

impl JordanFrame {
    /// Jordan frame of a matrix with rational entries and rational spectrum.
    pub fn of_matrix(d: &Matrix<Scalar>) -> Result<Self> {
        let rat: Matrix<Rational> = d
            .try_map(|x| x.to_rational())
            .ok_or_else(|| Error::Unsupported("Jordan form needs rational entries".into()))?;
        let (spec, p) = rational_jordan(&rat)?;
        Ok(JordanFrame { spec: spec.map(|x| Scalar::Rat(x.clone())), p: p.map(|x| Scalar::Rat(x.clone())) })
    }

    pub fn of_spec(spec: JordanSpec<Scalar>) -> Self {
        let n = spec.n();
        JordanFrame { spec, p: Matrix::identity(n) }
    }

    pub fn jordan(&self) -> Matrix<Scalar> {
        jordan_matrix(&self.spec)
    }

    /// Reorders blocks, moving the matching column groups of `P`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let ranges = self.spec.block_ranges();
        let mut cols = Vec::with_capacity(self.p.n());
        for &k in order {
            for c in ranges[k].clone() {
                cols.push(self.p.column(c));
            }
        }
        JordanFrame { spec: self.spec.permuted(order), p: Matrix::from_columns(&cols) }
    }

    /// Distinct block orders, starting with the given one.
    pub fn reorderings(&self) -> Vec<JordanFrame> {
        let k = self.spec.blocks.len();
        let mut seen: Vec<JordanSpec<Scalar>> = Vec::new();
        let mut out = Vec::new();
        for order in permutations(k).into_iter().take(MAX_BLOCK_ORDERS) {
            let spec = self.spec.permuted(&order);
            if seen.contains(&spec) {
                continue;
            }
            seen.push(spec);
            out.push(self.permuted(&order));
        }
        out
    }

    /// `P M P^{-1}`: moves a matrix from the Jordan frame to the target frame.
    pub fn to_target(&self, m: &Matrix<Scalar>, pinv: &Matrix<Scalar>) -> Matrix<Scalar> {
        self.p.mul(m).mul(pinv)
    }
}

fn check_target<F: Field>(d: &Matrix<F>) -> Result<()> {
    if !d.trace().is_zero() {
        return Err(Error::TraceNonzero);
    }
    if d.n() < 3 {
        return Err(Error::BelowBound(format!("needs n >= 3, got {}", d.n())));
    }
    Ok(())
}

fn two_commutator_in_frames(
    frames: Vec<JordanFrame>,
    lambda: &Scalar,
    target: &Matrix<Scalar>,
) -> Result<WitnessCertificate<Scalar>> {
    let n = target.n();
    let poly = two_commutator_poly(lambda);
    let mut last = None;
    for frame in frames {
        let spec = &frame.spec;
        let plan = match diagonal_plan(spec, lambda, &spec.superdiagonal()) {
            Ok(p) => p,
            Err(e @ Error::DegenerateDenominator(_)) => {
                last = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let x = Matrix::diagonal(&plan.a);
        let mut y = Matrix::diagonal(&plan.b_diag);
        for (i, v) in plan.b_super.iter().enumerate() {
            y[(i, i + 1)] = v.clone();
        }
        let s = Matrix::shift(n);
        let b = solve_bracket(&s, &x)?;
        let c = solve_bracket(&s, &y)?;
        let pinv = inverse(&frame.p)?;
        let args: Vec<Matrix<Scalar>> = [&s, &b, &s, &c].iter().map(|m| frame.to_target(m, &pinv)).collect();
        let cert = WitnessCertificate::new(
            poly.clone(),
            args,
            target.clone(),
            Some(frame.p.clone()),
            format!("two-commutator/{}", plan.case),
        );
        if !cert.verified {
            return Err(Error::Internal(format!("two-commutator plan {} did not verify", plan.case)));
        }
        return Ok(cert);
    }
    Err(last.unwrap_or_else(|| Error::Internal("no block order tried".into())))
}

fn zero_certificate(poly: crate::freealg::MultilinearPoly<Scalar>, target: &Matrix<Scalar>, route: &str) -> WitnessCertificate<Scalar> {
    let args = vec![Matrix::zeros(target.n()); poly.degree()];
    WitnessCertificate::new(poly, args, target.clone(), None, route)
}

/// `D = [A,B][A,C] + lambda [A,C][A,B]`, certified with the multilinear form
/// `[x1,x2][x3,x4] + lambda [x3,x4][x1,x2]` on `(A, B, A, C)`.
pub fn two_commutator_witness(d: &Matrix<Scalar>, lambda: &Scalar) -> Result<WitnessCertificate<Scalar>> {
    if (Scalar::one() + lambda.clone()).is_zero() {
        return Err(Error::LambdaIsMinusOne);
    }
    check_target(d)?;
    if d.is_zero() {
        return Ok(zero_certificate(two_commutator_poly(lambda), d, "two-commutator/zero"));
    }
    let frame = JordanFrame::of_matrix(d)?;
    two_commutator_in_frames(frame.reorderings(), lambda, d)
}

/// Same as [`two_commutator_witness`] for the Jordan matrix of `spec`.
pub fn two_commutator_from_spec(spec: &JordanSpec<Scalar>, lambda: &Scalar) -> Result<WitnessCertificate<Scalar>> {
    let target = jordan_matrix(spec);
    if (Scalar::one() + lambda.clone()).is_zero() {
        return Err(Error::LambdaIsMinusOne);
    }
    check_target(&target)?;
    if target.is_zero() {
        return Ok(zero_certificate(two_commutator_poly(lambda), &target, "two-commutator/zero"));
    }
    two_commutator_in_frames(JordanFrame::of_spec(spec.clone()).reorderings(), lambda, &target)
}

fn is_bidiagonal<F: Field>(t: &Matrix<F>) -> bool {
    let n = t.n();
    (0..n).all(|i| (0..n).all(|j| j == i || j == i + 1 || t[(i, j)].is_zero()))
}

/// Closed form for `[S,[[S,B],[S,C]]] = T` with `S` the shift.
fn st4_shift_construction<F: Field>(t: &Matrix<F>) -> Result<(Matrix<F>, Matrix<F>, Matrix<F>)> {
    let n = t.n();
    let s = Matrix::shift(n);
    // W = [X,Y] must satisfy [S,W] = T: diagonal from the superdiagonal of T,
    // subdiagonal from prefix sums of its diagonal
    let mut partial = Vec::with_capacity(n);
    let mut acc = F::zero();
    for i in 0..n {
        partial.push(acc.clone());
        if i + 1 < n {
            acc = acc + t[(i, i + 1)].clone();
        }
    }
    let shift_c = partial.iter().fold(F::zero(), |a, x| a + x.clone()) * F::from_usize(n).inv().ok_or(Error::DivisionByZero)?;
    let w_diag: Vec<F> = partial.iter().map(|x| x.clone() - shift_c.clone()).collect();
    let mut q = Vec::with_capacity(n - 1);
    let mut z = Vec::with_capacity(n - 1);
    let (mut qa, mut za) = (F::zero(), F::zero());
    for i in 0..n - 1 {
        qa = qa + t[(i, i)].clone();
        za = za - w_diag[i].clone();
        q.push(qa.clone());
        z.push(za.clone());
    }
    let mut u = vec![F::one(); n - 1];
    u[n - 2] = F::from_i64(-(n as i64 - 2));
    let mut b = vec![F::zero(); n];
    for i in 0..n - 1 {
        b[i + 1] = b[i].clone() - q[i].clone() * u[i].inv().unwrap();
    }
    let mean = b.iter().fold(F::zero(), |a, x| a + x.clone()) * F::from_usize(n).inv().unwrap();
    let mut x = Matrix::zeros(n);
    let mut y = Matrix::zeros(n);
    for i in 0..n {
        y[(i, i)] = b[i].clone() - mean.clone();
    }
    for i in 0..n - 1 {
        x[(i + 1, i)] = u[i].clone();
        y[(i, i + 1)] = z[i].clone() * u[i].inv().unwrap();
    }
    let bm = solve_bracket(&s, &x)?;
    let cm = solve_bracket(&s, &y)?;
    Ok((s, bm, cm))
}

/// `[A,[[A,B],[A,C]]] = T` for bidiagonal trace-zero `T`, certified as
/// `St_4(A, A^2, B, C) = T`.
pub fn st4_bidiagonal_witness<F: Field>(t: &Matrix<F>, cfg: &SearchConfig) -> Result<WitnessCertificate<F>> {
    check_target(t)?;
    if !is_bidiagonal(t) {
        return Err(Error::InvalidInput("target must be supported on the diagonal and superdiagonal".into()));
    }
    let st4 = standard_poly::<F>(4);
    let n = t.n();
    if t.is_zero() {
        let args = vec![Matrix::zeros(n); 4];
        return Ok(WitnessCertificate::new(st4, args, t.clone(), None, "st4/zero"));
    }
    if let Ok((a, b, c)) = st4_shift_construction(t) {
        let a2 = a.mul(&a);
        let cert = WitnessCertificate::new(st4.clone(), vec![a, a2, b, c], t.clone(), None, "st4/shift");
        if cert.verified {
            return Ok(cert);
        }
    }
    crate::oracle::st4_search(t, cfg)
}

/// Closed form for `[[S,B],[S,C]] = T` with `S` the shift, `T` bidiagonal.
fn double_bracket_shift_construction(t: &Matrix<Scalar>) -> Option<(Matrix<Scalar>, Matrix<Scalar>)> {
    let n = t.n();
    let mut w = Vec::with_capacity(n - 1);
    let mut acc = Scalar::zero();
    for i in 0..n - 1 {
        acc = acc - t[(i, i)].clone();
        w.push(acc.clone());
    }
    let s_of = |i: usize| t[(i, i + 1)].clone();
    let nonzero: Vec<usize> = (0..n - 1).filter(|&i| !w[i].is_zero()).collect();
    let free: Vec<usize> = (0..n - 1).filter(|&i| w[i].is_zero() && s_of(i).is_zero()).collect();
    let mut u = vec![Scalar::zero(); n - 1];
    match nonzero.len() {
        0 => {}
        1 => {
            let &f = free.first()?;
            u[nonzero[0]] = Scalar::one();
            u[f] = -Scalar::one();
        }
        k => {
            for &i in &nonzero {
                u[i] = Scalar::one();
            }
            u[*nonzero.last().unwrap()] = Scalar::from_i64(-(k as i64 - 1));
        }
    }
    let mut v = vec![Scalar::zero(); n - 1];
    for i in 0..n - 1 {
        if !w[i].is_zero() {
            v[i] = w[i].clone() * u[i].inv()?;
        } else if !s_of(i).is_zero() {
            v[i] = Scalar::one();
        }
    }
    let mut a = vec![Scalar::zero(); n];
    for i in 0..n - 1 {
        let delta = if v[i].is_zero() { Scalar::zero() } else { s_of(i) * v[i].inv()? };
        a[i + 1] = a[i].clone() - delta;
    }
    let mean = a.iter().fold(Scalar::zero(), |x, y| x + y.clone()) * Scalar::from_ratio(1, n as i64);
    let mut x = Matrix::zeros(n);
    let mut y = Matrix::zeros(n);
    for i in 0..n {
        x[(i, i)] = a[i].clone() - mean.clone();
    }
    for i in 0..n - 1 {
        x[(i + 1, i)] = u[i].clone();
        y[(i, i + 1)] = v[i].clone();
    }
    Some((x, y))
}

/// `D = [[A,B],[A,C]]`, certified as `[x1,x2][x3,x4] - [x3,x4][x1,x2]` on `(A,B,A,C)`.
pub fn double_bracket_witness(d: &Matrix<Scalar>, cfg: &SearchConfig) -> Result<WitnessCertificate<Scalar>> {
    check_target(d)?;
    let poly = two_commutator_poly(&-Scalar::one());
    if d.is_zero() {
        return Ok(zero_certificate(poly, d, "double-bracket/zero"));
    }
    let n = d.n();
    if let Ok(frame) = JordanFrame::of_matrix(d) {
        let s = Matrix::shift(n);
        for f in frame.reorderings() {
            let Some((x, y)) = double_bracket_shift_construction(&f.jordan()) else {
                continue;
            };
            let (Ok(b), Ok(c)) = (solve_bracket(&s, &x), solve_bracket(&s, &y)) else {
                continue;
            };
            let pinv = inverse(&f.p)?;
            let args: Vec<Matrix<Scalar>> = [&s, &b, &s, &c].iter().map(|m| f.to_target(m, &pinv)).collect();
            let cert = WitnessCertificate::new(poly.clone(), args, d.clone(), Some(f.p.clone()), "double-bracket/shift");
            if cert.verified {
                return Ok(cert);
            }
        }
    }
    let mut cert = linear_slice_search(&poly, &[0, 1, 0, 2], d, cfg)?;
    cert.route = format!("double-bracket/{}", cert.route);
    Ok(cert)
}
