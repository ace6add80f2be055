use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::freealg::{hall_decompose4, standard_poly, MultilinearPoly};
use crate::linalg::{inverse, Matrix};
use crate::oracle::SearchConfig;
use crate::scalar::Scalar;

use super::basic::{commutator_witness, shift_bracket_solve, zero_diag_conjugate};
use super::constructions::{double_bracket_witness, st4_bidiagonal_witness, two_commutator_witness, JordanFrame};
use super::WitnessCertificate;

/// Entry points of the `witness` command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessShape {
    /// Route by the degree of the polynomial.
    Auto,
    /// `[[A,B],[A,C]]`.
    L1,
    /// `[A,B][A,C] + lambda [A,C][A,B]`.
    L2,
    /// `[S,B]` for a bidiagonal target.
    L3,
    /// `[A,[[A,B],[A,C]]]` for a bidiagonal target.
    L4,
}

fn scaled<F: Field>(d: &Matrix<F>, c: &F) -> Result<Matrix<F>> {
    let inv = c.inv().ok_or(Error::DivisionByZero)?;
    Ok(d.scale(&inv))
}

fn insert_identity<F: Field>(args: &[Matrix<F>], slot: usize) -> Vec<Matrix<F>> {
    let mut out = args.to_vec();
    out.insert(slot, Matrix::identity(args[0].n()));
    out
}

/// `(D/s, I, ..., I)` for a polynomial with coefficient sum `s != 0`.
fn coefficient_sum_witness<F: Field>(f: &MultilinearPoly<F>, d: &Matrix<F>) -> Result<Option<WitnessCertificate<F>>> {
    let s = f.coefficient_sum();
    if s.is_zero() {
        return Ok(None);
    }
    let mut args = vec![scaled(d, &s)?];
    args.extend(std::iter::repeat_n(Matrix::identity(d.n()), f.degree() - 1));
    Ok(Some(WitnessCertificate::new(f.clone(), args, d.clone(), None, "coefficient-sum")))
}

fn degree2_witness<F: Field>(f: &MultilinearPoly<F>, d: &Matrix<F>) -> Result<WitnessCertificate<F>> {
    if let Some(c) = coefficient_sum_witness(f, d)? {
        return Ok(c);
    }
    // coefficient sum zero: f = c [x1, x2]
    let c = f.coeff(&[0, 1]);
    let inner = commutator_witness(&scaled(d, &c)?)?;
    Ok(WitnessCertificate::new(f.clone(), inner.args, d.clone(), inner.conjugator, inner.route))
}

fn zero_args<F: Field>(f: &MultilinearPoly<F>, d: &Matrix<F>, route: &str) -> WitnessCertificate<F> {
    WitnessCertificate::new(f.clone(), vec![Matrix::zeros(d.n()); f.degree()], d.clone(), None, route)
}

/// Fills every slot but one with `diag(1..n)` and solves the free slot on
/// the zero-diagonal conjugate of `d`.
fn distinct_diagonal_route<F: Field>(
    f: &MultilinearPoly<F>,
    d: &Matrix<F>,
    slots: impl IntoIterator<Item = usize>,
    route: &str,
) -> Result<WitnessCertificate<F>> {
    let n = d.n();
    let (p, z) = zero_diag_conjugate(d)?;
    let pinv = inverse(&p)?;
    let a0 = Matrix::diagonal(&(1..=n).map(F::from_usize).collect::<Vec<_>>());
    for slot in slots {
        let mut args = vec![a0.clone(); f.degree()];
        let Ok(x) = f.solve_slot(slot, &args, &z) else {
            continue;
        };
        args[slot] = x;
        let back: Vec<Matrix<F>> = args.iter().map(|m| pinv.mul(m).mul(&p)).collect();
        let cert = WitnessCertificate::new(f.clone(), back, d.clone(), Some(pinv.clone()), format!("{route}/slot{}", slot + 1));
        if cert.verified {
            return Ok(cert);
        }
    }
    Err(Error::Unsupported(format!("{route}: no free slot reaches the target")))
}

/// Witness for a nonzero degree-3 multilinear polynomial.
pub fn degree3_witness<F: Field>(f: &MultilinearPoly<F>, d: &Matrix<F>) -> Result<WitnessCertificate<F>> {
    if f.degree() != 3 {
        return Err(Error::UnsupportedDegree(format!("expected degree 3, got {}", f.degree())));
    }
    if f.is_zero() {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    if let Some(c) = coefficient_sum_witness(f, d)? {
        return Ok(c);
    }
    if !d.trace().is_zero() {
        return Err(Error::TraceNonzero);
    }
    if d.is_zero() {
        return Ok(zero_args(f, d, "degree3/zero"));
    }
    for i in 1..=3 {
        let g = f.substitute_one(i)?;
        if g.is_zero() {
            continue;
        }
        let inner = degree2_witness(&g, d)?;
        let args = insert_identity(&inner.args, i - 1);
        return Ok(WitnessCertificate::new(
            f.clone(),
            args,
            d.clone(),
            inner.conjugator,
            format!("degree3/x{i}=1/{}", inner.route),
        ));
    }
    distinct_diagonal_route(f, d, 0..3, "degree3/proper")
}

/// The six tied specializations of a degree-4 polynomial with vanishing
/// left-normed Hall coefficients: slot roles (0 = A, 1 = B, 2 = C) and the
/// coefficients of `[A,B][A,C]` and `[A,C][A,B]`, from the product
/// coefficients `alpha`.
pub fn specialization_table<F: Field>(alpha: &[F; 6]) -> Vec<([usize; 4], F, F)> {
    let a = |k: usize| alpha[k - 1].clone();
    vec![
        ([0, 0, 1, 2], a(2) + a(4), a(3) + a(5)),
        ([0, 1, 0, 2], a(1) - a(4), a(6) - a(3)),
        ([0, 1, 2, 0], -a(1) - a(5), -a(2) - a(6)),
        ([1, 0, 0, 2], -a(1) - a(2), -a(5) - a(6)),
        ([1, 0, 2, 0], a(1) - a(3), a(6) - a(4)),
        ([1, 2, 0, 0], a(2) + a(3), a(4) + a(5)),
    ]
}

pub fn pattern_name(roles: &[usize; 4]) -> String {
    let letters: Vec<&str> = roles.iter().map(|&r| ["A", "B", "C"][r]).collect();
    format!("f({})", letters.join(","))
}

fn check_char_zero(d: &Matrix<Scalar>) -> Result<()> {
    if d.entries().iter().any(|x| matches!(x, Scalar::Mod { .. })) {
        return Err(Error::Unsupported("the degree-4 construction needs characteristic zero".into()));
    }
    Ok(())
}

/// Witness for a nonzero degree-4 multilinear polynomial, `n >= 3`.
pub fn degree4_witness(
    f: &MultilinearPoly<Scalar>,
    d: &Matrix<Scalar>,
    cfg: &SearchConfig,
) -> Result<WitnessCertificate<Scalar>> {
    if f.degree() != 4 {
        return Err(Error::UnsupportedDegree(format!("expected degree 4, got {}", f.degree())));
    }
    if f.is_zero() {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    check_char_zero(d)?;
    if let Some(c) = coefficient_sum_witness(f, d)? {
        return Ok(c);
    }
    if !d.trace().is_zero() {
        return Err(Error::TraceNonzero);
    }
    let n = d.n();
    if n < 3 {
        return Err(Error::BelowBound(format!("degree 4 needs n >= 3, got {n}")));
    }
    if d.is_zero() {
        return Ok(zero_args(f, d, "degree4/zero"));
    }
    for i in 1..=4 {
        let g = f.substitute_one(i)?;
        if g.is_zero() {
            continue;
        }
        let inner = degree3_witness(&g, d)?;
        let args = insert_identity(&inner.args, i - 1);
        return Ok(WitnessCertificate::new(
            f.clone(),
            args,
            d.clone(),
            inner.conjugator,
            format!("degree4/x{i}=1/{}", inner.route),
        ));
    }
    let hall = hall_decompose4(f)?;
    if let Some(k) = hall.betas.iter().position(|b| !b.is_zero()) {
        return distinct_diagonal_route(f, d, [k + 1], &format!("degree4/beta{}", k + 1));
    }
    if hall.is_standard_pattern() {
        let st4_alpha = hall_decompose4(&standard_poly::<Scalar>(4))?.alphas[0].clone();
        let lambda = hall.alphas[0].clone() * st4_alpha.inv().unwrap();
        let t = scaled(d, &lambda)?;
        let frame = JordanFrame::of_matrix(&t)?;
        let j = frame.jordan();
        let inner = st4_bidiagonal_witness(&j, cfg)?;
        let pinv = inverse(&frame.p)?;
        let args: Vec<Matrix<Scalar>> = inner.args.iter().map(|m| frame.to_target(m, &pinv)).collect();
        let cert = WitnessCertificate::new(
            f.clone(),
            args,
            d.clone(),
            Some(frame.p.clone()),
            format!("degree4/standard/{}", inner.route),
        );
        return verified(cert);
    }
    let (roles, mu1, mu2) = specialization_table(&hall.alphas)
        .into_iter()
        .find(|(_, m1, m2)| !m1.is_zero() || !m2.is_zero())
        .ok_or_else(|| Error::Internal("every specialization vanishes".into()))?;
    // with mu1 = 0 the roles of B and C are exchanged
    let (swap, mu1, mu2) = if mu1.is_zero() { (true, mu2, mu1) } else { (false, mu1, mu2) };
    let lambda = mu2 * mu1.inv().unwrap();
    let t = scaled(d, &mu1)?;
    let inner = if (Scalar::one() + lambda.clone()).is_zero() {
        double_bracket_witness(&t, cfg)?
    } else {
        two_commutator_witness(&t, &lambda)?
    };
    // inner arguments are (A, B, A, C)
    let (a, mut b, mut c) = (inner.args[0].clone(), inner.args[1].clone(), inner.args[3].clone());
    if swap {
        std::mem::swap(&mut b, &mut c);
    }
    let by_role = [a, b, c];
    let args: Vec<Matrix<Scalar>> = roles.iter().map(|&r| by_role[r].clone()).collect();
    let cert = WitnessCertificate::new(
        f.clone(),
        args,
        d.clone(),
        inner.conjugator.clone(),
        format!("degree4/{}{}/{}", pattern_name(&roles), if swap { "/swapped" } else { "" }, inner.route),
    );
    verified(cert)
}

fn verified(cert: WitnessCertificate<Scalar>) -> Result<WitnessCertificate<Scalar>> {
    if cert.verified {
        Ok(cert)
    } else {
        Err(Error::Internal(format!("route {} produced an unverified tuple", cert.route)))
    }
}

/// Witness for `f` with value `d`, routed by `shape`.
pub fn witness(
    f: &MultilinearPoly<Scalar>,
    d: &Matrix<Scalar>,
    shape: WitnessShape,
    lambda: &Scalar,
    cfg: &SearchConfig,
) -> Result<WitnessCertificate<Scalar>> {
    match shape {
        WitnessShape::L1 => double_bracket_witness(d, cfg),
        WitnessShape::L2 => two_commutator_witness(d, lambda),
        WitnessShape::L3 => {
            let b = shift_bracket_solve(d)?;
            let poly = crate::freealg::commutator_poly();
            Ok(WitnessCertificate::new(poly, vec![Matrix::shift(d.n()), b], d.clone(), None, "shift-bracket"))
        }
        WitnessShape::L4 => st4_bidiagonal_witness(d, cfg),
        WitnessShape::Auto => {
            if f.is_zero() {
                return Err(Error::InvalidInput("zero polynomial has only the zero value".into()));
            }
            match f.degree() {
                1 => Ok(coefficient_sum_witness(f, d)?.expect("nonzero degree 1")),
                2 => degree2_witness(f, d),
                3 => degree3_witness(f, d),
                4 => degree4_witness(f, d, cfg),
                m => coefficient_sum_witness(f, d)?.ok_or_else(|| {
                    Error::UnsupportedDegree(format!("degree {m} with coefficient sum zero"))
                }),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::parse_poly;

    fn s(v: i64) -> Scalar {
        Scalar::from_i64(v)
    }

    fn mat(rows: &[&[i64]]) -> Matrix<Scalar> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| s(x)).collect()).collect()).unwrap()
    }

    fn poly(text: &str) -> MultilinearPoly<Scalar> {
        parse_poly(text).unwrap().map(|c| Scalar::Rat(c.clone()))
    }

    #[test]
    fn degree3_routes() {
        let d = mat(&[&[1, 2, 0], &[3, -4, 1], &[0, 5, 3]]);
        let cert = degree3_witness(&poly("x1x2x3"), &d).unwrap();
        assert_eq!(cert.args[1], Matrix::identity(3));
        assert!(cert.verified);
        let cert = degree3_witness(&poly("[x1,x2]x3 + x3[x1,x2]"), &d).unwrap();
        assert!(cert.verified);
        assert!(cert.route.starts_with("degree3/x3=1"));
        let cert = degree3_witness(&poly("[[x2,x1],x3]"), &d).unwrap();
        assert!(cert.verified);
        assert!(cert.route.starts_with("degree3/proper"));
    }

    #[test]
    fn degree4_routes() {
        let cfg = SearchConfig::default();
        let d = mat(&[&[1, 2, 0], &[3, -4, 1], &[0, 5, 3]]);
        let cert = degree4_witness(&poly("x1x2x3x4"), &d, &cfg).unwrap();
        assert_eq!(cert.args[0], d);
        let j = mat(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let cert = degree4_witness(&poly("St4"), &j, &cfg).unwrap();
        assert!(cert.verified);
        assert!(cert.route.starts_with("degree4/standard"));
        let d = mat(&[&[2, 1, 0], &[0, 2, 0], &[0, 0, -4]]);
        let cert = degree4_witness(&poly("[x1,x2][x3,x4]"), &d, &cfg).unwrap();
        assert!(cert.verified);
        assert!(cert.route.starts_with("degree4/f(A,B,A,C)"), "{}", cert.route);
        let cert = degree4_witness(&poly("[[[x2,x1],x3],x4]"), &d, &cfg).unwrap();
        assert!(cert.verified);
    }

    #[test]
    fn every_specialization_has_the_stated_coefficients() {
        for text in ["[x1,x2][x3,x4]", "[x1,x3][x2,x4] - 2*[x3,x4][x1,x2]", "St4", "[x2,x4][x1,x3]"] {
            let f = poly(text);
            let hall = hall_decompose4(&f).unwrap();
            let a = mat(&[&[1, 2, 0], &[0, -1, 3], &[2, 0, 1]]);
            let b = mat(&[&[0, 1, 1], &[2, 0, -1], &[1, 1, 0]]);
            let c = mat(&[&[3, 0, 1], &[1, -2, 0], &[0, 1, 1]]);
            let ab = a.commutator(&b);
            let ac = a.commutator(&c);
            for (roles, m1, m2) in specialization_table(&hall.alphas) {
                let by_role = [a.clone(), b.clone(), c.clone()];
                let args: Vec<_> = roles.iter().map(|&r| by_role[r].clone()).collect();
                let expect = ab.mul(&ac).scale(&m1).add(&ac.mul(&ab).scale(&m2));
                assert_eq!(f.evaluate(&args).unwrap(), expect, "{text} {}", pattern_name(&roles));
            }
        }
    }
}
