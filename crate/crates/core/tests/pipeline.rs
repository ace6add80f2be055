use num_traits::Zero;
use proptest::prelude::*;

use polyimage::analysis::verify_witness;
use polyimage::freealg::{parse_poly, parse_poly_in};
use polyimage::json::{
    certificate_doc, certificate_from_doc, matrix_doc, matrix_from_doc, poly_doc, poly_from_doc, CertificateDoc,
};
use polyimage::linalg::{jordan_matrix, rational_jordan};
use polyimage::oracle::SearchConfig;
use polyimage::random;
use polyimage::witness::{
    degree3_witness, degree4_witness, two_commutator_witness, witness, zero_diag_conjugate, WitnessShape,
};
use polyimage::{Error, FieldSpec, Matrix, MultilinearPoly, Rational, Scalar};

fn poly(text: &str) -> MultilinearPoly<Scalar> {
    parse_poly_in(text, &FieldSpec::Rationals).unwrap()
}

fn mat(rows: &[&[i64]]) -> Matrix<Scalar> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Scalar::from_i64(v)).collect()).collect()).unwrap()
}

fn target3() -> Matrix<Scalar> {
    mat(&[&[1, 2, 0], &[0, -1, 3], &[0, 0, 0]])
}

fn auto(f: &MultilinearPoly<Scalar>, d: &Matrix<Scalar>) -> polyimage::Result<polyimage::witness::WitnessCertificate<Scalar>> {
    witness(f, d, WitnessShape::Auto, &Scalar::zero(), &SearchConfig::default())
}

#[test]
fn monomial_uses_identities() {
    let d = target3();
    let cert = degree4_witness(&poly("x1*x2*x3*x4"), &d, &SearchConfig::default()).unwrap();
    assert!(cert.verified);
    assert_eq!(cert.args[0], d);
    assert!(cert.args[1..].iter().all(|a| *a == Matrix::identity(3)));
    assert!(cert.route.contains("coefficient-sum"), "{}", cert.route);
}

#[test]
fn standard_polynomial_on_a_nilpotent_block() {
    let j3 = mat(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
    let cert = auto(&poly("St4"), &j3).unwrap();
    assert!(cert.verified);
    assert!(cert.route.starts_with("degree4/standard"), "{}", cert.route);
    let scaled = auto(&poly("-3*St4"), &target3()).unwrap();
    assert!(scaled.verified);
}

#[test]
fn product_of_commutators_specializes() {
    let mut rng = random::rng(4);
    for _ in 0..5 {
        let d = random::rational_spectrum_target(&mut rng, 3);
        let cert = auto(&poly("[x1,x2][x3,x4]"), &d).unwrap();
        assert!(cert.verified && verify_witness(&cert));
        assert!(cert.route.starts_with("degree4/f(A,B,A,C)/two-commutator"), "{}", cert.route);
        // both A slots carry the same matrix
        assert_eq!(cert.args[0], cert.args[2]);
    }
}

#[test]
fn antisymmetric_product_takes_the_double_bracket_branch() {
    let f = poly("[x1,x2][x3,x4] - [x3,x4][x1,x2]");
    let mut rng = random::rng(9);
    for d in [target3(), random::rational_spectrum_target(&mut rng, 3), random::rational_spectrum_target(&mut rng, 4)] {
        let cert = auto(&f, &d).unwrap();
        assert!(cert.verified);
        assert!(cert.route.contains("double-bracket"), "{}", cert.route);
    }
}

#[test]
fn left_normed_bracket_uses_a_distinct_diagonal() {
    let cert = auto(&poly("[[[x2,x1],x3],x4]"), &target3()).unwrap();
    assert!(cert.verified);
    assert!(cert.route.starts_with("degree4/beta1"), "{}", cert.route);
}

#[test]
fn degree_three_routes() {
    let d = target3();
    let sym = degree3_witness(&poly("[x1,x2]*x3 + x3*[x1,x2]"), &d).unwrap();
    assert!(sym.verified);
    assert!(sym.route.starts_with("degree3/x3=1"), "{}", sym.route);
    assert_eq!(sym.args[2], Matrix::identity(3));
    let nested = degree3_witness(&poly("[[x2,x1],x3]"), &d).unwrap();
    assert!(nested.verified);
    assert!(nested.route.starts_with("degree3/proper"), "{}", nested.route);
}

#[test]
fn random_degree_four_polynomials() {
    let mut rng = random::rng(21);
    let mut unsupported = 0;
    for _ in 0..30 {
        let f = random::multilinear(&mut rng, 4, 5, 3).map(|c| Scalar::Rat(c.clone()));
        let d = random::rational_spectrum_target(&mut rng, 3);
        match auto(&f, &d) {
            Ok(cert) => assert!(cert.verified, "{}", cert.route),
            Err(Error::SearchExhausted { .. }) => unsupported += 1,
            Err(e) => panic!("{f:?}: {e}"),
        }
    }
    assert_eq!(unsupported, 0);
}

#[test]
fn precondition_errors() {
    let cfg = SearchConfig::default();
    let d2 = mat(&[&[0, 1], &[0, 0]]);
    assert!(matches!(degree4_witness(&poly("St4"), &d2, &cfg), Err(Error::BelowBound(_))));
    let trace = mat(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 0]]);
    assert!(matches!(auto(&poly("St4"), &trace), Err(Error::TraceNonzero)));
    assert!(matches!(two_commutator_witness(&target3(), &Scalar::from_i64(-1)), Err(Error::LambdaIsMinusOne)));
    let irrational = mat(&[&[0, 2, 0], &[1, 0, 0], &[0, 0, 0]]);
    assert!(matches!(auto(&poly("[x1,x2][x3,x4]"), &irrational), Err(Error::NonSplittingSpectrum(_))));
    // the commutator route needs no eigenvalues
    assert!(auto(&poly("[x1,x2]"), &irrational).unwrap().verified);
    assert!(matches!(zero_diag_conjugate(&Matrix::<Scalar>::identity(3)), Err(Error::CentralMatrix)));
}

#[test]
fn zero_diagonal_conjugate_of_a_diagonal() {
    let d = mat(&[&[1, 0], &[0, -1]]);
    let (p, z) = zero_diag_conjugate(&d).unwrap();
    assert!(z.diagonal_entries().iter().all(|x| x.is_zero()));
    assert_eq!(p.mul(&d).mul(&p.inverse().unwrap()), z);
}

#[test]
fn swap_matrix_jordan_form() {
    let d = Matrix::<Rational>::from_fn(2, |i, j| Rational::from_integer(i64::from(i != j).into()));
    let (spec, p) = rational_jordan(&d).unwrap();
    let diag: Vec<Rational> = spec.diagonal();
    assert_eq!(diag, vec![Rational::from_integer(1.into()), Rational::from_integer((-1).into())]);
    assert_eq!(p.inverse().unwrap().mul(&d).mul(&p), jordan_matrix(&spec));
}

#[test]
fn shape_flags_ignore_the_polynomial() {
    let d = target3();
    let cfg = SearchConfig::default();
    for shape in [WitnessShape::L1, WitnessShape::L2, WitnessShape::L3, WitnessShape::L4] {
        let cert = witness(&MultilinearPoly::zero(1), &d, shape, &Scalar::from_i64(3), &cfg).unwrap();
        assert!(cert.verified, "{shape:?}: {}", cert.route);
        assert_eq!(cert.target, d);
    }
}

fn round_trip(doc: &CertificateDoc) -> CertificateDoc {
    let text = serde_json::to_string(doc).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn certificates_round_trip_through_json() {
    let mut rng = random::rng(2);
    for text in ["[x1,x2]", "St4", "[x1,x2][x3,x4] + 2*[x3,x4][x1,x2]", "[[x2,x1],x3]"] {
        let d = random::rational_spectrum_target(&mut rng, 3);
        let cert = auto(&poly(text), &d).unwrap();
        let doc = certificate_doc(&cert);
        let back = certificate_from_doc(&round_trip(&doc)).unwrap();
        assert_eq!(back, cert);
        assert!(verify_witness(&back));
    }
    // quadratic entries survive the trip
    let two = polyimage::linalg::JordanSpec::new(vec![(Scalar::from_i64(1), 2), (Scalar::from_i64(-2), 1)]).unwrap();
    let cert = polyimage::witness::two_commutator_from_spec(&two, &Scalar::zero()).unwrap();
    let back = certificate_from_doc(&round_trip(&certificate_doc(&cert))).unwrap();
    assert_eq!(back, cert);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn matrices_and_polynomials_round_trip(seed in any::<u64>(), n in 1usize..=4, m in 1usize..=4, p in prop::sample::select(vec![0u64, 5, 7])) {
        let mut rng = random::rng(seed);
        let spec = if p == 0 { FieldSpec::Rationals } else { FieldSpec::prime(p).unwrap() };
        let a = random::matrix(&mut rng, n, 9).map(|x| x.in_field(&spec).unwrap());
        let doc = matrix_doc(&a);
        let back = matrix_from_doc(&serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(back, a);

        let f = random::multilinear(&mut rng, m, 4, 3);
        let f = parse_poly(&f.to_text()).unwrap();
        let fs = f.map(|c| Scalar::Rat(c.clone()));
        let doc = poly_doc(&fs);
        let back = poly_from_doc(&serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(back, fs);
    }
}
