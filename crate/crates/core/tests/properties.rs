//! Invariants checked on randomized inputs.

use num_traits::{One, Zero};
use proptest::collection::vec;
use proptest::prelude::*;

use polyimage::analysis::{is_central, is_identity, span_of_image, verify_witness, CheckConfig, CheckMode};
use polyimage::freealg::{hall_basis, hall_decompose4, standard_poly};
use polyimage::linalg::{conjugate, jordan_matrix, kernel, rational_jordan, RowSpace};
use polyimage::oracle::{linear_slice_search, SearchConfig};
use polyimage::random;
use polyimage::scalar::parse_scalar;
use polyimage::witness::{
    commutator_witness, diagonal_plan, shift_bracket_solve, specialization_table, two_commutator_from_spec,
    two_commutator_witness,
};
use polyimage::{Field, FieldSpec, Matrix, MultilinearPoly, Rational, Scalar, F7};

fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn rat_matrix(n: usize, v: &[i64]) -> Matrix<Rational> {
    Matrix::from_fn(n, |i, j| q(v[i * n + j]))
}

fn sc_matrix(n: usize, v: &[i64]) -> Matrix<Scalar> {
    Matrix::from_fn(n, |i, j| Scalar::from_i64(v[i * n + j]))
}

/// `n` together with `k` flattened `n x n` integer matrices.
fn matrices(sizes: std::ops::RangeInclusive<usize>, k: usize, r: i64) -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    sizes.prop_flat_map(move |n| (Just(n), vec(vec(-r..=r, n * n), k)))
}

fn poly_from_coeffs(m: usize, coeffs: &[i64]) -> MultilinearPoly<Rational> {
    let perms = polyimage::freealg::permutations(m);
    MultilinearPoly::from_terms(m, perms.into_iter().zip(coeffs.iter().map(|&c| q(c)))).unwrap()
}

fn quad(a: (i64, i64), b: (i64, i64), d: i64) -> Scalar {
    Scalar::quad(Rational::new(a.0.into(), a.1.into()), Rational::new(b.0.into(), b.1.into()), d)
}

fn frac() -> impl Strategy<Value = (i64, i64)> {
    (-20i64..=20, 1i64..=9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quadratic_field_axioms(a in (frac(), frac()), b in (frac(), frac()), c in (frac(), frac())) {
        let (x, y, z) = (quad(a.0, a.1, 3), quad(b.0, b.1, 3), quad(c.0, c.1, 3));
        prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
        prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z.clone());
        prop_assert_eq!((x.clone() + y.clone()) + z.clone(), x.clone() + (y.clone() + z));
        if !x.is_zero() {
            prop_assert!((x.clone() * x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn prime_field_axioms(a in 0i64..7, b in 0i64..7, c in 0i64..7) {
        let (x, y, z) = (F7::new(a), F7::new(b), F7::new(c));
        prop_assert_eq!((x * y) * z, x * (y * z));
        prop_assert_eq!(x * (y + z), x * y + x * z);
        if a != 0 {
            prop_assert_eq!(x * x.inv().unwrap(), F7::one());
        }
    }

    #[test]
    fn norm_of_quadratic_element(a in frac(), b in frac(), d in prop::sample::select(vec![2i64, 3, 5, 6, -1])) {
        let x = quad(a, b, d);
        let n = x.clone() * x.conjugate();
        let ar = Rational::new(a.0.into(), a.1.into());
        let br = Rational::new(b.0.into(), b.1.into());
        prop_assert_eq!(n.to_rational(), Some(ar.clone() * ar - Rational::from_integer(d.into()) * br.clone() * br));
    }

    #[test]
    fn scalar_text_round_trip(a in frac(), b in frac(), p in 0i64..11) {
        let x = quad(a, b, 6);
        prop_assert_eq!(parse_scalar(&x.to_string(), &x.field_spec()).unwrap(), x);
        let r = Scalar::from_ratio(a.0, a.1);
        prop_assert_eq!(parse_scalar(&r.to_string(), &FieldSpec::Rationals).unwrap(), r);
        let spec = FieldSpec::prime(11).unwrap();
        let m = spec.from_i64(p);
        prop_assert_eq!(parse_scalar(&m.to_string(), &spec).unwrap(), m);
    }

    #[test]
    fn commutators_are_traceless((n, ms) in matrices(1..=5, 2, 9)) {
        let (a, b) = (rat_matrix(n, &ms[0]), rat_matrix(n, &ms[1]));
        prop_assert!(a.commutator(&b).trace().is_zero());
    }

    #[test]
    fn conjugation_round_trip((n, ms) in matrices(2..=5, 1, 9), seed in any::<u64>()) {
        let a = sc_matrix(n, &ms[0]);
        let (p, pinv) = random::unimodular(&mut random::rng(seed), n);
        let back = conjugate(&conjugate(&a, &p).unwrap(), &pinv).unwrap();
        prop_assert_eq!(back, a.clone());
        prop_assert_eq!(conjugate(&a, &p).unwrap().trace(), a.trace());
    }

    #[test]
    fn jordan_round_trip(seed in any::<u64>(), n in 3usize..=6, k in 0usize..5) {
        let mut rng = random::rng(seed);
        let spec = random::jordan_spec(&mut rng, n, random::SpecKind::ALL[k]);
        let (p, pinv) = random::unimodular(&mut rng, n);
        let d = p.mul(&jordan_matrix(&spec)).mul(&pinv);
        let dq = d.try_map(|x| x.to_rational()).unwrap();
        let (found, basis) = rational_jordan(&dq).unwrap();
        prop_assert_eq!(conjugate(&jordan_matrix(&found), &basis).unwrap(), dq);
    }

    #[test]
    fn kernel_vectors_are_annihilated(rows in 1usize..5, cols in 1usize..6, seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        // low rank on purpose so that the kernel is usually nontrivial
        let base: Vec<Vec<Rational>> = (0..2).map(|_| (0..cols).map(|_| q(random::int(&mut rng, 3))).collect()).collect();
        let m: Vec<Vec<Rational>> = (0..rows)
            .map(|_| {
                let (s, t) = (q(random::int(&mut rng, 2)), q(random::int(&mut rng, 2)));
                (0..cols).map(|j| s.clone() * base[0][j].clone() + t.clone() * base[1][j].clone()).collect()
            })
            .collect();
        for v in kernel(&m, cols) {
            for row in &m {
                let dot = row.iter().zip(&v).fold(Rational::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
                prop_assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn evaluation_is_multilinear(
        (n, ms) in matrices(2..=3, 5, 4),
        coeffs in vec(-3i64..=3, 24),
        slot in 0usize..4,
        s in -5i64..=5,
        t in -5i64..=5,
    ) {
        let f = poly_from_coeffs(4, &coeffs);
        let mut args: Vec<Matrix<Rational>> = ms[..4].iter().map(|v| rat_matrix(n, v)).collect();
        let a = args[slot].clone();
        let b = rat_matrix(n, &ms[4]);
        args[slot] = a.scale(&q(s)).add(&b.scale(&q(t)));
        let mixed = f.evaluate(&args).unwrap();
        args[slot] = a;
        let fa = f.evaluate(&args).unwrap();
        args[slot] = b;
        let fb = f.evaluate(&args).unwrap();
        prop_assert_eq!(mixed, fa.scale(&q(s)).add(&fb.scale(&q(t))));
    }

    #[test]
    fn hall_round_trip(coords in vec(-4i64..=4, 9)) {
        let basis = hall_basis::<Rational>();
        let f = basis.iter().zip(&coords).fold(MultilinearPoly::zero(4), |acc, (b, &c)| acc.add(&b.scale(&q(c))));
        let h = hall_decompose4(&f).unwrap();
        prop_assert_eq!(h.recompose(), f);
        let got: Vec<Rational> = h.betas.iter().chain(h.alphas.iter()).cloned().collect();
        prop_assert_eq!(got, coords.iter().map(|&c| q(c)).collect::<Vec<_>>());
    }

    #[test]
    fn substitution_matches_inserting_identity((n, ms) in matrices(2..=3, 3, 4), coeffs in vec(-3i64..=3, 24), i in 1usize..=4) {
        let f = poly_from_coeffs(4, &coeffs);
        let g = f.substitute_one(i).unwrap();
        let args: Vec<Matrix<Rational>> = ms.iter().map(|v| rat_matrix(n, v)).collect();
        let mut with_id = args.clone();
        with_id.insert(i - 1, Matrix::identity(n));
        prop_assert_eq!(g.evaluate(&args).unwrap(), f.evaluate(&with_id).unwrap());
    }

    #[test]
    fn shift_bracket_is_always_consistent(n in 2usize..=8, seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let mut t = Matrix::<Rational>::zeros(n);
        for i in 0..n {
            t[(i, i)] = q(random::int(&mut rng, 5));
            if i + 1 < n {
                t[(i, i + 1)] = q(random::int(&mut rng, 5));
            }
        }
        let tr = t.trace();
        t[(n - 1, n - 1)] = t[(n - 1, n - 1)].clone() - tr;
        let b = shift_bracket_solve(&t).unwrap();
        prop_assert_eq!(Matrix::shift(n).commutator(&b), t);
    }

    #[test]
    fn st4_on_powers((n, ms) in matrices(2..=4, 3, 4)) {
        let (a, b, c) = (rat_matrix(n, &ms[0]), rat_matrix(n, &ms[1]), rat_matrix(n, &ms[2]));
        let lhs = standard_poly::<Rational>(4).evaluate(&[a.clone(), a.mul(&a), b.clone(), c.clone()]).unwrap();
        let rhs = a.commutator(&a.commutator(&b).commutator(&a.commutator(&c)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn specialization_identities((n, ms) in matrices(2..=3, 3, 4), alphas in vec(-4i64..=4, 6)) {
        let basis = hall_basis::<Rational>();
        let f = basis[3..].iter().zip(&alphas).fold(MultilinearPoly::zero(4), |acc, (b, &c)| acc.add(&b.scale(&q(c))));
        let alpha: [Rational; 6] = std::array::from_fn(|k| q(alphas[k]));
        let abc = [rat_matrix(n, &ms[0]), rat_matrix(n, &ms[1]), rat_matrix(n, &ms[2])];
        let ab = abc[0].commutator(&abc[1]);
        let ac = abc[0].commutator(&abc[2]);
        for (roles, mu1, mu2) in specialization_table(&alpha) {
            let args: Vec<Matrix<Rational>> = roles.iter().map(|&r| abc[r].clone()).collect();
            let expected = ab.mul(&ac).scale(&mu1).add(&ac.mul(&ab).scale(&mu2));
            prop_assert_eq!(f.evaluate(&args).unwrap(), expected, "roles {:?}", roles);
        }
    }

    #[test]
    fn image_is_closed_under_conjugation_and_scaling(
        (n, ms) in matrices(2..=3, 3, 4),
        coeffs in vec(-3i64..=3, 6),
        seed in any::<u64>(),
        c in -4i64..=4,
    ) {
        let f = poly_from_coeffs(3, &coeffs).map(|x| Scalar::Rat(x.clone()));
        let args: Vec<Matrix<Scalar>> = ms.iter().map(|v| sc_matrix(n, v)).collect();
        let value = f.evaluate(&args).unwrap();
        let (p, _) = random::unimodular(&mut random::rng(seed), n);
        let conj: Vec<Matrix<Scalar>> = args.iter().map(|a| conjugate(a, &p).unwrap()).collect();
        prop_assert_eq!(f.evaluate(&conj).unwrap(), conjugate(&value, &p).unwrap());
        let mut scaled = args.clone();
        scaled[1] = scaled[1].scale(&Scalar::from_i64(c));
        prop_assert_eq!(f.evaluate(&scaled).unwrap(), value.scale(&Scalar::from_i64(c)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn commutator_witnesses_verify(seed in any::<u64>(), n in 2usize..=5) {
        let d = random::trace_zero(&mut random::rng(seed), n, 6);
        let cert = commutator_witness(&d).unwrap();
        prop_assert!(cert.verified && verify_witness(&cert));
    }

    #[test]
    fn plans_satisfy_their_systems(seed in any::<u64>(), n in 3usize..=7, k in 0usize..5, l in prop::sample::select(vec![0i64, 1, 2, -2, 3])) {
        let mut rng = random::rng(seed);
        let spec = random::jordan_spec(&mut rng, n, random::SpecKind::ALL[k]);
        let lambda = Scalar::from_i64(l);
        let superdiag = spec.superdiagonal();
        // a plan may need another block order; the witness tries all of them
        if let Ok(plan) = diagonal_plan(&spec, &lambda, &superdiag) {
            prop_assert!(plan.check(&spec.diagonal(), &superdiag), "case {}", plan.case);
        }
        let cert = two_commutator_from_spec(&spec, &lambda).unwrap();
        prop_assert!(cert.verified);
    }

    #[test]
    fn two_commutator_on_conjugated_targets(seed in any::<u64>(), n in 3usize..=5) {
        let d = random::rational_spectrum_target(&mut random::rng(seed), n);
        let cert = two_commutator_witness(&d, &Scalar::from_i64(2)).unwrap();
        prop_assert!(cert.verified && verify_witness(&cert));
        prop_assert_eq!(&cert.target, &d);
    }

    #[test]
    fn oracle_and_constructive_agree_on_target(seed in any::<u64>()) {
        let d = random::rational_spectrum_target(&mut random::rng(seed), 3);
        let f = polyimage::freealg::two_commutator_poly(&Scalar::zero());
        let cfg = SearchConfig { seed, ..SearchConfig::default() };
        let constructive = two_commutator_witness(&d, &Scalar::zero()).unwrap();
        prop_assert!(verify_witness(&constructive));
        if let Ok(hit) = linear_slice_search(&f, &[0, 1, 0, 2], &d, &cfg) {
            prop_assert!(verify_witness(&hit));
            prop_assert_eq!(&hit.target, &constructive.target);
        }
    }

    #[test]
    fn randomized_refutation_matches_exhaustive(coeffs in vec(-2i64..=2, 6), n in 1usize..=3, seed in any::<u64>()) {
        let f = poly_from_coeffs(3, &coeffs);
        let fast = CheckConfig { mode: CheckMode::Randomized, samples: 20, seed, ..CheckConfig::default() };
        let full = CheckConfig { mode: CheckMode::Exhaustive, ..CheckConfig::default() };
        let r = is_identity(&f, n, &fast).unwrap();
        if !r.holds {
            prop_assert!(!is_identity(&f, n, &full).unwrap().holds);
        }
    }

    #[test]
    fn low_degree_is_neither_identity_nor_central(seed in any::<u64>(), case in 0usize..3) {
        // (m, n) with m <= 2n - 1
        let (m, n) = [(2, 2), (3, 2), (4, 3)][case];
        let f = random::multilinear(&mut random::rng(seed), m, 4, 3);
        let cfg = CheckConfig { mode: CheckMode::Exhaustive, ..CheckConfig::default() };
        prop_assert!(!is_identity(&f, n, &cfg).unwrap().holds);
        prop_assert!(!is_central(&f, n, &cfg).unwrap().holds);
    }

    #[test]
    fn span_is_monotone_and_a_lie_ideal(seed in any::<u64>(), coeffs in vec(-2i64..=2, 6), n in 2usize..=3) {
        let f = poly_from_coeffs(3, &coeffs);
        let mut last = 0;
        let mut report = None;
        for samples in [1, 3, 8] {
            let r = span_of_image(&f, n, samples, seed).unwrap();
            prop_assert!(r.dimension >= last);
            last = r.dimension;
            report = Some(r);
        }
        let report = report.unwrap();
        let mut space = RowSpace::new(n * n);
        for b in &report.basis {
            space.insert(b.entries());
        }
        for s in &report.basis {
            for i in 0..n {
                for j in 0..n {
                    let e = Matrix::<Rational>::unit(n, i, j);
                    prop_assert!(space.contains(s.commutator(&e).entries()));
                }
            }
        }
    }
}
