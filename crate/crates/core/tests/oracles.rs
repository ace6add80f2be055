//! Cross-checks against small independent implementations: integer matrices
//! as nested vectors, polynomials as word maps, brute-force enumeration.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use polyimage::analysis::{is_identity, span_of_image, CheckConfig, CheckMode};
use polyimage::freealg::{hall_decompose4, parse_poly, standard_poly};
use polyimage::oracle::{exhaustive_image, DEFAULT_IMAGE_BUDGET};
use polyimage::random;
use polyimage::scalar::sqrt_needed;
use polyimage::witness::{commutator_witness, elementary_tuple, linear_specialization_solve, shift_bracket_solve};
use polyimage::{Error, FieldSpec, Matrix, MultilinearPoly, Rational, Scalar};

type M = Vec<Vec<i64>>;

fn zeros(n: usize) -> M {
    vec![vec![0; n]; n]
}

fn unit(n: usize, i: usize, j: usize) -> M {
    let mut m = zeros(n);
    m[i][j] = 1;
    m
}

fn mul(a: &M, b: &M) -> M {
    let n = a.len();
    let mut c = zeros(n);
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

fn lin(a: &M, s: i64, b: &M, t: i64) -> M {
    a.iter().zip(b).map(|(r, q)| r.iter().zip(q).map(|(x, y)| s * x + t * y).collect()).collect()
}

fn bracket(a: &M, b: &M) -> M {
    lin(&mul(a, b), 1, &mul(b, a), -1)
}

fn is_zero(a: &M) -> bool {
    a.iter().flatten().all(|&x| x == 0)
}

/// Evaluates a word map `word -> coeff` directly.
fn eval_words(words: &BTreeMap<Vec<usize>, i64>, args: &[M]) -> M {
    let n = args[0].len();
    let mut acc = zeros(n);
    for (w, &c) in words {
        let mut p: M = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        for &k in w {
            p = mul(&p, &args[k]);
        }
        acc = lin(&acc, 1, &p, c);
    }
    acc
}

/// Integer word map of a rational multilinear polynomial.
fn words_of(f: &MultilinearPoly<Rational>) -> BTreeMap<Vec<usize>, i64> {
    f.terms()
        .map(|(w, c)| {
            assert!(c.is_integer());
            (w.clone(), c.to_integer().try_into().unwrap())
        })
        .collect()
}

fn to_crate(a: &M) -> Matrix<Rational> {
    Matrix::from_fn(a.len(), |i, j| Rational::from_integer(BigInt::from(a[i][j])))
}

/// Symbolic product of bracket expressions: each factor is a word map.
fn product(a: &BTreeMap<Vec<usize>, i64>, b: &BTreeMap<Vec<usize>, i64>) -> BTreeMap<Vec<usize>, i64> {
    let mut out = BTreeMap::new();
    for (u, x) in a {
        for (v, y) in b {
            let w: Vec<usize> = u.iter().chain(v).copied().collect();
            *out.entry(w).or_insert(0) += x * y;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn var(i: usize) -> BTreeMap<Vec<usize>, i64> {
    BTreeMap::from([(vec![i], 1)])
}

fn sym_bracket(a: &BTreeMap<Vec<usize>, i64>, b: &BTreeMap<Vec<usize>, i64>) -> BTreeMap<Vec<usize>, i64> {
    let mut out = product(a, b);
    for (w, c) in product(b, a) {
        *out.entry(w).or_insert(0) -= c;
    }
    out.retain(|_, c| *c != 0);
    out
}

fn signed_permutations(m: usize) -> BTreeMap<Vec<usize>, i64> {
    fn rec(prefix: &mut Vec<usize>, m: usize, out: &mut BTreeMap<Vec<usize>, i64>) {
        if prefix.len() == m {
            let inversions = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).filter(|&(i, j)| prefix[i] > prefix[j]).count();
            out.insert(prefix.clone(), if inversions % 2 == 0 { 1 } else { -1 });
            return;
        }
        for k in 0..m {
            if !prefix.contains(&k) {
                prefix.push(k);
                rec(prefix, m, out);
                prefix.pop();
            }
        }
    }
    let mut out = BTreeMap::new();
    rec(&mut Vec::new(), m, &mut out);
    out
}

#[test]
fn evaluation_matches_word_expansion() {
    let mut rng = random::rng(11);
    for m in 2..=5 {
        let f = random::multilinear(&mut rng, m, 6, 3);
        let words = words_of(&f);
        for n in 1..=3 {
            let args: Vec<M> = (0..m)
                .map(|_| (0..n).map(|_| (0..n).map(|_| random::int(&mut rng, 4)).collect()).collect())
                .collect();
            let crate_args: Vec<Matrix<Rational>> = args.iter().map(to_crate).collect();
            assert_eq!(f.evaluate(&crate_args).unwrap(), to_crate(&eval_words(&words, &args)));
        }
    }
}

#[test]
fn standard_polynomial_is_the_signed_sum() {
    for k in 2..=5 {
        assert_eq!(words_of(&standard_poly(k)), signed_permutations(k));
    }
    // 24 monomials, 12 of each sign
    let st4 = signed_permutations(4);
    assert_eq!(st4.len(), 24);
    assert_eq!(st4.values().sum::<i64>(), 0);
}

/// All `(n^2)^m` unit tuples, by brute force.
fn vanishes_on_units(words: &BTreeMap<Vec<usize>, i64>, m: usize, n: usize) -> bool {
    let units: Vec<M> = (0..n * n).map(|k| unit(n, k / n, k % n)).collect();
    let total = (n * n).pow(m as u32);
    (0..total).all(|mut code| {
        let args: Vec<M> = (0..m)
            .map(|_| {
                let u = units[code % (n * n)].clone();
                code /= n * n;
                u
            })
            .collect();
        is_zero(&eval_words(words, &args))
    })
}

#[test]
fn identity_checks_match_brute_force() {
    let cfg = CheckConfig { mode: CheckMode::Exhaustive, ..CheckConfig::default() };
    let st4 = standard_poly::<Rational>(4);
    assert!(vanishes_on_units(&signed_permutations(4), 4, 2));
    assert!(!vanishes_on_units(&signed_permutations(4), 4, 3));
    let on2 = is_identity(&st4, 2, &cfg).unwrap();
    assert!(on2.holds);
    assert_eq!(on2.evaluations, 256);
    assert!(!is_identity(&st4, 3, &cfg).unwrap().holds);

    let mut rng = random::rng(5);
    for _ in 0..20 {
        let f = random::multilinear(&mut rng, 3, 3, 2);
        for n in 1..=2 {
            assert_eq!(is_identity(&f, n, &cfg).unwrap().holds, vanishes_on_units(&words_of(&f), 3, n));
        }
    }
}

#[test]
fn unit_chain_value() {
    let chain = [unit(3, 0, 0), unit(3, 0, 1), unit(3, 1, 2), unit(3, 2, 1)];
    let p = chain.iter().skip(1).fold(chain[0].clone(), |acc, u| mul(&acc, u));
    assert_eq!(p, unit(3, 0, 1));

    let f = parse_poly("3*x2*x1*x3*x4 - x1*x2*x3*x4").unwrap();
    let cert = elementary_tuple(&f, 3, 1, 2).unwrap();
    assert!(cert.verified);
    let expected: Vec<Matrix<Rational>> = chain.iter().map(to_crate).collect();
    // leading monomial x1x2x3x4 reads the chain in order
    assert_eq!(cert.args, expected);
    assert_eq!(cert.target, to_crate(&lin(&unit(3, 0, 1), -1, &zeros(3), 0)));

    let odd = [unit(2, 0, 0), unit(2, 0, 1), unit(2, 1, 1)];
    assert_eq!(mul(&mul(&odd[0], &odd[1]), &odd[2]), unit(2, 0, 1));
}

#[test]
fn commutator_image_over_tiny_fields() {
    // brute force over all pairs of 2x2 matrices mod p
    for p in [2i64, 3] {
        let all: Vec<M> = (0..p.pow(4))
            .map(|mut c| {
                let mut m = zeros(2);
                for k in 0..4 {
                    m[k / 2][k % 2] = c % p;
                    c /= p;
                }
                m
            })
            .collect();
        let reduce = |m: M| -> M { m.into_iter().map(|r| r.into_iter().map(|x| x.rem_euclid(p)).collect()).collect() };
        let mut comm = BTreeSet::new();
        let mut prod = BTreeSet::new();
        for a in &all {
            for b in &all {
                comm.insert(reduce(bracket(a, b)));
                prod.insert(reduce(mul(a, b)));
            }
        }
        let traceless = all.iter().filter(|m| (m[0][0] + m[1][1]) % p == 0).count();
        assert_eq!(comm.len(), traceless);
        assert!(comm.iter().all(|m| (m[0][0] + m[1][1]) % p == 0));
        assert_eq!(prod.len(), all.len());

        let c = exhaustive_image(&parse_poly("[x1,x2]").unwrap(), 2, p as u64, DEFAULT_IMAGE_BUDGET).unwrap();
        assert_eq!(c.image_size, comm.len());
        assert!(c.contains_all_traceless);
        let x = exhaustive_image(&parse_poly("x1*x2").unwrap(), 2, p as u64, DEFAULT_IMAGE_BUDGET).unwrap();
        assert_eq!(x.image_size, prod.len());
        assert_eq!(x.classification, "full");
    }
    assert_eq!(exhaustive_image(&parse_poly("[x1,x2]").unwrap(), 2, 2, DEFAULT_IMAGE_BUDGET).unwrap().image_size, 8);
}

#[test]
fn st4_hall_coordinates_by_symbolic_expansion() {
    let x: Vec<_> = (0..4).map(var).collect();
    let pairs = [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2), (1, 2, 0, 3), (1, 3, 0, 2), (2, 3, 0, 1)];
    let products: Vec<_> =
        pairs.iter().map(|&(a, b, c, d)| product(&sym_bracket(&x[a], &x[b]), &sym_bracket(&x[c], &x[d]))).collect();
    let alphas = [1i64, -1, 1, 1, -1, 1];
    let mut sum: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    for (p, &a) in products.iter().zip(&alphas) {
        for (w, c) in p {
            *sum.entry(w.clone()).or_insert(0) += a * c;
        }
    }
    sum.retain(|_, c| *c != 0);
    assert_eq!(sum, signed_permutations(4));

    let h = hall_decompose4(&standard_poly::<Rational>(4)).unwrap();
    assert!(h.betas.iter().all(|b| b.is_zero()));
    let got: Vec<i64> = h.alphas.iter().map(|a| a.to_integer().try_into().unwrap()).collect();
    assert_eq!(got, alphas);

    // the first left-normed bracket and the first product are basis elements
    let lb = sym_bracket(&sym_bracket(&sym_bracket(&x[1], &x[0]), &x[2]), &x[3]);
    let lb_poly = MultilinearPoly::from_terms(4, lb.iter().map(|(w, &c)| (w.clone(), Rational::from_integer(c.into())))).unwrap();
    let h = hall_decompose4(&lb_poly).unwrap();
    assert!(h.betas[0].is_one() && h.betas[1].is_zero() && h.betas[2].is_zero());
    assert!(h.alphas.iter().all(|a| a.is_zero()));
}

#[test]
fn commutator_witness_for_a_unit() {
    let d = Matrix::<Rational>::unit(3, 0, 1);
    let cert = commutator_witness(&d).unwrap();
    // [diag(1,2,3), B] has entries (a_i - a_j) b_ij
    let a = vec![vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]];
    let b = lin(&unit(3, 0, 1), -1, &zeros(3), 0);
    assert_eq!(bracket(&a, &b), unit(3, 0, 1));
    assert_eq!(cert.args, vec![to_crate(&a), to_crate(&b)]);
}

#[test]
fn slot_solve_against_the_bracket_formula() {
    let a = Matrix::<Rational>::diagonal(&[1, 2, 3].map(|v| Rational::from_integer(v.into())));
    let f = parse_poly("[x1,x2]").unwrap();
    let cert = linear_specialization_solve(&f, 2, std::slice::from_ref(&a), &Matrix::unit(3, 0, 1)).unwrap();
    // X_12 = 1 / (a_1 - a_2)
    assert_eq!(cert.args[1], to_crate(&lin(&unit(3, 0, 1), -1, &zeros(3), 0)));
    let err = linear_specialization_solve(&f, 2, &[a], &Matrix::unit(3, 0, 0)).unwrap_err();
    assert!(matches!(err, Error::TargetNotInSlice));
}

#[test]
fn shift_bracket_small_cases() {
    for t in [vec![vec![1, 0], vec![0, -1]], vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, -2]], vec![vec![2, 5, 0], vec![0, -1, 7], vec![0, 0, -1]]] {
        let b = shift_bracket_solve(&to_crate(&t)).unwrap();
        let bi: M = b.rows().iter().map(|r| r.iter().map(|x| x.to_integer().try_into().unwrap()).collect()).collect();
        let n = t.len();
        let s: M = (0..n).map(|i| (0..n).map(|j| i64::from(j == i + 1)).collect()).collect();
        assert_eq!(bracket(&s, &bi), t);
    }
}

/// Square-free decomposition by trial division.
fn square_free(k: u64) -> (u64, u64) {
    let (mut scale, mut rest) = (1, k);
    let mut p = 2;
    while p * p <= rest {
        while rest % (p * p) == 0 {
            rest /= p * p;
            scale *= p;
        }
        p += 1;
    }
    (scale, rest)
}

#[test]
fn radicands_match_trial_division() {
    for n in 3..=40u64 {
        let (scale, d) = square_free(n * (n - 2));
        let plan = sqrt_needed(n as usize);
        assert_eq!(plan.scale, BigInt::from(scale), "n = {n}");
        if d == 1 {
            assert_eq!(plan.field, FieldSpec::Rationals);
        } else {
            assert_eq!(plan.field, FieldSpec::Quadratic { d: d as i64 });
        }
        let root = plan.root();
        assert_eq!(root.clone() * root, Scalar::from_i64((n * (n - 2)) as i64));
    }
}

#[test]
fn commutator_span_is_sl3() {
    // rank of all [e_ij, e_kl] computed by hand-rolled elimination
    let n = 3;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for a in 0..9 {
        for b in 0..9 {
            let c = bracket(&unit(n, a / 3, a % 3), &unit(n, b / 3, b % 3));
            rows.push(c.iter().flatten().map(|&x| Rational::from_integer(x.into())).collect());
        }
    }
    let mut rank = 0;
    for col in 0..9 {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, piv);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone() / pivot[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        rank += 1;
    }
    assert_eq!(rank, 8);
    let report = span_of_image(&parse_poly("[x1,x2]").unwrap(), 3, 20, 0).unwrap();
    assert_eq!(report.dimension, rank);
    assert!(report.contains_sln && !report.contains_identity);
    let full = span_of_image(&parse_poly("x1*x2").unwrap(), 2, 20, 0).unwrap();
    assert_eq!(full.dimension, 4);
}
