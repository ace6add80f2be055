use crate::error::{Error, Result};
use crate::field::Field;
use crate::freealg::{commutator_poly, leading_term, MultilinearPoly};
use crate::linalg::{inverse, Matrix, RowSpace};

use super::WitnessCertificate;

fn unit_chain(m: usize, n: usize, i: usize, j: usize) -> Vec<(usize, usize)> {
    let others: Vec<usize> = (0..n).filter(|&x| x != i && x != j).collect();
    let mut chain = vec![(i, i), (i, j)];
    if m == 3 {
        chain.push((j, j));
        return chain;
    }
    // even m = 2k walks through l_1..l_{k-1}, looping at all but the last;
    // odd m = 2k - 1 walks through l_1..l_{k-2}, looping at every one
    let (count, loops) = if m.is_multiple_of(2) { (m / 2 - 1, m / 2 - 2) } else { (m.div_ceil(2) - 2, m.div_ceil(2) - 2) };
    let ls = &others[..count];
    chain.push((j, ls[0]));
    for t in 0..count {
        if t < loops {
            chain.push((ls[t], ls[t]));
        }
        let next = if t + 1 < count { ls[t + 1] } else { j };
        chain.push((ls[t], next));
    }
    debug_assert_eq!(chain.len(), m);
    chain
}

/// Matrix-unit tuple on which `f` takes the value `alpha e_ij`.
///
/// `i`, `j` are one-based. The tuple follows the chain
/// `e_ii, e_ij, e_{j l1}, ...` placed so that the first monomial of `f`
/// with nonzero coefficient `alpha` reads it in order.
pub fn elementary_tuple<F: Field>(f: &MultilinearPoly<F>, n: usize, i: usize, j: usize) -> Result<WitnessCertificate<F>> {
    let m = f.degree();
    if m < 3 {
        return Err(Error::Unsupported(format!(
            "unit chains need degree at least 3 (got {m}); use the commutator route"
        )));
    }
    if n < (m + 2) / 2 {
        return Err(Error::BelowBound(format!("degree {m} needs n >= {}, got {n}", (m + 2) / 2)));
    }
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::IndexOutOfRange(format!("({i},{j}) in dimension {n}")));
    }
    if i == j {
        return Err(Error::EqualIndices);
    }
    let (sigma, alpha) = leading_term(f).ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    let chain = unit_chain(m, n, i - 1, j - 1);
    let mut args = vec![Matrix::zeros(n); m];
    for (t, &(r, c)) in chain.iter().enumerate() {
        args[sigma[t]] = Matrix::unit(n, r, c);
    }
    let target = Matrix::unit(n, i - 1, j - 1).scale(&alpha);
    Ok(WitnessCertificate::new(f.clone(), args, target, None, "unit-chain"))
}

fn find_cyclic_vector_pair<F: Field>(m: &Matrix<F>) -> Option<Vec<F>> {
    let n = m.n();
    let independent = |v: &[F]| {
        let mut rs = RowSpace::new(n);
        rs.insert(v);
        rs.insert(&m.mul_vec(v))
    };
    let basis = |k: usize| -> Vec<F> { (0..n).map(|x| if x == k { F::one() } else { F::zero() }).collect() };
    for k in 0..n {
        let v = basis(k);
        if independent(&v) {
            return Some(v);
        }
    }
    for k in 0..n {
        for l in k + 1..n {
            let mut v = basis(k);
            v[l] = F::one();
            if independent(&v) {
                return Some(v);
            }
        }
    }
    None
}

fn zero_diag_basis<F: Field>(m: &Matrix<F>) -> Result<Matrix<F>> {
    let n = m.n();
    if n == 1 || m.diagonal_entries().iter().all(|x| x.is_zero()) {
        return Ok(Matrix::identity(n));
    }
    let v = find_cyclic_vector_pair(m).ok_or(Error::CentralMatrix)?;
    let mv = m.mul_vec(&v);
    let mut cols = vec![v.clone(), mv.clone()];
    let mut rs = RowSpace::new(n);
    rs.insert(&v);
    rs.insert(&mv);
    for k in 0..n {
        let e: Vec<F> = (0..n).map(|x| if x == k { F::one() } else { F::zero() }).collect();
        if rs.insert(&e) {
            cols.push(e);
        }
    }
    let q = Matrix::from_columns(&cols);
    let qinv = inverse(&q)?;
    let conj = qinv.mul(m).mul(&q);
    let block = Matrix::from_fn(n - 1, |r, c| conj[(r + 1, c + 1)].clone());
    let inner = if block.is_scalar() && !block[(0, 0)].is_zero() && n > 2 {
        return Err(Error::CentralMatrix);
    } else {
        zero_diag_basis(&block)?
    };
    let lift = Matrix::from_fn(n, |r, c| match (r, c) {
        (0, 0) => F::one(),
        (0, _) | (_, 0) => F::zero(),
        _ => inner[(r - 1, c - 1)].clone(),
    });
    Ok(lift.mul(&qinv))
}

/// Returns `(P, Z)` with `Z = P D P^{-1}` having zero diagonal when
/// `trace(D) = 0` (at most one nonzero diagonal entry otherwise).
pub fn zero_diag_conjugate<F: Field>(d: &Matrix<F>) -> Result<(Matrix<F>, Matrix<F>)> {
    if d.n() > 1 && d.is_scalar() && !d.diagonal_entries().iter().all(|x| x.is_zero()) {
        return Err(Error::CentralMatrix);
    }
    if d.n() > 1 && d.is_zero() {
        return Err(Error::CentralMatrix);
    }
    let p = zero_diag_basis(d)?;
    let z = p.mul(d).mul(&inverse(&p)?);
    Ok((p, z))
}

fn check_distinct_diagonal<F: Field>(n: usize, sample: &F) -> Result<()> {
    let p = sample.characteristic();
    if p != 0 && (p as usize) < n {
        return Err(Error::Unsupported(format!("characteristic {p} too small for n = {n}")));
    }
    Ok(())
}

/// `[A, B] = D` for trace-zero `D`.
pub fn commutator_witness<F: Field>(d: &Matrix<F>) -> Result<WitnessCertificate<F>> {
    let n = d.n();
    if !d.trace().is_zero() {
        return Err(Error::TraceNonzero);
    }
    let poly = commutator_poly::<F>();
    if d.is_zero() {
        return Ok(WitnessCertificate::new(poly, vec![Matrix::zeros(n); 2], d.clone(), None, "commutator/zero"));
    }
    let sample = d.entries().iter().find(|x| !x.is_zero()).unwrap().clone();
    check_distinct_diagonal(n, &sample)?;
    let (p, z) = zero_diag_conjugate(d)?;
    let a0 = Matrix::diagonal(&(1..=n).map(F::from_usize).collect::<Vec<_>>());
    let b0 = Matrix::from_fn(n, |i, j| {
        if i == j {
            F::zero()
        } else {
            let diff = F::from_i64(i as i64 - j as i64);
            z[(i, j)].clone() * diff.inv().expect("distinct indices")
        }
    });
    let pinv = inverse(&p)?;
    let a = pinv.mul(&a0).mul(&p);
    let b = pinv.mul(&b0).mul(&p);
    Ok(WitnessCertificate::new(poly, vec![a, b], d.clone(), Some(pinv), "commutator/zero-diagonal"))
}

/// Solves `[A, X] = T` exactly.
pub fn solve_bracket<F: Field>(a: &Matrix<F>, t: &Matrix<F>) -> Result<Matrix<F>> {
    let comm = commutator_poly::<F>();
    comm.solve_slot(1, &[a.clone(), Matrix::zeros(a.n())], t)
}

/// `B` with `[S, B] = T`, where `S` is the shift and `T` is supported on
/// the diagonal and first superdiagonal with trace zero.
pub fn shift_bracket_solve<F: Field>(t: &Matrix<F>) -> Result<Matrix<F>> {
    let n = t.n();
    for i in 0..n {
        for j in 0..n {
            if (j != i && j != i + 1) && !t[(i, j)].is_zero() {
                return Err(Error::InvalidInput(format!("entry ({},{}) outside the bidiagonal", i + 1, j + 1)));
            }
        }
    }
    if !t.trace().is_zero() {
        return Err(Error::TraceNonzero);
    }
    solve_bracket(&Matrix::shift(n), t).map_err(|e| match e {
        Error::TargetNotInSlice => Error::Inconsistent("bidiagonal target outside [S, M_n]".into()),
        other => other,
    })
}

/// Fills slot `slot` (one-based) of `f` so that the value is `target`;
/// `fixed` lists the remaining arguments in order.
pub fn linear_specialization_solve<F: Field>(
    f: &MultilinearPoly<F>,
    slot: usize,
    fixed: &[Matrix<F>],
    target: &Matrix<F>,
) -> Result<WitnessCertificate<F>> {
    let m = f.degree();
    if slot == 0 || slot > m {
        return Err(Error::IndexOutOfRange(format!("slot {slot} of {m}")));
    }
    if fixed.len() + 1 != m {
        return Err(Error::ArityMismatch { expected: m, got: fixed.len() + 1 });
    }
    let mut args: Vec<Matrix<F>> = fixed.to_vec();
    args.insert(slot - 1, Matrix::zeros(target.n()));
    let x = f.solve_slot(slot - 1, &args, target)?;
    args[slot - 1] = x;
    Ok(WitnessCertificate::new(f.clone(), args, target.clone(), None, "linear-slot"))
}
