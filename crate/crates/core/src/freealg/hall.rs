//! Degree-4 proper polynomials in the basis of three left-normed brackets and
//! six products of two commutators.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{solve_linear, LinearSolution};

use super::{parse_poly, MultilinearPoly};

const BASIS: [&str; 9] = [
    "[[[x2,x1],x3],x4]",
    "[[[x3,x1],x2],x4]",
    "[[[x4,x1],x2],x3]",
    "[x1,x2][x3,x4]",
    "[x1,x3][x2,x4]",
    "[x1,x4][x2,x3]",
    "[x2,x3][x1,x4]",
    "[x2,x4][x1,x3]",
    "[x3,x4][x1,x2]",
];

/// Coordinates of a proper degree-4 polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct HallDecomposition<F> {
    /// Coefficients of `[[[x2,x1],x3],x4]`, `[[[x3,x1],x2],x4]`, `[[[x4,x1],x2],x3]`.
    pub betas: [F; 3],
    /// Coefficients of `[x1,x2][x3,x4]`, `[x1,x3][x2,x4]`, `[x1,x4][x2,x3]`,
    /// `[x2,x3][x1,x4]`, `[x2,x4][x1,x3]`, `[x3,x4][x1,x2]`.
    pub alphas: [F; 6],
}

/// The nine basis polynomials, brackets first.
pub fn hall_basis<F: Field>() -> Vec<MultilinearPoly<F>> {
    BASIS
        .iter()
        .map(|s| {
            parse_poly(s)
                .expect("basis text parses")
                .map(|c| F::from_rational(c).expect("integer coefficient"))
        })
        .collect()
}

impl<F: Field> HallDecomposition<F> {
    pub fn recompose(&self) -> MultilinearPoly<F> {
        let basis = hall_basis::<F>();
        self.betas
            .iter()
            .chain(self.alphas.iter())
            .zip(&basis)
            .fold(MultilinearPoly::zero(4), |acc, (c, b)| acc.add(&b.scale(c)))
    }

    /// Whether `alpha1 = alpha4 = alpha6 = alpha3 = -alpha2 = -alpha5`, i.e.
    /// the product part is a multiple of `St_4`.
    pub fn is_standard_pattern(&self) -> bool {
        let a = &self.alphas;
        a[0] == a[3] && a[0] == a[5] && a[0] == a[2] && a[0] == -a[1].clone() && a[0] == -a[4].clone()
    }
}

/// Expresses a proper degree-4 polynomial in the nine-element basis.
pub fn hall_decompose4<F: Field>(f: &MultilinearPoly<F>) -> Result<HallDecomposition<F>> {
    if f.degree() != 4 {
        return Err(Error::UnsupportedDegree(format!("Hall decomposition needs degree 4, got {}", f.degree())));
    }
    if let Some(i) = (1..=4).find(|&i| !f.substitute_one(i).map(|g| g.is_zero()).unwrap_or(false)) {
        return Err(Error::NotProper(format!("setting x{i} = 1 leaves a nonzero polynomial")));
    }
    let cols: Vec<Vec<F>> = hall_basis::<F>().iter().map(|b| b.coeff_vector()).collect();
    let target = f.coeff_vector();
    let rows: Vec<Vec<F>> = (0..target.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    match solve_linear(&rows, &target)? {
        LinearSolution::Solved { solution, .. } => {
            let mut it = solution.into_iter();
            let mut take = || it.next().unwrap();
            Ok(HallDecomposition {
                betas: [take(), take(), take()],
                alphas: [take(), take(), take(), take(), take(), take()],
            })
        }
        // all substitutions vanish but f is outside the span; only possible
        // in small characteristic
        LinearSolution::Inconsistent => Err(Error::NotProper("outside the span of the degree-4 basis".into())),
    }
}
