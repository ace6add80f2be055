//! Constructive solvers producing argument tuples that evaluate to a target.

mod basic;
mod constructions;
mod pipeline;
mod plan;

pub use basic::{
    commutator_witness, elementary_tuple, linear_specialization_solve, shift_bracket_solve, solve_bracket,
    zero_diag_conjugate,
};
pub use constructions::{
    double_bracket_witness, st4_bidiagonal_witness, two_commutator_from_spec, two_commutator_witness,
    JordanFrame,
};
pub use pipeline::{degree3_witness, degree4_witness, pattern_name, specialization_table, witness, WitnessShape};
pub use plan::{diagonal_plan, DiagonalPlan};

use crate::field::Field;
use crate::freealg::MultilinearPoly;
use crate::linalg::Matrix;

/// A checkable claim `poly(args) = target`.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessCertificate<F: Field> {
    pub poly: MultilinearPoly<F>,
    /// Arguments, in the frame of `target`.
    pub args: Vec<Matrix<F>>,
    pub target: Matrix<F>,
    pub verified: bool,
    /// Similarity used during the construction: the arguments were built
    /// for `conjugator^{-1} * target * conjugator` and then moved back.
    pub conjugator: Option<Matrix<F>>,
    /// Short description of the construction path.
    pub route: String,
}

impl<F: Field> WitnessCertificate<F> {
    /// Builds a certificate, setting `verified` by exact re-evaluation.
    pub fn new(
        poly: MultilinearPoly<F>,
        args: Vec<Matrix<F>>,
        target: Matrix<F>,
        conjugator: Option<Matrix<F>>,
        route: impl Into<String>,
    ) -> Self {
        let verified = matches!(poly.evaluate(&args), Ok(v) if v == target);
        WitnessCertificate { poly, args, target, verified, conjugator, route: route.into() }
    }

    /// Re-evaluates the polynomial and compares with the target.
    pub fn check(&self) -> bool {
        matches!(self.poly.evaluate(&self.args), Ok(v) if v == self.target)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> WitnessCertificate<G> {
        WitnessCertificate {
            poly: self.poly.map(&f),
            args: self.args.iter().map(|a| a.map(&f)).collect(),
            target: self.target.map(&f),
            verified: self.verified,
            conjugator: self.conjugator.as_ref().map(|p| p.map(&f)),
            route: self.route.clone(),
        }
    }
}
