//! Exact constants, polynomials, rational functions and the difference fields.

pub mod algnum;
pub mod difference;
pub mod nffactor;
pub mod poly;
pub mod qpoly;
pub mod ratfunc;
pub mod zassenhaus;

pub use algnum::{AlgNum, Constants, Level, TowerError};
pub use difference::{
    dispersion, factor_ratfunc, phi, q_log, shift_relation, Case, DiffFieldSpec, Factored, Orbit, Orbits, SpecError,
};
pub use poly::Poly;
pub use ratfunc::RatFunc;

/// A difference field together with the constant tower it may extend.
#[derive(Clone, Debug)]
pub struct Ctx {
    pub spec: DiffFieldSpec,
    pub consts: Constants,
}

impl Ctx {
    pub fn new(spec: DiffFieldSpec, consts: Constants) -> Self {
        Ctx { spec, consts }
    }

    pub fn shift(h: i64) -> Self {
        Ctx::new(DiffFieldSpec::shift(AlgNum::from_int(h)).unwrap(), Constants::new())
    }

    pub fn qdiff(q: i64) -> Self {
        Ctx::new(DiffFieldSpec::qdiff(AlgNum::from_int(q)).unwrap(), Constants::new())
    }

    /// Same constants, field (k, φ^n).
    pub fn iterate(&self, n: i64) -> Self {
        Ctx::new(self.spec.iterate(n), self.consts.clone())
    }

    pub fn phi(&self, f: &RatFunc, power: i64) -> RatFunc {
        self.spec.phi(f, power)
    }
}
