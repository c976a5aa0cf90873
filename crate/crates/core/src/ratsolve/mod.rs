//! Rational solutions of scalar equations and small systems, first-order
//! multiplicative solvability, and summability reduction.

mod scalar;
mod summability;
mod system;

pub use scalar::{multiplicative_solve, rational_solutions_scalar, rational_solutions_scalar_rhs};
pub use summability::{partial_fractions, summability_reduce, summability_reduce_many, PartialFractions};
pub use system::{
    rational_solutions_system, rational_solutions_system_rhs, rational_solutions_system_with, AffineSolutions,
    Uncoupling,
};

use crate::field::{AlgNum, Poly, RatFunc};
use crate::ore::OreError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatSolveError {
    #[error("trailing or leading coefficient vanishes")]
    Degenerate,
    #[error("matrix is not invertible")]
    Singular,
    #[error("no cyclic vector found")]
    NoCyclicVector,
    #[error("solution failed substitution check")]
    Verification,
    #[error(transparent)]
    Ore(#[from] OreError),
}

/// A basis of solutions over the constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSpace {
    pub basis: Vec<Vec<RatFunc>>,
    pub dimension: usize,
}

impl SolutionSpace {
    pub fn new(basis: Vec<Vec<RatFunc>>) -> Self {
        let dimension = basis.len();
        SolutionSpace { basis, dimension }
    }

    pub fn is_empty(&self) -> bool {
        self.dimension == 0
    }

    /// True when both spaces have the same span over the constants.
    pub fn same_span(&self, other: &SolutionSpace) -> bool {
        if self.dimension != other.dimension {
            return false;
        }
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        constant_rank(&all) == self.dimension
    }
}

/// A solution vector y together with the multipliers c of the right-hand sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSolution {
    pub y: Vec<RatFunc>,
    pub c: Vec<AlgNum>,
}

/// Rank over the constants of a family of vectors of rational functions.
pub fn constant_rank(vs: &[Vec<RatFunc>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let mut den = Poly::one();
    for v in vs {
        for x in v {
            den = den.lcm(x.den());
        }
    }
    let d = RatFunc::from_poly(den);
    let polys: Vec<Vec<Poly>> = vs
        .iter()
        .map(|v| v.iter().map(|x| (&d * x).num().clone()).collect())
        .collect();
    let width = polys[0].len();
    let mut maxdeg = vec![0usize; width];
    for p in &polys {
        for (j, x) in p.iter().enumerate() {
            maxdeg[j] = maxdeg[j].max(x.deg().unwrap_or(0) + 1);
        }
    }
    let ncols: usize = maxdeg.iter().sum();
    let rows: Vec<Vec<AlgNum>> = polys
        .iter()
        .map(|p| {
            let mut r = Vec::with_capacity(ncols);
            for (j, x) in p.iter().enumerate() {
                for k in 0..maxdeg[j] {
                    r.push(x.coeff(k));
                }
            }
            r
        })
        .collect();
    // rank of rows = rank of the transpose
    crate::linalg::rank(&rows, ncols)
}
