use crate::field::{q_log, AlgNum, Case, Ctx, RatFunc};
use crate::lattice::reduce_diagonal;
use crate::ratsolve::multiplicative_solve;

use super::GroupDesc;

/// Group of φ(y) = α·y with the gauge f: φ(f)·α/f = reduced.
#[derive(Clone, Debug)]
pub struct Order1 {
    pub group: GroupDesc,
    pub gauge: RatFunc,
    pub reduced: RatFunc,
    /// The root of unity with α ~ ζ, when the group is finite and ζ was found.
    pub zeta: Option<AlgNum>,
    pub exact: bool,
}

impl Order1 {
    /// ℓ for CyclicOrder1, None for C*.
    pub fn order(&self) -> Option<u64> {
        match self.group {
            GroupDesc::CyclicOrder1 { ell } => Some(ell),
            _ => None,
        }
    }
}

fn ratio(a: &AlgNum, b: &AlgNum) -> AlgNum {
    a / b
}

/// The only root of unity ζ that α can be equivalent to, read off the leading
/// (case S) or trailing (case Q) coefficients.
pub fn order1_candidate(alpha: &RatFunc, ctx: &Ctx) -> Option<AlgNum> {
    if alpha.is_zero() || alpha.degree() != 0 {
        return None;
    }
    match ctx.spec.case {
        Case::S => {
            let z = ratio(&alpha.num().lc(), &alpha.den().lc());
            z.is_root_of_unity().then_some(z)
        }
        Case::Q => {
            if alpha.val0() != 0 {
                return None;
            }
            let x0 = ratio(&alpha.num().tc(), &alpha.den().tc());
            let step = &ctx.spec.step;
            for ell in 1..=24i64 {
                let Some(b) = q_log(&x0.pow(ell), step) else { continue };
                if b % ell != 0 {
                    continue;
                }
                let z = &x0 / &step.pow(b / ell);
                if z.is_root_of_unity() {
                    return Some(z);
                }
            }
            None
        }
    }
}

/// Galois group of φ(y) = α·y: Z/ℓ when α ~ ζ_ℓ, C* otherwise.
pub fn order1_group(alpha: &RatFunc, ctx: &Ctx) -> Order1 {
    if let Some(z) = order1_candidate(alpha, ctx) {
        if let Ok(Some(f0)) = multiplicative_solve(&(alpha / &RatFunc::constant(z.clone())), ctx) {
            let ell = z.root_of_unity_order().expect("root of unity");
            return Order1 {
                group: GroupDesc::CyclicOrder1 { ell },
                gauge: f0.inv(),
                reduced: RatFunc::constant(z.clone()),
                zeta: Some(z),
                exact: true,
            };
        }
    }
    let red = reduce_diagonal(std::slice::from_ref(alpha), ctx);
    let group = match red.group.lattice.relations.first() {
        Some(m) => GroupDesc::CyclicOrder1 {
            ell: m[0].unsigned_abs(),
        },
        None => GroupDesc::ContinuousOrder1,
    };
    let reduced = red.reduced[0].clone();
    let zeta = reduced.as_constant().filter(|c| c.is_root_of_unity());
    Order1 {
        group,
        gauge: red.gauge[0].clone(),
        reduced,
        zeta,
        exact: red.exact,
    }
}
