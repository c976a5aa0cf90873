//! ∂-transcendence test for solutions of order-3 equations.

use serde::Serialize;

use crate::classify::ser;
use crate::field::{Case, Ctx, RatFunc};
use crate::ore::OreOp;
use crate::ratsolve::{constant_rank, summability_reduce_many};
use crate::riccati::{riccati_solve, RiccatiError, RiccatiOptions};

#[derive(Debug, thiserror::Error)]
pub enum TranscendError {
    #[error("expected an operator of order 3, got {0}")]
    UnsupportedOrder(i64),
    #[error("a₀·a₃ vanishes")]
    Degenerate,
    #[error("reduction certificate failed for ∂^{0}w")]
    Certificate(usize),
    #[error(transparent)]
    Riccati(#[from] RiccatiError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Transcendent { bound: usize },
    Inconclusive { reason: String },
}

/// ∂ʲw = canonical + φ(certificate) − certificate.
#[derive(Clone, Debug, Serialize)]
pub struct Reduction {
    pub order: usize,
    #[serde(serialize_with = "ser::display")]
    pub derivative: RatFunc,
    #[serde(serialize_with = "ser::display")]
    pub canonical: RatFunc,
    #[serde(serialize_with = "ser::display")]
    pub certificate: RatFunc,
}

#[derive(Clone, Debug, Serialize)]
pub struct TranscendenceReport {
    /// u with a₃uφ(u)φ²(u) + a₂uφ(u) + a₁u + a₀ = 0.
    #[serde(serialize_with = "ser::display_vec")]
    pub riccati_l: Vec<RatFunc>,
    /// The same for the dual equation.
    #[serde(serialize_with = "ser::display_vec")]
    pub riccati_dual: Vec<RatFunc>,
    pub riccati_complete: bool,
    pub telescoper_bound: usize,
    pub independent_up_to_bound: bool,
    #[serde(serialize_with = "ser::display")]
    pub w: RatFunc,
    pub reductions: Vec<Reduction>,
    pub verdict: Verdict,
}

/// φ³(a₀)φ³ + φ²(a₁)φ² + φ(a₂)φ + a₃.
pub fn dual_equation(l: &OreOp, ctx: &Ctx) -> OreOp {
    let n = l.order().unwrap_or(0);
    let coeffs = (0..=n).map(|i| ctx.phi(&l.coeff(n - i), i)).collect();
    OreOp::new(&ctx.spec, coeffs)
}

fn riccati_roots(l: &OreOp, ctx: &Ctx) -> Result<(Vec<RatFunc>, bool), TranscendError> {
    let opts = RiccatiOptions {
        adjoin_lambda: true,
        extend_divisors: false,
        first_only: true,
    };
    let rep = riccati_solve(l, ctx, &opts)?;
    Ok((rep.solutions.into_iter().map(|s| s.alpha).collect(), rep.complete))
}

/// Checks the three conditions, the third one for differential operators of order ≤ `bound`.
pub fn transcendence_check(l: &OreOp, bound: usize, ctx: &Ctx) -> Result<TranscendenceReport, TranscendError> {
    let order = l.order().unwrap_or(-1);
    if order != 3 {
        return Err(TranscendError::UnsupportedOrder(order));
    }
    let (a0, a3) = (l.coeff(0), l.coeff(3));
    if a0.is_zero() || a3.is_zero() {
        return Err(TranscendError::Degenerate);
    }
    let (riccati_l, complete_l) = riccati_roots(l, ctx)?;
    let (riccati_dual, complete_d) = riccati_roots(&dual_equation(l, ctx), ctx)?;

    let r = &a0 / &a3;
    let w = &ctx.spec.derivation(&r) / &r;
    let mut ders = vec![w.clone()];
    for j in 0..bound {
        ders.push(ctx.spec.derivation(&ders[j]));
    }
    let reduced = summability_reduce_many(&ders, ctx);
    let mut reductions = Vec::new();
    for (j, (f, (canon, g))) in ders.iter().zip(reduced).enumerate() {
        if f - &canon != &ctx.phi(&g, 1) - &g {
            return Err(TranscendError::Certificate(j));
        }
        reductions.push(Reduction {
            order: j,
            derivative: f.clone(),
            canonical: canon,
            certificate: g,
        });
    }
    let forms: Vec<Vec<RatFunc>> = reductions.iter().map(|r| vec![r.canonical.clone()]).collect();
    let independent = constant_rank(&forms) == forms.len();

    let verdict = if !riccati_l.is_empty() {
        Verdict::Inconclusive {
            reason: "riccati_L nonempty".into(),
        }
    } else if !riccati_dual.is_empty() {
        Verdict::Inconclusive {
            reason: "riccati_dual nonempty".into(),
        }
    } else if !(complete_l && complete_d) {
        Verdict::Inconclusive {
            reason: "Riccati search limited to the current constants".into(),
        }
    } else if reductions.iter().all(|r| r.canonical.is_zero()) {
        Verdict::Inconclusive {
            reason: "condition-3 degenerate: all canonical forms vanish".into(),
        }
    } else if !independent {
        Verdict::Inconclusive {
            reason: format!("canonical forms of ∂ʲw, j ≤ {bound}, are linearly dependent"),
        }
    } else {
        Verdict::Transcendent { bound }
    };
    Ok(TranscendenceReport {
        riccati_l,
        riccati_dual,
        riccati_complete: complete_l && complete_d,
        telescoper_bound: bound,
        independent_up_to_bound: independent,
        w,
        reductions,
        verdict,
    })
}

/// Derivation used by `transcendence_check`.
pub fn derivation_name(case: Case) -> &'static str {
    match case {
        Case::S => "d/dz",
        Case::Q => "z·d/dz",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{eq0, int, rf};

    fn op(ctx: &Ctx, c: &[RatFunc]) -> OreOp {
        OreOp::new(&ctx.spec, c.to_vec())
    }

    #[test]
    fn unipotent_cube_has_riccati_solution() {
        let ctx = Ctx::shift(1);
        let f = OreOp::first_order(&ctx.spec, &RatFunc::one());
        let l = f.mul(&f).unwrap().mul(&f).unwrap();
        let rep = transcendence_check(&l, 3, &ctx).unwrap();
        assert_eq!(
            rep.verdict,
            Verdict::Inconclusive {
                reason: "riccati_L nonempty".into()
            }
        );
    }

    #[test]
    fn constant_ratio_is_degenerate() {
        // φ³ − z·φ² − φ + 2 has a₀/a₃ = 2
        let ctx = Ctx::shift(1);
        let l = op(
            &ctx,
            &[
                RatFunc::from_int(2),
                RatFunc::from_int(-1),
                -RatFunc::z(),
                RatFunc::one(),
            ],
        );
        let rep = transcendence_check(&l, 3, &ctx).unwrap();
        assert!(rep.w.is_zero());
        assert!(!rep.independent_up_to_bound);
        assert!(rep.riccati_l.is_empty() && rep.riccati_dual.is_empty() && rep.riccati_complete);
        assert!(matches!(&rep.verdict, Verdict::Inconclusive { reason } if reason.contains("degenerate")));
    }

    #[test]
    fn eq0_derivatives_vanish() {
        // a₀/a₃ = q³z/t, so w = 1 for ∂ = z·d/dz and ∂w = 0
        let ctx = Ctx::qdiff(2);
        let rep = transcendence_check(&eq0(&ctx, &int(1)), 3, &ctx).unwrap();
        assert!(rep.riccati_l.is_empty() && rep.riccati_dual.is_empty());
        assert!(rep.w.is_one());
        assert_eq!(rep.reductions[0].canonical, RatFunc::one());
        assert!(rep.reductions[1..].iter().all(|r| r.canonical.is_zero()));
        assert!(!rep.independent_up_to_bound);
        assert!(matches!(rep.verdict, Verdict::Inconclusive { .. }));
    }

    #[test]
    fn certificates_hold_in_shift_case() {
        // a₀/a₃ = (z + 1/2)/z², so w = 1/(z + 1/2) − 2/z
        let ctx = Ctx::shift(1);
        let a0 = rf(&[1, 2], &[0, 0, 2]);
        let l = op(&ctx, &[a0, RatFunc::zero(), -RatFunc::z(), RatFunc::one()]);
        let rep = transcendence_check(&l, 4, &ctx).unwrap();
        for r in &rep.reductions {
            assert_eq!(
                &r.derivative - &r.canonical,
                &ctx.phi(&r.certificate, 1) - &r.certificate
            );
        }
        // 1/(z+1/2) and 1/z lie in distinct orbits: the derivatives stay independent
        assert!(rep.independent_up_to_bound);
    }

    #[test]
    fn smaller_bound_keeps_verdict() {
        let ctx = Ctx::shift(1);
        let a0 = rf(&[1, 2], &[0, 0, 2]);
        let l = op(&ctx, &[a0, RatFunc::zero(), -RatFunc::z(), RatFunc::one()]);
        let big = transcendence_check(&l, 4, &ctx).unwrap();
        assert_eq!(big.verdict, Verdict::Transcendent { bound: 4 });
        for b in 0..4 {
            assert_eq!(
                transcendence_check(&l, b, &ctx).unwrap().verdict,
                Verdict::Transcendent { bound: b }
            );
        }
    }

    #[test]
    fn dual_coefficients() {
        let ctx = Ctx::shift(1);
        let z = RatFunc::z();
        let l = op(&ctx, &[z.clone(), RatFunc::from_int(2), z.pow(2), RatFunc::one()]);
        let d = dual_equation(&l, &ctx);
        assert_eq!(d.coeff(0), RatFunc::one());
        assert_eq!(d.coeff(1), ctx.phi(&z.pow(2), 1));
        assert_eq!(d.coeff(2), RatFunc::from_int(2));
        assert_eq!(d.coeff(3), ctx.phi(&z, 3));
    }

    #[test]
    fn order_checked() {
        let ctx = Ctx::shift(1);
        let l = op(&ctx, &[RatFunc::z(), RatFunc::one()]);
        assert!(matches!(
            transcendence_check(&l, 3, &ctx),
            Err(TranscendError::UnsupportedOrder(1))
        ));
    }
}
