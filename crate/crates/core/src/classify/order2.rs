use crate::field::{Ctx, RatFunc};
use crate::lattice::reduce_diagonal;
use crate::ore::{gauge, MatK, OreOp};
use crate::riccati::riccati_solve;

use super::{
    imprimitive_group, imprimitive_test, order1_group, solve_first_order, BlockCase, Classification, ClassifyError,
    ClassifyOptions, GroupDesc, RiccatiTarget, TraceStep, UnipotentShape, Witness,
};

/// L monic of order 2.
pub(super) fn classify(l: &OreOp, ctx: &Ctx, opts: &ClassifyOptions) -> Result<Classification, ClassifyError> {
    let a = l.companion()?;
    let mut trace = Vec::new();
    let rep = riccati_solve(l, ctx, &opts.riccati())?;
    trace.push(TraceStep::Riccati {
        target: RiccatiTarget::Operator,
        found: rep.has_solution(),
        complete: rep.complete,
    });
    if let Some(sol) = rep.solutions.first() {
        return reducible(l, &a, &sol.alpha, ctx, trace);
    }
    let w = imprimitive_test(&a, 2, ctx, opts)?;
    trace.push(TraceStep::ImprimitiveTest {
        n: 2,
        found: w.is_some(),
    });
    if let Some(w) = w {
        return imprimitive_group(&a, &w, ctx, trace);
    }
    primitive(&a, ctx, trace)
}

fn reducible(
    l: &OreOp,
    a: &MatK,
    alpha: &RatFunc,
    ctx: &Ctx,
    mut trace: Vec<TraceStep>,
) -> Result<Classification, ClassifyError> {
    let spec = &ctx.spec;
    let (q, r) = l.right_divide(&OreOp::first_order(spec, alpha))?;
    if !r.is_zero() {
        return Err(ClassifyError::Certificate("φ − α is not a right factor".into()));
    }
    let beta = -&q.coeff(0);
    let p = MatK::from_rows(
        spec,
        vec![vec![RatFunc::one(), RatFunc::zero()], vec![-alpha, RatFunc::one()]],
    );
    let red = reduce_diagonal(&[alpha.clone(), beta.clone()], ctx);
    let (h1, h2) = (&red.gauge[0], &red.gauge[1]);
    let (a1, b1) = (&red.reduced[0], &red.reduced[1]);
    let gamma = &ctx.phi(h1, 1) / h2;
    let dg = MatK::diag(spec, &red.gauge);
    let t = solve_first_order(b1, &-a1, &-&gamma, ctx)?;
    trace.push(TraceStep::SideEquation {
        name: "β̃·φ(t) − α̃·t = −γ".into(),
        solved: t.is_some(),
    });
    let mut witnesses = vec![Witness::RightFactor { alpha: alpha.clone() }];
    let (group, t_total) = match t {
        Some(t) => {
            let u = MatK::from_rows(
                spec,
                vec![vec![RatFunc::one(), t.clone()], vec![RatFunc::zero(), RatFunc::one()]],
            );
            witnesses.push(Witness::SideSolution {
                name: "t".into(),
                solution: vec![t],
            });
            (
                GroupDesc::DiagonalKernel {
                    lattice: red.group.desc.clone(),
                },
                u.mul(&dg)?.mul(&p)?,
            )
        }
        None => (
            GroupDesc::TriangularExt {
                n: 2,
                blocks: vec![1, 1],
                block_case: BlockCase::Diagonal,
                lattice: red.group.desc.clone(),
                unipotent: UnipotentShape::Full,
                via_dual: false,
            },
            dg.mul(&p)?,
        ),
    };
    let reduced = gauge(a, &t_total)?;
    Ok(Classification {
        group,
        input: a.clone(),
        gauge: t_total,
        reduced,
        witnesses,
        trace,
        reduced_exact: red.exact,
    })
}

fn primitive(a: &MatK, ctx: &Ctx, mut trace: Vec<TraceStep>) -> Result<Classification, ClassifyError> {
    let o = order1_group(&a.det(), ctx);
    trace.push(TraceStep::DetGroup {
        continuous: o.order().is_none(),
        order: o.order(),
    });
    let t = MatK::diag(&ctx.spec, &[o.gauge.clone(), RatFunc::one()]);
    let reduced = gauge(a, &t)?;
    let group = match o.order() {
        None => GroupDesc::FullGL { n: 2 },
        Some(k) => GroupDesc::DetTorsion { n: 2, k },
    };
    Ok(Classification {
        group,
        input: a.clone(),
        gauge: t,
        reduced,
        witnesses: vec![Witness::Order1 {
            zeta: o.zeta.clone(),
            f: o.gauge.inv(),
        }],
        trace,
        reduced_exact: o.exact,
    })
}
