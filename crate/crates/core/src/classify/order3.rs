use crate::field::{Case, Ctx, RatFunc};
use crate::lattice::{intmat, DiagonalGroupDesc};
use crate::ore::{gauge, MatK, OreOp};
use crate::riccati::{left_factor_exists, riccati_solve};

use super::{
    contragredient, imprimitive_group, imprimitive_test, imprimitivity_prescreen, newton_polygon, primitive_group,
    reducible3_reduce, so3_test, theta_obstruction, Classification, ClassifyError, ClassifyOptions, GroupDesc,
    RiccatiTarget, TraceStep, Witness,
};

/// L monic of order 3.
pub(super) fn classify(l: &OreOp, ctx: &Ctx, opts: &ClassifyOptions) -> Result<Classification, ClassifyError> {
    let a = l.companion()?;
    let mut trace = Vec::new();
    let ropts = opts.riccati();
    let rep = riccati_solve(l, ctx, &ropts)?;
    trace.push(TraceStep::Riccati {
        target: RiccatiTarget::Operator,
        found: rep.has_solution(),
        complete: rep.complete,
    });
    if let Some(sol) = rep.solutions.first() {
        return right_factor(l, &a, &sol.alpha, ctx, opts, trace);
    }
    let (lf, drep) = left_factor_exists(l, ctx, &ropts)?;
    trace.push(TraceStep::Riccati {
        target: RiccatiTarget::Dual,
        found: lf.is_some(),
        complete: drep.complete,
    });
    if let Some(lf) = lf {
        return left_factor(l, &a, &lf.beta, ctx, opts, trace);
    }

    let np = (ctx.spec.case == Case::Q).then(|| newton_polygon(l)).transpose()?;
    let mut try_imprimitive = true;
    if let (Some(np), true) = (&np, opts.newton_prescreen) {
        let passes = imprimitivity_prescreen(np);
        trace.push(TraceStep::NewtonPrescreen {
            slopes: np.slopes.iter().map(|s| s.to_string()).collect(),
            passes,
        });
        try_imprimitive = passes;
    }
    if try_imprimitive {
        let w = imprimitive_test(&a, 3, ctx, opts)?;
        trace.push(TraceStep::ImprimitiveTest {
            n: 3,
            found: w.is_some(),
        });
        if let Some(w) = w {
            return imprimitive_group(&a, &w, ctx, trace);
        }
    }

    let so3 = so3_test(&a, ctx, opts.allow_extensions)?;
    trace.push(TraceStep::So3 {
        found: so3.certificate.is_some(),
        scope: so3.scope.clone(),
    });
    if let Some(np) = &np {
        let obstructed = theta_obstruction(np);
        trace.push(TraceStep::ThetaObstruction { obstructed });
        if obstructed == Some(true) && so3.certificate.is_some() {
            trace.push(TraceStep::Note {
                text: "SO₃ certificate found although the slopes exclude it".into(),
            });
        }
    }
    primitive_group(&a, &so3, ctx, trace)
}

fn right_factor(
    l: &OreOp,
    a: &MatK,
    alpha: &RatFunc,
    ctx: &Ctx,
    opts: &ClassifyOptions,
    trace: Vec<TraceStep>,
) -> Result<Classification, ClassifyError> {
    let spec = &ctx.spec;
    let (q, r) = l.right_divide(&OreOp::first_order(spec, alpha))?;
    if !r.is_zero() {
        return Err(ClassifyError::Certificate("φ − α is not a right factor".into()));
    }
    let (o, z) = (RatFunc::one(), RatFunc::zero());
    let p = MatK::from_rows(
        spec,
        vec![
            vec![o.clone(), z.clone(), z.clone()],
            vec![-alpha, o.clone(), z.clone()],
            vec![z.clone(), -ctx.phi(alpha, 1), o],
        ],
    );
    let b0 = gauge(a, &p)?;
    let red = reducible3_reduce(&b0, Some(&q), ctx, opts)?;
    let mut witnesses = vec![Witness::RightFactor { alpha: alpha.clone() }];
    witnesses.extend(red.witnesses);
    let mut trace = trace;
    trace.extend(red.trace);
    Ok(Classification {
        group: red.group,
        input: a.clone(),
        gauge: red.gauge.mul(&p)?,
        reduced: red.reduced,
        witnesses,
        trace,
        reduced_exact: red.exact,
    })
}

fn reversed(desc: &DiagonalGroupDesc) -> DiagonalGroupDesc {
    let rows: Vec<_> = desc
        .relations
        .iter()
        .map(|m| m.iter().rev().copied().collect())
        .collect();
    DiagonalGroupDesc {
        relations: intmat::hnf(&rows),
        ..desc.clone()
    }
}

fn left_factor(
    l: &OreOp,
    a: &MatK,
    beta: &RatFunc,
    ctx: &Ctx,
    opts: &ClassifyOptions,
    trace: Vec<TraceStep>,
) -> Result<Classification, ClassifyError> {
    let spec = &ctx.spec;
    // L = (φ − β)·(φ² + n₁φ + n₀)
    let n1 = ctx.phi(&(&l.coeff(2) + beta), -1);
    let n0 = ctx.phi(&(&l.coeff(1) + &(beta * &n1)), -1);
    if &(beta * &n0) + &l.coeff(0) != RatFunc::zero() {
        return Err(ClassifyError::Certificate("φ − β is not a left factor".into()));
    }
    let (o, z) = (RatFunc::one(), RatFunc::zero());
    let p = MatK::from_rows(
        spec,
        vec![
            vec![o.clone(), z.clone(), z.clone()],
            vec![z.clone(), o.clone(), z.clone()],
            vec![n0, n1, o],
        ],
    );
    let b0 = gauge(a, &p)?;
    let dual = contragredient(&b0)?;
    let red = reducible3_reduce(&dual, None, ctx, opts)?;
    let j = MatK::permutation(spec, &[2, 1, 0]);
    let t = j.mul(&red.gauge.inverse()?.transpose())?.mul(&j)?;
    let reduced = contragredient(&red.reduced)?;
    let group = match red.group {
        GroupDesc::DiagonalKernel { lattice } => GroupDesc::DiagonalKernel {
            lattice: reversed(&lattice),
        },
        GroupDesc::TriangularExt {
            n,
            blocks,
            block_case,
            lattice,
            unipotent,
            ..
        } => GroupDesc::TriangularExt {
            n,
            blocks,
            block_case,
            lattice,
            unipotent,
            via_dual: true,
        },
        g => g,
    };
    let mut witnesses = vec![Witness::LeftFactor { beta: beta.clone() }];
    witnesses.extend(red.witnesses);
    let mut trace = trace;
    trace.extend(red.trace);
    Ok(Classification {
        group,
        input: a.clone(),
        gauge: t.mul(&p)?,
        reduced,
        witnesses,
        trace,
        reduced_exact: red.exact,
    })
}
