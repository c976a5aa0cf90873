use crate::field::{AlgNum, Ctx, RatFunc};
use crate::lattice::{reduce_diagonal, DiagonalGroupDesc};
use crate::ore::{gauge, MatK, OreOp};
use crate::ratsolve::rational_solutions_system;

use super::{
    classify_operator, classify_system, order1_group, solve_first_order, BlockCase, ClassifyError, ClassifyOptions,
    GroupDesc, TraceStep, UnipotentShape, Witness,
};

/// Reduced form of a block triangular system [[a, r], [0, A₂]].
#[derive(Clone, Debug)]
pub struct BlockReduction {
    pub group: GroupDesc,
    pub gauge: MatK,
    pub reduced: MatK,
    pub witnesses: Vec<Witness>,
    pub trace: Vec<TraceStep>,
    pub exact: bool,
}

fn one() -> RatFunc {
    RatFunc::one()
}

fn zero() -> RatFunc {
    RatFunc::zero()
}

fn unit_upper(spec: &crate::field::DiffFieldSpec, x1: RatFunc, x2: RatFunc) -> MatK {
    MatK::from_rows(
        spec,
        vec![
            vec![one(), x1, x2],
            vec![zero(), one(), zero()],
            vec![zero(), zero(), one()],
        ],
    )
}

/// Block-diagonal part G_D: the gauge making Diag(a, B₂) reduced, with the lattice of its characters.
fn block_diagonal(b: &MatK, case: BlockCase, ctx: &Ctx) -> Result<(MatK, DiagonalGroupDesc, bool), ClassifyError> {
    let spec = &ctx.spec;
    let a = b.get(0, 0).clone();
    Ok(match case {
        BlockCase::Diagonal | BlockCase::Triangular => {
            let red = reduce_diagonal(&[a, b.get(1, 1).clone(), b.get(2, 2).clone()], ctx);
            (MatK::diag(spec, &red.gauge), red.group.desc, red.exact)
        }
        BlockCase::Imprimitive => {
            let ctx2 = ctx.iterate(2);
            let (x, y) = (b.get(1, 2), b.get(2, 1));
            let chars = [&ctx.phi(&a, 1) * &a, &ctx.phi(x, 1) * y, &ctx.phi(y, 1) * x];
            let red = reduce_diagonal(&chars, &ctx2);
            (MatK::diag(spec, &red.gauge), red.group.desc, red.exact)
        }
        BlockCase::Primitive => {
            let red = reduce_diagonal(&[a, b.submatrix(1, 3, 1, 3).det()], ctx);
            (
                MatK::diag(spec, &[red.gauge[0].clone(), red.gauge[1].clone(), one()]),
                red.group.desc,
                red.exact,
            )
        }
    })
}

/// Reduces φ(Y) = [[a, r], [0, A₂]]·Y (1 + 2 blocks). `a2_op` is an operator with companion A₂, when known.
pub fn reducible3_reduce(
    b0: &MatK,
    a2_op: Option<&OreOp>,
    ctx: &Ctx,
    opts: &ClassifyOptions,
) -> Result<BlockReduction, ClassifyError> {
    let spec = &ctx.spec;
    let mut trace = Vec::new();
    let mut witnesses = Vec::new();
    let o1 = order1_group(b0.get(0, 0), ctx);
    let a2 = b0.submatrix(1, 3, 1, 3);
    let c2 = match a2_op {
        Some(l) => classify_operator(l, ctx, opts)?,
        None => classify_system(&a2, ctx, opts)?,
    };
    trace.extend(c2.trace.iter().cloned());
    let t1 = MatK::block_diag(&MatK::diag(spec, &[o1.gauge.clone()]), &c2.gauge);
    let a1 = gauge(b0, &t1)?;
    let case = match &c2.group {
        GroupDesc::DiagonalKernel { .. } => BlockCase::Diagonal,
        GroupDesc::TriangularExt { .. } => BlockCase::Triangular,
        GroupDesc::ImprimitiveFull { .. } | GroupDesc::ImprimitiveTorsion { .. } => BlockCase::Imprimitive,
        GroupDesc::FullGL { .. } | GroupDesc::DetTorsion { .. } => BlockCase::Primitive,
        g => {
            return Err(ClassifyError::Certificate(format!(
                "unexpected order-2 block group {}",
                g.kind()
            )))
        }
    };
    let (tg, lattice, exact_d) = block_diagonal(&a1, case, ctx)?;
    let b = gauge(&a1, &tg)?;

    let d1 = b.get(0, 0).clone();
    let (at1, at2) = (b.get(0, 1).clone(), b.get(0, 2).clone());
    let d2 = b.submatrix(1, 3, 1, 3);
    let mut unipotent = UnipotentShape::Full;
    let mut tx = MatK::identity(spec, 3);

    // φ(Xᵀ) = D₁·D₂^{-T}·Xᵀ − D₂^{-T}·Ãᵀ
    let d2it = d2.inverse()?.transpose();
    let rhs: Vec<RatFunc> = d2it
        .mul(&MatK::from_rows(spec, vec![vec![at1.clone()], vec![at2.clone()]]))?
        .col(0)
        .iter()
        .map(|x| -x)
        .collect();
    let full = rational_solutions_system(&d2it.scale(&d1), Some(&rhs), ctx)?;
    trace.push(TraceStep::SideEquation {
        name: "φ(X) = D₁·D₂^{-T}·X − D₂^{-T}·Ãᵀ".into(),
        solved: full.particular.is_some(),
    });
    if let Some(x) = full.particular {
        tx = unit_upper(spec, x[0].clone(), x[1].clone());
        witnesses.push(Witness::SideSolution {
            name: "X".into(),
            solution: x,
        });
        unipotent = UnipotentShape::Trivial;
    } else {
        let (e1, e2, e3, e4) = (d2.get(0, 0), d2.get(0, 1), d2.get(1, 0), d2.get(1, 1));
        // Ã₁ + d₁·φ(x₁) = D₁·x₁ and Ã₂ + d₄·φ(x₂) = D₁·x₂
        let line2 = |trace: &mut Vec<TraceStep>| -> Result<Option<RatFunc>, ClassifyError> {
            let x = solve_first_order(e1, &-&d1, &-&at1, ctx)?;
            trace.push(TraceStep::SideEquation {
                name: "Ã₁ + d₁·φ(x₁) = D₁·x₁".into(),
                solved: x.is_some(),
            });
            Ok(x)
        };
        let line1 = |trace: &mut Vec<TraceStep>| -> Result<Option<RatFunc>, ClassifyError> {
            let x = solve_first_order(e4, &-&d1, &-&at2, ctx)?;
            trace.push(TraceStep::SideEquation {
                name: "Ã₂ + d₄·φ(x₂) = D₁·x₂".into(),
                solved: x.is_some(),
            });
            Ok(x)
        };
        let upper = e3.is_zero() && !e2.is_zero();
        let lower = e2.is_zero() && !e3.is_zero();
        let diagonal = e2.is_zero() && e3.is_zero();
        if matches!(case, BlockCase::Diagonal | BlockCase::Triangular) && upper {
            if let Some(x1) = line2(&mut trace)? {
                tx = unit_upper(spec, x1.clone(), zero());
                witnesses.push(Witness::SideSolution {
                    name: "x₁".into(),
                    solution: vec![x1],
                });
                unipotent = UnipotentShape::Line { position: 2 };
            }
        } else if matches!(case, BlockCase::Diagonal | BlockCase::Triangular) && lower {
            if let Some(x2) = line1(&mut trace)? {
                tx = unit_upper(spec, zero(), x2.clone());
                witnesses.push(Witness::SideSolution {
                    name: "x₂".into(),
                    solution: vec![x2],
                });
                unipotent = UnipotentShape::Line { position: 1 };
            }
        } else if case == BlockCase::Diagonal && diagonal && e1 != e4 {
            if let Some(x2) = line1(&mut trace)? {
                tx = unit_upper(spec, zero(), x2.clone());
                witnesses.push(Witness::SideSolution {
                    name: "x₂".into(),
                    solution: vec![x2],
                });
                unipotent = UnipotentShape::Line { position: 1 };
            } else if let Some(x1) = line2(&mut trace)? {
                tx = unit_upper(spec, x1.clone(), zero());
                witnesses.push(Witness::SideSolution {
                    name: "x₁".into(),
                    solution: vec![x1],
                });
                unipotent = UnipotentShape::Line { position: 2 };
            }
        } else if case == BlockCase::Diagonal && diagonal {
            if let Some((lambda, mu, x1, x2)) = dilatation(&d1, e1, &at1, &at2, ctx)? {
                trace.push(TraceStep::SideEquation {
                    name: "φ(λ, μ, x) for D₂ = d·I".into(),
                    solved: true,
                });
                tx = unit_upper(spec, x1.clone(), x2.clone());
                witnesses.push(Witness::SideSolution {
                    name: "(x₁, x₂)".into(),
                    solution: vec![x1, x2],
                });
                unipotent = UnipotentShape::Dilatation { lambda, mu };
            } else {
                trace.push(TraceStep::SideEquation {
                    name: "φ(λ, μ, x) for D₂ = d·I".into(),
                    solved: false,
                });
            }
        }
    }

    let reduced = gauge(&b, &tx)?;
    let total = tx.mul(&tg)?.mul(&t1)?;
    let group = if case == BlockCase::Diagonal && unipotent == UnipotentShape::Trivial {
        GroupDesc::DiagonalKernel { lattice }
    } else {
        GroupDesc::TriangularExt {
            n: 3,
            blocks: vec![1, 2],
            block_case: case,
            lattice,
            unipotent,
            via_dual: false,
        }
    };
    Ok(BlockReduction {
        group,
        gauge: total,
        reduced,
        witnesses,
        trace,
        exact: o1.exact && c2.reduced_exact && exact_d,
    })
}

/// (λ, μ) constant, not both zero, and (x₁, x₂) with Ã + φ(X)·dI − X·D₁ ∈ {(λc, μc)}.
fn dilatation(
    d1: &RatFunc,
    d: &RatFunc,
    at1: &RatFunc,
    at2: &RatFunc,
    ctx: &Ctx,
) -> Result<Option<(AlgNum, AlgNum, RatFunc, RatFunc)>, ClassifyError> {
    let spec = &ctx.spec;
    let m = MatK::from_rows(
        spec,
        vec![
            vec![one(), zero(), zero()],
            vec![zero(), one(), zero()],
            vec![at2 / d, -(at1 / d), d1 / d],
        ],
    );
    let sols = rational_solutions_system(&m, None, ctx)?;
    for y in &sols.homogeneous.basis {
        let (Some(lambda), Some(mu)) = (y[0].as_constant(), y[1].as_constant()) else {
            continue;
        };
        if lambda.is_zero() && mu.is_zero() {
            continue;
        }
        let x = &y[2];
        let (x1, x2) = if !mu.is_zero() {
            (x.scale(&mu.inv()), zero())
        } else {
            (zero(), -x.scale(&lambda.inv()))
        };
        return Ok(Some((lambda, mu, x1, x2)));
    }
    Ok(None)
}
