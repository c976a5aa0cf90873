use crate::field::{q_log, AlgNum, Case, Ctx, Poly, RatFunc};
use crate::linalg::nullspace;
use crate::ore::{MatK, OreOp};

use super::scalar::rational_solutions_scalar_rhs;
use super::{ParamSolution, RatSolveError, SolutionSpace};

/// How a system is reduced to scalar equations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Uncoupling {
    /// Triangular back-substitution when A is triangular, cyclic vector otherwise.
    Auto,
    Cyclic,
    Triangular,
}

/// Solutions of φ(Y) = AY + b: one particular solution (if any) plus the homogeneous space.
#[derive(Clone, Debug)]
pub struct AffineSolutions {
    pub particular: Option<Vec<RatFunc>>,
    pub homogeneous: SolutionSpace,
}

fn row_times(v: &[RatFunc], a: &MatK) -> Vec<RatFunc> {
    (0..a.cols())
        .map(|j| {
            let mut acc = RatFunc::zero();
            for (i, x) in v.iter().enumerate() {
                if !x.is_zero() && !a.get(i, j).is_zero() {
                    acc = &acc + &(x * a.get(i, j));
                }
            }
            acc
        })
        .collect()
}

fn dot(v: &[RatFunc], w: &[RatFunc]) -> RatFunc {
    let mut acc = RatFunc::zero();
    for (x, y) in v.iter().zip(w) {
        if !x.is_zero() && !y.is_zero() {
            acc = &acc + &(x * y);
        }
    }
    acc
}

fn triangular_order(a: &MatK) -> Option<Vec<usize>> {
    let n = a.rows();
    if a.is_upper_triangular() {
        Some((0..n).rev().collect())
    } else if a.is_lower_triangular() {
        Some((0..n).collect())
    } else {
        None
    }
}

fn solve_triangular(
    a: &MatK,
    rhs: &[Vec<RatFunc>],
    order: &[usize],
    ctx: &Ctx,
) -> Result<Vec<ParamSolution>, RatSolveError> {
    let n = a.rows();
    let k = rhs.len();
    // partial solutions: components listed in `order` so far
    let mut items: Vec<ParamSolution> = (0..k)
        .map(|j| {
            let mut c = vec![AlgNum::zero(); k];
            c[j] = AlgNum::one();
            ParamSolution {
                y: vec![RatFunc::zero(); n],
                c,
            }
        })
        .collect();
    for &j in order {
        let ajj = a.get(j, j);
        if ajj.is_zero() {
            return Err(RatSolveError::Singular);
        }
        let forcing: Vec<RatFunc> = items
            .iter()
            .map(|it| {
                let mut g = RatFunc::zero();
                for l in 0..n {
                    if l != j && !a.get(j, l).is_zero() {
                        g = &g + &(a.get(j, l) * &it.y[l]);
                    }
                }
                for (ck, bk) in it.c.iter().zip(rhs) {
                    g = &g + &bk[j].scale(ck);
                }
                g
            })
            .collect();
        let op = OreOp::first_order(&ctx.spec, ajj);
        let sols = rational_solutions_scalar_rhs(&op, &forcing, ctx)?;
        items = sols
            .into_iter()
            .map(|s| {
                let mut y = vec![RatFunc::zero(); n];
                let mut c = vec![AlgNum::zero(); k];
                for (lam, it) in s.c.iter().zip(&items) {
                    if lam.is_zero() {
                        continue;
                    }
                    for l in 0..n {
                        y[l] = &y[l] + &it.y[l].scale(lam);
                    }
                    for t in 0..k {
                        c[t] = &c[t] + &(lam * &it.c[t]);
                    }
                }
                y[j] = s.y[0].clone();
                ParamSolution { y, c }
            })
            .collect();
    }
    Ok(items)
}

fn cyclic_candidates(n: usize) -> Vec<Vec<RatFunc>> {
    let mut out = Vec::new();
    for i in 0..n {
        let mut v = vec![RatFunc::zero(); n];
        v[i] = RatFunc::one();
        out.push(v);
    }
    let z = RatFunc::z();
    for shift in 0..8i64 {
        out.push(
            (0..n)
                .map(|i| {
                    let p = &z + &RatFunc::from_int(shift + i as i64);
                    p.pow(i as i64)
                })
                .collect(),
        );
        out.push(
            (0..n)
                .map(|i| {
                    RatFunc::from_int((i as i64 + 1) * (shift + 1) % 7 + 1) * z.pow(((i + shift as usize) % n) as i64)
                })
                .collect(),
        );
    }
    out
}

/// Row vector c with rows c, φ(c)A, ... forming an invertible matrix R.
fn cyclic_vector(a: &MatK) -> Option<(Vec<Vec<RatFunc>>, MatK)> {
    let n = a.rows();
    for c in cyclic_candidates(n) {
        let mut rows = vec![c];
        for i in 0..n {
            let next = row_times(&rows[i].iter().map(|x| a.spec().phi(x, 1)).collect::<Vec<_>>(), a);
            rows.push(next);
        }
        let r = MatK::from_rows(a.spec(), rows[..n].to_vec());
        if !r.det().is_zero() {
            return Some((rows, r));
        }
    }
    None
}

fn solve_cyclic(a: &MatK, rhs: &[Vec<RatFunc>], ctx: &Ctx) -> Result<Vec<ParamSolution>, RatSolveError> {
    let n = a.rows();
    let k = rhs.len();
    let (rows, r) = cyclic_vector(a).ok_or(RatSolveError::NoCyclicVector)?;
    let rinv = r.inverse()?;
    // r_n = Σ λ_i r_i
    let lam = row_times(&rows[n], &rinv);
    let mut coeffs: Vec<RatFunc> = lam.iter().map(|x| -x).collect();
    coeffs.push(RatFunc::one());
    let op = OreOp::new(&ctx.spec, coeffs);
    // s_0 = 0, s_i = φ(s_{i-1}) + φ(r_{i-1})·b, per right-hand side
    let mut s: Vec<Vec<RatFunc>> = vec![vec![RatFunc::zero(); k]];
    for i in 1..=n {
        let pr: Vec<RatFunc> = rows[i - 1].iter().map(|x| ctx.phi(x, 1)).collect();
        let next: Vec<RatFunc> = (0..k).map(|t| &ctx.phi(&s[i - 1][t], 1) + &dot(&pr, &rhs[t])).collect();
        s.push(next);
    }
    let forcing: Vec<RatFunc> = (0..k)
        .map(|t| {
            let mut f = s[n][t].clone();
            for i in 0..n {
                f = &f - &(&lam[i] * &s[i][t]);
            }
            f
        })
        .collect();
    let sols = rational_solutions_scalar_rhs(&op, &forcing, ctx)?;
    let mut out = Vec::new();
    for sol in sols {
        let u0 = &sol.y[0];
        let u: Vec<RatFunc> = (0..n)
            .map(|i| {
                let mut x = ctx.phi(u0, i as i64);
                for t in 0..k {
                    x = &x - &s[i][t].scale(&sol.c[t]);
                }
                x
            })
            .collect();
        let y = mat_vec(&rinv, &u);
        out.push(ParamSolution { y, c: sol.c });
    }
    Ok(out)
}

/// Homogeneous system with constant A: polynomial solutions of degree < n in case S,
/// sums of monomials z^k with step^k an eigenvalue of A in case Q.
fn solve_constant(a: &MatK, ctx: &Ctx) -> Vec<ParamSolution> {
    let n = a.rows();
    let c = |i: usize, j: usize| a.get(i, j).as_constant().expect("constant entry");
    let z = RatFunc::z();
    let mut out = Vec::new();
    match ctx.spec.case {
        Case::S => {
            // unknown y_{k,j} at index k·n + j
            let mut rows = Vec::new();
            let shifted: Vec<Poly> = (0..n).map(|k| ctx.phi(&z.pow(k as i64), 1).num().clone()).collect();
            for m in 0..n {
                for i in 0..n {
                    let mut row = vec![AlgNum::zero(); n * n];
                    for (k, p) in shifted.iter().enumerate() {
                        row[k * n + i] = &row[k * n + i] + &p.coeff(m);
                    }
                    for j in 0..n {
                        row[m * n + j] = &row[m * n + j] - &c(i, j);
                    }
                    rows.push(row);
                }
            }
            for v in nullspace(&rows, n * n) {
                let y = (0..n)
                    .map(|j| RatFunc::from_poly(Poly::new((0..n).map(|k| v[k * n + j].clone()).collect())))
                    .collect();
                out.push(ParamSolution { y, c: Vec::new() });
            }
        }
        Case::Q => {
            let xi = MatK::from_rows(
                a.spec(),
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let d = if i == j { z.clone() } else { RatFunc::zero() };
                                &d - a.get(i, j)
                            })
                            .collect()
                    })
                    .collect(),
            );
            let chi = xi.det().num().clone();
            let mut ks: Vec<i64> = ctx
                .consts
                .roots(&chi)
                .iter()
                .filter_map(|r| q_log(r, &ctx.spec.step))
                .collect();
            ks.sort_unstable();
            ks.dedup();
            for k in ks {
                let sk = ctx.spec.step.pow(k);
                let rows: Vec<Vec<AlgNum>> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let d = if i == j { sk.clone() } else { AlgNum::zero() };
                                &d - &c(i, j)
                            })
                            .collect()
                    })
                    .collect();
                for v in nullspace(&rows, n) {
                    let y = v.iter().map(|x| z.pow(k).scale(x)).collect();
                    out.push(ParamSolution { y, c: Vec::new() });
                }
            }
        }
    }
    out
}

fn mat_vec(m: &MatK, u: &[RatFunc]) -> Vec<RatFunc> {
    (0..m.rows()).map(|i| dot(&m.row(i), u)).collect()
}

fn verify(a: &MatK, rhs: &[Vec<RatFunc>], sols: &[ParamSolution], ctx: &Ctx) -> Result<(), RatSolveError> {
    let n = a.rows();
    for s in sols {
        for i in 0..n {
            let mut lhs = ctx.phi(&s.y[i], 1);
            lhs = &lhs - &dot(&a.row(i), &s.y);
            for (ck, bk) in s.c.iter().zip(rhs) {
                lhs = &lhs - &bk[i].scale(ck);
            }
            if !lhs.is_zero() {
                return Err(RatSolveError::Verification);
            }
        }
    }
    Ok(())
}

/// Basis of {(Y, c) : φ(Y) = AY + Σ c_k b_k}.
pub fn rational_solutions_system_with(
    a: &MatK,
    rhs: &[Vec<RatFunc>],
    method: Uncoupling,
    ctx: &Ctx,
) -> Result<Vec<ParamSolution>, RatSolveError> {
    if !a.is_square() || a.det().is_zero() {
        return Err(RatSolveError::Singular);
    }
    let tri = triangular_order(a);
    let constant = rhs.is_empty() && a.entries().iter().all(|x| x.is_constant());
    let sols = match (method, tri) {
        (Uncoupling::Auto, _) if constant => solve_constant(a, ctx),
        (Uncoupling::Auto | Uncoupling::Triangular, Some(order)) => solve_triangular(a, rhs, &order, ctx)?,
        (Uncoupling::Triangular, None) => return Err(RatSolveError::Singular),
        _ => solve_cyclic(a, rhs, ctx)?,
    };
    verify(a, rhs, &sols, ctx)?;
    Ok(sols)
}

/// Parametrized solutions with the automatic uncoupling choice.
pub fn rational_solutions_system_rhs(
    a: &MatK,
    rhs: &[Vec<RatFunc>],
    ctx: &Ctx,
) -> Result<Vec<ParamSolution>, RatSolveError> {
    rational_solutions_system_with(a, rhs, Uncoupling::Auto, ctx)
}

/// All Y ∈ kⁿ with φ(Y) = AY + b (b = None for the homogeneous system).
pub fn rational_solutions_system(a: &MatK, b: Option<&[RatFunc]>, ctx: &Ctx) -> Result<AffineSolutions, RatSolveError> {
    let Some(b) = b.filter(|b| b.iter().any(|x| !x.is_zero())) else {
        let sols = rational_solutions_system_rhs(a, &[], ctx)?;
        return Ok(AffineSolutions {
            particular: Some(vec![RatFunc::zero(); a.rows()]),
            homogeneous: SolutionSpace::new(sols.into_iter().map(|s| s.y).collect()),
        });
    };
    let sols = rational_solutions_system_rhs(a, &[b.to_vec()], ctx)?;
    let pivot = sols.iter().position(|s| !s.c[0].is_zero());
    let Some(p) = pivot else {
        return Ok(AffineSolutions {
            particular: None,
            homogeneous: SolutionSpace::new(sols.into_iter().map(|s| s.y).collect()),
        });
    };
    let cp = sols[p].c[0].inv();
    let part: Vec<RatFunc> = sols[p].y.iter().map(|x| x.scale(&cp)).collect();
    let hom = sols
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != p)
        .map(|(_, s)| {
            let f = &s.c[0] * &cp;
            s.y.iter().zip(&sols[p].y).map(|(x, y)| x - &y.scale(&f)).collect()
        })
        .collect();
    Ok(AffineSolutions {
        particular: Some(part),
        homogeneous: SolutionSpace::new(hom),
    })
}
