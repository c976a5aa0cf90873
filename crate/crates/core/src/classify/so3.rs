use num_integer::Integer;

use crate::field::nffactor::squarefree;
use crate::field::{factor_ratfunc, AlgNum, Case, Ctx, Poly, RatFunc};
use crate::lattice::diagonal_group;
use crate::ore::{gauge, MatK};
use crate::ratsolve::rational_solutions_system;

use super::{order1_group, Classification, ClassifyError, GroupDesc, So3Center, TraceStep, Witness};

/// X symmetric invertible with φ(X) = μ⁻¹·A·X·Aᵗ, and when constructible a gauge T
/// with φ(T)·A·T⁻¹ = λ·R, R ∈ SO₃(k).
#[derive(Clone, Debug)]
pub struct So3Certificate {
    pub x: MatK,
    pub mu: RatFunc,
    pub gauge: Option<MatK>,
    pub lambda: Option<RatFunc>,
    pub rotation: Option<MatK>,
}

#[derive(Clone, Debug)]
pub struct So3Result {
    pub certificate: Option<So3Certificate>,
    pub scope: String,
}

const SYM: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

fn sym_from_vec(spec: &crate::field::DiffFieldSpec, v: &[RatFunc]) -> MatK {
    let mut m = MatK::zero(spec, 3, 3);
    for (k, &(i, j)) in SYM.iter().enumerate() {
        m.set(i, j, v[k].clone());
        m.set(j, i, v[k].clone());
    }
    m
}

/// Constant square root, adjoining one when allowed.
fn const_sqrt(c: &AlgNum, ctx: &Ctx, extend: bool) -> Option<AlgNum> {
    let p = Poly::new(vec![-c, AlgNum::zero(), AlgNum::one()]);
    if let Some(r) = ctx.consts.roots(&p).into_iter().next() {
        return Some(r);
    }
    if extend {
        ctx.consts.adjoin_root(&p).ok()
    } else {
        None
    }
}

/// g ∈ k with g² = f.
pub fn sqrt_ratfunc(f: &RatFunc, ctx: &Ctx, extend: bool) -> Option<RatFunc> {
    if f.is_zero() {
        return Some(RatFunc::zero());
    }
    let mut root = RatFunc::one();
    for (p, sign) in [(f.num(), 1i64), (f.den(), -1)] {
        for (g, m) in squarefree(p) {
            if m % 2 == 1 {
                return None;
            }
            root = &root * &RatFunc::from_poly(g).pow(sign * (m as i64) / 2);
        }
    }
    let c = (f / &root.pow(2)).as_constant()?;
    let s = const_sqrt(&c, ctx, extend)?;
    Some(root.scale(&s))
}

/// X = F·Diag(d)·Fᵗ with F invertible, for X symmetric invertible.
pub fn symmetric_decomposition(x: &MatK) -> Result<(MatK, Vec<RatFunc>), ClassifyError> {
    let n = x.rows();
    let spec = x.spec();
    let mut w = x.clone();
    let mut p = MatK::identity(spec, n);
    let apply = |t: &MatK, w: &MatK, p: &MatK| -> Result<(MatK, MatK), ClassifyError> {
        Ok((t.mul(w)?.mul(&t.transpose())?, t.mul(p)?))
    };
    for k in 0..n {
        if w.get(k, k).is_zero() {
            let t = if let Some(j) = (k + 1..n).find(|&j| !w.get(j, j).is_zero()) {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.swap(k, j);
                MatK::permutation(spec, &perm)
            } else if let Some(j) = (k + 1..n).find(|&j| !w.get(k, j).is_zero()) {
                let mut t = MatK::identity(spec, n);
                t.set(k, j, RatFunc::one());
                t
            } else {
                return Err(ClassifyError::Certificate("singular symmetric matrix".into()));
            };
            (w, p) = apply(&t, &w, &p)?;
        }
        let pivot = w.get(k, k).clone();
        let mut t = MatK::identity(spec, n);
        for i in k + 1..n {
            t.set(i, k, -(w.get(i, k) / &pivot));
        }
        (w, p) = apply(&t, &w, &p)?;
    }
    Ok((p.inverse()?, w.diagonal()))
}

/// Gauge T = (F·√(gD))⁻¹ with B = φ(T)·A·T⁻¹ = λ·R.
fn build_gauge(a: &MatK, x: &MatK, ctx: &Ctx, extend: bool) -> Option<(MatK, RatFunc, MatK)> {
    let spec = a.spec();
    let (f, d) = symmetric_decomposition(x).ok()?;
    let scalings: Vec<RatFunc> = std::iter::once(RatFunc::one())
        .chain(d.iter().map(|di| di.inv()))
        .collect();
    for g in scalings {
        let roots: Option<Vec<RatFunc>> = d.iter().map(|di| sqrt_ratfunc(&(&g * di), ctx, extend)).collect();
        let Some(roots) = roots else { continue };
        let t = f.mul(&MatK::diag(spec, &roots)).ok()?.inverse().ok()?;
        let b = gauge(a, &t).ok()?;
        let bbt = b.mul(&b.transpose()).ok()?;
        let l2 = bbt.get(0, 0).clone();
        if bbt != MatK::identity(spec, 3).scale(&l2) {
            continue;
        }
        let Some(mut lambda) = sqrt_ratfunc(&l2, ctx, extend) else {
            continue;
        };
        let mut r = b.scale(&lambda.inv());
        if !(&r.det() + &RatFunc::one()).is_zero() && !r.det().is_one() {
            continue;
        }
        if !r.det().is_one() {
            lambda = -lambda;
            r = r.scale(&RatFunc::from_int(-1));
        }
        return Some((t, lambda, r));
    }
    None
}

/// Exponent data of the reduced det: unit and the cube root of its non-constant part.
fn det_cube(a: &MatK, ctx: &Ctx) -> Option<(AlgNum, RatFunc)> {
    let g = diagonal_group(&[a.det()], ctx);
    let fac = factor_ratfunc(&g.reduced[0], &ctx.consts);
    let mut lambda0 = RatFunc::one();
    for (p, m) in &fac.factors {
        if m % 3 != 0 {
            return None;
        }
        lambda0 = &lambda0 * &RatFunc::from_poly(p.clone()).pow(m / 3);
    }
    Some((fac.unit, lambda0))
}

/// Basis vectors, then small integer combinations.
fn candidates(basis: &[Vec<RatFunc>]) -> Vec<Vec<RatFunc>> {
    let mut out: Vec<Vec<RatFunc>> = basis.to_vec();
    let d = basis.len();
    let coeffs: Vec<Vec<i64>> = if d <= 3 {
        (0..5i64.pow(d as u32))
            .map(|mut code| {
                (0..d)
                    .map(|_| {
                        let c = code % 5 - 2;
                        code /= 5;
                        c
                    })
                    .collect()
            })
            .filter(|c: &Vec<i64>| c.iter().filter(|&&x| x != 0).count() > 1)
            .collect()
    } else {
        let mut v = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                for sgn in [1, -1] {
                    let mut c = vec![0; d];
                    c[i] = 1;
                    c[j] = sgn;
                    v.push(c);
                }
            }
        }
        v
    };
    for c in coeffs {
        let mut v = vec![RatFunc::zero(); 6];
        for (ci, b) in c.iter().zip(basis) {
            if *ci != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = &*x + &y.scale(&AlgNum::from_int(*ci));
                }
            }
        }
        out.push(v);
    }
    out
}

/// Decides whether the irreducible primitive system φ(Y) = AY has group inside C*·SO₃
/// by searching a symmetric invertible X with φ(X) = μ⁻¹·A·X·Aᵗ.
pub fn so3_test(a: &MatK, ctx: &Ctx, allow_extensions: bool) -> Result<So3Result, ClassifyError> {
    let spec = &ctx.spec;
    let consts_scope = if allow_extensions {
        "constants extended by cube roots, ω and square roots"
    } else {
        "current constants"
    };
    let Some((unit, lambda0)) = det_cube(a, ctx) else {
        return Ok(So3Result {
            certificate: None,
            scope: "det(A) is not a cube up to φ(g)/g over the current ramification".into(),
        });
    };
    let shifts: Vec<i64> = match spec.case {
        Case::S => vec![0],
        Case::Q => vec![0, 1, 2],
    };
    let mut cs: Vec<AlgNum> = Vec::new();
    for s in shifts {
        let w = &unit.pow(2) * &spec.step.pow(s);
        let p = Poly::new(vec![-&w, AlgNum::zero(), AlgNum::zero(), AlgNum::one()]);
        let roots = if allow_extensions {
            ctx.consts.split(&p).unwrap_or_else(|_| ctx.consts.roots(&p))
        } else {
            ctx.consts.roots(&p)
        };
        cs.extend(roots);
    }
    let scope = format!("symmetric rational solutions over k, {consts_scope}");
    let mut fallback: Option<So3Certificate> = None;
    for c in cs {
        let mu = lambda0.pow(2).scale(&c);
        let mi = mu.inv();
        let mut m = MatK::zero(spec, 6, 6);
        for (k, &(i, j)) in SYM.iter().enumerate() {
            let mut e = MatK::zero(spec, 3, 3);
            e.set(i, j, RatFunc::one());
            e.set(j, i, RatFunc::one());
            let img = a.mul(&e)?.mul(&a.transpose())?.scale(&mi);
            for (r, &(p, q)) in SYM.iter().enumerate() {
                m.set(r, k, img.get(p, q).clone());
            }
        }
        let sols = rational_solutions_system(&m, None, ctx)?;
        let basis = &sols.homogeneous.basis;
        for v in candidates(basis) {
            let x = sym_from_vec(spec, &v);
            if x.det().is_zero() {
                continue;
            }
            if let Some((t, lambda, r)) = build_gauge(a, &x, ctx, allow_extensions) {
                return Ok(So3Result {
                    certificate: Some(So3Certificate {
                        x,
                        mu,
                        gauge: Some(t),
                        lambda: Some(lambda),
                        rotation: Some(r),
                    }),
                    scope,
                });
            }
            if fallback.is_none() {
                fallback = Some(So3Certificate {
                    x,
                    mu: mu.clone(),
                    gauge: None,
                    lambda: None,
                    rotation: None,
                });
            }
        }
    }
    Ok(So3Result {
        certificate: fallback,
        scope,
    })
}

/// Group of an irreducible primitive system of order 3: Z(G)·SO₃, or SL₃ extended by det(G).
pub fn primitive_group(
    a: &MatK,
    so3: &So3Result,
    ctx: &Ctx,
    mut trace: Vec<TraceStep>,
) -> Result<Classification, ClassifyError> {
    let spec = &ctx.spec;
    let od = order1_group(&a.det(), ctx);
    trace.push(TraceStep::DetGroup {
        continuous: od.order().is_none(),
        order: od.order(),
    });
    let Some(cert) = &so3.certificate else {
        let t = MatK::diag(spec, &[od.gauge.clone(), RatFunc::one(), RatFunc::one()]);
        let reduced = gauge(a, &t)?;
        let group = match od.order() {
            None => GroupDesc::FullGL { n: 3 },
            Some(k) => GroupDesc::DetTorsion { n: 3, k },
        };
        return Ok(Classification {
            group,
            input: a.clone(),
            gauge: t,
            reduced,
            witnesses: vec![Witness::Order1 {
                zeta: od.zeta.clone(),
                f: od.gauge.inv(),
            }],
            trace,
            reduced_exact: od.exact,
        });
    };
    let witnesses = vec![Witness::So3 {
        x: cert.x.clone(),
        mu: cert.mu.clone(),
    }];
    let (t, lambda_order, exact) = match (&cert.gauge, &cert.lambda) {
        (Some(t0), Some(lambda)) => {
            let ol = order1_group(lambda, ctx);
            (t0.scale(&ol.gauge), ol.order(), ol.exact)
        }
        _ => {
            trace.push(TraceStep::Note {
                text: "no orthogonal gauge over the current constants".into(),
            });
            (MatK::identity(spec, 3), None, false)
        }
    };
    let center = match od.order() {
        None => So3Center::Continuous,
        Some(n) if n.gcd(&3) != 1 => So3Center::Roots { order: 3 * n },
        Some(n) if lambda_order == Some(n) => So3Center::Roots { order: n },
        Some(n) => So3Center::Ambiguous { orders: [3 * n, n] },
    };
    let reduced = gauge(a, &t)?;
    Ok(Classification {
        group: GroupDesc::PrimitiveSO3 { center },
        input: a.clone(),
        gauge: t,
        reduced,
        witnesses,
        trace,
        reduced_exact: exact,
    })
}
