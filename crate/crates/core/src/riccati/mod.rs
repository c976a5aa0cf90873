//! Order-one right factors φ − α (Riccati solutions) for operators of order 2 and 3.

use serde::Serialize;

use crate::field::{AlgNum, Case, Ctx, Poly, RatFunc, TowerError};
use crate::ore::{OreError, OreOp};
use crate::ratsolve::{rational_solutions_scalar, RatSolveError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RiccatiError {
    #[error("unsupported order {0} (expected 2 or 3)")]
    UnsupportedOrder(i64),
    #[error("trailing or leading coefficient vanishes")]
    Degenerate,
    #[error(transparent)]
    Solve(#[from] RatSolveError),
    #[error(transparent)]
    Ore(#[from] OreError),
}

#[derive(Clone, Copy, Debug)]
pub struct RiccatiOptions {
    /// Adjoin roots of the λ-polynomials when none lies in the current constants.
    pub adjoin_lambda: bool,
    /// Split a₀ and a_n completely before enumerating divisors.
    pub extend_divisors: bool,
    /// Stop at the first solution.
    pub first_only: bool,
}

impl Default for RiccatiOptions {
    fn default() -> Self {
        RiccatiOptions {
            adjoin_lambda: true,
            extend_divisors: false,
            first_only: false,
        }
    }
}

/// α = λ·(b/c)·φ(r)/r with φ − α a right factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiccatiSolution {
    pub alpha: RatFunc,
    pub lambda: AlgNum,
    pub b: Poly,
    pub c: Poly,
    pub r: RatFunc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Rejection {
    /// gcd(b, φ^k(c)) ≠ 1 for the given k.
    Gcd(usize),
    /// The term of index i has strictly the largest degree.
    DominantDegree(usize),
    /// The term of index i has strictly the smallest valuation (case Q).
    DominantValuation(usize),
    NoLambda,
    NoRationalSolution,
}

/// Degree data of one divisor pair: term i of the cleared equation has degree degrees[i] + deg r.
#[derive(Clone, Debug, Serialize)]
pub struct PairRecord {
    pub b: String,
    pub c: String,
    pub degrees: Vec<i64>,
    pub valuations: Vec<i64>,
    pub lambdas: Vec<String>,
    pub rejected: Option<Rejection>,
}

#[derive(Clone, Debug)]
pub struct RiccatiReport {
    pub solutions: Vec<RiccatiSolution>,
    pub pairs: Vec<PairRecord>,
    /// False when divisors or λ were searched only over the unextended constants.
    pub complete: bool,
}

impl RiccatiReport {
    pub fn has_solution(&self) -> bool {
        !self.solutions.is_empty()
    }
}

/// Monic divisors of p over the current constants, sorted by degree.
fn divisors(p: &Poly, ctx: &Ctx) -> Vec<Poly> {
    let mut out = vec![Poly::one()];
    if p.degree() >= 1 {
        for (g, m) in ctx.consts.factor(p) {
            let mut next = Vec::new();
            for d in &out {
                let mut acc = d.clone();
                next.push(acc.clone());
                for _ in 0..m {
                    acc = &acc * &g;
                    next.push(acc.clone());
                }
            }
            out = next;
        }
    }
    out.sort();
    out
}

/// Σ aᵢ·Πⱼ₌₀^{i−1} φʲ(α).
pub fn riccati_residual(l: &OreOp, alpha: &RatFunc) -> RatFunc {
    let spec = l.spec();
    let ln = l.normalized();
    let mut acc = RatFunc::zero();
    let mut prod = RatFunc::one();
    for i in 0..=ln.top().unwrap_or(0) {
        acc = &acc + &(&ln.coeff(i) * &prod);
        prod = &prod * &spec.phi(alpha, i);
    }
    acc
}

fn verify(l: &OreOp, alpha: &RatFunc) -> bool {
    if !riccati_residual(l, alpha).is_zero() {
        return false;
    }
    let f = OreOp::first_order(l.spec(), alpha);
    matches!(l.right_divide(&f), Ok((_, r)) if r.is_zero())
}

fn strict_extreme(vals: &[Option<i64>], max: bool) -> Option<usize> {
    let present: Vec<(usize, i64)> = vals.iter().enumerate().filter_map(|(i, v)| v.map(|v| (i, v))).collect();
    let best = if max {
        present.iter().map(|x| x.1).max()?
    } else {
        present.iter().map(|x| x.1).min()?
    };
    let at: Vec<usize> = present.iter().filter(|x| x.1 == best).map(|x| x.0).collect();
    if at.len() == 1 {
        Some(at[0])
    } else {
        None
    }
}

struct Pair {
    b: Poly,
    c: Poly,
    terms: Vec<Poly>,
    chi: Poly,
}

fn constant_shortcut(a: &[Poly], l: &OreOp, ctx: &Ctx, opts: &RiccatiOptions) -> RiccatiReport {
    let chi = Poly::new(a.iter().map(|x| x.coeff(0)).collect());
    let (roots, complete) = lambda_roots(&chi, ctx, opts.adjoin_lambda);
    let mut solutions = Vec::new();
    for lam in roots {
        let alpha = RatFunc::constant(lam.clone());
        if verify(l, &alpha) {
            solutions.push(RiccatiSolution {
                alpha,
                lambda: lam,
                b: Poly::one(),
                c: Poly::one(),
                r: RatFunc::one(),
            });
            if opts.first_only {
                break;
            }
        }
    }
    RiccatiReport {
        solutions,
        pairs: Vec::new(),
        complete,
    }
}

/// Nonzero roots of chi, in-field roots first; adjoins the rest when allowed.
fn lambda_roots(chi: &Poly, ctx: &Ctx, adjoin: bool) -> (Vec<AlgNum>, bool) {
    if chi.degree() < 1 {
        return (Vec::new(), true);
    }
    let mut roots: Vec<AlgNum> = ctx.consts.roots(chi).into_iter().filter(|x| !x.is_zero()).collect();
    let outside = ctx.consts.factor(chi).iter().any(|(g, _)| g.degree() > 1);
    if !outside {
        return (roots, true);
    }
    if !adjoin {
        return (roots, false);
    }
    match ctx.consts.split(chi) {
        Ok(all) => {
            for x in all {
                if !x.is_zero() && !roots.contains(&x) {
                    roots.push(x);
                }
            }
            (roots, true)
        }
        Err(TowerError::DepthExceeded(_)) | Err(TowerError::Constant) => (roots, false),
    }
}

/// All decomposition classes of Riccati solutions of L.
pub fn riccati_solve(l: &OreOp, ctx: &Ctx, opts: &RiccatiOptions) -> Result<RiccatiReport, RiccatiError> {
    let ln = l.normalized();
    let n = ln.order().ok_or(RiccatiError::Degenerate)?;
    if !(2..=3).contains(&n) {
        return Err(RiccatiError::UnsupportedOrder(n));
    }
    let a = ln.polynomial_coeffs();
    let nu = n as usize;
    if a.iter().all(|x| x.degree() <= 0) {
        return Ok(constant_shortcut(&a, &ln, ctx, opts));
    }
    let mut complete = true;
    let an_back = ctx.spec.phi_poly(&a[nu], -(n - 1));
    if opts.extend_divisors {
        for p in [&a[0], &an_back] {
            if p.degree() >= 1 && ctx.consts.split(p).is_err() {
                complete = false;
            }
        }
    }
    let bdivs = divisors(&a[0], ctx);
    let cdivs = divisors(&an_back, ctx);

    let mut pairs: Vec<PairRecord> = Vec::new();
    let mut live: Vec<Pair> = Vec::new();
    for b in &bdivs {
        for c in &cdivs {
            let mut rec = PairRecord {
                b: b.to_string(),
                c: c.to_string(),
                degrees: Vec::new(),
                valuations: Vec::new(),
                lambdas: Vec::new(),
                rejected: None,
            };
            if let Some(k) = (0..nu).find(|&k| b.gcd(&ctx.spec.phi_poly(c, k as i64)).degree() >= 1) {
                rec.rejected = Some(Rejection::Gcd(k));
                pairs.push(rec);
                continue;
            }
            let terms: Vec<Poly> = (0..=nu)
                .map(|i| {
                    let mut t = a[i].clone();
                    for j in 0..i {
                        t = &t * &ctx.spec.phi_poly(b, j as i64);
                    }
                    for j in i..nu {
                        t = &t * &ctx.spec.phi_poly(c, j as i64);
                    }
                    t
                })
                .collect();
            let degs: Vec<Option<i64>> = terms.iter().map(|t| (!t.is_zero()).then(|| t.degree())).collect();
            let vals: Vec<Option<i64>> = terms.iter().map(|t| t.valuation().map(|v| v as i64)).collect();
            rec.degrees = degs.iter().map(|d| d.unwrap_or(-1)).collect();
            rec.valuations = vals.iter().map(|d| d.unwrap_or(-1)).collect();
            if let Some(i) = strict_extreme(&degs, true) {
                rec.rejected = Some(Rejection::DominantDegree(i));
                pairs.push(rec);
                continue;
            }
            let chi = match ctx.spec.case {
                Case::S => {
                    let d = degs.iter().flatten().max().copied().unwrap();
                    Poly::new(
                        terms
                            .iter()
                            .map(|t| if t.degree() == d { t.lc() } else { AlgNum::zero() })
                            .collect(),
                    )
                }
                Case::Q => {
                    if let Some(i) = strict_extreme(&vals, false) {
                        rec.rejected = Some(Rejection::DominantValuation(i));
                        pairs.push(rec);
                        continue;
                    }
                    let v = vals.iter().flatten().min().copied().unwrap();
                    Poly::new(
                        terms
                            .iter()
                            .map(|t| {
                                if t.valuation().map(|x| x as i64) == Some(v) {
                                    t.tc()
                                } else {
                                    AlgNum::zero()
                                }
                            })
                            .collect(),
                    )
                }
            };
            pairs.push(rec);
            live.push(Pair {
                b: b.clone(),
                c: c.clone(),
                terms,
                chi,
            });
        }
    }

    let mut solutions = Vec::new();
    // in-field λ first, then adjoined ones
    for pass in 0..2 {
        if pass == 1 && (!opts.adjoin_lambda || (opts.first_only && !solutions.is_empty())) {
            if !opts.adjoin_lambda
                && live
                    .iter()
                    .any(|p| ctx.consts.factor(&p.chi).iter().any(|(g, _)| g.degree() > 1))
            {
                complete = false;
            }
            break;
        }
        let mut rec_idx = 0;
        for p in &live {
            while pairs[rec_idx].b != p.b.to_string() || pairs[rec_idx].c != p.c.to_string() {
                rec_idx += 1;
            }
            let lambdas = if pass == 0 {
                ctx.consts
                    .roots(&p.chi)
                    .into_iter()
                    .filter(|x| !x.is_zero())
                    .collect::<Vec<_>>()
            } else {
                let before: Vec<AlgNum> = ctx.consts.roots(&p.chi);
                let (all, comp) = lambda_roots(&p.chi, ctx, true);
                complete &= comp;
                all.into_iter().filter(|x| !before.contains(x)).collect()
            };
            for lam in &lambdas {
                pairs[rec_idx].lambdas.push(lam.to_string());
                let coeffs: Vec<RatFunc> = p
                    .terms
                    .iter()
                    .enumerate()
                    .map(|(i, t)| RatFunc::from_poly(t.scale(&lam.pow(i as i64))))
                    .collect();
                let op = OreOp::new(&ctx.spec, coeffs);
                let sp = rational_solutions_scalar(&op, ctx)?;
                let Some(r) = sp.basis.into_iter().next().map(|mut v| v.remove(0)) else {
                    continue;
                };
                let r = r.scale(&r.num().lc().inv());
                let alpha = &(&RatFunc::new(p.b.scale(lam), p.c.clone()) * &ctx.phi(&r, 1)) / &r;
                assert!(verify(&ln, &alpha), "Riccati solution failed verification");
                solutions.push(RiccatiSolution {
                    alpha,
                    lambda: lam.clone(),
                    b: p.b.clone(),
                    c: p.c.clone(),
                    r,
                });
                if opts.first_only {
                    return Ok(RiccatiReport {
                        solutions,
                        pairs,
                        complete,
                    });
                }
            }
        }
    }
    for rec in pairs.iter_mut().filter(|r| r.rejected.is_none()) {
        if rec.lambdas.is_empty() {
            rec.rejected = Some(Rejection::NoLambda);
        } else if !solutions
            .iter()
            .any(|s| s.b.to_string() == rec.b && s.c.to_string() == rec.c)
        {
            rec.rejected = Some(Rejection::NoRationalSolution);
        }
    }
    Ok(RiccatiReport {
        solutions,
        pairs,
        complete,
    })
}

/// An order-one left factor φ − β of L, found through a right factor of the dual.
#[derive(Clone, Debug)]
pub struct LeftFactor {
    pub beta: RatFunc,
    pub dual: RiccatiSolution,
}

/// Riccati search on the dual operator; the returned β gives L = (φ − β)·N.
pub fn left_factor_exists(
    l: &OreOp,
    ctx: &Ctx,
    opts: &RiccatiOptions,
) -> Result<(Option<LeftFactor>, RiccatiReport), RiccatiError> {
    let dual = l.normalized().dual().normalized();
    let rep = riccati_solve(&dual, ctx, opts)?;
    let lf = rep.solutions.first().map(|s| {
        let beta = ctx.phi(&s.alpha.inv(), -1);
        LeftFactor { beta, dual: s.clone() }
    });
    if let Some(f) = &lf {
        assert!(
            is_left_factor(l, &f.beta),
            "left factor failed verification: {}",
            f.beta
        );
    }
    Ok((lf, rep))
}

/// True when L = (φ − β)·N for some operator N.
pub fn is_left_factor(l: &OreOp, beta: &RatFunc) -> bool {
    let f = OreOp::first_order(l.spec(), beta).dual().normalized();
    matches!(l.normalized().dual().normalized().right_divide(&f), Ok((_, r)) if r.is_zero())
}
