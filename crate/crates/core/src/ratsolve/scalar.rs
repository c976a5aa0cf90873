use std::collections::BTreeMap;

use crate::field::{q_log, AlgNum, Case, Ctx, Orbits, Poly, RatFunc};
use crate::linalg;
use crate::ore::OreOp;

use super::{ParamSolution, RatSolveError, SolutionSpace};

fn multiplicity(p: &Poly, f: &Poly) -> i64 {
    if f.is_zero() {
        return 0;
    }
    let mut f = f.clone();
    let mut m = 0;
    while let Some(q) = f.exact_div(p) {
        f = q;
        m += 1;
    }
    m
}

/// Denominator bound from a pole-order sweep along each φ-orbit, from above and from below.
fn universal_denominator(a: &[Poly], dens: &[Poly], ctx: &Ctx) -> Poly {
    let n = (a.len() - 1) as i64;
    let mut irr: Vec<Poly> = Vec::new();
    for f in [&a[0], &a[a.len() - 1]].into_iter().chain(dens.iter()) {
        if f.degree() < 1 {
            continue;
        }
        for (g, _) in ctx.consts.factor(f) {
            if !irr.contains(&g) {
                irr.push(g);
            }
        }
    }
    irr.sort();
    let orbits = Orbits::build(irr.iter(), &ctx.spec);
    let mut u = Poly::one();
    for orb in &orbits.orbits {
        // position -> (μ_0..μ_n, γ)
        let mut data: BTreeMap<i64, (Vec<i64>, i64)> = BTreeMap::new();
        for (j, p) in &orb.members {
            let mu: Vec<i64> = a.iter().map(|ai| multiplicity(p, ai)).collect();
            let gam = dens.iter().map(|d| multiplicity(p, d)).max().unwrap_or(0);
            data.insert(*j, (mu, gam));
        }
        let mu = |i: usize, j: i64| data.get(&j).map_or(0, |d| d.0[i]);
        let gam = |j: i64| data.get(&j).map_or(0, |d| d.1);
        let lo = *data.keys().next().unwrap() - n - 1;
        let hi = *data.keys().next_back().unwrap() + 1;
        let width = (hi - lo + 1) as usize;
        let idx = |j: i64| (j - lo) as usize;
        let get = |v: &Vec<i64>, j: i64| if j < lo || j > hi { 0 } else { v[idx(j)] };

        let mut top = vec![0i64; width];
        for j in (lo..=hi).rev() {
            let p = j + n;
            let mut inner = gam(p).max(0);
            for i in 0..n as usize {
                inner = inner.max(get(&top, p - i as i64) - mu(i, p));
            }
            top[idx(j)] = (mu(n as usize, p) + inner).max(0);
        }
        let mut bot = vec![0i64; width];
        for j in lo..=hi {
            let mut inner = gam(j).max(0);
            for i in 1..=n as usize {
                inner = inner.max(get(&bot, j - i as i64) - mu(i, j));
            }
            bot[idx(j)] = (mu(0, j) + inner).max(0);
        }
        for j in lo..=hi {
            let e = top[idx(j)].min(bot[idx(j)]);
            if e > 0 {
                let p = orb
                    .members
                    .iter()
                    .find(|(k, _)| *k == j)
                    .map(|(_, p)| p.clone())
                    .unwrap_or_else(|| ctx.spec.phi_monic(&orb.rep, j));
                u = &u * &p.pow(e as usize);
            }
        }
    }
    u
}

fn falling(k: usize) -> Poly {
    let mut p = Poly::one();
    for j in 0..k {
        p = &p * &Poly::new(vec![AlgNum::from_int(-(j as i64)), AlgNum::one()]);
    }
    p
}

fn binom(i: usize, k: usize) -> i64 {
    let mut r: i64 = 1;
    for j in 0..k {
        r = r * (i - j) as i64 / (j as i64 + 1);
    }
    r
}

fn integer_roots(p: &Poly, ctx: &Ctx) -> Vec<i64> {
    if p.degree() < 1 {
        return Vec::new();
    }
    ctx.consts.roots(p).iter().filter_map(|r| r.to_i64()).collect()
}

fn q_exponents(chi: &Poly, ctx: &Ctx) -> Vec<i64> {
    if chi.degree() < 1 {
        return Vec::new();
    }
    ctx.consts
        .roots(chi)
        .iter()
        .filter_map(|r| q_log(r, &ctx.spec.step))
        .collect()
}

/// Exponent window [v, d] for the (Laurent) numerator, or None when it must vanish.
fn exponent_window(b: &[Poly], r: &[Poly], ctx: &Ctx) -> Option<(i64, i64)> {
    let rdeg = r.iter().filter(|x| !x.is_zero()).map(|x| x.degree()).max();
    match ctx.spec.case {
        Case::S => {
            let n = b.len() - 1;
            let h = &ctx.spec.step;
            let mut beta = i64::MIN;
            let mut pk = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let mut p = Poly::zero();
                for (i, bi) in b.iter().enumerate().skip(k) {
                    p = &p + &bi.scale(&AlgNum::from_int(binom(i, k)));
                }
                if !p.is_zero() {
                    beta = beta.max(p.degree() - k as i64);
                }
                pk.push(p);
            }
            let mut ind = Poly::zero();
            for (k, p) in pk.iter().enumerate() {
                if !p.is_zero() && p.degree() - k as i64 == beta {
                    ind = &ind + &falling(k).scale(&(&p.lc() * &h.pow(k as i64)));
                }
            }
            let d = integer_roots(&ind, ctx)
                .into_iter()
                .filter(|&d| d >= 0)
                .chain(rdeg.map(|rd| rd - beta))
                .max()?;
            if d < 0 {
                None
            } else {
                Some((0, d))
            }
        }
        Case::Q => {
            let dtop = b.iter().map(|x| x.degree()).max().unwrap();
            let chi_inf = Poly::new(
                b.iter()
                    .map(|x| if x.degree() == dtop { x.lc() } else { AlgNum::zero() })
                    .collect(),
            );
            let vmin = b.iter().filter_map(|x| x.valuation()).min().unwrap() as i64;
            let chi_0 = Poly::new(
                b.iter()
                    .map(|x| {
                        if x.valuation().map(|v| v as i64) == Some(vmin) {
                            x.tc()
                        } else {
                            AlgNum::zero()
                        }
                    })
                    .collect(),
            );
            let rval = r.iter().filter_map(|x| x.valuation()).map(|v| v as i64).min();
            let d = q_exponents(&chi_inf, ctx)
                .into_iter()
                .chain(rdeg.map(|rd| rd - dtop))
                .max()?;
            let v = q_exponents(&chi_0, ctx)
                .into_iter()
                .chain(rval.map(|rv| rv - vmin))
                .min()?;
            if v > d {
                None
            } else {
                Some((v, d))
            }
        }
    }
}

/// Basis of {(z^v·P, c) : Σ b_i φ^i(z^v·P) = Σ c_k r_k} for polynomial b_i, r_k.
fn solve_cleared(b: &[Poly], r: &[Poly], ctx: &Ctx) -> Vec<(i64, Poly, Vec<AlgNum>)> {
    let window = exponent_window(b, r, ctx);
    let (v, d) = window.unwrap_or((0, -1));
    let np = (d - v + 1).max(0) as usize;
    let k = r.len();
    // images of the monomials as (offset, poly)
    let mut images: Vec<(i64, Poly)> = Vec::with_capacity(np + k);
    match ctx.spec.case {
        Case::S => {
            let n = b.len() - 1;
            let shifts: Vec<Poly> = (0..=n)
                .map(|i| Poly::new(vec![&ctx.spec.step * &AlgNum::from_int(i as i64), AlgNum::one()]))
                .collect();
            let mut pows: Vec<Poly> = vec![Poly::one(); n + 1];
            for m in 0..=d.max(-1) {
                if m > 0 {
                    for i in 0..=n {
                        pows[i] = &pows[i] * &shifts[i];
                    }
                }
                let mut img = Poly::zero();
                for i in 0..=n {
                    img = &img + &(&b[i] * &pows[i]);
                }
                images.push((0, img));
            }
        }
        Case::Q => {
            for m in v..=d {
                let mut img = Poly::zero();
                for (i, bi) in b.iter().enumerate() {
                    img = &img + &bi.scale(&ctx.spec.step.pow(i as i64 * m));
                }
                images.push((m, img));
            }
        }
    }
    for rk in r {
        images.push((0, -rk));
    }
    let ncols = images.len();
    if ncols == 0 {
        return Vec::new();
    }
    let off = images.iter().map(|x| x.0).min().unwrap();
    let top = images
        .iter()
        .filter(|x| !x.1.is_zero())
        .map(|x| x.0 + x.1.degree())
        .max()
        .unwrap_or(off);
    let nrows = (top - off + 1) as usize;
    let mut mat = vec![vec![AlgNum::zero(); ncols]; nrows];
    for (col, (o, p)) in images.iter().enumerate() {
        for (e, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                mat[(o - off) as usize + e][col] = c.clone();
            }
        }
    }
    linalg::nullspace(&mat, ncols)
        .into_iter()
        .map(|x| (v, Poly::new(x[..np].to_vec()), x[np..].to_vec()))
        .collect()
}

/// Basis of {(y, c) : L y = Σ c_k g_k} over the constants.
pub fn rational_solutions_scalar_rhs(
    l: &OreOp,
    rhs: &[RatFunc],
    ctx: &Ctx,
) -> Result<Vec<ParamSolution>, RatSolveError> {
    let bottom = l.bottom().ok_or(RatSolveError::Degenerate)?;
    let ln = l.normalized();
    let g: Vec<RatFunc> = rhs.iter().map(|x| ctx.phi(x, -bottom)).collect();
    let a = ln.coeff_vec();
    let n = a.len() - 1;
    let k = g.len();
    if n == 0 {
        return Ok((0..k)
            .map(|j| {
                let mut c = vec![AlgNum::zero(); k];
                c[j] = AlgNum::one();
                ParamSolution {
                    y: vec![&g[j] / &a[0]],
                    c,
                }
            })
            .collect());
    }
    let mut den = Poly::one();
    for x in &a {
        den = den.lcm(x.den());
    }
    let dr = RatFunc::from_poly(den);
    let ap: Vec<Poly> = a.iter().map(|x| (&dr * x).num().clone()).collect();
    let gc: Vec<RatFunc> = g.iter().map(|x| &dr * x).collect();
    let gdens: Vec<Poly> = gc.iter().map(|x| x.den().clone()).collect();
    let u = universal_denominator(&ap, &gdens, ctx);

    let ur = RatFunc::from_poly(u.clone());
    let phi_u: Vec<Poly> = (0..=n).map(|i| ctx.spec.phi_poly(&u, i as i64)).collect();
    let mut w = Poly::one();
    for p in &phi_u {
        w = w.lcm(p);
    }
    let mut b: Vec<RatFunc> = (0..=n)
        .map(|i| &RatFunc::from_poly(ap[i].clone()) * &RatFunc::new(w.clone(), phi_u[i].clone()))
        .collect();
    let mut r: Vec<RatFunc> = gc.iter().map(|x| x * &RatFunc::from_poly(w.clone())).collect();
    let mut gd = Poly::one();
    for x in b.iter().chain(r.iter()) {
        gd = gd.lcm(x.den());
    }
    let gdr = RatFunc::from_poly(gd);
    b = b.iter().map(|x| x * &gdr).collect();
    r = r.iter().map(|x| x * &gdr).collect();
    let bp: Vec<Poly> = b.iter().map(|x| x.num().clone()).collect();
    let rp: Vec<Poly> = r.iter().map(|x| x.num().clone()).collect();

    let mut out = Vec::new();
    for (v, p, c) in solve_cleared(&bp, &rp, ctx) {
        let num = RatFunc::from_poly(p);
        let zv = RatFunc::z().pow(v);
        let y = &(&num * &zv) / &ur;
        let mut lhs = ln.apply(&y);
        for (ck, gk) in c.iter().zip(g.iter()) {
            lhs = &lhs - &gk.scale(ck);
        }
        if !lhs.is_zero() {
            return Err(RatSolveError::Verification);
        }
        out.push(ParamSolution { y: vec![y], c });
    }
    Ok(out)
}

/// Basis of rational solutions of L y = 0.
pub fn rational_solutions_scalar(l: &OreOp, ctx: &Ctx) -> Result<SolutionSpace, RatSolveError> {
    let sols = rational_solutions_scalar_rhs(l, &[], ctx)?;
    Ok(SolutionSpace::new(sols.into_iter().map(|s| s.y).collect()))
}

/// f ∈ k* with φ(f)/f = r, if one exists.
pub fn multiplicative_solve(r: &RatFunc, ctx: &Ctx) -> Result<Option<RatFunc>, RatSolveError> {
    if r.is_zero() {
        return Err(RatSolveError::Degenerate);
    }
    if r.is_one() {
        return Ok(Some(RatFunc::one()));
    }
    let l = OreOp::first_order(&ctx.spec, r);
    let sp = rational_solutions_scalar(&l, ctx)?;
    Ok(sp.basis.into_iter().next().map(|mut v| {
        let f = v.remove(0);
        // normalize to a monic numerator and denominator
        let lc = f.num().lc();
        f.scale(&lc.inv())
    }))
}
