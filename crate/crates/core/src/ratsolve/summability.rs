use crate::field::difference::is_z;
use crate::field::{AlgNum, Case, Ctx, Orbits, Poly, RatFunc};

/// f = poly + Σ terms num / p^e, deg num < deg p, p monic irreducible.
#[derive(Clone, Debug)]
pub struct PartialFractions {
    pub poly: Poly,
    pub terms: Vec<(Poly, usize, Poly)>,
}

/// Full partial-fraction decomposition over the current constants.
pub fn partial_fractions(f: &RatFunc, ctx: &Ctx) -> PartialFractions {
    let (q, r) = f.num().divrem(f.den());
    let mut terms = Vec::new();
    if r.is_zero() {
        return PartialFractions { poly: q, terms };
    }
    let den = f.den();
    for (p, m) in ctx.consts.factor(den) {
        let pm = p.pow(m);
        let rest = den.exact_div(&pm).unwrap();
        // s·rest ≡ 1 mod p^m
        let (g, s, _) = rest.xgcd(&pm);
        let s = s.scale(&g.lc().inv());
        let mut ni = (&r * &s).rem(&pm);
        // p-adic digits of ni
        let mut k = 0;
        while !ni.is_zero() {
            let (quo, digit) = ni.divrem(&p);
            if !digit.is_zero() {
                terms.push((p.clone(), m - k, digit));
            }
            ni = quo;
            k += 1;
        }
    }
    PartialFractions { poly: q, terms }
}

fn poly_summable_shift(p: &Poly, h: &AlgNum) -> Poly {
    // G with G(z+h) - G(z) = p
    let mut rest = p.clone();
    let mut g = Poly::zero();
    while !rest.is_zero() {
        let d = rest.deg().unwrap();
        let t = Poly::monomial(&rest.lc() / &(&AlgNum::from_int(d as i64 + 1) * h), d + 1);
        let dt = &t.taylor_shift(h) - &t;
        rest = &rest - &dt;
        g = &g + &t;
    }
    g
}

/// Joint reduction of several functions with shared orbit representatives.
pub fn summability_reduce_many(fs: &[RatFunc], ctx: &Ctx) -> Vec<(RatFunc, RatFunc)> {
    let pfs: Vec<PartialFractions> = fs.iter().map(|f| partial_fractions(f, ctx)).collect();
    let mut polys: Vec<Poly> = pfs.iter().flat_map(|pf| pf.terms.iter().map(|t| t.0.clone())).collect();
    polys.sort();
    polys.dedup();
    let orbits = Orbits::build(polys.iter(), &ctx.spec);
    let z = RatFunc::z();
    pfs.iter()
        .map(|pf| {
            let mut canon = RatFunc::zero();
            let mut cert = RatFunc::zero();
            match ctx.spec.case {
                Case::S => {
                    cert = &cert + &RatFunc::from_poly(poly_summable_shift(&pf.poly, &ctx.spec.step));
                }
                Case::Q => {
                    for (m, c) in pf.poly.coeffs().iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        if m == 0 {
                            canon = &canon + &RatFunc::constant(c.clone());
                        } else {
                            let qm = ctx.spec.step.pow(m as i64);
                            let g = z.pow(m as i64).scale(&(c / &(&qm - &AlgNum::one())));
                            cert = &cert + &g;
                        }
                    }
                }
            }
            for (p, e, num) in &pf.terms {
                let term = RatFunc::new(num.clone(), p.pow(*e));
                if ctx.spec.case == Case::Q && is_z(p) {
                    // num is a constant: c·z^{-e}
                    let m = -(*e as i64);
                    let qm = ctx.spec.step.pow(m);
                    cert = &cert + &term.scale(&(&qm - &AlgNum::one()).inv());
                    continue;
                }
                let (_, j) = orbits.locate(p).expect("orbit of a partial-fraction pole");
                // term = φ^j(g0) with g0 supported at the representative
                let g0 = ctx.phi(&term, -j);
                canon = &canon + &g0;
                if j > 0 {
                    for i in 0..j {
                        cert = &cert + &ctx.phi(&g0, i);
                    }
                } else if j < 0 {
                    for i in j..0 {
                        cert = &cert - &ctx.phi(&g0, i);
                    }
                }
            }
            (canon, cert)
        })
        .collect()
}

/// f = canonical + φ(g) − g; canonical vanishes exactly when f is summable.
pub fn summability_reduce(f: &RatFunc, ctx: &Ctx) -> (RatFunc, RatFunc) {
    summability_reduce_many(std::slice::from_ref(f), ctx).remove(0)
}
