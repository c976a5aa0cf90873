use crate::field::{Ctx, RatFunc};
use crate::ore::{check_gauge, iterate, MatK};
use crate::ratsolve::rational_solutions_system;
use crate::riccati::riccati_solve;

use super::{
    cyclic_operator, order1_group, Classification, ClassifyError, ClassifyOptions, GroupDesc, TraceStep, Witness,
};

/// T with φ(T)·A·T⁻¹ = E_n(1, …, 1, d).
#[derive(Clone, Debug)]
pub struct ImprimitiveWitness {
    pub n: usize,
    pub d: RatFunc,
    pub gauge: MatK,
}

/// s with G/G⁰ ≅ Z/ns, from det(G) = Z/ν.
pub fn imprimitive_s(nu: u64, n: u64) -> u64 {
    if nu % n == 0 {
        nu / n
    } else {
        nu
    }
}

/// Looks for an imprimitive gauge through a hyperexponential solution of the φⁿ-system.
pub fn imprimitive_test(
    a: &MatK,
    n: usize,
    ctx: &Ctx,
    opts: &ClassifyOptions,
) -> Result<Option<ImprimitiveWitness>, ClassifyError> {
    let spec = &ctx.spec;
    let ctxn = ctx.iterate(n as i64);
    let an = iterate(a, n)?.with_spec(&ctxn.spec);
    let (ln, _) = cyclic_operator(&an, &ctxn)?;
    let mut ropts = opts.riccati();
    ropts.first_only = false;
    let rep = riccati_solve(&ln, &ctxn, &ropts)?;
    for sol in &rep.solutions {
        let d = &sol.alpha;
        // rows u with φⁿ(u)·Aₙ = d·u, i.e. φⁿ(uᵀ) = d·Aₙ^{-T}·uᵀ
        let m = an.transpose().inverse()?.scale(d);
        let sols = rational_solutions_system(&m, None, &ctxn)?;
        for u in &sols.homogeneous.basis {
            let mut rows = vec![u.clone()];
            for i in 1..n {
                let prev = MatK::from_rows(spec, vec![rows[i - 1].iter().map(|x| ctx.phi(x, 1)).collect()]);
                rows.push(prev.mul(a)?.row(0));
            }
            let t = MatK::from_rows(spec, rows);
            if t.det().is_zero() {
                continue;
            }
            let mut entries = vec![RatFunc::one(); n];
            entries[n - 1] = d.clone();
            let e = MatK::cyclic(spec, &entries);
            if check_gauge(a, &t, &e) {
                return Ok(Some(ImprimitiveWitness {
                    n,
                    d: d.clone(),
                    gauge: t,
                }));
            }
        }
    }
    Ok(None)
}

/// Group and reduced form E_n(1, …, 1, f⁻¹, φ(f)·d) of an imprimitive system.
pub fn imprimitive_group(
    a: &MatK,
    w: &ImprimitiveWitness,
    ctx: &Ctx,
    mut trace: Vec<TraceStep>,
) -> Result<Classification, ClassifyError> {
    let spec = &ctx.spec;
    let n = w.n;
    let o = order1_group(&w.d, ctx);
    let f = &o.gauge;
    let mut entries = vec![RatFunc::one(); n];
    entries[n - 2] = f.inv();
    entries[n - 1] = &ctx.phi(f, 1) * &w.d;
    let reduced = MatK::cyclic(spec, &entries);
    let mut dg = vec![RatFunc::one(); n];
    dg[n - 1] = f.clone();
    let t = MatK::diag(spec, &dg).mul(&w.gauge)?;

    let od = order1_group(&a.det(), ctx);
    trace.push(TraceStep::DetGroup {
        continuous: od.order().is_none(),
        order: od.order(),
    });
    let group = match od.order() {
        None => GroupDesc::ImprimitiveFull { n },
        Some(nu) => GroupDesc::ImprimitiveTorsion {
            n,
            s: imprimitive_s(nu, n as u64),
            nu,
        },
    };
    Ok(Classification {
        group,
        input: a.clone(),
        gauge: t,
        reduced,
        witnesses: vec![Witness::Imprimitive {
            d: w.d.clone(),
            f: f.clone(),
        }],
        trace,
        reduced_exact: o.exact,
    })
}
