//! Galois groups of diagonal systems through their lattice of character relations.

pub mod consts;
pub mod intmat;

use serde::Serialize;

use crate::field::difference::is_z;
use crate::field::{factor_ratfunc, AlgNum, Case, Ctx, Orbits, Poly, RatFunc};

pub use intmat::IntRow;

/// Π α_i^{m_i} = ζ·φ(f)/f.
#[derive(Clone, Debug)]
pub struct RelationWitness {
    pub m: IntRow,
    pub zeta: AlgNum,
    pub f: RatFunc,
}

#[derive(Clone, Debug)]
pub struct CharLattice {
    pub rank_n: usize,
    /// HNF basis of the relation lattice.
    pub relations: Vec<IntRow>,
    /// One witness per HNF row (ζ = 1), then torsion witnesses (ζ ≠ 1).
    pub witnesses: Vec<RelationWitness>,
    /// False when constant relations came from a bounded search.
    pub constants_exact: bool,
}

/// The group {Diag(c) : Π c_i^{m_i} = 1 for all relations m}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalGroupDesc {
    pub n: usize,
    pub relations: Vec<IntRow>,
    pub dimension: usize,
    /// Elementary divisors > 1 of the relation lattice: the component group is Π Z/d.
    pub torsion: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct DiagonalGroup {
    pub lattice: CharLattice,
    pub desc: DiagonalGroupDesc,
    /// Diag(f) with φ(f_i)·α_i/f_i = reduced_i.
    pub reduction: Vec<RatFunc>,
    pub reduced: Vec<RatFunc>,
}

/// Π φ^t(p) over t in 0..j (j > 0) or the inverse product over j..0 (j < 0): φ(g)/g = φ^j(p)/p.
fn orbit_cobound(p: &Poly, j: i64, ctx: &Ctx) -> RatFunc {
    let mut g = RatFunc::one();
    if j > 0 {
        for t in 0..j {
            g = &g * &RatFunc::from_poly(ctx.spec.phi_poly(p, t));
        }
    } else {
        for t in j..0 {
            g = &g / &RatFunc::from_poly(ctx.spec.phi_poly(p, t));
        }
    }
    g
}

fn check_witness(alphas: &[RatFunc], w: &RelationWitness, ctx: &Ctx) -> bool {
    let mut lhs = RatFunc::one();
    for (a, m) in alphas.iter().zip(&w.m) {
        lhs = &lhs * &a.pow(*m);
    }
    let rhs = &(&ctx.phi(&w.f, 1) / &w.f).scale(&w.zeta);
    lhs == *rhs
}

/// Relation lattice and group of φ(Y) = Diag(α)Y.
pub fn diagonal_group(alphas: &[RatFunc], ctx: &Ctx) -> DiagonalGroup {
    let n = alphas.len();
    assert!(alphas.iter().all(|a| !a.is_zero()), "diagonal entries must be nonzero");
    let facs: Vec<_> = alphas.iter().map(|a| factor_ratfunc(a, &ctx.consts)).collect();
    let orbits = Orbits::build(facs.iter().flat_map(|f| f.factors.iter().map(|x| &x.0)), &ctx.spec);
    let norb = orbits.orbits.len();
    let qcase = ctx.spec.case == Case::Q;

    // reduced forms α̃_i = ũ_i·z^{v_i}·Π rep^{E}
    let mut units = Vec::with_capacity(n);
    let mut exps: Vec<IntRow> = Vec::with_capacity(n);
    let mut reduction = Vec::with_capacity(n);
    let mut reduced = Vec::with_capacity(n);
    for (a, f) in alphas.iter().zip(&facs) {
        let mut u = f.unit.clone();
        let mut e = vec![0i64; norb + usize::from(qcase)];
        let mut h = RatFunc::one();
        for (p, m) in &f.factors {
            if qcase && is_z(p) {
                e[norb] += m;
                continue;
            }
            let (oi, j) = orbits.locate(p).unwrap();
            let rep = &orbits.orbits[oi].rep;
            let lc = ctx.spec.phi_poly(rep, j).lc();
            u = &u * &lc.pow(-m);
            let g = orbit_cobound(rep, j, ctx);
            h = &h * &g.pow(-m);
            e[oi] += m;
        }
        let mut red = RatFunc::constant(u.clone());
        for (oi, orb) in orbits.orbits.iter().enumerate() {
            red = &red * &RatFunc::from_poly(orb.rep.clone()).pow(e[oi]);
        }
        if qcase {
            red = &red * &RatFunc::z().pow(e[norb]);
        }
        debug_assert_eq!(&(a * &ctx.phi(&h, 1)) / &h, red);
        units.push(u);
        exps.push(e);
        reduction.push(h);
        reduced.push(red);
    }

    // integer kernel of the exponent data, then the constant condition on it
    let rows: Vec<IntRow> = (0..exps.first().map_or(0, |e| e.len()))
        .map(|k| exps.iter().map(|e| e[k]).collect())
        .collect();
    let k0: Vec<IntRow> = if rows.is_empty() {
        (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
    } else {
        intmat::kernel(&rows, n)
    };
    let w: Vec<AlgNum> = k0
        .iter()
        .map(|b| {
            let mut x = AlgNum::one();
            for (u, bi) in units.iter().zip(b) {
                x = &x * &u.pow(*bi);
            }
            x
        })
        .collect();
    let q = qcase.then(|| ctx.spec.step.clone());
    let cr = consts::constant_relations(&w, q.as_ref());
    let rel: Vec<IntRow> = cr.lattice.iter().map(|t| intmat::combine(t, &k0, n)).collect();
    let relations = intmat::hnf(&rel);

    let witness_for = |m: &IntRow, zeta: AlgNum| -> RelationWitness {
        // Π α^m = ζ·q^a·Π(h_i/φ(h_i))^{m_i}
        let mut x = AlgNum::one();
        let mut big_h = RatFunc::one();
        for i in 0..n {
            x = &x * &units[i].pow(m[i]);
            big_h = &big_h * &reduction[i].pow(-m[i]);
        }
        let x = &x / &zeta;
        let a = match &q {
            Some(q) => consts::q_exponent(&x, q).expect("relation constant lies in the q-subgroup"),
            None => 0,
        };
        RelationWitness {
            m: m.clone(),
            zeta,
            f: &big_h * &RatFunc::z().pow(a),
        }
    };
    let mut witnesses: Vec<RelationWitness> = relations.iter().map(|m| witness_for(m, AlgNum::one())).collect();
    for (t, zeta) in &cr.torsion {
        let m = intmat::combine(t, &k0, n);
        witnesses.push(witness_for(&m, zeta.clone()));
    }
    for wt in &witnesses {
        assert!(check_witness(alphas, wt, ctx), "relation witness failed: {:?}", wt.m);
    }

    let rank = relations.len();
    let torsion: Vec<i64> = intmat::elementary_divisors(&relations)
        .into_iter()
        .filter(|&d| d > 1)
        .collect();
    DiagonalGroup {
        lattice: CharLattice {
            rank_n: n,
            relations: relations.clone(),
            witnesses,
            constants_exact: cr.exact,
        },
        desc: DiagonalGroupDesc {
            n,
            relations,
            dimension: n - rank,
            torsion,
        },
        reduction,
        reduced,
    }
}

/// Diagonal gauge Diag(g) with φ(g_i)·α_i/g_i = b_i and Diag(b) in the k-points of the group.
#[derive(Clone, Debug)]
pub struct DiagonalReduction {
    pub group: DiagonalGroup,
    pub gauge: Vec<RatFunc>,
    pub reduced: Vec<RatFunc>,
    /// False when Diag(b) only satisfies the relations up to powers of the step (case Q),
    /// i.e. a reduced form needs further ramification.
    pub exact: bool,
}

/// Reduced form of φ(Y) = Diag(α)Y. In case Q the orbit reduction is corrected by
/// monomials z^{a_i} so that every relation holds with constant 1.
pub fn reduce_diagonal(alphas: &[RatFunc], ctx: &Ctx) -> DiagonalReduction {
    let group = diagonal_group(alphas, ctx);
    let n = alphas.len();
    let mut gauge = group.reduction.clone();
    let mut reduced = group.reduced.clone();
    let mut exact = true;
    if ctx.spec.case == Case::Q && !group.lattice.relations.is_empty() {
        let step = &ctx.spec.step;
        let mut c = Vec::new();
        for m in &group.lattice.relations {
            let mut x = RatFunc::one();
            for (b, mi) in reduced.iter().zip(m) {
                x = &x * &b.pow(*mi);
            }
            let a = x.as_constant().and_then(|x| consts::q_exponent(&x, step));
            c.push(-a.expect("relation product is a power of the step"));
        }
        match intmat::solve_integer(&group.lattice.relations, &c, n) {
            Some(a) => {
                for i in 0..n {
                    let zi = RatFunc::z().pow(a[i]);
                    gauge[i] = &gauge[i] * &zi;
                    reduced[i] = reduced[i].scale(&step.pow(a[i]));
                }
            }
            None => exact = false,
        }
    }
    for i in 0..n {
        debug_assert_eq!(&(&alphas[i] * &ctx.phi(&gauge[i], 1)) / &gauge[i], reduced[i]);
    }
    DiagonalReduction {
        group,
        gauge,
        reduced,
        exact,
    }
}

/// True when Π b_i^{m_i} = 1 for every relation m.
pub fn satisfies_relations(b: &[RatFunc], relations: &[IntRow]) -> bool {
    relations.iter().all(|m| {
        let mut x = RatFunc::one();
        for (bi, mi) in b.iter().zip(m) {
            x = &x * &bi.pow(*mi);
        }
        x.is_one()
    })
}
