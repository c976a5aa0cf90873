//! Galois groups of equations and systems of order 1 to 3, with reduced forms and certificates.

mod imprimitive;
mod newton;
mod order1;
mod order2;
mod order3;
mod reducible;
pub mod ser;
mod so3;

use serde::Serialize;

use crate::field::{AlgNum, Ctx, RatFunc};
use crate::lattice::{satisfies_relations, DiagonalGroupDesc};
use crate::ore::{check_gauge, MatK, OreError, OreOp};
use crate::ratsolve::{rational_solutions_scalar_rhs, RatSolveError};
use crate::riccati::{RiccatiError, RiccatiOptions};

pub use imprimitive::{imprimitive_group, imprimitive_s, imprimitive_test, ImprimitiveWitness};
pub use newton::{imprimitivity_prescreen, newton_polygon, theta_obstruction, NewtonPolygon, Slope};
pub use order1::{order1_candidate, order1_group, Order1};
pub use reducible::{reducible3_reduce, BlockReduction};
pub use so3::{primitive_group, so3_test, symmetric_decomposition, So3Certificate, So3Result};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("unsupported order {0} (expected 1, 2 or 3)")]
    UnsupportedOrder(i64),
    #[error("operation is only defined for the q-difference case")]
    UnsupportedCase,
    #[error("trailing or leading coefficient vanishes")]
    Degenerate,
    #[error("no cyclic vector found")]
    NoCyclicVector,
    #[error("certificate check failed: {0}")]
    Certificate(String),
    #[error(transparent)]
    Riccati(#[from] RiccatiError),
    #[error(transparent)]
    Solve(#[from] RatSolveError),
    #[error(transparent)]
    Ore(#[from] OreError),
}

#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions {
    /// Allow cube roots, ω and split divisors to extend the constants.
    pub allow_extensions: bool,
    /// Skip the φⁿ imprimitivity test when the Newton polygon already rules it out (case Q).
    pub newton_prescreen: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            allow_extensions: false,
            newton_prescreen: true,
        }
    }
}

impl ClassifyOptions {
    pub fn riccati(&self) -> RiccatiOptions {
        RiccatiOptions {
            adjoin_lambda: true,
            extend_divisors: self.allow_extensions,
            first_only: true,
        }
    }
}

/// Which of the four shapes of the block-diagonal part occurs (order-3 reducible case).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockCase {
    Diagonal,
    Triangular,
    Imprimitive,
    Primitive,
}

/// The unipotent part G ∩ U of a reducible group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "shape")]
pub enum UnipotentShape {
    Trivial,
    /// One-dimensional, supported on the given column of the first row.
    Line {
        position: usize,
    },
    /// {(λc, μc)} for a D₂ dilatation.
    Dilatation {
        #[serde(serialize_with = "ser::display")]
        lambda: AlgNum,
        #[serde(serialize_with = "ser::display")]
        mu: AlgNum,
    },
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum So3Center {
    Continuous,
    Roots {
        order: u64,
    },
    /// det(G) = U_n with gcd(n, 3) = 1 leaves Z(G) = U_{3n} or U_n.
    Ambiguous {
        orders: [u64; 2],
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum GroupDesc {
    FullGL {
        n: usize,
    },
    /// {M : det(M)^k = 1}.
    DetTorsion {
        n: usize,
        k: u64,
    },
    DiagonalKernel {
        lattice: DiagonalGroupDesc,
    },
    /// Block upper triangular: G_D ⋉ (G ∩ U). With `via_dual` the description refers to the
    /// contragredient system, where the order-one block comes first.
    TriangularExt {
        n: usize,
        blocks: Vec<usize>,
        block_case: BlockCase,
        lattice: DiagonalGroupDesc,
        unipotent: UnipotentShape,
        via_dual: bool,
    },
    /// G⁰ ≅ (C*)ⁿ, G/G⁰ ≅ Z/n.
    ImprimitiveFull {
        n: usize,
    },
    /// G⁰ ≅ (C*)ⁿ⁻¹, G/G⁰ ≅ Z/ns, det(G) = Z/ν.
    ImprimitiveTorsion {
        n: usize,
        s: u64,
        nu: u64,
    },
    CyclicOrder1 {
        ell: u64,
    },
    ContinuousOrder1,
    /// Z(G)·SO₃.
    PrimitiveSO3 {
        center: So3Center,
    },
}

impl GroupDesc {
    pub fn kind(&self) -> &'static str {
        match self {
            GroupDesc::FullGL { .. } => "FullGL",
            GroupDesc::DetTorsion { .. } => "DetTorsion",
            GroupDesc::DiagonalKernel { .. } => "DiagonalKernel",
            GroupDesc::TriangularExt { .. } => "TriangularExt",
            GroupDesc::ImprimitiveFull { .. } => "ImprimitiveFull",
            GroupDesc::ImprimitiveTorsion { .. } => "ImprimitiveTorsion",
            GroupDesc::CyclicOrder1 { .. } => "CyclicOrder1",
            GroupDesc::ContinuousOrder1 => "ContinuousOrder1",
            GroupDesc::PrimitiveSO3 { .. } => "PrimitiveSO3",
        }
    }

    /// Dimension of the group.
    pub fn dimension(&self) -> usize {
        match self {
            GroupDesc::FullGL { n } => n * n,
            GroupDesc::DetTorsion { n, .. } => n * n - 1,
            GroupDesc::DiagonalKernel { lattice } => lattice.dimension,
            GroupDesc::TriangularExt {
                n,
                blocks,
                block_case,
                lattice,
                unipotent,
                ..
            } => {
                let base = match block_case {
                    BlockCase::Diagonal | BlockCase::Imprimitive => lattice.dimension,
                    BlockCase::Triangular => lattice.dimension + 1,
                    BlockCase::Primitive => lattice.dimension + 3,
                };
                let u = match unipotent {
                    UnipotentShape::Trivial => 0,
                    UnipotentShape::Full => n - blocks[0],
                    _ => 1,
                };
                base + u
            }
            GroupDesc::ImprimitiveFull { n } => *n,
            GroupDesc::ImprimitiveTorsion { n, .. } => n - 1,
            GroupDesc::CyclicOrder1 { .. } => 0,
            GroupDesc::ContinuousOrder1 => 1,
            GroupDesc::PrimitiveSO3 { center } => match center {
                So3Center::Continuous => 4,
                _ => 3,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RiccatiTarget {
    Operator,
    Dual,
    Iterate(usize),
}

/// One decision of the pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step")]
pub enum TraceStep {
    CyclicVector {
        operator: String,
    },
    Riccati {
        target: RiccatiTarget,
        found: bool,
        complete: bool,
    },
    NewtonPrescreen {
        slopes: Vec<String>,
        passes: bool,
    },
    ImprimitiveTest {
        n: usize,
        found: bool,
    },
    So3 {
        found: bool,
        scope: String,
    },
    /// None when the slopes are not integral.
    ThetaObstruction {
        obstructed: Option<bool>,
    },
    DetGroup {
        continuous: bool,
        order: Option<u64>,
    },
    SideEquation {
        name: String,
        solved: bool,
    },
    Note {
        text: String,
    },
}

/// Kind-specific data backing a classification.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "witness")]
pub enum Witness {
    RightFactor {
        #[serde(serialize_with = "ser::display")]
        alpha: RatFunc,
    },
    LeftFactor {
        #[serde(serialize_with = "ser::display")]
        beta: RatFunc,
    },
    Order1 {
        #[serde(serialize_with = "ser::display_opt")]
        zeta: Option<AlgNum>,
        #[serde(serialize_with = "ser::display")]
        f: RatFunc,
    },
    Imprimitive {
        #[serde(serialize_with = "ser::display")]
        d: RatFunc,
        #[serde(serialize_with = "ser::display")]
        f: RatFunc,
    },
    SideSolution {
        name: String,
        #[serde(serialize_with = "ser::display_vec")]
        solution: Vec<RatFunc>,
    },
    So3 {
        #[serde(serialize_with = "ser::matrix")]
        x: MatK,
        #[serde(serialize_with = "ser::display")]
        mu: RatFunc,
    },
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub group: GroupDesc,
    pub input: MatK,
    pub gauge: MatK,
    /// φ(gauge)·input·gauge⁻¹.
    pub reduced: MatK,
    pub witnesses: Vec<Witness>,
    pub trace: Vec<TraceStep>,
    /// False when the reduced matrix is not certified to lie in G(k), e.g. when a reduced form
    /// needs a further ramification or a constant extension.
    pub reduced_exact: bool,
}

impl Classification {
    pub fn certificate_holds(&self) -> bool {
        check_gauge(&self.input, &self.gauge, &self.reduced)
    }

    pub fn membership_holds(&self) -> bool {
        !self.reduced_exact || membership(&self.group, &self.reduced)
    }

    pub fn verify(&self) -> Result<(), ClassifyError> {
        if !self.certificate_holds() {
            return Err(ClassifyError::Certificate("B ≠ φ(T)·A·T⁻¹".into()));
        }
        if !self.membership_holds() {
            return Err(ClassifyError::Certificate(format!(
                "reduced matrix is not in the {} group",
                self.group.kind()
            )));
        }
        Ok(())
    }
}

/// J·M^{-T}·J with J the order-reversing permutation.
pub fn contragredient(m: &MatK) -> Result<MatK, ClassifyError> {
    let n = m.rows();
    let j = MatK::permutation(m.spec(), &(0..n).rev().collect::<Vec<_>>());
    Ok(j.mul(&m.inverse()?.transpose())?.mul(&j)?)
}

fn product(xs: &[RatFunc]) -> RatFunc {
    xs.iter().fold(RatFunc::one(), |acc, x| &acc * x)
}

fn is_constant_power_one(x: &RatFunc, k: u64) -> bool {
    x.as_constant().is_some_and(|c| c.pow(k as i64).is_one())
}

fn cyclic_support(b: &MatK) -> bool {
    let n = b.rows();
    (0..n).all(|i| (0..n).all(|j| (j == (i + 1) % n) != b.get(i, j).is_zero()))
}

/// B lies in the k-points of the described group.
pub fn membership(group: &GroupDesc, b: &MatK) -> bool {
    let n = b.rows();
    match group {
        GroupDesc::FullGL { .. } => !b.det().is_zero(),
        GroupDesc::DetTorsion { k, .. } => is_constant_power_one(&b.det(), *k),
        GroupDesc::DiagonalKernel { lattice } => {
            b.is_diagonal() && satisfies_relations(&b.diagonal(), &lattice.relations)
        }
        GroupDesc::TriangularExt {
            blocks,
            block_case,
            lattice,
            unipotent,
            via_dual,
            ..
        } => {
            let b = if *via_dual {
                match contragredient(b) {
                    Ok(x) => x,
                    Err(_) => return false,
                }
            } else {
                b.clone()
            };
            triangular_membership(&b, blocks, *block_case, lattice, unipotent)
        }
        GroupDesc::ImprimitiveFull { .. } => cyclic_support(b),
        GroupDesc::ImprimitiveTorsion { n: nn, s, .. } => {
            let entries: Vec<RatFunc> = (0..n).map(|i| b.get(i, (i + 1) % n).clone()).collect();
            cyclic_support(b) && is_constant_power_one(&product(&entries), *nn as u64 * s)
        }
        GroupDesc::CyclicOrder1 { ell } => n == 1 && is_constant_power_one(b.get(0, 0), *ell),
        GroupDesc::ContinuousOrder1 => n == 1 && !b.get(0, 0).is_zero(),
        GroupDesc::PrimitiveSO3 { .. } => {
            let Ok(bbt) = b.mul(&b.transpose()) else { return false };
            let l2 = bbt.get(0, 0).clone();
            let scalar = MatK::identity(b.spec(), n).scale(&l2);
            !l2.is_zero() && bbt == scalar && (&b.det() * &b.det()) == l2.pow(3)
        }
    }
}

fn triangular_membership(
    b: &MatK,
    blocks: &[usize],
    case: BlockCase,
    lattice: &DiagonalGroupDesc,
    unipotent: &UnipotentShape,
) -> bool {
    let n = b.rows();
    if blocks == [1, 1] {
        return b.get(1, 0).is_zero() && satisfies_relations(&b.diagonal(), &lattice.relations);
    }
    if blocks != [1, 2] || n != 3 || !b.get(1, 0).is_zero() || !b.get(2, 0).is_zero() {
        return false;
    }
    let d2 = b.submatrix(1, 3, 1, 3);
    let chars = match case {
        BlockCase::Diagonal => {
            if !d2.is_diagonal() {
                return false;
            }
            b.diagonal()
        }
        BlockCase::Triangular => {
            if !d2.get(1, 0).is_zero() {
                return false;
            }
            b.diagonal()
        }
        BlockCase::Imprimitive => {
            if !d2.get(0, 0).is_zero() || !d2.get(1, 1).is_zero() {
                return false;
            }
            let spec = b.spec();
            let (x, y, w) = (b.get(0, 0), d2.get(0, 1), d2.get(1, 0));
            vec![&spec.phi(x, 1) * x, &spec.phi(y, 1) * w, &spec.phi(w, 1) * y]
        }
        BlockCase::Primitive => vec![b.get(0, 0).clone(), d2.det()],
    };
    if !satisfies_relations(&chars, &lattice.relations) {
        return false;
    }
    let (a1, a2) = (b.get(0, 1), b.get(0, 2));
    match unipotent {
        UnipotentShape::Trivial => a1.is_zero() && a2.is_zero(),
        UnipotentShape::Line { position: 1 } => a2.is_zero(),
        UnipotentShape::Line { position: 2 } => a1.is_zero(),
        UnipotentShape::Line { .. } => false,
        UnipotentShape::Dilatation { lambda, mu } => a1.scale(mu) == a2.scale(lambda),
        UnipotentShape::Full => true,
    }
}

/// L divided by its leading coefficient, support starting at φ⁰.
pub fn monic(l: &OreOp) -> Result<OreOp, ClassifyError> {
    let ln = l.normalized();
    if ln.is_zero() || ln.coeff(0).is_zero() {
        return Err(ClassifyError::Degenerate);
    }
    Ok(ln.left_scale(&ln.leading().inv()))
}

/// t with c1·φ(t) + c0·t = g, if one exists in k.
pub(crate) fn solve_first_order(
    c1: &RatFunc,
    c0: &RatFunc,
    g: &RatFunc,
    ctx: &Ctx,
) -> Result<Option<RatFunc>, ClassifyError> {
    if g.is_zero() {
        return Ok(Some(RatFunc::zero()));
    }
    let op = OreOp::new(&ctx.spec, vec![c0.clone(), c1.clone()]);
    let sols = rational_solutions_scalar_rhs(&op, std::slice::from_ref(g), ctx)?;
    Ok(sols
        .into_iter()
        .find(|s| !s.c[0].is_zero())
        .map(|s| s.y[0].scale(&s.c[0].inv())))
}

fn candidate_vectors(n: usize) -> Vec<Vec<RatFunc>> {
    let mut out = Vec::new();
    for i in 0..n {
        let mut v = vec![RatFunc::zero(); n];
        v[i] = RatFunc::one();
        out.push(v);
    }
    for s in 1..=3i64 {
        out.push((0..n).map(|i| RatFunc::from_int((i as i64 + 1) * s % 5 + 1)).collect());
    }
    let z = RatFunc::z();
    for s in 0..4i64 {
        out.push(
            (0..n)
                .map(|i| (&z + &RatFunc::from_int(s + i as i64)).pow(i as i64))
                .collect(),
        );
    }
    out
}

fn complexity(l: &OreOp) -> i64 {
    l.coeff_vec()
        .iter()
        .map(|c| c.num().degree().max(0) + c.den().degree())
        .sum()
}

/// A scalar operator L and P with φ(P)·A·P⁻¹ = companion(L), over the field of `ctx`.
pub fn cyclic_operator(a: &MatK, ctx: &Ctx) -> Result<(OreOp, MatK), ClassifyError> {
    let n = a.rows();
    let a = a.with_spec(&ctx.spec);
    let mut best: Option<(i64, OreOp, MatK)> = None;
    for (k, c) in candidate_vectors(n).into_iter().enumerate() {
        if k >= n && best.is_some() {
            break;
        }
        let mut rows = vec![c];
        for i in 0..n {
            let pc = MatK::from_rows(&ctx.spec, vec![rows[i].iter().map(|x| ctx.phi(x, 1)).collect()]);
            rows.push(pc.mul(&a)?.row(0));
        }
        let p = MatK::from_rows(&ctx.spec, rows[..n].to_vec());
        if p.det().is_zero() {
            continue;
        }
        let last = MatK::from_rows(&ctx.spec, vec![rows[n].clone()]);
        let lam = last.mul(&p.inverse()?)?.row(0);
        let mut coeffs: Vec<RatFunc> = lam.iter().map(|x| -x).collect();
        coeffs.push(RatFunc::one());
        let l = OreOp::new(&ctx.spec, coeffs);
        let c = complexity(&l);
        if best.as_ref().is_none_or(|(bc, _, _)| c < *bc) {
            best = Some((c, l, p));
        }
    }
    let (_, l, p) = best.ok_or(ClassifyError::NoCyclicVector)?;
    debug_assert!(check_gauge(&a, &p, &l.companion()?));
    Ok((l, p))
}

fn order1_classification(alpha: &RatFunc, ctx: &Ctx) -> Classification {
    let o = order1_group(alpha, ctx);
    let spec = &ctx.spec;
    Classification {
        group: o.group.clone(),
        input: MatK::diag(spec, std::slice::from_ref(alpha)),
        gauge: MatK::diag(spec, std::slice::from_ref(&o.gauge)),
        reduced: MatK::diag(spec, std::slice::from_ref(&o.reduced)),
        witnesses: vec![Witness::Order1 {
            zeta: o.zeta.clone(),
            f: o.gauge.inv(),
        }],
        trace: vec![TraceStep::DetGroup {
            continuous: o.group == GroupDesc::ContinuousOrder1,
            order: o.order(),
        }],
        reduced_exact: o.exact,
    }
}

/// Galois group of L·y = 0 through its companion system.
pub fn classify_operator(l: &OreOp, ctx: &Ctx, opts: &ClassifyOptions) -> Result<Classification, ClassifyError> {
    let lm = monic(l)?;
    let c = match lm.order() {
        Some(1) => order1_classification(&-lm.coeff(0), ctx),
        Some(2) => order2::classify(&lm, ctx, opts)?,
        Some(3) => order3::classify(&lm, ctx, opts)?,
        Some(o) => return Err(ClassifyError::UnsupportedOrder(o)),
        None => return Err(ClassifyError::Degenerate),
    };
    c.verify()?;
    Ok(c)
}

/// Galois group of φ(Y) = A·Y for A of size 1 to 3.
pub fn classify_system(a: &MatK, ctx: &Ctx, opts: &ClassifyOptions) -> Result<Classification, ClassifyError> {
    match a.rows() {
        1 => {
            let c = order1_classification(a.get(0, 0), ctx);
            c.verify()?;
            Ok(c)
        }
        2 | 3 => {
            let (l, p) = cyclic_operator(a, ctx)?;
            let mut c = classify_operator(&l, ctx, opts)?;
            c.trace.insert(0, TraceStep::CyclicVector { operator: l.to_expr() });
            c.gauge = c.gauge.mul(&p)?;
            c.input = a.clone();
            c.verify()?;
            Ok(c)
        }
        n => Err(ClassifyError::UnsupportedOrder(n as i64)),
    }
}

/// Alias with the operator-level name used for order 2.
pub fn order2_group(l: &OreOp, ctx: &Ctx, opts: &ClassifyOptions) -> Result<Classification, ClassifyError> {
    let lm = monic(l)?;
    if lm.order() != Some(2) {
        return Err(ClassifyError::UnsupportedOrder(lm.order().unwrap_or(0)));
    }
    classify_operator(&lm, ctx, opts)
}

pub fn order3_group(l: &OreOp, ctx: &Ctx, opts: &ClassifyOptions) -> Result<Classification, ClassifyError> {
    let lm = monic(l)?;
    if lm.order() != Some(3) {
        return Err(ClassifyError::UnsupportedOrder(lm.order().unwrap_or(0)));
    }
    classify_operator(&lm, ctx, opts)
}

#[cfg(test)]
mod tests;
