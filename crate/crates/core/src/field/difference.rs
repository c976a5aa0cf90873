//! The difference fields (C(z), z ↦ z+h) and (C(z), z ↦ qz), orbits of
//! irreducible polynomials under φ, and dispersion.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::algnum::{AlgNum, Constants};
use super::nffactor::factor_over;
use super::poly::Poly;
use super::ratfunc::RatFunc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Case {
    /// Shift: φ(f)(z) = f(z + h).
    S,
    /// q-dilation: φ(f)(z) = f(qz).
    Q,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::S => write!(f, "S"),
            Case::Q => write!(f, "Q"),
        }
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("q = {0} is zero or a root of unity")]
    BadQ(String),
    #[error("h must be nonzero")]
    ZeroShift,
    #[error("ramification {0} is not supported for the shift case")]
    Ramification(u32),
    #[error("ramification must be positive")]
    ZeroRamification,
    #[error(transparent)]
    Tower(#[from] super::algnum::TowerError),
}

/// Which automorphism, with which parameter, on C(w) where z = w^ℓ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffFieldSpec {
    pub case: Case,
    /// h or q as given by the user.
    pub param: AlgNum,
    pub ramification: u32,
    /// Parameter actually acting on the working variable: h, or q^{1/ℓ}.
    pub step: AlgNum,
}

impl DiffFieldSpec {
    pub fn shift(h: AlgNum) -> Result<Self, SpecError> {
        if h.is_zero() {
            return Err(SpecError::ZeroShift);
        }
        Ok(DiffFieldSpec {
            case: Case::S,
            param: h.clone(),
            ramification: 1,
            step: h,
        })
    }

    pub fn qdiff(q: AlgNum) -> Result<Self, SpecError> {
        if q.is_zero() || q.is_root_of_unity() {
            return Err(SpecError::BadQ(q.to_string()));
        }
        Ok(DiffFieldSpec {
            case: Case::Q,
            param: q.clone(),
            ramification: 1,
            step: q,
        })
    }

    /// Spec over C(w), z = w^ℓ; in case Q the acting parameter is a root of x^ℓ - q.
    pub fn ramified(case: Case, param: AlgNum, ell: u32, consts: &Constants) -> Result<Self, SpecError> {
        if ell == 0 {
            return Err(SpecError::ZeroRamification);
        }
        let mut s = match case {
            Case::S => Self::shift(param)?,
            Case::Q => Self::qdiff(param)?,
        };
        if ell == 1 {
            return Ok(s);
        }
        if case == Case::S {
            return Err(SpecError::Ramification(ell));
        }
        s.step = consts.nth_root(&s.param, ell)?;
        s.ramification = ell;
        Ok(s)
    }

    /// The field (k, φ^n).
    pub fn iterate(&self, n: i64) -> Self {
        let step = match self.case {
            Case::S => &self.step * &AlgNum::from_int(n),
            Case::Q => self.step.pow(n),
        };
        let param = match self.case {
            Case::S => &self.param * &AlgNum::from_int(n),
            Case::Q => self.param.pow(n),
        };
        DiffFieldSpec {
            case: self.case,
            param,
            ramification: self.ramification,
            step,
        }
    }

    pub fn phi_poly(&self, p: &Poly, power: i64) -> Poly {
        if power == 0 {
            return p.clone();
        }
        match self.case {
            Case::S => p.taylor_shift(&(&self.step * &AlgNum::from_int(power))),
            Case::Q => p.dilate(&self.step.pow(power)),
        }
    }

    pub fn phi(&self, f: &RatFunc, power: i64) -> RatFunc {
        if power == 0 || f.is_constant() {
            return f.clone();
        }
        RatFunc::from_coprime(self.phi_poly(f.num(), power), self.phi_poly(f.den(), power))
    }

    /// Monic-normalized φ^j(p).
    pub fn phi_monic(&self, p: &Poly, power: i64) -> Poly {
        self.phi_poly(p, power).monic()
    }

    /// The derivation that commutes with φ: d/dz (S) or z·d/dz (Q).
    pub fn derivation(&self, f: &RatFunc) -> RatFunc {
        let d = f.derivative();
        match self.case {
            Case::S => d,
            Case::Q => &RatFunc::z() * &d,
        }
    }

    pub fn describe(&self) -> String {
        let p = match self.case {
            Case::S => "h",
            Case::Q => "q",
        };
        format!(
            "case {} with {} = {}, ramification {}",
            self.case, p, self.param, self.ramification
        )
    }
}

/// φ applied `power` times.
pub fn phi(f: &RatFunc, spec: &DiffFieldSpec, power: i64) -> RatFunc {
    spec.phi(f, power)
}

fn approx_log2(n: &BigInt) -> f64 {
    let n = n.abs();
    let bits = n.bits();
    if bits <= 1000 {
        n.to_f64().unwrap_or(f64::MAX).log2()
    } else {
        let shift = bits - 64;
        let top: BigInt = &n >> shift;
        top.to_f64().unwrap().log2() + shift as f64
    }
}

fn rat_height(r: &num_rational::BigRational) -> f64 {
    approx_log2(r.numer()).max(approx_log2(r.denom()))
}

/// Integer t with c = q^t, if any (q must not be a root of unity).
pub fn q_log(c: &AlgNum, q: &AlgNum) -> Option<i64> {
    if c.is_zero() {
        return None;
    }
    if c.is_one() {
        return Some(0);
    }
    let check = |t: i64| q.pow(t) == *c;
    match (c.as_rational(), q.as_rational()) {
        (Some(cr), Some(qr)) => {
            let hq = rat_height(qr);
            if hq == 0.0 {
                return None;
            }
            let est = (rat_height(cr) / hq).round() as i64;
            for t in [est, -est, est + 1, -est - 1, est - 1, -est + 1] {
                if check(t) {
                    return Some(t);
                }
            }
            None
        }
        _ => {
            let lvl = match (c.level(), q.level()) {
                (Some(a), Some(b)) => super::algnum::join_levels(a, b),
                (Some(a), None) | (None, Some(a)) => a.clone(),
                _ => unreachable!(),
            };
            let nq = q.norm_in(&lvl);
            let nc = c.norm_in(&lvl);
            if !nq.abs().is_integer() || nq.abs() != num_rational::BigRational::from_integer(1.into()) {
                let t = q_log(&AlgNum::Rat(nc), &AlgNum::Rat(nq))?;
                return if check(t) { Some(t) } else { None };
            }
            // unit of norm ±1 that is not a root of unity: bounded search
            (1..=64).flat_map(|t| [t, -t]).find(|&t| check(t))
        }
    }
}

/// j with monic(φ^j(r)) = p, for monic irreducible p, r.
pub fn shift_relation(p: &Poly, r: &Poly, spec: &DiffFieldSpec) -> Option<i64> {
    if p.degree() != r.degree() || p.degree() < 1 {
        return None;
    }
    if p == r {
        return Some(0);
    }
    let d = p.degree();
    let j = match spec.case {
        Case::S => {
            // coefficient of z^{d-1}: r_{d-1} + d·j·h
            let num = &p.coeff(d as usize - 1) - &r.coeff(d as usize - 1);
            let j = &num / &(&spec.step * &AlgNum::from_int(d));
            j.to_i64()?
        }
        Case::Q => {
            let v = r.valuation()?;
            if p.valuation()? != v || v as i64 == d {
                return None;
            }
            // p_v = r_v q^{j(v-d)}
            let ratio = &p.coeff(v) / &r.coeff(v);
            let t = q_log(&ratio, &spec.step)?;
            let k = v as i64 - d;
            if t % k != 0 {
                return None;
            }
            t / k
        }
    };
    if spec.phi_monic(r, j) == *p {
        Some(j)
    } else {
        None
    }
}

/// True for the polynomial z (the fixed point of the q-dilation).
pub fn is_z(p: &Poly) -> bool {
    p.degree() == 1 && p.coeff(0).is_zero()
}

/// An orbit of monic irreducible polynomials under φ, positions relative to `rep`.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub rep: Poly,
    pub members: Vec<(i64, Poly)>,
}

#[derive(Clone, Debug, Default)]
pub struct Orbits {
    pub orbits: Vec<Orbit>,
}

impl Orbits {
    /// Groups monic irreducible polynomials into φ-orbits (z is skipped in case Q).
    pub fn build<'a>(polys: impl IntoIterator<Item = &'a Poly>, spec: &DiffFieldSpec) -> Orbits {
        let mut o = Orbits::default();
        for p in polys {
            o.insert(p, spec);
        }
        o
    }

    /// Orbit index and position of p, adding it when new.
    pub fn insert(&mut self, p: &Poly, spec: &DiffFieldSpec) -> Option<(usize, i64)> {
        if spec.case == Case::Q && is_z(p) {
            return None;
        }
        if let Some(found) = self.locate(p) {
            return Some(found);
        }
        for (i, orb) in self.orbits.iter_mut().enumerate() {
            if let Some(j) = shift_relation(p, &orb.rep, spec) {
                orb.members.push((j, p.clone()));
                return Some((i, j));
            }
        }
        self.orbits.push(Orbit {
            rep: p.clone(),
            members: vec![(0, p.clone())],
        });
        Some((self.orbits.len() - 1, 0))
    }

    pub fn locate(&self, p: &Poly) -> Option<(usize, i64)> {
        for (i, orb) in self.orbits.iter().enumerate() {
            if let Some((j, _)) = orb.members.iter().find(|(_, m)| m == p) {
                return Some((i, *j));
            }
        }
        None
    }
}

/// All j ≥ 0 with gcd(p, φ^j(r)) nonconstant (the root z = 0 is ignored in case Q).
pub fn dispersion(p: &Poly, r: &Poly, spec: &DiffFieldSpec, consts: &Constants) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    if p.degree() < 1 || r.degree() < 1 {
        return out;
    }
    let top = consts.top();
    let fp = factor_over(p, top.as_ref());
    let fr = factor_over(r, top.as_ref());
    for (a, _) in &fp {
        if spec.case == Case::Q && is_z(a) {
            continue;
        }
        for (b, _) in &fr {
            if let Some(j) = shift_relation(a, b, spec) {
                if j >= 0 {
                    out.insert(j as u64);
                }
            }
        }
    }
    out
}

/// Unit times a product of monic irreducible powers.
#[derive(Clone, Debug)]
pub struct Factored {
    pub unit: AlgNum,
    pub factors: Vec<(Poly, i64)>,
}

/// Factors a nonzero rational function over the current constants.
pub fn factor_ratfunc(f: &RatFunc, consts: &Constants) -> Factored {
    assert!(!f.is_zero());
    let unit = f.num().lc();
    let mut factors: Vec<(Poly, i64)> = Vec::new();
    for (g, m) in consts.factor(f.num()) {
        factors.push((g, m as i64));
    }
    for (g, m) in consts.factor(f.den()) {
        factors.push((g, -(m as i64)));
    }
    factors.sort();
    Factored { unit, factors }
}

impl Factored {
    pub fn to_ratfunc(&self) -> RatFunc {
        let mut n = Poly::constant(self.unit.clone());
        let mut d = Poly::one();
        for (g, e) in &self.factors {
            if *e > 0 {
                n = &n * &g.pow(*e as usize);
            } else {
                d = &d * &g.pow((-e) as usize);
            }
        }
        RatFunc::new(n, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s1() -> DiffFieldSpec {
        DiffFieldSpec::shift(AlgNum::one()).unwrap()
    }
    fn q2() -> DiffFieldSpec {
        DiffFieldSpec::qdiff(AlgNum::from_int(2)).unwrap()
    }

    #[test]
    fn phi_examples() {
        let z2 = RatFunc::from_poly(Poly::from_ints(&[0, 0, 1]));
        assert_eq!(phi(&z2, &s1(), 1), RatFunc::from_poly(Poly::from_ints(&[1, 2, 1])));
        let z3 = RatFunc::from_poly(Poly::from_ints(&[0, 0, 0, 1]));
        assert_eq!(
            phi(&z3, &q2(), -1),
            RatFunc::from_poly(Poly::from_ints(&[0, 0, 0, 1])).scale(&AlgNum::frac(1, 8))
        );
        let f = RatFunc::new(Poly::from_ints(&[-1, 1]), Poly::from_ints(&[1, 1]));
        let g = RatFunc::new(Poly::from_ints(&[-1, 4]), Poly::from_ints(&[1, 4]));
        assert_eq!(phi(&f, &q2(), 2), g);
    }

    #[test]
    fn rejects_roots_of_unity() {
        assert!(DiffFieldSpec::qdiff(AlgNum::from_int(-1)).is_err());
        assert!(DiffFieldSpec::qdiff(AlgNum::from_int(1)).is_err());
        assert!(DiffFieldSpec::qdiff(AlgNum::zero()).is_err());
        assert!(DiffFieldSpec::shift(AlgNum::zero()).is_err());
    }

    #[test]
    fn q_logs() {
        let q = AlgNum::from_int(2);
        assert_eq!(q_log(&AlgNum::from_int(1024), &q), Some(10));
        assert_eq!(q_log(&AlgNum::frac(1, 8), &q), Some(-3));
        assert_eq!(q_log(&AlgNum::from_int(6), &q), None);
        assert_eq!(q_log(&AlgNum::frac(-8, 27), &AlgNum::frac(-2, 3)), Some(3));
    }

    #[test]
    fn dispersion_examples() {
        let k = Constants::with_max_depth(2);
        let d = dispersion(&Poly::x(), &Poly::from_ints(&[-3, 1]), &s1(), &k);
        assert_eq!(d.into_iter().collect::<Vec<_>>(), vec![3]);
        let d = dispersion(&Poly::from_ints(&[-4, 1]), &Poly::from_ints(&[-1, 1]), &q2(), &k);
        // roots 4 and 1: φ^j(z - 1) = 2^j z - 1 vanishes at 2^{-j}; meets 4 at j = -2 only
        assert!(d.is_empty());
        let d = dispersion(&Poly::from_ints(&[-1, 1]), &Poly::from_ints(&[-4, 1]), &q2(), &k);
        assert_eq!(d.into_iter().collect::<Vec<_>>(), vec![2]);
        assert!(dispersion(&Poly::one(), &Poly::x(), &s1(), &k).is_empty());
    }
}
