use std::collections::BTreeMap;
use std::fmt;

use crate::field::{DiffFieldSpec, Poly, RatFunc};

use super::{MatK, OreError};

/// A difference operator Σ a_i φ^i (i may be negative) with the twist φ·f = φ(f)·φ.
#[derive(Clone, PartialEq, Eq)]
pub struct OreOp {
    spec: DiffFieldSpec,
    coeffs: BTreeMap<i64, RatFunc>,
}

impl OreOp {
    /// Σ_{i} coeffs[i]·φ^i.
    pub fn new(spec: &DiffFieldSpec, coeffs: Vec<RatFunc>) -> Self {
        Self::from_map(spec, coeffs.into_iter().enumerate().map(|(i, c)| (i as i64, c)))
    }

    pub fn from_map(spec: &DiffFieldSpec, it: impl IntoIterator<Item = (i64, RatFunc)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (i, c) in it {
            if c.is_zero() {
                continue;
            }
            let e: &mut RatFunc = coeffs.entry(i).or_insert_with(RatFunc::zero);
            *e = &*e + &c;
        }
        coeffs.retain(|_, c: &mut RatFunc| !c.is_zero());
        OreOp {
            spec: spec.clone(),
            coeffs,
        }
    }

    pub fn from_polys(spec: &DiffFieldSpec, coeffs: &[Poly]) -> Self {
        Self::new(spec, coeffs.iter().cloned().map(RatFunc::from_poly).collect())
    }

    pub fn zero(spec: &DiffFieldSpec) -> Self {
        Self::from_map(spec, [])
    }
    pub fn scalar(spec: &DiffFieldSpec, f: RatFunc) -> Self {
        Self::from_map(spec, [(0, f)])
    }
    pub fn phi_pow(spec: &DiffFieldSpec, k: i64) -> Self {
        Self::from_map(spec, [(k, RatFunc::one())])
    }
    /// φ - α.
    pub fn first_order(spec: &DiffFieldSpec, alpha: &RatFunc) -> Self {
        Self::from_map(spec, [(1, RatFunc::one()), (0, -alpha)])
    }

    pub fn spec(&self) -> &DiffFieldSpec {
        &self.spec
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn coeff(&self, i: i64) -> RatFunc {
        self.coeffs.get(&i).cloned().unwrap_or_else(RatFunc::zero)
    }
    pub fn terms(&self) -> impl Iterator<Item = (&i64, &RatFunc)> {
        self.coeffs.iter()
    }
    pub fn top(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }
    pub fn bottom(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }
    /// top - bottom exponent.
    pub fn order(&self) -> Option<i64> {
        Some(self.top()? - self.bottom()?)
    }
    pub fn leading(&self) -> RatFunc {
        self.top().map_or_else(RatFunc::zero, |t| self.coeff(t))
    }

    fn check(&self, o: &OreOp) -> Result<(), OreError> {
        if self.spec != o.spec {
            Err(OreError::SpecMismatch)
        } else {
            Ok(())
        }
    }

    pub fn add(&self, o: &OreOp) -> Result<OreOp, OreError> {
        self.check(o)?;
        Ok(Self::from_map(
            &self.spec,
            self.coeffs.iter().chain(o.coeffs.iter()).map(|(i, c)| (*i, c.clone())),
        ))
    }

    pub fn sub(&self, o: &OreOp) -> Result<OreOp, OreError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> OreOp {
        Self::from_map(&self.spec, self.coeffs.iter().map(|(i, c)| (*i, -c)))
    }

    /// Ore product self·o.
    pub fn mul(&self, o: &OreOp) -> Result<OreOp, OreError> {
        self.check(o)?;
        let mut terms = Vec::new();
        for (i, a) in &self.coeffs {
            for (j, b) in &o.coeffs {
                terms.push((i + j, a * &self.spec.phi(b, *i)));
            }
        }
        Ok(Self::from_map(&self.spec, terms))
    }

    /// f·self.
    pub fn left_scale(&self, f: &RatFunc) -> OreOp {
        Self::from_map(&self.spec, self.coeffs.iter().map(|(i, c)| (*i, f * c)))
    }

    /// φ^k·self.
    pub fn left_shift(&self, k: i64) -> OreOp {
        Self::from_map(
            &self.spec,
            self.coeffs.iter().map(|(i, c)| (i + k, self.spec.phi(c, k))),
        )
    }

    /// M^∨ = Σ φ^{-i}(a_i) φ^{-i}.
    pub fn dual(&self) -> OreOp {
        Self::from_map(&self.spec, self.coeffs.iter().map(|(i, c)| (-i, self.spec.phi(c, -i))))
    }

    /// self = Q·d + R with every exponent of R below the top exponent of d.
    pub fn right_divide(&self, d: &OreOp) -> Result<(OreOp, OreOp), OreError> {
        self.check(d)?;
        let dt = d.top().ok_or(OreError::DivisionByZero)?;
        let dl = d.coeff(dt);
        let mut r = self.clone();
        let mut quo = Vec::new();
        while let Some(t) = r.top() {
            if t < dt {
                break;
            }
            let k = t - dt;
            let c = &r.coeff(t) / &self.spec.phi(&dl, k);
            let term = OreOp::from_map(&self.spec, [(k, c.clone())]);
            r = r.sub(&term.mul(d)?)?;
            quo.push((k, c));
        }
        Ok((OreOp::from_map(&self.spec, quo), r))
    }

    /// Left-multiplies by φ^{-bottom} so the support starts at 0.
    pub fn normalized(&self) -> OreOp {
        match self.bottom() {
            Some(b) if b != 0 => self.left_shift(-b),
            _ => self.clone(),
        }
    }

    /// Coefficients a_0..a_n of the normalized operator.
    pub fn coeff_vec(&self) -> Vec<RatFunc> {
        let n = self.normalized();
        match n.top() {
            None => Vec::new(),
            Some(t) => (0..=t).map(|i| n.coeff(i)).collect(),
        }
    }

    /// Normalized operator with polynomial coefficients (left-multiplied by the lcm of denominators).
    pub fn polynomial_coeffs(&self) -> Vec<Poly> {
        let v = self.coeff_vec();
        let mut l = Poly::one();
        for c in &v {
            l = l.lcm(c.den());
        }
        let lf = RatFunc::from_poly(l);
        let mut out: Vec<Poly> = v.iter().map(|c| (&lf * c).num().clone()).collect();
        // strip a common polynomial factor
        let mut g = Poly::zero();
        for c in &out {
            g = g.gcd(c);
        }
        if g.degree() > 0 {
            out = out.iter().map(|c| c.exact_div(&g).unwrap()).collect();
        }
        out
    }

    /// Σ a_i φ^i(y).
    pub fn apply(&self, y: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (i, a) in &self.coeffs {
            acc = &acc + &(a * &self.spec.phi(y, *i));
        }
        acc
    }

    /// Companion matrix of the normalized operator (last row −a_i/a_n).
    pub fn companion(&self) -> Result<MatK, OreError> {
        let v = self.coeff_vec();
        if v.len() < 2 {
            return Err(OreError::OrderZero);
        }
        if v[0].is_zero() {
            return Err(OreError::SingularTrailing);
        }
        let n = v.len() - 1;
        let an = v[n].clone();
        let mut m = MatK::zero(&self.spec, n, n);
        for i in 0..n - 1 {
            m.set(i, i + 1, RatFunc::one());
        }
        for (j, a) in v.iter().enumerate().take(n) {
            m.set(n - 1, j, -(a / &an));
        }
        Ok(m)
    }

    /// Text form re-readable by the parser.
    pub fn to_expr(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().rev() {
            let cs = format!("({})", c);
            parts.push(match *i {
                0 => cs,
                1 => format!("{}*phi", cs),
                k if k < 0 => format!("{}*phi^({})", cs, k),
                k => format!("{}*phi^{}", cs, k),
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Display for OreOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

impl fmt::Debug for OreOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}
