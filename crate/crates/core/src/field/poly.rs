//! Dense univariate polynomials with [`AlgNum`] coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;

use super::algnum::{join_levels, AlgNum, Level};
use super::qpoly::QVec;

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    c: Vec<AlgNum>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }
    pub fn one() -> Self {
        Poly::constant(AlgNum::one())
    }
    pub fn constant(a: AlgNum) -> Self {
        Poly::new(vec![a])
    }
    /// The variable z.
    pub fn x() -> Self {
        Poly::monomial(AlgNum::one(), 1)
    }
    pub fn monomial(a: AlgNum, k: usize) -> Self {
        let mut c = vec![AlgNum::zero(); k];
        c.push(a);
        Poly::new(c)
    }
    pub fn new(mut c: Vec<AlgNum>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }
    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| AlgNum::from_int(x)).collect())
    }
    pub fn from_qvec(v: &[BigRational]) -> Self {
        Poly::new(v.iter().cloned().map(AlgNum::Rat).collect())
    }
    /// Linear polynomial z - a.
    pub fn linear_root(a: &AlgNum) -> Self {
        Poly::new(vec![-a, AlgNum::one()])
    }

    pub fn coeffs(&self) -> &[AlgNum] {
        &self.c
    }
    pub fn coeff(&self, i: usize) -> AlgNum {
        self.c.get(i).cloned().unwrap_or_else(AlgNum::zero)
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }
    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }
    pub fn deg(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }
    /// Degree with -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.c.len() as i64 - 1
    }
    pub fn lc(&self) -> AlgNum {
        self.c.last().cloned().unwrap_or_else(AlgNum::zero)
    }
    /// Lowest index with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }
    /// Coefficient at the valuation.
    pub fn tc(&self) -> AlgNum {
        self.valuation().map_or_else(AlgNum::zero, |v| self.c[v].clone())
    }
    pub fn is_rational(&self) -> bool {
        self.c.iter().all(|x| x.is_rational())
    }
    pub fn to_qvec(&self) -> Option<QVec> {
        self.c.iter().map(|x| x.as_rational().cloned()).collect()
    }
    /// Deepest level among the coefficients.
    pub fn max_level(&self) -> Option<Arc<Level>> {
        let mut out: Option<Arc<Level>> = None;
        for x in &self.c {
            if let Some(l) = x.level() {
                out = Some(match out {
                    None => l.clone(),
                    Some(o) => join_levels(&o, l),
                });
            }
        }
        out
    }

    pub fn eval(&self, a: &AlgNum) -> AlgNum {
        let mut acc = AlgNum::zero();
        for x in self.c.iter().rev() {
            acc = &(&acc * a) + x;
        }
        acc
    }

    pub fn scale(&self, a: &AlgNum) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.c.iter().map(|x| x * a).collect())
    }

    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![AlgNum::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = self.lc().inv();
        let mut c: Vec<AlgNum> = self.c.iter().map(|x| x * &inv).collect();
        *c.last_mut().unwrap() = AlgNum::one();
        Poly { c }
    }

    pub fn divrem(&self, b: &Poly) -> (Poly, Poly) {
        let db = b.deg().expect("division by zero polynomial");
        if self.c.len() <= db {
            return (Poly::zero(), self.clone());
        }
        let inv = b.lc().inv();
        let mut r = self.c.clone();
        let mut quo = vec![AlgNum::zero(); r.len() - db];
        for k in (db..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let cf = &r[k] * &inv;
            let s = k - db;
            for j in 0..db {
                let t = &cf * &b.c[j];
                r[s + j] = &r[s + j] - &t;
            }
            r[k] = AlgNum::zero();
            quo[s] = cf;
        }
        r.truncate(db);
        (Poly::new(quo), Poly::new(r))
    }

    pub fn rem(&self, b: &Poly) -> Poly {
        self.divrem(b).1
    }

    /// Quotient when `b` divides exactly.
    pub fn exact_div(&self, b: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(b);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// (g, s, t) with s·a + t·b = g monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(other);
        (self * &other.exact_div(&g).unwrap()).monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x * &AlgNum::from_int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// p(z + a).
    pub fn taylor_shift(&self, a: &AlgNum) -> Poly {
        if a.is_zero() || self.is_constant() {
            return self.clone();
        }
        let lin = Poly::new(vec![a.clone(), AlgNum::one()]);
        let mut acc = Poly::zero();
        for x in self.c.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(x.clone());
        }
        acc
    }

    /// p(a·z).
    pub fn dilate(&self, a: &AlgNum) -> Poly {
        let mut pw = AlgNum::one();
        let mut c = Vec::with_capacity(self.c.len());
        for x in &self.c {
            c.push(x * &pw);
            pw = &pw * a;
        }
        Poly::new(c)
    }

    /// p(g(z)).
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for x in self.c.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(x.clone());
        }
        acc
    }

    /// Coefficient vector of p(z) mapped into `level`.
    pub fn lift(&self, level: &Arc<Level>) -> Poly {
        Poly::new(self.c.iter().map(|x| x.lift(level)).collect())
    }

    pub fn map_coeffs(&self, f: impl Fn(&AlgNum) -> AlgNum) -> Poly {
        Poly::new(self.c.iter().map(f).collect())
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, x) in self.c.iter().enumerate().rev() {
            if x.is_zero() {
                continue;
            }
            let neg = x.is_negative_rational();
            let a = if neg { -x } else { x.clone() };
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{}^{}", var, i),
            };
            let mut cs = a.to_string();
            if cs.starts_with('-') && !s.is_empty() {
                cs = format!("({})", cs);
            }
            if i == 0 {
                s.push_str(&cs);
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{}*{}", cs, mono));
            }
        }
        s
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the top; deterministic, not algebraic.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.len().cmp(&other.c.len()).then_with(|| {
            for (a, b) in self.c.iter().rev().zip(other.c.iter().rev()) {
                let o = a.cmp(b);
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("z"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("z"))
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let z = AlgNum::zero();
        Poly::new(
            (0..n)
                .map(|i| self.c.get(i).unwrap_or(&z) + o.c.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let z = AlgNum::zero();
        Poly::new(
            (0..n)
                .map(|i| self.c.get(i).unwrap_or(&z) - o.c.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![AlgNum::zero(); self.c.len() + o.c.len() - 1];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.c.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                c[i + j] = &c[i + j] + &(x * y);
            }
        }
        Poly::new(c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: &Poly) -> Poly {
                (&self).$m(o)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                self.$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
