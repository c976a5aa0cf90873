//! Reduced rational functions num/den with monic denominator.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::algnum::AlgNum;
use super::poly::Poly;

#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let l = d.lc();
        if !l.is_one() {
            let inv = l.inv();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RatFunc { num: n, den: d }
    }

    /// Builds without gcd normalization; the caller guarantees coprime inputs.
    pub fn from_coprime(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let l = den.lc();
        if l.is_one() {
            RatFunc { num, den }
        } else {
            let inv = l.inv();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }
    pub fn one() -> Self {
        RatFunc::constant(AlgNum::one())
    }
    pub fn constant(a: AlgNum) -> Self {
        RatFunc {
            num: Poly::constant(a),
            den: Poly::one(),
        }
    }
    pub fn from_int(n: i64) -> Self {
        RatFunc::constant(AlgNum::from_int(n))
    }
    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }
    /// The variable z.
    pub fn z() -> Self {
        RatFunc::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }
    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }
    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }
    pub fn as_constant(&self) -> Option<AlgNum> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }
    /// deg num - deg den.
    pub fn degree(&self) -> i64 {
        self.num.degree() - self.den.degree()
    }
    /// Order at z = 0.
    pub fn val0(&self) -> i64 {
        self.num.valuation().unwrap_or(0) as i64 - self.den.valuation().unwrap_or(0) as i64
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero rational function");
        RatFunc::from_coprime(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().pow(-e);
        }
        RatFunc {
            num: self.num.pow(e as usize),
            den: self.den.pow(e as usize),
        }
    }

    pub fn scale(&self, a: &AlgNum) -> Self {
        if a.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(a),
            den: self.den.clone(),
        }
    }

    pub fn eval(&self, a: &AlgNum) -> Option<AlgNum> {
        let d = self.den.eval(a);
        if d.is_zero() {
            None
        } else {
            Some(&self.num.eval(a) / &d)
        }
    }

    /// Derivative d/dz.
    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::new(n, &self.den * &self.den)
    }

    pub fn map_polys(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        RatFunc::new(f(&self.num), f(&self.den))
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.fmt_var(var);
        }
        let n = self.num.fmt_var(var);
        let n = if n.contains(' ') || n.contains('/') {
            format!("({})", n)
        } else {
            n
        };
        format!("{}/({})", n, self.den.fmt_var(var))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("z"))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("z"))
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone());
        }
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc::from_poly(&self.num * &o.num);
        }
        // cross-cancel to keep the gcds small
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = o.den.exact_div(&g1).unwrap();
        let n2 = o.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        RatFunc::from_coprime(&n1 * &n2, &d1 * &d2)
    }
}

impl Div<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn div(self, o: &RatFunc) -> RatFunc {
        self * &o.inv()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: RatFunc) -> RatFunc {
                (&self).$m(&o)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: &RatFunc) -> RatFunc {
                (&self).$m(o)
            }
        }
        impl $tr<RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $m(self, o: RatFunc) -> RatFunc {
                self.$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<AlgNum> for RatFunc {
    fn from(a: AlgNum) -> Self {
        RatFunc::constant(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes() {
        let a = RatFunc::new(Poly::from_ints(&[-1, 0, 1]), Poly::from_ints(&[2, 2]));
        assert_eq!(a.num(), &Poly::from_ints(&[-1, 1]).scale(&AlgNum::frac(1, 2)));
        assert_eq!(a.den(), &Poly::one());
        let b = RatFunc::new(Poly::from_ints(&[1]), Poly::from_ints(&[0, 3]));
        assert_eq!(b.to_string(), "(1/3)/(z)");
        let c = &(&a * &b) / &b;
        assert_eq!(c, a);
        assert_eq!(&(&a + &b) - &b, a);
    }
}
