//! Dense univariate polynomials over Q as plain coefficient vectors (low degree first).
//!
//! These are the workhorses behind the number-field tower; the public
//! polynomial type is [`crate::field::Poly`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type QVec = Vec<BigRational>;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn trim(mut a: QVec) -> QVec {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

/// Degree, with `None` for the zero polynomial.
pub fn deg(a: &[BigRational]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn add(a: &[BigRational], b: &[BigRational]) -> QVec {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
        out.push(x + y);
    }
    trim(out)
}

pub fn sub(a: &[BigRational], b: &[BigRational]) -> QVec {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
        out.push(x - y);
    }
    trim(out)
}

pub fn scale(a: &[BigRational], c: &BigRational) -> QVec {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

pub fn mul(a: &[BigRational], b: &[BigRational]) -> QVec {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem(a: &[BigRational], b: &[BigRational]) -> (QVec, QVec) {
    let db = deg(b).expect("division by zero polynomial");
    let mut r: QVec = trim(a.to_vec());
    let lc_inv = b[db].recip();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut quo = vec![BigRational::zero(); r.len() - db];
    while let Some(dr) = deg(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] * &lc_inv;
        let s = dr - db;
        for (j, y) in b.iter().enumerate().take(db + 1) {
            r[s + j] -= &c * y;
        }
        quo[s] = c;
        r = trim(r);
    }
    (trim(quo), r)
}

pub fn rem(a: &[BigRational], b: &[BigRational]) -> QVec {
    divrem(a, b).1
}

pub fn monic(a: &[BigRational]) -> QVec {
    match deg(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = a[d].recip();
            a[..=d].iter().map(|x| x * &inv).collect()
        }
    }
}

/// Monic gcd (zero if both inputs are zero).
pub fn gcd(a: &[BigRational], b: &[BigRational]) -> QVec {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

/// Extended Euclid: returns (g, s, t) with s·a + t·b = g, g monic.
pub fn xgcd(a: &[BigRational], b: &[BigRational]) -> (QVec, QVec, QVec) {
    let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
    let (mut s0, mut s1) = (vec![BigRational::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![BigRational::one()]);
    while !r1.is_empty() {
        let (qq, r) = divrem(&r0, &r1);
        let s2 = sub(&s0, &mul(&qq, &s1));
        let t2 = sub(&t0, &mul(&qq, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    match deg(&r0) {
        None => (Vec::new(), s0, t0),
        Some(d) => {
            let inv = r0[d].recip();
            (scale(&r0, &inv), scale(&s0, &inv), scale(&t0, &inv))
        }
    }
}

pub fn derivative(a: &[BigRational]) -> QVec {
    trim(a.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect())
}

pub fn eval(a: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in a.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Res(a, b) = lc(a)^deg(b) · Π_{a(α)=0} b(α).
pub fn resultant(a: &[BigRational], b: &[BigRational]) -> BigRational {
    let a = trim(a.to_vec());
    let b = trim(b.to_vec());
    let (Some(da), Some(db)) = (deg(&a), deg(&b)) else {
        return BigRational::zero();
    };
    if da == 0 {
        return pow(&a[0], db);
    }
    if db == 0 {
        return pow(&b[0], da);
    }
    let r = rem(&b, &a);
    let Some(dr) = deg(&r) else {
        return BigRational::zero();
    };
    // Res(a,b) = lc(a)^(db-dr) Res(a,r), Res(a,r) = (-1)^(da·dr) Res(r,a)
    let mut res = pow(&a[da], db - dr) * resultant(&r, &a);
    if (da * dr) % 2 == 1 {
        res = -res;
    }
    res
}

pub fn pow(c: &BigRational, e: usize) -> BigRational {
    num_traits::pow(c.clone(), e)
}

/// Lagrange interpolation through (x_i, y_i).
pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> QVec {
    // Newton divided differences
    let n = xs.len();
    let mut coef: Vec<BigRational> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut out: QVec = Vec::new();
    for i in (0..n).rev() {
        // out = out * (x - xs[i]) + coef[i]
        let shifted = mul(&out, &[-xs[i].clone(), BigRational::one()]);
        out = add(&shifted, &[coef[i].clone()]);
    }
    trim(out)
}

/// Scales to a primitive integer polynomial with positive leading coefficient.
pub fn primitive_int(a: &[BigRational]) -> Vec<BigInt> {
    let a = trim(a.to_vec());
    if a.is_empty() {
        return Vec::new();
    }
    let mut l = BigInt::one();
    for c in &a {
        l = l.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = a.iter().map(|c| (c * &l).to_integer()).collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if ints.last().unwrap().is_negative() {
        g = -g;
    }
    for c in ints.iter_mut() {
        *c = &*c / &g;
    }
    ints
}

pub fn from_ints(a: &[BigInt]) -> QVec {
    trim(a.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

/// Yun's squarefree decomposition over Q: returns (factor, multiplicity), factors monic.
pub fn squarefree(a: &[BigRational]) -> Vec<(QVec, usize)> {
    let a = monic(a);
    if deg(&a).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let da = derivative(&a);
    let mut g = gcd(&a, &da);
    let mut w = divrem(&a, &g).0;
    let mut i = 1;
    while deg(&w).unwrap_or(0) > 0 {
        let y = gcd(&w, &g);
        let z = divrem(&w, &y).0;
        if deg(&z).unwrap_or(0) > 0 {
            out.push((monic(&z), i));
        }
        i += 1;
        w = y;
        g = divrem(&g, &w).0;
    }
    out
}

pub fn is_squarefree(a: &[BigRational]) -> bool {
    deg(&gcd(a, &derivative(a))).unwrap_or(0) == 0
}
