//! Exact algebraic constants living in an append-only tower of number fields.
//!
//! Every level is a simple extension `Q(θ_i)` given by a monic minimal
//! polynomial over Q, together with the image of the previous generator.
//! Values keep a handle on the level they were built in, so growing the tower
//! never invalidates existing values.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::qpoly::{self, QVec};

static NEXT_LEVEL_ID: AtomicU64 = AtomicU64::new(1);

/// One simple extension in the tower.
#[derive(Debug)]
pub struct Level {
    pub id: u64,
    pub depth: usize,
    /// Monic minimal polynomial of the generator over Q.
    pub minpoly: QVec,
    pub parent: Option<Arc<Level>>,
    /// Previous generator written as a polynomial in this generator.
    pub parent_gen: QVec,
}

impl Level {
    pub fn new(minpoly: QVec, parent: Option<Arc<Level>>, parent_gen: QVec) -> Arc<Level> {
        let depth = parent.as_ref().map_or(1, |p| p.depth + 1);
        Arc::new(Level {
            id: NEXT_LEVEL_ID.fetch_add(1, AtomicOrdering::Relaxed),
            depth,
            minpoly: qpoly::monic(&minpoly),
            parent,
            parent_gen,
        })
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn generator_name(&self) -> String {
        format!("th{}", self.depth)
    }

    fn reduce(&self, a: &[BigRational]) -> QVec {
        if a.len() <= self.degree() {
            qpoly::trim(a.to_vec())
        } else {
            qpoly::rem(a, &self.minpoly)
        }
    }
}

fn is_ancestor(anc: &Arc<Level>, desc: &Arc<Level>) -> bool {
    let mut cur = desc.clone();
    loop {
        if cur.depth < anc.depth {
            return false;
        }
        if Arc::ptr_eq(&cur, anc) {
            return true;
        }
        match &cur.parent {
            Some(p) => cur = p.clone(),
            None => return false,
        }
    }
}

/// The deeper of two comparable levels; panics if they come from unrelated towers.
pub fn join_levels(a: &Arc<Level>, b: &Arc<Level>) -> Arc<Level> {
    if a.depth >= b.depth {
        assert!(is_ancestor(b, a), "algebraic numbers from unrelated towers");
        a.clone()
    } else {
        assert!(is_ancestor(a, b), "algebraic numbers from unrelated towers");
        b.clone()
    }
}

fn embed_coeffs(x: &[BigRational], from: &Arc<Level>, to: &Arc<Level>) -> QVec {
    if Arc::ptr_eq(from, to) {
        return x.to_vec();
    }
    let mut chain = Vec::new();
    let mut cur = to.clone();
    while !Arc::ptr_eq(&cur, from) {
        chain.push(cur.clone());
        cur = cur.parent.clone().expect("level is not an ancestor");
    }
    let mut v = x.to_vec();
    for lvl in chain.iter().rev() {
        // substitute previous generator = parent_gen (Horner in lvl)
        let mut acc: QVec = Vec::new();
        for c in v.iter().rev() {
            acc = lvl.reduce(&qpoly::mul(&acc, &lvl.parent_gen));
            acc = qpoly::add(&acc, &[c.clone()]);
        }
        v = acc;
    }
    v
}

/// An exact algebraic number: a rational, or an element of some tower level.
#[derive(Clone)]
pub enum AlgNum {
    Rat(BigRational),
    /// Irrational element: coefficients in powers of the level generator.
    Alg(Arc<Level>, QVec),
}

impl AlgNum {
    pub fn zero() -> Self {
        AlgNum::Rat(BigRational::zero())
    }
    pub fn one() -> Self {
        AlgNum::Rat(BigRational::one())
    }
    pub fn from_int(n: i64) -> Self {
        AlgNum::Rat(BigRational::from_integer(BigInt::from(n)))
    }
    pub fn from_bigint(n: BigInt) -> Self {
        AlgNum::Rat(BigRational::from_integer(n))
    }
    pub fn frac(n: i64, d: i64) -> Self {
        AlgNum::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }
    pub fn rat(r: BigRational) -> Self {
        AlgNum::Rat(r)
    }

    /// Builds the element Σ c_i θ^i of `level`, demoting rationals.
    pub fn from_level(level: &Arc<Level>, coeffs: &[BigRational]) -> Self {
        let v = level.reduce(coeffs);
        match qpoly::deg(&v) {
            None => AlgNum::zero(),
            Some(0) => AlgNum::Rat(v[0].clone()),
            Some(_) => AlgNum::Alg(level.clone(), v),
        }
    }

    /// The generator θ of `level`.
    pub fn generator(level: &Arc<Level>) -> Self {
        Self::from_level(level, &[BigRational::zero(), BigRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, AlgNum::Rat(r) if r.is_zero())
    }
    pub fn is_one(&self) -> bool {
        matches!(self, AlgNum::Rat(r) if r.is_one())
    }
    pub fn is_rational(&self) -> bool {
        matches!(self, AlgNum::Rat(_))
    }
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            AlgNum::Rat(r) => Some(r),
            AlgNum::Alg(..) => None,
        }
    }
    pub fn is_integer(&self) -> bool {
        matches!(self, AlgNum::Rat(r) if r.is_integer())
    }
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            AlgNum::Rat(r) if r.is_integer() => r.to_integer().to_i64(),
            _ => None,
        }
    }

    pub fn level(&self) -> Option<&Arc<Level>> {
        match self {
            AlgNum::Rat(_) => None,
            AlgNum::Alg(l, _) => Some(l),
        }
    }

    /// Coefficients with respect to the generator of `level` (which must contain self).
    pub fn coeffs_in(&self, level: &Arc<Level>) -> QVec {
        match self {
            AlgNum::Rat(r) => qpoly::trim(vec![r.clone()]),
            AlgNum::Alg(l, v) => embed_coeffs(v, l, level),
        }
    }

    /// Rewrites the value inside `level` (which must contain its current level).
    pub fn lift(&self, level: &Arc<Level>) -> Self {
        match self {
            AlgNum::Rat(_) => self.clone(),
            AlgNum::Alg(l, v) => {
                if Arc::ptr_eq(l, level) {
                    self.clone()
                } else {
                    AlgNum::Alg(level.clone(), embed_coeffs(v, l, level))
                }
            }
        }
    }

    fn binary(
        &self,
        other: &Self,
        rat: impl Fn(&BigRational, &BigRational) -> BigRational,
        alg: impl Fn(&Arc<Level>, &QVec, &QVec) -> QVec,
    ) -> Self {
        match (self, other) {
            (AlgNum::Rat(a), AlgNum::Rat(b)) => AlgNum::Rat(rat(a, b)),
            _ => {
                let lvl = match (self.level(), other.level()) {
                    (Some(a), Some(b)) => join_levels(a, b),
                    (Some(a), None) | (None, Some(a)) => a.clone(),
                    (None, None) => unreachable!(),
                };
                let x = self.coeffs_in(&lvl);
                let y = other.coeffs_in(&lvl);
                AlgNum::from_level(&lvl, &alg(&lvl, &x, &y))
            }
        }
    }

    pub fn inv(&self) -> Self {
        match self {
            AlgNum::Rat(r) => {
                assert!(!r.is_zero(), "inverse of zero");
                AlgNum::Rat(r.recip())
            }
            AlgNum::Alg(l, v) => {
                let (g, s, _) = qpoly::xgcd(v, &l.minpoly);
                debug_assert_eq!(g.len(), 1);
                AlgNum::from_level(l, &s)
            }
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        let mut base = if e < 0 { self.inv() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = AlgNum::one();
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

    /// Field norm down to Q from the level the value lives in.
    pub fn norm(&self) -> BigRational {
        match self {
            AlgNum::Rat(r) => r.clone(),
            AlgNum::Alg(l, v) => qpoly::resultant(&l.minpoly, v),
        }
    }

    /// Norm from a given level (useful to compare two values at a common level).
    pub fn norm_in(&self, level: &Arc<Level>) -> BigRational {
        let v = self.coeffs_in(level);
        qpoly::resultant(&level.minpoly, &v)
    }

    /// Least n ≥ 1 with self^n = 1, if any.
    pub fn root_of_unity_order(&self) -> Option<u64> {
        match self {
            AlgNum::Rat(r) => {
                if r.is_one() {
                    Some(1)
                } else if (-r).is_one() {
                    Some(2)
                } else {
                    None
                }
            }
            AlgNum::Alg(l, _) => {
                if !self.norm().abs().is_one() {
                    return None;
                }
                let d = l.degree() as u64;
                // [Q(ζ_n):Q] = φ(n) ≤ d forces n ≤ 2d² + 2
                let bound = 2 * d * d + 2;
                let mut p = self.clone();
                for n in 1..=bound {
                    if p.is_one() {
                        return if d % euler_phi(n) == 0 { Some(n) } else { None };
                    }
                    p = &p * self;
                }
                None
            }
        }
    }

    pub fn is_root_of_unity(&self) -> bool {
        self.root_of_unity_order().is_some()
    }

    /// True when the value is a rational number < 0.
    pub fn is_negative_rational(&self) -> bool {
        matches!(self, AlgNum::Rat(r) if r.is_negative())
    }

    /// Text form that the CLI parser reads back (given the tower generator names).
    pub fn to_expr(&self) -> String {
        format!("{}", self)
    }
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

impl PartialEq for AlgNum {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (AlgNum::Rat(a), AlgNum::Rat(b)) => a == b,
            (AlgNum::Alg(la, va), AlgNum::Alg(lb, vb)) => {
                let l = join_levels(la, lb);
                embed_coeffs(va, la, &l) == embed_coeffs(vb, lb, &l)
            }
            _ => false,
        }
    }
}
impl Eq for AlgNum {}

impl PartialOrd for AlgNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A total order used only for deterministic output (not a field order).
impl Ord for AlgNum {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (AlgNum::Rat(a), AlgNum::Rat(b)) => a.cmp(b),
            (AlgNum::Rat(_), AlgNum::Alg(..)) => Ordering::Less,
            (AlgNum::Alg(..), AlgNum::Rat(_)) => Ordering::Greater,
            (AlgNum::Alg(la, va), AlgNum::Alg(lb, vb)) => {
                let l = join_levels(la, lb);
                let x = embed_coeffs(va, la, &l);
                let y = embed_coeffs(vb, lb, &l);
                super::zassenhaus::cmp_qvec(&x, &y)
            }
        }
    }
}

impl fmt::Debug for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgNum::Rat(r) => write!(f, "{}", fmt_rat(r)),
            AlgNum::Alg(l, v) => {
                let g = l.generator_name();
                let mut s = String::new();
                for (i, c) in v.iter().enumerate().rev() {
                    if c.is_zero() {
                        continue;
                    }
                    let neg = c.is_negative();
                    let a = c.abs();
                    if s.is_empty() {
                        if neg {
                            s.push('-');
                        }
                    } else {
                        s.push_str(if neg { " - " } else { " + " });
                    }
                    let mono = match i {
                        0 => String::new(),
                        1 => g.clone(),
                        _ => format!("{}^{}", g, i),
                    };
                    if i == 0 {
                        s.push_str(&fmt_rat(&a));
                    } else if a.is_one() {
                        s.push_str(&mono);
                    } else {
                        s.push_str(&format!("{}*{}", fmt_rat(&a), mono));
                    }
                }
                write!(f, "({})", s)
            }
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $rat:expr, $alg:expr) => {
        impl $tr<&AlgNum> for &AlgNum {
            type Output = AlgNum;
            fn $m(self, o: &AlgNum) -> AlgNum {
                self.binary(o, $rat, $alg)
            }
        }
        impl $tr<AlgNum> for AlgNum {
            type Output = AlgNum;
            fn $m(self, o: AlgNum) -> AlgNum {
                (&self).$m(&o)
            }
        }
        impl $tr<&AlgNum> for AlgNum {
            type Output = AlgNum;
            fn $m(self, o: &AlgNum) -> AlgNum {
                (&self).$m(o)
            }
        }
        impl $tr<AlgNum> for &AlgNum {
            type Output = AlgNum;
            fn $m(self, o: AlgNum) -> AlgNum {
                self.$m(&o)
            }
        }
    };
}

binop!(Add, add, |a, b| a + b, |_, x, y| qpoly::add(x, y));
binop!(Sub, sub, |a, b| a - b, |_, x, y| qpoly::sub(x, y));
binop!(Mul, mul, |a, b| a * b, |l: &Arc<Level>, x, y| l
    .reduce(&qpoly::mul(x, y)));

impl Div<&AlgNum> for &AlgNum {
    type Output = AlgNum;
    fn div(self, o: &AlgNum) -> AlgNum {
        match (self, o) {
            (AlgNum::Rat(a), AlgNum::Rat(b)) => {
                assert!(!b.is_zero(), "division by zero");
                AlgNum::Rat(a / b)
            }
            _ => self * &o.inv(),
        }
    }
}
impl Div<AlgNum> for AlgNum {
    type Output = AlgNum;
    fn div(self, o: AlgNum) -> AlgNum {
        &self / &o
    }
}
impl Div<&AlgNum> for AlgNum {
    type Output = AlgNum;
    fn div(self, o: &AlgNum) -> AlgNum {
        &self / o
    }
}
impl Div<AlgNum> for &AlgNum {
    type Output = AlgNum;
    fn div(self, o: AlgNum) -> AlgNum {
        self / &o
    }
}

impl Neg for &AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        match self {
            AlgNum::Rat(r) => AlgNum::Rat(-r),
            AlgNum::Alg(l, v) => AlgNum::Alg(l.clone(), v.iter().map(|c| -c).collect()),
        }
    }
}
impl Neg for AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        -&self
    }
}

impl From<i64> for AlgNum {
    fn from(n: i64) -> Self {
        AlgNum::from_int(n)
    }
}

impl From<BigRational> for AlgNum {
    fn from(r: BigRational) -> Self {
        AlgNum::Rat(r)
    }
}

/// Errors raised while growing the constant tower.
#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum TowerError {
    #[error("constant tower depth limit {0} reached")]
    DepthExceeded(usize),
    #[error("polynomial has no roots to adjoin (constant polynomial)")]
    Constant,
}

#[derive(Debug)]
struct TowerState {
    top: Option<Arc<Level>>,
    max_depth: usize,
}

/// Shared handle on the constant field of a run; cloning shares the tower.
#[derive(Clone, Debug)]
pub struct Constants {
    state: Arc<RwLock<TowerState>>,
}

pub const DEFAULT_MAX_TOWER_DEPTH: usize = 8;

impl Default for Constants {
    fn default() -> Self {
        Self::new()
    }
}

impl Constants {
    /// Reads the depth cap from `DIFFGAL_MAX_TOWER_DEPTH` when set.
    pub fn new() -> Self {
        let max_depth = std::env::var("DIFFGAL_MAX_TOWER_DEPTH")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_TOWER_DEPTH);
        Self::with_max_depth(max_depth)
    }

    pub fn with_max_depth(max_depth: usize) -> Self {
        Constants {
            state: Arc::new(RwLock::new(TowerState { top: None, max_depth })),
        }
    }

    pub fn top(&self) -> Option<Arc<Level>> {
        self.state.read().unwrap().top.clone()
    }

    pub fn depth(&self) -> usize {
        self.top().map_or(0, |l| l.depth)
    }

    pub fn max_depth(&self) -> usize {
        self.state.read().unwrap().max_depth
    }

    /// Makes `level` the top of the tower when it extends the current top.
    pub(crate) fn set_top(&self, level: Arc<Level>) {
        let mut st = self.state.write().unwrap();
        if let Some(cur) = &st.top {
            if is_ancestor(&level, cur) {
                return;
            }
            assert!(is_ancestor(cur, &level), "new level does not extend the tower");
        }
        st.top = Some(level);
    }

    pub(crate) fn can_extend(&self) -> Result<(), TowerError> {
        let st = self.state.read().unwrap();
        let d = st.top.as_ref().map_or(0, |l| l.depth);
        if d >= st.max_depth {
            Err(TowerError::DepthExceeded(st.max_depth))
        } else {
            Ok(())
        }
    }

    /// Lifts a value to the current top level.
    pub fn lift(&self, a: &AlgNum) -> AlgNum {
        match (a, self.top()) {
            (AlgNum::Alg(..), Some(top)) => a.lift(&top),
            _ => a.clone(),
        }
    }

    pub fn describe(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut cur = self.top();
        while let Some(l) = cur {
            out.push((l.generator_name(), super::nffactor::qvec_to_string(&l.minpoly, "x")));
            cur = l.parent.clone();
        }
        out.reverse();
        out
    }
}
