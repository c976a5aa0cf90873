//! Factorization over Q: squarefree split, Cantor–Zassenhaus modulo a large
//! prime, then exhaustive recombination of modular factors.

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::qpoly::{self, QVec};

type ZVec = Vec<BigInt>;

fn md(a: &BigInt, p: &BigInt) -> BigInt {
    a.mod_floor(p)
}

fn ztrim(mut a: ZVec) -> ZVec {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn fp_sub(a: &[BigInt], b: &[BigInt], p: &BigInt) -> ZVec {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim(
        (0..n)
            .map(|i| md(&(a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)), p))
            .collect(),
    )
}

fn fp_mul(a: &[BigInt], b: &[BigInt], p: &BigInt) -> ZVec {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(out.iter().map(|c| md(c, p)).collect())
}

fn fp_inv(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    md(&e.x, p)
}

fn fp_divrem(a: &[BigInt], b: &[BigInt], p: &BigInt) -> (ZVec, ZVec) {
    let b = ztrim(b.to_vec());
    let db = b.len() - 1;
    let inv = fp_inv(&b[db], p);
    let mut r = ztrim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut quo = vec![BigInt::zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = md(&(&r[dr] * &inv), p);
        let s = dr - db;
        for (j, y) in b.iter().enumerate() {
            r[s + j] = md(&(&r[s + j] - &c * y), p);
        }
        quo[s] = c;
        r = ztrim(r);
    }
    (ztrim(quo), r)
}

fn fp_monic(a: &[BigInt], p: &BigInt) -> ZVec {
    let a = ztrim(a.to_vec());
    match a.last() {
        None => a,
        Some(l) => {
            let inv = fp_inv(l, p);
            a.iter().map(|c| md(&(c * &inv), p)).collect()
        }
    }
}

fn fp_gcd(a: &[BigInt], b: &[BigInt], p: &BigInt) -> ZVec {
    let mut x = ztrim(a.to_vec());
    let mut y = ztrim(b.to_vec());
    while !y.is_empty() {
        let r = fp_divrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    fp_monic(&x, p)
}

fn fp_powmod(base: &[BigInt], e: &BigInt, f: &[BigInt], p: &BigInt) -> ZVec {
    let mut result: ZVec = vec![BigInt::one()];
    let mut b = fp_divrem(base, f, p).1;
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            result = fp_divrem(&fp_mul(&result, &b, p), f, p).1;
        }
        if i + 1 < bits {
            b = fp_divrem(&fp_mul(&b, &b, p), f, p).1;
        }
    }
    result
}

fn mod_pow(b: &BigInt, e: &BigInt, m: &BigInt) -> BigInt {
    b.modpow(e, m)
}

pub(crate) fn is_probable_prime(n: &BigInt, rng: &mut ChaCha8Rng) -> bool {
    let two = BigInt::from(2);
    if *n < two {
        return false;
    }
    for sp in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let sp = BigInt::from(sp);
        if *n == sp {
            return true;
        }
        if (n % &sp).is_zero() {
            return false;
        }
    }
    let nm1: BigInt = n - 1;
    let mut d = nm1.clone();
    let mut s = 0;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'outer: for _ in 0..24 {
        let a = rng.gen_bigint_range(&two, &nm1);
        let mut x = mod_pow(&a, &d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = mod_pow(&x, &two, n);
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn distinct_degree(f: &[BigInt], p: &BigInt) -> Vec<(ZVec, usize)> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let x: ZVec = vec![BigInt::zero(), BigInt::one()];
    let mut h = x.clone();
    let mut d = 0;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            let dd = rest.len() - 1;
            out.push((rest.clone(), dd));
            break;
        }
        h = fp_powmod(&h, p, &rest, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            rest = fp_divrem(&rest, &g, p).0;
            h = fp_divrem(&h, &rest, p).1;
            out.push((g, d));
        }
    }
    out
}

fn equal_degree(f: &[BigInt], d: usize, p: &BigInt, rng: &mut ChaCha8Rng) -> Vec<ZVec> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.to_vec()];
    }
    let e: BigInt = (num_traits::pow(p.clone(), d) - 1) / 2;
    loop {
        let a: ZVec = ztrim((0..n).map(|_| rng.gen_bigint_range(&BigInt::zero(), p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = fp_powmod(&a, &e, f, p);
        let g = fp_gcd(&fp_sub(&b, &[BigInt::one()], p), f, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = fp_divrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&fp_monic(&h, p), d, p, rng));
            return out;
        }
    }
}

fn symmetric(a: &[BigInt], p: &BigInt) -> ZVec {
    let half: BigInt = p >> 1;
    ztrim(
        a.iter()
            .map(|c| {
                let c = md(c, p);
                if c > half {
                    c - p
                } else {
                    c
                }
            })
            .collect(),
    )
}

fn int_primitive(a: &[BigInt]) -> ZVec {
    let mut g = BigInt::zero();
    for c in a {
        g = g.gcd(c);
    }
    if a.last().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    a.iter().map(|c| c / &g).collect()
}

/// Exact division over Z[x] if `b` divides `a`.
fn int_div_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZVec> {
    let mut r = ztrim(a.to_vec());
    let db = b.len() - 1;
    if r.len() <= db {
        return None;
    }
    let mut quo = vec![BigInt::zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let (c, rr) = r[dr].div_rem(&b[db]);
        if !rr.is_zero() {
            return None;
        }
        let s = dr - db;
        for (j, y) in b.iter().enumerate() {
            r[s + j] -= &c * y;
        }
        quo[s] = c;
        r = ztrim(r);
    }
    if r.is_empty() {
        Some(ztrim(quo))
    } else {
        None
    }
}

fn norm_bits(f: &[BigInt]) -> u64 {
    f.iter().map(|c| c.bits()).max().unwrap_or(0)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Irreducible factors of a squarefree primitive integer polynomial.
fn factor_squarefree_int(f: &[BigInt], rng: &mut ChaCha8Rng) -> Vec<ZVec> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f[n].clone();
    // factor coefficients are bounded by 2^n·|f|·sqrt(n+1); the extra lc factor covers recombination
    let bits = n as u64 + 2 + norm_bits(f) + 2 * lc.bits() + (64 - (n as u64 + 1).leading_zeros() as u64) + 8;
    let fq = qpoly::from_ints(f);
    let (p, modf) = loop {
        let mut cand = rng.gen_bigint(bits).abs() | (BigInt::one() << bits);
        if cand.is_even() {
            cand += 1;
        }
        while !is_probable_prime(&cand, rng) {
            cand += 2;
        }
        if (&lc % &cand).is_zero() {
            continue;
        }
        let fm: ZVec = f.iter().map(|c| md(c, &cand)).collect();
        let dfm: ZVec = ztrim(
            fq.iter()
                .enumerate()
                .skip(1)
                .map(|(i, _)| md(&(&f[i] * BigInt::from(i)), &cand))
                .collect(),
        );
        if fp_gcd(&fm, &dfm, &cand).len() == 1 {
            let m = fp_monic(&fm, &cand);
            break (cand, m);
        }
    };
    let mut modular = Vec::new();
    for (g, d) in distinct_degree(&modf, &p) {
        modular.extend(equal_degree(&g, d, &p, rng));
    }
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }
    let mut factors = Vec::new();
    let mut t = f.to_vec();
    let mut s = 1;
    'grow: while 2 * s <= modular.len() {
        for subset in combinations(modular.len(), s) {
            let lct = t.last().unwrap().clone();
            let mut g: ZVec = vec![md(&lct, &p)];
            for &i in &subset {
                g = fp_mul(&g, &modular[i], &p);
            }
            let g = int_primitive(&symmetric(&g, &p));
            if let Some(qt) = int_div_exact(&t, &g) {
                factors.push(g);
                t = qt;
                let mut k = 0;
                modular.retain(|_| {
                    let keep = !subset.contains(&k);
                    k += 1;
                    keep
                });
                continue 'grow;
            }
        }
        s += 1;
    }
    if t.len() > 1 {
        factors.push(int_primitive(&t));
    }
    factors
}

/// Monic irreducible factors over Q with multiplicities; constants are dropped.
pub fn factor_q(f: &[BigRational]) -> Vec<(QVec, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let mut out = Vec::new();
    for (part, mult) in qpoly::squarefree(f) {
        let ints = qpoly::primitive_int(&part);
        for g in factor_squarefree_int(&ints, &mut rng) {
            out.push((qpoly::monic(&qpoly::from_ints(&g)), mult));
        }
    }
    out.sort_by(|a, b| cmp_qvec(&a.0, &b.0));
    out
}

/// Deterministic total order: by degree, then coefficients from the top.
pub fn cmp_qvec(a: &[BigRational], b: &[BigRational]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for (x, y) in a.iter().rev().zip(b.iter().rev()) {
            let c = x.cmp(y);
            if c != std::cmp::Ordering::Equal {
                return c;
            }
        }
        std::cmp::Ordering::Equal
    })
}
