//! Multiplicative relations among constants modulo the subgroup generated by q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::{q_log, AlgNum};

use super::intmat::{self, IntRow};

#[derive(Clone, Debug)]
pub struct ConstRelations {
    /// HNF basis of {t : Π w_j^{t_j} ∈ ⟨q⟩} (or = 1 without q).
    pub lattice: Vec<IntRow>,
    /// Vectors t with Π w^t = ζ·q^a for a root of unity ζ ≠ 1.
    pub torsion: Vec<(IntRow, AlgNum)>,
    /// False when the relations were found by bounded search.
    pub exact: bool,
}

/// Refines a list of integers > 1 into pairwise coprime factors.
fn coprime_base(nums: &[BigInt]) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = Vec::new();
    for n in nums {
        if n <= &BigInt::one() {
            continue;
        }
        let mut work = vec![n.clone()];
        while let Some(x) = work.pop() {
            if x.is_one() {
                continue;
            }
            match base.iter().position(|b| !x.gcd(b).is_one()) {
                None => base.push(x),
                Some(i) => {
                    let b = base.remove(i);
                    let g = x.gcd(&b);
                    if g == x && g == b {
                        base.push(g);
                        continue;
                    }
                    work.push(g.clone());
                    work.push(&x / &g);
                    work.push(&b / &g);
                }
            }
        }
    }
    base.sort();
    base.dedup();
    base
}

fn valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

fn rational_relations(w: &[num_rational::BigRational], q: Option<&num_rational::BigRational>) -> ConstRelations {
    let r = w.len();
    let mut cols: Vec<&num_rational::BigRational> = w.iter().collect();
    if let Some(q) = q {
        cols.push(q);
    }
    let nums: Vec<BigInt> = cols.iter().flat_map(|x| [x.numer().abs(), x.denom().abs()]).collect();
    let base = coprime_base(&nums);
    let e: Vec<IntRow> = base
        .iter()
        .map(|p| {
            cols.iter()
                .map(|x| valuation(x.numer(), p) - valuation(x.denom(), p))
                .collect()
        })
        .collect();
    let sign: IntRow = cols.iter().map(|x| i64::from(x.is_negative())).collect();
    let k = intmat::kernel(&e, cols.len());
    let parity = |v: &IntRow| intmat::dot(v, &sign).rem_euclid(2);
    let mut even: Vec<IntRow> = Vec::new();
    let mut torsion = Vec::new();
    let odd = k.iter().find(|v| parity(v) == 1).cloned();
    for v in &k {
        match &odd {
            Some(o) if parity(v) == 1 => {
                torsion.push((v[..r].to_vec(), AlgNum::from_int(-1)));
                if v == o {
                    even.push(v.iter().map(|x| 2 * x).collect());
                } else {
                    even.push(v.iter().zip(o).map(|(a, b)| a - b).collect());
                }
            }
            _ => even.push(v.clone()),
        }
    }
    let proj: Vec<IntRow> = even.iter().map(|v| v[..r].to_vec()).collect();
    ConstRelations {
        lattice: if r == 0 { Vec::new() } else { intmat::hnf(&proj) },
        torsion,
        exact: true,
    }
}

fn bounded_relations(w: &[AlgNum], q: Option<&AlgNum>) -> ConstRelations {
    let r = w.len();
    let bound: i64 = if r <= 2 { 6 } else { 3 };
    let mut found: Vec<IntRow> = Vec::new();
    let mut torsion = Vec::new();
    let mut t = vec![-bound; r];
    loop {
        if t.iter().any(|&x| x != 0) {
            let mut x = AlgNum::one();
            for (wj, tj) in w.iter().zip(&t) {
                x = &x * &wj.pow(*tj);
            }
            let zeta = match q {
                None => Some(x.clone()),
                Some(q) => (-24..=24).map(|a| &x / &q.pow(a)).find(|z| z.is_root_of_unity()),
            };
            if let Some(z) = zeta.filter(|z| z.is_root_of_unity()) {
                match z.root_of_unity_order() {
                    Some(1) => found.push(t.clone()),
                    Some(o) => {
                        torsion.push((t.clone(), z.clone()));
                        found.push(t.iter().map(|x| x * o as i64).collect());
                    }
                    None => {}
                }
            }
        }
        // odometer over [-bound, bound]^r
        let mut i = 0;
        loop {
            if i == r {
                return ConstRelations {
                    lattice: if r == 0 { Vec::new() } else { intmat::hnf(&found) },
                    torsion,
                    exact: false,
                };
            }
            t[i] += 1;
            if t[i] > bound {
                t[i] = -bound;
                i += 1;
            } else {
                break;
            }
        }
    }
}

/// Smallest e ≥ 1 with q^e rational, up to `limit`.
fn rational_power(q: &AlgNum, limit: u32) -> Option<(i64, AlgNum)> {
    (1..=limit as i64).map(|e| (e, q.pow(e))).find(|(_, x)| x.is_rational())
}

/// Lattice of t with Π w_j^{t_j} in ⟨q⟩ (case Q) or equal to 1 (q = None).
pub fn constant_relations(w: &[AlgNum], q: Option<&AlgNum>) -> ConstRelations {
    if w.iter().all(|x| x.is_rational()) {
        let wr: Vec<num_rational::BigRational> = w.iter().map(|x| x.as_rational().unwrap().clone()).collect();
        match q {
            None => return rational_relations(&wr, None),
            Some(q) => {
                if let Some((_, qe)) = rational_power(q, 64) {
                    return rational_relations(&wr, Some(qe.as_rational().unwrap()));
                }
            }
        }
    }
    bounded_relations(w, q)
}

/// a with x = q^a, for x known to lie in ⟨q⟩.
pub fn q_exponent(x: &AlgNum, q: &AlgNum) -> Option<i64> {
    q_log(x, q)
}
