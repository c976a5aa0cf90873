//! Helpers shared by unit tests.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::{AlgNum, Poly, RatFunc};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rf(n: &[i64], d: &[i64]) -> RatFunc {
    RatFunc::new(Poly::from_ints(n), Poly::from_ints(d))
}

pub fn int(n: i64) -> AlgNum {
    AlgNum::from_int(n)
}

pub fn rand_poly(r: &mut ChaCha8Rng, deg: usize, bound: i64) -> Poly {
    loop {
        let c: Vec<i64> = (0..=deg).map(|_| r.gen_range(-bound..=bound)).collect();
        let p = Poly::from_ints(&c);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Random monic polynomial of exact degree `deg`.
pub fn rand_monic(r: &mut ChaCha8Rng, deg: usize, bound: i64) -> Poly {
    let mut c: Vec<i64> = (0..deg).map(|_| r.gen_range(-bound..=bound)).collect();
    c.push(1);
    Poly::from_ints(&c)
}

pub fn rand_ratfunc(r: &mut ChaCha8Rng, dn: usize, dd: usize, bound: i64) -> RatFunc {
    let n = rand_poly(r, dn, bound);
    let d = rand_monic(r, dd, bound);
    RatFunc::new(n, d)
}

/// t·φ³ − (t + qt + q⁴z²)·φ² + q(t − q²z)·φ + q³z over the q-dilation field.
pub fn eq0(ctx: &crate::field::Ctx, t: &AlgNum) -> crate::ore::OreOp {
    let q = ctx.spec.param.clone();
    let a3 = Poly::constant(t.clone());
    let a2 = Poly::new(vec![-&(t + &(&q * t)), AlgNum::zero(), -&q.pow(4)]);
    let a1 = Poly::new(vec![&q * t, -&q.pow(3)]);
    let a0 = Poly::new(vec![AlgNum::zero(), q.pow(3)]);
    crate::ore::OreOp::from_polys(&ctx.spec, &[a0, a1, a2, a3])
}
