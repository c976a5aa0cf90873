//! Factorization over tower levels (Trager's norm method) and root adjunction.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::algnum::{AlgNum, Constants, Level, TowerError};
use super::poly::Poly;
use super::qpoly::{self, q, QVec};
use super::zassenhaus::factor_q;

pub fn qvec_to_string(v: &[BigRational], var: &str) -> String {
    Poly::from_qvec(v).fmt_var(var)
}

/// Squarefree decomposition (Yun) over the coefficient field; factors are monic.
pub fn squarefree(p: &Poly) -> Vec<(Poly, usize)> {
    let a = p.monic();
    if a.degree() < 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut g = a.gcd(&a.derivative());
    let mut w = a.exact_div(&g).unwrap();
    let mut i = 1;
    while w.degree() > 0 {
        let y = w.gcd(&g);
        let z = w.exact_div(&y).unwrap();
        if z.degree() > 0 {
            out.push((z.monic(), i));
        }
        i += 1;
        w = y;
        g = g.exact_div(&w).unwrap();
    }
    out
}

/// Norm of g ∈ Q(θ)[x] down to Q[x].
pub fn norm_poly(g: &Poly, level: &Arc<Level>) -> QVec {
    let d = level.degree();
    let n = d * g.deg().unwrap_or(0);
    let coeffs: Vec<QVec> = g.coeffs().iter().map(|c| c.coeffs_in(level)).collect();
    let mut xs = Vec::with_capacity(n + 1);
    let mut ys = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let x0 = q(i as i64);
        // G(x0, y) = Σ_k g_k(y) x0^k
        let mut acc: QVec = Vec::new();
        let mut pw = BigRational::one();
        for ck in &coeffs {
            acc = qpoly::add(&acc, &qpoly::scale(ck, &pw));
            pw *= &x0;
        }
        ys.push(qpoly::resultant(&level.minpoly, &acc));
        xs.push(x0);
    }
    qpoly::interpolate(&xs, &ys)
}

fn shift_sequence() -> impl Iterator<Item = i64> {
    (0..).map(|k: i64| if k % 2 == 0 { -(k / 2) } else { k / 2 + 1 })
}

fn trager(f: &Poly, level: &Arc<Level>) -> Vec<Poly> {
    if f.degree() <= 1 {
        return vec![f.monic()];
    }
    let theta = AlgNum::generator(level);
    for s in shift_sequence().take(64) {
        let sth = &AlgNum::from_int(s) * &theta;
        let g = f.taylor_shift(&-&sth);
        let n = norm_poly(&g, level);
        if !qpoly::is_squarefree(&n) {
            continue;
        }
        let parts = factor_q(&n);
        if parts.len() == 1 {
            return vec![f.monic()];
        }
        let mut out = Vec::new();
        for (nj, _) in parts {
            let h = g.gcd(&Poly::from_qvec(&nj));
            if h.degree() > 0 {
                out.push(h.taylor_shift(&sth).monic());
            }
        }
        return out;
    }
    unreachable!("no squarefree norm found for a squarefree polynomial")
}

/// Monic irreducible factors with multiplicity over Q(level) (or Q when `level` is None).
pub fn factor_over(p: &Poly, level: Option<&Arc<Level>>) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if p.degree() < 1 {
        return out;
    }
    if p.is_rational() {
        let qv = p.to_qvec().unwrap();
        for (g, m) in factor_q(&qv) {
            let gp = Poly::from_qvec(&g);
            match level {
                Some(l) if g.len() > 2 => {
                    for h in trager(&gp, l) {
                        out.push((h, m));
                    }
                }
                _ => out.push((gp, m)),
            }
        }
    } else {
        let l = level.cloned().or_else(|| p.max_level()).expect("coefficient level");
        let pl = p.lift(&l);
        for (part, m) in squarefree(&pl) {
            for h in trager(&part, &l) {
                out.push((h, m));
            }
        }
    }
    out.sort();
    out
}

/// Distinct roots lying in Q(level).
pub fn roots_over(p: &Poly, level: Option<&Arc<Level>>) -> Vec<AlgNum> {
    let mut out: Vec<AlgNum> = factor_over(p, level)
        .into_iter()
        .filter(|(g, _)| g.degree() == 1)
        .map(|(g, _)| -&g.coeff(0))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Cyclotomic polynomial Φ_n over Q.
pub fn cyclotomic(n: u64) -> QVec {
    let mut f: QVec = vec![q(-1)];
    f.resize(n as usize, BigRational::zero());
    f.push(q(1));
    for d in 1..n {
        if n % d == 0 {
            f = qpoly::divrem(&f, &cyclotomic(d)).0;
        }
    }
    f
}

impl Constants {
    /// Factorization over the current constant field.
    pub fn factor(&self, p: &Poly) -> Vec<(Poly, usize)> {
        let top = self.top();
        factor_over(p, top.as_ref())
    }

    /// Roots of p inside the current constant field.
    pub fn roots(&self, p: &Poly) -> Vec<AlgNum> {
        let top = self.top();
        roots_over(p, top.as_ref())
    }

    /// A root of p, extending the tower by one level when p has no root yet.
    pub fn adjoin_root(&self, p: &Poly) -> Result<AlgNum, TowerError> {
        if p.degree() < 1 {
            return Err(TowerError::Constant);
        }
        let facs = self.factor(p);
        if let Some((g, _)) = facs.iter().find(|(g, _)| g.degree() == 1) {
            return Ok(-&g.coeff(0));
        }
        self.can_extend()?;
        let g = facs.iter().map(|(g, _)| g).min_by_key(|g| g.degree()).unwrap().clone();
        let top = self.top();
        let (level, root) = match &top {
            None => {
                let lvl = Level::new(g.to_qvec().unwrap(), None, Vec::new());
                let r = AlgNum::generator(&lvl);
                (lvl, r)
            }
            Some(top) => extend_level(top, &g),
        };
        self.set_top(level);
        Ok(root)
    }

    /// All roots of p, adjoining as many as needed (subject to the depth cap).
    pub fn split(&self, p: &Poly) -> Result<Vec<AlgNum>, TowerError> {
        loop {
            let facs = self.factor(p);
            if let Some((g, _)) = facs.iter().find(|(g, _)| g.degree() > 1) {
                self.adjoin_root(g)?;
            } else {
                let mut roots: Vec<AlgNum> = facs.iter().map(|(g, _)| -&g.coeff(0)).collect();
                roots.sort();
                roots.dedup();
                return Ok(roots);
            }
        }
    }

    /// A primitive n-th root of unity.
    pub fn root_of_unity(&self, n: u64) -> Result<AlgNum, TowerError> {
        if n == 1 {
            return Ok(AlgNum::one());
        }
        if n == 2 {
            return Ok(AlgNum::from_int(-1));
        }
        self.adjoin_root(&Poly::from_qvec(&cyclotomic(n)))
    }

    /// Some n-th root of c.
    pub fn nth_root(&self, c: &AlgNum, n: u32) -> Result<AlgNum, TowerError> {
        let mut coeffs = vec![AlgNum::zero(); n as usize + 1];
        coeffs[0] = -c;
        coeffs[n as usize] = AlgNum::one();
        self.adjoin_root(&Poly::new(coeffs))
    }
}

/// Builds Q(θ, β) as a simple extension for g irreducible over Q(θ).
fn extend_level(top: &Arc<Level>, g: &Poly) -> (Arc<Level>, AlgNum) {
    let theta = AlgNum::generator(top);
    for s in shift_sequence().take(64) {
        let sth = &AlgNum::from_int(s) * &theta;
        let gs = g.lift(top).taylor_shift(&-&sth);
        let n = norm_poly(&gs, top);
        if !qpoly::is_squarefree(&n) {
            continue;
        }
        let tmp = Level::new(n.clone(), None, Vec::new());
        let gamma = AlgNum::generator(&tmp);
        // θ is the common root of m(x) and g(γ - s·x)
        let lin = Poly::new(vec![gamma.clone(), AlgNum::from_int(-s)]);
        let mut gx = Poly::zero();
        for ck in g.coeffs().iter().rev() {
            let ckx = Poly::from_qvec(&ck.coeffs_in(top));
            gx = &(&gx * &lin) + &ckx;
        }
        let h = Poly::from_qvec(&top.minpoly).gcd(&gx);
        assert_eq!(h.degree(), 1, "primitive element construction failed");
        let theta_in = -&h.coeff(0);
        let parent_gen = theta_in.coeffs_in(&tmp);
        let lvl = Level::new(n, Some(top.clone()), parent_gen.clone());
        let mut root = vec![BigRational::zero(), BigRational::one()];
        root = qpoly::sub(&root, &qpoly::scale(&parent_gen, &q(s)));
        let r = AlgNum::from_level(&lvl, &root);
        return (lvl, r);
    }
    unreachable!("no primitive element found")
}

/// True when `p` (over the coefficient field) has no factor of positive degree < deg p.
pub fn is_irreducible(p: &Poly, level: Option<&Arc<Level>>) -> bool {
    let f = factor_over(p, level);
    f.len() == 1 && f[0].1 == 1
}

/// Sign test helper for rational values.
pub fn rational_sign(a: &AlgNum) -> Option<i32> {
    a.as_rational().map(|r| {
        if r.is_zero() {
            0
        } else if r.is_positive() {
            1
        } else {
            -1
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoin_examples() {
        let k = Constants::with_max_depth(4);
        let t = k.adjoin_root(&Poly::from_ints(&[-5, 0, 1])).unwrap();
        assert_eq!(&t * &t, AlgNum::from_int(5));
        assert_eq!(k.depth(), 1);
        let three = k.adjoin_root(&Poly::from_ints(&[-3, 1])).unwrap();
        assert_eq!(three, AlgNum::from_int(3));
        assert_eq!(k.depth(), 1);
        let g = k.adjoin_root(&Poly::from_ints(&[-1, -1, 1])).unwrap();
        // golden ratio lies in Q(√5): no new level
        assert_eq!(k.depth(), 1);
        assert_eq!(&(&g * &g) - &g, AlgNum::one());
    }

    #[test]
    fn tower_of_two_levels_keeps_old_values() {
        let k = Constants::with_max_depth(4);
        let s2 = k.adjoin_root(&Poly::from_ints(&[-2, 0, 1])).unwrap();
        let before = &s2 + &AlgNum::one();
        let s3 = k.adjoin_root(&Poly::from_ints(&[-3, 0, 1])).unwrap();
        assert_eq!(k.depth(), 2);
        assert_eq!(&s3 * &s3, AlgNum::from_int(3));
        assert_eq!(&s2 * &s2, AlgNum::from_int(2));
        let lifted = before.lift(&k.top().unwrap());
        assert_eq!(lifted, before);
        let prod = &s2 * &s3;
        assert_eq!(&prod * &prod, AlgNum::from_int(6));
        // x^2 - 6 now splits
        assert_eq!(k.roots(&Poly::from_ints(&[-6, 0, 1])).len(), 2);
    }

    #[test]
    fn trager_splits_over_extension() {
        let k = Constants::with_max_depth(4);
        k.adjoin_root(&Poly::from_ints(&[-2, 0, 1])).unwrap();
        // x^4 - 10x^2 + 1 = (x^2 - 2√2 x - 1)(x^2 + 2√2 x - 1) over Q(√2)
        let f = k.factor(&Poly::from_ints(&[1, 0, -10, 0, 1]));
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|(g, _)| g.degree() == 2));
    }

    #[test]
    fn depth_cap_enforced() {
        let k = Constants::with_max_depth(1);
        k.adjoin_root(&Poly::from_ints(&[-2, 0, 1])).unwrap();
        let e = k.adjoin_root(&Poly::from_ints(&[-3, 0, 1]));
        assert_eq!(e, Err(TowerError::DepthExceeded(1)));
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(Poly::from_qvec(&cyclotomic(6)), Poly::from_ints(&[1, -1, 1]));
        assert_eq!(Poly::from_qvec(&cyclotomic(8)), Poly::from_ints(&[1, 0, 0, 0, 1]));
        let k = Constants::with_max_depth(3);
        let z = k.root_of_unity(12).unwrap();
        assert_eq!(z.root_of_unity_order(), Some(12));
    }
}
