//! Difference operators in the Ore algebra k⟨φ, φ⁻¹⟩ and matrices over k.

mod matrix;
mod op;

pub use matrix::{check_gauge, gauge, iterate, MatK};
pub use op::OreOp;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum OreError {
    #[error("operands live over different difference fields")]
    SpecMismatch,
    #[error("division by the zero operator")]
    DivisionByZero,
    #[error("matrix shapes do not match")]
    Shape,
    #[error("matrix is singular")]
    Singular,
    #[error("operator has order zero")]
    OrderZero,
    #[error("trailing coefficient a_0 vanishes")]
    SingularTrailing,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{AlgNum, DiffFieldSpec, Poly, RatFunc};

    fn s1() -> DiffFieldSpec {
        DiffFieldSpec::shift(AlgNum::one()).unwrap()
    }
    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_ints(n), Poly::from_ints(d))
    }

    #[test]
    fn twist_rule() {
        let s = s1();
        let phi = OreOp::phi_pow(&s, 1);
        let z = OreOp::scalar(&s, RatFunc::z());
        let lhs = phi.mul(&z).unwrap();
        let rhs = OreOp::from_map(&s, [(1, rf(&[1, 1], &[1]))]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn dual_laws() {
        let s = DiffFieldSpec::qdiff(AlgNum::from_int(2)).unwrap();
        let m1 = OreOp::new(&s, vec![rf(&[1, 1], &[1]), rf(&[0, 3], &[2, 1]), RatFunc::one()]);
        let m2 = OreOp::new(&s, vec![rf(&[-1, 0, 1], &[1]), rf(&[5], &[0, 1])]);
        assert_eq!(m1.dual().dual(), m1);
        assert_eq!(m1.mul(&m2).unwrap().dual(), m2.dual().mul(&m1.dual()).unwrap());
    }

    #[test]
    fn right_division_recovers_factor() {
        let s = s1();
        let alpha = rf(&[1, 2], &[3, 1]);
        let m = OreOp::new(&s, vec![rf(&[2], &[1]), rf(&[0, 1], &[1]), RatFunc::one()]);
        let f = OreOp::first_order(&s, &alpha);
        let l = m.mul(&f).unwrap();
        let (q, r) = l.right_divide(&f).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, m);
    }

    #[test]
    fn companion_and_iterate() {
        let s = s1();
        let l = OreOp::new(&s, vec![rf(&[-1], &[1]), rf(&[-1], &[1]), RatFunc::one()]);
        let a = l.companion().unwrap();
        assert_eq!(a.to_expr(), "[[0, 1], [1, 1]]");
        let a2 = iterate(&a, 2).unwrap();
        let a3 = iterate(&a, 3).unwrap();
        let a5 = iterate(&a, 5).unwrap();
        assert_eq!(a5, a3.phi(2).mul(&a2).unwrap());
        let t = MatK::from_rows(
            &s,
            vec![
                vec![RatFunc::z(), RatFunc::one()],
                vec![RatFunc::zero(), RatFunc::one()],
            ],
        );
        let b = gauge(&a, &t).unwrap();
        assert!(check_gauge(&a, &t, &b));
        let sq = DiffFieldSpec::qdiff(AlgNum::from_int(3)).unwrap();
        assert_eq!(gauge(&a, &t.with_spec(&sq)), Err(OreError::SpecMismatch));
    }
}
