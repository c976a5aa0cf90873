use super::*;
use crate::field::{AlgNum, Ctx, Poly, RatFunc};
use crate::lattice::diagonal_group;
use crate::ore::{gauge, iterate, MatK, OreOp};
use crate::ratsolve::multiplicative_solve;
use crate::testutil::{eq0, int, rand_ratfunc, rf, rng};
use num_integer::Integer;
use num_rational::Ratio;
use rand::Rng;

fn opts() -> ClassifyOptions {
    ClassifyOptions::default()
}

fn op(ctx: &Ctx, c: &[RatFunc]) -> OreOp {
    OreOp::new(&ctx.spec, c.to_vec())
}

fn c(n: i64) -> RatFunc {
    RatFunc::from_int(n)
}

fn product(ops: &[OreOp]) -> OreOp {
    let mut acc = ops[0].clone();
    for o in &ops[1..] {
        acc = acc.mul(o).unwrap();
    }
    acc
}

fn phi_minus(ctx: &Ctx, a: RatFunc) -> OreOp {
    OreOp::first_order(&ctx.spec, &a)
}

#[test]
fn order1_sign_is_cyclic() {
    let ctx = Ctx::shift(1);
    let o = order1_group(&c(-1), &ctx);
    assert_eq!(o.group, GroupDesc::CyclicOrder1 { ell: 2 });
    assert_eq!(o.zeta, Some(int(-1)));
    assert!(o.gauge.is_one());
}

#[test]
fn order1_valuation_one_is_continuous() {
    // −q³z/t at q = 2, t = 1
    let ctx = Ctx::qdiff(2);
    let o = order1_group(&rf(&[0, -8], &[1]), &ctx);
    assert_eq!(o.group, GroupDesc::ContinuousOrder1);
}

#[test]
fn order1_q_is_trivial() {
    let ctx = Ctx::qdiff(2);
    let c = classify_system(&MatK::diag(&ctx.spec, &[c(2)]), &ctx, &opts()).unwrap();
    assert_eq!(c.group, GroupDesc::CyclicOrder1 { ell: 1 });
    let Witness::Order1 { zeta, f } = &c.witnesses[0] else {
        panic!()
    };
    assert_eq!(zeta.as_ref(), Some(&AlgNum::one()));
    assert_eq!(*f, RatFunc::z());
}

#[test]
fn order1_planted_roots_of_unity() {
    let ctx = Ctx::shift(1);
    let mut r = rng(3);
    for ell in 1..=4u64 {
        let zeta = ctx.consts.root_of_unity(ell).unwrap();
        let f = rand_ratfunc(&mut r, 2, 1, 3);
        let alpha = (&ctx.phi(&f, 1) / &f).scale(&zeta);
        let o = order1_group(&alpha, &ctx);
        assert_eq!(o.group, GroupDesc::CyclicOrder1 { ell });
        assert_eq!(&(&alpha * &ctx.phi(&o.gauge, 1)) / &o.gauge, o.reduced);
    }
}

#[test]
fn order1_ramification_flag() {
    // α = −2 with q = 4: (−2)² = 4, group Z/2, reduced form needs z^{1/2}
    let ctx = Ctx::qdiff(4);
    let o = order1_group(&c(-2), &ctx);
    assert_eq!(o.group, GroupDesc::CyclicOrder1 { ell: 2 });
    assert!(!o.exact);
}

#[test]
fn order2_reducible_nonsplit() {
    let ctx = Ctx::shift(1);
    let l = product(&[phi_minus(&ctx, RatFunc::z()), phi_minus(&ctx, c(1))]);
    let cl = classify_operator(&l, &ctx, &opts()).unwrap();
    assert!(
        matches!(cl.group, GroupDesc::TriangularExt { n: 2, .. }),
        "{:?}",
        cl.group
    );
    assert!(cl.reduced.get(1, 0).is_zero());
    assert!(cl.certificate_holds());
    assert!(cl.membership_holds());
}

#[test]
fn order2_imprimitive_shift() {
    let ctx = Ctx::shift(1);
    let l = op(&ctx, &[-RatFunc::z(), c(0), c(1)]);
    let cl = classify_operator(&l, &ctx, &opts()).unwrap();
    // det of the companion is −z, not equivalent to a root of unity
    assert_eq!(cl.group, GroupDesc::ImprimitiveFull { n: 2 });
    let Witness::Imprimitive { d, .. } = &cl.witnesses[0] else {
        panic!()
    };
    // A₂ = Diag(z, z + 1), and E₂(1, d) iterates to Diag(d, φ(d))
    let ctx2 = ctx.iterate(2);
    let ratio = d / &RatFunc::z();
    let ratio_b = d / &ctx.phi(&RatFunc::z(), 1);
    assert!(
        multiplicative_solve(&ratio, &ctx2).unwrap().is_some()
            || multiplicative_solve(&ratio_b, &ctx2).unwrap().is_some(),
        "d = {d}"
    );
    assert!(cl.reduced.get(0, 0).is_zero() && cl.reduced.get(1, 1).is_zero());
}

#[test]
fn order2_golden_ratio() {
    let ctx = Ctx::shift(1);
    let l = op(&ctx, &[c(-1), c(-1), c(1)]);
    let cl = classify_operator(&l, &ctx, &opts()).unwrap();
    let GroupDesc::DiagonalKernel { lattice } = &cl.group else {
        panic!("{:?}", cl.group)
    };
    // θ·θ′ = −1, θ not a root of unity: relations generated by (2, 2)
    assert_eq!(lattice.relations, vec![vec![2, 2]]);
    assert_eq!(lattice.dimension, 1);
    let d = cl.reduced.diagonal();
    assert!(d.iter().all(|x| x.is_constant()));
    assert_eq!(&d[0] * &d[1], c(-1));
}

#[test]
fn order2_primitive_det_torsion() {
    // Hendriks-type irreducible example: φ² − z·φ + 1 has det 1
    let ctx = Ctx::shift(1);
    let l = op(&ctx, &[c(1), -RatFunc::z(), c(1)]);
    let cl = classify_operator(&l, &ctx, &opts()).unwrap();
    assert!(cl.certificate_holds());
    assert!(
        matches!(
            cl.group,
            GroupDesc::DetTorsion { n: 2, k: 1 } | GroupDesc::ImprimitiveTorsion { n: 2, .. }
        ),
        "{:?}",
        cl.group
    );
}

#[test]
fn eq0_is_full_gl3() {
    let ctx = Ctx::qdiff(2);
    let l = eq0(&ctx, &int(1));
    let cl = classify_operator(&l, &ctx, &opts()).unwrap();
    assert_eq!(cl.group, GroupDesc::FullGL { n: 3 });
    assert!(cl.trace.contains(&TraceStep::NewtonPrescreen {
        slopes: vec!["-1 (×1)".into(), "0 (×2)".into()],
        passes: false
    }));
    assert!(cl
        .trace
        .iter()
        .any(|s| matches!(s, TraceStep::So3 { found: false, .. })));
    assert!(cl
        .trace
        .contains(&TraceStep::ThetaObstruction { obstructed: Some(true) }));
    assert!(cl.trace.contains(&TraceStep::DetGroup {
        continuous: true,
        order: None
    }));
}

#[test]
fn unipotent_cube_is_trivial() {
    let ctx = Ctx::shift(1);
    let f = phi_minus(&ctx, c(1));
    let l = product(&[f.clone(), f.clone(), f]);
    let cl = classify_operator(&l, &ctx, &opts()).unwrap();
    let GroupDesc::DiagonalKernel { lattice } = &cl.group else {
        panic!("{:?}", cl.group)
    };
    assert_eq!(lattice.dimension, 0);
    assert!(cl.reduced.is_identity());
}

#[test]
fn q_phi3_minus_z_is_imprimitive() {
    let ctx = Ctx::qdiff(2);
    let l = op(&ctx, &[-RatFunc::z(), c(0), c(0), c(1)]);
    let cl = classify_operator(&l, &ctx, &opts()).unwrap();
    assert_eq!(cl.group, GroupDesc::ImprimitiveFull { n: 3 });
    let b = &cl.reduced;
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(b.get(i, j).is_zero(), j != (i + 1) % 3);
        }
    }
    // the φ³-system of the reduced form is diagonal
    let b3 = iterate(b, 3).unwrap();
    assert!(b3.is_diagonal());
}

#[test]
fn planted_unipotent_recovered() {
    let ctx = Ctx::shift(1);
    let s = &ctx.spec;
    let d = MatK::diag(s, &[RatFunc::z(), c(2), c(-1)]);
    let z = RatFunc::z();
    let u = MatK::from_rows(
        s,
        vec![
            vec![c(1), z.clone(), rf(&[1], &[1, 1])],
            vec![c(0), c(1), z.pow(2)],
            vec![c(0), c(0), c(1)],
        ],
    );
    // φ(U)·A·U⁻¹ = D
    let a = u.phi(1).inverse().unwrap().mul(&d).unwrap().mul(&u).unwrap();
    let cl = classify_system(&a, &ctx, &opts()).unwrap();
    let GroupDesc::DiagonalKernel { lattice } = &cl.group else {
        panic!("{:?}", cl.group)
    };
    let expect = diagonal_group(&d.diagonal(), &ctx).desc;
    assert_eq!(lattice.dimension, expect.dimension);
    assert_eq!(lattice.torsion, expect.torsion);
}

#[test]
fn dilatation_direction() {
    // D = I, Ã = (λ, μ)/z with (λ, μ) = (1, 2)
    let ctx = Ctx::shift(1);
    let s = &ctx.spec;
    let f = rf(&[1], &[0, 1]);
    let b = MatK::from_rows(
        s,
        vec![
            vec![c(1), f.clone(), f.scale(&int(2))],
            vec![c(0), c(1), c(0)],
            vec![c(0), c(0), c(1)],
        ],
    );
    let red = reducible3_reduce(&b, None, &ctx, &opts()).unwrap();
    let GroupDesc::TriangularExt { unipotent, .. } = &red.group else {
        panic!("{:?}", red.group)
    };
    let UnipotentShape::Dilatation { lambda, mu } = unipotent else {
        panic!("{unipotent:?}")
    };
    // reduced row is (λ·f, μ·f) in the basis chosen for the 2×2 block
    let (r1, r2) = (red.reduced.get(0, 1), red.reduced.get(0, 2));
    assert_eq!(r1.scale(mu), r2.scale(lambda));
    assert!(!r1.is_zero() || !r2.is_zero());
    assert_eq!(gauge(&b, &red.gauge).unwrap(), red.reduced);
    assert_eq!(red.group.dimension(), 1);
}

#[test]
fn no_side_equation_gives_full_unipotent() {
    let ctx = Ctx::shift(1);
    let s = &ctx.spec;
    let b = MatK::from_rows(
        s,
        vec![
            vec![c(1), rf(&[1], &[0, 1]), rf(&[1], &[0, 0, 1])],
            vec![c(0), c(1), c(0)],
            vec![c(0), c(0), c(1)],
        ],
    );
    let red = reducible3_reduce(&b, None, &ctx, &opts()).unwrap();
    let GroupDesc::TriangularExt { unipotent, .. } = &red.group else {
        panic!()
    };
    assert_eq!(*unipotent, UnipotentShape::Full);
    assert_eq!(red.group.dimension(), 2);
}

#[test]
fn imprimitive_test_on_cyclic_matrix() {
    let ctx = Ctx::shift(1);
    let a = MatK::cyclic(&ctx.spec, &[c(1), c(1), RatFunc::z()]);
    let w = imprimitive_test(&a, 3, &ctx, &opts()).unwrap().expect("imprimitive");
    let ctx3 = ctx.iterate(3);
    let hit = (0..3).any(|j| {
        let r = &w.d / &ctx.phi(&RatFunc::z(), j);
        multiplicative_solve(&r, &ctx3).unwrap().is_some()
    });
    assert!(hit, "d = {}", w.d);
}

#[test]
fn imprimitive_test_rejects_eq0() {
    let ctx = Ctx::qdiff(2);
    let a = eq0(&ctx, &int(1)).normalized().companion().unwrap();
    assert!(imprimitive_test(&a, 3, &ctx, &opts()).unwrap().is_none());
}

#[test]
fn imprimitive_s_values() {
    assert_eq!(imprimitive_s(6, 3), 2);
    assert_eq!(imprimitive_s(2, 3), 2);
    assert_eq!(imprimitive_s(4, 2), 2);
    assert_eq!(imprimitive_s(3, 2), 3);
}

/// ν = order of det(E_n(1, …, 1, e^{2iπk/ns})) = (−1)^{n−1}·e^{2iπk/ns}.
fn det_order(n: i64, s: i64, k: i64) -> i64 {
    let angle = Ratio::new(k, n * s) + Ratio::new(n - 1, 2);
    let frac = angle - angle.floor();
    *frac.reduced().denom()
}

#[test]
fn imprimitive_s_exhaustive() {
    for n in [2i64, 3] {
        for s in 1..=60i64 {
            for k in 0..n * s {
                if k.gcd(&s) != 1 {
                    continue;
                }
                let nu = det_order(n, s, k);
                if nu <= 60 {
                    assert_eq!(imprimitive_s(nu as u64, n as u64), s as u64, "n={n} s={s} k={k} ν={nu}");
                }
            }
        }
    }
}

#[test]
fn newton_eq0() {
    let ctx = Ctx::qdiff(2);
    let np = newton_polygon(&eq0(&ctx, &int(1))).unwrap();
    assert_eq!(np.hull, vec![(0, 1), (1, 0), (3, 0)]);
    assert!(!imprimitivity_prescreen(&np));
    assert_eq!(theta_obstruction(&np), Some(true));
}

#[test]
fn newton_small() {
    let ctx = Ctx::qdiff(2);
    let np = newton_polygon(&op(&ctx, &[c(-1), c(0), c(0), c(1)])).unwrap();
    assert_eq!(
        np.slopes,
        vec![Slope {
            num: 0,
            den: 1,
            multiplicity: 3
        }]
    );
    assert!(imprimitivity_prescreen(&np));
    let np = newton_polygon(&op(&ctx, &[-RatFunc::z(), c(1)])).unwrap();
    assert_eq!(np.hull, vec![(0, 1), (1, 0)]);
    let np = newton_polygon(&op(&ctx, &[-RatFunc::z(), c(0), c(0), c(1)])).unwrap();
    assert!(imprimitivity_prescreen(&np));
    assert!(newton_polygon(&op(&Ctx::shift(1), &[c(1), c(1)])).is_err());
}

fn rotation(s: &crate::field::DiffFieldSpec) -> MatK {
    let r = |a: i64| RatFunc::constant(AlgNum::frac(a, 3));
    MatK::from_rows(
        s,
        vec![
            vec![r(1), r(-2), r(2)],
            vec![r(2), r(-1), r(-2)],
            vec![r(2), r(2), r(1)],
        ],
    )
}

fn assert_so3(a: &MatK, ctx: &Ctx) -> So3Certificate {
    let res = so3_test(a, ctx, false).unwrap();
    let cert = res.certificate.expect("SO3 certificate");
    let (t, lambda, r) = (
        cert.gauge.clone().unwrap(),
        cert.lambda.clone().unwrap(),
        cert.rotation.clone().unwrap(),
    );
    let b = gauge(a, &t).unwrap();
    assert_eq!(b, r.scale(&lambda));
    assert!(r.mul(&r.transpose()).unwrap().is_identity());
    assert!(r.det().is_one());
    cert
}

#[test]
fn so3_permutation() {
    let ctx = Ctx::shift(1);
    let a = MatK::permutation(&ctx.spec, &[1, 2, 0]);
    let cert = assert_so3(&a, &ctx);
    assert!(cert.x.is_diagonal());
}

#[test]
fn so3_twisted_rotation() {
    let ctx = Ctx::shift(1);
    let r = rotation(&ctx.spec);
    let r = if r.det().is_one() { r } else { r.scale(&c(-1)) };
    let a = r.scale(&RatFunc::z());
    let cert = assert_so3(&a, &ctx);
    assert_eq!(cert.mu, RatFunc::z().pow(2));
}

#[test]
fn so3_absent_for_eq0() {
    let ctx = Ctx::qdiff(2);
    let a = eq0(&ctx, &int(1)).normalized().companion().unwrap();
    assert!(so3_test(&a, &ctx, false).unwrap().certificate.is_none());
}

#[test]
fn so3_center_continuous() {
    let ctx = Ctx::shift(1);
    let a = rotation(&ctx.spec).scale(&RatFunc::z());
    let so3 = so3_test(&a, &ctx, false).unwrap();
    let cl = primitive_group(&a, &so3, &ctx, Vec::new()).unwrap();
    assert_eq!(
        cl.group,
        GroupDesc::PrimitiveSO3 {
            center: So3Center::Continuous
        }
    );
    assert!(cl.certificate_holds() && cl.membership_holds());
}

#[test]
fn symmetric_decomposition_reconstructs() {
    let ctx = Ctx::shift(1);
    let s = &ctx.spec;
    let z = RatFunc::z();
    let x = MatK::from_rows(
        s,
        vec![
            vec![c(0), z.clone(), c(1)],
            vec![z.clone(), c(0), c(2)],
            vec![c(1), c(2), c(0)],
        ],
    );
    let (f, d) = symmetric_decomposition(&x).unwrap();
    assert_eq!(f.mul(&MatK::diag(s, &d)).unwrap().mul(&f.transpose()).unwrap(), x);
}

fn random_gauge(r: &mut rand_chacha::ChaCha8Rng, s: &crate::field::DiffFieldSpec, n: usize) -> MatK {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, r.gen_range(0..=i));
    }
    let mut u = MatK::identity(s, n);
    for i in 0..n {
        for j in i + 1..n {
            u.set(i, j, RatFunc::from_poly(crate::testutil::rand_poly(r, 2, 2)));
        }
    }
    MatK::permutation(s, &perm).mul(&u).unwrap()
}

#[test]
fn gauge_invariance_small() {
    let ctx = Ctx::shift(1);
    let mut r = rng(17);
    let systems = [
        op(&ctx, &[rf(&[0, -1], &[1]), c(0), c(1)]).companion().unwrap(),
        product(&[phi_minus(&ctx, RatFunc::z()), phi_minus(&ctx, c(1))])
            .companion()
            .unwrap(),
    ];
    for a in &systems {
        let base = classify_system(a, &ctx, &opts()).unwrap();
        for _ in 0..3 {
            let t = random_gauge(&mut r, &ctx.spec, a.rows());
            let b = gauge(a, &t).unwrap();
            let cl = classify_system(&b, &ctx, &opts()).unwrap();
            assert_eq!(cl.group.kind(), base.group.kind());
            assert_eq!(cl.group.dimension(), base.group.dimension());
        }
    }
}

#[test]
fn left_factor_branch() {
    // L = (φ − 1/z)·(φ² − z), no right factor of order one
    let ctx = Ctx::shift(1);
    let n = op(&ctx, &[-RatFunc::z(), c(0), c(1)]);
    let l = product(&[phi_minus(&ctx, rf(&[1], &[0, 1])), n]);
    let cl = classify_operator(&l, &ctx, &opts()).unwrap();
    assert!(cl.trace.iter().any(|s| matches!(
        s,
        TraceStep::Riccati {
            target: RiccatiTarget::Dual,
            found: true,
            ..
        }
    )));
    match &cl.group {
        GroupDesc::TriangularExt {
            via_dual, block_case, ..
        } => {
            assert!(*via_dual);
            assert_eq!(*block_case, BlockCase::Imprimitive);
        }
        g => panic!("{g:?}"),
    }
    assert!(cl.membership_holds());
}

#[test]
fn serialized_group_is_tagged() {
    let g = GroupDesc::ImprimitiveTorsion { n: 3, s: 2, nu: 6 };
    let v = serde_json::to_value(&g).unwrap();
    assert_eq!(v["kind"], "ImprimitiveTorsion");
    assert_eq!(v["s"], 2);
    let p = Poly::from_ints(&[1, 1]);
    assert_eq!(p.degree(), 1);
}
