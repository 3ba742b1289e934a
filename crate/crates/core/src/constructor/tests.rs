use super::cover::{image_disk, verify_certificate};
use super::*;
use crate::interactions::Mobius;
use crate::graph::random::random_gaussian;
use crate::numeric::Field;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(a: i64, b: i64, c: i64, d: i64) -> Q {
    Q::from_frac(a, b, c, d)
}

fn eps(k: i32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10).pow(k as u32))
}

fn k2_cert(p: &Q) -> CoverCertificate {
    precompute(&TwoTerminal::k2(), p).unwrap()
}

#[test]
fn edge_certificate_at_minus_half() {
    let p = q(-1, 2, 0, 1);
    let cert = k2_cert(&p);
    assert!(cert.real);
    // ŷ_{K₂} = 1/p = −2, so g has multiplier 1/2 at 1
    assert_eq!(cert.yhat_work, Q::from_int(-2));
    assert!((cert.multiplier - 0.5).abs() < 1e-15);
    let g = cert.g.clone();
    assert_eq!(g, crate::interactions::g_map(&p, &q(1, 2, 0, 1)).unwrap());
    assert!(!cert.family.is_empty());
    assert!(cert.alpha < BigRational::one());
    verify_certificate(&cert).unwrap();
}

#[test]
fn complex_certificates() {
    for p in [q(0, 1, 1, 2), q(0, 1, 3, 4), q(-1, 3, 1, 3)] {
        let cert = k2_cert(&p);
        assert!(!cert.real);
        verify_certificate(&cert).unwrap();
    }
}

#[test]
fn preconditions() {
    let k2 = TwoTerminal::k2();
    assert_eq!(precompute(&k2, &q(1, 2, 0, 1)).unwrap_err(), ConstructError::PreconditionUnverified);
    assert!(matches!(
        precompute(&k2, &Q::nil()).unwrap_err(),
        ConstructError::InvalidParameter(_) | ConstructError::PreconditionFailed(_)
    ));
    assert!(matches!(precompute(&k2, &Q::ident()).unwrap_err(), ConstructError::InvalidParameter(_)));
    let cert = k2_cert(&q(-1, 2, 0, 1));
    let zero = BigRational::from_integer(0.into());
    assert_eq!(construct_interaction(&cert, &Q::nil(), &zero, Strategy::Offset).unwrap_err(), ConstructError::NonPositiveEps);
    assert!(matches!(
        construct_interaction(&cert, &q(5, 1, 3, 1), &eps(6), Strategy::Offset).unwrap_err(),
        ConstructError::TargetNotReal(_)
    ));
}

#[test]
fn image_disk_matches_boundary() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let m = Mobius { a: random_gaussian(&mut rng, 5), b: random_gaussian(&mut rng, 5), c: Q::ident(), d: random_gaussian(&mut rng, 5) };
        if m.det().is_nil() {
            continue;
        }
        let z0 = random_gaussian(&mut rng, 3);
        let rho = BigRational::new(1.into(), 8.into());
        let Some(d) = image_disk(&m, &z0, &(&rho * &rho)) else { continue };
        let (c, r2) = (d.center.to_c64(), crate::numeric::gauss::rat_to_f64(&d.rad_sq));
        let mf = |z: Complex64| (m.a.to_c64() * z + m.b.to_c64()) / (m.c.to_c64() * z + m.d.to_c64());
        for k in 0..16 {
            let z = z0.to_c64() + Complex64::from_polar(0.125, k as f64 * 0.4);
            let w = mf(z);
            assert!(((w - c).norm_sqr() - r2).abs() < 1e-9 * r2.max(1.0));
        }
    }
}

#[test]
fn single_edge_for_zero_offset() {
    for p in [q(-1, 2, 0, 1), q(0, 1, 1, 2)] {
        let cert = k2_cert(&p);
        for strategy in [Strategy::Offset, Strategy::Paper] {
            let res = construct_interaction(&cert, &Q::nil(), &eps(3), strategy).unwrap();
            assert_eq!(res.expr.to_string(), "e");
            assert_eq!(res.error, BigRational::from_integer(0.into()));
        }
    }
}

#[test]
fn path_examples() {
    let cert = k2_cert(&q(0, 1, 1, 2));
    let s = cert.start.y.clone();
    let e = eps(8);
    assert!(path_find(&cert, &s, &e).unwrap().indices.is_empty());
    let i = cert.family.len().min(4) - 1;
    let t = cert.family[i].map.apply_finite(&s).finite().unwrap().clone();
    if t.dist_sq(&Q::ident()) <= &cert.r * &cert.r {
        assert_eq!(path_find(&cert, &t, &e).unwrap().indices, vec![i]);
    }
    // random targets at 1e-8: short sequences and orbits inside B(1, 3r)
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let rf = crate::numeric::gauss::rat_to_f64(&cert.r);
    let alpha = crate::numeric::gauss::rat_to_f64(&cert.alpha);
    let bound = ((2.0 * rf * 1e8).ln() / (1.0 / alpha).ln()).ceil() as usize;
    for _ in 0..20 {
        let w = Complex64::from_polar(rf * rng.gen_range(0.0..0.99), rng.gen_range(0.0..6.28));
        let t = Q::new(BigRational::from_float(1.0 + w.re).unwrap(), BigRational::from_float(w.im).unwrap());
        let path = path_find(&cert, &t, &e).unwrap();
        assert!(path.indices.len() <= bound + 2, "{} steps, bound {}", path.indices.len(), bound);
        assert!((path.x.to_c64() - t.to_c64()).norm() <= 1e-8);
        for x in &path.forward {
            assert!((x.to_c64() - 1.0).norm() <= 3.0 * rf);
        }
        // exact forward orbit agrees with the float one
        let h = chain(&cert, &path.indices).unwrap();
        let y = cert.base.y(&h).finite().unwrap().clone();
        assert!(y.dist_sq(&t) < &e * &e);
    }
}

#[test]
fn chain_keeps_reliability_nonzero() {
    let cert = k2_cert(&q(-1, 2, 0, 1));
    let u = q(33, 32, 0, 1).sub(&q(1, 100, 0, 1));
    let path = path_find(&cert, &u, &eps(6)).unwrap();
    let base = &cert.base;
    let mut h = cert.start.gadget.clone();
    assert!(!h.hpair.r.is_nil());
    for &i in path.indices.iter().rev() {
        h = base.series_into(base.parallel_into(h, &cert.work), &cert.family[i].gadget);
        assert!(!base.pair(&h).r.is_nil());
    }
}

fn check_targets(p: &Q, targets: &[Q], e: &BigRational, strategy: Strategy) {
    let cert = k2_cert(p);
    for y0 in targets {
        let res = construct_interaction(&cert, y0, e, strategy).unwrap_or_else(|err| panic!("{y0}: {err}"));
        let fresh = crate::reliability::eval_sp(&res.expr, &crate::reliability::k2_pair(p));
        assert_eq!(fresh, res.pair);
        assert!(!fresh.r.is_nil());
        assert!(res.offset(p).dist_sq(y0) < e * e);
        assert!(&res.error < e);
        assert_eq!(res.size, res.expr.leaves());
    }
}

#[test]
fn real_targets() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let targets: Vec<Q> = (0..12).map(|_| q(rng.gen_range(-1000..=1000), 100, 0, 1)).collect();
    check_targets(&q(-1, 2, 0, 1), &targets, &eps(6), Strategy::Offset);
    check_targets(&q(-1, 2, 0, 1), &targets[..4], &eps(6), Strategy::Paper);
}

#[test]
fn complex_targets() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let targets: Vec<Q> =
        (0..10).map(|_| q(rng.gen_range(-1000..=1000), 100, rng.gen_range(-1000..=1000), 100)).collect();
    check_targets(&q(0, 1, 1, 2), &targets, &eps(6), Strategy::Offset);
    check_targets(&q(0, 1, 1, 2), &targets[..4], &eps(6), Strategy::Paper);
    check_targets(&q(0, 1, 3, 4), &targets[..4], &eps(4), Strategy::Offset);
}

#[test]
fn other_base_gadget() {
    // two-edge path at p = i/2: ŷ = (1+p)/(2p) = 1/2 − i
    let g0 = TwoTerminal::path(2);
    let p = q(0, 1, 1, 2);
    let cert = precompute(&g0, &p).unwrap();
    verify_certificate(&cert).unwrap();
    let res = construct_interaction(&cert, &q(3, 1, 1, 1), &eps(5), Strategy::Offset).unwrap();
    let fresh = crate::reliability::eval_pair_delcon(&res.expr.realize(&g0), &p);
    assert_eq!(fresh, res.pair);
    let y = Q::ident().sub(&p).mul(&fresh.s).div(&fresh.r).unwrap().add(&Q::ident());
    assert!(y.sub(&Q::ident()).sub(&p).dist_sq(&q(3, 1, 1, 1)) < eps(5) * eps(5));
}
