//! Property tests over random vectors, mirrors, profiles and graphs.

use std::sync::Arc;

use proptest::prelude::*;

use lightcone_core::achronal::FlatGraph;
use lightcone_core::geometry::{eta, Dim, ReflectionPlane, Side, SpacetimeVector, SphereGrid, TimelikeHyperplane};
use lightcone_core::hyperboloid::{hyp_distance, hyp_point};
use lightcone_core::lightcone::{arrival, dod_volume, perimeter, ArrivalField};
use lightcone_core::polarization::{
    conformal_factor, conformal_map, polarize_graph, polarize_profile, ConformalReflection, SymmetrizeSign,
};
use lightcone_core::random::{random_lipschitz_graph, random_profile, seeded};

fn vector() -> impl Strategy<Value = SpacetimeVector> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(t, a, b)| SpacetimeVector::new(t, [a, b, 0.0]))
}

fn direction() -> impl Strategy<Value = [f64; 3]> {
    (0.0..std::f64::consts::TAU).prop_map(|a| [a.cos(), a.sin(), 0.0])
}

/// Mirror with rapidity in (-1.5, 1.5) polarised by e0; rapidities too close
/// to zero put e0 in the mirror and are skipped.
fn plane() -> impl Strategy<Value = ReflectionPlane> {
    (-1.5..1.5f64, direction()).prop_filter_map("polariser in mirror", |(a, d)| {
        if a.abs() < 1e-3 {
            return None;
        }
        let h = TimelikeHyperplane::from_rapidity(a, d).ok()?;
        ReflectionPlane::new(h, SpacetimeVector::time_unit()).ok()
    })
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-12 * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reflection_is_an_involutive_isometry(p in vector(), q in vector(), pl in plane()) {
        let h = pl.hyperplane();
        let back = h.reflect(&h.reflect(&p));
        let scale = p.euclid_norm() * pl.normal().euclid_norm().powi(2);
        prop_assert!(close(back.t, p.t, scale) && close(back.x[0], p.x[0], scale) && close(back.x[1], p.x[1], scale));
        let (rp, rq) = (h.reflect(&p), h.reflect(&q));
        let s = (p.euclid_norm() * q.euclid_norm()).max(1.0) * pl.normal().euclid_norm().powi(4);
        prop_assert!((eta(&rp, &rq) - eta(&p, &q)).abs() <= 1e-12 * s);
    }

    #[test]
    fn null_vectors_stay_null(r in 0.1..3.0f64, d in direction(), pl in plane()) {
        let p = SpacetimeVector::new(r, [r * d[0], r * d[1], 0.0]);
        let q = pl.reflect(&p);
        prop_assert!(eta(&q, &q).abs() <= 1e-12 * q.euclid_norm_sq());
        prop_assert!(q.t > 0.0);
    }

    #[test]
    fn conformal_map_is_involutive_with_reciprocal_factor(d in direction(), pl in plane()) {
        let w = pl.normal();
        let image = conformal_map(w, &d);
        let back = conformal_map(w, &image);
        prop_assert!((back[0] - d[0]).abs() < 1e-10 && (back[1] - d[1]).abs() < 1e-10);
        prop_assert!((conformal_factor(w, &d) * conformal_factor(w, &image) - 1.0).abs() < 1e-10);
        prop_assert!(((image[0] * image[0] + image[1] * image[1]).sqrt() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_distance_is_reflection_invariant(
        s1 in 0.0..2.5f64, d1 in direction(), s2 in 0.0..2.5f64, d2 in direction(), pl in plane()
    ) {
        let (p, q) = (hyp_point(s1, &d1), hyp_point(s2, &d2));
        let before = hyp_distance(&p, &q).unwrap();
        let (rp, rq) = (pl.reflect(&p), pl.reflect(&q));
        // Renormalise against drift off the hyperboloid before measuring.
        let on = |v: SpacetimeVector| v * (1.0 / (-v.square()).sqrt());
        let after = hyp_distance(&on(rp), &on(rq)).unwrap();
        prop_assert!((before - after).abs() < 1e-8 * before.max(1.0), "{before} {after}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn quadrature_integrates_constants_and_first_harmonics(n in 8usize..2048, level in 0u32..5) {
        let c = SphereGrid::circle(n);
        prop_assert!((c.integrate(&vec![1.0; n]) - Dim::Two.sphere_area()).abs() < 1e-9);
        let cos: Vec<f64> = c.nodes().iter().map(|d| d[0]).collect();
        prop_assert!(c.integrate(&cos).abs() < 1e-12);
        let s = SphereGrid::icosphere(level);
        prop_assert!((s.integrate(&vec![1.0; s.len()]) - Dim::Three.sphere_area()).abs() < 1e-9);
    }

    #[test]
    fn arrival_field_is_above_the_cone_and_one_lipschitz(
        seed in 0u64..10_000, a in -2.0..2.0f64, b in -2.0..2.0f64, c in -2.0..2.0f64, e in -2.0..2.0f64
    ) {
        let p = random_profile(Arc::new(SphereGrid::circle(128)), &mut seeded(seed), 5, 0.5).unwrap();
        let field = ArrivalField::new(&p);
        let (x, y) = ([a, b, 0.0], [c, e, 0.0]);
        let (ux, uy) = (field.eval(&x), field.eval(&y));
        prop_assert!(ux >= a.hypot(b) - 1e-12);
        prop_assert!((ux - uy).abs() <= (a - c).hypot(b - e) * (1.0 + 1e-12) + 1e-12);
        // Beyond the cone the field is the cone itself (exactly so along grid
        // directions; in between the grid minimum sits slightly above).
        let far = p.max_value() * 1.01;
        let d = *p.grid().node(((a + 2.0) * 31.0) as usize % p.grid().len());
        prop_assert!((field.eval(&[far * d[0], far * d[1], 0.0]) - far).abs() < 1e-12 * far);
    }

    #[test]
    fn larger_profiles_have_larger_fields_and_volumes(seed in 0u64..10_000, bump in 0.01..0.5f64) {
        let grid = Arc::new(SphereGrid::circle(128));
        let p = random_profile(grid, &mut seeded(seed), 5, 0.5).unwrap();
        let q = p.with_values(p.values().iter().enumerate().map(|(i, v)| v + bump * (1.0 + (i % 3) as f64)).collect()).unwrap();
        for x in [[0.1, 0.2, 0.0], [0.7, -0.4, 0.0], [-1.2, 0.3, 0.0]] {
            prop_assert!(arrival(&p, &x) <= arrival(&q, &x) + 1e-12);
        }
        prop_assert!(dod_volume(&p, 128).unwrap() <= dod_volume(&q, 128).unwrap());
    }

    #[test]
    fn scaling_laws(seed in 0u64..10_000, c in 0.3..3.0f64) {
        let p = random_profile(Arc::new(SphereGrid::circle(256)), &mut seeded(seed), 5, 0.5).unwrap();
        let q = p.with_values(p.values().iter().map(|v| c * v).collect()).unwrap();
        prop_assert!((perimeter(&q) - c * perimeter(&p)).abs() < 1e-12 * perimeter(&q));
        let (vp, vq) = (dod_volume(&p, 256).unwrap(), dod_volume(&q, 256).unwrap());
        prop_assert!((vq - c.powi(3) * vp).abs() < 1e-9 * vq, "{vq} {}", c.powi(3) * vp);
    }

    #[test]
    fn polarisation_keeps_the_perimeter(seed in 0u64..10_000, pl in plane()) {
        let p = random_profile(Arc::new(SphereGrid::circle(1024)), &mut seeded(seed), 6, 0.4).unwrap();
        let q = polarize_profile(&p, &ConformalReflection::new(&pl, p.grid().clone())).unwrap();
        let rel = (perimeter(&q) - perimeter(&p)).abs() / perimeter(&p);
        prop_assert!(rel <= 1e-4, "{rel}");
    }

    /// The cone point t(1, theta) lies in the polarised cone exactly when the
    /// polarised profile exceeds t there. The spacetime side uses only the
    /// Lorentz reflection of points and the original profile.
    #[test]
    fn level_sets_commute_with_polarisation(seed in 0u64..10_000, pl in plane(), level in 0.6..1.4f64) {
        let p = random_profile(Arc::new(SphereGrid::circle(512)), &mut seeded(seed), 4, 0.4).unwrap();
        let q = polarize_profile(&p, &ConformalReflection::new(&pl, p.grid().clone())).unwrap();
        let inside = |v: &SpacetimeVector| {
            let r = (v.x[0] * v.x[0] + v.x[1] * v.x[1]).sqrt();
            p.eval(&[v.x[0] / r, v.x[1] / r, 0.0]) > v.t
        };
        for (i, d) in p.grid().nodes().iter().enumerate() {
            let fq = q.values()[i];
            if (fq - level).abs() < 1e-3 * level {
                continue;
            }
            let point = SpacetimeVector::new(level, [level * d[0], level * d[1], 0.0]);
            let (here, there) = (inside(&point), inside(&pl.reflect(&point)));
            let set = match pl.side_of(&point) {
                Side::Plus => here || there,
                Side::Minus => here && there,
                Side::On => here,
            };
            prop_assert_eq!(set, fq > level, "node {}", i);
        }
    }

    #[test]
    fn graph_polarisation_rearranges_mirror_pairs(seed in 0u64..10_000, plus in any::<bool>()) {
        let g = random_lipschitz_graph(1.0, 40, &mut seeded(seed), 1.0, 0.9, 6).unwrap();
        let sign = if plus { SymmetrizeSign::Plus } else { SymmetrizeSign::Minus };
        let p = polarize_graph(&g, sign).unwrap();
        let side = g.side();
        for k in 0..g.len() {
            let m = g.index(g.cells() - k % side, k / side);
            let mut before = [g.values()[k], g.values()[m]];
            let mut after = [p.values()[k], p.values()[m]];
            before.sort_by(f64::total_cmp);
            after.sort_by(f64::total_cmp);
            prop_assert_eq!(before, after);
        }
        p.check_lipschitz(0.9).unwrap();
        let q = polarize_graph(&p, sign).unwrap();
        prop_assert_eq!(q.values(), p.values());
    }
}

#[test]
fn symmetric_graphs_are_fixed_points() {
    let g = FlatGraph::from_fn(1.0, 30, |x| 1.0 + 0.2 * x[0] * x[0] - 0.1 * x[1]).unwrap();
    // Mirror nodes can differ in the last bit of their coordinates.
    for sign in [SymmetrizeSign::Plus, SymmetrizeSign::Minus] {
        let p = polarize_graph(&g, sign).unwrap();
        assert!(p.values().iter().zip(g.values()).all(|(a, b)| (a - b).abs() < 1e-14));
    }
}
