use std::f64::consts::PI;

use proptest::prelude::*;
use veech_core::polyflow::*;
use veech_oracles::{primitive_vectors_within, strip_fourier_modulus};

const GOLDEN: f64 = 1.618033988749895;

fn dist_to_segment(z: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let l2 = d[0] * d[0] + d[1] * d[1];
    let t = if l2 == 0.0 { 0.0 } else { (((z[0] - a[0]) * d[0] + (z[1] - a[1]) * d[1]) / l2).clamp(0.0, 1.0) };
    (z[0] - a[0] - t * d[0]).hypot(z[1] - a[1] - t * d[1])
}

#[test]
fn genus_and_stratum() {
    for n in 5..=12u32 {
        let s = build_surface(n).unwrap();
        let g = if n % 2 == 1 { (n - 1) / 2 } else { n / 4 };
        assert_eq!(s.genus, g, "n={n}");
        let positive: Vec<u32> = s.stratum.iter().copied().filter(|&k| k > 0).collect();
        assert_eq!(positive.iter().sum::<u32>(), 2 * g - 2, "n={n}");
        match n % 4 {
            0 => assert_eq!(positive, vec![(n - 4) / 2]),
            2 => assert_eq!(s.stratum, vec![(n - 6) / 4; 2]),
            _ => assert_eq!(positive, vec![n - 3]),
        }
        // cone angles add up to the total corner angle
        let corners: f64 = s.num_polygons() as f64 * n as f64 * (n as f64 - 2.0) * PI / n as f64;
        let cone: f64 = s.orders.iter().map(|&k| 2.0 * PI * (k as f64 + 1.0)).sum();
        assert!((corners - cone).abs() < 1e-9);
    }
    assert_eq!(build_surface(8).unwrap().stratum, vec![2]);
    assert_eq!(build_surface(10).unwrap().stratum, vec![1, 1]);
    assert_eq!(build_surface(5).unwrap().genus, 2);
    let t = build_surface(4).unwrap();
    assert_eq!((t.genus, t.stratum.clone()), (1, vec![0]));
    assert!(build_surface(2).is_err());
}

#[test]
fn pairings_are_translations_of_equal_sides() {
    for n in 3..=12u32 {
        let s = build_surface(n).unwrap();
        for p in 0..s.num_polygons() {
            for e in 0..n as usize {
                let (q, f) = s.pairing[p][e];
                assert_eq!(s.pairing[q][f], (p, e));
                let (u, v) = (s.edge_vector(p, e), s.edge_vector(q, f));
                assert!((u[0] + v[0]).abs() < 1e-12 && (u[1] + v[1]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn surface_json_uses_decimal_strings() {
    let j = serde_json::to_value(build_surface(5).unwrap().to_json()).unwrap();
    assert!(j["polygons"][0][0][0].is_string());
    assert_eq!(j["genus"], 2);
}

#[test]
fn torus_rational_orbit_closes() {
    let s = build_surface(4).unwrap();
    let side = s.side_length();
    for (p, q) in [(1i32, 2i32), (2, 3), (1, 1), (3, 1)] {
        let theta = (p as f64).atan2(q as f64);
        let period = (p as f64).hypot(q as f64) * side;
        let z = [0.1234, 0.0567];
        let o = flow_orbit(&s, theta, 0, z, period).unwrap();
        assert_eq!(o.termination, Termination::TimeOut);
        let e = o.end.position;
        assert!((e[0] - z[0]).abs() < 1e-12 && (e[1] - z[1]).abs() < 1e-12, "{p}/{q}: {e:?}");
        // displacement t·u = end − start − Σ translations
        let u = [theta.cos(), theta.sin()];
        for k in 0..2 {
            assert!((period * u[k] + o.translation_sum[k]).abs() < 1e-12);
        }
        assert!(o.crossings as f64 <= period * s.diameter() + 2.0 * o.segments.len() as f64);
    }
}

#[test]
fn golden_orbit_recurs_but_never_closes() {
    let s = build_surface(4).unwrap();
    let z = [0.1, 0.2];
    let o = flow_orbit(&s, GOLDEN.atan(), 0, z, 1e4).unwrap();
    let near: Vec<f64> = o.segments.iter().filter(|g| g.t0 > 1.0).map(|g| dist_to_segment(z, g.from, g.to)).collect();
    let closest = near.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(near.iter().any(|&d| d < 1e-2));
    assert!(closest > 1e-12);
}

#[test]
fn orbit_aimed_at_vertex_hits_singularity() {
    let s = build_surface(4).unwrap();
    let o = flow_orbit(&s, PI / 4.0, 0, [0.0, 0.0], 10.0).unwrap();
    match o.termination {
        Termination::SingularityHit { time, .. } => assert!((time - 1.0).abs() < 1e-12),
        t => panic!("{t:?}"),
    }
    let s5 = build_surface(5).unwrap();
    let v = s5.polygons[0][2];
    let theta = v[1].atan2(v[0]);
    let o = flow_orbit(&s5, theta, 0, [0.0, 0.0], 10.0).unwrap();
    assert!(matches!(o.termination, Termination::SingularityHit { .. }));
    assert!(flow_orbit(&s5, 0.1, 0, [5.0, 5.0], 1.0).is_err());
}

#[test]
fn torus_saddle_connections_are_primitive_vectors() {
    let s = build_surface(4).unwrap();
    let side = s.side_length();
    for l in [1.0, 2.0, 4.0, 7.5] {
        let sc = saddle_connections(&s, l);
        let prim = primitive_vectors_within(l / side);
        assert_eq!(sc.len(), prim.len(), "L={l}");
        for c in &sc {
            let (p, q) = ((c.holonomy[0] / side).round(), (c.holonomy[1] / side).round());
            assert!((c.holonomy[0] - p * side).abs() < 1e-9 && (c.holonomy[1] - q * side).abs() < 1e-9);
            assert!(prim.contains(&(p as i64, q as i64)));
        }
    }
}

#[test]
fn systoles() {
    for n in [5u32, 8, 10, 12] {
        let s = build_surface(n).unwrap();
        assert!((systole(&s) - s.side_length()).abs() < 1e-12, "n={n}");
        assert!(saddle_connections(&s, 0.99 * s.side_length()).is_empty());
    }
}

#[test]
fn saddle_connections_come_in_opposite_pairs() {
    let s = build_surface(8).unwrap();
    let sc = saddle_connections(&s, 3.0);
    for c in &sc {
        assert!(c.length > 0.0);
        assert!(sc.iter().any(|d| (d.holonomy[0] + c.holonomy[0]).abs() < 1e-9 && (d.holonomy[1] + c.holonomy[1]).abs() < 1e-9));
    }
}

#[test]
fn saddle_connections_stop_at_the_first_cone_point() {
    // with cone angle 2π there is one outgoing ray per direction, so a connection through a
    // cone point would extend a shorter parallel one from the same start
    for n in [4u32, 6] {
        let s = build_surface(n).unwrap();
        let sc = saddle_connections(&s, 5.0);
        for c in &sc {
            let shorter = sc.iter().any(|d| {
                d.start == c.start
                    && d.length < c.length - 1e-9
                    && (d.holonomy[0] * c.holonomy[1] - d.holonomy[1] * c.holonomy[0]).abs() < 1e-9
                    && d.holonomy[0] * c.holonomy[0] + d.holonomy[1] * c.holonomy[1] > 0.0
            });
            assert!(!shorter, "n={n} {c:?}");
        }
    }
}

#[test]
fn no_small_triangles() {
    let torus = build_surface(4).unwrap();
    let side2 = torus.side_length().powi(2);
    assert!((no_small_triangle_check(&torus, 4.0) - side2).abs() < 1e-9);
    let s5 = build_surface(5).unwrap();
    let k = no_small_triangle_check(&s5, 4.0);
    assert!((k - 0.8122992405822653).abs() < 1e-9, "{k}");
    for s in [s5, build_surface(8).unwrap()] {
        let l = 2.0 * s.diameter();
        let a = no_small_triangle_check(&s, l);
        let b = no_small_triangle_check(&s, l + 2.0);
        assert!(a > 0.0 && (a - b).abs() < 1e-9);
    }
}

#[test]
fn cylinders_in_side_directions() {
    let t = build_surface(4).unwrap();
    let d = cylinder_decomposition(&t, 0.0).unwrap();
    assert_eq!(d.cylinders.len(), 1);
    assert!((d.cylinders[0].modulus - 1.0).abs() < 1e-12);

    let s8 = build_surface(8).unwrap();
    let d = cylinder_decomposition(&s8, Direction::Side(0).angle(&s8)).unwrap();
    assert_eq!(d.cylinders.len(), 2);
    assert!(d.commensurability.commensurable);
    assert_eq!(d.commensurability.ratios, vec![(1, 1), (2, 1)]);

    let s5 = build_surface(5).unwrap();
    for k in 0..5 {
        let d = cylinder_decomposition(&s5, Direction::Side(k).angle(&s5)).unwrap();
        assert_eq!(d.cylinders.len(), 2);
        assert!(d.commensurability.commensurable);
        let tw = d.commensurability.twist.unwrap();
        assert!((tw - 2.0 / (PI / 5.0).tan()).abs() < 1e-9, "{tw}");
    }
}

#[test]
fn cylinder_areas_fill_the_surface() {
    for n in [5u32, 8] {
        let s = build_surface(n).unwrap();
        let dirs = periodic_directions(&s, 6.0, 20);
        assert_eq!(dirs.len(), 20);
        for a in dirs {
            let d = cylinder_decomposition(&s, a).unwrap();
            assert!((d.total_area - s.area()).abs() < 1e-9, "n={n} θ={a}");
            assert!(d.cylinders.iter().all(|c| c.width > 0.0 && c.height > 0.0));
            assert!(d.commensurability.commensurable);
        }
    }
}

#[test]
fn generic_direction_is_not_periodic() {
    let s = build_surface(5).unwrap();
    match cylinder_decomposition(&s, 0.123456789) {
        Err(FlowError::NotPeriodic(_)) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn commensurability_reconstruction() {
    let c = commensurability(&[1.5, 3.0, 4.5], 1e-9, 1_000_000);
    assert_eq!(c.ratios, vec![(1, 1), (2, 1), (3, 1)]);
    assert!((c.twist.unwrap() - 9.0).abs() < 1e-12);
    // any ratio is within 1e-9 of some p/q with q ≤ 10⁶; irrational ones need large q
    let c = commensurability(&[1.0, 2f64.sqrt()], 1e-9, 1_000_000);
    assert!(c.max_denominator > 1000);
    let c = commensurability(&[1.0, 2f64.sqrt()], 1e-9, 100);
    assert!(!c.commensurable && c.twist.is_none());
}

#[test]
fn torus_iet_is_a_rotation() {
    let s = build_surface(4).unwrap();
    let v = &s.polygons[0];
    let tr = Transversal { polygon: 0, a: v[0], b: v[1] };
    let l = s.side_length();
    for slope in [GOLDEN, 2f64.sqrt(), 1.0 / PI] {
        let theta = slope.atan();
        let iet = first_return_iet(&s, theta, &tr).unwrap();
        let rho = (l / slope).rem_euclid(l);
        assert_eq!(iet.lengths.len(), 2);
        assert_eq!(iet.permutation, vec![1, 0]);
        assert!((iet.lengths[0] - (l - rho)).abs() < 1e-9 && (iet.lengths[1] - rho).abs() < 1e-9);
        assert!((iet.total - l).abs() < 1e-9);
        assert!(!iet.degenerate);
    }
}

#[test]
fn pentagon_generic_iet() {
    let s = build_surface(5).unwrap();
    for theta in [0.3, 1.0, 2.2] {
        let tr = Transversal::centred(&s, 0, theta, 0.5);
        let iet = first_return_iet(&s, theta, &tr).unwrap();
        assert!(iet.lengths.len() >= 4, "{theta}: {:?}", iet.lengths);
        assert!(iet.lengths.iter().all(|&x| x > 0.0));
        assert!((iet.total - tr.length()).abs() < 1e-9);
        let mut p = iet.permutation.clone();
        p.sort();
        assert_eq!(p, (0..iet.lengths.len()).collect::<Vec<_>>());
        assert!(iet.keane_holds(1000, 1e-9) && !iet.degenerate);
    }
}

#[test]
fn saddle_direction_iet_is_degenerate() {
    let s = build_surface(5).unwrap();
    for theta in [0.0, periodic_directions(&s, 4.0, 5)[4]] {
        let tr = Transversal::centred(&s, 0, theta, 0.5);
        assert!(first_return_iet(&s, theta, &tr).unwrap().degenerate);
    }
    let bad = Transversal { polygon: 0, a: [0.0, 0.0], b: [0.1, 0.0] };
    assert!(matches!(first_return_iet(&s, 0.0, &bad), Err(FlowError::BadTransversal)));
}

#[test]
fn weyl_constant_one_is_exact() {
    let s = build_surface(5).unwrap();
    let r = weyl_average(&s, 0.7, 0.0, &Observable::constant(1.0), 500.0, 4, 1).unwrap();
    assert_eq!(r.magnitude, 1.0);
}

fn torus_strip() -> (veech_core::polyflow::PolygonSurface, Observable, f64) {
    let s = build_surface(4).unwrap();
    let w = 0.3;
    (s, Observable::indicator(Rect { polygon: 0, x0: 0.0, x1: w, y0: -1.0, y1: 1.0 }), w)
}

#[test]
fn torus_weyl_matches_fourier_coefficient() {
    let (s, f, w) = torus_strip();
    let l = s.side_length();
    let theta = GOLDEN.atan();
    let nu = theta.cos() / l;
    let want = strip_fourier_modulus(w, l);
    let mut prev = None;
    for t in [1e3, 1e4] {
        let r = weyl_average(&s, theta, nu, &f, t, 8, 3).unwrap();
        assert!((r.magnitude - want).abs() < 2.0 / t, "T={t}: {} vs {want}", r.magnitude);
        prev = Some(r.magnitude);
    }
    assert!(prev.unwrap() > 0.1);
}

#[test]
fn torus_weyl_decays_for_generic_frequency() {
    let (s, f, _) = torus_strip();
    let theta = GOLDEN.atan();
    let m: Vec<f64> = [1e3, 1e4, 1e5].iter().map(|&t| weyl_average(&s, theta, 0.3137, &f, t, 4, 5).unwrap().magnitude).collect();
    assert!(m[2] < m[0]);
    assert!(m.iter().zip([1e3f64, 1e4, 1e5]).all(|(x, t)| x * t.sqrt() <= 0.05), "{m:?}");
}

#[test]
fn mean_zero_observable_averages_out() {
    let s = build_surface(5).unwrap();
    let f = Observable::indicator(Rect { polygon: 0, x0: -0.3, x1: 0.2, y0: -0.5, y1: 0.1 }).centred(&s);
    let m: Vec<f64> = [1e2, 1e3, 1e4].iter().map(|&t| weyl_average(&s, 0.9, 0.0, &f, t, 8, 2).unwrap().magnitude).collect();
    assert!(m[2] < m[0] && m[2] < 0.02, "{m:?}");
}

#[test]
fn weyl_sweep_reports_best_scale() {
    let (s, f, w) = torus_strip();
    let l = s.side_length();
    let theta = GOLDEN.atan();
    let nu = theta.cos() / l;
    let scales = [0.5, 1.0, 2.0];
    let sw = weyl_sweep(&s, theta, nu, &scales, &f, 2000.0, 4, 9).unwrap();
    assert_eq!(sw.best_scale, 1.0);
    assert!((sw.best_magnitude - strip_fourier_modulus(w, l)).abs() < 1e-2);
}

#[test]
fn weyl_is_seed_deterministic() {
    let (s, f, _) = torus_strip();
    let a = weyl_average(&s, 0.4, 0.2, &f, 300.0, 6, 42).unwrap();
    let b = weyl_average(&s, 0.4, 0.2, &f, 300.0, 6, 42).unwrap();
    assert_eq!(a.magnitude, b.magnitude);
}

#[test]
fn observable_parsing() {
    let f: Observable = "const:-0.25 + rect:0,0,0.3,-1,1,2".parse().unwrap();
    assert_eq!(f.constant, -0.25);
    assert_eq!(f.rects[0].0, 2.0);
    assert!((f.eval(0, [0.1, 0.0]) - 1.75).abs() < 1e-15);
    assert!("bogus".parse::<Observable>().is_err());
}

#[test]
fn normalization_to_triangle_models() {
    let n5 = normalize_to_standard_group(5).unwrap();
    assert!((n5.twist - 2.7528).abs() < 1e-4);
    assert!((n5.twist - 2.0 / (PI / 5.0).tan()).abs() < 1e-9);
    for n in [5u32, 7, 8, 9, 10, 12] {
        let nm = normalize_to_standard_group(n).unwrap();
        assert!(nm.residual_rotation < 1e-9 && nm.residual_shear < 1e-9, "n={n}");
        let c = nm.conjugator;
        assert!((c[0][0] * c[1][1] - c[0][1] * c[1][0] - 1.0).abs() < 1e-12);
    }
    let n4 = normalize_to_standard_group(4).unwrap();
    assert!((n4.twist - 1.0).abs() < 1e-12);
    assert!((n4.conjugator[0][0] - 1.0).abs() < 1e-12 && n4.conjugator[0][1].abs() < 1e-12);
    assert!(matches!(normalize_to_standard_group(6), Err(FlowError::Unsupported(6))));
}

#[test]
fn direction_parsing() {
    let s = build_surface(8).unwrap();
    assert_eq!("side:0".parse::<Direction>().unwrap().angle(&s), 0.0);
    assert!(("vec:1,1".parse::<Direction>().unwrap().angle(&s) - PI / 4.0).abs() < 1e-15);
    assert_eq!("0.5".parse::<Direction>().unwrap(), Direction::Angle(0.5));
    assert!("side:x".parse::<Direction>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn flow_conserves_holonomy(theta in 0.05f64..3.0, x in -0.3f64..0.3, y in -0.3f64..0.3, t in 1.0f64..40.0) {
        let s = build_surface(5).unwrap();
        let o = flow_orbit(&s, theta, 0, [x, y], t).unwrap();
        let u = [theta.cos(), theta.sin()];
        let d = o.duration();
        for k in 0..2 {
            let disp = o.end.position[k] - o.start.position[k] - o.translation_sum[k];
            prop_assert!((disp - d * u[k]).abs() < 1e-9);
        }
        for g in &o.segments {
            let mid = [(g.from[0] + g.to[0]) / 2.0, (g.from[1] + g.to[1]) / 2.0];
            prop_assert!(s.contains(g.polygon, mid));
        }
    }

    #[test]
    fn iet_preserves_measure(theta in 0.05f64..3.0) {
        let s = build_surface(8).unwrap();
        let tr = Transversal::centred(&s, 0, theta, 0.5);
        if let Ok(iet) = first_return_iet(&s, theta, &tr) {
            prop_assert!((iet.total - tr.length()).abs() < 1e-9);
            prop_assert!(iet.lengths.iter().all(|&l| l > 0.0));
        }
    }
}
