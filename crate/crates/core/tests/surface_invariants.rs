mod common;

use common::{c, rel};
use grt::expr::RealExpr;
use grt::surface::{
    point_closed_form, point_direct, rotation_point, sample_mesh, sample_rotation_mesh, Method, SurfaceSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SWEEPS: [(&str, &str, &str); 4] =
    [("z", "z", "t^2+t+1"), ("z", "z", "cos(t)"), ("z^2", "exp(z)", "t^2+1"), ("log(z + 3)", "z^3 - z", "sinh(t) + 2")];

#[test]
fn two_constructions_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (f, g, ell) in SWEEPS {
        let spec = SurfaceSpec::parse(f, g, ell);
        for _ in 0..200 {
            let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let (Ok(a), Ok(b)) = (point_closed_form(&spec, z), point_direct(&spec, z)) else { continue };
            assert!((a - b).norm() / (1.0 + a.norm()) < 1e-12, "{f}, {g}, {ell} at {z}");
        }
    }
}

#[test]
fn direct_and_closed_meshes_coincide() {
    let spec = SurfaceSpec::parse("z^2", "exp(z)", "t^2+1").with_resolution(17, 13);
    let closed = sample_mesh(&spec).unwrap();
    let direct = sample_mesh(&spec.clone().with_method(Method::Direct)).unwrap();
    assert_eq!(closed.faces, direct.faces);
    for (a, b) in closed.vertices.iter().zip(&direct.vertices) {
        let (a, b) = (a.sample.as_ref().unwrap(), b.sample.as_ref().unwrap());
        assert!((a.position - b.position).norm() < 1e-12 * (1.0 + a.position.norm()));
        assert_eq!(a.normal, b.normal);
    }
}

#[test]
fn support_and_distance_on_mesh() {
    for (f, g, ell) in SWEEPS {
        let mesh = sample_mesh(&SurfaceSpec::parse(f, g, ell).with_resolution(24, 24)).unwrap();
        for v in mesh.vertices.iter().filter_map(|v| v.sample.as_ref()) {
            let d = &v.diagnostics;
            assert!(rel(v.position.dot(&v.normal), d.psi) < 1e-12, "{f}, {g}, {ell}");
            assert!(rel(v.position.norm_squared(), d.lambda) < 1e-12, "{f}, {g}, {ell}");
        }
    }
}

#[test]
fn sampling_is_deterministic() {
    let spec = SurfaceSpec::parse("log(z + 3)", "z^3 - z", "sinh(t) + 2").with_resolution(31, 29);
    assert_eq!(sample_mesh(&spec).unwrap(), sample_mesh(&spec).unwrap());
}

#[test]
fn faces_are_valid_and_counter_clockwise() {
    let spec = SurfaceSpec::parse("z", "z^2", "t^2+t+1").with_resolution(9, 9);
    let mesh = sample_mesh(&spec).unwrap();
    assert_eq!(mesh.valid_count(), 80);
    for tri in &mesh.faces {
        let [a, b, d] = tri.map(|k| {
            assert!(mesh.vertices[k].is_valid());
            mesh.vertices[k].u
        });
        let area = (b[0] - a[0]) * (d[1] - a[1]) - (b[1] - a[1]) * (d[0] - a[0]);
        assert!(area > 0.0);
    }
}

#[test]
fn scaling_the_profile_scales_the_surface() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (f, g, ell) in SWEEPS {
        let spec = SurfaceSpec::parse(f, g, ell);
        for lambda in [0.25, 3.0, 17.5] {
            let scaled = spec.clone().with_profile(spec.ell.scaled(lambda));
            for _ in 0..20 {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let (Ok(a), Ok(b)) = (spec.frame_at(z), scaled.frame_at(z)) else { continue };
                let (sa, sb) = (&a.shape.scalars, &b.shape.scalars);
                assert!((b.position - lambda * a.position).norm() <= 1e-12 * lambda * (1.0 + a.position.norm()));
                assert!(rel(sb.psi, lambda * sa.psi) < 1e-12);
                assert!(rel(sb.lambda.sqrt(), lambda * sa.lambda.sqrt()) < 1e-12);
                match (sa.c, sb.c) {
                    (Some(ca), Some(cb)) => assert!(rel(cb, ca) < 1e-12, "{ell}: {ca} vs {cb}"),
                    (None, None) => {}
                    other => panic!("C defined on one side only: {other:?}"),
                }
            }
        }
    }
}

#[test]
fn rotation_with_a_zero_is_a_sphere() {
    for ell in ["t^2+t+1", "cos(t)", "sinh(t)"] {
        let ell = RealExpr::parse(ell).unwrap();
        for b in [1.0, -0.5, 2.0] {
            let radius_sq = ell.eval(b).unwrap().powi(2);
            let spec = SurfaceSpec::rotation(0.0, b, ell.clone()).with_resolution(16, 16);
            let mesh = sample_rotation_mesh(0.0, b, &spec).unwrap();
            for v in mesh.vertices.iter().filter_map(|v| v.sample.as_ref()) {
                assert!(rel(v.position.norm_squared(), radius_sq) < 1e-12, "{ell}, b = {b}");
            }
        }
    }
}

#[test]
fn rotation_is_periodic_in_u2() {
    let ell = RealExpr::parse("t^2+t+1").unwrap();
    for u1 in [-0.7, 0.0, 0.4] {
        let a = rotation_point(2.0, -1.0, &ell, u1, 0.3).unwrap();
        let b = rotation_point(2.0, -1.0, &ell, u1, 0.3 + 2.0 * std::f64::consts::PI).unwrap();
        assert!((a - b).norm() < 1e-12);
        // distance to the axis is independent of u2
        let r = |u2| {
            let p = rotation_point(2.0, -1.0, &ell, u1, u2).unwrap();
            p.x.hypot(p.y)
        };
        assert!(rel(r(0.0), r(1.9)) < 1e-14);
    }
}

#[test]
fn degenerate_inputs_are_reported_per_vertex() {
    // ℓ evaluated outside its domain invalidates vertices without failing the mesh.
    let spec = SurfaceSpec::parse("z", "z", "log(t)").with_resolution(8, 8);
    let mesh = sample_mesh(&spec).unwrap();
    let invalid: Vec<_> = mesh.vertices.iter().filter(|v| !v.is_valid()).collect();
    assert_eq!(invalid.len(), 32);
    assert!(invalid.iter().all(|v| v.u[0] < 0.0 && v.invalid_reason.as_deref().unwrap().contains("logarithm")));
}
