use std::f64::consts::PI;

use dsc_core::converge::measure_graph;
use dsc_core::curvature::ricci_scalar_from_mean_sectional;
use dsc_core::earth::{estimate_earth_radius, EarthOptions};
use dsc_core::{sprinkle, GeometricGraph, Manifold, Seed};

#[test]
fn curvature_sign_follows_the_manifold() {
    let cases = [
        (Manifold::sphere2(1.0).unwrap(), 1.0),
        (Manifold::sphere3(1.0).unwrap(), 1.0),
        (Manifold::hyperbolic_with_area(1.0, 4.0 * PI).unwrap(), -1.0),
    ];
    for (m, sign) in cases {
        let g = measure_graph(&m, 2000, 600, Seed(8)).unwrap();
        let r = &g.report;
        println!("{}: {:.3} ± {:.3}", m.name(), r.mean, r.standard_error);
        assert!(r.mean * sign > 0.0 && (r.mean * sign) > 5.0 * r.standard_error, "{}", m.name());
    }
}

#[test]
fn ricci_scalar_of_the_unit_sphere() {
    let k = measure_graph(&Manifold::sphere2(1.0).unwrap(), 2000, 600, Seed(3)).unwrap().report.mean;
    let r = ricci_scalar_from_mean_sectional(k, 2).unwrap();
    assert_eq!(r, 2.0 * k);
    assert!((r - 2.0).abs() < 0.4, "{r}");
}

#[test]
fn saved_graph_reloads_identically() {
    let m = Manifold::hyperbolic(1.0, 1.5).unwrap();
    let mut gg = sprinkle(&m, 300, 0.25, &mut Seed(2).stream(0), None).unwrap();
    gg.effective_edge_length = Some(0.3);
    let dir = std::env::temp_dir().join(format!("dsc-core-pipeline-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let prefix = dir.join("h");
    gg.save(&prefix).unwrap();
    let back = GeometricGraph::load(&prefix).unwrap();
    assert_eq!(back.graph, gg.graph);
    assert_eq!(back.manifold, gg.manifold);
    for (p, q) in back.points.iter().zip(&gg.points) {
        assert_eq!(p.coords(), q.coords());
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn spheroid_triangles_on_a_sphere_match_the_sphere() {
    // Equal radii: every triangle must return the sphere's radius.
    let m = Manifold::spheroid(2.0, 2.0).unwrap();
    let opts = EarthOptions {
        leg_min: 0.2,
        leg_max: 2.5,
        max_length: None,
    };
    let est = estimate_earth_radius(&m, 300, &opts, Seed(4)).unwrap();
    assert!(est.radii.iter().all(|r| (r - 2.0).abs() < 2e-4));
}
