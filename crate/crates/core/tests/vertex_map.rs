use dsc_core::curvature::{vertex_curvature, HopWindow, SamplingOptions};
use dsc_core::distortion::{default_sources, distortion_report};
use dsc_core::stats;
use dsc_core::{sprinkle, Manifold, Seed};

#[test]
fn neighbouring_vertices_agree_on_the_sphere() {
    let seed = Seed(21);
    let m = Manifold::sphere2(1.0).unwrap();
    let n = 2000;
    let gg = sprinkle(&m, n, 0.25, &mut seed.derive(1).stream(0), None).unwrap();
    let le = distortion_report(&gg, default_sources(n, &mut seed.derive(2).stream(0)))
        .unwrap()
        .effective_edge_length;
    let d = gg.graph.diameter_estimate(&mut seed.derive(3).stream(0)).unwrap();
    let opts = SamplingOptions::new(HopWindow::from_diameter(d));
    let map = vertex_curvature(&gg.graph, le, 3, &opts, seed.derive(4)).unwrap();

    let means: Vec<f64> = map.iter().filter_map(|v| v.mean).collect();
    assert!(means.len() > n * 9 / 10, "{} of {n} covered", means.len());
    let spread = stats::sample_std_dev(&means).unwrap();
    let mut diffs = Vec::new();
    for (u, v) in gg.graph.edges() {
        if let (Some(a), Some(b)) = (map[u as usize].mean, map[v as usize].mean) {
            diffs.push((a - b).abs());
        }
    }
    let adjacent = stats::mean(&diffs).unwrap();
    println!("global mean {:.4}, std {spread:.4}, adjacent |diff| {adjacent:.4}", stats::mean(&means).unwrap());
    assert!(adjacent < spread, "{adjacent} vs {spread}");

    // Unimodal: histogram counts rise to a single peak and then fall, up to
    // Poisson noise of three standard deviations between neighbouring bins.
    let mut sorted = means.clone();
    sorted.sort_by(f64::total_cmp);
    let lo = sorted[sorted.len() / 20];
    let hi = sorted[sorted.len() * 19 / 20];
    let bins = 10;
    let mut counts = vec![0f64; bins];
    for &x in sorted.iter().filter(|x| (lo..=hi).contains(*x)) {
        counts[(((x - lo) / (hi - lo)) * bins as f64).min(bins as f64 - 1.0) as usize] += 1.0;
    }
    println!("{counts:?}");
    let peak = (0..bins).max_by(|&i, &j| counts[i].total_cmp(&counts[j])).unwrap();
    let noise = |a: f64, b: f64| 3.0 * (a + b).sqrt();
    for i in 0..bins - 1 {
        let (a, b) = (counts[i], counts[i + 1]);
        if i < peak {
            assert!(b + noise(a, b) >= a, "dip before the peak at bin {i}: {counts:?}");
        } else {
            assert!(a + noise(a, b) >= b, "rise after the peak at bin {i}: {counts:?}");
        }
    }
}
