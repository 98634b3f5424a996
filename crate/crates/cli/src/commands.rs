//! One function per subcommand. Each returns the JSON document printed on
//! standard output.
//!
//! Seeds follow the same sub-seed layout as `converge::measure_graph`:
//! 1 sprinkle, 2 distortion sources, 3 diameter estimate, 4 triangles,
//! 5 Wolfram centres.

use std::path::Path;

use serde_json::{json, Value};

use dsc_core::converge::run_sweep;
use dsc_core::curvature::{estimate_curvature, vertex_curvature, HopWindow, MidpointRule, SamplingOptions};
use dsc_core::distortion::{default_sources, distortion_report, sample_sources};
use dsc_core::earth::{estimate_earth_radius, EarthOptions, EARTH_EQUATORIAL_KM, EARTH_POLAR_KM};
use dsc_core::fractal::{
    enumerate_fractal_triangles, fractal_curvature_stats, sample_fractal_triangles, scaled_curvatures,
    sierpinski_graph, tail_exponent,
};
use dsc_core::sprinkle::sprinkle as sprinkle_graph;
use dsc_core::wolfram::{estimate_wolfram, WolframOptions};
use dsc_core::{GeometricGraph, Manifold, Seed};

use crate::output::{tagged, write_file, CliError};
use crate::{
    ConvergeArgs, CurvatureArgs, DistortionArgs, EarthArgs, FractalArgs, Midpoint, SprinkleArgs,
    WolframArgs,
};

const SPRINKLE: u64 = 1;
const SOURCES: u64 = 2;
const DIAMETER: u64 = 3;
const TRIANGLES: u64 = 4;
const CENTRES: u64 = 5;

fn parse_manifold(arg: &str) -> Result<Manifold, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::new("io", format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::new("manifold", e))
}

fn load_graph(prefix: &Path) -> Result<GeometricGraph, CliError> {
    GeometricGraph::load(prefix).map_err(|e| CliError::new("graph", format!("{}: {e}", prefix.display())))
}

fn set(v: &mut Value, key: &str, x: impl serde::Serialize) {
    v[key] = serde_json::to_value(x).expect("plain value serializes");
}

/// Stored effective edge length, else measured with the default sources.
fn edge_length(gg: &GeometricGraph, over: Option<f64>, seed: Seed) -> Result<f64, CliError> {
    if let Some(l) = over.or(gg.effective_edge_length) {
        return Ok(l);
    }
    let sources = default_sources(gg.vertex_count(), &mut seed.derive(SOURCES).stream(0));
    distortion_report(gg, sources)
        .map(|r| r.effective_edge_length)
        .map_err(|e| CliError::new("distortion", e))
}

pub fn sprinkle(a: SprinkleArgs) -> Result<Value, CliError> {
    let m = parse_manifold(&a.manifold)?;
    let seed = Seed(a.seed);
    let mut gg = sprinkle_graph(&m, a.n, a.p, &mut seed.derive(SPRINKLE).stream(0), a.l)
        .map_err(|e| CliError::new("sprinkle", e))?;
    let sources = default_sources(a.n, &mut seed.derive(SOURCES).stream(0));
    let dist = distortion_report(&gg, sources).map_err(|e| CliError::new("distortion", e))?;
    gg.effective_edge_length = Some(dist.effective_edge_length);
    gg.save(&a.out).map_err(|e| CliError::new("io", e))?;
    tagged(
        "sprinkle",
        &json!({
            "manifold": m,
            "vertexCount": gg.vertex_count(),
            "edgeCount": gg.graph.edge_count(),
            "connectionLength": gg.connection_length,
            "tolerance": gg.tolerance,
            "effectiveEdgeLength": dist.effective_edge_length,
            "distortion": dist.distortion,
            "seed": a.seed,
        }),
    )
}

pub fn distortion(a: DistortionArgs) -> Result<Value, CliError> {
    let gg = load_graph(&a.graph)?;
    let mut rng = Seed(a.seed).derive(SOURCES).stream(0);
    let n = gg.vertex_count();
    let sources = match a.sources {
        Some(0) => return Err(CliError::usage("--sources must be at least 1")),
        Some(k) => sample_sources(n, k, &mut rng),
        None => default_sources(n, &mut rng),
    };
    let report = distortion_report(&gg, sources).map_err(|e| CliError::new("distortion", e))?;
    tagged("distortion-report", &report)
}

fn midpoint_rule(m: Midpoint) -> MidpointRule {
    match m {
        Midpoint::Symmetric => MidpointRule::Symmetric,
        Midpoint::Uniform => MidpointRule::Uniform,
        Midpoint::Nearest => MidpointRule::Nearest,
        Midpoint::Median => MidpointRule::Median,
    }
}

fn hop_window(gg: &GeometricGraph, smin: Option<u32>, smax: Option<u32>, seed: Seed) -> Result<HopWindow, CliError> {
    let (min, max) = match (smin, smax) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => {
            let d = gg
                .graph
                .diameter_estimate(&mut seed.derive(DIAMETER).stream(0))
                .map_err(|e| CliError::new("graph", e))?;
            let w = HopWindow::from_diameter(d);
            (smin.unwrap_or(w.min), smax.unwrap_or(w.max))
        }
    };
    HopWindow::new(min, max).map_err(|e| CliError::new("curvature", e))
}

pub fn curvature(a: CurvatureArgs) -> Result<Value, CliError> {
    let gg = load_graph(&a.graph)?;
    let seed = Seed(a.seed);
    let le = edge_length(&gg, a.edge_length, seed)?;
    let window = hop_window(&gg, a.smin, a.smax, seed)?;
    let mut options = SamplingOptions::new(window);
    options.max_length = a.max_length;
    options.midpoint_rule = midpoint_rule(a.midpoint);
    let err = |e| CliError::new("curvature", e);

    let mut v = if a.per_vertex {
        let map = vertex_curvature(&gg.graph, le, a.samples, &options, seed.derive(TRIANGLES)).map_err(err)?;
        if let Some(path) = &a.csv {
            let mut csv = String::from("vertex,k,triangles\n");
            for (i, vc) in map.iter().enumerate() {
                let k = vc.mean.map(|k| format!("{k:e}")).unwrap_or_default();
                csv.push_str(&format!("{i},{k},{}\n", vc.triangles));
            }
            write_file(path, &csv)?;
        }
        let covered: Vec<f64> = map.iter().filter_map(|vc| vc.mean).collect();
        tagged(
            "vertex-curvature",
            &json!({
                "estimator": "sectional-vertex",
                "samplesPerVertex": a.samples,
                "covered": covered.len(),
                "meanOfVertexMeans": dsc_core::stats::mean(&covered),
                "vertices": map,
            }),
        )?
    } else {
        let report = estimate_curvature(&gg.graph, le, a.samples, &options, seed.derive(TRIANGLES)).map_err(err)?;
        if let Some(path) = &a.csv {
            write_file(path, &report.to_csv())?;
        }
        let mut v = report.to_json(a.include_samples);
        set(&mut v, "schema", crate::output::schema_tag("curvature-report"));
        v
    };
    set(&mut v, "edgeLength", le);
    set(&mut v, "options", options);
    set(&mut v, "seed", a.seed);
    Ok(v)
}

pub fn wolfram(a: WolframArgs) -> Result<Value, CliError> {
    let gg = load_graph(&a.graph)?;
    let seed = Seed(a.seed);
    let le = edge_length(&gg, a.edge_length, seed)?;
    let options = WolframOptions {
        denominator: a.denominator,
        refit: a.refit,
    };
    let report = estimate_wolfram(&gg.graph, le, a.vertices, &options, seed.derive(CENTRES))
        .map_err(|e| CliError::new("wolfram", e))?;
    if let Some(path) = &a.csv {
        write_file(path, &report.to_csv())?;
    }
    let mut v = report.to_json(false);
    set(&mut v, "schema", crate::output::schema_tag("curvature-report"));
    set(&mut v, "edgeLength", le);
    set(&mut v, "options", options);
    set(&mut v, "seed", a.seed);
    Ok(v)
}

pub fn converge(a: ConvergeArgs) -> Result<Value, CliError> {
    let m = parse_manifold(&a.manifold)?;
    let true_k = a
        .true_k
        .or_else(|| m.sectional_curvature())
        .ok_or_else(|| CliError::usage("--true-k is required for manifolds without constant curvature"))?;
    let report = run_sweep(&m, true_k, &a.counts, a.seeds_per, a.samples, Seed(a.seed))
        .map_err(|e| CliError::new("converge", e))?;
    if let Some(path) = &a.csv {
        write_file(path, &report.to_csv())?;
    }
    let mut v = tagged("sweep-report", &report)?;
    set(&mut v, "manifold", m);
    set(&mut v, "seed", a.seed);
    Ok(v)
}

pub fn fractal(a: FractalArgs) -> Result<Value, CliError> {
    if !(a.edge_scale.is_finite() && a.edge_scale > 0.0) {
        return Err(CliError::usage("--edge-scale must be positive"));
    }
    let err = |e| CliError::new("fractal", e);
    let sg = sierpinski_graph(a.level).map_err(err)?;
    let (samples, degenerate) = match a.samples {
        Some(count) if !a.exact => (sample_fractal_triangles(&sg, count, Seed(a.seed)).map_err(err)?, None),
        _ => {
            let e = enumerate_fractal_triangles(&sg).map_err(err)?;
            (e.samples, Some(e.degenerate))
        }
    };
    if let Some(path) = &a.csv {
        let mut csv = String::from("a,b,c,k\n");
        let factor = a.edge_scale.powi(-2 * a.level as i32);
        for t in &samples {
            let k = dsc_core::curvature_from_triangle(t.a, t.b, t.c)
                .map(|k| format!("{:e}", k * factor))
                .unwrap_or_default();
            csv.push_str(&format!("{},{},{},{k}\n", t.a, t.b, t.c));
        }
        write_file(path, &csv)?;
    }
    let stats = fractal_curvature_stats(&samples, a.edge_scale, a.level);
    let (ks, _) = scaled_curvatures(&samples, a.edge_scale, a.level);
    let mut v = tagged("fractal-stats", &stats)?;
    set(&mut v, "mode", if degenerate.is_some() { "exact" } else { "sampled" });
    set(&mut v, "vertexCount", sg.graph.vertex_count());
    set(&mut v, "degenerate", degenerate);
    set(&mut v, "tailFit", tail_exponent(&ks, a.tail_bins));
    set(&mut v, "seed", a.seed);
    Ok(v)
}

pub fn earth(a: EarthArgs) -> Result<Value, CliError> {
    let m = Manifold::spheroid(a.equatorial, a.polar).map_err(|e| CliError::new("manifold", e))?;
    let options = EarthOptions {
        leg_min: a.leg_min,
        leg_max: a.leg_max,
        max_length: a.max_length,
    };
    let est = estimate_earth_radius(&m, a.samples, &options, Seed(a.seed)).map_err(|e| CliError::new("earth", e))?;
    if let Some(path) = &a.csv {
        let mut csv = String::from("r\n");
        for r in &est.radii {
            csv.push_str(&format!("{r:e}\n"));
        }
        write_file(path, &csv)?;
    }
    // The reference density is only defined for the default earth radii.
    let ks = (a.equatorial == EARTH_EQUATORIAL_KM && a.polar == EARTH_POLAR_KM).then(|| est.ks_to_expected());
    let mut v = tagged("earth-summary", &est)?;
    v.as_object_mut().unwrap().remove("radii");
    set(&mut v, "ksDistance", ks);
    set(&mut v, "manifold", m);
    set(&mut v, "options", options);
    set(&mut v, "seed", a.seed);
    Ok(v)
}
