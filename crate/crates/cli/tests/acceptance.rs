//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Runs as a plain binary so every line is always printed.

use std::f64::consts::{LN_2, TAU};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use lsjulia_core::boundary::{
    default_base_point, equidistribution_report, preimage_tree, BoundaryCloud, CloudDistance, CloudMode, DistanceOracle,
};
use lsjulia_core::dyncore::{EscapeParams, Polynomial};
use lsjulia_core::envelope::{
    check_relation_level_sets, relax_with, PoletskyContext, PoletskyOptions, RegionMask, RelaxOptions,
};
use lsjulia_core::green::{check_invariance, green_field, laplacian_measure, DEFAULT_SERIES_TERMS};
use lsjulia_core::grid::GridSpec;
use lsjulia_core::lsgate::counterexample::{cusp_ladder, cusp_scan};
use lsjulia_core::lsgate::{
    find_c_star, hyperbolic_bound, min_guard, obstruction_scan, prop2_boundary_check, scan_oc, verdict_stability, Band,
    JuliaGreen, Verdict, DEFAULT_LADDER,
};
use lsjulia_core::models::{DiskModel, TangentDisks};
use lsjulia_core::parallel::{substream, with_workers};
use lsjulia_core::Complex64;
use rand::Rng;

type Outcome = Result<(bool, String), String>;

fn square() -> Polynomial {
    Polynomial::from_real(&[0.0, 0.0, 1.0]).unwrap()
}

fn basilica() -> Polynomial {
    Polynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap()
}

fn cloud(poly: &Polynomial, depth: usize) -> Result<BoundaryCloud, String> {
    preimage_tree(poly, default_base_point(poly), depth, CloudMode::FullTree, 0).map_err(|e| e.to_string())
}

fn e(err: impl std::fmt::Display) -> String {
    err.to_string()
}

/// Ladder value next above `c`, or `c` itself at the top.
fn ladder_step_above(c: f64) -> f64 {
    DEFAULT_LADDER
        .iter()
        .copied()
        .filter(|&x| x > c)
        .min_by(f64::total_cmp)
        .unwrap_or(c)
}

fn c1_analytic_green() -> Outcome {
    let sq = square();
    let params = EscapeParams::for_poly(&sq);
    let h = 0.005;
    let g = GridSpec::square(Complex64::new(0.0, 0.0), 2.5, h).map_err(e)?;
    let t = Instant::now();
    let field = with_workers(Some(1), || green_field(&sq, &g, &params, DEFAULT_SERIES_TERMS));
    let secs = t.elapsed().as_secs_f64();
    let err = g
        .centers()
        .zip(&field.values)
        .filter(|(z, _)| (z.norm() - 1.0).abs() > 2.0 * h)
        .map(|(z, v)| (v - z.norm().ln().max(0.0)).abs())
        .fold(0.0, f64::max);
    Ok((
        err <= 1e-6 && secs <= 30.0,
        format!("max error {err:.2e} (<= 1e-6), {secs:.1} s single worker (<= 30 s)"),
    ))
}

fn c2_invariance() -> Outcome {
    let p = basilica();
    let params = EscapeParams::for_poly(&p);
    let pts: Vec<Complex64> = (0..1000)
        .map(|i| {
            let mut rng = substream(2, i);
            Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
        })
        .collect();
    let r = check_invariance(&p, &pts, &params, DEFAULT_SERIES_TERMS, 1e-8);
    Ok((
        r.pass,
        format!(
            "max |G(f z) - 2 G(z)| = {:.2e} over {} points (<= 1e-8)",
            r.max_deviation, r.points
        ),
    ))
}

fn c3_equidistribution() -> Outcome {
    let p = basilica();
    let params = EscapeParams::for_poly(&p);
    let g = GridSpec::square(Complex64::new(0.0, 0.0), 2.0, 0.005).map_err(e)?;
    let mu = laplacian_measure(&green_field(&p, &g, &params, DEFAULT_SERIES_TERMS))
        .map_err(e)?
        .measure;
    let deep = equidistribution_report(&cloud(&p, 14)?, &mu, 4).max_deviation;
    let shallow = equidistribution_report(&cloud(&p, 8)?, &mu, 4).max_deviation;
    Ok((
        deep <= 0.02 && deep < shallow,
        format!("max moment deviation {deep:.4} at depth 14 (<= 0.02), {shallow:.4} at depth 8"),
    ))
}

fn c4_relation() -> Outcome {
    let opts = RelaxOptions::default();
    let sq = square();
    let h0 = 0.01;
    let g0 = GridSpec::square(Complex64::new(0.0, 0.0), 2.2, h0).map_err(e)?;
    let (r0, _) =
        check_relation_level_sets(&sq, &EscapeParams::for_poly(&sq), LN_2, &g0, 5.0 * h0, &opts).map_err(e)?;

    let p = basilica();
    let params = EscapeParams::for_poly(&p);
    let dev = |h: f64| -> Result<f64, String> {
        let g = GridSpec::covering(-2.2, 2.2, -1.4, 1.4, h).map_err(e)?;
        let (r, _) = check_relation_level_sets(&p, &params, 0.4, &g, 0.02, &opts).map_err(e)?;
        Ok(r.max_deviation)
    };
    let (d1, d2) = (dev(0.005)?, dev(0.0025)?);
    let ratio = d1 / d2;
    let halving = (ratio - 2.0).abs() <= 0.6;
    Ok((
        r0.pass && d1 <= 0.02 && halving,
        format!(
            "z^2: {:.4} (<= {:.2}); z^2-1: {d1:.4} at h = 0.005 (<= 0.02), {d2:.4} at h/2, ratio {ratio:.2} (2 +- 30%)",
            r0.max_deviation,
            5.0 * h0
        ),
    ))
}

fn c5_poletsky() -> Outcome {
    let t = Instant::now();
    let (r_in, r_out) = (0.5, 2.0);
    let g = GridSpec::square(Complex64::new(0.0, 0.0), 2.1, 0.005).map_err(e)?;
    let region = RegionMask::from_fn(g, |z| z.norm() <= r_in, |z| z.norm() < r_out).map_err(e)?;
    let rel = relax_with(&region, &RelaxOptions::default(), None).map_err(e)?;
    let ctx = PoletskyContext::new(&region);
    let opts = PoletskyOptions {
        n_discs: 20_000,
        ..Default::default()
    };
    let checkpoints = [1000, 2500, 5000, 10_000, 20_000];
    let (mut below, mut increasing, mut worst) = (0.0f64, 0usize, 0.0f64);
    for k in 0..10 {
        let z = Complex64::from_polar(0.6 + 0.13 * k as f64, 2.399_963 * k as f64);
        let relax = rel.field.sample(z).ok_or("test point off the grid")?;
        let trace = ctx.trace(z, &opts, &checkpoints).map_err(e)?;
        below = below.max(trace.iter().map(|&(_, v)| relax - v).fold(f64::NEG_INFINITY, f64::max));
        increasing += trace.windows(2).filter(|w| w[1].1 > w[0].1).count();
        let exact = -(r_out / z.norm()).ln() / (r_out / r_in).ln();
        worst = worst.max((trace.last().unwrap().1 - exact).abs());
    }
    let secs = t.elapsed().as_secs_f64();
    Ok((
        below <= 0.02 && increasing == 0 && worst <= 0.03 && secs <= 120.0,
        format!(
            "max (relaxation - estimate) {below:.4} (<= 0.02), {increasing} increases along n, \
             max analytic error {worst:.4} (<= 0.03), {secs:.0} s (<= 120 s)"
        ),
    ))
}

/// Largest `c` with `ln(1 + t) >= c t^{1/c}` on `[lo, 1)`, by bisection
/// over a fine sample of `t`.
fn disk_threshold(lo: f64) -> f64 {
    let ts: Vec<f64> = (0..=20_000).map(|i| lo + (1.0 - lo) * i as f64 / 20_000.0).collect();
    let ok = |c: f64| ts.iter().all(|&t| (1.0 + t).ln() >= c * t.powf(1.0 / c));
    let (mut a, mut b) = (1e-3, 1.0 - 1e-9);
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if ok(m) {
            a = m;
        } else {
            b = m;
        }
    }
    a
}

struct Scans {
    basilica_c_star: Option<f64>,
    square_c_star: Option<f64>,
}

fn c6_main_theorem(p: &Polynomial, basilica_cloud: &BoundaryCloud, scans: &mut Scans) -> Outcome {
    let params = EscapeParams::for_poly(p);
    let src = JuliaGreen::new(p);
    let oracle = CloudDistance::new(p, params, basilica_cloud);
    let g = GridSpec::covering(-2.0, 2.0, -1.2, 1.2, 0.01).map_err(e)?;
    let guard = 0.02;
    let cs = find_c_star(&src, &oracle, &g, guard, &DEFAULT_LADDER).map_err(e)?;
    scans.basilica_c_star = cs.c_star;
    let stable = match cs.c_star {
        Some(c) => {
            let s = verdict_stability(&src, &oracle, &g, c, guard).map_err(e)?;
            s.stable && s.fine.verdict == Verdict::Empty
        }
        None => false,
    };

    let sq = square();
    let d = DiskModel::unit();
    let gs = GridSpec::square(Complex64::new(0.0, 0.0), 2.0, 0.01).map_err(e)?;
    let sq_cs = find_c_star(&JuliaGreen::new(&sq), &d, &gs, guard, &DEFAULT_LADDER).map_err(e)?;
    scans.square_c_star = sq_cs.c_star;
    let analytic = disk_threshold(guard);
    let agree = sq_cs
        .c_star
        .is_some_and(|c| c <= analytic && analytic <= ladder_step_above(c));
    Ok((
        cs.c_star.is_some() && stable && agree,
        format!(
            "z^2-1: c* = {:?}, empty verdict stable at h/2: {stable}; z^2: c* = {:?}, analytic threshold {analytic:.4}",
            cs.c_star, sq_cs.c_star
        ),
    ))
}

fn c7_counterexample() -> Outcome {
    let mut nonempty = Vec::new();
    for c in [0.5, 0.3, 0.1] {
        nonempty.push(!cusp_scan(c, 8).map_err(e)?.report.is_empty());
    }
    let t = TangentDisks;
    let ladder = cusp_ladder(3);
    let rep = obstruction_scan(&t, &t, &ladder).map_err(e)?;
    let ratios: Vec<f64> = rep.scales.iter().map(|s| s.sup_ratio).collect();
    let increasing = ratios.len() >= 3 && ratios.windows(2).all(|w| w[1] > w[0]);
    let fine = ladder.last().unwrap().grid.spacing;
    let limit = rep.argmax_limit.ok_or("ladder too short for an argmax limit")?;
    let near = limit.norm() <= 2.0 * fine;
    Ok((
        nonempty.iter().all(|&b| b) && increasing && near,
        format!(
            "O_c nonempty at c = 0.5, 0.3, 0.1: {nonempty:?}; sup ratios {ratios:.3?}; \
             argmax limit |{limit:.2e}| = {:.2e} (<= {:.2e})",
            limit.norm(),
            2.0 * fine
        ),
    ))
}

fn c8_hyperbolic() -> Outcome {
    let sq = square();
    let params = EscapeParams::for_poly(&sq);
    let d = DiskModel::unit();
    let g = GridSpec::square(Complex64::new(0.0, 0.0), 2.0, 0.005).map_err(e)?;
    let band = Band::new(0.01, 0.1).map_err(e)?;
    let b = hyperbolic_bound(&sq, &params, &d, &g, band, 2000, 0).map_err(e)?;
    let guard = band.lo.max(min_guard(g.spacing, d.resolution()));
    let scan = scan_oc(&JuliaGreen::new(&sq), &d, &g, 0.5, guard).map_err(e)?;
    let in_band = scan.flagged.iter().filter(|f| f.dist <= band.hi).count();
    let pass = (1.98..=2.0).contains(&b.b_hat) && (0.985..=1.0).contains(&b.c_bound) && in_band == 0;
    Ok((
        pass,
        format!(
            "b = {:.4} (in [1.98, 2.0]), c_bound = {:.4} (in [0.985, 1.0]), flagged in band at c = 0.5: {in_band}",
            b.b_hat, b.c_bound
        ),
    ))
}

fn c9_prop2(p: &Polynomial, basilica_cloud: &BoundaryCloud, scans: &Scans) -> Outcome {
    let radii = [0.1, 0.05];
    let sq_c = scans.square_c_star.ok_or("no c* for z^2")?;
    let d = DiskModel::unit();
    let circle: Vec<Complex64> = (0..4096)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / 4096.0))
        .collect();
    let sq = square();
    let f_sq = prop2_boundary_check(
        &JuliaGreen::new(&sq),
        &d,
        &circle,
        sq_c / 2.0,
        &radii,
        0.01,
        64,
        2000,
        0,
    )
    .map_err(e)?
    .fraction;

    let b_c = scans.basilica_c_star.ok_or("no c* for z^2 - 1")?;
    let params = EscapeParams::for_poly(p);
    let oracle = CloudDistance::new(p, params, basilica_cloud);
    let f_b = prop2_boundary_check(
        &JuliaGreen::new(p),
        &oracle,
        basilica_cloud.points(),
        b_c / 2.0,
        &radii,
        oracle.resolution(),
        64,
        2000,
        0,
    )
    .map_err(e)?
    .fraction;
    Ok((
        f_sq == 1.0 && f_b >= 0.999,
        format!("fraction {f_sq:.4} for z^2 (= 1), {f_b:.4} for z^2-1 (>= 0.999)"),
    ))
}

fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|f| {
            let f = f.unwrap();
            (
                f.file_name().to_string_lossy().into_owned(),
                std::fs::read(f.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn c10_determinism() -> Outcome {
    let small = "--grid=-2,-1.5,0.02,200,150";
    let runs: [(&str, &[&str]); 10] = [
        ("green", &[small, "--poly=-1,0 0,0 1,0", "--points=200"]),
        ("boundary", &[small, "--poly=-1,0 0,0 1,0", "--depth=10", "--paths=500"]),
        (
            "scan",
            &[
                small,
                "--poly=-1,0 0,0 1,0",
                "--depth=12",
                "--guard=0.1",
                "--max-points=200",
            ],
        ),
        (
            "fit",
            &[
                small,
                "--poly=-1,0 0,0 1,0",
                "--depth=12",
                "--band-lo=0.1",
                "--samples=300",
            ],
        ),
        ("obstruct", &["--model=disk", "--scales=3"]),
        ("envelope", &["--grid=-2.1,-2.1,0.05,84,84", "--discs=500"]),
        ("relation", &["--grid=-2.2,-2.2,0.04,110,110"]),
        ("corona", &["--grid=-2.2,-2.2,0.04,110,110", "--model=disk", "--a=0.69"]),
        ("hyperbolic", &[small, "--depth=10", "--samples=300"]),
        ("counterexample", &["--windows=4", "--scales=3"]),
    ];
    let tmp = tempfile::tempdir().map_err(e)?;
    let mut differing = Vec::new();
    for (sub, args) in runs {
        let mut outputs = Vec::new();
        for workers in [1, 4] {
            let dir = tmp.path().join(format!("{sub}-{workers}"));
            let status = Command::new(env!("CARGO_BIN_EXE_lsjulia"))
                .arg(sub)
                .args(args)
                .arg(format!("--workers={workers}"))
                .arg("--seed=7")
                .arg("--out")
                .arg(&dir)
                .status()
                .map_err(e)?;
            if !status.success() {
                return Err(format!("{sub} exited with {status}"));
            }
            outputs.push(read_dir_bytes(&dir));
        }
        if outputs[0] != outputs[1] {
            differing.push(sub);
        }
    }
    Ok((
        differing.is_empty(),
        format!("10 subcommands at --workers 1 and 4; differing outputs: {differing:?}"),
    ))
}

fn main() {
    let mut failed = 0;
    let mut report = |n: usize, name: &str, outcome: Outcome| {
        let (pass, detail) = outcome.unwrap_or_else(|err| (false, format!("error: {err}")));
        failed += usize::from(!pass);
        println!(
            "{} criterion {n:>2} {name}: {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
    };
    report(1, "analytic Green function", c1_analytic_green());
    report(2, "invariance", c2_invariance());
    report(3, "equidistribution", c3_equidistribution());
    report(4, "relation on level sets", c4_relation());
    report(5, "disc upper bound", c5_poletsky());
    let p = basilica();
    let mut scans = Scans {
        basilica_c_star: None,
        square_c_star: None,
    };
    let bc = cloud(&p, 19);
    report(
        6,
        "c* scan",
        bc.as_ref()
            .map_err(Clone::clone)
            .and_then(|bc| c6_main_theorem(&p, bc, &mut scans)),
    );
    report(7, "tangent disks", c7_counterexample());
    report(8, "hyperbolic bound", c8_hyperbolic());
    report(
        9,
        "boundary balls",
        bc.as_ref()
            .map_err(Clone::clone)
            .and_then(|bc| c9_prop2(&p, bc, &scans)),
    );
    report(10, "determinism", c10_determinism());
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
