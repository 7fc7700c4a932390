use std::fs;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::Result;
use lsjulia_core::boundary::{
    default_base_point, equidistribution_report, preimage_tree, BoundaryCloud, CloudDistance, CloudMeta, CloudMode,
    DistanceOracle,
};
use lsjulia_core::dyncore::{hyperbolicity_certificate, EscapeParams, Polynomial};
use lsjulia_core::envelope::{
    check_relation_level_sets, corona_and_delta, dilate, epsilon_for_level, relax_with, sublevel_region,
    PoletskyContext, PoletskyEstimate, PoletskyOptions, RegionMask, RelaxOptions, RelaxStats,
};
use lsjulia_core::green::{check_invariance, green_field, laplacian_measure, DEFAULT_SERIES_TERMS};
use lsjulia_core::grid::GridSpec;
use lsjulia_core::io;
use lsjulia_core::lsgate::counterexample::{circle_ladder, cusp_axis_points, cusp_ladder, cusp_scan};
use lsjulia_core::lsgate::{
    find_c_star, fit_exponent, fit_points, hyperbolic_bound, min_guard, obstruction_scan, prop2_boundary_check,
    scan_oc, slow_growth_check, verdict_stability, Band, GreenSource, JuliaGreen, ObstructionScale, Verdict,
};
use lsjulia_core::models::{DiskModel, TangentDisks};
use lsjulia_core::parallel::substream;
use lsjulia_core::{Complex64, Error, TOOL_VERSION};
use rand::Rng;
use serde::Serialize;

use crate::args::*;

/// Output directory of one run; records every file for the manifest.
struct Run {
    dir: PathBuf,
    outputs: Vec<String>,
}

impl Run {
    fn new(common: &Common) -> Result<Self> {
        fs::create_dir_all(&common.out)?;
        Ok(Run {
            dir: common.out.clone(),
            outputs: Vec::new(),
        })
    }

    fn file(
        &mut self,
        name: &str,
        write: impl FnOnce(&mut BufWriter<fs::File>) -> lsjulia_core::Result<()>,
    ) -> Result<()> {
        let mut w = io::create(&self.dir.join(name))?;
        write(&mut w)?;
        w.flush()?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        io::write_json(&self.dir.join(name), value)?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    fn finish<C: Serialize>(mut self, command: &str, config: &C) -> Result<()> {
        #[derive(Serialize)]
        struct Manifest<'a, C> {
            tool: &'a str,
            version: &'a str,
            command: &'a str,
            config: &'a C,
            outputs: &'a [String],
        }
        let outputs = std::mem::take(&mut self.outputs);
        let m = Manifest {
            tool: "lsjulia",
            version: TOOL_VERSION,
            command,
            config,
            outputs: &outputs,
        };
        io::write_json(&self.dir.join("manifest.json"), &m)?;
        Ok(())
    }
}

struct Julia {
    poly: Polynomial,
    params: EscapeParams,
}

fn julia(common: &Common) -> Result<Julia> {
    let poly: Polynomial = common.poly.parse()?;
    let params = EscapeParams::with_iterations(&poly, common.max_iterations);
    Ok(Julia { poly, params })
}

fn grid(common: &Common) -> Result<GridSpec> {
    Ok(common.grid.parse()?)
}

fn build_cloud(j: &Julia, depth: usize, paths: Option<usize>, seed: u64) -> Result<BoundaryCloud> {
    let mode = paths.map_or(CloudMode::FullTree, |paths| CloudMode::RandomPaths { paths });
    Ok(preimage_tree(&j.poly, default_base_point(&j.poly), depth, mode, seed)?)
}

fn circle(center: Complex64, n: usize) -> impl Iterator<Item = Complex64> {
    (0..n).map(move |k| center + Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
}

/// Green source, distance oracle and boundary sample of the chosen compact.
struct Compact<'a> {
    source: &'a dyn GreenSource,
    oracle: &'a dyn DistanceOracle,
    boundary: &'a [Complex64],
    cloud: Option<CloudMeta>,
}

fn with_model<R>(j: &Julia, m: &ModelArgs, seed: u64, f: impl FnOnce(Compact<'_>) -> Result<R>) -> Result<R> {
    match m.model {
        Model::Julia => {
            let cloud = build_cloud(j, m.depth, m.paths, seed)?;
            let source = JuliaGreen::with_params(&j.poly, j.params, DEFAULT_SERIES_TERMS);
            let oracle = CloudDistance::new(&j.poly, j.params, &cloud);
            f(Compact {
                source: &source,
                oracle: &oracle,
                boundary: cloud.points(),
                cloud: Some(cloud.meta()),
            })
        }
        Model::Disk => {
            let d = DiskModel::unit();
            let boundary: Vec<Complex64> = circle(Complex64::new(0.0, 0.0), 4096).collect();
            f(Compact {
                source: &d,
                oracle: &d,
                boundary: &boundary,
                cloud: None,
            })
        }
        Model::TangentDisks => {
            let t = TangentDisks;
            let boundary: Vec<Complex64> = circle(Complex64::new(-1.0, 0.0), 2048)
                .chain(circle(Complex64::new(1.0, 0.0), 2048))
                .collect();
            f(Compact {
                source: &t,
                oracle: &t,
                boundary: &boundary,
                cloud: None,
            })
        }
    }
}

pub fn run(command: &Command) -> Result<()> {
    match command {
        Command::Green(a) => green(a),
        Command::Boundary(a) => boundary(a),
        Command::Scan(a) => scan(a),
        Command::Fit(a) => fit(a),
        Command::Obstruct(a) => obstruct(a),
        Command::Envelope(a) => envelope(a),
        Command::Relation(a) => relation(a),
        Command::Corona(a) => corona(a),
        Command::Hyperbolic(a) => hyperbolic(a),
        Command::Counterexample(a) => counterexample(a),
    }
}

fn green(a: &GreenArgs) -> Result<()> {
    let j = julia(&a.common)?;
    let g = grid(&a.common)?;
    let mut run = Run::new(&a.common)?;
    let field = green_field(&j.poly, &g, &j.params, DEFAULT_SERIES_TERMS);
    run.file("field.csv", |w| io::write_field_csv(w, &field))?;
    run.file("field.pgm", |w| io::write_field_pgm(w, &field))?;
    let pts: Vec<Complex64> = (0..a.points)
        .map(|i| {
            let mut rng = substream(a.common.seed, i as u64);
            Complex64::new(rng.random_range(g.x0..g.x_hi()), rng.random_range(g.y0..g.y_hi()))
        })
        .collect();
    let inv = check_invariance(&j.poly, &pts, &j.params, DEFAULT_SERIES_TERMS, a.tol);
    run.json("invariance.json", &inv)?;
    run.finish("green", a)
}

fn boundary(a: &BoundaryArgs) -> Result<()> {
    let j = julia(&a.common)?;
    let g = grid(&a.common)?;
    let mut run = Run::new(&a.common)?;
    let cloud = build_cloud(&j, a.depth, a.paths, a.common.seed)?;
    run.file("cloud.csv", |w| io::write_points_csv(w, cloud.points()))?;
    run.json("cloud.json", &cloud.meta())?;
    let lm = laplacian_measure(&green_field(&j.poly, &g, &j.params, DEFAULT_SERIES_TERMS))?;
    #[derive(Serialize)]
    struct Out {
        raw_mass: f64,
        clamped_negative: f64,
        #[serde(flatten)]
        report: lsjulia_core::boundary::EquidistributionReport,
    }
    run.json(
        "equidistribution.json",
        &Out {
            raw_mass: lm.raw_mass,
            clamped_negative: lm.clamped_negative,
            report: equidistribution_report(&cloud, &lm.measure, a.max_order),
        },
    )?;
    run.finish("boundary", a)
}

fn guard_for(common: &Common, g: &GridSpec, oracle: &dyn DistanceOracle) -> f64 {
    common
        .guard
        .unwrap_or_else(|| min_guard(g.spacing, oracle.resolution()))
}

fn scan(a: &ScanArgs) -> Result<()> {
    let j = julia(&a.common)?;
    let g = grid(&a.common)?;
    let mut run = Run::new(&a.common)?;
    with_model(&j, &a.model, a.common.seed, |m| {
        if let Some(meta) = &m.cloud {
            run.json("cloud.json", meta)?;
        }
        let guard = guard_for(&a.common, &g, m.oracle);
        let rep = scan_oc(m.source, m.oracle, &g, a.common.c, guard)?;
        run.json("scan.json", &rep)?;
        run.file("flagged.csv", |w| {
            writeln!(w, "re,im,green,dist,rhs")?;
            for f in &rep.flagged {
                writeln!(w, "{},{},{},{},{}", f.z.re, f.z.im, f.green, f.dist, f.rhs)?;
            }
            Ok(())
        })?;
        let cs = find_c_star(m.source, m.oracle, &g, guard, &a.common.ladder)?;
        run.json("c_star.json", &cs)?;
        if let Some(c_star) = cs.c_star {
            run.json(
                "stability.json",
                &verdict_stability(m.source, m.oracle, &g, c_star, guard)?,
            )?;
            let p2 = prop2_boundary_check(
                m.source,
                m.oracle,
                m.boundary,
                c_star / 2.0,
                &a.radii,
                m.oracle.resolution(),
                a.ball_samples,
                a.max_points,
                a.common.seed,
            )?;
            run.json("prop2.json", &p2)?;
        }
        if a.model.model == Model::Julia {
            let flagged: Vec<Complex64> = rep.flagged.iter().map(|f| f.z).collect();
            let sg = slow_growth_check(&j.poly, m.source, m.oracle, &flagged, a.common.c, guard, a.max_steps)?;
            run.json("slow_growth.json", &sg)?;
        }
        Ok(())
    })?;
    run.finish("scan", a)
}

fn fit(a: &FitArgs) -> Result<()> {
    let j = julia(&a.common)?;
    let g = grid(&a.common)?;
    let band = Band::new(a.band.band_lo, a.band.band_hi)?;
    let mut run = Run::new(&a.common)?;
    with_model(&j, &a.model, a.common.seed, |m| {
        let fit = fit_exponent(m.source, m.oracle, &g, band, a.band.samples, a.common.seed)?;
        run.json("fit.json", &fit)
    })?;
    run.finish("fit", a)
}

fn obstruct(a: &ObstructArgs) -> Result<()> {
    let j = julia(&a.common)?;
    let g = grid(&a.common)?;
    let mut run = Run::new(&a.common)?;
    let ladder: Vec<ObstructionScale> = match a.model.model {
        Model::TangentDisks => cusp_ladder(a.scales),
        Model::Disk => circle_ladder(a.scales),
        Model::Julia => {
            let mut grid_k = g;
            let mut out = Vec::with_capacity(a.scales);
            for k in 0..a.scales {
                let s = 0.5f64.powi(k as i32);
                out.push(ObstructionScale {
                    grid: grid_k,
                    band: Band::new(a.band_lo * s, a.band_hi * s)?,
                });
                grid_k = grid_k.refined();
            }
            out
        }
    };
    with_model(&j, &a.model, a.common.seed, |m| {
        run.json("obstruct.json", &obstruction_scan(m.source, m.oracle, &ladder)?)
    })?;
    run.finish("obstruct", a)
}

fn relax_opts(r: &RelaxArgs) -> RelaxOptions {
    RelaxOptions {
        tol: r.tol,
        max_sweeps: r.max_sweeps,
        omega: None,
    }
}

fn parse_points(s: &str) -> Result<Vec<Complex64>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let xy: Vec<&str> = p.split(',').map(str::trim).collect();
            let bad = || Error::Parse(format!("point `{p}` is not `re,im`"));
            if xy.len() != 2 {
                return Err(bad().into());
            }
            Ok(Complex64::new(
                xy[0].parse().map_err(|_| bad())?,
                xy[1].parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

fn envelope(a: &EnvelopeArgs) -> Result<()> {
    let g = grid(&a.common)?;
    let points = parse_points(&a.at)?;
    let mut run = Run::new(&a.common)?;
    let outer = a.outer;
    let region = match a.region {
        RegionKind::Annulus => {
            let inner = a.inner;
            RegionMask::from_fn(g, |z| z.norm() <= inner, |z| z.norm() < outer)?
        }
        RegionKind::TangentDisks => RegionMask::from_fn(g, |z| TangentDisks.contains(z), |z| z.norm() < outer)?,
        RegionKind::Julia => {
            let j = julia(&a.common)?;
            sublevel_region(&green_field(&j.poly, &g, &j.params, DEFAULT_SERIES_TERMS), a.a)?
        }
    };
    let rel = relax_with(&region, &relax_opts(&a.relax), None)?;
    run.file("region.pgm", |w| {
        io::write_mask_pgm(w, &g, &region.a_mask, &region.u_mask)
    })?;
    run.file("relative.csv", |w| io::write_field_csv(w, &rel.field))?;
    #[derive(Serialize)]
    struct RelaxOut {
        a_cells: usize,
        u_cells: usize,
        stats: RelaxStats,
    }
    run.json(
        "relax.json",
        &RelaxOut {
            a_cells: region.a_cells(),
            u_cells: region.u_cells(),
            stats: rel.stats,
        },
    )?;
    #[derive(Serialize)]
    struct DiscOut {
        relaxation: Option<f64>,
        #[serde(flatten)]
        estimate: PoletskyEstimate,
    }
    let ctx = PoletskyContext::new(&region);
    let opts = PoletskyOptions {
        n_discs: a.discs,
        max_degree: a.max_degree,
        radius_scale: a.radius_scale,
        seed: a.common.seed,
    };
    let estimates = points
        .iter()
        .map(|&z| {
            Ok(DiscOut {
                relaxation: rel.field.sample(z),
                estimate: ctx.estimate(z, &opts)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    run.json("poletsky.json", &estimates)?;
    run.finish("envelope", a)
}

fn relation(a: &RelationArgs) -> Result<()> {
    let j = julia(&a.common)?;
    let g = grid(&a.common)?;
    let mut run = Run::new(&a.common)?;
    let budget = a.budget.unwrap_or(5.0 * g.spacing);
    let (rep, rel) = check_relation_level_sets(&j.poly, &j.params, a.a, &g, budget, &relax_opts(&a.relax))?;
    run.json("relation.json", &rep)?;
    run.file("relative.csv", |w| io::write_field_csv(w, &rel))?;
    run.finish("relation", a)
}

fn corona(a: &CoronaArgs) -> Result<()> {
    let j = julia(&a.common)?;
    let g = grid(&a.common)?;
    if a.model.model == Model::TangentDisks {
        return Err(Error::Precondition("the corona needs a polynomial; use --model julia or disk".into()).into());
    }
    let mut run = Run::new(&a.common)?;
    with_model(&j, &a.model, a.common.seed, |m| {
        let (level, rep) = corona_and_delta(&j.poly, &j.params, a.a, a.ell, &g, m.oracle, &relax_opts(&a.relax))?;
        let epsilon = epsilon_for_level(a.common.c);
        #[derive(Serialize)]
        struct Out {
            #[serde(flatten)]
            report: lsjulia_core::envelope::CoronaReport,
            c: f64,
            epsilon: f64,
            k_epsilon_cells: usize,
        }
        let k_epsilon_cells = dilate(m.oracle, &g, epsilon).iter().filter(|&&b| b).count();
        run.json(
            "corona.json",
            &Out {
                report: rep,
                c: a.common.c,
                epsilon,
                k_epsilon_cells,
            },
        )?;
        run.file("levels.pgm", |w| {
            io::write_mask_pgm(w, &g, &level.u_a_over_d, &level.u_a)
        })
    })?;
    run.finish("corona", a)
}

fn hyperbolic(a: &HyperbolicArgs) -> Result<()> {
    let j = julia(&a.common)?;
    let g = grid(&a.common)?;
    let band = Band::new(a.band_lo, a.band_hi)?;
    let mut run = Run::new(&a.common)?;
    let cert = hyperbolicity_certificate(&j.poly, &j.params)?;
    with_model(&j, &a.model, a.common.seed, |m| {
        let bound = hyperbolic_bound(&j.poly, &j.params, m.oracle, &g, band, a.samples, a.common.seed)?;
        let guard = band.lo.max(guard_for(&a.common, &g, m.oracle));
        let scan = scan_oc(m.source, m.oracle, &g, a.common.c, guard)?;
        let flagged_in_band = scan.flagged.iter().filter(|f| f.dist <= band.hi).count();
        #[derive(Serialize)]
        struct CrossCheck {
            c: f64,
            guard: f64,
            flagged_in_band: usize,
            verdict: Verdict,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            certificate: &'a lsjulia_core::dyncore::HyperbolicityReport,
            bound: lsjulia_core::lsgate::HyperbolicBound,
            cross_check: CrossCheck,
        }
        run.json(
            "hyperbolic.json",
            &Out {
                certificate: &cert,
                bound,
                cross_check: CrossCheck {
                    c: a.common.c,
                    guard,
                    flagged_in_band,
                    verdict: if flagged_in_band == 0 {
                        Verdict::Empty
                    } else {
                        Verdict::Nonempty
                    },
                },
            },
        )
    })?;
    run.finish("hyperbolic", a)
}

fn counterexample(a: &CounterexampleArgs) -> Result<()> {
    let mut run = Run::new(&a.common)?;
    #[derive(Serialize)]
    struct LevelOut {
        c: f64,
        windows: usize,
        spacing: f64,
        flagged: usize,
        verdict: Verdict,
        /// Flagged cell closest to the origin.
        closest: Option<Complex64>,
    }
    let levels = a
        .levels
        .iter()
        .map(|&c| {
            let s = cusp_scan(c, a.windows)?;
            Ok(LevelOut {
                c,
                windows: s.windows,
                spacing: s.report.grid.spacing,
                flagged: s.report.flagged.len(),
                verdict: s.report.verdict,
                closest: s
                    .report
                    .flagged
                    .iter()
                    .map(|f| f.z)
                    .min_by(|p, q| p.norm().total_cmp(&q.norm())),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let t = TangentDisks;
    let d = DiskModel::unit();
    let cusp = obstruction_scan(&t, &t, &cusp_ladder(a.scales))?;
    let control = obstruction_scan(&d, &d, &circle_ladder(a.scales))?;
    let coarse = Band::new(0.05, 0.2)?;
    let fine = Band::new(0.0125, 0.05)?;
    let axis = [coarse, fine]
        .iter()
        .map(|&b| Ok((b, fit_points(&t, &t, &cusp_axis_points(b, 200), b)?.sup_ratio)))
        .collect::<Result<Vec<_>>>()?;
    #[derive(Serialize)]
    struct Out {
        levels: Vec<LevelOut>,
        cusp_ladder: lsjulia_core::lsgate::ObstructionReport,
        circle_ladder: lsjulia_core::lsgate::ObstructionReport,
        axis_sup_ratio: Vec<(Band, f64)>,
    }
    run.json(
        "counterexample.json",
        &Out {
            levels,
            cusp_ladder: cusp,
            circle_ladder: control,
            axis_sup_ratio: axis,
        },
    )?;
    run.finish("counterexample", a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_lists() {
        let p = parse_points("1,0; -0.5,2").unwrap();
        assert_eq!(p, vec![Complex64::new(1.0, 0.0), Complex64::new(-0.5, 2.0)]);
        assert!(parse_points("1").is_err());
    }
}
