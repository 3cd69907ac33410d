use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::Args;
use thermal_jcm::analysis::{
    log_beta_grid, reflection_asymmetry, sample_trajectory, sample_trajectory_from, scale_invariance_check,
    weyl_discrepancy, weyl_sum_closed, weyl_sum_direct, zero_scan, PointCloud,
};
use thermal_jcm::diophantine::{
    blue_curves, build_candidate_set, convergents, expand_surd, filter_candidates, Arithmetic, CandidateSet,
    CandidateSpec, FilterSpec,
};
use thermal_jcm::oracle::{evolve_and_trace, BasisOrdering, FockTruncation};
use thermal_jcm::output::{
    write_curves, write_distances, write_frames, write_hits, write_report, write_scatter_svg, write_weyl, ReportRow,
};
use thermal_jcm::{BlochVector, ModelParams, ThermalSeries, TrajectoryFrame};

use crate::config::Resolved;

pub struct Context {
    pub cfg: Resolved,
    pub out: PathBuf,
}

impl Context {
    /// Creates the output directory and records the resolved settings in it.
    pub fn new(cfg: Resolved, out: PathBuf) -> anyhow::Result<Self> {
        fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
        fs::write(out.join("resolved-config.toml"), cfg.to_toml())?;
        Ok(Context { cfg, out })
    }

    fn create(&self, name: &str) -> anyhow::Result<BufWriter<File>> {
        let path = self.out.join(name);
        Ok(BufWriter::new(
            File::create(&path).with_context(|| format!("creating {}", path.display()))?,
        ))
    }

    fn done(&self, name: &str) {
        println!("wrote {}", self.out.join(name).display());
    }
}

pub fn simulate(ctx: &Context) -> anyhow::Result<ExitCode> {
    let c = &ctx.cfg;
    let params = c.params()?;
    let frames = match c.t_max {
        Some(t_max) => continuous(&params, c, t_max)?,
        None => sample_trajectory(&params, &c.plan(), &c.series())?,
    };
    let mut w = ctx.create("frames.csv")?;
    write_frames(&mut w, &frames)?;
    w.flush()?;
    ctx.done("frames.csv");
    let cloud = PointCloud::from_frames(&frames);
    let title = format!("l = {}, beta = {}, (S_x, S_z)", c.l, c.beta);
    let mut w = ctx.create("trajectory.svg")?;
    write_scatter_svg(&mut w, &title, &cloud.points, 600)?;
    w.flush()?;
    ctx.done("trajectory.svg");
    Ok(ExitCode::SUCCESS)
}

fn continuous(params: &ModelParams, c: &Resolved, t_max: f64) -> anyhow::Result<Vec<TrajectoryFrame>> {
    anyhow::ensure!(t_max > 0.0 && t_max.is_finite(), "t_max must be finite and > 0");
    anyhow::ensure!(c.n_points > 0, "n_points must be >= 1 with t_max");
    let series = ThermalSeries::new(params, &c.series())?;
    let step = t_max / c.n_points as f64;
    Ok((0..=c.n_points)
        .map(|n| {
            let t = n as f64 * step;
            TrajectoryFrame {
                n,
                t,
                bloch: series.bloch_from_plus_x(t),
            }
        })
        .collect())
}

pub fn scan(ctx: &Context) -> anyhow::Result<ExitCode> {
    let c = &ctx.cfg;
    let grid = log_beta_grid(c.beta_points, c.beta_min, c.beta_max)?;
    let hits = zero_scan(&c.params()?, &c.plan(), &c.schedule(), &grid, &c.series())?;
    let mut w = ctx.create("hits.csv")?;
    write_hits(&mut w, &hits)?;
    w.flush()?;
    ctx.done("hits.csv");
    // log(beta) mapped onto [-1, 1] horizontally.
    let (a, b) = (c.beta_min.ln(), c.beta_max.ln());
    let span = if b > a { b - a } else { 1.0 };
    let pts: Vec<[f64; 2]> = hits.iter().map(|h| [2.0 * (h.beta.ln() - a) / span - 1.0, h.sx]).collect();
    let mut w = ctx.create("hits.svg")?;
    write_scatter_svg(&mut w, &format!("l = {}: (log beta, S_x) where |S_z| < eps", c.l), &pts, 600)?;
    w.flush()?;
    ctx.done("hits.svg");
    println!("{} hits over {} beta values", hits.len(), grid.len());
    Ok(ExitCode::SUCCESS)
}

pub fn weyl(ctx: &Context) -> anyhow::Result<ExitCode> {
    let c = &ctx.cfg;
    let r = weyl_discrepancy(&c.plan(), c.m_max)?;
    let mut w = ctx.create("weyl.csv")?;
    write_weyl(&mut w, &r)?;
    w.flush()?;
    ctx.done("weyl.csv");
    let terms = c.n_points + 1;
    let mut closed_diff: f64 = 0.0;
    for &(m, _) in &r.magnitudes {
        let d = weyl_sum_direct(r.step, terms, m) - weyl_sum_closed(r.step, terms, m)?;
        closed_diff = closed_diff.max(d.norm() / terms as f64);
    }
    let rows = vec![
        row("max_magnitude", r.max, r.envelope, r.max <= r.envelope * (1.0 + 1e-9)),
        row("direct_vs_closed", closed_diff, 1e-12, closed_diff <= 1e-12),
    ];
    report(ctx, &rows)?;
    println!("max |(1/(N+1)) sum exp(i m x_n)| = {:.3e} (envelope {:.3e})", r.max, r.envelope);
    Ok(ExitCode::SUCCESS)
}

pub fn scale_check(ctx: &Context) -> anyhow::Result<ExitCode> {
    let c = &ctx.cfg;
    let params = c.params()?;
    let plan = c.plan().with_scale(c.s.unwrap_or(1.2));
    let r = scale_invariance_check(&params, &plan, &c.series(), c.bins, c.threshold, c.control_beta)?;
    let base_plan = c.plan();
    let base_plan = thermal_jcm::analysis::SamplingPlan { s: None, ..base_plan };
    let plus = PointCloud::from_frames(&sample_trajectory(&params, &base_plan, &c.series())?);
    let minus = PointCloud::from_frames(&sample_trajectory_from(
        &BlochVector::MINUS_X,
        &params,
        &base_plan,
        &c.series(),
    )?);
    let asym = reflection_asymmetry(&plus, c.bins)?;
    let union = reflection_asymmetry(&plus.union(&minus), c.bins)?;
    let rows = vec![
        ("scale_distance".to_string(), r.distance, r.pass),
        ("control_distance".to_string(), r.control_distance, r.control_pass),
        ("reflection_asymmetry".to_string(), asym, asym < c.symmetry_threshold),
        ("dual_start_asymmetry".to_string(), union, union < c.symmetry_threshold),
    ];
    let mut w = ctx.create("distances.csv")?;
    write_distances(&mut w, &rows)?;
    w.flush()?;
    ctx.done("distances.csv");
    for (name, v, pass) in &rows {
        println!("{name:>22} = {v:.4} {}", if *pass { "pass" } else { "fail" });
    }
    println!("scale threshold {:.4}, symmetry threshold {:.4}", c.threshold, c.symmetry_threshold);
    Ok(ExitCode::SUCCESS)
}

#[derive(Debug, Args)]
pub struct CfArgs {
    /// Radicand.
    #[arg(long)]
    pub m: u64,
    /// Divisor.
    #[arg(long, default_value_t = 1)]
    pub k: u64,
    /// Highest index.
    #[arg(long, default_value_t = 14)]
    pub count: usize,
}

pub fn cf(args: &CfArgs) -> anyhow::Result<ExitCode> {
    let cf = expand_surd(args.m, args.k, args.count)?;
    let q: Vec<String> = cf.quotients.iter().map(|a| a.to_string()).collect();
    let mut out = std::io::stdout().lock();
    let written = (|| -> std::io::Result<()> {
        writeln!(out, "# sqrt({})/{} = [{}]{}", args.m, args.k, q.join(", "), if cf.terminates { "" } else { " ..." })?;
        writeln!(out, "index,p,q")?;
        for c in convergents(&cf) {
            writeln!(out, "{},{},{}", c.index, c.p, c.q)?;
        }
        out.flush()
    })();
    match written {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(ExitCode::SUCCESS),
    }
}

fn write_set(ctx: &Context, stem: &str, set: &CandidateSet) -> anyhow::Result<()> {
    let txt = format!("{stem}.txt");
    let json = format!("{stem}.provenance.json");
    fs::write(ctx.out.join(&txt), set.to_lines())?;
    fs::write(ctx.out.join(&json), set.provenance_json())?;
    ctx.done(&txt);
    ctx.done(&json);
    Ok(())
}

pub fn candidates(ctx: &Context) -> anyhow::Result<ExitCode> {
    let set = build_candidate_set(&ctx.cfg.candidates()?)?;
    write_set(ctx, "candidates", &set)?;
    println!("|M| = {}", set.len());
    Ok(ExitCode::SUCCESS)
}

fn filtered(c: &Resolved) -> anyhow::Result<CandidateSet> {
    let mset = build_candidate_set(&c.candidates()?)?;
    let params = ModelParams::new(c.l, c.g, c.omega, c.filter_beta)?;
    Ok(filter_candidates(&mset, &params, &c.filter())?)
}

pub fn filter(ctx: &Context) -> anyhow::Result<ExitCode> {
    let set = filtered(&ctx.cfg)?;
    write_set(ctx, "filtered", &set)?;
    let spec = ctx.cfg.filter();
    print!("|M~| = {} (beta = {}, eps = {}, {:?} arithmetic)", set.len(), spec.beta, spec.epsilon, spec.arithmetic);
    if spec.arithmetic == Arithmetic::Certified {
        println!("; |L3(t_q)| < {:.4} for every member", spec.implied_sz_bound(ctx.cfg.l));
    } else {
        println!();
    }
    Ok(ExitCode::SUCCESS)
}

pub fn curves(ctx: &Context) -> anyhow::Result<ExitCode> {
    let c = &ctx.cfg;
    let set = filtered(c)?;
    let grid = log_beta_grid(c.beta_points, c.beta_min, c.beta_max)?
        .into_iter()
        .map(|b| ModelParams::new(c.l, c.g, c.omega, b))
        .collect::<thermal_jcm::Result<Vec<_>>>()?;
    let pts = blue_curves(&set, &grid, c.time_divisor_squared, &c.series())?;
    let mut w = ctx.create("curves.csv")?;
    write_curves(&mut w, &pts)?;
    w.flush()?;
    ctx.done("curves.csv");
    Ok(ExitCode::SUCCESS)
}

fn row(check: &str, value: f64, threshold: f64, pass: bool) -> ReportRow {
    ReportRow {
        check: check.to_string(),
        value,
        threshold,
        pass,
    }
}

fn report(ctx: &Context, rows: &[ReportRow]) -> anyhow::Result<()> {
    let mut w = ctx.create("report.csv")?;
    write_report(&mut w, rows)?;
    w.flush()?;
    ctx.done("report.csv");
    Ok(())
}

fn oracle_rows(c: &Resolved, betas: &[f64], times: &[f64]) -> anyhow::Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    let starts = [BlochVector::PLUS_X, BlochVector::new(0.3, -0.4, 0.5)];
    for l in 1..=4 {
        for &beta in betas {
            let p = ModelParams::new(l, c.g, c.omega, beta)?;
            let series = ThermalSeries::new(&p, &c.series())?;
            let trunc = FockTruncation::for_params(&p, c.oracle_tolerance)?;
            let mut worst: f64 = 0.0;
            for &t in times {
                for s0 in &starts {
                    let o = evolve_and_trace(s0, &p, t, &trunc, BasisOrdering::AtomMajor)?;
                    worst = worst.max(series.bloch(s0, t).max_abs_diff(&o));
                }
            }
            rows.push(row(&format!("oracle_l{l}_beta{beta}"), worst, 1e-8, worst <= 1e-8));
        }
    }
    Ok(rows)
}

pub fn oracle_verify(ctx: &Context) -> anyhow::Result<ExitCode> {
    let rows = oracle_rows(&ctx.cfg, &[0.5, 1.0, 2.0, 5.0], &[0.5, 1.0, 5.0, 20.0, 40.0])?;
    report(ctx, &rows)?;
    finish(&rows)
}

fn finish(rows: &[ReportRow]) -> anyhow::Result<ExitCode> {
    let failed: Vec<&str> = rows.iter().filter(|r| !r.pass).map(|r| r.check.as_str()).collect();
    if failed.is_empty() {
        println!("all {} checks passed", rows.len());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("{} of {} checks failed: {}", failed.len(), rows.len(), failed.join(", "));
        Ok(ExitCode::from(2))
    }
}

/// Published reference data the quick self-check compares against.
const CF_GOLDENS: [(u64, usize, u64, u64); 6] = [
    (3, 12, 3691, 2131),
    (3, 13, 5042, 2911),
    (3, 14, 13775, 7953),
    (2, 12, 47321, 33461),
    (2, 13, 114243, 80782),
    (2, 14, 275807, 195025),
];
const SET_SIZES: [(u32, usize, usize); 4] = [(2, 243, 15), (1, 91, 24), (4, 323, 17), (3, 2001, 15)];

pub fn verify(ctx: &Context) -> anyhow::Result<ExitCode> {
    let c = &ctx.cfg;
    let mut rows = Vec::new();
    for (m, idx, p, q) in CF_GOLDENS {
        let conv = convergents(&expand_surd(m, 1, idx)?);
        let ok = conv[idx].p == p.into() && conv[idx].q == q.into();
        rows.push(row(&format!("cf_sqrt{m}_{idx}"), if ok { 0.0 } else { 1.0 }, 0.0, ok));
    }
    for (l, m_size, f_size) in SET_SIZES {
        let mset = build_candidate_set(&CandidateSpec::published(l).expect("published l"))?;
        rows.push(row(&format!("candidates_l{l}"), mset.len() as f64, m_size as f64, mset.len() == m_size));
        let eps = FilterSpec::published_epsilon(l).expect("published l");
        let spec = FilterSpec::new(2.0, eps).with_arithmetic(Arithmetic::Float64);
        let got = filter_candidates(&mset, &ModelParams::normalized(l, 2.0)?, &spec)?.len();
        rows.push(row(&format!("filtered_float64_l{l}"), got as f64, f_size as f64, got == f_size));
    }
    rows.extend(oracle_rows(c, &[0.5, 2.0], &[1.0, 20.0])?);
    let terms = 100_001;
    let mut diff: f64 = 0.0;
    for m in 1..=8 {
        diff = diff.max((weyl_sum_direct(4.0, terms, m) - weyl_sum_closed(4.0, terms, m)?).norm() / terms as f64);
    }
    rows.push(row("weyl_direct_vs_closed", diff, 1e-12, diff <= 1e-12));
    report(ctx, &rows)?;
    finish(&rows)
}
