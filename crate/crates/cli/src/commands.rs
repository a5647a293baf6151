use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand};
use serde::Serialize;

use rimetric::hajlasz::{
    canonical_gradient, canonical_gradient_with, is_s_gradient, minimal_gradient, verify_gradient, Certificate,
    DistancePowers, GradientProblem, Objective, SolverOptions,
};
use rimetric::space::generate::{appendix_plane_sample_labeled, random_cloud, uniform_grid};
use rimetric::space::{
    almost_continuity_check, doubling_check, lower_bound_probe, AnalyticSpace, MetricMeasureSpace,
};
use rimetric::verify::{
    converse_probe, embedding_report, log_grid, oscillation_inequality_report, ConstantSpread, ConverseSpace,
    EmbeddingCase, OscillationParams, ReportIds,
};
use rimetric::{Pair, Space, Spec};

use crate::config::{probe_centres, RunConfig, TGridRule};
use crate::io::{self, LoadedSpace, SpaceFile};

/// Result of a command: whether its asserted checks held, and a one-line summary.
pub struct Outcome {
    pub passed: bool,
    pub summary: String,
}

impl Outcome {
    fn pass(summary: String) -> Self {
        Self { passed: true, summary }
    }
}

/// Bound on the spread of measured constants across a probe family.
const SPREAD_LIMIT: f64 = 10.0;
/// Centres probed when measuring growth and almost continuity.
const MAX_CENTRES: usize = 4096;

fn pair_for(space: &Space, f_path: &Path, g_path: Option<&PathBuf>, s: f64, tol: f64) -> Result<Result<Pair, String>> {
    let f = space.sample(io::load_function(f_path, space.len())?)?;
    match g_path {
        None => Ok(Ok(canonical_gradient(space, &f, s)?)),
        Some(p) => {
            let g = space.sample(io::load_function(p, space.len())?)?;
            let check = is_s_gradient(space, &f, &g, s, tol)?;
            if !check.ok {
                return Ok(Err(format!(
                    "{} is not an s-gradient of {} (s = {s}): violation {:e} at {:?}",
                    p.display(),
                    f_path.display(),
                    check.max_violation,
                    check.witness
                )));
            }
            Ok(Ok(verify_gradient(space, f, g, s, tol)?))
        }
    }
}

// ---------------------------------------------------------------- space-check

#[derive(Debug, Args)]
pub struct SpaceCheckArgs {
    #[arg(long)]
    pub space: PathBuf,
    /// Lower-growth exponent to probe.
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    /// Almost-continuity constant to certify.
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    /// Fail unless the growth constant reaches this value.
    #[arg(long)]
    pub min_b: Option<f64>,
    /// Probe centres for analytic spaces, as comma-separated coordinates.
    #[arg(long = "center", value_parser = io::parse_point)]
    pub centers: Vec<Vec<f64>>,
    #[arg(long)]
    pub r_min: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long, default_value_t = 16)]
    pub r_count: usize,
    #[command(flatten)]
    pub t_grid: TGridRule,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON summary path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct SpaceSummary<P> {
    alpha: f64,
    growth_constant: f64,
    worst_growth_center: Option<P>,
    worst_growth_radius: Option<f64>,
    c: f64,
    almost_continuous: bool,
    max_required_c: f64,
    continuity_failures: usize,
    doubling_constant: f64,
    centers: usize,
    radii: Vec<f64>,
    t_grid: Vec<f64>,
    pass: bool,
}

fn check_space<S>(space: &S, centers: &[S::Point], radii: &[f64], t_grid: &[f64], args: &SpaceCheckArgs) -> Result<Outcome>
where
    S: MetricMeasureSpace<f64>,
    S::Point: Serialize,
{
    let growth = lower_bound_probe(space, args.alpha, centers, radii)?;
    let continuity = almost_continuity_check(space, args.c, t_grid, centers)?;
    let doubling = doubling_check(space, centers, radii)?;
    let worst = growth.worst_probe();
    let almost_continuous = continuity.all_succeeded();
    let growth_ok = args.min_b.is_none_or(|b| growth.worst_ratio >= b);
    let summary = SpaceSummary {
        alpha: args.alpha,
        growth_constant: growth.worst_ratio,
        worst_growth_center: worst.map(|p| p.center.clone()),
        worst_growth_radius: worst.map(|p| p.radius),
        c: args.c,
        almost_continuous,
        max_required_c: continuity.max_required_c,
        continuity_failures: continuity.failures().count(),
        doubling_constant: doubling.constant,
        centers: centers.len(),
        radii: radii.to_vec(),
        t_grid: t_grid.to_vec(),
        pass: almost_continuous && growth_ok,
    };
    if let Some(out) = &args.out {
        io::write_json(out, &summary)?;
    }
    Ok(Outcome {
        passed: summary.pass,
        summary: format!(
            "growth b = {:.6} (alpha = {}), required c = {:.6} ({} at c = {}), doubling {:.4}",
            summary.growth_constant,
            args.alpha,
            summary.max_required_c,
            if almost_continuous { "almost continuous" } else { "not almost continuous" },
            args.c,
            summary.doubling_constant
        ),
    })
}

pub fn space_check(args: &SpaceCheckArgs) -> Result<Outcome> {
    match io::load_space(&args.space)? {
        LoadedSpace::Discrete(space) => {
            let (lo, hi) = space.admissible_radii();
            let radii = log_grid(args.r_min.unwrap_or(lo), args.r_max.unwrap_or(hi), args.r_count)?;
            let t_grid = args.t_grid.build(space.weights())?;
            let centers = probe_centres(space.len(), MAX_CENTRES, args.seed);
            check_space(&space, &centers, &radii, &t_grid, args)
        }
        LoadedSpace::Analytic(space) => {
            let dim = space.dimension();
            let centers = if args.centers.is_empty() { vec![vec![0.0; dim]] } else { args.centers.clone() };
            if let Some(bad) = centers.iter().find(|c| c.len() != dim) {
                bail!("centre {bad:?} is not {dim}-dimensional");
            }
            let radii = log_grid(args.r_min.unwrap_or(1e-3), args.r_max.unwrap_or(10.0), args.r_count)?;
            let t_grid = log_grid(
                args.t_grid.t_min.unwrap_or(1e-6),
                args.t_grid.t_max.unwrap_or(1e2),
                args.t_grid.t_count,
            )?;
            check_space(&space, &centers, &radii, &t_grid, args)
        }
    }
}

// ---------------------------------------------------------------- rearrange

#[derive(Debug, Args)]
pub struct RearrangeArgs {
    #[arg(long)]
    pub space: PathBuf,
    #[arg(long = "fn", value_name = "PATH")]
    pub function: PathBuf,
    /// CSV output with columns t, f_star, f_double_star, oscillation.
    #[arg(long)]
    pub out: PathBuf,
    /// Evaluate at the step ends of f* instead of a log grid.
    #[arg(long)]
    pub breakpoints: bool,
    #[command(flatten)]
    pub t_grid: TGridRule,
}

pub fn rearrange(args: &RearrangeArgs) -> Result<Outcome> {
    let loaded = io::load_space(&args.space)?;
    let space = loaded.discrete()?;
    let f = space.sample(io::load_function(&args.function, space.len())?)?;
    let fs = f.decreasing_rearrangement();
    let ts: Vec<f64> = if args.breakpoints {
        fs.breakpoints().iter().copied().filter(|&t| t > 0.0).collect()
    } else {
        args.t_grid.build(space.weights())?
    };
    let rows = ts
        .iter()
        .map(|&t| {
            let osc = f.oscillation_with(&fs, t)?;
            Ok(vec![io::num(t), io::num(fs.value_at(t)), io::num(fs.double_star(t)?), io::num(osc)])
        })
        .collect::<Result<Vec<_>>>()?;
    io::write_csv(&args.out, &["t", "f_star", "f_double_star", "oscillation"], rows)?;
    Ok(Outcome::pass(format!(
        "{} atoms, {} steps, ||f||_1 = {}, sup |f| = {}, {} rows",
        f.len(),
        fs.num_steps(),
        fs.total_integral(),
        fs.sup(),
        ts.len()
    )))
}

// ---------------------------------------------------------------- gradient

#[derive(Debug, Subcommand)]
pub enum GradientCommand {
    /// Check the pair inequality for a given g.
    Check(GradientCheckArgs),
    /// Write the canonical gradient.
    Canonical(GradientOutArgs),
    /// Write a norm-minimal gradient.
    Min(GradientMinArgs),
}

#[derive(Debug, Args)]
pub struct GradientInput {
    #[arg(long)]
    pub space: PathBuf,
    #[arg(long = "fn", value_name = "PATH")]
    pub function: PathBuf,
    #[arg(long)]
    pub s: f64,
}

#[derive(Debug, Args)]
pub struct GradientCheckArgs {
    #[command(flatten)]
    pub input: GradientInput,
    #[arg(long = "g", value_name = "PATH")]
    pub gradient: PathBuf,
    /// Absolute slack on each pair inequality.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// JSON output with the check result.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GradientOutArgs {
    #[command(flatten)]
    pub input: GradientInput,
    /// JSON array output.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GradientMinArgs {
    #[command(flatten)]
    pub input: GradientInput,
    /// lp:1, lp:2 or linf.
    #[arg(long, default_value = "lp:1")]
    pub objective: String,
    /// JSON array output.
    #[arg(long)]
    pub out: PathBuf,
    /// JSON output with the norm value and optimality certificate.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
}

fn load_pair_input(input: &GradientInput) -> Result<(Space, rimetric::Sample)> {
    let LoadedSpace::Discrete(space) = io::load_space(&input.space)? else {
        bail!("gradients need a discrete space");
    };
    if !(input.s > 0.0 && input.s.is_finite()) {
        bail!("--s must be positive");
    }
    let f = space.sample(io::load_function(&input.function, space.len())?)?;
    Ok((space, f))
}

fn describe_certificate(c: &Certificate<f64>) -> String {
    match c {
        Certificate::Dual { dual_value, relative_gap, pivots } => {
            format!("LP dual value {dual_value}, gap {relative_gap:.1e}, {pivots} pivots")
        }
        Certificate::Kkt { residual, relative_gap, active, sweeps } => {
            format!("KKT residual {residual:.1e}, gap {relative_gap:.1e}, {active} active pairs, {sweeps} sweeps")
        }
        Certificate::MaxPair { i, j } => format!("pair ({i}, {j}) forces max g >= c_ij / 2"),
    }
}

pub fn gradient(cmd: &GradientCommand) -> Result<Outcome> {
    match cmd {
        GradientCommand::Check(args) => {
            let (space, f) = load_pair_input(&args.input)?;
            let g = space.sample(io::load_function(&args.gradient, space.len())?)?;
            let check = is_s_gradient(&space, &f, &g, args.input.s, args.tol)?;
            if let Some(out) = &args.out {
                io::write_json(out, &check)?;
            }
            let verdict = if check.ok { "is" } else { "is not" };
            Ok(Outcome {
                passed: check.ok,
                summary: format!(
                    "g {verdict} an s-gradient (s = {}): max violation {:e} at {:?}",
                    args.input.s, check.max_violation, check.witness
                ),
            })
        }
        GradientCommand::Canonical(args) => {
            let (space, f) = load_pair_input(&args.input)?;
            let pair = canonical_gradient(&space, &f, args.input.s)?;
            io::write_json(&args.out, pair.g().values())?;
            let l1: f64 = pair.g().values().iter().zip(space.weights()).map(|(g, w)| g * w).sum();
            let sup = pair.g().values().iter().copied().fold(0.0, f64::max);
            Ok(Outcome::pass(format!("canonical gradient: ||g||_1 = {l1}, max g = {sup}")))
        }
        GradientCommand::Min(args) => {
            let (space, f) = load_pair_input(&args.input)?;
            let spec: Spec = args.objective.parse()?;
            let objective = Objective::from_spec(&spec)?;
            let problem = GradientProblem::new(&space, &f, args.input.s)?;
            let solution = minimal_gradient(&problem, objective, &SolverOptions::default())?;
            let g = solution.to_sample(space.weights());
            let tol = SolverOptions::default().feasibility_tol * problem.max_c().max(f64::MIN_POSITIVE);
            let check = is_s_gradient(&space, &f, &g, args.input.s, tol)?;
            io::write_json(&args.out, &solution.g)?;
            if let Some(path) = &args.certificate {
                #[derive(Serialize)]
                struct CertificateFile<'a> {
                    objective: &'a str,
                    norm_value: f64,
                    feasible: bool,
                    max_violation: f64,
                    certificate: &'a Certificate<f64>,
                }
                io::write_json(
                    path,
                    &CertificateFile {
                        objective: &args.objective,
                        norm_value: solution.norm_value,
                        feasible: check.ok,
                        max_violation: check.max_violation,
                        certificate: &solution.certificate,
                    },
                )?;
            }
            Ok(Outcome {
                passed: check.ok,
                summary: format!(
                    "{} minimal gradient: norm {}, {}{}",
                    args.objective,
                    solution.norm_value,
                    describe_certificate(&solution.certificate),
                    if check.ok { "" } else { ", INFEASIBLE" }
                ),
            })
        }
    }
}

// ---------------------------------------------------------------- verify-oscillation

#[derive(Debug, Args)]
pub struct OscillationArgs {
    #[command(flatten)]
    pub run: RunConfig,
    /// Exponent in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Almost-continuity constant; measured on the space when absent.
    #[arg(long)]
    pub c: Option<f64>,
    /// Relative slack on the theoretical constant.
    #[arg(long, default_value_t = 0.1)]
    pub slack: f64,
    /// Absolute slack when checking a supplied gradient.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Serialize)]
struct OscillationSummary {
    function: String,
    gradient: String,
    s: f64,
    alpha: f64,
    p: f64,
    c: f64,
    c_measured: bool,
    slack: f64,
    empirical_constant: f64,
    theoretical_constant: f64,
    formula: &'static str,
    threshold: f64,
    worst_t: Option<f64>,
    pass: bool,
}

pub fn verify_oscillation(args: &OscillationArgs) -> Result<Outcome> {
    let run = &args.run;
    run.validate()?;
    let [f_path] = run.functions.as_slice() else {
        bail!("verify-oscillation takes exactly one --fn");
    };
    let loaded = io::load_space(&run.space)?;
    let space = loaded.discrete()?;
    let t_grid = run.t_grid.build(space.weights())?;
    let (c, c_measured) = match args.c {
        Some(c) => (c, false),
        None => {
            let centers = probe_centres(space.len(), MAX_CENTRES, run.seed);
            let report = almost_continuity_check(space, 2.0, &t_grid, &centers)?;
            (report.max_required_c.max(1.0), true)
        }
    };
    let pair = match pair_for(space, f_path, run.gradients.first(), run.s, args.tol)? {
        Ok(pair) => pair,
        Err(why) => return Ok(Outcome { passed: false, summary: why }),
    };
    let mut params = OscillationParams::new(run.alpha, args.p, c);
    params.slack = args.slack;
    let ids = ReportIds {
        space: run.space.display().to_string(),
        f: f_path.display().to_string(),
        g: run.gradients.first().map_or("canonical".to_string(), |g| g.display().to_string()),
    };
    let report = oscillation_inequality_report(&pair, params, &t_grid, ids)?;
    if let Some(out) = &run.out {
        let rows = (0..report.t_grid.len()).map(|k| {
            vec![io::num(report.t_grid[k]), io::num(report.lhs[k]), io::num(report.rhs[k]), io::num(report.ratio[k])]
        });
        io::write_csv(out, &["t", "lhs", "rhs", "ratio"], rows)?;
    }
    let summary = OscillationSummary {
        function: report.ids.f.clone(),
        gradient: report.ids.g.clone(),
        s: run.s,
        alpha: run.alpha,
        p: args.p,
        c,
        c_measured,
        slack: args.slack,
        empirical_constant: report.empirical_constant,
        theoretical_constant: report.theoretical_constant.value,
        formula: report.theoretical_constant.formula,
        threshold: report.threshold(),
        worst_t: report.worst().map(|k| report.t_grid[k]),
        pass: report.pass,
    };
    if let Some(path) = &run.summary {
        io::write_json(path, &summary)?;
    }
    Ok(Outcome {
        passed: report.pass,
        summary: format!(
            "oscillation inequality {}: empirical {:.6} vs threshold {:.6} (c = {:.6}{})",
            if report.pass { "holds" } else { "FAILS" },
            summary.empirical_constant,
            summary.threshold,
            c,
            if c_measured { ", measured" } else { "" }
        ),
    })
}

// ---------------------------------------------------------------- verify-converse

#[derive(Debug, Args)]
pub struct ConverseArgs {
    #[arg(long)]
    pub space: PathBuf,
    /// Smoothness exponent in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long)]
    pub alpha: f64,
    /// Probe centres as comma-separated coordinates; nearest atom on discrete spaces.
    #[arg(long = "center", value_parser = io::parse_point)]
    pub centers: Vec<Vec<f64>>,
    #[arg(long, default_value_t = 0.05)]
    pub r_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 9)]
    pub r_count: usize,
    /// CSV with one row per probe.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON summary path.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Serialize)]
struct ConverseSummary {
    s: f64,
    alpha: f64,
    probes: usize,
    skipped: usize,
    fitted_alpha: Option<f64>,
    c_prime: ConstantSpread<f64>,
    implied_constant: ConstantSpread<f64>,
    l1_bound_holds: bool,
    spread_limit: f64,
    pass: bool,
}

fn run_converse<S>(space: &S, centers: Vec<S::Point>, args: &ConverseArgs) -> Result<Outcome>
where
    S: ConverseSpace<f64>,
    S::Point: Serialize,
{
    let radii = log_grid(args.r_min, args.r_max, args.r_count)?;
    let probes: Vec<(S::Point, f64)> =
        centers.iter().flat_map(|c| radii.iter().map(move |&r| (c.clone(), r))).collect();
    let report = converse_probe(space, args.s, args.alpha, &probes)?;
    if let Some(out) = &args.out {
        let rows = report.probes.iter().map(|p| {
            vec![
                space.describe_point(&p.center),
                io::num(p.radius),
                io::num(p.mass),
                io::num(p.lhs),
                io::num(p.rhs_integral),
                io::num(p.implied_constant),
                io::num(p.c_prime),
                io::num(p.l1_norm),
                io::num(p.l1_bound),
            ]
        });
        let header = ["center", "radius", "mass", "lhs", "rhs_integral", "implied_constant", "c_prime", "l1_norm", "l1_bound"];
        io::write_csv(out, &header, rows)?;
    }
    let pass = report.l1_bound_holds && report.c_prime.bounded_by(SPREAD_LIMIT) && report.implied_constant.bounded_by(SPREAD_LIMIT);
    let summary = ConverseSummary {
        s: args.s,
        alpha: args.alpha,
        probes: report.probes.len(),
        skipped: report.skipped.len(),
        fitted_alpha: report.fitted_alpha,
        c_prime: report.c_prime,
        implied_constant: report.implied_constant,
        l1_bound_holds: report.l1_bound_holds,
        spread_limit: SPREAD_LIMIT,
        pass,
    };
    if let Some(path) = &args.summary {
        io::write_json(path, &summary)?;
    }
    let fitted = summary.fitted_alpha.map_or("none".to_string(), |a| format!("{a:.4}"));
    Ok(Outcome {
        passed: pass,
        summary: format!(
            "converse: fitted alpha {fitted}, C' in [{:.6}, {:.6}] (spread {:.3}), {} probes, {} skipped",
            summary.c_prime.min, summary.c_prime.max, summary.c_prime.spread, summary.probes, summary.skipped
        ),
    })
}

pub fn verify_converse(args: &ConverseArgs) -> Result<Outcome> {
    match io::load_space(&args.space)? {
        LoadedSpace::Discrete(space) => {
            let centers = if args.centers.is_empty() {
                let coords = space.coordinates().context("discrete space without coordinates needs --center")?;
                let dim = coords[0].len();
                let mean: Vec<f64> =
                    (0..dim).map(|k| coords.iter().map(|p| p[k]).sum::<f64>() / coords.len() as f64).collect();
                vec![space.nearest_point(&mean).context("no nearest point")?]
            } else {
                args.centers
                    .iter()
                    .map(|c| space.nearest_point(c).context("space has no coordinates"))
                    .collect::<Result<_>>()?
            };
            run_converse(&space, centers, args)
        }
        LoadedSpace::Analytic(space) => {
            let dim = space.dimension();
            let centers = if args.centers.is_empty() { vec![vec![0.0; dim]] } else { args.centers.clone() };
            run_converse(&space, centers, args)
        }
    }
}

// ---------------------------------------------------------------- verify-embedding

#[derive(Debug, Args)]
pub struct EmbeddingArgs {
    #[command(flatten)]
    pub run: RunConfig,
    /// r.i. space: lp:P, lorentz:P:Q, weak-linf or l1+linf.
    #[arg(long)]
    pub spec: String,
    /// Case to evaluate; selected from the Boyd indices when absent.
    #[arg(long)]
    pub case: Option<EmbeddingCase>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Serialize)]
struct EmbeddingRow {
    function: String,
    #[serde(flatten)]
    report: rimetric::verify::EmbeddingReport<f64>,
}

#[derive(Serialize)]
struct EmbeddingSummary {
    spec: String,
    reports: Vec<EmbeddingRow>,
    spread: Option<ConstantSpread<f64>>,
    spread_limit: f64,
    pass: bool,
}

pub fn verify_embedding(args: &EmbeddingArgs) -> Result<Outcome> {
    let run = &args.run;
    run.validate()?;
    if run.functions.is_empty() {
        bail!("verify-embedding needs at least one --fn");
    }
    let spec: Spec = args.spec.parse()?;
    let loaded = io::load_space(&run.space)?;
    let space = loaded.discrete()?;
    let powers = DistancePowers::new(space, run.s);
    let mut rows = Vec::new();
    for (k, f_path) in run.functions.iter().enumerate() {
        let pair = match run.gradients.get(k) {
            None => canonical_gradient_with(&powers, &space.sample(io::load_function(f_path, space.len())?)?)?,
            g => match pair_for(space, f_path, g, run.s, args.tol)? {
                Ok(pair) => pair,
                Err(why) => return Ok(Outcome { passed: false, summary: why }),
            },
        };
        let report = embedding_report(&pair, run.alpha, &spec, args.case)?;
        rows.push(EmbeddingRow { function: f_path.display().to_string(), report });
    }
    let finite = rows.iter().all(|r| r.report.empirical_constant.is_finite());
    let positive: Vec<f64> = rows.iter().map(|r| r.report.empirical_constant).filter(|&c| c > 0.0).collect();
    let spread = ConstantSpread::of(positive);
    let pass = finite && spread.as_ref().is_none_or(|s| s.bounded_by(SPREAD_LIMIT));
    if let Some(out) = &run.out {
        let csv_rows = rows.iter().map(|r| {
            vec![
                r.function.clone(),
                r.report.case.to_string(),
                io::num(r.report.lhs),
                io::num(r.report.rhs),
                io::num(r.report.empirical_constant),
            ]
        });
        io::write_csv(out, &["function", "case", "lhs", "rhs", "empirical_constant"], csv_rows)?;
    }
    let case = rows[0].report.case;
    let summary = EmbeddingSummary { spec: spec.to_string(), reports: rows, spread, spread_limit: SPREAD_LIMIT, pass };
    if let Some(path) = &run.summary {
        io::write_json(path, &summary)?;
    }
    let range = summary
        .spread
        .as_ref()
        .map_or("all constants zero".to_string(), |s| format!("constants in [{:.6}, {:.6}], spread {:.3}", s.min, s.max, s.spread));
    Ok(Outcome {
        passed: pass,
        summary: format!("{case} embedding in {}: {} functions, {range}", summary.spec, summary.reports.len()),
    })
}

// ---------------------------------------------------------------- gallery

#[derive(Debug, Subcommand)]
pub enum GalleryCommand {
    /// The plane with two weighted vertical lines: lower bounded but not almost continuous.
    AppendixPlane(AppendixArgs),
}

#[derive(Debug, Args)]
pub struct AppendixArgs {
    /// Probe at x = (a, 0); repeatable.
    #[arg(long = "probe", value_parser = io::parse_probe)]
    pub probes: Vec<f64>,
    /// Almost-continuity constant to test.
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    /// JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct AppendixProbe {
    a: f64,
    t: f64,
    required_c: f64,
    expected_required_c: f64,
    certified: bool,
    almost_continuous_at_c: bool,
}

#[derive(Serialize)]
struct AppendixReport {
    c: f64,
    growth_constant: f64,
    growth_exponent: f64,
    probes: Vec<AppendixProbe>,
    pass: bool,
}

pub fn gallery(cmd: &GalleryCommand) -> Result<Outcome> {
    let GalleryCommand::AppendixPlane(args) = cmd;
    let plane = AnalyticSpace::AppendixPlane;
    let probes = if args.probes.is_empty() { vec![1e-1, 1e-2, 1e-3] } else { args.probes.clone() };
    let growth_centers: Vec<Vec<f64>> =
        [[0.0, 0.0], [0.5, 0.0], [1.0, 0.3], [0.001, 0.0], [-0.7, 1.0], [2.0, -1.0]].iter().map(|p| p.to_vec()).collect();
    let growth = lower_bound_probe(&plane, 2.0, &growth_centers, &log_grid(1e-4, 10.0, 25)?)?;
    let mut rows = Vec::new();
    for &a in &probes {
        // just above the mass 4a^2 of the square B((a, 0), a); the line x = 0 enters there
        let t = 4.0 * a * a * (1.0 + 1e-4);
        let report = almost_continuity_check(&plane, args.c, &[t], &[vec![a, 0.0]])?;
        let expected = 1.0 + 1.0 / (2.0 * a);
        rows.push(AppendixProbe {
            a,
            t,
            required_c: report.max_required_c,
            expected_required_c: expected,
            certified: report.max_required_c >= expected * (1.0 - 1e-3),
            almost_continuous_at_c: report.all_succeeded(),
        });
    }
    let pass = rows.iter().all(|r| r.certified) && growth.worst_ratio >= 0.25;
    let summary = rows
        .iter()
        .map(|r| format!("a={}: required c {:.4} (1 + 1/(2a) = {:.4})", r.a, r.required_c, r.expected_required_c))
        .collect::<Vec<_>>()
        .join("; ");
    let failing = rows.iter().filter(|r| !r.almost_continuous_at_c).count();
    let report = AppendixReport { c: args.c, growth_constant: growth.worst_ratio, growth_exponent: 2.0, probes: rows, pass };
    if let Some(out) = &args.out {
        io::write_json(out, &report)?;
    }
    Ok(Outcome {
        passed: pass,
        summary: format!(
            "mu(B) >= {:.4} r^2; c = {} fails at {failing} of {} probes; {summary}",
            report.growth_constant,
            args.c,
            report.probes.len()
        ),
    })
}

// ---------------------------------------------------------------- gen-space

#[derive(Debug, Subcommand)]
pub enum GenSpaceCommand {
    /// Cell centres of a uniform grid weighted by cell volume.
    Grid {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        per_side: usize,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 1.0)]
        hi: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Uniform random points in the unit cube with equal weights.
    RandomCloud {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Discretised plane measure: area plus length on the lines x = 0 and x = 1.
    AppendixPlaneSample {
        #[arg(long, default_value_t = 20)]
        cells_per_unit: usize,
        #[arg(long, default_value_t = 0.05)]
        line_spacing: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

pub fn gen_space(cmd: &GenSpaceCommand) -> Result<Outcome> {
    let (file, out) = match cmd {
        GenSpaceCommand::Grid { dim, per_side, lo, hi, out } => {
            (SpaceFile::from_discrete(&uniform_grid(*dim, *per_side, *lo, *hi)?, None), out)
        }
        GenSpaceCommand::RandomCloud { n, dim, seed, out } => {
            (SpaceFile::from_discrete(&random_cloud(*n, *dim, *seed)?, None), out)
        }
        GenSpaceCommand::AppendixPlaneSample { cells_per_unit, line_spacing, seed, out } => {
            let (space, labels) = appendix_plane_sample_labeled(*cells_per_unit, *line_spacing, *seed)?;
            (SpaceFile::from_discrete(&space, Some(labels)), out)
        }
    };
    io::write_json(out, &file)?;
    let SpaceFile::Discrete { weights, .. } = &file else { unreachable!("generators build discrete spaces") };
    let mass: f64 = weights.iter().sum();
    Ok(Outcome::pass(format!("wrote {} points with total mass {mass} to {}", weights.len(), out.display())))
}
