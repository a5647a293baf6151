//! Acceptance suite: one line per criterion, nonzero exit if any fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rimetric::hajlasz::{
    canonical_gradient, canonical_gradient_with, is_s_gradient, minimal_gradient, DistancePowers, GradientProblem,
    Objective, SolverOptions, TestFunction,
};
use rimetric::rearrange::{Piecewise, StepFunction, WeightedSample};
use rimetric::rinorm::{dilation_norm, probe_family, RiSpaceSpec};
use rimetric::space::generate::{random_cloud, uniform_grid};
use rimetric::space::{almost_continuity_check, lower_bound_probe, AnalyticSpace, DiscreteSpace, MetricMeasureSpace};
use rimetric::verify::{
    admissible_grid, converse_probe, converse_rhs_integral, embedding_report, log_weighted_norm,
    oscillation_inequality_report, ConstantSpread, EmbeddingCase, OscillationParams, ReportIds, DEFAULT_GRID_POINTS,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Sum of random plane waves and Gaussian bumps evaluated at `coords`.
fn smooth_field(rng: &mut ChaCha8Rng, coords: &[Vec<f64>]) -> Vec<f64> {
    let dim = coords[0].len();
    let waves: Vec<(f64, Vec<f64>, f64)> = (0..rng.random_range(1..=4))
        .map(|_| {
            let amp = rng.random_range(-1.0..1.0);
            let freq = (0..dim).map(|_| rng.random_range(-4.0..4.0)).collect();
            (amp, freq, rng.random_range(0.0..std::f64::consts::TAU))
        })
        .collect();
    let bumps: Vec<(f64, Vec<f64>, f64)> = (0..rng.random_range(0..=3))
        .map(|_| {
            let amp = rng.random_range(-2.0..2.0);
            let c = (0..dim).map(|_| rng.random_range(0.0..2.0)).collect();
            (amp, c, rng.random_range(0.1..0.6))
        })
        .collect();
    let offset = rng.random_range(-1.0..1.0);
    coords
        .iter()
        .map(|x| {
            let w: f64 = waves
                .iter()
                .map(|(a, k, ph)| a * (k.iter().zip(x).map(|(k, x)| k * x).sum::<f64>() + ph).sin())
                .sum();
            let b: f64 = bumps
                .iter()
                .map(|(a, c, width)| {
                    let d2: f64 = c.iter().zip(x).map(|(c, x)| (c - x) * (c - x)).sum();
                    a * (-d2 / (width * width)).exp()
                })
                .sum();
            offset + w + b
        })
        .collect()
}

/// `smooth_field` times a cutoff supported in a random ball well inside `[0, 2]^d`,
/// so that `f**` vanishes at infinity as it does for `f` in `X` on an
/// infinite-measure space.
fn compact_field(rng: &mut ChaCha8Rng, coords: &[Vec<f64>]) -> Vec<f64> {
    let dim = coords[0].len();
    let center: Vec<f64> = (0..dim).map(|_| rng.random_range(0.7..1.3)).collect();
    let radius = rng.random_range(0.3..0.6);
    let field = smooth_field(rng, coords);
    coords
        .iter()
        .zip(field)
        .map(|(x, v)| {
            let d2: f64 = x.iter().zip(&center).map(|(x, c)| (x - c) * (x - c)).sum();
            let w = (1.0 - d2 / (radius * radius)).max(0.0);
            v * w * w
        })
        .collect()
}

/// 1. Equimeasurability, the level-set identity and monotonicity of t (f** - f*).
fn rearrangement_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_identity = 0.0f64;
    let mut levels_checked = 0usize;
    for trial in 0..200 {
        let n = if trial % 10 == 0 { 10_000 } else { rng.random_range(1..=2000) };
        // dyadic weights and few distinct levels: every mass sum is exact
        let distinct = rng.random_range(1..=50);
        let values: Vec<f64> =
            (0..n).map(|_| (rng.random_range(0..distinct) as f64 - distinct as f64 / 3.0) * 0.375).collect();
        let weights: Vec<f64> = (0..n).map(|_| rng.random_range(1..=64) as f64 / 1024.0).collect();
        let sample = WeightedSample::new(values.clone(), weights.clone()).map_err(|e| e.to_string())?;
        let fs = sample.decreasing_rearrangement();

        let mut levels: Vec<f64> = values.iter().map(|v| v.abs()).collect();
        levels.push(0.0);
        levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
        levels.dedup();
        for &lambda in &levels {
            let mu = sample.distribution(lambda).map_err(|e| e.to_string())?;
            ensure(mu == fs.lebesgue_distribution(lambda), || {
                format!("trial {trial}: mu_f({lambda}) = {mu} but |{{f* > lambda}}| = {}", fs.lebesgue_distribution(lambda))
            })?;
            levels_checked += 1;
        }

        let total = sample.total_mass();
        let mut ts: Vec<f64> = (0..200).map(|_| rng.random_range(0.0..total)).filter(|&t| t > 0.0).collect();
        ts.extend(fs.breakpoints().iter().copied().filter(|&t| t > 0.0 && t <= total));
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut prev = 0.0f64;
        for &t in &ts {
            let steps = fs.oscillation_at(t).map_err(|e| e.to_string())?;
            let level = fs.value_at(t);
            let excess: f64 = values
                .iter()
                .zip(&weights)
                .filter(|(v, _)| v.abs() > level)
                .map(|(v, w)| (v.abs() - level) * w)
                .sum();
            let identity = excess / t;
            if steps.max(identity) > 0.0 {
                worst_identity = worst_identity.max(rel_err(steps, identity));
            }
            let tm = t * steps;
            ensure(tm >= prev * (1.0 - 1e-12), || format!("trial {trial}: t (f** - f*) decreased at t = {t}"))?;
            prev = prev.max(tm);
        }
    }
    ensure(worst_identity <= 1e-10, || format!("identity routes differ by {worst_identity:e}"))?;
    Ok(format!("{levels_checked} levels equimeasurable, identity agreement {worst_identity:.1e}"))
}

/// 2. The oscillation inequality on a 64 x 64 grid of [0, 2]^2.
fn oscillation_inequality() -> Outcome {
    let grid = uniform_grid::<f64>(2, 64, 0.0, 2.0).map_err(|e| e.to_string())?;
    let t_grid = admissible_grid(grid.weights(), DEFAULT_GRID_POINTS).map_err(|e| e.to_string())?;
    let centers: Vec<usize> = (0..grid.len()).collect();
    let continuity = almost_continuity_check(&grid, 2.0, &t_grid, &centers).map_err(|e| e.to_string())?;
    let c = continuity.max_required_c.max(1.0);
    let (r_lo, r_hi) = grid.admissible_radii();
    let radii: Vec<f64> = (0..8).map(|k| r_lo * (r_hi / r_lo).powf(k as f64 / 7.0)).collect();
    let growth = lower_bound_probe(&grid, 2.0, &centers, &radii).map_err(|e| e.to_string())?;

    let coords = grid.coordinates().expect("grid has coordinates").to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let fields: Vec<WeightedSample<f64>> =
        (0..50).map(|_| grid.sample(smooth_field(&mut rng, &coords)).expect("field matches grid")).collect();
    let mut worst = (0.0f64, 0.0f64);
    let mut reports = 0;
    for s in [0.5, 1.0] {
        let dp = DistancePowers::new(&grid, s);
        for (k, f) in fields.iter().enumerate() {
            let pair = canonical_gradient_with(&dp, f).map_err(|e| e.to_string())?;
            for p in [0.5, 1.0] {
                let rep = oscillation_inequality_report(&pair, OscillationParams::new(2.0, p, c), &t_grid, ReportIds::default())
                    .map_err(|e| e.to_string())?;
                reports += 1;
                let used = rep.empirical_constant / rep.threshold();
                if used > worst.0 {
                    worst = (used, rep.empirical_constant);
                }
                ensure(rep.pass && rep.recheck(), || {
                    format!(
                        "f{k} s={s} p={p}: empirical {:.4} exceeds {:.4}",
                        rep.empirical_constant,
                        rep.threshold()
                    )
                })?;
            }
        }
    }
    Ok(format!(
        "{reports} reports, c = {c:.3}, b = {:.3}, worst empirical/threshold = {:.3}",
        growth.worst_ratio, worst.0
    ))
}

/// 3. Distribution of the cone test function.
fn distribution_law() -> Outcome {
    let plane = AnalyticSpace::EuclideanLebesgue { dim: 2 };
    let grid = uniform_grid::<f64>(2, 64, 0.0, 2.0).map_err(|e| e.to_string())?;
    let h = 2.0 / 64.0;
    let center = grid.nearest_point(&[1.0, 1.0]).expect("grid has coordinates");
    let d = grid.distances_from(center);
    let mut worst_plane = 0.0f64;
    let mut worst_shells = 0.0f64;
    for s in [0.5, 1.0] {
        let tf = TestFunction::new(0.7, s).map_err(|e| e.to_string())?;
        let (f, _) = tf.sample(&grid, center).map_err(|e| e.to_string())?;
        for k in 1..=20 {
            let lambda = tf.sup() * k as f64 / 21.0;
            let rho = 0.7 - lambda.powf(1.0 / s);
            let closed = std::f64::consts::PI * rho * rho;
            let got = tf.distribution(&plane, &vec![0.0, 0.0], lambda).map_err(|e| e.to_string())?;
            worst_plane = worst_plane.max(rel_err(got, closed));

            let mu_f = f.distribution(lambda).map_err(|e| e.to_string())?;
            let ball = grid.ball_measure(&center, rho).map_err(|e| e.to_string())?;
            let shell: f64 = d
                .iter()
                .zip(grid.weights())
                .filter(|(&dist, _)| (dist - rho).abs() <= h / 2.0)
                .map(|(_, &w)| w)
                .sum();
            let diff = (mu_f - ball).abs();
            ensure(diff <= shell, || format!("s={s} lambda={lambda}: |mu_f - mu(B)| = {diff} exceeds shell {shell}"))?;
            if shell > 0.0 {
                worst_shells = worst_shells.max(diff / shell);
            }
        }
    }
    ensure(worst_plane <= 1e-12, || format!("plane distribution off by {worst_plane:e}"))?;
    Ok(format!("plane rel err {worst_plane:.1e}, grid diff {worst_shells:.2} shells"))
}

/// 4. Slope and constant stability of the converse chain.
fn converse_chain() -> Outcome {
    let mut notes = Vec::new();
    for n in [1usize, 2] {
        let space = AnalyticSpace::EuclideanLebesgue { dim: n };
        let probes: Vec<(Vec<f64>, f64)> =
            (0..9).map(|k| (vec![0.0; n], 0.05 * 10f64.powf(2.0 * k as f64 / 8.0))).collect();
        for s in [0.5, 1.0] {
            let rep = converse_probe(&space, s, n as f64, &probes).map_err(|e| e.to_string())?;
            let alpha = rep.fitted_alpha.ok_or("no slope")?;
            ensure(rel_err(alpha, n as f64) <= 0.05, || format!("n={n} s={s}: fitted alpha {alpha}"))?;
            ensure(rep.c_prime.spread <= 1.5, || format!("n={n} s={s}: C' spread {}", rep.c_prime.spread))?;
            ensure(rep.l1_bound_holds, || format!("n={n} s={s}: ||f||_1 > r^s mu(B)"))?;
            notes.push(format!("n={n},s={s}: alpha {alpha:.4}, C' spread {:.4}", rep.c_prime.spread));
        }
    }
    Ok(notes.join("; "))
}

/// 5. Minimal gradients against brute force.
fn minimal_gradient_optimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let opts = SolverOptions::default();
    let mut worst = 0.0f64;
    for case in 0..100 {
        let n = 2 + case % 4;
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..2.0)).collect();
        let c: Vec<f64> = (0..n * (n - 1) / 2)
            .map(|_| if rng.random::<f64>() < 0.2 { 0.0 } else { rng.random_range(0.0..3.0) })
            .collect();
        let max_c = c.iter().copied().fold(0.0, f64::max);
        let l1 = common::l1_vertex_oracle(&w, &c);
        let l2 = common::l2_active_set_oracle(&w, &c);
        let p = GradientProblem::from_constraints(w, c).map_err(|e| e.to_string())?;
        for (obj, expected) in [(Objective::L1, l1), (Objective::L2, l2)] {
            let sol = minimal_gradient(&p, obj, &opts).map_err(|e| format!("case {case} {obj:?}: {e}"))?;
            let err = if expected == 0.0 { sol.norm_value } else { rel_err(sol.norm_value, expected) };
            worst = worst.max(err);
            ensure(err <= 1e-6, || format!("case {case} {obj:?}: {} vs {expected}", sol.norm_value))?;
        }
        let linf = minimal_gradient(&p, Objective::Linf, &opts).map_err(|e| e.to_string())?;
        ensure(linf.norm_value == max_c / 2.0, || format!("case {case}: L-inf {} vs {}", linf.norm_value, max_c / 2.0))?;
    }
    for seed in [51u64, 52] {
        let space = random_cloud::<f64>(200, 2, seed).map_err(|e| e.to_string())?;
        let coords = space.coordinates().expect("cloud has coordinates").to_vec();
        let f = space.sample(smooth_field(&mut rng, &coords)).map_err(|e| e.to_string())?;
        let p = GradientProblem::new(&space, &f, 1.0).map_err(|e| e.to_string())?;
        let canon = canonical_gradient(&space, &f, 1.0).map_err(|e| e.to_string())?;
        for obj in [Objective::L1, Objective::L2, Objective::Linf] {
            let sol = minimal_gradient(&p, obj, &opts).map_err(|e| e.to_string())?;
            let g = WeightedSample::new(sol.g.clone(), space.weights().to_vec()).map_err(|e| e.to_string())?;
            let feasible = is_s_gradient(&space, &f, &g, 1.0, 1e-8 * p.max_c()).map_err(|e| e.to_string())?;
            ensure(feasible.ok, || format!("n=200 {obj:?}: infeasible by {}", feasible.max_violation))?;
            let canon_norm = p.objective_value(obj, canon.g().values());
            ensure(sol.norm_value <= canon_norm * (1.0 + 1e-12), || {
                format!("n=200 {obj:?}: {} above canonical {canon_norm}", sol.norm_value)
            })?;
        }
    }
    Ok(format!("worst relative error vs oracle {worst:.1e}"))
}

/// Quadrature of `int_0^inf t^e F(t)^q dt` piece by piece.
fn quad_moment(f: &Piecewise<f64>, q: f64, e: f64) -> f64 {
    f.pieces()
        .iter()
        .map(|piece| {
            let g = |t: f64| t.powf(e) * piece.eval(t).powf(q);
            if piece.hi.is_infinite() {
                common::tanh_sinh_to_infinity(g, piece.lo)
            } else {
                common::tanh_sinh(g, piece.lo, piece.hi)
            }
        })
        .sum()
}

fn random_staircase(rng: &mut ChaCha8Rng) -> StepFunction<f64> {
    let k = rng.random_range(1..=8);
    let mut bps = vec![0.0];
    let mut t = 0.0;
    for _ in 0..k {
        t += 10f64.powf(rng.random_range(-1.5..1.0));
        bps.push(t);
    }
    let mut levels: Vec<f64> = (0..k).map(|_| 10f64.powf(rng.random_range(-1.0..1.0))).collect();
    levels.sort_by(|a, b| b.partial_cmp(a).unwrap());
    levels.dedup();
    bps.truncate(levels.len() + 1);
    StepFunction::new(bps, levels).expect("staircase is canonical")
}

/// 6. Fundamental functions, dilations, Hölder and every closed-form integral.
fn ri_machinery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_dual = 0.0f64;
    for _ in 0..100 {
        let p = rng.random_range(1.0..10.0);
        let s = 10f64.powf(rng.random_range(-3.0..3.0));
        let (_, _, product) = RiSpaceSpec::lp(p).map_err(|e| e.to_string())?.dual_check(s).map_err(|e| e.to_string())?;
        worst_dual = worst_dual.max(rel_err(product, s));
    }
    ensure(worst_dual <= 1e-12, || format!("phi phi' off by {worst_dual:e}"))?;

    let probes = probe_family::<f64>(24, 61);
    let mut worst_dilation = 0.0f64;
    for p in [1.0, 1.5, 2.0, 4.0] {
        let spec = RiSpaceSpec::lp(p).map_err(|e| e.to_string())?;
        for s in [2.0, 8.0, 64.0] {
            let h = dilation_norm(&spec, s, &probes).map_err(|e| e.to_string())?;
            worst_dilation = worst_dilation.max(rel_err(h, s.powf(1.0 / p)));
        }
    }
    ensure(worst_dilation <= 1e-9, || format!("dilation norm off by {worst_dilation:e}"))?;

    let mut min_slack = f64::INFINITY;
    for _ in 0..500 {
        let p = rng.random_range(1.01..8.0);
        let (f, h) = (random_staircase(&mut rng), random_staircase(&mut rng));
        let lhs = f.inner_product(&h);
        let rhs = RiSpaceSpec::lp(p).unwrap().norm(&f) * RiSpaceSpec::lp(p / (p - 1.0)).unwrap().norm(&h);
        min_slack = min_slack.min((rhs - lhs) / rhs);
    }
    ensure(min_slack >= -1e-14, || format!("Hölder slack {min_slack:e}"))?;

    // closed forms against tanh-sinh
    let mut worst = [0.0f64; 5];
    let names = ["moments", "f** norm", "log norm", "converse integral", "cone L1"];
    for _ in 0..40 {
        let f = random_staircase(&mut rng);
        for (q, e) in [(1.0, -0.5), (2.0, -2.0 / 3.0), (4.0 / 3.0, -2.0 / 3.0), (1.5, -0.25), (3.0, -1.5)] {
            let ds = f.double_star_piecewise();
            worst[0] = worst[0].max(rel_err(ds.moment(q, e), quad_moment(&ds, q, e)));
        }
        for (p, sigma) in [(4.0 / 3.0, 0.5), (1.5, 0.25), (2.0, 0.3)] {
            let spec = RiSpaceSpec::lp(p).unwrap();
            let got = spec.norm_doublestar(&f, sigma).map_err(|e| e.to_string())?.value;
            let expected = quad_moment(&f.double_star_piecewise(), p, -sigma * p).powf(1.0 / p);
            worst[1] = worst[1].max(rel_err(got, expected));
        }
        // log-weighted functional in u = ln(1/t)
        let p = 2.0;
        let ds = f.double_star_piecewise();
        let mut expected = 0.0;
        for piece in ds.pieces() {
            let (lo, hi) = (piece.lo, piece.hi.min(1.0));
            if !(hi > lo) {
                continue;
            }
            let g = |u: f64| (piece.eval((-u).exp()) / (1.0 + u)).powf(p);
            expected += if lo == 0.0 { common::tanh_sinh_to_infinity(g, -hi.ln()) } else { common::tanh_sinh(g, -hi.ln(), -lo.ln()) };
        }
        let got = log_weighted_norm(&f, p).map_err(|e| e.to_string())?;
        worst[2] = worst[2].max(rel_err(got, expected.sqrt()));
    }
    for sigma in [0.25, 0.5, 0.75, 1.0, 1.5] {
        for m in [0.01, 1.0, 30.0] {
            let expected = common::tanh_sinh(|t: f64| t.powf(sigma - 1.0), 0.0, m)
                + common::tanh_sinh(|t: f64| t.powf(sigma - 2.0) * m, m, 2.0 * m);
            worst[3] = worst[3].max(rel_err(converse_rhs_integral(m, sigma), expected));
        }
    }
    for (space, center) in [
        (AnalyticSpace::EuclideanLebesgue { dim: 2 }, vec![0.0f64, 0.0]),
        (AnalyticSpace::EuclideanLebesgue { dim: 3 }, vec![0.0, 0.0, 0.0]),
        (AnalyticSpace::AppendixPlane, vec![0.2, 0.0]),
        (AnalyticSpace::AppendixPlane, vec![0.6, -0.3]),
    ] {
        for (r, s) in [(0.5, 1.0), (1.3, 0.5), (0.9, 0.75)] {
            let tf = TestFunction::new(r, s).unwrap();
            let got = tf.l1_norm_analytic(&space, &center).map_err(|e| e.to_string())?;
            // layer cake: int_0^{r^s} mu(B(x0, r - lambda^{1/s})) d lambda, split where the ball crosses a line
            let mut cuts = vec![0.0, tf.sup()];
            for edge in [center[0].abs(), (1.0 - center[0]).abs()] {
                if matches!(space, AnalyticSpace::AppendixPlane) && edge < r {
                    cuts.push((r - edge).powf(s));
                }
            }
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let layer = |lambda: f64| space.ball_measure(&center, r - lambda.powf(1.0 / s)).unwrap_or(0.0);
            let expected: f64 = cuts.windows(2).map(|w| common::tanh_sinh(layer, w[0], w[1])).sum();
            worst[4] = worst[4].max(rel_err(got, expected));
        }
    }
    for (name, err) in names.iter().zip(worst) {
        ensure(err <= 1e-8, || format!("{name}: closed form vs quadrature {err:e}"))?;
    }
    let worst_quad = worst.iter().copied().fold(0.0, f64::max);
    Ok(format!(
        "phi phi' {worst_dual:.1e}, dilation {worst_dilation:.1e}, min Hölder slack {min_slack:.1e}, quadrature {worst_quad:.1e}"
    ))
}

/// 7. The plane with two weighted lines: lower bounded, not almost continuous.
fn appendix_counterexample() -> Outcome {
    let space = AnalyticSpace::AppendixPlane;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = f64::INFINITY;
    for _ in 0..10_000 {
        let x = vec![rng.random_range(-1.0..2.0), rng.random_range(-1.5..1.5)];
        let r = 10f64.powf(rng.random_range(-3.0..1.0));
        let mu = space.ball_measure(&x, r).map_err(|e| e.to_string())?;
        worst = worst.min(mu / (r * r / 4.0));
    }
    ensure(worst >= 1.0, || format!("mu(B) / (r^2/4) dropped to {worst}"))?;
    let mut notes = vec![format!("min mu(B)/(r^2/4) = {worst:.2}")];
    for a in [1e-1, 1e-2, 1e-3] {
        // just above the mass of the square B((a, 0), a), where the line at x = 0 enters
        let t = 4.0 * a * a * (1.0 + 1e-4);
        let rep = almost_continuity_check(&space, 2.0, &[t], &[vec![a, 0.0]]).map_err(|e| e.to_string())?;
        let bound = (1.0 + 1.0 / (2.0 * a)) * (1.0 - 1e-3);
        ensure(rep.max_required_c >= bound, || format!("a={a}: required c {} < {bound}", rep.max_required_c))?;
        ensure(!rep.all_succeeded(), || format!("a={a}: c = 2 unexpectedly certified"))?;
        notes.push(format!("a={a}: c >= {:.1}", rep.max_required_c));
    }
    Ok(notes.join("; "))
}

fn embedding_family(
    space: &DiscreteSpace<f64>,
    s: f64,
    alpha: f64,
    spec: RiSpaceSpec<f64>,
    case: EmbeddingCase,
    seed: u64,
) -> Result<(ConstantSpread<f64>, bool), String> {
    let coords = space.coordinates().expect("grid has coordinates").to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dp = DistancePowers::new(space, s);
    let mut constants = Vec::new();
    let mut divergent = true;
    for _ in 0..20 {
        let f = space.sample(compact_field(&mut rng, &coords)).map_err(|e| e.to_string())?;
        let pair = canonical_gradient_with(&dp, &f).map_err(|e| e.to_string())?;
        let rep = embedding_report(&pair, alpha, &spec, Some(case)).map_err(|e| e.to_string())?;
        ensure(rep.empirical_constant.is_finite() && rep.empirical_constant > 0.0, || {
            format!("{case}: constant {}", rep.empirical_constant)
        })?;
        divergent &= rep.doublestar_divergent == Some(true);
        constants.push(rep.empirical_constant);
    }
    Ok((ConstantSpread::of(constants).expect("twenty constants"), divergent))
}

/// 8. Embedding regimes.
fn embedding_cases() -> Outcome {
    let plane = uniform_grid::<f64>(2, 32, 0.0, 2.0).map_err(|e| e.to_string())?;
    let line = uniform_grid::<f64>(1, 256, 0.0, 2.0).map_err(|e| e.to_string())?;
    let lp = |p: f64| RiSpaceSpec::lp(p).expect("valid exponent");
    let runs = [
        ("sobolev", &plane, 1.0, 2.0, lp(4.0 / 3.0), EmbeddingCase::Sobolev),
        ("logarithmic", &plane, 1.0, 2.0, lp(2.0), EmbeddingCase::Logarithmic),
        ("bounded", &plane, 1.0, 2.0, lp(4.0), EmbeddingCase::Bounded),
        ("critical", &line, 1.0, 1.0, lp(1.0), EmbeddingCase::Critical),
        ("supercritical", &line, 1.5, 1.0, lp(2.0), EmbeddingCase::Supercritical),
    ];
    let mut notes = Vec::new();
    for (k, (name, space, s, alpha, spec, case)) in runs.into_iter().enumerate() {
        let (spread, divergent) = embedding_family(space, s, alpha, spec, case, 80 + k as u64)?;
        ensure(spread.bounded_by(10.0), || format!("{name}: constants spread {:.2}", spread.spread))?;
        if case == EmbeddingCase::Bounded {
            ensure(divergent, || "bounded: weighted f** norm should diverge".to_string())?;
        }
        notes.push(format!("{name} [{:.3}, {:.3}]", spread.min, spread.max));
    }
    Ok(notes.join("; "))
}

/// Name, check and time budget.
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 8] = [
        ("rearrangement exactness", rearrangement_exactness, Duration::from_secs(5)),
        ("oscillation inequality", oscillation_inequality, Duration::from_secs(120)),
        ("test-function distribution", distribution_law, Duration::from_secs(10)),
        ("converse chain", converse_chain, Duration::from_secs(10)),
        ("minimal gradient optimality", minimal_gradient_optimality, Duration::from_secs(60)),
        ("r.i. machinery", ri_machinery, Duration::from_secs(120)),
        ("plane counterexample", appendix_counterexample, Duration::from_secs(5)),
        ("embedding cases", embedding_cases, Duration::from_secs(120)),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failures = 0;
    let mut out = std::io::stdout();
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(note) if elapsed > *budget => Err(format!("{note}; took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        let line = match &result {
            Ok(note) => format!("criterion {} PASS {name} ({elapsed:.2?}): {note}", k + 1),
            Err(why) => {
                failures += 1;
                format!("criterion {} FAIL {name} ({elapsed:.2?}): {why}", k + 1)
            }
        };
        writeln!(out, "{line}").expect("stdout");
    }
    if failures > 0 {
        writeln!(out, "{failures} acceptance criteria failed").expect("stdout");
        std::process::exit(1);
    }
}
