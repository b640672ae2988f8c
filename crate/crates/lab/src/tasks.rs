//! One function per task; each returns the results and the checks it ran.

use anyhow::{ensure, Result};
use serde_json::{json, Value};
use wulff_core::iamcf::{monotonicity_report, run_flow, tail_decay_fit, FlowOutcome};
use wulff_core::linalg;
use wulff_core::minkowski::{make_wulff, verify_duality};
use wulff_core::stability::{
    deficit_report, gap_integral, q_of_wulff, stability_sweep, Asymmetry, DeficitReport,
    HausdorffReport, SymmetricDifferencePath,
};
use wulff_core::MinkowskiNorm;

use crate::config::{RunConfig, Task};
use crate::report::{Check, RunReport};

/// Runs `task` (or the task named in the config) without touching the file system.
pub fn run(cfg: &RunConfig, task: Option<Task>) -> Result<RunReport> {
    let task = match task.or(cfg.task) {
        Some(t) => t,
        None => anyhow::bail!("no task given on the command line or in the configuration"),
    };
    let mut echo = cfg.clone();
    echo.task = Some(task);
    let config = serde_json::to_value(&echo)?;
    let norm = cfg.build_norm()?;
    let mut report = RunReport {
        task,
        config,
        results: Value::Null,
        checks: Vec::new(),
        trace: None,
        sweep: None,
    };
    let mut results = match task {
        Task::VerifyIdentities => verify_identities(cfg, &norm, &mut report.checks)?,
        Task::Flow | Task::Convergence => {
            let (results, outcome) =
                flow(cfg, &norm, task == Task::Convergence, &mut report.checks)?;
            report.trace = Some(outcome.trace);
            results
        }
        Task::Deficits => deficits(cfg, &norm, &mut report.checks)?,
        Task::StabilitySweep => {
            let (results, table) = sweep(cfg, &norm, &mut report.checks)?;
            report.sweep = Some(table);
            results
        }
    };
    results["norm"] = json!({
        "family": norm.family_name(),
        "lower_bound": norm.lower_bound(),
        "upper_bound": norm.upper_bound(),
        "convexity_margin": norm.convexity_margin(),
    });
    report.results = results;
    Ok(report)
}

fn verify_identities(
    cfg: &RunConfig,
    norm: &MinkowskiNorm,
    checks: &mut Vec<Check>,
) -> Result<Value> {
    let tol = cfg.identity_tolerance();
    let d = verify_duality(norm, cfg.samples, cfg.seed)?;
    checks.push(Check::at_most(
        "F(DF0(y)) - 1",
        d.norm_of_dual_gradient,
        tol,
    ));
    checks.push(Check::at_most("F0(DF(x)) - 1", d.dual_of_gradient, tol));
    checks.push(Check::at_most("DF(DF0(y)) F0(y) - y", d.inverse_map, tol));
    checks.push(Check::at_most(
        "Cauchy-Schwarz violation",
        d.cauchy_schwarz_violation,
        tol,
    ));
    checks.push(Check::at_most(
        "Cauchy-Schwarz equality at x = s DF0(y)",
        d.equality_gap,
        tol,
    ));
    checks.push(Check::at_most(
        "Cauchy-Schwarz equality at x = s DF(y)",
        d.equality_gap_swapped,
        tol,
    ));

    let grid = cfg.build_grid()?;
    let n = grid.dim();
    let wulff = make_wulff(norm, &grid)?;
    let invariant = wulff.invariant_residual() / wulff.perimeter();
    checks.push(Check::at_most(
        "|W|_F vs (n+1)Vol(L), relative",
        invariant,
        cfg.tolerances.wulff_invariant,
    ));

    let surface = wulff.scaled_surface(1.0, linalg::ZERO)?;
    let geo = surface.geometry(norm)?;
    let curvature = geo
        .mean_curvature
        .iter()
        .map(|h| (h - n as f64).abs())
        .fold(0.0, f64::max);
    checks.push(Check::at_most(
        "max |H_F - n| on W",
        curvature,
        cfg.tolerances.wulff_curvature,
    ));
    let mut euler: f64 = 0.0;
    let mut therho: f64 = 0.0;
    for i in 0..geo.len() {
        euler =
            euler.max((linalg::dot(&geo.aniso_normals[i], &geo.normals[i]) - geo.support[i]).abs());
        therho = therho.max((norm.eval_dual(&grid.nodes()[i])? * wulff.radial()[i] - 1.0).abs());
    }
    checks.push(Check::at_most(
        "Euler relation DF(nu).nu - F(nu)",
        euler,
        tol,
    ));
    checks.push(Check::at_most("F0(theta) rho(theta) - 1", therho, tol));
    let q = surface.q_functional(norm, linalg::ZERO)?;
    let q_expected = q_of_wulff(n, wulff.volume());
    checks.push(Check::at_most(
        "Q(W) vs n (n+1)^(-1-1/n) Vol(L)^(-1/n), relative",
        (q - q_expected).abs() / q_expected,
        cfg.tolerances.wulff_invariant,
    ));

    Ok(json!({
        "duality": {
            "samples": d.samples,
            "norm_of_dual_gradient": d.norm_of_dual_gradient,
            "dual_of_gradient": d.dual_of_gradient,
            "inverse_map": d.inverse_map,
            "cauchy_schwarz_violation": d.cauchy_schwarz_violation,
            "equality_gap": d.equality_gap,
            "equality_gap_swapped": d.equality_gap_swapped,
            "max_residual": d.max_residual(),
            "uniform_positivity": norm.uniform_positivity(),
        },
        "wulff": {
            "volume": wulff.volume(),
            "perimeter": wulff.perimeter(),
            "invariant_relative_residual": invariant,
            "max_curvature_error": curvature,
            "euler_residual": euler,
            "radial_residual": therho,
            "q": q,
            "q_expected": q_expected,
        },
    }))
}

fn flow(
    cfg: &RunConfig,
    norm: &MinkowskiNorm,
    convergence: bool,
    checks: &mut Vec<Check>,
) -> Result<(Value, FlowOutcome)> {
    let tol = &cfg.tolerances;
    let grid = cfg.build_grid()?;
    let surface = cfg.build_surface(&grid, norm)?;
    let fc = cfg.flow_config()?;
    let out = run_flow(&surface, norm, &fc)?;
    let trace = &out.trace;
    ensure!(trace.len() >= 2, "flow recorded fewer than two samples");
    let first = trace.samples[0];
    let last = *trace.last().expect("non-empty trace");

    let law = trace
        .samples
        .iter()
        .map(|s| (s.perimeter / (first.perimeter * s.t.exp()) - 1.0).abs())
        .fold(0.0, f64::max);
    checks.push(Check::at_most(
        "|S_t|_F / (e^t |S_0|_F) - 1 along the trace",
        law,
        tol.perimeter_law,
    ));
    let mono = monotonicity_report(trace)?;
    checks.push(Check::at_most(
        "max Q increment between samples",
        mono.max_increment,
        tol.monotonicity,
    ));
    let min_hf = trace
        .samples
        .iter()
        .map(|s| s.min_hf)
        .fold(f64::INFINITY, f64::min);
    checks.push(Check::at_least(
        "min H_F along the trace",
        min_hf,
        f64::MIN_POSITIVE,
    ));
    let inner = trace
        .samples
        .iter()
        .map(|s| s.barrier_inner)
        .fold(f64::INFINITY, f64::min);
    let outer = trace
        .samples
        .iter()
        .map(|s| s.barrier_outer)
        .fold(0.0, f64::max);
    checks.push(Check::at_least(
        "min F0(x - P) on rescaled surfaces / initial",
        inner / first.barrier_inner,
        1.0 - tol.barrier,
    ));
    checks.push(Check::at_most(
        "max F0(x - P) on rescaled surfaces / initial",
        outer / first.barrier_outer,
        1.0 + tol.barrier,
    ));

    let fit = tail_decay_fit(trace, tol.decay_floor);
    if convergence {
        checks.push(Check::at_most(
            "final sup |r/rho - a|",
            last.sup_dist,
            tol.convergence,
        ));
        match fit {
            Some(f) => {
                checks.push(Check::at_most(
                    "decay slope of log sup distance",
                    f.slope,
                    -f64::MIN_POSITIVE,
                ));
                checks.push(Check::at_least(
                    "decay fit r^2",
                    f.r_squared,
                    tol.decay_r_squared,
                ));
            }
            // too few samples above the floor: fine only if the run already sits below it
            None => checks.push(Check::at_most(
                "final sup distance (below decay floor)",
                last.sup_dist,
                tol.decay_floor,
            )),
        }
    }

    let results = json!({
        "steps": out.steps,
        "end_time": last.t,
        "samples": trace.len(),
        "initial_perimeter": out.initial_perimeter,
        "final_perimeter": last.perimeter,
        "perimeter_ratio": last.perimeter / out.initial_perimeter,
        "perimeter_law_max_error": law,
        "initial_volume": first.volume,
        "final_volume": last.volume,
        "q_initial": first.q,
        "q_final": last.q,
        "monotonicity": {
            "max_increment": mono.max_increment,
            "rate_mismatch": mono.rate_mismatch,
            "initial_rate_fd": mono.initial_rate_fd,
            "initial_rate_formula": mono.initial_rate_formula,
            "initial_rate_relative_error": mono.initial_rate_relative_error(),
            "max_rate_formula": mono.max_rate_formula,
        },
        "min_hf": min_hf,
        "min_hf_rescaled_final": last.min_hf_rescaled,
        "barrier": {
            "inner_initial": first.barrier_inner,
            "outer_initial": first.barrier_outer,
            "inner_min": inner,
            "outer_max": outer,
        },
        "limit_scale": {
            "fitted": out.fitted_scale(),
            "perimeter_matched": out.perimeter_matched_scale(),
            "initial_perimeter": out.initial_perimeter,
        },
        "sup_dist_final": last.sup_dist,
        "decay_fit": fit.map(|f| json!({
            "from": f.from,
            "floor": tol.decay_floor,
            "slope": f.slope,
            "intercept": f.intercept,
            "r_squared": f.r_squared,
            "samples": f.samples,
        })),
        "rescaled_center": out.rescaled.center(),
        "gap_final": last.gap,
    });
    Ok((results, out))
}

fn asymmetry_json(a: &Asymmetry) -> Value {
    json!({
        "alpha": a.alpha,
        "center": a.center,
        "scale": a.scale,
        "path": match a.path {
            SymmetricDifferencePath::Radial => "radial",
            SymmetricDifferencePath::MonteCarlo => "monte-carlo",
        },
        "converged": a.converged,
        "evaluations": a.evaluations,
    })
}

fn hausdorff_json(h: &HausdorffReport) -> Value {
    json!({
        "scale": h.scale,
        "volume_scale": h.volume_scale,
        "sup_norm": h.sup_norm,
        "distance": h.distance,
        "bound": h.bound,
    })
}

fn deficit_json(r: &DeficitReport) -> Value {
    json!({
        "eps1": r.eps1,
        "momentum": r.momentum.iter().map(|m| json!({
            "p": m.p,
            "deficit": m.deficit,
            "holder_bound": m.holder_bound,
            "linear_bound": m.linear_bound,
        })).collect::<Vec<_>>(),
        "asymmetry": asymmetry_json(&r.asymmetry),
        "hausdorff": hausdorff_json(&r.hausdorff),
        "gap": {
            "surface_form": r.gap.surface_form,
            "normalized_form": r.gap.normalized_form,
            "divergence_form": r.gap.divergence_form,
            "identity_residual": r.gap.identity_residual,
            "gradient_energy": r.gap.gradient_energy,
            "ratio": r.gap.ratio,
        },
        "quantitative_wulff": {
            "alpha_squared": r.quantitative.alpha_squared,
            "deficit": r.quantitative.deficit,
            "ratio": r.quantitative.ratio,
        },
        "f1": r.f1,
        "f2": r.f2,
    })
}

fn deficits(cfg: &RunConfig, norm: &MinkowskiNorm, checks: &mut Vec<Check>) -> Result<Value> {
    let tol = cfg.tolerances.deficit;
    let grid = cfg.build_grid()?;
    let surface = cfg.build_surface(&grid, norm)?;
    let wulff = make_wulff(norm, &grid)?;
    let p = cfg.center_point()?;
    let r = deficit_report(&surface, &wulff, p, &cfg.exponents, cfg.seed)?;
    checks.push(Check::at_least("eps1", r.eps1, -tol));
    for m in &r.momentum {
        checks.push(Check::at_least(
            format!("eps_p (p = {})", m.p),
            m.deficit,
            -tol,
        ));
        checks.push(Check::at_least(
            format!("eps_p - Holder bound (p = {})", m.p),
            m.deficit - m.holder_bound,
            -tol,
        ));
    }
    checks.push(Check::at_least("gap integral", r.gap.surface_form, -tol));
    if let Some(res) = r.gap.identity_residual {
        checks.push(Check::at_most(
            "gap divergence-form residual",
            res,
            cfg.tolerances.gap_identity,
        ));
    }
    checks.push(Check::holds(
        "0 <= alpha_F <= 2",
        (0.0..=2.0).contains(&r.asymmetry.alpha),
    ));
    checks.push(Check::at_least(
        "isoperimetric deficit",
        r.quantitative.deficit,
        -tol,
    ));
    let mut results = deficit_json(&r);
    results["mean_convex"] = json!(surface.geometry(norm)?.min_mean_curvature() > 0.0);
    results["volume"] = json!(surface.volume());
    results["aniso_perimeter"] = json!(surface.aniso_perimeter(norm)?);
    Ok(results)
}

fn sweep(
    cfg: &RunConfig,
    norm: &MinkowskiNorm,
    checks: &mut Vec<Check>,
) -> Result<(Value, wulff_core::stability::SweepTable)> {
    let tol = &cfg.tolerances;
    let grid = cfg.build_grid()?;
    let wulff = make_wulff(norm, &grid)?;
    let (p, family) = cfg.build_family(&grid)?;
    let center = cfg.center_point()?;
    let table = stability_sweep(&family, &wulff, center, p, cfg.seed)?;
    for row in &table.rows {
        checks.push(Check::at_least(
            format!("eps1 (delta = {})", row.delta),
            row.eps1,
            -tol.deficit,
        ));
        checks.push(Check::at_least(
            format!("eps_p (delta = {})", row.delta),
            row.eps_p,
            -tol.deficit,
        ));
        checks.push(Check::at_least(
            format!("isoperimetric deficit (delta = {})", row.delta),
            row.isoperimetric_deficit,
            -tol.deficit,
        ));
    }
    let finite = table
        .rows
        .iter()
        .all(|r| r.ratio_alpha.is_finite() && r.ratio_hausdorff.is_finite());
    checks.push(Check::holds("sweep ratios finite", finite));
    checks.push(Check::at_most(
        "spread of alpha_F / f1(eps1)",
        table.alpha_ratio_spread(),
        tol.ratio_spread,
    ));
    checks.push(Check::at_most(
        "spread of d_H / f2(eps1)",
        table.hausdorff_ratio_spread(),
        tol.ratio_spread,
    ));
    checks.push(Check::at_most(
        "spread of alpha_F^2 / deficit",
        table.quantitative_ratio_spread(),
        tol.ratio_spread,
    ));
    checks.push(Check::holds(
        "numerators and denominators monotone in delta",
        table.monotone(),
    ));

    let mut gaps = Vec::new();
    for (delta, s) in &family {
        let g = gap_integral(s, norm, center)?;
        gaps.push(json!({"delta": delta, "surface_form": g.surface_form, "ratio": g.ratio}));
    }
    let results = json!({
        "p": table.p,
        "rows": table.rows.len(),
        "alpha_ratio_spread": table.alpha_ratio_spread(),
        "hausdorff_ratio_spread": table.hausdorff_ratio_spread(),
        "quantitative_ratio_spread": table.quantitative_ratio_spread(),
        "monotone": table.monotone(),
        "bounded": table.bounded(tol.ratio_spread),
        "zero_over_zero": table.rows.iter().any(|r| r.zero_over_zero),
        "gap": gaps,
    });
    Ok((results, table))
}
