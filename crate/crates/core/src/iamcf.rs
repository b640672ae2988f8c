//! Inverse anisotropic mean curvature flow `∂_t X = ν_F / H_F` on radial
//! graphs. For a graph `x = c + rθ` the normal speed `F(ν)/H_F` becomes
//!
//! ```text
//! ∂_t r = F(ν)·√(r² + |∇r|²) / (H_F · r)
//! ```
//!
//! which is integrated with Heun's method. The modified flow
//! `Σ̂_t = e^{-t/n} Σ_t + (1 − e^{-t/n}) P` is obtained by rescaling the
//! stored surface when diagnostics are recorded.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Float;

use crate::hypersurface::{GeometryCache, StarSurface};
use crate::linalg::{self, Vector};
use crate::minkowski::{make_wulff, MinkowskiNorm};
use crate::sphere_grid::{fornberg_weights, SphereGrid};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FlowConfig {
    pub end_time: f64,
    /// Fraction of the explicit stability limit used for each step.
    pub cfl: f64,
    pub max_steps: usize,
    /// Center `P` of the modified (rescaled) flow.
    pub rescale_center: Vector,
    /// Record diagnostics every `cadence` steps (the first and last state are always recorded).
    pub cadence: usize,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            end_time: 1.0,
            cfl: 0.8,
            max_steps: 2_000_000,
            rescale_center: linalg::ZERO,
            cadence: 10,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.end_time > 0.0) || !self.end_time.is_finite() {
            return Err(Error::InvalidParameter("flow end time must be positive"));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidParameter("CFL factor must lie in (0, 1]"));
        }
        if self.cadence == 0 {
            return Err(Error::InvalidParameter(
                "diagnostic cadence must be at least 1",
            ));
        }
        Ok(())
    }
}

/// Diagnostics at one recorded time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    pub t: f64,
    /// Step size used to reach `t` (0 for the initial sample).
    pub dt: f64,
    /// `Q(Σ̂_t)` with respect to the rescale center.
    pub q: f64,
    /// `|Σ_t|_F` of the unscaled surface.
    pub perimeter: f64,
    /// `Vol(Ω_t)` of the unscaled surface.
    pub volume: f64,
    /// `min H_F` on the unscaled surface.
    pub min_hf: f64,
    /// `min H_F` on the rescaled surface, `e^{t/n}·min_hf`.
    pub min_hf_rescaled: f64,
    /// Poincaré mean `a` of `r̂/ρ`.
    pub scale: f64,
    /// `sup |r̂/ρ − a|`
    pub sup_dist: f64,
    /// `min / max F⁰(x̂ − P)` over `Σ̂_t`.
    pub barrier_inner: f64,
    pub barrier_outer: f64,
    /// Right side of the `dQ/dt` formula evaluated on the surface.
    pub q_rate: f64,
    /// `∫ (F⁰(x̂−P)F(ν) − (x̂−P)·ν) dμ` on `Σ̂_t`.
    pub gap: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FlowTrace {
    pub samples: Vec<TraceSample>,
}

impl FlowTrace {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&TraceSample> {
        self.samples.last()
    }
}

#[derive(Debug, Clone)]
pub struct FlowOutcome {
    pub trace: FlowTrace,
    /// `Σ_T` as evolved (not rescaled).
    pub surface: StarSurface,
    /// `Σ̂_T = e^{-T/n} Σ_T + (1 − e^{-T/n}) P`.
    pub rescaled: StarSurface,
    pub steps: usize,
    /// `|Σ_0|_F`
    pub initial_perimeter: f64,
    /// `|W|_F` on the same grid.
    pub wulff_perimeter: f64,
}

impl FlowOutcome {
    /// Fitted limit scale `a` (Poincaré mean of `r̂/ρ` at `T`).
    pub fn fitted_scale(&self) -> f64 {
        self.trace.last().map_or(f64::NAN, |s| s.scale)
    }

    /// `(|Σ_0|_F / |W|_F)^{1/n}`, the scale compatible with perimeter conservation.
    pub fn perimeter_matched_scale(&self) -> f64 {
        let n = self.surface.dim() as f64;
        (self.initial_perimeter / self.wulff_perimeter).powf(1.0 / n)
    }
}

fn speed_from_geometry(surface: &StarSurface, geo: &GeometryCache) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(geo.len());
    for (i, &h) in geo.mean_curvature.iter().enumerate() {
        if !(h > 0.0) {
            return Err(Error::NotMeanConvex { node: i, value: h });
        }
        let v = geo.support[i] * geo.stretch[i] / (h * surface.radii()[i]);
        if !v.is_finite() {
            return Err(Error::NonFinite("radial speed"));
        }
        out.push(v);
    }
    Ok(out)
}

/// `∂_t r` at every node.
pub fn radial_speed(surface: &StarSurface, norm: &MinkowskiNorm) -> Result<Vec<f64>> {
    let geo = surface.geometry(norm)?;
    speed_from_geometry(surface, &geo)
}

fn filtered_speed(
    grid: &SphereGrid,
    surface: &StarSurface,
    geo: &GeometryCache,
) -> Result<Vec<f64>> {
    let mut v = speed_from_geometry(surface, geo)?;
    grid.polar_filter(&mut v);
    Ok(v)
}

/// Largest stable explicit step for the current surface, scaled by `cfl`.
pub fn stable_step(surface: &StarSurface, geo: &GeometryCache, cfl: f64) -> Result<f64> {
    let grid = surface.grid();
    let speed = speed_from_geometry(surface, geo)?;
    let mut rate: f64 = 0.0;
    for i in 0..geo.len() {
        let cos_angle = linalg::dot(&grid.nodes()[i], &geo.normals[i]);
        let lam = grid.second_derivative_bounds(i);
        let b = geo.symbol[i];
        let root = (b[0].max(0.0) * lam[0]).sqrt() + (b[1].max(0.0) * lam[1]).sqrt();
        rate = rate.max(speed[i] / geo.mean_curvature[i] * cos_angle * root * root);
    }
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::NonFinite("stability bound"));
    }
    Ok(cfl * 2.0 / rate)
}

fn heun(
    surface: &StarSurface,
    norm: &MinkowskiNorm,
    geo: &GeometryCache,
    dt: f64,
) -> Result<StarSurface> {
    let grid = surface.grid().clone();
    let k1 = filtered_speed(&grid, surface, geo)?;
    let mid: Vec<f64> = surface
        .radii()
        .iter()
        .zip(&k1)
        .map(|(r, k)| r + dt * k)
        .collect();
    let mid = surface.with_radii(mid)?;
    let geo_mid = mid.geometry(norm)?;
    let k2 = filtered_speed(&grid, &mid, &geo_mid)?;
    let next: Vec<f64> = surface
        .radii()
        .iter()
        .zip(k1.iter().zip(&k2))
        .map(|(r, (a, b))| r + 0.5 * dt * (a + b))
        .collect();
    if next.iter().any(|r| !r.is_finite()) {
        return Err(Error::NonFinite("radial update"));
    }
    surface.with_radii(next)
}

/// One Heun step of size `dt`.
pub fn step(surface: &StarSurface, norm: &MinkowskiNorm, dt: f64) -> Result<StarSurface> {
    let geo = surface.geometry(norm)?;
    heun(surface, norm, &geo, dt)
}

/// `Σ̂_t` for the unscaled surface `Σ_t`.
pub fn rescale(surface: &StarSurface, t: f64, center: Vector) -> Result<StarSurface> {
    let k = (-t / surface.dim() as f64).exp();
    surface.scaled(k, linalg::scale(&center, 1.0 - k))
}

struct Recorder<'a> {
    norm: &'a MinkowskiNorm,
    center: Vector,
    /// `1/F⁰(θ_i)`
    wulff: Vec<f64>,
    weights_total: f64,
}

impl Recorder<'_> {
    fn sample(
        &self,
        surface: &StarSurface,
        geo: &GeometryCache,
        t: f64,
        dt: f64,
    ) -> Result<TraceSample> {
        let n = surface.dim() as f64;
        let k = (-t / n).exp();
        let p = self.center;
        let grid = surface.grid();
        let volume = surface.volume();
        let perimeter = geo.aniso_perimeter();

        let mut m1 = 0.0;
        let mut inv_h = 0.0;
        let mut gap = 0.0;
        let mut inner = f64::INFINITY;
        let mut outer: f64 = 0.0;
        for i in 0..geo.len() {
            let y = linalg::sub(&geo.points[i], &p);
            let (f0, df0) = self.norm.dual_with_grad(&y)?;
            m1 += f0 * geo.aniso_area[i];
            inv_h += (linalg::dot(&df0, &geo.aniso_normals[i]) - 1.0) / geo.mean_curvature[i]
                * geo.aniso_area[i];
            gap += (f0 * geo.support[i] - linalg::dot(&y, &geo.normals[i])) * geo.area[i];
            inner = inner.min(k * f0);
            outer = outer.max(k * f0);
        }
        let scale_a = perimeter.powf(-1.0 - 1.0 / n);
        let q = scale_a * (m1 - volume);
        let q_rate = scale_a * (-m1 / n + (1.0 + 1.0 / n) * volume + inv_h);

        let ratio: Vec<f64> = surface
            .radii()
            .iter()
            .zip(&self.wulff)
            .map(|(r, w)| k * r / w)
            .collect();
        let a = grid.integrate(&ratio)? / self.weights_total;
        let sup_dist = ratio.iter().map(|x| (x - a).abs()).fold(0.0, f64::max);
        let min_hf = geo.min_mean_curvature();
        Ok(TraceSample {
            t,
            dt,
            q,
            perimeter,
            volume,
            min_hf,
            min_hf_rescaled: min_hf / k,
            scale: a,
            sup_dist,
            barrier_inner: inner,
            barrier_outer: outer,
            q_rate,
            gap: gap * k.powf(n + 1.0),
        })
    }
}

/// Runs the flow from `initial` to `config.end_time`.
pub fn run_flow(
    initial: &StarSurface,
    norm: &MinkowskiNorm,
    config: &FlowConfig,
) -> Result<FlowOutcome> {
    config.validate()?;
    let grid: Arc<SphereGrid> = initial.grid().clone();
    let wulff = make_wulff(norm, &grid)?;
    let recorder = Recorder {
        norm,
        center: config.rescale_center,
        wulff: wulff.radial().to_vec(),
        weights_total: grid.area(),
    };
    let mut surface = initial.clone();
    let mut geo = surface.geometry(norm)?;
    let initial_perimeter = geo.aniso_perimeter();
    let mut trace = FlowTrace::default();
    trace
        .samples
        .push(recorder.sample(&surface, &geo, 0.0, 0.0)?);

    let mut t = 0.0;
    let mut steps = 0;
    while t < config.end_time {
        if steps >= config.max_steps {
            return Err(Error::StepLimit { steps, time: t });
        }
        let mut dt = stable_step(&surface, &geo, config.cfl)?;
        if dt < 1e-14 * config.end_time {
            return Err(Error::StepCollapse { dt, time: t });
        }
        let last = t + dt >= config.end_time * (1.0 - 1e-14);
        if last {
            dt = config.end_time - t;
        }
        surface = heun(&surface, norm, &geo, dt)?;
        geo = surface.geometry(norm)?;
        t = if last { config.end_time } else { t + dt };
        steps += 1;
        if last || steps % config.cadence == 0 {
            trace.samples.push(recorder.sample(&surface, &geo, t, dt)?);
        }
    }
    let rescaled = rescale(&surface, t, config.rescale_center)?;
    Ok(FlowOutcome {
        trace,
        surface,
        rescaled,
        steps,
        initial_perimeter,
        wulff_perimeter: wulff.perimeter(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityReport {
    /// `max_k Q(t_{k+1}) − Q(t_k)`; non-positive for a monotone run.
    pub max_increment: f64,
    /// Max over interior samples of `|Q'_fd − Q'_formula| / max(|Q'_formula|, floor)`.
    pub rate_mismatch: f64,
    /// Second-order one-sided difference of `Q` at `t = 0`.
    pub initial_rate_fd: f64,
    /// Formula value of `dQ/dt` at `t = 0`.
    pub initial_rate_formula: f64,
    /// Largest recorded value of the formula (should be `<= 0`).
    pub max_rate_formula: f64,
}

impl MonotonicityReport {
    pub fn initial_rate_relative_error(&self) -> f64 {
        (self.initial_rate_fd - self.initial_rate_formula).abs()
            / self.initial_rate_formula.abs().max(1e-300)
    }
}

pub fn monotonicity_report(trace: &FlowTrace) -> Result<MonotonicityReport> {
    let s = &trace.samples;
    if s.len() < 2 {
        return Err(Error::InvalidParameter(
            "monotonicity report needs at least two samples",
        ));
    }
    let max_increment = s
        .windows(2)
        .map(|w| w[1].q - w[0].q)
        .fold(f64::NEG_INFINITY, f64::max);
    let max_rate_formula = s.iter().map(|x| x.q_rate).fold(f64::NEG_INFINITY, f64::max);
    let floor = s.iter().map(|x| x.q_rate.abs()).fold(0.0, f64::max) * 1e-3 + 1e-14;
    let mut rate_mismatch: f64 = 0.0;
    for w in s.windows(3) {
        let ts = [w[0].t, w[1].t, w[2].t];
        let c = &fornberg_weights(ts[1], &ts, 1)[1];
        let fd = c[0] * w[0].q + c[1] * w[1].q + c[2] * w[2].q;
        rate_mismatch = rate_mismatch.max((fd - w[1].q_rate).abs() / w[1].q_rate.abs().max(floor));
    }
    let (initial_rate_fd, initial_rate_formula) = if s.len() >= 3 {
        let ts = [s[0].t, s[1].t, s[2].t];
        let c = &fornberg_weights(ts[0], &ts, 1)[1];
        (c[0] * s[0].q + c[1] * s[1].q + c[2] * s[2].q, s[0].q_rate)
    } else {
        ((s[1].q - s[0].q) / (s[1].t - s[0].t), s[0].q_rate)
    };
    Ok(MonotonicityReport {
        max_increment,
        rate_mismatch,
        initial_rate_fd,
        initial_rate_formula,
        max_rate_formula,
    })
}

/// Least-squares fit `log sup_dist ≈ c + slope·t` over samples with
/// `t >= from` and `sup_dist > floor`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination of the fit.
    pub r_squared: f64,
    pub samples: usize,
    pub from: f64,
}

pub fn decay_fit(trace: &FlowTrace, from: f64, floor: f64) -> Option<DecayFit> {
    let pts: Vec<(f64, f64)> = trace
        .samples
        .iter()
        .filter(|s| s.t >= from && s.sup_dist > floor)
        .map(|s| (s.t, s.sup_dist.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let m = pts.len() as f64;
    let (mx, my) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x / m, b + y / m));
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in &pts {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Some(DecayFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
        samples: pts.len(),
        from,
    })
}

/// [`decay_fit`] over the last three quarters of the run, or from `min(1, T/4)`
/// when that tail already sits at the floor.
pub fn tail_decay_fit(trace: &FlowTrace, floor: f64) -> Option<DecayFit> {
    let end = trace.last()?.t;
    decay_fit(trace, 0.25 * end, floor).or_else(|| decay_fit(trace, (0.25 * end).min(1.0), floor))
}
