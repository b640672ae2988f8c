//! Isoperimetric deficits and the distances they control: asymmetry index,
//! Hausdorff distance to a fitted Wulff shape, the gap integral and the
//! moduli `f₁`, `f₂`.

use alloc::vec::Vec;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hypersurface::StarSurface;
use crate::iamcf::FlowTrace;
use crate::linalg::{self, Vector};
use crate::minkowski::{MinkowskiNorm, WulffShape};
use crate::optimize::NelderMead;
use crate::{Error, Result};

/// `Q(W + P) = n (n+1)^{-1-1/n} Vol(L)^{-1/n}`.
pub fn q_of_wulff(n: usize, wulff_volume: f64) -> f64 {
    let n = n as f64;
    n * (n + 1.0).powf(-1.0 - 1.0 / n) * wulff_volume.powf(-1.0 / n)
}

/// `ε₁ = Q(Σ) − Q(W + P)`.
pub fn deficit_thm11(surface: &StarSurface, wulff: &WulffShape, center: Vector) -> Result<f64> {
    let q = surface.q_functional(wulff.norm(), center)?;
    Ok(q - q_of_wulff(surface.dim(), wulff.volume()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumDeficit {
    pub p: f64,
    /// `∫F⁰(x−P)^p dμ_F / (|Σ|_F Vol(Ω)^{p/(n+1)}) − Vol(L)^{-p/(n+1)}`
    pub deficit: f64,
    /// `X^p − ℓ^p`, the lower bound obtained from Hölder's inequality and `ε₁`.
    pub holder_bound: f64,
    /// `p ℓ^{p−1}` times the `p = 1` deficit, a lower bound for `holder_bound`.
    pub linear_bound: f64,
}

pub fn deficit_pmomentum(
    surface: &StarSurface,
    wulff: &WulffShape,
    center: Vector,
    p: f64,
) -> Result<MomentumDeficit> {
    if !(p >= 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    let n = surface.dim();
    let norm = wulff.norm();
    let geo = surface.geometry(norm)?;
    let area = geo.aniso_perimeter();
    let vol = surface.volume();
    let e = 1.0 / (n as f64 + 1.0);
    let mp = geo.weighted_momentum(norm, center, p)?;
    let ell = wulff.volume().powf(-e);
    let deficit = mp / (area * vol.powf(p * e)) - ell.powf(p);

    let eps1 = geo.q_functional(norm, center, vol, n)? - q_of_wulff(n, wulff.volume());
    let x = ((eps1 + q_of_wulff(n, wulff.volume())) * area.powf(1.0 + 1.0 / n as f64) + vol)
        / (area * vol.powf(e));
    let holder_bound = x.powf(p) - ell.powf(p);
    let linear_bound = p * ell.powf(p - 1.0) * (x - ell);
    Ok(MomentumDeficit {
        p,
        deficit,
        holder_bound,
        linear_bound,
    })
}

/// Barycenter of the enclosed domain.
pub fn barycenter(surface: &StarSurface) -> Vector {
    let grid = surface.grid();
    let n2 = grid.ambient_dim() as i32 + 1;
    let mut m = linalg::ZERO;
    for ((t, r), w) in grid.nodes().iter().zip(surface.radii()).zip(grid.weights()) {
        m = linalg::axpy(&m, w * r.powi(n2) / n2 as f64, t);
    }
    linalg::axpy(&surface.center(), 1.0 / surface.volume(), &m)
}

/// Distance `s > 0` along `θ` from `origin` to `{F⁰(· − P) = a}`, where
/// `offset = origin − P` must satisfy `F⁰(offset) < a`.
fn wulff_ray(norm: &MinkowskiNorm, offset: &Vector, theta: &Vector, a: f64) -> Result<f64> {
    let back = norm.eval_dual(&linalg::scale(offset, -1.0))?;
    // F⁰(offset + sθ) ≥ sF⁰(θ) − F⁰(−offset), so this lies beyond the crossing.
    let mut s = (a + back) / norm.eval_dual(theta)?;
    // s ↦ F⁰(offset + sθ) is convex; Newton from the right decreases monotonically.
    for _ in 0..100 {
        let y = linalg::axpy(offset, s, theta);
        let (v, g) = norm.dual_with_grad(&y)?;
        let slope = linalg::dot(&g, theta);
        if !(slope > 0.0) {
            return Err(Error::NonFinite("Wulff ray slope"));
        }
        let ds = (v - a) / slope;
        s -= ds;
        if ds.abs() <= 1e-15 * s.abs().max(1e-300) {
            break;
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetricDifferencePath {
    /// Both sets graphed over the surface's own center.
    Radial,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Asymmetry {
    /// `α_F = min_{P'} |Ω △ L_a(P')| / Vol(Ω)`
    pub alpha: f64,
    pub center: Vector,
    /// `a` with `Vol(L_a) = Vol(Ω)`.
    pub scale: f64,
    pub path: SymmetricDifferencePath,
    pub converged: bool,
    pub evaluations: usize,
}

const MONTE_CARLO_SAMPLES: usize = 200_000;

/// `|Ω △ L_a(P')|`, evaluated radially about the surface center when it lies
/// inside `L_a(P')`, by seeded Monte Carlo otherwise.
pub fn symmetric_difference(
    surface: &StarSurface,
    norm: &MinkowskiNorm,
    scale: f64,
    wulff_center: Vector,
    seed: u64,
) -> Result<(f64, SymmetricDifferencePath)> {
    let grid = surface.grid();
    let c = surface.center();
    let offset = linalg::sub(&c, &wulff_center);
    let n1 = grid.ambient_dim() as i32;
    if norm.eval_dual(&offset)? < scale * (1.0 - 1e-9) {
        let mut total = 0.0;
        for ((t, r), w) in grid.nodes().iter().zip(surface.radii()).zip(grid.weights()) {
            let s = wulff_ray(norm, &offset, t, scale)?;
            total += w * (r.powi(n1) - s.powi(n1)).abs();
        }
        return Ok((total / n1 as f64, SymmetricDifferencePath::Radial));
    }
    let interp = grid.interpolant(surface.radii())?;
    let dim = grid.ambient_dim();
    let rmax = surface.radii().iter().cloned().fold(0.0, f64::max);
    let wmax = 1.05 * scale * norm.upper_bound();
    let mut lo = [0.0; 3];
    let mut hi = [0.0; 3];
    for k in 0..dim {
        lo[k] = (c[k] - rmax).min(wulff_center[k] - wmax);
        hi[k] = (c[k] + rmax).max(wulff_center[k] + wmax);
    }
    let boxvol: f64 = (0..dim).map(|k| hi[k] - lo[k]).product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..MONTE_CARLO_SAMPLES {
        let mut q = [0.0; 3];
        for k in 0..dim {
            q[k] = rng.gen_range(lo[k]..hi[k]);
        }
        let d = linalg::sub(&q, &c);
        let dn = linalg::norm(&d);
        let in_omega = dn == 0.0 || dn <= interp.eval(&linalg::scale(&d, 1.0 / dn));
        let in_wulff = norm.eval_dual(&linalg::sub(&q, &wulff_center))? <= scale;
        if in_omega != in_wulff {
            hits += 1;
        }
    }
    Ok((
        boxvol * hits as f64 / MONTE_CARLO_SAMPLES as f64,
        SymmetricDifferencePath::MonteCarlo,
    ))
}

pub fn asymmetry_index(surface: &StarSurface, wulff: &WulffShape, seed: u64) -> Result<Asymmetry> {
    let norm = wulff.norm();
    let dim = surface.grid().ambient_dim();
    let vol = surface.volume();
    let scale = (vol / wulff.volume()).powf(1.0 / dim as f64);
    let start = barycenter(surface);
    let mut evaluations = 0usize;
    let mut failure = None;
    let objective = |p: &[f64]| {
        evaluations += 1;
        let mut c = linalg::ZERO;
        c[..dim].copy_from_slice(p);
        match symmetric_difference(surface, norm, scale, c, seed) {
            Ok((v, _)) => v / vol,
            Err(e) => {
                failure = Some(e);
                f64::INFINITY
            }
        }
    };
    let rmin = wulff.radial().iter().cloned().fold(f64::INFINITY, f64::min);
    let nm = NelderMead {
        initial_step: 0.05 * scale * rmin,
        x_tol: 1e-10 * scale,
        f_tol: 1e-15,
        max_iterations: 1000,
    };
    let best = nm.minimize(objective, &start[..dim]);
    if let Some(e) = failure {
        return Err(e);
    }
    let mut center = linalg::ZERO;
    center[..dim].copy_from_slice(&best.point);
    let (alpha, path) = symmetric_difference(surface, norm, scale, center, seed)?;
    Ok(Asymmetry {
        alpha: (alpha / vol).min(2.0),
        center,
        scale,
        path,
        converged: best.converged,
        evaluations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HausdorffReport {
    /// Poincaré mean `(1/|S^n|) ∫ r/ρ`.
    pub scale: f64,
    /// Volume-matching scale `(Vol(Ω)/Vol(L))^{1/(n+1)}`.
    pub volume_scale: f64,
    /// `max |r − aρ|`
    pub sup_norm: f64,
    /// Two-sided Hausdorff distance between `Σ` and `aW + c`.
    pub distance: f64,
    /// `sup_norm·(1 + max|∇ρ|/min ρ)`
    pub bound: f64,
}

/// Closest distance from `x` to a radial graph `c + R(θ)θ`, starting from a
/// cloud of node points and refined locally in angle.
fn point_to_graph<R: Fn(&Vector) -> f64>(
    x: &Vector,
    c: &Vector,
    cloud: &[Vector],
    radius: R,
    dim: usize,
    h: f64,
) -> f64 {
    let (mut best, mut bi) = (f64::INFINITY, 0);
    for (i, y) in cloud.iter().enumerate() {
        let d = linalg::norm(&linalg::sub(x, y));
        if d < best {
            best = d;
            bi = i;
        }
    }
    let y0 = linalg::sub(&cloud[bi], c);
    let dir0 = linalg::normalize(&y0);
    let dist = |dir: &Vector| linalg::norm(&linalg::sub(x, &linalg::axpy(c, radius(dir), dir)));
    if dim == 2 {
        let t0 = dir0[1].atan2(dir0[0]);
        let f = |t: f64| dist(&[t.cos(), t.sin(), 0.0]);
        // golden-section search on [t0 − h, t0 + h]
        let g = 0.5 * (5.0.sqrt() - 1.0);
        let (mut a, mut b) = (t0 - h, t0 + h);
        let mut x1 = b - g * (b - a);
        let mut x2 = a + g * (b - a);
        let (mut f1, mut f2) = (f(x1), f(x2));
        for _ in 0..80 {
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - g * (b - a);
                f1 = f(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + g * (b - a);
                f2 = f(x2);
            }
        }
        return best.min(f1.min(f2));
    }
    let [e1, e2] = linalg::complement_basis(&dir0, 3);
    let nm = NelderMead {
        initial_step: 0.5 * h,
        x_tol: 1e-12,
        f_tol: 1e-16,
        max_iterations: 400,
    };
    let m = nm.minimize(
        |p| {
            dist(&linalg::normalize(&linalg::axpy(
                &linalg::axpy(&dir0, p[0], &e1),
                p[1],
                &e2,
            )))
        },
        &[0.0, 0.0],
    );
    best.min(m.value)
}

pub fn hausdorff_to_wulff(surface: &StarSurface, wulff: &WulffShape) -> Result<HausdorffReport> {
    let grid = surface.grid();
    let norm = wulff.norm();
    let c = surface.center();
    let rho = wulff.radial();
    let ratio: Vec<f64> = surface
        .radii()
        .iter()
        .zip(rho)
        .map(|(r, p)| r / p)
        .collect();
    let scale = grid.integrate(&ratio)? / grid.area();
    let volume_scale = (surface.volume() / wulff.volume()).powf(1.0 / grid.ambient_dim() as f64);
    let sup_norm = surface
        .radii()
        .iter()
        .zip(rho)
        .map(|(r, p)| (r - scale * p).abs())
        .fold(0.0, f64::max);

    let sigma = surface.points();
    let target: Vec<Vector> = grid
        .nodes()
        .iter()
        .zip(rho)
        .map(|(t, p)| linalg::axpy(&c, scale * p, t))
        .collect();
    let interp = grid.interpolant(surface.radii())?;
    let h = 2.0 * grid.spacing();
    let dim = grid.ambient_dim();
    let wulff_radius = |d: &Vector| scale / norm.eval_dual(d).unwrap_or(f64::NAN);
    let mut distance: f64 = 0.0;
    for x in &sigma {
        distance = distance.max(point_to_graph(x, &c, &target, wulff_radius, dim, h));
    }
    for y in &target {
        distance = distance.max(point_to_graph(y, &c, &sigma, |d| interp.eval(d), dim, h));
    }
    if !distance.is_finite() {
        return Err(Error::NonFinite("Hausdorff distance"));
    }
    let grad = grid.sphere_gradient(rho)?;
    let gmax = grad.iter().map(linalg::norm).fold(0.0, f64::max);
    let rmin = rho.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(HausdorffReport {
        scale,
        volume_scale,
        sup_norm,
        distance,
        bound: sup_norm * (1.0 + gmax / rmin),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    /// `∫ (F⁰(x−P)F(ν) − (x−P)·ν) dμ`
    pub surface_form: f64,
    /// `∫ (F(ν) − (x−P)·ν / F⁰(x−P)) dμ`
    pub normalized_form: f64,
    /// `|Σ|_F − n ∫_Ω dx / F⁰(x−P)`; `None` unless `Ω` is a radial graph about `P`.
    pub divergence_form: Option<f64>,
    /// `|normalized_form − divergence_form|`
    pub identity_residual: Option<f64>,
    /// `∫ |∇_{S^n}(r/ρ)|² dS^n` with `r` graphed about `P`.
    pub gradient_energy: Option<f64>,
    /// `surface_form / gradient_energy` (0 when both are below [`ZERO_TOLERANCE`]).
    pub ratio: Option<f64>,
}

pub fn gap_integral(
    surface: &StarSurface,
    norm: &MinkowskiNorm,
    center: Vector,
) -> Result<GapReport> {
    let geo = surface.geometry(norm)?;
    let mut surface_form = 0.0;
    let mut normalized_form = 0.0;
    for i in 0..geo.len() {
        let y = linalg::sub(&geo.points[i], &center);
        let f0 = norm.eval_dual(&y)?;
        let flux = linalg::dot(&y, &geo.normals[i]);
        surface_form += (f0 * geo.support[i] - flux) * geo.area[i];
        normalized_form += (geo.support[i] - flux / f0) * geo.area[i];
    }
    let about = if linalg::norm(&linalg::sub(&center, &surface.center())) == 0.0 {
        Some(surface.clone())
    } else {
        surface.regraph(center)?
    };
    let (divergence_form, gradient_energy) = match about {
        Some(s) => {
            let grid = s.grid();
            let n = grid.dim() as i32;
            let mut dual = Vec::with_capacity(grid.len());
            for t in grid.nodes() {
                dual.push(norm.eval_dual(t)?);
            }
            let inner: Vec<f64> = s
                .radii()
                .iter()
                .zip(&dual)
                .map(|(r, d)| r.powi(n) / d)
                .collect();
            let div = geo.aniso_perimeter() - grid.integrate(&inner)?;
            let q: Vec<f64> = s.radii().iter().zip(&dual).map(|(r, d)| r * d).collect();
            let g = grid.sphere_gradient(&q)?;
            let e: Vec<f64> = g.iter().map(|v| linalg::dot(v, v)).collect();
            (Some(div), Some(grid.integrate(&e)?))
        }
        None => (None, None),
    };
    let ratio = gradient_energy.map(|e| {
        if e <= ZERO_TOLERANCE && surface_form.abs() <= ZERO_TOLERANCE {
            0.0
        } else {
            surface_form / e
        }
    });
    Ok(GapReport {
        surface_form,
        normalized_form,
        divergence_form,
        identity_residual: divergence_form.map(|d| (d - normalized_form).abs()),
        gradient_energy,
        ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantitativeWulff {
    pub alpha_squared: f64,
    /// `|Σ|_F / (|W|_F (Vol(Ω)/Vol(L))^{n/(n+1)}) − 1`
    pub deficit: f64,
    /// `alpha_squared / deficit` (0 when both vanish).
    pub ratio: f64,
}

pub fn isoperimetric_deficit(surface: &StarSurface, wulff: &WulffShape) -> Result<f64> {
    let n = surface.dim() as f64;
    let per = surface.aniso_perimeter(wulff.norm())?;
    Ok(per / (wulff.perimeter() * (surface.volume() / wulff.volume()).powf(n / (n + 1.0))) - 1.0)
}

pub fn quantitative_wulff(
    surface: &StarSurface,
    wulff: &WulffShape,
    seed: u64,
) -> Result<QuantitativeWulff> {
    let alpha = asymmetry_index(surface, wulff, seed)?.alpha;
    let deficit = isoperimetric_deficit(surface, wulff)?;
    Ok(QuantitativeWulff {
        alpha_squared: alpha * alpha,
        deficit,
        ratio: safe_ratio(alpha * alpha, deficit).0,
    })
}

/// `(s^{1/4} + √s, s^{1/(2(n+2))} + √s)`
pub fn moduli(s: f64, n: usize) -> Result<(f64, f64)> {
    if !(s >= 0.0) {
        return Err(Error::NegativeArgument(s));
    }
    let root = s.sqrt();
    Ok((
        s.powf(0.25) + root,
        s.powf(1.0 / (2.0 * (n as f64 + 2.0))) + root,
    ))
}

/// `num / den`, with `0/0 → (0, true)`.
fn safe_ratio(num: f64, den: f64) -> (f64, bool) {
    if num.abs() <= 1e-300 && den.abs() <= 1e-300 {
        (0.0, true)
    } else {
        (num / den, false)
    }
}

/// Quantities below this are treated as exact zeros when forming sweep ratios.
pub const ZERO_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub delta: f64,
    pub eps1: f64,
    pub eps_p: f64,
    pub alpha: f64,
    pub hausdorff: f64,
    pub f1: f64,
    pub f2: f64,
    pub ratio_alpha: f64,
    pub ratio_hausdorff: f64,
    /// Set when a ratio was `0/0` and reported as 0.
    pub zero_over_zero: bool,
    pub isoperimetric_deficit: f64,
    pub quantitative_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub p: f64,
    pub rows: Vec<SweepRow>,
}

fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.filter(|x| *x > 0.0).collect();
    if v.is_empty() {
        return 1.0;
    }
    let max = v.iter().cloned().fold(0.0, f64::max);
    let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
    max / min
}

fn nondecreasing(rows: &[SweepRow], key: impl Fn(&SweepRow) -> f64) -> bool {
    let mut sorted: Vec<&SweepRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.delta.total_cmp(&b.delta));
    sorted.windows(2).all(|w| key(w[1]) >= key(w[0]))
}

impl SweepTable {
    /// `max/min` of the nonzero `α_F/f₁(ε₁)` ratios.
    pub fn alpha_ratio_spread(&self) -> f64 {
        spread(self.rows.iter().map(|r| r.ratio_alpha))
    }

    pub fn hausdorff_ratio_spread(&self) -> f64 {
        spread(self.rows.iter().map(|r| r.ratio_hausdorff))
    }

    pub fn quantitative_ratio_spread(&self) -> f64 {
        spread(self.rows.iter().map(|r| r.quantitative_ratio))
    }

    /// All ratios finite and each spread below `limit`.
    pub fn bounded(&self, limit: f64) -> bool {
        self.rows
            .iter()
            .all(|r| r.ratio_alpha.is_finite() && r.ratio_hausdorff.is_finite())
            && self.alpha_ratio_spread() < limit
            && self.hausdorff_ratio_spread() < limit
    }

    /// Numerators and denominators of both ratios grow with `δ`.
    pub fn monotone(&self) -> bool {
        nondecreasing(&self.rows, |r| r.alpha)
            && nondecreasing(&self.rows, |r| r.hausdorff)
            && nondecreasing(&self.rows, |r| r.f1)
            && nondecreasing(&self.rows, |r| r.f2)
    }
}

/// Evaluates deficits and distances on each `(δ, Σ(δ))` of a family.
pub fn stability_sweep(
    family: &[(f64, StarSurface)],
    wulff: &WulffShape,
    center: Vector,
    p: f64,
    seed: u64,
) -> Result<SweepTable> {
    let mut rows = Vec::with_capacity(family.len());
    for (delta, surface) in family {
        let n = surface.dim();
        let eps1 = deficit_thm11(surface, wulff, center)?;
        let eps_p = deficit_pmomentum(surface, wulff, center, p)?.deficit;
        let asym = asymmetry_index(surface, wulff, seed)?;
        let haus = hausdorff_to_wulff(surface, wulff)?;
        let clamp = |x: f64| if x.abs() < ZERO_TOLERANCE { 0.0 } else { x };
        let (f1, f2) = moduli(clamp(eps1).max(0.0), n)?;
        let (ra, za) = safe_ratio(clamp(asym.alpha), f1);
        let (rh, zh) = safe_ratio(clamp(haus.distance), f2);
        let iso = isoperimetric_deficit(surface, wulff)?;
        let (rq, zq) = safe_ratio(clamp(asym.alpha * asym.alpha), clamp(iso));
        rows.push(SweepRow {
            delta: *delta,
            eps1,
            eps_p,
            alpha: asym.alpha,
            hausdorff: haus.distance,
            f1,
            f2,
            ratio_alpha: ra,
            ratio_hausdorff: rh,
            zero_over_zero: za || zh || zq,
            isoperimetric_deficit: iso,
            quantitative_ratio: rq,
        });
    }
    Ok(SweepTable { p, rows })
}

/// `argmin` of the recorded gap integral over samples with `0 < t < √ε`.
pub fn t_epsilon(trace: &FlowTrace, eps: f64) -> Option<(f64, f64)> {
    let limit = eps.max(0.0).sqrt();
    trace
        .samples
        .iter()
        .filter(|s| s.t > 0.0 && s.t < limit)
        .min_by(|a, b| a.gap.total_cmp(&b.gap))
        .map(|s| (s.t, s.gap))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeficitReport {
    pub eps1: f64,
    pub momentum: Vec<MomentumDeficit>,
    pub asymmetry: Asymmetry,
    pub hausdorff: HausdorffReport,
    pub gap: GapReport,
    pub quantitative: QuantitativeWulff,
    pub f1: f64,
    pub f2: f64,
}

pub fn deficit_report(
    surface: &StarSurface,
    wulff: &WulffShape,
    center: Vector,
    exponents: &[f64],
    seed: u64,
) -> Result<DeficitReport> {
    let eps1 = deficit_thm11(surface, wulff, center)?;
    let momentum = exponents
        .iter()
        .map(|&p| deficit_pmomentum(surface, wulff, center, p))
        .collect::<Result<Vec<_>>>()?;
    let asymmetry = asymmetry_index(surface, wulff, seed)?;
    let hausdorff = hausdorff_to_wulff(surface, wulff)?;
    let gap = gap_integral(surface, wulff.norm(), center)?;
    let iso = isoperimetric_deficit(surface, wulff)?;
    let a2 = asymmetry.alpha * asymmetry.alpha;
    let quantitative = QuantitativeWulff {
        alpha_squared: a2,
        deficit: iso,
        ratio: safe_ratio(a2, iso).0,
    };
    let (f1, f2) = moduli(eps1.max(0.0), surface.dim())?;
    Ok(DeficitReport {
        eps1,
        momentum,
        asymmetry,
        hausdorff,
        gap,
        quantitative,
        f1,
        f2,
    })
}
