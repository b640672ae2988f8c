//! Minkowski norms, their duals and Wulff shapes.
//!
//! Three families are provided:
//!
//! * `euclidean`: `F(x) = |x|`;
//! * `ellipsoid`: `F(x) = √(xᵀAx)` for a symmetric positive-definite `A`,
//!   with closed-form dual `F⁰(x) = √(xᵀA⁻¹x)`;
//! * `perturbed`: the 1-homogeneous extension of the support function
//!   `h = 1 + εY` on `S^n`, `Y` a harmonic polynomial of degree 2 or 3.
//!   Its dual is computed numerically.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hypersurface::StarSurface;
use crate::linalg::{self, Matrix, Vector};
use crate::sphere_grid::SphereGrid;
use crate::{Error, Result};

/// Number of scan directions for the numerical dual on `S^1` / `S^2`.
const DUAL_SCAN_CIRCLE: usize = 64;
const DUAL_SCAN_SPHERE: usize = 160;
const DUAL_MAX_NEWTON: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub enum NormFamily {
    Euclidean,
    Ellipsoid { matrix: Matrix, inverse: Matrix },
    Perturbed { epsilon: f64, degree: usize },
}

#[derive(Debug, Clone)]
pub struct MinkowskiNorm {
    /// Ambient dimension `n + 1`.
    ambient: usize,
    family: NormFamily,
    /// `c` in `F(x) >= c|x|`.
    lower_bound: f64,
    /// `C` in `F(x) <= C|x|`, the circumradius of the Wulff shape.
    upper_bound: f64,
    /// Minimum eigenvalue of `D²(½F²)` over the sampled unit directions.
    convexity_margin: f64,
    scan: Vec<Vector>,
}

fn check_sphere_dim(n: usize) -> Result<usize> {
    if n == 1 || n == 2 {
        Ok(n + 1)
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

/// Roughly uniform unit directions in `R^ambient`.
pub(crate) fn sample_directions(ambient: usize, count: usize) -> Vec<Vector> {
    if ambient == 2 {
        return (0..count)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / count as f64;
                [a.cos(), a.sin(), 0.0]
            })
            .collect();
    }
    let golden = PI * (3.0 - 5.0.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / count as f64;
            let s = (1.0 - z * z).sqrt();
            let a = golden * i as f64;
            [s * a.cos(), s * a.sin(), z]
        })
        .collect()
}

/// Uniformly distributed random unit vector in `R^ambient`.
pub(crate) fn random_direction<R: Rng>(rng: &mut R, ambient: usize) -> Vector {
    loop {
        let mut v = [0.0; 3];
        for x in v.iter_mut().take(ambient) {
            *x = rng.gen_range(-1.0..1.0);
        }
        let r = linalg::norm(&v);
        if r > 0.1 && r <= 1.0 {
            return linalg::scale(&v, 1.0 / r);
        }
    }
}

/// Harmonic polynomial `Y` with its gradient and Hessian.
fn harmonic_poly(degree: usize, x: &Vector) -> (f64, Vector, Matrix) {
    let (a, b) = (x[0], x[1]);
    match degree {
        2 => (
            a * a - b * b,
            [2.0 * a, -2.0 * b, 0.0],
            [[2.0, 0.0, 0.0], [0.0, -2.0, 0.0], [0.0; 3]],
        ),
        _ => (
            a * a * a - 3.0 * a * b * b,
            [3.0 * a * a - 3.0 * b * b, -6.0 * a * b, 0.0],
            [
                [6.0 * a, -6.0 * b, 0.0],
                [-6.0 * b, -6.0 * a, 0.0],
                [0.0; 3],
            ],
        ),
    }
}

impl MinkowskiNorm {
    /// `F(x) = |x|` on `R^{n+1}`.
    pub fn euclidean(n: usize) -> Result<Self> {
        let ambient = check_sphere_dim(n)?;
        Ok(Self {
            ambient,
            family: NormFamily::Euclidean,
            lower_bound: 1.0,
            upper_bound: 1.0,
            convexity_margin: 1.0,
            scan: Vec::new(),
        })
    }

    /// `F(x) = √(xᵀAx)`; only the leading `(n+1) × (n+1)` block of `matrix` is used.
    pub fn ellipsoid(n: usize, matrix: Matrix) -> Result<Self> {
        let ambient = check_sphere_dim(n)?;
        let mut a = [[0.0; 3]; 3];
        for i in 0..ambient {
            for j in 0..ambient {
                if (matrix[i][j] - matrix[j][i]).abs() > 1e-12 * (matrix[i][j].abs() + 1.0) {
                    return Err(Error::InvalidParameter(
                        "ellipsoid matrix must be symmetric",
                    ));
                }
                a[i][j] = 0.5 * (matrix[i][j] + matrix[j][i]);
            }
        }
        let ev = linalg::sym_eigenvalues(&a, ambient);
        if !(ev[0] > 0.0) || !ev[..ambient].iter().all(|e| e.is_finite()) {
            return Err(Error::InvalidParameter(
                "ellipsoid matrix must be positive definite",
            ));
        }
        let inverse = linalg::inverse(&a, ambient)
            .ok_or(Error::InvalidParameter("singular ellipsoid matrix"))?;
        Ok(Self {
            ambient,
            family: NormFamily::Ellipsoid { matrix: a, inverse },
            lower_bound: ev[0].sqrt(),
            upper_bound: ev[ambient - 1].sqrt(),
            convexity_margin: ev[0],
            scan: Vec::new(),
        })
    }

    /// Ellipsoid norm whose Wulff shape has the given semi-axes, i.e. `A = diag(a_i²)`.
    pub fn ellipsoid_from_semi_axes(n: usize, semi_axes: &[f64]) -> Result<Self> {
        let ambient = check_sphere_dim(n)?;
        if semi_axes.len() != ambient {
            return Err(Error::LengthMismatch {
                expected: ambient,
                found: semi_axes.len(),
            });
        }
        let mut m = [[0.0; 3]; 3];
        for (i, a) in semi_axes.iter().enumerate() {
            m[i][i] = a * a;
        }
        Self::ellipsoid(n, m)
    }

    /// Extension of the support function `1 + εY`, `Y ∈ {x₀²−x₁², x₀³−3x₀x₁²}`.
    ///
    /// Fails unless `D²(½F²)` is positive definite on a dense direction sample.
    pub fn perturbed(n: usize, epsilon: f64, degree: usize) -> Result<Self> {
        let ambient = check_sphere_dim(n)?;
        if degree != 2 && degree != 3 {
            return Err(Error::InvalidParameter(
                "perturbation degree must be 2 or 3",
            ));
        }
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::InvalidParameter(
                "perturbation epsilon must be finite and non-negative",
            ));
        }
        let mut norm = Self {
            ambient,
            family: NormFamily::Perturbed { epsilon, degree },
            lower_bound: 0.0,
            upper_bound: 0.0,
            convexity_margin: 0.0,
            scan: Vec::new(),
        };
        let samples = sample_directions(ambient, if ambient == 2 { 2048 } else { 6000 });
        let mut min_f = f64::INFINITY;
        let mut max_f: f64 = 0.0;
        let mut min_eig = f64::INFINITY;
        for y in &samples {
            let f = norm.eval(y);
            min_f = min_f.min(f);
            max_f = max_f.max(f);
            if f <= 0.0 {
                return Err(Error::NotConvex { min_eigenvalue: f });
            }
            min_eig = min_eig.min(norm.half_square_hessian_min_eig(y)?);
        }
        if !(min_eig > 1e-10) {
            return Err(Error::NotConvex {
                min_eigenvalue: min_eig,
            });
        }
        norm.lower_bound = min_f;
        norm.upper_bound = max_f;
        norm.convexity_margin = min_eig;
        norm.scan = sample_directions(
            ambient,
            if ambient == 2 {
                DUAL_SCAN_CIRCLE
            } else {
                DUAL_SCAN_SPHERE
            },
        );
        Ok(norm)
    }

    pub fn family(&self) -> &NormFamily {
        &self.family
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            NormFamily::Euclidean => "euclidean",
            NormFamily::Ellipsoid { .. } => "ellipsoid",
            NormFamily::Perturbed { .. } => "perturbed",
        }
    }

    /// Sphere dimension `n`.
    pub fn sphere_dim(&self) -> usize {
        self.ambient - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn lower_bound(&self) -> f64 {
        self.lower_bound
    }

    pub fn upper_bound(&self) -> f64 {
        self.upper_bound
    }

    pub fn convexity_margin(&self) -> f64 {
        self.convexity_margin
    }

    /// Minimum eigenvalue of `D²(½F²)(y) = F D²F + DF DFᵀ`.
    pub fn half_square_hessian_min_eig(&self, y: &Vector) -> Result<f64> {
        let f = self.eval(y);
        let g = self.grad(y)?;
        let h = self.hess(y)?;
        let m = linalg::mat_add(&linalg::mat_scale(&h, f), &linalg::outer(&g, &g));
        Ok(linalg::sym_eigenvalues(&m, self.ambient)[0])
    }

    fn restrict(&self, x: &Vector) -> Vector {
        let mut v = *x;
        for c in v.iter_mut().skip(self.ambient) {
            *c = 0.0;
        }
        v
    }

    pub fn eval(&self, x: &Vector) -> f64 {
        let x = self.restrict(x);
        match &self.family {
            NormFamily::Euclidean => linalg::norm(&x),
            NormFamily::Ellipsoid { matrix, .. } => {
                linalg::bilinear(matrix, &x, &x).max(0.0).sqrt()
            }
            NormFamily::Perturbed { epsilon, degree } => {
                let s = linalg::norm(&x);
                if s == 0.0 {
                    return 0.0;
                }
                let (y, _, _) = harmonic_poly(*degree, &x);
                s + epsilon * y * s.powi(1 - *degree as i32)
            }
        }
    }

    /// `DF(x)`, 0-homogeneous.
    pub fn grad(&self, x: &Vector) -> Result<Vector> {
        Ok(self.derivatives(x)?.1)
    }

    /// `D²F(x)`; `D²F(x)·x = 0`.
    pub fn hess(&self, x: &Vector) -> Result<Matrix> {
        Ok(self.derivatives(x)?.2)
    }

    /// `(F, DF, D²F)` at `x ≠ 0`.
    pub fn derivatives(&self, x: &Vector) -> Result<(f64, Vector, Matrix)> {
        let x = self.restrict(x);
        let s = linalg::norm(&x);
        if s == 0.0 || !s.is_finite() {
            return Err(Error::ZeroVector);
        }
        let id = linalg::identity(self.ambient);
        Ok(match &self.family {
            NormFamily::Euclidean => {
                let g = linalg::scale(&x, 1.0 / s);
                let h = linalg::mat_scale(
                    &linalg::mat_add(&id, &linalg::mat_scale(&linalg::outer(&g, &g), -1.0)),
                    1.0 / s,
                );
                (s, g, h)
            }
            NormFamily::Ellipsoid { matrix, .. } => {
                let ax = linalg::mat_vec(matrix, &x);
                let f = linalg::dot(&x, &ax).sqrt();
                let g = linalg::scale(&ax, 1.0 / f);
                let h = linalg::mat_scale(
                    &linalg::mat_add(matrix, &linalg::mat_scale(&linalg::outer(&g, &g), -1.0)),
                    1.0 / f,
                );
                (f, g, h)
            }
            NormFamily::Perturbed { epsilon, degree } => {
                let k = *degree as i32;
                let (y, dy, hy) = harmonic_poly(*degree, &x);
                let u = linalg::scale(&x, 1.0 / s);
                // |x| part
                let mut g = u;
                let mut h = linalg::mat_scale(
                    &linalg::mat_add(&id, &linalg::mat_scale(&linalg::outer(&u, &u), -1.0)),
                    1.0 / s,
                );
                // ε Y |x|^{1-k}
                let s1k = s.powi(1 - k);
                let smk1 = s.powi(-k - 1);
                let km1 = (1 - k) as f64;
                let gg = linalg::axpy(&linalg::scale(&dy, s1k), km1 * y * smk1, &x);
                let mut hg = linalg::mat_scale(&hy, s1k);
                let cross = linalg::mat_add(&linalg::outer(&dy, &x), &linalg::outer(&x, &dy));
                hg = linalg::mat_add(&hg, &linalg::mat_scale(&cross, km1 * smk1));
                hg = linalg::mat_add(&hg, &linalg::mat_scale(&id, km1 * y * smk1));
                hg = linalg::mat_add(
                    &hg,
                    &linalg::mat_scale(
                        &linalg::outer(&x, &x),
                        km1 * y * (-(k as f64) - 1.0) * s.powi(-k - 3),
                    ),
                );
                g = linalg::axpy(&g, *epsilon, &gg);
                h = linalg::mat_add(&h, &linalg::mat_scale(&hg, *epsilon));
                (s + epsilon * y * s1k, g, h)
            }
        })
    }

    /// Dual norm `F⁰(x) = sup_{y≠0} x·y / F(y)`.
    pub fn eval_dual(&self, x: &Vector) -> Result<f64> {
        let x = self.restrict(x);
        match &self.family {
            NormFamily::Euclidean => Ok(linalg::norm(&x)),
            NormFamily::Ellipsoid { inverse, .. } => {
                Ok(linalg::bilinear(inverse, &x, &x).max(0.0).sqrt())
            }
            NormFamily::Perturbed { .. } => {
                if linalg::norm(&x) == 0.0 {
                    return Ok(0.0);
                }
                Ok(self.numerical_dual(&x)?.0)
            }
        }
    }

    /// `DF⁰(x)` at `x ≠ 0`.
    pub fn grad_dual(&self, x: &Vector) -> Result<Vector> {
        Ok(self.dual_with_grad(x)?.1)
    }

    /// `(F⁰(x), DF⁰(x))` at `x ≠ 0`.
    pub fn dual_with_grad(&self, x: &Vector) -> Result<(f64, Vector)> {
        let x = self.restrict(x);
        let s = linalg::norm(&x);
        if s == 0.0 || !s.is_finite() {
            return Err(Error::ZeroVector);
        }
        match &self.family {
            NormFamily::Euclidean => Ok((s, linalg::scale(&x, 1.0 / s))),
            NormFamily::Ellipsoid { inverse, .. } => {
                let ax = linalg::mat_vec(inverse, &x);
                let f0 = linalg::dot(&x, &ax).sqrt();
                Ok((f0, linalg::scale(&ax, 1.0 / f0)))
            }
            NormFamily::Perturbed { .. } => {
                let (f0, y) = self.numerical_dual(&x)?;
                Ok((f0, linalg::scale(&y, 1.0 / self.eval(&y))))
            }
        }
    }

    /// Maximises `x·y / F(y)` over unit `y`: best scan direction, then
    /// Newton iterations in the tangent space of the sphere at the iterate.
    /// Returns `(F⁰(x), maximiser y*)`.
    fn numerical_dual(&self, x: &Vector) -> Result<(f64, Vector)> {
        let ratio = |y: &Vector| linalg::dot(x, y) / self.eval(y);
        let xs = linalg::norm(x);
        let mut best = linalg::scale(x, 1.0 / xs);
        let mut best_val = ratio(&best);
        for y in &self.scan {
            let v = ratio(y);
            if v > best_val {
                best_val = v;
                best = *y;
            }
        }
        let dim = self.ambient;
        let mut y = best;
        let mut val = best_val;
        let mut residual = f64::INFINITY;
        for _ in 0..DUAL_MAX_NEWTON {
            let (f, df, d2f) = self.derivatives(&y)?;
            let num = linalg::dot(x, &y);
            let grad = linalg::axpy(&linalg::scale(x, 1.0 / f), -num / (f * f), &df);
            let mut hess = linalg::mat_scale(
                &linalg::mat_add(&linalg::outer(x, &df), &linalg::outer(&df, x)),
                -1.0 / (f * f),
            );
            hess = linalg::mat_add(
                &hess,
                &linalg::mat_scale(&linalg::outer(&df, &df), 2.0 * num / (f * f * f)),
            );
            hess = linalg::mat_add(&hess, &linalg::mat_scale(&d2f, -num / (f * f)));
            let basis = linalg::complement_basis(&y, dim);
            let m = dim - 1;
            let mut t = [0.0; 2];
            let mut h = [[0.0; 3]; 3];
            for a in 0..m {
                t[a] = linalg::dot(&basis[a], &grad);
                for b in 0..m {
                    h[a][b] = linalg::bilinear(&hess, &basis[a], &basis[b]);
                }
            }
            residual = (t[0] * t[0] + t[1] * t[1]).sqrt();
            if residual <= 1e-14 * xs {
                break;
            }
            // Newton step if the tangential Hessian is negative definite, else gradient ascent.
            let ev = linalg::sym_eigenvalues(&h, m);
            let step: [f64; 2] = if ev[m - 1] < 0.0 {
                let inv = linalg::inverse(&h, m).ok_or(Error::DualNotConverged { residual })?;
                [
                    -(inv[0][0] * t[0] + inv[0][1] * t[1]),
                    -(inv[1][0] * t[0] + inv[1][1] * t[1]),
                ]
            } else {
                [0.1 * t[0] / xs, 0.1 * t[1] / xs]
            };
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..30 {
                let mut cand = y;
                for a in 0..m {
                    cand = linalg::axpy(&cand, lambda * step[a], &basis[a]);
                }
                let cand = linalg::normalize(&cand);
                let cv = ratio(&cand);
                if cv >= val - 1e-15 * xs {
                    y = cand;
                    val = cv;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if !(residual <= 1e-9 * xs) {
            return Err(Error::DualNotConverged {
                residual: residual / xs,
            });
        }
        Ok((val, y))
    }

    /// `F(x)F⁰(y) − x·y`, non-negative by the anisotropic Cauchy–Schwarz inequality.
    pub fn cauchy_schwarz_slack(&self, x: &Vector, y: &Vector) -> Result<f64> {
        Ok(self.eval(x) * self.eval_dual(y)? - linalg::dot(x, y))
    }

    /// Lower bound `c` with `F(x) >= c|x|`.
    pub fn uniform_positivity(&self) -> f64 {
        self.lower_bound
    }
}

/// Residuals of the duality identities over random samples.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DualityReport {
    pub samples: usize,
    /// `max |F(DF⁰(y)) − 1|`
    pub norm_of_dual_gradient: f64,
    /// `max |F⁰(DF(x)) − 1|`
    pub dual_of_gradient: f64,
    /// `max |DF(DF⁰(y))·F⁰(y) − y|`
    pub inverse_map: f64,
    /// `max max(0, x·y − F(x)F⁰(y))`
    pub cauchy_schwarz_violation: f64,
    /// `max |F(x)F⁰(y) − x·y|` over `x = s·DF⁰(y)`.
    pub equality_gap: f64,
    /// `max |F⁰(x)F(y) − x·y|` over `x = s·DF(y)` (the same statement with the roles of `F`, `F⁰` exchanged).
    pub equality_gap_swapped: f64,
}

impl DualityReport {
    pub fn max_residual(&self) -> f64 {
        self.norm_of_dual_gradient
            .max(self.dual_of_gradient)
            .max(self.inverse_map)
            .max(self.cauchy_schwarz_violation)
            .max(self.equality_gap)
            .max(self.equality_gap_swapped)
    }
}

pub fn verify_duality(norm: &MinkowskiNorm, samples: usize, seed: u64) -> Result<DualityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = norm.ambient_dim();
    let mut rep = DualityReport {
        samples,
        ..Default::default()
    };
    for _ in 0..samples {
        let x = linalg::scale(&random_direction(&mut rng, dim), rng.gen_range(0.5..2.0));
        let y = linalg::scale(&random_direction(&mut rng, dim), rng.gen_range(0.5..2.0));
        let s = rng.gen_range(0.5..2.0);

        let (f0y, df0y) = norm.dual_with_grad(&y)?;
        rep.norm_of_dual_gradient = rep
            .norm_of_dual_gradient
            .max((norm.eval(&df0y) - 1.0).abs());
        let dfx = norm.grad(&x)?;
        rep.dual_of_gradient = rep
            .dual_of_gradient
            .max((norm.eval_dual(&dfx)? - 1.0).abs());
        let back = linalg::scale(&norm.grad(&df0y)?, f0y);
        rep.inverse_map = rep.inverse_map.max(linalg::norm(&linalg::sub(&back, &y)));
        let slack = norm.eval(&x) * norm.eval_dual(&y)? - linalg::dot(&x, &y);
        rep.cauchy_schwarz_violation = rep.cauchy_schwarz_violation.max((-slack).max(0.0));

        let xe = linalg::scale(&df0y, s);
        rep.equality_gap = rep
            .equality_gap
            .max((norm.eval(&xe) * f0y - linalg::dot(&xe, &y)).abs());
        let xs = linalg::scale(&norm.grad(&y)?, s);
        rep.equality_gap_swapped = rep
            .equality_gap_swapped
            .max((norm.eval_dual(&xs)? * norm.eval(&y) - linalg::dot(&xs, &y)).abs());
    }
    Ok(rep)
}

/// The Wulff shape `{F⁰ = 1}` sampled as a radial graph `ρ = 1/F⁰(θ)` on a grid.
#[derive(Debug, Clone)]
pub struct WulffShape {
    norm: MinkowskiNorm,
    grid: Arc<SphereGrid>,
    radial: Vec<f64>,
    volume: f64,
    perimeter: f64,
}

pub fn make_wulff(norm: &MinkowskiNorm, grid: &Arc<SphereGrid>) -> Result<WulffShape> {
    if grid.ambient_dim() != norm.ambient_dim() {
        return Err(Error::InvalidParameter("grid and norm dimensions differ"));
    }
    let radial = grid
        .nodes()
        .iter()
        .map(|t| norm.eval_dual(t).map(|f0| 1.0 / f0))
        .collect::<Result<Vec<_>>>()?;
    let n1 = grid.ambient_dim() as i32;
    let powers: Vec<f64> = radial.iter().map(|r| r.powi(n1)).collect();
    let volume = grid.integrate(&powers)? / n1 as f64;
    let surface = StarSurface::new(grid.clone(), radial.clone(), linalg::ZERO)?;
    let perimeter = surface.aniso_perimeter(norm)?;
    Ok(WulffShape {
        norm: norm.clone(),
        grid: grid.clone(),
        radial,
        volume,
        perimeter,
    })
}

impl WulffShape {
    pub fn norm(&self) -> &MinkowskiNorm {
        &self.norm
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    /// `ρ_i = 1 / F⁰(θ_i)`
    pub fn radial(&self) -> &[f64] {
        &self.radial
    }

    /// `Vol(L)`
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// `|W|_F`
    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// `|W|_F − (n+1) Vol(L)`
    pub fn invariant_residual(&self) -> f64 {
        self.perimeter - self.grid.ambient_dim() as f64 * self.volume
    }

    /// The surface `aW + center` on the same grid.
    pub fn scaled_surface(&self, scale: f64, center: Vector) -> Result<StarSurface> {
        StarSurface::new(
            self.grid.clone(),
            self.radial.iter().map(|r| scale * r).collect(),
            center,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_grad(norm: &MinkowskiNorm, x: &Vector) -> Vector {
        let h = 1e-6;
        let mut g = [0.0; 3];
        for i in 0..norm.ambient_dim() {
            let mut a = *x;
            let mut b = *x;
            a[i] += h;
            b[i] -= h;
            g[i] = (norm.eval(&a) - norm.eval(&b)) / (2.0 * h);
        }
        g
    }

    #[test]
    fn euclidean_values() {
        let f = MinkowskiNorm::euclidean(1).unwrap();
        let x = [3.0, 4.0, 0.0];
        assert_eq!(f.eval(&x), 5.0);
        let g = f.grad(&x).unwrap();
        assert!((g[0] - 0.6).abs() < 1e-15 && (g[1] - 0.8).abs() < 1e-15);
        assert_eq!(f.eval_dual(&x).unwrap(), 5.0);
        assert_eq!(f.grad(&[0.0; 3]), Err(Error::ZeroVector));
    }

    #[test]
    fn ellipsoid_values_against_hand_derivative() {
        let f = MinkowskiNorm::ellipsoid(1, [[4.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0; 3]]).unwrap();
        let x = [1.0, 0.0, 0.0];
        assert!((f.eval(&x) - 2.0).abs() < 1e-15);
        let g = f.grad(&x).unwrap();
        assert!((g[0] - 2.0).abs() < 1e-15 && g[1].abs() < 1e-15);
        // d/dx √(4x²+y²) = 4x/√(4x²+y²) checked at a generic point too.
        let p = [0.3, -0.7, 0.0];
        let want = [4.0 * 0.3 / f.eval(&p), -0.7 / f.eval(&p), 0.0];
        let got = f.grad(&p).unwrap();
        let fd = fd_grad(&f, &p);
        for i in 0..2 {
            assert!((got[i] - want[i]).abs() < 1e-14);
            assert!((got[i] - fd[i]).abs() < 1e-8);
        }
        assert!((f.eval_dual(&[0.0, 1.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ellipsoid_dual_matches_brute_force_scan() {
        let f = MinkowskiNorm::ellipsoid(1, [[4.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0; 3]]).unwrap();
        for x in [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.4, -1.3, 0.0]] {
            let m = 1_000_000;
            let brute = (0..m)
                .map(|i| {
                    let a = 2.0 * PI * i as f64 / m as f64;
                    let y = [a.cos(), a.sin(), 0.0];
                    linalg::dot(&x, &y) / f.eval(&y)
                })
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((f.eval_dual(&x).unwrap() - brute).abs() < 1e-9);
        }
    }

    #[test]
    fn perturbed_gradient_and_hessian_match_finite_differences() {
        for (n, deg) in [(1, 2), (1, 3), (2, 2), (2, 3)] {
            let f = MinkowskiNorm::perturbed(n, 0.1, deg).unwrap();
            let x = if n == 1 {
                [0.4, -0.9, 0.0]
            } else {
                [0.4, -0.9, 0.5]
            };
            let (_, g, h) = f.derivatives(&x).unwrap();
            let fd = fd_grad(&f, &x);
            for i in 0..f.ambient_dim() {
                assert!((g[i] - fd[i]).abs() < 1e-8, "grad {n} {deg}");
            }
            let e = 1e-6;
            for j in 0..f.ambient_dim() {
                let mut a = x;
                let mut b = x;
                a[j] += e;
                b[j] -= e;
                let ga = f.grad(&a).unwrap();
                let gb = f.grad(&b).unwrap();
                for i in 0..f.ambient_dim() {
                    assert!((h[i][j] - (ga[i] - gb[i]) / (2.0 * e)).abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn euler_relations_hold() {
        let norms = [
            MinkowskiNorm::euclidean(2).unwrap(),
            MinkowskiNorm::ellipsoid(2, [[2.0, 0.3, 0.0], [0.3, 1.0, 0.1], [0.0, 0.1, 0.5]])
                .unwrap(),
            MinkowskiNorm::perturbed(2, 0.1, 3).unwrap(),
        ];
        let x = [0.3, 0.5, -0.8];
        for f in &norms {
            let (v, g, h) = f.derivatives(&x).unwrap();
            assert!((linalg::dot(&g, &x) - v).abs() < 1e-13);
            assert!(linalg::norm(&linalg::mat_vec(&h, &x)) < 1e-10);
        }
    }

    #[test]
    fn perturbed_rejects_non_convex_parameters() {
        // h + h'' = 1 - 8ε cos 3φ changes sign for ε > 1/8.
        assert!(matches!(
            MinkowskiNorm::perturbed(1, 0.2, 3),
            Err(Error::NotConvex { .. })
        ));
        assert!(MinkowskiNorm::perturbed(1, 0.1, 3).is_ok());
        assert!(MinkowskiNorm::perturbed(1, 0.1, 4).is_err());
    }

    #[test]
    fn perturbed_dual_identities() {
        for n in [1, 2] {
            let f = MinkowskiNorm::perturbed(n, 0.1, 2).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..100 {
                let y = random_direction(&mut rng, n + 1);
                let d = f.grad_dual(&y).unwrap();
                assert!((f.eval(&d) - 1.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn duality_report_euclidean_and_ellipsoid() {
        let e = verify_duality(&MinkowskiNorm::euclidean(2).unwrap(), 200, 1).unwrap();
        assert!(e.max_residual() < 1e-12, "{e:?}");
        let a = MinkowskiNorm::ellipsoid(1, [[4.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0; 3]]).unwrap();
        assert!(verify_duality(&a, 200, 2).unwrap().max_residual() < 1e-9);
        let f = MinkowskiNorm::euclidean(1).unwrap();
        let slack = f
            .cauchy_schwarz_slack(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0])
            .unwrap();
        assert_eq!(slack, 1.0);
    }

    #[test]
    fn wulff_shapes_of_closed_form_norms() {
        let g1 = Arc::new(SphereGrid::new(1, 256).unwrap());
        let w = make_wulff(&MinkowskiNorm::euclidean(1).unwrap(), &g1).unwrap();
        assert!((w.volume() - PI).abs() < 1e-12);
        assert!((w.perimeter() - 2.0 * PI).abs() < 1e-12);
        let e = MinkowskiNorm::ellipsoid_from_semi_axes(1, &[2.0, 1.0]).unwrap();
        let we = make_wulff(&e, &g1).unwrap();
        assert!((we.volume() - 2.0 * PI).abs() < 1e-8);
        assert!(we.invariant_residual().abs() < 1e-8);
        for (t, r) in g1.nodes().iter().zip(we.radial()) {
            assert!((e.eval_dual(t).unwrap() * r - 1.0).abs() < 1e-14);
        }
        let g2 = Arc::new(SphereGrid::new(2, 24).unwrap());
        let w2 = make_wulff(&MinkowskiNorm::euclidean(2).unwrap(), &g2).unwrap();
        assert!((w2.volume() - 4.0 * PI / 3.0).abs() < 1e-12);
        assert!((w2.perimeter() - 4.0 * PI).abs() < 1e-10);
    }
}
