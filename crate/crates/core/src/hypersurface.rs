//! Star-shaped hypersurfaces `x = P + r(θ)θ` as radial graphs over a
//! [`SphereGrid`], their anisotropic geometry and integral functionals.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Float;

use crate::linalg::{self, Matrix, Vector};
use crate::minkowski::MinkowskiNorm;
use crate::sphere_grid::{harmonic, SphereGrid};
use crate::{Error, Result};

/// One term `δ·Y_l^m` of a radial Fourier perturbation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierMode {
    pub degree: usize,
    /// On `S^1`: `>= 0` selects `cos kθ`, `< 0` selects `sin kθ`.
    pub order: i64,
    pub delta: f64,
}

#[derive(Debug, Clone)]
pub struct StarSurface {
    grid: Arc<SphereGrid>,
    radii: Vec<f64>,
    center: Vector,
}

/// Pointwise geometry of a [`StarSurface`] under a norm `F`.
#[derive(Debug, Clone)]
pub struct GeometryCache {
    pub points: Vec<Vector>,
    pub normals: Vec<Vector>,
    /// `dμ_i = r^{n-1}√(r² + |∇r|²)·w_i`
    pub area: Vec<f64>,
    /// `dμ_{F,i} = F(ν_i)·dμ_i`
    pub aniso_area: Vec<f64>,
    /// `ν_{F,i} = DF(ν_i)`
    pub aniso_normals: Vec<Vector>,
    /// `F(ν_i)`
    pub support: Vec<f64>,
    /// Weingarten map in ambient coordinates, `dν = W` on the tangent space.
    pub shape_operators: Vec<Matrix>,
    /// `H_F = tr(D²F(ν)·W)`
    pub mean_curvature: Vec<f64>,
    /// `√(r² + |∇r|²)`
    pub stretch: Vec<f64>,
    /// Diagonal entries `(B^{aa}, B^{bb})` of `g⁻¹ D²F(ν) g⁻¹` in the grid
    /// coordinates; the principal symbol of `H_F` as an operator on `r`.
    pub symbol: Vec<[f64; 2]>,
}

impl StarSurface {
    pub fn new(grid: Arc<SphereGrid>, radii: Vec<f64>, center: Vector) -> Result<Self> {
        if radii.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                found: radii.len(),
            });
        }
        if let Some((node, &value)) = radii
            .iter()
            .enumerate()
            .find(|(_, r)| !(**r > 0.0) || !r.is_finite())
        {
            return Err(Error::NonPositiveRadius { node, value });
        }
        if !center.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite("surface center"));
        }
        Ok(Self {
            grid,
            radii,
            center,
        })
    }

    pub fn sphere(grid: Arc<SphereGrid>, radius: f64, center: Vector) -> Result<Self> {
        let n = grid.len();
        Self::new(grid, alloc::vec![radius; n], center)
    }

    /// `scale·W + center`.
    pub fn wulff(
        grid: Arc<SphereGrid>,
        norm: &MinkowskiNorm,
        scale: f64,
        center: Vector,
    ) -> Result<Self> {
        let radii = grid
            .nodes()
            .iter()
            .map(|t| norm.eval_dual(t).map(|f0| scale / f0))
            .collect::<Result<Vec<_>>>()?;
        Self::new(grid, radii, center)
    }

    /// `r(θ) = r₀(1 + Σ δ_k Y_k(θ))`.
    pub fn radial_fourier(
        grid: Arc<SphereGrid>,
        base: f64,
        modes: &[FourierMode],
        center: Vector,
    ) -> Result<Self> {
        let dim = grid.dim();
        let radii = grid
            .nodes()
            .iter()
            .map(|t| {
                base * (1.0
                    + modes
                        .iter()
                        .map(|m| m.delta * harmonic(dim, m.degree, m.order, t))
                        .sum::<f64>())
            })
            .collect();
        Self::new(grid, radii, center)
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn center(&self) -> Vector {
        self.center
    }

    pub fn with_radii(&self, radii: Vec<f64>) -> Result<Self> {
        Self::new(self.grid.clone(), radii, self.center)
    }

    /// `k·Σ + shift`, i.e. radii times `k` and center mapped to `k·P + shift`.
    pub fn scaled(&self, k: f64, shift: Vector) -> Result<Self> {
        Self::new(
            self.grid.clone(),
            self.radii.iter().map(|r| k * r).collect(),
            linalg::axpy(&shift, k, &self.center),
        )
    }

    pub fn points(&self) -> Vec<Vector> {
        self.grid
            .nodes()
            .iter()
            .zip(&self.radii)
            .map(|(t, r)| linalg::axpy(&self.center, *r, t))
            .collect()
    }

    /// `Vol(Ω) = (1/(n+1)) ∫ r^{n+1} dS^n`.
    pub fn volume(&self) -> f64 {
        let n1 = self.grid.ambient_dim() as i32;
        self.grid
            .weights()
            .iter()
            .zip(&self.radii)
            .map(|(w, r)| w * r.powi(n1))
            .sum::<f64>()
            / n1 as f64
    }

    pub fn geometry(&self, norm: &MinkowskiNorm) -> Result<GeometryCache> {
        if norm.ambient_dim() != self.grid.ambient_dim() {
            return Err(Error::InvalidParameter(
                "surface and norm dimensions differ",
            ));
        }
        let grid = &*self.grid;
        let n = grid.len();
        let d = grid.derivatives(&self.radii)?;
        let two = grid.dim() == 2;
        let mut cache = GeometryCache {
            points: self.points(),
            normals: Vec::with_capacity(n),
            area: Vec::with_capacity(n),
            aniso_area: Vec::with_capacity(n),
            aniso_normals: Vec::with_capacity(n),
            support: Vec::with_capacity(n),
            shape_operators: Vec::with_capacity(n),
            mean_curvature: Vec::with_capacity(n),
            stretch: Vec::with_capacity(n),
            symbol: Vec::with_capacity(n),
        };
        for i in 0..n {
            let fr = grid.frame(i);
            let r = self.radii[i];
            let theta = fr.radial;
            let (ea, eb) = (fr.tangents[0], fr.tangents[1]);
            let (st, ct) = (fr.sin_colat, fr.cos_colat);
            let ra = d.d_a[i];
            let raa = d.d_aa[i];

            // Embedding derivatives in the chart (ϑ, φ) or (φ) for the circle.
            let (xs, xss): ([Vector; 2], [[Vector; 2]; 2]) = if two {
                let (rb, rab, rbb) = (d.d_b[i], d.d_ab[i], d.d_bb[i]);
                let xa = linalg::axpy(&linalg::scale(&theta, ra), r, &ea);
                let xb = linalg::axpy(&linalg::scale(&theta, rb), r * st, &eb);
                let xaa = linalg::axpy(&linalg::scale(&theta, raa - r), 2.0 * ra, &ea);
                let xab = linalg::axpy(
                    &linalg::axpy(&linalg::scale(&theta, rab), ra * st + r * ct, &eb),
                    rb,
                    &ea,
                );
                let xbb = linalg::axpy(
                    &linalg::axpy(
                        &linalg::scale(&theta, rbb - r * st * st),
                        2.0 * rb * st,
                        &eb,
                    ),
                    -r * st * ct,
                    &ea,
                );
                ([xa, xb], [[xaa, xab], [xab, xbb]])
            } else {
                let xa = linalg::axpy(&linalg::scale(&theta, ra), r, &ea);
                let xaa = linalg::axpy(&linalg::scale(&theta, raa - r), 2.0 * ra, &ea);
                ([xa, linalg::ZERO], [[xaa, linalg::ZERO], [linalg::ZERO; 2]])
            };

            let grad_r = if two {
                linalg::axpy(&linalg::scale(&ea, ra), d.d_b[i] / st, &eb)
            } else {
                linalg::scale(&ea, ra)
            };
            let nu_raw = linalg::axpy(&theta, -1.0 / r, &grad_r);
            let nu = linalg::normalize(&nu_raw);
            let grad2 = linalg::dot(&grad_r, &grad_r);
            let stretch = (r * r + grad2).sqrt();
            if !stretch.is_finite() || !nu.iter().all(|c| c.is_finite()) {
                return Err(Error::NonFinite("surface normal"));
            }
            let dmu = r.powi(grid.dim() as i32 - 1) * stretch * grid.weights()[i];
            let (f, df, d2f) = norm.derivatives(&nu)?;

            let m = grid.dim();
            let mut g = [[0.0; 3]; 3];
            let mut h = [[0.0; 3]; 3];
            let mut phi = [[0.0; 3]; 3];
            for a in 0..m {
                for b in 0..m {
                    g[a][b] = linalg::dot(&xs[a], &xs[b]);
                    h[a][b] = -linalg::dot(&xss[a][b], &nu);
                    phi[a][b] = linalg::bilinear(&d2f, &xs[a], &xs[b]);
                }
            }
            let gi = linalg::inverse(&g, m).ok_or(Error::NonFinite("induced metric"))?;
            // W = E g⁻¹ h g⁻¹ Eᵀ with E = [X_a | X_b].
            let gig = mat_mul(&mat_mul(&gi, &h), &gi);
            let mut w = [[0.0; 3]; 3];
            for a in 0..m {
                for b in 0..m {
                    w = linalg::mat_add(
                        &w,
                        &linalg::mat_scale(&linalg::outer(&xs[a], &xs[b]), gig[a][b]),
                    );
                }
            }
            let bmat = mat_mul(&mat_mul(&gi, &phi), &gi);
            let hf: f64 = (0..m)
                .flat_map(|a| (0..m).map(move |b| (a, b)))
                .map(|(a, b)| bmat[a][b] * h[a][b])
                .sum();
            if !hf.is_finite() {
                return Err(Error::NonFinite("anisotropic mean curvature"));
            }

            cache.normals.push(nu);
            cache.area.push(dmu);
            cache.aniso_area.push(f * dmu);
            cache.aniso_normals.push(df);
            cache.support.push(f);
            cache.shape_operators.push(w);
            cache.mean_curvature.push(hf);
            cache.stretch.push(stretch);
            cache
                .symbol
                .push([bmat[0][0], if two { bmat[1][1] } else { 0.0 }]);
        }
        Ok(cache)
    }

    /// `|Σ|_F = ∫ F(ν) dμ`.
    pub fn aniso_perimeter(&self, norm: &MinkowskiNorm) -> Result<f64> {
        Ok(self.geometry(norm)?.aniso_perimeter())
    }

    /// `∫ F⁰(x − P)^p dμ_F`.
    pub fn weighted_momentum(&self, norm: &MinkowskiNorm, center: Vector, p: f64) -> Result<f64> {
        self.geometry(norm)?.weighted_momentum(norm, center, p)
    }

    /// `Q(Σ) = |Σ|_F^{-1-1/n} (∫ F⁰(x − P) dμ_F − Vol(Ω))`.
    pub fn q_functional(&self, norm: &MinkowskiNorm, center: Vector) -> Result<f64> {
        let geo = self.geometry(norm)?;
        geo.q_functional(norm, center, self.volume(), self.dim())
    }

    /// Re-graphs the surface radially about `center` by intersecting rays
    /// with the trigonometric interpolant of `r`. Returns `None` if some ray
    /// does not meet the surface exactly once within the bracket.
    pub fn regraph(&self, center: Vector) -> Result<Option<StarSurface>> {
        let interp = self.grid.interpolant(&self.radii)?;
        let offset = linalg::sub(&center, &self.center);
        let rmax = self.radii.iter().cloned().fold(0.0, f64::max);
        let reach = rmax + linalg::norm(&offset);
        let mut radii = Vec::with_capacity(self.grid.len());
        for theta in self.grid.nodes() {
            // Signed mismatch between the ray point and the surface at its direction.
            let gap = |s: f64| {
                let q = linalg::axpy(&offset, s, theta);
                let dist = linalg::norm(&q);
                if dist == 0.0 {
                    return -1.0;
                }
                dist - interp.eval(&linalg::scale(&q, 1.0 / dist))
            };
            match crate::optimize::bisect_root(
                gap,
                0.0,
                2.0 * reach + 1e-12,
                1e-14 * (reach + 1.0),
                200,
            ) {
                Some(s) if s > 0.0 => radii.push(s),
                _ => return Ok(None),
            }
        }
        Ok(Some(Self::new(self.grid.clone(), radii, center)?))
    }
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

impl GeometryCache {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn area_total(&self) -> f64 {
        self.area.iter().sum()
    }

    pub fn aniso_perimeter(&self) -> f64 {
        self.aniso_area.iter().sum()
    }

    pub fn min_mean_curvature(&self) -> f64 {
        self.mean_curvature
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    /// `∫ (x − P)·ν dμ`, which equals `(n+1)·Vol(Ω)`.
    pub fn flux(&self, center: Vector) -> f64 {
        self.points
            .iter()
            .zip(&self.normals)
            .zip(&self.area)
            .map(|((x, nu), a)| linalg::dot(&linalg::sub(x, &center), nu) * a)
            .sum()
    }

    /// Values `F⁰(x_i − P)`.
    pub fn dual_distances(&self, norm: &MinkowskiNorm, center: Vector) -> Result<Vec<f64>> {
        self.points
            .iter()
            .map(|x| norm.eval_dual(&linalg::sub(x, &center)))
            .collect()
    }

    pub fn weighted_momentum(&self, norm: &MinkowskiNorm, center: Vector, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        let d = self.dual_distances(norm, center)?;
        Ok(d.iter()
            .zip(&self.aniso_area)
            .map(|(v, a)| v.powf(p) * a)
            .sum())
    }

    pub fn q_functional(
        &self,
        norm: &MinkowskiNorm,
        center: Vector,
        volume: f64,
        n: usize,
    ) -> Result<f64> {
        let per = self.aniso_perimeter();
        let m1 = self.weighted_momentum(norm, center, 1.0)?;
        Ok(per.powf(-1.0 - 1.0 / n as f64) * (m1 - volume))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkowski::make_wulff;
    use core::f64::consts::PI;

    fn circle(res: usize) -> Arc<SphereGrid> {
        Arc::new(SphereGrid::new(1, res).unwrap())
    }

    #[test]
    fn unit_circle_geometry() {
        let g = circle(64);
        let s = StarSurface::sphere(g.clone(), 1.0, linalg::ZERO).unwrap();
        let f = MinkowskiNorm::euclidean(1).unwrap();
        let geo = s.geometry(&f).unwrap();
        for (i, nu) in geo.normals.iter().enumerate() {
            assert!(linalg::norm(&linalg::sub(nu, &g.nodes()[i])) < 1e-14);
            assert!((geo.mean_curvature[i] - 1.0).abs() < 1e-12);
        }
        assert!((s.volume() - PI).abs() < 1e-13);
        assert!((geo.aniso_perimeter() - 2.0 * PI).abs() < 1e-12);
        assert!((s.weighted_momentum(&f, linalg::ZERO, 2.0).unwrap() - 2.0 * PI).abs() < 1e-12);
        assert!((s.q_functional(&f, linalg::ZERO).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-14);
        assert!(matches!(
            s.weighted_momentum(&f, linalg::ZERO, 0.5),
            Err(Error::InvalidExponent(_))
        ));
    }

    #[test]
    fn curvature_of_limacon_matches_closed_form() {
        let g = circle(256);
        let s = StarSurface::radial_fourier(
            g.clone(),
            1.0,
            &[FourierMode {
                degree: 1,
                order: 0,
                delta: 0.3,
            }],
            linalg::ZERO,
        )
        .unwrap();
        let geo = s.geometry(&MinkowskiNorm::euclidean(1).unwrap()).unwrap();
        for i in 0..g.len() {
            let (_, t) = g.coordinates(i);
            let r = 1.0 + 0.3 * t.cos();
            let r1 = -0.3 * t.sin();
            let r2 = -0.3 * t.cos();
            let k = (r * r + 2.0 * r1 * r1 - r * r2) / (r * r + r1 * r1).powf(1.5);
            assert!((geo.mean_curvature[i] - k).abs() < 1e-6);
        }
    }

    #[test]
    fn wulff_shape_has_constant_anisotropic_curvature() {
        let f = MinkowskiNorm::ellipsoid_from_semi_axes(1, &[2.0, 1.0]).unwrap();
        let g = circle(512);
        for a in [0.5, 1.0, 3.0] {
            let s = StarSurface::wulff(g.clone(), &f, a, [0.2, -0.1, 0.0]).unwrap();
            let geo = s.geometry(&f).unwrap();
            for h in &geo.mean_curvature {
                assert!((h - 1.0 / a).abs() < 1e-4 / a);
            }
            for ((nu, nf), sup) in geo.normals.iter().zip(&geo.aniso_normals).zip(&geo.support) {
                assert!((linalg::dot(nu, nf) - sup).abs() < 1e-14);
            }
        }
        let s = StarSurface::wulff(g.clone(), &f, 1.0, linalg::ZERO).unwrap();
        assert!((s.volume() - 2.0 * PI).abs() < 1e-8);
    }

    #[test]
    fn sphere_of_radius_two() {
        let g = Arc::new(SphereGrid::new(2, 16).unwrap());
        let s = StarSurface::sphere(g, 2.0, linalg::ZERO).unwrap();
        assert!((s.volume() - 32.0 * PI / 3.0).abs() < 1e-11);
        let geo = s.geometry(&MinkowskiNorm::euclidean(2).unwrap()).unwrap();
        for h in &geo.mean_curvature {
            assert!((h - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn wulff_curvature_on_s2() {
        let f = MinkowskiNorm::ellipsoid_from_semi_axes(2, &[1.5, 1.0, 0.8]).unwrap();
        let g = Arc::new(SphereGrid::new(2, 32).unwrap());
        let s = StarSurface::wulff(g, &f, 2.0, linalg::ZERO).unwrap();
        let geo = s.geometry(&f).unwrap();
        let err = geo
            .mean_curvature
            .iter()
            .map(|h| (h - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-3, "max |H_F - n/a| = {err}");
    }

    #[test]
    fn flux_volume_matches_radial_volume() {
        let g = circle(128);
        let s = StarSurface::radial_fourier(
            g,
            1.0,
            &[
                FourierMode {
                    degree: 2,
                    order: 0,
                    delta: 0.2,
                },
                FourierMode {
                    degree: 3,
                    order: -1,
                    delta: 0.05,
                },
            ],
            [0.1, 0.2, 0.0],
        )
        .unwrap();
        let geo = s.geometry(&MinkowskiNorm::euclidean(1).unwrap()).unwrap();
        assert!((geo.flux(s.center()) / 2.0 - s.volume()).abs() < 1e-10);
    }

    #[test]
    fn perimeter_of_circle_under_ellipse_norm_is_mean_support() {
        // ∫ F(ν) ds over the unit circle: F(θ) = √(4cos²+sin²).
        let f = MinkowskiNorm::ellipsoid_from_semi_axes(1, &[2.0, 1.0]).unwrap();
        let s = StarSurface::sphere(circle(256), 1.0, linalg::ZERO).unwrap();
        let m = 200_000;
        let brute: f64 = (0..m)
            .map(|i| {
                let t = 2.0 * PI * (i as f64 + 0.5) / m as f64;
                (4.0 * t.cos().powi(2) + t.sin().powi(2)).sqrt()
            })
            .sum::<f64>()
            * 2.0
            * PI
            / m as f64;
        assert!((s.aniso_perimeter(&f).unwrap() - brute).abs() < 1e-9);
    }

    #[test]
    fn wulff_momentum_identity() {
        let f = MinkowskiNorm::perturbed(1, 0.1, 2).unwrap();
        let g = circle(256);
        let w = make_wulff(&f, &g).unwrap();
        let s = StarSurface::wulff(g, &f, 1.0, linalg::ZERO).unwrap();
        let m1 = s.weighted_momentum(&f, linalg::ZERO, 1.0).unwrap();
        assert!((m1 - 2.0 * w.volume()).abs() < 1e-8);
    }

    #[test]
    fn regraph_about_shifted_center() {
        let g = circle(128);
        let s = StarSurface::sphere(g, 1.0, linalg::ZERO).unwrap();
        let t = s.regraph([0.3, 0.0, 0.0]).unwrap().unwrap();
        for (theta, r) in t.grid().nodes().iter().zip(t.radii()) {
            // |c + rθ| = 1 with c = (0.3, 0)
            let p = linalg::axpy(&[0.3, 0.0, 0.0], *r, theta);
            assert!((linalg::norm(&p) - 1.0).abs() < 1e-10);
        }
        assert!((t.volume() - PI).abs() < 1e-8);
    }
}
