//! Discretisation of `S^1` and `S^2`.
//!
//! `S^1` uses `N` uniform angles with the periodic trapezoid rule and
//! spectral differentiation. `S^2` uses a latitude–longitude layout with
//! Gauss–Legendre colatitudes (no node sits on a pole) and `2N` uniform
//! longitudes. Longitude derivatives are spectral per ring; colatitude
//! derivatives use 7-point finite differences along meridian great circles,
//! continued across the poles by `f(-ϑ, φ) = f(ϑ, φ + π)`.
//!
//! Nodes on `S^2` are stored ring-major: index `j * n_lon + k`.

use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::PI;
use num_traits::Float;

use crate::fft::{Fft, TrigInterpolant};
use crate::linalg::{self, Vector};
use crate::{Error, Result};

pub const MIN_RESOLUTION: usize = 8;
/// Half width of the colatitude finite-difference stencils.
const STENCIL_HALF_WIDTH: usize = 3;
/// Extra longitudinal modes kept on each ring beyond `sin ϑ · n_lon / 2`.
const POLAR_FILTER_MARGIN: usize = 6;

#[derive(Debug, Clone)]
pub struct SphereGrid {
    dim: usize,
    resolution: usize,
    nodes: Vec<Vector>,
    weights: Vec<f64>,
    layout: Layout,
}

#[derive(Debug, Clone)]
enum Layout {
    Circle { fft: Fft, angles: Vec<f64> },
    LatLon(LatLon),
}

#[derive(Debug, Clone)]
struct LatLon {
    n_lat: usize,
    n_lon: usize,
    colat: Vec<f64>,
    lon: Vec<f64>,
    fft: Fft,
    /// Per ring: `(source ring, shifted by π, d/dϑ weight, d²/dϑ² weight)`.
    stencils: Vec<Vec<(usize, bool, f64, f64)>>,
    cutoffs: Vec<usize>,
}

/// Local orthonormal frame at a node: the radial direction `θ` and unit
/// tangents along the coordinate lines (`e_ϑ`, `e_φ` on `S^2`; one tangent on `S^1`).
#[derive(Debug, Clone, Copy)]
pub struct NodeFrame {
    pub radial: Vector,
    pub tangents: [Vector; 2],
    /// `sin ϑ` on `S^2` (metric factor of the longitude coordinate), 1 on `S^1`.
    pub sin_colat: f64,
    pub cos_colat: f64,
}

/// Coordinate derivatives of a scalar field at every node.
///
/// On `S^1` only `d_a` and `d_aa` are populated (derivatives in the angle).
/// On `S^2`: `a = ϑ` (colatitude), `b = φ` (longitude).
#[derive(Debug, Clone)]
pub struct Derivatives {
    pub d_a: Vec<f64>,
    pub d_b: Vec<f64>,
    pub d_aa: Vec<f64>,
    pub d_ab: Vec<f64>,
    pub d_bb: Vec<f64>,
}

pub fn make_grid(dim: usize, resolution: usize) -> Result<SphereGrid> {
    SphereGrid::new(dim, resolution)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes descending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Finite-difference weights (Fornberg) for derivatives `0..=order` at `x0`
/// from arbitrary distinct points `xs`. Returns `c[k][j]`.
pub fn fornberg_weights(x0: f64, xs: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Real harmonic on `S^n`: `cos kφ` / `sin kφ` on the circle (order `>= 0` / `< 0`),
/// Schmidt semi-normalised `P_l^|m|(cos ϑ)·cos mφ` (or `sin |m|φ` for `m < 0`) on `S^2`.
pub fn harmonic(dim: usize, degree: usize, order: i64, direction: &Vector) -> f64 {
    if dim == 1 {
        let phi = direction[1].atan2(direction[0]);
        let k = degree as f64;
        return if order >= 0 {
            (k * phi).cos()
        } else {
            (k * phi).sin()
        };
    }
    let m = order.unsigned_abs() as usize;
    if m > degree {
        return 0.0;
    }
    let z = direction[2].clamp(-1.0, 1.0);
    let phi = direction[1].atan2(direction[0]);
    let s = (1.0 - z * z).max(0.0).sqrt();
    // P_m^m, then upward in degree.
    let mut pmm = 1.0;
    for i in 1..=m {
        pmm *= (2 * i - 1) as f64 * s;
    }
    let p = if degree == m {
        pmm
    } else {
        let mut p0 = pmm;
        let mut p1 = z * (2 * m + 1) as f64 * pmm;
        for l in (m + 2)..=degree {
            let lf = l as f64;
            let p2 = ((2.0 * lf - 1.0) * z * p1 - (lf + m as f64 - 1.0) * p0) / (lf - m as f64);
            p0 = p1;
            p1 = p2;
        }
        p1
    };
    let norm = if m == 0 {
        1.0
    } else {
        // sqrt(2 (l-m)! / (l+m)!)
        let mut ratio = 1.0;
        for i in (degree - m + 1)..=(degree + m) {
            ratio /= i as f64;
        }
        (2.0 * ratio).sqrt()
    };
    let ang = if order >= 0 {
        (m as f64 * phi).cos()
    } else {
        (m as f64 * phi).sin()
    };
    norm * p * ang
}

impl SphereGrid {
    pub fn new(dim: usize, resolution: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if resolution < MIN_RESOLUTION {
            return Err(Error::ResolutionTooSmall {
                resolution,
                minimum: MIN_RESOLUTION,
            });
        }
        if dim == 1 {
            let n = resolution;
            let angles: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
            let nodes = angles.iter().map(|&a| [a.cos(), a.sin(), 0.0]).collect();
            let weights = vec![2.0 * PI / n as f64; n];
            return Ok(Self {
                dim,
                resolution,
                nodes,
                weights,
                layout: Layout::Circle {
                    fft: Fft::new(n),
                    angles,
                },
            });
        }

        let n_lat = resolution;
        let n_lon = 2 * resolution;
        let (x, wx) = gauss_legendre(n_lat);
        // x descending, so colatitude ascending.
        let colat: Vec<f64> = x.iter().map(|z| z.acos()).collect();
        let lon: Vec<f64> = (0..n_lon)
            .map(|k| 2.0 * PI * k as f64 / n_lon as f64)
            .collect();
        let dphi = 2.0 * PI / n_lon as f64;
        let mut nodes = Vec::with_capacity(n_lat * n_lon);
        let mut weights = Vec::with_capacity(n_lat * n_lon);
        for (j, &t) in colat.iter().enumerate() {
            let (st, ct) = t.sin_cos();
            for &p in &lon {
                let (sp, cp) = p.sin_cos();
                nodes.push([st * cp, st * sp, ct]);
                weights.push(wx[j] * dphi);
            }
        }

        let s = STENCIL_HALF_WIDTH;
        let mut stencils = Vec::with_capacity(n_lat);
        for j in 0..n_lat {
            let mut pts = Vec::with_capacity(2 * s + 1);
            let mut xs = Vec::with_capacity(2 * s + 1);
            for e in (j as isize - s as isize)..=(j as isize + s as isize) {
                let (src, shifted, c) = extended_ring(&colat, e);
                pts.push((src, shifted));
                xs.push(c);
            }
            let w = fornberg_weights(colat[j], &xs, 2);
            stencils.push(
                pts.iter()
                    .enumerate()
                    .map(|(m, &(src, sh))| (src, sh, w[1][m], w[2][m]))
                    .collect(),
            );
        }
        let cutoffs = colat
            .iter()
            .map(|t| {
                let c = (t.sin() * (n_lon / 2) as f64).ceil() as usize + POLAR_FILTER_MARGIN;
                c.min(n_lon / 2)
            })
            .collect();

        Ok(Self {
            dim,
            resolution,
            nodes,
            weights,
            layout: Layout::LatLon(LatLon {
                n_lat,
                n_lon,
                colat,
                lon,
                fft: Fft::new(n_lon),
                stencils,
                cutoffs,
            }),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Ambient dimension `n + 1`.
    pub fn ambient_dim(&self) -> usize {
        self.dim + 1
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vector] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `|S^n|`
    pub fn area(&self) -> f64 {
        if self.dim == 1 {
            2.0 * PI
        } else {
            4.0 * PI
        }
    }

    /// `(n_lat, n_lon)` for `S^2`, `(n, 1)` for `S^1`.
    pub fn shape(&self) -> (usize, usize) {
        match &self.layout {
            Layout::Circle { angles, .. } => (angles.len(), 1),
            Layout::LatLon(g) => (g.n_lat, g.n_lon),
        }
    }

    /// Representative angular spacing.
    pub fn spacing(&self) -> f64 {
        match &self.layout {
            Layout::Circle { angles, .. } => 2.0 * PI / angles.len() as f64,
            Layout::LatLon(g) => PI / g.n_lat as f64,
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: len,
            });
        }
        Ok(())
    }

    /// `Σ w_i f_i`, summed in node order.
    pub fn integrate(&self, field: &[f64]) -> Result<f64> {
        self.check_len(field.len())?;
        Ok(self.weights.iter().zip(field).map(|(w, f)| w * f).sum())
    }

    pub fn frame(&self, i: usize) -> NodeFrame {
        match &self.layout {
            Layout::Circle { angles, .. } => {
                let (s, c) = angles[i].sin_cos();
                NodeFrame {
                    radial: [c, s, 0.0],
                    tangents: [[-s, c, 0.0], linalg::ZERO],
                    sin_colat: 1.0,
                    cos_colat: 0.0,
                }
            }
            Layout::LatLon(g) => {
                let j = i / g.n_lon;
                let k = i % g.n_lon;
                let (st, ct) = g.colat[j].sin_cos();
                let (sp, cp) = g.lon[k].sin_cos();
                NodeFrame {
                    radial: [st * cp, st * sp, ct],
                    tangents: [[ct * cp, ct * sp, -st], [-sp, cp, 0.0]],
                    sin_colat: st,
                    cos_colat: ct,
                }
            }
        }
    }

    pub fn derivatives(&self, field: &[f64]) -> Result<Derivatives> {
        self.check_len(field.len())?;
        match &self.layout {
            Layout::Circle { fft, .. } => {
                let (d1, d2) = fft.periodic_derivatives(field);
                Ok(Derivatives {
                    d_a: d1,
                    d_b: Vec::new(),
                    d_aa: d2,
                    d_ab: Vec::new(),
                    d_bb: Vec::new(),
                })
            }
            Layout::LatLon(g) => {
                let n = field.len();
                let mut d_b = vec![0.0; n];
                let mut d_bb = vec![0.0; n];
                for j in 0..g.n_lat {
                    let ring = &field[j * g.n_lon..(j + 1) * g.n_lon];
                    let (d1, d2) = g.fft.periodic_derivatives(ring);
                    d_b[j * g.n_lon..(j + 1) * g.n_lon].copy_from_slice(&d1);
                    d_bb[j * g.n_lon..(j + 1) * g.n_lon].copy_from_slice(&d2);
                }
                let (d_a, d_aa) = g.colat_derivatives(field, true);
                let (d_ab, _) = g.colat_derivatives(&d_b, false);
                Ok(Derivatives {
                    d_a,
                    d_b,
                    d_aa,
                    d_ab,
                    d_bb,
                })
            }
        }
    }

    /// Tangential gradient `∇_{S^n} f` in ambient coordinates.
    pub fn sphere_gradient(&self, field: &[f64]) -> Result<Vec<Vector>> {
        let d = self.derivatives(field)?;
        Ok((0..self.len())
            .map(|i| {
                let fr = self.frame(i);
                if self.dim == 1 {
                    linalg::scale(&fr.tangents[0], d.d_a[i])
                } else {
                    let g = linalg::scale(&fr.tangents[0], d.d_a[i]);
                    linalg::axpy(&g, d.d_b[i] / fr.sin_colat, &fr.tangents[1])
                }
            })
            .collect())
    }

    /// Laplace–Beltrami operator `Δ_{S^n} f`.
    pub fn laplacian(&self, field: &[f64]) -> Result<Vec<f64>> {
        let d = self.derivatives(field)?;
        Ok((0..self.len())
            .map(|i| {
                if self.dim == 1 {
                    d.d_aa[i]
                } else {
                    let fr = self.frame(i);
                    d.d_aa[i]
                        + fr.cos_colat / fr.sin_colat * d.d_a[i]
                        + d.d_bb[i] / (fr.sin_colat * fr.sin_colat)
                }
            })
            .collect())
    }

    /// Removes longitudinal modes that the rings near the poles cannot resolve.
    /// No-op on `S^1`.
    pub fn polar_filter(&self, field: &mut [f64]) {
        if let Layout::LatLon(g) = &self.layout {
            for j in 0..g.n_lat {
                g.fft
                    .low_pass(&mut field[j * g.n_lon..(j + 1) * g.n_lon], g.cutoffs[j]);
            }
        }
    }

    /// Upper bounds on the spectral radius of the discrete second-derivative
    /// operators along the two coordinate directions at node `i`
    /// (second entry unused on `S^1`).
    pub fn second_derivative_bounds(&self, i: usize) -> [f64; 2] {
        match &self.layout {
            Layout::Circle { angles, .. } => {
                let m = (angles.len() / 2) as f64;
                [m * m, 0.0]
            }
            Layout::LatLon(g) => {
                let j = i / g.n_lon;
                let colat: f64 = g.stencils[j].iter().map(|s| s.3.abs()).sum();
                let m = g.cutoffs[j] as f64;
                [colat, m * m]
            }
        }
    }

    /// Interpolant of a nodal field that can be evaluated in any direction.
    pub fn interpolant(&self, field: &[f64]) -> Result<Interpolant<'_>> {
        self.check_len(field.len())?;
        Ok(Interpolant(match &self.layout {
            Layout::Circle { fft, .. } => InterpolantKind::Circle(TrigInterpolant::new(fft, field)),
            Layout::LatLon(g) => InterpolantKind::LatLon {
                grid: g,
                rings: (0..g.n_lat)
                    .map(|j| TrigInterpolant::new(&g.fft, &field[j * g.n_lon..(j + 1) * g.n_lon]))
                    .collect(),
            },
        }))
    }

    /// Spherical coordinates `(ϑ, φ)` of node `i` (`(0, φ)` on `S^1`).
    pub fn coordinates(&self, i: usize) -> (f64, f64) {
        match &self.layout {
            Layout::Circle { angles, .. } => (0.0, angles[i]),
            Layout::LatLon(g) => (g.colat[i / g.n_lon], g.lon[i % g.n_lon]),
        }
    }
}

fn extended_ring(colat: &[f64], e: isize) -> (usize, bool, f64) {
    let n = colat.len() as isize;
    if e < 0 {
        let src = (-1 - e) as usize;
        (src, true, -colat[src])
    } else if e >= n {
        let src = (2 * n - 1 - e) as usize;
        (src, true, 2.0 * PI - colat[src])
    } else {
        (e as usize, false, colat[e as usize])
    }
}

impl LatLon {
    fn colat_derivatives(&self, field: &[f64], second: bool) -> (Vec<f64>, Vec<f64>) {
        let n = field.len();
        let half = self.n_lon / 2;
        let mut d1 = vec![0.0; n];
        let mut d2 = if second { vec![0.0; n] } else { Vec::new() };
        for j in 0..self.n_lat {
            for k in 0..self.n_lon {
                let mut a = 0.0;
                let mut b = 0.0;
                for &(src, shifted, w1, w2) in &self.stencils[j] {
                    let kk = if shifted { (k + half) % self.n_lon } else { k };
                    let v = field[src * self.n_lon + kk];
                    a += w1 * v;
                    b += w2 * v;
                }
                d1[j * self.n_lon + k] = a;
                if second {
                    d2[j * self.n_lon + k] = b;
                }
            }
        }
        (d1, d2)
    }
}

/// Evaluates a nodal field at arbitrary unit directions.
#[derive(Debug, Clone)]
pub struct Interpolant<'g>(InterpolantKind<'g>);

#[derive(Debug, Clone)]
enum InterpolantKind<'g> {
    Circle(TrigInterpolant),
    LatLon {
        grid: &'g LatLon,
        rings: Vec<TrigInterpolant>,
    },
}

impl Interpolant<'_> {
    pub fn eval(&self, direction: &Vector) -> f64 {
        match &self.0 {
            InterpolantKind::Circle(t) => t.eval(direction[1].atan2(direction[0])).0,
            InterpolantKind::LatLon { grid, rings } => {
                let t = direction[2].clamp(-1.0, 1.0).acos();
                let phi = direction[1].atan2(direction[0]);
                // first ring with colatitude above t
                let upper = grid.colat.partition_point(|&c| c <= t) as isize;
                let s = STENCIL_HALF_WIDTH as isize;
                let mut xs = Vec::with_capacity(2 * s as usize);
                let mut vals = Vec::with_capacity(2 * s as usize);
                for e in (upper - s)..(upper + s) {
                    let (src, shifted, c) = extended_ring(&grid.colat, e);
                    xs.push(c);
                    let p = if shifted { phi + PI } else { phi };
                    vals.push(rings[src].eval(p).0);
                }
                let w = fornberg_weights(t, &xs, 0);
                w[0].iter().zip(&vals).map(|(a, b)| a * b).sum()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            make_grid(3, 16).unwrap_err(),
            Error::UnsupportedDimension(3)
        );
        assert!(matches!(
            make_grid(1, 4),
            Err(Error::ResolutionTooSmall { .. })
        ));
        let g = make_grid(1, 16).unwrap();
        assert!(matches!(
            g.integrate(&[1.0; 3]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn circle_grid_layout() {
        let g = make_grid(1, 256).unwrap();
        assert_eq!(g.len(), 256);
        for (i, w) in g.weights().iter().enumerate() {
            assert_eq!(*w, 2.0 * PI / 256.0);
            let (_, phi) = g.coordinates(i);
            assert!((phi - 2.0 * PI * i as f64 / 256.0).abs() < 1e-15);
        }
        let ones = vec![1.0; 256];
        assert!((g.integrate(&ones).unwrap() - 2.0 * PI).abs() < 1e-13);
        let cosines: Vec<f64> = g.nodes().iter().map(|x| x[0]).collect();
        assert!(g.integrate(&cosines).unwrap().abs() < 1e-12);
    }

    #[test]
    fn sphere_quadrature_normalisation() {
        let g = make_grid(2, 32).unwrap();
        let total: f64 = g.weights().iter().sum();
        assert!((total - 4.0 * PI).abs() < 1e-12 * 4.0 * PI);
        assert!(g.weights().iter().all(|w| *w > 0.0));
        for x in g.nodes() {
            assert!((linalg::norm(x) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        for deg in 0..20 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = if deg % 2 == 1 {
                0.0
            } else {
                2.0 / (deg as f64 + 1.0)
            };
            assert!((q - exact).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn harmonics_integrate_to_zero() {
        let g = make_grid(2, 16).unwrap();
        for l in 1..=12 {
            for m in -(l as i64)..=(l as i64) {
                let f: Vec<f64> = g.nodes().iter().map(|x| harmonic(2, l, m, x)).collect();
                assert!(g.integrate(&f).unwrap().abs() < 1e-10, "l={l} m={m}");
            }
        }
        let c = make_grid(1, 32).unwrap();
        for k in 1..=16 {
            for o in [0, -1] {
                let f: Vec<f64> = c.nodes().iter().map(|x| harmonic(1, k, o, x)).collect();
                assert!(c.integrate(&f).unwrap().abs() < 1e-10);
            }
        }
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        for (dim, res) in [(1, 64), (2, 16)] {
            let g = make_grid(dim, res).unwrap();
            let grad = g.sphere_gradient(&vec![3.5; g.len()]).unwrap();
            assert!(grad.iter().all(|v| linalg::norm(v) < 1e-12));
        }
    }

    #[test]
    fn gradient_of_cosine_on_circle() {
        let g = make_grid(1, 256).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|x| x[0]).collect();
        let grad = g.sphere_gradient(&f).unwrap();
        for (i, v) in grad.iter().enumerate() {
            let (_, phi) = g.coordinates(i);
            let fr = g.frame(i);
            let want = linalg::scale(&fr.tangents[0], -phi.sin());
            assert!(linalg::norm(&linalg::sub(v, &want)) < 1e-8);
        }
    }

    #[test]
    fn gradient_of_linear_restriction_on_sphere() {
        let e = linalg::normalize(&[0.3, -0.5, 0.8]);
        let g = make_grid(2, 32).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|x| linalg::dot(x, &e)).collect();
        let grad = g.sphere_gradient(&f).unwrap();
        let mut err: f64 = 0.0;
        for (x, v) in g.nodes().iter().zip(&grad) {
            let want = linalg::axpy(&e, -linalg::dot(x, &e), x);
            err = err.max(linalg::norm(&linalg::sub(v, &want)));
            assert!(linalg::dot(v, x).abs() < 1e-12);
        }
        assert!(err < 1e-6, "max error {err}");
    }

    #[test]
    fn interpolant_reproduces_smooth_field() {
        let g = make_grid(2, 24).unwrap();
        let f = |x: &Vector| 1.0 + 0.2 * x[0] * x[2] + 0.1 * x[1].powi(3);
        let vals: Vec<f64> = g.nodes().iter().map(f).collect();
        let it = g.interpolant(&vals).unwrap();
        for d in [
            [0.0, 0.0, 1.0],
            [0.6, 0.0, 0.8],
            [0.1, -0.7, -0.7],
            [0.0, 1.0, 0.0],
        ] {
            let d = linalg::normalize(&d);
            assert!((it.eval(&d) - f(&d)).abs() < 1e-6);
        }
    }
}
