//! Run configuration (JSON). The schema is described in `CONFIG.md`.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use wulff_core::hypersurface::FourierMode;
use wulff_core::linalg::{self, Matrix, Vector};
use wulff_core::{MinkowskiNorm, SphereGrid, StarSurface};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    VerifyIdentities,
    Flow,
    Deficits,
    StabilitySweep,
    Convergence,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::VerifyIdentities => "verify-identities",
            Task::Flow => "flow",
            Task::Deficits => "deficits",
            Task::StabilitySweep => "stability-sweep",
            Task::Convergence => "convergence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NormSpec {
    Euclidean,
    /// Exactly one of `semi_axes` (Wulff shape axes) or `matrix` (`A` in `√(xᵀAx)`).
    Ellipsoid {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        semi_axes: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<Vec<Vec<f64>>>,
    },
    Perturbed {
        epsilon: f64,
        #[serde(default = "default_degree")]
        degree: usize,
    },
}

fn default_degree() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    pub degree: usize,
    #[serde(default)]
    pub order: i64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SurfaceSpec {
    Sphere {
        #[serde(default = "one")]
        radius: f64,
        #[serde(default)]
        center: Vec<f64>,
    },
    Wulff {
        #[serde(default = "one")]
        scale: f64,
        #[serde(default)]
        center: Vec<f64>,
    },
    RadialFourier {
        #[serde(default = "one")]
        base: f64,
        modes: Vec<ModeSpec>,
        #[serde(default)]
        center: Vec<f64>,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub dim: usize,
    pub resolution: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FlowSpec {
    pub end_time: f64,
    pub cfl: f64,
    pub cadence: usize,
    pub max_steps: usize,
}

impl Default for FlowSpec {
    fn default() -> Self {
        let d = wulff_core::FlowConfig::default();
        Self {
            end_time: d.end_time,
            cfl: d.cfl,
            cadence: d.cadence,
            max_steps: d.max_steps,
        }
    }
}

/// The family `r = base·(1 + δ·Y)` over `deltas`, with `Y` the harmonic `(degree, order)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub deltas: Vec<f64>,
    #[serde(default = "default_sweep_degree")]
    pub degree: usize,
    #[serde(default)]
    pub order: i64,
    #[serde(default = "one")]
    pub base: f64,
    /// Exponent of the momentum deficit column.
    #[serde(default = "default_sweep_p")]
    pub p: f64,
}

fn default_sweep_degree() -> usize {
    1
}

fn default_sweep_p() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Duality residuals; defaults to 1e-10 for closed-form duals and 1e-6 otherwise.
    pub identities: Option<f64>,
    /// Relative `| |W|_F − (n+1)Vol(L) |`.
    pub wulff_invariant: f64,
    /// `max |H_F − n|` on the Wulff shape.
    pub wulff_curvature: f64,
    /// Largest allowed increase of `Q` between recorded samples.
    pub monotonicity: f64,
    /// Relative error of `|Σ_t|_F = e^t |Σ_0|_F`.
    pub perimeter_law: f64,
    /// Relative slack on the barrier radii `min/max F⁰(x̂ − P)`.
    pub barrier: f64,
    /// Lower bound `−deficit` for every deficit.
    pub deficit: f64,
    /// `|surface − divergence|` form of the gap integral.
    pub gap_identity: f64,
    /// Final `sup |r̂/ρ − a|` in a convergence run.
    pub convergence: f64,
    /// `sup_dist` below which samples are left out of the decay fit.
    pub decay_floor: f64,
    /// Minimal coefficient of determination of the decay fit.
    pub decay_r_squared: f64,
    /// `max/min` of each sweep ratio column.
    pub ratio_spread: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identities: None,
            wulff_invariant: 1e-6,
            wulff_curvature: 1e-4,
            monotonicity: 1e-8,
            perimeter_law: 1e-3,
            barrier: 1e-6,
            deficit: 1e-8,
            gap_identity: 1e-6,
            convergence: 1e-3,
            decay_floor: 1e-8,
            decay_r_squared: 0.99,
            ratio_spread: 100.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
    pub norm: NormSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceSpec>,
    pub grid: GridSpec,
    #[serde(default)]
    pub flow: FlowSpec,
    /// `P`; empty means the origin.
    #[serde(default)]
    pub center: Vec<f64>,
    #[serde(default = "default_exponents")]
    pub exponents: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    /// Random samples for the duality checks.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

fn default_exponents() -> Vec<f64> {
    vec![1.0, 2.0, 3.0]
}

fn default_samples() -> usize {
    1000
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).context("malformed configuration")?;
        ensure!(
            cfg.schema_version == SCHEMA_VERSION,
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            cfg.schema_version
        );
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn dim(&self) -> usize {
        self.grid.dim
    }

    pub fn build_grid(&self) -> Result<Arc<SphereGrid>> {
        Ok(Arc::new(SphereGrid::new(
            self.grid.dim,
            self.grid.resolution,
        )?))
    }

    pub fn build_norm(&self) -> Result<MinkowskiNorm> {
        let n = self.dim();
        Ok(match &self.norm {
            NormSpec::Euclidean => MinkowskiNorm::euclidean(n)?,
            NormSpec::Ellipsoid {
                semi_axes: Some(a),
                matrix: None,
            } => MinkowskiNorm::ellipsoid_from_semi_axes(n, a)?,
            NormSpec::Ellipsoid {
                semi_axes: None,
                matrix: Some(rows),
            } => {
                let k = n + 1;
                ensure!(
                    rows.len() == k && rows.iter().all(|r| r.len() == k),
                    "ellipsoid matrix must be {k}×{k}"
                );
                let mut m: Matrix = [[0.0; 3]; 3];
                for (i, row) in rows.iter().enumerate() {
                    m[i][..k].copy_from_slice(row);
                }
                MinkowskiNorm::ellipsoid(n, m)?
            }
            NormSpec::Ellipsoid { .. } => {
                bail!("ellipsoid norm needs exactly one of `semi_axes` or `matrix`")
            }
            NormSpec::Perturbed { epsilon, degree } => {
                MinkowskiNorm::perturbed(n, *epsilon, *degree)?
            }
        })
    }

    /// `P` as a point of the ambient space.
    pub fn center_point(&self) -> Result<Vector> {
        point(&self.center, self.dim(), "center")
    }

    pub fn build_surface(
        &self,
        grid: &Arc<SphereGrid>,
        norm: &MinkowskiNorm,
    ) -> Result<StarSurface> {
        let spec = self
            .surface
            .as_ref()
            .context("this task needs a `surface`")?;
        let n = self.dim();
        Ok(match spec {
            SurfaceSpec::Sphere { radius, center } => {
                StarSurface::sphere(grid.clone(), *radius, point(center, n, "surface.center")?)?
            }
            SurfaceSpec::Wulff { scale, center } => StarSurface::wulff(
                grid.clone(),
                norm,
                *scale,
                point(center, n, "surface.center")?,
            )?,
            SurfaceSpec::RadialFourier {
                base,
                modes,
                center,
            } => {
                let modes: Vec<FourierMode> = modes
                    .iter()
                    .map(|m| FourierMode {
                        degree: m.degree,
                        order: m.order,
                        delta: m.delta,
                    })
                    .collect();
                StarSurface::radial_fourier(
                    grid.clone(),
                    *base,
                    &modes,
                    point(center, n, "surface.center")?,
                )?
            }
        })
    }

    pub fn build_family(&self, grid: &Arc<SphereGrid>) -> Result<(f64, Vec<(f64, StarSurface)>)> {
        let s = self
            .sweep
            .as_ref()
            .context("stability-sweep needs a `sweep` section")?;
        ensure!(!s.deltas.is_empty(), "sweep.deltas is empty");
        let family = s
            .deltas
            .iter()
            .map(|&delta| {
                let mode = FourierMode {
                    degree: s.degree,
                    order: s.order,
                    delta,
                };
                Ok((
                    delta,
                    StarSurface::radial_fourier(grid.clone(), s.base, &[mode], linalg::ZERO)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((s.p, family))
    }

    pub fn flow_config(&self) -> Result<wulff_core::FlowConfig> {
        let f = &self.flow;
        let cfg = wulff_core::FlowConfig {
            end_time: f.end_time,
            cfl: f.cfl,
            max_steps: f.max_steps,
            rescale_center: self.center_point()?,
            cadence: f.cadence,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Duality tolerance, defaulting by norm family.
    pub fn identity_tolerance(&self) -> f64 {
        self.tolerances.identities.unwrap_or(match self.norm {
            NormSpec::Perturbed { .. } => 1e-6,
            _ => 1e-10,
        })
    }
}

fn point(v: &[f64], n: usize, what: &str) -> Result<Vector> {
    let mut p = linalg::ZERO;
    if v.is_empty() {
        return Ok(p);
    }
    ensure!(
        v.len() == n + 1,
        "`{what}` must have {} coordinates, found {}",
        n + 1,
        v.len()
    );
    ensure!(v.iter().all(|x| x.is_finite()), "`{what}` must be finite");
    p[..v.len()].copy_from_slice(v);
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = RunConfig::from_json(
            r#"{"schema_version": 1, "norm": {"family": "euclidean"}, "grid": {"dim": 1, "resolution": 64}}"#,
        )
        .unwrap();
        assert_eq!(cfg.exponents, vec![1.0, 2.0, 3.0]);
        assert_eq!(cfg.flow, FlowSpec::default());
        assert_eq!(cfg.identity_tolerance(), 1e-10);
        assert_eq!(cfg.center_point().unwrap(), linalg::ZERO);
    }

    #[test]
    fn rejects_unknown_fields_and_versions() {
        let ok = r#"{"schema_version": 1, "norm": {"family": "euclidean"}, "grid": {"dim": 1, "resolution": 64}}"#;
        assert!(RunConfig::from_json(ok).is_ok());
        assert!(RunConfig::from_json(&ok.replace("}}", "}, \"bogus\": 1}")).is_err());
        assert!(RunConfig::from_json(
            &ok.replace("\"schema_version\": 1", "\"schema_version\": 9")
        )
        .is_err());
        let both = ok.replace(
            r#"{"family": "euclidean"}"#,
            r#"{"family": "ellipsoid", "semi_axes": [2, 1], "matrix": [[1, 0], [0, 1]]}"#,
        );
        assert!(RunConfig::from_json(&both).unwrap().build_norm().is_err());
    }

    #[test]
    fn surface_and_center_dimensions_are_checked() {
        let cfg = RunConfig::from_json(
            r#"{"schema_version": 1, "norm": {"family": "ellipsoid", "semi_axes": [2, 1]},
                "surface": {"kind": "radial-fourier", "modes": [{"degree": 1, "delta": 0.3}], "center": [0.1, 0.2]},
                "grid": {"dim": 1, "resolution": 64}, "center": [0.0, 0.0, 1.0]}"#,
        )
        .unwrap();
        let grid = cfg.build_grid().unwrap();
        let norm = cfg.build_norm().unwrap();
        let s = cfg.build_surface(&grid, &norm).unwrap();
        assert_eq!(s.center(), [0.1, 0.2, 0.0]);
        assert!(cfg.center_point().is_err());
    }
}
