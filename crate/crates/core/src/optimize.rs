//! Small derivative-free optimisation helpers: a Nelder–Mead simplex
//! minimiser and a bracketed bisection root finder.

use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    /// Edge length of the axis-aligned starting simplex.
    pub initial_step: f64,
    /// Stop once the simplex diameter and the spread of values fall below these.
    pub x_tol: f64,
    pub f_tol: f64,
    pub max_iterations: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            x_tol: 1e-10,
            f_tol: 1e-14,
            max_iterations: 2000,
        }
    }
}

impl NelderMead {
    pub fn minimize<F: FnMut(&[f64]) -> f64>(&self, mut f: F, start: &[f64]) -> Minimum {
        let d = start.len();
        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
        simplex.push(start.to_vec());
        for i in 0..d {
            let mut p = start.to_vec();
            p[i] += self.initial_step;
            simplex.push(p);
        }
        let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();
        let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iterations {
            let mut order: Vec<usize> = (0..=d).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();

            let diameter = simplex[1..]
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(&simplex[0])
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if diameter <= self.x_tol && (values[d] - values[0]).abs() <= self.f_tol.max(1e-300) {
                converged = true;
                break;
            }
            iterations += 1;

            let mut centroid = alloc::vec![0.0; d];
            for p in &simplex[..d] {
                for (c, x) in centroid.iter_mut().zip(p) {
                    *c += x / d as f64;
                }
            }
            let towards = |s: f64, p: &[f64]| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(p)
                    .map(|(c, x)| c + s * (x - c))
                    .collect()
            };

            let reflected = towards(-alpha, &simplex[d]);
            let fr = f(&reflected);
            if fr < values[0] {
                let expanded = towards(-gamma, &simplex[d]);
                let fe = f(&expanded);
                if fe < fr {
                    simplex[d] = expanded;
                    values[d] = fe;
                } else {
                    simplex[d] = reflected;
                    values[d] = fr;
                }
                continue;
            }
            if fr < values[d - 1] {
                simplex[d] = reflected;
                values[d] = fr;
                continue;
            }
            let (contracted, fc) = if fr < values[d] {
                let c = towards(rho, &reflected);
                let v = f(&c);
                (c, v)
            } else {
                let c = towards(rho, &simplex[d]);
                let v = f(&c);
                (c, v)
            };
            if fc < values[d].min(fr) {
                simplex[d] = contracted;
                values[d] = fc;
                continue;
            }
            let best = simplex[0].clone();
            for i in 1..=d {
                simplex[i] = best
                    .iter()
                    .zip(&simplex[i])
                    .map(|(b, x)| b + sigma * (x - b))
                    .collect();
                values[i] = f(&simplex[i]);
            }
        }
        let best = (0..=d)
            .min_by(|&a, &b| values[a].total_cmp(&values[b]))
            .unwrap_or(0);
        Minimum {
            point: simplex[best].clone(),
            value: values[best],
            iterations,
            converged,
        }
    }
}

/// Root of `f` in `[lo, hi]` by bisection; `None` unless `f(lo)` and `f(hi)`
/// have strictly opposite signs.
pub fn bisect_root<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if !(flo.is_finite() && fhi.is_finite())
        || flo.signum() == fhi.signum()
        || flo == 0.0
        || fhi == 0.0
    {
        return if flo == 0.0 {
            Some(lo)
        } else if fhi == 0.0 {
            Some(hi)
        } else {
            None
        };
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol {
            return Some(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock_minimum() {
        let nm = NelderMead {
            initial_step: 0.5,
            x_tol: 1e-9,
            f_tol: 1e-18,
            max_iterations: 5000,
        };
        let m = nm.minimize(
            |p| (1.0 - p[0]).powi(2) + 100.0 * (p[1] - p[0] * p[0]).powi(2),
            &[-1.2, 1.0],
        );
        assert!(m.converged);
        assert!((m.point[0] - 1.0).abs() < 1e-6 && (m.point[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn shifted_quadratic_in_three_dimensions() {
        let m = NelderMead::default().minimize(
            |p| (p[0] - 0.3).powi(2) + 2.0 * (p[1] + 0.1).powi(2) + (p[2] - 2.0).powi(2),
            &[0.0; 3],
        );
        assert!(
            (m.point[0] - 0.3).abs() < 1e-7
                && (m.point[1] + 0.1).abs() < 1e-7
                && (m.point[2] - 2.0).abs() < 1e-7
        );
    }

    #[test]
    fn bisection_finds_sqrt_two() {
        let r = bisect_root(|x| x * x - 2.0, 0.0, 2.0, 1e-15, 200).unwrap();
        assert!((r - 2.0f64.sqrt()).abs() < 1e-14);
        assert_eq!(bisect_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 100), None);
    }
}
