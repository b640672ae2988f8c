//! Mixed-radix complex FFT for arbitrary lengths, plus periodic spectral
//! differentiation built on top of it.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
use num_traits::{Float, Zero};

#[derive(Debug, Clone)]
pub struct Fft {
    n: usize,
    twiddles: Vec<Complex64>,
}

fn smallest_factor(n: usize) -> usize {
    if n % 2 == 0 {
        return 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n % f == 0 {
            return f;
        }
        f += 2;
    }
    n
}

impl Fft {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "FFT length must be positive");
        let twiddles = (0..n)
            .map(|j| {
                let a = -2.0 * PI * (j as f64) / (n as f64);
                Complex64::new(a.cos(), a.sin())
            })
            .collect();
        Self { n, twiddles }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `X_k = Σ_j x_j e^{-2πi jk/n}`
    pub fn forward(&self, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.n);
        let input = data.to_vec();
        let mut tmp = vec![Complex64::zero(); smallest_factor(self.n).max(2)];
        self.recurse(&input, 0, 1, self.n, data, &mut tmp);
    }

    /// Inverse transform including the `1/n` normalisation.
    pub fn inverse(&self, data: &mut [Complex64]) {
        for x in data.iter_mut() {
            *x = x.conj();
        }
        self.forward(data);
        let s = 1.0 / self.n as f64;
        for x in data.iter_mut() {
            *x = x.conj() * s;
        }
    }

    fn recurse(
        &self,
        input: &[Complex64],
        offset: usize,
        stride: usize,
        n: usize,
        out: &mut [Complex64],
        tmp: &mut Vec<Complex64>,
    ) {
        if n == 1 {
            out[0] = input[offset];
            return;
        }
        let p = smallest_factor(n);
        let m = n / p;
        for q in 0..p {
            self.recurse(
                input,
                offset + q * stride,
                stride * p,
                m,
                &mut out[q * m..(q + 1) * m],
                tmp,
            );
        }
        if tmp.len() < p {
            tmp.resize(p, Complex64::zero());
        }
        let step = self.n / n;
        for k in 0..m {
            for q in 0..p {
                tmp[q] = out[q * m + k];
            }
            for s in 0..p {
                let idx = k + s * m;
                let mut acc = tmp[0];
                for (q, y) in tmp.iter().enumerate().take(p).skip(1) {
                    let e = (q * idx) % n;
                    acc += self.twiddles[e * step] * y;
                }
                out[idx] = acc;
            }
        }
    }

    /// Signed wavenumber of FFT bin `k`.
    pub fn wavenumber(&self, k: usize) -> f64 {
        if 2 * k < self.n {
            k as f64
        } else {
            k as f64 - self.n as f64
        }
    }

    /// First and second derivatives of a real `2π`-periodic sample vector.
    /// The Nyquist mode is dropped from the first derivative only.
    pub fn periodic_derivatives(&self, f: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.n;
        let mut spec: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward(&mut spec);
        let mut d1 = spec.clone();
        let mut d2 = spec;
        for k in 0..n {
            let w = self.wavenumber(k);
            let nyquist = n % 2 == 0 && 2 * k == n;
            d1[k] = if nyquist {
                Complex64::zero()
            } else {
                d1[k] * Complex64::new(0.0, w)
            };
            d2[k] *= -w * w;
        }
        self.inverse(&mut d1);
        self.inverse(&mut d2);
        (
            d1.iter().map(|c| c.re).collect(),
            d2.iter().map(|c| c.re).collect(),
        )
    }

    /// Zero every Fourier mode with `|m| > cutoff` of a real periodic vector.
    pub fn low_pass(&self, f: &mut [f64], cutoff: usize) {
        if 2 * cutoff >= self.n {
            return;
        }
        let mut spec: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward(&mut spec);
        for k in 0..self.n {
            if self.wavenumber(k).abs() > cutoff as f64 {
                spec[k] = Complex64::zero();
            }
        }
        self.inverse(&mut spec);
        for (x, c) in f.iter_mut().zip(&spec) {
            *x = c.re;
        }
    }
}

/// Trigonometric interpolant of a real periodic sample vector on the uniform
/// grid `φ_j = 2πj/n`.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    /// `(k, a_k, b_k)`: `f(φ) = Σ a_k cos kφ + b_k sin kφ`.
    terms: Vec<(f64, f64, f64)>,
}

impl TrigInterpolant {
    pub fn new(fft: &Fft, f: &[f64]) -> Self {
        let n = fft.len();
        let mut spec: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        fft.forward(&mut spec);
        let inv = 1.0 / n as f64;
        let mut terms = Vec::with_capacity(n / 2 + 1);
        terms.push((0.0, spec[0].re * inv, 0.0));
        for k in 1..=(n / 2) {
            let c = spec[k] * inv;
            if n % 2 == 0 && 2 * k == n {
                terms.push((k as f64, c.re, 0.0));
            } else {
                terms.push((k as f64, 2.0 * c.re, -2.0 * c.im));
            }
        }
        Self { terms }
    }

    /// Value and first derivative at `phi`.
    pub fn eval(&self, phi: f64) -> (f64, f64) {
        let (s1, c1) = phi.sin_cos();
        let (mut s, mut c) = (0.0, 1.0);
        let mut v = 0.0;
        let mut d = 0.0;
        for &(k, a, b) in &self.terms {
            v += a * c + b * s;
            d += k * (b * c - a * s);
            let cn = c * c1 - s * s1;
            s = s * c1 + c * s1;
            c = cn;
        }
        (v, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter().enumerate().fold(Complex64::zero(), |acc, (j, v)| {
                    let a = -2.0 * PI * ((j * k) % n) as f64 / n as f64;
                    acc + v * Complex64::new(a.cos(), a.sin())
                })
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft_for_mixed_lengths() {
        for n in [1usize, 2, 3, 5, 8, 12, 30, 96, 97] {
            let x: Vec<Complex64> = (0..n)
                .map(|j| Complex64::new((j as f64 * 0.7).sin(), (j as f64 * 1.3).cos()))
                .collect();
            let want = naive_dft(&x);
            let mut got = x.clone();
            Fft::new(n).forward(&mut got);
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).norm() < 1e-10 * n as f64, "n = {n}");
            }
            Fft::new(n).inverse(&mut got);
            for (a, b) in got.iter().zip(&x) {
                assert!((a - b).norm() < 1e-12 * n as f64);
            }
        }
    }

    #[test]
    fn spectral_derivative_of_trig_polynomial() {
        let n = 64;
        let fft = Fft::new(n);
        let phi: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
        let f: Vec<f64> = phi
            .iter()
            .map(|p| (3.0 * p).sin() + 0.5 * (5.0 * p).cos())
            .collect();
        let (d1, d2) = fft.periodic_derivatives(&f);
        for (i, p) in phi.iter().enumerate() {
            let e1 = 3.0 * (3.0 * p).cos() - 2.5 * (5.0 * p).sin();
            let e2 = -9.0 * (3.0 * p).sin() - 12.5 * (5.0 * p).cos();
            assert!((d1[i] - e1).abs() < 1e-12);
            assert!((d2[i] - e2).abs() < 1e-11);
        }
    }

    #[test]
    fn interpolant_reproduces_band_limited_function() {
        let n = 32;
        let fft = Fft::new(n);
        let f: Vec<f64> = (0..n)
            .map(|j| {
                let p = 2.0 * PI * j as f64 / n as f64;
                1.0 + 0.3 * p.cos() - 0.2 * (4.0 * p).sin()
            })
            .collect();
        let it = TrigInterpolant::new(&fft, &f);
        let p = 0.123;
        let (v, d) = it.eval(p);
        assert!((v - (1.0 + 0.3 * p.cos() - 0.2 * (4.0 * p).sin())).abs() < 1e-13);
        assert!((d - (-0.3 * p.sin() - 0.8 * (4.0 * p).cos())).abs() < 1e-12);
    }
}
