//! Fixed-size vector helpers.
//!
//! Points of `R^2` and `R^3` are both stored as `[f64; 3]`; planar quantities
//! keep a zero third component. Matrices are row-major `[[f64; 3]; 3]`.

use num_traits::Float;

pub type Vector = [f64; 3];
pub type Matrix = [[f64; 3]; 3];

pub const ZERO: Vector = [0.0; 3];

#[inline]
pub fn dot(a: &Vector, b: &Vector) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn add(a: &Vector, b: &Vector) -> Vector {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub(a: &Vector, b: &Vector) -> Vector {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale(a: &Vector, s: f64) -> Vector {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// `a + s * b`
#[inline]
pub fn axpy(a: &Vector, s: f64, b: &Vector) -> Vector {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

#[inline]
pub fn norm(a: &Vector) -> f64 {
    dot(a, a).sqrt()
}

pub fn normalize(a: &Vector) -> Vector {
    let n = norm(a);
    scale(a, 1.0 / n)
}

pub fn cross(a: &Vector, b: &Vector) -> Vector {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn mat_vec(m: &Matrix, v: &Vector) -> Vector {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

/// `vᵀ M w`
pub fn bilinear(m: &Matrix, v: &Vector, w: &Vector) -> f64 {
    dot(v, &mat_vec(m, w))
}

pub fn outer(a: &Vector, b: &Vector) -> Matrix {
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = a[i] * b[j];
        }
    }
    m
}

pub fn mat_add(a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = *a;
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] += b[i][j];
        }
    }
    m
}

pub fn mat_scale(a: &Matrix, s: f64) -> Matrix {
    let mut m = *a;
    for row in m.iter_mut() {
        for x in row.iter_mut() {
            *x *= s;
        }
    }
    m
}

pub fn identity(dim: usize) -> Matrix {
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate().take(dim) {
        row[i] = 1.0;
    }
    m
}

pub fn trace_product(a: &Matrix, b: &Matrix) -> f64 {
    let mut t = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            t += a[i][j] * b[j][i];
        }
    }
    t
}

/// Inverse of the leading `dim × dim` block; `None` if singular.
pub fn inverse(m: &Matrix, dim: usize) -> Option<Matrix> {
    let mut out = [[0.0; 3]; 3];
    match dim {
        1 => {
            if m[0][0] == 0.0 {
                return None;
            }
            out[0][0] = 1.0 / m[0][0];
        }
        2 => {
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            if det == 0.0 {
                return None;
            }
            out[0][0] = m[1][1] / det;
            out[0][1] = -m[0][1] / det;
            out[1][0] = -m[1][0] / det;
            out[1][1] = m[0][0] / det;
        }
        3 => {
            let c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
            let c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
            let c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
            let det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
            if det == 0.0 {
                return None;
            }
            out[0][0] = c00 / det;
            out[1][0] = c01 / det;
            out[2][0] = c02 / det;
            out[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
            out[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
            out[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
            out[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
            out[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
            out[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
        }
        _ => return None,
    }
    Some(out)
}

/// Eigenvalues (ascending) of the leading `dim × dim` block of a symmetric
/// matrix, by cyclic Jacobi rotations.
pub fn sym_eigenvalues(m: &Matrix, dim: usize) -> [f64; 3] {
    let mut a = *m;
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..dim {
            for q in (p + 1)..dim {
                off += a[p][q] * a[p][q];
            }
        }
        let scale: f64 = (0..dim).map(|i| a[i][i] * a[i][i]).sum::<f64>() + off;
        if off <= 1e-30 * scale || off == 0.0 {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..dim {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..dim {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev = [f64::INFINITY; 3];
    for (i, e) in ev.iter_mut().enumerate().take(dim) {
        *e = a[i][i];
    }
    ev[..dim].sort_by(|x, y| x.total_cmp(y));
    ev
}

/// Orthonormal basis of the orthogonal complement of the unit vector `v`
/// inside `R^dim`. Only the first `dim - 1` entries are meaningful.
pub fn complement_basis(v: &Vector, dim: usize) -> [Vector; 2] {
    if dim == 2 {
        return [[-v[1], v[0], 0.0], ZERO];
    }
    let pick = if v[0].abs() <= v[1].abs() && v[0].abs() <= v[2].abs() {
        [1.0, 0.0, 0.0]
    } else if v[1].abs() <= v[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let e1 = normalize(&axpy(&pick, -dot(&pick, v), v));
    let e2 = cross(v, &e1);
    [e1, e2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_matches_known_spectrum() {
        let m = [[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 5.0]];
        let ev = sym_eigenvalues(&m, 3);
        assert!((ev[0] - 1.0).abs() < 1e-14);
        assert!((ev[1] - 3.0).abs() < 1e-14);
        assert!((ev[2] - 5.0).abs() < 1e-14);
        let ev2 = sym_eigenvalues(&m, 2);
        assert!((ev2[0] - 1.0).abs() < 1e-14 && (ev2[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = [[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]];
        let inv = inverse(&m, 3).unwrap();
        for i in 0..3 {
            let row = mat_vec(&inv, &[m[0][i], m[1][i], m[2][i]]);
            for (j, x) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((x - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn complement_is_orthonormal() {
        let v = normalize(&[0.3, -0.4, 0.8]);
        let [a, b] = complement_basis(&v, 3);
        assert!(dot(&a, &v).abs() < 1e-15 && dot(&b, &v).abs() < 1e-15);
        assert!(dot(&a, &b).abs() < 1e-15);
        assert!((norm(&a) - 1.0).abs() < 1e-15 && (norm(&b) - 1.0).abs() < 1e-15);
    }
}
