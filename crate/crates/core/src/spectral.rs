//! Flat-buffer Hermitian eigensolver and spectral propagator kernels.
//!
//! The simulator calls these once per (sample, segment) pair, so they work on
//! row-major slices and avoid allocation for the single-qubit case. Larger
//! dimensions go through nalgebra's Hermitian eigensolver.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Spectral decomposition `H = V diag(vals) V†` of a Hermitian matrix.
///
/// `vecs` is row-major: `vecs[i * d + k]` is component `i` of eigenvector `k`.
/// Eigenvalues are sorted ascending.
#[derive(Debug, Clone, Default)]
pub struct Eigh {
    pub dim: usize,
    pub vals: Vec<f64>,
    pub vecs: Vec<C64>,
}

impl Eigh {
    pub fn with_dim(dim: usize) -> Self {
        Self {
            dim,
            vals: vec![0.0; dim],
            vecs: vec![ZERO; dim * dim],
        }
    }

    /// Decompose the row-major Hermitian matrix `h` in place of `self`.
    pub fn compute(&mut self, h: &[C64]) {
        let d = self.dim;
        debug_assert_eq!(h.len(), d * d);
        if d == 1 {
            self.vals[0] = h[0].re;
            self.vecs[0] = ONE;
        } else if d == 2 {
            eigh2(h, &mut self.vals, &mut self.vecs);
        } else {
            eigh_dense(h, d, &mut self.vals, &mut self.vecs);
        }
    }

    pub fn of(h: &[C64], dim: usize) -> Self {
        let mut e = Self::with_dim(dim);
        e.compute(h);
        e
    }

    /// `out = V diag(exp(-i s vals)) V† psi`.
    pub fn propagate(&self, s: f64, psi: &[C64], out: &mut [C64]) {
        let d = self.dim;
        let mut coeff = [ZERO; 64];
        let coeff = &mut coeff[..d];
        for (k, c) in coeff.iter_mut().enumerate() {
            let mut acc = ZERO;
            for i in 0..d {
                acc += self.vecs[i * d + k].conj() * psi[i];
            }
            *c = acc * C64::from_polar(1.0, -s * self.vals[k]);
        }
        for (i, o) in out.iter_mut().enumerate().take(d) {
            let mut acc = ZERO;
            for (k, c) in coeff.iter().enumerate() {
                acc += self.vecs[i * d + k] * c;
            }
            *o = acc;
        }
    }

    /// `V† v`, the coordinates of `v` in the eigenbasis.
    pub fn to_eigenbasis(&self, v: &[C64], out: &mut [C64]) {
        let d = self.dim;
        for (k, o) in out.iter_mut().enumerate().take(d) {
            let mut acc = ZERO;
            for i in 0..d {
                acc += self.vecs[i * d + k].conj() * v[i];
            }
            *o = acc;
        }
    }

    /// `V c`, mapping eigenbasis coordinates back to the computational basis.
    pub fn from_eigenbasis(&self, c: &[C64], out: &mut [C64]) {
        let d = self.dim;
        for (i, o) in out.iter_mut().enumerate().take(d) {
            let mut acc = ZERO;
            for (k, ck) in c.iter().enumerate().take(d) {
                acc += self.vecs[i * d + k] * ck;
            }
            *o = acc;
        }
    }

    /// Dense `V diag(exp(-i s vals)) V†`, row-major.
    pub fn exp_matrix(&self, s: f64) -> Vec<C64> {
        let d = self.dim;
        let phases: Vec<C64> = self
            .vals
            .iter()
            .map(|&l| C64::from_polar(1.0, -s * l))
            .collect();
        let mut u = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = ZERO;
                for k in 0..d {
                    acc += self.vecs[i * d + k] * phases[k] * self.vecs[j * d + k].conj();
                }
                u[i * d + j] = acc;
            }
        }
        u
    }
}

/// Kernel `(e^{μa} - e^{μb}) / (μa - μb)` with `μ = -i s λ`, reducing to
/// `e^{μa}` on coincident eigenvalues.
#[inline]
pub fn exp_divided_difference(s: f64, la: f64, lb: f64) -> C64 {
    // (e^{μa} - e^{μb}) / (μa - μb) = e^{μb} * expm1(z) / z, z = μa - μb = i y
    let y = -s * (la - lb);
    let base = C64::from_polar(1.0, -s * lb);
    let ratio = if y.abs() < 1e-4 {
        let y2 = y * y;
        // sin y / y and (1 - cos y) / y series
        C64::new(1.0 - y2 / 6.0 + y2 * y2 / 120.0, y / 2.0 - y * y2 / 24.0)
    } else {
        let half = 0.5 * y;
        C64::new(y.sin() / y, 2.0 * half.sin() * half.sin() / y)
    };
    base * ratio
}

fn eigh2(h: &[C64], vals: &mut [f64], vecs: &mut [C64]) {
    let a = h[0].re;
    let b = h[3].re;
    let c = h[1];
    let mean = 0.5 * (a + b);
    let hz = 0.5 * (a - b);
    let cn2 = c.norm_sqr();
    let r = (hz * hz + cn2).sqrt();
    vals[0] = mean - r;
    vals[1] = mean + r;
    let scale = mean.abs().max(r).max(f64::MIN_POSITIVE);
    if r <= 1e-300 || cn2.sqrt() <= 1e-15 * scale {
        // Diagonal up to round-off: eigenvectors are basis vectors.
        if hz >= 0.0 {
            // a >= b: lower eigenvalue belongs to |1>
            vecs[0] = ZERO;
            vecs[1] = ONE;
            vecs[2] = ONE;
            vecs[3] = ZERO;
        } else {
            vecs[0] = ONE;
            vecs[1] = ZERO;
            vecs[2] = ZERO;
            vecs[3] = ONE;
        }
        return;
    }
    let (lo, hi) = if hz >= 0.0 {
        let n = (2.0 * r * (r + hz)).sqrt();
        (
            [-c / n, C64::new((r + hz) / n, 0.0)],
            [C64::new((r + hz) / n, 0.0), c.conj() / n],
        )
    } else {
        let n = (2.0 * r * (r - hz)).sqrt();
        (
            [C64::new((r - hz) / n, 0.0), -c.conj() / n],
            [c / n, C64::new((r - hz) / n, 0.0)],
        )
    };
    vecs[0] = lo[0];
    vecs[2] = lo[1];
    vecs[1] = hi[0];
    vecs[3] = hi[1];
}

fn eigh_dense(h: &[C64], d: usize, vals: &mut [f64], vecs: &mut [C64]) {
    let m = DMatrix::from_row_slice(d, d, h);
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    for (k, &src) in order.iter().enumerate() {
        vals[k] = eig.eigenvalues[src];
        for i in 0..d {
            vecs[i * d + k] = eig.eigenvectors[(i, src)];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(e: &Eigh) -> Vec<C64> {
        let d = e.dim;
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    out[i * d + j] += e.vecs[i * d + k] * e.vals[k] * e.vecs[j * d + k].conj();
                }
            }
        }
        out
    }

    #[test]
    fn two_by_two_reconstructs() {
        let cases = [
            [
                C64::new(1.0, 0.0),
                C64::new(2.0, -3.0),
                C64::new(2.0, 3.0),
                C64::new(-1.0, 0.0),
            ],
            [
                C64::new(-0.5, 0.0),
                C64::new(0.1, 0.2),
                C64::new(0.1, -0.2),
                C64::new(0.7, 0.0),
            ],
            [C64::new(2.0, 0.0), ZERO, ZERO, C64::new(-3.0, 0.0)],
            [C64::new(-2.0, 0.0), ZERO, ZERO, C64::new(3.0, 0.0)],
            [ZERO; 4],
        ];
        for h in cases {
            let e = Eigh::of(&h, 2);
            assert!(e.vals[0] <= e.vals[1]);
            let r = reconstruct(&e);
            for (a, b) in r.iter().zip(h.iter()) {
                assert!((a - b).norm() < 1e-14, "{h:?}");
            }
        }
    }

    #[test]
    fn divided_difference_limits() {
        let s = 0.3;
        let l = 1.7;
        let coincident = exp_divided_difference(s, l, l);
        assert!((coincident - C64::from_polar(1.0, -s * l)).norm() < 1e-15);
        let la = 1.2;
        let lb = -0.4;
        let direct = (C64::from_polar(1.0, -s * la) - C64::from_polar(1.0, -s * lb))
            / (C64::new(0.0, -s) * (la - lb));
        assert!((exp_divided_difference(s, la, lb) - direct).norm() < 1e-14);
        // continuity across the series branch
        let near = exp_divided_difference(s, l + 2e-4 / s, l);
        let nearer = exp_divided_difference(s, l + 0.9e-4 / s, l);
        assert!((near - nearer).norm() < 1e-4);
    }
}
