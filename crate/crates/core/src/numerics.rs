//! Dense complex linear algebra for synthesis and verification.
//!
//! Matrices are small (dimension ≤ a few hundred), so everything is a plain
//! row-major `Vec<Complex64>` with straightforward O(n³) kernels. The
//! eigendecomposition is specialised to unitary (normal) matrices: the
//! Hermitian and anti-Hermitian parts commute, so a cyclic Jacobi sweep on
//! the Hermitian part followed by a per-cluster sweep on the anti-Hermitian
//! part yields a common eigenbasis. This keeps the routine deterministic
//! across platforms, which matters because the eigenbasis fixes Dove-prism
//! placements downstream.

// Indexed loops mirror the textbook update formulas in the kernels below.
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Default tolerance for unitarity checks.
pub const UNITARY_TOL: f64 = 1e-9;

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl std::fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Build from rows of complex entries. All rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Regime("ragged rows in matrix literal".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                a_rows: self.rows,
                a_cols: self.cols,
                b_rows: other.rows,
                b_cols: other.cols,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                a_rows: self.rows,
                a_cols: self.cols,
                b_rows: other.rows,
                b_cols: other.cols,
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Largest entry magnitude (max-norm).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Index of the entry with the largest magnitude (first in scan order).
    fn argmax_abs(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut best_v = -1.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j).norm();
                if v > best_v {
                    best_v = v;
                    best = (i, j);
                }
            }
        }
        best
    }

    /// Max-norm of `self† · self − I`; `None` when not square.
    pub fn unitarity_deviation(&self) -> Option<f64> {
        if !self.is_square() {
            return None;
        }
        let prod = self.dagger().mul(self).expect("square product");
        let diff = prod
            .sub(&Self::identity(self.rows))
            .expect("same shape");
        Some(diff.max_abs())
    }
}

/// True iff `m† m` is the identity within `tol` in max-norm.
pub fn is_unitary(m: &CMatrix, tol: f64) -> Result<bool> {
    match m.unitarity_deviation() {
        Some(dev) => Ok(dev <= tol),
        None => Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        }),
    }
}

fn require_unitary(m: &CMatrix, tol: f64) -> Result<()> {
    let dev = m.unitarity_deviation().ok_or(Error::NonSquare {
        rows: m.rows(),
        cols: m.cols(),
    })?;
    if dev > tol {
        return Err(Error::NotUnitary {
            deviation: dev,
            tol,
        });
    }
    Ok(())
}

/// Eigendecomposition of a unitary: `u = m† · diag(e^{-i φ_j}) · m`.
///
/// Rows of `m` are the eigenvectors; `phases` are in `[0, 2π)`, sorted
/// ascending. Degenerate eigenspaces get a canonical basis via Gram-Schmidt
/// in index order so the output is reproducible.
#[derive(Clone, Debug)]
pub struct EigenDecomp {
    pub m: CMatrix,
    pub phases: Vec<f64>,
}

impl EigenDecomp {
    /// Rebuild `m† · diag(e^{-i φ_j}) · m`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.phases.len();
        let mut d = CMatrix::zeros(n, n);
        for (j, phi) in self.phases.iter().enumerate() {
            d.set(j, j, Complex64::from_polar(1.0, -phi));
        }
        self.m
            .dagger()
            .mul(&d)
            .and_then(|t| t.mul(&self.m))
            .expect("square shapes")
    }
}

/// Cyclic Jacobi diagonalisation of a Hermitian matrix.
///
/// Returns `(eigenvalues, v)` with `a = v · diag(λ) · v†` and the columns of
/// `v` orthonormal eigenvectors. Sweep order is fixed, so the result is
/// deterministic for a given input.
fn jacobi_hermitian(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.rows();
    let mut a = a.clone();
    let mut v = CMatrix::identity(n);
    let scale = a.max_abs().max(1.0);

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a.get(p, q).norm());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let m = apq.norm();
                if m <= 1e-18 * scale {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let u = apq / m;
                let tau = (aqq - app) / (2.0 * m);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // A <- R† A R with R = [[c, s·u], [-s·conj(u), c]] on (p, q).
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    let new_kp = akp * c - akq * s * u.conj();
                    let new_kq = akp * s * u + akq * c;
                    a.set(k, p, new_kp);
                    a.set(p, k, new_kp.conj());
                    a.set(k, q, new_kq);
                    a.set(q, k, new_kq.conj());
                }
                a.set(p, p, Complex64::new(app - t * m, 0.0));
                a.set(q, q, Complex64::new(aqq + t * m, 0.0));
                a.set(p, q, Complex64::new(0.0, 0.0));
                a.set(q, p, Complex64::new(0.0, 0.0));

                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c - vkq * s * u.conj());
                    v.set(k, q, vkp * s * u + vkq * c);
                }
            }
        }
    }

    let vals = (0..n).map(|i| a.get(i, i).re).collect();
    (vals, v)
}

fn column(m: &CMatrix, j: usize) -> Vec<Complex64> {
    (0..m.rows()).map(|i| m.get(i, j)).collect()
}

fn set_column(m: &mut CMatrix, j: usize, col: &[Complex64]) {
    for (i, &z) in col.iter().enumerate() {
        m.set(i, j, z);
    }
}

/// Eigendecomposition of a unitary matrix per the `λ_j = e^{-i φ_j}`
/// convention. Fails when the input is not unitary within [`UNITARY_TOL`].
pub fn eig_unitary(u: &CMatrix) -> Result<EigenDecomp> {
    require_unitary(u, UNITARY_TOL)?;
    let n = u.rows();
    let udag = u.dagger();

    // Commuting Hermitian parts: U = H + iK.
    let half = Complex64::new(0.5, 0.0);
    let mut h = CMatrix::zeros(n, n);
    let mut k = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let s = u.get(i, j) + udag.get(i, j);
            let d = u.get(i, j) - udag.get(i, j);
            h.set(i, j, s * half);
            k.set(i, j, d * half * Complex64::new(0.0, -1.0));
        }
    }

    let (hvals, mut v) = jacobi_hermitian(&h);

    // Sort the eigenbasis of H ascending by eigenvalue, stable.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| hvals[a].partial_cmp(&hvals[b]).unwrap());
    let hvals_sorted: Vec<f64> = order.iter().map(|&i| hvals[i]).collect();
    let cols: Vec<Vec<Complex64>> = order.iter().map(|&i| column(&v, i)).collect();
    for (j, col) in cols.iter().enumerate() {
        set_column(&mut v, j, col);
    }

    // Within clusters of degenerate H-eigenvalues, diagonalise K restricted
    // to the cluster so the common eigenbasis of (H, K) emerges.
    let mut kvals = vec![0.0f64; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (hvals_sorted[end] - hvals_sorted[end - 1]).abs() <= 1e-8 {
            end += 1;
        }
        let csize = end - start;
        if csize == 1 {
            let col = column(&v, start);
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                let mut kv = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    kv += k.get(i, j) * col[j];
                }
                acc += col[i].conj() * kv;
            }
            kvals[start] = acc.re;
        } else {
            let sub = CMatrix::from_fn(csize, csize, |r, c| {
                let cr = column(&v, start + r);
                let cc = column(&v, start + c);
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    let mut kv = Complex64::new(0.0, 0.0);
                    for j in 0..n {
                        kv += k.get(i, j) * cc[j];
                    }
                    acc += cr[i].conj() * kv;
                }
                acc
            });
            let (sub_vals, w) = jacobi_hermitian(&sub);
            let old: Vec<Vec<Complex64>> =
                (0..csize).map(|c| column(&v, start + c)).collect();
            for c in 0..csize {
                let mut newcol = vec![Complex64::new(0.0, 0.0); n];
                for r in 0..csize {
                    let wrc = w.get(r, c);
                    for i in 0..n {
                        newcol[i] += old[r][i] * wrc;
                    }
                }
                set_column(&mut v, start + c, &newcol);
                kvals[start + c] = sub_vals[c];
            }
        }
        start = end;
    }

    // λ = h + i k is on the unit circle; φ = (-arg λ) mod 2π.
    let mut phases: Vec<f64> = (0..n)
        .map(|i| {
            let lambda = Complex64::new(hvals_sorted[i], kvals[i]);
            let mut phi = (-lambda.arg()).rem_euclid(TAU);
            if TAU - phi < 1e-12 {
                phi = 0.0;
            }
            phi
        })
        .collect();

    // Order by phase ascending, stable.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| phases[a].partial_cmp(&phases[b]).unwrap());
    let cols: Vec<Vec<Complex64>> = order.iter().map(|&i| column(&v, i)).collect();
    phases = order.iter().map(|&i| phases[i]).collect();
    for (j, col) in cols.iter().enumerate() {
        set_column(&mut v, j, col);
    }

    // Canonical basis inside degenerate phase clusters: Gram-Schmidt in
    // index order.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (phases[end] - phases[end - 1]).abs() <= 1e-9 {
            end += 1;
        }
        if end - start > 1 {
            let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(end - start);
            for j in start..end {
                let mut col = column(&v, j);
                for prev in &basis {
                    let mut overlap = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        overlap += prev[i].conj() * col[i];
                    }
                    for i in 0..n {
                        col[i] -= overlap * prev[i];
                    }
                }
                let norm: f64 = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                for z in &mut col {
                    *z /= norm;
                }
                basis.push(col);
            }
            for (j, col) in basis.iter().enumerate() {
                set_column(&mut v, start + j, col);
            }
        }
        start = end;
    }

    Ok(EigenDecomp {
        m: v.dagger(),
        phases,
    })
}

/// `u^k` by binary exponentiation; `u^0` is the identity.
pub fn matrix_power(u: &CMatrix, k: u32) -> Result<CMatrix> {
    if !u.is_square() {
        return Err(Error::NonSquare {
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    let mut result = CMatrix::identity(u.rows());
    let mut base = u.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base)?;
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base)?;
        }
    }
    Ok(result)
}

/// Global-phase-invariant max-norm distance.
///
/// Aligns on the largest-magnitude entry of each argument and takes the
/// smaller residual, which makes the result exactly symmetric and zero iff
/// the matrices differ by one global phase.
pub fn phase_aligned_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::ShapeMismatch {
            a_rows: a.rows(),
            a_cols: a.cols(),
            b_rows: b.rows(),
            b_cols: b.cols(),
        });
    }
    let dist_with = |theta: f64| -> f64 {
        a.sub(&b.scale(Complex64::from_polar(1.0, theta)))
            .expect("same shape")
            .max_abs()
    };
    let (bi, bj) = b.argmax_abs();
    let theta_b = a.get(bi, bj).arg() - b.get(bi, bj).arg();
    let (ai, aj) = a.argmax_abs();
    let theta_a = b.get(ai, aj).arg() - a.get(ai, aj).arg();
    Ok(dist_with(theta_b).min(dist_with(-theta_a)))
}

/// `d`-dimensional discrete Fourier matrix, `F[j][k] = ω^{jk}/√d`.
pub fn fourier_matrix(d: usize) -> CMatrix {
    let norm = 1.0 / (d as f64).sqrt();
    CMatrix::from_fn(d, d, |j, k| {
        Complex64::from_polar(norm, TAU * ((j * k) % d) as f64 / d as f64)
    })
}

/// Cyclic shift by `k`: `|q⟩ → |(q+k) mod d⟩`.
pub fn cyclic_shift_matrix(d: usize, k: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| {
        if i == (j + k) % d {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `Z_d^k = diag(ω^{qk})` with `ω = e^{2πi/d}`.
pub fn pauli_z_matrix(d: usize, k: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, TAU * ((i * k) % d) as f64 / d as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Haar-like random unitary: QR of a complex Gaussian matrix via modified
/// Gram-Schmidt, with the R-diagonal phases folded in. Deterministic for a
/// given seed.
pub fn haar_unitary(d: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<Complex64>> = (0..d)
        .map(|_| {
            (0..d)
                .map(|_| {
                    // Box-Muller pairs.
                    let u1: f64 = rng.gen::<f64>().max(1e-12);
                    let u2: f64 = rng.gen();
                    let r = (-2.0 * u1.ln()).sqrt();
                    Complex64::new(r * (TAU * u2).cos(), r * (TAU * u2).sin())
                })
                .collect()
        })
        .collect();

    for j in 0..d {
        for i in 0..j {
            let mut overlap = Complex64::new(0.0, 0.0);
            for k in 0..d {
                overlap += cols[i][k].conj() * cols[j][k];
            }
            for k in 0..d {
                let v = cols[i][k];
                cols[j][k] -= overlap * v;
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let phase = cols[j][j] / cols[j][j].norm().max(1e-300);
        for z in &mut cols[j] {
            *z = *z / norm * phase.conj();
        }
    }

    CMatrix::from_fn(d, d, |i, j| cols[j][i])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x2() -> CMatrix {
        CMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap()
    }

    #[test]
    fn identity_is_unitary() {
        assert!(is_unitary(&CMatrix::identity(2), 1e-12).unwrap());
    }

    #[test]
    fn hadamard_is_unitary() {
        let s = 1.0 / 2.0f64.sqrt();
        let h = CMatrix::from_rows(vec![
            vec![c(s, 0.0), c(s, 0.0)],
            vec![c(s, 0.0), c(-s, 0.0)],
        ])
        .unwrap();
        assert!(is_unitary(&h, 1e-12).unwrap());
    }

    #[test]
    fn column_norm_two_is_not_unitary() {
        let m = CMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(2.0, 0.0)],
        ])
        .unwrap();
        assert!(!is_unitary(&m, 1e-6).unwrap());
    }

    #[test]
    fn non_square_unitarity_errors() {
        let m = CMatrix::zeros(2, 3);
        assert!(matches!(
            is_unitary(&m, 1e-9),
            Err(Error::NonSquare { .. })
        ));
    }

    #[test]
    fn eig_identity_phases_zero() {
        let dec = eig_unitary(&CMatrix::identity(2)).unwrap();
        assert_eq!(dec.phases.len(), 2);
        for phi in &dec.phases {
            assert!(phi.abs() < 1e-12);
        }
        assert!(dec.m.sub(&CMatrix::identity(2)).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn eig_pauli_x_phases_and_reconstruction() {
        let x = pauli_x2();
        let dec = eig_unitary(&x).unwrap();
        assert!((dec.phases[0] - 0.0).abs() < 1e-12);
        assert!((dec.phases[1] - std::f64::consts::PI).abs() < 1e-12);
        // M† diag(1, -1) M = X numerically.
        let err = dec.reconstruct().sub(&x).unwrap().max_abs();
        assert!(err < 1e-12, "reconstruction error {err}");
    }

    #[test]
    fn eig_diag_1_i_phase_convention() {
        // λ = i = e^{-i φ} gives φ = 3π/2 in [0, 2π).
        let m = CMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 1.0)],
        ])
        .unwrap();
        let dec = eig_unitary(&m).unwrap();
        assert!((dec.phases[0] - 0.0).abs() < 1e-12);
        assert!((dec.phases[1] - 3.0 * std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_unitary() {
        let m = CMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(2.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(eig_unitary(&m), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn eig_reconstructs_haar_unitaries_up_to_dim_64() {
        for (dim, seed) in [(2, 1u64), (3, 2), (5, 3), (8, 4), (16, 5), (33, 6), (64, 7)] {
            let u = haar_unitary(dim, seed);
            let dec = eig_unitary(&u).unwrap();
            let err = dec.reconstruct().sub(&u).unwrap().max_abs();
            assert!(err <= 1e-10, "dim {dim}: reconstruction error {err:.3e}");
            let mut prev = -1.0;
            for &phi in &dec.phases {
                assert!((0.0..TAU).contains(&phi));
                assert!(phi >= prev - 1e-12, "phases not ascending");
                prev = phi;
            }
        }
    }

    #[test]
    fn power_of_cyclic_shift_matches_direct_product() {
        let x = cyclic_shift_matrix(4, 1);
        let twice = x.mul(&x).unwrap();
        let squared = matrix_power(&x, 2).unwrap();
        assert!(twice.sub(&squared).unwrap().max_abs() < 1e-15);
        assert!(squared
            .sub(&cyclic_shift_matrix(4, 2))
            .unwrap()
            .max_abs()
            < 1e-15);
    }

    #[test]
    fn power_zero_is_identity() {
        let u = haar_unitary(5, 11);
        let p = matrix_power(&u, 0).unwrap();
        assert!(p.sub(&CMatrix::identity(5)).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn sixth_power_of_sixth_root_phase_is_identity() {
        let m = CMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![
                c(0.0, 0.0),
                Complex64::from_polar(1.0, -std::f64::consts::PI / 3.0),
            ],
        ])
        .unwrap();
        let p = matrix_power(&m, 6).unwrap();
        assert!(p.sub(&CMatrix::identity(2)).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn power_is_additive() {
        let u = haar_unitary(6, 21);
        for (j, k) in [(1u32, 2u32), (3, 4), (0, 5)] {
            let lhs = matrix_power(&u, j + k).unwrap();
            let rhs = matrix_power(&u, j)
                .unwrap()
                .mul(&matrix_power(&u, k).unwrap())
                .unwrap();
            assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-10);
        }
    }

    #[test]
    fn distance_zero_on_equal_and_phase_shifted() {
        let u = haar_unitary(4, 33);
        assert!(phase_aligned_distance(&u, &u).unwrap() < 1e-15);
        let shifted = u.scale(Complex64::from_polar(1.0, std::f64::consts::PI / 7.0));
        assert!(phase_aligned_distance(&u, &shifted).unwrap() < 1e-12);
    }

    #[test]
    fn distance_identity_vs_x_at_least_one() {
        // Oracle: exhaustive θ grid for the true minimum.
        let a = CMatrix::identity(2);
        let b = pauli_x2();
        let mut grid_min = f64::INFINITY;
        for step in 0..20_000 {
            let theta = TAU * step as f64 / 20_000.0;
            let d = a
                .sub(&b.scale(Complex64::from_polar(1.0, theta)))
                .unwrap()
                .max_abs();
            grid_min = grid_min.min(d);
        }
        assert!(grid_min >= 1.0 - 1e-9);
        let d = phase_aligned_distance(&a, &b).unwrap();
        assert!(d >= 1.0 - 1e-12, "distance {d}");
        assert!(d >= grid_min - 1e-6);
    }

    #[test]
    fn distance_is_symmetric() {
        for seed in 0..8 {
            let a = haar_unitary(3, seed);
            let b = haar_unitary(3, seed + 100);
            let d1 = phase_aligned_distance(&a, &b).unwrap();
            let d2 = phase_aligned_distance(&b, &a).unwrap();
            assert!((d1 - d2).abs() < 1e-12);
        }
    }

    #[test]
    fn distance_shape_mismatch_errors() {
        let a = CMatrix::identity(2);
        let b = CMatrix::identity(3);
        assert!(matches!(
            phase_aligned_distance(&a, &b),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn fourier_diagonalises_shift() {
        // X = F† Z F for the DFT convention used here.
        let d = 4;
        let f = fourier_matrix(d);
        let z = pauli_z_matrix(d, 1);
        let x = f.dagger().mul(&z).unwrap().mul(&f).unwrap();
        assert!(x.sub(&cyclic_shift_matrix(d, 1)).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn haar_is_unitary_and_seed_stable() {
        let u1 = haar_unitary(8, 42);
        let u2 = haar_unitary(8, 42);
        assert!(u1.sub(&u2).unwrap().max_abs() == 0.0);
        assert!(u1.unitarity_deviation().unwrap() < 1e-12);
    }
}
