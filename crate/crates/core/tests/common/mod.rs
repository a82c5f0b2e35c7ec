// SPDX-License-Identifier: Apache-2.0

//! Independent reference computations shared by the integration tests.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use polariton_w::Mat5;

pub type C64 = Complex64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn max_abs(m: &Mat5) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring of a degree-18 Taylor sum.
pub fn expm(a: &Mat5) -> Mat5 {
    let norm = a.iter().map(|z| z.norm()).sum::<f64>();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / c(2f64.powi(squarings as i32), 0.0);
    let mut term = Mat5::identity();
    let mut sum = Mat5::identity();
    for k in 1..=18 {
        term = term * scaled / c(k as f64, 0.0);
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// Rotating-frame drift `[[−γ_i, −iΔ], [iΔ, −γ_s]] − iω_i I` written out
/// entry by entry.
pub fn rotating_drift(gamma_i: f64, gamma_s: f64, delta: f64, omega_i: f64) -> Mat5 {
    let mut m = Mat5::zeros();
    m[(0, 0)] = c(-gamma_i, -omega_i);
    for s in 1..5 {
        m[(0, s)] = c(0.0, -delta);
        m[(s, 0)] = c(0.0, delta);
        m[(s, s)] = c(-gamma_s, -omega_i);
    }
    m
}

/// Eigenvalues from a complex Schur decomposition, sorted by real part.
pub fn schur_eigenvalues(m: &Mat5) -> Vec<C64> {
    let d = DMatrix::from_fn(5, 5, |r, k| m[(r, k)]);
    let vals = d
        .schur()
        .eigenvalues()
        .expect("complex Schur form is triangular");
    let mut v: Vec<C64> = vals.iter().copied().collect();
    v.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    v
}

/// Stationary moments from a direct Kronecker solve of the Lyapunov
/// equation `M* C + C Mᵀ + D = 0` for `C = ⟨P† Pᵀ⟩`, `P = (p_i, p_s1†, …)`.
///
/// Returns `(⟨p_i†p_i⟩, ⟨p_s1†p_s1⟩, ⟨p_s1†p_s2⟩, ⟨p_i†p_s1†⟩)`.
pub fn lyapunov_moments(gamma_i: f64, gamma_s: f64, delta: f64, n_b: f64) -> (f64, f64, f64, C64) {
    let m = rotating_drift(gamma_i, gamma_s, delta, 0.0);
    // ⟨F_a† F_b⟩ in the doubled basis: idler normal, signals anti-normal.
    let mut d = Mat5::zeros();
    d[(0, 0)] = c(2.0 * gamma_i * n_b, 0.0);
    for s in 1..5 {
        d[(s, s)] = c(2.0 * gamma_s * (n_b + 1.0), 0.0);
    }
    let mc = m.conjugate();
    let n = 25;
    // vec(A X B) = (Bᵀ ⊗ A) vec(X), column-major.
    let kron = DMatrix::from_fn(n, n, |row, col| {
        let (i, j) = (row % 5, row / 5);
        let (k, l) = (col % 5, col / 5);
        let mut v = c(0.0, 0.0);
        if j == l {
            v += mc[(i, k)];
        }
        if i == k {
            v += m[(j, l)];
        }
        v
    });
    let rhs = DVector::from_fn(n, |row, _| -d[(row % 5, row / 5)]);
    let sol = kron
        .lu()
        .solve(&rhs)
        .expect("Lyapunov operator is regular when stable");
    let cov = |i: usize, j: usize| sol[i + 5 * j];
    // ⟨p_s p_s†⟩ = ⟨p_s† p_s⟩ + 1 on the diagonal.
    let n_ii = cov(0, 0).re;
    let n_ss = cov(1, 1).re - 1.0;
    let n_ssp = cov(2, 1).re;
    // C_{0,s} = ⟨p_i† p_s†⟩
    let n_is = cov(0, 1);
    (n_ii, n_ss, n_ssp, n_is)
}
