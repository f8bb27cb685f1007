//! Fourier–Galerkin truncation of the Hill operator.
//!
//! Projecting `-y'' + q y` onto the periodic exponentials `e^{i2kπx}`
//! (`|k| ≤ K`) or the anti-periodic ones `e^{i(2k+1)πx}` (`-K ≤ k < K`)
//! yields a Hermitian matrix
//!
//! ```text
//!     A[r,s] = freq_r² δ_{rs} + c_{k_r - k_s}
//! ```
//!
//! whose low eigenvalues converge rapidly to the true spectrum (the coupling
//! is banded with bandwidth `M`, so tail influence decays like the square of
//! the distance to the diagonal). This module is the precision workhorse and
//! the independent oracle against which the shooting route is checked; its
//! eigenvectors also expose the two "edge" coefficients of an eigenfunction
//! at the resonant modes `±(m+1)` (resp. odd-frequency analogues).
//!
//! The eigensolver works over the complex field directly: a Householder
//! reduction to Hermitian tridiagonal form, a diagonal phase similarity that
//! makes the off-diagonal real non-negative, then implicit-shift QL on the
//! real tridiagonal pair with the rotations accumulated into the complex
//! basis. No real embedding of doubled size, so no spurious degeneracy
//! pairing and the eigenvector phases stay deterministic.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::potential::FourierPotential;
use crate::Parity;

/// Per-eigenvalue cap on implicit QL sweeps before declaring non-convergence.
const QL_SWEEP_CAP: usize = 50;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GalerkinError {
    #[error("cutoff {cutoff} too small for potential degree {degree} (need K ≥ M + 2)")]
    TruncationTooSmall { cutoff: usize, degree: usize },
    #[error("requested {count} eigenpairs from a dimension-{dim} operator")]
    CountExceedsDimension { count: usize, dim: usize },
    #[error("implicit QL failed to converge at eigenvalue {index} within {QL_SWEEP_CAP} sweeps")]
    NonConvergence { index: usize },
    #[error("pair {m} not covered: need eigenpair position {needed}, have {have}")]
    PairOutOfRange { m: usize, needed: usize, have: usize },
    #[error(
        "pairing ambiguous for pair {m}: eigenvalue {lambda} is not near the free value {expected} (window {window})"
    )]
    PairingAmbiguous {
        m: usize,
        lambda: f64,
        expected: f64,
        window: f64,
    },
}

/// Dense Hermitian Galerkin matrix for one boundary-condition family.
#[derive(Debug, Clone)]
pub struct TruncatedOperator {
    parity: Parity,
    cutoff: usize,
    dim: usize,
    data: Vec<Complex64>,
}

/// Default truncation for a requested number of eigenvalues: generous enough
/// that the tail coupling perturbs the reported values below 1e-9.
pub fn default_cutoff(q: &FourierPotential, count: usize) -> usize {
    (2 * count + 8).max(q.degree() + 8)
}

/// Build the truncated operator. Requires `K ≥ M + 2` so every coupling
/// adjacent to the resonant block survives truncation.
pub fn assemble(
    q: &FourierPotential,
    parity: Parity,
    cutoff: usize,
) -> Result<TruncatedOperator, GalerkinError> {
    if cutoff < q.degree() + 2 {
        return Err(GalerkinError::TruncationTooSmall {
            cutoff,
            degree: q.degree(),
        });
    }
    let dim = match parity {
        Parity::Periodic => 2 * cutoff + 1,
        Parity::Antiperiodic => 2 * cutoff,
    };
    let mut op = TruncatedOperator {
        parity,
        cutoff,
        dim,
        data: vec![Complex64::new(0.0, 0.0); dim * dim],
    };
    for r in 0..dim {
        let fr = op.frequency(r);
        for s in 0..dim {
            let coupling = q.coefficient(op.basis_mode(r) - op.basis_mode(s));
            let mut entry = coupling;
            if r == s {
                entry += fr * fr;
            }
            op.data[r * dim + s] = entry;
        }
    }
    Ok(op)
}

impl TruncatedOperator {
    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, r: usize, s: usize) -> Complex64 {
        self.data[r * self.dim + s]
    }

    /// Basis label `k` of row `r`: exponent is `2kπ` (periodic) or `(2k+1)π`.
    pub fn basis_mode(&self, r: usize) -> i64 {
        r as i64 - self.cutoff as i64
    }

    /// Row carrying basis label `k`, if inside the truncation.
    pub fn row_of_mode(&self, k: i64) -> Option<usize> {
        let r = k + self.cutoff as i64;
        if r < 0 || r >= self.dim as i64 {
            None
        } else {
            Some(r as usize)
        }
    }

    /// Angular frequency of the row-`r` basis exponential.
    pub fn frequency(&self, r: usize) -> f64 {
        let k = self.basis_mode(r) as f64;
        match self.parity {
            Parity::Periodic => 2.0 * k * PI,
            Parity::Antiperiodic => (2.0 * k + 1.0) * PI,
        }
    }

    /// Max-row-sum norm, the scale for residual acceptance.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim)
            .map(|r| {
                self.data[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .map(|z| z.norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    fn mat_vec(&self, v: &[Complex64], out: &mut [Complex64]) {
        for (row, slot) in self.data.chunks_exact(self.dim).zip(out.iter_mut()) {
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, x) in row.iter().zip(v.iter()) {
                acc += a * x;
            }
            *slot = acc;
        }
    }
}

/// Ascending eigenvalues (all of them) plus the first `count` eigenvectors,
/// phase-normalized, with their defect norms `‖Av - θv‖`.
#[derive(Debug, Clone)]
pub struct EigenpairSet {
    parity: Parity,
    cutoff: usize,
    values: Vec<f64>,
    vectors: Vec<Vec<Complex64>>,
    residuals: Vec<f64>,
}

impl EigenpairSet {
    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Number of eigenpairs carrying vectors/residuals.
    pub fn count(&self) -> usize {
        self.vectors.len()
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Every eigenvalue of the truncated matrix, ascending.
    pub fn all_values(&self) -> &[f64] {
        &self.values
    }

    pub fn vector(&self, i: usize) -> &[Complex64] {
        &self.vectors[i]
    }

    pub fn residual(&self, i: usize) -> f64 {
        self.residuals[i]
    }

    /// How many eigenvalues lie strictly below `bound` (whole matrix, not
    /// just the pairs carrying vectors) — used for missed-root accounting.
    pub fn count_below(&self, bound: f64) -> usize {
        self.values.iter().take_while(|&&v| v < bound).count()
    }
}

/// Lowest `count` eigenpairs of the truncated operator.
pub fn eigen(op: &TruncatedOperator, count: usize) -> Result<EigenpairSet, GalerkinError> {
    let n = op.dim;
    if count > n {
        return Err(GalerkinError::CountExceedsDimension { count, dim: n });
    }
    let mut work = op.data.clone();
    let mut basis = identity(n);
    let (mut d, mut e) = tridiagonalize(&mut work, &mut basis, n);
    ql_implicit(&mut d, &mut e, &mut basis, n)?;

    // Ascending order, stable under ties so runs are reproducible.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("eigenvalues are finite"));

    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vectors = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    for &col in order.iter().take(count) {
        let mut v: Vec<Complex64> = (0..n).map(|r| basis[r * n + col]).collect();
        normalize_phase(&mut v);
        op.mat_vec(&v, &mut scratch);
        let theta = values[vectors.len()];
        let defect: f64 = scratch
            .iter()
            .zip(v.iter())
            .map(|(av, x)| (av - x * theta).norm_sqr())
            .sum::<f64>()
            .sqrt();
        vectors.push(v);
        residuals.push(defect);
    }
    Ok(EigenpairSet {
        parity: op.parity,
        cutoff: op.cutoff,
        values,
        vectors,
        residuals,
    })
}

/// Edge data of one eigenpair: eigenvalue, the two resonant-mode coefficients
/// and the leaked weight on all remaining modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgePair {
    pub lambda: f64,
    pub u: Complex64,
    pub v: Complex64,
    pub tail: f64,
}

/// Extract `(u, v, tail)` for both members of pair `m`. `u` is the component
/// on `e^{i(2m+2)πx}` / `e^{i(2m+1)πx}`, `v` the one on the conjugate mode.
pub fn edge_coefficients(set: &EigenpairSet, m: usize) -> Result<[EdgePair; 2], GalerkinError> {
    let (p1, p2) = set.parity.pair_positions(m);
    if p2 >= set.count() {
        return Err(GalerkinError::PairOutOfRange {
            m,
            needed: p2 + 1,
            have: set.count(),
        });
    }
    let n_freq = set.parity.pair_frequency(m);
    let expected = (n_freq as f64 * PI) * (n_freq as f64 * PI);
    let window = pairing_window(n_freq);
    let cutoff = set.cutoff as i64;
    // Row indices of the resonant exponentials inside the truncation.
    let (row_u, row_v) = match set.parity {
        Parity::Periodic => (m as i64 + 1 + cutoff, cutoff - (m as i64 + 1)),
        Parity::Antiperiodic => (m as i64 + cutoff, cutoff - (m as i64 + 1)),
    };
    let mut out = [EdgePair {
        lambda: 0.0,
        u: Complex64::new(0.0, 0.0),
        v: Complex64::new(0.0, 0.0),
        tail: 0.0,
    }; 2];
    for (slot, pos) in [p1, p2].into_iter().enumerate() {
        let lambda = set.value(pos);
        if (lambda - expected).abs() >= window {
            return Err(GalerkinError::PairingAmbiguous {
                m,
                lambda,
                expected,
                window,
            });
        }
        let vec = set.vector(pos);
        let u = vec[row_u as usize];
        let v = vec[row_v as usize];
        let tail: f64 = vec
            .iter()
            .enumerate()
            .filter(|(r, _)| *r as i64 != row_u && *r as i64 != row_v)
            .map(|(_, z)| z.norm_sqr())
            .sum();
        out[slot] = EdgePair { lambda, u, v, tail };
    }
    Ok(out)
}

/// Half the distance to the nearest same-parity free eigenvalue: the window
/// inside which an eigenvalue is unambiguously attributed to frequency `n`.
fn pairing_window(n_freq: i64) -> f64 {
    let n = n_freq as f64;
    let upper = ((n + 2.0) * (n + 2.0) - n * n) * PI * PI / 2.0;
    if n_freq <= 2 {
        // No same-parity neighbor below (n = 1, 2 sit at the spectrum edge).
        upper
    } else {
        upper.min((n * n - (n - 2.0) * (n - 2.0)) * PI * PI / 2.0)
    }
}

fn identity(n: usize) -> Vec<Complex64> {
    let mut q = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        q[i * n + i] = Complex64::new(1.0, 0.0);
    }
    q
}

/// Householder reduction of the Hermitian matrix in `a` (row-major, n×n) to
/// real symmetric tridiagonal form. On return `(d, e)` hold the diagonal and
/// sub-diagonal; `basis` is post-multiplied by the accumulated unitary, so
/// `A = basis · tridiag(d, e) · basis†`.
fn tridiagonalize(a: &mut [Complex64], basis: &mut [Complex64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    let mut p = vec![Complex64::new(0.0, 0.0); n];

    for k in 0..n.saturating_sub(2) {
        let mut xnorm_sq = 0.0;
        for r in k + 1..n {
            xnorm_sq += a[r * n + k].norm_sqr();
        }
        let xnorm = xnorm_sq.sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        // Reflect x onto alpha·e₁ with alpha opposing x₀'s phase: no
        // cancellation in v₀ = x₀ - alpha.
        let alpha = -phase * xnorm;

        let mut vnorm_sq = 0.0;
        for r in k + 1..n {
            let mut val = a[r * n + k];
            if r == k + 1 {
                val -= alpha;
            }
            v[r] = val;
            vnorm_sq += val.norm_sqr();
        }
        if vnorm_sq == 0.0 {
            continue;
        }
        let inv = 1.0 / vnorm_sq.sqrt();
        for x in &mut v[k + 1..n] {
            *x *= inv;
        }

        // p = A v on the trailing block; β = v†p is real by Hermiticity.
        let mut beta = 0.0;
        for r in k + 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for s in k + 1..n {
                acc += a[r * n + s] * v[s];
            }
            p[r] = acc;
            beta += (v[r].conj() * acc).re;
        }
        // A ← A - v w† - w v† with w = 2(p - βv): the Hermitian rank-2 form
        // of (I - 2vv†) A (I - 2vv†).
        for r in k + 1..n {
            p[r] = (p[r] - v[r] * beta) * 2.0;
        }
        for r in k + 1..n {
            for s in k + 1..n {
                let upd = v[r] * p[s].conj() + p[r] * v[s].conj();
                a[r * n + s] -= upd;
            }
        }
        a[(k + 1) * n + k] = alpha;
        a[k * n + k + 1] = alpha.conj();
        for r in k + 2..n {
            a[r * n + k] = Complex64::new(0.0, 0.0);
            a[k * n + r] = Complex64::new(0.0, 0.0);
        }
        // basis ← basis · (I - 2vv†)
        for r in 0..n {
            let row = &mut basis[r * n..(r + 1) * n];
            let mut s_r = Complex64::new(0.0, 0.0);
            for l in k + 1..n {
                s_r += row[l] * v[l];
            }
            s_r *= 2.0;
            for l in k + 1..n {
                row[l] -= s_r * v[l].conj();
            }
        }
    }

    // Absorb the residual phases of the sub-diagonal into the basis so the
    // tridiagonal matrix is real with non-negative off-diagonal.
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut u = Complex64::new(1.0, 0.0);
    for j in 0..n {
        d[j] = a[j * n + j].re;
        if j > 0 {
            for r in 0..n {
                basis[r * n + j] *= u;
            }
        }
        if j + 1 < n {
            let t = a[(j + 1) * n + j];
            e[j] = t.norm();
            let phase = if t.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                t / t.norm()
            };
            u *= phase;
        }
    }
    (d, e)
}

/// Implicit-shift QL on the real symmetric tridiagonal `(d, e)`, applying the
/// plane rotations to the (complex) column basis. `d` ends up holding the
/// eigenvalues in whatever order the iteration produces.
fn ql_implicit(
    d: &mut [f64],
    e: &mut [f64],
    basis: &mut [Complex64],
    n: usize,
) -> Result<(), GalerkinError> {
    if n <= 1 {
        return Ok(());
    }
    let mut e = {
        // Shift into a length-n scratch with a trailing zero, the classic
        // layout for the sweep below.
        let mut buf = vec![0.0; n];
        buf[..n - 1].copy_from_slice(e);
        buf
    };

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_SWEEP_CAP {
                return Err(GalerkinError::NonConvergence { index: l });
            }
            // Wilkinson shift from the leading 2×2.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in 0..n {
                    let zi = basis[row * n + i];
                    let zi1 = basis[row * n + i + 1];
                    basis[row * n + i + 1] = zi * s + zi1 * c;
                    basis[row * n + i] = zi * c - zi1 * s;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Rotate the global phase so the first non-negligible component is real
/// positive, then renormalize. Deterministic across runs and platforms.
fn normalize_phase(v: &mut [Complex64]) {
    let peak = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return;
    }
    let lead = v
        .iter()
        .find(|z| z.norm() > 1e-12 * peak)
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    let rot = lead.conj() / lead.norm();
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let scale = rot / norm;
    for z in v.iter_mut() {
        *z *= scale;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI2: f64 = PI * PI;

    fn hermitian_from(rows: &[&[(f64, f64)]]) -> (Vec<Complex64>, usize) {
        let n = rows.len();
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for (r, row) in rows.iter().enumerate() {
            for (s, &(re, im)) in row.iter().enumerate() {
                a[r * n + s] = Complex64::new(re, im);
            }
        }
        (a, n)
    }

    /// Tiny deterministic generator for random-matrix tests.
    struct SplitMix(u64);
    impl SplitMix {
        fn next_f64(&mut self) -> f64 {
            self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = self.0;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^= z >> 31;
            (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        }
    }

    fn random_hermitian(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = SplitMix(seed);
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for s in r..n {
                let z = if r == s {
                    Complex64::new(4.0 * rng.next_f64(), 0.0)
                } else {
                    Complex64::new(rng.next_f64(), rng.next_f64())
                };
                a[r * n + s] = z;
                a[s * n + r] = z.conj();
            }
        }
        a
    }

    fn solve_raw(a: &[Complex64], n: usize) -> (Vec<f64>, Vec<Complex64>) {
        let mut work = a.to_vec();
        let mut basis = identity(n);
        let (mut d, mut e) = tridiagonalize(&mut work, &mut basis, n);
        ql_implicit(&mut d, &mut e, &mut basis, n).unwrap();
        (d, basis)
    }

    #[test]
    fn eigensolver_on_two_by_two_with_complex_coupling() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let (a, n) = hermitian_from(&[
            &[(1.0, 0.0), (0.0, 1.0)],
            &[(0.0, -1.0), (1.0, 0.0)],
        ]);
        let (mut d, _) = solve_raw(&a, n);
        d.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert!((d[0] - 0.0).abs() < 1e-14);
        assert!((d[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn random_hermitian_eigensystem_reconstructs() {
        for &n in &[3usize, 7, 24] {
            let a = random_hermitian(n, 0xC0FFEE + n as u64);
            let (d, basis) = solve_raw(&a, n);
            // Columns are orthonormal…
            for i in 0..n {
                for j in 0..n {
                    let mut dot = Complex64::new(0.0, 0.0);
                    for r in 0..n {
                        dot += basis[r * n + i].conj() * basis[r * n + j];
                    }
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (dot - want).norm() < 1e-11,
                        "orthonormality defect at ({i},{j}): {dot}"
                    );
                }
            }
            // …and A·q_i = d_i·q_i.
            for i in 0..n {
                for r in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for s in 0..n {
                        acc += a[r * n + s] * basis[s * n + i];
                    }
                    let defect = (acc - basis[r * n + i] * d[i]).norm();
                    assert!(defect < 1e-10, "residual {defect:e} at pair {i}, n = {n}");
                }
            }
        }
    }

    #[test]
    fn free_operator_matrix_is_the_expected_diagonal() {
        let q = FourierPotential::zero();
        let op = assemble(&q, Parity::Periodic, 2).unwrap();
        assert_eq!(op.dim(), 5);
        let want = [16.0 * PI2, 4.0 * PI2, 0.0, 4.0 * PI2, 16.0 * PI2];
        for (r, &diag) in want.iter().enumerate() {
            for s in 0..5 {
                let expect = if r == s { diag } else { 0.0 };
                assert!((op.entry(r, s) - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cosine_adds_unit_off_diagonals() {
        let q = FourierPotential::cosine_mode(1, 1.0);
        let op = assemble(&q, Parity::Periodic, 3).unwrap();
        for r in 0..7usize {
            for s in 0..7usize {
                let off = r.abs_diff(s);
                let want = match off {
                    0 => op.frequency(r) * op.frequency(r),
                    1 => 1.0,
                    _ => 0.0,
                };
                assert!((op.entry(r, s) - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn constant_shifts_the_diagonal() {
        let q = FourierPotential::constant(7.0);
        let op = assemble(&q, Parity::Antiperiodic, 3).unwrap();
        assert_eq!(op.dim(), 6);
        for r in 0..6 {
            let f = op.frequency(r);
            assert!((op.entry(r, r) - (f * f + 7.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_cutoff_below_bandwidth() {
        let q = FourierPotential::cosine_mode(4, 0.5);
        assert!(matches!(
            assemble(&q, Parity::Periodic, 5),
            Err(GalerkinError::TruncationTooSmall { cutoff: 5, degree: 4 })
        ));
    }

    #[test]
    fn free_spectrum_with_multiplicities() {
        let q = FourierPotential::zero();
        let op = assemble(&q, Parity::Periodic, 3).unwrap();
        let pairs = eigen(&op, 5).unwrap();
        let want = [0.0, 4.0 * PI2, 4.0 * PI2, 16.0 * PI2, 16.0 * PI2];
        for (i, &w) in want.iter().enumerate() {
            assert!((pairs.value(i) - w).abs() < 1e-10 * (1.0 + w));
            assert!(pairs.residual(i) < 1e-9 * op.norm_inf());
        }
        let anti = eigen(&assemble(&q, Parity::Antiperiodic, 3).unwrap(), 4).unwrap();
        let want_anti = [PI2, PI2, 9.0 * PI2, 9.0 * PI2];
        for (i, &w) in want_anti.iter().enumerate() {
            assert!((anti.value(i) - w).abs() < 1e-10 * (1.0 + w));
        }
    }

    #[test]
    fn first_antiperiodic_gap_opens_first_order() {
        let q = FourierPotential::cosine_mode(1, 1.0);
        let set = eigen(&assemble(&q, Parity::Antiperiodic, 16).unwrap(), 2).unwrap();
        let gap = set.value(1) - set.value(0);
        // Leading order 2|c_1| = 2 with an O(1) second-order correction well
        // below that.
        assert!(gap > 1.5 && gap < 2.5, "gap {gap}");
    }

    #[test]
    fn edge_weights_concentrate_on_the_pair() {
        let q = FourierPotential::cosine_mode(1, 1.0);
        let m = 10;
        let set = eigen(
            &assemble(&q, Parity::Periodic, default_cutoff(&q, 2 * m + 3)).unwrap(),
            2 * m + 3,
        )
        .unwrap();
        let edges = edge_coefficients(&set, m).unwrap();
        for pair in edges {
            let mass = pair.u.norm_sqr() + pair.v.norm_sqr();
            assert!((mass + pair.tail - 1.0).abs() < 1e-10);
            assert!(pair.tail < 0.02, "tail {:.3e}", pair.tail);
        }
    }

    #[test]
    fn pair_out_of_range_reported() {
        let q = FourierPotential::zero();
        let set = eigen(&assemble(&q, Parity::Periodic, 4).unwrap(), 3).unwrap();
        assert!(matches!(
            edge_coefficients(&set, 1),
            Err(GalerkinError::PairOutOfRange { m: 1, .. })
        ));
    }
}
