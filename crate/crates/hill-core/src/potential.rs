//! Band-limited real periodic potentials.
//!
//! A potential is stored by its Fourier coefficients on the unit period,
//!
//! ```text
//!     q(x) = Σ_{|m| ≤ M} c_m e^{i 2π m x},      c_m = ∫₀¹ q(x) e^{-i 2π m x} dx,
//! ```
//!
//! with the Hermitian symmetry `c_{-m} = conj(c_m)` that makes `q` real.
//! Everything downstream (matrix assembly, correction sums, gap predictions)
//! works off this table, so construction is strict: tables that are not
//! Hermitian within tolerance are rejected rather than silently repaired.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::fft;

/// Absolute tolerance for Hermitian-symmetry defects accepted (and averaged
/// away) during construction: ~100× double epsilon at unit coefficient scale.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Relative floor below which grid-ingested coefficients are treated as
/// spectral leakage and dropped.
const INGEST_TRIM: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PotentialError {
    #[error("coefficient table is not Hermitian at mode {mode}: |c_m - conj(c_-m)| = {defect:e}")]
    NonHermitian { mode: i64, defect: f64 },
    #[error("non-finite coefficient at mode {mode}")]
    NonFiniteCoefficient { mode: i64 },
    #[error("non-finite sample at index {index}")]
    NonFiniteSample { index: usize },
    #[error("grid length {len} is not a power of two")]
    GridNotPowerOfTwo { len: usize },
    #[error("grid length {len} is too small (need at least 4 samples)")]
    GridTooSmall { len: usize },
}

/// A real 1-periodic potential held as a finite Fourier coefficient table.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierPotential {
    /// Coefficients `c_{-M} … c_M`, indexed by `m + M`.
    coeffs: Vec<Complex64>,
    degree: usize,
}

impl FourierPotential {
    /// The zero potential.
    pub fn zero() -> Self {
        FourierPotential {
            coeffs: vec![Complex64::new(0.0, 0.0)],
            degree: 0,
        }
    }

    /// The constant potential `q ≡ c`.
    pub fn constant(c: f64) -> Self {
        FourierPotential {
            coeffs: vec![Complex64::new(c, 0.0)],
            degree: 0,
        }
    }

    /// `q(x) = 2 a cos(2π n x)`, i.e. `c_{±n} = a` for real `a`, `n ≥ 1`.
    pub fn cosine_mode(n: usize, a: f64) -> Self {
        let c = Complex64::new(a, 0.0);
        Self::from_modes(&[(n as i64, c), (-(n as i64), c)])
            .expect("cosine mode table is Hermitian by construction")
    }

    /// Build from an explicit `(mode, coefficient)` list. Modes absent from
    /// the list are zero; duplicate modes sum. The table must be Hermitian
    /// within [`HERMITIAN_TOL`]; symmetric defects inside the tolerance are
    /// averaged away so the stored potential is exactly real.
    pub fn from_modes(modes: &[(i64, Complex64)]) -> Result<Self, PotentialError> {
        let mut table: BTreeMap<i64, Complex64> = BTreeMap::new();
        for &(m, c) in modes {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(PotentialError::NonFiniteCoefficient { mode: m });
            }
            *table.entry(m).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        let band = table.keys().map(|m| m.unsigned_abs() as usize).max().unwrap_or(0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * band + 1];
        for (&m, &c) in &table {
            coeffs[(m + band as i64) as usize] = c;
        }
        Self::symmetrize(coeffs, band)
    }

    /// Recover a potential from `N` equispaced samples `q(j/N)`, `j = 0…N-1`.
    /// `N` must be a power of two (≥ 4) so the discrete transform of a
    /// band-limited signal is exact; the band is truncated at `M = N/2 - 1`.
    pub fn ingest_grid(samples: &[f64]) -> Result<Self, PotentialError> {
        let n = samples.len();
        if n < 4 {
            return Err(PotentialError::GridTooSmall { len: n });
        }
        if !n.is_power_of_two() {
            return Err(PotentialError::GridNotPowerOfTwo { len: n });
        }
        for (index, &s) in samples.iter().enumerate() {
            if !s.is_finite() {
                return Err(PotentialError::NonFiniteSample { index });
            }
        }
        let bins = fft::dft_real(samples);
        let band = n / 2 - 1;
        let scale = 1.0 / n as f64;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * band + 1];
        for m in -(band as i64)..=band as i64 {
            // Bin k of the DFT holds the coefficient of e^{i 2π k j / N};
            // negative modes live in the upper half of the spectrum.
            let k = m.rem_euclid(n as i64) as usize;
            coeffs[(m + band as i64) as usize] = bins[k] * scale;
        }
        let peak = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let floor = INGEST_TRIM * (1.0 + peak);
        for c in &mut coeffs {
            if c.norm() <= floor {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        Self::symmetrize(coeffs, band)
    }

    fn symmetrize(mut coeffs: Vec<Complex64>, band: usize) -> Result<Self, PotentialError> {
        for m in 1..=band {
            let hi = coeffs[band + m];
            let lo = coeffs[band - m];
            let defect = (hi - lo.conj()).norm();
            if defect > HERMITIAN_TOL {
                return Err(PotentialError::NonHermitian {
                    mode: m as i64,
                    defect,
                });
            }
            let avg = (hi + lo.conj()) * 0.5;
            coeffs[band + m] = avg;
            coeffs[band - m] = avg.conj();
        }
        let c0 = coeffs[band];
        if c0.im.abs() > HERMITIAN_TOL {
            return Err(PotentialError::NonHermitian {
                mode: 0,
                defect: c0.im.abs(),
            });
        }
        coeffs[band] = Complex64::new(c0.re, 0.0);

        // Trim exactly-zero outer modes so `degree` reflects actual content.
        let mut degree = band;
        while degree > 0
            && coeffs[band + degree].norm() == 0.0
            && coeffs[band - degree].norm() == 0.0
        {
            degree -= 1;
        }
        let trimmed: Vec<Complex64> =
            coeffs[band - degree..=band + degree].to_vec();
        Ok(FourierPotential {
            coeffs: trimmed,
            degree,
        })
    }

    /// Band limit `M`: the largest `|m|` carrying a nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `c_n`, zero outside the band (the representation is band-limited, so
    /// the lookup is exact for every `n`).
    pub fn coefficient(&self, n: i64) -> Complex64 {
        if n.unsigned_abs() as usize > self.degree {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(n + self.degree as i64) as usize]
        }
    }

    /// Iterate `(m, c_m)` over the stored band, ascending in `m`.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let deg = self.degree as i64;
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - deg, c))
    }

    /// `q(x)`. The Hermitian pairing keeps the result exactly real.
    pub fn evaluate(&self, x: f64) -> f64 {
        let mut acc = self.coeffs[self.degree].re;
        // March e^{i2πmx} by rotation: one sin/cos pair, then multiplies.
        // Phase drift over a band-limited series is O(M·ε), far below the
        // coefficient noise floor.
        let phase = 2.0 * PI * x;
        let step = Complex64::new(phase.cos(), phase.sin());
        let mut e = Complex64::new(1.0, 0.0);
        for m in 1..=self.degree {
            e *= step;
            acc += 2.0 * (self.coeffs[self.degree + m] * e).re;
        }
        acc
    }

    /// `∫₀¹ q(x)² dx` by Parseval: `Σ |c_m|²`.
    pub fn l2_norm_squared(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ |c_m|`, a sup-norm bound for `q`.
    pub fn sup_norm_bound(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Mean value `c_0` (guaranteed real by construction).
    pub fn mean(&self) -> f64 {
        self.coeffs[self.degree].re
    }

    /// Coefficient table of the antiderivative `Q(x) = ∫₀ˣ q(t) dt`.
    pub fn antiderivative(&self) -> AntiderivativeTable {
        let mut table = BTreeMap::new();
        let mut sum = Complex64::new(0.0, 0.0);
        for (m, c) in self.modes() {
            if m == 0 {
                continue;
            }
            let qm = c / Complex64::new(0.0, 2.0 * PI * m as f64);
            sum += qm;
            table.insert(m, qm);
        }
        AntiderivativeTable {
            q0: Complex64::new(self.mean() / 2.0, 0.0) - sum,
            c0: self.mean(),
            table,
        }
    }

    /// Shifted-kernel antiderivative coefficients
    /// `G±_{m₁}(m) = c_{m₁ ± (2m+2)} / (i 2π m₁)`, `m₁ ≠ 0`, restricted to
    /// the modes where the numerator is inside the band.
    pub fn g_coefficients(&self, m: usize, sign: GSign) -> BTreeMap<i64, Complex64> {
        let n = 2 * m as i64 + 2;
        let shift = match sign {
            GSign::Plus => n,
            GSign::Minus => -n,
        };
        let mut table = BTreeMap::new();
        let deg = self.degree as i64;
        for k in -deg..=deg {
            let m1 = k - shift;
            if m1 == 0 {
                continue;
            }
            let c = self.coefficient(k);
            if c.norm() == 0.0 {
                continue;
            }
            table.insert(m1, c / Complex64::new(0.0, 2.0 * PI * m1 as f64));
        }
        table
    }
}

/// Kernel-sign selector for [`FourierPotential::g_coefficients`]: `Plus`
/// applies the `e^{-i 2(2m+2)π t}` kernel, `Minus` its conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GSign {
    Plus,
    Minus,
}

/// Fourier data of `Q(x) = ∫₀ˣ q(t) dt`: `Q_m = c_m / (i 2π m)` for `m ≠ 0`
/// and the mean `Q_0 = ∫₀¹ Q(x) dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntiderivativeTable {
    q0: Complex64,
    c0: f64,
    table: BTreeMap<i64, Complex64>,
}

impl AntiderivativeTable {
    /// `Q_m` (`m ≠ 0`) or `Q_0` (`m = 0`).
    pub fn coefficient(&self, m: i64) -> Complex64 {
        if m == 0 {
            self.q0
        } else {
            self.table.get(&m).copied().unwrap_or(Complex64::new(0.0, 0.0))
        }
    }

    /// Exact evaluation of `Q(x)` from the closed-form integral of the modes.
    pub fn evaluate(&self, x: f64) -> f64 {
        let mut acc = Complex64::new(self.c0 * x, 0.0);
        for (&m, &qm) in &self.table {
            let phase = 2.0 * PI * m as f64 * x;
            let e = Complex64::new(phase.cos(), phase.sin());
            acc += qm * (e - 1.0);
        }
        acc.re
    }

    /// `∫₀¹ (Q - Q_0)² dx = Σ_{m≠0} |Q_m|²` (valid as stated when `c_0 = 0`,
    /// where `Q` is itself periodic).
    pub fn deviation_l2_squared(&self) -> f64 {
        self.table.values().map(|qm| qm.norm_sqr()).sum()
    }

    /// Iterate `(m, Q_m)` over the nonzero modes, ascending in `m`.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.table.iter().map(|(&m, &qm)| (m, qm))
    }
}
