//! Minimal in-place radix-2 FFT.
//!
//! Grid ingestion is restricted to power-of-two sample counts so that the
//! discrete transform of a band-limited signal is exact; that restriction
//! makes the classic Cooley–Tukey butterfly all we need.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

/// In-place decimation-in-time FFT. `data.len()` must be a power of two.
/// `inverse` applies the conjugate transform *without* the 1/N scaling.
pub fn fft_in_place(data: &mut [Complex64], inverse: bool) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    if n <= 1 {
        return;
    }

    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 0..n {
        if i < j {
            data.swap(i, j);
        }
        let mut mask = n >> 1;
        while mask > 0 && j & mask != 0 {
            j ^= mask;
            mask >>= 1;
        }
        j |= mask;
    }

    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let ang = sign * 2.0 * PI / len as f64;
        let wlen = Complex64::new(ang.cos(), ang.sin());
        let mut base = 0;
        while base < n {
            let mut w = Complex64::new(1.0, 0.0);
            for k in 0..len / 2 {
                let u = data[base + k];
                let v = data[base + k + len / 2] * w;
                data[base + k] = u + v;
                data[base + k + len / 2] = u - v;
                w *= wlen;
            }
            base += len;
        }
        len <<= 1;
    }
}

/// Forward DFT of real samples, returning the unscaled bin values.
pub fn dft_real(samples: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = samples
        .iter()
        .map(|&s| Complex64::new(s, 0.0))
        .collect();
    fft_in_place(&mut buf, false);
    buf
}
