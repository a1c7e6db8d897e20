//! Iterative radix-2 FFT for real signals.

use crate::error::{Error, Result};

/// Smallest power of two `>= n` (and `>= 2`).
pub fn next_power_of_two(n: usize) -> usize {
    n.max(2).next_power_of_two()
}

/// In-place radix-2 decimation-in-time FFT over interleaved (re, im) pairs.
fn fft_in_place(re: &mut [f64], im: &mut [f64]) {
    let n = re.len();
    debug_assert!(n.is_power_of_two());

    // Bit-reversal permutation.
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            re.swap(i, j);
            im.swap(i, j);
        }
    }

    let mut len = 2;
    while len <= n {
        let angle = -2.0 * std::f64::consts::PI / len as f64;
        let (w_im, w_re) = angle.sin_cos();
        for start in (0..n).step_by(len) {
            let mut cur_re = 1.0;
            let mut cur_im = 0.0;
            for k in 0..len / 2 {
                let a = start + k;
                let b = start + k + len / 2;
                let t_re = re[b] * cur_re - im[b] * cur_im;
                let t_im = re[b] * cur_im + im[b] * cur_re;
                re[b] = re[a] - t_re;
                im[b] = im[a] - t_im;
                re[a] += t_re;
                im[a] += t_im;
                let next_re = cur_re * w_re - cur_im * w_im;
                cur_im = cur_re * w_im + cur_im * w_re;
                cur_re = next_re;
            }
        }
        len <<= 1;
    }
}

/// Full complex spectrum of a real power-of-two-length signal, as
/// `(re, im)` vectors of the same length.
pub fn fft_real(signal: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = signal.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "FFT length must be a power of two >= 2, got {}",
            n
        )));
    }
    let mut re = signal.to_vec();
    let mut im = vec![0.0; n];
    fft_in_place(&mut re, &mut im);
    Ok((re, im))
}

/// Magnitude half-spectrum `|X_k|` for `k = 0..=P/2` of a real signal of
/// power-of-two length `P`. The upper half is redundant by conjugate symmetry.
pub fn fft_magnitude(signal: &[f64]) -> Result<Vec<f64>> {
    let (re, im) = fft_real(signal)?;
    let half = signal.len() / 2;
    Ok((0..=half).map(|k| re[k].hypot(im[k])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// O(n^2) direct DFT magnitude, the independent oracle.
    pub fn dft_magnitude_oracle(signal: &[f64]) -> Vec<f64> {
        let n = signal.len();
        (0..=n / 2)
            .map(|k| {
                let mut re = 0.0;
                let mut im = 0.0;
                for (t, &x) in signal.iter().enumerate() {
                    let phi = -2.0 * std::f64::consts::PI * k as f64 * t as f64 / n as f64;
                    re += x * phi.cos();
                    im += x * phi.sin();
                }
                re.hypot(im)
            })
            .collect()
    }

    #[test]
    fn dc_only_signal() {
        assert_eq!(fft_magnitude(&[1.0, 1.0, 1.0, 1.0]).unwrap(), vec![4.0, 0.0, 0.0]);
    }

    #[test]
    fn pure_tone_at_bin_one() {
        let m = fft_magnitude(&[1.0, 0.0, -1.0, 0.0]).unwrap();
        assert!((m[0] - 0.0).abs() < 1e-12);
        assert!((m[1] - 2.0).abs() < 1e-12);
        assert!((m[2] - 0.0).abs() < 1e-12);
    }

    #[test]
    fn non_power_of_two_rejected() {
        assert!(fft_magnitude(&[1.0, 2.0, 3.0]).is_err());
        assert!(fft_magnitude(&[1.0]).is_err());
    }

    #[test]
    fn matches_direct_dft_on_random_length_16() {
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let signal: Vec<f64> = (0..16).map(|_| next() * 4.0).collect();
        let fast = fft_magnitude(&signal).unwrap();
        let slow = dft_magnitude_oracle(&signal);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-9, "fast {} vs oracle {}", a, b);
        }
    }

    #[test]
    fn next_power_of_two_values() {
        assert_eq!(next_power_of_two(1), 2);
        assert_eq!(next_power_of_two(4), 4);
        assert_eq!(next_power_of_two(261), 512);
        assert_eq!(next_power_of_two(466), 512);
    }

    proptest! {
        #[test]
        fn parseval_identity(signal in proptest::collection::vec(-10.0f64..10.0, 8usize..=8)
            .prop_union(proptest::collection::vec(-10.0f64..10.0, 32usize..=32))) {
            let (re, im) = fft_real(&signal).unwrap();
            let time_energy: f64 = signal.iter().map(|x| x * x).sum();
            let freq_energy: f64 = re.iter().zip(&im).map(|(r, i)| r * r + i * i).sum::<f64>()
                / signal.len() as f64;
            prop_assert!((time_energy - freq_energy).abs() <= 1e-9 * time_energy.max(1.0));
        }

        #[test]
        fn magnitude_scales_linearly(signal in proptest::collection::vec(-5.0f64..5.0, 16usize..=16),
                                     c in 0.01f64..100.0) {
            let base = fft_magnitude(&signal).unwrap();
            let scaled_signal: Vec<f64> = signal.iter().map(|x| c * x).collect();
            let scaled = fft_magnitude(&scaled_signal).unwrap();
            for (b, s) in base.iter().zip(&scaled) {
                prop_assert!((c * b - s).abs() <= 1e-9 * (c * b).abs().max(1.0));
            }
        }
    }
}
