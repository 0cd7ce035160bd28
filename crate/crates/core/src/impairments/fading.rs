//! Block-fading tapped-delay-line channel.

use crate::error::{Error, Result};
use crate::waveform::IqSignal;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Power-delay profile. Average tap powers are normalized to sum to 1 on
/// construction, so the channel preserves mean energy in expectation.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingProfile {
    /// `(delay_seconds, average_linear_power)`, delays non-decreasing.
    taps: Vec<(f64, f64)>,
}

impl FadingProfile {
    pub fn new(taps: Vec<(f64, f64)>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::Config("fading profile needs at least one tap".into()));
        }
        let mut total = 0.0;
        let mut prev = f64::NEG_INFINITY;
        for &(delay, power) in &taps {
            if !(delay >= 0.0) || !delay.is_finite() {
                return Err(Error::Config("tap delays must be non-negative".into()));
            }
            if delay < prev {
                return Err(Error::Config("tap delays must be non-decreasing".into()));
            }
            if !(power > 0.0) {
                return Err(Error::Config("tap powers must be positive".into()));
            }
            prev = delay;
            total += power;
        }
        let taps = taps
            .into_iter()
            .map(|(d, p)| (d, p / total))
            .collect();
        Ok(Self { taps })
    }

    /// Single zero-delay unit tap (no dispersion).
    pub fn flat() -> Self {
        Self {
            taps: vec![(0.0, 1.0)],
        }
    }

    /// Parse the `delay_ns,power_db` CSV format. Lines starting with `#`
    /// are comments.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut taps = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split(',');
            let parse = |s: Option<&str>| -> Result<f64> {
                s.ok_or_else(|| Error::Config(format!("line {}: missing field", lineno + 1)))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))
            };
            let delay_ns = parse(parts.next())?;
            let power_db = parse(parts.next())?;
            taps.push((delay_ns * 1e-9, 10f64.powf(power_db / 10.0)));
        }
        Self::new(taps)
    }

    /// The 18-tap, 50 ns RMS urban-indoor profile shipped with the crate.
    pub fn hyperlan_a() -> Self {
        Self::from_csv(include_str!("../../data/hyperlan_a.csv"))
            .expect("bundled profile parses")
    }

    pub fn taps(&self) -> &[(f64, f64)] {
        &self.taps
    }

    /// Tap delays rounded to the nearest sample at the given rate.
    pub fn sample_delays(&self, sample_rate: f64) -> Vec<usize> {
        self.taps
            .iter()
            .map(|&(d, _)| (d * sample_rate).round() as usize)
            .collect()
    }

    /// Draw one static tap realization: independent complex Gaussian gains
    /// with the profile's average powers.
    pub fn realize(&self, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.taps
            .iter()
            .map(|&(_, p)| {
                let gi: f64 = StandardNormal.sample(&mut rng);
                let gq: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(gi, gq) * (p / 2.0).sqrt()
            })
            .collect()
    }
}

/// Convolve the signal with one static-per-packet tap realization
/// (block fading: WUS packets are short relative to the coherence time).
/// The output keeps the dispersed tail, so it is longer than the input by
/// the largest tap delay.
pub fn fading_apply(signal: &IqSignal, profile: &FadingProfile, seed: u64) -> Result<IqSignal> {
    let delays = profile.sample_delays(signal.sample_rate);
    let gains = profile.realize(seed);
    let max_delay = *delays.last().unwrap_or(&0);
    let mut out = vec![Complex64::new(0.0, 0.0); signal.len() + max_delay];
    for (&d, &g) in delays.iter().zip(&gains) {
        for (n, &x) in signal.samples.iter().enumerate() {
            out[n + d] += g * x;
        }
    }
    Ok(IqSignal::new(out, signal.sample_rate))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_profile_rejected() {
        assert!(FadingProfile::new(vec![]).is_err());
    }

    #[test]
    fn single_tap_is_pure_scaling() {
        let profile = FadingProfile::flat();
        let sig = IqSignal::new(vec![Complex64::new(1.0, 2.0); 32], 1e6);
        let out = fading_apply(&sig, &profile, 5).unwrap();
        let g = profile.realize(5)[0];
        for (y, x) in out.samples.iter().zip(&sig.samples) {
            assert!((y - g * x).norm() < 1e-12);
        }
    }

    #[test]
    fn two_taps_match_explicit_convolution() {
        let profile = FadingProfile::new(vec![(0.0, 0.5), (1e-6, 0.5)]).unwrap();
        let sig = IqSignal::new(
            (0..16)
                .map(|i| Complex64::new(i as f64, -(i as f64)))
                .collect(),
            1e6, // 1 us per sample: second tap lands one sample late
        );
        let g = profile.realize(3);
        let out = fading_apply(&sig, &profile, 3).unwrap();
        assert_eq!(out.len(), 17);
        for n in 0..17 {
            let a = if n < 16 { sig.samples[n] } else { Complex64::new(0.0, 0.0) };
            let b = if n >= 1 { sig.samples[n - 1] } else { Complex64::new(0.0, 0.0) };
            assert!((out.samples[n] - (g[0] * a + g[1] * b)).norm() < 1e-12);
        }
    }

    #[test]
    fn mean_energy_preserved_over_realizations() {
        let profile = FadingProfile::hyperlan_a();
        let sig = IqSignal::new(vec![Complex64::new(1.0, 0.0); 512], 320e6);
        let input_energy = sig.energy();
        let n = 10_000;
        let mut acc = 0.0;
        for seed in 0..n {
            acc += fading_apply(&sig, &profile, seed).unwrap().energy();
        }
        let mean = acc / n as f64;
        assert!(
            (mean - input_energy).abs() / input_energy < 0.02,
            "mean energy {mean} vs input {input_energy}"
        );
    }

    #[test]
    fn scaling_input_scales_output_with_same_seed() {
        let profile = FadingProfile::hyperlan_a();
        let sig = IqSignal::new(
            (0..64).map(|i| Complex64::new(0.1 * i as f64, 0.3)).collect(),
            320e6,
        );
        let scaled = IqSignal::new(sig.samples.iter().map(|&s| s * 2.5).collect(), 320e6);
        let a = fading_apply(&sig, &profile, 11).unwrap();
        let b = fading_apply(&scaled, &profile, 11).unwrap();
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert!((y - x * 2.5).norm() < 1e-9);
        }
    }

    #[test]
    fn bundled_profile_shape() {
        let p = FadingProfile::hyperlan_a();
        assert_eq!(p.taps().len(), 18);
        let total: f64 = p.taps().iter().map(|&(_, pw)| pw).sum();
        assert!((total - 1.0).abs() < 1e-12);
        // delays span 0..430 ns
        assert_eq!(p.sample_delays(320e6).first(), Some(&0));
        assert_eq!(p.sample_delays(320e6).last(), Some(&138));
    }
}
