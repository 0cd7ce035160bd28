//! Memoryless AM/AM nonlinearity with output back-off calibration.

use crate::error::{Error, Result};
use crate::waveform::IqSignal;
use serde::{Deserialize, Serialize};

/// Solid-state PA model: `g(x) = x / (1 + (|x|/A)^(2p))^(1/(2p))`.
/// Amplitude-only (no AM/PM); `p` controls how sharp the knee is.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RappPa {
    pub smoothness: f64,
    pub sat_amplitude: f64,
    pub obo_db: f64,
}

impl Default for RappPa {
    fn default() -> Self {
        Self {
            smoothness: 3.0,
            sat_amplitude: 1.0,
            obo_db: 5.0,
        }
    }
}

impl RappPa {
    pub fn validate(&self) -> Result<()> {
        if !(self.smoothness > 0.0) {
            return Err(Error::Config("smoothness must be positive".into()));
        }
        if !(self.sat_amplitude > 0.0) {
            return Err(Error::Config("sat_amplitude must be positive".into()));
        }
        Ok(())
    }

    /// AM/AM curve: input amplitude to output amplitude.
    pub fn am_am(&self, r: f64) -> f64 {
        let p2 = 2.0 * self.smoothness;
        r / (1.0 + (r / self.sat_amplitude).powf(p2)).powf(1.0 / p2)
    }

    /// Target mean output power over ON samples: `A^2 / 10^(obo/10)`.
    pub fn target_power(&self) -> f64 {
        self.sat_amplitude * self.sat_amplitude / 10f64.powf(self.obo_db / 10.0)
    }
}

/// Mean output power over the nonzero samples for input scale `s`.
fn mean_on_output_power(pa: &RappPa, on_amplitudes: &[f64], s: f64) -> f64 {
    on_amplitudes
        .iter()
        .map(|&r| {
            let g = pa.am_am(s * r);
            g * g
        })
        .sum::<f64>()
        / on_amplitudes.len() as f64
}

/// Solve for the input scale that puts the mean ON-sample output power at
/// the back-off target. Monotone in the scale, so plain bisection.
fn solve_input_scale(pa: &RappPa, on_amplitudes: &[f64]) -> Result<f64> {
    let target = pa.target_power();
    let sat_power = pa.sat_amplitude * pa.sat_amplitude;
    if target >= sat_power {
        return Err(Error::Config(format!(
            "OBO of {} dB is not reachable (mean output power saturates below \
             the saturation power)",
            pa.obo_db
        )));
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while mean_on_output_power(pa, on_amplitudes, hi) < target {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Signal("back-off calibration diverged".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mean_on_output_power(pa, on_amplitudes, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= f64::EPSILON * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Drive the signal through the PA at the configured output back-off.
///
/// The input is first scaled so the mean output power over ON (nonzero)
/// samples equals `A^2 / OBO` — OFF slots of an OOK signal would otherwise
/// deflate the average — then each sample passes through the AM/AM curve.
/// Phase is preserved exactly.
pub fn rapp_apply(signal: &IqSignal, pa: &RappPa) -> Result<IqSignal> {
    pa.validate()?;
    signal.validate_finite()?;
    let on_amplitudes: Vec<f64> = signal
        .samples
        .iter()
        .map(|s| s.norm())
        .filter(|&r| r > 0.0)
        .collect();
    if on_amplitudes.is_empty() {
        return Err(Error::Signal(
            "cannot back off a zero-energy signal".into(),
        ));
    }
    let scale = solve_input_scale(pa, &on_amplitudes)?;
    let samples = signal
        .samples
        .iter()
        .map(|&x| {
            let r = (x * scale).norm();
            if r == 0.0 {
                x
            } else {
                x * (scale * pa.am_am(r) / r)
            }
        })
        .collect();
    Ok(IqSignal::new(samples, signal.sample_rate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn small_signal_is_linear_within_one_percent() {
        let pa = RappPa::default();
        for r in [1e-4, 1e-3, 1e-2] {
            let g = pa.am_am(r);
            assert!((g - r).abs() / r < 0.01, "r={r}");
        }
    }

    #[test]
    fn large_signal_saturates() {
        let pa = RappPa::default();
        for r in [1e2, 1e4, 1e6] {
            assert!(pa.am_am(r) <= pa.sat_amplitude * 1.0000001);
        }
        assert!((pa.am_am(1e6) - pa.sat_amplitude).abs() < 1e-3);
    }

    #[test]
    fn constant_envelope_obo_calibration_is_exact() {
        let pa = RappPa {
            smoothness: 3.0,
            sat_amplitude: 2.0,
            obo_db: 5.0,
        };
        let sig = IqSignal::new(vec![Complex64::new(0.3, 0.4); 4096], 1.0);
        let out = rapp_apply(&sig, &pa).unwrap();
        let achieved_db = 10.0 * (pa.sat_amplitude.powi(2) / out.mean_power()).log10();
        assert!(
            (achieved_db - 5.0).abs() < 1e-9,
            "achieved OBO {achieved_db} dB"
        );
        // closed-form check: g(u) = A / sqrt(OBO) solved for u
        let t = pa.sat_amplitude / 10f64.powf(5.0 / 20.0);
        let p2 = 2.0 * pa.smoothness;
        let u = t / (1.0 - (t / pa.sat_amplitude).powf(p2)).powf(1.0 / p2);
        assert!((out.samples[0].norm() - pa.am_am(u)).abs() < 1e-9);
    }

    #[test]
    fn off_samples_stay_exactly_zero() {
        let pa = RappPa::default();
        let mut v = vec![Complex64::new(1.0, 0.0); 64];
        v.extend(vec![Complex64::new(0.0, 0.0); 64]);
        let out = rapp_apply(&IqSignal::new(v, 1.0), &pa).unwrap();
        assert!(out.samples[64..].iter().all(|s| s.norm_sqr() == 0.0));
    }

    #[test]
    fn zero_energy_signal_is_error() {
        let pa = RappPa::default();
        let sig = IqSignal::new(vec![Complex64::new(0.0, 0.0); 16], 1.0);
        assert!(rapp_apply(&sig, &pa).is_err());
    }

    #[test]
    fn unreachable_obo_is_error() {
        let pa = RappPa {
            obo_db: 0.0,
            ..Default::default()
        };
        let sig = IqSignal::new(vec![Complex64::new(1.0, 0.0); 16], 1.0);
        assert!(rapp_apply(&sig, &pa).is_err());
    }

    #[test]
    fn high_smoothness_approaches_ideal_clipper() {
        let pa = RappPa {
            smoothness: 100.0,
            sat_amplitude: 1.0,
            obo_db: 5.0,
        };
        for r in [0.2f64, 0.5, 0.9, 1.5, 3.0] {
            let ideal = r.min(1.0);
            assert!((pa.am_am(r) - ideal).abs() / ideal < 0.01, "r={r}");
        }
    }

    #[test]
    fn monotone_and_phase_preserving() {
        let pa = RappPa::default();
        let mut last = 0.0;
        for i in 1..200 {
            let g = pa.am_am(i as f64 * 0.05);
            assert!(g > last);
            last = g;
        }
        let sig = IqSignal::new(vec![Complex64::from_polar(2.5, 1.234); 8], 1.0);
        let out = rapp_apply(&sig, &pa).unwrap();
        assert!((out.samples[0].arg() - 1.234).abs() < 1e-12);
    }
}
