//! Butterworth low-pass design via the bilinear transform, realized as
//! second-order sections.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// One biquad, denominator normalized (`a0 = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SosSection {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
}

impl SosSection {
    fn response_at(&self, w: f64) -> Complex64 {
        let z1 = Complex64::from_polar(1.0, -w);
        let z2 = Complex64::from_polar(1.0, -2.0 * w);
        (self.b0 + self.b1 * z1 + self.b2 * z2) / (1.0 + self.a1 * z1 + self.a2 * z2)
    }

    /// Poles strictly inside the unit circle (real-coefficient triangle
    /// condition).
    fn is_stable(&self) -> bool {
        self.a2.abs() < 1.0 && self.a1.abs() < 1.0 + self.a2
    }
}

/// Cascade of second-order sections plus design metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IirFilter {
    pub sections: Vec<SosSection>,
    pub order: usize,
    pub cutoff_hz: f64,
    pub rate_hz: f64,
}

impl IirFilter {
    /// All-pass stub (no sections), used to bypass channel filtering.
    pub fn identity(rate_hz: f64) -> Self {
        Self {
            sections: vec![],
            order: 0,
            cutoff_hz: rate_hz / 2.0,
            rate_hz,
        }
    }

    /// Causal forward pass over complex samples, zero initial state
    /// (direct form II transposed per section).
    pub fn filter(&self, input: &[Complex64]) -> Vec<Complex64> {
        let mut out = input.to_vec();
        for sec in &self.sections {
            let mut s1 = Complex64::new(0.0, 0.0);
            let mut s2 = Complex64::new(0.0, 0.0);
            for x in out.iter_mut() {
                let y = sec.b0 * *x + s1;
                s1 = sec.b1 * *x - sec.a1 * y + s2;
                s2 = sec.b2 * *x - sec.a2 * y;
                *x = y;
            }
        }
        out
    }

    /// Frequency response at `freq_hz`.
    pub fn response_at(&self, freq_hz: f64) -> Complex64 {
        let w = std::f64::consts::TAU * freq_hz / self.rate_hz;
        self.sections
            .iter()
            .map(|s| s.response_at(w))
            .product::<Complex64>()
    }

    pub fn magnitude_db(&self, freq_hz: f64) -> f64 {
        20.0 * self.response_at(freq_hz).norm().log10()
    }

    pub fn is_stable(&self) -> bool {
        self.sections.iter().all(|s| s.is_stable())
    }

    /// Group delay at DC in samples, by numeric phase differentiation.
    pub fn group_delay_dc(&self) -> f64 {
        let w = 1e-6;
        let h = self.response_at(w * self.rate_hz / std::f64::consts::TAU);
        -h.arg() / w
    }
}

/// Design an analog Butterworth low-pass prototype, prewarp the cutoff,
/// and map it into the z-domain with the bilinear transform. Each section
/// is DC-normalized, so the cascade has unit DC gain.
pub fn butterworth_design(order: usize, cutoff_hz: f64, rate_hz: f64) -> Result<IirFilter> {
    if order == 0 {
        return Err(Error::Config("filter order must be >= 1".into()));
    }
    if !(cutoff_hz > 0.0) || cutoff_hz >= rate_hz / 2.0 {
        return Err(Error::Config(format!(
            "cutoff {cutoff_hz} Hz must lie in (0, {}) Hz",
            rate_hz / 2.0
        )));
    }

    let fs2 = 2.0 * rate_hz;
    let warped = fs2 * (std::f64::consts::PI * cutoff_hz / rate_hz).tan();

    // analog prototype poles on the unit circle's left half, scaled to the
    // warped cutoff, then z = (2fs + s) / (2fs - s)
    let mut z_poles: Vec<Complex64> = (1..=order)
        .map(|k| {
            let theta =
                std::f64::consts::PI * (2.0 * k as f64 + order as f64 - 1.0) / (2.0 * order as f64);
            let s = warped * Complex64::from_polar(1.0, theta);
            (fs2 + s) / (fs2 - s)
        })
        .collect();

    // pair conjugate poles (keep the upper-half ones, mirror implicitly);
    // odd order leaves one real pole
    z_poles.sort_by(|a, b| b.im.abs().partial_cmp(&a.im.abs()).unwrap());
    let mut sections = Vec::new();
    let mut i = 0;
    while i < order {
        if z_poles[i].im.abs() > 1e-12 {
            let p = z_poles[i];
            let a1 = -2.0 * p.re;
            let a2 = p.norm_sqr();
            let g = (1.0 + a1 + a2) / 4.0;
            sections.push(SosSection {
                b0: g,
                b1: 2.0 * g,
                b2: g,
                a1,
                a2,
            });
            i += 2; // the conjugate is accounted for by the real coefficients
        } else {
            let p = z_poles[i].re;
            let g = (1.0 - p) / 2.0;
            sections.push(SosSection {
                b0: g,
                b1: g,
                b2: 0.0,
                a1: -p,
                a2: 0.0,
            });
            i += 1;
        }
    }

    let filter = IirFilter {
        sections,
        order,
        cutoff_hz,
        rate_hz,
    };
    debug_assert!(filter.is_stable());
    Ok(filter)
}
