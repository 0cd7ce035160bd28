//! Welch power spectral density and spectral-emission-mask checking.

use crate::error::{Error, Result};
use crate::waveform::IqSignal;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowFn {
    #[default]
    Hann,
    Rect,
}

impl WindowFn {
    fn coefficients(self, len: usize) -> Vec<f64> {
        match self {
            WindowFn::Rect => vec![1.0; len],
            WindowFn::Hann => (0..len)
                .map(|n| 0.5 * (1.0 - (std::f64::consts::TAU * n as f64 / len as f64).cos()))
                .collect(),
        }
    }
}

/// Averaged-periodogram PSD, frequency-shifted to ascending order.
/// Normalized so the linear bins sum to the signal's mean power.
#[derive(Debug, Clone, Serialize)]
pub struct PsdReport {
    pub freq_hz: Vec<f64>,
    pub psd_linear: Vec<f64>,
    pub sample_rate: f64,
    pub segments_averaged: usize,
}

impl PsdReport {
    /// Sum of all linear bins (equals mean signal power for stationary
    /// input, the window-normalization invariant).
    pub fn total_power(&self) -> f64 {
        self.psd_linear.iter().sum()
    }

    /// PSD in dB relative to the largest bin within `|f| <= in_band_hz`.
    pub fn to_dbr(&self, in_band_hz: f64) -> Vec<f64> {
        let reference = self
            .freq_hz
            .iter()
            .zip(&self.psd_linear)
            .filter(|(f, _)| f.abs() <= in_band_hz)
            .map(|(_, &p)| p)
            .fold(0.0, f64::max);
        let floor = reference * 1e-15;
        self.psd_linear
            .iter()
            .map(|&p| 10.0 * (p.max(floor) / reference).log10())
            .collect()
    }
}

/// Welch estimate: modified periodograms over segments of `segment_len`
/// samples overlapping by `overlap` samples, averaged.
pub fn psd_welch(
    signal: &IqSignal,
    segment_len: usize,
    overlap: usize,
    window: WindowFn,
) -> Result<PsdReport> {
    if segment_len == 0 || signal.len() < segment_len {
        return Err(Error::Signal(format!(
            "signal of {} samples is too short for {segment_len}-sample segments",
            signal.len()
        )));
    }
    if overlap >= segment_len {
        return Err(Error::Config("overlap must be smaller than the segment".into()));
    }
    let hop = segment_len - overlap;
    let w = window.coefficients(segment_len);
    let w_norm: f64 = w.iter().map(|x| x * x).sum();
    let fft = FftPlanner::new().plan_fft_forward(segment_len);

    let mut acc = vec![0.0f64; segment_len];
    let mut segments = 0usize;
    let mut start = 0usize;
    let mut buf = vec![Complex64::new(0.0, 0.0); segment_len];
    while start + segment_len <= signal.len() {
        for (n, b) in buf.iter_mut().enumerate() {
            *b = signal.samples[start + n] * w[n];
        }
        fft.process(&mut buf);
        for (a, x) in acc.iter_mut().zip(&buf) {
            *a += x.norm_sqr();
        }
        segments += 1;
        start += hop;
    }

    let scale = 1.0 / (segments as f64 * segment_len as f64 * w_norm);
    let mut psd_linear = vec![0.0; segment_len];
    let mut freq_hz = vec![0.0; segment_len];
    let df = signal.sample_rate / segment_len as f64;
    for k in 0..segment_len {
        // fftshift: negative frequencies first
        let src = (k + segment_len / 2) % segment_len;
        psd_linear[k] = acc[src] * scale;
        freq_hz[k] = (k as f64 - (segment_len / 2) as f64) * df;
    }

    Ok(PsdReport {
        freq_hz,
        psd_linear,
        sample_rate: signal.sample_rate,
        segments_averaged: segments,
    })
}

/// The 80 MHz transmit mask shipped as the default: 0 dBr out to
/// +/-40.5 MHz, -20 dBr at +/-41 MHz, -28 dBr at +/-60 MHz, -40 dBr at
/// +/-120 MHz and beyond (transcribed from the standard's 80 MHz mask).
pub const DEFAULT_SEM_80MHZ: [(f64, f64); 4] =
    [(40.5e6, 0.0), (41e6, -20.0), (60e6, -28.0), (120e6, -40.0)];

/// Mask compliance result.
#[derive(Debug, Clone, Serialize)]
pub struct SemResult {
    pub pass: bool,
    /// Worst `mask - psd` over the constrained (mask below 0 dBr) region.
    pub worst_margin_db: f64,
    pub worst_freq_hz: f64,
    pub mask_dbr: Vec<f64>,
}

/// Mask level at `freq` by linear-in-dB interpolation between breakpoints
/// (symmetric in frequency; flat beyond the outermost breakpoint).
fn mask_at(mask: &[(f64, f64)], freq: f64) -> f64 {
    let f = freq.abs();
    if f <= mask[0].0 {
        return mask[0].1;
    }
    for pair in mask.windows(2) {
        let (f0, v0) = pair[0];
        let (f1, v1) = pair[1];
        if f <= f1 {
            return v0 + (v1 - v0) * (f - f0) / (f1 - f0);
        }
    }
    mask.last().expect("non-empty mask").1
}

/// Check a PSD against mask breakpoints `(offset_hz, dBr)`.
///
/// The PSD is normalized to 0 dBr at its in-band maximum, so the margin is
/// evaluated where the mask actually constrains (mask below 0 dBr);
/// touching the mask exactly still passes.
pub fn sem_check(psd: &PsdReport, mask: &[(f64, f64)], in_band_hz: f64) -> Result<SemResult> {
    if mask.is_empty() {
        return Err(Error::Config("mask needs at least one breakpoint".into()));
    }
    let band_edge = psd.freq_hz.last().copied().unwrap_or(0.0).abs();
    if mask[0].0 >= band_edge {
        return Err(Error::Config(
            "mask breakpoints lie outside the analyzed band".into(),
        ));
    }
    let dbr = psd.to_dbr(in_band_hz);
    let mut worst = f64::INFINITY;
    let mut worst_freq = 0.0;
    let mut mask_dbr = Vec::with_capacity(psd.freq_hz.len());
    for (i, &f) in psd.freq_hz.iter().enumerate() {
        let m = mask_at(mask, f);
        mask_dbr.push(m);
        if m < -1e-9 {
            let margin = m - dbr[i];
            if margin < worst {
                worst = margin;
                worst_freq = f;
            }
        }
    }
    // boundary inclusive: touching the mask still passes
    Ok(SemResult {
        pass: worst >= -1e-9,
        worst_margin_db: worst,
        worst_freq_hz: worst_freq,
        mask_dbr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tone_signal(freq: f64, rate: f64, n: usize) -> IqSignal {
        IqSignal::new(
            (0..n)
                .map(|i| {
                    Complex64::from_polar(1.0, std::f64::consts::TAU * freq * i as f64 / rate)
                })
                .collect(),
            rate,
        )
    }

    #[test]
    fn pure_tone_peaks_at_its_frequency() {
        let rate = 320e6;
        let sig = tone_signal(10e6, rate, 1 << 16);
        let psd = psd_welch(&sig, 4096, 2048, WindowFn::Hann).unwrap();
        let dbr = psd.to_dbr(40e6);
        let peak_idx = dbr
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        assert!((psd.freq_hz[peak_idx] - 10e6).abs() < rate / 4096.0);
        assert_eq!(dbr[peak_idx], 0.0);
    }

    #[test]
    fn white_noise_is_flat_within_one_db() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 1_000_000;
        let sig = IqSignal::new(
            (0..n)
                .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect(),
            1.0,
        );
        let psd = psd_welch(&sig, 512, 256, WindowFn::Hann).unwrap();
        let mean = psd.total_power() / 512.0;
        for &p in &psd.psd_linear {
            let dev = 10.0 * (p / mean).log10();
            assert!(dev.abs() < 1.0, "flatness deviation {dev} dB");
        }
    }

    #[test]
    fn total_power_matches_time_domain_within_one_percent() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 262_144;
        let sig = IqSignal::new(
            (0..n)
                .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect(),
            1.0,
        );
        let psd = psd_welch(&sig, 1024, 512, WindowFn::Hann).unwrap();
        let err = (psd.total_power() - sig.mean_power()).abs() / sig.mean_power();
        assert!(err < 0.01, "power mismatch {err}");
    }

    #[test]
    fn too_short_signal_is_error() {
        let sig = tone_signal(0.0, 1.0, 100);
        assert!(psd_welch(&sig, 256, 0, WindowFn::Hann).is_err());
    }

    #[test]
    fn quiet_psd_passes_any_mask() {
        let rate = 320e6;
        let n = 8192;
        // in-band tone plus a -100 dB floor
        let mut sig = tone_signal(10e6, rate, n);
        for (i, s) in sig.samples.iter_mut().enumerate() {
            *s += Complex64::new(1e-5, 0.0)
                * Complex64::from_polar(1.0, std::f64::consts::TAU * 0.4 * i as f64);
        }
        let psd = psd_welch(&sig, 2048, 1024, WindowFn::Hann).unwrap();
        let res = sem_check(&psd, &DEFAULT_SEM_80MHZ, 40e6).unwrap();
        assert!(res.pass);
        assert!(res.worst_margin_db > 0.0);
    }

    #[test]
    fn psd_equal_to_mask_passes_with_zero_margin() {
        // synthesize a PSD that tracks the mask exactly
        let n = 1024;
        let rate = 320e6;
        let freq_hz: Vec<f64> = (0..n)
            .map(|k| (k as f64 - (n / 2) as f64) * rate / n as f64)
            .collect();
        let psd_linear: Vec<f64> = freq_hz
            .iter()
            .map(|&f| 10f64.powf(mask_at(&DEFAULT_SEM_80MHZ, f) / 10.0))
            .collect();
        let psd = PsdReport {
            freq_hz,
            psd_linear,
            sample_rate: rate,
            segments_averaged: 1,
        };
        let res = sem_check(&psd, &DEFAULT_SEM_80MHZ, 40e6).unwrap();
        assert!(res.pass);
        assert!(res.worst_margin_db.abs() < 1e-9);
    }

    #[test]
    fn three_db_violation_fails_with_minus_three_margin() {
        let n = 1024;
        let rate = 320e6;
        let freq_hz: Vec<f64> = (0..n)
            .map(|k| (k as f64 - (n / 2) as f64) * rate / n as f64)
            .collect();
        let mut psd_linear: Vec<f64> = freq_hz
            .iter()
            .map(|&f| 10f64.powf((mask_at(&DEFAULT_SEM_80MHZ, f) - 10.0) / 10.0))
            .collect();
        // push one bin 3 dB above the mask; make bin 0 the 0 dBr reference
        let hot = freq_hz.iter().position(|&f| f > 70e6).unwrap();
        psd_linear[hot] = 10f64.powf((mask_at(&DEFAULT_SEM_80MHZ, freq_hz[hot]) + 3.0) / 10.0);
        let reference = freq_hz.iter().position(|&f| f.abs() < rate / n as f64).unwrap();
        psd_linear[reference] = 1.0;
        let psd = PsdReport {
            freq_hz,
            psd_linear,
            sample_rate: rate,
            segments_averaged: 1,
        };
        let res = sem_check(&psd, &DEFAULT_SEM_80MHZ, 40e6).unwrap();
        assert!(!res.pass);
        assert!((res.worst_margin_db + 3.0).abs() < 1e-9);
    }
}
