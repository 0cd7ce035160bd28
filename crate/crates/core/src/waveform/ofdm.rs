//! IDFT symbol synthesis: unitary inverse transform, cyclic shift, cyclic
//! prefix.

use super::{IqSignal, WaveformParams};
use crate::error::{Error, Result};
use crate::seq::ChannelSequenceSet;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Reusable symbol synthesizer holding the planned inverse FFT.
pub struct OfdmSynthesizer {
    params: WaveformParams,
    ifft: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl OfdmSynthesizer {
    pub fn new(params: WaveformParams) -> Result<Self> {
        params.validate()?;
        let n = params.body_samples();
        let ifft = FftPlanner::new().plan_fft_inverse(n);
        Ok(Self {
            params,
            ifft,
            scale: 1.0 / (n as f64).sqrt(),
        })
    }

    pub fn params(&self) -> &WaveformParams {
        &self.params
    }

    /// IDFT body (no cyclic prefix), circularly shifted by
    /// `shift * body/8` samples.
    pub fn body(&self, grid: &[Complex64], cyclic_shift: u8) -> Result<Vec<Complex64>> {
        let n = self.params.body_samples();
        if grid.len() != n {
            return Err(Error::Config(format!(
                "grid length {} does not match the {}-point IDFT",
                grid.len(),
                n
            )));
        }
        if cyclic_shift >= 8 {
            return Err(Error::Config(format!(
                "cyclic shift {cyclic_shift} out of range 0..8"
            )));
        }
        let mut buf = grid.to_vec();
        self.ifft.process(&mut buf);
        for s in &mut buf {
            *s *= self.scale;
        }
        buf.rotate_right(cyclic_shift as usize * (n / 8));
        Ok(buf)
    }

    /// Full symbol: cyclic prefix prepended to the shifted body.
    pub fn symbol(&self, grid: &[Complex64], cyclic_shift: u8) -> Result<Vec<Complex64>> {
        let body = self.body(grid, cyclic_shift)?;
        let cp = self.params.cp_samples();
        let mut out = Vec::with_capacity(cp + body.len());
        out.extend_from_slice(&body[body.len() - cp..]);
        out.extend_from_slice(&body);
        Ok(out)
    }
}

/// One-shot symbol synthesis (unitary IDFT of the grid, circular shift,
/// cyclic prefix). Prefer [`OfdmSynthesizer`] inside loops.
pub fn ofdm_symbol(
    grid: &[Complex64],
    cyclic_shift: u8,
    params: &WaveformParams,
) -> Result<IqSignal> {
    let synth = OfdmSynthesizer::new(params.clone())?;
    Ok(IqSignal::new(
        synth.symbol(grid, cyclic_shift)?,
        params.synth_rate(),
    ))
}

/// Unitary IDFT body of a channel-sequence set at an explicit oversampling
/// factor, without shift or prefix. This is the symbol the PAPR
/// certification and the phase search evaluate.
pub fn oversampled_body(
    set: &ChannelSequenceSet,
    params: &WaveformParams,
    oversample: usize,
) -> Result<Vec<Complex64>> {
    let grid = super::map_to_grid_with_os(set, params, oversample)?;
    let n = grid.len();
    let ifft = FftPlanner::new().plan_fft_inverse(n);
    let mut buf = grid;
    ifft.process(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    for s in &mut buf {
        *s *= scale;
    }
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::table1_select;
    use crate::waveform::map_to_grid;

    fn peak_to_mean_db(samples: &[Complex64]) -> f64 {
        let mean = samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / samples.len() as f64;
        let peak = samples.iter().map(|s| s.norm_sqr()).fold(0.0, f64::max);
        10.0 * (peak / mean).log10()
    }

    #[test]
    fn zero_grid_gives_zero_signal() {
        let params = WaveformParams::default();
        let grid = vec![Complex64::new(0.0, 0.0); params.body_samples()];
        let sig = ofdm_symbol(&grid, 3, &params).unwrap();
        assert_eq!(sig.len(), params.symbol_samples());
        assert!(sig.samples.iter().all(|s| s.norm_sqr() == 0.0));
    }

    #[test]
    fn single_channel_symbol_papr_within_cs_bound() {
        let params = WaveformParams::default();
        let set = table1_select([true, false, false, false]);
        let grid = map_to_grid(&set, &params).unwrap();
        let synth = OfdmSynthesizer::new(params).unwrap();
        for shift in 0..8 {
            let body = synth.body(&grid, shift).unwrap();
            assert!(peak_to_mean_db(&body) <= 3.02, "shift {shift}");
        }
    }

    #[test]
    fn body_energy_equals_grid_energy_for_any_shift() {
        let params = WaveformParams::default();
        let set = table1_select([true, true, false, true]);
        let grid = map_to_grid(&set, &params).unwrap();
        let grid_energy: f64 = grid.iter().map(|c| c.norm_sqr()).sum();
        let synth = OfdmSynthesizer::new(params).unwrap();
        for shift in 0..8 {
            let body = synth.body(&grid, shift).unwrap();
            let e: f64 = body.iter().map(|c| c.norm_sqr()).sum();
            assert!((e - grid_energy).abs() < 1e-9, "shift {shift}");
        }
    }

    #[test]
    fn shift_out_of_range_is_error() {
        let params = WaveformParams::default();
        let grid = vec![Complex64::new(0.0, 0.0); params.body_samples()];
        assert!(ofdm_symbol(&grid, 8, &params).is_err());
    }

    #[test]
    fn cyclic_prefix_copies_body_tail() {
        let params = WaveformParams::default();
        let set = table1_select([false, true, false, false]);
        let grid = map_to_grid(&set, &params).unwrap();
        let synth = OfdmSynthesizer::new(params.clone()).unwrap();
        let sym = synth.symbol(&grid, 5).unwrap();
        let cp = params.cp_samples();
        let body = &sym[cp..];
        assert_eq!(&sym[..cp], &body[body.len() - cp..]);
    }
}
