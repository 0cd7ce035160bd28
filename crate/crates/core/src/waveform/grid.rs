//! Subcarrier mapping.

use super::WaveformParams;
use crate::error::{Error, Result};
use crate::seq::ChannelSequenceSet;
use num_complex::Complex64;

/// Map the per-channel sequences onto one oversampled frequency grid of
/// length `idft_size * oversample`, in standard FFT bin order (signed bin
/// `b` lands at index `b mod total`). Channel `i`'s entry is centered on
/// `channel_center_bins[i]`, so its middle (zero) element occupies the
/// per-channel DC tone; all other bins are zero.
pub fn map_to_grid(set: &ChannelSequenceSet, params: &WaveformParams) -> Result<Vec<Complex64>> {
    map_to_grid_with_os(set, params, params.oversample)
}

/// [`map_to_grid`] with an explicit oversampling factor (the certification
/// and phase-search paths use 16x).
pub fn map_to_grid_with_os(
    set: &ChannelSequenceSet,
    params: &WaveformParams,
    oversample: usize,
) -> Result<Vec<Complex64>> {
    params.validate()?;
    if oversample == 0 {
        return Err(Error::Config("oversample must be >= 1".into()));
    }
    let total = params.idft_size * oversample;
    let half = params.idft_size as i64 / 2;
    let mut grid = vec![Complex64::new(0.0, 0.0); total];

    for (ch, entry) in set.per_channel().iter().enumerate() {
        let Some(seq) = entry else { continue };
        if !seq.is_waveform_alphabet() {
            return Err(Error::InvalidSequence(format!(
                "channel {} sequence has elements outside the unit-modulus/zero alphabet",
                ch + 1
            )));
        }
        let center = params.channel_center_bins[ch] as i64;
        let offset = seq.len() as i64 / 2;
        for (idx, e) in seq.elements().iter().enumerate() {
            let bin = center - offset + idx as i64;
            if bin < -half || bin >= half {
                return Err(Error::Config(format!(
                    "channel {} footprint exceeds the IDFT bandwidth",
                    ch + 1
                )));
            }
            let slot = bin.rem_euclid(total as i64) as usize;
            grid[slot] = e.to_complex();
        }
    }
    Ok(grid)
}
