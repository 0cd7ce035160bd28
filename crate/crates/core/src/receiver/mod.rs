//! Non-coherent wake-up receiver: channel selection, Butterworth receive
//! filtering, and `|I| + |Q|` envelope decoding.

mod butterworth;
mod channelize;
mod envelope;

pub use butterworth::{butterworth_design, IirFilter, SosSection};
pub use channelize::channelize;
pub use envelope::{envelope_decode, EnvelopeDecision};

use crate::error::Result;
use crate::waveform::{IqSignal, PacketLayout, WaveformParams};

/// Default receive filter: 5th-order Butterworth, 5 MHz bandwidth.
pub const DEFAULT_FILTER_ORDER: usize = 5;
pub const DEFAULT_FILTER_CUTOFF_HZ: f64 = 5e6;

/// The full per-channel receive chain: mix to the channel center, filter,
/// and envelope-decode using the transmit layout for slot timing (ideal
/// synchronization). The default slot offset is the filter's group delay
/// at DC rounded to the nearest sample.
#[derive(Debug, Clone)]
pub struct WurReceiver {
    pub filter: IirFilter,
    pub offset_samples: isize,
    pub decimate: usize,
    channel_centers_hz: [f64; 4],
}

impl WurReceiver {
    pub fn new(params: &WaveformParams) -> Result<Self> {
        let filter = butterworth_design(
            DEFAULT_FILTER_ORDER,
            DEFAULT_FILTER_CUTOFF_HZ,
            params.synth_rate(),
        )?;
        Ok(Self::with_filter(params, filter))
    }

    pub fn with_filter(params: &WaveformParams, filter: IirFilter) -> Self {
        let offset_samples = filter.group_delay_dc().round() as isize;
        let mut centers = [0.0; 4];
        for (i, c) in centers.iter_mut().enumerate() {
            *c = params.channel_center_hz(i);
        }
        Self {
            filter,
            offset_samples,
            decimate: 1,
            channel_centers_hz: centers,
        }
    }

    pub fn decode(
        &self,
        signal: &IqSignal,
        layout: &PacketLayout,
        channel: usize,
    ) -> Result<EnvelopeDecision> {
        // let the filter ring out past the packet end so the delayed slot
        // windows stay inside the channelized signal
        let pad = self.offset_samples.max(0) as usize + 4;
        let mut padded = signal.samples.clone();
        padded.resize(padded.len() + pad, num_complex::Complex64::new(0.0, 0.0));
        let padded = IqSignal::new(padded, signal.sample_rate);
        let y = channelize(
            &padded,
            self.channel_centers_hz[channel],
            &self.filter,
            self.decimate,
        )?;
        envelope_decode(&y, layout, channel, self.offset_samples)
    }
}
