//! Measurement and experiment harness: windowed PAPR with percentile
//! summaries, Welch PSD with mask checking, and the Monte Carlo BER sweep
//! engine.

mod ber;
mod papr;
mod psd;

pub use ber::{
    ber_sweep, measure_channel_ref_power, snr_at_ber, wilson_interval, BerCurve, BerPoint,
    BerScenario, ChannelModel, StopRule,
};
pub use papr::{papr, papr_experiment, peak_to_mean_db, Method, PaprReport};
pub use psd::{psd_welch, sem_check, PsdReport, SemResult, WindowFn, DEFAULT_SEM_80MHZ};
