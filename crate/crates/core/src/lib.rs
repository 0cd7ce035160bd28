//! Multi-channel OOK wake-up-signal toolkit.
//!
//! Synthesizes 4 MHz on-off-keyed wake-up signals, multiplexed over four
//! 20 MHz channels inside an 80 MHz band, from Golay complementary
//! sequences — so the composite OFDM symbol's PAPR stays within 3 dB no
//! matter which channels are active — and quantifies PAPR, spectral
//! regrowth, and link error rates against per-channel frequency-domain
//! baselines under a nonlinear PA, AWGN, and multipath fading.
//!
//! Module map:
//! - [`seq`]: exact Gaussian-integer sequence algebra, pair construction,
//!   the per-pattern channel table, phase search, CS certification;
//! - [`waveform`]: the common-grid OFDM transmitter and the per-channel
//!   baseline generator;
//! - [`impairments`]: Rapp PA, AWGN, tapped-delay-line fading;
//! - [`receiver`]: Butterworth channelizer and `|I|+|Q|` envelope decoder;
//! - [`analysis`]: windowed PAPR, Welch PSD with mask checks, BER sweeps;
//! - [`config`]/[`io`]: the experiment document and file formats.

pub mod analysis;
pub mod config;
pub mod error;
pub mod impairments;
pub mod io;
pub mod receiver;
pub mod seeding;
pub mod seq;
pub mod waveform;

pub use error::{Error, Result};
