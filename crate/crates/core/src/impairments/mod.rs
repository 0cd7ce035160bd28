//! Channel and front-end impairments: the Rapp PA nonlinearity with
//! output back-off control, seeded AWGN, and block tapped-delay-line
//! fading.

mod awgn;
mod fading;
mod rapp;

pub use awgn::awgn_apply;
pub use fading::{fading_apply, FadingProfile};
pub use rapp::{rapp_apply, RappPa};
