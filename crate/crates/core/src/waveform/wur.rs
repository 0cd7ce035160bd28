//! Manchester-like bit-to-slot coding.

use super::Rate;

/// Encode payload bits into 2 us ON/OFF slots.
///
/// HDR: bit 0 -> `[1, 0]`, bit 1 -> `[0, 1]`.
/// LDR: bit 0 -> `[1,1,0,0,1,1,0,0]`, bit 1 -> `[0,0,1,1,0,0,1,1]` — the
/// 4 us ON/OFF durations expressed on the common 2 us slot grid, so LDR and
/// HDR symbol boundaries align across channels.
pub fn wur_encode(bits: &[bool], rate: Rate) -> Vec<bool> {
    let mut slots = Vec::with_capacity(bits.len() * rate.slots_per_bit());
    for &bit in bits {
        match rate {
            Rate::Hdr => slots.extend_from_slice(if bit { &[false, true] } else { &[true, false] }),
            Rate::Ldr => slots.extend_from_slice(if bit {
                &[false, false, true, true, false, false, true, true]
            } else {
                &[true, true, false, false, true, true, false, false]
            }),
        }
    }
    slots
}

/// Slot positions (within one bit's group) that are ON for each hypothesis;
/// used by the envelope decoder.
pub fn hypothesis_slots(rate: Rate) -> (&'static [usize], &'static [usize]) {
    match rate {
        Rate::Hdr => (&[0], &[1]),
        Rate::Ldr => (&[0, 1, 4, 5], &[2, 3, 6, 7]),
    }
}
