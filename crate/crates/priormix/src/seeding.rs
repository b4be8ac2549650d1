//! Stable seed derivation.
//!
//! Sweeps and generators derive per-task seeds by absorbing indices into a
//! splitmix64 chain. The constants are fixed so seed schedules never change
//! across compiler or library versions.

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mix a base seed with a sequence of indices into a new 64-bit seed.
pub fn mix(base: u64, parts: &[u64]) -> u64 {
    let mut state = base;
    let mut out = splitmix64(&mut state);
    for &p in parts {
        state ^= p.wrapping_mul(0xD6E8_FEB8_6659_FD93);
        out = splitmix64(&mut state);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::mix;

    #[test]
    fn mix_is_stable() {
        // Frozen values: changing these would silently re-seed every sweep.
        assert_eq!(mix(0, &[]), 16294208416658607535);
        assert_eq!(mix(1, &[2, 3]), 99137724595590386);
        assert_eq!(mix(42, &[7]), 2264570032775931997);
    }

    #[test]
    fn mix_distinguishes_order_and_value() {
        assert_ne!(mix(1, &[2, 3]), mix(1, &[3, 2]));
        assert_ne!(mix(1, &[2]), mix(2, &[2]));
    }
}
