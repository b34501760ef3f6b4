//! Counter-based seed fan-out.
//!
//! Every derived seed is the ChaCha8 keystream word at position `index` of the
//! stream named by `label`, keyed by the master seed. Streams never overlap, so
//! adding a new experiment label cannot perturb the seeds of existing ones.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// 64-bit FNV-1a; stable across platforms and releases.
fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

pub fn derive_seed(master: u64, label: &str, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(fnv1a(label));
    rng.set_word_pos(u128::from(index) * 2);
    rng.next_u64()
}
