//! Counter-based random streams.
//!
//! Every random quantity of a drop is addressed by `(master seed, drop index,
//! purpose, key)` and read from its own ChaCha8 block range, so results never
//! depend on evaluation order or thread count. Channel draws are keyed by the
//! directed link, which also keeps them aligned across scenarios that only
//! differ in jitter.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a stream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamLabel {
    Topology,
    Misalignment,
    RandomSelection,
    PairOrder,
}

impl StreamLabel {
    fn tag(self) -> u64 {
        match self {
            StreamLabel::Topology => 0x746f_706f,
            StreamLabel::Misalignment => 0x6d69_7361,
            StreamLabel::RandomSelection => 0x7261_6e64,
            StreamLabel::PairOrder => 0x6f72_6465,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A stream with its own key for `(master_seed, label)` and ChaCha stream
/// number `drop_index`.
pub fn drop_stream(master_seed: u64, drop_index: u64, label: StreamLabel) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut state = splitmix64(master_seed ^ splitmix64(label.tag()));
    for chunk in key.chunks_exact_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(drop_index);
    rng
}

/// A sub-stream of [`drop_stream`] reserved for one `(a, b)` key, typically a
/// directed link or a pair. Each key owns 1024 words of the stream.
pub fn keyed_stream(
    master_seed: u64,
    drop_index: u64,
    label: StreamLabel,
    a: usize,
    b: usize,
) -> ChaCha8Rng {
    let mut rng = drop_stream(master_seed, drop_index, label);
    debug_assert!(a < 1 << 24 && b < 1 << 24);
    let key = ((a as u128) << 24) | b as u128;
    rng.set_word_pos(key << 10);
    rng
}
