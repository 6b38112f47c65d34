//! Seed derivation. Every random decision in the pipeline draws from a
//! ChaCha8 generator whose seed is a pure function of the master seed and a
//! stable key, so results never depend on scheduling or insertion order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type PipelineRng = ChaCha8Rng;

/// Independent generator streams drawn from the same seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Sample = 0,
    Orientation = 1,
    SplitShuffle = 2,
    CropShuffle = 3,
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// First eight bytes (little endian) of the SHA-256 of `key`.
pub fn stable_hash(key: &str) -> u64 {
    let digest = Sha256::digest(key.as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("sha256 is 32 bytes"))
}

/// Per-item seed: `splitmix64(master ^ hash(key))`.
pub fn mix_seed(master: u64, key: &str) -> u64 {
    splitmix64(master ^ stable_hash(key))
}

pub fn rng_for(seed: u64, stream: Stream) -> PipelineRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn hash_is_stable() {
        // frozen: changing this silently reshuffles every dataset
        assert_eq!(stable_hash(""), 0x141c_fc98_42c4_b0e3);
        assert_eq!(mix_seed(7, "a/b.png"), mix_seed(7, "a/b.png"));
        assert_ne!(mix_seed(7, "a/b.png"), mix_seed(8, "a/b.png"));
    }

    #[test]
    fn streams_are_independent() {
        let a: u64 = rng_for(1, Stream::Sample).random();
        let b: u64 = rng_for(1, Stream::Orientation).random();
        assert_ne!(a, b);
        let a2: u64 = rng_for(1, Stream::Sample).random();
        assert_eq!(a, a2);
    }
}
