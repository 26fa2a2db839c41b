use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded, stream-addressable random source.
///
/// Backed by ChaCha8, a counter-based generator: the `(seed, stream)` pair
/// fully determines the sequence on every platform, so parallel jobs can
/// each take their own stream without coordination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomStream {
    pub seed: u64,
    pub stream: u64,
}

impl RandomStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        RandomStream { seed, stream }
    }

    /// Stream id addressed by a small tuple of job coordinates.
    pub fn job(seed: u64, coords: &[u64]) -> Self {
        let mut h: u64 = 0x9e37_79b9_7f4a_7c15;
        for &c in coords {
            h = splitmix(h ^ c);
        }
        RandomStream::new(seed, h)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
