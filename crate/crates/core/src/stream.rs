//! Seeded color-choice stream.
//!
//! Both coloring algorithms and both validation procedures consume colors
//! from a single sequence of independent uniform choices, in program order.
//! Replaying a stream from the same seed and position reproduces a run
//! exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Color = u32;

#[derive(Clone, Debug)]
pub struct RandomStream {
    seed: u64,
    palette: Color,
    drawn: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    /// # Panics
    /// If `palette == 0`.
    pub fn new(seed: u64, palette: Color) -> Self {
        assert!(palette >= 1, "palette must hold at least one color");
        RandomStream {
            seed,
            palette,
            drawn: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A stream positioned after `skip` draws.
    pub fn at_position(seed: u64, palette: Color, skip: u64) -> Self {
        let mut s = RandomStream::new(seed, palette);
        for _ in 0..skip {
            s.draw();
        }
        s
    }

    /// Uniform color in `1..=palette`.
    #[inline]
    pub fn draw(&mut self) -> Color {
        self.drawn += 1;
        self.rng.random_range(1..=self.palette)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn palette(&self) -> Color {
        self.palette
    }

    /// Number of colors drawn so far.
    pub fn position(&self) -> u64 {
        self.drawn
    }
}

/// Per-trial seed derived from a base seed with the SplitMix64 finalizer.
pub fn child_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
