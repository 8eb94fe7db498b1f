//! The single random source used everywhere in the crate.
//!
//! Every seeded routine builds a [`SimRng`] (ChaCha with 8 rounds, from
//! `rand_chacha`) through [`seeded`], which expands the 64-bit seed with
//! `SeedableRng::seed_from_u64`. Draws are consumed strictly in the order
//! documented by each routine, so a seed fully determines the output.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}
