//! Per-repetition random streams.
//!
//! Every repetition draws from ChaCha streams keyed by `(master_seed, rep_id)`,
//! so results do not depend on which worker ran which repetition. The
//! reference particle has its own stream, separate from the descent, which
//! lets runs of different models with the same seed share reference particles
//! whenever the models draw references the same way.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    Reference = 0,
    Descent = 1,
}

pub fn rep_rng(master_seed: u64, rep_id: u64, purpose: Purpose) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(rep_id.wrapping_mul(2).wrapping_add(purpose as u64));
    rng
}
