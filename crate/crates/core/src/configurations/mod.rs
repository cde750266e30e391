//! Low-energy configurations: approximate Fekete points, Leja sequences, and
//! random baselines.

mod fekete;
mod leja;

use crate::rng::stream;
use crate::{CompactSet, PointConfig, Result};

pub use fekete::{fekete_search, FeketeOutcome, FeketeSearchParams};
pub use leja::{leja_next, leja_sequence, LejaState};

/// `n` independent draws from the set sampler, deterministic in `seed`.
pub fn random_config(set: &CompactSet, n: usize, seed: u64) -> Result<PointConfig> {
    if n == 0 {
        return Err(crate::Error::InvalidParameter("configuration size must be positive"));
    }
    let mut rng = stream(seed, "random-config");
    let mut out = PointConfig::empty(set.dim());
    for _ in 0..n {
        out.push(&set.sample_point(&mut rng))?;
    }
    Ok(out)
}
