use rand::seq::{index, IndexedRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::ActionId;

use super::ProviderError;

/// Degrades an optimal path. Exactly `round(correct_rate * n)` of its
/// actions survive, in order; then `m` actions drawn uniformly from `pool`
/// are inserted at uniform positions, with `m / (kept + m)` as close to
/// `error_rate` as rounding allows. At `error_rate = 1` the number injected
/// equals the original length.
pub fn perturb_path(
    optimal: &[ActionId],
    pool: &[ActionId],
    correct_rate: f64,
    error_rate: f64,
    seed: u64,
) -> Result<Vec<ActionId>, ProviderError> {
    for r in [correct_rate, error_rate] {
        if !(0.0..=1.0).contains(&r) {
            return Err(ProviderError::InvalidRate(r));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = optimal.len();
    let k = (correct_rate * n as f64).round() as usize;
    let mut keep = index::sample(&mut rng, n, k).into_vec();
    keep.sort_unstable();
    let mut out: Vec<ActionId> = keep.into_iter().map(|i| optimal[i]).collect();

    let m = if pool.is_empty() {
        0
    } else if error_rate >= 1.0 {
        n
    } else {
        (error_rate * k as f64 / (1.0 - error_rate)).round() as usize
    };
    for _ in 0..m {
        let a = *pool.choose(&mut rng).expect("pool is non-empty");
        let at = rng.random_range(0..=out.len());
        out.insert(at, a);
    }
    Ok(out)
}

/// Folds several seeds into one.
pub fn mix_seed(parts: &[u64]) -> u64 {
    let mut h = 0x243f_6a88_85a3_08d3u64;
    for &p in parts {
        h ^= p;
        h = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
        h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h = (h ^ (h >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        h ^= h >> 31;
    }
    h
}
