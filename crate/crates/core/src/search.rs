//! Searching for small tournaments with a given S_k-type property.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sk::{check_property, CheckOptions, Variant};
use crate::tournament::Tournament;

/// At most this many vertex pairs, i.e. `2^28` orientations per order (n ≤ 8).
pub const MAX_ENUMERATION_PAIRS: u32 = 28;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub found: bool,
    /// Order of the witness, or the last order searched.
    pub order: usize,
    pub witness: Option<Tournament>,
    /// Random trials drawn, or orientation masks visited.
    pub trials_or_count: u64,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExhaustiveOptions {
    /// Only visit masks in which vertex 0 beats exactly `1..=d` for some `d`.
    /// Every tournament is isomorphic to such a labelling, so no isomorphism
    /// class is lost; the first witness found may differ from the uncut run.
    pub symmetry_cut: bool,
    pub threads: usize,
}

fn pairs(n: usize) -> u32 {
    (n * n.saturating_sub(1) / 2) as u32
}

fn vertex0_row_is_canonical(n: usize, mask: u64) -> bool {
    // the first n - 1 pair bits are (0,1), (0,2), ..., (0,n-1)
    let row = mask & ((1u64 << (n - 1)) - 1);
    row & (row + 1) == 0
}

/// Scan orders `k + 1 ..= n_max`, enumerating every orientation, and return
/// the first tournament with the property (smallest order, then smallest mask).
pub fn exhaustive_min_order(
    k: usize,
    variant: Variant,
    m: usize,
    n_max: usize,
    opts: ExhaustiveOptions,
) -> Result<SearchOutcome> {
    if k == 0 {
        return Err(Error::PatternTooLarge { k, order: 0 });
    }
    if pairs(n_max) > MAX_ENUMERATION_PAIRS {
        return Err(Error::BudgetExceeded(format!(
            "n_max = {n_max} needs 2^{} orientations, cap is 2^{MAX_ENUMERATION_PAIRS}",
            pairs(n_max)
        )));
    }
    let check = CheckOptions { threads: 1, full_report: false };
    let mut visited = 0u64;
    for n in k + 1..=n_max {
        let total = 1u64 << pairs(n);
        let test = |mask: u64| {
            if opts.symmetry_cut && !vertex0_row_is_canonical(n, mask) {
                return false;
            }
            let t = Tournament::from_orientation_mask(n, mask).expect("n >= 2");
            check_property(&t, variant, k, m, check).expect("k < n").holds
        };
        let hit = if opts.threads <= 1 {
            (0..total).find(|&mask| test(mask))
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(opts.threads)
                .build()
                .map_err(|e| Error::BudgetExceeded(format!("thread pool: {e}")))?;
            pool.install(|| (0..total).into_par_iter().find_first(|&mask| test(mask)))
        };
        match hit {
            Some(mask) => {
                visited += mask + 1;
                return Ok(SearchOutcome {
                    found: true,
                    order: n,
                    witness: Some(Tournament::from_orientation_mask(n, mask)?),
                    trials_or_count: visited,
                    exhaustive: false,
                });
            }
            None => visited += total,
        }
    }
    Ok(SearchOutcome { found: false, order: n_max, witness: None, trials_or_count: visited, exhaustive: true })
}

/// Draw up to `trials` uniformly random tournaments of order `n` from one
/// seeded stream and return the first with the property.
pub fn random_search(
    n: usize,
    k: usize,
    variant: Variant,
    m: usize,
    trials: u64,
    seed: u64,
) -> Result<SearchOutcome> {
    if k == 0 || k >= n {
        return Err(Error::PatternTooLarge { k, order: n });
    }
    if trials == 0 {
        return Err(Error::DomainError("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let check = CheckOptions { threads: 1, full_report: false };
    for trial in 1..=trials {
        let t = Tournament::random_with(n, &mut rng)?;
        if check_property(&t, variant, k, m, check)?.holds {
            return Ok(SearchOutcome {
                found: true,
                order: n,
                witness: Some(t),
                trials_or_count: trial,
                exhaustive: false,
            });
        }
    }
    Ok(SearchOutcome { found: false, order: n, witness: None, trials_or_count: trials, exhaustive: false })
}
