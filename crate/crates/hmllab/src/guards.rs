use crate::error::{HmlError, Result};

/// Default bound on raw basis enumerations per degree (2^24 functions).
pub const RAW_FUNCTION_BOUND: u128 = 1 << 24;

/// Default bound on the rank of a single materialized chain-complex degree.
pub const MATERIALIZED_RANK_BOUND: u128 = 1 << 21;

fn override_bound() -> Option<u128> {
    std::env::var("HMLLAB_GUARD_OVERRIDE")
        .ok()
        .and_then(|s| s.trim().parse::<u128>().ok())
}

/// Refuse loudly when `needed` exceeds the bound. The override env var is
/// expert-only; it raises every bound to the given value.
pub fn check(what: &str, needed: u128, default_bound: u128) -> Result<()> {
    let bound = override_bound().unwrap_or(default_bound);
    if needed > bound {
        Err(HmlError::Guard {
            what: what.to_string(),
            needed,
            bound,
        })
    } else {
        Ok(())
    }
}

/// `base^exp` with early guard failure instead of overflow.
pub fn checked_pow(base: u128, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}
