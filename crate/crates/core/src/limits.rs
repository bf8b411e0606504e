//! Resource caps for the exponential corners of the decision procedures.
//!
//! Both caps default to fixed values and can be overridden for the whole
//! process through `IDEALFORGE_RESOURCE_CAP`.

use std::sync::OnceLock;

pub const RESOURCE_CAP_ENV: &str = "IDEALFORGE_RESOURCE_CAP";

/// Default cap on the number of conjuncts produced by a single boolean operation.
pub const DEFAULT_CONJUNCT_CAP: usize = 1 << 14;

/// Default cap on the number of boolean regions explored per level by the up-closure decision.
pub const DEFAULT_REGION_CAP: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub conjunct_cap: usize,
    pub region_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            conjunct_cap: DEFAULT_CONJUNCT_CAP,
            region_cap: DEFAULT_REGION_CAP,
        }
    }
}

impl Limits {
    /// Process-wide limits. Read once; a positive integer in the environment
    /// variable replaces both caps.
    pub fn current() -> Limits {
        static LIMITS: OnceLock<Limits> = OnceLock::new();
        *LIMITS.get_or_init(|| {
            match std::env::var(RESOURCE_CAP_ENV)
                .ok()
                .and_then(|v| v.trim().parse::<usize>().ok())
            {
                Some(cap) if cap > 0 => Limits {
                    conjunct_cap: cap,
                    region_cap: cap,
                },
                _ => Limits::default(),
            }
        })
    }
}
