//! Finite fields and the finite abelian groups the constructions live in.
//!
//! Every group element is a `usize` index in `[0, order)`, with the identity at
//! index 0. Products index their factors lexicographically (`i * |G2| + j`),
//! so nested products flatten without changing any index.

mod field;
mod group;

use std::sync::atomic::{AtomicUsize, Ordering};

pub use field::{is_prime_power, prime_power, FiniteField};
pub use group::{FiniteGroup, GroupKind, Subgroup};

/// Default upper limit on group (and field) orders.
pub const DEFAULT_MAX_ORDER: usize = 1 << 22;

static MAX_ORDER: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_ORDER);

/// Current size guard for constructed groups and fields.
pub fn max_order() -> usize {
    MAX_ORDER.load(Ordering::Relaxed)
}

/// Overrides the size guard for the whole process.
pub fn set_max_order(limit: usize) {
    MAX_ORDER.store(limit, Ordering::Relaxed);
}
