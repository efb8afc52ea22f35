//! Per-level memoization of expensive structures.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use crate::error::Result;

pub(crate) type Registry<T> = OnceLock<Mutex<BTreeMap<u32, &'static T>>>;

/// Returns the cached value for `p`, building and leaking it on first use.
/// The lock is not held while building, so builders may consult other caches.
pub(crate) fn memoize<T: Send + Sync + 'static>(
    reg: &'static Registry<T>,
    p: u32,
    build: impl FnOnce() -> Result<T>,
) -> Result<&'static T> {
    let map = reg.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(v) = map.lock().expect("cache poisoned").get(&p) {
        return Ok(v);
    }
    let built = build()?;
    let mut guard = map.lock().expect("cache poisoned");
    Ok(*guard.entry(p).or_insert_with(|| Box::leak(Box::new(built))))
}
