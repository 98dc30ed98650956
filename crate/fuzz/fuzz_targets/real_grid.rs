#![no_main]

use libfuzzer_sys::fuzz_target;
use schur_relent::params::{parse_real_grid, MAX_EXPANSION};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(xs) = parse_real_grid(text) {
        assert!(!xs.is_empty() && xs.len() <= MAX_EXPANSION);
        assert!(xs.iter().all(|x| x.is_finite()));
    }
});
