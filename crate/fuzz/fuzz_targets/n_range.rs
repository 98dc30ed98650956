#![no_main]

use libfuzzer_sys::fuzz_target;
use schur_relent::params::{parse_n_range, MAX_EXPANSION};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ns) = parse_n_range(text) {
        assert!(!ns.is_empty() && ns.len() <= MAX_EXPANSION);
        assert!(ns[0] >= 1);
        assert!(ns.windows(2).all(|w| w[0] < w[1]));
    }
});
