#![no_main]

use libfuzzer_sys::fuzz_target;
use schur_relent::states::parse_state_json;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rho) = parse_state_json(text) {
        // Accepted states are normalised Hermitian matrices with nonnegative spectrum.
        let m = rho.matrix();
        let trace: f64 = (0..rho.dim()).map(|i| m[(i, i)].re).sum();
        assert!((trace - 1.0).abs() < 1e-6);
        assert!(rho.min_eigenvalue() >= -1e-9);
    }
});
