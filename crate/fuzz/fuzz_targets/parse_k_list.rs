#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(ks) = kcs::codec::parse_k_list(data) {
        assert!(!ks.is_empty());
        assert!(ks.iter().all(|k| (0.0..=1.0).contains(k)));
    }
});
