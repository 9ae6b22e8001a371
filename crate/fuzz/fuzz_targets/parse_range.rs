#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok((lo, hi)) = kcs::codec::parse_range(data) {
        assert!(lo.is_finite() && hi.is_finite() && lo <= hi);
    }
});
