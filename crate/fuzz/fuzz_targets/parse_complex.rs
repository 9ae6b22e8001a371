#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(z) = kcs::codec::parse_complex(data) {
        assert!(z.re.is_finite() && z.im.is_finite());
        // the canonical rendering parses back to the same value
        let text = format!("{:.16e}{:+.16e}i", z.re, z.im);
        assert_eq!(kcs::codec::parse_complex(&text).unwrap(), z);
    }
});
