#![no_main]

use kcs::codec::Table;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(t) = Table::from_csv(data) {
        let csv = t.to_csv().expect("decoded table re-encodes");
        assert_eq!(Table::from_csv(&csv).expect("re-encoded csv decodes"), t);
        t.to_json().expect("decoded table encodes as json");
    }
});
