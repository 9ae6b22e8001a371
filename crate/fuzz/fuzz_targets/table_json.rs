#![no_main]

use kcs::codec::Table;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(t) = Table::from_json(data) {
        let json = t.to_json().expect("decoded table re-encodes");
        assert_eq!(Table::from_json(&json).expect("re-encoded json decodes"), t);
        t.to_csv().expect("decoded table encodes as csv");
    }
});
