#![no_main]
use libfuzzer_sys::fuzz_target;

use magicdist::input::parse_real_list;

fuzz_target!(|data: &str| {
    if let Ok(values) = parse_real_list(data) {
        assert!(values.iter().all(|v| v.is_finite()));
    }
});
