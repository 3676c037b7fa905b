#![no_main]
use libfuzzer_sys::fuzz_target;

use magicdist::input::parse_histogram_csv;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(h) = parse_histogram_csv(text) {
            assert!(h.counts().iter().sum::<u64>() <= h.total_samples());
            let mut out = Vec::new();
            h.write_csv(&mut out, &[]).unwrap();
            let again = parse_histogram_csv(std::str::from_utf8(&out).unwrap()).unwrap();
            assert_eq!(again.counts(), h.counts());
        }
    }
});
