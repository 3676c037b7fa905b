#![no_main]
use libfuzzer_sys::fuzz_target;

use magicdist::input::parse_bloch;
use magicdist::{MagicReport, PureState};

fuzz_target!(|data: &str| {
    if let Ok(b) = parse_bloch(data) {
        let state = PureState::from_bloch(b).unwrap();
        let report = MagicReport::for_state(&state, 2.0).unwrap();
        assert!(report.n_alpha <= 1.0 + 1e-12 && report.n_alpha >= 1.0 / 3.0 - 1e-12);
    }
});
