#![no_main]
use libfuzzer_sys::fuzz_target;

use magicdist::input::parse_amplitudes;
use magicdist::MagicReport;

fuzz_target!(|data: &str| {
    if let Ok(state) = parse_amplitudes(data) {
        let norm: f64 = state.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-9);
        if state.dim() <= 64 {
            let _ = MagicReport::for_state(&state, 2.0);
        }
    }
});
