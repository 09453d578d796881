#![no_main]

use libfuzzer_sys::fuzz_target;
use varsel::pipeline::{parse_triggers, Settings};
use varsel::selector::SelectorThresholds;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = Settings::from_toml(text);
    let _ = parse_triggers(text);
    if let Ok(t) = SelectorThresholds::from_toml(text) {
        t.validate().expect("parsed thresholds are valid");
    }
});
