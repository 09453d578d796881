#![no_main]

use libfuzzer_sys::fuzz_target;
use varsel::pipeline::{QualityCriterion, TriggerRule};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = text.parse::<QualityCriterion>() {
        assert_eq!(c.to_string().parse::<QualityCriterion>().ok(), Some(c));
    }
    if let Ok(rule) = TriggerRule::parse(text, 0) {
        assert_eq!(TriggerRule::parse(&rule.to_string(), 0).ok(), Some(rule));
    }
});
