#![no_main]

use libfuzzer_sys::fuzz_target;
use varsel::learners::{parse_predictions, ImportOptions};
use varsel::pipeline::audit_set;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(set) = parse_predictions(text, &ImportOptions::default()) {
        if let Some(first) = set.entries.first().map(|e| e.group.clone()) {
            let positive = set.labels.last().cloned().unwrap_or_default();
            let _ = audit_set(&set, &first, &positive);
        }
    }
});
