#![no_main]

use libfuzzer_sys::fuzz_target;
use varsel::data::{parse_csv, profile, LoadOptions, ProfileOptions};
use varsel::selector::{recommend, SelectorThresholds};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // First line picks the target column by name, the rest is the table.
    let (target, body) = text.split_once('\n').unwrap_or(("", text));
    let opts = if target.is_empty() { LoadOptions::default() } else { LoadOptions::default().with_target(target) };
    if let Ok(ds) = parse_csv(body, &opts) {
        let t = SelectorThresholds::default();
        if let Ok(p) = profile(&ds, &ProfileOptions::default(), &t) {
            let q = recommend(&p, &t);
            assert!(q.items.last().is_some_and(|k| k.is_terminal()));
        }
    }
});
