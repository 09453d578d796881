#![no_main]

use libfuzzer_sys::fuzz_target;
use varsel::pipeline::{render_instance, SelectionReport};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(report) = SelectionReport::from_json(text) {
        let _ = report.to_text();
        let _ = render_instance(&report);
        let json = report.to_json();
        let again = SelectionReport::from_json(&json).expect("written report must parse");
        assert_eq!(again.to_json(), json);
    }
});
