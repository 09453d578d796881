#![no_main]

use libfuzzer_sys::fuzz_target;
use varsel::dsl::{parse, serialize};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(model) = parse(text) {
        let again = parse(&serialize(&model)).expect("serialized model must parse");
        assert_eq!(again, model);
        let _ = varsel::fm::to_dot(&model, None);
    }
});
