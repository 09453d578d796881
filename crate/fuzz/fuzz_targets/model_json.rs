#![no_main]

use libfuzzer_sys::fuzz_target;
use varsel::learners::{predict, TrainedModel};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(model) = TrainedModel::from_json(text) {
        let width = model.encoder.columns.len();
        let _ = predict(&model, &[vec!["0".to_string(); width]]);
    }
});
