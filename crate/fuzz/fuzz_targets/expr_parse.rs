#![no_main]

use libfuzzer_sys::fuzz_target;
use varsel::dsl::parse_expr;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(expr) = parse_expr(text) {
        let again = parse_expr(&expr.to_string()).expect("printed expression must parse");
        assert_eq!(again, expr);
    }
});
