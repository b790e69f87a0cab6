#![no_main]

use ecsc::report::{parse_delta_list, DeltaRange};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(list) = parse_delta_list(data) {
        assert!(list.iter().all(|d| d.is_finite() && *d >= 0.0));
    }
    if let Ok(range) = data.parse::<DeltaRange>() {
        let values = range.values();
        assert!(values.iter().all(|d| d.is_finite() && *d >= 0.0));
    }
});
