#![no_main]

use ecsc::{CorrectionOrder, QuantumNumbers, UnitPreset};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(qn) = data.parse::<QuantumNumbers>() {
        // whatever parses must print back to something that parses the same
        if let Some(label) = qn.label() {
            assert_eq!(label.parse::<QuantumNumbers>().unwrap(), qn);
        }
    }
    let _ = data.parse::<UnitPreset>();
    let _ = data.parse::<CorrectionOrder>();
    let _ = data.parse::<ecsc::report::TableId>();
});
