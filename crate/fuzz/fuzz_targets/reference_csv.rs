#![no_main]

use ecsc::report::ReferenceDataset;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(set) = ReferenceDataset::parse(data) {
        for e in &set.entries {
            let _ = e.printed_value();
            let _ = e.energy();
        }
    }
});
