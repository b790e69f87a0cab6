#![no_main]

use ecsc::report::{parse_table_csv, table_csv_string};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(rows) = parse_table_csv(data) else { return };
    let Ok(once) = table_csv_string(&rows) else { return };
    // after one normalisation pass, emit ∘ parse is the identity
    let again = parse_table_csv(&once).expect("emitted table parses");
    assert_eq!(table_csv_string(&again).unwrap(), once);
});
