#![no_main]

use ecsc::report::RadialGrid;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(grid) = data.parse::<RadialGrid>() {
        assert!(grid.count >= 1 && grid.start >= 0.0 && grid.stop >= grid.start);
        if grid.count <= 4096 {
            let points = grid.points();
            assert_eq!(points.len(), grid.count);
            assert!(points.iter().all(|r| r.is_finite() && *r >= 0.0));
        }
    }
});
