#![no_main]

use std::path::Path;

use hocard::dsl::evaluate;
use hocard::Budget;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let budget = Budget {
        max_objects: 64,
        max_candidates: 20_000,
        max_group_order: 24,
    };
    // Fiber paths resolve against a directory that holds no dumps.
    let _ = evaluate(src, &budget, Path::new("/nonexistent"));
});
