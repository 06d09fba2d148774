#![no_main]

use hocard::groupoid::{oracle_cardinality, FullGroupoid};
use hocard::Budget;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let budget = Budget {
        max_objects: 64,
        ..Budget::default()
    };
    if let Ok(g) = FullGroupoid::from_json(text, &budget) {
        assert_eq!(g.cardinality(), oracle_cardinality(&g));
        let back = FullGroupoid::from_json(&g.to_json(), &budget).expect("dump reloads");
        assert_eq!(back.to_dump(), g.to_dump());
    }
});
