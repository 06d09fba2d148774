#![no_main]

use hocard::checker::CheckReport;
use hocard::dsl::QueryResult;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = serde_json::from_slice::<CheckReport>(data) {
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<CheckReport>(&text).unwrap(), r);
    }
    if let Ok(q) = serde_json::from_slice::<QueryResult>(data) {
        let text = serde_json::to_string(&q).unwrap();
        let _ = serde_json::from_str::<QueryResult>(&text).unwrap();
    }
});
