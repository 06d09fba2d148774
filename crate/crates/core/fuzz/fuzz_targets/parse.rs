#![no_main]

use hocard::dsl::{parse, parse_bytes, pretty};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    match parse_bytes(data) {
        Ok(program) => {
            // Accepted input reprints to text that parses to the same tree.
            let text = pretty(&program);
            let again = parse(&text).expect("pretty output parses");
            assert_eq!(program.without_spans(), again.without_spans());
        }
        Err(d) => {
            assert!(d.line >= 1 && d.column >= 1);
            assert!(d.span.start <= d.span.end && d.span.end <= data.len());
        }
    }
});
