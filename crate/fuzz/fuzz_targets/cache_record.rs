#![no_main]

use hallq::cache::Record;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(line) = std::str::from_utf8(data) else { return };
    if let Some(r) = Record::parse_line(line) {
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(Record::parse_line(&text), Some(r));
    }
});
