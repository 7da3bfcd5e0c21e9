#![no_main]

use csmnn::formats::parse_segmenter_config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = parse_segmenter_config(text) {
        assert!(cfg.validate().is_ok());
    }
});
