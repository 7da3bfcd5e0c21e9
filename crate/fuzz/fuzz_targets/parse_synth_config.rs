#![no_main]

use csmnn::SynthConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = SynthConfig::from_json(text) {
        assert!(cfg.validate().is_ok());
    }
});
