#![no_main]

use csmnn::NeuronBank;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(bank) = NeuronBank::from_json(text) {
        let back = NeuronBank::from_json(&bank.to_json().unwrap()).unwrap();
        assert_eq!(back.neurons(), bank.neurons());
        assert_eq!(back.config(), bank.config());
    }
});
