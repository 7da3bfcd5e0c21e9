#![no_main]

use csmnn::imagekit::io::{decode_mask, encode_mask_png};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(mask) = decode_mask(data) {
        let again = decode_mask(&encode_mask_png(&mask).unwrap()).unwrap();
        assert_eq!(again, mask);
    }
});
