#![no_main]

use csmnn::imagekit::io::{decode_image, encode_png};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(img) = decode_image(data) {
        assert!(img.samples().iter().all(|v| (0.0..=1.0).contains(v)));
        assert_eq!(img.samples().len(), img.width() * img.height() * img.channels());
        // Anything decoded re-encodes and decodes to the same samples.
        let again = decode_image(&encode_png(&img).unwrap()).unwrap();
        assert_eq!(again, img);
    }
});
