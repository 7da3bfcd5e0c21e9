//! Replays the checked-in fuzz seeds through the same entry points and
//! round-trip checks as the fuzz targets, on a stable toolchain.

use std::fs;
use std::path::PathBuf;

use csmnn::formats::{parse_prototypes, parse_segmenter_config, SessionExport};
use csmnn::imagekit::io::{decode_image, decode_mask, encode_mask_png, encode_png};
use csmnn::{NeuronBank, SynthConfig};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            (
                path.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&path).unwrap(),
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn text(bytes: &[u8]) -> &str {
    std::str::from_utf8(bytes).unwrap()
}

#[test]
fn image_seeds_decode_and_round_trip() {
    for (name, bytes) in seeds("decode_image") {
        let img = decode_image(&bytes).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(
            decode_image(&encode_png(&img).unwrap()).unwrap(),
            img,
            "{name}"
        );
    }
    for (name, bytes) in seeds("decode_mask") {
        let mask = decode_mask(&bytes).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(
            decode_mask(&encode_mask_png(&mask).unwrap()).unwrap(),
            mask,
            "{name}"
        );
    }
}

#[test]
fn json_seeds_parse() {
    for (name, bytes) in seeds("parse_bank_json") {
        let bank = NeuronBank::from_json(text(&bytes)).unwrap_or_else(|e| panic!("{name}: {e}"));
        let back = NeuronBank::from_json(&bank.to_json().unwrap()).unwrap();
        assert_eq!(back.neurons(), bank.neurons());
    }
    for (name, bytes) in seeds("parse_prototypes") {
        parse_prototypes(text(&bytes)).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    for (name, bytes) in seeds("parse_segmenter_config") {
        parse_segmenter_config(text(&bytes)).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    for (name, bytes) in seeds("parse_synth_config") {
        SynthConfig::from_json(text(&bytes)).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    for (name, bytes) in seeds("parse_session_export") {
        SessionExport::from_json(text(&bytes)).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn hostile_inputs_are_rejected_cleanly() {
    let png = seeds("decode_image")
        .into_iter()
        .find(|(n, _)| n == "gray.png")
        .unwrap()
        .1;
    for cut in 0..png.len() {
        let _ = decode_image(&png[..cut]);
    }
    // A header claiming an enormous raster must fail on limits, not allocate.
    assert!(decode_image(b"P5\n100000 100000\n255\n").is_err());
    for doc in [
        "",
        "null",
        "[[1]]",
        "[[-1, 2]]",
        "{\"D\": 1e999}",
        "[[4294967296, 0]]",
    ] {
        assert!(parse_prototypes(doc).is_err(), "{doc}");
        assert!(parse_segmenter_config(doc).is_err(), "{doc}");
        assert!(NeuronBank::from_json(doc).is_err(), "{doc}");
    }
}
