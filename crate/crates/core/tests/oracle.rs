//! A deliberately naive classifier, written without any of the library's
//! scoring code, must produce bit-identical masks.

mod naive;

use csmnn::segmenter::{segment, train};
use naive::{naive_mask, random_case};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn naive_classifier_agrees_bit_for_bit() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut nontrivial = 0;
    for case in 0..100 {
        let (img, protos, cfg) = random_case(&mut rng);
        let bank = train(&img, &protos, cfg).unwrap();
        let fast = segment(&bank, &img).unwrap();
        let slow = naive_mask(&img, &protos, &cfg);
        assert_eq!(fast, slow, "case {case}: {cfg:?}");
        let ones = fast.count_ones();
        if ones > protos.len() && ones < 256 {
            nontrivial += 1;
        }
    }
    // Guard against a vacuous comparison of all-empty or all-full masks.
    assert!(nontrivial >= 30, "only {nontrivial} informative cases");
}
