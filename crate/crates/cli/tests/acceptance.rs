//! Acceptance suite. Runs every criterion in order, prints one
//! `[PASS]`/`[FAIL]` line each and exits nonzero if any failed.
//!
//!     cargo test -p csmnn-cli --test acceptance

#[path = "../../core/tests/naive/mod.rs"]
mod naive;

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use csmnn::evalsweep::{run_benchmark, RunReport};
use csmnn::imagekit::{ColorSpace, Point, RasterImage};
use csmnn::segmenter::{extract_features, segment, train, window_offsets, SegmenterConfig};
use csmnn::similarity::{coincidence, interiority, jaccard, FeatureVector};
use csmnn::synthgen::{generate, SynthConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SYNTH_SEG: SegmenterConfig = SegmenterConfig::SYNTHETIC;
const TOL: f64 = 1e-12;

fn within(limit: Duration, started: Instant, detail: String) -> Outcome {
    let took = started.elapsed();
    if took > limit {
        Err(format!("{detail}; took {took:.1?}, limit {limit:?}"))
    } else {
        Ok(format!("{detail}; {took:.1?}"))
    }
}

fn d_grid() -> Vec<f64> {
    (0..=12).map(|k| k as f64 * 0.5).collect()
}

fn similarity_axioms() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let grid = d_grid();
    let mut checked = 0;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=64);
        let draw = |rng: &mut ChaCha8Rng| {
            let sparse = rng.random_bool(0.2);
            (0..n)
                .map(|_| {
                    if sparse && rng.random_bool(0.5) {
                        0.0
                    } else {
                        rng.random_range(0.0..1.0)
                    }
                })
                .collect::<Vec<f64>>()
        };
        let (x, y) = (draw(&mut rng), draw(&mut rng));
        let (x, y) = (
            FeatureVector::new(x).unwrap(),
            FeatureVector::new(y).unwrap(),
        );
        let j = jaccard(&x, &y).map_err(|e| e.to_string())?;
        let i = interiority(&x, &y).map_err(|e| e.to_string())?;
        if !(-TOL..=1.0 + TOL).contains(&j) || !(-TOL..=1.0 + TOL).contains(&i) {
            return Err(format!("J={j} I={i} out of [0, 1]"));
        }
        if (j - jaccard(&y, &x).unwrap()).abs() > TOL
            || (i - interiority(&y, &x).unwrap()).abs() > TOL
        {
            return Err("J or I not commutative".into());
        }
        for v in [&x, &y] {
            if (jaccard(v, v).unwrap() - 1.0).abs() > TOL
                || (coincidence(v, v, 2.0).unwrap() - 1.0).abs() > TOL
            {
                return Err("self-similarity differs from 1".into());
            }
        }
        let mut previous = f64::INFINITY;
        for &d in &grid {
            let c = coincidence(&x, &y, d).unwrap();
            if (c - coincidence(&y, &x, d).unwrap()).abs() > TOL {
                return Err(format!("C not commutative at D={d}"));
            }
            if !(-TOL..=1.0 + TOL).contains(&c) || c > i + TOL {
                return Err(format!("C={c} exceeds I={i} at D={d}"));
            }
            // For D < 1, J^D >= J, so the bound by J only holds from D = 1 on.
            if d >= 1.0 && c > j + TOL {
                return Err(format!("C={c} exceeds J={j} at D={d}"));
            }
            if c > previous + TOL {
                return Err(format!("C increases in D at D={d}"));
            }
            previous = c;
            checked += 1;
        }
    }
    within(
        Duration::from_secs(5),
        started,
        format!("10000 pairs, {checked} (pair, D) checks; C <= I for all D, C <= J for D >= 1"),
    )
}

fn window_cardinality() -> Outcome {
    let n2 = window_offsets(2).len();
    if n2 != 13 {
        return Err(format!("radius 2 window has {n2} offsets"));
    }
    let rgb = RasterImage::constant(9, 9, ColorSpace::Rgb, 0.5).unwrap();
    let len = extract_features(&rgb, Point::new(4, 4), 2).unwrap().len();
    if len != 39 {
        return Err(format!("colour feature length {len}"));
    }
    for r in 0..=10i32 {
        let mut brute = Vec::new();
        for dr in -r..=r {
            for dc in -r..=r {
                if dr * dr + dc * dc <= r * r {
                    brute.push((dr, dc));
                }
            }
        }
        if window_offsets(r as u32) != brute {
            return Err(format!("radius {r} differs from enumeration"));
        }
    }
    Ok("13 offsets at r=2, 39 colour features, r=0..10 match enumeration".into())
}

fn oracle_equivalence() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let mut informative = 0;
    for case in 0..100 {
        let (img, protos, cfg) = naive::random_case(&mut rng);
        let fast = segment(&train(&img, &protos, cfg).unwrap(), &img).unwrap();
        if fast != naive::naive_mask(&img, &protos, &cfg) {
            return Err(format!("case {case} differs ({cfg:?})"));
        }
        if fast.count_ones() > protos.len() && fast.count_ones() < 256 {
            informative += 1;
        }
    }
    within(
        Duration::from_secs(30),
        started,
        format!("100 random 16x16 cases bit-identical ({informative} with mixed masks)"),
    )
}

fn seeds(count: u64, amplitude: Option<f64>) -> Vec<SynthConfig> {
    let mut base = SynthConfig::default();
    if let Some(a) = amplitude {
        base.amplitude = a;
    }
    (0..count).map(|s| base.with_seed(s)).collect()
}

fn check_report(r: &RunReport, count: usize) -> Result<(), String> {
    if r.failed > 0 || r.ba.len() != count {
        return Err(format!("{} of {count} samples failed", r.failed));
    }
    Ok(())
}

fn synthetic_benchmark() -> Outcome {
    let started = Instant::now();
    let r = run_benchmark(&seeds(30, None), &SYNTH_SEG, None).map_err(|e| e.to_string())?;
    check_report(&r, 30)?;
    let detail = format!("mean BA {:.4} +- {:.4} over 30 samples", r.mean, r.std_dev);
    if !(0.85..=0.95).contains(&r.mean) {
        return Err(format!("{detail}, outside [0.85, 0.95]"));
    }
    within(Duration::from_secs(180), started, detail)
}

fn redraw_procedure() -> Outcome {
    let started = Instant::now();
    let cfgs = seeds(100, None);
    let plain = run_benchmark(&cfgs, &SYNTH_SEG, None).map_err(|e| e.to_string())?;
    let redrawn = run_benchmark(&cfgs, &SYNTH_SEG, Some(0.85)).map_err(|e| e.to_string())?;
    check_report(&plain, 100)?;
    check_report(&redrawn, 100)?;
    let (before, after) = (plain.fraction_below(0.85), redrawn.fraction_below(0.85));
    let decreased = plain
        .ba
        .iter()
        .zip(&redrawn.ba)
        .filter(|(p, r)| r < p)
        .count();
    let detail = format!(
        "below 0.85: {before:.2} without redraw, {after:.2} with; {decreased} samples worse"
    );
    if after >= before || decreased > 0 {
        return Err(detail);
    }
    within(Duration::from_secs(600), started, detail)
}

fn monotonicity() -> Outcome {
    let thresholds: Vec<f64> = (10..=19).map(|k| k as f64 * 0.05).collect();
    let mut violations = 0;
    let mut checks = 0;
    for seed in 0..20 {
        let s = generate(&SynthConfig::default().with_seed(seed)).map_err(|e| e.to_string())?;
        let bank = train(&s.image, &s.prototypes, SYNTH_SEG).map_err(|e| e.to_string())?;
        let scores = bank.score_map(&s.image).unwrap();
        let masks: Vec<_> = thresholds.iter().map(|t| scores.threshold(*t)).collect();
        for pair in masks.windows(2) {
            checks += 1;
            violations += usize::from(!pair[1].is_subset_of(&pair[0]));
        }
        let masks: Vec<_> = d_grid()
            .into_iter()
            .map(|d| {
                let cfg = SegmenterConfig {
                    selectivity: d,
                    ..SYNTH_SEG
                };
                segment(&bank.with_config(cfg).unwrap(), &s.image).unwrap()
            })
            .collect();
        for pair in masks.windows(2) {
            checks += 1;
            violations += usize::from(!pair[1].is_subset_of(&pair[0]));
        }
    }
    let detail = format!("{violations} violations in {checks} nesting checks over 20 samples");
    if violations > 0 {
        Err(detail)
    } else {
        Ok(detail)
    }
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_csmnn"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!(
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        ))
    }
}

fn same_bytes(a: &Path, b: &Path) -> Result<bool, String> {
    Ok(fs::read(a).map_err(|e| e.to_string())? == fs::read(b).map_err(|e| e.to_string())?)
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dirs = [tmp.path().join("a"), tmp.path().join("b")];
    for d in &dirs {
        run_cli(&["generate", "--seed", "7", "--out", d.to_str().unwrap()])?;
    }
    for f in ["image.png", "gold.png", "prototypes.json"] {
        if !same_bytes(&dirs[0].join(f), &dirs[1].join(f))? {
            return Err(format!("generate --seed 7 wrote different {f}"));
        }
    }
    let (image, protos) = (dirs[0].join("image.png"), dirs[0].join("prototypes.json"));
    let masks = [tmp.path().join("m1.png"), tmp.path().join("m2.png")];
    for m in &masks {
        run_cli(&[
            "segment",
            "--image",
            image.to_str().unwrap(),
            "--prototypes",
            protos.to_str().unwrap(),
            "--D",
            "2",
            "--T",
            "0.85",
            "--r",
            "4",
            "--a",
            "0.0002",
            "--out",
            m.to_str().unwrap(),
        ])?;
    }
    if !same_bytes(&masks[0], &masks[1])? {
        return Err("segment wrote different masks".into());
    }
    Ok("generate and segment outputs byte-identical across runs".into())
}

fn noise_robustness() -> Outcome {
    let amplitude = 3.0 * SynthConfig::default().amplitude;
    let r = run_benchmark(&seeds(30, Some(amplitude)), &SYNTH_SEG, None).map_err(|e| e.to_string())?;
    check_report(&r, 30)?;
    let good = r.ba.iter().filter(|b| **b > 0.75).count();
    let detail = format!(
        "amplitude {amplitude}: {good}/30 samples above 0.75, mean BA {:.4}",
        r.mean
    );
    if good >= 25 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("similarity axioms", similarity_axioms),
        ("window cardinality", window_cardinality),
        ("oracle equivalence", oracle_equivalence),
        ("synthetic benchmark", synthetic_benchmark),
        ("redraw procedure", redraw_procedure),
        ("monotonicity", monotonicity),
        ("determinism", determinism),
        ("noise robustness", noise_robustness),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
