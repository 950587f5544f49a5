//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any failed.

use std::collections::BTreeMap;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use defog::config::{Algorithm, FogParams, Normalization, Pairing, ReconConfig};
use defog::fogsim::{render_frame, simulate_sequence};
use defog::imgio::{decode_pnm, read_pnm, write_pnm, PnmFormat};
use defog::metrics::{brightness_contrast, psnr, ssim};
use defog::pipeline::Scene;
use defog::recon::{make_pairs, pnc_reconstruct, pnfc_reconstruct, reconstruct};
use defog::{Frame, FrameSequence, Timing};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_TOL: f64 = 1e-12;
const CLOSED_FORM_TOL: f64 = 1e-12;
const STATIC_TOL: f64 = 1e-12;
const CV_BOUND: f64 = 0.05;
const FROZEN_CV: f64 = 0.025684762;
const FROZEN_TOL: f64 = 1e-6;
const SSIM_GAIN: f64 = 0.15;
const FROZEN_SSIM_PNFC: f64 = 0.361720516;
const FROZEN_SSIM_SINGLE: f64 = 0.120948160;
const FROZEN_SSIM_MEAN: f64 = 0.198826302;
const METRIC_TOL: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed < Duration::from_secs(limit_s)
}

fn seq_of(frames: Vec<Frame>) -> FrameSequence {
    FrameSequence::new(frames, Timing::default()).unwrap()
}

// Scalar loops over explicit indices, written without the library's helpers.
fn literal_pnc(frames: &[Vec<f64>], pairs: &[(usize, usize)], px: usize) -> f64 {
    let mut acc = 0.0;
    for &(a, b) in pairs {
        acc += frames[a][px] * frames[b][px];
    }
    acc / pairs.len() as f64
}

fn literal_pnfc(frames: &[Vec<f64>], pairs: &[(usize, usize)], px: usize) -> f64 {
    let k = pairs.len() as f64;
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for &(a, b) in pairs {
        m1 += frames[a][px];
        m2 += frames[b][px];
    }
    m1 /= k;
    m2 /= k;
    let mut acc = 0.0;
    for &(a, b) in pairs {
        let d1 = frames[a][px] - m1;
        let d2 = frames[b][px] - m2;
        let (d1p, d1m) = if d1 > 0.0 {
            (d1, 0.0)
        } else {
            (0.0, d1.min(0.0))
        };
        let (d2p, d2m) = if d2 > 0.0 {
            (d2, 0.0)
        } else {
            (0.0, d2.min(0.0))
        };
        acc += ((m1 - d1p) * (m2 - d2p)).abs();
        acc += ((m1 - d1m) * (m2 - d2m)).abs();
        acc += ((m1 - d1p) * (m2 - d2m)).abs();
        acc += ((m1 - d1m) * (m2 - d2p)).abs();
    }
    acc / k
}

fn literal_pairs(n: usize, pairing: Pairing) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    match pairing {
        Pairing::DisjointAdjacent => {
            let mut i = 0;
            while i + 1 < n {
                out.push((i, i + 1));
                i += 2;
            }
        }
        Pairing::Sliding => {
            for i in 0..n - 1 {
                out.push((i, i + 1));
            }
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for case in 0..50 {
        let channels = if case % 5 == 4 { 3 } else { 1 };
        let raw: Vec<Vec<f64>> = (0..8)
            .map(|_| {
                (0..16 * channels)
                    .map(|_| rng.random_range(0.0..=100.0))
                    .collect()
            })
            .collect();
        let seq = seq_of(
            raw.iter()
                .map(|p| Frame::new(4, 4, channels, p.clone()).unwrap())
                .collect(),
        );
        for pairing in [Pairing::DisjointAdjacent, Pairing::Sliding] {
            let lit = literal_pairs(8, pairing);
            let pairs = make_pairs(8, pairing).unwrap();
            assert_eq!(pairs.pairs(), lit.as_slice());
            let pnc = pnc_reconstruct(&seq, &pairs, Normalization::None).unwrap();
            let pnfc = pnfc_reconstruct(&seq, &pairs, Normalization::None).unwrap();
            for px in 0..16 * channels {
                let e1 = literal_pnc(&raw, &lit, px);
                let e2 = literal_pnfc(&raw, &lit, px);
                worst = worst.max((pnc.raw.pixels()[px] - e1).abs() / e1.abs().max(1.0));
                worst = worst.max((pnfc.raw.pixels()[px] - e2).abs() / e2.abs().max(1.0));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= ORACLE_TOL && within(elapsed, 5),
        format!(
            "max deviation {worst:.3e} (tol {ORACLE_TOL:e}), {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst = 0.0f64;
    for case in 0..20 {
        let channels = if case % 2 == 0 { 1 } else { 3 };
        let (w, h) = (rng.random_range(1..8), rng.random_range(1..8));
        let n = rng.random_range(2..12);
        let base = Frame::from_fn(w, h, channels, |_, _, _| rng.random_range(0.0..1e4)).unwrap();
        let seq = seq_of(vec![base.clone(); n]);
        for pairing in [Pairing::DisjointAdjacent, Pairing::Sliding] {
            let pairs = make_pairs(n, pairing).unwrap();
            let pnc = pnc_reconstruct(&seq, &pairs, Normalization::None).unwrap();
            let pnfc = pnfc_reconstruct(&seq, &pairs, Normalization::None).unwrap();
            for (i, &c) in base.pixels().iter().enumerate() {
                let scale = (c * c).max(1.0);
                worst = worst.max((pnc.raw.pixels()[i] - c * c).abs() / scale);
                worst = worst.max((pnfc.raw.pixels()[i] - 4.0 * c * c).abs() / scale);
            }
        }
    }
    outcome(
        worst <= CLOSED_FORM_TOL,
        format!("max relative deviation {worst:.3e} (tol {CLOSED_FORM_TOL:e})"),
    )
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    let targets = [
        defog::targets::letter_g(32).scaled(1000.0).unwrap(),
        Frame::from_fn(9, 7, 3, |x, y, c| (x * 31 + y * 7 + c * 100) as f64).unwrap(),
    ];
    for (k, target) in targets.iter().enumerate() {
        for (beta0, d, ambient, kf) in [
            (2.5, 0.6, 800.0, 1.0),
            (0.7, 3.0, 55.5, 0.8),
            (0.0, 1.0, 10.0, 1.0),
        ] {
            let params = FogParams {
                beta0,
                d,
                ambient_mean: ambient,
                k_factor: kf,
                seed: 7 + k as u64,
                ..FogParams::default()
            }
            .static_limit();
            let t = (-beta0 * d).exp();
            for idx in [0u64, 3, 19] {
                let frame = render_frame(target, &params, idx).unwrap();
                for (i, &v) in frame.pixels().iter().enumerate() {
                    let expected = target.pixels()[i] * t + kf * ambient * (1.0 - t);
                    worst = worst.max((v - expected).abs() / expected.abs().max(1.0));
                }
            }
        }
    }
    outcome(
        worst <= STATIC_TOL,
        format!("max relative deviation {worst:.3e} (tol {STATIC_TOL:e})"),
    )
}

fn coefficient_of_variation(frame: &Frame) -> f64 {
    let p = frame.pixels();
    let n = p.len() as f64;
    let mean = p.iter().sum::<f64>() / n;
    let var = p.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    var.sqrt() / mean
}

fn criterion_4() -> Outcome {
    let params = FogParams {
        ambient_mean: 100.0,
        ambient_sigma: 0.3,
        n_frames: 600,
        ..FogParams::default()
    };
    let dark = Frame::filled(64, 64, 1, 0.0).unwrap();
    let seq = simulate_sequence(&dark, &params, Timing::default()).unwrap();
    let result = reconstruct(
        &seq,
        &ReconConfig {
            algorithm: Algorithm::Pnfc,
            pairing: Pairing::DisjointAdjacent,
            normalization: Normalization::Peak,
        },
    )
    .unwrap();
    let cv = coefficient_of_variation(&result.image);
    let frozen_ok = (cv - FROZEN_CV).abs() <= FROZEN_TOL;
    outcome(
        cv < CV_BOUND && frozen_ok,
        format!("cv {cv:.9} (bound {CV_BOUND}, frozen {FROZEN_CV} ± {FROZEN_TOL:e})"),
    )
}

fn default_scene() -> Scene {
    Scene {
        reference: defog::targets::letter_g(64),
        signal_peak: 1000.0,
        fog: FogParams {
            beta0: 2.5,
            d: 0.6,
            beta_sigma: 0.3,
            ambient_mean: 800.0,
            shot_noise: true,
            ..FogParams::default()
        },
        timing: Timing::default(),
    }
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let scene = default_scene();
    let target = &scene.reference;
    let seq = scene.simulate(20, 1).unwrap();
    let peak = seq.channel_peaks()[0];
    let pnfc = reconstruct(&seq, &ReconConfig::default()).unwrap();
    let single = seq.frames()[0].scaled(1.0 / peak).unwrap();
    let mean = reconstruct(
        &seq,
        &ReconConfig {
            algorithm: Algorithm::Mean,
            normalization: Normalization::Peak,
            ..ReconConfig::default()
        },
    )
    .unwrap();
    let mean_same = reconstruct(
        &seq,
        &ReconConfig {
            algorithm: Algorithm::Mean,
            ..ReconConfig::default()
        },
    )
    .unwrap();
    let s_pnfc = ssim(&pnfc.image, target).unwrap();
    let s_single = ssim(&single, target).unwrap();
    let s_mean = ssim(&mean.image, target).unwrap();
    let s_mean_same = ssim(&mean_same.image, target).unwrap();
    let elapsed = start.elapsed();
    let frozen_ok = (s_pnfc - FROZEN_SSIM_PNFC).abs() <= FROZEN_TOL
        && (s_single - FROZEN_SSIM_SINGLE).abs() <= FROZEN_TOL
        && (s_mean - FROZEN_SSIM_MEAN).abs() <= FROZEN_TOL;
    outcome(
        s_pnfc - s_single >= SSIM_GAIN && s_pnfc > s_mean && frozen_ok && within(elapsed, 10),
        format!(
            "ssim pnfc {s_pnfc:.9}, single frame {s_single:.9}, mean {s_mean:.9} \
             (mean under sqrt-minmax {s_mean_same:.9}, informational), {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let scene = default_scene();
    let counts = [10usize, 100, 200, 300];
    let mut medians: BTreeMap<Algorithm, Vec<f64>> = BTreeMap::new();
    for &n in &counts {
        let mut scores: BTreeMap<Algorithm, Vec<f64>> = BTreeMap::new();
        for seed in 1..=5 {
            let seq = scene.simulate(n, seed).unwrap();
            for algorithm in [Algorithm::Pnc, Algorithm::Pnfc] {
                let r = reconstruct(
                    &seq,
                    &ReconConfig {
                        algorithm,
                        ..ReconConfig::default()
                    },
                )
                .unwrap();
                scores
                    .entry(algorithm)
                    .or_default()
                    .push(ssim(&r.image, &scene.reference).unwrap());
            }
        }
        for (alg, mut v) in scores {
            v.sort_by(f64::total_cmp);
            medians.entry(alg).or_default().push(v[2]);
        }
    }
    let elapsed = start.elapsed();
    let monotone = medians.values().all(|m| m.windows(2).all(|w| w[1] >= w[0]));
    let detail = medians
        .iter()
        .map(|(a, m)| {
            let list: Vec<String> = m.iter().map(|v| format!("{v:.4}")).collect();
            format!("{a} [{}]", list.join(", "))
        })
        .collect::<Vec<_>>()
        .join("; ");
    outcome(
        monotone && within(elapsed, 120),
        format!(
            "medians at N={counts:?}: {detail}, {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_7() -> Outcome {
    let scene = default_scene();
    let seq = scene.simulate(scene.fog.n_frames, scene.fog.seed).unwrap();
    let r = reconstruct(
        &seq,
        &ReconConfig {
            normalization: Normalization::Peak,
            ..ReconConfig::default()
        },
    )
    .unwrap();
    let recon = brightness_contrast(&r.image).0;
    let target = brightness_contrast(&scene.reference).0;
    outcome(
        recon < target,
        format!("mean brightness reconstruction {recon:.6} vs target {target:.6}"),
    )
}

// Direct 2D-window SSIM: explicit 2D weights, two-pass central moments.
fn reference_ssim(a: &Frame, b: &Frame) -> f64 {
    const R: isize = 5;
    let sigma: f64 = 1.5;
    let mut weights = [[0.0f64; 11]; 11];
    let mut total = 0.0;
    for (j, row) in weights.iter_mut().enumerate() {
        for (i, w) in row.iter_mut().enumerate() {
            let (dx, dy) = (i as f64 - 5.0, j as f64 - 5.0);
            *w = (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp();
            total += *w;
        }
    }
    let c1 = (0.01f64).powi(2);
    let c2 = (0.03f64).powi(2);
    let (w, h, ch) = a.shape();
    let mut per_channel = 0.0;
    for c in 0..ch {
        let mut sum = 0.0;
        let mut count = 0usize;
        for cy in R..h as isize - R {
            for cx in R..w as isize - R {
                let at =
                    |f: &Frame, i: isize, j: isize| f.get((cx + i) as usize, (cy + j) as usize, c);
                let (mut mx, mut my) = (0.0, 0.0);
                for j in -R..=R {
                    for i in -R..=R {
                        let wt = weights[(j + R) as usize][(i + R) as usize] / total;
                        mx += wt * at(a, i, j);
                        my += wt * at(b, i, j);
                    }
                }
                let (mut vx, mut vy, mut cxy) = (0.0, 0.0, 0.0);
                for j in -R..=R {
                    for i in -R..=R {
                        let wt = weights[(j + R) as usize][(i + R) as usize] / total;
                        let (u, v) = (at(a, i, j) - mx, at(b, i, j) - my);
                        vx += wt * u * u;
                        vy += wt * v * v;
                        cxy += wt * u * v;
                    }
                }
                sum += ((2.0 * mx * my + c1) * (2.0 * cxy + c2))
                    / ((mx * mx + my * my + c1) * (vx + vy + c2));
                count += 1;
            }
        }
        per_channel += sum / count as f64;
    }
    per_channel / ch as f64
}

fn reference_psnr(a: &Frame, b: &Frame) -> f64 {
    let mut se = 0.0;
    for (x, y) in a.pixels().iter().zip(b.pixels()) {
        se += (x - y) * (x - y);
    }
    let mse = se / a.len() as f64;
    if mse == 0.0 {
        f64::INFINITY
    } else {
        -10.0 * mse.log10()
    }
}

fn corpus() -> Vec<(Frame, Frame)> {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut out = Vec::new();
    let g = defog::targets::letter_g(64);
    let colors = defog::targets::color_targets(64);
    let noisy = |f: &Frame, amp: f64, rng: &mut ChaCha8Rng| {
        f.map(|v| (v + rng.random_range(-amp..=amp)).clamp(0.0, 1.0))
            .unwrap()
    };
    out.push((noisy(&g, 0.2, &mut rng), g.clone()));
    out.push((g.map(|v| 0.3 + 0.5 * v).unwrap(), g.clone()));
    for c in &colors {
        out.push((noisy(c, 0.1, &mut rng), c.clone()));
    }
    let sizes = [
        (11usize, 11usize, 1usize),
        (23, 17, 1),
        (40, 12, 3),
        (13, 29, 3),
    ];
    for (w, h, ch) in sizes {
        let a = Frame::from_fn(w, h, ch, |_, _, _| rng.random_range(0.0..=1.0)).unwrap();
        let b = Frame::from_fn(w, h, ch, |_, _, _| rng.random_range(0.0..=1.0)).unwrap();
        out.push((a, b));
    }
    let flat = Frame::filled(16, 16, 1, 0.4).unwrap();
    let ramp = Frame::from_fn(16, 16, 1, |x, y, _| (x + y) as f64 / 30.0).unwrap();
    out.push((flat, ramp));
    out
}

fn criterion_8() -> Outcome {
    let mut worst_ssim = 0.0f64;
    let mut worst_psnr = 0.0f64;
    let mut identities = true;
    let images = corpus();
    for (a, b) in &images {
        worst_ssim = worst_ssim.max((ssim(a, b).unwrap() - reference_ssim(a, b)).abs());
        worst_psnr = worst_psnr.max((psnr(a, b, 1.0).unwrap() - reference_psnr(a, b)).abs());
        for f in [a, b] {
            identities &= ssim(f, f).unwrap() == 1.0 && psnr(f, f, 1.0).unwrap() == f64::INFINITY;
        }
    }
    outcome(
        worst_ssim <= METRIC_TOL && worst_psnr <= METRIC_TOL && identities,
        format!(
            "{} pairs, max |Δssim| {worst_ssim:.3e}, max |Δpsnr| {worst_psnr:.3e} dB, identities {}",
            images.len(),
            if identities { "hold" } else { "broken" }
        ),
    )
}

fn collect_outputs(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
                continue;
            }
            let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
            if matches!(ext, "csv" | "pgm" | "ppm") {
                let rel = path
                    .strip_prefix(dir)
                    .unwrap()
                    .to_string_lossy()
                    .into_owned();
                out.insert(rel, fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    fs::write(
        &config,
        r#"{"sweep": [4, 12], "seeds": [1, 2, 3], "spatial_beta": true}"#,
    )
    .unwrap();
    let mut runs = Vec::new();
    for (k, threads) in ["1", "8", "1", "8"].iter().enumerate() {
        let out = dir.path().join(format!("run{k}"));
        let status = Command::new(env!("CARGO_BIN_EXE_defog"))
            .arg("pipeline")
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .env("DEFOG_THREADS", threads)
            .output()
            .unwrap();
        if !status.status.success() {
            return outcome(
                false,
                format!(
                    "pipeline failed: {}",
                    String::from_utf8_lossy(&status.stderr)
                ),
            );
        }
        runs.push(collect_outputs(&out));
    }
    let identical = runs.windows(2).all(|w| w[0] == w[1]);
    let n_files = runs[0].len();
    outcome(
        identical && n_files > 1,
        format!("{n_files} CSV/image files compared across 4 runs (threads 1, 8, 1, 8)"),
    )
}

fn random_frame(rng: &mut ChaCha8Rng, channels: usize, maxval: u16) -> Frame {
    let (w, h) = (rng.random_range(1..=16), rng.random_range(1..=16));
    let scale = f64::from(maxval);
    Frame::from_fn(w, h, channels, |_, _, _| {
        f64::from(rng.random_range(0..=maxval)) / scale
    })
    .unwrap()
}

fn mutate(rng: &mut ChaCha8Rng, bytes: &[u8]) -> Vec<u8> {
    let mut out = bytes.to_vec();
    let header_end = out.len().min(24);
    let interesting = [
        b' ', b'\n', b'#', b'0', b'9', b'-', b'P', 0xff, 0x00, b'+', b'\t',
    ];
    for _ in 0..rng.random_range(1..=3) {
        let pos = rng
            .random_range(0..header_end.max(1))
            .min(out.len().saturating_sub(1));
        match rng.random_range(0..6) {
            0 if !out.is_empty() => out[pos] = *interesting.choose(rng).unwrap(),
            1 if !out.is_empty() => out[pos] ^= 1 << rng.random_range(0..8),
            2 if !out.is_empty() => {
                out.remove(pos);
            }
            3 => out.insert(pos.min(out.len()), *interesting.choose(rng).unwrap()),
            4 => out.truncate(rng.random_range(0..=out.len())),
            _ => {
                let digits: Vec<u8> = format!("{}", rng.random::<u64>()).into_bytes();
                let at = pos.min(out.len());
                out.splice(at..at, digits);
            }
        }
    }
    out
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut round_trips = 0usize;
    let mut mismatches = 0usize;
    let mut seeds = Vec::new();
    for _ in 0..100 {
        for format in PnmFormat::ALL {
            for maxval in [255u16, 65535] {
                let frame = random_frame(&mut rng, format.channels(), maxval);
                let bytes = write_pnm(&frame, format, maxval).unwrap();
                let back = read_pnm(&bytes).unwrap();
                let again = write_pnm(&back, format, maxval).unwrap();
                if back != frame || again != bytes {
                    mismatches += 1;
                }
                round_trips += 1;
                if seeds.len() < 64 {
                    seeds.push(bytes);
                }
            }
        }
    }
    let quiet = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut panics = 0usize;
    let mut errors = 0usize;
    let mut inconsistent = 0usize;
    for _ in 0..1000 {
        let base = seeds.choose(&mut rng).unwrap();
        let mutated = mutate(&mut rng, base);
        match panic::catch_unwind(AssertUnwindSafe(|| decode_pnm(&mutated))) {
            Err(_) => panics += 1,
            Ok(Err(_)) => errors += 1,
            Ok(Ok(img)) => {
                let expected = img.width * img.height * img.format.channels();
                if img.samples.len() != expected || img.samples.iter().any(|&s| s > img.maxval) {
                    inconsistent += 1;
                }
            }
        }
    }
    panic::set_hook(quiet);
    outcome(
        mismatches == 0 && panics == 0 && inconsistent == 0,
        format!(
            "{round_trips} round trips, {mismatches} mismatches; fuzz 1000 cases: {errors} errors, \
             {panics} panics, {inconsistent} inconsistent decodes"
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", criterion_1),
        ("closed forms", criterion_2),
        ("static limit", criterion_3),
        ("ambient suppression", criterion_4),
        ("defogging improvement", criterion_5),
        ("measurement-count trend", criterion_6),
        ("brightness", criterion_7),
        ("metrics correctness", criterion_8),
        ("determinism", criterion_9),
        ("codec robustness", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<24} {}  {}",
            i + 1,
            name,
            if result.pass { "PASS" } else { "FAIL" },
            result.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
