//! Defogging by temporal correlation of measurement events.
//!
//! Frames are grouped into event pairs `(a, b)`. Photon-number correlation
//! averages `I_a · I_b` per pixel. Photon-number fluctuation correlation splits
//! every event into positive and negative fluctuations around the per-set means
//! `p̄₁` (first members of the pairs) and `p̄₂` (second members) and averages
//!
//! ```text
//! |(p̄₁ - Δp₁⁺)(p̄₂ - Δp₂⁺)| + |(p̄₁ - Δp₁⁻)(p̄₂ - Δp₂⁻)|
//!   + |(p̄₁ - Δp₁⁺)(p̄₂ - Δp₂⁻)| + |(p̄₁ - Δp₁⁻)(p̄₂ - Δp₂⁺)|
//! ```
//!
//! over the pairs. Both run independently per pixel and per channel.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Algorithm, Normalization, Pairing, ReconConfig};
use crate::error::{Error, Result};
use crate::frame::{mean_frame, Frame, FrameSequence};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSet {
    pairs: Vec<(usize, usize)>,
    strategy: Pairing,
}

impl PairSet {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn strategy(&self) -> Pairing {
        self.strategy
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Builds an arbitrary pair list, e.g. a reordering of [`make_pairs`].
    pub fn from_pairs(
        pairs: Vec<(usize, usize)>,
        strategy: Pairing,
        n_frames: usize,
    ) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= b || b >= n_frames) {
            return Err(Error::InvalidParameter {
                name: "pairs",
                reason: format!("pair ({a}, {b}) invalid for {n_frames} frames"),
            });
        }
        Ok(Self { pairs, strategy })
    }

    fn check(&self, n_frames: usize) -> Result<()> {
        if self.pairs.iter().any(|&(_, b)| b >= n_frames) {
            return Err(Error::TooFewFrames(n_frames));
        }
        Ok(())
    }
}

pub fn make_pairs(n_frames: usize, strategy: Pairing) -> Result<PairSet> {
    if n_frames < 2 {
        return Err(Error::TooFewFrames(n_frames));
    }
    let pairs = match strategy {
        Pairing::DisjointAdjacent => (0..n_frames / 2).map(|a| (2 * a, 2 * a + 1)).collect(),
        Pairing::Sliding => (0..n_frames - 1).map(|a| (a, a + 1)).collect(),
    };
    Ok(PairSet { pairs, strategy })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconResult {
    /// Reconstruction after display normalization.
    pub image: Frame,
    /// Estimator output before normalization.
    pub raw: Frame,
    pub n_pairs: usize,
    pub algorithm: Algorithm,
    pub normalization: Normalization,
}

/// Per-sample kernel over the whole sequence; parallel across samples only, so
/// the result never depends on the thread count.
fn per_sample(seq: &FrameSequence, kernel: impl Fn(usize) -> f64 + Sync + Send) -> Result<Frame> {
    let (w, h, c) = seq.shape();
    let pixels: Vec<f64> = (0..w * h * c).into_par_iter().map(kernel).collect();
    Frame::new(w, h, c, pixels)
}

/// Average of `I_a · I_b` over the event pairs.
pub fn pnc_raw(seq: &FrameSequence, pairs: &PairSet) -> Result<Frame> {
    pairs.check(seq.len())?;
    let frames = seq.frames();
    let n = pairs.len() as f64;
    per_sample(seq, |i| {
        pairs
            .pairs()
            .iter()
            .map(|&(a, b)| frames[a].pixels()[i] * frames[b].pixels()[i])
            .sum::<f64>()
            / n
    })
}

/// Pixelwise means of the first and of the second members of the pairs.
pub fn partition_means(seq: &FrameSequence, pairs: &PairSet) -> Result<(Frame, Frame)> {
    if seq.len() < 2 {
        return Err(Error::TooFewFrames(seq.len()));
    }
    pairs.check(seq.len())?;
    let frames = seq.frames();
    let first = mean_frame(pairs.pairs().iter().map(|&(a, _)| &frames[a]))?;
    let second = mean_frame(pairs.pairs().iter().map(|&(_, b)| &frames[b]))?;
    Ok((first, second))
}

/// Splits `p - mean` into its positive part and its negative part. At most one
/// of the two is nonzero.
pub fn classify_fluctuation(p: f64, mean: f64) -> (f64, f64) {
    if p > mean {
        (p - mean, 0.0)
    } else if p < mean {
        (0.0, p - mean)
    } else {
        (0.0, 0.0)
    }
}

/// Four-branch fluctuation correlation term of one event pair.
#[inline]
pub fn fluctuation_terms(p1: f64, mean1: f64, p2: f64, mean2: f64) -> f64 {
    let (up1, down1) = classify_fluctuation(p1, mean1);
    let (up2, down2) = classify_fluctuation(p2, mean2);
    ((mean1 - up1) * (mean2 - up2)).abs()
        + ((mean1 - down1) * (mean2 - down2)).abs()
        + ((mean1 - up1) * (mean2 - down2)).abs()
        + ((mean1 - down1) * (mean2 - up2)).abs()
}

pub fn pnfc_raw(seq: &FrameSequence, pairs: &PairSet) -> Result<Frame> {
    let (first, second) = partition_means(seq, pairs)?;
    let frames = seq.frames();
    let n = pairs.len() as f64;
    per_sample(seq, |i| {
        let (m1, m2) = (first.pixels()[i], second.pixels()[i]);
        pairs
            .pairs()
            .iter()
            .map(|&(a, b)| fluctuation_terms(frames[a].pixels()[i], m1, frames[b].pixels()[i], m2))
            .sum::<f64>()
            / n
    })
}

pub fn pnc_reconstruct(
    seq: &FrameSequence,
    pairs: &PairSet,
    normalization: Normalization,
) -> Result<ReconResult> {
    let raw = pnc_raw(seq, pairs)?;
    finish(seq, raw, pairs.len(), Algorithm::Pnc, normalization)
}

pub fn pnfc_reconstruct(
    seq: &FrameSequence,
    pairs: &PairSet,
    normalization: Normalization,
) -> Result<ReconResult> {
    let raw = pnfc_raw(seq, pairs)?;
    finish(seq, raw, pairs.len(), Algorithm::Pnfc, normalization)
}

/// Temporal mean of all frames: what a long exposure would record.
pub fn baseline_mean(seq: &FrameSequence, normalization: Normalization) -> Result<ReconResult> {
    if seq.len() < 2 {
        return Err(Error::TooFewFrames(seq.len()));
    }
    let raw = mean_frame(seq.frames())?;
    finish(seq, raw, 0, Algorithm::Mean, normalization)
}

pub fn reconstruct(seq: &FrameSequence, config: &ReconConfig) -> Result<ReconResult> {
    match config.algorithm {
        Algorithm::Mean => baseline_mean(seq, config.normalization),
        Algorithm::Pnc => {
            let pairs = make_pairs(seq.len(), config.pairing)?;
            pnc_reconstruct(seq, &pairs, config.normalization)
        }
        Algorithm::Pnfc => {
            let pairs = make_pairs(seq.len(), config.pairing)?;
            pnfc_reconstruct(seq, &pairs, config.normalization)
        }
    }
}

fn finish(
    seq: &FrameSequence,
    raw: Frame,
    n_pairs: usize,
    algorithm: Algorithm,
    normalization: Normalization,
) -> Result<ReconResult> {
    let image = match normalization {
        Normalization::Peak => {
            let levels: Vec<f64> = seq
                .channel_peaks()
                .into_iter()
                .map(|p| peak_response(algorithm, p))
                .collect();
            scale_by_levels(&raw, &levels)?
        }
        mode => normalize_display(&raw, mode)?,
    };
    Ok(ReconResult {
        image,
        raw,
        n_pairs,
        algorithm,
        normalization,
    })
}

/// Estimator output for a sequence held constant at `peak`.
pub fn peak_response(algorithm: Algorithm, peak: f64) -> f64 {
    match algorithm {
        Algorithm::Mean => peak,
        Algorithm::Pnc => peak * peak,
        Algorithm::Pnfc => 4.0 * peak * peak,
    }
}

/// Divides each channel by its level and clamps into `[0, 1]`; a zero level maps
/// the channel to 0.
pub fn scale_by_levels(raw: &Frame, levels: &[f64]) -> Result<Frame> {
    let c = raw.channels();
    let (w, h, _) = raw.shape();
    let pixels = raw
        .pixels()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let level = levels[i % c];
            if level > 0.0 {
                (v / level).clamp(0.0, 1.0)
            } else {
                0.0
            }
        })
        .collect();
    Frame::new(w, h, c, pixels)
}

/// Maps raw estimator output into display range, channel by channel.
///
/// `Peak` has no sequence to refer to here and behaves like `None`; use
/// [`reconstruct`] for it.
pub fn normalize_display(raw: &Frame, mode: Normalization) -> Result<Frame> {
    match mode {
        Normalization::None | Normalization::Peak => Ok(raw.clone()),
        Normalization::Minmax => minmax(raw),
        Normalization::SqrtMinmax => minmax(&raw.map(|v| v.max(0.0).sqrt())?),
    }
}

fn minmax(frame: &Frame) -> Result<Frame> {
    let c = frame.channels();
    let mut lo = vec![f64::INFINITY; c];
    let mut hi = vec![f64::NEG_INFINITY; c];
    for (i, &v) in frame.pixels().iter().enumerate() {
        lo[i % c] = lo[i % c].min(v);
        hi[i % c] = hi[i % c].max(v);
    }
    let (w, h, _) = frame.shape();
    let pixels = frame
        .pixels()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let range = hi[i % c] - lo[i % c];
            if range > 0.0 {
                ((v - lo[i % c]) / range).clamp(0.0, 1.0)
            } else {
                0.0
            }
        })
        .collect();
    Frame::new(w, h, c, pixels)
}

/// Summary of a reconstruction, as written next to the output images.
#[derive(Debug, Clone, Serialize)]
pub struct ReconSummary {
    pub algorithm: Algorithm,
    pub pairing: Pairing,
    pub n_pairs: usize,
    pub normalization: Normalization,
}
