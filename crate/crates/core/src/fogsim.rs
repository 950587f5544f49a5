//! Synthetic time-variant fog.
//!
//! A frame is the superposition of the attenuated target (scattering light) and
//! airlight (ambient light), both driven by a scattering coefficient that is
//! redrawn for every measurement event:
//!
//! ```text
//! I(t) = target · e^{-β(t)·d} + k · ambient_mean · (1 - e^{-β(t)·d}) · f(t, x)
//! ```
//!
//! `f` is an independent per-pixel, per-frame factor around 1, so the airlight
//! carries no correlation between two measurement events. With `shot_noise` on,
//! each pixel is then replaced by a Poisson count with that mean.

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::FogParams;
use crate::error::{Error, Result};
use crate::frame::{Frame, FrameSequence, Timing};
use crate::recon::PairSet;
use crate::rng::{substream, Purpose};

/// Default relative-deviation threshold for the fluctuation condition.
pub const DEFAULT_EPSILON: f64 = 1e-3;

pub fn transmission(beta: f64, d: f64) -> Result<f64> {
    if beta < 0.0 || beta.is_nan() {
        return Err(Error::NegativeInput("beta"));
    }
    if d < 0.0 || d.is_nan() {
        return Err(Error::NegativeInput("d"));
    }
    Ok((-beta * d).exp())
}

/// Scattering coefficient of one measurement event.
#[derive(Debug, Clone, PartialEq)]
pub enum BetaField {
    Uniform(f64),
    /// One value per pixel, row-major, shared by all channels.
    PerPixel {
        width: usize,
        height: usize,
        values: Vec<f64>,
    },
}

impl BetaField {
    fn transmissions(&self, width: usize, height: usize, d: f64) -> Result<Vec<f64>> {
        match self {
            BetaField::Uniform(beta) => Ok(vec![transmission(*beta, d)?; width * height]),
            BetaField::PerPixel {
                width: w,
                height: h,
                values,
            } => {
                if (*w, *h) != (width, height) {
                    return Err(Error::ShapeMismatch {
                        expected: (width, height, 1),
                        found: (*w, *h, 1),
                    });
                }
                values.iter().map(|&b| transmission(b, d)).collect()
            }
        }
    }
}

/// Normal(mean, sd) conditioned on being nonnegative, by rejection.
pub(crate) fn truncated_normal<R: Rng + ?Sized>(rng: &mut R, mean: f64, sd: f64) -> f64 {
    if sd == 0.0 {
        return mean;
    }
    loop {
        let z: f64 = StandardNormal.sample(rng);
        let x = mean + sd * z;
        if x >= 0.0 {
            return x;
        }
    }
}

/// Draws the scattering coefficient for one frame from the truncated normal
/// around `beta0` with standard deviation `beta_sigma · beta0`.
pub fn sample_beta<R: Rng + ?Sized>(
    params: &FogParams,
    rng: &mut R,
    width: usize,
    height: usize,
) -> BetaField {
    let sd = params.beta_sigma * params.beta0;
    if params.spatial_beta {
        let values = (0..width * height)
            .map(|_| truncated_normal(rng, params.beta0, sd))
            .collect();
        BetaField::PerPixel {
            width,
            height,
            values,
        }
    } else {
        BetaField::Uniform(truncated_normal(rng, params.beta0, sd))
    }
}

/// Target attenuated by the medium: `target · e^{-β·d}` per pixel.
pub fn scattering_component(target: &Frame, beta: &BetaField, d: f64) -> Result<Frame> {
    let (w, h, c) = target.shape();
    let trans = beta.transmissions(w, h, d)?;
    let pixels = target
        .pixels()
        .iter()
        .enumerate()
        .map(|(i, &p)| p * trans[i / c])
        .collect();
    Frame::new(w, h, c, pixels)
}

/// Airlight `k · ambient_mean · (1 - e^{-β·d})` modulated per pixel by an
/// independent truncated-normal factor around 1.
pub fn ambient_component<R: Rng + ?Sized>(
    params: &FogParams,
    beta: &BetaField,
    d: f64,
    rng: &mut R,
    shape: (usize, usize, usize),
) -> Result<Frame> {
    let (w, h, c) = shape;
    let trans = beta.transmissions(w, h, d)?;
    let level = params.k_factor * params.ambient_mean;
    let mut pixels = Vec::with_capacity(w * h * c);
    for t in trans {
        let factor = truncated_normal(rng, 1.0, params.ambient_sigma);
        let value = level * (1.0 - t) * factor;
        pixels.extend(std::iter::repeat_n(value, c));
    }
    Frame::new(w, h, c, pixels)
}

/// Noiseless superposition `S + A` for a given medium state.
pub fn superpose(scattering: &Frame, ambient: &Frame) -> Result<Frame> {
    scattering.ensure_same_shape(ambient)?;
    let (w, h, c) = scattering.shape();
    Frame::new(
        w,
        h,
        c,
        scattering
            .pixels()
            .iter()
            .zip(ambient.pixels())
            .map(|(s, a)| s + a)
            .collect(),
    )
}

pub(crate) fn poisson_count<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    match Poisson::new(mean) {
        Ok(dist) => dist.sample(rng),
        // Beyond the sampler's range the count is indistinguishable from its mean.
        Err(_) => mean.round(),
    }
}

/// Renders measurement event `frame_index` from its own RNG substreams.
pub fn render_frame(target: &Frame, params: &FogParams, frame_index: u64) -> Result<Frame> {
    let (w, h, _) = target.shape();
    let mut beta_rng = substream(params.seed, frame_index, Purpose::Beta);
    let beta = sample_beta(params, &mut beta_rng, w, h);
    let scattering = scattering_component(target, &beta, params.d)?;
    let mut ambient_rng = substream(params.seed, frame_index, Purpose::Ambient);
    let ambient = ambient_component(params, &beta, params.d, &mut ambient_rng, target.shape())?;
    let frame = superpose(&scattering, &ambient)?;
    if !params.shot_noise {
        return Ok(frame);
    }
    let mut shot_rng = substream(params.seed, frame_index, Purpose::Shot);
    frame.map(|mean| poisson_count(&mut shot_rng, mean))
}

/// Static single-exposure value `target · e^{-β₀d} + k · ambient_mean · (1 - e^{-β₀d})`.
pub fn static_model(target: &Frame, params: &FogParams) -> Result<Frame> {
    let t = transmission(params.beta0, params.d)?;
    let air = params.k_factor * params.ambient_mean * (1.0 - t);
    target.map(|p| p * t + air)
}

/// Renders `params.n_frames` frames. The coherence time is set to zero because
/// the airlight decorrelates between any two frames by construction.
pub fn simulate_sequence(
    target: &Frame,
    params: &FogParams,
    timing: Timing,
) -> Result<FrameSequence> {
    params.validate()?;
    let frames = (0..params.n_frames as u64)
        .into_par_iter()
        .map(|i| render_frame(target, params, i))
        .collect::<Result<Vec<_>>>()?;
    FrameSequence::new(
        frames,
        Timing {
            coherence_time_s: 0.0,
            ..timing
        },
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    /// Frames show photon-number fluctuation: `⟨I₁⟩ ≠ ⟨I₂⟩`.
    pub condition_i_holds: bool,
    /// Adjacent events are farther apart than the coherence time.
    pub condition_ii_holds: bool,
    /// Relative standard deviation of the per-frame mean intensities.
    pub mean_frame_deviation: f64,
    /// Lag-1 temporal autocorrelation of per-pixel residuals, averaged over pixels.
    pub ambient_autocorr: f64,
    pub epsilon: f64,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.condition_i_holds && self.condition_ii_holds
    }
}

pub fn check_conditions(seq: &FrameSequence, epsilon: f64) -> Result<ConditionReport> {
    let n = seq.len();
    if n < 2 {
        return Err(Error::TooFewFrames(n));
    }
    let means: Vec<f64> = seq
        .frames()
        .iter()
        .map(|f| f.pixels().iter().sum::<f64>() / f.len() as f64)
        .collect();
    let grand = means.iter().sum::<f64>() / n as f64;
    let var = means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / n as f64;
    let mean_frame_deviation = if grand > 0.0 { var.sqrt() / grand } else { 0.0 };

    let samples = seq.frames()[0].len();
    let (sum, count) = (0..samples)
        .into_par_iter()
        .filter_map(|i| {
            let series: Vec<f64> = seq.frames().iter().map(|f| f.pixels()[i]).collect();
            lag1_autocorr(&series)
        })
        .fold(|| (0.0, 0usize), |(s, c), r| (s + r, c + 1))
        .reduce(|| (0.0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let ambient_autocorr = if count > 0 {
        (sum / count as f64).clamp(-1.0, 1.0)
    } else {
        0.0
    };

    let timing = seq.timing();
    Ok(ConditionReport {
        condition_i_holds: mean_frame_deviation > epsilon,
        condition_ii_holds: timing.interval_s > timing.coherence_time_s,
        mean_frame_deviation,
        ambient_autocorr,
        epsilon,
    })
}

/// `Σ r_t r_{t+1} / Σ r_t²` of the mean-removed series; `None` for a constant series.
pub fn lag1_autocorr(series: &[f64]) -> Option<f64> {
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let den: f64 = series.iter().map(|v| (v - mean).powi(2)).sum();
    if den <= 0.0 {
        return None;
    }
    let num: f64 = series
        .windows(2)
        .map(|w| (w[0] - mean) * (w[1] - mean))
        .sum();
    Some(num / den)
}

/// Pair correlation of one pixel sample across event pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCorrelation {
    /// `⟨S₁S₂⟩ / (⟨S₁⟩⟨S₂⟩)` with set means over the pairs.
    pub mean_ratio: f64,
    /// `⟨S₁S₂⟩ / sqrt(⟨S₁²⟩⟨S₂²⟩)`; strictly below 1 unless the two sets are
    /// proportional.
    pub normalized: f64,
}

pub fn pair_correlation(seq: &FrameSequence, pairs: &PairSet, sample: usize) -> PairCorrelation {
    let frames = seq.frames();
    let n = pairs.len() as f64;
    let (mut s12, mut s1, mut s2, mut s11, mut s22) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(a, b) in pairs.pairs() {
        let x = frames[a].pixels()[sample];
        let y = frames[b].pixels()[sample];
        s12 += x * y;
        s1 += x;
        s2 += y;
        s11 += x * x;
        s22 += y * y;
    }
    PairCorrelation {
        mean_ratio: (s12 / n) / ((s1 / n) * (s2 / n)),
        normalized: s12 / (s11 * s22).sqrt(),
    }
}
