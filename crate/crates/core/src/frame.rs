//! Frames and frame sequences.
//!
//! A [`Frame`] is one measurement event: a `width × height × channels` grid of
//! nonnegative photon counts stored row-major with interleaved channels, so the
//! sample for pixel `(x, y)` and channel `c` lives at `(y * width + x) * channels + c`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    width: usize,
    height: usize,
    channels: usize,
    pixels: Vec<f64>,
}

impl Frame {
    pub fn new(width: usize, height: usize, channels: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::BadGeometry(format!("{width}x{height}")));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::BadGeometry(format!("{channels} channels")));
        }
        if pixels.len() != width * height * channels {
            return Err(Error::BadGeometry(format!(
                "{} samples for {width}x{height}x{channels}",
                pixels.len()
            )));
        }
        check_pixels(&pixels)?;
        Ok(Self {
            width,
            height,
            channels,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: f64) -> Result<Self> {
        Self::new(
            width,
            height,
            channels,
            vec![value; width * height * channels],
        )
    }

    /// Builds a frame from a closure over `(x, y, channel)`.
    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height * channels);
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    pixels.push(f(x, y, c));
                }
            }
        }
        Self::new(width, height, channels, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.width, self.height, self.channels)
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.pixels[(y * self.width + x) * self.channels + c]
    }

    /// Samples of one channel in row-major order.
    pub fn channel(&self, c: usize) -> impl Iterator<Item = f64> + '_ {
        self.pixels.iter().skip(c).step_by(self.channels).copied()
    }

    /// Applies `f` to every sample. The result must stay nonnegative and finite.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Result<Frame> {
        Frame::new(
            self.width,
            self.height,
            self.channels,
            self.pixels.iter().map(|&p| f(p)).collect(),
        )
    }

    pub fn scaled(&self, factor: f64) -> Result<Frame> {
        self.map(|p| p * factor)
    }

    pub fn max(&self) -> f64 {
        self.pixels.iter().copied().fold(0.0, f64::max)
    }

    pub(crate) fn ensure_same_shape(&self, other: &Frame) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.shape(),
                found: other.shape(),
            });
        }
        Ok(())
    }
}

fn check_pixels(pixels: &[f64]) -> Result<()> {
    match pixels
        .iter()
        .enumerate()
        .find(|(_, p)| !(p.is_finite() && **p >= 0.0))
    {
        Some((index, &value)) => Err(Error::NegativePixel { index, value }),
        None => Ok(()),
    }
}

/// Timing metadata of a sequence, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Timing {
    /// Exposure of one measurement event.
    pub integration_time_s: f64,
    /// Spacing between adjacent measurement events.
    pub interval_s: f64,
    /// Coherence time of the light field.
    pub coherence_time_s: f64,
}

impl Default for Timing {
    fn default() -> Self {
        Self {
            integration_time_s: 1.0 / 30.0,
            interval_s: 1.0,
            coherence_time_s: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameSequence {
    frames: Vec<Frame>,
    timing: Timing,
}

impl FrameSequence {
    pub fn new(frames: Vec<Frame>, timing: Timing) -> Result<Self> {
        validate_sequence(&frames, &timing)?;
        Ok(Self { frames, timing })
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn timing(&self) -> Timing {
        self.timing
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        self.frames[0].shape()
    }

    /// Per-channel maximum over every frame, used as the detector's peak reading.
    pub fn channel_peaks(&self) -> Vec<f64> {
        let channels = self.frames[0].channels();
        let mut peaks = vec![0.0f64; channels];
        for frame in &self.frames {
            for (i, &p) in frame.pixels().iter().enumerate() {
                let c = i % channels;
                peaks[c] = peaks[c].max(p);
            }
        }
        peaks
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let frames = self
            .frames
            .iter()
            .map(|f| f.scaled(factor))
            .collect::<Result<Vec<_>>>()?;
        Self::new(frames, self.timing)
    }
}

/// Checks every sequence invariant: at least two frames of one shape with valid
/// pixels, and positive timing.
pub fn validate_sequence(frames: &[Frame], timing: &Timing) -> Result<()> {
    if frames.len() < 2 {
        return Err(Error::TooFewFrames(frames.len()));
    }
    let first = &frames[0];
    for frame in &frames[1..] {
        first.ensure_same_shape(frame)?;
    }
    for frame in frames {
        check_pixels(frame.pixels())?;
    }
    if !(timing.integration_time_s > 0.0 && timing.integration_time_s.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "integration_time_s",
            reason: format!("must be > 0, got {}", timing.integration_time_s),
        });
    }
    if !(timing.interval_s > 0.0 && timing.interval_s.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "interval_s",
            reason: format!("must be > 0, got {}", timing.interval_s),
        });
    }
    if !(timing.coherence_time_s >= 0.0 && timing.coherence_time_s.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "coherence_time_s",
            reason: format!("must be >= 0, got {}", timing.coherence_time_s),
        });
    }
    Ok(())
}

/// Pixelwise arithmetic mean of a nonempty list of same-shaped frames.
pub fn mean_frame<'a, I>(frames: I) -> Result<Frame>
where
    I: IntoIterator<Item = &'a Frame>,
{
    let mut iter = frames.into_iter();
    let first = iter.next().ok_or(Error::EmptyInput)?;
    let mut acc = first.pixels().to_vec();
    let mut count = 1usize;
    for frame in iter {
        first.ensure_same_shape(frame)?;
        for (a, &p) in acc.iter_mut().zip(frame.pixels()) {
            *a += p;
        }
        count += 1;
    }
    let inv = count as f64;
    acc.iter_mut().for_each(|a| *a /= inv);
    Frame::new(first.width(), first.height(), first.channels(), acc)
}
