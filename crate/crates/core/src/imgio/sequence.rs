//! Frame sequences on disk: `frame_000000.pgm`, `frame_000001.pgm`, … plus a
//! `sequence.json` sidecar.
//!
//! Frames hold photon counts; a sample of `maxval` stands for `full_scale`
//! counts. `full_scale` defaults to `maxval` so integer counts are stored exactly.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::pnm::{decode_pnm, write_pnm, PnmFormat};
use crate::config::FogParams;
use crate::error::{Error, Result};
use crate::frame::{Frame, FrameSequence, Timing};

pub const SIDECAR: &str = "sequence.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceSidecar {
    pub n_frames: usize,
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub maxval: u16,
    /// Photon count represented by a sample equal to `maxval`.
    pub full_scale: f64,
    #[serde(flatten)]
    pub timing: Timing,
    #[serde(default)]
    pub fog_params: Option<FogParams>,
}

pub fn frame_path(dir: &Path, index: usize, channels: usize) -> PathBuf {
    let ext = PnmFormat::raw_for(channels).extension();
    dir.join(format!("frame_{index:06}.{ext}"))
}

pub fn write_sequence(
    dir: &Path,
    seq: &FrameSequence,
    maxval: u16,
    fog_params: Option<&FogParams>,
) -> Result<SequenceSidecar> {
    fs::create_dir_all(dir)?;
    let (width, height, channels) = seq.shape();
    let peak = seq.frames().iter().map(Frame::max).fold(0.0, f64::max);
    let full_scale = f64::from(maxval).max(peak.ceil());
    let format = PnmFormat::raw_for(channels);
    for (i, frame) in seq.frames().iter().enumerate() {
        let normalized = frame.scaled(1.0 / full_scale)?;
        fs::write(
            frame_path(dir, i, channels),
            write_pnm(&normalized, format, maxval)?,
        )?;
    }
    let sidecar = SequenceSidecar {
        n_frames: seq.len(),
        width,
        height,
        channels,
        maxval,
        full_scale,
        timing: seq.timing(),
        fog_params: fog_params.cloned(),
    };
    fs::write(
        dir.join(SIDECAR),
        serde_json::to_string_pretty(&sidecar)? + "\n",
    )?;
    Ok(sidecar)
}

pub fn read_sequence(dir: &Path) -> Result<(FrameSequence, SequenceSidecar)> {
    let sidecar: SequenceSidecar = serde_json::from_slice(&fs::read(dir.join(SIDECAR))?)?;
    if !(sidecar.full_scale > 0.0 && sidecar.full_scale.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "full_scale",
            reason: format!("must be > 0, got {}", sidecar.full_scale),
        });
    }
    let mut frames = Vec::with_capacity(sidecar.n_frames);
    for i in 0..sidecar.n_frames {
        let path = frame_path(dir, i, sidecar.channels);
        let img = decode_pnm(&fs::read(&path)?)?;
        let scale = sidecar.full_scale / f64::from(img.maxval);
        let frame = Frame::new(
            img.width,
            img.height,
            img.format.channels(),
            img.samples.iter().map(|&s| f64::from(s) * scale).collect(),
        )?;
        frames.push(frame);
    }
    let seq = FrameSequence::new(frames, sidecar.timing)?;
    if seq.shape() != (sidecar.width, sidecar.height, sidecar.channels) {
        return Err(Error::ShapeMismatch {
            expected: (sidecar.width, sidecar.height, sidecar.channels),
            found: seq.shape(),
        });
    }
    Ok((seq, sidecar))
}
