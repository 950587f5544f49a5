//! File formats: PNM images, CSV reports and on-disk frame sequences.

mod pnm;
mod report;
mod sequence;

use std::fs;
use std::path::Path;

pub use pnm::{decode_pnm, read_pnm, write_pnm, PnmError, PnmFormat, PnmImage};
pub use report::{format_sig9, write_csv_report, ClosedForm, ReportRow, COLUMNS};
pub use sequence::{frame_path, read_sequence, write_sequence, SequenceSidecar, SIDECAR};

use crate::error::Result;
use crate::frame::Frame;

pub fn load_image(path: &Path) -> Result<Frame> {
    read_pnm(&fs::read(path)?)
}

/// Writes a `[0, 1]` frame in the raw format matching its channel count.
pub fn save_image(path: &Path, frame: &Frame, maxval: u16) -> Result<()> {
    let bytes = write_pnm(frame, PnmFormat::raw_for(frame.channels()), maxval)?;
    fs::write(path, bytes)?;
    Ok(())
}
