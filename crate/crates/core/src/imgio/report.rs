//! CSV metrics reports.

use crate::config::{Algorithm, Normalization};
use crate::error::Result;
use crate::metrics::MetricsReport;

pub const COLUMNS: [&str; 13] = [
    "label",
    "algorithm",
    "normalization",
    "n_frames",
    "n_pairs",
    "seed",
    "ssim",
    "psnr_db",
    "mse",
    "mean_brightness_candidate",
    "mean_brightness_reference",
    "contrast_candidate",
    "closed_form",
];

/// Outcome of the zero-fluctuation closed-form check on a sweep cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    Pass,
    Fail,
    /// The sequence fluctuates, so no closed form applies.
    NotApplicable,
}

impl ClosedForm {
    fn as_str(self) -> &'static str {
        match self {
            ClosedForm::Pass => "pass",
            ClosedForm::Fail => "fail",
            ClosedForm::NotApplicable => "n/a",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub label: String,
    pub algorithm: Option<Algorithm>,
    pub normalization: Option<Normalization>,
    pub n_frames: Option<usize>,
    pub n_pairs: Option<usize>,
    pub seed: Option<u64>,
    pub metrics: MetricsReport,
    pub closed_form: ClosedForm,
}

/// `%.9g`-style formatting; infinities are written as `inf` / `-inf`.
pub fn format_sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

pub fn write_csv_report(rows: &[ReportRow]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    w.write_record(COLUMNS)?;
    for row in rows {
        let m = &row.metrics;
        w.write_record([
            row.label.clone(),
            opt(&row.algorithm),
            opt(&row.normalization),
            opt(&row.n_frames),
            opt(&row.n_pairs),
            opt(&row.seed),
            format_sig9(m.ssim),
            format_sig9(m.psnr_db),
            format_sig9(m.mse),
            format_sig9(m.mean_brightness_candidate),
            format_sig9(m.mean_brightness_reference),
            format_sig9(m.contrast_candidate),
            row.closed_form.as_str().to_string(),
        ])?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}
