//! Image quality metrics on `[0, 1]` frames.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::Frame;

const WINDOW: usize = 11;
const SIGMA: f64 = 1.5;
const K1: f64 = 0.01;
const K2: f64 = 0.03;
const DYNAMIC_RANGE: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub ssim: f64,
    /// `f64::INFINITY` for identical images.
    pub psnr_db: f64,
    pub mse: f64,
    pub mean_brightness_candidate: f64,
    pub mean_brightness_reference: f64,
    pub contrast_candidate: f64,
}

fn check_range(frame: &Frame) -> Result<()> {
    match frame.pixels().iter().find(|&&v| v > 1.0) {
        Some(&value) => Err(Error::RangeError { value }),
        None => Ok(()),
    }
}

pub fn mse(a: &Frame, b: &Frame) -> Result<f64> {
    a.ensure_same_shape(b)?;
    check_range(a)?;
    check_range(b)?;
    let sum: f64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / a.len() as f64)
}

pub fn psnr_from_mse(mse: f64, peak: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (peak * peak / mse).log10()
    }
}

pub fn psnr(a: &Frame, b: &Frame, peak: f64) -> Result<f64> {
    Ok(psnr_from_mse(mse(a, b)?, peak))
}

fn gaussian_kernel() -> [f64; WINDOW] {
    let mut k = [0.0; WINDOW];
    let half = (WINDOW / 2) as f64;
    for (i, v) in k.iter_mut().enumerate() {
        let x = i as f64 - half;
        *v = (-(x * x) / (2.0 * SIGMA * SIGMA)).exp();
    }
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

/// Separable Gaussian filter restricted to positions where the window fits.
fn filter_valid(plane: &[f64], width: usize, height: usize, kernel: &[f64; WINDOW]) -> Vec<f64> {
    let ow = width - WINDOW + 1;
    let oh = height - WINDOW + 1;
    let mut rows = vec![0.0; ow * height];
    for y in 0..height {
        let line = &plane[y * width..(y + 1) * width];
        for x in 0..ow {
            rows[y * ow + x] = kernel
                .iter()
                .zip(&line[x..x + WINDOW])
                .map(|(k, v)| k * v)
                .sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            out[y * ow + x] = kernel
                .iter()
                .enumerate()
                .map(|(j, k)| k * rows[(y + j) * ow + x])
                .sum();
        }
    }
    out
}

fn ssim_plane(x: &[f64], y: &[f64], width: usize, height: usize) -> f64 {
    let kernel = gaussian_kernel();
    let c1 = (K1 * DYNAMIC_RANGE).powi(2);
    let c2 = (K2 * DYNAMIC_RANGE).powi(2);
    let xx: Vec<f64> = x.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(y).map(|(a, b)| a * b).collect();
    let mu_x = filter_valid(x, width, height, &kernel);
    let mu_y = filter_valid(y, width, height, &kernel);
    let e_xx = filter_valid(&xx, width, height, &kernel);
    let e_yy = filter_valid(&yy, width, height, &kernel);
    let e_xy = filter_valid(&xy, width, height, &kernel);
    let n = mu_x.len();
    let mut total = 0.0;
    for i in 0..n {
        let (mx, my) = (mu_x[i], mu_y[i]);
        let var_x = e_xx[i] - mx * mx;
        let var_y = e_yy[i] - my * my;
        let cov = e_xy[i] - mx * my;
        total += ((2.0 * mx * my + c1) * (2.0 * cov + c2))
            / ((mx * mx + my * my + c1) * (var_x + var_y + c2));
    }
    total / n as f64
}

/// Gaussian-window SSIM (11×11, σ = 1.5, K₁ = 0.01, K₂ = 0.03, L = 1), averaged
/// over valid window positions and then over channels.
pub fn ssim(a: &Frame, b: &Frame) -> Result<f64> {
    a.ensure_same_shape(b)?;
    let (w, h, c) = a.shape();
    if w < WINDOW || h < WINDOW {
        return Err(Error::TooSmall {
            width: w,
            height: h,
        });
    }
    check_range(a)?;
    check_range(b)?;
    let total: f64 = (0..c)
        .map(|ch| {
            let x: Vec<f64> = a.channel(ch).collect();
            let y: Vec<f64> = b.channel(ch).collect();
            ssim_plane(&x, &y, w, h)
        })
        .sum();
    Ok(total / c as f64)
}

/// Mean pixel value and Michelson contrast `(max - min) / (max + min)`.
pub fn brightness_contrast(frame: &Frame) -> (f64, f64) {
    let px = frame.pixels();
    let mean = px.iter().sum::<f64>() / px.len() as f64;
    let (lo, hi) = px
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let contrast = if hi + lo > 0.0 {
        (hi - lo) / (hi + lo)
    } else {
        0.0
    };
    (mean, contrast)
}

pub fn evaluate(candidate: &Frame, reference: &Frame) -> Result<MetricsReport> {
    let mse = mse(candidate, reference)?;
    let ssim = ssim(candidate, reference)?;
    let (mean_c, contrast_c) = brightness_contrast(candidate);
    let (mean_r, _) = brightness_contrast(reference);
    Ok(MetricsReport {
        ssim,
        psnr_db: psnr_from_mse(mse, 1.0),
        mse,
        mean_brightness_candidate: mean_c,
        mean_brightness_reference: mean_r,
        contrast_candidate: contrast_c,
    })
}
