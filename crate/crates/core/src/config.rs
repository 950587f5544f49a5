//! Simulation and reconstruction parameters.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the time-variant fog medium and the detector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FogParams {
    /// Mean scattering coefficient, 1/m.
    pub beta0: f64,
    /// Standard deviation of the scattering coefficient as a fraction of `beta0`.
    pub beta_sigma: f64,
    /// Optical path length, m.
    pub d: f64,
    /// Ambient source intensity in photon counts.
    pub ambient_mean: f64,
    /// Relative per-pixel, per-frame fluctuation of the airlight.
    pub ambient_sigma: f64,
    /// Scattering-type constant of the airlight term.
    pub k_factor: f64,
    pub shot_noise: bool,
    pub seed: u64,
    pub n_frames: usize,
    /// Draw the scattering coefficient per pixel instead of once per frame.
    pub spatial_beta: bool,
}

impl Default for FogParams {
    fn default() -> Self {
        Self {
            beta0: 2.5,
            beta_sigma: 0.3,
            d: 0.6,
            ambient_mean: 800.0,
            ambient_sigma: 0.3,
            k_factor: 1.0,
            shot_noise: true,
            seed: 1,
            n_frames: 20,
            spatial_beta: false,
        }
    }
}

impl FogParams {
    /// All stochastic switches off: every frame equals the static model value.
    pub fn static_limit(mut self) -> Self {
        self.beta_sigma = 0.0;
        self.ambient_sigma = 0.0;
        self.shot_noise = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("beta0", self.beta0),
            ("beta_sigma", self.beta_sigma),
            ("d", self.d),
            ("ambient_mean", self.ambient_mean),
            ("ambient_sigma", self.ambient_sigma),
        ];
        for (name, value) in nonneg {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and >= 0, got {value}"),
                });
            }
        }
        if !(self.k_factor > 0.0 && self.k_factor.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "k_factor",
                reason: format!("must be > 0, got {}", self.k_factor),
            });
        }
        if self.n_frames < 2 {
            return Err(Error::TooFewFrames(self.n_frames));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Temporal average of the frames, the conventional long exposure.
    Mean,
    /// Photon-number correlation.
    Pnc,
    /// Photon-number fluctuation correlation.
    Pnfc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pairing {
    #[serde(rename = "disjoint-adjacent", alias = "disjoint")]
    DisjointAdjacent,
    #[serde(rename = "sliding")]
    Sliding,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Normalization {
    #[serde(rename = "none")]
    None,
    #[serde(rename = "sqrt-minmax")]
    SqrtMinmax,
    #[serde(rename = "minmax")]
    Minmax,
    /// Divide by the estimator's response to a sequence held at the detector
    /// peak, then clamp to `[0, 1]`.
    #[serde(rename = "peak")]
    Peak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReconConfig {
    pub algorithm: Algorithm,
    pub pairing: Pairing,
    pub normalization: Normalization,
}

impl Default for ReconConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Pnfc,
            pairing: Pairing::DisjointAdjacent,
            normalization: Normalization::SqrtMinmax,
        }
    }
}

macro_rules! text_enum {
    ($ty:ty, $what:literal, [$($text:literal $(| $alias:literal)* => $variant:expr),+ $(,)?]) => {
        impl FromStr for $ty {
            type Err = String;

            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s {
                    $($text $(| $alias)* => Ok($variant),)+
                    other => Err(format!(concat!("unknown ", $what, " '{}'"), other)),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                $(if *self == $variant {
                    return f.write_str($text);
                })+
                unreachable!()
            }
        }
    };
}

text_enum!(Algorithm, "algorithm", [
    "mean" => Algorithm::Mean,
    "pnc" => Algorithm::Pnc,
    "pnfc" => Algorithm::Pnfc,
]);

text_enum!(Pairing, "pairing", [
    "disjoint-adjacent" | "disjoint" => Pairing::DisjointAdjacent,
    "sliding" => Pairing::Sliding,
]);

text_enum!(Normalization, "normalization", [
    "none" => Normalization::None,
    "sqrt-minmax" => Normalization::SqrtMinmax,
    "minmax" => Normalization::Minmax,
    "peak" => Normalization::Peak,
]);
