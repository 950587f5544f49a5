//! Simulate → reconstruct → evaluate, one sweep cell at a time.

use crate::config::{Algorithm, FogParams, Normalization, Pairing, ReconConfig};
use crate::error::Result;
use crate::fogsim::simulate_sequence;
use crate::frame::{Frame, FrameSequence, Timing};
use crate::imgio::{ClosedForm, ReportRow};
use crate::metrics::{evaluate, MetricsReport};
use crate::recon::{make_pairs, partition_means, reconstruct, ReconResult};

/// Scene description shared by every cell of a sweep.
#[derive(Debug, Clone)]
pub struct Scene {
    /// Fog-free reference in `[0, 1]`.
    pub reference: Frame,
    /// Photon count of a reference pixel at 1.0.
    pub signal_peak: f64,
    pub fog: FogParams,
    pub timing: Timing,
}

impl Scene {
    pub fn simulate(&self, n_frames: usize, seed: u64) -> Result<FrameSequence> {
        let params = FogParams {
            n_frames,
            seed,
            ..self.fog.clone()
        };
        let target = self.reference.scaled(self.signal_peak)?;
        simulate_sequence(&target, &params, self.timing)
    }
}

#[derive(Debug, Clone)]
pub struct CellOutput {
    pub algorithm: Algorithm,
    pub n_frames: usize,
    pub seed: u64,
    pub result: ReconResult,
    pub metrics: MetricsReport,
    pub closed_form: ClosedForm,
}

impl CellOutput {
    pub fn row(&self) -> ReportRow {
        ReportRow {
            label: format!("{}_n{}_s{}", self.algorithm, self.n_frames, self.seed),
            algorithm: Some(self.algorithm),
            normalization: Some(self.result.normalization),
            n_frames: Some(self.n_frames),
            n_pairs: Some(self.result.n_pairs),
            seed: Some(self.seed),
            metrics: self.metrics.clone(),
            closed_form: self.closed_form,
        }
    }
}

/// Checks `pnc = p̄₁⊙p̄₂` and `pnfc = 4·p̄₁⊙p̄₂` when every frame is identical.
pub fn closed_form_check(
    seq: &FrameSequence,
    pairing: Pairing,
    result: &ReconResult,
) -> Result<ClosedForm> {
    let constant = seq.frames().windows(2).all(|w| w[0] == w[1]);
    let factor = match result.algorithm {
        Algorithm::Pnc => 1.0,
        Algorithm::Pnfc => 4.0,
        Algorithm::Mean => return Ok(ClosedForm::NotApplicable),
    };
    if !constant {
        return Ok(ClosedForm::NotApplicable);
    }
    let pairs = make_pairs(seq.len(), pairing)?;
    let (m1, m2) = partition_means(seq, &pairs)?;
    let ok = result
        .raw
        .pixels()
        .iter()
        .zip(m1.pixels().iter().zip(m2.pixels()))
        .all(|(&r, (&a, &b))| {
            let expected = factor * a * b;
            (r - expected).abs() <= 1e-12 * expected.abs().max(1.0)
        });
    Ok(if ok {
        ClosedForm::Pass
    } else {
        ClosedForm::Fail
    })
}

/// Reconstructs one simulated sequence with each algorithm and scores it.
pub fn run_cell(
    scene: &Scene,
    n_frames: usize,
    seed: u64,
    algorithms: &[Algorithm],
    pairing: Pairing,
    normalization: Normalization,
) -> Result<Vec<CellOutput>> {
    let seq = scene.simulate(n_frames, seed)?;
    algorithms
        .iter()
        .map(|&algorithm| {
            let result = reconstruct(
                &seq,
                &ReconConfig {
                    algorithm,
                    pairing,
                    normalization,
                },
            )?;
            let metrics = evaluate(&result.image, &scene.reference)?;
            let closed_form = closed_form_check(&seq, pairing, &result)?;
            Ok(CellOutput {
                algorithm,
                n_frames,
                seed,
                result,
                metrics,
                closed_form,
            })
        })
        .collect()
}
