use super::SpectrumSlice;
use crate::{Error, Result};

/// Largest |r| for a trusted prediction.
pub const TRUST_MAX_RATIO: f64 = 0.5;
/// Largest relative correction |predicted − x6| / (1 + predicted) for a
/// trusted prediction.
pub const TRUST_MAX_JUMP: f64 = 0.02;

/// Fits x_n = x + c rⁿ through three consecutive values and returns
/// (x, r). Non-contracting sequences return the last value unchanged.
pub fn extrapolate(x4: f64, x5: f64, x6: f64) -> (f64, f64) {
    let d1 = x5 - x4;
    let d2 = x6 - x5;
    if d1 == 0.0 {
        return (x6, 0.0);
    }
    let r = d2 / d1;
    if r.abs() >= 1.0 || (1.0 - r).abs() < 1e-12 {
        return (x6, r);
    }
    (x6 + d2 * r / (1.0 - r), r)
}

/// Trust test for one extrapolated value.
pub fn trusted(x6: f64, predicted: f64, ratio: f64) -> bool {
    ratio.abs() <= TRUST_MAX_RATIO && (predicted - x6).abs() <= TRUST_MAX_JUMP * (1.0 + predicted.abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtrapolatedSpectrum {
    /// Predictions in ascending order.
    pub predicted: Vec<f64>,
    /// The three slices used, coarsest first.
    pub inputs: Vec<SpectrumSlice>,
    /// Ratio r of each sorted prediction.
    pub convergence_ratio: Vec<f64>,
    /// Per-prediction trust flag.
    pub trusted: Vec<bool>,
    /// Index into the input slices each sorted prediction came from.
    pub source_index: Vec<usize>,
    /// Length of the leading run of trusted predictions.
    pub trust_count: usize,
}

impl ExtrapolatedSpectrum {
    pub fn len(&self) -> usize {
        self.predicted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predicted.is_empty()
    }

    /// The trusted prefix of the predictions.
    pub fn trusted_prefix(&self) -> &[f64] {
        &self.predicted[..self.trust_count]
    }
}

/// Extrapolates index by index from the last three slices, then sorts.
pub fn extrapolate_spectrum(slices: &[SpectrumSlice]) -> Result<ExtrapolatedSpectrum> {
    if slices.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "extrapolation needs three refinement levels, got {}",
            slices.len()
        )));
    }
    let inputs = slices[slices.len() - 3..].to_vec();
    let m = inputs[0].len();
    if inputs.iter().any(|s| s.len() != m) {
        return Err(Error::InvalidArgument("slices hold different eigenvalue counts".into()));
    }
    if inputs[1].level != inputs[0].level + 1 || inputs[2].level != inputs[1].level + 1 {
        return Err(Error::InvalidArgument("slices are not at consecutive levels".into()));
    }
    let raw: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            extrapolate(
                inputs[0].eigenvalues[i],
                inputs[1].eigenvalues[i],
                inputs[2].eigenvalues[i],
            )
        })
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| raw[a].0.total_cmp(&raw[b].0).then(a.cmp(&b)));
    let predicted: Vec<f64> = order.iter().map(|&i| raw[i].0).collect();
    let convergence_ratio: Vec<f64> = order.iter().map(|&i| raw[i].1).collect();
    let flags: Vec<bool> = order
        .iter()
        .map(|&i| trusted(inputs[2].eigenvalues[i], raw[i].0, raw[i].1))
        .collect();
    let trust_count = flags.iter().take_while(|&&t| t).count();
    Ok(ExtrapolatedSpectrum {
        predicted,
        inputs,
        convergence_ratio,
        trusted: flags,
        source_index: order,
        trust_count,
    })
}
