use crate::{Error, Result};

/// Distribution of differences between consecutive eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct GapStats {
    pub differences: Vec<f64>,
    /// (d, fraction of differences ≤ d) at each distinct difference.
    pub cdf: Vec<(f64, f64)>,
    pub bin_width: f64,
    /// Counts of differences in [k w, (k + 1) w).
    pub histogram: Vec<usize>,
}

impl GapStats {
    /// Empirical CDF at `x`.
    pub fn cdf_at(&self, x: f64) -> f64 {
        let n = self.differences.len();
        let mut sorted = self.differences.clone();
        sorted.sort_by(f64::total_cmp);
        sorted.partition_point(|&d| d <= x) as f64 / n as f64
    }

    pub fn mean(&self) -> f64 {
        self.differences.iter().sum::<f64>() / self.differences.len() as f64
    }
}

pub fn gap_stats(spectrum: &[f64], bin_width: f64) -> Result<GapStats> {
    if spectrum.len() < 2 {
        return Err(Error::InvalidArgument(
            "gap statistics need at least two eigenvalues".into(),
        ));
    }
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }
    let mut sorted = spectrum.to_vec();
    sorted.sort_by(f64::total_cmp);
    let differences: Vec<f64> = sorted.windows(2).map(|w| w[1] - w[0]).collect();
    let n = differences.len();

    let mut ds = differences.clone();
    ds.sort_by(f64::total_cmp);
    let mut cdf: Vec<(f64, f64)> = Vec::new();
    for (i, &d) in ds.iter().enumerate() {
        let frac = (i + 1) as f64 / n as f64;
        match cdf.last_mut() {
            Some(last) if last.0 == d => last.1 = frac,
            _ => cdf.push((d, frac)),
        }
    }

    let bins = (ds[n - 1] / bin_width).floor() as usize + 1;
    let mut histogram = vec![0usize; bins];
    for &d in &differences {
        histogram[((d / bin_width).floor() as usize).min(bins - 1)] += 1;
    }
    Ok(GapStats {
        differences,
        cdf,
        bin_width,
        histogram,
    })
}
