//! Closed-form spectra of the classical test domains.

mod bessel;

use std::f64::consts::PI;
use std::fmt;

pub use bessel::{
    bessel_j, bessel_j_and_derivative, bessel_j_sequence, bessel_zero, bessel_zeros, bessel_zeros_below,
    mcmahon_estimate,
};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleCase {
    /// Dirichlet triangle with legs 1 and a right angle.
    RightIsosceles,
    /// Dirichlet equilateral triangle with side 1.
    Equilateral,
    /// Dirichlet unit disc.
    DiscDirichlet,
    /// Neumann unit disc.
    DiscNeumann,
    /// Dirichlet spherical triangle with three right angles.
    SphericalRightTriangle,
    /// Dirichlet hemisphere.
    Hemisphere,
}

impl OracleCase {
    pub const ALL: [OracleCase; 6] = [
        OracleCase::RightIsosceles,
        OracleCase::Equilateral,
        OracleCase::DiscDirichlet,
        OracleCase::DiscNeumann,
        OracleCase::SphericalRightTriangle,
        OracleCase::Hemisphere,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OracleCase::RightIsosceles => "right-isosceles",
            OracleCase::Equilateral => "equilateral",
            OracleCase::DiscDirichlet => "disc-d",
            OracleCase::DiscNeumann => "disc-n",
            OracleCase::SphericalRightTriangle => "spherical-right-triangle",
            OracleCase::Hemisphere => "hemisphere",
        }
    }

    pub fn from_name(name: &str) -> Result<OracleCase> {
        OracleCase::ALL.into_iter().find(|c| c.name() == name).ok_or_else(|| {
            let names: Vec<_> = OracleCase::ALL.iter().map(|c| c.name()).collect();
            Error::InvalidArgument(format!(
                "unknown exact case `{name}`; valid cases: {}",
                names.join(", ")
            ))
        })
    }

    /// Natural unit for tabulating this spectrum.
    pub fn unit(self) -> f64 {
        match self {
            OracleCase::RightIsosceles => PI * PI,
            OracleCase::Equilateral => (4.0 * PI / 3.0).powi(2),
            _ => 1.0,
        }
    }
}

impl fmt::Display for OracleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ascending eigenvalues with multiplicity expanded.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpectrum {
    pub eigenvalues: Vec<f64>,
    pub case: OracleCase,
    pub count: usize,
}

impl OracleSpectrum {
    fn new(case: OracleCase, mut eigenvalues: Vec<f64>, count: usize) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        eigenvalues.truncate(count);
        OracleSpectrum {
            eigenvalues,
            case,
            count,
        }
    }
}

pub fn oracle_spectrum(case: OracleCase, count: usize) -> OracleSpectrum {
    match case {
        OracleCase::RightIsosceles => right_isosceles_spectrum(count),
        OracleCase::Equilateral => equilateral_spectrum(count),
        OracleCase::DiscDirichlet => disc_spectrum(count, crate::geometry::Bc::Dirichlet),
        OracleCase::DiscNeumann => disc_spectrum(count, crate::geometry::Bc::Neumann),
        OracleCase::SphericalRightTriangle => spherical_right_triangle_spectrum(count),
        OracleCase::Hemisphere => hemisphere_spectrum(count),
    }
}

/// Integer lattice values q(j, k) ≤ bound, grown until at least `count` exist.
fn lattice_values(count: usize, density: f64, q: impl Fn(u64, u64) -> Option<u64>) -> Vec<u64> {
    let mut bound = (count as f64 / density * 1.3 + 16.0).ceil() as u64;
    loop {
        let mut vals = Vec::new();
        let jmax = (bound as f64).sqrt() as u64 + 1;
        for j in 1..=jmax {
            for k in 1..=jmax {
                if let Some(v) = q(j, k) {
                    if v <= bound {
                        vals.push(v);
                    }
                }
            }
        }
        if vals.len() >= count {
            vals.sort_unstable();
            vals.truncate(count);
            return vals;
        }
        bound *= 2;
    }
}

/// π²(j² + k²) over 0 < j < k.
pub fn right_isosceles_spectrum(count: usize) -> OracleSpectrum {
    let v = lattice_values(count, PI / 8.0, |j, k| (j < k).then_some(j * j + k * k));
    let unit = OracleCase::RightIsosceles.unit();
    OracleSpectrum::new(
        OracleCase::RightIsosceles,
        v.iter().map(|&q| unit * q as f64).collect(),
        count,
    )
}

/// Integer values j² + k² (0 < j < k) of the right-isosceles spectrum.
pub fn right_isosceles_units(count: usize) -> Vec<u64> {
    lattice_values(count, PI / 8.0, |j, k| (j < k).then_some(j * j + k * k))
}

/// Integer values j² + k² + jk (j, k ≥ 1) of the equilateral spectrum.
pub fn equilateral_units(count: usize) -> Vec<u64> {
    lattice_values(count, PI / (3.0 * 3f64.sqrt()), |j, k| Some(j * j + k * k + j * k))
}

/// (4π/3)²(j² + k² + jk) over ordered pairs j, k ≥ 1.
pub fn equilateral_spectrum(count: usize) -> OracleSpectrum {
    let unit = OracleCase::Equilateral.unit();
    let v = equilateral_units(count);
    OracleSpectrum::new(
        OracleCase::Equilateral,
        v.iter().map(|&q| unit * q as f64).collect(),
        count,
    )
}

/// Dirichlet eigenvalues of an equilateral triangle of the given side, the
/// sub-spectrum inherited by any union of such triangles from the
/// triangular lattice (regular hexagon, six-pointed star).
pub fn equilateral_subspectrum(side: f64, count: usize) -> Vec<f64> {
    let unit = OracleCase::Equilateral.unit() / (side * side);
    equilateral_units(count).iter().map(|&q| unit * q as f64).collect()
}

/// Squared Bessel zeros of the unit disc: Dirichlet uses zeros of J_k,
/// Neumann zeros of J′_k plus the constant mode 0. Orders k ≥ 1 count twice.
pub fn disc_spectrum(count: usize, bc: crate::geometry::Bc) -> OracleSpectrum {
    use crate::geometry::Bc;
    let neumann = bc == Bc::Neumann;
    let case = if neumann {
        OracleCase::DiscNeumann
    } else {
        OracleCase::DiscDirichlet
    };
    // N(t) ≈ t/4, so about 4·count bounds the needed eigenvalues.
    let mut limit = (4.0 * count as f64 + 40.0).sqrt() + 2.0;
    loop {
        let mut vals = if neumann { vec![0.0] } else { Vec::new() };
        let mut k = 0;
        loop {
            let zeros = bessel_zeros_below(k, usize::MAX, limit, neumann);
            if zeros.is_empty() {
                break;
            }
            for z in zeros {
                vals.push(z * z);
                if k > 0 {
                    vals.push(z * z);
                }
            }
            k += 1;
        }
        if vals.len() >= count {
            return OracleSpectrum::new(case, vals, count);
        }
        limit *= 1.5;
    }
}

fn expand_multiplicity(count: usize, value: impl Fn(u64) -> f64, case: OracleCase) -> OracleSpectrum {
    let mut vals = Vec::with_capacity(count);
    let mut i = 1u64;
    while vals.len() < count {
        for _ in 0..i {
            vals.push(value(i));
        }
        i += 1;
    }
    OracleSpectrum::new(case, vals, count)
}

/// 4i² + 6i + 2 with multiplicity i.
pub fn spherical_right_triangle_spectrum(count: usize) -> OracleSpectrum {
    expand_multiplicity(
        count,
        |i| (4 * i * i + 6 * i + 2) as f64,
        OracleCase::SphericalRightTriangle,
    )
}

/// n(n + 1) with multiplicity n.
pub fn hemisphere_spectrum(count: usize) -> OracleSpectrum {
    expand_multiplicity(count, |n| (n * (n + 1)) as f64, OracleCase::Hemisphere)
}

#[cfg(test)]
mod tests;
