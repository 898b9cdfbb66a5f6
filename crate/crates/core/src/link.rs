//! Deployment arithmetic: dB chains, thermal resonance shift, fiber
//! V-number and Marcuse mode-field diameter, mode-overlap integrals,
//! and loss-budget composition.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Ordered chain of efficiency stages.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LossBudget {
    pub stages: Vec<BudgetStage>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BudgetStage {
    pub label: String,
    pub eta: f64,
}

impl LossBudget {
    pub fn new(stages: Vec<(&str, f64)>) -> Result<Self> {
        let budget = Self {
            stages: stages
                .into_iter()
                .map(|(label, eta)| BudgetStage {
                    label: label.into(),
                    eta,
                })
                .collect(),
        };
        budget.validate()?;
        Ok(budget)
    }

    pub fn validate(&self) -> Result<()> {
        for s in &self.stages {
            if !(s.eta > 0.0 && s.eta <= 1.0) {
                return Err(Error::InvalidInput(format!(
                    "stage '{}' efficiency {} outside (0, 1]",
                    s.label, s.eta
                )));
            }
        }
        Ok(())
    }
}

/// Step-index fiber parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiberSpec {
    pub core_radius_um: f64,
    pub numerical_aperture: f64,
    pub wavelength_um: f64,
}

impl FiberSpec {
    pub fn validate(&self) -> Result<()> {
        if self.core_radius_um <= 0.0
            || self.numerical_aperture <= 0.0
            || self.wavelength_um <= 0.0
        {
            return Err(Error::InvalidInput(
                "fiber radius, NA and wavelength must be > 0".into(),
            ));
        }
        let v = std::f64::consts::TAU * self.core_radius_um * self.numerical_aperture
            / self.wavelength_um;
        if v >= 10.0 {
            return Err(Error::InvalidInput(format!(
                "V-number {v:.1} is implausibly large for a single-clad fiber"
            )));
        }
        Ok(())
    }
}

/// rate·10^(−Σloss/10).
pub fn db_chain(rate_in_hz: f64, losses_db: &[f64]) -> Result<f64> {
    if rate_in_hz < 0.0 {
        return Err(Error::InvalidInput("rate must be ≥ 0".into()));
    }
    let total: f64 = losses_db.iter().sum();
    Ok(rate_in_hz * 10f64.powf(-total / 10.0))
}

/// Resonance shift = tuning coefficient × temperature excursion.
pub fn thermal_shift(coefficient_hz_per_k: f64, delta_t_k: f64) -> f64 {
    coefficient_hz_per_k * delta_t_k
}

/// Normalized frequency V = 2π·r·NA/λ and the strict single-mode flag
/// (V < 2.405).
pub fn v_number(fiber: &FiberSpec) -> Result<(f64, bool)> {
    fiber.validate()?;
    let v = std::f64::consts::TAU * fiber.core_radius_um * fiber.numerical_aperture
        / fiber.wavelength_um;
    Ok((v, v < 2.405))
}

/// Mode-field diameter 2w from Marcuse's fit
/// w/r = 0.65 + 1.619·V^(−3/2) + 2.879·V^(−6), in µm.
pub fn marcuse_mfd(fiber: &FiberSpec) -> Result<f64> {
    let (v, _) = v_number(fiber)?;
    if v < 0.8 {
        return Err(Error::OutOfRange(format!(
            "V = {v:.3} below the ≈0.8 validity floor of Marcuse's fit"
        )));
    }
    let w_over_r = 0.65 + 1.619 * v.powf(-1.5) + 2.879 * v.powi(-6);
    Ok(2.0 * w_over_r * fiber.core_radius_um)
}

/// A transverse mode field: either an analytic Gaussian of 1/e² radius
/// w (optionally elliptical), or amplitude samples on a regular grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ModeField {
    /// Circular Gaussian, waist in µm.
    Gaussian { w_um: f64 },
    /// Elliptical Gaussian, waists in µm.
    EllipticalGaussian { wx_um: f64, wy_um: f64 },
    /// Real amplitude samples on the tensor grid xs × ys (µm).
    Sampled {
        xs_um: Vec<f64>,
        ys_um: Vec<f64>,
        /// Row-major amplitude[iy][ix], len = ys·xs.
        amplitude: Vec<f64>,
    },
}

impl ModeField {
    pub fn validate(&self) -> Result<()> {
        match self {
            ModeField::Gaussian { w_um } => {
                if *w_um <= 0.0 {
                    return Err(Error::InvalidInput("waist must be > 0".into()));
                }
            }
            ModeField::EllipticalGaussian { wx_um, wy_um } => {
                if *wx_um <= 0.0 || *wy_um <= 0.0 {
                    return Err(Error::InvalidInput("waists must be > 0".into()));
                }
            }
            ModeField::Sampled {
                xs_um,
                ys_um,
                amplitude,
            } => {
                if xs_um.len() < 4 || ys_um.len() < 4 {
                    return Err(Error::InsufficientData(
                        "sampled field needs ≥ 4 points per axis".into(),
                    ));
                }
                if !xs_um.windows(2).all(|w| w[0] < w[1])
                    || !ys_um.windows(2).all(|w| w[0] < w[1])
                {
                    return Err(Error::InvalidInput("grid axes must increase".into()));
                }
                if amplitude.len() != xs_um.len() * ys_um.len() {
                    return Err(Error::InvalidInput(
                        "amplitude length must be nx·ny".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn amplitude_at(&self, x: f64, y: f64) -> f64 {
        match self {
            ModeField::Gaussian { w_um } => (-(x * x + y * y) / (w_um * w_um)).exp(),
            ModeField::EllipticalGaussian { wx_um, wy_um } => {
                (-(x * x) / (wx_um * wx_um) - (y * y) / (wy_um * wy_um)).exp()
            }
            ModeField::Sampled { .. } => unreachable!("sampled fields use their own grid"),
        }
    }

    /// Read a sampled field from CSV `x_m,y_m,amplitude` (tensor grid).
    pub fn from_csv<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut points: Vec<(f64, f64, f64)> = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let line = i + 2;
            let record = record.map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
            let get = |idx: usize| -> Result<f64> {
                record
                    .get(idx)
                    .ok_or_else(|| Error::Parse {
                        line,
                        message: "missing column".into(),
                    })?
                    .trim()
                    .parse()
                    .map_err(|e: std::num::ParseFloatError| Error::Parse {
                        line,
                        message: e.to_string(),
                    })
            };
            points.push((get(0)? * 1e6, get(1)? * 1e6, get(2)?));
        }
        let mut xs_um: Vec<f64> = points.iter().map(|p| p.0).collect();
        xs_um.sort_by(|a, b| a.total_cmp(b));
        xs_um.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let mut ys_um: Vec<f64> = points.iter().map(|p| p.1).collect();
        ys_um.sort_by(|a, b| a.total_cmp(b));
        ys_um.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let nx = xs_um.len();
        let ny = ys_um.len();
        if points.len() != nx * ny {
            return Err(Error::InvalidInput(format!(
                "field CSV is not a tensor grid: {} points for {nx}×{ny} axes",
                points.len()
            )));
        }
        let idx_of = |axis: &[f64], v: f64| -> usize {
            axis.partition_point(|&a| a < v - 1e-12)
        };
        let mut amplitude = vec![0.0; nx * ny];
        for (x, y, a) in points {
            amplitude[idx_of(&ys_um, y) * nx + idx_of(&xs_um, x)] = a;
        }
        let field = ModeField::Sampled {
            xs_um,
            ys_um,
            amplitude,
        };
        field.validate()?;
        Ok(field)
    }
}

fn gaussian_pair_overlap(wa: f64, wb: f64) -> f64 {
    let r = 2.0 * wa * wb / (wa * wa + wb * wb);
    r * r
}

/// Normalized power overlap η = |∫E_a E_b dA|² / (∫E_a² · ∫E_b²).
///
/// Two analytic Gaussians use the closed form (per axis); otherwise the
/// integrals run as trapezoids on a common grid with a coarse-grid
/// Richardson comparison guarding the quadrature error.
pub fn overlap_efficiency(a: &ModeField, b: &ModeField) -> Result<f64> {
    a.validate()?;
    b.validate()?;
    use ModeField::*;
    match (a, b) {
        (Gaussian { w_um: wa }, Gaussian { w_um: wb }) => Ok(gaussian_pair_overlap(*wa, *wb)),
        (Gaussian { w_um: wa }, EllipticalGaussian { wx_um, wy_um })
        | (EllipticalGaussian { wx_um, wy_um }, Gaussian { w_um: wa }) => Ok(
            gaussian_pair_overlap(*wa, *wx_um).sqrt() * gaussian_pair_overlap(*wa, *wy_um).sqrt(),
        ),
        (
            EllipticalGaussian { wx_um: ax, wy_um: ay },
            EllipticalGaussian { wx_um: bx, wy_um: by },
        ) => Ok(gaussian_pair_overlap(*ax, *bx).sqrt() * gaussian_pair_overlap(*ay, *by).sqrt()),
        (Sampled { .. }, _) | (_, Sampled { .. }) => sampled_overlap(a, b),
    }
}

fn grid_overlap(
    xs: &[f64],
    ys: &[f64],
    value_a: &dyn Fn(usize, usize) -> f64,
    value_b: &dyn Fn(usize, usize) -> f64,
    stride: usize,
) -> f64 {
    // 2D trapezoid on the (sub)grid taking every `stride`-th point.
    let xi: Vec<usize> = (0..xs.len()).step_by(stride).collect();
    let yi: Vec<usize> = (0..ys.len()).step_by(stride).collect();
    let mut cross = 0.0;
    let mut pa = 0.0;
    let mut pb = 0.0;
    for wy in yi.windows(2) {
        let dy = ys[wy[1]] - ys[wy[0]];
        for wx in xi.windows(2) {
            let dx = xs[wx[1]] - xs[wx[0]];
            let mut c = 0.0;
            let mut sa = 0.0;
            let mut sb = 0.0;
            for &iy in &[wy[0], wy[1]] {
                for &ix in &[wx[0], wx[1]] {
                    let va = value_a(ix, iy);
                    let vb = value_b(ix, iy);
                    c += va * vb;
                    sa += va * va;
                    sb += vb * vb;
                }
            }
            cross += c / 4.0 * dx * dy;
            pa += sa / 4.0 * dx * dy;
            pb += sb / 4.0 * dx * dy;
        }
    }
    cross * cross / (pa * pb)
}

fn sampled_overlap(a: &ModeField, b: &ModeField) -> Result<f64> {
    // Use the sampled field's grid; the analytic partner is evaluated
    // on it.
    let (xs, ys, amp) = match (a, b) {
        (ModeField::Sampled { xs_um, ys_um, amplitude }, _) => (xs_um, ys_um, amplitude),
        (_, ModeField::Sampled { xs_um, ys_um, amplitude }) => (xs_um, ys_um, amplitude),
        _ => unreachable!(),
    };
    let other = match a {
        ModeField::Sampled { .. } => b,
        _ => a,
    };
    let nx = xs.len();
    let value_sampled = |ix: usize, iy: usize| amp[iy * nx + ix];
    let value_other: Box<dyn Fn(usize, usize) -> f64> = match other {
        ModeField::Sampled {
            xs_um: xb,
            ys_um: yb,
            amplitude: ab,
        } => {
            if xb != xs || yb != ys {
                return Err(Error::InvalidInput(
                    "sampled fields must share a common grid".into(),
                ));
            }
            let nxb = xb.len();
            let ab = ab.clone();
            Box::new(move |ix, iy| ab[iy * nxb + ix])
        }
        analytic => {
            let analytic = analytic.clone();
            Box::new(move |ix: usize, iy: usize| analytic.amplitude_at(xs[ix], ys[iy]))
        }
    };
    let fine = grid_overlap(xs, ys, &value_sampled, &value_other, 1);
    let coarse = grid_overlap(xs, ys, &value_sampled, &value_other, 2);
    // Richardson-style error estimate for the O(h²) trapezoid rule.
    let err = (fine - coarse).abs() / 3.0;
    if err > 1e-3 {
        return Err(Error::Precision(format!(
            "overlap quadrature error estimate {err:.2e} exceeds 1e-3; refine the field grid"
        )));
    }
    Ok(fine)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BudgetSummary {
    pub overall: f64,
    pub overall_db: f64,
}

/// Product of stage efficiencies and its dB equivalent.
pub fn compose_budget(budget: &LossBudget) -> Result<BudgetSummary> {
    budget.validate()?;
    let overall: f64 = budget.stages.iter().map(|s| s.eta).product();
    Ok(BudgetSummary {
        overall,
        overall_db: -10.0 * overall.log10(),
    })
}
