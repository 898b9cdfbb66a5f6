//! Refractive-index models, effective-index tables, and dispersion
//! analysis of resonance grids: FSR, integrated dispersion `D_int`
//! and the energy-conservation phase-matching metric.

use serde::{Deserialize, Serialize};

use crate::numeric::{polyder, polyfit, polyval};
use crate::{Error, Result, SPEED_OF_LIGHT};

/// Three-term Sellmeier model, wavelengths in µm.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MaterialModel {
    pub name: String,
    /// Dimensionless oscillator strengths.
    #[serde(rename = "b")]
    pub b_coeffs: [f64; 3],
    /// Squared-wavelength poles, µm².
    #[serde(rename = "c_um2")]
    pub c_coeffs: [f64; 3],
    /// Validity window in µm, inclusive.
    #[serde(default = "default_validity")]
    pub validity_um: (f64, f64),
}

fn default_validity() -> (f64, f64) {
    (0.3, 5.0)
}

impl MaterialModel {
    pub fn new(name: &str, b: [f64; 3], c: [f64; 3]) -> Result<Self> {
        let model = Self {
            name: name.into(),
            b_coeffs: b,
            c_coeffs: c,
            validity_um: default_validity(),
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.b_coeffs.iter().any(|&b| b <= 0.0) {
            return Err(Error::InvalidInput("Sellmeier strengths must be > 0".into()));
        }
        if !(self.c_coeffs[0] < self.c_coeffs[1] && self.c_coeffs[1] < self.c_coeffs[2]) {
            return Err(Error::InvalidInput(
                "Sellmeier poles must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    /// Sellmeier model of the LPCVD Si₃N₄ film.
    pub fn si3n4() -> Self {
        Self::new(
            "Si3N4",
            [1.737_83, 1.250_00, 2.683_90],
            [0.007_45, 0.031_28, 143.758_57],
        )
        .expect("valid built-in coefficients")
    }

    /// Sellmeier model of the LPCVD SiO₂ cladding.
    pub fn sio2() -> Self {
        Self::new(
            "SiO2",
            [0.696_52, 0.403_21, 0.858_07],
            [0.004_29, 0.014_01, 96.570_21],
        )
        .expect("valid built-in coefficients")
    }
}

/// Evaluate `n(λ) = sqrt(1 + Σ bᵢλ²/(λ²−cᵢ))`, λ in µm.
pub fn sellmeier_index(model: &MaterialModel, wavelength_um: f64) -> Result<f64> {
    let (lo, hi) = model.validity_um;
    if !(wavelength_um >= lo && wavelength_um <= hi) {
        return Err(Error::OutOfRange(format!(
            "wavelength {wavelength_um} µm outside validity window [{lo}, {hi}] µm"
        )));
    }
    let l2 = wavelength_um * wavelength_um;
    let mut sum = 1.0;
    for (&b, &c) in model.b_coeffs.iter().zip(&model.c_coeffs) {
        let denom = l2 - c;
        if denom.abs() < 1e-12 * l2.max(c.abs()) {
            return Err(Error::Domain(format!(
                "wavelength {wavelength_um} µm at Sellmeier pole √{c}"
            )));
        }
        sum += b * l2 / denom;
    }
    if sum <= 0.0 {
        return Err(Error::Domain("negative permittivity".into()));
    }
    Ok(sum.sqrt())
}

/// Simulated effective index of one waveguide mode, sampled on a
/// frequency grid, with the effective mode radius of the bent guide.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EffectiveIndexTable {
    #[serde(rename = "mode")]
    pub mode_label: String,
    pub radius_m: f64,
    /// Pairs of (frequency Hz, n_eff), frequencies strictly increasing.
    pub samples: Vec<(f64, f64)>,
}

impl EffectiveIndexTable {
    pub fn validate(&self) -> Result<()> {
        if self.samples.len() < 4 {
            return Err(Error::InsufficientData(format!(
                "effective-index table needs ≥ 4 samples, got {}",
                self.samples.len()
            )));
        }
        if !self.samples.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(Error::InvalidInput(
                "table frequencies must be strictly increasing".into(),
            ));
        }
        if self.samples.iter().any(|&(_, n)| n <= 1.0) {
            return Err(Error::InvalidInput("n_eff must exceed 1".into()));
        }
        if self.radius_m <= 0.0 {
            return Err(Error::InvalidInput("radius must be positive".into()));
        }
        Ok(())
    }
}

/// FSR at `frequency` from an effective-index table.
///
/// Computes β(ω) = n_eff·ω/c over the table, fits a degree-3 polynomial
/// in the centered/scaled angular frequency, and evaluates the group
/// delay β₁ = dβ/dω analytically. FSR = 1/(β₁·2πR), using the ring
/// circumference L = 2πR.
pub fn fsr_from_neff(table: &EffectiveIndexTable, frequency_hz: f64) -> Result<f64> {
    table.validate()?;
    let fmin = table.samples.first().unwrap().0;
    let fmax = table.samples.last().unwrap().0;
    if !(frequency_hz >= fmin && frequency_hz <= fmax) {
        return Err(Error::OutOfRange(format!(
            "frequency {frequency_hz:.3e} Hz outside table range [{fmin:.3e}, {fmax:.3e}]"
        )));
    }
    let two_pi = std::f64::consts::TAU;
    let w0 = two_pi * frequency_hz;
    let span = two_pi * (fmax - fmin);
    let x: Vec<f64> = table
        .samples
        .iter()
        .map(|&(f, _)| (two_pi * f - w0) / span)
        .collect();
    let beta: Vec<f64> = table
        .samples
        .iter()
        .map(|&(f, n)| n * two_pi * f / SPEED_OF_LIGHT)
        .collect();
    let deg = 3.min(table.samples.len() - 1);
    let coeffs = polyfit(&x, &beta, deg)?;
    let dcoeffs = polyder(&coeffs);
    // β must stay monotone in ω over the table for β₁ to be meaningful.
    if x.iter().any(|&xi| polyval(&dcoeffs, xi) <= 0.0) {
        return Err(Error::Conditioning(
            "fitted propagation constant is non-monotone over the table".into(),
        ));
    }
    let beta1 = polyval(&dcoeffs, 0.0) / span;
    Ok(1.0 / (beta1 * two_pi * table.radius_m))
}

/// Pick the candidate mode whose simulated FSR is closest to the
/// measurement. Ties go to the first-listed candidate.
pub fn identify_mode<'a>(
    measured_fsr_hz: f64,
    candidates: &'a [(String, f64)],
) -> Result<(&'a str, f64)> {
    let best = candidates
        .iter()
        .min_by(|a, b| {
            (a.1 - measured_fsr_hz)
                .abs()
                .total_cmp(&(b.1 - measured_fsr_hz).abs())
        })
        .ok_or_else(|| Error::InvalidInput("empty candidate list".into()))?;
    Ok((&best.0, (measured_fsr_hz - best.1).abs()))
}

/// Measured resonance frequencies versus relative mode index μ.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResonanceGrid {
    /// Pairs of (μ, frequency Hz), μ unique, frequency increasing with μ.
    pub entries: Vec<(i32, f64)>,
}

impl ResonanceGrid {
    pub fn new(mut entries: Vec<(i32, f64)>) -> Result<Self> {
        entries.sort_by_key(|&(mu, _)| mu);
        let grid = Self { entries };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.entries.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(Error::InvalidInput("mode indices must be unique".into()));
        }
        if !self.entries.windows(2).all(|w| w[0].1 < w[1].1) {
            return Err(Error::InvalidInput(
                "resonance frequency must increase with μ".into(),
            ));
        }
        if !self.entries.iter().any(|&(mu, _)| mu == 0) {
            return Err(Error::InvalidInput("grid must contain μ = 0".into()));
        }
        Ok(())
    }

    /// Read from CSV with header `mu,frequency_hz`.
    pub fn from_csv<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut entries = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let line = i + 2; // header is line 1
            let record = record.map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
            let parse = |idx: usize, what: &str| -> Result<f64> {
                record
                    .get(idx)
                    .ok_or_else(|| Error::Parse {
                        line,
                        message: format!("missing {what} column"),
                    })?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse {
                        line,
                        message: format!("{what}: {e}"),
                    })
            };
            let mu = parse(0, "mu")? as i32;
            let f = parse(1, "frequency_hz")?;
            if !f.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: "non-finite frequency".into(),
                });
            }
            entries.push((mu, f));
        }
        Self::new(entries)
    }

    pub fn to_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["mu", "frequency_hz"])
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        for &(mu, f) in &self.entries {
            wtr.write_record([mu.to_string(), format!("{f:.6}")])
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Result of the quadratic dispersion fit `f(μ) = f₀ + d₁μ + d₂μ²/2`.
///
/// `dint_residuals` holds, for every grid point, the deviation of the
/// measured frequency from the fitted quadratic; higher-order
/// dispersion and avoided-mode-crossing shifts show up here.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DispersionFit {
    /// FSR, D₁/2π in Hz.
    pub d1_hz: f64,
    /// D₂/2π in Hz.
    pub d2_hz: f64,
    /// Fitted μ=0 frequency, Hz.
    pub f0_hz: f64,
    /// (μ, residual Hz) for all grid points, fit window or not.
    pub dint_residuals: Vec<(i32, f64)>,
}

/// Default half-width of the fit window, in FSRs around μ = 0.
pub const DEFAULT_FIT_WINDOW: i32 = 5;

/// Least-squares fit of the resonance grid over `window` (inclusive
/// μ-range). Residuals are reported for every grid point.
pub fn fit_dispersion(grid: &ResonanceGrid, window: (i32, i32)) -> Result<DispersionFit> {
    grid.validate()?;
    let (lo, hi) = window;
    let in_window: Vec<&(i32, f64)> = grid
        .entries
        .iter()
        .filter(|&&(mu, _)| mu >= lo && mu <= hi)
        .collect();
    if in_window.len() < 3 || !in_window.iter().any(|&&(mu, _)| mu == 0) {
        return Err(Error::InsufficientData(format!(
            "fit window [{lo}, {hi}] must cover ≥ 3 grid points including μ = 0"
        )));
    }
    let f_ref = grid
        .entries
        .iter()
        .find(|&&(mu, _)| mu == 0)
        .map(|&(_, f)| f)
        .unwrap();
    let design: Vec<Vec<f64>> = in_window
        .iter()
        .map(|&&(mu, _)| {
            let m = mu as f64;
            vec![1.0, m, 0.5 * m * m]
        })
        .collect();
    let rhs: Vec<f64> = in_window.iter().map(|&&(_, f)| f - f_ref).collect();
    let c = crate::numeric::least_squares(&design, &rhs)?;
    if !c[1].is_finite() || c[1] <= 0.0 {
        return Err(Error::Conditioning("non-positive fitted FSR".into()));
    }
    let dint_residuals = grid
        .entries
        .iter()
        .map(|&(mu, f)| {
            let m = mu as f64;
            let model = f_ref + c[0] + c[1] * m + 0.5 * c[2] * m * m;
            (mu, f - model)
        })
        .collect();
    Ok(DispersionFit {
        d1_hz: c[1],
        d2_hz: c[2],
        f0_hz: f_ref + c[0],
        dint_residuals,
    })
}

/// Energy-conservation mismatch Δ = f_s + f_i − 2f_p.
///
/// Δ > 0 means the pump resonance lies below the signal/idler
/// arithmetic mean, the geometry required for SFWM phase matching
/// against SPM/XPM shifts.
pub fn phase_matching_metric(f_s_hz: f64, f_p_hz: f64, f_i_hz: f64) -> f64 {
    f_s_hz + f_i_hz - 2.0 * f_p_hz
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn sellmeier_matches_frozen_values() {
        // Frozen from an independent high-precision evaluation of the
        // three-term model at 780 nm.
        let n_sin = sellmeier_index(&MaterialModel::si3n4(), 0.78).unwrap();
        assert_relative_eq!(n_sin, 2.016_362_407, epsilon = 1e-8);
        let n_sio2 = sellmeier_index(&MaterialModel::sio2(), 0.78).unwrap();
        assert_relative_eq!(n_sio2, 1.452_150_084, epsilon = 1e-8);
    }

    #[test]
    fn sellmeier_pole_and_range_errors() {
        let mut m = MaterialModel::si3n4();
        m.validity_um = (0.05, 20.0); // expose the UV pole for the check
        let pole = m.c_coeffs[1].sqrt();
        assert!(matches!(sellmeier_index(&m, pole), Err(Error::Domain(_))));
        let m = MaterialModel::si3n4();
        assert!(matches!(
            sellmeier_index(&m, 0.1),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            sellmeier_index(&m, 7.0),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn sellmeier_square_invert_roundtrip() {
        let m = MaterialModel::si3n4();
        for i in 0..40 {
            let lam = 0.4 + 0.1 * i as f64;
            if lam > 5.0 {
                break;
            }
            let n = sellmeier_index(&m, lam).unwrap();
            let l2 = lam * lam;
            let direct: f64 = m
                .b_coeffs
                .iter()
                .zip(&m.c_coeffs)
                .map(|(&b, &c)| b * l2 / (l2 - c))
                .sum();
            assert_relative_eq!(n * n - 1.0, direct, max_relative = 1e-12);
        }
    }

    fn constant_table(n0: f64, radius: f64) -> EffectiveIndexTable {
        EffectiveIndexTable {
            mode_label: "const".into(),
            radius_m: radius,
            samples: (0..10)
                .map(|i| (370e12 + i as f64 * 3e12, n0))
                .collect(),
        }
    }

    #[test]
    fn fsr_dispersionless_limit() {
        let n0 = 1.8;
        let r = 41.6e-6;
        let fsr = fsr_from_neff(&constant_table(n0, r), 384e12).unwrap();
        let expect = SPEED_OF_LIGHT / (n0 * std::f64::consts::TAU * r);
        assert_relative_eq!(fsr, expect, max_relative = 1e-9);
    }

    #[test]
    fn fsr_linear_index_analytic_group_index() {
        // n_eff(f) = n0 + s (f − f0) gives group index n_g = n0 + s(2f − f0).
        let n0 = 1.7;
        let f0 = 380e12;
        let s = 1.2e-15;
        let r = 41.6e-6;
        let table = EffectiveIndexTable {
            mode_label: "lin".into(),
            radius_m: r,
            samples: (0..12)
                .map(|i| {
                    let f = 365e12 + i as f64 * 3e12;
                    (f, n0 + s * (f - f0))
                })
                .collect(),
        };
        let f_eval = 384e12;
        let ng = n0 + s * (2.0 * f_eval - f0);
        let expect = SPEED_OF_LIGHT / (ng * std::f64::consts::TAU * r);
        assert_relative_eq!(
            fsr_from_neff(&table, f_eval).unwrap(),
            expect,
            max_relative = 1e-6
        );
    }

    #[test]
    fn fsr_te20_fixture_reproduces_quoted_value() {
        let table = crate::fixtures::te20_neff_table();
        let fsr = fsr_from_neff(&table, 384.49233e12).unwrap();
        assert_close(fsr, 526.6e9, 0.01);
    }

    fn assert_close(v: f64, expect: f64, rel: f64) {
        assert!(
            (v - expect).abs() <= rel * expect.abs(),
            "{v} not within {rel} of {expect}"
        );
    }

    #[test]
    fn fsr_insufficient_samples() {
        let mut t = constant_table(1.8, 41.6e-6);
        t.samples.truncate(3);
        assert!(matches!(
            fsr_from_neff(&t, 372e12),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn fsr_agrees_with_central_difference_from_synthesized_grid() {
        // Synthesize a resonance grid by marching the local FSR from the
        // same table, then compare with (f(μ+1) − f(μ−1))/2.
        let table = crate::fixtures::te20_neff_table();
        let f0 = 384.49233e12;
        let fsr0 = fsr_from_neff(&table, f0).unwrap();
        let f_plus = f0 + fsr_from_neff(&table, f0 + 0.5 * fsr0).unwrap();
        let f_minus = f0 - fsr_from_neff(&table, f0 - 0.5 * fsr0).unwrap();
        let central = (f_plus - f_minus) / 2.0;
        assert_close(fsr0, central, 0.005);
    }

    #[test]
    fn identify_mode_paper_assignments() {
        let cands = vec![
            ("TE10".to_string(), 540.1e9),
            ("TE20".to_string(), 526.6e9),
            ("TE30".to_string(), 511.9e9),
            ("TM10".to_string(), 532.8e9),
        ];
        let (label, mismatch) = identify_mode(527.4e9, &cands).unwrap();
        assert_eq!(label, "TE20");
        assert_relative_eq!(mismatch, 0.8e9, max_relative = 1e-9);
        let (label, mismatch) = identify_mode(534.4e9, &cands).unwrap();
        assert_eq!(label, "TM10");
        assert_relative_eq!(mismatch, 1.6e9, max_relative = 1e-9);
        let single = vec![("only".to_string(), 500e9)];
        let (label, mismatch) = identify_mode(513e9, &single).unwrap();
        assert_eq!(label, "only");
        assert_relative_eq!(mismatch, 13e9, max_relative = 1e-12);
    }

    fn quadratic_grid(f0: f64, d1: f64, d2: f64, range: std::ops::RangeInclusive<i32>) -> ResonanceGrid {
        ResonanceGrid::new(
            range
                .map(|mu| {
                    let m = mu as f64;
                    (mu, f0 + d1 * m + 0.5 * d2 * m * m)
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn dispersion_fit_exact_quadratic_roundtrip() {
        let grid = quadratic_grid(384e12, 527.4e9, 2e6, -8..=8);
        let fit = fit_dispersion(&grid, (-8, 8)).unwrap();
        assert_relative_eq!(fit.d1_hz, 527.4e9, max_relative = 1e-10);
        assert_relative_eq!(fit.d2_hz, 2e6, max_relative = 1e-6);
        for &(_, r) in &fit.dint_residuals {
            assert!(r.abs() < 1e-6 * 384e12 * 1e-6, "residual {r}");
        }
    }

    #[test]
    fn dispersion_fit_reports_amx_bump_outside_window() {
        let mut entries: Vec<(i32, f64)> = (-3..=3)
            .map(|mu| {
                let m = mu as f64;
                (mu, 384e12 + 527.4e9 * m + 0.5 * 2e6 * m * m)
            })
            .collect();
        for e in entries.iter_mut() {
            if e.0 == 2 {
                e.1 += 50e6;
            }
        }
        let grid = ResonanceGrid::new(entries).unwrap();
        let fit = fit_dispersion(&grid, (-1, 1)).unwrap();
        let r2 = fit
            .dint_residuals
            .iter()
            .find(|&&(mu, _)| mu == 2)
            .unwrap()
            .1;
        assert_relative_eq!(r2, 50e6, max_relative = 1e-6);
        // Window {−1,0,1} pins the quadratic exactly through those points.
        for &(mu, r) in &fit.dint_residuals {
            if (-1..=1).contains(&mu) {
                assert!(r.abs() < 1.0, "residual at μ={mu}: {r}");
            }
        }
    }

    #[test]
    fn dispersion_fit_insufficient_window() {
        let grid = quadratic_grid(384e12, 527.4e9, 2e6, -4..=4);
        assert!(matches!(
            fit_dispersion(&grid, (0, 1)),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn phase_matching_quoted_triples() {
        // Fig. 3a TE20 frequencies.
        let d = phase_matching_metric(383.43767e12, 384.49233e12, 385.54702e12);
        assert!((d - 30e6).abs() < 1e6, "TE20 metric {d}");
        // TM10 frequencies.
        let d = phase_matching_metric(383.28230e12, 384.35063e12, 385.41900e12);
        assert!((d - 40e6).abs() < 1e6, "TM10 metric {d}");
        assert_eq!(phase_matching_metric(384e12, 384e12, 384e12), 0.0);
    }

    #[test]
    fn grid_csv_roundtrip_and_parse_errors() {
        let grid = quadratic_grid(384e12, 527.4e9, 2e6, -2..=2);
        let mut buf = Vec::new();
        grid.to_csv(&mut buf).unwrap();
        let back = ResonanceGrid::from_csv(buf.as_slice()).unwrap();
        assert_eq!(back.entries.len(), grid.entries.len());
        let bad = "mu,frequency_hz\n0,3.84e14\n1,not_a_number\n";
        match ResonanceGrid::from_csv(bad.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn dispersion_fit_zero_residuals_any_window(
            d1 in 100e9f64..800e9,
            d2 in -50e6f64..50e6,
            half in 2i32..10,
        ) {
            let grid = quadratic_grid(384e12, d1, d2, -10..=10);
            let fit = fit_dispersion(&grid, (-half, half)).unwrap();
            for &(_, r) in &fit.dint_residuals {
                prop_assert!(r.abs() < 1e-6 * 384e12 * 1e-3);
            }
        }

        #[test]
        fn identify_mode_scale_invariant(
            scale in 0.1f64..10.0,
            measured in 500e9f64..560e9,
        ) {
            let cands = vec![
                ("a".to_string(), 540.1e9),
                ("b".to_string(), 526.6e9),
                ("c".to_string(), 511.9e9),
            ];
            let scaled: Vec<(String, f64)> =
                cands.iter().map(|(l, f)| (l.clone(), f * scale)).collect();
            let (l1, _) = identify_mode(measured, &cands).unwrap();
            let (l2, _) = identify_mode(measured * scale, &scaled).unwrap();
            prop_assert_eq!(l1, l2);
        }

        #[test]
        fn phase_matching_midpoint_is_zero(fs in 380e12f64..390e12, fi in 380e12f64..390e12) {
            let mid = (fs + fi) / 2.0;
            prop_assert_eq!(phase_matching_metric(fs, mid, fi), 0.0);
        }
    }
}
