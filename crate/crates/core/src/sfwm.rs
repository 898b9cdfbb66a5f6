//! Closed-form pair-generation model: nonlinear coupling, output
//! spectral density, photon linewidth, rate scaling laws, coupling
//! optima, oscillation threshold and spectral brightness.
//!
//! Rates (κ, κ_ex) are stored as /2π values in Hz and converted to
//! angular units inside each formula. The rate formulas use the
//! pump-mode κ and κ_ex for all three modes; per-mode linewidths enter
//! only the spectral density and the photon linewidth.

use serde::{Deserialize, Serialize};

use crate::spectra::ResonatorMode;
use crate::{Error, Result, HBAR, SPEED_OF_LIGHT};

const TAU: f64 = std::f64::consts::TAU;

/// The three interacting resonances plus the waveguide parameters that
/// set the nonlinear coupling.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeTriple {
    pub signal: ResonatorMode,
    pub pump: ResonatorMode,
    pub idler: ResonatorMode,
    /// Nonlinear refractive index n₂, m²/W.
    pub n2_m2_per_w: f64,
    /// Group velocity, m/s.
    pub vg_m_per_s: f64,
    /// Effective mode area, m².
    pub a_eff_m2: f64,
    /// Ring radius, m.
    pub radius_m: f64,
}

impl ModeTriple {
    pub fn validate(&self) -> Result<()> {
        for m in [&self.signal, &self.pump, &self.idler] {
            m.validate()?;
        }
        if self.n2_m2_per_w <= 0.0
            || self.vg_m_per_s <= 0.0
            || self.a_eff_m2 <= 0.0
            || self.radius_m <= 0.0
        {
            return Err(Error::InvalidInput(
                "n₂, v_g, A_eff and radius must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Effective mode volume V_eff = 2πR·A_eff, m³.
    pub fn v_eff_m3(&self) -> f64 {
        TAU * self.radius_m * self.a_eff_m2
    }

    /// Energy-conservation residual f_s + f_i − 2f_p, Hz.
    pub fn energy_mismatch_hz(&self) -> f64 {
        self.signal.f0_hz + self.idler.f0_hz - 2.0 * self.pump.f0_hz
    }

    /// Non-fatal consistency warnings (the triple stays usable).
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        let mismatch = self.energy_mismatch_hz().abs();
        let kappa_p = self.pump.loaded_linewidth_hz();
        if mismatch >= kappa_p {
            w.push(format!(
                "energy mismatch |f_s + f_i − 2f_p| = {:.3e} Hz exceeds the pump linewidth {:.3e} Hz",
                mismatch, kappa_p
            ));
        }
        w
    }
}

/// γ = ħω²n₂v_g²/(cV_eff), rad/s per photon; ω = 2πf_pump.
pub fn nonlinear_gamma(triple: &ModeTriple) -> Result<f64> {
    triple.validate()?;
    let omega = TAU * triple.pump.f0_hz;
    Ok(HBAR * omega * omega * triple.n2_m2_per_w * triple.vg_m_per_s * triple.vg_m_per_s
        / (SPEED_OF_LIGHT * triple.v_eff_m3()))
}

/// On-resonance intracavity pump photon number |ε|² = (4κ_ex/κ²)(P/ħω).
pub fn intracavity_pump_photons(pump: &ResonatorMode, power_w: f64) -> Result<f64> {
    pump.validate()?;
    if power_w < 0.0 {
        return Err(Error::InvalidInput("power must be ≥ 0".into()));
    }
    let kex = TAU * pump.kappa_ex_hz;
    let kappa = TAU * pump.loaded_linewidth_hz();
    let omega = TAU * pump.f0_hz;
    Ok(4.0 * kex / (kappa * kappa) * (power_w / (HBAR * omega)))
}

/// Signal-channel output spectral density at `offset_hz` from resonance
/// center, photons/s/Hz:
/// S = 16κ_ex,s·κ_i·γ²|ε|⁴ / ((κ_s²+4ω²)(κ_i²+4ω²)), ω = 2π·offset.
/// Integrating over offset (in Hz) yields the output photon flux.
pub fn output_spectral_density(
    triple: &ModeTriple,
    power_w: f64,
    offset_hz: f64,
    p_th_w: Option<f64>,
) -> Result<f64> {
    check_below_threshold(power_w, p_th_w)?;
    let gamma = nonlinear_gamma(triple)?;
    let eps2 = intracavity_pump_photons(&triple.pump, power_w)?;
    let kex_s = TAU * triple.signal.kappa_ex_hz;
    let ks = TAU * triple.signal.loaded_linewidth_hz();
    let ki = TAU * triple.idler.loaded_linewidth_hz();
    let w = TAU * offset_hz;
    let num = 16.0 * kex_s * ki * gamma * gamma * eps2 * eps2;
    let den = (ks * ks + 4.0 * w * w) * (ki * ki + 4.0 * w * w);
    Ok(num / den)
}

/// FWHM of the pair-photon spectrum for loaded linewidths κ_s, κ_i
/// given as /2π values in Hz; the 2π factors cancel.
pub fn photon_linewidth(kappa_s_hz: f64, kappa_i_hz: f64) -> Result<f64> {
    if kappa_s_hz <= 0.0 || kappa_i_hz <= 0.0 {
        return Err(Error::InvalidInput("linewidths must be positive".into()));
    }
    let s2 = kappa_s_hz * kappa_s_hz;
    let i2 = kappa_i_hz * kappa_i_hz;
    let sum = s2 + i2;
    let inner = (sum * sum + 4.0 * s2 * i2).sqrt() - sum;
    Ok((inner).sqrt() / std::f64::consts::SQRT_2)
}

/// PGR coefficient a = 32κ_ex²/κ⁵·(γ/ħω)², pairs/s/W², with the
/// pump-mode κ and κ_ex used for all three modes. Pair flux α = aP².
pub fn pair_generation_rate(triple: &ModeTriple) -> Result<f64> {
    let gamma = nonlinear_gamma(triple)?;
    let omega = TAU * triple.pump.f0_hz;
    let kex = TAU * triple.pump.kappa_ex_hz;
    let kappa = TAU * triple.pump.loaded_linewidth_hz();
    let g = gamma / (HBAR * omega);
    Ok(32.0 * kex * kex / kappa.powi(5) * g * g)
}

fn check_below_threshold(power_w: f64, p_th_w: Option<f64>) -> Result<()> {
    if let Some(p_th) = p_th_w {
        if power_w >= p_th {
            return Err(Error::Regime(format!(
                "power {power_w:.3e} W is at or above the oscillation threshold {p_th:.3e} W; the below-threshold model does not apply"
            )));
        }
    }
    Ok(())
}

/// (heralding rate n₁, bus pair flux α_bus) in pairs/s at `power_w`:
/// n₁ = αη and α_bus = αη² with α = aP², η = κ_ex/κ.
pub fn heralding_and_bus_rates(
    triple: &ModeTriple,
    power_w: f64,
    p_th_w: Option<f64>,
) -> Result<(f64, f64)> {
    check_below_threshold(power_w, p_th_w)?;
    let a = pair_generation_rate(triple)?;
    let alpha = a * power_w * power_w;
    let eta = triple.pump.kappa_ex_hz / triple.pump.loaded_linewidth_hz();
    Ok((alpha * eta, alpha * eta * eta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingObjective {
    IntracavityFlux,
    Heralding,
    BusFlux,
}

/// Analytic κ_ex maximizing the selected rate at fixed κ₀:
/// 2κ₀/3 for α, κ₀ for n₁, 4κ₀/3 for α_bus.
pub fn optimal_kex(kappa0_hz: f64, objective: CouplingObjective) -> Result<f64> {
    if kappa0_hz <= 0.0 {
        return Err(Error::InvalidInput("κ₀ must be positive".into()));
    }
    Ok(match objective {
        CouplingObjective::IntracavityFlux => 2.0 * kappa0_hz / 3.0,
        CouplingObjective::Heralding => kappa0_hz,
        CouplingObjective::BusFlux => 4.0 * kappa0_hz / 3.0,
    })
}

/// Threshold power and the flux ceilings reached exactly at threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub p_th_w: f64,
    /// Intracavity pair flux ceiling α_max = 32A²κ, pairs/s.
    pub alpha_max_hz: f64,
    /// Heralding ceiling n₁_max = 32A²κ_ex, pairs/s.
    pub n1_max_hz: f64,
    /// Bus-flux ceiling α_bus,max = 32A²κ_ex²/κ, pairs/s.
    pub bus_max_hz: f64,
}

/// P_th = A·cV_eff/(ωn₂v_g²)·κ³/κ_ex for a calibrated dimensionless A.
pub fn opo_threshold(triple: &ModeTriple, a_coeff: f64) -> Result<ThresholdReport> {
    triple.validate()?;
    if a_coeff <= 0.0 {
        return Err(Error::InvalidInput("threshold coefficient must be > 0".into()));
    }
    let omega = TAU * triple.pump.f0_hz;
    let kex = TAU * triple.pump.kappa_ex_hz;
    let kappa = TAU * triple.pump.loaded_linewidth_hz();
    let p_th = a_coeff * SPEED_OF_LIGHT * triple.v_eff_m3()
        / (omega * triple.n2_m2_per_w * triple.vg_m_per_s * triple.vg_m_per_s)
        * kappa.powi(3)
        / kex;
    let a2_32 = 32.0 * a_coeff * a_coeff;
    Ok(ThresholdReport {
        p_th_w: p_th,
        alpha_max_hz: a2_32 * kappa,
        n1_max_hz: a2_32 * kex,
        bus_max_hz: a2_32 * kex * kex / kappa,
    })
}

/// Inverts the threshold formula: the A for which `opo_threshold`
/// reproduces `measured_p_th_w`. Round-trips exactly.
pub fn calibrate_a(measured_p_th_w: f64, triple: &ModeTriple) -> Result<f64> {
    triple.validate()?;
    if measured_p_th_w <= 0.0 {
        return Err(Error::InvalidInput("measured threshold must be > 0".into()));
    }
    let omega = TAU * triple.pump.f0_hz;
    let kex = TAU * triple.pump.kappa_ex_hz;
    let kappa = TAU * triple.pump.loaded_linewidth_hz();
    Ok(measured_p_th_w * omega * triple.n2_m2_per_w * triple.vg_m_per_s * triple.vg_m_per_s
        / (SPEED_OF_LIGHT * triple.v_eff_m3())
        * kex
        / kappa.powi(3))
}

/// Spectral brightness pgr/Δν, pairs/s/W²/Hz.
pub fn brightness(pgr: f64, linewidth_hz: f64) -> Result<f64> {
    if linewidth_hz <= 0.0 {
        return Err(Error::Domain("brightness needs a positive linewidth".into()));
    }
    Ok(pgr / linewidth_hz)
}

/// Full design summary for one triple at one pump power. All rates are
/// /2π frequencies; unit-suffixed keys for serialization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SfwmReport {
    pub gamma_rad_per_s: f64,
    pub pgr_pairs_per_s_per_w2: f64,
    pub pgr_pairs_per_s_per_mw2: f64,
    pub linewidth_hz: f64,
    pub brightness_pairs_per_s_per_mw2_per_ghz: f64,
    pub power_w: f64,
    pub pair_flux_hz: f64,
    pub n1_hz: f64,
    pub bus_flux_hz: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_th_w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flux_ceiling_hz: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

/// Builds the report; `threshold_a` attaches P_th and the flux ceiling
/// and turns above-threshold powers into a warning rather than an error
/// so designs can still be compared.
pub fn design_report(
    triple: &ModeTriple,
    power_w: f64,
    threshold_a: Option<f64>,
) -> Result<SfwmReport> {
    let gamma = nonlinear_gamma(triple)?;
    let a = pair_generation_rate(triple)?;
    let linewidth = photon_linewidth(
        triple.signal.loaded_linewidth_hz(),
        triple.idler.loaded_linewidth_hz(),
    )?;
    let bright = brightness(a, linewidth)?;
    let threshold = threshold_a
        .map(|coeff| opo_threshold(triple, coeff))
        .transpose()?;
    let mut warnings = triple.warnings();
    if let Some(t) = &threshold {
        if power_w >= t.p_th_w {
            warnings.push(format!(
                "pump power {power_w:.3e} W is at or above the oscillation threshold {:.3e} W; below-threshold rates are extrapolations",
                t.p_th_w
            ));
        }
    }
    let alpha = a * power_w * power_w;
    let eta = triple.pump.kappa_ex_hz / triple.pump.loaded_linewidth_hz();
    Ok(SfwmReport {
        gamma_rad_per_s: gamma,
        pgr_pairs_per_s_per_w2: a,
        pgr_pairs_per_s_per_mw2: a * 1e-6,
        linewidth_hz: linewidth,
        // (pairs/s/W²/Hz) → /mW²/GHz: ×1e-6 × 1e9.
        brightness_pairs_per_s_per_mw2_per_ghz: bright * 1e3,
        power_w,
        pair_flux_hz: alpha,
        n1_hz: alpha * eta,
        bus_flux_hz: alpha * eta * eta,
        p_th_w: threshold.as_ref().map(|t| t.p_th_w),
        flux_ceiling_hz: threshold.as_ref().map(|t| t.alpha_max_hz),
        warnings,
    })
}
