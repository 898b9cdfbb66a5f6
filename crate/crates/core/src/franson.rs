//! Energy-time entanglement: folded-interferometer event simulation
//! producing three-peak coincidence histograms, sinusoidal fringe
//! fitting, visibility and the CHSH margin.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::counting::{correlate, CorrelationHistogram, DetectionChain, SourceTruth};
use crate::{Error, Result};

const TAU: f64 = std::f64::consts::TAU;

/// Interferometer settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FransonConfig {
    /// Long−short arm delay ΔT, s.
    pub delta_t_s: f64,
    /// Pump phase φ, rad.
    pub phase_rad: f64,
    /// Interference visibility of the apparatus, (0, 1]. Zero disables
    /// interference for diagnostics.
    pub intrinsic_visibility: f64,
    /// Central-peak integration window, s.
    pub window_s: f64,
}

impl FransonConfig {
    pub fn validate(&self) -> Result<()> {
        if self.delta_t_s <= 0.0 || self.window_s <= 0.0 {
            return Err(Error::InvalidInput("ΔT and window must be > 0".into()));
        }
        if self.phase_rad < 0.0 {
            return Err(Error::InvalidInput("phase must be ≥ 0".into()));
        }
        if !(0.0..=1.0).contains(&self.intrinsic_visibility) {
            return Err(Error::InvalidInput("visibility must be in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Central-peak coincidence probability p = (1 + cos2φ)/4.
pub fn franson_probability(phase_rad: f64) -> f64 {
    (1.0 + (2.0 * phase_rad).cos()) / 4.0
}

/// Simulates the interferometer output and returns the three-peak
/// histogram over [−max_offset, +max_offset].
///
/// Event rules: each photon of a pair independently takes the short or
/// long arm (probability ½ each, adding 0 or ΔT); same-arm pairs form
/// the central peak and survive with probability (1 + V·cos2φ)/2;
/// mixed-arm pairs form the ±ΔT side peaks and survive with
/// probability ½ (the single-port passage probability, which keeps the
/// fourfold central/side ratio at φ = 0). Singles and noise photons
/// take an arm but interfere with nothing.
pub fn simulate_franson(
    truth: &SourceTruth,
    config: &FransonConfig,
    chain: &DetectionChain,
    duration_s: f64,
    seed: u64,
    bin_width_s: f64,
    max_offset_s: f64,
) -> Result<CorrelationHistogram> {
    truth.validate()?;
    config.validate()?;
    chain.validate()?;
    if duration_s <= 0.0 {
        return Err(Error::InvalidInput("duration must be > 0".into()));
    }
    let corr_fwhm = std::f64::consts::LN_2
        * (1.0 / (TAU * truth.kappa_s_hz) + 1.0 / (TAU * truth.kappa_i_hz));
    if config.delta_t_s <= corr_fwhm {
        return Err(Error::InvalidInput(format!(
            "arm delay {:.3e} s does not exceed the two-photon correlation FWHM {:.3e} s; the three peaks would overlap",
            config.delta_t_s, corr_fwhm
        )));
    }
    if max_offset_s < config.delta_t_s + 5.0 * corr_fwhm {
        return Err(Error::InvalidInput(
            "max offset must cover the ±ΔT side peaks".into(),
        ));
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let p = truth.power_w;
    let pair_rate = truth.pair_flux_hz();
    let accept_same = (1.0 + config.intrinsic_visibility * (2.0 * config.phase_rad).cos()) / 2.0;

    let mut signal: Vec<f64> = Vec::new();
    let mut idler: Vec<f64> = Vec::new();

    let draw_count = |rng: &mut ChaCha12Rng, mean: f64| -> u64 {
        if mean <= 0.0 {
            0
        } else {
            Poisson::new(mean).unwrap().sample(rng) as u64
        }
    };
    let pair_delay = |rng: &mut ChaCha12Rng| -> f64 {
        let p_pos = truth.kappa_s_hz / (truth.kappa_s_hz + truth.kappa_i_hz);
        let e: f64 = -(rng.gen::<f64>()).ln();
        if rng.gen::<f64>() < p_pos {
            e / (TAU * truth.kappa_i_hz)
        } else {
            -e / (TAU * truth.kappa_s_hz)
        }
    };

    // Pairs detected on both channels.
    let n_both = draw_count(&mut rng, pair_rate * chain.eta_s * chain.eta_i * duration_s);
    for _ in 0..n_both {
        let t = rng.gen::<f64>() * duration_s;
        let tau = pair_delay(&mut rng);
        let arm_s = rng.gen::<bool>();
        let arm_i = rng.gen::<bool>();
        let survives = if arm_s == arm_i {
            rng.gen::<f64>() < accept_same
        } else {
            rng.gen::<bool>()
        };
        if survives {
            signal.push(t + if arm_s { config.delta_t_s } else { 0.0 });
            idler.push(t + tau + if arm_i { config.delta_t_s } else { 0.0 });
        }
    }
    // Singles (one-channel pair remnants and noise) pass half the time.
    let add_singles = |rng: &mut ChaCha12Rng, rate: f64, out: &mut Vec<f64>| {
        let n = draw_count(rng, rate * 0.5 * duration_s);
        for _ in 0..n {
            let t = rng.gen::<f64>() * duration_s;
            out.push(t + if rng.gen::<bool>() { config.delta_t_s } else { 0.0 });
        }
    };
    add_singles(
        &mut rng,
        pair_rate * chain.eta_s * (1.0 - chain.eta_i) + chain.eta_s * truth.b_s_hz_per_w * p,
        &mut signal,
    );
    add_singles(
        &mut rng,
        pair_rate * chain.eta_i * (1.0 - chain.eta_s) + chain.eta_i * truth.b_i_hz_per_w * p,
        &mut idler,
    );
    // Dark counts are detector-local: no interferometer, no halving.
    for (rate, out) in [(chain.dark_s_hz, &mut signal), (chain.dark_i_hz, &mut idler)] {
        let n = draw_count(&mut rng, rate * duration_s);
        for _ in 0..n {
            out.push(rng.gen::<f64>() * duration_s);
        }
    }

    if chain.jitter_sigma_s > 0.0 {
        let normal = Normal::new(0.0, chain.jitter_sigma_s).unwrap();
        for t in signal.iter_mut().chain(idler.iter_mut()) {
            *t += normal.sample(&mut rng);
        }
    }

    let finalize = |mut tags: Vec<f64>, channel: &str| -> crate::counting::TimeTagStream {
        tags.retain(|&t| (0.0..=duration_s).contains(&t));
        tags.sort_by(|a, b| a.total_cmp(b));
        if chain.dead_time_s > 0.0 {
            let mut out = Vec::with_capacity(tags.len());
            let mut last = f64::NEG_INFINITY;
            for t in tags {
                if t - last >= chain.dead_time_s {
                    out.push(t);
                    last = t;
                }
            }
            tags = out;
        }
        crate::counting::TimeTagStream {
            channel: channel.into(),
            tags,
            duration_s,
        }
    };
    let signal = finalize(signal, "signal");
    let idler = finalize(idler, "idler");
    correlate(&signal, &idler, bin_width_s, max_offset_s)
}

/// Central-peak and side-peak integrals of a three-peak histogram.
pub fn peak_integrals(
    hist: &CorrelationHistogram,
    delta_t_s: f64,
    window_s: f64,
) -> (u64, u64, u64) {
    let w2 = window_s / 2.0;
    (
        hist.window_counts(-delta_t_s - w2, -delta_t_s + w2),
        hist.window_counts(-w2, w2),
        hist.window_counts(delta_t_s - w2, delta_t_s + w2),
    )
}

/// Result of the sinusoidal fringe fit n_cc(φ) = ½A·[1 + V·cos2φ].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FringeFit {
    pub amplitude_hz: f64,
    pub visibility: f64,
    /// 1σ confidence width of the visibility, from fit residuals.
    pub visibility_ci: f64,
    /// Cross-check estimate (max−min)/(max+min) of the fitted model.
    pub visibility_extrema: f64,
}

/// Linear least squares in the basis [1, cos2φ].
pub fn fringe_fit(phases_rad: &[f64], rates_hz: &[f64]) -> Result<FringeFit> {
    if phases_rad.len() != rates_hz.len() {
        return Err(Error::InvalidInput("phase/rate length mismatch".into()));
    }
    if phases_rad.len() < 5 {
        return Err(Error::InsufficientData(
            "fringe fit needs ≥ 5 phase points".into(),
        ));
    }
    let span = phases_rad.iter().copied().fold(f64::MIN, f64::max)
        - phases_rad.iter().copied().fold(f64::MAX, f64::min);
    if span < std::f64::consts::PI / 2.0 {
        return Err(Error::InsufficientData(
            "phase points must span at least half a fringe period".into(),
        ));
    }
    let cos_vals: Vec<f64> = phases_rad.iter().map(|&p| (2.0 * p).cos()).collect();
    let spread = cos_vals.iter().copied().fold(f64::MIN, f64::max)
        - cos_vals.iter().copied().fold(f64::MAX, f64::min);
    if spread < 1e-6 {
        return Err(Error::Identifiability(
            "all phases are equivalent modulo π; cos2φ does not vary".into(),
        ));
    }
    let n = phases_rad.len() as f64;
    // Normal equations for y = c0 + c1·cos2φ.
    let sx: f64 = cos_vals.iter().sum();
    let sxx: f64 = cos_vals.iter().map(|x| x * x).sum();
    let sy: f64 = rates_hz.iter().sum();
    let sxy: f64 = cos_vals.iter().zip(rates_hz).map(|(x, y)| x * y).sum();
    let det = n * sxx - sx * sx;
    if det.abs() < 1e-12 * n * sxx.max(1.0) {
        return Err(Error::Identifiability("degenerate phase sampling".into()));
    }
    let c0 = (sxx * sy - sx * sxy) / det;
    let c1 = (n * sxy - sx * sy) / det;
    if c0 <= 0.0 {
        return Err(Error::Identifiability(
            "non-positive fitted mean rate".into(),
        ));
    }
    let amplitude = 2.0 * c0;
    let visibility = c1 / c0;

    // Residual variance → coefficient covariance → V uncertainty.
    let dof = (phases_rad.len() - 2).max(1) as f64;
    let ss_res: f64 = cos_vals
        .iter()
        .zip(rates_hz)
        .map(|(&x, &y)| {
            let r = y - c0 - c1 * x;
            r * r
        })
        .sum();
    let s2 = ss_res / dof;
    let var_c0 = s2 * sxx / det;
    let var_c1 = s2 * n / det;
    let cov_c0c1 = -s2 * sx / det;
    // V = c1/c0: first-order propagation.
    let var_v = (var_c1 + visibility * visibility * var_c0
        - 2.0 * visibility * cov_c0c1)
        / (c0 * c0);
    let visibility_ci = var_v.max(0.0).sqrt();

    let max = c0 + c1.abs();
    let min = c0 - c1.abs();
    let visibility_extrema = if max + min > 0.0 {
        (max - min) / (max + min)
    } else {
        1.0
    };
    Ok(FringeFit {
        amplitude_hz: amplitude,
        visibility,
        visibility_ci,
        visibility_extrema,
    })
}

/// CHSH comparison: a two-photon visibility above 1/√2 can violate the
/// Bell inequality.
pub fn chsh_margin(visibility: f64) -> Result<(bool, f64)> {
    if !(0.0..=1.0).contains(&visibility) {
        return Err(Error::InvalidInput("visibility must be in [0, 1]".into()));
    }
    let limit = std::f64::consts::FRAC_1_SQRT_2;
    Ok((visibility > limit, visibility - limit))
}
