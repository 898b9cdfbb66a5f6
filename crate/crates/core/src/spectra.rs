//! Transmission-spectrum synthesis, resonance-dip search and
//! nonlinear line fitting with the mode-split resonance model.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::lm::{levenberg_marquardt, LmOptions};
use crate::{Error, Result};

const TAU: f64 = std::f64::consts::TAU;

/// One optical resonance. All rates are `/2π` values in Hz.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResonatorMode {
    /// Resonance center ω₀/2π.
    pub f0_hz: f64,
    /// Intrinsic decay rate κ₀/2π.
    pub kappa0_hz: f64,
    /// External (bus) coupling rate κ_ex/2π.
    pub kappa_ex_hz: f64,
    /// Real part of the backscattering coupling, k_r/2π.
    #[serde(default)]
    pub split_re_hz: f64,
    /// Imaginary part of the backscattering coupling, k_i/2π.
    #[serde(default)]
    pub split_im_hz: f64,
}

impl ResonatorMode {
    pub fn new(f0_hz: f64, kappa0_hz: f64, kappa_ex_hz: f64) -> Self {
        Self {
            f0_hz,
            kappa0_hz,
            kappa_ex_hz,
            split_re_hz: 0.0,
            split_im_hz: 0.0,
        }
    }

    /// Loaded linewidth κ/2π = κ₀/2π + κ_ex/2π.
    pub fn loaded_linewidth_hz(&self) -> f64 {
        self.kappa0_hz + self.kappa_ex_hz
    }

    /// Loaded quality factor ω₀/κ.
    pub fn loaded_q(&self) -> f64 {
        self.f0_hz / self.loaded_linewidth_hz()
    }

    pub fn validate(&self) -> Result<()> {
        if self.kappa0_hz <= 0.0 || self.kappa_ex_hz < 0.0 || self.f0_hz <= 0.0 {
            return Err(Error::InvalidInput(
                "need κ₀ > 0, κ_ex ≥ 0, f₀ > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Normalized transmission trace, frequencies strictly increasing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumTrace {
    pub samples: Vec<(f64, f64)>,
    pub meta: String,
}

impl SpectrumTrace {
    pub fn validate(&self) -> Result<()> {
        if !self.samples.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(Error::InvalidInput(
                "trace frequencies must be strictly increasing".into(),
            ));
        }
        if self.samples.iter().any(|&(_, t)| !t.is_finite() || t < 0.0) {
            return Err(Error::InvalidInput(
                "transmission must be finite and ≥ 0".into(),
            ));
        }
        Ok(())
    }

    /// Read from CSV with header `frequency_hz,transmission`.
    pub fn from_csv<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut samples = Vec::new();
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
                    .parse::<f64>()
                    .map_err(|e| Error::Parse {
                        line,
                        message: e.to_string(),
                    })
            };
            let (f, t) = (get(0)?, get(1)?);
            if !f.is_finite() || !t.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: "non-finite sample".into(),
                });
            }
            samples.push((f, t));
        }
        let trace = Self {
            samples,
            meta: "csv".into(),
        };
        trace.validate()?;
        Ok(trace)
    }

    pub fn to_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["frequency_hz", "transmission"])
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        for &(f, t) in &self.samples {
            wtr.write_record([format!("{f:.6}"), format!("{t:.9}")])
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
        }
        wtr.flush()?;
        Ok(())
    }
}

#[derive(Clone, Copy)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }
    fn mul(self, o: Self) -> Self {
        Self::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
    fn div(self, o: Self) -> Self {
        let d = o.re * o.re + o.im * o.im;
        Self::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
    fn norm_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

/// Transmission of a (possibly mode-split) resonance at frequency `f`.
///
/// Evaluates `T = |1 − κ_ex D / (D² + S²/4)|²` with `D = iδ + κ/2`,
/// `S = k_r + i k_i` and `δ = 2π(f − f₀)`; all stored rates are `/2π`
/// values and are converted to angular units here.
pub fn model_transmission(mode: &ResonatorMode, f_hz: f64) -> f64 {
    let delta = TAU * (f_hz - mode.f0_hz);
    let kappa = TAU * mode.loaded_linewidth_hz();
    let kex = TAU * mode.kappa_ex_hz;
    let d = C64::new(kappa / 2.0, delta);
    let s = C64::new(TAU * mode.split_re_hz, TAU * mode.split_im_hz);
    let s2_4 = s.mul(s).mul(C64::new(0.25, 0.0));
    let denom = d.mul(d).add(s2_4);
    let frac = C64::new(kex, 0.0).mul(d).div(denom);
    C64::new(1.0 - frac.re, -frac.im).norm_sq()
}

/// Product of per-mode transmissions on `f_axis`, plus additive
/// Gaussian noise of standard deviation `noise_sigma`. Deterministic
/// for a fixed seed.
pub fn synth_trace(
    modes: &[ResonatorMode],
    f_axis: &[f64],
    noise_sigma: f64,
    seed: u64,
) -> Result<SpectrumTrace> {
    if f_axis.is_empty() {
        return Err(Error::InvalidInput("empty frequency axis".into()));
    }
    if !f_axis.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput("frequency axis must increase".into()));
    }
    if noise_sigma < 0.0 {
        return Err(Error::InvalidInput("noise sigma must be ≥ 0".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let samples = f_axis
        .iter()
        .map(|&f| {
            let t: f64 = modes.iter().map(|m| model_transmission(m, f)).product();
            let noisy = t + noise_sigma * normal.sample(&mut rng);
            (f, noisy.max(0.0))
        })
        .collect();
    Ok(SpectrumTrace {
        samples,
        meta: format!("synth seed={seed}"),
    })
}

/// Resonance-dip search: local minima at least `min_depth` below the
/// trace baseline, separated by at least `min_separation`. Returns dip
/// centers sorted ascending.
pub fn find_resonances(
    trace: &SpectrumTrace,
    min_depth: f64,
    min_separation_hz: f64,
) -> Result<Vec<f64>> {
    if !(min_depth > 0.0 && min_depth < 1.0) {
        return Err(Error::InvalidInput("min_depth must be in (0, 1)".into()));
    }
    trace.validate()?;
    let n = trace.samples.len();
    if n < 3 {
        return Ok(Vec::new());
    }
    // Baseline from the upper part of the transmission distribution:
    // dips occupy a small fraction of a many-FSR trace.
    let mut vals: Vec<f64> = trace.samples.iter().map(|&(_, t)| t).collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    let baseline = vals[(0.9 * (n - 1) as f64) as usize];

    let mut candidates: Vec<(f64, f64)> = Vec::new(); // (depth, f)
    for i in 1..n - 1 {
        let (_, tm) = trace.samples[i - 1];
        let (f, t) = trace.samples[i];
        let (_, tp) = trace.samples[i + 1];
        if t <= tm && t < tp {
            let depth = baseline - t;
            if depth >= min_depth {
                candidates.push((depth, f));
            }
        }
    }
    // Greedy by depth, enforcing the separation.
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut accepted: Vec<f64> = Vec::new();
    for (_, f) in candidates {
        if accepted.iter().all(|&g| (g - f).abs() >= min_separation_hz) {
            accepted.push(f);
        }
    }
    accepted.sort_by(|a, b| a.total_cmp(b));
    Ok(accepted)
}

/// Per-resonance fit report (JSON-serializable).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitReport {
    pub f0_hz: f64,
    pub kappa0_hz: f64,
    pub kappa_ex_hz: f64,
    pub split_re_hz: f64,
    pub split_im_hz: f64,
    /// The κ₀/κ_ex assignment is ambiguous from a single-dip fit.
    pub ambiguous: bool,
    pub rms: f64,
}

impl FitReport {
    pub fn mode(&self) -> ResonatorMode {
        ResonatorMode {
            f0_hz: self.f0_hz,
            kappa0_hz: self.kappa0_hz,
            kappa_ex_hz: self.kappa_ex_hz,
            split_re_hz: self.split_re_hz,
            split_im_hz: self.split_im_hz,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct FitOptions {
    /// Resolve the κ₀/κ_ex degeneracy to the over-coupled branch
    /// instead of the default under-coupled assignment.
    pub over_coupled: bool,
    /// Fit a linear baseline nuisance (offset + tilt) per window.
    pub linear_baseline: bool,
}

/// Fit one resonance dip inside `window = (f_lo, f_hi)`.
///
/// Returns the under-coupled parameter assignment (κ_ex < κ₀); the
/// `ambiguous` flag on the report signals that the swapped assignment
/// fits identically well.
pub fn fit_resonance(trace: &SpectrumTrace, window: (f64, f64)) -> Result<FitReport> {
    fit_resonance_with(trace, window, &FitOptions::default())
}

pub fn fit_resonance_with(
    trace: &SpectrumTrace,
    window: (f64, f64),
    opts: &FitOptions,
) -> Result<FitReport> {
    trace.validate()?;
    let pts: Vec<(f64, f64)> = trace
        .samples
        .iter()
        .copied()
        .filter(|&(f, _)| f >= window.0 && f <= window.1)
        .collect();
    if pts.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "fit window holds {} samples, need ≥ 10",
            pts.len()
        )));
    }
    let (f_min, t_min) = pts
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let t_max = pts.iter().map(|&(_, t)| t).fold(f64::MIN, f64::max);
    if t_max - t_min < 0.02 {
        return Err(Error::NoResonance);
    }

    // Initial guesses from the dip geometry, assuming under-coupling.
    let half = 0.5 * (t_max + t_min);
    let mut lo = f_min;
    let mut hi = f_min;
    for &(f, t) in pts.iter() {
        if f < f_min && t > half {
            lo = f;
        }
        if f > f_min && t > half && hi == f_min {
            hi = f;
        }
    }
    let span = pts.last().unwrap().0 - pts[0].0;
    let kappa_guess = if hi > lo { hi - lo } else { span / 10.0 };
    if span < 3.0 * kappa_guess {
        return Err(Error::InsufficientData(
            "window must span at least 3 linewidths".into(),
        ));
    }
    let depth_ratio = (t_min / t_max).clamp(0.0, 1.0);
    let kex_guess = 0.5 * kappa_guess * (1.0 - depth_ratio.sqrt());
    let k0_guess = kappa_guess - kex_guess;

    let residuals = |p: &[f64]| -> Vec<f64> {
        let mode = ResonatorMode {
            f0_hz: p[0],
            kappa0_hz: p[1].abs(),
            kappa_ex_hz: p[2].abs(),
            split_re_hz: p.get(3).map_or(0.0, |v| v.abs()),
            split_im_hz: p.get(4).map_or(0.0, |v| v.abs()),
        };
        let (b0, b1) = if opts.linear_baseline && p.len() >= 7 {
            (p[p.len() - 2], p[p.len() - 1])
        } else {
            (1.0, 0.0)
        };
        pts.iter()
            .map(|&(f, t)| {
                let base = b0 + b1 * (f - f_min) / span.max(1.0);
                base * model_transmission(&mode, f) - t
            })
            .collect()
    };

    // Parameter layout: [f0, k0, kex, (sr, si), (b0, b1)]. Stage 1
    // holds the splitting at zero; stage 2 frees it only when the
    // simple model leaves structure behind.
    let base3 = vec![
        f_min,
        k0_guess.max(kappa_guess * 0.1),
        kex_guess.max(kappa_guess * 0.05),
    ];
    let scale3 = vec![kappa_guess; 3];
    let with_split = |p: &[f64], sr: f64| {
        let mut v = p[..3].to_vec();
        v.extend([sr, 0.0]);
        v.extend_from_slice(&p[3..]);
        v
    };
    let baseline_tail: &[f64] = if opts.linear_baseline { &[1.0, 0.0] } else { &[] };

    let lm_opts = LmOptions::default();
    let mut init1 = base3.clone();
    init1.extend_from_slice(baseline_tail);
    let mut scale1 = scale3.clone();
    scale1.extend(std::iter::repeat(0.1).take(baseline_tail.len()));
    let res1 = |p: &[f64]| residuals(&with_split(p, 0.0));
    let stage1 = levenberg_marquardt(res1, &init1, &scale1, &lm_opts)?;

    let final_fit = if stage1.rms > 2e-3 {
        let init2 = with_split(&stage1.params, kappa_guess / 4.0);
        let mut scale2 = scale3.clone();
        scale2.extend([kappa_guess, kappa_guess]);
        scale2.extend(std::iter::repeat(0.1).take(baseline_tail.len()));
        match levenberg_marquardt(|p| residuals(p), &init2, &scale2, &lm_opts) {
            Ok(stage2) if stage2.rms < stage1.rms => stage2,
            _ => {
                let mut r = stage1;
                r.params = with_split(&r.params, 0.0);
                r
            }
        }
    } else {
        let mut r = stage1;
        r.params = with_split(&r.params, 0.0);
        r
    };

    let p = &final_fit.params;
    let (mut k0, mut kex) = (p[1].abs(), p[2].abs());
    let under = k0 >= kex;
    if under == opts.over_coupled {
        std::mem::swap(&mut k0, &mut kex);
    }
    let (sr, si) = (p[3].abs(), p[4].abs());
    Ok(FitReport {
        f0_hz: p[0],
        kappa0_hz: k0,
        kappa_ex_hz: kex,
        split_re_hz: sr,
        split_im_hz: si,
        ambiguous: true,
        rms: final_fit.rms,
    })
}

/// Full pipeline: dip search, windowing, per-dip fits.
pub fn fit_all_resonances(
    trace: &SpectrumTrace,
    min_depth: f64,
    min_separation_hz: f64,
    window_linewidths: f64,
) -> Result<Vec<FitReport>> {
    let centers = find_resonances(trace, min_depth, min_separation_hz)?;
    let mut reports = Vec::new();
    for &c in &centers {
        let half_window = 0.5 * min_separation_hz.max(window_linewidths * 1e9);
        let report = fit_resonance(trace, (c - half_window, c + half_window))?;
        reports.push(report);
    }
    Ok(reports)
}
