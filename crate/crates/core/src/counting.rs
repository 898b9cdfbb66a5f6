//! Stochastic time-tag simulation of the full detection chain, plus
//! the analysis pipelines that consume tag streams: correlation
//! histograms, coincidence/accidental rates, heralded g²(0) and
//! power-sweep rate extraction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::numeric::least_squares;
use crate::{Error, Result};

const TAU: f64 = std::f64::consts::TAU;

/// Detector/channel parameters shared by both arms of the setup.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectionChain {
    /// Total signal-channel efficiency, (0, 1].
    pub eta_s: f64,
    /// Total idler-channel efficiency, (0, 1].
    pub eta_i: f64,
    /// Dark-count rates, Hz.
    pub dark_s_hz: f64,
    pub dark_i_hz: f64,
    /// Gaussian timing jitter per detector, s (standard deviation).
    pub jitter_sigma_s: f64,
    /// Non-paralyzable dead time per detector, s.
    pub dead_time_s: f64,
}

impl DetectionChain {
    pub fn validate(&self) -> Result<()> {
        let eta_ok = |e: f64| e > 0.0 && e <= 1.0;
        if !eta_ok(self.eta_s) || !eta_ok(self.eta_i) {
            return Err(Error::InvalidInput("efficiencies must be in (0, 1]".into()));
        }
        if self.dark_s_hz < 0.0
            || self.dark_i_hz < 0.0
            || self.jitter_sigma_s < 0.0
            || self.dead_time_s < 0.0
        {
            return Err(Error::InvalidInput(
                "dark rates, jitter and dead time must be ≥ 0".into(),
            ));
        }
        Ok(())
    }

    /// Ideal chain: η=1, no darks, no jitter, no dead time.
    pub fn lossless() -> Self {
        Self {
            eta_s: 1.0,
            eta_i: 1.0,
            dark_s_hz: 0.0,
            dark_i_hz: 0.0,
            jitter_sigma_s: 0.0,
            dead_time_s: 0.0,
        }
    }
}

/// Ground-truth source parameters driving the simulation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SourceTruth {
    /// PGR coefficient a, pairs/s/W²; pair flux = a·P².
    pub a_pairs_per_s_per_w2: f64,
    /// Linear noise-photon coefficients, Hz/W.
    pub b_s_hz_per_w: f64,
    pub b_i_hz_per_w: f64,
    /// Loaded linewidths (/2π, Hz) setting the pair-delay decay.
    pub kappa_s_hz: f64,
    pub kappa_i_hz: f64,
    /// Pump power, W.
    pub power_w: f64,
    /// Optional calibrated oscillation threshold; simulation refuses
    /// to run at or above it.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p_th_w: Option<f64>,
}

impl SourceTruth {
    pub fn validate(&self) -> Result<()> {
        if self.a_pairs_per_s_per_w2 < 0.0
            || self.b_s_hz_per_w < 0.0
            || self.b_i_hz_per_w < 0.0
            || self.kappa_s_hz <= 0.0
            || self.kappa_i_hz <= 0.0
            || self.power_w < 0.0
        {
            return Err(Error::InvalidInput(
                "source rates must be ≥ 0 and linewidths > 0".into(),
            ));
        }
        Ok(())
    }

    pub fn pair_flux_hz(&self) -> f64 {
        self.a_pairs_per_s_per_w2 * self.power_w * self.power_w
    }

    pub fn with_power(&self, power_w: f64) -> Self {
        let mut t = self.clone();
        t.power_w = power_w;
        t
    }
}

/// Sorted detector timestamps over one acquisition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimeTagStream {
    pub channel: String,
    /// Timestamps in s, sorted ascending, within [0, duration].
    pub tags: Vec<f64>,
    pub duration_s: f64,
}

impl TimeTagStream {
    pub fn validate(&self) -> Result<()> {
        if self.duration_s <= 0.0 {
            return Err(Error::InvalidInput("duration must be > 0".into()));
        }
        if !self.tags.windows(2).all(|w| w[0] <= w[1]) {
            return Err(Error::InvalidInput("tags must be sorted".into()));
        }
        if self
            .tags
            .iter()
            .any(|&t| !(0.0..=self.duration_s).contains(&t))
        {
            return Err(Error::InvalidInput("tags must lie in [0, duration]".into()));
        }
        Ok(())
    }

    pub fn rate_hz(&self) -> f64 {
        self.tags.len() as f64 / self.duration_s
    }

    /// CSV interchange: header `channel,timestamp_s`, sorted by time.
    pub fn to_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["channel", "timestamp_s"])
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        for &t in &self.tags {
            wtr.write_record([self.channel.as_str(), &format!("{t:.12e}")])
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn from_csv<R: std::io::Read>(reader: R, duration_s: f64) -> Result<Vec<Self>> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut by_channel: Vec<(String, Vec<f64>)> = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let line = i + 2;
            let record = record.map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
            let channel = record
                .get(0)
                .ok_or_else(|| Error::Parse {
                    line,
                    message: "missing channel".into(),
                })?
                .to_string();
            let t: f64 = record
                .get(1)
                .ok_or_else(|| Error::Parse {
                    line,
                    message: "missing timestamp".into(),
                })?
                .trim()
                .parse()
                .map_err(|e: std::num::ParseFloatError| Error::Parse {
                    line,
                    message: e.to_string(),
                })?;
            match by_channel.iter_mut().find(|(c, _)| *c == channel) {
                Some((_, v)) => v.push(t),
                None => by_channel.push((channel, vec![t])),
            }
        }
        by_channel
            .into_iter()
            .map(|(channel, mut tags)| {
                tags.sort_by(|a, b| a.total_cmp(b));
                let s = Self {
                    channel,
                    tags,
                    duration_s,
                };
                s.validate()?;
                Ok(s)
            })
            .collect()
    }
}

/// Binned cross-correlation counts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationHistogram {
    pub bin_width_s: f64,
    /// Bin-center offsets, s.
    pub offsets_s: Vec<f64>,
    pub counts: Vec<u64>,
    pub acquisition_s: f64,
}

impl CorrelationHistogram {
    pub fn validate(&self) -> Result<()> {
        if self.bin_width_s <= 0.0 {
            return Err(Error::InvalidInput("bin width must be > 0".into()));
        }
        if self.offsets_s.len() != self.counts.len() {
            return Err(Error::InvalidInput(
                "offsets and counts must have equal length".into(),
            ));
        }
        Ok(())
    }

    pub fn to_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["offset_s", "counts"])
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        for (&off, &c) in self.offsets_s.iter().zip(&self.counts) {
            wtr.write_record([format!("{off:.6e}"), c.to_string()])
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Linear-interpolated FWHM of the histogram peak, s.
    pub fn fwhm_s(&self) -> Result<f64> {
        let ys: Vec<f64> = self.counts.iter().map(|&c| c as f64).collect();
        crate::numeric::fwhm(&self.offsets_s, &ys).ok_or_else(|| {
            Error::UndefinedStatistic("histogram has no resolvable peak".into())
        })
    }

    /// Sum of counts in bins whose centers fall in [lo, hi].
    pub fn window_counts(&self, lo: f64, hi: f64) -> u64 {
        self.offsets_s
            .iter()
            .zip(&self.counts)
            .filter(|&(&off, _)| off >= lo && off <= hi)
            .map(|(_, &c)| c)
            .sum()
    }
}

/// Measured singles/net-coincidence rates across a power sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerSweepRecord {
    /// Rows of (power W, n_s Hz, n_i Hz, n_net Hz), powers increasing.
    pub rows: Vec<(f64, f64, f64, f64)>,
}

impl PowerSweepRecord {
    pub fn validate(&self) -> Result<()> {
        if self.rows.len() < 3 {
            return Err(Error::InsufficientData(format!(
                "sweep needs ≥ 3 rows, got {}",
                self.rows.len()
            )));
        }
        if !self.rows.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(Error::InvalidInput("powers must strictly increase".into()));
        }
        Ok(())
    }

    pub fn to_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["power_w", "ns_hz", "ni_hz", "nnet_hz"])
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        for &(p, ns, ni, net) in &self.rows {
            wtr.write_record([
                format!("{p:.6e}"),
                format!("{ns:.6e}"),
                format!("{ni:.6e}"),
                format!("{net:.6e}"),
            ])
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn from_csv<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut rows = Vec::new();
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
            rows.push((get(0)?, get(1)?, get(2)?, get(3)?));
        }
        let rec = Self { rows };
        rec.validate()?;
        Ok(rec)
    }
}

fn poisson_count(rng: &mut ChaCha12Rng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).unwrap().sample(rng) as u64
}

fn uniform_sorted_times(rng: &mut ChaCha12Rng, n: u64, duration: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * duration).collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// Two-sided exponential pair delay τ = t_idler − t_signal:
/// density ∝ exp(−2πκ_i·τ) for τ > 0 and exp(+2πκ_s·τ) for τ < 0.
fn sample_pair_delay(rng: &mut ChaCha12Rng, kappa_s_hz: f64, kappa_i_hz: f64) -> f64 {
    // P(τ>0) weights the side with the slower decay: κ_s/(κ_s+κ_i).
    let p_pos = kappa_s_hz / (kappa_s_hz + kappa_i_hz);
    let u: f64 = rng.gen();
    let e: f64 = -(rng.gen::<f64>()).ln();
    if u < p_pos {
        e / (TAU * kappa_i_hz)
    } else {
        -e / (TAU * kappa_s_hz)
    }
}

fn apply_jitter(rng: &mut ChaCha12Rng, tags: &mut [f64], sigma: f64) {
    if sigma <= 0.0 {
        return;
    }
    let normal = Normal::new(0.0, sigma).unwrap();
    for t in tags.iter_mut() {
        *t += normal.sample(rng);
    }
}

fn finalize_channel(mut tags: Vec<f64>, duration: f64, dead_time: f64) -> Vec<f64> {
    tags.retain(|&t| (0.0..=duration).contains(&t));
    tags.sort_by(|a, b| a.total_cmp(b));
    if dead_time > 0.0 {
        let mut out = Vec::with_capacity(tags.len());
        let mut last = f64::NEG_INFINITY;
        for t in tags {
            if t - last >= dead_time {
                out.push(t);
                last = t;
            }
        }
        out
    } else {
        tags
    }
}

/// Simulates one acquisition. Returns `[signal, idler]` streams, or
/// `[signal_a, signal_b, idler]` when `hbt_split` routes the surviving
/// signal tags 50/50 onto two detectors.
///
/// Event model: pairs arrive as a homogeneous Poisson process of rate
/// aP²; the signal–idler delay follows the two-sided exponential set by
/// the cavity decays; noise photons are independent Poisson processes
/// of rates b·P; detection applies η-thinning, dark counts, per-tag
/// Gaussian jitter and a non-paralyzable dead time. Deterministic for a
/// fixed seed.
pub fn simulate_tags(
    truth: &SourceTruth,
    chain: &DetectionChain,
    duration_s: f64,
    seed: u64,
    hbt_split: bool,
) -> Result<Vec<TimeTagStream>> {
    truth.validate()?;
    chain.validate()?;
    if duration_s <= 0.0 {
        return Err(Error::InvalidInput("duration must be > 0".into()));
    }
    if let Some(p_th) = truth.p_th_w {
        if truth.power_w >= p_th {
            return Err(Error::Regime(format!(
                "pump power {:.3e} W is at or above the calibrated threshold {:.3e} W",
                truth.power_w, p_th
            )));
        }
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let pair_rate = truth.pair_flux_hz();
    let p = truth.power_w;

    // Detected-category thinning: pairs that survive on both channels,
    // signal only, or idler only are three independent Poisson
    // processes; undetected pairs never need to be generated.
    let r_both = pair_rate * chain.eta_s * chain.eta_i;
    let r_sig_only = pair_rate * chain.eta_s * (1.0 - chain.eta_i);
    let r_idl_only = pair_rate * chain.eta_i * (1.0 - chain.eta_s);

    let mut signal: Vec<f64> = Vec::new();
    let mut idler: Vec<f64> = Vec::new();

    let n_both = poisson_count(&mut rng, r_both * duration_s);
    for t in uniform_sorted_times(&mut rng, n_both, duration_s) {
        let tau = sample_pair_delay(&mut rng, truth.kappa_s_hz, truth.kappa_i_hz);
        signal.push(t);
        idler.push(t + tau);
    }
    let n_s_only = poisson_count(&mut rng, r_sig_only * duration_s);
    signal.extend(uniform_sorted_times(&mut rng, n_s_only, duration_s));
    let n_i_only = poisson_count(&mut rng, r_idl_only * duration_s);
    for t in uniform_sorted_times(&mut rng, n_i_only, duration_s) {
        let tau = sample_pair_delay(&mut rng, truth.kappa_s_hz, truth.kappa_i_hz);
        idler.push(t + tau);
    }

    // Detected noise photons (η-thinned) and dark counts.
    let n_noise_s = poisson_count(
        &mut rng,
        (chain.eta_s * truth.b_s_hz_per_w * p + chain.dark_s_hz) * duration_s,
    );
    signal.extend(uniform_sorted_times(&mut rng, n_noise_s, duration_s));
    let n_noise_i = poisson_count(
        &mut rng,
        (chain.eta_i * truth.b_i_hz_per_w * p + chain.dark_i_hz) * duration_s,
    );
    idler.extend(uniform_sorted_times(&mut rng, n_noise_i, duration_s));

    apply_jitter(&mut rng, &mut signal, chain.jitter_sigma_s);
    apply_jitter(&mut rng, &mut idler, chain.jitter_sigma_s);

    let streams = if hbt_split {
        let mut a = Vec::with_capacity(signal.len() / 2 + 8);
        let mut b = Vec::with_capacity(signal.len() / 2 + 8);
        for t in signal {
            if rng.gen::<bool>() {
                a.push(t);
            } else {
                b.push(t);
            }
        }
        vec![
            ("signal_a", finalize_channel(a, duration_s, chain.dead_time_s)),
            ("signal_b", finalize_channel(b, duration_s, chain.dead_time_s)),
            ("idler", finalize_channel(idler, duration_s, chain.dead_time_s)),
        ]
    } else {
        vec![
            ("signal", finalize_channel(signal, duration_s, chain.dead_time_s)),
            ("idler", finalize_channel(idler, duration_s, chain.dead_time_s)),
        ]
    };
    Ok(streams
        .into_iter()
        .map(|(channel, tags)| TimeTagStream {
            channel: channel.into(),
            tags,
            duration_s,
        })
        .collect())
}

/// Cross-correlation histogram of offsets t₂ − t₁ over
/// [−max_offset, +max_offset], linear-time two-pointer sweep.
/// All tag pairs within range are counted, so correlating a stream
/// with itself places (at least) one count per tag at zero offset.
pub fn correlate(
    s1: &TimeTagStream,
    s2: &TimeTagStream,
    bin_width_s: f64,
    max_offset_s: f64,
) -> Result<CorrelationHistogram> {
    if bin_width_s <= 0.0 {
        return Err(Error::InvalidInput("bin width must be > 0".into()));
    }
    if max_offset_s < 10.0 * bin_width_s {
        return Err(Error::InvalidInput(
            "max offset must be ≥ 10 bin widths".into(),
        ));
    }
    s1.validate()?;
    s2.validate()?;
    let n_bins = (2.0 * max_offset_s / bin_width_s).ceil() as usize;
    let n_bins = n_bins.max(1);
    let lo = -(n_bins as f64) * bin_width_s / 2.0;
    let mut counts = vec![0u64; n_bins];
    let mut start = 0usize;
    for &t1 in &s1.tags {
        while start < s2.tags.len() && s2.tags[start] < t1 - max_offset_s {
            start += 1;
        }
        for &t2 in &s2.tags[start..] {
            if t2 > t1 + max_offset_s {
                break;
            }
            let idx = ((t2 - t1 - lo) / bin_width_s) as usize;
            if idx < n_bins {
                counts[idx] += 1;
            }
        }
    }
    let offsets_s = (0..n_bins)
        .map(|i| lo + (i as f64 + 0.5) * bin_width_s)
        .collect();
    Ok(CorrelationHistogram {
        bin_width_s,
        offsets_s,
        counts,
        acquisition_s: s1.duration_s.min(s2.duration_s),
    })
}

/// Coincidence metrics from a histogram.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoincidenceRates {
    pub n_cc_hz: f64,
    pub n_acc_hz: f64,
    pub n_net_hz: f64,
    pub car: f64,
}

/// Integrates the central window [−w/2, +w/2] and an identical window
/// at `accidental_offset_s`; CAR = n_cc/n_acc − 1.
pub fn coincidence_rates(
    hist: &CorrelationHistogram,
    window_s: f64,
    accidental_offset_s: f64,
) -> Result<CoincidenceRates> {
    hist.validate()?;
    if window_s < hist.bin_width_s {
        return Err(Error::InvalidInput(
            "window must be at least one bin wide".into(),
        ));
    }
    let max_off = hist.offsets_s.last().copied().unwrap_or(0.0);
    if accidental_offset_s.abs() + window_s / 2.0 > max_off + hist.bin_width_s / 2.0 {
        return Err(Error::InvalidInput(
            "accidental window exceeds histogram range".into(),
        ));
    }
    let w2 = window_s / 2.0;
    let cc = hist.window_counts(-w2, w2) as f64;
    let acc = hist.window_counts(accidental_offset_s - w2, accidental_offset_s + w2) as f64;
    if acc == 0.0 {
        return Err(Error::UndefinedStatistic(
            "accidental window holds zero counts; CAR is undefined (extend the acquisition or widen the window)".into(),
        ));
    }
    let t = hist.acquisition_s;
    Ok(CoincidenceRates {
        n_cc_hz: cc / t,
        n_acc_hz: acc / t,
        n_net_hz: (cc - acc) / t,
        car: cc / acc - 1.0,
    })
}

/// Heralded autocorrelation g²ₕ(0) = n₁₂₃·n₁/(n₁₂·n₁₃) with coincidence
/// windows of full width `window_s` centered on each idler herald.
/// Returns the estimate and a Poisson-propagated 1σ uncertainty.
pub fn heralded_g2(
    idler: &TimeTagStream,
    sig_a: &TimeTagStream,
    sig_b: &TimeTagStream,
    window_s: f64,
) -> Result<(f64, f64)> {
    for s in [idler, sig_a, sig_b] {
        s.validate()?;
    }
    if window_s <= 0.0 {
        return Err(Error::InvalidInput("window must be > 0".into()));
    }
    let w2 = window_s / 2.0;
    let n1 = idler.tags.len() as f64;
    let mut n12 = 0u64;
    let mut n13 = 0u64;
    let mut n123 = 0u64;
    let mut ia = 0usize;
    let mut ib = 0usize;
    for &h in &idler.tags {
        while ia < sig_a.tags.len() && sig_a.tags[ia] < h - w2 {
            ia += 1;
        }
        while ib < sig_b.tags.len() && sig_b.tags[ib] < h - w2 {
            ib += 1;
        }
        let hit_a = sig_a.tags[ia..].first().is_some_and(|&t| t <= h + w2);
        let hit_b = sig_b.tags[ib..].first().is_some_and(|&t| t <= h + w2);
        if hit_a {
            n12 += 1;
        }
        if hit_b {
            n13 += 1;
        }
        if hit_a && hit_b {
            n123 += 1;
        }
    }
    if n12 == 0 || n13 == 0 || n1 == 0.0 {
        return Err(Error::UndefinedStatistic(
            "no heralded coincidences; g²ₕ is undefined".into(),
        ));
    }
    let (n12, n13, n123) = (n12 as f64, n13 as f64, n123 as f64);
    let g2h = n123 * n1 / (n12 * n13);
    let sigma = if n123 > 0.0 {
        g2h * (1.0 / n123 + 1.0 / n1 + 1.0 / n12 + 1.0 / n13).sqrt()
    } else {
        // Zero triples: quote the one-count scale as the uncertainty.
        n1 / (n12 * n13)
    };
    Ok((g2h, sigma))
}

/// Parameters recovered from a power sweep via the distinct P-scaling
/// of singles (η(aP²+bP)) and net coincidences (η_sη_i·aP²).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PgrExtraction {
    pub a_pairs_per_s_per_w2: f64,
    pub eta_s: f64,
    pub eta_i: f64,
    pub b_s_hz_per_w: f64,
    pub b_i_hz_per_w: f64,
}

/// Least-squares fits of n_s = η_s(aP²+b_sP), n_i = η_i(aP²+b_iP) and
/// n_net = η_sη_i·aP²; the quadratic coefficients c₁=η_s·a, c₂=η_i·a,
/// c₃=η_sη_i·a invert to a = c₁c₂/c₃, η_s = c₃/c₂, η_i = c₃/c₁.
pub fn extract_pgr(sweep: &PowerSweepRecord) -> Result<PgrExtraction> {
    sweep.validate()?;
    if sweep.rows.len() < 4 {
        return Err(Error::InsufficientData(
            "PGR extraction needs ≥ 4 powers".into(),
        ));
    }
    let quad_linear = |ys: &[f64]| -> Result<(f64, f64)> {
        let rows: Vec<Vec<f64>> = sweep
            .rows
            .iter()
            .map(|&(p, ..)| vec![p * p, p])
            .collect();
        let c = least_squares(&rows, ys)?;
        Ok((c[0], c[1]))
    };
    let ns: Vec<f64> = sweep.rows.iter().map(|r| r.1).collect();
    let ni: Vec<f64> = sweep.rows.iter().map(|r| r.2).collect();
    let nnet: Vec<f64> = sweep.rows.iter().map(|r| r.3).collect();
    let (c1, d1) = quad_linear(&ns)?;
    let (c2, d2) = quad_linear(&ni)?;
    // Net coincidences: pure quadratic.
    let rows: Vec<Vec<f64>> = sweep.rows.iter().map(|&(p, ..)| vec![p * p]).collect();
    let c3 = least_squares(&rows, &nnet)?[0];
    if c1 <= 0.0 || c2 <= 0.0 || c3 <= 0.0 {
        return Err(Error::Identifiability(format!(
            "non-positive quadratic coefficients (c1={c1:.3e}, c2={c2:.3e}, c3={c3:.3e})"
        )));
    }
    let a = c1 * c2 / c3;
    let eta_s = c3 / c2;
    let eta_i = c3 / c1;
    Ok(PgrExtraction {
        a_pairs_per_s_per_w2: a,
        eta_s,
        eta_i,
        b_s_hz_per_w: (d1 / eta_s).max(0.0),
        b_i_hz_per_w: (d2 / eta_i).max(0.0),
    })
}
