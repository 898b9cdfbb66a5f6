//! Cross-module integration flows: synthetic spectroscopy feeding the
//! design formulas, and a design feeding the counting simulation.

use ringpair::counting::{
    coincidence_rates, correlate, simulate_tags, DetectionChain, SourceTruth,
};
use ringpair::fixtures;
use ringpair::sfwm::{design_report, pair_generation_rate, photon_linewidth};
use ringpair::spectra::{fit_all_resonances, synth_trace, ResonatorMode};

/// Fit a noisy synthetic trace, rebuild the mode triple from the fitted
/// parameters, and check the design numbers track the ground truth.
#[test]
fn spectroscopy_to_design_round_trip() {
    let modes = fixtures::te20_modes();
    let mut f_axis = Vec::new();
    for m in &modes {
        for i in 0..3001 {
            f_axis.push(m.f0_hz - 3e9 + 6e9 * i as f64 / 3000.0);
        }
    }
    f_axis.sort_by(|a, b| a.total_cmp(b));
    let trace = synth_trace(&modes, &f_axis, 0.005, 17).unwrap();
    let mut reports = fit_all_resonances(&trace, 0.3, 500e9, 6.0).unwrap();
    assert_eq!(reports.len(), 3);
    reports.sort_by(|a, b| a.f0_hz.total_cmp(&b.f0_hz));

    let mut fitted = fixtures::te20_triple();
    // Ascending in frequency: idler, pump, signal.
    let as_mode = |r: &ringpair::spectra::FitReport| {
        ResonatorMode::new(r.f0_hz, r.kappa0_hz, r.kappa_ex_hz)
    };
    fitted.idler = as_mode(&reports[0]);
    fitted.pump = as_mode(&reports[1]);
    fitted.signal = as_mode(&reports[2]);

    let truth_triple = fixtures::te20_triple();
    let a_fit = pair_generation_rate(&fitted).unwrap();
    let a_true = pair_generation_rate(&truth_triple).unwrap();
    assert!(
        (a_fit - a_true).abs() / a_true < 0.10,
        "PGR from fitted spectrum off by {:.1}%",
        100.0 * (a_fit - a_true).abs() / a_true
    );

    let report = design_report(&fitted, 1e-3, None).unwrap();
    assert!(report.pgr_pairs_per_s_per_mw2 > 0.0);
    assert!(report.linewidth_hz > 0.0);
}

/// Feed the designed PGR into the counting simulation and verify the
/// measured net coincidence rate matches the a·P²·η_s·η_i prediction.
#[test]
fn design_to_counting_closed_loop() {
    let triple = fixtures::te20_triple();
    let a = pair_generation_rate(&triple).unwrap();
    let power = 3e-4;
    let truth = SourceTruth {
        a_pairs_per_s_per_w2: a,
        b_s_hz_per_w: 0.0,
        b_i_hz_per_w: 0.0,
        kappa_s_hz: triple.signal.loaded_linewidth_hz(),
        kappa_i_hz: triple.idler.loaded_linewidth_hz(),
        power_w: power,
        p_th_w: None,
    };
    let chain = DetectionChain {
        eta_s: 0.10,
        eta_i: 0.10,
        dark_s_hz: 0.0,
        dark_i_hz: 0.0,
        jitter_sigma_s: 0.0,
        dead_time_s: 0.0,
    };
    let streams = simulate_tags(&truth, &chain, 30.0, 5, false).unwrap();
    let hist = correlate(&streams[0], &streams[1], 1e-10, 3.2e-8).unwrap();
    let rates = coincidence_rates(&hist, 3e-9, 2.5e-8).unwrap();
    let predicted = a * power * power * chain.eta_s * chain.eta_i;
    assert!(
        (rates.n_net_hz - predicted).abs() / predicted < 0.05,
        "net rate {:.3e} vs prediction {:.3e}",
        rates.n_net_hz,
        predicted
    );

    // And the histogram width tracks the closed-form photon linewidth
    // through the time-bandwidth relation of the two-sided exponential.
    let fwhm = hist.fwhm_s().unwrap();
    let lw = photon_linewidth(truth.kappa_s_hz, truth.kappa_i_hz).unwrap();
    assert!(fwhm > 0.1 / lw && fwhm < 10.0 / lw);
}
