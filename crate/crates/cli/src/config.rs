//! Flat `key = value` run configuration.
//!
//! One assignment per line; blank lines and lines starting with `#` are
//! skipped; nesting is spelled with dotted keys (`ofdm.n_fft = 1024`).
//! Every key is optional and falls back to the documented default, but
//! unknown and duplicate keys are hard errors with line numbers — a typo
//! must never silently run the default scenario.
//!
//! Recognised keys and defaults:
//!
//! | key | default | meaning |
//! |-----|---------|---------|
//! | `ofdm.n_fft` | 1024 | transform size |
//! | `ofdm.n_used` | 300 | occupied subcarriers, split symmetrically around (and excluding) DC |
//! | `ofdm.cp_len` | 72 | cyclic-prefix samples |
//! | `ofdm.qam_order` | 16 | constellation points: 4, 16 or 64 |
//! | `ofdm.sample_rate_hz` | 15.36e6 | baseband rate |
//! | `ofdm.n_symbols` | 64 | OFDM symbols per frame |
//! | `pn.beta_hz` | 10 | oscillator 3-dB linewidth |
//! | `pn.constant_phase_rad` | unset | freeze the SI-path phase at this value (diagnostics) |
//! | `pn.oscillator` | common | `common` or `independent` TX/RX oscillators |
//! | `si_channel.k_db` | 30 | SI Rician K-factor |
//! | `si_channel.n_taps` | 2 | SI channel taps |
//! | `si_channel.decay_db_per_tap` | 15 | SI exponential profile decay |
//! | `soi_channel.k_db` | 6 | SOI Rician K-factor |
//! | `soi_channel.n_taps` | 4 | SOI channel taps |
//! | `soi_channel.decay_db_per_tap` | 6 | SOI exponential profile decay |
//! | `channel.est_err_rel_db` | -40 | per-tap channel-estimate error; ≤ -300 means exact |
//! | `link.antenna_sep_db` | 30 | passive isolation (recorded in metadata) |
//! | `link.analog_sic_db` | 30 | analog cancellation ahead of the ADC |
//! | `link.sir_at_digital_db` | -30 | SOI/SI ratio at the digital input (exclusive with `link.atten_diff_db`) |
//! | `link.atten_diff_db` | unset | SOI/SI difference before analog SIC; implies `sir = diff + analog_sic_db` |
//! | `link.snr_soi_db` | 25 | AWGN level against the SOI |
//! | `estimator.kind` | wf | `wf`, `only_cpe` or `lpf` |
//! | `estimator.window_m` | 35 | window length for `wf` |
//! | `estimator.lpf_len` | 50 | filter length for `lpf` |
//! | `estimator.lpf_kind` | moving_average | `moving_average` or `windowed_sinc` |
//! | `run.seed` | 1 | root seed for every random stream |
//! | `run.n_trials` | 200 | Monte-Carlo trials per sweep point |
//! | `sweep.betas_hz` | 1,10,100,1000,10000 | `sweep-beta` x values |
//! | `sweep.atten_diffs_db` | -60..-30 step 3 | `sweep-atten` x values |
//! | `sweep.window_sizes` | 1,5,15,35,70,150,548,1096 | `sweep-window` x values |
//! | `sweep.window_sirs_db` | -40,-30,-20 | one `sweep-window` column per ratio |
//! | `out` | unset | output path, overridden by `--out` |
//!
//! Floating-point values accept `inf` and `-inf` where the scenario allows
//! them (`link.sir_at_digital_db = -inf` silences the SOI,
//! `link.snr_soi_db = inf` silences the noise).

use fdsic_core::estimators::{EstimatorConfig, LpfKind};
use fdsic_core::impairments::{ChannelParams, OscillatorMode, PhaseNoiseParams};
use fdsic_core::link::{LinkScenario, SirSpec};
use fdsic_core::signal::ofdm::{symmetric_allocation, OfdmConfig};
use fdsic_core::signal::qam::QamOrder;
use std::path::PathBuf;

/// A parsed configuration: the scenario plus sweep axes and output path.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: LinkScenario,
    pub betas_hz: Vec<f64>,
    pub atten_diffs_db: Vec<f64>,
    pub window_sizes: Vec<usize>,
    pub window_sirs_db: Vec<f64>,
    pub out: Option<PathBuf>,
    /// The assignments actually read, in file order, for echoing into
    /// output metadata.
    pub echo: Vec<(String, String)>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: LinkScenario::default(),
            betas_hz: vec![1.0, 10.0, 100.0, 1000.0, 10000.0],
            atten_diffs_db: (0..=10).map(|k| -60.0 + 3.0 * k as f64).collect(),
            window_sizes: vec![1, 5, 15, 35, 70, 150, 548, 1096],
            window_sirs_db: vec![-40.0, -30.0, -20.0],
            out: None,
            echo: Vec::new(),
        }
    }
}

pub fn parse_config_file(path: &PathBuf) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    parse_config_text(&text, &path.display().to_string())
}

pub fn parse_config_text(text: &str, source: &str) -> Result<RunConfig, String> {
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let Some((k, v)) = t.split_once('=') else {
            return Err(format!("{source}:{lineno}: expected `key = value`, got `{t}`"));
        };
        let key = k.trim();
        let val = v.trim();
        if key.is_empty() {
            return Err(format!("{source}:{lineno}: missing key before `=`"));
        }
        if val.is_empty() {
            return Err(format!("{source}:{lineno}: key `{key}` has an empty value"));
        }
        if let Some((first, _, _)) = entries.iter().find(|(_, ek, _)| ek == key) {
            return Err(format!(
                "{source}:{lineno}: duplicate key `{key}` (first set on line {first})"
            ));
        }
        entries.push((lineno, key.to_string(), val.to_string()));
    }
    build(entries, source)
}

struct Pending {
    n_fft: Option<usize>,
    n_used: Option<usize>,
    cp_len: Option<usize>,
    qam_order: Option<QamOrder>,
    sample_rate_hz: Option<f64>,
    n_symbols: Option<usize>,
    beta_hz: Option<f64>,
    constant_phase_rad: Option<f64>,
    oscillator: Option<OscillatorMode>,
    si_k_db: Option<f64>,
    si_n_taps: Option<usize>,
    si_decay: Option<f64>,
    soi_k_db: Option<f64>,
    soi_n_taps: Option<usize>,
    soi_decay: Option<f64>,
    est_err_rel_db: Option<f64>,
    antenna_sep_db: Option<f64>,
    analog_sic_db: Option<f64>,
    sir_at_digital_db: Option<(usize, f64)>,
    atten_diff_db: Option<(usize, f64)>,
    snr_soi_db: Option<f64>,
    est_kind: Option<String>,
    window_m: Option<usize>,
    lpf_len: Option<usize>,
    lpf_kind: Option<LpfKind>,
    seed: Option<u64>,
    n_trials: Option<usize>,
    betas_hz: Option<Vec<f64>>,
    atten_diffs_db: Option<Vec<f64>>,
    window_sizes: Option<Vec<usize>>,
    window_sirs_db: Option<Vec<f64>>,
    out: Option<PathBuf>,
}

fn build(entries: Vec<(usize, String, String)>, source: &str) -> Result<RunConfig, String> {
    let mut p = Pending {
        n_fft: None,
        n_used: None,
        cp_len: None,
        qam_order: None,
        sample_rate_hz: None,
        n_symbols: None,
        beta_hz: None,
        constant_phase_rad: None,
        oscillator: None,
        si_k_db: None,
        si_n_taps: None,
        si_decay: None,
        soi_k_db: None,
        soi_n_taps: None,
        soi_decay: None,
        est_err_rel_db: None,
        antenna_sep_db: None,
        analog_sic_db: None,
        sir_at_digital_db: None,
        atten_diff_db: None,
        snr_soi_db: None,
        est_kind: None,
        window_m: None,
        lpf_len: None,
        lpf_kind: None,
        seed: None,
        n_trials: None,
        betas_hz: None,
        atten_diffs_db: None,
        window_sizes: None,
        window_sirs_db: None,
        out: None,
    };

    for (lineno, key, val) in &entries {
        let at = |what: &str| format!("{source}:{lineno}: key `{key}`: {what} `{val}`");
        match key.as_str() {
            "ofdm.n_fft" => p.n_fft = Some(parse_usize(val).map_err(|m| at(&m))?),
            "ofdm.n_used" => p.n_used = Some(parse_usize(val).map_err(|m| at(&m))?),
            "ofdm.cp_len" => p.cp_len = Some(parse_usize(val).map_err(|m| at(&m))?),
            "ofdm.qam_order" => {
                let pts = parse_usize(val).map_err(|m| at(&m))?;
                p.qam_order = Some(QamOrder::from_points(pts).map_err(|e| {
                    format!("{source}:{lineno}: key `{key}`: {e}")
                })?);
            }
            "ofdm.sample_rate_hz" => p.sample_rate_hz = Some(parse_f64(val).map_err(|m| at(&m))?),
            "ofdm.n_symbols" => p.n_symbols = Some(parse_usize(val).map_err(|m| at(&m))?),
            "pn.beta_hz" => p.beta_hz = Some(parse_f64(val).map_err(|m| at(&m))?),
            "pn.constant_phase_rad" => {
                p.constant_phase_rad = Some(parse_f64(val).map_err(|m| at(&m))?)
            }
            "pn.oscillator" => {
                p.oscillator = Some(match val.as_str() {
                    "common" => OscillatorMode::Common,
                    "independent" => OscillatorMode::Independent,
                    _ => return Err(at("expected `common` or `independent`, got")),
                })
            }
            "si_channel.k_db" => p.si_k_db = Some(parse_f64(val).map_err(|m| at(&m))?),
            "si_channel.n_taps" => p.si_n_taps = Some(parse_usize(val).map_err(|m| at(&m))?),
            "si_channel.decay_db_per_tap" => p.si_decay = Some(parse_f64(val).map_err(|m| at(&m))?),
            "soi_channel.k_db" => p.soi_k_db = Some(parse_f64(val).map_err(|m| at(&m))?),
            "soi_channel.n_taps" => p.soi_n_taps = Some(parse_usize(val).map_err(|m| at(&m))?),
            "soi_channel.decay_db_per_tap" => {
                p.soi_decay = Some(parse_f64(val).map_err(|m| at(&m))?)
            }
            "channel.est_err_rel_db" => p.est_err_rel_db = Some(parse_f64(val).map_err(|m| at(&m))?),
            "link.antenna_sep_db" => p.antenna_sep_db = Some(parse_f64(val).map_err(|m| at(&m))?),
            "link.analog_sic_db" => p.analog_sic_db = Some(parse_f64(val).map_err(|m| at(&m))?),
            "link.sir_at_digital_db" => {
                p.sir_at_digital_db = Some((*lineno, parse_f64(val).map_err(|m| at(&m))?))
            }
            "link.atten_diff_db" => {
                p.atten_diff_db = Some((*lineno, parse_f64(val).map_err(|m| at(&m))?))
            }
            "link.snr_soi_db" => p.snr_soi_db = Some(parse_f64(val).map_err(|m| at(&m))?),
            "estimator.kind" => match val.as_str() {
                "wf" | "only_cpe" | "lpf" => p.est_kind = Some(val.clone()),
                _ => return Err(at("expected `wf`, `only_cpe` or `lpf`, got")),
            },
            "estimator.window_m" => p.window_m = Some(parse_usize(val).map_err(|m| at(&m))?),
            "estimator.lpf_len" => p.lpf_len = Some(parse_usize(val).map_err(|m| at(&m))?),
            "estimator.lpf_kind" => {
                p.lpf_kind = Some(match val.as_str() {
                    "moving_average" => LpfKind::MovingAverage,
                    "windowed_sinc" => LpfKind::WindowedSinc,
                    _ => return Err(at("expected `moving_average` or `windowed_sinc`, got")),
                })
            }
            "run.seed" => {
                p.seed = Some(val.parse::<u64>().map_err(|_| at("expected an unsigned integer, got"))?)
            }
            "run.n_trials" => p.n_trials = Some(parse_usize(val).map_err(|m| at(&m))?),
            "sweep.betas_hz" => p.betas_hz = Some(parse_f64_list(val).map_err(|m| at(&m))?),
            "sweep.atten_diffs_db" => {
                p.atten_diffs_db = Some(parse_f64_list(val).map_err(|m| at(&m))?)
            }
            "sweep.window_sizes" => p.window_sizes = Some(parse_usize_list(val).map_err(|m| at(&m))?),
            "sweep.window_sirs_db" => {
                p.window_sirs_db = Some(parse_f64_list(val).map_err(|m| at(&m))?)
            }
            "out" => p.out = Some(PathBuf::from(val)),
            _ => return Err(format!("{source}:{lineno}: unknown key `{key}`")),
        }
    }

    if let (Some((l1, _)), Some((l2, _))) = (p.sir_at_digital_db, p.atten_diff_db) {
        return Err(format!(
            "{source}: `link.sir_at_digital_db` (line {l1}) and `link.atten_diff_db` (line {l2}) \
             are mutually exclusive"
        ));
    }

    let n_fft = p.n_fft.unwrap_or(1024);
    let n_used = p.n_used.unwrap_or(300);
    let used = symmetric_allocation(n_fft, n_used).map_err(|e| format!("{source}: {e}"))?;
    let ofdm = OfdmConfig {
        n_fft,
        used_subcarriers: used,
        cp_len: p.cp_len.unwrap_or(72),
        qam_order: p.qam_order.unwrap_or(QamOrder::Q16),
        sample_rate: p.sample_rate_hz.unwrap_or(15.36e6),
        n_symbols: p.n_symbols.unwrap_or(64),
    };
    let pn = PhaseNoiseParams {
        beta_hz: p.beta_hz.unwrap_or(10.0),
        ts_s: 1.0 / ofdm.sample_rate,
    };
    let si_channel = ChannelParams::exponential(
        p.si_k_db.unwrap_or(30.0),
        p.si_n_taps.unwrap_or(2),
        p.si_decay.unwrap_or(15.0),
    )
    .map_err(|e| format!("{source}: si_channel: {e}"))?;
    let soi_channel = ChannelParams::exponential(
        p.soi_k_db.unwrap_or(6.0),
        p.soi_n_taps.unwrap_or(4),
        p.soi_decay.unwrap_or(6.0),
    )
    .map_err(|e| format!("{source}: soi_channel: {e}"))?;
    let sir = if let Some((_, d)) = p.atten_diff_db {
        SirSpec::AttenDiff(d)
    } else {
        SirSpec::AtDigital(p.sir_at_digital_db.map(|(_, v)| v).unwrap_or(-30.0))
    };
    let estimator = match p.est_kind.as_deref().unwrap_or("wf") {
        "wf" => EstimatorConfig::WfWindow {
            window_m: p.window_m.unwrap_or(35),
        },
        "only_cpe" => EstimatorConfig::OnlyCpe,
        "lpf" => EstimatorConfig::LpfBased {
            len_l: p.lpf_len.unwrap_or(50),
            kind: p.lpf_kind.unwrap_or(LpfKind::MovingAverage),
        },
        _ => unreachable!("estimator.kind was validated above"),
    };

    let scenario = LinkScenario {
        ofdm,
        pn,
        constant_phase_rad: p.constant_phase_rad,
        oscillator: p.oscillator.unwrap_or(OscillatorMode::Common),
        si_channel,
        soi_channel,
        channel_est_err_db: p.est_err_rel_db.unwrap_or(-40.0),
        antenna_sep_db: p.antenna_sep_db.unwrap_or(30.0),
        analog_sic_db: p.analog_sic_db.unwrap_or(30.0),
        sir,
        snr_soi_db: p.snr_soi_db.unwrap_or(25.0),
        estimator,
        seed: p.seed.unwrap_or(1),
        n_trials: p.n_trials.unwrap_or(200),
    };
    scenario.validate().map_err(|e| format!("{source}: {e}"))?;

    let defaults = RunConfig::default();
    Ok(RunConfig {
        scenario,
        betas_hz: p.betas_hz.unwrap_or(defaults.betas_hz),
        atten_diffs_db: p.atten_diffs_db.unwrap_or(defaults.atten_diffs_db),
        window_sizes: p.window_sizes.unwrap_or(defaults.window_sizes),
        window_sirs_db: p.window_sirs_db.unwrap_or(defaults.window_sirs_db),
        out: p.out,
        echo: entries.into_iter().map(|(_, k, v)| (k, v)).collect(),
    })
}

fn parse_f64(v: &str) -> Result<f64, String> {
    let x: f64 = v
        .parse()
        .map_err(|_| "expected a number, got".to_string())?;
    if x.is_nan() {
        return Err("expected a number, got".to_string());
    }
    Ok(x)
}

fn parse_usize(v: &str) -> Result<usize, String> {
    v.parse()
        .map_err(|_| "expected an unsigned integer, got".to_string())
}

fn parse_f64_list(v: &str) -> Result<Vec<f64>, String> {
    v.split(',')
        .map(|item| parse_f64(item.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| "expected a comma-separated list of numbers, got".to_string())
}

fn parse_usize_list(v: &str) -> Result<Vec<usize>, String> {
    v.split(',')
        .map(|item| parse_usize(item.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| "expected a comma-separated list of unsigned integers, got".to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_yields_the_documented_defaults() {
        let cfg = parse_config_text("", "test").unwrap();
        let d = LinkScenario::default();
        assert_eq!(cfg.scenario, d);
        assert_eq!(cfg.betas_hz, vec![1.0, 10.0, 100.0, 1000.0, 10000.0]);
        assert_eq!(cfg.atten_diffs_db.len(), 11);
        assert_eq!(cfg.atten_diffs_db[0], -60.0);
        assert_eq!(cfg.atten_diffs_db[10], -30.0);
        assert_eq!(cfg.window_sizes, vec![1, 5, 15, 35, 70, 150, 548, 1096]);
        assert!(cfg.out.is_none());
        assert!(cfg.echo.is_empty());
    }

    #[test]
    fn all_keys_round_trip_into_the_scenario() {
        let text = "\
# full configuration
ofdm.n_fft = 64
ofdm.n_used = 20
ofdm.cp_len = 8
ofdm.qam_order = 4
ofdm.sample_rate_hz = 1e6
ofdm.n_symbols = 3

pn.beta_hz = 100
pn.oscillator = independent
si_channel.k_db = 20
si_channel.n_taps = 3
si_channel.decay_db_per_tap = 10
soi_channel.k_db = 3
soi_channel.n_taps = 2
soi_channel.decay_db_per_tap = 4
channel.est_err_rel_db = -50
link.antenna_sep_db = 40
link.analog_sic_db = 20
link.atten_diff_db = -45
link.snr_soi_db = 15
estimator.kind = lpf
estimator.lpf_len = 21
estimator.lpf_kind = windowed_sinc
run.seed = 7
run.n_trials = 5
sweep.betas_hz = 1, 10
sweep.atten_diffs_db = -50,-40
sweep.window_sizes = 5, 9
sweep.window_sirs_db = -25
out = results.csv
";
        let cfg = parse_config_text(text, "test").unwrap();
        let s = &cfg.scenario;
        assert_eq!(s.ofdm.n_fft, 64);
        assert_eq!(s.ofdm.used_subcarriers.len(), 20);
        assert_eq!(s.ofdm.cp_len, 8);
        assert_eq!(s.ofdm.sample_rate, 1e6);
        assert_eq!(s.ofdm.n_symbols, 3);
        assert_eq!(s.pn.beta_hz, 100.0);
        assert_eq!(s.pn.ts_s, 1e-6);
        assert_eq!(s.oscillator, OscillatorMode::Independent);
        assert_eq!(s.si_channel.tap_powers.len(), 3);
        assert_eq!(s.soi_channel.tap_powers.len(), 2);
        assert_eq!(s.channel_est_err_db, -50.0);
        assert_eq!(s.antenna_sep_db, 40.0);
        assert_eq!(s.analog_sic_db, 20.0);
        assert_eq!(s.sir, SirSpec::AttenDiff(-45.0));
        assert_eq!(s.sir.sir_at_digital_db(s.analog_sic_db), -25.0);
        assert_eq!(s.snr_soi_db, 15.0);
        assert_eq!(
            s.estimator,
            EstimatorConfig::LpfBased {
                len_l: 21,
                kind: LpfKind::WindowedSinc
            }
        );
        assert_eq!(s.seed, 7);
        assert_eq!(s.n_trials, 5);
        assert_eq!(cfg.betas_hz, vec![1.0, 10.0]);
        assert_eq!(cfg.atten_diffs_db, vec![-50.0, -40.0]);
        assert_eq!(cfg.window_sizes, vec![5, 9]);
        assert_eq!(cfg.window_sirs_db, vec![-25.0]);
        assert_eq!(cfg.out, Some(PathBuf::from("results.csv")));
        assert_eq!(cfg.echo.len(), 29);
        assert_eq!(cfg.echo[0], ("ofdm.n_fft".to_string(), "64".to_string()));
    }

    #[test]
    fn unknown_key_is_a_hard_error_with_line_number() {
        let err = parse_config_text("pn.beta_hz = 10\npn.betta_hz = 20\n", "cfg.txt").unwrap_err();
        assert!(err.contains("cfg.txt:2"), "{err}");
        assert!(err.contains("unknown key `pn.betta_hz`"), "{err}");
    }

    #[test]
    fn duplicate_key_is_a_hard_error() {
        let err = parse_config_text("run.seed = 1\n\nrun.seed = 2\n", "cfg.txt").unwrap_err();
        assert!(err.contains("cfg.txt:3"), "{err}");
        assert!(err.contains("duplicate key `run.seed`"), "{err}");
        assert!(err.contains("line 1"), "{err}");
    }

    #[test]
    fn sir_keys_are_mutually_exclusive() {
        let err = parse_config_text(
            "link.sir_at_digital_db = -30\nlink.atten_diff_db = -60\n",
            "cfg.txt",
        )
        .unwrap_err();
        assert!(err.contains("mutually exclusive"), "{err}");
    }

    #[test]
    fn malformed_lines_report_their_position() {
        let err = parse_config_text("just some words\n", "cfg.txt").unwrap_err();
        assert!(err.contains("cfg.txt:1"), "{err}");

        let err = parse_config_text("pn.beta_hz = fast\n", "cfg.txt").unwrap_err();
        assert!(err.contains("expected a number"), "{err}");

        let err = parse_config_text("pn.beta_hz =\n", "cfg.txt").unwrap_err();
        assert!(err.contains("empty value"), "{err}");

        let err = parse_config_text("pn.beta_hz = nan\n", "cfg.txt").unwrap_err();
        assert!(err.contains("expected a number"), "{err}");
    }

    #[test]
    fn infinities_parse_where_the_scenario_allows_them() {
        let cfg = parse_config_text(
            "link.sir_at_digital_db = -inf\nlink.snr_soi_db = inf\n",
            "test",
        )
        .unwrap();
        assert_eq!(cfg.scenario.sir, SirSpec::AtDigital(f64::NEG_INFINITY));
        assert_eq!(cfg.scenario.snr_soi_db, f64::INFINITY);

        // +inf SIR is rejected by scenario validation.
        let err = parse_config_text("link.sir_at_digital_db = inf\n", "test").unwrap_err();
        assert!(err.contains("must not be NaN or +inf"), "{err}");
    }

    #[test]
    fn invalid_scenario_values_fail_at_parse_time() {
        let err = parse_config_text("ofdm.n_used = 9999\n", "test").unwrap_err();
        assert!(err.contains("test:"), "{err}");

        let err = parse_config_text("run.n_trials = 0\n", "test").unwrap_err();
        assert!(err.contains("n_trials"), "{err}");
    }
}
