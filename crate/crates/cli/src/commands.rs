//! One function per subcommand. Each computes everything in memory and
//! returns the files to write; nothing touches the output directory here.

use std::path::{Path, PathBuf};

use motorsig_core::bdf;
use motorsig_core::connectivity::{self, ConnectivityOptions, PairSpec, TrialAggregation};
use motorsig_core::emg::{self, EmgQuantOptions, OnsetParams};
use motorsig_core::erp::{self, ErpCurve, TfOptions};
use motorsig_core::precondition;
use motorsig_core::synth::{self, CouplingSpec, EcgSpec, EmgSpec, ErdSpec, NoiseKind, OnsetLaw, Oscillation};
use motorsig_core::{gen_trial_set, load_trial_set, BandSpec, ConnectivityMap, Error, LoadOptions, SynthSpec, TfMethod, TrialSet};
use serde::Serialize;

use crate::archive::{self, json_bytes};
use crate::error::{CliError, CliResult};
use crate::output::{fmt9, Outputs, Table};
use crate::params::Params;
use crate::svg::{self, HLine, Series};

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

pub fn run(p: &Params) -> CliResult<Outputs> {
    match p.command.as_str() {
        "convert" => convert(p),
        "synth" => synth_cmd(p),
        "erp" => erp_cmd(p),
        "erp-quant" => erp_quant(p),
        "erp-tf" => erp_tf(p),
        "tcplv" => tcplv(p),
        "pwplv" | "pwcoh" => pairwise(p),
        "emg-onset" => emg_onset(p),
        "emg-quant" => emg_quant(p),
        other => Err(CliError::validation(format!("unknown subcommand {other:?}"))),
    }
}

fn onset_params(p: &Params) -> CliResult<OnsetParams> {
    Ok(OnsetParams { window: p.opt_usize("window")?, th_coeff: p.positive("th_coeff")?, baseline_s: p.positive("baseline_s")? })
}

fn convert(p: &Params) -> CliResult<Outputs> {
    let files: Vec<PathBuf> = p.list("inputs").unwrap_or_default().into_iter().map(PathBuf::from).collect();
    if files.is_empty() {
        return Err(CliError::validation("convert: no input files"));
    }
    let emg_channel = p.opt_usize("emg_channel")?;
    let chosen: Option<Vec<usize>> = p
        .list("channels")
        .map(|l| l.iter().map(|c| c.parse().map_err(|_| CliError::validation(format!("`channels`: bad index {c:?}")))).collect())
        .transpose()?;
    let drift = p.bool("drift_reject")?;
    let detect = p.bool("detect_onsets")?;
    let onset = onset_params(p)?;
    if detect && emg_channel.is_none() {
        return Err(CliError::validation("detect_onsets needs emg_channel"));
    }

    let ts = match emg_channel {
        Some(emg_ch) => {
            let eeg: Vec<usize> = match chosen {
                Some(c) => c.into_iter().filter(|&c| c != emg_ch).collect(),
                None => {
                    let (h, _) = bdf::read_bdf_file(&files[0]).map_err(|e| e.in_file(&files[0]))?;
                    (0..h.num_channels()).filter(|&c| c != emg_ch).collect()
                }
            };
            let opts = LoadOptions { drift_reject: drift, detect_onsets: detect.then_some(onset) };
            let loaded = load_trial_set(&files, &eeg, emg_ch, &opts)?;
            let mut labels = loaded.eeg.channel_labels().to_vec();
            labels.push(synth::EMG_LABEL.into());
            let onsets = loaded.eeg.onset_samples().map(<[usize]>::to_vec);
            let fs = loaded.emg.fs();
            let trials = loaded
                .eeg
                .into_trials()
                .into_iter()
                .zip(loaded.emg.into_trials())
                .map(|(mut e, m)| {
                    e.extend(m);
                    e
                })
                .collect();
            let ts = TrialSet::new(trials, fs, labels)?;
            match onsets {
                Some(o) => ts.with_onsets(o)?,
                None => ts,
            }
        }
        None => read_plain(&files, chosen.as_deref(), drift)?,
    };
    let provenance = serde_json::json!({
        "source": "bdf",
        "files": files.iter().map(|f| f.display().to_string()).collect::<Vec<_>>(),
        "drift_reject": drift,
        "emg_channel": emg_channel,
        "onsets": if detect { "detected" } else { "none" },
    });
    let mut out = Outputs::default();
    archive::add_archive(&mut out, &ts, provenance);
    Ok(out)
}

fn read_plain(files: &[PathBuf], chosen: Option<&[usize]>, drift: bool) -> CliResult<TrialSet> {
    let mut trials = Vec::with_capacity(files.len());
    let mut fs = None;
    let mut labels = Vec::new();
    for f in files {
        let ctx = |e: Error| e.in_file(f);
        let (h, data) = bdf::read_bdf_file(f).map_err(ctx)?;
        let idx: Vec<usize> = chosen.map_or_else(|| (0..h.num_channels()).collect(), <[usize]>::to_vec);
        if let Some(&bad) = idx.iter().find(|&&c| c >= h.num_channels()) {
            return Err(ctx(Error::ChannelIndexOutOfRange { index: bad, available: h.num_channels() }).into());
        }
        if idx.is_empty() {
            return Err(CliError::validation("no channels selected"));
        }
        let rate = h.fs(idx[0]);
        if idx.iter().any(|&c| h.fs(c) != rate) || fs.is_some_and(|r| r != rate) {
            return Err(ctx(Error::InconsistentTrials(format!("mixed sampling rates (found {rate} Hz)"))).into());
        }
        fs = Some(rate);
        if labels.is_empty() {
            labels = idx.iter().map(|&c| h.channels[c].label.clone()).collect();
        }
        let trial = idx
            .iter()
            .map(|&c| if drift { precondition::drift_reject_default(&data[c], rate) } else { Ok(data[c].clone()) })
            .collect::<Result<Vec<_>, _>>()
            .map_err(ctx)?;
        trials.push(trial);
    }
    Ok(TrialSet::new(trials, fs.unwrap_or(1.0), labels)?)
}

/// Small, serializable part of the generator's ground truth.
#[derive(Serialize)]
struct TruthSummary<'a> {
    onset_samples: &'a [usize],
    onset_times_s: &'a [f64],
    erd_interval_s: Option<(f64, f64)>,
    erd_power_ratio: Option<f64>,
    coupled_pair: Option<(usize, usize)>,
    coupling_sigma: Option<(f64, f64)>,
}

fn synth_spec(p: &Params) -> CliResult<SynthSpec> {
    let band = |k: &str| p.band(k)?.ok_or_else(|| CliError::validation(format!("missing `{k}`")));
    let rhythm = match p.opt_f64("rhythm_hz")? {
        Some(freq_hz) => Some(Oscillation { freq_hz, amplitude: p.f64("rhythm_amp")?, drift_hz: p.f64("rhythm_drift")? }),
        None => None,
    };
    let erd = match p.opt_f64("erd_drop")? {
        Some(drop_fraction) => Some(ErdSpec {
            band: band("erd_band")?,
            drop_fraction,
            start_s: p.f64("erd_start")?,
            end_s: p.f64("erd_end")?,
        }),
        None => None,
    };
    let n_channels = p.usize("channels")?;
    let pair = match p.list("coupling_pair") {
        Some(l) if l == ["auto"] => match n_channels {
            8.. => Some(vec!["5".to_string(), "7".to_string()]),
            2.. => Some(vec!["0".to_string(), (n_channels - 1).to_string()]),
            _ => None,
        },
        other => other,
    };
    let coupling = match pair {
        Some(pair) => {
            let idx: Vec<usize> = pair
                .iter()
                .map(|s| s.parse().map_err(|_| CliError::validation(format!("`coupling_pair`: bad index {s:?}"))))
                .collect::<CliResult<_>>()?;
            let [a, b] = idx[..] else {
                return Err(CliError::validation("`coupling_pair` needs two channel indices"));
            };
            Some(CouplingSpec {
                pair: (a, b),
                band: band("coupling_band")?,
                amplitude: p.f64("coupling_amp")?,
                pre_onset_plv: p.f64("coupling_pre")?,
                post_onset_plv: p.f64("coupling_post")?,
            })
        }
        None => None,
    };
    let ecg = match p.opt_f64("ecg_bpm")? {
        Some(rate_bpm) => Some(EcgSpec { rate_bpm, amplitude: p.f64("ecg_amp")? }),
        None => None,
    };
    let emg = match p.opt_f64("emg_amp")? {
        Some(amplitude) => Some(EmgSpec { amplitude, rise_s: p.f64("emg_rise")?, quiet_std: p.f64("emg_quiet")?, ecg }),
        None => None,
    };
    let noise = match p.string("noise")?.to_ascii_lowercase().as_str() {
        "pink" => NoiseKind::Pink,
        "white" => NoiseKind::White,
        other => return Err(CliError::validation(format!("`noise` = {other:?}: expected pink or white"))),
    };
    let spec = SynthSpec {
        n_trials: p.usize("trials")?,
        n_channels,
        fs: p.f64("fs")?,
        trial_length_s: p.f64("length")?,
        onset: OnsetLaw { mean_s: p.f64("onset")?, jitter_s: p.f64("onset_jitter")? },
        rhythm,
        erd,
        coupling,
        emg,
        noise_power: p.f64("noise_power")?,
        noise,
        seed: p.u64("seed")?,
    };
    spec.validate()?;
    Ok(spec)
}

fn synth_cmd(p: &Params) -> CliResult<Outputs> {
    let spec = synth_spec(p)?;
    let (ts, truth) = gen_trial_set(&spec)?;
    let mut out = Outputs::default();
    archive::add_archive(&mut out, &ts, serde_json::json!({ "source": "synth", "spec": spec }));
    let summary = TruthSummary {
        onset_samples: &truth.onset_samples,
        onset_times_s: &truth.onset_times,
        erd_interval_s: truth.erd_interval_s,
        erd_power_ratio: truth.erd_power_ratio,
        coupled_pair: truth.coupled_pair,
        coupling_sigma: truth.coupling_sigma,
    };
    out.add("truth.json", json_bytes(&summary));
    Ok(out)
}

fn load(p: &Params) -> CliResult<TrialSet> {
    Ok(archive::read_archive(&p.path("input")?)?.0)
}

fn onset_times(ts: &TrialSet, input: &Path) -> CliResult<Vec<f64>> {
    ts.onset_times().ok_or_else(|| {
        CliError::validation(format!(
            "{}: archive has no onsets (convert with detect_onsets = true, or use synth)",
            input.display()
        ))
    })
}

fn channel(ts: &TrialSet, name: &str) -> CliResult<usize> {
    if let Some(i) = ts.channel_index(name) {
        return Ok(i);
    }
    match name.parse::<usize>() {
        Ok(i) if i < ts.n_channels() => Ok(i),
        _ => Err(CliError::validation(format!("no channel {name:?} (have {})", ts.channel_labels().join(", ")))),
    }
}

fn eeg_channel(p: &Params, ts: &TrialSet) -> CliResult<usize> {
    match p.get("channel") {
        Some(c) => channel(ts, c),
        None => Ok(connectivity::default_reference(ts).unwrap_or(0)),
    }
}

/// All channels except one labelled EMG.
fn eeg_channels(ts: &TrialSet) -> Vec<usize> {
    (0..ts.n_channels()).filter(|&c| ts.channel_labels()[c] != synth::EMG_LABEL).collect()
}

fn band(p: &Params) -> CliResult<BandSpec> {
    p.band("band")?.ok_or_else(|| CliError::validation("missing `band`"))
}

fn compute_erp(p: &Params) -> CliResult<(TrialSet, usize, ErpCurve)> {
    let input = p.path("input")?;
    let ts = load(p)?;
    let ch = eeg_channel(p, &ts)?;
    let band = band(p)?;
    band.validate(ts.fs())?;
    let onsets = onset_times(&ts, &input)?;
    let erp = erp::trigger_avg_erp(&ts.channel_view(ch)?, ts.fs(), &onsets, &band, p.positive("duration")?)?;
    Ok((ts, ch, erp))
}

fn relative(time: &[f64], trigger: f64) -> Vec<f64> {
    time.iter().map(|t| t - trigger).collect()
}

fn erp_cmd(p: &Params) -> CliResult<Outputs> {
    let (ts, ch, erp) = compute_erp(p)?;
    let t = relative(&erp.time_vec, erp.trigger_time_sec);
    let mut table = Table::new(&["time_s", "power (µV²)"]);
    for (x, v) in t.iter().zip(&erp.values) {
        table.row(&[fmt9(*x), fmt9(*v)]);
    }
    let mut out = Outputs::default();
    out.add("erp.csv", table.into_bytes());
    if p.bool("plot")? {
        let title = format!("ERP {} {}", ts.channel_labels()[ch], erp.band);
        let s = [Series { x: &t, y: &erp.values, color: PALETTE[0] }];
        out.add("erp.svg", svg::line_plot(&title, "time from trigger (s)", "power (µV²)", &s, &[], Some(0.0)).into_bytes());
    }
    Ok(out)
}

fn erp_quant(p: &Params) -> CliResult<Outputs> {
    let ref_per = p.f64_pair("ref_per")?.ok_or_else(|| CliError::validation("missing `ref_per`"))?;
    let cof_intv = p.positive("cof_intv")?;
    let (ts, ch, erp) = compute_erp(p)?;
    let report = erp::erp_quantification(&erp, ref_per, cof_intv)?;
    let trig = report.trigger_time_sec;

    let mut seg = Table::new(&["kind", "start_s", "end_s", "length_s", "area (%)"]);
    for s in &report.segments {
        seg.row(&[s.kind.as_str().to_string(), fmt9(s.start_s - trig), fmt9(s.end_s - trig), fmt9(s.length_s()), fmt9(s.area)]);
    }
    let t = relative(&report.time_vec, trig);
    let mut curve = Table::new(&["time_s", "relative_power (%)"]);
    for (x, v) in t.iter().zip(&report.quant_erp) {
        curve.row(&[fmt9(*x), fmt9(*v)]);
    }
    let mut summary = Table::new(&["quantity", "value", "unit"]);
    for (q, v, u) in [
        ("reference_value", report.reference_value, "µV²"),
        ("reference_std", report.reference_std, "µV²"),
        ("cof_intv", report.cof_intv, "std"),
        ("lower_edge", report.lower_edge, "%"),
        ("upper_edge", report.upper_edge, "%"),
        ("erd_segments", report.erd().count() as f64, "count"),
        ("ers_segments", report.ers().count() as f64, "count"),
    ] {
        summary.row(&[q.to_string(), fmt9(v), u.to_string()]);
    }
    let mut out = Outputs::default();
    out.add("erd_ers.csv", seg.into_bytes());
    out.add("quant_erp.csv", curve.into_bytes());
    out.add("erd_ers_summary.csv", summary.into_bytes());
    if p.bool("plot")? {
        let title = format!("ERD/ERS {} {}", ts.channel_labels()[ch], erp.band);
        let s = [Series { x: &t, y: &report.quant_erp, color: PALETTE[0] }];
        let edges = [HLine { y: report.lower_edge, color: "#d62728" }, HLine { y: report.upper_edge, color: "#2ca02c" }];
        let fig = svg::line_plot(&title, "time from trigger (s)", "power (% of reference)", &s, &edges, Some(0.0));
        out.add("erd_ers.svg", fig.into_bytes());
    }
    Ok(out)
}

fn erp_tf(p: &Params) -> CliResult<Outputs> {
    let input = p.path("input")?;
    let method: TfMethod = p.string("method")?.parse()?;
    let ts = load(p)?;
    let ch = eeg_channel(p, &ts)?;
    let onsets = onset_times(&ts, &input)?;
    let map = erp::trigger_avg_tf_erp(&ts.channel_view(ch)?, ts.fs(), &onsets, p.positive("duration")?, method, &TfOptions::default())?;
    let t = relative(&map.time_vec, map.trigger_time_sec);
    let mut table = Table::new(&["freq_hz", "time_s", "power (µV²)"]);
    for (f, row) in map.freq_vec.iter().zip(&map.power) {
        for (x, v) in t.iter().zip(row) {
            table.row(&[fmt9(*f), fmt9(*x), fmt9(*v)]);
        }
    }
    let mut out = Outputs::default();
    out.add("tf.csv", table.into_bytes());
    if p.bool("plot")? {
        let span = |v: &[f64]| (v.first().copied().unwrap_or(0.0), v.last().copied().unwrap_or(1.0));
        let title = format!("{method} map {}", ts.channel_labels()[ch]);
        let fig = svg::heat_map(&title, "time from trigger (s)", "frequency (Hz)", span(&t), span(&map.freq_vec), &map.power, None);
        out.add("tf.svg", fig.into_bytes());
    }
    Ok(out)
}

fn aggregation(p: &Params) -> CliResult<TrialAggregation> {
    match p.string("aggregation")?.to_ascii_lowercase().as_str() {
        "mean" => Ok(TrialAggregation::Mean),
        "pooled" => Ok(TrialAggregation::Pooled),
        other => Err(CliError::validation(format!("`aggregation` = {other:?}: expected mean or pooled"))),
    }
}

fn conn_options(p: &Params, fs: f64) -> CliResult<ConnectivityOptions> {
    let band = band(p)?;
    band.validate(fs)?;
    let mut o = ConnectivityOptions { band, ..Default::default() };
    if p.get("pertnum").is_some() {
        o.phase.pertnum = p.usize("pertnum")?;
        if o.phase.pertnum == 0 {
            return Err(CliError::validation("`pertnum` must be at least 1"));
        }
        o.phase.seed = p.u64("seed")?;
        o.plv_aggregation = aggregation(p)?;
    }
    if p.get("segments").is_some() {
        o.msc_segments = p.usize("segments")?;
        o.msc_aggregation = aggregation(p)?;
    }
    Ok(o)
}

fn tcplv(p: &Params) -> CliResult<Outputs> {
    let input = p.path("input")?;
    let ts = load(p)?;
    let opts = conn_options(p, ts.fs())?;
    let onsets = onset_times(&ts, &input)?;
    let spec = match (p.list("pair"), p.get("reference")) {
        (Some(_), Some(_)) => return Err(CliError::validation("give either `pair` or `reference`, not both")),
        (Some(pair), None) => match &pair[..] {
            [a, b] => PairSpec::Pair(channel(&ts, a)?, channel(&ts, b)?),
            _ => return Err(CliError::validation("`pair` needs two channels")),
        },
        (None, r) => {
            let eeg = ts.select_channels(&eeg_channels(&ts))?;
            let r = match r {
                Some(r) => channel(&eeg, r)?,
                None => connectivity::default_reference(&eeg).unwrap_or(0),
            };
            return tcplv_write(p, &eeg, connectivity::tcplv(&eeg, &onsets, PairSpec::VsReference(r), &opts)?);
        }
    };
    tcplv_write(p, &ts, connectivity::tcplv(&ts, &onsets, spec, &opts)?)
}

fn tcplv_write(p: &Params, ts: &TrialSet, tc: motorsig_core::TimeCourse) -> CliResult<Outputs> {
    let labels = ts.channel_labels();
    let mut table = Table::new(&["window_start_s", "window_end_s", "ch_a", "ch_b", "plv (1)"]);
    for (w, row) in tc.windows.iter().zip(&tc.values) {
        for (&(a, b), v) in tc.pairs.iter().zip(row) {
            table.row(&[fmt9(w.start_s), fmt9(w.end_s), labels[a].clone(), labels[b].clone(), fmt9(*v)]);
        }
    }
    let mut out = Outputs::default();
    out.add("tcplv.csv", table.into_bytes());
    if p.bool("plot")? {
        let centers: Vec<f64> = tc.windows.iter().map(|w| (w.start_s + w.end_s) / 2.0).collect();
        let columns: Vec<Vec<f64>> = (0..tc.pairs.len()).map(|k| tc.values.iter().map(|r| r[k]).collect()).collect();
        let series: Vec<Series> = columns
            .iter()
            .enumerate()
            .map(|(k, y)| Series { x: &centers, y, color: PALETTE[k % PALETTE.len()] })
            .collect();
        let title = format!("PLV time course {}", tc.band);
        out.add("tcplv.svg", svg::line_plot(&title, "window center from trigger (s)", "PLV", &series, &[], Some(0.0)).into_bytes());
    }
    Ok(out)
}

fn pairwise(p: &Params) -> CliResult<Outputs> {
    let input = p.path("input")?;
    let full = load(p)?;
    let idx = match p.list("channels") {
        Some(names) => names.iter().map(|c| channel(&full, c)).collect::<CliResult<Vec<_>>>()?,
        None => eeg_channels(&full),
    };
    let ts = full.select_channels(&idx)?;
    let opts = conn_options(p, ts.fs())?;
    let onsets = onset_times(&ts, &input)?;
    let (map, stem, unit) = if p.command == "pwplv" {
        (connectivity::pwplv(&ts, &onsets, &opts)?, "pwplv", "plv (1)")
    } else {
        (connectivity::pwcoherence(&ts, &onsets, &opts)?, "pwcoh", "msc (1)")
    };
    pairwise_write(p, &map, stem, unit)
}

fn pairwise_write(p: &Params, map: &ConnectivityMap, stem: &str, unit: &str) -> CliResult<Outputs> {
    let labels = &map.channel_labels;
    let mut table = Table::new(&["window_start_s", "window_end_s", "ch_a", "ch_b", unit]);
    for (w, m) in map.windows.iter().zip(&map.values) {
        for a in 0..labels.len() {
            for b in a + 1..labels.len() {
                table.row(&[fmt9(w.start_s), fmt9(w.end_s), labels[a].clone(), labels[b].clone(), fmt9(m[a][b])]);
            }
        }
    }
    let mut out = Outputs::default();
    out.add(format!("{stem}.csv"), table.into_bytes());
    if p.bool("plot")? {
        for (i, (w, m)) in map.windows.iter().zip(&map.values).enumerate() {
            let title = format!("{} {} [{}, {}] s", map.measure.as_str(), map.band, fmt9(w.start_s), fmt9(w.end_s));
            out.add(format!("{stem}_window_{i:02}.svg"), svg::matrix_map(&title, labels, m, (0.0, 1.0)).into_bytes());
        }
    }
    Ok(out)
}

fn emg_trials(p: &Params, ts: &TrialSet) -> CliResult<Vec<Vec<f64>>> {
    let ch = channel(ts, &p.string("channel")?)?;
    Ok(ts.channel_view(ch)?.into_iter().map(<[f64]>::to_vec).collect())
}

fn emg_onset(p: &Params) -> CliResult<Outputs> {
    let params = onset_params(p)?;
    let remove_ecg = p.bool("remove_ecg")?;
    let ts = load(p)?;
    let mut trials = emg_trials(p, &ts)?;
    if remove_ecg {
        for x in &mut trials {
            let ecg = emg::ecg_extract(x, ts.fs())?;
            x.iter_mut().zip(ecg).for_each(|(v, e)| *v -= e);
        }
    }
    let mut table = Table::new(&["trial_index", "onset_sample", "onset_time_s", "threshold (µV)"]);
    for (i, x) in trials.iter().enumerate() {
        let r = emg::emg_onset(x, ts.fs(), &params).map_err(|e| CliError::from(e).with_context(&format!("trial {i}")))?;
        table.row(&[i.to_string(), r.onset_sample.to_string(), fmt9(r.onset_time), fmt9(r.threshold)]);
    }
    let mut out = Outputs::default();
    out.add("onsets.csv", table.into_bytes());
    Ok(out)
}

fn emg_quant(p: &Params) -> CliResult<Outputs> {
    let input = p.path("input")?;
    let ts = load(p)?;
    let trials = emg_trials(p, &ts)?;
    let onsets = onset_times(&ts, &input)?;
    let q = emg::emg_quantification(&trials, ts.fs(), &onsets, p.positive("duration")?, &EmgQuantOptions::default())?.quantified;
    let t = relative(&q.time_vec, q.trigger_time_sec);
    let mut curve = Table::new(&["time_s", "emg (µV)"]);
    for (x, v) in t.iter().zip(&q.curve) {
        curve.row(&[fmt9(*x), fmt9(*v)]);
    }
    let mut metrics = Table::new(&["metric", "value", "unit"]);
    for (m, v, u) in [
        ("peak_magnitude", q.peak_magnitude, "µV"),
        ("peak_time", q.peak_time_sec - q.trigger_time_sec, "s"),
        ("activation_slope", q.activation_slope, "µV/s"),
        ("immediate_post_onset_slope", q.immediate_post_onset_slope, "µV/s"),
    ] {
        metrics.row(&[m.to_string(), fmt9(v), u.to_string()]);
    }
    let mut out = Outputs::default();
    out.add("emg_curve.csv", curve.into_bytes());
    out.add("emg_metrics.csv", metrics.into_bytes());
    if p.bool("plot")? {
        let s = [Series { x: &t, y: &q.curve, color: PALETTE[0] }];
        out.add("emg.svg", svg::line_plot("Rectified EMG", "time from trigger (s)", "EMG (µV)", &s, &[], Some(0.0)).into_bytes());
    }
    Ok(out)
}
