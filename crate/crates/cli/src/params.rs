//! Subcommand key tables, config files and flag/file/default merging.
//!
//! Every tunable is a named key. The same name is the long flag (with `-`
//! in place of `_`), the config file key and the manifest entry.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Arg, ArgAction, ArgMatches, Command};
use motorsig_core::BandSpec;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy)]
pub enum Fallback {
    Value(&'static str),
    Required,
    Unset,
}

#[derive(Debug, Clone, Copy)]
pub enum Shape {
    Value,
    Switch,
    /// Positional list, joined with `,` in files and manifests.
    Positional,
}

#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub default: Fallback,
    pub shape: Shape,
    pub help: &'static str,
}

const fn key(name: &'static str, default: &'static str, help: &'static str) -> Key {
    Key { name, default: Fallback::Value(default), shape: Shape::Value, help }
}

const fn opt(name: &'static str, help: &'static str) -> Key {
    Key { name, default: Fallback::Unset, shape: Shape::Value, help }
}

const fn req(name: &'static str, help: &'static str) -> Key {
    Key { name, default: Fallback::Required, shape: Shape::Value, help }
}

const fn switch(name: &'static str, help: &'static str) -> Key {
    Key { name, default: Fallback::Value("false"), shape: Shape::Switch, help }
}

pub struct Spec {
    pub name: &'static str,
    pub about: &'static str,
    pub keys: &'static [Key],
}

const OUT: Key = req("out", "output directory");
const INPUT: Key = req("input", "trial-set archive directory");
const PLOT: Key = switch("plot", "also write SVG figures");
const SEED_DEFAULT: &str = "1592590337";
const SEED: Key = key("seed", SEED_DEFAULT, "seed for filter perturbations");
const DURATION: Key = key("duration", "2", "seconds kept after the trigger");
const EEG_CHANNEL: Key = opt("channel", "channel label or index (default C3, else the first channel)");
const EMG_CHANNEL: Key = key("channel", "EMG", "EMG channel label or index");
const CONN_BAND: Key = key("band", "12-32", "band as lo-hi Hz or a name (alpha, beta, ...)");
const CONN_CHANNELS: Key = opt("channels", "comma-separated labels or indices (default all but EMG)");
const PERTNUM: Key = key("pertnum", "100", "filter perturbation repetitions per phase estimate");
const AGGREGATION: Key = key("aggregation", "mean", "trial aggregation: mean or pooled");

pub const SPECS: &[Spec] = &[
    Spec {
        name: "convert",
        about: "Convert one BDF file per trial into a trial-set archive",
        keys: &[
            Key { name: "inputs", default: Fallback::Required, shape: Shape::Positional, help: "BDF files, one per trial" },
            OUT,
            opt("channels", "channel indices to keep (default all)"),
            opt("emg_channel", "index of the EMG channel, stored last as EMG"),
            switch("drift_reject", "remove slow drift from every channel"),
            switch("detect_onsets", "detect movement onsets on the EMG channel"),
            opt("window", "onset STD window, samples (default 0.05 s)"),
            key("th_coeff", "1", "onset threshold, baseline standard deviations"),
            key("baseline_s", "0.5", "onset baseline length, seconds"),
        ],
    },
    Spec {
        name: "synth",
        about: "Generate a synthetic trial-set archive with known ground truth",
        keys: &[
            OUT,
            key("seed", SEED_DEFAULT, "generator seed"),
            key("trials", "20", "number of trials"),
            key("channels", "8", "number of EEG channels"),
            key("fs", "500", "sampling rate, Hz"),
            key("length", "6", "trial length, seconds"),
            key("onset", "3.5", "mean onset time, seconds"),
            key("onset_jitter", "0.2", "uniform onset jitter, +/- seconds"),
            key("rhythm_hz", "10", "background rhythm frequency, Hz (none to disable)"),
            key("rhythm_amp", "10", "background rhythm amplitude, uV"),
            key("rhythm_drift", "0", "rhythm frequency drift, Hz"),
            key("erd_band", "8-12", "band whose rhythm desynchronizes"),
            key("erd_drop", "0.3", "ERD power ratio in (0, 1] (none to disable)"),
            key("erd_start", "0", "ERD start relative to onset, seconds"),
            key("erd_end", "1", "ERD end relative to onset, seconds"),
            key("coupling_pair", "auto", "coupled channel indices; auto = C3,C4 or first,last (none to disable)"),
            key("coupling_band", "16-24", "coupling band"),
            key("coupling_amp", "5", "coupled oscillation amplitude, uV"),
            key("coupling_pre", "0.2", "target PLV before onset"),
            key("coupling_post", "0.8", "target PLV after onset"),
            key("emg_amp", "40", "EMG burst amplitude, uV (none to disable)"),
            key("emg_rise", "0.05", "EMG envelope rise time, seconds"),
            key("emg_quiet", "2", "EMG resting noise, uV"),
            key("ecg_bpm", "72", "ECG rate in the EMG channel (none to disable)"),
            key("ecg_amp", "30", "ECG pulse amplitude, uV"),
            key("noise_power", "1", "background noise power, uV^2"),
            key("noise", "pink", "background noise: pink or white"),
        ],
    },
    Spec {
        name: "erp",
        about: "Trigger-averaged band-power ERP curve",
        keys: &[INPUT, OUT, EEG_CHANNEL, key("band", "alpha", "band as lo-hi Hz or a name"), DURATION, PLOT],
    },
    Spec {
        name: "erp-quant",
        about: "ERD/ERS segments of the ERP curve against a reference period",
        keys: &[
            INPUT,
            OUT,
            EEG_CHANNEL,
            key("band", "alpha", "band as lo-hi Hz or a name"),
            DURATION,
            key("ref_per", "-1.3,-0.3", "reference period relative to the trigger, seconds"),
            key("cof_intv", "3", "confidence interval, reference standard deviations"),
            PLOT,
        ],
    },
    Spec {
        name: "erp-tf",
        about: "Trigger-averaged time-frequency ERP map",
        keys: &[INPUT, OUT, EEG_CHANNEL, DURATION, key("method", "STFT", "STFT, CWT or NBCH"), PLOT],
    },
    Spec {
        name: "tcplv",
        about: "Time-course PLV in 1 s windows for one pair or against a reference",
        keys: &[
            INPUT,
            OUT,
            opt("pair", "two channels, e.g. C3,C4"),
            opt("reference", "reference channel against all others (default C3)"),
            CONN_BAND,
            PERTNUM,
            SEED,
            AGGREGATION,
            PLOT,
        ],
    },
    Spec {
        name: "pwplv",
        about: "Pairwise PLV maps per 1 s window",
        keys: &[INPUT, OUT, CONN_CHANNELS, CONN_BAND, PERTNUM, SEED, AGGREGATION, PLOT],
    },
    Spec {
        name: "pwcoh",
        about: "Pairwise magnitude-squared coherence maps per 1 s window",
        keys: &[
            INPUT,
            OUT,
            CONN_CHANNELS,
            CONN_BAND,
            key("segments", "4", "segments per window and trial"),
            key("aggregation", "pooled", "trial aggregation: mean or pooled"),
            PLOT,
        ],
    },
    Spec {
        name: "emg-onset",
        about: "Movement onset per trial from the EMG channel",
        keys: &[
            INPUT,
            OUT,
            EMG_CHANNEL,
            opt("window", "STD window, samples (default 0.05 s)"),
            key("th_coeff", "1", "threshold, baseline standard deviations"),
            key("baseline_s", "0.5", "baseline length, seconds"),
            switch("remove_ecg", "subtract the ECG estimate before detection"),
        ],
    },
    Spec {
        name: "emg-quant",
        about: "ECG-cleaned, rectified, trigger-averaged EMG curve and metrics",
        keys: &[INPUT, OUT, EMG_CHANNEL, DURATION, PLOT],
    },
];

pub fn spec(name: &str) -> Option<&'static Spec> {
    SPECS.iter().find(|s| s.name == name)
}

fn flag_name(key: &str) -> String {
    key.replace('_', "-")
}

fn norm_key(key: &str) -> String {
    key.trim().replace('-', "_")
}

pub fn command() -> Command {
    let mut cmd = Command::new("motorsig")
        .about("Motor-cortex EEG/EMG analysis: ERP, ERD/ERS, TF maps, PLV, coherence and EMG")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .args_override_self(true)
        .arg_required_else_help(true);
    for s in SPECS {
        let mut sub = Command::new(s.name)
            .about(s.about)
            .args_override_self(true)
            .arg(Arg::new("config").long("config").value_name("FILE").help("key = value config file"));
        for k in s.keys {
            let arg = Arg::new(k.name).help(k.help);
            let arg = match k.shape {
                Shape::Value => arg.long(flag_name(k.name)).value_name("VALUE"),
                Shape::Switch => arg.long(flag_name(k.name)).action(ArgAction::SetTrue),
                Shape::Positional => arg.num_args(0..).value_name("FILE"),
            };
            sub = sub.arg(arg);
        }
        cmd = cmd.subcommand(sub);
    }
    cmd.subcommand(
        Command::new("rerun")
            .about("Repeat a run from its run.json manifest")
            .arg(Arg::new("manifest").required(true).value_name("RUN_JSON"))
            .arg(Arg::new("out").long("out").value_name("DIR").help("write to another directory")),
    )
}

/// Values given on the command line.
pub fn flags(spec: &Spec, m: &ArgMatches) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for k in spec.keys {
        match k.shape {
            Shape::Switch => {
                if m.get_flag(k.name) {
                    out.insert(k.name.to_string(), "true".into());
                }
            }
            Shape::Value => {
                if let Some(v) = m.get_one::<String>(k.name) {
                    out.insert(k.name.to_string(), v.clone());
                }
            }
            Shape::Positional => {
                if let Some(v) = m.get_many::<String>(k.name) {
                    out.insert(k.name.to_string(), v.cloned().collect::<Vec<_>>().join(","));
                }
            }
        }
    }
    out
}

/// Parses `key = value` lines. `#` starts a comment.
pub fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::validation(format!("config line {}: expected key = value", i + 1)))?;
        out.insert(norm_key(k), v.trim().to_string());
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

/// Defaults, then the config file, then flags.
pub fn resolve(spec: &Spec, file: &BTreeMap<String, String>, flags: &BTreeMap<String, String>) -> CliResult<Params> {
    for k in file.keys().chain(flags.keys()) {
        if !spec.keys.iter().any(|s| s.name == k) {
            return Err(CliError::validation(format!("unknown key `{k}` for {}", spec.name)));
        }
    }
    let mut values = BTreeMap::new();
    for k in spec.keys {
        let v = flags.get(k.name).or_else(|| file.get(k.name)).cloned().or(match k.default {
            Fallback::Value(d) => Some(d.to_string()),
            _ => None,
        });
        match (v, k.default) {
            (Some(v), _) if !v.is_empty() => {
                values.insert(k.name.to_string(), v);
            }
            (_, Fallback::Required) => {
                return Err(CliError::validation(format!("{}: missing required `{}`", spec.name, k.name)));
            }
            _ => {}
        }
    }
    Ok(Params { command: spec.name.to_string(), values })
}

/// Fully resolved key values for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub command: String,
    pub values: BTreeMap<String, String>,
}

impl Params {
    pub fn get(&self, k: &str) -> Option<&str> {
        self.values.get(k).map(String::as_str).filter(|v| !v.eq_ignore_ascii_case("none"))
    }

    fn bad(&self, k: &str, what: &str) -> CliError {
        CliError::validation(format!("`{k}` = {:?} is not {what}", self.values.get(k).map_or("", String::as_str)))
    }

    fn parse<T: FromStr>(&self, k: &str, what: &str) -> CliResult<Option<T>> {
        self.get(k).map(|v| v.trim().parse().map_err(|_| self.bad(k, what))).transpose()
    }

    pub fn string(&self, k: &str) -> CliResult<String> {
        self.get(k).map(str::to_string).ok_or_else(|| CliError::validation(format!("missing `{k}`")))
    }

    pub fn path(&self, k: &str) -> CliResult<PathBuf> {
        self.string(k).map(PathBuf::from)
    }

    pub fn opt_f64(&self, k: &str) -> CliResult<Option<f64>> {
        match self.parse::<f64>(k, "a number")? {
            Some(v) if !v.is_finite() => Err(self.bad(k, "a finite number")),
            v => Ok(v),
        }
    }

    pub fn f64(&self, k: &str) -> CliResult<f64> {
        self.opt_f64(k)?.ok_or_else(|| CliError::validation(format!("missing `{k}`")))
    }

    pub fn positive(&self, k: &str) -> CliResult<f64> {
        let v = self.f64(k)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(self.bad(k, "positive"))
        }
    }

    pub fn opt_usize(&self, k: &str) -> CliResult<Option<usize>> {
        self.parse(k, "a non-negative integer")
    }

    pub fn usize(&self, k: &str) -> CliResult<usize> {
        self.opt_usize(k)?.ok_or_else(|| CliError::validation(format!("missing `{k}`")))
    }

    pub fn u64(&self, k: &str) -> CliResult<u64> {
        self.parse(k, "a non-negative integer")?.ok_or_else(|| CliError::validation(format!("missing `{k}`")))
    }

    pub fn bool(&self, k: &str) -> CliResult<bool> {
        match self.get(k).map(|v| v.trim().to_ascii_lowercase()).as_deref() {
            None | Some("false" | "no" | "0" | "off") => Ok(false),
            Some("true" | "yes" | "1" | "on") => Ok(true),
            _ => Err(self.bad(k, "a boolean")),
        }
    }

    pub fn band(&self, k: &str) -> CliResult<Option<BandSpec>> {
        self.get(k).map(|v| v.parse::<BandSpec>().map_err(|_| self.bad(k, "a band"))).transpose()
    }

    pub fn list(&self, k: &str) -> Option<Vec<String>> {
        self.get(k).map(|v| v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
    }

    pub fn f64_pair(&self, k: &str) -> CliResult<Option<(f64, f64)>> {
        let Some(items) = self.list(k) else { return Ok(None) };
        let nums: Vec<f64> = items.iter().map(|s| s.parse().map_err(|_| self.bad(k, "two numbers"))).collect::<CliResult<_>>()?;
        match nums.as_slice() {
            [a, b] if a.is_finite() && b.is_finite() => Ok(Some((*a, *b))),
            _ => Err(self.bad(k, "two numbers")),
        }
    }
}
