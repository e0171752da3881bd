//! Experiment configuration: flat `key = value` files with `#` comments,
//! overridable key by key from the command line.

use crate::error::{Error, Result};
use crate::graph::{parse_ratio, ratio_to_f64, validate_probability, Graph, Schedule};
use crate::invariants::KappaMethod;
use crate::value::{binomial, Caps};
use num_rational::Ratio;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Equality,
    Concentration,
    Chernoff,
    DelicateScan,
    Survey,
}

impl FromStr for ExperimentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "equality" => ExperimentKind::Equality,
            "concentration" => ExperimentKind::Concentration,
            "chernoff" => ExperimentKind::Chernoff,
            "delicate" | "delicate_scan" => ExperimentKind::DelicateScan,
            "survey" | "f_tau" | "f_and_tau" => ExperimentKind::Survey,
            other => return Err(Error::Validation(format!("unknown experiment kind {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Probability {
    Fixed(f64),
    Schedule(Schedule),
}

impl Probability {
    pub fn at(&self, n: usize) -> f64 {
        match self {
            Probability::Fixed(p) => *p,
            Probability::Schedule(s) => s.eval(n),
        }
    }
}

/// Largest deletion set the κ search may try.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KappaCap {
    Absolute(usize),
    /// δ^i(G) + k, resolved per sampled graph.
    DeltaPlus(usize),
}

impl FromStr for KappaCap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace(' ', "");
        let bad = || Error::Validation(format!("kappa cap must be an integer or delta+k, got {s:?}"));
        if let Some(rest) = t.strip_prefix("delta") {
            return match rest.strip_prefix('+') {
                None if rest.is_empty() => Ok(KappaCap::DeltaPlus(0)),
                Some(k) => k.parse().map(KappaCap::DeltaPlus).map_err(|_| bad()),
                None => Err(bad()),
            };
        }
        t.parse().map(KappaCap::Absolute).map_err(|_| bad())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConcentrationMode {
    /// d^-_k and d^+_k against n p^k (1 ± ε).
    Neighborhoods,
    /// b_{a,b} against a b p (1 - ε).
    Interconnection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" | "ndjson" => Ok(Format::Json),
            other => Err(Error::Validation(format!("unknown format {other:?}"))),
        }
    }
}

/// Raw key/value settings, in file order of precedence: later `set` calls win.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Settings(BTreeMap<String, String>);

fn norm_key(k: &str) -> String {
    k.trim().to_ascii_lowercase().replace('-', "_")
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Settings::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected key = value, got {line:?}"),
                });
            };
            if k.trim().is_empty() {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: "empty key".into(),
                });
            }
            out.set(k, v.trim());
        }
        Ok(out)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.0.insert(norm_key(key), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(&norm_key(key)).map(|s| s.as_str())
    }

    fn parse_as<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .trim()
                .parse()
                .map(Some)
                .map_err(|_| Error::Validation(format!("bad value for {key}: {v:?}"))),
        }
    }

    fn ratio(&self, key: &str) -> Result<Option<Ratio<i64>>> {
        self.get(key).map(parse_ratio).transpose()
    }

    fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(|k| k.as_str())
    }
}

const KNOWN_KEYS: &[&str] = &[
    "kind", "n", "p", "alpha", "c", "i", "trials", "seed", "kappa_cap", "kappa_method", "epsilon", "ell", "r", "k",
    "mode", "a", "b", "samples", "m", "draws", "c_size_cap", "workers", "timing", "input", "output", "format",
    "cap_enumeration", "cap_faces", "cap_classes", "cap_cycles", "cap_coset", "cap_hochster",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n_values: Vec<usize>,
    pub probability: Probability,
    pub i: usize,
    pub trials: usize,
    pub seed: u64,
    pub caps: Caps,
    pub kappa_cap: KappaCap,
    pub kappa_method: KappaMethod,
    pub epsilon: Ratio<i64>,
    pub ell: usize,
    pub r: Ratio<i64>,
    /// Neighborhood set size for the concentration sandwich.
    pub k: usize,
    pub mode: ConcentrationMode,
    pub a: usize,
    pub b: usize,
    /// Switches the interconnection and condition-(∗) searches to random
    /// sampling (reported as such) with this many samples.
    pub samples: Option<usize>,
    pub m: usize,
    pub draws: usize,
    pub c_size_cap: usize,
    pub workers: usize,
    /// Record wall time per trial (off by default so outputs are byte-stable).
    pub timing: bool,
    /// Run every trial on this graph instead of sampling.
    pub input: Option<Graph>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentConfig {
            kind,
            n_values: Vec::new(),
            probability: Probability::Fixed(0.5),
            i: 1,
            trials: 1,
            seed: 0,
            caps: Caps::default(),
            kappa_cap: KappaCap::DeltaPlus(0),
            kappa_method: KappaMethod::Auto,
            epsilon: Ratio::new(1, 2),
            ell: 5,
            r: Ratio::from_integer(5),
            k: 1,
            mode: ConcentrationMode::Neighborhoods,
            a: 2,
            b: 2,
            samples: None,
            m: 1000,
            draws: 100_000,
            c_size_cap: 2,
            workers: 1,
            timing: false,
            input: None,
            output: None,
            format: Format::Csv,
        }
    }

    pub fn from_settings(s: &Settings) -> Result<Self> {
        if let Some(k) = s.keys().find(|k| !KNOWN_KEYS.contains(k)) {
            return Err(Error::Validation(format!("unknown setting {k:?}")));
        }
        let kind: ExperimentKind = s
            .get("kind")
            .ok_or_else(|| Error::Validation("missing setting: kind".into()))?
            .parse()?;
        let mut cfg = ExperimentConfig::new(kind);
        if let Some(ns) = s.get("n") {
            cfg.n_values = ns
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Validation(format!("bad n value {t:?}"))))
                .collect::<Result<_>>()?;
        }
        match (s.get("p"), s.get("alpha")) {
            (Some(_), Some(_)) => return Err(Error::Validation("give either p or alpha, not both".into())),
            (Some(p), None) => {
                let p: f64 = p.trim().parse().map_err(|_| Error::Validation(format!("bad p {p:?}")))?;
                cfg.probability = Probability::Fixed(validate_probability(p)?);
            }
            (None, Some(_)) => {
                let alpha = s.ratio("alpha")?.unwrap();
                let c = s.ratio("c")?.unwrap_or(Ratio::from_integer(1));
                cfg.probability = Probability::Schedule(Schedule::new(alpha, c)?);
            }
            (None, None) => {}
        }
        if let Some(v) = s.parse_as("i")? {
            cfg.i = v;
        }
        if let Some(v) = s.parse_as("trials")? {
            cfg.trials = v;
        }
        if let Some(v) = s.parse_as("seed")? {
            cfg.seed = v;
        }
        if let Some(v) = s.get("kappa_cap") {
            cfg.kappa_cap = v.parse()?;
        }
        if let Some(v) = s.get("kappa_method") {
            cfg.kappa_method = match v.trim() {
                "auto" => KappaMethod::Auto,
                "exhaustive" => KappaMethod::Exhaustive,
                other => return Err(Error::Validation(format!("unknown kappa method {other:?}"))),
            };
        }
        if let Some(v) = s.ratio("epsilon")? {
            cfg.epsilon = v;
        }
        if let Some(v) = s.parse_as("ell")? {
            cfg.ell = v;
        }
        if let Some(v) = s.ratio("r")? {
            cfg.r = v;
        }
        if let Some(v) = s.parse_as("k")? {
            cfg.k = v;
        }
        if let Some(v) = s.get("mode") {
            cfg.mode = match v.trim() {
                "neighborhoods" | "degrees" | "i" => ConcentrationMode::Neighborhoods,
                "interconnection" | "ii" => ConcentrationMode::Interconnection,
                other => return Err(Error::Validation(format!("unknown concentration mode {other:?}"))),
            };
        }
        if let Some(v) = s.parse_as("a")? {
            cfg.a = v;
        }
        if let Some(v) = s.parse_as("b")? {
            cfg.b = v;
        }
        cfg.samples = s.parse_as("samples")?;
        if let Some(v) = s.parse_as("m")? {
            cfg.m = v;
        }
        if let Some(v) = s.parse_as("draws")? {
            cfg.draws = v;
        }
        if let Some(v) = s.parse_as("c_size_cap")? {
            cfg.c_size_cap = v;
        }
        if let Some(v) = s.parse_as("workers")? {
            cfg.workers = v;
        }
        if let Some(v) = s.parse_as("timing")? {
            cfg.timing = v;
        }
        if let Some(path) = s.get("input") {
            let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
            cfg.input = Some(Graph::read_edge_list(std::io::BufReader::new(file))?);
        }
        cfg.output = s.get("output").map(PathBuf::from);
        if let Some(v) = s.get("format") {
            cfg.format = v.parse()?;
        }
        let caps = &mut cfg.caps;
        for (key, slot) in [
            ("cap_enumeration", &mut caps.enumeration),
            ("cap_faces", &mut caps.faces),
            ("cap_classes", &mut caps.classes),
            ("cap_cycles", &mut caps.cycles),
            ("cap_coset", &mut caps.coset),
        ] {
            if let Some(v) = s.parse_as(key)? {
                *slot = v;
            }
        }
        if let Some(v) = s.parse_as("cap_hochster")? {
            caps.hochster_vertices = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// The vertex counts the experiment runs over: the input graph's size
    /// when one is given.
    pub fn sizes(&self) -> Vec<usize> {
        match &self.input {
            Some(g) => vec![g.n()],
            None => self.n_values.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Validation(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        let c = &self.caps;
        if c.enumeration == 0 || c.faces == 0 || c.classes == 0 || c.cycles == 0 || c.coset == 0 || c.hochster_vertices == 0 {
            return bad("all caps must be positive".into());
        }
        if self.workers == 0 {
            return bad("workers must be at least 1".into());
        }
        if let Probability::Fixed(p) = self.probability {
            validate_probability(p)?;
        }
        let eps = ratio_to_f64(self.epsilon);
        if self.kind != ExperimentKind::Chernoff && self.sizes().is_empty() {
            return bad("at least one n value is required".into());
        }
        match self.kind {
            ExperimentKind::Equality => {
                for n in self.sizes() {
                    if let KappaCap::Absolute(cap) = self.kappa_cap {
                        if cap > n {
                            return bad(format!("kappa cap {cap} exceeds n = {n}"));
                        }
                        let expected = n as f64 * self.probability.at(n).powi(self.i as i32 + 1);
                        let flow = self.i == 0 && self.kappa_method == KappaMethod::Auto;
                        if !flow && expected > cap as f64 {
                            return bad(format!(
                                "expected δ^{} ≈ {expected:.2} at n = {n} is beyond the kappa cap {cap}",
                                self.i
                            ));
                        }
                    }
                }
            }
            ExperimentKind::Concentration => {
                if eps.is_nan() || eps <= 0.0 {
                    return bad("epsilon must be positive".into());
                }
                for n in self.sizes() {
                    match self.mode {
                        ConcentrationMode::Neighborhoods => {
                            if self.k == 0 || self.k > n {
                                return bad(format!("k = {} must lie in 1..={n}", self.k));
                            }
                            let sets = binomial(n, self.k);
                            if sets > c.enumeration as u128 {
                                return Err(Error::guard(format!("{n} choose {}", self.k), sets, c.enumeration));
                            }
                        }
                        ConcentrationMode::Interconnection => {
                            if self.a == 0 || self.b == 0 || self.a + self.b > n {
                                return bad(format!("need a, b ≥ 1 and a + b ≤ n = {n}"));
                            }
                            if binomial(n, self.a) > c.enumeration as u128 && self.samples.is_none() {
                                return bad(format!(
                                    "exact interconnection at n = {n}, a = {} exceeds the enumeration cap; set samples for the sampled mode",
                                    self.a
                                ));
                            }
                        }
                    }
                }
            }
            ExperimentKind::Chernoff => {
                if self.m == 0 || self.draws == 0 {
                    return bad("m and draws must be at least 1".into());
                }
                if !(eps > 0.0 && eps < 1.0) {
                    return bad("epsilon must lie strictly between 0 and 1".into());
                }
                if !matches!(self.probability, Probability::Fixed(_)) {
                    return bad("the Chernoff experiment takes a fixed p".into());
                }
            }
            ExperimentKind::DelicateScan => {
                for n in self.sizes() {
                    let bound = delicate_size_bound(n, self.probability.at(n), self.i, eps);
                    let sets: u128 = (0..=bound.min(n)).map(|s| binomial(n, s)).sum();
                    if sets > c.enumeration as u128 && self.samples.is_none() {
                        return Err(Error::guard(format!("deletion sets of size ≤ {bound} at n = {n}"), sets, c.enumeration));
                    }
                }
            }
            ExperimentKind::Survey => {
                for n in self.sizes() {
                    if n > 20 {
                        return bad(format!("the f/τ survey supports n ≤ 20, got {n}"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Largest |C| allowed by |C| ≤ n p^{i+1} (2 - ε).
pub fn delicate_size_bound(n: usize, p: f64, i: usize, eps: f64) -> usize {
    let b = n as f64 * p.powi(i as i32 + 1) * (2.0 - eps);
    if b < 0.0 {
        0
    } else {
        (b + 1e-9).floor() as usize
    }
}
