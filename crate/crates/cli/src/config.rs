//! Experiment configuration: JSON file, command-line overrides, defaults.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use active_cover::distributions::{make_preset, DistributionSpec, Preset};
use active_cover::learners::{recommended_m, LearnerConfig, LearnerKind};
use active_cover::simulation::{StopRule, DEFAULT_CHECKPOINTS};

/// Initial sample size rule for learners with an explore phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MRule {
    Fixed(usize),
    Recommended,
}

impl MRule {
    pub fn resolve(self, n: usize, dim: usize) -> usize {
        match self {
            MRule::Fixed(m) => m,
            MRule::Recommended => recommended_m(n, dim),
        }
    }
}

/// UCB width rule; `Auto` is `2 (ln n)^(1/D)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaRule {
    Fixed(f64),
    Auto,
}

impl SigmaRule {
    pub fn resolve(self, n: usize, dim: usize) -> f64 {
        match self {
            SigmaRule::Fixed(s) => s,
            SigmaRule::Auto => 2.0 * (n as f64).ln().powf(1.0 / dim as f64),
        }
    }
}

impl FromStr for MRule {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recommended" => Ok(MRule::Recommended),
            _ => s
                .parse()
                .map(MRule::Fixed)
                .map_err(|_| anyhow!("expected a positive integer or 'recommended', got '{s}'")),
        }
    }
}

impl FromStr for SigmaRule {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(SigmaRule::Auto),
            _ => s
                .parse()
                .map(SigmaRule::Fixed)
                .map_err(|_| anyhow!("expected a positive number or 'auto', got '{s}'")),
        }
    }
}

impl fmt::Display for MRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MRule::Fixed(m) => write!(f, "{m}"),
            MRule::Recommended => f.write_str("recommended"),
        }
    }
}

impl fmt::Display for SigmaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaRule::Fixed(s) => write!(f, "{s}"),
            SigmaRule::Auto => f.write_str("auto"),
        }
    }
}

// JSON accepts either a number or the keyword.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NumberOrWord<N> {
    Number(N),
    Word(String),
}

impl Serialize for MRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MRule::Fixed(m) => NumberOrWord::Number(*m),
            MRule::Recommended => NumberOrWord::Word("recommended".into()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MRule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match NumberOrWord::<usize>::deserialize(d)? {
            NumberOrWord::Number(m) => Ok(MRule::Fixed(m)),
            NumberOrWord::Word(w) => w.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl Serialize for SigmaRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SigmaRule::Fixed(v) => NumberOrWord::Number(*v),
            SigmaRule::Auto => NumberOrWord::Word("auto".into()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SigmaRule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match NumberOrWord::<f64>::deserialize(d)? {
            NumberOrWord::Number(v) => Ok(SigmaRule::Fixed(v)),
            NumberOrWord::Word(w) => w.parse().map_err(serde::de::Error::custom),
        }
    }
}

pub fn parse_stop(s: &str) -> Result<StopRule> {
    if s == "all" {
        return Ok(StopRule::AllPositivesFound);
    }
    match s.strip_prefix("budget:").map(str::parse::<usize>) {
        Some(Ok(k)) if k > 0 => Ok(StopRule::Budget(k)),
        _ => bail!("expected 'all' or 'budget:K' with K >= 1, got '{s}'"),
    }
}

pub fn stop_name(stop: StopRule) -> String {
    match stop {
        StopRule::AllPositivesFound => "all".into(),
        StopRule::Budget(k) => format!("budget:{k}"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnerEntry {
    pub kind: LearnerKind,
    #[serde(default = "default_m")]
    pub m: MRule,
    #[serde(default = "default_sigma")]
    pub sigma: SigmaRule,
}

fn default_m() -> MRule {
    MRule::Recommended
}

fn default_sigma() -> SigmaRule {
    SigmaRule::Auto
}

impl LearnerEntry {
    pub fn new(kind: LearnerKind) -> Self {
        LearnerEntry {
            kind,
            m: default_m(),
            sigma: default_sigma(),
        }
    }

    /// Learner configuration at pool size `n`; the seed is set per trial.
    pub fn config(&self, n: usize, dim: usize) -> LearnerConfig {
        let m = if self.kind.has_explore_phase() {
            self.m.resolve(n, dim)
        } else {
            0
        };
        LearnerConfig::new(self.kind, m, self.sigma.resolve(n, dim), 0)
    }
}

/// Everything that determines an experiment's results.
///
/// Defaults: preset `cube-overlap`, `dim` 2, `p` 0.3, `n` [1000], learners
/// [passive], `trials` 20, `base_seed` 1, `stop` "all", `checkpoints` 20,
/// `out` "out". `m` defaults to "recommended" and `sigma` to "auto".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub preset: Preset,
    /// Inline distribution; replaces `preset`, `dim` and `p` when present.
    pub distribution: Option<DistributionSpec<f64>>,
    /// CSV pool to use instead of sampling; `n`, `preset` and `distribution` are ignored.
    pub data: Option<PathBuf>,
    pub dim: usize,
    pub p: f64,
    pub n: Vec<usize>,
    pub learners: Vec<LearnerEntry>,
    pub trials: usize,
    pub base_seed: u64,
    pub stop: String,
    pub checkpoints: usize,
    pub out: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            preset: Preset::CubeOverlap,
            distribution: None,
            data: None,
            dim: 2,
            p: 0.3,
            n: vec![1000],
            learners: vec![LearnerEntry::new(LearnerKind::Passive)],
            trials: 20,
            base_seed: 1,
            stop: "all".into(),
            checkpoints: DEFAULT_CHECKPOINTS,
            out: PathBuf::from("out"),
        }
    }
}

/// Command-line values that override config fields when present.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub preset: Option<Preset>,
    pub data: Option<PathBuf>,
    pub learners: Vec<LearnerKind>,
    pub n: Vec<usize>,
    pub dim: Option<usize>,
    pub p: Option<f64>,
    pub m: Option<MRule>,
    pub sigma: Option<SigmaRule>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub stop: Option<String>,
    pub checkpoints: Option<usize>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        // serde_json errors carry the line and column
        serde_json::from_str(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
    }

    pub fn resolve(path: Option<&Path>, o: Overrides) -> Result<Self> {
        let mut c = match path {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        if let Some(v) = o.preset {
            c.preset = v;
            c.distribution = None;
        }
        if o.data.is_some() {
            c.data = o.data;
        }
        if !o.learners.is_empty() {
            c.learners = o.learners.into_iter().map(LearnerEntry::new).collect();
        }
        for l in &mut c.learners {
            if let Some(m) = o.m {
                l.m = m;
            }
            if let Some(s) = o.sigma {
                l.sigma = s;
            }
        }
        if !o.n.is_empty() {
            c.n = o.n;
        }
        if let Some(v) = o.dim {
            c.dim = v;
        }
        if let Some(v) = o.p {
            c.p = v;
        }
        if let Some(v) = o.trials {
            c.trials = v;
        }
        if let Some(v) = o.seed {
            c.base_seed = v;
        }
        if let Some(v) = o.stop {
            c.stop = v;
        }
        if let Some(v) = o.checkpoints {
            c.checkpoints = v;
        }
        if let Some(v) = o.out {
            c.out = v;
        }
        Ok(c)
    }

    pub fn stop_rule(&self) -> Result<StopRule> {
        parse_stop(&self.stop).context("field 'stop'")
    }

    pub fn spec(&self) -> Result<DistributionSpec<f64>> {
        match &self.distribution {
            Some(spec) => {
                spec.validate().context("field 'distribution'")?;
                Ok(spec.clone())
            }
            None => make_preset(self.preset, self.dim, self.p).context("fields 'preset'/'dim'/'p'"),
        }
    }

    pub fn dim(&self) -> usize {
        self.distribution.as_ref().map_or(self.dim, |d| d.dim)
    }

    /// Checks every field that does not depend on the data file.
    pub fn validate(&self, pool_sizes: &[usize]) -> Result<()> {
        if self.trials == 0 {
            bail!("field 'trials': must be at least 1");
        }
        if self.checkpoints == 0 {
            bail!("field 'checkpoints': must be at least 1");
        }
        if self.learners.is_empty() {
            bail!("field 'learners': at least one learner is required");
        }
        if pool_sizes.is_empty() {
            bail!("field 'n': at least one pool size is required");
        }
        if let Some(&n) = pool_sizes.iter().find(|&&n| n == 0) {
            bail!("field 'n': pool size {n} must be at least 1");
        }
        let mut kinds = std::collections::BTreeSet::new();
        if let Some(l) = self.learners.iter().find(|l| !kinds.insert(l.kind)) {
            bail!("field 'learners': {} listed more than once", l.kind);
        }
        let stop = self.stop_rule()?;
        if self.data.is_none() {
            self.spec()?;
        }
        let dim = self.dim();
        for (i, l) in self.learners.iter().enumerate() {
            if let SigmaRule::Fixed(s) = l.sigma {
                if !(s > 0.0 && s.is_finite()) && l.kind == LearnerKind::Ucb {
                    bail!("field 'learners[{i}].sigma': must be positive, got {s}");
                }
            }
            for &n in pool_sizes {
                if l.kind.has_explore_phase() {
                    let m = l.m.resolve(n, dim);
                    if m == 0 || m > n {
                        bail!(
                            "field 'learners[{i}].m': m={m} must lie in [1, n={n}] for {}",
                            l.kind
                        );
                    }
                }
                if let StopRule::Budget(k) = stop {
                    if k > n {
                        bail!("field 'stop': budget {k} exceeds pool size n={n}");
                    }
                }
                l.config(n, dim)
                    .validate(n)
                    .with_context(|| format!("field 'learners[{i}]'"))?;
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON of every result-determining field.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out = PathBuf::new();
        let json = serde_json::to_string(&c).expect("config serializes");
        let mut h = Sha256::new();
        h.update(json.as_bytes());
        if let Some(path) = &self.data {
            if let Ok(bytes) = std::fs::read(path) {
                h.update(&bytes);
            }
        }
        hex(&h.finalize())
    }
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
