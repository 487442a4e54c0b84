//! Run configuration: built-in defaults, then a `key = value` file, then
//! `--set` overrides and dedicated flags.

use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use friendrec::dataset::parse_key_values;
use friendrec::eval::CohortSpec;
use friendrec::synth::SynthConfig;
use friendrec::{CurrentParams64, Params64, Timestamp};

const WEIGHT_KEYS: [&str; 5] = ["w_friends", "w_schools", "w_groups", "w_ips", "w_interactions"];
const T_KEYS: [&str; 4] = ["t1", "t2", "t3", "t4"];
const E_KEYS: [&str; 6] = ["e12", "e13", "e14", "e23", "e24", "e34"];

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: Params64,
    pub current: CurrentParams64,
    pub split_boundary: Option<Timestamp>,
    pub cohorts: Vec<CohortSpec>,
    pub sweep_cohort: CohortSpec,
    pub sweep_step: f64,
    pub min_new: usize,
    pub seed: u64,
    pub synth: SynthConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: Params64::default(),
            current: CurrentParams64::default(),
            split_boundary: None,
            cohorts: CohortSpec::standard(),
            sweep_cohort: CohortSpec::new("validation", 20, Some(30), 1000),
            sweep_step: 0.1,
            min_new: 5,
            seed: 42,
            synth: SynthConfig::default(),
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: Display,
{
    value
        .parse()
        .map_err(|e| format!("invalid value `{value}` for `{key}`: {e}"))
}

fn parse_cohorts(value: &str) -> Result<Vec<CohortSpec>, String> {
    let specs = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<CohortSpec>())
        .collect::<Result<Vec<_>, _>>()?;
    if specs.is_empty() {
        return Err("`cohorts` needs at least one spec".into());
    }
    Ok(specs)
}

impl RunConfig {
    /// Applies one setting. Unknown keys are rejected.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        if let Some(i) = WEIGHT_KEYS.iter().position(|k| *k == key) {
            self.params.feature_weights.w[i] = parse(key, value)?;
            return Ok(());
        }
        if let Some(i) = T_KEYS.iter().position(|k| *k == key) {
            self.current.t[i] = parse(key, value)?;
            return Ok(());
        }
        if let Some(i) = E_KEYS.iter().position(|k| *k == key) {
            let mut upper = self.current.upper();
            upper[i] = parse(key, value)?;
            self.current = CurrentParams64::from_upper(self.current.t, upper);
            return Ok(());
        }
        let p = &mut self.params;
        let s = &mut self.synth;
        match key {
            "w_direct" => p.w_direct = parse(key, value)?,
            "w_indirect" => p.w_indirect = parse(key, value)?,
            "alpha" => p.rwr.alpha = parse(key, value)?,
            "epsilon" => p.rwr.epsilon = parse(key, value)?,
            "max_iters" => p.rwr.max_iters = parse(key, value)?,
            "max_candidates" => {
                p.max_candidates = match value {
                    "none" | "unlimited" => usize::MAX,
                    _ => parse(key, value)?,
                }
            }
            "min_mutual" => p.min_mutual = parse(key, value)?,
            "split_boundary" => self.split_boundary = Some(parse(key, value)?),
            "cohorts" => self.cohorts = parse_cohorts(value)?,
            "sweep_cohort" => self.sweep_cohort = parse(key, value)?,
            "sweep_step" => self.sweep_step = parse(key, value)?,
            "min_new" => self.min_new = parse(key, value)?,
            "seed" => {
                self.seed = parse(key, value)?;
                s.seed = self.seed;
            }
            "n_users" => s.n_users = parse(key, value)?,
            "n_communities" => s.n_communities = parse(key, value)?,
            "p_in" => s.p_in = parse(key, value)?,
            "p_out" => s.p_out = parse(key, value)?,
            "schools_per_community" => s.schools_per_community = parse(key, value)?,
            "groups_per_community" => s.groups_per_community = parse(key, value)?,
            "ip_pool_per_community" => s.ip_pool_per_community = parse(key, value)?,
            "interaction_rate" => s.interaction_rate = parse(key, value)?,
            "future_fraction" => s.future_fraction = parse(key, value)?,
            _ => return Err(format!("unknown configuration key `{key}`")),
        }
        Ok(())
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), String> {
        for (k, v) in parse_key_values(text)? {
            self.set(&k, &v)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        self.apply_text(&text)
            .map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), String> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| format!("expected KEY=VALUE, got `{assignment}`"))?;
        self.set(k.trim(), v.trim())
    }

    pub fn validate(&self) -> Result<(), String> {
        self.params.validate().map_err(|e| e.to_string())?;
        self.current.validate().map_err(|e| e.to_string())?;
        Ok(())
    }
}
