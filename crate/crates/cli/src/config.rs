//! Flat `section.key = value` configuration with defaults, a file layer and
//! a command-line layer, in that order of precedence.

use std::collections::BTreeMap;
use std::path::Path;

use lrti::{epsilon_range, GlobalQuench, KernelMode, ModelParams, QuenchPath, Window};

use crate::CliError;

/// Every accepted key with its default. `auto` is resolved from other keys.
const DEFAULTS: &[(&str, &str)] = &[
    ("model.alpha", "1.5"),
    ("model.J", "1"),
    ("model.h", "50"),
    ("model.N", "512"),
    ("model.kernel", "finite_ring"),
    ("quench.J_pre", "auto"),
    ("quench.h_pre", "auto"),
    ("quench.path", "auto"),
    ("quench.observable", "Gx"),
    ("grid.r_min", "1"),
    ("grid.r_max", "auto"),
    ("grid.t_max", "350"),
    ("grid.dt", "0.1"),
    ("entropy.order", "1"),
    ("entropy.approx_uk", "false"),
    ("analysis.eps", "0.01:0.12:12"),
    ("analysis.r_min", "8"),
    ("analysis.r_max", "auto"),
    ("analysis.destagger", "none"),
    ("analysis.ridges", "false"),
    ("oracle.mode", "global"),
    ("oracle.t_max", "2"),
    ("oracle.dt", "0.1"),
    ("input.path", ""),
    ("output.path", "-"),
];

/// Short spellings accepted on the command line.
const ALIASES: &[(&str, &str)] = &[
    ("alpha", "model.alpha"),
    ("J", "model.J"),
    ("h", "model.h"),
    ("N", "model.N"),
    ("tmax", "grid.t_max"),
    ("dt", "grid.dt"),
    ("eps", "analysis.eps"),
    ("order", "entropy.order"),
    ("input", "input.path"),
    ("out", "output.path"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    /// Defaults, then `file`, then `args` (`--key value` or `--key=value`).
    pub fn load(file: Option<&Path>, args: &[String]) -> Result<Self, CliError> {
        let mut cfg = RunConfig { values: DEFAULTS.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect() };
        let mut h_over_j = None;
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)?;
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| config_err(format!("{}:{}: expected key = value", path.display(), lineno + 1)))?;
                cfg.set(k.trim(), v.trim(), &mut h_over_j)?;
            }
        }
        let mut it = args.iter();
        while let Some(arg) = it.next() {
            let flag = arg.strip_prefix("--").ok_or_else(|| config_err(format!("unexpected argument `{arg}`")))?;
            let (k, v) = match flag.split_once('=') {
                Some((k, v)) => (k.to_string(), v.to_string()),
                None => {
                    let v = it.next().ok_or_else(|| config_err(format!("`--{flag}` needs a value")))?;
                    (flag.to_string(), v.clone())
                }
            };
            cfg.set(&k, &v, &mut h_over_j)?;
        }
        if let Some(ratio) = h_over_j {
            let j = cfg.f64("model.J")?;
            cfg.values.insert("model.h".into(), (ratio * j).to_string());
        }
        cfg.resolve()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str, h_over_j: &mut Option<f64>) -> Result<(), CliError> {
        if matches!(key, "h-over-J" | "model.h_over_J") {
            *h_over_j = Some(parse_f64(key, value)?);
            return Ok(());
        }
        let key = ALIASES.iter().find(|(a, _)| *a == key).map_or(key, |(_, full)| full);
        match self.values.get_mut(key) {
            Some(slot) => {
                *slot = value.to_string();
                Ok(())
            }
            None => Err(config_err(format!("unknown key `{key}`"))),
        }
    }

    fn resolve(&mut self) -> Result<(), CliError> {
        let h = self.f64("model.h")?;
        let n = self.usize("model.N")?;
        self.fill("quench.h_pre", h.to_string());
        let h_pre = self.f64("quench.h_pre")?;
        self.fill("quench.J_pre", (h_pre / 50.0).to_string());
        let path = if h_pre == h { "paper_j_quench" } else { "generic_bogoliubov" };
        self.fill("quench.path", path.into());
        self.fill("grid.r_max", (n / 2).to_string());
        // validate every typed key once so a bad value fails before any work
        for key in ["model.alpha", "model.J", "model.h", "quench.J_pre", "quench.h_pre", "grid.t_max", "grid.dt"] {
            self.f64(key)?;
        }
        for key in ["oracle.t_max", "oracle.dt", "analysis.r_min"] {
            self.f64(key)?;
        }
        self.usize("grid.r_min")?;
        self.usize("grid.r_max")?;
        self.bool("entropy.approx_uk")?;
        self.bool("analysis.ridges")?;
        self.epsilons()?;
        self.params()?;
        self.global_quench()?.validate()?;
        Ok(())
    }

    fn fill(&mut self, key: &str, value: String) {
        if self.get(key) == "auto" {
            self.values.insert(key.into(), value);
        }
    }

    pub fn get(&self, key: &str) -> &str {
        self.values.get(key).map_or("", String::as_str)
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        parse_f64(key, self.get(key))
    }

    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        self.get(key).parse().map_err(|_| config_err(format!("`{key}` must be a non-negative integer, got `{}`", self.get(key))))
    }

    pub fn bool(&self, key: &str) -> Result<bool, CliError> {
        self.get(key).parse().map_err(|_| config_err(format!("`{key}` must be true or false, got `{}`", self.get(key))))
    }

    pub fn params(&self) -> Result<ModelParams<f64>, CliError> {
        let kernel: KernelMode = self.get("model.kernel").parse()?;
        Ok(ModelParams::new(self.f64("model.J")?, self.f64("model.h")?, self.f64("model.alpha")?, self.usize("model.N")?)?
            .with_kernel(kernel))
    }

    pub fn global_quench(&self) -> Result<GlobalQuench<f64>, CliError> {
        let p = self.params()?;
        let path: QuenchPath = self.get("quench.path").parse()?;
        let q = GlobalQuench::new(p.alpha, p.n, (self.f64("quench.J_pre")?, self.f64("quench.h_pre")?), (p.j, p.h), path)?;
        Ok(q.with_kernel(p.kernel))
    }

    pub fn r_grid(&self) -> Result<Vec<usize>, CliError> {
        let (lo, hi) = (self.usize("grid.r_min")?, self.usize("grid.r_max")?);
        if lo > hi {
            return Err(config_err(format!("grid.r_min = {lo} exceeds grid.r_max = {hi}")));
        }
        Ok((lo..=hi).collect())
    }

    /// `lo:hi:n`, `lo:hi` (seven values) or a comma-separated list.
    pub fn epsilons(&self) -> Result<Vec<f64>, CliError> {
        let spec = self.get("analysis.eps");
        let parts: Vec<&str> = spec.split(':').collect();
        match parts.as_slice() {
            [lo, hi] => Ok(epsilon_range(parse_f64("analysis.eps", lo)?, parse_f64("analysis.eps", hi)?, 7)?),
            [lo, hi, n] => {
                let n = n.parse().map_err(|_| config_err(format!("bad count in analysis.eps `{spec}`")))?;
                Ok(epsilon_range(parse_f64("analysis.eps", lo)?, parse_f64("analysis.eps", hi)?, n)?)
            }
            [list] => {
                let eps = list.split(',').map(|e| parse_f64("analysis.eps", e.trim())).collect::<Result<Vec<_>, _>>()?;
                if eps.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
                    return Err(config_err(format!("analysis.eps values must lie in (0, 1), got `{spec}`")));
                }
                Ok(eps)
            }
            _ => Err(config_err(format!("cannot parse analysis.eps `{spec}`"))),
        }
    }

    /// Fit window; `analysis.r_max = auto` means `0.8 · R_max` of the field.
    pub fn window(&self, field_r_max: usize) -> Result<Window<f64>, CliError> {
        let hi = match self.get("analysis.r_max") {
            "auto" => 0.8 * field_r_max as f64,
            _ => self.f64("analysis.r_max")?,
        };
        Ok(Window::new(self.f64("analysis.r_min")?, hi)?)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(self.values.iter().map(|(k, v)| (k.clone(), v.clone().into())).collect())
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, CliError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| config_err(format!("`{key}` must be a finite number, got `{value}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "model.alpha = 2.5\nmodel.N = 64  # small\n").unwrap();
        let cfg = RunConfig::load(Some(&path), &args(&["--alpha", "1.7"])).unwrap();
        assert_eq!(cfg.get("model.alpha"), "1.7");
        assert_eq!(cfg.get("model.N"), "64");
        assert_eq!(cfg.get("grid.r_max"), "32");
    }

    #[test]
    fn unknown_key_is_rejected() {
        let err = RunConfig::load(None, &args(&["--model.beta", "1"])).unwrap_err();
        assert!(matches!(err, CliError::Config(_)));
    }

    #[test]
    fn physics_checked_at_parse_time() {
        let err = RunConfig::load(None, &args(&["--model.alpha", "0.5"])).unwrap_err();
        assert!(matches!(err, CliError::Core(_)));
    }

    #[test]
    fn h_over_j_scales_with_j() {
        let cfg = RunConfig::load(None, &args(&["--J", "2", "--h-over-J", "50"])).unwrap();
        assert_eq!(cfg.f64("model.h").unwrap(), 100.0);
    }

    #[test]
    fn epsilon_forms() {
        let cfg = RunConfig::load(None, &args(&["--eps", "0.2:0.8"])).unwrap();
        assert_eq!(cfg.epsilons().unwrap().len(), 7);
        let cfg = RunConfig::load(None, &args(&["--eps=0.1,0.3"])).unwrap();
        assert_eq!(cfg.epsilons().unwrap(), vec![0.1, 0.3]);
    }
}
