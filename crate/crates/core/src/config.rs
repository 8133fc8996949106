//! Run-time tolerances and sweep parameters shared by every method.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected key=value, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value for {key}: {reason}")]
    BadValue { line: usize, key: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tol_root: f64,
    pub tol_eig: f64,
    pub tol_bisect: f64,
    pub theta_samples: usize,
    /// Decreasing step sizes for the `t -> 0+` difference-quotient limit.
    pub t_ladder: Vec<f64>,
    pub cross_check: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tol_root: 1e-13,
            tol_eig: 1e-12,
            tol_bisect: 1e-12,
            theta_samples: 720,
            t_ladder: default_t_ladder(),
            cross_check: true,
        }
    }
}

/// `1e-2 * 2^-k` for `k = 0..=6`.
pub fn default_t_ladder() -> Vec<f64> {
    (0..=6).map(|k| 1e-2 * 0.5f64.powi(k)).collect()
}

impl RunConfig {
    /// Applies `key=value` overrides, one per line; `#` starts a comment.
    pub fn apply_overrides(&mut self, text: &str) -> Result<(), ConfigError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Syntax { line, text: raw.to_string() });
            };
            let (key, value) = (key.trim(), value.trim());
            let bad = |reason: &str| ConfigError::BadValue { line, key: key.to_string(), reason: reason.to_string() };
            let positive = |v: &str| -> Result<f64, ConfigError> {
                match v.parse::<f64>() {
                    Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
                    _ => Err(bad("expected a positive number")),
                }
            };
            match key {
                "tol_root" => self.tol_root = positive(value)?,
                "tol_eig" => self.tol_eig = positive(value)?,
                "tol_bisect" => self.tol_bisect = positive(value)?,
                "theta_samples" => {
                    self.theta_samples = match value.parse::<usize>() {
                        Ok(n) if n >= 8 => n,
                        _ => return Err(bad("expected an integer >= 8")),
                    }
                }
                "t_ladder" => {
                    let ladder = value.split(',').map(|v| positive(v.trim())).collect::<Result<Vec<_>, _>>()?;
                    if ladder.len() < 2 || ladder.windows(2).any(|w| w[1] >= w[0]) {
                        return Err(bad("expected at least two strictly decreasing steps"));
                    }
                    self.t_ladder = ladder;
                }
                "cross_check" => {
                    self.cross_check = match value {
                        "true" | "1" | "yes" => true,
                        "false" | "0" | "no" => false,
                        _ => return Err(bad("expected true or false")),
                    }
                }
                _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
            }
        }
        Ok(())
    }

    pub fn from_overrides(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        cfg.apply_overrides(text)?;
        Ok(cfg)
    }
}
