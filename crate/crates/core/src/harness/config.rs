//! Plain `key = value` run configuration.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// Sampling grid of the pointwise analyzers.
    pub nt: usize,
    pub ns: usize,
    /// Grid used for the Gauss-equation sweep.
    pub identity_grid: usize,
    /// Distance kept from chart edges that are not glued.
    pub margin: f64,
    /// Spectral grid for B (double cover) and the torus T.
    pub spectral_grid: usize,
    pub spectral_margin: f64,
    /// Nodes of 1-D sinh-Gordon samples.
    pub sg_nodes: usize,
    /// Step of the reduced sinh-Gordon integration.
    pub sg_step: f64,
    /// Multiplies every tolerance.
    pub tol_scale: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            nt: 64,
            ns: 64,
            identity_grid: 32,
            margin: 0.05,
            spectral_grid: 64,
            spectral_margin: 0.02,
            sg_nodes: 512,
            sg_step: 1e-3,
            tol_scale: 1.0,
        }
    }
}

impl Config {
    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Input(format!("config line {}: expected key = value", n + 1)))?;
            self.set(key.trim(), value.trim()).map_err(|e| {
                let msg = match e {
                    Error::Input(m) => m,
                    other => other.to_string(),
                };
                Error::Input(format!("config line {}: {msg}", n + 1))
            })?;
        }
        self.validate()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        let mut c = Self::default();
        c.apply(&text)?;
        Ok(c)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::Input(format!("bad value '{v}' for {key}")))
        }
        match key {
            "nt" => self.nt = num(key, value)?,
            "ns" => self.ns = num(key, value)?,
            "identity_grid" => self.identity_grid = num(key, value)?,
            "margin" => self.margin = num(key, value)?,
            "spectral_grid" => self.spectral_grid = num(key, value)?,
            "spectral_margin" => self.spectral_margin = num(key, value)?,
            "sg_nodes" => self.sg_nodes = num(key, value)?,
            "sg_step" => self.sg_step = num(key, value)?,
            "tol_scale" => self.tol_scale = num(key, value)?,
            _ => return Err(Error::Input(format!("unknown config key '{key}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Input(format!("invalid {what}")));
        if self.nt < 4 || self.ns < 4 || self.identity_grid < 4 {
            return bad("grid size (need at least 4 nodes per axis)");
        }
        if self.spectral_grid < 8 || self.spectral_grid % 2 != 0 {
            return bad("spectral_grid (need an even count of at least 8)");
        }
        if !(self.margin >= 0.0 && self.margin < 0.5) {
            return bad("margin");
        }
        if !(self.spectral_margin > 0.0 && self.spectral_margin < 0.25) {
            return bad("spectral_margin");
        }
        if self.sg_nodes < 5 || !(self.sg_step > 0.0) {
            return bad("sinh-Gordon sampling");
        }
        if !(self.tol_scale > 0.0 && self.tol_scale.is_finite()) {
            return bad("tol_scale");
        }
        Ok(())
    }
}
