//! Run settings: command-line flags merged over an optional config file.
//!
//! The config file holds `key = value` lines; `#` starts a comment. Keys are
//! the long flag names, with `-` or `_`. Flags win per quantity: giving any of
//! `--theta`, `--theta-deg`, `--scan-theta`, `--scan-theta-deg` discards every
//! angle setting from the file, and likewise for the other scanned inputs.

use clap::{Args, ValueEnum};
use moller_core::FormulaId;
use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::scan::ScanSpec;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

impl Format {
    fn as_str(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Inputs shared by every subcommand. All optional so the config file can
/// supply them.
#[derive(Debug, Clone, Default, Args)]
pub struct Settings {
    /// Config file of `key = value` lines; flags override it.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Prefix CSV output with a `# ...` line echoing the resolved settings.
    #[arg(long)]
    pub echo_config: bool,

    /// Formula id: canonical, high_energy, leading_mP, cm, cm_small_angle, nonrel.
    #[arg(long)]
    pub formula: Option<FormulaId>,

    /// CM beam energy per electron, MeV.
    #[arg(long)]
    pub energy: Option<f64>,
    /// Scan of the beam energy, `min:max:steps[:log]`.
    #[arg(long, value_name = "SCAN")]
    pub scan_energy: Option<ScanSpec>,
    /// CM momentum magnitude, MeV (nonrelativistic formula and figure data).
    #[arg(long)]
    pub p: Option<f64>,

    /// Scattering angle, rad.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Scattering angle, degrees.
    #[arg(long)]
    pub theta_deg: Option<f64>,
    /// Scan of the angle in rad.
    #[arg(long, value_name = "SCAN")]
    pub scan_theta: Option<ScanSpec>,
    /// Scan of the angle in degrees.
    #[arg(long, value_name = "SCAN")]
    pub scan_theta_deg: Option<ScanSpec>,

    /// Podolsky mass, MeV (`inf` for the Maxwell limit).
    #[arg(long)]
    pub mp: Option<f64>,
    /// Scan of the Podolsky mass.
    #[arg(long, value_name = "SCAN")]
    pub scan_mp: Option<ScanSpec>,

    /// Coupling.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Scan of the coupling.
    #[arg(long, value_name = "SCAN")]
    pub scan_alpha: Option<ScanSpec>,

    /// Electron mass, MeV.
    #[arg(long)]
    pub me: Option<f64>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Usage(format!("config line {line}: `{key}`: {e}")))
}

impl Settings {
    /// Parses config-file text.
    pub fn from_config_text(text: &str) -> Result<Settings, CliError> {
        let mut s = Settings::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {line_no}: expected `key = value`")))?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            let k = key.as_str();
            match k {
                "out" => s.out = Some(PathBuf::from(value)),
                "format" => s.format = Some(parse_value(k, value, line_no)?),
                "echo_config" => s.echo_config = parse_value(k, value, line_no)?,
                "formula" => s.formula = Some(parse_value(k, value, line_no)?),
                "energy" => s.energy = Some(parse_value(k, value, line_no)?),
                "scan_energy" => s.scan_energy = Some(parse_value(k, value, line_no)?),
                "p" => s.p = Some(parse_value(k, value, line_no)?),
                "theta" => s.theta = Some(parse_value(k, value, line_no)?),
                "theta_deg" => s.theta_deg = Some(parse_value(k, value, line_no)?),
                "scan_theta" => s.scan_theta = Some(parse_value(k, value, line_no)?),
                "scan_theta_deg" => s.scan_theta_deg = Some(parse_value(k, value, line_no)?),
                "mp" => s.mp = Some(parse_value(k, value, line_no)?),
                "scan_mp" => s.scan_mp = Some(parse_value(k, value, line_no)?),
                "alpha" => s.alpha = Some(parse_value(k, value, line_no)?),
                "scan_alpha" => s.scan_alpha = Some(parse_value(k, value, line_no)?),
                "me" => s.me = Some(parse_value(k, value, line_no)?),
                _ => return Err(CliError::Usage(format!("config line {line_no}: unknown key `{key}`"))),
            }
        }
        Ok(s)
    }

    /// Reads `--config` if given and merges these flags over it.
    pub fn resolve(self) -> Result<Settings, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let file = Settings::from_config_text(&text)?;
        Ok(self.over(file))
    }

    /// `self` (flags) over `base` (file).
    pub fn over(self, base: Settings) -> Settings {
        let angle = self.theta.is_some()
            || self.theta_deg.is_some()
            || self.scan_theta.is_some()
            || self.scan_theta_deg.is_some();
        let energy = self.energy.is_some() || self.scan_energy.is_some() || self.p.is_some();
        let mp = self.mp.is_some() || self.scan_mp.is_some();
        let alpha = self.alpha.is_some() || self.scan_alpha.is_some();
        let pick = |flag_group: bool, f: Option<f64>, b: Option<f64>| if flag_group { f } else { b };
        let pick_scan = |flag_group: bool, f: Option<ScanSpec>, b: Option<ScanSpec>| if flag_group { f } else { b };
        Settings {
            config: self.config,
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            echo_config: self.echo_config || base.echo_config,
            formula: self.formula.or(base.formula),
            energy: pick(energy, self.energy, base.energy),
            scan_energy: pick_scan(energy, self.scan_energy, base.scan_energy),
            p: pick(energy, self.p, base.p),
            theta: pick(angle, self.theta, base.theta),
            theta_deg: pick(angle, self.theta_deg, base.theta_deg),
            scan_theta: pick_scan(angle, self.scan_theta, base.scan_theta),
            scan_theta_deg: pick_scan(angle, self.scan_theta_deg, base.scan_theta_deg),
            mp: pick(mp, self.mp, base.mp),
            scan_mp: pick_scan(mp, self.scan_mp, base.scan_mp),
            alpha: pick(alpha, self.alpha, base.alpha),
            scan_alpha: pick_scan(alpha, self.scan_alpha, base.scan_alpha),
            me: self.me.or(base.me),
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }

    /// Resolved settings as ordered `key=value` pairs, for the echo line.
    pub fn echo_pairs(&self) -> BTreeMap<&'static str, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &'static str, v: Option<String>| {
            if let Some(v) = v {
                m.insert(k, v);
            }
        };
        put("format", Some(self.format().as_str().to_string()));
        put("formula", self.formula.map(|f| f.to_string()));
        put("energy", self.energy.map(|v| v.to_string()));
        put("scan_energy", self.scan_energy.map(|v| v.to_string()));
        put("p", self.p.map(|v| v.to_string()));
        put("theta", self.theta.map(|v| v.to_string()));
        put("theta_deg", self.theta_deg.map(|v| v.to_string()));
        put("scan_theta", self.scan_theta.map(|v| v.to_string()));
        put("scan_theta_deg", self.scan_theta_deg.map(|v| v.to_string()));
        put("mp", self.mp.map(|v| v.to_string()));
        put("scan_mp", self.scan_mp.map(|v| v.to_string()));
        put("alpha", self.alpha.map(|v| v.to_string()));
        put("scan_alpha", self.scan_alpha.map(|v| v.to_string()));
        put("me", self.me.map(|v| v.to_string()));
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text() {
        let s = Settings::from_config_text(
            "# comment\nformula = cm\n energy=1.5 # trailing\n\nscan-theta = 0.1:1:5\nformat = json\n",
        )
        .unwrap();
        assert_eq!(s.formula, Some(FormulaId::Cm));
        assert_eq!(s.energy, Some(1.5));
        assert_eq!(s.scan_theta.unwrap().steps, 5);
        assert_eq!(s.format, Some(Format::Json));
        assert!(Settings::from_config_text("bogus = 1").is_err());
        assert!(Settings::from_config_text("energy").is_err());
        assert!(Settings::from_config_text("energy = fast").is_err());
    }

    #[test]
    fn flags_override_per_quantity() {
        let file = Settings::from_config_text("theta = 0.5\nenergy = 2\nalpha = 0.1").unwrap();
        let flags = Settings { scan_theta: Some("0.1:1:3".parse().unwrap()), alpha: Some(0.2), ..Default::default() };
        let merged = flags.over(file);
        assert_eq!(merged.theta, None);
        assert!(merged.scan_theta.is_some());
        assert_eq!(merged.energy, Some(2.0));
        assert_eq!(merged.alpha, Some(0.2));
    }
}
