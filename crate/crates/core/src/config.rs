//! Flat `key=value` configuration files for [`EngineConfig`].
//!
//! Blank lines and lines starting with `#` are ignored. Keys match the
//! engine field names; `categories` is a comma-separated list.

use crate::error::{Error, Result};
use crate::signal::{EngineConfig, Mode, Trend};

/// Every recognised key, in rendering order.
pub const KEYS: [&str; 11] = [
    "mode",
    "trend",
    "categories",
    "beta",
    "decel_threshold",
    "accel_threshold",
    "kappa",
    "curve_shift",
    "depth_cap_days",
    "quotes_per_day",
    "cost_per_position",
];

fn num(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>().map_err(|_| Error::Config(format!("{key}: '{v}' is not a number")))
}

/// Set one key on `cfg` (no validation of the combined result).
pub fn set_key(cfg: &mut EngineConfig, key: &str, value: &str) -> Result<()> {
    let v = value.trim();
    match key.trim() {
        "mode" => cfg.mode = Mode::parse(v)?,
        "trend" => cfg.trend = Trend::parse(v)?,
        "categories" => {
            cfg.categories = v
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse::<u8>().map_err(|_| Error::Config(format!("categories: '{s}' is not an integer"))))
                .collect::<Result<_>>()?
        }
        "beta" => cfg.beta = num(key, v)?,
        "decel_threshold" => cfg.decel_threshold = num(key, v)?,
        "accel_threshold" => cfg.accel_threshold = num(key, v)?,
        "kappa" => cfg.kappa = num(key, v)?,
        "curve_shift" => cfg.curve_shift = num(key, v)?,
        "depth_cap_days" => cfg.depth_cap_days = num(key, v)?,
        "quotes_per_day" => cfg.quotes_per_day = num(key, v)?,
        "cost_per_position" => cfg.cost_per_position = num(key, v)?,
        other => return Err(Error::Config(format!("unknown key '{other}'"))),
    }
    Ok(())
}

/// Parse a config file on top of `base`; the result is validated.
pub fn parse_onto(base: EngineConfig, text: &str) -> Result<EngineConfig> {
    let mut cfg = base;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: i + 1, msg: format!("expected key=value, got '{line}'") })?;
        set_key(&mut cfg, k, v).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parse a config file over the defaults.
pub fn parse(text: &str) -> Result<EngineConfig> {
    parse_onto(EngineConfig::default(), text)
}

/// Render in the same format [`parse`] accepts; round-trips exactly.
pub fn render(cfg: &EngineConfig) -> String {
    let cats: Vec<String> = cfg.categories.iter().map(|c| c.to_string()).collect();
    let mut out = String::new();
    for key in KEYS {
        let v = match key {
            "mode" => cfg.mode.name().to_string(),
            "trend" => cfg.trend.name().to_string(),
            "categories" => cats.join(","),
            "beta" => cfg.beta.to_string(),
            "decel_threshold" => cfg.decel_threshold.to_string(),
            "accel_threshold" => cfg.accel_threshold.to_string(),
            "kappa" => cfg.kappa.to_string(),
            "curve_shift" => cfg.curve_shift.to_string(),
            "depth_cap_days" => cfg.depth_cap_days.to_string(),
            "quotes_per_day" => cfg.quotes_per_day.to_string(),
            _ => cfg.cost_per_position.to_string(),
        };
        out.push_str(&format!("{key}={v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let cfg = EngineConfig { categories: vec![2, 5], beta: 1.37, mode: Mode::ShortOnly, ..Default::default() };
        assert_eq!(parse(&render(&cfg)).unwrap(), cfg);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse("# c\nbeta=1\nfoo=2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(parse("beta=0.5").is_err());
        assert!(parse("categories=").is_err());
    }
}
