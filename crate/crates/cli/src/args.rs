use std::path::PathBuf;

use clap::{Args, ValueEnum};

use permaspin::transfer::grid_points;
use permaspin::{avoiders, enumerate, Graph, PermaspinSet, Permutation, StatisticKind};

/// Either one inverse temperature or `lo:hi:steps` evenly spaced values.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaSpec {
    pub values: Vec<f64>,
}

impl BetaSpec {
    pub fn is_sweep(&self) -> bool {
        self.values.len() > 1
    }
}

fn parse_f64(s: &str, what: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| format!("invalid {what} '{s}'"))
}

/// `lo:hi` with `0 < lo <= hi`.
pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi] = parts[..] else {
        return Err(format!("expected lo:hi, got '{s}'"));
    };
    let (lo, hi) = (parse_f64(lo, "lower bound")?, parse_f64(hi, "upper bound")?);
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(format!("range must satisfy 0 < lo <= hi, got '{s}'"));
    }
    Ok((lo, hi))
}

pub fn parse_beta(s: &str) -> Result<BetaSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let values = match parts[..] {
        [x] => vec![parse_f64(x, "beta")?],
        [lo, hi, steps] => {
            let lo = parse_f64(lo, "beta lower bound")?;
            let hi = parse_f64(hi, "beta upper bound")?;
            let steps: usize = steps
                .trim()
                .parse()
                .map_err(|_| format!("invalid step count '{steps}'"))?;
            if !(lo < hi) || steps == 0 {
                return Err(format!("beta sweep needs lo < hi and steps >= 1, got '{s}'"));
            }
            grid_points(lo, hi, steps)
        }
        _ => return Err(format!("expected BETA or LO:HI:STEPS, got '{s}'")),
    };
    if let Some(b) = values.iter().find(|b| !(**b > 0.0 && b.is_finite())) {
        return Err(format!("beta must be positive and finite, got {b}"));
    }
    Ok(BetaSpec { values })
}

pub fn parse_stat(s: &str) -> Result<StatisticKind, String> {
    s.parse::<StatisticKind>().map_err(|e| e.to_string())
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Inverse temperature, or a sweep LO:HI:STEPS
    #[arg(long, value_parser = parse_beta, default_value = "1")]
    pub beta: BetaSpec,
    /// Coupling J
    #[arg(long = "J", default_value_t = 1.0, allow_negative_numbers = true)]
    pub j: f64,
    /// External field H
    #[arg(long = "H", default_value_t = 0.0, allow_negative_numbers = true)]
    pub h: f64,
}

#[derive(Args, Debug, Clone)]
pub struct SetArgs {
    /// Permutation length
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Comma-separated patterns to avoid, e.g. 123,321
    #[arg(long)]
    pub avoid: Option<String>,
    /// Disorder statistic (destat or inv)
    #[arg(long, value_parser = parse_stat, default_value = "destat")]
    pub stat: StatisticKind,
}

impl SetArgs {
    pub fn spin_set(&self) -> permaspin::Result<PermaspinSet> {
        match &self.avoid {
            None => enumerate(self.k),
            Some(list) => {
                let patterns = list
                    .split(',')
                    .map(|p| p.trim().parse::<Permutation>())
                    .collect::<permaspin::Result<Vec<_>>>()?;
                avoiders(self.k, &patterns)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Ring,
    Path,
    Complete,
    File(PathBuf),
}

pub fn parse_graph(s: &str) -> Result<GraphSpec, String> {
    match s {
        "ring" => Ok(GraphSpec::Ring),
        "path" => Ok(GraphSpec::Path),
        "complete" => Ok(GraphSpec::Complete),
        _ => match s.strip_prefix("file:") {
            Some(path) if !path.is_empty() => Ok(GraphSpec::File(PathBuf::from(path))),
            _ => Err(format!("expected ring, path, complete or file:PATH, got '{s}'")),
        },
    }
}

impl GraphSpec {
    pub fn build(&self, n: Option<usize>) -> Result<Graph, Box<dyn std::error::Error>> {
        const DEFAULT_N: usize = 8;
        Ok(match self {
            GraphSpec::Ring => Graph::ring(n.unwrap_or(DEFAULT_N))?,
            GraphSpec::Path => Graph::path(n.unwrap_or(DEFAULT_N))?,
            GraphSpec::Complete => Graph::complete(n.unwrap_or(DEFAULT_N))?,
            GraphSpec::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("reading {}: {e}", path.display()))?;
                Graph::from_edge_list(&text, n)?
            }
        })
    }

    pub fn label(&self) -> String {
        match self {
            GraphSpec::Ring => "ring".into(),
            GraphSpec::Path => "path".into(),
            GraphSpec::Complete => "complete".into(),
            GraphSpec::File(p) => format!("file:{}", p.display()),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_specs() {
        assert_eq!(parse_beta("2").unwrap().values, vec![2.0]);
        let s = parse_beta("1:2:3").unwrap();
        assert_eq!(s.values, vec![1.0, 1.5, 2.0]);
        assert!(s.is_sweep());
        assert!(parse_beta("2:1:3").is_err());
        assert!(parse_beta("1:2:0").is_err());
        assert!(parse_beta("0").is_err());
        assert!(parse_beta("1:2").is_err());
    }

    #[test]
    fn graph_specs() {
        assert_eq!(parse_graph("ring").unwrap(), GraphSpec::Ring);
        assert_eq!(
            parse_graph("file:g.txt").unwrap(),
            GraphSpec::File(PathBuf::from("g.txt"))
        );
        assert!(parse_graph("file:").is_err());
        assert!(parse_graph("torus").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0.05:2").unwrap(), (0.05, 2.0));
        assert!(parse_range("0:2").is_err());
    }
}
