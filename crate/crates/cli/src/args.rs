use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Largest number of rows a `scan` may produce.
pub const MAX_SCAN_ROWS: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "chancut",
    version,
    about = "Bell test for channel-cut teleportation"
)]
pub struct Cli {
    /// Output format; `scan` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The eight joint probabilities P(c, i).
    Probs(Angles),
    /// Vector Bell inequality: quantum value against the LHV bound.
    BellTest {
        #[arg(long, default_value_t = 1.0, value_parser = parse_visibility)]
        visibility: f64,
    },
    /// Correlation vectors over a grid of settings.
    Scan {
        #[command(flatten)]
        angles: Angles,
        /// `<axis>=<start>:<stop>:<step>` in degrees, stop inclusive; axis is
        /// one of beta, phi, beta_prime, phi_prime.
        #[arg(long = "grid")]
        grids: Vec<GridSpec>,
    },
    /// Entanglement swapping with CHSH on each post-selected pair.
    Swap,
    /// Visibility above which the Bell inequality is violated.
    NoiseThreshold,
    /// Full teleportation with corrections.
    TeleportFidelity {
        #[arg(long, default_value_t = 45.0, value_parser = parse_finite, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_negative_numbers = true)]
        phi: f64,
    },
}

/// Preparation and analyzer angles in degrees.
#[derive(Debug, Clone, Copy, Args)]
pub struct Angles {
    #[arg(long, default_value_t = 45.0, value_parser = parse_finite, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_negative_numbers = true)]
    pub phi: f64,
    #[arg(long, default_value_t = 45.0, value_parser = parse_finite, allow_negative_numbers = true)]
    pub beta_prime: f64,
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_negative_numbers = true)]
    pub phi_prime: f64,
}

fn parse_finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not a finite number"))
    }
}

fn parse_visibility(s: &str) -> Result<f64, String> {
    let v = parse_finite(s)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("visibility {v} is outside [0, 1]"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axis {
    Beta,
    Phi,
    BetaPrime,
    PhiPrime,
}

impl Axis {
    pub const ALL: [Axis; 4] = [Axis::Beta, Axis::Phi, Axis::BetaPrime, Axis::PhiPrime];

    pub fn name(self) -> &'static str {
        match self {
            Axis::Beta => "beta",
            Axis::Phi => "phi",
            Axis::BetaPrime => "beta_prime",
            Axis::PhiPrime => "phi_prime",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridSpec {
    /// Number of points, or `None` if it does not fit in `usize`.
    pub fn count(&self) -> Option<usize> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() + 1.0;
        (n.is_finite() && n < usize::MAX as f64).then_some(n as usize)
    }

    pub fn value(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (axis, range) = s
            .split_once('=')
            .ok_or_else(|| format!("expected <axis>=<start>:<stop>:<step>, got '{s}'"))?;
        let axis = match axis.trim().replace('-', "_").as_str() {
            "beta" => Axis::Beta,
            "phi" => Axis::Phi,
            "beta_prime" => Axis::BetaPrime,
            "phi_prime" => Axis::PhiPrime,
            other => return Err(format!("unknown axis '{other}'")),
        };
        let parts = range
            .split(':')
            .map(parse_finite)
            .collect::<Result<Vec<_>, _>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(format!("expected start:stop:step, got '{range}'"));
        };
        if step <= 0.0 {
            return Err(format!("grid step must be positive, got {step}"));
        }
        if stop < start {
            return Err(format!("grid stop {stop} is below start {start}"));
        }
        Ok(GridSpec {
            axis,
            start,
            stop,
            step,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: GridSpec = "phi_prime=-45:45:90".parse().unwrap();
        assert_eq!(g.axis, Axis::PhiPrime);
        assert_eq!(g.count(), Some(2));
        assert_eq!(g.value(1), 45.0);
        let g: GridSpec = "beta-prime=0:90:0.5".parse().unwrap();
        assert_eq!(g.count(), Some(181));
        assert_eq!("phi=0:0:1".parse::<GridSpec>().unwrap().count(), Some(1));
        assert!("phi=0:1:0".parse::<GridSpec>().is_err());
        assert!("phi=1:0:1".parse::<GridSpec>().is_err());
        assert!("gamma=0:1:1".parse::<GridSpec>().is_err());
        assert!("phi=0:1".parse::<GridSpec>().is_err());
        assert!("phi=0:x:1".parse::<GridSpec>().is_err());
    }

    #[test]
    fn rejects_non_finite_angles() {
        assert!(parse_finite("inf").is_err());
        assert!(parse_finite("NaN").is_err());
        assert_eq!(parse_finite("-45"), Ok(-45.0));
        assert!(parse_visibility("1.2").is_err());
    }
}
