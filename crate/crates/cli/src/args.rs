use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use euph_core::wavefunctions::Measure;
use euph_core::Space;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "euph",
    version,
    about = "Deformed hydrogen spectra, tables, figure data and oracle checks"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Output file format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Directory receiving the output files (created if missing).
    #[arg(long, default_value = ".", global = true)]
    pub output: PathBuf,
    /// Unit system for inputs and outputs.
    #[arg(long, value_enum, default_value_t = UnitsArg::Hartree, global = true)]
    pub units: UnitsArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitsArg {
    Hartree,
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Ds,
    Ads,
}

impl From<ModelArg> for Space {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Ds => Space::DeSitter,
            ModelArg::Ads => Space::AntiDeSitter,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Flat,
    Natural,
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Flat => Measure::Flat,
            MeasureArg::Natural => Measure::Natural,
        }
    }
}

/// `start:stop:count`, inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected start:stop:count, got '{s}'"));
        };
        let start: f64 = a.trim().parse().map_err(|_| format!("bad range start '{a}'"))?;
        let stop: f64 = b.trim().parse().map_err(|_| format!("bad range stop '{b}'"))?;
        let count: usize = n.trim().parse().map_err(|_| format!("bad range count '{n}'"))?;
        if !(start.is_finite() && stop.is_finite()) || stop < start {
            return Err(format!("range needs finite start <= stop, got '{s}'"));
        }
        if count == 0 || (count == 1 && start != stop) {
            return Err(format!("range count must be >= 2 (or 1 with start = stop), got '{s}'"));
        }
        Ok(Range { start, stop, count })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All E(n, l) for n <= n-max.
    Spectrum {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long, required_unless_present = "bohr", conflicts_with = "bohr")]
        lambda: Option<f64>,
        /// Undeformed (lambda = 0) Bohr levels.
        #[arg(long)]
        bohr: bool,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
    },
    /// Critical and inversion deformation tables.
    Tables {
        #[arg(long, default_value_t = 5)]
        n_max: u32,
    },
    /// Minimal momentum spread against position spread.
    Figure1 {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value = "0.5:20:200")]
        dx_range: Range,
    },
    /// s-level energies E(n, 0) against lambda for both models.
    Figure2 {
        #[arg(long, default_value = "0:0.1:200")]
        lambda_range: Range,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        levels: Vec<u32>,
    },
    /// Radial samples, node count and norm of one closed-form state.
    Wavefunction {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i32,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = MeasureArg::Flat)]
        measure: MeasureArg,
    },
    /// Closed forms against the finite-difference oracle.
    Verify {
        #[arg(long, value_delimiter = ',', default_value = "0.001,0.01")]
        lambdas: Vec<f64>,
        #[arg(long, default_value_t = 3)]
        n_max: u32,
    },
    /// Deformation bound from a relative spectroscopic precision.
    Bound {
        #[arg(long, default_value_t = 1e-15)]
        precision: f64,
    },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        let r: Range = "0:0.1:3".parse().unwrap();
        assert_eq!(r.points(), vec![0.0, 0.05, 0.1]);
        assert!("1:0:3".parse::<Range>().is_err());
        assert!("0:1".parse::<Range>().is_err());
        assert!("0:1:1".parse::<Range>().is_err());
        assert_eq!("2:2:1".parse::<Range>().unwrap().points(), vec![2.0]);
    }

    #[test]
    fn cli_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
