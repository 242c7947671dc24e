//! Command line flags and the key-value config file.
//!
//! A config file holds one `key = value` per line, where each key is the long
//! name of a flag (`seed = 7`, `alpha-max = 0.5`). Blank lines and lines
//! starting with `#` are ignored. Flags given on the command line override
//! the file.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "lightcone", version, about = "Finite lightcones, polarisation and isoperimetric checks")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub settings: Settings,
}

#[derive(Subcommand, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Perimeter of a profile.
    Perimeter,
    /// Volume of the domain of dependence of a cone.
    DodVolume,
    /// Volume of the symmetric difference of two domains of dependence.
    Symdiff,
    /// Polarise a profile about one mirror.
    Polarize,
    /// Reflection symmetrisation about one mirror.
    Symmetrize,
    /// Mirror in the plane of e0 and a spatial direction that halves the perimeter.
    EqualPlane,
    /// Repeated polarisation about random mirrors.
    Descent,
    /// Volume against perimeter on random profiles.
    VerifyIsoperimetric,
    /// Volume against Euclidean lateral area on random profiles.
    VerifyEuclid,
    /// Domain of dependence of a hyperboloid set.
    HypDod,
    /// Volume against perimeter for hyperboloid sets.
    VerifyHyperboloid,
    /// Area of spacelike graphs inside a cone.
    VerifyAchronal,
    /// Area of a hyperbolic-chart graph against the perimeter of its limit profile.
    VerifyInfinity,
    /// Area of spacelike graphs spanning the rim of a hyperboloid set.
    VerifyHypDisk,
    /// Grid refinement study of the unit cone volume.
    Convergence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    /// f = level.
    Const,
    /// f = level (1 + amplitude cos 2 theta).
    Cos2,
    /// Cap of height `level` about the boost of e0 by `alpha` along `angle`.
    Cap,
    /// Random harmonic series (needs a seed).
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Args, Clone, Debug, Default, Serialize)]
pub struct Settings {
    /// Spatial dimension (2 or 3).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Sphere directions (n = 3: minimum icosphere node count).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Radial quadrature nodes.
    #[arg(long, global = true)]
    pub radial: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub iters: Option<usize>,
    /// Number of random cases for batch checks.
    #[arg(long, global = true)]
    pub cases: Option<usize>,
    /// Tolerance of the asserted check (meaning depends on the command).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Key-value config file.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Profile file.
    #[arg(long, global = true)]
    pub profile: Option<PathBuf>,
    /// Second profile file (symdiff).
    #[arg(long, global = true)]
    pub other: Option<PathBuf>,
    /// Built-in profile when no file is given.
    #[arg(long, global = true, value_enum)]
    pub shape: Option<Shape>,
    /// Scale of the built-in profile, or cap height.
    #[arg(long, global = true)]
    pub level: Option<f64>,
    #[arg(long, global = true)]
    pub amplitude: Option<f64>,
    #[arg(long, global = true)]
    pub modes: Option<usize>,

    /// Rapidity of the mirror normal or of the cap boost.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Azimuth of the spatial direction of the mirror normal or boost.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub angle: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub sign: Option<Sign>,
    /// Largest rapidity of random mirrors.
    #[arg(long, global = true)]
    pub alpha_max: Option<f64>,

    /// Hyperboloid set file (ball list or grid).
    #[arg(long, global = true)]
    pub set: Option<PathBuf>,
    /// Radius of the geodesic ball about e0 used when no set file is given.
    #[arg(long, global = true)]
    pub delta: Option<f64>,

    /// Graph file: flat chart for verify-achronal and verify-hyp-disk,
    /// hyperbolic chart for verify-infinity.
    #[arg(long, global = true)]
    pub graph: Option<PathBuf>,
    /// Lattice cells per side for flat graphs.
    #[arg(long, global = true)]
    pub cells: Option<usize>,
    /// Half width of the flat lattice box.
    #[arg(long, global = true)]
    pub half_width: Option<f64>,
    /// Hyperbolic-chart family `c / (cosh s + k sinh s cos theta)`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k: Option<f64>,
    #[arg(long, global = true)]
    pub s_max: Option<f64>,
    #[arg(long, global = true)]
    pub shells: Option<usize>,
}

impl Settings {
    pub fn seed_for(&self, command: &str) -> Result<u64> {
        match self.seed {
            Some(s) => Ok(s),
            None => bail!("{command} draws random inputs and needs --seed"),
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }
}

/// Finds `--config` in the raw arguments.
fn config_path(args: &[String]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Turns config lines into `--key=value` arguments.
pub fn config_args(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut args = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{}:{}: expected `key = value`", path.display(), i + 1);
        };
        let (key, value) = (key.trim().replace('_', "-"), value.trim());
        if key.is_empty() || value.is_empty() || key == "config" {
            bail!("{}:{}: bad entry `{line}`", path.display(), i + 1);
        }
        args.push(format!("--{key}={value}"));
    }
    Ok(args)
}

/// Parses the command line with the config file entries placed in front, so
/// that later (command line) occurrences win.
pub fn parse(args: Vec<String>) -> Result<Cli> {
    let mut full = args.clone();
    if let Some(path) = config_path(&args[1..]) {
        let extra = config_args(&path)?;
        full.splice(1..1, extra);
    }
    Cli::try_parse_from(full).map_err(|e| {
        if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
            e.exit()
        }
        anyhow::anyhow!(e.render().to_string())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn flags_override_config() {
        let dir = std::env::temp_dir().join(format!("lightcone-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(&path, "# batch\nseed = 3\ncases=4\nalpha_max = 0.2\n").unwrap();
        let cli = parse(argv(&format!("lightcone verify-isoperimetric --config {} --seed 9", path.display()))).unwrap();
        assert_eq!(cli.command, Command::VerifyIsoperimetric);
        assert_eq!(cli.settings.seed, Some(9));
        assert_eq!(cli.settings.cases, Some(4));
        assert_eq!(cli.settings.alpha_max, Some(0.2));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn malformed_config_lines_are_reported() {
        let dir = std::env::temp_dir().join(format!("lightcone-badcfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.cfg");
        std::fs::write(&path, "seed = 1\njust words\n").unwrap();
        let err = config_args(&path).unwrap_err().to_string();
        assert!(err.ends_with(":2: expected `key = value`"), "{err}");
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn negative_values_parse() {
        let cli = parse(argv("lightcone polarize --alpha -0.4 --angle -1")).unwrap();
        assert_eq!(cli.settings.alpha, Some(-0.4));
    }
}
