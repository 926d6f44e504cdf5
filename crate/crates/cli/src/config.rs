use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dualmon::spectroscopy::{TransitionSource, WaveguideParams};
use dualmon::{GridSpec, Noise, Params, Point};

use crate::Failure;

/// Smallest accepted grid resolution and Fock truncation.
pub const MIN_RESOLUTION: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "dualmon", version, about = "Spectra, dephasing and transmission of the JJ + QPS dualmon circuit")]
pub struct Cli {
    /// TOML file with E_Q, E_J, E_C, E_L (units of your choice, ħ = 1).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Closed sampling grid as NK,NPHI.
    #[arg(long, global = true)]
    pub grid: Option<String>,

    /// Fock-basis truncation N.
    #[arg(long, global = true)]
    pub truncation: Option<usize>,

    /// Worker threads for the parallel sweeps.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Energy, gradient and dephasing rate of the elementary circuit.
    Elementary(ElementaryArgs),
    /// Numeric m = 0, 1 bands against the first-order formula.
    Bands,
    /// Waveguide transmission for the states (0, 0) and (0, π).
    Transmission(TransmissionArgs),
    /// First-order transition frequency over the Brillouin torus.
    TransitionMap,
    /// Oscillator ground state in the Zak basis.
    ZakWavefunction(ZakArgs),
    /// Ground level against external bias (n_x, φ_x).
    BiasScan(BiasArgs),
    /// Thermal up/down rates between the lowest Zak manifolds.
    ThermalRates(ThermalArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ElementaryArgs {
    /// Charge-noise amplitude ε_n.
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub eps_n: f64,
    /// Flux-noise amplitude ε_φ.
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub eps_phi: f64,
}

#[derive(Debug, Clone, Args)]
pub struct TransmissionArgs {
    /// Detuning samples per trace.
    #[arg(long, default_value_t = 601)]
    pub points: usize,
    /// Linewidth γ; defaults to 0.01 Ω⁽¹⁰⁾(0, π).
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Drive amplitude α; defaults to sqrt(0.1 E_J).
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Take Ω⁽¹⁰⁾ from the Fock engine instead of the first-order formula.
    #[arg(long)]
    pub numeric: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ZakArgs {
    /// Impedances z in units of π.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
    pub z_over_pi: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct BiasArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub k: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
    /// Allowed deviation from the shifted unbiased level, in units of ħΩ.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ThermalArgs {
    /// Dimensionless ohmic coupling ν.
    #[arg(long, default_value_t = 0.02)]
    pub nu: f64,
    /// Bath temperature k_B T.
    #[arg(long, default_value_t = 1.0)]
    pub kt: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub k: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
}

/// A validated run: everything a command needs, checked before any work.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub params: Params,
    pub grid: GridSpec,
    pub truncation: usize,
    pub noise: Option<Noise>,
    pub waveguide: Option<WaveguideParams<f64>>,
    pub out: PathBuf,
    pub format: Format,
    pub threads: Option<usize>,
}

fn config_err(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

pub fn parse_grid(text: &str) -> Result<GridSpec, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [nk, nphi] = parts.as_slice() else {
        return Err(config_err(format!("--grid expects NK,NPHI, got {text:?}")));
    };
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| config_err(format!("--grid entry {s:?} is not a positive integer")))
    };
    let (nk, nphi) = (parse(nk)?, parse(nphi)?);
    if nk < MIN_RESOLUTION || nphi < MIN_RESOLUTION {
        return Err(config_err(format!(
            "grid resolutions must be at least {MIN_RESOLUTION}, got {nk},{nphi}"
        )));
    }
    Ok(GridSpec::new(nk, nphi)?)
}

fn check_writable(dir: &PathBuf) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| config_err(format!("cannot create {}: {e}", dir.display())))?;
    let probe = dir.join(".dualmon-write-probe");
    fs::write(&probe, b"").map_err(|e| config_err(format!("{} is not writable: {e}", dir.display())))?;
    let _ = fs::remove_file(probe);
    Ok(())
}

fn point(k: f64, phi: f64) -> Result<Point, Failure> {
    Point::new(k, phi).map_err(|e| config_err(e.to_string()))
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, Failure> {
        let params = match &cli.config {
            Some(path) => Params::from_file(path)?,
            None => match cli.command {
                Command::Elementary(_) => Params::elementary(1.0, 1.0)?,
                _ => Params::reference_realistic(),
            },
        };
        let (default_grid, default_truncation) = match cli.command {
            Command::Elementary(_) | Command::TransitionMap | Command::ZakWavefunction(_) => (101, 40),
            Command::Bands => (41, 40),
            Command::BiasScan(_) => (21, 60),
            Command::Transmission(_) | Command::ThermalRates(_) => (MIN_RESOLUTION, 40),
        };
        let grid = match &cli.grid {
            Some(text) => parse_grid(text)?,
            None => GridSpec::new(default_grid, default_grid)?,
        };
        let truncation = cli.truncation.unwrap_or(default_truncation);
        if truncation < MIN_RESOLUTION {
            return Err(config_err(format!("--truncation must be at least {MIN_RESOLUTION}, got {truncation}")));
        }
        if cli.threads == Some(0) {
            return Err(config_err("--threads must be at least 1"));
        }

        let needs_oscillator = !matches!(cli.command, Command::Elementary(_) | Command::ZakWavefunction(_));
        if needs_oscillator {
            params.oscillator_gap()?;
            params.impedance()?;
        }

        let mut noise = None;
        let mut waveguide = None;
        match &cli.command {
            Command::Elementary(a) => noise = Some(Noise::new(a.eps_n, a.eps_phi)?),
            Command::Transmission(a) => {
                if a.points < 3 {
                    return Err(config_err(format!("--points must be at least 3, got {}", a.points)));
                }
                let mut wg = WaveguideParams::weak_drive_defaults(&params)?;
                if let Some(g) = a.gamma {
                    if !(g > 0.0 && g.is_finite()) {
                        return Err(config_err(format!("--gamma must be positive, got {g}")));
                    }
                    wg.gamma = g;
                }
                if let Some(alpha) = a.alpha {
                    if !(alpha > 0.0 && alpha.is_finite()) {
                        return Err(config_err(format!("--alpha must be positive, got {alpha}")));
                    }
                    wg.alpha = alpha;
                }
                if a.numeric {
                    wg.source = TransitionSource::Numeric(truncation);
                }
                waveguide = Some(wg);
            }
            Command::ZakWavefunction(a) => {
                if a.z_over_pi.is_empty() || a.z_over_pi.iter().any(|z| !(*z > 0.0 && z.is_finite())) {
                    return Err(config_err("--z-over-pi entries must be positive"));
                }
            }
            Command::BiasScan(a) => {
                point(a.k, a.phi)?;
                if !(a.tol >= 0.0) {
                    return Err(config_err(format!("--tol must be non-negative, got {}", a.tol)));
                }
            }
            Command::ThermalRates(a) => {
                point(a.k, a.phi)?;
                if !(a.nu >= 0.0 && a.nu.is_finite()) || !(a.kt >= 0.0 && a.kt.is_finite()) {
                    return Err(config_err("--nu and --kt must be non-negative"));
                }
            }
            Command::Bands | Command::TransitionMap => {}
        }

        check_writable(&cli.out)?;

        Ok(Self {
            command: cli.command,
            params,
            grid,
            truncation,
            noise,
            waveguide,
            out: cli.out,
            format: cli.format,
            threads: cli.threads,
        })
    }
}

/// z in units of π to z.
pub fn z_values(args: &ZakArgs) -> Vec<f64> {
    args.z_over_pi.iter().map(|z| z * PI).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("41,21").unwrap(), GridSpec::new(41, 21).unwrap());
        assert_eq!(parse_grid(" 8 , 8").unwrap(), GridSpec::new(8, 8).unwrap());
        for bad in ["7,8", "8", "8,8,8", "a,8", "-1,8"] {
            assert!(matches!(parse_grid(bad), Err(Failure::Config(_))), "{bad}");
        }
    }

    #[test]
    fn elementary_defaults_are_balanced() {
        let cli = Cli::parse_from(["dualmon", "--out", std::env::temp_dir().to_str().unwrap(), "elementary"]);
        let cfg = RunConfig::from_cli(cli).unwrap();
        assert_eq!(cfg.params.e_q(), cfg.params.e_j());
        assert_eq!(cfg.grid, GridSpec::new(101, 101).unwrap());
        assert!(cfg.noise.is_some());
    }

    #[test]
    fn oscillator_commands_reject_elementary_params() {
        let dir = std::env::temp_dir().join("dualmon-config-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("elem.toml");
        fs::write(&path, "E_Q = 1.0\nE_J = 1.0\nE_C = 0.0\nE_L = 0.0\n").unwrap();
        let cli = Cli::parse_from(["dualmon", "--config", path.to_str().unwrap(), "--out", dir.to_str().unwrap(), "bands"]);
        assert!(matches!(RunConfig::from_cli(cli), Err(Failure::Config(_))));
    }
}
