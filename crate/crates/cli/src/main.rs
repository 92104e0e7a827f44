//! Command-line front end: synthesize, simulate, verify, count and report on
//! OAM optical networks, with canonical netlist JSON as the interchange.
//!
//! Exit codes: 0 success / verification pass, 1 verification failure,
//! 2 usage or regime error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use oamsynth::analysis::{
    check_periodicity, count_netlist, grid_table, loss_model, parallelization_grid, ratio,
    LossScheme, RatioKind,
};
use oamsynth::blocks::{sorter, sorter_inv, swap_expanded, swap_ideal};
use oamsynth::elements::{apply_netlist, from_json, to_json, Netlist};
use oamsynth::modes::{required_window, Mode, ModeWindow, StateVector};
use oamsynth::numerics::{cyclic_shift_matrix, fourier_matrix, haar_unitary, CMatrix};
use oamsynth::synth::{GateSpec, SwapMode};

#[derive(Parser)]
#[command(
    name = "oamsynth",
    about = "Synthesize, simulate and verify linear-optical networks on the OAM of single photons",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a gate or block into a netlist file.
    Synth(SynthArgs),
    /// Apply a netlist to a basis state and print the output state.
    Sim(SimArgs),
    /// Check a netlist against a target gate (and optionally its OAM
    /// subspace periodicity).
    Verify(VerifyArgs),
    /// Tally the elements of a netlist.
    Count(CountArgs),
    /// Closed-form element counts, comparison grids, ratios and the loss
    /// model.
    Formulas(FormulasArgs),
    /// Per-subspace periodicity distances of a netlist.
    Periodicity(PeriodicityArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GateKind {
    /// Arbitrary unitary on OAM (needs a matrix source).
    Universal,
    /// Pauli X power.
    Xk,
    /// Pauli Z power.
    Z,
    /// Controlled-Z stack.
    Cz,
    /// Controlled unitary, OAM controls the paths.
    Cu,
    /// Controlled unitary, paths control the OAM.
    Pathcu,
    /// Apply one unitary to the OAM content of every path.
    Parallel,
    /// OAM sorter block.
    Sorter,
    /// Inverse OAM sorter block.
    SorterInv,
    /// Swap block (OAM <-> path).
    Swap,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SwapModeArg {
    Ideal,
    Expanded,
}

impl From<SwapModeArg> for SwapMode {
    fn from(v: SwapModeArg) -> Self {
        match v {
            SwapModeArg::Ideal => SwapMode::Ideal,
            SwapModeArg::Expanded => SwapMode::Expanded,
        }
    }
}

/// Flags that pin down a gate; shared between `synth` and `verify --target`.
#[derive(Args, Clone)]
struct GateFlags {
    /// OAM dimension d.
    #[arg(long)]
    dim: Option<usize>,
    /// Power k for xk / z gates.
    #[arg(long)]
    power: Option<usize>,
    /// Path count n.
    #[arg(long)]
    paths: Option<usize>,
    /// OAM dimension for controlled gates (alias of --dim).
    #[arg(long = "oam-dim")]
    oam_dim: Option<usize>,
    /// Control encoded on OAM multiples of this spacing (cu only).
    #[arg(long, default_value_t = 1)]
    spacing: i64,
    /// Swap realisation for pathcu / parallel / swap.
    #[arg(long, value_enum, default_value = "ideal")]
    swap: SwapModeArg,
    /// Unitary from a JSON file: rows of [re, im] pairs.
    #[arg(long)]
    unitary: Option<PathBuf>,
    /// Haar-random unitary (seeded; deterministic).
    #[arg(long)]
    random: bool,
    /// Seed for --random.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Discrete Fourier transform matrix.
    #[arg(long)]
    fourier: bool,
    /// Identity matrix.
    #[arg(long)]
    identity: bool,
    /// Cyclic shift matrix by --power.
    #[arg(long)]
    shift: bool,
}

impl GateFlags {
    fn matrix(&self, dim: usize) -> Result<CMatrix, String> {
        let sources =
            [self.unitary.is_some(), self.random, self.fourier, self.identity, self.shift]
                .iter()
                .filter(|&&b| b)
                .count();
        if sources > 1 {
            return Err("give at most one of --unitary, --random, --fourier, --identity, --shift".into());
        }
        if let Some(path) = &self.unitary {
            return load_matrix(path, dim);
        }
        if self.random {
            return Ok(haar_unitary(dim, self.seed));
        }
        if self.fourier {
            return Ok(fourier_matrix(dim));
        }
        if self.shift {
            return Ok(cyclic_shift_matrix(dim, self.power.unwrap_or(1)));
        }
        if self.identity {
            return Ok(CMatrix::identity(dim));
        }
        Err("this gate needs a matrix source: --unitary FILE, --random [--seed S], --fourier, --identity or --shift".into())
    }

    fn dim(&self) -> Result<usize, String> {
        self.dim
            .or(self.oam_dim)
            .ok_or_else(|| "missing --dim".into())
    }

    fn gate_spec(&self, kind: GateKind) -> Result<GateSpec, String> {
        match kind {
            GateKind::Universal => {
                let d = self.dim()?;
                Ok(GateSpec::Universal { u: self.matrix(d)? })
            }
            GateKind::Xk => Ok(GateSpec::Xk {
                d: self.dim()?,
                k: self.power.ok_or("missing --power")?,
            }),
            GateKind::Z => Ok(GateSpec::Z {
                d: self.dim()?,
                k: self.power.ok_or("missing --power")?,
            }),
            GateKind::Cz => Ok(GateSpec::Cz {
                n: self.paths.ok_or("missing --paths")?,
                d: self.oam_dim.or(self.dim).ok_or("missing --oam-dim")?,
            }),
            GateKind::Cu => {
                let n = self.paths.ok_or("missing --paths")?;
                Ok(GateSpec::ControlledU {
                    u: self.matrix(n)?,
                    d: self.oam_dim.or(self.dim).ok_or("missing --oam-dim")?,
                    spacing: self.spacing,
                })
            }
            GateKind::Pathcu => {
                let d = self.dim()?;
                Ok(GateSpec::PathControlled {
                    u: self.matrix(d)?,
                    n: self.paths.ok_or("missing --paths")?,
                    swap: self.swap.into(),
                })
            }
            GateKind::Parallel => {
                let d = self.dim()?;
                Ok(GateSpec::Parallelized {
                    u: self.matrix(d)?,
                    n: self.paths.ok_or("missing --paths")?,
                    swap: self.swap.into(),
                })
            }
            GateKind::Sorter | GateKind::SorterInv | GateKind::Swap => {
                Err("sorter and swap blocks are synthesis-only; pick a gate target".into())
            }
        }
    }
}

#[derive(Args)]
struct SynthArgs {
    /// What to synthesize.
    #[arg(value_enum)]
    gate: GateKind,
    #[command(flatten)]
    flags: GateFlags,
    /// Write the netlist JSON here (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimArgs {
    /// Netlist JSON file.
    #[arg(long)]
    netlist: PathBuf,
    /// Input basis mode as "oam:path".
    #[arg(long)]
    input: String,
    /// Emit the output state as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Netlist JSON file.
    #[arg(long)]
    netlist: PathBuf,
    /// Target gate kind.
    #[arg(long, value_enum)]
    target: GateKind,
    #[command(flatten)]
    flags: GateFlags,
    /// Phase-aligned distance tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Also check OAM subspace periodicity over "LO:HI".
    #[arg(long, allow_hyphen_values = true)]
    subspaces: Option<String>,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CountArgs {
    /// Netlist JSON file.
    #[arg(long)]
    netlist: PathBuf,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FormulasArgs {
    /// Naive vs parallelized beam-splitter grid (d up to --paths, k to d-1).
    #[arg(long)]
    fig6: bool,
    /// Loss model table for --dim at --transmittance.
    #[arg(long)]
    loss: bool,
    /// Scaling ratio: reck, perm, x, xk, xk-half.
    #[arg(long)]
    ratio: Option<String>,
    /// Path count n.
    #[arg(long, default_value_t = 16)]
    paths: u64,
    /// OAM dimension d.
    #[arg(long)]
    dim: Option<u64>,
    /// Power k.
    #[arg(long)]
    power: Option<u64>,
    /// Mean element transmittance for --loss.
    #[arg(long = "transmittance", visible_alias = "T", default_value_t = 0.9)]
    transmittance: f64,
    /// Emit JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PeriodicityArgs {
    /// Netlist JSON file.
    #[arg(long)]
    netlist: PathBuf,
    /// Subspace dimension d.
    #[arg(long)]
    dim: usize,
    /// Subspace index range "LO:HI".
    #[arg(long, default_value = "-2:2", allow_hyphen_values = true)]
    subspaces: String,
    /// Path carrying the computational modes.
    #[arg(long, default_value_t = 0)]
    path: usize,
    /// OAM spacing of the computational basis.
    #[arg(long, default_value_t = 1)]
    spacing: i64,
    /// Distance tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

fn load_matrix(path: &PathBuf, dim: usize) -> Result<CMatrix, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let rows: Vec<Vec<[f64; 2]>> =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(format!(
            "{}: expected a {dim}x{dim} matrix of [re, im] pairs",
            path.display()
        ));
    }
    Ok(CMatrix::from_fn(dim, dim, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

fn parse_mode(text: &str) -> Result<Mode, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        return Err(format!("bad mode `{text}`: expected \"oam:path\""));
    }
    let oam: i64 = parts[0]
        .parse()
        .map_err(|_| format!("bad OAM value `{}`", parts[0]))?;
    let path: usize = parts[1]
        .parse()
        .map_err(|_| format!("bad path index `{}`", parts[1]))?;
    Ok(Mode::new(oam, path))
}

fn parse_range(text: &str) -> Result<(i64, i64), String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        return Err(format!("bad range `{text}`: expected \"LO:HI\""));
    }
    let lo: i64 = parts[0].parse().map_err(|_| format!("bad bound `{}`", parts[0]))?;
    let hi: i64 = parts[1].parse().map_err(|_| format!("bad bound `{}`", parts[1]))?;
    if lo > hi {
        return Err(format!("empty range `{text}`"));
    }
    Ok((lo, hi))
}

fn read_netlist(path: &PathBuf) -> Result<Netlist, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    from_json(&text).map_err(|e| e.to_string())
}

enum Outcome {
    Ok,
    VerificationFailed,
}

fn run() -> Result<Outcome, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Synth(args) => synth(args).map(|_| Outcome::Ok),
        Command::Sim(args) => sim(args).map(|_| Outcome::Ok),
        Command::Verify(args) => verify(args),
        Command::Count(args) => {
            let netlist = read_netlist(&args.netlist)?;
            let report = count_netlist(&netlist);
            if args.json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.to_table());
            }
            Ok(Outcome::Ok)
        }
        Command::Formulas(args) => formulas(args).map(|_| Outcome::Ok),
        Command::Periodicity(args) => periodicity(args),
    }
}

fn synth(args: SynthArgs) -> Result<(), String> {
    let netlist = match args.gate {
        GateKind::Sorter => sorter(args.flags.dim()?).map_err(|e| e.to_string())?,
        GateKind::SorterInv => sorter_inv(args.flags.dim()?).map_err(|e| e.to_string())?,
        GateKind::Swap => {
            let n = args.flags.paths.ok_or("missing --paths")?;
            let d = args.flags.dim()?;
            match args.flags.swap {
                SwapModeArg::Ideal => swap_ideal(n, d).map_err(|e| e.to_string())?,
                SwapModeArg::Expanded => swap_expanded(n, d).map_err(|e| e.to_string())?,
            }
        }
        kind => {
            let spec = args.flags.gate_spec(kind)?;
            spec.synthesize().map_err(|e| e.to_string())?
        }
    };
    let doc = to_json(&netlist);
    match &args.out {
        Some(path) => fs::write(path, &doc).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{doc}"),
    }
    eprintln!("synthesized `{}` ({} elements)", netlist.name, netlist.elements.len());
    eprint!("{}", count_netlist(&netlist).to_table());
    Ok(())
}

fn sim(args: SimArgs) -> Result<(), String> {
    let netlist = read_netlist(&args.netlist)?;
    let input = parse_mode(&args.input)?;
    let base = ModeWindow {
        oam_lo: input.oam.min(netlist.window_hint.oam_lo),
        oam_hi: input.oam.max(netlist.window_hint.oam_hi),
        n_paths: netlist.window_hint.n_paths.max(input.path + 1),
        with_pol: netlist.window_hint.with_pol,
    };
    let window = required_window(&netlist, &base);
    let state = StateVector::basis_state(window, input).map_err(|e| e.to_string())?;
    let out = apply_netlist(&netlist, &state).map_err(|e| e.to_string())?;

    if args.json {
        let entries: Vec<serde_json::Value> = out
            .iter()
            .map(|(mode, amp)| {
                serde_json::json!({
                    "oam": mode.oam,
                    "path": mode.path,
                    "re": amp.re,
                    "im": amp.im,
                })
            })
            .collect();
        let mut text =
            serde_json::to_string_pretty(&serde_json::Value::Array(entries)).unwrap();
        text.push('\n');
        print!("{text}");
    } else {
        for (mode, amp) in out.iter() {
            println!("{:+.12} {:+.12}i   oam {:>4}  path {:>3}", amp.re, amp.im, mode.oam, mode.path);
        }
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<Outcome, String> {
    let netlist = read_netlist(&args.netlist)?;
    let spec = args.flags.gate_spec(args.target)?;
    let distance =
        oamsynth::synth::verify_against(&netlist, &spec).map_err(|e| e.to_string())?;
    let mut pass = distance <= args.tol;

    let mut subspace_distances: Vec<(i64, f64)> = Vec::new();
    if let Some(range) = &args.subspaces {
        let (lo, hi) = parse_range(range)?;
        let d = match &spec {
            GateSpec::Universal { u } => u.rows(),
            GateSpec::Xk { d, .. } | GateSpec::Z { d, .. } => *d,
            _ => return Err("subspace checks apply to OAM gates (universal, xk, z)".into()),
        };
        let report =
            check_periodicity(&netlist, d, lo, hi, 0, 1).map_err(|e| e.to_string())?;
        pass &= report.max_distance <= args.tol;
        subspace_distances = report.subspaces;
    }

    let counts = count_netlist(&netlist);
    if args.json {
        let value = serde_json::json!({
            "target": spec.describe(),
            "distance": distance,
            "tol": args.tol,
            "pass": pass,
            "subspace_distances": subspace_distances
                .iter()
                .map(|(a, d)| serde_json::json!({"subspace": a, "distance": d}))
                .collect::<Vec<_>>(),
            "counts": serde_json::to_value(&counts).unwrap(),
        });
        let mut text = serde_json::to_string_pretty(&value).unwrap();
        text.push('\n');
        print!("{text}");
    } else {
        println!("target    {}", spec.describe());
        println!("distance  {distance:.3e} (tolerance {:.1e})", args.tol);
        for (a, dist) in &subspace_distances {
            println!("subspace {a:+}: distance {dist:.3e}");
        }
        println!("result    {}", if pass { "PASS" } else { "FAIL" });
    }
    Ok(if pass { Outcome::Ok } else { Outcome::VerificationFailed })
}

fn formulas(args: FormulasArgs) -> Result<(), String> {
    if args.fig6 {
        let cells = parallelization_grid(args.paths).map_err(|e| e.to_string())?;
        if args.json {
            let mut text = serde_json::to_string_pretty(&serde_json::to_value(&cells).unwrap())
                .unwrap();
            text.push('\n');
            print!("{text}");
        } else {
            println!("naive vs parallelized beam splitters, n = {}", args.paths);
            print!("{}", grid_table(&cells));
        }
        return Ok(());
    }
    if args.loss {
        let d = args.dim.ok_or("missing --dim")?;
        let t = args.transmittance;
        let reports: Vec<_> = [
            LossScheme::Universal,
            LossScheme::NaiveParallel,
            LossScheme::Parallelized,
        ]
        .into_iter()
        .map(|scheme| loss_model(d, d, t, scheme).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
        if args.json {
            let mut text = serde_json::to_string_pretty(&serde_json::to_value(&reports).unwrap())
                .unwrap();
            text.push('\n');
            print!("{text}");
        } else {
            println!("loss model at T = {t}, d = {d}");
            for r in &reports {
                println!(
                    "{:<15} depth exponent {:>6}   all-photon transmittance {:.6e}",
                    format!("{:?}", r.scheme),
                    r.exponent,
                    r.all_photon_transmittance
                );
            }
            let penalty = reports[2].per_photon_penalty_factor;
            println!("per-photon penalty of the parallelized scheme: {penalty:.8}");
        }
        return Ok(());
    }
    if let Some(kind) = &args.ratio {
        let kind = match kind.as_str() {
            "reck" => RatioKind::Reck,
            "perm" => RatioKind::Perm,
            "x" => RatioKind::X,
            "xk" => RatioKind::Xk,
            "xk-half" => RatioKind::XkHalf,
            other => return Err(format!("unknown ratio kind `{other}`")),
        };
        let d = args.dim.ok_or("missing --dim")?;
        let r = ratio(kind, args.paths, d, args.power).map_err(|e| e.to_string())?;
        if args.json {
            let mut text =
                serde_json::to_string_pretty(&serde_json::to_value(r).unwrap()).unwrap();
            text.push('\n');
            print!("{text}");
        } else {
            println!("exact      {:.6e}", r.exact);
            println!("asymptotic {:.6e}", r.asymptotic);
        }
        return Ok(());
    }
    Err("pick one of --fig6, --loss, --ratio".into())
}

fn periodicity(args: PeriodicityArgs) -> Result<Outcome, String> {
    let netlist = read_netlist(&args.netlist)?;
    let (lo, hi) = parse_range(&args.subspaces)?;
    let report = check_periodicity(&netlist, args.dim, lo, hi, args.path, args.spacing)
        .map_err(|e| e.to_string())?;
    let pass = report.max_distance <= args.tol;
    if args.json {
        print!("{}", report.to_json());
    } else {
        for (a, dist) in &report.subspaces {
            println!("subspace {a:+}: distance {dist:.3e}");
        }
        println!(
            "max distance {:.3e} (tolerance {:.1e}): {}",
            report.max_distance,
            args.tol,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    Ok(if pass { Outcome::Ok } else { Outcome::VerificationFailed })
}

fn main() -> ExitCode {
    match run() {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
