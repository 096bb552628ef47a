//! Command-line front end for the qcgrid library.
//!
//! Every subcommand reads plain-text inputs (exponent matrices, alist,
//! CSV), writes deterministic output to `--output` (or stdout), and keeps
//! human summaries on stderr. Exit codes: 0 success, 2 input error,
//! 3 resource guard exceeded, 4 numeric domain error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qcgrid::boltzmann::{bm_energy, bm_log_partition, bm_partition_exact, syndrome_energy, BoltzmannParams};
use qcgrid::chargemap::{
    hexagonal_rotation_map, map_1d_four, map_1d_three, map_2d_cell, map_coupled_cells, CellParticle,
};
use qcgrid::circulant::{ExponentMatrix, MetExponentMatrix};
use qcgrid::codes::{lift, lift_met, ra_build, ra_encode, sc_construct, RaCode, ScParams};
use qcgrid::equilibrium::{relax, ChargeSystem, CircleSystem, RelaxOptions, TorusSystem};
use qcgrid::error::{Error, Result};
use qcgrid::gauge::{
    collapse_radial, radius_divisibility, row_shift_invariance, shbf_gauge_check, GaugeAxis,
    SphericalMatrix,
};
use qcgrid::gf2::BinaryMatrix;
use qcgrid::partition::{
    bethe_permanent, det_normalization, permanent_bruteforce, permanent_ryser, BetheOptions,
    SquareMatrix,
};
use qcgrid::tanner::{
    cycle_condition_girth, girth_bfs, min_distance_exhaustive, trapping_sets_csv, GirthResult,
    MinDistance, TsSearchLimits, DEFAULT_GIRTH_CAP, DEFAULT_TS_BUDGET,
};

#[derive(Parser)]
#[command(name = "qcgrid", version, about = "Quasi-cyclic code construction, analysis, and energy landscapes")]
struct Cli {
    /// Write primary output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Seed for the randomized helpers (random messages).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for partitionable searches.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lift an exponent-matrix file to an alist parity-check matrix.
    Lift(LiftArgs),
    /// Girth, trapping sets, and minimum distance of a code.
    Analyze(AnalyzeArgs),
    /// Map a charge system to an exponent matrix.
    Map(MapArgs),
    /// Energies, probabilities, and partition function of a model.
    Energy(EnergyArgs),
    /// Permanent or determinant normalization of a square matrix.
    Partition(PartitionArgs),
    /// Assemble a tail-biting spatially-coupled code.
    ScConstruct(ScArgs),
    /// Encode messages with a repeat-accumulate code.
    RaEncode(RaArgs),
    /// Cycle-gauge checks and radial collapse.
    Gauge(GaugeArgs),
    /// Relax a charge system toward equilibrium.
    Relax(RelaxArgs),
}

#[derive(Args)]
struct LiftArgs {
    /// Exponent-matrix text file (`m n L` header, -1 for zero blocks).
    input: PathBuf,
    /// Parse multi-edge cells (comma-joined shift lists).
    #[arg(long)]
    met: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Exponent-matrix file, or an alist file with `--alist`.
    input: PathBuf,
    #[arg(long)]
    alist: bool,
    /// Largest trapping-set variable count to enumerate.
    #[arg(long, default_value_t = 3)]
    a_max: usize,
    /// Largest odd-check count to report.
    #[arg(long, default_value_t = 4)]
    b_max: usize,
    /// Subset enumeration budget (default from QCGRID_BUDGET).
    #[arg(long)]
    budget: Option<u64>,
    /// Nullspace dimension cap for exhaustive minimum distance.
    #[arg(long, default_value_t = 24)]
    dmin_guard: usize,
    /// Cycle length cap for the algebraic girth search.
    #[arg(long, default_value_t = DEFAULT_GIRTH_CAP)]
    girth_cap: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapMode {
    /// Three collinear particles: balanced shift pairs.
    #[value(name = "1d3")]
    OneDThree,
    /// Four collinear particles: the projected row of four circulants.
    #[value(name = "1d4")]
    OneDFour,
    /// One four-particle planar cell.
    #[value(name = "2dcell")]
    TwoDCell,
    /// Chained cells sharing particles.
    Coupled,
    /// Hexagonal prism rotation quantization.
    Hex,
}

#[derive(Args)]
struct MapArgs {
    #[arg(long, value_enum)]
    mode: MapMode,
    /// First squared distance (1d3 mode).
    #[arg(long)]
    r1: Option<u64>,
    /// Second squared distance (1d3 mode).
    #[arg(long)]
    r3: Option<u64>,
    /// Squared gap `a` (1d4 mode).
    #[arg(long)]
    a: Option<u64>,
    /// Squared gap `b` (1d4 mode).
    #[arg(long)]
    b: Option<u64>,
    /// Charge CSV: `id,q,x,y` (2dcell, hex) or `cell,id,q,x,y` (coupled).
    #[arg(long)]
    charges: Option<PathBuf>,
    /// Grid step R (hex mode).
    #[arg(long)]
    grid_step: Option<f64>,
    /// Rotation angle in degrees (hex mode).
    #[arg(long)]
    alpha_deg: Option<f64>,
    /// Quantization count q (hex mode).
    #[arg(long)]
    quant: Option<u64>,
}

#[derive(Args)]
struct EnergyArgs {
    /// Boltzmann parameter file (`N`, biases, then `i j w` triples).
    #[arg(long, conflicts_with = "alist")]
    theta: Option<PathBuf>,
    /// Parity-check alist: syndrome-energy landscape.
    #[arg(long)]
    alist: Option<PathBuf>,
    /// Single configuration as a 0/1 string.
    #[arg(long)]
    config: Option<String>,
    /// Enumerate all configurations (theta input).
    #[arg(long)]
    enumerate: bool,
    /// Maximum Hamming weight for the syndrome landscape (alist input).
    #[arg(long, default_value_t = 2)]
    max_weight: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum PartitionMethod {
    Brute,
    Ryser,
    Bethe,
    Det,
}

#[derive(Args)]
struct PartitionArgs {
    /// Square matrix as CSV rows.
    input: PathBuf,
    #[arg(long, value_enum)]
    method: PartitionMethod,
    #[arg(long, default_value_t = 0.5)]
    damping: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    /// Where to write the Bethe convergence report CSV.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ScArgs {
    /// CPM-shifts matrix B as an exponent file: C rows, W columns, L = N.
    #[arg(long)]
    shifts: PathBuf,
    /// Coupling multiple.
    #[arg(long)]
    l_mult: usize,
    /// Offset vector D, comma separated (default `i * W / C` when C | W).
    #[arg(long)]
    offsets: Option<String>,
}

#[derive(Args)]
struct RaArgs {
    /// Systematic part H1 as an exponent file; block rows set the
    /// accumulator size.
    #[arg(long)]
    h1: PathBuf,
    /// Message bits as a 0/1 string.
    #[arg(long, conflicts_with = "random_messages")]
    message: Option<String>,
    /// Encode this many random messages instead (uses --seed).
    #[arg(long)]
    random_messages: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    Rows,
    Columns,
}

#[derive(Args)]
struct GaugeArgs {
    /// Exponent-matrix file; a `# spherical k N` header enables the
    /// radius checks and collapse.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "rows")]
    axis: AxisArg,
    /// Collapse the radius row (spherical input only).
    #[arg(long)]
    collapse: bool,
    /// Check shift invariance of this row.
    #[arg(long)]
    row: Option<usize>,
    /// Multiplier of the row shift unit S = L / N.
    #[arg(long, default_value_t = 1)]
    multiplier: u64,
}

#[derive(Args)]
struct RelaxArgs {
    /// Charge CSV: `id,q,x` for circles, `id,q,x,y` (grid row-major) for tori.
    input: PathBuf,
    /// `circle:<circumference>` or `torus:<Lx>,<Ly>,<nx>,<ny>`.
    #[arg(long)]
    geometry: String,
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Keep a trajectory snapshot every this many iterations.
    #[arg(long, default_value_t = 100)]
    stride: usize,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(match e {
            Error::Resource { .. } => 3,
            Error::Numeric(_) => 4,
            _ => 2,
        });
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Lift(args) => cmd_lift(cli, args),
        Command::Analyze(args) => cmd_analyze(cli, args),
        Command::Map(args) => cmd_map(cli, args),
        Command::Energy(args) => cmd_energy(cli, args),
        Command::Partition(args) => cmd_partition(cli, args),
        Command::ScConstruct(args) => cmd_sc_construct(cli, args),
        Command::RaEncode(args) => cmd_ra_encode(cli, args),
        Command::Gauge(args) => cmd_gauge(cli, args),
        Command::Relax(args) => cmd_relax(cli, args),
    }
}

fn emit(cli: &Cli, content: &str) -> Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, content).map_err(Error::from),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::domain(format!("cannot read {}: {e}", path.display())))
}

fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::domain(format!("`{other}` is not a bit"))),
        })
        .collect()
}

fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Prints `v` with `sig` significant digits, plain notation.
fn format_significant(v: f64, sig: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{:.*}", sig - 1, v);
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (sig as i64 - 1 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

fn cmd_lift(cli: &Cli, args: &LiftArgs) -> Result<()> {
    let text = read(&args.input)?;
    let h = if args.met {
        lift_met(&MetExponentMatrix::parse_text(&text)?)?
    } else {
        lift(&ExponentMatrix::parse_text(&text)?)
    };
    eprintln!("lifted {} x {} parity-check matrix, {} ones", h.rows(), h.cols(), h.weight());
    emit(cli, &h.to_alist())
}

fn cmd_analyze(cli: &Cli, args: &AnalyzeArgs) -> Result<()> {
    let text = read(&args.input)?;
    let (h, exponent) = if args.alist {
        (BinaryMatrix::from_alist(&text)?, None)
    } else {
        let e = ExponentMatrix::parse_text(&text)?;
        (lift(&e), Some(e))
    };
    let mut out = String::from("# analysis\nmetric,value\n");

    let bfs = girth_bfs(&h);
    match &exponent {
        Some(e) => {
            let algebraic = cycle_condition_girth(e, args.girth_cap);
            let agree = match (bfs, algebraic) {
                (None, GirthResult::Acyclic) => true,
                (Some(g), GirthResult::Girth(a)) => g == a,
                (Some(g), GirthResult::ExceedsCap(cap)) => g > cap,
                _ => false,
            };
            if agree {
                out.push_str(&format!("girth,{}\n", girth_label(bfs, args.girth_cap)));
            } else {
                // the methods are proven equivalent; surface any divergence
                out.push_str(&format!("girth_bfs,{}\n", girth_label(bfs, usize::MAX)));
                out.push_str(&format!("girth_algebraic,{algebraic:?}\n"));
            }
        }
        None => out.push_str(&format!("girth,{}\n", girth_label(bfs, usize::MAX))),
    }

    match min_distance_exhaustive(&h, args.dmin_guard) {
        Ok(MinDistance::Distance(d)) => out.push_str(&format!("d_min,{d}\n")),
        Ok(MinDistance::Trivial) => out.push_str("d_min,trivial\n"),
        Err(Error::Resource { .. }) => out.push_str("d_min,skipped:guard\n"),
        Err(e) => return Err(e),
    }

    let budget = args
        .budget
        .or_else(|| std::env::var("QCGRID_BUDGET").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_TS_BUDGET);
    let limits = TsSearchLimits::new(args.a_max, args.b_max)
        .with_budget(budget)
        .with_threads(cli.threads.max(1));
    let sets = qcgrid::tanner::find_trapping_sets(&h, &limits)?;
    out.push_str(&format!("ts_count,{}\n", sets.len()));
    out.push_str("# trapping sets\n");
    out.push_str(&trapping_sets_csv(&sets));
    eprintln!(
        "analyzed {} x {} matrix: {} trapping sets up to TS({}, {})",
        h.rows(),
        h.cols(),
        sets.len(),
        args.a_max,
        args.b_max
    );
    emit(cli, &out)
}

fn girth_label(g: Option<usize>, cap: usize) -> String {
    match g {
        None => "acyclic".to_string(),
        Some(g) if g <= cap => g.to_string(),
        Some(_) => format!(">{cap}"),
    }
}

fn cmd_map(cli: &Cli, args: &MapArgs) -> Result<()> {
    let need = |opt: Option<u64>, name: &str| {
        opt.ok_or_else(|| Error::domain(format!("--{name} is required for this mode")))
    };
    match args.mode {
        MapMode::OneDThree => {
            let r1 = need(args.r1, "r1")?;
            let r3 = need(args.r3, "r3")?;
            let set = map_1d_three(r1, r3)?;
            let mut out = format!(
                "# balanced pairs for R1 = {r1}, R3 = {r3}: one row [n1 | n3] per state\n"
            );
            out.push_str(&set.to_exponent()?.to_text());
            emit(cli, &out)
        }
        MapMode::OneDFour => {
            let a = need(args.a, "a")?;
            let b = need(args.b, "b")?;
            let map = map_1d_four(a, b)?;
            let mut out = format!(
                "# projected four-particle row for a = {a}, b = {b}\n# columns: a_bar b1_bar b2_bar ab_bar\n"
            );
            out.push_str(&map.to_exponent()?.to_text());
            emit(cli, &out)
        }
        MapMode::TwoDCell => {
            let particles = read_cell_csv(args)?;
            if particles.len() != 4 {
                return Err(Error::domain(format!(
                    "a planar cell needs exactly 4 particles, got {}",
                    particles.len()
                )));
            }
            let map = map_2d_cell(&particles)?;
            emit(cli, &map.to_text())
        }
        MapMode::Coupled => {
            let cells = read_coupled_csv(args)?;
            let maps = map_coupled_cells(&cells)?;
            let mut out = String::new();
            for (i, map) in maps.iter().enumerate() {
                out.push_str(&format!("# cell {i}\n{}", map.to_text()));
            }
            emit(cli, &out)
        }
        MapMode::Hex => {
            let grid_step = args
                .grid_step
                .ok_or_else(|| Error::domain("--grid-step is required for hex mode".to_string()))?;
            let alpha_deg = args
                .alpha_deg
                .ok_or_else(|| Error::domain("--alpha-deg is required for hex mode".to_string()))?;
            let quant = need(args.quant, "quant")?;
            let nodes = read_hex_nodes(charges_path(args)?)?;
            let e = hexagonal_rotation_map(grid_step, alpha_deg.to_radians(), quant, &nodes)?;
            let mut out = format!(
                "# hexagonal rotation map: R = {grid_step}, alpha = {alpha_deg} deg, q = {quant}\n"
            );
            out.push_str(&e.to_text());
            emit(cli, &out)
        }
    }
}

fn charges_path(args: &MapArgs) -> Result<&PathBuf> {
    args.charges
        .as_ref()
        .ok_or_else(|| Error::domain("--charges CSV is required for this mode".to_string()))
}

/// `id,q,x,y` rows with integer projections.
fn read_cell_csv(args: &MapArgs) -> Result<Vec<CellParticle>> {
    let text = read(charges_path(args)?)?;
    csv_rows(&text)?
        .into_iter()
        .map(|(lineno, fields)| {
            if fields.len() != 4 {
                return Err(Error::parse(lineno, "expected `id,q,x,y`".to_string()));
            }
            Ok(CellParticle {
                id: parse_field(&fields[0], lineno)?,
                x: parse_field(&fields[2], lineno)?,
                y: parse_field(&fields[3], lineno)?,
            })
        })
        .collect()
}

/// `cell,id,q,x,y` rows grouped by leading cell index.
fn read_coupled_csv(args: &MapArgs) -> Result<Vec<Vec<CellParticle>>> {
    let text = read(charges_path(args)?)?;
    let mut cells: std::collections::BTreeMap<u64, Vec<CellParticle>> = Default::default();
    for (lineno, fields) in csv_rows(&text)? {
        if fields.len() != 5 {
            return Err(Error::parse(lineno, "expected `cell,id,q,x,y`".to_string()));
        }
        let cell: u64 = parse_field(&fields[0], lineno)?;
        cells.entry(cell).or_default().push(CellParticle {
            id: parse_field(&fields[1], lineno)?,
            x: parse_field(&fields[3], lineno)?,
            y: parse_field(&fields[4], lineno)?,
        });
    }
    Ok(cells.into_values().collect())
}

fn read_hex_nodes(path: &PathBuf) -> Result<[(f64, f64); 7]> {
    let text = read(path)?;
    let rows = csv_rows(&text)?;
    if rows.len() != 7 {
        return Err(Error::domain(format!("hex mode needs 7 nodes, got {}", rows.len())));
    }
    let mut nodes = [(0.0, 0.0); 7];
    for (slot, (lineno, fields)) in rows.into_iter().enumerate() {
        if fields.len() != 4 {
            return Err(Error::parse(lineno, "expected `id,q,x,y`".to_string()));
        }
        nodes[slot] = (parse_field(&fields[2], lineno)?, parse_field(&fields[3], lineno)?);
    }
    Ok(nodes)
}

fn csv_rows(text: &str) -> Result<Vec<(usize, Vec<String>)>> {
    Ok(text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .filter(|(_, l)| !l.chars().next().map_or(false, |c| c.is_alphabetic())) // header row
        .map(|(i, l)| (i, l.split(',').map(|f| f.trim().to_string()).collect()))
        .collect())
}

fn parse_field<T: std::str::FromStr>(field: &str, lineno: usize) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::parse(lineno, format!("cannot parse `{field}`")))
}

fn cmd_energy(cli: &Cli, args: &EnergyArgs) -> Result<()> {
    if let Some(theta_path) = &args.theta {
        let theta = BoltzmannParams::parse_text(&read(theta_path)?)?;
        let z = bm_partition_exact(&theta)?;
        let log_z = bm_log_partition(&theta)?.ln();
        let mut out = format!("# Z = {}\n", format_significant(z, 12));
        if let Some(config) = &args.config {
            let x = parse_bits(config)?;
            let e = bm_energy(&theta, &x)?;
            out.push_str("config,energy,probability\n");
            out.push_str(&format!("{config},{e},{}\n", (-e - log_z).exp()));
        } else if args.enumerate {
            out.push_str("config,energy,probability\n");
            for mask in 0u64..(1u64 << theta.units()) {
                let x: Vec<bool> = (0..theta.units()).map(|b| (mask >> b) & 1 == 1).collect();
                let e = bm_energy(&theta, &x)?;
                out.push_str(&format!("{},{e},{}\n", bits_to_string(&x), (-e - log_z).exp()));
            }
        }
        eprintln!("Z = {z}");
        return emit(cli, &out);
    }
    if let Some(alist_path) = &args.alist {
        let h = BinaryMatrix::from_alist(&read(alist_path)?)?;
        let mut out = String::new();
        if let Some(config) = &args.config {
            let x = parse_bits(config)?;
            out.push_str("config,weight,energy\n");
            let weight = x.iter().filter(|&&b| b).count();
            out.push_str(&format!("{config},{weight},{}\n", syndrome_energy(&h, &x)?));
        } else {
            // low-weight landscape: every support up to --max-weight
            out.push_str("support,weight,energy\n");
            let mut x = vec![false; h.cols()];
            out.push_str(&format!(",0,{}\n", syndrome_energy(&h, &x)?));
            let mut supports: Vec<Vec<usize>> = Vec::new();
            let mut frontier: Vec<Vec<usize>> = (0..h.cols()).map(|i| vec![i]).collect();
            for _ in 0..args.max_weight {
                supports.extend(frontier.iter().cloned());
                let mut next = Vec::new();
                for support in &frontier {
                    for i in support.last().unwrap() + 1..h.cols() {
                        let mut bigger = support.clone();
                        bigger.push(i);
                        next.push(bigger);
                    }
                }
                frontier = next;
            }
            for support in supports {
                for &i in &support {
                    x[i] = true;
                }
                let label: Vec<String> = support.iter().map(|i| i.to_string()).collect();
                out.push_str(&format!(
                    "{},{},{}\n",
                    label.join(" "),
                    support.len(),
                    syndrome_energy(&h, &x)?
                ));
                for &i in &support {
                    x[i] = false;
                }
            }
        }
        return emit(cli, &out);
    }
    Err(Error::domain("provide --theta or --alist".to_string()))
}

fn cmd_partition(cli: &Cli, args: &PartitionArgs) -> Result<()> {
    let m = SquareMatrix::parse_csv(&read(&args.input)?)?;
    let value = match args.method {
        PartitionMethod::Brute => permanent_bruteforce(&m)?,
        PartitionMethod::Ryser => permanent_ryser(&m)?,
        PartitionMethod::Det => det_normalization(&m)?,
        PartitionMethod::Bethe => {
            let opts = BetheOptions { damping: args.damping, tol: args.tol, max_iter: args.max_iter };
            let report = bethe_permanent(&m, &opts)?;
            if let Some(path) = &args.report {
                std::fs::write(path, report.residuals_csv())?;
            }
            eprintln!(
                "bethe: converged = {}, iterations = {}, final residual = {}",
                report.converged, report.iterations, report.final_residual
            );
            report.value
        }
    };
    emit(cli, &format!("{}\n", format_significant(value, 12)))
}

fn cmd_sc_construct(cli: &Cli, args: &ScArgs) -> Result<()> {
    let b = ExponentMatrix::parse_text(&read(&args.shifts)?)?;
    let (c, w, n) = (b.rows(), b.cols(), b.circulant_size());
    let mut shifts = Vec::with_capacity(c);
    for r in 0..c {
        let row: Vec<u64> = b
            .row(r)
            .iter()
            .map(|&v| {
                if v < 0 {
                    Err(Error::domain("the CPM-shifts matrix has no zero blocks".to_string()))
                } else {
                    Ok(v as u64)
                }
            })
            .collect::<Result<_>>()?;
        shifts.push(row);
    }
    let offsets = match &args.offsets {
        Some(list) => list
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::domain(format!("offset `{tok}` is not an integer")))
            })
            .collect::<Result<Vec<_>>>()?,
        None => ScParams::even_offsets(w, c)?,
    };
    let params = ScParams::new(w, c, n, args.l_mult, shifts, offsets)?;
    let me = sc_construct(&params);
    eprintln!(
        "spatially-coupled code: {} x {} blocks of size {}",
        me.rows(),
        me.cols(),
        me.circulant_size()
    );
    emit(cli, &me.to_text())
}

fn cmd_ra_encode(cli: &Cli, args: &RaArgs) -> Result<()> {
    let h1 = ExponentMatrix::parse_text(&read(&args.h1)?)?;
    let code = RaCode::new(h1);
    let h = ra_build(&code);
    let mut out = String::from("message,codeword,syndrome_zero\n");
    let mut encode_one = |message: &[bool]| -> Result<()> {
        let x = ra_encode(&code, message)?;
        let zero = h.mul_vector(&x)?.iter().all(|&b| !b);
        out.push_str(&format!("{},{},{zero}\n", bits_to_string(message), bits_to_string(&x)));
        Ok(())
    };
    match (&args.message, args.random_messages) {
        (Some(bits), _) => encode_one(&parse_bits(bits)?)?,
        (None, Some(count)) => {
            let mut state = cli
                .seed
                .wrapping_mul(0x9e3779b97f4a7c15)
                .wrapping_add(0x2545f4914f6cdd1d);
            for _ in 0..count {
                let message: Vec<bool> = (0..code.message_len())
                    .map(|_| {
                        state ^= state << 13;
                        state ^= state >> 7;
                        state ^= state << 17;
                        (state >> 33) & 1 == 1
                    })
                    .collect();
                encode_one(&message)?;
            }
        }
        (None, None) => {
            return Err(Error::domain("provide --message or --random-messages".to_string()))
        }
    }
    emit(cli, &out)
}

fn cmd_gauge(cli: &Cli, args: &GaugeArgs) -> Result<()> {
    let text = read(&args.input)?;
    let spherical = text.lines().next().map_or(false, |l| l.starts_with("# spherical"));
    let mut out = String::from("# gauge\nline,axis,pass\n");
    let axis = match args.axis {
        AxisArg::Rows => GaugeAxis::Rows,
        AxisArg::Columns => GaugeAxis::Columns,
    };
    let axis_label = match args.axis {
        AxisArg::Rows => "row",
        AxisArg::Columns => "column",
    };
    let e;
    if spherical {
        let sm = SphericalMatrix::parse_text(&text)?;
        e = sm.to_exponent();
        for (line, pass) in shbf_gauge_check(&e, axis).iter().enumerate() {
            out.push_str(&format!("{line},{axis_label},{pass}\n"));
        }
        out.push_str("# radius divisibility\ncondition,pass\n");
        let report = radius_divisibility(sm.circulant_size(), sm.radii())?;
        for (i, ok) in report.per_radius.iter().enumerate() {
            out.push_str(&format!("k mod r{i},{ok}\n"));
        }
        out.push_str(&format!("k mod sum,{}\n", report.sum_divides));
        out.push_str(&format!(
            "general witness,{}\n",
            report.general_witness.map_or("none".to_string(), |a| a.to_string())
        ));
        if args.collapse {
            let collapsed = collapse_radial(&sm)?;
            out.push_str("# collapsed\n");
            out.push_str(&collapsed.to_string());
        }
    } else {
        e = ExponentMatrix::parse_text(&text)?;
        for (line, pass) in shbf_gauge_check(&e, axis).iter().enumerate() {
            out.push_str(&format!("{line},{axis_label},{pass}\n"));
        }
    }
    if let Some(row) = args.row {
        let preserved = row_shift_invariance(&e, row, args.multiplier)?;
        out.push_str(&format!(
            "# row {row} shift invariance (m = {})\npreserved,{preserved}\n",
            args.multiplier
        ));
    }
    emit(cli, &out)
}

fn cmd_relax(cli: &Cli, args: &RelaxArgs) -> Result<()> {
    let text = read(&args.input)?;
    let rows = csv_rows(&text)?;
    let system = parse_geometry(&args.geometry, &rows)?;
    let opts = RelaxOptions {
        step: args.step,
        max_iters: args.max_iters,
        tol: args.tol,
        trajectory_stride: args.stride,
    };
    let outcome = relax(&system, &opts)?;
    eprintln!(
        "relaxation {} after {} iterations",
        if outcome.converged { "converged" } else { "did NOT converge" },
        outcome.iterations
    );
    let mut out = format!(
        "# converged = {}, iterations = {}\n",
        outcome.converged, outcome.iterations
    );
    out.push_str(&outcome.trajectory_csv());
    emit(cli, &out)
}

fn parse_geometry(spec: &str, rows: &[(usize, Vec<String>)]) -> Result<ChargeSystem> {
    let (kind, params) = spec.split_once(':').ok_or_else(|| {
        Error::domain("geometry must be `circle:<C>` or `torus:<Lx>,<Ly>,<nx>,<ny>`".to_string())
    })?;
    match kind {
        "circle" => {
            let circumference: f64 = params
                .parse()
                .map_err(|_| Error::domain(format!("bad circumference `{params}`")))?;
            let particles: Vec<(f64, f64)> = rows
                .iter()
                .map(|(lineno, fields)| {
                    if fields.len() < 3 {
                        return Err(Error::parse(*lineno, "expected `id,q,x`".to_string()));
                    }
                    Ok((
                        parse_field::<f64>(&fields[1], *lineno)?,
                        parse_field::<f64>(&fields[2], *lineno)?,
                    ))
                })
                .collect::<Result<_>>()?;
            Ok(ChargeSystem::Circle(CircleSystem::new(circumference, &particles)?))
        }
        "torus" => {
            let dims: Vec<&str> = params.split(',').collect();
            if dims.len() != 4 {
                return Err(Error::domain(
                    "torus geometry is `torus:<Lx>,<Ly>,<nx>,<ny>`".to_string(),
                ));
            }
            let lx: f64 = parse_field(dims[0], 0)?;
            let ly: f64 = parse_field(dims[1], 0)?;
            let nx: usize = parse_field(dims[2], 0)?;
            let ny: usize = parse_field(dims[3], 0)?;
            let particles: Vec<(f64, f64, f64)> = rows
                .iter()
                .map(|(lineno, fields)| {
                    if fields.len() < 4 {
                        return Err(Error::parse(*lineno, "expected `id,q,x,y`".to_string()));
                    }
                    Ok((
                        parse_field::<f64>(&fields[1], *lineno)?,
                        parse_field::<f64>(&fields[2], *lineno)?,
                        parse_field::<f64>(&fields[3], *lineno)?,
                    ))
                })
                .collect::<Result<_>>()?;
            Ok(ChargeSystem::Torus(TorusSystem::new(lx, ly, nx, ny, &particles)?))
        }
        other => Err(Error::domain(format!("unknown geometry `{other}`"))),
    }
}
