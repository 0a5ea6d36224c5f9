use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cryptoherm_cli::{Cell, Format, Table};
use cryptoherm_core::model::{build_hamiltonian, closed_form_energies, ho_crossing, ho_energy};
use cryptoherm_core::{domains, metric, spectral, unfolding, HOLevel, ModelParams, SquareMatrix};

const EIGEN_TOL: f64 = 1e-10;
const REAL_TOL: f64 = 1e-12;

#[derive(Parser)]
#[command(
    name = "cryptoherm",
    version,
    about = "Reproducible spectra, metrics, domain scans and exceptional-point \
             searches for a four-site crypto-Hermitian lattice model",
    propagate_version = true
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: FormatArg,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form and numeric eigenvalues at one parameter point.
    Spectrum(SpectrumArgs),
    /// Metric operators: diagonal, elimination, spectral, or the full family.
    Metric(MetricArgs),
    /// Classify a rectangular grid of (A, B) parameter points.
    Scan(ScanArgs),
    /// Closed-form spectrum along a one-parameter path.
    Sweep(SweepArgs),
    /// Perturbative unfolding of the B = 0 crossing.
    Unfold(UnfoldArgs),
    /// Harmonic-oscillator reference levels and their crossings.
    Ho(HoArgs),
    /// Locate an exceptional point on a parameter segment by bisection.
    EpFind(EpFindArgs),
}

/// Parameter point in either (A, B) or (alpha, beta) coordinates.
#[derive(Args)]
struct CouplingArgs {
    /// Coupling combination A = 1 - alpha^2.
    #[arg(long = "A", allow_hyphen_values = true, value_name = "A")]
    cap_a: Option<f64>,
    /// Coupling combination B = 1 - beta^2.
    #[arg(long = "B", allow_hyphen_values = true, value_name = "B")]
    cap_b: Option<f64>,
    /// Inner-pair coupling asymmetry.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Outer-pair coupling asymmetry.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
}

impl CouplingArgs {
    fn params(&self) -> Result<ModelParams, RunError> {
        match (self.cap_a, self.cap_b, self.alpha, self.beta) {
            (Some(a), Some(b), None, None) => Ok(ModelParams::from_ab(a, b)),
            (None, None, Some(al), Some(be)) => Ok(ModelParams::from_alpha_beta(al, be)),
            _ => Err(RunError::Usage(
                "give either --A and --B, or --alpha and --beta (no mixing)".into(),
            )),
        }
    }
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    coupling: CouplingArgs,
}

#[derive(Args)]
struct MetricArgs {
    #[command(flatten)]
    coupling: CouplingArgs,
    /// Diagonal one-parameter metric.
    #[arg(long)]
    diagonal: bool,
    /// Scale of the diagonal metric.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    t1: f64,
    /// Four elimination parameters t1 t2 t3 t4.
    #[arg(long, num_args = 4, allow_hyphen_values = true, value_name = "T")]
    t: Option<Vec<f64>>,
    /// Four positive spectral weights kappa_1..kappa_4.
    #[arg(long, num_args = 4, allow_hyphen_values = true, value_name = "K")]
    kappa: Option<Vec<f64>>,
    /// Full constraint-nullspace basis of the metric family.
    #[arg(long)]
    family: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, allow_hyphen_values = true)]
    a_from: f64,
    #[arg(long, allow_hyphen_values = true)]
    a_to: f64,
    #[arg(long, allow_hyphen_values = true)]
    b_from: f64,
    #[arg(long, allow_hyphen_values = true)]
    b_to: f64,
    /// Grid resolution along A.
    #[arg(long, default_value_t = 41)]
    na: usize,
    /// Grid resolution along B.
    #[arg(long, default_value_t = 41)]
    nb: usize,
    /// Half-width of the exceptional-point boundary band.
    #[arg(long, default_value_t = domains::DEFAULT_BOUNDARY_TOL)]
    boundary_tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Axis {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    /// The diagonal A = B.
    #[value(name = "AB")]
    Ab,
}

#[derive(Args)]
struct SweepArgs {
    /// Varied parameter: A, B, or the diagonal AB.
    #[arg(long, value_enum)]
    vary: Axis,
    /// Fixed parameter as KEY=VALUE, e.g. A=0.02.
    #[arg(long, value_name = "KEY=VALUE")]
    fix: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    from: f64,
    #[arg(long, allow_hyphen_values = true)]
    to: f64,
    #[arg(long)]
    steps: usize,
}

#[derive(Args)]
struct UnfoldArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    /// Half-width of the symmetric gamma window.
    #[arg(long, default_value_t = 1e-2)]
    gamma_max: f64,
    #[arg(long, default_value_t = 41)]
    samples: usize,
}

#[derive(Args)]
struct HoArgs {
    #[command(subcommand)]
    command: HoCommand,
}

#[derive(Subcommand)]
enum HoCommand {
    /// Level energy E = 4n + 2 - 2 q alpha + c^2.
    Energy(HoEnergyArgs),
    /// Crossing test for the levels (m, +1) and (n, -1).
    Cross(HoCrossArgs),
}

#[derive(Args)]
struct HoEnergyArgs {
    /// Radial quantum number.
    #[arg(long)]
    n: u32,
    /// Quasi-parity, +1 or -1.
    #[arg(long, allow_hyphen_values = true)]
    q: i32,
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    /// Regularization shift (default 1).
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    c: f64,
}

#[derive(Args)]
struct HoCrossArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    n: u32,
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
}

#[derive(Args)]
struct EpFindArgs {
    /// Varied parameter: A, B, or the diagonal AB.
    #[arg(long, value_enum)]
    vary: Axis,
    /// Fixed parameter as KEY=VALUE, e.g. A=0.02.
    #[arg(long, value_name = "KEY=VALUE")]
    fix: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lo: f64,
    #[arg(long, allow_hyphen_values = true)]
    hi: f64,
    /// Bisection tolerance on the parameter.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

enum RunError {
    Usage(String),
    Domain(String),
}

impl From<cryptoherm_core::Error> for RunError {
    fn from(e: cryptoherm_core::Error) -> Self {
        RunError::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(RunError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), RunError> {
    let mut table = match &cli.command {
        Command::Spectrum(args) => cmd_spectrum(args)?,
        Command::Metric(args) => cmd_metric(args)?,
        Command::Scan(args) => cmd_scan(args)?,
        Command::Sweep(args) => cmd_sweep(args)?,
        Command::Unfold(args) => cmd_unfold(args)?,
        Command::Ho(args) => cmd_ho(args)?,
        Command::EpFind(args) => cmd_ep_find(args)?,
    };
    stamp_common(&mut table, cli);
    let text = table.render(cli.format.into());
    match &cli.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| RunError::Domain(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| RunError::Domain(format!("cannot write output: {e}"))),
    }
}

/// Reproducibility block common to every artifact.
fn stamp_common(table: &mut Table, cli: &Cli) {
    table.set_meta("tool", "cryptoherm");
    table.set_meta("version", env!("CARGO_PKG_VERSION"));
    let argv: Vec<String> = std::env::args().skip(1).collect();
    table.set_meta("command_line", argv.join(" "));
    table.set_meta(
        "format",
        match cli.format {
            FormatArg::Csv => "csv",
            FormatArg::Json => "json",
        },
    );
}

fn stamp_point(table: &mut Table, p: &ModelParams) {
    table.set_meta("A", cryptoherm_cli::format_float(p.a()));
    table.set_meta("B", cryptoherm_cli::format_float(p.b()));
    table.set_meta("C", cryptoherm_cli::format_float(p.c()));
    table.set_meta("alpha_re", cryptoherm_cli::format_float(p.alpha().re));
    table.set_meta("alpha_im", cryptoherm_cli::format_float(p.alpha().im));
    table.set_meta("beta_re", cryptoherm_cli::format_float(p.beta().re));
    table.set_meta("beta_im", cryptoherm_cli::format_float(p.beta().im));
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<Table, RunError> {
    let p = args.coupling.params()?;
    let h = build_hamiltonian(&p);
    let sys = spectral::eigendecompose(&h, EIGEN_TOL)?;
    let mut closed = closed_form_energies(&p);
    closed.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));

    let mut t = Table::new(&["index", "closed_re", "closed_im", "numeric_re", "numeric_im"]);
    stamp_point(&mut t, &p);
    t.set_meta("eigen_tol", cryptoherm_cli::format_float(EIGEN_TOL));
    t.set_meta("reality", sys.spectrum.reality);
    t.set_meta("cluster_radius", cryptoherm_cli::format_float(sys.spectrum.tol_used));
    for (i, (c, n)) in closed.iter().zip(&sys.spectrum.eigenvalues).enumerate() {
        t.push_row(vec![
            Cell::Int(i as i64),
            Cell::Num(c.re),
            Cell::Num(c.im),
            Cell::Num(n.re),
            Cell::Num(n.im),
        ]);
    }
    Ok(t)
}

fn matrix_rows(t: &mut Table, theta: &SquareMatrix, member: Option<usize>) {
    for i in 0..theta.dim() {
        for j in 0..theta.dim() {
            let z = theta[(i, j)];
            let mut row = Vec::with_capacity(5);
            if let Some(m) = member {
                row.push(Cell::Int(m as i64));
            }
            row.extend([
                Cell::Int(i as i64),
                Cell::Int(j as i64),
                Cell::Num(z.re),
                Cell::Num(z.im),
            ]);
            t.push_row(row);
        }
    }
}

fn cmd_metric(args: &MetricArgs) -> Result<Table, RunError> {
    let p = args.coupling.params()?;
    let h = build_hamiltonian(&p);
    let modes =
        args.diagonal as usize + args.t.is_some() as usize + args.kappa.is_some() as usize
            + args.family as usize;
    if modes != 1 {
        return Err(RunError::Usage(
            "choose exactly one of --diagonal, --t, --kappa, --family".into(),
        ));
    }

    if args.family {
        let family = metric::solve_metric_space(&h, spectral::RANK_TOL);
        let mut t = Table::new(&["member", "i", "j", "re", "im"]);
        stamp_point(&mut t, &p);
        t.set_meta("mode", "family");
        t.set_meta("family_dim", family.family_dim);
        t.set_meta("parametrization", "nullspace");
        t.set_meta("rank_tol", cryptoherm_cli::format_float(spectral::RANK_TOL));
        for (m, theta) in family.basis.iter().enumerate() {
            matrix_rows(&mut t, theta, Some(m));
        }
        return Ok(t);
    }

    let (theta, mode) = if args.diagonal {
        (metric::diagonal_metric(&p, args.t1)?, "diagonal".to_string())
    } else if let Some(tv) = &args.t {
        let tv = [tv[0], tv[1], tv[2], tv[3]];
        (metric::closed_form_theta(&p, tv)?, "elimination".to_string())
    } else {
        let kv = args.kappa.as_ref().expect("mode checked above");
        (
            metric::metric_from_left_eigenvectors(&h, kv)?,
            "spectral".to_string(),
        )
    };

    let sig = metric::signature(&theta, metric::POSITIVITY_TOL)?;
    let mut t = Table::new(&["i", "j", "re", "im"]);
    stamp_point(&mut t, &p);
    t.set_meta("mode", mode);
    if args.diagonal {
        t.set_meta("t1", cryptoherm_cli::format_float(args.t1));
    }
    if let Some(tv) = &args.t {
        for (k, v) in tv.iter().enumerate() {
            t.set_meta(&format!("t{}", k + 1), cryptoherm_cli::format_float(*v));
        }
    }
    if let Some(kv) = &args.kappa {
        for (k, v) in kv.iter().enumerate() {
            t.set_meta(&format!("kappa{}", k + 1), cryptoherm_cli::format_float(*v));
        }
    }
    t.set_meta("n_plus", sig.n_plus);
    t.set_meta("n_zero", sig.n_zero);
    t.set_meta("n_minus", sig.n_minus);
    t.set_meta("positive_definite", sig.positive_definite);
    t.set_meta("min_eigenvalue", cryptoherm_cli::format_float(sig.min_eigenvalue));
    t.set_meta(
        "constraint_residual",
        cryptoherm_cli::format_float(metric::constraint_residual(&h, &theta)),
    );
    t.set_meta(
        "positivity_tol",
        cryptoherm_cli::format_float(metric::POSITIVITY_TOL),
    );
    matrix_rows(&mut t, &theta, None);
    Ok(t)
}

fn cmd_scan(args: &ScanArgs) -> Result<Table, RunError> {
    let grid = domains::scan_grid(
        (args.a_from, args.a_to),
        (args.b_from, args.b_to),
        args.na,
        args.nb,
        args.boundary_tol,
    )?;
    let mut t = Table::new(&[
        "ia",
        "ib",
        "A",
        "B",
        "hermitian",
        "real_matrix",
        "spectrum_real",
        "diagonalizable",
        "crypto_hermitian",
        "ep_boundary",
        "region",
    ]);
    t.set_meta("a_from", cryptoherm_cli::format_float(args.a_from));
    t.set_meta("a_to", cryptoherm_cli::format_float(args.a_to));
    t.set_meta("b_from", cryptoherm_cli::format_float(args.b_from));
    t.set_meta("b_to", cryptoherm_cli::format_float(args.b_to));
    t.set_meta("na", args.na);
    t.set_meta("nb", args.nb);
    t.set_meta("boundary_tol", cryptoherm_cli::format_float(grid.tolerances.boundary));
    t.set_meta("eigen_tol", cryptoherm_cli::format_float(grid.tolerances.eigen));
    t.set_meta("rank_tol", cryptoherm_cli::format_float(grid.tolerances.rank));
    t.set_meta(
        "cluster_radius_factor",
        cryptoherm_cli::format_float(grid.tolerances.cluster_radius_factor),
    );
    for ib in 0..args.nb {
        for ia in 0..args.na {
            let (a, b) = grid.cell_center(ia, ib);
            let cell = grid.cell(ia, ib);
            let region = cell
                .named_region
                .map_or(String::new(), |r| r.to_string());
            t.push_row(vec![
                Cell::Int(ia as i64),
                Cell::Int(ib as i64),
                Cell::Num(a),
                Cell::Num(b),
                Cell::Bool(cell.hermitian),
                Cell::Bool(cell.real_matrix),
                Cell::Bool(cell.spectrum_real),
                Cell::Bool(cell.diagonalizable),
                Cell::Bool(cell.crypto_hermitian),
                Cell::Bool(cell.ep_boundary),
                Cell::Text(region),
            ]);
        }
    }
    Ok(t)
}

/// Parse `--fix KEY=VALUE` against the varied axis; returns the fixed value
/// for axis sweeps and None for the diagonal.
fn parse_fix(vary: Axis, fix: &Option<String>) -> Result<Option<f64>, RunError> {
    let expected = match vary {
        Axis::A => "B",
        Axis::B => "A",
        Axis::Ab => {
            if fix.is_some() {
                return Err(RunError::Usage("--vary AB takes no --fix".into()));
            }
            return Ok(None);
        }
    };
    let fix = fix
        .as_ref()
        .ok_or_else(|| RunError::Usage(format!("--vary requires --fix {expected}=<value>")))?;
    let (key, value) = fix
        .split_once('=')
        .ok_or_else(|| RunError::Usage(format!("--fix wants KEY=VALUE, got {fix}")))?;
    if key != expected {
        return Err(RunError::Usage(format!(
            "--fix must pin the other axis ({expected}), got {key}"
        )));
    }
    let value: f64 = value
        .parse()
        .map_err(|_| RunError::Usage(format!("--fix value is not a number: {value}")))?;
    Ok(Some(value))
}

fn cmd_sweep(args: &SweepArgs) -> Result<Table, RunError> {
    let fixed = parse_fix(args.vary, &args.fix)?;
    let sweep = match args.vary {
        Axis::A => domains::Sweep::FixB,
        Axis::B => domains::Sweep::FixA,
        Axis::Ab => domains::Sweep::Diagonal,
    };
    let table = domains::sweep_spectrum(sweep, fixed, args.from, args.to, args.steps)?;

    let mut t = Table::new(&[
        "parameter", "e1_re", "e1_im", "e2_re", "e2_im", "e3_re", "e3_im", "e4_re", "e4_im",
        "all_real",
    ]);
    t.set_meta(
        "vary",
        match args.vary {
            Axis::A => "A",
            Axis::B => "B",
            Axis::Ab => "AB",
        },
    );
    if let Some(f) = fixed {
        let key = match args.vary {
            Axis::A => "fixed_B",
            _ => "fixed_A",
        };
        t.set_meta(key, cryptoherm_cli::format_float(f));
    }
    t.set_meta("from", cryptoherm_cli::format_float(args.from));
    t.set_meta("to", cryptoherm_cli::format_float(args.to));
    t.set_meta("steps", args.steps);
    t.set_meta("real_tol", cryptoherm_cli::format_float(REAL_TOL));
    for row in &table.rows {
        let all_real = row.energies.iter().all(|e| e.im.abs() < REAL_TOL);
        let mut cells = vec![Cell::Num(row.parameter)];
        for e in &row.energies {
            cells.push(Cell::Num(e.re));
            cells.push(Cell::Num(e.im));
        }
        cells.push(Cell::Bool(all_real));
        t.push_row(cells);
    }
    Ok(t)
}

fn cmd_unfold(args: &UnfoldArgs) -> Result<Table, RunError> {
    let report = unfolding::verify_unfolding(args.alpha, args.gamma_max, args.samples)?;
    let mut t = Table::new(&[
        "gamma",
        "numeric1_re",
        "numeric1_im",
        "numeric2_re",
        "numeric2_im",
        "closed1_re",
        "closed1_im",
        "closed2_re",
        "closed2_im",
        "taylor1",
        "taylor2",
    ]);
    t.set_meta("alpha", cryptoherm_cli::format_float(args.alpha));
    t.set_meta("gamma_max", cryptoherm_cli::format_float(args.gamma_max));
    t.set_meta("samples", args.samples);
    t.set_meta(
        "fitted_linear_coefficient",
        cryptoherm_cli::format_float(report.fitted_linear_coefficient),
    );
    t.set_meta(
        "fitted_quadratic_coefficient",
        cryptoherm_cli::format_float(report.fitted_quadratic_coefficient),
    );
    t.set_meta(
        "max_abs_error_closed_vs_numeric",
        cryptoherm_cli::format_float(report.max_abs_error_closed_vs_numeric),
    );
    for (k, &gamma) in report.gamma_samples.iter().enumerate() {
        let (n1, n2) = report.numeric_e[k];
        let (c1, c2) = report.closed_form_e[k];
        let (t1, t2) = report.taylor_e[k];
        t.push_row(vec![
            Cell::Num(gamma),
            Cell::Num(n1.re),
            Cell::Num(n1.im),
            Cell::Num(n2.re),
            Cell::Num(n2.im),
            Cell::Num(c1.re),
            Cell::Num(c1.im),
            Cell::Num(c2.re),
            Cell::Num(c2.im),
            Cell::Num(t1),
            Cell::Num(t2),
        ]);
    }
    Ok(t)
}

fn cmd_ho(args: &HoArgs) -> Result<Table, RunError> {
    match &args.command {
        HoCommand::Energy(e) => {
            let level = HOLevel::new(e.n, e.q, e.alpha, e.c)?;
            let mut t = Table::new(&["n", "q", "alpha", "c", "energy"]);
            t.set_meta("subcommand", "energy");
            t.push_row(vec![
                Cell::Int(i64::from(e.n)),
                Cell::Int(i64::from(e.q)),
                Cell::Num(e.alpha),
                Cell::Num(e.c),
                Cell::Num(ho_energy(&level)),
            ]);
            Ok(t)
        }
        HoCommand::Cross(c) => {
            let mut t = Table::new(&["m", "n", "alpha", "crossing"]);
            t.set_meta("subcommand", "cross");
            t.push_row(vec![
                Cell::Int(i64::from(c.m)),
                Cell::Int(i64::from(c.n)),
                Cell::Num(c.alpha),
                Cell::Bool(ho_crossing(c.m, c.n, c.alpha)),
            ]);
            Ok(t)
        }
    }
}

fn cmd_ep_find(args: &EpFindArgs) -> Result<Table, RunError> {
    let fixed = parse_fix(args.vary, &args.fix)?;
    let location = match (args.vary, fixed) {
        (Axis::A, Some(b)) => {
            spectral::find_ep_on_segment(|t| ModelParams::from_ab(t, b), args.lo, args.hi, args.tol)?
        }
        (Axis::B, Some(a)) => {
            spectral::find_ep_on_segment(|t| ModelParams::from_ab(a, t), args.lo, args.hi, args.tol)?
        }
        (Axis::Ab, None) => {
            spectral::find_ep_on_segment(|t| ModelParams::from_ab(t, t), args.lo, args.hi, args.tol)?
        }
        _ => unreachable!("parse_fix enforces the pairing"),
    };

    let mut t = Table::new(&["parameter", "residual", "kind"]);
    t.set_meta(
        "vary",
        match args.vary {
            Axis::A => "A",
            Axis::B => "B",
            Axis::Ab => "AB",
        },
    );
    if let Some(f) = fixed {
        let key = match args.vary {
            Axis::A => "fixed_B",
            _ => "fixed_A",
        };
        t.set_meta(key, cryptoherm_cli::format_float(f));
    }
    t.set_meta("lo", cryptoherm_cli::format_float(args.lo));
    t.set_meta("hi", cryptoherm_cli::format_float(args.hi));
    t.set_meta("tol", cryptoherm_cli::format_float(args.tol));
    t.push_row(vec![
        Cell::Num(location.parameter),
        Cell::Num(location.residual),
        Cell::Text(location.kind.to_string()),
    ]);
    Ok(t)
}
