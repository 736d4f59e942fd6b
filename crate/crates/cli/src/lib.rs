//! Command-line front end. [`run`] parses arguments, dispatches, and returns
//! the process exit code: 0 success, 2 usage, 3 I/O, 4 domain validation.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use psfam::baseline::adjacency_cap_from_env;
use psfam::bench::{cuts_for_densities, density_sweep, scaling_bench, write_csv, BenchRow};
use psfam::measure::operator::{pauli_decompose, DenseMatrix, WeightedPauliSum};
use psfam::{
    build_ansatz_state, build_circuit, expectation_with, AnsatzSpec, Error, FamilyId, Mode, PauliString, Solution,
    StateVector, StrategyRegistry,
};
use serde_json::json;

/// Largest register for `partition`, `lookup` and `circuit`.
pub const MAX_CLI_QUBITS: usize = 16;

#[derive(Debug, Parser)]
#[command(name = "psfam", version, about = "Partition Pauli strings into commuting families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CircuitFormat {
    Qasm3,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EvalMode {
    Exact,
    Shots,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MeasuredMethod {
    Dense,
    Qwc,
    Naive,
}

impl MeasuredMethod {
    fn name(self) -> &'static str {
        match self {
            MeasuredMethod::Dense => "dense",
            MeasuredMethod::Qwc => "qwc",
            MeasuredMethod::Naive => "naive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenerateKind {
    /// Pauli decomposition of a random Hermitian matrix (m <= 8).
    Hamiltonian,
    /// Every non-identity string with a normal weight.
    DenseSum,
    State,
    Ansatz,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the generating matrix and every family.
    Partition {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        json: bool,
    },
    /// Report the family that holds a Pauli string.
    Lookup {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        pauli: String,
        #[arg(long)]
        json: bool,
    },
    /// Emit the rotation circuit that diagonalizes a family.
    Circuit {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        family: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: CircuitFormat,
    },
    /// Group the strings of a Hamiltonian file.
    Group {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "dense")]
        method: String,
        /// Drop terms with |coefficient| below this value.
        #[arg(long)]
        cut: Option<f64>,
    },
    /// Estimate an expectation value from grouped measurements.
    Expect {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, conflicts_with = "ansatz", required_unless_present = "ansatz")]
        state: Option<PathBuf>,
        #[arg(long)]
        ansatz: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: EvalMode,
        /// Shots per measured group.
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "dense")]
        method: MeasuredMethod,
        #[arg(long)]
        cut: Option<f64>,
    },
    /// Write grouping benchmarks as CSV.
    Bench {
        /// Inclusive range such as `2..8`.
        #[arg(long)]
        m_range: String,
        #[arg(long, value_delimiter = ',')]
        methods: Vec<String>,
        /// Coefficient cuts; switches to a density sweep.
        #[arg(long, value_delimiter = ',', conflicts_with = "densities")]
        cuts: Vec<f64>,
        /// Target densities in percent; switches to a density sweep.
        #[arg(long, value_delimiter = ',')]
        densities: Vec<f64>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Timing repetitions per point in scaling mode (fastest kept).
        #[arg(long, default_value_t = 3)]
        repeats: usize,
    },
    /// Write a seeded random input file.
    Generate {
        #[arg(long, value_enum)]
        kind: GenerateKind,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
        /// Ansatz layer count.
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
    Domain(Error),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Domain(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Io(msg) => write!(f, "I/O error: {msg}"),
            CliError::Domain(err) => write!(f, "error: {err}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::Io(msg) => CliError::Io(msg),
            other => CliError::Domain(other),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parse `args` (including the program name), run the command, and return
/// the exit code. Data goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.code()
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Malformed file contents count as file errors.
fn parse_file<T>(path: &Path, parse: impl FnOnce(&str) -> psfam::Result<T>) -> CliResult<T> {
    let text = read_file(path)?;
    parse(&text).map_err(|e| match e {
        Error::Format(msg) => CliError::Io(format!("{}: {msg}", path.display())),
        other => CliError::from(other),
    })
}

fn check_m(m: usize) -> CliResult<()> {
    if !(1..=MAX_CLI_QUBITS).contains(&m) {
        return Err(CliError::Usage(format!("--m must be in 1..={MAX_CLI_QUBITS}, got {m}")));
    }
    Ok(())
}

fn registry() -> StrategyRegistry {
    StrategyRegistry::with_adjacency_cap(adjacency_cap_from_env())
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Partition { m, json } => cmd_partition(m, json, out),
        Command::Lookup { m, pauli, json } => cmd_lookup(m, &pauli, json, out),
        Command::Circuit { m, family, format } => cmd_circuit(m, family, format, out),
        Command::Group { input, method, cut } => cmd_group(&input, &method, cut, out, err),
        Command::Expect {
            input,
            state,
            ansatz,
            mode,
            shots,
            seed,
            method,
            cut,
        } => {
            let mode = match mode {
                EvalMode::Exact => Mode::Exact,
                EvalMode::Shots => {
                    let shots = shots.ok_or_else(|| CliError::Usage("--mode shots needs --shots".into()))?;
                    let seed = seed.ok_or_else(|| CliError::Usage("--mode shots needs --seed".into()))?;
                    if shots == 0 {
                        return Err(CliError::Usage("--shots must be at least 1".into()));
                    }
                    Mode::Shots { shots, seed }
                }
            };
            cmd_expect(&input, state.as_deref(), ansatz.as_deref(), mode, method, cut, out)
        }
        Command::Bench {
            m_range,
            methods,
            cuts,
            densities,
            seed,
            out: path,
            repeats,
        } => cmd_bench(&m_range, &methods, &cuts, &densities, seed, &path, repeats, err),
        Command::Generate {
            kind,
            m,
            seed,
            reps,
            out: path,
        } => cmd_generate(kind, m, seed, reps, path.as_deref(), out),
    }
}

fn cmd_partition(m: usize, json: bool, out: &mut dyn Write) -> CliResult<()> {
    check_m(m)?;
    let sol = Solution::build(m)?;
    if !json {
        return emit(out, &sol.report());
    }
    let families: Vec<_> = sol
        .families()
        .map(|f| {
            let members: Vec<String> = sol
                .family_members(f)
                .expect("valid id")
                .iter()
                .map(|p| p.pauli.to_string())
                .collect();
            json!({ "id": f.0, "members": members })
        })
        .collect();
    let doc = json!({
        "m": m,
        "generator": sol.generator(),
        "families": families,
    });
    emit(out, &format!("{doc}\n"))
}

fn cmd_lookup(m: usize, text: &str, json: bool, out: &mut dyn Write) -> CliResult<()> {
    check_m(m)?;
    let pauli = PauliString::parse(text, m).map_err(|e| CliError::Usage(e.to_string()))?;
    let sol = Solution::build(m)?;
    let family = sol.lookup(&pauli)?;
    let members: Vec<String> = sol
        .family_members(family)?
        .iter()
        .map(|p| p.pauli.to_string())
        .collect();
    if json {
        emit(out, &format!("{}\n", json!({ "family": family.0, "members": members })))
    } else {
        emit(out, &format!("family {family}\n{}\n", members.join(",")))
    }
}

fn cmd_circuit(m: usize, family: usize, format: CircuitFormat, out: &mut dyn Write) -> CliResult<()> {
    check_m(m)?;
    let sol = Solution::build(m)?;
    if family > sol.n() {
        return Err(CliError::Usage(format!(
            "--family must be in 0..={}, got {family}",
            sol.n()
        )));
    }
    let circuit = build_circuit(&sol, FamilyId(family))?;
    match format {
        CircuitFormat::Json => emit(out, &format!("{}\n", circuit.to_json())),
        CircuitFormat::Qasm3 => emit(out, &circuit.to_qasm3()),
    }
}

fn load_hamiltonian(path: &Path, cut: Option<f64>) -> CliResult<WeightedPauliSum> {
    let h = parse_file(path, WeightedPauliSum::from_json)?;
    match cut {
        Some(t) if t.is_nan() || t < 0.0 => Err(CliError::Usage(format!("--cut must be >= 0, got {t}"))),
        Some(t) => Ok(h.apply_cut(t)),
        None => Ok(h),
    }
}

fn cmd_group(path: &Path, method: &str, cut: Option<f64>, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let reg = registry();
    let strategy = reg.get(method).map_err(|e| CliError::Usage(e.to_string()))?;
    let h = load_hamiltonian(path, cut)?;
    let result = strategy.group(&h.strings())?;
    let families: Vec<Vec<String>> = result
        .families
        .iter()
        .map(|fam| fam.iter().map(ToString::to_string).collect())
        .collect();
    let doc = json!({
        "method": strategy.name(),
        "n_families": result.num_families(),
        "families": families,
    });
    emit(out, &format!("{doc}\n"))?;
    let _ = writeln!(
        err,
        "method={} m={} strings={} families={}",
        strategy.name(),
        h.num_qubits(),
        h.num_strings(),
        result.num_families()
    );
    Ok(())
}

fn cmd_expect(
    path: &Path,
    state: Option<&Path>,
    ansatz: Option<&Path>,
    mode: Mode,
    method: MeasuredMethod,
    cut: Option<f64>,
    out: &mut dyn Write,
) -> CliResult<()> {
    let h = load_hamiltonian(path, cut)?;
    let psi = match (state, ansatz) {
        (Some(p), _) => parse_file(p, StateVector::from_json)?,
        (None, Some(p)) => {
            let spec: AnsatzSpec = parse_file(p, |text| Ok(serde_json::from_str(text)?))?;
            build_ansatz_state(&spec, h.num_qubits())?
        }
        (None, None) => return Err(CliError::Usage("one of --state or --ansatz is required".into())),
    };
    let reg = registry();
    let value = expectation_with(reg.get(method.name())?, &h, &psi, mode)?;
    emit(out, &format!("{value:.12}\n"))
}

fn parse_range(text: &str) -> CliResult<Vec<usize>> {
    let bad = || CliError::Usage(format!("--m-range expects A..B, got {text:?}"));
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (text, text),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    range: &str,
    methods: &[String],
    cuts: &[f64],
    densities: &[f64],
    seed: u64,
    path: &Path,
    repeats: usize,
    err: &mut dyn Write,
) -> CliResult<()> {
    let ms = parse_range(range)?;
    if methods.is_empty() {
        return Err(CliError::Usage("--methods must name at least one method".into()));
    }
    let reg = registry();
    let mut names: Vec<&str> = Vec::with_capacity(methods.len());
    for name in methods {
        let s = reg.get(name).map_err(|e| CliError::Usage(e.to_string()))?;
        if !names.contains(&s.name()) {
            names.push(s.name());
        }
    }
    names.sort_unstable();

    let mut rows: Vec<BenchRow> = Vec::new();
    if cuts.is_empty() && densities.is_empty() {
        for name in &names {
            reg.get(name)?.check_qubits(*ms.last().expect("non-empty range"))?;
        }
        let mut per_method = Vec::new();
        for name in &names {
            per_method.push(scaling_bench(reg.get(name)?, &ms, repeats)?);
        }
        for (i, &m) in ms.iter().enumerate() {
            rows.extend(per_method.iter().map(|r| r[i].clone()));
            let _ = writeln!(err, "m={m} done");
        }
    } else {
        for &m in &ms {
            let cut_list = if densities.is_empty() {
                cuts.to_vec()
            } else {
                let h = pauli_decompose(&DenseMatrix::random_hermitian(m, seed))?;
                cuts_for_densities(&h, densities)
            };
            rows.extend(density_sweep(&reg, m, seed, &cut_list, &names)?);
            let _ = writeln!(err, "m={m} done");
        }
    }
    let file = fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    write_csv(&rows, file)?;
    Ok(())
}

fn cmd_generate(
    kind: GenerateKind,
    m: usize,
    seed: u64,
    reps: usize,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult<()> {
    check_m(m)?;
    let text = match kind {
        GenerateKind::Hamiltonian => pauli_decompose(&DenseMatrix::random_hermitian(m, seed))?.to_json(),
        GenerateKind::DenseSum => WeightedPauliSum::random_dense(m, seed)?.to_json(),
        GenerateKind::State => StateVector::random(m, seed)?.to_json(),
        GenerateKind::Ansatz => serde_json::to_string(&AnsatzSpec::random(m, reps, seed)).map_err(Error::from)?,
    };
    match path {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => emit(out, &format!("{text}\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("psfam").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("2..4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_range("3").unwrap(), vec![3]);
        assert!(parse_range("4..2").is_err());
        assert!(parse_range("x..2").is_err());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&["partition", "--m", "0"]).0, 2);
        assert_eq!(run_capture(&["lookup", "--m", "2", "--pauli", "QQ"]).0, 2);
        assert_eq!(run_capture(&["circuit", "--m", "2", "--family", "5"]).0, 2);
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn lookup_text() {
        let (code, out, _) = run_capture(&["lookup", "--m", "2", "--pauli", "YX"]);
        assert_eq!(code, 0);
        assert_eq!(out, "family 1\nXZ,YX,ZY\n");
    }
}
