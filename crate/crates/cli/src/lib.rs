//! Command-line front end. [`run`] is the whole program with its streams
//! passed in, so it can be driven from tests.

pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cwposet::certify::{cw_certify, Certificate, CertifyBudget, CwVerdict, Status};
use cwposet::complex::{face_poset, order_complex, SimplicialComplex};
use cwposet::generators::{
    boolean_lattice, bruhat_interval, crosspolytope_face_poset, named_triangulation_str, Permutation,
};
use cwposet::homology::{reduced_homology, DEFAULT_PI1_BUDGET};
use cwposet::invariants::{is_eulerian, is_thin, mobius, reduced_euler_characteristic, EulerianVerdict};
use cwposet::io::{complex_to_json, parse_document, poset_to_json, Document};
use cwposet::shelling::{danaraj_klee_check, find_shelling, DkVerdict, ShellingSearch, DEFAULT_SHELLING_BUDGET};
use cwposet::Poset;
use serde_json::json;

use report::{CheckEntry, Invocation, Report, Verdict};

pub const EXIT_INPUT_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cwposet", version, about = "Decide whether finite graded posets are CW posets")]
struct Cli {
    /// Worker threads for interval-level parallelism (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Include per-check wall-clock times (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated poset or complex as a JSON document.
    ///
    /// Families: `boolean N`, `crosspolytope N`, `bruhat N [U W]`,
    /// `triangulation NAME`, `face-poset NAME`.
    Gen {
        family: String,
        args: Vec<String>,
    },
    /// Combinatorial checks on a poset (all of them when no flag is given).
    Check {
        file: String,
        #[arg(long)]
        thin: bool,
        #[arg(long)]
        eulerian: bool,
        #[arg(long)]
        mobius: bool,
        #[arg(long)]
        hall: bool,
    },
    /// Reduced integral homology of a complex (or of a poset's order complex).
    Homology { file: String },
    /// Search for a shelling of a complex (or of a poset's order complex).
    Shell {
        file: String,
        #[command(flatten)]
        budget: ShellingBudget,
    },
    /// Rank-recursive sphere certification of every interval.
    Certify {
        file: String,
        #[command(flatten)]
        budget: ShellingBudget,
        /// `π₁` simplification moves per interval.
        #[arg(long, value_name = "N", default_value_t = DEFAULT_PI1_BUDGET)]
        pi1_budget: u64,
        /// Above this many facets an interval is decided by a shelling alone.
        #[arg(long, value_name = "N", default_value_t = CertifyBudget::default().homology_facets)]
        homology_facets: usize,
        /// Write the full certificate here (`-` for standard output).
        #[arg(long, value_name = "OUT")]
        json: Option<String>,
    },
    /// Thinness plus shellability of every interval.
    Dk {
        file: String,
        #[command(flatten)]
        budget: ShellingBudget,
    },
}

impl Command {
    fn file(&self) -> Option<&str> {
        match self {
            Command::Gen { .. } => None,
            Command::Check { file, .. }
            | Command::Homology { file }
            | Command::Shell { file, .. }
            | Command::Certify { file, .. }
            | Command::Dk { file, .. } => Some(file),
        }
    }
}

#[derive(Debug, Args)]
struct ShellingBudget {
    /// Shelling search nodes (per complex).
    #[arg(long, visible_alias = "shelling-budget", value_name = "N")]
    budget: Option<u64>,
}

impl ShellingBudget {
    fn or(&self, default: u64) -> u64 {
        self.budget.unwrap_or(default)
    }
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn read_input(file: &str, stdin: &mut dyn Read) -> Result<Document, InputError> {
    let text = if file == "-" {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| InputError(format!("reading standard input: {e}")))?;
        s
    } else {
        fs::read_to_string(file).map_err(|e| InputError(format!("reading {file}: {e}")))?
    };
    parse_document(&text).map_err(|e| InputError(format!("{file}: {e}")))
}

fn expect_poset(doc: Document, file: &str) -> Result<Poset, InputError> {
    match doc {
        Document::Poset(p) => Ok(p),
        Document::Complex(_) => Err(InputError(format!("{file}: expected a poset document"))),
    }
}

/// Complexes are used as given; posets through their order complex.
fn as_complex(doc: Document) -> SimplicialComplex {
    match doc {
        Document::Complex(k) => k,
        Document::Poset(p) => order_complex(&p),
    }
}

fn entry(name: &str, verdict: Verdict, lines: Vec<String>, data: serde_json::Value) -> CheckEntry {
    CheckEntry {
        name: name.to_string(),
        verdict,
        lines,
        data,
        millis: None,
    }
}

fn timed(timing: bool, f: impl FnOnce() -> CheckEntry) -> CheckEntry {
    let start = Instant::now();
    let mut e = f();
    if timing {
        e.millis = Some(start.elapsed().as_millis() as u64);
    }
    e
}

fn generate(family: &str, args: &[String]) -> Result<String, InputError> {
    let number = |i: usize| -> Result<usize, InputError> {
        let raw = args
            .get(i)
            .ok_or_else(|| InputError(format!("{family}: missing argument {}", i + 1)))?;
        raw.parse()
            .map_err(|_| InputError(format!("{family}: `{raw}` is not a number")))
    };
    let text = |i: usize| -> Result<&str, InputError> {
        args.get(i)
            .map(String::as_str)
            .ok_or_else(|| InputError(format!("{family}: missing argument {}", i + 1)))
    };
    Ok(match family {
        "boolean" => poset_to_json(&boolean_lattice(number(0)?)?),
        "crosspolytope" => poset_to_json(&crosspolytope_face_poset(number(0)?)?),
        "bruhat" => {
            let n = number(0)?;
            let (u, w) = if args.len() >= 3 {
                (Permutation::parse(&args[1], n)?, Permutation::parse(&args[2], n)?)
            } else {
                (Permutation::identity(n), Permutation::longest(n))
            };
            poset_to_json(&bruhat_interval(n, &u, &w)?)
        }
        "triangulation" => complex_to_json(&named_triangulation_str(text(0)?)?.complex),
        "face-poset" => poset_to_json(&face_poset(&named_triangulation_str(text(0)?)?.complex)),
        other => {
            return Err(InputError(format!(
                "unknown family `{other}` (boolean, crosspolytope, bruhat, triangulation, face-poset)"
            )))
        }
    })
}

fn check_thin(p: &Poset) -> CheckEntry {
    let v = is_thin(p);
    let lines = v
        .violations
        .iter()
        .map(|w| format!("({}, {}) has {} middle elements", w.lower, w.upper, w.middle_count))
        .collect();
    let verdict = if v.holds() { Verdict::Pass } else { Verdict::Fail };
    entry("thin", verdict, lines, serde_json::to_value(&v).unwrap())
}

fn check_eulerian(p: &Poset) -> CheckEntry {
    match is_eulerian(p) {
        Ok(EulerianVerdict::Eulerian) => entry("eulerian", Verdict::Pass, Vec::new(), json!("eulerian")),
        Ok(v @ EulerianVerdict::NotEulerian { .. }) => {
            let EulerianVerdict::NotEulerian {
                lower,
                upper,
                mobius,
                expected,
            } = &v
            else {
                unreachable!()
            };
            let line = format!("mu({lower}, {upper}) = {mobius}, expected {expected}");
            entry("eulerian", Verdict::Fail, vec![line], serde_json::to_value(&v).unwrap())
        }
        Err(e) => entry("eulerian", Verdict::Fail, vec![e.to_string()], json!({ "error": e.to_string() })),
    }
}

fn check_mobius(p: &Poset) -> CheckEntry {
    let table = mobius(p);
    let rows: Vec<(String, String, String)> = table
        .entries()
        .map(|(x, y, v)| (p.label(x).to_string(), p.label(y).to_string(), v.to_string()))
        .collect();
    let lines = rows.iter().map(|(x, y, v)| format!("mu({x}, {y}) = {v}")).collect();
    entry("mobius", Verdict::Pass, lines, serde_json::to_value(&rows).unwrap())
}

fn check_hall(p: &Poset) -> CheckEntry {
    let table = mobius(p);
    let mut lines = Vec::new();
    let pairs = p.strict_pairs();
    for &(x, y) in &pairs {
        let chi = reduced_euler_characteristic(&order_complex(&p.open_interval(x, y)));
        let mu = table.get(x, y).expect("comparable");
        if *mu != chi.into() {
            lines.push(format!("({}, {}): mu = {mu}, reduced Euler characteristic = {chi}", p.label(x), p.label(y)));
        }
    }
    let verdict = if lines.is_empty() { Verdict::Pass } else { Verdict::Fail };
    let data = json!({ "pairs": pairs.len(), "mismatches": lines.len() });
    if lines.is_empty() {
        lines.push(format!("mu = reduced Euler characteristic on all {} intervals", pairs.len()));
    }
    entry("hall", verdict, lines, data)
}

fn homology_entry(k: &SimplicialComplex) -> CheckEntry {
    let h = reduced_homology(k);
    let lines = h.groups.iter().map(|g| format!("H~{} = {}", g.dim, g)).collect();
    entry("homology", Verdict::Pass, lines, serde_json::to_value(&h).unwrap())
}

fn shell_entry(k: &SimplicialComplex, budget: u64) -> Result<CheckEntry, InputError> {
    Ok(match find_shelling(k, budget)? {
        ShellingSearch::Found(order) => {
            let facets = order.facet_labels(k);
            let lines = facets.iter().map(|f| format!("[{}]", f.join(", "))).collect();
            entry("shelling", Verdict::Pass, lines, json!({ "status": "found", "order": facets }))
        }
        ShellingSearch::None => entry(
            "shelling",
            Verdict::Fail,
            vec!["no shelling exists (search exhausted)".into()],
            json!({ "status": "none" }),
        ),
        ShellingSearch::BudgetExhausted => entry(
            "shelling",
            Verdict::Inconclusive,
            vec![format!("budget of {budget} nodes exhausted")],
            json!({ "status": "budget_exhausted" }),
        ),
    })
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::CertifiedSphere => "certified_sphere",
        Status::HomologySphereOnly => "homology_sphere_only",
        Status::Inconclusive => "inconclusive",
        Status::Failed => "failed",
    }
}

fn certify_entry(cert: &Certificate) -> CheckEntry {
    let mut lines = Vec::new();
    let mut by_rank: std::collections::BTreeMap<usize, [usize; 4]> = Default::default();
    for r in &cert.intervals {
        by_rank.entry(r.rank_difference).or_default()[r.status as usize] += 1;
    }
    lines.push(format!(
        "{:>4} {:>10} {:>10} {:>12} {:>8}",
        "rank", "certified", "homology", "inconclusive", "failed"
    ));
    for (rank, c) in &by_rank {
        lines.push(format!("{rank:>4} {:>10} {:>10} {:>12} {:>8}", c[0], c[1], c[2], c[3]));
    }
    if let Some(reason) = &cert.precondition {
        lines.push(reason.clone());
    }
    if let Some((lo, hi)) = &cert.failing_interval {
        let rec = cert.record(lo, hi).expect("failing interval is recorded");
        lines.push(format!("fails at ({lo}, {hi}): {}", serde_json::to_string(&rec.witnesses).unwrap()));
    }
    for r in cert.intervals.iter().filter(|r| r.status != Status::CertifiedSphere && r.status != Status::Failed) {
        lines.push(format!("({}, {}) is {}", r.lower, r.upper, status_name(r.status)));
    }
    let verdict = match cert.verdict {
        CwVerdict::CwPoset => Verdict::Pass,
        CwVerdict::NotCwPoset => Verdict::Fail,
        CwVerdict::Undetermined => Verdict::Inconclusive,
    };
    let data = json!({
        "verdict": cert.verdict,
        "cw_poset": cert.cw_poset,
        "failing_interval": cert.failing_interval,
        "intervals": cert.intervals.len(),
    });
    entry("certify", verdict, lines, data)
}

fn dk_entry(p: &Poset, budget: u64) -> CheckEntry {
    let report = danaraj_klee_check(p, budget);
    let (verdict, line) = match &report.verdict {
        DkVerdict::CwCertified => (Verdict::Pass, "thin and every interval shellable".to_string()),
        DkVerdict::Failed(w) => (Verdict::Fail, format!("failed: {}", serde_json::to_string(w).unwrap())),
        DkVerdict::Inconclusive { lower, upper } => {
            (Verdict::Inconclusive, format!("shelling budget exhausted on ({lower}, {upper})"))
        }
    };
    let mut lines = vec![line];
    if let Some(s) = report.lower_intervals {
        lines.push(format!("intervals from the bottom: {}", serde_json::to_value(s).unwrap().as_str().unwrap()));
    }
    if let Some(s) = report.all_intervals {
        lines.push(format!("all intervals: {}", serde_json::to_value(s).unwrap().as_str().unwrap()));
    }
    entry("danaraj_klee", verdict, lines, serde_json::to_value(&report).unwrap())
}

fn execute(cli: &Cli, stdin: &mut (dyn Read + Send), stdout: &mut Vec<u8>) -> Result<i32, InputError> {
    let timing = cli.timing;
    let (invocation, checks) = match &cli.command {
        Command::Gen { family, args } => {
            let doc = generate(family, args)?;
            writeln!(stdout, "{doc}")?;
            return Ok(0);
        }
        Command::Check {
            file,
            thin,
            eulerian,
            mobius,
            hall,
        } => {
            let p = expect_poset(read_input(file, stdin)?, file)?;
            let all = !(*thin || *eulerian || *mobius || *hall);
            let mut checks = Vec::new();
            let mut options = Vec::new();
            if all || *thin {
                options.push("thin".to_string());
                checks.push(timed(timing, || check_thin(&p)));
            }
            if all || *eulerian {
                options.push("eulerian".to_string());
                checks.push(timed(timing, || check_eulerian(&p)));
            }
            if all || *mobius {
                options.push("mobius".to_string());
                checks.push(timed(timing, || check_mobius(&p)));
            }
            if all || *hall {
                options.push("hall".to_string());
                checks.push(timed(timing, || check_hall(&p)));
            }
            (invocation("check", file, options), checks)
        }
        Command::Homology { file } => {
            let k = as_complex(read_input(file, stdin)?);
            (invocation("homology", file, Vec::new()), vec![timed(timing, || homology_entry(&k))])
        }
        Command::Shell { file, budget } => {
            let k = as_complex(read_input(file, stdin)?);
            let b = budget.or(DEFAULT_SHELLING_BUDGET);
            let start = Instant::now();
            let mut e = shell_entry(&k, b)?;
            if timing {
                e.millis = Some(start.elapsed().as_millis() as u64);
            }
            (invocation("shell", file, vec![format!("budget={b}")]), vec![e])
        }
        Command::Certify {
            file,
            budget,
            pi1_budget,
            homology_facets,
            json,
        } => {
            let p = expect_poset(read_input(file, stdin)?, file)?;
            let limits = CertifyBudget {
                pi1_moves: *pi1_budget,
                shelling_nodes: budget.or(CertifyBudget::default().shelling_nodes),
                homology_facets: *homology_facets,
            };
            let start = Instant::now();
            let cert = cw_certify(&p, limits);
            let elapsed = start.elapsed();
            if let Some(out) = json {
                let text = cert.to_json() + "\n";
                if out == "-" {
                    stdout.write_all(text.as_bytes())?;
                    return Ok(certify_entry(&cert).verdict.exit_code());
                }
                fs::write(out, text).map_err(|e| InputError(format!("writing {out}: {e}")))?;
            }
            let mut e = certify_entry(&cert);
            if timing {
                e.millis = Some(elapsed.as_millis() as u64);
            }
            let options = vec![
                format!("shelling_budget={}", limits.shelling_nodes),
                format!("pi1_budget={}", limits.pi1_moves),
                format!("homology_facets={}", limits.homology_facets),
            ];
            (invocation("certify", file, options), vec![e])
        }
        Command::Dk { file, budget } => {
            let p = expect_poset(read_input(file, stdin)?, file)?;
            let b = budget.or(DEFAULT_SHELLING_BUDGET);
            (invocation("dk", file, vec![format!("budget={b}")]), vec![timed(timing, || dk_entry(&p, b))])
        }
    };
    let report = Report::new(invocation, checks);
    let text = match cli.format {
        Format::Human => report.to_human(),
        Format::Json => report.to_json(),
    };
    stdout.write_all(text.as_bytes())?;
    Ok(report.summary.exit_code)
}

fn invocation(command: &str, file: &str, options: Vec<String>) -> Invocation {
    Invocation {
        command: command.to_string(),
        input: file.to_string(),
        options,
    }
}

/// Runs the program: reports go to `stdout`, diagnostics to `stderr`.
/// Exit codes: 0 pass, 1 a check failed, 2 inconclusive, 3 input error.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_INPUT_ERROR
                }
            };
        }
    };
    let mut input = Vec::new();
    if cli.command.file() == Some("-") {
        if let Err(e) = stdin.read_to_end(&mut input) {
            let _ = writeln!(stderr, "error: reading standard input: {e}");
            return EXIT_INPUT_ERROR;
        }
    }
    let mut output = Vec::new();
    let outcome = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli, &mut &input[..], &mut output)),
            Err(e) => Err(InputError(format!("--threads {n}: {e}"))),
        },
        None => execute(&cli, &mut &input[..], &mut output),
    };
    if let Err(e) = stdout.write_all(&output).and_then(|_| stdout.flush()) {
        let _ = writeln!(stderr, "error: writing output: {e}");
        return EXIT_INPUT_ERROR;
    }
    match outcome {
        Ok(code) => code,
        Err(InputError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INPUT_ERROR
        }
    }
}
