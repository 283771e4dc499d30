use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use tdrl_core::codes::{greedy_code, verify_code, Code, CodeReport};
use tdrl_core::formulas::{closed_form, sphere_packing_bound, CountReport, Measure, Quantity};
use tdrl_core::neighborhood::{
    ball, ball_with_witnesses, intersect_out, witness_pair, Direction, Limits, NeighborSet,
    WitnessFamily,
};
use tdrl_core::perm::{apply, apply_windowed, OpKind, Pattern, Permutation, WindowedOp};
use tdrl_core::recon::{reconstruct, reconstruct_windowed, ObservationSet};
use tdrl_core::tables::{render_table, table_rows, TableId};
use tdrl_core::verify::{run_verification, VerifyPlan};
use tdrl_core::Error;

const GUARD_ENV: &str = "TDRL_MAX_N";

#[derive(Parser)]
#[command(name = "tdrl", version, about = "Tandem-duplication-random-loss operations on permutations")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    /// Raise every enumeration guard to N.
    #[arg(long, value_name = "N", global = true)]
    max_n_override: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Tdrl,
    Mtdrl,
}

impl From<KindArg> for OpKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Tdrl => OpKind::Tdrl,
            KindArg::Mtdrl => OpKind::Mtdrl,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum QuantityArg {
    Sout,
    Sin,
    Srev,
    Nmax,
}

impl From<QuantityArg> for Measure {
    fn from(q: QuantityArg) -> Self {
        match q {
            QuantityArg::Sout => Measure::Sout,
            QuantityArg::Sin => Measure::Sin,
            QuantityArg::Srev => Measure::Srev,
            QuantityArg::Nmax => Measure::Nmax,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Formula,
    Enumerate,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableArg {
    Tdrl5,
    Mtdrl4,
}

impl From<TableArg> for TableId {
    fn from(t: TableArg) -> Self {
        match t {
            TableArg::Tdrl5 => TableId::Tdrl5,
            TableArg::Mtdrl4 => TableId::Mtdrl4,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Out,
    In,
    #[value(alias = "rev")]
    Reversible,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Out => Direction::Out,
            DirectionArg::In => Direction::In,
            DirectionArg::Reversible => Direction::Reversible,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    CyclicShift,
    AdjacentTransposition,
    SwapLastTwo,
}

impl From<FamilyArg> for WitnessFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::CyclicShift => WitnessFamily::CyclicShift,
            FamilyArg::AdjacentTransposition => WitnessFamily::AdjacentTransposition,
            FamilyArg::SwapLastTwo => WitnessFamily::SwapLastTwo,
        }
    }
}

#[derive(Args)]
struct KindOpt {
    /// Operation kind.
    #[arg(long, value_enum)]
    kind: KindArg,
}

#[derive(Subcommand)]
enum Command {
    /// Apply one operation to a permutation.
    Apply {
        #[command(flatten)]
        kind: KindOpt,
        /// Permutation, e.g. "2 3 5 1 4".
        #[arg(long, value_parser = parse_perm)]
        perm: Permutation,
        /// Pattern over {0,1}; position 1 first.
        #[arg(long, value_parser = parse_pattern)]
        pattern: Pattern,
        /// 1-based start of the window.
        #[arg(long)]
        window_start: Option<usize>,
        /// Window width; must equal the pattern length.
        #[arg(long, requires = "window_start")]
        window_len: Option<usize>,
    },
    /// Print every pattern applied to the identity.
    Table {
        #[arg(value_enum, ignore_case = true)]
        which: TableArg,
    },
    /// Evaluate a count by formula, by enumeration, or both.
    Count {
        #[arg(long, value_enum)]
        quantity: QuantityArg,
        #[command(flatten)]
        kind: KindOpt,
        #[arg(short = 'n')]
        n: usize,
        /// Window width (unbounded when omitted).
        #[arg(short = 'k')]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
    },
    /// Compare every formula to enumeration for all n up to a limit.
    Verify {
        #[arg(long)]
        n_max: usize,
        /// Kinds to check (default: both).
        #[arg(long, value_enum, value_delimiter = ',')]
        kinds: Vec<KindArg>,
        /// Quantities to check (default: sout, sin, srev).
        #[arg(long, value_enum, value_delimiter = ',')]
        quantities: Vec<QuantityArg>,
    },
    /// List the out-ball, in-ball or reversible set of a permutation.
    Neighbors {
        #[command(flatten)]
        kind: KindOpt,
        #[arg(long, value_parser = parse_perm)]
        perm: Permutation,
        #[arg(short = 'k')]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = DirectionArg::Out)]
        direction: DirectionArg,
        /// Show one operation witnessing each element.
        #[arg(long)]
        witnesses: bool,
    },
    /// Intersect the out-balls of two permutations.
    Intersect {
        #[command(flatten)]
        kind: KindOpt,
        #[arg(long, value_parser = parse_perm)]
        perm: Permutation,
        #[arg(long, value_parser = parse_perm)]
        other: Permutation,
    },
    /// Recover every source consistent with a set of observations.
    Reconstruct {
        #[command(flatten)]
        kind: KindOpt,
        /// One permutation per line; blank lines and '#' comments ignored.
        #[arg(long)]
        obs_file: PathBuf,
        #[arg(short = 'k')]
        k: Option<usize>,
    },
    /// Sphere-packing bound on single-error-correcting codes.
    Bound {
        #[command(flatten)]
        kind: KindOpt,
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'k')]
        k: usize,
    },
    /// Build a greedy code and compare it to the bound.
    CodeSearch {
        #[command(flatten)]
        kind: KindOpt,
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'k')]
        k: usize,
        /// Write the code to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check an existing code file.
    CodeVerify {
        #[arg(long)]
        code_file: PathBuf,
    },
    /// Print a witness pair and the size of its out-ball intersection.
    Witness {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Kind to evaluate under (default: the family's own).
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
}

fn parse_perm(s: &str) -> Result<Permutation, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_pattern(s: &str) -> Result<Pattern, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Everything that ends a run early.
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

/// Rendered output and whether the run counts as a success.
struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn limits(cli_override: Option<usize>) -> Result<Limits, Failure> {
    if let Some(n) = cli_override {
        eprintln!("warning: enumeration guards raised to n <= {n}; large runs may take very long");
        return Ok(Limits::uniform(n));
    }
    let mut limits = Limits::default();
    if let Ok(v) = std::env::var(GUARD_ENV) {
        limits.ball = v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{GUARD_ENV} must be a non-negative integer, got {v:?}")))?;
    }
    Ok(limits)
}

fn set_output(set: &NeighborSet, fmt: Format) -> String {
    match fmt {
        Format::Table => set.to_lines(),
        Format::Csv => format!("perm\n{}", set.to_lines()),
        Format::Json => to_json(&json!({ "size": set.len(), "perms": set })),
    }
}

fn kv_table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        writeln!(out, "{k:<width$}  {v}").unwrap();
    }
    out
}

fn opt_k(k: Option<usize>) -> String {
    k.map_or_else(|| "-".to_string(), |k| k.to_string())
}

fn cmd_apply(
    kind: OpKind,
    perm: &Permutation,
    pattern: Pattern,
    window_start: Option<usize>,
    window_len: Option<usize>,
    fmt: Format,
) -> Result<Output, Failure> {
    let result = match window_start {
        Some(start) => {
            if let Some(len) = window_len {
                if len != pattern.len() {
                    return Err(Error::LengthMismatch {
                        expected: len,
                        actual: pattern.len(),
                    }
                    .into());
                }
            }
            apply_windowed(perm, &WindowedOp::new(kind, start, pattern))?
        }
        None => apply(kind, perm, &pattern)?,
    };
    Ok(Output::ok(match fmt {
        Format::Table => format!("{result}\n"),
        Format::Csv => format!("result\n{result}\n"),
        Format::Json => to_json(&json!({ "result": result })),
    }))
}

fn cmd_table(which: TableId, fmt: Format) -> Output {
    Output::ok(match fmt {
        Format::Table => render_table(which),
        Format::Csv => {
            let mut out = String::from("pattern,result\n");
            for (p, b) in table_rows(which) {
                writeln!(out, "{b},{p}").unwrap();
            }
            out
        }
        Format::Json => {
            let rows: Vec<_> = table_rows(which)
                .into_iter()
                .map(|(p, b)| json!({ "pattern": b, "result": p }))
                .collect();
            to_json(&json!({ "table": which.to_string(), "rows": rows }))
        }
    })
}

fn count_rows(reports: &[CountReport], fmt: Format) -> String {
    match fmt {
        Format::Csv => {
            let mut out = format!("{}\n", CountReport::CSV_HEADER);
            for r in reports {
                writeln!(out, "{}", r.csv_row()).unwrap();
            }
            out
        }
        Format::Json => to_json(&reports),
        Format::Table => unreachable!("tables are rendered per command"),
    }
}

fn cmd_count(q: Quantity, n: usize, k: Option<usize>, mode: Mode, limits: &Limits, fmt: Format) -> Result<Output, Failure> {
    let report = match mode {
        Mode::Formula => CountReport::formula(q, n, k)?,
        Mode::Enumerate | Mode::Both => CountReport::enumerated(q, n, k, limits)?,
    };
    let ok = mode != Mode::Both || report.passed();
    let text = match fmt {
        Format::Table => {
            let show = |v: Option<String>| v.unwrap_or_else(|| "-".to_string());
            kv_table(&[
                ("quantity", report.quantity.to_string()),
                ("kind", report.kind.to_string()),
                ("n", n.to_string()),
                ("k", opt_k(k)),
                ("formula", report.formula_value.to_string()),
                ("enumerated", show(report.enumerated_value.as_ref().map(|v| v.to_string()))),
                ("match", show(report.matches.map(|m| m.to_string()))),
            ])
        }
        Format::Csv => count_rows(std::slice::from_ref(&report), fmt),
        Format::Json => to_json(&report),
    };
    Ok(Output { text, ok })
}

fn cmd_verify(plan: &VerifyPlan, limits: &Limits, fmt: Format) -> Result<Output, Failure> {
    let report = run_verification(plan, limits)?;
    let ok = report.all_passed();
    let text = match fmt {
        Format::Table => report.matrix(),
        Format::Csv => count_rows(&report.rows, fmt),
        Format::Json => to_json(&json!({
            "n_max": report.n_max,
            "all_pass": ok,
            "rows": report.rows,
        })),
    };
    Ok(Output { text, ok })
}

fn cmd_neighbors(
    p: &Permutation,
    kind: OpKind,
    k: Option<usize>,
    direction: Direction,
    witnesses: bool,
    limits: &Limits,
    fmt: Format,
) -> Result<Output, Failure> {
    if !witnesses {
        return Ok(Output::ok(set_output(&ball(p, kind, k, direction, limits)?, fmt)));
    }
    let entries = ball_with_witnesses(p, kind, k, direction, limits)?;
    let text = match fmt {
        Format::Table => {
            let mut out = String::new();
            for (rho, op) in &entries {
                writeln!(out, "{rho}  start={} pattern={}", op.start, op.pattern).unwrap();
            }
            out
        }
        Format::Csv => {
            let mut out = String::from("perm,start,pattern\n");
            for (rho, op) in &entries {
                writeln!(out, "{rho},{},{}", op.start, op.pattern).unwrap();
            }
            out
        }
        Format::Json => {
            let rows: Vec<_> = entries
                .iter()
                .map(|(rho, op)| json!({ "perm": rho, "start": op.start, "pattern": op.pattern }))
                .collect();
            to_json(&json!({ "size": rows.len(), "entries": rows }))
        }
    };
    Ok(Output::ok(text))
}

fn cmd_reconstruct(path: &Path, kind: OpKind, k: Option<usize>, limits: &Limits, fmt: Format) -> Result<Output, Failure> {
    let obs = ObservationSet::parse(&read_file(path)?)?;
    let result = match k {
        Some(k) => reconstruct_windowed(&obs, kind, k, limits)?,
        None => reconstruct(&obs, kind, limits)?,
    };
    let text = match fmt {
        Format::Table => {
            let mut out = kv_table(&[
                ("observations", obs.len().to_string()),
                ("candidates", result.candidates.len().to_string()),
                ("unique", result.unique.to_string()),
                ("guaranteed_threshold", result.guaranteed_threshold.to_string()),
            ]);
            out.push_str(&result.candidates.to_lines());
            out
        }
        Format::Csv => format!("candidate\n{}", result.candidates.to_lines()),
        Format::Json => to_json(&result),
    };
    Ok(Output::ok(text))
}

fn cmd_bound(n: usize, k: usize, kind: OpKind, fmt: Format) -> Result<Output, Failure> {
    let bound = sphere_packing_bound(n, k, kind)?;
    let ball = closed_form(Quantity::new(Measure::Sout, kind), n, Some(k))?;
    let text = match fmt {
        Format::Table => kv_table(&[
            ("n", n.to_string()),
            ("k", k.to_string()),
            ("kind", kind.to_string()),
            ("ball_size", ball.to_string()),
            ("bound", bound.to_string()),
        ]),
        Format::Csv => format!("n,k,kind,ball_size,bound\n{n},{k},{kind},{ball},{bound}\n"),
        Format::Json => to_json(&json!({
            "n": n,
            "k": k,
            "kind": kind,
            "ball_size": ball.to_string(),
            "bound": bound.to_string(),
        })),
    };
    Ok(Output::ok(text))
}

fn code_report(code: &Code, valid: bool, fmt: Format) -> Result<Output, Failure> {
    let report = CodeReport::new(code)?;
    let text = match fmt {
        Format::Table => {
            let mut out = kv_table(&[
                ("n", report.n.to_string()),
                ("k", report.k.to_string()),
                ("kind", report.kind.to_string()),
                ("size", report.size.to_string()),
                ("bound", report.bound.to_string()),
                ("ratio", report.ratio.clone()),
                ("valid", valid.to_string()),
            ]);
            for w in &code.words {
                writeln!(out, "{w}").unwrap();
            }
            out
        }
        Format::Csv => format!("{}\n{}\n", CodeReport::CSV_HEADER, report.csv_row()),
        Format::Json => to_json(&report),
    };
    Ok(Output { text, ok: valid })
}

fn cmd_code_search(n: usize, k: usize, kind: OpKind, output: Option<&Path>, limits: &Limits, fmt: Format) -> Result<Output, Failure> {
    let code = greedy_code(n, k, kind, limits)?;
    let valid = verify_code(&code, limits)?;
    if let Some(path) = output {
        std::fs::write(path, code.to_text())
            .map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))?;
    }
    code_report(&code, valid, fmt)
}

fn cmd_code_verify(path: &Path, limits: &Limits, fmt: Format) -> Result<Output, Failure> {
    let code = Code::parse(&read_file(path)?)?;
    let valid = verify_code(&code, limits)?;
    code_report(&code, valid, fmt)
}

fn cmd_witness(n: usize, family: WitnessFamily, kind: Option<OpKind>, limits: &Limits, fmt: Format) -> Result<Output, Failure> {
    let kind = kind.unwrap_or(family.intended_kind());
    let (p, q) = witness_pair(n, family)?;
    let size = intersect_out(&p, &q, kind, limits)?.len();
    let target = n.checked_sub(1).map_or(0, |e| 1usize << e);
    let note = (kind != family.intended_kind())
        .then(|| format!("{family} witnesses the {} maximum, evaluated under {kind}", family.intended_kind()));
    let text = match fmt {
        Format::Table => {
            let mut rows = vec![
                ("family", family.to_string()),
                ("kind", kind.to_string()),
                ("first", p.to_string()),
                ("second", q.to_string()),
                ("intersection", size.to_string()),
                ("maximum", target.to_string()),
                ("attains", (size == target).to_string()),
            ];
            if let Some(note) = &note {
                rows.push(("note", note.clone()));
            }
            kv_table(&rows)
        }
        Format::Csv => format!(
            "n,family,kind,first,second,intersection,maximum,attains\n{n},{family},{kind},{p},{q},{size},{target},{}\n",
            size == target
        ),
        Format::Json => to_json(&json!({
            "n": n,
            "family": family,
            "kind": kind,
            "first": p,
            "second": q,
            "intersection": size,
            "maximum": target,
            "attains": size == target,
            "note": note,
        })),
    };
    Ok(Output::ok(text))
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let fmt = cli.format;
    let limits = limits(cli.max_n_override)?;
    match cli.command {
        Command::Apply {
            kind,
            perm,
            pattern,
            window_start,
            window_len,
        } => cmd_apply(kind.kind.into(), &perm, pattern, window_start, window_len, fmt),
        Command::Table { which } => Ok(cmd_table(which.into(), fmt)),
        Command::Count {
            quantity,
            kind,
            n,
            k,
            mode,
        } => cmd_count(Quantity::new(quantity.into(), kind.kind.into()), n, k, mode, &limits, fmt),
        Command::Verify {
            n_max,
            kinds,
            quantities,
        } => {
            let mut plan = VerifyPlan::new(n_max);
            if !kinds.is_empty() {
                plan.kinds = kinds.into_iter().map(Into::into).collect();
            }
            if !quantities.is_empty() {
                plan.measures = quantities.into_iter().map(Into::into).collect();
            }
            cmd_verify(&plan, &limits, fmt)
        }
        Command::Neighbors {
            kind,
            perm,
            k,
            direction,
            witnesses,
        } => cmd_neighbors(&perm, kind.kind.into(), k, direction.into(), witnesses, &limits, fmt),
        Command::Intersect { kind, perm, other } => {
            let set = intersect_out(&perm, &other, kind.kind.into(), &limits)?;
            Ok(Output::ok(set_output(&set, fmt)))
        }
        Command::Reconstruct { kind, obs_file, k } => cmd_reconstruct(&obs_file, kind.kind.into(), k, &limits, fmt),
        Command::Bound { kind, n, k } => cmd_bound(n, k, kind.kind.into(), fmt),
        Command::CodeSearch { kind, n, k, output } => {
            cmd_code_search(n, k, kind.kind.into(), output.as_deref(), &limits, fmt)
        }
        Command::CodeVerify { code_file } => cmd_code_verify(&code_file, &limits, fmt),
        Command::Witness { n, family, kind } => cmd_witness(n, family.into(), kind.map(Into::into), &limits, fmt),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
