//! The `vcfam` command line.
//!
//! Data goes to stdout (or `--out`); progress, node counts and timings go to
//! stderr. Exit codes: 0 success, 1 verification failure, 2 usage or input
//! error, 3 feasibility cap exceeded.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::constructions::{
    build_fk, cone, covering_witness_family, full_family, hypercube_family, initial_segment_family,
    product,
};
use crate::covering::{is_k_covering_with, unique_face};
use crate::error::Error;
use crate::explore::{explore, rows_to_csv, summarize};
use crate::family::{Parameters, SetFamily};
use crate::io::{family_from_json, family_to_json, read_family, write_family};
use crate::oracle::{oracle_d, oracle_d_enumeration, OracleConfig, DEFAULT_CAP};
use crate::vc::vc_dimension_with;
use crate::verify::{
    lower_bound_certificate, upper_bound_certificate, verify_main_theorem, verify_prop_const,
    Certificate, CertificateKind,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "vcfam", version, about = "Exact VC-dimension of k-covering set families")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write data here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for the searches; every count gives the same data.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,

    /// Largest C(n, s) the exact search accepts.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a family and print it as a canonical family file.
    #[command(subcommand)]
    Construct(Construct),
    /// Decide a covering property.
    #[command(subcommand)]
    Check(Check),
    /// VC-dimension of a family file.
    Vcdim(FamilyArg),
    /// Exact D(k, s, n) by search.
    Oracle(OracleArgs),
    /// Certificates and structural checks.
    #[command(subcommand)]
    Verify(Verify),
    /// Tabulate bounds on D(k, s, n) over a range of n.
    Explore(ExploreArgs),
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// All s-subsets of [n].
    Full {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        s: usize,
    },
    /// Proper initial segments of [n].
    Segments {
        #[arg(short)]
        n: usize,
    },
    /// Products of k-subsets of {0..k} over m coordinates.
    Hypercube {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        m: usize,
    },
    /// The recursive family F_k from base size m.
    Fk {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        k: usize,
    },
    /// A k-covering s-uniform family on [n] with VC-dimension at most k.
    Witness {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        s: usize,
        #[arg(short)]
        n: usize,
    },
    /// Adjoin the point n+1 to every member.
    Cone(FamilyArg),
    /// Replace every point by a block of l points.
    Product {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(short)]
        l: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Check {
    /// Every k-subset of [n] lies in some member.
    Covering {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(short)]
        k: usize,
    },
    /// Every member has a subset that no other member contains.
    Ufp(FamilyArg),
}

#[derive(Args, Debug)]
struct FamilyArg {
    /// Family file (canonical text or JSON mirror); `-` reads stdin.
    #[arg(long)]
    family: PathBuf,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(short)]
    k: usize,
    #[arg(short)]
    s: usize,
    #[arg(short)]
    n: usize,
    /// Score every subfamily instead of branch and bound.
    #[arg(long)]
    fallback_enum: bool,
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// The four structural facts about F_k; -m and -k accept ranges like 2..=8.
    PropConst {
        #[arg(short)]
        m: String,
        #[arg(short)]
        k: String,
    },
    /// Lower and upper certificates for D(k, s, n) = k.
    Certificate {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        s: usize,
        #[arg(short)]
        n: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Both)]
        kind: KindArg,
        /// Also write the witness family to this file.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// D(k, s, n) = k at n = k^2 C(s, k) + k.
    Main {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        s: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Lower,
    Upper,
    Both,
}

#[derive(Args, Debug)]
struct ExploreArgs {
    #[arg(short)]
    k: usize,
    #[arg(short)]
    s: usize,
    /// A value or range: `7`, `3..=9`, `3..10`.
    #[arg(short)]
    n: String,
}

/// Parses `a`, `a..b` or `a..=b`.
pub fn parse_range(text: &str) -> Result<Vec<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad integer `{t}` in `{text}`"));
    if let Some((a, b)) = text.split_once("..=") {
        Ok((num(a)?..=num(b)?).collect())
    } else if let Some((a, b)) = text.split_once("..") {
        Ok((num(a)?..num(b)?).collect())
    } else {
        Ok(vec![num(text)?])
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<bool, Failure>;

struct Ctx<'a> {
    format: Format,
    workers: usize,
    cap: usize,
    data: String,
    diag: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn json<T: Serialize>(&mut self, v: &T) {
        let s = serde_json::to_string_pretty(v).expect("reports serialize");
        self.data.push_str(&s);
        self.data.push('\n');
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.data.push_str(s.as_ref());
        self.data.push('\n');
    }

    fn note(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.diag, "{}", s.as_ref());
    }

    fn oracle_config(&self) -> OracleConfig {
        OracleConfig {
            cap: self.cap,
            workers: self.workers,
        }
    }

    fn no_csv(&self) -> Result<(), Failure> {
        if self.format == Format::Csv {
            Err(Failure::Usage("csv output is only available for `explore`".into()))
        } else {
            Ok(())
        }
    }

    fn emit_family(&mut self, f: &SetFamily) -> Outcome {
        self.no_csv()?;
        match self.format {
            Format::Json => self.line(family_to_json(f)),
            _ => self.data.push_str(&write_family(f)),
        }
        Ok(true)
    }
}

fn load_family(path: &Path) -> Result<SetFamily, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
    };
    let parsed = if text.trim_start().starts_with('{') {
        family_from_json(&text)
    } else {
        read_family(&text)
    };
    parsed.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn elems(m: &crate::mask::SubsetMask) -> String {
    if m.is_empty() {
        "-".to_string()
    } else {
        m.elements().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Runs the command line; `stdout` receives data unless `--out` is given.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{rendered}");
            return EXIT_OK;
        }
    };
    if cli.cap as usize != DEFAULT_CAP {
        let _ = writeln!(stderr, "warning: feasibility cap overridden to {} (default {DEFAULT_CAP})", cli.cap);
    }
    let mut ctx = Ctx {
        format: cli.format,
        workers: cli.workers as usize,
        cap: cli.cap as usize,
        data: String::new(),
        diag: stderr,
    };
    let started = Instant::now();
    let outcome = dispatch(cli.command, &mut ctx);
    let elapsed = started.elapsed();
    let code = match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAIL,
        Err(Failure::Usage(msg)) => {
            ctx.note(format!("error: {msg}"));
            return EXIT_USAGE;
        }
        Err(Failure::Lib(e)) => {
            ctx.note(format!("error: {e}"));
            return match e {
                Error::FeasibilityCapExceeded { .. } => EXIT_CAP,
                _ => EXIT_USAGE,
            };
        }
    };
    ctx.note(format!("wall time: {:.3}s", elapsed.as_secs_f64()));
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &ctx.data).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(ctx.data.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        ctx.note(format!("error: {msg}"));
        return EXIT_USAGE;
    }
    code
}

fn dispatch(command: Command, ctx: &mut Ctx) -> Outcome {
    match command {
        Command::Construct(c) => construct(c, ctx),
        Command::Check(c) => check(c, ctx),
        Command::Vcdim(FamilyArg { family }) => {
            ctx.no_csv()?;
            let f = load_family(&family)?;
            let report = vc_dimension_with(&f, ctx.workers)?;
            match ctx.format {
                Format::Json => ctx.json(&report),
                _ => {
                    ctx.line(report.dimension.to_string());
                    ctx.line(format!("witness {}", elems(&report.witness)));
                    ctx.line(format!("refuted_size {}", report.refuted_size));
                }
            }
            Ok(true)
        }
        Command::Oracle(args) => oracle(args, ctx),
        Command::Verify(v) => verify(v, ctx),
        Command::Explore(args) => explore_cmd(args, ctx),
    }
}

fn construct(c: Construct, ctx: &mut Ctx) -> Outcome {
    let f = match c {
        Construct::Full { n, s } => full_family(n, s)?,
        Construct::Segments { n } => initial_segment_family(n)?,
        Construct::Hypercube { k, m } => hypercube_family(k, m)?,
        Construct::Fk { m, k } => build_fk(m, k)?,
        Construct::Witness { k, s, n } => covering_witness_family(k, s, n)?,
        Construct::Cone(FamilyArg { family }) => cone(&load_family(&family)?)?,
        Construct::Product { family, l } => product(&load_family(&family.family)?, l)?,
    };
    ctx.emit_family(&f)
}

fn check(c: Check, ctx: &mut Ctx) -> Outcome {
    ctx.no_csv()?;
    match c {
        Check::Covering { family, k } => {
            let f = load_family(&family.family)?;
            let report = is_k_covering_with(&f, k, ctx.workers)?;
            match ctx.format {
                Format::Json => ctx.json(&report),
                _ => match report.uncovered {
                    None => ctx.line(format!("PASS {k}-covering")),
                    Some(u) => ctx.line(format!("FAIL {k}-covering uncovered {}", elems(&u))),
                },
            }
            Ok(report.holds)
        }
        Check::Ufp(FamilyArg { family }) => {
            let f = load_family(&family)?;
            let report = unique_face(&f);
            match ctx.format {
                Format::Json => ctx.json(&report),
                _ => {
                    match report.violator {
                        None => ctx.line("PASS unique-face"),
                        Some(v) => ctx.line(format!("FAIL unique-face violator {}", elems(&v))),
                    }
                    for face in &report.faces {
                        ctx.line(format!("face {} : {}", elems(&face.member), elems(&face.face)));
                    }
                }
            }
            Ok(report.holds)
        }
    }
}

#[derive(Serialize)]
struct OracleOut<'a> {
    params: Parameters,
    value: usize,
    method: &'a str,
    witness: &'a SetFamily,
}

fn oracle(args: OracleArgs, ctx: &mut Ctx) -> Outcome {
    ctx.no_csv()?;
    let params = Parameters::new(args.k, args.s, args.n)?;
    let config = ctx.oracle_config();
    let result = if args.fallback_enum {
        oracle_d_enumeration(&params, &config)?
    } else {
        oracle_d(&params, &config)?
    };
    ctx.note(format!("nodes explored: {}", result.nodes_explored));
    match ctx.format {
        Format::Json => ctx.json(&OracleOut {
            params,
            value: result.value,
            method: result.method.as_str(),
            witness: &result.witness,
        }),
        _ => {
            ctx.line(result.value.to_string());
            ctx.line(format!("method {}", result.method.as_str()));
            ctx.data.push_str(&write_family(&result.witness));
        }
    }
    Ok(true)
}

fn certificate_line(c: &Certificate) -> String {
    let Parameters { k, s, n } = c.params;
    let state = if c.holds { "HOLDS" } else { "DOES-NOT-HOLD" };
    let mut line = match c.kind {
        CertificateKind::LowerVcGeK => format!(
            "{state} {} ({k},{s},{n}): sum_{{i<k}} C(n,i) = {} < ceil(C(n,k)/C(s,k)) = {}",
            c.kind.as_str(),
            c.inequality_lhs,
            c.inequality_rhs
        ),
        CertificateKind::UpperVcLeK => format!(
            "{state} {} ({k},{s},{n}): vc(witness) = {} <= k = {}",
            c.kind.as_str(),
            c.inequality_lhs,
            c.inequality_rhs
        ),
    };
    if let Some(suff) = &c.sufficient {
        let _ = write!(
            line,
            "; k*C(n,k-1) = {} < C(n,k)/C(s,k) = {} {}",
            suff.lhs,
            suff.rhs,
            if suff.holds { "holds" } else { "fails" }
        );
    }
    if let Some(p) = &c.witness_file {
        let _ = write!(line, "; witness {}", p.display());
    }
    line
}

fn verify(v: Verify, ctx: &mut Ctx) -> Outcome {
    ctx.no_csv()?;
    match v {
        Verify::PropConst { m, k } => {
            let ms = parse_range(&m).map_err(Failure::Usage)?;
            let ks = parse_range(&k).map_err(Failure::Usage)?;
            let mut reports = Vec::new();
            for &m in &ms {
                for &k in &ks {
                    reports.push(verify_prop_const(m, k)?);
                }
            }
            let all = reports.iter().all(|r| r.passed());
            match ctx.format {
                Format::Json => ctx.json(&reports),
                _ => {
                    for r in &reports {
                        for item in &r.items {
                            let tag = if item.vacuous { " (vacuous)" } else { "" };
                            ctx.line(format!(
                                "{} m={} k={} item {}{tag}: {}",
                                verdict(item.passed),
                                r.m,
                                r.k,
                                item.item,
                                item.detail
                            ));
                        }
                    }
                    ctx.line(format!("{} prop-const ({} parameter pairs)", verdict(all), reports.len()));
                }
            }
            Ok(all)
        }
        Verify::Certificate { k, s, n, kind, witness } => {
            let mut certs = Vec::new();
            if kind != KindArg::Upper {
                certs.push(lower_bound_certificate(k, s, n)?);
            }
            if kind != KindArg::Lower {
                let (mut cert, family) = upper_bound_certificate(k, s, n)?;
                if let Some(path) = witness {
                    std::fs::write(&path, write_family(&family))
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    cert.witness_file = Some(path);
                }
                certs.push(cert);
            }
            let all = certs.iter().all(|c| c.holds);
            match ctx.format {
                Format::Json => ctx.json(&certs),
                _ => {
                    for c in &certs {
                        ctx.line(certificate_line(c));
                    }
                    ctx.line(format!("{} certificate ({k},{s},{n})", verdict(all)));
                }
            }
            Ok(all)
        }
        Verify::Main { k, s } => {
            let r = verify_main_theorem(k, s)?;
            match ctx.format {
                Format::Json => ctx.json(&r),
                _ => {
                    ctx.line(certificate_line(&r.lower));
                    ctx.line(certificate_line(&r.upper));
                    ctx.line(format!("witness vc {}", r.witness_vc));
                    let claim = if r.holds {
                        format!("D({k},{s},{}) = {k}", r.n)
                    } else {
                        format!("D({k},{s},{}) = {k} not established", r.n)
                    };
                    ctx.line(format!("{} main {claim}", verdict(r.holds)));
                }
            }
            Ok(r.holds)
        }
    }
}

#[derive(Serialize)]
struct ExploreOut<'a> {
    rows: &'a [crate::explore::ExplorationRow],
    summary: crate::explore::ExplorationSummary,
}

fn explore_cmd(args: ExploreArgs, ctx: &mut Ctx) -> Outcome {
    let ns = parse_range(&args.n).map_err(Failure::Usage)?;
    let rows = explore(args.k, args.s, ns, &ctx.oracle_config())?;
    let consistent = rows.iter().all(|r| r.consistent());
    let summary = summarize(&rows);
    match ctx.format {
        Format::Csv => ctx.data.push_str(&rows_to_csv(&rows)),
        Format::Json => ctx.json(&ExploreOut {
            rows: &rows,
            summary,
        }),
        Format::Text => {
            ctx.line(format!("{:>3} {:>3} {:>4} {:>5} {:>5} {:>5}  method", "k", "s", "n", "lower", "upper", "exact"));
            for r in &rows {
                let exact = r.exact.map_or("-".to_string(), |v| v.to_string());
                ctx.line(format!(
                    "{:>3} {:>3} {:>4} {:>5} {:>5} {:>5}  {}",
                    r.k,
                    r.s,
                    r.n,
                    r.lower,
                    r.upper,
                    exact,
                    r.method.as_str()
                ));
            }
            let stab = summary.stab_upper.map_or("none in range".to_string(), |n| n.to_string());
            ctx.line(format!("stab_upper {stab}"));
            ctx.line(format!(
                "monotone {}{}",
                summary.monotone,
                summary
                    .non_monotone_pairs
                    .iter()
                    .map(|(a, b)| format!(" ({a},{b})"))
                    .collect::<String>()
            ));
            let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
            ctx.line(format!("attained {}", list(&summary.attained)));
            ctx.line(format!("missing_below_k {}", list(&summary.missing_below_k)));
        }
    }
    if !consistent {
        ctx.note("error: a row violates lower <= exact <= upper");
    }
    Ok(consistent)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["vcfam"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("7").unwrap(), vec![7]);
        assert_eq!(parse_range("3..=5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_range("3..5").unwrap(), vec![3, 4]);
        assert!(parse_range("x..5").is_err());
    }

    #[test]
    fn construct_full_prints_family() {
        let (code, out, _) = run_capture(&["construct", "full", "-n", "3", "-s", "2"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "vcfam 1\nn=3 s=2\n1 2\n1 3\n2 3\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["oracle", "-k", "2", "-s", "3", "-n", "7"]).0, EXIT_CAP);
        assert_eq!(run_capture(&["oracle", "-k", "3", "-s", "2", "-n", "7"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
        assert_eq!(run_capture(&["construct", "full", "-n", "3", "-s", "2", "--format", "csv"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["vcdim", "--family", "/nonexistent/file"]).0, EXIT_USAGE);
    }

    #[test]
    fn oracle_prints_value_then_witness() {
        let (code, out, err) = run_capture(&["oracle", "-k", "1", "-s", "2", "-n", "4"]);
        assert_eq!(code, EXIT_OK);
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("1"));
        assert_eq!(lines.next(), Some("method branch-and-bound"));
        let rest: String = lines.map(|l| format!("{l}\n")).collect();
        assert!(read_family(&rest).is_ok());
        assert!(err.contains("nodes explored"));
    }

    #[test]
    fn verify_main_passes() {
        let (code, out, _) = run_capture(&["verify", "main", "-k", "2", "-s", "3"]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.ends_with("PASS main D(2,3,14) = 2\n"));
    }

    #[test]
    fn failing_check_exits_one() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pairs.vcfam");
        std::fs::write(&path, "vcfam 1\nn=4 s=2\n1 2\n3 4\n").unwrap();
        let p = path.to_str().unwrap();
        let (code, out, _) = run_capture(&["check", "covering", "--family", p, "-k", "2"]);
        assert_eq!((code, out.as_str()), (EXIT_FAIL, "FAIL 2-covering uncovered 1 3\n"));
        let (code, out, _) = run_capture(&["check", "ufp", "--family", p]);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("PASS unique-face\nface 1 2 : 1\n"));
    }
}
