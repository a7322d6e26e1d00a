//! The `qstrange` command line.
//!
//! Every subcommand maps to one library call. Output is an aligned table by
//! default or JSON with `--format json`; JSON payloads carry
//! `"schema": "qstrange/1"`. Exit status is 0 on success, 1 when a check
//! fails (mismatch, falsified divisibility, failed congruence) and 2 on
//! usage errors.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dissection::{dissect, residue_set, verify_theorem, DivisibilityReport};
use crate::error::Error;
use crate::exactpoly::IntPoly;
use crate::fishburn::{scan_congruences, verify_congruence, xi_coeffs};
use crate::partialtheta::{gamma_coeffs, l_value, paired_character, parse_character, twisted_sequence, Character};
use crate::qfamilies::{parse_family, partial_sum, FamilySpec};
use crate::strangematch::{c_array, extraction_identity_check, match_expansion, MatchVerdict};

pub const SCHEMA: &str = "qstrange/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qstrange", version, about = "Exact computations with strange q-series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Worker threads (falls back to QSTRANGE_THREADS).
    #[arg(long, global = true, env = "QSTRANGE_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FamilyArg {
    /// kz, hikami:m=<m>,alpha=<a>, gk:k=<k>, or an inline JSON family.
    #[arg(long)]
    pub family: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// s-dissection of a partial sum.
    Dissect {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        s: u64,
        #[arg(long = "N")]
        n: usize,
    },
    /// Divisibility of the dissection parts by the predicted Pochhammer.
    Verify {
        #[command(flatten)]
        family: FamilyArg,
        /// Built-in name or path to a character JSON file; defaults to the
        /// family's own character.
        #[arg(long = "char")]
        character: Option<String>,
        #[arg(long)]
        s: u64,
        #[arg(long = "N")]
        n: usize,
    },
    /// The residue set S_{a,b,chi}(s).
    Residues {
        #[arg(long = "char")]
        character: String,
        #[arg(long)]
        s: u64,
    },
    /// Compare root-of-unity expansions of a family and a partial theta function.
    Match {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long = "char")]
        character: Option<String>,
        #[arg(long)]
        k: u64,
        /// Power of zeta_k; every j in 0..k when omitted.
        #[arg(long)]
        j: Option<u64>,
        #[arg(long)]
        depth: usize,
    },
    /// L(-n, C) for the twisted sequence of a character.
    Lvalue {
        #[arg(long = "char")]
        character: String,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, default_value_t = 0)]
        j: u64,
        #[arg(long)]
        order: usize,
    },
    /// gamma_0..gamma_depth of the partial theta expansion.
    Gamma {
        #[arg(long = "char")]
        character: String,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, default_value_t = 0)]
        j: u64,
        #[arg(long)]
        depth: usize,
    },
    /// Coefficients of F(1 - q); with --p and --beta, a congruence check.
    Fishburn {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        depth: usize,
        #[arg(long, requires = "beta")]
        p: Option<u64>,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, requires = "p")]
        beta: Option<u64>,
    },
    /// All beta with xi(p^r n - beta) = 0 mod p^r through the given depth.
    Scan {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        depth: usize,
    },
    /// The array C_{l,i,j}(s).
    Carray {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        depth: usize,
    },
    /// Residue extraction identity for a polynomial.
    IdentityCheck {
        /// Comma-separated integer coefficients, lowest degree first, or
        /// polynomial JSON.
        #[arg(long)]
        poly: String,
        #[arg(long)]
        s: u64,
        /// Residue; every i0 in 0..s when omitted.
        #[arg(long)]
        i0: Option<u64>,
        #[arg(long)]
        order: usize,
    },
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

enum Failure {
    Usage(String),
    Check,
    ClosedPipe,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Failure::ClosedPipe;
        }
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<bool, Failure>;

/// Parses `args` (program name first), runs the command writing the report
/// to `out`, and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                eprint!("{e}");
            }
            return code;
        }
    };
    if let Some(n) = cli.threads.filter(|n| *n > 0) {
        // the global pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(&cli, out) {
        Ok(true) => 0,
        Ok(false) | Err(Failure::Check) => 1,
        Err(Failure::ClosedPipe) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, body: &T) -> std::result::Result<(), Failure> {
    let text = serde_json::to_string_pretty(&Envelope { schema: SCHEMA, body })
        .map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn family(arg: &FamilyArg) -> std::result::Result<FamilySpec, Failure> {
    parse_family(&arg.family).map_err(|e| Failure::Usage(format!("--family: {e}")))
}

fn character(spec: &str) -> std::result::Result<Character, Failure> {
    parse_character(spec).map_err(|e| Failure::Usage(format!("--char: {e}")))
}

fn character_for(spec: Option<&str>, fam: &FamilySpec) -> std::result::Result<Character, Failure> {
    match spec {
        Some(s) => character(s),
        None => paired_character(fam)
            .ok_or_else(|| Failure::Usage("--char is required for inline families".into())),
    }
}

fn table(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    writeln!(out, "{}", line(header.to_vec()))?;
    for r in rows {
        writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

fn parse_poly(text: &str) -> std::result::Result<IntPoly, Failure> {
    let t = text.trim();
    if t.starts_with('{') {
        return serde_json::from_str(t).map_err(|e| Failure::Usage(format!("--poly: {e}")));
    }
    let coeffs = t
        .split(',')
        .map(|c| c.trim().parse::<num_bigint::BigInt>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Failure::Usage(format!("--poly: {e}")))?;
    Ok(IntPoly::from_bigints(coeffs))
}

fn print_report(out: &mut dyn Write, fmt: Format, r: &DivisibilityReport) -> std::result::Result<(), Failure> {
    match fmt {
        Format::Json => emit(out, r),
        Format::Table => {
            writeln!(out, "family {}  s = {}  N = {}", r.family, r.s, r.n)?;
            let rows: Vec<Vec<String>> = r
                .rows
                .iter()
                .map(|row| {
                    vec![
                        row.i.to_string(),
                        if row.in_s { "yes".into() } else { "no".into() },
                        row.divisor.clone(),
                        row.verdict.as_str().into(),
                        row.quotient.as_ref().map(|q| q.to_string()).unwrap_or_default(),
                    ]
                })
                .collect();
            table(out, &["i", "in S", "divisor", "verdict", "quotient"], &rows)?;
            Ok(())
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let fmt = cli.format;
    match &cli.command {
        Command::Dissect { family: f, s, n } => {
            let fam = family(f)?;
            if *s == 0 {
                return Err(Failure::Usage("--s must be positive".into()));
            }
            let ps = partial_sum(&fam, *n);
            let d = dissect(&ps.value, *s);
            match fmt {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Body<'a> {
                        family: &'a str,
                        s: u64,
                        #[serde(rename = "N")]
                        n: usize,
                        parts: &'a [IntPoly],
                    }
                    emit(out, &Body { family: fam.label(), s: *s, n: *n, parts: &d.parts })?;
                }
                Format::Table => {
                    writeln!(out, "family {}  s = {s}  N = {n}", fam.label())?;
                    let rows: Vec<Vec<String>> =
                        d.parts.iter().enumerate().map(|(i, p)| vec![i.to_string(), p.to_string()]).collect();
                    table(out, &["i", "A_i(q)"], &rows)?;
                }
            }
            Ok(true)
        }
        Command::Verify { family: f, character: c, s, n } => {
            let fam = family(f)?;
            let chi = character_for(c.as_deref(), &fam)?;
            match verify_theorem(&fam, &chi, *s, *n) {
                Ok(r) => {
                    print_report(out, fmt, &r)?;
                    Ok(true)
                }
                Err(Error::DivisibilityFalsified { i, report, .. }) => {
                    print_report(out, fmt, &report)?;
                    eprintln!("predicted divisibility failed at i = {i}");
                    Err(Failure::Check)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Residues { character: c, s } => {
            let chi = character(c)?;
            if *s == 0 {
                return Err(Failure::Usage("--s must be positive".into()));
            }
            let set: Vec<u64> = residue_set(&chi, *s).into_iter().collect();
            match fmt {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Body<'a> {
                        character: &'a str,
                        s: u64,
                        residues: &'a [u64],
                    }
                    emit(out, &Body { character: chi.name(), s: *s, residues: &set })?;
                }
                Format::Table => {
                    let list: Vec<String> = set.iter().map(u64::to_string).collect();
                    writeln!(out, "S({}, s = {s}) = {{{}}}", chi.name(), list.join(", "))?;
                }
            }
            Ok(true)
        }
        Command::Match { family: f, character: c, k, j, depth } => {
            let fam = family(f)?;
            let chi = character_for(c.as_deref(), &fam)?;
            if *k == 0 {
                return Err(Failure::Usage("--k must be positive".into()));
            }
            let js: Vec<u64> = match j {
                Some(j) => vec![*j % *k],
                None => (0..*k).collect(),
            };
            let reports = js
                .iter()
                .map(|j| match_expansion(&fam, &chi, *k, *j, *depth))
                .collect::<crate::error::Result<Vec<_>>>()?;
            let all = reports.iter().all(|r| r.verdict == MatchVerdict::Match);
            match fmt {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Body<'a, T> {
                        reports: &'a [T],
                    }
                    emit(out, &Body { reports: &reports })?;
                }
                Format::Table => {
                    let rows: Vec<Vec<String>> = reports
                        .iter()
                        .map(|r| {
                            vec![
                                r.family.clone(),
                                r.character.clone(),
                                r.k.to_string(),
                                r.j.to_string(),
                                r.checked_through.to_string(),
                                match r.verdict {
                                    MatchVerdict::Match => "match".into(),
                                    MatchVerdict::Mismatch => {
                                        format!("mismatch at order {}", r.first_mismatch.unwrap_or_default())
                                    }
                                },
                            ]
                        })
                        .collect();
                    table(out, &["family", "character", "k", "j", "through", "verdict"], &rows)?;
                }
            }
            Ok(all)
        }
        Command::Lvalue { character: c, k, j, order } => {
            let chi = character(c)?;
            let seq = twisted_sequence(&chi, *k, *j)?;
            let v = l_value(&seq, *order);
            match fmt {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Body<'a, T> {
                        character: &'a str,
                        k: u64,
                        j: u64,
                        n: usize,
                        value: &'a T,
                    }
                    emit(out, &Body { character: chi.name(), k: *k, j: *j % *k, n: *order, value: &v })?;
                }
                Format::Table => writeln!(out, "L(-{order}, C) = {v}")?,
            }
            Ok(true)
        }
        Command::Gamma { character: c, k, j, depth } => {
            let chi = character(c)?;
            let g = gamma_coeffs(&chi, *k, *j, *depth)?;
            match fmt {
                Format::Json => emit(out, &g)?,
                Format::Table => {
                    let rows: Vec<Vec<String>> =
                        g.coeffs.iter().enumerate().map(|(n, c)| vec![n.to_string(), c.to_string()]).collect();
                    table(out, &["n", "gamma_n"], &rows)?;
                }
            }
            Ok(true)
        }
        Command::Fishburn { family: f, depth, p, r, beta } => {
            let fam = family(f)?;
            if let (Some(p), Some(beta)) = (p, beta) {
                let c = verify_congruence(&fam, *p, *r, *beta, *depth)?;
                match fmt {
                    Format::Json => emit(out, &c)?,
                    Format::Table => match c.witness {
                        None => writeln!(
                            out,
                            "xi({p}^{r} n - {beta}) = 0 mod {p}^{r} through depth {depth} (empirical)"
                        )?,
                        Some((i, v)) => writeln!(out, "counterexample: xi({i}) = {v} mod {p}^{r}")?,
                    },
                }
                return Ok(c.pass);
            }
            let xi = xi_coeffs(&fam, *depth);
            match fmt {
                Format::Json => emit(out, &xi)?,
                Format::Table => {
                    let list: Vec<String> = xi.coeffs.iter().map(|c| c.to_string()).collect();
                    writeln!(out, "[{}]", list.join(","))?;
                }
            }
            Ok(true)
        }
        Command::Scan { family: f, p, r, depth } => {
            let fam = family(f)?;
            let rep = scan_congruences(&fam, *p, *r, *depth)?;
            match fmt {
                Format::Json => emit(out, &rep)?,
                Format::Table => {
                    let b: Vec<String> = rep.passing_beta.iter().map(u64::to_string).collect();
                    let m: Vec<String> = rep.residues.iter().map(u64::to_string).collect();
                    writeln!(out, "family {}  modulus {p}^{r}  depth {depth}", rep.family)?;
                    writeln!(out, "beta:     {{{}}}", b.join(", "))?;
                    writeln!(out, "classes:  {{{}}} mod {p}^{r}", m.join(", "))?;
                    writeln!(out, "status:   {}", rep.status)?;
                }
            }
            Ok(true)
        }
        Command::Carray { s, depth } => {
            if *s == 0 {
                return Err(Failure::Usage("--s must be positive".into()));
            }
            let c = c_array(*s, *depth);
            match fmt {
                Format::Json => emit(out, &c)?,
                Format::Table => {
                    let mut rows = Vec::new();
                    for (l, by_i) in c.table.iter().enumerate() {
                        for (i, vals) in by_i.iter().enumerate() {
                            let v: Vec<String> = vals.iter().map(|x| x.to_string()).collect();
                            rows.push(vec![l.to_string(), i.to_string(), v.join(" ")]);
                        }
                    }
                    table(out, &["l", "i", "C_{l,i,0..l}"], &rows)?;
                }
            }
            Ok(true)
        }
        Command::IdentityCheck { poly, s, i0, order } => {
            let h = parse_poly(poly)?;
            if *s == 0 {
                return Err(Failure::Usage("--s must be positive".into()));
            }
            let residues: Vec<u64> = match i0 {
                Some(i) => vec![*i],
                None => (0..*s).collect(),
            };
            let checks = residues
                .iter()
                .map(|i| extraction_identity_check(&h, *s, *i, *order))
                .collect::<crate::error::Result<Vec<_>>>()?;
            let pass = checks.iter().all(|c| c.pass);
            match fmt {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Body<'a, T> {
                        checks: &'a [T],
                    }
                    emit(out, &Body { checks: &checks })?;
                }
                Format::Table => {
                    let rows: Vec<Vec<String>> = checks
                        .iter()
                        .map(|c| {
                            vec![
                                c.s.to_string(),
                                c.i0.to_string(),
                                c.order.to_string(),
                                if c.pass { "pass".into() } else { format!("fail at q^{}", c.first_difference.unwrap_or_default()) },
                            ]
                        })
                        .collect();
                    table(out, &["s", "i0", "l", "result"], &rows)?;
                }
            }
            Ok(pass)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let mut full = vec!["qstrange"];
        full.extend_from_slice(args);
        let code = run(full, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn fishburn_table() {
        let (code, out) = run_capture(&["fishburn", "--family", "kz", "--depth", "5"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "[1,1,2,5,15,53]");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_capture(&["fishburn", "--family", "zz", "--depth", "5"]).0, 2);
        assert_eq!(run_capture(&["nonsense"]).0, 2);
        assert_eq!(run_capture(&["verify", "--family", "gk:k=1", "--s", "4", "--N", "8"]).0, 2);
    }

    #[test]
    fn mismatch_exits_one() {
        let (code, _) = run_capture(&["match", "--family", "kz", "--char", "chi6", "--k", "1", "--depth", "3"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn json_has_schema() {
        let (code, out) = run_capture(&["residues", "--char", "chi6", "--s", "5", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["residues"], serde_json::json!([0, 1, 3]));
    }
}
