//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 resource limit,
//! 3 input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::anick::{betti, enumerate_chains, Chain};
use crate::barmorse::homology::DEFAULT_CAP as BAR_CAP;
use crate::error::Error;
use crate::hochschild::{self, HhTable, Tau};
use crate::model::{self, ext_table};
use crate::presentation::Presentation;
use crate::report::Report;
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "anick-model", version, about = "Anick chains, minimal models and Hochschild cohomology of monomial algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: RunConfig,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List chains grouped by length and weight.
    Chains { input: PathBuf },
    /// Tabulate chain counts per (degree, weight).
    Betti { input: PathBuf },
    /// Generators of the minimal model and their differentials.
    Model { input: PathBuf },
    /// Nonzero higher products on Ext.
    Ext { input: PathBuf },
    /// Hochschild cohomology dimensions per (degree, weight shift).
    Hh { input: PathBuf },
    /// Run every verification suite and print certificates.
    Verify {
        input: PathBuf,
        /// Flip a sign in the model differential and corrupt the twisting
        /// cochain, as a negative control.
        #[arg(long)]
        sabotage: bool,
    },
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Weight bound; for `hh` either a bound `W` (shifts −W..W) or a range `a..b`.
    #[arg(short = 'w', long = "max-weight", global = true, default_value = "8")]
    pub max_weight: WeightArg,
    #[arg(short = 'n', long = "max-arity", global = true, default_value_t = 4)]
    pub max_arity: usize,
    #[arg(short = 'd', long = "max-degree", global = true, default_value_t = 3)]
    pub max_degree: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, value_enum, default_value_t = Engine::Twisted)]
    pub engine: Engine,
    /// Largest linear-algebra block allowed.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Twisted,
    Classical,
}

/// A weight bound, or an explicit window of weight shifts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightArg {
    Max(usize),
    Range(i64, i64),
}

impl WeightArg {
    pub fn bound(self) -> usize {
        match self {
            WeightArg::Max(w) => w,
            WeightArg::Range(_, b) => b.max(0) as usize,
        }
    }

    pub fn window(self) -> std::ops::RangeInclusive<i64> {
        match self {
            WeightArg::Max(w) => -(w as i64)..=w as i64,
            WeightArg::Range(a, b) => a..=b,
        }
    }
}

impl FromStr for WeightArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("expected a weight `W` or a range `a..b`, got `{s}`");
        match s.split_once("..") {
            Some((a, b)) => {
                let a: i64 = a.trim().parse().map_err(|_| bad())?;
                let b: i64 = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                Ok(WeightArg::Range(a, b))
            }
            None => match s.trim().parse() {
                Ok(0) | Err(_) => Err(bad()),
                Ok(w) => Ok(WeightArg::Max(w)),
            },
        }
    }
}

/// Outcome of one verification suite on one presentation.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub suite: String,
    pub digest: String,
    pub bounds: Bounds,
    pub passed: bool,
    pub checked: usize,
    pub counterexamples: Vec<crate::report::Counterexample>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Bounds {
    pub max_weight: usize,
    pub max_arity: usize,
    pub max_degree: usize,
}

impl Certificate {
    fn new(report: Report, digest: &str, bounds: Bounds) -> Self {
        Certificate {
            passed: report.passed(),
            suite: report.suite,
            digest: digest.to_string(),
            bounds,
            checked: report.checked,
            counterexamples: report.counterexamples,
        }
    }
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok((text, code)) => match emit(&cli.opts, &text) {
            Ok(()) => code,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_INPUT
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit { .. } => EXIT_RESOURCE,
        _ => EXIT_INPUT,
    }
}

fn emit(opts: &RunConfig, text: &str) -> std::io::Result<()> {
    match &opts.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn read_presentation(path: &PathBuf) -> Result<Presentation, Error> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    Ok(text.parse()?)
}

/// Run a parsed command, returning its rendered output and exit code.
pub fn execute(cli: &Cli) -> Result<(String, i32), Error> {
    let o = &cli.opts;
    let w = o.max_weight.bound();
    match &cli.command {
        Command::Chains { input } => {
            let p = read_presentation(input)?;
            Ok((render_chains(&p, &enumerate_chains(&p, w), o.format), EXIT_OK))
        }
        Command::Betti { input } => {
            let p = read_presentation(input)?;
            let t = betti(&p, w);
            let rows: Vec<(usize, usize, u64)> = t.iter().map(|((n, w), c)| (n, w, c)).collect();
            Ok((render_table(&["n", "w", "count"], &rows, o.format), EXIT_OK))
        }
        Command::Model { input } => {
            let p = read_presentation(input)?;
            Ok((render_model(&p, w, o.format), EXIT_OK))
        }
        Command::Ext { input } => {
            let p = read_presentation(input)?;
            Ok((render_ext(&p, w, o.max_arity, o.format), EXIT_OK))
        }
        Command::Hh { input } => {
            let p = read_presentation(input)?;
            let cap = o.cap.unwrap_or(hochschild::DEFAULT_CAP);
            let t = match o.engine {
                Engine::Twisted => hochschild::hh_dims_capped(&p, o.max_degree, o.max_weight.window(), cap)?,
                Engine::Classical => {
                    hochschild::classical_hh_dims_capped(&p, o.max_degree, o.max_weight.window(), cap)?
                }
            };
            Ok((render_hh(&t, o.format), EXIT_OK))
        }
        Command::Verify { input, sabotage } => {
            let p = read_presentation(input)?;
            let certs = verify_all(&p, o, *sabotage)?;
            let code = if certs.iter().all(|c| c.passed) { EXIT_OK } else { EXIT_FAILED };
            Ok((render_certificates(&certs, o.format), code))
        }
    }
}

/// Every verification suite within the configured bounds.
pub fn verify_all(p: &Presentation, o: &RunConfig, sabotage: bool) -> Result<Vec<Certificate>, Error> {
    let w = o.max_weight.bound();
    let bounds = Bounds {
        max_weight: w,
        max_arity: o.max_arity,
        max_degree: o.max_degree,
    };
    let digest = p.digest();
    let rule = if sabotage {
        model::sabotaged_b_sign
    } else {
        model::standard_b_sign
    };
    let tau = if sabotage { sabotaged_tau(p) } else { Tau::canonical() };
    let mut reports = vec![
        verify::betti_vs_homology(p, w, o.cap.unwrap_or(BAR_CAP))?,
        verify::retract_identities(p, w),
        verify::morse_oracle(p, w)?,
        model::verify_transfer_equivalence(p, w, o.max_arity),
        model::verify_b_squared_with(p, w, rule),
        hochschild::check_maurer_cartan_with(p, w, &tau),
    ];
    for r in &mut reports {
        r.counterexamples.sort_by(|a, b| (&a.chain, a.arity, &a.term).cmp(&(&b.chain, b.arity, &b.term)));
    }
    Ok(reports.into_iter().map(|r| Certificate::new(r, &digest, bounds)).collect())
}

/// τ sending the first relation to the unit at its source.
fn sabotaged_tau(p: &Presentation) -> Tau {
    let Some(rel) = p.relations().first() else {
        return Tau::canonical();
    };
    let c = crate::anick::chain_of_word(rel.word(), p).expect("a relation is a 1-chain");
    let v = p.source_of(rel.word());
    Tau::canonical().with_value(c, hochschild::AlgebraElement::single(hochschild::Path::Trivial(v), 1))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn join_usize(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Serialize)]
struct ChainRecord {
    chain: String,
    length: usize,
    weight: usize,
    a: Vec<usize>,
    b: Vec<usize>,
}

fn render_chains(p: &Presentation, chains: &[Chain], format: Format) -> String {
    let records: Vec<ChainRecord> = chains
        .iter()
        .map(|c| {
            let (a, b) = c.interlace();
            ChainRecord {
                chain: c.render(p),
                length: c.length(),
                weight: c.weight(),
                a,
                b,
            }
        })
        .collect();
    match format {
        Format::Json => json(&records),
        Format::Csv => csv_rows(
            &["chain", "length", "weight", "a", "b"],
            records.iter().map(|r| {
                vec![
                    r.chain.clone(),
                    r.length.to_string(),
                    r.weight.to_string(),
                    join_usize(&r.a),
                    join_usize(&r.b),
                ]
            }),
        ),
        Format::Text => {
            let mut out = String::new();
            let mut group = None;
            for r in &records {
                if group != Some((r.length, r.weight)) {
                    group = Some((r.length, r.weight));
                    let _ = writeln!(out, "# length {} weight {}", r.length, r.weight);
                }
                let _ = write!(out, "{} len={} wt={}", r.chain, r.length, r.weight);
                if r.length > 0 {
                    let _ = write!(out, " a=({}) b=({})", join_usize(&r.a), join_usize(&r.b));
                }
                out.push('\n');
            }
            out
        }
    }
}

fn render_table<A: ToString + Serialize, B: ToString + Serialize>(
    header: &[&str; 3],
    rows: &[(A, B, u64)],
    format: Format,
) -> String {
    match format {
        Format::Csv => csv_rows(
            header,
            rows.iter().map(|(a, b, c)| vec![a.to_string(), b.to_string(), c.to_string()]),
        ),
        Format::Json => {
            let v: Vec<serde_json::Value> = rows
                .iter()
                .map(|(a, b, c)| serde_json::json!({ header[0]: a, header[1]: b, header[2]: c }))
                .collect();
            json(&v)
        }
        Format::Text => {
            let mut out = format!("{}\t{}\t{}\n", header[0], header[1], header[2]);
            for (a, b, c) in rows {
                let _ = writeln!(out, "{}\t{}\t{}", a.to_string(), b.to_string(), c);
            }
            out
        }
    }
}

fn render_hh(t: &HhTable, format: Format) -> String {
    let rows: Vec<(usize, i64, u64)> = t.iter().map(|((d, s), c)| (d, s, c)).collect();
    render_table(&["degree", "weight", "dim"], &rows, format)
}

#[derive(Serialize)]
struct ModelTerm {
    sign: i64,
    parts: Vec<String>,
}

#[derive(Serialize)]
struct ModelRecord {
    generator: String,
    weight: usize,
    length: usize,
    terms: Vec<ModelTerm>,
}

fn render_model(p: &Presentation, max_weight: usize, format: Format) -> String {
    let records: Vec<ModelRecord> = enumerate_chains(p, max_weight)
        .iter()
        .map(|c| ModelRecord {
            generator: c.render(p),
            weight: c.weight(),
            length: c.length(),
            terms: model::differential_b(c, p)
                .iter()
                .map(|(parts, k)| ModelTerm {
                    sign: k,
                    parts: parts.iter().map(|g| g.render(p)).collect(),
                })
                .collect(),
        })
        .collect();
    match format {
        Format::Json => json(&records),
        Format::Csv => csv_rows(
            &["generator", "weight", "length", "sign", "parts"],
            records.iter().flat_map(|r| {
                r.terms.iter().map(move |t| {
                    vec![
                        r.generator.clone(),
                        r.weight.to_string(),
                        r.length.to_string(),
                        t.sign.to_string(),
                        t.parts.join("⊗"),
                    ]
                })
            }),
        ),
        Format::Text => {
            let mut out = String::new();
            for r in &records {
                let _ = write!(out, "{} wt={} len={}: b =", r.generator, r.weight, r.length);
                if r.terms.is_empty() {
                    out.push_str(" 0");
                }
                for t in &r.terms {
                    let _ = write!(out, " {}{}", if t.sign > 0 { "+" } else { "-" }, t.parts.join("⊗"));
                    if t.sign.abs() != 1 {
                        let _ = write!(out, "·{}", t.sign.abs());
                    }
                }
                out.push('\n');
            }
            out
        }
    }
}

#[derive(Serialize)]
struct ExtRecord {
    arity: usize,
    factors: Vec<String>,
    sign: i64,
    product: String,
}

fn render_ext(p: &Presentation, max_weight: usize, max_arity: usize, format: Format) -> String {
    let records: Vec<ExtRecord> = ext_table(p, max_weight, max_arity)
        .into_iter()
        .map(|e| ExtRecord {
            arity: e.parts.len(),
            factors: e.parts.iter().map(|c| c.render(p)).collect(),
            sign: e.sign,
            product: e.product.render(p),
        })
        .collect();
    match format {
        Format::Json => json(&records),
        Format::Csv => csv_rows(
            &["arity", "factors", "sign", "product"],
            records.iter().map(|r| {
                vec![
                    r.arity.to_string(),
                    r.factors.join(" "),
                    r.sign.to_string(),
                    r.product.clone(),
                ]
            }),
        ),
        Format::Text => {
            let mut out = String::new();
            for r in &records {
                let args: Vec<String> = r.factors.iter().map(|f| format!("{f}^∨")).collect();
                let sign = if r.sign > 0 { "+" } else { "-" };
                let _ = writeln!(out, "μ{}({}) = {sign}{}^∨", r.arity, args.join(", "), r.product);
            }
            out
        }
    }
}

fn render_certificates(certs: &[Certificate], format: Format) -> String {
    match format {
        Format::Json => json(&certs),
        Format::Csv => csv_rows(
            &["suite", "digest", "passed", "checked", "chain", "arity", "term", "coefficient"],
            certs.iter().flat_map(|c| {
                let head = vec![c.suite.clone(), c.digest.clone(), c.passed.to_string(), c.checked.to_string()];
                if c.counterexamples.is_empty() {
                    vec![[head, vec![String::new(); 4]].concat()]
                } else {
                    c.counterexamples
                        .iter()
                        .map(|x| {
                            let tail = vec![
                                x.chain.clone(),
                                x.arity.map(|n| n.to_string()).unwrap_or_default(),
                                x.term.clone(),
                                x.coefficient.to_string(),
                            ];
                            [head.clone(), tail].concat()
                        })
                        .collect()
                }
            }),
        ),
        Format::Text => {
            let mut out = String::new();
            if let Some(c) = certs.first() {
                let b = c.bounds;
                let _ = writeln!(
                    out,
                    "presentation {} (w ≤ {}, n ≤ {})",
                    &c.digest[..16],
                    b.max_weight,
                    b.max_arity
                );
            }
            for c in certs {
                let status = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "{status} {} ({} checked)", c.suite, c.checked);
                for x in c.counterexamples.iter().take(10) {
                    let _ = writeln!(out, "  {x}");
                }
                if c.counterexamples.len() > 10 {
                    let _ = writeln!(out, "  … {} more", c.counterexamples.len() - 10);
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_arguments() {
        assert_eq!("6".parse::<WeightArg>().unwrap(), WeightArg::Max(6));
        assert_eq!("0..6".parse::<WeightArg>().unwrap(), WeightArg::Range(0, 6));
        assert_eq!("-2..=3".parse::<WeightArg>().unwrap().window(), -2..=3);
        assert!("0".parse::<WeightArg>().is_err());
        assert!("4..1".parse::<WeightArg>().is_err());
    }

    #[test]
    fn bad_flags_are_input_errors() {
        assert_eq!(run(["anick-model", "chains"]), EXIT_INPUT);
        assert_eq!(run(["anick-model", "chains", "/nonexistent", "-w", "3"]), EXIT_INPUT);
    }
}
