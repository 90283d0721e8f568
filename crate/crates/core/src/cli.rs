//! Command-line front end. Every invocation prints one JSON report with the
//! inputs, the results, named checks, and caveats.
//!
//! Exit status is 0 when every check passes, 1 when a check fails (including
//! computational errors), and 2 on a usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bott::{consecutive_fiber_check, enumerate_chains, resolve_richardson, resolve_schubert};
use crate::error::{Error, Result};
use crate::family::{
    demo_family, enumerate_total_space, relpos_profile, search_family, singular_locus_map, Conditions,
    FamilyJson, FamilyPoint, FiberClass, PolynomialFamily, DEFAULT_SEARCH_ATTEMPTS,
};
use crate::ffgeom::{
    common_basis, is_almost_transverse, is_transverse, opposite_flag, random_flag_with, rank_table,
    relative_position, standard_flag, Budget, Flag, FlagJson, Matrix, PrimeField,
};
use crate::grass::{
    enumerate_grass_schubert, exponent_form, grass_schubert_member, partition_to_vanishing,
    resolve_grass_richardson, schubert_cell_sum, vanishing_to_partition, AdmissiblePartition, GrassPoint,
    Variant, VanishingSequence,
};
use crate::interp::point_count_polynomial;
use crate::perm::{all_permutations, bruhat_leq_oracle, bruhat_lower_set, Permutation, ReducedWord, MAX_ORACLE_DEGREE};
use crate::schubert::{
    enumerate_schubert, enumerate_schubert_cell, richardson_counts, schubert_counts, smooth_locus_check,
    tangent_dimension, ExpectedDims, SchubertDatum,
};

#[derive(Parser, Debug)]
#[command(name = "flagres", version, about = "Schubert, Richardson and Bott-Samelson computations over F_p")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Common {
    /// Prime field size.
    #[arg(long, global = true, default_value_t = 2)]
    p: u32,
    /// Ambient dimension.
    #[arg(long, global = true, default_value_t = 4)]
    n: usize,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum number of objects a single enumeration may produce.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget: u64,
    /// Spaces of indentation in the JSON output; 0 prints one line.
    #[arg(long = "json-indent", global = true, default_value_t = 2)]
    #[serde(skip)]
    json_indent: usize,
    /// First flag: standard, opposite, random, or @file.json.
    #[arg(long, global = true, default_value = "standard")]
    flag: String,
    /// Second flag, same forms as --flag.
    #[arg(long, global = true, default_value = "opposite")]
    flag2: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Permutation utilities.
    #[command(subcommand)]
    Perm(PermCmd),
    /// Relative position of --flag and --flag2.
    Relpos,
    /// Schubert varieties of --flag.
    #[command(subcommand)]
    Schubert(SchubertCmd),
    /// Bott-Samelson resolutions.
    #[command(subcommand)]
    Bs(BsCmd),
    /// Grassmannian Schubert varieties and resolutions.
    #[command(subcommand)]
    Grass(GrassCmd),
    /// One-parameter families of flag pairs.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Cross-prime reports.
    #[command(subcommand)]
    Report(ReportCmd),
}

#[derive(Subcommand, Debug)]
enum PermCmd {
    /// Bruhat comparison sigma <= tau.
    Bruhat {
        #[arg(long)]
        sigma: Permutation,
        #[arg(long)]
        tau: Permutation,
    },
    /// Reduced word of --sigma, or evaluation of --word.
    Word {
        #[arg(long)]
        sigma: Option<Permutation>,
        #[arg(long)]
        word: Option<String>,
    },
    /// Pattern containment.
    Pattern {
        #[arg(long)]
        sigma: Permutation,
        #[arg(long)]
        pattern: Permutation,
    },
}

#[derive(Subcommand, Debug)]
enum SchubertCmd {
    /// List the points of X_sigma (or of the cell with --cell).
    Enumerate {
        #[arg(long)]
        sigma: Permutation,
        #[arg(long)]
        cell: bool,
    },
    /// Count points of X_sigma and of its cell.
    Count {
        #[arg(long)]
        sigma: Permutation,
    },
    /// Tangent dimension of X_sigma at --point (default: the defining flag).
    Tangent {
        #[arg(long)]
        sigma: Permutation,
        #[arg(long)]
        point: Option<String>,
    },
    /// Singular loci of X_sigma(--flag), X_tau(--flag2) and their intersection.
    Smoothlocus {
        #[arg(long)]
        sigma: Permutation,
        #[arg(long)]
        tau: Permutation,
    },
}

#[derive(Subcommand, Debug)]
enum BsCmd {
    /// Resolve X_{evaluate(word)}(--flag) by chains.
    Resolve {
        #[arg(long)]
        word: String,
    },
    /// Resolve X_sigma(--flag) ∩ X_tau(--flag2) by pairs of chains.
    Richardson {
        #[arg(long)]
        word: String,
        #[arg(long)]
        word2: String,
    },
}

#[derive(Subcommand, Debug)]
enum GrassCmd {
    /// Points of the Grassmannian Schubert variety X_lambda(--flag).
    Member {
        #[arg(long)]
        lambda: String,
        /// Rows of a subspace to test, e.g. "1,0,0,0;0,0,1,1".
        #[arg(long)]
        subspace: Option<String>,
    },
    /// Resolve X_lambda(--flag) ∩ X_lambda2(--flag2).
    Resolve {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        lambda2: String,
        #[arg(long, default_value = "chain")]
        variant: Variant,
    },
    /// Lines in P^3 meeting two lines that come together at s = 0.
    Example,
    /// Vanishing sequences, partitions and exponent forms.
    Convert {
        #[arg(long)]
        vanishing: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        d: Option<usize>,
    },
}

#[derive(Args, Debug, Clone)]
struct FamilyConditions {
    #[arg(long)]
    sigma: Option<Permutation>,
    #[arg(long)]
    tau: Option<Permutation>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    lambda2: Option<String>,
}

#[derive(Subcommand, Debug)]
enum FamilyCmd {
    /// The built-in family, almost transverse with index --t at s = 0.
    Demo {
        #[arg(long, default_value_t = 2)]
        t: usize,
    },
    /// Fiberwise relative positions of --family.
    Profile {
        /// demo, search, or @file.json
        #[arg(long, default_value = "demo")]
        family: String,
        #[arg(long, default_value_t = 2)]
        t: usize,
    },
    /// Points of the total space of the given conditions.
    Total {
        #[arg(long, default_value = "demo")]
        family: String,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[command(flatten)]
        conditions: FamilyConditions,
    },
    /// Singular loci of the total space and of both factors.
    Singular {
        #[arg(long, default_value = "demo")]
        family: String,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[command(flatten)]
        conditions: FamilyConditions,
    },
}

#[derive(Subcommand, Debug)]
enum ReportCmd {
    /// Interpolate point counts across --primes and read off degrees.
    Dimension {
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
        primes: Vec<u32>,
        #[arg(long)]
        sigma: Option<Permutation>,
        #[arg(long)]
        tau: Option<Permutation>,
        /// Every permutation (or every pair with --tau-all semantics when --pairs is set).
        #[arg(long)]
        all: bool,
        /// With --all, sweep Richardson pairs instead of single permutations.
        #[arg(long)]
        pairs: bool,
    },
}

/// One named assertion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub expected: Value,
    pub actual: Value,
}

/// The JSON document printed by every command.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub params: Value,
    pub results: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub caveats: Vec<String>,
}

impl Report {
    fn new(command: &str, params: Value) -> Self {
        Self {
            command: command.to_string(),
            params,
            results: BTreeMap::new(),
            checks: Vec::new(),
            caveats: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn result<T: Serialize>(&mut self, key: &str, value: T) {
        self.results.insert(key.to_string(), to_value(value));
    }

    fn expect_eq<T: Serialize + PartialEq>(&mut self, name: &str, expected: T, actual: T) {
        let pass = expected == actual;
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            expected: to_value(expected),
            actual: to_value(actual),
        });
    }

    fn expect_true(&mut self, name: &str, actual: bool) {
        self.expect_eq(name, true, actual);
    }

    fn caveat(&mut self, text: impl Into<String>) {
        let text = text.into();
        if !self.caveats.contains(&text) {
            self.caveats.push(text);
        }
    }

    /// Canonical JSON: keys sorted, `indent` spaces per level (0 for one line).
    pub fn render(&self, indent: usize) -> String {
        let value = to_value(self);
        if indent == 0 {
            return value.to_string();
        }
        let pad = vec![b' '; indent];
        let mut buf = Vec::new();
        let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
        value.serialize(&mut ser).expect("serializing a JSON value cannot fail");
        String::from_utf8(buf).expect("JSON is UTF-8")
    }
}

fn to_value<T: Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// A usage error: bad arguments or unusable input files.
#[derive(Debug)]
pub enum CliError {
    Clap(clap::Error),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Clap(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "usage error: {m}"),
        }
    }
}

/// A completed invocation.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub json: String,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> std::result::Result<Outcome, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(CliError::Clap)?;
    let ctx = Context::new(&cli.common)?;
    let report = dispatch(&ctx, &cli.command)?;
    let json = report.render(cli.common.json_indent);
    Ok(Outcome { report, json })
}

/// Entry point for the binary: prints the report and returns the exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match run(argv) {
        Ok(out) => {
            println!("{}", out.json);
            out.report.exit_code()
        }
        Err(CliError::Clap(e)) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
        Err(e @ CliError::Usage(_)) => {
            eprintln!("{e}");
            2
        }
    }
}

struct Context {
    common: Common,
    field: PrimeField,
    budget: Budget,
}

/// Random stream identifiers, one per consumer of `--seed`.
const STREAM_FLAG: u64 = 1;
const STREAM_FLAG2: u64 = 2;
const STREAM_POINT: u64 = 3;
const STREAM_FAMILY: u64 = 4;

impl Context {
    fn new(common: &Common) -> std::result::Result<Self, CliError> {
        let field = PrimeField::new(common.p).map_err(|e| CliError::Usage(e.to_string()))?;
        if common.n == 0 || common.n > crate::perm::MAX_DEGREE {
            return Err(CliError::Usage(format!("--n must be in 1..={}", crate::perm::MAX_DEGREE)));
        }
        Ok(Self {
            common: common.clone(),
            field,
            budget: Budget(common.budget),
        })
    }

    fn n(&self) -> usize {
        self.common.n
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.common.seed);
        rng.set_stream(stream);
        rng
    }

    fn flag_from(&self, spec: &str, stream: u64) -> std::result::Result<Flag, CliError> {
        let n = self.n();
        match spec {
            "standard" => Ok(standard_flag(n, self.field)),
            "opposite" => Ok(opposite_flag(n, self.field)),
            "random" => Ok(random_flag_with(n, self.field, &mut self.rng(stream))),
            _ => {
                let Some(path) = spec.strip_prefix('@') else {
                    return Err(CliError::Usage(format!(
                        "flag must be standard, opposite, random or @file.json, got {spec:?}"
                    )));
                };
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
                let j: FlagJson = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
                if j.p != self.field.p() || j.n != n {
                    return Err(CliError::Usage(format!(
                        "{path} is a flag in F_{}^{}, expected F_{}^{n}",
                        j.p,
                        j.n,
                        self.field.p()
                    )));
                }
                j.to_flag().map_err(|e| CliError::Usage(format!("{path}: {e}")))
            }
        }
    }

    fn flag(&self) -> std::result::Result<Flag, CliError> {
        self.flag_from(&self.common.flag, STREAM_FLAG)
    }

    fn flag2(&self) -> std::result::Result<Flag, CliError> {
        self.flag_from(&self.common.flag2, STREAM_FLAG2)
    }

    fn perm(&self, sigma: &Permutation) -> std::result::Result<Permutation, CliError> {
        if sigma.degree() != self.n() {
            return Err(CliError::Usage(format!(
                "permutation {sigma} has degree {}, but --n is {}",
                sigma.degree(),
                self.n()
            )));
        }
        Ok(sigma.clone())
    }

    fn word(&self, s: &str) -> std::result::Result<ReducedWord, CliError> {
        if s.trim().is_empty() {
            return Ok(ReducedWord::empty(self.n()));
        }
        ReducedWord::parse(self.n(), s).map_err(|e| CliError::Usage(e.to_string()))
    }

    fn partition(&self, s: &str) -> std::result::Result<AdmissiblePartition, CliError> {
        AdmissiblePartition::parse(s, self.n()).map_err(|e| CliError::Usage(e.to_string()))
    }

    fn family(&self, spec: &str, t: usize) -> std::result::Result<PolynomialFamily, CliError> {
        let usage = |e: Error| CliError::Usage(e.to_string());
        match spec {
            "demo" => demo_family(self.n(), self.field, t).map_err(usage),
            "search" => {
                let seed = rand::RngCore::next_u64(&mut self.rng(STREAM_FAMILY));
                search_family(self.n(), self.field, t, seed, DEFAULT_SEARCH_ATTEMPTS).map_err(usage)
            }
            _ => {
                let Some(path) = spec.strip_prefix('@') else {
                    return Err(CliError::Usage(format!("family must be demo, search or @file.json, got {spec:?}")));
                };
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
                let j: FamilyJson = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
                if j.p != self.field.p() || j.n != self.n() {
                    return Err(CliError::Usage(format!("{path} does not match --p/--n")));
                }
                PolynomialFamily::from_json(&j).map_err(usage)
            }
        }
    }

    fn params(&self, extra: Value) -> Value {
        let mut v = to_value(&self.common);
        if let (Value::Object(base), Value::Object(more)) = (&mut v, extra) {
            base.extend(more);
        }
        v
    }

    fn field_caveat(&self) -> String {
        format!(
            "computed over F_{} by exhaustive enumeration; finite-field point data is a surrogate for scheme-level statements",
            self.field.p()
        )
    }
}

fn dispatch(ctx: &Context, command: &Command) -> std::result::Result<Report, CliError> {
    let (name, params, body): (&str, Value, Body) = match command {
        Command::Perm(c) => perm_command(ctx, c)?,
        Command::Relpos => relpos_command(ctx)?,
        Command::Schubert(c) => schubert_command(ctx, c)?,
        Command::Bs(c) => bs_command(ctx, c)?,
        Command::Grass(c) => grass_command(ctx, c)?,
        Command::Family(c) => family_command(ctx, c)?,
        Command::Report(c) => report_command(ctx, c)?,
    };
    let mut report = Report::new(name, ctx.params(params));
    report.caveat(ctx.field_caveat());
    if let Err(e) = body(&mut report) {
        report.checks.push(Check {
            name: "computation".into(),
            pass: false,
            expected: json!("no error"),
            actual: json!(e.to_string()),
        });
    }
    Ok(report)
}

type Body<'a> = Box<dyn FnOnce(&mut Report) -> Result<()> + 'a>;
type Prepared<'a> = std::result::Result<(&'static str, Value, Body<'a>), CliError>;

fn perm_command<'a>(ctx: &'a Context, c: &'a PermCmd) -> Prepared<'a> {
    match c {
        PermCmd::Bruhat { sigma, tau } => {
            let (s, t) = (ctx.perm(sigma)?, ctx.perm(tau)?);
            let params = json!({"sigma": s, "tau": t});
            Ok(("perm bruhat", params, Box::new(move |r: &mut Report| {
                let leq = s.bruhat_leq(&t)?;
                r.result("leq", leq);
                if s.degree() <= MAX_ORACLE_DEGREE {
                    r.expect_eq("oracle-agreement", bruhat_leq_oracle(&s, &t)?, leq);
                } else {
                    r.caveat(format!("closure oracle only runs for n <= {MAX_ORACLE_DEGREE}"));
                }
                r.expect_eq("inverse-invariance", leq, s.inverse().bruhat_leq(&t.inverse())?);
                Ok(())
            })))
        }
        PermCmd::Word { sigma, word } => {
            let sigma = sigma.as_ref().map(|s| ctx.perm(s)).transpose()?;
            let word = word.as_ref().map(|w| ctx.word(w)).transpose()?;
            if sigma.is_none() && word.is_none() {
                return Err(CliError::Usage("perm word needs --sigma or --word".into()));
            }
            let params = json!({"sigma": sigma, "word": word.as_ref().map(|w| w.letters().to_vec())});
            Ok(("perm word", params, Box::new(move |r: &mut Report| {
                if let Some(s) = &sigma {
                    let w = s.reduced_word();
                    r.result("reduced_word", w.letters());
                    r.result("inversions", s.inversions());
                    r.expect_eq("evaluates-to-sigma", s.clone(), w.evaluate());
                    r.expect_eq("length-equals-inversions", s.inversions(), w.len());
                    if s.degree() <= MAX_ORACLE_DEGREE {
                        let all = s.all_reduced_words();
                        r.result("reduced_word_count", all.len());
                        r.expect_true("all-words-reduced", all.iter().all(|w| w.is_reduced() && w.evaluate() == *s));
                    }
                }
                if let Some(w) = &word {
                    let e = w.evaluate();
                    r.result("evaluates_to", &e);
                    r.result("reduced", w.is_reduced());
                    r.expect_eq("reduced-iff-length-is-inversions", w.len() == e.inversions(), w.is_reduced());
                }
                Ok(())
            })))
        }
        PermCmd::Pattern { sigma, pattern } => {
            let s = ctx.perm(sigma)?;
            let pat = pattern.clone();
            let params = json!({"sigma": s, "pattern": pat});
            Ok(("perm pattern", params, Box::new(move |r: &mut Report| {
                let contains = s.contains_pattern(&pat)?;
                r.result("contains", contains);
                if s.degree() >= 4 {
                    let a: Permutation = "3412".parse()?;
                    let b: Permutation = "4231".parse()?;
                    let avoids = !s.contains_pattern(&a)? && !s.contains_pattern(&b)?;
                    r.result("schubert_smooth", s.schubert_is_smooth());
                    r.expect_eq("smoothness-by-patterns", avoids, s.schubert_is_smooth());
                }
                if s.degree() <= 4 {
                    r.expect_true("contains-itself", s.contains_pattern(&s)?);
                }
                Ok(())
            })))
        }
    }
}

fn relpos_command(ctx: &Context) -> Prepared<'_> {
    let (p, q) = (ctx.flag()?, ctx.flag2()?);
    Ok(("relpos", json!({}), Box::new(move |r: &mut Report| {
        let sigma = relative_position(&p, &q)?;
        let table = rank_table(&p, &q)?;
        r.result("P", &p);
        r.result("Q", &q);
        r.result("relative_position", &sigma);
        r.result("rank_table", table.rows());
        r.result("transverse", is_transverse(&p, &q)?);
        r.result("almost_transverse", is_almost_transverse(&p, &q)?);
        r.expect_eq("inverse-law", sigma.inverse(), relative_position(&q, &p)?);
        r.expect_eq("rank-table-law", sigma.rank_matrix().rows(), table.to_rank_matrix().rows());
        let basis = common_basis(&p, &q)?;
        r.result("common_basis", &basis);
        let field = p.field();
        let n = p.n();
        let mut ok = Matrix::from_data(field, n, n, basis.concat())?.is_invertible();
        for (i, b) in basis.iter().enumerate() {
            let j = sigma.apply(i + 1);
            let inside = |m: &Matrix| m.row_space_contains(b);
            ok &= inside(&p.piece(i + 1)) && !inside(&p.piece(i));
            ok &= inside(&q.piece(j)) && !inside(&q.piece(j - 1));
        }
        r.expect_true("common-basis-witnesses", ok);
        Ok(())
    })))
}

fn lower_set_sum(sigma: &Permutation, q: u64) -> Result<u128> {
    Ok(bruhat_lower_set(sigma)?
        .iter()
        .map(|t| (q as u128).pow(t.inversions() as u32))
        .sum())
}

fn schubert_command<'a>(ctx: &'a Context, c: &'a SchubertCmd) -> Prepared<'a> {
    let q = ctx.field.p() as u64;
    match c {
        SchubertCmd::Enumerate { sigma, cell } => {
            let s = ctx.perm(sigma)?;
            let fixed = ctx.flag()?;
            let cell = *cell;
            Ok(("schubert enumerate", json!({"sigma": s, "cell": cell}), Box::new(move |r: &mut Report| {
                let d = SchubertDatum::new(fixed, s.clone())?;
                let pts = if cell {
                    enumerate_schubert_cell(&d, ctx.budget)?
                } else {
                    enumerate_schubert(&d, ctx.budget)?
                };
                r.result("count", pts.len());
                r.result("points", &pts);
                if cell {
                    r.expect_eq("cell-count", (q as u128).pow(s.inversions() as u32), pts.len() as u128);
                } else if s.degree() <= MAX_ORACLE_DEGREE {
                    r.expect_eq("lower-set-count", lower_set_sum(&s, q)?, pts.len() as u128);
                }
                Ok(())
            })))
        }
        SchubertCmd::Count { sigma } => {
            let s = ctx.perm(sigma)?;
            let fixed = ctx.flag()?;
            Ok(("schubert count", json!({"sigma": s}), Box::new(move |r: &mut Report| {
                let d = SchubertDatum::new(fixed, s.clone())?;
                let variety = enumerate_schubert(&d, ctx.budget)?.len() as u128;
                let cell = enumerate_schubert_cell(&d, ctx.budget)?.len() as u128;
                r.result("variety", variety);
                r.result("cell", cell);
                r.expect_eq("cell-count", (q as u128).pow(s.inversions() as u32), cell);
                if s.degree() <= MAX_ORACLE_DEGREE {
                    r.expect_eq("lower-set-count", lower_set_sum(&s, q)?, variety);
                }
                Ok(())
            })))
        }
        SchubertCmd::Tangent { sigma, point } => {
            let s = ctx.perm(sigma)?;
            let fixed = ctx.flag()?;
            let v = match point.as_deref() {
                None | Some("fixed") => fixed.clone(),
                Some(spec) => ctx.flag_from(spec, STREAM_POINT)?,
            };
            let params = json!({"sigma": s, "point": point.clone().unwrap_or_else(|| "fixed".into())});
            Ok(("schubert tangent", params, Box::new(move |r: &mut Report| {
                let d = SchubertDatum::new(fixed.clone(), s.clone())?;
                let member = crate::schubert::schubert_member(&v, &d)?;
                r.expect_true("membership", member);
                if !member {
                    return Ok(());
                }
                let rep = tangent_dimension(&v, &[d])?;
                let expected = s.inversions();
                r.result("tangent", &rep);
                r.result("expected_dim", expected);
                r.result("singular", rep.is_singular(expected));
                r.caveat(rep.caveat);
                let position = relative_position(&fixed, &v)?;
                if position == s {
                    r.expect_eq("cell-point-dimension", expected, rep.tangent_dim);
                }
                if v == fixed {
                    let n = s.degree();
                    let mut oracle = 0;
                    for i in 1..=n {
                        for j in i + 1..=n {
                            if Permutation::transposition(n, i, j)?.bruhat_leq(&s)? {
                                oracle += 1;
                            }
                        }
                    }
                    r.expect_eq("base-flag-reflection-count", oracle, rep.tangent_dim);
                }
                Ok(())
            })))
        }
        SchubertCmd::Smoothlocus { sigma, tau } => {
            let (s, t) = (ctx.perm(sigma)?, ctx.perm(tau)?);
            let (p, q2) = (ctx.flag()?, ctx.flag2()?);
            Ok(("schubert smoothlocus", json!({"sigma": s, "tau": t}), Box::new(move |r: &mut Report| {
                let expected = ExpectedDims::from_inversions(&s, &t);
                let dp = SchubertDatum::new(p, s.clone())?;
                let dq = SchubertDatum::new(q2, t.clone())?;
                let rep = smooth_locus_check(&dp, &dq, expected, ctx.budget)?;
                r.caveat(rep.caveat);
                r.caveat("expected Richardson dimension is inv(sigma) + inv(tau) - n(n-1)/2; `report dimension` measures it");
                r.result("points", rep.points);
                r.result("singular_sigma", &rep.singular_sigma);
                r.result("singular_tau", &rep.singular_tau);
                r.result("singular_richardson", &rep.singular_richardson);
                r.result("expected", expected);
                r.expect_eq("union-law-violations", 0, rep.violations.len());
                Ok(())
            })))
        }
    }
}

fn bs_command<'a>(ctx: &'a Context, c: &'a BsCmd) -> Prepared<'a> {
    let q1 = ctx.field.p() as u128 + 1;
    match c {
        BsCmd::Resolve { word } => {
            let w = ctx.word(word)?;
            let p = ctx.flag()?;
            Ok(("bs resolve", json!({"word": w.letters()}), Box::new(move |r: &mut Report| {
                let res = resolve_schubert(&p, &w, ctx.budget);
                let res = match res {
                    Err(Error::ResolutionMismatch(m)) => {
                        r.expect_eq("resolution", "consistent".to_string(), m);
                        return Ok(());
                    }
                    other => other?,
                };
                r.result("sigma", &res.sigma);
                r.result("chains", res.chains);
                r.result("image_size", res.image_size());
                r.result("fiber_histogram", res.fiber_histogram());
                let exact = res.fibers.iter().filter(|f| f.exact_position).count();
                r.result("exact_points", exact);
                let d = SchubertDatum::new(p.clone(), res.sigma.clone())?;
                r.expect_eq("image-equals-schubert", enumerate_schubert(&d, ctx.budget)?.len(), res.image_size());
                r.expect_true("exact-fibers-singleton", res.fibers.iter().all(|f| !f.exact_position || f.fiber_size == 1));
                r.expect_eq("cell-size", (q1 - 1).pow(w.len() as u32), exact as u128);
                let total: usize = res.fibers.iter().map(|f| f.fiber_size).sum();
                r.expect_eq("chain-conservation", q1.pow(w.len() as u32), total as u128);
                let chains = enumerate_chains(&p, &w, ctx.budget)?;
                r.expect_true("consecutive-fibers", consecutive_fiber_check(&chains));
                Ok(())
            })))
        }
        BsCmd::Richardson { word, word2 } => {
            let (w1, w2) = (ctx.word(word)?, ctx.word(word2)?);
            let (p, q) = (ctx.flag()?, ctx.flag2()?);
            let params = json!({"word": w1.letters(), "word2": w2.letters()});
            Ok(("bs richardson", params, Box::new(move |r: &mut Report| {
                let res = match resolve_richardson(&p, &w1, &q, &w2, ctx.budget) {
                    Err(Error::ResolutionMismatch(m)) => {
                        r.expect_eq("resolution", "consistent".to_string(), m);
                        return Ok(());
                    }
                    other => other?,
                };
                r.result("sigma", &res.sigma);
                r.result("tau", &res.tau);
                r.result("pairs", res.pairs);
                r.result("image_size", res.image_size());
                r.result("fiber_histogram", res.fiber_histogram());
                let dp = SchubertDatum::new(p.clone(), res.sigma.clone())?;
                let dq = SchubertDatum::new(q.clone(), res.tau.clone())?;
                let expected = crate::schubert::enumerate_richardson(&dp, &dq, ctx.budget)?;
                r.expect_eq("image-equals-richardson", expected.len(), res.image_size());
                r.expect_true("exact-fibers-singleton", res.fibers.iter().all(|f| !f.exact_position || f.fiber_size == 1));
                Ok(())
            })))
        }
    }
}

fn parse_subspace(field: PrimeField, s: &str) -> std::result::Result<Matrix, CliError> {
    let rows = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|e| CliError::Usage(format!("{t:?}: {e}"))))
                .collect::<std::result::Result<Vec<_>, _>>()
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Matrix::from_rows(field, &rows).map_err(|e| CliError::Usage(e.to_string()))
}

fn grass_command<'a>(ctx: &'a Context, c: &'a GrassCmd) -> Prepared<'a> {
    let q = ctx.field.p() as u64;
    match c {
        GrassCmd::Member { lambda, subspace } => {
            let l = ctx.partition(lambda)?;
            let f = ctx.flag()?;
            let point = match subspace {
                Some(s) => Some(
                    GrassPoint::from_matrix(&parse_subspace(ctx.field, s)?)
                        .map_err(|e| CliError::Usage(format!("subspace: {e}")))?,
                ),
                None => None,
            };
            let params = json!({"lambda": l.parts(), "subspace": subspace});
            Ok(("grass member", params, Box::new(move |r: &mut Report| {
                let pts = enumerate_grass_schubert(&f, &l, ctx.budget)?;
                r.result("count", pts.len());
                r.expect_eq("cell-sum", schubert_cell_sum(&l, q), pts.len() as u128);
                if let Some(v) = &point {
                    let m = grass_schubert_member(v, &f, &l)?;
                    r.result("member", m);
                    r.expect_eq("membership-agrees-with-enumeration", pts.contains(v), m);
                }
                Ok(())
            })))
        }
        GrassCmd::Resolve { lambda, lambda2, variant } => {
            let (l1, l2) = (ctx.partition(lambda)?, ctx.partition(lambda2)?);
            let (p, q2) = (ctx.flag()?, ctx.flag2()?);
            let variant = *variant;
            let params = json!({"lambda": l1.parts(), "lambda2": l2.parts(), "variant": variant});
            Ok(("grass resolve", params, Box::new(move |r: &mut Report| {
                let res = match resolve_grass_richardson(&p, &l1, &q2, &l2, variant, ctx.budget) {
                    Err(Error::ResolutionMismatch(m)) => {
                        r.expect_eq("resolution", "consistent".to_string(), m);
                        return Ok(());
                    }
                    other => other?,
                };
                r.result("image_size", res.image_size());
                r.result("total", res.total);
                r.result("fiber_histogram", res.fiber_histogram());
                let first = enumerate_grass_schubert(&p, &l1, ctx.budget)?;
                let mut richardson = Vec::new();
                for v in first {
                    if grass_schubert_member(&v, &q2, &l2)? {
                        richardson.push(v);
                    }
                }
                richardson.sort();
                let mut image: Vec<GrassPoint> = res.fibers.iter().map(|f| f.target.clone()).collect();
                image.sort();
                r.expect_eq("image-equals-richardson", richardson, image);
                r.expect_true("exact-fibers-singleton", res.fibers.iter().all(|f| !f.exact_position || f.fiber_size == 1));
                let sum: usize = res.fibers.iter().map(|f| f.fiber_size).sum();
                r.expect_eq("conservation", res.total, sum);
                Ok(())
            })))
        }
        GrassCmd::Example => {
            if ctx.n() != 4 {
                return Err(CliError::Usage("grass example lives in dimension 4 (--n 4)".into()));
            }
            Ok(("grass example", json!({}), Box::new(move |r: &mut Report| grass_example(ctx.field, ctx.budget, r))))
        }
        GrassCmd::Convert { vanishing, lambda, d } => {
            if vanishing.is_none() && lambda.is_none() {
                return Err(CliError::Usage("grass convert needs --vanishing or --lambda".into()));
            }
            let (vanishing, lambda, d) = (vanishing.clone(), lambda.clone(), *d);
            let n = ctx.n();
            let params = json!({"vanishing": vanishing, "lambda": lambda, "d": d});
            Ok(("grass convert", params, Box::new(move |r: &mut Report| {
                if let Some(v) = &vanishing {
                    let d = d.ok_or_else(|| Error::Parse("--vanishing needs --d".into()))?;
                    let a = VanishingSequence::parse(v, d)?;
                    let l = vanishing_to_partition(&a)?;
                    r.result("partition", l.parts());
                    r.result("exponent_form", exponent_form(&l));
                    r.expect_eq("round-trip", a.clone(), partition_to_vanishing(l.parts(), a.r(), d)?);
                }
                if let Some(ls) = &lambda {
                    let parts: Vec<usize> = ls
                        .split(',')
                        .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
                        .collect::<Result<_>>()?;
                    let l = AdmissiblePartition::new(parts.clone(), n)?;
                    let e = exponent_form(&l);
                    r.result("exponent_form", &e);
                    r.expect_eq("exponent-form-expands", parts.clone(), e.expand(l.r()));
                    if let Some(d) = d {
                        let a = partition_to_vanishing(&parts, parts.len() - 1, d)?;
                        r.result("vanishing", a.values());
                        r.expect_eq("round-trip", parts.clone(), vanishing_to_partition(&a)?.parts().to_vec());
                    }
                }
                Ok(())
            })))
        }
    }
}

/// Lines meeting two lines of `P^3` that meet only over `s = 0`.
fn grass_example(field: PrimeField, budget: Budget, r: &mut Report) -> Result<()> {
    let q = field.p() as usize;
    let fam = demo_family(4, field, 2)?;
    let l = AdmissiblePartition::new(vec![1, 0], 4)?;
    let cond = Conditions::Grass {
        lambda: l.clone(),
        lambda2: l.clone(),
    };
    let (p0, q0) = fam.flags(0);
    let fp = GrassPoint::from_matrix(&p0.piece(2))?;
    let gp = GrassPoint::from_matrix(&q0.piece(2))?;
    let ex = resolve_grass_richardson(&p0, &l, &q0, &l, Variant::Example, budget)?;
    let ch = resolve_grass_richardson(&p0, &l, &q0, &l, Variant::Chain, budget)?;
    r.result("example_fiber_histogram", ex.fiber_histogram());
    r.result("chain_fiber_histogram", ch.fiber_histogram());
    r.expect_eq("special-fiber-count", 2 * q * q + q + 1, ex.image_size());
    r.expect_eq("example-fiber-over-F2", (q + 1) * (q + 1), ex.fiber_over(&fp));
    r.expect_eq("example-fiber-over-G2", (q + 1) * (q + 1), ex.fiber_over(&gp));
    r.expect_eq("chain-fiber-over-F2", q + 1, ch.fiber_over(&fp));
    r.expect_eq("chain-fiber-over-G2", q + 1, ch.fiber_over(&gp));
    let others_singleton = |res: &crate::grass::GrassResolution| {
        res.fibers
            .iter()
            .filter(|f| f.target != fp && f.target != gp)
            .all(|f| f.fiber_size == 1)
    };
    r.expect_true("example-other-fibers-singleton", others_singleton(&ex));
    r.expect_true("chain-other-fibers-singleton", others_singleton(&ch));
    let targets = |res: &crate::grass::GrassResolution| res.fibers.iter().map(|f| f.target.clone()).collect::<Vec<_>>();
    r.expect_true("variants-share-image", targets(&ex) == targets(&ch));
    r.caveat("the chain variant carries no hyperplane data and has P^1 fibers where the example variant has P^1 x P^1");

    let rep = singular_locus_map(&fam, &cond, cond.expected_dims(4), budget)?;
    r.result("fiber_counts", &rep.fiber_counts);
    r.result("tangent_histogram", &rep.tangent_histogram);
    let singular: Vec<&crate::family::TotalSpacePoint> = rep.singular_total.iter().map(|x| &x.point).collect();
    r.result("singular_points", &singular);
    for s in fam.base().skip(1) {
        r.expect_eq(&format!("generic-fiber-count-s{s}"), (q + 1) * (q + 1), rep.fiber_counts[&s]);
    }
    let expected_singular = vec![
        crate::family::TotalSpacePoint { s: 0, v: FamilyPoint::Grass(fp.clone()) },
        crate::family::TotalSpacePoint { s: 0, v: FamilyPoint::Grass(gp.clone()) },
    ];
    let mut expected_sorted = expected_singular.clone();
    expected_sorted.sort();
    let mut actual: Vec<_> = singular.into_iter().cloned().collect();
    actual.sort();
    r.expect_eq("singular-set", expected_sorted, actual);
    r.expect_true("singular-tangent-at-least-4", rep.singular_total.iter().all(|x| x.total >= 4));
    let elsewhere: BTreeMap<usize, usize> = {
        let mut h = rep.tangent_histogram.clone();
        for x in &rep.singular_total {
            if let Some(c) = h.get_mut(&x.total) {
                *c -= 1;
            }
        }
        h.into_iter().filter(|&(_, c)| c > 0).collect()
    };
    r.expect_eq("tangent-elsewhere", vec![3usize], elsewhere.keys().copied().collect::<Vec<_>>());
    r.expect_eq("union-law-violations", 0, rep.violations.len());
    for c in rep.caveats {
        r.caveat(c);
    }
    Ok(())
}

fn conditions(ctx: &Context, c: &FamilyConditions) -> std::result::Result<Conditions, CliError> {
    match (&c.sigma, &c.tau, &c.lambda, &c.lambda2) {
        (Some(s), Some(t), None, None) => Ok(Conditions::Flag {
            sigma: ctx.perm(s)?,
            tau: ctx.perm(t)?,
        }),
        (None, None, Some(a), Some(b)) => Ok(Conditions::Grass {
            lambda: ctx.partition(a)?,
            lambda2: ctx.partition(b)?,
        }),
        _ => Err(CliError::Usage("give either --sigma and --tau or --lambda and --lambda2".into())),
    }
}

fn family_command<'a>(ctx: &'a Context, c: &'a FamilyCmd) -> Prepared<'a> {
    match c {
        FamilyCmd::Demo { t } => {
            let fam = ctx.family("demo", *t)?;
            let t = *t;
            Ok(("family demo", json!({"t": t}), Box::new(move |r: &mut Report| {
                r.result("family", fam.to_json());
                let prof = relpos_profile(&fam)?;
                r.expect_true("demo-pattern", prof.matches_demo_pattern(t));
                r.result("profile", prof);
                r.caveat(crate::family::PROFILE_CAVEAT);
                Ok(())
            })))
        }
        FamilyCmd::Profile { family, t } => {
            let fam = ctx.family(family, *t)?;
            Ok(("family profile", json!({"family": family, "t": t}), Box::new(move |r: &mut Report| {
                let prof = relpos_profile(&fam)?;
                let mut consistent = true;
                for fp in &prof.fibers {
                    let (a, b) = fam.flags(fp.s);
                    let expected = if is_transverse(&a, &b)? {
                        FiberClass::Transverse
                    } else if let Some(t) = is_almost_transverse(&a, &b)? {
                        FiberClass::AlmostTransverse { t }
                    } else {
                        FiberClass::Other
                    };
                    consistent &= expected == fp.class;
                }
                r.expect_true("classification-consistent", consistent);
                r.result("versal_pattern", prof.is_versal_pattern());
                r.result("family", fam.to_json());
                r.result("profile", prof);
                r.caveat(crate::family::PROFILE_CAVEAT);
                Ok(())
            })))
        }
        FamilyCmd::Total { family, t, conditions: fc } => {
            let fam = ctx.family(family, *t)?;
            let cond = conditions(ctx, fc)?;
            let params = json!({"family": family, "t": t, "conditions": cond});
            Ok(("family total", params, Box::new(move |r: &mut Report| {
                let pts = enumerate_total_space(&fam, &cond, ctx.budget)?;
                let mut per_s: BTreeMap<u32, usize> = fam.base().map(|s| (s, 0)).collect();
                for p in &pts {
                    *per_s.entry(p.s).or_default() += 1;
                }
                r.result("count", pts.len());
                r.result("fiber_counts", &per_s);
                let mut sorted = pts.clone();
                sorted.sort();
                sorted.dedup();
                r.expect_eq("distinct-points", pts.len(), sorted.len());
                Ok(())
            })))
        }
        FamilyCmd::Singular { family, t, conditions: fc } => {
            let fam = ctx.family(family, *t)?;
            let cond = conditions(ctx, fc)?;
            let params = json!({"family": family, "t": t, "conditions": cond});
            Ok(("family singular", params, Box::new(move |r: &mut Report| {
                let expected = cond.expected_dims(fam.n());
                let rep = singular_locus_map(&fam, &cond, expected, ctx.budget)?;
                r.result("expected", expected);
                r.result("fiber_counts", &rep.fiber_counts);
                r.result("tangent_histogram", &rep.tangent_histogram);
                r.result("singular_total", &rep.singular_total);
                r.result("singular_first", rep.singular_first.len());
                r.result("singular_second", rep.singular_second.len());
                r.result("versal_pattern", rep.versal_pattern);
                r.expect_eq("union-law-violations", 0, rep.violations.len());
                for c in rep.caveats {
                    r.caveat(c);
                }
                Ok(())
            })))
        }
    }
}

fn report_command<'a>(ctx: &'a Context, c: &'a ReportCmd) -> Prepared<'a> {
    let ReportCmd::Dimension { primes, sigma, tau, all, pairs } = c;
    let n = ctx.n();
    for &p in primes {
        PrimeField::new(p).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    if n > MAX_ORACLE_DEGREE {
        return Err(CliError::Usage(format!("report dimension supports n <= {MAX_ORACLE_DEGREE}")));
    }
    let sigma = sigma.as_ref().map(|s| ctx.perm(s)).transpose()?;
    let tau = tau.as_ref().map(|s| ctx.perm(s)).transpose()?;
    if !*all && sigma.is_none() {
        return Err(CliError::Usage("give --sigma (and optionally --tau) or --all".into()));
    }
    let (all, pairs) = (*all, *pairs || tau.is_some());
    let params = json!({"primes": primes, "sigma": sigma, "tau": tau, "all": all, "pairs": pairs});
    Ok(("report dimension", params, Box::new(move |r: &mut Report| {
        dimension_report(n, primes, sigma, tau, all, pairs, ctx.budget, r)
    })))
}

#[allow(clippy::too_many_arguments)]
fn dimension_report(
    n: usize,
    primes: &[u32],
    sigma: Option<Permutation>,
    tau: Option<Permutation>,
    all: bool,
    pairs: bool,
    budget: Budget,
    r: &mut Report,
) -> Result<()> {
    let big_n = n * (n - 1) / 2;
    let perms = all_permutations(n)?;
    let mut rows = Vec::new();
    if !pairs {
        let mut counts: BTreeMap<Permutation, BTreeMap<u64, u128>> = BTreeMap::new();
        for &p in primes {
            let field = PrimeField::new(p)?;
            for (s, c) in schubert_counts(&standard_flag(n, field), budget)? {
                counts.entry(s).or_default().insert(p as u64, c);
            }
        }
        let chosen: Vec<Permutation> = if all { perms.clone() } else { sigma.into_iter().collect() };
        for s in chosen {
            let poly = point_count_polynomial(&counts[&s], big_n)?;
            r.expect_eq(&format!("degree-X{s}"), s.inversions(), poly.degree);
            rows.push(json!({"sigma": s, "counts": counts[&s], "polynomial": poly, "formula": poly.to_string()}));
        }
    } else {
        let mut counts: BTreeMap<(Permutation, Permutation), BTreeMap<u64, u128>> = BTreeMap::new();
        for &p in primes {
            let field = PrimeField::new(p)?;
            let table = richardson_counts(&standard_flag(n, field), &opposite_flag(n, field), budget)?;
            for (k, c) in table {
                counts.entry(k).or_default().insert(p as u64, c);
            }
        }
        let chosen: Vec<(Permutation, Permutation)> = match (all, sigma, tau) {
            (true, _, _) => counts.keys().cloned().collect(),
            (false, Some(s), Some(t)) => vec![(s, t)],
            (false, Some(s), None) => vec![(s, Permutation::longest(n)?)],
            _ => Vec::new(),
        };
        let mut supports_codim = true;
        for (s, t) in chosen {
            let Some(c) = counts.get(&(s.clone(), t.clone())) else {
                r.result(&format!("empty-{s}-{t}"), true);
                continue;
            };
            let poly = point_count_polynomial(c, big_n)?;
            let measured = poly.degree;
            let codim_reading = (s.inversions() + t.inversions()).checked_sub(big_n);
            let w = Permutation::longest(n)?;
            let literal = w.compose(&s)?.inversions() + w.compose(&t)?.inversions();
            supports_codim &= Some(measured) == codim_reading;
            r.expect_eq(&format!("degree-R{s},{t}"), codim_reading, Some(measured));
            rows.push(json!({
                "sigma": s, "tau": t, "counts": c, "polynomial": poly, "formula": poly.to_string(),
                "dimension_reading": literal,
                "codimension_reading_dimension": big_n.checked_sub(literal),
            }));
        }
        r.result(
            "readings",
            json!({
                "dimension": "inv(w0 sigma) + inv(w0 tau) is the dimension of R",
                "codimension": "inv(w0 sigma) + inv(w0 tau) is the codimension of R in Fl, so dim R = inv(sigma) + inv(tau) - n(n-1)/2",
                "supported": if supports_codim { "codimension" } else { "neither" },
            }),
        );
    }
    r.result("rows", rows);
    r.caveat("degrees come from interpolating exact point counts; with fewer samples than degree + 1 the base-q digits of the largest count are used and confirmed at every other prime");
    Ok(())
}
