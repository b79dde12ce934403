//! The `zmetric` command line.
//!
//! Every subcommand prints one envelope:
//!
//! ```json
//! {"command":"lambda","params":{…},"result":21,"elapsed_ms":3,"cap":20}
//! ```
//!
//! `--format text` (the default) prints a short human summary instead, and
//! `--format csv` prints flat rows for `sphere` and `lambda`. Exit status is 0
//! on success, 1 when the library rejects the input and 2 on usage errors.
//!
//! The default exponent cap is read from `ZMETRIC_DEFAULT_CAP` when set.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use zmetric_core::complements::{self, AsymptoticVerdict};
use zmetric_core::gadic;
use zmetric_core::map23::{self, Map23Record};
use zmetric_core::nets::{self, NetSpec, NetVerdict, Stride};
use zmetric_core::wordlen::{self, GeneratingSetSpec, SetKind, WordLengthEngine};
use zmetric_core::{BigInt, EventuallyPeriodicSet, FiniteSet, Window};

/// Environment variable overriding the default exponent cap.
pub const CAP_ENV: &str = "ZMETRIC_DEFAULT_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "zmetric", version, about = "Word metrics on the integers")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Worker threads for parallel sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Canonical signed-digit representation in base g.
    Repr(BaseN),
    /// Word length with respect to {±g^i}.
    Length(BaseN),
    /// Bounded word length for a mixed generating set.
    Wordlen(WordlenArgs),
    /// Integers of length exactly h in a window.
    Sphere(SphereArgs),
    /// Smallest positive integer of length h.
    Lambda(LambdaArgs),
    /// Solutions of 2^a - 3^b = target.
    Dio(DioArgs),
    /// Members of a sphere-union net inside a window.
    NetBuild(NetBuildArgs),
    /// Verify an h-net over a window.
    NetCheck(NetCheckArgs),
    /// Cover certificate for one integer.
    Cover(CoverArgs),
    /// Decide whether C is a (asymptotic) complement to W.
    ComplementCheck(ComplementArgs),
    /// Prune C to a complement that is minimal on a window.
    Prune(PruneArgs),
    /// The length-preserving map from base 2 to base 3.
    Map23(Map23Args),
    /// Distortion witness of the base-2 to base-3 map.
    Distortion(DistortionArgs),
}

fn parse_big(s: &str) -> Result<BigInt, String> {
    s.parse().map_err(|_| format!("{s:?} is not an integer"))
}

fn parse_set(s: &str) -> Result<SetKind, String> {
    s.parse().map_err(|e: zmetric_core::Error| e.to_string())
}

#[derive(Debug, Args, Serialize)]
struct BaseN {
    #[arg(long)]
    base: u32,
    #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
    #[serde(with = "zmetric_core::bigjson")]
    n: BigInt,
}

#[derive(Debug, Args, Serialize)]
struct SetArgs {
    /// `2,3`, `P=2,3,5`, `S(P)=2,3` or `g=4`.
    #[arg(long, value_parser = parse_set)]
    #[serde(serialize_with = "as_display")]
    set: SetKind,
    #[arg(long)]
    cap: Option<u32>,
    #[arg(long, default_value_t = wordlen::DEFAULT_MAX_LENGTH)]
    max_length: usize,
}

fn as_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Args, Serialize)]
struct WordlenArgs {
    #[command(flatten)]
    #[serde(flatten)]
    set: SetArgs,
    #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
    #[serde(with = "zmetric_core::bigjson")]
    n: BigInt,
}

#[derive(Debug, Args, Serialize)]
struct WindowArgs {
    #[arg(long, allow_hyphen_values = true)]
    lo: i64,
    #[arg(long, allow_hyphen_values = true)]
    hi: i64,
}

impl WindowArgs {
    fn window(&self) -> Result<Window, Failure> {
        Window::new(self.lo, self.hi).map_err(Failure::domain)
    }
}

#[derive(Debug, Args, Serialize)]
struct SphereArgs {
    #[command(flatten)]
    #[serde(flatten)]
    set: SetArgs,
    #[arg(long)]
    h: usize,
    #[command(flatten)]
    #[serde(flatten)]
    window: WindowArgs,
}

#[derive(Debug, Args, Serialize)]
struct LambdaArgs {
    #[command(flatten)]
    #[serde(flatten)]
    set: SetArgs,
    #[arg(long)]
    h: usize,
    #[arg(long, default_value_t = 10_000)]
    limit: u64,
}

#[derive(Debug, Args, Serialize)]
struct DioArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_big, allow_hyphen_values = true, required = true)]
    #[serde(with = "zmetric_core::bigjson::vec")]
    targets: Vec<BigInt>,
    #[arg(long, default_value_t = wordlen::DEFAULT_DIOPHANTINE_BOUND)]
    bound: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
enum StrideArg {
    #[value(name = "h+1")]
    #[serde(rename = "h+1")]
    HPlusOne,
    #[value(name = "2h+1")]
    #[serde(rename = "2h+1")]
    TwoHPlusOne,
}

impl From<StrideArg> for Stride {
    fn from(s: StrideArg) -> Self {
        match s {
            StrideArg::HPlusOne => Stride::HPlusOne,
            StrideArg::TwoHPlusOne => Stride::TwoHPlusOne,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct NetArgs {
    #[arg(long)]
    base: u32,
    #[arg(long)]
    h: u32,
    #[arg(long, value_enum, default_value = "2h+1")]
    stride: StrideArg,
}

impl NetArgs {
    fn spec(&self) -> Result<NetSpec, Failure> {
        NetSpec::new(self.base, self.h, self.stride.into()).map_err(Failure::domain)
    }
}

#[derive(Debug, Args, Serialize)]
struct NetBuildArgs {
    #[command(flatten)]
    #[serde(flatten)]
    net: NetArgs,
    #[arg(long, default_value_t = -64, allow_hyphen_values = true)]
    lo: i64,
    #[arg(long, default_value_t = 64, allow_hyphen_values = true)]
    hi: i64,
}

#[derive(Debug, Args, Serialize)]
struct NetCheckArgs {
    #[command(flatten)]
    #[serde(flatten)]
    net: NetArgs,
    #[command(flatten)]
    #[serde(flatten)]
    window: WindowArgs,
    /// Set to check instead of the constructed net (periodic or finite set JSON).
    #[arg(long)]
    set_file: Option<PathBuf>,
    #[arg(long)]
    cap: Option<u32>,
}

#[derive(Debug, Args, Serialize)]
struct CoverArgs {
    #[command(flatten)]
    #[serde(flatten)]
    net: NetArgs,
    #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
    #[serde(with = "zmetric_core::bigjson")]
    n: BigInt,
}

#[derive(Debug, Args, Serialize)]
struct ComplementArgs {
    #[arg(long)]
    w: PathBuf,
    #[arg(long)]
    c: PathBuf,
    #[arg(long)]
    asymptotic: bool,
}

#[derive(Debug, Args, Serialize)]
struct PruneArgs {
    #[arg(long)]
    w: PathBuf,
    #[arg(long)]
    c: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    window: WindowArgs,
}

#[derive(Debug, Args, Serialize)]
struct Map23Args {
    #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
    #[serde(with = "zmetric_core::bigjson")]
    n: BigInt,
    #[arg(long)]
    inverse: bool,
}

#[derive(Debug, Args, Serialize)]
struct DistortionArgs {
    #[arg(long)]
    r: u32,
}

/// Serialized result of one invocation.
#[derive(Debug, Serialize)]
pub struct OutputEnvelope {
    pub command: String,
    pub params: Value,
    pub result: Value,
    pub elapsed_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
}

enum Failure {
    Usage(String),
    Domain(anyhow::Error),
}

impl Failure {
    fn domain(e: impl Into<anyhow::Error>) -> Self {
        Failure::Domain(e.into())
    }
}

struct Outcome {
    result: Value,
    text: String,
    csv: Option<String>,
    cap: Option<u32>,
    window: Option<Window>,
}

impl Outcome {
    fn new(result: impl Serialize, text: String) -> Result<Self, Failure> {
        Ok(Outcome {
            result: serde_json::to_value(result).map_err(Failure::domain)?,
            text,
            csv: None,
            cap: None,
            window: None,
        })
    }
}

/// Parses `argv` (program name first), runs the command and writes the
/// output. Returns the process exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let to_stdout = !e.use_stderr();
            let rendered = e.render().to_string();
            let _ = if to_stdout {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return if to_stdout { 0 } else { 2 };
        }
    };

    let outcome = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Failure::Usage(format!("cannot start {n} threads: {e}"))),
        },
        None => execute(&cli),
    };

    match outcome {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let start = Instant::now();
    let (name, params, outcome) = match &cli.command {
        Command::Repr(a) => ("repr", params(a)?, repr(a)?),
        Command::Length(a) => ("length", params(a)?, length(a)?),
        Command::Wordlen(a) => ("wordlen", params(a)?, wordlen_cmd(a)?),
        Command::Sphere(a) => ("sphere", params(a)?, sphere(a)?),
        Command::Lambda(a) => ("lambda", params(a)?, lambda(a)?),
        Command::Dio(a) => ("dio", params(a)?, dio(a)?),
        Command::NetBuild(a) => ("net-build", params(a)?, net_build(a)?),
        Command::NetCheck(a) => ("net-check", params(a)?, net_check(a)?),
        Command::Cover(a) => ("cover", params(a)?, cover(a)?),
        Command::ComplementCheck(a) => ("complement-check", params(a)?, complement_check(a)?),
        Command::Prune(a) => ("prune", params(a)?, prune(a)?),
        Command::Map23(a) => ("map23", params(a)?, map23_cmd(a)?),
        Command::Distortion(a) => ("distortion", params(a)?, distortion(a)?),
    };
    let envelope = OutputEnvelope {
        command: name.to_string(),
        params,
        result: outcome.result,
        elapsed_ms: start.elapsed().as_millis(),
        cap: outcome.cap,
        window: outcome.window,
    };
    match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string(&envelope).map_err(Failure::domain)?;
            s.push('\n');
            Ok(s)
        }
        Format::Text => Ok(outcome.text),
        Format::Csv => outcome.csv.ok_or_else(|| {
            Failure::Usage(format!(
                "csv output is only available for sphere and lambda, not {name}"
            ))
        }),
    }
}

fn params(args: &impl Serialize) -> Result<Value, Failure> {
    serde_json::to_value(args).map_err(Failure::domain)
}

fn default_cap() -> Result<u32, Failure> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{CAP_ENV}={v:?} is not a valid exponent cap"))),
        Err(_) => Ok(wordlen::DEFAULT_CAP),
    }
}

fn resolve_cap(cap: Option<u32>) -> Result<u32, Failure> {
    cap.map_or_else(default_cap, Ok)
}

fn engine(set: &SetArgs) -> Result<(WordLengthEngine, u32), Failure> {
    let cap = resolve_cap(set.cap)?;
    let spec = GeneratingSetSpec::new(set.set.clone(), cap).with_max_length(set.max_length);
    Ok((WordLengthEngine::new(spec).map_err(Failure::domain)?, cap))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Domain)?;
    serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::Domain)
}

/// A C file may hold either an eventually periodic set or a finite set.
fn read_set(path: &Path) -> Result<EventuallyPeriodicSet, Failure> {
    let value: Value = read_json(path)?;
    if value.get("period").is_some() {
        return serde_json::from_value(value)
            .with_context(|| format!("parsing {}", path.display()))
            .map_err(Failure::Domain);
    }
    let finite: FiniteSet = serde_json::from_value(value)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::Domain)?;
    EventuallyPeriodicSet::finite(finite.elements()).map_err(Failure::domain)
}

fn repr(a: &BaseN) -> Result<Outcome, Failure> {
    let r = gadic::canonical_repr(a.base, &a.n).map_err(Failure::domain)?;
    let len = r.length();
    let text = format!("{} = {r}\nlength {len}\n", a.n);
    Outcome::new(json!({"base": r.base(), "digits": r.digits(), "length": len}), text)
}

fn length(a: &BaseN) -> Result<Outcome, Failure> {
    let len = gadic::length(a.base, &a.n).map_err(Failure::domain)?;
    let n = zmetric_core::bigjson::serialize(&a.n, serde_json::value::Serializer).map_err(Failure::domain)?;
    Outcome::new(json!({"n": n, "length": len}), format!("{len}\n"))
}

fn wordlen_cmd(a: &WordlenArgs) -> Result<Outcome, Failure> {
    let (engine, cap) = engine(&a.set)?;
    let r = engine.word_length(&a.n).map_err(Failure::domain)?;
    let word: Vec<String> = r.witness.iter().map(ToString::to_string).collect();
    let text = format!(
        "length {}{} (cap {cap})\n{} = {}\n",
        r.length,
        if r.capped { ", upper bound under the cap" } else { "" },
        a.n,
        if word.is_empty() { "0".into() } else { word.join(" ") }
    );
    let mut o = Outcome::new(&r, text)?;
    o.cap = Some(cap);
    Ok(o)
}

fn sphere(a: &SphereArgs) -> Result<Outcome, Failure> {
    let (engine, cap) = engine(&a.set)?;
    let window = a.window.window()?;
    let members = engine.sphere(a.h, window).map_err(Failure::domain)?;
    let mut csv = String::from("h,n\n");
    for n in &members {
        let _ = writeln!(csv, "{},{n}", a.h);
    }
    let listed: Vec<String> = members.iter().map(ToString::to_string).collect();
    let text = format!("{} integers of length {}: {}\n", members.len(), a.h, listed.join(" "));
    let mut o = Outcome::new(&members, text)?;
    o.csv = Some(csv);
    o.cap = Some(cap);
    o.window = Some(window);
    Ok(o)
}

fn lambda(a: &LambdaArgs) -> Result<Outcome, Failure> {
    let (engine, cap) = engine(&a.set)?;
    let found = engine.lambda(a.h, a.limit).map_err(Failure::domain)?;
    let text = match found {
        Some(n) => format!("{n}\n"),
        None => format!("none up to {}\n", a.limit),
    };
    let csv = format!(
        "h,lambda\n{},{}\n",
        a.h,
        found.map(|n| n.to_string()).unwrap_or_default()
    );
    let mut o = Outcome::new(found, text)?;
    o.csv = Some(csv);
    o.cap = Some(cap);
    o.window = Some(Window {
        lo: 1,
        hi: i64::try_from(a.limit).unwrap_or(i64::MAX),
    });
    Ok(o)
}

fn dio(a: &DioArgs) -> Result<Outcome, Failure> {
    let found = wordlen::diophantine_search(&a.targets, a.bound);
    let mut text = String::new();
    if found.is_empty() {
        let _ = writeln!(text, "no solutions with exponents up to {}", a.bound);
    }
    for s in &found {
        let _ = writeln!(text, "2^{} - 3^{} = {}", s.a, s.b, s.target);
    }
    let mut o = Outcome::new(&found, text)?;
    o.cap = Some(a.bound);
    Ok(o)
}

fn net_build(a: &NetBuildArgs) -> Result<Outcome, Failure> {
    let spec = a.net.spec()?;
    let window = Window::new(a.lo, a.hi).map_err(Failure::domain)?;
    let members = spec.members_in(window);
    let listed: Vec<String> = members.iter().map(ToString::to_string).collect();
    let text = format!(
        "net with stride {} in base {}: {} members in [{}, {}]\n{}\n",
        spec.stride_value(),
        spec.base,
        members.len(),
        a.lo,
        a.hi,
        listed.join(" ")
    );
    let mut o = Outcome::new(json!({"spec": spec, "members": members}), text)?;
    o.window = Some(window);
    Ok(o)
}

fn net_check(a: &NetCheckArgs) -> Result<Outcome, Failure> {
    let cap = resolve_cap(a.cap)?;
    let window = a.window.window()?;
    let verdict = match &a.set_file {
        Some(path) => {
            let set = read_set(path)?;
            nets::net_check_window(a.net.base, &set, a.net.h, window, cap)
        }
        None => {
            let spec = a.net.spec()?;
            nets::net_check_window(a.net.base, &spec, a.net.h, window, cap)
        }
    }
    .map_err(Failure::domain)?;
    let text = match &verdict {
        NetVerdict::Covered { certificates } => format!("covered ({} certificates)\n", certificates.len()),
        NetVerdict::Counterexample { n } => format!("counterexample {n}\n"),
        NetVerdict::Undecided { n } => format!("undecided at {n} under cap {cap}\n"),
    };
    let mut o = Outcome::new(&verdict, text)?;
    o.cap = Some(cap);
    o.window = Some(window);
    Ok(o)
}

fn cover(a: &CoverArgs) -> Result<Outcome, Failure> {
    let spec = a.net.spec()?;
    let cert = nets::cover_witness(&spec, &a.n).map_err(Failure::domain)?;
    let word: Vec<String> = cert.word.iter().map(ToString::to_string).collect();
    let text = format!("{} = {} {}\n", cert.n, cert.c, word.join(" "));
    Outcome::new(&cert, text)
}

fn complement_check(a: &ComplementArgs) -> Result<Outcome, Failure> {
    let w: FiniteSet = read_json(&a.w)?;
    let c = read_set(&a.c)?;
    if a.asymptotic {
        let verdict = complements::is_asymptotic_complement(&w, &c).map_err(Failure::domain)?;
        let text = match &verdict {
            AsymptoticVerdict::Asymptotic { exceptional } => {
                format!(
                    "asymptotic complement; {} exceptions {exceptional:?}\n",
                    exceptional.len()
                )
            }
            AsymptoticVerdict::NotAsymptotic { tail, residue, modulus } => {
                format!("not asymptotic: {tail:?} tail misses {residue} mod {modulus}\n")
            }
        };
        Outcome::new(&verdict, text)
    } else {
        let yes = complements::is_complement(&w, &c).map_err(Failure::domain)?;
        Outcome::new(json!({"complement": yes}), format!("{yes}\n"))
    }
}

fn prune(a: &PruneArgs) -> Result<Outcome, Failure> {
    let w: FiniteSet = read_json(&a.w)?;
    let c = read_set(&a.c)?;
    let window = a.window.window()?;
    let view = complements::prune_minimal(&w, &c, window).map_err(Failure::domain)?;
    let members = view.members();
    let listed: Vec<String> = members.iter().map(ToString::to_string).collect();
    let text = format!(
        "{} members retained in [{}, {}]\n{}\n",
        members.len(),
        window.lo,
        window.hi,
        listed.join(" ")
    );
    let mut o = Outcome::new(
        json!({
            "members": members,
            "certificates": view.certificates(),
            "exact_region": view.exact_region(),
        }),
        text,
    )?;
    o.window = Some(window);
    Ok(o)
}

fn map23_cmd(a: &Map23Args) -> Result<Outcome, Failure> {
    let rec = if a.inverse {
        Map23Record::inverse(&a.n)
    } else {
        Map23Record::forward(&a.n)
    };
    let text = format!("f({}) = {}  (lengths {} and {})\n", rec.n, rec.f, rec.l2, rec.l3);
    Outcome::new(&rec, text)
}

fn distortion(a: &DistortionArgs) -> Result<Outcome, Failure> {
    let w = map23::distortion_witness(a.r).map_err(Failure::domain)?;
    let text = format!(
        "m = {}, n = {}: d2 = {}, d3(f(m), f(n)) = {}\n",
        w.m, w.nprime, w.d2, w.d3
    );
    Outcome::new(&w, text)
}
