//! Command-line front end. Exit codes: 0 success, 1 negative verdict
//! (non-member, failed identity, witness found, invalid certificate),
//! 2 usage or input error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::ideals::{builtin_ideal, custom_ideal, IdealKind, RRIdeal, Witness, WitnessSearch};
use crate::matrix::MatrixExact;
use crate::ncpoly::{Family, Letter, NcPoly};
use crate::point::{PointExact, StarRule};
use crate::positivity::{gram_constraints, verify_certificate, Cofactor, SohsCertificate};
use crate::ratexpr::{format_expression, parse_expression, parse_polynomial, RatExpr};
use crate::realization::{compile, Basepoint};
use crate::sampler::{falsify_with, stream_rng, trial_stream, DomainKind, FalsifyMode, SampleDomain, Target};
use crate::scalar::Scalar;
use crate::selftest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "ncnull",
    version,
    about = "Noncommutative rational functions, ideal membership and matrix Nullstellensatz tools"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Evaluate a polynomial or expression at an exact point.
    Eval,
    /// Compile an expression about a basepoint and list series coefficients.
    Expand,
    /// Decide whether an expression is a rational identity.
    ZeroTest,
    /// Decide ideal membership, with a counterexample for non-members.
    Member,
    /// Matrix size from the Nullstellensatz bound for a polynomial.
    Bound,
    /// Draw a random point of an ideal's zero set.
    Sample,
    /// Search for a point where a polynomial or expression is nonzero.
    Falsify,
    /// Check a sum-of-squares certificate.
    VerifySohs,
    /// Write the Gram matrix constraint system of a polynomial.
    GramExport,
    /// Run the built-in acceptance checks.
    Selftest,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Nonzero,
    NegativeEigenvalue,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Opts {
    /// Built-in ideal: T', S', U', CommInv, T, S, U.
    #[arg(long, global = true)]
    pub ideal: Option<String>,
    /// Custom ideal as JSON.
    #[arg(long, global = true, conflicts_with = "ideal")]
    pub ideal_file: Option<PathBuf>,
    /// Number of letters per family.
    #[arg(long, global = true)]
    pub g: Option<usize>,
    #[arg(long, global = true)]
    pub poly: Option<String>,
    #[arg(long, global = true, conflicts_with = "poly")]
    pub expr: Option<String>,
    /// `scalar:v1,v2,...`, `scalar:X1=v,...`, a JSON object of matrices, or a JSON file.
    #[arg(long, global = true)]
    pub basepoint: Option<String>,
    #[arg(long, global = true)]
    pub size: Option<usize>,
    /// Inclusive range `a..b` or a single size.
    #[arg(long, global = true)]
    pub sizes: Option<String>,
    #[arg(long, global = true, default_value_t = 200)]
    pub trials: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, global = true)]
    pub json: bool,
    /// Series length for `expand`.
    #[arg(long, global = true, default_value_t = 3)]
    pub order: usize,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Nonzero)]
    pub mode: ModeArg,
    /// Certificate JSON for `verify-sohs`.
    #[arg(long, global = true)]
    pub cert: Option<PathBuf>,
    /// Half degree `d` for `gram-export`.
    #[arg(long, global = true)]
    pub d: Option<usize>,
    /// Ideal part `q` subtracted before `gram-export`.
    #[arg(long, global = true)]
    pub remainder: Option<String>,
    /// Output file for `gram-export`; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// Parses `argv` and runs the command, writing results to `out`.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    match execute(cli.command, &cli.opts, out) {
        Ok(code) => code,
        Err(msg) => {
            if cli.opts.json {
                let _ = writeln!(out, "{}", json!({ "error": msg }));
            } else {
                let _ = writeln!(out, "error: {msg}");
            }
            EXIT_USAGE
        }
    }
}

type Res<T> = Result<T, String>;

fn err<E: ToString>(e: E) -> String {
    e.to_string()
}

struct Report {
    json: Value,
    text: String,
    code: i32,
}

fn emit(out: &mut dyn Write, opts: &Opts, r: Report) -> Res<i32> {
    if opts.json {
        writeln!(out, "{}", r.json).map_err(err)?;
    } else {
        writeln!(out, "{}", r.text.trim_end()).map_err(err)?;
    }
    Ok(r.code)
}

fn execute(cmd: Command, opts: &Opts, out: &mut dyn Write) -> Res<i32> {
    let report = match cmd {
        Command::Eval => cmd_eval(opts)?,
        Command::Expand => cmd_expand(opts)?,
        Command::ZeroTest => cmd_zero_test(opts)?,
        Command::Member => cmd_member(opts)?,
        Command::Bound => cmd_bound(opts)?,
        Command::Sample => cmd_sample(opts)?,
        Command::Falsify => cmd_falsify(opts)?,
        Command::VerifySohs => cmd_verify_sohs(opts)?,
        Command::GramExport => return cmd_gram_export(opts, out),
        Command::Selftest => cmd_selftest(),
    };
    emit(out, opts, report)
}

fn load_ideal(opts: &Opts) -> Res<Option<RRIdeal>> {
    if let Some(path) = &opts.ideal_file {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        return custom_ideal(&text).map(Some).map_err(err);
    }
    let Some(name) = &opts.ideal else { return Ok(None) };
    let kind: IdealKind = name.parse()?;
    let g = match (opts.g, kind.fixed_g()) {
        (Some(g), _) => g,
        (None, Some(g)) => g,
        (None, None) => return Err(format!("--g is required for ideal {kind}")),
    };
    builtin_ideal(kind, g).map(Some).map_err(err)
}

fn require_ideal(opts: &Opts) -> Res<RRIdeal> {
    load_ideal(opts)?.ok_or_else(|| "--ideal or --ideal-file is required".into())
}

/// Alphabet size: the ideal's when one is given, else `--g`, else the
/// largest index in the input text.
fn alphabet(opts: &Opts, ideal: Option<&RRIdeal>, text: &str) -> usize {
    ideal.map(RRIdeal::g).or(opts.g).unwrap_or_else(|| max_index(text).max(1))
}

fn max_index(text: &str) -> usize {
    let mut best = 0;
    let chars: Vec<char> = text.chars().collect();
    for (i, c) in chars.iter().enumerate() {
        if *c == 'X' || *c == 'Y' {
            let digits: String = chars[i + 1..].iter().take_while(|d| d.is_ascii_digit()).collect();
            best = best.max(digits.parse().unwrap_or(0));
        }
    }
    best
}

fn require_poly(opts: &Opts, ideal: Option<&RRIdeal>) -> Res<NcPoly> {
    let text = opts.poly.as_deref().ok_or("--poly is required")?;
    parse_polynomial(text, alphabet(opts, ideal, text)).map_err(err)
}

enum Input {
    Poly(NcPoly),
    Expr(RatExpr),
}

fn require_input(opts: &Opts, ideal: Option<&RRIdeal>) -> Res<Input> {
    match (&opts.poly, &opts.expr) {
        (Some(_), _) => Ok(Input::Poly(require_poly(opts, ideal)?)),
        (None, Some(text)) => parse_expression(text, alphabet(opts, ideal, text)).map(Input::Expr).map_err(err),
        (None, None) => Err("--poly or --expr is required".into()),
    }
}

fn parse_sizes(opts: &Opts, default: RangeInclusive<usize>) -> Res<RangeInclusive<usize>> {
    let Some(text) = &opts.sizes else {
        return Ok(opts.size.map_or(default, |s| s..=s));
    };
    let bad = || format!("bad --sizes `{text}`");
    let range = match text.split_once("..") {
        Some((a, b)) => {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            a..=b
        }
        None => {
            let s: usize = text.trim().parse().map_err(|_| bad())?;
            s..=s
        }
    };
    if *range.start() == 0 || range.is_empty() {
        return Err(bad());
    }
    Ok(range)
}

/// Basepoint from `--basepoint`; scalar values without letters bind the `X`
/// letters of `letters` in order, or all of them when a single value is given.
fn parse_basepoint(text: &str, letters: &[Letter]) -> Res<Arc<Basepoint>> {
    if let Some(rest) = text.strip_prefix("scalar:") {
        let items: Vec<&str> = rest.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let mut pairs = Vec::new();
        if items.iter().all(|s| s.contains('=')) {
            for item in &items {
                let (l, v) = item.split_once('=').expect("checked");
                let letter = Letter::parse(l).ok_or_else(|| format!("bad letter `{l}`"))?;
                pairs.push((letter, parse_scalar(v)?));
            }
        } else {
            let values = items.iter().map(|v| parse_scalar(v)).collect::<Res<Vec<_>>>()?;
            let vars: Vec<Letter> = letters.iter().filter(|l| !l.starred).copied().collect();
            match values.len() {
                1 => pairs.extend(vars.iter().map(|l| (*l, values[0].clone()))),
                n if n == vars.len() => pairs.extend(vars.iter().copied().zip(values)),
                n => return Err(format!("{n} basepoint values for {} letters", vars.len())),
            }
        }
        return Ok(Basepoint::scalar(pairs));
    }
    let json_text = if text.trim_start().starts_with('{') {
        text.to_string()
    } else {
        std::fs::read_to_string(text).map_err(|e| format!("{text}: {e}"))?
    };
    let map: BTreeMap<String, Value> = serde_json::from_str(&json_text).map_err(err)?;
    let mut pairs = Vec::new();
    for (name, v) in &map {
        let letter = Letter::parse(name).ok_or_else(|| format!("bad letter `{name}`"))?;
        let m = match v {
            Value::Array(rows) => matrix_from_rows(rows)?,
            _ => MatrixExact::from_json(v).map_err(err)?,
        };
        pairs.push((letter, m));
    }
    Basepoint::new(pairs).map_err(err)
}

/// Nested rows of rational strings or integers.
fn matrix_from_rows(rows: &[Value]) -> Res<MatrixExact> {
    let data = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or("matrix rows must be arrays")?
                .iter()
                .map(|x| match x {
                    Value::String(s) => parse_scalar(s),
                    Value::Number(n) => {
                        n.as_i64().map(Scalar::from_int).ok_or_else(|| format!("non-integer entry {n}"))
                    }
                    other => Err(format!("bad entry {other}")),
                })
                .collect::<Res<Vec<_>>>()
        })
        .collect::<Res<Vec<_>>>()?;
    MatrixExact::from_rows(data).map_err(err)
}

fn parse_scalar(text: &str) -> Res<Scalar> {
    let p = parse_polynomial(text, 1).map_err(err)?;
    match p.degree() {
        None => Ok(Scalar::zero()),
        Some(0) => Ok(p.coeff(&crate::ncpoly::Word::empty())),
        _ => Err(format!("`{text}` is not a constant")),
    }
}

fn input_letters(input: &Input) -> Vec<Letter> {
    let set = match input {
        Input::Poly(p) => p.letters(),
        Input::Expr(e) => e.letters(),
    };
    let mut v: Vec<Letter> = set.into_iter().map(Letter::unstarred).collect();
    v.sort();
    v.dedup();
    v
}

fn entry_text(s: &Scalar) -> String {
    let t = s.to_string();
    match t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        Some(inner) => inner.to_string(),
        None => t,
    }
}

fn matrix_text(m: &MatrixExact) -> String {
    (0..m.rows()).map(|i| m.row(i).iter().map(entry_text).collect::<Vec<_>>().join("\t")).collect::<Vec<_>>().join("\n")
}

fn cmd_eval(opts: &Opts) -> Res<Report> {
    let ideal = load_ideal(opts)?;
    let input = require_input(opts, ideal.as_ref())?;
    let bp_text = opts.basepoint.as_deref().ok_or("--basepoint is required")?;
    let bp = parse_basepoint(bp_text, &input_letters(&input))?;
    let point: PointExact = {
        let mut p = bp.to_point();
        if p.rule() != StarRule::Adjoint {
            p = PointExact::from_pairs(StarRule::Adjoint, p.bindings().map(|(l, v)| (*l, v.clone()))).map_err(err)?;
        }
        p
    };
    let value = match &input {
        Input::Poly(p) => p.eval(&point).map_err(err)?,
        Input::Expr(e) => e.eval(&point).map_err(err)?,
    };
    Ok(Report { json: json!({ "value": value.to_json() }), text: matrix_text(&value), code: EXIT_OK })
}

fn expr_input(opts: &Opts) -> Res<(RatExpr, Arc<Basepoint>)> {
    let input = match require_input(opts, None)? {
        Input::Poly(p) => Input::Expr(RatExpr::from_poly(&p)),
        e => e,
    };
    let letters = input_letters(&input);
    let Input::Expr(e) = input else { unreachable!() };
    let bp_text = opts.basepoint.as_deref().ok_or("--basepoint is required")?;
    Ok((e, parse_basepoint(bp_text, &letters)?))
}

fn word_text(bp: &Basepoint, w: &[usize]) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.iter().map(|&k| format!("d{}", bp.letters()[k])).collect::<Vec<_>>().join(" ")
    }
}

fn cmd_expand(opts: &Opts) -> Res<Report> {
    let (e, bp) = expr_input(opts)?;
    let rep = compile(&e, &bp).map_err(err)?;
    let (_, n_min) = rep.minimize_scalar();
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..opts.order {
        layer =
            layer.iter().flat_map(|w: &Vec<usize>| (0..bp.g()).map(move |k| [w.clone(), vec![k]].concat())).collect();
        words.extend(layer.iter().cloned());
    }
    let mut text = format!("dimension {}\nminimal dimension {n_min}\n", rep.dim());
    let mut coeffs = Vec::new();
    for w in &words {
        let c = rep.coefficient(w);
        if c.is_zero() {
            continue;
        }
        let label = word_text(&bp, w);
        text.push_str(&format!("[{label}] {c}\n"));
        coeffs.push(json!({ "word": label, "coefficient": c.to_string() }));
    }
    let json = json!({ "dimension": rep.dim(), "minimal_dimension": n_min, "m": rep.m(), "coefficients": coeffs });
    Ok(Report { json, text, code: EXIT_OK })
}

fn cmd_zero_test(opts: &Opts) -> Res<Report> {
    let (e, bp) = expr_input(opts)?;
    let rep = compile(&e, &bp).map_err(err)?;
    let zero = rep.is_zero();
    let text = if zero { "identity" } else { "not an identity" };
    let json = json!({ "expression": format_expression(&e), "identity": zero, "dimension": rep.dim() });
    Ok(Report { json, text: text.into(), code: if zero { EXIT_OK } else { EXIT_NEGATIVE } })
}

fn search(opts: &Opts) -> WitnessSearch {
    let d = WitnessSearch::default();
    let max_size = parse_sizes(opts, 1..=d.max_size).map_or(d.max_size, |r| *r.end());
    WitnessSearch { seed: opts.seed, trials: opts.trials, max_size, tol: opts.tol, ..d }
}

fn cmd_member(opts: &Opts) -> Res<Report> {
    let ideal = require_ideal(opts)?;
    let f = require_poly(opts, Some(&ideal))?;
    let verdict = ideal.membership(&f, Some(&search(opts))).map_err(err)?;
    let mut text = format!("member: {}", verdict.member);
    let witness = verdict.witness.as_ref().map(|w| match w {
        Witness::Exact { size, point, value } => {
            text.push_str(&format!("\nexact witness at size {size}\nvalue:\n{}", matrix_text(value)));
            let bindings: BTreeMap<String, Value> =
                point.bindings().map(|(l, m)| (l.to_string(), m.to_json())).collect();
            json!({ "kind": "exact", "size": size, "point": bindings, "value": value.to_json() })
        }
        Witness::Numeric(fw) => {
            text.push_str(&format!(
                "\nnumeric witness at size {} (seed {}, trial {}, norm {:e})",
                fw.size, fw.seed, fw.trial, fw.score
            ));
            json!({ "kind": "numeric", "witness": fw, "value": fw.value.to_json() })
        }
    });
    if !verdict.member && witness.is_none() {
        text.push_str("\nno witness found within the search limits");
    }
    let json = json!({ "ideal": ideal.name(), "member": verdict.member, "witness": witness });
    Ok(Report { json, text, code: if verdict.member { EXIT_OK } else { EXIT_NEGATIVE } })
}

fn cmd_bound(opts: &Opts) -> Res<Report> {
    let ideal = require_ideal(opts)?;
    let f = require_poly(opts, Some(&ideal))?;
    let n = ideal.witness_size(&f).map_err(err)?;
    let (u, v) = f.degree_and_terms().map_err(err)?;
    let json = json!({ "ideal": ideal.name(), "size": n, "degree": u, "terms": v, "m": ideal.m(), "n": ideal.n() });
    Ok(Report { json, text: n.to_string(), code: EXIT_OK })
}

fn cmd_sample(opts: &Opts) -> Res<Report> {
    let ideal = load_ideal(opts)?;
    let size = opts.size.ok_or("--size is required")?;
    let mut rng = stream_rng(opts.seed, trial_stream(size, 0));
    let (point, residual) = match &ideal {
        Some(i) => {
            let p = i.sample_point(size, &mut rng).ok_or("sampling failed")?;
            let r = i.residual(&p);
            (p, r)
        }
        None => {
            let d = SampleDomain::new(DomainKind::Unrestricted, opts.g.ok_or("--g or --ideal is required")?)
                .map_err(err)?;
            let p = d.sample_with(size, &mut rng).map_err(err)?;
            (p, 0.0)
        }
    };
    let bindings: BTreeMap<String, Value> = point.bindings().map(|(l, m)| (l.to_string(), m.to_json())).collect();
    let text = format!(
        "sampled {} letters at size {size}, seed {}; generator residual {residual:e}",
        bindings.len(),
        opts.seed
    );
    let json = json!({ "size": size, "seed": opts.seed, "residual": residual, "point": bindings });
    Ok(Report { json, text, code: EXIT_OK })
}

fn cmd_falsify(opts: &Opts) -> Res<Report> {
    let ideal = load_ideal(opts)?;
    let input = require_input(opts, ideal.as_ref())?;
    let sizes = parse_sizes(opts, 1..=8)?;
    let mode = match opts.mode {
        ModeArg::Nonzero => FalsifyMode::Nonzero,
        ModeArg::NegativeEigenvalue => FalsifyMode::NegativeEigenvalue,
    };
    let target = match &input {
        Input::Poly(p) => Target::Poly(p),
        Input::Expr(e) => Target::Expr(e),
    };
    let found = match &ideal {
        Some(i) => falsify_with(target, sizes, opts.trials, opts.seed, mode, opts.tol, |s, rng| i.sample_point(s, rng)),
        None => {
            let g = opts.g.unwrap_or_else(|| input_letters(&input).iter().map(|l| l.index as usize).max().unwrap_or(1));
            let letters = input_letters(&input);
            if letters.iter().any(|l| l.family == Family::Y) {
                return Err("letters Y need an ideal".into());
            }
            let d = SampleDomain::new(DomainKind::Unrestricted, g).map_err(err)?;
            falsify_with(target, sizes, opts.trials, opts.seed, mode, opts.tol, |s, rng| d.sample_with(s, rng).ok())
        }
    };
    let (text, json, code) = match &found {
        Some(w) => (
            format!("witness at size {} (seed {}, trial {}, score {:e})", w.size, w.seed, w.trial, w.score),
            json!({ "found": true, "witness": w, "value": w.value.to_json() }),
            EXIT_NEGATIVE,
        ),
        None => ("no witness found".to_string(), json!({ "found": false }), EXIT_OK),
    };
    Ok(Report { json, text, code })
}

#[derive(Deserialize)]
struct CofactorFile {
    left: String,
    generator: usize,
    right: String,
}

#[derive(Deserialize)]
struct CertFile {
    squares: Vec<String>,
    remainder: String,
    #[serde(default)]
    cofactors: Option<Vec<CofactorFile>>,
}

fn cmd_verify_sohs(opts: &Opts) -> Res<Report> {
    let ideal = require_ideal(opts)?;
    let f = require_poly(opts, Some(&ideal))?;
    let path = opts.cert.as_ref().ok_or("--cert is required")?;
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file: CertFile = serde_json::from_str(&text).map_err(err)?;
    let g = ideal.g();
    let p = |s: &str| parse_polynomial(s, g).map_err(err);
    let cert = SohsCertificate {
        squares: file.squares.iter().map(|s| p(s)).collect::<Res<_>>()?,
        remainder: p(&file.remainder)?,
        cofactors: file
            .cofactors
            .map(|cs| {
                cs.iter()
                    .map(|c| Ok(Cofactor { left: p(&c.left)?, generator: c.generator, right: p(&c.right)? }))
                    .collect::<Res<Vec<_>>>()
            })
            .transpose()?,
    };
    let r = verify_certificate(&f, &cert, &ideal).map_err(err)?;
    let text = format!(
        "valid: {}\nidentity holds: {}\nremainder in ideal: {} ({:?})",
        r.valid, r.identity_holds, r.remainder_in_ideal, r.route
    );
    Ok(Report {
        json: serde_json::to_value(r).map_err(err)?,
        text,
        code: if r.valid { EXIT_OK } else { EXIT_NEGATIVE },
    })
}

fn cmd_gram_export(opts: &Opts, out: &mut dyn Write) -> Res<i32> {
    let ideal = load_ideal(opts)?;
    let f = require_poly(opts, ideal.as_ref())?;
    let g = f.alphabet_size();
    let q = match &opts.remainder {
        Some(t) => parse_polynomial(t, g).map_err(err)?,
        None => NcPoly::zero(g),
    };
    let d = match opts.d {
        Some(d) => d,
        None => f.try_sub(&q).map_err(err)?.degree().unwrap_or(0).div_ceil(2),
    };
    let prob = gram_constraints(&f, d, &q).map_err(err)?;
    let text = prob.to_text();
    let summary = json!({
        "d": d,
        "basis": prob.basis.len(),
        "constraints": prob.constraints.len(),
        "trivially_infeasible": prob.trivially_infeasible(),
    });
    match &opts.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display()))?;
            let line = format!(
                "wrote {} constraints over a basis of {} words to {}",
                prob.constraints.len(),
                prob.basis.len(),
                path.display()
            );
            emit(out, opts, Report { json: summary, text: line, code: EXIT_OK })
        }
        None if opts.json => {
            emit(out, opts, Report { json: json!({ "summary": summary, "system": text }), text, code: EXIT_OK })
        }
        None => {
            write!(out, "{text}").map_err(err)?;
            Ok(EXIT_OK)
        }
    }
}

fn cmd_selftest() -> Report {
    let outcomes = selftest::run_all();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let mut text: String = outcomes.iter().map(|o| format!("{o}\n")).collect();
    text.push_str(&format!("{passed}/{} passed", outcomes.len()));
    let json = json!({ "passed": passed, "total": outcomes.len(), "criteria": outcomes });
    Report { json, text, code: if passed == outcomes.len() { EXIT_OK } else { EXIT_NEGATIVE } }
}
