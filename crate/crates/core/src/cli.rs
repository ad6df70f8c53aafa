//! Command-line front end. `run` returns the process exit code:
//! 0 success, 1 invalid input, 2 unsupported, 3 internal inconsistency.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluator::{self, EvalResult, ExpSumValue};
use crate::fieldcore::{format_residues, parse_residues, FieldCtx, FieldElem};
use crate::lifts;
use crate::nullity::{self, QuadFunc};
use crate::quadform::{self, DEFAULT_CAP};
use crate::tabulate;

#[derive(Parser, Debug)]
#[command(name = "quadsum", version, about = "Exact exponential sums of quadratic functions over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate S(f, m·n) in closed form.
    Eval(EvalArgs),
    /// Print the splitting exponent and the nullity of every divisor.
    Profile(ProfileArgs),
    /// Regenerate a nullity table over F_p.
    Table(TableArgs),
    /// Compare the closed form with exhaustive summation.
    Verify(VerifyArgs),
    /// Evaluate S(f + bx, m·n) from S(f, m·n).
    Shift(ShiftArgs),
    /// Closed form of S(a·x^{p^α+1}, N).
    Monomial(MonomialArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct FuncArgs {
    #[arg(long)]
    p: u64,
    /// Degree of the coefficient field over F_p.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Monic modulus for F_{p^n}, constant term first.
    #[arg(long)]
    modulus: Option<String>,
    /// Coefficients a_0,…,a_k (for n > 1: residue vectors separated by ';').
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,
    /// Exponents α_i matching the coefficients one to one.
    #[arg(long)]
    alphas: Option<String>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    func: FuncArgs,
    #[arg(long, default_value_t = 1)]
    m: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    #[command(flatten)]
    func: FuncArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    alpha_max: u64,
    /// Reference CSV to compare against.
    #[arg(long)]
    diff: Option<std::path::PathBuf>,
    /// Write the table here instead of standard output.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    func: FuncArgs,
    #[arg(long, default_value_t = 1)]
    m: u64,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct ShiftArgs {
    #[command(flatten)]
    func: FuncArgs,
    #[arg(long, default_value_t = 1)]
    m: u64,
    /// b ∈ F_{p^{mn}} as residues in the working field's power basis.
    #[arg(long)]
    b: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct MonomialArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long)]
    modulus: Option<String>,
    /// The coefficient a ∈ F_{p^n} as residues.
    #[arg(long)]
    a: String,
    #[arg(long)]
    alpha: u64,
    #[arg(long = "N")]
    big_n: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        _ if e.is_internal() => 3,
        Error::Unsupported(_) | Error::NotApplicable(_) | Error::SearchBudgetExceeded(_) => 2,
        _ => 1,
    }
}

/// Parses `argv` (including the program name) and runs one command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 1;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Parse(format!("i/o: {e}"))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Eval(a) => cmd_eval(a, out),
        Command::Profile(a) => cmd_profile(a, out),
        Command::Table(a) => cmd_table(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Shift(a) => cmd_shift(a, out),
        Command::Monomial(a) => cmd_monomial(a, out),
    }
}

fn build_ctx(p: u64, n: usize, modulus: Option<&str>) -> Result<FieldCtx> {
    let m = modulus.map(parse_residues).transpose()?;
    FieldCtx::new(p, n, m.as_deref())
}

fn parse_func(a: &FuncArgs) -> Result<QuadFunc> {
    let ctx = build_ctx(a.p, a.n, a.modulus.as_deref())?;
    let coeffs: Vec<FieldElem> = if a.n == 1 {
        parse_residues(&a.coeffs)?
            .into_iter()
            .map(|c| ctx.element(&[c]))
            .collect::<Result<_>>()?
    } else {
        a.coeffs
            .split(';')
            .map(|v| ctx.parse_element(v))
            .collect::<Result<_>>()?
    };
    match &a.alphas {
        None => QuadFunc::dense(&ctx, coeffs),
        Some(text) => {
            let alphas: Vec<u64> = text
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent {s:?}")))
                })
                .collect::<Result<_>>()?;
            if alphas.len() != coeffs.len() {
                return Err(Error::InvalidFunction(format!(
                    "{} coefficients but {} exponents",
                    coeffs.len(),
                    alphas.len()
                )));
            }
            if coeffs.iter().any(FieldElem::is_zero) {
                return Err(Error::ZeroCoefficient);
            }
            QuadFunc::new(&ctx, coeffs.into_iter().zip(alphas).collect())
        }
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    writeln!(out, "{text}").map_err(io)
}

fn write_value_text(out: &mut dyn Write, v: &ExpSumValue) -> std::io::Result<()> {
    let (re, im) = v.render_complex();
    writeln!(out, "N = {}, l = {}, t = {}", v.n_total, v.l, v.t)?;
    writeln!(out, "value = {}", v.render_exact())?;
    writeln!(out, "cyclotomic = {}", v.to_cyclotomic())?;
    writeln!(out, "complex = ({re:.6}, {im:.6})")?;
    writeln!(out, "provenance:")?;
    for s in &v.provenance {
        let kind = serde_json::to_value(s.kind).ok();
        let kind = kind.as_ref().and_then(|k| k.as_str()).unwrap_or("?");
        writeln!(out, "  {kind} {} -> {}: l = {}, t = {} ({})", s.from, s.to, s.l, s.t, s.detail)?;
    }
    Ok(())
}

fn cmd_eval(a: EvalArgs, out: &mut dyn Write) -> Result<()> {
    let f = parse_func(&a.func)?;
    let v = evaluator::evaluate(&f, a.m)?;
    match a.format {
        Format::Json => write_json(out, &EvalResult::new(&v, f.n(), f.ctx().modulus())),
        _ => {
            if let Some(m) = f.ctx().modulus() {
                writeln!(out, "modulus = {}", format_residues(m)).map_err(io)?;
            }
            write_value_text(out, &v).map_err(io)
        }
    }
}

fn cmd_profile(a: ProfileArgs, out: &mut dyn Write) -> Result<()> {
    let f = parse_func(&a.func)?;
    let prof = nullity::nullity_profile(&f)?;
    match a.format {
        Format::Json => write_json(out, &prof),
        _ => {
            let pairs: Vec<String> = prof.entries.iter().map(|(m, l)| format!("({m},{l})")).collect();
            writeln!(out, "s = {}", prof.s).map_err(io)?;
            writeln!(out, "pairs = {}", pairs.join(" ")).map_err(io)
        }
    }
}

fn cmd_table(a: TableArgs, out: &mut dyn Write) -> Result<()> {
    let rows = tabulate::generate_table(a.p, a.alpha_max, a.jobs)?;
    let rendered = match a.format {
        Format::Json => serde_json::to_string_pretty(&rows).map_err(|e| Error::Parse(e.to_string()))? + "\n",
        _ => tabulate::render_csv(&rows),
    };
    if let Some(path) = &a.out {
        std::fs::write(path, &rendered).map_err(io)?;
    } else if a.diff.is_none() {
        out.write_all(rendered.as_bytes()).map_err(io)?;
    }
    if let Some(path) = &a.diff {
        let text = std::fs::read_to_string(path).map_err(io)?;
        let report = tabulate::diff_reference(&rows, &text)?;
        for d in &report.diffs {
            writeln!(out, "{d}").map_err(io)?;
        }
        let status = if report.is_clean() { "OK" } else { "DIFF" };
        writeln!(out, "{status}: {} rows, {} diffs", report.rows, report.diffs.len()).map_err(io)?;
        if !report.is_clean() {
            return Err(Error::MalformedReference(format!(
                "{} differences from {}",
                report.diffs.len(),
                path.display()
            )));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyJson {
    equal: bool,
    closed_form: Vec<String>,
    brute_force: Vec<String>,
    result: EvalResult,
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<()> {
    let f = parse_func(&a.func)?;
    let report = evaluator::verify(&f, a.m, a.cap)?;
    match a.format {
        Format::Json => write_json(
            out,
            &VerifyJson {
                equal: report.equal,
                closed_form: report.closed_form.to_decimal_strings(),
                brute_force: report.brute_force.to_decimal_strings(),
                result: EvalResult::new(&report.value, f.n(), f.ctx().modulus()),
            },
        )?,
        _ => {
            if report.equal {
                writeln!(out, "equal: {} = {}", report.value.render_exact(), report.brute_force).map_err(io)?;
            } else {
                writeln!(out, "mismatch").map_err(io)?;
                writeln!(out, "  closed form: {}", report.closed_form).map_err(io)?;
                writeln!(out, "  brute force: {}", report.brute_force).map_err(io)?;
            }
        }
    }
    if report.equal {
        Ok(())
    } else {
        Err(Error::InternalInconsistency("closed form differs from brute force".into()))
    }
}

#[derive(Serialize)]
struct ShiftJson {
    zero: bool,
    phase: u64,
    value_cyclotomic: Vec<String>,
    base: EvalResult,
}

fn cmd_shift(a: ShiftArgs, out: &mut dyn Write) -> Result<()> {
    let f = parse_func(&a.func)?;
    let work = quadform::working_field(&f, a.m)?;
    let b = work.parse_element(&a.b)?;
    let base = evaluator::evaluate(&f, a.m)?;
    let shifted = lifts::shift_linear(&f, &work, &b, &base)?;
    match a.format {
        Format::Json => write_json(
            out,
            &ShiftJson {
                zero: shifted.zero,
                phase: shifted.phase,
                value_cyclotomic: shifted.to_cyclotomic().to_decimal_strings(),
                base: EvalResult::new(&base, f.n(), work.modulus()),
            },
        ),
        _ => {
            if shifted.zero {
                writeln!(out, "zero").map_err(io)
            } else {
                writeln!(out, "phase = {}", shifted.phase).map_err(io)?;
                writeln!(out, "value = z^-{} * ({})", shifted.phase, base.render_exact()).map_err(io)?;
                writeln!(out, "cyclotomic = {}", shifted.to_cyclotomic()).map_err(io)
            }
        }
    }
}

#[derive(Serialize)]
struct MonomialJson {
    case: &'static str,
    result: EvalResult,
}

fn cmd_monomial(a: MonomialArgs, out: &mut dyn Write) -> Result<()> {
    let ctx = build_ctx(a.p, a.n, a.modulus.as_deref())?;
    let coeff = ctx.parse_element(&a.a)?;
    let ev = lifts::monomial_eval(&ctx, &coeff, a.alpha, a.big_n)?;
    match a.format {
        Format::Json => write_json(
            out,
            &MonomialJson {
                case: ev.case.label(),
                result: EvalResult::new(&ev.value, ctx.degree() as u64, ctx.modulus()),
            },
        ),
        _ => {
            let v = &ev.value;
            let integer = v.to_cyclotomic();
            let shown = match integer.as_integer() {
                Some(k) => k.to_string(),
                None => v.render_exact(),
            };
            writeln!(out, "case ({})", ev.case.label()).map_err(io)?;
            writeln!(out, "value = {shown}").map_err(io)?;
            writeln!(out, "N = {}, l = {}, t = {}", v.n_total, v.l, v.t).map_err(io)
        }
    }
}
