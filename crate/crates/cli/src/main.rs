use std::fs::File;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fracops::exponent_law::{apply_word, OperatorWord};
use fracops::liouville::Classify;
use fracops::suites::{self, SuiteConfig};
use fracops::tol::COEFF_REL_TOL;
use fracops::*;

mod format;

use format::{num, sig, Format, Table};

#[derive(Parser)]
#[command(
    name = "fracops",
    version,
    about = "Fractional integrals and derivatives of power sums"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    format: Format,

    /// Significant digits for plain output.
    #[arg(long, default_value_t = 14, global = true)]
    digits: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply one operator and print its values.
    Eval(EvalArgs),
    /// Apply an operator word such as "D:0.5,D:1.5" (rightmost step first).
    Word(WordArgs),
    /// Laplace image of an expression or of an operator applied to it, with a numeric cross-check.
    Laplace(LaplaceArgs),
    /// Riemann, Liouville or neither, for a given order.
    Classify(ClassifyArgs),
    /// Run a randomized verification suite.
    Verify(VerifyArgs),
    /// Print the worked-example table.
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Op {
    /// Riemann-Liouville integral (Liouville or Weyl integral for those terms).
    #[value(name = "J")]
    J,
    /// Riemann-Liouville derivative.
    #[value(name = "D")]
    D,
    /// Caputo derivative.
    #[value(name = "Dc")]
    Dc,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_enum, ignore_case = true)]
    op: Op,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    /// Expression such as "2*t^0.5 + 1". Without it a "t,value" CSV is read from --input or stdin.
    #[arg(long)]
    expr: Option<String>,
    /// Evaluation points (comma separated). Plain output then prints values only.
    #[arg(long = "t", value_delimiter = ',', allow_negative_numbers = true)]
    t: Vec<f64>,
    /// Uniform grid on [0, T] with N steps.
    #[arg(long, num_args = 2, value_names = ["T", "N"])]
    grid: Option<Vec<String>>,
    /// Sample the expression on the grid and use the discrete operators.
    #[arg(long)]
    numeric: bool,
    /// Print the resulting expression instead of values.
    #[arg(long, conflicts_with = "numeric")]
    symbolic: bool,
    /// CSV input file ("t,value"); defaults to stdin when --expr is absent.
    #[arg(long, conflicts_with = "expr")]
    input: Option<PathBuf>,
    /// f(0+), f'(0+), ... for the numeric RL derivative of CSV input.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    init: Vec<f64>,
}

#[derive(Args)]
struct WordArgs {
    /// Steps J:a, D:a or Dc:a separated by commas.
    #[arg(long)]
    word: String,
    #[arg(long)]
    expr: String,
    #[arg(long = "t", value_delimiter = ',')]
    t: Vec<f64>,
    /// Also print every intermediate result.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct LaplaceArgs {
    #[arg(long)]
    expr: String,
    #[arg(long, value_enum, ignore_case = true, requires = "alpha")]
    op: Option<Op>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Points s > 0 for the numeric cross-check.
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0, 5.0])]
    s: Vec<f64>,
    /// Largest tolerated |numeric - symbolic|.
    #[arg(long, default_value_t = 1e-6)]
    check_tol: f64,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    expr: String,
    #[arg(long)]
    alpha: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or "all".
    #[arg(long)]
    suite: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Random cases per suite instead of each suite's default.
    #[arg(long)]
    cases: Option<usize>,
    /// Print measured orders and timings.
    #[arg(long)]
    verbose: bool,
}

/// Why a command stopped: bad input (exit 2) or a failed check (exit 1).
enum Failure {
    Usage(String),
    Check(String),
}

impl From<FracError> for Failure {
    fn from(e: FracError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<String, (String, Failure)>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let (out, code) = match outcome {
        Ok(out) => (out, 0),
        Err((out, Failure::Check(msg))) => {
            eprintln!("verification failed: {msg}");
            (out, 1)
        }
        Err((out, Failure::Usage(msg))) => {
            eprintln!("error: {msg}");
            (out, 2)
        }
    };
    // A closed pipe is not worth a panic.
    let _ = io::stdout().lock().write_all(out.as_bytes());
    ExitCode::from(code)
}

fn run(cli: &Cli) -> Outcome {
    let plain = |r: std::result::Result<String, Failure>| r.map_err(|f| (String::new(), f));
    match &cli.command {
        Command::Eval(a) => plain(eval(a, cli)),
        Command::Word(a) => plain(word(a, cli)),
        Command::Laplace(a) => laplace(a, cli),
        Command::Classify(a) => plain(classify_cmd(a, cli)),
        Command::Verify(a) => verify(a, cli),
        Command::Table => plain(table(cli)),
    }
}

fn tolerance() -> std::result::Result<f64, Failure> {
    match std::env::var("FRACOPS_TOL") {
        Err(_) => Ok(COEFF_REL_TOL),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
            _ => Err(Failure::Usage(format!(
                "FRACOPS_TOL must be a positive decimal, got {s:?}"
            ))),
        },
    }
}

fn order(alpha: f64) -> std::result::Result<FracOrder, Failure> {
    Ok(FracOrder::new(alpha)?)
}

fn grid(arg: &Option<Vec<String>>) -> std::result::Result<(f64, usize), Failure> {
    let Some(v) = arg else { return Ok((1.0, 1024)) };
    let t_end: f64 = v[0]
        .parse()
        .map_err(|_| Failure::Usage(format!("--grid T: not a number: {}", v[0])))?;
    let n: usize = v[1]
        .parse()
        .map_err(|_| Failure::Usage(format!("--grid N: not a count: {}", v[1])))?;
    if !(t_end > 0.0 && t_end.is_finite()) || n < 2 {
        return Err(Failure::Usage("--grid needs T > 0 and N >= 2".into()));
    }
    Ok((t_end, n))
}

/// f(0+) for sampling; only defined when no exponent is negative.
fn value_at_zero(f: &PowerSum) -> std::result::Result<f64, Failure> {
    match f.min_exponent() {
        Some(e) if e < 0.0 => Err(Failure::Usage(format!("{f} is unbounded at 0 and cannot be sampled"))),
        _ => Ok(f.terms().iter().filter(|p| p.exponent == 0.0).map(|p| p.coeff).sum()),
    }
}

fn sample(f: &PowerSum, t_end: f64, n: usize) -> std::result::Result<SampledFunction, Failure> {
    let f0 = value_at_zero(f)?;
    Ok(SampledFunction::from_fn(t_end, n, |t| {
        if t > 0.0 {
            f.evaluate(t).unwrap_or(f64::NAN)
        } else {
            f0
        }
    })?)
}

fn symbolic_op(op: Op, f: &PowerSum, ord: FracOrder) -> Result<PowerSum> {
    match op {
        Op::J => rl_integral(f, ord),
        Op::D => rl_derivative(f, ord),
        Op::Dc => caputo_derivative(f, ord),
    }
}

fn emit_values(points: &[f64], values: &[f64], cli: &Cli, values_only: bool) -> String {
    if cli.format == Format::Plain && values_only {
        return values.iter().map(|&v| sig(v, cli.digits) + "\n").collect();
    }
    let mut table = Table::new(&["t", "value"]);
    table.rows = points.iter().zip(values).map(|(&t, &v)| vec![t, v]).collect();
    table.render(cli.format, cli.digits)
}

fn emit_sampled(s: &SampledFunction, cli: &Cli) -> std::result::Result<String, Failure> {
    if cli.format == Format::Csv {
        let mut buf = Vec::new();
        s.write_csv(&mut buf)?;
        return Ok(String::from_utf8_lossy(&buf).into_owned());
    }
    let points: Vec<f64> = (0..=s.n()).map(|j| s.t(j)).collect();
    Ok(emit_values(&points, s.values(), cli, false))
}

fn emit_expression(text: String, cli: &Cli) -> String {
    match cli.format {
        Format::Json => json!({ "expression": text }).to_string() + "\n",
        _ => text + "\n",
    }
}

fn apply_numeric(
    op: Op,
    f: &SampledFunction,
    ord: FracOrder,
    init: &InitialData,
    mth: Option<&SampledFunction>,
) -> Result<SampledFunction> {
    match op {
        Op::J => rl_integral_numeric(f, ord),
        Op::Dc => caputo_derivative_numeric(f, ord, mth),
        Op::D => rl_derivative_numeric(f, ord, init, mth),
    }
}

fn eval(a: &EvalArgs, cli: &Cli) -> std::result::Result<String, Failure> {
    let ord = order(a.alpha)?;
    let Some(src) = &a.expr else {
        let mut text = String::new();
        match &a.input {
            Some(path) => File::open(path)?.read_to_string(&mut text)?,
            None => io::stdin().lock().read_to_string(&mut text)?,
        };
        let f = SampledFunction::read_csv(text.as_bytes())?;
        let out = apply_numeric(a.op, &f, ord, &InitialData::new(a.init.clone()), None)?;
        return emit_sampled(&out, cli);
    };

    match parse(src)? {
        Expression::Power(f) => {
            if a.numeric {
                let (t_end, n) = grid(&a.grid)?;
                let s = sample(&f, t_end, n)?;
                let init = if a.op == Op::D && a.init.is_empty() {
                    InitialData::of(&f, ord)?
                } else {
                    InitialData::new(a.init.clone())
                };
                // Past second order the m-th derivative comes from the expression itself.
                let mth = if ord.m() > 2 && a.op != Op::J {
                    Some(sample(&classical_derivative(&f, ord.m()), t_end, n)?)
                } else {
                    None
                };
                let out = apply_numeric(a.op, &s, ord, &init, mth.as_ref())?;
                return emit_sampled(&out, cli);
            }
            let g = symbolic_op(a.op, &f, ord)?;
            if a.symbolic {
                return Ok(emit_expression(g.to_string(), cli));
            }
            if !a.t.is_empty() {
                let values = a.t.iter().map(|&t| g.evaluate(t)).collect::<Result<Vec<_>>>()?;
                return Ok(emit_values(&a.t, &values, cli, true));
            }
            let (t_end, n) = grid(&a.grid)?;
            let points: Vec<f64> = (0..=n).map(|j| t_end * j as f64 / n as f64).collect();
            let values: Vec<f64> = points.iter().map(|&t| g.evaluate(t).unwrap_or(f64::NAN)).collect();
            Ok(emit_values(&points, &values, cli, false))
        }
        Expression::Liouville(term) => {
            let g = match a.op {
                Op::J => liouville_integral(&term, ord)?,
                Op::D => liouville_derivative(&term, ord),
                Op::Dc => {
                    return Err(Failure::Usage(
                        "the Caputo derivative applies to power sums only".into(),
                    ))
                }
            };
            term_values(g.to_string(), |t| g.evaluate(t), a, cli)
        }
        Expression::Decaying(term) => {
            let g = match a.op {
                Op::J => weyl_integral(&term, ord)?,
                _ => {
                    return Err(Failure::Usage(
                        "decaying terms support the Weyl integral (--op J) only".into(),
                    ))
                }
            };
            term_values(g.to_string(), |t| g.evaluate(t), a, cli)
        }
    }
}

fn term_values(
    text: String,
    eval: impl Fn(f64) -> Result<f64>,
    a: &EvalArgs,
    cli: &Cli,
) -> std::result::Result<String, Failure> {
    if a.symbolic {
        return Ok(emit_expression(text, cli));
    }
    if a.t.is_empty() {
        return Err(Failure::Usage(
            "Liouville and Weyl terms need --t points (or --symbolic)".into(),
        ));
    }
    let values = a.t.iter().map(|&t| eval(t)).collect::<Result<Vec<_>>>()?;
    Ok(emit_values(&a.t, &values, cli, true))
}

fn word(a: &WordArgs, cli: &Cli) -> std::result::Result<String, Failure> {
    let w: OperatorWord = a.word.parse()?;
    let f = parse(&a.expr)?.into_power_sum()?;
    let trace = apply_word(&w, &f)?;
    let out = trace.output();
    let values = a.t.iter().map(|&t| out.evaluate(t)).collect::<Result<Vec<_>>>()?;
    Ok(match cli.format {
        Format::Json => {
            let mut obj = json!({
                "word": w.to_string(),
                "input": f.to_string(),
                "output": out.to_string(),
            });
            if a.trace {
                obj["intermediates"] = trace
                    .intermediates
                    .iter()
                    .map(|p| Value::String(p.to_string()))
                    .collect();
            }
            if !a.t.is_empty() {
                obj["values"] =
                    a.t.iter()
                        .zip(&values)
                        .map(|(&t, &v)| json!({ "t": num(t), "value": num(v) }))
                        .collect();
            }
            obj.to_string() + "\n"
        }
        _ if !a.t.is_empty() => emit_values(&a.t, &values, cli, true),
        _ => {
            let mut s = String::new();
            if a.trace {
                // Steps run right to left; step k is the k-th as written.
                let steps = w.steps();
                s += &format!("input: {f}\n");
                for (i, p) in trace.intermediates.iter().enumerate() {
                    s += &format!("after {}: {p}\n", steps[steps.len() - 1 - i]);
                }
            } else {
                s += &format!("{out}\n");
            }
            s
        }
    })
}

fn laplace(a: &LaplaceArgs, cli: &Cli) -> Outcome {
    let fail = |f: Failure| (String::new(), f);
    let prepare = || -> std::result::Result<(PowerSum, SPowerSum, bool), Failure> {
        let f = parse(&a.expr)?.into_power_sum()?;
        let ft = transform(&f)?;
        let Some(op) = a.op else { return Ok((f, ft, true)) };
        let ord = order(a.alpha.unwrap_or(f64::NAN))?;
        let time = symbolic_op(op, &f, ord)?;
        let image = match op {
            Op::J => rule_j(ord, &ft),
            Op::Dc => rule_caputo(ord, &ft, &InitialData::of(&f, ord)?)?,
            Op::D => rule_rl(ord, &ft, &rl_initial_values(&f, ord)?)?,
        };
        let agrees = transform(&time)?.approx_eq_with(&image, tolerance()?);
        Ok((time, image, agrees))
    };
    let (time, image, agrees) = prepare().map_err(fail)?;

    let mut table = Table::new(&["s", "image", "numeric", "abs_error"]);
    let mut worst: f64 = 0.0;
    for &s in &a.s {
        if s.is_nan() || s <= 0.0 {
            return Err(fail(Failure::Usage(format!("s must be positive, got {s}"))));
        }
        let exact = image.evaluate(s).map_err(|e| fail(e.into()))?;
        let eval = |t: f64| time.evaluate(t).unwrap_or(f64::NAN);
        let numeric =
            numeric_laplace(&eval, s, 40.0 + 40.0 / s, 1e-8, TailBound::PowerLaw).map_err(|e| fail(e.into()))?;
        worst = worst.max((numeric - exact).abs());
        table.rows.push(vec![s, exact, numeric, (numeric - exact).abs()]);
    }

    let out = match cli.format {
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| json!({ "s": num(r[0]), "image": num(r[1]), "numeric": num(r[2]), "abs_error": num(r[3]) }))
                .collect();
            json!({ "time": time.to_string(), "image": image.to_string(), "symbolic_agrees": agrees, "rows": rows })
                .to_string()
                + "\n"
        }
        Format::Csv => table.render(Format::Csv, cli.digits),
        Format::Plain => format!(
            "time: {time}\nimage: {image}\n{}",
            table.render(Format::Plain, cli.digits)
        ),
    };
    if !agrees {
        return Err((
            out,
            Failure::Check("transform of the operator result differs from the operational rule".into()),
        ));
    }
    if worst > a.check_tol {
        return Err((
            out,
            Failure::Check(format!(
                "numeric transform off by {worst:e} (tolerance {:e})",
                a.check_tol
            )),
        ));
    }
    Ok(out)
}

fn classify_cmd(a: &ClassifyArgs, cli: &Cli) -> std::result::Result<String, Failure> {
    let ord = order(a.alpha)?;
    let expr = parse(&a.expr)?;
    let class = match &expr {
        Expression::Power(p) => {
            if p.terms().iter().all(|t| t.classify(ord) == FunctionClass::Riemann) {
                FunctionClass::Riemann
            } else {
                FunctionClass::Neither
            }
        }
        Expression::Liouville(l) => classify(l, ord),
        // A decaying term is judged by its reflection onto the negative axis.
        Expression::Decaying(w) => classify(&w.reflect(), ord),
    };
    Ok(match cli.format {
        Format::Json => {
            json!({ "expression": expr.to_string(), "alpha": num(a.alpha), "class": class.to_string() }).to_string()
                + "\n"
        }
        Format::Csv => format!("expression,alpha,class\n\"{expr}\",{},{class}\n", a.alpha),
        Format::Plain => format!("{class}\n"),
    })
}

fn verify(a: &VerifyArgs, cli: &Cli) -> Outcome {
    let fail = |f: Failure| (String::new(), f);
    let mut cfg = SuiteConfig {
        rel_tol: tolerance().map_err(fail)?,
        cases: a.cases,
        ..SuiteConfig::default()
    };
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    let reports = suites::run(&a.suite, &cfg).map_err(|e| fail(e.into()))?;
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.name.as_str())
        .collect();
    let out = match cli.format {
        Format::Json => {
            let v: Vec<Value> = reports
                .iter()
                .map(|r| json!({ "suite": r.name, "cases": r.cases, "passed": r.passed(), "failures": r.failures, "notes": r.notes }))
                .collect();
            Value::Array(v).to_string() + "\n"
        }
        Format::Csv => {
            let mut s = String::from("suite,cases,failures\n");
            for r in &reports {
                s += &format!("{},{},{}\n", r.name, r.cases, r.failures.len());
            }
            s
        }
        Format::Plain => {
            let mut s = String::new();
            if a.verbose {
                s += &format!("relative tolerance {:e}\n", cfg.rel_tol);
            }
            for r in &reports {
                let verdict = if r.passed() { "PASS" } else { "FAIL" };
                s += &format!("{verdict} {} ({} cases)\n", r.name, r.cases);
                for f in r.failures.iter().take(20) {
                    s += &format!("    {f}\n");
                }
                if r.failures.len() > 20 {
                    s += &format!("    ... {} more\n", r.failures.len() - 20);
                }
                if a.verbose {
                    for n in &r.notes {
                        s += &format!("    {n}\n");
                    }
                }
            }
            s
        }
    };
    if failed.is_empty() {
        Ok(out)
    } else {
        Err((out, Failure::Check(format!("suites failed: {}", failed.join(", ")))))
    }
}

fn table(cli: &Cli) -> std::result::Result<String, Failure> {
    let rows: [(&str, f64, &str); 5] = [
        ("D^0.5 t^0.5", 0.5, "t^0.5"),
        ("D^0.5 t^-0.5", 0.5, "t^-0.5"),
        ("D^1 t^-0.5", 1.0, "t^-0.5"),
        ("D^1.5 t^0.5", 1.5, "t^0.5"),
        ("D^0.5 1", 0.5, "1"),
    ];
    let mut results = Vec::new();
    for (label, alpha, src) in rows {
        let f = parse(src)?.into_power_sum()?;
        let g = rl_derivative(&f, order(alpha)?)?;
        results.push((label, g.to_string(), g.evaluate(1.0)?));
    }
    Ok(match cli.format {
        Format::Json => {
            let v: Vec<Value> = results
                .iter()
                .map(|(l, r, v)| json!({ "operation": l, "result": r, "value_at_1": num(*v) }))
                .collect();
            Value::Array(v).to_string() + "\n"
        }
        Format::Csv => {
            let mut s = String::from("operation,result,value_at_1\n");
            for (l, r, v) in &results {
                s += &format!("{l},{r},{v:.16e}\n");
            }
            s
        }
        Format::Plain => {
            let w0 = results.iter().map(|r| r.0.len()).max().unwrap_or(0);
            let w1 = results.iter().map(|r| r.1.len()).max().unwrap_or(0);
            results
                .iter()
                .map(|(l, r, v)| format!("{l:<w0$}  {r:<w1$}  {}\n", sig(*v, cli.digits)))
                .collect()
        }
    })
}
