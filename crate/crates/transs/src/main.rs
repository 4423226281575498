//! transs — exact arithmetic on grid-based transseries at x -> +infinity.
//!
//! Exit codes: 0 success; 1 syntax error; 2 unresolved order / bound not
//! reachable within the budget; 3 domain error; 4 solver did not stabilize.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use transs::elaborate::{collect_ratios, elaborate, Context};
use transs::parser::parse;
use transs::render::{render_with_bound, series_json};
use transs_core::calculus::{self, TaylorBudget};
use transs_core::error::Error;
use transs_core::integrate;
use transs_core::monomial::Monomial;
use transs_core::numeric::{format_decimal, numeric_eval};
use transs_core::rational::parse_rat;
use transs_core::series::{FarOrd, Series};
use transs_core::solve;

const DEFAULT_BOUND: &str = "x^-16";

#[derive(Parser)]
#[command(
    name = "transs",
    about = "Exact arithmetic on grid-based transseries at x -> +infinity",
    long_about = "Exact arithmetic on grid-based transseries at x -> +infinity.\n\n\
Expressions use rational literals (p or p/q, no decimals), the variable x,\n\
the solver unknown Y, operators + - * / ^ (exponents are rational\n\
literals), and the functions exp(), log(), diff(), int(). Bounds are\n\
monomial expressions such as x^-8, exp(-7*x), or x^2*exp(-7*x); results\n\
list every term far larger than the bound."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Expand an expression to a truncated transseries.
    Expand {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        bound: String,
        #[arg(long)]
        max_terms: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Differentiate an expression.
    Diff {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        bound: String,
        #[arg(long)]
        max_terms: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Antiderivative of an expression (integration constant 0).
    Int {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        bound: String,
        #[arg(long)]
        max_terms: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compose: evaluate EXPR at the series of --with.
    Compose {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        with: String,
        #[arg(long)]
        bound: String,
        #[arg(long)]
        max_terms: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Multiplicative inverse.
    Inv {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        bound: String,
        #[arg(long)]
        max_terms: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compare two expressions: prints the sign comparison (<, =, >) and
    /// the magnitude comparison (<<, ~~, >>).
    Cmp {
        #[arg(allow_hyphen_values = true)]
        expr_a: String,
        #[arg(allow_hyphen_values = true)]
        expr_b: String,
        #[arg(long, default_value = DEFAULT_BOUND)]
        bound: String,
        #[arg(long)]
        max_terms: Option<usize>,
    },
    /// Solve Y = phi(Y) [+ t0] by fixed-point iteration.
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, allow_hyphen_values = true)]
        t0: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        seed: Option<String>,
        #[arg(long)]
        bound: String,
        #[arg(long)]
        max_iter: Option<usize>,
        #[arg(long)]
        diagnostics: bool,
        #[arg(long)]
        max_terms: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate numerically at a point.
    Num {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long)]
        digits: u32,
        #[arg(long, default_value = DEFAULT_BOUND)]
        bound: String,
        #[arg(long)]
        max_terms: Option<usize>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn syntax(message: String) -> Self {
        Failure { code: 1, message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::UnresolvedOrder | Error::BudgetExceeded { .. } => 2,
            Error::NoStabilization { .. } => 4,
            _ => 3,
        };
        let mut message = e.to_string();
        if let Error::NoStabilization {
            last_diff_supports, ..
        } = &e
        {
            for (i, supp) in last_diff_supports.iter().enumerate() {
                message.push_str(&format!("\n  difference support {i}: {supp:?}"));
            }
        }
        Failure { code, message }
    }
}

fn budget(max_terms: Option<usize>) -> TaylorBudget {
    let from_env = std::env::var("TRANSS_MAX_TERMS")
        .ok()
        .and_then(|v| v.parse().ok());
    TaylorBudget {
        max_terms: max_terms
            .or(from_env)
            .unwrap_or(TaylorBudget::default().max_terms),
    }
}

/// A bound is a monomial expression with coefficient 1, different from 1.
fn parse_bound(text: &str, _max_terms: Option<usize>) -> Result<Monomial, Failure> {
    let e = parse(text).map_err(|e| Failure::syntax(format!("in bound: {e}")))?;
    transs::elaborate::bound_monomial(&e)
        .map_err(|err| Failure::syntax(format!("in bound '{text}': {err}")))
}

fn context_for(
    text: &str,
    bound: &str,
    max_terms: Option<usize>,
) -> Result<(transs::Expr, Context), Failure> {
    let bound = parse_bound(bound, max_terms)?;
    let expr = parse(text).map_err(|e| Failure::syntax(e.to_string()))?;
    let mut ctx = Context::new(bound);
    ctx.budget = budget(max_terms);
    collect_ratios(&expr, &mut ctx);
    Ok((expr, ctx))
}

fn emit(s: &Series, format: Format) {
    match format {
        Format::Text => println!("{}", render_with_bound(s)),
        Format::Json => println!("{}", series_json(s)),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Expand {
            expr,
            bound,
            max_terms,
            format,
        } => {
            let (e, mut ctx) = context_for(&expr, &bound, max_terms)?;
            let s = elaborate(&e, &mut ctx, None)?;
            emit(&s.truncated_to(&ctx.bound), format);
            Ok(())
        }
        Cmd::Diff {
            expr,
            bound,
            max_terms,
            format,
        } => {
            let (e, mut ctx) = context_for(&expr, &bound, max_terms)?;
            let s = elaborate(&e, &mut ctx, None)?;
            let d = calculus::derivative(&s)?;
            emit(&d.truncated_to(&ctx.bound), format);
            Ok(())
        }
        Cmd::Int {
            expr,
            bound,
            max_terms,
            format,
        } => {
            let (e, mut ctx) = context_for(&expr, &bound, max_terms)?;
            let s = elaborate(&e, &mut ctx, None)?;
            let b = integrate::antiderivative(&s, &ctx.policy(), ctx.budget)?;
            emit(&b.truncated_to(&ctx.bound), format);
            Ok(())
        }
        Cmd::Compose {
            expr,
            with,
            bound,
            max_terms,
            format,
        } => {
            let (e, mut ctx) = context_for(&expr, &bound, max_terms)?;
            let (we, mut wctx) = context_for(&with, &bound, max_terms)?;
            let outer = elaborate(&e, &mut ctx, None)?;
            let inner = elaborate(&we, &mut wctx, None)?;
            let c = calculus::compose(&outer, &inner, &ctx.bound, ctx.budget)?;
            emit(&c.truncated_to(&ctx.bound), format);
            Ok(())
        }
        Cmd::Inv {
            expr,
            bound,
            max_terms,
            format,
        } => {
            let (e, mut ctx) = context_for(&expr, &bound, max_terms)?;
            let s = elaborate(&e, &mut ctx, None)?;
            let inv = calculus::mul_inverse(&s, &ctx.bound, ctx.budget)?;
            emit(&inv.truncated_to(&ctx.bound), format);
            Ok(())
        }
        Cmd::Cmp {
            expr_a,
            expr_b,
            bound,
            max_terms,
        } => {
            let (ea, mut ctxa) = context_for(&expr_a, &bound, max_terms)?;
            let (eb, mut ctxb) = context_for(&expr_b, &bound, max_terms)?;
            let a = elaborate(&ea, &mut ctxa, None)?;
            let b = elaborate(&eb, &mut ctxb, None)?;
            let sign = match a.cmp_series(&b)? {
                std::cmp::Ordering::Less => "<",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => ">",
            };
            let far = match a.far_cmp(&b)? {
                FarOrd::FarSmaller => "<<",
                FarOrd::FarLarger => ">>",
                FarOrd::Comparable { .. } => "~~",
            };
            println!("{sign} {far}");
            Ok(())
        }
        Cmd::Solve {
            phi,
            t0,
            seed,
            bound,
            max_iter,
            diagnostics,
            max_terms,
            format,
        } => {
            let (phi_expr, mut ctx) = context_for(&phi, &bound, max_terms)?;
            if let Some(it) = max_iter {
                ctx.max_iterations = it;
            }
            ctx.diagnostics = diagnostics;
            let t0_series = match &t0 {
                Some(text) => {
                    let e = parse(text).map_err(|e| Failure::syntax(e.to_string()))?;
                    collect_ratios(&e, &mut ctx);
                    Some(elaborate(&e, &mut ctx, None)?)
                }
                None => None,
            };
            let seed_series = match &seed {
                Some(text) => {
                    let e = parse(text).map_err(|e| Failure::syntax(e.to_string()))?;
                    collect_ratios(&e, &mut ctx);
                    elaborate(&e, &mut ctx, None)?
                }
                None => Series::zero(),
            };
            let policy = ctx.policy();
            let solution = solve::fixed_point(
                |y| {
                    let mut step = elaborate(&phi_expr, &mut ctx, Some(y))?;
                    if let Some(t0) = &t0_series {
                        step = step.add(t0);
                    }
                    Ok(step)
                },
                &seed_series,
                &policy,
            )?;
            emit(&solution, format);
            Ok(())
        }
        Cmd::Num {
            expr,
            at,
            digits,
            bound,
            max_terms,
        } => {
            let (e, mut ctx) = context_for(&expr, &bound, max_terms)?;
            let s = elaborate(&e, &mut ctx, None)?;
            let x0 = parse_rat(&at)
                .ok_or_else(|| Failure::syntax(format!("--at expects a rational, got '{at}'")))?;
            let v = numeric_eval(&s, &x0, digits)?;
            println!("{}", format_decimal(&v, digits));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
