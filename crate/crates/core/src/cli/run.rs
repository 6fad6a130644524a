use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::coeff::{CoeffRing, CycloRing, LaurentRing};
use crate::error::{Error, Result};
use crate::frobext::FrobeniusContext;
use crate::report::{init_thread_pool, CheckReport};
use crate::rewrite::{Algebra, AlgebraConfig, Element, Variant};
use crate::rootspec::enumerate_basis;

use super::eval::eval;
use super::parse::{caret_line, parse};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "qcoord",
    version,
    about = "Normal forms and structure checks for quantum matrix algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Matrix size.
    #[arg(long = "n", global = true, default_value_t = 2)]
    pub n: usize,
    /// Odd root order; coefficients live in Z[q]/(phi_ell) when given.
    #[arg(long, global = true)]
    pub ell: Option<i64>,
    #[arg(long, global = true, value_enum, default_value_t = VariantArg::M)]
    pub variant: VariantArg,
    #[arg(long, global = true, value_enum, default_value_t = OrderArg::Rowmajor)]
    pub order: OrderArg,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Normal form of an expression.
    Nf {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// The quantum determinant, expanded in ordered monomials.
    Det,
    /// Normal form of a product.
    Mul {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// Coefficients over the Frobenius image of the classical ring (needs --ell).
    Expand {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Coefficient of the top residue monomial (needs --ell).
    Phi {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Image under the Nakayama twist (needs --ell).
    Nakayama {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Residue basis over the classical ring (needs --ell).
    Basis,
    /// Run a verification suite.
    Check {
        which: CheckArg,
        /// Longest word for pbw-confluence.
        #[arg(long, default_value_t = 5)]
        max_len: usize,
        /// Largest monomial degree for identities.
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        /// Pair sample size for nakayama when the residue basis exceeds 81 elements.
        #[arg(long, default_value_t = 500)]
        pairs: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    M,
    Gl,
    Sl,
}

impl VariantArg {
    fn variant(self) -> Variant {
        match self {
            VariantArg::M => Variant::Mn,
            VariantArg::Gl => Variant::GLn,
            VariantArg::Sl => Variant::SLn,
        }
    }

    fn name(self) -> &'static str {
        match self {
            VariantArg::M => "m",
            VariantArg::Gl => "gl",
            VariantArg::Sl => "sl",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Rowmajor,
    Opposite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    Central,
    PbwConfluence,
    Frobenius,
    Nakayama,
    Iso,
    Identities,
}

/// Largest residue basis for which `check frobenius` includes the quadratic
/// dual-witness suite.
const DUAL_WITNESS_LIMIT: usize = 625;

/// Runs the command line `args` (including the program name). Returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    init_thread_pool();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = writeln!(out);
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let (Error::Parse { offset, .. }, Some(src)) = (&e, source_text(&cli.command)) {
                let _ = writeln!(err, "{}", caret_line(src, *offset));
            }
            EXIT_USAGE
        }
    }
}

fn source_text(cmd: &Command) -> Option<&str> {
    match cmd {
        Command::Nf { expr }
        | Command::Expand { expr }
        | Command::Phi { expr }
        | Command::Nakayama { expr } => Some(expr),
        _ => None,
    }
}

fn config(cli: &Cli) -> Result<AlgebraConfig> {
    let variant = cli.variant.variant();
    match cli.order {
        OrderArg::Rowmajor => AlgebraConfig::standard(cli.n, variant),
        OrderArg::Opposite => AlgebraConfig::opposite(cli.n, variant),
    }
}

fn cyclo(ell: i64) -> Result<CycloRing> {
    if ell % 2 == 0 {
        return Err(Error::Parameter(format!("ell must be odd, got {ell}")));
    }
    CycloRing::new(ell)
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    match &cli.command {
        Command::Nf { .. } | Command::Det | Command::Mul { .. } => match cli.ell {
            None => basic(cli, Algebra::new(config(cli)?, LaurentRing)),
            Some(ell) => basic(cli, Algebra::new(config(cli)?, cyclo(ell)?)),
        },
        Command::Expand { expr } | Command::Phi { expr } | Command::Nakayama { expr } => {
            let ctx = frobenius_context(cli, None)?;
            let alg = ctx.root().algebra();
            let e = eval(alg, &parse(expr, cli.n, cli.variant.variant())?)?;
            Ok((root_command(cli, &ctx, &e)?, EXIT_OK))
        }
        Command::Basis => {
            let ell = require_ell(cli)?;
            let ctx = frobenius_context(cli, Some(ell))?;
            let order = ctx.root().algebra().order();
            let mut keys: Vec<_> = enumerate_basis(cli.n, ell as u32, cli.variant.variant())?
                .map(|m| m.display(order).to_string())
                .collect();
            if cli.json {
                let v = json!({
                    "schema": 1,
                    "ell": ell,
                    "n": cli.n,
                    "variant": cli.variant.name(),
                    "basis": keys,
                });
                Ok((pretty(&v), EXIT_OK))
            } else {
                keys.push(String::new());
                Ok((keys.join("\n"), EXIT_OK))
            }
        }
        Command::Check {
            which,
            max_len,
            max_degree,
            pairs,
        } => {
            let report = run_check(cli, *which, *max_len, *max_degree, *pairs)?;
            let text = if cli.json {
                report.to_json()
            } else {
                report.to_text()
            };
            let code = if report.passed() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            };
            Ok((text, code))
        }
    }
}

fn require_ell(cli: &Cli) -> Result<i64> {
    cli.ell
        .ok_or_else(|| Error::Parameter("this command needs --ell".into()))
}

fn frobenius_context(cli: &Cli, ell: Option<i64>) -> Result<FrobeniusContext> {
    let ell = match ell {
        Some(l) => l,
        None => require_ell(cli)?,
    };
    if cli.order != OrderArg::Rowmajor {
        return Err(Error::Unsupported(
            "Frobenius data is defined for the row-major order".into(),
        ));
    }
    cyclo(ell)?;
    FrobeniusContext::new(cli.n, ell, cli.variant.variant())
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value")
}

fn element_json<R: CoeffRing>(alg: &Algebra<R>, e: &Element<R::Elem>) -> serde_json::Value {
    let order = alg.order();
    let terms: Vec<_> = e
        .terms()
        .rev()
        .map(|(m, c)| json!({"monomial": m.display(order).to_string(), "coeff": c.to_string()}))
        .collect();
    serde_json::Value::Array(terms)
}

fn basic<R: CoeffRing>(cli: &Cli, alg: Algebra<R>) -> Result<(String, i32)> {
    let (name, e) = match &cli.command {
        Command::Nf { expr } => ("nf", eval(&alg, &parse(expr, cli.n, alg.variant())?)?),
        Command::Det => ("det", alg.quantum_determinant()),
        Command::Mul { left, right } => {
            let a = eval(&alg, &parse(left, cli.n, alg.variant())?)?;
            let b = eval(&alg, &parse(right, cli.n, alg.variant())?)?;
            ("mul", alg.multiply(&a, &b)?)
        }
        _ => unreachable!("handled by execute"),
    };
    if cli.json {
        let mut v = json!({
            "schema": 1,
            "command": name,
            "n": cli.n,
            "variant": cli.variant.name(),
            "result": alg.format(&e),
            "terms": element_json(&alg, &e),
        });
        if let Some(ell) = cli.ell {
            v["ell"] = json!(ell);
        }
        Ok((pretty(&v), EXIT_OK))
    } else {
        Ok((alg.format(&e), EXIT_OK))
    }
}

fn root_command(
    cli: &Cli,
    ctx: &FrobeniusContext,
    e: &Element<crate::coeff::CycloElem>,
) -> Result<String> {
    let root = ctx.root();
    let alg = root.algebra();
    let order = alg.order();
    Ok(match &cli.command {
        Command::Expand { .. } => {
            let x = root.module_expand(e)?;
            let entries: Vec<(String, String)> = x
                .entries
                .iter()
                .rev()
                .map(|(k, c)| (k.display(order).to_string(), root.format_classical(c)))
                .collect();
            if cli.json {
                let v = json!({
                    "schema": 1,
                    "ell": ctx.ell(),
                    "n": cli.n,
                    "variant": cli.variant.name(),
                    "entries": entries
                        .iter()
                        .map(|(k, c)| json!({"basis_key": k, "classical_coeff": c}))
                        .collect::<Vec<_>>(),
                });
                pretty(&v)
            } else if entries.is_empty() {
                "0".to_string()
            } else {
                entries
                    .iter()
                    .map(|(k, c)| format!("{k}: {c}"))
                    .collect::<Vec<_>>()
                    .join("\n")
            }
        }
        Command::Phi { .. } => {
            let v = root.format_classical(&ctx.phi(e)?);
            if cli.json {
                pretty(
                    &json!({"schema": 1, "command": "phi", "n": cli.n, "ell": ctx.ell(), "result": v}),
                )
            } else {
                v
            }
        }
        Command::Nakayama { .. } => {
            let img = ctx.nakayama(e);
            if cli.json {
                pretty(&json!({
                    "schema": 1,
                    "command": "nakayama",
                    "n": cli.n,
                    "ell": ctx.ell(),
                    "result": alg.format(&img),
                    "terms": element_json(alg, &img),
                }))
            } else {
                alg.format(&img)
            }
        }
        _ => unreachable!("handled by execute"),
    })
}

fn run_check(
    cli: &Cli,
    which: CheckArg,
    max_len: usize,
    max_degree: u32,
    pairs: usize,
) -> Result<CheckReport> {
    let cfg = config(cli)?;
    Ok(match which {
        CheckArg::Central => match cli.ell {
            None => Algebra::new(cfg, LaurentRing).check_central(),
            Some(ell) => Algebra::new(cfg, cyclo(ell)?).check_central(),
        },
        CheckArg::PbwConfluence => {
            let mut cfg = cfg;
            cfg.variant = Variant::Mn;
            match cli.ell {
                None => {
                    let alg = Algebra::new(cfg, LaurentRing);
                    let mut r = alg.check_confluence(max_len);
                    r.cases.extend(alg.check_q_one(max_len).cases);
                    r
                }
                Some(ell) => Algebra::new(cfg, cyclo(ell)?).check_confluence(max_len),
            }
        }
        CheckArg::Iso => {
            let mut cfg = cfg;
            cfg.variant = Variant::GLn;
            match cli.ell {
                None => Algebra::new(cfg, LaurentRing).check_iso(),
                Some(ell) => Algebra::new(cfg, cyclo(ell)?).check_iso(),
            }
        }
        CheckArg::Identities => {
            let mut cfg = cfg;
            cfg.variant = Variant::GLn;
            match cli.ell {
                None => Algebra::new(cfg, LaurentRing).check_identities(max_degree),
                Some(ell) => Algebra::new(cfg, cyclo(ell)?).check_identities(max_degree),
            }
        }
        CheckArg::Frobenius => {
            let ctx = frobenius_context(cli, Some(cli.ell.unwrap_or(3)))?;
            let mut r = ctx.root().check_frobenius_central();
            if (ctx.ell() as usize).pow((cli.n * cli.n) as u32) <= DUAL_WITNESS_LIMIT {
                r.cases.extend(ctx.check_dual_witnesses().cases);
            }
            r
        }
        CheckArg::Nakayama => {
            let ctx = frobenius_context(cli, Some(cli.ell.unwrap_or(3)))?;
            ctx.check_nakayama(pairs)
        }
    })
}
