//! czv: exact renormalised conical zeta values from the command line.
//!
//! Output is deterministic: identical invocations print identical bytes.
//! Exit codes: 0 success, 1 failed check, 2 invalid input, 3 unsupported
//! cone, 4 invalid direction, 5 internal invariant violation.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use czv_core::checks;
use czv_core::coalgebra::{Coalgebra, ColouredLatticeCone};
use czv_core::cones::{
    chen_cone, simplicial_subdivide, smooth_subdivide, transverse_cone, LatticeCone,
    LatticeConeDto, Subdivision,
};
use czv_core::error::Error;
use czv_core::exact::{fmt_rat, parse_rat, InnerProduct, Rat, RatVec};
use czv_core::renormalise::{
    chen_direction_valid, compare_schemes, default_order, exp_integral, exp_sum_open, mzv_ren,
    zeta_ren, CheckReport, Scheme, ZetaRequest,
};

#[derive(Parser)]
#[command(
    name = "czv",
    version,
    about = "Exact renormalised conical zeta values",
    long_about = "Computes renormalised conical zeta values and the exact objects behind them: \
                  exponential sum germs over open lattice cones, exponential integrals, cone \
                  coproducts, subdivisions, and cross-validation reports. All arithmetic is \
                  exact rational."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

const CONE_HELP: &str = "Cone source: \"chen:k\", a JSON file path, or inline JSON \
                         {\"generators\": [[\"1\",\"0\"], ...], \"lattice\": optional basis}";

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    /// Project multivariate germs onto their holomorphic part
    Multivariate,
    /// Restrict to a ray, then subtract the pole part minimally
    Univariate,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SubdivisionKind {
    /// Refine until every piece is unimodular
    Smooth,
    /// Triangulate into simplicial pieces only
    Simplicial,
}

#[derive(Subcommand)]
enum Cmd {
    /// Renormalised zeta value of a cone at a nonpositive colour
    Zeta {
        #[arg(long, help = CONE_HELP)]
        cone: String,
        /// Comma-separated nonpositive integers, one per coordinate
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        colour: String,
        #[arg(long, value_enum, default_value = "multivariate")]
        scheme: SchemeArg,
        /// Direction for the univariate scheme, comma-separated rationals
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<String>,
        /// Working jet order (default: colour weight + 6)
        #[arg(long, allow_hyphen_values = true)]
        order: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Renormalised multiple zeta value at nonpositive integer arguments
    Mzv {
        /// Comma-separated nonpositive integers s1,...,sk
        #[arg(allow_hyphen_values = true)]
        args: String,
        #[arg(long)]
        json: bool,
    },
    /// Exponential sum germ over the open cone, as a meromorphic jet
    Germ {
        #[arg(long, help = CONE_HELP)]
        cone: String,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        colour: String,
        #[arg(long, allow_hyphen_values = true)]
        order: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Exponential integral of the cone, an exact rational function
    Integral {
        #[arg(long, help = CONE_HELP)]
        cone: String,
        #[arg(long, allow_hyphen_values = true)]
        order: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Coproduct of a coloured cone in the lattice-cone coalgebra
    Coproduct {
        #[arg(long, help = CONE_HELP)]
        cone: String,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        colour: String,
        /// Drop the two unit-factor terms
        #[arg(long)]
        reduced: bool,
        #[arg(long)]
        json: bool,
    },
    /// Subdivide a cone
    Subdivide {
        #[arg(long, help = CONE_HELP)]
        cone: String,
        #[arg(long, value_enum, default_value = "smooth")]
        kind: SubdivisionKind,
        #[arg(long)]
        json: bool,
    },
    /// Transverse cone of a face: project cone and lattice onto the
    /// orthogonal complement of the face
    Transverse {
        #[arg(long, help = CONE_HELP)]
        cone: String,
        #[arg(long, help = "Face of the cone, same source syntax")]
        face: String,
        #[arg(long)]
        json: bool,
    },
    /// Cross-validate the univariate scheme against the multivariate one
    Compare {
        #[arg(long, help = CONE_HELP)]
        cone: String,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        colour: String,
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
        #[arg(long, allow_hyphen_values = true)]
        order: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Run self-check suites and report per-case verdicts
    Check {
        /// One suite name; all suites when omitted
        #[arg(long)]
        suite: Option<String>,
        /// Working order override for the jet-comparison suites
        #[arg(long, allow_hyphen_values = true)]
        order: Option<i64>,
        #[arg(long)]
        json: bool,
    },
}

fn parse_cone_source(source: &str) -> Result<LatticeCone, Error> {
    if let Some(k) = source.strip_prefix("chen:") {
        let k: usize = k
            .parse()
            .map_err(|_| Error::invalid(format!("bad Chen cone size: {k:?}")))?;
        return chen_cone(k);
    }
    let text = if source.trim_start().starts_with('{') {
        source.to_string()
    } else {
        std::fs::read_to_string(source)
            .map_err(|e| Error::invalid(format!("cannot read cone file {source}: {e}")))?
    };
    let dto: LatticeConeDto = serde_json::from_str(&text)
        .map_err(|e| Error::invalid(format!("bad cone JSON: {e}")))?;
    dto.to_cone()
}

fn parse_colour(s: &str) -> Result<Vec<i64>, Error> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::invalid(format!("bad colour entry: {t:?}")))
        })
        .collect()
}

fn parse_direction(s: &str) -> Result<Vec<Rat>, Error> {
    let entries: Vec<Rat> = s
        .split(',')
        .map(|t| parse_rat(t.trim()))
        .collect::<Result<_, _>>()?;
    if entries.is_empty() {
        return Err(Error::invalid("empty direction"));
    }
    Ok(entries)
}

fn coloured(cone: LatticeCone, colour: &[i64]) -> Result<ColouredLatticeCone, Error> {
    ColouredLatticeCone::new(cone, colour)
}

fn render_report_text(report: &CheckReport, out: &mut String) {
    let _ = writeln!(out, "suite {}", report.suite);
    for case in &report.cases {
        let _ = writeln!(
            out,
            "  {} {}",
            if case.pass { "PASS" } else { "FAIL" },
            case.input
        );
        if !case.pass {
            if let Some(e) = &case.expected {
                let _ = writeln!(out, "       expected: {e}");
            }
            let _ = writeln!(out, "       got: {}", case.got);
        }
    }
}

enum Outcome {
    Ok(String),
    ChecksFailed(String),
}

fn execute(cmd: &Cmd) -> Result<Outcome, Error> {
    match cmd {
        Cmd::Zeta {
            cone,
            colour,
            scheme,
            direction,
            order,
            json,
        } => {
            let lc = parse_cone_source(cone)?;
            let colour = parse_colour(colour)?;
            let scheme = match scheme {
                SchemeArg::Multivariate => {
                    if direction.is_some() {
                        return Err(Error::invalid(
                            "--direction is only used by the univariate scheme",
                        ));
                    }
                    Scheme::Multivariate
                }
                SchemeArg::Univariate => {
                    let a = parse_direction(direction.as_deref().ok_or_else(|| {
                        Error::invalid("the univariate scheme requires --direction")
                    })?)?;
                    if cone.starts_with("chen:") && !chen_direction_valid(&a) {
                        return Err(Error::direction(
                            "Chen-cone directions must be strictly increasing and negative \
                             for a scheme-independent value",
                        ));
                    }
                    Scheme::Univariate(a)
                }
            };
            let scheme_name = match &scheme {
                Scheme::Multivariate => "multivariate",
                Scheme::Univariate(_) => "univariate",
            };
            let value = zeta_ren(&ZetaRequest {
                cone: lc.clone(),
                colour: colour.clone(),
                scheme,
                order: *order,
            })?;
            Ok(Outcome::Ok(if *json {
                json!({
                    "cone": lc.to_string(),
                    "colour": colour,
                    "scheme": scheme_name,
                    "order": order.unwrap_or_else(|| default_order(&colour)),
                    "value": fmt_rat(&value),
                })
                .to_string()
            } else {
                fmt_rat(&value)
            }))
        }
        Cmd::Mzv { args, json } => {
            let s = parse_colour(args)?;
            let value = mzv_ren(&s)?;
            Ok(Outcome::Ok(if *json {
                json!({ "arguments": s, "value": fmt_rat(&value) }).to_string()
            } else {
                fmt_rat(&value)
            }))
        }
        Cmd::Germ {
            cone,
            colour,
            order,
            json,
        } => {
            let lc = parse_cone_source(cone)?;
            let colour = parse_colour(colour)?;
            let n = order.unwrap_or_else(|| default_order(&colour));
            let x = coloured(lc, &colour)?;
            let germ = exp_sum_open(&x, n)?;
            Ok(Outcome::Ok(if *json {
                json!({
                    "cone": x.cone().to_string(),
                    "colour": colour,
                    "order": n,
                    "germ": germ.to_string(),
                })
                .to_string()
            } else {
                germ.to_string()
            }))
        }
        Cmd::Integral { cone, order, json } => {
            let lc = parse_cone_source(cone)?;
            let n = order.unwrap_or(8);
            let germ = exp_integral(&lc, n)?;
            Ok(Outcome::Ok(if *json {
                json!({
                    "cone": lc.to_string(),
                    "order": n,
                    "integral": germ.to_string(),
                })
                .to_string()
            } else {
                germ.to_string()
            }))
        }
        Cmd::Coproduct {
            cone,
            colour,
            reduced,
            json,
        } => {
            let lc = parse_cone_source(cone)?;
            let colour = parse_colour(colour)?;
            let x = coloured(lc, &colour)?;
            let coalgebra = Coalgebra::new(InnerProduct::Standard);
            let tensor = if *reduced {
                coalgebra.reduced_coproduct(&x)?
            } else {
                coalgebra.coproduct_coloured(&x)?
            };
            Ok(Outcome::Ok(if *json {
                let terms: Vec<serde_json::Value> = tensor
                    .terms()
                    .map(|((l, r), c)| {
                        json!({
                            "left": l.to_string(),
                            "right": r.to_string(),
                            "coeff": fmt_rat(c),
                        })
                    })
                    .collect();
                json!({
                    "element": x.to_string(),
                    "reduced": reduced,
                    "terms": terms,
                })
                .to_string()
            } else {
                tensor.to_string()
            }))
        }
        Cmd::Subdivide { cone, kind, json } => {
            let lc = parse_cone_source(cone)?;
            let sub: Subdivision = match kind {
                SubdivisionKind::Smooth => smooth_subdivide(&lc)?,
                SubdivisionKind::Simplicial => simplicial_subdivide(&lc)?,
            };
            Ok(Outcome::Ok(if *json {
                let pieces: Vec<LatticeConeDto> =
                    sub.pieces().iter().map(LatticeConeDto::from_cone).collect();
                json!({
                    "parent": LatticeConeDto::from_cone(sub.parent()),
                    "pieces": pieces,
                })
                .to_string()
            } else {
                sub.to_string()
            }))
        }
        Cmd::Transverse { cone, face, json } => {
            let lc = parse_cone_source(cone)?;
            let f = parse_cone_source(face)?;
            let t = transverse_cone(&lc, &f, &InnerProduct::Standard)?;
            Ok(Outcome::Ok(if *json {
                serde_json::to_string(&LatticeConeDto::from_cone(&t))
                    .map_err(|e| Error::invariant(format!("serialisation failed: {e}")))?
            } else {
                t.to_string()
            }))
        }
        Cmd::Compare {
            cone,
            colour,
            direction,
            order,
            json,
        } => {
            let lc = parse_cone_source(cone)?;
            let colour = parse_colour(colour)?;
            let a = parse_direction(direction)?;
            if cone.starts_with("chen:") && !chen_direction_valid(&a) {
                return Err(Error::direction(
                    "Chen-cone directions must be strictly increasing and negative",
                ));
            }
            let n = order.unwrap_or_else(|| default_order(&colour));
            let x = coloured(lc, &colour)?;
            let report = compare_schemes(&x, &RatVec::new(a), n)?;
            let rendered = if *json {
                serde_json::to_string_pretty(&report)
                    .map_err(|e| Error::invariant(format!("serialisation failed: {e}")))?
            } else {
                let mut out = String::new();
                render_report_text(&report, &mut out);
                out.pop();
                out
            };
            Ok(if report.all_pass() {
                Outcome::Ok(rendered)
            } else {
                Outcome::ChecksFailed(rendered)
            })
        }
        Cmd::Check { suite, order, json } => {
            let reports = match suite {
                Some(name) => vec![checks::run_suite(name, *order)?],
                None => {
                    if order.is_some() {
                        return Err(Error::invalid(
                            "--order needs --suite; the full run uses per-suite defaults",
                        ));
                    }
                    checks::run_all()?
                }
            };
            let all_pass = reports.iter().all(|r| r.all_pass());
            let rendered = if *json {
                serde_json::to_string_pretty(&reports)
                    .map_err(|e| Error::invariant(format!("serialisation failed: {e}")))?
            } else {
                let mut out = String::new();
                for report in &reports {
                    render_report_text(report, &mut out);
                }
                let cases: usize = reports.iter().map(|r| r.cases.len()).sum();
                let failed: usize = reports
                    .iter()
                    .flat_map(|r| &r.cases)
                    .filter(|c| !c.pass)
                    .count();
                let _ = write!(
                    out,
                    "{} of {} cases passed",
                    cases - failed,
                    cases
                );
                out
            };
            Ok(if all_pass {
                Outcome::Ok(rendered)
            } else {
                Outcome::ChecksFailed(rendered)
            })
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) => 2,
        Error::UnsupportedCone(_) => 3,
        Error::InvalidDirection(_) => 4,
        Error::Invariant(_) => 5,
    }
}

/// Print a line to stdout. A closed pipe (as in `czv check --json | head`)
/// is not a failure of the command itself; any other write error is.
fn emit(text: &str) -> ExitCode {
    use std::io::{ErrorKind, Write};
    let mut out = std::io::stdout().lock();
    let done = writeln!(out, "{text}").and_then(|_| out.flush());
    match done {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.kind() == ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.cmd) {
        Ok(Outcome::Ok(text)) => emit(&text),
        Ok(Outcome::ChecksFailed(text)) => {
            emit(&text);
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
