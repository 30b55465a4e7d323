//! `mage`: command-line front end for the mage-core library.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use mage_core::bgg::{bgg_apply, kernel_basis, DEFAULT_CAP};
use mage_core::conformal::{
    check_system, conformal_check, det_i_symbolic, field_rank, fundamental_forms, graph_form, hyperplane_test,
    phi_obstruction, sp6_generators, Metric, NormalRule, VectorField,
};
use mage_core::expr::{parse_function, parse_point};
use mage_core::lgrass::{minor_relations, minors_chart, rank_one_line, LagrangianPlane};
use mage_core::poly::{format_rational, parse_rational};
use mage_core::symbols::{classify, exceptionality_at_roots, is_completely_exceptional, EquationType, PdeFunction};
use mage_core::{Error, Rational, Var};

const SCHEMA: &str = "mage/1";

#[derive(Parser)]
#[command(name = "mage", version, about = "Exact tools for second-order PDEs on the Lagrangian Grassmannian")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct Common {
    /// Number of independent variables.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Expression, or `@path` to read it from a file.
    #[arg(long)]
    expr: Option<String>,
    /// Point such as "p11=1/2, p12=0".
    #[arg(long)]
    point: Option<String>,
    /// Emit the JSON envelope instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Type, discriminant and characteristic roots (n = 2).
    Classify {
        #[command(flatten)]
        common: Common,
        /// Also print floating-point root approximations.
        #[arg(long)]
        approx: bool,
    },
    /// The symbol, or with --r k the iterated symbol of order k.
    Symbol {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// Complete exceptionality: is Smbl^2 a multiple of Smbl?
    IsMa {
        #[command(flatten)]
        common: Common,
    },
    /// The two-equation system for p22 = h(p11, p12) and its three-equation
    /// trace-free counterpart.
    CheckSystem {
        #[command(flatten)]
        common: Common,
    },
    /// First, second and trace-free second fundamental forms (n = 2).
    FundamentalForms {
        #[command(flatten)]
        common: Common,
        /// Conformal factor: use the metric exp(2*lambda)*T2.
        #[arg(long)]
        lambda: Option<String>,
        /// Normalise the normal by g(N, d/dv) = 1 for this coordinate.
        #[arg(long)]
        normal: Option<String>,
        /// Check det I = -Delta/(4 (k3 + k0 p11)^2) for symbolic k0..k4.
        #[arg(long)]
        det_identity: bool,
    },
    /// Is the hypersurface F = 0 a hyperplane section (n = 2, 3)?
    HyperplaneTest {
        #[command(flatten)]
        common: Common,
    },
    /// Basis of the polynomial kernel of the BGG operator of order r + 1.
    BggKernel {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// Largest admissible number of monomial columns.
        #[arg(long)]
        cap: Option<u128>,
    },
    /// Apply the BGG operator of order r + 1 to a polynomial.
    BggApply {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// Minors of the symmetric matrix given by --point.
    Pluecker {
        #[command(flatten)]
        common: Common,
    },
    /// The curve t -> minors(P + t xi xi^T).
    RankOneLine {
        #[command(flatten)]
        common: Common,
        /// Covector such as "1,2".
        #[arg(long)]
        xi: String,
    },
    /// Conformal factors of the 21 symmetries of T_3.
    Sp6Check {
        #[arg(long)]
        json: bool,
    },
    /// The obstruction tensor Phi (n = 2, 3).
    Phi {
        #[command(flatten)]
        common: Common,
        /// Sample points for n = 3.
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Usage(String),
    Math(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(e)
    }
}

type Outcome = Result<(Value, String), Failure>;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serialisable payload")
}

fn read_expr(common: &Common) -> Result<String, Failure> {
    let raw = common.expr.as_deref().ok_or_else(|| Failure::Usage("--expr is required".into()))?;
    match raw.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}"))),
        None => Ok(raw.to_string()),
    }
}

fn pde(common: &Common) -> Result<PdeFunction, Failure> {
    Ok(PdeFunction::parse(&read_expr(common)?, common.n)?)
}

fn point(common: &Common) -> Result<Option<std::collections::BTreeMap<Var, Rational>>, Failure> {
    match &common.point {
        Some(p) => Ok(Some(parse_point(p, common.n)?)),
        None => Ok(None),
    }
}

fn strings(v: &Value) -> String {
    match v {
        Value::Array(xs) => xs.iter().map(|x| x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string())).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

fn run(command: &Command) -> Outcome {
    match command {
        Command::Classify { common, approx } => {
            let f = pde(common)?;
            let pt = point(common)?;
            let result = classify(&f, pt.as_ref())?;
            let mut payload = to_value(&result);
            let obj = payload.as_object_mut().expect("object");
            obj.remove("roots_approx");
            if *approx {
                if let Some(r) = &result.roots_approx {
                    obj.insert("roots_approx".into(), json!(r.iter().map(|x| format!("{x:.12}")).collect::<Vec<_>>()));
                    obj.insert("approx_digits".into(), json!(12));
                }
            }
            if let Some(pt) = &pt {
                if result.equation_type == EquationType::Hyperbolic {
                    if let Ok(report) = exceptionality_at_roots(&f, pt) {
                        obj.insert("characteristics".into(), to_value(&report));
                    }
                }
            }
            let mut text = format!("type: {}\ndelta: {}", obj["type"].as_str().unwrap_or(""), result.delta);
            if let Some(roots) = &result.roots {
                text.push_str(&format!("\nroots: {}", roots.join(", ")));
            }
            Ok((payload, text))
        }
        Command::Symbol { common, r } => {
            let f = pde(common)?;
            let s = f.iterated_symbol(*r)?;
            let text = s.to_string();
            Ok((json!({ "order": r, "symbol": to_value(&s) }), text))
        }
        Command::IsMa { common } => {
            let report = is_completely_exceptional(&pde(common)?)?;
            let text = format!(
                "globally proportional: {}\non-shell proportional: {}",
                report.globally_proportional, report.on_shell_proportional
            );
            Ok((to_value(&report), text))
        }
        Command::CheckSystem { common } => {
            if common.n != 2 {
                return Err(Failure::Usage("check-system is defined for n = 2".into()));
            }
            let h = parse_function(&read_expr(common)?, 2)?;
            let report = check_system(&h)?;
            let payload = to_value(&report);
            let text = format!("residuals: {}\nvanishes: {}", strings(&payload["residuals"]), report.vanishes);
            Ok((payload, text))
        }
        Command::FundamentalForms { common, lambda, normal, det_identity } => {
            if *det_identity {
                let r = det_i_symbolic()?;
                let text = format!("det I = {}\nexpected = {}\nholds: {}", r.det_first, r.expected, r.holds);
                return Ok((to_value(&r), text));
            }
            let graph = graph_form(&pde(common)?)?;
            let metric = match lambda {
                Some(l) => Metric::Conformal(parse_function(l, 2)?),
                None => Metric::T2,
            };
            let rule = match normal {
                Some(v) => NormalRule::Coordinate(Var::from_name(v, 2)?),
                None => NormalRule::Solved,
            };
            let forms = fundamental_forms(&graph, &metric, &rule)?;
            let payload = to_value(&forms);
            let text = format!(
                "graph: {} = {}\nI: {}\nII: {}\ndet I: {}",
                graph.solved,
                graph.h,
                payload["first"]["entries"],
                payload["second"]["entries"],
                forms.det_first
            );
            Ok((payload, text))
        }
        Command::HyperplaneTest { common } => {
            let v = hyperplane_test(&pde(common)?)?;
            let text = format!("hyperplane section: {}", v.is_section);
            Ok((to_value(&v), text))
        }
        Command::BggKernel { common, r, cap } => {
            let k = kernel_basis(common.n, *r, cap.unwrap_or(DEFAULT_CAP))?;
            let mut text = format!("dimension: {}\nmax degree: {}", k.dimension(), k.max_degree());
            for b in &k.basis {
                text.push_str(&format!("\n  {b}"));
            }
            Ok((to_value(&k), text))
        }
        Command::BggApply { common, r } => {
            let f = parse_function(&read_expr(common)?, common.n)?;
            let p = f.as_polynomial().ok_or_else(|| Failure::Usage("bgg-apply needs a polynomial".into()))?;
            let out = bgg_apply(p, common.n, *r)?;
            let text = out.to_string();
            Ok((to_value(&out), text))
        }
        Command::Pluecker { common } => {
            let pt = point(common)?.unwrap_or_default();
            let plane = LagrangianPlane::from_point(common.n, &pt);
            let w = minors_chart(&plane);
            let relations: Vec<String> = minor_relations(common.n)
                .iter()
                .map(|c| format_rational(&c.iter().zip(w.coords()).map(|(a, b)| a * b).sum::<Rational>()))
                .collect();
            let mut payload = json!({ "minors": to_value(&w), "linear_relations": relations });
            if common.n == 2 {
                let c = w.coords();
                let q = &c[0] * &c[4] - &c[1] * &c[3] + &c[2] * &c[2];
                payload["quadric"] = json!(format_rational(&q));
            }
            let text = w.coords().iter().map(format_rational).collect::<Vec<_>>().join(" : ");
            Ok((payload, text))
        }
        Command::RankOneLine { common, xi } => {
            let pt = point(common)?.unwrap_or_default();
            let plane = LagrangianPlane::from_point(common.n, &pt);
            let xi: Vec<Rational> = xi.split(',').map(|s| parse_rational(s.trim())).collect::<Result<_, _>>()?;
            let line = rank_one_line(&plane, &xi)?;
            let text = format!(
                "base: {}\ndirection: {}\nstraight: {}",
                line.base.coords().iter().map(format_rational).collect::<Vec<_>>().join(" : "),
                line.direction.coords().iter().map(format_rational).collect::<Vec<_>>().join(" : "),
                line.is_straight()
            );
            let mut payload = to_value(&line);
            payload["straight"] = json!(line.is_straight());
            Ok((payload, text))
        }
        Command::Sp6Check { .. } => {
            let gens = sp6_generators();
            let checks = gens.iter().map(conformal_check).collect::<Result<Vec<_>, _>>()?;
            let rank = field_rank(&gens)?;
            let stretching = conformal_check(&VectorField::stretching(3))?;
            let all = checks.iter().all(|c| c.conformal);
            let mut text = String::new();
            for c in &checks {
                let f = c.factor.as_ref().map(ToString::to_string).unwrap_or_else(|| "not conformal".into());
                text.push_str(&format!("{}: {}\n", c.label, f));
            }
            text.push_str(&format!("rank: {rank}\nstretching: {}", stretching.factor.as_ref().map(ToString::to_string).unwrap_or_default()));
            let payload = json!({
                "generators": gens.iter().zip(&checks).map(|(g, c)| json!({ "field": to_value(g), "check": to_value(c) })).collect::<Vec<_>>(),
                "all_conformal": all,
                "rank": rank,
                "stretching": to_value(&stretching),
            });
            Ok((payload, text))
        }
        Command::Phi { common, samples, seed } => {
            let report = phi_obstruction(&pde(common)?, *samples, *seed)?;
            let text = format!("vanishes: {}", report.vanishes);
            Ok((to_value(&report), text))
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify { .. } => "classify",
        Command::Symbol { .. } => "symbol",
        Command::IsMa { .. } => "is-ma",
        Command::CheckSystem { .. } => "check-system",
        Command::FundamentalForms { .. } => "fundamental-forms",
        Command::HyperplaneTest { .. } => "hyperplane-test",
        Command::BggKernel { .. } => "bgg-kernel",
        Command::BggApply { .. } => "bgg-apply",
        Command::Pluecker { .. } => "pluecker",
        Command::RankOneLine { .. } => "rank-one-line",
        Command::Sp6Check { .. } => "sp6-check",
        Command::Phi { .. } => "phi",
    }
}

fn wants_json(c: &Command) -> bool {
    match c {
        Command::Classify { common, .. }
        | Command::Symbol { common, .. }
        | Command::IsMa { common }
        | Command::CheckSystem { common }
        | Command::FundamentalForms { common, .. }
        | Command::HyperplaneTest { common }
        | Command::BggKernel { common, .. }
        | Command::BggApply { common, .. }
        | Command::Pluecker { common }
        | Command::RankOneLine { common, .. }
        | Command::Phi { common, .. } => common.json,
        Command::Sp6Check { json } => *json,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let name = command_name(&cli.command);
    let arguments: Vec<String> = std::env::args().skip(2).collect();
    let start = Instant::now();
    let outcome = run(&cli.command);
    let timing_ms = start.elapsed().as_secs_f64() * 1000.0;
    let (status, payload, code, text) = match outcome {
        Ok((payload, text)) => ("ok", payload, 0u8, text),
        Err(Failure::Usage(msg)) => ("error", json!({ "kind": "usage", "message": msg }), 2, msg),
        Err(Failure::Math(e)) => ("error", json!({ "kind": "math", "message": e.to_string() }), 3, e.to_string()),
    };
    if wants_json(&cli.command) {
        let envelope = json!({
            "schema": SCHEMA,
            "command": name,
            "arguments": arguments,
            "status": status,
            "payload": payload,
            "timing_ms": timing_ms,
        });
        println!("{}", serde_json::to_string_pretty(&envelope).expect("valid JSON"));
    } else if code == 0 {
        println!("{text}");
    }
    if code != 0 {
        eprintln!("error: {text}");
    }
    ExitCode::from(code)
}
