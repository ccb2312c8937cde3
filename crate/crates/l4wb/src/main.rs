//! Command-line front end for the L^4-norm workbench. Every subcommand
//! writes a schema-versioned report (JSON or CSV) to stdout or a file.
//! Exit codes: 0 success, 2 validation error, 3 budget/convergence
//! failure. All computations are deterministic; the --threads flag is
//! validated but execution stays sequential (fixed reduction order).

use clap::{Args, Parser, Subcommand, ValueEnum};
use l4wb::bessel_avg::{bessel_avg_pair, pair_bound_checks, BesselAvgConfig};
use l4wb::expsums::s1_sum;
use l4wb::geometry::{spectral_check, watson_check, DomainGrid};
use l4wb::hecke::{self, eigenforms, eigenforms_with_budget, Eigenform};
use l4wb::kloosterman::{kloosterman, weil_check};
use l4wb::lfun;
use l4wb::poisson;
use l4wb::report::{Diagnostics, Report};
use l4wb::trace::{maindone_check, petersson_check, theorem_average, TraceCheckConfig};
use l4wb::{Error, Result};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "l4wb",
    about = "Verification workbench for L^4-norms of holomorphic Hecke eigenforms",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    run: RunFlags,
}

#[derive(Args)]
struct RunFlags {
    /// Target tolerance for checks that take one
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,

    /// Directory for the on-disk q-expansion cache (env L4WB_CACHE
    /// overrides)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Worker count (validated; execution is sequential and
    /// deterministic regardless)
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum LvalueKind {
    CentralG,
    CentralSym2xg,
    EdgeSym2,
    EdgeSym2Inv,
}

#[derive(Subcommand)]
enum Command {
    /// Build (or load from cache) the Victor Miller basis of S_k
    Basis {
        #[arg(long)]
        weight: u32,
        /// q-expansion truncation; defaults to the weight's standard
        /// coefficient budget
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// Diagonalize the Hecke action: eigenvalues and eigenform data
    Eigen {
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// One Kloosterman sum S(n, m; c) with its Weil-bound check
    Kloosterman {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        c: u64,
    },
    /// Scan the normalized complete sum S1(c2', r1, b2) over moduli
    ExpsumScan {
        #[arg(long, default_value_t = 50)]
        c2p_max: u64,
        #[arg(long, default_value_t = 1)]
        r1: u64,
        #[arg(long, default_value_t = 1)]
        b2: u64,
    },
    /// Weight-averaged Bessel pair sum at one (x, y) with bound checks
    BesselAvg {
        #[arg(long, default_value_t = 40.0)]
        k_scale: f64,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
    /// One L-value: edge or central, direct or reciprocal
    Lvalue {
        /// Weight of the primary form (the form g for central-g, f
        /// otherwise)
        #[arg(long)]
        weight: u32,
        #[arg(long, default_value_t = 0)]
        form_index: usize,
        #[arg(long, value_enum)]
        kind: LvalueKind,
        /// Smoothing scale X for the edge kinds
        #[arg(long)]
        x: Option<f64>,
        /// Index of g in B_{2k} for central-sym2xg
        #[arg(long, default_value_t = 0)]
        g_index: usize,
    },
    /// Spectral decomposition of ||F||_4^4 over the weight-2k basis
    L4 {
        #[arg(long)]
        weight: u32,
        #[arg(long, default_value_t = 0)]
        form_index: usize,
    },
    /// Watson's formula: quadrature |<F^2, G>|^2 against the L-values
    Watson {
        #[arg(long)]
        weight: u32,
        #[arg(long, default_value_t = 0)]
        form_index: usize,
        #[arg(long, default_value_t = 0)]
        g_index: usize,
    },
    /// Petersson trace formula at one (k, n, m)
    TraceCheck {
        #[arg(long)]
        weight: u32,
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        m: u64,
        /// Kloosterman truncation; 0 selects it from the tolerance
        #[arg(long, default_value_t = 0)]
        c_max: usize,
    },
    /// End-to-end main-term identity for ||F||_4^4
    MaindoneCheck {
        #[arg(long, default_value_t = 12)]
        weight: u32,
        #[arg(long, default_value_t = 0)]
        form_index: usize,
        /// Multiplier on every truncation budget
        #[arg(long, default_value_t = 1.0)]
        budget_scale: f64,
    },
    /// Desk-scale averaged L^4 experiment at scale K
    TheoremAvg {
        #[arg(long = "K")]
        k_scale: u32,
        /// Add the quadrature cross-check for weights <= 22
        #[arg(long, default_value_t = false)]
        quadrature: bool,
    },
    /// Poisson-summation comparator for a smoothed Kloosterman sum
    PoissonCheck {
        #[arg(long, default_value_t = 5)]
        c: u64,
        #[arg(long, default_value_t = 1000)]
        n_scale: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(match run(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    });
}

fn cache_dir(flags: &RunFlags) -> Option<PathBuf> {
    std::env::var_os("L4WB_CACHE")
        .map(PathBuf::from)
        .or_else(|| flags.cache_dir.clone())
}

fn forms_for(k: u32, budget: usize) -> Result<std::sync::Arc<Vec<Eigenform>>> {
    eigenforms_with_budget(k, budget.max(hecke::default_budget(k)))
}

fn pick(forms: &[Eigenform], index: usize) -> Result<&Eigenform> {
    forms.get(index).ok_or_else(|| {
        Error::invalid(format!(
            "form index {index} out of range (dimension {})",
            forms.len()
        ))
    })
}

fn run(cli: Cli) -> Result<()> {
    let flags = &cli.run;
    if !(flags.tol >= 1e-12 && flags.tol <= 1e-2) {
        return Err(Error::invalid(format!(
            "tol must lie in [1e-12, 1e-2], got {}",
            flags.tol
        )));
    }
    if flags.threads < 1 {
        return Err(Error::invalid("threads must be >= 1"));
    }
    let started = Instant::now();
    let (name, inputs, results) = dispatch(&cli.command, flags)?;
    let report = Report::new(
        name,
        inputs,
        results,
        Diagnostics {
            runtime_ms: started.elapsed().as_millis(),
            tol: flags.tol,
            threads: flags.threads,
        },
    );
    report.write(flags.output.as_deref(), flags.format == Format::Csv)
}

fn dispatch(cmd: &Command, flags: &RunFlags) -> Result<(&'static str, Value, Value)> {
    match *cmd {
        Command::Basis { weight, truncation } => {
            let n_trunc = truncation.unwrap_or_else(|| hecke::default_budget(weight));
            let dir = cache_dir(flags);
            let space = l4wb::qcache::load_or_build(dir.as_deref(), weight, n_trunc)?;
            let lead: Vec<Vec<String>> = space
                .basis
                .iter()
                .map(|g| (0..=16.min(n_trunc)).map(|n| g.coeff(n).to_string()).collect())
                .collect();
            Ok((
                "basis",
                json!({"weight": weight, "truncation": n_trunc, "cache_dir": dir}),
                json!({
                    "weight": weight,
                    "dim": space.dim(),
                    "truncation": space.truncation(),
                    "leading_coefficients": lead,
                }),
            ))
        }
        Command::Eigen { weight, truncation } => {
            let n_trunc = truncation.unwrap_or_else(|| hecke::default_budget(weight));
            let dir = cache_dir(flags);
            let space = l4wb::qcache::load_or_build(dir.as_deref(), weight, n_trunc)?;
            let forms = eigenforms(&space)?;
            let mut records = Vec::new();
            for f in &forms {
                let lambda: Vec<String> =
                    (2..=10usize).map(|n| f.lambda(n).unwrap().to_string()).collect();
                let a: Vec<f64> = (1..=10u64).map(|n| f.a(n).unwrap()).collect();
                records.push(json!({
                    "label": f.label,
                    "charpoly_t2": f.charpoly2.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "lambda_2_to_10": lambda,
                    "a_1_to_10": a,
                }));
            }
            Ok((
                "eigen",
                json!({"weight": weight, "truncation": n_trunc}),
                json!({"weight": weight, "dim": forms.len(), "forms": records}),
            ))
        }
        Command::Kloosterman { n, m, c } => {
            let value = kloosterman(n, m, c);
            Ok((
                "kloosterman",
                json!({"n": n, "m": m, "c": c}),
                json!({
                    "value": value,
                    "weil_ok": weil_check(n, m, c),
                }),
            ))
        }
        Command::ExpsumScan { c2p_max, r1, b2 } => {
            if c2p_max < 1 {
                return Err(Error::invalid("c2p_max must be >= 1"));
            }
            let mut rows = Vec::new();
            for c2p in 1..=c2p_max {
                if l4wb::arith::gcd(b2, c2p) != 1 {
                    continue;
                }
                let v = s1_sum(c2p, r1, b2)?;
                let root = (c2p as f64).sqrt().round() as u64;
                let is_square = root * root == c2p;
                rows.push(json!([
                    c2p,
                    r1,
                    b2,
                    v.re,
                    v.im,
                    is_square,
                    v.norm() <= 1.0 + 1e-9
                ]));
            }
            Ok((
                "expsum-scan",
                json!({"c2p_max": c2p_max, "r1": r1, "b2": b2}),
                json!({
                    "header": ["c2p", "r1", "b2", "re", "im", "is_square", "passes_bound"],
                    "rows": rows,
                }),
            ))
        }
        Command::BesselAvg { k_scale, x, y } => {
            let cfg = BesselAvgConfig::new(k_scale)?;
            let pair = bessel_avg_pair(&cfg, x, y)?;
            let mut rows = Vec::new();
            match pair_bound_checks(&cfg, x, y) {
                Ok(rep) => {
                    for chk in &rep.checks {
                        rows.push(json!([
                            k_scale,
                            x,
                            y,
                            pair.value.re,
                            pair.value.im,
                            pair.phase_removed.norm(),
                            pair.support_flag,
                            chk.name,
                            chk.bound,
                            chk.pass
                        ]));
                    }
                }
                Err(_) => rows.push(json!([
                    k_scale,
                    x,
                    y,
                    pair.value.re,
                    pair.value.im,
                    pair.phase_removed.norm(),
                    pair.support_flag,
                    "none",
                    0.0,
                    true
                ])),
            }
            Ok((
                "bessel-avg",
                json!({"k_scale": k_scale, "x": x, "y": y}),
                json!({
                    "header": ["K", "x", "y", "re", "im", "abs_phase_removed",
                               "support_flag", "bound_name", "bound_value", "pass"],
                    "rows": rows,
                }),
            ))
        }
        Command::Lvalue {
            weight,
            form_index,
            kind,
            x,
            g_index,
        } => {
            let (lv, label) = match kind {
                LvalueKind::CentralG => {
                    if weight % 4 != 0 || weight < 24 {
                        return Err(Error::invalid(
                            "central-g needs a form of weight 2k with k >= 12 even",
                        ));
                    }
                    let k = weight / 2;
                    let budget = 40 * k as usize;
                    let gs = forms_for(weight, budget)?;
                    let g = pick(&gs, form_index)?;
                    (lfun::central_value_g(g, k)?, g.label)
                }
                LvalueKind::CentralSym2xg => {
                    let k = weight;
                    let budget = 40 * (k as usize) * (k as usize);
                    let fs = forms_for(k, budget)?;
                    let gs = forms_for(2 * k, budget)?;
                    let f = pick(&fs, form_index)?;
                    let g = pick(&gs, g_index)?;
                    (lfun::central_value_sym2xg(f, g)?, f.label)
                }
                LvalueKind::EdgeSym2 => {
                    let fs = forms_for(weight, 0)?;
                    let f = pick(&fs, form_index)?;
                    let lv = match x {
                        Some(x) => lfun::edge_sym2(f, x)?,
                        None => lfun::edge_sym2_default(f)?,
                    };
                    (lv, f.label)
                }
                LvalueKind::EdgeSym2Inv => {
                    let fs = forms_for(weight, 0)?;
                    let f = pick(&fs, form_index)?;
                    (lfun::edge_sym2_inverse(f, x.unwrap_or(10_000.0))?, f.label)
                }
            };
            Ok((
                "lvalue",
                json!({
                    "weight": weight, "form_index": form_index, "g_index": g_index,
                    "x": x, "tol": flags.tol,
                }),
                json!({
                    "kind": lv.kind,
                    "k": weight,
                    "label": label,
                    "value": lv.value,
                    "tail_bound": lv.tail_bound,
                    "terms": lv.truncation,
                }),
            ))
        }
        Command::L4 {
            weight,
            form_index,
        } => {
            let budget = 40 * (weight as usize) * (weight as usize);
            let fs = forms_for(weight, budget)?;
            let f = pick(&fs, form_index)?;
            let rep = spectral_check(f, DomainGrid::default())?;
            Ok((
                "l4",
                json!({"weight": weight, "form_index": form_index}),
                serde_json::to_value(&rep).unwrap(),
            ))
        }
        Command::Watson {
            weight,
            form_index,
            g_index,
        } => {
            let budget = 40 * (weight as usize) * (weight as usize);
            let fs = forms_for(weight, budget)?;
            let gs = forms_for(2 * weight, budget)?;
            let f = pick(&fs, form_index)?;
            let g = pick(&gs, g_index)?;
            let rep = watson_check(f, g, DomainGrid::default())?;
            Ok((
                "watson",
                json!({"weight": weight, "form_index": form_index, "g_index": g_index}),
                serde_json::to_value(&rep).unwrap(),
            ))
        }
        Command::TraceCheck {
            weight,
            n,
            m,
            c_max,
        } => {
            let rep = petersson_check(TraceCheckConfig {
                k: weight,
                n,
                m,
                c_max,
                tol: flags.tol,
            })?;
            Ok((
                "trace-check",
                json!({"weight": weight, "n": n, "m": m, "c_max": c_max, "tol": flags.tol}),
                serde_json::to_value(&rep).unwrap(),
            ))
        }
        Command::MaindoneCheck {
            weight,
            form_index,
            budget_scale,
        } => {
            let fs = forms_for(weight, 20_000)?;
            let f = pick(&fs, form_index)?;
            let rep = maindone_check(f, budget_scale)?;
            Ok((
                "maindone-check",
                json!({"weight": weight, "form_index": form_index, "budget_scale": budget_scale}),
                serde_json::to_value(&rep).unwrap(),
            ))
        }
        Command::TheoremAvg {
            k_scale,
            quadrature,
        } => {
            let rep = theorem_average(k_scale as f64, quadrature)?;
            Ok((
                "theorem-avg",
                json!({"K": k_scale, "quadrature": quadrature}),
                serde_json::to_value(&rep).unwrap(),
            ))
        }
        Command::PoissonCheck { c, n_scale } => {
            if c < 1 || n_scale < c {
                return Err(Error::invalid("need c >= 1 and n_scale >= c"));
            }
            let cmp = poisson::poisson_compare(
                |n| num_complex::Complex64::new(kloosterman(n as i64, 1, c), 0.0),
                poisson::bump,
                n_scale,
                c,
            );
            Ok((
                "poisson-check",
                json!({"c": c, "n_scale": n_scale}),
                json!({
                    "direct_re": cmp.direct.re,
                    "direct_im": cmp.direct.im,
                    "main_re": cmp.main.re,
                    "main_im": cmp.main.im,
                    "error": cmp.error,
                }),
            ))
        }
    }
}
