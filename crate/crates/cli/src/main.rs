//! `genus-forge`: command-line driver for the genus, modular, bound and
//! covering engines.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use genus_forge::catalog::entry_to_json;
use genus_forge::{
    c_of_b, cover_diameter, elliptic_genus, format_rational, genus_value, index_bound_report, l2_betti_ratio,
    modular_relation_check, tower, twisted_indices, witten_fit, BoundParams, Catalog, EllipticKind, Error, GenusKind,
    IndexFamily,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "genus-forge", version, about = "Exact genera, elliptic genera and related numerics")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the manifold catalog.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Evaluate a classical genus.
    Compute {
        #[arg(long)]
        manifold: String,
        #[arg(long)]
        genus: GenusKind,
    },
    /// q-expansion of an elliptic genus or the Witten genus.
    Elliptic {
        #[arg(long)]
        manifold: String,
        #[arg(long)]
        kind: EllipticKind,
        /// Number of integer powers of q kept.
        #[arg(long, default_value_t = 24)]
        order: u32,
    },
    /// Twisted Dirac indices ind(D ⊗ B_k) or ind(D ⊗ W_j).
    Indices {
        #[arg(long)]
        manifold: String,
        #[arg(long)]
        family: IndexFamily,
        /// Largest k (or j) reported.
        #[arg(long)]
        max: u32,
    },
    /// Eisenstein fits and the level-2 modular relation.
    #[command(subcommand)]
    Modular(ModularCmd),
    /// Analytic constants.
    #[command(subcommand)]
    Bound(BoundCmd),
    /// Torus quotient graphs and subgroup towers.
    #[command(subcommand)]
    Cover(CoverCmd),
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Show { name: String },
}

#[derive(Subcommand)]
enum ModularCmd {
    /// Decompose the Witten genus in E4, E6.
    Fit {
        #[arg(long)]
        manifold: String,
        #[arg(long, default_value_t = 24)]
        order: u32,
    },
    /// Compare Ell1(-1/tau) with (2 tau)^{2m} Ell2(tau) at tau = i * tau_im.
    Check {
        #[arg(long)]
        manifold: String,
        #[arg(long)]
        tau_im: f64,
        #[arg(long, default_value_t = 24)]
        order: u32,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum BoundCmd {
    /// The root C(b).
    Cb {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        b: f64,
    },
    /// Moser constant and the resulting index bound.
    Index(IndexArgs),
}

#[derive(Args)]
struct IndexArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    diam: f64,
    #[arg(long)]
    b: f64,
    #[arg(long, default_value_t = 1.0)]
    cmp: f64,
    /// Only free when m = 2.
    #[arg(long)]
    v: Option<f64>,
    /// Bundle rank.
    #[arg(long, default_value_t = 1)]
    l: u64,
}

#[derive(Subcommand)]
enum CoverCmd {
    /// Base and cover diameters and the diameter inequality.
    Diam {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',')]
        base: Vec<u64>,
        #[arg(long)]
        factor: u64,
        #[arg(long, default_value_t = genus_forge::covering::DEFAULT_VERTEX_CAP)]
        cap: u64,
    },
    Tower {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        depth: u32,
    },
    /// Normalized Betti numbers along the tower.
    L2 {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        depth: u32,
    },
}

/// A finished report: JSON value plus its text rendering.
struct Report {
    json: Value,
    text: String,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) => 1,
        Error::RootNotBracketed(_) | Error::ConvergenceRisk(_) | Error::DivergentEvaluation(_) => 3,
        _ => 2,
    }
}

fn half_exponent(e: u32) -> String {
    if e % 2 == 0 {
        (e / 2).to_string()
    } else {
        format!("{e}/2")
    }
}

fn run(cli: Cli) -> Result<Report, Error> {
    let load = Catalog::from_env;
    Ok(match cli.command {
        Command::Catalog(CatalogCmd::List) => {
            let cat = load()?;
            let entries: Vec<Value> = cat
                .entries()
                .iter()
                .map(|m| json!({"name": m.name, "real_dim": m.real_dim, "full_data": m.has_full_data()}))
                .collect();
            let text = cat
                .entries()
                .iter()
                .map(|m| {
                    let tag = if m.has_full_data() { "" } else { "  (asserted only)" };
                    format!("{:<20} dim {}{tag}", m.name, m.real_dim)
                })
                .collect::<Vec<_>>()
                .join("\n");
            Report {
                json: json!({ "entries": entries }),
                text,
            }
        }
        Command::Catalog(CatalogCmd::Show { name }) => {
            let m = load()?.resolve(&name)?;
            let v = entry_to_json(&m);
            Report {
                text: serde_json::to_string_pretty(&v).expect("json"),
                json: v,
            }
        }
        Command::Compute { manifold, genus } => {
            let m = load()?.resolve(&manifold)?;
            let g = genus_value(&m, genus)?;
            let value = format_rational(&g.value);
            Report {
                json: json!({"manifold": m.name, "genus": genus.name(), "value": value, "asserted": g.asserted}),
                text: if g.asserted { format!("{value} (asserted)") } else { value },
            }
        }
        Command::Elliptic { manifold, kind, order } => {
            let m = load()?.resolve(&manifold)?;
            let g = elliptic_genus(&m, kind, order)?;
            let step = if kind == EllipticKind::Ell2 { 1 } else { 2 };
            let coefficients: Vec<Value> = (0..2 * order)
                .step_by(step)
                .map(|e| {
                    let c = g.series.coeff(e).expect("below truncation");
                    json!({"exponent": half_exponent(e), "value": format_rational(&c)})
                })
                .collect();
            Report {
                json: json!({"manifold": m.name, "kind": kind.name(), "order": order, "coefficients": coefficients}),
                text: g.series.to_string(),
            }
        }
        Command::Indices { manifold, family, max } => {
            let m = load()?.resolve(&manifold)?;
            let q_order = match family {
                IndexFamily::B => max / 2 + 1,
                IndexFamily::W => max + 1,
            };
            let all = twisted_indices(&m, family, q_order)?;
            let shown = &all[..=max as usize];
            let label = match family {
                IndexFamily::B => "B",
                IndexFamily::W => "W",
            };
            let json_list: Vec<Value> = shown
                .iter()
                .map(|t| json!({"k": t.k, "value": format_rational(&t.value), "integral": t.value.is_integer()}))
                .collect();
            let text = shown
                .iter()
                .map(|t| {
                    let warn = if t.non_integral { "  WARNING: non-integral on a spin manifold" } else { "" };
                    format!("ind(D ⊗ {label}_{}) = {}{warn}", t.k, format_rational(&t.value))
                })
                .collect::<Vec<_>>()
                .join("\n");
            Report {
                json: json!({"manifold": m.name, "family": label, "indices": json_list}),
                text,
            }
        }
        Command::Modular(ModularCmd::Fit { manifold, order }) => {
            let m = load()?.resolve(&manifold)?;
            let fit = witten_fit(&m, order)?;
            let coefficients: Vec<Value> = fit
                .coefficients
                .iter()
                .map(|(&(i, j), c)| json!({"i": i, "j": j, "value": format_rational(c)}))
                .collect();
            let first = fit
                .first_residual
                .as_ref()
                .map(|(e, c)| json!({"exponent": half_exponent(*e), "value": format_rational(c)}));
            let mut text: Vec<String> = fit
                .coefficients
                .iter()
                .map(|(&(i, j), c)| format!("a[{i},{j}] = {}", format_rational(c)))
                .collect();
            text.push(match &fit.first_residual {
                None => format!("residual vanishes to O(q^{})", half_exponent(fit.checked_order)),
                Some((e, c)) => format!("residual nonzero: {} at q^{}", format_rational(c), half_exponent(*e)),
            });
            Report {
                json: json!({
                    "manifold": m.name,
                    "weight": fit.weight,
                    "coefficients": coefficients,
                    "residual_ok": fit.residual_ok,
                    "checked_order": half_exponent(fit.checked_order),
                    "first_residual": first,
                }),
                text: text.join("\n"),
            }
        }
        Command::Modular(ModularCmd::Check {
            manifold,
            tau_im,
            order,
            tol,
        }) => {
            let m = load()?.resolve(&manifold)?;
            let c = modular_relation_check(&m, tau_im, order, tol)?;
            Report {
                json: json!({
                    "manifold": m.name, "tau_im": c.tau_im, "order": order, "tol": tol,
                    "lhs": c.lhs, "rhs": c.rhs, "abs_error": c.abs_error, "pass": c.pass,
                }),
                text: format!(
                    "lhs = {:.15e}\nrhs = {:.15e}\n|lhs - rhs| = {:.3e} {}",
                    c.lhs,
                    c.rhs,
                    c.abs_error,
                    if c.pass { "PASS" } else { "FAIL" }
                ),
            }
        }
        Command::Bound(BoundCmd::Cb { m, b }) => {
            let x = c_of_b(m, b)?;
            Report {
                json: json!({"m": m, "b": b, "c_of_b": x}),
                text: format!("{x:.15e}"),
            }
        }
        Command::Bound(BoundCmd::Index(a)) => {
            let params = BoundParams {
                m: a.m,
                p: a.p,
                lambda: a.lambda,
                diam: a.diam,
                b: a.b,
                cmp: a.cmp,
                v: a.v,
                l: a.l,
            };
            let r = index_bound_report(&params)?;
            let s = &r.moser;
            Report {
                json: serde_json::to_value(&r).expect("json"),
                text: format!(
                    "mu = {}\nK1 = {}\nK2 = {}\nC(b) = {}\nR = {}\nB = {}\nC = {}\nbound = {}",
                    s.mu, s.k1, s.k2, s.c_of_b, s.r, s.b_term, s.constant, r.bound
                ),
            }
        }
        Command::Cover(CoverCmd::Diam { k, base, factor, cap }) => {
            if base.len() != k {
                return Err(Error::InvalidArgument(format!("--base has {} moduli but --k is {k}", base.len())));
            }
            let d = cover_diameter(&base, factor, cap)?;
            Report {
                json: serde_json::to_value(&d).expect("json"),
                text: format!(
                    "vertex diameters: base {}, cover {}\nlength diameters: base {}, cover {}\nindex {}\n\
                     cover <= index * base: {} (vertex diameters: {})",
                    d.base_diam,
                    d.cover_diam,
                    format_rational(&d.base_length_diam),
                    format_rational(&d.cover_length_diam),
                    d.index,
                    d.inequality_holds,
                    d.vertex_inequality_holds
                ),
            }
        }
        Command::Cover(CoverCmd::Tower { k, depth }) => {
            let t = tower(k, depth)?;
            Report {
                text: t.indices.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" "),
                json: serde_json::to_value(&t).expect("json"),
            }
        }
        Command::Cover(CoverCmd::L2 { k, p, depth }) => {
            let ratios: Vec<String> = l2_betti_ratio(k, p, depth)?.iter().map(format_rational).collect();
            Report {
                text: ratios.join(" "),
                json: json!({"k": k, "p": p, "depth": depth, "ratios": ratios}),
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("json"));
            } else {
                println!("{}", report.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if json {
                println!("{}", json!({"error": e.to_string()}));
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
