use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pstwalk::report::{
    partition_text, series_csv, series_points, spectrum_csv, table_text, CertificateRecord,
    CollapseRecord, ConditionRecord, CylindricalRecord, ScanRecord, SpectrumRecord, TableRecord,
};
use pstwalk::{build, write_atomic, write_graph, ExprError};
use pstwalk_core::cones::{
    cylindrical_no_pst_check, double_cone_pst_condition, glued_cone_family,
    glued_cone_pst_condition, p4_pst_condition,
};
use pstwalk_core::partitions::{
    coarsest_equitable_refinement, collapse_fidelity_check_with, distance_partition,
    intertwining_residual, quotient_symmetrized,
};
use pstwalk_core::products::{
    check_lexico_clique_condition as check_lex_clique, check_std_lexico_condition as check_std_lex,
    check_weak_pst_condition as check_weak,
};
use pstwalk_core::pst::{fidelity_series, max_fidelity_scan, pst_certificate, pst_table};
use pstwalk_core::spectral::{is_integral, perron_vector, spectrum};
use pstwalk_core::{Graph, VertexId};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "pst",
    version,
    about = "Continuous-time quantum walks and perfect state transfer on graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// Graph expression, e.g. "weak(Q:2, K:4)"
    #[arg(long)]
    expr: String,
    /// Global Hamiltonian scale: the walk uses c·A
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
}

#[derive(Args)]
struct Pair {
    /// Source vertex (label or index)
    #[arg(long)]
    from: String,
    /// Target vertex (label or index)
    #[arg(long)]
    to: String,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Print the graph in the pstgraph text format
    Build {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Adjacency eigenvalues in descending order
    Spectrum {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Amplitude <to|e^{-itA}|from> on an evenly spaced grid over [0, tmax]
    Fidelity {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// Read times in units of π
        #[arg(long)]
        pi_units: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Maximum of |F| over [0, tmax]: grid search plus local refinement
    Scan {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long, default_value_t = 60)]
        refine: usize,
        #[arg(long)]
        pi_units: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Exact PST certificate from strong cospectrality and phase alignment
    Certify {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        output: Output,
    },
    /// Distance partition, symmetrized quotient and the fidelity comparison
    Collapse {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        from: String,
        /// Antipodal target; enables the fidelity comparison
        #[arg(long)]
        to: Option<String>,
        /// Replace the distance partition by its coarsest equitable refinement
        #[arg(long)]
        refine: bool,
        #[arg(long, default_value_t = 2.0 * PI)]
        tmax: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long)]
        pi_units: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Closed-form PST sufficiency conditions
    Condition {
        #[command(subcommand)]
        which: Condition,
    },
    /// The catalogue of PST and no-PST families; exit code 1 on any mismatch
    Table {
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum Condition {
    /// G × H with PST time t_G of G
    Weak {
        #[arg(long)]
        expr: String,
        #[arg(long = "with")]
        with: String,
        #[arg(long)]
        time: f64,
        #[arg(long)]
        pi_units: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// G_{K_m}[H] with common PST time t
    LexClique {
        #[arg(long)]
        expr: String,
        #[arg(long = "with")]
        with: String,
        #[arg(long)]
        time: f64,
        #[arg(long)]
        pi_units: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// G[H] with PST time t_H of H
    LexStd {
        #[arg(long)]
        expr: String,
        #[arg(long = "with")]
        with: String,
        #[arg(long)]
        time: f64,
        #[arg(long)]
        pi_units: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weighted double cone; give the base graph or its top eigenvalue
    Doublecone {
        #[arg(long, conflicts_with = "lambda0", required_unless_present = "lambda0")]
        expr: Option<String>,
        #[arg(long)]
        lambda0: Option<f64>,
        #[arg(long, default_value_t = 0)]
        b: u8,
        /// Cone scale; defaults to √n for a base graph
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Glued double cone from (n, k, γ) or a family index
    Gluedcone {
        #[arg(long, required_unless_present = "family")]
        n: Option<u64>,
        #[arg(long, required_unless_present = "family")]
        k: Option<u64>,
        #[arg(long, required_unless_present = "family")]
        gamma: Option<u64>,
        #[arg(long, conflicts_with_all = ["n", "k", "gamma"])]
        family: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cylindrical cone K1 + G1 + K̄m + G2 + K1 (always no PST, with proof)
    Cylcone {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weighted path P4(γ; κ)
    P4 {
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 0.0)]
        kappa: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Domain(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Domain(e)
    }
}

fn graph(args: &GraphArgs) -> Result<Graph, Failure> {
    let g = build(&args.expr).map_err(|e| match e {
        ExprError::Parse(p) => Failure::Usage(anyhow!("--expr {:?}: parse error {p}", args.expr)),
        other => Failure::Domain(anyhow!(other)),
    })?;
    if args.scale == 1.0 {
        Ok(g)
    } else {
        Ok(g.scaled(args.scale).map_err(anyhow::Error::from)?)
    }
}

fn plain_graph(expr: &str) -> Result<Graph, Failure> {
    graph(&GraphArgs {
        expr: expr.to_string(),
        scale: 1.0,
    })
}

fn vertex(g: &Graph, name: &str) -> anyhow::Result<VertexId> {
    g.find_vertex(name)
        .ok_or_else(|| anyhow!("no vertex `{name}` (graph has {} vertices)", g.n()))
}

fn emit(out: &Option<PathBuf>, text: String) -> anyhow::Result<()> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes())
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn time(t: f64, pi_units: bool) -> f64 {
    if pi_units {
        t * PI
    } else {
        t
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Build { graph: ga, out } => emit(&out, write_graph(&graph(&ga)?))?,
        Command::Spectrum { graph: ga, output } => {
            let g = graph(&ga)?;
            let eig = spectrum(&g).map_err(anyhow::Error::from)?;
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Csv => spectrum_csv(&eig),
                _ => json(&SpectrumRecord {
                    n: g.n(),
                    integral: is_integral(&g, 1e-8).map_err(anyhow::Error::from)?,
                    eigenvalues: eig,
                })?,
            };
            emit(&output.out, text)?;
        }
        Command::Fidelity {
            graph: ga,
            pair,
            tmax,
            steps,
            pi_units,
            output,
        } => {
            let g = graph(&ga)?;
            let (a, b) = (vertex(&g, &pair.from)?, vertex(&g, &pair.to)?);
            let s = fidelity_series(&g, a, b, time(tmax, pi_units), steps)
                .map_err(anyhow::Error::from)?;
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Json => json(&series_points(&s))?,
                _ => series_csv(&s),
            };
            emit(&output.out, text)?;
        }
        Command::Scan {
            graph: ga,
            pair,
            tmax,
            steps,
            refine,
            pi_units,
            output,
        } => {
            let g = graph(&ga)?;
            let (a, b) = (vertex(&g, &pair.from)?, vertex(&g, &pair.to)?);
            let tmax = time(tmax, pi_units);
            let r =
                max_fidelity_scan(&g, a, b, tmax, steps, refine).map_err(anyhow::Error::from)?;
            emit(
                &output.out,
                json(&ScanRecord::new(a.index(), b.index(), tmax, steps, &r))?,
            )?;
        }
        Command::Certify {
            graph: ga,
            pair,
            output,
        } => {
            let g = graph(&ga)?;
            let (a, b) = (vertex(&g, &pair.from)?, vertex(&g, &pair.to)?);
            let cert = pst_certificate(&g, a, b).map_err(anyhow::Error::from)?;
            emit(&output.out, json(&CertificateRecord::from(&cert))?)?;
        }
        Command::Collapse {
            graph: ga,
            from,
            to,
            refine,
            tmax,
            steps,
            pi_units,
            output,
        } => {
            let g = graph(&ga)?;
            let a = vertex(&g, &from)?;
            let partition = if refine {
                let dist = g.distances_from(a.index());
                if dist.iter().any(Option::is_none) {
                    return Err(anyhow!("graph is not connected").into());
                }
                let depth = dist.iter().flatten().max().copied().unwrap_or(0);
                let mut cells = vec![Vec::new(); depth + 1];
                for (v, d) in dist.iter().enumerate() {
                    cells[d.unwrap()].push(v);
                }
                coarsest_equitable_refinement(&g, &cells).map_err(anyhow::Error::from)?
            } else {
                distance_partition(&g, a, false)
                    .map_err(anyhow::Error::from)?
                    .ok_or_else(|| {
                        anyhow!(
                            "distance partition from {} is not equitable (try --refine)",
                            a.index()
                        )
                    })?
            };
            let quotient = quotient_symmetrized(&g, &partition).map_err(anyhow::Error::from)?;
            let residual = intertwining_residual(&g, &partition, &quotient);
            let deviation = match to {
                Some(to) => {
                    let b = vertex(&g, &to)?;
                    let tmax = time(tmax, pi_units);
                    let grid: Vec<f64> = (0..steps)
                        .map(|i| tmax * i as f64 / (steps.max(2) - 1) as f64)
                        .collect();
                    let check = collapse_fidelity_check_with(&g, partition.clone(), a, b, &grid)
                        .map_err(anyhow::Error::from)?;
                    Some(check.max_deviation)
                }
                None => None,
            };
            let text = match output.format.unwrap_or(Format::Text) {
                Format::Json => json(&CollapseRecord {
                    cells: partition.cells().to_vec(),
                    degrees: (0..partition.len())
                        .map(|j| partition.degrees().row(j).to_vec())
                        .collect(),
                    quotient: write_graph(&quotient.graph),
                    intertwining_residual: residual,
                    max_deviation: deviation,
                })?,
                _ => {
                    let mut s = partition_text(&partition);
                    s += &write_graph(&quotient.graph);
                    s += &format!("# intertwining residual {residual:e}\n");
                    if let Some(d) = deviation {
                        s += &format!("# max fidelity deviation {d:e}\n");
                    }
                    s
                }
            };
            emit(&output.out, text)?;
        }
        Command::Condition { which } => return condition(which),
        Command::Table { output } => {
            let rows = pst_table().map_err(anyhow::Error::from)?;
            let text = match output.format.unwrap_or(Format::Text) {
                Format::Json => json(&rows.iter().map(TableRecord::from).collect::<Vec<_>>())?,
                _ => table_text(&rows),
            };
            emit(&output.out, text)?;
            if rows.iter().any(|r| !r.matches) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn condition(which: Condition) -> Result<ExitCode, Failure> {
    let e = anyhow::Error::from;
    let (out, text) = match which {
        Condition::Weak {
            expr,
            with,
            time: t,
            pi_units,
            out,
        } => {
            let r = check_weak(
                &plain_graph(&expr)?,
                time(t, pi_units),
                &plain_graph(&with)?,
            )
            .map_err(e)?;
            (out, json(&ConditionRecord::new("weak", &r))?)
        }
        Condition::LexClique {
            expr,
            with,
            time: t,
            pi_units,
            out,
        } => {
            let r = check_lex_clique(
                &plain_graph(&expr)?,
                &plain_graph(&with)?,
                time(t, pi_units),
            )
            .map_err(e)?;
            (out, json(&ConditionRecord::new("lex-clique", &r))?)
        }
        Condition::LexStd {
            expr,
            with,
            time: t,
            pi_units,
            out,
        } => {
            let r = check_std_lex(
                &plain_graph(&expr)?,
                &plain_graph(&with)?,
                time(t, pi_units),
            )
            .map_err(e)?;
            (out, json(&ConditionRecord::new("lex-std", &r))?)
        }
        Condition::Doublecone {
            expr,
            lambda0,
            b,
            alpha,
            out,
        } => {
            let (lambda0, alpha) = match (expr, lambda0) {
                (Some(expr), _) => {
                    let base = plain_graph(&expr)?;
                    let (l0, _) = perron_vector(&base).map_err(e)?;
                    (l0, alpha.unwrap_or((base.n() as f64).sqrt()))
                }
                (None, Some(l0)) => (
                    l0,
                    alpha.ok_or_else(|| {
                        Failure::Usage(anyhow!("--alpha is required with --lambda0"))
                    })?,
                ),
                (None, None) => unreachable!("clap requires one of --expr, --lambda0"),
            };
            let r = double_cone_pst_condition(lambda0, b, alpha).map_err(e)?;
            (out, json(&ConditionRecord::new("doublecone", &r))?)
        }
        Condition::Gluedcone {
            n,
            k,
            gamma,
            family,
            out,
        } => {
            let (n, k, gamma) = match family {
                Some(a) => glued_cone_family(a).map_err(e)?,
                None => (n.unwrap(), k.unwrap(), gamma.unwrap()),
            };
            let r = glued_cone_pst_condition(n, k, gamma).map_err(e)?;
            (out, json(&ConditionRecord::new("gluedcone", &r))?)
        }
        Condition::Cylcone { n, k, m, out } => {
            let p = cylindrical_no_pst_check(n, k, m).map_err(e)?;
            (out, json(&CylindricalRecord::from(&p))?)
        }
        Condition::P4 { gamma, kappa, out } => {
            let r = p4_pst_condition(gamma, kappa).map_err(e)?;
            (out, json(&ConditionRecord::new("p4", &r))?)
        }
    };
    emit(&out, text)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
