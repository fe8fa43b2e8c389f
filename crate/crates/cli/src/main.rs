//! `symrig`: command-line front end for the symmetric rigidity toolkit.
//!
//! Exit status is 0 on success, 1 when a predicate subcommand gets a negative
//! answer and 2 on any error.

mod input;
mod verify;

use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use symrig::connectivity::{edge_connectivity, is_n_gain_mixed_connected, is_n_mixed_connected, symmetric_separation};
use symrig::matroid::{
    full_rigidity_characters, is_forced_rigid_with, is_iota_rigid_with, iota_regime, rank, CombinatorialVerdict,
    CountFamily,
};
use symrig::numeric::{is_rigid_numeric_tol, motion_space_tol, seed_triple, RANK_TOLERANCE};
use symrig::symcover::{check_cover_lower_bound, cover_from_partition, CoverVariant};
use symrig::{CoveringGraph, Error, GainGraph};

#[derive(Parser)]
#[command(name = "symrig", version, about = "Rigidity of symmetric frameworks via gain graphs")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Base seed for numeric checks; the seeds used are seed, seed+1, seed+2.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Explicit comma-separated seeds, overriding --seed.
    #[arg(long, global = true, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    /// Relative singular value cutoff for numeric rank.
    #[arg(long, global = true, default_value_t = RANK_TOLERANCE)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Rho,
    Mu,
    Nu,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Forced,
    Iota,
    Full,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Combinatorial,
    Numeric,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    Forced,
    Iota1,
}

#[derive(Subcommand)]
enum Command {
    /// Build the covering graph of a gain graph.
    Expand { graph: String },
    /// Recover a gain graph from a covering graph.
    Quotient { covering: String },
    /// Whether the covering graph is n-mixed-connected.
    CheckMixedConn {
        #[arg(long)]
        n: usize,
        graph: String,
    },
    /// Whether the gain graph is n-gain-mixed-connected.
    CheckGainMixedConn {
        #[arg(long)]
        n: usize,
        graph: String,
    },
    /// Rank of the whole edge set in a count matroid.
    Rank {
        #[arg(long, value_enum)]
        family: Family,
        /// Character index, required for nu.
        #[arg(long)]
        t: Option<i64>,
        /// JSON file with candidate partitions for the upper bound.
        #[arg(long)]
        candidate_partition: Option<String>,
        graph: String,
    },
    /// Symmetric infinitesimal rigidity.
    Rigidity {
        #[arg(long, value_enum)]
        mode: Mode,
        /// Character index for --mode iota.
        #[arg(long)]
        t: Option<i64>,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long)]
        candidate_partition: Option<String>,
        graph: String,
    },
    /// Symmetric cover of an edge partition and its lower bound.
    Cover {
        #[arg(long)]
        partition: String,
        #[arg(long, value_enum, default_value_t = Variant::Forced)]
        variant: Variant,
        graph: String,
    },
    /// Check every bundled example against its stated properties.
    VerifyPaper,
}

/// What a subcommand produced.
pub struct Report {
    json: Value,
    text: String,
    /// False for a negative answer from a predicate.
    positive: bool,
}

impl Report {
    fn new(json: Value, text: String) -> Report {
        Report { json, text, positive: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("reports serialize")),
                Format::Text => print!("{}", report.text),
            }
            if report.positive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn seeds(cli: &Cli) -> Vec<u64> {
    cli.seeds.clone().unwrap_or_else(|| seed_triple(cli.seed))
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Expand { graph } => expand(graph),
        Command::Quotient { covering } => quotient(covering),
        Command::CheckMixedConn { n, graph } => check_mixed(graph, *n),
        Command::CheckGainMixedConn { n, graph } => check_gain_mixed(graph, *n),
        Command::Rank {
            family,
            t,
            candidate_partition,
            graph,
        } => rank_cmd(graph, *family, *t, candidate_partition.as_deref()),
        Command::Rigidity {
            mode,
            t,
            method,
            candidate_partition,
            graph,
        } => rigidity(cli, graph, *mode, *t, *method, candidate_partition.as_deref()),
        Command::Cover {
            partition,
            variant,
            graph,
        } => cover(graph, partition, *variant),
        Command::VerifyPaper => verify::run(&seeds(cli), cli.tol),
    }
}

fn expand(source: &str) -> Result<Report> {
    let g = input::load_graph(source)?.graph;
    let cov = CoveringGraph::expand(&g)?;
    let fixed = cov.fixed_edges();
    let json: Value = serde_json::from_str(&cov.to_json())?;
    let text = format!(
        "covering graph over {}: {} vertices, {} edges, {} fixed edges\n",
        g.group(),
        cov.vertex_count(),
        cov.edge_count(),
        fixed.fixed_edges.len()
    );
    Ok(Report::new(json, text))
}

fn quotient(source: &str) -> Result<Report> {
    let cov = input::load_covering(source)?;
    let g = cov.quotient_of()?;
    let json: Value = serde_json::from_str(&g.to_json())?;
    let text = format!(
        "quotient gain graph over {}: {} vertices, {} edges\n",
        g.group(),
        g.vertex_count(),
        g.edge_count()
    );
    Ok(Report::new(json, text))
}

fn check_mixed(source: &str, n: usize) -> Result<Report> {
    let g = input::load_graph(source)?.graph;
    let cov = CoveringGraph::expand(&g)?;
    let r = is_n_mixed_connected(&cov, n)?;
    let mut text = format!(
        "covering graph ({} vertices) is {}{n}-mixed-connected\n",
        cov.vertex_count(),
        if r.connected { "" } else { "NOT " }
    );
    if let Some(w) = &r.witness {
        let names = |xs: &[usize]| xs.iter().map(|&x| cov.vertex_name(x)).collect::<Vec<_>>().join(", ");
        let edges: Vec<String> = w
            .f
            .iter()
            .map(|&(a, b)| format!("{}-{}", cov.vertex_name(a), cov.vertex_name(b)))
            .collect();
        text += &format!(
            "witness of cost {}: W = {{{}}}, F = {{{}}}\n",
            w.cost,
            names(&w.w),
            edges.join(", ")
        );
    }
    Ok(Report {
        json: serde_json::to_value(&r)?,
        text,
        positive: r.connected,
    })
}

fn check_gain_mixed(source: &str, n: usize) -> Result<Report> {
    let g = input::load_graph(source)?.graph;
    let (ok, block) = is_n_gain_mixed_connected(&g, n)?;
    let mut text = format!("gain graph is {}{n}-gain-mixed-connected\n", if ok { "" } else { "NOT " });
    let mut json = json!({ "n": n, "connected": ok, "block": null, "separation": null });
    if let Some(b) = &block {
        let sep = symmetric_separation(&g, b)?;
        let names = |vs: &[usize]| vs.iter().map(|&v| g.vertex_names()[v].clone()).collect::<Vec<_>>().join(", ");
        text += &format!(
            "{}-block on {{{}}} with U = {{{}}}, D = {:?}\n",
            b.k,
            names(&b.vertices),
            names(&b.u),
            b.d
        );
        json["block"] = serde_json::to_value(b)?;
        json["separation"] = serde_json::to_value(&sep)?;
    }
    Ok(Report {
        json,
        text,
        positive: ok,
    })
}

fn count_family(g: &GainGraph, family: Family, t: Option<i64>) -> Result<(CountFamily, i64)> {
    let t = match family {
        Family::Rho => 0,
        Family::Mu => 1,
        Family::Nu => t.ok_or_else(|| anyhow!("--family nu needs --t"))?,
    };
    let (f, threshold) = iota_regime(g.group(), t, g.vertex_count())?;
    let wanted = match family {
        Family::Rho => matches!(f, CountFamily::Rho),
        Family::Mu => matches!(f, CountFamily::Mu),
        Family::Nu => matches!(f, CountFamily::Nu(_)),
    };
    if !wanted {
        bail!("family {} does not characterize rigidity over {} (expected {f})", family_name(family), g.group());
    }
    Ok((f, threshold))
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Rho => "rho",
        Family::Mu => "mu",
        Family::Nu => "nu",
    }
}

fn mode_label(f: CountFamily) -> String {
    match f {
        CountFamily::Rho => "forced-rigid".to_string(),
        CountFamily::Mu => "iota_1-rigid".to_string(),
        CountFamily::Nu(t) => format!("iota_{t}-rigid"),
    }
}

fn candidates(loaded: &input::Loaded, file: Option<&str>) -> Result<Vec<Vec<Vec<usize>>>> {
    let mut out = loaded.fixture_partitions();
    if let Some(file) = file {
        out.extend(input::load_partitions(file)?);
    }
    Ok(out)
}

fn rank_cmd(source: &str, family: Family, t: Option<i64>, candidate_file: Option<&str>) -> Result<Report> {
    let loaded = input::load_graph(source)?;
    let g = &loaded.graph;
    let (f, threshold) = count_family(g, family, t)?;
    let cands = match candidate_file {
        Some(file) => input::load_partitions(file)?,
        None => Vec::new(),
    };
    let r = rank(f, g, &g.edge_ids(), &cands)?;
    let verdict = if r.upper < threshold {
        format!("not {}", mode_label(f))
    } else if r.lower as i64 >= threshold {
        format!("{} if the basis spans", mode_label(f))
    } else {
        "undecided".to_string()
    };
    let text = format!(
        "{f} rank of {} edges: lower bound {}, upper bound {}, threshold {threshold}\nverdict: {verdict}\n",
        g.edge_count(),
        r.lower,
        r.upper
    );
    let json = json!({
        "family": f,
        "lower": r.lower,
        "upper": r.upper,
        "exact": r.exact(),
        "threshold": threshold,
        "verdict": verdict,
        "basis": r.basis,
        "partition": r.partition,
    });
    Ok(Report::new(json, text))
}

fn combinatorial(g: &GainGraph, mode: Mode, t: i64, cands: &[Vec<Vec<usize>>]) -> Result<Vec<(i64, CombinatorialVerdict)>, Error> {
    match mode {
        Mode::Forced => Ok(vec![(0, is_forced_rigid_with(g, cands)?)]),
        Mode::Iota => Ok(vec![(t, is_iota_rigid_with(g, t, cands)?)]),
        Mode::Full => full_rigidity_characters(g.group())?
            .into_iter()
            .map(|t| Ok((t, is_iota_rigid_with(g, t, cands)?)))
            .collect(),
    }
}

fn rigidity(cli: &Cli, source: &str, mode: Mode, t: Option<i64>, method: Method, file: Option<&str>) -> Result<Report> {
    let loaded = input::load_graph(source)?;
    let g = &loaded.graph;
    let t = match mode {
        Mode::Iota => t.ok_or_else(|| anyhow!("--mode iota needs --t"))?,
        _ => 0,
    };
    let seeds = seeds(cli);
    let mut json = json!({ "mode": format!("{}", mode_name(mode)), "t": t });
    let mut text = String::new();
    let mut comb: Option<bool> = None;
    let mut num: Option<bool> = None;

    if method != Method::Numeric {
        let cands = candidates(&loaded, file)?;
        match combinatorial(g, mode, t, &cands) {
            Ok(vs) => {
                let rigid = vs.iter().all(|(_, v)| v.rigid);
                for (t, v) in &vs {
                    text += &format!(
                        "combinatorial t = {t}: {} rank in [{}, {}], threshold {} -> {}\n",
                        v.family,
                        v.rank.lower,
                        v.rank.upper,
                        v.threshold,
                        if v.rigid { "rigid" } else { "flexible" }
                    );
                }
                json["combinatorial"] = json!({
                    "rigid": rigid,
                    "characters": vs.iter().map(|(t, v)| json!({"t": t, "verdict": v})).collect::<Vec<_>>(),
                });
                comb = Some(rigid);
            }
            Err(e @ Error::Uncharacterized(_)) if method == Method::Both => {
                text += &format!("combinatorial: {e}\n");
                json["combinatorial"] = json!({ "error": e.to_string() });
            }
            Err(e) => return Err(e.into()),
        }
    }
    if method != Method::Combinatorial {
        match mode {
            Mode::Full => {
                let r = is_rigid_numeric_tol(g, &seeds, cli.tol)?;
                text += &format!(
                    "numeric: rank {} of {} needed -> {}\n",
                    r.rank,
                    (2 * r.covering_vertices).saturating_sub(3),
                    if r.rigid { "rigid" } else { "flexible" }
                );
                num = Some(r.rigid);
                json["numeric"] = serde_json::to_value(&r)?;
            }
            _ => {
                let r = motion_space_tol(g, t, &seeds, cli.tol)?;
                text += &format!(
                    "numeric t = {t}: kernel {} against trivial {} -> {}\n",
                    r.kernel_dim,
                    r.trivial_dim,
                    if r.rigid { "rigid" } else { "flexible" }
                );
                num = Some(r.rigid);
                json["numeric"] = serde_json::to_value(&r)?;
            }
        }
    }
    let rigid = match (comb, num) {
        (Some(a), Some(b)) if a != b => bail!("combinatorial verdict {a} and numeric verdict {b} disagree"),
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => bail!("no verdict"),
    };
    text += &format!("verdict: {}\n", if rigid { "rigid" } else { "flexible" });
    json["rigid"] = json!(rigid);
    Ok(Report {
        json,
        text,
        positive: rigid,
    })
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Forced => "forced",
        Mode::Iota => "iota",
        Mode::Full => "full",
    }
}

fn cover(source: &str, partition: &str, variant: Variant) -> Result<Report> {
    let g = input::load_graph(source)?.graph;
    let parts = input::load_partitions(partition)?;
    let [parts] = parts.as_slice() else {
        bail!("{partition} must hold exactly one partition, found {}", parts.len());
    };
    let variant = match variant {
        Variant::Forced => CoverVariant::Forced,
        Variant::Iota1 => CoverVariant::Iota1,
    };
    let sc = cover_from_partition(&g, parts)?;
    let bound = check_cover_lower_bound(&g, parts, variant)?;
    let cov = CoveringGraph::expand(&g)?;
    let named: Vec<Vec<String>> = sc
        .sets
        .iter()
        .map(|x| x.vertices.iter().map(|&v| cov.vertex_name(v)).collect())
        .collect();
    let mut text = format!("{} cover sets from {} parts\n", sc.sets.len(), sc.parts.len());
    for (x, names) in sc.sets.iter().zip(&named) {
        text += &format!("  part {} |Γ_X| = {}: {{{}}}\n", x.part, x.group_order, names.join(", "));
    }
    text += &format!(
        "lower bound: {} >= {} {} (hypotheses {}: {})\n",
        bound.lhs,
        bound.rhs,
        if bound.holds { "holds" } else { "fails" },
        if bound.hypotheses_hold { "hold" } else { "fail" },
        bound.hypotheses
    );
    if g.group().order() >= 6 {
        text += &format!("quotient edge connectivity: {:?}\n", edge_connectivity(&g));
    }
    let json = json!({ "cover": sc, "names": named, "bound": bound });
    Ok(Report::new(json, text))
}
