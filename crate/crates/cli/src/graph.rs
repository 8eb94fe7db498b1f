use std::fs::File;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use graphcon::algo::{connected_components, strongly_connected_components};
use graphcon::generators::{
    make_complete, make_erdos_renyi, make_erdos_renyi_directed, make_path, make_regular,
    make_ring, make_star,
};
use graphcon::io::{read_edge_list, read_matrix_csv, write_adjacency_csv, write_edge_list, write_matrix_csv};
use graphcon::matrices::{
    adjacency_matrix, graph_from_adjacency, incidence_matrix, laplacian, walk_count_sum,
};
use graphcon::{DenseMatrix, Graph};
use serde::{Deserialize, Serialize};

use crate::{write_json, write_output, Globals, Outcome};

#[derive(Subcommand, Debug)]
pub enum GraphCommand {
    /// Build a graph; writes edges.csv and summary.json.
    Gen(GenArgs),
    /// Export matrices of a graph as CSV grids.
    Matrices(MatricesArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Ring,
    Path,
    Star,
    Complete,
    Regular,
    ErdosRenyi,
    FromAdjacency,
    FromEdgelist,
}

/// `graph gen` settings; the same fields may come from the config file.
#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// Number of vertices.
    #[arg(long)]
    n: Option<usize>,
    /// Degree of a regular graph.
    #[arg(long)]
    k: Option<usize>,
    /// Edge probability of an Erdős–Rényi graph.
    #[arg(long)]
    p: Option<f64>,
    /// Centre vertex of a star (default 0).
    #[arg(long)]
    center: Option<usize>,
    /// Input file for the from-adjacency and from-edgelist kinds.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Build a directed graph (erdos-renyi and the file kinds).
    #[arg(long)]
    #[serde(default)]
    directed: bool,
    #[arg(skip)]
    seed: Option<u64>,
}

impl GenArgs {
    fn or(self, base: GenArgs) -> GenArgs {
        GenArgs {
            kind: self.kind.or(base.kind),
            n: self.n.or(base.n),
            k: self.k.or(base.k),
            p: self.p.or(base.p),
            center: self.center.or(base.center),
            input: self.input.or(base.input),
            directed: self.directed || base.directed,
            seed: self.seed.or(base.seed),
        }
    }
}

fn need<T>(value: Option<T>, what: &str, kind: Kind) -> Result<T> {
    value.with_context(|| format!("{kind:?} graphs need {what}"))
}

fn build(args: &GenArgs) -> Result<Graph> {
    let kind = args.kind.context("graph gen needs --kind")?;
    let seed = || need(args.seed, "a seed (--seed or \"seed\" in the config)", kind);
    let g = match kind {
        Kind::Ring => make_ring(need(args.n, "--n", kind)?)?,
        Kind::Path => make_path(need(args.n, "--n", kind)?)?,
        Kind::Star => make_star(need(args.n, "--n", kind)?, args.center.unwrap_or(0))?,
        Kind::Complete => make_complete(need(args.n, "--n", kind)?)?,
        Kind::Regular => make_regular(need(args.n, "--n", kind)?, need(args.k, "--k", kind)?, seed()?)?,
        Kind::ErdosRenyi => {
            let (n, p) = (need(args.n, "--n", kind)?, need(args.p, "--p", kind)?);
            if args.directed {
                make_erdos_renyi_directed(n, p, seed()?)?
            } else {
                make_erdos_renyi(n, p, seed()?)?
            }
        }
        Kind::FromAdjacency => {
            let path = need(args.input.as_ref(), "--input", kind)?;
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            graph_from_adjacency(&read_matrix_csv(file)?, args.directed)?
        }
        Kind::FromEdgelist => load_edge_list(need(args.input.as_ref(), "--input", kind)?, args.directed)?,
    };
    if matches!(kind, Kind::FromAdjacency | Kind::FromEdgelist) && args.n.is_some_and(|n| n != g.n()) {
        bail!("--n {} does not match the {} vertices read", args.n.unwrap_or(0), g.n());
    }
    Ok(g)
}

fn load_edge_list(path: &PathBuf, directed: bool) -> Result<Graph> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_edge_list(file, directed).with_context(|| format!("reading {}", path.display()))
}

#[derive(Serialize)]
struct DegreeSummary {
    min: usize,
    max: usize,
    mean: f64,
    sum: usize,
    odd: usize,
}

#[derive(Serialize)]
struct Summary {
    n: usize,
    edges: usize,
    directed: bool,
    degree: Option<DegreeSummary>,
    /// Strong connectivity for directed graphs.
    connected: bool,
    components: usize,
}

fn summarize(g: &Graph) -> Result<Summary> {
    let d = g.degree_sequence();
    let degree = match (d.min(), d.max()) {
        (Some(min), Some(max)) => Some(DegreeSummary {
            min,
            max,
            mean: d.sum() as f64 / g.n() as f64,
            sum: d.sum(),
            odd: d.odd_count(),
        }),
        _ => None,
    };
    let components = if g.is_directed() {
        strongly_connected_components(g)?.len()
    } else {
        connected_components(g)?.len()
    };
    let connected = components <= 1;
    Ok(Summary {
        n: g.n(),
        edges: g.edge_count(),
        directed: g.is_directed(),
        degree,
        connected,
        components,
    })
}

fn gen(args: GenArgs, globals: &Globals) -> Outcome {
    let mut config: GenArgs = globals.config_or_default()?;
    config.seed = config.seed.or(globals.seed);
    let args = args.or(config);
    let g = build(&args)?;
    let out = globals.out_dir()?;
    write_output(out, "edges.csv", |buf| Ok(write_edge_list(&g, buf)?))?;
    write_json(out, "summary.json", &summarize(&g)?)?;
    println!(
        "{} vertices, {} edges -> {}",
        g.n(),
        g.edge_count(),
        out.join("edges.csv").display()
    );
    Ok(true)
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    Adjacency,
    Incidence,
    Laplacian,
    NormalizedLaplacian,
    WalkSum,
}

impl Which {
    fn file_name(self, k: usize) -> String {
        match self {
            Which::Adjacency => "adjacency.csv".into(),
            Which::Incidence => "incidence.csv".into(),
            Which::Laplacian => "laplacian.csv".into(),
            Which::NormalizedLaplacian => "normalized_laplacian.csv".into(),
            Which::WalkSum => format!("walk_sum_{k}.csv"),
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphFormat {
    Edgelist,
    Adjacency,
}

/// `graph matrices` settings; the same fields may come from the config file.
#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatricesArgs {
    /// Graph file.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Format of the graph file (default edgelist).
    #[arg(long, value_enum)]
    format: Option<GraphFormat>,
    #[arg(long)]
    #[serde(default)]
    directed: bool,
    /// Matrices to write (comma-separated; default adjacency).
    #[arg(long, value_enum, value_delimiter = ',')]
    #[serde(default)]
    which: Vec<Which>,
    /// Longest walk length for walk-sum (default 2).
    #[arg(long)]
    k: Option<usize>,
}

fn matrix(g: &Graph, which: Which, k: usize) -> graphcon::Result<DenseMatrix> {
    match which {
        Which::Adjacency => Ok(adjacency_matrix(g)),
        Which::Incidence => incidence_matrix(g),
        Which::Laplacian => laplacian(g, false),
        Which::NormalizedLaplacian => laplacian(g, true),
        Which::WalkSum => walk_count_sum(g, k),
    }
}

fn matrices(args: MatricesArgs, globals: &Globals) -> Outcome {
    let config: MatricesArgs = globals.config_or_default()?;
    let path = args.graph.or(config.graph).context("graph matrices needs --graph FILE")?;
    let directed = args.directed || config.directed;
    let g = match args.format.or(config.format).unwrap_or(GraphFormat::Edgelist) {
        GraphFormat::Edgelist => load_edge_list(&path, directed)?,
        GraphFormat::Adjacency => {
            let file = File::open(&path).with_context(|| format!("opening {}", path.display()))?;
            graph_from_adjacency(&read_matrix_csv(file)?, directed)
                .with_context(|| format!("reading {}", path.display()))?
        }
    };
    let mut which = if args.which.is_empty() { config.which } else { args.which };
    if which.is_empty() {
        which.push(Which::Adjacency);
    }
    let k = args.k.or(config.k).unwrap_or(2);

    let out = globals.out_dir()?;
    let mut all_written = true;
    for w in which {
        let name = w.file_name(k);
        let written = matrix(&g, w, k).map_err(anyhow::Error::from).and_then(|m| {
            write_output(out, &name, |buf| {
                if w == Which::Adjacency {
                    write_adjacency_csv(&m, buf)?;
                } else {
                    write_matrix_csv(&m, buf)?;
                }
                Ok(())
            })
        });
        match written {
            Ok(()) => println!("wrote {}", out.join(&name).display()),
            Err(e) => {
                eprintln!("error: {name} not written: {e:#}");
                all_written = false;
            }
        }
    }
    Ok(all_written)
}

pub fn run(command: GraphCommand, globals: &Globals) -> Outcome {
    match command {
        GraphCommand::Gen(args) => gen(args, globals),
        GraphCommand::Matrices(args) => matrices(args, globals),
    }
}
