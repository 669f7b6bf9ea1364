use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use thiserror::Error;

use multiplihedra::counting;
use multiplihedra::export::{self, ExportBundle, ExportError, Format};
use multiplihedra::hull_verify::verify_realization;
use multiplihedra::metric_trees::{constraint_system, interior_point, max_length_point, MetricError};
use multiplihedra::painted_trees::{enumerate_binary, enumerate_faces, facet_trees, BinaryPaintedTree, PaintedTree, TreeError};
use multiplihedra::rational::{self, ParseRationalError, Q};
use multiplihedra::realization::{coordinates_weighted, default_q, hyperplane, RealizationError, Weights};

#[derive(Parser)]
#[command(name = "multiplihedra", version, about = "Painted trees and exact realizations of the multiplihedra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Params {
    /// Parameter in (0, 1), e.g. `1/3` or `0.25`.
    #[arg(long, value_parser = parse_q)]
    q: Option<Q>,
    /// Comma-separated positive leaf weights, one per leaf.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<i64>>,
}

#[derive(Subcommand)]
enum Command {
    /// Number of binary painted trees with n leaves.
    Count { n: usize },
    /// List binary painted trees (or all faces) in canonical order.
    Enumerate {
        n: usize,
        #[arg(long)]
        faces: bool,
    },
    /// Vertex coordinates of every binary painted tree.
    Coords {
        n: usize,
        #[command(flatten)]
        params: Params,
        /// Allow q = 0 or q = 1 and merge coinciding points.
        #[arg(long)]
        quotient: bool,
    },
    /// Facet trees and their hyperplanes.
    Facets {
        n: usize,
        #[command(flatten)]
        params: Params,
    },
    /// Check that the points realize the multiplihedron.
    Verify {
        n: usize,
        #[command(flatten)]
        params: Params,
        /// Recompute all facets from the points alone.
        #[arg(long)]
        brute_force: bool,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Edge-length equations, dimensions and interior points.
    Metric {
        n: usize,
        /// A single painted tree, e.g. `=(=(x) =(x))`.
        #[arg(long)]
        tree: Option<String>,
        /// Show the length-one points of the facet trees instead.
        #[arg(long, conflicts_with = "tree")]
        facets: bool,
    },
    /// Write the point set in an exchange format.
    Export {
        n: usize,
        #[arg(long, value_enum)]
        format: FormatArg,
        #[command(flatten)]
        params: Params,
        /// Output file (default: standard output).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Polymake,
    Off,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Polymake => Format::Polymake,
            FormatArg::Off => Format::Off,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Realization(#[from] RealizationError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Export(#[from] ExportError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("q = {0} is a boundary value; pass --quotient to merge coinciding points")]
    BoundaryWithoutFlag(String),
    #[error("--quotient needs q = 0 or q = 1")]
    QuotientNeedsBoundary,
    #[error("tree has {got} leaves, expected {expected}")]
    LeafCount { expected: usize, got: usize },
    #[error("verification failed")]
    VerificationFailed,
}

fn parse_q(text: &str) -> Result<Q, ParseRationalError> {
    rational::parse_rational(text)
}

impl Params {
    fn q(&self) -> Q {
        self.q.clone().unwrap_or_else(default_q)
    }

    fn weights(&self, n: usize) -> Result<Weights, RealizationError> {
        match &self.weights {
            Some(w) => Weights::new(w.clone()),
            None => Ok(Weights::unit(n)),
        }
    }

    /// `q` checked for the open interval, with a hint for the boundary.
    fn open_q(&self) -> Result<Q, CliError> {
        let q = self.q();
        if q.is_zero() || q.is_one() {
            return Err(CliError::BoundaryWithoutFlag(rational::render(&q)));
        }
        Ok(q)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Count { n } => println!("{}", counting::vertex_count_recursive(n)),
        Command::Enumerate { n, faces } => {
            if faces {
                enumerate_faces(n).iter().for_each(|t| println!("{t}"));
            } else {
                enumerate_binary(n).iter().for_each(|t| println!("{t}"));
            }
        }
        Command::Coords { n, params, quotient } => {
            let w = params.weights(n)?;
            if quotient {
                let q = params.q();
                if !(q.is_zero() || q.is_one()) {
                    return Err(CliError::QuotientNeedsBoundary);
                }
                let quot = export::quotient_mode(n, &q, &w)?;
                for (p, trees) in quot.points.iter().zip(&quot.trees) {
                    println!("{p}\t{}", trees.join(" "));
                }
                match quot.expected {
                    Some(e) => println!("{} distinct points (expected {e})", quot.count()),
                    None => println!("{} distinct points", quot.count()),
                }
            } else {
                let q = params.open_q()?;
                for t in enumerate_binary(n) {
                    println!("{t}\t{}", coordinates_weighted(&t, &q, &w)?);
                }
            }
        }
        Command::Facets { n, params } => {
            let q = params.open_q()?;
            let w = params.weights(n)?;
            for f in facet_trees(n) {
                println!("{}\t{}", f.realize(), hyperplane(&f, &q, &w)?);
            }
        }
        Command::Verify { n, params, brute_force, json } => {
            let q = params.open_q()?;
            let w = params.weights(n)?;
            let report = verify_realization(n, &q, &w, brute_force)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).map_err(ExportError::from)?);
            } else {
                for f in &report.failures {
                    eprintln!("{f}");
                }
                println!("{report}");
            }
            if !report.passed() {
                return Err(CliError::VerificationFailed);
            }
        }
        Command::Metric { n, tree, facets } => {
            if facets {
                for f in facet_trees(n) {
                    let p = max_length_point(&f);
                    let tie = if p.tie { "\t(tie, leftmost edge chosen)" } else { "" };
                    println!("{f}\t{}{tie}", p.metric);
                }
            } else if let Some(text) = tree {
                let t: PaintedTree = text.parse()?;
                t.validate().map_err(TreeError::from)?;
                if t.leaf_count() != n {
                    return Err(CliError::LeafCount { expected: n, got: t.leaf_count() });
                }
                print_metric(&t);
            } else {
                for t in enumerate_binary(n) {
                    print_metric(t.tree());
                }
            }
        }
        Command::Export { n, format, params, output } => {
            let q = params.open_q()?;
            let w = params.weights(n)?;
            let format = Format::from(format);
            let bundle = ExportBundle::build(n, &q, &w, format, matches!(format, Format::Off | Format::Json))?;
            let text = bundle.render()?;
            match output {
                Some(path) => fs::write(path, text)?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn print_metric(t: &PaintedTree) {
    let sys = constraint_system(t);
    println!("{t}");
    for (i, e) in sys.edges.iter().enumerate() {
        let paint = if e.painted { "painted" } else { "unpainted" };
        println!("  e{i}: {paint} edge over {}", e.span);
    }
    for eq in &sys.equations {
        println!("  {eq}");
    }
    println!("  free lengths: {}", sys.free_variables());
    let bounds: Vec<String> = sys
        .edge_bounds()
        .iter()
        .map(|(lo, hi)| format!("[{}, {}]", rational::render(lo), rational::render(hi)))
        .collect();
    if !bounds.is_empty() {
        println!("  bounds: {}", bounds.join(" "));
    }
    if let Ok(b) = BinaryPaintedTree::try_from(t.clone()) {
        println!("  interior point: {}", rational::render_all(interior_point(&b).lengths()).join(", "));
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::VerificationFailed) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
