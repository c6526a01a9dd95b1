//! `arcscheme`: arc equations, jet lengths, rationalization trees, Igusa zeta
//! series and finite-field point counts from the command line.

mod commands;
mod job;

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use job::{AlgebraSpec, Command, JobError, JobSpec};

#[derive(Parser, Debug)]
#[command(name = "arcscheme", version, about = "Arc schemes, rationalization trees and geometric Igusa zeta series")]
struct Cli {
    /// Run the job described by this JSON file instead of a subcommand.
    #[arg(long, global = true, value_name = "FILE")]
    job: Option<String>,
    /// Worker threads for point counting (1 = serial search).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Polynomial in the variables; repeat for systems.
    #[arg(long = "poly", short = 'p')]
    polys: Vec<String>,
    /// Comma-separated variable names (default: identifiers in the polynomials, sorted).
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    /// Characteristic of the base field: 0 or a prime.
    #[arg(long = "char", default_value_t = 0)]
    characteristic: u64,
    /// Write the JSON output here instead of standard output.
    #[arg(long, short = 'o')]
    output: Option<String>,
}

#[derive(Args, Debug)]
struct TreeArgs {
    /// Tree root: auto, zero, ones, or a tuple such as "(2,1*,1)".
    #[arg(long)]
    root: Option<String>,
    /// Nodes of larger order become stuck leaves.
    #[arg(long)]
    budget: Option<u64>,
    /// Also write the tree in DOT format to this file.
    #[arg(long)]
    dot: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Arc equations along an algebra, or directed arc equations along a tuple.
    Arc {
        #[command(flatten)]
        common: Common,
        /// Arcs along k[xi]/(xi^LENGTH).
        #[arg(long)]
        length: Option<u32>,
        /// Variables of a monomial algebra, e.g. xi,zeta.
        #[arg(long, value_delimiter = ',', requires = "ideal")]
        algebra_vars: Vec<String>,
        /// Monomial generators of its ideal, e.g. xi^2,zeta^2.
        #[arg(long, value_delimiter = ',', requires = "algebra_vars")]
        ideal: Vec<String>,
        /// Tagged tuple for directed arcs, e.g. "(2,1*,0)".
        #[arg(long)]
        theta: Option<String>,
        /// Level of the directed arcs.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Jet lengths of a germ at the origin and its eventual linear growth.
    Jet {
        #[command(flatten)]
        common: Common,
        /// Germ equation; repeat for several.
        #[arg(long = "germ")]
        germs: Vec<String>,
        /// Number of lengths to print (orders 0..n).
        #[arg(long)]
        n: usize,
    },
    /// Rationalization tree and geometric Igusa zeta series.
    Igusa {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        tree: TreeArgs,
    },
    /// Points of arc schemes over F_q by search.
    Count {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        /// Count directed arcs along this tagged tuple.
        #[arg(long)]
        theta: Option<String>,
        /// Stop after this many search nodes.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Specialize the Igusa series at q and compare with point counts.
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        q: u64,
        /// First n to check (default: first certified coefficient).
        #[arg(long)]
        from: Option<usize>,
        /// Last n to check (default: from + 2).
        #[arg(long)]
        to: Option<usize>,
    },
    /// Rationalization tree only, in DOT format.
    Tree {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        tree: TreeArgs,
    },
}

fn base(command: Command, c: Common) -> JobSpec {
    JobSpec {
        command,
        characteristic: c.characteristic,
        variables: c.vars,
        polynomials: c.polys,
        algebra: None,
        theta: None,
        root: None,
        n: None,
        q: None,
        from: None,
        to: None,
        budget: None,
        output: c.output,
        dot: None,
    }
}

fn with_tree(mut j: JobSpec, t: TreeArgs) -> JobSpec {
    j.root = t.root;
    j.budget = t.budget;
    j.dot = t.dot;
    j
}

fn job_from_flags(sub: Sub) -> JobSpec {
    match sub {
        Sub::Arc { common, length, algebra_vars, ideal, theta, n } => {
            let mut j = base(Command::Arc, common);
            j.algebra = match length {
                Some(length) => Some(AlgebraSpec::Truncated { length }),
                None if !ideal.is_empty() => Some(AlgebraSpec::Monomial { variables: algebra_vars, generators: ideal }),
                None => None,
            };
            j.theta = theta;
            j.n = n;
            j
        }
        Sub::Jet { mut common, germs, n } => {
            common.polys.extend(germs);
            let mut j = base(Command::Jet, common);
            j.n = Some(n);
            j
        }
        Sub::Igusa { common, tree } => with_tree(base(Command::Igusa, common), tree),
        Sub::Count { common, q, n, theta, budget } => {
            let mut j = base(Command::Count, common);
            j.q = Some(q);
            j.n = Some(n);
            j.theta = theta;
            j.budget = budget;
            j
        }
        Sub::Verify { common, tree, q, from, to } => {
            let mut j = with_tree(base(Command::Verify, common), tree);
            j.q = Some(q);
            j.from = from;
            j.to = to;
            j
        }
        Sub::Tree { common, tree } => with_tree(base(Command::Tree, common), tree),
    }
}

fn write(path: &str, text: &str) -> Result<(), JobError> {
    fs::write(path, text).map_err(|e| JobError(format!("{path}: {e}")))
}

fn execute(cli: Cli) -> Result<u8, JobError> {
    let mut job = match (&cli.job, cli.command) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| JobError(format!("{path}: {e}")))?;
            JobSpec::from_json(&text)?
        }
        (None, Some(sub)) => job_from_flags(sub),
        (Some(_), Some(_)) => return job::fail("give either --job or a subcommand, not both"),
        (None, None) => return job::fail("missing subcommand; see --help"),
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            return job::fail("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| JobError(e.to_string()))?;
    }
    job.resolve();
    let validated = job.validate()?;
    let out = commands::run(&job, &validated, cli.threads != Some(1))?;
    for d in &out.diagnostics {
        eprintln!("arcscheme: {d}");
    }
    let envelope = json!({ "job": job, "input_hash": job.input_hash(), "result": out.result });
    let mut rendered = serde_json::to_string_pretty(&envelope).expect("values serialize");
    rendered.push('\n');
    if let (Some(path), Some(dot)) = (&job.dot, &out.dot) {
        write(path, dot)?;
    }
    match (&job.output, out.text) {
        (Some(path), _) => write(path, &rendered)?,
        (None, Some(text)) => print!("{text}"),
        (None, None) => print!("{rendered}"),
    }
    Ok(out.status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("arcscheme: error: {e}");
            ExitCode::from(1)
        }
    }
}
