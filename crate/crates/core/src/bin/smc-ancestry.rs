use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use smc_ancestry::experiments::{
    bench, bounds_table, coupling_table, filter_dataset, generate_data, laws_table, lemma1_table, open_output,
    tree_stats, write_rows, ExperimentConfig, ExperimentError, ModelKind,
};
use smc_ancestry::ResamplingScheme;

/// Particle-filter ancestry trees: node-count sweeps, timing, theory tables
/// and synthetic data. Every command writes CSV to --out or stdout.
#[derive(Parser)]
#[command(name = "smc-ancestry", version)]
struct Cli {
    /// Base seed; replicate r uses seed + r.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output CSV (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (all cores when absent).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// JSON file with any of the flags below; flags given on the command
    /// line take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Node-count statistics per (scheme, N, T, replicate).
    TreeStats(Flags),
    /// Per-step prune + insert time in microseconds, bucketed over t.
    Bench(Flags),
    /// Coalescence-theory tables.
    Theory {
        #[command(subcommand)]
        table: TheoryTable,
    },
    /// Simulate a dataset (t, y and the hidden state).
    GenerateData(Flags),
    /// Run the filter on a dataset CSV.
    Filter(Flags),
}

#[derive(Subcommand)]
enum TheoryTable {
    /// K-chain transition rows.
    Laws(Flags),
    /// Monte Carlo tree sizes against their bounds.
    Bounds(Flags),
    /// sum(u_k - 1) / (N ln N).
    Lemma1(Flags),
    /// Coupled K/L trajectories and the dominance check.
    Coupling(Flags),
}

#[derive(Args, Default)]
struct Flags {
    /// pz, neutral or linear-gaussian.
    #[arg(long)]
    model: Option<ModelKind>,
    /// Shorthand for --model neutral.
    #[arg(long)]
    neutral: bool,
    /// Particle counts, comma separated.
    #[arg(long = "N", value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Horizons, comma separated.
    #[arg(long = "T", value_delimiter = ',')]
    t: Option<Vec<usize>>,
    /// multinomial, stratified, systematic; comma separated.
    #[arg(long, value_delimiter = ',')]
    schemes: Option<Vec<ResamplingScheme>>,
    /// Replicates (runs, trajectories).
    #[arg(long, short = 'K', visible_alias = "runs")]
    replicates: Option<usize>,
    /// RK4 substeps per unit time.
    #[arg(long)]
    substeps: Option<usize>,
    /// Initial tree capacity as a multiple of N.
    #[arg(long)]
    initial_multiple: Option<usize>,
    /// Tree growth step as a fraction of the capacity.
    #[arg(long)]
    growth_fraction: Option<f64>,
    /// tree-stats: emit statistics after every step instead of per horizon.
    #[arg(long)]
    per_step: bool,
    /// bench: bucket width in steps.
    #[arg(long)]
    bucket: Option<usize>,
    /// Weight lower bounds, comma separated.
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    /// laws: rows to print, comma separated.
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<usize>>,
    /// filter: input dataset CSV.
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// filter: write the final tree as JSON here.
    #[arg(long)]
    dump_tree: Option<PathBuf>,
}

impl Flags {
    fn apply(self, c: &mut ExperimentConfig) {
        if let Some(m) = self.model {
            c.model = m;
        }
        if self.neutral {
            c.model = ModelKind::Neutral;
        }
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field {
                    c.$field = v;
                }
            )*};
        }
        set!(n, t, schemes, replicates, substeps, eps);
        if let Some(v) = self.initial_multiple {
            c.capacity.initial_multiple = v;
        }
        if let Some(v) = self.growth_fraction {
            c.capacity.growth_fraction = v;
        }
        c.per_step |= self.per_step;
        c.bucket = self.bucket.or(c.bucket);
        c.q = self.q.or(c.q.take());
        c.dataset = self.dataset.or(c.dataset.take());
        c.dump_tree = self.dump_tree.or(c.dump_tree.take());
    }
}

fn run(cli: Cli) -> Result<(), ExperimentError> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::from_json_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    if cli.out.is_some() {
        config.out = cli.out;
    }
    if cli.workers.is_some() {
        config.workers = cli.workers;
    }
    let (flags, action): (Flags, fn(&ExperimentConfig) -> Result<(), ExperimentError>) = match cli.command {
        Command::TreeStats(f) => (f, |c| {
            let out = tree_stats(c)?;
            let w = open_output(c.out.as_deref())?;
            if c.per_step {
                write_rows(w, &out.steps)
            } else {
                write_rows(w, &out.rows)
            }
        }),
        Command::Bench(f) => (f, |c| write_rows(open_output(c.out.as_deref())?, &bench(c)?)),
        Command::GenerateData(f) => (f, |c| generate_data(c, open_output(c.out.as_deref())?)),
        Command::Filter(f) => (f, |c| {
            let out = filter_dataset(c)?;
            out.write_csv(open_output(c.out.as_deref())?)?;
            if let (Some(path), Some(json)) = (&c.dump_tree, &out.tree_json) {
                std::fs::write(path, json)?;
            }
            Ok(())
        }),
        Command::Theory { table } => match table {
            TheoryTable::Laws(f) => (f, |c| write_rows(open_output(c.out.as_deref())?, &laws_table(c)?)),
            TheoryTable::Bounds(f) => (f, |c| write_rows(open_output(c.out.as_deref())?, &bounds_table(c)?)),
            TheoryTable::Lemma1(f) => (f, |c| write_rows(open_output(c.out.as_deref())?, &lemma1_table(c)?)),
            TheoryTable::Coupling(f) => (f, |c| write_rows(open_output(c.out.as_deref())?, &coupling_table(c)?)),
        },
    };
    flags.apply(&mut config);
    action(&config)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
