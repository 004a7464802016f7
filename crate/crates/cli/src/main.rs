use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dispersia::asymptotics::Branch;
use dispersia::catalog::ShapeParams;
use dispersia_cli::{run, Command, Dispersion, Format, RunConfig};

/// Dispersion-model catalog, densities and small-dispersion limit checks.
#[derive(Parser, Debug)]
#[command(name = "dispersia", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Output format (catalog-describe defaults to json, everything else to csv).
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Write data here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// List every catalog entry.
    CatalogList,
    /// Describe one entry at a position mu0.
    CatalogDescribe(EntryArgs),
    /// Evaluate the exact and saddlepoint log densities.
    Pdf {
        #[command(flatten)]
        entry: EntryArgs,
        #[command(flatten)]
        dispersion: DispersionArgs,
        /// Evaluation points, comma separated.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        y: Vec<f64>,
    },
    /// Integrate the exact density over its support.
    Normalize {
        #[command(flatten)]
        entry: EntryArgs,
        #[command(flatten)]
        dispersion: DispersionArgs,
    },
    /// Density-to-normal ratios along x_sigma against the predicted constant.
    Limit {
        #[command(flatten)]
        entry: EntryArgs,
        /// Shift of the sequence in the standardized scale.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        mu: f64,
        /// Order of the first nonvanishing diagonal derivative (default: detected).
        #[arg(long)]
        k: Option<u32>,
        /// Limit parameter; `inf` runs the divergence diagnostic.
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        /// Strictly decreasing sigma2 values, comma separated (default 1e-1 down to 1e-8).
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<f64>>,
        /// Relative tolerance on the final ratio.
        #[arg(long, default_value_t = dispersia::DEFAULT_LIMIT_TOLERANCE)]
        tolerance: f64,
        /// Approach from below mu (unverified extension).
        #[arg(long)]
        lower: bool,
    },
    /// Run every check on every entry.
    VerifyAll {
        /// Restrict to these entries, comma separated.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}

#[derive(Args, Debug)]
struct EntryArgs {
    /// Catalog entry name (see catalog-list).
    entry: String,
    /// Position; defaults to the entry's interior default.
    #[arg(long, allow_hyphen_values = true)]
    mu0: Option<f64>,
    /// Generalized t shape.
    #[arg(long)]
    s: Option<f64>,
    /// Modified GIG shape in [-1, 1].
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Hyperbolic asymmetry; only 0 gives a dispersion model.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
}

impl EntryArgs {
    fn shapes(&self) -> ShapeParams {
        let d = ShapeParams::default();
        ShapeParams {
            s: self.s.unwrap_or(d.s),
            a: self.a.unwrap_or(d.a),
            b: self.b.unwrap_or(d.b),
        }
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct DispersionArgs {
    #[arg(long)]
    sigma2: Option<f64>,
    /// Precision, for entries parameterized by lambda.
    #[arg(long)]
    lambda: Option<f64>,
    /// Degrees of freedom, Student t only.
    #[arg(long)]
    dof: Option<f64>,
    /// Shape r, generalized t only.
    #[arg(long)]
    r: Option<f64>,
}

impl DispersionArgs {
    fn get(&self) -> Option<Dispersion> {
        self.sigma2
            .map(Dispersion::Sigma2)
            .or(self.lambda.map(Dispersion::Lambda))
            .or(self.dof.map(Dispersion::Dof))
            .or(self.r.map(Dispersion::R))
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Csv,
    Json,
}

fn config(cli: Cli) -> RunConfig {
    let mut c = RunConfig::new(Command::CatalogList);
    c.format = cli.format.map(|f| match f {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    });
    let set_entry = |c: &mut RunConfig, e: &EntryArgs| {
        c.entry = Some(e.entry.clone());
        c.mu0 = e.mu0;
        c.shapes = e.shapes();
    };
    match cli.command {
        Cmd::CatalogList => {}
        Cmd::CatalogDescribe(e) => {
            c.command = Command::CatalogDescribe;
            set_entry(&mut c, &e);
        }
        Cmd::Pdf {
            entry,
            dispersion,
            y,
        } => {
            c.command = Command::Pdf;
            set_entry(&mut c, &entry);
            c.dispersion = dispersion.get();
            c.y = y;
        }
        Cmd::Normalize { entry, dispersion } => {
            c.command = Command::Normalize;
            set_entry(&mut c, &entry);
            c.dispersion = dispersion.get();
        }
        Cmd::Limit {
            entry,
            mu,
            k,
            beta,
            schedule,
            tolerance,
            lower,
        } => {
            c.command = Command::Limit;
            set_entry(&mut c, &entry);
            c.mu = mu;
            c.k = k;
            c.beta = beta;
            c.schedule = schedule;
            c.tolerance = tolerance;
            c.branch = if lower { Branch::Lower } else { Branch::Upper };
        }
        Cmd::VerifyAll { only } => {
            c.command = Command::VerifyAll;
            c.only = only;
        }
    }
    c
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    let config = config(cli);

    let mut out: Box<dyn Write> = match &output {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(io::stdout().lock()),
    };
    let result = run(&config, &mut out).and_then(|o| {
        out.flush()?;
        Ok(o)
    });
    match result {
        Ok(outcome) => {
            for note in &outcome.notes {
                eprintln!("note: {note}");
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
