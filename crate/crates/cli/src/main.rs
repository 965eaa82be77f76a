mod commands;
mod output;

use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use orbitcodes::Error;

/// Cyclic orbit subspace codes: fields, orbits, distances, linkage and search.
#[derive(Parser, Debug)]
#[command(name = "orbitcodes", version, about)]
pub struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Inline `q,n,c0,...,cn` (modulus low degree first) or `@path.json`.
    #[arg(long)]
    field: Option<String>,
    /// Base field size; with --n and no --field the default modulus is used.
    #[arg(long)]
    q: Option<u32>,
    /// Extension degree.
    #[arg(long)]
    n: Option<usize>,
    /// Accept an irreducible but non-primitive modulus.
    #[arg(long)]
    allow_non_primitive: bool,
    /// Build log tables only when q^n is at most this.
    #[arg(long)]
    table_threshold: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct CodeArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// `logs:0,1,4`, `F(2)+a^1*F(2)` or `rows:100000;010000`.
    #[arg(long = "gen")]
    generator: String,
    /// β = α^e.
    #[arg(long, default_value_t = 1)]
    beta_log: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Brute,
    Multiset,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SearchModeArg {
    Exhaustive,
    Random,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Field parameters, subfields and the companion matrix.
    Field {
        #[command(flatten)]
        field: FieldArgs,
        /// Also report log, order and minimal polynomial of α^e.
        #[arg(long)]
        element_log: Option<u64>,
    },
    /// Stabilizer, best friend, orbit size, distance and bounds.
    Analyze(CodeArgs),
    /// Minimum distance of an orbit code.
    Distance {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Include the distance distribution over unordered member pairs.
        #[arg(long)]
        distribution: bool,
        /// Write the distribution as CSV (distance,pairs).
        #[arg(long)]
        csv: Option<std::path::PathBuf>,
    },
    /// Orbit descriptor and, optionally, its members.
    Orbit {
        #[command(flatten)]
        code: CodeArgs,
        /// List every member's RREF rows.
        #[arg(long)]
        members: bool,
    },
    /// Link constituent codes into a longer code.
    #[command(group(ArgGroup::new("construction").required(true).args(["two", "many", "cyclic"])))]
    Link {
        /// Two constituents.
        #[arg(long)]
        two: bool,
        /// Any number of constituents.
        #[arg(long)]
        many: bool,
        /// One constituent followed by --cyclic-field/--cyclic-gen/--exponents.
        #[arg(long)]
        cyclic: bool,
        /// Constituent `FIELD@GEN[@BETA_LOG]`, the full orbit; repeatable.
        #[arg(long = "code", required = true)]
        codes: Vec<String>,
        /// Field of the second code, inline `q,n,c0,...,cn`.
        #[arg(long)]
        cyclic_field: Option<String>,
        /// Generator U_2 of the second code; `rows:` keeps the matrix as given.
        #[arg(long)]
        cyclic_gen: Option<String>,
        /// Exponents j of the second code's members U_2 M^j.
        #[arg(long, value_delimiter = ',')]
        exponents: Vec<u64>,
        /// Check the distance over all member pairs.
        #[arg(long)]
        verify: bool,
        /// Check this many random member pairs (needs --seed).
        #[arg(long)]
        spot_check: Option<usize>,
        /// Seed for --spot-check.
        #[arg(long)]
        seed: Option<u64>,
        /// Include every member in JSON output.
        #[arg(long)]
        export_members: bool,
        /// Refuse to materialize more members than this.
        #[arg(long, default_value_t = orbitcodes::linkage::DEFAULT_MEMBER_CAP)]
        member_cap: u64,
    },
    /// Search for generators with a given best friend and distance.
    Search {
        #[arg(long, value_enum)]
        mode: SearchModeArg,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
        /// Required best-friend degree.
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long = "target-d")]
        target_d: usize,
        #[arg(long, default_value_t = 0)]
        trials: u64,
        /// Seed of the candidate stream; required in random mode.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Largest exhaustive search space accepted.
        #[arg(long, default_value_t = orbitcodes::search::DEFAULT_SEARCH_CAP)]
        cap: u128,
        /// Evaluate every candidate, even when a subfield coset rules it out.
        #[arg(long)]
        no_prune: bool,
    },
    /// Run the reference fixture catalog.
    VerifyFixtures {
        /// Only fixtures whose name contains this.
        #[arg(long)]
        filter: Option<String>,
        /// Load fixtures from a JSON file instead of the built-in catalog.
        #[arg(long)]
        catalog: Option<std::path::PathBuf>,
    },
}

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const INVALID_INPUT: u8 = 2;
    pub const CERTIFIED_NEGATIVE: u8 = 3;
    pub const BUDGET_EXHAUSTED: u8 = 4;
    pub const INTERNAL: u8 = 5;
}

pub fn error_code(e: &Error) -> u8 {
    match e {
        Error::InternalInconsistency(_) => exit::INTERNAL,
        Error::SearchSpaceTooLarge { .. } | Error::TooLarge(_) => exit::BUDGET_EXHAUSTED,
        _ => exit::INVALID_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let res = match cli.command {
        Command::Field { field, element_log } => commands::field(&field, element_log),
        Command::Analyze(code) => commands::analyze(&code),
        Command::Distance {
            code,
            method,
            distribution,
            csv,
        } => commands::distance(&code, method, distribution, csv.as_deref()),
        Command::Orbit { code, members } => commands::orbit(&code, members),
        Command::Link {
            two,
            many: _,
            cyclic,
            codes,
            cyclic_field,
            cyclic_gen,
            exponents,
            verify,
            spot_check,
            seed,
            export_members,
            member_cap,
        } => commands::link(commands::LinkRequest {
            two,
            cyclic,
            codes,
            cyclic_field,
            cyclic_gen,
            exponents,
            verify,
            spot_check,
            seed,
            export_members,
            member_cap,
        }),
        Command::Search {
            mode,
            field,
            k,
            r,
            target_d,
            trials,
            seed,
            jobs,
            cap,
            no_prune,
        } => commands::search(commands::SearchRequest {
            mode,
            field,
            k,
            r,
            target_d,
            trials,
            seed,
            jobs,
            cap,
            prune: !no_prune,
        }),
        Command::VerifyFixtures { filter, catalog } => {
            commands::verify_fixtures(filter.as_deref(), catalog.as_deref())
        }
    };
    match res {
        Ok(out) => {
            out.emit(json);
            ExitCode::from(out.code)
        }
        Err(e) => {
            output::emit_error(&e, json);
            ExitCode::from(error_code(&e))
        }
    }
}
