//! The `veech` command line: salem, dyn, flow and verify subcommands.

pub mod acceptance;
mod dyn_cmd;
mod flow_cmd;
pub mod manifest;
mod output;
pub mod pipeline;
mod salem_cmd;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use veech_core::trigroup::{TriangleFamily, Variant};

pub use output::Format;

#[derive(Parser, Debug)]
#[command(name = "veech", version, about = "Salem elements, conjugate cocycles and regular-polygon flows")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, serde::Serialize)]
pub struct Global {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Bits of precision for printed isolating intervals and fixed-point output.
    #[arg(long = "precision-bits", global = true, default_value_t = 64)]
    pub precision_bits: u32,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Output file; a manifest is written next to it as <file>.manifest.json.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Salem certificates in triangle groups.
    #[command(subcommand)]
    Salem(salem_cmd::SalemCmd),
    /// Boundary coding and the conjugate cocycle.
    #[command(subcommand)]
    Dyn(dyn_cmd::DynCmd),
    /// Regular-polygon surfaces.
    #[command(subcommand)]
    Flow(flow_cmd::FlowCmd),
    /// Run the acceptance checks named by a tag.
    Verify {
        /// exactfield, trigroup, salem, conjdyn, polyflow, all, or a criterion number 1-11.
        #[arg(long, default_value = "all")]
        tag: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum FamilyArg {
    /// Δ(2,q,∞)
    #[value(name = "2qinf")]
    TwoQInf,
    /// Δ(q,∞,∞)
    #[value(name = "qinfinf")]
    QInfInf,
}

impl FamilyArg {
    pub fn variant(self) -> Variant {
        match self {
            FamilyArg::TwoQInf => Variant::TwoQInf,
            FamilyArg::QInfInf => Variant::QInfInf,
        }
    }

    pub fn family(self, q: u32) -> TriangleFamily {
        match self {
            FamilyArg::TwoQInf => TriangleFamily::two_q_inf(q),
            FamilyArg::QInfInf => TriangleFamily::q_inf_inf(q),
        }
    }
}

/// Parses arguments and runs; returns the process exit code (0 ok, 1 failure, 2 usage).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let mut cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    // `--out json|csv|text` names a format on standard output, not a file
    if let Some(fmt) = cli.global.out.as_ref().and_then(|p| p.to_str()).and_then(|p| Format::from_str(p, false).ok()) {
        if cli.global.format.is_some_and(|f| f != fmt) {
            eprintln!("error: --out {} conflicts with --format", cli.global.out.as_ref().unwrap().display());
            return 2;
        }
        cli.global.format = Some(fmt);
        cli.global.out = None;
    }
    if cli.global.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.global.threads).build_global();
    }
    let start = Instant::now();
    let result = match &cli.command {
        Command::Salem(c) => salem_cmd::run(c, &cli.global),
        Command::Dyn(c) => dyn_cmd::run(c, &cli.global),
        Command::Flow(c) => flow_cmd::run(c, &cli.global),
        Command::Verify { tag } => return verify(tag),
    };
    match result {
        Ok(out) => match output::deliver(&out, &cli.global, &args, start.elapsed().as_secs_f64()) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {e:#}");
                1
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                2
            } else {
                1
            }
        }
    }
}

/// Bad argument values that clap cannot see (unparsable directions, unknown tags, …).
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub(crate) fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn verify(tag: &str) -> i32 {
    let ids = match acceptance::criteria_for_tag(tag) {
        Some(ids) => ids,
        None => {
            eprintln!("error: unknown tag {tag:?} (expected exactfield, trigroup, salem, conjdyn, polyflow, all or 1-11)");
            return 2;
        }
    };
    let mut ok = true;
    for id in ids {
        let r = acceptance::run_criterion(id);
        println!("{}", r.line());
        ok &= r.pass;
    }
    if ok {
        0
    } else {
        1
    }
}
