//! Command-line front end for `rmt-core`.

pub mod args;
pub mod check;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use args::{Cli, Command};
use clap::{CommandFactory, FromArgMatches};
use error::CliError;
use output::{Report, Table};
use std::ffi::OsString;
use std::io::Write;

/// Parse `argv`, run the command and return the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match config::merge(argv) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    let cmd = Cli::command().args_override_self(true).mut_subcommands(|s| s.args_override_self(true));
    let cli = match cmd.try_get_matches_from(argv).and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> i32 {
    eprintln!("error: {e}");
    e.exit_code()
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let g = &cli.global;
    if let Some(t) = g.threads {
        if t == 0 {
            return error::invalid("threads", "must be positive");
        }
        rmt_core::par::set_threads(t);
    }
    let report = match &cli.command {
        Command::Sample(a) => commands::sample(a, g.seed)?,
        Command::Density(a) => commands::density(a)?,
        Command::Law(a) => commands::law(a)?,
        Command::Spacing(a) => commands::spacing(a, g.seed)?,
        Command::Coulomb(a) => commands::coulomb(a, g.seed)?,
        Command::Tricomi(a) => commands::tricomi(a)?,
        Command::FreeAdd(a) => commands::free_add(a, g.seed)?,
        Command::Signprob(a) => commands::signprob(a)?,
        Command::Eigvec(a) => commands::eigvec(a, g.seed)?,
        Command::Check(a) => check_report(a, g.seed)?,
    };
    match &g.out {
        Some(path) => {
            let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
            report.write(g.format, &mut f)?;
            f.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            report.write(g.format, &mut lock)?;
        }
    }
    if let Command::Check(_) = cli.command {
        let failed = report.metrics.get("failed").and_then(|v| v.as_u64()).unwrap_or(0) as usize;
        if failed > 0 {
            return Err(CliError::ChecksFailed(failed));
        }
    }
    Ok(())
}

fn check_report(a: &args::CheckArgs, seed: Option<u64>) -> Result<Report, CliError> {
    let s = commands::need_seed(seed)?;
    let outcomes = check::run(a.suite, s);
    let mut t = Table::new(&["module", "check", "value", "tolerance", "pass"]);
    for o in &outcomes {
        t.push(vec![o.module.into(), o.name.into(), o.value.into(), o.tolerance.into(), o.pass.into()]);
        if let Some(e) = &o.error {
            eprintln!("{} / {}: {e}", o.module, o.name);
        }
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    let mut r = Report::new("check", a, seed);
    r.metric("checks", outcomes.len());
    r.metric("failed", failed);
    for o in &outcomes {
        r.metric(&format!("{}/{}", o.module, o.name), o.pass);
    }
    r.pass = failed == 0;
    r.table = Some(t);
    Ok(r)
}
