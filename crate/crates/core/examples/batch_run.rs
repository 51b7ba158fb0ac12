//! Drive the verification suites from code, as the `qd verify` command does.

use quiverdual::cli::{run, BetaSource, RunConfig, Suite};

fn main() {
    let cfg = RunConfig {
        suite: Suite::All,
        points: 6,
        beta: BetaSource::Preset { scenario: "GENERIC(2,1,1,ample)".into() },
        ..RunConfig::default()
    };
    print!("{}", cfg.to_toml());
    let report = run(&cfg).unwrap();
    println!("{} checks, {} failed", report.checks, report.failures);
}
