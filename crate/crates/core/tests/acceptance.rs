//! Acceptance criteria 1–10 at zero tolerance, one line per criterion.
//!
//! `ACCEPTANCE_SEED` overrides the seed (default 0).

use std::path::PathBuf;
use std::process::ExitCode;

use hyperdescent::cli::suite::{corpus_suite, run_criterion, CriterionOutcome, DEFAULT_COUNTS};

fn main() -> ExitCode {
    let seed = std::env::var("ACCEPTANCE_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    let corpus = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let outcomes: Vec<CriterionOutcome> = std::thread::scope(|s| {
        let mut handles: Vec<_> = (1..=9u8)
            .map(|id| s.spawn(move || run_criterion(id, seed, DEFAULT_COUNTS[usize::from(id) - 1]).expect("criteria 1 to 9 exist")))
            .collect();
        handles.push(s.spawn(|| corpus_suite(&corpus, seed)));
        handles.into_iter().map(|h| h.join().expect("criterion thread panicked")).collect()
    });
    println!("acceptance, seed {seed}");
    for o in &outcomes {
        println!("{}", o.summary());
        for f in o.failures.iter().take(5) {
            println!("    {f}");
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    println!("{} of {} criteria pass", outcomes.len() - failed, outcomes.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
