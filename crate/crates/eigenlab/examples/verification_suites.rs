//! Batch verification: run every randomized suite at a small trial count
//! and print one line per suite.

use eigenlab::suites::{run_suite, SuiteKind, Tolerances};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tols = Tolerances::default();
    println!("adjustable tolerances: {:?}", Tolerances::NAMES);
    println!();

    let mut all_pass = true;
    for token in SuiteKind::TOKENS {
        let kind = SuiteKind::from_token(token).unwrap();
        let run = run_suite(kind, Some(10), 7, &tols)?;
        all_pass &= run.pass;
        println!("{token:<10} pass: {}", run.pass);
    }
    println!();
    println!("all suites pass: {all_pass}");
    assert!(all_pass);
    Ok(())
}
