//! Batch front end.
//!
//! Three subcommands wrap the library: `tensor` combines eigenvalue lists
//! from CSV files, `verify` runs a named verification suite, and
//! `interaction` evaluates the chain interaction bound for a pair of site
//! spectra. Reports are JSON envelopes `{schema, command, config,
//! results}`; lists and plot tables can also go out as CSV.
//!
//! Exit codes: 0 all checks passed, 1 a verification assertion failed
//! (the report is still written), 2 configuration or input error (nothing
//! is written).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::eigenlist::EigenvalueList;
use crate::interaction::ChainInteractionModel;
use crate::io::{list_to_csv, read_list_csv, render_report, report_envelope, write_text};
use crate::suites::{interaction_suite, run_suite, SuiteKind, Tolerances};
use crate::{Error, Result};

/// Default RNG seed shared by every suite for reproducibility.
pub const DEFAULT_SEED: u64 = 7;

#[derive(Debug, Parser)]
#[command(
    name = "eigenlab",
    version,
    about = "Eigenvalue-list calculus and verification suites for finite quantum states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Combine two CSV eigenvalue lists into their tensor product.
    Tensor {
        /// First list, CSV with one value per line.
        #[arg(long)]
        list_a: PathBuf,
        /// Second list, CSV with one value per line.
        #[arg(long)]
        list_b: PathBuf,
        /// Emit only the k largest products, with a certified tail bound.
        #[arg(long)]
        k: Option<usize>,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format.
        #[arg(long, value_parser = ["csv", "json"], default_value = "csv")]
        format: String,
    },
    /// Run a named verification suite and report per-trial deviations.
    Verify {
        /// Suite token: weyl, lemma43, lemma46, lemma48, semigroup, theoremb.
        #[arg(long)]
        suite: String,
        /// Trial count; each suite has its own default.
        #[arg(long)]
        trials: Option<usize>,
        /// RNG seed.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Tolerance override as name=value; repeatable.
        #[arg(long = "tol", value_name = "NAME=VALUE")]
        tol: Vec<String>,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the chain interaction bound for a pair of site spectra.
    Interaction {
        /// Atom count of the uniform past spectrum (with --q).
        #[arg(long, conflicts_with_all = ["list_minus", "list_plus"])]
        p: Option<usize>,
        /// Atom count of the uniform future spectrum (with --p).
        #[arg(long, conflicts_with_all = ["list_minus", "list_plus"])]
        q: Option<usize>,
        /// Past spectrum as a CSV list file (with --list-plus).
        #[arg(long)]
        list_minus: Option<PathBuf>,
        /// Future spectrum as a CSV list file (with --list-minus).
        #[arg(long)]
        list_plus: Option<PathBuf>,
        /// Largest window half-width to sweep.
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        /// Site dimension; defaults to the longer spectrum.
        #[arg(long)]
        dim: Option<usize>,
        /// RNG seed (echoed for reproducibility; the sweep is exact).
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Tolerance override as name=value; repeatable.
        #[arg(long = "tol", value_name = "NAME=VALUE")]
        tol: Vec<String>,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format: json report or plot-ready csv rows.
        #[arg(long, value_parser = ["json", "csv"], default_value = "json")]
        format: String,
    },
}

/// Parse the process arguments and run; returns the exit code.
pub fn run() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => match execute(cli.command) {
            Ok(code) => code,
            Err(err) => {
                eprintln!("error: {err}");
                2
            }
        },
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            // clap renders its own message, styled for the stream.
            let _ = err.print();
            code
        }
    }
}

fn parse_tol_overrides(pairs: &[String]) -> Result<(Tolerances, BTreeMap<String, f64>)> {
    let mut tols = Tolerances::default();
    let mut echo = BTreeMap::new();
    for pair in pairs {
        let Some((name, raw)) = pair.split_once('=') else {
            return Err(Error::BadArgs {
                reason: format!("tolerance override must look like name=value, got {pair:?}"),
            });
        };
        let value: f64 = raw.parse().map_err(|_| Error::BadArgs {
            reason: format!("tolerance value {raw:?} is not a number"),
        })?;
        tols.set(name.trim(), value)?;
        echo.insert(name.trim().to_string(), value);
    }
    Ok((tols, echo))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Tensor {
            list_a,
            list_b,
            k,
            out,
            format,
        } => cmd_tensor(&list_a, &list_b, k, out.as_deref(), &format),
        Command::Verify {
            suite,
            trials,
            seed,
            tol,
            out,
        } => cmd_verify(&suite, trials, seed, &tol, out.as_deref()),
        Command::Interaction {
            p,
            q,
            list_minus,
            list_plus,
            n_max,
            dim,
            seed,
            tol,
            out,
            format,
        } => cmd_interaction(
            p,
            q,
            list_minus.as_deref(),
            list_plus.as_deref(),
            n_max,
            dim,
            seed,
            &tol,
            out.as_deref(),
            &format,
        ),
    }
}

fn cmd_tensor(
    list_a: &Path,
    list_b: &Path,
    k: Option<usize>,
    out: Option<&Path>,
    format: &str,
) -> Result<i32> {
    let a = read_list_csv(list_a)?;
    let b = read_list_csv(list_b)?;
    let (list, tail): (EigenvalueList, Option<f64>) = match k {
        Some(k) => {
            let certified = a.tensor_top_k(&b, k);
            (certified.prefix, Some(certified.tail_mass_bound))
        }
        None => (a.tensor(&b)?, None),
    };
    let text = match format {
        "csv" => {
            let mut text = list_to_csv(&list);
            if let Some(bound) = tail {
                text.push_str(&format!("# tail_mass_bound {bound}\n"));
            }
            text
        }
        _ => {
            let config = serde_json::json!({
                "list_a": list_a.display().to_string(),
                "list_b": list_b.display().to_string(),
                "k": k,
                "format": format,
            });
            let results = match tail {
                Some(bound) => serde_json::json!({
                    "prefix": list,
                    "tail_mass_bound": bound,
                }),
                None => serde_json::json!({ "list": list }),
            };
            render_report(&report_envelope("tensor", config, results))
        }
    };
    emit(out, &text)?;
    Ok(0)
}

fn cmd_verify(
    suite: &str,
    trials: Option<usize>,
    seed: u64,
    tol: &[String],
    out: Option<&Path>,
) -> Result<i32> {
    let kind = SuiteKind::from_token(suite).ok_or_else(|| Error::BadArgs {
        reason: format!(
            "unknown suite {suite:?}; known suites: {}",
            SuiteKind::TOKENS.join(", ")
        ),
    })?;
    let (tols, echo) = parse_tol_overrides(tol)?;
    let resolved_trials = trials.unwrap_or_else(|| kind.default_trials());
    let run = run_suite(kind, Some(resolved_trials), seed, &tols)?;
    let config = serde_json::json!({
        "suite": run.suite,
        "trials": resolved_trials,
        "seed": seed,
        "tol": echo,
    });
    let text = render_report(&report_envelope("verify", config, run.results));
    emit(out, &text)?;
    Ok(if run.pass { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn cmd_interaction(
    p: Option<usize>,
    q: Option<usize>,
    list_minus: Option<&Path>,
    list_plus: Option<&Path>,
    n_max: usize,
    dim: Option<usize>,
    seed: u64,
    tol: &[String],
    out: Option<&Path>,
    format: &str,
) -> Result<i32> {
    let (minus, plus, pq) = match (p, q, list_minus, list_plus) {
        (Some(p), Some(q), None, None) => (
            EigenvalueList::uniform(p.max(1)),
            EigenvalueList::uniform(q.max(1)),
            Some((p, q)),
        ),
        (None, None, Some(minus_path), Some(plus_path)) => {
            (read_list_csv(minus_path)?, read_list_csv(plus_path)?, None)
        }
        _ => {
            return Err(Error::BadArgs {
                reason: "provide either --p and --q, or --list-minus and --list-plus".into(),
            })
        }
    };
    let site_dim = dim.unwrap_or_else(|| minus.len().max(plus.len()).max(1));
    let (tols, echo) = parse_tol_overrides(tol)?;
    let model = ChainInteractionModel::diagonal(site_dim, &minus, &plus)?;
    let report = interaction_suite(&model, n_max, pq, &tols)?;
    let text = match format {
        "csv" => {
            let mut text = String::from("n,lhs,floor\n");
            for row in &report.bound.rows {
                text.push_str(&format!("{},{},{}\n", row.n, row.lhs, row.floor));
            }
            text.push_str(&format!("# rhs {}\n", report.bound.rhs));
            text.push_str(&format!(
                "# certified_limit {}\n",
                report.bound.certified_limit
            ));
            text.push_str(&format!("# verdict {}\n", report.bound.verdict));
            text
        }
        _ => {
            let config = serde_json::json!({
                "p": p,
                "q": q,
                "list_minus": list_minus.map(|p| p.display().to_string()),
                "list_plus": list_plus.map(|p| p.display().to_string()),
                "n_max": n_max,
                "dim": site_dim,
                "seed": seed,
                "tol": echo,
            });
            let results = serde_json::to_value(&report).expect("interaction reports serialize");
            render_report(&report_envelope("interaction", config, results))
        }
    };
    emit(out, &text)?;
    Ok(if report.pass { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_list(dir: &Path, name: &str, text: &str) -> PathBuf {
        let path = dir.join(name);
        std::fs::write(&path, text).unwrap();
        path
    }

    #[test]
    fn tensor_command_reproduces_worked_example() {
        let dir = tempfile::tempdir().unwrap();
        let a = write_list(dir.path(), "a.csv", "0.75\n0.25\n");
        let b = write_list(dir.path(), "b.csv", "0.6\n0.2\n0.2\n");
        let out = dir.path().join("out.csv");
        let code = cmd_tensor(&a, &b, None, Some(&out), "csv").unwrap();
        assert_eq!(code, 0);
        let text = std::fs::read_to_string(&out).unwrap();
        let list = crate::io::parse_list_csv(&text, &out).unwrap();
        let want = [0.45, 0.15, 0.15, 0.15, 0.05, 0.05];
        assert_eq!(list.len(), want.len());
        for (got, want) in list.values().iter().zip(want) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn tensor_with_singleton_echoes_other_list() {
        let dir = tempfile::tempdir().unwrap();
        let a = write_list(dir.path(), "one.csv", "1.0\n");
        let b = write_list(dir.path(), "b.csv", "0.5\n0.3\n0.2\n");
        let out = dir.path().join("echo.csv");
        cmd_tensor(&a, &b, None, Some(&out), "csv").unwrap();
        let text = std::fs::read_to_string(&out).unwrap();
        let list = crate::io::parse_list_csv(&text, &out).unwrap();
        assert_eq!(list.values(), &[0.5, 0.3, 0.2]);
    }

    #[test]
    fn tensor_prefix_adds_bound_comment() {
        let dir = tempfile::tempdir().unwrap();
        let a = write_list(dir.path(), "a.csv", "0.75\n0.25\n");
        let b = write_list(dir.path(), "b.csv", "0.6\n0.2\n0.2\n");
        let out = dir.path().join("prefix.csv");
        cmd_tensor(&a, &b, Some(3), Some(&out), "csv").unwrap();
        let text = std::fs::read_to_string(&out).unwrap();
        assert!(text.contains("# tail_mass_bound"));
        let list = crate::io::parse_list_csv(&text, &out).unwrap();
        assert_eq!(list.len(), 3);
    }

    #[test]
    fn verify_rejects_unknown_suite_and_bad_tol() {
        assert!(matches!(
            cmd_verify("nope", None, 7, &[], None),
            Err(Error::BadArgs { .. })
        ));
        assert!(matches!(
            cmd_verify("weyl", Some(1), 7, &["weyl=1".into()], None),
            Err(Error::BadArgs { .. })
        ));
        assert!(matches!(
            cmd_verify("weyl", Some(1), 7, &["weyl_slack".into()], None),
            Err(Error::BadArgs { .. })
        ));
    }

    #[test]
    fn verify_writes_deterministic_reports() {
        let dir = tempfile::tempdir().unwrap();
        let out_a = dir.path().join("a.json");
        let out_b = dir.path().join("b.json");
        let tol = vec!["weyl_slack=1e-8".to_string()];
        assert_eq!(
            cmd_verify("weyl", Some(20), 7, &tol, Some(&out_a)).unwrap(),
            0
        );
        assert_eq!(
            cmd_verify("weyl", Some(20), 7, &tol, Some(&out_b)).unwrap(),
            0
        );
        let a = std::fs::read(&out_a).unwrap();
        let b = std::fs::read(&out_b).unwrap();
        assert_eq!(a, b);
        let report: serde_json::Value = serde_json::from_slice(&a).unwrap();
        assert_eq!(report["schema"], 1);
        assert_eq!(report["command"], "verify");
        assert_eq!(report["config"]["seed"], 7);
        assert_eq!(report["results"]["pass"], true);
    }

    #[test]
    fn interaction_uniform_pair_report() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("report.json");
        let code = cmd_interaction(
            Some(1),
            Some(2),
            None,
            None,
            4,
            None,
            7,
            &[],
            Some(&out),
            "json",
        )
        .unwrap();
        assert_eq!(code, 0);
        let report: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(report["results"]["bound"]["rhs"], 1.5);
        assert_eq!(report["results"]["crosscheck"]["matches"], true);
        assert_eq!(report["results"]["witness"]["verdict"], "nontrivial");
    }

    #[test]
    fn interaction_equal_lists_inconclusive() {
        let dir = tempfile::tempdir().unwrap();
        let minus = write_list(dir.path(), "m.csv", "0.7\n0.3\n");
        let plus = write_list(dir.path(), "p.csv", "0.7\n0.3\n");
        let out = dir.path().join("report.json");
        let code = cmd_interaction(
            None,
            None,
            Some(&minus),
            Some(&plus),
            3,
            None,
            7,
            &[],
            Some(&out),
            "json",
        )
        .unwrap();
        assert_eq!(code, 0);
        let report: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(report["results"]["witness"]["verdict"], "inconclusive");
        assert_eq!(report["results"]["bound"]["rhs"], 0.0);
    }

    #[test]
    fn interaction_csv_rows_are_plot_ready() {
        let code = cmd_interaction(Some(2), Some(3), None, None, 3, None, 7, &[], None, "csv");
        assert_eq!(code.unwrap(), 0);
    }

    #[test]
    fn interaction_requires_one_input_mode() {
        assert!(matches!(
            cmd_interaction(Some(1), None, None, None, 3, None, 7, &[], None, "json"),
            Err(Error::BadArgs { .. })
        ));
        assert!(matches!(
            cmd_interaction(None, None, None, None, 3, None, 7, &[], None, "json"),
            Err(Error::BadArgs { .. })
        ));
    }
}
