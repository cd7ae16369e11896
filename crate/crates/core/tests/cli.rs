//! End-to-end tests of the `litrank` binary: exit codes, error wording,
//! flag handling, and the exact shape of what lands on stdout.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use litrank::synthetic::{generate, write_dataset, SyntheticParams};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_litrank")
}

/// A small but structurally complete corpus: every archetype present, some
/// venues missing, judged pairs and external records included.
fn small_corpus(dir: &Path) {
    let ds = generate(&SyntheticParams {
        seed: 11,
        articles: 120,
        venues: 8,
        authors: 40,
        affiliations: 10,
        pairs: 30,
        missing_venue_frac: 0.1,
        ..Default::default()
    });
    write_dataset(&ds, dir).unwrap();
}

struct Workspace {
    #[allow(dead_code)]
    root: tempfile::TempDir,
    input: PathBuf,
    config: PathBuf,
}

impl Workspace {
    /// Builds an input corpus and a config file pointing staging and output
    /// at fresh directories; `extra` is appended to the config verbatim.
    fn new(extra: &str) -> Workspace {
        let root = tempfile::tempdir().unwrap();
        let input = root.path().join("input");
        std::fs::create_dir_all(&input).unwrap();
        small_corpus(&input);
        let config = root.path().join("config.toml");
        std::fs::write(
            &config,
            format!(
                "[paths]\nstaging_dir = \"{}\"\noutput_dir = \"{}\"\n{extra}",
                root.path().join("stage").display(),
                root.path().join("out").display()
            ),
        )
        .unwrap();
        Workspace {
            root,
            input,
            config,
        }
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(bin())
            .args(["--config", self.config.to_str().unwrap()])
            .args(args)
            .output()
            .unwrap()
    }

    fn run_ok(&self, args: &[&str]) -> String {
        let out = self.run(args);
        assert!(
            out.status.success(),
            "{args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        String::from_utf8(out.stdout).unwrap()
    }

    fn ingest(&self) {
        self.run_ok(&["ingest", self.input.to_str().unwrap()]);
    }

    fn out_dir(&self) -> PathBuf {
        self.root.path().join("out")
    }

    fn stage_dir(&self) -> PathBuf {
        self.root.path().join("stage")
    }
}

fn assert_exit(out: &Output, code: i32, needle: &str) {
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(
        out.status.code(),
        Some(code),
        "expected exit {code}, got {:?}; stderr: {stderr}",
        out.status.code()
    );
    assert!(
        stderr.contains(needle),
        "stderr missing {needle:?}: {stderr}"
    );
}

#[test]
fn bad_config_and_bad_method_exit_with_code_2() {
    let ws = Workspace::new("");
    // Unknown key in the config file.
    std::fs::write(&ws.config, "[ranking]\ndampening = 0.3\n").unwrap();
    assert_exit(&ws.run(&["rank"]), 2, "config error");

    // Out-of-range value.
    std::fs::write(&ws.config, "[ranking]\ndamping = 1.5\n").unwrap();
    assert_exit(&ws.run(&["rank"]), 2, "damping");

    // Valid config, unknown method name.
    let ws = Workspace::new("");
    ws.ingest();
    assert_exit(
        &ws.run(&["rank", "--method", "bogus"]),
        2,
        "unknown method \"bogus\"",
    );
}

#[test]
fn missing_staged_dataset_exits_with_code_3() {
    let ws = Workspace::new("");
    let out = ws.run(&["rank"]);
    assert_exit(&out, 3, "no staged dataset");
    assert_exit(&ws.run(&["eval", "--ablation", "x.tsv"]), 3, "no staged dataset");
}

#[test]
fn ingest_refuses_overwrite_without_force() {
    let ws = Workspace::new("");
    ws.ingest();
    let again = ws.run(&["ingest", ws.input.to_str().unwrap()]);
    assert_exit(&again, 3, "pass --force");
    ws.run_ok(&["ingest", ws.input.to_str().unwrap(), "--force"]);
}

#[test]
fn malformed_inputs_exit_with_code_4_naming_file_and_line() {
    // Invalid UTF-8 on line 3 of the article file.
    let ws = Workspace::new("");
    let papers = ws.input.join("papers.tsv");
    let mut bytes = b"p1\t2001\tv1\tone\np2\t2002\tv1\ttwo\n".to_vec();
    bytes.extend_from_slice(b"p3\t2003\tv1\t\xff\xfe\n");
    std::fs::write(&papers, bytes).unwrap();
    let out = ws.run(&["ingest", ws.input.to_str().unwrap()]);
    assert_exit(&out, 4, "papers.tsv");
    assert_exit(&out, 4, "line 3");

    // A ranking file with a wrong column count on line 2.
    let ws = Workspace::new("");
    ws.ingest();
    let ranking = ws.root.path().join("broken.tsv");
    std::fs::write(&ranking, "p0000\t1.0\np0001\n").unwrap();
    let pairs = ws.input.join("pairs.tsv");
    let out = ws.run(&[
        "eval",
        ranking.to_str().unwrap(),
        pairs.to_str().unwrap(),
    ]);
    assert_exit(&out, 4, "broken.tsv:2");
}

#[test]
fn unreachable_name_threshold_disables_name_matches() {
    // Baseline: the corpus's external names do link by name.
    let ws = Workspace::new("");
    ws.ingest();
    let stdout = ws.run_ok(&["link", ws.input.join("external.tsv").to_str().unwrap()]);
    let count = |s: &str, label: &str| -> u32 {
        s.lines()
            .find(|l| l.starts_with(label))
            .and_then(|l| l.split_whitespace().last())
            .and_then(|n| n.parse().ok())
            .unwrap_or_else(|| panic!("no {label:?} line in {s:?}"))
    };
    assert!(count(&stdout, "linked by name") > 0);

    // Same corpus, name threshold above any reachable similarity.
    let ws2 = Workspace::new("[linking]\nlambda = 1.01\nphi = 0.7\n");
    ws2.ingest();
    let stdout2 = ws2.run_ok(&["link", ws2.input.join("external.tsv").to_str().unwrap()]);
    assert_eq!(count(&stdout2, "linked by name"), 0);
    let audit = std::fs::read_to_string(ws2.out_dir().join("link_audit.tsv")).unwrap();
    assert!(!audit.contains("name_only"), "audit has name_only rows");
}

#[test]
fn emit_ensembles_controls_output_files() {
    let ws = Workspace::new("");
    ws.ingest();

    let rankings = |dir: &Path| -> Vec<String> {
        let mut names: Vec<String> = std::fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .filter(|n| n.ends_with(".tsv"))
            .collect();
        names.sort();
        names
    };

    ws.run_ok(&["rank", "--method", "ewpr"]);
    assert_eq!(rankings(&ws.out_dir()), ["ranking_ewpr.tsv"]);

    ws.run_ok(&["rank", "--method", "ewpr", "--emit-ensembles"]);
    assert_eq!(
        rankings(&ws.out_dir()),
        [
            "ensemble_author.tsv",
            "ensemble_citation.tsv",
            "ensemble_venue.tsv",
            "ranking_ewpr.tsv",
        ]
    );

    ws.run_ok(&["rank", "--method", "ewpr-all", "--emit-ensembles"]);
    assert_eq!(
        rankings(&ws.out_dir()),
        [
            "ensemble_affiliation.tsv",
            "ensemble_author.tsv",
            "ensemble_citation.tsv",
            "ensemble_venue.tsv",
            "ranking_ewpr-all.tsv",
            "ranking_ewpr.tsv",
        ]
    );
}

#[test]
fn link_persists_fill_rows_matching_reported_count() {
    let ws = Workspace::new("[linking]\nenable_enrichment = true\n");
    ws.ingest();
    let stdout = ws.run_ok(&["link", ws.input.join("external.tsv").to_str().unwrap()]);
    assert!(stdout.contains("audit written to"));

    let enriched: usize = stdout
        .lines()
        .find(|l| l.starts_with("articles enriched"))
        .and_then(|l| l.split_whitespace().last())
        .and_then(|n| n.parse().ok())
        .unwrap();
    assert!(enriched > 0, "fixture produced no enrichment:\n{stdout}");

    let fill = std::fs::read_to_string(ws.stage_dir().join("venue_fill.tsv")).unwrap();
    assert_eq!(fill.lines().count(), enriched);
    for line in fill.lines() {
        assert_eq!(line.split('\t').count(), 2, "bad fill row {line:?}");
    }

    // The overlay changes the article table rank sees: fewer articles fall
    // into the missing-venue bucket, so the venue ensemble shifts.
    ws.run_ok(&["rank", "--method", "ewpr"]);
}

#[test]
fn eval_prints_accuracy_line_and_ablation_table() {
    let ws = Workspace::new("");
    ws.ingest();
    ws.run_ok(&["rank", "--method", "ewpr"]);
    let ranking = ws.out_dir().join("ranking_ewpr.tsv");
    let pairs = ws.input.join("pairs.tsv");

    let stdout = ws.run_ok(&[
        "eval",
        ranking.to_str().unwrap(),
        pairs.to_str().unwrap(),
    ]);
    let line = stdout.trim();
    let ok = line.starts_with("accuracy 0.") || line.starts_with("accuracy 1.");
    assert!(ok && line.contains(" pairs (") && line.ends_with("excluded)"), "{line:?}");

    let table = ws.run_ok(&["eval", "--ablation", pairs.to_str().unwrap()]);
    let rows: Vec<&str> = table.lines().collect();
    assert_eq!(rows.len(), 4);
    for (row, method) in rows.iter().zip(["pr", "wpr", "ewpr", "ewpr-all"]) {
        let fields: Vec<&str> = row.split('\t').collect();
        assert_eq!(fields.len(), 4, "{row:?}");
        assert_eq!(fields[0], method);
        assert!(fields[1].parse::<f64>().is_ok(), "{row:?}");
        assert!(fields[2].parse::<u64>().is_ok() && fields[3].parse::<u64>().is_ok());
    }

    // eval with a wrong argument shape is a usage error.
    assert_exit(&ws.run(&["eval", ranking.to_str().unwrap()]), 2, "eval takes");
    assert_exit(
        &ws.run(&[
            "eval",
            "--ablation",
            ranking.to_str().unwrap(),
            pairs.to_str().unwrap(),
        ]),
        2,
        "exactly one",
    );
}
