//! The `dgroup` command line, driven in process and through the binary.

use std::path::Path;
use std::process::Command;

use dgroup::catalog::EntryMetadata;
use dgroup::cli::{run, ReportDocument, EXIT_INPUT, EXIT_OK, EXIT_VERIFY, SCHEMA_VERSION};
use dgroup::GroupHandle;

const GOLDEN_REPORT: &str = "tests/golden/report_pgl2q_cosets_q3.json";

fn dgroup(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("dgroup").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn catalog_list_names_the_entries() {
    let (code, out, _) = dgroup(&["catalog", "--list"]);
    assert_eq!(code, EXIT_OK);
    for id in ["agl1p", "wreath", "pgl2q_cosets", "gammaL164_deg28"] {
        assert!(out.lines().any(|l| l.starts_with(&format!("{id}:"))), "{id} missing");
    }
    assert!(out.contains("l (l even, l | p-1)"));
}

#[test]
fn catalog_build_writes_group_file_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wreath.grp");
    let (code, out, err) = dgroup(&["catalog", "--build", "wreath", "--params", "k=3,n=4", "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("degree 12, order 648"));
    let group = GroupHandle::from_group_file(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!((group.degree(), group.order()), (12, 648));
    let side = dir.path().join("wreath.grp.json");
    let meta: EntryMetadata = serde_json::from_str(&std::fs::read_to_string(side).unwrap()).unwrap();
    assert_eq!(meta.id, "wreath");
    assert_eq!(meta.witness.unwrap().subgroup_order, 12);
}

#[test]
fn catalog_build_to_stdout() {
    let (code, out, _) = dgroup(&["catalog", "--build", "sym", "--params", "n=3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("degree: 3\n"));
}

#[test]
fn catalog_rejects_bad_parameters() {
    let (code, _, err) = dgroup(&["catalog", "--build", "agl1p", "--params", "p=6"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("p must be prime"), "{err}");
    let (code, _, err) = dgroup(&["catalog", "--build", "nosuch"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("nosuch"));
}

#[test]
fn analyze_s4_summary() {
    let (code, out, _) = dgroup(&["analyze", "tests/data/s4.grp", "--format", "text"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("primitive, 2-transitive, class both"), "{out}");
}

#[test]
fn analyze_intransitive_input() {
    let (code, _, err) = dgroup(&["analyze", "tests/data/intransitive.grp"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("not transitive"), "{err}");
}

#[test]
fn analyze_reports_parse_errors_with_lines() {
    let (code, _, err) = dgroup(&["analyze", "tests/data/bad_point.grp"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line 3"), "{err}");
    let (code, _, err) = dgroup(&["analyze", "tests/data/missing.grp"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("missing.grp"));
}

#[test]
fn analyze_names_exceeded_caps() {
    let (code, _, err) = dgroup(&["analyze", "tests/data/s4.grp", "--cap-order", "10"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("cap"), "{err}");
}

#[test]
fn require_dgroup_rejects_other_classes() {
    let (code, _, err) = dgroup(&["analyze", "tests/data/z6.grp", "--require-dgroup"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("not a d-group (class c-group)"), "{err}");
    let (code, _, _) = dgroup(&["analyze", "tests/data/z6.grp"]);
    assert_eq!(code, EXIT_OK);
    let (code, _, _) = dgroup(&["analyze", "tests/data/s4.grp", "--require-dgroup"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn report_round_trips_and_is_deterministic() {
    let (code, first, _) = dgroup(&["analyze", "tests/data/pgl2q_cosets_q3.grp"]);
    assert_eq!(code, EXIT_OK);
    let (_, second, _) = dgroup(&["analyze", "tests/data/pgl2q_cosets_q3.grp"]);
    assert_eq!(first, second);
    let doc: ReportDocument = serde_json::from_str(&first).unwrap();
    assert_eq!(doc.schema_version, SCHEMA_VERSION);
    assert_eq!(doc.timing, None);
    assert_eq!(doc.input.sidecar.as_deref(), Some("tests/data/pgl2q_cosets_q3.grp.json"));
    assert_eq!(doc.to_json(), first);
    let again: ReportDocument = serde_json::from_str(&doc.to_json()).unwrap();
    assert_eq!(again, doc);
}

#[test]
fn report_matches_frozen_golden() {
    let (code, out, _) = dgroup(&["analyze", "tests/data/pgl2q_cosets_q3.grp"]);
    assert_eq!(code, EXIT_OK);
    if std::env::var_os("DGROUP_BLESS").is_some() {
        std::fs::write(GOLDEN_REPORT, &out).unwrap();
    }
    let golden = std::fs::read_to_string(GOLDEN_REPORT).unwrap();
    assert_eq!(out, golden, "report differs from {GOLDEN_REPORT}");
}

#[test]
fn text_rendering_comes_from_the_document() {
    let (_, json, _) = dgroup(&["analyze", "tests/data/pgl2q_cosets_q3.grp"]);
    let (_, text, _) = dgroup(&["analyze", "tests/data/pgl2q_cosets_q3.grp", "--format", "text"]);
    let doc: ReportDocument = serde_json::from_str(&json).unwrap();
    assert_eq!(doc.render_text(), text);
    assert!(text.contains("blocks 4x2 |K|=1 |D∩K|=1 image=both 1:holds"), "{text}");
}

#[test]
fn timing_is_opt_in() {
    let (_, out, _) = dgroup(&["analyze", "tests/data/s4.grp", "--timing"]);
    let doc: ReportDocument = serde_json::from_str(&out).unwrap();
    assert!(doc.timing.is_some());
}

#[test]
fn analyze_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, out, err) = dgroup(&["analyze", "tests/data/s4.grp", "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert!(err.contains("wrote"));
    let doc: ReportDocument = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc.report.order, 24);
}

#[test]
fn graph_of_s4_is_complete() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("k4.dot");
    let (code, out, _) = dgroup(&["graph", "tests/data/s4.grp", "--pair", "1,2", "--dot", dot.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("12 arcs; connected, self-paired"), "{out}");
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("graph \"s4\" {"));
    assert_eq!(text.matches(" -- ").count(), 6);
}

#[test]
fn graph_of_cyclic_group_is_directed() {
    let (code, out, _) = dgroup(&["graph", "tests/data/z6.grp", "--pair", "1,2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("class: c-group"));
    assert!(out.contains("connected, NOT self-paired"), "{out}");
}

#[test]
fn wreath_inter_fibre_graph_is_a_blowup() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.grp");
    dgroup(&["catalog", "--build", "wreath", "--params", "k=3,n=4", "--out", path.to_str().unwrap()]);
    let text = std::fs::read_to_string(&path).unwrap();
    // Generator 1 permutes a fibre; point 7 lies in another fibre.
    assert!(text.contains("(1 2 3)"));
    let (code, out, _) = dgroup(&["graph", path.to_str().unwrap(), "--pair", "1,7"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("lex blowup of 4-block system"), "{out}");

    let dots = dir.path().join("dots");
    let (code, out, _) = dgroup(&["graph", path.to_str().unwrap(), "--all-suborbits", "--dot", dots.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.matches("suborbit of").count(), 4);
    assert_eq!(std::fs::read_dir(dots).unwrap().count(), 4);
}

#[test]
fn graph_rejects_bad_pairs() {
    let (code, _, _) = dgroup(&["graph", "tests/data/s4.grp", "--pair", "1,1"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = dgroup(&["graph", "tests/data/s4.grp", "--pair", "1,9"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = dgroup(&["graph", "tests/data/s4.grp"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn verify_suites_pass() {
    let (code, out, _) = dgroup(&["verify", "--suite", "all"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("pass     tables  psl27"));
    assert!(out.contains("pass     lemmas  wreath_k3_n4"));
    assert!(out.ends_with("25 passed, 0 failed, 0 skipped\n"), "{out}");
}

#[test]
fn verify_skips_large_entries() {
    let (code, out, _) = dgroup(&["verify", "--suite", "tables", "--max-order", "100"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("skipped  tables  m11: order 7920 exceeds --max-order 100"));
    assert!(out.contains("pass     tables  sym n=4"));
}

#[test]
fn verify_failures_exit_three() {
    let (code, out, _) = dgroup(&["verify", "--suite", "tables", "--cap-order", "10"]);
    assert_eq!(code, EXIT_VERIFY);
    assert!(out.contains("FAIL"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_dgroup");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["analyze", "tests/data/s4.grp", "--format", "text"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("class both"));
    let bad = status(&["analyze", "tests/data/intransitive.grp"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("not transitive"));
    assert_eq!(status(&["frobnicate"]).status.code(), Some(2));
    assert!(Path::new(bin).exists());
}
