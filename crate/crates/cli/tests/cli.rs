use std::path::Path;
use std::process::{Command, Output};

use f1_mirror::records::{
    read_hom_csv, BasisRecord, ComponentRecord, DimsRecord, HomRecord, PairDimsRecord,
    ProductRecord, VerifyRecord,
};
use f1_mirror::{enumerate_intersections, LineBundleLabel};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_f1mirror"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn dims_c0_table() {
    let o = run(&["dims", "--c", "0", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let rec: DimsRecord = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(rec.agree);
    let h0: Vec<Vec<u64>> = rec
        .bside
        .iter()
        .map(|r| r.iter().map(|h| h[0]).collect())
        .collect();
    assert_eq!(
        h0,
        vec![
            vec![1, 2, 3, 5],
            vec![0, 1, 1, 3],
            vec![0, 0, 1, 2],
            vec![0, 0, 0, 1]
        ]
    );
    assert_eq!(rec.aside, rec.bside);
}

#[test]
fn dims_c1_agrees() {
    let o = run(&["dims", "--c", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("agree: yes"));
}

#[test]
fn dims_pair_in_all_degrees() {
    let o = run(&[
        "dims",
        "--from",
        "0,0",
        "--to",
        "2,-2",
        "--all-degrees",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let rec: PairDimsRecord = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rec.bside, [0, 2, 0]);
    assert_eq!(rec.aside[1], 2);

    let table = stdout(&run(&[
        "dims",
        "--from",
        "0,0",
        "--to",
        "2,-2",
        "--all-degrees",
    ]));
    assert!(table
        .lines()
        .any(|l| l.split_whitespace().collect::<Vec<_>>() == ["1", "2", "2", "."]));
}

#[test]
fn hom_json_and_csv() {
    let o = run(&["hom", "--from", "0,0", "--to", "2,-2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o).trim(),
        r#"{"from":[0,0],"to":[2,-2],"h":[0,2,0]}"#
    );

    let o = run(&["hom", "--c", "1", "--format", "csv"]);
    let recs = read_hom_csv(stdout(&o).as_bytes()).unwrap();
    assert_eq!(recs.len(), 16);
    let json: Vec<HomRecord> =
        serde_json::from_str(&stdout(&run(&["hom", "--c", "1", "--format", "json"]))).unwrap();
    assert_eq!(json, recs);
}

#[test]
fn hom_for_other_hirzebruch_surfaces() {
    // O(0,1) on F_2 has 1 + 3 sections
    let o = run(&[
        "hom", "--k", "2", "--from", "0,0", "--to", "0,1", "--format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let rec: HomRecord = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rec.h, [4, 0, 0]);
}

#[test]
fn intersections_round_trip() {
    let o = run(&[
        "intersections",
        "--from",
        "0,0",
        "--to",
        "2,-2",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let recs: Vec<ComponentRecord> = serde_json::from_str(&stdout(&o)).unwrap();
    let comps: Vec<_> = recs.iter().map(|r| r.to_component().unwrap()).collect();
    assert_eq!(comps, enumerate_intersections(LineBundleLabel::new(2, -2)));
    let gens: Vec<_> = recs.iter().filter(|r| r.generator).collect();
    assert_eq!(gens.len(), 2);
    assert!(gens.iter().all(|r| r.degree == Some(1)));
}

#[test]
fn intersections_csv() {
    let text = stdout(&run(&[
        "intersections",
        "--from",
        "0,0",
        "--to",
        "2,-2",
        "--format",
        "csv",
    ]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("i1,i2,kind,locus,degree,generator"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn basis_round_trip() {
    let o = run(&["basis", "--c", "0", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let recs: Vec<BasisRecord> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(recs.len(), 12);
    let again = serde_json::to_string(&recs).unwrap();
    assert_eq!(again, stdout(&o).trim());
    let half = recs
        .iter()
        .find(|r| r.diff == LineBundleLabel::new(1, 1) && r.index.i1 == 1 && r.index.i2 == 0)
        .unwrap();
    assert_eq!(half.norm, "1/2");
}

#[test]
fn products_pass_and_round_trip() {
    let o = run(&["products", "--c", "0", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let recs: Vec<ProductRecord> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(serde_json::to_string(&recs).unwrap(), stdout(&o).trim());
    assert!(recs.iter().all(|r| r.kappa > 0.0 && r.kappa <= 1.0));
    assert!(recs
        .iter()
        .any(|r| r.kappa_sq == "1/4" && (r.area.unwrap() - 2f64.ln()).abs() < 1e-9));
}

#[test]
fn products_c1_table() {
    let o = run(&["products", "--c", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("max residual"));
}

#[test]
fn products_report_breaches() {
    // the log in the residual leaves rounding noise on the c=1 composites
    let o = run(&["products", "--c", "1", "--tol", "1e-300"]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.contains("exceeds 1e-300 for (1,0);(0,0) then (1,1);(1,0) -> (2,1);(1,0)"),
        "{err}"
    );
}

#[test]
fn verify_flags_the_flat_maximum() {
    let o = run(&["verify", "--c", "0", "--format", "json"]);
    let recs: Vec<VerifyRecord> = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(recs
        .iter()
        .all(|r| r.report.unit_on_locus && r.report.argmax_matches));
    let failing = recs.iter().filter(|r| !r.report.passed).count();
    assert_eq!(code(&o), if failing == 0 { 0 } else { 1 });
    assert_eq!(serde_json::to_string(&recs).unwrap(), stdout(&o).trim());

    // a looser margin accepts every generator
    let o = run(&["verify", "--c", "0", "--tol", "1e-5"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["dims", "--k", "2"])), 2);
    assert_eq!(code(&run(&["dims", "--from", "0,0"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["hom", "--from", "x,y", "--to", "0,0"])), 2);
    assert_eq!(code(&run(&["products", "--format", "svg"])), 2);
    assert_eq!(code(&run(&["plot"])), 2);
    assert_eq!(
        code(&run(&["dims", "--out", "/nonexistent/dir/out.txt"])),
        2
    );
}

#[test]
fn out_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dims.csv");
    let o = run(&[
        "dims",
        "--c",
        "0",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 17);
}

fn plot_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let mut full = vec!["plot", "--out", path.to_str().unwrap()];
    full.extend_from_slice(args);
    let o = run(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn plot_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let svg = plot_to(dir.path(), "a.svg", &["--from", "0,0", "--to", "2,-2"]);
    let golden = include_str!("golden/plot_diff_2_-2.svg");
    assert_eq!(svg, golden);
    assert_eq!(svg.matches(r#"class="locus"#).count(), 6);
    assert_eq!(svg.matches("locus degree-1 generator").count(), 2);
    assert!(svg.contains(r#"data-index="(0,-1)" cx="40.00" cy="240.00""#));
    assert!(svg.contains(r#"data-index="(1,-1)" cx="580.00" cy="240.00""#));
}

#[test]
fn plot_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--from", "0,0", "--to", "2,-2", "--stable-manifolds"];
    let a = plot_to(dir.path(), "a.svg", &args);
    let b = plot_to(dir.path(), "b.svg", &args);
    assert_eq!(a, b);
    assert_eq!(a.matches("stable-manifold").count(), 4);
}

#[test]
fn identity_plot_is_bare_polytope() {
    let dir = tempfile::tempdir().unwrap();
    let svg = plot_to(dir.path(), "id.svg", &["--from", "1,1", "--to", "1,1"]);
    assert!(svg.contains(r#"class="polytope""#));
    assert!(!svg.contains(r#"class="locus"#));
    assert!(!svg.contains("tree-edge"));
}

#[test]
fn plot_tree_along_bottom_edge() {
    let dir = tempfile::tempdir().unwrap();
    let svg = plot_to(
        dir.path(),
        "t.svg",
        &["--from", "0,0", "--via", "0,1", "--to", "1,1"],
    );
    // root at (2, 0), edges on x2 = 0 (pixel row 420)
    assert!(svg.contains(r#"class="tree-root" data-target="(1,0)" cx="400.00" cy="420.00""#));
    let edges: Vec<&str> = svg.lines().filter(|l| l.contains("tree-edge")).collect();
    assert!(!edges.is_empty());
    for e in edges {
        let pts = e
            .split("points=\"")
            .nth(1)
            .unwrap()
            .split('"')
            .next()
            .unwrap();
        assert!(pts.split(' ').all(|p| p.ends_with(",420.00")), "{pts}");
    }
}
