use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use f1_mirror::aside::{enumerate_intersections, hom_basis};
use f1_mirror::bside::{cohomology, exceptional_collection, hom_cohomology};
use f1_mirror::functor::{iota, verify_max_locus, VerifyOptions};
use f1_mirror::product::{collection_products, gradient_trees, BasisKey};
use f1_mirror::records::{
    write_hom_csv, BasisRecord, ComponentRecord, DimsRecord, HomRecord, PairDimsRecord,
    ProductRecord, VerifyRecord,
};
use f1_mirror::scalar::format_rational;
use f1_mirror::{IntersectionComponent, LineBundleLabel, Rational};

use crate::config::{Command, Format, RunConfig};
use crate::svg;

/// Result of a command that ran to completion.
pub struct Report {
    pub output: String,
    /// Mathematical checks passed.
    pub passed: bool,
    /// Diagnostics for stderr.
    pub notes: Vec<String>,
}

impl Report {
    fn pass(output: String) -> Self {
        Self {
            output,
            passed: true,
            notes: vec![],
        }
    }
}

pub fn run(command: &Command, cfg: &RunConfig) -> Result<Report> {
    match command {
        Command::Hom => hom(cfg),
        other => {
            if cfg.k != 1 {
                bail!("this command is only defined for k = 1 (got k = {})", cfg.k);
            }
            match other {
                Command::Dims => dims(cfg),
                Command::Intersections => intersections(cfg),
                Command::Basis => basis(cfg),
                Command::Products => products(cfg),
                Command::Verify => verify(cfg),
                Command::Plot {
                    via,
                    stable_manifolds,
                } => plot(cfg, *via, *stable_manifolds),
                Command::Hom => unreachable!(),
            }
        }
    }
}

fn format_of(cfg: &RunConfig, allowed: &[Format]) -> Result<Format> {
    let f = cfg.format.unwrap_or(allowed[0]);
    if !allowed.contains(&f) {
        bail!("format {f:?} is not available for this command");
    }
    Ok(f)
}

/// `Some((from, to))` when both are given, `None` when neither is.
fn pair(cfg: &RunConfig) -> Result<Option<(LineBundleLabel, LineBundleLabel)>> {
    match (cfg.from, cfg.to) {
        (Some(a), Some(b)) => Ok(Some((a, b))),
        (None, None) => Ok(None),
        _ => bail!("--from and --to must be given together"),
    }
}

fn require_pair(cfg: &RunConfig) -> Result<(LineBundleLabel, LineBundleLabel)> {
    pair(cfg)?.context("--from and --to are required")
}

/// Ordered pairs `i <= j` of the collection, or the single requested pair.
fn pairs_or_collection(cfg: &RunConfig) -> Result<Vec<(LineBundleLabel, LineBundleLabel)>> {
    if let Some(p) = pair(cfg)? {
        return Ok(vec![p]);
    }
    let labels = exceptional_collection(cfg.c);
    let mut out = Vec::new();
    for i in 0..labels.len() {
        for j in i..labels.len() {
            out.push((labels[i], labels[j]));
        }
    }
    Ok(out)
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string(value)?;
    s.push('\n');
    Ok(s)
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn key_str(k: &BasisKey) -> String {
    format!("{};{}", k.diff, k.index)
}

fn degree_str(d: Option<u32>) -> String {
    d.map_or("-".to_string(), |d| d.to_string())
}

fn half(e: i64) -> String {
    format_rational(&Rational::new(e.into(), 2.into()))
}

fn cell_diff(b: u64, a: u64) -> String {
    if a == b {
        ".".into()
    } else {
        format!("{:+}", b as i64 - a as i64)
    }
}

fn dims(cfg: &RunConfig) -> Result<Report> {
    let format = format_of(cfg, &[Format::Table, Format::Json, Format::Csv])?;
    if let Some((from, to)) = pair(cfg)? {
        return dims_pair(cfg, format, from, to);
    }
    let labels = exceptional_collection(cfg.c).to_vec();
    let n = labels.len();
    let mut bside = vec![vec![[0u64; 3]; n]; n];
    let mut aside = vec![vec![[0u64; 3]; n]; n];
    let mut notes = Vec::new();
    for i in 0..n {
        for j in 0..n {
            bside[i][j] = hom_cohomology(labels[i], labels[j]).as_array();
            let basis = hom_basis(labels[i], labels[j]);
            aside[i][j] = basis.counts();
            if !basis.degenerate.is_empty() {
                notes.push(format!(
                    "Hom(E{i}, E{j}): {} component(s) with degenerate linearization",
                    basis.degenerate.len()
                ));
            }
            for d in 0..3 {
                if bside[i][j][d] != aside[i][j][d] {
                    notes.push(format!(
                        "mismatch Hom(E{i}, E{j}) degree {d}: B-side {}, A-side {}",
                        bside[i][j][d], aside[i][j][d]
                    ));
                }
            }
        }
    }
    let agree = notes.is_empty();
    let record = DimsRecord {
        c: cfg.c,
        labels: labels.clone(),
        bside,
        aside,
        agree,
    };
    let output = match format {
        Format::Json => json(&record)?,
        Format::Csv => {
            let mut rows = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let (b, a) = (record.bside[i][j], record.aside[i][j]);
                    let mut row = vec![i.to_string(), j.to_string()];
                    row.extend(
                        [labels[i].a, labels[i].b, labels[j].a, labels[j].b].map(|v| v.to_string()),
                    );
                    row.extend(b.iter().chain(a.iter()).map(|v| v.to_string()));
                    row.push((a == b).to_string());
                    rows.push(row);
                }
            }
            csv_text(
                &[
                    "i", "j", "a1", "b1", "a2", "b2", "h0", "h1", "h2", "deg0", "deg1", "deg2",
                    "agree",
                ],
                rows,
            )?
        }
        _ => dims_table(&record, cfg.all_degrees),
    };
    Ok(Report {
        output,
        passed: agree,
        notes,
    })
}

fn dims_table(r: &DimsRecord, all_degrees: bool) -> String {
    let mut s = String::new();
    let names: Vec<String> = r
        .labels
        .iter()
        .enumerate()
        .map(|(i, l)| format!("E{i}={l}"))
        .collect();
    let _ = writeln!(s, "collection c={}: {}", r.c, names.join(" "));
    for d in 0..3 {
        let differs = r
            .bside
            .iter()
            .flatten()
            .zip(r.aside.iter().flatten())
            .any(|(b, a)| b[d] != a[d]);
        if d > 0 && !all_degrees && !differs {
            continue;
        }
        let _ = writeln!(s, "\ndegree {d}   {:<16}{:<16}diff", "B-side", "A-side");
        for (i, (brow, arow)) in r.bside.iter().zip(&r.aside).enumerate() {
            let cells = |row: &Vec<[u64; 3]>| {
                row.iter()
                    .map(|h| format!("{:>4}", h[d]))
                    .collect::<String>()
            };
            let diff: String = brow
                .iter()
                .zip(arow)
                .map(|(b, a)| format!("{:>4}", cell_diff(b[d], a[d])))
                .collect();
            let _ = writeln!(
                s,
                "  E{i}       {:<16}{:<16}{diff}",
                cells(brow),
                cells(arow)
            );
        }
    }
    let _ = writeln!(s, "\nagree: {}", if r.agree { "yes" } else { "NO" });
    s
}

fn dims_pair(
    cfg: &RunConfig,
    format: Format,
    from: LineBundleLabel,
    to: LineBundleLabel,
) -> Result<Report> {
    let b = hom_cohomology(from, to).as_array();
    let basis = hom_basis(from, to);
    let a = basis.counts();
    let record = PairDimsRecord {
        from,
        to,
        bside: b,
        aside: a,
        degenerate: basis.degenerate.len(),
        agree: a == b && basis.degenerate.is_empty(),
    };
    let mut notes = Vec::new();
    for d in 0..3 {
        if a[d] != b[d] {
            notes.push(format!(
                "mismatch degree {d}: B-side {}, A-side {}",
                b[d], a[d]
            ));
        }
    }
    let shown = if cfg.all_degrees { 3 } else { 1 };
    let output = match format {
        Format::Json => json(&record)?,
        Format::Csv => {
            let mut row: Vec<String> = [from.a, from.b, to.a, to.b].map(|v| v.to_string()).to_vec();
            row.extend(b.iter().chain(a.iter()).map(|v| v.to_string()));
            row.push(record.agree.to_string());
            csv_text(
                &[
                    "a1", "b1", "a2", "b2", "h0", "h1", "h2", "deg0", "deg1", "deg2", "agree",
                ],
                vec![row],
            )?
        }
        _ => {
            let mut s = format!("Hom(O{from}, O{to})\n");
            let _ = writeln!(s, "degree  B-side  A-side  diff");
            for d in 0..shown {
                let _ = writeln!(
                    s,
                    "{d:>6}  {:>6}  {:>6}  {:>4}",
                    b[d],
                    a[d],
                    cell_diff(b[d], a[d])
                );
            }
            if record.degenerate > 0 {
                let _ = writeln!(s, "degenerate components: {}", record.degenerate);
            }
            let _ = writeln!(s, "agree: {}", if record.agree { "yes" } else { "NO" });
            s
        }
    };
    Ok(Report {
        output,
        passed: record.agree,
        notes,
    })
}

fn hom(cfg: &RunConfig) -> Result<Report> {
    let format = format_of(cfg, &[Format::Table, Format::Json, Format::Csv])?;
    let records: Vec<HomRecord> = match pair(cfg)? {
        Some((from, to)) => vec![HomRecord::new(from, to, &cohomology(cfg.k, to - from))],
        None => {
            if cfg.k != 1 {
                bail!("the exceptional collection is only defined for k = 1; pass --from and --to");
            }
            let labels = exceptional_collection(cfg.c);
            labels
                .iter()
                .flat_map(|&f| {
                    labels
                        .iter()
                        .map(move |&t| HomRecord::new(f, t, &hom_cohomology(f, t)))
                })
                .collect()
        }
    };
    let output = match format {
        Format::Json if records.len() == 1 => json(&records[0])?,
        Format::Json => json(&records)?,
        Format::Csv => {
            let mut buf = Vec::new();
            write_hom_csv(&records, &mut buf)?;
            String::from_utf8(buf)?
        }
        _ => {
            let mut s = String::new();
            for r in &records {
                let _ = writeln!(s, "Hom(O{}, O{}) = {:?}", r.from, r.to, r.h);
            }
            s
        }
    };
    Ok(Report::pass(output))
}

fn intersections(cfg: &RunConfig) -> Result<Report> {
    let format = format_of(
        cfg,
        &[Format::Table, Format::Json, Format::Csv, Format::Svg],
    )?;
    let (from, to) = require_pair(cfg)?;
    if format == Format::Svg {
        return plot(cfg, None, false);
    }
    let diff = to - from;
    let comps = enumerate_intersections(diff);
    let records: Vec<ComponentRecord> = comps.iter().map(ComponentRecord::from).collect();
    let output = match format {
        Format::Json => json(&records)?,
        Format::Csv => csv_text(
            &["i1", "i2", "kind", "locus", "degree", "generator"],
            comps
                .iter()
                .map(|c| {
                    vec![
                        c.index.i1.to_string(),
                        c.index.i2.to_string(),
                        c.locus.kind().to_string(),
                        c.locus.to_string(),
                        degree_str(c.morse_index),
                        c.is_generator.to_string(),
                    ]
                })
                .collect(),
        )?,
        _ => {
            let mut s = format!("difference {diff}: {} component(s)\n", comps.len());
            let _ = writeln!(s, "{:<10}{:<34}{:<8}generator", "index", "locus", "degree");
            for c in &comps {
                let _ = writeln!(
                    s,
                    "{:<10}{:<34}{:<8}{}",
                    c.index.to_string(),
                    c.locus.to_string(),
                    degree_str(c.morse_index),
                    if c.is_generator { "yes" } else { "no" }
                );
            }
            s
        }
    };
    Ok(Report::pass(output))
}

fn generators(cfg: &RunConfig) -> Result<Vec<IntersectionComponent>> {
    let mut out: Vec<IntersectionComponent> = Vec::new();
    for (from, to) in pairs_or_collection(cfg)? {
        for g in hom_basis(from, to).generators() {
            // the same difference can occur for several pairs
            if !out.iter().any(|c| c.diff == g.diff && c.index == g.index) {
                out.push(g.clone());
            }
        }
    }
    Ok(out)
}

fn basis(cfg: &RunConfig) -> Result<Report> {
    let format = format_of(cfg, &[Format::Table, Format::Json, Format::Csv])?;
    let mut records = Vec::new();
    let mut notes = Vec::new();
    for g in generators(cfg)? {
        match iota(&g).map(|f| BasisRecord::new(&f)) {
            Ok(Some(r)) => records.push((g.morse_index, r)),
            Ok(None) => notes.push(format!("{};{}: not normalized", g.diff, g.index)),
            Err(e) => notes.push(format!("{};{}: {e}", g.diff, g.index)),
        }
    }
    let exps = |r: &BasisRecord| r.exponents.map(|[e, _]| half(e));
    let output = match format {
        Format::Json => json(&records.iter().map(|(_, r)| r).collect::<Vec<_>>())?,
        Format::Csv => csv_text(
            &[
                "a", "b", "i1", "i2", "degree", "e1", "e2", "e3", "e4", "e5", "norm_sq", "argmax",
            ],
            records
                .iter()
                .map(|(d, r)| {
                    let mut row: Vec<String> = [r.diff.a, r.diff.b, r.index.i1, r.index.i2]
                        .map(|v| v.to_string())
                        .to_vec();
                    row.push(degree_str(*d));
                    row.extend(exps(r));
                    row.push(r.norm.clone());
                    row.push(
                        r.argmax
                            .to_locus()
                            .map(|l| l.to_string())
                            .unwrap_or_default(),
                    );
                    row
                })
                .collect(),
        )?,
        _ => {
            let mut s = String::from("exponents of (4-x1-x2, 2-x2, 4-x2, x1, x2)\n");
            let _ = writeln!(
                s,
                "{:<16}{:<8}{:<30}{:<8}argmax",
                "basis", "degree", "exponents", "M^2"
            );
            for (d, r) in &records {
                let _ = writeln!(
                    s,
                    "{:<16}{:<8}{:<30}{:<8}{}",
                    format!("{};{}", r.diff, r.index),
                    degree_str(*d),
                    format!("({})", exps(r).join(", ")),
                    r.norm,
                    r.argmax
                        .to_locus()
                        .map(|l| l.to_string())
                        .unwrap_or_default()
                );
            }
            s
        }
    };
    Ok(Report {
        output,
        passed: notes.is_empty(),
        notes,
    })
}

fn products(cfg: &RunConfig) -> Result<Report> {
    let format = format_of(cfg, &[Format::Table, Format::Json, Format::Csv])?;
    let rows = collection_products(cfg.c)?;
    let records: Vec<ProductRecord> = rows.iter().map(ProductRecord::from).collect();
    let mut notes = Vec::new();
    let mut max_residual = 0.0f64;
    for r in &records {
        let res = r.residual.unwrap_or(f64::INFINITY);
        max_residual = max_residual.max(res);
        if res > cfg.tol {
            notes.push(format!(
                "residual {res:e} exceeds {:e} for {} then {} -> {}",
                cfg.tol,
                key_str(&r.left),
                key_str(&r.right),
                key_str(&r.target)
            ));
        }
    }
    let fmt_opt = |v: Option<f64>| v.map_or("-".to_string(), |v| v.to_string());
    let output = match format {
        Format::Json => json(&records)?,
        Format::Csv => csv_text(
            &[
                "i", "j", "k", "left", "right", "target", "kappa", "kappa_sq", "area", "residual",
            ],
            rows.iter()
                .zip(&records)
                .map(|(row, r)| {
                    let (i, j, k) = row.positions;
                    vec![
                        i.to_string(),
                        j.to_string(),
                        k.to_string(),
                        key_str(&r.left),
                        key_str(&r.right),
                        key_str(&r.target),
                        r.kappa.to_string(),
                        r.kappa_sq.clone(),
                        fmt_opt(r.area),
                        fmt_opt(r.residual),
                    ]
                })
                .collect(),
        )?,
        _ => {
            let mut s = format!(
                "collection c={}: {} composable pair(s)\n",
                cfg.c,
                records.len()
            );
            let _ = writeln!(
                s,
                "{:<9}{:<16}{:<16}{:<16}{:<12}{:<12}residual",
                "ijk", "first", "second", "target", "kappa", "area"
            );
            for (row, r) in rows.iter().zip(&records) {
                let (i, j, k) = row.positions;
                let _ = writeln!(
                    s,
                    "{:<9}{:<16}{:<16}{:<16}{:<12.6}{:<12}{}",
                    format!("{i}{j}{k}"),
                    key_str(&r.left),
                    key_str(&r.right),
                    key_str(&r.target),
                    r.kappa,
                    r.area.map_or("-".to_string(), |a| format!("{a:.6}")),
                    r.residual.map_or("-".to_string(), |v| format!("{v:.1e}"))
                );
            }
            let _ = writeln!(s, "max residual: {max_residual:.1e} (tol {:e})", cfg.tol);
            s
        }
    };
    Ok(Report {
        output,
        passed: notes.is_empty(),
        notes,
    })
}

fn verify(cfg: &RunConfig) -> Result<Report> {
    let format = format_of(cfg, &[Format::Table, Format::Json, Format::Csv])?;
    let opts = VerifyOptions {
        min_margin: cfg.tol,
        ..VerifyOptions::default()
    };
    let mut records = Vec::new();
    let mut notes = Vec::new();
    for g in generators(cfg)? {
        let f = match iota(&g) {
            Ok(f) => f,
            Err(e) => {
                notes.push(format!("{};{}: {e}", g.diff, g.index));
                continue;
            }
        };
        let report = verify_max_locus(&g, &f, &opts);
        if !report.passed {
            notes.push(format!(
                "{};{} fails: unit on locus {}, argmax matches {}, margin {}",
                g.diff,
                g.index,
                report.unit_on_locus,
                report.argmax_matches,
                report
                    .min_margin
                    .map_or("-".to_string(), |m| format!("{m:.3e}"))
            ));
        }
        records.push(VerifyRecord {
            key: BasisKey::of(&g),
            degree: g.morse_index,
            locus: (&g.locus).into(),
            report,
        });
    }
    let margin = |r: &VerifyRecord| {
        r.report
            .min_margin
            .map_or("-".to_string(), |m| format!("{m:.3e}"))
    };
    let output = match format {
        Format::Json => json(&records)?,
        Format::Csv => csv_text(
            &[
                "basis",
                "degree",
                "locus",
                "unit_on_locus",
                "argmax_matches",
                "min_margin",
                "grid_points",
                "passed",
            ],
            records
                .iter()
                .map(|r| {
                    vec![
                        key_str(&r.key),
                        degree_str(r.degree),
                        r.locus
                            .to_locus()
                            .map(|l| l.to_string())
                            .unwrap_or_default(),
                        r.report.unit_on_locus.to_string(),
                        r.report.argmax_matches.to_string(),
                        r.report.min_margin.map_or(String::new(), |m| m.to_string()),
                        r.report.grid_points.to_string(),
                        r.report.passed.to_string(),
                    ]
                })
                .collect(),
        )?,
        _ => {
            let mut s = format!(
                "required margin 1-|e| >= {:e} at distance >= {}\n",
                opts.min_margin, opts.delta
            );
            let _ = writeln!(
                s,
                "{:<16}{:<8}{:<34}{:<6}{:<8}{:<12}result",
                "basis", "degree", "locus", "unit", "argmax", "margin"
            );
            for r in &records {
                let _ = writeln!(
                    s,
                    "{:<16}{:<8}{:<34}{:<6}{:<8}{:<12}{}",
                    key_str(&r.key),
                    degree_str(r.degree),
                    r.locus
                        .to_locus()
                        .map(|l| l.to_string())
                        .unwrap_or_default(),
                    if r.report.unit_on_locus { "yes" } else { "no" },
                    if r.report.argmax_matches { "yes" } else { "no" },
                    margin(r),
                    if r.report.passed { "pass" } else { "FAIL" }
                );
            }
            s
        }
    };
    Ok(Report {
        output,
        passed: notes.is_empty(),
        notes,
    })
}

fn plot(cfg: &RunConfig, via: Option<LineBundleLabel>, stable_manifolds: bool) -> Result<Report> {
    if cfg.format.is_some_and(|f| f != Format::Svg) {
        bail!("plot only writes svg");
    }
    let (from, to) = require_pair(cfg)?;
    let components = enumerate_intersections(to - from);
    let mut trees = Vec::new();
    if let Some(mid) = via {
        let first = hom_basis(from, mid);
        let second = hom_basis(mid, to);
        for v in first.generators() {
            for w in second.generators() {
                trees.extend(
                    gradient_trees(v, w)
                        .into_iter()
                        .filter(|t| !t.is_degenerate()),
                );
            }
        }
    }
    let fig = svg::Figure {
        title: svg::title_for(from, to, via),
        components: &components,
        trees: &trees,
        stable_manifolds,
    };
    Ok(Report::pass(svg::render(&fig)))
}
