//! The seven rack examples, run under a shared time budget.

use std::time::{Duration, Instant};

use nichols_core::nichols::{contains_relation, graded_dims_with, GradedReport, Status, CSV_HEADER};
use nichols_core::scalars::Field;
use nichols_core::tensorops::Word;

use crate::spec::SpecFile;
use crate::{config, Fail, Opts};

pub const ROWS: [&str; 7] = [
    include_str!("../../../specs/fk3.json"),
    include_str!("../../../specs/affine_z5.json"),
    include_str!("../../../specs/affine_z7.json"),
    include_str!("../../../specs/affine_z2xz2.json"),
    include_str!("../../../specs/transpositions_s4.json"),
    include_str!("../../../specs/cube_faces.json"),
    include_str!("../../../specs/transpositions_s5.json"),
];

/// Known higher relations, as sums of words with coefficient 1.
fn known_relation(row: usize) -> Option<Vec<Vec<u32>>> {
    match row {
        2 => Some(vec![vec![0, 1, 0, 1], vec![1, 0, 1, 0]]),
        3 => Some(vec![vec![0, 1, 2, 0, 1, 2], vec![2, 0, 1, 2, 0, 1], vec![1, 2, 0, 1, 2, 0]]),
        _ => None,
    }
}

pub fn parse_rows(text: &str) -> Result<Vec<usize>, String> {
    if text.trim() == "all" {
        return Ok((1..=ROWS.len()).collect());
    }
    text.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(k) if (1..=ROWS.len()).contains(&k) => Ok(k),
            _ => Err(format!("rows must be \"all\" or numbers 1..={}, got {t:?}", ROWS.len())),
        })
        .collect()
}

fn run_row(row: usize, share: Duration, opts: &Opts) -> Result<GradedReport, Fail> {
    let built = SpecFile::parse(ROWS[row - 1]).and_then(|s| s.build()).map_err(|e| Fail(1, e))?;
    let b = built.space.as_ref().map_err(|e| Fail(1, e.clone()))?;
    let cfg = config(opts, Some(&built));
    let start = Instant::now();
    let name = built.name.clone();
    let mut report = graded_dims_with(b, &built.name, &cfg, &mut |s| {
        eprintln!("[{name}] degree {}: dim {} ({:.1}s)", s.degree, s.dim, start.elapsed().as_secs_f64());
        start.elapsed() < share
    })?;
    if let Some(words) = known_relation(row) {
        let m = words[0].len();
        if report.new_relations_at(m).is_some() {
            let k = b.field();
            let element: Vec<(Word, _)> = words.iter().map(|w| (Word(w.clone()), k.one())).collect();
            let text = words.iter().map(|w| Word(w.clone()).to_string()).collect::<Vec<_>>().join(" + ");
            let inside = contains_relation(b, &element, &cfg)?;
            report.notes.push(format!("{text} {} ker Ω^({m})", if inside { "lies in" } else { "is NOT in" }));
        }
    }
    Ok(report)
}

pub fn run(rows: &str, budget_minutes: f64, opts: &Opts) -> Result<(), Fail> {
    let rows = parse_rows(rows).map_err(|e| Fail(1, e))?;
    if !budget_minutes.is_finite() || budget_minutes <= 0.0 {
        return Err(Fail(1, "budget must be positive".into()));
    }
    let share = Duration::from_secs_f64(budget_minutes * 60.0 / rows.len() as f64);
    let mut reports = Vec::new();
    for &row in &rows {
        reports.push(run_row(row, share, opts)?);
    }
    if opts.json {
        println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialise"));
    } else {
        println!("{CSV_HEADER}");
        for r in &reports {
            println!("{}", r.csv_row());
        }
    }
    if opts.strict && reports.iter().any(|r| matches!(r.status, Status::ResourceCapped { .. })) {
        return Err(Fail(3, "a row reached the memory budget".into()));
    }
    Ok(())
}
