//! CSV ingestion and emission.
//!
//! Five file kinds flow through here: the objective schema
//! (`name,direction,weight,utopia,reference`), solutions
//! (`id,<obj...>`), per-sample populations
//! (`solution_id,sample_id,<obj...>`), interaction logs
//! (`user_id,item_id`) and utopia tables (`sample_id,<obj...>`, where a
//! single row with sample id `*` means one global vector). All files
//! are UTF-8, comma-separated with `.` decimals; output uses LF line
//! endings and is byte-deterministic. Objective columns must match the
//! schema names and order exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::calibration::{InteractionLog, UtopiaTable};
use crate::dominance::Frontier;
use crate::error::{input_err, Error, Result};
use crate::strategies::SelectionResult;
use crate::types::{
    CandidateSet, ObjectiveSpec, PopulationSet, SamplePopulation, SolutionPoint,
    UtopiaAssignment,
};

// ---------------------------------------------------------------------------
// loading

pub fn load_schema(path: &Path) -> Result<Vec<ObjectiveSpec>> {
    let rows = read_rows(path, &["name", "direction", "weight", "utopia", "reference"])?;
    if rows.is_empty() {
        return Err(input_err!("{}: no objectives defined", path.display()));
    }
    let mut specs = Vec::new();
    let mut seen = BTreeSet::new();
    for (line, cells) in &rows {
        let name = cells[0].clone();
        if name.is_empty() {
            return Err(input_err!(
                "{} row {line}, column name: empty objective name",
                path.display()
            ));
        }
        if !seen.insert(name.clone()) {
            return Err(input_err!(
                "{} row {line}, column name: duplicate objective {name:?}",
                path.display()
            ));
        }
        let direction = crate::types::Direction::parse(&cells[1]).map_err(|e| {
            input_err!("{} row {line}, column direction: {e}", path.display())
        })?;
        let mut spec = ObjectiveSpec::new(name, direction);
        spec.weight = parse_optional(path, *line, "weight", &cells[2])?;
        spec.utopia_component = parse_optional(path, *line, "utopia", &cells[3])?;
        spec.reference_component = parse_optional(path, *line, "reference", &cells[4])?;
        specs.push(spec);
    }
    Ok(specs)
}

pub fn load_solutions(path: &Path, specs: &[ObjectiveSpec]) -> Result<CandidateSet> {
    let mut expected = vec!["id".to_string()];
    expected.extend(specs.iter().map(|s| s.name.clone()));
    let rows = read_rows_expected(path, &expected)?;
    if rows.is_empty() {
        return Err(input_err!("{}: no solution rows", path.display()));
    }
    let mut seen = BTreeSet::new();
    let mut solutions = Vec::new();
    for (line, cells) in &rows {
        let id = cells[0].clone();
        if id.is_empty() {
            return Err(input_err!(
                "{} row {line}, column id: empty solution id",
                path.display()
            ));
        }
        if !seen.insert(id.clone()) {
            return Err(input_err!(
                "{} row {line}, column id: duplicate solution id {id:?}",
                path.display()
            ));
        }
        let values = parse_objective_cells(path, *line, specs, &cells[1..])?;
        solutions.push(SolutionPoint::new(id, values));
    }
    CandidateSet::new(specs.to_vec(), solutions)
}

pub fn load_samples(path: &Path, specs: &[ObjectiveSpec]) -> Result<PopulationSet> {
    let mut expected = vec!["solution_id".to_string(), "sample_id".to_string()];
    expected.extend(specs.iter().map(|s| s.name.clone()));
    let rows = read_rows_expected(path, &expected)?;
    if rows.is_empty() {
        return Err(input_err!("{}: no sample rows", path.display()));
    }
    // group rows by solution, preserving per-solution duplicates for
    // precise error locations
    let mut grouped: BTreeMap<String, Vec<(String, Vec<f64>)>> = BTreeMap::new();
    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
    for (line, cells) in &rows {
        let solution_id = cells[0].clone();
        let sample_id = cells[1].clone();
        if solution_id.is_empty() || sample_id.is_empty() {
            return Err(input_err!(
                "{} row {line}: empty solution_id or sample_id",
                path.display()
            ));
        }
        if !seen.insert((solution_id.clone(), sample_id.clone())) {
            return Err(input_err!(
                "{} row {line}: duplicate sample {sample_id:?} for solution {solution_id:?}",
                path.display()
            ));
        }
        let values = parse_objective_cells(path, *line, specs, &cells[2..])?;
        grouped.entry(solution_id).or_default().push((sample_id, values));
    }
    // every solution must cover the identical sample-id set
    let reference: Option<(&String, BTreeSet<&String>)> = grouped
        .iter()
        .next()
        .map(|(sid, rows)| (sid, rows.iter().map(|(s, _)| s).collect()));
    if let Some((ref_solution, ref_ids)) = reference {
        for (solution, rows) in &grouped {
            let ids: BTreeSet<&String> = rows.iter().map(|(s, _)| s).collect();
            if let Some(missing) = ref_ids.difference(&ids).next() {
                return Err(input_err!(
                    "{}: solution {solution:?} is missing sample {missing:?} present for solution {ref_solution:?}",
                    path.display()
                ));
            }
            if let Some(extra) = ids.difference(&ref_ids).next() {
                return Err(input_err!(
                    "{}: solution {ref_solution:?} is missing sample {extra:?} present for solution {solution:?}",
                    path.display()
                ));
            }
        }
    }
    let pops = grouped
        .into_iter()
        .map(|(solution_id, samples)| SamplePopulation::new(solution_id, samples, specs.len()))
        .collect::<Result<Vec<_>>>()?;
    PopulationSet::new(pops)
}

pub fn load_interactions(path: &Path) -> Result<InteractionLog> {
    let rows = read_rows(path, &["user_id", "item_id"])?;
    if rows.is_empty() {
        return Err(input_err!("{}: no interaction rows", path.display()));
    }
    let mut records = Vec::with_capacity(rows.len());
    for (line, cells) in rows {
        if cells[0].is_empty() || cells[1].is_empty() {
            return Err(input_err!(
                "{} row {line}: empty user_id or item_id",
                path.display()
            ));
        }
        records.push((cells[0].clone(), cells[1].clone()));
    }
    InteractionLog::new(records)
}

pub fn load_utopia(path: &Path, specs: &[ObjectiveSpec]) -> Result<UtopiaAssignment> {
    let mut expected = vec!["sample_id".to_string()];
    expected.extend(specs.iter().map(|s| s.name.clone()));
    let rows = read_rows_expected(path, &expected)?;
    if rows.is_empty() {
        return Err(input_err!("{}: no utopia rows", path.display()));
    }
    let has_star = rows.iter().any(|(_, c)| c[0] == "*");
    if has_star && rows.len() > 1 {
        return Err(input_err!(
            "{}: the global `*` row must be the only row",
            path.display()
        ));
    }
    if has_star {
        let (line, cells) = &rows[0];
        let v = parse_objective_cells(path, *line, specs, &cells[1..])?;
        return Ok(UtopiaAssignment::Global(v));
    }
    let mut map = BTreeMap::new();
    for (line, cells) in &rows {
        let sample_id = cells[0].clone();
        if sample_id.is_empty() {
            return Err(input_err!(
                "{} row {line}, column sample_id: empty sample id",
                path.display()
            ));
        }
        let v = parse_objective_cells(path, *line, specs, &cells[1..])?;
        if map.insert(sample_id.clone(), v).is_some() {
            return Err(input_err!(
                "{} row {line}: duplicate sample id {sample_id:?}",
                path.display()
            ));
        }
    }
    Ok(UtopiaAssignment::PerSample(map))
}

// ---------------------------------------------------------------------------
// writing

pub fn write_schema(path: &Path, specs: &[ObjectiveSpec]) -> Result<()> {
    let mut w = writer(path)?;
    wrec(path, &mut w, ["name", "direction", "weight", "utopia", "reference"])?;
    for s in specs {
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        wrec(
            path,
            &mut w,
            [
                s.name.clone(),
                s.direction.as_str().to_string(),
                opt(s.weight),
                opt(s.utopia_component),
                opt(s.reference_component),
            ],
        )?;
    }
    finish(path, w)
}

pub fn write_solutions(path: &Path, set: &CandidateSet) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["id".to_string()];
    header.extend(set.specs().iter().map(|s| s.name.clone()));
    wrec(path, &mut w, header)?;
    for sol in set.solutions() {
        let mut row = vec![sol.id.clone()];
        row.extend(sol.values.iter().map(|v| fmt_f64(*v)));
        wrec(path, &mut w, row)?;
    }
    finish(path, w)
}

pub fn write_samples(path: &Path, specs: &[ObjectiveSpec], pops: &PopulationSet) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["solution_id".to_string(), "sample_id".to_string()];
    header.extend(specs.iter().map(|s| s.name.clone()));
    wrec(path, &mut w, header)?;
    let mut solution_ids: Vec<&str> = pops.solution_ids().collect();
    solution_ids.sort();
    for sid in solution_ids {
        let pop = pops.get(sid).expect("listed id");
        for (sample_id, values) in pop.samples() {
            let mut row = vec![sid.to_string(), sample_id.clone()];
            row.extend(values.iter().map(|v| fmt_f64(*v)));
            wrec(path, &mut w, row)?;
        }
    }
    finish(path, w)
}

pub fn write_interactions(path: &Path, log: &InteractionLog) -> Result<()> {
    let mut w = writer(path)?;
    wrec(path, &mut w, ["user_id", "item_id"])?;
    for (u, i) in log.records() {
        wrec(path, &mut w, [u.clone(), i.clone()])?;
    }
    finish(path, w)
}

/// Write a utopia assignment; the global form becomes a single `*` row.
pub fn write_utopia(path: &Path, names: &[String], ua: &UtopiaAssignment) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["sample_id".to_string()];
    header.extend(names.iter().cloned());
    wrec(path, &mut w, header)?;
    let mut row = |sid: &str, v: &[f64]| -> Result<()> {
        let mut cells = vec![sid.to_string()];
        cells.extend(v.iter().map(|x| fmt_f64(*x)));
        wrec(path, &mut w, cells)
    };
    match ua {
        UtopiaAssignment::Global(v) => row("*", v)?,
        UtopiaAssignment::PerSample(m) => {
            for (sid, v) in m {
                row(sid, v)?;
            }
        }
    }
    finish(path, w)
}

/// Write a calibration result as a per-sample utopia file.
pub fn write_utopia_table(path: &Path, names: &[String], table: &UtopiaTable) -> Result<()> {
    write_utopia(path, names, &table.to_assignment())
}

/// Machine output of one strategy run: per-member rows with the chosen
/// and tie markers.
pub fn write_selection(path: &Path, result: &SelectionResult) -> Result<()> {
    let mut w = writer(path)?;
    wrec(path, &mut w, ["strategy", "id", "score", "chosen", "tie"])?;
    for (id, score) in &result.scores {
        wrec(
            path,
            &mut w,
            [
                result.strategy.name().to_string(),
                id.clone(),
                fmt_f64(*score),
                if *id == result.chosen_id { "1" } else { "0" }.to_string(),
                if result.tie_ids.contains(id) { "1" } else { "0" }.to_string(),
            ],
        )?;
    }
    finish(path, w)
}

/// Combined report, one strategy per column: `id`, the objective values,
/// optionally `on_frontier`, one score column per strategy, and
/// `selected_by` naming every strategy that chose the row. Rows ascend
/// by id; floating cells carry 6 significant digits.
pub fn write_report(
    path: &Path,
    set: &CandidateSet,
    row_ids: &[String],
    results: &[SelectionResult],
    frontier: Option<&Frontier>,
) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["id".to_string()];
    header.extend(set.specs().iter().map(|s| s.name.clone()));
    if frontier.is_some() {
        header.push("on_frontier".to_string());
    }
    header.extend(results.iter().map(|r| r.strategy.name().to_string()));
    header.push("selected_by".to_string());
    wrec(path, &mut w, header)?;

    for id in row_ids {
        let sol = set
            .solution(id)
            .ok_or_else(|| input_err!("report row {id:?} not in candidate set"))?;
        let mut row = vec![id.clone()];
        row.extend(sol.values.iter().map(|v| format_sig6(*v)));
        if let Some(f) = frontier {
            row.push(if f.contains(id) { "1" } else { "0" }.to_string());
        }
        for r in results {
            row.push(
                r.scores
                    .get(id)
                    .map(|s| format_sig6(*s))
                    .unwrap_or_default(),
            );
        }
        row.push(selected_by(id, results));
        wrec(path, &mut w, row)?;
    }
    finish(path, w)
}

/// Text rendering of the same report for stdout: aligned columns, the
/// winning score of each strategy wrapped in `*...*`.
pub fn render_report(
    set: &CandidateSet,
    row_ids: &[String],
    results: &[SelectionResult],
) -> Result<String> {
    let mut header = vec!["id".to_string()];
    header.extend(set.specs().iter().map(|s| s.name.clone()));
    header.extend(results.iter().map(|r| r.strategy.name().to_string()));
    header.push("selected_by".to_string());

    let mut table = vec![header];
    for id in row_ids {
        let sol = set
            .solution(id)
            .ok_or_else(|| input_err!("report row {id:?} not in candidate set"))?;
        let mut row = vec![id.clone()];
        row.extend(sol.values.iter().map(|v| format_sig6(*v)));
        for r in results {
            let cell = match r.scores.get(id) {
                Some(s) if *id == r.chosen_id => format!("*{}*", format_sig6(*s)),
                Some(s) => format_sig6(*s),
                None => String::new(),
            };
            row.push(cell);
        }
        row.push(selected_by(id, results));
        table.push(row);
    }

    let cols = table[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| table.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &table {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:>w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    Ok(out)
}

/// Plot-ready CSV: every candidate with its native values, an
/// `on_frontier` flag and the strategies that selected it. Two or three
/// objectives only — higher dimensions have no plot.
pub fn emit_plot_data(
    path: &Path,
    set: &CandidateSet,
    frontier: &Frontier,
    results: &[SelectionResult],
) -> Result<()> {
    if !(2..=3).contains(&set.k()) {
        return Err(input_err!(
            "plot data is unsupported for {} objectives (2 or 3 required)",
            set.k()
        ));
    }
    let mut w = writer(path)?;
    let mut header = vec!["id".to_string()];
    header.extend(set.specs().iter().map(|s| s.name.clone()));
    header.push("on_frontier".to_string());
    header.push("selected_by".to_string());
    wrec(path, &mut w, header)?;
    let mut solutions: Vec<&SolutionPoint> = set.solutions().iter().collect();
    solutions.sort_by(|a, b| a.id.cmp(&b.id));
    for sol in solutions {
        let mut row = vec![sol.id.clone()];
        row.extend(sol.values.iter().map(|v| fmt_f64(*v)));
        row.push(if frontier.contains(&sol.id) { "1" } else { "0" }.to_string());
        row.push(selected_by(&sol.id, results));
        wrec(path, &mut w, row)?;
    }
    finish(path, w)
}

/// Frontier listing: member ids plus their native vectors.
pub fn write_frontier(path: &Path, set: &CandidateSet, frontier: &Frontier) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["id".to_string()];
    header.extend(set.specs().iter().map(|s| s.name.clone()));
    wrec(path, &mut w, header)?;
    for m in frontier.members(set)? {
        let mut row = vec![m.id.clone()];
        row.extend(m.values.iter().map(|v| fmt_f64(*v)));
        wrec(path, &mut w, row)?;
    }
    finish(path, w)
}

fn selected_by(id: &str, results: &[SelectionResult]) -> String {
    results
        .iter()
        .filter(|r| r.chosen_id == id)
        .map(|r| r.strategy.name())
        .collect::<Vec<_>>()
        .join(";")
}

// ---------------------------------------------------------------------------
// number formatting

/// Shortest decimal that round-trips exactly (Rust's `Display`); used in
/// all machine-oriented value files.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Render with 6 significant digits, `%g` style: fixed notation for
/// moderate exponents, scientific otherwise, trailing zeros trimmed.
pub fn format_sig6(v: f64) -> String {
    format_sig(v, 6)
}

pub fn format_sig(v: f64, sig: usize) -> String {
    debug_assert!(sig >= 1);
    if v == 0.0 {
        return "0".to_string();
    }
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    // decimal exponent after rounding to `sig` digits
    let sci = format!("{:.*e}", sig - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific form");
    let x: i32 = exp.parse().expect("numeric exponent");
    if x >= -4 && x < sig as i32 {
        let decimals = (sig as i32 - 1 - x).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), x)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

// ---------------------------------------------------------------------------
// csv plumbing

fn reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => {
                if let csv::ErrorKind::Io(io) = e.into_kind() {
                    Error::Io {
                        path: path.display().to_string(),
                        source: io,
                    }
                } else {
                    unreachable!()
                }
            }
            _ => Error::Csv {
                path: path.display().to_string(),
                source: e,
            },
        })
}

/// Read and validate a fixed-header CSV; returns (1-based line, trimmed
/// cells) per data row.
fn read_rows(path: &Path, expected_header: &[&str]) -> Result<Vec<(u64, Vec<String>)>> {
    let expected: Vec<String> = expected_header.iter().map(|s| s.to_string()).collect();
    read_rows_expected(path, &expected)
}

fn read_rows_expected(path: &Path, expected: &[String]) -> Result<Vec<(u64, Vec<String>)>> {
    let mut rdr = reader(path)?;
    let mut rows = Vec::new();
    let mut header_checked = false;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Csv {
            path: path.display().to_string(),
            source: e,
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let cells: Vec<String> = rec.iter().map(|c| c.trim().to_string()).collect();
        if !header_checked {
            if cells != *expected {
                return Err(input_err!(
                    "{} row {line}: expected header {:?}, got {:?}",
                    path.display(),
                    expected.join(","),
                    cells.join(",")
                ));
            }
            header_checked = true;
            continue;
        }
        if cells.iter().all(|c| c.is_empty()) {
            continue; // tolerate blank lines
        }
        if cells.len() != expected.len() {
            return Err(input_err!(
                "{} row {line}: expected {} cells, got {}",
                path.display(),
                expected.len(),
                cells.len()
            ));
        }
        rows.push((line, cells));
    }
    if !header_checked {
        return Err(input_err!("{}: file is empty (missing header)", path.display()));
    }
    Ok(rows)
}

fn parse_optional(path: &Path, line: u64, col: &str, cell: &str) -> Result<Option<f64>> {
    if cell.is_empty() {
        return Ok(None);
    }
    Ok(Some(parse_f64(path, line, col, cell)?))
}

fn parse_f64(path: &Path, line: u64, col: &str, cell: &str) -> Result<f64> {
    let v: f64 = cell.parse().map_err(|_| {
        input_err!(
            "{} row {line}, column {col}: cannot parse {cell:?} as a number",
            path.display()
        )
    })?;
    if !v.is_finite() {
        return Err(input_err!(
            "{} row {line}, column {col}: non-finite value {cell:?}",
            path.display()
        ));
    }
    Ok(v)
}

fn parse_objective_cells(
    path: &Path,
    line: u64,
    specs: &[ObjectiveSpec],
    cells: &[String],
) -> Result<Vec<f64>> {
    debug_assert_eq!(cells.len(), specs.len());
    specs
        .iter()
        .zip(cells)
        .map(|(spec, cell)| parse_f64(path, line, &spec.name, cell))
        .collect()
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| Error::Csv {
            path: path.display().to_string(),
            source: e,
        })
}

fn wrec<I, T>(path: &Path, w: &mut csv::Writer<std::fs::File>, row: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: AsRef<[u8]>,
{
    w.write_record(row).map_err(|e| Error::Csv {
        path: path.display().to_string(),
        source: e,
    })
}

fn finish(path: &Path, mut w: csv::Writer<std::fs::File>) -> Result<()> {
    w.flush().map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}
