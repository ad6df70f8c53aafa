//! Nullity tables over the prime field and comparison with reference data.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fieldcore::FieldCtx;
use crate::nullity::{nullity_profile, QuadFunc};

pub const CSV_HEADER: &str = "coeffs;s;pairs";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub coeffs: Vec<u64>,
    pub s: u64,
    pub pairs: Vec<(u64, u64)>,
}

impl TableRow {
    pub fn to_csv(&self) -> String {
        let coeffs: Vec<String> = self.coeffs.iter().map(u64::to_string).collect();
        let pairs: Vec<String> = self.pairs.iter().map(|(m, l)| format!("({m},{l})")).collect();
        format!("{};{};{}", coeffs.join(" "), self.s, pairs.join(" "))
    }

    pub fn parse_csv(line: &str) -> Result<TableRow> {
        let bad = |why: &str| Error::MalformedReference(format!("{why}: {line:?}"));
        let fields: Vec<&str> = line.split(';').collect();
        let [coeffs, s, pairs] = fields[..] else {
            return Err(bad("expected three ';'-separated fields"));
        };
        let coeffs = coeffs
            .split_whitespace()
            .map(|c| c.parse::<u64>().map_err(|_| bad("bad coefficient")))
            .collect::<Result<Vec<_>>>()?;
        let s = s.trim().parse::<u64>().map_err(|_| bad("bad s"))?;
        let pairs = pairs
            .split_whitespace()
            .map(|tok| {
                let inner = tok
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| bad("bad pair"))?;
                let (m, l) = inner.split_once(',').ok_or_else(|| bad("bad pair"))?;
                Ok((
                    m.parse().map_err(|_| bad("bad pair"))?,
                    l.parse().map_err(|_| bad("bad pair"))?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(bad("no coefficients"));
        }
        Ok(TableRow { coeffs, s, pairs })
    }
}

/// Monic coefficient vectors (a_0, …, a_k), a_k = 1, for k = 0..=alpha_max,
/// with a_0 varying fastest inside each k.
pub fn enumerate_coeffs(p: u64, alpha_max: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for k in 0..=alpha_max as usize {
        let mut low = vec![0u64; k];
        loop {
            let mut row = low.clone();
            row.push(1);
            out.push(row);
            let Some(i) = low.iter().position(|&c| c + 1 < p) else { break };
            low[i] += 1;
            low[..i].iter_mut().for_each(|c| *c = 0);
        }
    }
    out
}

pub fn enumerate_functions(p: u64, alpha_max: u64) -> Result<Vec<QuadFunc>> {
    let k = FieldCtx::prime(p)?;
    enumerate_coeffs(p, alpha_max)
        .iter()
        .map(|c| QuadFunc::from_prime_coeffs(&k, c))
        .collect()
}

pub fn table_row(ctx: &FieldCtx, coeffs: &[u64]) -> Result<TableRow> {
    let f = QuadFunc::from_prime_coeffs(ctx, coeffs)?;
    let prof = nullity_profile(&f)?;
    Ok(TableRow {
        coeffs: coeffs.to_vec(),
        s: prof.s,
        pairs: prof.entries,
    })
}

/// Rows for every monic f with α ≤ alpha_max, computed on `jobs` threads.
/// Output order is the enumeration order.
pub fn generate_table(p: u64, alpha_max: u64, jobs: usize) -> Result<Vec<TableRow>> {
    let ctx = FieldCtx::prime(p)?;
    let all = enumerate_coeffs(p, alpha_max);
    let results: Mutex<Vec<Option<Result<TableRow>>>> = Mutex::new(vec![None; all.len()]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..jobs.max(1) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= all.len() {
                    break;
                }
                let row = table_row(&ctx, &all[i]);
                results.lock().unwrap()[i] = Some(row);
            });
        }
    });
    results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every row is computed"))
        .collect()
}

pub fn render_csv(rows: &[TableRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

pub fn parse_reference(text: &str) -> Result<Vec<TableRow>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => {
            return Err(Error::MalformedReference(format!(
                "expected header {CSV_HEADER:?}, found {other:?}"
            )))
        }
    }
    lines.map(TableRow::parse_csv).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffReport {
    pub rows: usize,
    pub diffs: Vec<String>,
}

impl DiffReport {
    pub fn is_clean(&self) -> bool {
        self.diffs.is_empty()
    }
}

/// Cell-level differences between generated rows and a reference table.
pub fn diff_rows(generated: &[TableRow], reference: &[TableRow]) -> DiffReport {
    let mut diffs = Vec::new();
    if generated.len() != reference.len() {
        diffs.push(format!(
            "row count: generated {}, reference {}",
            generated.len(),
            reference.len()
        ));
    }
    for (i, (g, r)) in generated.iter().zip(reference).enumerate() {
        let row = i + 1;
        if g.coeffs != r.coeffs {
            diffs.push(format!("row {row}: coeffs {:?} vs {:?}", g.coeffs, r.coeffs));
            continue;
        }
        if g.s != r.s {
            diffs.push(format!("row {row} {:?}: s {} vs {}", g.coeffs, g.s, r.s));
        }
        if g.pairs.len() != r.pairs.len() {
            diffs.push(format!(
                "row {row} {:?}: {} pairs vs {}",
                g.coeffs,
                g.pairs.len(),
                r.pairs.len()
            ));
            continue;
        }
        for (a, b) in g.pairs.iter().zip(&r.pairs) {
            if a != b {
                diffs.push(format!("row {row} {:?}: pair {a:?} vs {b:?}", g.coeffs));
            }
        }
    }
    DiffReport {
        rows: generated.len(),
        diffs,
    }
}

pub fn diff_reference(generated: &[TableRow], reference_text: &str) -> Result<DiffReport> {
    Ok(diff_rows(generated, &parse_reference(reference_text)?))
}
