//! Report assembly: the per-record Floer data table, growth-scan exports,
//! and their CSV/JSON forms. All rationals are serialized as exact `p/q`
//! strings; JSON documents carry a `schema` field naming the shipped schema
//! version (see the `schemas/` directory).

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bounds::GrowthScan;
use crate::error::{Error, Result};
use crate::fixed_points::{solve_all, FixedPointRecord};
use crate::floer::{action_exact_relative, action_leading, cz_index, HalfInt};
use crate::geometry::ModelParams;
use crate::rational::{fmt_rat, to_f64, Rat};
use crate::word::BalancedWord;

pub const FLOER_SCHEMA: &str = "eggbeater.floer-table.v1";
pub const GROWTH_SCHEMA: &str = "eggbeater.growth-scan.v1";
pub const WORD_SCHEMA: &str = "eggbeater.word-analysis.v1";

/// One row of the Floer data table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloerRow {
    pub word: String,
    pub k: u64,
    pub epsilon: String,
    pub cz_index: String,
    pub action_leading: String,
    /// Exact action difference to the unique top-index record; empty for
    /// records where the exact action is unavailable.
    pub action_relative_to_top: String,
    pub valid: bool,
}

/// The full table for one `(word, k)` pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloerTable {
    pub rows: Vec<FloerRow>,
}

pub const FLOER_CSV_HEADER: &str =
    "word,k,epsilon,cz_index,action_leading,action_relative_to_top,valid";

/// Solves all sign vectors and assembles the table, with relative actions
/// measured against the unique top-index record.
pub fn build_floer_table(
    w: &BalancedWord,
    word_literal: &str,
    params: &ModelParams,
) -> Result<FloerTable> {
    let solved = solve_all(w, params);
    let mut records: Vec<FixedPointRecord> = Vec::new();
    for (eps, rec) in solved {
        records.push(rec.map_err(|e| Error::BadRecords(format!("{}: {e}", eps.label())))?);
    }
    let top_index = HalfInt::from_int(1 + w.r() as i64);
    let top = records
        .iter()
        .find(|rec| rec.flags.valid() && cz_index(rec, w) == top_index)
        .cloned();
    let mut rows = Vec::with_capacity(records.len());
    for rec in &records {
        let rel = match &top {
            Some(top) if rec.flags.valid() => {
                Some(action_exact_relative(rec, top, w, params)?)
            }
            _ => None,
        };
        rows.push(FloerRow {
            word: word_literal.to_string(),
            k: params.k,
            epsilon: rec.eps.label(),
            cz_index: cz_index(rec, w).to_string(),
            action_leading: fmt_rat(&action_leading(rec, w, params)),
            action_relative_to_top: rel.as_ref().map(fmt_rat).unwrap_or_default(),
            valid: rec.flags.valid(),
        });
    }
    Ok(FloerTable { rows })
}

impl FloerTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(FLOER_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.word, r.k, r.epsilon, r.cz_index, r.action_leading,
                r.action_relative_to_top, r.valid
            ));
        }
        out
    }

    pub fn from_csv(s: &str) -> Result<FloerTable> {
        let mut lines = s.lines();
        let header = lines.next().unwrap_or_default();
        if header != FLOER_CSV_HEADER {
            return Err(Error::Parse { pos: 0, msg: "unexpected csv header".into() });
        }
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(Error::Parse { pos: i + 1, msg: "expected 7 csv fields".into() });
            }
            rows.push(FloerRow {
                word: f[0].to_string(),
                k: f[1].parse().map_err(|_| Error::Parse { pos: i + 1, msg: "bad k".into() })?,
                epsilon: f[2].to_string(),
                cz_index: f[3].to_string(),
                action_leading: f[4].to_string(),
                action_relative_to_top: f[5].to_string(),
                valid: f[6].parse().map_err(|_| Error::Parse { pos: i + 1, msg: "bad bool".into() })?,
            });
        }
        Ok(FloerTable { rows })
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "schema": FLOER_SCHEMA,
            "rows": self.rows,
        })
    }

    /// Fixed-width text table.
    pub fn to_table(&self) -> String {
        let header = ["word", "k", "epsilon", "cz", "action_leading", "rel_to_top", "valid"];
        let mut cells: Vec<[String; 7]> = vec![header.map(str::to_string)];
        for r in &self.rows {
            cells.push([
                r.word.clone(),
                r.k.to_string(),
                r.epsilon.clone(),
                r.cz_index.clone(),
                r.action_leading.clone(),
                r.action_relative_to_top.clone(),
                r.valid.to_string(),
            ]);
        }
        render_table(&cells)
    }
}

/// Growth-scan exports.
pub fn growth_to_json(scan: &GrowthScan) -> serde_json::Value {
    json!({
        "schema": GROWTH_SCHEMA,
        "word": scan.word.to_string(),
        "kind": match scan.kind {
            crate::bounds::BoundKind::Long => "long",
            crate::bounds::BoundKind::Power => "power",
        },
        "k_min": scan.k_min,
        "fitted_slope": fmt_rat(&scan.fitted_slope),
        "fitted_slope_float": format_sig(&scan.fitted_slope),
        "theoretical_slope": fmt_rat(&scan.theoretical_slope),
        "rows": scan
            .k_grid
            .iter()
            .zip(&scan.bound_values)
            .map(|(k, v)| json!({"k": k, "bound": fmt_rat(v)}))
            .collect::<Vec<_>>(),
    })
}

pub const GROWTH_CSV_HEADER: &str = "word,kind,k,bound";

pub fn growth_to_csv(scan: &GrowthScan) -> String {
    let kind = match scan.kind {
        crate::bounds::BoundKind::Long => "long",
        crate::bounds::BoundKind::Power => "power",
    };
    let mut out = String::from(GROWTH_CSV_HEADER);
    out.push('\n');
    for (k, v) in scan.k_grid.iter().zip(&scan.bound_values) {
        out.push_str(&format!("{},{},{},{}\n", scan.word, kind, k, fmt_rat(v)));
    }
    out
}

pub fn growth_to_table(scan: &GrowthScan) -> String {
    let mut cells: Vec<[String; 2]> = vec![["k".into(), "bound".into()]];
    for (k, v) in scan.k_grid.iter().zip(&scan.bound_values) {
        cells.push([k.to_string(), fmt_rat(v)]);
    }
    let mut out = render_table(&cells);
    out.push_str(&format!(
        "k_min = {}\nfitted slope = {} ({})\ntheoretical slope = {}\n",
        scan.k_min,
        fmt_rat(&scan.fitted_slope),
        format_sig(&scan.fitted_slope),
        fmt_rat(&scan.theoretical_slope)
    ));
    out
}

/// Floating rendering with 12 significant digits (the only non-exact output).
pub fn format_sig(r: &Rat) -> String {
    format!("{:.12e}", to_f64(r))
}

/// The word-analysis document: reduction data, norms and, for long words,
/// the balanced form and traced homotopy class at power `k`.
pub fn word_analysis_json(word: &crate::word::FreeWord, k: u64) -> Result<serde_json::Value> {
    if word.is_identity() {
        return Err(Error::TrivialWord);
    }
    let (lower, upper) = crate::word::triple_norm_bounds(word);
    let mut v = json!({
        "schema": WORD_SCHEMA,
        "word": word.to_string(),
        "is_long": word.is_long(),
        "eta": word.eta(),
        "norm_lower": lower,
        "norm_upper": upper,
    });
    if let Ok(b) = crate::word::to_balanced(word) {
        v["balanced"] = json!(b.to_free_word().to_string());
        v["r"] = json!(b.r());
        v["tau"] = json!(b.tau());
        v["traced_class"] = json!(crate::geometry::compatible_class(&b, k).to_string());
    }
    Ok(v)
}

fn render_table<const N: usize>(cells: &[[String; N]]) -> String {
    let mut widths = [0usize; N];
    for row in cells {
        for (i, c) in row.iter().enumerate() {
            widths[i] = widths[i].max(c.len());
        }
    }
    let mut out = String::new();
    for row in cells {
        let mut line = String::new();
        for (i, c) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{:<w$}", c, w = widths[i]));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::to_balanced;

    #[test]
    fn floer_table_hv() {
        let w = to_balanced(&"H V".parse().unwrap()).unwrap();
        let p = ModelParams::default_with_k(50).unwrap();
        let table = build_floer_table(&w, "H V", &p).unwrap();
        assert_eq!(table.rows.len(), 4);
        let mut indices: Vec<String> = table.rows.iter().map(|r| r.cz_index.clone()).collect();
        indices.sort();
        assert_eq!(indices, vec!["0", "1", "1", "2"]);
        assert!(table.rows.iter().all(|r| r.valid));
    }

    #[test]
    fn csv_round_trip() {
        let w = to_balanced(&"H^2 V".parse().unwrap()).unwrap();
        let p = ModelParams::default_with_k(3).unwrap();
        let table = build_floer_table(&w, "H^2 V", &p).unwrap();
        let csv = table.to_csv();
        assert_eq!(FloerTable::from_csv(&csv).unwrap(), table);
    }

    #[test]
    fn json_has_schema() {
        let w = to_balanced(&"H V".parse().unwrap()).unwrap();
        let p = ModelParams::default_with_k(2).unwrap();
        let table = build_floer_table(&w, "H V", &p).unwrap();
        let v = table.to_json();
        assert_eq!(v["schema"], FLOER_SCHEMA);
        assert!(v["rows"].as_array().unwrap().len() == 4);
    }
}
