//! Stable text, JSON, and CSV renderings of the analysis outputs, plus the
//! matrix JSON input format.
//!
//! Integers are emitted as JSON numbers while they fit in 64 bits and as
//! decimal strings beyond that; both forms are accepted on input. JSON
//! object keys are ordered alphabetically by serde_json's default map, so
//! output bytes are stable. Schema documents for every JSON format ship
//! under `schemas/`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use metabelian::classify::StructureReport;
use metabelian::intlinalg::{
    determinantal_divisors_with_bound, verify_decomposition, ElementaryOp, IntMatrix,
    SmithDecomposition,
};
use metabelian::tietze::NormalizedPresentation;
use metabelian::words::GroupWord;

use crate::experiment::ExperimentResult;

pub fn bigint_to_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(small) => json!(small),
        None => json!(v.to_string()),
    }
}

pub fn bigint_from_json(v: &Value) -> Result<BigInt, String> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(format!("non-integer number {}", n))
            }
        }
        Value::String(s) => s
            .parse::<BigInt>()
            .map_err(|_| format!("not a decimal integer: `{}`", s)),
        other => Err(format!("expected integer or decimal string, got {}", other)),
    }
}

/// `{"rows": r, "cols": c, "entries": [[...], ...]}`
pub fn matrix_to_json(m: &IntMatrix) -> Value {
    let entries: Vec<Value> = (0..m.rows())
        .map(|r| Value::Array((0..m.cols()).map(|c| bigint_to_json(m.at(r, c))).collect()))
        .collect();
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": entries,
    })
}

pub fn matrix_from_json(v: &Value) -> Result<IntMatrix, String> {
    let obj = v.as_object().ok_or("matrix JSON must be an object")?;
    let rows = obj
        .get("rows")
        .and_then(Value::as_u64)
        .ok_or("missing or invalid `rows`")? as usize;
    let cols = obj
        .get("cols")
        .and_then(Value::as_u64)
        .ok_or("missing or invalid `cols`")? as usize;
    let entries = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or("missing or invalid `entries`")?;
    if entries.len() != rows {
        return Err(format!("expected {} rows, found {}", rows, entries.len()));
    }
    let mut matrix = IntMatrix::zero(rows, cols);
    for (r, row) in entries.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| format!("row {} is not an array", r))?;
        if row.len() != cols {
            return Err(format!("row {} has {} entries, expected {}", r, row.len(), cols));
        }
        for (c, cell) in row.iter().enumerate() {
            matrix.set(r, c, bigint_from_json(cell).map_err(|e| format!("entry ({}, {}): {}", r, c, e))?);
        }
    }
    Ok(matrix)
}

/// Elementary op as `{"kind", "i", "j"?, "multiplier"?}`. For the add kinds,
/// `i` is the destination: `row_i += multiplier * row_j`.
pub fn op_to_json(op: &ElementaryOp) -> Value {
    match op {
        ElementaryOp::SwapRows { i, j } => json!({"kind": "swap_rows", "i": i, "j": j}),
        ElementaryOp::SwapCols { i, j } => json!({"kind": "swap_cols", "i": i, "j": j}),
        ElementaryOp::NegateRow { i } => json!({"kind": "negate_row", "i": i}),
        ElementaryOp::NegateCol { i } => json!({"kind": "negate_col", "i": i}),
        ElementaryOp::AddRowMultiple { dst, src, multiplier } => {
            json!({"kind": "add_row_multiple", "i": dst, "j": src, "multiplier": bigint_to_json(multiplier)})
        }
        ElementaryOp::AddColMultiple { dst, src, multiplier } => {
            json!({"kind": "add_col_multiple", "i": dst, "j": src, "multiplier": bigint_to_json(multiplier)})
        }
    }
}

/// Output of the `snf` subcommand. The minor-gcd divisors are included only
/// when the matrix is within the enumeration bound.
pub fn snf_to_json(m: &IntMatrix, s: &SmithDecomposition, minor_bound: usize) -> Value {
    let divisors = determinantal_divisors_with_bound(m, minor_bound)
        .map(|ds| Value::Array(ds.iter().map(bigint_to_json).collect()))
        .unwrap_or(Value::Null);
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "rank": s.invariant_factors.len(),
        "invariant_factors": s.invariant_factors.iter().map(bigint_to_json).collect::<Vec<_>>(),
        "d": matrix_to_json(&s.d),
        "u": matrix_to_json(&s.u),
        "v": matrix_to_json(&s.v),
        "op_log": s.op_log.iter().map(op_to_json).collect::<Vec<_>>(),
        "op_count": s.op_log.len(),
        "verified": verify_decomposition(m, s),
        "determinantal_divisors": divisors,
    })
}

pub fn snf_to_text(m: &IntMatrix, s: &SmithDecomposition, minor_bound: usize) -> String {
    let mut out = String::new();
    out.push_str(&format!("matrix: {} x {}\n", m.rows(), m.cols()));
    out.push_str(&format!("rank: {}\n", s.invariant_factors.len()));
    out.push_str(&format!(
        "invariant factors: {}\n",
        join_bigints(&s.invariant_factors)
    ));
    out.push_str(&format!("d:\n{}", s.d));
    out.push_str(&format!("operations: {}\n", s.op_log.len()));
    out.push_str(&format!("verified: {}\n", verify_decomposition(m, s)));
    match determinantal_divisors_with_bound(m, minor_bound) {
        Ok(ds) => out.push_str(&format!("determinantal divisors: {}\n", join_bigints(&ds))),
        Err(_) => out.push_str("determinantal divisors: skipped (dimension above minor bound)\n"),
    }
    out
}

fn join_bigints(vs: &[BigInt]) -> String {
    if vs.is_empty() {
        return "(none)".to_string();
    }
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn words_to_json(words: &[GroupWord], names: &[String]) -> Value {
    Value::Array(words.iter().map(|w| json!(w.render(names))).collect())
}

pub fn report_to_json(r: &StructureReport) -> Value {
    let names = &r.generator_names;
    let mut obj = Map::new();
    obj.insert("generator_names".into(), json!(names));
    obj.insert("generators".into(), json!(r.generators));
    obj.insert("relators".into(), json!(r.relators));
    obj.insert("matrix_rank".into(), json!(r.matrix_rank));
    obj.insert("full_rank".into(), json!(r.full_rank));
    obj.insert("deficiency".into(), json!(r.deficiency));
    obj.insert("deficiency_defined".into(), json!(r.deficiency_defined));
    obj.insert("h_rank".into(), json!(r.h_rank));
    obj.insert(
        "h_basis".into(),
        r.h_basis
            .as_deref()
            .map_or(Value::Null, |ws| words_to_json(ws, names)),
    );
    obj.insert(
        "k_generators".into(),
        r.k_generators
            .as_deref()
            .map_or(Value::Null, |ws| words_to_json(ws, names)),
    );
    obj.insert("diophantine".into(), json!(r.diophantine.as_str()));
    obj.insert(
        "direct_decomposition".into(),
        r.direct_decomposition.map_or(Value::Null, |v| json!(v)),
    );
    obj.insert(
        "abelianization".into(),
        json!({
            "free_rank": r.abelianization.free_rank,
            "torsion": r.abelianization.torsion.iter().map(bigint_to_json).collect::<Vec<_>>(),
        }),
    );
    obj.insert(
        "invariant_factors".into(),
        Value::Array(r.invariant_factors.iter().map(bigint_to_json).collect()),
    );
    obj.insert("op_count".into(), json!(r.op_count));
    obj.insert(
        "relator_lengths".into(),
        json!({
            "original_max": r.relator_lengths.original_max,
            "original_total": r.relator_lengths.original_total,
            "normalized_max": r.relator_lengths.normalized_max,
            "normalized_total": r.relator_lengths.normalized_total,
        }),
    );
    obj.insert("warnings".into(), json!(r.warnings));
    obj.insert("notes".into(), json!(r.notes));
    Value::Object(obj)
}

pub fn report_to_text(r: &StructureReport) -> String {
    let names = &r.generator_names;
    let mut out = String::new();
    out.push_str(&format!(
        "generators: {} ({})\n",
        r.generators,
        names.join(", ")
    ));
    out.push_str(&format!("relators: {}\n", r.relators));
    out.push_str(&format!(
        "relation matrix rank: {} -> {}\n",
        r.matrix_rank,
        if r.full_rank { "full rank" } else { "not full rank" }
    ));
    if r.deficiency_defined {
        out.push_str(&format!("deficiency: {}\n", r.deficiency));
    } else {
        out.push_str(&format!(
            "deficiency: undefined (|R| > |A|), raw n - m = {}\n",
            r.deficiency
        ));
    }
    out.push_str(&format!("h_rank: {}\n", r.h_rank));
    if let Some(basis) = &r.h_basis {
        out.push_str(&format!("H basis: {}\n", render_word_list(basis, names)));
    }
    if let Some(kgens) = &r.k_generators {
        out.push_str(&format!(
            "K generators: {}\n",
            render_word_list(kgens, names)
        ));
    }
    out.push_str(&format!("diophantine: {}\n", r.diophantine.as_str()));
    if let Some(dd) = r.direct_decomposition {
        out.push_str(&format!("direct decomposition: {}\n", dd));
    }
    out.push_str(&format!(
        "abelianization: {}\n",
        render_abelianization(r.abelianization.free_rank, &r.abelianization.torsion)
    ));
    out.push_str(&format!(
        "invariant factors: {}\n",
        join_bigints(&r.invariant_factors)
    ));
    out.push_str(&format!("normalization operations: {}\n", r.op_count));
    for w in &r.warnings {
        out.push_str(&format!("warning: {}\n", w));
    }
    for n in &r.notes {
        out.push_str(&format!("note: {}\n", n));
    }
    out
}

fn render_word_list(words: &[GroupWord], names: &[String]) -> String {
    if words.is_empty() {
        return "(none)".to_string();
    }
    words
        .iter()
        .map(|w| {
            let s = w.render(names);
            if s.is_empty() {
                "1".to_string()
            } else {
                s
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn render_abelianization(free_rank: usize, torsion: &[BigInt]) -> String {
    let mut parts = Vec::new();
    match free_rank {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{}", r)),
    }
    for d in torsion {
        parts.push(format!("Z/{}", d));
    }
    if parts.is_empty() {
        "trivial".to_string()
    } else {
        parts.join(" x ")
    }
}

pub fn normalized_to_json(norm: &NormalizedPresentation, original_names: &[String]) -> Value {
    let new_names = norm.presentation.generator_names();
    json!({
        "presentation": norm.presentation.render_file(),
        "presentation_inline": norm.presentation.render_inline(),
        "forward": words_to_json(&norm.iso.forward, new_names),
        "backward": words_to_json(&norm.iso.backward, original_names),
        "invariant_factors": norm.snf.invariant_factors.iter().map(bigint_to_json).collect::<Vec<_>>(),
        "op_log": norm.snf.op_log.iter().map(op_to_json).collect::<Vec<_>>(),
        "op_count": norm.snf.op_log.len(),
    })
}

pub fn normalized_to_text(norm: &NormalizedPresentation, original_names: &[String]) -> String {
    let new_names = norm.presentation.generator_names();
    let mut out = String::new();
    out.push_str(&format!(
        "normalized presentation: {}\n",
        norm.presentation.render_inline()
    ));
    out.push_str(&format!(
        "invariant factors: {}\n",
        join_bigints(&norm.snf.invariant_factors)
    ));
    out.push_str(&format!("operations: {}\n", norm.snf.op_log.len()));
    for (i, w) in norm.iso.forward.iter().enumerate() {
        out.push_str(&format!(
            "forward: {} -> {}\n",
            original_names[i],
            nonempty(w.render(new_names))
        ));
    }
    for (i, w) in norm.iso.backward.iter().enumerate() {
        out.push_str(&format!(
            "backward: {} -> {}\n",
            new_names[i],
            nonempty(w.render(original_names))
        ));
    }
    out
}

fn nonempty(s: String) -> String {
    if s.is_empty() {
        "1".to_string()
    } else {
        s
    }
}

pub fn experiment_to_json(result: &ExperimentResult) -> Value {
    json!({
        "n": result.config.generators,
        "m": result.config.relators,
        "trials": result.config.trials,
        "seed": result.config.master_seed,
        "confidence": result.config.confidence,
        "rows": result.rows.iter().map(|row| json!({
            "ell": row.ell,
            "trials": row.trials,
            "successes": row.successes,
            "p_hat": row.p_hat,
            "ci_low": row.ci_low,
            "ci_high": row.ci_high,
        })).collect::<Vec<_>>(),
    })
}

pub fn exact_prob_to_json(n: usize, m: usize, ell: u32, p: &BigRational) -> Value {
    json!({
        "n": n,
        "m": m,
        "ell": ell,
        "probability": p.to_string(),
        "numerator": bigint_to_json(p.numer()),
        "denominator": bigint_to_json(p.denom()),
        "approx": p.to_f64(),
    })
}
