//! Browser bindings for the session engine.  Everything here is a thin
//! wrapper returning strings (plain text or JSON), so the same code paths
//! compile and run natively, which is how the test suite exercises them.

use taccat_core::error::{Error, Result};
use taccat_core::{
    build_objects, generate_corpus, parse_session, print_session, rank_membership,
    varieties::build_e, Command, ComplexDecl, FieldSpec, RankPoint, RunOptions, Session,
};
use wasm_bindgen::prelude::*;

/// Parse and run a session; returns the rendered output, or a line
/// starting with `error:` when something fails.
#[wasm_bindgen]
pub fn run_session(src: &str, json: bool) -> String {
    let opts = RunOptions { json, ..Default::default() };
    let out = parse_session(src).and_then(|s| taccat_core::run_session(&s, &opts));
    match out {
        Ok(text) => text,
        Err(e) => format!("error: {e}\n"),
    }
}

fn grid_impl(src: &str, source: &str, target: &str) -> Result<String> {
    let session = parse_session(src)?;
    let objs = build_objects(&session)?;
    let missing = |name: &str| Error::UndefinedName { name: name.to_string() };
    let c = objs.complexes.get(source).ok_or_else(|| missing(source))?;
    let d = objs.complexes.get(target).ok_or_else(|| missing(target))?;
    let e = build_e(c, d, 1)?;
    let p = match e.field() {
        FieldSpec::Prime(p) => p,
        FieldSpec::Rational => {
            return Err(Error::shape("the grid view needs a prime field session"))
        }
    };
    let nvars = e.num_ops();
    let total = p.pow(nvars as u32);
    let field = e.field();
    let mut member = Vec::with_capacity(total as usize);
    for idx in 0..total {
        let mut rem = idx;
        let mut coords = vec![field.zero(); nvars];
        for slot in (0..nvars).rev() {
            coords[slot] = field.from_i64((rem % p) as i64);
            rem /= p;
        }
        let hit = if coords.iter().all(|x| x.is_zero()) {
            true
        } else {
            rank_membership(&e, &RankPoint::new(coords)?)?
        };
        member.push(hit);
    }
    serde_json::to_string(&serde_json::json!({
        "range": p,
        "vars": nvars,
        "member": member,
    }))
    .map_err(|e| Error::Internal(format!("json rendering failed: {e}")))
}

/// Rank-variety membership over the full F_p grid for a complex pair in
/// the given session.  Returns `{"range": p, "vars": c, "member": [...]}`
/// with the flat boolean array in row-major order (last coordinate
/// fastest), or `{"error": "..."}`.
#[wasm_bindgen]
pub fn variety_grid(src: &str, source: &str, target: &str) -> String {
    match grid_impl(src, source, target) {
        Ok(s) => s,
        Err(e) => serde_json::json!({ "error": e.to_string() }).to_string(),
    }
}

fn random_impl(seed: u32) -> Result<String> {
    // vary the cycling position so different seeds see different rings
    let count = (seed as usize % 9) + 1;
    let items = generate_corpus(FieldSpec::Prime(5), count, seed as u64)?;
    let item = items.into_iter().last().expect("count >= 1");
    let cx = item.complex;
    let ring = &cx.ring;
    let mut diffs = Vec::with_capacity(cx.period);
    for m in &cx.diffs {
        let mut rows = Vec::with_capacity(m.rows);
        for i in 0..m.rows {
            let mut row = Vec::with_capacity(m.cols);
            for j in 0..m.cols {
                row.push(m.get(i, j).lift());
            }
            rows.push(row);
        }
        diffs.push(rows);
    }
    let name = "C".to_string();
    let session = Session {
        field: Some(FieldSpec::Prime(5)),
        vars: ring.poly_ring.vars.clone(),
        relations: ring.relations.clone(),
        complexes: vec![ComplexDecl {
            name: name.clone(),
            period: cx.period,
            ranks: cx.ranks.clone(),
            diffs,
        }],
        maps: vec![],
        commands: vec![
            Command::Operators { complex: name.clone() },
            Command::SupportVariety { source: name.clone(), target: name.clone() },
            Command::Crosscheck { source: name.clone(), target: name },
        ],
    };
    Ok(print_session(&session))
}

/// A seeded random totally acyclic complex, rendered as a ready-to-run
/// session file.
#[wasm_bindgen]
pub fn random_session(seed: u32) -> String {
    match random_impl(seed) {
        Ok(s) => s,
        Err(e) => format!("# error: {e}\n"),
    }
}
