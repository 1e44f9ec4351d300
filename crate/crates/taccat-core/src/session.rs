//! Line-oriented session files: declare a field, a polynomial ring, an
//! ordered relation sequence, then named complexes and chain maps, then
//! issue commands.  Each stanza is one logical line; physical lines that
//! start with whitespace continue the stanza above, and `;` separates
//! clauses inside a stanza:
//!
//! ```text
//! field Fp 7
//! ring vars x y
//! ci x^2
//! ci y^2
//! complex C period 1 ranks 2 ;
//!   d[0] = [[x, 3*y], [3*y, -x]]
//! cmd operators C
//! cmd support-variety C C
//! ```
//!
//! `#` starts a comment.  Output is deterministic text, or a JSON array
//! with one object per command when `RunOptions::json` is set.

use crate::complexes::{hom_space, PeriodicComplex, ChainMap};
use crate::cones::{lifted_cone, t_functor};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::groebner::GroebnerBasis;
use crate::operators::{eisenbud_operators, single_operator};
use crate::parse::{parse_matrix, parse_poly};
use crate::poly::{PolyRing, Polynomial, RingRc};
use crate::rings::{make_ci_ring, CiRing, CiRingRc, RMatrix, RingElement};
use crate::varieties::{
    annihilator, build_e, chi_ring, crosscheck_avrunin_scott, dade_test, describe_zero_set,
    finite_generation_report, rank_membership, GradedHomModule, RankPoint,
};
use num_integer::Integer;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexDecl {
    pub name: String,
    pub period: usize,
    pub ranks: Vec<usize>,
    /// diffs[k] is the matrix literal for d_k, entries over the ambient ring.
    pub diffs: Vec<Vec<Vec<Polynomial>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    pub degree: i64,
    pub mats: Vec<Vec<Vec<Polynomial>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Operators { complex: String },
    Cone { complex: String },
    TFunctor { complex: String },
    TacCheck { complex: String },
    SupportVariety { source: String, target: String },
    RankTest { source: String, target: String, point: Vec<String> },
    Crosscheck { source: String, target: String },
    Dade { source: String, target: String },
    Calculus { source: String, target: String, map: String },
    Hom { source: String, target: String, degree: i64 },
    FinGen { source: String, target: String },
}

const COMMAND_NAMES: [&str; 11] = [
    "operators",
    "cone",
    "tfunctor",
    "tac-check",
    "support-variety",
    "rank-test",
    "crosscheck",
    "dade",
    "calculus",
    "hom",
    "fingen",
];

impl Command {
    pub fn canonical(&self) -> String {
        match self {
            Command::Operators { complex } => format!("operators {complex}"),
            Command::Cone { complex } => format!("cone {complex}"),
            Command::TFunctor { complex } => format!("tfunctor {complex}"),
            Command::TacCheck { complex } => format!("tac-check {complex}"),
            Command::SupportVariety { source, target } => {
                format!("support-variety {source} {target}")
            }
            Command::RankTest { source, target, point } => {
                format!("rank-test {source} {target} {}", point.join(" "))
            }
            Command::Crosscheck { source, target } => format!("crosscheck {source} {target}"),
            Command::Dade { source, target } => format!("dade {source} {target}"),
            Command::Calculus { source, target, map } => {
                format!("calculus {source} {target} {map}")
            }
            Command::Hom { source, target, degree } => format!("hom {source} {target} {degree}"),
            Command::FinGen { source, target } => format!("fingen {source} {target}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Session {
    pub field: Option<FieldSpec>,
    pub vars: Vec<String>,
    pub relations: Vec<Polynomial>,
    pub complexes: Vec<ComplexDecl>,
    pub maps: Vec<MapDecl>,
    pub commands: Vec<Command>,
}

struct Clause {
    text: String,
    line: usize,
    col: usize,
}

/// Split source text into stanzas of `;`-separated clauses.  A physical
/// line starting with whitespace continues the previous stanza.
fn split_stanzas(src: &str) -> Result<Vec<Vec<Clause>>> {
    let mut stanzas: Vec<Vec<Clause>> = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let content = match raw.find('#') {
            Some(h) => &raw[..h],
            None => raw,
        };
        if content.trim().is_empty() {
            continue;
        }
        let continuation = content.starts_with(' ') || content.starts_with('\t');
        if continuation && stanzas.is_empty() {
            return Err(Error::parse_at(line_no, 1, "continuation line with nothing to continue"));
        }
        if !continuation {
            stanzas.push(Vec::new());
        }
        let stanza = stanzas.last_mut().expect("stanza pushed above");
        let mut offset = 0usize;
        for piece in content.split(';') {
            let lead = piece.len() - piece.trim_start().len();
            let trimmed = piece.trim();
            if !trimmed.is_empty() {
                stanza.push(Clause {
                    text: trimmed.to_string(),
                    line: line_no,
                    col: offset + lead + 1,
                });
            }
            offset += piece.len() + 1;
        }
    }
    Ok(stanzas)
}

fn edit_distance(a: &str, b: &str) -> usize {
    let (a, b): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut cur = vec![i + 1];
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur.push(sub.min(prev[j + 1] + 1).min(cur[j] + 1));
        }
        prev = cur;
    }
    prev[b.len()]
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_scalar_literal(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    match body.split_once('/') {
        None => !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit()),
        Some((n, d)) => {
            !n.is_empty()
                && !d.is_empty()
                && n.bytes().all(|b| b.is_ascii_digit())
                && d.bytes().all(|b| b.is_ascii_digit())
        }
    }
}

/// Parse an indexed matrix clause `head[k] = [[...]]`; returns (k, literal).
fn indexed_matrix(
    clause: &Clause,
    head: &str,
    count: usize,
    ring: &RingRc,
) -> Result<(usize, Vec<Vec<Polynomial>>)> {
    let err = |msg: String| Error::parse_at(clause.line, clause.col, msg);
    let rest = clause
        .text
        .strip_prefix(head)
        .and_then(|r| r.trim_start().strip_prefix('['))
        .ok_or_else(|| err(format!("expected `{head}[k] = [[...]]`")))?;
    let close = rest.find(']').ok_or_else(|| err("missing `]` after index".into()))?;
    let k: usize = rest[..close]
        .trim()
        .parse()
        .map_err(|_| err(format!("bad index `{}`", rest[..close].trim())))?;
    if k >= count {
        return Err(err(format!("index {k} out of range (expected 0..{count})")));
    }
    let after = rest[close + 1..].trim_start();
    let body = after
        .strip_prefix('=')
        .ok_or_else(|| err("expected `=` after index".into()))?
        .trim();
    let body_col = clause.col + (clause.text.len() - body.len());
    let lit = if body == "[]" {
        Vec::new()
    } else {
        parse_matrix(body, ring, clause.line, body_col)?
    };
    Ok((k, lit))
}

fn collect_indexed(
    clauses: &[Clause],
    head: &str,
    count: usize,
    ring: &RingRc,
    stanza_line: usize,
) -> Result<Vec<Vec<Vec<Polynomial>>>> {
    let mut slots: Vec<Option<Vec<Vec<Polynomial>>>> = vec![None; count];
    for clause in clauses {
        let (k, lit) = indexed_matrix(clause, head, count, ring)?;
        if slots[k].is_some() {
            return Err(Error::parse_at(
                clause.line,
                clause.col,
                format!("{head}[{k}] given twice"),
            ));
        }
        slots[k] = Some(lit);
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(k, s)| {
            s.ok_or_else(|| Error::parse_at(stanza_line, 1, format!("missing clause {head}[{k}]")))
        })
        .collect()
}

pub fn parse_session(src: &str) -> Result<Session> {
    let stanzas = split_stanzas(src)?;
    let mut session = Session::default();
    let mut ring: Option<RingRc> = None;
    let mut names: BTreeSet<String> = BTreeSet::new();
    for stanza in &stanzas {
        let head = &stanza[0];
        let toks: Vec<&str> = head.text.split_whitespace().collect();
        let perr = |msg: String| Error::parse_at(head.line, head.col, msg);
        let single = |label: &str| -> Result<()> {
            if stanza.len() > 1 {
                let extra = &stanza[1];
                return Err(Error::parse_at(
                    extra.line,
                    extra.col,
                    format!("`{label}` takes no `;` clauses"),
                ));
            }
            Ok(())
        };
        match toks[0] {
            "field" => {
                single("field")?;
                if session.field.is_some() {
                    return Err(perr("field already declared".into()));
                }
                let spec = match toks.get(1) {
                    Some(&"Q") if toks.len() == 2 => FieldSpec::Rational,
                    Some(&"Fp") if toks.len() == 3 => {
                        let p: u64 = toks[2]
                            .parse()
                            .map_err(|_| perr(format!("bad prime `{}`", toks[2])))?;
                        FieldSpec::Prime(p)
                            .validate()
                            .map_err(|e| perr(e.to_string()))?
                    }
                    _ => return Err(perr("expected `field Q` or `field Fp <p>`".into())),
                };
                session.field = Some(spec);
            }
            "ring" => {
                single("ring")?;
                if ring.is_some() {
                    return Err(perr("ring already declared".into()));
                }
                let field = session
                    .field
                    .ok_or_else(|| perr("declare a field before the ring".into()))?;
                if toks.len() < 3 || toks[1] != "vars" {
                    return Err(perr("expected `ring vars <name>...`".into()));
                }
                let vars: Vec<&str> = toks[2..].to_vec();
                for v in &vars {
                    if !is_identifier(v) {
                        return Err(perr(format!("bad variable name `{v}`")));
                    }
                }
                let r = PolyRing::default_grevlex(field, &vars)
                    .map_err(|e| perr(e.to_string()))?;
                session.vars = vars.iter().map(|s| s.to_string()).collect();
                ring = Some(r);
            }
            "ci" => {
                single("ci")?;
                let r = ring
                    .as_ref()
                    .ok_or_else(|| perr("declare the ring before relations".into()))?;
                if !session.complexes.is_empty() {
                    return Err(perr("relations must be declared before complexes".into()));
                }
                let src_text = head.text["ci".len()..].trim_start();
                let col = head.col + (head.text.len() - src_text.len());
                let p = parse_poly(src_text, r, head.line, col)?;
                session.relations.push(p);
            }
            "complex" => {
                let r = ring
                    .as_ref()
                    .ok_or_else(|| perr("declare the ring before complexes".into()))?;
                if toks.len() < 6 || toks[2] != "period" || toks[4] != "ranks" {
                    return Err(perr(
                        "expected `complex NAME period P ranks r0 ...`".into(),
                    ));
                }
                let name = toks[1].to_string();
                if !is_identifier(&name) {
                    return Err(perr(format!("bad complex name `{name}`")));
                }
                if !names.insert(name.clone()) {
                    return Err(Error::DuplicateName { name });
                }
                let period: usize = toks[3]
                    .parse()
                    .map_err(|_| perr(format!("bad period `{}`", toks[3])))?;
                if period == 0 {
                    return Err(perr("period must be >= 1".into()));
                }
                let ranks: Vec<usize> = toks[5..]
                    .iter()
                    .map(|t| t.parse().map_err(|_| perr(format!("bad rank `{t}`"))))
                    .collect::<Result<_>>()?;
                if ranks.len() != period {
                    return Err(perr(format!(
                        "expected {period} ranks, found {}",
                        ranks.len()
                    )));
                }
                let diffs = collect_indexed(&stanza[1..], "d", period, r, head.line)?;
                session.complexes.push(ComplexDecl { name, period, ranks, diffs });
            }
            "map" => {
                let r = ring
                    .as_ref()
                    .ok_or_else(|| perr("declare the ring before maps".into()))?;
                if toks.len() != 8 || toks[2] != ":" || toks[4] != "->" || toks[6] != "degree" {
                    return Err(perr(
                        "expected `map NAME : C -> D degree i`".into(),
                    ));
                }
                let name = toks[1].to_string();
                if !is_identifier(&name) {
                    return Err(perr(format!("bad map name `{name}`")));
                }
                let source = toks[3].to_string();
                let target = toks[5].to_string();
                let degree: i64 = toks[7]
                    .parse()
                    .map_err(|_| perr(format!("bad degree `{}`", toks[7])))?;
                let find = |n: &str| -> Result<&ComplexDecl> {
                    session
                        .complexes
                        .iter()
                        .find(|c| c.name == n)
                        .ok_or(Error::UndefinedName { name: n.to_string() })
                };
                let l = find(&source)?.period.lcm(&find(&target)?.period);
                if !names.insert(name.clone()) {
                    return Err(Error::DuplicateName { name });
                }
                let mats = collect_indexed(&stanza[1..], "psi", l, r, head.line)?;
                session.maps.push(MapDecl { name, source, target, degree, mats });
            }
            "cmd" => {
                single("cmd")?;
                let cmd = parse_command(&toks[1..], head, &session)?;
                session.commands.push(cmd);
            }
            other => {
                return Err(perr(format!(
                    "unknown stanza `{other}` (expected field, ring, ci, complex, map, or cmd)"
                )));
            }
        }
    }
    Ok(session)
}

fn parse_command(args: &[&str], head: &Clause, session: &Session) -> Result<Command> {
    let perr = |msg: String| Error::parse_at(head.line, head.col, msg);
    let name = *args.first().ok_or_else(|| perr("`cmd` needs a command name".into()))?;
    if !COMMAND_NAMES.contains(&name) {
        let best = COMMAND_NAMES
            .iter()
            .map(|c| (edit_distance(name, c), *c))
            .min()
            .expect("nonempty");
        let msg = if best.0 <= 3 {
            format!("unknown command `{name}`; did you mean `{}`?", best.1)
        } else {
            format!("unknown command `{name}`")
        };
        return Err(perr(msg));
    }
    let complex_arg = |i: usize| -> Result<String> {
        let n = *args
            .get(i)
            .ok_or_else(|| perr(format!("`{name}` needs a complex name at position {i}")))?;
        if !session.complexes.iter().any(|c| c.name == n) {
            return Err(Error::UndefinedName { name: n.to_string() });
        }
        Ok(n.to_string())
    };
    let arity = |n: usize| -> Result<()> {
        if args.len() != n + 1 {
            return Err(perr(format!("`{name}` takes {n} arguments, found {}", args.len() - 1)));
        }
        Ok(())
    };
    Ok(match name {
        "operators" => {
            arity(1)?;
            Command::Operators { complex: complex_arg(1)? }
        }
        "cone" => {
            arity(1)?;
            Command::Cone { complex: complex_arg(1)? }
        }
        "tfunctor" => {
            arity(1)?;
            Command::TFunctor { complex: complex_arg(1)? }
        }
        "tac-check" => {
            arity(1)?;
            Command::TacCheck { complex: complex_arg(1)? }
        }
        "support-variety" => {
            arity(2)?;
            Command::SupportVariety { source: complex_arg(1)?, target: complex_arg(2)? }
        }
        "rank-test" => {
            if args.len() < 4 {
                return Err(perr("`rank-test` takes C D a1 ... ac".into()));
            }
            let source = complex_arg(1)?;
            let target = complex_arg(2)?;
            let point: Vec<String> = args[3..].iter().map(|s| s.to_string()).collect();
            for c in &point {
                if !is_scalar_literal(c) {
                    return Err(perr(format!("bad coordinate `{c}`")));
                }
            }
            Command::RankTest { source, target, point }
        }
        "crosscheck" => {
            arity(2)?;
            Command::Crosscheck { source: complex_arg(1)?, target: complex_arg(2)? }
        }
        "dade" => {
            arity(2)?;
            Command::Dade { source: complex_arg(1)?, target: complex_arg(2)? }
        }
        "calculus" => {
            arity(3)?;
            let source = complex_arg(1)?;
            let target = complex_arg(2)?;
            let m = args[3].to_string();
            if !session.maps.iter().any(|x| x.name == m) {
                return Err(Error::UndefinedName { name: m });
            }
            Command::Calculus { source, target, map: m }
        }
        "hom" => {
            arity(3)?;
            let source = complex_arg(1)?;
            let target = complex_arg(2)?;
            let degree: i64 = args[3]
                .parse()
                .map_err(|_| perr(format!("bad degree `{}`", args[3])))?;
            Command::Hom { source, target, degree }
        }
        "fingen" => {
            arity(2)?;
            Command::FinGen { source: complex_arg(1)?, target: complex_arg(2)? }
        }
        _ => unreachable!("command list covered above"),
    })
}

fn fmt_matrix(rows: &[Vec<Polynomial>]) -> String {
    if rows.is_empty() {
        return "[]".to_string();
    }
    let body: Vec<String> = rows
        .iter()
        .map(|r| {
            let entries: Vec<String> = r.iter().map(|p| p.to_string()).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", body.join(", "))
}

/// Canonical text for a session; `parse(print(parse(s))) == parse(s)`.
pub fn print_session(s: &Session) -> String {
    let mut out = String::new();
    if let Some(f) = s.field {
        match f {
            FieldSpec::Rational => out.push_str("field Q\n"),
            FieldSpec::Prime(p) => out.push_str(&format!("field Fp {p}\n")),
        }
    }
    if !s.vars.is_empty() {
        out.push_str(&format!("ring vars {}\n", s.vars.join(" ")));
    }
    for p in &s.relations {
        out.push_str(&format!("ci {p}\n"));
    }
    for c in &s.complexes {
        let ranks: Vec<String> = c.ranks.iter().map(|r| r.to_string()).collect();
        out.push_str(&format!(
            "complex {} period {} ranks {} ;\n",
            c.name,
            c.period,
            ranks.join(" ")
        ));
        for (k, m) in c.diffs.iter().enumerate() {
            let sep = if k + 1 == c.diffs.len() { "" } else { " ;" };
            out.push_str(&format!("  d[{k}] = {}{sep}\n", fmt_matrix(m)));
        }
    }
    for m in &s.maps {
        out.push_str(&format!(
            "map {} : {} -> {} degree {} ;\n",
            m.name, m.source, m.target, m.degree
        ));
        for (k, mat) in m.mats.iter().enumerate() {
            let sep = if k + 1 == m.mats.len() { "" } else { " ;" };
            out.push_str(&format!("  psi[{k}] = {}{sep}\n", fmt_matrix(mat)));
        }
    }
    for cmd in &s.commands {
        out.push_str(&format!("cmd {}\n", cmd.canonical()));
    }
    out
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Emit a JSON array instead of text.
    pub json: bool,
    /// Period multiple used when assembling the graded module E.
    pub window: usize,
    /// Grid side length for crosscheck/calculus; defaults to p (or 5 over Q).
    pub grid_range: Option<u64>,
    /// Double the window and retry when annihilator stabilization fails.
    pub window_escalate: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { json: false, window: 1, grid_range: None, window_escalate: false }
    }
}

struct PairData {
    e: Rc<GradedHomModule>,
    ann: Option<Rc<GroebnerBasis>>,
}

/// The ring, complexes, and maps a session declares, built and validated
/// but with no commands run.
pub struct SessionObjects {
    pub ring: Option<CiRingRc>,
    pub complexes: BTreeMap<String, PeriodicComplex>,
    pub maps: BTreeMap<String, ChainMap>,
}

pub fn build_objects(s: &Session) -> Result<SessionObjects> {
    let mut objs = SessionObjects {
        ring: None,
        complexes: BTreeMap::new(),
        maps: BTreeMap::new(),
    };
    let field = match s.field {
        Some(f) => f,
        None => return Ok(objs),
    };
    if s.vars.is_empty() {
        return Ok(objs);
    }
    let vars: Vec<&str> = s.vars.iter().map(|v| v.as_str()).collect();
    let poly_ring = PolyRing::default_grevlex(field, &vars)?;
    let ring = if s.relations.is_empty() {
        CiRing::base(&poly_ring)
    } else {
        make_ci_ring(&poly_ring, s.relations.clone())?
    };
    for decl in &s.complexes {
        let cx = build_complex(&ring, decl)?;
        objs.complexes.insert(decl.name.clone(), cx);
    }
    for decl in &s.maps {
        let source = objs.complexes[&decl.source].clone();
        let target = objs.complexes[&decl.target].clone();
        let l = source.period.lcm(&target.period);
        let mut mats = Vec::with_capacity(l);
        for (k, lit) in decl.mats.iter().enumerate() {
            let rows = target.rank_at(k as i64 - decl.degree);
            let cols = source.rank_at(k as i64);
            mats.push(literal_matrix(&ring, lit, rows, cols, &decl.name)?);
        }
        let cm = ChainMap::new(&source, &target, decl.degree, mats)?;
        objs.maps.insert(decl.name.clone(), cm);
    }
    objs.ring = Some(ring);
    Ok(objs)
}

struct Runtime {
    complexes: BTreeMap<String, PeriodicComplex>,
    maps: BTreeMap<String, ChainMap>,
    pairs: BTreeMap<(String, String), PairData>,
    window: usize,
    escalate: bool,
    grid_range: Option<u64>,
}

impl Runtime {
    fn build(s: &Session, opts: &RunOptions) -> Result<Runtime> {
        let objs = build_objects(s)?;
        Ok(Runtime {
            complexes: objs.complexes,
            maps: objs.maps,
            pairs: BTreeMap::new(),
            window: opts.window.max(1),
            escalate: opts.window_escalate,
            grid_range: opts.grid_range,
        })
    }

    fn complex(&self, name: &str) -> &PeriodicComplex {
        &self.complexes[name]
    }

    fn e_for(&mut self, source: &str, target: &str) -> Result<Rc<GradedHomModule>> {
        let key = (source.to_string(), target.to_string());
        if let Some(p) = self.pairs.get(&key) {
            return Ok(p.e.clone());
        }
        let e = Rc::new(build_e(&self.complexes[source], &self.complexes[target], self.window)?);
        self.pairs.insert(key, PairData { e: e.clone(), ann: None });
        Ok(e)
    }

    fn ann_for(
        &mut self,
        source: &str,
        target: &str,
    ) -> Result<(Rc<GradedHomModule>, Rc<GroebnerBasis>)> {
        let key = (source.to_string(), target.to_string());
        if let Some(p) = self.pairs.get(&key) {
            if let Some(ann) = &p.ann {
                return Ok((p.e.clone(), ann.clone()));
            }
        }
        let mut e = self.e_for(source, target)?;
        let chi = chi_ring(e.field(), e.num_ops())?;
        let cap = self.window * 8;
        let mut mult = e.multiple;
        let ann = loop {
            match annihilator(&e, &chi) {
                Ok(gb) => break Rc::new(gb),
                Err(err @ Error::StabilizationNotDetected { .. }) => {
                    if !self.escalate || mult >= cap {
                        return Err(err);
                    }
                    mult *= 2;
                    e = Rc::new(build_e(
                        &self.complexes[source],
                        &self.complexes[target],
                        mult,
                    )?);
                }
                Err(err) => return Err(err),
            }
        };
        self.pairs.insert(key, PairData { e: e.clone(), ann: Some(ann.clone()) });
        Ok((e, ann))
    }

    fn range_for(&self, field: FieldSpec) -> u64 {
        self.grid_range.unwrap_or(match field {
            FieldSpec::Prime(p) => p,
            FieldSpec::Rational => 5,
        })
    }
}

fn literal_matrix(
    ring: &CiRingRc,
    lit: &[Vec<Polynomial>],
    rows: usize,
    cols: usize,
    what: &str,
) -> Result<RMatrix> {
    let lit_rows = lit.len();
    let lit_cols = lit.first().map(|r| r.len()).unwrap_or(0);
    let shape_ok = (lit_rows == rows && lit_cols == cols)
        || (rows == 0 && lit_rows == 0)
        || (cols == 0 && lit_rows == rows && lit_cols == 0);
    if !shape_ok {
        return Err(Error::shape(format!(
            "{what}: literal is {lit_rows}x{lit_cols}, expected {rows}x{cols}"
        )));
    }
    let mut m = RMatrix::zero(ring, rows, cols);
    for (i, row) in lit.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            m.set(i, j, RingElement::new(ring, p)?);
        }
    }
    Ok(m)
}

fn build_complex(ring: &CiRingRc, decl: &ComplexDecl) -> Result<PeriodicComplex> {
    let p = decl.period;
    let mut diffs = Vec::with_capacity(p);
    for (k, lit) in decl.diffs.iter().enumerate() {
        let rows = decl.ranks[(k + p - 1) % p];
        let cols = decl.ranks[k];
        diffs.push(literal_matrix(ring, lit, rows, cols, &format!("{} d[{k}]", decl.name))?);
    }
    PeriodicComplex::new(ring, decl.ranks.clone(), diffs)
}

fn ideal_string(gb: &GroebnerBasis) -> String {
    if gb.gens.is_empty() {
        "(0)".to_string()
    } else {
        let gens: Vec<String> = gb.gens.iter().map(|g| g.to_string()).collect();
        format!("({})", gens.join(", "))
    }
}

fn gen_degree_string(g: Option<usize>) -> String {
    match g {
        Some(d) => d.to_string(),
        None => "none".to_string(),
    }
}

fn run_command(rt: &mut Runtime, cmd: &Command) -> Result<(String, Value)> {
    let mut text = String::new();
    let value;
    match cmd {
        Command::Operators { complex } => {
            let ops = eisenbud_operators(rt.complex(complex))?.ops;
            let mut json_ops = Vec::new();
            for (k, op) in ops.iter().enumerate() {
                let mut mats = Vec::new();
                for (j, m) in op.mats.iter().enumerate() {
                    text.push_str(&format!("t{}[{j}] = {m}\n", k + 1));
                    mats.push(m.to_string());
                }
                json_ops.push(Value::Array(mats.into_iter().map(Value::String).collect()));
            }
            value = json!({ "cmd": "operators", "complex": complex, "operators": json_ops });
        }
        Command::Cone { complex } => {
            let s = single_operator(rt.complex(complex))?;
            let cone = lifted_cone(rt.complex(complex), &s)?;
            let rels: Vec<String> =
                cone.result.ring.relations.iter().map(|r| r.to_string()).collect();
            text.push_str(&format!("cone relations = [{}]\n", rels.join(", ")));
            let ranks: Vec<String> = cone.result.ranks.iter().map(|r| r.to_string()).collect();
            text.push_str(&format!(
                "cone period {} ranks [{}]\n",
                cone.result.period,
                ranks.join(", ")
            ));
            let mut diffs = Vec::new();
            for (j, m) in cone.result.diffs.iter().enumerate() {
                text.push_str(&format!("cone d[{j}] = {m}\n"));
                diffs.push(m.to_string());
            }
            value = json!({
                "cmd": "cone",
                "complex": complex,
                "relations": rels,
                "ranks": cone.result.ranks,
                "diffs": diffs,
            });
        }
        Command::TFunctor { complex } => {
            let c = rt.complex(complex);
            let tower = t_functor(c, None, c.ring.num_relations())?;
            text.push_str(&format!("tower stages = {}\n", tower.stages.len()));
            let ranks: Vec<String> =
                tower.final_complex.ranks.iter().map(|r| r.to_string()).collect();
            text.push_str(&format!(
                "tower period {} ranks [{}]\n",
                tower.final_complex.period,
                ranks.join(", ")
            ));
            let mut diffs = Vec::new();
            for (j, m) in tower.final_complex.diffs.iter().enumerate() {
                text.push_str(&format!("tower d[{j}] = {m}\n"));
                diffs.push(m.to_string());
            }
            value = json!({
                "cmd": "tfunctor",
                "complex": complex,
                "stages": tower.stages.len(),
                "ranks": tower.final_complex.ranks,
                "diffs": diffs,
            });
        }
        Command::TacCheck { complex } => {
            let rep = rt.complex(complex).check_totally_acyclic()?;
            text.push_str(&format!(
                "tac: exact = {}, dual_exact = {}\n",
                rep.exact, rep.dual_exact
            ));
            if !rep.ok() {
                text.push_str(&format!(
                    "tac failures: degrees {:?} dual {:?}\n",
                    rep.exact_failures, rep.dual_failures
                ));
            }
            value = json!({
                "cmd": "tac-check",
                "complex": complex,
                "exact": rep.exact,
                "dual_exact": rep.dual_exact,
                "exact_failures": rep.exact_failures,
                "dual_failures": rep.dual_failures,
            });
        }
        Command::SupportVariety { source, target } => {
            let (e, ann) = rt.ann_for(source, target)?;
            let zero_set = describe_zero_set(&ann)?;
            let fingen = finite_generation_report(&e)?;
            let ideal = ideal_string(&ann);
            text.push_str(&format!("Ann = {ideal}\n"));
            text.push_str(&format!("V = Z{ideal} = {zero_set}\n"));
            value = json!({
                "cmd": "support-variety",
                "source": source,
                "target": target,
                "ideal": ann.gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "window": e.window,
                "generation_degree": fingen.generation_degree,
                "zero_set": zero_set,
            });
            text.push_str(&format!("window = {}\n", e.window));
            text.push_str(&format!(
                "generation degree = {}\n",
                gen_degree_string(fingen.generation_degree)
            ));
        }
        Command::RankTest { source, target, point } => {
            let e = rt.e_for(source, target)?;
            let field = e.field();
            let coords: Vec<FieldElement> = point
                .iter()
                .map(|c| parse_scalar(field, c))
                .collect::<Result<_>>()?;
            if coords.len() != e.num_ops() {
                return Err(Error::shape(format!(
                    "rank-test point has {} coordinates, expected {}",
                    coords.len(),
                    e.num_ops()
                )));
            }
            let member = if coords.iter().all(|c| c.is_zero()) {
                true
            } else {
                rank_membership(&e, &RankPoint::new(coords)?)?
            };
            let verdict = if member { "member" } else { "not a member" };
            text.push_str(&format!("rank-test ({}): {verdict}\n", point.join(", ")));
            value = json!({
                "cmd": "rank-test",
                "source": source,
                "target": target,
                "point": point,
                "member": member,
            });
        }
        Command::Crosscheck { source, target } => {
            let (e, ann) = rt.ann_for(source, target)?;
            let range = rt.range_for(e.field());
            let rep = crosscheck_avrunin_scott(&e, &ann, range)?;
            text.push_str(&format!("grid: {}/{} agree\n", rep.agree, rep.total));
            if !rep.disagreements.is_empty() {
                let pts: Vec<String> = rep
                    .disagreements
                    .iter()
                    .map(|p| {
                        let cs: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                        format!("({})", cs.join(", "))
                    })
                    .collect();
                text.push_str(&format!("disagreements: {}\n", pts.join(" ")));
            }
            value = json!({
                "cmd": "crosscheck",
                "source": source,
                "target": target,
                "grid_report": {
                    "total": rep.total,
                    "agree": rep.agree,
                    "disagreements": rep.disagreements,
                },
            });
        }
        Command::Dade { source, target } => {
            let (e, ann) = rt.ann_for(source, target)?;
            let rep = dade_test(&e, &ann)?;
            text.push_str(&format!(
                "dade: e_zero = {}, chi_nilpotent = {}, agree = {}\n",
                rep.e_zero,
                rep.chi_nilpotent,
                rep.agree()
            ));
            value = json!({
                "cmd": "dade",
                "source": source,
                "target": target,
                "e_zero": rep.e_zero,
                "chi_nilpotent": rep.chi_nilpotent,
                "agree": rep.agree(),
            });
        }
        Command::Calculus { source, target, map } => {
            let alpha = rt.maps[map].clone();
            let c = rt.complex(source).clone();
            let d = rt.complex(target).clone();
            let range = rt.range_for(c.ring.poly_ring.field);
            let rep = crate::varieties::variety_calculus_suite(&c, &d, &alpha, range)?;
            text.push_str(&format!(
                "calculus: grid_total = {}, intersection = {}, radical_forward = {}, radical_backward = {}, triangle = [{}, {}, {}]\n",
                rep.grid_total,
                rep.intersection_ok,
                rep.radical_forward,
                rep.radical_backward,
                rep.triangle_ok[0],
                rep.triangle_ok[1],
                rep.triangle_ok[2],
            ));
            value = json!({
                "cmd": "calculus",
                "source": source,
                "target": target,
                "map": map,
                "grid_total": rep.grid_total,
                "intersection": rep.intersection_ok,
                "radical_forward": rep.radical_forward,
                "radical_backward": rep.radical_backward,
                "triangle": rep.triangle_ok,
            });
        }
        Command::Hom { source, target, degree } => {
            let hs = hom_space(rt.complex(source), rt.complex(target), *degree)?;
            text.push_str(&format!("hom[{degree}] dim = {}\n", hs.dim));
            value = json!({
                "cmd": "hom",
                "source": source,
                "target": target,
                "degree": degree,
                "dim": hs.dim,
            });
        }
        Command::FinGen { source, target } => {
            let e = rt.e_for(source, target)?;
            let rep = finite_generation_report(&e)?;
            let surj: Vec<String> = rep.surjective.iter().map(|b| b.to_string()).collect();
            text.push_str(&format!(
                "fingen: surjective = [{}], generation degree = {}\n",
                surj.join(", "),
                gen_degree_string(rep.generation_degree)
            ));
            value = json!({
                "cmd": "fingen",
                "source": source,
                "target": target,
                "surjective": rep.surjective,
                "generation_degree": rep.generation_degree,
            });
        }
    }
    Ok((text, value))
}

fn parse_scalar(field: FieldSpec, text: &str) -> Result<FieldElement> {
    let (neg, body) = match text.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, text),
    };
    let v = match body.split_once('/') {
        None => {
            let n: i64 = body
                .parse()
                .map_err(|_| Error::shape(format!("bad scalar `{text}`")))?;
            field.from_i64(n)
        }
        Some((n, d)) => {
            let n: i64 = n.parse().map_err(|_| Error::shape(format!("bad scalar `{text}`")))?;
            let d: i64 = d.parse().map_err(|_| Error::shape(format!("bad scalar `{text}`")))?;
            field.from_fraction(n, d)?
        }
    };
    Ok(if neg { v.neg() } else { v })
}

/// Execute every command in order; returns the rendered output (text by
/// default, a JSON array when `opts.json` is set).
pub fn run_session(s: &Session, opts: &RunOptions) -> Result<String> {
    let mut rt = Runtime::build(s, opts)?;
    let mut text = String::new();
    let mut values = Vec::new();
    for cmd in &s.commands {
        text.push_str(&format!("# cmd {}\n", cmd.canonical()));
        let (block, value) = run_command(&mut rt, cmd)?;
        text.push_str(&block);
        values.push(value);
    }
    if opts.json {
        let mut out = serde_json::to_string_pretty(&Value::Array(values))
            .map_err(|e| Error::Internal(format!("json rendering failed: {e}")))?;
        out.push('\n');
        Ok(out)
    } else {
        Ok(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1_F7: &str = "\
field Fp 7
ring vars x y
ci x^2
ci y^2
complex C period 1 ranks 2 ;
  d[0] = [[x, 3*y], [3*y, -x]]
cmd operators C
cmd support-variety C C
cmd rank-test C C 1 2
cmd rank-test C C 1 1
";

    #[test]
    fn example_one_session_golden() {
        let s = parse_session(EX1_F7).unwrap();
        assert_eq!(s.complexes.len(), 1);
        assert_eq!(s.commands.len(), 4);
        let out = run_session(&s, &RunOptions::default()).unwrap();
        assert!(out.contains("t1[0] = [[1, 0], [0, 1]]"), "{out}");
        assert!(out.contains("t2[0] = [[2, 0], [0, 2]]"), "{out}");
        assert!(out.contains("Ann = (chi2 + 5*chi1)"), "{out}");
        assert!(out.contains("rank-test (1, 2): member"), "{out}");
        assert!(out.contains("rank-test (1, 1): not a member"), "{out}");
    }

    #[test]
    fn round_trip_is_stable() {
        let s = parse_session(EX1_F7).unwrap();
        let printed = print_session(&s);
        let s2 = parse_session(&printed).unwrap();
        assert_eq!(s, s2);
        assert_eq!(print_session(&s2), printed);
    }

    #[test]
    fn unknown_command_suggests() {
        let src = "field Q\nring vars x\nci x^2\ncomplex C period 1 ranks 1 ; d[0] = [[x]]\ncmd support-varety C C\n";
        let err = parse_session(src).unwrap_err();
        match err {
            Error::Parse { line, msg, .. } => {
                assert_eq!(line, 5);
                assert!(msg.contains("did you mean `support-variety`"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn empty_session_is_fine() {
        let s = parse_session("").unwrap();
        assert_eq!(s, Session::default());
        assert_eq!(run_session(&s, &RunOptions::default()).unwrap(), "");
        let json = run_session(&s, &RunOptions { json: true, ..Default::default() }).unwrap();
        assert_eq!(json, "[]\n");
    }

    #[test]
    fn name_errors() {
        let src = "field Q\nring vars x\nci x^2\ncmd operators C\n";
        assert!(matches!(
            parse_session(src).unwrap_err(),
            Error::UndefinedName { name } if name == "C"
        ));
        let dup = "field Q\nring vars x\nci x^2\n\
complex C period 1 ranks 1 ; d[0] = [[x]]\n\
complex C period 1 ranks 1 ; d[0] = [[-x]]\n";
        assert!(matches!(
            parse_session(dup).unwrap_err(),
            Error::DuplicateName { name } if name == "C"
        ));
    }

    #[test]
    fn parse_errors_carry_position() {
        let src = "field Fp 4\n";
        match parse_session(src).unwrap_err() {
            Error::Parse { line, msg, .. } => {
                assert_eq!(line, 1);
                assert!(msg.contains("not an odd prime"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
        let src2 = "field Q\nring vars x\nci x^2\ncomplex C period 1 ranks 1 ;\n  d[0] = [[x +]]\n";
        match parse_session(src2).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn square_not_zero_surfaces_at_run() {
        let src = "field Q\nring vars x\nci x^3\ncomplex C period 1 ranks 1 ; d[0] = [[x]]\ncmd tac-check C\n";
        let s = parse_session(src).unwrap();
        let err = run_session(&s, &RunOptions::default()).unwrap_err();
        assert!(matches!(err, Error::SquareNotZero { .. }), "{err:?}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn json_mode_matches_schema() {
        let s = parse_session(EX1_F7).unwrap();
        let out = run_session(&s, &RunOptions { json: true, ..Default::default() }).unwrap();
        let v: Value = serde_json::from_str(&out).unwrap();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 4);
        let sv = &arr[1];
        assert_eq!(sv["cmd"], "support-variety");
        assert_eq!(sv["ideal"], json!(["chi2 + 5*chi1"]));
        assert_eq!(sv["window"], json!(2));
        assert_eq!(sv["generation_degree"], json!(2));
    }

    #[test]
    fn example_two_session_over_q() {
        let src = "\
field Q
ring vars x y z
ci x^2
ci y^2
ci z^2
complex C period 1 ranks 2 ;
  d[0] = [[x, 0], [0, y]]
complex D period 1 ranks 2 ;
  d[0] = [[x, 0], [0, z]]
map h : C -> D degree 0 ;
  psi[0] = [[1, 0], [0, 0]]
cmd support-variety C C
cmd support-variety C D
cmd dade C D
cmd calculus C D h
";
        let s = parse_session(src).unwrap();
        let out = run_session(
            &s,
            &RunOptions { grid_range: Some(3), ..Default::default() },
        )
        .unwrap();
        assert!(out.contains("Ann = (chi1*chi2, chi3)"), "{out}");
        assert!(out.contains("Ann = (chi3, chi2)"), "{out}");
        assert!(out.contains("dade: e_zero = false, chi_nilpotent = false, agree = true"));
        assert!(out.contains("intersection = true"), "{out}");
    }
}
