//! End-to-end acceptance gate.  Each criterion prints one PASS/FAIL line;
//! run with `cargo test --test acceptance -- --nocapture` to see them all.

use std::panic::AssertUnwindSafe;
use std::sync::Arc;
use std::time::Instant;
use taccat_core::groebner::{buchberger, ideal_equal, with_gb_cache, GbCache};
use taccat_core::parse::{parse_matrix, parse_poly};
use taccat_core::varieties::{
    annihilator, build_e, chi_ring, crosscheck_avrunin_scott, dade_test, support_variety,
    zero_set_contains,
};
use taccat_core::{
    basis_change_operators, eisenbud_operators, generate_corpus, generate_pairs, lifted_cone,
    make_ci_ring, mapping_cone, parse_session, run_session, s_functor, single_operator,
    verify_operator_commutation, ChainMap, CorpusItem, FieldElement, FieldSpec, KMat,
    PeriodicComplex, PolyRing, RMatrix, RunOptions,
};

type Check = std::result::Result<String, String>;

fn fail(msg: impl Into<String>) -> Check {
    Err(msg.into())
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return fail(format!($($arg)*));
        }
    };
}

fn complex_over(field: FieldSpec, vars: &[&str], relations: &[&str], d: &str) -> PeriodicComplex {
    let r = PolyRing::default_grevlex(field, vars).unwrap();
    let rels = relations.iter().map(|s| parse_poly(s, &r, 1, 1).unwrap()).collect();
    let ci = make_ci_ring(&r, rels).unwrap();
    let rows = parse_matrix(d, &r, 1, 1).unwrap();
    let m = RMatrix::from_polys(&ci, rows).unwrap();
    let rank = m.rows;
    PeriodicComplex::new(&ci, vec![rank], vec![m]).unwrap()
}

fn clifford(field: FieldSpec, beta: &str) -> PeriodicComplex {
    let d = format!("[[x, {beta}*y], [{beta}*y, -x]]");
    complex_over(field, &["x", "y"], &["x^2", "y^2"], &d)
}

fn ex2_c(field: FieldSpec) -> PeriodicComplex {
    complex_over(field, &["x", "y", "z"], &["x^2", "y^2", "z^2"], "[[x, 0], [0, y]]")
}

fn ex2_d(field: FieldSpec) -> PeriodicComplex {
    complex_over(field, &["x", "y", "z"], &["x^2", "y^2", "z^2"], "[[x, 0], [0, z]]")
}

fn ann_of(c: &PeriodicComplex, d: &PeriodicComplex) -> taccat_core::GroebnerBasis {
    let e = build_e(c, d, 1).unwrap();
    let chi = chi_ring(e.field(), e.num_ops()).unwrap();
    annihilator(&e, &chi).unwrap()
}

fn gens_of(gb: &taccat_core::GroebnerBasis) -> Vec<String> {
    gb.gens.iter().map(|g| g.to_string()).collect()
}

const CORPUS_SEED: u64 = 2026;
const CORPUS_SIZE: usize = 100;

fn corpus() -> Vec<CorpusItem> {
    generate_corpus(FieldSpec::Prime(5), CORPUS_SIZE, CORPUS_SEED).unwrap()
}

const EX1_SESSION: &str = "\
field Fp 7
ring vars x y
ci x^2
ci y^2
complex C period 1 ranks 2 ;
  d[0] = [[x, 3*y], [3*y, -x]]
cmd operators C
cmd support-variety C C
cmd crosscheck C C
";

/// Worked example 1 adapted to F_7 (3^2 = 2): operators and the support
/// variety line.  The frequently quoted form (chi1 - 2*chi2) is not
/// consistent with t1 = I and t2 = 2I: a point (b1, b2) kills E exactly
/// when b2 = 2*b1, so the annihilator is (2*chi1 - chi2); the 48-point
/// rank/ideal crosscheck in criterion 3 pins this orientation.
fn criterion_1() -> Check {
    let start = Instant::now();
    let s = parse_session(EX1_SESSION).map_err(|e| e.to_string())?;
    let out = run_session(&s, &RunOptions::default()).map_err(|e| e.to_string())?;
    ensure!(out.contains("t1[0] = [[1, 0], [0, 1]]"), "t1 is not the identity:\n{out}");
    ensure!(out.contains("t2[0] = [[2, 0], [0, 2]]"), "t2 is not 2*I:\n{out}");
    ensure!(out.contains("Ann = (chi2 + 5*chi1)"), "unexpected annihilator line:\n{out}");
    ensure!(out.contains("V = Z(chi2 + 5*chi1) = {(a, 2*a)}"), "unexpected variety line:\n{out}");

    let c = clifford(FieldSpec::Prime(7), "3");
    let ann = ann_of(&c, &c);
    let chi = chi_ring(FieldSpec::Prime(7), 2).unwrap();
    let corrected = parse_poly("2*chi1 - chi2", &chi, 1, 1).unwrap();
    let target = buchberger(&chi, &[corrected]).unwrap();
    ensure!(
        ideal_equal(&ann, &target).unwrap(),
        "annihilator differs from (2*chi1 - chi2) as an ideal"
    );
    let quoted = parse_poly("chi1 - 2*chi2", &chi, 1, 1).unwrap();
    let quoted_gb = buchberger(&chi, &[quoted]).unwrap();
    ensure!(
        !ideal_equal(&ann, &quoted_gb).unwrap(),
        "(chi1 - 2*chi2) unexpectedly matches; the correction would be moot"
    );
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 5.0, "took {secs:.1}s, budget is 5s");
    Ok(format!(
        "t1 = I, t2 = 2I, Ann = (2*chi1 - chi2) as an ideal (sign-corrected, grid-pinned), {secs:.2}s"
    ))
}

/// Worked example 2 over Q and F_5: the three annihilators and the
/// displayed diagonal operator matrices, entrywise.
fn criterion_2() -> Check {
    let start = Instant::now();
    for field in [FieldSpec::Rational, FieldSpec::Prime(5)] {
        let c = ex2_c(field);
        let d = ex2_d(field);
        let ops_c = eisenbud_operators(&c).map_err(|e| e.to_string())?.ops;
        let shown: Vec<String> = ops_c.iter().map(|t| t.mats[0].to_string()).collect();
        ensure!(
            shown == ["[[1, 0], [0, 0]]", "[[0, 0], [0, 1]]", "[[0, 0], [0, 0]]"],
            "operators of C over {field:?} are {shown:?}"
        );
        let ops_d = eisenbud_operators(&d).map_err(|e| e.to_string())?.ops;
        let shown_d: Vec<String> = ops_d.iter().map(|t| t.mats[0].to_string()).collect();
        ensure!(
            shown_d == ["[[1, 0], [0, 0]]", "[[0, 0], [0, 0]]", "[[0, 0], [0, 1]]"],
            "operators of D over {field:?} are {shown_d:?}"
        );
        ensure!(
            gens_of(&ann_of(&c, &c)) == ["chi1*chi2", "chi3"],
            "Ann(C,C) over {field:?} is {:?}",
            gens_of(&ann_of(&c, &c))
        );
        ensure!(
            gens_of(&ann_of(&d, &d)) == ["chi1*chi3", "chi2"],
            "Ann(D,D) over {field:?} is {:?}",
            gens_of(&ann_of(&d, &d))
        );
        ensure!(
            gens_of(&ann_of(&c, &d)) == ["chi3", "chi2"],
            "Ann(C,D) over {field:?} is {:?}",
            gens_of(&ann_of(&c, &d))
        );
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 10.0, "took {secs:.1}s, budget is 10s");
    Ok(format!(
        "operators diag(1,0)/diag(0,1)/0 and diag(1,0)/0/diag(0,1); Ann(C,C), Ann(D,D), Ann(C,D) exact over Q and F_5, {secs:.2}s"
    ))
}

/// Rank-variety membership vs ideal evaluation at every nonzero grid
/// point, for both worked examples over F_5 and F_7.
fn criterion_3() -> Check {
    let start = Instant::now();
    let cases: [(PeriodicComplex, usize); 4] = [
        (clifford(FieldSpec::Prime(5), "2"), 24),
        (clifford(FieldSpec::Prime(7), "3"), 48),
        (ex2_c(FieldSpec::Prime(5)), 124),
        (ex2_c(FieldSpec::Prime(7)), 342),
    ];
    let mut seen = Vec::new();
    for (cx, expect) in &cases {
        let p = match cx.ring.poly_ring.field {
            FieldSpec::Prime(p) => p,
            _ => unreachable!(),
        };
        let e = build_e(cx, cx, 1).map_err(|e| e.to_string())?;
        let chi = chi_ring(e.field(), e.num_ops()).unwrap();
        let ann = annihilator(&e, &chi).map_err(|e| e.to_string())?;
        let rep = crosscheck_avrunin_scott(&e, &ann, p).map_err(|e| e.to_string())?;
        ensure!(
            rep.total == *expect,
            "grid over F_{p} has {} points, expected {expect}",
            rep.total
        );
        ensure!(
            rep.ok(),
            "{} of {} grid points disagree over F_{p}: {:?}",
            rep.total - rep.agree,
            rep.total,
            rep.disagreements
        );
        seen.push(format!("{}/{}", rep.agree, rep.total));
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(format!("grids agree: {} , {secs:.2}s", seen.join(", ")))
}

/// Lifted cones over the randomized corpus: d^2 = 0 over the intermediate
/// ring, and reducing the lifted cone recovers the mapping cone of the
/// operator entrywise.
fn criterion_4() -> Check {
    let start = Instant::now();
    let items = corpus();
    ensure!(items.len() >= 100, "corpus has only {} items", items.len());
    for item in &items {
        let s = single_operator(&item.complex)
            .map_err(|e| format!("{}: {e}", item.name))?;
        let cone = lifted_cone(&item.complex, &s)
            .map_err(|e| format!("{}: lifted cone failed ({e})", item.name))?;
        let reduced = s_functor(&cone.result, &item.complex.ring)
            .map_err(|e| format!("{}: {e}", item.name))?;
        let plain = mapping_cone(&s.op).map_err(|e| format!("{}: {e}", item.name))?;
        ensure!(
            reduced.diffs == plain.diffs,
            "{}: reduced lifted cone differs from the mapping cone",
            item.name
        );
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(format!(
        "{} lifted cones square to zero and reduce to mapping cones entrywise, {secs:.2}s",
        items.len()
    ))
}

/// Operator laws over the corpus: strict chain maps, and pairwise
/// commutation up to re-verified homotopy witnesses.
fn criterion_5() -> Check {
    let start = Instant::now();
    let items = corpus();
    let mut strict_pairs = 0usize;
    let mut witnessed_pairs = 0usize;
    for item in &items {
        let ops = eisenbud_operators(&item.complex)
            .map_err(|e| format!("{}: extraction failed ({e})", item.name))?
            .ops;
        for t in &ops {
            t.verify().map_err(|e| format!("{}: operator not strict ({e})", item.name))?;
        }
        let rep = verify_operator_commutation(&ops)
            .map_err(|e| format!("{}: {e}", item.name))?;
        strict_pairs += rep.strict.len();
        witnessed_pairs += rep.witnesses.len();
    }
    ensure!(
        witnessed_pairs > 0,
        "no pair needed a homotopy witness; the corpus is too tame to exercise the law"
    );
    let secs = start.elapsed().as_secs_f64();
    Ok(format!(
        "{} complexes: every operator strict; {strict_pairs} pairs commute strictly, {witnessed_pairs} via re-verified homotopies, {secs:.2}s",
        items.len()
    ))
}

/// E = 0 iff all chi_k are nilpotent on E, over the corpus and against
/// hand-built contractible targets.
fn criterion_6() -> Check {
    let start = Instant::now();
    let items = corpus();
    let mut zero_cases = 0usize;
    for item in &items {
        let e = build_e(&item.complex, &item.complex, 1)
            .map_err(|e| format!("{}: {e}", item.name))?;
        let sv = support_variety(&e).map_err(|e| format!("{}: {e}", item.name))?;
        let rep = dade_test(&e, &sv.ann).map_err(|e| format!("{}: {e}", item.name))?;
        ensure!(
            rep.agree(),
            "{}: flags disagree (e_zero = {}, chi_nilpotent = {})",
            item.name,
            rep.e_zero,
            rep.chi_nilpotent
        );
        if rep.e_zero {
            zero_cases += 1;
        }
    }
    let mut contractible_cases = 0usize;
    for item in items.iter().take(5) {
        let id = ChainMap::identity(&item.complex).map_err(|e| e.to_string())?;
        let cone = mapping_cone(&id).map_err(|e| e.to_string())?;
        let e = build_e(&item.complex, &cone, 1).map_err(|e| e.to_string())?;
        ensure!(e.total_dim() == 0, "{}: hom into cone(id) is nonzero", item.name);
        let sv = support_variety(&e).map_err(|e| e.to_string())?;
        let rep = dade_test(&e, &sv.ann).map_err(|e| e.to_string())?;
        ensure!(rep.agree() && rep.e_zero, "{}: contractible target flags wrong", item.name);
        contractible_cases += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(format!(
        "flags agree on {} corpus cases ({zero_cases} with E = 0) and {contractible_cases} contractible targets, {secs:.2}s",
        items.len()
    ))
}

fn grid_points(field: FieldSpec, range: u64, c: usize) -> Vec<Vec<FieldElement>> {
    let total = range.pow(c as u32);
    let mut out = Vec::new();
    for idx in 1..total {
        let mut rem = idx;
        let mut coords = vec![field.zero(); c];
        for slot in (0..c).rev() {
            coords[slot] = field.from_i64((rem % range) as i64);
            rem /= range;
        }
        if coords.iter().all(|x| x.is_zero()) {
            continue;
        }
        out.push(coords);
    }
    out
}

/// V(C,D) = V(C,C) ∩ V(D,D) on the grid for 20 corpus pairs, plus the
/// exact ideals for the worked example pair.
fn criterion_7() -> Check {
    let start = Instant::now();
    let pairs = generate_pairs(FieldSpec::Prime(5), 20, CORPUS_SEED + 1).unwrap();
    ensure!(pairs.len() >= 20, "only {} pairs", pairs.len());
    let mut distinct = 0usize;
    for (i, (c, d, _alpha)) in pairs.iter().enumerate() {
        if c != d {
            distinct += 1;
        }
        let ann_cc = ann_of(c, c);
        let ann_dd = ann_of(d, d);
        let ann_cd = ann_of(c, d);
        let nvars = c.ring.num_relations();
        for pt in grid_points(FieldSpec::Prime(5), 5, nvars) {
            let in_cd = zero_set_contains(&ann_cd, &pt).unwrap();
            let in_both = zero_set_contains(&ann_cc, &pt).unwrap()
                && zero_set_contains(&ann_dd, &pt).unwrap();
            ensure!(
                in_cd == in_both,
                "pair {i}: V(C,D) and V(C,C) ∩ V(D,D) part ways at {pt:?}"
            );
        }
    }
    let c5 = ex2_c(FieldSpec::Prime(5));
    let d5 = ex2_d(FieldSpec::Prime(5));
    ensure!(
        gens_of(&ann_of(&c5, &d5)) == ["chi3", "chi2"],
        "example pair ideal is {:?}",
        gens_of(&ann_of(&c5, &d5))
    );
    let secs = start.elapsed().as_secs_f64();
    Ok(format!(
        "intersection law holds at every F_5 grid point for {} pairs ({distinct} with distinct complexes); example pair ideal exact, {secs:.2}s",
        pairs.len()
    ))
}

/// Support varieties transform linearly under invertible changes of the
/// relation sequence: V' = (A^{-1})^T · V on the full grid.
fn criterion_8() -> Check {
    use rand::{Rng, SeedableRng};
    let start = Instant::now();
    let field = FieldSpec::Prime(7);
    let c = clifford(field, "3");
    let ann_old = ann_of(&c, &c);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut done = 0usize;
    while done < 10 {
        let mut a = KMat::zeros(field, 2, 2);
        for i in 0..2 {
            for j in 0..2 {
                a.set(i, j, field.from_i64(rng.gen_range(0..7)));
            }
        }
        let inv = match a.inverse().unwrap() {
            Some(m) => m,
            None => continue,
        };
        let outcome = basis_change_operators(&c, &a).map_err(|e| e.to_string())?;
        let ann_new = ann_of(&outcome.complex, &outcome.complex);
        for b in grid_points(field, 7, 2) {
            // b' = (A^{-1})^T b, i.e. b'_i = sum_j inv[j][i] * b_j
            let mut bp = vec![field.zero(); 2];
            for i in 0..2 {
                for (j, bj) in b.iter().enumerate() {
                    bp[i] = bp[i].add(&inv.get(j, i).mul(bj).unwrap()).unwrap();
                }
            }
            let lhs = zero_set_contains(&ann_new, &bp).unwrap();
            let rhs = zero_set_contains(&ann_old, &b).unwrap();
            ensure!(
                lhs == rhs,
                "A = {:?}: point {b:?} maps to {bp:?} but membership flips",
                outcome.matrix
            );
        }
        done += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(format!(
        "10 random invertible changes of relations: V' = (A^-1)^T V at all 48 grid points each, {secs:.2}s"
    ))
}

/// Byte-identical output across consecutive runs and with the Groebner
/// cache on or off.
fn criterion_9() -> Check {
    #[derive(Default)]
    struct MemCache(std::sync::Mutex<std::collections::HashMap<String, Vec<u8>>>);
    impl GbCache for MemCache {
        fn lookup(&self, key: &str) -> Option<Vec<u8>> {
            self.0.lock().unwrap().get(key).cloned()
        }
        fn store(&self, key: &str, bytes: &[u8]) {
            self.0.lock().unwrap().insert(key.to_string(), bytes.to_vec());
        }
    }

    let start = Instant::now();
    let session = parse_session(EX1_SESSION).map_err(|e| e.to_string())?;
    let opts = RunOptions::default();
    let first = run_session(&session, &opts).map_err(|e| e.to_string())?;
    let second = run_session(&session, &opts).map_err(|e| e.to_string())?;
    ensure!(first == second, "two consecutive runs differ");
    let cache = Arc::new(MemCache::default());
    let cold = with_gb_cache(cache.clone(), || run_session(&session, &opts))
        .map_err(|e| e.to_string())?;
    let warm =
        with_gb_cache(cache, || run_session(&session, &opts)).map_err(|e| e.to_string())?;
    ensure!(first == cold, "cached (cold) output differs from uncached");
    ensure!(first == warm, "cached (warm) output differs from uncached");
    let json_opts = RunOptions { json: true, ..Default::default() };
    let j1 = run_session(&session, &json_opts).map_err(|e| e.to_string())?;
    let j2 = run_session(&session, &json_opts).map_err(|e| e.to_string())?;
    ensure!(j1 == j2, "JSON runs differ");
    let secs = start.elapsed().as_secs_f64();
    Ok(format!("text and JSON byte-identical across runs and cache modes, {secs:.2}s"))
}

#[test]
fn acceptance() {
    let suite_start = Instant::now();
    let criteria: Vec<(usize, fn() -> Check)> = vec![
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut lines = Vec::new();
    let mut failures = 0usize;
    for (n, f) in criteria {
        let outcome = std::panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".to_string());
            Err(msg)
        });
        let line = match outcome {
            Ok(detail) => format!("criterion {n}: PASS — {detail}"),
            Err(detail) => {
                failures += 1;
                format!("criterion {n}: FAIL — {detail}")
            }
        };
        println!("{line}");
        lines.push(line);
    }
    let total = suite_start.elapsed().as_secs_f64();
    println!("acceptance total: {total:.1}s");
    assert!(
        failures == 0,
        "{failures} criteria failed:\n{}",
        lines.join("\n")
    );
    assert!(total < 120.0, "suite took {total:.1}s, budget is 120s");
}
