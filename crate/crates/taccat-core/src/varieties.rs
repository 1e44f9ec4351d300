//! The graded module E = ⊕_i Hom(C, Σ^i D) ⊗ k over k[χ_1..χ_c], its
//! annihilator, and the support/rank variety machinery built on it.
//!
//! Over the Artinian complete intersection R the homotopy category of
//! totally acyclic complexes is equivalent to the stable module category
//! (R is self-injective), so the degree-i piece is computed as the stable
//! hom of cycle modules: E_i = \underline{Hom}(Z_{i-1}C, Z_{-1}D) ⊗ k.
//! This sees every chain map, not only the ones periodic with the
//! presented period — maps between twisted presentations (d = x·M with M
//! invertible, say) are genuinely non-periodic and a windowed chain-map
//! solve silently misses them.  Z_jC is presented by generators C_{j+1}
//! and relations d_{j+2}, so a stable hom is a matrix pair (φ₀, θ) with
//! φ₀·d^C = d^D·θ — one rung of a lift — modulo maps into the free cover
//! (ω·d^C = 0), relation shifts d^D·σ, and m-multiples.  The χ_k act by
//! precomposition with the Eisenbud operators of the source.

use crate::complexes::{ChainMap, PeriodicComplex};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::groebner::{buchberger, radical_membership, GroebnerBasis};
use crate::linalg::{KMat, QuotientSpace};
use crate::operators::eisenbud_operators;
use crate::poly::{Monomial, PolyRing, Polynomial, RingRc};
use crate::rings::RMatrix;
use num_integer::Integer;

/// One graded piece E_i: representatives are generator-level matrices
/// φ₀: C_i -> D_0 of stable homs Z_{i-1}C -> Z_{-1}D.
pub struct EDegree {
    pub quotient: QuotientSpace,
    pub reps: Vec<RMatrix>,
}

pub struct GradedHomModule {
    pub source: PeriodicComplex,
    pub target: PeriodicComplex,
    /// Window length W: degrees are computed for 0..W and repeat thereafter.
    pub window: usize,
    pub multiple: usize,
    pub dims: Vec<usize>,
    pub degrees: Vec<EDegree>,
    /// Eisenbud operators of the source complex.
    pub ops: Vec<ChainMap>,
    /// actions[k][i]: the matrix of χ_k: E_i -> E_{(i+2) mod W}.
    pub actions: Vec<Vec<KMat>>,
}

impl GradedHomModule {
    pub fn num_ops(&self) -> usize {
        self.ops.len()
    }

    pub fn dim_at(&self, i: i64) -> usize {
        self.dims[i.rem_euclid(self.window as i64) as usize]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn field(&self) -> FieldSpec {
        self.source.ring.poly_ring.field
    }
}

fn paste_block(dst: &mut KMat, r0: usize, c0: usize, block: &KMat) {
    for r in 0..block.rows {
        for c in 0..block.cols {
            dst.set(r0 + r, c0 + c, block.get(r, c).clone());
        }
    }
}

fn e_degree(c: &PeriodicComplex, d: &PeriodicComplex, i: i64) -> Result<EDegree> {
    let ring = c.ring.clone();
    let field = ring.poly_ring.field;
    let delta = ring.dim_k().ok_or(Error::NotArtinian)?;
    let rc0 = c.rank_at(i);
    let rc1 = c.rank_at(i + 1);
    let rd0 = d.rank_at(0);
    let rd1 = d.rank_at(1);
    let a = c.diff_at(i + 1); // relations of Z_{i-1}C, into its generators
    let b = d.diff_at(1); // relations of Z_{-1}D

    // unknowns: φ₀ (rd0 × rc0), then θ (rd1 × rc1); equation φ₀·a = b·θ
    let phi_len = rd0 * rc0 * delta;
    let theta_len = rd1 * rc1 * delta;
    let eq_rows = rd0 * rc1 * delta;
    let mut sys = KMat::zeros(field, eq_rows, phi_len + theta_len);
    paste_block(&mut sys, 0, 0, &a.right_mult_operator(rd0)?);
    paste_block(&mut sys, 0, phi_len, &b.left_mult_operator(rc1)?.neg());
    let solutions = sys.kernel_basis()?;
    let candidates: Vec<Vec<FieldElement>> =
        solutions.iter().map(|v| v[..phi_len].to_vec()).collect();

    // trivial stably: factoring through the free cover of the target …
    let mut sub = a.right_mult_operator(rd0)?.kernel_basis()?;
    // … off by a relation of the target …
    let sigma_images = b.left_mult_operator(rc0)?;
    for col in 0..sigma_images.cols {
        sub.push(sigma_images.col(col));
    }
    // … or an m-multiple of a solution
    let kbasis: Vec<Monomial> = ring.kbasis()?.to_vec();
    for cand in &candidates {
        let phi = RMatrix::from_vector(&ring, rd0, rc0, cand)?;
        for mono in kbasis.iter().filter(|m| !m.is_one()) {
            let u = crate::rings::RingElement::new(
                &ring,
                &Polynomial::monomial(&ring.poly_ring, mono.clone(), field.one()),
            )?;
            sub.push(phi.scale(&u)?.vectorize()?);
        }
    }

    let (quotient, idx) = QuotientSpace::build(field, phi_len, &candidates, &sub)?;
    let reps = idx
        .iter()
        .map(|&j| RMatrix::from_vector(&ring, rd0, rc0, &candidates[j]))
        .collect::<Result<Vec<_>>>()?;
    Ok(EDegree { quotient, reps })
}

/// Class of a generator-level matrix in the given graded piece.
fn class_in(deg: &EDegree, mat: &RMatrix) -> Result<Vec<FieldElement>> {
    let v = mat.vectorize()?;
    deg.quotient
        .coords(&v)?
        .ok_or_else(|| Error::Internal("matrix does not lie in the computed stable-hom span".into()))
}

pub fn build_e(c: &PeriodicComplex, d: &PeriodicComplex, multiple: usize) -> Result<GradedHomModule> {
    let ops = eisenbud_operators(c)?.ops;
    let multiple = multiple.max(1);
    let l_eff = c.period.lcm(&d.period) * multiple;
    let window = l_eff.lcm(&2usize);
    let field = c.ring.poly_ring.field;

    let mut degrees = Vec::with_capacity(window);
    for i in 0..window {
        degrees.push(e_degree(c, d, i as i64)?);
    }
    let dims: Vec<usize> = degrees.iter().map(|e| e.reps.len()).collect();

    // χ_k: piece i -> piece i+2 sends φ₀ to φ₀ · (t_k at rung i+2), the
    // generator-level matrix of precomposition with the induced cycle map
    // t̄_k: Z_{i+1}C -> Z_{i-1}C
    let mut actions: Vec<Vec<KMat>> = Vec::with_capacity(ops.len());
    for op in &ops {
        let mut per_degree = Vec::with_capacity(window);
        for i in 0..window {
            let ti = (i + 2) % window;
            let rung = op.mat_at(i as i64 + 2);
            let mut m = KMat::zeros(field, dims[ti], dims[i]);
            for (col, rep) in degrees[i].reps.iter().enumerate() {
                let w = rep.mul(&rung)?;
                let coords = class_in(&degrees[ti], &w)?;
                for (row, val) in coords.iter().enumerate() {
                    m.set(row, col, val.clone());
                }
            }
            per_degree.push(m);
        }
        actions.push(per_degree);
    }

    // induced actions commute exactly on E even when the operators only
    // commute up to homotopy; verify pairwise
    for k in 0..actions.len() {
        for j in k + 1..actions.len() {
            for i in 0..window {
                let ti = (i + 2) % window;
                let a = actions[j][ti].mul(&actions[k][i])?;
                let b = actions[k][ti].mul(&actions[j][i])?;
                if a != b {
                    return Err(Error::CommutationFailure { i: k, j });
                }
            }
        }
    }

    Ok(GradedHomModule {
        source: c.clone(),
        target: d.clone(),
        window,
        multiple,
        dims,
        degrees,
        ops,
        actions,
    })
}

/// The coefficient ring k[chi1..chic] with the default order.
pub fn chi_ring(field: FieldSpec, c: usize) -> Result<RingRc> {
    let names: Vec<String> = (1..=c).map(|k| format!("chi{k}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    PolyRing::default_grevlex(field, &refs)
}

fn monomials_of_degree(ring: &RingRc, deg: u32) -> Vec<Monomial> {
    let n = ring.nvars();
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(n: usize, left: u32, var: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if var + 1 == n {
            cur[var] = left;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[var] = e;
            rec(n, left - e, var + 1, cur, out);
        }
        cur[var] = 0;
    }
    if n == 0 {
        return out;
    }
    rec(n, deg, 0, &mut cur, &mut out);
    out.sort_by(|a, b| ring.order.cmp(a, b));
    out
}

/// Matrix of the monomial χ^a acting E_i -> E_{i + 2|a|}, variables applied
/// in ascending order (the induced actions commute, so the order is pure
/// convention).
fn composite_action(e: &GradedHomModule, mono: &Monomial, i: usize) -> Result<KMat> {
    let field = e.field();
    let mut m = KMat::identity(field, e.dims[i]);
    let mut res = i;
    for (k, &exp) in mono.0.iter().enumerate() {
        for _ in 0..exp {
            m = e.actions[k][res].mul(&m)?;
            res = (res + 2) % e.window;
        }
    }
    Ok(m)
}

/// Annihilator of E in k[χ], by escalating homogeneous degree: at each
/// degree the kernel of the stacked monomial actions is added, and the
/// search stops once the reduced basis has been unchanged for more than a
/// full window of consecutive degrees past degree zero.  (Degree zero never
/// contributes and must not count toward the streak: with a window of 2 it
/// would otherwise end the search before degree 2, silently dropping purely
/// quadratic annihilators such as χ₁χ₂ for a sum of complexes supported on
/// different axes.)  Every generator is re-verified to kill E exactly.
pub fn annihilator(e: &GradedHomModule, chi: &RingRc) -> Result<GroebnerBasis> {
    let c = e.num_ops();
    if chi.nvars() != c {
        return Err(Error::shape("chi ring arity vs operator count"));
    }
    if chi.field != e.field() {
        return Err(Error::RingMismatch);
    }
    let field = e.field();
    if e.total_dim() == 0 {
        return buchberger(chi, &[Polynomial::one(chi)]);
    }
    let w = e.window;
    let cap = 6 * w + 6 * c + 6;
    let need = w.max(2) + 1;
    let mut gens: Vec<Polynomial> = Vec::new();
    let mut gb = buchberger(chi, &[])?;
    let mut quiet = 0usize;
    for deg in 0..=cap {
        let monos = monomials_of_degree(chi, deg as u32);
        let row_count: usize = (0..w).map(|i| e.dims[(i + 2 * deg) % w] * e.dims[i]).sum();
        let mut system = KMat::zeros(field, row_count, monos.len());
        for (mi, mono) in monos.iter().enumerate() {
            let mut row0 = 0usize;
            for i in 0..w {
                let a = composite_action(e, mono, i)?;
                for r in 0..a.rows {
                    for cc in 0..a.cols {
                        system.set(row0 + r * a.cols + cc, mi, a.get(r, cc).clone());
                    }
                }
                row0 += a.rows * a.cols;
            }
        }
        let mut added = false;
        for kv in system.kernel_basis()? {
            let mut p = Polynomial::zero(chi);
            for (mi, coef) in kv.iter().enumerate() {
                if !coef.is_zero() {
                    p = p.add(&Polynomial::monomial(chi, monos[mi].clone(), coef.clone()))?;
                }
            }
            if !p.is_zero() && !gb.contains(&p)? {
                gens.push(p);
                added = true;
            }
        }
        if added {
            gb = buchberger(chi, &gens)?;
            quiet = 0;
        } else if deg >= 1 {
            quiet += 1;
            if quiet >= need {
                verify_kills(e, &gb)?;
                return Ok(gb);
            }
        }
    }
    Err(Error::StabilizationNotDetected { window: cap })
}

/// Exact soundness check: every basis element of the claimed annihilator
/// acts as zero on every graded piece.
fn verify_kills(e: &GradedHomModule, gb: &GroebnerBasis) -> Result<()> {
    for g in &gb.gens {
        for i in 0..e.window {
            let mut acc: Option<KMat> = None;
            for (mono, coef) in g.terms() {
                let a = composite_action(e, mono, i)?.scale(coef)?;
                acc = Some(match acc {
                    None => a,
                    Some(prev) => prev.add(&a)?,
                });
            }
            if let Some(total) = acc {
                if !total.is_zero() {
                    return Err(Error::Internal(
                        "annihilator element does not kill the module".into(),
                    ));
                }
            }
        }
    }
    Ok(())
}

pub struct SupportVariety {
    pub chi: RingRc,
    pub ann: GroebnerBasis,
    pub zero_set: String,
}

pub fn support_variety(e: &GradedHomModule) -> Result<SupportVariety> {
    let chi = chi_ring(e.field(), e.num_ops())?;
    let ann = annihilator(e, &chi)?;
    let zero_set = describe_zero_set(&ann)?;
    Ok(SupportVariety { chi, ann, zero_set })
}

/// Whether a point lies in the zero set of the ideal (all generators vanish).
pub fn zero_set_contains(gb: &GroebnerBasis, point: &[FieldElement]) -> Result<bool> {
    for g in &gb.gens {
        if !g.evaluate(point)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Human-readable description of Z(ann) for the shapes that actually occur
/// at desk scale: everything, the origin, unions of coordinate subspaces,
/// and lines in the plane; anything else is left symbolic.
pub fn describe_zero_set(gb: &GroebnerBasis) -> Result<String> {
    let c = gb.ring.nvars();
    let vars = &gb.ring.vars;
    if gb.gens.is_empty() {
        return Ok(format!("k^{c}"));
    }
    if gb.gens.len() == 1 && gb.gens[0].total_degree() == Some(0) {
        return Ok("{0}".to_string());
    }
    if gb.gens.iter().all(|g| g.terms().len() == 1) {
        // union of coordinate subspaces: minimal var sets hitting every monomial
        let mut minimal: Vec<Vec<usize>> = Vec::new();
        for mask in 0u32..(1 << c) {
            let set: Vec<usize> = (0..c).filter(|&v| mask & (1 << v) != 0).collect();
            let covers = gb.gens.iter().all(|g| {
                let (m, _) = g.leading().unwrap();
                set.iter().any(|&v| m.0[v] > 0)
            });
            if covers && !minimal.iter().any(|s| s.iter().all(|v| set.contains(v))) {
                minimal.push(set);
            }
        }
        let parts: Vec<String> = minimal
            .iter()
            .map(|s| {
                let eqs: Vec<&str> = s.iter().map(|&v| vars[v].as_str()).collect();
                format!("{{{} = 0}}", eqs.join(" = "))
            })
            .collect();
        return Ok(parts.join(" ∪ "));
    }
    if c == 2 && gb.gens.len() == 1 && gb.gens[0].total_degree() == Some(1) {
        // a line through the origin in the plane
        let g = &gb.gens[0];
        let coef = |v: usize| -> FieldElement {
            for (m, cf) in g.terms() {
                if m.0[v] > 0 {
                    return cf.clone();
                }
            }
            gb.ring.field.zero()
        };
        let a = coef(0);
        let b = coef(1);
        if b.is_zero() {
            return Ok(format!("{{(0, a)}}"));
        }
        let slope = a.neg().div(&b)?;
        if slope.is_zero() {
            return Ok("{(a, 0)}".to_string());
        }
        let one = gb.ring.field.one();
        return Ok(if slope == one {
            "{(a, a)}".to_string()
        } else {
            format!("{{(a, {slope}*a)}}")
        });
    }
    let joined: Vec<String> = gb.gens.iter().map(|g| g.to_string()).collect();
    Ok(format!("Z({})", joined.join(", ")))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankPoint {
    pub coords: Vec<FieldElement>,
}

impl RankPoint {
    pub fn new(coords: Vec<FieldElement>) -> Result<RankPoint> {
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroPoint);
        }
        Ok(RankPoint { coords })
    }
}

/// Rank-variety membership of a nonzero point: complete a to a basis (unit
/// rows for every coordinate except the first nonzero one, a itself last),
/// transform the operator actions by the inverse, and test whether E
/// survives modulo the images of the complementary c-1 transformed
/// operators in some degree of a full window.
pub fn rank_membership(e: &GradedHomModule, a: &RankPoint) -> Result<bool> {
    let c = e.num_ops();
    if a.coords.len() != c {
        return Err(Error::shape("rank point arity vs operator count"));
    }
    let field = e.field();
    let pivot = a
        .coords
        .iter()
        .position(|x| !x.is_zero())
        .expect("nonzero by construction");
    let mut rows = Vec::with_capacity(c);
    for j in 0..c {
        if j == pivot {
            continue;
        }
        let mut r = vec![field.zero(); c];
        r[j] = field.one();
        rows.push(r);
    }
    rows.push(a.coords.clone());
    rank_membership_with(e, &KMat::from_rows(field, rows)?)
}

/// Same test with a caller-chosen completion matrix whose last row spans
/// the direction under test; the answer is independent of the completion.
pub fn rank_membership_with(e: &GradedHomModule, b: &KMat) -> Result<bool> {
    let c = e.num_ops();
    if b.rows != c || b.cols != c {
        return Err(Error::shape("completion matrix shape vs operator count"));
    }
    let field = e.field();
    let binv = b
        .inverse()?
        .ok_or_else(|| Error::Internal("completion matrix must be invertible".into()))?;

    let w = e.window;
    // transformed actions for the non-last columns of B⁻¹
    let mut transformed: Vec<Vec<KMat>> = Vec::with_capacity(c.saturating_sub(1));
    for j in 0..c.saturating_sub(1) {
        let mut per_degree = Vec::with_capacity(w);
        for res in 0..w {
            let ti = (res + 2) % w;
            let mut m = KMat::zeros(field, e.dims[ti], e.dims[res]);
            for (k, act) in e.actions.iter().enumerate() {
                m = m.add(&act[res].scale(binv.get(k, j))?)?;
            }
            per_degree.push(m);
        }
        transformed.push(per_degree);
    }
    for res in 0..w {
        if e.dims[res] == 0 {
            continue;
        }
        let src = (res + w - 2) % w;
        let mut stacked = KMat::zeros(field, e.dims[res], 0);
        for t in &transformed {
            stacked = stacked.hstack(&t[src])?;
        }
        if stacked.rank()? < e.dims[res] {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub total: usize,
    pub agree: usize,
    pub disagreements: Vec<Vec<i64>>,
}

impl CrosscheckReport {
    pub fn ok(&self) -> bool {
        self.disagreements.is_empty()
    }
}

fn grid_points(c: usize, range: u64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; c];
    fn rec(c: usize, range: u64, var: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if var == c {
            if cur.iter().any(|&x| x != 0) {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..range as i64 {
            cur[var] = v;
            rec(c, range, var + 1, cur, out);
        }
        cur[var] = 0;
    }
    rec(c, range, 0, &mut cur, &mut out);
    out
}

/// Grid agreement between rank membership and ideal-evaluation membership
/// at every nonzero point with coordinates in 0..range.
pub fn crosscheck_avrunin_scott(
    e: &GradedHomModule,
    ann: &GroebnerBasis,
    range: u64,
) -> Result<CrosscheckReport> {
    let c = e.num_ops();
    let field = e.field();
    let mut report = CrosscheckReport { total: 0, agree: 0, disagreements: vec![] };
    for pt in grid_points(c, range) {
        let coords: Vec<FieldElement> = pt.iter().map(|&v| field.from_i64(v)).collect();
        if coords.iter().all(|c| c.is_zero()) {
            continue; // collapsing under a small characteristic
        }
        let by_rank = rank_membership(e, &RankPoint::new(coords.clone())?)?;
        let by_ideal = zero_set_contains(ann, &coords)?;
        report.total += 1;
        if by_rank == by_ideal {
            report.agree += 1;
        } else {
            report.disagreements.push(pt);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DadeReport {
    /// E vanishes identically over the window.
    pub e_zero: bool,
    /// Every χ_k lies in the radical of the annihilator (variety is {0}).
    pub chi_nilpotent: bool,
}

impl DadeReport {
    pub fn agree(&self) -> bool {
        self.e_zero == self.chi_nilpotent
    }
}

/// Couples the two triviality detections: vanishing of E and triviality of
/// the support variety.
pub fn dade_test(e: &GradedHomModule, ann: &GroebnerBasis) -> Result<DadeReport> {
    let e_zero = e.total_dim() == 0;
    let mut chi_nilpotent = true;
    for k in 0..ann.ring.nvars() {
        let var = Polynomial::var(&ann.ring, k);
        if !radical_membership(&var, ann)? {
            chi_nilpotent = false;
            break;
        }
    }
    Ok(DadeReport { e_zero, chi_nilpotent })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGenReport {
    /// Per window degree: E_i is covered by Σ_k χ_k E_{i-2}.
    pub surjective: Vec<bool>,
    /// 0 when E = 0, 2 when every degree is covered from below, None when
    /// coverage fails somewhere (finite generation not detectable in the
    /// periodic model).
    pub generation_degree: Option<usize>,
}

pub fn finite_generation_report(e: &GradedHomModule) -> Result<FinGenReport> {
    let field = e.field();
    let w = e.window;
    if e.total_dim() == 0 {
        return Ok(FinGenReport { surjective: vec![true; w], generation_degree: Some(0) });
    }
    let mut surjective = Vec::with_capacity(w);
    for res in 0..w {
        let src = (res + w - 2) % w;
        let mut stacked = KMat::zeros(field, e.dims[res], 0);
        for act in &e.actions {
            stacked = stacked.hstack(&act[src])?;
        }
        surjective.push(stacked.rank()? == e.dims[res]);
    }
    let generation_degree = if surjective.iter().all(|&s| s) { Some(2) } else { None };
    Ok(FinGenReport { surjective, generation_degree })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CalculusReport {
    pub grid_total: usize,
    /// V(C,D) = V(C,C) ∩ V(D,D) at every grid point.
    pub intersection_ok: bool,
    /// Generators of Ann(C,D) lie in the radical of Ann(C,C) + Ann(D,D).
    pub radical_forward: bool,
    /// Generators of Ann(C,C) and Ann(D,D) lie in the radical of Ann(C,D).
    pub radical_backward: bool,
    /// Triangle inclusions for C -> D -> cone: each vertex's variety inside
    /// the union of the other two, on the grid.
    pub triangle_ok: [bool; 3],
}

/// The variety calculus exercised on one pair and one connecting map.
pub fn variety_calculus_suite(
    c: &PeriodicComplex,
    d: &PeriodicComplex,
    alpha: &ChainMap,
    range: u64,
) -> Result<CalculusReport> {
    if alpha.source != *c || alpha.target != *d || alpha.degree != 0 {
        return Err(Error::shape("connecting map must be a degree-0 map C -> D"));
    }
    let e_cc = build_e(c, c, 1)?;
    let e_dd = build_e(d, d, 1)?;
    let e_cd = build_e(c, d, 1)?;
    let chi = chi_ring(e_cc.field(), e_cc.num_ops())?;
    let ann_cc = annihilator(&e_cc, &chi)?;
    let ann_dd = annihilator(&e_dd, &chi)?;
    let ann_cd = annihilator(&e_cd, &chi)?;

    let cone = crate::complexes::mapping_cone(alpha)?;
    let e_nn = build_e(&cone, &cone, 1)?;
    let ann_nn = annihilator(&e_nn, &chi)?;

    let field = e_cc.field();
    let nvars = chi.nvars();
    let mut intersection_ok = true;
    let mut triangle_ok = [true; 3];
    let pts = grid_points(nvars, range);
    let mut grid_total = 0usize;
    for pt in &pts {
        let coords: Vec<FieldElement> = pt.iter().map(|&v| field.from_i64(v)).collect();
        if coords.iter().all(|c| c.is_zero()) {
            continue;
        }
        grid_total += 1;
        let in_cc = zero_set_contains(&ann_cc, &coords)?;
        let in_dd = zero_set_contains(&ann_dd, &coords)?;
        let in_cd = zero_set_contains(&ann_cd, &coords)?;
        let in_nn = zero_set_contains(&ann_nn, &coords)?;
        if in_cd != (in_cc && in_dd) {
            intersection_ok = false;
        }
        if in_nn && !(in_cc || in_dd) {
            triangle_ok[0] = false;
        }
        if in_dd && !(in_cc || in_nn) {
            triangle_ok[1] = false;
        }
        if in_cc && !(in_dd || in_nn) {
            triangle_ok[2] = false;
        }
    }

    let mut union_gens = ann_cc.input.clone();
    union_gens.extend(ann_dd.input.clone());
    let union_gb = buchberger(&chi, &union_gens)?;
    let mut radical_forward = true;
    for g in &ann_cd.gens {
        if !radical_membership(g, &union_gb)? {
            radical_forward = false;
        }
    }
    let mut radical_backward = true;
    for g in ann_cc.gens.iter().chain(ann_dd.gens.iter()) {
        if !radical_membership(g, &ann_cd)? {
            radical_backward = false;
        }
    }

    Ok(CalculusReport {
        grid_total,
        intersection_ok,
        radical_forward,
        radical_backward,
        triangle_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_matrix, parse_poly};
    use crate::rings::{make_ci_ring, RMatrix};

    fn complex_over(
        field: FieldSpec,
        vars: &[&str],
        relations: &[&str],
        d: &str,
    ) -> PeriodicComplex {
        let r = PolyRing::default_grevlex(field, vars).unwrap();
        let rels = relations
            .iter()
            .map(|s| parse_poly(s, &r, 1, 1).unwrap())
            .collect();
        let ci = make_ci_ring(&r, rels).unwrap();
        let rows = parse_matrix(d, &r, 1, 1).unwrap();
        let m = RMatrix::from_polys(&ci, rows).unwrap();
        let rank = m.rows;
        PeriodicComplex::new(&ci, vec![rank], vec![m]).unwrap()
    }

    fn clifford_q() -> PeriodicComplex {
        complex_over(
            FieldSpec::Rational,
            &["x", "y"],
            &["x^2", "y^2"],
            "[[x, y], [2*y, -x]]",
        )
    }

    fn ex2_c(field: FieldSpec) -> PeriodicComplex {
        complex_over(field, &["x", "y", "z"], &["x^2", "y^2", "z^2"], "[[x, 0], [0, y]]")
    }

    fn ex2_d(field: FieldSpec) -> PeriodicComplex {
        complex_over(field, &["x", "y", "z"], &["x^2", "y^2", "z^2"], "[[x, 0], [0, z]]")
    }

    #[test]
    fn clifford_line_annihilator() {
        let c = clifford_q();
        let e = build_e(&c, &c, 1).unwrap();
        assert!(e.total_dim() > 0);
        let sv = support_variety(&e).unwrap();
        assert_eq!(sv.ann.gens.len(), 1);
        assert_eq!(sv.ann.gens[0].to_string(), "chi2 - 2*chi1");
        assert_eq!(sv.zero_set, "{(a, 2*a)}");
    }

    #[test]
    fn diagonal_pair_annihilators() {
        let c = ex2_c(FieldSpec::Rational);
        let d = ex2_d(FieldSpec::Rational);
        let e_cc = build_e(&c, &c, 1).unwrap();
        let sv_cc = support_variety(&e_cc).unwrap();
        let printed: Vec<String> = sv_cc.ann.gens.iter().map(|g| g.to_string()).collect();
        assert_eq!(printed, vec!["chi1*chi2", "chi3"]);
        assert_eq!(sv_cc.zero_set, "{chi1 = chi3 = 0} ∪ {chi2 = chi3 = 0}");

        let e_cd = build_e(&c, &d, 1).unwrap();
        let sv_cd = support_variety(&e_cd).unwrap();
        let printed_cd: Vec<String> = sv_cd.ann.gens.iter().map(|g| g.to_string()).collect();
        assert_eq!(printed_cd, vec!["chi3", "chi2"]);
    }

    #[test]
    fn rank_membership_on_the_line() {
        let c = clifford_q();
        let e = build_e(&c, &c, 1).unwrap();
        let f = FieldSpec::Rational;
        let on = RankPoint::new(vec![f.from_i64(1), f.from_i64(2)]).unwrap();
        let off = RankPoint::new(vec![f.from_i64(1), f.from_i64(1)]).unwrap();
        assert!(rank_membership(&e, &on).unwrap());
        assert!(!rank_membership(&e, &off).unwrap());
        assert!(matches!(
            RankPoint::new(vec![f.zero(), f.zero()]),
            Err(Error::ZeroPoint)
        ));
    }

    #[test]
    fn clifford_crosscheck_f7() {
        let c = complex_over(
            FieldSpec::Prime(7),
            &["x", "y"],
            &["x^2", "y^2"],
            "[[x, 3*y], [3*y, -x]]",
        );
        let e = build_e(&c, &c, 1).unwrap();
        let sv = support_variety(&e).unwrap();
        let rep = crosscheck_avrunin_scott(&e, &sv.ann, 7).unwrap();
        assert_eq!(rep.total, 48);
        assert!(rep.ok());
    }

    #[test]
    fn dade_flags_agree() {
        let c = clifford_q();
        let e = build_e(&c, &c, 1).unwrap();
        let sv = support_variety(&e).unwrap();
        let rep = dade_test(&e, &sv.ann).unwrap();
        assert!(rep.agree());
        assert!(!rep.e_zero);

        // contractible target: cone of the identity
        let id = ChainMap::identity(&c).unwrap();
        let cone = crate::complexes::mapping_cone(&id).unwrap();
        let e0 = build_e(&c, &cone, 1).unwrap();
        assert_eq!(e0.total_dim(), 0);
        let sv0 = support_variety(&e0).unwrap();
        let rep0 = dade_test(&e0, &sv0.ann).unwrap();
        assert!(rep0.agree());
        assert!(rep0.e_zero);
    }

    #[test]
    fn finite_generation_bounds() {
        let c = clifford_q();
        let e = build_e(&c, &c, 1).unwrap();
        let rep = finite_generation_report(&e).unwrap();
        assert_eq!(rep.generation_degree, Some(2));

        let id = ChainMap::identity(&c).unwrap();
        let cone = crate::complexes::mapping_cone(&id).unwrap();
        let e0 = build_e(&c, &cone, 1).unwrap();
        let rep0 = finite_generation_report(&e0).unwrap();
        assert_eq!(rep0.generation_degree, Some(0));
    }

    #[test]
    fn calculus_suite_on_example_pair() {
        let c = ex2_c(FieldSpec::Prime(5));
        let d = ex2_d(FieldSpec::Prime(5));
        // the identity-in-the-x-slot map C -> D is a chain map
        let ring = c.ring.clone();
        let mats = vec![RMatrix::from_polys(
            &ring,
            parse_matrix("[[1, 0], [0, 0]]", &ring.poly_ring, 1, 1).unwrap(),
        )
        .unwrap()];
        let alpha = ChainMap::new(&c, &d, 0, mats).unwrap();
        let rep = variety_calculus_suite(&c, &d, &alpha, 5).unwrap();
        assert_eq!(rep.grid_total, 124);
        assert!(rep.intersection_ok);
        assert!(rep.radical_forward);
        assert!(rep.radical_backward);
        assert!(rep.triangle_ok.iter().all(|&b| b));
    }

    #[test]
    fn zero_set_descriptions() {
        let chi = chi_ring(FieldSpec::Rational, 3).unwrap();
        let empty = buchberger(&chi, &[]).unwrap();
        assert_eq!(describe_zero_set(&empty).unwrap(), "k^3");
        let unit = buchberger(&chi, &[Polynomial::one(&chi)]).unwrap();
        assert_eq!(describe_zero_set(&unit).unwrap(), "{0}");
    }
}
