//! Seeded random corpus of totally acyclic periodic complexes over the
//! square-relation rings k[x..]/(x_i^2), used by the property suites.
//! Families: diagonal one-variable entries, trace-zero 2x2 blocks,
//! period-2 upper-triangular pairs, and block sums; optionally dressed up
//! by k-linear and unipotent ring-level changes of basis, which preserve
//! total acyclicity but make the extracted operators less tidy.

use crate::complexes::{ChainMap, HomSolver, PeriodicComplex};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::linalg::KMat;
use crate::parse::parse_poly;
use crate::poly::{PolyRing, Polynomial};
use crate::rings::{make_ci_ring, CiRingRc, RMatrix, RingElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const VAR_NAMES: [&str; 3] = ["x", "y", "z"];

/// k[x_1..x_c]/(x_1^2..x_c^2) with the default order.
pub fn squares_ring(field: FieldSpec, c: usize) -> Result<CiRingRc> {
    if c == 0 || c > 3 {
        return Err(Error::shape("corpus rings use 1..=3 variables"));
    }
    let ring = PolyRing::default_grevlex(field, &VAR_NAMES[..c])?;
    let relations = (0..c)
        .map(|i| parse_poly(&format!("{}^2", VAR_NAMES[i]), &ring, 1, 1))
        .collect::<Result<Vec<_>>>()?;
    make_ci_ring(&ring, relations)
}

pub struct CorpusItem {
    pub name: String,
    pub complex: PeriodicComplex,
}

fn nonzero_scalar(rng: &mut ChaCha8Rng, field: FieldSpec) -> FieldElement {
    loop {
        let v = match field {
            FieldSpec::Prime(p) => rng.gen_range(1..p) as i64,
            FieldSpec::Rational => rng.gen_range(-3i64..=3),
        };
        let e = field.from_i64(v);
        if !e.is_zero() {
            return e;
        }
    }
}

fn scalar(rng: &mut ChaCha8Rng, field: FieldSpec) -> FieldElement {
    let v = match field {
        FieldSpec::Prime(p) => rng.gen_range(0..p) as i64,
        FieldSpec::Rational => rng.gen_range(-2i64..=2),
    };
    field.from_i64(v)
}

fn var_elem(ring: &CiRingRc, v: usize, coef: &FieldElement) -> Result<RingElement> {
    let p = Polynomial::var(&ring.poly_ring, v).scale(coef)?;
    RingElement::new(ring, &p)
}

fn diagonal_complex(rng: &mut ChaCha8Rng, ring: &CiRingRc, rank: usize) -> Result<PeriodicComplex> {
    let c = ring.poly_ring.nvars();
    let mut d = RMatrix::zero(ring, rank, rank);
    for i in 0..rank {
        let v = rng.gen_range(0..c);
        let coef = nonzero_scalar(rng, ring.poly_ring.field);
        d.set(i, i, var_elem(ring, v, &coef)?);
    }
    PeriodicComplex::new(ring, vec![rank], vec![d])
}

fn trace_zero_complex(rng: &mut ChaCha8Rng, ring: &CiRingRc) -> Result<PeriodicComplex> {
    let c = ring.poly_ring.nvars();
    let field = ring.poly_ring.field;
    let a = rng.gen_range(0..c);
    let b = rng.gen_range(0..c);
    let diag = var_elem(ring, a, &nonzero_scalar(rng, field))?;
    let up = var_elem(ring, b, &nonzero_scalar(rng, field))?;
    let lo = var_elem(ring, b, &nonzero_scalar(rng, field))?;
    let mut d = RMatrix::zero(ring, 2, 2);
    d.set(0, 0, diag.clone());
    d.set(0, 1, up);
    d.set(1, 0, lo);
    d.set(1, 1, diag.neg());
    PeriodicComplex::new(ring, vec![2], vec![d])
}

fn period_two_complex(rng: &mut ChaCha8Rng, ring: &CiRingRc) -> Result<PeriodicComplex> {
    let c = ring.poly_ring.nvars();
    let field = ring.poly_ring.field;
    let a = rng.gen_range(0..c);
    let b = rng.gen_range(0..c);
    let diag = var_elem(ring, a, &nonzero_scalar(rng, field))?;
    let off = var_elem(ring, b, &nonzero_scalar(rng, field))?;
    let mut d0 = RMatrix::zero(ring, 2, 2);
    d0.set(0, 0, diag.clone());
    d0.set(0, 1, off.clone());
    d0.set(1, 1, diag.clone());
    let mut d1 = RMatrix::zero(ring, 2, 2);
    d1.set(0, 0, diag.clone());
    d1.set(0, 1, off.neg());
    d1.set(1, 1, diag);
    PeriodicComplex::new(ring, vec![2, 2], vec![d0, d1])
}

fn random_invertible(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize) -> Result<KMat> {
    loop {
        let mut m = KMat::zeros(field, n, n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, scalar(rng, field));
            }
        }
        if m.inverse()?.is_some() {
            return Ok(m);
        }
    }
}

/// Change of basis by k-linear automorphisms, one per index.
fn k_conjugate(rng: &mut ChaCha8Rng, cx: &PeriodicComplex) -> Result<PeriodicComplex> {
    let field = cx.ring.poly_ring.field;
    let p = cx.period;
    let us: Vec<KMat> = (0..p)
        .map(|j| random_invertible(rng, field, cx.ranks[j]))
        .collect::<Result<_>>()?;
    let as_rmatrix = |m: &KMat| -> Result<RMatrix> {
        let mut out = RMatrix::zero(&cx.ring, m.rows, m.cols);
        for r in 0..m.rows {
            for c in 0..m.cols {
                out.set(r, c, RingElement::scalar(&cx.ring, m.get(r, c).clone())?);
            }
        }
        Ok(out)
    };
    let mut diffs = Vec::with_capacity(p);
    for j in 0..p {
        let prev = (j + p - 1) % p;
        let u_prev = as_rmatrix(&us[prev])?;
        let u_inv = as_rmatrix(&us[j].inverse()?.expect("invertible by construction"))?;
        diffs.push(u_prev.mul(&cx.diffs[j])?.mul(&u_inv)?);
    }
    PeriodicComplex::new(&cx.ring, cx.ranks.clone(), diffs)
}

/// Change of basis by unipotent matrices I + r·E_{ab} with r in the maximal
/// ideal; the inverse is I - r·E_{ab}.  This leaves the complex isomorphic
/// but makes the canonical lifts of the differentials genuinely non-split,
/// so extracted operator pairs typically commute only up to homotopy.
fn unipotent_conjugate(rng: &mut ChaCha8Rng, cx: &PeriodicComplex) -> Result<PeriodicComplex> {
    let ring = cx.ring.clone();
    let nv = ring.poly_ring.nvars();
    let p = cx.period;
    let mut gs = Vec::with_capacity(p);
    let mut ginvs = Vec::with_capacity(p);
    for j in 0..p {
        let n = cx.ranks[j];
        if n < 2 {
            gs.push(RMatrix::identity(&ring, n));
            ginvs.push(RMatrix::identity(&ring, n));
            continue;
        }
        let a = rng.gen_range(0..n);
        let b = loop {
            let b = rng.gen_range(0..n);
            if b != a {
                break b;
            }
        };
        let r = var_elem(&ring, rng.gen_range(0..nv), &nonzero_scalar(rng, ring.poly_ring.field))?;
        let mut g = RMatrix::identity(&ring, n);
        g.set(a, b, r.clone());
        let mut ginv = RMatrix::identity(&ring, n);
        ginv.set(a, b, r.neg());
        gs.push(g);
        ginvs.push(ginv);
    }
    let mut diffs = Vec::with_capacity(p);
    for j in 0..p {
        let prev = (j + p - 1) % p;
        diffs.push(gs[prev].mul(&cx.diffs[j])?.mul(&ginvs[j])?);
    }
    PeriodicComplex::new(&ring, cx.ranks.clone(), diffs)
}

fn block_sum(a: &PeriodicComplex, b: &PeriodicComplex) -> Result<PeriodicComplex> {
    if a.ring != b.ring || a.period != b.period {
        return Err(Error::shape("block sum needs matching ring and period"));
    }
    let p = a.period;
    let ranks = (0..p).map(|j| a.ranks[j] + b.ranks[j]).collect();
    let diffs = (0..p)
        .map(|j| a.diffs[j].block_diag(&b.diffs[j]))
        .collect::<Result<Vec<_>>>()?;
    PeriodicComplex::new(&a.ring, ranks, diffs)
}

fn one_complex(
    rng: &mut ChaCha8Rng,
    ring: &CiRingRc,
    family: usize,
) -> Result<(String, PeriodicComplex)> {
    // retry a few times when a random draw fails total acyclicity
    for _ in 0..40 {
        let (tag, cx) = match family {
            0 => {
                let rank = rng.gen_range(1..=4);
                ("diag", diagonal_complex(rng, ring, rank)?)
            }
            1 => ("trace0", trace_zero_complex(rng, ring)?),
            2 => ("koszul2", period_two_complex(rng, ring)?),
            _ => {
                let a = diagonal_complex(rng, ring, 2)?;
                let b = trace_zero_complex(rng, ring)?;
                ("blocksum", block_sum(&a, &b)?)
            }
        };
        if !cx.check_totally_acyclic()?.ok() {
            continue;
        }
        let dressed = match rng.gen_range(0..4) {
            0 => cx,
            1 => k_conjugate(rng, &cx)?,
            _ => unipotent_conjugate(rng, &cx)?,
        };
        return Ok((tag.to_string(), dressed));
    }
    // diagonal complexes are always totally acyclic over the square rings
    Ok(("diag".to_string(), diagonal_complex(rng, ring, 2)?))
}

/// Deterministic corpus: `count` totally acyclic complexes cycling through
/// c = 1, 2, 3 and the generating families.
pub fn generate_corpus(field: FieldSpec, count: usize, seed: u64) -> Result<Vec<CorpusItem>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rings: Vec<CiRingRc> = (1..=3)
        .map(|c| squares_ring(field, c))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let ring = &rings[i % 3];
        let family = rng.gen_range(0..4);
        let (tag, complex) = one_complex(&mut rng, ring, family)?;
        out.push(CorpusItem {
            name: format!("{tag}-c{}-{i}", ring.num_relations()),
            complex,
        });
    }
    Ok(out)
}

/// A random degree-0 chain map sampled from the solved cocycle space.
pub fn random_chain_map(
    rng: &mut ChaCha8Rng,
    c: &PeriodicComplex,
    d: &PeriodicComplex,
) -> Result<ChainMap> {
    let solver = HomSolver::new(c, d, 0, 1)?;
    let basis = solver.cocycle_basis()?;
    if basis.is_empty() {
        return ChainMap::zero(c, d, 0);
    }
    let field = c.ring.poly_ring.field;
    let mut v = vec![field.zero(); solver.ambient()];
    for bvec in &basis {
        let coef = scalar(rng, field);
        if coef.is_zero() {
            continue;
        }
        for (slot, x) in v.iter_mut().zip(bvec) {
            *slot = slot.add(&x.mul(&coef)?)?;
        }
    }
    solver.to_chain_map(&v)
}

/// Pairs over a shared ring with a connecting degree-0 map, for the variety
/// calculus suites.
pub fn generate_pairs(
    field: FieldSpec,
    count: usize,
    seed: u64,
) -> Result<Vec<(PeriodicComplex, PeriodicComplex, ChainMap)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rings: Vec<CiRingRc> = (1..=3)
        .map(|c| squares_ring(field, c))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let ring = &rings[i % 3];
        let fam_c = rng.gen_range(0..4);
        let fam_d = rng.gen_range(0..4);
        let (_, c) = one_complex(&mut rng, ring, fam_c)?;
        let (_, d) = one_complex(&mut rng, ring, fam_d)?;
        // align periods so the pair stays cheap: reuse c when they differ
        let d = if d.period == c.period { d } else { c.clone() };
        let alpha = random_chain_map(&mut rng, &c, &d)?;
        out.push((c, d, alpha));
    }
    Ok(out)
}
