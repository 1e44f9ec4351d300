//! Cohomology operators extracted from the failure of a lifted differential
//! to square to zero: d̃² = Σ_k f_k·t̃_k over the ambient ring, with the
//! reductions t_k strict degree-2 chain maps on the original complex.

use crate::complexes::{compose, find_homotopy, verify_homotopy, ChainMap, Homotopy, PeriodicComplex};
use crate::error::{Error, Result};
use crate::groebner::express_in_list;
use crate::linalg::KMat;
use crate::poly::Polynomial;
use crate::rings::{CiRing, CiRingRc, RMatrix};

pub struct EisenbudOperators {
    /// The ambient ring Q (no relations).
    pub base: CiRingRc,
    /// Canonical lifts of the differentials to Q.
    pub lifted_diffs: Vec<RMatrix>,
    /// cofactors[k][j]: the Q-level matrix t̃_k at index j, so that
    /// d̃_{j-1}·d̃_j = Σ_k f_k·cofactors[k][j].
    pub cofactors: Vec<Vec<RMatrix>>,
    /// The reduced operators t_k, strict chain maps of degree 2.
    pub ops: Vec<ChainMap>,
}

/// Express every entry of the product of two lifted differentials in the
/// given relation list, returning one cofactor matrix per relation.
fn extract_cofactors(
    prod: &RMatrix,
    relations: &[Polynomial],
    ring_with_gb: &CiRingRc,
    out_ring: &CiRingRc,
) -> Result<Vec<RMatrix>> {
    let mut mats = vec![RMatrix::zero(out_ring, prod.rows, prod.cols); relations.len()];
    for r in 0..prod.rows {
        for c in 0..prod.cols {
            let entry = prod.get(r, c).lift();
            if entry.is_zero() {
                continue;
            }
            let cofs = express_in_list(&entry, relations, &ring_with_gb.gb)?.ok_or_else(|| {
                Error::Internal("lifted square has an entry outside the relation ideal".into())
            })?;
            for (k, cof) in cofs.iter().enumerate() {
                mats[k].set(r, c, crate::rings::RingElement::new(out_ring, cof)?);
            }
        }
    }
    Ok(mats)
}

pub fn eisenbud_operators(c: &PeriodicComplex) -> Result<EisenbudOperators> {
    let ring = c.ring.clone();
    if ring.relations.is_empty() {
        return Err(Error::shape("operator extraction needs at least one relation"));
    }
    let base = CiRing::base(&ring.poly_ring);
    let p = c.period;
    let lifted: Vec<RMatrix> = c
        .diffs
        .iter()
        .map(|d| d.to_ring(&base))
        .collect::<Result<_>>()?;
    let ncof = ring.relations.len();
    let mut cofactors: Vec<Vec<RMatrix>> = vec![Vec::with_capacity(p); ncof];
    for j in 0..p {
        let prod = lifted[(j + p - 1) % p].mul(&lifted[j])?;
        let mats = extract_cofactors(&prod, &ring.relations, &ring, &base)?;
        for (k, m) in mats.into_iter().enumerate() {
            cofactors[k].push(m);
        }
    }
    let mut ops = Vec::with_capacity(ncof);
    for k in 0..ncof {
        let mats = cofactors[k]
            .iter()
            .map(|m| m.to_ring(&ring))
            .collect::<Result<Vec<_>>>()?;
        ops.push(ChainMap::new(c, c, 2, mats)?);
    }
    Ok(EisenbudOperators { base, lifted_diffs: lifted, cofactors, ops })
}

/// The last relation's operator computed over the intermediate ring
/// Q/(f_1..f_{m-1}); used level by level when unwinding a tower.
#[derive(Debug, Clone)]
pub struct SingleOperator {
    /// Q/(f_1..f_{m-1}).
    pub inter: CiRingRc,
    /// The distinguished relation f_m in the ambient polynomial ring.
    pub relation: Polynomial,
    /// The differential lifted to the intermediate ring.
    pub dtilde: Vec<RMatrix>,
    /// Cofactors over the intermediate ring: d̃_{j-1}·d̃_j = f̄_m·t̃_j there.
    pub ttilde: Vec<RMatrix>,
    /// The reduction of t̃ to the original ring, a strict chain map.
    pub op: ChainMap,
}

pub fn single_operator(c: &PeriodicComplex) -> Result<SingleOperator> {
    let ring = c.ring.clone();
    let m = ring.relations.len();
    if m == 0 {
        return Err(Error::shape("operator extraction needs at least one relation"));
    }
    let inter = if m == 1 {
        CiRing::base(&ring.poly_ring)
    } else {
        CiRing::quotient_unchecked(&ring.poly_ring, ring.relations[..m - 1].to_vec())?
    };
    let p = c.period;
    let dtilde: Vec<RMatrix> = c
        .diffs
        .iter()
        .map(|d| d.to_ring(&inter))
        .collect::<Result<_>>()?;
    let mut ttilde = Vec::with_capacity(p);
    for j in 0..p {
        let prod = dtilde[(j + p - 1) % p].mul(&dtilde[j])?;
        let mats = extract_cofactors(&prod, &ring.relations, &ring, &inter)?;
        ttilde.push(mats[m - 1].clone());
    }
    // sanity over the intermediate ring: the product is exactly f̄_m·t̃
    for j in 0..p {
        let prod = dtilde[(j + p - 1) % p].mul(&dtilde[j])?;
        let fm = crate::rings::RingElement::new(&inter, &ring.relations[m - 1])?;
        if !prod.sub(&ttilde[j].scale(&fm)?)?.is_zero() {
            return Err(Error::ConventionMismatch { index: m });
        }
    }
    let mats = ttilde
        .iter()
        .map(|t| t.to_ring(&ring))
        .collect::<Result<Vec<_>>>()?;
    let op = ChainMap::new(c, c, 2, mats)?;
    Ok(SingleOperator {
        inter,
        relation: ring.relations[m - 1].clone(),
        dtilde,
        ttilde,
        op,
    })
}

pub struct CommutationReport {
    /// Pairs (i, j), i < j, whose operators commute on the nose.
    pub strict: Vec<(usize, usize)>,
    /// Homotopy witnesses for the pairs that only commute up to homotopy.
    pub witnesses: Vec<(usize, usize, Homotopy)>,
}

impl CommutationReport {
    pub fn all_strict(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Check that each pair of operators commutes up to homotopy, returning the
/// witnesses; exact re-verification of every witness is part of the check.
pub fn verify_operator_commutation(ops: &[ChainMap]) -> Result<CommutationReport> {
    let mut report = CommutationReport { strict: vec![], witnesses: vec![] };
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            let a = compose(&ops[i], &ops[j])?;
            let b = compose(&ops[j], &ops[i])?;
            if a.sub(&b)?.is_zero() {
                report.strict.push((i, j));
                continue;
            }
            match find_homotopy(&a, &b)? {
                Some(h) => {
                    if !verify_homotopy(&a, &b, &h)? {
                        return Err(Error::Internal(
                            "commutation witness failed exact re-verification".into(),
                        ));
                    }
                    report.witnesses.push((i, j, h));
                }
                None => return Err(Error::CommutationFailure { i, j }),
            }
        }
    }
    Ok(report)
}

#[derive(Debug)]
pub struct BasisChangeOutcome {
    pub matrix: KMat,
    pub inverse: KMat,
    /// The ring presented by the transformed relations f' = A·f.
    pub ring: CiRingRc,
    /// The same complex viewed over the new presentation.
    pub complex: PeriodicComplex,
    /// Operators extracted from the new presentation.
    pub ops: Vec<ChainMap>,
    /// Homotopies t'_j ≃ Σ_i (A⁻¹)_{ij} t_i, one per new operator.
    pub witnesses: Vec<Homotopy>,
}

/// Re-present R with relations f'_i = Σ_j A_{ij} f_j for an invertible
/// scalar matrix A, re-extract operators, and certify the transformation law
/// t'_j ≃ Σ_i (A⁻¹)_{ij} t_i by explicit homotopies.
pub fn basis_change_operators(c: &PeriodicComplex, a: &KMat) -> Result<BasisChangeOutcome> {
    let ring = c.ring.clone();
    let n = ring.relations.len();
    if a.rows != n || a.cols != n {
        return Err(Error::shape("basis-change matrix shape vs relation count"));
    }
    if a.field != ring.poly_ring.field {
        return Err(Error::RingMismatch);
    }
    let mut new_relations = Vec::with_capacity(n);
    for i in 0..n {
        let mut f = Polynomial::zero(&ring.poly_ring);
        for j in 0..n {
            f = f.add(&ring.relations[j].scale(a.get(i, j))?)?;
        }
        new_relations.push(f);
    }
    // a singular A always produces a dependent list, caught right here
    let new_ring = crate::rings::make_ci_ring(&ring.poly_ring, new_relations)?;
    let inverse = a
        .inverse()?
        .ok_or_else(|| Error::Internal("regular transformed sequence with singular matrix".into()))?;
    let complex = PeriodicComplex::new(
        &new_ring,
        c.ranks.clone(),
        c.diffs
            .iter()
            .map(|d| d.to_ring(&new_ring))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let new_ops = eisenbud_operators(&complex)?.ops;
    let old_ops = eisenbud_operators(c)?.ops;
    // move the original operators over to the new presentation
    let moved: Vec<ChainMap> = old_ops
        .iter()
        .map(|t| {
            let mats = t
                .mats
                .iter()
                .map(|m| m.to_ring(&new_ring))
                .collect::<Result<Vec<_>>>()?;
            ChainMap::new(&complex, &complex, 2, mats)
        })
        .collect::<Result<_>>()?;
    let mut witnesses = Vec::with_capacity(n);
    for j in 0..n {
        let mut target = ChainMap::zero(&complex, &complex, 2)?;
        for (i, t) in moved.iter().enumerate() {
            target = target.add(&t.scale_k(inverse.get(i, j))?)?;
        }
        match find_homotopy(&new_ops[j], &target)? {
            Some(h) => {
                if !verify_homotopy(&new_ops[j], &target, &h)? {
                    return Err(Error::Internal(
                        "basis-change witness failed exact re-verification".into(),
                    ));
                }
                witnesses.push(h);
            }
            None => return Err(Error::ConventionMismatch { index: j + 1 }),
        }
    }
    Ok(BasisChangeOutcome {
        matrix: a.clone(),
        inverse,
        ring: new_ring,
        complex,
        ops: new_ops,
        witnesses,
    })
}
