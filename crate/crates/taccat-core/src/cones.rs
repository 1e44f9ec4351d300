//! Lifting a complex through one relation at a time: the lifted cone over
//! the intermediate ring, its iteration up the tower (the T side), base
//! change back down (the S side), and a dimension-level adjunction check.

use crate::complexes::{contraction, hom_space, PeriodicComplex};
use crate::error::{Error, Result};
use crate::operators::{single_operator, SingleOperator};
use crate::rings::{CiRing, CiRingRc, RMatrix, RingElement};

#[derive(Debug, Clone)]
pub struct LiftedCone {
    pub base: PeriodicComplex,
    /// The lifted cone over the intermediate ring; squares to zero there.
    pub result: PeriodicComplex,
    /// Position of the eliminated relation (original declaration order when
    /// built by `t_functor`, last position for a standalone call).
    pub level: usize,
    pub single: SingleOperator,
}

/// Block differential of the lifted cone: with d̃, t̃ over the intermediate
/// ring Q' and f the eliminated relation,
///   d_n = [[-d̃_{n-1}, -f·I], [t̃_{n-1}, d̃_{n-2}]].
/// The constructor re-verifies d² = 0 over Q', which catches any matrix
/// that is not a genuine operator for f.
pub fn lifted_cone(c: &PeriodicComplex, s: &SingleOperator) -> Result<LiftedCone> {
    if s.op.source != *c {
        return Err(Error::shape("operator was not extracted from this complex"));
    }
    let inter = s.inter.clone();
    let p = c.period;
    let f = RingElement::new(&inter, &s.relation)?;
    let mut ranks = Vec::with_capacity(p);
    let mut diffs = Vec::with_capacity(p);
    for j in 0..p as i64 {
        ranks.push(c.rank_at(j - 1) + c.rank_at(j - 2));
        let dt_prev = s.dtilde[(j - 1).rem_euclid(p as i64) as usize].clone();
        let dt_prev2 = s.dtilde[(j - 2).rem_euclid(p as i64) as usize].clone();
        let tt_prev = s.ttilde[(j - 1).rem_euclid(p as i64) as usize].clone();
        let tl = dt_prev.neg();
        let tr = RMatrix::scalar_identity(&inter, c.rank_at(j - 2), &f).neg();
        diffs.push(RMatrix::block_2x2(&tl, &tr, &tt_prev, &dt_prev2)?);
    }
    let result = PeriodicComplex::new(&inter, ranks, diffs)?;
    Ok(LiftedCone {
        base: c.clone(),
        result,
        level: c.ring.num_relations().saturating_sub(1),
        single: s.clone(),
    })
}

pub struct TowerComplex {
    pub stages: Vec<LiftedCone>,
    pub final_complex: PeriodicComplex,
}

/// Iterate lifted cones, eliminating relations in the given order (indices
/// into the declared sequence; default ascending), down to `stop_level`
/// remaining relations.  Each stage re-presents the current ring with its
/// target relation last and re-extracts the operator there; a permuted
/// regular sequence is again regular, so the re-presentation is sound.
pub fn t_functor(
    c: &PeriodicComplex,
    order: Option<&[usize]>,
    stop_level: usize,
) -> Result<TowerComplex> {
    let m = c.ring.num_relations();
    if stop_level > m {
        return Err(Error::shape("stop level exceeds the number of relations"));
    }
    let default_order: Vec<usize> = (0..m).collect();
    let order = order.unwrap_or(&default_order);
    {
        let mut seen = vec![false; m];
        if order.len() != m || order.iter().any(|&i| i >= m || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::shape("elimination order must be a permutation of the relations"));
        }
    }
    let mut stages = Vec::new();
    let mut cur = c.clone();
    for &target_idx in order.iter().take(m - stop_level) {
        let target = c.ring.relations[target_idx].clone();
        let mut remaining: Vec<_> = cur
            .ring
            .relations
            .iter()
            .filter(|r| **r != target)
            .cloned()
            .collect();
        if remaining.len() + 1 != cur.ring.num_relations() {
            return Err(Error::shape("elimination target is not among the current relations"));
        }
        remaining.push(target);
        let represented = CiRing::quotient_unchecked(&cur.ring.poly_ring, remaining)?;
        let moved = PeriodicComplex::new(
            &represented,
            cur.ranks.clone(),
            cur.diffs
                .iter()
                .map(|d| d.to_ring(&represented))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let s = single_operator(&moved)?;
        let mut cone = lifted_cone(&moved, &s)?;
        cone.level = target_idx;
        cur = cone.result.clone();
        stages.push(cone);
    }
    Ok(TowerComplex { stages, final_complex: cur })
}

/// Base change downwards: reduce every differential entry into a declared
/// quotient of the current ring.
pub fn s_functor(d: &PeriodicComplex, target: &CiRingRc) -> Result<PeriodicComplex> {
    if !target.is_quotient_of(&d.ring)? {
        return Err(Error::shape("target ring is not a declared quotient"));
    }
    PeriodicComplex::new(
        target,
        d.ranks.clone(),
        d.diffs
            .iter()
            .map(|m| m.to_ring(target))
            .collect::<Result<Vec<_>>>()?,
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub window: (i64, i64),
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub agree: bool,
}

/// Dimension-level check of the adjunction: dim hom(SD, C, i) vs
/// dim hom(D, TC, i) over the window.  The ambient-ring side is finite
/// linear algebra only in degenerate cases (zero or contractible data);
/// anything else is reported as unsupported rather than guessed.
pub fn adjunction_dim_check(
    c: &PeriodicComplex,
    d: &PeriodicComplex,
    window: (i64, i64),
    contract_budget: u32,
) -> Result<AdjunctionReport> {
    if d.ring.poly_ring != c.ring.poly_ring {
        return Err(Error::RingMismatch);
    }
    if d.ring.num_relations() != 0 {
        return Err(Error::shape("the right-hand complex must live over the ambient ring"));
    }
    if window.0 > window.1 {
        return Err(Error::shape("empty degree window"));
    }
    let sd = s_functor(d, &c.ring)?;
    let tower = t_functor(c, None, 0)?;
    let top = tower.final_complex;
    let right_is_zero = if d.total_rank() == 0 {
        true
    } else if d.ring.artinian {
        false
    } else if contraction(d, contract_budget)?.is_some() {
        true
    } else if contraction(&top, contract_budget)?.is_some() {
        true
    } else {
        return Err(Error::WindowUnsupported {
            context: "ambient-ring side is neither Artinian nor certified contractible".into(),
        });
    };
    let mut left = Vec::new();
    let mut right = Vec::new();
    for i in window.0..=window.1 {
        left.push(hom_space(&sd, c, i)?.dim);
        right.push(if right_is_zero {
            0
        } else {
            hom_space(d, &top, i)?.dim
        });
    }
    let agree = left == right;
    Ok(AdjunctionReport { window, left, right, agree })
}
