//! Periodic complexes of finite free modules, chain maps between shifts,
//! homotopies, mapping cones, and total-acyclicity certification.
//!
//! Sign conventions: the shift acts positionally, (Σ^i C)_n = C_{n-i} with
//! differential (-1)^i d_{n-i}.  A degree-i map psi: C -> Σ^i D satisfies
//! (-1)^i d^D_{n-i} psi_n = psi_{n-1} d^C_n, and a homotopy lambda has
//! components C_n -> D_{n+1-i} with psi - psi' = d^{Σ^i D} lambda + lambda d^C.

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::linalg::{KMat, QuotientSpace};
use crate::poly::Monomial;
use crate::rings::{CiRingRc, RMatrix, RingElement};
use num_integer::Integer;

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicComplex {
    pub ring: CiRingRc,
    pub period: usize,
    pub ranks: Vec<usize>,
    /// diffs[j] = d_n for n ≡ j (mod period), mapping C_n -> C_{n-1}.
    pub diffs: Vec<RMatrix>,
}

fn imod(n: i64, p: usize) -> usize {
    n.rem_euclid(p as i64) as usize
}

impl PeriodicComplex {
    pub fn new(ring: &CiRingRc, ranks: Vec<usize>, diffs: Vec<RMatrix>) -> Result<Self> {
        if ranks.is_empty() || ranks.len() != diffs.len() {
            return Err(Error::shape("period must be >= 1 with one differential per index"));
        }
        let p = ranks.len();
        for (j, d) in diffs.iter().enumerate() {
            if d.ring != *ring {
                return Err(Error::RingMismatch);
            }
            let target = ranks[(j + p - 1) % p];
            if d.rows != target || d.cols != ranks[j] {
                return Err(Error::shape(format!(
                    "d[{j}] must be {}x{}, found {}x{}",
                    target, ranks[j], d.rows, d.cols
                )));
            }
        }
        let c = PeriodicComplex { ring: ring.clone(), period: p, ranks, diffs };
        for j in 0..p {
            let sq = c.diff_at(j as i64 - 1).mul(&c.diff_at(j as i64))?;
            if !sq.is_zero() {
                return Err(Error::SquareNotZero { degree: j as i64 });
            }
        }
        Ok(c)
    }

    pub fn rank_at(&self, n: i64) -> usize {
        self.ranks[imod(n, self.period)]
    }

    pub fn diff_at(&self, n: i64) -> RMatrix {
        self.diffs[imod(n, self.period)].clone()
    }

    /// (Σ^i C)_n = C_{n-i}, differential (-1)^i d_{n-i}.
    pub fn shift(&self, i: i64) -> Result<PeriodicComplex> {
        let p = self.period;
        let mut ranks = Vec::with_capacity(p);
        let mut diffs = Vec::with_capacity(p);
        let negate = i.rem_euclid(2) == 1;
        for j in 0..p as i64 {
            ranks.push(self.rank_at(j - i));
            let d = self.diff_at(j - i);
            diffs.push(if negate { d.neg() } else { d });
        }
        PeriodicComplex::new(&self.ring, ranks, diffs)
    }

    /// Total rank of one period; used as a quick size measure.
    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// Exactness of the complex and of its R-dual, certified by rank
    /// counting over k.  Requires an Artinian ring.
    pub fn check_totally_acyclic(&self) -> Result<TacReport> {
        let dim = self.ring.dim_k().ok_or(Error::NotArtinian)?;
        let p = self.period;
        let mut ranks_k = Vec::with_capacity(p);
        let mut dual_ranks_k = Vec::with_capacity(p);
        for j in 0..p {
            ranks_k.push(self.diffs[j].rank_k()?);
            dual_ranks_k.push(self.diffs[j].transpose().rank_k()?);
        }
        let mut exact_failures = Vec::new();
        let mut dual_failures = Vec::new();
        for j in 0..p {
            let need = self.ranks[j] * dim;
            if ranks_k[j] + ranks_k[(j + 1) % p] != need {
                exact_failures.push(j as i64);
            }
            if dual_ranks_k[j] + dual_ranks_k[(j + 1) % p] != need {
                dual_failures.push(j as i64);
            }
        }
        Ok(TacReport {
            exact: exact_failures.is_empty(),
            dual_exact: dual_failures.is_empty(),
            exact_failures,
            dual_failures,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TacReport {
    pub exact: bool,
    pub dual_exact: bool,
    pub exact_failures: Vec<i64>,
    pub dual_failures: Vec<i64>,
}

impl TacReport {
    pub fn ok(&self) -> bool {
        self.exact && self.dual_exact
    }
}

/// A degree-i chain map C -> Σ^i D, stored over one combined period
/// L = lcm(period C, period D).
#[derive(Debug, Clone, PartialEq)]
pub struct ChainMap {
    pub source: PeriodicComplex,
    pub target: PeriodicComplex,
    pub degree: i64,
    /// mats[j] = psi_n for n ≡ j (mod L): C_n -> D_{n-degree}.
    pub mats: Vec<RMatrix>,
}

fn sign_scale(m: &RMatrix, i: i64) -> RMatrix {
    if i.rem_euclid(2) == 1 {
        m.neg()
    } else {
        m.clone()
    }
}

impl ChainMap {
    pub fn period(&self) -> usize {
        self.mats.len()
    }

    pub fn new(
        source: &PeriodicComplex,
        target: &PeriodicComplex,
        degree: i64,
        mats: Vec<RMatrix>,
    ) -> Result<Self> {
        let m = ChainMap::new_unchecked(source, target, degree, mats)?;
        m.verify()?;
        Ok(m)
    }

    pub fn new_unchecked(
        source: &PeriodicComplex,
        target: &PeriodicComplex,
        degree: i64,
        mats: Vec<RMatrix>,
    ) -> Result<Self> {
        if source.ring != target.ring {
            return Err(Error::RingMismatch);
        }
        let l = source.period.lcm(&target.period);
        if mats.len() != l {
            return Err(Error::shape(format!(
                "chain map needs {l} component matrices, found {}",
                mats.len()
            )));
        }
        for (j, mat) in mats.iter().enumerate() {
            let rows = target.rank_at(j as i64 - degree);
            let cols = source.rank_at(j as i64);
            if mat.rows != rows || mat.cols != cols {
                return Err(Error::shape(format!(
                    "psi[{j}] must be {rows}x{cols}, found {}x{}",
                    mat.rows, mat.cols
                )));
            }
        }
        Ok(ChainMap {
            source: source.clone(),
            target: target.clone(),
            degree,
            mats,
        })
    }

    pub fn mat_at(&self, n: i64) -> RMatrix {
        self.mats[imod(n, self.mats.len())].clone()
    }

    /// Exact check of (-1)^i d^D_{n-i} psi_n = psi_{n-1} d^C_n for all n.
    pub fn verify(&self) -> Result<()> {
        let i = self.degree;
        for n in 0..self.mats.len() as i64 {
            let lhs = sign_scale(&self.target.diff_at(n - i), i).mul(&self.mat_at(n))?;
            let rhs = self.mat_at(n - 1).mul(&self.source.diff_at(n))?;
            if lhs.sub(&rhs)?.is_zero() {
                continue;
            }
            return Err(Error::NotChainMap { degree: n });
        }
        Ok(())
    }

    pub fn identity(c: &PeriodicComplex) -> Result<ChainMap> {
        let mats = (0..c.period)
            .map(|j| RMatrix::identity(&c.ring, c.ranks[j]))
            .collect();
        ChainMap::new_unchecked(c, c, 0, mats)
    }

    pub fn zero(source: &PeriodicComplex, target: &PeriodicComplex, degree: i64) -> Result<ChainMap> {
        let l = source.period.lcm(&target.period);
        let mats = (0..l as i64)
            .map(|j| {
                RMatrix::zero(
                    &source.ring,
                    target.rank_at(j - degree),
                    source.rank_at(j),
                )
            })
            .collect();
        ChainMap::new_unchecked(source, target, degree, mats)
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(|m| m.is_zero())
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        self.check_parallel(other)?;
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        ChainMap::new_unchecked(&self.source, &self.target, self.degree, mats)
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        self.check_parallel(other)?;
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<_>>()?;
        ChainMap::new_unchecked(&self.source, &self.target, self.degree, mats)
    }

    pub fn scale_k(&self, c: &FieldElement) -> Result<ChainMap> {
        let mats = self.mats.iter().map(|m| m.scale_k(c)).collect::<Result<_>>()?;
        ChainMap::new_unchecked(&self.source, &self.target, self.degree, mats)
    }

    /// Multiply every component by a ring element (still a chain map).
    pub fn scale_r(&self, r: &RingElement) -> Result<ChainMap> {
        let mats = self.mats.iter().map(|m| m.scale(r)).collect::<Result<_>>()?;
        ChainMap::new_unchecked(&self.source, &self.target, self.degree, mats)
    }

    fn check_parallel(&self, other: &ChainMap) -> Result<()> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree
        {
            return Err(Error::shape("chain maps are not parallel"));
        }
        Ok(())
    }
}

/// outer ∘ inner, with the outer map applied through the shift:
/// inner: A -> Σ^a B, outer: B -> Σ^b E gives A -> Σ^{a+b} E with components
/// outer_{n-a} inner_n (no extra signs under the positional convention).
pub fn compose(outer: &ChainMap, inner: &ChainMap) -> Result<ChainMap> {
    if outer.source != inner.target {
        return Err(Error::shape("composition endpoints do not match"));
    }
    let a = inner.degree;
    let l = inner.period().lcm(&outer.period()).lcm(&inner.source.period.lcm(&outer.target.period));
    let mats = (0..l as i64)
        .map(|n| outer.mat_at(n - a).mul(&inner.mat_at(n)))
        .collect::<Result<_>>()?;
    ChainMap::new_unchecked(&inner.source, &outer.target, a + outer.degree, mats)
}

/// Mapping cone of a degree-i map t: C -> Σ^i D, viewed as the cone of the
/// degree-0 reinterpretation C -> Σ^i D:
/// Cone_n = C_{n-1} ⊕ D_{n-i}, d = [[-d^C_{n-1}, 0], [t_{n-1}, (-1)^i d^D_{n-i}]].
pub fn mapping_cone(t: &ChainMap) -> Result<PeriodicComplex> {
    let i = t.degree;
    let l = t.period();
    let ring = t.source.ring.clone();
    let mut ranks = Vec::with_capacity(l);
    let mut diffs = Vec::with_capacity(l);
    for j in 0..l as i64 {
        ranks.push(t.source.rank_at(j - 1) + t.target.rank_at(j - i));
        let tl = t.source.diff_at(j - 1).neg();
        let tr = RMatrix::zero(&ring, t.source.rank_at(j - 2), t.target.rank_at(j - i));
        let bl = t.mat_at(j - 1);
        let br = sign_scale(&t.target.diff_at(j - i), i);
        diffs.push(RMatrix::block_2x2(&tl, &tr, &bl, &br)?);
    }
    PeriodicComplex::new(&ring, ranks, diffs)
}

/// A homotopy between parallel degree-i maps: components C_n -> D_{n+1-i}.
#[derive(Debug, Clone)]
pub struct Homotopy {
    pub degree: i64,
    pub maps: Vec<RMatrix>,
}

impl Homotopy {
    pub fn map_at(&self, n: i64) -> RMatrix {
        self.maps[imod(n, self.maps.len())].clone()
    }
}

/// Exact check that psi - psi' = d^{Σ^i D} lambda + lambda d^C.
pub fn verify_homotopy(psi: &ChainMap, psi2: &ChainMap, h: &Homotopy) -> Result<bool> {
    psi.check_parallel(psi2)?;
    let i = psi.degree;
    let l = psi.period().lcm(&h.maps.len());
    for n in 0..l as i64 {
        let b1 = sign_scale(&psi.target.diff_at(n + 1 - i), i).mul(&h.map_at(n))?;
        let b2 = h.map_at(n - 1).mul(&psi.source.diff_at(n))?;
        let delta = psi.mat_at(n).sub(&psi2.mat_at(n))?;
        if !b1.add(&b2)?.sub(&delta)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

// --------------------------------------------------------------------------
// linearized solving

struct Layout {
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    total: usize,
}

impl Layout {
    fn build(l: usize, dim: usize, shape: impl Fn(i64) -> (usize, usize)) -> Layout {
        let mut shapes = Vec::with_capacity(l);
        let mut offsets = Vec::with_capacity(l);
        let mut total = 0;
        for n in 0..l as i64 {
            let s = shape(n);
            offsets.push(total);
            total += s.0 * s.1 * dim;
            shapes.push(s);
        }
        Layout { shapes, offsets, total }
    }
}

fn add_block(dst: &mut KMat, r0: usize, c0: usize, block: &KMat) -> Result<()> {
    for r in 0..block.rows {
        for c in 0..block.cols {
            let v = block.get(r, c);
            if v.is_zero() {
                continue;
            }
            let cur = dst.get(r0 + r, c0 + c).add(v)?;
            dst.set(r0 + r, c0 + c, cur);
        }
    }
    Ok(())
}

/// Shared machinery for chain-map and homotopy spaces of a fixed pair and
/// degree, solved over maps of period L (optionally a multiple of the lcm).
pub struct HomSolver {
    pub source: PeriodicComplex,
    pub target: PeriodicComplex,
    pub degree: i64,
    pub l: usize,
    dim: usize,
    psi: Layout,
    lam: Layout,
}

impl HomSolver {
    pub fn new(
        source: &PeriodicComplex,
        target: &PeriodicComplex,
        degree: i64,
        period_multiple: usize,
    ) -> Result<HomSolver> {
        if source.ring != target.ring {
            return Err(Error::RingMismatch);
        }
        let dim = source.ring.dim_k().ok_or(Error::NotArtinian)?;
        let l = source.period.lcm(&target.period) * period_multiple.max(1);
        let psi = Layout::build(l, dim, |n| {
            (target.rank_at(n - degree), source.rank_at(n))
        });
        let lam = Layout::build(l, dim, |n| {
            (target.rank_at(n + 1 - degree), source.rank_at(n))
        });
        Ok(HomSolver {
            source: source.clone(),
            target: target.clone(),
            degree,
            l,
            dim,
            psi,
            lam,
        })
    }

    pub fn ambient(&self) -> usize {
        self.psi.total
    }

    /// Equation matrix of the chain-map condition; its kernel is the space
    /// of degree-i chain maps of period L.
    fn cocycle_matrix(&self) -> Result<KMat> {
        let i = self.degree;
        let field = self.source.ring.poly_ring.field;
        let eq = Layout::build(self.l, self.dim, |n| {
            (self.target.rank_at(n - 1 - i), self.source.rank_at(n))
        });
        let mut m = KMat::zeros(field, eq.total, self.psi.total);
        for n in 0..self.l as i64 {
            let j = imod(n, self.l);
            let jprev = imod(n - 1, self.l);
            // (-1)^i d^D_{n-i} psi_n
            let left = sign_scale(&self.target.diff_at(n - i), i)
                .left_mult_operator(self.psi.shapes[j].1)?;
            add_block(&mut m, eq.offsets[j], self.psi.offsets[j], &left)?;
            // - psi_{n-1} d^C_n
            let right = self
                .source
                .diff_at(n)
                .right_mult_operator(self.psi.shapes[jprev].0)?
                .neg();
            add_block(&mut m, eq.offsets[j], self.psi.offsets[jprev], &right)?;
        }
        Ok(m)
    }

    /// Matrix of the boundary operator lambda -> d lambda + lambda d from
    /// homotopy space to map space.
    fn boundary_matrix(&self) -> Result<KMat> {
        let i = self.degree;
        let field = self.source.ring.poly_ring.field;
        let mut m = KMat::zeros(field, self.psi.total, self.lam.total);
        for n in 0..self.l as i64 {
            let j = imod(n, self.l);
            let jprev = imod(n - 1, self.l);
            let left = sign_scale(&self.target.diff_at(n + 1 - i), i)
                .left_mult_operator(self.lam.shapes[j].1)?;
            add_block(&mut m, self.psi.offsets[j], self.lam.offsets[j], &left)?;
            let right = self
                .source
                .diff_at(n)
                .right_mult_operator(self.lam.shapes[jprev].0)?;
            add_block(&mut m, self.psi.offsets[j], self.lam.offsets[jprev], &right)?;
        }
        Ok(m)
    }

    pub fn cocycle_basis(&self) -> Result<Vec<Vec<FieldElement>>> {
        self.cocycle_matrix()?.kernel_basis()
    }

    pub fn boundary_columns(&self) -> Result<Vec<Vec<FieldElement>>> {
        let b = self.boundary_matrix()?;
        Ok((0..b.cols).map(|c| b.col(c)).collect())
    }

    pub fn to_chain_map(&self, v: &[FieldElement]) -> Result<ChainMap> {
        if v.len() != self.psi.total {
            return Err(Error::shape("vector length vs map layout"));
        }
        let mut mats = Vec::with_capacity(self.l);
        for j in 0..self.l {
            let (r, c) = self.psi.shapes[j];
            let start = self.psi.offsets[j];
            let end = start + r * c * self.dim;
            mats.push(RMatrix::from_vector(&self.source.ring, r, c, &v[start..end])?);
        }
        // period-L chain maps between the original complexes
        let mut map = ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            mats,
        };
        map.mats.shrink_to_fit();
        Ok(map)
    }

    pub fn chain_map_to_vec(&self, m: &ChainMap) -> Result<Vec<FieldElement>> {
        let mut out = Vec::with_capacity(self.psi.total);
        for n in 0..self.l as i64 {
            out.extend(m.mat_at(n).vectorize()?);
        }
        Ok(out)
    }

    fn to_homotopy(&self, v: &[FieldElement]) -> Result<Homotopy> {
        let mut maps = Vec::with_capacity(self.l);
        for j in 0..self.l {
            let (r, c) = self.lam.shapes[j];
            let start = self.lam.offsets[j];
            let end = start + r * c * self.dim;
            maps.push(RMatrix::from_vector(&self.source.ring, r, c, &v[start..end])?);
        }
        Ok(Homotopy { degree: self.degree, maps })
    }

    /// Solve d lambda + lambda d = delta for a given parallel difference.
    pub fn solve_homotopy(&self, delta: &ChainMap) -> Result<Option<Homotopy>> {
        let rhs = self.chain_map_to_vec(delta)?;
        match self.boundary_matrix()?.solve(&rhs)? {
            None => Ok(None),
            Some(x) => Ok(Some(self.to_homotopy(&x)?)),
        }
    }

    /// Products r·psi for every non-unit k-basis monomial r; spans m·V.
    pub fn m_multiples(&self, v: &[FieldElement]) -> Result<Vec<Vec<FieldElement>>> {
        let map = self.to_chain_map(v)?;
        let ring = self.source.ring.clone();
        let basis: Vec<Monomial> = ring.kbasis()?.to_vec();
        let mut out = Vec::new();
        for m in basis.iter().filter(|m| !m.is_one()) {
            let r = RingElement::new(
                &ring,
                &crate::poly::Polynomial::monomial(
                    &ring.poly_ring,
                    m.clone(),
                    ring.poly_ring.field.one(),
                ),
            )?;
            out.push(self.chain_map_to_vec(&map.scale_r(&r)?)?);
        }
        Ok(out)
    }
}

/// Degree-i chain maps modulo homotopy, with representatives.
pub struct HomSpace {
    pub dim: usize,
    pub reps: Vec<ChainMap>,
    pub quotient: QuotientSpace,
    pub solver: HomSolver,
}

pub fn hom_space(
    source: &PeriodicComplex,
    target: &PeriodicComplex,
    degree: i64,
) -> Result<HomSpace> {
    hom_space_with_multiple(source, target, degree, 1)
}

/// Same, solving over maps of period L·multiple — the window-escalation
/// diagnostic; the default multiple 1 is the sound choice for periodic data.
pub fn hom_space_with_multiple(
    source: &PeriodicComplex,
    target: &PeriodicComplex,
    degree: i64,
    multiple: usize,
) -> Result<HomSpace> {
    let solver = HomSolver::new(source, target, degree, multiple)?;
    let cocycles = solver.cocycle_basis()?;
    let boundaries = solver.boundary_columns()?;
    let field = source.ring.poly_ring.field;
    let (quotient, idx) =
        QuotientSpace::build(field, solver.ambient(), &cocycles, &boundaries)?;
    let reps = idx
        .iter()
        .map(|&i| solver.to_chain_map(&cocycles[i]))
        .collect::<Result<Vec<_>>>()?;
    Ok(HomSpace { dim: reps.len(), reps, quotient, solver })
}

/// Homotopy between parallel maps over an Artinian ring, if one exists.
pub fn find_homotopy(psi: &ChainMap, psi2: &ChainMap) -> Result<Option<Homotopy>> {
    psi.check_parallel(psi2)?;
    let delta = psi.sub(psi2)?;
    if delta.is_zero() {
        let l = psi.period();
        let maps = (0..l as i64)
            .map(|n| {
                RMatrix::zero(
                    &psi.source.ring,
                    psi.target.rank_at(n + 1 - psi.degree),
                    psi.source.rank_at(n),
                )
            })
            .collect();
        return Ok(Some(Homotopy { degree: psi.degree, maps }));
    }
    let mult = psi.period() / psi.source.period.lcm(&psi.target.period);
    let solver = HomSolver::new(&psi.source, &psi.target, psi.degree, mult.max(1))?;
    solver.solve_homotopy(&delta)
}

/// Bounded-degree homotopy search over a possibly non-Artinian ring: the
/// entries of lambda range over normal-form monomials of degree <= max_deg.
pub fn find_homotopy_bounded(
    psi: &ChainMap,
    psi2: &ChainMap,
    max_deg: u32,
) -> Result<Option<Homotopy>> {
    psi.check_parallel(psi2)?;
    let delta = psi.sub(psi2)?;
    let ring = psi.source.ring.clone();
    let pring = ring.poly_ring.clone();
    let field = pring.field;
    let i = psi.degree;
    let l = psi.period();

    let diff_deg = |c: &PeriodicComplex| -> u32 {
        c.diffs
            .iter()
            .flat_map(|d| {
                (0..d.rows)
                    .flat_map(move |r| (0..d.cols).map(move |cc| (r, cc)))
                    .map(|(r, cc)| d.get(r, cc).lift().total_degree().unwrap_or(0))
            })
            .max()
            .unwrap_or(0)
    };
    let delta_deg = delta
        .mats
        .iter()
        .flat_map(|d| {
            (0..d.rows)
                .flat_map(move |r| (0..d.cols).map(move |cc| (r, cc)))
                .map(|(r, cc)| d.get(r, cc).lift().total_degree().unwrap_or(0))
        })
        .max()
        .unwrap_or(0);
    let eq_deg = (max_deg + diff_deg(&psi.source).max(diff_deg(&psi.target))).max(delta_deg);

    let unk_monos = standard_monomials_up_to(&ring, max_deg)?;
    let eq_monos = standard_monomials_up_to(&ring, eq_deg)?;
    let eq_index: std::collections::HashMap<Monomial, usize> =
        eq_monos.iter().cloned().enumerate().map(|(a, b)| (b, a)).collect();
    let em = eq_monos.len();

    // unknown layout: (n, row, col, mono)
    let lam_shape = |n: i64| -> (usize, usize) {
        (psi.target.rank_at(n + 1 - i), psi.source.rank_at(n))
    };
    let mut lam_off = Vec::with_capacity(l);
    let mut total_unknowns = 0;
    for n in 0..l as i64 {
        let (r, c) = lam_shape(n);
        lam_off.push(total_unknowns);
        total_unknowns += r * c * unk_monos.len();
    }
    // equation layout: (n, row, col, eq mono) with psi shapes
    let psi_shape = |n: i64| -> (usize, usize) {
        (psi.target.rank_at(n - i), psi.source.rank_at(n))
    };
    let mut eq_off = Vec::with_capacity(l);
    let mut total_eqs = 0;
    for n in 0..l as i64 {
        let (r, c) = psi_shape(n);
        eq_off.push(total_eqs);
        total_eqs += r * c * em;
    }

    let mut m = KMat::zeros(field, total_eqs, total_unknowns);
    let scatter = |mat: &mut KMat,
                       eq_base: usize,
                       col: usize,
                       poly: &crate::poly::Polynomial|
     -> Result<()> {
        for (mono, coef) in poly.terms() {
            let Some(&mi) = eq_index.get(mono) else {
                return Err(Error::Internal(
                    "bounded homotopy search overflowed its monomial window".into(),
                ));
            };
            let cur = mat.get(eq_base + mi, col).add(coef)?;
            mat.set(eq_base + mi, col, cur);
        }
        Ok(())
    };

    for n in 0..l as i64 {
        let j = imod(n, l);
        let (lr, lc) = lam_shape(n);
        let dd = sign_scale(&psi.target.diff_at(n + 1 - i), i);
        // term (-1)^i d^D_{n+1-i} lambda_n lands in equation n
        for a in 0..dd.rows {
            for k in 0..lr {
                let e = dd.get(a, k);
                if e.is_zero() {
                    continue;
                }
                for b in 0..lc {
                    for (ui, um) in unk_monos.iter().enumerate() {
                        let col = lam_off[j] + (k * lc + b) * unk_monos.len() + ui;
                        let prod = ring.nf(&e.lift().mul_term(um, &field.one())?)?;
                        let (_pr, pc) = psi_shape(n);
                        let eq_base = eq_off[j] + (a * pc + b) * em;
                        scatter(&mut m, eq_base, col, &prod)?;
                    }
                }
            }
        }
        // term lambda_{n} d^C_{n+1} lands in equation n+1
        let dc = psi.source.diff_at(n + 1);
        let j_next = imod(n + 1, l);
        let (_nr, nc) = psi_shape(n + 1);
        for a in 0..lr {
            for k in 0..lc {
                for b in 0..nc {
                    let e = dc.get(k, b);
                    if e.is_zero() {
                        continue;
                    }
                    for (ui, um) in unk_monos.iter().enumerate() {
                        let col = lam_off[j] + (a * lc + k) * unk_monos.len() + ui;
                        let prod = ring.nf(&e.lift().mul_term(um, &field.one())?)?;
                        let eq_base = eq_off[j_next] + (a * nc + b) * em;
                        scatter(&mut m, eq_base, col, &prod)?;
                    }
                }
            }
        }
    }

    let mut rhs = vec![field.zero(); total_eqs];
    for n in 0..l as i64 {
        let j = imod(n, l);
        let d = delta.mat_at(n);
        let (_r, c) = psi_shape(n);
        for a in 0..d.rows {
            for b in 0..d.cols {
                let e = d.get(a, b);
                for (mono, coef) in e.lift().terms() {
                    let Some(&mi) = eq_index.get(mono) else {
                        return Err(Error::Internal(
                            "bounded homotopy search overflowed its monomial window".into(),
                        ));
                    };
                    rhs[eq_off[j] + (a * c + b) * em + mi] = coef.clone();
                }
            }
        }
    }

    let Some(x) = m.solve(&rhs)? else {
        return Ok(None);
    };
    let mut maps = Vec::with_capacity(l);
    for n in 0..l as i64 {
        let j = imod(n, l);
        let (r, c) = lam_shape(n);
        let mut out = RMatrix::zero(&ring, r, c);
        for a in 0..r {
            for b in 0..c {
                let mut p = crate::poly::Polynomial::zero(&pring);
                for (ui, um) in unk_monos.iter().enumerate() {
                    let v = &x[lam_off[j] + (a * c + b) * unk_monos.len() + ui];
                    if !v.is_zero() {
                        p = p.add(&crate::poly::Polynomial::monomial(
                            &pring,
                            um.clone(),
                            v.clone(),
                        ))?;
                    }
                }
                out.set(a, b, RingElement::new(&ring, &p)?);
            }
        }
        maps.push(out);
    }
    let h = Homotopy { degree: i, maps };
    if verify_homotopy(psi, psi2, &h)? {
        Ok(Some(h))
    } else {
        Err(Error::Internal("bounded homotopy solution failed exact verification".into()))
    }
}

/// Normal-form monomials of total degree <= d, ascending in the term order.
pub fn standard_monomials_up_to(ring: &CiRingRc, d: u32) -> Result<Vec<Monomial>> {
    let n = ring.poly_ring.nvars();
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(
        ring: &CiRingRc,
        d: u32,
        var: usize,
        cur: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if var == cur.len() {
            let m = Monomial(cur.clone());
            let reducible = ring
                .gb
                .gens
                .iter()
                .any(|g| g.leading().map(|(lm, _)| lm.divides(&m)).unwrap_or(false));
            if !reducible {
                out.push(m);
            }
            return;
        }
        let used: u32 = cur[..var].iter().sum();
        for e in 0..=(d - used) {
            cur[var] = e;
            rec(ring, d, var + 1, cur, out);
        }
        cur[var] = 0;
    }
    rec(ring, d, 0, &mut cur, &mut out);
    out.sort_by(|a, b| ring.poly_ring.order.cmp(a, b));
    Ok(out)
}

/// A contraction of C (homotopy from the identity to zero), searched exactly
/// over Artinian rings and by bounded-degree escalation otherwise.
pub fn contraction(c: &PeriodicComplex, degree_budget: u32) -> Result<Option<Homotopy>> {
    let id = ChainMap::identity(c)?;
    let zero = ChainMap::zero(c, c, 0)?;
    if c.ring.artinian {
        return find_homotopy(&id, &zero);
    }
    for d in 0..=degree_budget {
        if let Some(h) = find_homotopy_bounded(&id, &zero, d)? {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::parse::{parse_matrix, parse_poly};
    use crate::poly::{PolyRing, RingRc};
    use crate::rings::make_ci_ring;

    fn hypersurface() -> (RingRc, CiRingRc) {
        let r = PolyRing::default_grevlex(FieldSpec::Rational, &["x"]).unwrap();
        let ci = make_ci_ring(&r, vec![parse_poly("x^2", &r, 1, 1).unwrap()]).unwrap();
        (r, ci)
    }

    fn cx(ring: &CiRingRc, src: &str) -> PeriodicComplex {
        let rows = parse_matrix(src, &ring.poly_ring, 1, 1).unwrap();
        let m = RMatrix::from_polys(ring, rows).unwrap();
        let rank = m.rows;
        PeriodicComplex::new(ring, vec![rank], vec![m]).unwrap()
    }

    #[test]
    fn square_not_zero_detected() {
        let r = PolyRing::default_grevlex(FieldSpec::Rational, &["x"]).unwrap();
        let ci = make_ci_ring(&r, vec![parse_poly("x^3", &r, 1, 1).unwrap()]).unwrap();
        let d = RMatrix::from_polys(&ci, vec![vec![parse_poly("x", &r, 1, 1).unwrap()]]).unwrap();
        let err = PeriodicComplex::new(&ci, vec![1], vec![d]).unwrap_err();
        assert_eq!(err, Error::SquareNotZero { degree: 0 });
    }

    #[test]
    fn shift_signs_and_composition() {
        let (_r, ci) = hypersurface();
        let c = cx(&ci, "[[x]]");
        let s1 = c.shift(1).unwrap();
        assert_eq!(s1.diffs[0], c.diffs[0].neg());
        let s2 = c.shift(2).unwrap();
        assert_eq!(s2.diffs[0], c.diffs[0]);
        let s11 = s1.shift(1).unwrap();
        assert_eq!(s11, s2);
        // period-2 shift moves ranks around
        let p2 = {
            let d0 = RMatrix::from_polys(
                &ci,
                vec![vec![parse_poly("x", &ci.poly_ring, 1, 1).unwrap()]],
            )
            .unwrap();
            let d1 = d0.neg();
            PeriodicComplex::new(&ci, vec![1, 1], vec![d0, d1]).unwrap()
        };
        let sh = p2.shift(1).unwrap();
        assert_eq!(sh.diffs[0], p2.diffs[1].neg());
        assert_eq!(sh.diffs[1], p2.diffs[0].neg());
    }

    #[test]
    fn total_acyclicity() {
        let (_r, ci) = hypersurface();
        let good = cx(&ci, "[[x]]");
        assert!(good.check_totally_acyclic().unwrap().ok());
        // zero differential on a nonzero module is not exact
        let zero = PeriodicComplex::new(&ci, vec![1], vec![RMatrix::zero(&ci, 1, 1)]).unwrap();
        let rep = zero.check_totally_acyclic().unwrap();
        assert!(!rep.exact);
    }

    #[test]
    fn hom_space_identity_class() {
        let (_r, ci) = hypersurface();
        let c = cx(&ci, "[[x]]");
        let h = hom_space(&c, &c, 0).unwrap();
        assert_eq!(h.dim, 1);
        // identity lies in the solution space with nonzero class
        let id = ChainMap::identity(&c).unwrap();
        let v = h.solver.chain_map_to_vec(&id).unwrap();
        let coords = h.quotient.coords(&v).unwrap().unwrap();
        assert!(coords.iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn hom_space_shift_invariance() {
        let (_r, ci) = hypersurface();
        let c = cx(&ci, "[[x]]");
        for i in 0..4 {
            let h = hom_space(&c, &c, i).unwrap();
            assert_eq!(h.dim, 1, "degree {i}");
            let shifted = c.shift(2).unwrap();
            let hs = hom_space(&c, &shifted, i).unwrap();
            assert_eq!(hs.dim, 1);
        }
    }

    #[test]
    fn homotopy_found_for_boundary() {
        let (r, ci) = hypersurface();
        let c = cx(&ci, "[[x]]");
        // psi = d lambda + lambda d for lambda = [[3 + x]]
        let lam =
            RMatrix::from_polys(&ci, vec![vec![parse_poly("3 + x", &r, 1, 1).unwrap()]]).unwrap();
        let h0 = Homotopy { degree: 0, maps: vec![lam.clone()] };
        let d = c.diff_at(0);
        let psi_mat = d.mul(&lam).unwrap().add(&lam.mul(&d).unwrap()).unwrap();
        let psi = ChainMap::new(&c, &c, 0, vec![psi_mat]).unwrap();
        let zero = ChainMap::zero(&c, &c, 0).unwrap();
        assert!(verify_homotopy(&psi, &zero, &h0).unwrap());
        let found = find_homotopy(&psi, &zero).unwrap().unwrap();
        assert!(verify_homotopy(&psi, &zero, &found).unwrap());
        // but the identity is not null-homotopic (C is not contractible)
        let id = ChainMap::identity(&c).unwrap();
        assert!(find_homotopy(&id, &zero).unwrap().is_none());
    }

    #[test]
    fn mapping_cone_matches_display() {
        let (_r, ci) = hypersurface();
        let c = cx(&ci, "[[x]]");
        let id = ChainMap::identity(&c).unwrap();
        let cone = mapping_cone(&id).unwrap();
        assert_eq!(cone.ranks, vec![2]);
        assert_eq!(cone.diffs[0].to_string(), "[[-x, 0], [1, x]]");
        // cone of an isomorphism is contractible
        let h = contraction(&cone, 0).unwrap();
        assert!(h.is_some());
    }

    #[test]
    fn compose_degrees_add() {
        let (_r, ci) = hypersurface();
        let c = cx(&ci, "[[x]]");
        let x = RingElement::new(&ci, &parse_poly("x", &ci.poly_ring, 1, 1).unwrap()).unwrap();
        let f = ChainMap::identity(&c).unwrap().scale_r(&x).unwrap();
        let g = compose(&f, &f).unwrap();
        assert_eq!(g.degree, 0);
        assert!(g.is_zero());
        let s2 = ChainMap::new(&c, &c, 2, vec![RMatrix::identity(&ci, 1)]).unwrap();
        let s4 = compose(&s2, &s2).unwrap();
        assert_eq!(s4.degree, 4);
        assert!(!s4.is_zero());
    }

    #[test]
    fn period_two_maps() {
        let (r, ci) = hypersurface();
        let d0 =
            RMatrix::from_polys(&ci, vec![vec![parse_poly("x", &r, 1, 1).unwrap()]]).unwrap();
        let c2 = PeriodicComplex::new(&ci, vec![1, 1], vec![d0.clone(), d0.neg()]).unwrap();
        // Periodic semantics: homotopies are solved over the same window as
        // maps, so the class (x, 0) survives here — it is only killed by a
        // non-periodic (drifting) homotopy.  The minimal-period presentation
        // below has window 1 and sees the honest one-dimensional answer.
        let h = hom_space(&c2, &c2, 0).unwrap();
        assert_eq!(h.dim, 2);
        let c1 = cx(&ci, "[[x]]");
        assert_eq!(hom_space(&c1, &c1, 0).unwrap().dim, 1);
        // maps between periods 1 and 2 live over lcm 2
        let hm = hom_space(&c1, &c2, 0).unwrap();
        assert_eq!(hm.solver.l, 2);
    }
}
