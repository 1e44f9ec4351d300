//! Complete intersection quotients R = Q/(f_1..f_c), their k-bases and
//! multiplication tables, and exact matrices over them.

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::groebner::{buchberger, ideal_equal, ideal_quotient, GroebnerBasis};
use crate::linalg::KMat;
use crate::poly::{same_ring, Monomial, Polynomial, RingRc};
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug)]
pub struct CiRing {
    pub poly_ring: RingRc,
    /// The defining relations, in declaration order; empty for the base ring Q.
    pub relations: Vec<Polynomial>,
    pub gb: GroebnerBasis,
    pub artinian: bool,
    /// Standard monomials, ascending in the term order; None when the
    /// quotient is not finite-dimensional over k.
    kbasis: Option<Vec<Monomial>>,
    kindex: HashMap<Monomial, usize>,
    /// mult[u][v] = coordinates of NF(b_u * b_v); present iff artinian.
    mult: Vec<Vec<Vec<FieldElement>>>,
}

pub type CiRingRc = Arc<CiRing>;

impl PartialEq for CiRing {
    fn eq(&self, other: &Self) -> bool {
        self.poly_ring == other.poly_ring && self.relations == other.relations
    }
}

/// Validated constructor: checks the regular-sequence property (with a
/// witness index), then membership in m^2, then builds the Groebner data.
pub fn make_ci_ring(ring: &RingRc, relations: Vec<Polynomial>) -> Result<CiRingRc> {
    if relations.is_empty() {
        return Err(Error::Internal("make_ci_ring requires at least one relation".into()));
    }
    for f in &relations {
        same_ring(ring, f.ring())?;
    }
    // regular sequence test first: ((f_1..f_{i-1}) : f_i) must equal (f_1..f_{i-1})
    for i in 0..relations.len() {
        let prior = buchberger(ring, &relations[..i])?;
        let quot = ideal_quotient(&prior, &relations[i])?;
        let quot_gb = buchberger(ring, &quot)?;
        if !ideal_equal(&quot_gb, &prior)? {
            return Err(Error::NotRegularSequence { witness: i + 1 });
        }
    }
    for (i, f) in relations.iter().enumerate() {
        if !f.in_m_squared() {
            return Err(Error::NotInMSquared { index: i + 1 });
        }
    }
    CiRing::quotient_unchecked(ring, relations)
}

impl CiRing {
    /// The base polynomial ring viewed as a CiRing with no relations.
    pub fn base(ring: &RingRc) -> CiRingRc {
        let gb = buchberger(ring, &[]).expect("empty basis");
        Arc::new(CiRing {
            poly_ring: ring.clone(),
            relations: vec![],
            gb,
            artinian: false,
            kbasis: None,
            kindex: HashMap::new(),
            mult: vec![],
        })
    }

    /// Quotient by an already-validated relation list (tower intermediates
    /// are sublists of a validated regular sequence).
    pub fn quotient_unchecked(ring: &RingRc, relations: Vec<Polynomial>) -> Result<CiRingRc> {
        let gb = buchberger(ring, &relations)?;
        let n = ring.nvars();
        // Artinian iff every variable has a pure power among the leading terms
        let mut bound = vec![None; n];
        for g in &gb.gens {
            let (lm, _) = g.leading().unwrap();
            let support: Vec<usize> = (0..n).filter(|&v| lm.0[v] > 0).collect();
            if support.len() == 1 {
                let v = support[0];
                let e = lm.0[v];
                if bound[v].map(|b| e < b).unwrap_or(true) {
                    bound[v] = Some(e);
                }
            }
            if support.is_empty() {
                // unit ideal: zero ring; treat as artinian with empty basis
                bound = vec![Some(0); n];
                break;
            }
        }
        let artinian = bound.iter().all(|b| b.is_some());
        let (kbasis, kindex, mult) = if artinian {
            let bounds: Vec<u32> = bound.into_iter().map(|b| b.unwrap()).collect();
            let mut monos = Vec::new();
            enumerate_standard(&gb, &bounds, &mut vec![0; n], 0, &mut monos)?;
            monos.sort_by(|a, b| ring.order.cmp(a, b));
            let kindex: HashMap<Monomial, usize> =
                monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let dim = monos.len();
            let mut mult = vec![vec![Vec::new(); dim]; dim];
            for u in 0..dim {
                for v in 0..dim {
                    let prod = Polynomial::monomial(
                        ring,
                        monos[u].mul(&monos[v]),
                        ring.field.one(),
                    );
                    let nf = gb.normal_form(&prod)?;
                    mult[u][v] = coords_of_nf(&nf, &kindex, dim)?;
                }
            }
            (Some(monos), kindex, mult)
        } else {
            (None, HashMap::new(), vec![])
        };
        Ok(Arc::new(CiRing {
            poly_ring: ring.clone(),
            relations,
            gb,
            artinian,
            kbasis,
            kindex,
            mult,
        }))
    }

    pub fn dim_k(&self) -> Option<usize> {
        self.kbasis.as_ref().map(|b| b.len())
    }

    pub fn kbasis(&self) -> Result<&[Monomial]> {
        self.kbasis.as_deref().ok_or(Error::NotArtinian)
    }

    pub fn nf(&self, p: &Polynomial) -> Result<Polynomial> {
        self.gb.normal_form(p)
    }

    pub fn num_relations(&self) -> usize {
        self.relations.len()
    }

    /// True when `coarser`'s relation ideal is contained in ours, i.e. we are
    /// a declared quotient of it (same ambient polynomial ring).
    pub fn is_quotient_of(&self, coarser: &CiRing) -> Result<bool> {
        if self.poly_ring != coarser.poly_ring {
            return Ok(false);
        }
        for f in &coarser.relations {
            if !self.gb.contains(f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coordinates in the standard-monomial basis of an already-reduced rep.
    fn coords(&self, rep: &Polynomial) -> Result<Vec<FieldElement>> {
        let dim = self.dim_k().ok_or(Error::NotArtinian)?;
        coords_of_nf(rep, &self.kindex, dim)
    }

    /// Coordinates of NF(b_v * e) for a reduced element e — one column of the
    /// multiplication-by-e operator.
    fn mult_basis(&self, e_coords: &[FieldElement], v: usize) -> Result<Vec<FieldElement>> {
        let dim = e_coords.len();
        let mut out = vec![self.poly_ring.field.zero(); dim];
        for (u, c) in e_coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (w, t) in self.mult[u][v].iter().enumerate() {
                if !t.is_zero() {
                    out[w] = out[w].add(&c.mul(t)?)?;
                }
            }
        }
        Ok(out)
    }
}

fn coords_of_nf(
    nf: &Polynomial,
    kindex: &HashMap<Monomial, usize>,
    dim: usize,
) -> Result<Vec<FieldElement>> {
    let mut out = vec![nf.ring().field.zero(); dim];
    for (m, c) in nf.terms() {
        let idx = kindex
            .get(m)
            .ok_or_else(|| Error::Internal(format!("non-standard monomial in normal form")))?;
        out[*idx] = c.clone();
    }
    Ok(out)
}

fn enumerate_standard(
    gb: &GroebnerBasis,
    bounds: &[u32],
    current: &mut Vec<u32>,
    var: usize,
    out: &mut Vec<Monomial>,
) -> Result<()> {
    if var == bounds.len() {
        let m = Monomial(current.clone());
        let divisible = gb
            .gens
            .iter()
            .any(|g| g.leading().map(|(lm, _)| lm.divides(&m)).unwrap_or(false));
        if !divisible {
            out.push(m);
        }
        return Ok(());
    }
    for e in 0..bounds[var] {
        current[var] = e;
        enumerate_standard(gb, bounds, current, var + 1, out)?;
    }
    current[var] = 0;
    Ok(())
}

/// An element of a CiRing, stored as its normal form.
#[derive(Debug, Clone, PartialEq)]
pub struct RingElement {
    pub ring: CiRingRc,
    rep: Polynomial,
}

impl RingElement {
    pub fn new(ring: &CiRingRc, p: &Polynomial) -> Result<Self> {
        same_ring(&ring.poly_ring, p.ring())?;
        Ok(RingElement { ring: ring.clone(), rep: ring.nf(p)? })
    }

    pub fn zero(ring: &CiRingRc) -> Self {
        RingElement { ring: ring.clone(), rep: Polynomial::zero(&ring.poly_ring) }
    }

    pub fn one(ring: &CiRingRc) -> Self {
        RingElement {
            ring: ring.clone(),
            rep: ring.nf(&Polynomial::one(&ring.poly_ring)).expect("nf of 1"),
        }
    }

    pub fn scalar(ring: &CiRingRc, c: FieldElement) -> Result<Self> {
        RingElement::new(ring, &Polynomial::constant(&ring.poly_ring, c))
    }

    /// Canonical polynomial representative (the normal form itself).
    pub fn lift(&self) -> Polynomial {
        self.rep.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    fn same(&self, other: &RingElement) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.same(other)?;
        Ok(RingElement { ring: self.ring.clone(), rep: self.rep.add(&other.rep)? })
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.same(other)?;
        Ok(RingElement { ring: self.ring.clone(), rep: self.rep.sub(&other.rep)? })
    }

    pub fn neg(&self) -> RingElement {
        RingElement { ring: self.ring.clone(), rep: self.rep.neg() }
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.same(other)?;
        Ok(RingElement {
            ring: self.ring.clone(),
            rep: self.ring.nf(&self.rep.mul(&other.rep)?)?,
        })
    }

    pub fn scale(&self, c: &FieldElement) -> Result<RingElement> {
        Ok(RingElement { ring: self.ring.clone(), rep: self.rep.scale(c)? })
    }

    pub fn coords(&self) -> Result<Vec<FieldElement>> {
        self.ring.coords(&self.rep)
    }

    /// Move to another quotient of the same polynomial ring (re-reduce).
    pub fn to_ring(&self, target: &CiRingRc) -> Result<RingElement> {
        RingElement::new(target, &self.rep)
    }
}

impl std::fmt::Display for RingElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.rep)
    }
}

/// A dense matrix over a CiRing.
#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix {
    pub ring: CiRingRc,
    pub rows: usize,
    pub cols: usize,
    entries: Vec<RingElement>,
}

impl RMatrix {
    pub fn zero(ring: &CiRingRc, rows: usize, cols: usize) -> Self {
        RMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![RingElement::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: &CiRingRc, n: usize) -> Self {
        let mut m = RMatrix::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, RingElement::one(ring));
        }
        m
    }

    pub fn scalar_identity(ring: &CiRingRc, n: usize, s: &RingElement) -> Self {
        let mut m = RMatrix::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, s.clone());
        }
        m
    }

    pub fn from_polys(ring: &CiRingRc, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::shape("rows of unequal length"));
        }
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            for p in row {
                entries.push(RingElement::new(ring, &p)?);
            }
        }
        Ok(RMatrix { ring: ring.clone(), rows: r, cols: c, entries })
    }

    pub fn get(&self, r: usize, c: usize) -> &RingElement {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RingElement) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, other: &RMatrix) -> Result<RMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::shape("matrix sum over R"));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = a.add(b)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &RMatrix) -> Result<RMatrix> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RMatrix {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.neg();
        }
        out
    }

    pub fn mul(&self, other: &RMatrix) -> Result<RMatrix> {
        if self.cols != other.rows {
            return Err(Error::shape(format!(
                "matrix product over R: {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let mut out = RMatrix::zero(&self.ring, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(r, c).add(&a.mul(b)?)?;
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &RingElement) -> Result<RMatrix> {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.mul(s)?;
        }
        Ok(out)
    }

    pub fn scale_k(&self, c: &FieldElement) -> Result<RMatrix> {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.scale(c)?;
        }
        Ok(out)
    }

    pub fn transpose(&self) -> RMatrix {
        let mut out = RMatrix::zero(&self.ring, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    /// Re-reduce every entry into another quotient of the same poly ring.
    pub fn to_ring(&self, target: &CiRingRc) -> Result<RMatrix> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(e.to_ring(target)?);
        }
        Ok(RMatrix {
            ring: target.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn block_2x2(tl: &RMatrix, tr: &RMatrix, bl: &RMatrix, br: &RMatrix) -> Result<RMatrix> {
        if tl.rows != tr.rows || bl.rows != br.rows || tl.cols != bl.cols || tr.cols != br.cols {
            return Err(Error::shape("2x2 block assembly"));
        }
        let ring = tl.ring.clone();
        let rows = tl.rows + bl.rows;
        let cols = tl.cols + tr.cols;
        let mut out = RMatrix::zero(&ring, rows, cols);
        for r in 0..tl.rows {
            for c in 0..tl.cols {
                out.set(r, c, tl.get(r, c).clone());
            }
            for c in 0..tr.cols {
                out.set(r, tl.cols + c, tr.get(r, c).clone());
            }
        }
        for r in 0..bl.rows {
            for c in 0..bl.cols {
                out.set(tl.rows + r, c, bl.get(r, c).clone());
            }
            for c in 0..br.cols {
                out.set(tl.rows + r, tl.cols + c, br.get(r, c).clone());
            }
        }
        Ok(out)
    }

    /// Direct sum diag(self, other).
    pub fn block_diag(&self, other: &RMatrix) -> Result<RMatrix> {
        let tr = RMatrix::zero(&self.ring, self.rows, other.cols);
        let bl = RMatrix::zero(&self.ring, other.rows, self.cols);
        RMatrix::block_2x2(self, &tr, &bl, other)
    }

    // ---- k-linearization over Artinian rings ---------------------------

    /// Flatten to k-coordinates: entry-major (row, col), then k-basis index.
    pub fn vectorize(&self) -> Result<Vec<FieldElement>> {
        let mut out = Vec::new();
        for e in &self.entries {
            out.extend(e.coords()?);
        }
        Ok(out)
    }

    pub fn from_vector(
        ring: &CiRingRc,
        rows: usize,
        cols: usize,
        v: &[FieldElement],
    ) -> Result<RMatrix> {
        let dim = ring.dim_k().ok_or(Error::NotArtinian)?;
        if v.len() != rows * cols * dim {
            return Err(Error::shape("vector length vs matrix shape"));
        }
        let basis = ring.kbasis()?.to_vec();
        let mut out = RMatrix::zero(ring, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                let off = (r * cols + c) * dim;
                let mut p = Polynomial::zero(&ring.poly_ring);
                for (u, m) in basis.iter().enumerate() {
                    if !v[off + u].is_zero() {
                        p = p.add(&Polynomial::monomial(
                            &ring.poly_ring,
                            m.clone(),
                            v[off + u].clone(),
                        ))?;
                    }
                }
                out.set(r, c, RingElement::new(ring, &p)?);
            }
        }
        Ok(out)
    }

    /// k-matrix of X -> A·X for X of shape (A.cols × xcols).
    pub fn left_mult_operator(&self, xcols: usize) -> Result<KMat> {
        let ring = &self.ring;
        let dim = ring.dim_k().ok_or(Error::NotArtinian)?;
        let field = ring.poly_ring.field;
        let out_rows = self.rows * xcols * dim;
        let in_cols = self.cols * xcols * dim;
        let mut m = KMat::zeros(field, out_rows, in_cols);
        for k in 0..self.cols {
            for r in 0..self.rows {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                let ac = a.coords()?;
                for v in 0..dim {
                    let col_img = ring.mult_basis(&ac, v)?;
                    for c in 0..xcols {
                        let j = (k * xcols + c) * dim + v;
                        for (w, val) in col_img.iter().enumerate() {
                            if !val.is_zero() {
                                let i = (r * xcols + c) * dim + w;
                                let cur = m.get(i, j).add(val)?;
                                m.set(i, j, cur);
                            }
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    /// k-matrix of X -> X·B for X of shape (xrows × B.rows).
    pub fn right_mult_operator(&self, xrows: usize) -> Result<KMat> {
        let ring = &self.ring;
        let dim = ring.dim_k().ok_or(Error::NotArtinian)?;
        let field = ring.poly_ring.field;
        let out_rows = xrows * self.cols * dim;
        let in_cols = xrows * self.rows * dim;
        let mut m = KMat::zeros(field, out_rows, in_cols);
        for k in 0..self.rows {
            for c in 0..self.cols {
                let b = self.get(k, c);
                if b.is_zero() {
                    continue;
                }
                let bc = b.coords()?;
                for v in 0..dim {
                    // coords of b_v * B[k,c]
                    let col_img = ring.mult_basis(&bc, v)?;
                    for r in 0..xrows {
                        let j = (r * self.rows + k) * dim + v;
                        for (w, val) in col_img.iter().enumerate() {
                            if !val.is_zero() {
                                let i = (r * self.cols + c) * dim + w;
                                let cur = m.get(i, j).add(val)?;
                                m.set(i, j, cur);
                            }
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    /// Rank over k of the map R^cols -> R^rows this matrix defines.
    pub fn rank_k(&self) -> Result<usize> {
        self.left_mult_operator(1)?.rank()
    }
}

impl std::fmt::Display for RMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
