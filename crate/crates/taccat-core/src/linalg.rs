//! Dense exact linear algebra over the coefficient field: rref, kernels,
//! solving, and deterministic quotient-space bases.

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KMat {
    pub field: FieldSpec,
    pub rows: usize,
    pub cols: usize,
    data: Vec<FieldElement>,
}

impl KMat {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        KMat { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = KMat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::shape("rows of unequal length"));
        }
        Ok(KMat { field, rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElement {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> KMat {
        let mut out = KMat::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &KMat) -> Result<KMat> {
        if self.cols != other.rows || self.field != other.field {
            return Err(Error::shape(format!(
                "matrix product {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = KMat::zeros(self.field, self.rows, other.cols);
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

    pub fn add(&self, other: &KMat) -> Result<KMat> {
        if self.rows != other.rows || self.cols != other.cols || self.field != other.field {
            return Err(Error::shape("matrix sum shapes"));
        }
        let mut out = self.clone();
        for i in 0..self.data.len() {
            out.data[i] = self.data[i].add(&other.data[i])?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElement) -> Result<KMat> {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = v.mul(c)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> KMat {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = v.neg();
        }
        out
    }

    pub fn apply(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::shape("matrix-vector shapes"));
        }
        let mut out = vec![self.field.zero(); self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.get(r, c);
                if a.is_zero() || v[c].is_zero() {
                    continue;
                }
                out[r] = out[r].add(&a.mul(&v[c])?)?;
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> Result<(KMat, Vec<usize>)> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    let a = m.get(row, c).clone();
                    let b = m.get(pr, c).clone();
                    m.set(row, c, b);
                    m.set(pr, c, a);
                }
            }
            let inv = m.get(row, col).inv()?;
            for c in col..m.cols {
                let v = m.get(row, c).mul(&inv)?;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).clone();
                for c in col..m.cols {
                    let v = m.get(r, c).sub(&f.mul(m.get(row, c))?)?;
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Ok((m, pivots))
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.rref()?.1.len())
    }

    /// Deterministic kernel basis: one vector per free column, ascending.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<FieldElement>>> {
        let (r, pivots) = self.rref()?;
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = r.get(prow, free).neg();
            }
            basis.push(v);
        }
        Ok(basis)
    }

    /// One solution of A x = b, if any.
    pub fn solve(&self, b: &[FieldElement]) -> Result<Option<Vec<FieldElement>>> {
        if b.len() != self.rows {
            return Err(Error::shape("solve rhs length"));
        }
        let mut aug = KMat::zeros(self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let (rr, pivots) = aug.rref()?;
        if pivots.contains(&self.cols) {
            return Ok(None); // inconsistent
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = rr.get(prow, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix, or None if singular.
    pub fn inverse(&self) -> Result<Option<KMat>> {
        if self.rows != self.cols {
            return Err(Error::shape("inverse of non-square matrix"));
        }
        let n = self.rows;
        let mut aug = KMat::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, self.field.one());
        }
        let (rr, pivots) = aug.rref()?;
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Ok(None);
        }
        let mut out = KMat::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, rr.get(r, n + c).clone());
            }
        }
        Ok(Some(out))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn hstack(&self, other: &KMat) -> Result<KMat> {
        if self.rows != other.rows || self.field != other.field {
            return Err(Error::shape("hstack row counts"));
        }
        let mut out = KMat::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        Ok(out)
    }
}

/// A subspace of k^n held as an rref basis, plus chosen complement
/// representatives for quotient computations.
#[derive(Debug, Clone)]
pub struct QuotientSpace {
    pub field: FieldSpec,
    pub ambient: usize,
    /// rref rows spanning the subspace being quotiented out
    pub sub: Vec<Vec<FieldElement>>,
    /// representatives of a basis of (span of candidates)/(sub)
    pub reps: Vec<Vec<FieldElement>>,
}

fn reduce_against(
    v: &mut Vec<FieldElement>,
    rows: &[(usize, Vec<FieldElement>)],
) -> Result<()> {
    for (pivot, row) in rows {
        if v[*pivot].is_zero() {
            continue;
        }
        let f = v[*pivot].clone();
        for c in 0..v.len() {
            v[c] = v[c].sub(&f.mul(&row[c])?)?;
        }
    }
    Ok(())
}

fn normalize_pivot(v: &mut Vec<FieldElement>) -> Result<Option<usize>> {
    let Some(p) = v.iter().position(|x| !x.is_zero()) else {
        return Ok(None);
    };
    let inv = v[p].inv()?;
    for c in 0..v.len() {
        v[c] = v[c].mul(&inv)?;
    }
    Ok(Some(p))
}

/// Incremental rref accumulator over row vectors.
#[derive(Debug, Clone)]
pub struct RowSpace {
    pub field: FieldSpec,
    pub ambient: usize,
    rows: Vec<(usize, Vec<FieldElement>)>, // (pivot, row), pivots strictly tracked
}

impl RowSpace {
    pub fn new(field: FieldSpec, ambient: usize) -> Self {
        RowSpace { field, ambient, rows: Vec::new() }
    }

    /// Insert a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, v: &[FieldElement]) -> Result<bool> {
        let mut v = v.to_vec();
        reduce_against(&mut v, &self.rows)?;
        match normalize_pivot(&mut v)? {
            None => Ok(false),
            Some(p) => {
                // back-substitute into existing rows to stay fully reduced
                for (_, row) in &mut self.rows {
                    if row[p].is_zero() {
                        continue;
                    }
                    let f = row[p].clone();
                    for c in 0..self.ambient {
                        row[c] = row[c].sub(&f.mul(&v[c])?)?;
                    }
                }
                self.rows.push((p, v));
                self.rows.sort_by_key(|(p, _)| *p);
                Ok(true)
            }
        }
    }

    pub fn contains(&self, v: &[FieldElement]) -> Result<bool> {
        let mut v = v.to_vec();
        reduce_against(&mut v, &self.rows)?;
        Ok(v.iter().all(|x| x.is_zero()))
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis_rows(&self) -> Vec<Vec<FieldElement>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

impl QuotientSpace {
    /// Quotient of span(candidates) by span(sub), with representatives drawn
    /// greedily from `candidates` in order (deterministic).
    pub fn build(
        field: FieldSpec,
        ambient: usize,
        candidates: &[Vec<FieldElement>],
        sub: &[Vec<FieldElement>],
    ) -> Result<(QuotientSpace, Vec<usize>)> {
        let mut acc = RowSpace::new(field, ambient);
        let mut subspace = RowSpace::new(field, ambient);
        for s in sub {
            subspace.insert(s)?;
            acc.insert(s)?;
        }
        let mut reps = Vec::new();
        let mut idx = Vec::new();
        for (i, cand) in candidates.iter().enumerate() {
            if acc.insert(cand)? {
                reps.push(cand.clone());
                idx.push(i);
            }
        }
        Ok((
            QuotientSpace { field, ambient, sub: subspace.basis_rows(), reps },
            idx,
        ))
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of v's class in the representative basis, or None when v
    /// is not in span(sub) + span(reps).
    pub fn coords(&self, v: &[FieldElement]) -> Result<Option<Vec<FieldElement>>> {
        // solve [sub^T | reps^T] c = v and keep the reps block
        let total = self.sub.len() + self.reps.len();
        let mut m = KMat::zeros(self.field, self.ambient, total);
        for (j, row) in self.sub.iter().chain(self.reps.iter()).enumerate() {
            for i in 0..self.ambient {
                m.set(i, j, row[i].clone());
            }
        }
        Ok(m
            .solve(v)?
            .map(|c| c[self.sub.len()..].to_vec()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    fn fe(n: i64) -> FieldElement {
        q().from_i64(n)
    }

    #[test]
    fn rref_and_rank() {
        let m = KMat::from_rows(
            q(),
            vec![
                vec![fe(1), fe(2), fe(3)],
                vec![fe(2), fe(4), fe(6)],
                vec![fe(1), fe(0), fe(1)],
            ],
        )
        .unwrap();
        assert_eq!(m.rank().unwrap(), 2);
        let k = m.kernel_basis().unwrap();
        assert_eq!(k.len(), 1);
        for v in &k {
            assert!(m.apply(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let m = KMat::from_rows(q(), vec![vec![fe(2), fe(1)], vec![fe(1), fe(1)]]).unwrap();
        let x = m.solve(&[fe(3), fe(2)]).unwrap().unwrap();
        assert_eq!(x, vec![fe(1), fe(1)]);
        let inv = m.inverse().unwrap().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), KMat::identity(q(), 2));
        let sing = KMat::from_rows(q(), vec![vec![fe(1), fe(2)], vec![fe(2), fe(4)]]).unwrap();
        assert!(sing.inverse().unwrap().is_none());
    }

    #[test]
    fn quotient_space_reps() {
        // span{e1, e2, e3} / span{e1+e2}: dim 2
        let cands = vec![
            vec![fe(1), fe(0), fe(0)],
            vec![fe(0), fe(1), fe(0)],
            vec![fe(0), fe(0), fe(1)],
        ];
        let sub = vec![vec![fe(1), fe(1), fe(0)]];
        let (qs, idx) = QuotientSpace::build(q(), 3, &cands, &sub).unwrap();
        assert_eq!(qs.dim(), 2);
        assert_eq!(idx, vec![0, 2]);
        // e2 = (e1+e2) - e1 => class = -[e1 class]
        let c = qs.coords(&[fe(0), fe(1), fe(0)]).unwrap().unwrap();
        assert_eq!(c, vec![fe(-1), fe(0)]);

        // with candidates {e1} only, e3 falls outside sub + reps
        let (qs2, _) = QuotientSpace::build(q(), 3, &cands[..1], &sub).unwrap();
        assert!(qs2.coords(&[fe(0), fe(0), fe(1)]).unwrap().is_none());
    }
}
