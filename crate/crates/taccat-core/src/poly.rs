//! Multivariate polynomials with explicit term orders.
//!
//! Terms are kept sorted strictly descending in the ring's order, with no zero
//! coefficients, so equality and printing are canonical.

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// Exponent vector; index = variable declaration index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// other / self, assuming divisibility.
    pub fn quotient_into(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum OrderKind {
    Grevlex,
    Lex,
}

/// A term order: kind plus variable significance.  `sig` lists variable
/// indices from most to least significant; the default makes the last declared
/// variable the most significant (x1 < x2 < ... < xn).
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct TermOrder {
    pub kind: OrderKind,
    pub sig: Vec<usize>,
}

impl TermOrder {
    pub fn grevlex(nvars: usize) -> Self {
        TermOrder { kind: OrderKind::Grevlex, sig: (0..nvars).rev().collect() }
    }

    pub fn lex(nvars: usize) -> Self {
        TermOrder { kind: OrderKind::Lex, sig: (0..nvars).rev().collect() }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Lex => {
                for &v in &self.sig {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            OrderKind::Grevlex => {
                match a.total_degree().cmp(&b.total_degree()) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
                // equal degree: scan least significant first; the monomial
                // with the smaller exponent there is the larger one
                for &v in self.sig.iter().rev() {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => continue,
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            OrderKind::Grevlex => "grevlex",
            OrderKind::Lex => "lex",
        }
    }
}

/// The ambient polynomial ring k[vars] with a fixed term order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub order: TermOrder,
}

pub type RingRc = Arc<PolyRing>;

impl PolyRing {
    pub fn new(field: FieldSpec, vars: Vec<String>, order: TermOrder) -> Result<RingRc> {
        field.validate()?;
        if order.sig.len() != vars.len() {
            return Err(Error::OrderMismatch);
        }
        let mut seen = std::collections::HashSet::new();
        for v in &vars {
            if !seen.insert(v.clone()) {
                return Err(Error::DuplicateName { name: v.clone() });
            }
        }
        Ok(Arc::new(PolyRing { field, vars, order }))
    }

    pub fn default_grevlex(field: FieldSpec, vars: &[&str]) -> Result<RingRc> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let n = names.len();
        PolyRing::new(field, names, TermOrder::grevlex(n))
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Ring with one fresh variable appended, made most significant; used for
    /// Rabinowitsch and elimination tricks internally.
    pub fn extended(self: &RingRc, fresh: &str, kind: OrderKind) -> RingRc {
        let mut vars = self.vars.clone();
        vars.push(fresh.to_string());
        let n = vars.len();
        let mut sig = vec![n - 1];
        sig.extend(self.order.sig.iter().copied());
        Arc::new(PolyRing { field: self.field, vars, order: TermOrder { kind, sig } })
    }
}

pub fn same_ring(a: &RingRc, b: &RingRc) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::RingMismatch)
    }
}

#[derive(Clone)]
pub struct Polynomial {
    ring: RingRc,
    /// (monomial, coefficient), strictly descending, no zero coefficients.
    terms: Vec<(Monomial, FieldElement)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}
impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &RingRc) -> Self {
        Polynomial { ring: ring.clone(), terms: vec![] }
    }

    pub fn one(ring: &RingRc) -> Self {
        Polynomial::constant(ring, ring.field.one())
    }

    pub fn constant(ring: &RingRc, c: FieldElement) -> Self {
        if c.is_zero() {
            Polynomial::zero(ring)
        } else {
            Polynomial { ring: ring.clone(), terms: vec![(Monomial::one(ring.nvars()), c)] }
        }
    }

    pub fn var(ring: &RingRc, idx: usize) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: vec![(Monomial::var(ring.nvars(), idx), ring.field.one())],
        }
    }

    pub fn monomial(ring: &RingRc, m: Monomial, c: FieldElement) -> Self {
        if c.is_zero() {
            Polynomial::zero(ring)
        } else {
            Polynomial { ring: ring.clone(), terms: vec![(m, c)] }
        }
    }

    /// Normalizing constructor: sorts, merges duplicates, drops zeros.
    pub fn from_unsorted(ring: &RingRc, terms: Vec<(Monomial, FieldElement)>) -> Result<Self> {
        let mut map: HashMap<Monomial, FieldElement> = HashMap::new();
        for (m, c) in terms {
            if m.0.len() != ring.nvars() {
                return Err(Error::shape("monomial arity vs ring variables"));
            }
            match map.entry(m) {
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    let s = e.get().add(&c)?;
                    if s.is_zero() {
                        e.remove();
                    } else {
                        e.insert(s);
                    }
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    if !c.is_zero() {
                        e.insert(c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = map.into_iter().collect();
        terms.sort_by(|a, b| ring.order.cmp(&b.0, &a.0));
        Ok(Polynomial { ring: ring.clone(), terms })
    }

    pub fn ring(&self) -> &RingRc {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, FieldElement)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// None for the zero polynomial (degree is a sentinel, not a number).
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.total_degree()).max()
    }

    pub fn leading(&self) -> Option<(&Monomial, &FieldElement)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        same_ring(&self.ring, &other.ring)?;
        let mut out: Vec<(Monomial, FieldElement)> =
            Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.ring.order.cmp(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].1.add(&other.terms[j].1)?;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Ok(Polynomial { ring: self.ring.clone(), terms: out })
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> Result<Polynomial> {
        if c.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| Ok((m.clone(), a.mul(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn mul_term(&self, m: &Monomial, c: &FieldElement) -> Result<Polynomial> {
        if c.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let terms = self
            .terms
            .iter()
            .map(|(mm, a)| Ok((mm.mul(m), a.mul(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        same_ring(&self.ring, &other.ring)?;
        let mut acc: HashMap<Monomial, FieldElement> = HashMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1.mul(c2)?;
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        let s = e.get().add(&c)?;
                        if s.is_zero() {
                            e.remove();
                        } else {
                            e.insert(s);
                        }
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().collect();
        terms.sort_by(|a, b| self.ring.order.cmp(&b.0, &a.0));
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn pow(&self, e: u32) -> Result<Polynomial> {
        let mut acc = Polynomial::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Divide every coefficient so the leading coefficient becomes 1.
    pub fn monic(&self) -> Result<Polynomial> {
        match self.leading() {
            None => Ok(self.clone()),
            Some((_, c)) => self.scale(&c.inv()?),
        }
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.ring.nvars() {
            return Err(Error::shape("evaluation point arity"));
        }
        let mut acc = self.ring.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&point[v])?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Re-home into `target`, mapping variable i to `var_map[i]`.  Used when
    /// passing into/out of elimination rings.
    pub fn promote(&self, target: &RingRc, var_map: &[usize]) -> Result<Polynomial> {
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; n];
                for (v, &exp) in m.0.iter().enumerate() {
                    e[var_map[v]] += exp;
                }
                (Monomial(e), c.clone())
            })
            .collect();
        Polynomial::from_unsorted(target, terms)
    }

    /// True when every term has total degree >= 2 (lies in m^2).
    pub fn in_m_squared(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.total_degree() >= 2)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative_display();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let c = c.display_abs();
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                if !c.is_one() {
                    write!(f, "{c}*")?;
                }
                let mut first = true;
                for (v, &e) in m.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if !first {
                        write!(f, "*")?;
                    }
                    first = false;
                    write!(f, "{}", self.ring.vars[v])?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
