//! Group rings `ℚ[t^{±1}][G]` over the computable coefficient groups, and
//! matrices over them.
//!
//! An element `Σ c_g(t)·g` stands for the right-multiplication operator
//! `R = Σ c_g(t) R_g` on `ℓ²(G)`. Since `R_a ∘ R_b = R_{ba}`, operator
//! composition of matrices reverses the ring order inside each entry; see
//! [`GroupRingMatrix::compose`].

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::freegroup::{Basis, FreeWord};
use crate::poly::TPoly;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientGroup {
    /// `F_rank`, with words in the given alphabet.
    Free { rank: usize, basis: Basis },
    /// `ℤ^d`.
    FreeAbelian(usize),
    /// `ℤ`, written multiplicatively as `z^k`.
    Integers,
}

impl CoefficientGroup {
    pub fn identity(&self) -> GroupElem {
        match *self {
            CoefficientGroup::Free { rank, .. } => GroupElem::Word(FreeWord::identity(rank)),
            CoefficientGroup::FreeAbelian(d) => GroupElem::Lattice(vec![0; d]),
            CoefficientGroup::Integers => GroupElem::Lattice(vec![0]),
        }
    }

    /// Lattice rank for the abelian groups.
    pub fn lattice_rank(&self) -> Option<usize> {
        match *self {
            CoefficientGroup::Free { .. } => None,
            CoefficientGroup::FreeAbelian(d) => Some(d),
            CoefficientGroup::Integers => Some(1),
        }
    }

    pub fn contains(&self, g: &GroupElem) -> bool {
        match (self, g) {
            (CoefficientGroup::Free { rank, .. }, GroupElem::Word(w)) => w.rank() == *rank,
            (CoefficientGroup::FreeAbelian(d), GroupElem::Lattice(v)) => v.len() == *d,
            (CoefficientGroup::Integers, GroupElem::Lattice(v)) => v.len() == 1,
            _ => false,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            CoefficientGroup::Free { rank, .. } => alloc::format!("F_{rank}"),
            CoefficientGroup::FreeAbelian(d) => alloc::format!("Z^{d}"),
            CoefficientGroup::Integers => "Z".to_string(),
        }
    }

    pub fn render(&self, g: &GroupElem) -> String {
        match (self, g) {
            (CoefficientGroup::Free { basis, .. }, GroupElem::Word(w)) => w.render(*basis),
            (CoefficientGroup::Integers, GroupElem::Lattice(v)) => match v[0] {
                0 => "e".to_string(),
                1 => "z".to_string(),
                k => alloc::format!("z^{k}"),
            },
            (_, GroupElem::Lattice(v)) => {
                let parts: Vec<String> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k != 0)
                    .map(|(i, &k)| if k == 1 { alloc::format!("z{}", i + 1) } else { alloc::format!("z{}^{k}", i + 1) })
                    .collect();
                if parts.is_empty() {
                    "e".to_string()
                } else {
                    parts.join(" ")
                }
            }
            (_, GroupElem::Word(w)) => w.to_string(),
        }
    }

    /// Parses the output of [`CoefficientGroup::render`].
    pub fn parse_elem(&self, text: &str) -> Result<GroupElem> {
        match *self {
            CoefficientGroup::Free { rank, .. } => Ok(GroupElem::Word(FreeWord::parse(text, rank)?)),
            CoefficientGroup::FreeAbelian(_) | CoefficientGroup::Integers => {
                let d = self.lattice_rank().unwrap();
                let mut v = vec![0i64; d];
                for tok in text.split_whitespace() {
                    if tok == "e" {
                        continue;
                    }
                    let bad = || Error::InvalidToken(tok.to_string());
                    let body = tok.strip_prefix('z').ok_or_else(bad)?;
                    let (idx, exp) = match body.split_once('^') {
                        Some((a, b)) => (a, b.parse::<i64>().map_err(|_| bad())?),
                        None => (body, 1),
                    };
                    let i = if idx.is_empty() { 1 } else { idx.parse::<usize>().map_err(|_| bad())? };
                    if i == 0 || i > d {
                        return Err(Error::GeneratorOutOfRange { index: i, rank: d });
                    }
                    v[i - 1] += exp;
                }
                Ok(GroupElem::Lattice(v))
            }
        }
    }
}

/// An element of a coefficient group in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElem {
    Word(FreeWord),
    Lattice(Vec<i64>),
}

impl GroupElem {
    pub fn mul(&self, other: &GroupElem) -> GroupElem {
        match (self, other) {
            (GroupElem::Word(a), GroupElem::Word(b)) => GroupElem::Word(a.mul(b)),
            (GroupElem::Lattice(a), GroupElem::Lattice(b)) => {
                GroupElem::Lattice(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => panic!("product of elements of different groups"),
        }
    }

    pub fn inverse(&self) -> GroupElem {
        match self {
            GroupElem::Word(w) => GroupElem::Word(w.inverse()),
            GroupElem::Lattice(v) => GroupElem::Lattice(v.iter().map(|x| -x).collect()),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElem::Word(w) => w.is_identity(),
            GroupElem::Lattice(v) => v.iter().all(|&x| x == 0),
        }
    }

    /// Word length, or ℓ¹ length of a lattice vector.
    pub fn length(&self) -> usize {
        match self {
            GroupElem::Word(w) => w.len(),
            GroupElem::Lattice(v) => v.iter().map(|x| x.unsigned_abs() as usize).sum(),
        }
    }
}

/// A finite sum `Σ c_g(t)·g`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    group: CoefficientGroup,
    terms: BTreeMap<GroupElem, TPoly>,
}

impl GroupRingElement {
    pub fn zero(group: CoefficientGroup) -> Self {
        GroupRingElement { group, terms: BTreeMap::new() }
    }

    pub fn one(group: CoefficientGroup) -> Self {
        Self::monomial(group, group.identity(), TPoly::one())
    }

    pub fn monomial(group: CoefficientGroup, g: GroupElem, c: TPoly) -> Self {
        let mut e = Self::zero(group);
        e.add_term(g, c);
        e
    }

    /// `c` times the identity.
    pub fn scalar(group: CoefficientGroup, c: TPoly) -> Self {
        Self::monomial(group, group.identity(), c)
    }

    pub fn group(&self) -> CoefficientGroup {
        self.group
    }

    pub fn add_term(&mut self, g: GroupElem, c: TPoly) {
        debug_assert!(self.group.contains(&g), "element outside the coefficient group");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&g) {
            Some(slot) => {
                *slot = slot.add(&c);
                if slot.is_zero() {
                    self.terms.remove(&g);
                }
            }
            None => {
                self.terms.insert(g, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElem, &TPoly)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, g: &GroupElem) -> TPoly {
        self.terms.get(g).cloned().unwrap_or_else(TPoly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some((g, c))` for a single term `c·g`.
    pub fn as_monomial(&self) -> Option<(&GroupElem, &TPoly)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        GroupRingElement { group: self.group, terms: self.terms.iter().map(|(g, c)| (g.clone(), c.neg())).collect() }
    }

    /// Ring product `self · other` (convolution).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.group);
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                out.add_term(g.mul(h), a.mul(b));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &TPoly) -> Self {
        let mut out = Self::zero(self.group);
        for (g, a) in &self.terms {
            out.add_term(g.clone(), a.mul(c));
        }
        out
    }

    /// `c(t)·g ↦ c(t)·g⁻¹`.
    pub fn adjoint(&self) -> Self {
        GroupRingElement { group: self.group, terms: self.terms.iter().map(|(g, c)| (g.inverse(), c.clone())).collect() }
    }

    /// Coefficient of the identity element.
    pub fn vn_trace(&self) -> TPoly {
        self.coeff(&self.group.identity())
    }

    /// Sum of all coefficients.
    pub fn augmentation(&self) -> TPoly {
        self.terms.values().fold(TPoly::zero(), |acc, c| acc.add(c))
    }

    /// Substitutes `t = t0`, leaving constant coefficients.
    pub fn evaluate_t(&self, t0: &Rational) -> Result<Self> {
        if !t0.is_positive() {
            return Err(Error::NonPositiveT(num_traits::ToPrimitive::to_f64(t0).unwrap_or(f64::NAN)));
        }
        let mut out = Self::zero(self.group);
        for (g, c) in &self.terms {
            out.add_term(g.clone(), TPoly::constant(c.eval(t0)));
        }
        Ok(out)
    }

    /// Applies a group homomorphism termwise.
    pub fn map_group<F: Fn(&GroupElem) -> GroupElem>(&self, target: CoefficientGroup, f: F) -> Self {
        let mut out = Self::zero(target);
        for (g, c) in &self.terms {
            out.add_term(f(g), c.clone());
        }
        out
    }

    /// Multiplies the coefficient of each `g` by `t^{w(g)}`.
    pub fn twist_t<F: Fn(&GroupElem) -> i64>(&self, weight: F) -> Self {
        let mut out = Self::zero(self.group);
        for (g, c) in &self.terms {
            out.add_term(g.clone(), c.shift(weight(g)));
        }
        out
    }

    /// Largest word length in the support.
    pub fn support_radius(&self) -> usize {
        self.terms.keys().map(GroupElem::length).max().unwrap_or(0)
    }

    /// Constant coefficients, if no coefficient depends on `t`.
    pub fn constant_terms(&self) -> Option<Vec<(GroupElem, Rational)>> {
        self.terms
            .iter()
            .map(|(g, c)| match c.as_monomial() {
                Some((v, 0)) => Some((g.clone(), v.clone())),
                _ => None,
            })
            .collect()
    }

    /// `Σ |c_g|` for constant coefficients.
    pub fn l1_norm(&self) -> Option<Rational> {
        let terms = self.constant_terms()?;
        Some(terms.iter().fold(Rational::zero(), |acc, (_, c)| acc + c.abs()))
    }
}

fn render_coeff(c: &TPoly) -> Vec<String> {
    c.terms()
        .map(|(k, v)| if k == 0 { v.to_string() } else { alloc::format!("({v})t^{k}") })
        .collect()
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (g, c) in &self.terms {
            let elem = self.group.render(g);
            for part in render_coeff(c) {
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                write!(f, "{part} [{elem}]")?;
            }
        }
        Ok(())
    }
}

/// A rectangular matrix of group-ring elements over one coefficient group,
/// stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupRingMatrix {
    rows: usize,
    cols: usize,
    group: CoefficientGroup,
    entries: Vec<GroupRingElement>,
}

impl GroupRingMatrix {
    pub fn zeros(group: CoefficientGroup, rows: usize, cols: usize) -> Self {
        GroupRingMatrix { rows, cols, group, entries: vec![GroupRingElement::zero(group); rows * cols] }
    }

    /// `Id^{⊕n}`.
    pub fn identity(group: CoefficientGroup, n: usize) -> Self {
        let mut m = Self::zeros(group, n, n);
        for i in 0..n {
            m.set(i, i, GroupRingElement::one(group));
        }
        m
    }

    pub fn from_rows(group: CoefficientGroup, rows: Vec<Vec<GroupRingElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension("ragged rows".into()));
            }
            for e in row {
                if e.group() != group {
                    return Err(Error::GroupMismatch);
                }
                entries.push(e);
            }
        }
        Ok(GroupRingMatrix { rows: r, cols: c, group, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn group(&self) -> CoefficientGroup {
        self.group
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: GroupRingElement) {
        assert_eq!(e.group(), self.group);
        self.entries[i * self.cols + j] = e;
    }

    pub fn entries(&self) -> &[GroupRingElement] {
        &self.entries
    }

    pub fn row_vecs(&self) -> Vec<Vec<GroupRingElement>> {
        (0..self.rows).map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(alloc::format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(GroupRingMatrix { entries, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect::<Result<_>>()?;
        Ok(GroupRingMatrix { entries, ..self.clone() })
    }

    pub fn neg(&self) -> Self {
        GroupRingMatrix { entries: self.entries.iter().map(GroupRingElement::neg).collect(), ..self.clone() }
    }

    /// Operator composition `self ∘ other` (apply `other` first):
    /// `(A∘B)_{ij} = Σ_k B_{kj} · A_{ik}` in the group ring.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(alloc::format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.group, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = GroupRingElement::zero(self.group);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&b.mul(a)?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Plain matrix product with ring-order entries, `Σ_k A_{ik} · B_{kj}`.
    pub fn ring_product(&self, other: &Self) -> Result<Self> {
        other.transpose().compose(&self.transpose()).map(|m| m.transpose())
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.group, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Transpose with every entry adjointed.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.group, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).adjoint());
            }
        }
        out
    }

    pub fn scale(&self, c: &TPoly) -> Self {
        GroupRingMatrix { entries: self.entries.iter().map(|e| e.scale(c)).collect(), ..self.clone() }
    }

    /// Block matrix from a grid of blocks with compatible shapes.
    pub fn block_assemble(blocks: &[Vec<GroupRingMatrix>]) -> Result<Self> {
        let first = blocks.first().and_then(|r| r.first()).ok_or_else(|| Error::Dimension("no blocks".into()))?;
        let group = first.group;
        let heights: Vec<usize> = blocks.iter().map(|r| r[0].rows).collect();
        let widths: Vec<usize> = blocks[0].iter().map(|b| b.cols).collect();
        let mut out = Self::zeros(group, heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (bi, row) in blocks.iter().enumerate() {
            if row.len() != widths.len() {
                return Err(Error::Dimension("ragged block rows".into()));
            }
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                if b.group != group {
                    return Err(Error::GroupMismatch);
                }
                if b.rows != heights[bi] || b.cols != widths[bj] {
                    return Err(Error::Dimension("block shapes do not line up".into()));
                }
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        out.set(r0 + i, c0 + j, b.get(i, j).clone());
                    }
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        Ok(out)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let z1 = Self::zeros(self.group, self.rows, other.cols);
        let z2 = Self::zeros(self.group, other.rows, self.cols);
        Self::block_assemble(&[vec![self.clone(), z1], vec![z2, other.clone()]])
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut out = Self::zeros(self.group, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn evaluate_t(&self, t0: &Rational) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.evaluate_t(t0)).collect::<Result<_>>()?;
        Ok(GroupRingMatrix { entries, ..self.clone() })
    }

    pub fn map_entries<F: Fn(&GroupRingElement) -> GroupRingElement>(&self, target: CoefficientGroup, f: F) -> Self {
        GroupRingMatrix {
            rows: self.rows,
            cols: self.cols,
            group: target,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// `Σ_i tr(M_ii)`.
    pub fn trace(&self) -> Result<TPoly> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok((0..self.rows).fold(TPoly::zero(), |acc, i| acc.add(&self.get(i, i).vn_trace())))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GroupRingElement::is_zero)
    }
}

impl fmt::Display for GroupRingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(" | ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}
