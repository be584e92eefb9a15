//! Families of epimorphisms `Q_β: F_{n(β)} ↠ G` and their compatibility maps
//! under the two Markov moves.
//!
//! All families here depend on the braid only through its strand count.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::braid::{BraidWord, Sign};
use crate::error::{Error, Result};
use crate::freegroup::{artin_automorphism, Automorphism, Basis, FreeWord};
use crate::groupring::{CoefficientGroup, GroupElem, GroupRingElement};
use crate::poly::{determinant, TPoly};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EpiFamily {
    /// `Q_β = id_{F_n}`.
    Identity,
    /// `Φ_n: x_i ↦ 1 ∈ ℤ`, so `g_i ↦ i`.
    TotalWinding,
    /// `x_i ↦ e_i ∈ ℤⁿ`.
    Abelianization,
    /// `x_i ↦ images[i]` in `ℤᵈ`; strands past the last row reuse it.
    CustomAbelian { images: Vec<Vec<i64>> },
}

impl EpiFamily {
    /// Validates a custom family: nonempty rows of one length `d ≥ 1`
    /// generating `ℤᵈ`.
    pub fn custom(images: Vec<Vec<i64>>) -> Result<Self> {
        let d = images.first().map(Vec::len).unwrap_or(0);
        if d == 0 || images.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidParameter("custom family needs rows of one positive length".into()));
        }
        if !lattice_surjective(&images) {
            return Err(Error::InvalidParameter("custom images do not generate Z^d".into()));
        }
        Ok(EpiFamily::CustomAbelian { images })
    }

    /// `id`, `phi` or `ab`.
    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "id" | "identity" => Some(EpiFamily::Identity),
            "phi" | "winding" => Some(EpiFamily::TotalWinding),
            "ab" | "abelianization" => Some(EpiFamily::Abelianization),
            _ => None,
        }
    }

    pub fn tag(&self) -> String {
        match self {
            EpiFamily::Identity => "id".into(),
            EpiFamily::TotalWinding => "phi".into(),
            EpiFamily::Abelianization => "ab".into(),
            EpiFamily::CustomAbelian { images } => format!("custom({}x{})", images.len(), images[0].len()),
        }
    }

    pub fn target(&self, n: usize) -> CoefficientGroup {
        match self {
            EpiFamily::Identity => CoefficientGroup::Free { rank: n, basis: Basis::G },
            EpiFamily::TotalWinding => CoefficientGroup::Integers,
            EpiFamily::Abelianization => CoefficientGroup::FreeAbelian(n),
            EpiFamily::CustomAbelian { images } => CoefficientGroup::FreeAbelian(images[0].len()),
        }
    }

    fn x_image(&self, n: usize, i: usize) -> GroupElem {
        match self {
            EpiFamily::Identity => GroupElem::Word(FreeWord::generator(n, i).unwrap().change_of_basis(Basis::X, Basis::G)),
            EpiFamily::TotalWinding => GroupElem::Lattice(vec![1]),
            EpiFamily::Abelianization => {
                let mut v = vec![0; n];
                v[i - 1] = 1;
                GroupElem::Lattice(v)
            }
            EpiFamily::CustomAbelian { images } => GroupElem::Lattice(images[(i - 1).min(images.len() - 1)].clone()),
        }
    }

    /// `Q` on `F_n`.
    pub fn epimorphism(&self, n: usize) -> Result<Epimorphism> {
        if n == 0 {
            return Err(Error::InvalidParameter("rank must be positive".into()));
        }
        if let EpiFamily::CustomAbelian { images } = self {
            let used: Vec<Vec<i64>> = (0..n).map(|i| images[i.min(images.len() - 1)].clone()).collect();
            if !lattice_surjective(&used) {
                return Err(Error::InvalidParameter(format!("custom family is not onto Z^{} on {n} strands", images[0].len())));
            }
        }
        let target = self.target(n);
        let mut g_images = Vec::with_capacity(n);
        let mut acc = target.identity();
        for i in 1..=n {
            acc = acc.mul(&self.x_image(n, i));
            g_images.push(acc.clone());
        }
        Ok(Epimorphism { source_rank: n, target, g_images })
    }

    pub fn apply(&self, w: &FreeWord, basis: Basis) -> Result<GroupElem> {
        self.epimorphism(w.rank())?.apply(w, basis)
    }

    /// The map `χ` with `Q ∘ h_α = χ ∘ Q`.
    pub fn chi_map(&self, alpha: &BraidWord) -> Result<ChiMap> {
        let n = alpha.strands();
        match self {
            EpiFamily::Identity => Ok(ChiMap::Automorphism(artin_automorphism(alpha, Basis::G))),
            EpiFamily::TotalWinding => Ok(ChiMap::Identity),
            EpiFamily::Abelianization => {
                let p = alpha.permutation();
                let mut m = vec![vec![0i64; n]; n];
                for j in 1..=n {
                    m[p.apply(j) - 1][j - 1] = 1;
                }
                Ok(ChiMap::Linear(m))
            }
            EpiFamily::CustomAbelian { images } => {
                let p = alpha.permutation();
                let rows: Vec<Vec<i64>> = (0..n).map(|i| images[i.min(images.len() - 1)].clone()).collect();
                let targets: Vec<Vec<i64>> = (1..=n).map(|j| rows[p.apply(j) - 1].clone()).collect();
                solve_linear_map(&rows, &targets).map(ChiMap::Linear).ok_or_else(|| {
                    Error::InvalidParameter("custom family has no conjugation map for this braid".into())
                })
            }
        }
    }

    /// The map `σ` with `Q_{σ_n^ε β} ∘ ι_n = σ ∘ Q_β`.
    pub fn sigma_map(&self, n: usize) -> SigmaMap {
        match self {
            EpiFamily::Identity => SigmaMap::Inclusion { from: n, to: n + 1 },
            EpiFamily::Abelianization => SigmaMap::Inclusion { from: n, to: n + 1 },
            EpiFamily::TotalWinding | EpiFamily::CustomAbelian { .. } => SigmaMap::Identity,
        }
    }

    /// Checks both commutative squares on every free generator `x_j`.
    pub fn check_admissibility(&self, beta: &BraidWord, alpha: &BraidWord, eps: Sign) -> AdmissibilityReport {
        let n = beta.strands();
        let mut report = AdmissibilityReport { conjugation: true, stabilization: true, first_failure: None };
        if alpha.strands() != n {
            report.conjugation = false;
            report.first_failure = Some(format!("strand counts differ ({n} vs {})", alpha.strands()));
            return report;
        }
        let q = match self.epimorphism(n) {
            Ok(q) => q,
            Err(e) => {
                report.conjugation = false;
                report.stabilization = false;
                report.first_failure = Some(format!("{e}"));
                return report;
            }
        };
        let conj = beta.conjugate(alpha).unwrap();
        let q_conj = self.epimorphism(conj.strands()).unwrap();
        let h_alpha = artin_automorphism(alpha, Basis::X);
        match self.chi_map(alpha) {
            Ok(chi) => {
                for j in 1..=n {
                    let xj = FreeWord::generator(n, j).unwrap();
                    let lhs = q_conj.apply(&h_alpha.apply(&xj), Basis::X).unwrap();
                    let rhs = chi.apply(&q.apply(&xj, Basis::X).unwrap());
                    if lhs != rhs {
                        report.conjugation = false;
                        report.first_failure = Some(format!("conjugation square fails on x{j}"));
                        break;
                    }
                }
            }
            Err(e) => {
                report.conjugation = false;
                report.first_failure = Some(format!("{e}"));
            }
        }
        let stab = beta.stabilize(eps, Default::default());
        let q_stab = match self.epimorphism(stab.strands()) {
            Ok(q) => q,
            Err(e) => {
                report.stabilization = false;
                report.first_failure.get_or_insert(format!("{e}"));
                return report;
            }
        };
        let sigma = self.sigma_map(n);
        for j in 1..=n {
            let xj = FreeWord::generator(n, j).unwrap();
            let lhs = q_stab.apply(&xj.widen(n + 1), Basis::X).unwrap();
            let rhs = sigma.apply(&q.apply(&xj, Basis::X).unwrap());
            if lhs != rhs {
                report.stabilization = false;
                report.first_failure.get_or_insert(format!("stabilization square fails on x{j}"));
                break;
            }
        }
        report
    }

    /// Whether `Φ_n` factors through `Q` on `n` strands.
    pub fn factors_total_winding(&self, n: usize) -> bool {
        match self {
            EpiFamily::CustomAbelian { images } => {
                let rows: Vec<Vec<i64>> = (0..n).map(|i| images[i.min(images.len() - 1)].clone()).collect();
                let augmented: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().copied().chain([1]).collect()).collect();
                rank(&rows) == rank(&augmented)
            }
            _ => true,
        }
    }
}

/// A homomorphism `F_n → G` given by the images of `g_1, …, g_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Epimorphism {
    source_rank: usize,
    target: CoefficientGroup,
    g_images: Vec<GroupElem>,
}

impl Epimorphism {
    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target(&self) -> CoefficientGroup {
        self.target
    }

    pub fn g_images(&self) -> &[GroupElem] {
        &self.g_images
    }

    /// Image of a word written in `basis`.
    pub fn apply(&self, w: &FreeWord, basis: Basis) -> Result<GroupElem> {
        if w.rank() != self.source_rank {
            return Err(Error::RankMismatch { expected: self.source_rank, found: w.rank() });
        }
        let g = w.change_of_basis(basis, Basis::G);
        Ok(self.apply_g(&g))
    }

    fn apply_g(&self, w: &FreeWord) -> GroupElem {
        match self.target {
            CoefficientGroup::Free { .. } => {
                let images: Vec<FreeWord> = self
                    .g_images
                    .iter()
                    .map(|g| match g {
                        GroupElem::Word(w) => w.clone(),
                        GroupElem::Lattice(_) => unreachable!(),
                    })
                    .collect();
                GroupElem::Word(w.substitute(&images))
            }
            _ => {
                let d = self.target.lattice_rank().unwrap();
                let mut v = vec![0i64; d];
                for &(i, e) in w.syllables() {
                    if let GroupElem::Lattice(img) = &self.g_images[i as usize - 1] {
                        for (a, b) in v.iter_mut().zip(img) {
                            *a += e * b;
                        }
                    }
                }
                GroupElem::Lattice(v)
            }
        }
    }

    /// `Q ∘ φ` for an endomorphism `φ` of the source.
    pub fn precompose(&self, phi: &Automorphism) -> Epimorphism {
        let phi = phi.in_basis(Basis::G);
        Epimorphism {
            source_rank: self.source_rank,
            target: self.target,
            g_images: phi.images().iter().map(|w| self.apply_g(w)).collect(),
        }
    }

    /// `κ(w) = t^{Φ(w)} Q(w)`, with `Φ(x_i) = 1`.
    pub fn kappa(&self, w: &FreeWord, basis: Basis) -> Result<GroupRingElement> {
        let g = self.apply(w, basis)?;
        Ok(GroupRingElement::monomial(self.target, g, TPoly::monomial(Rational::one(), total_winding(w, basis))))
    }

    /// κ extended linearly to the integral group ring of the source.
    pub fn kappa_element(&self, e: &GroupRingElement) -> Result<GroupRingElement> {
        let basis = match e.group() {
            CoefficientGroup::Free { rank, basis } if rank == self.source_rank => basis,
            _ => return Err(Error::GroupMismatch),
        };
        let mut out = GroupRingElement::zero(self.target);
        for (g, c) in e.terms() {
            let GroupElem::Word(w) = g else { unreachable!() };
            let image = self.apply(w, basis)?;
            out.add_term(image, c.shift(total_winding(w, basis)));
        }
        Ok(out)
    }
}

/// `Φ(w)`: `x_i ↦ 1`, equivalently `g_i ↦ i`.
pub fn total_winding(w: &FreeWord, basis: Basis) -> i64 {
    match basis {
        Basis::X => w.exponent_sum(),
        Basis::G => w.syllables().iter().map(|&(i, e)| i as i64 * e).sum(),
    }
}

/// Conjugation compatibility map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChiMap {
    Identity,
    /// An automorphism of the free target, in the `g`-basis.
    Automorphism(Automorphism),
    /// Integer matrix acting on column vectors of the lattice target.
    Linear(Vec<Vec<i64>>),
}

impl ChiMap {
    pub fn apply(&self, g: &GroupElem) -> GroupElem {
        match (self, g) {
            (ChiMap::Identity, _) => g.clone(),
            (ChiMap::Automorphism(a), GroupElem::Word(w)) => GroupElem::Word(a.apply(w)),
            (ChiMap::Linear(m), GroupElem::Lattice(v)) => {
                GroupElem::Lattice(m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect())
            }
            _ => panic!("compatibility map applied to an element of the wrong group"),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ChiMap) -> ChiMap {
        match (self, other) {
            (ChiMap::Identity, o) => o.clone(),
            (s, ChiMap::Identity) => s.clone(),
            (ChiMap::Automorphism(a), ChiMap::Automorphism(b)) => ChiMap::Automorphism(a.compose(b)),
            (ChiMap::Linear(a), ChiMap::Linear(b)) => {
                let n = b[0].len();
                ChiMap::Linear(
                    a.iter().map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum()).collect()).collect(),
                )
            }
            _ => panic!("incompatible compatibility maps"),
        }
    }
}

/// Stabilisation compatibility map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaMap {
    Identity,
    /// `F_n ↪ F_{n+1}` or `ℤⁿ ↪ ℤ^{n+1}`, on the first coordinates.
    Inclusion { from: usize, to: usize },
}

impl SigmaMap {
    pub fn apply(&self, g: &GroupElem) -> GroupElem {
        match (self, g) {
            (SigmaMap::Identity, _) => g.clone(),
            (SigmaMap::Inclusion { to, .. }, GroupElem::Word(w)) => GroupElem::Word(w.widen(*to)),
            (SigmaMap::Inclusion { to, .. }, GroupElem::Lattice(v)) => {
                let mut out = v.clone();
                out.resize(*to, 0);
                GroupElem::Lattice(out)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub conjugation: bool,
    pub stabilization: bool,
    pub first_failure: Option<String>,
}

impl AdmissibilityReport {
    pub fn passed(&self) -> bool {
        self.conjugation && self.stabilization
    }
}

fn to_rational(rows: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect()).collect()
}

fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m = to_rational(rows);
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for k in c..cols {
                    let v = &m[r][k] * &f;
                    m[i][k] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Rows generate `ℤᵈ` iff the gcd of the maximal minors is 1.
fn lattice_surjective(rows: &[Vec<i64>]) -> bool {
    let d = rows[0].len();
    if rows.len() < d {
        return false;
    }
    let mut g = BigInt::zero();
    for subset in combinations(rows.len(), d) {
        let minor: Vec<Vec<Rational>> = to_rational(&subset.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>());
        let det = determinant(&minor);
        g = g.gcd(&det.to_integer());
        if g.is_one() {
            return true;
        }
    }
    g.is_one()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Integer matrix `L` with `L·rows[j] = targets[j]` for all `j`, if one exists.
fn solve_linear_map(rows: &[Vec<i64>], targets: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let d = rows[0].len();
    // pick d independent rows
    let mut basis: Vec<usize> = Vec::new();
    for j in 0..rows.len() {
        let mut trial: Vec<Vec<i64>> = basis.iter().map(|&i| rows[i].clone()).collect();
        trial.push(rows[j].clone());
        if rank(&trial) == trial.len() {
            basis.push(j);
        }
        if basis.len() == d {
            break;
        }
    }
    if basis.len() < d {
        return None;
    }
    // L = T B⁻¹ with B, T having the chosen rows as columns
    let b: Vec<Vec<Rational>> = (0..d).map(|r| basis.iter().map(|&j| Rational::from_integer(BigInt::from(rows[j][r]))).collect()).collect();
    let t: Vec<Vec<Rational>> = (0..d).map(|r| basis.iter().map(|&j| Rational::from_integer(BigInt::from(targets[j][r]))).collect()).collect();
    let b_inv = invert(&b)?;
    let mut l = vec![vec![0i64; d]; d];
    for i in 0..d {
        for j in 0..d {
            let v: Rational = (0..d).map(|k| &t[i][k] * &b_inv[k][j]).sum();
            if !v.is_integer() {
                return None;
            }
            l[i][j] = v.to_integer().to_i64()?;
        }
    }
    for (r, tgt) in rows.iter().zip(targets) {
        let img: Vec<i64> = l.iter().map(|row| row.iter().zip(r).map(|(a, b)| a * b).sum()).collect();
        if &img != tgt {
            return None;
        }
    }
    Some(l)
}

fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let piv = a[c][c].clone();
        for k in 0..2 * n {
            a[c][k] = &a[c][k] / &piv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..2 * n {
                    let v = &a[c][k] * &f;
                    a[i][k] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
