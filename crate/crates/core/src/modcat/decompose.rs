//! Krull-Schmidt splitting by Fitting decomposition of endomorphisms.
//!
//! The splitter works on a "structured space": a labelled basis together with a
//! list of square matrices. Endomorphisms are the label-preserving matrices that
//! commute with the chosen subset of those matrices. Modules use vertices as
//! labels and generator actions as the commuting set; complexes reuse the same
//! machinery with (degree, vertex) labels.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::hom::{hom_space, intertwiners};
use super::{same_algebra, FdModule};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Subspace};

const RETRY_BUDGET: usize = 32;

/// One indecomposable piece of a structured space.
#[derive(Clone, Debug)]
pub struct SplitPiece<F: Field> {
    /// Columns spanning the piece, in ambient coordinates.
    pub basis: Matrix<F>,
    /// Left inverse of `basis` that kills every other piece.
    pub projection: Matrix<F>,
    pub labels: Vec<usize>,
    /// Every input matrix restricted to the piece.
    pub mats: Vec<Matrix<F>>,
}

/// Split a structured space into pieces with local endomorphism rings.
/// `commuting` selects which of `mats` endomorphisms must commute with.
pub fn split_structured<F: Field>(
    field: &F,
    labels: &[usize],
    mats: &[Matrix<F>],
    commuting: &[usize],
    seed: u64,
) -> Result<Vec<SplitPiece<F>>> {
    let n = labels.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let root = SplitPiece {
        basis: Matrix::identity(field, n),
        projection: Matrix::identity(field, n),
        labels: labels.to_vec(),
        mats: mats.to_vec(),
    };
    let mut done = Vec::new();
    let mut stack = vec![root];
    while let Some(piece) = stack.pop() {
        match find_split(field, &piece, commuting, &mut rng)? {
            None => done.push(piece),
            Some((a, b)) => {
                // keep the ambient order stable: process `a` first
                stack.push(b);
                stack.push(a);
            }
        }
    }
    Ok(done)
}

fn eigenvalue_candidates<F: Field>(field: &F, x: &Matrix<F>) -> Vec<F::Elem> {
    if let Some(all) = field.elements() {
        return all;
    }
    let mut out = Vec::new();
    let n = x.rows() as i64;
    if let Some(c) = field.div(&x.trace(), &field.from_i64(n)) {
        out.push(c);
    }
    for k in -6..=6 {
        let c = field.from_i64(k);
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

fn shift<F: Field>(field: &F, x: &Matrix<F>, c: &F::Elem) -> Matrix<F> {
    let mut y = x.clone();
    for i in 0..x.rows() {
        let v = field.sub(y.get(i, i), c);
        y.set(i, i, v);
    }
    y
}

enum Probe<F: Field> {
    /// x - c is nilpotent for the returned c.
    Local(Matrix<F>),
    /// x - c is singular and not nilpotent.
    Splits(Matrix<F>),
    /// No usable eigenvalue was found.
    Unknown,
}

fn probe<F: Field>(field: &F, x: &Matrix<F>) -> Probe<F> {
    for c in eigenvalue_candidates(field, x) {
        let y = shift(field, x, &c);
        if y.is_invertible() {
            continue;
        }
        if y.is_nilpotent() {
            return Probe::Local(y);
        }
        return Probe::Splits(y);
    }
    Probe::Unknown
}

/// The scalar c with x - c nilpotent, when x has exactly one eigenvalue among the candidates.
pub(crate) fn local_scalar<F: Field>(field: &F, x: &Matrix<F>) -> Option<F::Elem> {
    if x.rows() == 0 {
        return Some(field.zero());
    }
    match probe(field, x) {
        Probe::Local(y) => {
            // recover c from the diagonal: x - y = c * I
            Some(field.sub(x.get(0, 0), y.get(0, 0)))
        }
        _ => None,
    }
}

fn fitting_split<F: Field>(field: &F, piece: &SplitPiece<F>, y: &Matrix<F>) -> Result<(SplitPiece<F>, SplitPiece<F>)> {
    let k = piece.labels.len();
    let p = y.pow(k as u64);
    let image = p.column_space();
    let kernel = Subspace::span(field, k, &p.kernel()).basis().to_vec();
    if image.is_empty() || kernel.is_empty() || image.len() + kernel.len() != k {
        return Err(Error::Internal("Fitting decomposition degenerated".into()));
    }
    let mut cols = image.clone();
    cols.extend(kernel.iter().cloned());
    let q = Matrix::from_cols(field, k, &cols);
    let qi = q.inverse().ok_or_else(|| Error::Internal("Fitting pieces are not complementary".into()))?;
    let make = |range: std::ops::Range<usize>, vecs: &[Vec<F::Elem>]| -> SplitPiece<F> {
        let idx: Vec<usize> = range.collect();
        let all: Vec<usize> = (0..k).collect();
        let labels = vecs
            .iter()
            .map(|v| piece.labels[v.iter().position(|c| !field.is_zero(c)).expect("nonzero basis vector")])
            .collect();
        let sub = Matrix::from_cols(field, k, vecs);
        let proj = qi.select(&idx, &all);
        let mats = piece.mats.iter().map(|m| proj.mul(m).mul(&sub)).collect();
        SplitPiece { basis: piece.basis.mul(&sub), projection: proj.mul(&piece.projection), labels, mats }
    };
    let a = make(0..image.len(), &image);
    let b = make(image.len()..k, &kernel);
    Ok((a, b))
}

fn find_split<F: Field>(
    field: &F,
    piece: &SplitPiece<F>,
    commuting: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<Option<(SplitPiece<F>, SplitPiece<F>)>> {
    let pairs: Vec<(&Matrix<F>, &Matrix<F>)> = commuting.iter().map(|&i| (&piece.mats[i], &piece.mats[i])).collect();
    let end = intertwiners(field, &piece.labels, &piece.labels, &pairs);
    if end.len() <= 1 {
        return Ok(None);
    }
    let mut nil_parts = Vec::new();
    let mut certified = true;
    for x in &end {
        match probe(field, x) {
            Probe::Splits(y) => return fitting_split(field, piece, &y).map(Some),
            Probe::Local(y) => nil_parts.push(y),
            Probe::Unknown => certified = false,
        }
    }
    if certified && nilpotent_algebra(field, &nil_parts) {
        return Ok(None);
    }
    // products of nilpotent parts, then seeded random combinations
    for i in 0..nil_parts.len() {
        for j in 0..nil_parts.len() {
            let x = nil_parts[i].mul(&nil_parts[j]);
            if let Probe::Splits(y) = probe(field, &x) {
                return fitting_split(field, piece, &y).map(Some);
            }
        }
    }
    for _ in 0..RETRY_BUDGET {
        let mut x = Matrix::zeros(field, piece.labels.len(), piece.labels.len());
        for b in &end {
            x.add_scaled(&field.random(rng), b);
        }
        if let Probe::Splits(y) = probe(field, &x) {
            return fitting_split(field, piece, &y).map(Some);
        }
    }
    Err(Error::DecompositionFailed(RETRY_BUDGET))
}

/// The span of the given nilpotent matrices is closed under products (so it is
/// a nilpotent algebra and, together with the identity, a local algebra).
fn nilpotent_algebra<F: Field>(field: &F, parts: &[Matrix<F>]) -> bool {
    if parts.is_empty() {
        return true;
    }
    let n = parts[0].rows();
    let flat: Vec<Vec<F::Elem>> = parts.iter().map(|m| m.data().to_vec()).collect();
    let span = Subspace::span(field, n * n, &flat);
    parts.iter().all(|a| parts.iter().all(|b| span.contains(a.mul(b).data())))
}

/// An indecomposable direct summand of a module with its split inclusion.
#[derive(Clone, Debug)]
pub struct Summand<F: Field> {
    pub module: FdModule<F>,
    /// dim M x dim summand
    pub inclusion: Matrix<F>,
    /// dim summand x dim M
    pub projection: Matrix<F>,
}

/// Krull-Schmidt decomposition. Deterministic for a fixed seed.
pub fn decompose<F: Field>(m: &FdModule<F>, seed: u64) -> Result<Vec<Summand<F>>> {
    let a = m.algebra();
    let gens: Vec<usize> = a.generators().to_vec();
    let pieces = split_structured(m.field(), m.vertices(), m.actions(), &gens, seed)?;
    Ok(pieces
        .into_iter()
        .map(|p| Summand {
            module: FdModule::new_unchecked(a, p.labels, p.mats),
            inclusion: p.basis,
            projection: p.projection,
        })
        .collect())
}

/// Isomorphism test for two indecomposable modules. With a local endomorphism
/// ring, M and N are isomorphic exactly when some element of any basis of
/// Hom(M, N) is invertible.
pub fn isomorphic_indecomposables<F: Field>(m: &FdModule<F>, n: &FdModule<F>) -> Result<bool> {
    if m.dim() != n.dim() || m.dim_vector() != n.dim_vector() {
        return Ok(false);
    }
    if m.dim() == 0 {
        return Ok(true);
    }
    Ok(hom_space(m, n)?.iter().any(|h| h.is_invertible()))
}

/// Isomorphism classes of indecomposable summands with multiplicities.
#[derive(Clone, Debug)]
pub struct IsoClasses<F: Field> {
    pub representatives: Vec<FdModule<F>>,
    pub multiplicities: Vec<usize>,
}

impl<F: Field> IsoClasses<F> {
    pub fn of(m: &FdModule<F>, seed: u64) -> Result<Self> {
        let mut out = IsoClasses { representatives: Vec::new(), multiplicities: Vec::new() };
        for s in decompose(m, seed)? {
            out.insert(s.module)?;
        }
        Ok(out)
    }

    /// Index of the class of an indecomposable module, if present.
    pub fn find(&self, x: &FdModule<F>) -> Result<Option<usize>> {
        for (i, r) in self.representatives.iter().enumerate() {
            if isomorphic_indecomposables(r, x)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn insert(&mut self, x: FdModule<F>) -> Result<usize> {
        match self.find(&x)? {
            Some(i) => {
                self.multiplicities[i] += 1;
                Ok(i)
            }
            None => {
                self.representatives.push(x);
                self.multiplicities.push(1);
                Ok(self.representatives.len() - 1)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// Same classes, ignoring multiplicities.
    pub fn same_classes(&self, other: &Self) -> Result<bool> {
        if self.len() != other.len() {
            return Ok(false);
        }
        for r in &self.representatives {
            if other.find(r)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Same classes with the same multiplicities.
    pub fn same_multiset(&self, other: &Self) -> Result<bool> {
        if self.len() != other.len() {
            return Ok(false);
        }
        for (r, &k) in self.representatives.iter().zip(&self.multiplicities) {
            match other.find(r)? {
                Some(j) if other.multiplicities[j] == k => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }
}

pub fn isomorphic<F: Field>(m: &FdModule<F>, n: &FdModule<F>, seed: u64) -> Result<bool> {
    if !same_algebra(m.algebra(), n.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    if m.dim_vector() != n.dim_vector() {
        return Ok(false);
    }
    IsoClasses::of(m, seed)?.same_multiset(&IsoClasses::of(n, seed)?)
}

/// add(M) = add(N)
pub fn add_equal<F: Field>(m: &FdModule<F>, n: &FdModule<F>, seed: u64) -> Result<bool> {
    if !same_algebra(m.algebra(), n.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    IsoClasses::of(m, seed)?.same_classes(&IsoClasses::of(n, seed)?)
}
