//! Φ-Auslander-Yoneda algebras E^Φ(M) = ⊕_{d∈Φ} Ext^d(M, M) as explicit algebras.
//!
//! M is given as a list of tagged modules. Each is split into indecomposables
//! and one representative per isomorphism class becomes a vertex, so the
//! algebra built here is the basic version of E^Φ(M). Block (s, t) in degree d
//! is Ext^d(V_s, V_t) and products are Yoneda products, set to zero when the
//! total degree leaves Φ.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::admissible::DegreeSet;
use crate::algebra::{compare_reports, invariant_report, is_selfinjective, AlgRef, FdAlgebra, InvariantReport, ReportComparison};
use crate::error::{Error, Result};
use crate::ext::{ext_group, min_proj_resolution, yoneda_product, ExtClass, ExtGroup, ProjResolution};
use crate::homotopy::{end_algebra_of_complex, tilting_report, ComplexDescription, Generation, ModComplex, ProjComplex, ProjMap, TiltingReport};
use crate::linalg::matrix::{unit_vec, vec_axpy};
use crate::linalg::{Field, Matrix, Subspace};
use crate::modcat::{decompose, hom_space, local_scalar, syzygy, FdModule};

/// One basis element of E^Φ(M): a class in Ext^degree(V_source, V_target).
#[derive(Clone, Debug)]
pub struct AyBasisElement<F: Field> {
    pub source: usize,
    pub target: usize,
    pub degree: u64,
    pub class: ExtClass<F>,
}

#[derive(Clone, Debug)]
pub struct AyAlgebra<F: Field> {
    base: AlgRef<F>,
    phi: DegreeSet,
    summands: Vec<FdModule<F>>,
    multiplicities: Vec<usize>,
    /// For every tagged input module, the classes of its indecomposable summands.
    tags: Vec<Vec<usize>>,
    resolutions: Vec<Arc<ProjResolution<F>>>,
    groups: BTreeMap<(usize, usize, u64), ExtGroup<F>>,
    change_inv: BTreeMap<(usize, usize, u64), Matrix<F>>,
    index: BTreeMap<(usize, usize, u64), Vec<usize>>,
    basis: Vec<AyBasisElement<F>>,
    table: Vec<Vec<Vec<F::Elem>>>,
    algebra: Option<AlgRef<F>>,
    witness: Option<(usize, usize, usize)>,
    finite: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssociativityReport {
    pub associative: bool,
    /// Basis triple (a, b, c) with (ab)c != a(bc).
    pub witness: Option<(usize, usize, usize)>,
    pub witness_degrees: Option<(u64, u64, u64)>,
}

fn classes_of<F: Field>(tagged: &[FdModule<F>], seed: u64) -> Result<(Vec<FdModule<F>>, Vec<usize>, Vec<Vec<usize>>)> {
    let mut reps: Vec<FdModule<F>> = Vec::new();
    let mut mult = Vec::new();
    let mut tags = Vec::new();
    for m in tagged {
        let mut mine = Vec::new();
        for s in decompose(m, seed)? {
            let mut found = None;
            for (k, r) in reps.iter().enumerate() {
                if crate::modcat::isomorphic_indecomposables(r, &s.module)? {
                    found = Some(k);
                    break;
                }
            }
            let k = match found {
                Some(k) => {
                    mult[k] += 1;
                    k
                }
                None => {
                    reps.push(s.module);
                    mult.push(1);
                    reps.len() - 1
                }
            };
            mine.push(k);
        }
        tags.push(mine);
    }
    Ok((reps, mult, tags))
}

/// E^Φ(M) for M the direct sum of the tagged modules. Ext is computed from
/// resolutions of length `cap`, which must reach max Φ.
pub fn build_ay_algebra<F: Field>(
    base: &AlgRef<F>,
    tagged: &[FdModule<F>],
    phi: &DegreeSet,
    cap: usize,
    seed: u64,
) -> Result<AyAlgebra<F>> {
    if !phi.contains(0) {
        return Err(Error::InvalidInput("the degree set must contain 0".into()));
    }
    let top = phi.max().unwrap_or(0);
    if top > cap as u64 {
        return Err(Error::CapExceeded(format!("max Φ = {top} exceeds the resolution cap {cap}")));
    }
    for m in tagged {
        if !crate::modcat::same_algebra(m.algebra(), base) {
            return Err(Error::AlgebraMismatch);
        }
    }
    let f = base.field();
    let (summands, multiplicities, tags) = classes_of(tagged, seed)?;
    if summands.is_empty() {
        return Err(Error::InvalidInput("the module is zero".into()));
    }
    let n = summands.len();
    let resolutions: Vec<Arc<ProjResolution<F>>> =
        summands.iter().map(|v| min_proj_resolution(v, top as usize).map(Arc::new)).collect::<Result<_>>()?;
    let mut groups = BTreeMap::new();
    for s in 0..n {
        for t in 0..n {
            for &d in phi.elements() {
                groups.insert((s, t, d), ext_group(&resolutions[s], &summands[t], d as usize)?);
            }
        }
    }

    let mut change_inv = BTreeMap::new();
    let mut index = BTreeMap::new();
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    let mut block = Vec::new();
    let mut idempotents = vec![0; n];
    for s in 0..n {
        for t in 0..n {
            for &d in phi.elements() {
                let g = &groups[&(s, t, d)];
                let dim = g.dim();
                if dim == 0 {
                    continue;
                }
                let cols: Vec<Vec<F::Elem>> = if s == t && d == 0 {
                    unit_plus_radical(g, &summands[s])?
                } else {
                    (0..dim).map(|k| unit_vec(f, dim, k)).collect()
                };
                let m = Matrix::from_cols(f, dim, &cols);
                let inv = m.inverse().ok_or_else(|| Error::Internal("block basis is dependent".into()))?;
                let mut idx = Vec::with_capacity(dim);
                for (k, c) in cols.iter().enumerate() {
                    let b = basis.len();
                    if s == t && d == 0 && k == 0 {
                        idempotents[s] = b;
                        labels.push(format!("e{}", s + 1));
                    } else {
                        labels.push(format!("x{}_{}^{}_{}", s + 1, t + 1, d, k));
                    }
                    idx.push(b);
                    block.push((s, t));
                    basis.push(AyBasisElement { source: s, target: t, degree: d, class: g.from_coords(c) });
                }
                change_inv.insert((s, t, d), inv);
                index.insert((s, t, d), idx);
            }
        }
    }

    let finite = phi.cap().is_none() || resolutions.iter().all(|r| r.projective_dimension().is_some_and(|p| (p as u64) <= top));
    let mut e = AyAlgebra {
        base: Arc::clone(base),
        phi: phi.clone(),
        summands,
        multiplicities,
        tags,
        resolutions,
        groups,
        change_inv,
        index,
        basis,
        table: Vec::new(),
        algebra: None,
        witness: None,
        finite,
    };
    e.table = e.compute_table()?;
    e.witness = e.find_nonassociative_triple();
    if e.witness.is_none() {
        let dim = e.basis.len();
        let vertex_labels = (1..=n).map(|v| v.to_string()).collect();
        let table = &e.table;
        let alg = FdAlgebra::from_table(f, vertex_labels, labels, block, idempotents, |a, b| {
            if table[a][b].is_empty() {
                vec![f.zero(); dim]
            } else {
                table[a][b].clone()
            }
        })?;
        e.algebra = Some(Arc::new(alg));
    }
    Ok(e)
}

/// Class coordinates of id_V followed by a basis of the radical of End(V).
fn unit_plus_radical<F: Field>(g: &ExtGroup<F>, v: &FdModule<F>) -> Result<Vec<Vec<F::Elem>>> {
    let f = v.field();
    let d = g.dim();
    let id = g.class_of_hom(&Matrix::identity(f, v.dim()))?.coords;
    let mut rad = Vec::with_capacity(d);
    for k in 0..d {
        let h = g.hom_of_class(&g.class(k))?;
        let c = local_scalar(f, &h)
            .ok_or_else(|| Error::Precondition("a summand endomorphism has no eigenvalue in the base field".into()))?;
        let mut x = unit_vec(f, d, k);
        vec_axpy(f, &mut x, &f.neg(&c), &id);
        rad.push(x);
    }
    let rad = Subspace::span(f, d, &rad);
    if rad.dim() + 1 != d {
        return Err(Error::Precondition("summand endomorphism ring is not local with residue field k".into()));
    }
    let mut cols = vec![id];
    cols.extend(rad.basis().iter().cloned());
    Ok(cols)
}

impl<F: Field> AyAlgebra<F> {
    fn compute_table(&self) -> Result<Vec<Vec<Vec<F::Elem>>>> {
        let dim = self.basis.len();
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                let (x, y) = (&self.basis[a], &self.basis[b]);
                if x.target != y.source || !self.phi.contains(x.degree + y.degree) {
                    continue;
                }
                let out_key = (x.source, y.target, x.degree + y.degree);
                let Some(out) = self.groups.get(&out_key) else { continue };
                let fg = &self.groups[&(x.source, x.target, x.degree)];
                let gg = &self.groups[&(y.source, y.target, y.degree)];
                let p = yoneda_product(fg, &x.class, gg, &y.class, out, None)?;
                table[a][b] = self.embed(out_key, &p.coords);
            }
        }
        Ok(table)
    }

    /// Class coordinates in a block to coordinates in the full basis.
    fn embed(&self, key: (usize, usize, u64), coords: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.base.field();
        let mut v = vec![f.zero(); self.basis.len()];
        if let (Some(inv), Some(idx)) = (self.change_inv.get(&key), self.index.get(&key)) {
            for (k, c) in inv.mul_vec(coords).into_iter().enumerate() {
                v[idx[k]] = c;
            }
        }
        v
    }

    /// Product of two elements in basis coordinates, from the raw table.
    pub fn mul(&self, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.base.field();
        let dim = self.basis.len();
        let mut out = vec![f.zero(); dim];
        for (a, xa) in x.iter().enumerate() {
            if f.is_zero(xa) {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if f.is_zero(yb) || self.table[a][b].is_empty() {
                    continue;
                }
                vec_axpy(f, &mut out, &f.mul(xa, yb), &self.table[a][b]);
            }
        }
        out
    }

    fn basis_product(&self, a: usize, b: usize) -> Vec<F::Elem> {
        if self.table[a][b].is_empty() {
            vec![self.base.field().zero(); self.basis.len()]
        } else {
            self.table[a][b].clone()
        }
    }

    fn find_nonassociative_triple(&self) -> Option<(usize, usize, usize)> {
        let dim = self.basis.len();
        for a in 0..dim {
            for b in 0..dim {
                if self.basis[a].target != self.basis[b].source {
                    continue;
                }
                let ab = self.basis_product(a, b);
                for c in 0..dim {
                    if self.basis[b].target != self.basis[c].source {
                        continue;
                    }
                    let left = self.mul(&ab, &unit_vec(self.base.field(), dim, c));
                    let bc = self.basis_product(b, c);
                    let right = self.mul(&unit_vec(self.base.field(), dim, a), &bc);
                    if left != right {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn base(&self) -> &AlgRef<F> {
        &self.base
    }
    pub fn phi(&self) -> &DegreeSet {
        &self.phi
    }
    pub fn num_vertices(&self) -> usize {
        self.summands.len()
    }
    pub fn summands(&self) -> &[FdModule<F>] {
        &self.summands
    }
    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }
    /// Classes of the summands of each tagged input module.
    pub fn tags(&self) -> &[Vec<usize>] {
        &self.tags
    }
    pub fn basis(&self) -> &[AyBasisElement<F>] {
        &self.basis
    }
    pub fn resolution(&self, s: usize) -> &Arc<ProjResolution<F>> {
        &self.resolutions[s]
    }
    pub fn group(&self, s: usize, t: usize, d: u64) -> Option<&ExtGroup<F>> {
        self.groups.get(&(s, t, d))
    }
    /// Basis indices of Ext^d(V_s, V_t).
    pub fn block_indices(&self, s: usize, t: usize, d: u64) -> &[usize] {
        self.index.get(&(s, t, d)).map(|v| v.as_slice()).unwrap_or(&[])
    }
    /// False when Φ is a truncation of an infinite set and Ext does not vanish past the cap.
    pub fn is_finite(&self) -> bool {
        self.finite
    }
    /// The algebra, present exactly when the multiplication table is associative.
    pub fn algebra(&self) -> Option<&AlgRef<F>> {
        self.algebra.as_ref()
    }
    pub fn require_algebra(&self) -> Result<&AlgRef<F>> {
        self.algebra.as_ref().ok_or_else(|| Error::Precondition("the multiplication table is not associative".into()))
    }

    /// Dimension of each degree.
    pub fn graded_dims(&self) -> BTreeMap<u64, usize> {
        let mut out: BTreeMap<u64, usize> = self.phi.elements().iter().map(|&d| (d, 0)).collect();
        for b in &self.basis {
            *out.entry(b.degree).or_default() += 1;
        }
        out
    }

    /// Basis coordinates of a degree-0 map V_s -> V_t.
    pub fn element_of_hom(&self, s: usize, t: usize, phi: &Matrix<F>) -> Result<Vec<F::Elem>> {
        let g = self.groups.get(&(s, t, 0)).ok_or_else(|| Error::InvalidInput("vertex out of range".into()))?;
        let c = g.class_of_hom(phi)?;
        Ok(self.embed((s, t, 0), &c.coords))
    }

    /// Basis coordinates of a class in Ext^d(V_s, V_t).
    pub fn element_of_class(&self, s: usize, t: usize, class: &ExtClass<F>) -> Vec<F::Elem> {
        self.embed((s, t, class.degree as u64), &class.coords)
    }

    pub fn check_associativity(&self) -> AssociativityReport {
        AssociativityReport {
            associative: self.witness.is_none(),
            witness: self.witness,
            witness_degrees: self.witness.map(|(a, b, c)| (self.basis[a].degree, self.basis[b].degree, self.basis[c].degree)),
        }
    }

    pub fn summary(&self) -> AySummary {
        AySummary {
            dim: self.dim(),
            phi: self.phi.elements().to_vec(),
            num_vertices: self.num_vertices(),
            multiplicities: self.multiplicities.clone(),
            summand_dims: self.summands.iter().map(|m| m.dim_vector()).collect(),
            graded_dims: self.graded_dims().into_iter().collect(),
            associative: self.witness.is_none(),
            finite: self.finite,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AySummary {
    pub dim: usize,
    pub phi: Vec<u64>,
    pub num_vertices: usize,
    pub multiplicities: Vec<usize>,
    pub summand_dims: Vec<Vec<usize>>,
    pub graded_dims: Vec<(u64, usize)>,
    pub associative: bool,
    pub finite: bool,
}

/// E(V, Y) = ⊕_{d∈Φ} Ext^d(V, Y) as a left module over E^Φ(V).
#[derive(Clone, Debug)]
pub struct AyModule<F: Field> {
    pub module: FdModule<F>,
    /// (vertex s, degree d, class index k) of each basis vector: the k-th class of Ext^d(V_s, Y).
    pub layout: Vec<(usize, u64, usize)>,
}

pub fn ay_module<F: Field>(e: &AyAlgebra<F>, y: &FdModule<F>) -> Result<AyModule<F>> {
    let ealg = e.require_algebra()?;
    if !crate::modcat::same_algebra(y.algebra(), &e.base) {
        return Err(Error::AlgebraMismatch);
    }
    let f = e.base.field();
    let n = e.num_vertices();
    let mut ygroups = BTreeMap::new();
    let mut layout = Vec::new();
    let mut offset = BTreeMap::new();
    for s in 0..n {
        for &d in e.phi.elements() {
            let g = ext_group(&e.resolutions[s], y, d as usize)?;
            offset.insert((s, d), layout.len());
            layout.extend((0..g.dim()).map(|k| (s, d, k)));
            ygroups.insert((s, d), g);
        }
    }
    let len = layout.len();
    let vertices = layout.iter().map(|x| x.0).collect();
    let mut actions = Vec::with_capacity(e.dim());
    for b in &e.basis {
        let mut m = Matrix::zeros(f, len, len);
        let total = b.degree;
        for &j in e.phi.elements() {
            if !e.phi.contains(total + j) {
                continue;
            }
            let src = &ygroups[&(b.target, j)];
            let out = &ygroups[&(b.source, total + j)];
            let fg = &e.groups[&(b.source, b.target, b.degree)];
            for k in 0..src.dim() {
                let p = yoneda_product(fg, &b.class, src, &src.class(k), out, None)?;
                let col = offset[&(b.target, j)] + k;
                let row0 = offset[&(b.source, total + j)];
                for (r, c) in p.coords.into_iter().enumerate() {
                    m.set(row0 + r, col, c);
                }
            }
        }
        actions.push(m);
    }
    Ok(AyModule { module: FdModule::new(ealg, vertices, actions)?, layout })
}

/// For an indecomposable W in add(M): its class s and an isomorphism W -> V_s.
fn match_class<F: Field>(e: &AyAlgebra<F>, w: &FdModule<F>) -> Result<Option<(usize, Matrix<F>)>> {
    for (s, v) in e.summands.iter().enumerate() {
        if v.dim_vector() != w.dim_vector() {
            continue;
        }
        if let Some(h) = hom_space(w, v)?.into_iter().find(|h| h.is_invertible()) {
            return Ok(Some((s, h)));
        }
    }
    Ok(None)
}

/// Applies E(M, -) termwise to a complex whose terms lie in add(M); the result is a
/// complex of projective E^Φ(M)-modules.
pub fn ay_on_complex<F: Field>(e: &AyAlgebra<F>, x: &ModComplex<F>, seed: u64) -> Result<ProjComplex<F>> {
    let ealg = e.require_algebra()?;
    if !crate::modcat::same_algebra(x.algebra(), &e.base) {
        return Err(Error::AlgebraMismatch);
    }
    let f = e.base.field();
    // per degree: (class, inclusion W -> X^i composed with the inverse iso, iso V -> ... ) pairs
    struct Piece<F: Field> {
        class: usize,
        /// V_class -> X^i
        into: Matrix<F>,
        /// X^i -> V_class
        onto: Matrix<F>,
    }
    let mut pieces: BTreeMap<i64, Vec<Piece<F>>> = BTreeMap::new();
    for (&i, m) in x.terms() {
        let mut here = Vec::new();
        for s in decompose(m, seed)? {
            let (class, iso) = match_class(e, &s.module)?
                .ok_or_else(|| Error::InvalidInput(format!("a summand of the term in degree {i} is not in add(M)")))?;
            let iso_inv = iso.inverse().ok_or_else(|| Error::Internal("isomorphism is not invertible".into()))?;
            here.push(Piece { class, into: s.inclusion.mul(&iso_inv), onto: iso.mul(&s.projection) });
        }
        pieces.insert(i, here);
    }
    let terms: BTreeMap<i64, Vec<usize>> = pieces.iter().map(|(&i, p)| (i, p.iter().map(|q| q.class).collect())).collect();
    let mut diffs = BTreeMap::new();
    for (&i, d) in x.diffs() {
        let (Some(src), Some(tgt)) = (pieces.get(&i), pieces.get(&(i + 1))) else { continue };
        let mut entries = Vec::with_capacity(src.len() * tgt.len());
        for p in src {
            for q in tgt {
                let psi = q.onto.mul(d).mul(&p.into);
                entries.push(e.element_of_hom(p.class, q.class, &psi)?);
            }
        }
        let sv: Vec<usize> = src.iter().map(|p| p.class).collect();
        let tv: Vec<usize> = tgt.iter().map(|q| q.class).collect();
        diffs.insert(i, ProjMap::from_entries(ealg, &sv, &tv, entries)?);
    }
    let _ = f;
    ProjComplex::new(ealg, terms, diffs)
}

#[derive(Clone, Debug, Serialize)]
pub struct AyInstanceReport {
    pub m_summands: Vec<Vec<usize>>,
    pub n_summands: Vec<Vec<usize>>,
    pub phi: Vec<u64>,
    pub tbar_complex: ComplexDescription,
    pub tbar_term_dims: Vec<(i64, usize)>,
    pub tilting: TiltingReport,
    pub end_dim: usize,
    pub ay_dim: usize,
    pub fingerprint_m: InvariantReport,
    pub fingerprint_n: InvariantReport,
    pub fingerprint_end: InvariantReport,
    pub m_vs_n: ReportComparison,
    pub m_vs_end: ReportComparison,
    pub verdict: bool,
}

/// The complex A[-1] ⊕ (ΩX -> P(X)) with ΩX in degree 0, as a complex of A-modules.
pub fn shift_tbar<F: Field>(a: &AlgRef<F>, x: &FdModule<F>) -> Result<ModComplex<F>> {
    let (omega, incl, cover) = syzygy(x)?;
    let reg = FdModule::regular(a);
    let top = FdModule::direct_sum(&[&reg, &cover.module])?;
    let mut terms = BTreeMap::new();
    terms.insert(0, omega.clone());
    terms.insert(1, top.clone());
    let mut d = Matrix::zeros(a.field(), top.dim(), omega.dim());
    d.paste(reg.dim(), 0, &incl);
    let mut diffs = BTreeMap::new();
    diffs.insert(0, d);
    ModComplex::new(a, terms, diffs)
}

/// Derived equivalence between E^Φ(A⊕X) and E^Φ(A⊕ΩX) over a self-injective A, checked
/// through the complex E(N, T̄) of projective E^Φ(N)-modules.
pub fn verify_shift_instance<F: Field>(
    a: &AlgRef<F>,
    x: &FdModule<F>,
    phi: &DegreeSet,
    seed: u64,
) -> Result<AyInstanceReport> {
    if !is_selfinjective(a)? {
        return Err(Error::Precondition("the algebra is not self-injective".into()));
    }
    if phi.cap().is_some() {
        return Err(Error::Precondition("the degree set must be finite".into()));
    }
    if !crate::admissible::is_admissible(phi).admissible {
        return Err(Error::Precondition(format!("{phi} is not admissible")));
    }
    let cap = phi.max().unwrap_or(0) as usize;
    let reg = FdModule::regular(a);
    let (omega, _, _) = syzygy(x)?;
    let em = build_ay_algebra(a, &[reg.clone(), x.clone()], phi, cap, seed)?;
    let en = build_ay_algebra(a, &[reg, omega], phi, cap, seed)?;
    let tbar = shift_tbar(a, x)?;
    let t = ay_on_complex(&en, &tbar, seed)?;
    let tilting = tilting_report(&t, Generation::ByConstruction, seed)?;
    let end = end_algebra_of_complex(&t, seed)?;
    let fm = invariant_report(em.require_algebra()?)?;
    let fn_ = invariant_report(en.require_algebra()?)?;
    let fe = invariant_report(&end.algebra)?;
    let m_vs_n = compare_reports(&fm, &fn_);
    let m_vs_end = compare_reports(&fm, &fe);
    let end_dim = end.algebra.dim();
    let ay_dim = em.dim();
    let verdict = tilting.verdict && end_dim == ay_dim && m_vs_n.consistent && m_vs_end.consistent;
    Ok(AyInstanceReport {
        m_summands: em.summands().iter().map(|m| m.dim_vector()).collect(),
        n_summands: en.summands().iter().map(|m| m.dim_vector()).collect(),
        phi: phi.elements().to_vec(),
        tbar_complex: t.describe(),
        tbar_term_dims: t.terms().keys().map(|&i| (i, t.term_module(i).dim())).collect(),
        tilting,
        end_dim,
        ay_dim,
        fingerprint_m: fm,
        fingerprint_n: fn_,
        fingerprint_end: fe,
        m_vs_n,
        m_vs_end,
        verdict,
    })
}
