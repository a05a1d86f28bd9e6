use std::collections::{HashMap, VecDeque};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::FdAlgebra;
use crate::error::{Error, Result};
use crate::linalg::matrix::vec_axpy;
use crate::linalg::{Field, Matrix, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

/// A linear combination of paths; each path is a sequence of arrow indices read left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(BigRational, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathPresentation {
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
    /// Every path of this length must lie in the relation ideal.
    pub cap: usize,
}

impl Quiver {
    pub fn new(vertices: Vec<String>) -> Self {
        Quiver { vertices, arrows: Vec::new() }
    }

    pub fn add_arrow(&mut self, label: &str, source: usize, target: usize) -> usize {
        self.arrows.push(Arrow { label: label.to_string(), source, target });
        self.arrows.len() - 1
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, a) in self.arrows.iter().enumerate() {
            if a.source >= self.vertices.len() || a.target >= self.vertices.len() {
                return Err(Error::InvalidInput(format!("arrow {} has an endpoint out of range", a.label)));
            }
            if self.arrows[..i].iter().any(|b| b.label == a.label) {
                return Err(Error::InvalidInput(format!("duplicate arrow label {}", a.label)));
            }
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if self.vertices[..i].contains(v) {
                return Err(Error::InvalidInput(format!("duplicate vertex {v}")));
            }
        }
        Ok(())
    }

    /// (source, target) of a nonempty composable path.
    pub fn path_endpoints(&self, path: &[usize]) -> Result<(usize, usize)> {
        let first = path.first().ok_or_else(|| Error::InvalidInput("empty path".into()))?;
        let first = self.arrows.get(*first).ok_or_else(|| Error::InvalidInput("arrow index out of range".into()))?;
        let mut at = first.target;
        for &a in &path[1..] {
            let arrow = self.arrows.get(a).ok_or_else(|| Error::InvalidInput("arrow index out of range".into()))?;
            if arrow.source != at {
                return Err(Error::InvalidInput(format!("path {} is not composable", self.render_path(path))));
            }
            at = arrow.target;
        }
        Ok((first.source, at))
    }

    pub fn render_path(&self, path: &[usize]) -> String {
        path.iter().map(|&a| self.arrows.get(a).map_or("?", |x| x.label.as_str())).collect::<Vec<_>>().join(".")
    }
}

impl Relation {
    pub fn monomial(path: Vec<usize>) -> Self {
        Relation { terms: vec![(BigRational::one(), path)] }
    }

    pub fn binomial(p: Vec<usize>, q: Vec<usize>) -> Self {
        Relation { terms: vec![(BigRational::one(), p), (-BigRational::one(), q)] }
    }

    pub fn render(&self, quiver: &Quiver) -> String {
        let mut out = String::new();
        for (i, (c, p)) in self.terms.iter().enumerate() {
            let neg = c < &BigRational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            let sign = match (i, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            out.push_str(sign);
            if !mag.is_one() {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&quiver.render_path(p));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct PathKey {
    source: usize,
    arrows: Vec<usize>,
}

/// The path space of a quiver cut off above a maximal length.
struct PathSpace<'q> {
    quiver: &'q Quiver,
    paths: Vec<PathKey>,
    targets: Vec<usize>,
    index: HashMap<PathKey, usize>,
    max_len: usize,
}

impl<'q> PathSpace<'q> {
    /// Paths are indexed longest first, so echelon pivots land on long paths
    /// and the surviving representatives are short.
    fn new(quiver: &'q Quiver, max_len: usize, longest_first: bool) -> Self {
        let mut all: Vec<(PathKey, usize)> = (0..quiver.vertices.len()).map(|v| (PathKey { source: v, arrows: vec![] }, v)).collect();
        let mut frontier = all.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (p, t) in &frontier {
                for (ai, a) in quiver.arrows.iter().enumerate() {
                    if a.source == *t {
                        let mut arrows = p.arrows.clone();
                        arrows.push(ai);
                        next.push((PathKey { source: p.source, arrows }, a.target));
                    }
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        all.sort_by(|(a, _), (b, _)| {
            let la = a.arrows.len();
            let lb = b.arrows.len();
            let ord = if longest_first { lb.cmp(&la) } else { la.cmp(&lb) };
            ord.then_with(|| a.cmp(b))
        });
        let index = all.iter().enumerate().map(|(i, (p, _))| (p.clone(), i)).collect();
        let targets = all.iter().map(|(_, t)| *t).collect();
        let paths = all.into_iter().map(|(p, _)| p).collect();
        PathSpace { quiver, paths, targets, index, max_len }
    }

    fn len(&self) -> usize {
        self.paths.len()
    }

    fn trivial(&self, v: usize) -> usize {
        self.index[&PathKey { source: v, arrows: vec![] }]
    }

    fn arrow_path(&self, a: usize) -> usize {
        self.index[&PathKey { source: self.quiver.arrows[a].source, arrows: vec![a] }]
    }

    /// Index of the concatenation p then q, or None when not composable or too long.
    fn concat(&self, p: usize, q: usize) -> Option<usize> {
        let pk = &self.paths[p];
        let qk = &self.paths[q];
        if self.targets[p] != qk.source || pk.arrows.len() + qk.arrows.len() > self.max_len {
            return None;
        }
        let mut arrows = pk.arrows.clone();
        arrows.extend(qk.arrows.iter().copied());
        Some(self.index[&PathKey { source: pk.source, arrows }])
    }

    fn mul_vec<F: Field>(&self, f: &F, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = vec![f.zero(); self.len()];
        for (p, xp) in x.iter().enumerate() {
            if f.is_zero(xp) {
                continue;
            }
            for (q, yq) in y.iter().enumerate() {
                if f.is_zero(yq) {
                    continue;
                }
                if let Some(r) = self.concat(p, q) {
                    out[r] = f.mul_add(&out[r], xp, yq);
                }
            }
        }
        out
    }

    fn relation_vector<F: Field>(&self, f: &F, rel: &Relation) -> Result<Vec<F::Elem>> {
        let mut v = vec![f.zero(); self.len()];
        for (c, path) in &rel.terms {
            let coeff = f
                .from_ratio(c.numer(), c.denom())
                .ok_or_else(|| Error::InvalidInput(format!("coefficient {c} is undefined in {}", f.spec())))?;
            if path.len() > self.max_len {
                continue;
            }
            let key = PathKey { source: self.quiver.path_endpoints(path)?.0, arrows: path.clone() };
            let i = self.index[&key];
            v[i] = f.add(&v[i], &coeff);
        }
        Ok(v)
    }

    /// Smallest subspace containing the given vectors and closed under
    /// multiplication by arrows on both sides.
    fn ideal_closure<F: Field>(&self, f: &F, gens: Vec<Vec<F::Elem>>) -> Subspace<F> {
        let arrows: Vec<Vec<F::Elem>> = (0..self.quiver.arrows.len())
            .map(|a| crate::linalg::matrix::unit_vec(f, self.len(), self.arrow_path(a)))
            .collect();
        let mut ideal = Subspace::zero(f, self.len());
        let mut queue: VecDeque<Vec<F::Elem>> = gens.into();
        while let Some(v) = queue.pop_front() {
            if ideal.insert(&v) {
                for a in &arrows {
                    let l = self.mul_vec(f, a, &v);
                    if l.iter().any(|x| !f.is_zero(x)) {
                        queue.push_back(l);
                    }
                    let r = self.mul_vec(f, &v, a);
                    if r.iter().any(|x| !f.is_zero(x)) {
                        queue.push_back(r);
                    }
                }
            }
        }
        ideal
    }
}

fn check_relations(p: &PathPresentation) -> Result<()> {
    for rel in &p.relations {
        let mut ends = None;
        for (_, path) in &rel.terms {
            if path.len() < 2 {
                return Err(Error::NotAdmissible(format!(
                    "relation {} has a component of length {}",
                    rel.render(&p.quiver),
                    path.len()
                )));
            }
            let e = p.quiver.path_endpoints(path)?;
            if *ends.get_or_insert(e) != e {
                return Err(Error::InvalidInput(format!(
                    "relation {} mixes paths with different endpoints",
                    rel.render(&p.quiver)
                )));
            }
        }
    }
    Ok(())
}

fn truncated_quotient_dim<F: Field>(field: &F, p: &PathPresentation, max_len: usize) -> Result<usize> {
    let space = PathSpace::new(&p.quiver, max_len, true);
    let rels = p.relations.iter().map(|r| space.relation_vector(field, r)).collect::<Result<Vec<_>>>()?;
    Ok(space.len() - space.ideal_closure(field, rels).dim())
}

/// The quotient of the path algebra by the relation ideal, in a basis of representative paths.
pub fn from_presentation<F: Field>(field: &F, p: &PathPresentation) -> Result<FdAlgebra<F>> {
    p.quiver.validate()?;
    check_relations(p)?;
    if p.cap == 0 {
        return Err(Error::InvalidInput("path cap must be positive".into()));
    }
    let max_len = p.cap - 1;
    let space = PathSpace::new(&p.quiver, max_len, true);
    let rels = p.relations.iter().map(|r| space.relation_vector(field, r)).collect::<Result<Vec<_>>>()?;
    let ideal = space.ideal_closure(field, rels);
    let dim = space.len() - ideal.dim();
    let next = truncated_quotient_dim(field, p, p.cap)?;
    if next != dim {
        return Err(Error::NotAdmissible(format!(
            "paths of length {} are not all in the relation ideal ({} vs {} surviving dimensions)",
            p.cap, dim, next
        )));
    }

    let mut basis_paths = ideal.complement_indices();
    basis_paths.sort_by(|&a, &b| {
        let (pa, pb) = (&space.paths[a], &space.paths[b]);
        pa.arrows.len().cmp(&pb.arrows.len()).then_with(|| pa.cmp(pb))
    });
    let nv = p.quiver.vertices.len();
    for v in 0..nv {
        debug_assert_eq!(basis_paths[v], space.trivial(v));
    }
    let position: HashMap<usize, usize> = basis_paths.iter().enumerate().map(|(i, &pi)| (pi, i)).collect();
    let n = basis_paths.len();
    let labels: Vec<String> = basis_paths
        .iter()
        .map(|&pi| {
            let key = &space.paths[pi];
            if key.arrows.is_empty() {
                format!("e{}", p.quiver.vertices[key.source])
            } else {
                p.quiver.render_path(&key.arrows)
            }
        })
        .collect();
    let block: Vec<(usize, usize)> = basis_paths.iter().map(|&pi| (space.paths[pi].source, space.targets[pi])).collect();
    let idempotents: Vec<usize> = (0..nv).collect();
    let mut alg = FdAlgebra::from_table(field, p.quiver.vertices.clone(), labels, block, idempotents, |a, b| {
        let mut out = vec![field.zero(); n];
        if let Some(r) = space.concat(basis_paths[a], basis_paths[b]) {
            let reduced = ideal.reduce(&crate::linalg::matrix::unit_vec(field, space.len(), r));
            for (k, x) in reduced.into_iter().enumerate() {
                if !field.is_zero(&x) {
                    out[position[&k]] = x;
                }
            }
        }
        out
    })?;
    let words = basis_paths.iter().map(|&pi| space.paths[pi].arrows.clone()).collect();
    let gens = (0..p.quiver.arrows.len()).map(|a| position[&space.arrow_path(a)]).collect();
    alg.set_words(words, gens);
    Ok(alg)
}

fn arrow_label(label: &str, i: usize) -> String {
    let ok = !label.is_empty()
        && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && label.chars().next().is_some_and(|c| c.is_ascii_alphabetic());
    if ok {
        label.to_string()
    } else {
        format!("a{}", i + 1)
    }
}

/// Quiver with relations for a basic algebra: arrows are the chosen generators, and
/// the relations generate the kernel of the path algebra onto the algebra.
pub fn presentation_of<F: Field>(alg: &FdAlgebra<F>, cap: usize) -> Result<PathPresentation> {
    let f = alg.field();
    let loewy = alg.loewy_length();
    if loewy > cap {
        return Err(Error::CapExceeded(format!("Loewy length {loewy} exceeds path cap {cap}")));
    }
    let mut quiver = Quiver::new(alg.vertex_labels().to_vec());
    let gens = alg.generators().to_vec();
    for (i, &g) in gens.iter().enumerate() {
        let (s, t) = alg.block(g);
        let mut label = arrow_label(alg.label(g), i);
        if quiver.arrow_index(&label).is_some() {
            label = format!("a{}", i + 1);
        }
        quiver.add_arrow(&label, s, t);
    }
    let space = PathSpace::new(&quiver, loewy, false);
    // evaluate every path in the algebra
    let mut values: Vec<Vec<F::Elem>> = Vec::with_capacity(space.len());
    for (i, key) in space.paths.iter().enumerate() {
        let v = if key.arrows.is_empty() {
            alg.basis_vector(alg.idempotent(key.source))
        } else {
            let prefix = PathKey { source: key.source, arrows: key.arrows[..key.arrows.len() - 1].to_vec() };
            let last = gens[*key.arrows.last().unwrap()];
            alg.right_matrix(last).mul_vec(&values[space.index[&prefix]])
        };
        debug_assert!(values.len() == i);
        values.push(v);
    }
    let eval = Matrix::from_cols(f, alg.dim(), &values);
    let mut kernel = eval.kernel();
    let lead = |v: &Vec<F::Elem>| v.iter().rposition(|x| !f.is_zero(x)).unwrap_or(0);
    kernel.sort_by_key(lead);
    let mut ideal = space.ideal_closure(f, Vec::new());
    let mut relations = Vec::new();
    for k in kernel {
        if ideal.contains(&k) {
            continue;
        }
        let mut gens_now: Vec<Vec<F::Elem>> = ideal.basis().to_vec();
        gens_now.push(k.clone());
        ideal = space.ideal_closure(f, gens_now);
        let terms = k
            .iter()
            .enumerate()
            .filter(|(_, c)| !f.is_zero(c))
            .map(|(i, c)| (f.to_rational(c), space.paths[i].arrows.clone()))
            .collect();
        relations.push(Relation { terms });
    }
    Ok(PathPresentation { quiver, relations, cap: loewy + 1 })
}

/// Evaluates a path presentation's relation inside an algebra, given the images of the arrows.
pub fn evaluate_relation<F: Field>(
    alg: &FdAlgebra<F>,
    rel: &Relation,
    arrow_images: &[Vec<F::Elem>],
) -> Result<Vec<F::Elem>> {
    let f = alg.field();
    let mut acc = alg.zero();
    for (c, path) in &rel.terms {
        let coeff = f
            .from_ratio(c.numer(), c.denom())
            .ok_or_else(|| Error::InvalidInput(format!("coefficient {c} undefined")))?;
        let factors: Vec<Vec<F::Elem>> = path.iter().map(|&a| arrow_images[a].clone()).collect();
        let mut prod = factors[0].clone();
        for x in &factors[1..] {
            prod = alg.mul(&prod, x);
        }
        vec_axpy(f, &mut acc, &coeff, &prod);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{IntMatrix, PrimeField, Rationals};

    fn t_cubed(cap: usize) -> PathPresentation {
        let mut q = Quiver::new(vec!["1".into()]);
        q.add_arrow("t", 0, 0);
        PathPresentation { quiver: q, relations: vec![Relation::monomial(vec![0, 0, 0])], cap }
    }

    #[test]
    fn monomial_algebra() {
        let f = PrimeField::new(2).unwrap();
        let a = from_presentation(&f, &t_cubed(4)).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.labels(), &["e1", "t", "t.t"]);
        assert_eq!(a.cartan_matrix(), IntMatrix::from_rows(&[vec![3]]));
    }

    #[test]
    fn nilpotency_must_be_reached() {
        let f = PrimeField::new(2).unwrap();
        let mut p = t_cubed(4);
        p.relations.clear();
        assert!(matches!(from_presentation(&f, &p), Err(Error::NotAdmissible(_))));
        let mut q = t_cubed(4);
        q.relations.push(Relation::monomial(vec![0]));
        assert!(matches!(from_presentation(&f, &q), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn kronecker_free_of_relations() {
        // 1 -> 2 with two arrows: hereditary, dim 4
        let mut q = Quiver::new(vec!["1".into(), "2".into()]);
        q.add_arrow("a", 0, 1);
        q.add_arrow("b", 0, 1);
        let p = PathPresentation { quiver: q, relations: vec![], cap: 2 };
        let a = from_presentation(&Rationals, &p).unwrap();
        assert_eq!(a.dim(), 4);
        assert_eq!(a.cartan_matrix(), IntMatrix::from_rows(&[vec![1, 2], vec![0, 1]]));
    }

    #[test]
    fn round_trip_through_presentation() {
        let f = PrimeField::new(3).unwrap();
        let a = from_presentation(&f, &t_cubed(3)).unwrap();
        let p = presentation_of(&a, 10).unwrap();
        assert_eq!(p.quiver.arrows.len(), 1);
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.relations[0].terms[0].1, vec![0, 0, 0]);
        let b = from_presentation(&f, &p).unwrap();
        assert_eq!(b.dim(), 3);
    }
}
