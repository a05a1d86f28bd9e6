#![allow(dead_code)]

use std::sync::Arc;

use ayoneda::algebra::{from_presentation, AlgRef, PathPresentation, Quiver, Relation};
use ayoneda::linalg::Field;
use num_rational::BigRational;
use num_traits::One;

/// Builds a presentation from arrows `(label, src, dst)` (1-based vertices) and relations
/// written as `a.b - c.d`, read left to right.
pub fn presentation(n: usize, arrows: &[(&str, usize, usize)], relations: &[&str], cap: usize) -> PathPresentation {
    let mut q = Quiver::new((1..=n).map(|v| v.to_string()).collect());
    for &(l, s, t) in arrows {
        q.add_arrow(l, s - 1, t - 1);
    }
    let rels = relations.iter().map(|r| parse_relation(&q, r)).collect();
    PathPresentation { quiver: q, relations: rels, cap }
}

pub fn parse_relation(q: &Quiver, text: &str) -> Relation {
    let mut terms = Vec::new();
    let mut sign = BigRational::one();
    for tok in text.split_whitespace() {
        match tok {
            "+" => sign = BigRational::one(),
            "-" => sign = -BigRational::one(),
            path => {
                let arrows = path.split('.').map(|l| q.arrow_index(l).unwrap_or_else(|| panic!("no arrow {l}"))).collect();
                terms.push((sign.clone(), arrows));
                sign = BigRational::one();
            }
        }
    }
    Relation { terms }
}

pub fn build<F: Field>(f: &F, p: &PathPresentation) -> AlgRef<F> {
    Arc::new(from_presentation(f, p).expect("presentation builds"))
}

/// Self-injective algebra on a three-cycle with arrows both ways: arrows a_i: i -> i+1 and b_i: i -> i-1 (mod 3).
pub fn three_cycle() -> PathPresentation {
    presentation(
        3,
        &[("a1", 1, 2), ("a2", 2, 3), ("a3", 3, 1), ("b1", 1, 3), ("b2", 2, 1), ("b3", 3, 2)],
        &[
            "a1.b2 - b1.a3",
            "a2.b3 - b2.a1",
            "a3.b1 - b3.a2",
            "a1.a2",
            "a2.a3",
            "a3.a1",
            "b1.b3",
            "b2.b1",
            "b3.b2",
        ],
        3,
    )
}

/// Presented endomorphism algebra of its tilting complex for the idempotent at 1 and 3: 1 -a-> 2 -b-> 3, 2 -d-> 1, 3 -g-> 2.
pub fn three_cycle_end() -> PathPresentation {
    presentation(
        3,
        &[("al", 1, 2), ("de", 2, 1), ("be", 2, 3), ("ga", 3, 2)],
        &["al.de", "ga.be", "de.al.be.ga - be.ga.de.al"],
        6,
    )
}

/// Every basis element of a block that is not in the square of the radical, tried as arrow images.
pub fn arrow_candidates<F: Field>(alg: &AlgRef<F>, s: usize, t: usize, values: &[F::Elem]) -> Vec<Vec<F::Elem>> {
    let rad2 = alg.radical_power(2);
    let idx = alg.block_indices(s, t).to_vec();
    let mut out = Vec::new();
    let k = idx.len();
    let q = values.len();
    let total = q.checked_pow(k as u32).unwrap_or(usize::MAX);
    for mut code in 0..total {
        let mut x = alg.zero();
        for &b in &idx {
            x[b] = values[code % q].clone();
            code /= q;
        }
        if !rad2.contains(&x) && alg.in_radical(&x) {
            out.push(x);
        }
    }
    out
}

/// Admissibility straight from the definition: 0 in the set, and for i, j, k in the set with
/// i+j+k in the set, i+j is in the set exactly when j+k is.
pub fn admissible_by_definition(set: &[u64]) -> bool {
    let has = |x: u64| set.contains(&x);
    if !has(0) {
        return false;
    }
    for &i in set {
        for &j in set {
            for &k in set {
                if has(i + j + k) && has(i + j) != has(j + k) {
                    return false;
                }
            }
        }
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

type Sparse = std::collections::BTreeMap<usize, u64>;

/// Path counting for kQ/(R + paths of length >= len_cap + paths of degree > deg_cap) over F_p,
/// by closing the relations under multiplication with arrows and eliminating. Returns the
/// dimension of each arrow degree. Relation coefficients are read as integers mod p.
pub fn path_count_graded(
    pres: &PathPresentation,
    degrees: &[u64],
    p: u64,
    len_cap: usize,
    deg_cap: u64,
) -> std::collections::BTreeMap<u64, usize> {
    use std::collections::{BTreeMap, HashMap, VecDeque};
    let q = &pres.quiver;
    let nv = q.vertices.len();
    // (arrows, source, target, degree); trivial paths carry their vertex
    let mut paths: Vec<(Vec<usize>, usize, usize, u64)> = (0..nv).map(|v| (vec![], v, v, 0)).collect();
    let mut frontier: Vec<usize> = (0..nv).collect();
    for _ in 1..len_cap {
        let mut next = Vec::new();
        for &i in &frontier {
            let (w, s, t, d) = paths[i].clone();
            for (a, arr) in q.arrows.iter().enumerate() {
                if arr.source == t && d + degrees[a] <= deg_cap {
                    let mut w2 = w.clone();
                    w2.push(a);
                    paths.push((w2, s, arr.target, d + degrees[a]));
                    next.push(paths.len() - 1);
                }
            }
        }
        frontier = next;
    }
    let index: HashMap<(Vec<usize>, usize), usize> =
        paths.iter().enumerate().map(|(i, (w, s, _, _))| ((w.clone(), *s), i)).collect();
    let lookup = |w: &[usize], s: usize| index.get(&(w.to_vec(), s)).copied();
    let reduce_coeff = |c: &num_rational::BigRational| -> u64 {
        use num_traits::{Signed, ToPrimitive};
        let n = (c.numer().abs() % p).to_u64().unwrap();
        let d = (c.denom().abs() % p).to_u64().unwrap();
        let v = n * pow_mod(d, p - 2, p) % p;
        if c.is_negative() {
            (p - v) % p
        } else {
            v
        }
    };
    let add_to = |vec: &mut Sparse, k: usize, c: u64| {
        let e = vec.entry(k).or_insert(0);
        *e = (*e + c) % p;
        if *e == 0 {
            vec.remove(&k);
        }
    };
    // echelon rows keyed by pivot (smallest index)
    let mut rows: HashMap<usize, Sparse> = HashMap::new();
    let mut queue: VecDeque<Sparse> = VecDeque::new();
    for r in &pres.relations {
        let mut v = Sparse::new();
        for (c, w) in &r.terms {
            let s = q.arrows[w[0]].source;
            if let Some(k) = lookup(w, s) {
                add_to(&mut v, k, reduce_coeff(c));
            }
        }
        queue.push_back(v);
    }
    let reduce = |rows: &HashMap<usize, Sparse>, mut v: Sparse| -> Sparse {
        while let Some((&k, &c)) = v.iter().find(|(k, _)| rows.contains_key(k)) {
            let r = &rows[&k];
            let factor = c * pow_mod(r[&k], p - 2, p) % p;
            for (&j, &x) in r {
                add_to(&mut v, j, (p - factor * x % p) % p);
            }
        }
        v
    };
    while let Some(v) = queue.pop_front() {
        let v = reduce(&rows, v);
        let Some((&pivot, _)) = v.iter().next() else { continue };
        for (a, arr) in q.arrows.iter().enumerate() {
            let mut left = Sparse::new();
            let mut right = Sparse::new();
            for (&k, &c) in &v {
                let (w, s, t, _) = &paths[k];
                if arr.target == *s {
                    let mut w2 = vec![a];
                    w2.extend_from_slice(w);
                    if let Some(j) = lookup(&w2, arr.source) {
                        add_to(&mut left, j, c);
                    }
                }
                if arr.source == *t {
                    let mut w2 = w.clone();
                    w2.push(a);
                    if let Some(j) = lookup(&w2, *s) {
                        add_to(&mut right, j, c);
                    }
                }
            }
            queue.push_back(left);
            queue.push_back(right);
        }
        rows.insert(pivot, v);
    }
    let mut out = BTreeMap::new();
    for (i, (_, _, _, d)) in paths.iter().enumerate() {
        // a path is a basis element of the quotient unless it is an ideal pivot
        if !rows.contains_key(&i) {
            *out.entry(*d).or_insert(0) += 1;
        }
    }
    out.retain(|_, v| *v > 0);
    out
}

pub fn total(dims: &std::collections::BTreeMap<u64, usize>) -> usize {
    dims.values().sum()
}
