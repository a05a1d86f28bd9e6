//! Acceptance criteria 1-9. Each test prints one line `criterion N: PASS|FAIL ...` on
//! stdout (bypassing the harness capture) and then asserts the outcome. All checks are
//! exact; the only tolerances are the search and stabilization bounds pinned below.

mod common;

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;

use ayoneda::admissible::{is_admissible, phi_family, set_op, subsets_with_zero, DegreeSet, SetOp, Violation};
use ayoneda::algebra::{
    evaluate_relation, global_dimension, invariant_report, is_selfinjective, nabla_ideal, socle_ideal, truncated_polynomial,
    AlgRef, FdAlgebra, GlobalDimension, InvariantReport, PathPresentation,
};
use ayoneda::ayoneda::{ay_module, build_ay_algebra, verify_shift_instance, AyAlgebra};
use ayoneda::ext::{ext, ext_group, min_proj_resolution, yoneda_product};
use ayoneda::homotopy::{end_algebra_of_complex, hom_in_k_proj, normalize_radical, ProjComplex, ProjMap};
use ayoneda::linalg::{Field, IntMatrix, Matrix, PrimeField, Rationals};
use ayoneda::modcat::{hom_space, isomorphic, nakayama, syzygy, FdModule};
use ayoneda::quotients::{idempotent_tilting, nabla_quotient_pair, theorem42_check};
use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Largest power-of-two search space for an exhaustive invertible-hom search; beyond it
/// the search draws this many seeded random combinations instead.
const HOM_SEARCH_LIMIT: usize = 4096;
/// Large prime standing in for the rationals in the path-count oracle.
const ORACLE_PRIME: u64 = 1_000_003;
/// Extra path length and degree used to confirm that the oracle's truncation has stabilized.
const ORACLE_SLACK: usize = 3;

fn report(n: u32, pass: bool, detail: &str) {
    let line = format!("criterion {n}: {} {detail}\n", if pass { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
}

fn f2() -> PrimeField {
    PrimeField::new(2).unwrap()
}

fn t_power<F: Field>(f: &F, m: usize) -> AlgRef<F> {
    Arc::new(truncated_polynomial(f, m).unwrap())
}

// ---------------------------------------------------------------------------------------
// criterion 1

#[test]
fn criterion_1_admissible_sets() {
    let mut failures = Vec::new();
    for s in [vec![0, 3, 4], vec![0, 1, 2, 3, 4]] {
        let ds = DegreeSet::new(s.clone());
        if !is_admissible(&ds).admissible || !admissible_by_definition(&s) {
            failures.push(format!("{s:?} not admissible"));
        }
    }
    for n in 1..=4 {
        for m in 0..=6 {
            let phi = phi_family(n, Some(m), 1000).unwrap();
            if !is_admissible(&phi).admissible || !admissible_by_definition(phi.elements()) {
                failures.push(format!("Φ({n},{m}) not admissible"));
            }
        }
    }
    let base = DegreeSet::new([0, 3, 4, 5, 12, 13]);
    let base_ok = is_admissible(&base).admissible && admissible_by_definition(base.elements());
    let (sq, sq_adm) = set_op(&base, None, SetOp::Power(2)).unwrap();
    let witness_valid = match is_admissible(&sq).witness {
        Some(Violation::Triple(i, j, k)) => {
            let has = |x| sq.contains(x);
            has(i) && has(j) && has(k) && has(i + j + k) && has(i + j) != has(j + k)
        }
        _ => false,
    };
    if !base_ok {
        failures.push("{0,3,4,5,12,13} not admissible".into());
    }
    if sq_adm || admissible_by_definition(sq.elements()) || !witness_valid {
        failures.push(format!("square {sq} misreported"));
    }
    let pass = failures.is_empty();
    report(1, pass, &format!("square {sq} rejected with a valid witness; failures: {failures:?}"));
    assert!(pass);
}

// ---------------------------------------------------------------------------------------
// criterion 2

#[test]
fn criterion_2_associativity_biconditional() {
    let f = f2();
    let a = t_power(&f, 2);
    let k = FdModule::simple(&a, 0);
    let mut mismatches = Vec::new();
    let sets = subsets_with_zero(8);
    let mut admissible_count = 0;
    for phi in &sets {
        let cap = phi.max().unwrap_or(0) as usize;
        let e = build_ay_algebra(&a, &[k.clone()], phi, cap.max(1), 0).unwrap();
        let assoc = e.check_associativity().associative;
        let adm = is_admissible(phi).admissible;
        admissible_count += adm as usize;
        if assoc != adm || adm != admissible_by_definition(phi.elements()) {
            mismatches.push(phi.to_string());
        }
    }
    let pass = mismatches.is_empty() && sets.len() == 256;
    report(
        2,
        pass,
        &format!("{} sets, {admissible_count} admissible, mismatches: {mismatches:?}", sets.len()),
    );
    assert!(pass);
}

// ---------------------------------------------------------------------------------------
// criterion 3

/// E^N(A⊕k) for A = k[t]/(t^m): loop α at the A-vertex, β and γ between the vertices,
/// δ1 and δ2 in degrees 1 and 2 at the k-vertex, truncated to degrees at most n.
fn graded_simple_side(m: usize, n: u64) -> (PathPresentation, Vec<u64>) {
    let alpha_top = vec!["al"; m - 1].join(".");
    let mut rels = vec![
        format!("{alpha_top} - be.ga"),
        "al.be".into(),
        "ga.al".into(),
        "ga.be".into(),
        "d1.ga".into(),
        "d2.ga".into(),
        "be.d1".into(),
        "be.d2".into(),
        "d1.d1".into(),
        "d1.d2 - d2.d1".into(),
    ];
    rels.extend(truncation("d1", "d2", n));
    let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
    let p = presentation(2, &[("al", 1, 1), ("be", 1, 2), ("ga", 2, 1), ("d1", 2, 2), ("d2", 2, 2)], &rels, 64);
    (p, vec![0, 0, 0, 1, 2])
}

/// E^N(A⊕ΩK): x and y between the vertices, z1 and z2 in degrees 1 and 2 at the Ωk-vertex.
fn graded_syzygy_side(m: usize, n: u64) -> (PathPresentation, Vec<u64>) {
    let yx = vec!["y.x"; m - 1].join(".");
    let mut rels = vec!["x.z1".into(), "x.z2".into(), "z1.y".into(), "z2.y".into(), "z1.z1".into(), "z1.z2 - z2.z1".into(), yx];
    rels.extend(truncation("z1", "z2", n));
    let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
    let p = presentation(2, &[("x", 1, 2), ("y", 2, 1), ("z1", 2, 2), ("z2", 2, 2)], &rels, 64);
    (p, vec![0, 0, 1, 2])
}

/// Generators of the truncation ideal for Φ(1, n).
fn truncation(one: &str, two: &str, n: u64) -> Vec<String> {
    let pow = |k: u64| vec![two; k as usize].join(".");
    if n % 2 == 1 {
        vec![pow(n / 2 + 1)]
    } else {
        vec![format!("{one}.{}", pow(n / 2)), pow(n / 2 + 1)]
    }
}

/// Graded path-count dimensions, checked to be stable when the truncation bounds grow.
fn oracle_dims(p: &PathPresentation, degrees: &[u64], prime: u64, len: usize, deg: u64) -> Option<BTreeMap<u64, usize>> {
    let a = path_count_graded(p, degrees, prime, len, deg);
    let b = path_count_graded(p, degrees, prime, len + ORACLE_SLACK, deg + ORACLE_SLACK as u64);
    (a == b).then_some(a)
}

/// A basis vector of the (s, t, d) block of E that lies in the radical but not in its square.
fn ay_generator<F: Field>(e: &AyAlgebra<F>, s: usize, t: usize, d: u64) -> Option<Vec<F::Elem>> {
    let alg = e.algebra()?;
    let rad2 = alg.radical_power(2);
    e.block_indices(s, t, d).iter().map(|&b| alg.basis_vector(b)).find(|x| alg.in_radical(x) && !rad2.contains(x))
}

fn power<F: Field>(alg: &FdAlgebra<F>, x: &[F::Elem], k: usize) -> Vec<F::Elem> {
    let mut out = x.to_vec();
    for _ in 1..k {
        out = alg.mul(&out, x);
    }
    out
}

/// Checks one AY algebra against a presentation: graded dimensions against the path-count
/// oracle, the relations on chosen generators, and that the generators span the algebra.
fn graded_case<F: Field>(f: &F, prime: u64, m: usize, n: u64, syzygy_side: bool) -> Result<String, String> {
    let a = t_power(f, m);
    let k = FdModule::simple(&a, 0);
    let x = if syzygy_side { syzygy(&k).unwrap().0 } else { k };
    let phi = phi_family(1, Some(n), 1000).unwrap();
    let e = build_ay_algebra(&a, &[FdModule::regular(&a), x], &phi, n as usize, 0).map_err(|e| e.to_string())?;
    let alg = e.algebra().ok_or("not associative")?.clone();
    let (pres, degrees) = if syzygy_side { graded_syzygy_side(m, n) } else { graded_simple_side(m, n) };
    let oracle = oracle_dims(&pres, &degrees, prime, m + n as usize + 2, n + 2).ok_or("oracle did not stabilize")?;
    let computed: BTreeMap<u64, usize> = e.graded_dims();
    if oracle != computed {
        return Err(format!("graded dims {computed:?} vs oracle {oracle:?}"));
    }
    // generators: arrow s -> t of degree d lies in block (s, t, d)
    let blocks: Vec<(usize, usize, u64)> = if syzygy_side {
        vec![(0, 1, 0), (1, 0, 0), (1, 1, 1), (1, 1, 2)]
    } else {
        vec![(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 1), (1, 1, 2)]
    };
    let blocks: Vec<_> = blocks.into_iter().filter(|&(_, _, d)| d <= n).collect();
    let mut images: Vec<Vec<F::Elem>> = Vec::new();
    for &(s, t, d) in &blocks {
        images.push(ay_generator(&e, s, t, d).ok_or(format!("no generator in block ({s},{t},{d})"))?);
    }
    while images.len() < degrees.len() {
        // arrows above the truncation degree act as zero
        images.push(alg.zero());
    }
    if !syzygy_side {
        // scale β so that α^{m-1} = βγ exactly
        let top = power(&alg, &images[0], m - 1);
        let bg = alg.mul(&images[1], &images[2]);
        let pos = bg.iter().position(|c| !f.is_zero(c)).ok_or("βγ vanishes")?;
        let c = f.div(&top[pos], &bg[pos]).ok_or("βγ vanishes")?;
        images[1] = images[1].iter().map(|x| f.mul(x, &c)).collect();
    }
    for rel in &pres.relations {
        let v = evaluate_relation(&alg, rel, &images).map_err(|e| e.to_string())?;
        if v.iter().any(|c| !f.is_zero(c)) {
            return Err(format!("relation {} does not vanish", rel.render(&pres.quiver)));
        }
    }
    // the idempotents and arrow images generate E
    let mut span = ayoneda::linalg::Subspace::zero(f, alg.dim());
    let mut frontier: Vec<Vec<F::Elem>> = alg.idempotents().iter().map(|&b| alg.basis_vector(b)).collect();
    for x in &frontier {
        span.insert(x);
    }
    while let Some(x) = frontier.pop() {
        for g in &images {
            let y = alg.mul(&x, g);
            if span.insert(&y) {
                frontier.push(y);
            }
        }
    }
    if span.dim() != alg.dim() {
        return Err(format!("generators span {} of {}", span.dim(), alg.dim()));
    }
    Ok(format!("dim {}", alg.dim()))
}

#[test]
fn criterion_3_graded_presentations() {
    let mut failures = Vec::new();
    let mut dims = Vec::new();
    let mut literal_pairing_agrees = true;
    for m in [3usize, 4] {
        for n in 1..=4u64 {
            for syz in [false, true] {
                for (name, res) in [
                    ("F2", graded_case(&f2(), 2, m, n, syz)),
                    ("Q", graded_case(&Rationals, ORACLE_PRIME, m, n, syz)),
                ] {
                    match res {
                        Ok(d) => dims.push(format!("{}{}m{m}n{n}:{d}", if syz { "Ωk" } else { "k" }, name)),
                        Err(e) => failures.push(format!("{} over {name}, m={m}, n={n}: {e}", if syz { "A⊕Ωk" } else { "A⊕k" })),
                    }
                }
            }
            // the pairing as worded: E(A⊕k) against the x, y, z presentation
            let a = t_power(&f2(), m);
            let phi = phi_family(1, Some(n), 1000).unwrap();
            let e = build_ay_algebra(&a, &[FdModule::regular(&a), FdModule::simple(&a, 0)], &phi, n as usize, 0).unwrap();
            let (p, d) = graded_syzygy_side(m, n);
            if oracle_dims(&p, &d, 2, m + n as usize + 2, n + 2) != Some(e.graded_dims()) {
                literal_pairing_agrees = false;
            }
        }
    }
    let pass = failures.is_empty();
    report(
        3,
        pass,
        &format!(
            "16 algebras per field checked against their presentations; x,y,z relations paired with A⊕k as worded: {}; failures: {failures:?}",
            if literal_pairing_agrees { "agree" } else { "disagree (they present A⊕Ωk)" }
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------------------------------
// criterion 4

#[test]
fn criterion_4_shift_instance() {
    let f = f2();
    let a = t_power(&f, 3);
    let k = FdModule::simple(&a, 0);
    let phi = DegreeSet::new([0, 1]);
    let r = verify_shift_instance(&a, &k, &phi, 0).unwrap();
    // independent count: Hom and Ext^1 between the summands A and k
    let reg = FdModule::regular(&a);
    let parts = [reg.clone(), k.clone()];
    let mut derived_dim = 0;
    for x in &parts {
        for y in &parts {
            derived_dim += hom_space(x, y).unwrap().len();
            derived_dim += ext(x, y, 1).unwrap().dim();
        }
    }
    let cartan = |r: &InvariantReport| r.cartan.clone();
    let ok = r.verdict
        && r.tilting.self_orthogonal
        && r.tilting.k0_rank == 2
        && r.end_dim == 7
        && r.ay_dim == 7
        && derived_dim == 7
        && r.fingerprint_m.num_simples == 2
        && r.fingerprint_n.num_simples == 2
        && r.fingerprint_m.cartan_snf == vec![1, 5]
        && r.fingerprint_n.cartan_snf == vec![1, 5]
        && cartan(&r.fingerprint_m) == vec![vec![3, 1], vec![1, 2]]
        && cartan(&r.fingerprint_n) == vec![vec![3, 2], vec![2, 3]];
    report(
        4,
        ok,
        &format!(
            "tilting {}, End dim {}, E dim {}, counted {}, Cartans {:?} / {:?}, SNF {:?} / {:?}",
            r.tilting.verdict,
            r.end_dim,
            r.ay_dim,
            derived_dim,
            r.fingerprint_m.cartan,
            r.fingerprint_n.cartan,
            r.fingerprint_m.cartan_snf,
            r.fingerprint_n.cartan_snf
        ),
    );
    assert!(ok);
}

// ---------------------------------------------------------------------------------------
// criterion 5

/// Searches arrow images for B's quiver inside End(T): each arrow of B goes to an element of
/// the matching block outside rad², vertices matched by a bijection. Over F2 the search is
/// exhaustive.
fn find_b_images(end: &AlgRef<PrimeField>, b: &PathPresentation) -> Option<Vec<Vec<u32>>> {
    let f = end.field().clone();
    let values = f.elements().unwrap();
    let nv = b.quiver.vertices.len();
    let perms: Vec<Vec<usize>> = permutations(nv);
    for perm in perms {
        let cands: Vec<Vec<Vec<u32>>> = b
            .quiver
            .arrows
            .iter()
            .map(|arr| arrow_candidates(end, perm[arr.source], perm[arr.target], &values))
            .collect();
        if cands.iter().any(Vec::is_empty) {
            continue;
        }
        let mut choice = vec![0usize; cands.len()];
        loop {
            let images: Vec<Vec<u32>> = choice.iter().zip(&cands).map(|(&i, c)| c[i].clone()).collect();
            let all_vanish = b
                .relations
                .iter()
                .all(|r| evaluate_relation(end, r, &images).unwrap().iter().all(|c| f.is_zero(c)));
            if all_vanish {
                return Some(images);
            }
            let mut i = 0;
            loop {
                if i == choice.len() {
                    break;
                }
                choice[i] += 1;
                if choice[i] < cands[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
        }
    }
    None
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn criterion_5_three_cycle() {
    let f = f2();
    let apres = three_cycle();
    let a = build(&f, &apres);
    let a_oracle = oracle_dims(&apres, &[0; 6], 2, 6, 0).map(|d| total(&d));
    let a_ok = a.dim() == 12
        && a_oracle == Some(12)
        && a.cartan_matrix() == IntMatrix::from_rows(&[vec![2, 1, 1], vec![1, 2, 1], vec![1, 1, 2]])
        && is_selfinjective(&a).unwrap();

    let bpres = three_cycle_end();
    let b = build(&f, &bpres);
    let b_oracle = oracle_dims(&bpres, &[0; 4], 2, 8, 0).map(|d| total(&d));

    // Read literally (e = e2) the construction gives End(T) of dimension 12: every tilting
    // complex with the K0 classes -[P2], [P1]-[P2], [P3]-[P2] has that Euler form. The
    // stated B and quotients come from e = e1 + e3, whose T_f summand is B's vertex 2.
    let literal = end_algebra_of_complex(&idempotent_tilting(&a, &[1], 0).unwrap(), 0).unwrap();
    let t = idempotent_tilting(&a, &[0, 2], 0).unwrap();
    let end = end_algebra_of_complex(&t, 0).unwrap();
    let end_alg: AlgRef<PrimeField> = Arc::new(end.algebra.clone());
    let images = find_b_images(&end_alg, &bpres);
    let b_ok = b.dim() == 18 && b_oracle == Some(18) && end_alg.dim() == b.dim() && images.is_some();

    let (pair, tilde) = nabla_quotient_pair(&a, &[0, 2], 0).unwrap();
    let s = pair.summary().unwrap();
    let mut aq = apres.clone();
    aq.relations.push(parse_relation(&aq.quiver, "a2.b3"));
    let mut bq = bpres.clone();
    bq.relations.push(parse_relation(&bq.quiver, "be.ga.de.al"));
    let aq_alg = build(&f, &aq);
    let bq_alg = build(&f, &bq);
    let aq_oracle = oracle_dims(&aq, &[0; 6], 2, 6, 0).map(|d| total(&d));
    let bq_oracle = oracle_dims(&bq, &[0; 4], 2, 8, 0).map(|d| total(&d));
    let fa = invariant_report(&aq_alg).unwrap();
    let fb = invariant_report(&bq_alg).unwrap();
    let same = |x: &InvariantReport, y: &InvariantReport| {
        x.num_simples == y.num_simples
            && x.cartan_snf == y.cartan_snf
            && x.dim_algebra == y.dim_algebra
            && x.dim_center == y.dim_center
            && x.loewy_length == y.loewy_length
            && sorted_cartan(x) == sorted_cartan(y)
    };
    let q_ok = pair.verdict
        && s.ideal_match == Some(true)
        && s.dim_a_quotient == 11
        && s.dim_b_quotient == 17
        && aq_oracle == Some(11)
        && bq_oracle == Some(17)
        && same(&s.fingerprint_a_quotient, &fa)
        && same(&s.fingerprint_b_quotient, &fb)
        && tilde.len() == 2;
    let pass = a_ok && b_ok && q_ok;
    report(
        5,
        pass,
        &format!(
            "A dim {} (paths {:?}); End(T) for e1+e3 dim {} vs B dim {} (paths {:?}), B relations satisfied: {}; \
             quotients {} / {} vs ⟨α2β3⟩ {} / ⟨βγδα⟩ {}; literal e2 gives End dim {}",
            a.dim(),
            a_oracle,
            end_alg.dim(),
            b.dim(),
            b_oracle,
            images.is_some(),
            s.dim_a_quotient,
            s.dim_b_quotient,
            aq_alg.dim(),
            bq_alg.dim(),
            literal.algebra.dim()
        ),
    );
    assert!(pass);
}

/// Cartan matrix with rows and columns sorted, so that fingerprints compare up to relabeling.
fn sorted_cartan(r: &InvariantReport) -> Vec<Vec<i64>> {
    let n = r.cartan.len();
    let mut best: Option<Vec<Vec<i64>>> = None;
    for p in permutations(n) {
        let m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| r.cartan[p[i]][p[j]]).collect()).collect();
        if best.as_ref().map_or(true, |b| m < *b) {
            best = Some(m);
        }
    }
    best.unwrap_or_default()
}

// ---------------------------------------------------------------------------------------
// criterion 6

#[test]
fn criterion_6_global_dimension() {
    let mut found = Vec::new();
    let mut pass = true;
    for field_is_q in [false, true] {
        for m in [3usize, 4] {
            let g = if field_is_q { gldim_case(&Rationals, m) } else { gldim_case(&f2(), m) };
            pass &= g == GlobalDimension::Finite(2) && 2 <= m;
            found.push(format!("m={m} {}: {g}", if field_is_q { "Q" } else { "F2" }));
        }
    }
    report(6, pass, &format!("{found:?}"));
    assert!(pass);
}

fn gldim_case<F: Field>(f: &F, m: usize) -> GlobalDimension {
    let a = t_power(f, m);
    let reg = FdModule::regular(&a);
    let mut mods = vec![reg.clone()];
    for i in 1..m {
        mods.push(reg.quotient(&a.radical_power(i)).unwrap().0);
    }
    let e = build_ay_algebra(&a, &mods, &DegreeSet::new([0]), 0, 0).unwrap();
    global_dimension(e.require_algebra().unwrap(), m + 2).unwrap()
}

// ---------------------------------------------------------------------------------------
// criterion 7

#[test]
fn criterion_7_quotient_conditions_both_ways() {
    let f = f2();
    let a = build(&f, &three_cycle());
    let t = idempotent_tilting(&a, &[1], 0).unwrap();
    let good = theorem42_check(&t, &socle_ideal(&a, &[0, 2]).unwrap(), 0).unwrap();
    let gs = good.summary().unwrap();
    let good_ok = good.verdict
        && gs.tbar_tilting.verdict
        && gs.dim_end_tbar == Some(gs.dim_b - gs.dim_j)
        && gs.dim_b_quotient == gs.dim_b - gs.dim_j;
    let bad = theorem42_check(&t, &socle_ideal(&a, &[1]).unwrap(), 0).unwrap();
    let bs = bad.summary().unwrap();
    let bad_ok = !bad.verdict && bs.conditions.values().any(|c| !c) && !bs.tbar_tilting.verdict;
    let pass = good_ok && bad_ok;
    report(
        7,
        pass,
        &format!(
            "soc(P1⊕P3): conditions {:?}, T̄ tilting {}, End(T̄) {:?} = {} - {}; soc(P2): conditions {:?}, T̄ tilting {} (Hom(T̄,T̄[-1]) dim {})",
            gs.conditions,
            gs.tbar_tilting.verdict,
            gs.dim_end_tbar,
            gs.dim_b,
            gs.dim_j,
            bs.conditions,
            bs.tbar_tilting.verdict,
            bs.tbar_minus_one_dim
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------------------------------
// criterion 8

/// Looks for an invertible module map among the combinations of a hom-space basis.
fn invertible_hom_exists<F: Field>(x: &FdModule<F>, y: &FdModule<F>, seed: u64) -> bool {
    if x.dim() != y.dim() {
        return false;
    }
    if x.dim() == 0 {
        return true;
    }
    let f = x.field();
    let basis = hom_space(x, y).unwrap();
    let combine = |coeffs: &[F::Elem]| {
        let mut m = Matrix::zeros(f, y.dim(), x.dim());
        for (c, b) in coeffs.iter().zip(&basis) {
            m = m.add(&b.scale(c));
        }
        m
    };
    if let Some(vals) = f.elements() {
        let q = vals.len();
        if let Some(total) = q.checked_pow(basis.len() as u32).filter(|&t| t <= HOM_SEARCH_LIMIT) {
            return (0..total).any(|mut code| {
                let coeffs: Vec<F::Elem> = (0..basis.len())
                    .map(|_| {
                        let c = vals[code % q].clone();
                        code /= q;
                        c
                    })
                    .collect();
                combine(&coeffs).rank() == x.dim()
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..HOM_SEARCH_LIMIT).any(|_| {
        let coeffs: Vec<F::Elem> = (0..basis.len()).map(|_| f.random(&mut rng)).collect();
        combine(&coeffs).rank() == x.dim()
    })
}

fn ay_functor_case<F: Field>(a: &AlgRef<F>, x: &FdModule<F>, phi: &DegreeSet) -> Result<(), String> {
    let reg = FdModule::regular(a);
    let cap = phi.max().unwrap_or(0) as usize;
    let e = build_ay_algebra(a, &[reg.clone(), x.clone()], phi, cap, 0).map_err(|e| e.to_string())?;
    let parts = [reg.clone(), x.clone()];
    // (3): one argument projective (= injective, A being self-injective)
    for (i, v1) in parts.iter().enumerate() {
        for (j, v2) in parts.iter().enumerate() {
            if i != 0 && j != 0 {
                continue;
            }
            let m1 = ay_module(&e, v1).map_err(|e| e.to_string())?.module;
            let m2 = ay_module(&e, v2).map_err(|e| e.to_string())?.module;
            let lhs = hom_space(&m1, &m2).unwrap().len();
            let rhs = hom_space(v1, v2).unwrap().len();
            if lhs != rhs {
                return Err(format!("Φ={phi}: Hom_E dim {lhs} vs Hom_A dim {rhs} for pair ({i},{j})"));
            }
        }
    }
    // (4): ν_E E(V, P) ≅ E(V, ν_A P) for each indecomposable projective
    for v in 0..a.num_vertices() {
        let p = FdModule::projective(a, v);
        let lhs = nakayama(&ay_module(&e, &p).map_err(|e| e.to_string())?.module).map_err(|e| e.to_string())?;
        let rhs = ay_module(&e, &nakayama(&p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?.module;
        if lhs.dim_vector() != rhs.dim_vector() || !invertible_hom_exists(&lhs, &rhs, v as u64) {
            return Err(format!("Φ={phi}: ν compatibility fails at P{}", v + 1));
        }
    }
    Ok(())
}

#[test]
fn criterion_8_ay_functor_suite() {
    let f = f2();
    let phis = [vec![0], vec![0, 1], vec![0, 1, 2], vec![0, 2], vec![0, 2, 4], vec![0, 3, 4]];
    let mut failures = Vec::new();
    let mut cases = 0;
    let t3 = t_power(&f, 3);
    let ex1 = build(&f, &three_cycle());
    let inputs: Vec<(&str, AlgRef<PrimeField>, FdModule<PrimeField>)> = vec![
        ("k[t]/t^3, k", t3.clone(), FdModule::simple(&t3, 0)),
        ("k[t]/t^3, A/J^2", t3.clone(), FdModule::regular(&t3).quotient(&t3.radical_power(2)).unwrap().0),
        ("three-cycle, S1", ex1.clone(), FdModule::simple(&ex1, 0)),
    ];
    for (name, a, x) in &inputs {
        for phi in &phis {
            let ds = DegreeSet::new(phi.clone());
            assert!(admissible_by_definition(phi));
            cases += 1;
            if let Err(e) = ay_functor_case(a, x, &ds) {
                failures.push(format!("{name}: {e}"));
            }
        }
    }
    let pass = failures.is_empty();
    report(8, pass, &format!("{cases} cases; failures: {failures:?}"));
    assert!(pass);
}

// ---------------------------------------------------------------------------------------
// criterion 9

#[test]
fn criterion_9_kernel_invariants() {
    let f = f2();
    let a = t_power(&f, 3);
    let k = FdModule::simple(&a, 0);
    let mut failures = Vec::new();

    // d² = 0 on resolutions and on the constructed tilting complexes
    let ex1 = build(&f, &three_cycle());
    for v in 0..3 {
        let r = min_proj_resolution(&FdModule::simple(&ex1, v), 5).unwrap();
        if !r.check() {
            failures.push(format!("resolution of S{} fails d²=0", v + 1));
        }
    }
    for e in [vec![1], vec![0, 2]] {
        if !idempotent_tilting(&ex1, &e, 0).unwrap().check_d_squared() {
            failures.push(format!("tilting complex for {e:?} fails d²=0"));
        }
    }

    // Hom_K is unchanged by adding a contractible summand and normalizing
    let t = idempotent_tilting(&ex1, &[1], 0).unwrap();
    let cone = ProjComplex::two_term(&ex1, ProjMap::identity(&ex1, &[0, 2]), 0).unwrap();
    let padded = ProjComplex::direct_sum(&[&t, &cone]).unwrap();
    for n in -2..=2 {
        let d1 = hom_in_k_proj(&t, &t, n).unwrap().dim();
        let d2 = hom_in_k_proj(&padded, &t, n).unwrap().dim();
        let d3 = hom_in_k_proj(&normalize_radical(&padded), &t, n).unwrap().dim();
        if d1 != d2 || d1 != d3 {
            failures.push(format!("Hom_K(T, T[{n}]) dims {d1}/{d2}/{d3}"));
        }
    }

    // Yoneda products do not depend on the comparison lift
    let res = Arc::new(min_proj_resolution(&k, 4).unwrap());
    let groups: Vec<_> = (0..=4).map(|d| ext_group(&res, &k, d).unwrap()).collect();
    for i in 1..=2 {
        for j in 1..=2 {
            for x in groups[i].basis() {
                for y in groups[j].basis() {
                    let p0 = yoneda_product(&groups[i], &x, &groups[j], &y, &groups[i + j], None).unwrap();
                    for s in 1..=3 {
                        let p = yoneda_product(&groups[i], &x, &groups[j], &y, &groups[i + j], Some(s)).unwrap();
                        if p != p0 {
                            failures.push(format!("Ext^{i}·Ext^{j} depends on the lift (seed {s})"));
                        }
                    }
                }
            }
        }
    }

    // Ω²k ≅ k over k[t]/t³
    let o1 = syzygy(&k).unwrap().0;
    let o2 = syzygy(&o1).unwrap().0;
    if !isomorphic(&o2, &k, 0).unwrap() {
        failures.push("Ω²k is not k".into());
    }

    // determinism of seeded reports
    let run = || {
        let r = verify_shift_instance(&a, &k, &DegreeSet::new([0, 1]), 7).unwrap();
        let (q, _) = nabla_quotient_pair(&ex1, &[0, 2], 7).unwrap();
        let ideal = nabla_ideal(&ex1, &[1]).unwrap();
        format!(
            "{}|{}|{:?}",
            serde_json::to_string(&r).unwrap(),
            serde_json::to_string(&q.summary().unwrap()).unwrap(),
            ideal.basis()
        )
    };
    if run() != run() {
        failures.push("seeded reports differ between runs".into());
    }
    let pass = failures.is_empty();
    report(9, pass, &format!("failures: {failures:?}"));
    assert!(pass);
}
