//! The acceptance suites as library functions, one per criterion.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algnum::automorphisms;
use crate::cf1d::{
    cf_expand, equal_up_to_rotation, find_symmetries_2d, galois_reversal, is_cyclic_palindrome, klein_polygon,
    operator_from_surd, prop1_witness_search, reduced_surds, ConeTest, PeriodicCF, Prop1Condition, QuadraticSurd,
    Quadrant, SymmetryKind,
};
use crate::error::Result;
use crate::exactint::IntMatrix;
use crate::poly::IntPolynomial;
use crate::sail3d::GeoCF;
use crate::sym3d::{
    canonical_matrix, class_field, class_relation_holds, dirichlet_group, has_small_relation, is_cf_symmetry,
    make_class_example, theorem_check, PalindromeCertificate, SearchStatus, SymmetryReport, DEFAULT_DEPTH,
};

pub const DEFAULT_SEED: u64 = 0x6b6c_6569_6e33;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    #[serde(with = "crate::json::int_str")]
    pub id: u8,
    pub suite: String,
    pub passed: bool,
    pub detail: String,
    #[serde(with = "crate::json::int_str")]
    pub elapsed_ms: u128,
}

/// Suite names in criterion order.
pub const SUITES: [&str; 9] = [
    "galois-reversal",
    "witness-corpus",
    "klein-polygons",
    "dirichlet",
    "class-examples",
    "order3",
    "class-roundtrip",
    "non-galois",
    "dichotomy",
];

pub fn suite_id(name: &str) -> Option<u8> {
    SUITES.iter().position(|s| *s == name).map(|i| i as u8 + 1)
}

type Outcome = std::result::Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Cubics used by the Dirichlet and negative-control suites.
pub fn dirichlet_cubics() -> Vec<IntPolynomial> {
    [[1, -3, 0, 1], [1, -2, -1, 1], [1, -4, 0, 1], [1, -3, -1, 1], [1, -5, 0, 1]]
        .iter()
        .map(|c| IntPolynomial::from_i64(c))
        .collect()
}

pub fn non_galois_cubics() -> Vec<IntPolynomial> {
    dirichlet_cubics().into_iter().skip(2).collect()
}

/// Companion matrix of a monic cubic `x³ + c₂x² + c₁x + c₀`.
pub fn companion(f: &IntPolynomial) -> IntMatrix {
    let c = f.coeffs();
    IntMatrix::from_rows(vec![
        vec![0.into(), 1.into(), 0.into()],
        vec![0.into(), 0.into(), 1.into()],
        vec![-&c[0], -&c[1], -&c[2]],
    ])
    .expect("3x3")
}

/// Uniform unimodular matrix with entries in `[-r, r]`, by rejection.
pub fn random_unimodular<R: Rng>(rng: &mut R, r: i64) -> IntMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..3).map(|_| (0..3).map(|_| rng.gen_range(-r..=r)).collect()).collect();
        let m = IntMatrix::from_vec_i64(&rows).expect("3x3");
        if m.is_unimodular() {
            return m;
        }
    }
}

fn galois_reversal_suite() -> Outcome {
    let mut n = 0;
    for d in 2..=150i64 {
        let r = (d as f64).sqrt() as i64;
        if r * r == d || (r + 1) * (r + 1) == d {
            continue;
        }
        for s in reduced_surds(d) {
            let cf = lift(cf_expand(&s))?;
            let rev = lift(galois_reversal(&s).and_then(|x| cf_expand(&x)))?;
            let mut p = cf.period.clone();
            p.reverse();
            check(cf.preperiod.is_empty() && rev.preperiod.is_empty(), || format!("{s} is not purely periodic"))?;
            check(equal_up_to_rotation(&p, &rev.period), || format!("{s}: reversal mismatch"))?;
            n += 1;
        }
    }
    check(n >= 50, || format!("only {n} reduced surds"))?;
    Ok(format!("{n} reduced surds with D ≤ 150"))
}

/// Height of a transform.
fn height(t: &[BigInt]) -> BigInt {
    t.iter().map(|x| x.abs()).max().unwrap_or_default()
}

fn prop1_suite() -> Outcome {
    let (mut with_witness, mut n) = (0, 0);
    let mut mismatches = Vec::new();
    for d in 2..=200i64 {
        let r = (d as f64).sqrt() as i64;
        if r * r == d || (r + 1) * (r + 1) == d {
            continue;
        }
        n += 1;
        let s = lift(QuadraticSurd::sqrt(d))?;
        let rep = lift(prop1_witness_search(&s, 30))?;
        if !rep.witnesses.is_empty() {
            with_witness += 1;
            check(is_cyclic_palindrome(&rep.period).is_palindrome, || format!("√{d}: witness without palindrome"))?;
        }
        let b = rep.witness(Prop1Condition::TraceOne).is_some();
        let v = rep.witness(Prop1Condition::NormOne).is_some();
        if b != v {
            let missing = if b { Prop1Condition::NormOne } else { Prop1Condition::TraceOne };
            let wider = lift(prop1_witness_search(&s, 60))?;
            let h = wider.witness(missing).map_or("none ≤ 60".to_string(), |w| format!("height {}", height(&w.transform)));
            mismatches.push(format!("√{d} ({} {h})", missing.label()));
        }
    }
    check(mismatches.is_empty(), || {
        format!("trace=1 and norm=1 witnesses disagree at height ≤ 30 for {}", mismatches.join(", "))
    })?;
    Ok(format!("{n} values of D, {with_witness} with witnesses"))
}

/// Surds whose eigenline pairs `(α, α')` bound the test cones.
pub fn polygon_surds() -> Vec<QuadraticSurd> {
    [(0, 1, 2), (0, 1, 3), (1, 2, 5), (0, 1, 7), (1, 2, 13)]
        .iter()
        .map(|&(p, q, d)| QuadraticSurd::from_i64(p, q, d).expect("valid surd"))
        .collect()
}

type P2 = (i64, i64);

fn turn(o: P2, a: P2, b: P2) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Vertices of the convex hull of `pts` (counterclockwise, no collinear points).
pub fn hull_2d(mut pts: Vec<P2>) -> Vec<P2> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<P2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Hull vertices of the box-truncated cone points with two, and with at least
/// one, incident edge facing the origin.
fn box_sail(test: &ConeTest, r: i64) -> (Vec<P2>, Vec<P2>) {
    let pts: Vec<P2> = (-r..=r)
        .flat_map(|x| (-r..=r).map(move |y| (x, y)))
        .filter(|&(x, y)| (x, y) != (0, 0) && test.contains(&x.into(), &y.into()))
        .collect();
    let h = hull_2d(pts);
    let m = h.len();
    // edge i→i+1 faces the origin when the origin is strictly on its outer side
    let facing: Vec<bool> = (0..m).map(|i| turn(h[i], h[(i + 1) % m], (0, 0)) < 0).collect();
    let both = (0..m).filter(|&i| facing[i] && facing[(i + m - 1) % m]).map(|i| h[i]).collect();
    let any = (0..m).filter(|&i| facing[i] || facing[(i + m - 1) % m]).map(|i| h[i]).collect();
    (both, any)
}

/// Compare with the box hull: every polygon vertex in the box lies on the box
/// sail, and between the second and second-to-last box sail vertices (in
/// angular order) the two vertex sets agree.
fn polygon_suite() -> Outcome {
    let (mut cones, mut certified) = (0, 0);
    for s in polygon_surds() {
        let c = s.conjugate();
        for q in Quadrant::ALL {
            let test = lift(ConeTest::new(&s, &c, q))?;
            let poly = lift(klein_polygon(&s, &c, q, 41))?;
            let (mut inner, touched) = box_sail(&test, 60);
            let verts: Vec<P2> = poly
                .vertices
                .iter()
                .filter_map(|v| Some((i64::try_from(&v[0]).ok()?, i64::try_from(&v[1]).ok()?)))
                .collect();
            let in_box = verts.iter().filter(|v| v.0.abs().max(v.1.abs()) <= 60);
            check(in_box.clone().all(|v| touched.contains(v)), || format!("{s} {q}: vertex off the box sail"))?;
            inner.sort_by(|a, b| 0.cmp(&turn((0, 0), *a, *b)));
            check(inner.len() >= 3, || format!("{s} {q}: box sail too short"))?;
            let cert = &inner[1..inner.len() - 1];
            let (first, last) = (cert[0], cert[cert.len() - 1]);
            let mut seen: Vec<P2> = verts
                .iter()
                .copied()
                .filter(|&v| turn((0, 0), first, v) >= 0 && turn((0, 0), v, last) >= 0)
                .collect();
            seen.sort_by(|a, b| 0.cmp(&turn((0, 0), *a, *b)));
            check(seen == cert, || format!("{s} {q}: {seen:?} vs box sail {cert:?}"))?;
            cones += 1;
            certified += cert.len();
        }
    }
    Ok(format!("{cones} cones, {certified} certified vertices of the |x|,|y| ≤ 60 box hull"))
}

fn dirichlet_suite() -> Outcome {
    let mut regs = Vec::new();
    for f in dirichlet_cubics() {
        let a = companion(&f);
        let g = lift(dirichlet_group(&a, DEFAULT_DEPTH))?;
        let [e1, e2] = [&g.generators[0], &g.generators[1]];
        check(g.candidates <= DEFAULT_DEPTH, || format!("{f}: {} candidates", g.candidates))?;
        check(e1.commutes_with(&a) && e2.commutes_with(&a) && e1.commutes_with(e2), || format!("{f}: not commuting"))?;
        check(g.torsion == IntMatrix::identity(3).neg(), || "torsion is not -I".into())?;
        check(g.regulator > 1e-6 && !has_small_relation(e1, e2, 5), || format!("{f}: dependent units"))?;
        regs.push(format!("{:.4}", g.regulator));
    }
    Ok(format!("regulators {}", regs.join(", ")))
}

fn class_suite() -> std::result::Result<(String, Vec<SymmetryReport>), String> {
    let mut reports = Vec::new();
    for i in 1..=4 {
        let a = lift(make_class_example(i, &class_field(i), None))?;
        let r = lift(is_cf_symmetry(&canonical_matrix(i), &a))?;
        check(r.kind == SymmetryKind::Palindromic, || format!("F{i} not palindromic for {a}"))?;
        let g = lift(GeoCF::from_operator(&a))?;
        let v = g.eigenvector();
        check(class_relation_holds(i, &v[1], &v[2]), || format!("class {i}: relations fail for {a}"))?;
        reports.push(r);
    }
    Ok(("F₁…F₄ accepted, relations exact".into(), reports))
}

fn order3_holds(r: &SymmetryReport) -> bool {
    let Some(o) = &r.order3 else { return false };
    let id = IntMatrix::identity(3);
    let cube = r.g.pow(3);
    let mut s = r.sigma.clone();
    let three_cycle = s.iter().enumerate().all(|(i, &p)| p != i + 1) && {
        s.sort();
        s == [1, 2, 3]
    };
    let line_fixed = o.g_plus.mul_vec(&o.invariant_line) == o.invariant_line;
    let plane_fixed = o.g_plus.transpose().mul_vec(&o.invariant_plane_normal) == o.invariant_plane_normal;
    let pairing: BigInt = o.invariant_line.iter().zip(&o.invariant_plane_normal).map(|(a, b)| a * b).sum();
    (cube == id || cube == id.neg()) && three_cycle && line_fixed && plane_fixed && pairing != BigInt::from(0)
}

fn roundtrip(seed: u64) -> std::result::Result<(String, Vec<PalindromeCertificate>), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut certs = Vec::new();
    let mut cases = [0usize; 2];
    for i in 1..=4 {
        let a = lift(make_class_example(i, &class_field(i), None))?;
        for _ in 0..10 {
            let x = random_unimodular(&mut rng, 3);
            let b = x.conjugate(&a).expect("unimodular");
            let c = lift(theorem_check(&b, DEFAULT_DEPTH))?;
            check(c.status == SearchStatus::Found, || format!("class {i}, X = {x}: {:?}", c.status))?;
            let k = c.canonical.as_ref().expect("found");
            let gp = &c.symmetry.as_ref().and_then(|s| s.order3.as_ref()).expect("palindromic").g_plus;
            for conj in &k.conjugators {
                let j: usize = conj.canonical_form[1..].parse().expect("F<i>");
                check(conj.x.conjugate(gp) == Some(canonical_matrix(j)), || format!("X G₊ X⁻¹ ≠ F{j}"))?;
            }
            let forms: Vec<&str> = k.conjugators.iter().map(|c| c.canonical_form.as_str()).collect();
            match k.case {
                crate::sym3d::MainCase::IntegralCentroid => {
                    check(forms == ["F1"], || format!("case a with {forms:?}"))?;
                    cases[0] += 1;
                }
                crate::sym3d::MainCase::FractionalCentroid => {
                    check(forms == ["F2", "F3", "F4"], || format!("case b with {forms:?}"))?;
                    cases[1] += 1;
                }
            }
            certs.push(c);
        }
    }
    Ok((format!("40 conjugates: {} case a, {} case b", cases[0], cases[1]), certs))
}

fn non_galois_suite() -> Outcome {
    for f in non_galois_cubics() {
        let a = companion(&f);
        let g = lift(GeoCF::from_operator(&a))?;
        check(automorphisms(g.field()).len() == 1, || format!("{f} has extra automorphisms"))?;
        let c = lift(theorem_check(&a, DEFAULT_DEPTH))?;
        check(c.status == SearchStatus::NotFound && !c.found, || format!("{f}: {:?}", c.status))?;
    }
    Ok("3 non-Galois operators, conclusive found=false".into())
}

fn dichotomy_suite(certs: &[PalindromeCertificate]) -> Outcome {
    let golden = lift(operator_from_surd(&lift(QuadraticSurd::from_i64(1, 2, 5))?))?;
    let syms = lift(find_symmetries_2d(&golden, 20))?;
    let rotation = syms.iter().any(|r| {
        r.kind == SymmetryKind::Palindromic && r.det == 1 && {
            let mut imgs = r.cone_images.clone();
            imgs.sort();
            let mut all = Quadrant::ALL.to_vec();
            all.sort();
            imgs == all && r.fixed_cones.is_empty()
        }
    });
    check(rotation, || "golden operator has no det +1 palindromic symmetry moving all cones".into())?;
    let cf = PeriodicCF { preperiod: vec![], period: [1, 2, 2, 1].iter().map(|&x| BigInt::from(x)).collect() };
    let s = lift(cf.value().and_then(|v| v.to_surd()))?;
    let a = lift(operator_from_surd(&s))?;
    let pal: Vec<_> = lift(find_symmetries_2d(&a, 20))?.into_iter().filter(|r| r.kind == SymmetryKind::Palindromic).collect();
    check(!pal.is_empty() && pal.iter().all(|r| r.det == 1), || format!("(1,2,2,1): determinants {:?}", pal.iter().map(|r| r.det).collect::<Vec<_>>()))?;
    for c in certs {
        let o = c.cones.as_ref().ok_or("certificate without cone data")?;
        check(o.holds(), || format!("cone orbits fail: {o:?}"))?;
    }
    Ok(format!("1D checks pass; {} certificates with one 6-cycle of cones", certs.len()))
}

fn finish(id: u8, start: Instant, r: Outcome) -> CriterionResult {
    let (passed, detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult {
        id,
        suite: SUITES[id as usize - 1].to_string(),
        passed,
        detail,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

fn order3_suite(syms: &[SymmetryReport], certs: &[PalindromeCertificate]) -> Outcome {
    let all: Vec<&SymmetryReport> = syms.iter().chain(certs.iter().filter_map(|c| c.symmetry.as_ref())).collect();
    check(!all.is_empty() && all.iter().all(|s| order3_holds(s)), || "order-3 structure fails".into())?;
    Ok(format!("{} palindromic symmetries with g³ = ±I", all.len()))
}

/// Criteria 5, 6, 7 and 9, which share the class examples and certificates.
fn class_chain(want: impl Fn(u8) -> bool, seed: u64) -> Vec<CriterionResult> {
    let mut out = Vec::new();
    let t5 = Instant::now();
    let classes = class_suite();
    let e5 = t5.elapsed();
    let t7 = Instant::now();
    let rt = roundtrip(seed);
    let e7 = t7.elapsed();
    let timed = |id: u8, e: std::time::Duration, r: Outcome| {
        let mut c = finish(id, Instant::now(), r);
        c.elapsed_ms = e.as_millis();
        c
    };
    let (syms, certs) = match (&classes, &rt) {
        (Ok((_, s)), Ok((_, c))) => (s.as_slice(), c.as_slice()),
        _ => (&[][..], &[][..]),
    };
    if want(5) {
        out.push(timed(5, e5, classes.as_ref().map(|x| x.0.clone()).map_err(Clone::clone)));
    }
    if want(6) {
        let t = Instant::now();
        let r = match (&classes, &rt) {
            (Ok(_), Ok(_)) => order3_suite(syms, certs),
            (Err(e), _) | (_, Err(e)) => Err(format!("prerequisite failed: {e}")),
        };
        out.push(finish(6, t, r));
    }
    if want(7) {
        out.push(timed(7, e7, rt.as_ref().map(|x| x.0.clone()).map_err(Clone::clone)));
    }
    if want(9) {
        let t = Instant::now();
        let r = match &rt {
            Ok(_) => dichotomy_suite(certs),
            Err(e) => Err(format!("prerequisite failed: {e}")),
        };
        out.push(finish(9, t, r));
    }
    out
}

/// Run the criteria in `ids` (all when empty) in parallel; results come back
/// in criterion order.
pub fn run(ids: &[u8], seed: u64) -> Vec<CriterionResult> {
    let want = |i: u8| ids.is_empty() || ids.contains(&i);
    let solo: [(u8, fn() -> Outcome); 5] = [
        (1, galois_reversal_suite),
        (2, prop1_suite),
        (3, polygon_suite),
        (4, dirichlet_suite),
        (8, non_galois_suite),
    ];
    let mut out: Vec<CriterionResult> = std::thread::scope(|s| {
        let handles: Vec<_> = solo
            .iter()
            .filter(|(id, _)| want(*id))
            .map(|&(id, f)| {
                s.spawn(move || {
                    let t = Instant::now();
                    vec![finish(id, t, f())]
                })
            })
            .chain([5, 6, 7, 9].iter().any(|&i| want(i)).then(|| s.spawn(|| class_chain(want, seed))))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("suite thread")).collect()
    });
    out.sort_by_key(|r| r.id);
    out
}
