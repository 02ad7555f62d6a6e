//! Acceptance criteria, each checked against oracles written here.
//! Prints one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use klein_core::cf1d::{
    cf_expand, find_symmetries_2d, galois_reversal, klein_polygon, operator_from_surd, prop1_witness_search,
    reduced_surds, PeriodicCF, Prop1Condition, QuadraticSurd, Quadrant, SymmetryKind,
};
use klein_core::sym3d::{
    class_field, dirichlet_group, is_cf_symmetry, make_class_example, theorem_check, MainCase, PalindromeCertificate,
    SearchStatus, SymmetryReport,
};
use klein_core::verify::{self, DEFAULT_SEED};
use klein_core::IntMatrix;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type M3 = [[i128; 3]; 3];
type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn isqrt(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn is_square(n: i64) -> bool {
    n >= 0 && isqrt(n).pow(2) == n
}

fn i(x: &BigInt) -> i64 {
    x.to_i64().expect("small")
}

// ---------- 1D oracles ----------

/// Reduced `(P + √D)/Q`: `0 < √D - P < Q < √D + P`, `Q | D - P²`.
fn oracle_reduced(d: i64) -> BTreeSet<(i64, i64)> {
    let s = isqrt(d);
    let mut out = BTreeSet::new();
    for p in 1..=s {
        for q in (s - p + 1)..=(s + p) {
            if (d - p * p) % q == 0 {
                out.insert((p, q));
            }
        }
    }
    out
}

/// Period of a reduced `(P + √D)/Q`.
fn oracle_period(p0: i64, q0: i64, d: i64) -> Vec<i64> {
    let s = isqrt(d);
    let (mut p, mut q) = (p0, q0);
    let mut out = Vec::new();
    loop {
        let a = (p + s).div_euclid(q);
        out.push(a);
        p = a * q - p;
        q = (d - p * p) / q;
        if (p, q) == (p0, q0) {
            return out;
        }
    }
}

fn rotation_equal(a: &[i64], b: &[i64]) -> bool {
    a.len() == b.len() && (0..a.len().max(1)).any(|k| a.iter().cycle().skip(k).take(a.len()).eq(b.iter()))
}

fn c1() -> Check {
    let mut n = 0;
    for d in 2..=150 {
        if is_square(d) {
            continue;
        }
        let lib: BTreeSet<(i64, i64)> = reduced_surds(d)
            .iter()
            .map(|s| {
                assert_eq!(i(s.d()), d);
                (i(s.p()), i(s.q()))
            })
            .collect();
        ensure(lib == oracle_reduced(d), || format!("D={d}: reduced surds differ"))?;
        for &(p, q) in &lib {
            let period = oracle_period(p, q, d);
            // -1/α' = (P + √D) / ((D - P²)/Q)
            let rev = oracle_period(p, (d - p * p) / q, d);
            let mut reversed = period.clone();
            reversed.reverse();
            ensure(rotation_equal(&reversed, &rev), || format!("({p}+√{d})/{q}: reversal"))?;
            let s = QuadraticSurd::from_i64(p, q, d).map_err(|e| e.to_string())?;
            let lib_rev = galois_reversal(&s).and_then(|r| cf_expand(&r)).map_err(|e| e.to_string())?;
            ensure(lib_rev.preperiod.is_empty(), || format!("({p}+√{d})/{q}: preperiod"))?;
            let lp: Vec<i64> = lib_rev.period.iter().map(i).collect();
            ensure(lp == rev, || format!("({p}+√{d})/{q}: library reversal {lp:?} vs {rev:?}"))?;
            n += 1;
        }
    }
    ensure(n >= 50, || format!("{n} surds"))?;
    Ok(format!("{n} reduced surds, D ≤ 150"))
}

/// Witness presence for `(а) … (г)` among `ω = (a√D + b)/(c√D + d)`,
/// `ad - bc = ±1`, height ≤ `h`.
fn oracle_witnesses(dd: i64, h: i64) -> [bool; 4] {
    let mut found = [false; 4];
    let mut consider = |a: i64, b: i64, c: i64, d: i64| {
        let den = d * d - c * c * dd;
        let re = b * d - a * c * dd;
        let num_n = b * b - a * a * dd;
        found[0] |= re == 0;
        found[1] |= 2 * re == den;
        found[2] |= num_n == den;
        found[3] |= num_n == -den;
    };
    for a in -h..=h {
        for b in -h..=h {
            for c in -h..=h {
                if a == 0 {
                    if b * c == 1 || b * c == -1 {
                        for d in -h..=h {
                            consider(a, b, c, d);
                        }
                    }
                    continue;
                }
                for e in [1, -1] {
                    let num = b * c + e;
                    if num % a == 0 && (num / a).abs() <= h {
                        consider(a, b, c, num / a);
                    }
                }
            }
        }
    }
    found
}

fn cyclic_palindrome(p: &[i64]) -> bool {
    let mut r = p.to_vec();
    r.reverse();
    rotation_equal(p, &r)
}

/// Values of `D` where the height-30 search sees only one of `(б)`, `(в)`.
/// The missing witness is `ω/(ω-1)` of the other, of height at most 60.
const PROP1_HEIGHT_GAPS: [i64; 3] = [19, 88, 104];

fn c2() -> (Check, Vec<i64>) {
    let conds = [Prop1Condition::TraceZero, Prop1Condition::TraceOne, Prop1Condition::NormOne, Prop1Condition::NormMinusOne];
    let mut gaps = Vec::new();
    let mut n = 0;
    for d in 2..=200 {
        if is_square(d) {
            continue;
        }
        n += 1;
        let oracle = oracle_witnesses(d, 30);
        let s = QuadraticSurd::sqrt(d).expect("non-square");
        let rep = match prop1_witness_search(&s, 30) {
            Ok(r) => r,
            Err(e) => return (Err(e.to_string()), gaps),
        };
        for (k, c) in conds.iter().enumerate() {
            if rep.witness(*c).is_some() != oracle[k] {
                return (Err(format!("√{d}: {} presence differs from oracle", c.label())), gaps);
            }
        }
        let s0 = isqrt(d);
        if oracle.iter().any(|&x| x) && !cyclic_palindrome(&oracle_period(s0, 1, d)) {
            return (Err(format!("√{d}: witness without palindromic period")), gaps);
        }
        if oracle[1] != oracle[2] {
            let wide = oracle_witnesses(d, 60);
            if !(wide[1] && wide[2]) {
                return (Err(format!("√{d}: (б)/(в) disagree even at height 60")), gaps);
            }
            gaps.push(d);
        }
    }
    let r = if gaps.is_empty() {
        Ok(format!("{n} values of D"))
    } else {
        Err(format!("(б) and (в) disagree at height ≤ 30 for D ∈ {gaps:?}; both present at height ≤ 60"))
    };
    (r, gaps)
}

// ---------- Klein polygons ----------

/// Sign of `r + s√D`, `D` not a square.
fn sign_surd(r: i64, s: i64, d: i64) -> i32 {
    if s == 0 || r.signum() == s.signum() {
        return (r.signum() + s.signum()).signum() as i32;
    }
    if r == 0 {
        return s.signum() as i32;
    }
    if (r as i128).pow(2) > (s as i128).pow(2) * d as i128 {
        r.signum() as i32
    } else {
        s.signum() as i32
    }
}

/// `(x, y) = u(1, α) + v(1, α')` with `α = (P + √D)/Q` in the open cone `(s₀, s₁)`.
fn in_cone(x: i64, y: i64, p: i64, q: i64, d: i64, s: [i8; 2]) -> bool {
    let su = sign_surd(q * y - x * p, x, d);
    let sv = sign_surd(x * p - q * y, x, d);
    su == s[0] as i32 && sv == s[1] as i32
}

type P2 = (i64, i64);

fn cross2(o: P2, a: P2, b: P2) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn hull(mut pts: Vec<P2>) -> Vec<P2> {
    pts.sort();
    let mut h: Vec<P2> = Vec::new();
    for pass in 0..2 {
        let start = h.len();
        let iter: Box<dyn Iterator<Item = &P2>> = if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while h.len() >= start + 2 && cross2(h[h.len() - 2], h[h.len() - 1], p) <= 0 {
                h.pop();
            }
            h.push(p);
        }
        h.pop();
    }
    h
}

/// Box-hull vertices whose two incident edges both face the origin, and
/// those with at least one.
fn box_sail(p: i64, q: i64, d: i64, s: [i8; 2], r: i64) -> (BTreeSet<P2>, BTreeSet<P2>) {
    let pts: Vec<P2> =
        (-r..=r).flat_map(|x| (-r..=r).map(move |y| (x, y))).filter(|&(x, y)| in_cone(x, y, p, q, d, s)).collect();
    let h = hull(pts);
    let m = h.len();
    let faces = |k: usize| cross2(h[k], h[(k + 1) % m], (0, 0)) < 0;
    let both = (0..m).filter(|&k| faces(k) && faces((k + m - 1) % m)).map(|k| h[k]).collect();
    let any = (0..m).filter(|&k| faces(k) || faces((k + m - 1) % m)).map(|k| h[k]).collect();
    (both, any)
}

/// Certified vertices: the box-sail vertices in angular order without the
/// outermost one on each side, which the box may have cut off.
fn certified(mut v: Vec<P2>) -> Vec<P2> {
    v.sort_by(|a, b| 0.cmp(&cross2((0, 0), *a, *b)));
    if v.len() < 3 {
        return Vec::new();
    }
    v[1..v.len() - 1].to_vec()
}

fn between(first: P2, last: P2, v: P2) -> bool {
    cross2((0, 0), first, v) >= 0 && cross2((0, 0), v, last) >= 0
}

fn c3() -> Check {
    let surds = [(0, 1, 2), (0, 1, 3), (1, 2, 5), (0, 1, 7), (1, 2, 13)];
    let (mut cones, mut verts) = (0, 0);
    for &(p, q, d) in &surds {
        let a = QuadraticSurd::from_i64(p, q, d).expect("surd");
        let (lp, lq) = (i(a.p()), i(a.q()));
        for quad in Quadrant::ALL {
            let poly = klein_polygon(&a, &a.conjugate(), quad, 41).map_err(|e| e.to_string())?;
            let (inner, touched) = box_sail(lp, lq, d, quad.0, 60);
            let in_box: Vec<P2> = poly
                .vertices
                .iter()
                .filter_map(|v| Some((v[0].to_i64()?, v[1].to_i64()?)))
                .filter(|v| v.0.abs().max(v.1.abs()) <= 60)
                .collect();
            ensure(in_box.iter().all(|v| touched.contains(v)), || {
                format!("({p}+√{d})/{q} cone {quad}: vertex off the box hull")
            })?;
            let cert = certified(inner.into_iter().collect());
            ensure(!cert.is_empty(), || format!("({p}+√{d})/{q} cone {quad}: box too small"))?;
            let (first, last) = (cert[0], cert[cert.len() - 1]);
            let lib: BTreeSet<P2> = poly
                .vertices
                .iter()
                .filter_map(|v| Some((v[0].to_i64()?, v[1].to_i64()?)))
                .filter(|&v| between(first, last, v))
                .collect();
            let brute: BTreeSet<P2> = cert.iter().copied().collect();
            ensure(lib == brute, || format!("({p}+√{d})/{q} cone {quad}: {lib:?} vs {brute:?}"))?;
            cones += 1;
            verts += brute.len();
        }
    }
    Ok(format!("{cones} cones, {verts} certified vertices of the |x|,|y| ≤ 60 box hull, all box vertices on it"))
}

// ---------- 3D oracles ----------

fn m3(m: &IntMatrix) -> M3 {
    let mut out = [[0; 3]; 3];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, x) in row.iter_mut().enumerate() {
            *x = m.get(r, c).to_i128().expect("small entries");
        }
    }
    out
}

fn mul(a: &M3, b: &M3) -> M3 {
    let mut c = [[0; 3]; 3];
    for r in 0..3 {
        for k in 0..3 {
            c[r][k] = (0..3).map(|j| a[r][j] * b[j][k]).sum();
        }
    }
    c
}

fn det(a: &M3) -> i128 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

fn adj(a: &M3) -> M3 {
    let mut c = [[0; 3]; 3];
    for r in 0..3 {
        for k in 0..3 {
            let (r1, r2) = ((k + 1) % 3, (k + 2) % 3);
            let (c1, c2) = ((r + 1) % 3, (r + 2) % 3);
            c[r][k] = a[r1][c1] * a[r2][c2] - a[r1][c2] * a[r2][c1];
        }
    }
    c
}

fn inv(a: &M3) -> M3 {
    let d = det(a);
    assert!(d == 1 || d == -1);
    adj(a).map(|r| r.map(|x| x * d))
}

fn scal(a: &M3, k: i128) -> M3 {
    a.map(|r| r.map(|x| x * k))
}

const ID: M3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

fn f_matrix(k: usize) -> M3 {
    [
        [[1, 0, 0], [0, 0, 1], [0, -1, -1]],
        [[1, 0, 0], [0, 0, 1], [1, -1, -1]],
        [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
        [[0, 0, 1], [-1, 0, 0], [0, -1, 0]],
    ][k - 1]
}

/// `G` permutes the eigenlines of `A` without commuting with it.
fn palindromic(g: &M3, a: &M3) -> bool {
    let c = mul(&mul(g, a), &inv(g));
    mul(&c, a) == mul(a, &c) && mul(g, a) != mul(a, g)
}

fn to_f(a: &M3) -> [[f64; 3]; 3] {
    a.map(|r| r.map(|x| x as f64))
}

/// Real eigenvalues of a matrix with three real eigenvalues, ascending.
fn eigenvalues(a: &[[f64; 3]; 3]) -> [f64; 3] {
    let tr = a[0][0] + a[1][1] + a[2][2];
    let m2 = a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[0][0] * a[2][2] - a[0][2] * a[2][0] + a[1][1] * a[2][2]
        - a[1][2] * a[2][1];
    let dt = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    let f = |x: f64| x * x * x - tr * x * x + m2 * x - dt;
    let df = |x: f64| 3.0 * x * x - 2.0 * tr * x + m2;
    // depressed cubic t³ + pt + q with x = t + tr/3
    let s = tr / 3.0;
    let p = m2 - tr * tr / 3.0;
    let q = -2.0 * tr.powi(3) / 27.0 + tr * m2 / 3.0 - dt;
    let r = 2.0 * (-p / 3.0).sqrt();
    let phi = (3.0 * q / (p * r)).clamp(-1.0, 1.0).acos() / 3.0;
    let mut roots = [0, 1, 2].map(|k| s + r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos());
    for x in roots.iter_mut() {
        for _ in 0..60 {
            let d = df(*x);
            if d == 0.0 {
                break;
            }
            *x -= f(*x) / d;
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm3(v: &[f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Unit right eigenvectors of `a` for its ascending eigenvalues.
fn eigenvectors(a: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    eigenvalues(a).map(|l| {
        let rows: Vec<[f64; 3]> = (0..3).map(|r| [0, 1, 2].map(|c| a[r][c] - if r == c { l } else { 0.0 })).collect();
        let best = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(x, y)| cross3(&rows[x], &rows[y]))
            .max_by(|u, v| norm3(u).total_cmp(&norm3(v)))
            .expect("three pairs");
        let n = norm3(&best);
        best.map(|x| x / n)
    })
}

fn transpose(a: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    [0, 1, 2].map(|r| [0, 1, 2].map(|c| a[c][r]))
}

fn apply_f(a: &M3, v: &[f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|r| (0..3).map(|c| a[r][c] as f64 * v[c]).sum())
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-7 * (1.0 + x.abs().max(y.abs()))
}

/// Class relations on the three embeddings of the eigenvector `(1, α, β)`.
fn class_relations_numeric(class: usize, a: &M3) -> bool {
    let vs = eigenvectors(&to_f(a));
    let ab: Vec<(f64, f64)> = vs.iter().map(|v| (v[1] / v[0], v[2] / v[0])).collect();
    let tr: f64 = ab.iter().map(|x| x.0).sum();
    let nm: f64 = ab.iter().map(|x| x.0).product();
    let cond = match class {
        1 => close(tr, 0.0),
        2 => close(tr, 1.0),
        3 => close(nm, 1.0),
        _ => close(nm, -1.0),
    };
    let rel = |b: f64, ta: f64| match class {
        1 | 2 => close(b, ta),
        3 => close(b, 1.0 / ta),
        _ => close(b, -1.0 / ta),
    };
    let cycles = [[1, 2, 0], [2, 0, 1]];
    cond && cycles.iter().any(|pi| (0..3).all(|k| rel(ab[k].1, ab[pi[k]].0)))
}

fn class_examples() -> Result<Vec<(usize, IntMatrix)>, String> {
    (1..=4).map(|k| make_class_example(k, &class_field(k), None).map(|a| (k, a)).map_err(|e| e.to_string())).collect()
}

fn c5(examples: &[(usize, IntMatrix)]) -> Result<(String, Vec<SymmetryReport>), String> {
    let mut reports = Vec::new();
    for (k, a) in examples {
        let am = m3(a);
        ensure(palindromic(&f_matrix(*k), &am), || format!("F{k} is not palindromic for {a}"))?;
        let r = is_cf_symmetry(&IntMatrix::from_i64(f_matrix(*k).map(|r| r.map(|x| x as i64))), a)
            .map_err(|e| e.to_string())?;
        ensure(r.kind == SymmetryKind::Palindromic, || format!("library rejects F{k}"))?;
        ensure(class_relations_numeric(*k, &am), || format!("class {k}: relations fail on the embeddings of {a}"))?;
        reports.push(r);
    }
    Ok(("F₁…F₄ palindromic, class relations hold on all embeddings".into(), reports))
}

/// `g³ = ±I`, eigenlines permuted by a 3-cycle, and `G₊` fixing `l` and `n`
/// with `⟨n, l⟩ ≠ 0`.
fn order3_ok(r: &SymmetryReport, a: &M3) -> Result<(), String> {
    let g = m3(&r.g);
    let cube = mul(&mul(&g, &g), &g);
    let sign = if cube == ID {
        1
    } else if cube == scal(&ID, -1) {
        -1
    } else {
        return Err(format!("{}³ ≠ ±I", r.g));
    };
    let o = r.order3.as_ref().ok_or("no order-3 data")?;
    let gp = m3(&o.g_plus);
    ensure(gp == scal(&g, sign), || "G₊ ≠ ±g with G₊³ = I".into())?;
    let vs = eigenvectors(&to_f(a));
    let mut perm = [usize::MAX; 3];
    for (k, v) in vs.iter().enumerate() {
        let gv = apply_f(&g, v);
        perm[k] = (0..3).find(|&j| norm3(&cross3(&gv, &vs[j])) < 1e-6 * norm3(&gv)).ok_or("eigenline not mapped")?;
    }
    ensure((0..3).all(|k| perm[k] != k) && perm.iter().collect::<BTreeSet<_>>().len() == 3, || format!("σ = {perm:?}"))?;
    let sigma: Vec<usize> = perm.iter().map(|x| x + 1).collect();
    ensure(sigma == r.sigma, || format!("reported σ {:?}, oracle {sigma:?}", r.sigma))?;
    let l: Vec<i128> = o.invariant_line.iter().map(|x| x.to_i128().expect("small")).collect();
    let n: Vec<i128> = o.invariant_plane_normal.iter().map(|x| x.to_i128().expect("small")).collect();
    let gl: Vec<i128> = (0..3).map(|r| (0..3).map(|c| gp[r][c] * l[c]).sum()).collect();
    let ng: Vec<i128> = (0..3).map(|c| (0..3).map(|r| n[r] * gp[r][c]).sum()).collect();
    let pairing: i128 = (0..3).map(|k| l[k] * n[k]).sum();
    ensure(gl == l && ng == n && pairing != 0 && l.iter().any(|&x| x != 0), || "invariant line/plane".into())
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> M3 {
    loop {
        let m: M3 = [0, 1, 2].map(|_| [0, 1, 2].map(|_| rng.gen_range(-3..=3)));
        if det(&m).abs() == 1 {
            return m;
        }
    }
}

fn to_int(m: &M3) -> IntMatrix {
    IntMatrix::from_i64(m.map(|r| r.map(|x| x as i64)))
}

struct Roundtrip {
    certs: Vec<(M3, PalindromeCertificate)>,
}

fn c7(examples: &[(usize, IntMatrix)], seed: u64) -> Result<(String, Roundtrip), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut certs = Vec::new();
    let mut cases = [0; 2];
    for (k, a) in examples {
        for _ in 0..10 {
            let x = random_unimodular(&mut rng);
            let b = mul(&mul(&x, &m3(a)), &inv(&x));
            let c = theorem_check(&to_int(&b), 10_000).map_err(|e| e.to_string())?;
            ensure(c.status == SearchStatus::Found && c.found, || format!("class {k}, X = {x:?}: {:?}", c.status))?;
            let s = c.symmetry.as_ref().ok_or("no symmetry")?;
            ensure(palindromic(&m3(&s.g), &b), || format!("class {k}: reported G is not palindromic"))?;
            let gp = m3(&s.order3.as_ref().ok_or("no order-3 data")?.g_plus);
            let can = c.canonical.as_ref().ok_or("no canonical form")?;
            for cj in &can.conjugators {
                let j: usize = cj.canonical_form[1..].parse().map_err(|_| "bad form")?;
                let xj = m3(&cj.x);
                ensure(det(&xj).abs() == 1 && mul(&xj, &gp) == mul(&f_matrix(j), &xj), || {
                    format!("X G₊ X⁻¹ ≠ F{j}")
                })?;
            }
            let forms: Vec<&str> = can.conjugators.iter().map(|c| c.canonical_form.as_str()).collect();
            let z: Vec<Vec<i64>> = can.z.iter().map(|v| v.iter().map(i).collect()).collect();
            let integral = (0..3).all(|r| (z[0][r] + z[1][r] + z[2][r]) % 3 == 0);
            match (integral, can.case) {
                (true, MainCase::IntegralCentroid) => {
                    ensure(forms == ["F1"], || format!("case (а) with {forms:?}"))?;
                    cases[0] += 1;
                }
                (false, MainCase::FractionalCentroid) => {
                    ensure(forms == ["F2", "F3", "F4"], || format!("case (б) with {forms:?}"))?;
                    cases[1] += 1;
                }
                _ => return Err("reported case contradicts the centroid".into()),
            }
            certs.push((b, c));
        }
    }
    Ok((format!("40 conjugates: {} case (а), {} case (б)", cases[0], cases[1]), Roundtrip { certs }))
}

fn c4() -> Check {
    let known = [0.8493, 0.5255];
    let mut regs = Vec::new();
    for (k, f) in verify::dirichlet_cubics().iter().enumerate() {
        let a = verify::companion(f);
        let am = m3(&a);
        let g = dirichlet_group(&a, 10_000).map_err(|e| e.to_string())?;
        ensure(g.candidates <= 10_000, || format!("{f}: {} candidates", g.candidates))?;
        ensure(m3(&g.torsion) == scal(&ID, -1), || "torsion ≠ -I".into())?;
        let [e1, e2] = [m3(&g.generators[0]), m3(&g.generators[1])];
        for e in [&e1, &e2] {
            ensure(det(e).abs() == 1 && mul(e, &am) == mul(&am, e), || format!("{f}: generator not a unit of the commutant"))?;
        }
        ensure(mul(&e1, &e2) == mul(&e2, &e1), || "generators do not commute".into())?;
        let vs = eigenvectors(&to_f(&am));
        let logs = |e: &M3| vs.map(|v| (dot3(&apply_f(e, &v), &v)).abs().ln());
        let (l1, l2) = (logs(&e1), logs(&e2));
        let reg = (l1[0] * l2[1] - l1[1] * l2[0]).abs();
        ensure(reg > 1e-3, || format!("{f}: log vectors dependent"))?;
        ensure((reg - g.regulator).abs() < 1e-6, || format!("{f}: regulator {reg} vs {}", g.regulator))?;
        if let Some(r) = known.get(k) {
            ensure((reg - r).abs() < 1e-3, || format!("{f}: regulator {reg}, expected {r}"))?;
        }
        regs.push(format!("{reg:.4}"));
    }
    Ok(format!("rank 2 for 5 cubics, regulators {}", regs.join(", ")))
}

fn c8() -> Check {
    for f in verify::non_galois_cubics() {
        let c: Vec<i64> = f.coeffs().iter().map(i).collect();
        let (a, b, cc) = (c[2], c[1], c[0]);
        let disc = a * a * b * b - 4 * b * b * b - 4 * a * a * a * cc - 27 * cc * cc + 18 * a * b * cc;
        ensure(disc > 0 && !is_square(disc), || format!("{f}: discriminant {disc}"))?;
        let cert = theorem_check(&verify::companion(&f), 10_000).map_err(|e| e.to_string())?;
        ensure(!cert.found && cert.status == SearchStatus::NotFound, || format!("{f}: {:?}", cert.status))?;
    }
    Ok("3 cubics with non-square discriminant, found=false conclusively".into())
}

// ---------- dichotomy ----------

type M2 = [[i64; 2]; 2];

fn mul2(a: &M2, b: &M2) -> M2 {
    [0, 1].map(|r| [0, 1].map(|c| a[r][0] * b[0][c] + a[r][1] * b[1][c]))
}

/// Palindromic symmetries of `a` with entries ≤ `bound` and their action on
/// the four eigen-cones.
fn symmetries_2d(a: &M2, bound: i64) -> Vec<(i64, Vec<usize>)> {
    let (tr, dt) = ((a[0][0] + a[1][1]) as f64, (a[0][0] * a[1][1] - a[0][1] * a[1][0]) as f64);
    let disc = (tr * tr - 4.0 * dt).sqrt();
    let ls = [(tr + disc) / 2.0, (tr - disc) / 2.0];
    // right eigenvectors and left eigenvectors
    let right = ls.map(|l| [a[0][1] as f64, l - a[0][0] as f64]);
    let left = ls.map(|l| [a[1][0] as f64, l - a[0][0] as f64]);
    let cone_of = |p: [f64; 2]| -> usize {
        let s = left.map(|l| l[0] * p[0] + l[1] * p[1] > 0.0);
        match s {
            [true, true] => 0,
            [true, false] => 1,
            [false, true] => 2,
            [false, false] => 3,
        }
    };
    let reps: Vec<[f64; 2]> = (0..4)
        .map(|k| {
            let s = [if k < 2 { 1.0 } else { -1.0 }, if k % 2 == 0 { 1.0 } else { -1.0 }];
            // point with sign pattern s under the left eigenvectors
            let mut p = [0.0; 2];
            for (j, sj) in s.iter().enumerate() {
                let w = dot2(&left[j], &right[j]);
                for c in 0..2 {
                    p[c] += sj * right[j][c] / w;
                }
            }
            p
        })
        .collect();
    let mut out = Vec::new();
    for g00 in -bound..=bound {
        for g01 in -bound..=bound {
            for g10 in -bound..=bound {
                for g11 in -bound..=bound {
                    let d = g00 * g11 - g01 * g10;
                    if d.abs() != 1 {
                        continue;
                    }
                    let g = [[g00, g01], [g10, g11]];
                    let gi = [[g11 * d, -g01 * d], [-g10 * d, g00 * d]];
                    let c = mul2(&mul2(&g, a), &gi);
                    if mul2(&c, a) != mul2(a, &c) || mul2(&g, a) == mul2(a, &g) {
                        continue;
                    }
                    let images = reps
                        .iter()
                        .map(|p| {
                            cone_of([
                                g00 as f64 * p[0] + g01 as f64 * p[1],
                                g10 as f64 * p[0] + g11 as f64 * p[1],
                            ])
                        })
                        .collect();
                    out.push((d, images));
                }
            }
        }
    }
    out
}

fn dot2(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Image of cone `s` under `g` in the eigenbasis of `b`.
fn cone_map(g: &M3, s: [i8; 3], right: &[[f64; 3]; 3], left: &[[f64; 3]; 3]) -> [i8; 3] {
    let mut p = [0.0; 3];
    for j in 0..3 {
        let w = dot3(&left[j], &right[j]);
        for c in 0..3 {
            p[c] += s[j] as f64 * right[j][c] / w;
        }
    }
    let gp = apply_f(g, &p);
    left.map(|l| if dot3(&l, &gp) > 0.0 { 1 } else { -1 })
}

fn cone_structure(b: &M3, cert: &PalindromeCertificate) -> Result<(), String> {
    let s = cert.symmetry.as_ref().ok_or("no symmetry")?;
    let gp = m3(&s.order3.as_ref().ok_or("no order-3 data")?.g_plus);
    let gm = scal(&gp, -1);
    let bf = to_f(b);
    let right = eigenvectors(&bf);
    let left = eigenvectors(&transpose(&bf));
    let cones: Vec<[i8; 3]> =
        (0..8).map(|k| [0, 1, 2].map(|j| if k >> (2 - j) & 1 == 0 { 1 } else { -1 })).collect();
    let fixed: Vec<[i8; 3]> = cones.iter().copied().filter(|c| cone_map(&gp, *c, &right, &left) == *c).collect();
    ensure(fixed.len() == 2 && fixed[0] == fixed[1].map(|x| -x), || format!("G₊ fixes {fixed:?}"))?;
    let f0 = fixed[0];
    ensure(cone_map(&gm, f0, &right, &left) == f0.map(|x| -x), || "G₋ does not send the fixed cone to its antipode".into())?;
    let start = *cones.iter().find(|c| !fixed.contains(c)).expect("six remain");
    let mut orbit = vec![start];
    let mut cur = cone_map(&gm, start, &right, &left);
    while cur != start && orbit.len() <= 8 {
        orbit.push(cur);
        cur = cone_map(&gm, cur, &right, &left);
    }
    let distinct: BTreeSet<[i8; 3]> = orbit.iter().copied().collect();
    ensure(orbit.len() == 6 && distinct.len() == 6 && !orbit.iter().any(|c| fixed.contains(c)), || {
        format!("G₋ orbit {orbit:?}")
    })?;
    let lib = cert.cones.as_ref().ok_or("no cone data")?;
    ensure(lib.holds(), || "library cone orbits fail".into())
}

fn c9(rt: &Roundtrip) -> Check {
    let golden: M2 = [[0, 1], [1, 1]];
    let syms = symmetries_2d(&golden, 2);
    ensure(syms.iter().any(|(d, img)| *d == 1 && (0..4).all(|k| img[k] != k) && img.iter().collect::<BTreeSet<_>>().len() == 4), || {
        "golden operator: no det +1 palindromic symmetry moving all four cones".into()
    })?;
    let lib_golden = find_symmetries_2d(&IntMatrix::from_i64(golden), 2).map_err(|e| e.to_string())?;
    ensure(lib_golden.iter().any(|r| r.kind == SymmetryKind::Palindromic && r.det == 1 && r.fixed_cones.is_empty()), || {
        "library misses the rotation".into()
    })?;
    // (1, 2, 2, 1): product of [[a, 1], [1, 0]] over the period
    let m = [1, 2, 2, 1].iter().fold([[1, 0], [0, 1]], |acc: M2, &a| mul2(&acc, &[[a, 1], [1, 0]]));
    let pal = symmetries_2d(&m, 20);
    ensure(!pal.is_empty() && pal.iter().all(|(d, _)| *d == 1), || {
        format!("(1,2,2,1): determinants {:?}", pal.iter().map(|x| x.0).collect::<Vec<_>>())
    })?;
    let cf = PeriodicCF { preperiod: vec![], period: [1, 2, 2, 1].iter().map(|&x| BigInt::from(x)).collect() };
    let s = cf.value().and_then(|v| v.to_surd()).map_err(|e| e.to_string())?;
    let a = operator_from_surd(&s).map_err(|e| e.to_string())?;
    let lib: Vec<i8> = find_symmetries_2d(&a, 20)
        .map_err(|e| e.to_string())?
        .iter()
        .filter(|r| r.kind == SymmetryKind::Palindromic)
        .map(|r| r.det)
        .collect();
    ensure(lib.len() == pal.len() && lib.iter().all(|&d| d == 1), || format!("library determinants {lib:?}"))?;
    for (b, c) in &rt.certs {
        cone_structure(b, c)?;
    }
    Ok(format!("rotation and det +1 checks pass; {} certificates with cone orbits 2 + 6", rt.certs.len()))
}

fn report(id: u8, name: &str, t: Instant, limit: Option<Duration>, r: &Check) -> bool {
    let el = t.elapsed();
    let (ok, detail) = match r {
        Ok(d) if limit.is_none_or(|l| el <= l) => (true, d.clone()),
        Ok(d) => (false, format!("{d}; took {el:?}, limit {:?}", limit.expect("set"))),
        Err(e) => (false, e.clone()),
    };
    println!("{} C{id} {name} ({} ms): {detail}", if ok { "PASS" } else { "FAIL" }, el.as_millis());
    ok
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let mut unexpected = Vec::new();

    let t = Instant::now();
    if !report(1, "galois-reversal", t, secs(5), &c1()) {
        unexpected.push(1);
    }

    let t = Instant::now();
    let (r2, gaps) = c2();
    let ok2 = report(2, "witness-corpus", t, secs(60), &r2);
    // known height gaps are reported red but do not fail the run
    if !ok2 && !(r2.is_err() && gaps == PROP1_HEIGHT_GAPS) {
        unexpected.push(2);
    }

    let t = Instant::now();
    if !report(3, "klein-polygons", t, secs(30), &c3()) {
        unexpected.push(3);
    }

    let t = Instant::now();
    if !report(4, "dirichlet", t, secs(120), &c4()) {
        unexpected.push(4);
    }

    let t = Instant::now();
    let examples = class_examples();
    let c5r = examples.clone().and_then(|ex| c5(&ex));
    let r5 = c5r.as_ref().map(|x| x.0.clone()).map_err(Clone::clone);
    if !report(5, "class-examples", t, secs(30), &r5) {
        unexpected.push(5);
    }

    let t7 = Instant::now();
    let c7r = examples.and_then(|ex| c7(&ex, DEFAULT_SEED).map(|r| (ex, r)));
    let e7 = t7.elapsed();

    let t = Instant::now();
    let r6: Check = match (&c5r, &c7r) {
        (Ok((_, reports)), Ok((ex, (_, rt)))) => {
            let mut n = 0;
            let mut res = Ok(());
            for (r, (_, a)) in reports.iter().zip(ex) {
                res = res.and_then(|_| order3_ok(r, &m3(a)));
                n += 1;
            }
            for (b, c) in &rt.certs {
                res = res.and_then(|_| order3_ok(c.symmetry.as_ref().ok_or("no symmetry")?, b));
                n += 1;
            }
            res.map(|_| format!("{n} palindromic symmetries: g³ = ±I, 3-cycle σ, invariant line and plane"))
        }
        _ => Err("prerequisite suites failed".into()),
    };
    if !report(6, "order3", t, None, &r6) {
        unexpected.push(6);
    }

    let r7 = c7r.as_ref().map(|(_, (d, _))| d.clone()).map_err(Clone::clone);
    let ok7 = r7.is_ok() && e7 <= Duration::from_secs(300);
    println!(
        "{} C7 class-roundtrip ({} ms): {}",
        if ok7 { "PASS" } else { "FAIL" },
        e7.as_millis(),
        r7.clone().unwrap_or_else(|e| e)
    );
    if !ok7 {
        unexpected.push(7);
    }

    let t = Instant::now();
    if !report(8, "non-galois", t, secs(30), &c8()) {
        unexpected.push(8);
    }

    let t = Instant::now();
    let r9 = match &c7r {
        Ok((_, (_, rt))) => c9(rt),
        Err(_) => Err("round-trip certificates unavailable".into()),
    };
    if !report(9, "dichotomy", t, None, &r9) {
        unexpected.push(9);
    }

    // the library suites must agree with the oracles above
    let lib: Vec<bool> = verify::run(&[], DEFAULT_SEED).iter().map(|r| r.passed).collect();
    let mut expected = [true; 9];
    expected[1] = ok2;
    if lib != expected {
        println!("FAIL library verify suites disagree: {lib:?}");
        unexpected.push(0);
    }

    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
