use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::classes::{canonical_matrix, class_condition, class_relation_holds};
use super::dirichlet::dirichlet_with;
use super::symmetry::{cone_orbits, order3_with, symmetry_report, ConeOrbits, SymmetryReport};
use super::units::{combine, is_norm_pm1, t2_gram};
use crate::algnum::{automorphisms, FieldElement, FullModule};
use crate::cf1d::{Prop1Condition, SymmetryKind};
use crate::error::{Error, Result};
use crate::exactint::IntMatrix;
use crate::json;
use crate::lattice::short_vectors;
use crate::sail3d::GeoCF;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    NotFound,
    Inconclusive,
}

/// Whether the centroid `w` of the final triangle is a lattice point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MainCase {
    #[serde(rename = "a")]
    IntegralCentroid,
    #[serde(rename = "b")]
    FractionalCentroid,
}

/// `X` with `X·G₊·X⁻¹ = F_i`, and the resulting `ω`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conjugator {
    #[serde(rename = "X")]
    pub x: IntMatrix,
    pub canonical_form: String,
    pub omega_minpoly: String,
    pub condition: Prop1Condition,
    #[serde(with = "json::rat")]
    pub trace: BigRational,
    #[serde(with = "json::rat")]
    pub norm: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Canonical {
    pub case: MainCase,
    #[serde(with = "json::bigint_rows")]
    pub z: Vec<Vec<BigInt>>,
    #[serde(with = "json::rat_vec")]
    pub w: Vec<BigRational>,
    #[serde(flatten)]
    pub primary: Conjugator,
    /// All conjugators: one in case (a), `X₂, X₃, X₄` in case (b).
    pub conjugators: Vec<Conjugator>,
    /// `|N|²` of the successive triangles, `N` the cross product of two edges.
    #[serde(with = "json::bigint_vec")]
    pub shrink_areas: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PalindromeCertificate {
    pub status: SearchStatus,
    pub found: bool,
    #[serde(flatten, default, skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<SymmetryReport>,
    #[serde(flatten, default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<Canonical>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cones: Option<ConeOrbits>,
    /// `T2` bound of the colon-module sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_bound: Option<String>,
    #[serde(with = "json::int_str")]
    pub candidates: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl PalindromeCertificate {
    fn empty(status: SearchStatus, candidates: usize, reason: impl Into<String>) -> Self {
        PalindromeCertificate {
            status,
            found: false,
            symmetry: None,
            canonical: None,
            cones: None,
            sweep_bound: None,
            candidates,
            reason: Some(reason.into()),
        }
    }
}

type V3 = [i128; 3];
type M3 = [[i128; 3]; 3];

fn to_m3(m: &IntMatrix) -> Result<M3> {
    let mut out = [[0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = m.get(i, j).to_i128().ok_or_else(|| Error::StructureViolation("entry exceeds i128".into()))?;
        }
    }
    Ok(out)
}

fn to_v3(v: &[BigInt]) -> Result<V3> {
    let mut out = [0; 3];
    for (o, x) in out.iter_mut().zip(v) {
        *o = x.to_i128().ok_or_else(|| Error::StructureViolation("entry exceeds i128".into()))?;
    }
    Ok(out)
}

fn apply(m: &M3, v: &V3) -> V3 {
    [0, 1, 2].map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
}

fn sub(a: &V3, b: &V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &V3, b: &V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: &V3, b: &V3) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn big(v: &V3) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// First point of `{⟨n, x⟩ = 1}` off the line `l`, by max-norm then
/// lexicographic order.
fn first_plane_point(n: &V3, l: &V3) -> V3 {
    for r in 1i128.. {
        for x in -r..=r {
            for y in -r..=r {
                for z in -r..=r {
                    let p = [x, y, z];
                    if x.abs().max(y.abs()).max(z.abs()) == r && dot(n, &p) == 1 && cross(&p, l) != [0, 0, 0] {
                        return p;
                    }
                }
            }
        }
    }
    unreachable!("a primitive covector takes the value 1")
}

/// Lexicographically smallest lattice point of the closed triangle `z` on the
/// plane `⟨n, x⟩ = 1`, other than its vertices and centroid.
fn inner_point(n: &V3, z: &[V3; 3]) -> Option<V3> {
    let nrm = cross(&sub(&z[1], &z[0]), &sub(&z[2], &z[0]));
    let sum = [0, 1, 2].map(|k| z[0][k] + z[1][k] + z[2][k]);
    let lo = [0, 1, 2].map(|k| z.iter().map(|p| p[k]).min().expect("three"));
    let hi = [0, 1, 2].map(|k| z.iter().map(|p| p[k]).max().expect("three"));
    for x in lo[0]..=hi[0] {
        for y in lo[1]..=hi[1] {
            for t in lo[2]..=hi[2] {
                let p = [x, y, t];
                if dot(n, &p) != 1 || z.contains(&p) || [3 * x, 3 * y, 3 * t] == sum {
                    continue;
                }
                let inside = (0..3).all(|k| {
                    let (a, b) = (&z[k], &z[(k + 1) % 3]);
                    dot(&nrm, &cross(&sub(b, a), &sub(&p, a))) >= 0
                });
                if inside {
                    return Some(p);
                }
            }
        }
    }
    None
}

fn columns(cols: &[V3]) -> IntMatrix {
    IntMatrix::from_columns(&cols.iter().map(big).collect::<Vec<_>>()).expect("3x3")
}

fn conjugator(target: usize, e_cols: &[V3], z_cols: &[V3], f: &IntMatrix, geo: &GeoCF) -> Result<Conjugator> {
    let z = columns(z_cols);
    let zinv = z.inverse_unimodular().ok_or_else(|| {
        Error::StructureViolation(format!("triangle basis {z} is not unimodular (det {})", z.det()))
    })?;
    let x = columns(e_cols).mul(&zinv);
    let fi = canonical_matrix(target);
    let xinv = x.inverse_unimodular().expect("product of unimodular matrices");
    if x.mul(f).mul(&xinv) != fi {
        return Err(Error::StructureViolation(format!("X G₊ X⁻¹ differs from F{target}")));
    }
    let v = geo.eigenvector();
    let u: Vec<FieldElement> = (0..3)
        .map(|r| {
            (0..3).fold(FieldElement::zero(geo.field()), |acc, k| {
                acc.add(&v[k].scale(&BigRational::from_integer(x.get(r, k).clone())))
            })
        })
        .collect();
    let u0 = u[0].inv()?;
    let (alpha, beta) = (u[1].mul(&u0), u[2].mul(&u0));
    if !class_relation_holds(target, &alpha, &beta) {
        return Err(Error::StructureViolation(format!("recovered (α, β) violate the class {target} relations")));
    }
    Ok(Conjugator {
        x,
        canonical_form: format!("F{target}"),
        omega_minpoly: alpha.minpoly().to_string(),
        condition: class_condition(target),
        trace: alpha.trace(),
        norm: alpha.norm(),
    })
}

pub(crate) fn canonical_with(g: &IntMatrix, geo: &GeoCF) -> Result<Canonical> {
    let o = order3_with(g, geo)?;
    let f = to_m3(&o.g_plus)?;
    let n = to_v3(&o.invariant_plane_normal)?;
    let l = to_v3(&o.invariant_line)?;
    let mut v = first_plane_point(&n, &l);
    let mut areas: Vec<i128> = Vec::new();
    let z = loop {
        let z = [v, apply(&f, &v), apply(&f, &apply(&f, &v))];
        let nrm = cross(&sub(&z[1], &z[0]), &sub(&z[2], &z[0]));
        let area = dot(&nrm, &nrm);
        if areas.last().is_some_and(|&prev| area >= prev) || area == 0 {
            return Err(Error::StructureViolation("triangle failed to shrink".into()));
        }
        areas.push(area);
        match inner_point(&n, &z) {
            Some(p) => v = p,
            None => break z,
        }
    };
    let sum = [0, 1, 2].map(|k| z[0][k] + z[1][k] + z[2][k]);
    let w: Vec<BigRational> = sum.iter().map(|&s| BigRational::new(s.into(), 3.into())).collect();
    let (case, conjugators) = if sum.iter().all(|s| s % 3 == 0) {
        let wi = sum.map(|s| s / 3);
        let c = conjugator(1, &[[1, 1, 0], [1, 0, -1], [1, 0, 0]], &[z[0], z[1], wi], &o.g_plus, geo)?;
        if c.x.mul_vec(&big(&z[2])) != big(&[1, -1, 1]) {
            return Err(Error::StructureViolation("X₁ z₃ ≠ e₁ - e₂ + e₃".into()));
        }
        (MainCase::IntegralCentroid, vec![c])
    } else {
        let targets: [(usize, [V3; 3]); 3] = [
            (2, [[1, 0, 0], [1, 0, 1], [1, 1, 0]]),
            (3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
            (4, [[1, 0, 0], [0, -1, 0], [0, 0, 1]]),
        ];
        let cs = targets.iter().map(|(t, e)| conjugator(*t, e, &z, &o.g_plus, geo)).collect::<Result<Vec<_>>>()?;
        (MainCase::FractionalCentroid, cs)
    };
    Ok(Canonical {
        case,
        z: z.iter().map(big).collect(),
        w,
        primary: conjugators[0].clone(),
        conjugators,
        shrink_areas: areas.into_iter().map(BigInt::from).collect(),
    })
}

fn found_certificate(g: &IntMatrix, geo: &GeoCF, sweep: Option<f64>, candidates: usize) -> Result<PalindromeCertificate> {
    let report = symmetry_report(g, geo)?;
    if report.kind != SymmetryKind::Palindromic {
        return Err(Error::StructureViolation(format!("{g} is not a palindromic symmetry")));
    }
    let canonical = canonical_with(g, geo)?;
    let cones = cone_orbits(g, geo)?;
    Ok(PalindromeCertificate {
        status: SearchStatus::Found,
        found: true,
        symmetry: Some(report),
        canonical: Some(canonical),
        cones: Some(cones),
        sweep_bound: sweep.map(|b| b.to_string()),
        candidates,
        reason: None,
    })
}

/// Reduce a palindromic symmetry to one of `F₁ … F₄`.
pub fn canonicalize(g: &IntMatrix, a: &IntMatrix) -> Result<PalindromeCertificate> {
    found_certificate(g, &GeoCF::from_operator(a)?, None, 0)
}

/// The matrix of `x ↦ γ·τ(x)` on the module spanned by the eigenvector
/// coordinates, when it is integral.
fn twisted_matrix(m: &FullModule, v: &[FieldElement], gamma: &FieldElement, tau: &FieldElement) -> Option<IntMatrix> {
    let mut rows = Vec::with_capacity(3);
    for vr in v {
        let c = m.coordinates(&gamma.mul(&vr.compose(tau)));
        if !c.iter().all(|x| x.is_integer()) {
            return None;
        }
        rows.push(c.into_iter().map(|x| x.to_integer()).collect());
    }
    IntMatrix::from_rows(rows).ok()
}

/// Complete search for a palindromic symmetry of `CF(a)`. Every candidate is
/// `x ↦ γτ(x)` with `γτ(M) = M`, `M` the module of eigenvector coordinates; up
/// to units of its multiplier ring `γ` has `T2` below the reported bound.
/// `depth` is the candidate budget of each enumeration.
pub fn find_palindromic(a: &IntMatrix, depth: usize) -> Result<PalindromeCertificate> {
    find_with(&GeoCF::from_operator(a)?, depth)
}

pub(crate) fn find_with(geo: &GeoCF, depth: usize) -> Result<PalindromeCertificate> {
    let autos = automorphisms(geo.field());
    if autos.len() < 3 {
        return Ok(PalindromeCertificate::empty(
            SearchStatus::NotFound,
            0,
            "the field has no nontrivial automorphism",
        ));
    }
    let group = match dirichlet_with(geo, depth) {
        Ok(g) => g,
        Err(Error::InsufficientDepth { found }) => {
            let mut cert = PalindromeCertificate::empty(
                SearchStatus::Inconclusive,
                depth,
                format!("only {found} independent units within the candidate budget"),
            );
            // without two units the sweep has no finite bound
            cert.sweep_bound = Some("inf".into());
            return Ok(cert);
        }
        Err(e) => return Err(e),
    };
    let (s1, s2) = group.log_sup_norms();
    let bound = 3.0 * (s1 + s2).exp() * (1.0 + 1e-9) + 1e-9;
    let v = geo.eigenvector();
    let m = FullModule::from_basis(v)?;
    let mut spent = group.candidates;
    let mut truncated = false;
    for tau in autos.iter().skip(1) {
        let tm = m.map_automorphism(tau)?;
        let col = m.colon(&tm)?;
        let cb = col.canonical_basis();
        let e = short_vectors(&t2_gram(&cb), bound, depth);
        spent += e.visited;
        truncated |= e.truncated;
        for x in &e.vectors {
            let gamma = combine(&cb, x);
            if !is_norm_pm1(&gamma) || tm.scale(&gamma)? != m {
                continue;
            }
            if let Some(g) = twisted_matrix(&m, v, &gamma, tau) {
                return found_certificate(&g, geo, Some(bound), spent);
            }
        }
    }
    let mut cert = if truncated {
        PalindromeCertificate::empty(SearchStatus::Inconclusive, spent, "candidate budget exhausted before the sweep bound")
    } else {
        PalindromeCertificate::empty(SearchStatus::NotFound, spent, "no twisted similarity γτ(M) = M below the sweep bound")
    };
    cert.sweep_bound = Some(bound.to_string());
    Ok(cert)
}

/// Palindromic search plus reduction to the canonical classes.
pub fn theorem_check(a: &IntMatrix, depth: usize) -> Result<PalindromeCertificate> {
    find_palindromic(a, depth)
}
