use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::geocf::{Cone, GeoCF};
use super::hull::{convex_hull, dot, P3};
use crate::error::{Error, Result};
use crate::exactint::IntMatrix;
use crate::json;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SailVertex {
    #[serde(with = "json::bigint_vec")]
    pub coords: Vec<BigInt>,
    pub certified: bool,
}

/// A finite piece of the sail of one cone. Faces are the hull facets of the
/// enumerated points that face the origin, given as corner indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SailPatch {
    pub cone: Cone,
    #[serde(with = "json::rat")]
    pub radius: BigRational,
    pub vertices: Vec<SailVertex>,
    pub faces: Vec<Vec<usize>>,
    /// Number of lattice points enumerated in the truncated cone.
    #[serde(with = "crate::json::int_str")]
    pub points: usize,
}

impl SailPatch {
    pub fn certified(&self) -> impl Iterator<Item = &SailVertex> {
        self.vertices.iter().filter(|v| v.certified)
    }

    pub fn has_vertex(&self, x: &[BigInt]) -> bool {
        self.vertices.iter().any(|v| v.coords == x)
    }

    pub fn is_certified_vertex(&self, x: &[BigInt]) -> bool {
        self.vertices.iter().any(|v| v.certified && v.coords == x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatchFormat {
    Off,
    Json,
}

const NEAR: f64 = 1e-6;

/// Lattice points `x ≠ 0` of the cone with every eigencoordinate at most
/// `radius` in absolute value.
pub fn cone_points(g: &GeoCF, cone: &Cone, radius: &BigRational) -> Vec<[BigInt; 3]> {
    let r = radius.to_f64().unwrap_or(f64::INFINITY);
    let s: Vec<f64> = cone.signs().iter().map(|&x| x as f64).collect();
    let v = g.eigen_f64();
    let q = g.coord_f64();
    // x = Σ c_i v_i with s_i c_i ∈ (0, r]
    let range = |k: usize| -> (i64, i64) {
        let (mut lo, mut hi) = (0.0, 0.0);
        for i in 0..3 {
            let e = v[k][i] * s[i] * r;
            if e < 0.0 {
                lo += e;
            } else {
                hi += e;
            }
        }
        ((lo - 1.0).floor() as i64, (hi + 1.0).ceil() as i64)
    };
    let (r0, r1) = (range(0), range(1));
    let mut out = Vec::new();
    for x0 in r0.0..=r0.1 {
        for x1 in r1.0..=r1.1 {
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            for i in 0..3 {
                let base = s[i] * (q[i][0] * x0 as f64 + q[i][1] * x1 as f64);
                let slope = s[i] * q[i][2];
                // 0 < base + slope·x2 ≤ r
                let (a, b) = ((-base) / slope, (r - base) / slope);
                let (a, b) = if slope > 0.0 { (a, b) } else { (b, a) };
                lo = lo.max(a);
                hi = hi.min(b);
            }
            if lo > hi + 1.0 {
                continue;
            }
            let pad = 1e-6 * (1.0 + lo.abs().max(hi.abs()));
            for x2 in (lo - pad).ceil() as i64..=(hi + pad).floor() as i64 {
                let x = [x0, x1, x2];
                if x == [0, 0, 0] {
                    continue;
                }
                if accept(g, cone, radius, r, &x) {
                    out.push(x.map(BigInt::from));
                }
            }
        }
    }
    out
}

fn accept(g: &GeoCF, cone: &Cone, radius: &BigRational, r: f64, x: &[i64; 3]) -> bool {
    let q = g.coord_f64();
    let scale = 1.0 + x.iter().map(|&t| (t as f64).abs()).sum::<f64>();
    let mut exact = None;
    for i in 0..3 {
        let si = cone.signs()[i] as f64;
        let c = si * (q[i][0] * x[0] as f64 + q[i][1] * x[1] as f64 + q[i][2] * x[2] as f64);
        let tol = NEAR * scale;
        if c > tol && c < r - tol * r.max(1.0) {
            continue;
        }
        if c < -tol || c > r + tol * r.max(1.0) {
            return false;
        }
        let e = exact.get_or_insert_with(|| g.coordinate_element(&x.map(BigInt::from)));
        let ei = if cone.signs()[i] > 0 { e.clone() } else { e.neg() };
        if ei.sign_at(i) != Ordering::Greater {
            return false;
        }
        let slack = crate::algnum::FieldElement::from_rational(g.field(), radius.clone()).sub(&ei);
        if slack.sign_at(i) == Ordering::Less {
            return false;
        }
    }
    true
}

fn to_p3(x: &[BigInt; 3]) -> P3 {
    x.clone().map(|t| t.to_i128().expect("coordinates fit in i128"))
}

/// Sail patch of `cone` truncated at `radius`. A vertex is certified when the
/// sum `N` of the inward normals of its sail faces is positive on the cone,
/// supports the enumerated points only at the vertex, and the simplex
/// `{x ∈ C : N·x ≤ N·v}` lies inside the enumerated region.
pub fn sail_patch(g: &GeoCF, cone: &Cone, radius: &BigRational) -> Result<SailPatch> {
    if !radius.is_positive() {
        return Err(Error::EmptyPatch);
    }
    let pts = cone_points(g, cone, radius);
    let p3: Vec<P3> = pts.iter().map(to_p3).collect();
    let Some(facets) = convex_hull(&p3) else {
        return Err(Error::EmptyPatch);
    };
    // inward normal n_in = -n, offset h_in = -h; sail faces have h_in > 0
    let sail: Vec<(Vec<usize>, P3, i128)> = facets
        .iter()
        .filter(|f| -f.offset > 0)
        .map(|f| (f.corners.clone(), f.normal.map(|c| -c), -f.offset))
        .collect();
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    for (corners, _, _) in &sail {
        for &c in corners {
            let len = index.len();
            index.entry(c).or_insert(len);
        }
    }
    // renumber by lexicographic order of coordinates for stable output
    let mut order: Vec<usize> = index.keys().copied().collect();
    order.sort_by(|&a, &b| p3[a].cmp(&p3[b]));
    let renum: BTreeMap<usize, usize> = order.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut vertices = Vec::with_capacity(order.len());
    for &i in &order {
        let incident: Vec<&P3> = sail.iter().filter(|(c, _, _)| c.contains(&i)).map(|(_, n, _)| n).collect();
        let nsum: P3 = incident.iter().fold([0, 0, 0], |acc, n| [acc[0] + n[0], acc[1] + n[1], acc[2] + n[2]]);
        let certified = certify(g, cone, radius, &p3, i, &nsum);
        vertices.push(SailVertex { coords: pts[i].to_vec(), certified });
    }
    let mut faces: Vec<Vec<usize>> = sail.iter().map(|(c, _, _)| c.iter().map(|i| renum[i]).collect()).collect();
    for f in &mut faces {
        // start each face at its smallest index, keep orientation
        let k = (0..f.len()).min_by_key(|&k| f[k]).unwrap_or(0);
        f.rotate_left(k);
    }
    faces.sort();
    Ok(SailPatch { cone: cone.clone(), radius: radius.clone(), vertices, faces, points: pts.len() })
}

fn certify(g: &GeoCF, cone: &Cone, radius: &BigRational, pts: &[P3], i: usize, n: &P3) -> bool {
    if *n == [0, 0, 0] {
        return false;
    }
    let h = dot(n, &pts[i]);
    if h <= 0 || pts.iter().enumerate().any(|(j, p)| j != i && dot(n, p) <= h) {
        return false;
    }
    let nb: Vec<BigInt> = n.iter().map(|&c| BigInt::from(c)).collect();
    let nv = g.pairing(&nb);
    let hq = crate::algnum::FieldElement::from_rational(g.field(), BigRational::from_integer(h.into()));
    (0..3).all(|k| {
        let s = BigRational::from_integer(cone.signs()[k].into());
        let pos = nv.scale(&s);
        // N positive on the cone and the simplex vertex on ray k within radius
        pos.sign_at(k) == Ordering::Greater && pos.scale(radius).sub(&hq).sign_at(k) != Ordering::Less
    })
}

/// OFF mesh or JSON document for a patch.
pub fn export_patch(p: &SailPatch, format: PatchFormat) -> String {
    match format {
        PatchFormat::Json => serde_json::to_string_pretty(p).expect("patch serializes"),
        PatchFormat::Off => {
            let mut s = String::from("OFF\n");
            let _ = writeln!(s, "# cone {} radius {}", p.cone, json::rat_to_string(&p.radius));
            let unc: Vec<String> =
                p.vertices.iter().enumerate().filter(|(_, v)| !v.certified).map(|(k, _)| k.to_string()).collect();
            if !unc.is_empty() {
                let _ = writeln!(s, "# uncertified {}", unc.join(" "));
            }
            let _ = writeln!(s, "{} {} 0", p.vertices.len(), p.faces.len());
            for v in &p.vertices {
                let c: Vec<String> = v.coords.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(s, "{}", c.join(" "));
            }
            for f in &p.faces {
                let c: Vec<String> = f.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(s, "{} {}", f.len(), c.join(" "));
            }
            s
        }
    }
}

/// Smallest radius `2^k ≥ 2` at which the patch has a certified vertex whose
/// image under `unit` (a cone-preserving Dirichlet symmetry) is certified too.
pub fn default_radius(g: &GeoCF, cone: &Cone, unit: Option<&IntMatrix>, max_doublings: u32) -> Result<BigRational> {
    let mut r = BigRational::from_integer(2.into());
    for _ in 0..max_doublings {
        if let Ok(p) = sail_patch(g, cone, &r) {
            let ok = p.certified().any(|v| match unit {
                None => true,
                Some(u) => p.is_certified_vertex(&u.mul_vec(&v.coords)),
            });
            if ok {
                return Ok(r);
            }
        }
        r = &r * BigRational::from_integer(2.into());
    }
    Err(Error::EmptyPatch)
}
