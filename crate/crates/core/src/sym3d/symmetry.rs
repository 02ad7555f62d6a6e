use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cf1d::SymmetryKind;
use crate::error::{Error, Result};
use crate::exactint::{integer_kernel, primitive, IntMatrix};
use crate::json;
use crate::sail3d::{Cone, GeoCF};

/// Rational structure of a palindromic symmetry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Order3Data {
    pub g_plus: IntMatrix,
    pub g_minus: IntMatrix,
    /// `s` with `g³ = s·I`.
    #[serde(with = "json::int_str")]
    pub g_cubed_sign: i8,
    /// Primitive generator of `ker(G₊ - I)`.
    #[serde(with = "json::bigint_vec")]
    pub invariant_line: Vec<BigInt>,
    /// Primitive covector `n` with `nG₊ = n` and `⟨n, line⟩ > 0`.
    #[serde(with = "json::bigint_vec")]
    pub invariant_plane_normal: Vec<BigInt>,
    pub fixed_cone: Cone,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub g: IntMatrix,
    pub kind: SymmetryKind,
    /// `g(l_i) = l_{sigma[i-1]}`, 1-based.
    #[serde(with = "json::int_str_vec")]
    pub sigma: Vec<usize>,
    #[serde(with = "json::int_str")]
    pub det: i8,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub order3: Option<Order3Data>,
}

/// Images of the eight cones under `G₊` and `G₋`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeOrbits {
    pub fixed_cone: Cone,
    pub g_plus_fixes: bool,
    pub g_minus_to_antipode: bool,
    /// `G₋`-orbit of the first cone outside `±C`.
    pub orbit: Vec<Cone>,
    /// The six cones outside `±C` form this single orbit.
    pub single_orbit: bool,
}

impl ConeOrbits {
    pub fn holds(&self) -> bool {
        self.g_plus_fixes && self.g_minus_to_antipode && self.single_orbit
    }
}

fn det_sign(g: &IntMatrix) -> Result<i8> {
    let d = g.det();
    if d.is_one() {
        Ok(1)
    } else if (-&d).is_one() {
        Ok(-1)
    } else {
        Err(Error::StructureViolation(format!("det {d} is not ±1")))
    }
}

/// Exact symmetry test against a precomputed GeoCF.
pub fn symmetry_report(g: &IntMatrix, geo: &GeoCF) -> Result<SymmetryReport> {
    let a = geo.operator();
    if g.dim() != 3 {
        return Err(Error::UnsupportedDimension(g.dim()));
    }
    let det = det_sign(g)?;
    let ginv = g.inverse_unimodular().expect("det ±1");
    let c = g.mul(a).mul(&ginv);
    let comm = c.commutator(a);
    if !comm.entries().iter().all(Zero::is_zero) {
        return Err(Error::NotASymmetry { commutator: comm.to_string() });
    }
    let kind = if g.commutes_with(a) { SymmetryKind::Dirichlet } else { SymmetryKind::Palindromic };
    let sigma = match geo.eigen_action(g) {
        Some(act) => act.perm.iter().map(|p| p + 1).collect(),
        None if kind == SymmetryKind::Dirichlet => vec![1, 2, 3],
        None => return Err(Error::NonGaloisObstruction),
    };
    let order3 = match kind {
        SymmetryKind::Dirichlet => None,
        SymmetryKind::Palindromic => Some(order3_with(g, geo)?),
    };
    Ok(SymmetryReport { g: g.clone(), kind, sigma, det, order3 })
}

/// `Ok` with the report when `g` maps the eigenlines of `a` to eigenlines.
pub fn is_cf_symmetry(g: &IntMatrix, a: &IntMatrix) -> Result<SymmetryReport> {
    symmetry_report(g, &GeoCF::from_operator(a)?)
}

/// `(G₊, G₋) = ((det G)·G, -(det G)·G)`.
pub fn g_plus_minus(g: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let gp = if g.det().is_negative() { g.neg() } else { g.clone() };
    let gm = gp.neg();
    (gp, gm)
}

fn kernel_line(m: &IntMatrix) -> Option<Vec<BigInt>> {
    let k = integer_kernel(&m.rows(), 3);
    if k.len() != 1 {
        return None;
    }
    let mut v = primitive(&k[0]);
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        v = v.iter().map(|x| -x).collect();
    }
    Some(v)
}

pub fn order3_analysis(g: &IntMatrix, a: &IntMatrix) -> Result<Order3Data> {
    order3_with(g, &GeoCF::from_operator(a)?)
}

pub(crate) fn order3_with(g: &IntMatrix, geo: &GeoCF) -> Result<Order3Data> {
    let id = IntMatrix::identity(3);
    let cube = g.pow(3);
    let g_cubed_sign = if cube == id {
        1
    } else if cube == id.neg() {
        -1
    } else {
        return Err(Error::StructureViolation(format!("g³ = {cube} is not ±I")));
    };
    let plus = kernel_line(&g.sub(&id));
    let minus = kernel_line(&g.add(&id));
    let s: i8 = match (&plus, &minus) {
        (Some(_), None) => 1,
        (None, Some(_)) => -1,
        _ => return Err(Error::StructureViolation("expected exactly one of ker(g ∓ I) to be a line".into())),
    };
    if s != g_cubed_sign || s != det_sign(g)? {
        return Err(Error::StructureViolation("real eigenvalue, det and g³ disagree".into()));
    }
    let (g_plus, g_minus) = g_plus_minus(g);
    let line = plus.or(minus).expect("one kernel");
    let mut normal = kernel_line(&g_plus.transpose().sub(&id))
        .ok_or_else(|| Error::StructureViolation("no invariant plane".into()))?;
    let pairing: BigInt = normal.iter().zip(&line).map(|(a, b)| a * b).sum();
    if pairing.is_zero() {
        return Err(Error::StructureViolation("invariant plane contains the invariant line".into()));
    }
    if pairing.is_negative() {
        normal = normal.iter().map(|x| -x).collect();
    }
    let fixed_cone = geo.locate_cone(&line)?;
    Ok(Order3Data {
        g_plus,
        g_minus,
        g_cubed_sign,
        invariant_line: line,
        invariant_plane_normal: normal,
        fixed_cone,
    })
}

/// Action of `G₊` and `G₋` on the cones of `CF(a)`.
pub fn cone_orbits(g: &IntMatrix, geo: &GeoCF) -> Result<ConeOrbits> {
    let o = order3_with(g, geo)?;
    let plus = geo.eigen_action(&o.g_plus).ok_or(Error::NonGaloisObstruction)?;
    let minus = geo.eigen_action(&o.g_minus).ok_or(Error::NonGaloisObstruction)?;
    let c = o.fixed_cone.clone();
    let anti = c.antipode();
    let start = Cone::all(3).into_iter().find(|k| *k != c && *k != anti).expect("eight cones");
    let mut orbit = vec![start.clone()];
    let mut cur = minus.apply(&start);
    while cur != start && orbit.len() <= 8 {
        orbit.push(cur.clone());
        cur = minus.apply(&cur);
    }
    let single_orbit = orbit.len() == 6 && Cone::all(3).iter().filter(|k| **k != c && **k != anti).all(|k| orbit.contains(k));
    Ok(ConeOrbits {
        g_plus_fixes: plus.apply(&c) == c,
        g_minus_to_antipode: minus.apply(&c) == anti,
        fixed_cone: c,
        orbit,
        single_orbit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym3d::canonical_matrix;

    fn b_example() -> IntMatrix {
        IntMatrix::from_i64([[0, 1, 0], [2, 0, 1], [-1, 1, 0]])
    }

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn f1_is_palindromic_for_b_example() {
        let r = is_cf_symmetry(&canonical_matrix(1), &b_example()).unwrap();
        assert_eq!(r.kind, SymmetryKind::Palindromic);
        let mut s = r.sigma.clone();
        assert!(s.iter().enumerate().all(|(i, &p)| p != i + 1));
        s.sort();
        assert_eq!(s, vec![1, 2, 3]);
        let o = r.order3.unwrap();
        assert_eq!(o.g_cubed_sign, 1);
    }

    #[test]
    fn operator_is_dirichlet_and_shear_is_not_a_symmetry() {
        let a = b_example();
        let r = is_cf_symmetry(&a, &a).unwrap();
        assert_eq!(r.kind, SymmetryKind::Dirichlet);
        assert_eq!(r.sigma, vec![1, 2, 3]);
        let shear = IntMatrix::from_i64([[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        assert!(matches!(is_cf_symmetry(&shear, &a), Err(Error::NotASymmetry { .. })));
    }

    #[test]
    fn canonical_matrices_have_order_three() {
        let id = IntMatrix::identity(3);
        for i in 1..=4 {
            let f = canonical_matrix(i);
            assert_eq!(f.pow(3), id, "F{i}");
        }
        let f3 = canonical_matrix(3);
        assert_eq!(kernel_line(&f3.sub(&id)).unwrap(), v(&[1, 1, 1]));
        assert_eq!(kernel_line(&f3.transpose().sub(&id)).unwrap(), v(&[1, 1, 1]));
        assert_eq!(kernel_line(&canonical_matrix(1).sub(&id)).unwrap(), v(&[1, 0, 0]));
    }

    #[test]
    fn g_plus_minus_normalizes_determinant() {
        let f = canonical_matrix(1);
        assert_eq!(g_plus_minus(&f).0, f);
        assert_eq!(g_plus_minus(&f.neg()).0, f);
        assert_eq!(g_plus_minus(&f.neg()).1, f.neg());
    }

    #[test]
    fn six_cones_form_one_orbit() {
        let geo = GeoCF::from_operator(&b_example()).unwrap();
        let o = cone_orbits(&canonical_matrix(1), &geo).unwrap();
        assert!(o.holds(), "{o:?}");
    }
}
