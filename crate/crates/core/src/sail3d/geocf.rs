use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algnum::{automorphisms, pow2_neg, FieldElement, FullModule, NumberField, RatInterval};
use crate::error::{Error, Result};
use crate::exactint::{is_hyperbolic, IntMatrix};

/// Sign pattern of the eigencoordinates: one of the `2ⁿ` open cones cut out
/// by the eigenplanes. Index `i` refers to the eigenline of embedding `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone(pub Vec<i8>);

impl Cone {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|s| s.abs() != 1) {
            return Err(Error::OnBoundary);
        }
        Ok(Cone(signs))
    }

    /// All `2ⁿ` cones, `+` before `-` in each position.
    pub fn all(n: usize) -> Vec<Cone> {
        (0..1usize << n)
            .map(|m| Cone((0..n).map(|i| if m >> (n - 1 - i) & 1 == 0 { 1 } else { -1 }).collect()))
            .collect()
    }

    pub fn antipode(&self) -> Cone {
        Cone(self.0.iter().map(|s| -s).collect())
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = self.0.iter().map(|&x| if x > 0 { "+" } else { "-" }).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Cone {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let signs = s
            .split(',')
            .enumerate()
            .map(|(i, t)| match t.trim() {
                "+" | "+1" | "1" => Ok(1),
                "-" | "-1" => Ok(-1),
                _ => Err(Error::parse(i, format!("bad sign {t:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Cone::new(signs)
    }
}

impl Serialize for Cone {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Cone {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// How a matrix acts on the eigenlines: `g·l_i = μ_i·l_{perm[i]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenAction {
    /// Index of the automorphism `τ` with `g·v ∝ τ(v)` in `automorphisms(field)`.
    pub automorphism: usize,
    pub perm: Vec<usize>,
    pub mu_signs: Vec<i8>,
}

impl EigenAction {
    pub fn apply(&self, c: &Cone) -> Cone {
        let mut out = vec![0; c.0.len()];
        for (i, &s) in c.0.iter().enumerate() {
            out[self.perm[i]] = s * self.mu_signs[i];
        }
        Cone(out)
    }
}

/// The algebraic geometric continued fraction of a hyperbolic 3×3 operator.
///
/// The field is `Q(λ)` for the designated eigenvalue `λ`; the eigenvector
/// `v = (1, α, β)` has coordinates in this field and `l_i = σ_i(v)`.
#[derive(Clone, Debug)]
pub struct GeoCF {
    a: IntMatrix,
    field: Arc<NumberField>,
    eigenvector: Vec<FieldElement>,
    /// `q_k` with eigencoordinate `c_i(x) = σ_i(Σ x_k q_k)`.
    coord_forms: Vec<FieldElement>,
    eigen_f64: Vec<Vec<f64>>,
    coord_f64: Vec<Vec<f64>>,
}

fn cross(u: &[FieldElement], w: &[FieldElement]) -> Vec<FieldElement> {
    vec![
        u[1].mul(&w[2]).sub(&u[2].mul(&w[1])),
        u[2].mul(&w[0]).sub(&u[0].mul(&w[2])),
        u[0].mul(&w[1]).sub(&u[1].mul(&w[0])),
    ]
}

/// Kernel vector of a rank-2 3×3 matrix given by rows.
fn kernel_rank2(rows: &[Vec<FieldElement>]) -> Vec<FieldElement> {
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let c = cross(&rows[i], &rows[j]);
        if c.iter().any(|x| !x.is_zero()) {
            return c;
        }
    }
    unreachable!("rank two")
}

impl GeoCF {
    /// Designated eigenvalue is the largest real root of the characteristic
    /// polynomial.
    pub fn from_operator(a: &IntMatrix) -> Result<Self> {
        Self::with_root(a, 2)
    }

    /// `root_index` picks the designated eigenvalue among the roots in
    /// ascending order.
    pub fn with_root(a: &IntMatrix, root_index: usize) -> Result<Self> {
        if a.dim() != 3 {
            return Err(Error::UnsupportedDimension(a.dim()));
        }
        if !is_hyperbolic(a)? {
            return Err(Error::NotHyperbolic);
        }
        let field = NumberField::new(&a.charpoly(), root_index)?;
        let theta = FieldElement::theta(&field);
        let shifted = |m: &IntMatrix| -> Vec<Vec<FieldElement>> {
            (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| {
                            let e = FieldElement::from_rational(&field, BigRational::from_integer(m.get(i, j).clone()));
                            if i == j {
                                e.sub(&theta)
                            } else {
                                e
                            }
                        })
                        .collect()
                })
                .collect()
        };
        let right = kernel_rank2(&shifted(a));
        if right[0].is_zero() {
            return Err(Error::FirstCoordinateZero);
        }
        let inv0 = right[0].inv()?;
        let eigenvector: Vec<FieldElement> = right.iter().map(|x| x.mul(&inv0)).collect();
        let left = kernel_rank2(&shifted(&a.transpose()));
        let pairing = (0..3).fold(FieldElement::zero(&field), |acc, k| acc.add(&left[k].mul(&eigenvector[k])));
        let pinv = pairing.inv()?;
        let coord_forms: Vec<FieldElement> = left.iter().map(|x| x.mul(&pinv)).collect();
        let eigen_f64 = eigenvector.iter().map(|x| x.embeddings_f64()).collect();
        let coord_f64 = (0..3).map(|i| coord_forms.iter().map(|q| q.embed_f64(i)).collect()).collect();
        Ok(GeoCF { a: a.clone(), field, eigenvector, coord_forms, eigen_f64, coord_f64 })
    }

    pub fn operator(&self) -> &IntMatrix {
        &self.a
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        3
    }

    /// `v = (1, α, β)` with `A v = λ v`.
    pub fn eigenvector(&self) -> &[FieldElement] {
        &self.eigenvector
    }

    pub fn eigenvalue(&self) -> FieldElement {
        FieldElement::theta(&self.field)
    }

    /// Intervals of width at most `width` around the coordinates of `l_i`.
    pub fn eigenvector_intervals(&self, i: usize, width: &BigRational) -> Vec<RatInterval> {
        self.eigenvector.iter().map(|x| x.embed(i, width)).collect()
    }

    /// `f64` approximation of `σ_i(v_k)`, indexed `[k][i]`.
    pub fn eigen_f64(&self) -> &[Vec<f64>] {
        &self.eigen_f64
    }

    /// `f64` approximation of the eigencoordinate map, indexed `[i][k]`.
    pub fn coord_f64(&self) -> &[Vec<f64>] {
        &self.coord_f64
    }

    /// The field element `q(x)` whose embeddings are the eigencoordinates of `x`.
    pub fn coordinate_element(&self, x: &[BigInt]) -> FieldElement {
        (0..3).fold(FieldElement::zero(&self.field), |acc, k| {
            acc.add(&self.coord_forms[k].scale(&BigRational::from_integer(x[k].clone())))
        })
    }

    /// Value of a covector on `l_i`-direction as the field element `n·v`.
    pub fn pairing(&self, n: &[BigInt]) -> FieldElement {
        (0..3).fold(FieldElement::zero(&self.field), |acc, k| {
            acc.add(&self.eigenvector[k].scale(&BigRational::from_integer(n[k].clone())))
        })
    }

    /// Exact cone of a lattice point.
    pub fn locate_cone(&self, x: &[BigInt]) -> Result<Cone> {
        let q = self.coordinate_element(x);
        let signs = (0..3)
            .map(|i| match q.sign_at(i) {
                Ordering::Greater => Ok(1),
                Ordering::Less => Ok(-1),
                Ordering::Equal => Err(Error::OnBoundary),
            })
            .collect::<Result<Vec<i8>>>()?;
        Ok(Cone(signs))
    }

    /// Cone of a real point given by rational intervals; `OnBoundary` when
    /// some eigencoordinate interval still straddles zero at `2^-bits`.
    pub fn locate_cone_interval(&self, p: &[RatInterval], bits: u32) -> Result<Cone> {
        let w = pow2_neg(bits);
        let mut signs = Vec::with_capacity(3);
        for i in 0..3 {
            let mut acc = RatInterval::point(BigRational::zero());
            for (k, pk) in p.iter().enumerate() {
                acc = acc.add(&self.coord_forms[k].embed(i, &w).mul(pk));
            }
            match acc.sign() {
                Some(Ordering::Greater) => signs.push(1),
                Some(Ordering::Less) => signs.push(-1),
                _ => return Err(Error::OnBoundary),
            }
        }
        Ok(Cone(signs))
    }

    /// Action of `g` on the eigenlines when `g v ∝ τ(v)` for some automorphism
    /// `τ`; `None` when `g` does not permute the eigenlines.
    pub fn eigen_action(&self, g: &IntMatrix) -> Option<EigenAction> {
        let w: Vec<FieldElement> = (0..3)
            .map(|r| {
                (0..3).fold(FieldElement::zero(&self.field), |acc, k| {
                    acc.add(&self.eigenvector[k].scale(&BigRational::from_integer(g.get(r, k).clone())))
                })
            })
            .collect();
        if w[0].is_zero() {
            return None;
        }
        for (idx, tau) in automorphisms(&self.field).iter().enumerate() {
            let tv: Vec<FieldElement> = self.eigenvector.iter().map(|x| x.compose(tau)).collect();
            if (1..3).all(|k| w[k] == w[0].mul(&tv[k])) {
                let perm = tau.root_permutation().expect("automorphism permutes roots");
                let mu_signs =
                    (0..3).map(|i| if w[0].sign_at(i) == Ordering::Greater { 1 } else { -1 }).collect();
                return Some(EigenAction { automorphism: idx, perm, mu_signs });
            }
        }
        None
    }
}

/// `B` with `B (1, α₁, α₂)ᵀ = ε (1, α₁, α₂)ᵀ`: row `k` holds the coordinates of
/// `ε·b_k` in the basis.
pub fn geocf_from_unit(basis: &[FieldElement], eps: &FieldElement) -> Result<IntMatrix> {
    if !basis.first().is_some_and(FieldElement::is_one) {
        return Err(Error::StructureViolation("basis must start with 1".into()));
    }
    let m = FullModule::from_basis(basis)?;
    let mut rows = Vec::with_capacity(basis.len());
    for b in basis {
        let c = m.coordinates(&b.mul(eps));
        if !c.iter().all(|x| x.is_integer()) {
            return Err(Error::NotAUnit);
        }
        rows.push(c.into_iter().map(|x| x.to_integer()).collect());
    }
    let b = IntMatrix::from_rows(rows)?;
    if !b.det().abs().is_one() {
        return Err(Error::NotAUnit);
    }
    Ok(b)
}

/// Eigenvector, field and module view of a GeoCF.
pub fn geocf_from_operator(a: &IntMatrix) -> Result<GeoCF> {
    GeoCF::from_operator(a)
}
