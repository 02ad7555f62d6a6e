use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::{FieldElement, NumberField};
use crate::error::{Error, Result};
use crate::exactint::{hnf_rows, IntMatrix, RatMatrix};

/// Full-rank Z-module inside a number field, stored canonically as
/// `(d, H)`: `d` is the least common denominator of all coordinates and `H`
/// the row HNF of the scaled coordinate lattice.
#[derive(Clone, Debug)]
pub struct FullModule {
    field: Arc<NumberField>,
    basis: Vec<FieldElement>,
    denom: BigInt,
    hnf: IntMatrix,
}

impl PartialEq for FullModule {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.denom == other.denom && self.hnf == other.hnf
    }
}

impl Eq for FullModule {}

impl FullModule {
    pub fn from_basis(elems: &[FieldElement]) -> Result<Self> {
        let Some(first) = elems.first() else {
            return Err(Error::RankDeficient);
        };
        let field = first.field().clone();
        let n = field.degree();
        if elems.len() != n {
            return Err(Error::DimensionMismatch(format!("expected {n} basis elements, got {}", elems.len())));
        }
        let m = RatMatrix::from_rows(elems.iter().map(|e| e.coords().to_vec()).collect())?;
        if m.det().is_zero() {
            return Err(Error::RankDeficient);
        }
        let denom = m.common_denominator();
        let rows: Vec<Vec<BigInt>> =
            m.rows().iter().map(|r| r.iter().map(|x| (x * &denom).to_integer()).collect()).collect();
        let hnf = IntMatrix::from_rows(hnf_rows(&rows)?)?;
        Ok(FullModule { field, basis: elems.to_vec(), denom, hnf })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// The basis the module was built from.
    pub fn basis(&self) -> &[FieldElement] {
        &self.basis
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    pub fn hnf(&self) -> &IntMatrix {
        &self.hnf
    }

    /// Canonical basis read off the HNF rows.
    pub fn canonical_basis(&self) -> Vec<FieldElement> {
        self.hnf
            .rows()
            .into_iter()
            .map(|r| {
                let coords = r.into_iter().map(|x| BigRational::new(x, self.denom.clone())).collect();
                FieldElement::new(&self.field, coords).expect("degree matches")
            })
            .collect()
    }

    fn basis_matrix(&self) -> RatMatrix {
        RatMatrix::from_rows(self.basis.iter().map(|e| e.coords().to_vec()).collect()).expect("square")
    }

    /// Coordinates of `x` in the construction basis.
    pub fn coordinates(&self, x: &FieldElement) -> Vec<BigRational> {
        let inv = self.basis_matrix().transpose().inverse().expect("full rank");
        inv.mul_vec(x.coords())
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.coordinates(x).iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, e: &FieldElement) -> Result<Self> {
        let b: Vec<FieldElement> = self.basis.iter().map(|x| x.mul(e)).collect();
        Self::from_basis(&b)
    }

    /// Image under the field endomorphism `θ ↦ g`.
    pub fn map_automorphism(&self, g: &FieldElement) -> Result<Self> {
        let b: Vec<FieldElement> = self.basis.iter().map(|x| x.compose(g)).collect();
        Self::from_basis(&b)
    }

    pub fn is_unit(&self, e: &FieldElement) -> bool {
        !e.is_zero() && self.scale(e).is_ok_and(|m| m == *self)
    }

    /// `(self : other) = {x : x·other ⊆ self}`.
    pub fn colon(&self, other: &FullModule) -> Result<Self> {
        let n = self.field.degree();
        let b_inv = self.basis_matrix().inverse()?;
        // x·ν ∈ self  ⇔  coords(x)·T_ν·B⁻¹ ∈ Z^n, with T_ν the transposed multiplication matrix
        let mut cols: Vec<Vec<BigRational>> = Vec::new();
        for nu in &other.basis {
            let l = nu.mult_matrix().transpose().mul(&b_inv);
            for j in 0..n {
                cols.push((0..n).map(|i| l.get(i, j).clone()).collect());
            }
        }
        let d = cols.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let int_cols: Vec<Vec<BigInt>> =
            cols.iter().map(|c| c.iter().map(|x| (x * &d).to_integer()).collect()).collect();
        let r = hnf_rows(&int_cols)?;
        if r.len() != n {
            return Err(Error::RankDeficient);
        }
        let r = IntMatrix::from_rows(r)?;
        // dual lattice: rows of d·(Rᵀ)⁻¹
        let w = r.transpose().inverse_rat()?;
        let dq = BigRational::from_integer(d);
        let elems: Vec<FieldElement> = w
            .rows()
            .into_iter()
            .map(|row| FieldElement::new(&self.field, row.into_iter().map(|x| x * &dq).collect()))
            .collect::<Result<_>>()?;
        Self::from_basis(&elems)
    }

    pub fn multiplier_ring(&self) -> Result<Self> {
        self.colon(self)
    }
}

pub fn module_from_basis(elems: &[FieldElement]) -> Result<FullModule> {
    FullModule::from_basis(elems)
}

pub fn is_unit_of_module(e: &FieldElement, m: &FullModule) -> bool {
    m.is_unit(e)
}

pub fn multiplier_ring(m: &FullModule) -> Result<FullModule> {
    m.multiplier_ring()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPolynomial;

    fn field() -> Arc<NumberField> {
        NumberField::new(&IntPolynomial::from_i64(&[1, -3, 0, 1]), 2).unwrap()
    }

    fn e(k: &Arc<NumberField>, c: &[i64]) -> FieldElement {
        FieldElement::from_i64(k, c)
    }

    #[test]
    fn module_equality_by_hnf() {
        let k = field();
        let power = module_from_basis(&[e(&k, &[1]), e(&k, &[0, 1]), e(&k, &[0, 0, 1])]).unwrap();
        let other = module_from_basis(&[e(&k, &[1]), e(&k, &[0, 1]), e(&k, &[-2, 0, 1])]).unwrap();
        assert_eq!(power, other);
        assert_eq!(
            module_from_basis(&[e(&k, &[1]), e(&k, &[0, 1]), e(&k, &[1, 1])]),
            Err(Error::RankDeficient)
        );
    }

    #[test]
    fn units_of_modules() {
        let k = field();
        let m = module_from_basis(&[e(&k, &[1]), e(&k, &[0, 1]), e(&k, &[0, 0, 1])]).unwrap();
        assert!(is_unit_of_module(&e(&k, &[0, 1]), &m));
        assert!(!is_unit_of_module(&e(&k, &[2]), &m));
        assert!(is_unit_of_module(&e(&k, &[-1]), &m));
    }

    #[test]
    fn multiplier_rings() {
        let k = field();
        let zt = module_from_basis(&[e(&k, &[1]), e(&k, &[0, 1]), e(&k, &[0, 0, 1])]).unwrap();
        assert_eq!(multiplier_ring(&zt).unwrap(), zt);
        let two = zt.scale(&e(&k, &[2])).unwrap();
        assert_eq!(multiplier_ring(&two).unwrap(), zt);

        let m = module_from_basis(&[e(&k, &[1]), e(&k, &[0, 2]), e(&k, &[0, 0, 1])]).unwrap();
        let o = multiplier_ring(&m).unwrap();
        assert!(o.contains(&e(&k, &[1])));
        let b = o.canonical_basis();
        for x in &b {
            for y in &b {
                assert!(o.contains(&x.mul(y)));
            }
            for y in m.basis() {
                assert!(m.contains(&x.mul(y)));
            }
        }
    }
}
