//! Exact coefficient rings: `Z_q = Z[q, q^-1]` and its cyclotomic quotients
//! `Z_eps = Z_q / (phi_ell(q))`.

mod cyclo;
mod laurent;

use std::fmt;
use std::sync::Arc;

pub use cyclo::{cyclotomic, reduce_mod, CycloElem, CyclotomicModulus};
pub use laurent::LaurentPoly;

/// A commutative coefficient ring containing an invertible `q`.
///
/// The engine is generic over this trait; elements do not carry a ring
/// context, so constants are produced through the ring value.
#[allow(clippy::wrong_self_convention)]
pub trait CoeffRing: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn from_int(&self, v: i64) -> Self::Elem;
    fn q_pow(&self, k: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem);
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Inverse of `±q^k`; `None` for anything else.
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Image of a `Z_q` scalar.
    fn from_laurent(&self, p: &LaurentPoly) -> Self::Elem;
    /// Root order when this is `Z_eps`.
    fn ell(&self) -> Option<u32>;
    fn is_one(&self, a: &Self::Elem) -> bool;

    fn one(&self) -> Self::Elem {
        self.from_int(1)
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut out = a.clone();
        self.add_assign(&mut out, &self.neg(b));
        out
    }

    /// `true` when the printed form should be preceded by a minus sign
    /// (single-term negative values).
    fn is_negative_monomial(&self, a: &Self::Elem) -> bool;
}

/// The generic ring `Z[q, q^-1]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LaurentRing;

impl CoeffRing for LaurentRing {
    type Elem = LaurentPoly;

    fn zero(&self) -> LaurentPoly {
        LaurentPoly::zero()
    }
    fn from_int(&self, v: i64) -> LaurentPoly {
        LaurentPoly::constant(v)
    }
    fn q_pow(&self, k: i64) -> LaurentPoly {
        LaurentPoly::q_pow(k)
    }
    fn is_zero(&self, a: &LaurentPoly) -> bool {
        a.is_zero()
    }
    fn add_assign(&self, a: &mut LaurentPoly, b: &LaurentPoly) {
        a.add_assign_ref(b);
    }
    fn mul(&self, a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
        a * b
    }
    fn neg(&self, a: &LaurentPoly) -> LaurentPoly {
        -a
    }
    fn unit_inverse(&self, a: &LaurentPoly) -> Option<LaurentPoly> {
        let (s, k) = a.as_signed_q_power()?;
        Some(LaurentPoly::monomial(s as i64, -k))
    }
    fn from_laurent(&self, p: &LaurentPoly) -> LaurentPoly {
        p.clone()
    }
    fn ell(&self) -> Option<u32> {
        None
    }
    fn is_one(&self, a: &LaurentPoly) -> bool {
        a.is_one()
    }
    fn is_negative_monomial(&self, a: &LaurentPoly) -> bool {
        a.num_terms() == 1 && a.terms().all(|(_, c)| c < &0.into())
    }
}

/// The specialised ring `Z_eps` for a fixed odd root order.
#[derive(Clone, Debug)]
pub struct CycloRing {
    modulus: Arc<CyclotomicModulus>,
}

impl CycloRing {
    pub fn new(ell: i64) -> crate::Result<Self> {
        Ok(Self {
            modulus: cyclotomic(ell)?,
        })
    }

    pub fn modulus(&self) -> &Arc<CyclotomicModulus> {
        &self.modulus
    }

    /// `eps^k`
    pub fn eps_pow(&self, k: i64) -> CycloElem {
        CycloElem::eps_pow(&self.modulus, k)
    }
}

impl PartialEq for CycloRing {
    fn eq(&self, other: &Self) -> bool {
        self.modulus.ell() == other.modulus.ell()
    }
}

impl CoeffRing for CycloRing {
    type Elem = CycloElem;

    fn zero(&self) -> CycloElem {
        CycloElem::zero(&self.modulus)
    }
    fn from_int(&self, v: i64) -> CycloElem {
        CycloElem::from_int(&self.modulus, v)
    }
    fn q_pow(&self, k: i64) -> CycloElem {
        CycloElem::eps_pow(&self.modulus, k)
    }
    fn is_zero(&self, a: &CycloElem) -> bool {
        a.is_zero()
    }
    fn add_assign(&self, a: &mut CycloElem, b: &CycloElem) {
        a.add_assign_ref(b);
    }
    fn mul(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        a * b
    }
    fn neg(&self, a: &CycloElem) -> CycloElem {
        -a
    }
    fn unit_inverse(&self, a: &CycloElem) -> Option<CycloElem> {
        a.unit_inverse()
    }
    fn from_laurent(&self, p: &LaurentPoly) -> CycloElem {
        reduce_mod(p, &self.modulus)
    }
    fn ell(&self) -> Option<u32> {
        Some(self.modulus.ell())
    }
    fn is_one(&self, a: &CycloElem) -> bool {
        a.is_one()
    }
    fn is_negative_monomial(&self, a: &CycloElem) -> bool {
        a.residue()
            .iter()
            .filter(|c| !num_traits::Zero::is_zero(*c))
            .count()
            == 1
            && a.is_negative_leading()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn laurent() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-4i64..5, -6i64..7), 0..5).prop_map(|ts| {
            LaurentPoly::from_terms(ts.into_iter().map(|(k, c)| (k, BigInt::from(c))))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn reduction_is_a_homomorphism(a in laurent(), b in laurent(), ell in prop::sample::select(vec![1i64, 3, 5, 7, 9, 15])) {
            let m = cyclotomic(ell).unwrap();
            let ra = reduce_mod(&a, &m);
            let rb = reduce_mod(&b, &m);
            prop_assert_eq!(reduce_mod(&(&a * &b), &m), &ra * &rb);
            prop_assert_eq!(reduce_mod(&(&a + &b), &m), &ra + &rb);
            prop_assert!(reduce_mod(&LaurentPoly::q_pow(ell), &m).is_one());
        }

        #[test]
        fn evaluation_at_one_commutes(a in laurent(), b in laurent()) {
            prop_assert_eq!((&a * &b).specialize_at_one(), a.specialize_at_one() * b.specialize_at_one());
            prop_assert_eq!((&a + &b).specialize_at_one(), a.specialize_at_one() + b.specialize_at_one());
        }
    }

    #[test]
    fn ring_constants_agree() {
        let z = CycloRing::new(3).unwrap();
        assert_eq!(z.from_laurent(&LaurentPoly::q_pow(-1)), z.q_pow(2));
        let inv = z.unit_inverse(&z.neg(&z.q_pow(1))).unwrap();
        assert_eq!(inv, z.neg(&z.q_pow(2)));
        assert_eq!(
            LaurentRing.unit_inverse(&LaurentPoly::monomial(-1, 3)),
            Some(LaurentPoly::monomial(-1, -3))
        );
        assert!(LaurentRing
            .unit_inverse(&LaurentPoly::q_minus_q_inv())
            .is_none());
    }
}
