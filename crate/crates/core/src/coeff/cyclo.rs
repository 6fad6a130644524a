use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::laurent::{write_q_polynomial, LaurentPoly};
use crate::error::{Error, Result};

/// The cyclotomic polynomial `phi_ell(q)` for odd `ell`, together with the
/// residues of `q^0, ..., q^(ell-1)` modulo it.
#[derive(Clone, PartialEq, Eq)]
pub struct CyclotomicModulus {
    ell: u32,
    /// Dense ascending coefficients, monic, length `deg + 1`.
    phi: Vec<BigInt>,
    powers: Vec<Vec<BigInt>>,
}

impl fmt::Debug for CyclotomicModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CyclotomicModulus")
            .field("ell", &self.ell)
            .field("phi", &self.phi)
            .finish()
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic polynomial; `None` if the remainder is nonzero.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Option<Vec<BigInt>> {
    let d = den.len() - 1;
    if num.len() < den.len() {
        return num.iter().all(Zero::is_zero).then(Vec::new);
    }
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - d];
    for i in (d..num.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - d] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            rem[i - d + j] -= &c * dj;
        }
    }
    rem[..d].iter().all(Zero::is_zero).then_some(quot)
}

fn check_ell(ell: i64) -> Result<u32> {
    if ell < 1 || ell % 2 == 0 {
        return Err(Error::Parameter(format!(
            "root order must be odd and positive, got {ell}"
        )));
    }
    u32::try_from(ell).map_err(|_| Error::Parameter(format!("root order {ell} too large")))
}

/// Dense coefficients of `phi_ell`, via `(q^ell - 1) / prod_{d | ell, d < ell} phi_d`.
fn phi_coefficients(ell: u32) -> Vec<BigInt> {
    let mut num = vec![BigInt::zero(); ell as usize + 1];
    num[0] = -BigInt::one();
    num[ell as usize] = BigInt::one();
    let mut den = vec![BigInt::one()];
    for d in (1..ell).filter(|d| ell.is_multiple_of(*d)) {
        den = poly_mul(&den, &phi_coefficients(d));
    }
    poly_div_exact(&num, &den).expect("cyclotomic division is exact")
}

/// Constructs `phi_ell` for odd positive `ell`.
pub fn cyclotomic(ell: i64) -> Result<Arc<CyclotomicModulus>> {
    let ell = check_ell(ell)?;
    let phi = phi_coefficients(ell);
    let mut m = CyclotomicModulus {
        ell,
        phi,
        powers: vec![],
    };
    let mut powers = Vec::with_capacity(ell as usize);
    for k in 0..ell as usize {
        let mut dense = vec![BigInt::zero(); k + 1];
        dense[k] = BigInt::one();
        powers.push(m.reduce_dense(dense));
    }
    m.powers = powers;
    Ok(Arc::new(m))
}

impl CyclotomicModulus {
    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// Ascending coefficients of `phi_ell`.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.phi
    }

    pub fn as_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.phi
                .iter()
                .enumerate()
                .map(|(k, c)| (k as i64, c.clone())),
        )
    }

    fn reduce_dense(&self, mut a: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        for i in (d..a.len()).rev() {
            let c = std::mem::take(&mut a[i]);
            if c.is_zero() {
                continue;
            }
            for j in 0..d {
                a[i - d + j] -= &c * &self.phi[j];
            }
        }
        a.resize(d, BigInt::zero());
        a
    }
}

/// Element of `Z_eps = Z[q] / (phi_ell(q))`, stored as the dense residue of
/// degree below `deg(phi_ell)`.
#[derive(Clone)]
pub struct CycloElem {
    residue: Vec<BigInt>,
    modulus: Arc<CyclotomicModulus>,
}

impl PartialEq for CycloElem {
    fn eq(&self, other: &Self) -> bool {
        self.modulus.ell == other.modulus.ell && self.residue == other.residue
    }
}

impl Eq for CycloElem {}

impl Hash for CycloElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.modulus.ell.hash(state);
        self.residue.hash(state);
    }
}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElem[ell={}]({self})", self.modulus.ell)
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_q_polynomial(
            f,
            self.residue.iter().enumerate().map(|(k, c)| (k as i64, c)),
        )
    }
}

/// Canonical residue of `p` in `Z_eps`. Exponents are first folded into
/// `[0, ell)` using `eps^ell = 1`.
pub fn reduce_mod(p: &LaurentPoly, m: &Arc<CyclotomicModulus>) -> CycloElem {
    let ell = m.ell as i64;
    let mut dense = vec![BigInt::zero(); m.ell as usize];
    for (k, c) in p.terms() {
        dense[k.rem_euclid(ell) as usize] += c;
    }
    CycloElem {
        residue: m.reduce_dense(dense),
        modulus: Arc::clone(m),
    }
}

impl CycloElem {
    pub fn zero(m: &Arc<CyclotomicModulus>) -> Self {
        Self {
            residue: vec![BigInt::zero(); m.degree()],
            modulus: Arc::clone(m),
        }
    }

    pub fn from_int(m: &Arc<CyclotomicModulus>, v: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(m);
        z.residue[0] = v.into();
        z
    }

    /// `eps^k`
    pub fn eps_pow(m: &Arc<CyclotomicModulus>, k: i64) -> Self {
        Self {
            residue: m.powers[k.rem_euclid(m.ell as i64) as usize].clone(),
            modulus: Arc::clone(m),
        }
    }

    pub fn modulus(&self) -> &Arc<CyclotomicModulus> {
        &self.modulus
    }

    pub fn residue(&self) -> &[BigInt] {
        &self.residue
    }

    pub fn is_zero(&self) -> bool {
        self.residue.iter().all(Zero::is_zero)
    }

    pub fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.residue
                .iter()
                .enumerate()
                .map(|(k, c)| (k as i64, c.clone())),
        )
    }

    pub fn add_assign_ref(&mut self, other: &CycloElem) {
        for (a, b) in self.residue.iter_mut().zip(&other.residue) {
            *a += b;
        }
    }

    /// Returns `(sign, k)` with `0 <= k < ell` when `self = sign * eps^k`.
    pub fn as_signed_eps_power(&self) -> Option<(i8, u32)> {
        let neg: Vec<BigInt> = self.residue.iter().map(|c| -c).collect();
        for (k, p) in self.modulus.powers.iter().enumerate() {
            if *p == self.residue {
                return Some((1, k as u32));
            }
            if *p == neg {
                return Some((-1, k as u32));
            }
        }
        None
    }

    /// Inverse of a signed power of `eps`; other units are not recognised.
    pub fn unit_inverse(&self) -> Option<CycloElem> {
        let (sign, k) = self.as_signed_eps_power()?;
        let inv = CycloElem::eps_pow(&self.modulus, -(k as i64));
        Some(if sign < 0 { -&inv } else { inv })
    }

    /// Integer value if the residue is a constant.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.residue[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.residue[0])
    }

    pub fn is_one(&self) -> bool {
        self.as_integer().is_some_and(|c| c.is_one())
    }

    pub fn is_negative_leading(&self) -> bool {
        self.residue
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_negative())
    }
}

impl Add for &CycloElem {
    type Output = CycloElem;
    fn add(self, rhs: &CycloElem) -> CycloElem {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &CycloElem {
    type Output = CycloElem;
    fn sub(self, rhs: &CycloElem) -> CycloElem {
        self + &(-rhs)
    }
}

impl Neg for &CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        CycloElem {
            residue: self.residue.iter().map(|c| -c).collect(),
            modulus: Arc::clone(&self.modulus),
        }
    }
}

impl Mul for &CycloElem {
    type Output = CycloElem;
    fn mul(self, rhs: &CycloElem) -> CycloElem {
        debug_assert_eq!(self.modulus.ell, rhs.modulus.ell);
        CycloElem {
            residue: self
                .modulus
                .reduce_dense(poly_mul(&self.residue, &rhs.residue)),
            modulus: Arc::clone(&self.modulus),
        }
    }
}
