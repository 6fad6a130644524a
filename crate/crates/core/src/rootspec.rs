//! Specialisation at an odd root of unity, the quantum Frobenius embedding of
//! the classical coordinate ring, and expansions over it.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::coeff::{CoeffRing, CycloElem, CycloRing, LaurentPoly};
use crate::detloc::Permutation;
use crate::error::{Error, Result};
use crate::monomial::{GenIndex, GenOrder, Monomial};
use crate::report::{CheckCase, CheckReport};
use crate::rewrite::{accumulate, write_combination, Algebra, Element, Variant};

/// Reduces every coefficient modulo `phi_ell`; keys are unchanged.
pub fn specialize(e: &Element<LaurentPoly>, ring: &CycloRing) -> Element<CycloElem> {
    e.map_coefficients(|c| {
        let r = ring.from_laurent(c);
        (!r.is_zero()).then_some(r)
    })
}

/// `prod tbar[i,j]^N[i,j] * Dbar^z` in the commutative ring `O(G)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassicalMonomial(pub Monomial);

impl ClassicalMonomial {
    pub fn one(n: usize) -> Self {
        Self(Monomial::one(n))
    }

    pub fn exps(&self) -> &[u32] {
        &self.0.exps
    }

    pub fn dpower(&self) -> i64 {
        self.0.dpower
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.mul_commutative(&other.0))
    }
}

impl fmt::Display for ClassicalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0.n();
        let mut parts = Vec::new();
        for (g, &e) in self.0.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let idx = GenIndex::from_id(g as u8, n);
            parts.push(match e {
                1 => format!("tbar[{},{}]", idx.i, idx.j),
                _ => format!("tbar[{},{}]^{e}", idx.i, idx.j),
            });
        }
        match self.0.dpower {
            0 => {}
            1 => parts.push("Dbar".into()),
            z => parts.push(format!("Dbar^{z}")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// A `Z_eps`-combination of classical monomials, kept in canonical form by
/// [`ClassicalRing`].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ClassicalPoly {
    terms: BTreeMap<ClassicalMonomial, CycloElem>,
}

impl ClassicalPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ClassicalMonomial, &CycloElem)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &ClassicalMonomial) -> Option<&CycloElem> {
        self.terms.get(m)
    }

    /// The scalar value when the polynomial is a constant.
    pub fn as_scalar(&self) -> Option<CycloElem> {
        match self.terms.len() {
            0 => None,
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }
}

/// Arithmetic in `O(M_n)` or `O(GL_n)` over `Z_eps`.
///
/// GL elements are stored with no monomial divisible by `tbar[1,1]...tbar[n,n]`,
/// using `tbar[1,1]...tbar[n,n] = Dbar - sum_{s != id} sgn(s) prod tbar[i,s(i)]`.
#[derive(Clone, Debug)]
pub struct ClassicalRing {
    n: usize,
    variant: Variant,
    ring: CycloRing,
    det_terms: Vec<(ClassicalMonomial, CycloElem)>,
}

impl ClassicalRing {
    pub fn new(n: usize, variant: Variant, ring: CycloRing) -> Result<Self> {
        if variant == Variant::SLn {
            return Err(Error::Unsupported(
                "classical expansions are provided for M_n and GL_n only".into(),
            ));
        }
        let det_terms = Permutation::all(n)
            .into_iter()
            .filter(|s| *s != Permutation::identity(n))
            .map(|s| {
                let word: Vec<u8> = (1..=n)
                    .map(|i| GenIndex::new(i, s.apply(i)).id(n))
                    .collect();
                let sign = if s.length() % 2 == 0 { -1 } else { 1 };
                (
                    ClassicalMonomial(Monomial::from_word(&word, n)),
                    ring.from_int(sign),
                )
            })
            .collect();
        Ok(Self {
            n,
            variant,
            ring,
            det_terms,
        })
    }

    pub fn ring(&self) -> &CycloRing {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    fn has_full_diagonal(&self, m: &ClassicalMonomial) -> bool {
        self.variant == Variant::GLn
            && (1..=self.n).all(|i| m.0.exps[GenIndex::new(i, i).id(self.n) as usize] > 0)
    }

    pub fn zero(&self) -> ClassicalPoly {
        ClassicalPoly::zero()
    }

    pub fn one(&self) -> ClassicalPoly {
        self.monomial(ClassicalMonomial::one(self.n), self.ring.one())
    }

    pub fn monomial(&self, m: ClassicalMonomial, c: CycloElem) -> ClassicalPoly {
        self.from_terms([(m, c)])
    }

    /// Sums the terms and brings the result to canonical form.
    pub fn from_terms(
        &self,
        terms: impl IntoIterator<Item = (ClassicalMonomial, CycloElem)>,
    ) -> ClassicalPoly {
        let mut work = BTreeMap::new();
        for (m, c) in terms {
            if self.variant == Variant::Mn && m.dpower() != 0 {
                panic!("Dbar in an M_n classical polynomial");
            }
            accumulate(&self.ring, &mut work, m, c);
        }
        let mut out = BTreeMap::new();
        while let Some((m, c)) = work.pop_last() {
            if !self.has_full_diagonal(&m) {
                accumulate(&self.ring, &mut out, m, c);
                continue;
            }
            let mut rest = m.clone();
            for i in 1..=self.n {
                rest.0.exps[GenIndex::new(i, i).id(self.n) as usize] -= 1;
            }
            let mut with_det = rest.clone();
            with_det.0.dpower += 1;
            accumulate(&self.ring, &mut work, with_det, c.clone());
            for (t, s) in &self.det_terms {
                accumulate(&self.ring, &mut work, rest.mul(t), self.ring.mul(&c, s));
            }
        }
        ClassicalPoly { terms: out }
    }

    pub fn add(&self, a: &ClassicalPoly, b: &ClassicalPoly) -> ClassicalPoly {
        let mut terms = a.terms.clone();
        for (m, c) in &b.terms {
            accumulate(&self.ring, &mut terms, m.clone(), c.clone());
        }
        ClassicalPoly { terms }
    }

    pub fn scale(&self, a: &ClassicalPoly, s: &CycloElem) -> ClassicalPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &a.terms {
            accumulate(&self.ring, &mut terms, m.clone(), self.ring.mul(c, s));
        }
        ClassicalPoly { terms }
    }

    pub fn mul(&self, a: &ClassicalPoly, b: &ClassicalPoly) -> ClassicalPoly {
        let mut terms = Vec::with_capacity(a.len() * b.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                terms.push((ma.mul(mb), self.ring.mul(ca, cb)));
            }
        }
        self.from_terms(terms)
    }

    pub fn format(&self, p: &ClassicalPoly) -> String {
        struct Show<'a>(&'a ClassicalRing, &'a ClassicalPoly);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_combination(
                    f,
                    &self.0.ring,
                    self.1
                        .terms
                        .iter()
                        .rev()
                        .map(|(m, c)| (c, (!m.is_one()).then(|| m.to_string()))),
                )
            }
        }
        Show(self, p).to_string()
    }
}

/// Coefficients of an element with respect to the residue basis: keys have
/// every exponent in `[0, ell)` and no `D` factor.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModuleExpansion {
    pub entries: BTreeMap<Monomial, ClassicalPoly>,
}

impl ModuleExpansion {
    pub fn get(&self, key: &Monomial) -> Option<&ClassicalPoly> {
        self.entries.get(key)
    }
}

/// Splits exponents by Euclidean division: `N = ell * a + r`.
pub fn split_exponents(m: &Monomial, ell: u32) -> (ClassicalMonomial, Monomial) {
    let mut a = Monomial::one(m.n());
    let mut r = Monomial::one(m.n());
    for (k, &e) in m.exps.iter().enumerate() {
        a.exps[k] = e / ell;
        r.exps[k] = e % ell;
    }
    (ClassicalMonomial(a), r)
}

/// All `ell^(n^2)` residue monomials, enumerated lazily in mixed-radix order
/// (the last generator varies fastest).
pub fn enumerate_basis(
    n: usize,
    ell: u32,
    variant: Variant,
) -> Result<impl Iterator<Item = Monomial>> {
    if variant == Variant::SLn {
        return Err(Error::Unsupported(
            "residue bases are provided for M_n and GL_n only".into(),
        ));
    }
    if ell == 0 {
        return Err(Error::Parameter("ell must be positive".into()));
    }
    let len = n * n;
    let mut next = Some(Monomial::one(n));
    Ok(std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        for k in (0..len).rev() {
            if succ.exps[k] + 1 < ell {
                succ.exps[k] += 1;
                next = Some(succ);
                break;
            }
            succ.exps[k] = 0;
        }
        Some(current)
    }))
}

/// Root-of-unity computations for a fixed `n`, `ell` and variant (`M_n` or `GL_n`).
#[derive(Clone, Debug)]
pub struct RootContext {
    alg: Algebra<CycloRing>,
    mn: Algebra<CycloRing>,
    classical: ClassicalRing,
    ell: u32,
}

impl RootContext {
    pub fn new(alg: Algebra<CycloRing>) -> Result<Self> {
        let ell = alg.ring().modulus().ell();
        let classical = ClassicalRing::new(alg.n(), alg.variant(), alg.ring().clone())?;
        let mn = alg.with_variant(Variant::Mn);
        Ok(Self {
            alg,
            mn,
            classical,
            ell,
        })
    }

    /// Row-major order, standard flavor.
    pub fn standard(n: usize, ell: i64, variant: Variant) -> Result<Self> {
        let config = crate::rewrite::AlgebraConfig::new(
            variant,
            GenOrder::row_major(n),
            crate::rewrite::Flavor::Standard,
        )?;
        Self::new(Algebra::new(config, CycloRing::new(ell)?))
    }

    pub fn algebra(&self) -> &Algebra<CycloRing> {
        &self.alg
    }

    pub fn classical(&self) -> &ClassicalRing {
        &self.classical
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn n(&self) -> usize {
        self.alg.n()
    }

    /// `tbar^a Dbar^z -> t^(ell a) D^(ell z)`, in normal form.
    pub fn frobenius_image(&self, c: &ClassicalMonomial) -> Element<CycloElem> {
        let ell = self.ell;
        let m = Monomial {
            exps: c.exps().iter().map(|e| e * ell).collect(),
            dpower: c.dpower() * ell as i64,
        };
        self.alg
            .normalize(&self.alg.term(m, self.alg.ring().one()))
            .expect("monomial of this algebra")
    }

    pub fn frobenius_image_poly(&self, p: &ClassicalPoly) -> Element<CycloElem> {
        let mut acc = self.alg.zero();
        for (m, c) in p.terms() {
            acc = self
                .alg
                .add(&acc, &self.alg.scale(&self.frobenius_image(m), c));
        }
        acc
    }

    /// `t[i,j]^ell t[h,k] - t[h,k] t[i,j]^ell` for all pairs, plus
    /// `D^ell - sum sgn(s) prod t[i,s(i)]^ell` in `M_n`.
    pub fn check_frobenius_central(&self) -> CheckReport {
        let n = self.n();
        let mn = &self.mn;
        let gens: Vec<GenIndex> = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| GenIndex::new(i, j)))
            .collect();
        let pairs: Vec<(GenIndex, GenIndex)> = gens
            .iter()
            .flat_map(|&a| gens.iter().map(move |&b| (a, b)))
            .collect();
        let ell = self.ell;
        let mut cases: Vec<CheckCase> = pairs
            .par_iter()
            .map(|&(a, b)| {
                let p = mn.pow(&mn.t(a.i, a.j), ell).expect("same algebra");
                let c = mn.commutator(&p, &mn.t(b.i, b.j)).expect("same algebra");
                CheckCase::zero_residual(format!("{a}^{ell} {b} - {b} {a}^{ell}"), mn.format(&c))
            })
            .collect();
        let det = mn.quantum_determinant();
        let det_pow = mn.pow(&det, ell).expect("same algebra");
        let mut classical_det = mn.zero();
        for s in Permutation::all(n) {
            let mut m = Monomial::one(n);
            for i in 1..=n {
                m.exps[GenIndex::new(i, s.apply(i)).id(n) as usize] = ell;
            }
            let sign = if s.length() % 2 == 0 { 1 } else { -1 };
            classical_det = mn.add(&classical_det, &mn.term(m, mn.ring().from_int(sign)));
        }
        cases.push(CheckCase::zero_residual(
            format!("D^{ell} - sum sgn(s) prod t[i,s(i)]^{ell}"),
            mn.format(&mn.sub(&det_pow, &classical_det)),
        ));
        CheckReport::new("frobenius", n, Some(ell)).with_cases(cases)
    }

    /// Coefficients over the Frobenius image.
    ///
    /// `M_n`: each ordered monomial `t^N` equals `Fr(tbar^a) t^r` with
    /// `N = ell a + r`. `GL_n`: a term `t^N D^z` with `z = ell a + r`,
    /// `0 <= r < ell`, is rewritten as `Fr(Dbar^a) * (t^N Dpoly^r)` and the
    /// `M_n` normal form of the second factor is split as above.
    pub fn module_expand(&self, e: &Element<CycloElem>) -> Result<ModuleExpansion> {
        if e.monomials().any(|m| m.exps.len() != self.n() * self.n()) {
            return Err(Error::DimensionMismatch {
                expected: self.n() * self.n(),
                found: e.monomials().next().map_or(0, |m| m.exps.len()),
            });
        }
        let ell = self.ell as i64;
        let mut raw: BTreeMap<Monomial, Vec<(ClassicalMonomial, CycloElem)>> = BTreeMap::new();
        let det = (self.alg.variant() == Variant::GLn).then(|| self.mn.quantum_determinant());
        for (m, c) in e.terms() {
            let a = m.dpower.div_euclid(ell);
            let r = m.dpower.rem_euclid(ell) as u32;
            let base = Monomial {
                exps: m.exps.clone(),
                dpower: 0,
            };
            let mut poly = self.mn.term(base, c.clone());
            if let Some(det) = &det {
                for _ in 0..r {
                    poly = self.mn.multiply(&poly, det)?;
                }
            } else if m.dpower != 0 {
                return Err(Error::ConfigMismatch("D in an M_n element".into()));
            }
            for (pm, pc) in poly.terms() {
                let (mut cl, key) = split_exponents(pm, self.ell);
                cl.0.dpower = a;
                raw.entry(key).or_default().push((cl, pc.clone()));
            }
        }
        let mut entries = BTreeMap::new();
        for (key, terms) in raw {
            let p = self.classical.from_terms(terms);
            if !p.is_zero() {
                entries.insert(key, p);
            }
        }
        Ok(ModuleExpansion { entries })
    }

    /// `sum_b Fr(coeff_b) * b`, in normal form.
    pub fn recombine(&self, x: &ModuleExpansion) -> Result<Element<CycloElem>> {
        let mut acc = self.alg.zero();
        for (key, coeff) in &x.entries {
            let b = self.alg.term(key.clone(), self.alg.ring().one());
            let fr = self.frobenius_image_poly(coeff);
            acc = self.alg.add(&acc, &self.alg.multiply(&fr, &b)?);
        }
        Ok(acc)
    }

    /// `ell^(n^2)` residue monomials of this context.
    pub fn basis(&self) -> impl Iterator<Item = Monomial> {
        enumerate_basis(self.n(), self.ell, Variant::Mn).expect("M_n basis")
    }

    pub fn format_classical(&self, p: &ClassicalPoly) -> String {
        self.classical.format(p)
    }
}
