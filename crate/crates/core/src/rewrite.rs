//! Reduction of noncommutative words in the `t[i,j]` to ordered (PBW)
//! monomials using the four quantum-matrix relation families.
//!
//! Every rewrite step replaces an adjacent out-of-order pair `x y` by
//! `c * y x` plus, for the diagonal relation, a correction word of strictly
//! smaller weight. Words are processed in decreasing `(weight, inversions)`
//! order, so every contribution to a word is merged before it is rewritten.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use crate::coeff::{CoeffRing, LaurentPoly};
use crate::error::{Error, Result};
use rayon::prelude::*;

use crate::monomial::{weight, Gen, GenIndex, GenOrder, Monomial, OrderKind, Weight, MAX_N};
use crate::report::{CheckCase, CheckReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Mn,
    GLn,
    SLn,
}

/// Which exponents must contain a zero in a reduced GL/SL monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Diagonal exponents `N[i,i]`.
    Standard,
    /// Antidiagonal exponents `N[i,n+1-i]`; requires an opposite-constrained order.
    Opposite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraConfig {
    pub n: usize,
    pub variant: Variant,
    pub order: GenOrder,
    pub flavor: Flavor,
}

impl AlgebraConfig {
    pub fn new(variant: Variant, order: GenOrder, flavor: Flavor) -> Result<Self> {
        let n = order.n();
        if n == 0 || n > MAX_N {
            return Err(Error::Parameter(format!("unsupported matrix size {n}")));
        }
        if flavor == Flavor::Opposite && order.kind() != OrderKind::OppositeConstrained {
            return Err(Error::ConfigMismatch(
                "opposite basis flavor requires an opposite-constrained order".into(),
            ));
        }
        Ok(Self {
            n,
            variant,
            order,
            flavor,
        })
    }

    /// Row-major order, standard flavor.
    pub fn standard(n: usize, variant: Variant) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::Parameter(format!("unsupported matrix size {n}")));
        }
        Self::new(variant, GenOrder::row_major(n), Flavor::Standard)
    }

    /// Opposite-constrained order (row-major inside each block), opposite flavor.
    pub fn opposite(n: usize, variant: Variant) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::Parameter(format!("unsupported matrix size {n}")));
        }
        let order = crate::monomial::make_opposite_order(n, &GenOrder::row_major(n))?;
        Self::new(variant, order, Flavor::Opposite)
    }
}

/// Finite linear combination of reduced monomials.
///
/// Iteration is in ascending monomial order; display uses descending order.
#[derive(Clone, PartialEq, Eq)]
pub struct Element<E> {
    terms: BTreeMap<Monomial, E>,
}

impl<E> Default for Element<E> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<E: fmt::Debug> fmt::Debug for Element<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<E> Element<E> {
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

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &E)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&E> {
        self.terms.get(m)
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub(crate) fn from_map(terms: BTreeMap<Monomial, E>) -> Self {
        Self { terms }
    }

    pub(crate) fn into_map(self) -> BTreeMap<Monomial, E> {
        self.terms
    }

    pub fn map_coefficients<F, T>(&self, mut f: F) -> Element<T>
    where
        F: FnMut(&E) -> Option<T>,
    {
        Element {
            terms: self
                .terms
                .iter()
                .filter_map(|(m, c)| f(c).map(|c| (m.clone(), c)))
                .collect(),
        }
    }
}

/// Adds `c` at `key`, dropping the entry if it cancels.
pub(crate) fn accumulate<R: CoeffRing, K: Ord>(
    ring: &R,
    map: &mut BTreeMap<K, R::Elem>,
    key: K,
    c: R::Elem,
) {
    if ring.is_zero(&c) {
        return;
    }
    match map.entry(key) {
        Entry::Occupied(mut e) => {
            ring.add_assign(e.get_mut(), &c);
            if ring.is_zero(e.get()) {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

/// How the next adjacent inversion of a word is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    LeftmostInversion,
    RightmostInversion,
}

/// The rewrite of `x y` as `q^scalar_exp * y x + correction`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct SwapRule {
    pub scalar_exp: i8,
    /// `(a, b, sign)`: adds `sign * (q - q^-1) * a b`.
    pub correction: Option<(GenIndex, GenIndex, i8)>,
}

pub(crate) fn swap_rule(x: GenIndex, y: GenIndex) -> Option<SwapRule> {
    use std::cmp::Ordering::*;
    let (a, b, c, d) = (x.i, x.j, y.i, y.j);
    let plain = |e| {
        Some(SwapRule {
            scalar_exp: e,
            correction: None,
        })
    };
    match (a.cmp(&c), b.cmp(&d)) {
        (Equal, Equal) => None,
        // same row: t[i,j] t[i,k] = q t[i,k] t[i,j] for j < k
        (Equal, Less) => plain(1),
        (Equal, Greater) => plain(-1),
        // same column: t[i,k] t[h,k] = q t[h,k] t[i,k] for i < h
        (Less, Equal) => plain(1),
        (Greater, Equal) => plain(-1),
        // t[i,l] t[j,k] = t[j,k] t[i,l] for i < j, k < l
        (Less, Greater) | (Greater, Less) => plain(0),
        // t[i,k] t[j,l] = t[j,l] t[i,k] + (q - q^-1) t[i,l] t[j,k]
        (Less, Less) => Some(SwapRule {
            scalar_exp: 0,
            correction: Some((GenIndex::new(a, d), GenIndex::new(c, b), 1)),
        }),
        // t[j,l] t[i,k] = t[i,k] t[j,l] - (q - q^-1) t[i,l] t[j,k]
        (Greater, Greater) => Some(SwapRule {
            scalar_exp: 0,
            correction: Some((GenIndex::new(c, b), GenIndex::new(a, d), -1)),
        }),
    }
}

/// Rewrites the two-letter word `x y` as a `Z_q`-combination of `y x` and at
/// most one other two-letter word. `None` when `x == y`.
pub fn swap_adjacent(x: GenIndex, y: GenIndex) -> Option<Vec<(Vec<GenIndex>, LaurentPoly)>> {
    let rule = swap_rule(x, y)?;
    let mut out = vec![(vec![y, x], LaurentPoly::q_pow(rule.scalar_exp as i64))];
    if let Some((a, b, sign)) = rule.correction {
        let qq = LaurentPoly::q_minus_q_inv();
        out.push((vec![a, b], if sign > 0 { qq } else { -qq }));
    }
    Some(out)
}

/// One rewrite step: the measure of the rewritten word and of each produced word.
#[derive(Clone, Debug)]
pub struct RewriteStep {
    pub from: (Weight, u32),
    pub to: Vec<(Weight, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct WorkKey {
    weight: Vec<u32>,
    inversions: u32,
    word: Vec<Gen>,
    dpower: i64,
}

/// A quantum matrix algebra (`M_n`, `GL_n` or `SL_n`) over a coefficient ring.
#[derive(Clone, Debug)]
pub struct Algebra<R: CoeffRing> {
    config: AlgebraConfig,
    ring: R,
    q_pows: [R::Elem; 3],
    qq: R::Elem,
    pub(crate) det_cache: OnceLock<DetExpansions<R::Elem>>,
}

/// The two full expansions of the quantum determinant as words.
#[derive(Clone, Debug)]
pub(crate) struct DetExpansions<E> {
    /// `(-q)^l(s) t[1,s(1)] ... t[n,s(n)]`
    pub rows_ascending: Vec<(Vec<Gen>, E)>,
    /// `(-q)^l(s) t[n,s(n)] ... t[1,s(1)]`; not an expansion of `D` for `n > 1`.
    pub rows_descending_q: Vec<(Vec<Gen>, E)>,
    /// `(-q)^-l(s) t[n,s(n)] ... t[1,s(1)]`, which does expand `D`.
    pub rows_descending: Vec<(Vec<Gen>, E)>,
}

impl<R: CoeffRing> Algebra<R> {
    pub fn new(config: AlgebraConfig, ring: R) -> Self {
        let q_pows = [ring.q_pow(-1), ring.one(), ring.q_pow(1)];
        let qq = ring.sub(&ring.q_pow(1), &ring.q_pow(-1));
        Self {
            config,
            ring,
            q_pows,
            qq,
            det_cache: OnceLock::new(),
        }
    }

    pub fn config(&self) -> &AlgebraConfig {
        &self.config
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.config.n
    }

    pub fn order(&self) -> &GenOrder {
        &self.config.order
    }

    pub fn variant(&self) -> Variant {
        self.config.variant
    }

    /// Same configuration over another ring.
    pub fn with_ring<S: CoeffRing>(&self, ring: S) -> Algebra<S> {
        Algebra::new(self.config.clone(), ring)
    }

    /// Same ring and order, other variant.
    pub fn with_variant(&self, variant: Variant) -> Algebra<R> {
        let mut config = self.config.clone();
        config.variant = variant;
        Algebra::new(config, self.ring.clone())
    }

    pub fn zero(&self) -> Element<R::Elem> {
        Element::zero()
    }

    pub fn one(&self) -> Element<R::Elem> {
        self.scalar(self.ring.one())
    }

    pub fn scalar(&self, c: R::Elem) -> Element<R::Elem> {
        self.term(Monomial::one(self.n()), c)
    }

    /// A single term; the caller guarantees `m` is reduced.
    pub fn term(&self, m: Monomial, c: R::Elem) -> Element<R::Elem> {
        let mut map = BTreeMap::new();
        accumulate(&self.ring, &mut map, m, c);
        Element::from_map(map)
    }

    pub fn generator(&self, idx: GenIndex) -> Result<Element<R::Elem>> {
        let idx = GenIndex::checked(idx.i, idx.j, self.n())?;
        Ok(self.normalize_word(&[idx.id(self.n())]))
    }

    pub fn t(&self, i: usize, j: usize) -> Element<R::Elem> {
        self.generator(GenIndex::new(i, j))
            .expect("generator index in range")
    }

    /// `D^z`: a monomial in GL, `1` in SL, an error in `M_n` for `z != 0`.
    pub fn det_power(&self, z: i64) -> Result<Element<R::Elem>> {
        match self.variant() {
            Variant::GLn => Ok(self.term(Monomial::one(self.n()).with_dpower(z), self.ring.one())),
            Variant::SLn => Ok(self.one()),
            Variant::Mn if z == 0 => Ok(self.one()),
            Variant::Mn => Err(Error::Unsupported(
                "D is not an element of the M_n variant".into(),
            )),
        }
    }

    pub fn add(&self, a: &Element<R::Elem>, b: &Element<R::Elem>) -> Element<R::Elem> {
        let mut map = a.terms.clone();
        for (m, c) in &b.terms {
            accumulate(&self.ring, &mut map, m.clone(), c.clone());
        }
        Element::from_map(map)
    }

    pub fn neg(&self, a: &Element<R::Elem>) -> Element<R::Elem> {
        a.map_coefficients(|c| Some(self.ring.neg(c)))
    }

    pub fn sub(&self, a: &Element<R::Elem>, b: &Element<R::Elem>) -> Element<R::Elem> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Element<R::Elem>, s: &R::Elem) -> Element<R::Elem> {
        a.map_coefficients(|c| {
            let p = self.ring.mul(c, s);
            (!self.ring.is_zero(&p)).then_some(p)
        })
    }

    pub(crate) fn check_element(&self, e: &Element<R::Elem>) -> Result<()> {
        for m in e.monomials() {
            if m.exps.len() != self.n() * self.n() {
                return Err(Error::ConfigMismatch(format!(
                    "monomial has {} exponents, algebra has n={}",
                    m.exps.len(),
                    self.n()
                )));
            }
            if m.dpower != 0 && self.variant() != Variant::GLn {
                return Err(Error::ConfigMismatch(format!(
                    "D power {} in a {:?} element",
                    m.dpower,
                    self.variant()
                )));
            }
        }
        Ok(())
    }

    /// Normal form of the product `a * b`.
    pub fn multiply(&self, a: &Element<R::Elem>, b: &Element<R::Elem>) -> Result<Element<R::Elem>> {
        self.check_element(a)?;
        self.check_element(b)?;
        let mut input = Vec::with_capacity(a.len() * b.len());
        for (ma, ca) in a.terms() {
            let wa = ma.word(self.order());
            for (mb, cb) in b.terms() {
                let mut w = wa.clone();
                w.extend(mb.word(self.order()));
                let c = self.ring.mul(ca, cb);
                input.push((w, ma.dpower + mb.dpower, c));
            }
        }
        Ok(self.normalize_words(input, Strategy::default()))
    }

    /// Product of several elements, left to right.
    pub fn product(&self, factors: &[Element<R::Elem>]) -> Result<Element<R::Elem>> {
        let mut acc = self.one();
        for f in factors {
            acc = self.multiply(&acc, f)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, a: &Element<R::Elem>, e: u32) -> Result<Element<R::Elem>> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.multiply(&acc, a)?;
        }
        Ok(acc)
    }

    /// `a * b - b * a`
    pub fn commutator(
        &self,
        a: &Element<R::Elem>,
        b: &Element<R::Elem>,
    ) -> Result<Element<R::Elem>> {
        Ok(self.sub(&self.multiply(a, b)?, &self.multiply(b, a)?))
    }

    /// Normal form of a single word with coefficient 1.
    pub fn normalize_word(&self, word: &[Gen]) -> Element<R::Elem> {
        self.normalize_words(
            vec![(word.to_vec(), 0, self.ring.one())],
            Strategy::default(),
        )
    }

    /// Normal form of `sum c * word * D^dpower`.
    pub fn normalize_words(
        &self,
        input: Vec<(Vec<Gen>, i64, R::Elem)>,
        strategy: Strategy,
    ) -> Element<R::Elem> {
        let ordered = self.reorder(input, strategy, None);
        self.reduce_basis(ordered)
    }

    /// Re-reduces an element whose monomials may violate the basis constraint.
    pub fn normalize(&self, e: &Element<R::Elem>) -> Result<Element<R::Elem>> {
        self.check_element(e)?;
        let input = e
            .terms()
            .map(|(m, c)| (m.word(self.order()), m.dpower, c.clone()))
            .collect();
        Ok(self.normalize_words(input, Strategy::default()))
    }

    /// Like [`Self::normalize_words`], reporting every rewrite step to `trace`.
    pub fn normalize_words_traced(
        &self,
        input: Vec<(Vec<Gen>, i64, R::Elem)>,
        strategy: Strategy,
        trace: &mut dyn FnMut(&RewriteStep),
    ) -> Element<R::Elem> {
        let ordered = self.reorder(input, strategy, Some(trace));
        self.reduce_basis(ordered)
    }

    /// Sorts every word into the active order. The result consists of ordered
    /// monomials only; no determinant reduction is applied.
    pub(crate) fn reorder(
        &self,
        input: Vec<(Vec<Gen>, i64, R::Elem)>,
        strategy: Strategy,
        mut trace: Option<&mut dyn FnMut(&RewriteStep)>,
    ) -> BTreeMap<Monomial, R::Elem> {
        let n = self.n();
        let order = self.order();
        let mut work: BTreeMap<WorkKey, R::Elem> = BTreeMap::new();
        for (word, dpower, c) in input {
            let key = WorkKey {
                weight: weight(&word, n).0,
                inversions: order.inversions(&word),
                word,
                dpower,
            };
            accumulate(&self.ring, &mut work, key, c);
        }
        let mut out = BTreeMap::new();
        while let Some((key, c)) = work.pop_last() {
            if key.inversions == 0 {
                let m = Monomial::from_word(&key.word, n).with_dpower(key.dpower);
                accumulate(&self.ring, &mut out, m, c);
                continue;
            }
            let w = &key.word;
            let is_inv = |p: usize| order.rank(w[p]) > order.rank(w[p + 1]);
            let pos = match strategy {
                Strategy::LeftmostInversion => (0..w.len() - 1).find(|&p| is_inv(p)),
                Strategy::RightmostInversion => (0..w.len() - 1).rev().find(|&p| is_inv(p)),
            }
            .expect("a word with inversions has an adjacent inversion");
            let (x, y) = (
                GenIndex::from_id(w[pos], n),
                GenIndex::from_id(w[pos + 1], n),
            );
            let rule = swap_rule(x, y).expect("inverted letters are distinct");

            let mut swapped = w.clone();
            swapped.swap(pos, pos + 1);
            let swapped_key = WorkKey {
                weight: key.weight.clone(),
                inversions: key.inversions - 1,
                word: swapped,
                dpower: key.dpower,
            };
            let correction_key = rule.correction.map(|(a, b, sign)| {
                let mut cw = w.clone();
                cw[pos] = a.id(n);
                cw[pos + 1] = b.id(n);
                let k = WorkKey {
                    weight: weight(&cw, n).0,
                    inversions: order.inversions(&cw),
                    word: cw,
                    dpower: key.dpower,
                };
                (k, sign)
            });
            if let Some(t) = trace.as_mut() {
                let mut to = vec![(Weight(swapped_key.weight.clone()), swapped_key.inversions)];
                if let Some((k, _)) = &correction_key {
                    to.push((Weight(k.weight.clone()), k.inversions));
                }
                t(&RewriteStep {
                    from: (Weight(key.weight.clone()), key.inversions),
                    to,
                });
            }
            let scalar = &self.q_pows[(rule.scalar_exp + 1) as usize];
            accumulate(
                &self.ring,
                &mut work,
                swapped_key,
                self.ring.mul(&c, scalar),
            );
            if let Some((k, sign)) = correction_key {
                let mut cc = self.ring.mul(&c, &self.qq);
                if sign < 0 {
                    cc = self.ring.neg(&cc);
                }
                accumulate(&self.ring, &mut work, k, cc);
            }
        }
        out
    }

    /// Formats an element in canonical (descending) term order.
    pub fn display<'a>(&'a self, e: &'a Element<R::Elem>) -> ElementDisplay<'a, R> {
        ElementDisplay { alg: self, e }
    }

    pub fn format(&self, e: &Element<R::Elem>) -> String {
        self.display(e).to_string()
    }
}

/// All words of length exactly `len` over `letters` generators, lexicographic.
pub fn all_words(letters: usize, len: usize) -> impl Iterator<Item = Vec<Gen>> {
    let total = letters.pow(len as u32);
    (0..total).map(move |mut k| {
        let mut w = vec![0 as Gen; len];
        for slot in w.iter_mut().rev() {
            *slot = (k % letters) as Gen;
            k /= letters;
        }
        w
    })
}

impl<R: CoeffRing> Algebra<R> {
    /// Compares leftmost-first and rightmost-first reduction on every word of
    /// length at most `max_len`. One case per length.
    pub fn check_confluence(&self, max_len: usize) -> CheckReport {
        let n = self.n();
        let cases = (0..=max_len)
            .map(|len| {
                let words: Vec<Vec<Gen>> = all_words(n * n, len).collect();
                let bad: Vec<String> = words
                    .par_iter()
                    .filter_map(|w| {
                        let left = self.normalize_words(
                            vec![(w.clone(), 0, self.ring.one())],
                            Strategy::LeftmostInversion,
                        );
                        let right = self.normalize_words(
                            vec![(w.clone(), 0, self.ring.one())],
                            Strategy::RightmostInversion,
                        );
                        (left != right).then(|| {
                            format!(
                                "{}: {}",
                                word_label(w, n),
                                self.format(&self.sub(&left, &right))
                            )
                        })
                    })
                    .collect();
                mismatch_case(
                    format!(
                        "leftmost = rightmost on {} words of length {len}",
                        words.len()
                    ),
                    bad,
                )
            })
            .collect::<Vec<_>>();
        CheckReport::new("pbw-confluence", n, self.ring.ell()).with_cases(cases)
    }
}

impl Algebra<crate::coeff::LaurentRing> {
    /// At `q = 1` the normal form of a word is its commutative monomial with
    /// coefficient 1. One case per length, `M_n` normal forms.
    pub fn check_q_one(&self, max_len: usize) -> CheckReport {
        let mn = self.with_variant(Variant::Mn);
        let n = self.n();
        let cases = (0..=max_len)
            .map(|len| {
                let words: Vec<Vec<Gen>> = all_words(n * n, len).collect();
                let bad: Vec<String> = words
                    .par_iter()
                    .filter_map(|w| {
                        let nf = mn.normalize_word(w);
                        let expected = Monomial::from_word(w, n);
                        let ok = nf.terms().all(|(m, c)| {
                            let v = c.specialize_at_one();
                            if *m == expected {
                                v == 1.into()
                            } else {
                                v == 0.into()
                            }
                        }) && nf.coefficient(&expected).is_some();
                        (!ok).then(|| format!("{}: {}", word_label(w, n), mn.format(&nf)))
                    })
                    .collect();
                mismatch_case(
                    format!(
                        "q=1 gives the commutative monomial on {} words of length {len}",
                        words.len()
                    ),
                    bad,
                )
            })
            .collect::<Vec<_>>();
        CheckReport::new("q-one", n, None).with_cases(cases)
    }
}

fn word_label(w: &[Gen], n: usize) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&g| GenIndex::from_id(g, n).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// A case whose residual lists (up to five) offending inputs.
fn mismatch_case(input: String, bad: Vec<String>) -> CheckCase {
    let residual = match bad.len() {
        0 => "0".to_string(),
        k if k <= 5 => bad.join("; "),
        k => format!("{} (and {} more)", bad[..5].join("; "), k - 5),
    };
    CheckCase::zero_residual(input, residual)
}

pub struct ElementDisplay<'a, R: CoeffRing> {
    alg: &'a Algebra<R>,
    e: &'a Element<R::Elem>,
}

impl<R: CoeffRing> fmt::Display for ElementDisplay<'_, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order = self.alg.order();
        write_combination(
            f,
            self.alg.ring(),
            self.e
                .terms()
                .rev()
                .map(|(m, c)| (c, (!m.is_one()).then(|| m.display(order).to_string()))),
        )
    }
}

/// Prints `c1 m1 + c2 m2 - ...` with `None` standing for the unit monomial.
/// Coefficients with several terms are parenthesised unless they are the whole output.
pub(crate) fn write_combination<'a, R: CoeffRing>(
    f: &mut fmt::Formatter<'_>,
    ring: &R,
    terms: impl Iterator<Item = (&'a R::Elem, Option<String>)>,
) -> fmt::Result
where
    R::Elem: 'a,
{
    let terms: Vec<_> = terms.collect();
    let single = terms.len() == 1;
    for (idx, (c, m)) in terms.iter().enumerate() {
        let negative = ring.is_negative_monomial(c);
        let body = if negative { ring.neg(c) } else { (*c).clone() };
        let body_str = body.to_string();
        let coeff = if body_str.contains(' ') && !(single && m.is_none()) {
            format!("({body_str})")
        } else {
            body_str
        };
        let term = match (m, ring.is_one(&body)) {
            (None, _) => coeff,
            (Some(m), true) => m.clone(),
            (Some(m), false) => format!("{coeff} {m}"),
        };
        match (idx == 0, negative) {
            (true, true) => write!(f, "-{term}")?,
            (true, false) => write!(f, "{term}")?,
            (false, true) => write!(f, " - {term}")?,
            (false, false) => write!(f, " + {term}")?,
        }
    }
    if terms.is_empty() {
        write!(f, "0")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::LaurentRing;

    fn m2() -> Algebra<LaurentRing> {
        Algebra::new(
            AlgebraConfig::standard(2, Variant::Mn).unwrap(),
            LaurentRing,
        )
    }

    fn g(i: usize, j: usize) -> GenIndex {
        GenIndex::new(i, j)
    }

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn swap_examples() {
        assert_eq!(
            swap_adjacent(g(1, 2), g(1, 1)).unwrap(),
            vec![(vec![g(1, 1), g(1, 2)], lp("q^-1"))]
        );
        assert_eq!(
            swap_adjacent(g(2, 1), g(1, 2)).unwrap(),
            vec![(vec![g(1, 2), g(2, 1)], lp("1"))]
        );
        assert_eq!(
            swap_adjacent(g(2, 2), g(1, 1)).unwrap(),
            vec![
                (vec![g(1, 1), g(2, 2)], lp("1")),
                (vec![g(1, 2), g(2, 1)], lp("-q + q^-1"))
            ]
        );
        assert!(swap_adjacent(g(1, 1), g(1, 1)).is_none());
    }

    #[test]
    fn swap_rules_are_mutually_inverse() {
        // x y -> c y x (+ corr) and y x -> c' x y (+ corr') must compose to the
        // identity: c c' = 1 and the corrections cancel (they commute).
        let n = 3;
        for x in 0..9u8 {
            for y in 0..9u8 {
                let (gx, gy) = (GenIndex::from_id(x, n), GenIndex::from_id(y, n));
                let (Some(r1), Some(r2)) = (swap_rule(gx, gy), swap_rule(gy, gx)) else {
                    continue;
                };
                assert_eq!(r1.scalar_exp + r2.scalar_exp, 0);
                match (r1.correction, r2.correction) {
                    (None, None) => {}
                    (Some((a1, b1, s1)), Some((a2, b2, s2))) => {
                        assert_eq!(s1 + s2, 0);
                        let mut p1 = [a1, b1];
                        let mut p2 = [a2, b2];
                        p1.sort();
                        p2.sort();
                        assert_eq!(p1, p2);
                    }
                    _ => panic!("asymmetric correction for {gx} {gy}"),
                }
            }
        }
    }

    #[test]
    fn normalize_examples() {
        let a = m2();
        let ordered = a.normalize_word(&[0, 1]);
        assert_eq!(a.format(&ordered), "t[1,1] t[1,2]");
        let e = a.normalize_word(&[3, 0]);
        assert_eq!(a.format(&e), "t[1,1] t[2,2] + (q^-1 - q) t[1,2] t[2,1]");
        // t21 t12 t11 = q^-2 t11 t12 t21
        let e = a.normalize_word(&[2, 1, 0]);
        assert_eq!(a.format(&e), "q^-2 t[1,1] t[1,2] t[2,1]");
    }

    #[test]
    fn multiply_identity_and_ordered() {
        let a = m2();
        let x = a.add(&a.t(2, 2), &a.scale(&a.t(1, 2), &lp("q")));
        assert_eq!(a.multiply(&a.one(), &x).unwrap(), x);
        assert_eq!(a.multiply(&x, &a.one()).unwrap(), x);
        assert_eq!(
            a.multiply(&a.t(1, 1), &a.t(1, 2)).unwrap(),
            a.normalize_word(&[0, 1])
        );
    }

    #[test]
    fn multiply_rejects_foreign_elements() {
        let a = m2();
        let b = Algebra::new(
            AlgebraConfig::standard(3, Variant::Mn).unwrap(),
            LaurentRing,
        );
        assert!(matches!(
            a.multiply(&a.t(1, 1), &b.t(1, 1)),
            Err(Error::ConfigMismatch(_))
        ));
    }

    #[test]
    fn opposite_flavor_needs_opposite_order() {
        assert!(
            AlgebraConfig::new(Variant::GLn, GenOrder::row_major(2), Flavor::Opposite).is_err()
        );
        assert!(AlgebraConfig::opposite(3, Variant::SLn).is_ok());
    }

    #[test]
    fn display_of_zero_and_scalars() {
        let a = m2();
        assert_eq!(a.format(&a.zero()), "0");
        assert_eq!(a.format(&a.scalar(lp("-q^2"))), "-q^2");
        assert_eq!(a.format(&a.scalar(lp("q + 1"))), "1 + q");
        let x = a.add(&a.t(1, 1), &a.scalar(lp("q + 1")));
        assert_eq!(a.format(&x), "t[1,1] + (1 + q)");
        let x = a.scale(&a.t(1, 1), &lp("-1"));
        assert_eq!(a.format(&x), "-t[1,1]");
    }
    #[test]
    fn small_suites_pass() {
        for n in 1..=2 {
            let a = Algebra::new(
                AlgebraConfig::standard(n, Variant::Mn).unwrap(),
                LaurentRing,
            );
            let r = a.check_confluence(4);
            assert!(r.passed(), "{}", r.to_text());
            let r = a.check_q_one(4);
            assert!(r.passed(), "{}", r.to_text());
        }
        let a = Algebra::new(
            AlgebraConfig::opposite(2, Variant::Mn).unwrap(),
            LaurentRing,
        );
        assert!(a.check_confluence(4).passed());
    }

    #[test]
    fn word_enumeration() {
        assert_eq!(
            all_words(2, 2).collect::<Vec<_>>(),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(all_words(9, 0).count(), 1);
        assert_eq!(all_words(4, 5).count(), 1024);
    }

    fn word_strategy(n: usize) -> impl proptest::strategy::Strategy<Value = Vec<Gen>> {
        proptest::collection::vec(0..(n * n) as Gen, 0..7)
    }

    proptest::proptest! {
        #[test]
        fn every_step_decreases_the_measure(w in word_strategy(3), right in proptest::bool::ANY) {
            let a = Algebra::new(AlgebraConfig::standard(3, Variant::Mn).unwrap(), LaurentRing);
            let strategy = if right { Strategy::RightmostInversion } else { Strategy::LeftmostInversion };
            let mut ok = true;
            a.normalize_words_traced(vec![(w, 0, LaurentPoly::one())], strategy, &mut |step| {
                for to in &step.to {
                    ok &= (to.0.0.as_slice(), to.1) < (step.from.0.0.as_slice(), step.from.1);
                }
            });
            proptest::prop_assert!(ok);
        }

        #[test]
        fn normal_form_weights_do_not_exceed_input(w in word_strategy(3)) {
            let a = Algebra::new(AlgebraConfig::opposite(3, Variant::Mn).unwrap(), LaurentRing);
            let top = weight(&w, 3);
            for m in a.normalize_word(&w).monomials() {
                proptest::prop_assert!(m.weight().0 <= top.0);
            }
        }

        #[test]
        fn ordered_monomials_are_fixed(exps in proptest::collection::vec(0u32..3, 4)) {
            let a = m2();
            let m = Monomial { exps, dpower: 0 };
            let e = a.normalize_word(&m.word(a.order()));
            proptest::prop_assert_eq!(e, a.term(m, LaurentPoly::one()));
        }

        #[test]
        fn multiplication_is_associative(x in word_strategy(2), y in word_strategy(2), z in word_strategy(2)) {
            let a = m2();
            let (ex, ey, ez) = (a.normalize_word(&x), a.normalize_word(&y), a.normalize_word(&z));
            let l = a.multiply(&a.multiply(&ex, &ey).unwrap(), &ez).unwrap();
            let r = a.multiply(&ex, &a.multiply(&ey, &ez).unwrap()).unwrap();
            proptest::prop_assert_eq!(l, r);
        }
    }
}
