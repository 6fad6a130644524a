//! The quantum determinant, reduction of determinant factors for the GL/SL
//! bases, and the isomorphism `SL_n ⊗ Z[x, x^-1] -> GL_n`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::coeff::CoeffRing;
use crate::error::{Error, Result};
use crate::monomial::{Gen, GenIndex, Monomial, Region};
use crate::report::{CheckCase, CheckReport};
use crate::rewrite::{accumulate, Algebra, DetExpansions, Element, Flavor, Strategy, Variant};

/// `coeff * word`, one summand of a relation.
type SignedWord<E> = (E, Vec<GenIndex>);

/// A permutation of `{1..n}`, stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// `i -> n + 1 - i`
    pub fn longest(n: usize) -> Self {
        Self {
            images: (0..n).rev().collect(),
        }
    }

    /// From 1-based images.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in images {
            if x == 0 || x > n || std::mem::replace(&mut seen[x - 1], true) {
                return Err(Error::Parameter(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Self {
            images: images.iter().map(|x| x - 1).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// 1-based image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let s = &self.images;
        (0..s.len())
            .flat_map(|a| (a + 1..s.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| s[a] > s[b])
            .count()
    }

    /// All of `S_n` in lexicographic order of image lists.
    pub fn all(n: usize) -> Vec<Permutation> {
        fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if prefix.len() == used.len() {
                out.push(Permutation {
                    images: prefix.clone(),
                });
                return;
            }
            for x in 0..used.len() {
                if !used[x] {
                    used[x] = true;
                    prefix.push(x);
                    go(prefix, used, out);
                    prefix.pop();
                    used[x] = false;
                }
            }
        }
        let mut out = Vec::new();
        go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
        out
    }
}

/// Number of antidiagonal letters.
pub fn anti_degree(m: &Monomial, n: usize) -> u32 {
    (1..=n)
        .map(|i| m.exps[GenIndex::new(i, n + 1 - i).id(n) as usize])
        .sum()
}

impl<R: CoeffRing> Algebra<R> {
    pub(crate) fn det_expansions(&self) -> &DetExpansions<R::Elem> {
        self.det_cache.get_or_init(|| {
            let n = self.n();
            let ring = self.ring();
            let minus_q = ring.neg(&ring.q_pow(1));
            let minus_q_inv = ring.neg(&ring.q_pow(-1));
            let mut asc = Vec::new();
            let mut desc_q = Vec::new();
            let mut desc = Vec::new();
            for sigma in Permutation::all(n) {
                let mut c = ring.one();
                let mut c_inv = ring.one();
                for _ in 0..sigma.length() {
                    c = ring.mul(&c, &minus_q);
                    c_inv = ring.mul(&c_inv, &minus_q_inv);
                }
                let word: Vec<Gen> = (1..=n)
                    .map(|i| GenIndex::new(i, sigma.apply(i)).id(n))
                    .collect();
                let mut rev = word.clone();
                rev.reverse();
                asc.push((word, c.clone()));
                desc_q.push((rev.clone(), c));
                desc.push((rev, c_inv));
            }
            DetExpansions {
                rows_ascending: asc,
                rows_descending_q: desc_q,
                rows_descending: desc,
            }
        })
    }

    /// `sum (-q)^l(s) t[1,s(1)] ... t[n,s(n)]` as ordered monomials, without
    /// any determinant reduction (so for GL/SL this is the expanded form of `D`).
    pub fn quantum_determinant(&self) -> Element<R::Elem> {
        let words = self.det_expansions().rows_ascending.clone();
        self.reorder_only(words)
    }

    /// `sum (-q)^l(s) t[n,s(n)] ... t[1,s(1)]`, same conventions.
    ///
    /// For `n >= 2` this differs from [`Self::quantum_determinant`]; the
    /// descending product expands `D_q` with coefficients `(-q)^-l(s)`, see
    /// [`Self::quantum_determinant_descending`].
    pub fn quantum_determinant_reversed(&self) -> Element<R::Elem> {
        let words = self.det_expansions().rows_descending_q.clone();
        self.reorder_only(words)
    }

    /// `sum (-q)^-l(s) t[n,s(n)] ... t[1,s(1)]`, equal to `D_q`.
    pub fn quantum_determinant_descending(&self) -> Element<R::Elem> {
        let words = self.det_expansions().rows_descending.clone();
        self.reorder_only(words)
    }

    fn reorder_only(&self, words: Vec<(Vec<Gen>, R::Elem)>) -> Element<R::Elem> {
        let input = words.into_iter().map(|(w, c)| (w, 0, c)).collect();
        Element::from_map(self.reorder(input, Strategy::default(), None))
    }

    /// `D_q * t[i,j] - t[i,j] * D_q` for every generator, in the `M_n` variant.
    pub fn check_central(&self) -> CheckReport {
        let alg = self.with_variant(Variant::Mn);
        let n = self.n();
        let det = alg.quantum_determinant();
        let gens: Vec<GenIndex> = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| GenIndex::new(i, j)))
            .collect();
        let cases: Vec<CheckCase> = gens
            .par_iter()
            .map(|&g| {
                let t = alg.t(g.i, g.j);
                let c = alg.commutator(&det, &t).expect("same algebra");
                CheckCase::zero_residual(format!("D*{g} - {g}*D"), alg.format(&c))
            })
            .collect();
        CheckReport::new("central", n, self.ring().ell()).with_cases(cases)
    }

    /// Indices whose exponents must not all be positive in a reduced monomial.
    pub fn core_letters(&self) -> Vec<Gen> {
        let n = self.n();
        (1..=n)
            .map(|i| match self.config().flavor {
                Flavor::Standard => GenIndex::new(i, i).id(n),
                Flavor::Opposite => GenIndex::new(i, n + 1 - i).id(n),
            })
            .collect()
    }

    /// Whether `m` violates the basis constraint of the active variant.
    pub fn needs_reduction(&self, m: &Monomial) -> bool {
        self.variant() != Variant::Mn && self.core_letters().iter().all(|&g| m.exps[g as usize] > 0)
    }

    /// Whether every key of `e` satisfies the basis constraint.
    pub fn is_reduced(&self, e: &Element<R::Elem>) -> bool {
        e.monomials().all(|m| !self.needs_reduction(m))
    }

    /// Termination measure of the determinant reduction. Lex-compared.
    fn reduction_measure(&self, m: &Monomial) -> Vec<u32> {
        let mut key = Vec::with_capacity(m.exps.len() + 2);
        if self.config().flavor == Flavor::Opposite {
            key.push(anti_degree(m, self.n()));
        }
        key.extend(m.weight().0);
        key
    }

    /// One reduction step: trades one copy of each core letter of `m` for a
    /// factor `D` (or `1` in SL). `None` when `m` has no full set of core
    /// letters or in the `M_n` variant.
    pub fn diagonal_reduction(&self, m: &Monomial) -> Option<Element<R::Elem>> {
        if !self.needs_reduction(m) {
            return None;
        }
        let n = self.n();
        let ring = self.ring();
        let core = self.core_letters();
        let mut reduced = m.clone();
        for &g in &core {
            reduced.exps[g as usize] -= 1;
        }
        let base = reduced.word(self.order());
        let det = self.det_expansions();
        let input: Vec<(Vec<Gen>, i64, R::Elem)> = match self.config().flavor {
            Flavor::Standard => det
                .rows_ascending
                .iter()
                .map(|(w, c)| {
                    let mut word = base.clone();
                    word.extend(w);
                    (word, m.dpower, c.clone())
                })
                .collect(),
            Flavor::Opposite => {
                // Letters of the order are blocked Minus, Anti, Plus; the
                // determinant goes in front of the Plus block.
                let split = base
                    .iter()
                    .position(|&g| GenIndex::from_id(g, n).region(n) == Region::Plus)
                    .unwrap_or(base.len());
                det.rows_descending
                    .iter()
                    .map(|(w, c)| {
                        let mut word = base[..split].to_vec();
                        word.extend(w);
                        word.extend(&base[split..]);
                        (word, m.dpower, c.clone())
                    })
                    .collect()
            }
        };
        let mut q = self.reorder(input, Strategy::default(), None);
        let u = q
            .remove(m)
            .expect("leading monomial survives in the determinant expansion");
        let u_inv = ring
            .unit_inverse(&u)
            .expect("leading coefficient of the determinant expansion is a unit");
        let mut out = BTreeMap::new();
        let dp = match self.variant() {
            Variant::GLn => m.dpower + 1,
            _ => 0,
        };
        accumulate(ring, &mut out, reduced.with_dpower(dp), u_inv.clone());
        let minus_u_inv = ring.neg(&u_inv);
        for (k, c) in q {
            accumulate(ring, &mut out, k, ring.mul(&c, &minus_u_inv));
        }
        Some(Element::from_map(out))
    }

    /// Applies [`Self::diagonal_reduction`] until no key violates the constraint.
    pub(crate) fn reduce_basis(&self, input: BTreeMap<Monomial, R::Elem>) -> Element<R::Elem> {
        if self.variant() == Variant::Mn {
            return Element::from_map(input);
        }
        let ring = self.ring();
        let mut work: BTreeMap<(Vec<u32>, Monomial), R::Elem> = BTreeMap::new();
        for (m, c) in input {
            let key = (self.reduction_measure(&m), m);
            accumulate(ring, &mut work, key, c);
        }
        let mut out = BTreeMap::new();
        while let Some(((measure, m), c)) = work.pop_last() {
            let Some(step) = self.diagonal_reduction(&m) else {
                accumulate(ring, &mut out, m, c);
                continue;
            };
            for (k, kc) in step.into_map() {
                let km = self.reduction_measure(&k);
                assert!(
                    km < measure,
                    "determinant reduction did not decrease the measure"
                );
                accumulate(ring, &mut work, (km, k), ring.mul(&c, &kc));
            }
        }
        Element::from_map(out)
    }

    /// Rewrites a reduced GL element into the form where `D` only occurs with
    /// nonpositive exponent: positive powers of `D` are expanded into
    /// ordered monomials. Keys then satisfy `dpower <= 0` and, whenever
    /// `dpower < 0`, have a core exponent equal to zero.
    pub fn to_wedge(&self, e: &Element<R::Elem>) -> Result<Element<R::Elem>> {
        if self.variant() != Variant::GLn {
            return Err(Error::Unsupported("wedge form exists only for GL".into()));
        }
        self.check_element(e)?;
        let det = self.det_expansions();
        let expanded_det: Vec<(Vec<Gen>, R::Elem)> = match self.config().flavor {
            Flavor::Standard => det.rows_ascending.clone(),
            Flavor::Opposite => det.rows_descending.clone(),
        };
        let mut out = BTreeMap::new();
        for (m, c) in e.terms() {
            if m.dpower < 0 {
                accumulate(self.ring(), &mut out, m.clone(), c.clone());
                continue;
            }
            // m * Dpoly^z in M_n, D being central there as well.
            let mut words: Vec<(Vec<Gen>, i64, R::Elem)> =
                vec![(m.word(self.order()), 0, c.clone())];
            for _ in 0..m.dpower {
                let mut next = Vec::with_capacity(words.len() * expanded_det.len());
                for (w, _, wc) in &words {
                    for (dw, dc) in &expanded_det {
                        let mut nw = w.clone();
                        nw.extend(dw);
                        next.push((nw, 0, self.ring().mul(wc, dc)));
                    }
                }
                words = next;
            }
            for (k, kc) in self.reorder(words, Strategy::default(), None) {
                accumulate(self.ring(), &mut out, k, kc);
            }
        }
        Ok(Element::from_map(out))
    }

    /// Inverse of [`Self::to_wedge`].
    pub fn from_wedge(&self, e: &Element<R::Elem>) -> Result<Element<R::Elem>> {
        self.normalize(e)
    }

    /// Image of `sum c * m ⊗ x^z` under `t[i,j] ⊗ 1 -> D^-[i=1] t[i,j]`,
    /// `1 ⊗ x -> D`. The input stores the exponent of `x` in `dpower`.
    /// `self` must be the GL variant.
    pub fn sl_gl_iso(&self, g: &Element<R::Elem>) -> Result<Element<R::Elem>> {
        if self.variant() != Variant::GLn {
            return Err(Error::ConfigMismatch(
                "isomorphism target must be GL".into(),
            ));
        }
        let n = self.n();
        let mut acc = self.zero();
        for (m, c) in g.terms() {
            if m.exps.len() != n * n {
                return Err(Error::DimensionMismatch {
                    expected: n * n,
                    found: m.exps.len(),
                });
            }
            let mut factors = Vec::new();
            for gid in m.word(self.order()) {
                factors.push(self.iso_generator(GenIndex::from_id(gid, n)));
            }
            factors.push(self.det_power(m.dpower)?);
            let img = self.product(&factors)?;
            acc = self.add(&acc, &self.scale(&img, c));
        }
        Ok(acc)
    }

    fn iso_generator(&self, g: GenIndex) -> Element<R::Elem> {
        let dp = if g.i == 1 { -1 } else { 0 };
        self.term(
            Monomial::generator(g, self.n()).with_dpower(dp),
            self.ring().one(),
        )
    }

    /// Checks that every defining relation of `SL_n ⊗ Z[x, x^-1]` maps to zero
    /// in GL, and (for `n = 2`) that reduced monomials of degree at most 3
    /// times `x^-1, 1, x` have pairwise distinct images.
    pub fn check_iso(&self) -> CheckReport {
        let gl = self.with_variant(Variant::GLn);
        let n = gl.n();
        let img = |g: GenIndex| gl.iso_generator(g);
        let gens: Vec<GenIndex> = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| GenIndex::new(i, j)))
            .collect();
        let ring = gl.ring();
        let q = ring.q_pow(1);
        let qq = ring.sub(&q, &ring.q_pow(-1));

        let mut relations: Vec<(String, Vec<SignedWord<R::Elem>>)> = Vec::new();
        for &a in &gens {
            for &b in &gens {
                let (i, j, k, l) = (a.i, a.j, b.i, b.j);
                if i == k && j < l {
                    relations.push((
                        format!("{a} {b} - q {b} {a}"),
                        vec![(ring.one(), vec![a, b]), (ring.neg(&q), vec![b, a])],
                    ));
                }
                if j == l && i < k {
                    relations.push((
                        format!("{a} {b} - q {b} {a}"),
                        vec![(ring.one(), vec![a, b]), (ring.neg(&q), vec![b, a])],
                    ));
                }
                if i < k && j > l {
                    relations.push((
                        format!("{a} {b} - {b} {a}"),
                        vec![(ring.one(), vec![a, b]), (ring.from_int(-1), vec![b, a])],
                    ));
                }
                if i < k && j < l {
                    let (x, y) = (GenIndex::new(i, l), GenIndex::new(k, j));
                    relations.push((
                        format!("{a} {b} - {b} {a} - (q - q^-1) {x} {y}"),
                        vec![
                            (ring.one(), vec![a, b]),
                            (ring.from_int(-1), vec![b, a]),
                            (ring.neg(&qq), vec![x, y]),
                        ],
                    ));
                }
            }
        }
        let sl_det: Vec<(R::Elem, Vec<GenIndex>)> = gl
            .det_expansions()
            .rows_ascending
            .iter()
            .map(|(w, c)| {
                (
                    c.clone(),
                    w.iter().map(|&g| GenIndex::from_id(g, n)).collect(),
                )
            })
            .collect();

        let mut cases: Vec<CheckCase> = relations
            .par_iter()
            .map(|(label, terms)| {
                let mut acc = gl.zero();
                for (c, word) in terms {
                    let factors: Vec<_> = word.iter().map(|&g| img(g)).collect();
                    let p = gl.product(&factors).expect("same algebra");
                    acc = gl.add(&acc, &gl.scale(&p, c));
                }
                CheckCase::zero_residual(label.clone(), gl.format(&acc))
            })
            .collect();

        let mut det_img = gl.scalar(ring.from_int(-1));
        for (c, word) in &sl_det {
            let factors: Vec<_> = word.iter().map(|&g| img(g)).collect();
            let p = gl.product(&factors).expect("same algebra");
            det_img = gl.add(&det_img, &gl.scale(&p, c));
        }
        cases.push(CheckCase::zero_residual("D_q - 1", gl.format(&det_img)));

        let x = gl.det_power(1).expect("GL");
        let x_inv = gl.det_power(-1).expect("GL");
        let xx = gl.multiply(&x, &x_inv).expect("same algebra");
        cases.push(CheckCase::zero_residual(
            "x x^-1 - 1",
            gl.format(&gl.sub(&xx, &gl.one())),
        ));
        for &g in &gens {
            let c = gl.commutator(&img(g), &x).expect("same algebra");
            cases.push(CheckCase::zero_residual(
                format!("{g} x - x {g}"),
                gl.format(&c),
            ));
        }

        if n == 2 {
            cases.push(self.iso_injectivity_case(&gl));
        }
        CheckReport::new("iso", n, ring.ell()).with_cases(cases)
    }

    fn iso_injectivity_case(&self, gl: &Algebra<R>) -> CheckCase {
        let sl = gl.with_variant(Variant::SLn);
        let n = gl.n();
        let mut sources = Vec::new();
        for m in monomials_up_to_degree(n, 3) {
            if sl.needs_reduction(&m) {
                continue;
            }
            for z in -1..=1 {
                sources.push(m.clone().with_dpower(z));
            }
        }
        let images: Vec<(Monomial, Element<R::Elem>)> = sources
            .par_iter()
            .map(|m| {
                let e = gl.term(m.clone(), gl.ring().one());
                (m.clone(), gl.sl_gl_iso(&e).expect("GL target"))
            })
            .collect();
        // Distinct leading monomials imply linear independence of the images.
        let mut leads: BTreeMap<Monomial, &Monomial> = BTreeMap::new();
        let mut clashes = Vec::new();
        for (src, e) in &images {
            let Some((lead, _)) = e.terms().next_back() else {
                clashes.push(format!("{} maps to 0", src.display(gl.order())));
                continue;
            };
            if let Some(prev) = leads.insert(lead.clone(), src) {
                clashes.push(format!(
                    "{} and {} share {}",
                    prev.display(gl.order()),
                    src.display(gl.order()),
                    lead.display(gl.order())
                ));
            }
        }
        let residual = if clashes.is_empty() {
            "0".to_string()
        } else {
            clashes.join("; ")
        };
        CheckCase::zero_residual(
            format!(
                "injective on {} reduced monomials of degree <= 3",
                images.len()
            ),
            residual,
        )
    }

    /// Consistency checks of the two determinant expansions and of the basis
    /// reduction: re-expanding `D` recovers the input in `M_n`, and sending
    /// `D -> 1` in a GL reduction gives the SL reduction.
    pub fn check_identities(&self, max_degree: u32) -> CheckReport {
        let n = self.n();
        let mn = self.with_variant(Variant::Mn);
        let gl = self.with_variant(Variant::GLn);
        let sl = self.with_variant(Variant::SLn);
        let mut cases = Vec::new();
        let det = mn.quantum_determinant();
        let rev = mn.quantum_determinant_reversed();
        cases.push(CheckCase::zero_residual(
            "D_q - sum (-q)^l(s) t[n,s(n)]...t[1,s(1)]",
            mn.format(&mn.sub(&det, &rev)),
        ));
        let desc = mn.quantum_determinant_descending();
        cases.push(CheckCase::zero_residual(
            "D_q - sum (-q)^-l(s) t[n,s(n)]...t[1,s(1)]",
            mn.format(&mn.sub(&det, &desc)),
        ));
        let targets: Vec<Monomial> = monomials_up_to_degree(n, max_degree)
            .into_iter()
            .filter(|m| gl.needs_reduction(m))
            .collect();
        let more: Vec<CheckCase> = targets
            .par_iter()
            .flat_map_iter(|m| {
                let label = m.display(self.order()).to_string();
                let input = gl.term(m.clone(), gl.ring().one());
                let reduced = gl.normalize(&input).expect("same algebra");
                let back = gl.to_wedge(&reduced).expect("GL");
                let plain = mn.term(m.clone(), mn.ring().one());
                let mut v = vec![
                    CheckCase::zero_residual(
                        format!("expand(reduce({label})) - {label}"),
                        mn.format(&mn.sub(&back, &plain)),
                    ),
                    CheckCase::new(
                        format!("reduce({label}) satisfies the basis constraint"),
                        if gl.is_reduced(&reduced) {
                            "0"
                        } else {
                            "violated"
                        },
                        gl.is_reduced(&reduced),
                    ),
                ];
                let sl_red = sl.normalize(&plain).expect("same algebra");
                let mut collapsed = BTreeMap::new();
                for (k, c) in reduced.terms() {
                    accumulate(
                        sl.ring(),
                        &mut collapsed,
                        k.clone().with_dpower(0),
                        c.clone(),
                    );
                }
                let diff = sl.sub(&Element::from_map(collapsed), &sl_red);
                v.push(CheckCase::zero_residual(
                    format!("reduce_GL({label})|D=1 - reduce_SL({label})"),
                    sl.format(&diff),
                ));
                v
            })
            .collect();
        cases.extend(more);
        CheckReport::new("identities", n, self.ring().ell()).with_cases(cases)
    }
}

/// All monomials (dpower 0) of total degree at most `d`, ascending.
pub fn monomials_up_to_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn go(pos: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if pos == cur.exps.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.exps[pos] = e;
            go(pos + 1, left - e, cur, out);
        }
        cur.exps[pos] = 0;
    }
    let mut out = Vec::new();
    go(0, d, &mut Monomial::one(n), &mut out);
    out.sort();
    out
}
