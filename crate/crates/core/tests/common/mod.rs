#![allow(dead_code)]

use qcoord::coeff::{CoeffRing, CycloElem, CycloRing};
use qcoord::monomial::Monomial;
use qcoord::rewrite::{Algebra, Element};
use qcoord::rootspec::{ClassicalMonomial, ClassicalPoly, ModuleExpansion, RootContext};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_monomial(rng: &mut TestRng, n: usize, max_exp: u32) -> Monomial {
    Monomial {
        exps: (0..n * n).map(|_| rng.gen_range(0..=max_exp)).collect(),
        dpower: 0,
    }
}

/// `±k eps^j` with `1 <= k <= 3`.
pub fn random_scalar(rng: &mut TestRng, ring: &CycloRing) -> CycloElem {
    let k = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
    ring.mul(&ring.from_int(k), &ring.eps_pow(rng.gen_range(0..8)))
}

/// Sum of up to `terms` ordered monomials with exponents `<= max_exp`.
pub fn random_element(
    rng: &mut TestRng,
    alg: &Algebra<CycloRing>,
    terms: usize,
    max_exp: u32,
) -> Element<CycloElem> {
    let mut acc = alg.zero();
    for _ in 0..rng.gen_range(1..=terms) {
        let m = random_monomial(rng, alg.n(), max_exp);
        let c = random_scalar(rng, alg.ring());
        acc = alg.add(&acc, &alg.term(m, c));
    }
    acc
}

pub fn random_classical(rng: &mut TestRng, root: &RootContext, max_exp: u32) -> ClassicalPoly {
    let cl = root.classical();
    let terms: Vec<_> = (0..rng.gen_range(1..=3))
        .map(|_| {
            (
                ClassicalMonomial(random_monomial(rng, root.n(), max_exp)),
                random_scalar(rng, cl.ring()),
            )
        })
        .collect();
    cl.from_terms(terms)
}

/// Random expansion over the residue basis with up to `keys` nonzero entries.
pub fn random_expansion(rng: &mut TestRng, root: &RootContext, keys: usize) -> ModuleExpansion {
    let mut x = ModuleExpansion::default();
    for _ in 0..rng.gen_range(1..=keys) {
        let key = random_monomial(rng, root.n(), root.ell() - 1);
        let c = random_classical(rng, root, 1);
        if !c.is_zero() {
            x.entries.insert(key, c);
        }
    }
    x
}
