//! The functional `Phi` (coefficient of the top residue monomial), the pairing
//! `B(x, y) = Phi(x y)`, dual witnesses for non-degeneracy, and the Nakayama
//! twist `nu(t[i,j]) = eps^(2(i+j-n-1)) t[i,j]`.

use rayon::prelude::*;

use crate::coeff::{CoeffRing, CycloElem};
use crate::error::{Error, Result};
use crate::monomial::{GenIndex, Monomial};
use crate::report::{CheckCase, CheckReport};
use crate::rewrite::{Element, Variant};
use crate::rootspec::{ClassicalPoly, RootContext};

/// `(sign, k)` standing for `sign * eps^k`.
pub type SignedEpsPower = (i8, u32);

/// Outcome of the non-degeneracy search for one element.
#[derive(Clone, Debug)]
pub struct Witness {
    /// Residue key of maximal weight with nonzero coefficient.
    pub key: Monomial,
    pub z: ClassicalPoly,
    /// The dual monomial `x` of `key`.
    pub x: Monomial,
    /// `Phi(x * key)`.
    pub unit: CycloElem,
    /// `Phi(x * a)`.
    pub phi_xa: ClassicalPoly,
    /// Whether `Phi(x * a) = unit * z`.
    pub holds: bool,
}

/// Frobenius data for `M_n` or `GL_n` at an odd root order, row-major order.
#[derive(Clone, Debug)]
pub struct FrobeniusContext {
    root: RootContext,
    top: Monomial,
}

impl FrobeniusContext {
    pub fn new(n: usize, ell: i64, variant: Variant) -> Result<Self> {
        if ell % 2 == 0 || ell < 1 {
            return Err(Error::Parameter(format!(
                "ell must be odd and positive, got {ell}"
            )));
        }
        Self::from_root(RootContext::standard(n, ell, variant)?)
    }

    pub fn from_root(root: RootContext) -> Result<Self> {
        let n = root.n();
        let ell = root.ell();
        let top = Monomial {
            exps: vec![ell - 1; n * n],
            dpower: 0,
        };
        Ok(Self { root, top })
    }

    pub fn root(&self) -> &RootContext {
        &self.root
    }

    pub fn n(&self) -> usize {
        self.root.n()
    }

    pub fn ell(&self) -> u32 {
        self.root.ell()
    }

    /// `prod t[i,j]^(ell-1)`
    pub fn top(&self) -> &Monomial {
        &self.top
    }

    fn alg(&self) -> &crate::rewrite::Algebra<crate::coeff::CycloRing> {
        self.root.algebra()
    }

    pub fn basis_element(&self, m: &Monomial) -> Element<CycloElem> {
        self.alg().term(m.clone(), self.alg().ring().one())
    }

    /// Coefficient of the top residue monomial in the module expansion.
    pub fn phi(&self, e: &Element<CycloElem>) -> Result<ClassicalPoly> {
        let x = self.root.module_expand(e)?;
        Ok(x.get(&self.top).cloned().unwrap_or_default())
    }

    pub fn bform(&self, x: &Element<CycloElem>, y: &Element<CycloElem>) -> Result<ClassicalPoly> {
        self.phi(&self.alg().multiply(x, y)?)
    }

    /// `Phi(a * b)` for residue monomials.
    pub fn bform_monomials(&self, a: &Monomial, b: &Monomial) -> ClassicalPoly {
        self.bform(&self.basis_element(a), &self.basis_element(b))
            .expect("basis monomials of this context")
    }

    /// Exponents `ell - 1 - N[i,j]`.
    pub fn dual_witness(&self, m: &Monomial) -> Result<Monomial> {
        let ell = self.ell();
        if m.dpower != 0 || m.exps.len() != self.top.exps.len() || m.exps.iter().any(|&e| e >= ell)
        {
            return Err(Error::Precondition(format!(
                "{} is not a residue monomial for ell={ell}",
                m.display(self.alg().order())
            )));
        }
        Ok(Monomial {
            exps: m.exps.iter().map(|e| ell - 1 - e).collect(),
            dpower: 0,
        })
    }

    /// `(sign, k)` when `p` is the constant `sign * eps^k`.
    pub fn as_unit(&self, p: &ClassicalPoly) -> Option<SignedEpsPower> {
        p.as_scalar()?.as_signed_eps_power()
    }

    /// Picks the residue key of maximal weight in the expansion of `a` and
    /// checks `Phi(dual(key) * a) = Phi(dual(key) * key) * z_key`.
    pub fn check_nondegenerate(&self, a: &Element<CycloElem>) -> Result<Witness> {
        if a.is_zero() {
            return Err(Error::Precondition(
                "the zero element has no witness".into(),
            ));
        }
        let expansion = self.root.module_expand(a)?;
        let (key, z) = expansion
            .entries
            .iter()
            .next_back()
            .map(|(k, z)| (k.clone(), z.clone()))
            .expect("nonzero element has a nonzero expansion");
        let x = self.dual_witness(&key)?;
        let unit_poly = self.bform_monomials(&x, &key);
        let unit = unit_poly.as_scalar().ok_or_else(|| {
            Error::Precondition(format!(
                "Phi(dual * key) = {} is not a scalar",
                self.root.format_classical(&unit_poly)
            ))
        })?;
        let phi_xa = self.bform(&self.basis_element(&x), a)?;
        let expected = self.root.classical().scale(&z, &unit);
        let holds = phi_xa == expected && unit.as_signed_eps_power().is_some();
        Ok(Witness {
            key,
            z,
            x,
            unit,
            phi_xa,
            holds,
        })
    }

    /// For every residue monomial `m`: `Phi(dual(m) m)` is `±eps^k`, and
    /// `Phi(dual(m) m') = 0` for every residue monomial `m' < m` in weight order.
    pub fn check_dual_witnesses(&self) -> CheckReport {
        let basis: Vec<Monomial> = {
            let mut b: Vec<_> = self.root.basis().collect();
            b.sort();
            b
        };
        let order = self.alg().order();
        let cases: Vec<CheckCase> = basis
            .par_iter()
            .enumerate()
            .flat_map_iter(|(idx, m)| {
                let x = self.dual_witness(m).expect("residue monomial");
                let label = m.display(order).to_string();
                let u = self.bform_monomials(&x, m);
                let mut out = vec![CheckCase::new(
                    format!("Phi(dual({label}) {label}) is a unit"),
                    self.root.format_classical(&u),
                    self.as_unit(&u).is_some(),
                )];
                let bad: Vec<String> = basis[..idx]
                    .iter()
                    .filter_map(|lower| {
                        let v = self.bform_monomials(&x, lower);
                        (!v.is_zero()).then(|| {
                            format!(
                                "{}: {}",
                                lower.display(order),
                                self.root.format_classical(&v)
                            )
                        })
                    })
                    .collect();
                out.push(CheckCase::zero_residual(
                    format!("Phi(dual({label}) m') = 0 for {idx} lower m'"),
                    if bad.is_empty() {
                        "0".to_string()
                    } else {
                        bad.join("; ")
                    },
                ));
                out
            })
            .collect();
        CheckReport::new("dual-witness", self.n(), Some(self.ell())).with_cases(cases)
    }

    /// `2(i+j-n-1)`
    pub fn nakayama_exponent(&self, g: GenIndex) -> i64 {
        2 * (g.i as i64 + g.j as i64 - self.n() as i64 - 1)
    }

    /// Total exponent of `eps` by which `nu` rescales `m`.
    pub fn nakayama_weight(&self, m: &Monomial, exponent: impl Fn(GenIndex) -> i64) -> i64 {
        let n = self.n();
        m.exps
            .iter()
            .enumerate()
            .map(|(g, &e)| exponent(GenIndex::from_id(g as u8, n)) * e as i64)
            .sum()
    }

    /// `nu(t[i,j]) = eps^(2(i+j-n-1)) t[i,j]`, extended multiplicatively. `D` is fixed.
    pub fn nakayama(&self, e: &Element<CycloElem>) -> Element<CycloElem> {
        self.twist(e, 1, |g| self.nakayama_exponent(g))
    }

    pub fn nakayama_inverse(&self, e: &Element<CycloElem>) -> Element<CycloElem> {
        self.twist(e, -1, |g| self.nakayama_exponent(g))
    }

    /// Rescales each monomial by `eps^(sign * sum exponent(g) N[g])`.
    pub fn twist(
        &self,
        e: &Element<CycloElem>,
        sign: i64,
        exponent: impl Fn(GenIndex) -> i64,
    ) -> Element<CycloElem> {
        let ring = self.alg().ring();
        let scaled = e.terms().map(|(m, c)| {
            let s = ring.eps_pow(sign * self.nakayama_weight(m, &exponent));
            (m.clone(), ring.mul(c, &s))
        });
        let mut out = self.alg().zero();
        for (m, c) in scaled {
            out = self.alg().add(&out, &self.alg().term(m, c));
        }
        out
    }

    /// `Phi(prod t^e * t[i,j])` and `Phi(t[i,j] * prod t^e)` with
    /// `e = (ell-1) - delta_(i,j)`, each as `(sign, k)` when it is `±eps^k`.
    pub fn leading_phi(&self, g: GenIndex) -> (Option<SignedEpsPower>, Option<SignedEpsPower>) {
        let mut e = self.top.clone();
        let id = g.id(self.n()) as usize;
        e.exps[id] -= 1;
        let t = self.alg().t(g.i, g.j);
        let b = self.basis_element(&e);
        let right = self
            .phi(&self.alg().multiply(&b, &t).expect("same algebra"))
            .expect("expand");
        let left = self
            .phi(&self.alg().multiply(&t, &b).expect("same algebra"))
            .expect("expand");
        (self.as_unit(&right), self.as_unit(&left))
    }

    /// Exponents `c(i,j)` with `Phi(prod t^e t[i,j]) = eps^c(i,j) Phi(t[i,j] prod t^e)`
    /// measured by the engine, row-major by generator. `None` if a value is not a unit.
    pub fn derived_nakayama_exponents(&self) -> Option<Vec<i64>> {
        let n = self.n();
        let ell = self.ell() as i64;
        (1..=n)
            .flat_map(|i| (1..=n).map(move |j| GenIndex::new(i, j)))
            .map(|g| {
                let (Some((sr, kr)), Some((sl, kl))) = self.leading_phi(g) else {
                    return None;
                };
                if sr != sl {
                    return None;
                }
                let c = (kr as i64 - kl as i64).rem_euclid(ell);
                // Representative in (-ell/2, ell/2].
                Some(if c > ell / 2 { c - ell } else { c })
            })
            .collect()
    }

    /// `Phi(m t[i,j]) = Phi(nu(t[i,j]) m)` for every generator and residue
    /// monomial `m`, and `B(x, y) = B(nu(y), x)` on residue pairs.
    ///
    /// The pair grid is exhaustive when there are at most 81 residue monomials;
    /// otherwise a fixed sample of `pair_sample` pairs is used.
    pub fn check_nakayama(&self, pair_sample: usize) -> CheckReport {
        self.check_twist("nakayama", pair_sample, |g| self.nakayama_exponent(g))
    }

    /// Same suite for an arbitrary diagonal twist `t[i,j] -> eps^c(i,j) t[i,j]`.
    pub fn check_twist(
        &self,
        name: &str,
        pair_sample: usize,
        exponent: impl Fn(GenIndex) -> i64 + Sync,
    ) -> CheckReport {
        let n = self.n();
        let alg = self.alg();
        let ring = alg.ring();
        let order = alg.order();
        let mut basis: Vec<Monomial> = self.root.basis().collect();
        basis.sort();
        let gens: Vec<GenIndex> = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| GenIndex::new(i, j)))
            .collect();
        let twist = |e: &Element<CycloElem>| self.twist(e, 1, &exponent);

        let jobs: Vec<(GenIndex, &Monomial)> = gens
            .iter()
            .flat_map(|&g| basis.iter().map(move |m| (g, m)))
            .collect();
        let mut cases: Vec<CheckCase> = jobs
            .par_iter()
            .map(|&(g, m)| {
                let b = self.basis_element(m);
                let t = alg.t(g.i, g.j);
                let lhs = self
                    .phi(&alg.multiply(&b, &t).expect("same algebra"))
                    .expect("expand");
                let rhs = self
                    .phi(&alg.multiply(&twist(&t), &b).expect("same algebra"))
                    .expect("expand");
                let cl = self.root.classical();
                let diff = cl.add(&lhs, &cl.scale(&rhs, &ring.from_int(-1)));
                CheckCase::zero_residual(
                    format!(
                        "Phi({} {g}) - Phi(nu({g}) {})",
                        m.display(order),
                        m.display(order)
                    ),
                    cl.format(&diff),
                )
            })
            .collect();

        let pairs: Vec<(usize, usize)> = if basis.len() <= 81 {
            (0..basis.len())
                .flat_map(|a| (0..basis.len()).map(move |b| (a, b)))
                .collect()
        } else {
            sample_pairs(basis.len(), pair_sample)
        };
        let pair_cases: Vec<CheckCase> = pairs
            .par_iter()
            .map(|&(a, b)| {
                let x = self.basis_element(&basis[a]);
                let y = self.basis_element(&basis[b]);
                let lhs = self.bform(&x, &y).expect("same context");
                let rhs = self.bform(&twist(&y), &x).expect("same context");
                let cl = self.root.classical();
                let diff = cl.add(&lhs, &cl.scale(&rhs, &ring.from_int(-1)));
                CheckCase::zero_residual(
                    format!(
                        "B({}, {}) - B(nu({}), {})",
                        basis[a].display(order),
                        basis[b].display(order),
                        basis[b].display(order),
                        basis[a].display(order)
                    ),
                    cl.format(&diff),
                )
            })
            .collect();
        cases.extend(pair_cases);
        CheckReport::new(name, n, Some(self.ell())).with_cases(cases)
    }
}

/// `count` distinct index pairs spread over `[0, len)^2`, deterministic.
fn sample_pairs(len: usize, count: usize) -> Vec<(usize, usize)> {
    let total = len * len;
    let count = count.min(total);
    // Stride coprime to `total` visits distinct cells.
    let mut stride = (total as f64 * 0.618_033_988_7) as usize | 1;
    while num_integer::gcd(stride, total) != 1 {
        stride += 2;
    }
    (0..count)
        .map(|k| {
            let cell = (k * stride) % total;
            (cell / len, cell % len)
        })
        .collect()
}
