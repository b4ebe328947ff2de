//! Eisenstein series and the ring `Q[E2, E4, E6]` of quasimodular forms.
//!
//! `fit_qm` finds the unique polynomial of weight `≤ W` whose expansion matches a given
//! q-series on every known coefficient. Coefficients beyond the rank-determining ones
//! are verification equations; the answer is then re-expanded and compared again.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{HqmError, Result};
use crate::exactq::{binomial, fmt_rational, int, q_trunc, rat, QSeries, Rational};
use crate::linsolve::IncrementalSolver;

/// Bernoulli numbers `B_0 = 1, B_1 = -1/2, …`, extended on demand.
#[derive(Clone, Debug)]
pub struct BernoulliCache {
    values: Vec<Rational>,
}

impl Default for BernoulliCache {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliCache {
    pub fn new() -> Self {
        BernoulliCache {
            values: vec![Rational::one()],
        }
    }

    pub fn get(&mut self, n: usize) -> Rational {
        while self.values.len() <= n {
            // Σ_{k=0}^{N} binom(N+1, k) B_k = 0
            let big_n = self.values.len();
            let s: Rational = self
                .values
                .iter()
                .enumerate()
                .map(|(k, b)| b * Rational::from_integer(binomial(big_n as i64 + 1, k as i64)))
                .sum();
            self.values.push(-s / int(big_n as i64 + 1));
        }
        self.values[n].clone()
    }
}

pub fn bernoulli(n: usize) -> Rational {
    BernoulliCache::new().get(n)
}

fn divisor_power_sum(n: u64, power: u32) -> BigInt {
    (1..=n)
        .filter(|k| n.is_multiple_of(*k))
        .map(|k| BigInt::from(k).pow(power))
        .sum()
}

/// `E_k = 1 - (2k/B_k) Σ σ_{k-1}(n) q^n` through `q^dmax`, for `k ∈ {2, 4, 6}`.
pub fn eisenstein(k: u32, dmax: usize) -> Result<QSeries> {
    if !matches!(k, 2 | 4 | 6) {
        return Err(HqmError::InvalidArgument(format!(
            "Eisenstein weight must be 2, 4 or 6, got {k}"
        )));
    }
    let factor = -int(2 * k as i64) / bernoulli(k as usize);
    let mut coeffs = vec![Rational::one()];
    for n in 1..=dmax as u64 {
        coeffs.push(&factor * Rational::from_integer(divisor_power_sum(n, k - 1)));
    }
    Ok(QSeries::from_q_coeffs(coeffs))
}

/// Exponent triple `(a, b, c)` of `E2^a E4^b E6^c`.
pub type QMExp = (u32, u32, u32);

pub fn qm_weight(e: QMExp) -> u32 {
    2 * e.0 + 4 * e.1 + 6 * e.2
}

/// All exponent triples of weight `≤ wmax`, ordered by weight then lexicographically.
pub fn qm_basis(wmax: u32) -> Vec<QMExp> {
    let mut out = Vec::new();
    for c in 0..=wmax / 6 {
        for b in 0..=(wmax - 6 * c) / 4 {
            for a in 0..=(wmax - 6 * c - 4 * b) / 2 {
                out.push((a, b, c));
            }
        }
    }
    out.sort_by_key(|&e| (qm_weight(e), e));
    out
}

/// Polynomial in `E2, E4, E6` over Q.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QMPoly {
    terms: BTreeMap<QMExp, Rational>,
}

impl QMPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (QMExp, Rational)>>(terms: I) -> Self {
        let mut map: BTreeMap<QMExp, Rational> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        QMPoly { terms: map }
    }

    pub fn monomial(e: QMExp, c: Rational) -> Self {
        Self::from_terms([(e, c)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: QMExp) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms ordered by weight, then exponent triple.
    pub fn terms(&self) -> Vec<(QMExp, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (*e, c)).collect();
        v.sort_by_key(|(e, _)| (qm_weight(*e), *e));
        v
    }

    /// Weights present, with the number of monomials of each.
    pub fn weight_breakdown(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for e in self.terms.keys() {
            *out.entry(qm_weight(*e)).or_insert(0) += 1;
        }
        out
    }

    /// The single weight of a nonzero homogeneous polynomial.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let b = self.weight_breakdown();
        (b.len() == 1).then(|| *b.keys().next().expect("one weight"))
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(|e| qm_weight(*e)).max()
    }

    pub fn to_json(&self) -> Vec<([u32; 3], String)> {
        self.terms()
            .into_iter()
            .map(|(e, c)| ([e.0, e.1, e.2], fmt_rational(c)))
            .collect()
    }
}

impl fmt::Display for QMPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, ((a, b, c), coeff)) in self.terms().into_iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({coeff})")?;
            for (name, p) in [("E2", a), ("E4", b), ("E6", c)] {
                match p {
                    0 => {}
                    1 => write!(f, "·{name}")?,
                    _ => write!(f, "·{name}^{p}")?,
                }
            }
        }
        Ok(())
    }
}

/// Expansions of `E2^a E4^b E6^c` through a fixed `dmax`, with cached powers.
#[derive(Clone, Debug)]
pub struct EisensteinBasis {
    dmax: usize,
    powers: [Vec<QSeries>; 3],
}

impl EisensteinBasis {
    pub fn new(dmax: usize) -> Self {
        let gens = [2, 4, 6].map(|k| eisenstein(k, dmax).expect("supported weight"));
        let trunc = q_trunc(dmax as i64);
        EisensteinBasis {
            dmax,
            powers: gens.map(|g| vec![QSeries::one(trunc), g]),
        }
    }

    pub fn dmax(&self) -> usize {
        self.dmax
    }

    fn power(&mut self, which: usize, n: u32) -> QSeries {
        let list = &mut self.powers[which];
        while list.len() <= n as usize {
            let next = &list[list.len() - 1] * &list[1];
            list.push(next);
        }
        list[n as usize].clone()
    }

    pub fn monomial(&mut self, e: QMExp) -> QSeries {
        let a = self.power(0, e.0);
        let b = self.power(1, e.1);
        let c = self.power(2, e.2);
        &(&a * &b) * &c
    }

    pub fn eval(&mut self, p: &QMPoly) -> QSeries {
        let mut acc = QSeries::zero(q_trunc(self.dmax as i64));
        for (e, c) in p.terms() {
            acc = &acc + &self.monomial(e).scale(c);
        }
        acc
    }
}

/// Expand `p` in q through `q^dmax`.
pub fn qm_eval(p: &QMPoly, dmax: usize) -> QSeries {
    EisensteinBasis::new(dmax).eval(p)
}

/// Result of an exact fit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMFit {
    pub poly: QMPoly,
    pub wmax: u32,
    pub unknowns: usize,
    /// Coefficients used before the system reached full rank.
    pub determining: usize,
    /// Consistent coefficients checked after full rank.
    pub surplus_verified: usize,
}

/// Fit `f` (integer exponents) by a polynomial of weight `≤ wmax`, demanding at least
/// `margin` verification coefficients beyond those that fix the solution.
pub fn fit_qm(f: &QSeries, wmax: u32, margin: usize) -> Result<QMFit> {
    if !f.has_integer_exponents() || f.valuation() < 0 {
        return Err(HqmError::Precondition(
            "fit needs a series with nonnegative integer exponents".into(),
        ));
    }
    let known = (f.q_known() + 1).max(0) as usize;
    let basis = qm_basis(wmax);
    if known < basis.len() + margin {
        return Err(HqmError::Underdetermined {
            known,
            required: basis.len() + margin,
        });
    }
    let dmax = known - 1;
    let mut eis = EisensteinBasis::new(dmax);
    let columns: Vec<QSeries> = basis.iter().map(|&e| eis.monomial(e)).collect();
    let mut solver = IncrementalSolver::new(basis.len());
    for n in 0..known as i64 {
        let row: Vec<Rational> = columns.iter().map(|c| c.q_coeff(n)).collect();
        solver
            .push(&row, &f.q_coeff(n))
            .map_err(|_| HqmError::FitFailure { index: n as usize })?;
    }
    let determining = match solver.full_rank_after() {
        Some(k) if solver.verified() >= margin => k,
        Some(k) => {
            return Err(HqmError::Underdetermined {
                known,
                required: k + margin,
            })
        }
        None => {
            return Err(HqmError::Underdetermined {
                known,
                required: known + 1,
            })
        }
    };
    let solution = solver.solution().expect("full rank");
    let poly = QMPoly::from_terms(basis.iter().copied().zip(solution));
    if let Some(e) = eis
        .eval(&poly)
        .first_difference(&f.truncate(q_trunc(dmax as i64)))
    {
        return Err(HqmError::FitFailure {
            index: e.div_euclid(24) as usize,
        });
    }
    Ok(QMFit {
        poly,
        wmax,
        unknowns: basis.len(),
        determining,
        surplus_verified: solver.verified(),
    })
}

/// `η·D^j(f)` from `g = η·f` through `η·D(A) = D(η·A) - (1/24)·E2·η·A`.
pub fn eta_mul_d_iter(eta_f: &QSeries, j: u32) -> QSeries {
    let dmax = eta_f.q_known().max(0) as usize;
    let e2 = eisenstein(2, dmax).expect("weight 2");
    let mut g = eta_f.clone();
    for _ in 0..j {
        let corr = (&e2 * &g).scale(&rat(1, 24));
        g = &g.d_operator() - &corr;
    }
    g
}

/// One identity check: `None` when it holds, else the first differing q-order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub first_difference: Option<i64>,
}

/// `D E2 = (E2² - E4)/12`, `D E4 = (E2E4 - E6)/3`, `D E6 = (E2E6 - E4²)/2`, `D log Δ = E2`.
pub fn check_derivation_system(dmax: usize) -> Vec<IdentityCheck> {
    let mut eis = EisensteinBasis::new(dmax);
    let e2 = eis.monomial((1, 0, 0));
    let e4 = eis.monomial((0, 1, 0));
    let e6 = eis.monomial((0, 0, 1));
    let poly = |terms: &[(QMExp, Rational)]| QMPoly::from_terms(terms.iter().cloned());
    let rhs = [
        poly(&[((2, 0, 0), rat(1, 12)), ((0, 1, 0), rat(-1, 12))]),
        poly(&[((1, 1, 0), rat(1, 3)), ((0, 0, 1), rat(-1, 3))]),
        poly(&[((1, 0, 1), rat(1, 2)), ((0, 2, 0), rat(-1, 2))]),
    ];
    let lhs = [e2.d_operator(), e4.d_operator(), e6.d_operator()];
    let names = [
        "D(E2) = (E2^2 - E4)/12",
        "D(E4) = (E2 E4 - E6)/3",
        "D(E6) = (E2 E6 - E4^2)/2",
    ];
    let to_q = |e: Option<i64>| e.map(|x| x.div_euclid(24));
    let mut out: Vec<IdentityCheck> = names
        .iter()
        .zip(lhs.iter().zip(rhs.iter()))
        .map(|(name, (l, r))| IdentityCheck {
            name,
            first_difference: to_q(l.first_difference(&eis.eval(r))),
        })
        .collect();
    // log Δ = log q + 24·log ∏(1-q^n)
    let trunc = q_trunc(dmax as i64);
    let log_prod = QSeries::euler_product(trunc)
        .log_series()
        .expect("constant term 1");
    let d_log_delta = &QSeries::one(trunc) + &log_prod.d_operator().scale(&int(24));
    out.push(IdentityCheck {
        name: "D(log Delta) = E2",
        first_difference: to_q(d_log_delta.first_difference(&e2)),
    });
    out
}
