//! The series `V′ = Σ_λ q^{|λ|} exp(Σ_{k≥2} p_k(λ) t_k)`, its renormalization
//! `V = exp(-Σ_j ξ(-j) t_j)·V′` with `t_1 = log q`, and the Taylor coefficients
//! `A_K` of `V` in `t_2, t_3, …`.
//!
//! The `X^b` coefficient of `ηZ` is recovered as
//! `(1/b!)·η·[φ_m(D + ξ(-1), D_2 + ξ(-2), …)^b V]_{t=0}`, where `D_k = ∂/∂t_k` shifts
//! the Taylor index and `D = q d/dq` acts on the `q^(-1/24)`-offset series.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;

use crate::error::{HqmError, Result};
use crate::exactq::{binomial, factorial, int, q_trunc, QSeries, Rational};
use crate::partitions::enumerate_partitions;
use crate::phipoly::{build_phi_symbolic, YPoly};
use crate::quasimod::bernoulli;

/// `ξ(-j) = (2^{-j} - 1)·ζ(-j)` with `ζ(-j) = -B_{j+1}/(j+1)`.
pub fn xi_neg(j: u32) -> Result<Rational> {
    if j == 0 {
        return Err(HqmError::InvalidArgument("xi_neg needs j >= 1".into()));
    }
    let zeta = -bernoulli(j as usize + 1) / int(j as i64 + 1);
    let two_pow = Rational::new(BigInt::one(), BigInt::from(2).pow(j));
    Ok((two_pow - Rational::one()) * zeta)
}

/// `K = (k_2, k_3, …)`; entry `i` of the vector is `k_{i+2}`. Trailing zeros are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(mut ks: Vec<u32>) -> Self {
        while ks.last() == Some(&0) {
            ks.pop();
        }
        MultiIndex(ks)
    }

    pub fn zero() -> Self {
        MultiIndex(Vec::new())
    }

    /// `k_i` for `i ≥ 2`.
    pub fn get(&self, i: usize) -> u32 {
        if i < 2 {
            return 0;
        }
        self.0.get(i - 2).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Largest `i` with `k_i > 0`, or 1 for the zero index.
    pub fn max_var(&self) -> usize {
        self.0.len() + 1
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `Σ_{i≥2} (i+1)·k_i`.
    pub fn weight(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(j, &k)| (j as u32 + 3) * k)
            .sum()
    }

    /// `K!` = `∏ k_i!`.
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&k| factorial(k as u64)).product()
    }

    /// All `L ≤ K` componentwise.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::new()];
        for &k in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=k).map(move |l| {
                        let mut v = prefix.clone();
                        v.push(l);
                        v
                    })
                })
                .collect();
        }
        let mut out: Vec<MultiIndex> = out.into_iter().map(MultiIndex::new).collect();
        out.sort();
        out
    }

    /// All indices in variables `t_2..t_mmax` of total degree `≤ tmax`.
    pub fn all_up_to(mmax: usize, tmax: u32) -> Vec<MultiIndex> {
        let nvars = mmax.saturating_sub(1);
        let mut out = Vec::new();
        fn rec(j: usize, nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if j == nvars {
                out.push(MultiIndex::new(cur.clone()));
                return;
            }
            for a in 0..=left {
                cur.push(a);
                rec(j + 1, nvars, left - a, cur, out);
                cur.pop();
            }
        }
        rec(0, nvars, tmax, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    fn add_unit(&self, i: usize) -> MultiIndex {
        let mut v = self.0.clone();
        if v.len() < i - 1 {
            v.resize(i - 1, 0);
        }
        v[i - 2] += 1;
        MultiIndex::new(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for MultiIndex {
    type Err = HqmError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(MultiIndex::zero());
        }
        s.split(',')
            .map(|x| {
                x.trim()
                    .parse::<u32>()
                    .map_err(|_| HqmError::Parse(format!("bad multi-index entry {x:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(MultiIndex::new)
    }
}

/// `Σ_{λ, |λ|≤dmax} ∏_i p_i(λ)^{l_i} q^{|λ|}` for every `L` in `indices`, one pass over
/// the partitions.
pub fn vprime_taylor_batch(indices: &[MultiIndex], dmax: usize) -> BTreeMap<MultiIndex, QSeries> {
    let mmax = indices.iter().map(MultiIndex::max_var).max().unwrap_or(1);
    let per_d: Vec<Vec<Rational>> = (0..=dmax)
        .into_par_iter()
        .map(|d| {
            let mut sums = vec![Rational::zero(); indices.len()];
            for lambda in enumerate_partitions(d) {
                let ps = lambda.power_sums(mmax as u32);
                for (s, l) in sums.iter_mut().zip(indices) {
                    let mut t = Rational::one();
                    for (j, &e) in l.entries().iter().enumerate() {
                        if e > 0 {
                            t *= Pow::pow(&ps[j + 1], e);
                        }
                    }
                    *s += t;
                }
            }
            sums
        })
        .collect();
    indices
        .iter()
        .enumerate()
        .map(|(n, l)| {
            let coeffs = per_d.iter().map(|row| row[n].clone()).collect();
            (l.clone(), QSeries::from_q_coeffs(coeffs))
        })
        .collect()
}

/// `t^K/K!`-coefficient of `V′` through `q^dmax`.
pub fn vprime_taylor(k: &MultiIndex, dmax: usize) -> QSeries {
    vprime_taylor_batch(std::slice::from_ref(k), dmax)
        .remove(k)
        .expect("requested index")
}

fn xi_table(mmax: usize) -> Vec<Rational> {
    (0..=mmax as u32)
        .map(|j| {
            if j == 0 {
                Rational::zero()
            } else {
                xi_neg(j).expect("j >= 1")
            }
        })
        .collect()
}

/// `A_K = q^(-1/24)·Σ_{L≤K} ∏ binom(k_j, l_j)(-ξ(-j))^{k_j-l_j}·V′_L`, from precomputed `V′_L`.
fn a_from_vprime(
    k: &MultiIndex,
    vprime: &BTreeMap<MultiIndex, QSeries>,
    xi: &[Rational],
    trunc: i64,
) -> QSeries {
    let mut acc = QSeries::zero(trunc);
    for l in k.sub_indices() {
        let mut c = Rational::one();
        for i in 2..=k.max_var() {
            let (ki, li) = (k.get(i), l.get(i));
            c *= Rational::from_integer(binomial(ki as i64, li as i64));
            c *= Pow::pow(-&xi[i], ki - li);
        }
        if !c.is_zero() {
            acc = &acc + &vprime[&l].scale(&c);
        }
    }
    acc.shift(-1)
}

/// `A_K` through `q^dmax`, stored with exponent offset `-1` (the factor `q^(-1/24)`).
pub fn v_taylor(k: &MultiIndex, dmax: usize) -> QSeries {
    let subs = k.sub_indices();
    let vprime = vprime_taylor_batch(&subs, dmax);
    a_from_vprime(k, &vprime, &xi_table(k.max_var()), q_trunc(dmax as i64))
}

/// `η·A`, for a series carrying the `q^(-1/24)` offset; the result has integer exponents.
pub fn eta_times(a: &QSeries) -> QSeries {
    let eta = QSeries::eta_series(a.trunc() + 2);
    let out = &eta * a;
    debug_assert!(out.has_integer_exponents());
    out
}

/// Taylor coefficients `A_K` of `V` for all `K` in `t_2..t_mmax` of total degree `≤ tmax`.
#[derive(Clone, Debug)]
pub struct TSeries {
    mmax: usize,
    tmax: u32,
    coeffs: BTreeMap<MultiIndex, QSeries>,
}

impl TSeries {
    pub fn build(mmax: usize, tmax: u32, dmax: usize) -> Self {
        let indices = MultiIndex::all_up_to(mmax, tmax);
        let vprime = vprime_taylor_batch(&indices, dmax);
        let xi = xi_table(mmax);
        let trunc = q_trunc(dmax as i64);
        let coeffs = indices
            .par_iter()
            .map(|k| (k.clone(), a_from_vprime(k, &vprime, &xi, trunc)))
            .collect();
        TSeries { mmax, tmax, coeffs }
    }

    pub fn mmax(&self) -> usize {
        self.mmax
    }

    pub fn tmax(&self) -> u32 {
        self.tmax
    }

    pub fn coeff(&self, k: &MultiIndex) -> Result<&QSeries> {
        if k.max_var() > self.mmax {
            return Err(HqmError::InsufficientTruncation {
                variable: k.max_var(),
                required: k.get(k.max_var()),
                available: 0,
            });
        }
        self.coeffs.get(k).ok_or(HqmError::InsufficientTruncation {
            variable: k.max_var(),
            required: k.degree(),
            available: self.tmax,
        })
    }

    /// `(D_i + c)` applied termwise: `A_K ↦ A_{K+e_i} + c·A_K`; loses one degree.
    pub fn apply_shifted_derivative(&self, i: usize, c: &Rational) -> Result<TSeries> {
        if i < 2 || i > self.mmax || self.tmax == 0 {
            return Err(HqmError::InsufficientTruncation {
                variable: i,
                required: 1,
                available: if i <= self.mmax { self.tmax } else { 0 },
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(k, _)| k.degree() < self.tmax)
            .map(|(k, a)| {
                let shifted = &self.coeffs[&k.add_unit(i)];
                (k.clone(), shifted + &a.scale(c))
            })
            .collect();
        Ok(TSeries {
            mmax: self.mmax,
            tmax: self.tmax - 1,
            coeffs,
        })
    }

    /// Value at `t_2 = t_3 = … = 0`, i.e. `A_0`.
    pub fn at_zero(&self) -> &QSeries {
        &self.coeffs[&MultiIndex::zero()]
    }
}

/// Largest `Σ_{k≥2} a_k` over the monomials of `poly`.
fn t_degree_needed(poly: &YPoly) -> u32 {
    poly.terms()
        .map(|(e, _)| e.iter().skip(1).sum::<u32>())
        .max()
        .unwrap_or(0)
}

/// `∏(1-q^n)·Ẑ_b/b!` through the operator route, using `A_K` from `tseries`.
pub fn etaz_via_operator(b: u32, phi: &YPoly, tseries: &TSeries) -> Result<QSeries> {
    let m = phi.nvars();
    let power = phi.pow(b);
    let needed = t_degree_needed(&power);
    if needed > tseries.tmax() {
        return Err(HqmError::InsufficientTruncation {
            variable: 2,
            required: needed,
            available: tseries.tmax(),
        });
    }
    let xi = xi_table(m);
    let trunc = tseries.at_zero().trunc();
    let mut total = QSeries::zero(trunc);
    for (exps, c) in power.terms() {
        // Σ_{L≤a'} ∏ binom(a_k, l_k) ξ(-k)^{a_k-l_k} A_L
        let a_rest = MultiIndex::new(exps[1..].to_vec());
        let mut inner = QSeries::zero(trunc);
        for l in a_rest.sub_indices() {
            let mut w = Rational::one();
            for k in 2..=m {
                let (ak, lk) = (a_rest.get(k), l.get(k));
                w *= Rational::from_integer(binomial(ak as i64, lk as i64));
                w *= Pow::pow(&xi[k], ak - lk);
            }
            if !w.is_zero() {
                inner = &inner + &tseries.coeff(&l)?.scale(&w);
            }
        }
        for _ in 0..exps[0] {
            inner = &inner.d_operator() + &inner.scale(&xi[1]);
        }
        total = &total + &inner.scale(c);
    }
    let out = eta_times(&total).scale(&Rational::new(BigInt::one(), factorial(b as u64)));
    Ok(out)
}

/// As [`etaz_via_operator`] with `φ_m` built symbolically and `V` expanded as needed.
pub fn etaz_via_operator_auto(m: usize, b: u32, dmax: usize) -> Result<QSeries> {
    let phi = build_phi_symbolic(m)?;
    let needed = t_degree_needed(&phi.pow(b));
    let tseries = TSeries::build(m, needed, dmax);
    etaz_via_operator(b, &phi, &tseries)
}

/// z⁰-coefficient of `∏_{p∈1/2+Z≥0} (1 + z q^p)(1 + z⁻¹ q^p)` through `q^dmax`, by direct
/// expansion of the truncated product.
pub fn product_z0_coefficient(dmax: usize) -> QSeries {
    // Keys (z exponent, 2·q exponent).
    let limit = 2 * dmax as i64;
    let mut acc: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
    acc.insert((0, 0), BigInt::one());
    let mut two_p = 1;
    while two_p <= limit {
        for z in [1i64, -1] {
            let mut next = acc.clone();
            for ((ze, qe), c) in &acc {
                if qe + two_p <= limit {
                    *next
                        .entry((ze + z, qe + two_p))
                        .or_insert_with(BigInt::zero) += c;
                }
            }
            acc = next;
        }
        two_p += 2;
    }
    let coeffs = (0..=dmax as i64)
        .map(|d| Rational::from_integer(acc.get(&(0, 2 * d)).cloned().unwrap_or_else(BigInt::zero)))
        .collect();
    QSeries::from_q_coeffs(coeffs)
}
