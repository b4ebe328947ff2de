//! Counting `m`-simple covers of an elliptic curve.
//!
//! `N̂_{g,d} = Σ_{λ⊢d} f_λ(c^(m))^b` with `2g - 2 = (m-1)b`. The connected counts come
//! from `Σ_{b≥1} F_{1+(m-1)b/2} X^b/b! = log(∏(1-q^n)·Ẑ(q, X))`, which has integer
//! exponents and constant term 1. A brute-force enumeration of
//! `(α, β, γ_1, …, γ_b)` with `γ_1⋯γ_b = αβα⁻¹β⁻¹` checks small cases.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{f_mn, f_phi, f_residue, CharQuery, Route};
use crate::error::{HqmError, Result};
use crate::exactq::{factorial, int, q_trunc, QSeries, QSeriesJson, Rational, XSeries};
use crate::partitions::{enumerate_partitions, Partition};
use crate::phipoly::{build_phi_symbolic, YPoly};

/// Number of branch points `b` for genus `g`, if `2g - 2 = (m-1)b` has a solution `b ≥ 0`.
pub fn branch_points(m: usize, g: i64) -> Option<usize> {
    if m < 2 || g < 1 {
        return None;
    }
    let twice = 2 * (g - 1);
    let step = m as i64 - 1;
    (twice % step == 0).then(|| (twice / step) as usize)
}

/// `f_λ(c^(m))` for every `λ ⊢ d`, `d = 0..=dmax`, in enumeration order.
#[derive(Clone, Debug)]
pub struct FTable {
    m: usize,
    values: Vec<Vec<Rational>>,
}

impl FTable {
    /// Values through the polynomial `φ_m`.
    pub fn new(m: usize, dmax: usize) -> Result<Self> {
        let phi = build_phi_symbolic(m)?;
        Self::with_route(m, dmax, Route::Phi, Some(&phi))
    }

    pub fn with_route(m: usize, dmax: usize, route: Route, phi: Option<&YPoly>) -> Result<Self> {
        if m < 2 {
            return Err(HqmError::InvalidArgument(format!(
                "m must be at least 2, got {m}"
            )));
        }
        if route == Route::Phi && phi.is_none() {
            return Err(HqmError::InvalidArgument(
                "phi route needs a polynomial".into(),
            ));
        }
        let values = (0..=dmax)
            .into_par_iter()
            .map(|d| {
                enumerate_partitions(d)
                    .into_par_iter()
                    .map(|lambda| {
                        let q = CharQuery { lambda, m };
                        match route {
                            _ if q.d() < m => Ok(Rational::zero()),
                            Route::BorderStrip => Ok(f_mn(&q)),
                            Route::Residue => f_residue(&q),
                            Route::Phi => f_phi(&q, phi.expect("checked above")),
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FTable { m, values })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dmax(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self, d: usize) -> &[Rational] {
        &self.values[d]
    }

    /// `Σ_{λ⊢d} f_λ^b`; the empty partition contributes `f^0 = 1` only.
    pub fn nhat(&self, b: usize, d: usize) -> Rational {
        if d == 0 {
            return if b == 0 {
                Rational::one()
            } else {
                Rational::zero()
            };
        }
        self.values[d]
            .iter()
            .map(|f| Pow::pow(f, b as u32))
            .fold(Rational::zero(), |a, x| a + x)
    }

    /// `Σ_{d≤dmax} N̂ q^d` for one `b`.
    pub fn zhat_block(&self, b: usize) -> QSeries {
        QSeries::from_q_coeffs((0..=self.dmax()).map(|d| self.nhat(b, d)).collect())
    }

    /// Blocks `b = 0..=bmax`, computed in parallel.
    pub fn zhat_blocks(&self, bmax: usize) -> Vec<QSeries> {
        (0..=bmax)
            .into_par_iter()
            .map(|b| self.zhat_block(b))
            .collect()
    }

    /// `X`-series `∏(1-q^n)·Σ_b Ẑ_b X^b/b!` through `X^bmax`.
    pub fn eta_zhat(&self, bmax: usize) -> XSeries {
        let trunc = q_trunc(self.dmax() as i64);
        let euler = QSeries::euler_product(trunc);
        let coeffs = self
            .zhat_blocks(bmax)
            .into_iter()
            .enumerate()
            .map(|(b, block)| {
                (&euler * &block).scale(&Rational::new(BigInt::one(), factorial(b as u64)))
            })
            .collect();
        XSeries { coeffs }
    }

    /// `b!·[X^b] log(∏(1-q^n)·Ẑ)` for `b = 0..=bmax`; the `b = 0` slot is zero.
    pub fn connected_blocks(&self, bmax: usize) -> Result<Vec<QSeries>> {
        let log = self.eta_zhat(bmax).log()?;
        Ok(log
            .coeffs
            .into_iter()
            .enumerate()
            .map(|(b, c)| c.scale(&Rational::from_integer(factorial(b as u64))))
            .collect())
    }
}

pub fn nhat(m: usize, b: usize, d: usize) -> Result<Rational> {
    Ok(FTable::new(m, d)?.nhat(b, d))
}

pub fn zhat_block(m: usize, b: usize, dmax: usize) -> Result<QSeries> {
    Ok(FTable::new(m, dmax)?.zhat_block(b))
}

/// Disconnected or connected generating series for one genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSeries {
    pub m: usize,
    pub g: i64,
    pub b: Option<usize>,
    pub connected: bool,
    pub series: QSeries,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountSeriesJson {
    pub m: usize,
    pub g: i64,
    pub b: Option<usize>,
    pub kind: &'static str,
    pub series: QSeriesJson,
}

impl CountSeries {
    pub fn to_json(&self) -> CountSeriesJson {
        CountSeriesJson {
            m: self.m,
            g: self.g,
            b: self.b,
            kind: if self.connected {
                "connected"
            } else {
                "disconnected"
            },
            series: self.series.to_json(),
        }
    }
}

/// `F_g^(m)` through `q^dmax`; zero unless `2(g-1)/(m-1)` is a positive integer.
pub fn connected_f(m: usize, g: i64, dmax: usize) -> Result<CountSeries> {
    let table = FTable::new(m, dmax)?;
    connected_f_from(&table, g)
}

pub fn connected_f_from(table: &FTable, g: i64) -> Result<CountSeries> {
    let m = table.m();
    let b = branch_points(m, g).filter(|&b| b >= 1 && g >= 2);
    let trunc = q_trunc(table.dmax() as i64);
    let series = match b {
        Some(b) => table.connected_blocks(b)?.swap_remove(b),
        None => QSeries::zero(trunc),
    };
    Ok(CountSeries {
        m,
        g,
        b,
        connected: true,
        series,
    })
}

/// `Σ_d N̂_{g,d} q^d` (the `Ẑ` block); zero when the genus is not attained.
pub fn disconnected_f(m: usize, g: i64, dmax: usize) -> Result<CountSeries> {
    let b = branch_points(m, g);
    let series = match b {
        Some(b) => zhat_block(m, b, dmax)?,
        None => QSeries::zero(q_trunc(dmax as i64)),
    };
    Ok(CountSeries {
        m,
        g,
        b,
        connected: false,
        series,
    })
}

/// The series reported for genus `g`: `F_1` for `g = 1`, otherwise the connected or
/// disconnected block.
pub fn counting_series(m: usize, g: i64, dmax: usize, connected: bool) -> Result<CountSeries> {
    if !connected {
        return disconnected_f(m, g, dmax);
    }
    if g == 1 {
        if m < 2 {
            return Err(HqmError::InvalidArgument(format!(
                "m must be at least 2, got {m}"
            )));
        }
        return Ok(CountSeries {
            m,
            g: 1,
            b: Some(0),
            connected: true,
            series: f1_series(dmax),
        });
    }
    connected_f(m, g, dmax)
}

/// `Σ_{d≥1} σ_1(d)/d q^d`, the q-part of `F_1 = -log η`.
pub fn f1_series(dmax: usize) -> QSeries {
    let mut coeffs = vec![Rational::zero(); dmax + 1];
    for (d, c) in coeffs.iter_mut().enumerate().skip(1) {
        let sigma: usize = (1..=d).filter(|k| d % k == 0).sum();
        *c = Rational::new(BigInt::from(sigma), BigInt::from(d));
    }
    QSeries::from_q_coeffs(coeffs)
}

/// Permutation of `{0..d-1}` in one-line notation.
type Perm = Vec<u8>;

fn compose(a: &[u8], b: &[u8]) -> Perm {
    // (a∘b)(i) = a(b(i))
    b.iter().map(|&i| a[i as usize]).collect()
}

fn inverse(a: &[u8]) -> Perm {
    let mut inv = vec![0u8; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x as usize] = i as u8;
    }
    inv
}

fn all_perms(d: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Perm = (0..d as u8).collect();
    permute(&mut cur, 0, &mut out);
    out.sort();
    out
}

fn permute(cur: &mut Perm, k: usize, out: &mut Vec<Perm>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permute(cur, k + 1, out);
        cur.swap(k, i);
    }
}

fn is_m_cycle(p: &[u8], m: usize) -> bool {
    let moved = p
        .iter()
        .enumerate()
        .filter(|(i, &x)| *i != x as usize)
        .count();
    if moved != m {
        return false;
    }
    let start = match p.iter().enumerate().find(|(i, &x)| *i != x as usize) {
        Some((i, _)) => i,
        None => return false,
    };
    let mut len = 1;
    let mut x = p[start] as usize;
    while x != start {
        x = p[x] as usize;
        len += 1;
    }
    len == m
}

fn m_cycles(d: usize, m: usize) -> Vec<Perm> {
    all_perms(d)
        .into_iter()
        .filter(|p| is_m_cycle(p, m))
        .collect()
}

/// Orbits of the group generated by `gens` cover `{0..d-1}` in one class.
fn is_transitive(d: usize, gens: &[&[u8]]) -> bool {
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for g in gens {
        for (i, &x) in g.iter().enumerate() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, x as usize));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let root = find(&mut parent, 0);
    (0..d).all(|i| find(&mut parent, i) == root)
}

const ORACLE_MAX_D: usize = 6;

fn oracle_guard(m: usize, d: usize, b: usize) -> Result<()> {
    if m < 2 {
        return Err(HqmError::InvalidArgument(format!(
            "m must be at least 2, got {m}"
        )));
    }
    if d > ORACLE_MAX_D {
        let fact = (1..=d as u128).product::<u128>();
        let cycles = if d >= m {
            (d - m + 1..=d).map(|x| x as u128).product::<u128>() / m as u128
        } else {
            0
        };
        let estimate = fact
            .saturating_mul(fact)
            .saturating_mul(cycles.saturating_pow(b.saturating_sub(1) as u32));
        return Err(HqmError::OracleTooLarge { d, estimate });
    }
    Ok(())
}

/// Tuples `(γ_1, …, γ_b)` of `m`-cycles, grouped by their product `γ_1⋯γ_b`.
/// With `connected`, each product maps to the list of tuples, otherwise to a count.
fn cycle_products(d: usize, m: usize, b: usize) -> HashMap<Perm, Vec<Vec<Perm>>> {
    let cycles = m_cycles(d, m);
    let id: Perm = (0..d as u8).collect();
    let mut layer: Vec<(Perm, Vec<Perm>)> = vec![(id, Vec::new())];
    for _ in 0..b {
        let mut next = Vec::with_capacity(layer.len() * cycles.len());
        for (prod, tuple) in &layer {
            for c in &cycles {
                let mut t = tuple.clone();
                t.push(c.clone());
                next.push((compose(prod, c), t));
            }
        }
        layer = next;
    }
    let mut out: HashMap<Perm, Vec<Vec<Perm>>> = HashMap::new();
    for (prod, tuple) in layer {
        out.entry(prod).or_default().push(tuple);
    }
    out
}

/// Product counts of `(γ_1, …, γ_{b-1})`, with the final `γ_b` tested against the commutator.
fn prefix_counts(d: usize, m: usize, b: usize) -> HashMap<Perm, u64> {
    let cycles = m_cycles(d, m);
    let mut counts: HashMap<Perm, u64> = HashMap::new();
    counts.insert((0..d as u8).collect(), 1);
    for _ in 0..b.saturating_sub(1) {
        let mut next: HashMap<Perm, u64> = HashMap::new();
        for (p, n) in &counts {
            for c in &cycles {
                *next.entry(compose(p, c)).or_insert(0) += n;
            }
        }
        counts = next;
    }
    counts
}

fn commutator(a: &[u8], b: &[u8]) -> Perm {
    compose(&compose(&compose(a, b), &inverse(a)), &inverse(b))
}

/// `#{(α, β, γ_1..γ_b) : γ_i m-cycles, γ_1⋯γ_b = αβα⁻¹β⁻¹} / d!`.
pub fn brute_hom_count(m: usize, d: usize, b: usize) -> Result<Rational> {
    oracle_guard(m, d, b)?;
    let perms = all_perms(d);
    let prefixes = prefix_counts(d, m, b);
    let mut by_commutator: HashMap<Perm, u64> = HashMap::new();
    for a in &perms {
        for bb in &perms {
            *by_commutator.entry(commutator(a, bb)).or_insert(0) += 1;
        }
    }
    let mut total: u64 = 0;
    for (c, pairs) in &by_commutator {
        let ways = if b == 0 {
            u64::from(c.iter().enumerate().all(|(i, &x)| i == x as usize))
        } else {
            // γ_b = (γ_1⋯γ_{b-1})⁻¹·[α,β] must be an m-cycle.
            prefixes
                .iter()
                .filter(|(p, _)| is_m_cycle(&compose(&inverse(p), c), m))
                .map(|(_, n)| n)
                .sum()
        };
        total += pairs * ways;
    }
    Ok(Rational::new(BigInt::from(total), factorial(d as u64)))
}

/// As [`brute_hom_count`], restricted to tuples generating a transitive subgroup.
pub fn brute_connected_count(m: usize, d: usize, b: usize) -> Result<Rational> {
    oracle_guard(m, d, b)?;
    if d == 0 {
        return Ok(Rational::zero());
    }
    let perms = all_perms(d);
    let tuples = cycle_products(d, m, b);
    let total: u64 = perms
        .par_iter()
        .map(|a| {
            let mut n = 0u64;
            for bb in &perms {
                if let Some(list) = tuples.get(&commutator(a, bb)) {
                    for t in list {
                        let mut gens: Vec<&[u8]> = vec![a, bb];
                        gens.extend(t.iter().map(Vec::as_slice));
                        if is_transitive(d, &gens) {
                            n += 1;
                        }
                    }
                }
            }
            n
        })
        .sum();
    Ok(Rational::new(BigInt::from(total), factorial(d as u64)))
}

/// `p(d)` via the partition enumerator, used as the `b = 0` reference.
pub fn partition_count(d: usize) -> Rational {
    int(enumerate_partitions(d).len() as i64)
}

/// The partitions of `d` paired with their `f` values, in enumeration order.
pub fn f_values_with_partitions(table: &FTable, d: usize) -> Vec<(Partition, Rational)> {
    enumerate_partitions(d)
        .into_iter()
        .zip(table.values(d).iter().cloned())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::rat;

    #[test]
    fn nhat_examples() {
        assert_eq!(nhat(2, 2, 2).unwrap(), int(2));
        assert_eq!(nhat(3, 1, 3).unwrap(), int(3));
        let t = FTable::new(2, 10).unwrap();
        for d in 0..=10 {
            for b in [1, 3, 5] {
                assert!(t.nhat(b, d).is_zero(), "d={d} b={b}");
            }
        }
        assert_eq!(t.zhat_block(2).q_coeff(3), int(18));
    }

    #[test]
    fn routes_agree() {
        let phi = build_phi_symbolic(3).unwrap();
        let a = FTable::with_route(3, 9, Route::Phi, Some(&phi)).unwrap();
        let b = FTable::with_route(3, 9, Route::BorderStrip, None).unwrap();
        let c = FTable::with_route(3, 9, Route::Residue, None).unwrap();
        for d in 0..=9 {
            assert_eq!(a.values(d), b.values(d));
            assert_eq!(a.values(d), c.values(d));
        }
    }

    #[test]
    fn b_zero_block() {
        let t = FTable::new(3, 15).unwrap();
        let block = t.zhat_block(0);
        for d in 0..=15 {
            assert_eq!(block.q_coeff(d as i64), partition_count(d));
        }
        let prod = &QSeries::euler_product(block.trunc()) * &block;
        assert!(prod.agrees_with(&QSeries::one(block.trunc())));
    }

    #[test]
    fn connected_examples() {
        let f = connected_f(2, 2, 6).unwrap();
        assert_eq!(f.b, Some(2));
        assert_eq!(f.series.q_coeff(2), int(2));
        assert!(f.series.q_coeff(1).is_zero());
        // 2(g-1) = 2 is not a multiple of m-1 = 3.
        assert!(connected_f(4, 2, 6).unwrap().series.is_zero());
        assert_eq!(branch_points(3, 2), Some(1));
        assert_eq!(branch_points(4, 2), None);
    }

    #[test]
    fn f1_values() {
        let f1 = f1_series(12);
        assert_eq!(f1.q_coeff(1), int(1));
        assert_eq!(f1.q_coeff(4), rat(7, 4));
        let minus_log = -&QSeries::euler_product(f1.trunc()).log_series().unwrap();
        assert!(f1.agrees_with(&minus_log));
    }

    #[test]
    fn brute_examples() {
        assert_eq!(brute_hom_count(2, 2, 2).unwrap(), int(2));
        assert_eq!(brute_hom_count(3, 3, 1).unwrap(), int(3));
        for d in 1..=5 {
            assert_eq!(brute_hom_count(2, d, 0).unwrap(), partition_count(d));
        }
        assert_eq!(brute_connected_count(2, 2, 2).unwrap(), int(2));
        assert_eq!(brute_connected_count(2, 2, 0).unwrap(), rat(3, 2));
        assert!(matches!(
            brute_hom_count(2, 7, 2),
            Err(HqmError::OracleTooLarge { d: 7, .. })
        ));
    }

    #[test]
    fn character_sums_match_brute_force() {
        for m in 2..=3 {
            let t = FTable::new(m, 5).unwrap();
            for d in 1..=5 {
                for b in 0..=2 {
                    assert_eq!(
                        t.nhat(b, d),
                        brute_hom_count(m, d, b).unwrap(),
                        "m={m} d={d} b={b}"
                    );
                }
            }
        }
        let t = FTable::new(2, 3).unwrap();
        assert_eq!(t.nhat(4, 3), brute_hom_count(2, 3, 4).unwrap());
    }

    #[test]
    fn connected_matches_brute_force() {
        let t = FTable::new(2, 5).unwrap();
        let blocks = t.connected_blocks(2).unwrap();
        for d in 1..=5 {
            assert_eq!(
                blocks[2].q_coeff(d as i64),
                brute_connected_count(2, d, 2).unwrap(),
                "d={d}"
            );
        }
        let t3 = FTable::new(3, 4).unwrap();
        let blocks = t3.connected_blocks(2).unwrap();
        for d in 1..=4 {
            for b in 1..=2 {
                assert_eq!(
                    blocks[b].q_coeff(d as i64),
                    brute_connected_count(3, d, b).unwrap()
                );
            }
        }
        assert!(f1_series(5).agrees_with(&QSeries::from_q_coeffs(
            (0..=5)
                .map(|d| if d == 0 {
                    int(0)
                } else {
                    brute_connected_count(2, d, 0).unwrap()
                })
                .collect()
        )));
    }

    #[test]
    fn exp_of_connected_reproduces_blocks() {
        let t = FTable::new(2, 10).unwrap();
        let eta_z = t.eta_zhat(4);
        let mut log = eta_z.log().unwrap();
        assert!(log.coeffs[0].is_zero());
        log.coeffs[0] = QSeries::zero(log.coeffs[0].trunc());
        assert_eq!(log.exp().unwrap(), eta_z);
    }
}
