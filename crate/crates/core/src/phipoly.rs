//! The character polynomial `φ_m ∈ Q[Y_1, …, Y_m]` with `f_λ(c^(m)) = φ_m(p_1(λ), …, p_m(λ))`.
//!
//! The symbolic route starts from
//!
//! ```text
//! f_λ = -(1/m²) Σ_{i+j≤m} (-1)^i e_i(λ̃) h_j(λ̃) b_ij(d)
//! ```
//!
//! writes `e_i`, `h_j` through Newton's identities in the raw power sums
//! `p̃_k = Σ_{i≤d} λ̃_i^k = p_k(λ) + S_k(d)`, where `S_k(d) = Σ_{i=1}^d (-i+1/2)^k`, and
//! finally substitutes `d = p_1(λ)`. The interpolation route fits the same polynomial
//! from border-strip character values and serves as its oracle.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::characters::{f_mn, CharQuery};
use crate::error::{HqmError, Result};
use crate::exactq::{factorial, fmt_rational, int, rat, Rational};
use crate::linsolve::IncrementalSolver;
use crate::partitions::enumerate_partitions;

/// Polynomial in one variable `d`, coefficients from degree 0 upwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DPoly(Vec<Rational>);

impl DPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        DPoly(coeffs)
    }

    pub fn zero() -> Self {
        DPoly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        DPoly::new(vec![c])
    }

    /// `d + c`
    pub fn shifted_var(c: Rational) -> Self {
        DPoly::new(vec![c, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, d: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * d + c)
    }

    pub fn add(&self, other: &DPoly) -> DPoly {
        let n = self.0.len().max(other.0.len());
        DPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_else(Rational::zero);
                    let b = other.0.get(i).cloned().unwrap_or_else(Rational::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &DPoly) -> DPoly {
        if self.is_zero() || other.is_zero() {
            return DPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        DPoly::new(out)
    }

    pub fn scale(&self, c: &Rational) -> DPoly {
        DPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    /// `binom(d + shift, s)` as a polynomial in `d`.
    pub fn binomial(shift: i64, s: usize) -> DPoly {
        let mut acc = DPoly::constant(Rational::one());
        for r in 0..s as i64 {
            acc = acc.mul(&DPoly::shifted_var(int(shift - r)));
        }
        acc.scale(&Rational::new(BigInt::one(), factorial(s as u64)))
    }

    /// Substitute `d = Y_1` in a polynomial ring with `nvars` variables.
    pub fn to_ypoly(&self, nvars: usize) -> YPoly {
        YPoly::from_terms(
            nvars,
            self.0.iter().enumerate().map(|(k, c)| {
                let mut exps = vec![0u32; nvars];
                exps[0] = k as u32;
                (exps, c.clone())
            }),
        )
    }
}

/// `S_k(d) = Σ_{i=1}^d (-i+1/2)^k` as an exact polynomial of degree `k+1`.
pub fn faulhaber_shifted(k: u32) -> DPoly {
    // Newton forward differences of the values at d = 0..=k+1.
    let n = k as usize + 2;
    let mut values = Vec::with_capacity(n);
    let mut acc = Rational::zero();
    values.push(acc.clone());
    for i in 1..n as i64 {
        acc += Pow::pow(rat(1 - 2 * i, 2), k);
        values.push(acc.clone());
    }
    let mut poly = DPoly::zero();
    let mut diffs = values;
    for j in 0..n {
        poly = poly.add(&DPoly::binomial(0, j).scale(&diffs[0]));
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    poly
}

/// `e_t(d-1/2, d-3/2, …, d-m+1/2)` for `t = 0..=m+1`.
fn elementary_of_shifted_d(m: usize) -> Vec<DPoly> {
    let mut e = vec![DPoly::zero(); m + 2];
    e[0] = DPoly::constant(Rational::one());
    for r in 1..=m as i64 {
        let x = DPoly::shifted_var(rat(1 - 2 * r, 2));
        for t in (1..=m).rev() {
            e[t] = e[t].add(&e[t - 1].mul(&x));
        }
    }
    e
}

/// `b_ij = Σ_{s=0}^{m+1-i-j} e_{m+1-i-j-s}(d-1/2, …, d-m+1/2)·binom(d-i, s)·(-m)^s`.
pub fn bij_poly(m: usize, i: usize, j: usize) -> DPoly {
    if i + j > m + 1 {
        return DPoly::zero();
    }
    let top = m + 1 - i - j;
    let e = elementary_of_shifted_d(m);
    let mut acc = DPoly::zero();
    for s in 0..=top {
        let term = e[top - s]
            .mul(&DPoly::binomial(-(i as i64), s))
            .scale(&Pow::pow(int(-(m as i64)), s as u32));
        acc = acc.add(&term);
    }
    acc
}

/// Polynomial in `Y_1..Y_n` over Q; `deg Y_j = j` for the weighted degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl YPoly {
    pub fn zero(nvars: usize) -> Self {
        YPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_terms(nvars, [(vec![0; nvars], c)])
    }

    /// The variable `Y_j`, `1 ≤ j ≤ nvars`.
    pub fn var(nvars: usize, j: usize) -> Self {
        assert!((1..=nvars).contains(&j));
        let mut exps = vec![0; nvars];
        exps[j - 1] = 1;
        Self::from_terms(nvars, [(exps, Rational::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Rational)>>(
        nvars: usize,
        terms: I,
    ) -> Self {
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (exps, c) in terms {
            assert_eq!(exps.len(), nvars, "exponent vector length");
            if c.is_zero() {
                continue;
            }
            let slot = map.entry(exps.clone()).or_insert_with(Rational::zero);
            *slot += c;
            if slot.is_zero() {
                map.remove(&exps);
            }
        }
        YPoly { nvars, terms: map }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &YPoly) -> YPoly {
        assert_eq!(self.nvars, other.nvars);
        Self::from_terms(
            self.nvars,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    pub fn scale(&self, c: &Rational) -> YPoly {
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, v)| (e.clone(), v * c)),
        )
    }

    pub fn mul(&self, other: &YPoly) -> YPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Self::from_terms(self.nvars, acc)
    }

    pub fn pow(&self, n: u32) -> YPoly {
        let mut acc = YPoly::constant(self.nvars, Rational::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluate at `(y_1, …, y_nvars)`.
    pub fn eval(&self, ys: &[Rational]) -> Rational {
        assert!(ys.len() >= self.nvars, "need {} values", self.nvars);
        let mut total = Rational::zero();
        for (exps, c) in &self.terms {
            total += c * monomial_value(exps, ys);
        }
        total
    }

    /// Largest `Σ j·a_j` over the monomials; `None` for the zero polynomial.
    pub fn weighted_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| weighted_degree(e)).max()
    }

    /// Largest exponent of each variable over the monomials.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut out = vec![0; self.nvars];
        for e in self.terms.keys() {
            for (o, &a) in out.iter_mut().zip(e) {
                *o = (*o).max(a);
            }
        }
        out
    }

    /// Monomials in graded order: weighted degree, then lexicographic on exponents.
    pub fn graded_terms(&self) -> Vec<(&[u32], &Rational)> {
        let mut v: Vec<(&[u32], &Rational)> = self.terms().collect();
        v.sort_by(|a, b| {
            weighted_degree(a.0)
                .cmp(&weighted_degree(b.0))
                .then_with(|| a.0.cmp(b.0))
        });
        v
    }

    pub fn to_json(&self, m: usize) -> PhiJson {
        PhiJson {
            m,
            monomials: self
                .graded_terms()
                .into_iter()
                .map(|(e, c)| (e.to_vec(), fmt_rational(c)))
                .collect(),
        }
    }
}

fn monomial_value(exps: &[u32], ys: &[Rational]) -> Rational {
    exps.iter()
        .zip(ys)
        .filter(|(&a, _)| a > 0)
        .fold(Rational::one(), |acc, (&a, y)| acc * Pow::pow(y, a))
}

fn weighted_degree(exps: &[u32]) -> u32 {
    exps.iter()
        .enumerate()
        .map(|(j, &a)| (j as u32 + 1) * a)
        .sum()
}

impl fmt::Display for YPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = self.graded_terms();
        terms.reverse();
        for (n, (exps, c)) in terms.into_iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (j, &a) in exps.iter().enumerate() {
                match a {
                    0 => {}
                    1 => write!(f, "·Y{}", j + 1)?,
                    _ => write!(f, "·Y{}^{a}", j + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// Wire form `{"m": m, "monomials": [[[a_1..a_m], "num/den"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiJson {
    pub m: usize,
    pub monomials: Vec<(Vec<u32>, String)>,
}

/// `φ_m` by Newton's identities, the `S_k` correction and `d = Y_1`.
pub fn build_phi_symbolic(m: usize) -> Result<YPoly> {
    if m < 2 {
        return Err(HqmError::InvalidArgument(format!(
            "m must be at least 2, got {m}"
        )));
    }
    // Raw power sums p̃_k = Y_k + S_k(Y_1).
    let raw: Vec<YPoly> = (1..=m)
        .map(|k| YPoly::var(m, k).add(&faulhaber_shifted(k as u32).to_ypoly(m)))
        .collect();
    let mut e = vec![YPoly::constant(m, Rational::one())];
    let mut h = vec![YPoly::constant(m, Rational::one())];
    for n in 1..=m {
        let mut en = YPoly::zero(m);
        let mut hn = YPoly::zero(m);
        for i in 1..=n {
            let sign = if i % 2 == 1 { int(1) } else { int(-1) };
            en = en.add(&e[n - i].mul(&raw[i - 1]).scale(&sign));
            hn = hn.add(&h[n - i].mul(&raw[i - 1]));
        }
        let inv = rat(1, n as i64);
        e.push(en.scale(&inv));
        h.push(hn.scale(&inv));
    }
    let mut total = YPoly::zero(m);
    for i in 0..=m {
        for j in 0..=m - i {
            let b = bij_poly(m, i, j).to_ypoly(m);
            let mut term = e[i].mul(&h[j]).mul(&b);
            if i % 2 == 1 {
                term = term.scale(&int(-1));
            }
            total = total.add(&term);
        }
    }
    Ok(total.scale(&rat(-1, (m * m) as i64)))
}

/// All exponent vectors in `nvars` variables with weighted degree `≤ bound`.
pub fn monomials_up_to(nvars: usize, bound: u32) -> Vec<Vec<u32>> {
    fn rec(j: usize, nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if j == nvars {
            out.push(cur.clone());
            return;
        }
        let w = j as u32 + 1;
        for a in 0..=left / w {
            cur.push(a);
            rec(j + 1, nvars, left - a * w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, nvars, bound, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| {
        weighted_degree(a)
            .cmp(&weighted_degree(b))
            .then_with(|| a.cmp(b))
    });
    out
}

/// Sizes `d` used by one interpolation run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationReport {
    pub unknowns: usize,
    pub fit_sizes: Vec<usize>,
    pub verify_sizes: Vec<usize>,
    pub equations: usize,
}

/// Fit `φ_m` among monomials of weighted degree `≤ degree_bound` against border-strip
/// character values on partitions of sizes `m, m+1, …`, then check two further sizes.
pub fn build_phi_interpolate(m: usize, degree_bound: u32) -> Result<(YPoly, InterpolationReport)> {
    if m < 2 {
        return Err(HqmError::InvalidArgument(format!(
            "m must be at least 2, got {m}"
        )));
    }
    if (degree_bound as usize) < m {
        return Err(HqmError::InvalidArgument(format!(
            "degree bound {degree_bound} below m = {m}"
        )));
    }
    let monomials = monomials_up_to(m, degree_bound);
    let unknowns = monomials.len();
    let mut solver = IncrementalSolver::new(unknowns);
    let too_small = || HqmError::DegreeBoundTooSmall {
        m,
        bound: degree_bound as usize,
    };
    let row_for = |lambda: &crate::partitions::Partition| {
        let ps = lambda.power_sums(m as u32);
        let row: Vec<Rational> = monomials.iter().map(|e| monomial_value(e, &ps)).collect();
        let rhs = f_mn(&CharQuery {
            lambda: lambda.clone(),
            m,
        });
        (row, rhs)
    };
    let mut fit_sizes = Vec::new();
    let max_size = m + degree_bound as usize + 16;
    let mut d = m;
    while !(solver.is_full_rank() && solver.rows_seen() >= unknowns + 20) {
        if d > max_size {
            return Err(HqmError::Underdetermined {
                known: solver.rank(),
                required: unknowns,
            });
        }
        for lambda in enumerate_partitions(d) {
            let (row, rhs) = row_for(&lambda);
            solver.push(&row, &rhs).map_err(|_| too_small())?;
        }
        fit_sizes.push(d);
        d += 1;
    }
    let solution = solver.solution().expect("full rank");
    let phi = YPoly::from_terms(m, monomials.iter().cloned().zip(solution));
    let mut verify_sizes = Vec::new();
    for size in d..d + 2 {
        for lambda in enumerate_partitions(size) {
            let (_, rhs) = row_for(&lambda);
            if phi.eval(&lambda.power_sums(m as u32)) != rhs {
                return Err(too_small());
            }
        }
        verify_sizes.push(size);
    }
    let report = InterpolationReport {
        unknowns,
        fit_sizes,
        verify_sizes,
        equations: solver.rows_seen(),
    };
    Ok((phi, report))
}

/// Interpolate starting from weighted degree `m`, raising the bound on failure.
pub fn build_phi_interpolate_auto(m: usize, max_extra: u32) -> Result<(YPoly, u32)> {
    let mut last = None;
    for bound in m as u32..=m as u32 + max_extra {
        match build_phi_interpolate(m, bound) {
            Ok((phi, _)) => return Ok((phi, bound)),
            Err(e @ HqmError::DegreeBoundTooSmall { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one bound tried"))
}

/// True when the top weighted-degree part of `phi` is exactly `(1/m)·Y_m`.
pub fn has_expected_leading_term(phi: &YPoly, m: usize) -> bool {
    let mut lead = vec![0; m];
    lead[m - 1] = 1;
    let top: Vec<_> = phi
        .terms()
        .filter(|(e, _)| weighted_degree(e) >= m as u32)
        .collect();
    top.len() == 1 && top[0].0 == lead.as_slice() && *top[0].1 == rat(1, m as i64)
}

/// The constant `b_ij` on `i + j = m`: `(d-1/2)+…+(d-m+1/2) - m(d-i) = mi - m²/2`.
pub fn bij_diagonal_value(m: usize, i: usize) -> Rational {
    int((m * i) as i64) - rat((m * m) as i64, 2)
}

/// Checks `b_ij` against its closed forms; returns the first offending `(i, j)`.
pub fn check_bij_closed_forms(m: usize) -> std::result::Result<(), (usize, usize)> {
    for i in 0..=m + 3 {
        for j in 0..=m + 3 - i {
            let b = bij_poly(m, i, j);
            let ok = if i + j >= m + 2 {
                b.is_zero()
            } else if i + j == m + 1 {
                b == DPoly::constant(Rational::one())
            } else if i + j == m {
                b == DPoly::constant(bij_diagonal_value(m, i))
            } else {
                b.degree().is_none_or(|deg| deg <= m + 1 - i - j)
            };
            if !ok {
                return Err((i, j));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(m: usize, exps: &[u32], c: Rational) -> (Vec<u32>, Rational) {
        assert_eq!(exps.len(), m);
        (exps.to_vec(), c)
    }

    pub(crate) fn golden(m: usize) -> YPoly {
        let t = match m {
            2 => vec![y(2, &[0, 1], rat(1, 2))],
            3 => vec![
                y(3, &[0, 0, 1], rat(1, 3)),
                y(3, &[2, 0, 0], rat(-1, 2)),
                y(3, &[1, 0, 0], rat(5, 12)),
            ],
            4 => vec![
                y(4, &[0, 0, 0, 1], rat(1, 4)),
                y(4, &[1, 1, 0, 0], rat(-1, 1)),
                y(4, &[0, 1, 0, 0], rat(11, 8)),
            ],
            5 => vec![
                y(5, &[0, 0, 0, 0, 1], rat(1, 5)),
                y(5, &[1, 0, 1, 0, 0], rat(-1, 1)),
                y(5, &[0, 0, 1, 0, 0], rat(19, 6)),
                y(5, &[0, 2, 0, 0, 0], rat(-1, 2)),
                y(5, &[3, 0, 0, 0, 0], rat(5, 6)),
                y(5, &[2, 0, 0, 0, 0], rat(-15, 4)),
                y(5, &[1, 0, 0, 0, 0], rat(189, 80)),
            ],
            _ => unreachable!(),
        };
        YPoly::from_terms(m, t)
    }

    #[test]
    fn faulhaber_examples() {
        assert_eq!(faulhaber_shifted(0), DPoly::new(vec![int(0), int(1)]));
        assert_eq!(
            faulhaber_shifted(1),
            DPoly::new(vec![int(0), int(0), rat(-1, 2)])
        );
        assert_eq!(faulhaber_shifted(3).eval(&int(3)), rat(-153, 8));
        for k in 0..8 {
            let p = faulhaber_shifted(k);
            assert_eq!(p.degree(), Some(k as usize + 1));
            assert!(p.coeffs()[0].is_zero());
            // Direct sums at d beyond the interpolation nodes.
            for d in 0..15i64 {
                let direct: Rational = (1..=d).map(|i| Pow::pow(rat(1 - 2 * i, 2), k)).sum();
                assert_eq!(p.eval(&int(d)), direct);
            }
        }
    }

    #[test]
    fn bij_closed_forms() {
        for m in 2..=6 {
            assert_eq!(check_bij_closed_forms(m), Ok(()), "m = {m}");
            assert_eq!(bij_poly(m, 1, m), DPoly::constant(int(1)));
            assert!(bij_poly(m, m, 3).is_zero());
        }
        assert_eq!(bij_poly(3, 1, 2), DPoly::constant(rat(-3, 2)));
        assert_eq!(bij_poly(2, 0, 2), DPoly::constant(int(-2)));
    }

    #[test]
    fn bij_matches_direct_residue() {
        // Coefficient of y^(m+1-i-j) in ∏_r (1+(d-r+1/2)y)·(1-my)^(d-i), integer d ≥ i.
        for m in 2..=4 {
            for i in 0..=m {
                for j in 0..=m - i {
                    let poly = bij_poly(m, i, j);
                    for d in i..i + 6 {
                        let order = m + 2 - i - j;
                        let mut s = vec![Rational::zero(); order];
                        s[0] = int(1);
                        for r in 1..=m as i64 {
                            let a = rat(2 * d as i64 - 2 * r + 1, 2);
                            for t in (1..order).rev() {
                                let v = &s[t - 1] * &a;
                                s[t] += v;
                            }
                        }
                        for _ in 0..d - i {
                            for t in (1..order).rev() {
                                let v = &s[t - 1] * int(m as i64);
                                s[t] -= v;
                            }
                        }
                        assert_eq!(
                            poly.eval(&int(d as i64)),
                            s[order - 1],
                            "m={m} i={i} j={j} d={d}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn symbolic_matches_golden() {
        for m in 2..=5 {
            assert_eq!(build_phi_symbolic(m).unwrap(), golden(m), "m = {m}");
        }
    }

    #[test]
    fn interpolation_matches_golden_and_symbolic() {
        assert_eq!(build_phi_interpolate(2, 2).unwrap().0, golden(2));
        assert_eq!(build_phi_interpolate(3, 3).unwrap().0, golden(3));
        for m in 2..=5 {
            let (phi, bound) = build_phi_interpolate_auto(m, 2).unwrap();
            assert_eq!(bound, m as u32);
            assert_eq!(phi, build_phi_symbolic(m).unwrap(), "m = {m}");
        }
    }

    #[test]
    fn leading_terms() {
        for m in 2..=6 {
            let phi = build_phi_symbolic(m).unwrap();
            assert!(has_expected_leading_term(&phi, m), "m = {m}: {phi}");
        }
    }

    #[test]
    fn top_stratum_cancels() {
        for m in 2..=6 {
            for d in 1..=8 {
                for l in enumerate_partitions(d) {
                    let xs = l.shifted(d).unwrap();
                    let (e, h) = crate::partitions::elementary_and_complete(&xs, m + 1);
                    let s: Rational = (0..=m + 1)
                        .map(|i| {
                            let t = &e[i] * &h[m + 1 - i];
                            if i % 2 == 0 {
                                t
                            } else {
                                -t
                            }
                        })
                        .sum();
                    assert!(s.is_zero());
                }
            }
        }
    }

    #[test]
    fn symbolic_matches_border_strips() {
        for m in 2..=6 {
            let phi = build_phi_symbolic(m).unwrap();
            for d in m..=m + 4 {
                for l in enumerate_partitions(d) {
                    let v = phi.eval(&l.power_sums(m as u32));
                    assert_eq!(v, f_mn(&CharQuery { lambda: l, m }));
                }
            }
        }
    }

    #[test]
    fn vanishes_below_m() {
        // The polynomial itself vanishes on partitions with d < m.
        for m in 2..=6 {
            let phi = build_phi_symbolic(m).unwrap();
            for d in 0..m {
                for l in enumerate_partitions(d) {
                    assert!(phi.eval(&l.power_sums(m as u32)).is_zero(), "m={m} {l}");
                }
            }
        }
    }

    #[test]
    fn json_order() {
        let j = golden(3).to_json(3);
        assert_eq!(
            serde_json::to_string(&j).unwrap(),
            r#"{"m":3,"monomials":[[[1,0,0],"5/12"],[[2,0,0],"-1/2"],[[0,0,1],"1/3"]]}"#
        );
    }
}
