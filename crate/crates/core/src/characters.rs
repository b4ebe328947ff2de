//! The central character `f_λ(c) = |c|·χ_λ(c)/dim λ` on the class `c = (m, 1^(d-m))`.
//!
//! Three routes are provided: border-strip removal (`f_mn`), the residue at infinity of
//! a rational function built from `μ_i = λ_i + d - i` (`f_residue`), and evaluation of
//! the shifted-symmetric polynomial `φ_m` at the shifted power sums (`f_phi`). The
//! first two are oracles for the third.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{HqmError, Result};
use crate::exactq::{factorial, int, Rational};
use crate::partitions::Partition;
use crate::phipoly::YPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharQuery {
    pub lambda: Partition,
    pub m: usize,
}

impl CharQuery {
    pub fn new(lambda: Partition, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(HqmError::InvalidArgument(format!(
                "m must be at least 2, got {m}"
            )));
        }
        Ok(CharQuery { lambda, m })
    }

    pub fn d(&self) -> usize {
        self.lambda.size()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    BorderStrip,
    Residue,
    Phi,
}

impl FromStr for Route {
    type Err = HqmError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mn" => Ok(Route::BorderStrip),
            "residue" => Ok(Route::Residue),
            "phi" => Ok(Route::Phi),
            other => Err(HqmError::InvalidArgument(format!(
                "unknown route {other:?} (expected mn, residue or phi)"
            ))),
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::BorderStrip => "mn",
            Route::Residue => "residue",
            Route::Phi => "phi",
        })
    }
}

/// Number of `m`-cycles in `S_d`.
pub fn class_size(d: usize, m: usize) -> BigInt {
    if d < m {
        return BigInt::zero();
    }
    factorial(d as u64) / (factorial((d - m) as u64) * BigInt::from(m))
}

/// `χ_λ` on `(m, 1^(d-m))` as `Σ (-1)^height · dim(λ ∖ strip)` over removable
/// border strips of size `m`.
pub fn chi_single_cycle(lambda: &Partition, m: usize) -> BigInt {
    let len = lambda.len();
    // β-numbers λ_i + len - i; a strip of size m is a move β → β - m onto a free slot.
    let beta: Vec<usize> = lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| p + len - 1 - i)
        .collect();
    let occupied: BTreeSet<usize> = beta.iter().copied().collect();
    let mut chi = BigInt::zero();
    for (idx, &b) in beta.iter().enumerate() {
        if b < m || occupied.contains(&(b - m)) {
            continue;
        }
        let height = occupied.range(b - m + 1..b).count();
        let mut moved = beta.clone();
        moved[idx] = b - m;
        moved.sort_unstable_by(|x, y| y.cmp(x));
        let parts: Vec<usize> = moved
            .iter()
            .enumerate()
            .map(|(i, &x)| x + i + 1 - len)
            .collect();
        let rest = Partition::new(parts).expect("strip removal leaves a partition");
        let dim = rest.hook_dim();
        if height.is_multiple_of(2) {
            chi += dim;
        } else {
            chi -= dim;
        }
    }
    chi
}

/// Border-strip route; zero when `d < m`.
pub fn f_mn(q: &CharQuery) -> Rational {
    let d = q.d();
    if d < q.m {
        return Rational::zero();
    }
    let chi = chi_single_cycle(&q.lambda, q.m);
    Rational::new(class_size(d, q.m) * chi, q.lambda.hook_dim())
}

/// Residue route: `f = -(1/m²)·[y^(m+1)] ∏_{k<m}(1 - k y) ∏_i (1-(μ_i+m)y)/(1-μ_i y)`,
/// the expansion at `x = ∞` in `y = 1/x`.
pub fn f_residue(q: &CharQuery) -> Result<Rational> {
    let d = q.d();
    let m = q.m;
    if d < m {
        return Err(HqmError::Precondition(format!(
            "residue formula needs d >= m (d = {d}, m = {m})"
        )));
    }
    let order = m + 2;
    let mut series = vec![Rational::zero(); order + 1];
    series[0] = Rational::from_integer(BigInt::from(1));
    let mul_linear = |s: &mut Vec<Rational>, a: &Rational| {
        // s ← s·(1 - a y)
        for j in (1..s.len()).rev() {
            let t = &s[j - 1] * a;
            s[j] -= t;
        }
    };
    let mul_geometric = |s: &mut Vec<Rational>, a: &Rational| {
        // s ← s / (1 - a y)
        for j in 1..s.len() {
            let t = &s[j - 1] * a;
            s[j] += t;
        }
    };
    for k in 1..m {
        mul_linear(&mut series, &int(k as i64));
    }
    let parts = q.lambda.parts();
    for i in 0..d {
        let mu = parts.get(i).copied().unwrap_or(0) + d - 1 - i;
        mul_linear(&mut series, &int((mu + m) as i64));
        mul_geometric(&mut series, &int(mu as i64));
    }
    let m2 = int((m * m) as i64);
    Ok(-&series[m + 1] / m2)
}

/// Evaluate `φ_m` at `(p_1(λ), …, p_m(λ))`; zero when `d < m`.
pub fn f_phi(q: &CharQuery, phi: &YPoly) -> Result<Rational> {
    if phi.nvars() != q.m {
        return Err(HqmError::InvalidArgument(format!(
            "phi polynomial has {} variables, query has m = {}",
            phi.nvars(),
            q.m
        )));
    }
    if q.d() < q.m {
        return Ok(Rational::zero());
    }
    Ok(phi.eval(&q.lambda.power_sums(q.m as u32)))
}

pub fn f_route(q: &CharQuery, route: Route, phi: Option<&YPoly>) -> Result<Rational> {
    match route {
        Route::BorderStrip => Ok(f_mn(q)),
        Route::Residue => f_residue(q),
        Route::Phi => match phi {
            Some(p) => f_phi(q, p),
            None => Err(HqmError::InvalidArgument(
                "phi route needs a polynomial".into(),
            )),
        },
    }
}
