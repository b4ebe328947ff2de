//! End-to-end checks: fitting `F_g^(m)` into `Q[E2, E4, E6]` and comparing the operator
//! route for `ηZ` against the character sums.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bo::etaz_via_operator_auto;
use crate::covercount::{branch_points, connected_f_from, FTable};
use crate::error::{HqmError, Result};
use crate::quasimod::{fit_qm, QMFit};

pub const DEFAULT_MARGIN: usize = 8;

/// Weight search for one counting function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightPolicy {
    pub start: u32,
    pub cap: u32,
}

impl WeightPolicy {
    /// Start at `m·b + 2` and raise by 2 up to `2mb`, the largest weight the operator
    /// expansion can produce.
    pub fn default_for(m: usize, b: usize) -> Self {
        let start = (m * b + 2) as u32;
        WeightPolicy {
            start,
            cap: start.max((2 * m * b) as u32),
        }
    }

    /// A single attempt at `w`.
    pub fn fixed(w: u32) -> Self {
        WeightPolicy { start: w, cap: w }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitReport {
    pub m: usize,
    pub g: i64,
    pub b: usize,
    pub dmax: usize,
    pub attempts: Vec<u32>,
    pub fit: QMFit,
    /// `6g - 6` for `m = 2`; not known in general.
    pub expected_weight: Option<u32>,
}

impl FitReport {
    pub fn homogeneous_weight(&self) -> Option<u32> {
        self.fit.poly.homogeneous_weight()
    }

    /// False only when a weight is expected and the fit is not homogeneous of that weight.
    pub fn matches_expected_weight(&self) -> bool {
        self.expected_weight
            .is_none_or(|w| self.homogeneous_weight() == Some(w))
    }

    pub fn to_json(&self) -> FitJson {
        FitJson {
            m: self.m,
            g: self.g,
            b: self.b,
            dmax: self.dmax,
            wmax: self.fit.wmax,
            wmax_attempts: self.attempts.clone(),
            weight_breakdown: self
                .fit
                .poly
                .weight_breakdown()
                .into_iter()
                .map(|(w, n)| (w.to_string(), n))
                .collect(),
            homogeneous_weight: self.homogeneous_weight(),
            expected_weight: self.expected_weight,
            expected_weight_matches: self.matches_expected_weight(),
            monomials: self.fit.poly.to_json(),
            unknowns: self.fit.unknowns,
            surplus_verified: self.fit.surplus_verified,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FitJson {
    pub m: usize,
    pub g: i64,
    pub b: usize,
    pub dmax: usize,
    pub wmax: u32,
    pub wmax_attempts: Vec<u32>,
    pub weight_breakdown: BTreeMap<String, usize>,
    pub homogeneous_weight: Option<u32>,
    pub expected_weight: Option<u32>,
    pub expected_weight_matches: bool,
    pub monomials: Vec<([u32; 3], String)>,
    pub unknowns: usize,
    pub surplus_verified: usize,
}

/// Fit the connected series `F_g^(m)` through `q^dmax`.
pub fn fit_connected(
    m: usize,
    g: i64,
    dmax: usize,
    policy: Option<WeightPolicy>,
    margin: usize,
) -> Result<FitReport> {
    let table = FTable::new(m, dmax)?;
    fit_connected_with(&table, g, policy, margin)
}

pub fn fit_connected_with(
    table: &FTable,
    g: i64,
    policy: Option<WeightPolicy>,
    margin: usize,
) -> Result<FitReport> {
    let m = table.m();
    let b = branch_points(m, g)
        .filter(|&b| b >= 1 && g >= 2)
        .ok_or_else(|| {
            HqmError::InvalidArgument(format!(
                "no covers of genus {g} for m = {m}: 2(g-1)/(m-1) must be a positive integer"
            ))
        })?;
    let series = connected_f_from(table, g)?.series;
    let policy = policy.unwrap_or_else(|| WeightPolicy::default_for(m, b));
    let mut attempts = Vec::new();
    let mut w = policy.start;
    loop {
        attempts.push(w);
        match fit_qm(&series, w, margin) {
            Ok(fit) => {
                return Ok(FitReport {
                    m,
                    g,
                    b,
                    dmax: table.dmax(),
                    attempts,
                    fit,
                    expected_weight: (m == 2).then(|| (6 * g - 6) as u32),
                })
            }
            Err(HqmError::FitFailure { .. }) if w + 2 <= policy.cap => w += 2,
            Err(e) => return Err(e),
        }
    }
}

/// Outcome of the operator-route comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZTest {
    pub m: usize,
    pub b: u32,
    pub dmax: usize,
    /// First q-order where the two routes differ.
    pub first_difference: Option<i64>,
}

impl ZTest {
    pub fn passed(&self) -> bool {
        self.first_difference.is_none()
    }
}

/// Compare `∏(1-q^n)·Ẑ_b/b!` from character sums with the operator route.
pub fn bo_ztest(m: usize, b: u32, dmax: usize) -> Result<ZTest> {
    let op = etaz_via_operator_auto(m, b, dmax)?;
    let direct = FTable::new(m, dmax)?
        .eta_zhat(b as usize)
        .coeffs
        .swap_remove(b as usize);
    Ok(ZTest {
        m,
        b,
        dmax,
        first_difference: op.first_difference(&direct).map(|e| e.div_euclid(24)),
    })
}
