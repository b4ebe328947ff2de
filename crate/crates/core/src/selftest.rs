//! The acceptance suite, shared by the `selftest` subcommand and the integration tests.
//!
//! Every check is exact. A check may be marked as a known deviation: it is reported as
//! FAIL, but the suite as a whole only fails when the deviation changes or another
//! check fails.

use std::time::{Duration, Instant};

use num_traits::Zero;
use serde::Serialize;

use crate::bo::{eta_times, v_taylor, MultiIndex};
use crate::characters::{f_mn, f_phi, f_residue, CharQuery};
use crate::covercount::{brute_connected_count, brute_hom_count, connected_f, f1_series, FTable};
use crate::error::Result;
use crate::exactq::{int, q_trunc, rat, QSeries};
use crate::fitting::{bo_ztest, fit_connected_with, DEFAULT_MARGIN};
use crate::partitions::enumerate_partitions;
use crate::phipoly::{bij_diagonal_value, bij_poly, build_phi_symbolic, DPoly, YPoly};
use crate::quasimod::{check_derivation_system, fit_qm};

/// Deliberate corruptions used to show that the checks can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Replace the `Y_1` coefficient `5/12` of `φ_3` by `1/2`.
    Phi3Constant,
}

#[derive(Clone, Debug)]
pub struct Options {
    /// q-order used for the counting-function fits.
    pub fit_dmax: usize,
    pub fault: Option<Fault>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            fit_dmax: 40,
            fault: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Reported as FAIL; the literal statement is false and the recorded reason holds.
    Known,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CheckResult {
    pub fn label(&self) -> &'static str {
        match self.status {
            Status::Pass => "PASS",
            Status::Fail | Status::Known => "FAIL",
        }
    }

    pub fn line(&self) -> String {
        let known = if self.status == Status::Known {
            " [known deviation]"
        } else {
            ""
        };
        format!(
            "{} {:>2} {}{}: {} ({} ms)",
            self.label(),
            self.id,
            self.name,
            known,
            self.detail,
            self.elapsed.as_millis()
        )
    }
}

/// True when nothing failed beyond the recorded deviations.
pub fn suite_ok(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.status != Status::Fail)
}

type CheckFn = fn(&Options) -> Result<(Status, String)>;

pub const CHECKS: [(u32, &str, CheckFn); 11] = [
    (1, "phi golden polynomials", check_phi_golden),
    (2, "character route agreement", check_routes),
    (3, "b_ij closed forms", check_bij),
    (4, "hom-count oracle", check_hom_oracle),
    (5, "connected counts oracle", check_connected_oracle),
    (6, "F_1 series", check_f1),
    (7, "parity and divisibility vanishing", check_vanishing),
    (
        8,
        "counting functions are quasimodular",
        check_quasimodularity,
    ),
    (9, "Bloch-Okounkov coefficients", check_bo_block),
    (
        10,
        "operator route equals character sums",
        check_operator_route,
    ),
    (11, "Eisenstein derivation system", check_eisenstein),
];

pub fn run_one(id: u32, opts: &Options) -> CheckResult {
    let (_, name, f) = CHECKS
        .iter()
        .find(|c| c.0 == id)
        .copied()
        .expect("known check id");
    let start = Instant::now();
    let (status, detail) = match f(opts) {
        Ok(r) => r,
        Err(e) => (Status::Fail, format!("error: {e}")),
    };
    CheckResult {
        id,
        name,
        status,
        detail,
        elapsed: start.elapsed(),
    }
}

/// Run every check; `on_result` sees each result as soon as it is available.
pub fn run_all(opts: &Options, mut on_result: impl FnMut(&CheckResult)) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .map(|c| {
            let r = run_one(c.0, opts);
            on_result(&r);
            r
        })
        .collect()
}

fn pass(detail: impl Into<String>) -> Result<(Status, String)> {
    Ok((Status::Pass, detail.into()))
}

fn fail(detail: impl Into<String>) -> Result<(Status, String)> {
    Ok((Status::Fail, detail.into()))
}

/// `φ_m` used by the checks, with the requested fault applied.
pub fn phi_for(m: usize, fault: Option<Fault>) -> Result<YPoly> {
    let phi = build_phi_symbolic(m)?;
    if m == 3 && fault == Some(Fault::Phi3Constant) {
        let fix = YPoly::from_terms(3, [(vec![1, 0, 0], rat(1, 2) - rat(5, 12))]);
        return Ok(phi.add(&fix));
    }
    Ok(phi)
}

/// The polynomials printed for `m = 2..5`.
pub fn phi_golden(m: usize) -> Option<YPoly> {
    let t = |e: &[u32], n: i64, d: i64| (e.to_vec(), rat(n, d));
    let terms = match m {
        2 => vec![t(&[0, 1], 1, 2)],
        3 => vec![
            t(&[0, 0, 1], 1, 3),
            t(&[2, 0, 0], -1, 2),
            t(&[1, 0, 0], 5, 12),
        ],
        4 => vec![
            t(&[0, 0, 0, 1], 1, 4),
            t(&[1, 1, 0, 0], -1, 1),
            t(&[0, 1, 0, 0], 11, 8),
        ],
        5 => vec![
            t(&[0, 0, 0, 0, 1], 1, 5),
            t(&[1, 0, 1, 0, 0], -1, 1),
            t(&[0, 0, 1, 0, 0], 19, 6),
            t(&[0, 2, 0, 0, 0], -1, 2),
            t(&[3, 0, 0, 0, 0], 5, 6),
            t(&[2, 0, 0, 0, 0], -15, 4),
            t(&[1, 0, 0, 0, 0], 189, 80),
        ],
        _ => return None,
    };
    Some(YPoly::from_terms(m, terms))
}

fn check_phi_golden(opts: &Options) -> Result<(Status, String)> {
    for m in 2..=5 {
        let phi = phi_for(m, opts.fault)?;
        let golden = phi_golden(m).expect("golden");
        if phi != golden {
            return fail(format!("phi_{m} = {phi}, expected {golden}"));
        }
    }
    pass("phi_2..phi_5 match coefficient for coefficient")
}

fn check_routes(opts: &Options) -> Result<(Status, String)> {
    let phis: Vec<YPoly> = (2..=6)
        .map(|m| phi_for(m, opts.fault))
        .collect::<Result<_>>()?;
    let mut count = 0;
    for d in 2..=10 {
        for lambda in enumerate_partitions(d) {
            let content = int(lambda.content_sum());
            for m in 2..=d.min(6) {
                let q = CharQuery::new(lambda.clone(), m)?;
                let mn = f_mn(&q);
                let residue = f_residue(&q)?;
                let phi = f_phi(&q, &phis[m - 2])?;
                if residue != mn {
                    return fail(format!(
                        "f_residue = {residue} but f_mn = {mn} at {lambda}, m = {m}"
                    ));
                }
                if phi != mn {
                    return fail(format!(
                        "f_phi = {phi} but f_mn = {mn} at {lambda}, m = {m}"
                    ));
                }
                if m == 2 && mn != content {
                    return fail(format!("content sum {content} but f = {mn} at {lambda}"));
                }
                count += 1;
            }
        }
    }
    pass(format!(
        "{count} (partition, m) pairs agree on all three routes"
    ))
}

fn check_bij(_: &Options) -> Result<(Status, String)> {
    let mut literal_misses = 0;
    let mut checked = 0;
    for m in 2..=6usize {
        for i in 0..=m + 3 {
            for j in 0..=m + 3 - i {
                let b = bij_poly(m, i, j);
                checked += 1;
                if i + j >= m + 2 {
                    if !b.is_zero() {
                        return fail(format!("b_{i}{j} nonzero for m = {m}"));
                    }
                } else if i + j == m + 1 {
                    if b != DPoly::constant(int(1)) {
                        return fail(format!("b_{i}{j} != 1 for m = {m}"));
                    }
                } else if i + j == m {
                    let literal = rat((m * m) as i64, 2) + int((m * i) as i64);
                    if b != DPoly::constant(bij_diagonal_value(m, i)) {
                        return fail(format!("b_{i}{j} is not constant mi - m^2/2 for m = {m}"));
                    }
                    if b != DPoly::constant(literal) {
                        literal_misses += 1;
                    }
                } else if b.degree().is_some_and(|deg| deg > m + 1 - i - j) {
                    return fail(format!(
                        "b_{i}{j} has degree above {} for m = {m}",
                        m + 1 - i - j
                    ));
                }
            }
        }
    }
    if literal_misses > 0 {
        return Ok((
            Status::Known,
            format!(
                "{checked} pairs: zero, unit and degree statements hold; on i+j = m the value is \
                 the constant mi - m^2/2, not m^2/2 + mi ({literal_misses} pairs differ)"
            ),
        ));
    }
    pass(format!("{checked} pairs"))
}

fn check_hom_oracle(_: &Options) -> Result<(Status, String)> {
    let cases = [
        (2, 2, 2),
        (2, 3, 2),
        (2, 4, 2),
        (2, 3, 4),
        (3, 3, 1),
        (3, 3, 2),
        (3, 4, 2),
        (3, 5, 1),
    ];
    for (m, d, b) in cases {
        let table = FTable::new(m, d)?;
        let sum = table.zhat_block(b).q_coeff(d as i64);
        let brute = brute_hom_count(m, d, b)?;
        if sum != brute {
            return fail(format!(
                "(m,d,b) = ({m},{d},{b}): character sum {sum}, enumeration {brute}"
            ));
        }
    }
    if brute_hom_count(2, 2, 2)? != int(2) || brute_hom_count(3, 3, 1)? != int(3) {
        return fail("hand anchors (2,2,2) -> 2, (3,3,1) -> 3 not reproduced");
    }
    pass(format!("{} cases and both hand anchors", cases.len()))
}

fn check_connected_oracle(_: &Options) -> Result<(Status, String)> {
    let f = connected_f(2, 2, 5)?.series;
    for d in 1..=5 {
        let brute = brute_connected_count(2, d, 2)?;
        if f.q_coeff(d as i64) != brute {
            return fail(format!(
                "d = {d}: extracted {}, enumeration {brute}",
                f.q_coeff(d as i64)
            ));
        }
    }
    pass("F_2 for m = 2 matches transitive-tuple enumeration for d <= 5")
}

fn check_f1(_: &Options) -> Result<(Status, String)> {
    let dmax = 50;
    let f1 = f1_series(dmax);
    for d in 1..=dmax as i64 {
        let mut sigma = 0i64;
        let mut k = 1;
        while k * k <= d {
            if d % k == 0 {
                sigma += k;
                if k * k != d {
                    sigma += d / k;
                }
            }
            k += 1;
        }
        if f1.q_coeff(d) != rat(sigma, d) {
            return fail(format!("coefficient of q^{d} is {}", f1.q_coeff(d)));
        }
    }
    let minus_log = -&QSeries::euler_product(q_trunc(dmax as i64)).log_series()?;
    match f1.first_difference(&minus_log) {
        None => pass("sigma_1(d)/d for d <= 50, equal to -log prod(1-q^n)"),
        Some(e) => fail(format!("differs from -log prod(1-q^n) at q^{}", e / 24)),
    }
}

fn check_vanishing(_: &Options) -> Result<(Status, String)> {
    for m in [2, 4, 6] {
        let table = FTable::new(m, 10)?;
        for b in [1, 3, 5, 7] {
            for d in 0..=10 {
                if !table.nhat(b, d).is_zero() {
                    return fail(format!("nhat(m={m}, b={b}, d={d}) = {}", table.nhat(b, d)));
                }
            }
        }
    }
    let mut zero_cases = 0;
    for m in 3..=6usize {
        for g in 2..=6i64 {
            if (2 * (g - 1)) % (m as i64 - 1) != 0 {
                if !connected_f(m, g, 8)?.series.is_zero() {
                    return fail(format!("F_{g} for m = {m} is not zero"));
                }
                zero_cases += 1;
            }
        }
    }
    pass(format!(
        "odd b for even m vanishes; {zero_cases} unattained genera give zero"
    ))
}

fn check_quasimodularity(opts: &Options) -> Result<(Status, String)> {
    let mut notes = Vec::new();
    for m in [2usize, 3] {
        let table = FTable::new(m, opts.fit_dmax)?;
        for g in [2i64, 3] {
            let report = fit_connected_with(&table, g, None, DEFAULT_MARGIN)?;
            if report.fit.surplus_verified < DEFAULT_MARGIN {
                return fail(format!(
                    "F_{g} (m={m}): only {} surplus",
                    report.fit.surplus_verified
                ));
            }
            if m == 2 && report.homogeneous_weight().is_none() {
                return fail(format!(
                    "F_{g} (m=2) is not homogeneous: {}",
                    report.fit.poly
                ));
            }
            let weights: Vec<String> = report
                .fit
                .poly
                .weight_breakdown()
                .keys()
                .map(u32::to_string)
                .collect();
            let flag = if report.matches_expected_weight() {
                ""
            } else {
                " (differs from expected)"
            };
            notes.push(format!(
                "m={m} g={g}: weights {{{}}}{flag}, {} surplus",
                weights.join(","),
                report.fit.surplus_verified
            ));
        }
    }
    pass(notes.join("; "))
}

fn check_bo_block(_: &Options) -> Result<(Status, String)> {
    let dmax = 30;
    let trunc = q_trunc(dmax as i64);
    if !eta_times(&v_taylor(&MultiIndex::zero(), dmax)).agrees_with(&QSeries::one(trunc)) {
        return fail("eta * A_0 != 1");
    }
    let mut fitted = 0;
    let mut zeros = 0;
    for k in MultiIndex::all_up_to(9, 3) {
        let w = k.weight();
        if k.degree() == 0 || w > 10 {
            continue;
        }
        let eta_a = eta_times(&v_taylor(&k, dmax));
        if w % 2 == 1 {
            if !eta_a.is_zero() {
                return fail(format!("eta * A_{k} nonzero at odd weight {w}"));
            }
            zeros += 1;
            continue;
        }
        let fit = fit_qm(&eta_a, w, DEFAULT_MARGIN)?;
        if !(fit.poly.is_zero() || fit.poly.homogeneous_weight() == Some(w)) {
            return fail(format!(
                "eta * A_{k} is not of pure weight {w}: {}",
                fit.poly
            ));
        }
        fitted += 1;
    }
    pass(format!(
        "eta*A_0 = 1; {fitted} even-weight fits, {zeros} odd-weight zeros"
    ))
}

fn check_operator_route(_: &Options) -> Result<(Status, String)> {
    for (m, b) in [(2usize, 2u32), (3, 1), (3, 2)] {
        let t = bo_ztest(m, b, 12)?;
        if let Some(n) = t.first_difference {
            return fail(format!("(m,b) = ({m},{b}) first differs at q^{n}"));
        }
    }
    pass("(2,2), (3,1), (3,2) agree through q^12")
}

fn check_eisenstein(_: &Options) -> Result<(Status, String)> {
    for c in check_derivation_system(40) {
        if let Some(n) = c.first_difference {
            return fail(format!("{} fails at q^{n}", c.name));
        }
    }
    pass("all four identities through q^40")
}

/// Exit code for a suite run: 0 when green, 2 when a fit lacked data, 3 otherwise.
pub fn exit_code(results: &[CheckResult]) -> i32 {
    if suite_ok(results) {
        return 0;
    }
    let underdetermined = results
        .iter()
        .any(|r| r.status == Status::Fail && r.detail.starts_with("error: underdetermined"));
    if underdetermined {
        2
    } else {
        3
    }
}
