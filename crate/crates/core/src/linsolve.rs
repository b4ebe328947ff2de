//! Exact linear systems over Q by fraction-free row reduction.
//!
//! Rows are fed one at a time. Each row is scaled to integers, reduced against the
//! echelon basis by integer cross-multiplication and divided by its content, so no
//! rational arithmetic happens inside the elimination. Once the basis has full rank,
//! every further row is a verification equation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactq::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOutcome {
    /// Row increased the rank.
    Pivot,
    /// Row reduced to `0 = 0`.
    Redundant,
}

/// Row reduced to `0 = c` with `c ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inconsistent;

#[derive(Debug, Clone)]
pub struct IncrementalSolver {
    ncols: usize,
    basis: Vec<(usize, Vec<BigInt>)>,
    rows_seen: usize,
    full_rank_after: Option<usize>,
    verified: usize,
}

impl IncrementalSolver {
    pub fn new(ncols: usize) -> Self {
        IncrementalSolver {
            ncols,
            basis: Vec::new(),
            rows_seen: 0,
            full_rank_after: if ncols == 0 { Some(0) } else { None },
            verified: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.basis.len() == self.ncols
    }

    pub fn rows_seen(&self) -> usize {
        self.rows_seen
    }

    /// Number of rows consumed when the rank became full.
    pub fn full_rank_after(&self) -> Option<usize> {
        self.full_rank_after
    }

    /// Consistent rows seen after the rank became full.
    pub fn verified(&self) -> usize {
        self.verified
    }

    pub fn push(&mut self, row: &[Rational], rhs: &Rational) -> Result<RowOutcome, Inconsistent> {
        assert_eq!(row.len(), self.ncols, "row length mismatch");
        self.rows_seen += 1;
        let mut r = to_integer_row(row.iter().chain(std::iter::once(rhs)));
        for (p, b) in &self.basis {
            if r[*p].is_zero() {
                continue;
            }
            let (fr, fb) = (b[*p].clone(), r[*p].clone());
            for (x, y) in r.iter_mut().zip(b.iter()) {
                *x = &fr * &*x - &fb * y;
            }
            normalize(&mut r);
        }
        match r[..self.ncols].iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.basis.push((p, r));
                if self.is_full_rank() {
                    self.full_rank_after = Some(self.rows_seen);
                }
                Ok(RowOutcome::Pivot)
            }
            None if r[self.ncols].is_zero() => {
                if self.is_full_rank() {
                    self.verified += 1;
                }
                Ok(RowOutcome::Redundant)
            }
            None => Err(Inconsistent),
        }
    }

    /// The unique solution, once the rank is full.
    pub fn solution(&self) -> Option<Vec<Rational>> {
        if !self.is_full_rank() {
            return None;
        }
        let n = self.ncols;
        let mut x: Vec<Option<Rational>> = vec![None; n];
        // Each basis row is zero at the pivots of earlier rows, so solve newest first.
        for (p, row) in self.basis.iter().rev() {
            let mut acc = Rational::from_integer(row[n].clone());
            for (j, a) in row[..n].iter().enumerate() {
                if j != *p && !a.is_zero() {
                    let xj = x[j].as_ref().expect("pivot solved out of order");
                    acc -= xj * Rational::from_integer(a.clone());
                }
            }
            x[*p] = Some(acc / Rational::from_integer(row[*p].clone()));
        }
        Some(x.into_iter().map(|v| v.expect("full rank")).collect())
    }
}

fn to_integer_row<'a>(entries: impl Iterator<Item = &'a Rational>) -> Vec<BigInt> {
    let entries: Vec<&Rational> = entries.collect();
    let lcm = entries
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let mut row: Vec<BigInt> = entries
        .iter()
        .map(|r| r.numer() * (&lcm / r.denom()))
        .collect();
    normalize(&mut row);
    row
}

fn normalize(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
    if let Some(first) = row.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::{int, rat};

    #[test]
    fn solves_small_system_and_verifies_extra_rows() {
        // x + 2y = 5, 3x - y = 1  →  x = 1, y = 2
        let mut s = IncrementalSolver::new(2);
        s.push(&[int(1), int(2)], &int(5)).unwrap();
        assert!(!s.is_full_rank());
        s.push(&[int(3), int(-1)], &int(1)).unwrap();
        assert_eq!(s.full_rank_after(), Some(2));
        assert_eq!(
            s.push(&[int(1), int(1)], &int(3)),
            Ok(RowOutcome::Redundant)
        );
        assert_eq!(s.verified(), 1);
        assert_eq!(s.solution().unwrap(), vec![int(1), int(2)]);
        assert_eq!(s.push(&[int(1), int(1)], &int(4)), Err(Inconsistent));
    }

    #[test]
    fn rational_entries() {
        let mut s = IncrementalSolver::new(2);
        s.push(&[rat(1, 2), rat(1, 3)], &rat(1, 6)).unwrap();
        s.push(&[rat(0, 1), rat(2, 7)], &rat(-2, 7)).unwrap();
        // y = -1, x/2 = 1/6 + 1/3 → x = 1
        assert_eq!(s.solution().unwrap(), vec![int(1), int(-1)]);
    }

    #[test]
    fn dependent_rows_before_full_rank() {
        let mut s = IncrementalSolver::new(3);
        s.push(&[int(1), int(1), int(0)], &int(2)).unwrap();
        assert_eq!(
            s.push(&[int(2), int(2), int(0)], &int(4)),
            Ok(RowOutcome::Redundant)
        );
        assert_eq!(s.verified(), 0);
        s.push(&[int(0), int(1), int(1)], &int(3)).unwrap();
        s.push(&[int(1), int(0), int(1)], &int(2)).unwrap();
        assert_eq!(
            s.solution().unwrap(),
            vec![int(1) / int(2), int(3) / int(2), int(3) / int(2)]
        );
    }
}
