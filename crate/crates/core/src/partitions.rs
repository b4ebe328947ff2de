//! Integer partitions: enumeration, shifted and Frobenius coordinates, shifted power
//! sums `p_k(λ) = Σ_i (λ̃_i^k - (-i+1/2)^k)` with `λ̃_i = λ_i - i + 1/2`, and a few
//! classical statistics.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{HqmError, Result};
use crate::exactq::{factorial, rat, Rational};

/// Weakly decreasing positive parts. Serializes as a JSON array, e.g. `[3,1,1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        parts.retain(|&p| p > 0);
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(HqmError::InvalidArgument(format!(
                "parts must be weakly decreasing: {parts:?}"
            )));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.0.first().copied().unwrap_or(0);
        Partition(
            (1..=width)
                .map(|j| self.0.iter().take_while(|&&p| p >= j).count())
                .collect(),
        )
    }

    /// `(λ̃_1, …, λ̃_length)` with `λ_i = 0` past the last part.
    pub fn shifted(&self, length: usize) -> Result<Vec<Rational>> {
        if length < self.len() {
            return Err(HqmError::InvalidArgument(format!(
                "length {length} shorter than {} parts",
                self.len()
            )));
        }
        Ok((1..=length)
            .map(|i| {
                let part = self.0.get(i - 1).copied().unwrap_or(0) as i64;
                rat(2 * (part - i as i64) + 1, 2)
            })
            .collect())
    }

    pub fn frobenius(&self) -> FrobeniusCoords {
        let conj = self.conjugate();
        let arms = |parts: &[usize]| -> Vec<u64> {
            parts
                .iter()
                .enumerate()
                .filter(|(i, &p)| p > *i)
                .map(|(i, &p)| (2 * (p - i) - 1) as u64)
                .collect()
        };
        FrobeniusCoords {
            p: arms(&self.0),
            q: arms(&conj.0),
        }
    }

    /// Shifted power sum from its definition, summed over the rows of `λ`.
    pub fn pk(&self, k: u32) -> Rational {
        self.pk_padded(k, self.len())
    }

    /// Shifted power sum summed over `length ≥ #parts` rows; independent of `length`.
    pub fn pk_padded(&self, k: u32, length: usize) -> Rational {
        let shifted = self.shifted(length).expect("length below number of parts");
        shifted
            .iter()
            .enumerate()
            .map(|(i, x)| Pow::pow(x, k) - Pow::pow(rat(1 - 2 * (i as i64 + 1), 2), k))
            .sum()
    }

    pub fn pk_via_frobenius(&self, k: u32) -> Rational {
        self.frobenius().power_sum(k)
    }

    /// `p_1 .. p_kmax` in integer arithmetic: `2^k p_k = Σ_P (2p)^k - Σ_Q (-2q)^k`.
    pub fn power_sums(&self, kmax: u32) -> Vec<Rational> {
        let fr = self.frobenius();
        (1..=kmax)
            .map(|k| {
                let mut num = BigInt::zero();
                for &a in &fr.p {
                    num += Pow::pow(BigInt::from(a), k);
                }
                for &b in &fr.q {
                    num -= Pow::pow(-BigInt::from(b), k);
                }
                Rational::new(num, Pow::pow(BigInt::from(2), k))
            })
            .collect()
    }

    /// Sum of contents `j - i` over the boxes `(i, j)`.
    pub fn content_sum(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let (i, p) = (i as i64, p as i64);
                p * (p - 1) / 2 - i * p
            })
            .sum()
    }

    /// `n(λ) = Σ (i-1) λ_i`.
    pub fn n_stat(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &p)| (i * p) as i64)
            .sum()
    }

    /// `d! / ∏ hook lengths`.
    pub fn hook_dim(&self) -> BigInt {
        let conj = self.conjugate();
        let mut hooks = BigInt::one();
        for (i, &row) in self.0.iter().enumerate() {
            for (j, &col) in conj.0.iter().enumerate().take(row) {
                hooks *= (row - j) + (col - i) - 1;
            }
        }
        factorial(self.size() as u64) / hooks
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = HqmError;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(HqmError::InvalidArgument("parts must be positive".into()));
        }
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Half-integer Frobenius coordinates, stored as odd numerators over 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusCoords {
    pub p: Vec<u64>,
    pub q: Vec<u64>,
}

impl FrobeniusCoords {
    pub fn p_values(&self) -> Vec<Rational> {
        self.p.iter().map(|&a| rat(a as i64, 2)).collect()
    }

    pub fn q_values(&self) -> Vec<Rational> {
        self.q.iter().map(|&a| rat(a as i64, 2)).collect()
    }

    /// `Σ_{p∈P} p^k - Σ_{q∈Q} (-q)^k`.
    pub fn power_sum(&self, k: u32) -> Rational {
        let pos: Rational = self.p_values().iter().map(|x| Pow::pow(x, k)).sum();
        let neg: Rational = self.q_values().iter().map(|x| Pow::pow(-x, k)).sum();
        pos - neg
    }
}

/// All partitions of `d`, each once, in decreasing lexicographic order.
pub fn enumerate_partitions(d: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(d, d, &mut current, &mut out);
    out
}

fn fill(rest: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition(current.clone()));
        return;
    }
    for part in (1..=max_part.min(rest)).rev() {
        current.push(part);
        fill(rest - part, part, current, out);
        current.pop();
    }
}

/// Elementary and complete symmetric functions `e_0..e_jmax`, `h_0..h_jmax` of `xs`,
/// read off the generating products `∏(1 + x y)` and `∏ 1/(1 - x y)`.
pub fn elementary_and_complete(xs: &[Rational], jmax: usize) -> (Vec<Rational>, Vec<Rational>) {
    let mut e = vec![Rational::zero(); jmax + 1];
    let mut h = vec![Rational::zero(); jmax + 1];
    e[0] = Rational::one();
    h[0] = Rational::one();
    for x in xs {
        for j in (1..=jmax).rev() {
            let t = &e[j - 1] * x;
            e[j] += t;
        }
        // Multiply by 1/(1 - x y): h_j += x·h_{j-1}, ascending.
        for j in 1..=jmax {
            let t = &h[j - 1] * x;
            h[j] += t;
        }
    }
    (e, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::int;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    /// p(n) by Euler's pentagonal recurrence.
    fn pentagonal_count(n: usize) -> u64 {
        let mut p = vec![0i64; n + 1];
        p[0] = 1;
        for m in 1..=n {
            let mut k = 1i64;
            loop {
                let g1 = (k * (3 * k - 1) / 2) as usize;
                if g1 > m {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                p[m] += sign * p[m - g1];
                let g2 = (k * (3 * k + 1) / 2) as usize;
                if g2 <= m {
                    p[m] += sign * p[m - g2];
                }
                k += 1;
            }
        }
        p[n] as u64
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_partitions(0), vec![Partition::empty()]);
        let four: Vec<Vec<usize>> = enumerate_partitions(4)
            .into_iter()
            .map(Into::into)
            .collect();
        assert_eq!(
            four,
            vec![
                vec![4],
                vec![3, 1],
                vec![2, 2],
                vec![2, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
        assert_eq!(enumerate_partitions(10).len(), 42);
        for n in 0..=20 {
            assert_eq!(enumerate_partitions(n).len() as u64, pentagonal_count(n));
        }
    }

    #[test]
    fn shifted_examples() {
        assert_eq!(part(&[2]).shifted(2).unwrap(), vec![rat(3, 2), rat(-3, 2)]);
        assert_eq!(
            part(&[1, 1]).shifted(2).unwrap(),
            vec![rat(1, 2), rat(-1, 2)]
        );
        assert_eq!(
            Partition::empty().shifted(3).unwrap(),
            vec![rat(-1, 2), rat(-3, 2), rat(-5, 2)]
        );
        assert!(part(&[1, 1]).shifted(1).is_err());
    }

    #[test]
    fn frobenius_examples() {
        let f = part(&[2]).frobenius();
        assert_eq!(
            (f.p_values(), f.q_values()),
            (vec![rat(3, 2)], vec![rat(1, 2)])
        );
        let f = part(&[2, 1]).frobenius();
        assert_eq!(
            (f.p_values(), f.q_values()),
            (vec![rat(3, 2)], vec![rat(3, 2)])
        );
        let f = Partition::empty().frobenius();
        assert!(f.p.is_empty() && f.q.is_empty());
    }

    #[test]
    fn frobenius_from_definition_sets() {
        // P = {λ̃_i > 0}, Q = {λ̃'_i > 0}.
        for d in 0..=10 {
            for l in enumerate_partitions(d) {
                let positive = |p: &Partition| -> Vec<Rational> {
                    p.shifted(d.max(1))
                        .unwrap()
                        .into_iter()
                        .filter(|x| *x > Rational::zero())
                        .collect()
                };
                let f = l.frobenius();
                assert_eq!(f.p_values(), positive(&l), "{l}");
                assert_eq!(f.q_values(), positive(&l.conjugate()), "{l}");
                assert_eq!(f.p.len(), f.q.len());
                let total: Rational = f.p_values().into_iter().chain(f.q_values()).sum();
                assert_eq!(total, int(d as i64), "{l}");
            }
        }
    }

    #[test]
    fn pk_examples() {
        assert_eq!(part(&[2]).pk(2), int(2));
        assert_eq!(part(&[1, 1]).pk(2), int(-2));
        assert_eq!(part(&[2]).pk_via_frobenius(2), int(2));
        for k in 0..5 {
            assert!(Partition::empty().pk_via_frobenius(k).is_zero());
        }
        for d in 0..=8 {
            for l in enumerate_partitions(d) {
                assert_eq!(l.pk(1), int(d as i64));
                assert!(l.pk(0).is_zero());
            }
        }
    }

    #[test]
    fn pk_routes_agree() {
        for d in 0..=8 {
            for l in enumerate_partitions(d) {
                let fast = l.power_sums(6);
                for k in 0..=6u32 {
                    let direct = l.pk(k);
                    assert_eq!(l.pk_via_frobenius(k), direct, "{l} k={k}");
                    if k > 0 {
                        assert_eq!(fast[k as usize - 1], direct, "{l} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn pk_independent_of_padding() {
        for l in enumerate_partitions(7) {
            for k in 0..5 {
                let base = l.pk(k);
                for extra in 1..4 {
                    assert_eq!(l.pk_padded(k, l.len() + extra), base);
                }
            }
        }
    }

    #[test]
    fn conjugation_properties() {
        for d in 0..=10 {
            for l in enumerate_partitions(d) {
                let c = l.conjugate();
                assert_eq!(c.conjugate(), l);
                let (f, fc) = (l.frobenius(), c.frobenius());
                assert_eq!((f.p.clone(), f.q.clone()), (fc.q, fc.p));
                assert_eq!(c.pk(2), -l.pk(2));
            }
        }
        for d in 0..=12 {
            for l in enumerate_partitions(d) {
                let f = l.frobenius();
                let total: Rational = f.p_values().into_iter().chain(f.q_values()).sum();
                assert_eq!(total, int(d as i64));
            }
        }
    }

    #[test]
    fn symmetric_functions() {
        let xs = part(&[2]).shifted(2).unwrap();
        let (e, h) = elementary_and_complete(&xs, 4);
        assert_eq!((e[0].clone(), h[0].clone()), (int(1), int(1)));
        assert!(e[1].is_zero() && h[1].is_zero());
        for d in 1..=8 {
            for l in enumerate_partitions(d) {
                let xs = l.shifted(d).unwrap();
                let (e, h) = elementary_and_complete(&xs, 10);
                for n in 1..=10 {
                    let s: Rational = (0..=n)
                        .map(|i| {
                            let t = &e[i] * &h[n - i];
                            if i % 2 == 0 {
                                t
                            } else {
                                -t
                            }
                        })
                        .sum();
                    assert!(s.is_zero(), "{l} n={n}");
                }
            }
        }
    }

    #[test]
    fn contents() {
        assert_eq!(part(&[2]).content_sum(), 1);
        assert_eq!(part(&[1, 1]).content_sum(), -1);
        for d in 0..=8 {
            for l in enumerate_partitions(d) {
                assert_eq!(l.content_sum(), l.conjugate().n_stat() - l.n_stat());
            }
        }
    }

    #[test]
    fn hook_dimensions() {
        assert_eq!(part(&[5]).hook_dim(), BigInt::one());
        assert_eq!(part(&[2, 1]).hook_dim(), BigInt::from(2));
        for d in 0..=8 {
            let total: BigInt = enumerate_partitions(d)
                .iter()
                .map(|l| {
                    let x = l.hook_dim();
                    &x * &x
                })
                .sum();
            assert_eq!(total, factorial(d as u64));
        }
    }

    #[test]
    fn json_form() {
        let l = part(&[3, 1, 1]);
        assert_eq!(serde_json::to_string(&l).unwrap(), "[3,1,1]");
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
    }
}
