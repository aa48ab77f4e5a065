//! Exact θ arithmetic, multi-indices, and the degree band `⌈Nθ⌉ ≤ |α| ≤ N`.
//!
//! θ is kept as a reduced fraction so every ceiling/floor identity used by
//! the rest of the crate is an exact integer statement.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest denominator accepted when θ is given as a decimal.
pub const MAX_DECIMAL_DENOMINATOR: u64 = 1_000_000;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A rational θ = p/q in [0, 1], always in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Theta {
    p: u64,
    q: u64,
}

impl Theta {
    pub const ZERO: Theta = Theta { p: 0, q: 1 };
    pub const ONE: Theta = Theta { p: 1, q: 1 };

    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 || p > q {
            return Err(Error::InvalidTheta(format!("{p}/{q}")));
        }
        let g = gcd(p, q);
        Ok(Theta { p: p / g, q: q / g })
    }

    pub fn numer(&self) -> u64 {
        self.p
    }

    pub fn denom(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0
    }

    pub fn is_one(&self) -> bool {
        self.p == self.q
    }

    pub fn as_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// `⌈nθ⌉`, the lowest admissible total degree in π_{n,θ}.
    pub fn ceil_mul(&self, n: u64) -> u64 {
        ceil_mul(n, *self)
    }

    /// `⌊nθ⌋`, the cutoff of the complete part in [`crate::poly::MultiPolynomial::split_incomplete`].
    pub fn floor_mul(&self, n: u64) -> u64 {
        let num = n as u128 * self.p as u128;
        (num / self.q as u128) as u64
    }
}

/// `⌈n·p/q⌉` in exact integer arithmetic.
pub fn ceil_mul(n: u64, theta: Theta) -> u64 {
    let num = n as u128 * theta.p as u128;
    let q = theta.q as u128;
    num.div_ceil(q) as u64
}

impl PartialOrd for Theta {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Theta {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p as u128 * other.q as u128).cmp(&(other.p as u128 * self.q as u128))
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl From<Theta> for String {
    fn from(t: Theta) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for Theta {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for Theta {
    type Err = Error;

    /// Accepts `"p/q"` or a plain decimal such as `"0.25"`; a decimal must
    /// reduce to a denominator of at most 10^6.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidTheta(s.to_string());
        let t = s.trim();
        if let Some((p, q)) = t.split_once('/') {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            return Theta::new(p, q).map_err(|_| bad());
        }
        let (int_part, frac_part) = match t.split_once('.') {
            Some((i, f)) => (i, f),
            None => (t, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let all_digits = |x: &str| x.chars().all(|c| c.is_ascii_digit());
        if !all_digits(int_part) || !all_digits(frac_part) {
            return Err(bad());
        }
        let frac_part = frac_part.trim_end_matches('0');
        if frac_part.len() > 18 {
            return Err(bad());
        }
        let q = 10u64.pow(frac_part.len() as u32);
        let ip: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let fp: u64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| bad())?
        };
        let p = ip.checked_mul(q).and_then(|x| x.checked_add(fp)).ok_or_else(bad)?;
        let theta = Theta::new(p, q).map_err(|_| bad())?;
        if theta.q > MAX_DECIMAL_DENOMINATOR {
            return Err(bad());
        }
        Ok(theta)
    }
}

/// Exponent vector α of the monomial z^α.
///
/// Ordered graded-lexicographically: total degree first, then the
/// component vectors lexicographically. The order is compatible with
/// multiplication, which the orthonormalization relies on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(components: Vec<u32>) -> Self {
        MultiIndex(components)
    }

    pub fn zero(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&a| a as u64).sum()
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// α + e_i.
    pub fn raised(&self, i: usize) -> MultiIndex {
        let mut c = self.0.clone();
        c[i] += 1;
        MultiIndex(c)
    }

    /// α − e_i, if α_i > 0.
    pub fn lowered(&self, i: usize) -> Option<MultiIndex> {
        if self.0[i] == 0 {
            return None;
        }
        let mut c = self.0.clone();
        c[i] -= 1;
        Some(MultiIndex(c))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// The canonical ordered index set of π_{N,θ} in `d` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncompleteIndexSet {
    n: u64,
    theta: Theta,
    dim_space: usize,
    indices: Vec<MultiIndex>,
}

impl IncompleteIndexSet {
    pub fn degree_bound(&self) -> u64 {
        self.n
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    pub fn dim_space(&self) -> usize {
        self.dim_space
    }

    /// `⌈Nθ⌉`.
    pub fn min_degree(&self) -> u64 {
        ceil_mul(self.n, self.theta)
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.indices.binary_search(alpha).ok()
    }

    pub fn contains(&self, alpha: &MultiIndex) -> bool {
        let deg = alpha.degree();
        alpha.dim() == self.dim_space && deg >= self.min_degree() && deg <= self.n
    }
}

/// All exponent vectors of `d` non-negative entries summing to `m`, in
/// ascending lexicographic order.
fn compositions(m: u32, d: usize, out: &mut Vec<MultiIndex>) {
    fn rec(remaining: u32, slot: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        let d = cur.len();
        if slot == d - 1 {
            cur[slot] = remaining;
            out.push(MultiIndex(cur.clone()));
            return;
        }
        for a in 0..=remaining {
            cur[slot] = a;
            rec(remaining - a, slot + 1, cur, out);
        }
    }
    let mut cur = vec![0u32; d];
    rec(m, 0, &mut cur, out);
}

pub fn enumerate_index_set(n: u64, theta: Theta, d: usize) -> IncompleteIndexSet {
    assert!(d >= 1, "dimension must be at least 1");
    let lo = ceil_mul(n, theta);
    let mut indices = Vec::with_capacity(dim(n, theta, d) as usize);
    for m in lo..=n {
        compositions(m as u32, d, &mut indices);
    }
    IncompleteIndexSet {
        n,
        theta,
        dim_space: d,
        indices,
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// d(N,θ) = Σ_{m=⌈Nθ⌉}^{N} C(m+d−1, d−1), without enumerating.
pub fn dim(n: u64, theta: Theta, d: usize) -> u64 {
    assert!(d >= 1, "dimension must be at least 1");
    let d = d as u64;
    let lo = ceil_mul(n, theta);
    (lo..=n).map(|m| binomial(m + d - 1, d - 1) as u64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn th(p: u64, q: u64) -> Theta {
        Theta::new(p, q).unwrap()
    }

    #[test]
    fn ceil_mul_examples() {
        assert_eq!(ceil_mul(5, th(1, 3)), 2);
        assert_eq!(ceil_mul(4, th(1, 2)), 2);
        assert_eq!(ceil_mul(7, th(2, 3)), 5);
        assert_eq!(ceil_mul(0, th(1, 2)), 0);
    }

    #[test]
    fn theta_is_reduced_and_bounded() {
        let t = th(6, 8);
        assert_eq!((t.numer(), t.denom()), (3, 4));
        assert!(Theta::new(5, 4).is_err());
        assert!(Theta::new(1, 0).is_err());
    }

    #[test]
    fn theta_parsing() {
        assert_eq!("1/3".parse::<Theta>().unwrap(), th(1, 3));
        assert_eq!("0.25".parse::<Theta>().unwrap(), th(1, 4));
        assert_eq!("1".parse::<Theta>().unwrap(), Theta::ONE);
        assert_eq!(".5".parse::<Theta>().unwrap(), th(1, 2));
        assert_eq!("0.500000".parse::<Theta>().unwrap(), th(1, 2));
        assert_eq!("0.000001".parse::<Theta>().unwrap(), th(1, 1_000_000));
        assert!("0.1234567".parse::<Theta>().is_err());
        assert!("1.5".parse::<Theta>().is_err());
        assert!("-0.5".parse::<Theta>().is_err());
        assert!("abc".parse::<Theta>().is_err());
        assert!("1/0".parse::<Theta>().is_err());
        assert!("1e-3".parse::<Theta>().is_err());
    }

    #[test]
    fn enumerate_examples() {
        let s = enumerate_index_set(5, Theta::ZERO, 1);
        let degs: Vec<u64> = s.indices().iter().map(|a| a.degree()).collect();
        assert_eq!(degs, vec![0, 1, 2, 3, 4, 5]);

        let s = enumerate_index_set(4, th(1, 2), 2);
        assert_eq!(s.len(), 12);
        assert!(s.indices().iter().all(|a| (2..=4).contains(&a.degree())));

        let s = enumerate_index_set(3, Theta::ONE, 1);
        assert_eq!(s.indices(), &[MultiIndex::new(vec![3])]);
    }

    #[test]
    fn zero_degree_with_positive_theta_is_constants() {
        let s = enumerate_index_set(0, th(1, 2), 2);
        assert_eq!(s.indices(), &[MultiIndex::zero(2)]);
        assert_eq!(dim(0, th(1, 2), 2), 1);
    }

    #[test]
    fn dim_examples() {
        assert_eq!(dim(5, th(1, 3), 1), 4);
        assert_eq!(dim(4, th(1, 2), 2), 12);
        assert_eq!(dim(10, Theta::ZERO, 2), 66);
    }

    #[test]
    fn graded_lex_order() {
        let s = enumerate_index_set(2, Theta::ZERO, 2);
        let got: Vec<Vec<u32>> = s.indices().iter().map(|a| a.components().to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![1, 0],
                vec![0, 2],
                vec![1, 1],
                vec![2, 0]
            ]
        );
    }

    // Brute-force lattice count over the box [0, N]^d.
    fn brute_count(n: u64, theta: Theta, d: usize) -> u64 {
        let lo = ceil_mul(n, theta);
        let side = n + 1;
        let mut count = 0;
        for code in 0..side.pow(d as u32) {
            let mut c = code;
            let mut s = 0;
            for _ in 0..d {
                s += c % side;
                c /= side;
            }
            if s >= lo && s <= n {
                count += 1;
            }
        }
        count
    }

    proptest! {
        #[test]
        fn ceiling_superadditivity(i in 0u64..500, j in 0u64..500, q in 1u64..50, p_raw in 0u64..50) {
            let t = th(p_raw % (q + 1), q);
            prop_assert!(ceil_mul(j, t) + ceil_mul(i, t) >= ceil_mul(i + j, t));
        }

        #[test]
        fn dim_matches_enumeration_and_brute_force(n in 0u64..9, d in 1usize..4, q in 1u64..7, p_raw in 0u64..7) {
            let t = th(p_raw % (q + 1), q);
            let s = enumerate_index_set(n, t, d);
            prop_assert_eq!(s.len() as u64, dim(n, t, d));
            prop_assert_eq!(dim(n, t, d), brute_count(n, t, d));
            prop_assert!(s.indices().windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn dim_non_increasing_in_theta(n in 0u64..60, d in 1usize..3, a in 0u64..=12, b in 0u64..=12) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(dim(n, th(hi, 12), d) <= dim(n, th(lo, 12), d));
        }
    }

    #[test]
    fn dimension_ratio_limit() {
        for &n in &[50u64, 100, 200] {
            for d in 1..=2usize {
                for t in [th(1, 4), th(1, 2), th(3, 4)] {
                    let ratio = dim(n, t, d) as f64 / dim(n, Theta::ZERO, d) as f64;
                    let target = 1.0 - t.as_f64().powi(d as i32);
                    assert!((ratio - target).abs() <= 5.0 * d as f64 / n as f64);
                }
            }
        }
    }
}
