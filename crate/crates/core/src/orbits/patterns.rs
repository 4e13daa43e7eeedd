//! Arithmetic progressions and polynomial patterns inside hitting sets.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::bitset::Bitset;
use super::scan::HittingSet;
use crate::error::{LabError, Result};

/// `a, a + tau k, ..., a + m tau k`, all inside the source set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct APWitness {
    pub a: u64,
    pub k: u64,
    pub m: u64,
    pub tau: u64,
}

impl APWitness {
    pub fn members(&self) -> Vec<u64> {
        (0..=self.m).map(|j| self.a + j * self.tau * self.k).collect()
    }

    pub fn holds_in(&self, h: &HittingSet) -> bool {
        self.members().into_iter().all(|n| h.contains(n))
    }
}

/// `n_max / (4 m tau)`, at least 1.
pub fn default_k_max(n_max: u64, m: u64, tau: u64) -> u64 {
    (n_max / (4 * m.max(1) * tau.max(1))).max(1)
}

/// Starts `a >= 1` with `a + o` in `h` for every offset.
fn pattern_starts(h: &HittingSet, offsets: &[u64], first_only: bool) -> Vec<u64> {
    let n_max = h.n_max();
    let reach = offsets.iter().copied().max().unwrap_or(0);
    if reach >= n_max {
        return Vec::new();
    }
    let members = h.len() as u64;
    if members < n_max / 64 {
        let mut out = Vec::new();
        for a in h.iter() {
            if a + reach > n_max {
                break;
            }
            if offsets.iter().all(|&o| h.contains(a + o)) {
                out.push(a);
                if first_only {
                    break;
                }
            }
        }
        return out;
    }
    let mut acc: Bitset = h.bits().clone();
    for &o in offsets {
        if o > 0 {
            acc.and_shifted(h.bits(), o as usize);
        }
    }
    if first_only {
        acc.first().map(|a| a as u64).into_iter().collect()
    } else {
        acc.iter().map(|a| a as u64).collect()
    }
}

fn check_ap_args(m: u64, tau: u64) -> Result<()> {
    if m < 1 {
        return Err(LabError::pre("order m must be at least 1"));
    }
    if tau < 1 {
        return Err(LabError::pre("step multiplier tau must be at least 1"));
    }
    Ok(())
}

/// Smallest `k <= k_max`, then smallest `a`, with a full progression in `h`.
pub fn find_ap(h: &HittingSet, m: u64, tau: u64, k_max: u64) -> Result<Option<APWitness>> {
    check_ap_args(m, tau)?;
    if k_max < 1 {
        return Err(LabError::pre("k_max must be at least 1"));
    }
    for k in 1..=k_max {
        let step = tau * k;
        if m * step >= h.n_max() {
            break;
        }
        let offsets: Vec<u64> = (1..=m).map(|j| j * step).collect();
        if let Some(&a) = pattern_starts(h, &offsets, true).first() {
            return Ok(Some(APWitness { a, k, m, tau }));
        }
    }
    Ok(None)
}

/// Every start of an `(m+1)`-term progression with difference `tau k`.
pub fn ap_k_members(h: &HittingSet, k: u64, m: u64, tau: u64) -> Result<Vec<u64>> {
    if k < 1 {
        return Err(LabError::pre("k must be at least 1"));
    }
    if tau < 1 {
        return Err(LabError::pre("step multiplier tau must be at least 1"));
    }
    let offsets: Vec<u64> = (1..=m).map(|j| j * tau * k).collect();
    Ok(pattern_starts(h, &offsets, false))
}

/// Integer-valued polynomial `p(k) = sum_{j>=1} c_j C(k, j)` with `p(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntPolynomial {
    /// `binomial[j-1] = c_j`
    binomial: Vec<i64>,
}

impl IntPolynomial {
    pub fn from_binomial(coeffs: Vec<i64>) -> Self {
        let mut binomial = coeffs;
        while binomial.last() == Some(&0) {
            binomial.pop();
        }
        IntPolynomial { binomial }
    }

    /// From monomial coefficients `a_1 k + a_2 k^2 + ...`, via
    /// `k^n = sum_j S(n, j) j! C(k, j)`.
    pub fn from_monomial(coeffs: &[i64]) -> Result<Self> {
        let d = coeffs.len();
        // stirling[n][j] * j!, the number of surjections from n onto j
        let mut surj = vec![vec![0i128; d + 1]; d + 1];
        surj[0][0] = 1;
        for n in 1..=d {
            for j in 1..=n {
                surj[n][j] = j as i128 * (surj[n - 1][j - 1] + surj[n - 1][j]);
            }
        }
        let mut binomial = vec![0i64; d];
        for (j, out) in binomial.iter_mut().enumerate() {
            let mut c: i128 = 0;
            for (n, &a) in coeffs.iter().enumerate() {
                c += a as i128 * surj[n + 1][j + 1];
            }
            *out = i64::try_from(c).map_err(|_| LabError::arg("polynomial coefficients overflow"))?;
        }
        Ok(Self::from_binomial(binomial))
    }

    pub fn linear(c: i64) -> Self {
        Self::from_binomial(vec![c])
    }

    pub fn binomial_coeffs(&self) -> &[i64] {
        &self.binomial
    }

    /// `p(k)`, or `None` on overflow.
    pub fn eval(&self, k: u64) -> Option<i128> {
        let mut total: i128 = 0;
        let mut binom: i128 = 1;
        for (idx, &c) in self.binomial.iter().enumerate() {
            let j = idx as i128 + 1;
            binom = binom.checked_mul(k as i128 - j + 1)? / j;
            total = total.checked_add(binom.checked_mul(c as i128)?)?;
        }
        Some(total)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .binomial
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, c)| format!("{c}*C(k,{})", j + 1))
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// `a, a + p_1(k), ..., a + p_m(k)` found inside a hitting set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyWitness {
    pub a: u64,
    pub k: u64,
    pub offsets: Vec<u64>,
}

impl PolyWitness {
    pub fn holds_in(&self, h: &HittingSet) -> bool {
        h.contains(self.a) && self.offsets.iter().all(|&o| h.contains(self.a + o))
    }
}

/// Smallest `k <= k_max` with every `p_j(k)` positive and a full pattern in
/// `h`, then smallest `a`. Each `p_j` must be non-negative on `1..=k_max`.
pub fn find_poly_pattern(
    h: &HittingSet,
    polys: &[IntPolynomial],
    k_max: u64,
) -> Result<Option<PolyWitness>> {
    if polys.is_empty() {
        return Err(LabError::pre("need at least one polynomial"));
    }
    if k_max < 1 {
        return Err(LabError::pre("k_max must be at least 1"));
    }
    let mut table = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let mut row = Vec::with_capacity(polys.len());
        for p in polys {
            match p.eval(k) {
                Some(v) if v < 0 => {
                    return Err(LabError::pre(format!("{p} is negative at k = {k}")));
                }
                Some(v) => row.push(u64::try_from(v).unwrap_or(u64::MAX)),
                None => row.push(u64::MAX),
            }
        }
        table.push(row);
    }
    for (k, offsets) in (1..=k_max).zip(table) {
        if offsets.iter().any(|&o| o == 0 || o >= h.n_max()) {
            continue;
        }
        if let Some(&a) = pattern_starts(h, &offsets, true).first() {
            return Ok(Some(PolyWitness { a, k, offsets }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n_max: u64, f: impl Fn(u64) -> bool) -> HittingSet {
        HittingSet::from_indices(n_max, (1..=n_max).filter(|&n| f(n))).unwrap()
    }

    fn brute_ap(h: &HittingSet, m: u64, tau: u64, k_max: u64) -> Option<(u64, u64)> {
        for k in 1..=k_max {
            for a in 1..=h.n_max() {
                if (0..=m).all(|j| h.contains(a + j * tau * k)) {
                    return Some((a, k));
                }
            }
        }
        None
    }

    #[test]
    fn ap_examples() {
        let full = set(100, |_| true);
        assert_eq!(find_ap(&full, 3, 1, 10).unwrap(), Some(APWitness { a: 1, k: 1, m: 3, tau: 1 }));

        let evens = set(1000, |n| n % 2 == 0);
        let w = find_ap(&evens, 4, 1, 100).unwrap().unwrap();
        assert_eq!((w.a, w.k), (2, 2));
        assert_eq!(brute_ap(&evens, 4, 1, 100), Some((2, 2)));
        assert!(w.holds_in(&evens));

        let n_max = 1u64 << 20;
        let pow2 = HittingSet::from_indices(n_max, (0..=20).map(|k| 1u64 << k)).unwrap();
        assert_eq!(find_ap(&pow2, 2, 1, default_k_max(n_max, 2, 1)).unwrap(), None);
        assert!(find_ap(&pow2, 0, 1, 10).is_err());
    }

    #[test]
    fn members_examples() {
        let full = set(20, |_| true);
        assert_eq!(ap_k_members(&full, 5, 3, 1).unwrap(), vec![1, 2, 3, 4, 5]);
        let evens = set(200, |n| n % 2 == 0);
        assert!(ap_k_members(&evens, 1, 1, 1).unwrap().is_empty());
        let w = find_ap(&evens, 3, 2, 50).unwrap().unwrap();
        let members = ap_k_members(&evens, w.k, 3, 2).unwrap();
        assert_eq!(members.first(), Some(&w.a));
    }

    #[test]
    fn polynomial_basis() {
        let sq = IntPolynomial::from_monomial(&[0, 1]).unwrap();
        assert_eq!(sq.binomial_coeffs(), &[1, 2]);
        for k in 0..50u64 {
            assert_eq!(sq.eval(k), Some((k * k) as i128));
        }
        let cubic = IntPolynomial::from_monomial(&[2, -3, 1]).unwrap();
        for k in 0..50i128 {
            assert_eq!(cubic.eval(k as u64), Some(2 * k - 3 * k * k + k * k * k));
        }
        // k(k-1)/2 has non-integer monomial coefficients but is C(k, 2)
        let tri = IntPolynomial::from_binomial(vec![0, 1]);
        assert_eq!(tri.eval(7), Some(21));
        assert_eq!(tri.to_string(), "1*C(k,2)");
    }

    #[test]
    fn poly_patterns() {
        let full = set(10_000, |_| true);
        let polys = [
            IntPolynomial::from_monomial(&[0, 1]).unwrap(),
            IntPolynomial::from_monomial(&[0, 2]).unwrap(),
        ];
        let w = find_poly_pattern(&full, &polys, 50).unwrap().unwrap();
        assert_eq!((w.a, w.k), (1, 1));

        let mult4 = set(10_000, |n| n % 4 == 0);
        let w = find_poly_pattern(&mult4, &polys[..1], 50).unwrap().unwrap();
        assert_eq!((w.a, w.k), (4, 2));
        assert!(w.holds_in(&mult4));

        // p(k) = k reduces to find_ap with m = 1
        let odd3 = set(3000, |n| n % 3 != 1);
        let ap = find_ap(&odd3, 1, 1, 100).unwrap().unwrap();
        let pw = find_poly_pattern(&odd3, &[IntPolynomial::linear(1)], 100).unwrap().unwrap();
        assert_eq!((ap.a, ap.k), (pw.a, pw.k));

        let bad = IntPolynomial::from_monomial(&[-1, 0]).unwrap();
        assert!(find_poly_pattern(&full, &[bad], 5).is_err());
    }
}
