//! Numerical semigroups generated by finite sets of positive integers:
//! membership, gaps, gap counts and the Frobenius number.

mod table;

pub use table::{GapIter, RepresentabilityTable, DEFAULT_BUDGET};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};

/// A strictly increasing list of at least two integers, each at least 2.
///
/// Coprimality is not required; see [`GeneratorSet::gcd`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSet {
    elements: Vec<BigUint>,
}

impl GeneratorSet {
    /// Sorts the input and validates it. Duplicates are rejected, not merged.
    pub fn new(mut elements: Vec<BigUint>) -> Result<Self> {
        elements.sort();
        if elements.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a generator set needs at least 2 elements, got {}",
                elements.len()
            )));
        }
        if let Some(small) = elements.iter().find(|e| **e < BigUint::from(2u32)) {
            return Err(Error::InvalidInput(format!(
                "generators must be at least 2, got {small}"
            )));
        }
        if let Some(pair) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!(
                "duplicate generator {}",
                pair[0]
            )));
        }
        Ok(GeneratorSet { elements })
    }

    pub fn from_u64s(elements: &[u64]) -> Result<Self> {
        Self::new(elements.iter().map(|&e| BigUint::from(e)).collect())
    }

    pub fn elements(&self) -> &[BigUint] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = &BigUint> {
        self.elements.iter()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn min(&self) -> &BigUint {
        &self.elements[0]
    }

    pub fn max(&self) -> &BigUint {
        &self.elements[self.elements.len() - 1]
    }

    pub fn gcd(&self) -> BigUint {
        self.elements
            .iter()
            .fold(BigUint::zero(), |acc, e| acc.gcd(e))
    }

    pub fn is_coprime(&self) -> bool {
        self.gcd().is_one()
    }

    pub fn is_subset_of(&self, other: &GeneratorSet) -> bool {
        self.elements
            .iter()
            .all(|e| other.elements.binary_search(e).is_ok())
    }

    fn require_coprime(&self) -> Result<()> {
        if self.is_coprime() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "generators have gcd {}, so the gap set is infinite",
                self.gcd()
            )))
        }
    }

    fn min_u64(&self) -> u64 {
        // Stabilization needs min(A) consecutive flags, so it must be addressable.
        self.min().to_u64().unwrap_or(u64::MAX)
    }

    /// Membership of `n` in S(A).
    pub fn is_representable(&self, n: &BigUint, budget: u64) -> Result<bool> {
        if n.is_zero() {
            return Ok(true);
        }
        if n < self.min() {
            return Ok(false);
        }
        if self.is_coprime() {
            let stable = self.stabilization_bound(budget)?;
            if *n >= BigUint::from(stable) {
                return Ok(true);
            }
        }
        let bound = to_table_index(n, budget)?;
        Ok(self.representability_prefix(bound, budget)?.contains(bound))
    }

    pub fn representability_prefix(
        &self,
        bound: u64,
        budget: u64,
    ) -> Result<RepresentabilityTable> {
        RepresentabilityTable::build(self, bound, budget)
    }

    /// Gaps in the closed interval `[lo, hi]`. Works for non-coprime sets.
    pub fn gaps_in_interval(&self, lo: &BigUint, hi: &BigUint, budget: u64) -> Result<GapReport> {
        if lo > hi {
            return Err(Error::InvalidInput(format!("empty interval [{lo}, {hi}]")));
        }
        // Past the stabilization point nothing changes, so the table can stop there.
        let mut effective_hi = hi.clone();
        if self.is_coprime() {
            let stable = BigUint::from(self.stabilization_bound(budget)?);
            if effective_hi >= stable {
                effective_hi = stable;
            }
        }
        let interval = (lo.clone(), Some(hi.clone()));
        if *lo > effective_hi {
            return Ok(GapReport::new(interval, Vec::new()));
        }
        let hi_idx = to_table_index(&effective_hi, budget)?;
        let lo_idx = lo.to_u64().expect("lo <= hi fits");
        let table = self.representability_prefix(hi_idx, budget)?;
        Ok(GapReport::new(
            interval,
            table.gaps_in(lo_idx, hi_idx).collect(),
        ))
    }

    /// Gaps in `[kappa, ∞)`. Requires a coprime set.
    pub fn count_gaps_from(&self, kappa: &BigUint, budget: u64) -> Result<GapReport> {
        self.require_coprime()?;
        let stable = self.stabilization_bound(budget)?;
        let interval = (kappa.clone(), None);
        let Some(lo) = kappa.to_u64().filter(|&k| k < stable) else {
            return Ok(GapReport::new(interval, Vec::new()));
        };
        let table = self.representability_prefix(stable, budget)?;
        Ok(GapReport::new(
            interval,
            table.gaps_in(lo, stable).collect(),
        ))
    }

    /// The whole gap set N(A). Requires a coprime set.
    pub fn count_all_gaps(&self, budget: u64) -> Result<GapReport> {
        self.count_gaps_from(&BigUint::one(), budget)
    }

    /// The largest gap g(A). Requires a coprime set.
    pub fn frobenius_number(&self, budget: u64) -> Result<u64> {
        self.require_coprime()?;
        Ok(self.stabilization_bound(budget)? - 1)
    }

    /// Least `B` such that `B, B+1, ..., B+min(A)-1` are all representable.
    ///
    /// Every integer from `B` on is then representable, and `B - 1` is the
    /// Frobenius number. The table is grown geometrically from
    /// `2·max(A) + min(A)` until such a run appears.
    pub fn stabilization_bound(&self, budget: u64) -> Result<u64> {
        self.stabilized_table(budget).map(|(b, _)| b)
    }

    /// Like [`stabilization_bound`](Self::stabilization_bound), also returning
    /// a table that covers at least `[0, B + min(A) - 1]`.
    pub fn stabilized_table(&self, budget: u64) -> Result<(u64, RepresentabilityTable)> {
        self.require_coprime()?;
        let min = self.min_u64();
        let max = to_table_index(self.max(), budget)?;
        let mut bound = max
            .saturating_mul(2)
            .saturating_add(min)
            .min(budget.saturating_sub(1));
        let mut table = self.representability_prefix(bound, budget)?;
        loop {
            let start = table.last_gap().map_or(0, |g| g + 1);
            if table.bound() + 1 - start >= min {
                return Ok((start, table));
            }
            if bound >= budget.saturating_sub(1) {
                return Err(Error::budget(
                    "stabilization search",
                    format!("more than {budget} entries"),
                    budget,
                ));
            }
            bound = bound.saturating_mul(2).min(budget - 1);
            table.extend_to(bound, budget)?;
        }
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

fn to_table_index(n: &BigUint, budget: u64) -> Result<u64> {
    match n.to_u64() {
        Some(v) if (v as u128) < budget as u128 => Ok(v),
        _ => Err(Error::budget("representability table", n + 1u32, budget)),
    }
}

/// Gaps found in an interval; `hi = None` stands for an unbounded interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapReport {
    #[serde(serialize_with = "crate::format::ser_biguint")]
    pub lo: BigUint,
    #[serde(serialize_with = "crate::format::ser_opt_biguint")]
    pub hi: Option<BigUint>,
    pub gaps: Vec<u64>,
    pub count: u64,
}

impl GapReport {
    fn new(interval: (BigUint, Option<BigUint>), gaps: Vec<u64>) -> Self {
        GapReport {
            lo: interval.0,
            hi: interval.1,
            count: gaps.len() as u64,
            gaps,
        }
    }
}

/// Sylvester's closed form `(a1 - 1)(a2 - 1) / 2` for the gap count of `<a1, a2>`.
pub fn sylvester_count(a1: &BigUint, a2: &BigUint) -> Result<BigUint> {
    let two = BigUint::from(2u32);
    if *a1 < two || a1 >= a2 {
        return Err(Error::InvalidInput(format!(
            "need 2 <= a1 < a2, got ({a1}, {a2})"
        )));
    }
    if !a1.gcd(a2).is_one() {
        return Err(Error::Precondition(format!(
            "{a1} and {a2} are not coprime"
        )));
    }
    Ok((a1 - 1u32) * (a2 - 1u32) / two)
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: u64 = DEFAULT_BUDGET;

    fn set(gens: &[u64]) -> GeneratorSet {
        GeneratorSet::from_u64s(gens).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn rejects_malformed_sets() {
        assert!(GeneratorSet::from_u64s(&[5]).is_err());
        assert!(GeneratorSet::from_u64s(&[1, 5]).is_err());
        assert!(GeneratorSet::from_u64s(&[4, 4, 7]).is_err());
        assert_eq!(set(&[11, 6, 15]).elements()[0], big(6));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(set(&[6, 11, 15]).gcd(), big(1));
        assert_eq!(set(&[6, 9, 15]).gcd(), big(3));
        assert_eq!(set(&[8, 12, 13]).gcd(), big(1));
    }

    #[test]
    fn representability_examples() {
        let a = set(&[6, 11, 15]);
        assert!(a.is_representable(&big(17), B).unwrap());
        assert!(!a.is_representable(&big(19), B).unwrap());
        assert!(!set(&[8, 12, 13]).is_representable(&big(30), B).unwrap());
        // Far beyond the table budget, but past the Frobenius number.
        assert!(a.is_representable(&(big(1) << 200u32), B).unwrap());
    }

    #[test]
    fn prefix_tables() {
        let t = set(&[8, 12, 13]).representability_prefix(31, B).unwrap();
        assert!(!t.contains(30) && !t.contains(31));
        assert!(t.contains(28) && t.contains(29));
    }

    #[test]
    fn six_eleven_fifteen() {
        // Brute-force oracle values; the commonly quoted 10-gap list omits 5, 10, 16, 20, 25, 31.
        let a = set(&[6, 11, 15]);
        let all = a.count_all_gaps(B).unwrap();
        assert_eq!(
            all.gaps,
            vec![1, 2, 3, 4, 5, 7, 8, 9, 10, 13, 14, 16, 19, 20, 25, 31]
        );
        assert_eq!(a.frobenius_number(B).unwrap(), 31);
        assert_eq!(a.stabilization_bound(B).unwrap(), 32);
        let r = a.gaps_in_interval(&big(1), &big(19), B).unwrap();
        assert_eq!(r.gaps, vec![1, 2, 3, 4, 5, 7, 8, 9, 10, 13, 14, 16, 19]);
        assert_eq!(r.count, 13);
    }

    #[test]
    fn interval_examples() {
        let r = set(&[8, 12, 13])
            .gaps_in_interval(&big(28), &big(31), B)
            .unwrap();
        assert_eq!((r.gaps.clone(), r.count), (vec![30, 31], 2));
        let r = set(&[2, 3]).gaps_in_interval(&big(1), &big(5), B).unwrap();
        assert_eq!(r.gaps, vec![1]);
        assert!(set(&[2, 3]).gaps_in_interval(&big(5), &big(1), B).is_err());
    }

    #[test]
    fn non_coprime_interval_allowed_tail_rejected() {
        let a = set(&[6, 9, 15]);
        let r = a.gaps_in_interval(&big(1), &big(12), B).unwrap();
        assert_eq!(r.gaps, vec![1, 2, 3, 4, 5, 7, 8, 10, 11]);
        assert!(matches!(
            a.count_gaps_from(&big(1), B),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(a.frobenius_number(B), Err(Error::Precondition(_))));
        assert!(matches!(
            a.stabilization_bound(B),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn bounded_gap_examples() {
        assert_eq!(
            set(&[6, 11, 15]).count_gaps_from(&big(1), B).unwrap().count,
            16
        );
        assert_eq!(set(&[2, 3]).count_gaps_from(&big(2), B).unwrap().count, 0);
        let r = set(&[8, 12, 13, 27]).count_gaps_from(&big(28), B).unwrap();
        assert_eq!(r.gaps, vec![30, 31]);
        assert_eq!(r.hi, None);
        let huge = big(1) << 100u32;
        assert_eq!(set(&[2, 3]).count_gaps_from(&huge, B).unwrap().count, 0);
    }

    #[test]
    fn whole_gap_sets() {
        let a = set(&[12, 19, 51, 53]);
        assert_eq!(a.count_all_gaps(B).unwrap().count, 60);
        assert_eq!(a.frobenius_number(B).unwrap(), 109);
        assert_eq!(set(&[2, 3]).count_all_gaps(B).unwrap().gaps, vec![1]);
        assert_eq!(set(&[2, 3]).frobenius_number(B).unwrap(), 1);
    }

    #[test]
    fn stabilization_examples() {
        assert_eq!(set(&[2, 3]).stabilization_bound(B).unwrap(), 2);
        assert_eq!(set(&[8, 12, 13]).stabilization_bound(B).unwrap(), 44);
        assert_eq!(set(&[8, 12, 13]).frobenius_number(B).unwrap(), 43);
    }

    #[test]
    fn stabilization_refuses_tiny_budget() {
        let err = set(&[1000, 1001]).stabilization_bound(5000).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }

    #[test]
    fn sylvester_examples() {
        assert_eq!(sylvester_count(&big(2), &big(3)).unwrap(), big(1));
        assert_eq!(sylvester_count(&big(6), &big(11)).unwrap(), big(25));
        assert_eq!(sylvester_count(&big(12), &big(19)).unwrap(), big(99));
        assert!(matches!(
            sylvester_count(&big(4), &big(6)),
            Err(Error::Precondition(_))
        ));
        assert!(sylvester_count(&big(5), &big(5)).is_err());
    }

    #[test]
    fn sylvester_examples_match_enumeration() {
        assert_eq!(set(&[6, 11]).count_all_gaps(B).unwrap().count, 25);
        assert_eq!(set(&[12, 19]).count_all_gaps(B).unwrap().count, 99);
    }
}
