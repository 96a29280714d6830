//! Lattice points in dilated cross-polytopes `{x in Z^k : |x|_1 <= r}`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{limit, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EhrhartQuery {
    pub k: u32,
    pub r: u64,
}

impl EhrhartQuery {
    pub fn new(k: u32, r: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Precondition("dimension must be at least 1".into()));
        }
        Ok(EhrhartQuery { k, r })
    }
}

/// Counts lattice points one by one, visiting at most `budget` of them.
pub fn lattice_count_bruteforce(q: EhrhartQuery, budget: u64) -> Result<u64> {
    fn walk(dims: u32, left: i64, budget: u64, count: &mut u64) -> bool {
        if dims == 0 {
            *count += 1;
            return *count <= budget;
        }
        for x in -left..=left {
            if !walk(dims - 1, left - x.abs(), budget, count) {
                return false;
            }
        }
        true
    }
    let mut count = 0;
    if !walk(q.k, q.r as i64, budget, &mut count) {
        return Err(limit("enumerated lattice points", budget as u128 + 1, budget as u128));
    }
    Ok(count)
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `sum_{i=0}^{k} 2^i r(r-1)...(r-i+1)/i!`, evaluated as printed.
pub fn ehrhart_paper_formula(q: EhrhartQuery) -> BigUint {
    (0..=q.k as u64)
        .map(|i| (BigUint::one() << i) * binomial(q.r, i))
        .sum()
}

/// `sum_{i=0}^{k} 2^i C(k,i) C(r,i)`.
pub fn ehrhart_corrected(q: EhrhartQuery) -> BigUint {
    (0..=q.k as u64)
        .map(|i| (BigUint::one() << i) * binomial(q.k as u64, i) * binomial(q.r, i))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EhrhartRow {
    pub k: u32,
    pub r: u64,
    pub oracle: Option<u64>,
    pub printed: BigUint,
    pub corrected: BigUint,
}

impl EhrhartRow {
    pub fn status(&self) -> &'static str {
        match self.oracle {
            None if self.printed == self.corrected => "match-unverified",
            None => "mismatch-paper-formula-unverified",
            Some(o) if BigUint::from(o) != self.corrected => "mismatch-corrected-formula",
            Some(o) if BigUint::from(o) != self.printed => "mismatch-paper-formula",
            Some(_) => "match",
        }
    }

    pub fn csv_header() -> &'static str {
        "k,r,oracle,paper_formula,corrected,status"
    }

    pub fn csv(&self) -> String {
        let oracle = self.oracle.map(|o| o.to_string()).unwrap_or_else(|| "skipped".into());
        format!(
            "{},{},{},{},{},{}",
            self.k,
            self.r,
            oracle,
            self.printed,
            self.corrected,
            self.status()
        )
    }
}

/// All three counts; the oracle is skipped when it exceeds `budget`.
pub fn ehrhart_row(q: EhrhartQuery, budget: u64) -> EhrhartRow {
    EhrhartRow {
        k: q.k,
        r: q.r,
        oracle: lattice_count_bruteforce(q, budget).ok(),
        printed: ehrhart_paper_formula(q),
        corrected: ehrhart_corrected(q),
    }
}

/// k-th forward difference in r at r = 0 of a count function.
pub fn top_difference(k: u32, f: impl Fn(u64) -> BigUint) -> BigUint {
    use num_bigint::BigInt;
    let mut acc = BigInt::zero();
    for j in 0..=k as u64 {
        let term = BigInt::from(binomial(k as u64, j)) * BigInt::from(f(j));
        if (k as u64 - j).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint().unwrap_or_default()
}
