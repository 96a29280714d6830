//! The recursion for KO colorings of the iterated wreath products `B_k`:
//! `B_k` admits `a_k lambda^k` colors with control `b_k (m + lambda^k) lambda^(k+1)`,
//! where `a_(k+1) = 4 a_k` and `b_(k+1) = 4 a_k b_k`.

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// `a_0`: the line coloring has dimension bound 2.
pub const BASE_COLORS: u32 = 2;

/// `b_0`: `2(m + 1)(lambda + 1) <= 4(m + 1) lambda` for `lambda >= 1`.
pub const BASE_CONTROL: u32 = 4;

/// One induction step from level `j` to `j + 1`, evaluated exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BkKoStep {
    pub level: u32,
    /// `(2 lambda + 1)(a_j lambda^j - 1) + 2`, colors after the product with `Z`.
    pub palette: BigUint,
    /// `4 a_j lambda^(j+1)`.
    pub palette_bound: BigUint,
    /// Control after the product with `Z`:
    /// `(2 lambda + 1) D_j(m + 2 + 2 lambda a_j lambda^j) + 4 lambda + 1
    ///  + 2(m + 4 a_j lambda^(j+1) + 1)(lambda + 1)`.
    pub control: BigUint,
    /// `4 a_j b_j (m + lambda^(j+1)) lambda^(j+2)`.
    pub control_bound: BigUint,
}

impl BkKoStep {
    pub fn palette_holds(&self) -> bool {
        self.palette <= self.palette_bound
    }

    pub fn control_holds(&self) -> bool {
        self.control <= self.control_bound
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoBoundReport {
    pub k: u32,
    pub lambda: u64,
    pub m: u64,
    /// `a_0, ..., a_k`.
    pub a: Vec<BigUint>,
    /// `b_0, ..., b_k`.
    pub b: Vec<BigUint>,
    /// `a_k lambda^k`.
    pub colors: BigUint,
    /// `b_k (m + lambda^k) lambda^(k+1)`.
    pub control: BigUint,
    /// `2(m + 1)(lambda + 1)`, the line coloring's own control.
    pub line_control: BigUint,
    pub steps: Vec<BkKoStep>,
}

impl KoBoundReport {
    pub fn a_k(&self) -> &BigUint {
        &self.a[self.k as usize]
    }

    pub fn b_k(&self) -> &BigUint {
        &self.b[self.k as usize]
    }

    /// The base constants dominate the line coloring: `2(m+1)(lambda+1) <= b_0 (m+1) lambda`.
    pub fn base_dominates_line(&self) -> bool {
        self.line_control <= &self.b[0] * (self.m + 1) * self.lambda
    }

    /// Every step's palette inequality holds.
    pub fn palette_chain_holds(&self) -> bool {
        self.steps.iter().all(BkKoStep::palette_holds)
    }

    /// Every step's control inequality holds.
    pub fn control_chain_holds(&self) -> bool {
        self.steps.iter().all(BkKoStep::control_holds)
    }
}

fn pow(x: u64, e: u32) -> BigUint {
    BigUint::from(x).pow(e)
}

/// `D_j(m, lambda) = b_j (m + lambda^j) lambda^(j+1)`.
fn level_control(b: &BigUint, j: u32, lambda: u64, m: &BigUint) -> BigUint {
    b * (m + pow(lambda, j)) * pow(lambda, j + 1)
}

/// Evaluates the recursion up to level `k` together with the inequalities
/// each step relies on.
pub fn bk_ko_bound(k: u32, lambda: u64, m: u64) -> Result<KoBoundReport> {
    if lambda < 1 {
        return Err(Error::Precondition("lambda must be at least 1".into()));
    }
    let mut a = vec![BigUint::from(BASE_COLORS)];
    let mut b = vec![BigUint::from(BASE_CONTROL)];
    let mut steps = Vec::new();
    let mb = BigUint::from(m);
    let lam = BigUint::from(lambda);
    for j in 0..k {
        let (aj, bj) = (a[j as usize].clone(), b[j as usize].clone());
        let twice_plus = BigUint::from(2 * lambda + 1);
        // a_j lambda^j >= 2, so the subtraction stays nonnegative.
        let palette = &twice_plus * (&aj * pow(lambda, j) - 1u32) + 2u32;
        let palette_bound = 4u32 * &aj * pow(lambda, j + 1);
        let shifted = &mb + 2u32 + 2u32 * &lam * &aj * pow(lambda, j);
        let control = &twice_plus * level_control(&bj, j, lambda, &shifted)
            + 4u32 * &lam
            + 1u32
            + 2u32 * (&mb + 4u32 * &aj * pow(lambda, j + 1) + 1u32) * (&lam + 1u32);
        let control_bound = 4u32 * &aj * &bj * (&mb + pow(lambda, j + 1)) * pow(lambda, j + 2);
        steps.push(BkKoStep {
            level: j,
            palette,
            palette_bound,
            control,
            control_bound,
        });
        a.push(4u32 * &aj);
        b.push(4u32 * &aj * &bj);
    }
    let colors = &a[k as usize] * pow(lambda, k);
    let control = level_control(&b[k as usize], k, lambda, &mb);
    let line_control = BigUint::from(2u32) * (m + 1) * (lambda + 1);
    Ok(KoBoundReport {
        k,
        lambda,
        m,
        a,
        b,
        colors,
        control,
        line_control,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn level_zero_is_the_line() {
        for lambda in 1..10u64 {
            for m in 0..6u64 {
                let r = bk_ko_bound(0, lambda, m).unwrap();
                assert_eq!(r.colors, BigUint::from(2u32));
                assert_eq!(r.control, BigUint::from(4 * (m + 1) * lambda));
                assert_eq!(r.line_control, BigUint::from(2 * (m + 1) * (lambda + 1)));
                assert!(r.base_dominates_line());
                assert!(r.steps.is_empty());
            }
        }
    }

    #[test]
    fn level_one_at_ten() {
        let r = bk_ko_bound(1, 10, 0).unwrap();
        assert_eq!(*r.a_k(), BigUint::from(8u32));
        assert_eq!(*r.b_k(), BigUint::from(32u32));
        assert_eq!(r.colors, BigUint::from(80u32));
        // b_1 (0 + 10) 10^2
        assert_eq!(r.control, BigUint::from(32_000u32));
    }

    #[test]
    fn step_values_at_lambda_one() {
        let r = bk_ko_bound(1, 1, 0).unwrap();
        let s = &r.steps[0];
        // 3 (2 - 1) + 2 and 4 * 2 * 1
        assert_eq!((s.palette.clone(), s.palette_bound.clone()), (5u32.into(), 8u32.into()));
        // 3 * 4 (6 + 1) * 1 + 5 + 2 (0 + 8 + 1) 2 = 125 against 4 * 2 * 4 = 32
        assert_eq!(s.control, BigUint::from(125u32));
        assert_eq!(s.control_bound, BigUint::from(32u32));
        assert!(s.palette_holds());
        assert!(!s.control_holds());
    }

    #[test]
    fn zero_lambda_is_rejected() {
        assert!(bk_ko_bound(1, 0, 0).is_err());
    }

    proptest! {
        #[test]
        fn bounds_grow_with_lambda_and_m(k in 0u32..4, lambda in 1u64..30, m in 0u64..30) {
            let r = bk_ko_bound(k, lambda, m).unwrap();
            let up_l = bk_ko_bound(k, lambda + 1, m).unwrap();
            let up_m = bk_ko_bound(k, lambda, m + 1).unwrap();
            prop_assert!(r.colors <= up_l.colors && r.control <= up_l.control);
            prop_assert!(r.colors == up_m.colors && r.control <= up_m.control);
            prop_assert!(r.palette_chain_holds());
        }

        #[test]
        fn recursion_closed_form(k in 0u32..6) {
            let r = bk_ko_bound(k, 1, 0).unwrap();
            // a_k = 2 * 4^k; b_k = 4 * prod_{j<k} 4 a_j = 4 * 8^k * 4^(k(k-1)/2)
            prop_assert_eq!(r.a_k().clone(), BigUint::from(2u32) * BigUint::from(4u32).pow(k));
            let expect = BigUint::from(4u32) * BigUint::from(8u32).pow(k) * BigUint::from(4u32).pow(k * k.saturating_sub(1) / 2);
            prop_assert_eq!(r.b_k().clone(), expect);
        }
    }
}
