//! The basis functions `s(k,g) = (2 sin(kt/2))^{2g-2}` and the greedy
//! unitriangular decomposition of a Laurent value in the basis
//! `{s(1,g)}_{g>=0}`.
//!
//! `s(1,g) = t^{2g-2} + higher order`, so reading coefficients off from
//! exponent `2g-2` upward solves the basis change exactly.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::tpoly::TPoly;
use crate::Rat;

/// `(2 sin(kt/2))^2 = 2 - 2 cos(kt)`: coefficient of `t^{2j}` is
/// `(-1)^{j+1} * 2 * k^{2j} / (2j)!`.
pub fn sin_square(k: u32, order: i64) -> TPoly {
    assert!(k >= 1 && order >= 2);
    let kk = BigInt::from(k);
    let mut terms = Vec::new();
    let mut fact = BigInt::from(2); // (2j)! running value
    let mut kpow = kk.clone() * &kk; // k^{2j}
    let mut j = 1i64;
    while 2 * j <= order {
        let sign = if j % 2 == 1 { 1 } else { -1 };
        let c = Rat::new(BigInt::from(2 * sign) * &kpow, fact.clone());
        terms.push((2 * j, c));
        j += 1;
        fact *= BigInt::from((2 * j - 1) * (2 * j));
        kpow *= kk.clone() * &kk;
    }
    TPoly::from_terms(terms, 2, order)
}

/// Memoized kernel store; the inverse transforms request the same kernels
/// for every class, so values are cached by `(k, g, order)`.
#[derive(Default)]
pub struct KernelCache {
    memo: Mutex<HashMap<(u32, u32, i64), TPoly>>,
}

impl KernelCache {
    pub fn new() -> Self {
        KernelCache::default()
    }

    /// The Laurent expansion of `(2 sin(kt/2))^{2g-2}` with
    /// `min_exp = 2g-2` and `valid_to = order`. Leading coefficient is
    /// `k^{2g-2}` (so `k^{-2}` at `t^{-2}` for g = 0).
    pub fn sin_kernel(&self, k: u32, g: u32, order: i64) -> Result<TPoly> {
        assert!(k >= 1);
        assert!(order % 2 == 0);
        let lead = 2 * g as i64 - 2;
        if order < lead {
            return Err(Error::ValidityExhausted {
                needed: lead,
                available: order,
            });
        }
        if let Some(p) = self.memo.lock().unwrap().get(&(k, g, order)) {
            return Ok(p.clone());
        }
        let p = match g {
            1 => TPoly::constant(Rat::from_integer(1.into()), order),
            // one series inversion of the squared sine, instead of a
            // separate negative-power expansion
            0 => sin_square(k, order + 4).invert_unit()?,
            _ => sin_square(k, order - 2 * (g as i64 - 2)).pow(g - 1)?,
        };
        debug_assert_eq!(p.valid_to(), order);
        debug_assert_eq!(p.min_exp(), lead);
        self.memo.lock().unwrap().insert((k, g, order), p.clone());
        Ok(p)
    }
}

/// Greedily peels `c_g * s(1,g)` from exponent `2g-2` upward while
/// `2g-2 <= valid_to`. Returns the exact coefficients and the residual,
/// which is zero through `valid_to` by construction.
pub fn decompose_in_genus_basis(
    cache: &KernelCache,
    p: &TPoly,
) -> Result<(BTreeMap<u32, Rat>, TPoly)> {
    let mut residual = p.clone().normalized();
    if residual.valid_to() < -2 {
        return Err(Error::ValidityExhausted {
            needed: -2,
            available: residual.valid_to(),
        });
    }
    if let Some((e, _)) = residual.leading() {
        if e < -2 {
            return Err(Error::LeadingExponentTooLow { exp: e, min: -2 });
        }
    }
    let mut coeffs = BTreeMap::new();
    let mut g = 0u32;
    while 2 * g as i64 - 2 <= residual.valid_to() {
        let c = residual.coeff(2 * g as i64 - 2);
        if !c.is_zero() {
            let kernel = cache.sin_kernel(1, g, residual.valid_to())?;
            residual = residual.sub(&kernel.scale(&c));
            coeffs.insert(g, c);
        }
        g += 1;
    }
    Ok((coeffs, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat};

    /// Oracle: Taylor series of `2 sin(kt/2)` (odd exponents), squared by
    /// schoolbook convolution. Independent of `sin_square`.
    fn sin_square_oracle(k: u32, order: i64) -> Vec<(i64, Rat)> {
        // 2 sin(x/2) = sum_j (-1)^j x^{2j+1} / (4^j (2j+1)!)
        let mut odd: Vec<(i64, Rat)> = Vec::new();
        let mut fact = num_bigint::BigInt::from(1);
        for j in 0..=(order / 2 + 1) {
            let e = 2 * j + 1;
            if j > 0 {
                fact *= num_bigint::BigInt::from(2 * j) * num_bigint::BigInt::from(2 * j + 1);
            }
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let num = num_bigint::BigInt::from(sign) * num_bigint::BigInt::from(k).pow(e as u32);
            let den = num_bigint::BigInt::from(2).pow(e as u32 - 1) * &fact;
            odd.push((e, Rat::new(num, den)));
        }
        let mut sq: std::collections::BTreeMap<i64, Rat> = Default::default();
        for (ea, ca) in &odd {
            for (eb, cb) in &odd {
                if ea + eb <= order {
                    *sq.entry(ea + eb).or_insert_with(num_traits::Zero::zero) += ca * cb;
                }
            }
        }
        sq.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    #[test]
    fn sin_square_matches_oracle() {
        for k in 1..=4 {
            let p = sin_square(k, 12);
            for (e, c) in sin_square_oracle(k, 12) {
                assert_eq!(p.coeff(e), c, "k={k} e={e}");
            }
        }
    }

    #[test]
    fn genus_one_kernel_is_one() {
        let cache = KernelCache::new();
        let p = cache.sin_kernel(1, 1, 6).unwrap();
        assert_eq!(p.coeff(0), int(1));
        assert_eq!(p.terms().count(), 1);
    }

    #[test]
    fn genus_two_kernel() {
        let cache = KernelCache::new();
        let p = cache.sin_kernel(1, 2, 6).unwrap();
        assert_eq!(p.coeff(2), int(1));
        assert_eq!(p.coeff(4), rat(-1, 12));
        assert_eq!(p.coeff(6), rat(1, 360));
        assert_eq!(p.min_exp(), 2);
        assert_eq!(p.valid_to(), 6);
    }

    #[test]
    fn genus_zero_kernel() {
        let cache = KernelCache::new();
        let p = cache.sin_kernel(1, 0, 2).unwrap();
        assert_eq!(p.coeff(-2), int(1));
        assert_eq!(p.coeff(0), rat(1, 12));
        assert_eq!(p.coeff(2), rat(1, 240));
        // oracle: multiply back against the squared sine
        let check = sin_square(1, 6).mul(&p).unwrap();
        assert_eq!(check.coeff(0), int(1));
        assert!(check.terms().all(|(e, _)| e == 0));
    }

    #[test]
    fn genus_zero_kernel_k2() {
        let cache = KernelCache::new();
        let p = cache.sin_kernel(2, 0, 2).unwrap();
        assert_eq!(p.coeff(-2), rat(1, 4));
        assert_eq!(p.coeff(0), rat(1, 12));
        assert_eq!(p.coeff(2), rat(1, 60));
    }

    #[test]
    fn leading_term_law() {
        let cache = KernelCache::new();
        for k in 1..=5u32 {
            for g in 0..=4u32 {
                let p = cache.sin_kernel(k, g, 10).unwrap();
                let (e, c) = p.leading().unwrap();
                assert_eq!(e, 2 * g as i64 - 2);
                let expect = if g == 0 {
                    rat(1, (k * k) as i64)
                } else {
                    int((k as i64).pow(2 * g - 2))
                };
                assert_eq!(c, &expect, "k={k} g={g}");
            }
        }
    }

    #[test]
    fn scaling_law() {
        // s(k,g) is s(1,g) with t -> kt: coefficient at t^{2j} scales by k^{2j}
        let cache = KernelCache::new();
        for k in 2..=5u32 {
            for g in 0..=4u32 {
                let base = cache.sin_kernel(1, g, 10).unwrap();
                let scaled = cache.sin_kernel(k, g, 10).unwrap();
                for (e, c) in base.terms() {
                    let factor = if e >= 0 {
                        int((k as i64).pow(e as u32))
                    } else {
                        rat(1, (k as i64).pow((-e) as u32))
                    };
                    assert_eq!(scaled.coeff(e), c * factor, "k={k} g={g} e={e}");
                }
                assert_eq!(base.terms().count(), scaled.terms().count());
            }
        }
    }

    #[test]
    fn order_below_leading_exponent_errors() {
        let cache = KernelCache::new();
        assert!(matches!(
            cache.sin_kernel(1, 4, 2),
            Err(Error::ValidityExhausted { .. })
        ));
    }

    #[test]
    fn decompose_recovers_g0() {
        let cache = KernelCache::new();
        let p = cache.sin_kernel(1, 0, 8).unwrap();
        let (coeffs, residual) = decompose_in_genus_basis(&cache, &p).unwrap();
        assert_eq!(coeffs, BTreeMap::from([(0, int(1))]));
        assert!(residual.is_zero());
    }

    #[test]
    fn decompose_recognizes_truncated_g0() {
        // t^-2 + 1/12 + t^2/240 at order 2 is s(1,0) to that order
        let cache = KernelCache::new();
        let p = TPoly::from_terms(
            [(-2, int(1)), (0, rat(1, 12)), (2, rat(1, 240))],
            -2,
            2,
        );
        let (coeffs, residual) = decompose_in_genus_basis(&cache, &p).unwrap();
        assert_eq!(coeffs, BTreeMap::from([(0, int(1))]));
        assert!(residual.is_zero());
    }

    #[test]
    fn decompose_linear_combination() {
        let cache = KernelCache::new();
        let p = cache
            .sin_kernel(1, 1, 8)
            .unwrap()
            .scale(&int(3))
            .add(&cache.sin_kernel(1, 2, 8).unwrap().scale(&int(2)));
        let (coeffs, residual) = decompose_in_genus_basis(&cache, &p).unwrap();
        assert_eq!(coeffs, BTreeMap::from([(1, int(3)), (2, int(2))]));
        assert!(residual.is_zero());
    }

    #[test]
    fn decompose_rejects_deep_pole() {
        let cache = KernelCache::new();
        let p = TPoly::monomial(-4, int(1), 4);
        assert!(matches!(
            decompose_in_genus_basis(&cache, &p),
            Err(Error::LeadingExponentTooLow { exp: -4, .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            /// Round trip: decompose(sum c_g s(1,g)) returns exactly {c_g}.
            #[test]
            fn decompose_roundtrip(
                cs in prop::collection::btree_map(0u32..6, (-9i64..=9).prop_filter("nonzero", |v| *v != 0), 0..5)
            ) {
                let cache = KernelCache::new();
                let order = 12;
                let mut p = TPoly::zero(order);
                for (&g, &v) in &cs {
                    p = p.add(&cache.sin_kernel(1, g, order).unwrap().scale(&int(v)));
                }
                let (coeffs, residual) = decompose_in_genus_basis(&cache, &p).unwrap();
                let expect: BTreeMap<u32, Rat> = cs.iter().map(|(&g, &v)| (g, int(v))).collect();
                prop_assert_eq!(coeffs, expect);
                prop_assert!(residual.is_zero());
            }
        }
    }
}
