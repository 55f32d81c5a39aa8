//! Single-class transform for Fano classes: the genus basis acquires the
//! exponent shift `2*c1`, so the kernel for genus g is
//! `(2 sin(t/2))^{2g-2+2c1} = s(1, g+c1)`. The transform is the
//! unitriangular genus-basis change with indices shifted by `c1`; with
//! `c1 = 0` it coincides with [`crate::kernels::decompose_in_genus_basis`].

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::kernels::{decompose_in_genus_basis, KernelCache};
use crate::tpoly::TPoly;
use crate::Rat;

/// GW coefficients of a single Fano class: `gw_coeffs[g]` is the
/// coefficient of `t^{2g-2}`. Insertion classes are treated as an opaque
/// fixed label; each series is per insertion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoSeries {
    pub c1: u32,
    pub gw_coeffs: BTreeMap<u32, Rat>,
    /// Maximum genus represented; coefficients above are unknown, not
    /// zero.
    pub window: u32,
}

impl FanoSeries {
    pub fn new(c1: u32, gw_coeffs: BTreeMap<u32, Rat>, window: u32) -> Result<Self> {
        if let Some(g) = gw_coeffs.keys().max() {
            if *g > window {
                return Err(Error::Config(format!(
                    "coefficient at genus {g} exceeds window {window}"
                )));
            }
        }
        Ok(FanoSeries {
            c1,
            gw_coeffs,
            window,
        })
    }
}

/// Peels the GW coefficient sequence against the shifted kernels. The
/// kernel for BPS genus g leads at `t^{2g-2+2c1}` with unit coefficient,
/// so a GW input with support below `t^{2c1-2}` is rejected: no kernel
/// can produce it.
pub fn fano_bps_from_gw(cache: &KernelCache, f: &FanoSeries) -> Result<BTreeMap<u32, Rat>> {
    let valid_to = 2 * f.window as i64 - 2;
    let poly = TPoly::from_terms(
        f.gw_coeffs
            .iter()
            .map(|(&g, c)| (2 * g as i64 - 2, c.clone())),
        -2,
        valid_to.max(-2),
    );
    let floor = 2 * f.c1 as i64 - 2;
    if let Some((e, _)) = poly.clone().normalized().leading() {
        if e < floor {
            return Err(Error::LeadingExponentTooLow { exp: e, min: floor });
        }
    }
    let (coeffs, residual) = decompose_in_genus_basis(cache, &poly)?;
    debug_assert!(residual.is_zero());
    let mut out = BTreeMap::new();
    for (shifted, value) in coeffs {
        debug_assert!(shifted >= f.c1, "peel below the exponent floor");
        out.insert(shifted - f.c1, value);
    }
    Ok(out)
}

/// Forward direction: `sum_g b_g * (2 sin(t/2))^{2g-2+2c1}` read off as a
/// GW coefficient sequence through `t_order`.
pub fn fano_gw_from_bps(
    cache: &KernelCache,
    c1: u32,
    bps: &BTreeMap<u32, Rat>,
    t_order: i64,
) -> Result<BTreeMap<u32, Rat>> {
    let mut acc = TPoly::zero(t_order);
    for (&g, value) in bps {
        let kernel = cache.sin_kernel(1, g + c1, t_order)?;
        acc = acc.add(&kernel.scale(value));
    }
    let mut out = BTreeMap::new();
    for (e, c) in acc.terms() {
        if c.is_zero() {
            continue;
        }
        let g = ((e + 2) / 2) as u32;
        out.insert(g, c.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    #[test]
    fn unit_leading_term_c1_one() {
        // with c1 = 1 the genus-0 kernel leads at t^0, so a bare t^0
        // coefficient n0 gives BPS_0 = n0
        let cache = KernelCache::new();
        let f = FanoSeries::new(1, BTreeMap::from([(1, int(7))]), 4).unwrap();
        let bps = fano_bps_from_gw(&cache, &f).unwrap();
        assert_eq!(bps.get(&0), Some(&int(7)));
    }

    #[test]
    fn zero_input_zero_output() {
        let cache = KernelCache::new();
        let f = FanoSeries::new(2, BTreeMap::new(), 4).unwrap();
        assert!(fano_bps_from_gw(&cache, &f).unwrap().is_empty());
        assert!(fano_gw_from_bps(&cache, 2, &BTreeMap::new(), 8)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn single_kernel_forward() {
        let cache = KernelCache::new();
        let gw = fano_gw_from_bps(&cache, 1, &BTreeMap::from([(0, int(1))]), 6).unwrap();
        // (2 sin(t/2))^2 = t^2 - t^4/12 + ... shifted: kernel s(1,1+0)=1? no:
        // g=0, c1=1 -> s(1,1) = 1, a bare constant at t^0, i.e. genus slot 1
        assert_eq!(gw, BTreeMap::from([(1, int(1))]));
    }

    #[test]
    fn roundtrip_exact() {
        let cache = KernelCache::new();
        for c1 in 0..=3u32 {
            let bps = BTreeMap::from([(0, int(3)), (2, int(-4)), (5, int(9))]);
            let t_order = 2 * (8 + c1 as i64) - 2;
            let gw = fano_gw_from_bps(&cache, c1, &bps, t_order).unwrap();
            let window = ((t_order + 2) / 2) as u32;
            let f = FanoSeries::new(c1, gw, window).unwrap();
            let back = fano_bps_from_gw(&cache, &f).unwrap();
            assert_eq!(back, bps, "c1={c1}");
        }
    }

    #[test]
    fn shift_law_c1_zero_matches_genus_basis() {
        let cache = KernelCache::new();
        let bps = BTreeMap::from([(0, int(2)), (3, int(-1))]);
        let gw = fano_gw_from_bps(&cache, 0, &bps, 10).unwrap();
        let poly = TPoly::from_terms(
            gw.iter().map(|(&g, c)| (2 * g as i64 - 2, c.clone())),
            -2,
            10,
        );
        let (coeffs, _) = decompose_in_genus_basis(&cache, &poly).unwrap();
        let f = FanoSeries::new(0, gw, 6).unwrap();
        let via_fano = fano_bps_from_gw(&cache, &f).unwrap();
        assert_eq!(coeffs, via_fano);
    }

    #[test]
    fn rejects_exponent_below_kernel_floor() {
        let cache = KernelCache::new();
        // t^-2 term with c1 = 1: below the t^0 kernel floor
        let f = FanoSeries::new(1, BTreeMap::from([(0, int(1))]), 4).unwrap();
        assert!(matches!(
            fano_bps_from_gw(&cache, &f),
            Err(Error::LeadingExponentTooLow { exp: -2, min: 0 })
        ));
    }
}
