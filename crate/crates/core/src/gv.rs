//! The multi-cover transform between GW series and BPS tables.
//!
//! Synthesis sums `BPS_{A,g} * (1/k) * s(k,g) * q^{kA}` over covers `k`;
//! inversion walks classes in mass order, subtracts the already-known
//! cover contributions of proper divisors, and decomposes the residual in
//! the genus basis. Lower-mass entries are always available when a class
//! is reached, so the peel is well founded.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::kernels::{decompose_in_genus_basis, KernelCache};
use crate::lattice::{divisors, enumerate_classes, LatticeClass, LatticeConfig};
use crate::qseries::QSeries;
use crate::tpoly::TPoly;
use crate::Rat;

/// Recovered (or prescribed) BPS invariants, with integrality and
/// observed-vanishing diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BPSTable {
    pub config: LatticeConfig,
    pub entries: BTreeMap<(LatticeClass, u32), Rat>,
    /// True when every entry is an integer. Non-integral values are data,
    /// not errors, unless strict mode promotes them.
    pub integrality_ok: bool,
    /// Per class: the smallest g0 with all recovered entries zero for
    /// g >= g0 inside the t-window. Vanishing beyond the window is never
    /// claimed.
    pub observed_genus_cutoffs: BTreeMap<LatticeClass, u32>,
}

impl BPSTable {
    pub fn new(config: LatticeConfig) -> Self {
        BPSTable {
            config,
            entries: BTreeMap::new(),
            integrality_ok: true,
            observed_genus_cutoffs: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, class: LatticeClass, genus: u32, value: Rat) {
        if value.is_zero() {
            return;
        }
        if !value.is_integer() {
            self.integrality_ok = false;
        }
        let cutoff = self.observed_genus_cutoffs.entry(class.clone()).or_insert(0);
        *cutoff = (*cutoff).max(genus + 1);
        self.entries.insert((class, genus), value);
    }

    pub fn entry(&self, class: &LatticeClass, genus: u32) -> Rat {
        self.entries
            .get(&(class.clone(), genus))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Genus window recoverable from the configured t-order.
    pub fn genus_window(&self) -> u32 {
        ((self.config.t_order() + 2) / 2).max(0) as u32
    }
}

/// Synthesizes the GW series of a BPS table, truncated at the config's
/// mass cap and t-order.
pub fn gw_from_bps(cache: &KernelCache, table: &BPSTable) -> Result<QSeries> {
    let config = &table.config;
    let t_order = config.t_order();
    let mut out = QSeries::zero(config.clone());
    for ((class, genus), value) in &table.entries {
        let mut k = 1u32;
        loop {
            let covered = class.scaled(k);
            if !config.in_cap(&covered) {
                break;
            }
            let kernel = cache.sin_kernel(k, *genus, t_order)?;
            out.accumulate(covered, kernel.scale(&(value / crate::int(k as i64))));
            k += 1;
        }
    }
    Ok(out)
}

/// Inverts a GW series to its BPS table. Never rejects non-integral
/// values; see [`bps_from_gw_strict`] for the strict variant.
pub fn bps_from_gw(cache: &KernelCache, series: &QSeries) -> Result<BPSTable> {
    bps_from_gw_impl(cache, series, false)
}

/// Strict variant: a non-integral recovered entry is an error.
pub fn bps_from_gw_strict(cache: &KernelCache, series: &QSeries) -> Result<BPSTable> {
    bps_from_gw_impl(cache, series, true)
}

fn bps_from_gw_impl(cache: &KernelCache, series: &QSeries, strict: bool) -> Result<BPSTable> {
    let config = series.config();
    let mut table = BPSTable::new(config.clone());
    if series.support_len() == 0 {
        return Ok(table);
    }
    for class in enumerate_classes(config)? {
        let mut residual = match series.get(&class) {
            Some(t) => t.truncate(config.t_order()).normalized(),
            None => TPoly::zero(config.t_order()),
        };
        for (k, base) in divisors(&class) {
            if k < 2 {
                continue;
            }
            for genus in 0..=table.genus_window() {
                let value = table.entry(&base, genus);
                if value.is_zero() {
                    continue;
                }
                let lead = 2 * genus as i64 - 2;
                if lead > residual.valid_to() {
                    continue; // cover contributes only above the window
                }
                let kernel = cache.sin_kernel(k, genus, residual.valid_to())?;
                residual = residual.sub(&kernel.scale(&(value / crate::int(k as i64))));
            }
        }
        if residual.is_zero() && series.get(&class).is_none() {
            continue;
        }
        let (coeffs, rest) = decompose_in_genus_basis(cache, &residual)?;
        debug_assert!(rest.is_zero(), "genus peel left a residual at {class}");
        if coeffs.is_empty() {
            // class was touched but everything cancelled: observed cutoff 0
            table.observed_genus_cutoffs.entry(class).or_insert(0);
            continue;
        }
        for (genus, value) in coeffs {
            if strict && !value.is_integer() {
                return Err(Error::StrictIntegrality {
                    class: class.to_string(),
                    genus,
                    value: value.to_string(),
                });
            }
            table.insert(class.clone(), genus, value);
        }
    }
    Ok(table)
}
