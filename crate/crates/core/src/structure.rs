//! The basis change between GW-type series and the local-curve basis
//! `{G_g(q^A, t)}`: synthesis from a coefficient table, and extraction of
//! the unique coefficients by bigraded triangular peeling.
//!
//! `G_g(q^A,t) = t^{2g-2} q^A + higher order`, higher meaning strictly
//! larger mass or the same class with a strictly larger t-exponent; every
//! pivot coefficient is 1, so the peel in (mass, genus ascending) order is
//! unitriangular and exact.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::kernels::KernelCache;
use crate::lattice::{enumerate_classes, LatticeClass, LatticeConfig};
use crate::localcurves::g_series;
use crate::qseries::QSeries;
use crate::Rat;

/// Structure coefficients `e_{A,g}`, with the same diagnostics as a BPS
/// table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ETable {
    pub config: LatticeConfig,
    pub entries: BTreeMap<(LatticeClass, u32), Rat>,
    pub integrality_ok: bool,
    pub observed_genus_cutoffs: BTreeMap<LatticeClass, u32>,
}

impl ETable {
    pub fn new(config: LatticeConfig) -> Self {
        ETable {
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
}

/// Cache of rank-1 `G_g` series keyed by (genus, degree budget, t-order);
/// the peel requests the same series for every class with equal cover
/// budget.
#[derive(Default)]
pub struct GSeriesCache {
    memo: Mutex<HashMap<(u32, u32, i64), QSeries>>,
}

impl GSeriesCache {
    pub fn new() -> Self {
        GSeriesCache::default()
    }

    pub fn get(
        &self,
        kernels: &KernelCache,
        g: u32,
        d_max: u32,
        t_order: i64,
    ) -> Result<QSeries> {
        if let Some(s) = self.memo.lock().unwrap().get(&(g, d_max, t_order)) {
            return Ok(s.clone());
        }
        let s = g_series(kernels, g, d_max, t_order)?;
        self.memo
            .lock()
            .unwrap()
            .insert((g, d_max, t_order), s.clone());
        Ok(s)
    }
}

/// Degree budget for covers of `A` under the mass cap.
fn cover_budget(config: &LatticeConfig, class: &LatticeClass) -> u32 {
    let d = (config.mass_cap() / config.mass_of(class)).floor().to_integer();
    d.try_into().unwrap_or(u32::MAX)
}

/// `sum e_{A,g} * G_g(q^A, t)`, truncated at the config's cap and
/// t-order.
pub fn series_from_e(
    kernels: &KernelCache,
    cache: &GSeriesCache,
    table: &ETable,
) -> Result<QSeries> {
    let config = &table.config;
    let mut out = QSeries::zero(config.clone());
    for ((class, genus), value) in &table.entries {
        let d_max = cover_budget(config, class);
        let local = cache.get(kernels, *genus, d_max, config.t_order())?;
        out = out.add(&local.pushforward(class, config).scale(value));
    }
    Ok(out)
}

/// Extracts the unique `e_{A,g}` from a GW-type series by peeling in
/// (mass, genus ascending) order. The residual after the full peel is
/// zero within the cap and t-window.
pub fn extract_e(
    kernels: &KernelCache,
    cache: &GSeriesCache,
    series: &QSeries,
) -> Result<ETable> {
    let config = series.config();
    let mut table = ETable::new(config.clone());
    if series.support_len() == 0 {
        return Ok(table);
    }
    let mut residual = series.clone();
    // one pass in mass order is enough: peeling at A only touches A (at
    // higher t-exponents) and strict multiples of A (higher mass)
    for class in enumerate_classes(config)? {
        let t = match residual.get(&class) {
            Some(t) => t.truncate(config.t_order()).normalized(),
            None => continue,
        };
        if t.is_zero() {
            continue;
        }
        if let Some((e, _)) = t.leading() {
            if e < -2 {
                return Err(Error::LeadingExponentTooLow { exp: e, min: -2 });
            }
        }
        let d_max = cover_budget(config, &class);
        let mut peeled = false;
        let mut genus = 0u32;
        while 2 * genus as i64 - 2 <= t.valid_to() {
            let current = residual
                .get(&class)
                .map(|p| p.coeff(2 * genus as i64 - 2))
                .unwrap_or_else(Rat::zero);
            if !current.is_zero() {
                let local = cache.get(kernels, genus, d_max, config.t_order())?;
                residual = residual.sub(&local.pushforward(&class, config).scale(&current));
                table.insert(class.clone(), genus, current);
                peeled = true;
            }
            genus += 1;
        }
        if peeled {
            debug_assert!(
                residual
                    .get(&class)
                    .map(|p| p.truncate(config.t_order()).is_zero())
                    .unwrap_or(true),
                "peel left residual at {class}"
            );
        } else {
            table.observed_genus_cutoffs.entry(class).or_insert(0);
        }
    }
    Ok(table)
}

/// Splits a rank-1 series of super-rigid shape into its sign and the
/// multiple-cover tail: `s = sign * G_g(q, t) + sum e_{d,h} G_h(q^d, t)`
/// with `d >= 2` and `h >= g`.
pub fn superrigid_decompose(
    kernels: &KernelCache,
    cache: &GSeriesCache,
    series: &QSeries,
    base_genus: u32,
) -> Result<(i32, ETable)> {
    assert_eq!(series.config().rank(), 1);
    let table = extract_e(kernels, cache, series)?;
    let one = LatticeClass::degree(1);
    let mut sign = 0i32;
    let mut tail = ETable::new(table.config.clone());
    for ((class, genus), value) in &table.entries {
        if *class == one {
            if *genus != base_genus {
                return Err(Error::NotSuperRigidShape(format!(
                    "degree-1 layer has a genus-{genus} term"
                )));
            }
            if value == &crate::int(1) {
                sign = 1;
            } else if value == &crate::int(-1) {
                sign = -1;
            } else {
                return Err(Error::NotSuperRigidShape(format!(
                    "degree-1 leading coefficient is {value}, expected +-1"
                )));
            }
        } else {
            if *genus < base_genus {
                return Err(Error::NotSuperRigidShape(format!(
                    "cover term at {class} has genus {genus} < base genus {base_genus}"
                )));
            }
            tail.insert(class.clone(), *genus, value.clone());
        }
    }
    if sign == 0 {
        return Err(Error::NotSuperRigidShape(
            "no degree-1 layer present".into(),
        ));
    }
    Ok((sign, tail))
}
