//! Local-curve generating functions `G_h(q,t)` built from partitions and
//! hook lengths, and their BPS tables.
//!
//! `G_h = log(1 + sum_d sum_{mu |- d} prod_box s(hook(box), h) q^d)`.
//! For h = 0 every box contributes a `t^{-2}` pole, so a partition of d
//! spends `2d` orders of t-validity; the series is therefore built with
//! internal budget `t_order + 2 * d_max` and truncated at the end.

use crate::error::Result;
use crate::gv::{bps_from_gw, BPSTable};
use crate::kernels::KernelCache;
use crate::lattice::{LatticeClass, LatticeConfig};
use crate::qseries::QSeries;
use crate::tpoly::TPoly;
use crate::Rat;

/// A partition: weakly decreasing tuple of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(crate::Error::Config("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(crate::Error::Config(
                "partition parts must be weakly decreasing".into(),
            ));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=cols)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count() as u32)
            .collect();
        Partition { parts }
    }

    /// One hook length per box of the Young diagram: arm + leg + 1.
    pub fn hook_lengths(&self) -> Vec<u32> {
        let conj = self.conjugate();
        let mut hooks = Vec::with_capacity(self.size() as usize);
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 1..=row {
                let arm = row - j;
                let leg = conj.parts[(j - 1) as usize] - (i as u32 + 1);
                hooks.push(arm + leg + 1);
            }
        }
        hooks
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `d >= 1` in reverse-lexicographic order: `(d)` first,
/// `(1,...,1)` last.
pub fn partitions(d: u32) -> Vec<Partition> {
    assert!(d >= 1);
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    partitions_rec(d, d, &mut prefix, &mut out);
    out
}

fn partitions_rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition {
            parts: prefix.clone(),
        });
        return;
    }
    let mut p = max_part.min(remaining);
    while p >= 1 {
        prefix.push(p);
        partitions_rec(remaining - p, p, prefix, out);
        prefix.pop();
        p -= 1;
    }
}

/// The local BPS table `BPS_{d,g}(h)` for a genus-h super-rigid curve.
#[derive(Clone, Debug)]
pub struct LocalBps {
    pub h: u32,
    pub table: BPSTable,
}

impl LocalBps {
    pub fn entry(&self, d: u32, g: u32) -> Rat {
        self.table.entry(&LatticeClass::degree(d), g)
    }
}

/// Internal t-budget required to compute `G_h` to window `t_order` at
/// degree `d_max`.
pub fn required_budget(h: u32, d_max: u32, t_order: i64) -> i64 {
    if h == 0 {
        t_order + 2 * d_max as i64
    } else {
        t_order
    }
}

/// The exact truncated `G_h(q,t)` on the rank-1 unit-mass lattice with
/// mass cap `d_max` and t-window `t_order`.
pub fn g_series(cache: &KernelCache, h: u32, d_max: u32, t_order: i64) -> Result<QSeries> {
    assert!(d_max >= 1);
    let budget = required_budget(h, d_max, t_order);
    let work_config = LatticeConfig::rank1(d_max, budget)?;
    let mut inner = QSeries::zero(work_config.clone());
    for d in 1..=d_max {
        let mut degree_sum = TPoly::zero(budget);
        for mu in partitions(d) {
            let mut product = TPoly::one();
            for hook in mu.hook_lengths() {
                product = product.mul(&cache.sin_kernel(hook, h, budget)?)?;
            }
            degree_sum = degree_sum.add(&product);
        }
        inner.accumulate(LatticeClass::degree(d), degree_sum);
    }
    let logged = inner.log1p()?;
    // truncate down to the requested window; leading exponents are >= -2
    // after the cancellations in the log
    let final_config = LatticeConfig::rank1(d_max, t_order)?;
    let mut out = QSeries::zero(final_config);
    for (class, t) in logged.terms() {
        out.accumulate(class.clone(), t.truncate(t_order).normalized());
    }
    Ok(out)
}

/// `BPS_{d,g}(h)`: the GV inversion of `G_h` on the rank-1 lattice.
pub fn local_bps(cache: &KernelCache, h: u32, d_max: u32, t_order: i64) -> Result<LocalBps> {
    let series = g_series(cache, h, d_max, t_order)?;
    Ok(LocalBps {
        h,
        table: bps_from_gw(cache, &series)?,
    })
}

/// Euler's pentagonal-number recurrence for the partition counts p(n);
/// used as the independent oracle for `partitions`.
pub fn partition_count_oracle(n_max: u32) -> Vec<u64> {
    let n_max = n_max as usize;
    let mut p = vec![0i64; n_max + 1];
    p[0] = 1;
    for n in 1..=n_max {
        let mut acc = 0i64;
        let mut k = 1i64;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            let g2 = k * (3 * k + 1) / 2;
            if g1 as usize > n && g2 as usize > n {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            if g1 as usize <= n {
                acc += sign * p[n - g1 as usize];
            }
            if g2 as usize <= n {
                acc += sign * p[n - g2 as usize];
            }
            k += 1;
        }
        p[n] = acc;
    }
    p.into_iter().map(|v| v as u64).collect()
}
