//! The effective class monoid: `N^r \ {0}` with a positive rational mass
//! functional, mass-capped enumeration, and componentwise divisibility.

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::Rat;

/// Hard bound on the number of classes a single enumeration may produce.
pub const MAX_CLASSES: usize = 2_000_000;

/// Parameters of the graded lattice: rank, per-basis-class masses, the mass
/// cap for truncation, and the t-truncation order shared by all series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeConfig {
    rank: usize,
    mass_vector: Vec<Rat>,
    mass_cap: Rat,
    t_order: i64,
}

impl LatticeConfig {
    pub fn new(mass_vector: Vec<Rat>, mass_cap: Rat, t_order: i64) -> Result<Self> {
        if mass_vector.is_empty() {
            return Err(Error::Config("rank must be at least 1".into()));
        }
        if mass_vector.iter().any(|m| !m.is_positive()) {
            return Err(Error::Config("every mass must be positive".into()));
        }
        if !mass_cap.is_positive() {
            return Err(Error::Config("mass cap must be positive".into()));
        }
        if t_order < -2 || t_order % 2 != 0 {
            return Err(Error::Config(format!(
                "t order must be even and >= -2, got {t_order}"
            )));
        }
        Ok(LatticeConfig {
            rank: mass_vector.len(),
            mass_vector,
            mass_cap,
            t_order,
        })
    }

    /// Rank-1 lattice with unit mass, used for local-curve series.
    pub fn rank1(mass_cap: u32, t_order: i64) -> Result<Self> {
        LatticeConfig::new(vec![crate::int(1)], crate::int(mass_cap as i64), t_order)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mass_vector(&self) -> &[Rat] {
        &self.mass_vector
    }

    pub fn mass_cap(&self) -> &Rat {
        &self.mass_cap
    }

    pub fn t_order(&self) -> i64 {
        self.t_order
    }

    /// Replaces the t-order, keeping the lattice data. Used when a series
    /// needs extra internal t-budget before final truncation.
    pub fn with_t_order(&self, t_order: i64) -> Result<Self> {
        LatticeConfig::new(self.mass_vector.clone(), self.mass_cap.clone(), t_order)
    }

    /// The mass `M(A) = sum coords_i * mass_i`, exact.
    pub fn mass_of(&self, class: &LatticeClass) -> Rat {
        debug_assert_eq!(class.rank(), self.rank);
        class
            .coords()
            .iter()
            .zip(&self.mass_vector)
            .fold(Rat::zero(), |acc, (&c, m)| acc + m * crate::int(c as i64))
    }

    pub fn in_cap(&self, class: &LatticeClass) -> bool {
        self.mass_of(class) <= self.mass_cap
    }

    /// The total order (mass, then lexicographic coordinates) refining the
    /// mass grading; processing order of all triangular inversions.
    pub fn class_cmp(&self, a: &LatticeClass, b: &LatticeClass) -> Ordering {
        self.mass_of(a)
            .cmp(&self.mass_of(b))
            .then_with(|| a.coords().cmp(b.coords()))
    }
}

/// A nonzero effective class: coordinates in `N^r`, not all zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeClass {
    coords: Vec<u32>,
}

impl LatticeClass {
    pub fn new(coords: Vec<u32>) -> Result<Self> {
        if coords.is_empty() || coords.iter().all(|&c| c == 0) {
            return Err(Error::Config("class coordinates must be nonzero".into()));
        }
        Ok(LatticeClass { coords })
    }

    /// Rank-1 class of degree `d >= 1`.
    pub fn degree(d: u32) -> Self {
        assert!(d >= 1);
        LatticeClass { coords: vec![d] }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn scaled(&self, k: u32) -> Self {
        assert!(k >= 1);
        LatticeClass {
            coords: self.coords.iter().map(|&c| c * k).collect(),
        }
    }

    /// Gcd of the coordinates; the divisibility degree of the class.
    pub fn content(&self) -> u32 {
        self.coords.iter().fold(0u32, |acc, &c| acc.gcd(&c))
    }
}

impl std::fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// All classes with `0 < M(A) <= cap`, sorted by (mass, lex).
pub fn enumerate_classes(config: &LatticeConfig) -> Result<Vec<LatticeClass>> {
    let mut out = Vec::new();
    let mut coords = vec![0u32; config.rank()];
    enumerate_rec(config, 0, config.mass_cap().clone(), &mut coords, &mut out)?;
    out.sort_by(|a, b| config.class_cmp(a, b));
    Ok(out)
}

fn enumerate_rec(
    config: &LatticeConfig,
    idx: usize,
    remaining: Rat,
    coords: &mut Vec<u32>,
    out: &mut Vec<LatticeClass>,
) -> Result<()> {
    if idx == config.rank() {
        if coords.iter().any(|&c| c != 0) {
            if out.len() >= MAX_CLASSES {
                return Err(Error::ClassEnumerationTooLarge { bound: MAX_CLASSES });
            }
            out.push(LatticeClass {
                coords: coords.clone(),
            });
        }
        return Ok(());
    }
    let mass = &config.mass_vector()[idx];
    let max_c = (remaining.clone() / mass).floor().to_integer();
    let max_c: u32 = max_c.try_into().unwrap_or(u32::MAX);
    for c in 0..=max_c {
        coords[idx] = c;
        let rem = remaining.clone() - mass * crate::int(c as i64);
        enumerate_rec(config, idx + 1, rem, coords, out)?;
    }
    coords[idx] = 0;
    Ok(())
}

/// All pairs `(k, B)` with `k >= 1` and `k * B = A` componentwise, in
/// increasing `k`. Always includes `(1, A)`; `k` ranges over divisors of
/// the content gcd.
pub fn divisors(class: &LatticeClass) -> Vec<(u32, LatticeClass)> {
    let g = class.content();
    let mut ks: Vec<u32> = (1..=g).filter(|k| g % k == 0).collect();
    ks.sort_unstable();
    ks.into_iter()
        .map(|k| {
            (
                k,
                LatticeClass {
                    coords: class.coords.iter().map(|&c| c / k).collect(),
                },
            )
        })
        .collect()
}
