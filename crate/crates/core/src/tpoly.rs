//! Even-exponent Laurent polynomials in `t` with exact rational
//! coefficients and explicit validity tracking.
//!
//! Every value carries `valid_to`: coefficients at exponents `<= valid_to`
//! are exact, above it unknown. `min_exp` is a lower bound below which all
//! coefficients are known to vanish. Multiplying series with negative
//! exponents genuinely loses order; the budget rule
//! `valid_to = min(a.valid_to + b.min_exp, b.valid_to + a.min_exp)`
//! makes the loss explicit instead of silent.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TPoly {
    coeffs: BTreeMap<i64, Rat>,
    min_exp: i64,
    valid_to: i64,
}

fn assert_even(e: i64) {
    assert!(e % 2 == 0, "odd t-exponent {e}");
}

/// Validity sentinel for values known exactly at every order (e.g. the
/// constant 1). Large and even, small enough that budget sums cannot
/// overflow.
pub const EXACT: i64 = 1 << 40;

impl TPoly {
    /// The constant 1, exact at every order.
    pub fn one() -> Self {
        TPoly::constant(Rat::from_integer(1.into()), EXACT)
    }

    /// The zero value, trusted through `valid_to`.
    pub fn zero(valid_to: i64) -> Self {
        assert_even(valid_to);
        TPoly {
            coeffs: BTreeMap::new(),
            min_exp: valid_to,
            valid_to,
        }
    }

    pub fn constant(c: Rat, valid_to: i64) -> Self {
        Self::monomial(0, c, valid_to)
    }

    /// Single term `c * t^exp`; a zero coefficient yields the zero value.
    pub fn monomial(exp: i64, c: Rat, valid_to: i64) -> Self {
        assert_even(exp);
        assert_even(valid_to);
        if c.is_zero() || exp > valid_to {
            assert!(!c.is_zero() || exp <= valid_to, "monomial above validity");
            return Self::zero(valid_to);
        }
        let mut coeffs = BTreeMap::new();
        coeffs.insert(exp, c);
        TPoly {
            coeffs,
            min_exp: exp,
            valid_to,
        }
    }

    pub fn from_terms<I>(terms: I, min_exp: i64, valid_to: i64) -> Self
    where
        I: IntoIterator<Item = (i64, Rat)>,
    {
        assert_even(min_exp);
        assert_even(valid_to);
        assert!(min_exp <= valid_to);
        let mut coeffs = BTreeMap::new();
        for (e, c) in terms {
            assert_even(e);
            assert!(e >= min_exp && e <= valid_to, "exponent {e} outside window");
            if !c.is_zero() {
                let slot = coeffs.entry(e).or_insert_with(Rat::zero);
                *slot += c;
                if slot.is_zero() {
                    coeffs.remove(&e);
                }
            }
        }
        TPoly {
            coeffs,
            min_exp,
            valid_to,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn valid_to(&self) -> i64 {
        self.valid_to
    }

    /// Coefficient at exponent `e` (zero if absent). Only meaningful for
    /// `e <= valid_to`.
    pub fn coeff(&self, e: i64) -> Rat {
        self.coeffs.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    /// Lowest-order nonzero term, if any.
    pub fn leading(&self) -> Option<(i64, &Rat)> {
        self.coeffs.iter().next().map(|(&e, c)| (e, c))
    }

    /// Tightens `min_exp` to the lowest stored exponent. Sound because the
    /// whole range `[min_exp, valid_to]` is trusted, so absent entries are
    /// exact zeros; a tighter bound buys validity back in later products.
    pub fn normalized(mut self) -> Self {
        self.min_exp = match self.coeffs.keys().next() {
            Some(&e) => e,
            None => self.valid_to,
        };
        self
    }

    pub fn add(&self, other: &TPoly) -> TPoly {
        let valid_to = self.valid_to.min(other.valid_to);
        let min_exp = self.min_exp.min(other.min_exp).min(valid_to);
        let mut coeffs = self.coeffs.clone();
        for (&e, c) in &other.coeffs {
            let slot = coeffs.entry(e).or_insert_with(Rat::zero);
            *slot += c;
            if slot.is_zero() {
                coeffs.remove(&e);
            }
        }
        coeffs.retain(|&e, _| e <= valid_to);
        TPoly {
            coeffs,
            min_exp,
            valid_to,
        }
    }

    pub fn neg(&self) -> TPoly {
        TPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c)).collect(),
            min_exp: self.min_exp,
            valid_to: self.valid_to,
        }
    }

    pub fn sub(&self, other: &TPoly) -> TPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rat) -> TPoly {
        if r.is_zero() {
            return TPoly {
                coeffs: BTreeMap::new(),
                min_exp: self.min_exp,
                valid_to: self.valid_to,
            };
        }
        TPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, c * r)).collect(),
            min_exp: self.min_exp,
            valid_to: self.valid_to,
        }
    }

    /// Convolution under the Laurent validity budget.
    pub fn mul(&self, other: &TPoly) -> Result<TPoly> {
        let valid_to = (self.valid_to + other.min_exp).min(other.valid_to + self.min_exp);
        let min_exp = self.min_exp + other.min_exp;
        if self.is_zero() || other.is_zero() {
            // exact zero; keep the computed budget, clamped to stay well formed
            let v = valid_to.max(min_exp);
            return Ok(TPoly {
                coeffs: BTreeMap::new(),
                min_exp: v,
                valid_to: v,
            });
        }
        if valid_to < min_exp {
            return Err(Error::ValidityExhausted {
                needed: min_exp,
                available: valid_to,
            });
        }
        let mut coeffs: BTreeMap<i64, Rat> = BTreeMap::new();
        for (&ea, ca) in &self.coeffs {
            for (&eb, cb) in &other.coeffs {
                let e = ea + eb;
                if e > valid_to {
                    continue;
                }
                let slot = coeffs.entry(e).or_insert_with(Rat::zero);
                *slot += ca * cb;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(TPoly {
            coeffs,
            min_exp,
            valid_to,
        })
    }

    /// Multiplicative inverse of a unit: the lowest trusted coefficient
    /// must be nonzero. The result satisfies `mul(a, b) = 1` through the
    /// computed budget `a.valid_to - 2 * lead_exp`.
    pub fn invert_unit(&self) -> Result<TPoly> {
        let (m, lead) = match self.leading() {
            Some((e, c)) => (e, c.clone()),
            None => return Err(Error::NotAUnit),
        };
        let valid_to = self.valid_to - 2 * m;
        let min_exp = -m;
        if valid_to < min_exp {
            return Err(Error::ValidityExhausted {
                needed: min_exp,
                available: valid_to,
            });
        }
        // a = lead * t^m * (1 + u); invert 1 + u by the standard recursion.
        let jmax = self.valid_to - m; // highest offset of the inverse from -m
        let mut u: BTreeMap<i64, Rat> = BTreeMap::new();
        for (&e, c) in &self.coeffs {
            if e > m {
                u.insert(e - m, c / &lead);
            }
        }
        let mut inv: BTreeMap<i64, Rat> = BTreeMap::new();
        inv.insert(0, Rat::from_integer(1.into()));
        let mut j = 2;
        while j <= jmax {
            let mut acc = Rat::zero();
            for (&i, ui) in &u {
                if i > j {
                    break;
                }
                if let Some(cj) = inv.get(&(j - i)) {
                    acc += ui * cj;
                }
            }
            if !acc.is_zero() {
                inv.insert(j, -acc);
            }
            j += 2;
        }
        let coeffs: BTreeMap<i64, Rat> = inv
            .into_iter()
            .filter_map(|(j, c)| {
                let e = j - m;
                if e > valid_to {
                    return None;
                }
                let v = c / &lead;
                if v.is_zero() {
                    None
                } else {
                    Some((e, v))
                }
            })
            .collect();
        Ok(TPoly {
            coeffs,
            min_exp,
            valid_to,
        })
    }

    /// Lowers the trusted window to `order` and drops terms above it.
    pub fn truncate(&self, order: i64) -> TPoly {
        assert_even(order);
        let valid_to = self.valid_to.min(order);
        let min_exp = self.min_exp.min(valid_to);
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(&e, _)| e <= valid_to)
            .map(|(&e, c)| (e, c.clone()))
            .collect();
        TPoly {
            coeffs,
            min_exp,
            valid_to,
        }
    }

    /// Integer power by repeated multiplication; `n = 0` gives 1.
    pub fn pow(&self, n: u32) -> Result<TPoly> {
        let mut acc = TPoly::one();
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

impl std::fmt::Display for TPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (valid to t^{})", self.valid_to);
        }
        for (i, (e, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*t^{e}")?;
        }
        write!(f, " (valid to t^{})", self.valid_to)
    }
}
