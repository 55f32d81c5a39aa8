//! Finitely supported maps from the mass-capped class monoid to Laurent
//! values: the ambient ring for GW-type series. Multiplication discards
//! classes over the mass cap eagerly, which is exactly the mass
//! truncation of the series.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{LatticeClass, LatticeConfig};
use crate::tpoly::TPoly;
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    config: LatticeConfig,
    /// Coefficient of `q^0`; kept apart so that `1 + ...` shapes are
    /// representable without a zero class in the monoid.
    const_term: TPoly,
    terms: BTreeMap<LatticeClass, TPoly>,
}

impl QSeries {
    pub fn zero(config: LatticeConfig) -> Self {
        let t = config.t_order();
        QSeries {
            config,
            const_term: TPoly::zero(t),
            terms: BTreeMap::new(),
        }
    }

    pub fn config(&self) -> &LatticeConfig {
        &self.config
    }

    pub fn const_term(&self) -> &TPoly {
        &self.const_term
    }

    pub fn set_const_term(&mut self, t: TPoly) {
        self.const_term = t;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticeClass, &TPoly)> {
        self.terms.iter()
    }

    pub fn get(&self, class: &LatticeClass) -> Option<&TPoly> {
        self.terms.get(class)
    }

    pub fn is_zero(&self) -> bool {
        self.const_term.is_zero() && self.terms.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    /// Support classes sorted by the lattice total order (mass, lex).
    pub fn classes_in_mass_order(&self) -> Vec<LatticeClass> {
        let mut classes: Vec<LatticeClass> = self.terms.keys().cloned().collect();
        classes.sort_by(|a, b| self.config.class_cmp(a, b));
        classes
    }

    /// Adds `t * q^A` to the series; over-cap classes are dropped.
    pub fn accumulate(&mut self, class: LatticeClass, value: TPoly) {
        if !self.config.in_cap(&class) {
            return;
        }
        match self.terms.remove(&class) {
            Some(old) => {
                let sum = old.add(&value);
                if !sum.is_zero() {
                    self.terms.insert(class, sum);
                } else if sum.valid_to() < old.valid_to() {
                    // keep the reduced budget visible
                    self.terms.insert(class, sum);
                }
            }
            None => {
                if !value.is_zero() {
                    self.terms.insert(class, value);
                }
            }
        }
    }

    fn assert_same_config(&self, other: &QSeries) {
        assert_eq!(
            self.config, other.config,
            "operands built over different lattice configs"
        );
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        self.assert_same_config(other);
        let mut out = self.clone();
        out.const_term = out.const_term.add(&other.const_term);
        for (class, t) in &other.terms {
            out.accumulate(class.clone(), t.clone());
        }
        out
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.scale(&-Rat::from_integer(1.into())))
    }

    pub fn scale(&self, r: &Rat) -> QSeries {
        if r.is_zero() {
            return QSeries::zero(self.config.clone());
        }
        QSeries {
            config: self.config.clone(),
            const_term: self.const_term.scale(r),
            terms: self
                .terms
                .iter()
                .map(|(c, t)| (c.clone(), t.scale(r)))
                .collect(),
        }
    }

    /// Cauchy product with eager mass truncation.
    pub fn mul(&self, other: &QSeries) -> Result<QSeries> {
        self.assert_same_config(other);
        let mut out = QSeries::zero(self.config.clone());
        out.const_term = self.const_term.mul(&other.const_term)?;
        if !other.const_term.is_zero() {
            for (class, t) in &self.terms {
                out.accumulate(class.clone(), t.mul(&other.const_term)?);
            }
        }
        if !self.const_term.is_zero() {
            for (class, t) in &other.terms {
                out.accumulate(class.clone(), t.mul(&self.const_term)?);
            }
        }
        for (ca, ta) in &self.terms {
            for (cb, tb) in &other.terms {
                let coords: Vec<u32> = ca
                    .coords()
                    .iter()
                    .zip(cb.coords())
                    .map(|(&x, &y)| x + y)
                    .collect();
                let class = LatticeClass::new(coords).expect("sum of nonzero classes");
                if !self.config.in_cap(&class) {
                    continue;
                }
                out.accumulate(class, ta.mul(tb)?);
            }
        }
        Ok(out)
    }

    /// `log(1 + x)` as the alternating sum `sum (-1)^{n+1} x^n / n`; finite
    /// because `x^n` dies once `n * (min mass in x)` exceeds the cap.
    pub fn log1p(&self) -> Result<QSeries> {
        if !self.const_term.is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n_max = match self.power_bound() {
            Some(n) => n,
            None => return Ok(QSeries::zero(self.config.clone())),
        };
        let mut acc = self.clone();
        let mut power = self.clone();
        for n in 2..=n_max {
            power = power.mul(self)?;
            if power.is_zero() {
                break;
            }
            let sign = if n % 2 == 0 { -1 } else { 1 };
            acc = acc.add(&power.scale(&crate::rat(sign, n as i64)));
        }
        Ok(acc)
    }

    /// `exp(x) = 1 + sum x^n / n!` for series with zero constant term.
    pub fn exp(&self) -> Result<QSeries> {
        if !self.const_term.is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut acc = QSeries::zero(self.config.clone());
        acc.const_term = TPoly::constant(Rat::from_integer(1.into()), self.config.t_order());
        let n_max = match self.power_bound() {
            Some(n) => n,
            None => return Ok(acc),
        };
        acc = acc.add(self);
        let mut power = self.clone();
        let mut factorial = Rat::from_integer(1.into());
        for n in 2..=n_max {
            power = power.mul(self)?;
            if power.is_zero() {
                break;
            }
            factorial *= crate::int(n as i64);
            acc = acc.add(&power.scale(&factorial.recip()));
        }
        Ok(acc)
    }

    /// Largest n with `n * (min mass in support) <= cap`.
    fn power_bound(&self) -> Option<u64> {
        let min_mass = self
            .terms
            .keys()
            .map(|c| self.config.mass_of(c))
            .min()?;
        debug_assert!(min_mass.is_positive());
        let bound = (self.config.mass_cap() / min_mass).floor().to_integer();
        Some(bound.try_into().unwrap_or(u64::MAX))
    }

    /// Substitution `q -> q^A` for a rank-1 series: the coefficient of
    /// `q^d` becomes the coefficient of `q^{dA}`; classes beyond the
    /// target cap are dropped.
    pub fn pushforward(&self, class: &LatticeClass, target: &LatticeConfig) -> QSeries {
        assert_eq!(self.config.rank(), 1, "pushforward source must be rank 1");
        assert_eq!(class.rank(), target.rank());
        let mut out = QSeries::zero(target.clone());
        out.const_term = self.const_term.truncate(target.t_order());
        for (c, t) in &self.terms {
            let d = c.coords()[0];
            let image = class.scaled(d);
            out.accumulate(image, t.truncate(target.t_order()));
        }
        out
    }
}
