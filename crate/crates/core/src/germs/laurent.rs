//! Univariate Laurent series with finite pole part, truncated above.
//!
//! The `order` field is the largest exponent whose coefficient is
//! guaranteed exact; all pole coefficients are exact. These arise from
//! restricting a multivariate germ to a ray and carry the one-variable
//! minimal-subtraction scheme.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::exact::{fmt_rat, Rat};
use crate::germs::{min_order, EXACT};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentSeries {
    coeffs: BTreeMap<i64, Rat>,
    order: i64,
}

fn bump_order(n: i64, shift: i64) -> i64 {
    if n == EXACT {
        EXACT
    } else {
        n + shift
    }
}

impl LaurentSeries {
    pub fn zero(order: i64) -> LaurentSeries {
        LaurentSeries {
            coeffs: BTreeMap::new(),
            order,
        }
    }

    pub fn constant(c: Rat) -> LaurentSeries {
        let mut s = LaurentSeries::zero(EXACT);
        s.add_coeff(0, c);
        s
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, t: i64) -> Rat {
        self.coeffs.get(&t).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&i64, &Rat)> {
        self.coeffs.iter()
    }

    /// Largest p with a nonzero coefficient at exponent -p, or 0.
    pub fn pole_order(&self) -> i64 {
        self.coeffs
            .keys()
            .next()
            .map(|&t| if t < 0 { -t } else { 0 })
            .unwrap_or(0)
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn lowest(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn add_coeff(&mut self, t: i64, c: Rat) {
        if c.is_zero() || t > self.order {
            return;
        }
        let entry = self.coeffs.entry(t).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&t);
        }
    }

    pub fn truncate(&self, order: i64) -> LaurentSeries {
        let order = min_order(self.order, order);
        let mut s = LaurentSeries::zero(order);
        for (&t, c) in &self.coeffs {
            s.add_coeff(t, c.clone());
        }
        s
    }

    pub fn add(&self, other: &LaurentSeries) -> LaurentSeries {
        let mut s = self.truncate(min_order(self.order, other.order));
        for (&t, c) in &other.coeffs {
            s.add_coeff(t, c.clone());
        }
        s
    }

    pub fn neg(&self) -> LaurentSeries {
        self.scale(&-Rat::from_integer(1.into()))
    }

    pub fn sub(&self, other: &LaurentSeries) -> LaurentSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> LaurentSeries {
        let mut s = LaurentSeries::zero(self.order);
        if c.is_zero() {
            return s;
        }
        for (&t, x) in &self.coeffs {
            s.add_coeff(t, x * c);
        }
        s
    }

    /// Product; the guarantee of each factor only covers the other down to
    /// its lowest exponent, so the result order is
    /// min(order_1 + lowest_2, order_2 + lowest_1).
    pub fn mul(&self, other: &LaurentSeries) -> LaurentSeries {
        let (Some(l1), Some(l2)) = (self.lowest(), other.lowest()) else {
            return LaurentSeries::zero(EXACT);
        };
        let order = min_order(bump_order(self.order, l2), bump_order(other.order, l1));
        let mut s = LaurentSeries::zero(order);
        for (&t1, c1) in &self.coeffs {
            for (&t2, c2) in &other.coeffs {
                if t1 + t2 > order {
                    continue;
                }
                s.add_coeff(t1 + t2, c1 * c2);
            }
        }
        s
    }

    /// Split into (nonnegative exponents, negative exponents).
    pub fn split(&self) -> (LaurentSeries, LaurentSeries) {
        let mut plus = LaurentSeries::zero(self.order);
        let mut minus = LaurentSeries::zero(self.order);
        for (&t, c) in &self.coeffs {
            if t >= 0 {
                plus.add_coeff(t, c.clone());
            } else {
                minus.add_coeff(t, c.clone());
            }
        }
        (plus, minus)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&t, c)| match t {
                0 => fmt_rat(c),
                1 => format!("{}*\u{3b5}", fmt_rat(c)),
                _ => format!("{}*\u{3b5}^{}", fmt_rat(c), t),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
