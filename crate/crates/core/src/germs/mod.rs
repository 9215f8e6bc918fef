//! Meromorphic germs with linear poles at zero, truncated to a working
//! order.
//!
//! A germ is stored as a map from canonical denominator multisets (products
//! of primitive integer linear forms) to polynomial numerator jets. The
//! working order N promises: every Taylor coefficient of total degree <= N
//! of the holomorphic projection is exact. To keep that promise through pole
//! clearing, the numerator of a term with total pole multiplicity m is
//! carried to degree N + m. Operations recompute the guarantee; nothing here
//! is floating point.

mod laurent;
mod pi_plus;

pub use laurent::LaurentSeries;
pub use pi_plus::PiPlusStrategy;

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{fmt_rat, InnerProduct, Int, Rat, RatVec};

/// Exponent multi-index, trailing zeros trimmed.
pub type Exponents = Vec<u32>;

/// Working order marker for exactly known (polynomial) data.
pub const EXACT: i64 = i64::MAX;

pub(crate) fn min_order(a: i64, b: i64) -> i64 {
    a.min(b)
}

/// Lower an accuracy guarantee by `m` degrees; exact data stays exact.
pub(crate) fn drop_order(a: i64, m: i64) -> i64 {
    if a == EXACT {
        EXACT
    } else {
        a - m
    }
}

fn trim(mut e: Exponents) -> Exponents {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

pub(crate) fn total_degree(e: &[u32]) -> i64 {
    e.iter().map(|&x| x as i64).sum()
}

// ---------------------------------------------------------------------------
// Linear forms
// ---------------------------------------------------------------------------

/// A canonical linear form: primitive integer coefficients, first nonzero
/// entry positive. Rational inputs factor as (scale, canonical form).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LinearForm {
    coeffs: Vec<Int>,
}

impl LinearForm {
    /// Canonicalise rational coefficients; returns the form and the scale s
    /// with input = s * form.
    pub fn canonicalise(coeffs: &[Rat]) -> Result<(LinearForm, Rat)> {
        let mut c = coeffs.to_vec();
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        if c.is_empty() {
            return Err(Error::invalid("the zero linear form"));
        }
        let mut den = Int::one();
        for x in &c {
            den = den.lcm(x.denom());
        }
        let ints: Vec<Int> = c
            .iter()
            .map(|x| (x * Rat::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = Int::zero();
        for x in &ints {
            g = g.gcd(x);
        }
        let lead_negative = ints
            .iter()
            .find(|x| !x.is_zero())
            .map_or(false, |x| x.is_negative());
        let sign = if lead_negative { -Int::one() } else { Int::one() };
        let unit = &g * &sign;
        let canon: Vec<Int> = ints.iter().map(|x| x / &unit).collect();
        // input = (unit/den) * canonical
        let scale = Rat::new(unit, den);
        Ok((LinearForm { coeffs: canon }, scale))
    }

    /// The canonical representative of the line spanned by integer
    /// coefficients; any scale is discarded.
    pub fn from_integers(coeffs: &[i64]) -> Result<LinearForm> {
        let c: Vec<Rat> = coeffs.iter().map(|&x| Rat::from_integer(Int::from(x))).collect();
        Ok(LinearForm::canonicalise(&c)?.0)
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        Rat::from_integer(self.coeffs.get(i).cloned().unwrap_or_else(Int::zero))
    }

    /// Number of variables the form touches (last nonzero index + 1).
    pub fn var_count(&self) -> usize {
        self.coeffs.len()
    }

    /// Index of the first nonzero coefficient (the pivot variable).
    pub fn pivot(&self) -> usize {
        self.coeffs
            .iter()
            .position(|x| !x.is_zero())
            .expect("forms are nonzero")
    }

    /// Value on a rational point.
    pub fn eval(&self, a: &RatVec) -> Rat {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Rat::zero(), |acc, (i, c)| acc + Rat::from_integer(c.clone()) * a.coord(i))
    }

    /// The form as a coefficient vector over Q.
    pub fn vector(&self) -> RatVec {
        RatVec::new(self.coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect())
    }

    /// The form as an exact degree-one jet.
    pub fn as_jet(&self) -> NumeratorJet {
        let mut j = NumeratorJet::zero(EXACT);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0u32; i + 1];
                e[i] = 1;
                j.add_monomial(e, Rat::from_integer(c.clone()));
            }
        }
        j
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_negative() {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{a}")?;
            }
            write!(f, "\u{3b5}{}", i + 1)?;
            first = false;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Numerator jets
// ---------------------------------------------------------------------------

/// A truncated multivariate polynomial with rational coefficients: exact in
/// every total degree up to `order`, no stored terms beyond it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NumeratorJet {
    terms: BTreeMap<Exponents, Rat>,
    order: i64,
}

impl NumeratorJet {
    pub fn zero(order: i64) -> NumeratorJet {
        NumeratorJet {
            terms: BTreeMap::new(),
            order,
        }
    }

    pub fn constant(c: Rat, order: i64) -> NumeratorJet {
        let mut j = NumeratorJet::zero(order);
        j.add_monomial(vec![], c);
        j
    }

    pub fn one() -> NumeratorJet {
        NumeratorJet::constant(Rat::one(), EXACT)
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> Rat {
        self.terms
            .get(&trim(e.to_vec()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn eval_zero(&self) -> Rat {
        self.coefficient(&[])
    }

    pub fn add_monomial(&mut self, e: Exponents, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = trim(e);
        if total_degree(&e) > self.order {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Restrict the accuracy guarantee and drop terms beyond it.
    pub fn truncate(&self, order: i64) -> NumeratorJet {
        let order = min_order(self.order, order);
        let mut j = NumeratorJet::zero(order);
        for (e, c) in &self.terms {
            j.add_monomial(e.clone(), c.clone());
        }
        j
    }

    pub fn add(&self, other: &NumeratorJet) -> NumeratorJet {
        let mut j = self.truncate(min_order(self.order, other.order));
        for (e, c) in &other.terms {
            j.add_monomial(e.clone(), c.clone());
        }
        j
    }

    pub fn neg(&self) -> NumeratorJet {
        self.scale(&-Rat::one())
    }

    pub fn sub(&self, other: &NumeratorJet) -> NumeratorJet {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> NumeratorJet {
        let mut j = NumeratorJet::zero(self.order);
        if c.is_zero() {
            return j;
        }
        for (e, x) in &self.terms {
            j.add_monomial(e.clone(), x * c);
        }
        j
    }

    /// Smallest total degree with a nonzero coefficient.
    pub fn lowest_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| total_degree(e)).min()
    }

    /// Product. Each factor's guarantee shifts up by the other's lowest
    /// degree, so multiplying by a homogeneous polynomial gains accuracy.
    pub fn mul(&self, other: &NumeratorJet) -> NumeratorJet {
        let (Some(o1), Some(o2)) = (self.lowest_degree(), other.lowest_degree()) else {
            return NumeratorJet::zero(EXACT);
        };
        let order = min_order(drop_order(self.order, -o2), drop_order(other.order, -o1));
        let mut j = NumeratorJet::zero(order);
        let right: Vec<(i64, &Exponents, &Rat)> = other
            .terms
            .iter()
            .map(|(e, c)| (total_degree(e), e, c))
            .collect();
        for (e1, c1) in &self.terms {
            let d1 = total_degree(e1);
            if d1 + o2 > order {
                continue;
            }
            for &(d2, e2, c2) in &right {
                if d1 + d2 > order {
                    continue;
                }
                let k = e1.len().max(e2.len());
                let mut e = vec![0u32; k];
                for (i, slot) in e.iter_mut().enumerate() {
                    *slot = e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0);
                }
                j.add_monomial(e, c1 * c2);
            }
        }
        j
    }

    pub fn pow(&self, n: u32) -> NumeratorJet {
        let mut acc = NumeratorJet::one().truncate(self.order);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact partial derivative with respect to variable `i` (1-based);
    /// accuracy drops by one degree.
    pub fn derive(&self, i: usize) -> NumeratorJet {
        assert!(i >= 1);
        let mut j = NumeratorJet::zero(drop_order(self.order, 1));
        for (e, c) in &self.terms {
            let a = e.get(i - 1).copied().unwrap_or(0);
            if a == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i - 1] -= 1;
            j.add_monomial(e2, c * Rat::from_integer(Int::from(a)));
        }
        j
    }

    /// Substitute x_i = sum_j rows[i][j] y_j. Degree-preserving, so the
    /// accuracy guarantee carries over.
    pub fn substitute_linear(&self, rows: &[Vec<Rat>]) -> NumeratorJet {
        let mut powers: BTreeMap<(usize, u32), NumeratorJet> = BTreeMap::new();
        let row_jet = |i: usize| -> NumeratorJet {
            let mut j = NumeratorJet::zero(EXACT);
            if let Some(row) = rows.get(i) {
                for (t, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        let mut e = vec![0u32; t + 1];
                        e[t] = 1;
                        j.add_monomial(e, c.clone());
                    }
                }
            }
            j
        };
        let mut out = NumeratorJet::zero(self.order);
        for (e, c) in &self.terms {
            let mut acc = NumeratorJet::constant(c.clone(), self.order);
            for (i, &a) in e.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let p = powers
                    .entry((i, a))
                    .or_insert_with(|| row_jet(i).pow(a).truncate(self.order))
                    .clone();
                acc = acc.mul(&p);
            }
            out = out.add(&acc);
        }
        out
    }
}

impl fmt::Display for NumeratorJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mut vars = String::new();
            for (i, &a) in e.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                if !vars.is_empty() {
                    vars.push('*');
                }
                vars.push_str(&format!("\u{3b5}{}", i + 1));
                if a > 1 {
                    vars.push_str(&format!("^{a}"));
                }
            }
            if vars.is_empty() {
                parts.push(fmt_rat(c));
            } else if c.is_one() {
                parts.push(vars);
            } else {
                parts.push(format!("{}*{}", fmt_rat(c), vars));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Exact division of a jet by a canonical linear form, if the remainder of
/// pivot-variable peeling vanishes. Accuracy drops by one degree.
pub(crate) fn divide_jet_by_form(jet: &NumeratorJet, form: &LinearForm) -> Option<NumeratorJet> {
    let p = form.pivot();
    let cp = form.coeff(p);
    let mut rem = jet.clone();
    let mut quot = NumeratorJet::zero(drop_order(jet.order, 1));
    loop {
        // take a monomial of maximal pivot exponent
        let mut target: Option<(Exponents, Rat)> = None;
        for (e, c) in rem.terms.iter() {
            let a = e.get(p).copied().unwrap_or(0);
            if a == 0 {
                continue;
            }
            let better = match &target {
                None => true,
                Some((te, _)) => {
                    (a, e.as_slice()) > (te.get(p).copied().unwrap_or(0), te.as_slice())
                }
            };
            if better {
                target = Some((e.clone(), c.clone()));
            }
        }
        let Some((e, c)) = target else { break };
        let factor = &c / &cp;
        let mut qe = e.clone();
        qe[p] -= 1;
        quot.add_monomial(trim(qe.clone()), factor.clone());
        // rem -= factor * x^qe * form
        for (i, fc) in form.coeffs().iter().enumerate() {
            if fc.is_zero() {
                continue;
            }
            let mut me = qe.clone();
            if me.len() <= i {
                me.resize(i + 1, 0);
            }
            me[i] += 1;
            rem.add_monomial(me, -&factor * Rat::from_integer(fc.clone()));
        }
    }
    if rem.is_zero() {
        Some(quot)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Meromorphic jets
// ---------------------------------------------------------------------------

/// Canonical denominator: multiset of linear forms with multiplicities.
pub type Denominators = BTreeMap<LinearForm, u32>;

pub(crate) fn denom_mult(d: &Denominators) -> i64 {
    d.values().map(|&m| m as i64).sum()
}

/// A sum of terms numerator/(product of linear forms), accurate to working
/// order `order`: each term's numerator is exact to degree order + its pole
/// multiplicity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MeromorphicJet {
    terms: BTreeMap<Denominators, NumeratorJet>,
    order: i64,
}

impl MeromorphicJet {
    pub fn zero() -> MeromorphicJet {
        MeromorphicJet {
            terms: BTreeMap::new(),
            order: EXACT,
        }
    }

    pub fn constant(c: Rat) -> MeromorphicJet {
        MeromorphicJet::from_polynomial(NumeratorJet::constant(c, EXACT))
    }

    pub fn one() -> MeromorphicJet {
        MeromorphicJet::constant(Rat::one())
    }

    pub fn from_polynomial(jet: NumeratorJet) -> MeromorphicJet {
        let mut m = MeromorphicJet {
            terms: BTreeMap::new(),
            order: jet.order(),
        };
        m.insert(Denominators::new(), jet);
        m
    }

    /// Single term with an explicit denominator; the working order is the
    /// numerator's accuracy minus the pole multiplicity.
    pub fn from_term(denoms: Denominators, jet: NumeratorJet) -> MeromorphicJet {
        let order = drop_order(jet.order(), denom_mult(&denoms));
        let mut m = MeromorphicJet {
            terms: BTreeMap::new(),
            order,
        };
        m.insert(denoms, jet);
        m.normalised()
    }

    /// The jet of e^L/(1 - e^L) = -1/L + h(L) at working order `n`, for a
    /// rational linear form L given by its coefficients.
    pub fn pole_factor(coeffs: &[Rat], n: i64) -> Result<MeromorphicJet> {
        let (form, scale) = LinearForm::canonicalise(coeffs)?;
        let mut m = MeromorphicJet {
            terms: BTreeMap::new(),
            order: n,
        };
        let mut denom = Denominators::new();
        denom.insert(form.clone(), 1);
        m.insert(
            denom,
            NumeratorJet::constant(-scale.recip(), EXACT),
        );
        // h(L) = sum h_t L^t, truncated at degree n
        let h = h_jet(n.max(0));
        let mut l_jet = NumeratorJet::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0u32; i + 1];
                e[i] = 1;
                l_jet.add_monomial(e, c.clone());
            }
        }
        let mut acc = NumeratorJet::zero(n);
        let mut power = NumeratorJet::one().truncate(n);
        for t in 0..=n.max(0) {
            let ht = h.coefficient(&[t as u32]);
            acc = acc.add(&power.scale(&ht));
            power = power.mul(&l_jet);
        }
        m.insert(Denominators::new(), acc);
        Ok(m.normalised())
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Denominators, &NumeratorJet)> {
        self.terms.iter()
    }

    pub fn term(&self, d: &Denominators) -> Option<&NumeratorJet> {
        self.terms.get(d)
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|d| d.is_empty())
    }

    /// Largest total pole multiplicity over the terms.
    pub fn max_pole_mult(&self) -> i64 {
        self.terms.keys().map(denom_mult).max().unwrap_or(0)
    }

    fn insert(&mut self, denoms: Denominators, jet: NumeratorJet) {
        let cap = if self.order == EXACT {
            EXACT
        } else {
            self.order + denom_mult(&denoms)
        };
        let jet = jet.truncate(cap);
        if jet.is_zero() {
            return;
        }
        match self.terms.get_mut(&denoms) {
            Some(existing) => {
                let merged = existing.add(&jet);
                if merged.is_zero() {
                    self.terms.remove(&denoms);
                } else {
                    *existing = merged;
                }
            }
            None => {
                self.terms.insert(denoms, jet);
            }
        }
    }

    /// Cancel denominator forms that exactly divide their numerators, and
    /// drop vanished terms.
    pub fn normalised(&self) -> MeromorphicJet {
        let mut out = MeromorphicJet {
            terms: BTreeMap::new(),
            order: self.order,
        };
        for (d, g) in &self.terms {
            let mut denoms = d.clone();
            let mut jet = g.clone();
            'retry: loop {
                let forms: Vec<LinearForm> = denoms.keys().cloned().collect();
                for f in forms {
                    if let Some(q) = divide_jet_by_form(&jet, &f) {
                        jet = q;
                        let m = denoms.get_mut(&f).unwrap();
                        *m -= 1;
                        if *m == 0 {
                            denoms.remove(&f);
                        }
                        continue 'retry;
                    }
                }
                break;
            }
            out.insert(denoms, jet);
        }
        out
    }

    pub fn add(&self, other: &MeromorphicJet) -> MeromorphicJet {
        let mut out = MeromorphicJet {
            terms: BTreeMap::new(),
            order: min_order(self.order, other.order),
        };
        for (d, g) in self.terms.iter().chain(other.terms.iter()) {
            out.insert(d.clone(), g.clone());
        }
        out.normalised()
    }

    pub fn neg(&self) -> MeromorphicJet {
        self.scale(&-Rat::one())
    }

    pub fn sub(&self, other: &MeromorphicJet) -> MeromorphicJet {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> MeromorphicJet {
        if c.is_zero() {
            return MeromorphicJet {
                terms: BTreeMap::new(),
                order: self.order,
            };
        }
        let mut out = MeromorphicJet {
            terms: BTreeMap::new(),
            order: self.order,
        };
        for (d, g) in &self.terms {
            out.insert(d.clone(), g.scale(c));
        }
        out
    }

    pub fn mul(&self, other: &MeromorphicJet) -> MeromorphicJet {
        let order = min_order(
            drop_order(self.order, other.max_pole_mult()),
            drop_order(other.order, self.max_pole_mult()),
        );
        let mut out = MeromorphicJet {
            terms: BTreeMap::new(),
            order,
        };
        for (d1, g1) in &self.terms {
            for (d2, g2) in &other.terms {
                let mut d = d1.clone();
                for (f, m) in d2 {
                    *d.entry(f.clone()).or_insert(0) += m;
                }
                out.insert(d, g1.mul(g2));
            }
        }
        out.normalised()
    }

    /// Exact partial derivative; the working order drops by one.
    pub fn derive(&self, i: usize) -> MeromorphicJet {
        assert!(i >= 1);
        let mut out = MeromorphicJet {
            terms: BTreeMap::new(),
            order: drop_order(self.order, 1),
        };
        for (d, g) in &self.terms {
            out.insert(d.clone(), g.derive(i));
            for (f, &m) in d.iter() {
                let ci = f.coeff(i - 1);
                if ci.is_zero() {
                    continue;
                }
                let mut d2 = d.clone();
                *d2.get_mut(f).unwrap() += 1;
                let c = -Rat::from_integer(Int::from(m)) * ci;
                out.insert(d2, g.scale(&c));
            }
        }
        out.normalised()
    }

    /// Restrict the working order (for aligning operands in tests).
    pub fn truncate_to_order(&self, n: i64) -> MeromorphicJet {
        let order = min_order(self.order, n);
        let mut out = MeromorphicJet {
            terms: BTreeMap::new(),
            order,
        };
        for (d, g) in &self.terms {
            out.insert(d.clone(), g.clone());
        }
        out
    }

    /// The holomorphic projection with the canonical strategy.
    pub fn pi_plus(&self, q: &InnerProduct) -> Result<MeromorphicJet> {
        pi_plus::pi_plus_with(self, q, &PiPlusStrategy::Canonical)
    }

    pub fn pi_plus_with(
        &self,
        q: &InnerProduct,
        strategy: &PiPlusStrategy,
    ) -> Result<MeromorphicJet> {
        pi_plus::pi_plus_with(self, q, strategy)
    }

    /// Holomorphic and polar components.
    pub fn pi_plus_parts(
        &self,
        q: &InnerProduct,
        strategy: &PiPlusStrategy,
    ) -> Result<(MeromorphicJet, MeromorphicJet)> {
        pi_plus::pi_plus_parts(self, q, strategy)
    }

    /// Constant Taylor coefficient of a pole-free jet.
    pub fn eval_zero(&self) -> Result<Rat> {
        self.taylor_coefficient(&[])
    }

    /// Coefficient of epsilon^r of a pole-free jet; the renormalised value
    /// at argument -r is r! times this.
    pub fn taylor_coefficient(&self, r: &[u32]) -> Result<Rat> {
        if !self.is_holomorphic() {
            return Err(Error::invalid(
                "Taylor coefficients of a germ with poles are not defined",
            ));
        }
        if total_degree(r) > self.order {
            return Err(Error::invalid(format!(
                "degree {} exceeds the working order {}",
                total_degree(r),
                self.order
            )));
        }
        Ok(self
            .terms
            .get(&Denominators::new())
            .map(|g| g.coefficient(r))
            .unwrap_or_else(Rat::zero))
    }

    /// Substitute epsilon_i = a_i * epsilon. Every denominator form must be
    /// nonzero on `a`.
    pub fn restrict_direction(&self, a: &RatVec) -> Result<LaurentSeries> {
        let mut out = LaurentSeries::zero(self.order);
        for (d, g) in &self.terms {
            let mut factor = Rat::one();
            let mut shift: i64 = 0;
            for (f, &m) in d.iter() {
                let v = f.eval(a);
                if v.is_zero() {
                    return Err(Error::direction(format!(
                        "direction {a} lies on the pole {f}"
                    )));
                }
                factor *= crate::exact::rat_pow(&v, m).recip();
                shift += m as i64;
            }
            let mut series = LaurentSeries::zero(drop_order(self.order, -shift));
            for (e, c) in g.terms() {
                let mut coeff = c.clone();
                for (i, &ai) in e.iter().enumerate() {
                    if ai > 0 {
                        coeff *= crate::exact::rat_pow(&a.coord(i), ai);
                    }
                }
                series.add_coeff(total_degree(e) - shift, coeff * factor.clone());
            }
            out = out.add(&series.truncate(self.order));
        }
        Ok(out)
    }

    /// Equality as germs up to total degree `up_to`: bring the difference
    /// over a common denominator and compare the cleared numerator to zero.
    pub fn equiv(&self, other: &MeromorphicJet, up_to: i64) -> bool {
        let diff = self.sub(other);
        if diff.is_zero() {
            return true;
        }
        let cap = min_order(up_to, diff.order);
        let mut common = Denominators::new();
        for d in diff.terms.keys() {
            for (f, &m) in d {
                let e = common.entry(f.clone()).or_insert(0);
                *e = (*e).max(m);
            }
        }
        let total = denom_mult(&common);
        let mut cleared = NumeratorJet::zero(if cap == EXACT { EXACT } else { cap + total });
        for (d, g) in &diff.terms {
            let mut t = g.clone();
            for (f, &m) in &common {
                let have = d.get(f).copied().unwrap_or(0);
                for _ in have..m {
                    t = t.mul(&f.as_jet());
                }
            }
            cleared = cleared.add(&t);
        }
        cleared.is_zero()
    }
}

impl fmt::Display for MeromorphicJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (d, g) in &self.terms {
            if d.is_empty() {
                parts.push(format!("({g})"));
            } else {
                let denom: Vec<String> = d
                    .iter()
                    .map(|(form, &m)| {
                        if m == 1 {
                            format!("({form})")
                        } else {
                            format!("({form})^{m}")
                        }
                    })
                    .collect();
                parts.push(format!("({g})/{}", denom.join("")));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// The h expansion
// ---------------------------------------------------------------------------

/// Taylor jet to degree `n` of h, where e^x/(1 - e^x) = -1/x + h(x).
/// Coefficients come from the Bernoulli recurrence, exactly.
pub fn h_jet(n: i64) -> NumeratorJet {
    let cs = h_coefficients(n.max(0) as usize);
    let mut j = NumeratorJet::zero(n);
    for (t, c) in cs.into_iter().enumerate() {
        j.add_monomial(vec![t as u32], c);
    }
    j
}

/// h_0..h_n with h_t = -B_{t+1}(1)/(t+1)!.
pub fn h_coefficients(n: usize) -> Vec<Rat> {
    // series inversion of (e^x - 1)/x gives t_m = B_m/m!
    let m = n + 2;
    let mut fact = vec![Rat::one(); m + 2];
    for i in 1..m + 2 {
        let f = &fact[i - 1] * Rat::from_integer(Int::from(i as i64));
        fact[i] = f;
    }
    let mut t = vec![Rat::zero(); m];
    t[0] = Rat::one();
    for k in 1..m {
        let mut acc = Rat::zero();
        for j in 1..=k {
            acc += fact[j + 1].clone().recip() * &t[k - j];
        }
        t[k] = -acc;
    }
    // B_k(1) = B_k except B_1(1) = +1/2
    (0..=n)
        .map(|i| {
            let k = i + 1;
            let bk_at_one = if k == 1 {
                Rat::new(Int::one(), Int::from(2))
            } else {
                &t[k] * &fact[k]
            };
            -bk_at_one / &fact[k]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    fn form(coeffs: &[i64]) -> LinearForm {
        LinearForm::from_integers(coeffs).unwrap()
    }

    fn denom1(f: LinearForm) -> Denominators {
        let mut d = Denominators::new();
        d.insert(f, 1);
        d
    }

    fn pf(coeffs: &[i64], n: i64) -> MeromorphicJet {
        let c: Vec<Rat> = coeffs.iter().map(|&x| rat_int(x)).collect();
        MeromorphicJet::pole_factor(&c, n).unwrap()
    }

    #[test]
    fn linear_form_canonicalisation() {
        let (f, s) = LinearForm::canonicalise(&[rat_int(2), rat_int(4)]).unwrap();
        assert_eq!(f, form(&[1, 2]));
        assert_eq!(s, rat_int(2));
        let (f, s) = LinearForm::canonicalise(&[rat(-1, 2), rat(1, 2)]).unwrap();
        assert_eq!(f, form(&[1, -1]));
        assert_eq!(s, rat(-1, 2));
        assert!(LinearForm::canonicalise(&[rat_int(0)]).is_err());
        assert_eq!(form(&[0, 3, -6]), form(&[0, 1, -2]));
        assert_eq!(form(&[1, 1]).to_string(), "\u{3b5}1+\u{3b5}2");
        assert_eq!(form(&[1, -2]).to_string(), "\u{3b5}1-2\u{3b5}2");
    }

    #[test]
    fn h_values() {
        let h = h_jet(6);
        assert_eq!(h.coefficient(&[0]), rat(-1, 2));
        assert_eq!(h.coefficient(&[1]), rat(-1, 12));
        assert_eq!(h.coefficient(&[2]), rat_int(0));
        assert_eq!(h.coefficient(&[3]), rat(1, 720));
        assert_eq!(h.coefficient(&[4]), rat_int(0));
        assert_eq!(h.coefficient(&[5]), rat(-1, 30240));
    }

    #[test]
    fn h_defining_identity() {
        // (x h(x) - 1)(1 - e^x) = x e^x up to the working degree
        let n = 10i64;
        let h = h_jet(n);
        let x = form(&[1]).as_jet().truncate(n + 1);
        let mut ex = NumeratorJet::zero(n + 1);
        let mut fact = Rat::one();
        for t in 0..=(n + 1) as u32 {
            if t > 0 {
                fact *= rat_int(t as i64);
            }
            ex.add_monomial(vec![t], fact.clone().recip());
        }
        let lhs = x
            .mul(&h)
            .sub(&NumeratorJet::one().truncate(n + 1))
            .mul(&NumeratorJet::one().truncate(n + 1).sub(&ex));
        let rhs = x.mul(&ex);
        assert_eq!(lhs, rhs.truncate(lhs.order()));
    }

    #[test]
    fn pole_factor_structure() {
        // -1/e1 + h(e1)
        let p = pf(&[1], 8);
        assert_eq!(p.terms().count(), 2);
        assert_eq!(
            p.term(&denom1(form(&[1]))).unwrap(),
            &NumeratorJet::constant(rat_int(-1), EXACT).truncate(9)
        );
        let hol = p.term(&Denominators::new()).unwrap();
        assert_eq!(hol.coefficient(&[0]), rat(-1, 2));
        assert_eq!(hol.coefficient(&[1]), rat(-1, 12));
        // scale absorption: -1/(2 e1) + h(2 e1)
        let p = MeromorphicJet::pole_factor(&[rat_int(2)], 8).unwrap();
        assert_eq!(
            p.term(&denom1(form(&[1]))).unwrap().eval_zero(),
            rat(-1, 2)
        );
        assert_eq!(
            p.term(&Denominators::new()).unwrap().coefficient(&[1]),
            rat(-1, 12) * rat_int(2)
        );
        // two-variable form
        let p = pf(&[1, 1], 8);
        assert!(p.term(&denom1(form(&[1, 1]))).is_some());
        assert_eq!(
            p.term(&Denominators::new()).unwrap().coefficient(&[0, 1]),
            rat(-1, 12)
        );
    }

    #[test]
    fn arithmetic_basics() {
        let p = pf(&[1], 8);
        assert_eq!(p.add(&MeromorphicJet::zero()), p);
        // (e1)/e1 normalises to 1
        let num = MeromorphicJet::from_term(denom1(form(&[1])), form(&[1]).as_jet());
        assert_eq!(num, MeromorphicJet::one());
        // linearity of scale
        let two_p = p.scale(&rat_int(2));
        assert_eq!(two_p, p.add(&p));
    }

    #[test]
    fn product_expansion_of_two_pole_factors() {
        // (-1/e1 + h(e1)) (-1/(e1+e2) + h(e1+e2)): four denominators
        let n = 6i64;
        let p1 = pf(&[1], n + 1);
        let p12 = pf(&[1, 1], n + 1);
        let prod = p1.mul(&p12);
        assert_eq!(prod.order(), n);
        assert_eq!(prod.terms().count(), 4);
        let e1 = form(&[1]);
        let e12 = form(&[1, 1]);
        let mut dd = Denominators::new();
        dd.insert(e1.clone(), 1);
        dd.insert(e12.clone(), 1);
        assert_eq!(prod.term(&dd).unwrap().eval_zero(), rat_int(1));
        // the e1 term carries -h(e1+e2)
        let t = prod.term(&denom1(e1.clone())).unwrap();
        assert_eq!(t.eval_zero(), rat(1, 2));
        assert_eq!(t.coefficient(&[1]), rat(1, 12));
        assert_eq!(t.coefficient(&[0, 1]), rat(1, 12));
        // the holomorphic term is h(e1) h(e1+e2)
        let t = prod.term(&Denominators::new()).unwrap();
        assert_eq!(t.eval_zero(), rat(1, 4));
    }

    #[test]
    fn derivatives() {
        // d/de1 of e1 is 1
        let e1 = MeromorphicJet::from_polynomial(form(&[1]).as_jet());
        assert_eq!(e1.derive(1), MeromorphicJet::one());
        // d/de1 of 1/e1 is -1/e1^2
        let inv = MeromorphicJet::from_term(
            denom1(form(&[1])),
            NumeratorJet::constant(Rat::one(), EXACT),
        );
        let d = inv.derive(1);
        let mut sq = Denominators::new();
        sq.insert(form(&[1]), 2);
        assert_eq!(d.terms().count(), 1);
        assert_eq!(d.term(&sq).unwrap().eval_zero(), rat_int(-1));
        // Leibniz on a sample
        let f = pf(&[1, 1], 8);
        let g = pf(&[1], 8);
        let lhs = f.mul(&g).derive(1);
        let rhs = f.derive(1).mul(&g).add(&f.mul(&g.derive(1)));
        assert!(lhs.equiv(&rhs, 5));
    }

    #[test]
    fn ring_laws_sampled() {
        let a = pf(&[1], 7);
        let b = pf(&[1, 1], 7);
        let c = pf(&[0, 1], 7);
        assert!(a.mul(&b).equiv(&b.mul(&a), 5));
        assert!(a.mul(&b.mul(&c)).equiv(&a.mul(&b).mul(&c), 4));
        assert!(a.mul(&b.add(&c)).equiv(&a.mul(&b).add(&a.mul(&c)), 5));
    }

    #[test]
    fn evaluation_and_coefficients() {
        let h = MeromorphicJet::from_polynomial(h_jet(6));
        assert_eq!(h.eval_zero().unwrap(), rat(-1, 2));
        assert_eq!(h.taylor_coefficient(&[1]).unwrap(), rat(-1, 12));
        assert_eq!(MeromorphicJet::one().eval_zero().unwrap(), rat_int(1));
        // polar input is rejected
        let inv = MeromorphicJet::from_term(
            denom1(form(&[1])),
            NumeratorJet::constant(Rat::one(), EXACT),
        );
        assert!(inv.eval_zero().is_err());
        // degree above the working order is rejected
        assert!(h.taylor_coefficient(&[7]).is_err());
    }

    #[test]
    fn restriction_examples() {
        // e1/e2 along (a1, a2) is the constant a1/a2
        let f = MeromorphicJet::from_term(denom1(form(&[0, 1])), form(&[1]).as_jet());
        let l = f.restrict_direction(&RatVec::from_i64(&[2, 3])).unwrap();
        assert_eq!(l.coeff(0), rat(2, 3));
        assert_eq!(l.pole_order(), 0);
        // -1/e1 + h(e1) along (a1): -1/(a1 e) + h(a1 e)
        let p = pf(&[1], 6);
        let l = p.restrict_direction(&RatVec::from_i64(&[2])).unwrap();
        assert_eq!(l.coeff(-1), rat(-1, 2));
        assert_eq!(l.coeff(0), rat(-1, 2));
        assert_eq!(l.coeff(1), rat(-1, 12) * rat_int(2));
        // direction on a pole is refused
        let err = p.restrict_direction(&RatVec::from_i64(&[0, 1]));
        assert!(matches!(err, Err(Error::InvalidDirection(_))));
        // ring homomorphism on a sample
        let a = RatVec::from_i64(&[-2, -1]);
        let f = pf(&[1], 7);
        let g = pf(&[1, 1], 7);
        let lhs = f.mul(&g).restrict_direction(&a).unwrap();
        let rhs = f
            .restrict_direction(&a)
            .unwrap()
            .mul(&g.restrict_direction(&a).unwrap());
        for t in -2..=4 {
            assert_eq!(lhs.coeff(t), rhs.coeff(t), "exponent {t}");
        }
    }

    #[test]
    fn germ_equivalence() {
        // 1/e1 + 1/e2 = (e1+e2)/(e1 e2)
        let a = MeromorphicJet::from_term(
            denom1(form(&[1])),
            NumeratorJet::constant(Rat::one(), EXACT),
        )
        .add(&MeromorphicJet::from_term(
            denom1(form(&[0, 1])),
            NumeratorJet::constant(Rat::one(), EXACT),
        ));
        let mut d = Denominators::new();
        d.insert(form(&[1]), 1);
        d.insert(form(&[0, 1]), 1);
        let b = MeromorphicJet::from_term(d, form(&[1, 1]).as_jet());
        assert!(a.equiv(&b, 10));
        assert!(!a.equiv(&MeromorphicJet::one(), 10));
    }

    #[test]
    fn division_by_forms() {
        // (e1^2 + e1 e2) / e1 = e1 + e2
        let num = form(&[1]).as_jet().mul(&form(&[1, 1]).as_jet());
        let q = divide_jet_by_form(&num, &form(&[1])).unwrap();
        assert_eq!(q, form(&[1, 1]).as_jet().truncate(q.order()));
        // e2 is not divisible by e1
        assert!(divide_jet_by_form(&form(&[0, 1]).as_jet(), &form(&[1])).is_none());
        // h(e1+e2) - h(e2) is divisible by e1
        let h = h_jet(8);
        let a = h.substitute_linear(&[vec![rat_int(1), rat_int(1)]]);
        let b = h.substitute_linear(&[vec![rat_int(0), rat_int(1)]]);
        let r = a.sub(&b);
        assert!(divide_jet_by_form(&r, &form(&[1])).is_some());
    }
}
