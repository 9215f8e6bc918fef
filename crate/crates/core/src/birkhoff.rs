//! Algebraic Birkhoff factorisation for coalgebra characters.
//!
//! Given a map phi from a cograded connected coalgebra into an algebra
//! equipped with a splitting projection P (onto a component containing 1),
//! the recursions
//!
//!   phi1(x) = -P(phi(x) + sum' phi1(x') phi(x''))
//!   phi2(x) = (id - P)(phi(x) + sum' phi1(x') phi(x''))
//!
//! over the reduced coproduct produce the unique factorisation
//! phi = phi1^{*(-1)} * phi2 with phi_i(ker counit) in the respective
//! components. The engine only needs the full coproduct; unit tensor
//! factors are stripped here, so unit handling lives in one place.
//!
//! Termination is by grading: both reduced-coproduct factors have strictly
//! smaller degree, and every computed value is memoized per element.

use std::cell::RefCell;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::Rat;
use num_traits::One;

/// Coalgebra data the factorisation consumes: a distinguished unit element,
/// a grading, and the full coproduct as a list of (left, right, coefficient)
/// tensor terms with rational coefficients.
pub trait CoalgebraOracle {
    type Element: Clone + Ord;

    fn unit(&self) -> Self::Element;
    fn degree(&self, x: &Self::Element) -> u64;
    fn coproduct(&self, x: &Self::Element) -> Result<Vec<(Self::Element, Self::Element, Rat)>>;
}

/// Target algebra with a splitting: `split` returns (P(a), a - P(a)) where
/// P projects onto the component containing 1.
pub trait TargetAlgebra {
    type Value: Clone;

    fn one(&self) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn scale(&self, a: &Self::Value, c: &Rat) -> Self::Value;
    fn split(&self, a: &Self::Value) -> Result<(Self::Value, Self::Value)>;

    fn neg(&self, a: &Self::Value) -> Self::Value {
        self.scale(a, &-Rat::one())
    }
}

/// Full coproduct with both unit tensor factors stripped; by the counit
/// laws this removes exactly x (x) 1 and 1 (x) x.
pub fn reduced_coproduct<O: CoalgebraOracle>(
    oracle: &O,
    x: &O::Element,
) -> Result<Vec<(O::Element, O::Element, Rat)>> {
    let unit = oracle.unit();
    Ok(oracle
        .coproduct(x)?
        .into_iter()
        .filter(|(l, r, _)| *l != unit && *r != unit)
        .collect())
}

/// Convolution product (f * g)(x) = sum f(x') g(x'') over the full
/// coproduct.
pub fn convolution<O, A, F, G>(
    oracle: &O,
    algebra: &A,
    f: F,
    g: G,
    x: &O::Element,
) -> Result<A::Value>
where
    O: CoalgebraOracle,
    A: TargetAlgebra,
    F: Fn(&O::Element) -> Result<A::Value>,
    G: Fn(&O::Element) -> Result<A::Value>,
{
    let mut acc: Option<A::Value> = None;
    for (l, r, c) in oracle.coproduct(x)? {
        let t = algebra.scale(&algebra.mul(&f(&l)?, &g(&r)?), &c);
        acc = Some(match acc {
            None => t,
            Some(a) => algebra.add(&a, &t),
        });
    }
    acc.ok_or_else(|| Error::invariant("coproduct produced no tensor terms"))
}

/// Memoized convolution inverse of a map with phi(unit) = 1:
/// psi(x) = -phi(x) - sum' psi(x') phi(x'').
pub struct InverseCharacter<'a, O, A, F>
where
    O: CoalgebraOracle,
    A: TargetAlgebra,
    F: Fn(&O::Element) -> Result<A::Value>,
{
    oracle: &'a O,
    algebra: &'a A,
    map: F,
    memo: RefCell<BTreeMap<O::Element, A::Value>>,
}

impl<'a, O, A, F> InverseCharacter<'a, O, A, F>
where
    O: CoalgebraOracle,
    A: TargetAlgebra,
    F: Fn(&O::Element) -> Result<A::Value>,
{
    pub fn new(oracle: &'a O, algebra: &'a A, map: F) -> Self {
        InverseCharacter {
            oracle,
            algebra,
            map,
            memo: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn value(&self, x: &O::Element) -> Result<A::Value> {
        if *x == self.oracle.unit() {
            return Ok(self.algebra.one());
        }
        if let Some(v) = self.memo.borrow().get(x) {
            return Ok(v.clone());
        }
        let mut acc = self.algebra.neg(&(self.map)(x)?);
        for (l, r, c) in reduced_coproduct(self.oracle, x)? {
            let t = self.algebra.mul(&self.value(&l)?, &(self.map)(&r)?);
            acc = self
                .algebra
                .add(&acc, &self.algebra.neg(&self.algebra.scale(&t, &c)));
        }
        self.memo.borrow_mut().insert(x.clone(), acc.clone());
        Ok(acc)
    }
}

/// The factorisation engine: evaluates phi1, phi2, and the counterterm
/// character phi1^{*(-1)} with per-instance memo caches.
pub struct BirkhoffSplit<'a, O, A, F>
where
    O: CoalgebraOracle,
    A: TargetAlgebra,
    F: Fn(&O::Element) -> Result<A::Value>,
{
    oracle: &'a O,
    algebra: &'a A,
    map: F,
    phi1: RefCell<BTreeMap<O::Element, A::Value>>,
    phi2: RefCell<BTreeMap<O::Element, A::Value>>,
    inverse1: RefCell<BTreeMap<O::Element, A::Value>>,
}

impl<'a, O, A, F> BirkhoffSplit<'a, O, A, F>
where
    O: CoalgebraOracle,
    A: TargetAlgebra,
    F: Fn(&O::Element) -> Result<A::Value>,
{
    pub fn new(oracle: &'a O, algebra: &'a A, map: F) -> Self {
        BirkhoffSplit {
            oracle,
            algebra,
            map,
            phi1: RefCell::new(BTreeMap::new()),
            phi2: RefCell::new(BTreeMap::new()),
            inverse1: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn oracle(&self) -> &O {
        self.oracle
    }

    pub fn algebra(&self) -> &A {
        self.algebra
    }

    pub fn phi(&self, x: &O::Element) -> Result<A::Value> {
        (self.map)(x)
    }

    /// phi(x) + sum' phi1(x') phi(x'') - the common argument of both
    /// splitting recursions.
    fn dressed(&self, x: &O::Element) -> Result<A::Value> {
        let mut acc = (self.map)(x)?;
        for (l, r, c) in reduced_coproduct(self.oracle, x)? {
            let t = self.algebra.mul(&self.phi1(&l)?, &(self.map)(&r)?);
            acc = self.algebra.add(&acc, &self.algebra.scale(&t, &c));
        }
        Ok(acc)
    }

    fn ensure_split(&self, x: &O::Element) -> Result<()> {
        if self.phi1.borrow().contains_key(x) {
            return Ok(());
        }
        let dressed = self.dressed(x)?;
        let (p, rest) = self.algebra.split(&dressed)?;
        self.phi1.borrow_mut().insert(x.clone(), self.algebra.neg(&p));
        self.phi2.borrow_mut().insert(x.clone(), rest);
        Ok(())
    }

    pub fn phi1(&self, x: &O::Element) -> Result<A::Value> {
        if *x == self.oracle.unit() {
            return Ok(self.algebra.one());
        }
        self.ensure_split(x)?;
        Ok(self.phi1.borrow().get(x).unwrap().clone())
    }

    pub fn phi2(&self, x: &O::Element) -> Result<A::Value> {
        if *x == self.oracle.unit() {
            return Ok(self.algebra.one());
        }
        self.ensure_split(x)?;
        Ok(self.phi2.borrow().get(x).unwrap().clone())
    }

    /// The counterterm character phi1^{*(-1)}; for the cone schemes this is
    /// the renormalised value map.
    pub fn phi1_inverse(&self, x: &O::Element) -> Result<A::Value> {
        if *x == self.oracle.unit() {
            return Ok(self.algebra.one());
        }
        if let Some(v) = self.inverse1.borrow().get(x) {
            return Ok(v.clone());
        }
        let mut acc = self.algebra.neg(&self.phi1(x)?);
        for (l, r, c) in reduced_coproduct(self.oracle, x)? {
            let t = self.algebra.mul(&self.phi1_inverse(&l)?, &self.phi1(&r)?);
            acc = self
                .algebra
                .add(&acc, &self.algebra.neg(&self.algebra.scale(&t, &c)));
        }
        self.inverse1.borrow_mut().insert(x.clone(), acc.clone());
        Ok(acc)
    }

    /// Evaluate (phi1^{*(-1)} * phi2)(x); the factorisation identity states
    /// this equals phi(x).
    pub fn recomposed(&self, x: &O::Element) -> Result<A::Value> {
        convolution(
            self.oracle,
            self.algebra,
            |y| self.phi1_inverse(y),
            |y| self.phi2(y),
            x,
        )
    }
}

/// One verdict of the differential-compatibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatCase {
    /// Index of the corpus element.
    pub element: usize,
    /// Index of the operator pair.
    pub operator: usize,
    /// Which map was tested: "phi", "phi1", or "phi2".
    pub map: &'static str,
    pub pass: bool,
}

#[derive(Clone, Debug, Default)]
pub struct CompatReport {
    pub cases: Vec<CompatCase>,
}

impl CompatReport {
    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }
}

/// Check that derivations on the target intertwine with coderivations on
/// the coalgebra: first for phi itself (the precondition), then for both
/// Birkhoff factors. All verdicts are reported; nothing short-circuits.
pub fn check_differential_compat<O, A, F, D, P, E>(
    split: &BirkhoffSplit<'_, O, A, F>,
    operators: usize,
    coderivation: D,
    derivation: P,
    eq: E,
    corpus: &[O::Element],
) -> Result<CompatReport>
where
    O: CoalgebraOracle,
    A: TargetAlgebra,
    F: Fn(&O::Element) -> Result<A::Value>,
    D: Fn(usize, &O::Element) -> O::Element,
    P: Fn(usize, &A::Value) -> Result<A::Value>,
    E: Fn(&A::Value, &A::Value) -> bool,
{
    let mut report = CompatReport::default();
    for (xi, x) in corpus.iter().enumerate() {
        for op in 0..operators {
            let shifted = coderivation(op, x);
            let checks: [(&'static str, Result<A::Value>, Result<A::Value>); 3] = [
                ("phi", derivation(op, &split.phi(x)?), split.phi(&shifted)),
                ("phi1", derivation(op, &split.phi1(x)?), split.phi1(&shifted)),
                ("phi2", derivation(op, &split.phi2(x)?), split.phi2(&shifted)),
            ];
            for (map, lhs, rhs) in checks {
                let pass = match (lhs, rhs) {
                    (Ok(a), Ok(b)) => eq(&a, &b),
                    _ => false,
                };
                report.cases.push(CompatCase {
                    element: xi,
                    operator: op,
                    map,
                    pass,
                });
            }
        }
    }
    Ok(report)
}
