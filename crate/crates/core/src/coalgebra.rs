//! The differential cograded coalgebra of coloured lattice cones.
//!
//! Basis elements are pairs (lattice cone; colour), the colour a finite
//! vector of nonpositive integers. The coproduct splits a simplicial cone
//! over its faces, pairing each face with its transverse cone, and spreads
//! the colour binomially over both factors. Grading is cone dimension plus
//! total colour weight; the unit is the zero cone with zero colour.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cones::{faces, transverse_cone, LatticeCone, LatticeConeDto};
use crate::error::{Error, Result};
use crate::exact::{fmt_rat, InnerProduct, Int, Rat};

// ---------------------------------------------------------------------------
// Coloured cones
// ---------------------------------------------------------------------------

/// A lattice cone with a colour vector of nonpositive integers, trailing
/// zeros trimmed so equality is padding-invariant.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ColouredLatticeCone {
    cone: LatticeCone,
    colour: Vec<i64>,
}

impl ColouredLatticeCone {
    pub fn new(cone: LatticeCone, colour: &[i64]) -> Result<ColouredLatticeCone> {
        if colour.iter().any(|&s| s > 0) {
            return Err(Error::invalid(format!(
                "colour entries must be nonpositive, got {colour:?}"
            )));
        }
        let mut c = colour.to_vec();
        while c.last() == Some(&0) {
            c.pop();
        }
        Ok(ColouredLatticeCone { cone, colour: c })
    }

    /// Cone with the zero colour.
    pub fn plain(cone: LatticeCone) -> ColouredLatticeCone {
        ColouredLatticeCone {
            cone,
            colour: vec![],
        }
    }

    /// The coalgebra unit ({0}; 0).
    pub fn unit() -> ColouredLatticeCone {
        ColouredLatticeCone::plain(LatticeCone::zero())
    }

    pub fn is_unit(&self) -> bool {
        self.cone.is_zero() && self.colour.is_empty()
    }

    pub fn cone(&self) -> &LatticeCone {
        &self.cone
    }

    pub fn colour(&self) -> &[i64] {
        &self.colour
    }

    pub fn colour_entry(&self, i: usize) -> i64 {
        self.colour.get(i).copied().unwrap_or(0)
    }

    /// Total colour weight sum(|s_i|), a nonnegative integer.
    pub fn colour_weight(&self) -> u64 {
        self.colour.iter().map(|s| s.unsigned_abs()).sum()
    }
}

impl fmt::Display for ColouredLatticeCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.colour.is_empty() {
            write!(f, "{}", self.cone)
        } else {
            let s: Vec<String> = self.colour.iter().map(|x| x.to_string()).collect();
            write!(f, "({}; s=({}))", self.cone, s.join(", "))
        }
    }
}

/// The counit: 1 on the unit ({0}; 0), 0 elsewhere.
pub fn counit(x: &ColouredLatticeCone) -> Rat {
    if x.is_unit() {
        Rat::one()
    } else {
        Rat::zero()
    }
}

/// The i-th coderivation (1-based): lower colour entry i by one.
pub fn coderivation(i: usize, x: &ColouredLatticeCone) -> ColouredLatticeCone {
    assert!(i >= 1, "coderivations are indexed from 1");
    let mut colour = x.colour.clone();
    if colour.len() < i {
        colour.resize(i, 0);
    }
    colour[i - 1] -= 1;
    ColouredLatticeCone {
        cone: x.cone.clone(),
        colour,
    }
}

/// Grading: cone dimension plus total colour weight.
pub fn degree(x: &ColouredLatticeCone) -> u64 {
    x.cone().dim() as u64 + x.colour_weight()
}

// ---------------------------------------------------------------------------
// Linear combinations
// ---------------------------------------------------------------------------

/// Finitely supported rational combination of coloured cones; zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ConeCombination {
    terms: BTreeMap<ColouredLatticeCone, Rat>,
}

impl ConeCombination {
    pub fn zero() -> ConeCombination {
        ConeCombination::default()
    }

    pub fn single(x: ColouredLatticeCone) -> ConeCombination {
        let mut c = ConeCombination::zero();
        c.add_term(x, Rat::one());
        c
    }

    pub fn add_term(&mut self, x: ColouredLatticeCone, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(x).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            let dead: Vec<ColouredLatticeCone> = self
                .terms
                .iter()
                .filter(|(_, c)| c.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.terms.remove(&k);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ColouredLatticeCone, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Finitely supported rational combination of tensor pairs.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TensorCombination {
    terms: BTreeMap<(ColouredLatticeCone, ColouredLatticeCone), Rat>,
}

impl TensorCombination {
    pub fn zero() -> TensorCombination {
        TensorCombination::default()
    }

    pub fn add_term(
        &mut self,
        left: ColouredLatticeCone,
        right: ColouredLatticeCone,
        coeff: Rat,
    ) {
        if coeff.is_zero() {
            return;
        }
        let key = (left, right);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&mut self, other: &TensorCombination) {
        for ((l, r), c) in &other.terms {
            self.add_term(l.clone(), r.clone(), c.clone());
        }
    }

    pub fn sub(&mut self, other: &TensorCombination) {
        for ((l, r), c) in &other.terms {
            self.add_term(l.clone(), r.clone(), -c.clone());
        }
    }

    pub fn coeff(&self, left: &ColouredLatticeCone, right: &ColouredLatticeCone) -> Rat {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn terms(
        &self,
    ) -> impl Iterator<Item = (&(ColouredLatticeCone, ColouredLatticeCone), &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for TensorCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((l, r), c)| {
                if c.is_one() {
                    format!("{l} (x) {r}")
                } else {
                    format!("{} * {l} (x) {r}", fmt_rat(c))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// The coalgebra
// ---------------------------------------------------------------------------

/// Coproduct engine for a fixed inner product. Face and transverse-cone
/// computations are memoized per cone.
pub struct Coalgebra {
    q: InnerProduct,
    memo: RefCell<BTreeMap<LatticeCone, Vec<(LatticeCone, LatticeCone)>>>,
}

impl Coalgebra {
    pub fn new(q: InnerProduct) -> Coalgebra {
        Coalgebra {
            q,
            memo: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn inner_product(&self) -> &InnerProduct {
        &self.q
    }

    /// The (transverse cone, face) pairs of all faces of `lc`.
    fn pairs(&self, lc: &LatticeCone) -> Result<Vec<(LatticeCone, LatticeCone)>> {
        if let Some(hit) = self.memo.borrow().get(lc) {
            return Ok(hit.clone());
        }
        if !lc.cone().is_strongly_convex() {
            return Err(Error::unsupported(format!(
                "coproduct needs a strongly convex cone, got {}",
                lc.cone()
            )));
        }
        let mut out = Vec::new();
        for f in faces(lc)? {
            let t = transverse_cone(lc, &f, &self.q)?;
            out.push((t, f));
        }
        self.memo.borrow_mut().insert(lc.clone(), out.clone());
        Ok(out)
    }

    /// Uncoloured coproduct: sum over faces F of t(C,F) (x) F.
    pub fn coproduct(&self, lc: &LatticeCone) -> Result<TensorCombination> {
        let mut out = TensorCombination::zero();
        for (t, f) in self.pairs(lc)? {
            out.add_term(
                ColouredLatticeCone::plain(t),
                ColouredLatticeCone::plain(f),
                Rat::one(),
            );
        }
        Ok(out)
    }

    /// Coloured coproduct in closed form: the colour splits binomially over
    /// the two factors of every face term.
    pub fn coproduct_coloured(&self, x: &ColouredLatticeCone) -> Result<TensorCombination> {
        let pairs = self.pairs(x.cone())?;
        let s = x.colour();
        let mut out = TensorCombination::zero();
        for split in ColourSplits::new(s) {
            let (left_colour, right_colour, coeff) = split;
            for (t, f) in &pairs {
                out.add_term(
                    ColouredLatticeCone::new(t.clone(), &left_colour)?,
                    ColouredLatticeCone::new(f.clone(), &right_colour)?,
                    Rat::from_integer(coeff.clone()),
                );
            }
        }
        Ok(out)
    }

    /// Reduced coproduct: the full coproduct minus x (x) 1 and 1 (x) x.
    /// Every remaining term has both factors of strictly smaller degree.
    pub fn reduced_coproduct(&self, x: &ColouredLatticeCone) -> Result<TensorCombination> {
        let mut out = self.coproduct_coloured(x)?;
        let unit = ColouredLatticeCone::unit();
        out.add_term(x.clone(), unit.clone(), -Rat::one());
        out.add_term(unit, x.clone(), -Rat::one());
        Ok(out)
    }
}

/// Iterator over the splittings s = s' + s'' with s <= s' <= 0 componentwise,
/// yielding (s', s - s', product of binom(-s_i, -s'_i)).
struct ColourSplits {
    s: Vec<i64>,
    current: Option<Vec<i64>>,
}

impl ColourSplits {
    fn new(s: &[i64]) -> ColourSplits {
        ColourSplits {
            s: s.to_vec(),
            current: Some(s.to_vec()),
        }
    }
}

impl Iterator for ColourSplits {
    type Item = (Vec<i64>, Vec<i64>, Int);

    fn next(&mut self) -> Option<Self::Item> {
        let cur = self.current.clone()?;
        let left = cur.clone();
        let right: Vec<i64> = self.s.iter().zip(&cur).map(|(a, b)| a - b).collect();
        let mut coeff = Int::one();
        for (a, b) in self.s.iter().zip(&cur) {
            coeff *= binomial(-a, -b);
        }
        // advance the mixed-radix counter: entry i ranges over s_i..=0
        let mut next = cur;
        let mut i = 0;
        loop {
            if i == next.len() {
                self.current = None;
                break;
            }
            next[i] += 1;
            if next[i] <= 0 {
                self.current = Some(next);
                break;
            }
            next[i] = self.s[i];
            i += 1;
        }
        Some((left, right, coeff))
    }
}

pub fn binomial(n: i64, k: i64) -> Int {
    if k < 0 || k > n {
        return Int::zero();
    }
    let mut acc = Int::one();
    for t in 0..k {
        acc = acc * Int::from(n - t) / Int::from(t + 1);
    }
    acc
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ColouredConeDto {
    #[serde(flatten)]
    pub cone: LatticeConeDto,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub colour: Vec<i64>,
}

impl ColouredConeDto {
    pub fn from_coloured(x: &ColouredLatticeCone) -> ColouredConeDto {
        ColouredConeDto {
            cone: LatticeConeDto::from_cone(x.cone()),
            colour: x.colour().to_vec(),
        }
    }

    pub fn to_coloured(&self) -> Result<ColouredLatticeCone> {
        ColouredLatticeCone::new(self.cone.to_cone()?, &self.colour)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TensorTermDto {
    pub coeff: String,
    pub left: ColouredConeDto,
    pub right: ColouredConeDto,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TensorCombinationDto {
    pub terms: Vec<TensorTermDto>,
}

impl TensorCombinationDto {
    pub fn from_tensor(t: &TensorCombination) -> TensorCombinationDto {
        TensorCombinationDto {
            terms: t
                .terms()
                .map(|((l, r), c)| TensorTermDto {
                    coeff: fmt_rat(c),
                    left: ColouredConeDto::from_coloured(l),
                    right: ColouredConeDto::from_coloured(r),
                })
                .collect(),
        }
    }
}
