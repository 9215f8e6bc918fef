//! Renormalised conical zeta values.
//!
//! The pipeline assembles everything below it: exponential sums S° over
//! open cones as meromorphic jets, exponential integrals I, the holomorphic
//! projection route mu = pi_plus S°, the Birkhoff factorisation route with
//! the germ target, the univariate scheme obtained by restricting to a ray
//! before factorising with the Laurent target, and a floating-point lattice
//! sum oracle used only to validate convergence claims.
//!
//! Renormalised values are exact rationals; every float in this module
//! carries an explicit error bound.

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::birkhoff::{BirkhoffSplit, CoalgebraOracle, TargetAlgebra};
use crate::coalgebra::{degree, Coalgebra, ColouredLatticeCone};
use crate::cones::{
    chen_cone, open_face_cover, simplicial_subdivide, smooth_subdivide, LatticeCone, Subdivision,
};
use crate::error::{Error, Result};
use crate::exact::{rat_int, InnerProduct, Rat, RatVec};
use crate::germs::{Denominators, LaurentSeries, LinearForm, MeromorphicJet, NumeratorJet, EXACT};

// ---------------------------------------------------------------------------
// Check reports
// ---------------------------------------------------------------------------

/// One verdict in a structured check report.
#[derive(Clone, Debug, Serialize)]
pub struct CheckCase {
    pub input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    pub got: String,
    pub pass: bool,
}

/// A named suite of verdicts, renderable as JSON.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub cases: Vec<CheckCase>,
}

impl CheckReport {
    pub fn new(suite: &str) -> CheckReport {
        CheckReport {
            suite: suite.to_string(),
            cases: Vec::new(),
        }
    }

    pub fn push(&mut self, input: String, expected: Option<String>, got: String, pass: bool) {
        self.cases.push(CheckCase {
            input,
            expected,
            got,
            pass,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }
}

// ---------------------------------------------------------------------------
// Coalgebra oracle and target algebras
// ---------------------------------------------------------------------------

/// The lattice-cone coalgebra as seen by the factorisation engine.
pub struct ConeOracle {
    coalgebra: Coalgebra,
}

impl ConeOracle {
    pub fn new(q: InnerProduct) -> ConeOracle {
        ConeOracle {
            coalgebra: Coalgebra::new(q),
        }
    }

    pub fn coalgebra(&self) -> &Coalgebra {
        &self.coalgebra
    }
}

impl CoalgebraOracle for ConeOracle {
    type Element = ColouredLatticeCone;

    fn unit(&self) -> ColouredLatticeCone {
        ColouredLatticeCone::unit()
    }

    fn degree(&self, x: &ColouredLatticeCone) -> u64 {
        degree(x)
    }

    fn coproduct(
        &self,
        x: &ColouredLatticeCone,
    ) -> Result<Vec<(ColouredLatticeCone, ColouredLatticeCone, Rat)>> {
        Ok(self
            .coalgebra
            .coproduct_coloured(x)?
            .terms()
            .map(|((l, r), c)| (l.clone(), r.clone(), c.clone()))
            .collect())
    }
}

/// Meromorphic jets split by the holomorphic projection for `q`.
pub struct GermTarget {
    q: InnerProduct,
}

impl GermTarget {
    pub fn new(q: InnerProduct) -> GermTarget {
        GermTarget { q }
    }
}

impl TargetAlgebra for GermTarget {
    type Value = MeromorphicJet;

    fn one(&self) -> MeromorphicJet {
        MeromorphicJet::one()
    }

    fn add(&self, a: &MeromorphicJet, b: &MeromorphicJet) -> MeromorphicJet {
        a.add(b)
    }

    fn mul(&self, a: &MeromorphicJet, b: &MeromorphicJet) -> MeromorphicJet {
        a.mul(b)
    }

    fn scale(&self, a: &MeromorphicJet, c: &Rat) -> MeromorphicJet {
        a.scale(c)
    }

    fn split(&self, a: &MeromorphicJet) -> Result<(MeromorphicJet, MeromorphicJet)> {
        a.pi_plus_parts(&self.q, &crate::germs::PiPlusStrategy::Canonical)
    }
}

/// Laurent series split by minimal subtraction (nonnegative powers).
pub struct LaurentTarget;

impl TargetAlgebra for LaurentTarget {
    type Value = LaurentSeries;

    fn one(&self) -> LaurentSeries {
        LaurentSeries::constant(Rat::one())
    }

    fn add(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a.add(b)
    }

    fn mul(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a.mul(b)
    }

    fn scale(&self, a: &LaurentSeries, c: &Rat) -> LaurentSeries {
        a.scale(c)
    }

    fn split(&self, a: &LaurentSeries) -> Result<(LaurentSeries, LaurentSeries)> {
        Ok(a.split())
    }
}

// ---------------------------------------------------------------------------
// Exponential sums and integrals
// ---------------------------------------------------------------------------

fn form_coeffs(v: &RatVec) -> Vec<Rat> {
    v.coords_padded(v.dim())
}

/// Open cones of a smooth cover whose interiors partition the interior of
/// `lc`: the cone itself when smooth, otherwise the open face cover of a
/// smooth subdivision.
pub fn open_smooth_cover(lc: &LatticeCone) -> Result<Vec<LatticeCone>> {
    if lc.is_zero() {
        return Ok(vec![lc.clone()]);
    }
    if lc.is_smooth() {
        return Ok(vec![lc.clone()]);
    }
    let sub = smooth_subdivide(lc)?;
    open_face_cover(&sub)
}

/// S° of a smooth cone at colour zero: the product over the monoid basis
/// (the primary generators) of e^L/(1-e^L).
fn smooth_sum(lc: &LatticeCone, n: i64) -> Result<MeromorphicJet> {
    if lc.is_zero() {
        return Ok(MeromorphicJet::one());
    }
    let k = lc.dim() as i64;
    let build = n + (k - 1).max(0);
    let mut acc = MeromorphicJet::one();
    for v in lc.generators() {
        acc = acc.mul(&MeromorphicJet::pole_factor(&form_coeffs(v), build)?);
    }
    Ok(acc)
}

/// The exponential sum S°(C, Lambda; s) over interior lattice points, as a
/// meromorphic jet of working order `n`.
///
/// Smooth cones are direct products of pole factors; general cones sum over
/// the open faces of a smooth subdivision. Colours differentiate the
/// colour-zero jet, with the working order raised first so the final
/// guarantee is still `n`. The zero cone gives 1 at colour zero and 0
/// otherwise.
pub fn exp_sum_open(x: &ColouredLatticeCone, n: i64) -> Result<MeromorphicJet> {
    let lc = x.cone();
    if lc.is_zero() {
        return Ok(if x.colour_weight() == 0 {
            MeromorphicJet::one()
        } else {
            MeromorphicJet::zero()
        });
    }
    let weight = x.colour_weight() as i64;
    let build = n + weight;
    let mut total = MeromorphicJet::zero();
    for piece in open_smooth_cover(lc)? {
        total = total.add(&smooth_sum(&piece, build)?);
    }
    for (i, &s) in x.colour().iter().enumerate() {
        for _ in 0..(-s) {
            total = total.derive(i + 1);
        }
    }
    Ok(total)
}

/// S° computed through an explicit subdivision: the sum of S° over its open
/// face cover. Used to witness subdivision invariance.
pub fn exp_sum_via_subdivision(sub: &Subdivision, n: i64) -> Result<MeromorphicJet> {
    let mut total = MeromorphicJet::zero();
    for face in open_face_cover(sub)? {
        total = total.add(&exp_sum_open(&ColouredLatticeCone::plain(face), n)?);
    }
    Ok(total)
}

/// The exponential integral I(C, Lambda) = (-1)^k w / (L_1 ... L_k) on a
/// simplicial cone, extended to general cones by subdividing; an exact
/// rational function, truncated to working order `n` on return.
pub fn exp_integral(lc: &LatticeCone, n: i64) -> Result<MeromorphicJet> {
    if lc.is_zero() {
        return Ok(MeromorphicJet::one());
    }
    if !lc.is_simplicial() {
        let sub = simplicial_subdivide(lc)?;
        let mut total = MeromorphicJet::zero();
        for piece in sub.pieces() {
            total = total.add(&exp_integral(piece, n)?);
        }
        return Ok(total);
    }
    let k = lc.dim();
    let w = lc.index()?;
    let mut scalar = Rat::from_integer(w);
    if k % 2 == 1 {
        scalar = -scalar;
    }
    let mut denoms = Denominators::new();
    for v in lc.generators() {
        let (form, scale) = LinearForm::canonicalise(&form_coeffs(v))?;
        scalar *= scale.recip();
        *denoms.entry(form).or_insert(0) += 1;
    }
    Ok(
        MeromorphicJet::from_term(denoms, NumeratorJet::constant(scalar, EXACT))
            .truncate_to_order(n),
    )
}

// ---------------------------------------------------------------------------
// Renormalised values
// ---------------------------------------------------------------------------

/// mu°(C, Lambda; s) by direct holomorphic projection of S°.
pub fn mu_open_projection(
    x: &ColouredLatticeCone,
    q: &InnerProduct,
    n: i64,
) -> Result<MeromorphicJet> {
    exp_sum_open(x, n)?.pi_plus(q)
}

/// mu°(C, Lambda; s) as the counterterm character of the Birkhoff
/// factorisation of S° with the germ target. All atomic values are built at
/// a raised uniform order so the result is guaranteed to order `n`.
pub fn mu_via_birkhoff(
    x: &ColouredLatticeCone,
    q: &InnerProduct,
    n: i64,
) -> Result<MeromorphicJet> {
    let oracle = ConeOracle::new(q.clone());
    let algebra = GermTarget::new(q.clone());
    let build = n + degree(x) as i64;
    let split = BirkhoffSplit::new(&oracle, &algebra, |y| exp_sum_open(y, build));
    Ok(split.phi1_inverse(x)?.truncate_to_order(n))
}

/// Default working order for a colour: total weight + 6.
pub fn default_order(colour: &[i64]) -> i64 {
    colour.iter().map(|s| s.abs()).sum::<i64>() + 6
}

/// Which renormalisation scheme a request runs.
#[derive(Clone, Debug)]
pub enum Scheme {
    /// Holomorphic projection of multivariate germs.
    Multivariate,
    /// Restrict to the ray spanned by the direction, then factorise
    /// Laurent series.
    Univariate(Vec<Rat>),
}

#[derive(Clone, Debug)]
pub struct ZetaRequest {
    pub cone: LatticeCone,
    pub colour: Vec<i64>,
    pub scheme: Scheme,
    pub order: Option<i64>,
}

/// The renormalised conical zeta value of a request, as an exact rational.
///
/// The multivariate scheme evaluates mu°(C; s) at 0 and cross-checks it
/// against the Taylor-coefficient route r! [epsilon^r] mu°(C; 0) with
/// r = -s; disagreement is an internal invariant violation.
pub fn zeta_ren(req: &ZetaRequest) -> Result<Rat> {
    let x = ColouredLatticeCone::new(req.cone.clone(), &req.colour)?;
    let n = req.order.unwrap_or_else(|| default_order(&req.colour));
    match &req.scheme {
        Scheme::Multivariate => {
            let q = InnerProduct::Standard;
            let direct = mu_open_projection(&x, &q, n)?.eval_zero()?;
            let weight = x.colour_weight() as i64;
            let plain = ColouredLatticeCone::plain(req.cone.clone());
            let mu0 = mu_open_projection(&plain, &q, n.max(weight))?;
            let r: Vec<u32> = req.colour.iter().map(|&s| (-s) as u32).collect();
            let mut factorial = Rat::one();
            for &ri in &r {
                for t in 1..=ri {
                    factorial *= rat_int(t as i64);
                }
            }
            let via_taylor = factorial * mu0.taylor_coefficient(&r)?;
            if direct != via_taylor {
                return Err(Error::invariant(format!(
                    "value routes disagree: {direct} directly, {via_taylor} via Taylor coefficients"
                )));
            }
            Ok(direct)
        }
        Scheme::Univariate(a) => {
            let direction = RatVec::new(a.clone());
            zeta_ren_univariate(&x, &direction, n)
        }
    }
}

/// Renormalised multiple zeta value at nonpositive arguments: the zeta
/// value of the Chen cone whose interior points are the strictly decreasing
/// tuples in the sum.
pub fn mzv_ren(s: &[i64]) -> Result<Rat> {
    if s.is_empty() {
        return Err(Error::invalid("at least one argument is required"));
    }
    if s.iter().any(|&v| v > 0) {
        return Err(Error::invalid(
            "only nonpositive arguments are renormalised by this scheme",
        ));
    }
    let cone = chen_cone(s.len())?;
    zeta_ren(&ZetaRequest {
        cone,
        colour: s.to_vec(),
        scheme: Scheme::Multivariate,
        order: None,
    })
}

/// A direction is admissible for the whole Chen family iff its entries are
/// strictly increasing and negative.
pub fn chen_direction_valid(a: &[Rat]) -> bool {
    if a.is_empty() || !a.last().map_or(false, |x| x.is_negative()) {
        return false;
    }
    a.windows(2).all(|w| w[0] < w[1])
}

/// The univariate regularisation: S° restricted to the ray through `a`.
pub fn phi_univariate(x: &ColouredLatticeCone, a: &RatVec, n: i64) -> Result<LaurentSeries> {
    exp_sum_open(x, n)?.restrict_direction(a)
}

/// Renormalised value through the univariate scheme: Birkhoff-factorise the
/// restricted sums over the Laurent target and evaluate the counterterm
/// character at 0.
pub fn zeta_ren_univariate(x: &ColouredLatticeCone, a: &RatVec, n: i64) -> Result<Rat> {
    let oracle = ConeOracle::new(InnerProduct::Standard);
    let algebra = LaurentTarget;
    let build = n + degree(x) as i64;
    let split = BirkhoffSplit::new(&oracle, &algebra, |y| phi_univariate(y, a, build));
    let value = split.phi1_inverse(x)?;
    if value.pole_order() > 0 {
        return Err(Error::invariant(format!(
            "counterterm character has a pole: {value}"
        )));
    }
    Ok(value.coeff(0))
}

/// Cross-validates the two schemes on one element and records the
/// restriction/projection non-commutation counterexample.
pub fn compare_schemes(x: &ColouredLatticeCone, a: &RatVec, n: i64) -> Result<CheckReport> {
    let mut report = CheckReport::new("compare-schemes");
    let q = InnerProduct::Standard;

    // the multivariate counterterm restricted to the ray must agree with
    // the univariate counterterm series
    let mu = mu_via_birkhoff(x, &q, n)?;
    let restricted = mu.restrict_direction(a)?;
    let oracle = ConeOracle::new(InnerProduct::Standard);
    let algebra = LaurentTarget;
    let build = n + degree(x) as i64;
    let split = BirkhoffSplit::new(&oracle, &algebra, |y| phi_univariate(y, a, build));
    let univariate = split.phi1_inverse(x)?;
    let cap = restricted.order().min(univariate.order()).min(n);
    let lo = restricted
        .lowest()
        .unwrap_or(0)
        .min(univariate.lowest().unwrap_or(0));
    let series_match = (lo..=cap).all(|t| restricted.coeff(t) == univariate.coeff(t));
    report.push(
        format!("{x} restricted to {a}"),
        Some(format!("{univariate}")),
        format!("{restricted}"),
        series_match,
    );

    // equal renormalised values
    let v_multi = mu.eval_zero()?;
    let v_uni = univariate.coeff(0);
    report.push(
        format!("zeta of {x}"),
        Some(crate::exact::fmt_rat(&v_multi)),
        crate::exact::fmt_rat(&v_uni),
        v_multi == v_uni,
    );

    // restriction does not commute with the projection: e1/e2
    let f = MeromorphicJet::from_term(
        {
            let mut d = Denominators::new();
            d.insert(LinearForm::from_integers(&[0, 1])?, 1);
            d
        },
        LinearForm::from_integers(&[1])?.as_jet(),
    );
    let restrict_then_project = f.restrict_direction(a)?.split().0.coeff(0);
    let project_then_restrict = f.pi_plus(&q)?.restrict_direction(a)?.coeff(0);
    let a1_over_a2 = a.coord(0) / a.coord(1);
    let pass = restrict_then_project == a1_over_a2
        && project_then_restrict.is_zero()
        && !a1_over_a2.is_zero();
    report.push(
        "projection of e1/e2 against restriction order".to_string(),
        Some(format!(
            "{} then 0",
            crate::exact::fmt_rat(&a1_over_a2)
        )),
        format!(
            "{} then {}",
            crate::exact::fmt_rat(&restrict_then_project),
            crate::exact::fmt_rat(&project_then_restrict)
        ),
        pass,
    );
    Ok(report)
}

// ---------------------------------------------------------------------------
// Floating-point validation
// ---------------------------------------------------------------------------

fn rat_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Upper bound on sum_{m >= from} m^R e^{c m} for c < 0, by the ratio test.
fn weighted_tail(c: f64, r_weight: u32, from: u64) -> f64 {
    let from_f = from as f64;
    let ratio = c.exp() * ((from_f + 1.0) / from_f).powi(r_weight as i32);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    let first = from_f.powi(r_weight as i32) * (c * from_f).exp();
    first / (1.0 - ratio)
}

/// Upper bound on the full sum_{m >= 1} m^R e^{c m}.
fn weighted_sum_upper(c: f64, r_weight: u32, partial_to: u64) -> f64 {
    let mut acc = 0.0;
    for m in 1..=partial_to {
        acc += (m as f64).powi(r_weight as i32) * (c * m as f64).exp();
    }
    acc + weighted_tail(c, r_weight, partial_to + 1)
}

/// Brute-force lattice sum over interior points with monoid coordinates up
/// to `cutoff`, plus a rigorous bound on the discarded tail. The point must
/// pair strictly negatively with every generator.
pub fn numeric_oracle(
    x: &ColouredLatticeCone,
    eps: &RatVec,
    cutoff: u64,
) -> Result<(f64, f64)> {
    let lc = x.cone();
    for v in lc.generators() {
        if !v.dot(eps).is_negative() {
            return Err(Error::direction(format!(
                "evaluation point {eps} does not pair negatively with generator {v}"
            )));
        }
    }
    if lc.is_zero() {
        return Ok(if x.colour_weight() == 0 {
            (1.0, 0.0)
        } else {
            (0.0, 0.0)
        });
    }
    let r: Vec<u32> = x.colour().iter().map(|&s| (-s) as u32).collect();
    let r_total: u32 = r.iter().sum();
    let mut value = 0.0f64;
    let mut bound = 0.0f64;
    for piece in open_smooth_cover(lc)? {
        let gens = piece.generators();
        let l = gens.len();
        if l == 0 {
            continue;
        }
        let exps: Vec<f64> = gens.iter().map(|w| rat_f64(&w.dot(eps))).collect();
        let rows: Vec<Vec<f64>> = gens
            .iter()
            .map(|w| {
                w.coords_padded(lc.ambient_dim().max(r.len()))
                    .iter()
                    .map(rat_f64)
                    .collect()
            })
            .collect();
        // partial sum over the coordinate box [1, cutoff]^l
        let mut m = vec![1u64; l];
        loop {
            let mut phase = 0.0;
            for (mi, c) in m.iter().zip(&exps) {
                phase += *mi as f64 * c;
            }
            let mut weight = 1.0;
            for (t, &rt) in r.iter().enumerate() {
                if rt > 0 {
                    let nt: f64 = m
                        .iter()
                        .zip(&rows)
                        .map(|(mi, row)| *mi as f64 * row.get(t).copied().unwrap_or(0.0))
                        .sum();
                    weight *= nt.powi(rt as i32);
                }
            }
            value += phase.exp() * weight;
            // next box point
            let mut carry = true;
            for slot in m.iter_mut() {
                if *slot < cutoff {
                    *slot += 1;
                    carry = false;
                    break;
                }
                *slot = 1;
            }
            if carry {
                break;
            }
        }
        // union tail bound, with |n^r| <= (l W)^{|r|} prod m_i^{|r|}
        let w_max = rows
            .iter()
            .flat_map(|row| row.iter().map(|x| x.abs()))
            .fold(0.0f64, f64::max);
        let prefactor = (l as f64 * w_max).powi(r_total as i32).max(f64::MIN_POSITIVE);
        for i in 0..l {
            let mut t = weighted_tail(exps[i], r_total, cutoff + 1);
            for (j, c) in exps.iter().enumerate() {
                if j != i {
                    t *= weighted_sum_upper(*c, r_total, cutoff);
                }
            }
            bound += prefactor * t;
        }
    }
    Ok((value, bound))
}

/// Evaluate S°(C; 0) at a rational point by closed-form pole factors with
/// the h series summed to `h_order`; returns the exact partial value and a
/// bound on the truncation error. Only colour zero is supported.
pub fn exp_sum_value(x: &ColouredLatticeCone, eps: &RatVec, h_order: usize) -> Result<(Rat, f64)> {
    if x.colour_weight() != 0 {
        return Err(Error::invalid(
            "point evaluation is only provided at colour zero",
        ));
    }
    let lc = x.cone();
    if lc.is_zero() {
        return Ok((Rat::one(), 0.0));
    }
    let h = crate::germs::h_coefficients(h_order);
    let two_pi = std::f64::consts::TAU;
    let mut total = Rat::zero();
    let mut err = 0.0f64;
    for piece in open_smooth_cover(lc)? {
        let mut vals: Vec<(Rat, f64)> = Vec::new();
        for w in piece.generators() {
            let c = w.dot(eps);
            if c.is_zero() {
                return Err(Error::direction(format!(
                    "evaluation point {eps} is orthogonal to generator {w}"
                )));
            }
            // -1/c + sum h_t c^t
            let mut acc = -c.clone().recip();
            let mut power = Rat::one();
            for ht in &h {
                acc += ht * &power;
                power *= &c;
            }
            let t = rat_f64(&c).abs() / two_pi;
            let factor_err = if t < 1.0 {
                4.0 * t.powi(h_order as i32 + 1) / (1.0 - t)
            } else {
                f64::INFINITY
            };
            vals.push((acc, factor_err));
        }
        let mut prod = Rat::one();
        for (v, _) in &vals {
            prod *= v;
        }
        // error of a product from per-factor errors
        let mut piece_err = 0.0;
        for i in 0..vals.len() {
            let mut t = vals[i].1;
            for (j, (v, e)) in vals.iter().enumerate() {
                if j != i {
                    t *= rat_f64(v).abs() + e;
                }
            }
            piece_err += t;
        }
        total += prod;
        err += piece_err;
    }
    Ok((total, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::{make_lattice_cone, split_at};
    use crate::exact::rat;

    fn cone(gens: &[&[i64]]) -> LatticeCone {
        let vs: Vec<RatVec> = gens.iter().map(|g| RatVec::from_i64(g)).collect();
        make_lattice_cone(&vs, None).unwrap()
    }

    fn plain(lc: LatticeCone) -> ColouredLatticeCone {
        ColouredLatticeCone::plain(lc)
    }

    fn coloured(lc: LatticeCone, s: &[i64]) -> ColouredLatticeCone {
        ColouredLatticeCone::new(lc, s).unwrap()
    }

    #[test]
    fn exponential_sum_of_rays_and_chen_cones() {
        // ray: single pole factor
        let s = exp_sum_open(&plain(cone(&[&[1]])), 8).unwrap();
        let expected = MeromorphicJet::pole_factor(&[rat_int(1)], 8).unwrap();
        assert_eq!(s, expected);
        // Chen 2-cone: the product of the two factors
        let s = exp_sum_open(&plain(chen_cone(2).unwrap()), 6).unwrap();
        let p = MeromorphicJet::pole_factor(&[rat_int(1)], 7)
            .unwrap()
            .mul(&MeromorphicJet::pole_factor(&[rat_int(1), rat_int(1)], 7).unwrap());
        assert_eq!(s, p);
        // zero cone conventions
        assert_eq!(
            exp_sum_open(&plain(LatticeCone::zero()), 6).unwrap(),
            MeromorphicJet::one()
        );
        assert!(exp_sum_open(&coloured(LatticeCone::zero(), &[-1]), 6)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn quadrant_sum_equals_open_face_sum_of_diagonal_split() {
        let quadrant = cone(&[&[1, 0], &[0, 1]]);
        let n = 8;
        let direct = exp_sum_open(&plain(quadrant.clone()), n).unwrap();
        let sub = split_at(&quadrant, &RatVec::from_i64(&[1, 1])).unwrap();
        let via_split = exp_sum_via_subdivision(&sub, n).unwrap();
        assert!(direct.equiv(&via_split, n));
    }

    #[test]
    fn coloured_sum_is_the_derivative() {
        let ray = cone(&[&[1]]);
        let n = 6;
        let coloured_sum = exp_sum_open(&coloured(ray.clone(), &[-1]), n).unwrap();
        let derived = exp_sum_open(&plain(ray), n + 1).unwrap().derive(1);
        assert!(coloured_sum.equiv(&derived, n));
        // Chen 2 with colour on the second coordinate
        let c2 = chen_cone(2).unwrap();
        let coloured_sum = exp_sum_open(&coloured(c2.clone(), &[0, -1]), 5).unwrap();
        let derived = exp_sum_open(&plain(c2), 6).unwrap().derive(2);
        assert!(coloured_sum.equiv(&derived, 5));
    }

    #[test]
    fn exponential_integrals() {
        // I(<e1>) = -1/e1
        let i1 = exp_integral(&cone(&[&[1]]), 8).unwrap();
        let mut d = Denominators::new();
        d.insert(LinearForm::from_integers(&[1]).unwrap(), 1);
        assert_eq!(i1.term(&d).unwrap().eval_zero(), rat_int(-1));
        // I(Chen 2) = 1/(e1(e1+e2))
        let i2 = exp_integral(&chen_cone(2).unwrap(), 8).unwrap();
        let mut d = Denominators::new();
        d.insert(LinearForm::from_integers(&[1]).unwrap(), 1);
        d.insert(LinearForm::from_integers(&[1, 1]).unwrap(), 1);
        assert_eq!(i2.term(&d).unwrap().eval_zero(), rat_int(1));
        // index 2 cone: 2/(e1(e1+2e2))
        let i3 = exp_integral(&cone(&[&[1, 0], &[1, 2]]), 8).unwrap();
        let mut d = Denominators::new();
        d.insert(LinearForm::from_integers(&[1]).unwrap(), 1);
        d.insert(LinearForm::from_integers(&[1, 2]).unwrap(), 1);
        assert_eq!(i3.term(&d).unwrap().eval_zero(), rat_int(2));
        // unit cone
        assert_eq!(
            exp_integral(&LatticeCone::zero(), 8).unwrap(),
            MeromorphicJet::one()
        );
    }

    #[test]
    fn projection_route_examples() {
        let q = InnerProduct::Standard;
        // mu(<e1>) = h(e1)
        let m = mu_open_projection(&plain(cone(&[&[1]])), &q, 8).unwrap();
        let h = crate::germs::h_jet(8);
        assert_eq!(
            m,
            MeromorphicJet::from_polynomial(h).truncate_to_order(8)
        );
        // mu({0}) = 1
        assert_eq!(
            mu_open_projection(&plain(LatticeCone::zero()), &q, 8).unwrap(),
            MeromorphicJet::one()
        );
        // mu(Chen 2) evaluates to 3/8
        let m = mu_open_projection(&plain(chen_cone(2).unwrap()), &q, 6).unwrap();
        assert_eq!(m.eval_zero().unwrap(), rat(3, 8));
    }

    #[test]
    fn birkhoff_route_matches_projection_route() {
        let q = InnerProduct::Standard;
        let corpus = [
            cone(&[&[1]]),
            chen_cone(2).unwrap(),
            cone(&[&[1, 0], &[0, 1]]),
            cone(&[&[1, 0], &[1, 2]]),
        ];
        for lc in &corpus {
            let x = plain(lc.clone());
            let a = mu_via_birkhoff(&x, &q, 5).unwrap();
            let b = mu_open_projection(&x, &q, 5).unwrap();
            assert!(a.equiv(&b, 5), "mu routes disagree on {lc}");
        }
    }

    #[test]
    fn second_factor_is_the_exponential_integral() {
        let q = InnerProduct::Standard;
        let oracle = ConeOracle::new(q.clone());
        let algebra = GermTarget::new(q.clone());
        let n = 5;
        for lc in [cone(&[&[1]]), chen_cone(2).unwrap(), cone(&[&[1, 0], &[1, 2]])] {
            let x = plain(lc.clone());
            let build = n + degree(&x) as i64;
            let split = BirkhoffSplit::new(&oracle, &algebra, |y| exp_sum_open(y, build));
            let phi2 = split.phi2(&x).unwrap();
            let integral = exp_integral(&lc, build).unwrap();
            assert!(phi2.equiv(&integral, n), "phi2 vs integral on {lc}");
        }
    }

    #[test]
    fn euler_maclaurin_on_a_sample() {
        let q = InnerProduct::Standard;
        let oracle = ConeOracle::new(q.clone());
        let n = 5;
        for lc in [cone(&[&[1]]), chen_cone(2).unwrap()] {
            let x = plain(lc.clone());
            let s = exp_sum_open(&x, n).unwrap();
            let conv = crate::birkhoff::convolution(
                &oracle,
                &GermTarget::new(q.clone()),
                |y| mu_open_projection(y, &q, n + degree(&x) as i64),
                |y| exp_integral(y.cone(), n + degree(&x) as i64),
                &x,
            )
            .unwrap();
            assert!(s.equiv(&conv, n), "factorisation fails on {lc}");
        }
    }

    #[test]
    fn golden_values_multivariate() {
        assert_eq!(mzv_ren(&[0, 0]).unwrap(), rat(3, 8));
        assert_eq!(mzv_ren(&[0]).unwrap(), rat(-1, 2));
        // agrees with the classical zeta(-1) = -1/12 through both value routes
        assert_eq!(mzv_ren(&[-1]).unwrap(), rat(-1, 12));
        assert!(mzv_ren(&[1]).is_err());
        let req = ZetaRequest {
            cone: LatticeCone::zero(),
            colour: vec![],
            scheme: Scheme::Multivariate,
            order: None,
        };
        assert_eq!(zeta_ren(&req).unwrap(), rat_int(1));
    }

    #[test]
    fn direction_validity() {
        assert!(chen_direction_valid(&[rat_int(-2), rat_int(-1)]));
        assert!(!chen_direction_valid(&[rat_int(-1), rat_int(-2)]));
        assert!(chen_direction_valid(&[rat_int(-1)]));
        assert!(!chen_direction_valid(&[rat_int(-1), rat_int(0)]));
        assert!(!chen_direction_valid(&[]));
    }

    #[test]
    fn univariate_scheme_golden_values() {
        let c2 = chen_cone(2).unwrap();
        for a in [[-2i64, -1], [-3, -1], [-5, -2]] {
            let direction = RatVec::from_i64(&a);
            let v = zeta_ren_univariate(&plain(c2.clone()), &direction, 6).unwrap();
            assert_eq!(v, rat(3, 8), "direction {a:?}");
        }
        let ray = cone(&[&[1]]);
        let v = zeta_ren_univariate(&plain(ray), &RatVec::from_i64(&[-1]), 6).unwrap();
        assert_eq!(v, rat(-1, 2));
        // request plumbing
        let req = ZetaRequest {
            cone: chen_cone(2).unwrap(),
            colour: vec![0, 0],
            scheme: Scheme::Univariate(vec![rat_int(-2), rat_int(-1)]),
            order: None,
        };
        assert_eq!(zeta_ren(&req).unwrap(), rat(3, 8));
    }

    #[test]
    fn scheme_comparison_report() {
        let report = compare_schemes(
            &plain(chen_cone(2).unwrap()),
            &RatVec::from_i64(&[-2, -1]),
            6,
        )
        .unwrap();
        assert!(report.all_pass(), "{report:?}");
        assert_eq!(report.cases.len(), 3);
    }

    #[test]
    fn numeric_oracle_on_a_ray() {
        // sum e^{-n} = 1/(e-1)
        let x = plain(cone(&[&[1]]));
        let eps = RatVec::from_i64(&[-1]);
        let (v, bound) = numeric_oracle(&x, &eps, 60).unwrap();
        let truth = 1.0 / (std::f64::consts::E - 1.0);
        assert!((v - truth).abs() <= bound + 1e-12);
        assert!(bound < 1e-20);
        // matches the closed-form evaluation
        let (exact, err) = exp_sum_value(&x, &eps, 30).unwrap();
        assert!(err < 1e-12);
        assert!((rat_f64(&exact) - truth).abs() < 1e-9);
        // zero cone
        let (v, b) = numeric_oracle(&plain(LatticeCone::zero()), &eps, 10).unwrap();
        assert_eq!((v, b), (1.0, 0.0));
        // wrong half space rejected
        assert!(numeric_oracle(&x, &RatVec::from_i64(&[1]), 10).is_err());
    }

    #[test]
    fn numeric_oracle_against_jet_evaluation() {
        let x = plain(chen_cone(2).unwrap());
        let eps = RatVec::new(vec![rat(-1, 2), rat(-1, 3)]);
        let (oracle, tail) = numeric_oracle(&x, &eps, 120).unwrap();
        let (exact, herr) = exp_sum_value(&x, &eps, 30).unwrap();
        let exact_f = rat_f64(&exact);
        assert!((oracle - exact_f).abs() <= tail + herr + 1e-9);
        assert!(((oracle - exact_f) / exact_f).abs() < 1e-6);
    }

    #[test]
    fn intertwining_spot_check() {
        // d/de1 S°(ray) = S°(ray; -e1)
        let ray = cone(&[&[1]]);
        let lhs = exp_sum_open(&plain(ray.clone()), 7).unwrap().derive(1);
        let rhs = exp_sum_open(&coloured(ray, &[-1]), 6).unwrap();
        assert!(lhs.equiv(&rhs, 6));
    }
}
