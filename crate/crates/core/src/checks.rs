//! Self-check suites over a fixed cone corpus.
//!
//! Each suite exercises one structural identity of the library end to end
//! and reports per-case verdicts. The binary exposes them through `czv
//! check`; the integration tests assert that every suite passes.

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::birkhoff::BirkhoffSplit;
use crate::coalgebra::{coderivation, counit, degree, Coalgebra, ColouredLatticeCone};
use crate::cones::{
    chen_cone, make_lattice_cone, smooth_subdivide, split_at, LatticeCone, Subdivision,
};
use crate::error::Result;
use crate::exact::{rat_int, InnerProduct, LatticeBasis, Rat, RatVec};
use crate::germs::{
    divide_jet_by_form, h_jet, Denominators, LinearForm, MeromorphicJet, PiPlusStrategy,
};
use crate::renormalise::{
    chen_direction_valid, exp_integral, exp_sum_open, exp_sum_value, exp_sum_via_subdivision,
    mu_open_projection, numeric_oracle, zeta_ren, zeta_ren_univariate, CheckReport, ConeOracle,
    GermTarget, Scheme, ZetaRequest,
};

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// A pseudo-random unimodular matrix as a product of elementary shears.
fn random_unimodular(dim: usize, shears: usize, state: &mut u64) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..dim)
        .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..shears {
        let i = (splitmix64(state) % dim as u64) as usize;
        let mut j = (splitmix64(state) % (dim as u64 - 1)) as usize;
        if j >= i {
            j += 1;
        }
        let k = (splitmix64(state) % 2) as i64 + 1;
        let k = if splitmix64(state) % 2 == 0 { k } else { -k };
        for t in 0..dim {
            m[t][i] += k * m[t][j];
        }
    }
    m
}

fn cone_from_columns(m: &[Vec<i64>]) -> Result<LatticeCone> {
    let dim = m.len();
    let gens: Vec<RatVec> = (0..dim)
        .map(|j| RatVec::new((0..dim).map(|i| rat_int(m[i][j])).collect()))
        .collect();
    make_lattice_cone(&gens, None)
}

/// The named test corpus: Chen cones, orthants, two wedges of index 2 and
/// 3, and four seeded pseudo-random smooth cones.
pub fn corpus() -> Result<Vec<(String, LatticeCone)>> {
    let mut out = Vec::new();
    for k in 1..=3 {
        out.push((format!("chen:{k}"), chen_cone(k)?));
    }
    for d in 1..=3usize {
        let gens: Vec<RatVec> = (1..=d).map(RatVec::unit).collect();
        out.push((format!("orthant:{d}"), make_lattice_cone(&gens, None)?));
    }
    for k in [2i64, 3] {
        let gens = [RatVec::from_i64(&[1, 0]), RatVec::new(vec![Rat::one(), rat_int(k)])];
        out.push((format!("wedge:{k}"), make_lattice_cone(&gens, None)?));
    }
    let mut state = 0xC0FFEE_u64;
    for t in 0..2 {
        let m = random_unimodular(2, 3, &mut state);
        out.push((format!("random2d:{t}"), cone_from_columns(&m)?));
    }
    for t in 0..2 {
        let m = random_unimodular(3, 4, &mut state);
        out.push((format!("random3d:{t}"), cone_from_columns(&m)?));
    }
    Ok(out)
}

/// All colour vectors of total weight at most 2 in `dim` slots.
fn colours_up_to_two(dim: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0; dim]];
    for i in 0..dim {
        let mut c = vec![0; dim];
        c[i] = -1;
        out.push(c.clone());
        c[i] = -2;
        out.push(c);
        for j in (i + 1)..dim {
            let mut c = vec![0; dim];
            c[i] = -1;
            c[j] = -1;
            out.push(c);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Golden values
// ---------------------------------------------------------------------------

/// Renormalised values with known closed forms, through both schemes.
pub fn check_golden() -> Result<CheckReport> {
    let mut report = CheckReport::new("golden");
    let c2 = chen_cone(2)?;
    let v = zeta_ren(&ZetaRequest {
        cone: c2.clone(),
        colour: vec![0, 0],
        scheme: Scheme::Multivariate,
        order: None,
    })?;
    report.push(
        "zeta of the Chen 2-cone at colour (0,0), multivariate".into(),
        Some("3/8".into()),
        crate::exact::fmt_rat(&v),
        v == Rat::new(3.into(), 8.into()),
    );
    let directions: [&[i64]; 5] = [&[-2, -1], &[-3, -1], &[-5, -2], &[-7, -3], &[-4, -1]];
    let mut all = Vec::new();
    for a in directions {
        let direction = RatVec::from_i64(a);
        assert!(chen_direction_valid(&direction.coords_padded(2)));
        let v = zeta_ren_univariate(&ColouredLatticeCone::plain(c2.clone()), &direction, 6)?;
        all.push(v);
    }
    let consistent = all.iter().all(|v| *v == Rat::new(3.into(), 8.into()));
    report.push(
        "zeta of the Chen 2-cone along five admissible directions".into(),
        Some("3/8 for each".into()),
        format!("{:?}", all.iter().map(crate::exact::fmt_rat).collect::<Vec<_>>()),
        consistent,
    );
    let ray = zeta_ren(&ZetaRequest {
        cone: chen_cone(1)?,
        colour: vec![0],
        scheme: Scheme::Multivariate,
        order: None,
    })?;
    report.push(
        "zeta of the ray at colour 0".into(),
        Some("-1/2".into()),
        crate::exact::fmt_rat(&ray),
        ray == Rat::new((-1).into(), 2.into()),
    );
    let unit = zeta_ren(&ZetaRequest {
        cone: LatticeCone::zero(),
        colour: vec![],
        scheme: Scheme::Multivariate,
        order: None,
    })?;
    report.push(
        "zeta of the zero cone".into(),
        Some("1".into()),
        crate::exact::fmt_rat(&unit),
        unit.is_one(),
    );
    Ok(report)
}

// ---------------------------------------------------------------------------
// Projection display
// ---------------------------------------------------------------------------

/// The holomorphic projection of the Chen 2-cone sum against its
/// independently assembled three-term closed form, compared at order 6.
pub fn check_projection_display(n: i64) -> Result<CheckReport> {
    let mut report = CheckReport::new("projection-display");
    let lhs = exp_sum_open(&ColouredLatticeCone::plain(chen_cone(2)?), n)?
        .pi_plus(&InnerProduct::Standard)?;

    // -(h(e1+e2) - h(e2))/e1
    let h_sum = h_jet(n + 1).substitute_linear(&[vec![Rat::one(), Rat::one()]]);
    let h_e2 = h_jet(n + 1).substitute_linear(&[vec![Rat::zero(), Rat::one()]]);
    let e1 = LinearForm::from_integers(&[1])?;
    let quot1 = divide_jet_by_form(&h_sum.sub(&h_e2), &e1).expect("difference divisible");
    let term1 = MeromorphicJet::from_polynomial(quot1).neg();

    // -(h(e1) - h((e1-e2)/2))/(e1+e2)
    let h_e1 = h_jet(n + 1).substitute_linear(&[vec![Rat::one(), Rat::zero()]]);
    let h_mid = h_jet(n + 1).substitute_linear(&[vec![
        Rat::new(1.into(), 2.into()),
        Rat::new((-1).into(), 2.into()),
    ]]);
    let e12 = LinearForm::from_integers(&[1, 1])?;
    let quot2 = divide_jet_by_form(&h_e1.sub(&h_mid), &e12).expect("difference divisible");
    let term2 = MeromorphicJet::from_polynomial(quot2).neg();

    // h(e1) h(e1+e2)
    let term3 = MeromorphicJet::from_polynomial(h_e1.mul(&h_sum));

    let rhs = term1.add(&term2).add(&term3);
    let pass = lhs.equiv(&rhs, n);
    report.push(
        "projection of the Chen 2-cone sum vs the closed three-term form".into(),
        Some(format!("equal jets to order {n}")),
        if pass { "equal".into() } else { format!("lhs {lhs} rhs {rhs}") },
        pass,
    );
    Ok(report)
}

// ---------------------------------------------------------------------------
// Coproduct of the Chen 2-cone
// ---------------------------------------------------------------------------

/// The reduced coproduct of the Chen 2-cone, with exact lattices: the
/// transverse ray on the halved lattice tensor the diagonal ray.
pub fn check_coproduct_chen2() -> Result<CheckReport> {
    let mut report = CheckReport::new("coproduct");
    let coal = Coalgebra::new(InnerProduct::Standard);
    let x = ColouredLatticeCone::plain(chen_cone(2)?);
    let red = coal.reduced_coproduct(&x)?;

    let e2_ray = make_lattice_cone(&[RatVec::from_i64(&[0, 1])], None)?;
    let e1_ray = make_lattice_cone(&[RatVec::from_i64(&[1, 0])], None)?;
    let half = RatVec::new(vec![Rat::new(1.into(), 2.into()), Rat::new((-1).into(), 2.into())]);
    let t_ray = make_lattice_cone(
        &[half.clone()],
        Some(LatticeBasis::from_generators(&[half])),
    )?;
    let diag_ray = make_lattice_cone(&[RatVec::from_i64(&[1, 1])], None)?;

    let mut expected: BTreeMap<(ColouredLatticeCone, ColouredLatticeCone), Rat> = BTreeMap::new();
    expected.insert(
        (
            ColouredLatticeCone::plain(e2_ray),
            ColouredLatticeCone::plain(e1_ray),
        ),
        Rat::one(),
    );
    expected.insert(
        (
            ColouredLatticeCone::plain(t_ray),
            ColouredLatticeCone::plain(diag_ray),
        ),
        Rat::one(),
    );
    let got: BTreeMap<(ColouredLatticeCone, ColouredLatticeCone), Rat> = red
        .terms()
        .map(|(k, c)| (k.clone(), c.clone()))
        .collect();
    let pass = got == expected;
    report.push(
        "reduced coproduct of the Chen 2-cone".into(),
        Some("e2-ray (x) e1-ray + half-lattice antidiagonal ray (x) diagonal ray".into()),
        format!("{red}"),
        pass,
    );
    Ok(report)
}

// ---------------------------------------------------------------------------
// Euler-Maclaurin
// ---------------------------------------------------------------------------

/// S° = mu° * I as jets to order 8 on the whole corpus.
pub fn check_euler_maclaurin(n: i64) -> Result<CheckReport> {
    let mut report = CheckReport::new("euler-maclaurin");
    let q = InnerProduct::Standard;
    let oracle = ConeOracle::new(q.clone());
    let algebra = GermTarget::new(q.clone());
    for (name, lc) in corpus()? {
        let x = ColouredLatticeCone::plain(lc);
        let build = n + degree(&x) as i64;
        let s = exp_sum_open(&x, n)?;
        let conv = crate::birkhoff::convolution(
            &oracle,
            &algebra,
            |y| mu_open_projection(y, &q, build),
            |y| exp_integral(y.cone(), build),
            &x,
        )?;
        let pass = s.equiv(&conv, n);
        report.push(
            format!("sum equals counterterm convolved with integral on {name}"),
            Some(format!("equal jets to order {n}")),
            if pass { "equal".into() } else { "jets differ".into() },
            pass,
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Coalgebra axioms
// ---------------------------------------------------------------------------

type Pair = (ColouredLatticeCone, ColouredLatticeCone);
type PairMap = BTreeMap<Pair, Rat>;
type TripleMap = BTreeMap<(ColouredLatticeCone, ColouredLatticeCone, ColouredLatticeCone), Rat>;

fn clean_pairs(mut m: PairMap) -> PairMap {
    m.retain(|_, c| !c.is_zero());
    m
}

fn clean_triples(mut m: TripleMap) -> TripleMap {
    m.retain(|_, c| !c.is_zero());
    m
}

fn coassociative(coal: &Coalgebra, x: &ColouredLatticeCone) -> Result<bool> {
    let d = coal.coproduct_coloured(x)?;
    let mut left = TripleMap::new();
    let mut right = TripleMap::new();
    for ((l, r), c) in d.terms() {
        for ((a, b), c2) in coal.coproduct_coloured(l)?.terms() {
            *left
                .entry((a.clone(), b.clone(), r.clone()))
                .or_insert_with(Rat::zero) += c * c2;
        }
        for ((a, b), c2) in coal.coproduct_coloured(r)?.terms() {
            *right
                .entry((l.clone(), a.clone(), b.clone()))
                .or_insert_with(Rat::zero) += c * c2;
        }
    }
    Ok(clean_triples(left) == clean_triples(right))
}

fn counit_laws(coal: &Coalgebra, x: &ColouredLatticeCone) -> Result<bool> {
    let d = coal.coproduct_coloured(x)?;
    let mut left: BTreeMap<ColouredLatticeCone, Rat> = BTreeMap::new();
    let mut right: BTreeMap<ColouredLatticeCone, Rat> = BTreeMap::new();
    for ((l, r), c) in d.terms() {
        let e_l = counit(l);
        if !e_l.is_zero() {
            *left.entry(r.clone()).or_insert_with(Rat::zero) += c * e_l;
        }
        let e_r = counit(r);
        if !e_r.is_zero() {
            *right.entry(l.clone()).or_insert_with(Rat::zero) += c * e_r;
        }
    }
    left.retain(|_, c| !c.is_zero());
    right.retain(|_, c| !c.is_zero());
    let expected: BTreeMap<ColouredLatticeCone, Rat> =
        [(x.clone(), Rat::one())].into_iter().collect();
    Ok(left == expected && right == expected)
}

fn coderivation_compatible(coal: &Coalgebra, x: &ColouredLatticeCone, i: usize) -> Result<bool> {
    let lhs: PairMap = coal
        .coproduct_coloured(&coderivation(i, x))?
        .terms()
        .map(|(k, c)| (k.clone(), c.clone()))
        .collect();
    let mut rhs = PairMap::new();
    for ((l, r), c) in coal.coproduct_coloured(x)?.terms() {
        *rhs.entry((coderivation(i, l), r.clone()))
            .or_insert_with(Rat::zero) += c;
        *rhs.entry((l.clone(), coderivation(i, r)))
            .or_insert_with(Rat::zero) += c;
    }
    Ok(clean_pairs(lhs) == clean_pairs(rhs))
}

/// Coassociativity, both counit laws, compatibility of the colour
/// decrements with the coproduct, and counit annihilation of decrements,
/// over the corpus with colour weight at most 2.
pub fn check_coalgebra_axioms() -> Result<CheckReport> {
    let mut report = CheckReport::new("coalgebra-axioms");
    let coal = Coalgebra::new(InnerProduct::Standard);
    for (name, lc) in corpus()? {
        let dim = lc.ambient_dim();
        let mut ok = true;
        let mut variants = 0usize;
        for colour in colours_up_to_two(dim) {
            let x = ColouredLatticeCone::new(lc.clone(), &colour)?;
            variants += 1;
            ok &= coassociative(&coal, &x)?;
            ok &= counit_laws(&coal, &x)?;
            for i in 1..=dim {
                ok &= coderivation_compatible(&coal, &x, i)?;
                ok &= counit(&coderivation(i, &x)).is_zero();
            }
            if !ok {
                break;
            }
        }
        report.push(
            format!("coalgebra axioms on {name}"),
            Some("hold for all colour variants".into()),
            format!("{variants} colour variants checked"),
            ok,
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Differential intertwining
// ---------------------------------------------------------------------------

/// The sum map and both factorisation factors intertwine colour decrements
/// with partial derivatives on the corpus.
pub fn check_intertwining(n: i64) -> Result<CheckReport> {
    let mut report = CheckReport::new("intertwining");
    let q = InnerProduct::Standard;
    let oracle = ConeOracle::new(q.clone());
    let algebra = GermTarget::new(q.clone());
    for (name, lc) in corpus()? {
        let dim = lc.ambient_dim();
        let plain = ColouredLatticeCone::plain(lc.clone());

        // colour decrement against derivative on the sum
        let mut sum_ok = true;
        for i in 1..=dim {
            let lhs = exp_sum_open(&coderivation(i, &plain), n)?;
            let rhs = exp_sum_open(&plain, n + 1)?.derive(i);
            sum_ok &= lhs.equiv(&rhs, n);
        }
        report.push(
            format!("decrement/derivative intertwining of the sum on {name}"),
            Some("equal jets".into()),
            format!("{dim} directions checked"),
            sum_ok,
        );

        // both factors: coloured value vs derivative of the plain value
        let build = n + 2 + degree(&plain) as i64;
        let split = BirkhoffSplit::new(&oracle, &algebra, |y| exp_sum_open(y, build));
        let mut factors_ok = true;
        let mut checked = 0usize;
        for colour in colours_up_to_two(dim) {
            let weight: i64 = colour.iter().map(|s| s.abs()).sum();
            if weight == 0 {
                continue;
            }
            checked += 1;
            let x = ColouredLatticeCone::new(lc.clone(), &colour)?;
            let mut d1 = split.phi1(&plain)?;
            let mut d2 = split.phi2(&plain)?;
            for (i, &s) in colour.iter().enumerate() {
                for _ in 0..(-s) {
                    d1 = d1.derive(i + 1);
                    d2 = d2.derive(i + 1);
                }
            }
            factors_ok &= split.phi1(&x)?.equiv(&d1, n);
            factors_ok &= split.phi2(&x)?.equiv(&d2, n);
        }
        report.push(
            format!("coloured factors are derivatives of plain factors on {name}"),
            Some("equal jets".into()),
            format!("{checked} colours checked"),
            factors_ok,
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Subdivision invariance
// ---------------------------------------------------------------------------

/// S° of the quadrant through two different subdivisions and directly.
pub fn check_subdivision(n: i64) -> Result<CheckReport> {
    let mut report = CheckReport::new("subdivision");
    let quadrant = make_lattice_cone(&[RatVec::from_i64(&[1, 0]), RatVec::from_i64(&[0, 1])], None)?;
    let direct = exp_sum_open(&ColouredLatticeCone::plain(quadrant.clone()), n)?;
    let sub1 = split_at(&quadrant, &RatVec::from_i64(&[1, 1]))?;
    let via1 = exp_sum_via_subdivision(&sub1, n)?;
    let sub2 = split_at(&quadrant, &RatVec::from_i64(&[1, 2]))?;
    let via2 = exp_sum_via_subdivision(&sub2, n)?;
    let cases = [
        ("diagonal split vs direct", via1.equiv(&direct, n)),
        ("skew split (index-2 piece) vs direct", via2.equiv(&direct, n)),
        ("the two splits against each other", via1.equiv(&via2, n)),
    ];
    for (what, pass) in cases {
        report.push(
            format!("quadrant sum: {what}"),
            Some(format!("equal jets to order {n}")),
            if pass { "equal".into() } else { "jets differ".into() },
            pass,
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Smoothing
// ---------------------------------------------------------------------------

fn pieces_all_smooth(sub: &Subdivision) -> Result<bool> {
    for p in sub.pieces() {
        if !p.is_smooth() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smooth subdivision terminates with unimodular pieces everywhere, and in
/// the plane the piece count equals the index.
pub fn check_smoothing() -> Result<CheckReport> {
    let mut report = CheckReport::new("smoothing");
    for (name, lc) in corpus()? {
        let sub = smooth_subdivide(&lc)?;
        let pass = pieces_all_smooth(&sub)?;
        report.push(
            format!("smooth subdivision of {name}"),
            Some("all pieces unimodular".into()),
            format!("{} pieces", sub.pieces().len()),
            pass,
        );
    }
    for k in 1..=5i64 {
        let lc = make_lattice_cone(
            &[RatVec::from_i64(&[1, 0]), RatVec::new(vec![Rat::one(), rat_int(k)])],
            None,
        )?;
        let index = lc.index()?;
        let sub = smooth_subdivide(&lc)?;
        let pass = pieces_all_smooth(&sub)? && sub.pieces().len() == k as usize;
        report.push(
            format!("plane cone of index {index}"),
            Some(format!("{k} unimodular pieces")),
            format!("{} pieces", sub.pieces().len()),
            pass,
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Numeric soundness
// ---------------------------------------------------------------------------

/// The closed-form evaluation of the Chen 2-cone sum against the truncated
/// lattice sum, inside the convergence region.
pub fn check_numeric() -> Result<CheckReport> {
    let mut report = CheckReport::new("numeric");
    let x = ColouredLatticeCone::plain(chen_cone(2)?);
    let eps = RatVec::new(vec![Rat::new((-1).into(), 2.into()), Rat::new((-1).into(), 3.into())]);
    let (oracle, tail) = numeric_oracle(&x, &eps, 200)?;
    let (exact, herr) = exp_sum_value(&x, &eps, 30)?;
    let exact_f = exact.to_f64().unwrap_or(f64::NAN);
    let rel = ((oracle - exact_f) / exact_f).abs();
    report.push(
        "Chen 2-cone sum at (-1/2, -1/3): closed form vs lattice sum".into(),
        Some("relative error < 1e-6".into()),
        format!("closed {exact_f:.9}, lattice {oracle:.9}, relative error {rel:.3e}"),
        rel < 1e-6 && rel.is_finite(),
    );
    report.push(
        "difference within the rigorous bounds".into(),
        Some(format!("|diff| <= {:+.3e}", tail + herr)),
        format!("{:+.3e}", (oracle - exact_f).abs()),
        (oracle - exact_f).abs() <= tail + herr + 1e-12,
    );
    let ray = ColouredLatticeCone::plain(chen_cone(1)?);
    let eps1 = RatVec::from_i64(&[-1]);
    let (v, b) = numeric_oracle(&ray, &eps1, 60)?;
    let truth = 1.0 / (std::f64::consts::E - 1.0);
    report.push(
        "ray sum at -1 against 1/(e-1)".into(),
        Some(format!("{truth:.12}")),
        format!("{v:.12} (tail bound {b:.1e})"),
        (v - truth).abs() <= b + 1e-12,
    );
    Ok(report)
}

// ---------------------------------------------------------------------------
// Projection well-definedness
// ---------------------------------------------------------------------------

fn random_germ(state: &mut u64, order: i64) -> Result<MeromorphicJet> {
    let dim = 2 + (splitmix64(state) % 2) as usize;
    let k = 1 + (splitmix64(state) % 3) as usize;
    let mut g = MeromorphicJet::one();
    for _ in 0..k {
        let mut coeffs = vec![Rat::zero(); dim];
        loop {
            for c in coeffs.iter_mut() {
                *c = rat_int((splitmix64(state) % 5) as i64 - 2);
            }
            if coeffs.iter().any(|c| !c.is_zero()) {
                break;
            }
        }
        g = g.mul(&MeromorphicJet::pole_factor(&coeffs, order + k as i64)?);
    }
    Ok(g)
}

/// The holomorphic projection does not depend on internal basis choices,
/// is idempotent, and annihilates its own complement.
pub fn check_pi_plus() -> Result<CheckReport> {
    let mut report = CheckReport::new("pi-plus");
    let q = InnerProduct::Standard;
    let mut state = 0xDECAF_u64;
    let order = 3;
    let mut stable = 0usize;
    let mut idempotent = 0usize;
    let mut annihilated = 0usize;
    let total = 50usize;
    for _ in 0..total {
        let g = random_germ(&mut state, order)?;
        let canonical = g.pi_plus(&q)?;
        if [1u64, 7, 99].iter().all(|s| {
            g.pi_plus_with(&q, &PiPlusStrategy::Seeded(*s))
                .map(|v| v == canonical)
                .unwrap_or(false)
        }) {
            stable += 1;
        }
        if canonical.pi_plus(&q)? == canonical {
            idempotent += 1;
        }
        let minus = g.sub(&canonical);
        if minus.pi_plus(&q)?.is_zero() {
            annihilated += 1;
        }
    }
    report.push(
        "projection invariant under seeded basis shuffles".into(),
        Some(format!("{total} of {total}")),
        format!("{stable} of {total}"),
        stable == total,
    );
    report.push(
        "projection idempotent".into(),
        Some(format!("{total} of {total}")),
        format!("{idempotent} of {total}"),
        idempotent == total,
    );
    report.push(
        "projection annihilates the complement".into(),
        Some(format!("{total} of {total}")),
        format!("{annihilated} of {total}"),
        annihilated == total,
    );
    Ok(report)
}

// ---------------------------------------------------------------------------
// Non-commutation counterexample
// ---------------------------------------------------------------------------

/// Restricting to a ray and projecting do not commute on e1/e2.
pub fn check_counterexample() -> Result<CheckReport> {
    let mut report = CheckReport::new("counterexample");
    let a = RatVec::from_i64(&[-2, -1]);
    let mut d = Denominators::new();
    d.insert(LinearForm::from_integers(&[0, 1])?, 1);
    let f = MeromorphicJet::from_term(d, LinearForm::from_integers(&[1])?.as_jet());
    let restrict_then_project = f.restrict_direction(&a)?.split().0.coeff(0);
    let project_then_restrict = f.pi_plus(&InnerProduct::Standard)?;
    report.push(
        "restrict e1/e2 to the direction (-2,-1), then drop the pole".into(),
        Some("2".into()),
        crate::exact::fmt_rat(&restrict_then_project),
        restrict_then_project == rat_int(2),
    );
    report.push(
        "project e1/e2 first".into(),
        Some("0".into()),
        format!("{project_then_restrict}"),
        project_then_restrict.is_zero(),
    );
    report.push(
        "the two orders disagree".into(),
        None,
        format!(
            "{} vs 0",
            crate::exact::fmt_rat(&restrict_then_project)
        ),
        !restrict_then_project.is_zero(),
    );
    Ok(report)
}

/// Every suite at its default working order, in a stable order.
pub fn run_all() -> Result<Vec<CheckReport>> {
    Ok(vec![
        check_golden()?,
        check_projection_display(6)?,
        check_coproduct_chen2()?,
        check_euler_maclaurin(8)?,
        check_coalgebra_axioms()?,
        check_intertwining(3)?,
        check_subdivision(8)?,
        check_smoothing()?,
        check_numeric()?,
        check_pi_plus()?,
        check_counterexample()?,
    ])
}

/// Runs one suite by name. `order` overrides the working order of the
/// jet-comparison suites and is ignored by the others.
pub fn run_suite(name: &str, order: Option<i64>) -> Result<CheckReport> {
    if let Some(n) = order {
        if !(0..=24).contains(&n) {
            return Err(crate::error::Error::invalid(format!(
                "working order {n} out of range (0..=24)"
            )));
        }
    }
    match name {
        "golden" => check_golden(),
        "projection-display" => check_projection_display(order.unwrap_or(6)),
        "coproduct" => check_coproduct_chen2(),
        "euler-maclaurin" => check_euler_maclaurin(order.unwrap_or(8)),
        "coalgebra-axioms" => check_coalgebra_axioms(),
        "intertwining" => check_intertwining(order.unwrap_or(3)),
        "subdivision" => check_subdivision(order.unwrap_or(8)),
        "smoothing" => check_smoothing(),
        "numeric" => check_numeric(),
        "pi-plus" => check_pi_plus(),
        "counterexample" => check_counterexample(),
        _ => Err(crate::error::Error::invalid(format!(
            "unknown check suite: {name}; known suites: golden, projection-display, coproduct, \
             euler-maclaurin, coalgebra-axioms, intertwining, subdivision, smoothing, numeric, \
             pi-plus, counterexample"
        ))),
    }
}
