//! Exact rational linear algebra and lattice arithmetic.
//!
//! Everything is arbitrary precision and deterministic: vectors are rational
//! with padding-invariant equality, lattices are stored by a unique canonical
//! basis, and feasibility questions are settled by an exact phase-one simplex
//! rather than floating point.
//!
//! Conventions:
//! - vectors live in the increasing union of the spaces R^k; trailing zeros
//!   are trimmed on construction so equality, ordering and hashing are
//!   syntactic;
//! - a lattice basis is canonicalised to a denominator-cleared, lower
//!   triangular, positive-pivot normal form, so two descriptions of the same
//!   lattice compare equal;
//! - the inner product defaults to the standard dot product and is passed
//!   explicitly wherever it matters.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`; intended for literals.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Parse "p/q" or "p" (optional sign, arbitrary precision).
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let mk = |p: &str| -> Result<Int> {
        p.parse::<Int>()
            .map_err(|_| Error::invalid(format!("not an integer: {p:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let num = mk(p)?;
            let den = mk(q)?;
            if den.is_zero() {
                return Err(Error::invalid(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(num, den))
        }
        None => Ok(Rat::from_integer(mk(s)?)),
    }
}

/// Render in lowest terms: "p/q", or "p" when the denominator is 1.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_pow(r: &Rat, e: u32) -> Rat {
    Rat::new(r.numer().pow(e), r.denom().pow(e))
}

// ---------------------------------------------------------------------------
// Vectors
// ---------------------------------------------------------------------------

/// A rational vector in the filtered space ∪_k R^k. Trailing zeros are
/// trimmed, so derived equality and ordering are padding-invariant.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct RatVec {
    coords: Vec<Rat>,
}

impl RatVec {
    pub fn new(mut coords: Vec<Rat>) -> Self {
        while coords.last().map_or(false, |c| c.is_zero()) {
            coords.pop();
        }
        RatVec { coords }
    }

    pub fn zero() -> Self {
        RatVec { coords: vec![] }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        RatVec::new(coords.iter().map(|&c| rat_int(c)).collect())
    }

    /// Standard basis vector e_i (1-based).
    pub fn unit(i: usize) -> Self {
        assert!(i >= 1, "unit vectors are 1-based");
        let mut coords = vec![Rat::zero(); i];
        coords[i - 1] = Rat::one();
        RatVec { coords }
    }

    /// Minimal ambient dimension: index of the last nonzero coordinate.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coordinate `i` (0-based); zero beyond the stored length.
    pub fn coord(&self, i: usize) -> Rat {
        self.coords.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coords_padded(&self, k: usize) -> Vec<Rat> {
        let mut v = self.coords.clone();
        v.resize(k.max(v.len()), Rat::zero());
        v
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn add(&self, other: &RatVec) -> RatVec {
        let k = self.dim().max(other.dim());
        let a = self.coords_padded(k);
        let b = other.coords_padded(k);
        RatVec::new(a.iter().zip(&b).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, other: &RatVec) -> RatVec {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatVec {
        RatVec::new(self.coords.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &Rat) -> RatVec {
        if c.is_zero() {
            return RatVec::zero();
        }
        RatVec::new(self.coords.iter().map(|x| x * c).collect())
    }

    /// Standard dot product (pads to the common dimension).
    pub fn dot(&self, other: &RatVec) -> Rat {
        let k = self.dim().min(other.dim());
        let mut acc = Rat::zero();
        for i in 0..k {
            acc += &self.coords[i] * &other.coords[i];
        }
        acc
    }

    /// True on the ray spanned by `other` with a positive factor.
    pub fn is_positive_multiple_of(&self, other: &RatVec) -> bool {
        if self.is_zero() || other.is_zero() {
            return false;
        }
        let k = self.dim().max(other.dim());
        let mut ratio: Option<Rat> = None;
        for i in 0..k {
            let a = self.coord(i);
            let b = other.coord(i);
            match (a.is_zero(), b.is_zero()) {
                (true, true) => continue,
                (true, false) | (false, true) => return false,
                (false, false) => {
                    let r = a / b;
                    if !r.is_positive() {
                        return false;
                    }
                    match &ratio {
                        None => ratio = Some(r),
                        Some(prev) => {
                            if *prev != r {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        ratio.is_some()
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(fmt_rat).collect();
        write!(f, "({})", parts.join(", "))
    }
}

// ---------------------------------------------------------------------------
// Inner products
// ---------------------------------------------------------------------------

/// A compatible family of symmetric positive definite rational forms, one per
/// dimension. `Standard` is the dot product; `Matrix` replaces the form on
/// the first `m` coordinates and extends by the dot product beyond, which
/// keeps the family compatible with the inclusions R^k ⊂ R^{k+1}.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum InnerProduct {
    Standard,
    Matrix(Vec<Vec<Rat>>),
}

impl InnerProduct {
    /// Validated matrix form: square, symmetric, positive definite.
    pub fn matrix(m: Vec<Vec<Rat>>) -> Result<InnerProduct> {
        let n = m.len();
        if m.iter().any(|row| row.len() != n) {
            return Err(Error::invalid("inner product matrix must be square"));
        }
        for i in 0..n {
            for j in 0..n {
                if m[i][j] != m[j][i] {
                    return Err(Error::invalid("inner product matrix must be symmetric"));
                }
            }
        }
        // Sylvester: all leading principal minors positive.
        for k in 1..=n {
            let block: Vec<Vec<Rat>> = m[..k].iter().map(|row| row[..k].to_vec()).collect();
            if !mat::det(&block).is_positive() {
                return Err(Error::invalid("inner product matrix must be positive definite"));
            }
        }
        Ok(InnerProduct::Matrix(m))
    }

    pub fn apply(&self, u: &RatVec, v: &RatVec) -> Rat {
        match self {
            InnerProduct::Standard => u.dot(v),
            InnerProduct::Matrix(m) => {
                let k = u.dim().max(v.dim()).max(m.len());
                let a = u.coords_padded(k);
                let b = v.coords_padded(k);
                let n = m.len();
                let mut acc = Rat::zero();
                for i in 0..k {
                    for j in 0..k {
                        if a[i].is_zero() || b[j].is_zero() {
                            continue;
                        }
                        let q = if i < n && j < n {
                            m[i][j].clone()
                        } else if i == j {
                            Rat::one()
                        } else {
                            Rat::zero()
                        };
                        if !q.is_zero() {
                            acc += &a[i] * &b[j] * q;
                        }
                    }
                }
                acc
            }
        }
    }
}

/// Symmetric bilinear value of `u` and `v` under `q`.
pub fn inner_product(u: &RatVec, v: &RatVec, q: &InnerProduct) -> Rat {
    q.apply(u, v)
}

/// Orthogonal projection of `v` onto span(f)^⊥ along span(f), w.r.t. `q`.
/// The empty family is the identity.
pub fn orthogonal_project(v: &RatVec, f: &[RatVec], q: &InnerProduct) -> RatVec {
    let basis = independent_subset(f);
    if basis.is_empty() {
        return v.clone();
    }
    let n = basis.len();
    // Gram system: the Gram matrix of an independent family is invertible
    // because q is positive definite.
    let mut gram = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            gram[i][j] = q.apply(&basis[i], &basis[j]);
        }
    }
    let rhs: Vec<Rat> = basis.iter().map(|b| q.apply(b, v)).collect();
    let alpha = mat::solve(&gram, &rhs).expect("Gram matrix is invertible");
    let mut w = v.clone();
    for (a, b) in alpha.iter().zip(&basis) {
        w = w.sub(&b.scale(a));
    }
    w
}

/// Matrix (rows) of the map x ↦ orthogonal_project(x, f, q) on R^ambient.
pub fn projection_matrix(f: &[RatVec], q: &InnerProduct, ambient: usize) -> Vec<Vec<Rat>> {
    let mut rows = vec![vec![Rat::zero(); ambient]; ambient];
    for i in 0..ambient {
        let img = orthogonal_project(&RatVec::unit(i + 1), f, q);
        let col = img.coords_padded(ambient);
        for (t, val) in col.into_iter().enumerate() {
            rows[t][i] = val;
        }
    }
    rows
}

/// First maximal linearly independent subfamily, in the given order.
pub fn independent_subset(vs: &[RatVec]) -> Vec<RatVec> {
    let mut chosen: Vec<RatVec> = Vec::new();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let k = vs.iter().map(|v| v.dim()).max().unwrap_or(0);
    for v in vs {
        if v.is_zero() {
            continue;
        }
        rows.push(v.coords_padded(k));
        if mat::rank(&rows) == rows.len() {
            chosen.push(v.clone());
        } else {
            rows.pop();
        }
    }
    chosen
}

pub fn rank_of(vs: &[RatVec]) -> usize {
    let k = vs.iter().map(|v| v.dim()).max().unwrap_or(0);
    let rows: Vec<Vec<Rat>> = vs.iter().map(|v| v.coords_padded(k)).collect();
    mat::rank(&rows)
}

/// True iff `v` lies in the linear span of `vs`.
pub fn in_span(v: &RatVec, vs: &[RatVec]) -> bool {
    if v.is_zero() {
        return true;
    }
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let k = vs.iter().map(|u| u.dim()).max().unwrap_or(0).max(v.dim());
    for u in vs {
        rows.push(u.coords_padded(k));
    }
    let r = mat::rank(&rows);
    rows.push(v.coords_padded(k));
    mat::rank(&rows) == r
}

// ---------------------------------------------------------------------------
// Lattices
// ---------------------------------------------------------------------------

/// A finitely generated subgroup of some Q^k, stored by its canonical basis:
/// clear denominators, bring the integer row span to Hermite normal form in
/// the lower-triangular, positive-pivot convention, then scale back. Equality
/// of lattices is therefore syntactic equality of bases.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct LatticeBasis {
    basis: Vec<RatVec>,
}

impl LatticeBasis {
    /// Canonical basis of the subgroup generated by `gens` (any finite
    /// family of rational vectors; dependence and zero vectors are fine).
    pub fn from_generators(gens: &[RatVec]) -> LatticeBasis {
        let nonzero: Vec<&RatVec> = gens.iter().filter(|g| !g.is_zero()).collect();
        if nonzero.is_empty() {
            return LatticeBasis { basis: vec![] };
        }
        let k = nonzero.iter().map(|g| g.dim()).max().unwrap();
        let mut den = Int::one();
        for g in &nonzero {
            for c in g.coords() {
                den = den.lcm(c.denom());
            }
        }
        let rows: Vec<Vec<Int>> = nonzero
            .iter()
            .map(|g| {
                g.coords_padded(k)
                    .iter()
                    .map(|c| {
                        let scaled = c * Rat::from_integer(den.clone());
                        debug_assert!(scaled.is_integer());
                        scaled.to_integer()
                    })
                    .rev()
                    .collect()
            })
            .collect();
        let h = int_hnf_rows(rows);
        let d = Rat::from_integer(den);
        let mut basis: Vec<RatVec> = h
            .into_iter()
            .map(|row| {
                RatVec::new(
                    row.into_iter()
                        .rev()
                        .map(|c| Rat::from_integer(c) / d.clone())
                        .collect(),
                )
            })
            .collect();
        basis.reverse();
        LatticeBasis { basis }
    }

    /// Z^k.
    pub fn standard(k: usize) -> LatticeBasis {
        LatticeBasis::from_generators(&(1..=k).map(RatVec::unit).collect::<Vec<_>>())
    }

    pub fn empty() -> LatticeBasis {
        LatticeBasis { basis: vec![] }
    }

    pub fn basis(&self) -> &[RatVec] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.iter().map(|b| b.dim()).max().unwrap_or(0)
    }

    /// Coordinates of `v` in this basis, if `v` lies in the rational span.
    pub fn coords_of(&self, v: &RatVec) -> Option<Vec<Rat>> {
        if self.basis.is_empty() {
            return if v.is_zero() { Some(vec![]) } else { None };
        }
        let k = self.ambient_dim().max(v.dim());
        // rows indexed by ambient coordinate, columns by basis element
        let mut a = vec![vec![Rat::zero(); self.basis.len()]; k];
        for (j, b) in self.basis.iter().enumerate() {
            for (t, c) in b.coords_padded(k).into_iter().enumerate() {
                a[t][j] = c;
            }
        }
        let b = v.coords_padded(k);
        mat::solve_exact(&a, &b)
    }

    /// Group membership: rational-span membership with integer coordinates.
    pub fn contains(&self, v: &RatVec) -> bool {
        if v.is_zero() {
            return true;
        }
        match self.coords_of(v) {
            Some(c) => c.iter().all(|x| x.is_integer()),
            None => false,
        }
    }

    pub fn span_contains(&self, v: &RatVec) -> bool {
        self.coords_of(v).is_some()
    }
}

impl fmt::Display for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.basis.iter().map(|b| b.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Canonical basis of Λ ∩ span(w).
pub fn lattice_intersection(lam: &LatticeBasis, w: &[RatVec]) -> LatticeBasis {
    if lam.is_empty() {
        return LatticeBasis::empty();
    }
    let r = lam.rank();
    let k = lam
        .ambient_dim()
        .max(w.iter().map(|v| v.dim()).max().unwrap_or(0));
    // span(w) = common kernel of its annihilator functionals
    let w_rows: Vec<Vec<Rat>> = w.iter().map(|v| v.coords_padded(k)).collect();
    let ann = mat::kernel(&w_rows, k);
    if ann.is_empty() {
        // w spans everything the lattice can see
        return lam.clone();
    }
    // condition on integer coordinates c: for every annihilator n,
    // Σ_i c_i <n, b_i> = 0
    let mut cond: Vec<Vec<Int>> = Vec::new();
    for n in &ann {
        let nv = RatVec::new(n.clone());
        let row_rat: Vec<Rat> = lam.basis().iter().map(|b| nv.dot(b)).collect();
        let mut den = Int::one();
        for c in &row_rat {
            den = den.lcm(c.denom());
        }
        let row: Vec<Int> = row_rat
            .iter()
            .map(|c| (c * Rat::from_integer(den.clone())).to_integer())
            .collect();
        if row.iter().any(|x| !x.is_zero()) {
            cond.push(row);
        }
    }
    if cond.is_empty() {
        return lam.clone();
    }
    let ker = int_kernel(&cond, r);
    let gens: Vec<RatVec> = ker
        .into_iter()
        .map(|c| {
            let mut v = RatVec::zero();
            for (ci, b) in c.iter().zip(lam.basis()) {
                v = v.add(&b.scale(&Rat::from_integer(ci.clone())));
            }
            v
        })
        .collect();
    LatticeBasis::from_generators(&gens)
}

/// Canonical basis of the image of Λ under the linear map with the given
/// rows (output coordinate t = Σ_i rows[t][i] · x_i).
pub fn lattice_image(lam: &LatticeBasis, rows: &[Vec<Rat>]) -> LatticeBasis {
    let images: Vec<RatVec> = lam
        .basis()
        .iter()
        .map(|b| apply_matrix(rows, b))
        .collect();
    LatticeBasis::from_generators(&images)
}

pub fn apply_matrix(rows: &[Vec<Rat>], v: &RatVec) -> RatVec {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let x = v.coords_padded(cols);
    RatVec::new(
        rows.iter()
            .map(|row| {
                let mut acc = Rat::zero();
                for (a, b) in row.iter().zip(&x) {
                    acc += a * b;
                }
                acc
            })
            .collect(),
    )
}

/// |det| of the coordinate matrix of `vectors` in the basis of Λ. Requires
/// exactly rank(Λ) vectors, all in Λ, linearly independent.
pub fn lattice_index(vectors: &[RatVec], lam: &LatticeBasis) -> Result<Int> {
    let r = lam.rank();
    if vectors.len() != r {
        return Err(Error::invalid(format!(
            "lattice index needs {} vectors, got {}",
            r,
            vectors.len()
        )));
    }
    if r == 0 {
        return Ok(Int::one());
    }
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(r);
    for v in vectors {
        let c = lam
            .coords_of(v)
            .ok_or_else(|| Error::invalid(format!("{v} is not in the lattice span")))?;
        if c.iter().any(|x| !x.is_integer()) {
            return Err(Error::invalid(format!("{v} is not a lattice point")));
        }
        rows.push(c);
    }
    let d = mat::det(&rows);
    if d.is_zero() {
        return Err(Error::invalid("index of a linearly dependent family"));
    }
    debug_assert!(d.is_integer());
    Ok(d.to_integer().abs())
}

/// The positive multiple v' of `v` that lies in Λ and admits no r ∈ (0,1)
/// with r·v' ∈ Λ. Requires v ∈ span(Λ), v ≠ 0.
pub fn primitive_representative(v: &RatVec, lam: &LatticeBasis) -> Result<RatVec> {
    if v.is_zero() {
        return Err(Error::invalid("primitive representative of the zero vector"));
    }
    let c = lam
        .coords_of(v)
        .ok_or_else(|| Error::invalid(format!("{v} is not in the lattice span")))?;
    let mut den = Int::one();
    for x in &c {
        den = den.lcm(x.denom());
    }
    let ints: Vec<Int> = c
        .iter()
        .map(|x| (x * Rat::from_integer(den.clone())).to_integer())
        .collect();
    let mut g = Int::zero();
    for u in &ints {
        g = g.gcd(u);
    }
    debug_assert!(g.is_positive());
    // the multiples t with t·v ∈ Λ form the group (den/g)·Z
    let t0 = Rat::new(den, g);
    Ok(v.scale(&t0))
}

// ---------------------------------------------------------------------------
// Integer normal forms
// ---------------------------------------------------------------------------

/// Row-style Hermite normal form of the row span: strictly increasing pivot
/// columns (first nonzero of each row), positive pivots, entries above each
/// pivot reduced into [0, pivot). Unique for a given row span.
pub fn int_hnf_rows(mut rows: Vec<Vec<Int>>) -> Vec<Vec<Int>> {
    if rows.is_empty() {
        return rows;
    }
    let ncols = rows.iter().map(|r| r.len()).max().unwrap();
    for r in &mut rows {
        r.resize(ncols, Int::zero());
    }
    let mut pivot_row = 0usize;
    for col in 0..ncols {
        loop {
            let nz: Vec<usize> = (pivot_row..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .collect();
            match nz.len() {
                0 => break,
                1 => {
                    rows.swap(pivot_row, nz[0]);
                    if rows[pivot_row][col].is_negative() {
                        for x in &mut rows[pivot_row] {
                            *x = -x.clone();
                        }
                    }
                    let pivot = rows[pivot_row][col].clone();
                    for r in 0..pivot_row {
                        let q = rows[r][col].div_floor(&pivot);
                        if !q.is_zero() {
                            for t in 0..ncols {
                                let sub = &q * &rows[pivot_row][t];
                                rows[r][t] -= sub;
                            }
                        }
                    }
                    pivot_row += 1;
                    break;
                }
                _ => {
                    let (i, j) = (nz[0], nz[1]);
                    let a = rows[i][col].clone();
                    let b = rows[j][col].clone();
                    let e = a.extended_gcd(&b);
                    let (g, x, y) = (e.gcd, e.x, e.y);
                    let ra = rows[i].clone();
                    let rb = rows[j].clone();
                    let ca = -(&b / &g);
                    let cb = &a / &g;
                    for t in 0..ncols {
                        rows[i][t] = &x * &ra[t] + &y * &rb[t];
                        rows[j][t] = &ca * &ra[t] + &cb * &rb[t];
                    }
                    debug_assert_eq!(rows[i][col], g);
                    debug_assert!(rows[j][col].is_zero());
                }
            }
        }
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivot_row);
    rows
}

/// Basis of the integer kernel {x ∈ Z^n : M x = 0}, via unimodular column
/// reduction. `n` is the number of columns (rows may be ragged short).
pub fn int_kernel(m: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    let nrows = m.len();
    // columns of M and of the unimodular transform U
    let mut cols: Vec<Vec<Int>> = (0..n)
        .map(|j| {
            (0..nrows)
                .map(|i| m[i].get(j).cloned().unwrap_or_else(Int::zero))
                .collect()
        })
        .collect();
    let mut u: Vec<Vec<Int>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    for r in 0..nrows {
        loop {
            let nz: Vec<usize> = active
                .iter()
                .copied()
                .filter(|&j| !cols[j][r].is_zero())
                .collect();
            match nz.len() {
                0 => break,
                1 => {
                    active.retain(|&j| j != nz[0]);
                    break;
                }
                _ => {
                    let (j1, j2) = (nz[0], nz[1]);
                    let a = cols[j1][r].clone();
                    let b = cols[j2][r].clone();
                    let e = a.extended_gcd(&b);
                    let (g, x, y) = (e.gcd, e.x, e.y);
                    let ca = -(&b / &g);
                    let cb = &a / &g;
                    let (c1, c2) = (cols[j1].clone(), cols[j2].clone());
                    let (u1, u2) = (u[j1].clone(), u[j2].clone());
                    for t in 0..nrows {
                        cols[j1][t] = &x * &c1[t] + &y * &c2[t];
                        cols[j2][t] = &ca * &c1[t] + &cb * &c2[t];
                    }
                    for t in 0..n {
                        u[j1][t] = &x * &u1[t] + &y * &u2[t];
                        u[j2][t] = &ca * &u1[t] + &cb * &u2[t];
                    }
                    debug_assert!(cols[j2][r].is_zero());
                }
            }
        }
    }
    active.into_iter().map(|j| u[j].clone()).collect()
}

// ---------------------------------------------------------------------------
// Rational matrix kit
// ---------------------------------------------------------------------------

pub(crate) mod mat {
    use super::*;

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(m: &mut Vec<Vec<Rat>>) -> Vec<usize> {
        let nrows = m.len();
        let ncols = m.iter().map(|r| r.len()).max().unwrap_or(0);
        for r in m.iter_mut() {
            r.resize(ncols, Rat::zero());
        }
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..ncols {
            if row >= nrows {
                break;
            }
            let Some(p) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let inv = m[row][col].clone();
            for x in &mut m[row] {
                *x = &*x / &inv;
            }
            for r in 0..nrows {
                if r != row && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in 0..ncols {
                        let sub = &f * &m[row][c];
                        m[r][c] -= sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(m: &[Vec<Rat>]) -> usize {
        let mut c = m.to_vec();
        rref(&mut c).len()
    }

    /// One solution of A x = b (free variables set to zero), or None.
    pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
        let nrows = a.len();
        let ncols = a.iter().map(|r| r.len()).max().unwrap_or(0);
        let mut aug: Vec<Vec<Rat>> = (0..nrows)
            .map(|i| {
                let mut row = a[i].clone();
                row.resize(ncols, Rat::zero());
                row.push(b[i].clone());
                row
            })
            .collect();
        let pivots = rref(&mut aug);
        if pivots.contains(&ncols) {
            return None;
        }
        let mut x = vec![Rat::zero(); ncols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = aug[row][ncols].clone();
        }
        Some(x)
    }

    /// Like `solve` but demands the solution be unique (no free variables
    /// among columns that matter); used for coordinates in a basis.
    pub fn solve_exact(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
        // columns here are always independent at call sites, so any solution
        // is the unique one
        solve(a, b)
    }

    /// Basis of {x ∈ Q^n : M x = 0}; `n` = column count.
    pub fn kernel(m: &[Vec<Rat>], n: usize) -> Vec<Vec<Rat>> {
        let mut c: Vec<Vec<Rat>> = m
            .iter()
            .map(|r| {
                let mut row = r.clone();
                row.resize(n, Rat::zero());
                row
            })
            .collect();
        let pivots = rref(&mut c);
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..n).filter(|c| !pivot_set.contains(c)).collect();
        free.into_iter()
            .map(|fcol| {
                let mut v = vec![Rat::zero(); n];
                v[fcol] = Rat::one();
                for (row, &pcol) in pivots.iter().enumerate() {
                    v[pcol] = -c[row][fcol].clone();
                }
                v
            })
            .collect()
    }

    pub fn det(a: &[Vec<Rat>]) -> Rat {
        let n = a.len();
        if n == 0 {
            return Rat::one();
        }
        let mut m = a.to_vec();
        for r in &mut m {
            r.resize(n, Rat::zero());
        }
        let mut sign = Rat::one();
        let mut acc = Rat::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Rat::zero();
            };
            if p != col {
                m.swap(col, p);
                sign = -sign;
            }
            let pivot = m[col][col].clone();
            acc *= &pivot;
            for r in col + 1..n {
                if !m[r][col].is_zero() {
                    let f = &m[r][col] / &pivot;
                    for c in col..n {
                        let sub = &f * &m[col][c];
                        m[r][c] -= sub;
                    }
                }
            }
        }
        acc * sign
    }

    pub fn invert(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
        let n = a.len();
        let mut aug: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut row = a[i].clone();
                row.resize(n, Rat::zero());
                for j in 0..n {
                    row.push(if i == j { Rat::one() } else { Rat::zero() });
                }
                row
            })
            .collect();
        let pivots = rref(&mut aug);
        if pivots.len() != n {
            return None;
        }
        Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
    }
}

// ---------------------------------------------------------------------------
// Exact feasibility (phase-one simplex, Bland's rule)
// ---------------------------------------------------------------------------

/// A point of {x ≥ 0 : A x = b}, or None if the system is infeasible.
/// Exact rational simplex; Bland's rule guarantees termination.
pub fn nonneg_solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let m = a.len();
    let n = a.iter().map(|r| r.len()).max().unwrap_or(0);
    // tableau rows: [A | I | b], artificial basis, b made nonnegative
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<Rat> = a[i].clone();
        row.resize(n, Rat::zero());
        let flip = b[i].is_negative();
        if flip {
            for x in &mut row {
                *x = -x.clone();
            }
        }
        for j in 0..m {
            row.push(if j == i { Rat::one() } else { Rat::zero() });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        t.push(row);
    }
    let cols = n + m;
    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        // reduced costs for minimising the sum of artificials:
        // cost_j = Σ_{i: basis[i] artificial} t[i][j] − (1 if j artificial)
        let mut entering = None;
        for j in 0..cols {
            if basis.contains(&j) {
                continue;
            }
            let mut z = Rat::zero();
            for i in 0..m {
                if basis[i] >= n {
                    z += &t[i][j];
                }
            }
            if j >= n {
                z -= Rat::one();
            }
            if z.is_positive() {
                entering = Some(j);
                break; // Bland: smallest eligible index
            }
        }
        let Some(j) = entering else { break };
        // ratio test, ties by smallest basis variable
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if t[i][j].is_positive() {
                let ratio = &t[i][cols] / &t[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && basis[i] < basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((li, _)) = leave else {
            // unbounded phase-one cannot happen (objective bounded below by 0)
            return None;
        };
        // pivot
        let pivot = t[li][j].clone();
        for x in &mut t[li] {
            *x = &*x / &pivot;
        }
        for i in 0..m {
            if i != li && !t[i][j].is_zero() {
                let f = t[i][j].clone();
                for c in 0..=cols {
                    let sub = &f * &t[li][c];
                    t[i][c] -= sub;
                }
            }
        }
        basis[li] = j;
    }
    // feasible iff every artificial in the basis sits at level zero
    let mut x = vec![Rat::zero(); n];
    for i in 0..m {
        if basis[i] >= n {
            if !t[i][cols].is_zero() {
                return None;
            }
        } else {
            x[basis[i]] = t[i][cols].clone();
        }
    }
    Some(x)
}
