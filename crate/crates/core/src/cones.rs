//! Rational polyhedral cones and lattice cones.
//!
//! A `Cone` is the set of nonnegative combinations of finitely many rational
//! generators; a `LatticeCone` pairs a cone with a lattice spanning its
//! linear hull. Construction canonicalises: generators are primitivised for
//! the relevant lattice, deduplicated, redundant ones dropped, and the rest
//! sorted, so equal cones compare equal syntactically.
//!
//! Faces and the coproduct downstream support simplicial cones only;
//! non-simplicial cones are first cut by `simplicial_subdivide`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    self, fmt_rat, independent_subset, inner_product, lattice_image, lattice_index,
    lattice_intersection, nonneg_solve, parse_rat, primitive_representative,
    projection_matrix, rank_of, InnerProduct, Int, LatticeBasis, Rat, RatVec,
};
use num_traits::{One, Signed, Zero};

// ---------------------------------------------------------------------------
// Cone
// ---------------------------------------------------------------------------

/// A rational polyhedral cone, stored by canonical generators: primitive on
/// each ray, deduplicated, none a nonnegative combination of the others,
/// sorted. The empty generator list is the zero cone {0}.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Cone {
    gens: Vec<RatVec>,
}

impl Cone {
    /// Canonicalise with integer-primitive ray representatives.
    pub fn from_rays(gens: &[RatVec]) -> Result<Cone> {
        let std_lat = |v: &RatVec| {
            let k = v.dim();
            primitive_representative(v, &LatticeBasis::standard(k))
        };
        let mut prim = Vec::new();
        for g in gens {
            if g.is_zero() {
                return Err(Error::invalid("zero vector is not a cone generator"));
            }
            prim.push(std_lat(g)?);
        }
        Ok(Cone::from_primitive(prim))
    }

    /// Assumes each generator is already the canonical representative of its
    /// ray; dedupes, removes redundancy, sorts.
    fn from_primitive(gens: Vec<RatVec>) -> Cone {
        let set: BTreeSet<RatVec> = gens.into_iter().collect();
        let mut list: Vec<RatVec> = set.into_iter().collect();
        // drop generators that are nonnegative combinations of the others
        let mut i = 0;
        while i < list.len() {
            let mut others = list.clone();
            let v = others.remove(i);
            if !others.is_empty() && cone_combination(&others, &v).is_some() {
                list.remove(i);
            } else {
                i += 1;
            }
        }
        Cone { gens: list }
    }

    pub fn zero() -> Cone {
        Cone { gens: vec![] }
    }

    pub fn generators(&self) -> &[RatVec] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Dimension of the linear hull.
    pub fn dim(&self) -> usize {
        rank_of(&self.gens)
    }

    pub fn ambient_dim(&self) -> usize {
        self.gens.iter().map(|g| g.dim()).max().unwrap_or(0)
    }

    /// Generators linearly independent. The zero cone is simplicial.
    pub fn is_simplicial(&self) -> bool {
        self.dim() == self.gens.len()
    }

    /// No line inside: 0 is not a nontrivial nonnegative combination of
    /// generators. Exact linear programming.
    pub fn is_strongly_convex(&self) -> bool {
        if self.gens.len() < 2 {
            return true;
        }
        let k = self.ambient_dim();
        let n = self.gens.len();
        let mut a: Vec<Vec<Rat>> = (0..k)
            .map(|row| (0..n).map(|j| self.gens[j].coord(row)).collect())
            .collect();
        a.push(vec![Rat::one(); n]);
        let mut b = vec![Rat::zero(); k];
        b.push(Rat::one());
        nonneg_solve(&a, &b).is_none()
    }

    pub fn contains(&self, v: &RatVec) -> bool {
        if v.is_zero() {
            return true;
        }
        cone_combination(&self.gens, v).is_some()
    }

    /// Relative interior membership; simplicial cones only.
    pub fn relint_contains(&self, v: &RatVec) -> bool {
        debug_assert!(self.is_simplicial());
        if self.is_zero() {
            return v.is_zero();
        }
        match barycentric(&self.gens, v) {
            Some(c) => c.iter().all(|x| x.is_positive()),
            None => false,
        }
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "<0>");
        }
        let parts: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

/// Nonnegative lambda with sum(lambda_i gens_i) = v, if any.
fn cone_combination(gens: &[RatVec], v: &RatVec) -> Option<Vec<Rat>> {
    if gens.is_empty() {
        return if v.is_zero() { Some(vec![]) } else { None };
    }
    let k = gens
        .iter()
        .map(|g| g.dim())
        .max()
        .unwrap_or(0)
        .max(v.dim());
    let a: Vec<Vec<Rat>> = (0..k)
        .map(|row| gens.iter().map(|g| g.coord(row)).collect())
        .collect();
    nonneg_solve(&a, &v.coords_padded(k))
}

/// Coordinates of `v` in an independent family, if `v` is in its span.
fn barycentric(gens: &[RatVec], v: &RatVec) -> Option<Vec<Rat>> {
    let k = gens
        .iter()
        .map(|g| g.dim())
        .max()
        .unwrap_or(0)
        .max(v.dim());
    let a: Vec<Vec<Rat>> = (0..k)
        .map(|row| gens.iter().map(|g| g.coord(row)).collect())
        .collect();
    exact::mat::solve(&a, &v.coords_padded(k)).filter(|c| {
        // solve() zero-fills free variables; verify it is a true solution
        let mut acc = RatVec::zero();
        for (ci, g) in c.iter().zip(gens) {
            acc = acc.add(&g.scale(ci));
        }
        acc == *v
    })
}

// ---------------------------------------------------------------------------
// LatticeCone
// ---------------------------------------------------------------------------

/// A cone together with a lattice spanning its linear hull. The stored
/// generators form the primary generating set: lattice members, not properly
/// divisible inside the lattice, irredundant.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LatticeCone {
    cone: Cone,
    lattice: LatticeBasis,
}

/// Build a lattice cone, normalising the generators to the primary
/// generating set. With `lattice` omitted the lattice defaults to the
/// integer points of the linear hull.
pub fn make_lattice_cone(gens: &[RatVec], lattice: Option<LatticeBasis>) -> Result<LatticeCone> {
    if gens.iter().any(|g| g.is_zero()) {
        return Err(Error::invalid("zero vector is not a cone generator"));
    }
    if gens.is_empty() {
        if let Some(l) = &lattice {
            if !l.is_empty() {
                return Err(Error::invalid("the zero cone carries the zero lattice"));
            }
        }
        return Ok(LatticeCone {
            cone: Cone::zero(),
            lattice: LatticeBasis::empty(),
        });
    }
    let lam = match lattice {
        Some(l) => {
            // span(lattice) must equal lin(cone)
            for b in l.basis() {
                if !exact::in_span(b, gens) {
                    return Err(Error::invalid(format!(
                        "lattice vector {b} is outside the linear hull of the cone"
                    )));
                }
            }
            for g in gens {
                if !l.span_contains(g) {
                    return Err(Error::invalid(format!(
                        "generator {g} is outside the span of the lattice"
                    )));
                }
            }
            l
        }
        None => {
            let k = gens.iter().map(|g| g.dim()).max().unwrap_or(0);
            lattice_intersection(&LatticeBasis::standard(k), gens)
        }
    };
    let mut prim = Vec::with_capacity(gens.len());
    for g in gens {
        prim.push(primitive_representative(g, &lam)?);
    }
    Ok(LatticeCone {
        cone: Cone::from_primitive(prim),
        lattice: lam,
    })
}

impl LatticeCone {
    pub fn zero() -> LatticeCone {
        LatticeCone {
            cone: Cone::zero(),
            lattice: LatticeBasis::empty(),
        }
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn lattice(&self) -> &LatticeBasis {
        &self.lattice
    }

    pub fn generators(&self) -> &[RatVec] {
        self.cone.generators()
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.cone
            .ambient_dim()
            .max(self.lattice.ambient_dim())
    }

    pub fn is_zero(&self) -> bool {
        self.cone.is_zero()
    }

    pub fn is_simplicial(&self) -> bool {
        self.cone.is_simplicial()
    }

    /// Index of the sublattice spanned by the primary generators; defined for
    /// simplicial cones (generator count = lattice rank).
    pub fn index(&self) -> Result<Int> {
        lattice_index(self.generators(), &self.lattice)
    }

    /// Smooth: simplicial and the primary generators are a lattice basis, so
    /// the monoid of lattice points in the cone is freely generated.
    pub fn is_smooth(&self) -> bool {
        self.is_simplicial() && self.index().map_or(false, |w| w.is_one())
    }
}

impl fmt::Display for LatticeCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, lattice {})", self.cone, self.lattice)
    }
}

// ---------------------------------------------------------------------------
// Faces and transverse cones
// ---------------------------------------------------------------------------

/// All 2^n faces of a simplicial lattice cone: the cone over each generator
/// subset, with the induced lattice. Ordered by subset bitmask over the
/// sorted generators ({0} first, the cone itself last).
pub fn faces(lc: &LatticeCone) -> Result<Vec<LatticeCone>> {
    if !lc.is_simplicial() {
        return Err(Error::unsupported(format!(
            "face enumeration needs a simplicial cone, got {}",
            lc.cone()
        )));
    }
    let gens = lc.generators();
    let n = gens.len();
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u32..(1u32 << n) {
        let subset: Vec<RatVec> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| gens[i].clone())
            .collect();
        let lam = lattice_intersection(lc.lattice(), &subset);
        out.push(make_lattice_cone(&subset, Some(lam))?);
    }
    Ok(out)
}

/// True iff `face` appears among the faces of `lc` (lattice included).
pub fn is_face(lc: &LatticeCone, face: &LatticeCone) -> Result<bool> {
    Ok(faces(lc)?.contains(face))
}

/// The transverse cone along a face: project the cone and its lattice onto
/// the orthogonal complement of the face hull, with respect to `q`.
pub fn transverse_cone(
    lc: &LatticeCone,
    face: &LatticeCone,
    q: &InnerProduct,
) -> Result<LatticeCone> {
    if !is_face(lc, face)? {
        return Err(Error::invalid(format!(
            "{} is not a face of {}",
            face.cone(),
            lc.cone()
        )));
    }
    let ambient = lc.ambient_dim().max(face.ambient_dim());
    let p = projection_matrix(face.generators(), q, ambient);
    let images: Vec<RatVec> = lc
        .generators()
        .iter()
        .map(|g| exact::apply_matrix(&p, g))
        .filter(|v| !v.is_zero())
        .collect();
    let lam = lattice_image(lc.lattice(), &p);
    make_lattice_cone(&images, Some(lam))
}

// ---------------------------------------------------------------------------
// Subdivision
// ---------------------------------------------------------------------------

/// A subdivision: same-dimension pieces carrying the parent's lattice,
/// covering the parent and meeting along common faces. Pieces are sorted.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subdivision {
    parent: LatticeCone,
    pieces: Vec<LatticeCone>,
}

impl Subdivision {
    pub fn singleton(lc: &LatticeCone) -> Subdivision {
        Subdivision {
            parent: lc.clone(),
            pieces: vec![lc.clone()],
        }
    }

    pub fn parent(&self) -> &LatticeCone {
        &self.parent
    }

    pub fn pieces(&self) -> &[LatticeCone] {
        &self.pieces
    }
}

impl fmt::Display for Subdivision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "subdivision of {}", self.parent)?;
        for p in &self.pieces {
            writeln!(f, "  {p}")?;
        }
        Ok(())
    }
}

/// Triangulate a strongly convex cone into simplicial pieces by placing the
/// generators in canonical order: start from the first maximal independent
/// subset, then attach each remaining generator over the boundary facets it
/// sees.
pub fn simplicial_subdivide(lc: &LatticeCone) -> Result<Subdivision> {
    if !lc.cone().is_strongly_convex() {
        return Err(Error::unsupported(format!(
            "subdivision needs a strongly convex cone, got {}",
            lc.cone()
        )));
    }
    if lc.is_simplicial() {
        return Ok(Subdivision::singleton(lc));
    }
    let gens = lc.generators();
    let d = lc.dim();
    let initial = independent_subset(gens);
    debug_assert_eq!(initial.len(), d);
    let span_basis = initial.clone();
    let mut pieces: Vec<BTreeSet<RatVec>> = vec![initial.iter().cloned().collect()];
    for v in gens {
        if initial.contains(v) {
            continue;
        }
        let mut additions = Vec::new();
        for (facet, omitted) in boundary_facets(&pieces, d) {
            let n = facet_normal(&facet, &omitted, &span_basis);
            if inner_product(&n, v, &InnerProduct::Standard).is_negative() {
                let mut piece: BTreeSet<RatVec> = facet.into_iter().collect();
                piece.insert(v.clone());
                additions.push(piece);
            }
        }
        pieces.extend(additions);
    }
    let out: Result<Vec<LatticeCone>> = pieces
        .iter()
        .map(|s| {
            let g: Vec<RatVec> = s.iter().cloned().collect();
            make_lattice_cone(&g, Some(lc.lattice().clone()))
        })
        .collect();
    let mut out = out?;
    out.sort();
    // every generator must be covered; a gap here means the placing order hit
    // a degenerate configuration this implementation does not handle
    for g in gens {
        if !out.iter().any(|p| p.cone().contains(g)) {
            return Err(Error::invariant(format!(
                "triangulation failed to cover generator {g}"
            )));
        }
    }
    Ok(Subdivision {
        parent: lc.clone(),
        pieces: out,
    })
}

/// Facets (d-1 subsets) belonging to exactly one piece, with the generator
/// their piece omits (fixes the inner orientation).
fn boundary_facets(
    pieces: &[BTreeSet<RatVec>],
    d: usize,
) -> Vec<(Vec<RatVec>, RatVec)> {
    let mut count: BTreeMap<Vec<RatVec>, usize> = BTreeMap::new();
    let mut reps: BTreeMap<Vec<RatVec>, RatVec> = BTreeMap::new();
    for piece in pieces {
        debug_assert_eq!(piece.len(), d);
        for omitted in piece {
            let facet: Vec<RatVec> = piece.iter().filter(|g| *g != omitted).cloned().collect();
            *count.entry(facet.clone()).or_insert(0) += 1;
            reps.insert(facet, omitted.clone());
        }
    }
    count
        .into_iter()
        .filter(|(_, c)| *c == 1)
        .map(|(f, _)| {
            let rep = reps[&f].clone();
            (f, rep)
        })
        .collect()
}

/// The vector in span(basis) orthogonal to the facet, signed to be positive
/// on the omitted generator (pointing into the piece).
fn facet_normal(facet: &[RatVec], omitted: &RatVec, basis: &[RatVec]) -> RatVec {
    let d = basis.len();
    let rows: Vec<Vec<Rat>> = facet
        .iter()
        .map(|f| basis.iter().map(|b| f.dot(b)).collect())
        .collect();
    let ker = exact::mat::kernel(&rows, d);
    debug_assert_eq!(ker.len(), 1, "facet must span a hyperplane of the cone");
    let mut n = RatVec::zero();
    for (x, b) in ker[0].iter().zip(basis) {
        n = n.add(&b.scale(x));
    }
    let s = n.dot(omitted);
    debug_assert!(!s.is_zero());
    if s.is_negative() {
        n.neg()
    } else {
        n
    }
}

/// Stellar refinement at `v`: every piece containing `v` is replaced by the
/// cones obtained by swapping `v` for each generator appearing in its
/// barycentric support. Pieces not containing `v` are kept.
pub fn stellar_refine(sub: &Subdivision, v: &RatVec) -> Result<Subdivision> {
    if v.is_zero() {
        return Err(Error::invalid("cannot refine at the zero vector"));
    }
    let lam = sub.parent().lattice();
    if !lam.span_contains(v) {
        return Err(Error::invalid(format!(
            "refinement vector {v} is outside the linear hull of the cone"
        )));
    }
    let v = primitive_representative(v, lam)?;
    let mut new_pieces: BTreeSet<LatticeCone> = BTreeSet::new();
    let mut touched = false;
    for piece in sub.pieces() {
        if !piece.is_simplicial() {
            return Err(Error::unsupported(
                "stellar refinement needs simplicial pieces",
            ));
        }
        let coords = barycentric(piece.generators(), &v).filter(|c| c.iter().all(|x| !x.is_negative()));
        match coords {
            None => {
                new_pieces.insert(piece.clone());
            }
            Some(c) => {
                touched = true;
                let gens = piece.generators();
                let mut replaced_any = false;
                for (j, cj) in c.iter().enumerate() {
                    if !cj.is_positive() {
                        continue;
                    }
                    replaced_any = true;
                    let mut g: Vec<RatVec> = gens.to_vec();
                    g[j] = v.clone();
                    new_pieces.insert(make_lattice_cone(&g, Some(lam.clone()))?);
                }
                if !replaced_any {
                    // v is the zero combination: unreachable, v != 0
                    new_pieces.insert(piece.clone());
                }
            }
        }
    }
    if !touched {
        return Err(Error::invalid(format!(
            "refinement vector {v} lies outside the subdivided cone"
        )));
    }
    Ok(Subdivision {
        parent: sub.parent().clone(),
        pieces: new_pieces.into_iter().collect(),
    })
}

/// Split a simplicial cone at one interior ray (stellar refinement of the
/// trivial subdivision).
pub fn split_at(lc: &LatticeCone, v: &RatVec) -> Result<Subdivision> {
    stellar_refine(&Subdivision::singleton(lc), v)
}

/// Refine a strongly convex lattice cone into smooth pieces. Non-simplicial
/// input is triangulated first. While some piece has index above one, the
/// canonically first such piece is split at the smallest nonzero lattice
/// point of its half-open generator parallelepiped; each split strictly
/// lowers the indices of the affected pieces, so the loop terminates.
pub fn smooth_subdivide(lc: &LatticeCone) -> Result<Subdivision> {
    let mut sub = simplicial_subdivide(lc)?;
    loop {
        let target = sub
            .pieces()
            .iter()
            .find(|p| p.index().map(|w| !w.is_one()).unwrap_or(false))
            .cloned();
        let Some(piece) = target else {
            return Ok(sub);
        };
        let v = parallelepiped_splitter(&piece)?;
        sub = stellar_refine(&sub, &v)?;
    }
}

/// Smallest nonzero lattice point v = sum(c_i g_i), c_i in [0,1), of a
/// simplicial piece with index > 1; minimal by (sum of c, then lexicographic
/// c). The minimiser is automatically primitive in the lattice.
fn parallelepiped_splitter(piece: &LatticeCone) -> Result<RatVec> {
    let lam = piece.lattice();
    let gens = piece.generators();
    let n = gens.len();
    // generator coordinates in the lattice basis: integer rows
    let mut a_rows: Vec<Vec<Int>> = Vec::with_capacity(n);
    for g in gens {
        let c = lam
            .coords_of(g)
            .ok_or_else(|| Error::invariant("generator outside its own lattice span"))?;
        a_rows.push(
            c.iter()
                .map(|x| {
                    debug_assert!(x.is_integer());
                    x.to_integer()
                })
                .collect(),
        );
    }
    let h = exact::int_hnf_rows(a_rows.clone());
    if h.len() != n {
        return Err(Error::invariant("degenerate generator matrix"));
    }
    let diag: Vec<Int> = (0..n).map(|i| h[i][i].clone()).collect();
    // residues x with x_i in [0, diag_i) enumerate the cosets of the
    // generator sublattice; skip the zero class
    let mut best: Option<(Rat, Vec<Rat>, RatVec)> = None;
    let mut x = vec![Int::zero(); n];
    loop {
        if x.iter().any(|c| !c.is_zero()) {
            // solve sum(c_i a_i) = x for rational c
            let at: Vec<Vec<Rat>> = (0..n)
                .map(|i| (0..n).map(|j| Rat::from_integer(a_rows[j][i].clone())).collect())
                .collect();
            let rhs: Vec<Rat> = x.iter().map(|c| Rat::from_integer(c.clone())).collect();
            let c = exact::mat::solve(&at, &rhs)
                .ok_or_else(|| Error::invariant("coset solve failed"))?;
            let frac: Vec<Rat> = c.iter().map(|ci| ci - ci.floor()).collect();
            let total: Rat = frac.iter().fold(Rat::zero(), |acc, f| acc + f);
            let mut v = RatVec::zero();
            for (f, g) in frac.iter().zip(gens) {
                v = v.add(&g.scale(f));
            }
            debug_assert!(!v.is_zero());
            let key = (total, frac, v);
            let better = match &best {
                None => true,
                Some(b) => (key.0.clone(), key.1.clone()) < (b.0.clone(), b.1.clone()),
            };
            if better {
                best = Some(key);
            }
        }
        // increment mixed-radix counter
        let mut i = 0;
        loop {
            if i == n {
                let (_, _, v) = best.ok_or_else(|| {
                    Error::invariant("index > 1 but the parallelepiped has no lattice point")
                })?;
                return Ok(v);
            }
            x[i] += 1;
            if x[i] < diag[i] {
                break;
            }
            x[i] = Int::zero();
            i += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Open face cover
// ---------------------------------------------------------------------------

/// Faces of the pieces of a subdivision that are not contained in any proper
/// face of the parent. Their relative interiors partition the parent's
/// interior. Needs simplicial pieces; the parent may be non-simplicial, in
/// which case boundary containment is settled by linear programming.
pub fn open_face_cover(sub: &Subdivision) -> Result<Vec<LatticeCone>> {
    let parent = sub.parent();
    let mut all: BTreeSet<LatticeCone> = BTreeSet::new();
    for piece in sub.pieces() {
        for f in faces(piece)? {
            all.insert(f);
        }
    }
    let mut out = Vec::new();
    for f in all {
        if !face_in_parent_boundary(&f, parent)? {
            out.push(f);
        }
    }
    Ok(out)
}

/// Is the face contained in a proper face of the parent cone?
fn face_in_parent_boundary(f: &LatticeCone, parent: &LatticeCone) -> Result<bool> {
    if parent.is_zero() {
        // the zero cone has no proper faces
        return Ok(false);
    }
    if parent.is_simplicial() {
        // contained in the facet omitting generator j iff every generator of
        // f has vanishing j-th barycentric coordinate; true for f = {0}
        let pg = parent.generators();
        let coords: Vec<Vec<Rat>> = f
            .generators()
            .iter()
            .map(|g| {
                barycentric(pg, g).ok_or_else(|| {
                    Error::invalid(format!("face generator {g} outside the parent hull"))
                })
            })
            .collect::<Result<_>>()?;
        for j in 0..pg.len() {
            if coords.iter().all(|c| c[j].is_zero()) {
                return Ok(true);
            }
        }
        Ok(false)
    } else {
        // f lies in the relative boundary iff a barycentre of f does: find a
        // dual vector y, nonnegative on the parent generators and not
        // vanishing on all of them, with <y, b> = 0
        let b = f
            .generators()
            .iter()
            .fold(RatVec::zero(), |acc, g| acc.add(g));
        // f = {0}: contained in any proper face; strong convexity guarantees
        // one exists for a nonzero parent
        let pg = parent.generators();
        let k = parent.ambient_dim().max(b.dim());
        // variables: y = u - w with u, w >= 0, plus slacks s_i >= 0
        // equations: <y, g_i> - s_i = 0, <y, b> = 0, sum_i <y, g_i> = 1
        let nv = 2 * k + pg.len();
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        let mut rhs: Vec<Rat> = Vec::new();
        let dot_row = |v: &RatVec| -> Vec<Rat> {
            let mut row = Vec::with_capacity(nv);
            for t in 0..k {
                row.push(v.coord(t));
            }
            for t in 0..k {
                row.push(-v.coord(t));
            }
            row.extend(vec![Rat::zero(); pg.len()]);
            row
        };
        for (i, g) in pg.iter().enumerate() {
            let mut row = dot_row(g);
            row[2 * k + i] = -Rat::one();
            rows.push(row);
            rhs.push(Rat::zero());
        }
        rows.push(dot_row(&b));
        rhs.push(Rat::zero());
        let mut norm = vec![Rat::zero(); nv];
        for g in pg {
            let r = dot_row(g);
            for (n, x) in norm.iter_mut().zip(&r) {
                *n += x;
            }
        }
        rows.push(norm);
        rhs.push(Rat::one());
        Ok(nonneg_solve(&rows, &rhs).is_some())
    }
}

// ---------------------------------------------------------------------------
// Chen cones
// ---------------------------------------------------------------------------

/// The smooth cone <e1, e1+e2, ..., e1+...+ek> with the standard lattice.
pub fn chen_cone(k: usize) -> Result<LatticeCone> {
    if k == 0 {
        return Err(Error::invalid("a Chen cone needs a positive dimension"));
    }
    let gens: Vec<RatVec> = (1..=k)
        .map(|i| {
            RatVec::new(
                (0..i)
                    .map(|_| Rat::one())
                    .collect(),
            )
        })
        .collect();
    make_lattice_cone(&gens, Some(LatticeBasis::standard(k)))
}

/// Closed-form generators of the transverse cone of a Chen cone along the
/// face picked out by `present`: the sorted indices i with v_i = e1+...+ei a
/// generator of the face. Gap indices between consecutive runs of `present`
/// contribute the two-sided combination; indices after the last run
/// contribute a plain tail sum. Results match `transverse_cone` up to
/// positive scaling.
pub fn chen_transverse_closed_form(k: usize, present: &[usize]) -> Result<Vec<RatVec>> {
    if k == 0 {
        return Err(Error::invalid("a Chen cone needs a positive dimension"));
    }
    let set: BTreeSet<usize> = present.iter().copied().collect();
    if set.len() != present.len() {
        return Err(Error::invalid("face index pattern has duplicates"));
    }
    if set.iter().any(|&i| i == 0 || i > k) {
        return Err(Error::invalid(format!(
            "face index pattern out of range 1..={k}"
        )));
    }
    // maximal runs of consecutive indices: [start, end]
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for &i in &set {
        match runs.last_mut() {
            Some((_, end)) if *end + 1 == i => *end = i,
            _ => runs.push((i, i)),
        }
    }
    let e_sum = |from: usize, to: usize| -> RatVec {
        // e_from + ... + e_to (1-based, inclusive); empty when from > to
        let mut v = RatVec::zero();
        for t in from..=to {
            v = v.add(&RatVec::unit(t));
        }
        v
    };
    let mut out = Vec::new();
    // gaps before each run: generators from the two-sided formula
    let mut prev_end = 0usize;
    for &(start, end) in &runs {
        let (i, j) = (prev_end, start);
        for m in i + 1..j {
            let denom = rat_int_usize(j - i);
            let left = e_sum(i + 1, m).scale(&(rat_int_usize(j - m) / denom.clone()));
            let right = e_sum(m + 1, j).scale(&(rat_int_usize(m - i) / denom));
            out.push(left.sub(&right));
        }
        prev_end = end;
    }
    // trailing gap: plain tail sums
    for m in prev_end + 1..=k {
        out.push(e_sum(prev_end + 1, m));
    }
    Ok(out)
}

fn rat_int_usize(n: usize) -> Rat {
    Rat::from_integer(Int::from(n))
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Wire format: generators (and optionally a lattice basis) as vectors of
/// "p/q" strings.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct LatticeConeDto {
    pub generators: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lattice: Option<Vec<Vec<String>>>,
}

impl LatticeConeDto {
    pub fn from_cone(lc: &LatticeCone) -> LatticeConeDto {
        let k = lc.ambient_dim();
        let enc = |v: &RatVec| -> Vec<String> { v.coords_padded(k).iter().map(fmt_rat).collect() };
        LatticeConeDto {
            generators: lc.generators().iter().map(enc).collect(),
            lattice: Some(lc.lattice().basis().iter().map(enc).collect()),
        }
    }

    pub fn to_cone(&self) -> Result<LatticeCone> {
        let dec = |cs: &Vec<String>| -> Result<RatVec> {
            Ok(RatVec::new(
                cs.iter().map(|s| parse_rat(s)).collect::<Result<_>>()?,
            ))
        };
        let gens: Vec<RatVec> = self.generators.iter().map(dec).collect::<Result<_>>()?;
        let lattice = match &self.lattice {
            Some(rows) => Some(LatticeBasis::from_generators(
                &rows.iter().map(dec).collect::<Result<Vec<_>>>()?,
            )),
            None => None,
        };
        make_lattice_cone(&gens, lattice)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn rv(c: &[i64]) -> RatVec {
        RatVec::from_i64(c)
    }

    fn lc(gens: &[&[i64]]) -> LatticeCone {
        let g: Vec<RatVec> = gens.iter().map(|c| rv(c)).collect();
        make_lattice_cone(&g, None).unwrap()
    }

    #[test]
    fn construction_normalises() {
        // scaling
        let c = lc(&[&[2, 0]]);
        assert_eq!(c.generators(), &[rv(&[1, 0])]);
        assert_eq!(c.lattice(), &LatticeBasis::from_generators(&[rv(&[1, 0])]));
        // chen 2 with the full lattice
        let c2 = lc(&[&[1, 0], &[1, 1]]);
        assert_eq!(c2.generators(), &[rv(&[1, 0]), rv(&[1, 1])]);
        assert_eq!(c2.lattice(), &LatticeBasis::standard(2));
        assert_eq!(c2, chen_cone(2).unwrap());
        // default lattice of a ray: integer points of the line
        let r = lc(&[&[1, 1]]);
        assert_eq!(r.lattice(), &LatticeBasis::from_generators(&[rv(&[1, 1])]));
        // zero generators are rejected
        assert!(make_lattice_cone(&[RatVec::zero()], None).is_err());
        // redundant generator removed
        let red = lc(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(red.generators(), &[rv(&[0, 1]), rv(&[1, 0])]);
        // duplicate rays collapse
        let dup = lc(&[&[1, 0], &[3, 0]]);
        assert_eq!(dup.generators(), &[rv(&[1, 0])]);
    }

    #[test]
    fn lattice_primitive_generators() {
        // explicit halved lattice makes the primary generator shorter
        let half = LatticeBasis::from_generators(&[RatVec::new(vec![rat(1, 2), rat(-1, 2)])]);
        let c = make_lattice_cone(&[rv(&[1, -1])], Some(half.clone())).unwrap();
        assert_eq!(
            c.generators(),
            &[RatVec::new(vec![rat(1, 2), rat(-1, 2)])]
        );
        // explicit doubled lattice makes it longer
        let double = LatticeBasis::from_generators(&[rv(&[2, -2])]);
        let c = make_lattice_cone(&[rv(&[1, -1])], Some(double)).unwrap();
        assert_eq!(c.generators(), &[rv(&[2, -2])]);
        // mismatched span is rejected
        assert!(make_lattice_cone(&[rv(&[1, 0])], Some(half)).is_err());
        assert!(
            make_lattice_cone(&[rv(&[1, 0])], Some(LatticeBasis::standard(2))).is_err()
        );
    }

    #[test]
    fn strong_convexity() {
        assert!(lc(&[&[1, 0], &[0, 1]]).cone().is_strongly_convex());
        assert!(chen_cone(3).unwrap().cone().is_strongly_convex());
        let line = Cone::from_rays(&[rv(&[1, 0]), rv(&[-1, 0])]).unwrap();
        assert!(!line.is_strongly_convex());
        let half_plane = Cone::from_rays(&[rv(&[1, 0]), rv(&[-1, 0]), rv(&[0, 1])]).unwrap();
        assert!(!half_plane.is_strongly_convex());
        assert!(Cone::zero().is_strongly_convex());
    }

    #[test]
    fn membership() {
        let c = lc(&[&[1, 0], &[1, 2]]).cone().clone();
        assert!(c.contains(&rv(&[1, 1])));
        assert!(c.contains(&rv(&[1, 0])));
        assert!(!c.contains(&rv(&[0, 1])));
        assert!(!c.contains(&rv(&[-1, 0])));
        assert!(c.relint_contains(&rv(&[1, 1])));
        assert!(!c.relint_contains(&rv(&[1, 0])));
        assert!(!c.relint_contains(&rv(&[1, 2])));
    }

    #[test]
    fn face_enumeration() {
        let ray = lc(&[&[1]]);
        let fs = faces(&ray).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0], LatticeCone::zero());
        assert_eq!(fs[1], ray);

        let c2 = chen_cone(2).unwrap();
        let fs = faces(&c2).unwrap();
        assert_eq!(fs.len(), 4);
        assert_eq!(fs[0], LatticeCone::zero());
        assert_eq!(
            fs[1],
            make_lattice_cone(&[rv(&[1, 0])], Some(LatticeBasis::from_generators(&[rv(&[1, 0])])))
                .unwrap()
        );
        assert_eq!(
            fs[2],
            make_lattice_cone(&[rv(&[1, 1])], Some(LatticeBasis::from_generators(&[rv(&[1, 1])])))
                .unwrap()
        );
        assert_eq!(fs[3], c2);
        // induced lattice of the diagonal face really is the full diagonal
        assert_eq!(
            fs[2].lattice(),
            &LatticeBasis::from_generators(&[rv(&[1, 1])])
        );

        // non-simplicial input is refused
        let square = lc(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        assert!(matches!(faces(&square), Err(Error::UnsupportedCone(_))));
    }

    #[test]
    fn chen_face_shape() {
        // faces of a Chen cone are generated by subsets of the v_i
        let c3 = chen_cone(3).unwrap();
        let fs = faces(&c3).unwrap();
        assert_eq!(fs.len(), 8);
        for f in &fs {
            for g in f.generators() {
                assert!(c3.generators().contains(g));
            }
        }
    }

    #[test]
    fn transverse_trivial_cases() {
        let q = InnerProduct::Standard;
        let c2 = chen_cone(2).unwrap();
        assert_eq!(transverse_cone(&c2, &c2, &q).unwrap(), LatticeCone::zero());
        assert_eq!(
            transverse_cone(&c2, &LatticeCone::zero(), &q).unwrap(),
            c2
        );
        // not a face
        let not_face = lc(&[&[0, 1]]);
        assert!(transverse_cone(&c2, &not_face, &q).is_err());
    }

    #[test]
    fn transverse_chen2() {
        let q = InnerProduct::Standard;
        let c2 = chen_cone(2).unwrap();
        let fs = faces(&c2).unwrap();
        // along <e1>: (<e2>, Z e2)
        let t1 = transverse_cone(&c2, &fs[1], &q).unwrap();
        assert_eq!(
            t1,
            make_lattice_cone(&[rv(&[0, 1])], Some(LatticeBasis::from_generators(&[rv(&[0, 1])])))
                .unwrap()
        );
        // along <e1+e2>: cone on e1-e2 with the halved lattice
        let t2 = transverse_cone(&c2, &fs[2], &q).unwrap();
        let half = LatticeBasis::from_generators(&[RatVec::new(vec![rat(1, 2), rat(-1, 2)])]);
        assert_eq!(
            t2,
            make_lattice_cone(&[rv(&[1, -1])], Some(half)).unwrap()
        );
        assert_eq!(
            t2.generators(),
            &[RatVec::new(vec![rat(1, 2), rat(-1, 2)])]
        );
    }

    #[test]
    fn transverse_nonsmooth_example() {
        let q = InnerProduct::Standard;
        let a = lc(&[&[1, 0], &[1, 2]]);
        let fs = faces(&a).unwrap();
        // along <e1>: projection of (1,2) is (0,2); lattice image is Z e2, so
        // the primary generator drops to e2
        let f_e1 = fs
            .iter()
            .find(|f| f.generators() == [rv(&[1, 0])])
            .unwrap();
        let t = transverse_cone(&a, f_e1, &q).unwrap();
        assert_eq!(t.generators(), &[rv(&[0, 1])]);
        assert_eq!(t.lattice(), &LatticeBasis::from_generators(&[rv(&[0, 1])]));
        // along <e1+2e2>: lattice Z(2/5,-1/5), primary generator (2/5,-1/5)
        let f_d = fs
            .iter()
            .find(|f| f.generators() == [rv(&[1, 2])])
            .unwrap();
        let t = transverse_cone(&a, f_d, &q).unwrap();
        assert_eq!(
            t.lattice(),
            &LatticeBasis::from_generators(&[RatVec::new(vec![rat(2, 5), rat(-1, 5)])])
        );
        assert_eq!(
            t.generators(),
            &[RatVec::new(vec![rat(2, 5), rat(-1, 5)])]
        );
    }

    #[test]
    fn transverse_transitivity_instances() {
        // t(C,F) = t(t(C,F'), t(F,F')) over all face chains of these cones
        let q = InnerProduct::Standard;
        for c in [chen_cone(3).unwrap(), lc(&[&[1, 0], &[1, 2]])] {
            let cf = faces(&c).unwrap();
            for f in &cf {
                let ff = faces(f).unwrap();
                for fp in &ff {
                    let outer = transverse_cone(&c, fp, &q).unwrap();
                    let inner_face = transverse_cone(f, fp, &q).unwrap();
                    let direct = transverse_cone(&c, f, &q).unwrap();
                    let via = transverse_cone(&outer, &inner_face, &q).unwrap();
                    assert_eq!(direct, via, "chain {} <= {} <= {}", fp, f, c);
                }
            }
        }
    }

    #[test]
    fn transverse_dimension_law() {
        let q = InnerProduct::Standard;
        let c = chen_cone(3).unwrap();
        for f in faces(&c).unwrap() {
            let t = transverse_cone(&c, &f, &q).unwrap();
            assert_eq!(c.dim(), f.dim() + t.dim());
        }
    }

    #[test]
    fn simplicial_subdivision() {
        // simplicial input: singleton
        let c2 = chen_cone(2).unwrap();
        let sub = simplicial_subdivide(&c2).unwrap();
        assert_eq!(sub.pieces(), &[c2.clone()]);
        // square cone: two pieces
        let square = lc(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        let sub = simplicial_subdivide(&square).unwrap();
        assert_eq!(sub.pieces().len(), 2);
        for p in sub.pieces() {
            assert!(p.is_simplicial());
            assert_eq!(p.dim(), 3);
            assert_eq!(p.lattice(), square.lattice());
        }
        // sample coverage: generators and a deep interior point
        let mid = rv(&[0, 0, 2]);
        assert!(sub.pieces().iter().any(|p| p.cone().contains(&mid)));
        for g in square.generators() {
            assert!(sub.pieces().iter().any(|p| p.cone().contains(g)));
        }
        // a line is refused
        let bad = Cone::from_rays(&[rv(&[1, 0]), rv(&[-1, 0])]).unwrap();
        let bad_lc = LatticeCone {
            cone: bad,
            lattice: LatticeBasis::standard(2),
        };
        assert!(matches!(
            simplicial_subdivide(&bad_lc),
            Err(Error::UnsupportedCone(_))
        ));
    }

    #[test]
    fn stellar_split() {
        let orthant = lc(&[&[1, 0], &[0, 1]]);
        let sub = split_at(&orthant, &rv(&[1, 1])).unwrap();
        assert_eq!(
            sub.pieces(),
            &[lc(&[&[0, 1], &[1, 1]]), lc(&[&[1, 0], &[1, 1]])]
        );
        // splitting at an outside vector fails
        assert!(split_at(&orthant, &rv(&[-1, 1])).is_err());
        // splitting at an existing generator is the identity
        let same = split_at(&orthant, &rv(&[1, 0])).unwrap();
        assert_eq!(same.pieces(), &[orthant.clone()]);
    }

    #[test]
    fn smoothing_two_piece_example() {
        let a = lc(&[&[1, 0], &[1, 2]]);
        assert_eq!(a.index().unwrap(), Int::from(2));
        assert!(!a.is_smooth());
        let sub = smooth_subdivide(&a).unwrap();
        assert_eq!(
            sub.pieces(),
            &[lc(&[&[1, 0], &[1, 1]]), lc(&[&[1, 1], &[1, 2]])]
        );
        for p in sub.pieces() {
            assert!(p.is_smooth());
        }
    }

    #[test]
    fn smoothing_three_piece_example() {
        let a = lc(&[&[1, 0], &[1, 3]]);
        let sub = smooth_subdivide(&a).unwrap();
        assert_eq!(sub.pieces().len(), 3);
        for p in sub.pieces() {
            assert!(p.is_smooth());
            assert_eq!(p.index().unwrap(), Int::from(1));
        }
        // smooth input: unchanged
        let c3 = chen_cone(3).unwrap();
        assert!(c3.is_smooth());
        assert_eq!(smooth_subdivide(&c3).unwrap().pieces(), &[c3.clone()]);
    }

    #[test]
    fn smoothing_piece_count_matches_index_in_2d() {
        for q in 1..=5i64 {
            let a = lc(&[&[1, 0], &[1, q]]);
            assert_eq!(a.index().unwrap(), Int::from(q));
            let sub = smooth_subdivide(&a).unwrap();
            assert_eq!(sub.pieces().len(), q as usize);
            for p in sub.pieces() {
                assert!(p.is_smooth());
            }
        }
    }

    #[test]
    fn open_faces_of_trivial_subdivision() {
        let c2 = chen_cone(2).unwrap();
        let cover = open_face_cover(&Subdivision::singleton(&c2)).unwrap();
        assert_eq!(cover, vec![c2]);
    }

    #[test]
    fn open_faces_of_diagonal_split() {
        let orthant = lc(&[&[1, 0], &[0, 1]]);
        let sub = split_at(&orthant, &rv(&[1, 1])).unwrap();
        let cover = open_face_cover(&sub).unwrap();
        let expected = vec![
            lc(&[&[0, 1], &[1, 1]]),
            lc(&[&[1, 1]]),
            lc(&[&[1, 0], &[1, 1]]),
        ];
        let expected: BTreeSet<LatticeCone> = expected.into_iter().collect();
        assert_eq!(cover.iter().cloned().collect::<BTreeSet<_>>(), expected);
        assert_eq!(cover.len(), 3);
    }

    #[test]
    fn open_faces_of_three_piece_smoothing() {
        let a = lc(&[&[1, 0], &[1, 3]]);
        let sub = smooth_subdivide(&a).unwrap();
        let cover = open_face_cover(&sub).unwrap();
        // 3 full pieces + 2 interior rays
        assert_eq!(cover.len(), 5);
        assert_eq!(cover.iter().filter(|f| f.dim() == 2).count(), 3);
        assert_eq!(cover.iter().filter(|f| f.dim() == 1).count(), 2);
    }

    #[test]
    fn open_faces_partition_lattice_points() {
        // interior lattice points of the parent split exactly once across
        // the open faces of the cover
        let a = lc(&[&[1, 0], &[1, 3]]);
        let sub = smooth_subdivide(&a).unwrap();
        let cover = open_face_cover(&sub).unwrap();
        for x in 0..=6i64 {
            for y in 0..=6i64 {
                let p = rv(&[x, y]);
                let interior = a.cone().relint_contains(&p);
                let hits = cover
                    .iter()
                    .filter(|f| f.cone().relint_contains(&p))
                    .count();
                assert_eq!(
                    hits,
                    if interior { 1 } else { 0 },
                    "point ({x},{y})"
                );
            }
        }
    }

    #[test]
    fn chen_cones() {
        assert_eq!(chen_cone(1).unwrap(), lc(&[&[1]]));
        assert_eq!(chen_cone(2).unwrap(), lc(&[&[1, 0], &[1, 1]]));
        assert!(chen_cone(0).is_err());
        for k in 1..=4 {
            assert!(chen_cone(k).unwrap().is_smooth());
        }
        // interior lattice points of chen 3 are the strictly decreasing
        // positive triples
        let c3 = chen_cone(3).unwrap();
        for n1 in 0..=4i64 {
            for n2 in 0..=4i64 {
                for n3 in 0..=4i64 {
                    let inside = c3.cone().relint_contains(&rv(&[n1, n2, n3]));
                    let expected = n1 > n2 && n2 > n3 && n3 >= 1;
                    assert_eq!(inside, expected, "({n1},{n2},{n3})");
                }
            }
        }
    }

    #[test]
    fn chen_closed_form_examples() {
        // face <v2> of chen 2: generator (e1-e2)/2
        let g = chen_transverse_closed_form(2, &[2]).unwrap();
        assert_eq!(g, vec![RatVec::new(vec![rat(1, 2), rat(-1, 2)])]);
        // face <v1> of chen 2: generator e2
        let g = chen_transverse_closed_form(2, &[1]).unwrap();
        assert_eq!(g, vec![rv(&[0, 1])]);
        // face <v1,v3> of chen 3: generator (e2-e3)/2
        let g = chen_transverse_closed_form(3, &[1, 3]).unwrap();
        assert_eq!(g, vec![RatVec::new(vec![Rat::zero(), rat(1, 2), rat(-1, 2)])]);
        // empty face: the cone itself
        let g = chen_transverse_closed_form(2, &[]).unwrap();
        assert_eq!(g, vec![rv(&[1]), rv(&[1, 1])]);
        // full face: nothing transverse
        assert!(chen_transverse_closed_form(3, &[1, 2, 3]).unwrap().is_empty());
        // malformed patterns
        assert!(chen_transverse_closed_form(2, &[3]).is_err());
        assert!(chen_transverse_closed_form(2, &[1, 1]).is_err());
        assert!(chen_transverse_closed_form(0, &[]).is_err());
    }

    #[test]
    fn chen_closed_form_matches_projection() {
        // closed form = transverse cone generators up to positive scaling,
        // for every face of chen 2..4
        let q = InnerProduct::Standard;
        for k in 1..=4usize {
            let c = chen_cone(k).unwrap();
            let gens = c.generators().to_vec();
            for mask in 0u32..(1 << k) {
                let present: Vec<usize> =
                    (0..k).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
                let face_gens: Vec<RatVec> = present.iter().map(|&i| gens[i - 1].clone()).collect();
                let lam = lattice_intersection(c.lattice(), &face_gens);
                let face = make_lattice_cone(&face_gens, Some(lam)).unwrap();
                let t = transverse_cone(&c, &face, &q).unwrap();
                let cf = chen_transverse_closed_form(k, &present).unwrap();
                assert_eq!(cf.len(), t.generators().len(), "k={k} mask={mask}");
                for v in &cf {
                    assert!(
                        t.generators()
                            .iter()
                            .any(|g| v.is_positive_multiple_of(g)),
                        "k={k} mask={mask}: {v} not a transverse ray"
                    );
                }
            }
        }
    }

    #[test]
    fn dto_round_trip() {
        let a = lc(&[&[1, 0], &[1, 2]]);
        let dto = LatticeConeDto::from_cone(&a);
        let json = serde_json::to_string(&dto).unwrap();
        let back: LatticeConeDto = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_cone().unwrap(), a);
        // lattice omitted: default rule
        let plain: LatticeConeDto = serde_json::from_str(
            r#"{"generators": [["1","0"],["1","2"]]}"#,
        )
        .unwrap();
        assert_eq!(plain.to_cone().unwrap(), a);
        // halved lattice survives the trip
        let half = LatticeBasis::from_generators(&[RatVec::new(vec![rat(1, 2), rat(-1, 2)])]);
        let c = make_lattice_cone(&[rv(&[1, -1])], Some(half)).unwrap();
        let dto = LatticeConeDto::from_cone(&c);
        let back: LatticeConeDto =
            serde_json::from_str(&serde_json::to_string(&dto).unwrap()).unwrap();
        assert_eq!(back.to_cone().unwrap(), c);
    }
}
