//! Holomorphic projection of meromorphic germs.
//!
//! Every term numerator/(product of forms) splits as a canonical polar part
//! plus terms with strictly fewer pole factors. The polar part of a term is
//! obtained by precomposing the numerator with the orthogonal projection
//! away from the span of the pole vectors; the difference then vanishes on
//! that subspace and divides out through coordinates adapted to the poles.
//! Iterating drains the pole multiplicity, leaving the holomorphic part.
//!
//! Both the basis chosen among the pole forms and the assignment of each
//! monomial to one of its divisors are arbitrary; the projection does not
//! depend on them. The seeded strategy randomises both choices so that
//! independence is testable.

use crate::error::{Error, Result};
use crate::exact::{mat, projection_matrix, rank_of, InnerProduct, Rat, RatVec};
use crate::germs::{drop_order, Denominators, LinearForm, MeromorphicJet, NumeratorJet};
use num_traits::{One, Zero};

/// Choice policy for the arbitrary steps of the projection.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PiPlusStrategy {
    /// First independent pole subset, first available divisor per monomial.
    Canonical,
    /// Both choices driven by a deterministic generator with this seed.
    Seeded(u64),
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn shuffle(items: &mut [usize], state: &mut u64) {
    for i in (1..items.len()).rev() {
        let j = (splitmix64(state) % (i as u64 + 1)) as usize;
        items.swap(i, j);
    }
}

pub(crate) fn pi_plus_with(
    f: &MeromorphicJet,
    q: &InnerProduct,
    strategy: &PiPlusStrategy,
) -> Result<MeromorphicJet> {
    Ok(pi_plus_parts(f, q, strategy)?.0)
}

pub(crate) fn pi_plus_parts(
    f: &MeromorphicJet,
    q: &InnerProduct,
    strategy: &PiPlusStrategy,
) -> Result<(MeromorphicJet, MeromorphicJet)> {
    let mut rng = match strategy {
        PiPlusStrategy::Canonical => None,
        PiPlusStrategy::Seeded(s) => Some(*s),
    };
    let mut plus = MeromorphicJet::zero().truncate_to_order(f.order());
    let mut minus = MeromorphicJet::zero().truncate_to_order(f.order());
    for (d, g) in f.terms() {
        project_term(d.clone(), g.clone(), q, &mut rng, &mut plus, &mut minus)?;
    }
    Ok((plus.normalised(), minus.normalised()))
}

/// Pole vectors of the forms under q: the v with form(x) = q(v, x).
fn pole_vectors(forms: &[LinearForm], q: &InnerProduct, ambient: usize) -> Result<Vec<RatVec>> {
    match q {
        InnerProduct::Standard => Ok(forms.iter().map(|f| f.vector()).collect()),
        InnerProduct::Matrix(m) => {
            let mut full = vec![vec![Rat::zero(); ambient]; ambient];
            for (i, row) in full.iter_mut().enumerate() {
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot = if i < m.len() && j < m.len() {
                        m[i][j].clone()
                    } else if i == j {
                        Rat::one()
                    } else {
                        Rat::zero()
                    };
                }
            }
            let inv = mat::invert(&full)
                .ok_or_else(|| Error::invariant("inner product matrix is not invertible"))?;
            Ok(forms
                .iter()
                .map(|f| crate::exact::apply_matrix(&inv, &f.vector()))
                .collect())
        }
    }
}

fn project_term(
    d: Denominators,
    g: NumeratorJet,
    q: &InnerProduct,
    rng: &mut Option<u64>,
    plus: &mut MeromorphicJet,
    minus: &mut MeromorphicJet,
) -> Result<()> {
    if d.is_empty() {
        plus.insert(d, g);
        return Ok(());
    }
    let forms: Vec<LinearForm> = d.keys().cloned().collect();
    let q_dim = match q {
        InnerProduct::Standard => 0,
        InnerProduct::Matrix(m) => m.len(),
    };
    let ambient = forms
        .iter()
        .map(|f| f.var_count())
        .chain(g.terms().map(|(e, _)| e.len()))
        .max()
        .unwrap_or(1)
        .max(q_dim)
        .max(1);

    // canonical polar piece: numerator precomposed with the projection
    // away from the pole span
    let vecs = pole_vectors(&forms, q, ambient)?;
    let proj = projection_matrix(&vecs, q, ambient);
    let polar = g.substitute_linear(&proj);
    let r = g.sub(&polar);
    minus.insert(d.clone(), polar);
    if r.is_zero() {
        return Ok(());
    }

    // basis among the pole forms, then unit completion: adapted coordinates
    // y with y_j = b_j(x) for the chosen forms
    let mut order: Vec<usize> = (0..forms.len()).collect();
    if let Some(state) = rng.as_mut() {
        shuffle(&mut order, state);
    }
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows_vec: Vec<RatVec> = Vec::new();
    for i in order {
        let cand = forms[i].vector();
        rows_vec.push(cand);
        if rank_of(&rows_vec) == rows_vec.len() {
            chosen.push(i);
        } else {
            rows_vec.pop();
        }
    }
    let basis_size = chosen.len();
    for i in 1..=ambient {
        if rows_vec.len() == ambient {
            break;
        }
        let cand = RatVec::unit(i);
        rows_vec.push(cand);
        if rank_of(&rows_vec) != rows_vec.len() {
            rows_vec.pop();
        }
    }
    let s_rows: Vec<Vec<Rat>> = rows_vec.iter().map(|v| v.coords_padded(ambient)).collect();
    let s_inv = mat::invert(&s_rows)
        .ok_or_else(|| Error::invariant("adapted coordinate change is singular"))?;

    let r_y = r.substitute_linear(&s_inv);
    let mut buckets: Vec<NumeratorJet> =
        vec![NumeratorJet::zero(drop_order(r_y.order(), 1)); basis_size];
    for (e, c) in r_y.terms() {
        let available: Vec<usize> = (0..basis_size)
            .filter(|&j| e.get(j).copied().unwrap_or(0) > 0)
            .collect();
        if available.is_empty() {
            return Err(Error::invariant(
                "numerator residue does not vanish on the pole subspace",
            ));
        }
        let j = match rng.as_mut() {
            None => available[0],
            Some(state) => available[(splitmix64(state) % available.len() as u64) as usize],
        };
        let mut e2 = e.clone();
        e2[j] -= 1;
        buckets[j].add_monomial(e2, c.clone());
    }
    for (j, bucket) in buckets.into_iter().enumerate() {
        if bucket.is_zero() {
            continue;
        }
        let quotient = bucket.substitute_linear(&s_rows);
        let mut d2 = d.clone();
        let form = &forms[chosen[j]];
        let m = d2.get_mut(form).unwrap();
        *m -= 1;
        if *m == 0 {
            d2.remove(form);
        }
        project_term(d2, quotient, q, rng, plus, minus)?;
    }
    Ok(())
}
