//! Ground-truth cross-checks by explicit enumeration.
//!
//! Everything here recomputes results of the canonical-form pipeline with
//! deliberately different algorithms: explicit state sets instead of basis
//! calculus, per-state orbit walks instead of kernel counting, and a plain
//! companion-matrix power loop for mod-p orders. Shared code stops at ring
//! arithmetic.

use std::collections::{BTreeMap, BTreeSet};

use crate::alexander::AlexanderPair;
use crate::error::{Error, Result};
use crate::matrix::MatrixZpr;
use crate::par;
use crate::poly::LaurentPolyZ;
use crate::ring::RingParams;

/// Cap on ambient state counts for explicit-set computations.
pub const STATE_SET_CAP: u128 = 1_000_000;
/// Cap on module sizes for per-state orbit walks.
pub const ORBIT_CAP: u128 = 100_000;
/// Default cap on the mod-p order search.
pub const DEFAULT_ORDER_CAP: u64 = 10_000_000;

/// An explicitly enumerated set of states, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitStateSet {
    pub ring: RingParams,
    pub dim: usize,
    pub states: Vec<Vec<u64>>,
}

impl ExplicitStateSet {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.states.binary_search_by(|s| s.as_slice().cmp(v)).is_ok()
    }
}

fn enumerate_ambient(ring: RingParams, dim: usize) -> Result<Vec<Vec<u64>>> {
    let m = ring.modulus() as u128;
    let mut total: u128 = 1;
    for _ in 0..dim {
        total = total.saturating_mul(m);
        if total > STATE_SET_CAP {
            return Err(Error::SizeCapExceeded { required: total, cap: STATE_SET_CAP });
        }
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut v = vec![0u64; dim];
    loop {
        out.push(v.clone());
        let mut i = dim;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            v[i] += 1;
            if v[i] < ring.modulus() {
                break;
            }
            v[i] = 0;
        }
    }
}

struct ExplicitPair {
    a: MatrixZpr,
    b: MatrixZpr,
}

impl ExplicitPair {
    fn new(pair: &AlexanderPair, ring: RingParams) -> Self {
        ExplicitPair {
            a: MatrixZpr::from_int(ring, &pair.a),
            b: MatrixZpr::from_int(ring, &pair.b),
        }
    }
}

fn images(m: &MatrixZpr, states: &[Vec<u64>], par: bool) -> BTreeSet<Vec<u64>> {
    par::map_collect(states, par, |s| m.apply_vec(s).expect("dimensions fixed"))
        .into_iter()
        .collect()
}

fn states_impl(
    pair: &AlexanderPair,
    ring: RingParams,
    par: bool,
) -> Result<(ExplicitStateSet, ExplicitStateSet, ExplicitStateSet)> {
    let dim = pair.size();
    let mats = ExplicitPair::new(pair, ring);
    let ambient = enumerate_ambient(ring, dim)?;

    // bi-infinite part: repeatedly drop states lacking a predecessor or successor
    let mut v = ambient.clone();
    loop {
        let a_img = images(&mats.a, &v, par);
        let b_img = images(&mats.b, &v, par);
        let before = v.len();
        v = par::filter_collect(v, par, |s| {
            let fwd = mats.b.apply_vec(s).expect("dimensions fixed");
            let bwd = mats.a.apply_vec(s).expect("dimensions fixed");
            a_img.contains(&fwd) && b_img.contains(&bwd)
        });
        if v.len() == before {
            break;
        }
    }

    // forward-null part: grow from the zero state along successor steps
    let grow = |front: &MatrixZpr, back: &MatrixZpr| -> Vec<Vec<u64>> {
        let mut set: Vec<Vec<u64>> = vec![vec![0u64; dim]];
        loop {
            let reachable = images(back, &set, par);
            let next = par::filter_collect(ambient.clone(), par, |s| {
                reachable.contains(&front.apply_vec(s).expect("dimensions fixed"))
            });
            if next.len() == set.len() {
                return next;
            }
            set = next;
        }
    };
    let fwd = grow(&mats.a, &mats.b);
    let bwd = grow(&mats.b, &mats.a);

    let pack = |mut states: Vec<Vec<u64>>| {
        states.sort_unstable();
        ExplicitStateSet { ring, dim, states }
    };
    Ok((pack(v), pack(fwd), pack(bwd)))
}

/// Explicit-set computation of the bi-infinite, forward-null, and
/// backward-null state sets. Guarded by `STATE_SET_CAP`.
pub fn brute_force_states(
    pair: &AlexanderPair,
    ring: RingParams,
) -> Result<(ExplicitStateSet, ExplicitStateSet, ExplicitStateSet)> {
    states_impl(pair, ring, cfg!(feature = "parallel"))
}

fn orbits_impl(t: &MatrixZpr, par: bool) -> Result<BTreeMap<u64, u64>> {
    if t.rows() != t.cols() {
        return Err(Error::DimensionMismatch("orbit walk needs a square matrix".into()));
    }
    let ring = t.ring();
    let dim = t.rows();
    let m = ring.modulus() as u128;
    let mut total: u128 = 1;
    for _ in 0..dim {
        total = total.saturating_mul(m);
        if total > ORBIT_CAP {
            return Err(Error::SizeCapExceeded { required: total, cap: ORBIT_CAP });
        }
    }
    let states = enumerate_ambient(ring, dim)?;
    let limit = total as u64 + 1;
    let periods: Vec<Result<u64>> = par::map_collect(&states, par, |s| {
        let mut cur = t.apply_vec(s)?;
        let mut steps = 1u64;
        while &cur != s {
            cur = t.apply_vec(&cur)?;
            steps += 1;
            if steps > limit {
                return Err(Error::NotInvertible(
                    "a state never returns to itself; the matrix is not invertible".into(),
                ));
            }
        }
        Ok(steps)
    });
    let mut counts = BTreeMap::new();
    for p in periods {
        *counts.entry(p?).or_insert(0u64) += 1;
    }
    Ok(counts)
}

/// Walks every state's orbit under T and tallies exact periods.
/// Guarded by `ORBIT_CAP`.
pub fn brute_force_orbits(t: &MatrixZpr) -> Result<BTreeMap<u64, u64>> {
    orbits_impl(t, cfg!(feature = "parallel"))
}

/// Multiplicative order of the companion matrix of delta's unit core mod p.
/// A width-0 core has only the zero representation: the order is 1.
pub fn companion_order_r1(delta: &LaurentPolyZ, p: u64, cap: u64) -> Result<u64> {
    let ring = RingParams::new(p, 1)?;
    let coeffs = delta.coeffs();
    let (lo, hi) = delta.support_mod_p(p);
    let n = hi - lo;
    if n == 0 {
        return Ok(1);
    }
    // companion of the monic-ized core: x_{j+n} = -c_n^-1 (c_0 x_j + ... + c_{n-1} x_{j+n-1})
    let lead_inv = ring.inv_unit(ring.reduce_i64(coeffs[hi]))?;
    let mut c = MatrixZpr::zero(ring, n, n);
    for i in 0..n - 1 {
        c.set(i, i + 1, 1);
    }
    for j in 0..n {
        let coeff = ring.reduce_i64(coeffs[lo + j]);
        c.set(n - 1, j, ring.neg(ring.mul(lead_inv, coeff)));
    }
    let e = MatrixZpr::identity(ring, n);
    let mut power = c.clone();
    let mut d = 1u64;
    while power != e {
        if d >= cap {
            return Err(Error::OrderCapExceeded { cap });
        }
        power = power.mul(&c)?;
        d += 1;
    }
    Ok(d)
}

/// Checks the defining scalar recurrence along unrolled orbits of a window
/// system: for every state of V and a stretch of `span` window positions,
/// the convolution of delta's coefficients with the sequence vanishes.
pub fn scalar_recurrence_check(
    delta: &LaurentPolyZ,
    sys: &crate::shift::ShiftSystem,
    span: usize,
) -> Result<()> {
    let ring = sys.ring();
    let l = sys.pair().size();
    let coeffs: Vec<u64> = delta.coeffs().iter().map(|&c| ring.reduce_i64(c)).collect();
    let states = sys.v().elements(STATE_SET_CAP)?;
    let needed = span + coeffs.len();
    let outcomes: Vec<Result<()>> =
        par::map_collect(&states, cfg!(feature = "parallel"), |ambient0| {
            // membership gives coordinates only implicitly; re-walk in
            // ambient space
            let mut seq = Vec::with_capacity(needed + l);
            let mut coords = coordinates_of(sys, ambient0)?;
            if l > 0 {
                seq.extend_from_slice(&sys.to_ambient(&coords)?);
            }
            while seq.len() < needed + l {
                coords = sys.transfer().apply_vec(&coords)?;
                let next = sys.to_ambient(&coords)?;
                // consecutive windows overlap in all but one position
                if l > 0 {
                    for (i, &x) in next.iter().enumerate().take(l - 1) {
                        if seq[seq.len() - (l - 1) + i] != x {
                            return Err(Error::TheoremViolation(
                                "consecutive windows disagree on their overlap".into(),
                            ));
                        }
                    }
                    seq.push(next[l - 1]);
                } else {
                    break;
                }
            }
            for j in 0..seq.len().saturating_sub(coeffs.len() - 1) {
                let mut acc = 0u64;
                for (i, &c) in coeffs.iter().enumerate() {
                    acc = ring.add(acc, ring.mul(c, seq[j + i]));
                }
                if acc != 0 {
                    return Err(Error::TheoremViolation(format!(
                        "recurrence fails at offset {j} along an orbit"
                    )));
                }
            }
            Ok(())
        });
    for outcome in outcomes {
        outcome?;
    }
    Ok(())
}

/// Expresses an element of V in basis coordinates. The basis has unit pivots,
/// so peeling pivot columns works like back-substitution.
fn coordinates_of(sys: &crate::shift::ShiftSystem, ambient: &[u64]) -> Result<Vec<u64>> {
    let ring = sys.ring();
    let v = sys.v();
    let mut rest: Vec<u64> = ambient.to_vec();
    let mut coords = vec![0u64; v.basis().len()];
    for (i, row) in v.basis().iter().enumerate() {
        let pivot_col = row
            .iter()
            .position(|&x| x != 0)
            .ok_or_else(|| Error::Internal("zero basis row".into()))?;
        let c = rest[pivot_col];
        coords[i] = c;
        if c != 0 {
            for (x, &y) in rest.iter_mut().zip(row) {
                *x = ring.sub(*x, ring.mul(c, y));
            }
        }
    }
    if rest.iter().any(|&x| x != 0) {
        return Err(Error::Internal("vector is not in V".into()));
    }
    Ok(coords)
}

/// Single-threaded reference paths; the benchmark suite compares these
/// against the default entry points.
pub mod sequential {
    use super::*;

    pub fn brute_force_states(
        pair: &AlexanderPair,
        ring: RingParams,
    ) -> Result<(ExplicitStateSet, ExplicitStateSet, ExplicitStateSet)> {
        states_impl(pair, ring, false)
    }

    pub fn brute_force_orbits(t: &MatrixZpr) -> Result<BTreeMap<u64, u64>> {
        orbits_impl(t, false)
    }
}
