//! The finite dynamical system attached to a matrix pair over Z/p^r.
//!
//! States are ambient vectors x with Bx = Ax' linking consecutive states.
//! `compute_v` finds the bi-infinitely extendable states, `transfer_map`
//! expresses the one-step shift on them, and `verify_decomposition` checks
//! the three-way splitting of the full state module.

use crate::alexander::AlexanderPair;
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, MatrixZpr};
use crate::poly::{IntPoly, LaurentPolyZ};
use crate::ring::RingParams;
use crate::submodule::{apply, kernel, preimage, solve, Submodule};

fn reduce_pair_mod(pair: &AlexanderPair, ring: RingParams) -> (MatrixZpr, MatrixZpr) {
    (MatrixZpr::from_int(ring, &pair.a), MatrixZpr::from_int(ring, &pair.b))
}

fn refinement_limit(size: usize, ring: RingParams) -> usize {
    4 * size * ring.r() as usize + 8
}

/// Largest submodule V with A(V) superset of B(V)'s sources in both directions:
/// the stationary limit of W <- A^-1(B W) meet B^-1(A W) starting from the
/// full module. Its elements are exactly the states extendable to bi-infinite
/// trajectories.
pub fn compute_v(pair: &AlexanderPair, ring: RingParams) -> Result<Submodule> {
    let (a, b) = reduce_pair_mod(pair, ring);
    let size = pair.size();
    let mut w = Submodule::full(ring, size);
    for _ in 0..refinement_limit(size, ring) {
        let forward = preimage(&a, &apply(&b, &w)?)?;
        let backward = preimage(&b, &apply(&a, &w)?)?;
        let next = forward.intersect(&backward)?;
        if next == w {
            return Ok(w);
        }
        w = next;
    }
    Err(Error::Internal("invariant-submodule refinement failed to stabilize".into()))
}

/// States reachable from 0 by forward steps: the stationary limit of the
/// increasing chain S <- A^-1(B S) from S = {0}.
pub fn compute_forward_null(pair: &AlexanderPair, ring: RingParams) -> Result<Submodule> {
    let (a, b) = reduce_pair_mod(pair, ring);
    null_chain(&a, &b, pair.size(), ring)
}

/// States from which 0 is reachable by forward steps; equivalently, states
/// reachable from 0 by backward steps: S <- B^-1(A S) from S = {0}.
pub fn compute_backward_null(pair: &AlexanderPair, ring: RingParams) -> Result<Submodule> {
    let (a, b) = reduce_pair_mod(pair, ring);
    null_chain(&b, &a, pair.size(), ring)
}

fn null_chain(front: &MatrixZpr, back: &MatrixZpr, size: usize, ring: RingParams) -> Result<Submodule> {
    let mut s = Submodule::zero(ring, size);
    for _ in 0..refinement_limit(size, ring) {
        let next = preimage(front, &apply(back, &s)?)?;
        if next == s {
            return Ok(s);
        }
        s = next;
    }
    Err(Error::Internal("null-chain iteration failed to stabilize".into()))
}

/// The three-way splitting of the state module.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub v: Submodule,
    pub forward_null: Submodule,
    pub backward_null: Submodule,
}

/// Computes V, the forward-null part, and the backward-null part, then checks
/// that they decompose the full module: pairwise trivial intersections, full
/// sum, and multiplicative cardinalities. Requires ker A meet ker B = 0.
pub fn verify_decomposition(pair: &AlexanderPair, ring: RingParams) -> Result<Decomposition> {
    let (a, b) = reduce_pair_mod(pair, ring);
    let shared = kernel(&a).intersect(&kernel(&b))?;
    if !shared.is_zero() {
        return Err(Error::HypothesisViolated(format!(
            "ker A meets ker B in p^{} elements; the splitting needs a trivial meet \
             (reduce the crossing pair first)",
            shared.cardinality_exponent()
        )));
    }
    let v = compute_v(pair, ring)?;
    let fwd = compute_forward_null(pair, ring)?;
    let bwd = compute_backward_null(pair, ring)?;
    for (x, y, label) in [
        (&v, &fwd, "V and the forward-null part"),
        (&v, &bwd, "V and the backward-null part"),
        (&fwd, &bwd, "the two null parts"),
    ] {
        let meet = x.intersect(y)?;
        if !meet.is_zero() {
            return Err(Error::TheoremViolation(format!(
                "{label} intersect in p^{} elements",
                meet.cardinality_exponent()
            )));
        }
    }
    let total = v.sum(&fwd)?.sum(&bwd)?;
    let size = pair.size();
    if total != Submodule::full(ring, size) {
        return Err(Error::TheoremViolation(
            "V + forward-null + backward-null is a proper submodule".into(),
        ));
    }
    let exponent_sum = v.cardinality_exponent()
        + fwd.cardinality_exponent()
        + bwd.cardinality_exponent();
    if exponent_sum != ring.r() as u64 * size as u64 {
        return Err(Error::TheoremViolation(format!(
            "cardinality exponents sum to {exponent_sum}, expected r*size = {}",
            ring.r() as u64 * size as u64
        )));
    }
    Ok(Decomposition { v, forward_null: fwd, backward_null: bwd })
}

/// The matrix of the one-step shift on V in the coordinates of its basis:
/// T = (A restricted to V)^-1 (B restricted to V).
///
/// Refuses a non-free V (no distinguished coordinates) and a non-injective
/// restriction of A.
pub fn transfer_map(pair: &AlexanderPair, ring: RingParams, v: &Submodule) -> Result<MatrixZpr> {
    let (a, b) = reduce_pair_mod(pair, ring);
    if v.ambient_dim() != pair.size() || v.ring() != ring {
        return Err(Error::DimensionMismatch(
            "invariant submodule does not match the pair's state module".into(),
        ));
    }
    let n = match v.free_rank() {
        Some(n) => n,
        None => {
            return Err(Error::NonFreeModule(
                "V has a non-unit pivot; the shift has no matrix in basis coordinates".into(),
            ))
        }
    };
    if !kernel(&a).intersect(v)?.is_zero() {
        return Err(Error::SingularRestriction(
            "A is not injective on V; the shift is not well-defined there".into(),
        ));
    }
    // coordinates: x in V is P^T c with P the basis matrix
    let m = pair.size();
    let mut pt = MatrixZpr::zero(ring, m, n);
    for (c, row) in v.basis().iter().enumerate() {
        for (i, &x) in row.iter().enumerate() {
            pt.set(i, c, x);
        }
    }
    let apt = a.mul(&pt)?; // solving (A P^T) c' = B P^T c gives the image coordinates
    let bpt = b.mul(&pt)?;
    let mut t = MatrixZpr::zero(ring, n, n);
    for c in 0..n {
        let rhs: Vec<u64> = (0..m).map(|i| bpt.get(i, c)).collect();
        let sol = solve(&apt, &rhs)?.ok_or_else(|| {
            Error::TheoremViolation(
                "B maps a basis vector of V outside A(V); V is not shift-invariant".into(),
            )
        })?;
        for (i, &x) in sol.iter().enumerate() {
            t.set(i, c, x);
        }
    }
    if !kernel(&t).is_zero() {
        return Err(Error::TheoremViolation(
            "transfer matrix is singular; the shift must be invertible on V".into(),
        ));
    }
    Ok(t)
}

/// Window encoding of the scalar recurrence of a two-bridge polynomial at
/// prime p.
///
/// Splitting delta as p-divisible tails of length k around a unit core of
/// width n gives a length-(L+1) recurrence, L = n + 2k. States are windows of
/// L consecutive sequence values; rows 1..L-1 of the pair shift the window
/// and row L applies the recurrence.
pub fn two_bridge_window_pair(delta: &LaurentPolyZ, p: u64) -> Result<AlexanderPair> {
    if !crate::ring::is_prime(p) {
        return Err(Error::InvalidRing(format!("p = {p} is not prime")));
    }
    let coeffs = delta.coeffs();
    let (lo, hi) = delta.support_mod_p(p);
    let k = lo;
    let trailing = coeffs.len() - 1 - hi;
    if trailing != k {
        return Err(Error::Internal(format!(
            "p-divisible tails have lengths {k} and {trailing}; palindromy should make them equal"
        )));
    }
    let n = hi - lo;
    let l = n + 2 * k;
    let mut a = IntMatrix::zero(l, l);
    let mut b = IntMatrix::zero(l, l);
    for i in 0..l.saturating_sub(1) {
        b.set(i, i + 1, 1);
        a.set(i, i, 1);
    }
    if l > 0 {
        for (j, &c) in coeffs.iter().take(l).enumerate() {
            b.set(l - 1, j, c);
        }
        a.set(l - 1, l - 1, -coeffs[l]);
    }
    AlexanderPair::windowed(a, b)
}

/// A pair together with its invariant module and transfer matrix at a fixed
/// Z/p^r: the complete dynamical data at one coefficient level.
#[derive(Debug, Clone)]
pub struct ShiftSystem {
    pair: AlexanderPair,
    ring: RingParams,
    v: Submodule,
    t: MatrixZpr,
}

impl ShiftSystem {
    pub fn new(pair: AlexanderPair, ring: RingParams) -> Result<Self> {
        let v = compute_v(&pair, ring)?;
        let t = transfer_map(&pair, ring, &v)?;
        Ok(ShiftSystem { pair, ring, v, t })
    }

    pub fn pair(&self) -> &AlexanderPair {
        &self.pair
    }

    pub fn ring(&self) -> RingParams {
        self.ring
    }

    pub fn v(&self) -> &Submodule {
        &self.v
    }

    pub fn transfer(&self) -> &MatrixZpr {
        &self.t
    }

    /// Rank of the free module V.
    pub fn rank(&self) -> usize {
        self.v.basis().len()
    }

    /// Ambient state vector of a coordinate vector.
    pub fn to_ambient(&self, coords: &[u64]) -> Result<Vec<u64>> {
        if coords.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "coordinate vector of length {} for rank {}",
                coords.len(),
                self.rank()
            )));
        }
        let ring = self.ring;
        let mut out = vec![0u64; self.v.ambient_dim()];
        for (c, row) in self.v.basis().iter().enumerate() {
            let x = coords[c];
            if x != 0 {
                for (o, &y) in out.iter_mut().zip(row) {
                    *o = ring.add(*o, ring.mul(x, y));
                }
            }
        }
        Ok(out)
    }

    /// Characteristic polynomial of the transfer matrix reduced mod p,
    /// by ascending degree (monic).
    pub fn char_poly_mod_p(&self) -> Result<Vec<u64>> {
        let n = self.rank();
        // det(lambda*E - T) over Z[lambda], then reduced
        let m: Vec<Vec<IntPoly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let diag = i64::from(i == j);
                        // entry lambda*diag - t_ij
                        IntPoly::from_coeffs(vec![-(self.t.get(i, j) as i128), diag as i128])
                    })
                    .collect()
            })
            .collect();
        let det = crate::poly::det_poly(m)?;
        let p = self.ring.p() as i128;
        let mut out: Vec<u64> = det.coeffs().iter().map(|&c| c.rem_euclid(p) as u64).collect();
        out.resize(n + 1, 0);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alexander::{builtin_knot, fox_pair};
    use num_bigint::BigUint;

    fn ring(p: u64, r: u32) -> RingParams {
        RingParams::new(p, r).unwrap()
    }

    fn int_pair(a: Vec<Vec<i64>>, b: Vec<Vec<i64>>) -> AlexanderPair {
        AlexanderPair::windowed(
            IntMatrix::from_rows(a).unwrap(),
            IntMatrix::from_rows(b).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn trefoil_v_is_full_mod_2() {
        let knot = builtin_knot("trefoil").unwrap();
        let pair = knot.reduced_pair().unwrap().unwrap();
        let v = compute_v(&pair, ring(2, 1)).unwrap();
        assert_eq!(v, Submodule::full(ring(2, 1), 2));
    }

    #[test]
    fn identity_pair_decomposes_trivially() {
        let e = int_pair(
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![1, 0], vec![0, 1]],
        );
        let d = verify_decomposition(&e, ring(3, 2)).unwrap();
        assert_eq!(d.v, Submodule::full(ring(3, 2), 2));
        assert!(d.forward_null.is_zero());
        assert!(d.backward_null.is_zero());
    }

    #[test]
    fn zero_a_makes_everything_forward_null() {
        let pair = int_pair(vec![vec![0]], vec![vec![1]]);
        let fwd = compute_forward_null(&pair, ring(2, 1)).unwrap();
        assert_eq!(fwd, Submodule::full(ring(2, 1), 1));
    }

    #[test]
    fn full_pair_violates_kernel_hypothesis() {
        let knot = builtin_knot("trefoil").unwrap();
        let full = fox_pair(knot.presentation.as_ref().unwrap()).unwrap();
        let err = verify_decomposition(&full, ring(2, 1)).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolated(_)), "{err}");
    }

    #[test]
    fn reduced_builtin_pairs_decompose() {
        for name in ["trefoil", "figure8"] {
            let knot = builtin_knot(name).unwrap();
            let pair = knot.reduced_pair().unwrap().unwrap();
            for (p, r) in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)] {
                let rg = ring(p, r);
                let d = verify_decomposition(&pair, rg).unwrap();
                let total = d.v.cardinality_exponent()
                    + d.forward_null.cardinality_exponent()
                    + d.backward_null.cardinality_exponent();
                assert_eq!(total, r as u64 * pair.size() as u64, "{name} p={p} r={r}");
            }
        }
    }

    #[test]
    fn trefoil_transfer_satisfies_char_identity_mod_2() {
        let knot = builtin_knot("trefoil").unwrap();
        let pair = knot.reduced_pair().unwrap().unwrap();
        let rg = ring(2, 1);
        let sys = ShiftSystem::new(pair, rg).unwrap();
        let t = sys.transfer();
        // T^2 + T + E = 0 mod 2 (subtraction and addition agree mod 2)
        let acc = t.pow(2).unwrap().sub(t).unwrap().sub(&MatrixZpr::identity(rg, 2)).unwrap();
        assert!(acc.is_zero(), "T^2 + T + E != 0: {acc:?}");
        assert_eq!(sys.char_poly_mod_p().unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn trefoil_transfer_cubes_to_minus_identity_mod_9() {
        let knot = builtin_knot("trefoil").unwrap();
        let pair = knot.reduced_pair().unwrap().unwrap();
        let rg = ring(3, 2);
        let sys = ShiftSystem::new(pair, rg).unwrap();
        let t3 = sys.transfer().pow(3).unwrap();
        let neg_e = MatrixZpr::zero(rg, 2, 2).sub(&MatrixZpr::identity(rg, 2)).unwrap();
        assert_eq!(t3, neg_e);
    }

    #[test]
    fn window_pair_shapes() {
        // trefoil at p = 2: no tails, window of width 2
        let d = LaurentPolyZ::new(&[1, -1, 1]).unwrap();
        let pair = two_bridge_window_pair(&d, 2).unwrap();
        assert_eq!(pair.size(), 2);
        assert_eq!(pair.b.row(0), &[0, 1]);
        assert_eq!(pair.b.row(1), &[1, -1]);
        assert_eq!(pair.a.row(0), &[1, 0]);
        assert_eq!(pair.a.row(1), &[0, -1]);

        // 5_2 at p = 2: tails of length 1 around a width-0 core
        let d = LaurentPolyZ::new(&[2, -3, 2]).unwrap();
        let pair = two_bridge_window_pair(&d, 2).unwrap();
        assert_eq!(pair.size(), 2);
        assert_eq!(pair.b.row(0), &[0, 1]);
        assert_eq!(pair.b.row(1), &[2, -3]);
        assert_eq!(pair.a.row(0), &[1, 0]);
        assert_eq!(pair.a.row(1), &[0, -2]);
    }

    #[test]
    fn unknot_window_is_empty() {
        let d = LaurentPolyZ::new(&[1]).unwrap();
        let pair = two_bridge_window_pair(&d, 5).unwrap();
        assert_eq!(pair.size(), 0);
        let sys = ShiftSystem::new(pair, ring(5, 2)).unwrap();
        assert_eq!(sys.rank(), 0);
    }

    #[test]
    fn window_v_is_trivial_when_core_is_constant() {
        // 7_4 at p = 2 reduces to a bare middle coefficient
        let knot = builtin_knot("7_4").unwrap();
        for r in [1u32, 2, 3] {
            let pair = knot.pair_for_prime(2).unwrap();
            let v = compute_v(&pair, ring(2, r)).unwrap();
            assert!(v.is_zero(), "r = {r}");
        }
    }

    #[test]
    fn window_rank_matches_polynomial_support() {
        for name in ["trefoil", "figure8", "5_1", "5_2", "6_1", "7_4"] {
            let knot = builtin_knot(name).unwrap();
            for p in [2u64, 3, 5] {
                let pair = two_bridge_window_pair(&knot.delta, p).unwrap();
                for r in [1u32, 2] {
                    let sys = ShiftSystem::new(pair.clone(), ring(p, r)).unwrap();
                    assert_eq!(
                        sys.rank(),
                        knot.rank_at(p),
                        "{name} p={p} r={r}"
                    );
                    assert_eq!(sys.v().free_rank(), Some(knot.rank_at(p)));
                }
            }
        }
    }

    #[test]
    fn synthetic_window_with_tails_and_core() {
        // palindromic, unit at t=1, p = 2: tails (2), core (1, -5, 1)
        let d = LaurentPolyZ::new(&[2, 1, -5, 1, 2]).unwrap();
        let pair = two_bridge_window_pair(&d, 2).unwrap();
        assert_eq!(pair.size(), 4);
        assert_eq!(pair.b.row(3), &[2, 1, -5, 1]);
        assert_eq!(pair.a.row(3), &[0, 0, 0, -2]);
        for r in [1u32, 2] {
            let sys = ShiftSystem::new(pair.clone(), ring(2, r)).unwrap();
            assert_eq!(sys.rank(), 2, "r = {r}");
        }
    }

    #[test]
    fn transfer_refuses_non_free_module() {
        let pair = int_pair(vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![0, 1]]);
        let rg = ring(2, 2);
        let v = Submodule::from_generators(rg, 2, vec![vec![2, 0]]).unwrap();
        let err = transfer_map(&pair, rg, &v).unwrap_err();
        assert!(matches!(err, Error::NonFreeModule(_)), "{err}");
    }

    #[test]
    fn transfer_refuses_singular_restriction() {
        // A = 0 kills V = full, so the restriction cannot be inverted
        let pair = int_pair(vec![vec![0]], vec![vec![0]]);
        let rg = ring(2, 1);
        let v = Submodule::full(rg, 1);
        let err = transfer_map(&pair, rg, &v).unwrap_err();
        assert!(matches!(err, Error::SingularRestriction(_)), "{err}");
    }

    #[test]
    fn shift_conjugacy_on_trefoil_window() {
        // B y_j = A y_{j+1} along every coordinate orbit
        let knot = builtin_knot("trefoil").unwrap();
        let rg = ring(3, 2);
        let pair = knot.pair_for_prime(3).unwrap();
        let sys = ShiftSystem::new(pair.clone(), rg).unwrap();
        let (a, b) = reduce_pair_mod(&pair, rg);
        let n = sys.rank();
        let mut coords = vec![1u64; n];
        for _ in 0..20 {
            let next = sys.transfer().apply_vec(&coords).unwrap();
            let y0 = sys.to_ambient(&coords).unwrap();
            let y1 = sys.to_ambient(&next).unwrap();
            assert_eq!(b.apply_vec(&y0).unwrap(), a.apply_vec(&y1).unwrap());
            coords = next;
        }
    }

    #[test]
    fn v_projects_onto_smaller_levels() {
        for name in ["trefoil", "figure8", "5_2"] {
            let knot = builtin_knot(name).unwrap();
            for p in [2u64, 3] {
                let pair = knot.pair_for_prime(p).unwrap();
                let r3 = ring(p, 3);
                let r2 = ring(p, 2);
                let v3 = compute_v(&pair, r3).unwrap();
                let v2 = compute_v(&pair, r2).unwrap();
                for row in v3.basis() {
                    let projected: Vec<u64> = row.iter().map(|&x| r2.reduce_u64(x)).collect();
                    assert!(v2.contains(&projected).unwrap(), "{name} p={p}");
                }
            }
        }
    }

    #[test]
    fn decomposition_on_window_pairs() {
        for name in ["5_2", "6_1", "7_4"] {
            let knot = builtin_knot(name).unwrap();
            for (p, r) in [(2u64, 1u32), (2, 2), (3, 1), (3, 2)] {
                let pair = knot.pair_for_prime(p).unwrap();
                let rg = ring(p, r);
                let d = verify_decomposition(&pair, rg).unwrap();
                let product_exp = d.v.cardinality_exponent()
                    + d.forward_null.cardinality_exponent()
                    + d.backward_null.cardinality_exponent();
                assert_eq!(product_exp, r as u64 * pair.size() as u64, "{name} p={p} r={r}");
                // |V| = p^(r n)
                assert_eq!(
                    d.v.cardinality(),
                    BigUint::from(p).pow(r * knot.rank_at(p) as u32),
                    "{name} p={p} r={r}"
                );
            }
        }
    }
}
