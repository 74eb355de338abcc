//! Submodules of (Z/p^r)^m in canonical Howell normal form.
//!
//! Every submodule is stored as a basis matrix with strictly increasing
//! leading indices, pivot entries normalized to powers of p, entries above a
//! pivot reduced below it, and the span-closure property (p^(r-e) times any
//! row lies in the span of the later rows). This representation is unique
//! for a given spanned set, so submodule equality is structural equality.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::matrix::MatrixZpr;
use crate::ring::RingParams;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submodule {
    ring: RingParams,
    ambient_dim: usize,
    basis: Vec<Vec<u64>>,
    pivot_cols: Vec<usize>,
    pivot_vals: Vec<u32>,
}

/// Incremental Howell-form builder: one optional row per leading column.
struct HowellBuilder {
    ring: RingParams,
    dim: usize,
    slots: Vec<Option<Vec<u64>>>,
}

impl HowellBuilder {
    fn new(ring: RingParams, dim: usize) -> Self {
        HowellBuilder { ring, dim, slots: vec![None; dim] }
    }

    fn insert(&mut self, first: Vec<u64>) {
        let ring = self.ring;
        let mut work = vec![first];
        while let Some(mut v) = work.pop() {
            debug_assert_eq!(v.len(), self.dim);
            let mut j = match v.iter().position(|&x| x != 0) {
                Some(j) => j,
                None => continue,
            };
            loop {
                let val_v = ring.val(v[j]);
                match &self.slots[j] {
                    Some(w) => {
                        let e = ring.val(w[j]);
                        if e <= val_v {
                            // cancel the leading entry: multiplier is exact
                            let q = v[j] / ring.p_pow(e);
                            let w = w.clone();
                            for (x, &y) in v.iter_mut().zip(&w) {
                                *x = ring.sub(*x, ring.mul(q, y));
                            }
                            debug_assert_eq!(v[j], 0);
                            match v.iter().skip(j + 1).position(|&x| x != 0) {
                                Some(off) => j += 1 + off,
                                None => break,
                            }
                        } else {
                            // v has the smaller valuation: it takes the slot
                            let vn = normalize_row(ring, v, j, val_v);
                            let old = self.slots[j].replace(vn.clone());
                            if val_v > 0 {
                                work.push(scale_row(ring, &vn, ring.p_pow(ring.r() - val_v)));
                            }
                            if let Some(old) = old {
                                work.push(old);
                            }
                            break;
                        }
                    }
                    None => {
                        let vn = normalize_row(ring, v, j, val_v);
                        if val_v > 0 {
                            work.push(scale_row(ring, &vn, ring.p_pow(ring.r() - val_v)));
                        }
                        self.slots[j] = Some(vn);
                        break;
                    }
                }
            }
        }
    }

    fn finish(self) -> Submodule {
        let ring = self.ring;
        let mut basis: Vec<Vec<u64>> = Vec::new();
        let mut pivot_cols = Vec::new();
        let mut pivot_vals = Vec::new();
        for (j, slot) in self.slots.into_iter().enumerate() {
            if let Some(row) = slot {
                pivot_cols.push(j);
                pivot_vals.push(ring.val(row[j]));
                basis.push(row);
            }
        }
        // reduce entries above each pivot into [0, p^e)
        for i in 0..basis.len() {
            for l in i + 1..basis.len() {
                let jl = pivot_cols[l];
                let pe = ring.p_pow(pivot_vals[l]);
                let q = basis[i][jl] / pe;
                if q != 0 {
                    let lower = basis[l].clone();
                    for (x, &y) in basis[i].iter_mut().zip(&lower) {
                        *x = ring.sub(*x, ring.mul(q, y));
                    }
                }
            }
        }
        Submodule { ring, ambient_dim: self.dim, basis, pivot_cols, pivot_vals }
    }
}

fn normalize_row(ring: RingParams, mut v: Vec<u64>, j: usize, val: u32) -> Vec<u64> {
    let u = ring.unit_part(v[j]);
    if u != 1 {
        let ui = ring.inv_unit(u).expect("unit part is invertible");
        for x in v.iter_mut() {
            *x = ring.mul(*x, ui);
        }
    }
    debug_assert_eq!(v[j], ring.p_pow(val));
    v
}

fn scale_row(ring: RingParams, v: &[u64], c: u64) -> Vec<u64> {
    v.iter().map(|&x| ring.mul(x, c)).collect()
}

impl Submodule {
    /// Canonical form of the span of the given generators.
    pub fn from_generators(ring: RingParams, ambient_dim: usize, gens: Vec<Vec<u64>>) -> Result<Self> {
        let mut b = HowellBuilder::new(ring, ambient_dim);
        for g in gens {
            if g.len() != ambient_dim {
                return Err(Error::DimensionMismatch(format!(
                    "generator of length {} in ambient dimension {}",
                    g.len(),
                    ambient_dim
                )));
            }
            b.insert(g.into_iter().map(|x| ring.reduce_u64(x)).collect());
        }
        Ok(b.finish())
    }

    pub fn zero(ring: RingParams, ambient_dim: usize) -> Self {
        Submodule { ring, ambient_dim, basis: vec![], pivot_cols: vec![], pivot_vals: vec![] }
    }

    pub fn full(ring: RingParams, ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| {
                let mut row = vec![0u64; ambient_dim];
                row[i] = 1;
                row
            })
            .collect();
        Submodule {
            ring,
            ambient_dim,
            basis,
            pivot_cols: (0..ambient_dim).collect(),
            pivot_vals: vec![0; ambient_dim],
        }
    }

    /// The submodule p * (Z/p^r)^m of vectors with every entry divisible by p.
    pub fn p_multiples(ring: RingParams, ambient_dim: usize) -> Self {
        let gens = (0..ambient_dim)
            .map(|i| {
                let mut row = vec![0u64; ambient_dim];
                row[i] = ring.p_pow(1) % ring.modulus();
                row
            })
            .collect();
        Self::from_generators(ring, ambient_dim, gens).expect("dimensions agree")
    }

    pub fn ring(&self) -> RingParams {
        self.ring
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn pivot_vals(&self) -> &[u32] {
        &self.pivot_vals
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// k with |S| = p^k.
    pub fn cardinality_exponent(&self) -> u64 {
        self.pivot_vals.iter().map(|&e| (self.ring.r() - e) as u64).sum()
    }

    pub fn cardinality(&self) -> BigUint {
        BigUint::from(self.ring.p()).pow(
            u32::try_from(self.cardinality_exponent()).expect("exponent fits in u32"),
        )
    }

    /// Some(rank) when the module is free, i.e. every pivot is a unit.
    pub fn free_rank(&self) -> Option<usize> {
        if self.pivot_vals.iter().all(|&e| e == 0) {
            Some(self.basis.len())
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[u64]) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "membership query of length {} in ambient dimension {}",
                v.len(),
                self.ambient_dim
            )));
        }
        let ring = self.ring;
        let mut v: Vec<u64> = v.iter().map(|&x| ring.reduce_u64(x)).collect();
        loop {
            let j = match v.iter().position(|&x| x != 0) {
                Some(j) => j,
                None => return Ok(true),
            };
            let i = match self.pivot_cols.binary_search(&j) {
                Ok(i) => i,
                Err(_) => return Ok(false),
            };
            let e = self.pivot_vals[i];
            if ring.val(v[j]) < e {
                return Ok(false);
            }
            let q = v[j] / ring.p_pow(e);
            for (x, &y) in v.iter_mut().zip(&self.basis[i]) {
                *x = ring.sub(*x, ring.mul(q, y));
            }
        }
    }

    pub fn contains_submodule(&self, other: &Submodule) -> Result<bool> {
        for row in &other.basis {
            if !self.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        self.check_compatible(other)?;
        let gens = self.basis.iter().chain(&other.basis).cloned().collect();
        Submodule::from_generators(self.ring, self.ambient_dim, gens)
    }

    /// Intersection via the kernel of the stacked basis matrix.
    pub fn intersect(&self, other: &Submodule) -> Result<Submodule> {
        self.check_compatible(other)?;
        let ring = self.ring;
        let m = self.ambient_dim;
        let k1 = self.basis.len();
        let k2 = other.basis.len();
        // columns of J are the basis vectors of both modules
        let mut j = MatrixZpr::zero(ring, m, k1 + k2);
        for (c, row) in self.basis.iter().enumerate() {
            for (i, &x) in row.iter().enumerate() {
                j.set(i, c, x);
            }
        }
        for (c, row) in other.basis.iter().enumerate() {
            for (i, &x) in row.iter().enumerate() {
                j.set(i, k1 + c, x);
            }
        }
        let ker = kernel(&j);
        // map each kernel element (a, b) to sum_i a_i * basis1_i
        let gens = ker
            .basis
            .iter()
            .map(|coeffs| {
                let mut v = vec![0u64; m];
                for (i, row) in self.basis.iter().enumerate() {
                    let c = coeffs[i];
                    if c != 0 {
                        for (x, &y) in v.iter_mut().zip(row) {
                            *x = ring.add(*x, ring.mul(c, y));
                        }
                    }
                }
                v
            })
            .collect();
        Submodule::from_generators(ring, m, gens)
    }

    /// Enumerates every element, in lexicographic coefficient order.
    pub fn elements(&self, cap: u128) -> Result<Vec<Vec<u64>>> {
        let ring = self.ring;
        let mut total: u128 = 1;
        let mut radices = Vec::with_capacity(self.basis.len());
        for &e in &self.pivot_vals {
            let radix = ring.p_pow(ring.r() - e);
            total = total.saturating_mul(radix as u128);
            radices.push(radix);
        }
        if total > cap {
            return Err(Error::SizeCapExceeded { required: total, cap });
        }
        let mut out = Vec::with_capacity(total as usize);
        let mut counters = vec![0u64; self.basis.len()];
        loop {
            let mut v = vec![0u64; self.ambient_dim];
            for (i, row) in self.basis.iter().enumerate() {
                let c = counters[i];
                if c != 0 {
                    for (x, &y) in v.iter_mut().zip(row) {
                        *x = ring.add(*x, ring.mul(c, y));
                    }
                }
            }
            out.push(v);
            let mut i = self.basis.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                counters[i] += 1;
                if counters[i] < radices[i] {
                    break;
                }
                counters[i] = 0;
            }
        }
    }

    fn check_compatible(&self, other: &Submodule) -> Result<()> {
        if self.ring != other.ring || self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(
                "submodules live in different ambient modules".into(),
            ));
        }
        Ok(())
    }
}

/// Kernel {v : Mv = 0} as a submodule of the domain.
///
/// Computed from the Howell form of the domain basis augmented with an
/// identity block; rows whose image part vanishes carry exactly the kernel
/// combinations, including the p-divisible ones contributed by shadow rows.
pub fn kernel(m: &MatrixZpr) -> Submodule {
    let ring = m.ring();
    let rows = m.rows();
    let cols = m.cols();
    let mut b = HowellBuilder::new(ring, rows + cols);
    for i in 0..cols {
        let mut aug = vec![0u64; rows + cols];
        for (k, slot) in aug.iter_mut().enumerate().take(rows) {
            *slot = m.get(k, i);
        }
        aug[rows + i] = 1;
        b.insert(aug);
    }
    let full = b.finish();
    let gens: Vec<Vec<u64>> = full
        .basis
        .iter()
        .filter(|row| row[..rows].iter().all(|&x| x == 0))
        .map(|row| row[rows..].to_vec())
        .collect();
    Submodule::from_generators(ring, cols, gens).expect("projection preserves dimension")
}

/// Image {Mv : v in S}.
pub fn apply(m: &MatrixZpr, s: &Submodule) -> Result<Submodule> {
    if m.cols() != s.ambient_dim() || m.ring() != s.ring() {
        return Err(Error::DimensionMismatch(format!(
            "matrix with {} columns applied to submodule of dimension {}",
            m.cols(),
            s.ambient_dim()
        )));
    }
    let gens = s
        .basis()
        .iter()
        .map(|row| m.apply_vec(row))
        .collect::<Result<Vec<_>>>()?;
    Submodule::from_generators(m.ring(), m.rows(), gens)
}

/// Preimage {v : Mv in S}.
pub fn preimage(m: &MatrixZpr, s: &Submodule) -> Result<Submodule> {
    if m.rows() != s.ambient_dim() || m.ring() != s.ring() {
        return Err(Error::DimensionMismatch(format!(
            "matrix with {} rows against submodule of dimension {}",
            m.rows(),
            s.ambient_dim()
        )));
    }
    let ring = m.ring();
    let n = m.cols();
    let k = s.basis().len();
    // J = [M | -S^T]: kernel elements (v, a) satisfy Mv = sum_i a_i s_i
    let mut j = MatrixZpr::zero(ring, m.rows(), n + k);
    for i in 0..m.rows() {
        for c in 0..n {
            j.set(i, c, m.get(i, c));
        }
    }
    for (c, row) in s.basis().iter().enumerate() {
        for (i, &x) in row.iter().enumerate() {
            j.set(i, n + c, ring.neg(x));
        }
    }
    let ker = kernel(&j);
    let gens = ker.basis().iter().map(|row| row[..n].to_vec()).collect();
    Submodule::from_generators(ring, n, gens)
}

/// One solution of Mx = b, if any.
pub fn solve(m: &MatrixZpr, b: &[u64]) -> Result<Option<Vec<u64>>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for a matrix with {} rows",
            b.len(),
            m.rows()
        )));
    }
    let ring = m.ring();
    let n = m.cols();
    let mut j = MatrixZpr::zero(ring, m.rows(), n + 1);
    for (i, &bi) in b.iter().enumerate() {
        for c in 0..n {
            j.set(i, c, m.get(i, c));
        }
        j.set(i, n, ring.neg(ring.reduce_u64(bi)));
    }
    // kernel elements (x, s) satisfy Mx = s*b; any with unit s rescales to s = 1
    let ker = kernel(&j);
    for row in ker.basis() {
        let s = row[n];
        if s != 0 && ring.val(s) == 0 {
            let inv = ring.inv_unit(s)?;
            return Ok(Some(row[..n].iter().map(|&x| ring.mul(x, inv)).collect()));
        }
    }
    Ok(None)
}
