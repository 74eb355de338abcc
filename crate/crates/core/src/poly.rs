//! Exact polynomial arithmetic over Z.
//!
//! `IntPoly` is a dense polynomial with i128 coefficients and overflow
//! checking, used for fraction-free determinant computation. `LaurentPolyZ`
//! is the normalized form handed to callers: lowest exponent shifted to 0,
//! positive leading constant.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    /// Coefficients by ascending degree; no trailing zeros; empty = 0.
    coeffs: Vec<i128>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![1] }
    }

    pub fn from_coeffs(mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    /// b - a*t, the degree <= 1 entry built from a matrix pair.
    pub fn linear(b: i64, a: i64) -> Self {
        Self::from_coeffs(vec![b as i128, -(a as i128)])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn add(&self, other: &IntPoly) -> Result<IntPoly> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            out.push(a.checked_add(b).ok_or_else(overflow)?);
        }
        Ok(IntPoly::from_coeffs(out))
    }

    pub fn sub(&self, other: &IntPoly) -> Result<IntPoly> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            out.push(a.checked_sub(b).ok_or_else(overflow)?);
        }
        Ok(IntPoly::from_coeffs(out))
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|&c| -c).collect() }
    }

    pub fn mul(&self, other: &IntPoly) -> Result<IntPoly> {
        if self.is_zero() || other.is_zero() {
            return Ok(IntPoly::zero());
        }
        let mut out = vec![0i128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let prod = a.checked_mul(b).ok_or_else(overflow)?;
                out[i + j] = out[i + j].checked_add(prod).ok_or_else(overflow)?;
            }
        }
        Ok(IntPoly::from_coeffs(out))
    }

    /// Exact division; errors if the divisor does not divide evenly.
    pub fn div_exact(&self, den: &IntPoly) -> Result<IntPoly> {
        if den.is_zero() {
            return Err(Error::Internal("polynomial division by zero".into()));
        }
        if self.is_zero() {
            return Ok(IntPoly::zero());
        }
        if self.coeffs.len() < den.coeffs.len() {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        let mut rem = self.coeffs.clone();
        let dlead = *den.coeffs.last().unwrap();
        let dn = den.coeffs.len();
        let qn = rem.len() - dn + 1;
        let mut quot = vec![0i128; qn];
        for k in (0..qn).rev() {
            let lead = rem[k + dn - 1];
            if lead % dlead != 0 {
                return Err(Error::Internal("inexact polynomial division".into()));
            }
            let q = lead / dlead;
            quot[k] = q;
            if q != 0 {
                for (i, &d) in den.coeffs.iter().enumerate() {
                    let prod = q.checked_mul(d).ok_or_else(overflow)?;
                    rem[k + i] = rem[k + i].checked_sub(prod).ok_or_else(overflow)?;
                }
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        Ok(IntPoly::from_coeffs(quot))
    }
}

fn overflow() -> Error {
    Error::Overflow("polynomial coefficient exceeded 128 bits".into())
}

/// Determinant of a square polynomial matrix by fraction-free (Bareiss)
/// elimination; all intermediate entries are true minors, so divisions are
/// exact. The empty matrix has determinant 1.
pub fn det_poly(mut m: Vec<Vec<IntPoly>>) -> Result<IntPoly> {
    let n = m.len();
    for row in &m {
        if row.len() != n {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
    }
    if n == 0 {
        return Ok(IntPoly::one());
    }
    let mut sign = 1i64;
    let mut prev = IntPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !m[i][k].is_zero());
            match swap {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(IntPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t1 = m[i][j].mul(&m[k][k])?;
                let t2 = m[i][k].mul(&m[k][j])?;
                m[i][j] = t1.sub(&t2)?.div_exact(&prev)?;
            }
            m[i][k] = IntPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign < 0 { det.neg() } else { det })
}

/// A Laurent polynomial over Z, normalized so the exponent range starts at 0
/// and the constant coefficient is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPolyZ {
    coeffs: Vec<i64>,
}

impl LaurentPolyZ {
    /// Normalizes raw coefficients (ascending exponents) and checks the two
    /// knot gates: value +-1 at t = 1, and palindromic coefficients up to one
    /// global sign.
    pub fn new(raw: &[i64]) -> Result<Self> {
        let start = raw.iter().position(|&c| c != 0).ok_or_else(|| {
            Error::NotAKnot("Alexander polynomial vanished identically".into())
        })?;
        let end = raw.iter().rposition(|&c| c != 0).unwrap();
        let mut coeffs: Vec<i64> = raw[start..=end].to_vec();
        if coeffs[0] < 0 {
            for c in coeffs.iter_mut() {
                *c = -*c;
            }
        }
        let at_one: i64 = coeffs
            .iter()
            .try_fold(0i64, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| Error::Overflow("coefficient sum".into()))?;
        if at_one != 1 && at_one != -1 {
            return Err(Error::NotAKnot(format!(
                "polynomial evaluates to {at_one} at t = 1; a knot polynomial gives +-1"
            )));
        }
        let n = coeffs.len() - 1;
        let sym = (0..=n).all(|i| coeffs[i] == coeffs[n - i]);
        let antisym = (0..=n).all(|i| coeffs[i] == -coeffs[n - i]);
        if !sym && !antisym {
            return Err(Error::NotAKnot(
                "polynomial is not palindromic up to sign".into(),
            ));
        }
        Ok(LaurentPolyZ { coeffs })
    }

    pub fn from_int_poly(p: &IntPoly) -> Result<Self> {
        let raw = p
            .coeffs()
            .iter()
            .map(|&c| i64::try_from(c).map_err(|_| Error::Overflow("coefficient exceeds i64".into())))
            .collect::<Result<Vec<i64>>>()?;
        Self::new(&raw)
    }

    /// Coefficients c_0..c_n by ascending exponent; c_0 > 0 and c_n != 0.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Indices of the lowest and highest coefficients not divisible by p.
    /// Always defined: the coefficient sum is +-1, so reduction mod p is nonzero.
    pub fn support_mod_p(&self, p: u64) -> (usize, usize) {
        let p = p as i64;
        let lo = self
            .coeffs
            .iter()
            .position(|&c| c.rem_euclid(p) != 0)
            .expect("reduction mod p cannot vanish when the value at 1 is a unit");
        let hi = self.coeffs.iter().rposition(|&c| c.rem_euclid(p) != 0).unwrap();
        (lo, hi)
    }
}

/// Width of the mod-p support: the degree of the reduced polynomial after
/// stripping powers of t. This is the rank of the state module at prime p.
pub fn degree_mod_p(delta: &LaurentPolyZ, p: u64) -> usize {
    let (lo, hi) = delta.support_mod_p(p);
    hi - lo
}
