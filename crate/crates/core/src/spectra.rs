//! Orbit periods of the transfer map: the order of T, the set of exact
//! periods with counts, the growth of the order across p-power levels, and
//! the combination rule for direct-sum targets.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::alexander::AlexanderPair;
use crate::error::{Error, Result};
use crate::matrix::MatrixZpr;
use crate::par;
use crate::ring::{divisors, factorize, RingParams};
use crate::shift::ShiftSystem;
use crate::submodule::kernel;

/// Multiplicative order of T over Z/p^r: the order d_1 mod p by direct
/// powering (capped), then the p-power correction by repeated p-th powers.
pub fn order_of_transfer(t: &MatrixZpr, cap: u64) -> Result<u64> {
    let ring = t.ring();
    if t.rows() != t.cols() {
        return Err(Error::DimensionMismatch("order of a non-square matrix".into()));
    }
    if t.rows() == 0 {
        return Ok(1);
    }
    let ring1 = ring.restrict(1)?;
    let t1 = t.project(ring1)?;
    if !kernel(&t1).is_zero() {
        return Err(Error::NotInvertible("transfer matrix is singular mod p".into()));
    }
    let e1 = MatrixZpr::identity(ring1, t1.rows());
    let mut power = t1.clone();
    let mut d1 = 1u64;
    while power != e1 {
        if d1 >= cap {
            return Err(Error::OrderCapExceeded { cap });
        }
        power = power.mul(&t1)?;
        d1 += 1;
    }
    // T^d1 = E + (p-divisible part); its order is the p-power that kills it
    let mut s = t.pow(d1)?;
    let e = MatrixZpr::identity(ring, t.rows());
    let mut p_part = 1u64;
    while s != e {
        s = s.pow(ring.p())?;
        p_part = p_part
            .checked_mul(ring.p())
            .ok_or_else(|| Error::Overflow("order exceeds u64".into()))?;
        if p_part > ring.modulus() {
            return Err(Error::Internal(
                "p-power correction failed to terminate; T^d1 is not unipotent mod p".into(),
            ));
        }
    }
    d1.checked_mul(p_part).ok_or_else(|| Error::Overflow("order exceeds u64".into()))
}

/// Exact orbit periods with counts. Periods are the divisors q of ord(T)
/// whose exact-period count is positive; counts come from fixed-point
/// cardinalities |ker(T^q - E)| by Moebius inversion over the divisor
/// lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodSpectrum {
    pub p: u64,
    pub r: u32,
    /// ord(T): the largest period.
    pub d: u64,
    /// exact period -> number of states realizing it.
    pub counts: BTreeMap<u64, BigUint>,
}

impl PeriodSpectrum {
    pub fn periods(&self) -> Vec<u64> {
        self.counts.keys().copied().collect()
    }

    pub fn total_states(&self) -> BigUint {
        self.counts.values().sum()
    }
}

pub fn period_set(t: &MatrixZpr, cap: u64) -> Result<PeriodSpectrum> {
    let ring = t.ring();
    let d = order_of_transfer(t, cap)?;
    let divs = divisors(d);
    let e = MatrixZpr::identity(ring, t.rows());
    // |Fix(T^q)| for each divisor q
    let fixed: Vec<Result<BigUint>> = par::map_collect(&divs, cfg!(feature = "parallel"), |&q| {
        let tq = t.pow(q)?;
        let diff = tq.sub(&e)?;
        Ok(kernel(&diff).cardinality())
    });
    let mut fix_by_q = BTreeMap::new();
    for (q, f) in divs.iter().zip(fixed) {
        fix_by_q.insert(*q, f?);
    }
    let mut counts = BTreeMap::new();
    for &q in &divs {
        let radical: Vec<u64> = factorize(q).into_iter().map(|(p, _)| p).collect();
        let mut exact = BigInt::zero();
        // Moebius sum over squarefree divisors e of q: mu(e) * |Fix(T^(q/e))|
        for mask in 0u32..(1 << radical.len()) {
            let mut e_div = 1u64;
            for (i, &p) in radical.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    e_div *= p;
                }
            }
            let term = BigInt::from(fix_by_q[&(q / e_div)].clone());
            if mask.count_ones() % 2 == 0 {
                exact += term;
            } else {
                exact -= term;
            }
        }
        if exact.is_negative() {
            return Err(Error::TheoremViolation(format!(
                "negative exact-period count at q = {q}"
            )));
        }
        if !exact.is_zero() {
            counts.insert(q, exact.to_biguint().unwrap());
        }
    }
    // ord(T) itself must be realized, and the lcm of periods must be ord(T)
    let lcm_all = counts.keys().fold(1u64, |acc, &q| acc.lcm(&q));
    if lcm_all != d {
        return Err(Error::TheoremViolation(format!(
            "periods {:?} have lcm {lcm_all}, but ord(T) = {d}",
            counts.keys().collect::<Vec<_>>()
        )));
    }
    Ok(PeriodSpectrum { p: ring.p(), r: ring.r(), d, counts })
}

/// How the order sequence d_1, d_2, ... behaves across levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TowerPattern {
    /// The same order at every level.
    Constant,
    /// Equal through level s, then multiplied by p at every later level.
    GrowthFrom(usize),
    /// Growth by p that stops: an equal prefix, a block of p-jumps, then an
    /// equal tail. Only observed at p = 2.
    StabilizedAfterGrowth,
    /// Anything else. The divisibility chain makes this unreachable; seeing
    /// it means a structural guarantee broke.
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodTower {
    pub p: u64,
    /// d_r for r = 1..=rmax.
    pub orders: Vec<u64>,
    pub pattern: TowerPattern,
}

/// Orders of the transfer map for r = 1..=rmax over Z/p^r, with the growth
/// pattern. Each consecutive pair must satisfy d_r | d_{r+1} | p * d_r.
pub fn period_tower(pair: &AlexanderPair, p: u64, rmax: u32, cap: u64) -> Result<PeriodTower> {
    if rmax == 0 {
        return Err(Error::InvalidInput("tower needs at least one level".into()));
    }
    let mut orders = Vec::with_capacity(rmax as usize);
    for r in 1..=rmax {
        let ring = RingParams::new(p, r)?;
        let sys = ShiftSystem::new(pair.clone(), ring)?;
        orders.push(order_of_transfer(sys.transfer(), cap)?);
    }
    for w in orders.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if !hi.is_multiple_of(lo) || !(p * lo).is_multiple_of(hi) {
            return Err(Error::TheoremViolation(format!(
                "orders {lo} -> {hi} break the divisibility chain d | d' | p*d"
            )));
        }
    }
    let pattern = classify_tower(&orders, p);
    Ok(PeriodTower { p, orders, pattern })
}

fn classify_tower(orders: &[u64], p: u64) -> TowerPattern {
    let jumps: Vec<bool> = orders.windows(2).map(|w| w[1] == p * w[0] && w[1] != w[0]).collect();
    if jumps.iter().all(|&j| !j) {
        return TowerPattern::Constant;
    }
    let first = jumps.iter().position(|&j| j).unwrap();
    if jumps[first..].iter().all(|&j| j) {
        // equal prefix d_1..d_{first+1}, then jumps to the end
        return TowerPattern::GrowthFrom(first + 1);
    }
    let last = jumps.iter().rposition(|&j| j).unwrap();
    if jumps[first..=last].iter().all(|&j| j) {
        // contiguous block of jumps with an equal tail
        return TowerPattern::StabilizedAfterGrowth;
    }
    TowerPattern::Other
}

/// A finite abelian p-group product: factors (p_i, r_i) for Z/p_i^{r_i},
/// sorted by prime then exponent. Repeated primes are allowed here; the
/// covering classifier rejects them separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroupSpec {
    factors: Vec<(u64, u32)>,
}

impl AbelianGroupSpec {
    pub fn new(mut factors: Vec<(u64, u32)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("the trivial group has no factors".into()));
        }
        for &(p, r) in &factors {
            RingParams::new(p, r)?;
        }
        factors.sort_unstable();
        Ok(AbelianGroupSpec { factors })
    }

    /// Parses comma-separated factors; each entry is factored into prime
    /// powers, so "6" and "2,3" and "12,5" all work.
    pub fn parse(text: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            let n: u64 = part
                .parse()
                .map_err(|_| Error::InvalidInput(format!("'{part}' is not a positive integer")))?;
            if n < 2 {
                return Err(Error::InvalidInput(format!(
                    "group order {n} is too small; factors must be at least 2"
                )));
            }
            factors.extend(factorize(n));
        }
        Self::new(factors)
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// The first prime appearing in two factors, if any.
    pub fn repeated_prime(&self) -> Option<u64> {
        for w in self.factors.windows(2) {
            if w[0].0 == w[1].0 {
                return Some(w[0].0);
            }
        }
        None
    }

    pub fn order(&self) -> BigUint {
        self.factors
            .iter()
            .map(|&(p, r)| BigUint::from(p).pow(r))
            .product()
    }
}

impl std::fmt::Display for AbelianGroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, r)| {
                let mut m = 1u64;
                for _ in 0..r {
                    m *= p;
                }
                format!("Z/{m}")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Combined period data over a direct sum of coefficient groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinedSpectrum {
    pub d: u64,
    /// exact period -> count of representation tuples realizing it.
    pub counts: BTreeMap<u64, BigUint>,
}

impl CombinedSpectrum {
    pub fn periods(&self) -> Vec<u64> {
        self.counts.keys().copied().collect()
    }
}

/// Combines per-factor spectra: overall order is the lcm of the factor
/// orders, and a tuple's period is the lcm of its component periods.
pub fn combine_abelian(
    spec: &AbelianGroupSpec,
    spectra: &[PeriodSpectrum],
) -> Result<CombinedSpectrum> {
    if spec.factors().len() != spectra.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} group factors but {} spectra",
            spec.factors().len(),
            spectra.len()
        )));
    }
    for (&(p, r), s) in spec.factors().iter().zip(spectra) {
        if s.p != p || s.r != r {
            return Err(Error::DimensionMismatch(format!(
                "spectrum for p^r = {}^{} paired with factor {}^{}",
                s.p, s.r, p, r
            )));
        }
    }
    let d = spectra.iter().fold(1u64, |acc, s| acc.lcm(&s.d));
    let mut counts: BTreeMap<u64, BigUint> = BTreeMap::new();
    counts.insert(1, BigUint::from(1u32));
    for s in spectra {
        let mut next: BTreeMap<u64, BigUint> = BTreeMap::new();
        for (&q_acc, c_acc) in &counts {
            for (&q, c) in &s.counts {
                let entry = next.entry(q_acc.lcm(&q)).or_insert_with(BigUint::zero);
                *entry += c_acc * c;
            }
        }
        counts = next;
    }
    Ok(CombinedSpectrum { d, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alexander::builtin_knot;
    use crate::oracle::DEFAULT_ORDER_CAP;

    fn system(name: &str, p: u64, r: u32) -> ShiftSystem {
        let knot = builtin_knot(name).unwrap();
        let pair = knot.pair_for_prime(p).unwrap();
        ShiftSystem::new(pair, RingParams::new(p, r).unwrap()).unwrap()
    }

    #[test]
    fn trefoil_orders() {
        assert_eq!(order_of_transfer(system("trefoil", 2, 1).transfer(), 100).unwrap(), 3);
        assert_eq!(order_of_transfer(system("trefoil", 2, 2).transfer(), 100).unwrap(), 6);
        assert_eq!(order_of_transfer(system("trefoil", 2, 3).transfer(), 100).unwrap(), 6);
        assert_eq!(order_of_transfer(system("trefoil", 3, 1).transfer(), 100).unwrap(), 6);
    }

    #[test]
    fn figure8_order_grows_mod_5() {
        assert_eq!(order_of_transfer(system("figure8", 5, 1).transfer(), 100).unwrap(), 10);
        assert_eq!(order_of_transfer(system("figure8", 5, 2).transfer(), 100).unwrap(), 50);
        assert_eq!(order_of_transfer(system("figure8", 5, 3).transfer(), 100).unwrap(), 250);
    }

    #[test]
    fn empty_transfer_has_order_one() {
        let sys = system("5_2", 2, 2);
        assert_eq!(sys.rank(), 0);
        assert_eq!(order_of_transfer(sys.transfer(), 100).unwrap(), 1);
        let spectrum = period_set(sys.transfer(), 100).unwrap();
        assert_eq!(spectrum.d, 1);
        assert_eq!(spectrum.periods(), vec![1]);
        assert_eq!(spectrum.total_states(), BigUint::from(1u32));
    }

    #[test]
    fn order_cap_triggers() {
        let t = system("trefoil", 3, 1);
        assert!(matches!(
            order_of_transfer(t.transfer(), 2),
            Err(Error::OrderCapExceeded { cap: 2 })
        ));
    }

    #[test]
    fn trefoil_period_sets() {
        let s1 = period_set(system("trefoil", 2, 1).transfer(), 100).unwrap();
        assert_eq!(s1.periods(), vec![1, 3]);
        assert_eq!(s1.counts[&1], BigUint::from(1u32));
        assert_eq!(s1.counts[&3], BigUint::from(3u32));

        let s2 = period_set(system("trefoil", 2, 2).transfer(), 100).unwrap();
        assert_eq!(s2.periods(), vec![1, 3, 6]);
        assert_eq!(s2.counts[&1], BigUint::from(1u32));
        assert_eq!(s2.counts[&3], BigUint::from(3u32));
        assert_eq!(s2.counts[&6], BigUint::from(12u32));

        let s3 = period_set(system("trefoil", 3, 1).transfer(), 100).unwrap();
        assert_eq!(s3.periods(), vec![1, 2, 6]);
        assert_eq!(s3.counts[&1], BigUint::from(1u32));
        assert_eq!(s3.counts[&2], BigUint::from(2u32));
        assert_eq!(s3.counts[&6], BigUint::from(6u32));
    }

    #[test]
    fn period_totals_cover_v() {
        for (name, p, r) in [("trefoil", 2u64, 2u32), ("figure8", 5, 2), ("5_1", 3, 2)] {
            let sys = system(name, p, r);
            let spectrum = period_set(sys.transfer(), DEFAULT_ORDER_CAP).unwrap();
            assert_eq!(
                spectrum.total_states(),
                BigUint::from(p).pow(r * sys.rank() as u32),
                "{name} p={p} r={r}"
            );
        }
    }

    #[test]
    fn towers_and_patterns() {
        let knot = builtin_knot("trefoil").unwrap();
        let pair = knot.pair_for_prime(2).unwrap();
        let tower = period_tower(&pair, 2, 3, 100).unwrap();
        assert_eq!(tower.orders, vec![3, 6, 6]);
        assert_eq!(tower.pattern, TowerPattern::StabilizedAfterGrowth);

        let pair3 = knot.pair_for_prime(3).unwrap();
        let tower3 = period_tower(&pair3, 3, 4, 100).unwrap();
        assert_eq!(tower3.orders, vec![6, 6, 6, 6]);
        assert_eq!(tower3.pattern, TowerPattern::Constant);

        let f8 = builtin_knot("figure8").unwrap();
        let pair5 = f8.pair_for_prime(5).unwrap();
        let tower5 = period_tower(&pair5, 5, 3, 100).unwrap();
        assert_eq!(tower5.orders, vec![10, 50, 250]);
        assert_eq!(tower5.pattern, TowerPattern::GrowthFrom(1));

        let pair2 = f8.pair_for_prime(2).unwrap();
        let tower2 = period_tower(&pair2, 2, 4, 100).unwrap();
        assert_eq!(tower2.orders, vec![3, 3, 6, 12]);
        assert_eq!(tower2.pattern, TowerPattern::GrowthFrom(2));
    }

    #[test]
    fn tower_classifier_cases() {
        assert_eq!(classify_tower(&[4, 4, 4], 3), TowerPattern::Constant);
        assert_eq!(classify_tower(&[4], 3), TowerPattern::Constant);
        assert_eq!(classify_tower(&[4, 12, 36], 3), TowerPattern::GrowthFrom(1));
        assert_eq!(classify_tower(&[4, 4, 12, 36], 3), TowerPattern::GrowthFrom(2));
        assert_eq!(classify_tower(&[3, 6, 6, 6], 2), TowerPattern::StabilizedAfterGrowth);
        assert_eq!(classify_tower(&[3, 6, 12, 12], 2), TowerPattern::StabilizedAfterGrowth);
        assert_eq!(classify_tower(&[3, 6, 6, 12], 2), TowerPattern::Other);
    }

    #[test]
    fn group_spec_parsing() {
        let s = AbelianGroupSpec::parse("6").unwrap();
        assert_eq!(s.factors(), &[(2, 1), (3, 1)]);
        let s = AbelianGroupSpec::parse("4,3").unwrap();
        assert_eq!(s.factors(), &[(2, 2), (3, 1)]);
        let s = AbelianGroupSpec::parse("12").unwrap();
        assert_eq!(s.factors(), &[(2, 2), (3, 1)]);
        let s = AbelianGroupSpec::parse("2,2").unwrap();
        assert_eq!(s.factors(), &[(2, 1), (2, 1)]);
        assert_eq!(s.repeated_prime(), Some(2));
        assert_eq!(s.order(), BigUint::from(4u32));
        assert!(AbelianGroupSpec::parse("1").is_err());
        assert!(AbelianGroupSpec::parse("x").is_err());
        assert!(AbelianGroupSpec::parse("").is_err());
        assert_eq!(AbelianGroupSpec::parse("6").unwrap().to_string(), "Z/2 + Z/3");
    }

    #[test]
    fn combine_trefoil_mod_6() {
        let s2 = period_set(system("trefoil", 2, 1).transfer(), 100).unwrap();
        let s3 = period_set(system("trefoil", 3, 1).transfer(), 100).unwrap();
        let spec = AbelianGroupSpec::parse("6").unwrap();
        let combined = combine_abelian(&spec, &[s2, s3]).unwrap();
        assert_eq!(combined.d, 6);
        assert_eq!(combined.periods(), vec![1, 2, 3, 6]);
        // total count: 4 * 9 = 36 tuples
        let total: BigUint = combined.counts.values().sum();
        assert_eq!(total, BigUint::from(36u32));
    }

    #[test]
    fn combine_checks_arity_and_matching() {
        let s2 = period_set(system("trefoil", 2, 1).transfer(), 100).unwrap();
        let spec = AbelianGroupSpec::parse("6").unwrap();
        assert!(combine_abelian(&spec, std::slice::from_ref(&s2)).is_err());
        let spec2 = AbelianGroupSpec::parse("2").unwrap();
        assert!(combine_abelian(&spec2, std::slice::from_ref(&s2)).is_ok());
        let spec4 = AbelianGroupSpec::parse("4").unwrap();
        assert!(combine_abelian(&spec4, &[s2]).is_err());
    }
}
