/*!
Length vectors: genericity, symbolic perturbation, chambers.

The moduli space of a polygon depends on its length vector `L = (l_1, …, l_n)`
only through the *chamber* of `L`: the connected region of the positive
orthant cut out by the wall hyperplanes `Σ_{i∈S} l_i = Σ_{i∉S} l_i`. A vector
is *generic* here in the strong sense that **no** signed sum `Σ ±l_i` over any
subset vanishes — equivalently, all `2^n` subset sums are pairwise distinct.
That is deliberately stronger than avoiding the walls themselves: it also
keeps every comparison made downstream (triangle tests, orientation signs)
away from ties.

Vectors with symbolic infinitesimals, written `eps` or `3+eps`, are realized
by [`SymbolicLengths::perturb`], which replaces the `i`-th infinitesimal with
`η·2^{i−1}` for an `η` small enough that no wall is crossed and the distinct
powers of two break every potential tie.
*/

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exact scalar used throughout the crate.
pub type Rat = BigRational;

/// Parse one nonnegative rational: `"3"`, `"5/2"`, or `"2.5"`.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: BigInt = if int.is_empty() { BigInt::zero() } else { int.parse().map_err(|_| bad())? };
        let num: BigInt = frac.parse().map_err(|_| bad())?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(Rat::from(int) + Rat::new(num, den));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rat::from(n))
}

/// Rewrite `values` over a common denominator, returning the numerators and
/// that denominator. The hot loops below work on plain `BigInt`s.
fn common_numerators(values: &[Rat]) -> (Vec<BigInt>, BigInt) {
    let den = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let nums = values
        .iter()
        .map(|v| v.numer() * (&den / v.denom()))
        .collect();
    (nums, den)
}

/// Outcome of one pass over the sorted subset sums.
struct SumScan {
    /// All `2^n` subset sums pairwise distinct?
    distinct: bool,
    /// Smallest *nonzero* gap between two subset sums (None if all equal).
    min_gap: Option<BigInt>,
}

fn subset_sum_scan(nums: &[BigInt]) -> SumScan {
    let n = nums.len();
    assert!(n <= 26, "subset-sum scan is exponential; n={n} is past any sane use");
    let mut sums = Vec::with_capacity(1usize << n);
    sums.push(BigInt::zero());
    for v in nums {
        for k in 0..sums.len() {
            let s = &sums[k] + v;
            sums.push(s);
        }
    }
    sums.sort_unstable();
    let mut distinct = true;
    let mut min_gap: Option<BigInt> = None;
    for w in sums.windows(2) {
        let gap = &w[1] - &w[0];
        if gap.is_zero() {
            distinct = false;
        } else if min_gap.as_ref().is_none_or(|m| gap < *m) {
            min_gap = Some(gap);
        }
    }
    SumScan { distinct, min_gap }
}

/// A concrete positive length vector, indexed `1..=n`.
///
/// Construction caches the common-denominator numerators so that the
/// exponential scans and per-term triangle tests run on integers.
#[derive(Clone)]
pub struct LengthVector {
    values: Vec<Rat>,
    nums: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for LengthVector {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}
impl Eq for LengthVector {}

impl LengthVector {
    pub fn new(values: Vec<Rat>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::BadLengths(format!(
                "need at least 3 edges, got {}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_positive()) {
            return Err(Error::BadLengths(format!("lengths must be positive, got {bad}")));
        }
        let (nums, den) = common_numerators(&values);
        Ok(LengthVector { values, nums, den })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    /// Length of edge `i` (1-based).
    pub fn length(&self, i: usize) -> &Rat {
        &self.values[i - 1]
    }

    pub(crate) fn nums(&self) -> &[BigInt] {
        &self.nums
    }

    pub(crate) fn den(&self) -> &BigInt {
        &self.den
    }

    /// `Σ signs[i]·l_{i+1}` for `signs[i] ∈ {−1, 0, +1}`.
    pub fn signed_sum(&self, signs: &[i8]) -> Rat {
        assert_eq!(signs.len(), self.n(), "one sign per edge");
        let mut acc = BigInt::zero();
        for (s, v) in signs.iter().zip(&self.nums) {
            match s {
                1 => acc += v,
                -1 => acc -= v,
                0 => {}
                _ => panic!("signs must be -1, 0 or +1"),
            }
        }
        Rat::new(acc, self.den.clone())
    }

    /// Strong genericity: every signed sum `Σ ±l_i` over every nonempty
    /// subset is nonzero, i.e. all `2^n` subset sums are distinct.
    pub fn is_generic(&self) -> bool {
        subset_sum_scan(&self.nums).distinct
    }
}

impl fmt::Display for LengthVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LengthVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LengthVector({self})")
    }
}

/// A length vector with symbolic infinitesimals: base values plus a set of
/// edges carrying `+eps` markers. `perturb` realizes the infinitesimals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicLengths {
    base: Vec<Rat>,
    epsilon_flags: BTreeSet<usize>,
}

impl SymbolicLengths {
    pub fn new(base: Vec<Rat>, epsilon_flags: BTreeSet<usize>) -> Result<Self> {
        let n = base.len();
        if n < 3 {
            return Err(Error::BadLengths(format!("need at least 3 edges, got {n}")));
        }
        if let Some(bad) = base.iter().find(|v| v.is_negative()) {
            return Err(Error::BadLengths(format!("base lengths must be >= 0, got {bad}")));
        }
        if let Some(&bad) = epsilon_flags.iter().find(|&&i| i < 1 || i > n) {
            return Err(Error::BadLengths(format!("epsilon flag {bad} out of range 1..={n}")));
        }
        for (k, v) in base.iter().enumerate() {
            if v.is_zero() && !epsilon_flags.contains(&(k + 1)) {
                return Err(Error::BadLengths(format!(
                    "edge {} has zero length and no epsilon marker",
                    k + 1
                )));
            }
        }
        Ok(SymbolicLengths { base, epsilon_flags })
    }

    /// A plain vector with no infinitesimals.
    pub fn exact(values: Vec<Rat>) -> Result<Self> {
        SymbolicLengths::new(values, BTreeSet::new())
    }

    /// Parse a comma-separated list where each entry is a nonnegative
    /// rational (`3`, `5/2`, `2.5`), the bare token `eps`, or a rational with
    /// an `+eps` suffix (`1+eps`).
    pub fn parse(spec: &str) -> Result<Self> {
        let mut base = Vec::new();
        let mut flags = BTreeSet::new();
        for (k, raw) in spec.split(',').enumerate() {
            let tok = raw.trim();
            if tok == "eps" {
                base.push(Rat::zero());
                flags.insert(k + 1);
            } else if let Some(head) = tok.strip_suffix("+eps") {
                base.push(parse_rational(head)?);
                flags.insert(k + 1);
            } else {
                base.push(parse_rational(tok)?);
            }
        }
        SymbolicLengths::new(base, flags)
    }

    pub fn n(&self) -> usize {
        self.base.len()
    }

    pub fn base(&self) -> &[Rat] {
        &self.base
    }

    pub fn epsilon_flags(&self) -> &BTreeSet<usize> {
        &self.epsilon_flags
    }

    /// Realize the infinitesimals: edge `i` gains `η·2^{i−1}` where
    /// `η = m/2^{n+2}` and `m` is the smallest nonzero `|Σ ±l_i|` of the base
    /// (1 if every signed sum vanishes). If the base is itself non-generic,
    /// *every* edge is perturbed, not just the flagged ones; the distinct
    /// powers of two then break all ties at once. The result is always
    /// strongly generic and stays inside the base's chamber: the total
    /// perturbation of any signed sum is below `m/4`.
    pub fn perturb(&self) -> LengthVector {
        self.perturb_shrunk(0)
    }

    /// Like [`perturb`](Self::perturb) but with `η` halved `halvings` more
    /// times. Any two choices land in the same chamber; the invariant suites
    /// compare a few of them.
    pub fn perturb_shrunk(&self, halvings: u32) -> LengthVector {
        let n = self.n();
        let (nums, den) = common_numerators(&self.base);
        let scan = subset_sum_scan(&nums);
        let m = match scan.min_gap {
            Some(gap) => Rat::new(gap, den),
            None => Rat::one(),
        };
        let eta = m / Rat::from(BigInt::from(2u8).pow(n as u32 + 2 + halvings));
        let everything: BTreeSet<usize>;
        let flagged = if scan.distinct {
            &self.epsilon_flags
        } else {
            everything = (1..=n).collect();
            &everything
        };
        let values = self
            .base
            .iter()
            .enumerate()
            .map(|(k, v)| {
                if flagged.contains(&(k + 1)) {
                    v + &eta * Rat::from(BigInt::from(2u8).pow(k as u32))
                } else {
                    v.clone()
                }
            })
            .collect();
        let lv = LengthVector::new(values).expect("perturbed lengths are positive");
        assert!(lv.is_generic(), "perturbation must produce a generic vector");
        lv
    }
}

/// The chamber of a length vector, recorded as the sign of
/// `Σ_S l − Σ_{S^c} l` for every subset `S ∋ 1`, indexed by the bitmask of
/// `S ∩ {2, …, n}`. Two vectors share all moduli-space invariants iff their
/// signatures are equal.
#[derive(Clone, PartialEq, Eq)]
pub struct ChamberSignature {
    n: usize,
    signs: Vec<i8>,
}

impl ChamberSignature {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `signs()[m]` is the sign for `S = {1} ∪ {i ≥ 2 : bit i−2 of m}`.
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Iterate `(S, sign)` pairs with `S` as a sorted index list.
    pub fn subsets(&self) -> impl Iterator<Item = (Vec<usize>, i8)> + '_ {
        self.signs.iter().enumerate().map(move |(mask, &s)| {
            let mut subset = vec![1];
            subset.extend((2..=self.n).filter(|i| mask >> (i - 2) & 1 == 1));
            (subset, s)
        })
    }
}

impl fmt::Debug for ChamberSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChamberSignature(n={}, ", self.n)?;
        for s in &self.signs {
            write!(f, "{}", if *s > 0 { '+' } else { '-' })?;
        }
        write!(f, ")")
    }
}

/// Compute the chamber signature of `l`.
///
/// Only full-partition walls matter here, so this succeeds on vectors that
/// fail strong genericity (the equilateral pentagon has odd subset sums
/// against an odd total, hence no ties); an exact tie on some partition is a
/// genuine wall and raises `NonGeneric`.
pub fn chamber_signature(l: &LengthVector) -> Result<ChamberSignature> {
    let n = l.n();
    let total: BigInt = l.nums().iter().sum();
    let mcount = 1usize << (n - 1);
    let mut signs = vec![0i8; mcount];
    // Gray-code walk over subsets of {2, …, n}; `twice_s` tracks 2·Σ_S.
    let mut twice_s = &l.nums()[0] * 2u8;
    let mut mask = 0usize;
    for k in 0..mcount {
        if k > 0 {
            let bit = k.trailing_zeros() as usize;
            mask ^= 1 << bit;
            let v = &l.nums()[bit + 1] * 2u8;
            if mask >> bit & 1 == 1 {
                twice_s += v;
            } else {
                twice_s -= v;
            }
        }
        let diff = &twice_s - &total;
        if diff.is_zero() {
            let subset: Vec<usize> = std::iter::once(1)
                .chain((2..=n).filter(|i| mask >> (i - 2) & 1 == 1))
                .collect();
            return Err(Error::NonGeneric(format!(
                "partition wall: sum over {subset:?} equals the complementary sum"
            )));
        }
        signs[mask] = if diff.is_positive() { 1 } else { -1 };
    }
    Ok(ChamberSignature { n, signs })
}

/// Does a polygon with these side lengths close with nonempty interior?
/// True iff the largest entry is strictly below the sum of the others.
pub fn polygon_closes(sides: &[Rat]) -> bool {
    if sides.len() < 3 {
        return false;
    }
    let total: Rat = sides.iter().sum();
    let max = sides.iter().max().expect("nonempty");
    max * Rat::from(BigInt::from(2u8)) < total
}

/// Integer-numerator twin of [`polygon_closes`] for the hot paths.
pub(crate) fn polygon_closes_nums(sides: &[BigInt]) -> bool {
    if sides.len() < 3 {
        return false;
    }
    let total: BigInt = sides.iter().sum();
    let max = sides.iter().max().expect("nonempty");
    max * 2u8 < total
}

/// Whether the Chern class of edge `i` vanishes on the spatial moduli space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChernVanishing {
    /// Nonzero for every edge in this chamber.
    NonZero,
    /// Zero: `i` is one of the three dominant edges of an exceptional
    /// chamber (three heavy edges, all others infinitesimal against them).
    ZeroExceptional,
}

/// Decide [`ChernVanishing`] for edge `i` of `l`.
///
/// Sort the lengths in descending order as `a_1 ≥ … ≥ a_n`. If
/// `a_2 + a_3 < a_1 + a_4 + … + a_n`, every Chern class is nonzero; if the
/// inequality is reversed, exactly the three largest edges carry zero classes.
/// An exact tie is a wall.
pub fn chern_nonvanishing(l: &LengthVector, i: usize) -> Result<ChernVanishing> {
    let n = l.n();
    assert!(n >= 4, "spatial moduli space needs n >= 4");
    assert!((1..=n).contains(&i), "edge index out of range");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| l.nums()[b].cmp(&l.nums()[a]).then(a.cmp(&b)));
    let total: BigInt = l.nums().iter().sum();
    // a_2 + a_3 vs a_1 + a_4 + … + a_n  ⟺  2(a_2 + a_3) vs total.
    let lhs = (&l.nums()[order[1]] + &l.nums()[order[2]]) * 2u8;
    match lhs.cmp(&total) {
        std::cmp::Ordering::Equal => Err(Error::NonGeneric(
            "the two largest light sums tie against the dominant edges".into(),
        )),
        std::cmp::Ordering::Less => Ok(ChernVanishing::NonZero),
        std::cmp::Ordering::Greater => {
            if order[..3].contains(&(i - 1)) {
                Ok(ChernVanishing::ZeroExceptional)
            } else {
                Ok(ChernVanishing::NonZero)
            }
        }
    }
}
