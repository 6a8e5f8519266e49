/*!
The cocycle algebra of nice cell labels.

Cohomology classes of polygon moduli spaces have distinguished cocycle
representatives supported on *nice* cells: an edge group `I` forced to point
one way, a group `J` forced the opposite way, written `(I J̄)` — in text form
`(1 2' 3)` for `I = {1,3}`, `J = {2}`. A product of such factors with pairwise
disjoint supports is a [`NiceTerm`]; a formal integer (or ℤ₂) combination of
terms is a [`Cocycle`].

The cup product is computed combinatorially:

* factors with disjoint supports simply merge into one term;
* factors sharing exactly one edge `x` fuse: flip each so `x` lies on the `I`
  side (a flip negates, since `(I J̄) = −(J Ī)`), take unions of the sides,
  and canonicalize so the least support element is undashed;
* factors sharing two or more edges are non-transversal — except for the ℤ₂
  square of a plain pair `(i j)`, which rewrites as
  `(i j k) + (i j l) + (i j)(k l)` for fresh edges `k < l` and recurses.

Terms that exceed top degree or label an empty cell for the given lengths are
pruned on the fly. Evaluating a top-degree cocycle sums, over its terms, the
coefficient times an orientation sign `ε = ±1` per factor (`+1` iff the `I`
side outweighs the `J` side), provided the three effective lengths of the
collapsed polygon satisfy the strict triangle inequality; ℤ₂ evaluation just
counts feasible terms mod 2.
*/

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::lengths::{polygon_closes_nums, LengthVector, Rat};
use crate::{Error, Result};

/// A set of edge indices `1..=32` as a bitmask (edge `i` ↔ bit `i−1`).
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeSet(u32);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    pub fn singleton(i: usize) -> EdgeSet {
        EdgeSet::EMPTY.with(i)
    }

    pub fn from_elems(elems: &[usize]) -> EdgeSet {
        elems.iter().copied().collect()
    }

    /// All edges `1..=n`.
    pub fn full(n: usize) -> EdgeSet {
        assert!(n <= 32);
        EdgeSet(if n == 32 { u32::MAX } else { (1 << n) - 1 })
    }

    #[must_use]
    pub fn with(self, i: usize) -> EdgeSet {
        assert!((1..=32).contains(&i), "edge index {i} out of range");
        EdgeSet(self.0 | 1 << (i - 1))
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=32).contains(&i) && self.0 >> (i - 1) & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_disjoint(self, other: EdgeSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn min_elem(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (1..=32).filter(move |&i| self.contains(i))
    }

    pub(crate) fn mask(self) -> u32 {
        self.0
    }
}

impl std::ops::BitOr for EdgeSet {
    type Output = EdgeSet;
    fn bitor(self, rhs: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 | rhs.0)
    }
}

impl std::ops::BitAnd for EdgeSet {
    type Output = EdgeSet;
    fn bitand(self, rhs: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 & rhs.0)
    }
}

impl std::ops::Sub for EdgeSet {
    type Output = EdgeSet;
    fn sub(self, rhs: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 & !rhs.0)
    }
}

impl FromIterator<usize> for EdgeSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> EdgeSet {
        iter.into_iter().fold(EdgeSet::EMPTY, EdgeSet::with)
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Coefficient ring of a cocycle: ℤ for the spatial (complex) moduli space,
/// ℤ₂ for the planar one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingTag {
    Z,
    Z2,
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RingTag::Z => "Z",
            RingTag::Z2 => "Z2",
        })
    }
}

impl std::str::FromStr for RingTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<RingTag> {
        match s.to_ascii_lowercase().as_str() {
            "z" => Ok(RingTag::Z),
            "z2" => Ok(RingTag::Z2),
            _ => Err(Error::Parse(format!("unknown ring {s:?}; expected z or z2"))),
        }
    }
}

/// One nice factor `(I J̄)` in canonical form: `I` and `J` disjoint,
/// `|I ∪ J| ≥ 2`, and the least support element undashed (in `I`).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct NiceFactor {
    i: EdgeSet,
    j: EdgeSet,
}

impl NiceFactor {
    pub fn i(&self) -> EdgeSet {
        self.i
    }

    pub fn j(&self) -> EdgeSet {
        self.j
    }

    pub fn support(&self) -> EdgeSet {
        self.i | self.j
    }

    /// A factor on `m` edges freezes them into one straight segment and cuts
    /// the cell dimension by `m − 1`.
    pub fn degree(&self) -> usize {
        self.support().len() - 1
    }
}

impl Ord for NiceFactor {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.support().mask(), self.j.mask()).cmp(&(other.support().mask(), other.j.mask()))
    }
}

impl PartialOrd for NiceFactor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NiceFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.support().iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
            if self.j.contains(e) {
                write!(f, "'")?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Debug for NiceFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Result of canonicalizing a raw `(I J̄)` label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalizedFactor {
    /// A single-edge label is the unit cocycle (one edge, no constraint).
    Unit,
    Factor(NiceFactor),
}

/// Canonicalize raw sides into a [`NormalizedFactor`] and a sign.
///
/// The sides must be disjoint and jointly nonempty. A singleton label
/// collapses to `Unit`, with sign −1 if the edge was dashed; a larger label
/// is flipped, with sign −1, whenever its least support element sits in
/// `raw_j` (the flip rule `(I J̄) = −(J Ī)`). Over ℤ₂ the returned sign is
/// always +1.
pub fn normalize_factor(
    raw_i: EdgeSet,
    raw_j: EdgeSet,
    ring: RingTag,
) -> Result<(NormalizedFactor, i64)> {
    if !raw_i.is_disjoint(raw_j) {
        return Err(Error::OverlappingSides(format!("{:?}", raw_i & raw_j)));
    }
    let support = raw_i | raw_j;
    assert!(!support.is_empty(), "a factor needs at least one edge");
    let keep_sign = |s: i64| if ring == RingTag::Z2 { 1 } else { s };
    if support.len() == 1 {
        let sign = if raw_j.is_empty() { 1 } else { -1 };
        return Ok((NormalizedFactor::Unit, keep_sign(sign)));
    }
    let least = support.min_elem().expect("nonempty support");
    if raw_j.contains(least) {
        Ok((
            NormalizedFactor::Factor(NiceFactor { i: raw_j, j: raw_i }),
            keep_sign(-1),
        ))
    } else {
        Ok((
            NormalizedFactor::Factor(NiceFactor { i: raw_i, j: raw_j }),
            1,
        ))
    }
}

/// A product of nice factors with pairwise disjoint supports, kept sorted by
/// least support element. The empty product is the unit term, rendered `(1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NiceTerm {
    factors: Vec<NiceFactor>,
}

impl NiceTerm {
    pub fn unit() -> NiceTerm {
        NiceTerm { factors: Vec::new() }
    }

    pub fn new(factors: Vec<NiceFactor>) -> Result<NiceTerm> {
        let mut seen = EdgeSet::EMPTY;
        for f in &factors {
            if !seen.is_disjoint(f.support()) {
                return Err(Error::NonTransversal(format!(
                    "product factors share edges {:?}",
                    seen & f.support()
                )));
            }
            seen = seen | f.support();
        }
        Ok(NiceTerm::from_disjoint(factors))
    }

    /// Internal constructor for factor lists already known to be disjoint.
    fn from_disjoint(mut factors: Vec<NiceFactor>) -> NiceTerm {
        factors.sort_by_key(|f| f.support().min_elem());
        NiceTerm { factors }
    }

    pub fn single(f: NiceFactor) -> NiceTerm {
        NiceTerm { factors: vec![f] }
    }

    pub fn factors(&self) -> &[NiceFactor] {
        &self.factors
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn support(&self) -> EdgeSet {
        self.factors
            .iter()
            .fold(EdgeSet::EMPTY, |acc, f| acc | f.support())
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(NiceFactor::degree).sum()
    }
}

impl fmt::Display for NiceTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "(1)");
        }
        for (k, fac) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{fac}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for NiceTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A formal combination of nice terms over ℤ or ℤ₂, on a polygon with `n`
/// edges. ℤ₂ coefficients are stored as 1; vanished terms are dropped, so the
/// zero cocycle has no terms.
#[derive(Clone, PartialEq, Eq)]
pub struct Cocycle {
    ring: RingTag,
    n: usize,
    terms: BTreeMap<NiceTerm, i64>,
}

impl Cocycle {
    pub fn zero(ring: RingTag, n: usize) -> Cocycle {
        Cocycle {
            ring,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(ring: RingTag, n: usize) -> Cocycle {
        let mut c = Cocycle::zero(ring, n);
        c.accumulate(NiceTerm::unit(), 1);
        c
    }

    pub fn from_terms<T>(ring: RingTag, n: usize, terms: T) -> Cocycle
    where
        T: IntoIterator<Item = (NiceTerm, i64)>,
    {
        let mut c = Cocycle::zero(ring, n);
        for (t, coeff) in terms {
            c.accumulate(t, coeff);
        }
        c
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NiceTerm, i64)> {
        self.terms.iter().map(|(t, &c)| (t, c))
    }

    pub fn coeff(&self, t: &NiceTerm) -> i64 {
        self.terms.get(t).copied().unwrap_or(0)
    }

    /// Add `coeff`·`term`, folding ℤ₂ coefficients and dropping zeros.
    pub fn accumulate(&mut self, term: NiceTerm, coeff: i64) {
        debug_assert!(
            term.support().mask() >> self.n == 0,
            "term uses edges beyond n"
        );
        let fold = |c: i64| if self.ring == RingTag::Z2 { c.rem_euclid(2) } else { c };
        match self.terms.entry(term) {
            Entry::Vacant(v) => {
                let c = fold(coeff);
                if c != 0 {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let c = fold(*o.get() + coeff);
                if c == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = c;
                }
            }
        }
    }

    /// True when all terms share one degree (vacuously true for zero).
    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(NiceTerm::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// The common degree of a nonzero homogeneous cocycle.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        if !self.is_homogeneous() {
            return None;
        }
        self.terms.keys().next().map(NiceTerm::degree)
    }

    /// Drop terms that exceed the top degree `n − 3` or label a cell that is
    /// empty for `l`. Errors only if an emptiness test hits an exact tie.
    pub fn prune(&mut self, l: &LengthVector) -> Result<()> {
        assert_eq!(l.n(), self.n, "length vector size must match the cocycle");
        let top = self.n - 3;
        let mut kept = BTreeMap::new();
        for (t, c) in std::mem::take(&mut self.terms) {
            if t.degree() > top || term_is_empty(l, &t)? {
                continue;
            }
            kept.insert(t, c);
        }
        self.terms = kept;
        Ok(())
    }

    /// Parse the textual form produced by `Display`: signed terms of
    /// `*`-joined factors, e.g. `(1 2 3)-2(1 4')*(2 5)`, `(1)` for the unit
    /// term, `0` for zero. Factor bodies may also be compact digit runs
    /// (`(12'3)`) as long as every index is a single digit.
    pub fn parse(input: &str, ring: RingTag, n: usize) -> Result<Cocycle> {
        parse_cocycle(input, ring, n)
    }
}

impl fmt::Display for Cocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (t, c)) in self.terms.iter().enumerate() {
            let c = *c;
            if c < 0 {
                write!(f, "-")?;
            } else if k > 0 {
                write!(f, "+")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; {}-gon; {}]", self.ring, self.n, self)
    }
}

/// Orientation sign of one factor: +1 iff the `I` side outweighs the `J`
/// side. An exact tie is a wall.
pub fn factor_epsilon(l: &LengthVector, f: &NiceFactor) -> Result<i64> {
    let mut diff = BigInt::zero();
    for e in f.i().iter() {
        diff += &l.nums()[e - 1];
    }
    for e in f.j().iter() {
        diff -= &l.nums()[e - 1];
    }
    match diff.sign() {
        num_bigint::Sign::Plus => Ok(1),
        num_bigint::Sign::Minus => Ok(-1),
        num_bigint::Sign::NoSign => Err(Error::NonGeneric(format!(
            "factor {f} has balanced sides"
        ))),
    }
}

/// Integer-numerator effective lengths of a term: `|Σ_I l − Σ_J l|` for each
/// factor (in term order), then each free edge's numerator, ascending.
fn effective_nums(l: &LengthVector, t: &NiceTerm) -> Result<Vec<BigInt>> {
    let mut out = Vec::with_capacity(l.n() - t.degree());
    for f in t.factors() {
        let mut diff = BigInt::zero();
        for e in f.i().iter() {
            diff += &l.nums()[e - 1];
        }
        for e in f.j().iter() {
            diff -= &l.nums()[e - 1];
        }
        if diff.is_zero() {
            return Err(Error::NonGeneric(format!(
                "factor {f} collapses to zero length"
            )));
        }
        out.push(diff.magnitude().clone().into());
    }
    let support = t.support();
    for e in 1..=l.n() {
        if !support.contains(e) {
            out.push(l.nums()[e - 1].clone());
        }
    }
    Ok(out)
}

/// Effective side lengths of the collapsed polygon the term describes: one
/// side `|Σ_I l − Σ_J l|` per factor, then the free edges. The number of
/// sides is `n − degree`.
pub fn effective_lengths(l: &LengthVector, t: &NiceTerm) -> Result<Vec<Rat>> {
    Ok(effective_nums(l, t)?
        .into_iter()
        .map(|num| Rat::new(num, l.den().clone()))
        .collect())
}

/// Does the term label an empty cell for `l`? True iff the collapsed polygon
/// with the term's effective lengths cannot close.
pub fn term_is_empty(l: &LengthVector, t: &NiceTerm) -> Result<bool> {
    Ok(!polygon_closes_nums(&effective_nums(l, t)?))
}

fn ring_sign(ring: RingTag, s: i64) -> i64 {
    if ring == RingTag::Z2 {
        1
    } else {
        s
    }
}

/// Fuse two factors sharing exactly the edge `x`.
fn merge_pair(ring: RingTag, f: NiceFactor, g: NiceFactor, x: usize) -> (NiceFactor, i64) {
    let mut sign = 1i64;
    let (fi, fj) = if f.j().contains(x) {
        sign = -sign;
        (f.j(), f.i())
    } else {
        (f.i(), f.j())
    };
    let (gi, gj) = if g.j().contains(x) {
        sign = -sign;
        (g.j(), g.i())
    } else {
        (g.i(), g.j())
    };
    let (norm, s) = normalize_factor(fi | gi, fj | gj, ring)
        .expect("sides stay disjoint when exactly one edge is shared");
    match norm {
        NormalizedFactor::Factor(m) => (m, ring_sign(ring, sign * s)),
        NormalizedFactor::Unit => unreachable!("merged support has at least 3 edges"),
    }
}

/// Reduce a working multiset of factors to a sum of disjoint-support terms.
fn resolve(
    n: usize,
    ring: RingTag,
    mut work: Vec<NiceFactor>,
    sign: i64,
    out: &mut Vec<(NiceTerm, i64)>,
) -> Result<()> {
    let mut sign = sign;
    'scan: loop {
        for p in 0..work.len() {
            for q in p + 1..work.len() {
                let shared = work[p].support() & work[q].support();
                match shared.len() {
                    0 => continue,
                    1 => {
                        let x = shared.min_elem().expect("one shared edge");
                        let (merged, s) = merge_pair(ring, work[p], work[q], x);
                        work[p] = merged;
                        work.remove(q);
                        sign *= s;
                        continue 'scan;
                    }
                    _ => {
                        let f = work[p];
                        let plain_square = ring == RingTag::Z2
                            && work[q] == f
                            && f.j().is_empty()
                            && f.support().len() == 2;
                        if !plain_square {
                            return Err(Error::NonTransversal(format!(
                                "factors {} and {} share edges {:?}",
                                work[p], work[q], shared
                            )));
                        }
                        // ℤ₂ square of a plain pair (i j): rewrite as
                        // (i j k) + (i j l) + (i j)(k l) with k < l fresh,
                        // i.e. cup with an Euler representative instead.
                        let used = work
                            .iter()
                            .fold(EdgeSet::EMPTY, |acc, w| acc | w.support());
                        let fresh: Vec<usize> =
                            (1..=n).filter(|&e| !used.contains(e)).take(2).collect();
                        let [k, lx] = fresh[..] else {
                            return Err(Error::FreshIndexExhausted);
                        };
                        work.remove(q);
                        work.remove(p);
                        let pair = |a: EdgeSet| NiceFactor { i: a, j: EdgeSet::EMPTY };
                        let branches: [Vec<NiceFactor>; 3] = [
                            vec![pair(f.support().with(k))],
                            vec![pair(f.support().with(lx))],
                            vec![f, pair(EdgeSet::singleton(k).with(lx))],
                        ];
                        for extra in branches {
                            let mut w = work.clone();
                            w.extend(extra);
                            resolve(n, ring, w, sign, out)?;
                        }
                        return Ok(());
                    }
                }
            }
        }
        break;
    }
    out.push((NiceTerm::from_disjoint(work), sign));
    Ok(())
}

/// Cup product of two cocycles over the same ring, pruned for `l`.
pub fn cup(l: &LengthVector, a: &Cocycle, b: &Cocycle) -> Result<Cocycle> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch);
    }
    assert_eq!(a.n(), b.n(), "cocycles live on polygons of different sizes");
    assert_eq!(l.n(), a.n(), "length vector size must match the cocycles");
    let mut acc = Cocycle::zero(a.ring(), a.n());
    let mut expansion = Vec::new();
    for (ta, ca) in a.terms() {
        for (tb, cb) in b.terms() {
            let work: Vec<NiceFactor> = ta
                .factors()
                .iter()
                .chain(tb.factors())
                .copied()
                .collect();
            resolve(a.n(), a.ring(), work, 1, &mut expansion)?;
            for (t, s) in expansion.drain(..) {
                acc.accumulate(t, ca * cb * s);
            }
        }
    }
    acc.prune(l)?;
    Ok(acc)
}

/// Evaluate a homogeneous top-degree (`n − 3`) cocycle against the moduli
/// space of `l`: over ℤ the signed count `Σ coeff·Π ε(factor)` of terms whose
/// three effective lengths form a strict triangle, over ℤ₂ the same count
/// mod 2. Zero evaluates to 0; mixed or wrong degrees are `NotTopDegree`.
pub fn evaluate_top(l: &LengthVector, c: &Cocycle) -> Result<i64> {
    let n = l.n();
    assert_eq!(c.n(), n, "length vector size must match the cocycle");
    let top = n - 3;
    if c.terms().any(|(t, _)| t.degree() != top) {
        return Err(Error::NotTopDegree);
    }
    let mut acc = 0i64;
    for (t, coeff) in c.terms() {
        let eff = effective_nums(l, t)?;
        debug_assert_eq!(eff.len(), 3);
        let total: BigInt = eff.iter().sum();
        let max = eff.iter().max().expect("three sides");
        match (max * 2u8).cmp(&total) {
            Ordering::Equal => {
                return Err(Error::NonGeneric(format!(
                    "term {t} collapses to a degenerate triangle"
                )))
            }
            Ordering::Greater => continue, // cell empty for l
            Ordering::Less => {}
        }
        let mut orientation = 1i64;
        if c.ring() == RingTag::Z {
            for f in t.factors() {
                orientation *= factor_epsilon(l, f)?;
            }
        }
        acc += coeff * orientation;
    }
    Ok(if c.ring() == RingTag::Z2 {
        acc.rem_euclid(2)
    } else {
        acc
    })
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    ring: RingTag,
    n: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn fail<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} at byte {}", self.pos)))
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.fail("expected digits");
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("digits are utf8")
            .parse()
            .map_err(|_| Error::Parse("coefficient out of range".into()))
    }

    /// One `( … )` factor; `None` marks the unit factor `(1)`.
    fn factor(&mut self) -> Result<Option<(NiceFactor, i64)>> {
        if self.bump() != Some(b'(') {
            return self.fail("expected '('");
        }
        let start = self.pos;
        let Some(rel) = self.bytes[self.pos..].iter().position(|&b| b == b')') else {
            return self.fail("unclosed factor");
        };
        let body = std::str::from_utf8(&self.bytes[start..start + rel])
            .map_err(|_| Error::Parse("factor body is not utf8".into()))?;
        self.pos = start + rel + 1;

        // Spaced bodies list whole indices; compact bodies are digit runs
        // where every index is a single digit: "(12'3)" == "(1 2' 3)".
        let mut elems: Vec<(usize, bool)> = Vec::new();
        if body.split_whitespace().count() > 1 {
            for tok in body.split_whitespace() {
                let (digits, dashed) = match tok.strip_suffix('\'') {
                    Some(head) => (head, true),
                    None => (tok, false),
                };
                let idx: usize = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad edge index {tok:?}")))?;
                elems.push((idx, dashed));
            }
        } else {
            let compact = body.trim();
            let mut chars = compact.chars().peekable();
            while let Some(ch) = chars.next() {
                if !ch.is_ascii_digit() {
                    return Err(Error::Parse(format!("bad factor body {body:?}")));
                }
                let idx = ch.to_digit(10).expect("digit") as usize;
                let dashed = chars.peek() == Some(&'\'');
                if dashed {
                    chars.next();
                }
                elems.push((idx, dashed));
            }
        }
        if elems.is_empty() {
            return Err(Error::Parse("empty factor".into()));
        }
        if elems == [(1, false)] {
            return Ok(None); // the unit term's marker
        }
        let mut raw_i = EdgeSet::EMPTY;
        let mut raw_j = EdgeSet::EMPTY;
        for (idx, dashed) in elems {
            if idx < 1 || idx > self.n {
                return Err(Error::Parse(format!(
                    "edge index {idx} out of range 1..={}",
                    self.n
                )));
            }
            if (raw_i | raw_j).contains(idx) {
                return Err(Error::Parse(format!("repeated edge index {idx}")));
            }
            if dashed {
                raw_j = raw_j.with(idx);
            } else {
                raw_i = raw_i.with(idx);
            }
        }
        match normalize_factor(raw_i, raw_j, self.ring)? {
            (NormalizedFactor::Factor(f), s) => Ok(Some((f, s))),
            (NormalizedFactor::Unit, _) => unreachable!("two or more elements"),
        }
    }
}

fn parse_cocycle(input: &str, ring: RingTag, n: usize) -> Result<Cocycle> {
    let trimmed = input.trim();
    if trimmed == "0" {
        return Ok(Cocycle::zero(ring, n));
    }
    let mut p = Parser {
        bytes: trimmed.as_bytes(),
        pos: 0,
        ring,
        n,
    };
    let mut acc = Cocycle::zero(ring, n);
    let mut first = true;
    loop {
        let mut coeff: i64 = match p.peek() {
            Some(b'-') => {
                p.bump();
                -1
            }
            Some(b'+') => {
                p.bump();
                1
            }
            Some(_) if first => 1,
            Some(_) => return p.fail("expected '+' or '-' between terms"),
            None if first => return p.fail("empty cocycle (write 0 for zero)"),
            None => break,
        };
        first = false;
        if p.peek().is_some_and(|b| b.is_ascii_digit()) {
            coeff *= p.integer()?;
        }
        let mut factors = Vec::new();
        loop {
            if let Some((f, s)) = p.factor()? {
                factors.push(f);
                coeff *= s;
            }
            if p.peek() == Some(b'*') {
                p.bump();
            } else {
                break;
            }
        }
        let term = NiceTerm::new(factors)
            .map_err(|e| Error::Parse(format!("invalid term: {e}")))?;
        acc.accumulate(term, coeff);
    }
    Ok(acc)
}
