/*!
Euler and Chern classes and their top-degree monomials.

Over ℤ₂ the planar moduli space carries the Euler class `e` of its tautological
circle bundle, represented by `(i j) + (i j̄)` for *any* two edges — or by
`(j k) + (k r) + (j r)` for any three. Over ℤ the spatial moduli space carries
one Chern class `Ch(i)` per edge, represented by `(i j) − (i j̄)` for any
partner `j ≠ i`. Different partner choices give cohomologous cocycles, so all
top-degree evaluations agree; the invariant suites exercise exactly that.

A [`MonomialSpec`] names a product `Ch(c₁)^{d₁} ⋯ Ch(c_k)^{d_k}` (ring ℤ) or a
power `e^K` (ring ℤ₂, where only the total degree matters). The canonical
[`RepresentationChoice`] realizes a Chern monomial transversally: every class
shares one *dashed* partner `q₁` (the smallest non-support edge), each class
takes `d_i − 1` further *bold* partners from the following non-support edges,
and the two largest non-support edges stay free — this keeps every pair of
factors overlapping in at most one edge through all the merges, so the cup
product never aborts. `e^K` is realized as the chain
`[(1 2)+(1 2̄)] ⌣ [(2 3)+(2 3̄)] ⌣ ⋯`, or alternatively by the partition
expansion of `e^{n−3}` into plain two-block terms.
*/

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{
    cup, evaluate_top, normalize_factor, Cocycle, EdgeSet, NiceFactor, NiceTerm,
    NormalizedFactor, RingTag,
};
use crate::lengths::LengthVector;
use crate::{Error, Result};

/// A monomial in the natural degree-2 classes: exponents per edge over ℤ,
/// or a plain power of the Euler class over ℤ₂ (edges are irrelevant there,
/// so ℤ₂ monomials are stored in the canonical form `e^total`).
#[derive(Clone, PartialEq, Eq)]
pub struct MonomialSpec {
    ring: RingTag,
    exponents: BTreeMap<usize, u32>,
}

impl MonomialSpec {
    pub fn new(ring: RingTag, exponents: BTreeMap<usize, u32>) -> Result<MonomialSpec> {
        if exponents.is_empty() {
            return Err(Error::BadMonomial("no classes named".into()));
        }
        for (&i, &d) in &exponents {
            if !(1..=32).contains(&i) {
                return Err(Error::BadMonomial(format!("edge index {i} out of range")));
            }
            if d == 0 {
                return Err(Error::BadMonomial(format!("zero exponent on edge {i}")));
            }
        }
        let spec = MonomialSpec { ring, exponents };
        Ok(match ring {
            RingTag::Z => spec,
            // Over ℤ₂ only the total degree matters; canonicalize.
            RingTag::Z2 => MonomialSpec {
                ring,
                exponents: BTreeMap::from([(1, spec.total())]),
            },
        })
    }

    /// `Ch(c₁)^{d₁} ⋯` over ℤ.
    pub fn chern(pairs: &[(usize, u32)]) -> Result<MonomialSpec> {
        MonomialSpec::new(RingTag::Z, pairs.iter().copied().collect())
    }

    /// `e^total` over ℤ₂.
    pub fn euler(total: u32) -> Result<MonomialSpec> {
        MonomialSpec::new(RingTag::Z2, BTreeMap::from([(1, total)]))
    }

    /// Parse `"1:2,4:1"` (ring ℤ) or `"e:3"` (ring ℤ₂). Numeric pairs with
    /// ring ℤ₂ are accepted and collapse to their total degree.
    pub fn parse(s: &str, ring: RingTag) -> Result<MonomialSpec> {
        let mut exponents = BTreeMap::new();
        for item in s.split(',') {
            let item = item.trim();
            let Some((key, val)) = item.split_once(':') else {
                return Err(Error::Parse(format!("expected edge:exponent, got {item:?}")));
            };
            let d: u32 = val
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {val:?}")))?;
            if key.trim() == "e" {
                if ring != RingTag::Z2 {
                    return Err(Error::BadMonomial(
                        "Euler powers e:K live over Z2; pass ring z2".into(),
                    ));
                }
                if s.contains(',') {
                    return Err(Error::Parse("e:K cannot be mixed with edge pairs".into()));
                }
                return MonomialSpec::euler(d);
            }
            let i: usize = key
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad edge index {key:?}")))?;
            if exponents.insert(i, d).is_some() {
                return Err(Error::Parse(format!("edge {i} named twice")));
            }
        }
        MonomialSpec::new(ring, exponents)
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    pub fn exponents(&self) -> &BTreeMap<usize, u32> {
        &self.exponents
    }

    /// Total degree `Σ d_i` in units of degree-2 classes.
    pub fn total(&self) -> u32 {
        self.exponents.values().sum()
    }

    /// Edges carrying classes, ascending (empty meaning for ℤ₂).
    pub fn support(&self) -> Vec<usize> {
        self.exponents.keys().copied().collect()
    }
}

impl fmt::Display for MonomialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ring {
            RingTag::Z2 => write!(f, "e:{}", self.total()),
            RingTag::Z => {
                for (k, (i, d)) in self.exponents.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{i}:{d}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for MonomialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; {}]", self.ring, self)
    }
}

/// Partner edges chosen to represent each Chern class of a monomial:
/// one dashed partner per class and `d_i − 1` bold partners.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationChoice {
    dashed: BTreeMap<usize, usize>,
    bold: BTreeMap<usize, Vec<usize>>,
}

impl RepresentationChoice {
    /// The transversal-by-construction scheme: common dashed partner
    /// `q₁` = least non-support edge, bold partners allocated consecutively
    /// from the following non-support edges in class order, two largest
    /// non-support edges left free.
    pub fn canonical(n: usize, spec: &MonomialSpec) -> Result<RepresentationChoice> {
        let support = spec.support();
        if spec.ring() == RingTag::Z2 {
            // The ℤ₂ chain picks its own consecutive pairs.
            return Ok(RepresentationChoice {
                dashed: BTreeMap::new(),
                bold: BTreeMap::new(),
            });
        }
        if let Some(&max) = support.last() {
            if max > n {
                return Err(Error::BadMonomial(format!(
                    "class edge {max} beyond the polygon's {n} edges"
                )));
            }
        }
        let total = spec.total() as usize;
        if total + 3 > n {
            return Err(Error::BadDegree(format!(
                "degree {total} exceeds the top degree {}",
                n - 3
            )));
        }
        let in_support = EdgeSet::from_elems(&support);
        let mut non_support = (1..=n).filter(|&e| !in_support.contains(e));
        let q1 = non_support.next().expect("n > total ≥ k");
        let mut dashed = BTreeMap::new();
        let mut bold = BTreeMap::new();
        for (&c, &d) in spec.exponents() {
            dashed.insert(c, q1);
            bold.insert(c, non_support.by_ref().take(d as usize - 1).collect());
        }
        Ok(RepresentationChoice { dashed, bold })
    }

    /// The canonical scheme with some dashed partners overridden
    /// (`class → partner`). Overrides may break transversality; the cup
    /// product reports that when it happens.
    pub fn with_dashed_overrides(
        n: usize,
        spec: &MonomialSpec,
        overrides: &BTreeMap<usize, usize>,
    ) -> Result<RepresentationChoice> {
        let mut choice = RepresentationChoice::canonical(n, spec)?;
        for (&c, &p) in overrides {
            if !choice.dashed.contains_key(&c) {
                return Err(Error::BadMonomial(format!(
                    "override names class {c}, which the monomial lacks"
                )));
            }
            if p == c || p < 1 || p > n {
                return Err(Error::BadMonomial(format!(
                    "class {c} cannot take {p} as a partner"
                )));
            }
            choice.dashed.insert(c, p);
        }
        Ok(choice)
    }

    pub fn dashed(&self, class: usize) -> Option<usize> {
        self.dashed.get(&class).copied()
    }

    pub fn bold(&self, class: usize) -> &[usize] {
        self.bold.get(&class).map_or(&[], Vec::as_slice)
    }
}

fn plain_pair(a: usize, b: usize) -> NiceFactor {
    match normalize_factor(
        EdgeSet::singleton(a).with(b),
        EdgeSet::EMPTY,
        RingTag::Z2,
    ) {
        Ok((NormalizedFactor::Factor(f), _)) => f,
        _ => unreachable!("two distinct edges form a factor"),
    }
}

/// Euler representative `(i j) + (i j̄)` over ℤ₂, pruned for `l`.
pub fn euler_pair(l: &LengthVector, i: usize, j: usize) -> Result<Cocycle> {
    let n = l.n();
    if i == j || !(1..=n).contains(&i) || !(1..=n).contains(&j) {
        return Err(Error::BadMonomial(format!(
            "Euler pair needs two distinct edges in 1..={n}, got ({i}, {j})"
        )));
    }
    let (dashed, _) = normalize_factor(EdgeSet::singleton(i), EdgeSet::singleton(j), RingTag::Z2)?;
    let NormalizedFactor::Factor(dashed) = dashed else {
        unreachable!("two distinct edges")
    };
    let mut c = Cocycle::from_terms(
        RingTag::Z2,
        n,
        [
            (NiceTerm::single(plain_pair(i, j)), 1),
            (NiceTerm::single(dashed), 1),
        ],
    );
    c.prune(l)?;
    Ok(c)
}

/// Euler representative `(j k) + (k r) + (j r)` over ℤ₂, pruned for `l`.
pub fn euler_class(l: &LengthVector, j: usize, k: usize, r: usize) -> Result<Cocycle> {
    let n = l.n();
    assert!(n >= 4, "planar moduli space needs n >= 4");
    if j == k || k == r || j == r || [j, k, r].iter().any(|&e| e < 1 || e > n) {
        return Err(Error::BadMonomial(format!(
            "Euler class needs three distinct edges in 1..={n}, got ({j}, {k}, {r})"
        )));
    }
    let mut c = Cocycle::from_terms(
        RingTag::Z2,
        n,
        [
            (NiceTerm::single(plain_pair(j, k)), 1),
            (NiceTerm::single(plain_pair(k, r)), 1),
            (NiceTerm::single(plain_pair(j, r)), 1),
        ],
    );
    c.prune(l)?;
    Ok(c)
}

/// Chern representative `(i j) − (i j̄)` over ℤ, pruned for `l`. In the
/// exceptional chamber (three dominant edges) this is the zero cocycle for a
/// dominant `i` paired with another dominant edge, mirroring the vanishing of
/// the class itself.
pub fn chern_rep(l: &LengthVector, i: usize, j: usize) -> Result<Cocycle> {
    let n = l.n();
    if i == j || !(1..=n).contains(&i) || !(1..=n).contains(&j) {
        return Err(Error::BadMonomial(format!(
            "Chern class needs two distinct edges in 1..={n}, got ({i}, {j})"
        )));
    }
    let mut c = Cocycle::zero(RingTag::Z, n);
    let (plain, s) = normalize_factor(
        EdgeSet::singleton(i).with(j),
        EdgeSet::EMPTY,
        RingTag::Z,
    )?;
    let NormalizedFactor::Factor(plain) = plain else {
        unreachable!("two distinct edges")
    };
    c.accumulate(NiceTerm::single(plain), s);
    let (dashed, s) =
        normalize_factor(EdgeSet::singleton(i), EdgeSet::singleton(j), RingTag::Z)?;
    let NormalizedFactor::Factor(dashed) = dashed else {
        unreachable!("two distinct edges")
    };
    c.accumulate(NiceTerm::single(dashed), -s);
    c.prune(l)?;
    Ok(c)
}

/// Expand a monomial into its cocycle under the given representation choice,
/// pruned for `l`. Degree may be anything up to `n − 3`. User-chosen partners
/// can make the product non-transversal, which surfaces as an error.
pub fn monomial_cocycle(
    l: &LengthVector,
    spec: &MonomialSpec,
    choice: &RepresentationChoice,
) -> Result<Cocycle> {
    let n = l.n();
    let total = spec.total() as usize;
    if total + 3 > n {
        return Err(Error::BadDegree(format!(
            "degree {total} exceeds the top degree {}",
            n - 3
        )));
    }
    match spec.ring() {
        RingTag::Z2 => {
            let mut acc = Cocycle::unit(RingTag::Z2, n);
            for m in 1..=total {
                acc = cup(l, &acc, &euler_pair(l, m, m + 1)?)?;
            }
            Ok(acc)
        }
        RingTag::Z => {
            let mut acc = Cocycle::unit(RingTag::Z, n);
            for (&c, _) in spec.exponents() {
                let partner = choice.dashed(c).ok_or_else(|| {
                    Error::BadMonomial(format!("no dashed partner chosen for class {c}"))
                })?;
                acc = cup(l, &acc, &chern_rep(l, c, partner)?)?;
                for &b in choice.bold(c) {
                    acc = cup(l, &acc, &chern_rep(l, c, b)?)?;
                }
            }
            Ok(acc)
        }
    }
}

/// Evaluate a top-degree Chern monomial `Ch(c₁)^{d₁} ⋯` against the moduli
/// space of `l`, via the canonical representation. The total degree must be
/// exactly `n − 3`.
pub fn chern_monomial(l: &LengthVector, spec: &MonomialSpec) -> Result<i64> {
    if spec.ring() != RingTag::Z {
        return Err(Error::BadMonomial(
            "Chern monomials live over Z; use euler_power_top for Z2".into(),
        ));
    }
    let n = l.n();
    if spec.total() as usize != n - 3 {
        return Err(Error::BadDegree(format!(
            "total degree {} must equal n−3 = {}",
            spec.total(),
            n - 3
        )));
    }
    let choice = RepresentationChoice::canonical(n, spec)?;
    let c = match monomial_cocycle(l, spec, &choice) {
        Err(Error::NonTransversal(m)) => {
            unreachable!("canonical partners are transversal by construction: {m}")
        }
        other => other?,
    };
    evaluate_top(l, &c)
}

/// How to expand the top Euler power `e^{n−3}` before evaluating.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EulerMethod {
    /// Chain of pair representatives `[(m, m+1) + (m, m̄+1)]`, cupped left to
    /// right (exercises the ℤ₂ square rewrite machinery on the way).
    Chain,
    /// Direct expansion into `Σ (T₁)(T₂)` over unordered partitions
    /// `[n−1] = T₁ ⊔ T₂` into nonempty blocks (singleton blocks are units).
    Partition,
}

/// Evaluate `e^{n−3}` on the planar moduli space of `l`: 0 or 1.
pub fn euler_power_top(l: &LengthVector, method: EulerMethod) -> Result<i64> {
    let n = l.n();
    assert!(n >= 4, "planar moduli space needs n >= 4");
    match method {
        EulerMethod::Chain => {
            let spec = MonomialSpec::euler((n - 3) as u32)?;
            let choice = RepresentationChoice::canonical(n, &spec)?;
            let c = monomial_cocycle(l, &spec, &choice)?;
            evaluate_top(l, &c)
        }
        EulerMethod::Partition => {
            let m = n - 1;
            let mut acc = Cocycle::zero(RingTag::Z2, n);
            // Unordered partitions, deduplicated by pinning edge 1 into T₁.
            for mask in 0..(1u32 << (m - 1)) {
                let t1: EdgeSet = std::iter::once(1)
                    .chain((2..=m).filter(|i| mask >> (i - 2) & 1 == 1))
                    .collect();
                let t2 = EdgeSet::full(m) - t1;
                if t2.is_empty() {
                    continue;
                }
                let factors: Vec<NiceFactor> = [t1, t2]
                    .into_iter()
                    .filter(|t| t.len() >= 2)
                    .map(|t| match normalize_factor(t, EdgeSet::EMPTY, RingTag::Z2) {
                        Ok((NormalizedFactor::Factor(f), _)) => f,
                        _ => unreachable!("block of two or more edges"),
                    })
                    .collect();
                acc.accumulate(
                    NiceTerm::new(factors).expect("blocks are disjoint"),
                    1,
                );
            }
            acc.prune(l)?;
            evaluate_top(l, &acc)
        }
    }
}
