/*!
Independent evaluation by counting triangular configurations.

A top-degree monomial can be evaluated without any cocycle algebra: each
contribution comes from a *triangular configuration* of the polygon, where the
edges collapse into three straight groups whose net lengths form a genuine
triangle. The functions here enumerate those configurations directly —
partitioning one edge group into codirected/antidirected halves `I ⊔ J` and
testing the strict triangle inequality against the remaining sides — and add
up explicit signs. They share no code with [`crate::algebra`]'s evaluation
path, which is the point: the two routes check each other.

For equilateral polygons with an odd number of edges the counts collapse to
binomial closed forms, implemented in [`equilateral_closed_forms`].
*/

use num_bigint::BigInt;

use crate::algebra::{EdgeSet, RingTag};
use crate::classes::MonomialSpec;
use crate::lengths::{LengthVector, Rat};
use crate::{Error, Result};

/// One contributing triangular configuration: three edge groups (each split
/// into codirected `I` and antidirected `J`; free edges are singleton groups),
/// the three side lengths of the triangle they span, and the configuration's
/// sign (always +1 over ℤ₂).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleConfig {
    pub groups: Vec<(EdgeSet, EdgeSet)>,
    pub sides: [Rat; 3],
    pub sign: i64,
}

/// All splits `I ⊔ J` of `group` with `pin ∈ I`, Gray-code order, as
/// `(Σ_I − Σ_J, J)` over the common-denominator numerators of `l`.
fn group_splits(l: &LengthVector, group: EdgeSet, pin: usize) -> Vec<(BigInt, EdgeSet)> {
    debug_assert!(group.contains(pin));
    let others: Vec<usize> = group.iter().filter(|&e| e != pin).collect();
    let mut out = Vec::with_capacity(1 << others.len());
    let mut diff: BigInt = group.iter().map(|e| &l.nums()[e - 1]).sum();
    let mut jset = EdgeSet::EMPTY;
    out.push((diff.clone(), jset));
    for k in 1..(1usize << others.len()) {
        let e = others[k.trailing_zeros() as usize];
        let step = &l.nums()[e - 1] * 2u8;
        if jset.contains(e) {
            jset = jset - EdgeSet::singleton(e);
            diff += step;
        } else {
            jset = jset.with(e);
            diff -= step;
        }
        out.push((diff.clone(), jset));
    }
    out
}

/// Can three positive sides form a nondegenerate triangle? An exact
/// degeneracy is a wall.
fn triangle_closes(sides: [&BigInt; 3]) -> Result<bool> {
    let total: BigInt = sides.iter().copied().sum();
    let max = sides.into_iter().max().expect("three sides");
    match (max * 2u8).cmp(&total) {
        std::cmp::Ordering::Equal => Err(Error::NonGeneric(
            "configuration collapses to a degenerate triangle".into(),
        )),
        std::cmp::Ordering::Greater => Ok(false),
        std::cmp::Ordering::Less => Ok(true),
    }
}

/// Net length and orientation of one split: `(|Σ_I − Σ_J|, ε)` with
/// `ε = ±1` the sign of the difference. A vanishing difference is a wall.
fn split_side(diff: &BigInt) -> Result<(BigInt, i64)> {
    match diff.sign() {
        num_bigint::Sign::Plus => Ok((diff.clone(), 1)),
        num_bigint::Sign::Minus => Ok((-diff, -1)),
        num_bigint::Sign::NoSign => Err(Error::NonGeneric(
            "an edge group has balanced halves".into(),
        )),
    }
}

/// `Ch^{n−3}(i)` by direct enumeration: the two largest edges other than `i`
/// stay free, the rest form one group split around `i ∈ I`, and each closing
/// configuration contributes `(−1)^{|J|}·ε`.
pub fn chern_power_triangles(l: &LengthVector, i: usize) -> Result<i64> {
    let n = l.n();
    assert!(n >= 4, "spatial moduli space needs n >= 4");
    if !(1..=n).contains(&i) {
        return Err(Error::BadMonomial(format!("edge index {i} out of range 1..={n}")));
    }
    let mut frees: Vec<usize> = (1..=n).filter(|&e| e != i).collect();
    frees.sort_by(|&a, &b| b.cmp(&a));
    let (f1, f2) = (frees[0], frees[1]);
    let group = EdgeSet::full(n) - EdgeSet::singleton(f1) - EdgeSet::singleton(f2);
    let mut acc = 0i64;
    for (diff, jset) in group_splits(l, group, i) {
        let (side, eps) = split_side(&diff)?;
        if !triangle_closes([&side, &l.nums()[f1 - 1], &l.nums()[f2 - 1]])? {
            continue;
        }
        let parity = if jset.len() % 2 == 1 { -1 } else { 1 };
        acc += parity * eps;
    }
    Ok(acc)
}

/// `Ch^{d₁}(1)·Ch^{d₂}(d₁+2)·Ch^{d₃}(d₁+d₂+3)` on an `n`-gon with
/// `n = d₁+d₂+d₃+3`, by splitting three consecutive groups
/// `{1,…,d₁+1}`, `{d₁+2,…,d₁+d₂+2}`, `{d₁+d₂+3,…,n}` around their first
/// edges. No edge stays free; a configuration contributes
/// `Π (−1)^{|J_t|}·ε_t`.
pub fn chern_three_term_triangles(l: &LengthVector, d1: u32, d2: u32, d3: u32) -> Result<i64> {
    let n = l.n();
    let (d1, d2, d3) = (d1 as usize, d2 as usize, d3 as usize);
    if d1 == 0 || d2 == 0 || d3 == 0 {
        return Err(Error::BadMonomial("all three exponents must be positive".into()));
    }
    if d1 + d2 + d3 + 3 != n {
        return Err(Error::BadDegree(format!(
            "exponents sum to {}, need n−3 = {}",
            d1 + d2 + d3,
            n - 3
        )));
    }
    let bounds = [(1, d1 + 1), (d1 + 2, d1 + d2 + 2), (d1 + d2 + 3, n)];
    let splits: Vec<Vec<(BigInt, i64)>> = bounds
        .iter()
        .map(|&(lo, hi)| {
            let group: EdgeSet = (lo..=hi).collect();
            group_splits(l, group, lo)
                .into_iter()
                .map(|(diff, jset)| {
                    let (side, eps) = split_side(&diff)?;
                    let parity = if jset.len() % 2 == 1 { -1 } else { 1 };
                    Ok((side, parity * eps))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut acc = 0i64;
    for (sa, ga) in &splits[0] {
        for (sb, gb) in &splits[1] {
            for (sc, gc) in &splits[2] {
                if triangle_closes([sa, sb, sc])? {
                    acc += ga * gb * gc;
                }
            }
        }
    }
    Ok(acc)
}

/// A general top-degree Chern monomial by enumeration, mirroring the
/// canonical representation: the class edges plus the smallest non-support
/// edges form one group (with the least non-support edge `q₁` pinned into
/// `I`), the two largest non-support edges stay free, and a closing
/// configuration contributes `(−1)^N·ε` with `N = |J| + Σ_{c ∈ J∩K} d_c`.
pub fn chern_general_triangles(l: &LengthVector, spec: &MonomialSpec) -> Result<i64> {
    let n = l.n();
    if spec.ring() != RingTag::Z {
        return Err(Error::BadMonomial(
            "Chern monomials live over Z; use euler_power_triangles for Z2".into(),
        ));
    }
    if spec.total() as usize != n - 3 {
        return Err(Error::BadDegree(format!(
            "total degree {} must equal n−3 = {}",
            spec.total(),
            n - 3
        )));
    }
    let support = spec.support();
    if support.last().is_some_and(|&max| max > n) {
        return Err(Error::BadMonomial(format!(
            "class edge beyond the polygon's {n} edges"
        )));
    }
    let in_support = EdgeSet::from_elems(&support);
    let non: Vec<usize> = (1..=n).filter(|&e| !in_support.contains(e)).collect();
    let q1 = non[0];
    let (f1, f2) = (non[non.len() - 2], non[non.len() - 1]);
    let group = (EdgeSet::full(n) - EdgeSet::singleton(f1)) - EdgeSet::singleton(f2);
    let mut acc = 0i64;
    for (diff, jset) in group_splits(l, group, q1) {
        let (side, eps) = split_side(&diff)?;
        if !triangle_closes([&side, &l.nums()[f1 - 1], &l.nums()[f2 - 1]])? {
            continue;
        }
        let mut n_exp = jset.len();
        for (&c, &d) in spec.exponents() {
            if jset.contains(c) {
                n_exp += d as usize;
            }
        }
        acc += if n_exp % 2 == 1 { -eps } else { eps };
    }
    Ok(acc)
}

/// `e^{n−3}` mod 2 by enumeration. With `vertices = None`, edges
/// `1, …, n−2` form one group (pinning edge 1) against free edges `n−1, n`.
/// Any three polygon vertices `i < j < k` work instead: they cut the edge
/// cycle into three arcs, each split around its first edge. All choices give
/// the same parity.
pub fn euler_power_triangles(
    l: &LengthVector,
    vertices: Option<(usize, usize, usize)>,
) -> Result<i64> {
    let n = l.n();
    assert!(n >= 4, "planar moduli space needs n >= 4");
    let arcs: [Vec<usize>; 3] = match vertices {
        None => [
            (1..=n - 2).collect(),
            vec![n - 1],
            vec![n],
        ],
        Some((i, j, k)) => {
            if !(1 <= i && i < j && j < k && k <= n) {
                return Err(Error::BadMonomial(format!(
                    "vertices must satisfy 1 <= i < j < k <= n, got ({i}, {j}, {k})"
                )));
            }
            [
                (i + 1..=j).collect(),
                (j + 1..=k).collect(),
                (k + 1..=n).chain(1..=i).collect(),
            ]
        }
    };
    let splits: Vec<Vec<BigInt>> = arcs
        .iter()
        .map(|arc| {
            let group = EdgeSet::from_elems(arc);
            group_splits(l, group, arc[0])
                .into_iter()
                .map(|(diff, _)| split_side(&diff).map(|(side, _)| side))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut count = 0i64;
    for sa in &splits[0] {
        for sb in &splits[1] {
            for sc in &splits[2] {
                if triangle_closes([sa, sb, sc])? {
                    count += 1;
                }
            }
        }
    }
    Ok(count & 1)
}

/// Every contributing configuration of a top-degree monomial, with signs.
/// Over ℤ the enumeration mirrors [`chern_general_triangles`]; over ℤ₂ it is
/// the default Euler enumeration with all signs +1. The signed sum always
/// reproduces the scalar value (mod 2 for ℤ₂).
pub fn list_triangles(l: &LengthVector, spec: &MonomialSpec) -> Result<Vec<TriangleConfig>> {
    let n = l.n();
    let mut configs = Vec::new();
    match spec.ring() {
        RingTag::Z => {
            let scalar = chern_general_triangles(l, spec)?;
            let support = spec.support();
            let in_support = EdgeSet::from_elems(&support);
            let non: Vec<usize> = (1..=n).filter(|&e| !in_support.contains(e)).collect();
            let q1 = non[0];
            let (f1, f2) = (non[non.len() - 2], non[non.len() - 1]);
            let group = (EdgeSet::full(n) - EdgeSet::singleton(f1)) - EdgeSet::singleton(f2);
            for (diff, jset) in group_splits(l, group, q1) {
                let (side, eps) = split_side(&diff)?;
                if !triangle_closes([&side, &l.nums()[f1 - 1], &l.nums()[f2 - 1]])? {
                    continue;
                }
                let mut n_exp = jset.len();
                for (&c, &d) in spec.exponents() {
                    if jset.contains(c) {
                        n_exp += d as usize;
                    }
                }
                configs.push(TriangleConfig {
                    groups: vec![
                        (group - jset, jset),
                        (EdgeSet::singleton(f1), EdgeSet::EMPTY),
                        (EdgeSet::singleton(f2), EdgeSet::EMPTY),
                    ],
                    sides: [
                        Rat::new(side, l.den().clone()),
                        l.length(f1).clone(),
                        l.length(f2).clone(),
                    ],
                    sign: if n_exp % 2 == 1 { -eps } else { eps },
                });
            }
            assert_eq!(
                configs.iter().map(|c| c.sign).sum::<i64>(),
                scalar,
                "configuration signs must add up to the evaluation"
            );
        }
        RingTag::Z2 => {
            if spec.total() as usize != n - 3 {
                return Err(Error::BadDegree(format!(
                    "total degree {} must equal n−3 = {}",
                    spec.total(),
                    n - 3
                )));
            }
            let scalar = euler_power_triangles(l, None)?;
            let group = EdgeSet::full(n - 2);
            for (diff, jset) in group_splits(l, group, 1) {
                let (side, _) = split_side(&diff)?;
                if !triangle_closes([&side, &l.nums()[n - 2], &l.nums()[n - 1]])? {
                    continue;
                }
                configs.push(TriangleConfig {
                    groups: vec![
                        (group - jset, jset),
                        (EdgeSet::singleton(n - 1), EdgeSet::EMPTY),
                        (EdgeSet::singleton(n), EdgeSet::EMPTY),
                    ],
                    sides: [
                        Rat::new(side, l.den().clone()),
                        l.length(n - 1).clone(),
                        l.length(n).clone(),
                    ],
                    sign: 1,
                });
            }
            assert_eq!(
                configs.len() as i64 & 1,
                scalar,
                "configuration count parity must match the evaluation"
            );
        }
    }
    Ok(configs)
}

/// Which closed form to evaluate for an equilateral odd-gon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedFormKind {
    /// `e^{2s}` on the planar `(2s+3)`-gon: the parity of `C(2s+1, s)`.
    Euler,
    /// `Ch^{2k}(i)` on the spatial `(2k+3)`-gon: `(−1)^k·C(2k+1, k)`.
    Chern,
}

/// Is `C(a, b)` odd? By Kummer's carry criterion, iff adding `b` and `a − b`
/// in binary produces no carry.
fn binomial_is_odd(a: u64, b: u64) -> bool {
    debug_assert!(b <= a);
    b & (a - b) == 0
}

/// Closed-form value of the top self-power on the equilateral `(2k+3)`-gon
/// (argument `k` is the halved degree: `s` for Euler, `k` for Chern).
pub fn equilateral_closed_forms(k: u32, kind: ClosedFormKind) -> i64 {
    match kind {
        ClosedFormKind::Chern => {
            let (mut num, mut den) = (1u128, 1u128);
            for t in 1..=k as u128 {
                num *= 2 * k as u128 + 1 - (t - 1);
                den *= t;
            }
            let binom = (num / den) as i64;
            if k % 2 == 1 {
                -binom
            } else {
                binom
            }
        }
        ClosedFormKind::Euler => i64::from(binomial_is_odd(2 * k as u64 + 1, k as u64)),
    }
}
