//! Radius-one neighbourhoods under one (possibly windowed) operation.
//!
//! Out-balls are enumerated over every `(window start, pattern)` pair. In-balls
//! are built constructively: `ρ → p` by one operation on a window exactly
//! when the window of `ρ` is a riffle merge of a prefix of `p`'s window with
//! the remaining suffix (reversed, for the mirror variant). An exhaustive
//! search over `Π(n)` is kept alongside as an independent check.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{
    canonical_pattern, image_windowed, relabel, OpKind, Pattern, Permutation, Symbol, WindowedOp,
};

/// Below this many candidate images enumeration stays on the calling thread.
const PAR_THRESHOLD: usize = 1 << 12;

/// Largest window width representable by a `u64` mask.
const MAX_WIDTH: usize = 63;

/// Size guards for the exhaustive routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Single-ball enumeration (`2^n` patterns).
    pub ball: usize,
    /// In-ball fallback search over all of `Π(n)`.
    pub in_fallback: usize,
    /// Pairwise maximum-intersection search.
    pub pairs: usize,
    /// Greedy code construction over `Π(n)`.
    pub code: usize,
    /// Allow rayon fan-out. Results are identical either way.
    pub parallel: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            ball: 20,
            in_fallback: 10,
            pairs: 7,
            code: 8,
            parallel: true,
        }
    }
}

impl Limits {
    /// Every guard set to `n`.
    pub fn uniform(n: usize) -> Self {
        Limits {
            ball: n,
            in_fallback: n,
            pairs: n,
            code: n,
            parallel: true,
        }
    }

    pub fn sequential(self) -> Self {
        Limits {
            parallel: false,
            ..self
        }
    }

    pub(crate) fn check(limit: usize, n: usize, what: &'static str) -> Result<()> {
        if n > limit {
            return Err(Error::GuardExceeded { what, n, limit });
        }
        Ok(())
    }
}

/// A deduplicated set of permutations of equal length, kept in ascending
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<Permutation>", from = "Vec<Permutation>")]
pub struct NeighborSet {
    perms: Vec<Permutation>,
}

impl NeighborSet {
    pub fn from_perms(mut perms: Vec<Permutation>) -> Self {
        perms.sort_unstable();
        perms.dedup();
        NeighborSet { perms }
    }

    fn from_raw(raw: Vec<Vec<Symbol>>, parallel: bool) -> Self {
        let mut raw = raw;
        if parallel && raw.len() >= PAR_THRESHOLD {
            raw.par_sort_unstable();
        } else {
            raw.sort_unstable();
        }
        raw.dedup();
        NeighborSet {
            perms: raw.into_iter().map(Permutation::from_vec_unchecked).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.perms.binary_search(p).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Permutation> {
        self.perms.iter()
    }

    pub fn as_slice(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn into_vec(self) -> Vec<Permutation> {
        self.perms
    }

    pub fn intersection(&self, other: &NeighborSet) -> NeighborSet {
        let (mut a, mut b) = (self.perms.iter().peekable(), other.perms.iter().peekable());
        let mut perms = Vec::new();
        while let (Some(x), Some(y)) = (a.peek(), b.peek()) {
            match x.cmp(y) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => {
                    perms.push((*x).clone());
                    a.next();
                    b.next();
                }
            }
        }
        NeighborSet { perms }
    }

    pub fn is_subset(&self, other: &NeighborSet) -> bool {
        self.intersection(other).len() == self.len()
    }

    /// `{ σ ∘ ρ : ρ ∈ self }`.
    pub fn relabel(&self, sigma: &Permutation) -> Result<NeighborSet> {
        let perms = self
            .perms
            .iter()
            .map(|p| relabel(sigma, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(NeighborSet::from_perms(perms))
    }

    /// One permutation per line, lexicographic order.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for p in &self.perms {
            out.push_str(&p.to_string());
            out.push('\n');
        }
        out
    }
}

impl From<Vec<Permutation>> for NeighborSet {
    fn from(perms: Vec<Permutation>) -> Self {
        NeighborSet::from_perms(perms)
    }
}

impl From<NeighborSet> for Vec<Permutation> {
    fn from(set: NeighborSet) -> Self {
        set.perms
    }
}

impl<'a> IntoIterator for &'a NeighborSet {
    type Item = &'a Permutation;
    type IntoIter = std::slice::Iter<'a, Permutation>;

    fn into_iter(self) -> Self::IntoIter {
        self.perms.iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Out,
    In,
    Reversible,
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "out" => Ok(Direction::Out),
            "in" => Ok(Direction::In),
            "reversible" | "rev" => Ok(Direction::Reversible),
            _ => Err(Error::Parse(format!("unknown direction {s:?}"))),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Out => "out",
            Direction::In => "in",
            Direction::Reversible => "reversible",
        })
    }
}

fn resolve_width(n: usize, k: Option<usize>) -> Result<usize> {
    let k = k.unwrap_or(n);
    if k == 0 || k > n {
        return Err(Error::InvalidWidth { k, n });
    }
    if k > MAX_WIDTH {
        return Err(Error::InvalidArgument(format!(
            "window width {k} exceeds the supported maximum {MAX_WIDTH}"
        )));
    }
    Ok(k)
}

/// All `(start0, mask)` pairs for windows of width `k` in length `n`.
fn windowed_ops(n: usize, k: usize) -> impl Iterator<Item = (usize, u64)> + Clone {
    (0..=n - k).flat_map(move |s| (0..1u64 << k).map(move |m| (s, m)))
}

/// Every windowed image of `p`, duplicates included.
fn out_images(p: &Permutation, kind: OpKind, k: usize, parallel: bool) -> Vec<Vec<Symbol>> {
    let n = p.len();
    let s = p.as_slice();
    let total = (n - k + 1) << k;
    let low = (1u64 << k) - 1;
    let image = |i: usize| image_windowed(kind, s, i >> k, k, i as u64 & low);
    if parallel && total >= PAR_THRESHOLD {
        (0..total).into_par_iter().map(image).collect()
    } else {
        (0..total).map(image).collect()
    }
}

/// Every permutation reachable from `p` by one operation of `kind` on a
/// window of width `k` (default `n`).
pub fn ball_out(
    p: &Permutation,
    kind: OpKind,
    k: Option<usize>,
    limits: &Limits,
) -> Result<NeighborSet> {
    let n = p.len();
    Limits::check(limits.ball, n, "ball enumeration")?;
    let k = resolve_width(n, k)?;
    Ok(NeighborSet::from_raw(out_images(p, kind, k, limits.parallel), limits.parallel))
}

/// Next larger integer with the same popcount (Gosper's hack).
fn next_same_popcount(v: u64) -> u64 {
    let t = v | (v.wrapping_sub(1));
    let w = (!t & t.wrapping_add(1)).wrapping_sub(1);
    t.wrapping_add(1) | (w >> (v.trailing_zeros() + 1))
}

/// Masks over `width` bits with exactly `ones` bits set, ascending.
fn masks_with_popcount(width: usize, ones: usize) -> impl Iterator<Item = u64> {
    let limit = 1u64 << width;
    let first = if ones == 0 { 0 } else { (1u64 << ones) - 1 };
    let mut next = Some(first);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if ones == 0 || ones == width {
            None
        } else {
            let v = next_same_popcount(cur);
            (v < limit).then_some(v)
        };
        Some(cur)
    })
}

/// Merges `a` into the positions where `mask` has a one (most significant of
/// `a.len() + b.len()` bits first) and `b` into the rest, preserving order.
fn riffle(a: &[Symbol], b: &[Symbol], mask: u64, out: &mut Vec<Symbol>) {
    let width = a.len() + b.len();
    let (mut ia, mut ib) = (a.iter(), b.iter());
    for i in 0..width {
        let next = if mask >> (width - 1 - i) & 1 == 1 {
            ia.next()
        } else {
            ib.next()
        };
        out.push(*next.expect("mask popcount matches prefix length"));
    }
}

/// Each in-ball element with the `(start0, mask)` sending it back to `p`.
fn in_images(p: &Permutation, kind: OpKind, k: usize) -> Vec<(Vec<Symbol>, usize, u64)> {
    let n = p.len();
    let s = p.as_slice();
    let mut images = Vec::new();
    for start in 0..=n - k {
        let window = &s[start..start + k];
        for split in 0..=k {
            let prefix = &window[..split];
            let mut suffix = window[split..].to_vec();
            if kind == OpKind::Mtdrl {
                suffix.reverse();
            }
            for mask in masks_with_popcount(k, split) {
                let mut rho = Vec::with_capacity(n);
                rho.extend_from_slice(&s[..start]);
                riffle(prefix, &suffix, mask, &mut rho);
                rho.extend_from_slice(&s[start + k..]);
                images.push((rho, start, mask));
            }
        }
    }
    images
}

/// Every `ρ` with `p ∈ ball_out(ρ, kind, k)`, built from riffle merges of a
/// prefix/suffix split of each window.
pub fn ball_in(
    p: &Permutation,
    kind: OpKind,
    k: Option<usize>,
    limits: &Limits,
) -> Result<NeighborSet> {
    let n = p.len();
    Limits::check(limits.ball, n, "ball enumeration")?;
    let k = resolve_width(n, k)?;
    let raw = in_images(p, kind, k).into_iter().map(|(rho, _, _)| rho).collect();
    Ok(NeighborSet::from_raw(raw, limits.parallel))
}

/// Reference in-ball: scans all of `Π(n)` and keeps each `ρ` for which some
/// windowed operation maps it to `p`.
pub fn ball_in_exhaustive(
    p: &Permutation,
    kind: OpKind,
    k: Option<usize>,
    limits: &Limits,
) -> Result<NeighborSet> {
    let n = p.len();
    Limits::check(limits.in_fallback, n, "in-ball exhaustive search")?;
    let k = resolve_width(n, k)?;
    let target = p.as_slice();
    let reaches = |rho: &Permutation| {
        let r = rho.as_slice();
        (0..=n - k).any(|start| {
            r[..start] == target[..start]
                && r[start + k..] == target[start + k..]
                && (0..1u64 << k).any(|m| image_windowed(kind, r, start, k, m) == target)
        })
    };
    let perms: Vec<Permutation> = if limits.parallel {
        let all: Vec<Permutation> = Permutation::all(n).collect();
        all.into_par_iter().filter(|rho| reaches(rho)).collect()
    } else {
        Permutation::all(n).filter(|rho| reaches(rho)).collect()
    };
    Ok(NeighborSet::from_perms(perms))
}

/// `ball_out ∩ ball_in`.
pub fn reversible_set(
    p: &Permutation,
    kind: OpKind,
    k: Option<usize>,
    limits: &Limits,
) -> Result<NeighborSet> {
    let out = ball_out(p, kind, k, limits)?;
    let inn = ball_in(p, kind, k, limits)?;
    Ok(out.intersection(&inn))
}

pub fn ball(
    p: &Permutation,
    kind: OpKind,
    k: Option<usize>,
    direction: Direction,
    limits: &Limits,
) -> Result<NeighborSet> {
    match direction {
        Direction::Out => ball_out(p, kind, k, limits),
        Direction::In => ball_in(p, kind, k, limits),
        Direction::Reversible => reversible_set(p, kind, k, limits),
    }
}

/// Ball elements paired with one operation witnessing membership.
///
/// For `Out` and `Reversible` the operation maps `p` to the element; for
/// `In` it maps the element to `p`. The witness is the one with the
/// smallest window start, then the smallest pattern, reported in canonical
/// form.
pub fn ball_with_witnesses(
    p: &Permutation,
    kind: OpKind,
    k: Option<usize>,
    direction: Direction,
    limits: &Limits,
) -> Result<Vec<(Permutation, WindowedOp)>> {
    let n = p.len();
    Limits::check(limits.ball, n, "ball enumeration")?;
    let k = resolve_width(n, k)?;
    let mut entries: Vec<(Vec<Symbol>, usize, u64)> = match direction {
        Direction::Out | Direction::Reversible => windowed_ops(n, k)
            .map(|(start, m)| (image_windowed(kind, p.as_slice(), start, k, m), start, m))
            .collect(),
        Direction::In => in_images(p, kind, k),
    };
    entries.sort_unstable();
    entries.dedup_by(|a, b| a.0 == b.0);
    let keep: Option<NeighborSet> = match direction {
        Direction::Reversible => Some(ball_in(p, kind, Some(k), limits)?),
        _ => None,
    };
    Ok(entries
        .into_iter()
        .map(|(rho, start, mask)| {
            let rho = Permutation::from_vec_unchecked(rho);
            let pattern = canonical_pattern(&Pattern::from_mask(mask, k), kind);
            (rho, WindowedOp::new(kind, start + 1, pattern))
        })
        .filter(|(rho, _)| keep.as_ref().is_none_or(|set| set.contains(rho)))
        .collect())
}

/// `ball_out(p) ∩ ball_out(q)` in the unbounded model.
pub fn intersect_out(
    p: &Permutation,
    q: &Permutation,
    kind: OpKind,
    limits: &Limits,
) -> Result<NeighborSet> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            actual: q.len(),
        });
    }
    Ok(ball_out(p, kind, None, limits)?.intersection(&ball_out(q, kind, None, limits)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaxIntersection {
    pub value: usize,
    /// First attaining pair in lexicographic order.
    pub witnesses: (Permutation, Permutation),
    /// Every attaining pair searched, in lexicographic order.
    pub attaining: Vec<(Permutation, Permutation)>,
}

/// Out-ball of `p` as sorted lexicographic ranks.
fn ranked_ball(p: &Permutation, kind: OpKind) -> Vec<u64> {
    let k = p.len();
    let mut ranks: Vec<u64> = (0..1u64 << k)
        .map(|m| Permutation::from_vec_unchecked(image_windowed(kind, p.as_slice(), 0, k, m)).rank())
        .collect();
    ranks.sort_unstable();
    ranks.dedup();
    ranks
}

fn common_count(a: &[u64], b: &[u64]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

fn check_pair_search(n: usize, limits: &Limits) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "maximum intersection needs two distinct permutations, n = {n}"
        )));
    }
    Limits::check(limits.pairs, n, "pairwise intersection search")?;
    if n > 20 {
        return Err(Error::InvalidArgument("pair search supports n <= 20".into()));
    }
    Ok(())
}

fn collect_max(
    scored: Vec<(usize, (Permutation, Permutation))>,
) -> MaxIntersection {
    let value = scored.iter().map(|(c, _)| *c).max().unwrap_or(0);
    let attaining: Vec<_> = scored
        .into_iter()
        .filter(|(c, _)| *c == value)
        .map(|(_, pair)| pair)
        .collect();
    MaxIntersection {
        value,
        witnesses: attaining[0].clone(),
        attaining,
    }
}

/// Largest `|ball_out(π) ∩ ball_out(ρ)|` over distinct `π, ρ ∈ Π(n)`.
///
/// Relabelling maps any pair `(π, ρ)` to `(id, π⁻¹∘ρ)` without changing the
/// intersection size, so only pairs with `π = id` are searched.
pub fn max_intersection(n: usize, kind: OpKind, limits: &Limits) -> Result<MaxIntersection> {
    check_pair_search(n, limits)?;
    let id = Permutation::identity(n);
    let base = ranked_ball(&id, kind);
    let others: Vec<Permutation> = Permutation::all(n).skip(1).collect();
    let score = |q: &Permutation| common_count(&base, &ranked_ball(q, kind));
    let counts: Vec<usize> = if limits.parallel {
        others.par_iter().map(score).collect()
    } else {
        others.iter().map(score).collect()
    };
    let scored = counts
        .into_iter()
        .zip(others)
        .map(|(c, q)| (c, (id.clone(), q)))
        .collect();
    Ok(collect_max(scored))
}

/// Same as [`max_intersection`] but over every unordered pair, without the
/// relabelling reduction.
pub fn max_intersection_all_pairs(
    n: usize,
    kind: OpKind,
    limits: &Limits,
) -> Result<MaxIntersection> {
    check_pair_search(n, limits)?;
    let perms: Vec<Permutation> = Permutation::all(n).collect();
    let balls: Vec<Vec<u64>> = if limits.parallel {
        perms.par_iter().map(|p| ranked_ball(p, kind)).collect()
    } else {
        perms.iter().map(|p| ranked_ball(p, kind)).collect()
    };
    let row = |i: usize| -> Vec<(usize, (Permutation, Permutation))> {
        (i + 1..perms.len())
            .map(|j| {
                (
                    common_count(&balls[i], &balls[j]),
                    (perms[i].clone(), perms[j].clone()),
                )
            })
            .collect()
    };
    let scored: Vec<_> = if limits.parallel {
        (0..perms.len()).into_par_iter().flat_map_iter(row).collect()
    } else {
        (0..perms.len()).flat_map(row).collect()
    };
    Ok(collect_max(scored))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessFamily {
    CyclicShift,
    AdjacentTransposition,
    SwapLastTwo,
}

impl WitnessFamily {
    /// The operation kind whose maximum intersection this family attains.
    pub fn intended_kind(self) -> OpKind {
        match self {
            WitnessFamily::CyclicShift | WitnessFamily::AdjacentTransposition => OpKind::Tdrl,
            WitnessFamily::SwapLastTwo => OpKind::Mtdrl,
        }
    }
}

impl FromStr for WitnessFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "cyclic-shift" => Ok(WitnessFamily::CyclicShift),
            "adjacent-transposition" => Ok(WitnessFamily::AdjacentTransposition),
            "swap-last-two" => Ok(WitnessFamily::SwapLastTwo),
            _ => Err(Error::Parse(format!("unknown witness family {s:?}"))),
        }
    }
}

impl fmt::Display for WitnessFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessFamily::CyclicShift => "cyclic-shift",
            WitnessFamily::AdjacentTransposition => "adjacent-transposition",
            WitnessFamily::SwapLastTwo => "swap-last-two",
        })
    }
}

/// `(id(n), transformed id(n))` for the given family.
pub fn witness_pair(n: usize, family: WitnessFamily) -> Result<(Permutation, Permutation)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "witness pairs need n >= 2, got {n}"
        )));
    }
    let id = Permutation::identity(n);
    let mut other = id.as_slice().to_vec();
    match family {
        WitnessFamily::CyclicShift => other.rotate_left(1),
        WitnessFamily::AdjacentTransposition => other.swap(0, 1),
        WitnessFamily::SwapLastTwo => other.swap(n - 2, n - 1),
    }
    Ok((id, Permutation::from_vec_unchecked(other)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn set(items: &[&str]) -> NeighborSet {
        NeighborSet::from_perms(items.iter().map(|s| perm(s)).collect())
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn out_ball_sizes_of_tables() {
        let b = ball_out(&Permutation::identity(5), OpKind::Tdrl, Some(5), &lim()).unwrap();
        assert_eq!(b.len(), 27);
        let b = ball_out(&Permutation::identity(4), OpKind::Mtdrl, Some(4), &lim()).unwrap();
        assert_eq!(
            b,
            set(&[
                "1 2 3 4", "1 2 4 3", "1 3 4 2", "1 4 3 2", "2 3 4 1", "2 4 3 1", "3 4 2 1",
                "4 3 2 1"
            ])
        );
    }

    #[test]
    fn width_one_is_identity_only() {
        for kind in OpKind::ALL {
            let id = Permutation::identity(6);
            let b = ball_out(&id, kind, Some(1), &lim()).unwrap();
            assert_eq!(b.as_slice(), std::slice::from_ref(&id));
            let b = ball_in(&id, kind, Some(1), &lim()).unwrap();
            assert_eq!(b.as_slice(), &[id]);
        }
    }

    #[test]
    fn in_ball_examples() {
        let b = ball_in(&Permutation::identity(3), OpKind::Tdrl, Some(3), &lim()).unwrap();
        assert_eq!(b, set(&["1 2 3", "2 1 3", "2 3 1", "1 3 2", "3 1 2"]));
        let b = ball_in(&perm("2 1"), OpKind::Tdrl, Some(2), &lim()).unwrap();
        assert_eq!(b, set(&["1 2", "2 1"]));
    }

    #[test]
    fn in_ball_matches_exhaustive_small() {
        for n in 1..=4 {
            for p in Permutation::all(n) {
                for kind in OpKind::ALL {
                    for k in 1..=n {
                        let a = ball_in(&p, kind, Some(k), &lim()).unwrap();
                        let b = ball_in_exhaustive(&p, kind, Some(k), &lim()).unwrap();
                        assert_eq!(a, b, "{p:?} {kind} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn reversible_examples() {
        let r = reversible_set(&Permutation::identity(5), OpKind::Tdrl, Some(5), &lim()).unwrap();
        assert_eq!(r.len(), 21);
        let r = reversible_set(&Permutation::identity(4), OpKind::Mtdrl, Some(4), &lim()).unwrap();
        assert_eq!(r, set(&["1 2 3 4", "1 2 4 3", "1 4 3 2", "4 3 2 1"]));
        let r = reversible_set(&Permutation::identity(2), OpKind::Tdrl, None, &lim()).unwrap();
        assert_eq!(r, set(&["1 2", "2 1"]));
    }

    #[test]
    fn intersect_examples() {
        let id5 = Permutation::identity(5);
        let i = intersect_out(&id5, &perm("2 3 4 5 1"), OpKind::Tdrl, &lim()).unwrap();
        assert_eq!(i.len(), 16);
        let i = intersect_out(&id5, &id5, OpKind::Tdrl, &lim()).unwrap();
        assert_eq!(i, ball_out(&id5, OpKind::Tdrl, None, &lim()).unwrap());
        let id4 = Permutation::identity(4);
        let i = intersect_out(&id4, &perm("1 2 4 3"), OpKind::Mtdrl, &lim()).unwrap();
        assert_eq!(i, ball_out(&id4, OpKind::Mtdrl, None, &lim()).unwrap());
        assert!(intersect_out(&id4, &id5, OpKind::Tdrl, &lim()).is_err());
    }

    #[test]
    fn max_intersection_small() {
        assert_eq!(max_intersection(2, OpKind::Tdrl, &lim()).unwrap().value, 2);
        assert_eq!(max_intersection(5, OpKind::Tdrl, &lim()).unwrap().value, 16);
        assert_eq!(max_intersection(4, OpKind::Mtdrl, &lim()).unwrap().value, 8);
        assert!(max_intersection(1, OpKind::Tdrl, &lim()).is_err());
        assert!(matches!(
            max_intersection(8, OpKind::Tdrl, &lim()),
            Err(Error::GuardExceeded { limit: 7, .. })
        ));
    }

    #[test]
    fn max_intersection_reduction_agrees_with_all_pairs() {
        for n in 2..=5 {
            for kind in OpKind::ALL {
                let fixed = max_intersection(n, kind, &lim()).unwrap();
                let all = max_intersection_all_pairs(n, kind, &lim()).unwrap();
                assert_eq!(fixed.value, all.value, "n={n} {kind}");
                // Every attaining pair relabels to an attaining pair with id first.
                for (p, q) in &all.attaining {
                    let q_rel = relabel(&p.inverse(), q).unwrap();
                    assert!(fixed.attaining.iter().any(|(_, r)| *r == q_rel));
                }
            }
        }
    }

    #[test]
    fn witness_pairs() {
        assert_eq!(
            witness_pair(5, WitnessFamily::CyclicShift).unwrap().1,
            perm("2 3 4 5 1")
        );
        assert_eq!(
            witness_pair(4, WitnessFamily::SwapLastTwo).unwrap(),
            (Permutation::identity(4), perm("1 2 4 3"))
        );
        assert_eq!(
            witness_pair(3, WitnessFamily::AdjacentTransposition).unwrap().1,
            perm("2 1 3")
        );
        assert!(witness_pair(1, WitnessFamily::CyclicShift).is_err());
    }

    #[test]
    fn guards_and_widths() {
        let p = Permutation::identity(21);
        assert!(matches!(
            ball_out(&p, OpKind::Tdrl, Some(2), &lim()),
            Err(Error::GuardExceeded { limit: 20, .. })
        ));
        let p = Permutation::identity(4);
        assert!(matches!(
            ball_out(&p, OpKind::Tdrl, Some(5), &lim()),
            Err(Error::InvalidWidth { .. })
        ));
        assert!(matches!(
            ball_in(&p, OpKind::Tdrl, Some(0), &lim()),
            Err(Error::InvalidWidth { .. })
        ));
        let p = Permutation::identity(11);
        assert!(ball_in_exhaustive(&p, OpKind::Tdrl, None, &lim()).is_err());
    }

    #[test]
    fn popcount_masks() {
        for width in 0..=8 {
            for ones in 0..=width {
                let got: Vec<u64> = masks_with_popcount(width, ones).collect();
                let want: Vec<u64> = (0..1u64 << width)
                    .filter(|m| m.count_ones() as usize == ones)
                    .collect();
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn witnesses_reproduce_elements() {
        let p = perm("3 1 4 2 5");
        for kind in OpKind::ALL {
            for k in 1..=5 {
                for dir in [Direction::Out, Direction::In, Direction::Reversible] {
                    let entries = ball_with_witnesses(&p, kind, Some(k), dir, &lim()).unwrap();
                    let plain = ball(&p, kind, Some(k), dir, &lim()).unwrap();
                    let perms: Vec<_> = entries.iter().map(|(r, _)| r.clone()).collect();
                    assert_eq!(perms, plain.as_slice());
                    for (rho, op) in &entries {
                        let (from, to) = match dir {
                            Direction::In => (rho, &p),
                            _ => (&p, rho),
                        };
                        assert_eq!(&crate::perm::apply_windowed(from, op).unwrap(), to);
                    }
                }
            }
        }
    }

    #[test]
    fn identity_witness_is_all_zeros() {
        let id = Permutation::identity(5);
        let entries = ball_with_witnesses(&id, OpKind::Tdrl, None, Direction::Out, &lim()).unwrap();
        let (_, op) = entries.iter().find(|(r, _)| *r == id).unwrap();
        assert_eq!(op.pattern, Pattern::zeros(5));
    }
}
