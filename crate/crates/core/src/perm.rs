//! Permutations, binary patterns, and the TDRL / mirror-TDRL operations.
//!
//! A pattern bit set to `1` means the symbol at that position survives in
//! the first copy; the result is the first-copy survivors followed by the
//! second-copy survivors. For the mirror variant the second copy is read in
//! reverse. All external positions are 1-based.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symbol type. Permutations are over `1..=n`.
pub type Symbol = u32;

/// A permutation of `1..=n`, stored as its one-line sequence.
///
/// Ordering is lexicographic on the sequence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Permutation(Vec<Symbol>);

impl Permutation {
    pub fn new(elements: Vec<Symbol>) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::InvalidPermutation {
                n,
                reason: "empty sequence".into(),
            });
        }
        let mut seen = vec![false; n];
        for &x in &elements {
            let idx = (x as usize).wrapping_sub(1);
            if idx >= n {
                return Err(Error::InvalidPermutation {
                    n,
                    reason: format!("symbol {x} out of range"),
                });
            }
            if std::mem::replace(&mut seen[idx], true) {
                return Err(Error::InvalidPermutation {
                    n,
                    reason: format!("symbol {x} repeated"),
                });
            }
        }
        Ok(Permutation(elements))
    }

    /// Callers guarantee `elements` is a bijection on `1..=len`.
    pub(crate) fn from_vec_unchecked(elements: Vec<Symbol>) -> Self {
        debug_assert!(Permutation::new(elements.clone()).is_ok());
        Permutation(elements)
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as Symbol).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Symbol> {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| x as usize == i + 1)
    }

    /// All of `Π(n)` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (1..=n as Symbol)
            .permutations(n)
            .map(Permutation::from_vec_unchecked)
    }

    /// Lexicographic rank in `Π(n)`, starting from 0. Only defined for
    /// `n <= 20` so that the value fits in a `u64`.
    pub fn rank(&self) -> u64 {
        let n = self.len();
        assert!(n <= 20, "rank is only defined for n <= 20");
        let mut rank = 0u64;
        for i in 0..n {
            let smaller_after = self.0[i + 1..].iter().filter(|&&x| x < self.0[i]).count() as u64;
            rank = rank * (n - i) as u64 + smaller_after;
        }
        rank
    }

    /// Strictly increasing, then strictly decreasing (either part may be
    /// empty).
    pub fn is_unimodular(&self) -> bool {
        let s = &self.0;
        let mut i = 1;
        while i < s.len() && s[i - 1] < s[i] {
            i += 1;
        }
        while i < s.len() && s[i - 1] > s[i] {
            i += 1;
        }
        i >= s.len()
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize - 1] = i as Symbol + 1;
        }
        Permutation(inv)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().format(" "))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().format(","))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let elements = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<Symbol>()
                    .map_err(|_| Error::Parse(format!("invalid symbol {tok:?} in permutation")))
            })
            .collect::<Result<Vec<_>>>()?;
        if elements.is_empty() {
            return Err(Error::Parse("empty permutation".into()));
        }
        Permutation::new(elements)
    }
}

impl From<Permutation> for String {
    fn from(p: Permutation) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Permutation {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// A binary pattern; bit `i` (0-based here, position `i + 1` externally)
/// says whether the symbol at that position survives in the first copy.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Pattern(Vec<bool>);

impl Pattern {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::Parse("empty pattern".into()));
        }
        Ok(Pattern(bits))
    }

    pub fn zeros(len: usize) -> Self {
        Pattern(vec![false; len])
    }

    pub fn ones(len: usize) -> Self {
        Pattern(vec![true; len])
    }

    /// Pattern from the low `len` bits of `mask`, most significant bit first,
    /// so that numeric order on masks is lexicographic order on patterns.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        assert!(len <= 64);
        Pattern((0..len).map(|i| mask >> (len - 1 - i) & 1 == 1).collect())
    }

    /// Inverse of [`Pattern::from_mask`]; requires `len() <= 64`.
    pub fn to_mask(&self) -> u64 {
        assert!(self.len() <= 64);
        self.0.iter().fold(0, |acc, &b| acc << 1 | b as u64)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Space-separated bits, e.g. `0 1 1 0 1`.
    pub fn spaced(&self) -> String {
        self.0.iter().map(|&b| if b { '1' } else { '0' }).join(" ")
    }

    /// Lengths `(r, s, t, u)` of the greedy split into `1^r 0^s 1^t 0^u`,
    /// or `None` if the pattern has another shape.
    fn reversible_blocks(&self) -> Option<[usize; 4]> {
        let mut blocks = [0usize; 4];
        let mut block = 0;
        for &bit in &self.0 {
            // Blocks 0 and 2 hold ones, 1 and 3 hold zeros.
            while (block % 2 == 0) != bit {
                block += 1;
                if block == 4 {
                    return None;
                }
            }
            blocks[block] += 1;
        }
        // With no second block of ones, trailing zeros count as `u`, so
        // identity patterns are their own inverse.
        if blocks[2] == 0 {
            blocks[3] += std::mem::take(&mut blocks[1]);
        }
        Some(blocks)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern({self})")
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid pattern character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(bits)
    }
}

impl From<Pattern> for String {
    fn from(p: Pattern) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Pattern {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Tdrl,
    Mtdrl,
}

impl OpKind {
    pub const ALL: [OpKind; 2] = [OpKind::Tdrl, OpKind::Mtdrl];

    pub fn as_str(self) -> &'static str {
        match self {
            OpKind::Tdrl => "tdrl",
            OpKind::Mtdrl => "mtdrl",
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OpKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tdrl" => Ok(OpKind::Tdrl),
            "mtdrl" => Ok(OpKind::Mtdrl),
            _ => Err(Error::Parse(format!("unknown operation kind {s:?}"))),
        }
    }
}

/// One operation confined to the `pattern.len()` consecutive positions
/// starting at the 1-based `start`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WindowedOp {
    pub kind: OpKind,
    pub start: usize,
    pub pattern: Pattern,
}

impl WindowedOp {
    pub fn new(kind: OpKind, start: usize, pattern: Pattern) -> Self {
        WindowedOp {
            kind,
            start,
            pattern,
        }
    }

    pub fn width(&self) -> usize {
        self.pattern.len()
    }

    /// Checks `1 <= start <= n - k + 1`.
    pub fn check_fits(&self, n: usize) -> Result<()> {
        let k = self.width();
        if k == 0 || k > n || self.start == 0 || self.start + k - 1 > n {
            return Err(Error::WindowOutOfRange {
                start: self.start,
                width: k,
                n,
            });
        }
        Ok(())
    }
}

/// Writes the image of `segment` under the pattern `mask` (position 1 is the
/// most significant of `segment.len()` bits) into `out`.
#[inline]
pub(crate) fn push_image(kind: OpKind, segment: &[Symbol], mask: u64, out: &mut Vec<Symbol>) {
    let k = segment.len();
    let kept = |i: usize| mask >> (k - 1 - i) & 1 == 1;
    out.extend((0..k).filter(|&i| kept(i)).map(|i| segment[i]));
    match kind {
        OpKind::Tdrl => out.extend((0..k).filter(|&i| !kept(i)).map(|i| segment[i])),
        OpKind::Mtdrl => out.extend((0..k).rev().filter(|&i| !kept(i)).map(|i| segment[i])),
    }
}

/// Image of `p` under the windowed operation `(start0, mask)` with a
/// 0-based start and window width `k`. No range checks.
pub(crate) fn image_windowed(
    kind: OpKind,
    p: &[Symbol],
    start0: usize,
    k: usize,
    mask: u64,
) -> Vec<Symbol> {
    let mut out = Vec::with_capacity(p.len());
    out.extend_from_slice(&p[..start0]);
    push_image(kind, &p[start0..start0 + k], mask, &mut out);
    out.extend_from_slice(&p[start0 + k..]);
    out
}

fn apply_bits(kind: OpKind, p: &[Symbol], bits: &[bool], out: &mut Vec<Symbol>) {
    out.extend(p.iter().zip(bits).filter(|(_, &b)| b).map(|(&x, _)| x));
    let rest = p.iter().zip(bits).filter(|(_, &b)| !b).map(|(&x, _)| x);
    match kind {
        OpKind::Tdrl => out.extend(rest),
        OpKind::Mtdrl => {
            let start = out.len();
            out.extend(rest);
            out[start..].reverse();
        }
    }
}

/// Applies one unbounded operation of the given kind.
pub fn apply(kind: OpKind, p: &Permutation, b: &Pattern) -> Result<Permutation> {
    if p.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            actual: b.len(),
        });
    }
    let mut out = Vec::with_capacity(p.len());
    apply_bits(kind, p.as_slice(), b.bits(), &mut out);
    Ok(Permutation::from_vec_unchecked(out))
}

/// Ones-survivors of `p` followed by zeros-survivors.
///
/// ```
/// use tdrl_core::perm::{apply_tdrl, Pattern, Permutation};
/// let p = Permutation::identity(5);
/// let b: Pattern = "01101".parse().unwrap();
/// assert_eq!(apply_tdrl(&p, &b).unwrap().to_string(), "2 3 5 1 4");
/// ```
pub fn apply_tdrl(p: &Permutation, b: &Pattern) -> Result<Permutation> {
    apply(OpKind::Tdrl, p, b)
}

/// Ones-survivors of `p` followed by zeros-survivors in reverse position
/// order.
pub fn apply_mtdrl(p: &Permutation, b: &Pattern) -> Result<Permutation> {
    apply(OpKind::Mtdrl, p, b)
}

pub fn apply_windowed(p: &Permutation, op: &WindowedOp) -> Result<Permutation> {
    op.check_fits(p.len())?;
    let lo = op.start - 1;
    let hi = lo + op.width();
    let s = p.as_slice();
    let mut out = Vec::with_capacity(s.len());
    out.extend_from_slice(&s[..lo]);
    apply_bits(op.kind, &s[lo..hi], op.pattern.bits(), &mut out);
    out.extend_from_slice(&s[hi..]);
    Ok(Permutation::from_vec_unchecked(out))
}

/// Representative of the class of patterns inducing the same map.
///
/// TDRL: every `1^r 0^(m-r)` is the identity and maps to all zeros.
/// MTDRL: the last bit never matters and is forced to 1.
pub fn canonical_pattern(b: &Pattern, kind: OpKind) -> Pattern {
    match kind {
        OpKind::Tdrl => {
            let ones = b.bits().iter().take_while(|&&x| x).count();
            if b.bits()[ones..].iter().all(|&x| !x) {
                Pattern::zeros(b.len())
            } else {
                b.clone()
            }
        }
        OpKind::Mtdrl => {
            let mut bits = b.bits().to_vec();
            if let Some(last) = bits.last_mut() {
                *last = true;
            }
            Pattern(bits)
        }
    }
}

/// `true` iff `b` is `1^r 0^s 1^t 0^u`.
pub fn is_reversible_pattern(b: &Pattern) -> bool {
    b.reversible_blocks().is_some()
}

/// For `b = 1^r 0^s 1^t 0^u` returns `1^r 0^t 1^s 0^u`, which undoes `b`.
pub fn inverse_reversible_pattern(b: &Pattern) -> Result<Pattern> {
    let [r, s, t, u] = b
        .reversible_blocks()
        .ok_or_else(|| Error::NotReversible(b.to_string()))?;
    let mut bits = Vec::with_capacity(b.len());
    bits.extend(std::iter::repeat_n(true, r));
    bits.extend(std::iter::repeat_n(false, t));
    bits.extend(std::iter::repeat_n(true, s));
    bits.extend(std::iter::repeat_n(false, u));
    Ok(Pattern(bits))
}

/// Symbol-wise composition `sigma ∘ p`.
pub fn relabel(sigma: &Permutation, p: &Permutation) -> Result<Permutation> {
    if sigma.len() != p.len() {
        return Err(Error::LengthMismatch {
            expected: sigma.len(),
            actual: p.len(),
        });
    }
    let s = sigma.as_slice();
    Ok(Permutation::from_vec_unchecked(
        p.as_slice().iter().map(|&x| s[x as usize - 1]).collect(),
    ))
}
