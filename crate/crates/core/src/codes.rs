//! Codes in `Π(n)` correcting one windowed operation of width `k`.
//!
//! A code corrects one error exactly when the width-`k` out-balls of its
//! words are pairwise disjoint. Each ball holds its own word, so the
//! error-free case is covered too.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{serialize_decimal, sphere_packing_bound};
use crate::neighborhood::{ball_out, Limits};
use crate::perm::{image_windowed, OpKind, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Code {
    pub n: usize,
    pub k: usize,
    pub kind: OpKind,
    pub words: Vec<Permutation>,
}

impl Code {
    pub fn new(n: usize, k: usize, kind: OpKind, words: Vec<Permutation>) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidWidth { k, n });
        }
        if let Some(w) = words.iter().find(|w| w.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: w.len(),
            });
        }
        Ok(Code { n, k, kind, words })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Header `n k kind`, then one codeword per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n, self.k, self.kind);
        for w in &self.words {
            writeln!(out, "{w}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("code file has no header".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [n, k, kind] = fields[..] else {
            return Err(Error::Parse(format!("bad code header {header:?}, expected `n k kind`")));
        };
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad number {s:?} in code header")))
        };
        let words = lines.map(str::parse).collect::<Result<Vec<Permutation>>>()?;
        Code::new(num(n)?, num(k)?, kind.parse()?, words)
    }
}

/// `true` iff the width-`k` out-balls of distinct words are pairwise
/// disjoint.
pub fn verify_code(c: &Code, limits: &Limits) -> Result<bool> {
    Limits::check(limits.ball, c.n, "code verification")?;
    let ball = |w: &Permutation| ball_out(w, c.kind, Some(c.k), limits);
    let balls: Vec<_> = if limits.parallel {
        c.words.par_iter().map(ball).collect::<Result<_>>()?
    } else {
        c.words.iter().map(ball).collect::<Result<_>>()?
    };
    let mut owner: HashMap<&Permutation, usize> = HashMap::new();
    for (i, b) in balls.iter().enumerate() {
        for p in b {
            if owner.insert(p, i).is_some_and(|j| j != i) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Scans `Π(n)` in lexicographic order and keeps each permutation whose
/// ball misses the balls of all words kept so far.
pub fn greedy_code(n: usize, k: usize, kind: OpKind, limits: &Limits) -> Result<Code> {
    if k < 2 || k > n {
        return Err(Error::InvalidWidth { k, n });
    }
    Limits::check(limits.code, n, "greedy code search")?;
    if n > 20 {
        return Err(Error::InvalidArgument("greedy code search supports n <= 20".into()));
    }
    let mut covered: HashSet<u64> = HashSet::new();
    let mut words = Vec::new();
    let mut ranks = Vec::with_capacity((n - k + 1) << k);
    for p in Permutation::all(n) {
        ranks.clear();
        for start in 0..=n - k {
            for m in 0..1u64 << k {
                let img = Permutation::from_vec_unchecked(image_windowed(kind, p.as_slice(), start, k, m));
                ranks.push(img.rank());
            }
        }
        if ranks.iter().all(|r| !covered.contains(r)) {
            covered.extend(ranks.iter().copied());
            words.push(p);
        }
    }
    Code::new(n, k, kind, words)
}

/// Achieved size against the sphere-packing bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeReport {
    pub n: usize,
    pub k: usize,
    pub kind: OpKind,
    pub size: usize,
    #[serde(serialize_with = "serialize_decimal")]
    pub bound: BigUint,
    /// `size / bound` to six decimal places, truncated.
    pub ratio: String,
}

impl CodeReport {
    pub const CSV_HEADER: &'static str = "n,k,kind,size,bound,ratio";

    pub fn new(c: &Code) -> Result<Self> {
        let bound = sphere_packing_bound(c.n, c.k, c.kind)?;
        let scaled = BigUint::from(c.len()) * 1_000_000u32 / &bound;
        let whole = &scaled / 1_000_000u32;
        let frac = &scaled % 1_000_000u32;
        Ok(CodeReport {
            n: c.n,
            k: c.k,
            kind: c.kind,
            size: c.len(),
            bound,
            ratio: format!("{whole}.{frac:0>6}"),
        })
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n, self.k, self.kind, self.size, self.bound, self.ratio
        )
    }
}
