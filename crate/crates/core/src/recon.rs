//! Sequence reconstruction: recover a permutation from a set of distinct
//! outputs of one operation applied to it.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::neighborhood::{ball_in, ball_out, Limits, NeighborSet};
use crate::perm::{OpKind, Permutation};

/// Distinct noisy observations of one unknown permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationSet {
    n: usize,
    obs: NeighborSet,
}

impl ObservationSet {
    /// Duplicates are collapsed.
    pub fn new(obs: Vec<Permutation>) -> Result<Self> {
        let n = obs
            .first()
            .map(Permutation::len)
            .ok_or_else(|| Error::InvalidArgument("observation set is empty".into()))?;
        if let Some(bad) = obs.iter().find(|p| p.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: bad.len(),
            });
        }
        Ok(ObservationSet {
            n,
            obs: NeighborSet::from_perms(obs),
        })
    }

    /// One permutation per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let obs = text
            .lines()
            .enumerate()
            .filter_map(|(i, line)| {
                let line = line.split('#').next().unwrap_or("").trim();
                (!line.is_empty()).then(|| {
                    line.parse::<Permutation>().map_err(|e| match e {
                        Error::Parse(msg) => Error::Parse(format!("line {}: {msg}", i + 1)),
                        other => other,
                    })
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ObservationSet::new(obs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.obs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.obs.is_empty()
    }

    pub fn observations(&self) -> &NeighborSet {
        &self.obs
    }
}

/// Number of distinct observations that always determines the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Threshold {
    Count(BigUint),
    /// Two distinct sources can share every observation.
    Impossible,
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Count(c) => write!(f, "{c}"),
            Threshold::Impossible => f.write_str("IMPOSSIBLE"),
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Threshold {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "IMPOSSIBLE" {
            return Ok(Threshold::Impossible);
        }
        BigUint::parse_bytes(s.as_bytes(), 10)
            .map(Threshold::Count)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid threshold {s:?}")))
    }
}

/// `2^(n-1) + 1` for TDRL with `n >= 3`. Mirror-TDRL balls can coincide
/// entirely, and for `n <= 2` every TDRL ball is all of `Π(n)`.
pub fn guaranteed_threshold(n: usize, kind: OpKind) -> Threshold {
    match kind {
        OpKind::Tdrl if n >= 3 => Threshold::Count((BigUint::one() << (n - 1)) + 1u32),
        _ => Threshold::Impossible,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReconstructionResult {
    pub candidates: NeighborSet,
    pub unique: bool,
    pub guaranteed_threshold: Threshold,
}

/// Every `π` whose out-ball contains all observations: the intersection of
/// the observations' in-balls.
pub fn candidates(o: &ObservationSet, kind: OpKind, limits: &Limits) -> Result<NeighborSet> {
    let obs = o.observations().as_slice();
    let balls: Vec<NeighborSet> = if limits.parallel {
        obs.par_iter()
            .map(|p| ball_in(p, kind, None, limits))
            .collect::<Result<_>>()?
    } else {
        obs.iter()
            .map(|p| ball_in(p, kind, None, limits))
            .collect::<Result<_>>()?
    };
    let mut iter = balls.into_iter();
    let first = iter.next().expect("observation sets are nonempty");
    Ok(iter.fold(first, |acc, b| acc.intersection(&b)))
}

/// Reference version of [`candidates`] that tests every `π ∈ Π(n)`.
pub fn candidates_exhaustive(
    o: &ObservationSet,
    kind: OpKind,
    limits: &Limits,
) -> Result<NeighborSet> {
    Limits::check(limits.in_fallback, o.n(), "exhaustive candidate search")?;
    let mut found = Vec::new();
    for pi in Permutation::all(o.n()) {
        let ball = ball_out(&pi, kind, None, limits)?;
        if o.observations().iter().all(|x| ball.contains(x)) {
            found.push(pi);
        }
    }
    Ok(NeighborSet::from_perms(found))
}

pub fn reconstruct(o: &ObservationSet, kind: OpKind, limits: &Limits) -> Result<ReconstructionResult> {
    let candidates = candidates(o, kind, limits)?;
    Ok(ReconstructionResult {
        unique: candidates.len() == 1,
        candidates,
        guaranteed_threshold: guaranteed_threshold(o.n(), kind),
    })
}

/// Windowed reconstruction is only accepted when the window spans the whole
/// permutation.
pub fn reconstruct_windowed(
    o: &ObservationSet,
    kind: OpKind,
    k: usize,
    limits: &Limits,
) -> Result<ReconstructionResult> {
    if k != o.n() {
        return Err(Error::Unsupported(format!(
            "reconstruction under width-{k} windows (n = {}) is not defined",
            o.n()
        )));
    }
    reconstruct(o, kind, limits)
}
