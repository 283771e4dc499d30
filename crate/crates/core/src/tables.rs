//! Full pattern tables: every pattern applied to the identity, all-ones
//! pattern first.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::{apply, OpKind, Pattern, Permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableId {
    /// TDRL on `id(5)`.
    Tdrl5,
    /// Mirror-TDRL on `id(4)`.
    Mtdrl4,
}

impl TableId {
    pub fn kind(self) -> OpKind {
        match self {
            TableId::Tdrl5 => OpKind::Tdrl,
            TableId::Mtdrl4 => OpKind::Mtdrl,
        }
    }

    pub fn n(self) -> usize {
        match self {
            TableId::Tdrl5 => 5,
            TableId::Mtdrl4 => 4,
        }
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tdrl5" => Ok(TableId::Tdrl5),
            "mtdrl4" => Ok(TableId::Mtdrl4),
            _ => Err(Error::Parse(format!("unknown table {s:?}"))),
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableId::Tdrl5 => "tdrl5",
            TableId::Mtdrl4 => "mtdrl4",
        })
    }
}

/// `(result, pattern)` for all `2^n` patterns in descending pattern order.
pub fn table_rows(which: TableId) -> Vec<(Permutation, Pattern)> {
    let n = which.n();
    let id = Permutation::identity(n);
    (0..1u64 << n)
        .rev()
        .map(|m| {
            let b = Pattern::from_mask(m, n);
            (apply(which.kind(), &id, &b).expect("pattern length is n"), b)
        })
        .collect()
}

/// One row per line: `2 3 5 1 4  (0 1 1 0 1)`.
pub fn render_table(which: TableId) -> String {
    table_rows(which)
        .iter()
        .map(|(p, b)| format!("{p}  ({})\n", b.spaced()))
        .collect()
}
