//! Brute-force reference implementations, written against the literal
//! duplicate-then-delete definition and sharing no code with the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

pub type Seq = Vec<u32>;

/// All permutations of `1..=n`, lexicographic, by recursive insertion.
pub fn all_perms(n: usize) -> Vec<Seq> {
    fn go(prefix: &mut Seq, used: &mut [bool], out: &mut Vec<Seq>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x as u32 + 1);
                go(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Writes the sequence twice (second copy reversed when `mirror`) and
/// deletes one copy of every symbol: the first-copy occurrence survives iff
/// its position's bit is set.
pub fn dup_loss(seg: &[u32], bits: &[bool], mirror: bool) -> Seq {
    let keep_first: BTreeMap<u32, bool> = seg.iter().copied().zip(bits.iter().copied()).collect();
    let second: Seq = if mirror {
        seg.iter().rev().copied().collect()
    } else {
        seg.to_vec()
    };
    let mut out: Seq = seg.iter().copied().filter(|x| keep_first[x]).collect();
    out.extend(second.into_iter().filter(|x| !keep_first[x]));
    out
}

pub fn bits_of(mask: u64, k: usize) -> Vec<bool> {
    (0..k).map(|i| mask & (1 << (k - 1 - i)) != 0).collect()
}

pub fn windowed(p: &[u32], start0: usize, bits: &[bool], mirror: bool) -> Seq {
    let k = bits.len();
    let mut out = p[..start0].to_vec();
    out.extend(dup_loss(&p[start0..start0 + k], bits, mirror));
    out.extend_from_slice(&p[start0 + k..]);
    out
}

pub fn out_ball(p: &[u32], k: usize, mirror: bool) -> BTreeSet<Seq> {
    let n = p.len();
    let mut set = BTreeSet::new();
    for start in 0..=n - k {
        for mask in 0..1u64 << k {
            set.insert(windowed(p, start, &bits_of(mask, k), mirror));
        }
    }
    set
}

/// In-balls of every element of `Π(n)`, by inverting all out-balls.
pub fn all_in_balls(n: usize, k: usize, mirror: bool) -> BTreeMap<Seq, BTreeSet<Seq>> {
    let mut map: BTreeMap<Seq, BTreeSet<Seq>> = BTreeMap::new();
    for rho in all_perms(n) {
        for sigma in out_ball(&rho, k, mirror) {
            map.entry(sigma).or_default().insert(rho.clone());
        }
    }
    map
}

pub fn max_pair_intersection(n: usize, mirror: bool) -> usize {
    let balls: Vec<BTreeSet<Seq>> = all_perms(n).iter().map(|p| out_ball(p, n, mirror)).collect();
    let mut best = 0;
    for i in 0..balls.len() {
        for j in i + 1..balls.len() {
            best = best.max(balls[i].intersection(&balls[j]).count());
        }
    }
    best
}

pub fn binom(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
