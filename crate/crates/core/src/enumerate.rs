//! Corpus enumeration of finite distributive lattices via Birkhoff
//! duality: enumerate posets of join-irreducibles up to isomorphism and
//! emit their downset lattices.

use crate::error::{Error, Result};
use crate::lattice::{downset_frame, validate_frame, FiniteFrame};
use std::sync::Arc;

/// Largest supported `max_size`; the irreducible poset search is
/// factorial in the poset size.
pub const MAX_ENUM_SIZE: usize = 9;

/// All finite distributive lattices with at most `max_size` elements, up
/// to isomorphism, in a deterministic order (by size, then canonical
/// form). Includes the one-element lattice.
pub fn enumerate_frames(max_size: usize) -> Result<Vec<Arc<FiniteFrame>>> {
    if max_size < 1 {
        return Err(Error::BadInput("max_size must be ≥ 1".into()));
    }
    if max_size > MAX_ENUM_SIZE {
        return Err(Error::SizeLimitExceeded {
            context: "frame enumeration",
            needed: max_size,
            cap: MAX_ENUM_SIZE,
        });
    }
    let mut frames: Vec<(usize, Vec<u64>, Arc<FiniteFrame>)> = Vec::new();
    let mut seen_posets: Vec<Vec<u64>> = Vec::new();
    // A lattice with n elements has at most n-1 irreducibles.
    for k in 0..max_size {
        for below in posets_on(k) {
            if downset_count(k, &below) > max_size {
                continue;
            }
            let canon = poset_canonical(k, &below);
            if seen_posets.contains(&canon) {
                continue;
            }
            seen_posets.push(canon);
            let frame = Arc::new(downset_frame(k, &below)?);
            let cf = frame.canonical_form()?;
            if !frames.iter().any(|(n, code, _)| *n == frame.n() && *code == cf.code) {
                frames.push((frame.n(), cf.code, frame));
            }
        }
    }
    frames.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(frames.into_iter().map(|(_, _, f)| f).collect())
}

/// Naturally labeled posets on k points: `below[i]` is the mask of j ≤ i
/// (including i), with j ≤ i implying j ≤ i as integers.
fn posets_on(k: usize) -> Vec<Vec<u64>> {
    if k == 0 {
        return vec![vec![]];
    }
    let pair_bits = k * (k - 1) / 2;
    let mut pair_index = vec![vec![usize::MAX; k]; k];
    let mut idx = 0;
    for j in 0..k {
        for i in 0..j {
            pair_index[i][j] = idx;
            idx += 1;
        }
    }
    let mut out = Vec::new();
    'cand: for mask in 0u64..1 << pair_bits {
        let mut below = vec![0u64; k];
        for (i, b) in below.iter_mut().enumerate() {
            *b = 1 << i;
        }
        for j in 0..k {
            for i in 0..j {
                if mask >> pair_index[i][j] & 1 == 1 {
                    below[j] |= 1 << i;
                }
            }
        }
        // Transitivity: the cone below i must contain the cone below each
        // of its members.
        for i in 0..k {
            let mut need = 0u64;
            let mut members = below[i];
            while members != 0 {
                let j = members.trailing_zeros() as usize;
                members &= members - 1;
                need |= below[j];
            }
            if need & !below[i] != 0 {
                continue 'cand;
            }
        }
        out.push(below);
    }
    out
}

fn downset_count(k: usize, below: &[u64]) -> usize {
    let mut count = 0;
    'sets: for s in 0u64..1 << k {
        for i in 0..k {
            if s >> i & 1 == 1 && below[i] & !s != 0 {
                continue 'sets;
            }
        }
        count += 1;
    }
    count
}

fn poset_canonical(k: usize, below: &[u64]) -> Vec<u64> {
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best: Option<Vec<u64>> = None;
    permute(&mut perm, 0, &mut |p| {
        let mut enc = vec![0u64; k];
        for i in 0..k {
            for j in 0..k {
                if below[i] >> j & 1 == 1 {
                    enc[p[i]] |= 1 << p[j];
                }
            }
        }
        enc.sort_unstable();
        if best.as_ref().is_none_or(|b| enc < *b) {
            best = Some(enc);
        }
    });
    let mut b = best.unwrap_or_default();
    // Keep the sorted encoding stable under relabeling.
    b.sort_unstable();
    b
}

fn permute(perm: &mut Vec<usize>, at: usize, f: &mut impl FnMut(&[usize])) {
    if at == perm.len() {
        f(perm);
        return;
    }
    for i in at..perm.len() {
        perm.swap(at, i);
        permute(perm, at + 1, f);
        perm.swap(at, i);
    }
}

/// Brute-force oracle: all distributive lattices on at most `max_size`
/// elements found by validating every order matrix, up to isomorphism.
/// Exponential; only for cross-checking the Birkhoff enumeration.
pub fn brute_force_frames(max_size: usize) -> Result<Vec<Arc<FiniteFrame>>> {
    assert!(max_size <= 5);
    let mut out: Vec<(usize, Vec<u64>, Arc<FiniteFrame>)> = Vec::new();
    for n in 1..=max_size {
        let pair_bits = n * (n - 1) / 2;
        // Any finite poset can be relabeled so the order respects index
        // order, so scanning upper-triangular candidates is exhaustive.
        for mask in 0u64..1 << pair_bits {
            let mut rows = vec![vec![false; n]; n];
            for (i, row) in rows.iter_mut().enumerate() {
                row[i] = true;
            }
            let mut idx = 0;
            for j in 0..n {
                for i in 0..j {
                    if mask >> idx & 1 == 1 {
                        rows[i][j] = true;
                    }
                    idx += 1;
                }
            }
            let Ok(frame) = validate_frame(n, &rows) else {
                continue;
            };
            let cf = frame.canonical_form()?;
            if !out.iter().any(|(m, code, _)| *m == n && *code == cf.code) {
                out.push((n, cf.code, Arc::new(frame)));
            }
        }
    }
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(out.into_iter().map(|(_, _, f)| f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{chain, diamond};

    #[test]
    fn size_two_corpus() {
        let frames = enumerate_frames(2).unwrap();
        let nontrivial: Vec<_> = frames.iter().filter(|f| f.n() >= 2).collect();
        assert_eq!(nontrivial.len(), 1);
        assert_eq!(nontrivial[0].n(), 2);
    }

    #[test]
    fn size_four_corpus_matches_brute_force() {
        let fast = enumerate_frames(4).unwrap();
        let slow = brute_force_frames(4).unwrap();
        assert_eq!(fast.len(), slow.len());
        for (a, b) in fast.iter().zip(&slow) {
            assert!(a.isomorphic(b).unwrap());
        }
        // 1, F2, C3, C4, D4.
        assert_eq!(fast.len(), 5);
        assert!(fast.iter().any(|f| f.isomorphic(&chain(3)).unwrap()));
        assert!(fast.iter().any(|f| f.isomorphic(&chain(4)).unwrap()));
        assert!(fast.iter().any(|f| f.isomorphic(&diamond()).unwrap()));
    }

    #[test]
    fn corpus_counts_by_size() {
        // Known counts of distributive lattices by element count:
        // n = 1..8 → 1, 1, 1, 2, 3, 5, 8, 15.
        let frames = enumerate_frames(8).unwrap();
        let mut by_size = [0usize; 9];
        for f in &frames {
            by_size[f.n()] += 1;
        }
        assert_eq!(&by_size[1..], &[1, 1, 1, 2, 3, 5, 8, 15]);
        // Pairwise distinct canonical forms (isomorphism-free).
        for i in 0..frames.len() {
            for j in i + 1..frames.len() {
                assert!(!frames[i].isomorphic(&frames[j]).unwrap());
            }
        }
    }
}
