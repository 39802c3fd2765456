//! Frame coproducts via the C-ideal construction, and the filter
//! completion of a finite frame.

use crate::error::{Error, Result};
use crate::lattice::{
    get_bit, iter_bits, set_bit, validate_frame, words_for, FiniteFrame, FrameHom,
};
use std::collections::HashMap;
use std::sync::Arc;

/// Default cap on the number of C-ideals materialized for a coproduct.
pub const DEFAULT_COPRODUCT_CAP: usize = 4096;

/// A frame coproduct L ⊕ M with its injections and the underlying
/// C-ideal sets (bitsets over L×M pairs) kept for induced-map
/// computations.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub frame: Arc<FiniteFrame>,
    pub inj_left: FrameHom,
    pub inj_right: FrameHom,
    left: Arc<FiniteFrame>,
    right: Arc<FiniteFrame>,
    ideals: Vec<Vec<u64>>,
}

/// C-ideals of L×M: downsets containing the bottom cross, closed under
/// binary joins in each coordinate. Ordered by inclusion they form the
/// frame coproduct; the injections send a to the ideal generated by
/// (a, ⊤) and symmetrically.
pub fn coproduct(
    left: &Arc<FiniteFrame>,
    right: &Arc<FiniteFrame>,
    cap: usize,
) -> Result<Coproduct> {
    let n = left.n();
    let m = right.n();
    let pairs = n * m;
    if pairs > DEFAULT_COPRODUCT_CAP {
        return Err(Error::SizeLimitExceeded {
            context: "coproduct pair table",
            needed: pairs,
            cap: DEFAULT_COPRODUCT_CAP,
        });
    }
    let words = words_for(pairs);
    let pid = |a: usize, b: usize| a * m + b;

    // Downward closure masks per pair.
    let mut down_pair = vec![vec![0u64; words]; pairs];
    for a in 0..n {
        for b in 0..m {
            let row = &mut down_pair[pid(a, b)];
            for a2 in iter_bits(left.down_mask(a)) {
                for b2 in iter_bits(right.down_mask(b)) {
                    set_bit(row, pid(a2, b2));
                }
            }
        }
    }

    let mut cross = vec![0u64; words];
    for b in 0..m {
        set_bit(&mut cross, pid(left.bottom(), b));
    }
    for a in 0..n {
        set_bit(&mut cross, pid(a, right.bottom()));
    }

    let saturate = |mut s: Vec<u64>| -> Vec<u64> {
        loop {
            let mut changed = false;
            // Downward closure.
            let mut next = s.clone();
            for p in iter_bits(&s) {
                for w in 0..words {
                    next[w] |= down_pair[p][w];
                }
            }
            // Join closure per coordinate.
            for b in 0..m {
                let row: Vec<usize> = (0..n).filter(|&a| get_bit(&next, pid(a, b))).collect();
                for (i, &a1) in row.iter().enumerate() {
                    for &a2 in &row[i + 1..] {
                        set_bit(&mut next, pid(left.join(a1, a2), b));
                    }
                }
            }
            for a in 0..n {
                let col: Vec<usize> = (0..m).filter(|&b| get_bit(&next, pid(a, b))).collect();
                for (i, &b1) in col.iter().enumerate() {
                    for &b2 in &col[i + 1..] {
                        set_bit(&mut next, pid(a, right.join(b1, b2)));
                    }
                }
            }
            if next != s {
                changed = true;
                s = next;
            }
            if !changed {
                return s;
            }
        }
    };

    // Basic ideals and their join-closure.
    let mut found: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut ideals: Vec<Vec<u64>> = Vec::new();
    let push = |s: Vec<u64>, ideals: &mut Vec<Vec<u64>>, found: &mut HashMap<Vec<u64>, usize>| {
        if !found.contains_key(&s) {
            found.insert(s.clone(), ideals.len());
            ideals.push(s);
        }
    };
    let mut basics: Vec<Vec<u64>> = Vec::new();
    for p in 0..pairs {
        let mut s = cross.clone();
        for w in 0..words {
            s[w] |= down_pair[p][w];
        }
        let s = saturate(s);
        if !basics.contains(&s) {
            basics.push(s);
        }
    }
    push(saturate(cross.clone()), &mut ideals, &mut found);
    let mut head = 0;
    while head < ideals.len() {
        let current = ideals[head].clone();
        head += 1;
        for basic in &basics {
            let mut s = current.clone();
            for w in 0..words {
                s[w] |= basic[w];
            }
            let s = saturate(s);
            if !found.contains_key(&s) {
                if ideals.len() >= cap {
                    return Err(Error::SizeLimitExceeded {
                        context: "coproduct C-ideal count",
                        needed: ideals.len() + 1,
                        cap,
                    });
                }
                push(s, &mut ideals, &mut found);
            }
        }
    }

    ideals.sort();
    let count = ideals.len();
    let index: HashMap<&Vec<u64>, usize> = ideals.iter().enumerate().map(|(i, s)| (s, i)).collect();

    let rows: Vec<Vec<bool>> = ideals
        .iter()
        .map(|a| {
            ideals
                .iter()
                .map(|b| a.iter().zip(b).all(|(x, y)| x & !y == 0))
                .collect()
        })
        .collect();
    let frame = Arc::new(validate_frame(count, &rows)?);

    let ideal_of = |a: usize, b: usize| -> usize {
        let mut s = cross.clone();
        for w in 0..words {
            s[w] |= down_pair[pid(a, b)][w];
        }
        index[&saturate(s)]
    };
    let inj_left = FrameHom::new(
        left.clone(),
        frame.clone(),
        (0..n).map(|a| ideal_of(a, right.top()) as u16).collect(),
    )?;
    let inj_right = FrameHom::new(
        right.clone(),
        frame.clone(),
        (0..m).map(|b| ideal_of(left.top(), b) as u16).collect(),
    )?;

    Ok(Coproduct {
        frame,
        inj_left,
        inj_right,
        left: left.clone(),
        right: right.clone(),
        ideals,
    })
}

impl Coproduct {
    /// The mediating map of the coproduct universal property: given homs
    /// f: L → T and g: M → T, the unique hom h with h∘inj_left = f and
    /// h∘inj_right = g. Uniqueness holds because the injections generate.
    pub fn induced_hom(&self, f: &FrameHom, g: &FrameHom) -> Result<FrameHom> {
        if **f.source() != *self.left || **g.source() != *self.right {
            return Err(Error::BadInput("induced_hom: factor mismatch".into()));
        }
        if *f.target() != *g.target() {
            return Err(Error::BadInput("induced_hom: target mismatch".into()));
        }
        let t = f.target();
        let m = self.right.n();
        let map: Vec<u16> = self
            .ideals
            .iter()
            .map(|s| {
                let mut acc = t.bottom();
                for p in iter_bits(s) {
                    let (a, b) = (p / m, p % m);
                    acc = t.join(acc, t.meet(f.apply(a), g.apply(b)));
                }
                acc as u16
            })
            .collect();
        FrameHom::new(self.frame.clone(), t.clone(), map)
    }

    /// Pairs (a, b) belonging to a given C-ideal.
    pub fn ideal_pairs(&self, ideal: usize) -> Vec<(usize, usize)> {
        let m = self.right.n();
        iter_bits(&self.ideals[ideal]).map(|p| (p / m, p % m)).collect()
    }
}

/// The filter completion of a finite frame: every filter is principal, so
/// the result is the same carrier with the order transposed. The returned
/// table is the unit a ↦ ↑a; it is an order anti-isomorphism (it swaps
/// meets and joins), not a frame hom — it is the generator map of the
/// free construction.
pub fn filter_completion(frame: &Arc<FiniteFrame>) -> Result<(Arc<FiniteFrame>, Vec<u16>)> {
    let n = frame.n();
    let rows: Vec<Vec<bool>> = (0..n)
        .map(|a| (0..n).map(|b| frame.leq(b, a)).collect())
        .collect();
    let labels = frame
        .labels()
        .map(|ls| ls.iter().map(|l| format!("↑{l}")).collect());
    let completed = Arc::new(crate::lattice::validate_frame_with_labels(n, &rows, labels)?);
    Ok((completed, (0..n as u16).collect()))
}
