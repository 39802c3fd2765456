//! Finite frames (= finite bounded distributive lattices) and frame
//! homomorphisms.
//!
//! Elements are dense integer indices. The order is kept as a bit matrix
//! and meet/join/implication tables are precomputed at validation time, so
//! all downstream algorithms are table lookups.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

/// Number of 64-bit words needed for `n` bits.
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

pub(crate) fn get_bit(row: &[u64], i: usize) -> bool {
    row[i / 64] >> (i % 64) & 1 == 1
}

pub(crate) fn set_bit(row: &mut [u64], i: usize) {
    row[i / 64] |= 1 << (i % 64);
}

/// Iterate indices of set bits.
pub(crate) fn iter_bits(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut word = word;
        std::iter::from_fn(move || {
            if word == 0 {
                None
            } else {
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            }
        })
    })
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Hard ceiling on element counts accepted by [`validate_frame`].
pub const MAX_FRAME_SIZE: usize = 4096;

/// Above this size validation switches from cubic brute-force checks to
/// join-irreducible bitmask checks (equivalent for lattices).
const DIRECT_CHECK_MAX: usize = 300;

/// A validated finite frame.
///
/// Invariants established by [`validate_frame`]: the order is a bounded
/// lattice, it is distributive, and Heyting implication is total.
#[derive(Clone)]
pub struct FiniteFrame {
    n: usize,
    /// `up[a]` bit `b`: a ≤ b.
    up: Vec<Vec<u64>>,
    /// `down[a]` bit `b`: b ≤ a.
    down: Vec<Vec<u64>>,
    meet: Vec<u16>,
    join: Vec<u16>,
    imp: Vec<u16>,
    bottom: usize,
    top: usize,
    jis: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl PartialEq for FiniteFrame {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.up == other.up
    }
}
impl Eq for FiniteFrame {}

impl std::fmt::Debug for FiniteFrame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteFrame(n={})", self.n)
    }
}

impl FiniteFrame {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        get_bit(&self.up[a], b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b] as usize
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b] as usize
    }

    /// Heyting implication: greatest `c` with `a ∧ c ≤ b`.
    pub fn heyting(&self, a: usize, b: usize) -> usize {
        self.imp[a * self.n + b] as usize
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// One-element frames (⊥ = ⊤) are legal values carrying this flag.
    pub fn is_degenerate(&self) -> bool {
        self.n == 1
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Join of an iterator of elements (empty join is ⊥).
    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Meet of an iterator of elements (empty meet is ⊤).
    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Join-irreducible elements in index order.
    pub fn join_irreducibles(&self) -> &[usize] {
        &self.jis
    }

    pub(crate) fn down_mask(&self, a: usize) -> &[u64] {
        &self.down[a]
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(ls) => ls[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn set_labels(&mut self, labels: Option<Vec<String>>) {
        if let Some(ls) = &labels {
            assert_eq!(ls.len(), self.n);
        }
        self.labels = labels;
    }

    /// Raw order matrix as rows of booleans (for serialization).
    pub fn leq_rows(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|a| (0..self.n).map(|b| self.leq(a, b)).collect())
            .collect()
    }

    /// Minimum adjacency-matrix encoding over all element permutations,
    /// together with every permutation achieving it (the automorphism
    /// coset, used to fingerprint structures built on top of the frame).
    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        if self.n > 10 {
            return Err(Error::SizeLimitExceeded {
                context: "canonical form (factorial search)",
                needed: self.n,
                cap: 10,
            });
        }
        let n = self.n;
        let code_words = words_for(n * n);
        let mut best: Option<Vec<u64>> = None;
        let mut best_perms: Vec<Vec<u16>> = Vec::new();
        let mut perm: Vec<u16> = (0..n as u16).collect();
        permute_all(&mut perm, &mut |p| {
            let mut code = vec![0u64; code_words];
            for a in 0..n {
                for b in 0..n {
                    if self.leq(a, b) {
                        set_bit(&mut code, p[a] as usize * n + p[b] as usize);
                    }
                }
            }
            match &best {
                Some(cur) if code > *cur => {}
                Some(cur) if code == *cur => best_perms.push(p.to_vec()),
                _ => {
                    best = Some(code);
                    best_perms = vec![p.to_vec()];
                }
            }
        });
        Ok(CanonicalForm {
            n,
            code: best.unwrap_or_default(),
            perms: best_perms,
        })
    }

    /// Two frames are isomorphic iff their canonical forms agree.
    pub fn isomorphic(&self, other: &FiniteFrame) -> Result<bool> {
        if self.n != other.n {
            return Ok(false);
        }
        Ok(self.canonical_form()?.code == other.canonical_form()?.code)
    }
}

/// Canonical encoding of a frame under element permutation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    pub code: Vec<u64>,
    /// All permutations (old index → new index) achieving the minimum.
    pub perms: Vec<Vec<u16>>,
}

fn permute_all(perm: &mut [u16], f: &mut impl FnMut(&[u16])) {
    // Heap's algorithm.
    fn rec(k: usize, perm: &mut [u16], f: &mut impl FnMut(&[u16])) {
        if k <= 1 {
            f(perm);
            return;
        }
        for i in 0..k {
            rec(k - 1, perm, f);
            if k.is_multiple_of(2) {
                perm.swap(i, k - 1);
            } else {
                perm.swap(0, k - 1);
            }
        }
    }
    let k = perm.len();
    if k == 0 {
        f(perm);
    } else {
        rec(k, perm, f);
    }
}

/// Validate a candidate order matrix and return the frame with cached
/// meet/join/implication tables, or the first violated invariant with a
/// witness.
pub fn validate_frame(n: usize, rows: &[Vec<bool>]) -> Result<FiniteFrame> {
    validate_frame_with_labels(n, rows, None)
}

pub fn validate_frame_with_labels(
    n: usize,
    rows: &[Vec<bool>],
    labels: Option<Vec<String>>,
) -> Result<FiniteFrame> {
    if n == 0 || rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::BadInput(format!(
            "order matrix must be square and non-empty (n={n})"
        )));
    }
    if n > MAX_FRAME_SIZE {
        return Err(Error::SizeLimitExceeded {
            context: "frame validation",
            needed: n,
            cap: MAX_FRAME_SIZE,
        });
    }
    let words = words_for(n);
    let mut up = vec![vec![0u64; words]; n];
    for (a, row) in rows.iter().enumerate() {
        for (b, &v) in row.iter().enumerate() {
            if v {
                set_bit(&mut up[a], b);
            }
        }
    }

    // Partial order.
    for a in 0..n {
        if !get_bit(&up[a], a) {
            return Err(Error::NotAPartialOrder {
                reason: "not reflexive",
                witness: vec![a],
            });
        }
    }
    for a in 0..n {
        for b in iter_bits(&up[a]) {
            if b != a && get_bit(&up[b], a) {
                return Err(Error::NotAPartialOrder {
                    reason: "not antisymmetric",
                    witness: vec![a, b],
                });
            }
            if !subset(&up[b], &up[a]) {
                let c = iter_bits(&up[b]).find(|&c| !get_bit(&up[a], c)).unwrap();
                return Err(Error::NotAPartialOrder {
                    reason: "not transitive",
                    witness: vec![a, b, c],
                });
            }
        }
    }

    let mut down = vec![vec![0u64; words]; n];
    for a in 0..n {
        for b in iter_bits(&up[a]) {
            set_bit(&mut down[b], a);
        }
    }

    let full: Vec<u64> = {
        let mut m = vec![0u64; words];
        for i in 0..n {
            set_bit(&mut m, i);
        }
        m
    };
    let bottom = (0..n).find(|&a| up[a] == full);
    let top = (0..n).find(|&a| down[a] == full);
    let (bottom, top) = match (bottom, top) {
        (Some(b), Some(t)) => (b, t),
        (None, _) => {
            return Err(Error::NoBoundedLattice {
                reason: "no bottom element",
                witness: vec![],
            })
        }
        (_, None) => {
            return Err(Error::NoBoundedLattice {
                reason: "no top element",
                witness: vec![],
            })
        }
    };

    // Meets and joins: the unique extremum among the bounds, if any.
    let mut meet = vec![0u16; n * n];
    let mut join = vec![0u16; n * n];
    let mut scratch = vec![0u64; words];
    for a in 0..n {
        for b in a..n {
            for w in 0..words {
                scratch[w] = down[a][w] & down[b][w];
            }
            let glb = extremum(&scratch, &down);
            let glb = match glb {
                Some(g) => g,
                None => {
                    return Err(Error::NoBoundedLattice {
                        reason: "pair without a meet",
                        witness: vec![a, b],
                    })
                }
            };
            for w in 0..words {
                scratch[w] = up[a][w] & up[b][w];
            }
            let lub = extremum(&scratch, &up);
            let lub = match lub {
                Some(l) => l,
                None => {
                    return Err(Error::NoBoundedLattice {
                        reason: "pair without a join",
                        witness: vec![a, b],
                    })
                }
            };
            meet[a * n + b] = glb as u16;
            meet[b * n + a] = glb as u16;
            join[a * n + b] = lub as u16;
            join[b * n + a] = lub as u16;
        }
    }

    // Join-irreducibles: exactly one maximal element strictly below.
    let mut jis = Vec::new();
    for x in 0..n {
        if x == bottom {
            continue;
        }
        let mut maximal = 0usize;
        for c in iter_bits(&down[x]) {
            if c == x {
                continue;
            }
            let is_max = iter_bits(&down[x]).all(|d| d == x || d == c || !get_bit(&up[c], d));
            if is_max {
                maximal += 1;
                if maximal > 1 {
                    break;
                }
            }
        }
        if maximal == 1 {
            jis.push(x);
        }
    }

    // Distributivity.
    if n <= DIRECT_CHECK_MAX {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = meet[a * n + join[b * n + c] as usize];
                    let rhs = join[(meet[a * n + b] as usize) * n + meet[a * n + c] as usize];
                    if lhs != rhs {
                        return Err(Error::NotDistributive { a, b, c });
                    }
                }
            }
        }
    } else {
        // A finite lattice is distributive iff join-irreducibles are
        // join-prime, i.e. the irreducibles below a join are the union of
        // those below the joinands.
        let jwords = words_for(jis.len());
        let mut jimask = vec![vec![0u64; jwords]; n];
        for (ji_idx, &j) in jis.iter().enumerate() {
            for x in iter_bits(&up[j]) {
                set_bit(&mut jimask[x], ji_idx);
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = join[a * n + b] as usize;
                for w in 0..jwords {
                    let diff = jimask[ab][w] & !(jimask[a][w] | jimask[b][w]);
                    if diff != 0 {
                        let ji_idx = w * 64 + diff.trailing_zeros() as usize;
                        // j ≤ a∨b but j ≰ a and j ≰ b: the triple
                        // (j, a, b) violates distributivity.
                        return Err(Error::NotDistributive { a: jis[ji_idx], b: a, c: b });
                    }
                }
            }
        }
    }

    // Heyting implication; existence asserted by construction.
    let mut imp = vec![0u16; n * n];
    if n <= DIRECT_CHECK_MAX {
        for a in 0..n {
            for b in 0..n {
                let mut best = bottom;
                for c in 0..n {
                    if get_bit(&up[meet[a * n + c] as usize], b) {
                        best = join[best * n + c] as usize;
                    }
                }
                if !get_bit(&up[meet[a * n + best] as usize], b) {
                    return Err(Error::NoBoundedLattice {
                        reason: "Heyting implication missing",
                        witness: vec![a, b],
                    });
                }
                imp[a * n + b] = best as u16;
            }
        }
    } else {
        // In the downset representation, the irreducibles below a→b are
        // the j whose irreducible downset meets a only inside b.
        let jwords = words_for(jis.len());
        let mut jimask = vec![vec![0u64; jwords]; n];
        for (ji_idx, &j) in jis.iter().enumerate() {
            for x in iter_bits(&up[j]) {
                set_bit(&mut jimask[x], ji_idx);
            }
        }
        let ji_down: Vec<Vec<u64>> = jis.iter().map(|&j| jimask[j].clone()).collect();
        let mut by_mask: HashMap<&[u64], usize> = HashMap::new();
        for x in 0..n {
            by_mask.insert(&jimask[x], x);
        }
        let mut m = vec![0u64; jwords];
        for a in 0..n {
            for b in 0..n {
                for w in 0..jwords {
                    m[w] = jimask[a][w] & !jimask[b][w];
                }
                let mut r = bottom;
                for (ji_idx, jd) in ji_down.iter().enumerate() {
                    if jd.iter().zip(&m).all(|(x, y)| x & y == 0) {
                        r = join[r * n + jis[ji_idx]] as usize;
                    }
                }
                if !get_bit(&up[meet[a * n + r] as usize], b) {
                    return Err(Error::NoBoundedLattice {
                        reason: "Heyting implication missing",
                        witness: vec![a, b],
                    });
                }
                imp[a * n + b] = r as u16;
            }
        }
    }

    if let Some(ls) = &labels {
        if ls.len() != n {
            return Err(Error::BadInput("label count must equal n".into()));
        }
    }

    Ok(FiniteFrame {
        n,
        up,
        down,
        meet,
        join,
        imp,
        bottom,
        top,
        jis,
        labels,
    })
}

/// The unique element of `set` whose cone (per `cones`) contains `set`.
fn extremum(set: &[u64], cones: &[Vec<u64>]) -> Option<usize> {
    let mut best: Option<usize> = None;
    let mut best_count = 0usize;
    for x in iter_bits(set) {
        let c = cones[x].iter().map(|w| w.count_ones() as usize).sum();
        if best.is_none() || c > best_count {
            best = Some(x);
            best_count = c;
        }
    }
    let b = best?;
    subset(set, &cones[b]).then_some(b)
}

/// Build a frame from rows given as bit masks over ≤ 64 elements.
pub fn frame_from_masks(n: usize, up_masks: &[u64]) -> Result<FiniteFrame> {
    let rows: Vec<Vec<bool>> = up_masks
        .iter()
        .map(|&m| (0..n).map(|b| m >> b & 1 == 1).collect())
        .collect();
    validate_frame(n, &rows)
}

/// The two-element frame, shared.
pub fn two() -> Arc<FiniteFrame> {
    static TWO: OnceLock<Arc<FiniteFrame>> = OnceLock::new();
    TWO.get_or_init(|| Arc::new(chain(2)))
        .clone()
}

/// Chain with k elements, 0 = ⊥ < 1 < … < k-1 = ⊤.
pub fn chain(k: usize) -> FiniteFrame {
    assert!(k >= 1);
    let rows: Vec<Vec<bool>> = (0..k).map(|a| (0..k).map(|b| a <= b).collect()).collect();
    validate_frame(k, &rows).expect("chains are frames")
}

/// The four-element diamond 2×2: ⊥, two incomparable atoms, ⊤.
pub fn diamond() -> FiniteFrame {
    frame_from_masks(4, &[0b1111, 0b1010, 0b1100, 0b1000]).expect("diamond is a frame")
}

/// Boolean frame 2^k as downsets of a k-antichain.
pub fn boolean(k: usize) -> FiniteFrame {
    assert!(k <= 6);
    let n = 1usize << k;
    let rows: Vec<Vec<bool>> = (0..n)
        .map(|a| (0..n).map(|b| a & !b == 0).collect())
        .collect();
    validate_frame(n, &rows).expect("powersets are frames")
}

/// Downset lattice of a poset given by `below[i]` = mask of j ≤ i
/// (including i). Elements are the downsets in ascending mask order.
pub fn downset_frame(poset_n: usize, below: &[u64]) -> Result<FiniteFrame> {
    assert!(poset_n <= 20);
    let mut sets = Vec::new();
    'outer: for s in 0u64..1 << poset_n {
        for i in 0..poset_n {
            if s >> i & 1 == 1 && below[i] & !s != 0 {
                continue 'outer;
            }
        }
        sets.push(s);
    }
    let n = sets.len();
    if n > MAX_FRAME_SIZE {
        return Err(Error::SizeLimitExceeded {
            context: "downset lattice",
            needed: n,
            cap: MAX_FRAME_SIZE,
        });
    }
    let rows: Vec<Vec<bool>> = sets
        .iter()
        .map(|&a| sets.iter().map(|&b| a & !b == 0).collect())
        .collect();
    validate_frame(n, &rows)
}

/// A bottom/top/meet/join-preserving map between finite frames.
#[derive(Clone, Debug)]
pub struct FrameHom {
    source: Arc<FiniteFrame>,
    target: Arc<FiniteFrame>,
    map: Vec<u16>,
}

impl PartialEq for FrameHom {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && *self.source == *other.source && *self.target == *other.target
    }
}
impl Eq for FrameHom {}

impl FrameHom {
    /// Validate the hom laws and construct.
    pub fn new(source: Arc<FiniteFrame>, target: Arc<FiniteFrame>, map: Vec<u16>) -> Result<Self> {
        if map.len() != source.n() {
            return Err(Error::BadInput("hom table length must equal source size".into()));
        }
        if let Some(&v) = map.iter().find(|&&v| v as usize >= target.n()) {
            return Err(Error::BadInput(format!("hom value {v} out of range")));
        }
        let f = |a: usize| map[a] as usize;
        if f(source.bottom()) != target.bottom() {
            return Err(Error::NotAHom {
                law: "bottom",
                witness: vec![source.bottom()],
            });
        }
        if f(source.top()) != target.top() {
            return Err(Error::NotAHom {
                law: "top",
                witness: vec![source.top()],
            });
        }
        for a in source.elements() {
            for b in source.elements() {
                if f(source.meet(a, b)) != target.meet(f(a), f(b)) {
                    return Err(Error::NotAHom {
                        law: "binary meet",
                        witness: vec![a, b],
                    });
                }
                if f(source.join(a, b)) != target.join(f(a), f(b)) {
                    return Err(Error::NotAHom {
                        law: "binary join",
                        witness: vec![a, b],
                    });
                }
            }
        }
        Ok(FrameHom { source, target, map })
    }

    pub fn identity(frame: Arc<FiniteFrame>) -> Self {
        let map = (0..frame.n() as u16).collect();
        FrameHom {
            source: frame.clone(),
            target: frame,
            map,
        }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a] as usize
    }

    pub fn source(&self) -> &Arc<FiniteFrame> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteFrame> {
        &self.target
    }

    pub fn table(&self) -> &[u16] {
        &self.map
    }

    pub fn compose(&self, then: &FrameHom) -> Result<FrameHom> {
        if *self.target != *then.source {
            return Err(Error::BadInput("hom composition domain mismatch".into()));
        }
        let map = self.map.iter().map(|&a| then.map[a as usize]).collect();
        Ok(FrameHom {
            source: self.source.clone(),
            target: then.target.clone(),
            map,
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.n()];
        for &v in &self.map {
            if seen[v as usize] {
                return false;
            }
            seen[v as usize] = true;
        }
        true
    }

    pub fn check_injective(&self) -> Result<()> {
        let mut seen: Vec<Option<usize>> = vec![None; self.target.n()];
        for (a, &v) in self.map.iter().enumerate() {
            if let Some(prev) = seen[v as usize] {
                return Err(Error::NotInjective {
                    a: prev,
                    b: a,
                    image: v as usize,
                });
            }
            seen[v as usize] = Some(a);
        }
        Ok(())
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.n()];
        for &v in &self.map {
            seen[v as usize] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// Sorted, deduplicated image.
    pub fn image(&self) -> Vec<usize> {
        let mut img: Vec<usize> = self.map.iter().map(|&v| v as usize).collect();
        img.sort_unstable();
        img.dedup();
        img
    }
}

/// A subframe presented as its own frame plus the inclusion hom.
#[derive(Clone, Debug)]
pub struct Subframe {
    pub frame: Arc<FiniteFrame>,
    pub inclusion: FrameHom,
    /// Ambient index → subframe index, where defined.
    pub index_of: Vec<Option<u16>>,
}

impl Subframe {
    pub fn contains(&self, ambient: usize) -> bool {
        self.index_of[ambient].is_some()
    }

    pub fn index(&self, ambient: usize) -> Option<usize> {
        self.index_of[ambient].map(|i| i as usize)
    }
}

/// Extract the subframe on `subset`, which must contain ⊥ and ⊤ and be
/// closed under binary meet and join.
pub fn subframe(ambient: &Arc<FiniteFrame>, subset: &[usize]) -> Result<Subframe> {
    let mut elems: Vec<usize> = subset.to_vec();
    elems.sort_unstable();
    elems.dedup();
    let mut index_of: Vec<Option<u16>> = vec![None; ambient.n()];
    for (i, &e) in elems.iter().enumerate() {
        if e >= ambient.n() {
            return Err(Error::BadInput(format!("subframe element {e} out of range")));
        }
        index_of[e] = Some(i as u16);
    }
    if index_of[ambient.bottom()].is_none() || index_of[ambient.top()].is_none() {
        return Err(Error::BadInput("subframe must contain bottom and top".into()));
    }
    for &a in &elems {
        for &b in &elems {
            if index_of[ambient.meet(a, b)].is_none() || index_of[ambient.join(a, b)].is_none() {
                return Err(Error::BadInput(format!(
                    "subset not closed under meet/join at ({a},{b})"
                )));
            }
        }
    }
    let n = elems.len();
    let rows: Vec<Vec<bool>> = elems
        .iter()
        .map(|&a| elems.iter().map(|&b| ambient.leq(a, b)).collect())
        .collect();
    let labels = ambient
        .labels()
        .map(|ls| elems.iter().map(|&e| ls[e].clone()).collect());
    let frame = Arc::new(validate_frame_with_labels(n, &rows, labels)?);
    let inclusion = FrameHom::new(
        frame.clone(),
        ambient.clone(),
        elems.iter().map(|&e| e as u16).collect(),
    )?;
    Ok(Subframe {
        frame,
        inclusion,
        index_of,
    })
}

/// Close `seed` under binary meets and joins inside `frame`.
pub fn meet_join_closure(frame: &FiniteFrame, seed: &[usize]) -> Vec<usize> {
    let words = words_for(frame.n());
    let mut in_set = vec![0u64; words];
    let mut work: Vec<usize> = Vec::new();
    for &s in seed {
        if !get_bit(&in_set, s) {
            set_bit(&mut in_set, s);
            work.push(s);
        }
    }
    for x in [frame.bottom(), frame.top()] {
        if !get_bit(&in_set, x) {
            set_bit(&mut in_set, x);
            work.push(x);
        }
    }
    let mut i = 0;
    while i < work.len() {
        let a = work[i];
        i += 1;
        for j in 0..work.len() {
            let b = work[j];
            for v in [frame.meet(a, b), frame.join(a, b)] {
                if !get_bit(&in_set, v) {
                    set_bit(&mut in_set, v);
                    work.push(v);
                }
            }
        }
    }
    let mut out: Vec<usize> = iter_bits(&in_set).collect();
    out.sort_unstable();
    out
}

/// Close `seed` under binary joins inside `frame` (⊥ included).
pub fn join_closure(frame: &FiniteFrame, seed: &[usize]) -> Vec<usize> {
    let words = words_for(frame.n());
    let mut in_set = vec![0u64; words];
    set_bit(&mut in_set, frame.bottom());
    let mut work: Vec<usize> = vec![frame.bottom()];
    for &s in seed {
        if !get_bit(&in_set, s) {
            set_bit(&mut in_set, s);
            work.push(s);
        }
    }
    let mut i = 0;
    while i < work.len() {
        let a = work[i];
        i += 1;
        for j in 0..work.len() {
            let v = frame.join(a, work[j]);
            if !get_bit(&in_set, v) {
                set_bit(&mut in_set, v);
                work.push(v);
            }
        }
    }
    let mut out: Vec<usize> = iter_bits(&in_set).collect();
    out.sort_unstable();
    out
}

/// All frame homs L → 2, i.e. characteristic maps of prime filters, in
/// lexicographic order of their image vectors.
///
/// Prime filters of a finite distributive lattice are exactly the upsets
/// of join-irreducibles; primality is re-verified for each candidate.
pub fn frame_points(frame: &Arc<FiniteFrame>) -> Vec<FrameHom> {
    let two = two();
    let mut points = Vec::new();
    for &j in frame.join_irreducibles() {
        // Candidate filter ↑j; check join-primality.
        let prime = frame.elements().all(|x| {
            frame.elements().all(|y| {
                !frame.leq(j, frame.join(x, y)) || frame.leq(j, x) || frame.leq(j, y)
            })
        });
        debug_assert!(prime, "join-irreducibles are join-prime in distributive lattices");
        if !prime {
            continue;
        }
        let map: Vec<u16> = frame
            .elements()
            .map(|x| u16::from(frame.leq(j, x)))
            .collect();
        points.push(FrameHom::new(frame.clone(), two.clone(), map).expect("prime filter map"));
    }
    points.sort_by(|p, q| p.table().cmp(q.table()));
    points
}
