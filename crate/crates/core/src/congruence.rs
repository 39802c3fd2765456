//! Frame congruences as meet/join-compatible partitions: principal
//! congruences, closure-based generation, quotients, the assembly frame,
//! the fitting operator, and a brute-force enumeration oracle.

use crate::error::{Error, Result};
use crate::lattice::{validate_frame, FiniteFrame, FrameHom};
use std::collections::HashMap;
use std::sync::Arc;

/// Default bound for the brute-force partition oracle.
pub const DEFAULT_ORACLE_BOUND: usize = 7;

/// Default cap on congruence-lattice sizes.
pub const DEFAULT_ASSEMBLY_CAP: usize = 64;

/// A congruence stored as a partition with canonical class numbering
/// (classes indexed by first occurrence) and the greatest element of each
/// class.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Congruence {
    class_of: Vec<u16>,
    class_max: Vec<u16>,
}

impl std::fmt::Debug for Congruence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Congruence{:?}", self.classes())
    }
}

impl Congruence {
    /// Canonicalize a raw class-id vector (no validation).
    fn from_raw(raw: &[usize], frame: &FiniteFrame) -> Congruence {
        let n = raw.len();
        let mut renumber: HashMap<usize, u16> = HashMap::new();
        let mut class_of = vec![0u16; n];
        for (x, &r) in raw.iter().enumerate() {
            let next = renumber.len() as u16;
            let id = *renumber.entry(r).or_insert(next);
            class_of[x] = id;
        }
        let k = renumber.len();
        let mut class_max = vec![0u16; k];
        let mut seen = vec![false; k];
        for x in 0..n {
            let c = class_of[x] as usize;
            if !seen[c] {
                seen[c] = true;
                class_max[c] = x as u16;
            } else {
                class_max[c] = frame.join(class_max[c] as usize, x) as u16;
            }
        }
        Congruence { class_of, class_max }
    }

    /// Validate the congruence invariants for an explicit partition:
    /// equivalence, meet/join compatibility, and join-closed classes.
    pub fn validate(frame: &FiniteFrame, classes: &[Vec<usize>]) -> Result<Congruence> {
        let n = frame.n();
        let mut raw = vec![usize::MAX; n];
        for (cid, class) in classes.iter().enumerate() {
            for &x in class {
                if x >= n {
                    return Err(Error::BadInput(format!("class element {x} out of range")));
                }
                if raw[x] != usize::MAX {
                    return Err(Error::NotACongruence {
                        reason: "classes overlap",
                        witness: vec![x],
                    });
                }
                raw[x] = cid;
            }
        }
        if let Some(x) = raw.iter().position(|&c| c == usize::MAX) {
            return Err(Error::NotACongruence {
                reason: "partition does not cover the frame",
                witness: vec![x],
            });
        }
        let c = Congruence::from_raw(&raw, frame);
        c.check_compatible(frame)?;
        Ok(c)
    }

    pub fn check_compatible(&self, frame: &FiniteFrame) -> Result<()> {
        let n = frame.n();
        for a in 0..n {
            for b in a + 1..n {
                if self.class_of[a] != self.class_of[b] {
                    continue;
                }
                for c in 0..n {
                    if self.class_of[frame.meet(a, c)] != self.class_of[frame.meet(b, c)] {
                        return Err(Error::NotACongruence {
                            reason: "meet compatibility fails",
                            witness: vec![a, b, c],
                        });
                    }
                    if self.class_of[frame.join(a, c)] != self.class_of[frame.join(b, c)] {
                        return Err(Error::NotACongruence {
                            reason: "join compatibility fails",
                            witness: vec![a, b, c],
                        });
                    }
                }
            }
        }
        // Join-closed classes: the recorded max must land in its class.
        for (cid, &m) in self.class_max.iter().enumerate() {
            if self.class_of[m as usize] as usize != cid {
                return Err(Error::NotACongruence {
                    reason: "class not closed under join",
                    witness: vec![m as usize],
                });
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_count(&self) -> usize {
        self.class_max.len()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x] as usize
    }

    pub fn class_of_table(&self) -> &[u16] {
        &self.class_of
    }

    /// Greatest element of the class of x.
    pub fn max_of(&self, x: usize) -> usize {
        self.class_max[self.class_of[x] as usize] as usize
    }

    pub fn class_max(&self, class: usize) -> usize {
        self.class_max[class] as usize
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn is_diagonal(&self) -> bool {
        self.class_count() == self.n()
    }

    pub fn is_all(&self) -> bool {
        self.class_count() == 1
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count()];
        for (x, &c) in self.class_of.iter().enumerate() {
            out[c as usize].push(x);
        }
        out
    }

    /// Inclusion of congruences as relations: self ⊆ other iff the
    /// partition of self refines that of other.
    pub fn refines(&self, other: &Congruence) -> bool {
        debug_assert_eq!(self.n(), other.n());
        let mut image = vec![u16::MAX; self.class_count()];
        for x in 0..self.n() {
            let c = self.class_of[x] as usize;
            if image[c] == u16::MAX {
                image[c] = other.class_of[x];
            } else if image[c] != other.class_of[x] {
                return false;
            }
        }
        true
    }

    /// Intersection of congruences as relations (common refinement).
    pub fn intersect(&self, other: &Congruence, frame: &FiniteFrame) -> Congruence {
        let n = self.n();
        let mut raw = vec![0usize; n];
        for x in 0..n {
            raw[x] = self.class_of[x] as usize * other.class_count() + other.class_of[x] as usize;
        }
        Congruence::from_raw(&raw, frame)
    }

    pub fn diagonal(frame: &FiniteFrame) -> Congruence {
        let raw: Vec<usize> = (0..frame.n()).collect();
        Congruence::from_raw(&raw, frame)
    }

    pub fn all(frame: &FiniteFrame) -> Congruence {
        Congruence::from_raw(&vec![0; frame.n()], frame)
    }
}

/// Closed (`∇(a)`: identify x, y when x∨a = y∨a) or open (`Δ(a)`:
/// identify when x∧a = y∧a) principal congruences.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PrincipalKind {
    Closed,
    Open,
}

pub fn principal_congruence(frame: &FiniteFrame, a: usize, kind: PrincipalKind) -> Congruence {
    let raw: Vec<usize> = frame
        .elements()
        .map(|x| match kind {
            PrincipalKind::Closed => frame.join(x, a),
            PrincipalKind::Open => frame.meet(x, a),
        })
        .collect();
    Congruence::from_raw(&raw, frame)
}

pub fn nabla(frame: &FiniteFrame, a: usize) -> Congruence {
    principal_congruence(frame, a, PrincipalKind::Closed)
}

pub fn delta(frame: &FiniteFrame, a: usize) -> Congruence {
    principal_congruence(frame, a, PrincipalKind::Open)
}

/// The least congruence forcing a ≤ b, i.e. ∇(a) ∩ Δ(b).
pub fn leq_block(frame: &FiniteFrame, a: usize, b: usize) -> Congruence {
    nabla(frame, a).intersect(&delta(frame, b), frame)
}

/// Seed modes for [`congruence_closure`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Seed {
    /// Force x = y.
    Equate(usize, usize),
    /// Force x ≤ y (equivalently, equate x with x∧y).
    ForceLeq(usize, usize),
}

/// Smallest congruence containing the seeded pairs: union-find seeded
/// with the pairs, then a fixpoint closing under a~b ⇒ a∧c ~ b∧c and
/// a∨c ~ b∨c. Also serves as the join of congruences (seed with both
/// partitions).
pub fn congruence_closure(frame: &FiniteFrame, seeds: &[Seed]) -> Congruence {
    let n = frame.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut merged: Vec<(usize, usize)> = Vec::new();
    let unite = |parent: &mut Vec<usize>, merged: &mut Vec<(usize, usize)>, a: usize, b: usize| {
        let ra = find(parent, a);
        let rb = find(parent, b);
        if ra != rb {
            parent[ra] = rb;
            merged.push((a, b));
        }
    };
    for seed in seeds {
        match *seed {
            Seed::Equate(x, y) => unite(&mut parent, &mut merged, x, y),
            Seed::ForceLeq(x, y) => unite(&mut parent, &mut merged, x, frame.meet(x, y)),
        }
    }
    // It suffices to apply compatibility to pairs actually merged: any
    // related pair is connected by a chain of merges.
    let mut head = 0;
    while head < merged.len() {
        let (a, b) = merged[head];
        head += 1;
        for c in 0..n {
            unite(&mut parent, &mut merged, frame.meet(a, c), frame.meet(b, c));
            unite(&mut parent, &mut merged, frame.join(a, c), frame.join(b, c));
        }
    }
    let raw: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    let c = Congruence::from_raw(&raw, frame);
    debug_assert!(c.check_compatible(frame).is_ok());
    c
}

/// Join of two congruences in the assembly frame.
pub fn join_congruences(frame: &FiniteFrame, c: &Congruence, d: &Congruence) -> Congruence {
    let mut seeds = Vec::new();
    for classes in [c.classes(), d.classes()] {
        for class in classes {
            for &x in &class[1..] {
                seeds.push(Seed::Equate(class[0], x));
            }
        }
    }
    congruence_closure(frame, &seeds)
}

/// The quotient frame L/C together with the quotient hom. Quotients by
/// the all-congruence are legal degenerate one-element frames.
pub fn quotient_frame(frame: &Arc<FiniteFrame>, c: &Congruence) -> Result<(Arc<FiniteFrame>, FrameHom)> {
    let k = c.class_count();
    let rows: Vec<Vec<bool>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| frame.leq(c.class_max(i), c.class_max(j)))
                .collect()
        })
        .collect();
    let q = Arc::new(validate_frame(k, &rows)?);
    let hom = FrameHom::new(frame.clone(), q.clone(), c.class_of_table().to_vec())?;
    Ok((q, hom))
}

/// Brute-force oracle: every set partition of L that is a congruence,
/// sorted by refinement (finer first).
pub fn enumerate_congruences(frame: &FiniteFrame, bound: usize) -> Result<Vec<Congruence>> {
    let n = frame.n();
    if n > bound {
        return Err(Error::SizeLimitExceeded {
            context: "congruence enumeration oracle",
            needed: n,
            cap: bound,
        });
    }
    let mut out = Vec::new();
    // Restricted growth strings enumerate set partitions canonically.
    let mut rgs = vec![0usize; n];
    loop {
        let c = Congruence::from_raw(&rgs, frame);
        if c.check_compatible(frame).is_ok() {
            out.push(c);
        }
        // Next restricted growth string.
        let mut i = n;
        loop {
            if i == 1 {
                i = 0;
                break;
            }
            i -= 1;
            let max_prefix = rgs[..i].iter().copied().max().unwrap_or(0);
            if i > 0 && rgs[i] <= max_prefix {
                rgs[i] += 1;
                for v in rgs[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
        }
        if i == 0 {
            break;
        }
    }
    out.sort_by(|a, b| {
        b.class_count()
            .cmp(&a.class_count())
            .then_with(|| a.class_of_table().cmp(b.class_of_table()))
    });
    Ok(out)
}

/// The assembly frame A(L): all congruences ordered by inclusion, with
/// the generator embeddings ∇ and Δ. Computed by closing the principal
/// blocks ∇(a)∩Δ(b) under joins; on frames within the oracle bound the
/// brute-force enumeration must agree.
#[derive(Clone, Debug)]
pub struct AssemblyFrame {
    pub frame: Arc<FiniteFrame>,
    pub congruences: Vec<Congruence>,
    /// a ↦ index of ∇(a).
    pub nabla: Vec<u16>,
    /// a ↦ index of Δ(a).
    pub delta: Vec<u16>,
    index: HashMap<Vec<u16>, usize>,
}

impl AssemblyFrame {
    pub fn index_of(&self, c: &Congruence) -> Option<usize> {
        self.index.get(c.class_of_table()).copied()
    }

    pub fn nabla_of(&self, a: usize) -> usize {
        self.nabla[a] as usize
    }

    pub fn delta_of(&self, a: usize) -> usize {
        self.delta[a] as usize
    }
}

pub fn assembly_frame(frame: &Arc<FiniteFrame>, oracle_bound: usize, cap: usize) -> Result<AssemblyFrame> {
    // Generator-closure route.
    let mut congruences: Vec<Congruence> = Vec::new();
    let mut seen: HashMap<Vec<u16>, usize> = HashMap::new();
    let push = |c: Congruence, congruences: &mut Vec<Congruence>, seen: &mut HashMap<Vec<u16>, usize>| -> usize {
        if let Some(&i) = seen.get(c.class_of_table()) {
            return i;
        }
        let i = congruences.len();
        seen.insert(c.class_of_table().to_vec(), i);
        congruences.push(c);
        i
    };
    let mut blocks: Vec<Congruence> = Vec::new();
    for a in frame.elements() {
        for b in frame.elements() {
            let blk = leq_block(frame, a, b);
            if !blocks.contains(&blk) {
                blocks.push(blk);
            }
        }
    }
    let guard = |len: usize| {
        if len >= cap {
            Err(Error::SizeLimitExceeded {
                context: "assembly frame",
                needed: len + 1,
                cap,
            })
        } else {
            Ok(())
        }
    };
    for blk in &blocks {
        if !seen.contains_key(blk.class_of_table()) {
            guard(congruences.len())?;
            push(blk.clone(), &mut congruences, &mut seen);
        }
    }
    let mut head = 0;
    while head < congruences.len() {
        let current = congruences[head].clone();
        head += 1;
        for blk in &blocks {
            let joined = join_congruences(frame, &current, blk);
            if !seen.contains_key(joined.class_of_table()) {
                guard(congruences.len())?;
                push(joined, &mut congruences, &mut seen);
            }
        }
    }

    // Oracle route, where it runs: the two must agree.
    if frame.n() <= oracle_bound {
        let oracle = enumerate_congruences(frame, oracle_bound)?;
        assert_eq!(
            {
                let mut a: Vec<&[u16]> = congruences.iter().map(|c| c.class_of_table()).collect();
                a.sort();
                a
            },
            {
                let mut b: Vec<&[u16]> = oracle.iter().map(|c| c.class_of_table()).collect();
                b.sort();
                b
            },
            "generator closure and brute-force congruence enumeration disagree"
        );
    }

    build_assembly_frame(frame, congruences)
}

/// Order a closed family of congruences by inclusion and package it as a
/// frame. The family must be closed under intersection and join; the
/// resulting lattice operations are verified against the congruence-level
/// ones.
pub(crate) fn build_assembly_frame(
    frame: &Arc<FiniteFrame>,
    mut congruences: Vec<Congruence>,
) -> Result<AssemblyFrame> {
    congruences.sort_by(|a, b| {
        b.class_count()
            .cmp(&a.class_count())
            .then_with(|| a.class_of_table().cmp(b.class_of_table()))
    });
    let index: HashMap<Vec<u16>, usize> = congruences
        .iter()
        .enumerate()
        .map(|(i, c)| (c.class_of_table().to_vec(), i))
        .collect();
    let k = congruences.len();
    let rows: Vec<Vec<bool>> = congruences
        .iter()
        .map(|a| congruences.iter().map(|b| a.refines(b)).collect())
        .collect();
    let labels: Vec<String> = congruences
        .iter()
        .map(|c| {
            let classes: Vec<String> = c
                .classes()
                .iter()
                .map(|class| {
                    let elems: Vec<String> = class.iter().map(|x| frame.label(*x)).collect();
                    format!("{{{}}}", elems.join(" "))
                })
                .collect();
            classes.join("|")
        })
        .collect();
    let aframe = Arc::new(crate::lattice::validate_frame_with_labels(k, &rows, Some(labels))?);
    for i in 0..k {
        for j in i..k {
            let m = congruences[i].intersect(&congruences[j], frame);
            assert_eq!(
                index.get(m.class_of_table()),
                Some(&(aframe.meet(i, j))),
                "congruence family not closed under intersection"
            );
            let jn = join_congruences(frame, &congruences[i], &congruences[j]);
            assert_eq!(
                index.get(jn.class_of_table()),
                Some(&(aframe.join(i, j))),
                "congruence family not closed under join"
            );
        }
    }
    let nabla_map: Vec<u16> = frame
        .elements()
        .map(|a| index[nabla(frame, a).class_of_table()] as u16)
        .collect();
    let delta_map: Vec<u16> = frame
        .elements()
        .map(|a| index[delta(frame, a).class_of_table()] as u16)
        .collect();
    Ok(AssemblyFrame {
        frame: aframe,
        congruences,
        nabla: nabla_map,
        delta: delta_map,
        index,
    })
}

/// The fitting operator: C ↦ ⋁{Δ(x) : Δ(x) ⊆ C}, an interior operator
/// on the assembly.
pub fn fitting(frame: &FiniteFrame, c: &Congruence) -> Congruence {
    let mut seeds = Vec::new();
    for x in frame.elements() {
        let d = delta(frame, x);
        if d.refines(c) {
            for class in d.classes() {
                for &y in &class[1..] {
                    seeds.push(Seed::Equate(class[0], y));
                }
            }
        }
    }
    congruence_closure(frame, &seeds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{chain, diamond, two};

    fn c3() -> Arc<FiniteFrame> {
        Arc::new(chain(3))
    }

    #[test]
    fn principal_congruences_at_bounds_are_diagonal() {
        let f = c3();
        assert!(nabla(&f, f.bottom()).is_diagonal());
        assert!(delta(&f, f.top()).is_diagonal());
        assert!(nabla(&f, f.top()).is_all());
        assert!(delta(&f, f.bottom()).is_all());
    }

    #[test]
    fn principal_congruences_on_c3() {
        let f = c3();
        let m = 1;
        // Evaluate x∨m / x∧m for all x and cross-check against the
        // brute-force oracle.
        let nm = nabla(&f, m);
        assert_eq!(nm.classes(), vec![vec![0, 1], vec![2]]);
        let dm = delta(&f, m);
        assert_eq!(dm.classes(), vec![vec![0], vec![1, 2]]);
        let all = enumerate_congruences(&f, DEFAULT_ORACLE_BOUND).unwrap();
        assert!(all.contains(&nm));
        assert!(all.contains(&dm));
    }

    #[test]
    fn closure_with_empty_seeds_is_diagonal() {
        let f = c3();
        assert!(congruence_closure(&f, &[]).is_diagonal());
    }

    #[test]
    fn closure_matches_brute_force_minimum() {
        let f = c3();
        // Force ⊤ ≤ m.
        let c = congruence_closure(&f, &[Seed::ForceLeq(2, 1)]);
        assert_eq!(c.classes(), vec![vec![0], vec![1, 2]]);
        // Brute-force minimum over all congruences where q(⊤) ≤ q(m),
        // i.e. ⊤ and ⊤∧m = m are identified.
        let oracle = enumerate_congruences(&f, DEFAULT_ORACLE_BOUND)
            .unwrap()
            .into_iter()
            .filter(|cand| cand.related(2, 1))
            .reduce(|acc, cand| if cand.refines(&acc) { cand } else { acc })
            .unwrap();
        assert_eq!(c, oracle);
    }

    #[test]
    fn join_of_complementary_principals_is_all() {
        let f = c3();
        let joined = join_congruences(&f, &nabla(&f, 1), &delta(&f, 1));
        assert!(joined.is_all());
    }

    #[test]
    fn quotients() {
        let f = c3();
        let (q, hom) = quotient_frame(&f, &Congruence::diagonal(&f)).unwrap();
        assert_eq!(q.n(), 3);
        assert!(hom.is_injective() && hom.is_surjective());

        let (q, _) = quotient_frame(&f, &Congruence::all(&f)).unwrap();
        assert!(q.is_degenerate());

        let (q, hom) = quotient_frame(&f, &nabla(&f, 1)).unwrap();
        assert!(q.isomorphic(&two()).unwrap());
        assert!(hom.is_surjective());
    }

    #[test]
    fn quotient_universal_property() {
        // Any hom respecting C factors uniquely through q.
        let f = c3();
        let c = nabla(&f, 1);
        let (q, qh) = quotient_frame(&f, &c).unwrap();
        let point = FrameHom::new(f.clone(), two(), vec![0, 0, 1]).unwrap();
        // point respects C (constant on classes).
        for class in c.classes() {
            for &x in &class {
                assert_eq!(point.apply(x), point.apply(class[0]));
            }
        }
        let factored = FrameHom::new(
            q.clone(),
            two(),
            (0..q.n())
                .map(|cls| point.apply(c.class_max(cls)) as u16)
                .collect(),
        )
        .unwrap();
        assert_eq!(qh.compose(&factored).unwrap(), point);
    }

    #[test]
    fn oracle_counts() {
        assert_eq!(enumerate_congruences(&two(), 7).unwrap().len(), 2);
        let cs = enumerate_congruences(&c3(), 7).unwrap();
        assert_eq!(cs.len(), 4);
        assert!(cs[0].is_diagonal());
        assert!(cs[cs.len() - 1].is_all());
        for c in &cs {
            assert!(c.check_compatible(&c3()).is_ok());
        }
    }

    #[test]
    fn assembly_of_small_frames() {
        let a2 = assembly_frame(&two(), DEFAULT_ORACLE_BOUND, DEFAULT_ASSEMBLY_CAP).unwrap();
        assert!(a2.frame.isomorphic(&two()).unwrap());

        let f = c3();
        let a3 = assembly_frame(&f, DEFAULT_ORACLE_BOUND, DEFAULT_ASSEMBLY_CAP).unwrap();
        assert!(a3.frame.isomorphic(&diamond()).unwrap());
        // ∇ is a frame hom L → A(L).
        let hom = FrameHom::new(f.clone(), a3.frame.clone(), a3.nabla.clone());
        assert!(hom.is_ok());
        assert!(hom.unwrap().is_injective());
    }

    #[test]
    fn fitting_is_an_interior_operator() {
        let f = c3();
        let diag = Congruence::diagonal(&f);
        let all = Congruence::all(&f);
        assert_eq!(fitting(&f, &diag), diag);
        assert_eq!(fitting(&f, &all), all);
        // Δ(m) ⊄ ∇(m), so the only open congruence below ∇(m) is Δ(⊤).
        assert_eq!(fitting(&f, &nabla(&f, 1)), diag);
        let all_congs = enumerate_congruences(&f, 7).unwrap();
        for c in &all_congs {
            let fc = fitting(&f, c);
            assert!(fc.refines(c));
            assert_eq!(fitting(&f, &fc), fc);
            for d in &all_congs {
                if c.refines(d) {
                    assert!(fitting(&f, c).refines(&fitting(&f, d)));
                }
            }
        }
    }
}
