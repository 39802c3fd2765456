//! Biframes with validated generation: finitary elements and congruences,
//! finitariness of the biframe itself, biquotients, bipseudocomplements,
//! side-induced congruences, and the finitary assembly frame.

use crate::congruence::{
    build_assembly_frame, congruence_closure, delta, nabla, AssemblyFrame, Congruence, Seed,
};
use crate::coproduct::{coproduct, Coproduct};
use crate::error::{Error, Result};
use crate::lattice::{join_closure, subframe, FiniteFrame, FrameHom};
use std::collections::HashMap;
use std::sync::Arc;

/// A triple of frames (plus, minus, main) with two generating subframe
/// embeddings.
#[derive(Clone, PartialEq, Eq)]
pub struct Biframe {
    plus: Arc<FiniteFrame>,
    minus: Arc<FiniteFrame>,
    main: Arc<FiniteFrame>,
    embed_plus: FrameHom,
    embed_minus: FrameHom,
}

impl std::fmt::Debug for Biframe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Biframe(|plus|={}, |minus|={}, |main|={})",
            self.plus.n(),
            self.minus.n(),
            self.main.n()
        )
    }
}

impl Biframe {
    pub fn plus(&self) -> &Arc<FiniteFrame> {
        &self.plus
    }

    pub fn minus(&self) -> &Arc<FiniteFrame> {
        &self.minus
    }

    pub fn main(&self) -> &Arc<FiniteFrame> {
        &self.main
    }

    pub fn embed_plus(&self) -> &FrameHom {
        &self.embed_plus
    }

    pub fn embed_minus(&self) -> &FrameHom {
        &self.embed_minus
    }

    pub fn is_degenerate(&self) -> bool {
        self.main.is_degenerate()
    }

    /// e⁺(a) ∧ e⁻(b) in the main frame.
    pub fn wedge(&self, a: usize, b: usize) -> usize {
        self.main
            .meet(self.embed_plus.apply(a), self.embed_minus.apply(b))
    }

    /// e⁺(a) ∨ e⁻(b) in the main frame.
    pub fn vee(&self, a: usize, b: usize) -> usize {
        self.main
            .join(self.embed_plus.apply(a), self.embed_minus.apply(b))
    }
}

/// Check the hom laws, injectivity, and generation for a candidate
/// biframe.
pub fn validate_biframe(
    plus: Arc<FiniteFrame>,
    minus: Arc<FiniteFrame>,
    main: Arc<FiniteFrame>,
    embed_plus: Vec<u16>,
    embed_minus: Vec<u16>,
) -> Result<Biframe> {
    let embed_plus = FrameHom::new(plus.clone(), main.clone(), embed_plus)?;
    let embed_minus = FrameHom::new(minus.clone(), main.clone(), embed_minus)?;
    embed_plus.check_injective()?;
    embed_minus.check_injective()?;
    let b = Biframe {
        plus,
        minus,
        main,
        embed_plus,
        embed_minus,
    };
    let fin = fin_elements(&b);
    if fin.len() != b.main.n() {
        let witness = b
            .main
            .elements()
            .find(|x| !fin.contains(x))
            .expect("some element must be missing");
        return Err(Error::GenerationFails { element: witness });
    }
    Ok(b)
}

/// The set of elements of the main frame expressible as finite joins of
/// generator meets e⁺(x) ∧ e⁻(y). For a valid finite biframe this is the
/// whole main frame; validation asserts exactly that.
pub fn fin_elements(b: &Biframe) -> Vec<usize> {
    let mut wedges = Vec::new();
    for a in b.plus.elements() {
        for c in b.minus.elements() {
            wedges.push(b.wedge(a, c));
        }
    }
    join_closure(&b.main, &wedges)
}

/// The finitary part of a congruence: the congruence generated by its
/// restriction to pairs of finitary elements, plus whether that part
/// recovers the whole congruence.
pub fn finitary_analysis(b: &Biframe, c: &Congruence) -> (Congruence, bool) {
    let fin = fin_elements(b);
    let mut seeds = Vec::new();
    for (i, &x) in fin.iter().enumerate() {
        for &y in &fin[i + 1..] {
            if c.related(x, y) {
                seeds.push(Seed::Equate(x, y));
            }
        }
    }
    let part = congruence_closure(&b.main, &seeds);
    let is_finitary = part == *c;
    (part, is_finitary)
}

/// Report from [`is_finitary_biframe`]: the coproduct presentation of the
/// main frame, its kernel congruence, and the generating inequality set.
pub struct FinitarinessReport {
    pub is_finitary: bool,
    /// The coproduct plus ⊕ minus.
    pub coproduct: Coproduct,
    /// The canonical surjection coproduct → main.
    pub surjection: FrameHom,
    /// Kernel congruence of the surjection.
    pub kernel: Congruence,
    /// All pairs (e⁺a∧e⁻b, e⁺c∨e⁻d) of coproduct elements whose images
    /// satisfy ≤ in the main frame. This relation generates the kernel
    /// (verified); it is not claimed minimal.
    pub generators: Vec<(usize, usize)>,
}

/// Present the main frame as a quotient of plus ⊕ minus and decide
/// whether the kernel congruence is finitary.
pub fn is_finitary_biframe(b: &Biframe, coproduct_cap: usize) -> Result<FinitarinessReport> {
    let cp = coproduct(&b.plus, &b.minus, coproduct_cap)?;
    let surjection = cp.induced_hom(&b.embed_plus, &b.embed_minus)?;
    assert!(surjection.is_surjective(), "generation makes the canonical map onto");
    let raw: Vec<usize> = surjection.table().iter().map(|&v| v as usize).collect();
    let kernel = Congruence::validate(
        &cp.frame,
        &group_by_value(&raw),
    )?;

    // Kernel finitariness, relative to the coproduct injections.
    let kb = Biframe {
        plus: b.plus.clone(),
        minus: b.minus.clone(),
        main: cp.frame.clone(),
        embed_plus: cp.inj_left.clone(),
        embed_minus: cp.inj_right.clone(),
    };
    let (_, is_finitary) = finitary_analysis(&kb, &kernel);

    // The inequality relation between generator meets and joins.
    let mut generators = Vec::new();
    let mut seeds = Vec::new();
    for a in b.plus.elements() {
        for bb in b.minus.elements() {
            for c in b.plus.elements() {
                for d in b.minus.elements() {
                    let w = kb.wedge(a, bb);
                    let v = kb.vee(c, d);
                    if b.main.leq(surjection.apply(w), surjection.apply(v)) {
                        generators.push((w, v));
                        seeds.push(Seed::ForceLeq(w, v));
                    }
                }
            }
        }
    }
    generators.sort_unstable();
    generators.dedup();
    let generated = congruence_closure(&cp.frame, &seeds);
    assert_eq!(generated, kernel, "the inequality relation must generate the kernel");

    Ok(FinitarinessReport {
        is_finitary,
        coproduct: cp,
        surjection,
        kernel,
        generators,
    })
}

fn group_by_value(raw: &[usize]) -> Vec<Vec<usize>> {
    let mut map: HashMap<usize, Vec<usize>> = HashMap::new();
    for (x, &v) in raw.iter().enumerate() {
        map.entry(v).or_default().push(x);
    }
    let mut classes: Vec<Vec<usize>> = map.into_values().collect();
    classes.sort();
    classes
}

/// A biframe quotient: the quotient of the main frame with the induced
/// side subframes. `is_biquotient` records whether the inducing
/// congruence is finitary.
pub struct BiquotientResult {
    pub biframe: Biframe,
    pub congruence: Congruence,
    pub is_biquotient: bool,
    /// Quotient hom on main frames.
    pub main_map: FrameHom,
    /// Side quotient homs plus → plus', minus → minus'.
    pub plus_map: FrameHom,
    pub minus_map: FrameHom,
}

pub fn biquotient(b: &Biframe, c: &Congruence) -> Result<BiquotientResult> {
    let (main_q, q) = crate::congruence::quotient_frame(&b.main, c)?;
    let plus_images: Vec<usize> = b
        .plus
        .elements()
        .map(|a| q.apply(b.embed_plus.apply(a)))
        .collect();
    let minus_images: Vec<usize> = b
        .minus
        .elements()
        .map(|a| q.apply(b.embed_minus.apply(a)))
        .collect();
    let plus_sub = subframe(&main_q, &plus_images)?;
    let minus_sub = subframe(&main_q, &minus_images)?;
    let biframe = validate_biframe(
        plus_sub.frame.clone(),
        minus_sub.frame.clone(),
        main_q.clone(),
        plus_sub.inclusion.table().to_vec(),
        minus_sub.inclusion.table().to_vec(),
    )?;
    let plus_map = FrameHom::new(
        b.plus.clone(),
        plus_sub.frame.clone(),
        plus_images.iter().map(|&x| plus_sub.index(x).unwrap() as u16).collect(),
    )?;
    let minus_map = FrameHom::new(
        b.minus.clone(),
        minus_sub.frame.clone(),
        minus_images.iter().map(|&x| minus_sub.index(x).unwrap() as u16).collect(),
    )?;
    let (_, is_biquotient) = finitary_analysis(b, c);
    Ok(BiquotientResult {
        biframe,
        congruence: c.clone(),
        is_biquotient,
        main_map: q,
        plus_map,
        minus_map,
    })
}

/// Ordering of biquotients: B/C ≤ B/D iff D ⊆ C.
pub fn biquotient_leq(c: &Congruence, d: &Congruence) -> bool {
    d.refines(c)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Plus,
    Minus,
}

/// The bipseudocomplement of a generator: the largest opposite-side
/// element meeting it to ⊥, together with whether it is an actual
/// bicomplement (joins to ⊤).
pub fn bipseudocomplement(b: &Biframe, x: usize, side: Side) -> (usize, bool) {
    match side {
        Side::Plus => {
            let compl = b
                .minus
                .elements()
                .filter(|&y| b.wedge(x, y) == b.main.bottom())
                .fold(b.minus.bottom(), |acc, y| b.minus.join(acc, y));
            let is_bi = b.vee(x, compl) == b.main.top();
            (compl, is_bi)
        }
        Side::Minus => {
            let compl = b
                .plus
                .elements()
                .filter(|&y| b.wedge(y, x) == b.main.bottom())
                .fold(b.plus.bottom(), |acc, y| b.plus.join(acc, y));
            let is_bi = b.vee(compl, x) == b.main.top();
            (compl, is_bi)
        }
    }
}

/// The congruence on the main frame induced by a congruence on one side:
/// the join of the blocks forcing e(a) ≤ e(b) for every pair with
/// [a] ≤ [b] in the side quotient.
pub fn side_congruence(b: &Biframe, side: Side, c_side: &Congruence) -> Congruence {
    let (frame, embed): (&Arc<FiniteFrame>, &FrameHom) = match side {
        Side::Plus => (&b.plus, &b.embed_plus),
        Side::Minus => (&b.minus, &b.embed_minus),
    };
    let mut seeds = Vec::new();
    for a in frame.elements() {
        for bb in frame.elements() {
            if frame.leq(c_side.max_of(a), c_side.max_of(bb)) {
                seeds.push(Seed::ForceLeq(embed.apply(a), embed.apply(bb)));
            }
        }
    }
    congruence_closure(&b.main, &seeds)
}

/// The finitary assembly: the frame of finitary congruences on the main
/// frame, computed as the join closure of the canonical blocks
/// ∇(e⁺a)∩∇(e⁻a′)∩Δ(e⁺b)∩Δ(e⁻b′), cross-checked against the subframe
/// generated by {∇(e⁺x), Δ(e⁻x), ∇(e⁻x), Δ(e⁺x)}.
pub fn finitary_assembly(b: &Biframe, cap: usize) -> Result<AssemblyFrame> {
    let main = &b.main;

    // Route 1: join closure of the canonical four-fold blocks.
    let mut blocks: Vec<Congruence> = Vec::new();
    for a in b.plus.elements() {
        let na = nabla(main, b.embed_plus.apply(a));
        for a2 in b.minus.elements() {
            let na2 = na.intersect(&nabla(main, b.embed_minus.apply(a2)), main);
            for y in b.plus.elements() {
                let dy = na2.intersect(&delta(main, b.embed_plus.apply(y)), main);
                for y2 in b.minus.elements() {
                    let blk = dy.intersect(&delta(main, b.embed_minus.apply(y2)), main);
                    if !blocks.contains(&blk) {
                        blocks.push(blk);
                    }
                }
            }
        }
    }
    let route1 = join_close_congruences(main, &blocks, cap)?;

    // Route 2: subframe generated by the principal generator images.
    let mut gens: Vec<Congruence> = Vec::new();
    for a in b.plus.elements() {
        gens.push(nabla(main, b.embed_plus.apply(a)));
        gens.push(delta(main, b.embed_plus.apply(a)));
    }
    for a in b.minus.elements() {
        gens.push(nabla(main, b.embed_minus.apply(a)));
        gens.push(delta(main, b.embed_minus.apply(a)));
    }
    gens.dedup();
    let route2 = meet_join_close_congruences(main, &gens, cap)?;

    let set1: std::collections::BTreeSet<&[u16]> =
        route1.iter().map(|c| c.class_of_table()).collect();
    let set2: std::collections::BTreeSet<&[u16]> =
        route2.iter().map(|c| c.class_of_table()).collect();
    assert_eq!(set1, set2, "the two descriptions of the finitary assembly must coincide");

    build_assembly_frame(main, route1)
}

/// Join-closure of a congruence family (⊥ = diagonal included).
pub fn join_close_congruences(
    frame: &Arc<FiniteFrame>,
    seeds: &[Congruence],
    cap: usize,
) -> Result<Vec<Congruence>> {
    let mut out: Vec<Congruence> = vec![Congruence::diagonal(frame)];
    let mut seen: std::collections::HashSet<Vec<u16>> =
        out.iter().map(|c| c.class_of_table().to_vec()).collect();
    let guard = |len: usize| {
        if len >= cap {
            Err(Error::SizeLimitExceeded {
                context: "finitary assembly",
                needed: len + 1,
                cap,
            })
        } else {
            Ok(())
        }
    };
    for s in seeds {
        if !seen.contains(s.class_of_table()) {
            guard(out.len())?;
            seen.insert(s.class_of_table().to_vec());
            out.push(s.clone());
        }
    }
    let mut head = 0;
    while head < out.len() {
        let cur = out[head].clone();
        head += 1;
        for s in seeds {
            let j = crate::congruence::join_congruences(frame, &cur, s);
            if !seen.contains(j.class_of_table()) {
                guard(out.len())?;
                seen.insert(j.class_of_table().to_vec());
                out.push(j);
            }
        }
    }
    Ok(out)
}

/// Meet-and-join closure of a congruence family (subframe closure in the
/// congruence lattice; diagonal and all included).
pub fn meet_join_close_congruences(
    frame: &Arc<FiniteFrame>,
    seeds: &[Congruence],
    cap: usize,
) -> Result<Vec<Congruence>> {
    let mut out: Vec<Congruence> = vec![Congruence::diagonal(frame), Congruence::all(frame)];
    out.dedup();
    let mut seen: std::collections::HashSet<Vec<u16>> =
        out.iter().map(|c| c.class_of_table().to_vec()).collect();
    let guard = |len: usize| {
        if len >= cap {
            Err(Error::SizeLimitExceeded {
                context: "finitary assembly (subframe route)",
                needed: len + 1,
                cap,
            })
        } else {
            Ok(())
        }
    };
    for s in seeds {
        if !seen.contains(s.class_of_table()) {
            guard(out.len())?;
            seen.insert(s.class_of_table().to_vec());
            out.push(s.clone());
        }
    }
    let mut head = 0;
    while head < out.len() {
        let cur = out[head].clone();
        head += 1;
        for j in 0..head {
            let other = out[j].clone();
            for c in [
                crate::congruence::join_congruences(frame, &cur, &other),
                cur.intersect(&other, frame),
            ] {
                if !seen.contains(c.class_of_table()) {
                    guard(out.len())?;
                    seen.insert(c.class_of_table().to_vec());
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}

/// The finitary fitting of a congruence: the join of the open congruences
/// Δ(e⁺x ∨ e⁻x′) below it. An interior operator on the finitary assembly.
pub fn finitary_fitting(b: &Biframe, c: &Congruence) -> Congruence {
    let mut seeds = Vec::new();
    for x in b.plus.elements() {
        for y in b.minus.elements() {
            let d = delta(&b.main, b.vee(x, y));
            if d.refines(c) {
                for class in d.classes() {
                    for &m in &class[1..] {
                        seeds.push(Seed::Equate(class[0], m));
                    }
                }
            }
        }
    }
    congruence_closure(&b.main, &seeds)
}

/// The family of finitary fitted congruences: joins of Δ(e⁺x ∨ e⁻x′).
pub fn finitary_fitted_family(b: &Biframe, cap: usize) -> Result<Vec<Congruence>> {
    let mut gens = Vec::new();
    for x in b.plus.elements() {
        for y in b.minus.elements() {
            gens.push(delta(&b.main, b.vee(x, y)));
        }
    }
    gens.dedup();
    join_close_congruences(&b.main, &gens, cap)
}

/// Fixtures used across the suites.
pub mod fixtures {
    use super::*;
    use crate::lattice::{chain, diamond, two};

    /// The one-point biframe (2, 2, 2).
    pub fn point_biframe() -> Biframe {
        let f2 = two();
        validate_biframe(f2.clone(), f2.clone(), f2, vec![0, 1], vec![0, 1]).unwrap()
    }

    /// The Sierpiński biframe (C3, 2, C3) with e⁺ the identity.
    pub fn sierpinski() -> Biframe {
        let c3 = Arc::new(chain(3));
        let f2 = two();
        validate_biframe(c3.clone(), f2, c3, vec![0, 1, 2], vec![0, 2]).unwrap()
    }

    /// The Boolean biframe (C3, C3, 2×2) whose generators are mutually
    /// complementary atoms.
    pub fn boolean_biframe() -> Biframe {
        let c3 = Arc::new(chain(3));
        let d4 = Arc::new(diamond());
        validate_biframe(c3.clone(), c3, d4, vec![0, 1, 3], vec![0, 2, 3]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::congruence::{enumerate_congruences, DEFAULT_ORACLE_BOUND};
    use crate::coproduct::DEFAULT_COPRODUCT_CAP;
    use crate::lattice::{chain, two};

    #[test]
    fn fixtures_validate() {
        let bs = sierpinski();
        assert_eq!(bs.main().n(), 3);
        point_biframe();
        boolean_biframe();
    }

    #[test]
    fn generation_failure_is_witnessed() {
        // (2, 2, C3) with both embeddings hitting only ⊥ and ⊤ cannot
        // generate the middle element.
        let c3 = Arc::new(chain(3));
        let f2 = two();
        match validate_biframe(f2.clone(), f2.clone(), c3, vec![0, 2], vec![0, 2]) {
            Err(Error::GenerationFails { element }) => assert_eq!(element, 1),
            other => panic!("expected GenerationFails, got {other:?}"),
        }
    }

    #[test]
    fn fin_elements_cover_the_main_frame() {
        for b in [sierpinski(), point_biframe(), boolean_biframe()] {
            assert_eq!(fin_elements(&b).len(), b.main().n());
        }
        // In the Sierpiński biframe, m = e⁺(m) ∧ e⁻(⊤).
        let bs = sierpinski();
        assert_eq!(bs.wedge(1, 1), 1);
    }

    #[test]
    fn finitary_analysis_on_fixtures() {
        let bs = sierpinski();
        let diagonal = Congruence::diagonal(bs.main());
        let (part, fin) = finitary_analysis(&bs, &diagonal);
        assert!(fin && part.is_diagonal());

        let (_, fin) = finitary_analysis(&bs, &nabla(bs.main(), 1));
        assert!(fin);
    }

    #[test]
    fn finitariness_of_fixtures() {
        let rep = is_finitary_biframe(&point_biframe(), DEFAULT_COPRODUCT_CAP).unwrap();
        assert!(rep.is_finitary);
        assert!(rep.kernel.is_diagonal());

        // C3 ⊕ 2 ≅ C3, so the kernel of the Sierpiński surjection is
        // the diagonal as well.
        let rep = is_finitary_biframe(&sierpinski(), DEFAULT_COPRODUCT_CAP).unwrap();
        assert!(rep.is_finitary);
        assert!(rep.kernel.is_diagonal());

        let rep = is_finitary_biframe(&boolean_biframe(), DEFAULT_COPRODUCT_CAP).unwrap();
        assert!(rep.is_finitary);
        assert!(!rep.generators.is_empty());
    }

    #[test]
    fn biquotients_of_sierpinski() {
        let bs = sierpinski();
        let diag = Congruence::diagonal(bs.main());
        let r = biquotient(&bs, &diag).unwrap();
        assert!(r.is_biquotient);
        assert!(r.biframe.main().isomorphic(bs.main()).unwrap());
        assert!(r.biframe.plus().isomorphic(bs.plus()).unwrap());

        let r = biquotient(&bs, &nabla(bs.main(), 1)).unwrap();
        assert!(r.is_biquotient);
        assert_eq!(r.biframe.main().n(), 2);
        assert_eq!(r.biframe.plus().n(), 2);
        assert_eq!(r.biframe.minus().n(), 2);

        let r = biquotient(&bs, &Congruence::all(bs.main())).unwrap();
        assert!(r.biframe.is_degenerate());
    }

    #[test]
    fn bipseudocomplements_on_sierpinski() {
        let bs = sierpinski();
        // ∼⊥⁺ = ⊤⁻ and it is a bicomplement.
        assert_eq!(bipseudocomplement(&bs, 0, Side::Plus), (1, true));
        // ∼⊤⁺ = ⊥⁻.
        assert_eq!(bipseudocomplement(&bs, 2, Side::Plus), (0, true));
        // ∼m = ⊥⁻ and m has no bicomplement.
        assert_eq!(bipseudocomplement(&bs, 1, Side::Plus), (0, false));
    }

    #[test]
    fn side_congruences_on_sierpinski() {
        let bs = sierpinski();
        let diag_side = Congruence::diagonal(bs.plus());
        assert!(side_congruence(&bs, Side::Plus, &diag_side).is_diagonal());

        let all_side = Congruence::all(bs.plus());
        let c = side_congruence(&bs, Side::Plus, &all_side);
        // Forcing e⁺(⊤) ≤ e⁺(⊥) collapses everything.
        let forced = congruence_closure(bs.main(), &[Seed::ForceLeq(2, 0)]);
        assert_eq!(c, forced);
        assert!(c.is_all());
    }

    #[test]
    fn finitary_assembly_of_fixtures() {
        let pt = point_biframe();
        let a = finitary_assembly(&pt, 64).unwrap();
        assert!(a.frame.isomorphic(&two()).unwrap());

        let bs = sierpinski();
        let a = finitary_assembly(&bs, 64).unwrap();
        assert_eq!(a.frame.n(), 4);
        assert!(a.frame.isomorphic(&crate::lattice::diamond()).unwrap());
        // Same congruences as the full assembly at this size.
        let full = crate::congruence::assembly_frame(bs.main(), DEFAULT_ORACLE_BOUND, 64).unwrap();
        assert_eq!(a.congruences.len(), full.congruences.len());
    }

    #[test]
    fn finitary_fitting_is_interior() {
        let bs = sierpinski();
        let a = finitary_assembly(&bs, 64).unwrap();
        for c in &a.congruences {
            let fc = finitary_fitting(&bs, c);
            assert!(fc.refines(c));
            assert_eq!(finitary_fitting(&bs, &fc), fc);
            for d in &a.congruences {
                if c.refines(d) {
                    assert!(finitary_fitting(&bs, c).refines(&finitary_fitting(&bs, d)));
                }
            }
        }
    }

    #[test]
    fn enumerated_congruences_on_fixture_mains_are_finitary() {
        let bs = sierpinski();
        for c in enumerate_congruences(bs.main(), DEFAULT_ORACLE_BOUND).unwrap() {
            let (_, fin) = finitary_analysis(&bs, &c);
            assert!(fin);
        }
    }
}
