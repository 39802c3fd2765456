//! Free presentations of the assemblies: the main frame of every variant
//! is (a quotient of) the coproduct of the two sides with their filter
//! completions, subject to the relations making e(a) and e(↑a)
//! complementary. Verifying the presentation against the directly built
//! assembly is a whole-construction cross-check.

use crate::assembly::{AssemblyResult, AssemblyVariant};
use crate::biframe::Biframe;
use crate::congruence::{congruence_closure, quotient_frame, Seed};
use crate::coproduct::{coproduct, filter_completion};
use crate::error::{Error, Result};
use crate::lattice::{meet_join_closure, FiniteFrame, FrameHom};
use std::collections::BTreeSet;
use std::sync::Arc;

/// Side cap for presentation checks; the free construction grows fast.
pub const DEFAULT_PRESENTATION_SIDE_CAP: usize = 4;

pub struct PresentationCheck {
    pub holds: bool,
    /// The presented main frame (quotient of the iterated coproduct).
    pub presented_main: Arc<FiniteFrame>,
    /// The witnessing isomorphism onto the assembly main frame, mapping
    /// each generator e(a) to ∇(e a) and each e(↑a) to Δ(e a).
    pub iso: FrameHom,
    /// Failure descriptions, empty when `holds`.
    pub mismatches: Vec<String>,
}

/// Build the presented main frame. The four-fold coproduct
/// L ⊕ F(L⁺) ⊕ F(L⁻) modulo the complementation relations is computed by
/// interleaving the coproduct steps with their quotients, which keeps
/// intermediate frames small; the result is the same frame by the
/// commutation of quotients with coproducts (tested separately against
/// the one-shot construction).
struct PresentedMain {
    frame: Arc<FiniteFrame>,
    /// x ∈ main → presented element for the generator e(x).
    gen_main: Vec<usize>,
    /// a ∈ plus → presented element for the filter generator e(↑a⁺).
    gen_fplus: Vec<usize>,
    /// b ∈ minus → presented element for e(↑a⁻).
    gen_fminus: Vec<usize>,
}

fn build_presented_main(b: &Biframe, coproduct_cap: usize) -> Result<PresentedMain> {
    let (fplus, _) = filter_completion(b.plus())?;
    let (fminus, _) = filter_completion(b.minus())?;

    // Step 1: main ⊕ F(L⁺), modulo complementation of the plus
    // generators against their filter copies.
    let p1 = coproduct(b.main(), &fplus, coproduct_cap)?;
    let mut gen_main: Vec<usize> = b.main().elements().map(|x| p1.inj_left.apply(x)).collect();
    let mut gen_fplus: Vec<usize> = b.plus().elements().map(|a| p1.inj_right.apply(a)).collect();
    let mut seeds = Vec::new();
    for a in b.plus().elements() {
        let e = gen_main[b.embed_plus().apply(a)];
        let f = gen_fplus[a];
        seeds.push(Seed::Equate(p1.frame.meet(e, f), p1.frame.bottom()));
        seeds.push(Seed::Equate(p1.frame.join(e, f), p1.frame.top()));
    }
    let c1 = congruence_closure(&p1.frame, &seeds);
    let (q1, q1h) = quotient_frame(&p1.frame, &c1)?;
    for x in gen_main.iter_mut() {
        *x = q1h.apply(*x);
    }
    for x in gen_fplus.iter_mut() {
        *x = q1h.apply(*x);
    }

    // Step 2: ⊕ F(L⁻), modulo complementation of the minus generators.
    let p2 = coproduct(&q1, &fminus, coproduct_cap)?;
    for x in gen_main.iter_mut() {
        *x = p2.inj_left.apply(*x);
    }
    for x in gen_fplus.iter_mut() {
        *x = p2.inj_left.apply(*x);
    }
    let mut gen_fminus: Vec<usize> = b.minus().elements().map(|a| p2.inj_right.apply(a)).collect();
    let mut seeds = Vec::new();
    for a in b.minus().elements() {
        let e = gen_main[b.embed_minus().apply(a)];
        let f = gen_fminus[a];
        seeds.push(Seed::Equate(p2.frame.meet(e, f), p2.frame.bottom()));
        seeds.push(Seed::Equate(p2.frame.join(e, f), p2.frame.top()));
    }
    let c2 = congruence_closure(&p2.frame, &seeds);
    let (q2, q2h) = quotient_frame(&p2.frame, &c2)?;
    for x in gen_main.iter_mut() {
        *x = q2h.apply(*x);
    }
    for x in gen_fplus.iter_mut() {
        *x = q2h.apply(*x);
    }
    for x in gen_fminus.iter_mut() {
        *x = q2h.apply(*x);
    }

    Ok(PresentedMain {
        frame: q2,
        gen_main,
        gen_fplus,
        gen_fminus,
    })
}

/// Verify that the presented frame is isomorphic to the assembly of the
/// given variant, with the side groupings of that variant.
pub fn presentation_check(
    b: &Biframe,
    asm: &AssemblyResult,
    side_cap: usize,
    coproduct_cap: usize,
) -> Result<PresentationCheck> {
    if b.plus().n() > side_cap || b.minus().n() > side_cap {
        return Err(Error::SizeLimitExceeded {
            context: "presentation check sides",
            needed: b.plus().n().max(b.minus().n()),
            cap: side_cap,
        });
    }
    let pm = build_presented_main(b, coproduct_cap)?;
    let afin = &asm.afin;
    let mut mismatches = Vec::new();

    // The candidate isomorphism is forced on generators.
    let mut table: Vec<Option<u16>> = vec![None; pm.frame.n()];
    let assign = |pres: usize, target: u16, table: &mut Vec<Option<u16>>, mismatches: &mut Vec<String>| {
        match table[pres] {
            None => table[pres] = Some(target),
            Some(prev) if prev != target => mismatches.push(format!(
                "generator images conflict at presented element {pres}: {prev} vs {target}"
            )),
            _ => {}
        }
    };
    for x in b.main().elements() {
        assign(pm.gen_main[x], afin.nabla[x], &mut table, &mut mismatches);
    }
    for a in b.plus().elements() {
        assign(
            pm.gen_fplus[a],
            afin.delta[b.embed_plus().apply(a)],
            &mut table,
            &mut mismatches,
        );
    }
    for a in b.minus().elements() {
        assign(
            pm.gen_fminus[a],
            afin.delta[b.embed_minus().apply(a)],
            &mut table,
            &mut mismatches,
        );
    }

    // Extend to every presented element: each is a join of meets of
    // generators, and the generators generate, so the join of assigned
    // meets below it must hit it exactly. Work with the full generated
    // closure instead: the generator set must generate the presented
    // frame, and the extension is computed by joining images of the
    // meet-closure elements below each target.
    let gens: Vec<usize> = pm
        .gen_main
        .iter()
        .chain(&pm.gen_fplus)
        .chain(&pm.gen_fminus)
        .copied()
        .collect();
    let generated = meet_join_closure(&pm.frame, &gens);
    if generated.len() != pm.frame.n() {
        mismatches.push(format!(
            "generators span {} of {} presented elements",
            generated.len(),
            pm.frame.n()
        ));
    }

    // Meet-closure of generators with their forced images.
    let mut meet_pool: Vec<(usize, usize)> = Vec::new();
    for (pres, img) in table.iter().enumerate().filter_map(|(p, t)| t.map(|t| (p, t))) {
        meet_pool.push((pres, img as usize));
    }
    let mut head = 0;
    while head < meet_pool.len() {
        let (pa, ia) = meet_pool[head];
        head += 1;
        for j in 0..head {
            let (pb, ib) = meet_pool[j];
            let pm_meet = pm.frame.meet(pa, pb);
            let im_meet = afin.frame.meet(ia, ib);
            if !meet_pool.iter().any(|&(p, _)| p == pm_meet) {
                meet_pool.push((pm_meet, im_meet));
            }
        }
    }
    let mut full_table: Vec<Option<u16>> = vec![None; pm.frame.n()];
    for x in pm.frame.elements() {
        let mut acc = afin.frame.bottom();
        for &(p, i) in &meet_pool {
            if pm.frame.leq(p, x) {
                acc = afin.frame.join(acc, i);
            }
        }
        full_table[x] = Some(acc as u16);
    }
    let full_table: Vec<u16> = full_table.into_iter().map(|t| t.unwrap()).collect();

    // The extension must be a bijective frame hom agreeing with the
    // forced generator images.
    for (pres, img) in table.iter().enumerate() {
        if let Some(img) = img {
            if full_table[pres] != *img {
                mismatches.push(format!(
                    "extension disagrees with forced image at {pres}: {} vs {img}",
                    full_table[pres]
                ));
            }
        }
    }
    if pm.frame.n() != afin.frame.n() {
        mismatches.push(format!(
            "presented main has {} elements, assembly has {}",
            pm.frame.n(),
            afin.frame.n()
        ));
    }
    let iso = match FrameHom::new(pm.frame.clone(), afin.frame.clone(), full_table.clone()) {
        Ok(h) => {
            if !h.is_injective() || !h.is_surjective() {
                mismatches.push("extension is not bijective".into());
            }
            h
        }
        Err(e) => {
            mismatches.push(format!("extension is not a frame hom: {e}"));
            FrameHom::identity(pm.frame.clone())
        }
    };

    // Side groupings per variant.
    if mismatches.is_empty() {
        let plus_gens: Vec<usize> = match asm.variant {
            AssemblyVariant::Plain => b
                .plus()
                .elements()
                .map(|a| pm.gen_main[b.embed_plus().apply(a)])
                .chain(b.minus().elements().map(|a| pm.gen_fminus[a]))
                .collect(),
            AssemblyVariant::ClosedFitted => b
                .plus()
                .elements()
                .map(|a| pm.gen_main[b.embed_plus().apply(a)])
                .chain(
                    b.minus()
                        .elements()
                        .map(|a| pm.gen_main[b.embed_minus().apply(a)]),
                )
                .collect(),
            AssemblyVariant::PositiveNegative => b
                .plus()
                .elements()
                .map(|a| pm.gen_main[b.embed_plus().apply(a)])
                .chain(b.plus().elements().map(|a| pm.gen_fplus[a]))
                .collect(),
        };
        let minus_gens: Vec<usize> = match asm.variant {
            AssemblyVariant::Plain => b
                .minus()
                .elements()
                .map(|a| pm.gen_main[b.embed_minus().apply(a)])
                .chain(b.plus().elements().map(|a| pm.gen_fplus[a]))
                .collect(),
            AssemblyVariant::ClosedFitted => b
                .plus()
                .elements()
                .map(|a| pm.gen_fplus[a])
                .chain(b.minus().elements().map(|a| pm.gen_fminus[a]))
                .collect(),
            AssemblyVariant::PositiveNegative => b
                .minus()
                .elements()
                .map(|a| pm.gen_main[b.embed_minus().apply(a)])
                .chain(b.minus().elements().map(|a| pm.gen_fminus[a]))
                .collect(),
        };
        let check_side = |gens: &[usize], side: &crate::lattice::Subframe, name: &str, mismatches: &mut Vec<String>| {
            let span = meet_join_closure(&pm.frame, gens);
            let image: BTreeSet<usize> = span.iter().map(|&x| full_table[x] as usize).collect();
            let expected: BTreeSet<usize> = side
                .frame
                .elements()
                .map(|s| side.inclusion.apply(s))
                .collect();
            if image != expected {
                mismatches.push(format!(
                    "{name} side grouping disagrees: presented spans {image:?}, assembly side is {expected:?}"
                ));
            }
        };
        check_side(&plus_gens, &asm.plus_side, "plus", &mut mismatches);
        check_side(&minus_gens, &asm.minus_side, "minus", &mut mismatches);
    }

    Ok(PresentationCheck {
        holds: mismatches.is_empty(),
        presented_main: pm.frame,
        iso,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::assembly;
    use crate::biframe::fixtures::{boolean_biframe, point_biframe, sierpinski};
    use crate::congruence::DEFAULT_ASSEMBLY_CAP;
    use crate::coproduct::DEFAULT_COPRODUCT_CAP;

    #[test]
    fn point_biframe_presentation_collapses_to_two() {
        let pt = point_biframe();
        for v in [
            AssemblyVariant::Plain,
            AssemblyVariant::ClosedFitted,
            AssemblyVariant::PositiveNegative,
        ] {
            let asm = assembly(&pt, v, DEFAULT_ASSEMBLY_CAP).unwrap();
            let check = presentation_check(&pt, &asm, 4, DEFAULT_COPRODUCT_CAP).unwrap();
            assert!(check.holds, "{:?}", check.mismatches);
            assert_eq!(check.presented_main.n(), 2);
        }
    }

    #[test]
    fn sierpinski_presentation_has_four_elements() {
        let bs = sierpinski();
        for v in [
            AssemblyVariant::Plain,
            AssemblyVariant::ClosedFitted,
            AssemblyVariant::PositiveNegative,
        ] {
            let asm = assembly(&bs, v, DEFAULT_ASSEMBLY_CAP).unwrap();
            let check = presentation_check(&bs, &asm, 4, DEFAULT_COPRODUCT_CAP).unwrap();
            assert!(check.holds, "{v:?}: {:?}", check.mismatches);
            assert_eq!(check.presented_main.n(), 4);
            // The witness maps generators e(a) to ∇(e a), e(↑a) to Δ(e a);
            // already asserted inside, spot-check the plus generator m.
            let m_pres = check.iso.apply(
                // gen_main for m: recompute through the builder.
                {
                    let pm = super::build_presented_main(&bs, DEFAULT_COPRODUCT_CAP).unwrap();
                    pm.gen_main[1]
                },
            );
            assert_eq!(m_pres, asm.afin.nabla[1] as usize);
        }
    }

    #[test]
    fn boolean_biframe_presentation() {
        let bb = boolean_biframe();
        let asm = assembly(&bb, AssemblyVariant::ClosedFitted, DEFAULT_ASSEMBLY_CAP).unwrap();
        let check = presentation_check(&bb, &asm, 4, DEFAULT_COPRODUCT_CAP).unwrap();
        assert!(check.holds, "{:?}", check.mismatches);
    }

    #[test]
    fn interleaved_quotients_match_one_shot_construction() {
        // Build the full four-fold coproduct of the Sierpiński data and
        // quotient once by all relations; the interleaved construction
        // must produce an isomorphic frame.
        let bs = sierpinski();
        let (fplus, _) = filter_completion(bs.plus()).unwrap();
        let (fminus, _) = filter_completion(bs.minus()).unwrap();
        let k1 = coproduct(bs.main(), &fplus, DEFAULT_COPRODUCT_CAP).unwrap();
        let k2 = coproduct(&k1.frame, &fminus, DEFAULT_COPRODUCT_CAP).unwrap();
        let gm: Vec<usize> = bs
            .main()
            .elements()
            .map(|x| k2.inj_left.apply(k1.inj_left.apply(x)))
            .collect();
        let gp: Vec<usize> = bs
            .plus()
            .elements()
            .map(|a| k2.inj_left.apply(k1.inj_right.apply(a)))
            .collect();
        let gn: Vec<usize> = bs.minus().elements().map(|a| k2.inj_right.apply(a)).collect();
        let f = &k2.frame;
        let mut seeds = Vec::new();
        for a in bs.plus().elements() {
            let e = gm[bs.embed_plus().apply(a)];
            seeds.push(Seed::Equate(f.meet(e, gp[a]), f.bottom()));
            seeds.push(Seed::Equate(f.join(e, gp[a]), f.top()));
        }
        for a in bs.minus().elements() {
            let e = gm[bs.embed_minus().apply(a)];
            seeds.push(Seed::Equate(f.meet(e, gn[a]), f.bottom()));
            seeds.push(Seed::Equate(f.join(e, gn[a]), f.top()));
        }
        let c = congruence_closure(f, &seeds);
        let (one_shot, _) = quotient_frame(f, &c).unwrap();
        let interleaved = super::build_presented_main(&bs, DEFAULT_COPRODUCT_CAP).unwrap();
        assert!(one_shot.isomorphic(&interleaved.frame).unwrap());
    }
}
