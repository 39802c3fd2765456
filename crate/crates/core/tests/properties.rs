//! Module invariants over the frame corpus and randomized inputs.

use frm_core::biframe::{finitary_assembly, validate_biframe, Biframe};
use frm_core::bispace::generate_topology;
use frm_core::congruence::{
    congruence_closure, enumerate_congruences, nabla, Congruence, Seed, DEFAULT_ASSEMBLY_CAP,
    DEFAULT_ORACLE_BOUND,
};
use frm_core::coproduct::{coproduct, DEFAULT_COPRODUCT_CAP};
use frm_core::corpus::{enumerate_corpus, CorpusParams};
use frm_core::enumerate::enumerate_frames;
use frm_core::lattice::{frame_points, two, validate_frame, FiniteFrame, FrameHom};
use frm_core::Caps;
use proptest::prelude::*;
use std::sync::Arc;

fn corpus_frames(max: usize) -> Vec<Arc<FiniteFrame>> {
    enumerate_frames(max)
        .unwrap()
        .into_iter()
        .filter(|f| f.n() >= 2)
        .collect()
}

fn small_corpus() -> Vec<Biframe> {
    let params = CorpusParams {
        max_biframes: 16,
        ..CorpusParams::default()
    };
    enumerate_corpus(&params, &Caps::default()).unwrap()
}

#[test]
fn heyting_adjunction_on_all_corpus_frames() {
    for frame in corpus_frames(8) {
        for a in frame.elements() {
            for b in frame.elements() {
                for c in frame.elements() {
                    assert_eq!(
                        frame.leq(frame.meet(a, c), b),
                        frame.leq(c, frame.heyting(a, b)),
                    );
                }
            }
        }
    }
}

#[test]
fn coproduct_injections_and_generation_on_corpus_pairs() {
    let frames = corpus_frames(4);
    for l in &frames {
        for m in &frames {
            let cp = coproduct(l, m, DEFAULT_COPRODUCT_CAP).unwrap();
            assert!(cp.inj_left.is_injective());
            assert!(cp.inj_right.is_injective());
            for x in cp.frame.elements() {
                let mut acc = cp.frame.bottom();
                for a in l.elements() {
                    for b in m.elements() {
                        let w = cp.frame.meet(cp.inj_left.apply(a), cp.inj_right.apply(b));
                        if cp.frame.leq(w, x) {
                            acc = cp.frame.join(acc, w);
                        }
                    }
                }
                assert_eq!(acc, x, "element {x} is not a join of generator meets");
            }
        }
    }
}

#[test]
fn frame_points_match_brute_force_hom_enumeration() {
    // Independent oracle: enumerate all 2^n candidate image vectors and
    // keep the frame homs.
    for frame in corpus_frames(6) {
        let n = frame.n();
        let f2 = two();
        let mut oracle: Vec<Vec<u16>> = Vec::new();
        for mask in 0u32..1 << n {
            let table: Vec<u16> = (0..n).map(|x| (mask >> x & 1) as u16).collect();
            if FrameHom::new(frame.clone(), f2.clone(), table.clone()).is_ok() {
                oracle.push(table);
            }
        }
        oracle.sort();
        let points: Vec<Vec<u16>> = frame_points(&frame)
            .iter()
            .map(|p| p.table().to_vec())
            .collect();
        assert_eq!(points, oracle);
    }
}

#[test]
fn revalidating_a_validated_biframe_succeeds() {
    for b in small_corpus() {
        let again = validate_biframe(
            b.plus().clone(),
            b.minus().clone(),
            b.main().clone(),
            b.embed_plus().table().to_vec(),
            b.embed_minus().table().to_vec(),
        );
        assert!(again.is_ok());
    }
}

#[test]
fn finitary_congruences_regenerate_from_wedge_vee_pairs() {
    // Every finitary congruence is generated by its restriction to pairs
    // of a generator meet and a generator join.
    for b in small_corpus() {
        let afin = finitary_assembly(&b, DEFAULT_ASSEMBLY_CAP).unwrap();
        let mut wedges = Vec::new();
        let mut vees = Vec::new();
        for x in b.plus().elements() {
            for y in b.minus().elements() {
                wedges.push(b.wedge(x, y));
                vees.push(b.vee(x, y));
            }
        }
        for c in &afin.congruences {
            let mut seeds = Vec::new();
            for &w in &wedges {
                for &v in &vees {
                    if c.related(w, v) {
                        seeds.push(Seed::Equate(w, v));
                    }
                }
            }
            let regenerated = congruence_closure(b.main(), &seeds);
            assert_eq!(&regenerated, c);
        }
    }
}

#[test]
fn closed_congruences_are_an_isomorphic_copy_of_the_main_frame() {
    use frm_core::assembly::{assembly, AssemblyVariant};
    for b in small_corpus() {
        let cf = assembly(&b, AssemblyVariant::ClosedFitted, DEFAULT_ASSEMBLY_CAP).unwrap();
        // The closed side is exactly {∇(x) : x ∈ main} and ∇ is an
        // order isomorphism onto it.
        let side: Vec<usize> = cf
            .plus_side
            .frame
            .elements()
            .map(|s| cf.plus_side.inclusion.apply(s))
            .collect();
        let mut image: Vec<usize> = b
            .main()
            .elements()
            .map(|x| cf.afin.nabla[x] as usize)
            .collect();
        image.sort_unstable();
        image.dedup();
        assert_eq!(side, image);
        assert_eq!(image.len(), b.main().n());
        assert!(cf.plus_side.frame.isomorphic(b.main()).unwrap());
    }
}

#[test]
fn phi_maps_are_frame_homs_into_the_powerset() {
    for b in small_corpus() {
        let bb = frm_core::bispace::bpt(&b).unwrap();
        let m = b.main();
        for x in m.elements() {
            for y in m.elements() {
                assert_eq!(
                    bb.phi_main[m.meet(x, y)],
                    bb.phi_main[x] & bb.phi_main[y]
                );
                assert_eq!(
                    bb.phi_main[m.join(x, y)],
                    bb.phi_main[x] | bb.phi_main[y]
                );
            }
        }
        assert_eq!(bb.phi_main[m.bottom()], 0);
        assert_eq!(bb.phi_main[m.top()], bb.bispace.full());
    }
}

#[test]
fn finitary_assembly_is_a_subframe_of_the_full_assembly() {
    use frm_core::congruence::assembly_frame;
    for b in small_corpus() {
        if b.main().n() > DEFAULT_ORACLE_BOUND {
            continue;
        }
        let afin = finitary_assembly(&b, DEFAULT_ASSEMBLY_CAP).unwrap();
        let full = assembly_frame(b.main(), DEFAULT_ORACLE_BOUND, DEFAULT_ASSEMBLY_CAP).unwrap();
        for (i, c) in afin.congruences.iter().enumerate() {
            let fi = full.index_of(c).expect("finitary congruence is a congruence");
            for (j, d) in afin.congruences.iter().enumerate() {
                let fj = full.index_of(d).unwrap();
                // Joins and meets agree with the ambient assembly.
                let join_here = &afin.congruences[afin.frame.join(i, j)];
                let join_there = &full.congruences[full.frame.join(fi, fj)];
                assert_eq!(join_here, join_there);
                let meet_here = &afin.congruences[afin.frame.meet(i, j)];
                let meet_there = &full.congruences[full.frame.meet(fi, fj)];
                assert_eq!(meet_here, meet_there);
            }
        }
    }
}

#[test]
fn assemblies_are_finitary_biframes() {
    use frm_core::assembly::{assembly, AssemblyVariant};
    use frm_core::biframe::is_finitary_biframe;
    for b in small_corpus().into_iter().take(6) {
        for v in [
            AssemblyVariant::Plain,
            AssemblyVariant::ClosedFitted,
            AssemblyVariant::PositiveNegative,
        ] {
            let asm = assembly(&b, v, DEFAULT_ASSEMBLY_CAP).unwrap();
            match is_finitary_biframe(&asm.biframe, DEFAULT_COPRODUCT_CAP) {
                Ok(rep) => assert!(rep.is_finitary),
                // Side coproducts can outgrow the cap; smaller instances
                // must all pass.
                Err(frm_core::error::Error::SizeLimitExceeded { .. }) => continue,
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn finitary_fitting_is_interior_on_corpus() {
    use frm_core::biframe::finitary_fitting;
    for b in small_corpus() {
        let afin = finitary_assembly(&b, DEFAULT_ASSEMBLY_CAP).unwrap();
        for c in &afin.congruences {
            let fc = finitary_fitting(&b, c);
            assert!(fc.refines(c));
            assert_eq!(finitary_fitting(&b, &fc), fc);
            for d in &afin.congruences {
                if c.refines(d) {
                    assert!(finitary_fitting(&b, c).refines(&finitary_fitting(&b, d)));
                }
            }
        }
    }
}

#[test]
fn congruence_oracle_outputs_are_congruences() {
    for frame in corpus_frames(5) {
        for c in enumerate_congruences(&frame, DEFAULT_ORACLE_BOUND).unwrap() {
            assert!(c.check_compatible(&frame).is_ok());
        }
    }
}

proptest! {
    /// Validation is total on arbitrary square boolean matrices and
    /// never reports a frame that violates the order axioms.
    #[test]
    fn validate_frame_is_total(n in 1usize..5, bits in proptest::collection::vec(any::<bool>(), 0..25)) {
        let mut rows = vec![vec![false; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = true;
        }
        let mut k = 0;
        for i in 0..n {
            for j in 0..n {
                if k < bits.len() && bits[k] {
                    rows[i][j] = true;
                }
                k += 1;
            }
        }
        if let Ok(f) = validate_frame(n, &rows) {
            // Spot-check the cached tables against the raw order.
            for a in f.elements() {
                for b in f.elements() {
                    let m = f.meet(a, b);
                    prop_assert!(f.leq(m, a) && f.leq(m, b));
                    let j = f.join(a, b);
                    prop_assert!(f.leq(a, j) && f.leq(b, j));
                }
            }
        }
    }

    /// The canonical form is invariant under relabeling.
    #[test]
    fn canonical_form_is_relabeling_invariant(seed in 0u64..500) {
        let frames = corpus_frames(5);
        let frame = &frames[(seed as usize) % frames.len()];
        let n = frame.n();
        // Derive a permutation from the seed.
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s as usize) % (i + 1));
        }
        let rows: Vec<Vec<bool>> = (0..n)
            .map(|a| (0..n).map(|b| frame.leq(perm[a], perm[b])).collect())
            .collect();
        let relabeled = validate_frame(n, &rows).unwrap();
        prop_assert_eq!(
            frame.canonical_form().unwrap().code,
            relabeled.canonical_form().unwrap().code
        );
    }

    /// Topology generation is idempotent, monotone, and closed.
    #[test]
    fn generate_topology_closure_properties(
        points in 1usize..6,
        subbasis in proptest::collection::vec(0u64..64, 0..5),
    ) {
        let full = (1u64 << points) - 1;
        let sub: Vec<u64> = subbasis.iter().map(|s| s & full).collect();
        let fam = generate_topology(points, &sub);
        prop_assert!(fam.contains(&0) && fam.contains(&full));
        for &s in &sub {
            prop_assert!(fam.contains(&s));
        }
        for &a in &fam {
            for &b in &fam {
                prop_assert!(fam.contains(&(a | b)));
                prop_assert!(fam.contains(&(a & b)));
            }
        }
        prop_assert_eq!(&generate_topology(points, &fam), &fam);
    }

    /// Closure results are congruences containing their seeds, minimal
    /// against the brute-force oracle.
    #[test]
    fn congruence_closure_is_minimal(frame_pick in 0usize..12, raw_seeds in proptest::collection::vec((0usize..5, 0usize..5, any::<bool>()), 1..3)) {
        let frames = corpus_frames(5);
        let frame = &frames[frame_pick % frames.len()];
        let n = frame.n();
        let seeds: Vec<Seed> = raw_seeds
            .iter()
            .map(|&(x, y, eq)| {
                if eq {
                    Seed::Equate(x % n, y % n)
                } else {
                    Seed::ForceLeq(x % n, y % n)
                }
            })
            .collect();
        let fast = congruence_closure(frame, &seeds);
        prop_assert!(fast.check_compatible(frame).is_ok());
        let mut oracle = Congruence::all(frame);
        for cand in enumerate_congruences(frame, DEFAULT_ORACLE_BOUND).unwrap() {
            let contains = seeds.iter().all(|s| match *s {
                Seed::Equate(x, y) => cand.related(x, y),
                Seed::ForceLeq(x, y) => cand.related(x, frame.meet(x, y)),
            });
            if contains {
                oracle = oracle.intersect(&cand, frame);
            }
        }
        prop_assert_eq!(fast, oracle);
    }

    /// ∇ preserves finite meets and joins into the assembly.
    #[test]
    fn nabla_is_a_frame_hom(frame_pick in 0usize..12) {
        let frames = corpus_frames(5);
        let frame = &frames[frame_pick % frames.len()];
        for a in frame.elements() {
            for b in frame.elements() {
                let meet_of_nablas = nabla(frame, a).intersect(&nabla(frame, b), frame);
                prop_assert_eq!(nabla(frame, frame.meet(a, b)), meet_of_nablas);
            }
        }
    }
}
