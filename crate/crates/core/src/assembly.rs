//! The three assembly biframes over a shared main frame of finitary
//! congruences: the plain assembly, the closed-fitted assembly, and the
//! positive-negative assembly. Also the ∇ unit, the functor action on
//! biframe maps, the free-complementation universal property, and the
//! lattice of biquotients.

use crate::biframe::{
    bipseudocomplement, biquotient, finitary_assembly, side_congruence, BiquotientResult, Biframe,
    Side,
};
use crate::bimap::BiframeMap;
use crate::congruence::{
    congruence_closure, enumerate_congruences, AssemblyFrame, Congruence, Seed,
};
use crate::error::{Error, Result};
use crate::lattice::{meet_join_closure, subframe, FrameHom, Subframe};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AssemblyVariant {
    /// Sides generated by {∇e⁺, Δe⁻} and {∇e⁻, Δe⁺}.
    Plain,
    /// Sides are the closed congruences and the finitary fitted ones.
    ClosedFitted,
    /// Sides are the positive and the negative congruences.
    PositiveNegative,
}

impl AssemblyVariant {
    pub fn name(self) -> &'static str {
        match self {
            AssemblyVariant::Plain => "plain",
            AssemblyVariant::ClosedFitted => "cf",
            AssemblyVariant::PositiveNegative => "pm",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(AssemblyVariant::Plain),
            "cf" => Ok(AssemblyVariant::ClosedFitted),
            "pm" => Ok(AssemblyVariant::PositiveNegative),
            other => Err(Error::BadInput(format!("unknown assembly variant: {other}"))),
        }
    }
}

/// An assembly of a biframe. All three variants share the identical main
/// frame; the sides are subframes of it.
pub struct AssemblyResult {
    pub variant: AssemblyVariant,
    pub biframe: Biframe,
    /// The main frame together with its congruence index.
    pub afin: AssemblyFrame,
    pub plus_side: Subframe,
    pub minus_side: Subframe,
    /// Generator maps into the main frame: a ↦ ∇(e⁺a), Δ(e⁺a), ….
    pub nabla_plus: Vec<u16>,
    pub delta_plus: Vec<u16>,
    pub nabla_minus: Vec<u16>,
    pub delta_minus: Vec<u16>,
}

impl AssemblyResult {
    /// The congruence represented by a main-frame element.
    pub fn congruence(&self, index: usize) -> &Congruence {
        &self.afin.congruences[index]
    }
}

pub fn assembly(b: &Biframe, variant: AssemblyVariant, cap: usize) -> Result<AssemblyResult> {
    let afin = finitary_assembly(b, cap)?;
    build_assembly_variant(b, variant, afin)
}

/// Package an already-computed finitary assembly as a variant biframe.
pub fn build_assembly_variant(
    b: &Biframe,
    variant: AssemblyVariant,
    afin: AssemblyFrame,
) -> Result<AssemblyResult> {
    let nabla_plus: Vec<u16> = b
        .plus()
        .elements()
        .map(|a| afin.nabla[b.embed_plus().apply(a)])
        .collect();
    let delta_plus: Vec<u16> = b
        .plus()
        .elements()
        .map(|a| afin.delta[b.embed_plus().apply(a)])
        .collect();
    let nabla_minus: Vec<u16> = b
        .minus()
        .elements()
        .map(|a| afin.nabla[b.embed_minus().apply(a)])
        .collect();
    let delta_minus: Vec<u16> = b
        .minus()
        .elements()
        .map(|a| afin.delta[b.embed_minus().apply(a)])
        .collect();

    let as_usize = |v: &[u16]| v.iter().map(|&x| x as usize).collect::<Vec<_>>();
    let (plus_gens, minus_gens) = match variant {
        AssemblyVariant::Plain => (
            [as_usize(&nabla_plus), as_usize(&delta_minus)].concat(),
            [as_usize(&nabla_minus), as_usize(&delta_plus)].concat(),
        ),
        AssemblyVariant::ClosedFitted => (
            [as_usize(&nabla_plus), as_usize(&nabla_minus)].concat(),
            [as_usize(&delta_plus), as_usize(&delta_minus)].concat(),
        ),
        AssemblyVariant::PositiveNegative => (
            [as_usize(&nabla_plus), as_usize(&delta_plus)].concat(),
            [as_usize(&nabla_minus), as_usize(&delta_minus)].concat(),
        ),
    };
    let plus_side = subframe(&afin.frame, &meet_join_closure(&afin.frame, &plus_gens))?;
    let minus_side = subframe(&afin.frame, &meet_join_closure(&afin.frame, &minus_gens))?;
    let biframe = crate::biframe::validate_biframe(
        plus_side.frame.clone(),
        minus_side.frame.clone(),
        afin.frame.clone(),
        plus_side.inclusion.table().to_vec(),
        minus_side.inclusion.table().to_vec(),
    )?;
    Ok(AssemblyResult {
        variant,
        biframe,
        afin,
        plus_side,
        minus_side,
        nabla_plus,
        delta_plus,
        nabla_minus,
        delta_minus,
    })
}

/// The canonical embedding ∇: B → A(B) for the plain assembly:
/// a⁺ ↦ ∇(e⁺a⁺), a⁻ ↦ ∇(e⁻a⁻), with main map x ↦ ∇(x).
pub fn nabla_unit(b: &Biframe, plain: &AssemblyResult) -> Result<BiframeMap> {
    assert_eq!(plain.variant, AssemblyVariant::Plain);
    let plus = FrameHom::new(
        b.plus().clone(),
        plain.plus_side.frame.clone(),
        plain
            .nabla_plus
            .iter()
            .map(|&i| plain.plus_side.index(i as usize).expect("∇e⁺ lies in the plus side") as u16)
            .collect(),
    )?;
    let minus = FrameHom::new(
        b.minus().clone(),
        plain.minus_side.frame.clone(),
        plain
            .nabla_minus
            .iter()
            .map(|&i| plain.minus_side.index(i as usize).expect("∇e⁻ lies in the minus side") as u16)
            .collect(),
    )?;
    let main = FrameHom::new(b.main().clone(), plain.afin.frame.clone(), plain.afin.nabla.clone())?;
    let unit = BiframeMap::new(b.clone(), plain.biframe.clone(), plus, minus, main)?;
    unit.plus().check_injective()?;
    unit.minus().check_injective()?;
    Ok(unit)
}

/// The canonical block ∇(e⁺a)∩∇(e⁻a′)∩Δ(e⁺y)∩Δ(e⁻y′) as a congruence.
fn block(b: &Biframe, a: usize, a2: usize, y: usize, y2: usize) -> Congruence {
    let m = b.main();
    crate::congruence::nabla(m, b.wedge(a, a2))
        .intersect(&crate::congruence::delta(m, b.vee(y, y2)), m)
}

/// Functor action on a biframe map: the main map sends each congruence
/// to the join of the images of the canonical blocks below it; the side
/// maps are its restrictions. Requires the assemblies of source and
/// target (same variant).
pub fn assembly_map(
    f: &BiframeMap,
    src: &AssemblyResult,
    tgt: &AssemblyResult,
) -> Result<BiframeMap> {
    assert_eq!(src.variant, tgt.variant);
    let sb = f.source();
    let tb = f.target();

    // Source blocks paired with their target images.
    let mut pairs: Vec<(Congruence, Congruence)> = Vec::new();
    for a in sb.plus().elements() {
        for a2 in sb.minus().elements() {
            for y in sb.plus().elements() {
                for y2 in sb.minus().elements() {
                    let blk = block(sb, a, a2, y, y2);
                    let img = block(
                        tb,
                        f.plus().apply(a),
                        f.minus().apply(a2),
                        f.plus().apply(y),
                        f.minus().apply(y2),
                    );
                    if !pairs.iter().any(|(s, t)| *s == blk && *t == img) {
                        pairs.push((blk, img));
                    }
                }
            }
        }
    }

    let mut main_table = vec![0u16; src.afin.frame.n()];
    for (i, c) in src.afin.congruences.iter().enumerate() {
        let mut seeds = Vec::new();
        for (blk, img) in &pairs {
            if blk.refines(c) {
                for class in img.classes() {
                    for &x in &class[1..] {
                        seeds.push(Seed::Equate(class[0], x));
                    }
                }
            }
        }
        let image = congruence_closure(tb.main(), &seeds);
        let idx = tgt
            .afin
            .index_of(&image)
            .ok_or(Error::NotWellDefined { index: i })?;
        main_table[i] = idx as u16;
    }
    let main = FrameHom::new(src.afin.frame.clone(), tgt.afin.frame.clone(), main_table.clone())?;

    let restrict = |side_src: &Subframe, side_tgt: &Subframe, ctx: &str| -> Result<FrameHom> {
        let table: Result<Vec<u16>> = side_src
            .frame
            .elements()
            .map(|s| {
                let ambient = side_src.inclusion.apply(s);
                let image = main_table[ambient] as usize;
                side_tgt
                    .index(image)
                    .map(|i| i as u16)
                    .ok_or(Error::NotWellDefined { index: ambient })
            })
            .collect();
        let table = table.map_err(|e| match e {
            Error::NotWellDefined { index } => Error::NotWellDefined { index },
            other => other,
        })?;
        FrameHom::new(side_src.frame.clone(), side_tgt.frame.clone(), table).map_err(|e| {
            Error::BadInput(format!("restricted {ctx} side map is not a hom: {e}"))
        })
    };
    let plus = restrict(&src.plus_side, &tgt.plus_side, "plus")?;
    let minus = restrict(&src.minus_side, &tgt.minus_side, "minus")?;
    BiframeMap::new(src.biframe.clone(), tgt.biframe.clone(), plus, minus, main)
}

/// Verify the free-complementation universal property of the plain
/// assembly against a map f: B → M whose generator images all have
/// bicomplements: there is exactly one biframe map g with g∘∇ = f.
/// Returns the mediating map.
pub fn universal_property_check(
    f: &BiframeMap,
    plain: &AssemblyResult,
) -> Result<BiframeMap> {
    let b = f.source();
    let m = f.target();
    assert_eq!(plain.variant, AssemblyVariant::Plain);

    // Precondition: bicomplements for every generator image.
    let mut comp_plus = Vec::new();
    for a in b.plus().elements() {
        let (c, is_bi) = bipseudocomplement(m, f.plus().apply(a), Side::Plus);
        if !is_bi {
            return Err(Error::MissingBicomplement {
                element: a,
                side: "plus",
            });
        }
        comp_plus.push(c);
    }
    let mut comp_minus = Vec::new();
    for a in b.minus().elements() {
        let (c, is_bi) = bipseudocomplement(m, f.minus().apply(a), Side::Minus);
        if !is_bi {
            return Err(Error::MissingBicomplement {
                element: a,
                side: "minus",
            });
        }
        comp_minus.push(c);
    }

    // Forced values on generators: ∇-generators follow f, Δ-generators
    // must go to the complements, which are unique in a distributive
    // lattice; verify uniqueness exhaustively.
    let mm = m.main();
    let g_nabla_plus: Vec<usize> = b
        .plus()
        .elements()
        .map(|a| m.embed_plus().apply(f.plus().apply(a)))
        .collect();
    let g_delta_plus: Vec<usize> = comp_plus
        .iter()
        .map(|&c| m.embed_minus().apply(c))
        .collect();
    let g_nabla_minus: Vec<usize> = b
        .minus()
        .elements()
        .map(|a| m.embed_minus().apply(f.minus().apply(a)))
        .collect();
    let g_delta_minus: Vec<usize> = comp_minus
        .iter()
        .map(|&c| m.embed_plus().apply(c))
        .collect();
    for (&x, &c) in g_nabla_plus.iter().zip(&g_delta_plus) {
        let complements: Vec<usize> = mm
            .elements()
            .filter(|&z| mm.meet(x, z) == mm.bottom() && mm.join(x, z) == mm.top())
            .collect();
        if complements.len() > 1 {
            return Err(Error::NonUniqueMediatingMap);
        }
        if complements != [c] {
            return Err(Error::NoMediatingMap {
                reason: format!("no complement available for generator image {x}"),
            });
        }
    }
    for (&x, &c) in g_nabla_minus.iter().zip(&g_delta_minus) {
        let complements: Vec<usize> = mm
            .elements()
            .filter(|&z| mm.meet(x, z) == mm.bottom() && mm.join(x, z) == mm.top())
            .collect();
        if complements.len() > 1 {
            return Err(Error::NonUniqueMediatingMap);
        }
        if complements != [c] {
            return Err(Error::NoMediatingMap {
                reason: format!("no complement available for generator image {x}"),
            });
        }
    }

    // Extend over the canonical form: every congruence is the join of the
    // blocks below it.
    let mut main_table = vec![0u16; plain.afin.frame.n()];
    for (i, cong) in plain.afin.congruences.iter().enumerate() {
        let mut acc = mm.bottom();
        for a in b.plus().elements() {
            for a2 in b.minus().elements() {
                for y in b.plus().elements() {
                    for y2 in b.minus().elements() {
                        if block(b, a, a2, y, y2).refines(cong) {
                            let v = mm.meet(
                                mm.meet(g_nabla_plus[a], g_nabla_minus[a2]),
                                mm.meet(g_delta_plus[y], g_delta_minus[y2]),
                            );
                            acc = mm.join(acc, v);
                        }
                    }
                }
            }
        }
        main_table[i] = acc as u16;
    }
    let main = FrameHom::new(plain.afin.frame.clone(), mm.clone(), main_table.clone()).map_err(
        |e| Error::NoMediatingMap {
            reason: format!("forced extension is not a frame hom: {e}"),
        },
    )?;

    // Side maps land in the sides of M by construction of the generators;
    // build them by preimage through the (injective) embeddings.
    let side_table = |side: &Subframe, embed: &FrameHom| -> Result<Vec<u16>> {
        side.frame
            .elements()
            .map(|s| {
                let img = main_table[side.inclusion.apply(s)] as usize;
                embed
                    .table()
                    .iter()
                    .position(|&v| v as usize == img)
                    .map(|p| p as u16)
                    .ok_or_else(|| Error::NoMediatingMap {
                        reason: format!("side image {img} is not in the target side"),
                    })
            })
            .collect()
    };
    let plus = FrameHom::new(
        plain.plus_side.frame.clone(),
        m.plus().clone(),
        side_table(&plain.plus_side, m.embed_plus())?,
    )
    .map_err(|e| Error::NoMediatingMap {
        reason: format!("plus side of mediating map is not a hom: {e}"),
    })?;
    let minus = FrameHom::new(
        plain.minus_side.frame.clone(),
        m.minus().clone(),
        side_table(&plain.minus_side, m.embed_minus())?,
    )
    .map_err(|e| Error::NoMediatingMap {
        reason: format!("minus side of mediating map is not a hom: {e}"),
    })?;
    let g = BiframeMap::new(plain.biframe.clone(), m.clone(), plus, minus, main)?;

    // g∘∇ must recover f.
    let unit = nabla_unit(b, plain)?;
    let composed = unit.compose(&g)?;
    if composed != *f {
        return Err(Error::NoMediatingMap {
            reason: "forced extension does not factor f through ∇".into(),
        });
    }
    Ok(g)
}

/// The lattice of biquotients S(B): the finitary assembly with the order
/// reversed, each element paired with its biquotient, and the positive /
/// negative sub-collections flagged.
pub struct BiquotientLattice {
    pub afin: AssemblyFrame,
    /// S(B) as a frame: the main assembly frame order-reversed.
    pub frame: std::sync::Arc<crate::lattice::FiniteFrame>,
    pub quotients: Vec<BiquotientResult>,
    pub positive: Vec<bool>,
    pub negative: Vec<bool>,
}

pub fn biquotient_lattice(b: &Biframe, cap: usize, oracle_bound: usize) -> Result<BiquotientLattice> {
    let afin = finitary_assembly(b, cap)?;
    let k = afin.frame.n();
    let rows: Vec<Vec<bool>> = (0..k)
        .map(|i| (0..k).map(|j| afin.frame.leq(j, i)).collect())
        .collect();
    let frame = std::sync::Arc::new(crate::lattice::validate_frame(k, &rows)?);
    let quotients: Result<Vec<BiquotientResult>> = afin
        .congruences
        .iter()
        .map(|c| biquotient(b, c))
        .collect();
    let quotients = quotients?;

    let mut positive = vec![false; k];
    for c_side in enumerate_congruences(b.plus(), oracle_bound)? {
        let induced = side_congruence(b, Side::Plus, &c_side);
        if let Some(i) = afin.index_of(&induced) {
            positive[i] = true;
        }
    }
    let mut negative = vec![false; k];
    for c_side in enumerate_congruences(b.minus(), oracle_bound)? {
        let induced = side_congruence(b, Side::Minus, &c_side);
        if let Some(i) = afin.index_of(&induced) {
            negative[i] = true;
        }
    }
    Ok(BiquotientLattice {
        afin,
        frame,
        quotients,
        positive,
        negative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biframe::fixtures::{boolean_biframe, point_biframe, sierpinski};
    use crate::bimap::quotient_map;
    use crate::congruence::{nabla, DEFAULT_ASSEMBLY_CAP, DEFAULT_ORACLE_BOUND};
    use crate::lattice::{chain, diamond, two};

    #[test]
    fn point_biframe_assemblies_are_two_element() {
        let pt = point_biframe();
        for v in [
            AssemblyVariant::Plain,
            AssemblyVariant::ClosedFitted,
            AssemblyVariant::PositiveNegative,
        ] {
            let a = assembly(&pt, v, DEFAULT_ASSEMBLY_CAP).unwrap();
            assert!(a.biframe.main().isomorphic(&two()).unwrap());
            assert!(a.plus_side.frame.isomorphic(&two()).unwrap());
            assert!(a.minus_side.frame.isomorphic(&two()).unwrap());
        }
    }

    #[test]
    fn sierpinski_assembly_components() {
        let bs = sierpinski();
        let cf = assembly(&bs, AssemblyVariant::ClosedFitted, DEFAULT_ASSEMBLY_CAP).unwrap();
        assert!(cf.biframe.main().isomorphic(&diamond()).unwrap());
        assert!(cf.plus_side.frame.isomorphic(&chain(3)).unwrap());
        assert!(cf.minus_side.frame.isomorphic(&chain(3)).unwrap());

        let plain = assembly(&bs, AssemblyVariant::Plain, DEFAULT_ASSEMBLY_CAP).unwrap();
        let pm = assembly(&bs, AssemblyVariant::PositiveNegative, DEFAULT_ASSEMBLY_CAP).unwrap();
        // Identical main frames, element for element.
        assert_eq!(plain.afin.frame.n(), 4);
        for i in 0..4 {
            assert_eq!(plain.congruence(i), cf.congruence(i));
            assert_eq!(plain.congruence(i), pm.congruence(i));
        }
    }

    #[test]
    fn nabla_unit_is_injective_and_preserves_structure() {
        let bs = sierpinski();
        let plain = assembly(&bs, AssemblyVariant::Plain, DEFAULT_ASSEMBLY_CAP).unwrap();
        let unit = nabla_unit(&bs, &plain).unwrap();
        assert!(unit.main().is_injective());
        assert_eq!(
            unit.main().apply(bs.main().bottom()),
            plain.afin.frame.bottom()
        );
        assert_eq!(unit.main().apply(bs.main().top()), plain.afin.frame.top());
        // Three distinct closed congruences.
        let image = unit.main().image();
        assert_eq!(image.len(), 3);
    }

    #[test]
    fn assembly_map_on_identity_and_collapse() {
        let bs = sierpinski();
        for v in [
            AssemblyVariant::Plain,
            AssemblyVariant::ClosedFitted,
            AssemblyVariant::PositiveNegative,
        ] {
            let asm = assembly(&bs, v, DEFAULT_ASSEMBLY_CAP).unwrap();
            let id = BiframeMap::identity(&bs);
            let am = assembly_map(&id, &asm, &asm).unwrap();
            assert_eq!(am, BiframeMap::identity(&asm.biframe));
        }

        // Collapse along ∇(m): the image of ∇(m) is ∇(f(m)).
        let c = nabla(bs.main(), 1);
        let (f, r) = quotient_map(&bs, &c).unwrap();
        let src = assembly(&bs, AssemblyVariant::ClosedFitted, DEFAULT_ASSEMBLY_CAP).unwrap();
        let tgt = assembly(&r.biframe, AssemblyVariant::ClosedFitted, DEFAULT_ASSEMBLY_CAP).unwrap();
        let am = assembly_map(&f, &src, &tgt).unwrap();
        let nabla_m_src = src.afin.nabla[1] as usize;
        let image = am.main().apply(nabla_m_src);
        let expected = tgt.afin.nabla[f.main().apply(1)] as usize;
        assert_eq!(image, expected);
    }

    #[test]
    fn assembly_map_composition_law() {
        let bs = sierpinski();
        let c = nabla(bs.main(), 1);
        let (f, r) = quotient_map(&bs, &c).unwrap();
        let all = Congruence::all(r.biframe.main());
        let (g, s) = quotient_map(&r.biframe, &all).unwrap();
        let v = AssemblyVariant::PositiveNegative;
        let a0 = assembly(&bs, v, DEFAULT_ASSEMBLY_CAP).unwrap();
        let a1 = assembly(&r.biframe, v, DEFAULT_ASSEMBLY_CAP).unwrap();
        let a2 = assembly(&s.biframe, v, DEFAULT_ASSEMBLY_CAP).unwrap();
        let lhs = assembly_map(&f.compose(&g).unwrap(), &a0, &a2).unwrap();
        let rhs = assembly_map(&f, &a0, &a1)
            .unwrap()
            .compose(&assembly_map(&g, &a1, &a2).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn universal_property_with_unit_is_identity() {
        for b in [point_biframe(), sierpinski(), boolean_biframe()] {
            let plain = assembly(&b, AssemblyVariant::Plain, DEFAULT_ASSEMBLY_CAP).unwrap();
            let unit = nabla_unit(&b, &plain).unwrap();
            let g = universal_property_check(&unit, &plain).unwrap();
            assert_eq!(g, BiframeMap::identity(&plain.biframe));
        }
    }

    #[test]
    fn universal_property_rejects_missing_bicomplements() {
        // The identity on the Sierpiński biframe does not provide a
        // bicomplement for m.
        let bs = sierpinski();
        let plain = assembly(&bs, AssemblyVariant::Plain, DEFAULT_ASSEMBLY_CAP).unwrap();
        let id = BiframeMap::identity(&bs);
        match universal_property_check(&id, &plain) {
            Err(Error::MissingBicomplement { element, side }) => {
                assert_eq!(element, 1);
                assert_eq!(side, "plus");
            }
            other => panic!("expected MissingBicomplement, got {other:?}"),
        }
    }

    #[test]
    fn biquotient_lattice_of_fixtures() {
        let pt = point_biframe();
        let s = biquotient_lattice(&pt, DEFAULT_ASSEMBLY_CAP, DEFAULT_ORACLE_BOUND).unwrap();
        assert_eq!(s.frame.n(), 2);

        let bs = sierpinski();
        let s = biquotient_lattice(&bs, DEFAULT_ASSEMBLY_CAP, DEFAULT_ORACLE_BOUND).unwrap();
        assert!(s.frame.isomorphic(&diamond()).unwrap());
        // The top of S(B) is B itself (the diagonal congruence).
        let top_cong = &s.afin.congruences[s.frame.top()];
        assert!(top_cong.is_diagonal());
        let top_quot = &s.quotients[s.frame.top()];
        assert!(top_quot.biframe.main().isomorphic(bs.main()).unwrap());
        // Order anti-isomorphism with inclusion of congruences.
        for i in 0..s.frame.n() {
            for j in 0..s.frame.n() {
                assert_eq!(
                    s.frame.leq(i, j),
                    crate::biframe::biquotient_leq(&s.afin.congruences[i], &s.afin.congruences[j])
                );
            }
        }
    }
}
