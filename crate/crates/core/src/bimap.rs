//! Maps of biframes: a pair of side homs together with the compatible
//! main hom.

use crate::biframe::{biquotient, BiquotientResult, Biframe};
use crate::congruence::Congruence;
use crate::error::{Error, Result};
use crate::lattice::FrameHom;

#[derive(Clone, PartialEq, Eq)]
pub struct BiframeMap {
    source: Biframe,
    target: Biframe,
    plus: FrameHom,
    minus: FrameHom,
    main: FrameHom,
}

impl std::fmt::Debug for BiframeMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BiframeMap({:?} → {:?})", self.source, self.target)
    }
}

impl BiframeMap {
    /// Validate the compatibility squares main∘e± = e±∘f±.
    pub fn new(
        source: Biframe,
        target: Biframe,
        plus: FrameHom,
        minus: FrameHom,
        main: FrameHom,
    ) -> Result<BiframeMap> {
        for a in source.plus().elements() {
            if main.apply(source.embed_plus().apply(a))
                != target.embed_plus().apply(plus.apply(a))
            {
                return Err(Error::NotAHom {
                    law: "positive compatibility square",
                    witness: vec![a],
                });
            }
        }
        for a in source.minus().elements() {
            if main.apply(source.embed_minus().apply(a))
                != target.embed_minus().apply(minus.apply(a))
            {
                return Err(Error::NotAHom {
                    law: "negative compatibility square",
                    witness: vec![a],
                });
            }
        }
        Ok(BiframeMap {
            source,
            target,
            plus,
            minus,
            main,
        })
    }

    /// Build from side tables alone; the main hom is derived on joins of
    /// generator meets and validated.
    pub fn from_sides(
        source: Biframe,
        target: Biframe,
        plus_table: Vec<u16>,
        minus_table: Vec<u16>,
    ) -> Result<BiframeMap> {
        let plus = FrameHom::new(source.plus().clone(), target.plus().clone(), plus_table)?;
        let minus = FrameHom::new(source.minus().clone(), target.minus().clone(), minus_table)?;
        let mut main_table = vec![0u16; source.main().n()];
        for (x, slot) in main_table.iter_mut().enumerate() {
            let mut acc = target.main().bottom();
            for a in source.plus().elements() {
                for b in source.minus().elements() {
                    if source.main().leq(source.wedge(a, b), x) {
                        acc = target
                            .main()
                            .join(acc, target.wedge(plus.apply(a), minus.apply(b)));
                    }
                }
            }
            *slot = acc as u16;
        }
        let main = FrameHom::new(source.main().clone(), target.main().clone(), main_table)?;
        BiframeMap::new(source, target, plus, minus, main)
    }

    pub fn identity(b: &Biframe) -> BiframeMap {
        BiframeMap {
            source: b.clone(),
            target: b.clone(),
            plus: FrameHom::identity(b.plus().clone()),
            minus: FrameHom::identity(b.minus().clone()),
            main: FrameHom::identity(b.main().clone()),
        }
    }

    pub fn compose(&self, then: &BiframeMap) -> Result<BiframeMap> {
        if self.target != then.source {
            return Err(Error::BadInput("biframe map composition mismatch".into()));
        }
        Ok(BiframeMap {
            source: self.source.clone(),
            target: then.target.clone(),
            plus: self.plus.compose(&then.plus)?,
            minus: self.minus.compose(&then.minus)?,
            main: self.main.compose(&then.main)?,
        })
    }

    pub fn source(&self) -> &Biframe {
        &self.source
    }

    pub fn target(&self) -> &Biframe {
        &self.target
    }

    pub fn plus(&self) -> &FrameHom {
        &self.plus
    }

    pub fn minus(&self) -> &FrameHom {
        &self.minus
    }

    pub fn main(&self) -> &FrameHom {
        &self.main
    }
}

/// The canonical quotient map B → B/C.
pub fn quotient_map(b: &Biframe, c: &Congruence) -> Result<(BiframeMap, BiquotientResult)> {
    let r = biquotient(b, c)?;
    let map = BiframeMap::new(
        b.clone(),
        r.biframe.clone(),
        r.plus_map.clone(),
        r.minus_map.clone(),
        r.main_map.clone(),
    )?;
    Ok((map, r))
}

/// A bipoint as a map into the one-point biframe (2, 2, 2).
pub fn point_collapse(b: &Biframe, point: &FrameHom) -> Result<BiframeMap> {
    let target = crate::biframe::fixtures::point_biframe();
    let plus = b.embed_plus().compose(point)?;
    let minus = b.embed_minus().compose(point)?;
    BiframeMap::new(b.clone(), target, plus, minus, point.clone())
}

/// The unique map from the one-point biframe into any biframe.
pub fn from_point_biframe(b: &Biframe) -> Result<BiframeMap> {
    let source = crate::biframe::fixtures::point_biframe();
    let plus = FrameHom::new(
        source.plus().clone(),
        b.plus().clone(),
        vec![b.plus().bottom() as u16, b.plus().top() as u16],
    )?;
    let minus = FrameHom::new(
        source.minus().clone(),
        b.minus().clone(),
        vec![b.minus().bottom() as u16, b.minus().top() as u16],
    )?;
    let main = FrameHom::new(
        source.main().clone(),
        b.main().clone(),
        vec![b.main().bottom() as u16, b.main().top() as u16],
    )?;
    BiframeMap::new(source, b.clone(), plus, minus, main)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biframe::fixtures::{point_biframe, sierpinski};
    use crate::congruence::nabla;
    use crate::lattice::frame_points;

    #[test]
    fn identity_and_composition() {
        let bs = sierpinski();
        let id = BiframeMap::identity(&bs);
        assert_eq!(id.compose(&id).unwrap(), id);
    }

    #[test]
    fn quotient_maps_are_biframe_maps() {
        let bs = sierpinski();
        let c = nabla(bs.main(), 1);
        let (map, r) = quotient_map(&bs, &c).unwrap();
        assert!(r.is_biquotient);
        assert!(map.main().is_surjective());
    }

    #[test]
    fn point_collapses() {
        let bs = sierpinski();
        for p in frame_points(bs.main()) {
            let map = point_collapse(&bs, &p).unwrap();
            assert_eq!(map.target(), &point_biframe());
        }
        assert!(from_point_biframe(&bs).is_ok());
    }

    #[test]
    fn from_sides_recovers_collapse() {
        let bs = sierpinski();
        // Collapse m to ⊤ on the plus side.
        let target = point_biframe();
        let map = BiframeMap::from_sides(bs, target, vec![0, 1, 1], vec![0, 1]).unwrap();
        assert_eq!(map.main().table(), &[0, 1, 1]);
    }
}
