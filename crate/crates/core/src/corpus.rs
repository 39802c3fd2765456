//! Deterministic corpus enumeration: small biframes built from every
//! pair of corpus frames by quotienting their coproduct by sampled
//! finitary relations, plus the degenerate single-side choices.

use crate::biframe::{validate_biframe, Biframe};
use crate::congruence::{congruence_closure, quotient_frame, Seed};
use crate::coproduct::coproduct;
use crate::enumerate::enumerate_frames;
use crate::error::Result;
use crate::lattice::{two, CanonicalForm, FiniteFrame};
use crate::Caps;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

#[derive(Clone, Copy, Debug)]
pub struct CorpusParams {
    /// Side frames range over the corpus of frames up to this size.
    pub max_side: usize,
    /// Main frames larger than this are discarded.
    pub max_main: usize,
    /// Overall cap on the number of biframes emitted.
    pub max_biframes: usize,
    /// Relations sampled per frame pair.
    pub samples_per_pair: usize,
    pub seed: u64,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams {
            max_side: 4,
            max_main: 8,
            max_biframes: 48,
            samples_per_pair: 24,
            seed: 0xf7a3,
        }
    }
}

/// All corpus biframes, deduplicated up to isomorphism, in a
/// deterministic order for a fixed parameter set.
pub fn enumerate_corpus(params: &CorpusParams, caps: &Caps) -> Result<Vec<Biframe>> {
    let frames: Vec<Arc<FiniteFrame>> = enumerate_frames(params.max_side)?
        .into_iter()
        .filter(|f| f.n() >= 2)
        .collect();
    let f2 = two();
    let mut out: Vec<Biframe> = Vec::new();
    let mut seen: Vec<Fingerprint> = Vec::new();

    let push = |b: Biframe, out: &mut Vec<Biframe>, seen: &mut Vec<Fingerprint>| -> Result<bool> {
        if out.len() >= params.max_biframes {
            return Ok(false);
        }
        let fp = fingerprint(&b)?;
        if !seen.contains(&fp) {
            seen.push(fp);
            out.push(b);
        }
        Ok(true)
    };

    // Degenerate choices: the main frame is one side, the other side is 2.
    for p in &frames {
        let id: Vec<u16> = (0..p.n() as u16).collect();
        let bounds: Vec<u16> = vec![p.bottom() as u16, p.top() as u16];
        let b = validate_biframe(p.clone(), f2.clone(), p.clone(), id.clone(), bounds.clone())?;
        if !push(b, &mut out, &mut seen)? {
            return Ok(out);
        }
        let b = validate_biframe(f2.clone(), p.clone(), p.clone(), bounds, id)?;
        if !push(b, &mut out, &mut seen)? {
            return Ok(out);
        }
    }

    // Every ordered pair: the full coproduct and sampled quotients of it.
    for (pi, p) in frames.iter().enumerate() {
        for (ni, n) in frames.iter().enumerate() {
            let cp = match coproduct(p, n, caps.coproduct) {
                Ok(cp) => cp,
                Err(crate::error::Error::SizeLimitExceeded { .. }) => continue,
                Err(e) => return Err(e),
            };
            let mut candidates: Vec<Vec<Seed>> = vec![vec![]];
            let mut rng = ChaCha8Rng::seed_from_u64(
                params.seed ^ ((pi as u64) << 32) ^ ((ni as u64) << 16),
            );
            for _ in 0..params.samples_per_pair {
                let count = rng.gen_range(1..=3);
                let mut seeds = Vec::new();
                for _ in 0..count {
                    let a = rng.gen_range(0..p.n());
                    let b = rng.gen_range(0..n.n());
                    let c = rng.gen_range(0..p.n());
                    let d = rng.gen_range(0..n.n());
                    let wedge = cp.frame.meet(cp.inj_left.apply(a), cp.inj_right.apply(b));
                    let vee = cp.frame.join(cp.inj_left.apply(c), cp.inj_right.apply(d));
                    seeds.push(Seed::ForceLeq(wedge, vee));
                }
                candidates.push(seeds);
            }
            for seeds in candidates {
                let c = congruence_closure(&cp.frame, &seeds);
                let (main, q) = quotient_frame(&cp.frame, &c)?;
                if main.n() < 2 || main.n() > params.max_main {
                    continue;
                }
                let embed_plus: Vec<u16> = p
                    .elements()
                    .map(|a| q.apply(cp.inj_left.apply(a)) as u16)
                    .collect();
                let embed_minus: Vec<u16> = n
                    .elements()
                    .map(|a| q.apply(cp.inj_right.apply(a)) as u16)
                    .collect();
                // The quotient may collapse side elements; such candidates
                // are not biframes and are skipped.
                let Ok(b) = validate_biframe(p.clone(), n.clone(), main, embed_plus, embed_minus)
                else {
                    continue;
                };
                if !push(b, &mut out, &mut seen)? {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

type Fingerprint = (Vec<u64>, Vec<u64>, Vec<u64>, Vec<u16>, Vec<u16>);

/// Isomorphism-invariant fingerprint of a biframe: canonical forms of the
/// three frames plus the embedding tables minimized over all canonical
/// relabelings.
pub fn fingerprint(b: &Biframe) -> Result<Fingerprint> {
    let cp = b.plus().canonical_form()?;
    let cn = b.minus().canonical_form()?;
    let cm = b.main().canonical_form()?;
    let relabel = |table: &[u16], side: &CanonicalForm, main_perm: &[u16]| -> Vec<u16> {
        side.perms
            .iter()
            .map(|sp| {
                let mut enc = vec![0u16; table.len()];
                for (a, &img) in table.iter().enumerate() {
                    enc[sp[a] as usize] = main_perm[img as usize];
                }
                enc
            })
            .min()
            .expect("canonical form has at least one permutation")
    };
    let (best_plus, best_minus) = cm
        .perms
        .iter()
        .map(|mp| {
            (
                relabel(b.embed_plus().table(), &cp, mp),
                relabel(b.embed_minus().table(), &cn, mp),
            )
        })
        .min()
        .expect("canonical form has at least one permutation");
    Ok((cp.code, cn.code, cm.code, best_plus, best_minus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biframe::fixtures::{point_biframe, sierpinski};
    use crate::biframe::is_finitary_biframe;

    #[test]
    fn corpus_contains_the_fixtures() {
        let params = CorpusParams::default();
        let caps = Caps::default();
        let corpus = enumerate_corpus(&params, &caps).unwrap();
        assert!(!corpus.is_empty());
        let fp_point = fingerprint(&point_biframe()).unwrap();
        let fp_bs = fingerprint(&sierpinski()).unwrap();
        let fps: Vec<Fingerprint> = corpus.iter().map(|b| fingerprint(b).unwrap()).collect();
        assert!(fps.contains(&fp_point));
        assert!(fps.contains(&fp_bs));
        // Isomorphism-free.
        let mut sorted = fps.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), fps.len());
    }

    #[test]
    fn corpus_is_deterministic_and_finitary() {
        let params = CorpusParams {
            max_biframes: 12,
            ..CorpusParams::default()
        };
        let caps = Caps::default();
        let a = enumerate_corpus(&params, &caps).unwrap();
        let b = enumerate_corpus(&params, &caps).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x, y);
        }
        for bf in &a {
            let rep = is_finitary_biframe(bf, caps.coproduct).unwrap();
            assert!(rep.is_finitary);
        }
    }

    #[test]
    fn different_seeds_change_sampling_but_stay_valid() {
        let params = CorpusParams {
            seed: 99,
            max_biframes: 16,
            ..CorpusParams::default()
        };
        let corpus = enumerate_corpus(&params, &Caps::default()).unwrap();
        assert!(!corpus.is_empty());
    }
}
