//! Theorem-verification suites over the enumerated corpus, with
//! deterministic, replayable reports.

use crate::assembly::{
    assembly, assembly_map, biquotient_lattice, nabla_unit, universal_property_check,
    AssemblyVariant,
};
use crate::biframe::{
    biquotient, finitary_analysis, finitary_fitted_family, is_finitary_biframe, side_congruence,
    Biframe, Side,
};
use crate::bimap::{point_collapse, quotient_map, BiframeMap};
use crate::bispace::{
    bisober_family, bpt, quotient_spectrum, skula_variant, spectra_facts, spectrum_bijection,
    verify_quotient_spectrum, SkulaVariant,
};
use crate::congruence::{
    congruence_closure, delta, enumerate_congruences, join_congruences, nabla, quotient_frame,
    Congruence, Seed,
};
use crate::corpus::{enumerate_corpus, CorpusParams};
use crate::enumerate::enumerate_frames;
use crate::error::{Error, Result};
use crate::io::{biframe_to_doc, frame_to_doc};
use crate::lattice::{frame_points, FiniteFrame};
use crate::presentation::presentation_check;
use crate::Caps;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

pub const SUITES: &[&str] = &[
    "congruence_oracle",
    "quotient_lemmas",
    "spectra_facts",
    "skula_patch",
    "bisober",
    "assembly_presentations",
    "bijections",
    "naturality",
    "subfit",
    "fit",
    "t1",
    "universal_property",
];

#[derive(Clone, Debug)]
#[derive(Default)]
pub struct SuiteParams {
    /// Frame-size bound for the frame-level suites (suite-specific
    /// defaults apply when absent).
    pub max_frame: Option<usize>,
    pub corpus: CorpusParams,
    pub caps: Caps,
    pub jobs: Option<usize>,
}


#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub item: String,
    pub property: String,
    pub witness: String,
    /// Full input document; a failure replays standalone.
    pub replay: serde_json::Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Skip {
    pub item: String,
    pub reason: String,
}

/// Deterministic suite outcome. Wall time is reported by the CLI
/// separately so the serialized report is byte-identical across runs
/// with the same parameters and seed.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub max_frame: usize,
    pub max_biframes: usize,
    pub seed: u64,
    pub items: usize,
    pub checks: usize,
    /// Check counts per property, for coverage assertions.
    pub properties: std::collections::BTreeMap<String, usize>,
    pub failures: Vec<Failure>,
    pub skipped: Vec<Skip>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Default)]
struct Outcome {
    checks: usize,
    properties: std::collections::BTreeMap<String, usize>,
    failures: Vec<Failure>,
    skips: Vec<Skip>,
}

impl Outcome {
    fn check(&mut self, ok: bool, item: &str, property: &str, witness: impl FnOnce() -> String, replay: &serde_json::Value) {
        self.checks += 1;
        *self.properties.entry(property.to_string()).or_insert(0) += 1;
        if !ok {
            self.failures.push(Failure {
                item: item.to_string(),
                property: property.to_string(),
                witness: witness(),
                replay: replay.clone(),
            });
        }
    }

    fn skip(&mut self, item: &str, reason: String) {
        self.skips.push(Skip {
            item: item.to_string(),
            reason,
        });
    }
}

pub fn run_suite(name: &str, params: &SuiteParams) -> Result<SuiteReport> {
    if !SUITES.contains(&name) {
        return Err(Error::UnknownSuite(name.to_string()));
    }
    let run = || match name {
        "congruence_oracle" => congruence_oracle_suite(params),
        "quotient_lemmas" => quotient_lemmas_suite(params),
        "spectra_facts" => spectra_facts_suite(params),
        "skula_patch" => skula_patch_suite(params),
        "bisober" => bisober_suite(params),
        "assembly_presentations" => presentations_suite(params),
        "bijections" => bijections_suite(params),
        "naturality" => naturality_suite(params),
        "subfit" => axiom_suite(params, "subfit"),
        "fit" => axiom_suite(params, "fit"),
        "t1" => axiom_suite(params, "t1"),
        "universal_property" => universal_property_suite(params),
        _ => unreachable!(),
    };
    match params.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::BadInput(format!("worker pool: {e}")))?
            .install(run),
        None => run(),
    }
}

fn report(name: &str, params: &SuiteParams, max_frame: usize, items: usize, outcomes: Vec<Outcome>) -> SuiteReport {
    let mut checks = 0;
    let mut properties = std::collections::BTreeMap::new();
    let mut failures = Vec::new();
    let mut skipped = Vec::new();
    for o in outcomes {
        checks += o.checks;
        for (k, v) in o.properties {
            *properties.entry(k).or_insert(0) += v;
        }
        failures.extend(o.failures);
        skipped.extend(o.skips);
    }
    SuiteReport {
        suite: name.to_string(),
        max_frame,
        max_biframes: params.corpus.max_biframes,
        seed: params.corpus.seed,
        items,
        checks,
        properties,
        failures,
        skipped,
    }
}

fn frame_corpus(max_frame: usize) -> Result<Vec<Arc<FiniteFrame>>> {
    Ok(enumerate_frames(max_frame)?
        .into_iter()
        .filter(|f| f.n() >= 2)
        .collect())
}

/// The least congruence containing the seeds, by brute force: the
/// intersection of all congruences containing them.
fn oracle_least_congruence(frame: &FiniteFrame, seeds: &[Seed], bound: usize) -> Result<Congruence> {
    let all = enumerate_congruences(frame, bound)?;
    let mut acc = Congruence::all(frame);
    for cand in &all {
        let contains = seeds.iter().all(|s| match *s {
            Seed::Equate(x, y) => cand.related(x, y),
            Seed::ForceLeq(x, y) => cand.related(x, frame.meet(x, y)),
        });
        if contains {
            acc = acc.intersect(cand, frame);
        }
    }
    Ok(acc)
}

fn congruence_oracle_suite(params: &SuiteParams) -> Result<SuiteReport> {
    let max_frame = params.max_frame.unwrap_or(6);
    let frames = frame_corpus(max_frame)?;
    let law_frames = frame_corpus(params.caps.frame.max(max_frame))?;
    let oracle_bound = params.caps.oracle.max(max_frame);

    // Closure versus brute-force least congruence, every seed set of at
    // most two seeded pairs in both modes.
    let mut outcomes: Vec<Outcome> = frames
        .par_iter()
        .enumerate()
        .map(|(fi, frame)| {
            let mut o = Outcome::default();
            let item = format!("frame[{fi}] (n={})", frame.n());
            let replay = serde_json::to_value(frame_to_doc(frame)).unwrap();
            let n = frame.n();
            let mut singles: Vec<Seed> = Vec::new();
            for x in 0..n {
                for y in 0..n {
                    singles.push(Seed::Equate(x, y));
                    singles.push(Seed::ForceLeq(x, y));
                }
            }
            let mut seed_sets: Vec<Vec<Seed>> = vec![vec![]];
            for s in &singles {
                seed_sets.push(vec![*s]);
            }
            for (i, a) in singles.iter().enumerate() {
                for b in &singles[i..] {
                    seed_sets.push(vec![*a, *b]);
                }
            }
            for seeds in &seed_sets {
                let fast = congruence_closure(frame, seeds);
                let slow = oracle_least_congruence(frame, seeds, oracle_bound).unwrap();
                o.check(
                    fast == slow,
                    &item,
                    "closure equals brute-force least congruence",
                    || format!("seeds {seeds:?}"),
                    &replay,
                );
            }
            o
        })
        .collect();

    // Principal-congruence laws, exhaustive on the larger frame corpus.
    let law_outcomes: Vec<Outcome> = law_frames
        .par_iter()
        .enumerate()
        .map(|(fi, frame)| {
            let mut o = Outcome::default();
            let item = format!("frame[{fi}] (n={})", frame.n());
            let replay = serde_json::to_value(frame_to_doc(frame)).unwrap();
            let diag = Congruence::diagonal(frame);
            let all = Congruence::all(frame);
            for a in frame.elements() {
                let na = nabla(frame, a);
                let da = delta(frame, a);
                o.check(
                    na.intersect(&da, frame) == diag,
                    &item,
                    "∇(a) ∧ Δ(a) is the diagonal",
                    || format!("a={a}"),
                    &replay,
                );
                o.check(
                    join_congruences(frame, &na, &da) == all,
                    &item,
                    "∇(a) ∨ Δ(a) is everything",
                    || format!("a={a}"),
                    &replay,
                );
                for b in frame.elements() {
                    o.check(
                        delta(frame, frame.join(a, b)) == da.intersect(&delta(frame, b), frame),
                        &item,
                        "Δ(a∨b) = Δ(a) ∩ Δ(b)",
                        || format!("a={a}, b={b}"),
                        &replay,
                    );
                    o.check(
                        nabla(frame, frame.join(a, b))
                            == join_congruences(frame, &na, &nabla(frame, b)),
                        &item,
                        "∇(a∨b) = ∇(a) ∨ ∇(b)",
                        || format!("a={a}, b={b}"),
                        &replay,
                    );
                    o.check(
                        nabla(frame, frame.meet(a, b)) == na.intersect(&nabla(frame, b), frame),
                        &item,
                        "∇(a∧b) = ∇(a) ∩ ∇(b)",
                        || format!("a={a}, b={b}"),
                        &replay,
                    );
                    o.check(
                        delta(frame, a).refines(&nabla(frame, b))
                            == (frame.join(a, b) == frame.top()),
                        &item,
                        "Δ(x) ⊆ ∇(y) iff x∨y = ⊤",
                        || format!("x={a}, y={b}"),
                        &replay,
                    );
                }
            }
            o
        })
        .collect();
    outcomes.extend(law_outcomes);
    let items = frames.len() + law_frames.len();
    Ok(report("congruence_oracle", params, max_frame, items, outcomes))
}

fn random_seeds(rng: &mut ChaCha8Rng, n: usize, max_pairs: usize) -> Vec<Seed> {
    let count = rng.gen_range(1..=max_pairs);
    (0..count)
        .map(|_| {
            let x = rng.gen_range(0..n);
            let y = rng.gen_range(0..n);
            if rng.gen_bool(0.5) {
                Seed::Equate(x, y)
            } else {
                Seed::ForceLeq(x, y)
            }
        })
        .collect()
}

fn quotient_lemmas_suite(params: &SuiteParams) -> Result<SuiteReport> {
    let max_frame = params.max_frame.unwrap_or(params.caps.frame);
    let frames = frame_corpus(max_frame)?;
    let samples = 15usize;

    let mut outcomes: Vec<Outcome> = frames
        .par_iter()
        .enumerate()
        .map(|(fi, frame)| {
            let mut o = Outcome::default();
            let item = format!("frame[{fi}] (n={})", frame.n());
            let replay = serde_json::to_value(frame_to_doc(frame)).unwrap();
            for s in 0..samples {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(params.corpus.seed ^ ((fi as u64) << 24) ^ s as u64);
                let n = frame.n();

                // Witness lemma: quotient twice versus once with the
                // canonical class-maximum witnesses.
                let r_seeds = random_seeds(&mut rng, n, 2);
                let c_r = congruence_closure(frame, &r_seeds);
                let (q1, _) = quotient_frame(frame, &c_r).unwrap();
                let s_pairs: Vec<(usize, usize)> = (0..rng.gen_range(1..=2usize))
                    .map(|_| (rng.gen_range(0..q1.n()), rng.gen_range(0..q1.n())))
                    .collect();
                // Congruence generated by S on the quotient, pulled back.
                let s_seeds: Vec<Seed> = s_pairs
                    .iter()
                    .map(|&(u, v)| Seed::ForceLeq(u, v))
                    .collect();
                let c_s = congruence_closure(&q1, &s_seeds);
                let twice: Vec<usize> = (0..n).map(|x| c_s.class_of(c_r.class_of(x))).collect();
                // One quotient with witness pairs w([x]) = class max.
                let mut once_seeds = r_seeds.clone();
                for &(u, v) in &s_pairs {
                    once_seeds.push(Seed::ForceLeq(c_r.class_max(u), c_r.class_max(v)));
                }
                let once = congruence_closure(frame, &once_seeds);
                let same = (0..n).all(|x| {
                    (0..n).all(|y| (twice[x] == twice[y]) == once.related(x, y))
                });
                o.check(
                    same,
                    &item,
                    "witness lemma: iterated quotient equals one-step quotient",
                    || format!("R={r_seeds:?}, S={s_pairs:?}"),
                    &replay,
                );

                // L/(C∪R) against (L/C)/[R]_C.
                let c_seeds = random_seeds(&mut rng, n, 2);
                let c = congruence_closure(frame, &c_seeds);
                let r_pairs: Vec<(usize, usize)> = (0..rng.gen_range(1..=2usize))
                    .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
                    .collect();
                let mut lhs_seeds: Vec<Seed> = c_seeds.clone();
                lhs_seeds.extend(r_pairs.iter().map(|&(x, y)| Seed::ForceLeq(x, y)));
                let lhs = congruence_closure(frame, &lhs_seeds);
                let (qc, _) = quotient_frame(frame, &c).unwrap();
                let projected: Vec<Seed> = r_pairs
                    .iter()
                    .map(|&(x, y)| Seed::ForceLeq(c.class_of(x), c.class_of(y)))
                    .collect();
                let c_proj = congruence_closure(&qc, &projected);
                let rhs_same = (0..n).all(|x| {
                    (0..n).all(|y| {
                        lhs.related(x, y)
                            == (c_proj.class_of(c.class_of(x)) == c_proj.class_of(c.class_of(y)))
                    })
                });
                o.check(
                    rhs_same,
                    &item,
                    "L/(C∪R) equals (L/C)/[R]_C",
                    || format!("C={c_seeds:?}, R={r_pairs:?}"),
                    &replay,
                );
            }
            o
        })
        .collect();

    // Finitary-quotient characterization over the biframe corpus.
    let corpus = enumerate_corpus(&params.corpus, &params.caps)?;
    let bi_outcomes: Vec<Outcome> = corpus
        .par_iter()
        .enumerate()
        .map(|(bi, b)| {
            let mut o = Outcome::default();
            let item = format!("biframe[{bi}]");
            let replay = serde_json::to_value(biframe_to_doc(b)).unwrap();
            let afin = match crate::biframe::finitary_assembly(b, params.caps.assembly) {
                Ok(a) => a,
                Err(e) => {
                    o.skip(&item, e.to_string());
                    return o;
                }
            };
            for (ci, c) in afin.congruences.iter().enumerate() {
                let (_, c_is_finitary) = finitary_analysis(b, c);
                let q = biquotient(b, c).unwrap();
                let quotient_is_finitary =
                    match is_finitary_biframe(&q.biframe, params.caps.coproduct) {
                        Ok(rep) => rep.is_finitary,
                        Err(e) => {
                            o.skip(&item, format!("congruence #{ci}: {e}"));
                            continue;
                        }
                    };
                o.check(
                    c_is_finitary == quotient_is_finitary && q.is_biquotient == c_is_finitary,
                    &item,
                    "quotient is a finitary biframe iff the congruence is finitary",
                    || format!("congruence #{ci}"),
                    &replay,
                );
            }
            o
        })
        .collect();
    outcomes.extend(bi_outcomes);
    let items = frames.len() + corpus.len();
    Ok(report("quotient_lemmas", params, max_frame, items, outcomes))
}

/// Run a closure over every corpus biframe, collecting outcomes in item
/// order.
fn over_corpus(
    name: &str,
    params: &SuiteParams,
    f: impl Fn(usize, &Biframe, &mut Outcome) + Sync,
) -> Result<SuiteReport> {
    let corpus = enumerate_corpus(&params.corpus, &params.caps)?;
    let outcomes: Vec<Outcome> = corpus
        .par_iter()
        .enumerate()
        .map(|(i, b)| {
            let mut o = Outcome::default();
            f(i, b, &mut o);
            o
        })
        .collect();
    let items = corpus.len();
    Ok(report(
        name,
        params,
        params.max_frame.unwrap_or(params.corpus.max_side),
        items,
        outcomes,
    ))
}

fn spectra_facts_suite(params: &SuiteParams) -> Result<SuiteReport> {
    over_corpus("spectra_facts", params, |i, b, o| {
        let item = format!("biframe[{i}]");
        let replay = serde_json::to_value(biframe_to_doc(b)).unwrap();
        let afin = match crate::biframe::finitary_assembly(b, params.caps.assembly) {
            Ok(a) => a,
            Err(e) => return o.skip(&item, e.to_string()),
        };
        let bb = match bpt(b) {
            Ok(bb) => bb,
            Err(e) => return o.skip(&item, e.to_string()),
        };
        let facts = spectra_facts(b, &afin, &bb);
        o.check(
            facts.join_is_intersection,
            &item,
            "spectrum of a join is the intersection of spectra",
            || facts.witnesses.join("; "),
            &replay,
        );
        o.check(
            facts.open_spectrum_is_phi,
            &item,
            "spectrum of Δ(e±a) is φ±(a)",
            || facts.witnesses.join("; "),
            &replay,
        );
        o.check(
            facts.closed_spectrum_is_co_phi,
            &item,
            "spectrum of ∇(e±a) is the complement of φ±(a)",
            || facts.witnesses.join("; "),
            &replay,
        );
        o.check(
            facts.inequality_spectrum,
            &item,
            "spectrum of a forced inequality matches the four-term union",
            || facts.witnesses.join("; "),
            &replay,
        );
        // The subspace bitopology matches the biquotient spectrum.
        for (ci, c) in afin.congruences.iter().enumerate() {
            o.check(
                verify_quotient_spectrum(b, &bb, c).is_ok(),
                &item,
                "subspace bitopology equals the biquotient spectrum",
                || format!("congruence #{ci}"),
                &replay,
            );
        }
    })
}

fn skula_patch_suite(params: &SuiteParams) -> Result<SuiteReport> {
    over_corpus("skula_patch", params, |i, b, o| {
        let item = format!("biframe[{i}]");
        let replay = serde_json::to_value(biframe_to_doc(b)).unwrap();
        let bb = match bpt(b) {
            Ok(bb) => bb,
            Err(e) => return o.skip(&item, e.to_string()),
        };
        let afin = match crate::biframe::finitary_assembly(b, params.caps.assembly) {
            Ok(a) => a,
            Err(e) => return o.skip(&item, e.to_string()),
        };
        let sk = skula_variant(&bb.bispace, SkulaVariant::Sk);
        let cf = skula_variant(&bb.bispace, SkulaVariant::Cf);
        let pm = skula_variant(&bb.bispace, SkulaVariant::Pm);
        let patches: Vec<Vec<u64>> = [&sk, &cf, &pm].iter().map(|x| x.patch()).collect();
        o.check(
            patches[0] == patches[1] && patches[1] == patches[2],
            &item,
            "the three Skula bispaces share one patch",
            String::new,
            &replay,
        );

        let full = bb.bispace.full();
        let closed = |family: &[u64]| -> Vec<u64> {
            let mut v: Vec<u64> = family.iter().map(|&u| full & !u).collect();
            v.sort_unstable();
            v.dedup();
            v
        };

        // Positive closed sets of the cf variant are the spectra of the
        // closed congruences ∇(x).
        let mut nabla_spectra: Vec<u64> = b
            .main()
            .elements()
            .map(|x| quotient_spectrum(&bb, &nabla(b.main(), x)))
            .collect();
        nabla_spectra.sort_unstable();
        nabla_spectra.dedup();
        o.check(
            closed(cf.opens_plus()) == nabla_spectra,
            &item,
            "cf positive closed sets are spectra of closed congruences",
            String::new,
            &replay,
        );

        // Negative closed sets of the cf variant are the spectra of the
        // finitary fitted congruences.
        match finitary_fitted_family(b, params.caps.assembly) {
            Ok(fitted) => {
                let mut fitted_spectra: Vec<u64> =
                    fitted.iter().map(|c| quotient_spectrum(&bb, c)).collect();
                fitted_spectra.sort_unstable();
                fitted_spectra.dedup();
                o.check(
                    closed(cf.opens_minus()) == fitted_spectra,
                    &item,
                    "cf negative closed sets are spectra of finitary fitted congruences",
                    String::new,
                    &replay,
                );
            }
            Err(e) => o.skip(&item, e.to_string()),
        }

        // Positive/negative closed sets of the pm variant are the spectra
        // of the side-induced congruences.
        let side_spectra = |side: Side| -> Result<Vec<u64>> {
            let side_frame = match side {
                Side::Plus => b.plus(),
                Side::Minus => b.minus(),
            };
            let mut out: Vec<u64> = enumerate_congruences(side_frame, params.caps.oracle)?
                .iter()
                .map(|cs| quotient_spectrum(&bb, &side_congruence(b, side, cs)))
                .collect();
            out.sort_unstable();
            out.dedup();
            Ok(out)
        };
        match (side_spectra(Side::Plus), side_spectra(Side::Minus)) {
            (Ok(plus_spectra), Ok(minus_spectra)) => {
                o.check(
                    closed(pm.opens_plus()) == plus_spectra,
                    &item,
                    "pm positive closed sets are spectra of positive congruences",
                    String::new,
                    &replay,
                );
                o.check(
                    closed(pm.opens_minus()) == minus_spectra,
                    &item,
                    "pm negative closed sets are spectra of negative congruences",
                    String::new,
                    &replay,
                );
            }
            (Err(e), _) | (_, Err(e)) => o.skip(&item, e.to_string()),
        }

        // Positive congruences form a subframe of the finitary assembly.
        if let Ok(side_congs) = enumerate_congruences(b.plus(), params.caps.oracle) {
            let induced: Vec<Congruence> = side_congs
                .iter()
                .map(|cs| side_congruence(b, Side::Plus, cs))
                .collect();
            let closed_under = induced.iter().enumerate().all(|(x, cx)| {
                induced.iter().skip(x).all(|cy| {
                    let meet = cx.intersect(cy, b.main());
                    let join = join_congruences(b.main(), cx, cy);
                    induced.contains(&meet) && induced.contains(&join)
                })
            });
            let in_afin = induced.iter().all(|c| afin.index_of(c).is_some());
            o.check(
                closed_under && in_afin,
                &item,
                "positive congruences form a subframe of the finitary assembly",
                String::new,
                &replay,
            );
        }
    })
}

fn bisober_suite(params: &SuiteParams) -> Result<SuiteReport> {
    over_corpus("bisober", params, |i, b, o| {
        let item = format!("biframe[{i}]");
        let replay = serde_json::to_value(biframe_to_doc(b)).unwrap();
        let bb = match bpt(b) {
            Ok(bb) => bb,
            Err(e) => return o.skip(&item, e.to_string()),
        };
        let afin = match crate::biframe::finitary_assembly(b, params.caps.assembly) {
            Ok(a) => a,
            Err(e) => return o.skip(&item, e.to_string()),
        };
        // bisober_family internally asserts the two routes coincide.
        let family = bisober_family(b, &bb, &afin);
        let full = bb.bispace.full();
        o.check(
            family.contains(&0) && family.contains(&full),
            &item,
            "bisober family contains ∅ and the full point set",
            String::new,
            &replay,
        );
        for v in [SkulaVariant::Sk, SkulaVariant::Cf, SkulaVariant::Pm] {
            let sk = skula_variant(&bb.bispace, v);
            let mut patch_closed: Vec<u64> = sk.patch().iter().map(|&u| full & !u).collect();
            patch_closed.sort_unstable();
            patch_closed.dedup();
            o.check(
                family == patch_closed,
                &item,
                "bisober family equals the patch-closed sets of the Skula bispace",
                || format!("variant {}", v.name()),
                &replay,
            );
        }
    })
}

fn presentations_suite(params: &SuiteParams) -> Result<SuiteReport> {
    over_corpus("assembly_presentations", params, |i, b, o| {
        let item = format!("biframe[{i}]");
        let replay = serde_json::to_value(biframe_to_doc(b)).unwrap();
        if b.plus().n() > params.caps.presentation_side
            || b.minus().n() > params.caps.presentation_side
        {
            return o.skip(
                &item,
                format!(
                    "sides exceed presentation cap {}",
                    params.caps.presentation_side
                ),
            );
        }
        let mut mains: Vec<Vec<Vec<u16>>> = Vec::new();
        for v in [
            AssemblyVariant::Plain,
            AssemblyVariant::ClosedFitted,
            AssemblyVariant::PositiveNegative,
        ] {
            let asm = match assembly(b, v, params.caps.assembly) {
                Ok(a) => a,
                Err(e) => return o.skip(&item, e.to_string()),
            };
            mains.push(
                asm.afin
                    .congruences
                    .iter()
                    .map(|c| c.class_of_table().to_vec())
                    .collect(),
            );
            match presentation_check(b, &asm, params.caps.presentation_side, params.caps.coproduct)
            {
                Ok(check) => o.check(
                    check.holds,
                    &item,
                    "free presentation is isomorphic to the assembly",
                    || format!("variant {}: {}", v.name(), check.mismatches.join("; ")),
                    &replay,
                ),
                Err(e) => o.skip(&item, e.to_string()),
            }
        }
        o.check(
            mains.windows(2).all(|w| w[0] == w[1]),
            &item,
            "the three variants share one main frame element for element",
            || format!("main sizes {:?}", mains.iter().map(|m| m.len()).collect::<Vec<_>>()),
            &replay,
        );
    })
}

fn bijections_suite(params: &SuiteParams) -> Result<SuiteReport> {
    over_corpus("bijections", params, |i, b, o| {
        let item = format!("biframe[{i}]");
        let replay = serde_json::to_value(biframe_to_doc(b)).unwrap();
        let bb = match bpt(b) {
            Ok(bb) => bb,
            Err(e) => return o.skip(&item, e.to_string()),
        };
        for v in [
            AssemblyVariant::Plain,
            AssemblyVariant::ClosedFitted,
            AssemblyVariant::PositiveNegative,
        ] {
            let asm = match assembly(b, v, params.caps.assembly) {
                Ok(a) => a,
                Err(e) => {
                    o.skip(&item, e.to_string());
                    continue;
                }
            };
            match spectrum_bijection(b, &asm, &bb) {
                Ok(bij) => o.check(
                    bij.holds,
                    &item,
                    "spectrum bijection is a bihomeomorphism onto the assembly spectrum",
                    || format!("variant {}: {}", v.name(), bij.mismatches.join("; ")),
                    &replay,
                ),
                Err(e) => o.skip(&item, format!("variant {}: {e}", v.name())),
            }
        }
    })
}

/// The sampled morphism family for the functorial suites: all quotient
/// maps along finitary congruences, plus the point collapses.
fn corpus_maps(b: &Biframe, caps: &Caps) -> Result<Vec<BiframeMap>> {
    let afin = crate::biframe::finitary_assembly(b, caps.assembly)?;
    let mut maps = Vec::new();
    for c in &afin.congruences {
        let (map, _) = quotient_map(b, c)?;
        maps.push(map);
    }
    for p in frame_points(b.main()) {
        maps.push(point_collapse(b, &p)?);
    }
    Ok(maps)
}

fn naturality_suite(params: &SuiteParams) -> Result<SuiteReport> {
    over_corpus("naturality", params, |i, b, o| {
        let item = format!("biframe[{i}]");
        let replay = serde_json::to_value(biframe_to_doc(b)).unwrap();
        let maps = match corpus_maps(b, &params.caps) {
            Ok(m) => m,
            Err(e) => return o.skip(&item, e.to_string()),
        };
        for v in [
            AssemblyVariant::Plain,
            AssemblyVariant::ClosedFitted,
            AssemblyVariant::PositiveNegative,
        ] {
            let src = match assembly(b, v, params.caps.assembly) {
                Ok(a) => a,
                Err(e) => {
                    o.skip(&item, e.to_string());
                    continue;
                }
            };
            // Identity functoriality.
            let id = BiframeMap::identity(b);
            match assembly_map(&id, &src, &src) {
                Ok(am) => o.check(
                    am == BiframeMap::identity(&src.biframe),
                    &item,
                    "assembly of the identity is the identity",
                    || format!("variant {}", v.name()),
                    &replay,
                ),
                Err(e) => o.skip(&item, e.to_string()),
            }
            for (mi, f) in maps.iter().enumerate() {
                let tgt = match assembly(f.target(), v, params.caps.assembly) {
                    Ok(a) => a,
                    Err(e) => {
                        o.skip(&item, e.to_string());
                        continue;
                    }
                };
                match crate::bispace::naturality_check(f, &src, &tgt) {
                    Ok((ok, witnesses)) => o.check(
                        ok,
                        &item,
                        "naturality square commutes",
                        || format!("variant {}, map #{mi}: {}", v.name(), witnesses.join("; ")),
                        &replay,
                    ),
                    Err(e) => o.skip(&item, format!("map #{mi}: {e}")),
                }
            }
        }

        // Composition functoriality along a quotient chain.
        if let Ok(afin) = crate::biframe::finitary_assembly(b, params.caps.assembly) {
            if let Some(c) = afin
                .congruences
                .iter()
                .find(|c| !c.is_diagonal() && !c.is_all())
            {
                let (f, r) = quotient_map(b, c).unwrap();
                let all = Congruence::all(r.biframe.main());
                let (g, _) = quotient_map(&r.biframe, &all).unwrap();
                for v in [AssemblyVariant::Plain, AssemblyVariant::ClosedFitted] {
                    let a0 = assembly(b, v, params.caps.assembly);
                    let a1 = assembly(&r.biframe, v, params.caps.assembly);
                    let a2 = assembly(g.target(), v, params.caps.assembly);
                    if let (Ok(a0), Ok(a1), Ok(a2)) = (a0, a1, a2) {
                        let lhs = assembly_map(&f.compose(&g).unwrap(), &a0, &a2);
                        let rhs = assembly_map(&f, &a0, &a1)
                            .and_then(|x| x.compose(&assembly_map(&g, &a1, &a2)?));
                        o.check(
                            matches!((&lhs, &rhs), (Ok(l), Ok(r)) if l == r),
                            &item,
                            "assembly respects composition",
                            || format!("variant {}", v.name()),
                            &replay,
                        );
                    }
                }
            }
        }
    })
}

fn axiom_suite(params: &SuiteParams, which: &'static str) -> Result<SuiteReport> {
    let corpus = enumerate_corpus(&params.corpus, &params.caps)?;
    let outcomes: Vec<Outcome> = corpus
        .par_iter()
        .enumerate()
        .map(|(i, b)| {
            let mut o = Outcome::default();
            let item = format!("biframe[{i}]");
            let replay = serde_json::to_value(biframe_to_doc(b)).unwrap();
            let afin = match crate::biframe::finitary_assembly(b, params.caps.assembly) {
                Ok(a) => a,
                Err(e) => {
                    o.skip(&item, e.to_string());
                    return o;
                }
            };
            let verdict = match which {
                "subfit" => Ok(crate::axioms::subfit_verdict(b, &afin)),
                "fit" => crate::axioms::fit_verdict(b, &afin),
                "t1" => crate::axioms::pairwise_t1_verdict_of(b, params.caps.assembly),
                _ => unreachable!(),
            };
            match verdict {
                Ok(v) => {
                    o.check(
                        v.consistent,
                        &item,
                        "all equivalent conditions agree",
                        || {
                            format!(
                                "{which}: results {:?}, witnesses {:?}",
                                v.condition_results, v.witnesses
                            )
                        },
                        &replay,
                    );
                    if which == "fit" && v.holds() {
                        let sv = crate::axioms::subfit_verdict(b, &afin);
                        o.check(
                            sv.holds(),
                            &item,
                            "fit implies subfit",
                            String::new,
                            &replay,
                        );
                    }
                }
                Err(e) => o.skip(&item, e.to_string()),
            }
            o
        })
        .collect();
    let items = corpus.len();
    Ok(report(
        which,
        params,
        params.max_frame.unwrap_or(params.corpus.max_side),
        items,
        outcomes,
    ))
}

fn universal_property_suite(params: &SuiteParams) -> Result<SuiteReport> {
    over_corpus("universal_property", params, |i, b, o| {
        let item = format!("biframe[{i}]");
        let replay = serde_json::to_value(biframe_to_doc(b)).unwrap();
        let plain = match assembly(b, AssemblyVariant::Plain, params.caps.assembly) {
            Ok(a) => a,
            Err(e) => return o.skip(&item, e.to_string()),
        };
        let unit = match nabla_unit(b, &plain) {
            Ok(u) => u,
            Err(e) => return o.skip(&item, e.to_string()),
        };
        // The unit itself mediates by the identity.
        match universal_property_check(&unit, &plain) {
            Ok(g) => o.check(
                g == BiframeMap::identity(&plain.biframe),
                &item,
                "the map mediating ∇ is the identity",
                String::new,
                &replay,
            ),
            Err(e) => o.check(
                false,
                &item,
                "the unit admits a mediating map",
                || e.to_string(),
                &replay,
            ),
        }
        // Mediating ∇∘q recovers the assembly functor action.
        let afin = &plain.afin;
        for (ci, c) in afin.congruences.iter().enumerate() {
            let (q, r) = quotient_map(b, c).unwrap();
            let tgt_plain = match assembly(&r.biframe, AssemblyVariant::Plain, params.caps.assembly)
            {
                Ok(a) => a,
                Err(e) => {
                    o.skip(&item, e.to_string());
                    continue;
                }
            };
            let tgt_unit = match nabla_unit(&r.biframe, &tgt_plain) {
                Ok(u) => u,
                Err(e) => {
                    o.skip(&item, e.to_string());
                    continue;
                }
            };
            let f = q.compose(&tgt_unit).unwrap();
            match (
                universal_property_check(&f, &plain),
                assembly_map(&q, &plain, &tgt_plain),
            ) {
                (Ok(g), Ok(am)) => o.check(
                    g == am,
                    &item,
                    "mediating map of ∇∘q is the assembly functor action",
                    || format!("congruence #{ci}"),
                    &replay,
                ),
                (Err(e), _) => o.check(
                    false,
                    &item,
                    "∇∘q admits a mediating map",
                    || format!("congruence #{ci}: {e}"),
                    &replay,
                ),
                (_, Err(e)) => o.skip(&item, format!("congruence #{ci}: {e}")),
            }
        }
        // The biquotient lattice is the assembly reversed, with the top
        // at the biframe itself.
        match biquotient_lattice(b, params.caps.assembly, params.caps.oracle) {
            Ok(s) => {
                let top_is_diag = s.afin.congruences[s.frame.top()].is_diagonal();
                let order_ok = (0..s.frame.n()).all(|x| {
                    (0..s.frame.n()).all(|y| s.frame.leq(x, y) == s.afin.frame.leq(y, x))
                });
                let flags_ok = s.positive[s.frame.top()] && s.negative[s.frame.top()];
                o.check(
                    top_is_diag && order_ok && flags_ok,
                    &item,
                    "biquotient lattice is the reversed assembly with the identity on top",
                    String::new,
                    &replay,
                );
            }
            Err(e) => o.skip(&item, e.to_string()),
        }
    })
}
