//! Decision procedures for finitary subfitness, fitness, and pairwise
//! T1. Every equivalent condition of the characterization theorems is
//! implemented independently from its literal statement; the verdicts
//! report all of them, and agreement across conditions is itself the
//! property under test.

use crate::biframe::{biquotient, finitary_fitted_family, finitary_fitting, Biframe};
use crate::bispace::{bpt, quotient_spectrum, skula_variant, Bpt, FiniteBispace, SkulaVariant};
use crate::congruence::{congruence_closure, delta, nabla, AssemblyFrame, Congruence, Seed};
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Subfit,
    Fit,
    PairwiseT1,
}

/// One verdict per axiom: one boolean per numbered condition of the
/// characterization theorem, with a witness for each failed condition.
/// `consistent` records whether all conditions agree; disagreement is a
/// reportable finding, never silently resolved.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub condition_results: Vec<bool>,
    pub witnesses: Vec<Option<String>>,
    pub consistent: bool,
}

impl AxiomVerdict {
    fn new(axiom: Axiom, results: Vec<(bool, Option<String>)>) -> AxiomVerdict {
        let condition_results: Vec<bool> = results.iter().map(|(b, _)| *b).collect();
        let witnesses: Vec<Option<String>> = results.into_iter().map(|(_, w)| w).collect();
        let consistent = condition_results.windows(2).all(|w| w[0] == w[1]);
        AxiomVerdict {
            axiom,
            condition_results,
            witnesses,
            consistent,
        }
    }

    /// The headline answer (condition 1, the definitional one).
    pub fn holds(&self) -> bool {
        self.condition_results[0]
    }
}

/// Intersection of ∇(e⁺y ∨ e⁻y′) over all pairs accepted by `keep`,
/// starting from the all-congruence (empty intersection).
fn intersect_closed_vees(
    b: &Biframe,
    mut keep: impl FnMut(usize) -> bool,
) -> Congruence {
    let mut acc = Congruence::all(b.main());
    for y in b.plus().elements() {
        for y2 in b.minus().elements() {
            let vee = b.vee(y, y2);
            if keep(vee) {
                acc = acc.intersect(&nabla(b.main(), vee), b.main());
            }
        }
    }
    acc
}

/// Join of Δ(e⁺y ∨ e⁻y′) over all pairs accepted by `keep`.
fn join_open_vees(b: &Biframe, mut keep: impl FnMut(usize) -> bool) -> Congruence {
    let mut seeds = Vec::new();
    for y in b.plus().elements() {
        for y2 in b.minus().elements() {
            let vee = b.vee(y, y2);
            if keep(vee) {
                for class in delta(b.main(), vee).classes() {
                    for &x in &class[1..] {
                        seeds.push(Seed::Equate(class[0], x));
                    }
                }
            }
        }
    }
    congruence_closure(b.main(), &seeds)
}

pub fn subfit_verdict(b: &Biframe, afin: &AssemblyFrame) -> AxiomVerdict {
    let m = b.main();

    // (1) Definitional: whenever a ∧ (e⁺x∧e⁻x′) ≰ b there are y⁺, y⁻
    // with (e⁺x∧e⁻x′) ∨ (e⁺y∨e⁻y′) = ⊤ and a ≰ (e⁺y∨e⁻y′) ∨ b.
    let mut c1 = (true, None);
    'c1: for x in b.plus().elements() {
        for x2 in b.minus().elements() {
            let wedge = b.wedge(x, x2);
            for a in m.elements() {
                for bb in m.elements() {
                    if m.leq(m.meet(a, wedge), bb) {
                        continue;
                    }
                    let found = b.plus().elements().any(|y| {
                        b.minus().elements().any(|y2| {
                            let vee = b.vee(y, y2);
                            m.join(wedge, vee) == m.top() && !m.leq(a, m.join(vee, bb))
                        })
                    });
                    if !found {
                        c1 = (
                            false,
                            Some(format!("a={a}, b={bb}, x⁺={x}, x⁻={x2}")),
                        );
                        break 'c1;
                    }
                }
            }
        }
    }

    // (2) Δ(e⁺x∧e⁻x′) = ⋂{∇(e⁺y∨e⁻y′) : (e⁺x∧e⁻x′)∨(e⁺y∨e⁻y′) = ⊤}.
    let mut c2 = (true, None);
    'c2: for x in b.plus().elements() {
        for x2 in b.minus().elements() {
            let wedge = b.wedge(x, x2);
            let lhs = delta(m, wedge);
            let rhs = intersect_closed_vees(b, |vee| m.join(wedge, vee) == m.top());
            if lhs != rhs {
                c2 = (false, Some(format!("x⁺={x}, x⁻={x2}")));
                break 'c2;
            }
        }
    }

    // (3) Every open congruence is an intersection of finitary closed
    // congruences.
    let mut c3 = (true, None);
    for z in m.elements() {
        let lhs = delta(m, z);
        let rhs = intersect_closed_vees(b, |vee| lhs.refines(&nabla(m, vee)));
        if lhs != rhs {
            c3 = (false, Some(format!("z={z}")));
            break;
        }
    }

    // (4) A finitary congruence with trivial finitary fitting is trivial.
    let mut c4 = (true, None);
    for (i, c) in afin.congruences.iter().enumerate() {
        if finitary_fitting(b, c).is_diagonal() && !c.is_diagonal() {
            c4 = (false, Some(format!("congruence #{i}")));
            break;
        }
    }

    AxiomVerdict::new(Axiom::Subfit, vec![c1, c2, c3, c4])
}

/// Condition (2) of the fitness theorem, reused for quotients:
/// ∇(e⁺x∧e⁻x′) = ⋁{Δ(e⁺y∨e⁻y′) : (e⁺x∧e⁻x′)∨(e⁺y∨e⁻y′) = ⊤}.
fn fit_condition_two(b: &Biframe) -> (bool, Option<String>) {
    let m = b.main();
    for x in b.plus().elements() {
        for x2 in b.minus().elements() {
            let wedge = b.wedge(x, x2);
            let lhs = nabla(m, wedge);
            let rhs = join_open_vees(b, |vee| m.join(wedge, vee) == m.top());
            if lhs != rhs {
                return (false, Some(format!("x⁺={x}, x⁻={x2}")));
            }
        }
    }
    (true, None)
}

pub fn fit_verdict(b: &Biframe, afin: &AssemblyFrame) -> Result<AxiomVerdict> {
    let m = b.main();

    // (1) Definitional: whenever e⁺x∧e⁻x′ ≰ a there are y⁺, y⁻ with
    // (e⁺x∧e⁻x′)∨(e⁺y∨e⁻y′) = ⊤ and (e⁺y∨e⁻y′) → a ≠ a.
    let mut c1 = (true, None);
    'c1: for x in b.plus().elements() {
        for x2 in b.minus().elements() {
            let wedge = b.wedge(x, x2);
            for a in m.elements() {
                if m.leq(wedge, a) {
                    continue;
                }
                let found = b.plus().elements().any(|y| {
                    b.minus().elements().any(|y2| {
                        let vee = b.vee(y, y2);
                        m.join(wedge, vee) == m.top() && m.heyting(vee, a) != a
                    })
                });
                if !found {
                    c1 = (false, Some(format!("x⁺={x}, x⁻={x2}, a={a}")));
                    break 'c1;
                }
            }
        }
    }

    // (2).
    let c2 = fit_condition_two(b);

    // (3) Finitary congruences with equal finitary fitting are equal.
    let fittings: Vec<Congruence> = afin
        .congruences
        .iter()
        .map(|c| finitary_fitting(b, c))
        .collect();
    let mut c3 = (true, None);
    'c3: for i in 0..afin.congruences.len() {
        for j in i + 1..afin.congruences.len() {
            if fittings[i] == fittings[j] && afin.congruences[i] != afin.congruences[j] {
                c3 = (false, Some(format!("congruences #{i} and #{j}")));
                break 'c3;
            }
        }
    }

    // (4) Every closed congruence is finitary fitted.
    let mut c4 = (true, None);
    for x in m.elements() {
        let c = nabla(m, x);
        if finitary_fitting(b, &c) != c {
            c4 = (false, Some(format!("∇({x})")));
            break;
        }
    }

    // (5) Every finitary congruence is finitary fitted.
    let mut c5 = (true, None);
    for (i, c) in afin.congruences.iter().enumerate() {
        if fittings[i] != *c {
            c5 = (false, Some(format!("congruence #{i}")));
            break;
        }
    }

    // (6) All biquotients are fit: each quotient biframe passes
    // condition (2).
    let mut c6 = (true, None);
    for (i, c) in afin.congruences.iter().enumerate() {
        let q = biquotient(b, c)?;
        let (ok, w) = fit_condition_two(&q.biframe);
        if !ok {
            c6 = (false, Some(format!("biquotient #{i}: {}", w.unwrap_or_default())));
            break;
        }
    }

    Ok(AxiomVerdict::new(Axiom::Fit, vec![c1, c2, c3, c4, c5, c6]))
}

/// Direct quantifier check of the pairwise T1 separation property on a
/// bispace: distinct points are separated by some open of either
/// topology.
pub fn pairwise_t1_space(x: &FiniteBispace) -> bool {
    for p in 0..x.points() {
        for q in 0..x.points() {
            if p == q {
                continue;
            }
            let separated = x
                .opens_plus()
                .iter()
                .chain(x.opens_minus())
                .any(|&u| u & 1 << p != 0 && u & 1 << q == 0);
            if !separated {
                return false;
            }
        }
    }
    true
}

pub fn pairwise_t1_verdict(
    b: &Biframe,
    bpt_b: &Bpt,
    fitted_cap: usize,
) -> Result<AxiomVerdict> {
    let n_points = bpt_b.points.len();
    if n_points > 16 {
        return Err(Error::SizeLimitExceeded {
            context: "pairwise T1 subset sweep",
            needed: n_points,
            cap: 16,
        });
    }
    let full = bpt_b.bispace.full();

    // (1) The spectrum is pairwise T1.
    let c1 = (pairwise_t1_space(&bpt_b.bispace), None::<String>);
    let c1 = (
        c1.0,
        if c1.0 {
            None
        } else {
            Some("an unseparated point pair exists".to_string())
        },
    );

    // (2) Every singleton is φ⁺(a)ᶜ ∩ φ⁻(a′)ᶜ.
    let mut c2 = (true, None);
    for i in 0..n_points {
        let singleton = 1u64 << i;
        let found = b.plus().elements().any(|a| {
            b.minus().elements().any(|a2| {
                (full & !bpt_b.phi_plus[a]) & (full & !bpt_b.phi_minus[a2]) == singleton
            })
        });
        if !found {
            c2 = (false, Some(format!("point {i}")));
            break;
        }
    }

    // (3) The negative topology of the closed-fitted Skula bispace is
    // discrete.
    let sk = skula_variant(&bpt_b.bispace, SkulaVariant::Cf);
    let discrete = sk.opens_minus().len() == 1 << n_points;
    let c3 = (
        discrete,
        if discrete {
            None
        } else {
            Some(format!(
                "negative topology has {} of {} sets",
                sk.opens_minus().len(),
                1usize << n_points
            ))
        },
    );

    // (4) Every subset of the spectrum is the spectrum of a finitary
    // fitted biquotient.
    let fitted = finitary_fitted_family(b, fitted_cap)?;
    let mut spectra: Vec<u64> = fitted.iter().map(|c| quotient_spectrum(bpt_b, c)).collect();
    spectra.sort_unstable();
    spectra.dedup();
    let mut c4 = (true, None);
    for s in 0u64..=full {
        if !spectra.contains(&s) {
            c4 = (false, Some(format!("subset {s:#b}")));
            break;
        }
    }

    Ok(AxiomVerdict::new(
        Axiom::PairwiseT1,
        vec![c1, c2, c3, c4],
    ))
}

/// Convenience wrapper computing the spectrum on demand.
pub fn pairwise_t1_verdict_of(b: &Biframe, fitted_cap: usize) -> Result<AxiomVerdict> {
    let bpt_b = bpt(b)?;
    pairwise_t1_verdict(b, &bpt_b, fitted_cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biframe::fixtures::{boolean_biframe, point_biframe, sierpinski};
    use crate::biframe::finitary_assembly;
    use crate::congruence::DEFAULT_ASSEMBLY_CAP;

    fn verdicts(b: &Biframe) -> (AxiomVerdict, AxiomVerdict, AxiomVerdict) {
        let afin = finitary_assembly(b, DEFAULT_ASSEMBLY_CAP).unwrap();
        let sv = subfit_verdict(b, &afin);
        let fv = fit_verdict(b, &afin).unwrap();
        let tv = pairwise_t1_verdict_of(b, DEFAULT_ASSEMBLY_CAP).unwrap();
        (sv, fv, tv)
    }

    #[test]
    fn point_biframe_satisfies_everything() {
        let (sv, fv, tv) = verdicts(&point_biframe());
        assert!(sv.consistent && sv.holds(), "{sv:?}");
        assert!(fv.consistent && fv.holds(), "{fv:?}");
        assert!(tv.consistent && tv.holds(), "{tv:?}");
    }

    #[test]
    fn sierpinski_fails_everything_consistently() {
        let (sv, fv, tv) = verdicts(&sierpinski());
        assert!(sv.consistent && !sv.holds(), "{sv:?}");
        assert!(fv.consistent && !fv.holds(), "{fv:?}");
        assert!(tv.consistent && !tv.holds(), "{tv:?}");
        // The first witness in index order is a=m, b=⊥, x⁺=m, x⁻=⊤;
        // a=⊤ with the same x pair is another valid counterexample.
        assert_eq!(sv.witnesses[0].as_deref(), Some("a=1, b=0, x⁺=1, x⁻=1"));
        let bs = sierpinski();
        let m = bs.main();
        for a in [1usize, 2] {
            let wedge = bs.wedge(1, 1);
            assert!(!m.leq(m.meet(a, wedge), 0));
            let found = bs.plus().elements().any(|y| {
                bs.minus().elements().any(|y2| {
                    let vee = bs.vee(y, y2);
                    m.join(wedge, vee) == m.top() && !m.leq(a, m.join(vee, 0))
                })
            });
            assert!(!found);
        }
    }

    #[test]
    fn boolean_biframe_satisfies_everything() {
        let (sv, fv, tv) = verdicts(&boolean_biframe());
        assert!(sv.consistent && sv.holds(), "{sv:?}");
        assert!(fv.consistent && fv.holds(), "{fv:?}");
        assert!(tv.consistent && tv.holds(), "{tv:?}");
    }

    #[test]
    fn fit_implies_subfit_on_fixtures() {
        for b in [point_biframe(), sierpinski(), boolean_biframe()] {
            let afin = finitary_assembly(&b, DEFAULT_ASSEMBLY_CAP).unwrap();
            let fv = fit_verdict(&b, &afin).unwrap();
            let sv = subfit_verdict(&b, &afin);
            if fv.holds() {
                assert!(sv.holds());
            }
        }
    }

    #[test]
    fn pairwise_t1_space_examples() {
        let one = FiniteBispace::new(1, vec![0, 1], vec![0, 1]).unwrap();
        assert!(pairwise_t1_space(&one));
        let discrete = FiniteBispace::new(2, vec![0, 1, 2, 3], vec![0, 3]).unwrap();
        assert!(pairwise_t1_space(&discrete));
        let bs = bpt(&sierpinski()).unwrap();
        assert!(!pairwise_t1_space(&bs.bispace));
    }
}
