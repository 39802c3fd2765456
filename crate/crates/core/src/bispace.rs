//! Finite bispaces, bispectra of biframes, quotient spectra as
//! subspaces, topology generation, the three Skula bispaces, bisober
//! families, and the spectrum bijections.

use crate::assembly::{AssemblyResult, AssemblyVariant};
use crate::biframe::{biquotient, Biframe};
use crate::bimap::BiframeMap;
use crate::congruence::{congruence_closure, AssemblyFrame, Congruence, Seed};
use crate::error::{Error, Result};
use crate::lattice::{frame_points, FrameHom};

/// A finite point set with two finite topologies, stored as sorted
/// bitmask families (bit i = point i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteBispace {
    points: usize,
    opens_plus: Vec<u64>,
    opens_minus: Vec<u64>,
    labels: Option<Vec<String>>,
}

impl FiniteBispace {
    pub fn new(points: usize, opens_plus: Vec<u64>, opens_minus: Vec<u64>) -> Result<Self> {
        Self::with_labels(points, opens_plus, opens_minus, None)
    }

    pub fn with_labels(
        points: usize,
        mut opens_plus: Vec<u64>,
        mut opens_minus: Vec<u64>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if points > 64 {
            return Err(Error::SizeLimitExceeded {
                context: "bispace points",
                needed: points,
                cap: 64,
            });
        }
        let full = full_mask(points);
        for family in [&mut opens_plus, &mut opens_minus] {
            family.sort_unstable();
            family.dedup();
            if family.iter().any(|&s| s & !full != 0) {
                return Err(Error::BadInput("open set out of point range".into()));
            }
            if !family.contains(&0) || !family.contains(&full) {
                return Err(Error::BadInput(
                    "topology must contain the empty and the full set".into(),
                ));
            }
            for &a in family.iter() {
                for &b in family.iter() {
                    if !family.contains(&(a | b)) || !family.contains(&(a & b)) {
                        return Err(Error::BadInput(format!(
                            "family not closed under union/intersection at {a:#b}, {b:#b}"
                        )));
                    }
                }
            }
        }
        if let Some(ls) = &labels {
            if ls.len() != points {
                return Err(Error::BadInput("label count must equal points".into()));
            }
        }
        Ok(FiniteBispace {
            points,
            opens_plus,
            opens_minus,
            labels,
        })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn full(&self) -> u64 {
        full_mask(self.points)
    }

    pub fn opens_plus(&self) -> &[u64] {
        &self.opens_plus
    }

    pub fn opens_minus(&self) -> &[u64] {
        &self.opens_minus
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Topology generated by both open families.
    pub fn patch(&self) -> Vec<u64> {
        let sub: Vec<u64> = self
            .opens_plus
            .iter()
            .chain(&self.opens_minus)
            .copied()
            .collect();
        generate_topology(self.points, &sub)
    }

    /// Complements of a family.
    pub fn co(&self, family: &[u64]) -> Vec<u64> {
        let full = self.full();
        let mut out: Vec<u64> = family.iter().map(|&s| full & !s).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

pub(crate) fn full_mask(points: usize) -> u64 {
    if points == 64 {
        u64::MAX
    } else {
        (1u64 << points) - 1
    }
}

/// Smallest family containing the subbasis, ∅ and the full set, closed
/// under binary union and intersection.
pub fn generate_topology(points: usize, subbasis: &[u64]) -> Vec<u64> {
    let full = full_mask(points);
    let mut family: Vec<u64> = vec![0, full];
    family.extend(subbasis.iter().map(|&s| s & full));
    family.sort_unstable();
    family.dedup();
    let mut head = 0;
    while head < family.len() {
        let a = family[head];
        head += 1;
        for i in 0..head {
            let b = family[i];
            for c in [a | b, a & b] {
                if !family.contains(&c) {
                    family.push(c);
                }
            }
        }
    }
    family.sort_unstable();
    family
}

/// The bispectrum of a biframe: its points are the frame points of the
/// main component; φ±(a) = {f : f(e±(a)) = ⊤}.
pub struct Bpt {
    pub bispace: FiniteBispace,
    pub points: Vec<FrameHom>,
    /// x ∈ main → mask of points with f(x) = ⊤.
    pub phi_main: Vec<u64>,
    /// a ∈ plus → φ⁺(a).
    pub phi_plus: Vec<u64>,
    pub phi_minus: Vec<u64>,
}

pub fn bpt(b: &Biframe) -> Result<Bpt> {
    let points = frame_points(b.main());
    if points.len() > 64 {
        return Err(Error::SizeLimitExceeded {
            context: "bispectrum points",
            needed: points.len(),
            cap: 64,
        });
    }
    let phi_main: Vec<u64> = b
        .main()
        .elements()
        .map(|x| {
            points
                .iter()
                .enumerate()
                .filter(|(_, p)| p.apply(x) == 1)
                .fold(0u64, |m, (i, _)| m | 1 << i)
        })
        .collect();
    let phi_plus: Vec<u64> = b
        .plus()
        .elements()
        .map(|a| phi_main[b.embed_plus().apply(a)])
        .collect();
    let phi_minus: Vec<u64> = b
        .minus()
        .elements()
        .map(|a| phi_main[b.embed_minus().apply(a)])
        .collect();
    // The φ images are already topologies since φ preserves the frame
    // operations; FiniteBispace::new re-checks the closure laws.
    let labels: Vec<String> = points
        .iter()
        .map(|p| {
            let vec: Vec<String> = p.table().iter().map(|v| v.to_string()).collect();
            vec.join("")
        })
        .collect();
    let bispace = FiniteBispace::with_labels(
        points.len(),
        phi_plus.clone(),
        phi_minus.clone(),
        Some(labels),
    )?;
    Ok(Bpt {
        bispace,
        points,
        phi_main,
        phi_plus,
        phi_minus,
    })
}

/// Points of the bispectrum factoring through a congruence, i.e. constant
/// on its classes.
pub fn quotient_spectrum(bpt: &Bpt, c: &Congruence) -> u64 {
    let mut mask = 0u64;
    for (i, p) in bpt.points.iter().enumerate() {
        let factors = (0..c.n()).all(|x| p.apply(x) == p.apply(c.max_of(x)));
        if factors {
            mask |= 1 << i;
        }
    }
    mask
}

/// Verify that the subspace bitopology on the quotient spectrum equals
/// the bispectrum of the biquotient, transported along the factorization
/// bijection.
pub fn verify_quotient_spectrum(b: &Biframe, bpt_b: &Bpt, c: &Congruence) -> Result<()> {
    let spectrum = quotient_spectrum(bpt_b, c);
    let q = biquotient(b, c)?;
    let bpt_q = bpt(&q.biframe)?;
    // Factorization bijection: a point of the quotient main composes with
    // the quotient map to a point of the original main frame.
    let mut seen = 0u64;
    let mut transport = vec![usize::MAX; bpt_q.points.len()];
    for (j, g) in bpt_q.points.iter().enumerate() {
        let composed = q.main_map.compose(g)?;
        let i = bpt_b
            .points
            .iter()
            .position(|p| p == &composed)
            .ok_or_else(|| Error::BadInput("quotient point does not transport".into()))?;
        if spectrum & 1 << i == 0 || seen & 1 << i != 0 {
            return Err(Error::BadInput(
                "quotient points do not biject onto the factoring points".into(),
            ));
        }
        seen |= 1 << i;
        transport[j] = i;
    }
    if seen != spectrum {
        return Err(Error::BadInput(
            "factoring points without a quotient preimage".into(),
        ));
    }
    // Transported opens match the subspace opens.
    let transported = |mask_q: u64| -> u64 {
        (0..bpt_q.points.len())
            .filter(|&j| mask_q & 1 << j != 0)
            .fold(0u64, |m, j| m | 1 << transport[j])
    };
    for a in b.plus().elements() {
        let sub = bpt_b.phi_plus[a] & spectrum;
        let via_q = transported(bpt_q.phi_plus[q.plus_map.apply(a)]);
        if sub != via_q {
            return Err(Error::BadInput(format!(
                "positive subspace open mismatch at generator {a}"
            )));
        }
    }
    for a in b.minus().elements() {
        let sub = bpt_b.phi_minus[a] & spectrum;
        let via_q = transported(bpt_q.phi_minus[q.minus_map.apply(a)]);
        if sub != via_q {
            return Err(Error::BadInput(format!(
                "negative subspace open mismatch at generator {a}"
            )));
        }
    }
    Ok(())
}

/// Results of the four spectra facts, with the first witness per failed
/// item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectraFacts {
    pub join_is_intersection: bool,
    pub open_spectrum_is_phi: bool,
    pub closed_spectrum_is_co_phi: bool,
    pub inequality_spectrum: bool,
    pub witnesses: Vec<String>,
}

impl SpectraFacts {
    pub fn all_hold(&self) -> bool {
        self.join_is_intersection
            && self.open_spectrum_is_phi
            && self.closed_spectrum_is_co_phi
            && self.inequality_spectrum
    }
}

pub fn spectra_facts(b: &Biframe, afin: &AssemblyFrame, bpt_b: &Bpt) -> SpectraFacts {
    let full = bpt_b.bispace.full();
    let mut witnesses = Vec::new();
    let spectra: Vec<u64> = afin
        .congruences
        .iter()
        .map(|c| quotient_spectrum(bpt_b, c))
        .collect();

    // (1) The spectrum of a join is the intersection of the spectra:
    // empty collection, every pair, and the whole collection. Finite
    // joins reduce to these.
    let mut join_is_intersection = spectra[afin.frame.bottom()] == full;
    if !join_is_intersection {
        witnesses.push("empty join: spectrum of the diagonal is not everything".into());
    }
    for i in 0..afin.frame.n() {
        for j in i..afin.frame.n() {
            let joined = afin.frame.join(i, j);
            if spectra[joined] != spectra[i] & spectra[j] {
                join_is_intersection = false;
                witnesses.push(format!("join of congruences {i} and {j}"));
            }
        }
    }
    let total = (0..afin.frame.n()).fold(afin.frame.bottom(), |acc, i| afin.frame.join(acc, i));
    let total_expected = spectra.iter().fold(full, |acc, &s| acc & s);
    if spectra[total] != total_expected {
        join_is_intersection = false;
        witnesses.push("join of the whole collection".into());
    }

    // (2) Spectrum of Δ(e±a) is φ±(a).
    let mut open_spectrum_is_phi = true;
    for a in b.plus().elements() {
        let c = crate::congruence::delta(b.main(), b.embed_plus().apply(a));
        if quotient_spectrum(bpt_b, &c) != bpt_b.phi_plus[a] {
            open_spectrum_is_phi = false;
            witnesses.push(format!("Δ(e⁺{a})"));
        }
    }
    for a in b.minus().elements() {
        let c = crate::congruence::delta(b.main(), b.embed_minus().apply(a));
        if quotient_spectrum(bpt_b, &c) != bpt_b.phi_minus[a] {
            open_spectrum_is_phi = false;
            witnesses.push(format!("Δ(e⁻{a})"));
        }
    }

    // (3) Spectrum of ∇(e±a) is the complement of φ±(a).
    let mut closed_spectrum_is_co_phi = true;
    for a in b.plus().elements() {
        let c = crate::congruence::nabla(b.main(), b.embed_plus().apply(a));
        if quotient_spectrum(bpt_b, &c) != full & !bpt_b.phi_plus[a] {
            closed_spectrum_is_co_phi = false;
            witnesses.push(format!("∇(e⁺{a})"));
        }
    }
    for a in b.minus().elements() {
        let c = crate::congruence::nabla(b.main(), b.embed_minus().apply(a));
        if quotient_spectrum(bpt_b, &c) != full & !bpt_b.phi_minus[a] {
            closed_spectrum_is_co_phi = false;
            witnesses.push(format!("∇(e⁻{a})"));
        }
    }

    // (4) Spectrum of a single forced inequality e⁺x∧e⁻x′ ≤ e⁺y∨e⁻y′.
    let mut inequality_spectrum = true;
    for x in b.plus().elements() {
        for x2 in b.minus().elements() {
            for y in b.plus().elements() {
                for y2 in b.minus().elements() {
                    let c = congruence_closure(
                        b.main(),
                        &[Seed::ForceLeq(b.wedge(x, x2), b.vee(y, y2))],
                    );
                    let expected = (full & !bpt_b.phi_plus[x])
                        | (full & !bpt_b.phi_minus[x2])
                        | bpt_b.phi_plus[y]
                        | bpt_b.phi_minus[y2];
                    if quotient_spectrum(bpt_b, &c) != expected {
                        inequality_spectrum = false;
                        witnesses.push(format!("inequality ({x},{x2}) ≤ ({y},{y2})"));
                    }
                }
            }
        }
    }

    SpectraFacts {
        join_is_intersection,
        open_spectrum_is_phi,
        closed_spectrum_is_co_phi,
        inequality_spectrum,
        witnesses,
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SkulaVariant {
    /// Positive opens ∪ negative closed sets / negative opens ∪ positive
    /// closed sets.
    Sk,
    /// Patch opens / both kinds of closed sets.
    Cf,
    /// Per-side Skula topologies.
    Pm,
}

impl SkulaVariant {
    pub fn name(self) -> &'static str {
        match self {
            SkulaVariant::Sk => "sk",
            SkulaVariant::Cf => "cf",
            SkulaVariant::Pm => "pm",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sk" => Ok(SkulaVariant::Sk),
            "cf" => Ok(SkulaVariant::Cf),
            "pm" => Ok(SkulaVariant::Pm),
            other => Err(Error::BadInput(format!("unknown skula variant: {other}"))),
        }
    }

    pub fn of_assembly(v: AssemblyVariant) -> SkulaVariant {
        match v {
            AssemblyVariant::Plain => SkulaVariant::Sk,
            AssemblyVariant::ClosedFitted => SkulaVariant::Cf,
            AssemblyVariant::PositiveNegative => SkulaVariant::Pm,
        }
    }
}

/// The three Skula bispaces of a bispace.
pub fn skula_variant(x: &FiniteBispace, variant: SkulaVariant) -> FiniteBispace {
    let co_plus = x.co(x.opens_plus());
    let co_minus = x.co(x.opens_minus());
    let gen = |fams: &[&[u64]]| {
        let sub: Vec<u64> = fams.iter().flat_map(|f| f.iter().copied()).collect();
        generate_topology(x.points(), &sub)
    };
    let (plus, minus) = match variant {
        SkulaVariant::Sk => (
            gen(&[x.opens_plus(), &co_minus]),
            gen(&[x.opens_minus(), &co_plus]),
        ),
        SkulaVariant::Cf => (
            gen(&[x.opens_plus(), x.opens_minus()]),
            gen(&[&co_plus, &co_minus]),
        ),
        SkulaVariant::Pm => (
            gen(&[x.opens_plus(), &co_plus]),
            gen(&[x.opens_minus(), &co_minus]),
        ),
    };
    FiniteBispace::with_labels(x.points(), plus, minus, x.labels().map(|l| l.to_vec()))
        .expect("generated topologies are closed")
}

/// The family of underlying sets of bisober bisubspaces: all
/// intersections of the basic sets φ⁺(a)ᶜ∪φ⁺(b)∪φ⁻(a′)ᶜ∪φ⁻(b′),
/// cross-checked against the spectra of the finitary congruences.
pub fn bisober_family(b: &Biframe, bpt_b: &Bpt, afin: &AssemblyFrame) -> Vec<u64> {
    let full = bpt_b.bispace.full();
    let mut basics: Vec<u64> = Vec::new();
    for a in b.plus().elements() {
        for bb in b.plus().elements() {
            for a2 in b.minus().elements() {
                for b2 in b.minus().elements() {
                    basics.push(
                        (full & !bpt_b.phi_plus[a])
                            | bpt_b.phi_plus[bb]
                            | (full & !bpt_b.phi_minus[a2])
                            | bpt_b.phi_minus[b2],
                    );
                }
            }
        }
    }
    basics.sort_unstable();
    basics.dedup();
    let mut family = vec![full];
    let mut head = 0;
    while head < family.len() {
        let cur = family[head];
        head += 1;
        for &basic in &basics {
            let s = cur & basic;
            if !family.contains(&s) {
                family.push(s);
            }
        }
    }
    family.sort_unstable();

    let mut via_quotients: Vec<u64> = afin
        .congruences
        .iter()
        .map(|c| quotient_spectrum(bpt_b, c))
        .collect();
    via_quotients.sort_unstable();
    via_quotients.dedup();
    assert_eq!(
        family, via_quotients,
        "intersections of basic sets must be exactly the quotient spectra"
    );
    family
}

/// The point bijection onto the spectrum of an assembly, with the
/// bihomeomorphism verdict for the matching Skula bispace.
pub struct SpectrumBijection {
    /// Index of the assembly point corresponding to each base point.
    pub table: Vec<usize>,
    pub holds: bool,
    pub mismatches: Vec<String>,
}

/// The canonical point of the assembly induced by a point of the base:
/// true on exactly the congruences the point does not factor through.
pub fn point_tilde(afin: &AssemblyFrame, point: &FrameHom) -> Vec<u16> {
    afin.congruences
        .iter()
        .map(|c| {
            let factors = (0..c.n()).all(|x| point.apply(x) == point.apply(c.max_of(x)));
            u16::from(!factors)
        })
        .collect()
}

pub fn spectrum_bijection(
    b: &Biframe,
    asm: &AssemblyResult,
    bpt_b: &Bpt,
) -> Result<SpectrumBijection> {
    let bpt_a = bpt(&asm.biframe)?;
    let mut mismatches = Vec::new();

    // Point bijection.
    let mut table = Vec::with_capacity(bpt_b.points.len());
    let mut used = vec![false; bpt_a.points.len()];
    for p in &bpt_b.points {
        let tilde = point_tilde(&asm.afin, p);
        match bpt_a.points.iter().position(|q| q.table() == tilde) {
            Some(j) => {
                if used[j] {
                    mismatches.push(format!("assembly point {j} hit twice"));
                }
                used[j] = true;
                table.push(j);
            }
            None => {
                mismatches.push(format!("induced map {tilde:?} is not a point of the assembly"));
                table.push(usize::MAX);
            }
        }
    }
    if used.iter().any(|&u| !u) {
        mismatches.push("assembly has points not induced by base points".into());
    }

    if !mismatches.is_empty() {
        return Ok(SpectrumBijection {
            table,
            holds: false,
            mismatches,
        });
    }

    let forward = |mask: u64| -> u64 {
        (0..bpt_b.points.len())
            .filter(|&i| mask & 1 << i != 0)
            .fold(0u64, |m, i| m | 1 << table[i])
    };
    let full = bpt_b.bispace.full();

    // Subbasis images per the variant-specific correspondence.
    let phi_a = |idx: u16| bpt_a.phi_main[idx as usize];
    for a in b.plus().elements() {
        let open = forward(bpt_b.phi_plus[a]);
        let co = forward(full & !bpt_b.phi_plus[a]);
        let (nabla_ok, delta_ok) = (phi_a(asm.nabla_plus[a]), phi_a(asm.delta_plus[a]));
        if open != nabla_ok {
            mismatches.push(format!("image of φ⁺({a}) is not φ(∇e⁺{a})"));
        }
        if co != delta_ok {
            mismatches.push(format!("image of φ⁺({a})ᶜ is not φ(Δe⁺{a})"));
        }
    }
    for a in b.minus().elements() {
        let open = forward(bpt_b.phi_minus[a]);
        let co = forward(full & !bpt_b.phi_minus[a]);
        if open != phi_a(asm.nabla_minus[a]) {
            mismatches.push(format!("image of φ⁻({a}) is not φ(∇e⁻{a})"));
        }
        if co != phi_a(asm.delta_minus[a]) {
            mismatches.push(format!("image of φ⁻({a})ᶜ is not φ(Δe⁻{a})"));
        }
    }

    // Full bihomeomorphism onto the Skula bispace of the base spectrum.
    let sk = skula_variant(&bpt_b.bispace, SkulaVariant::of_assembly(asm.variant));
    let mut fwd_plus: Vec<u64> = sk.opens_plus().iter().map(|&u| forward(u)).collect();
    fwd_plus.sort_unstable();
    if fwd_plus != bpt_a.bispace.opens_plus() {
        mismatches.push("positive topologies do not correspond".into());
    }
    let mut fwd_minus: Vec<u64> = sk.opens_minus().iter().map(|&u| forward(u)).collect();
    fwd_minus.sort_unstable();
    if fwd_minus != bpt_a.bispace.opens_minus() {
        mismatches.push("negative topologies do not correspond".into());
    }

    Ok(SpectrumBijection {
        table,
        holds: mismatches.is_empty(),
        mismatches,
    })
}

/// Naturality of the spectrum bijections: for every point g of the
/// target, precomposing its induced assembly point with the assembly map
/// equals the assembly point induced by g∘f.
pub fn naturality_check(
    f: &BiframeMap,
    src: &AssemblyResult,
    tgt: &AssemblyResult,
) -> Result<(bool, Vec<String>)> {
    let am = crate::assembly::assembly_map(f, src, tgt)?;
    let mut witnesses = Vec::new();
    for g in frame_points(f.target().main()) {
        let g_tilde = point_tilde(&tgt.afin, &g);
        let lhs: Vec<u16> = (0..src.afin.frame.n())
            .map(|i| g_tilde[am.main().apply(i)])
            .collect();
        let composed = f.main().compose(&g)?;
        let rhs = point_tilde(&src.afin, &composed);
        if lhs != rhs {
            witnesses.push(format!(
                "point {:?} breaks naturality: {lhs:?} vs {rhs:?}",
                g.table()
            ));
        }
    }
    Ok((witnesses.is_empty(), witnesses))
}
