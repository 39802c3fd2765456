//! Finite frames, frame congruences, finitary biframes, their assemblies
//! and Skula bispaces, plus exhaustive small-instance verification suites.

pub mod error;

/// Size caps shared across constructions. `FRM_SIZE_CAP` overrides the
/// element-count caps (coproducts and congruence lattices).
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    /// Cap on coproduct element counts.
    pub coproduct: usize,
    /// Brute-force congruence-enumeration bound.
    pub oracle: usize,
    /// Frame-size bound for corpus frames.
    pub frame: usize,
    /// Cap on congruence-lattice sizes.
    pub assembly: usize,
    /// Side-size bound for presentation checks.
    pub presentation_side: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            coproduct: 4096,
            oracle: 7,
            frame: 8,
            assembly: 64,
            presentation_side: 4,
        }
    }
}

impl Caps {
    /// Defaults with the `FRM_SIZE_CAP` environment override applied.
    pub fn from_env() -> Caps {
        let mut caps = Caps::default();
        if let Some(v) = std::env::var("FRM_SIZE_CAP")
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
        {
            caps.coproduct = v;
            caps.assembly = v;
        }
        caps
    }
}
pub mod lattice;
pub mod coproduct;
pub mod enumerate;
pub mod congruence;
pub mod biframe;
pub mod bimap;
pub mod assembly;
pub mod presentation;
pub mod bispace;
pub mod axioms;
pub mod io;
pub mod corpus;
pub mod suite;

pub use error::{Error, Result};
