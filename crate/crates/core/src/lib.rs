//! Combinatorial tools for deciding whether a finite graded poset is a CW
//! poset: order complexes, Möbius functions, exact simplicial homology,
//! shellings, and rank-recursive sphere certification of intervals.

pub mod certify;
pub mod complex;
pub mod generators;
pub mod homology;
pub mod invariants;
pub mod io;
pub mod iso;
pub mod poset;
pub mod shelling;

pub use certify::{cw_certify, sphere_recognize_lowdim, Certificate, CertifyBudget, CwVerdict, Route, Status};
pub use complex::{face_poset, order_complex, Face, SimplicialComplex};
pub use iso::IsoOutcome;
pub use poset::{IntervalSpec, Poset, PosetError};
