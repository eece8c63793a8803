//! Exact computational commutative algebra: polynomial arithmetic, Groebner
//! bases, finitely presented modules and their resolutions, canonical
//! modules with rigidity checks, and traces of top differential forms.

pub mod algebra;
pub mod duality;
pub mod error;
pub mod forms;
pub mod groebner;
pub mod matrix;
pub mod module;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod scalar;
pub mod smooth;
pub mod suite;

pub use algebra::{
    algebra_from_strs, make_algebra, make_hom, make_hom_strs, Algebra, AlgebraHom,
    AlgebraPresentation, Tri,
};
pub use duality::{canonical_module, rigidity_check, CanonicalData, ExtTable, RigidityReport};
pub use error::{Error, Result};
pub use forms::{SmoothTower, TopForm};
pub use groebner::{
    buchberger, hilbert_series, krull_dimension, normal_form, syzygy_matrix, GroebnerBasis,
    HilbertSeries,
};
pub use module::{
    complex_cohomology, ext_module, free_resolution, hom_module, iso_probe, minimal_betti,
    tor_module, FPModule, FreeComplex, IsoVerdict,
};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{PolyRing, Polynomial};
pub use scalar::{Field, Scalar};
