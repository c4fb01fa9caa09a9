//! Exact symbolic engine for non-commutative (twisted) corepresentations of
//! quantum matrix bialgebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`]: the ground field of rational functions in deformation parameters.
//! * [`nc`]: the free associative algebra on matrix coordinates and plane coordinates.
//! * [`tensor`]: index calculus for the structure tensors (B, theta, rho, R).
//! * [`bialgebra`]: coproduct, counit, convolution of linear forms and cocycle twists.
//! * [`corep`]: theta validation, the M matrix, relation ideals and comodule checks.
//! * [`rewrite`]: oriented quadratic rewriting, confluence and PBW counts.
//! * [`qplane`]: the multiparametric quantum-plane example end to end.
//! * [`integrability`]: spectral labels and trace-commutation identities.
//! * [`input`], [`report`] and [`suite`]: algebra definition files, verification reports and the named commands that produce them.

pub mod bialgebra;
pub mod corep;
pub mod input;
pub mod integrability;
pub mod linalg;
pub mod nc;
pub mod qplane;
pub mod report;
pub mod rewrite;
pub mod scalar;
pub mod suite;
pub mod tensor;

pub use nc::{Generator, NcPoly, RelationSet, Word};
pub use scalar::{ParamSet, Scalar, ScalarError, Var};
pub use tensor::Tensor;

/// The shipped example inputs.
pub mod golden {
    pub const QPLANE_QPRS: &str = include_str!("../../../data/qplane_qprs.alg");
    pub const QPLANE_QP: &str = include_str!("../../../data/qplane_qp.alg");
    pub const QPLANE_FRT: &str = include_str!("../../../data/qplane_frt.alg");
    pub const SPECTRAL_DEMO: &str = include_str!("../../../data/spectral_demo.alg");

    pub const ALL: [(&str, &str); 4] = [
        ("qplane_qprs", QPLANE_QPRS),
        ("qplane_qp", QPLANE_QP),
        ("qplane_frt", QPLANE_FRT),
        ("spectral_demo", SPECTRAL_DEMO),
    ];

    /// Looks up a shipped input by name, with or without the `.alg` extension.
    pub fn by_name(name: &str) -> Option<&'static str> {
        let stem = name.strip_suffix(".alg").unwrap_or(name);
        ALL.iter().find(|(n, _)| *n == stem).map(|(_, t)| *t)
    }
}
