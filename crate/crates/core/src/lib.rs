//! Exact-arithmetic computations of Kodaira-Spencer invariants on smooth
//! plane curves: canonical rings, cup products with Kodaira-Spencer classes,
//! the `α^(2)` pairing, the `([ξ], [φ])`-filtrations with their `sl(2)` data,
//! and quadrics through the canonical curve with exact certificates.
//!
//! Everything is generic over a [`Field`]: a prime field `F_p` or `Q`.

pub mod cohomology;
pub mod curve;
pub mod error;
pub mod field;
pub mod filtration;
pub mod linalg;
pub mod poly;
pub mod quadrics;
pub mod series;
pub mod strata;

pub use cohomology::{
    cup_matrix, ks_annihilating, ks_from_tails, realize_functional, schiffer, CanonicalRing, CupMatrix, KSClass, MlContext,
    MlOptions, RationalFn, TailEntry, TailRep,
};
pub use curve::{CurvePoint, FormSpace, PlaneCurve, SmoothnessMode};
pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use filtration::{
    alpha2_table, gpp_check, nilpotent_and_sl2, splitting_shift, synthetic_table, verify_cocycle, xi_phi_filtration,
    Alpha2Table, Alpha2Values, GppReport, GppVerdict, Sl2Report, XiPhiFiltration,
};
pub use linalg::{Matrix, Subspace, Vector};
pub use poly::{Form, Poly};
pub use quadrics::{hankel_data, ic2_check, psi_string, quadrics_qij, triple_quadric, HankelData, PsiString, QuadricCert};
pub use series::LaurentSeries;
pub use strata::{rank1_geometry, secant_membership, stratum, Rank1Geometry, SecantMembership, StratumReport};
