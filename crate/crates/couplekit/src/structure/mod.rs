//! Structural theory: mapping norms for the two exact categories,
//! subcouples and quotients with the K-agreement dichotomy, retracts,
//! duality and the Hahn-Banach extension.

mod duality;
mod mapping;
mod subcouple;

pub use duality::{
    dual_k_identity, embed_linf, hahn_banach_extend, ratio as dual_ratio, DualityReport,
    Functional, LinfEmbedding,
};
pub use mapping::{
    operator_norm_b_lower, operator_norm_l, retract_check, side_operator_norm, LinearMap,
    NormBound, RetractCategory, RetractClause, RetractReport,
};
pub use subcouple::{
    is_b_quotient, is_b_subcouple, quotient_couple, BSubcoupleReport, BSubcoupleWitness,
    SubcoupleKind, SubcoupleSpec,
};

use crate::couple::Couple;
use crate::error::StructureError;

/// The coordinate injection of a subcouple into its ambient couple and the
/// coordinate projection back: the standard retraction pair, which passes
/// [`retract_check`] in the `(l, b)` categories for every coordinate
/// subcouple of a diagonal couple.
pub fn coordinate_retraction_pair(
    ambient: &Couple,
    keep: &[usize],
) -> Result<(LinearMap, LinearMap), StructureError> {
    let sub = ambient.restrict(keep)?;
    let n = ambient.len();
    let k = keep.len();
    let mut inj = vec![0.0; n * k];
    let mut proj = vec![0.0; k * n];
    for (col, &i) in keep.iter().enumerate() {
        inj[i * k + col] = 1.0;
        proj[col * n + i] = 1.0;
    }
    let alpha = LinearMap::new(inj, sub.clone(), ambient.clone())?;
    let beta = LinearMap::new(proj, ambient.clone(), sub)?;
    Ok((alpha, beta))
}
