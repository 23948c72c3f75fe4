//! Powers of `2iπ` contributed by each stage of an evaluation.
//!
//! Every evaluator reports the power of `π` it actually produced; the table
//! says what that power must be, and the stages of one evaluation must sum
//! to zero.

use crate::error::{IndexError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    /// `Λ_s = (2iπ)^{−dim M(s)}·Â²/D_s`.
    Lambda,
    /// `∫_{T*M} Par(ω)` over the whole cotangent bundle.
    ParCotangent,
    /// `∫_M Par(κ)` for a one-form on `M` itself.
    ParBase,
    /// `∫_{T*_x M} Ch(σ)` of a Bott-type symbol over a full cotangent fiber.
    ChernCotangent,
    /// Fiber integral of `Ch(σ_V)` over the complex fiber of `T*C^m`.
    ChernThom,
    /// `(2iπ)^{−dim M/2}` in front of `∫_M Â·Par(κ)` for spinors.
    Spin,
    /// `∫_{k*} Par(−ν)` over the covector of `K` alone.
    ParVertical,
    /// `(2iπ)^{−rank K}` in front of the free-action reduction.
    FreeAction,
    /// `vol(K, dX) = (2π)^{rank K}`.
    Volume,
}

/// Exponent of `2iπ` (equivalently of `π`) for a stage on a fixed set of real dimension `dim`.
pub fn two_i_pi_power(dim: usize, stage: Stage) -> i32 {
    let d = dim as i32;
    match stage {
        Stage::Lambda => -d,
        Stage::ParCotangent => d,
        Stage::ParBase => d / 2,
        Stage::ChernCotangent => d,
        Stage::ChernThom => d / 2,
        Stage::Spin => -d / 2,
        Stage::ParVertical => 0,
        Stage::FreeAction => -d,
        Stage::Volume => d,
    }
}

/// Check that the reported powers match the table and cancel.
pub fn balance(dim: usize, reported: &[(Stage, i32)]) -> Result<()> {
    let mut total = 0;
    for (stage, p) in reported {
        let want = two_i_pi_power(dim, *stage);
        if *p != want {
            return Err(IndexError::ReductionUnavailable(format!("{stage:?} produced π^{p}, expected π^{want} on a fixed set of dimension {dim}")));
        }
        total += p;
    }
    if total != 0 {
        return Err(IndexError::ReductionUnavailable(format!("powers of 2iπ do not cancel: total {total}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pipelines_balance() {
        // zero operator on S¹, Atiyah on C, Bott on R², spin on C, free action with K = S¹
        assert!(balance(1, &[(Stage::Lambda, -1), (Stage::ParCotangent, 1)]).is_ok());
        assert!(balance(2, &[(Stage::Lambda, -2), (Stage::ChernThom, 1), (Stage::ParBase, 1)]).is_ok());
        assert!(balance(2, &[(Stage::Lambda, -2), (Stage::ChernCotangent, 2)]).is_ok());
        assert!(balance(2, &[(Stage::Spin, -1), (Stage::ParBase, 1)]).is_ok());
        assert!(balance(1, &[(Stage::FreeAction, -1), (Stage::Volume, 1)]).is_ok());
        assert!(balance(1, &[(Stage::Lambda, -1)]).is_err());
        assert!(balance(2, &[(Stage::Lambda, -1), (Stage::ParBase, 1)]).is_err());
    }
}
