//! The numerical tolerance ledger.
//!
//! Every threshold the library compares against lives here, so that a report
//! can echo exactly which values were in force.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Incidence and coplanarity, relative to the largest vertex norm.
    pub geom: f64,
    /// Kernel residual `M Φᵀ ≈ 0`.
    pub kern: f64,
    /// Eigenvalue sign and zero decisions, relative to the largest |λ|.
    pub eig: f64,
    /// Gap rule for turning real colors into classes, relative.
    pub color: f64,
    /// Vertex matching `‖T v_j − v_σ(j)‖ ≤ ε ‖v_σ(j)‖`.
    pub matching: f64,
    /// Orthogonality `‖TᵀT − I‖_max`.
    pub orth: f64,
    /// `‖ΦΦ† − I‖_max`.
    pub pinv: f64,
    /// Finite-difference step around `c = 1`.
    pub fd_step: f64,
    /// Agreement required between steps `h` and `h/2`, and between the
    /// finite-difference and closed-form Izmestiev matrices.
    pub fd_agree: f64,
    /// Half-width of the trust region for generalized dual volumes.
    pub trust_region: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            geom: 1e-9,
            kern: 1e-8,
            eig: 1e-8,
            color: 1e-8,
            matching: 1e-8,
            orth: 1e-8,
            pinv: 1e-10,
            fd_step: 2e-3,
            fd_agree: 1e-4,
            trust_region: 0.05,
        }
    }
}

impl Tolerances {
    /// Apply an override of the form `name=value`.
    pub fn set(&mut self, assignment: &str) -> Result<(), String> {
        let (name, value) = assignment
            .split_once('=')
            .ok_or_else(|| format!("expected name=value, got {assignment:?}"))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("invalid number in {assignment:?}"))?;
        if !(value.is_finite() && value > 0.0) {
            return Err(format!("tolerance {name} must be positive and finite"));
        }
        let slot = match name.trim() {
            "geom" => &mut self.geom,
            "kern" => &mut self.kern,
            "eig" => &mut self.eig,
            "color" => &mut self.color,
            "matching" => &mut self.matching,
            "orth" => &mut self.orth,
            "pinv" => &mut self.pinv,
            "fd_step" => &mut self.fd_step,
            "fd_agree" => &mut self.fd_agree,
            "trust_region" => &mut self.trust_region,
            other => return Err(format!("unknown tolerance {other:?}")),
        };
        *slot = value;
        Ok(())
    }
}

/// Bounds on the combinatorial search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    pub max_vertices: usize,
    pub max_group_order: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_vertices: 64,
            max_group_order: 1_000_000,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let mut t = Tolerances::default();
        t.set("color=1e-6").unwrap();
        assert_eq!(t.color, 1e-6);
        assert!(t.set("bogus=1").is_err());
        assert!(t.set("geom=-1").is_err());
        assert!(t.set("geom").is_err());
    }
}
