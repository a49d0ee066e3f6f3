//! Transversely isotropic elastic constants.
//!
//! The symmetry axis is `z` (normal to the layer). Stresses and tensorial
//! strains are related by
//!
//! ```text
//! | s11 |   | a11 a12 a13  0     0     0    | | e11 |
//! | s22 |   | a12 a11 a13  0     0     0    | | e22 |
//! | s33 | = | a13 a13 a33  0     0     0    | | e33 |
//! | s23 |   |  0   0   0  2a44   0     0    | | e23 |
//! | s13 |   |  0   0   0   0    2a44   0    | | e13 |
//! | s12 |   |  0   0   0   0     0    2a66  | | e12 |
//! ```
//!
//! with `2 a66 = a11 - a12`. All moduli are in Pa.

use crate::error::{invalid, Error, Result};

/// The five independent moduli of a transversely isotropic solid.
///
/// `a66` is always derived from `a11` and `a12`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticConstants {
    a11: f64,
    a12: f64,
    a13: f64,
    a33: f64,
    a44: f64,
}

impl ElasticConstants {
    /// Builds and validates a set of moduli.
    pub fn new(a11: f64, a12: f64, a13: f64, a33: f64, a44: f64) -> Result<Self> {
        Self::unchecked(a11, a12, a13, a33, a44).validate()
    }

    /// Builds a set of moduli without any admissibility check.
    pub fn unchecked(a11: f64, a12: f64, a13: f64, a33: f64, a44: f64) -> Self {
        Self {
            a11,
            a12,
            a13,
            a33,
            a44,
        }
    }

    /// Isotropic solid with Young's modulus `e` and Poisson's ratio `nu`.
    ///
    /// `nu = 0.5` is rejected because the bulk modulus is unbounded there;
    /// near-incompressible behavior is modeled with values such as 0.4999.
    pub fn from_isotropic(e: f64, nu: f64) -> Result<Self> {
        if !(e.is_finite() && e > 0.0) {
            return Err(invalid(
                "E",
                format!("must be positive and finite, got {e}"),
            ));
        }
        if !(nu.is_finite() && nu > -1.0 && nu < 0.5) {
            return Err(invalid(
                "nu",
                format!("must lie in (-1, 0.5), got {nu}; use a near-incompressible value instead of 0.5"),
            ));
        }
        let lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
        let mu = e / (2.0 * (1.0 + nu));
        Self::new(lambda + 2.0 * mu, lambda, lambda, lambda + 2.0 * mu, mu)
    }

    pub fn a11(&self) -> f64 {
        self.a11
    }
    pub fn a12(&self) -> f64 {
        self.a12
    }
    pub fn a13(&self) -> f64 {
        self.a13
    }
    pub fn a33(&self) -> f64 {
        self.a33
    }
    /// Out-of-plane shear modulus.
    pub fn a44(&self) -> f64 {
        self.a44
    }
    /// In-plane shear modulus, `(a11 - a12) / 2`.
    pub fn a66(&self) -> f64 {
        0.5 * (self.a11 - self.a12)
    }

    /// Checks positive definiteness of the stiffness with zero slack.
    pub fn validate(self) -> Result<Self> {
        self.validate_with_slack(0.0)
    }

    /// Checks positive definiteness, requiring every inequality to hold with
    /// a margin of `slack` times the largest modulus (squared for the
    /// quadratic condition).
    pub fn validate_with_slack(self, slack: f64) -> Result<Self> {
        let moduli = [self.a11, self.a12, self.a13, self.a33, self.a44];
        if moduli.iter().any(|m| !m.is_finite()) {
            return Err(Error::NonFinite("elastic constants"));
        }
        if !(slack >= 0.0) {
            return Err(invalid("slack", "must be non-negative"));
        }
        let scale = moduli.iter().fold(0.0_f64, |acc, m| acc.max(m.abs()));
        let margin = slack * scale;

        if !(self.a44 > margin) {
            return Err(Error::Inadmissible(format!(
                "a44 > 0 violated (a44 = {})",
                self.a44
            )));
        }
        if !(self.a11 - self.a12.abs() > margin) {
            return Err(Error::Inadmissible(format!(
                "a11 > |a12| violated (a11 = {}, a12 = {})",
                self.a11, self.a12
            )));
        }
        // a66 > 0 follows from a11 > |a12|
        let lhs = self.a33 * (self.a11 + self.a12);
        let rhs = 2.0 * self.a13 * self.a13;
        if !(self.a33 > 0.0 && lhs - rhs > margin * scale) {
            return Err(Error::Inadmissible(format!(
                "a33 (a11 + a12) > 2 a13^2 violated ({lhs} <= {rhs})"
            )));
        }
        Ok(self)
    }

    /// The 6x6 stiffness in the tensorial-strain ordering of the module docs.
    pub fn stiffness_matrix(&self) -> [[f64; 6]; 6] {
        let mut c = [[0.0; 6]; 6];
        c[0][0] = self.a11;
        c[0][1] = self.a12;
        c[0][2] = self.a13;
        c[1][0] = self.a12;
        c[1][1] = self.a11;
        c[1][2] = self.a13;
        c[2][0] = self.a13;
        c[2][1] = self.a13;
        c[2][2] = self.a33;
        c[3][3] = 2.0 * self.a44;
        c[4][4] = 2.0 * self.a44;
        c[5][5] = 2.0 * self.a66();
        c
    }

    /// `(a13 / a33, a44 / a33)`. These tend to 1 and 0 in the incompressible
    /// limit; callers use them to pick a model branch.
    pub fn incompressible_limit_ratios(&self) -> (f64, f64) {
        (self.a13 / self.a33, self.a44 / self.a33)
    }
}

/// Plane-stress reduced in-plane stiffness of a thin coating, plus its
/// thickness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembraneConstants {
    b11: f64,
    b12: f64,
    hhat: f64,
}

impl MembraneConstants {
    /// Reduced moduli given directly.
    pub fn from_reduced(b11: f64, b12: f64, hhat: f64) -> Result<Self> {
        if ![b11, b12, hhat].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("membrane constants"));
        }
        if !(hhat > 0.0) {
            return Err(invalid("hhat", format!("must be positive, got {hhat}")));
        }
        if !(b11 > 0.0 && b11 > b12.abs()) {
            return Err(Error::Inadmissible(format!(
                "b11 > |b12| > 0 violated (b11 = {b11}, b12 = {b12})"
            )));
        }
        Ok(Self { b11, b12, hhat })
    }

    /// Eliminates the transverse strain of a coating in generalized plane
    /// stress: `b11 = a11 - a13^2/a33`, `b12 = a12 - a13^2/a33`.
    pub fn reduce_plane_stress(coating: &ElasticConstants, hhat: f64) -> Result<Self> {
        let c = coating.validate()?;
        let coupling = c.a13 * c.a13 / c.a33;
        Self::from_reduced(c.a11 - coupling, c.a12 - coupling, hhat)
    }

    pub fn b11(&self) -> f64 {
        self.b11
    }
    pub fn b12(&self) -> f64 {
        self.b12
    }
    pub fn b66(&self) -> f64 {
        0.5 * (self.b11 - self.b12)
    }
    pub fn hhat(&self) -> f64 {
        self.hhat
    }

    /// Longitudinal tension stiffness `hhat * b11` (Pa m).
    pub fn tension_stiffness(&self) -> f64 {
        self.hhat * self.b11
    }

    /// Copy with both reduced moduli multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::from_reduced(self.b11 * factor, self.b12 * factor, self.hhat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{Matrix6, SymmetricEigen};
    use proptest::prelude::*;

    fn eigenvalues(c: &ElasticConstants) -> Vec<f64> {
        let s = c.stiffness_matrix();
        let m = Matrix6::from_fn(|i, j| s[i][j]);
        SymmetricEigen::new(m).eigenvalues.iter().copied().collect()
    }

    #[test]
    fn accepts_admissible_constants() {
        let c = ElasticConstants::new(5.0, 1.0, 2.0, 4.0, 1.0).unwrap();
        assert_eq!(c.a66(), 2.0);
        assert!(eigenvalues(&c).iter().all(|&l| l > 0.0));
    }

    #[test]
    fn rejects_a12_exceeding_a11() {
        let err = ElasticConstants::new(1.0, 1.5, 0.0, 1.0, 1.0).unwrap_err();
        assert!(err.to_string().contains("a11 > |a12|"), "{err}");
    }

    #[test]
    fn rejects_rank_deficient_coupling() {
        let c = 3.0;
        let err = ElasticConstants::new(c, 0.0, c, c, 1.0).unwrap_err();
        assert!(
            err.to_string().contains("a33 (a11 + a12) > 2 a13^2"),
            "{err}"
        );
    }

    #[test]
    fn rejects_non_positive_shear_and_nan() {
        assert!(ElasticConstants::new(5.0, 1.0, 2.0, 4.0, 0.0).is_err());
        assert!(matches!(
            ElasticConstants::new(5.0, f64::NAN, 2.0, 4.0, 1.0),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn slack_tightens_validation() {
        let c = ElasticConstants::unchecked(5.0, 4.9, 0.0, 4.0, 1.0);
        assert!(c.validate().is_ok());
        assert!(c.validate_with_slack(0.05).is_err());
    }

    #[test]
    fn isotropic_moduli() {
        let c = ElasticConstants::from_isotropic(1.0, 0.0).unwrap();
        assert_eq!((c.a11(), c.a33(), c.a12(), c.a13()), (1.0, 1.0, 0.0, 0.0));
        assert_eq!((c.a44(), c.a66()), (0.5, 0.5));

        let c = ElasticConstants::from_isotropic(1.0, 0.3).unwrap();
        assert_relative_eq!(c.a12(), 0.576_923_076_923_077, max_relative = 1e-14);
        assert_relative_eq!(c.a44(), 0.384_615_384_615_385, max_relative = 1e-14);
        assert_relative_eq!(c.a11(), 1.346_153_846_153_846, max_relative = 1e-14);
        assert_relative_eq!(c.a66(), c.a44(), max_relative = 1e-14);
    }

    #[test]
    fn isotropic_rejects_incompressible_and_bad_modulus() {
        assert!(ElasticConstants::from_isotropic(1.0, 0.5).is_err());
        assert!(ElasticConstants::from_isotropic(-1.0, 0.3).is_err());
        assert!(ElasticConstants::from_isotropic(1.0, -1.0).is_err());
    }

    #[test]
    fn plane_stress_reduction() {
        let c = ElasticConstants::new(10.0, 4.0, 0.0, 7.0, 1.0).unwrap();
        let m = MembraneConstants::reduce_plane_stress(&c, 1e-3).unwrap();
        assert_eq!((m.b11(), m.b12(), m.b66()), (10.0, 4.0, 3.0));

        let c = ElasticConstants::new(5.0, 1.0, 2.0, 4.0, 1.0).unwrap();
        let m = MembraneConstants::reduce_plane_stress(&c, 1e-3).unwrap();
        assert_eq!((m.b11(), m.b12(), m.b66()), (4.0, 0.0, 2.0));

        // E / (1 - nu^2) for an isotropic coating
        let c = ElasticConstants::from_isotropic(1.0, 0.3).unwrap();
        let m = MembraneConstants::reduce_plane_stress(&c, 1e-3).unwrap();
        assert_relative_eq!(m.b11(), 1.0 / (1.0 - 0.09), max_relative = 1e-14);
        assert_relative_eq!(m.b12(), 0.3 / (1.0 - 0.09), max_relative = 1e-14);
    }

    #[test]
    fn membrane_rejects_bad_input() {
        assert!(MembraneConstants::from_reduced(1.0, 0.2, 0.0).is_err());
        assert!(MembraneConstants::from_reduced(1.0, 1.2, 1e-3).is_err());
        assert!(MembraneConstants::from_reduced(-1.0, 0.0, 1e-3).is_err());
    }

    #[test]
    fn limit_ratios() {
        let c = ElasticConstants::from_isotropic(1.0, 0.0).unwrap();
        assert_eq!(c.incompressible_limit_ratios(), (0.0, 0.5));

        // isotropic: a13/a33 = nu/(1-nu), a44/a33 = (1-2nu)/(2(1-nu))
        let c = ElasticConstants::from_isotropic(1.0, 0.499).unwrap();
        let (r13, r44) = c.incompressible_limit_ratios();
        assert_relative_eq!(r13, 0.499 / 0.501, max_relative = 1e-12);
        assert_relative_eq!(r44, 0.002 / 1.002, max_relative = 1e-9);
        assert_relative_eq!(r13, 0.996_007_984_031_936, max_relative = 1e-12);
        assert_relative_eq!(r44, 0.001_996_007_984_031_936, max_relative = 1e-9);
    }

    #[test]
    fn limit_ratios_monotone_towards_incompressibility() {
        let nus = [0.3, 0.4, 0.45, 0.49, 0.499, 0.4999];
        let ratios: Vec<_> = nus
            .iter()
            .map(|&nu| {
                ElasticConstants::from_isotropic(1.0, nu)
                    .unwrap()
                    .incompressible_limit_ratios()
            })
            .collect();
        for pair in ratios.windows(2) {
            assert!(pair[1].0 > pair[0].0);
            assert!(pair[1].1 < pair[0].1);
        }
        let (r13, r44) = *ratios.last().unwrap();
        assert!(1.0 - r13 < 1e-3 && r44 < 1e-3);
    }

    fn admissible() -> impl Strategy<Value = ElasticConstants> {
        (
            0.1..10.0f64,
            -0.95..0.95f64,
            -0.99..0.99f64,
            0.1..10.0f64,
            0.01..10.0f64,
        )
            .prop_map(|(a11, r12, r13, a33, a44)| {
                let a12 = r12 * a11;
                // |a13| < sqrt(a33 (a11 + a12) / 2)
                let a13 = r13 * (a33 * (a11 + a12) / 2.0).sqrt();
                ElasticConstants::unchecked(a11, a12, a13, a33, a44)
            })
    }

    proptest! {
        #[test]
        fn validated_constants_have_positive_spectrum(c in admissible()) {
            if let Ok(c) = c.validate() {
                prop_assert!(eigenvalues(&c).iter().all(|&l| l > 0.0));
            }
        }

        #[test]
        fn reduction_preserves_in_plane_shear(c in admissible()) {
            if let Ok(c) = c.validate() {
                let m = MembraneConstants::reduce_plane_stress(&c, 1.0).unwrap();
                prop_assert!((m.b11() - m.b12() - (c.a11() - c.a12())).abs()
                    <= 1e-12 * c.a11().abs().max(1.0));
                prop_assert!((m.b66() - c.a66()).abs() <= 1e-12 * c.a11().abs().max(1.0));
            }
        }

        #[test]
        fn isotropic_always_validates(e in 1e-3..1e9f64, nu in -0.99..0.4999f64) {
            prop_assert!(ElasticConstants::from_isotropic(e, nu).is_ok());
        }
    }
}
