//! The coating as a boundary operator on the layer surface.
//!
//! A membrane in generalized plane stress transmits to the layer the shear
//! traction `(s31, s32)|_{z=0} = -L v`, where `v` is the in-plane surface
//! displacement and `L` is the 2x2 second-order operator
//!
//! ```text
//! L_aa = hhat (b11 d_a^2 + b66 d_{3-a}^2)
//! L_ab = hhat (b12 + b66) d_a d_b          (a != b)
//! ```
//!
//! Its Fourier symbol at wavevector `xi` is negative semidefinite with
//! eigenvalue `-hhat b11 |xi|^2` along `xi` and `-hhat b66 |xi|^2` across it.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::material::MembraneConstants;
use crate::spectral::{Transform2d, VectorField};

/// Value of the symbol of `L` at a wavevector (Pa m^3 per unit length of
/// wavevector squared, i.e. Pa m once multiplied by `|xi|^2`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembraneSymbol {
    pub m11: f64,
    pub m12: f64,
    pub m22: f64,
    pub xi: [f64; 2],
}

impl MembraneSymbol {
    pub fn as_matrix(&self) -> [[f64; 2]; 2] {
        [[self.m11, self.m12], [self.m12, self.m22]]
    }

    /// `symbol * v` for a real or complex 2-vector.
    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            v[0] * self.m11 + v[1] * self.m12,
            v[0] * self.m12 + v[1] * self.m22,
        ]
    }
}

/// Symbol of `L` obtained by substituting `d/dy_a -> i xi_a`.
pub fn membrane_symbol(xi: [f64; 2], m: &MembraneConstants) -> MembraneSymbol {
    symbol_with_mixed(xi, xi[0] * xi[1], m)
}

fn symbol_with_mixed(xi: [f64; 2], mixed: f64, m: &MembraneConstants) -> MembraneSymbol {
    let h = m.hhat();
    let (b11, b12, b66) = (m.b11(), m.b12(), m.b66());
    MembraneSymbol {
        m11: -h * (b11 * xi[0] * xi[0] + b66 * xi[1] * xi[1]),
        m12: -h * (b12 + b66) * mixed,
        m22: -h * (b11 * xi[1] * xi[1] + b66 * xi[0] * xi[0]),
        xi,
    }
}

/// Shear traction `-L v` transmitted by the membrane to the layer, computed
/// mode by mode on the periodic grid of `v`.
pub fn apply_membrane_traction(v: &VectorField, m: &MembraneConstants) -> Result<VectorField> {
    let grid = *v.grid();
    let t = Transform2d::new(grid);
    let s1 = t.forward(v.c1());
    let s2 = t.forward(v.c2());
    let traction = |row: usize| {
        s1.zip_map(&s2, |mode, a, b| {
            let sym = symbol_with_mixed(mode.xi, mode.mixed(), m);
            let [l1, l2] = sym.apply([a, b]);
            -[l1, l2][row]
        })
    };
    let r1 = t.inverse(&traction(0));
    let r2 = t.inverse(&traction(1));
    VectorField::new(grid, r1, r2).map_err(|_| Error::NonFinite("membrane traction"))
}

/// Radial shear traction of an axisymmetric membrane,
/// `s_zr = -hhat b11 (v'' + v'/r - v/r^2)`, by three-point finite differences
/// on a (possibly nonuniform) radial grid. End nodes use the one-sided
/// three-point stencil of their neighbors. The axis `r = 0` is not part of
/// the domain.
pub fn axisymmetric_traction(vr: &[f64], r: &[f64], m: &MembraneConstants) -> Result<Vec<f64>> {
    let n = r.len();
    if n < 3 {
        return Err(invalid("r", format!("need at least 3 nodes, got {n}")));
    }
    if vr.len() != n {
        return Err(Error::FieldMismatch(format!(
            "{} radial samples for {} nodes",
            vr.len(),
            n
        )));
    }
    if !(r[0] > 0.0) || r.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("r", "must be strictly increasing with r[0] > 0"));
    }
    if vr.iter().chain(r).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("radial profile"));
    }
    let stiffness = m.tension_stiffness();
    let out = (0..n)
        .map(|i| {
            let c = i.clamp(1, n - 2);
            let (d1, d2) = quadratic_derivatives(
                [r[c - 1], r[c], r[c + 1]],
                [vr[c - 1], vr[c], vr[c + 1]],
                r[i],
            );
            -stiffness * (d2 + d1 / r[i] - vr[i] / (r[i] * r[i]))
        })
        .collect();
    Ok(out)
}

/// First and second derivative at `x` of the parabola through three points.
fn quadratic_derivatives(x: [f64; 3], y: [f64; 3], at: f64) -> (f64, f64) {
    let d01 = x[0] - x[1];
    let d02 = x[0] - x[2];
    let d12 = x[1] - x[2];
    let w0 = y[0] / (d01 * d02);
    let w1 = -y[1] / (d01 * d12);
    let w2 = y[2] / (d02 * d12);
    let first = w0 * ((at - x[1]) + (at - x[2]))
        + w1 * ((at - x[0]) + (at - x[2]))
        + w2 * ((at - x[0]) + (at - x[1]));
    let second = 2.0 * (w0 + w1 + w2);
    (first, second)
}

/// Thickness-averaged in-plane membrane stresses from the surface strains
/// (tensorial shear strain `e12`).
pub fn averaged_membrane_stress(
    m: &MembraneConstants,
    e11: f64,
    e22: f64,
    e12: f64,
) -> (f64, f64, f64) {
    (
        m.b11() * e11 + m.b12() * e22,
        m.b12() * e11 + m.b11() * e22,
        2.0 * m.b66() * e12,
    )
}
