//! Asymptotic local-indentation models of a thin coated layer.
//!
//! A layer of thickness `h` is bonded to a rigid substrate at `z = h` and
//! loaded at `z = 0` by a normal pressure `p(y)` through a thin membrane.
//! For loads varying on a length `h* = h / eps` the surface deflection
//! `w0(y) = w(y, 0)` admits the following leading-order models, all written
//! in dimensional form:
//!
//! * compressible (Winkler): `w0 = (h / a33) p`;
//! * compressible, two terms:
//!   `w0 = (h / a33) p - [(a13 + a44)^2 - 4 a44^2] h^3 / (12 a33^2 a44) lap(p)
//!         + (a13 - a44) / (2 a33) h div(v0)`;
//! * incompressible: `w0 = -h^3 / (12 a44) lap(p) + (h / 2) div(v0)`.
//!
//! The surface tangential displacement `v0` solves
//! `h L v0 - a44 v0 = c h^2 grad(p)` with `L` the membrane operator and
//! `c = (a13 - a44) / (2 a33)` (compressible) or `c = 1/2` (incompressible).
//!
//! # From stretched to physical variables
//!
//! The expansion is `v = eps^2 v1(eta, zeta) + ...`,
//! `w = eps w0(eta, zeta) + eps^3 w2(eta, zeta) + ...` with `eta = y / h*`,
//! `zeta = z / h` and a membrane operator scaled as `L = L* / eps`. Since
//! `L*(grad_eta) = h*^2 L*(grad_y)`, one has `(1/h*) L*(grad_eta) = h L(grad_y)`.
//! Multiplying the plane equation for `V1 = v1(., 0)` by `eps^2` and using
//! `h* grad_eta = h*^2 grad_y` gives the equation for `v0 = eps^2 V1` above.
//! In the deflection, `eps w0(0) = h p / a33`, the `lap_eta p` term of
//! `eps^3 w2(0)` carries `eps^3 h* lap_eta = h^3 lap_y`, and
//! `eps^3 div_eta V1 = h div_y v0`.
//!
//! # Single-mode kernels
//!
//! For `p = exp(i xi . y)` with `|xi| = k` every model is a multiplier. With
//! `s = h hhat b11 k^2 / a44` and `q = h^3 k^2 / (12 a44)`:
//!
//! * incompressible: `q (1 + 3 / (1 + s))`, i.e. `4q` uncoated and `q`
//!   under an inextensible coating;
//! * two-term compressible:
//!   `h/a33 + [(a13 + a44)^2 - 4 a44^2] h^3 k^2 / (12 a33^2 a44)
//!    + c^2 h^3 k^2 / (a44 (1 + s))`.
//!
//! The branch (compressible or incompressible) is always the caller's
//! choice; [`ElasticConstants::incompressible_limit_ratios`] can guide it.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::material::{ElasticConstants, MembraneConstants};
use crate::membrane::apply_membrane_traction;
use crate::spectral::{divergence, gradient, laplacian, ScalarField, Transform2d, VectorField};

/// Surface condition imposed by the coating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coating {
    /// Traction-free tangential surface, equivalent to a membrane of zero
    /// stiffness.
    None,
    Membrane(MembraneConstants),
    /// Limit of infinite membrane stiffness: no tangential surface motion.
    Inextensible,
}

/// Layer thickness, layer constants and coating.
///
/// The membrane thickness is assumed small compared with `h`; this is not
/// checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerSystem {
    h: f64,
    layer: ElasticConstants,
    coating: Coating,
}

impl LayerSystem {
    pub fn new(h: f64, layer: ElasticConstants, coating: Coating) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(invalid("h", format!("must be positive, got {h}")));
        }
        let layer = layer.validate()?;
        Ok(Self { h, layer, coating })
    }

    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn layer(&self) -> &ElasticConstants {
        &self.layer
    }
    pub fn coating(&self) -> &Coating {
        &self.coating
    }

    pub fn with_coating(&self, coating: Coating) -> Self {
        Self { coating, ..*self }
    }

    /// Membrane tension stiffness `hhat b11`, zero when uncoated and infinite
    /// for an inextensible coating.
    pub fn tension_stiffness(&self) -> f64 {
        match self.coating {
            Coating::None => 0.0,
            Coating::Membrane(m) => m.tension_stiffness(),
            Coating::Inextensible => f64::INFINITY,
        }
    }

    /// Membrane-to-shear stiffness ratio `s = h hhat b11 k^2 / a44` at
    /// wavenumber `k`.
    pub fn stiffness_ratio(&self, k: f64) -> f64 {
        match self.coating {
            Coating::None => 0.0,
            Coating::Inextensible => f64::INFINITY,
            Coating::Membrane(m) => self.h * m.tension_stiffness() * k * k / self.layer.a44(),
        }
    }

    /// Copy whose membrane is rescaled so that the stiffness ratio at `k`
    /// equals `s`.
    pub fn with_stiffness_ratio(&self, k: f64, s: f64) -> Result<Self> {
        let Coating::Membrane(m) = self.coating else {
            return Err(invalid(
                "coating",
                "a stiffness ratio can only be imposed on a membrane coating",
            ));
        };
        if !(k > 0.0 && s > 0.0) {
            return Err(invalid("stiffness_ratio", "requires k > 0 and s > 0"));
        }
        let scaled = m.scaled(s / self.stiffness_ratio(k))?;
        Ok(self.with_coating(Coating::Membrane(scaled)))
    }
}

/// Coupling coefficient `c` of the tangential surface equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShearCoupling {
    /// `c = (a13 - a44) / (2 a33)`.
    Compressible,
    /// `c = 1/2`, the incompressible limit.
    Incompressible,
}

impl ShearCoupling {
    pub fn coefficient(self, layer: &ElasticConstants) -> f64 {
        match self {
            ShearCoupling::Compressible => (layer.a13() - layer.a44()) / (2.0 * layer.a33()),
            ShearCoupling::Incompressible => 0.5,
        }
    }
}

/// Model branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Compressible leading term, `w0 = (h / a33) p`.
    Winkler,
    /// Compressible leading term plus the `h^3` correction.
    TwoTermCompressible,
    /// Incompressible layer.
    Incompressible,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Winkler => "compressible",
            ModelKind::TwoTermCompressible => "compressible_two_term",
            ModelKind::Incompressible => "incompressible",
        }
    }
}

/// Per-wavenumber surface response of a model and, optionally, of the
/// reference solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferRecord {
    /// Wavenumber (1/m).
    pub k: f64,
    /// Model deflection per unit pressure amplitude (m/Pa).
    pub model_w: f64,
    /// Reference deflection per unit pressure amplitude (m/Pa).
    pub oracle_w: Option<f64>,
    /// Thinness parameter `h k`.
    pub epsilon: f64,
}

impl TransferRecord {
    pub fn relative_error(&self) -> Option<f64> {
        self.oracle_w.map(|o| (self.model_w - o).abs() / o.abs())
    }
}

/// Foundation compliance `h / a33` (m/Pa); the Winkler modulus is its
/// inverse.
pub fn winkler_kernel(sys: &LayerSystem) -> f64 {
    sys.h / sys.layer.a33()
}

fn shear_compliance(k: f64, sys: &LayerSystem) -> f64 {
    sys.h.powi(3) * k * k / (12.0 * sys.layer.a44())
}

/// Incompressible uncoated kernel `h^3 k^2 / (3 a44)`.
pub fn uncoated_kernel(k: f64, sys: &LayerSystem) -> f64 {
    4.0 * shear_compliance(k, sys)
}

/// Incompressible kernel under an inextensible coating,
/// `h^3 k^2 / (12 a44)`.
pub fn inextensible_kernel(k: f64, sys: &LayerSystem) -> f64 {
    shear_compliance(k, sys)
}

/// Incompressible kernel for the coating of `sys`.
pub fn incompressible_kernel(k: f64, sys: &LayerSystem) -> f64 {
    incompressible_kernel_at_ratio(k, sys, sys.stiffness_ratio(k))
}

/// Incompressible kernel for an explicit stiffness ratio `s` (may be
/// infinite).
pub fn incompressible_kernel_at_ratio(k: f64, sys: &LayerSystem, s: f64) -> f64 {
    let q = shear_compliance(k, sys);
    if s.is_infinite() {
        q
    } else {
        q * (1.0 + 3.0 / (1.0 + s))
    }
}

/// Two-term compressible kernel.
pub fn two_term_kernel(k: f64, sys: &LayerSystem) -> f64 {
    let c = sys.layer;
    let h3k2 = sys.h.powi(3) * k * k;
    let (a13, a33, a44) = (c.a13(), c.a33(), c.a44());
    let correction = ((a13 + a44).powi(2) - 4.0 * a44 * a44) / (12.0 * a33 * a33 * a44);
    let coupling = ShearCoupling::Compressible.coefficient(&c);
    let s = sys.stiffness_ratio(k);
    let membrane = if s.is_infinite() {
        0.0
    } else {
        coupling * coupling * h3k2 / (a44 * (1.0 + s))
    };
    winkler_kernel(sys) + correction * h3k2 + membrane
}

/// Kernel of the chosen model branch.
pub fn model_kernel(kind: ModelKind, k: f64, sys: &LayerSystem) -> f64 {
    match kind {
        ModelKind::Winkler => winkler_kernel(sys),
        ModelKind::TwoTermCompressible => two_term_kernel(k, sys),
        ModelKind::Incompressible => incompressible_kernel(k, sys),
    }
}

/// Compressible leading-order deflection `(h / a33) p`. The membrane does
/// not enter at this order.
pub fn winkler_indentation(p: &ScalarField, sys: &LayerSystem) -> ScalarField {
    p.scale(winkler_kernel(sys))
}

/// Solves `h L v0 - a44 v0 = c h^2 grad(p)` mode by mode.
///
/// Uncoated layers use a zero membrane operator, giving
/// `v0 = -(c h^2 / a44) grad(p)`; an inextensible coating gives `v0 = 0`.
pub fn solve_membrane_displacement(
    p: &ScalarField,
    sys: &LayerSystem,
    coupling: ShearCoupling,
) -> Result<VectorField> {
    let grid = *p.grid();
    let a44 = sys.layer.a44();
    if !(a44 > 0.0) {
        return Err(invalid("a44", "must be positive"));
    }
    let membrane = match sys.coating {
        Coating::Inextensible => return Ok(VectorField::zeros(grid)),
        Coating::None => None,
        Coating::Membrane(m) => Some(m),
    };
    let c = coupling.coefficient(&sys.layer);
    let h = sys.h;
    let t = Transform2d::new(grid);
    let ps = t.forward(p.values());

    // (h S - a44 I) v = rhs with S the membrane symbol (odd-mode convention
    // for the mixed entry, matching `apply_membrane_traction`)
    let solve = |component: usize| {
        ps.map(|mode, pc| {
            let rhs = [
                mode.derivative(0) * pc * (c * h * h),
                mode.derivative(1) * pc * (c * h * h),
            ];
            let (s11, s12, s22) = match membrane {
                None => (0.0, 0.0, 0.0),
                Some(m) => {
                    let (b11, b12, b66) = (m.b11(), m.b12(), m.b66());
                    let [x1, x2] = mode.xi;
                    let hh = m.hhat();
                    (
                        -hh * (b11 * x1 * x1 + b66 * x2 * x2),
                        -hh * (b12 + b66) * mode.mixed(),
                        -hh * (b11 * x2 * x2 + b66 * x1 * x1),
                    )
                }
            };
            let m11 = h * s11 - a44;
            let m12 = h * s12;
            let m22 = h * s22 - a44;
            let det = m11 * m22 - m12 * m12;
            let v: [Complex64; 2] = [
                (rhs[0] * m22 - rhs[1] * m12) / det,
                (rhs[1] * m11 - rhs[0] * m12) / det,
            ];
            v[component]
        })
    };
    let v1 = t.inverse(&solve(0));
    let v2 = t.inverse(&solve(1));
    VectorField::new(grid, v1, v2).map_err(|_| Error::NonFinite("membrane displacement"))
}

/// Residual `h L v0 - a44 v0 - c h^2 grad(p)` of the tangential surface
/// equation.
pub fn membrane_equation_residual(
    v0: &VectorField,
    p: &ScalarField,
    sys: &LayerSystem,
    coupling: ShearCoupling,
) -> Result<VectorField> {
    let c = coupling.coefficient(&sys.layer);
    let h = sys.h;
    let a44 = sys.layer.a44();
    let forcing = gradient(p).scale(c * h * h);
    let lv = match sys.coating {
        Coating::Membrane(m) => apply_membrane_traction(v0, &m)?.scale(-1.0),
        Coating::None => VectorField::zeros(*v0.grid()),
        Coating::Inextensible => {
            return Err(invalid(
                "coating",
                "the surface equation degenerates to v0 = 0 for an inextensible coating",
            ))
        }
    };
    lv.axpby(h, v0, -a44)?.axpby(1.0, &forcing, -1.0)
}

/// Surface deflection and, where the model computes it, the tangential
/// surface displacement.
#[derive(Debug, Clone, PartialEq)]
pub struct Indentation {
    pub w0: ScalarField,
    pub v0: Option<VectorField>,
}

/// Incompressible deflection `-h^3/(12 a44) lap(p) + (h/2) div(v0)` with
/// `v0` solved for `c = 1/2`.
pub fn incompressible_indentation(p: &ScalarField, sys: &LayerSystem) -> Result<ScalarField> {
    Ok(incompressible_with_displacement(p, sys)?.w0)
}

fn incompressible_with_displacement(p: &ScalarField, sys: &LayerSystem) -> Result<Indentation> {
    let h = sys.h;
    let v0 = solve_membrane_displacement(p, sys, ShearCoupling::Incompressible)?;
    let bending = laplacian(p).scale(-h.powi(3) / (12.0 * sys.layer.a44()));
    let w0 = bending.add(&divergence(&v0).scale(0.5 * h))?;
    Ok(Indentation { w0, v0: Some(v0) })
}

/// Two-term compressible deflection.
pub fn two_term_compressible_indentation(
    p: &ScalarField,
    sys: &LayerSystem,
) -> Result<ScalarField> {
    Ok(two_term_with_displacement(p, sys)?.w0)
}

fn two_term_with_displacement(p: &ScalarField, sys: &LayerSystem) -> Result<Indentation> {
    let c = sys.layer;
    let h = sys.h;
    let (a13, a33, a44) = (c.a13(), c.a33(), c.a44());
    let coupling = ShearCoupling::Compressible.coefficient(&c);
    let v0 = solve_membrane_displacement(p, sys, ShearCoupling::Compressible)?;
    let correction = ((a13 + a44).powi(2) - 4.0 * a44 * a44) / (12.0 * a33 * a33 * a44);
    let w0 = winkler_indentation(p, sys)
        .add(&laplacian(p).scale(-correction * h.powi(3)))?
        .add(&divergence(&v0).scale(coupling * h))?;
    Ok(Indentation { w0, v0: Some(v0) })
}

/// Deflection for the chosen branch.
pub fn indentation(kind: ModelKind, p: &ScalarField, sys: &LayerSystem) -> Result<Indentation> {
    match kind {
        ModelKind::Winkler => Ok(Indentation {
            w0: winkler_indentation(p, sys),
            v0: None,
        }),
        ModelKind::TwoTermCompressible => two_term_with_displacement(p, sys),
        ModelKind::Incompressible => incompressible_with_displacement(p, sys),
    }
}

/// Through-thickness profiles of the first expansion terms for one Fourier
/// mode of unit pressure, in stretched variables with `h* = 1/k`.
///
/// For `p(eta) = exp(i e . eta)` (so `lap_eta p = -p`):
/// `w0 = w0_profile(zeta) p`, `v1 = v1_profile(zeta) grad_eta p` and
/// `w2 = w2_profile(zeta) p`. `plane_amplitude` is the factor `G` in
/// `V1 = G grad_eta p`. Units are m/Pa.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorProfiles {
    pub zeta: Vec<f64>,
    pub w0: Vec<f64>,
    pub v1: Vec<f64>,
    pub w2: Vec<f64>,
    pub plane_amplitude: f64,
    /// Load length scale `h* = 1 / k` (m).
    pub load_length: f64,
}

/// Closed-form interior profiles for wavenumber `k > 0`.
pub fn interior_profiles(zeta: &[f64], k: f64, sys: &LayerSystem) -> Result<InteriorProfiles> {
    if !(k.is_finite() && k > 0.0) {
        return Err(invalid("k", format!("must be positive, got {k}")));
    }
    if zeta.iter().any(|z| !(0.0..=1.0).contains(z)) {
        return Err(invalid("zeta", "samples must lie in [0, 1]"));
    }
    let c = sys.layer;
    let (a13, a33, a44) = (c.a13(), c.a33(), c.a44());
    let hs = 1.0 / k;
    let coupling = ShearCoupling::Compressible.coefficient(&c);
    let s = sys.stiffness_ratio(k);
    // V1 = G grad p from  -a44 (1 + s) G = c h*
    let g = if s.is_infinite() {
        0.0
    } else {
        -coupling * hs / (a44 * (1.0 + s))
    };
    let div_v = -g; // div V1 = G lap p = -G p
    let lap_p = -1.0;
    let sum = a13 + a44;
    let c2 = a44 / (2.0 * a33 * a33) * hs * lap_p - a44 / a33 * div_v;

    let w0 = zeta.iter().map(|z| hs / a33 * (1.0 - z)).collect();
    let v1 = zeta
        .iter()
        .map(|z| -sum / (2.0 * a33 * a44) * z * (1.0 - z) * hs + (1.0 - z) * g)
        .collect();
    let w2 = zeta
        .iter()
        .map(|z| {
            let zc = 1.0 - z;
            -(sum * sum * (2.0 * z.powi(3) - 3.0 * z * z + 1.0) + 2.0 * a44 * a44 * zc.powi(3))
                * hs
                * lap_p
                / (12.0 * a33 * a33 * a44)
                + sum / (2.0 * a33) * zc * zc * div_v
                + c2 * zc
        })
        .collect();
    Ok(InteriorProfiles {
        zeta: zeta.to_vec(),
        w0,
        v1,
        w2,
        plane_amplitude: g,
        load_length: hs,
    })
}
