//! Exact per-wavenumber solution of the coated layer problem.
//!
//! For a surface pressure `p = exp(i xi . y)` with `|xi| = k`, the
//! displacement is `(u(z) xi/k + u_t(z) xi_perp/k, w(z)) exp(i xi . y)`. The
//! transverse part `u_t` satisfies a homogeneous problem and vanishes; the
//! longitudinal part solves, on `0 < z < h`,
//!
//! ```text
//! a44 u'' - a11 k^2 u + i k (a13 + a44) w' = 0
//! a33 w'' - a44 k^2 w + i k (a13 + a44) u' = 0
//! u(h) = w(h) = 0
//! i k a13 u(0) + a33 w'(0) = -1
//! a44 (i k w(0) + u'(0)) = hhat b11 k^2 u(0)      (membrane)
//!                   u(0) = 0                      (inextensible)
//! ```
//!
//! The problem is made dimensionless with `zeta = z / h`, moduli divided by
//! `a33` and displacements by `h / a33`, then solved by Chebyshev
//! collocation in integrated form: the unknowns are the second derivatives
//! at the Chebyshev points plus two integration constants per field, and
//! lower derivatives are recovered with the spectral integration matrix.
//! This keeps the discrete system well conditioned (errors stay near
//! round-off as the node count grows) and is indifferent to repeated
//! characteristic roots.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::model::{model_kernel, Coating, LayerSystem, ModelKind, TransferRecord};

/// Solver controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Chebyshev polynomial degree of the first solve.
    pub initial_nodes: usize,
    /// Largest degree tried while doubling.
    pub max_nodes: usize,
    /// Accepted relative change of the surface deflection between two
    /// consecutive doublings.
    pub refinement_tol: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            initial_nodes: 64,
            max_nodes: 512,
            refinement_tol: 1e-10,
        }
    }
}

/// Residuals of the boundary conditions, per unit pressure amplitude.
/// Displacement residuals are relative to `|w(0)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryResiduals {
    pub bonded_u: f64,
    pub bonded_w: f64,
    pub normal_traction: f64,
    pub shear_traction: f64,
    /// Largest residual of the collocated field equations, relative to the
    /// largest term in them.
    pub interior: f64,
}

impl BoundaryResiduals {
    pub fn max(&self) -> f64 {
        [
            self.bonded_u,
            self.bonded_w,
            self.normal_traction,
            self.shear_traction,
            self.interior,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Displacement profiles of one Fourier mode per unit pressure amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSolution {
    /// Wavenumber (1/m).
    pub k: f64,
    /// Collocation points in `[0, h]`, starting at the surface.
    pub nodes: Vec<f64>,
    /// In-plane displacement along `xi` (m/Pa).
    pub u_long: Vec<Complex64>,
    /// In-plane displacement across `xi` (m/Pa); identically zero.
    pub u_trans: Vec<Complex64>,
    /// Normal displacement (m/Pa).
    pub w: Vec<Complex64>,
    /// Largest forcing of the transverse problem (always zero).
    pub transverse_forcing: f64,
    pub residuals: BoundaryResiduals,
}

impl ModeSolution {
    /// Surface deflection `w(0)`.
    pub fn surface_w(&self) -> Complex64 {
        self.w[0]
    }
}

/// Chebyshev points on `[-1, 1]` ordered from -1, with the matrix mapping
/// samples of `f` to samples of `F(x) = int_{-1}^x f`.
struct ChebyshevIntegration {
    x: Vec<f64>,
    once: DMatrix<f64>,
    twice: DMatrix<f64>,
}

impl ChebyshevIntegration {
    fn new(n: usize) -> Self {
        let np = n + 1;
        let theta: Vec<f64> = (0..np)
            .map(|j| std::f64::consts::PI * (n - j) as f64 / n as f64)
            .collect();
        let x: Vec<f64> = theta.iter().map(|t| t.cos()).collect();

        // samples -> Chebyshev coefficients (discrete cosine transform)
        let mut to_coef = DMatrix::<f64>::zeros(np, np);
        for m in 0..np {
            let cm = if m == 0 || m == n { 0.5 } else { 1.0 };
            for j in 0..np {
                let cj = if j == 0 || j == n { 0.5 } else { 1.0 };
                to_coef[(m, j)] = 2.0 / n as f64 * cm * cj * (m as f64 * theta[j]).cos();
            }
        }
        // coefficients of the antiderivative, degree n + 1
        let mut integ = DMatrix::<f64>::zeros(np + 1, np);
        integ[(1, 0)] = 1.0;
        if n >= 1 {
            integ[(2, 1)] += 0.25;
        }
        for m in 2..np {
            integ[(m + 1, m)] += 1.0 / (2.0 * (m + 1) as f64);
            integ[(m - 1, m)] -= 1.0 / (2.0 * (m - 1) as f64);
        }
        // fix the constant so the antiderivative vanishes at x = -1
        for col in 0..np {
            let at_minus_one: f64 = (1..=np)
                .map(|m| {
                    if m % 2 == 0 {
                        integ[(m, col)]
                    } else {
                        -integ[(m, col)]
                    }
                })
                .sum();
            integ[(0, col)] = -at_minus_one;
        }
        let mut eval = DMatrix::<f64>::zeros(np, np + 1);
        for j in 0..np {
            for m in 0..=np {
                eval[(j, m)] = (m as f64 * theta[j]).cos();
            }
        }
        let once = &eval * &integ * &to_coef;
        let twice = &once * &once;
        Self { x, once, twice }
    }
}

/// Boundary condition at the coated surface in dimensionless form.
#[derive(Debug, Clone, Copy)]
enum Surface {
    /// Membrane with dimensionless tension `hhat b11 / (a33 h)` (zero when
    /// uncoated).
    Membrane(f64),
    Inextensible,
}

/// Solves one mode at a fixed polynomial degree `n`.
pub fn solve_mode_at(k: f64, sys: &LayerSystem, n: usize) -> Result<ModeSolution> {
    if !(k.is_finite() && k >= 0.0) {
        return Err(invalid(
            "k",
            format!("must be finite and non-negative, got {k}"),
        ));
    }
    if n < 4 {
        return Err(invalid("nodes", "need a polynomial degree of at least 4"));
    }
    let c = sys.layer();
    let a33 = c.a33();
    let (a11, a13, a44) = (c.a11() / a33, c.a13() / a33, c.a44() / a33);
    let h = sys.h();
    let kk = k * h;
    let surface = match sys.coating() {
        Coating::None => Surface::Membrane(0.0),
        Coating::Membrane(m) => Surface::Membrane(m.tension_stiffness() / (a33 * h)),
        Coating::Inextensible => Surface::Inextensible,
    };

    let cheb = ChebyshevIntegration::new(n);
    let np = n + 1;
    let size = 2 * np + 4;
    let zero = Complex64::new(0.0, 0.0);
    let ik = Complex64::new(0.0, kk);
    let coupling = ik * (a13 + a44);
    // d/dzeta = 2 d/dx, zeta = (1 + x) / 2
    let (au, bu, aw, bw) = (2 * np, 2 * np + 1, 2 * np + 2, 2 * np + 3);
    let mut a = DMatrix::<Complex64>::from_element(size, size, zero);
    let mut rhs = DVector::<Complex64>::from_element(size, zero);

    // u = au + bu (x + 1) + J2 fu,  u_x = bu + J fu,  u_xx = fu  (same for w)
    for i in 0..np {
        let xp1 = cheb.x[i] + 1.0;
        // a44 u_zz - a11 K^2 u + i K (a13 + a44) w_z = 0
        let row = i;
        for j in 0..np {
            a[(row, j)] = Complex64::from(-a11 * kk * kk * cheb.twice[(i, j)]);
            a[(row, np + j)] = coupling * 2.0 * cheb.once[(i, j)];
        }
        a[(row, i)] += 4.0 * a44;
        a[(row, au)] = Complex64::from(-a11 * kk * kk);
        a[(row, bu)] = Complex64::from(-a11 * kk * kk * xp1);
        a[(row, bw)] = coupling * 2.0;
        // w_zz - a44 K^2 w + i K (a13 + a44) u_z = 0
        let row = np + i;
        for j in 0..np {
            a[(row, np + j)] = Complex64::from(-a44 * kk * kk * cheb.twice[(i, j)]);
            a[(row, j)] = coupling * 2.0 * cheb.once[(i, j)];
        }
        a[(row, np + i)] += 4.0;
        a[(row, aw)] = Complex64::from(-a44 * kk * kk);
        a[(row, bw)] = Complex64::from(-a44 * kk * kk * xp1);
        a[(row, bu)] = coupling * 2.0;
    }
    let last = np - 1;
    // bonded base, x = 1
    for j in 0..np {
        a[(2 * np, j)] = Complex64::from(cheb.twice[(last, j)]);
        a[(2 * np + 1, np + j)] = Complex64::from(cheb.twice[(last, j)]);
    }
    a[(2 * np, au)] = Complex64::from(1.0);
    a[(2 * np, bu)] = Complex64::from(2.0);
    a[(2 * np + 1, aw)] = Complex64::from(1.0);
    a[(2 * np + 1, bw)] = Complex64::from(2.0);
    // normal traction at the surface, x = -1: u = au, w_x = bw
    a[(2 * np + 2, au)] = ik * a13;
    a[(2 * np + 2, bw)] = Complex64::from(2.0);
    rhs[2 * np + 2] = Complex64::from(-1.0);
    // tangential condition
    match surface {
        Surface::Membrane(tension) => {
            a[(2 * np + 3, aw)] = ik * a44;
            a[(2 * np + 3, bu)] = Complex64::from(2.0 * a44);
            a[(2 * np + 3, au)] = Complex64::from(-tension * kk * kk);
        }
        Surface::Inextensible => {
            a[(2 * np + 3, au)] = Complex64::from(1.0);
        }
    }

    let lu = a.clone().lu();
    let diag = lu.u().diagonal();
    let (dmin, dmax) = diag.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), d| {
        (lo.min(d.norm()), hi.max(d.norm()))
    });
    let condition = if dmin > 0.0 {
        dmax / dmin
    } else {
        f64::INFINITY
    };
    let sol = match lu.solve(&rhs) {
        Some(s) if condition < 1e14 && s.iter().all(|v| v.re.is_finite() && v.im.is_finite()) => s,
        _ => return Err(Error::SingularCollocation { k, condition }),
    };

    let interior = {
        let r = &a * &sol - &rhs;
        let mut worst = 0.0_f64;
        let mut scale = f64::MIN_POSITIVE;
        for i in 0..2 * np {
            worst = worst.max(r[i].norm());
            for j in 0..size {
                scale = scale.max((a[(i, j)] * sol[j]).norm());
            }
        }
        worst / scale
    };

    // reconstruct values and first derivatives at the nodes
    let fu = sol.rows(0, np);
    let fw = sol.rows(np, np);
    let ju = &cheb.once.map(Complex64::from) * fu;
    let jw = &cheb.once.map(Complex64::from) * fw;
    let j2u = &cheb.twice.map(Complex64::from) * fu;
    let j2w = &cheb.twice.map(Complex64::from) * fw;
    let u: Vec<Complex64> = (0..np)
        .map(|i| sol[au] + sol[bu] * (cheb.x[i] + 1.0) + j2u[i])
        .collect();
    let w: Vec<Complex64> = (0..np)
        .map(|i| sol[aw] + sol[bw] * (cheb.x[i] + 1.0) + j2w[i])
        .collect();
    let du0 = 2.0 * (sol[bu] + ju[0]);
    let dw0 = 2.0 * (sol[bw] + jw[0]);

    let w_scale = w[0].norm().max(f64::MIN_POSITIVE);
    let residuals = BoundaryResiduals {
        bonded_u: u[last].norm() / w_scale,
        bonded_w: w[last].norm() / w_scale,
        normal_traction: (ik * a13 * u[0] + dw0 + 1.0).norm(),
        shear_traction: match surface {
            Surface::Membrane(tension) => {
                (a44 * (ik * w[0] + du0) - tension * kk * kk * u[0]).norm()
            }
            Surface::Inextensible => u[0].norm() / w_scale,
        },
        interior,
    };

    let (u_trans, transverse_forcing) =
        solve_transverse(&cheb, c.a66() / a33, a44, kk, transverse_surface(sys, a33)).ok_or(
            Error::SingularCollocation {
                k,
                condition: f64::INFINITY,
            },
        )?;

    let scale = h / a33;
    let nodes = cheb.x.iter().map(|x| 0.5 * h * (1.0 + x)).collect();
    Ok(ModeSolution {
        k,
        nodes,
        u_long: u.iter().map(|v| v * scale).collect(),
        u_trans: u_trans.iter().map(|v| v * scale).collect(),
        w: w.iter().map(|v| v * scale).collect(),
        transverse_forcing,
        residuals,
    })
}

fn transverse_surface(sys: &LayerSystem, a33: f64) -> Surface {
    match sys.coating() {
        Coating::None => Surface::Membrane(0.0),
        Coating::Membrane(m) => Surface::Membrane(m.hhat() * m.b66() / (a33 * sys.h())),
        Coating::Inextensible => Surface::Inextensible,
    }
}

/// In-plane displacement across the wavevector:
/// `a44 u'' - a66 k^2 u = 0`, `u(h) = 0`, `a44 u'(0) = hhat b66 k^2 u(0)`.
/// The surface pressure does not load it, so the forcing is zero and the
/// solution vanishes whenever the operator is nonsingular. Returns the
/// solution and the largest forcing entry.
fn solve_transverse(
    cheb: &ChebyshevIntegration,
    a66: f64,
    a44: f64,
    kk: f64,
    surface: Surface,
) -> Option<(Vec<Complex64>, f64)> {
    let np = cheb.x.len();
    let (at, bt) = (np, np + 1);
    let mut a = DMatrix::<f64>::zeros(np + 2, np + 2);
    for i in 0..np {
        for j in 0..np {
            a[(i, j)] = -a66 * kk * kk * cheb.twice[(i, j)];
        }
        a[(i, i)] += 4.0 * a44;
        a[(i, at)] = -a66 * kk * kk;
        a[(i, bt)] = -a66 * kk * kk * (cheb.x[i] + 1.0);
    }
    for j in 0..np {
        a[(np, j)] = cheb.twice[(np - 1, j)];
    }
    a[(np, at)] = 1.0;
    a[(np, bt)] = 2.0;
    match surface {
        Surface::Membrane(tension) => {
            a[(np + 1, bt)] = 2.0 * a44;
            a[(np + 1, at)] = -tension * kk * kk;
        }
        Surface::Inextensible => a[(np + 1, at)] = 1.0,
    }
    let forcing = DVector::<f64>::zeros(np + 2);
    let sol = a.lu().solve(&forcing)?;
    let values = (0..np)
        .map(|i| {
            let mut v = sol[at] + sol[bt] * (cheb.x[i] + 1.0);
            for j in 0..np {
                v += cheb.twice[(i, j)] * sol[j];
            }
            Complex64::from(v)
        })
        .collect();
    Some((values, forcing.amax()))
}

/// Solves one mode, doubling the degree from `initial_nodes` until the
/// surface deflection changes by less than `refinement_tol`.
pub fn solve_mode_with(k: f64, sys: &LayerSystem, opts: &OracleOptions) -> Result<ModeSolution> {
    let mut n = opts.initial_nodes;
    let mut coarse = solve_mode_at(k, sys, n)?;
    let mut change = f64::NAN;
    while 2 * n <= opts.max_nodes {
        let fine = solve_mode_at(k, sys, 2 * n)?;
        change = (fine.surface_w() - coarse.surface_w()).norm() / fine.surface_w().norm();
        if change <= opts.refinement_tol {
            return Ok(fine);
        }
        coarse = fine;
        n *= 2;
    }
    Err(Error::NotConverged {
        k,
        nodes: n,
        change,
    })
}

/// [`solve_mode_with`] with default options.
pub fn solve_mode(k: f64, sys: &LayerSystem) -> Result<ModeSolution> {
    solve_mode_with(k, sys, &OracleOptions::default())
}

/// Exact surface deflection per unit pressure amplitude (m/Pa).
pub fn surface_transfer(k: f64, sys: &LayerSystem) -> Result<f64> {
    let w0 = solve_mode(k, sys)?.surface_w();
    if w0.im.abs() > 1e-10 * w0.norm() {
        return Err(Error::NonFinite("surface transfer (complex response)"));
    }
    Ok(w0.re)
}

/// Settings of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StudyOptions {
    /// When set, the membrane of the system is rescaled at every `eps` so the
    /// stiffness ratio `h hhat b11 k^2 / a44` equals this value (the regime in
    /// which the membrane tension grows like `1/eps`). Otherwise the system
    /// is used as given.
    pub hold_stiffness_ratio: Option<f64>,
}

/// Model error against the reference solution over a sequence of `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub model: ModelKind,
    /// One record per completed `eps`, in input order.
    pub records: Vec<TransferRecord>,
    /// Least-squares slope of `log(error)` against `log(eps)`; `None` with
    /// fewer than two usable points.
    pub order: Option<f64>,
    /// Set when the reference solver failed; records stop before that `eps`.
    pub failure: Option<String>,
}

impl ConvergenceStudy {
    pub fn errors(&self) -> Vec<f64> {
        self.records
            .iter()
            .filter_map(|r| r.relative_error())
            .collect()
    }
}

/// Compares `model` with the reference solution at `k = eps / h` for every
/// `eps` in `eps_list` (strictly decreasing, within `(0, 0.5]`).
pub fn convergence_study(
    sys: &LayerSystem,
    model: ModelKind,
    eps_list: &[f64],
    opts: &StudyOptions,
) -> Result<ConvergenceStudy> {
    if eps_list.is_empty() {
        return Err(invalid("eps", "list is empty"));
    }
    if eps_list.iter().any(|e| !(*e > 0.0 && *e <= 0.5)) {
        return Err(invalid("eps", "values must lie in (0, 0.5]"));
    }
    if eps_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(invalid("eps", "values must be strictly decreasing"));
    }
    let mut records = Vec::with_capacity(eps_list.len());
    let mut failure = None;
    for &eps in eps_list {
        let k = eps / sys.h();
        let local = match opts.hold_stiffness_ratio {
            Some(s) => sys.with_stiffness_ratio(k, s)?,
            None => *sys,
        };
        match surface_transfer(k, &local) {
            Ok(oracle) => records.push(TransferRecord {
                k,
                model_w: model_kernel(model, k, &local),
                oracle_w: Some(oracle),
                epsilon: eps,
            }),
            Err(e) => {
                failure = Some(format!("eps = {eps}: {e}"));
                break;
            }
        }
    }
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| r.relative_error().map(|e| (r.epsilon, e)))
        .filter(|(_, e)| *e > 0.0)
        .collect();
    Ok(ConvergenceStudy {
        model,
        order: fit_log_slope(&points),
        records,
        failure,
    })
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx > 0.0 {
        Some(sxy / sxx)
    } else {
        None
    }
}

/// Writes records as CSV with columns `epsilon,k,model_w,oracle_w,rel_error`.
pub fn write_records_csv<W: std::io::Write>(records: &[TransferRecord], mut out: W) -> Result<()> {
    writeln!(out, "epsilon,k,model_w,oracle_w,rel_error")?;
    for r in records {
        let oracle = r.oracle_w.map(|v| v.to_string()).unwrap_or_default();
        let err = r
            .relative_error()
            .map(|v| v.to_string())
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{}",
            r.epsilon, r.k, r.model_w, oracle, err
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::{ElasticConstants, MembraneConstants};
    use crate::model::winkler_kernel;

    fn layer(nu: f64) -> ElasticConstants {
        ElasticConstants::from_isotropic(1e6, nu).unwrap()
    }

    fn uncoated(nu: f64) -> LayerSystem {
        LayerSystem::new(1e-3, layer(nu), Coating::None).unwrap()
    }

    fn with_tension(sys: &LayerSystem, tension: f64) -> LayerSystem {
        let m = MembraneConstants::from_reduced(tension, 0.3 * tension, 1.0).unwrap();
        sys.with_coating(Coating::Membrane(m))
    }

    #[test]
    fn chebyshev_integration_is_exact_on_polynomials() {
        let cheb = ChebyshevIntegration::new(16);
        let f = DVector::from_iterator(17, cheb.x.iter().map(|x| 3.0 * x * x - 1.0));
        let once = &cheb.once * &f;
        let twice = &cheb.twice * &f;
        for (i, x) in cheb.x.iter().enumerate() {
            assert!((once[i] - (x.powi(3) - x)).abs() < 1e-13);
            // integral from -1 of x^3 - x
            let exact = 0.25 * x.powi(4) - 0.5 * x * x + 0.25;
            assert!((twice[i] - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn uniform_load_gives_foundation_compliance() {
        for sys in [
            uncoated(0.3),
            with_tension(&uncoated(0.3), 50.0),
            uncoated(0.45),
        ] {
            let w = surface_transfer(0.0, &sys).unwrap();
            let expect = winkler_kernel(&sys);
            assert!((w - expect).abs() < 1e-12 * expect, "{w} vs {expect}");
        }
    }

    #[test]
    fn thin_layer_approaches_winkler() {
        let sys = uncoated(0.3);
        let k = 0.1 / sys.h();
        let w = surface_transfer(k, &sys).unwrap();
        let rel = (w - winkler_kernel(&sys)).abs() / w;
        assert!(rel < 0.05);
    }

    #[test]
    fn residuals_are_small() {
        let base = uncoated(0.3);
        let coatings = [
            Coating::None,
            Coating::Membrane(MembraneConstants::from_reduced(5e4, 1e4, 1.0).unwrap()),
            Coating::Inextensible,
        ];
        for coating in coatings {
            let sys = base.with_coating(coating);
            for i in 0..=10 {
                let kh = 0.5 * i as f64;
                let sol = solve_mode(kh / sys.h(), &sys).unwrap();
                assert!(
                    sol.residuals.max() < 1e-10,
                    "kh = {kh}: {:?}",
                    sol.residuals
                );
                assert!(sol
                    .w
                    .iter()
                    .chain(&sol.u_long)
                    .all(|v| v.re.is_finite() && v.im.is_finite()));
                assert!(sol.u_trans.iter().all(|v| v.norm() == 0.0));
                assert_eq!(sol.transverse_forcing, 0.0);
            }
        }
    }

    #[test]
    fn refinement_converges() {
        let sys = with_tension(&uncoated(0.4), 2e3);
        for kh in [0.05, 1.0, 4.0] {
            let k = kh / sys.h();
            let a = solve_mode_at(k, &sys, 64).unwrap().surface_w();
            let b = solve_mode_at(k, &sys, 128).unwrap().surface_w();
            assert!((a - b).norm() / b.norm() < 1e-10);
            assert!(b.im.abs() < 1e-12 * b.norm());
        }
    }

    #[test]
    fn stiffer_membrane_lowers_compliance() {
        let base = uncoated(0.45);
        let k = 0.5 / base.h();
        let mut last = surface_transfer(k, &base).unwrap();
        for decade in 0..5 {
            let sys = with_tension(&base, 10f64.powi(decade + 1));
            let w = surface_transfer(k, &sys).unwrap();
            assert!(w < last);
            last = w;
        }
        let inext = surface_transfer(k, &base.with_coating(Coating::Inextensible)).unwrap();
        assert!(inext < last);
    }

    #[test]
    fn compliance_decreases_with_wavenumber() {
        let sys = uncoated(0.3);
        let mut last = f64::INFINITY;
        for i in 0..10 {
            let kh = 2.0 + 0.5 * i as f64;
            let w = surface_transfer(kh / sys.h(), &sys).unwrap();
            assert!(w < last);
            last = w;
        }
    }

    #[test]
    fn oracle_rejects_bad_input() {
        let sys = uncoated(0.3);
        assert!(solve_mode(-1.0, &sys).is_err());
        assert!(solve_mode(f64::NAN, &sys).is_err());
        assert!(solve_mode_at(1.0, &sys, 2).is_err());
        let opts = OracleOptions {
            initial_nodes: 4,
            max_nodes: 8,
            refinement_tol: 1e-15,
        };
        assert!(matches!(
            solve_mode_with(4.0 / sys.h(), &sys, &opts),
            Err(Error::NotConverged { .. })
        ));
    }

    #[test]
    fn study_validation_and_single_point() {
        let sys = uncoated(0.3);
        let opts = StudyOptions::default();
        assert!(convergence_study(&sys, ModelKind::Winkler, &[], &opts).is_err());
        assert!(convergence_study(&sys, ModelKind::Winkler, &[0.1, 0.2], &opts).is_err());
        assert!(convergence_study(&sys, ModelKind::Winkler, &[0.6], &opts).is_err());
        assert!(convergence_study(&sys, ModelKind::Winkler, &[0.0], &opts).is_err());
        let one = convergence_study(&sys, ModelKind::Winkler, &[0.1], &opts).unwrap();
        assert_eq!(one.records.len(), 1);
        assert_eq!(one.order, None);
        assert!(one.failure.is_none());
    }

    #[test]
    fn winkler_error_is_second_order() {
        let sys = uncoated(0.3);
        let study = convergence_study(
            &sys,
            ModelKind::Winkler,
            &[0.2, 0.1, 0.05],
            &StudyOptions::default(),
        )
        .unwrap();
        let order = study.order.unwrap();
        assert!((order - 2.0).abs() < 0.1, "order {order}");
        let two = convergence_study(
            &sys,
            ModelKind::TwoTermCompressible,
            &[0.2, 0.1, 0.05],
            &StudyOptions::default(),
        )
        .unwrap();
        for (a, b) in two.errors().iter().zip(study.errors()) {
            assert!(*a < b);
        }
    }

    #[test]
    fn held_ratio_rescales_membrane() {
        let sys = with_tension(&uncoated(0.3), 1.0);
        let opts = StudyOptions {
            hold_stiffness_ratio: Some(1.0),
        };
        let study = convergence_study(&sys, ModelKind::Incompressible, &[0.2, 0.1], &opts).unwrap();
        for r in &study.records {
            let local = sys.with_stiffness_ratio(r.k, 1.0).unwrap();
            assert!((local.stiffness_ratio(r.k) - 1.0).abs() < 1e-14);
            assert_eq!(r.model_w, crate::model::incompressible_kernel(r.k, &local));
        }
    }

    #[test]
    fn log_slope_fit() {
        let pts: Vec<(f64, f64)> = [0.2, 0.1, 0.05]
            .iter()
            .map(|e: &f64| (*e, 3.0 * e.powi(2)))
            .collect();
        assert!((fit_log_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(fit_log_slope(&pts[..1]), None);
        assert_eq!(fit_log_slope(&[(1.0, 1.0), (1.0, 2.0)]), None);
    }

    #[test]
    fn records_csv() {
        let recs = [
            TransferRecord {
                k: 100.0,
                model_w: 1e-9,
                oracle_w: Some(2e-9),
                epsilon: 0.1,
            },
            TransferRecord {
                k: 50.0,
                model_w: 1e-9,
                oracle_w: None,
                epsilon: 0.05,
            },
        ];
        let mut buf = Vec::new();
        write_records_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "epsilon,k,model_w,oracle_w,rel_error");
        assert_eq!(lines[1], "0.1,100,0.000000001,0.000000002,0.5");
        assert_eq!(lines[2], "0.05,50,0.000000001,,");
    }
}
