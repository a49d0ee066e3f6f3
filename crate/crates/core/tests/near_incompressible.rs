//! Reference-solver checks of the incompressible models.
//!
//! At Poisson ratio 0.4999 the foundation compliance `h / a33` is still of the
//! same size as the shear compliance at the studied `eps`, so these checks
//! use a layer much closer to the limit.

use coated_layer::model::{
    incompressible_kernel, inextensible_kernel, uncoated_kernel, Coating, LayerSystem, ModelKind,
};
use coated_layer::oracle::{convergence_study, surface_transfer, StudyOptions};
use coated_layer::{ElasticConstants, MembraneConstants};

const EPS: [f64; 3] = [0.2, 0.1, 0.05];

fn layer(nu: f64) -> LayerSystem {
    let c = ElasticConstants::from_isotropic(1e6, nu).unwrap();
    LayerSystem::new(1e-3, c, Coating::None).unwrap()
}

fn coated(sys: &LayerSystem) -> LayerSystem {
    let m = MembraneConstants::from_reduced(1e6, 3e5, 1e-5).unwrap();
    sys.with_coating(Coating::Membrane(m))
}

#[test]
fn oracle_shows_factor_of_four() {
    let sys = layer(0.4999999);
    let k = 0.05 / sys.h();
    let bare = surface_transfer(k, &sys).unwrap();
    let stiff = surface_transfer(k, &sys.with_coating(Coating::Inextensible)).unwrap();
    let ratio = stiff / bare;
    assert!((ratio - 0.25).abs() < 0.025, "ratio {ratio}");
    // the model kernels carry the ratio exactly
    assert_eq!(
        inextensible_kernel(k, &sys) / uncoated_kernel(k, &sys),
        0.25
    );
}

#[test]
fn oracle_ratio_tends_to_a_quarter() {
    let sys = layer(0.4999999);
    let inext = sys.with_coating(Coating::Inextensible);
    let gaps: Vec<f64> = EPS
        .iter()
        .map(|eps| {
            let k = eps / sys.h();
            let r = surface_transfer(k, &inext).unwrap() / surface_transfer(k, &sys).unwrap();
            (r - 0.25).abs()
        })
        .collect();
    assert!(gaps[1] < gaps[0] && gaps[2] < gaps[1], "{gaps:?}");
}

#[test]
fn incompressible_model_converges_near_the_limit() {
    let sys = layer(0.4999999);
    let bare = convergence_study(
        &sys,
        ModelKind::Incompressible,
        &EPS,
        &StudyOptions::default(),
    )
    .unwrap();
    let held = StudyOptions {
        hold_stiffness_ratio: Some(1.0),
    };
    let stiff = convergence_study(&coated(&sys), ModelKind::Incompressible, &EPS, &held).unwrap();
    let e = bare.errors();
    assert!(e[0] / e[1] >= 3.0, "errors {e:?}");
    for study in [bare, stiff] {
        let e = study.errors();
        assert_eq!(e.len(), 3);
        assert!(e[0] / e[2] >= 3.0, "errors {e:?}");
    }
}

#[test]
fn model_kernel_matches_oracle_with_held_ratio() {
    let sys = coated(&layer(0.4999999));
    let k = 0.05 / sys.h();
    let local = sys.with_stiffness_ratio(k, 1.0).unwrap();
    let model = incompressible_kernel(k, &local);
    let oracle = surface_transfer(k, &local).unwrap();
    assert!((model - oracle).abs() / oracle < 0.01);
}

#[test]
fn two_term_model_converges_at_moderate_incompressibility() {
    let sys = layer(0.4999);
    let study = convergence_study(
        &sys,
        ModelKind::TwoTermCompressible,
        &EPS,
        &StudyOptions::default(),
    )
    .unwrap();
    let e = study.errors();
    assert!(e[0] / e[2] >= 3.0, "errors {e:?}");
    let leading =
        convergence_study(&sys, ModelKind::Winkler, &EPS, &StudyOptions::default()).unwrap();
    for (two, one) in e.iter().zip(leading.errors()) {
        assert!(*two <= one);
    }
}
