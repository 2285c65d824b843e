use approx::assert_relative_eq;
use cpslab::forces::{f_dimensional, f_m, force_point, moment_prefactor, Regime};
use cpslab::shifts::{free_rate, ground_shift, spin_flip_rate};
use cpslab::{Coupling, MaterialModel, PhysicalConstants, QuadratureSpec, SlabGeometry, Transition, TransitionSet};

const EQUAL: [f64; 3] = [0.25; 3];

#[test]
fn reduced_and_dimensional_forces_agree() {
    let k = PhysicalConstants::default();
    let q = QuadratureSpec::default();
    let omega = 1e15;
    let model = MaterialModel::Drude { omega_p: 4.0 * omega, nu: 0.1 * omega };
    let z = 2e-7;
    let t = Transition::magnetic(omega, EQUAL, &k).unwrap();
    let f = f_dimensional(&SlabGeometry::half_space(z).unwrap(), &TransitionSet::single(t), &model, &k, &q).unwrap();
    let x = omega * z / k.c;
    let reduced = f_m(x, EQUAL, &model.in_units_of(omega), None, &q).unwrap();
    assert_relative_eq!(f, moment_prefactor(z, k.spin_moment(), Coupling::Magnetic, &k) * reduced, max_relative = 1e-10);
}

#[test]
fn ground_shift_is_repulsive_for_magnetic_and_attractive_for_electric() {
    let k = PhysicalConstants::default();
    let q = QuadratureSpec::default();
    let geom = SlabGeometry::half_space(1e-6).unwrap();
    let m = TransitionSet::single(Transition::magnetic(1e14, EQUAL, &k).unwrap());
    let e = TransitionSet::single(Transition::electric(1e14, EQUAL, 1e-29).unwrap());
    let pc = MaterialModel::PerfectConductor;
    assert!(ground_shift(&geom, &m, &pc, &k, &q).unwrap().delta_omega > 0.0);
    assert!(ground_shift(&geom, &e, &pc, &k, &q).unwrap().delta_omega < 0.0);
}

#[test]
fn rate_far_from_the_surface_is_free_rate() {
    let k = PhysicalConstants::default();
    let q = QuadratureSpec::default();
    let omega = 1e15;
    let t = Transition::magnetic(omega, EQUAL, &k).unwrap();
    let geom = SlabGeometry::half_space(200.0 * k.c / omega).unwrap();
    let g = spin_flip_rate(&geom, &TransitionSet::single(t), &MaterialModel::PerfectConductor, &k, &q).unwrap();
    assert_relative_eq!(g / free_rate(&t, &k), 1.0, max_relative = 0.02);
}

#[test]
fn force_points_carry_regimes() {
    let q = QuadratureSpec::default();
    let pc = force_point(50.0, EQUAL, &MaterialModel::PerfectConductor, None, Coupling::Magnetic, &q).unwrap();
    assert_eq!(pc.regime, Regime::FarField);
    let slab = force_point(50.0, EQUAL, &MaterialModel::PerfectConductor, Some(0.5), Coupling::Magnetic, &q).unwrap();
    assert_eq!(slab.regime, Regime::Unclassified);
    assert!(slab.prediction.is_none());
}

#[test]
fn invalid_inputs_are_errors() {
    let q = QuadratureSpec::default();
    assert!(f_m(-1.0, EQUAL, &MaterialModel::PerfectConductor, None, &q).is_err());
    assert!(f_m(1.0, [-0.1, 0.0, 0.0], &MaterialModel::PerfectConductor, None, &q).is_err());
    assert!(SlabGeometry::new(0.0, None).is_err());
}
