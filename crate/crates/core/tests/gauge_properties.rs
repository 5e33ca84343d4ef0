use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use scalefield::bundle_fields::{build_lattice, ConnectionField, Lattice, RealField};
use scalefield::gauge::{covariance_residual, reduce_to_standard, su2_transform, GaugeMap, Su2Map, U1Map};
use scalefield::scaled_scalars::Kind;
use scalefield::studies::{random_gauge_setup, random_reduction_setup};

fn lattice() -> Lattice {
    build_lattice(2, &[6, 6], &[0.2, 0.2]).unwrap()
}

fn random_map() -> impl Strategy<Value = Su2Map> {
    let axis = (-1.0..1.0_f64, -1.0..1.0_f64, 0.1..1.0_f64).prop_map(|(a, b, c)| [a, b, c]);
    let angle = (-1.0..1.0_f64, -2.0..2.0_f64, -2.0..2.0_f64, 0.0..6.28_f64)
        .prop_map(|(amp, kx, ky, phase)| RealField::Wave { amp, k: vec![kx, ky], phase });
    let rotation = (angle, axis).prop_map(|(angle, axis)| Su2Map::Rotation { angle, axis });
    (rotation.clone(), rotation).prop_map(|(l, r)| Su2Map::Product { left: Box::new(l), right: Box::new(r) })
}

/// `A + iB` replaced by `λ(A + iB)` at every site.
fn rescaled(cf: &ConnectionField, lambda: Complex64) -> ConnectionField {
    let d = cf.dim();
    let n = cf.lattice().n_sites();
    let mut a = vec![vec![0.0; n]; d];
    let mut b = vec![vec![0.0; n]; d];
    for mu in 0..d {
        for site in 0..n {
            let c = lambda * cf.coefficient(mu, site);
            a[mu][site] = c.re;
            b[mu][site] = c.im;
        }
    }
    ConnectionField::from_grids(cf.lattice(), a, b, Kind::Complex).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_su2_maps_leave_the_derivative_covariant(map in random_map(), seed in any::<u64>()) {
        let l = lattice();
        let setup = random_gauge_setup(&mut ChaCha8Rng::seed_from_u64(seed), &l).unwrap();
        for site in l.interior_sites() {
            for mu in 0..2 {
                let r = covariance_residual(&setup.psi, &setup.scaling, &setup.connection, &setup.gauge, &map, site, mu).unwrap();
                prop_assert!(r <= 1e-10, "{r}");
            }
        }
    }

    #[test]
    fn transformed_alpha_is_real_and_hermitian(map in random_map(), a in proptest::array::uniform3(-2.0..2.0_f64), g in 0.5..2.0_f64) {
        let x = [0.3, -0.2];
        for mu in 0..2 {
            prop_assert!(su2_transform(a, &map.value(&x), &map.grad(&x, mu), g).is_ok());
        }
    }

    #[test]
    fn scalar_connection_rescaling_commutes_with_su2(
        map in random_map(), seed in any::<u64>(), lr in -2.0..2.0_f64, li in -2.0..2.0_f64,
    ) {
        prop_assume!(lr != 0.0 || li != 0.0);
        let l = lattice();
        let setup = random_gauge_setup(&mut ChaCha8Rng::seed_from_u64(seed), &l).unwrap();
        let cf = rescaled(&setup.connection, Complex64::new(lr, li));
        let moved = setup.gauge.transformed_su2(&map).unwrap();
        for site in l.interior_sites() {
            for mu in 0..2 {
                let r = covariance_residual(&setup.psi, &setup.scaling, &cf, &setup.gauge, &map, site, mu).unwrap();
                prop_assert!(r <= 1e-10);
                // α' does not depend on the scalar connection at all
                let x = l.coords(site);
                let direct = su2_transform(setup.gauge.alpha(site, mu), &map.value(&x), &map.grad(&x, mu), setup.gauge.couplings().g).unwrap();
                prop_assert_eq!(moved.alpha(site, mu), direct);
            }
        }
    }

    #[test]
    fn u1_round_trip_restores_e(seed in any::<u64>(), amp in -2.0..2.0_f64, kx in -3.0..3.0_f64, ky in -3.0..3.0_f64) {
        let l = lattice();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let setup = random_gauge_setup(&mut rng, &l).unwrap();
        prop_assume!(setup.gauge.has_e());
        let map = U1Map::new(RealField::Wave { amp, k: vec![kx, ky], phase: 0.1 });
        let back = setup.gauge.transformed_u1(&map).unwrap().transformed_u1(&map.dagger()).unwrap();
        for site in 0..l.n_sites() {
            for mu in 0..2 {
                let (e0, e1) = (setup.gauge.e(site, mu).unwrap(), back.e(site, mu).unwrap());
                prop_assert!((e0 - e1).norm() <= 1e-12 * e0.norm().max(1.0));
            }
        }
    }

    #[test]
    fn trivial_scaling_reduces_to_standard_form(seed in any::<u64>()) {
        let l = lattice();
        let setup = random_reduction_setup(&mut ChaCha8Rng::seed_from_u64(seed), &l).unwrap();
        for site in l.interior_sites() {
            for mu in 0..2 {
                let gap = reduce_to_standard(&setup.psi, &setup.scaling, &setup.connection, &setup.gauge, site, mu).unwrap();
                prop_assert!(gap <= 1e-12);
            }
        }
    }
}
