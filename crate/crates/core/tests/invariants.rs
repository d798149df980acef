use cosserat_plate::dispersion::spectrum;
use cosserat_plate::material::technical_constants;
use cosserat_plate::operators::{build_extensional, build_flexural, literal_flexural};
use cosserat_plate::plate_constitutive::{PlateCompliance, PlateStiffness};
use cosserat_plate::plate_fields::{inertia_constants, LoadSet, PlateStrain, PlateStress};
use cosserat_plate::verify::random_material;
use cosserat_plate::MaterialParams;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn material(seed: u64) -> MaterialParams {
    random_material(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compliance_inverts_stiffness(seed in any::<u64>(), h in 0.02f64..1.0, e in prop::array::uniform20(-1.0f64..1.0)) {
        let p = material(seed);
        let tc = technical_constants(&p, h).unwrap();
        let e = PlateStrain::from_array(e);
        let loads = LoadSet { p: 0.3, sigma0: -0.2, v: 0.0, t: 0.7 };
        let s = PlateStiffness::new(&tc).stress(&e, &loads);
        let back = PlateCompliance::new(&p, h).unwrap().strain(&s, &loads, -loads.p);
        for (a, b) in back.to_array().iter().zip(e.to_array()) {
            prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn plate_energy_positive(seed in any::<u64>(), h in 0.02f64..1.0, s in prop::array::uniform20(-1.0f64..1.0)) {
        let c = PlateCompliance::new(&material(seed), h).unwrap();
        let s = PlateStress::from_array(s);
        prop_assume!(s.max_abs() > 1e-6);
        prop_assert!(c.energy(&s, &LoadSet::default(), 0.0) > 0.0);
    }

    #[test]
    fn symbol_is_hermitian(seed in any::<u64>(), xi in prop::array::uniform2(-20.0f64..20.0)) {
        let p = material(seed);
        let tc = technical_constants(&p, 0.2).unwrap();
        let i = inertia_constants(&p, 0.2).unwrap();
        let f = build_flexural(&tc, &i);
        let (re, im) = f.symbol.fourier(xi);
        let scale = re.abs().max().max(1.0);
        prop_assert!((re - re.transpose()).abs().max() <= 1e-13 * scale);
        prop_assert!((im + im.transpose()).abs().max() <= 1e-13 * scale);
        let e = build_extensional(&tc, &i);
        let (re, im) = e.symbol.fourier(xi);
        let scale = re.abs().max().max(1.0);
        prop_assert!((re - re.transpose()).abs().max() <= 1e-13 * scale);
        prop_assert!((im + im.transpose()).abs().max() <= 1e-13 * scale);
    }

    #[test]
    fn printed_zeros_stay_zero(seed in any::<u64>(), h in 0.02f64..1.0) {
        let p = material(seed);
        let tc = technical_constants(&p, h).unwrap();
        let i = inertia_constants(&p, h).unwrap();
        let shipped = build_flexural(&tc, &i).symbol;
        let printed = literal_flexural(&tc);
        for r in 0..6 {
            for c in 0..6 {
                if printed.entries[r][c].is_zero() {
                    prop_assert!(shipped.entries[r][c].is_zero(), "entry {} {}", r + 1, c + 1);
                }
            }
        }
    }

    #[test]
    fn frequencies_even_and_isotropic(seed in any::<u64>(), k in 0.01f64..30.0, th in 0.0f64..std::f64::consts::TAU) {
        let mut p = material(seed);
        // distinct in-plane micro-inertias would break rotational symmetry
        p.j[1] = p.j[0];
        let tc = technical_constants(&p, 0.1).unwrap();
        let i = inertia_constants(&p, 0.1).unwrap();
        let f = build_flexural(&tc, &i);
        let xi = [k * th.cos(), k * th.sin()];
        let a = spectrum(&f.symbol, &f.mass, xi, false).unwrap().omega;
        let b = spectrum(&f.symbol, &f.mass, [-xi[0], -xi[1]], false).unwrap().omega;
        let c = spectrum(&f.symbol, &f.mass, [k, 0.0], false).unwrap().omega;
        let top = a[5];
        for n in 0..6 {
            prop_assert!((a[n] - b[n]).abs() <= 1e-7 * top);
            prop_assert!((a[n] - c[n]).abs() <= 1e-7 * top);
        }
    }

    #[test]
    fn frequencies_scale_with_root_modulus(seed in any::<u64>(), scale in 0.1f64..10.0, xi in prop::array::uniform2(-10.0f64..10.0)) {
        let p = material(seed);
        let q = MaterialParams {
            lambda: p.lambda * scale,
            mu: p.mu * scale,
            alpha: p.alpha * scale,
            beta: p.beta * scale,
            gamma: p.gamma * scale,
            epsilon: p.epsilon * scale,
            ..p
        };
        let omega = |m: &MaterialParams| {
            let tc = technical_constants(m, 0.1).unwrap();
            let i = inertia_constants(m, 0.1).unwrap();
            let e = build_extensional(&tc, &i);
            let f = build_flexural(&tc, &i);
            let mut w = spectrum(&f.symbol, &f.mass, xi, false).unwrap().omega;
            w.extend(spectrum(&e.symbol, &e.mass, xi, false).unwrap().omega);
            w
        };
        let (a, b) = (omega(&p), omega(&q));
        let top = a.iter().copied().fold(0.0, f64::max);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x * scale.sqrt() - y).abs() <= 1e-7 * top * scale.sqrt());
        }
        prop_assert!(close(a[5] * scale.sqrt(), b[5], 1e-9));
    }
}
