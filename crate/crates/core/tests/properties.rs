use proptest::prelude::*;
use vilenkin::hardy::{conditional_expectation, hardy_quasinorm_of, FiniteMartingale};
use vilenkin::{Complex64, GeneratorSequence, GridFunction, VilenkinSystem};

fn generator(max_order: usize) -> impl Strategy<Value = GeneratorSequence> {
    prop::collection::vec(2usize..=5, 1..=7).prop_filter_map("order too large", move |mut r| {
        while r.iter().product::<usize>() > max_order {
            r.pop();
        }
        (!r.is_empty()).then(|| GeneratorSequence::new(r).unwrap())
    })
}

fn function_on(g: GeneratorSequence) -> impl Strategy<Value = GridFunction> {
    let n = g.order();
    prop::collection::vec((-4.0f64..4.0, -4.0f64..4.0), n).prop_map(move |v| {
        GridFunction::new(
            g.clone(),
            v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect(),
        )
        .unwrap()
    })
}

fn generator_and_function(max_order: usize) -> impl Strategy<Value = GridFunction> {
    generator(max_order).prop_flat_map(function_on)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn digit_round_trip(g in generator(4096), seed in any::<u64>()) {
        let n = (seed as usize) % g.order();
        let digits = g.to_digits(n).unwrap();
        prop_assert_eq!(g.from_digits(digits.digits()).unwrap(), n);
        for (k, &d) in digits.digits().iter().enumerate() {
            prop_assert!(d < g.radix(k));
        }
    }

    #[test]
    fn digit_sum_bounds(g in generator(1 << 16), seed in any::<u64>()) {
        let n = (seed as usize) % g.order();
        let digits = g.to_digits(n).unwrap();
        for k in 0..g.depth() {
            let m_next = g.scale(k + 1) as u128;
            let squares: u128 = (0..=k)
                .map(|s| (digits.digits()[s] * g.scale(s)) as u128)
                .map(|v| v * v)
                .sum();
            prop_assert!(squares < m_next * m_next);
            let maximal: usize = (0..=k).map(|s| (g.radix(s) - 1) * g.scale(s)).sum();
            prop_assert_eq!(maximal, g.scale(k + 1) - 1);
            let maximal_squares: u128 = (0..=k)
                .map(|s| ((g.radix(s) - 1) * g.scale(s)) as u128)
                .map(|v| v * v)
                .sum();
            prop_assert!(maximal_squares < m_next * m_next);
        }
    }

    #[test]
    fn group_laws(g in generator(512), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let order = g.order();
        let (a, b, c) = (a as usize % order, b as usize % order, c as usize % order);
        prop_assert_eq!(g.add_index(a, b), g.add_index(b, a));
        prop_assert_eq!(g.add_index(g.add_index(a, b), c), g.add_index(a, g.add_index(b, c)));
        prop_assert_eq!(g.add_index(a, 0), a);
        prop_assert_eq!(g.add_index(g.sub_index(a, b), b), a);
    }

    #[test]
    fn refinement_preserves_norms(f in generator_and_function(512), extra in prop::collection::vec(2usize..=4, 1..=3)) {
        let mut radices = f.generator().radices().to_vec();
        radices.extend(extra);
        let deeper = GeneratorSequence::new(radices).unwrap();
        let fine = f.refine(&deeper).unwrap();
        for p in [0.5, 1.0, 2.0] {
            let a = f.lp_quasinorm(p).unwrap();
            let b = fine.lp_quasinorm(p).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }
        prop_assert!((f.integrate() - fine.integrate()).norm() < 1e-12);
    }

    #[test]
    fn half_quasi_triangle(pair in generator(1024).prop_flat_map(|g| (function_on(g.clone()), function_on(g)))) {
        let (f, g) = pair;
        let sum = f.add(&g).unwrap().lp_power(0.5).unwrap();
        prop_assert!(sum <= f.lp_power(0.5).unwrap() + g.lp_power(0.5).unwrap() + 1e-12);
    }

    #[test]
    fn chebyshev_weak_bound(f in generator_and_function(1024)) {
        for p in [0.5, 1.0, 2.0] {
            prop_assert!(f.weak_lp(p).unwrap() <= f.lp_power(p).unwrap() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn transform_round_trip_and_parseval(f in generator_and_function(1024)) {
        let system = VilenkinSystem::new(f.generator().clone());
        let spectrum = system.forward(&f).unwrap();
        let back = system.inverse(&spectrum).unwrap();
        let scale = f.sup_norm().max(1.0);
        prop_assert!(back.max_abs_diff(&f).unwrap() <= 1e-10 * scale);
        let energy = f.lp_power(2.0).unwrap();
        prop_assert!((spectrum.energy() - energy).abs() <= 1e-10 * energy.max(1.0));
    }

    #[test]
    fn conditional_expectation_is_the_scale_partial_sum(f in generator_and_function(1024)) {
        let g = f.generator().clone();
        let system = VilenkinSystem::new(g.clone());
        for n in 0..=g.depth() {
            let e = conditional_expectation(&f, n).unwrap();
            let s = system.partial_sum(&f, g.scale(n)).unwrap();
            prop_assert!(e.max_abs_diff(&s).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn maximal_function_dominates(f in generator_and_function(1024)) {
        let m = FiniteMartingale::generated(&f);
        let star = m.maximal_function();
        for i in 0..f.len() {
            prop_assert!(star.value(i).re + 1e-12 >= f.value(i).norm());
        }
        prop_assert!(m.martingale_defect() <= 1e-12 * f.sup_norm().max(1.0));
        let h = hardy_quasinorm_of(&f, 0.5).unwrap();
        prop_assert!((h - m.hardy_quasinorm(0.5).unwrap()).abs() <= 1e-10 * h.max(1.0));
    }

    #[test]
    fn variation_bounds(g in generator(1 << 16), seed in any::<u64>()) {
        let n = (seed as usize) % g.order();
        let v = g.variation(n).unwrap();
        let len = g.to_digits(n).unwrap().order().map_or(0, |o| o + 1);
        prop_assert!(v <= 2 * len);
        prop_assert_eq!(v == 0, n == 0);
    }
}
