//! Structural properties of the copula: axioms, closed-form
//! cross-equalities, extreme-value behavior, and orthant dependence.

use proptest::prelude::*;
use sibuya_core::model::jointure;
use sibuya_core::rng::Stream;
use sibuya_core::{JumpModel, RateFunction, ReducedParams, SibuyaModel, TriggerDependence};

fn constant_model(mus: &[f64], lambda: f64, h: f64) -> SibuyaModel {
    let drifts = mus
        .iter()
        .map(|&mu| RateFunction::constant(mu).unwrap())
        .collect();
    let jump = JumpModel::new(h, RateFunction::constant(lambda).unwrap()).unwrap();
    SibuyaModel::new(drifts, jump, TriggerDependence::Independent).unwrap()
}

fn bivariate_fixture() -> SibuyaModel {
    constant_model(&[0.05, 0.10], 0.5, 1.0)
}

fn linear_mixed_intercepts_model() -> SibuyaModel {
    let drifts = vec![
        RateFunction::linear(1.0, 5.0).unwrap(),
        RateFunction::linear(100.0, 0.0).unwrap(),
    ];
    let jump = JumpModel::new(10.0, RateFunction::linear(0.1, 4.0).unwrap()).unwrap();
    SibuyaModel::new(drifts, jump, TriggerDependence::Independent).unwrap()
}

/// Random rate of any shape with moderate coefficients.
fn random_rate(stream: &mut Stream) -> RateFunction {
    match stream.next_u64() % 3 {
        0 => RateFunction::constant(0.05 + 2.0 * stream.next_uniform()).unwrap(),
        1 => RateFunction::linear(
            2.0 * stream.next_uniform(),
            0.05 + 2.0 * stream.next_uniform(),
        )
        .unwrap(),
        _ => {
            let b1 = 0.2 + stream.next_uniform();
            let b2 = b1 + 0.2 + stream.next_uniform();
            RateFunction::piecewise(
                vec![b1, b2],
                vec![
                    0.05 + 2.0 * stream.next_uniform(),
                    2.0 * stream.next_uniform(),
                    0.05 + 2.0 * stream.next_uniform(),
                ],
            )
            .unwrap()
        }
    }
}

fn random_model(stream: &mut Stream, dimension: usize) -> SibuyaModel {
    let drifts = (0..dimension).map(|_| random_rate(stream)).collect();
    let jump = JumpModel::new(0.2 + 5.0 * stream.next_uniform(), random_rate(stream)).unwrap();
    SibuyaModel::new(drifts, jump, TriggerDependence::Independent).unwrap()
}

#[test]
fn survival_routes_agree_on_random_models() {
    let mut stream = Stream::substream(0x0515, 0);
    let mut checked = 0;
    while checked < 1000 {
        let d = 1 + (stream.next_u64() % 6) as usize;
        let model = random_model(&mut stream, d);
        // draw times through the marginal quantiles to keep survival
        // probabilities well away from underflow
        let times: Vec<f64> = (0..d)
            .map(|i| {
                let u = 0.05 + 0.9 * stream.next_uniform();
                model.marginal_survival_inverse(i, u).unwrap()
            })
            .collect();
        let transform_route = model.joint_survival(&times).unwrap();
        let jointure_route = model.joint_survival_jointure_form(&times).unwrap();
        let exponent_route = model.joint_survival_exponent_form(&times).unwrap();
        let scale = transform_route.abs().max(1.0);
        assert!(
            (transform_route - jointure_route).abs() <= 1e-12 * scale,
            "transform {transform_route} vs jointure {jointure_route} (d = {d})"
        );
        assert!(
            (transform_route - exponent_route).abs() <= 1e-12 * scale,
            "transform {transform_route} vs exponent {exponent_route} (d = {d})"
        );
        checked += 1;
    }
}

#[test]
fn ordered_power_form_matches_composition_on_random_constant_models() {
    let mut stream = Stream::substream(0x0A12, 0);
    for _ in 0..300 {
        let d = 2 + (stream.next_u64() % 4) as usize;
        let mus: Vec<f64> = (0..d).map(|_| 0.02 + stream.next_uniform()).collect();
        let lambda = 0.05 + 2.0 * stream.next_uniform();
        let h = 0.1 + 4.0 * stream.next_uniform();
        let model = constant_model(&mus, lambda, h);
        let params = model.reduced().unwrap();
        let u: Vec<f64> = (0..d)
            .map(|_| 0.02 + 0.96 * stream.next_uniform())
            .collect();
        let closed = params.copula(&u).unwrap();
        let composed = model.copula_via_survival(&u).unwrap();
        assert!(
            (closed - composed).abs() <= 1e-12,
            "closed {closed} vs composed {composed} (d = {d})"
        );
    }
}

#[test]
fn jointure_factors_are_at_least_one_above_unit_argument() {
    let mut stream = Stream::substream(0x0A13, 0);
    for _ in 0..500 {
        let x = 1.0 + 9.0 * stream.next_uniform();
        let y = 6.0 * stream.next_uniform();
        let z = 10.0 * stream.next_uniform();
        assert!(jointure(x, y, z) >= 1.0 - 1e-15, "phi({x}, {y}, {z})");
    }
}

#[test]
fn copula_is_grounded_with_uniform_margins() {
    let mut stream = Stream::substream(0xF00D, 1);
    for _ in 0..200 {
        let d = 2 + (stream.next_u64() % 4) as usize;
        let model = random_model(&mut stream, d);
        let mut u: Vec<f64> = (0..d).map(|_| 0.05 + 0.9 * stream.next_uniform()).collect();

        let pick = (stream.next_u64() % d as u64) as usize;
        let keep = u[pick];
        for (j, v) in u.iter_mut().enumerate() {
            if j != pick {
                *v = 1.0;
            }
        }
        let margin = model.copula(&u).unwrap();
        assert!(
            (margin - keep).abs() <= 1e-9,
            "margin {margin} vs coordinate {keep} (d = {d})"
        );

        u[pick] = 0.0;
        assert_eq!(model.copula(&u).unwrap(), 0.0);
    }
}

#[test]
fn copula_dominates_the_independence_copula() {
    let models = [
        bivariate_fixture(),
        linear_mixed_intercepts_model(),
        constant_model(&[0.3, 0.2, 0.6], 1.0, 2.0),
    ];
    for model in &models {
        let d = model.dimension();
        let steps = 6usize;
        let mut index = vec![1usize; d];
        loop {
            let u: Vec<f64> = index.iter().map(|&i| i as f64 / steps as f64).collect();
            let copula = model.copula(&u).unwrap();
            let product: f64 = u.iter().product();
            assert!(
                copula >= product - 1e-12,
                "C({u:?}) = {copula} below product {product}"
            );
            let mut carry = 0;
            for slot in index.iter_mut() {
                *slot += 1;
                if *slot > steps {
                    *slot = 1;
                    carry += 1;
                } else {
                    break;
                }
            }
            if carry == d {
                break;
            }
        }
    }
}

#[test]
fn constant_rate_copulas_are_max_stable() {
    let models = [
        bivariate_fixture(),
        constant_model(&[0.3, 0.2, 0.6], 1.0, 2.0),
        constant_model(&[0.1, 0.1, 0.4, 0.7], 0.7, 0.8),
    ];
    for model in &models {
        let d = model.dimension();
        let mut stream = Stream::substream(0xEC0, d as u64);
        for _ in 0..200 {
            let u: Vec<f64> = (0..d).map(|_| 0.05 + 0.9 * stream.next_uniform()).collect();
            let base = model.copula(&u).unwrap();
            for s in [0.5, 2.0, 3.7] {
                let powered: Vec<f64> = u.iter().map(|&v| v.powf(s)).collect();
                let lhs = model.copula(&powered).unwrap();
                let rhs = base.powf(s);
                assert!(
                    (lhs - rhs).abs() <= 1e-12,
                    "C(u^{s}) = {lhs} vs C(u)^{s} = {rhs}"
                );
            }
        }
    }
}

#[test]
fn homogeneous_constant_models_reduce_to_ordered_power_weights() {
    // C(u) = prod_i u_(i)^{1 - c (1 - e^{-H(i-1)})} over the ascending
    // order statistics, c = lambda (1 - e^{-H}) / (mu + lambda (1 - e^{-H})):
    // the smallest coordinate keeps full weight, larger ones are damped.
    let mut stream = Stream::substream(0x1F, 0);
    for d in 2..=8 {
        let mu = 0.05 + stream.next_uniform();
        let lambda = 0.1 + 2.0 * stream.next_uniform();
        let h = 0.2 + 3.0 * stream.next_uniform();
        let model = constant_model(&vec![mu; d], lambda, h);
        let damp = -(-h).exp_m1();
        let c = lambda * damp / (mu + lambda * damp);
        for _ in 0..50 {
            let mut u: Vec<f64> = (0..d).map(|_| 0.05 + 0.9 * stream.next_uniform()).collect();
            let copula = model.copula(&u).unwrap();
            u.sort_by(f64::total_cmp);
            let mut expected = 1.0;
            for (i, &v) in u.iter().enumerate() {
                let weight = 1.0 - c * -(-h * i as f64).exp_m1();
                expected *= v.powf(weight);
            }
            assert!(
                (copula - expected).abs() <= 1e-12,
                "d = {d}: copula {copula} vs frailty form {expected}"
            );
        }
    }
}

#[test]
fn bivariate_constant_models_are_marshall_olkin_on_a_grid() {
    let model = bivariate_fixture();
    let thetas = model.reduced().unwrap().thetas();
    let n = 101;
    for i in 0..n {
        for j in 0..n {
            let u1 = i as f64 / (n - 1) as f64;
            let u2 = j as f64 / (n - 1) as f64;
            let expected = (u1.powf(1.0 - thetas[0]) * u2).min(u1 * u2.powf(1.0 - thetas[1]));
            let got = model.copula(&[u1, u2]).unwrap();
            assert!(
                (got - expected).abs() <= 1e-12,
                "({u1}, {u2}): {got} vs {expected}"
            );
        }
    }
}

proptest! {
    #[test]
    fn rectangle_mass_is_non_negative(
        x1 in 0.0..1.0f64,
        x2 in 0.0..1.0f64,
        y1 in 0.0..1.0f64,
        y2 in 0.0..1.0f64,
        pick in 0usize..2,
    ) {
        let model = if pick == 0 { bivariate_fixture() } else { linear_mixed_intercepts_model() };
        let (a1, b1) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
        let (a2, b2) = if y1 <= y2 { (y1, y2) } else { (y2, y1) };
        let mass = model.copula(&[b1, b2]).unwrap() - model.copula(&[a1, b2]).unwrap()
            - model.copula(&[b1, a2]).unwrap()
            + model.copula(&[a1, a2]).unwrap();
        prop_assert!(mass >= -1e-12, "box [{a1},{b1}]x[{a2},{b2}] has mass {mass}");
    }

    #[test]
    fn diagonal_exponent_matches_log_ratio(
        mu1 in 0.01..1.0f64,
        mu2 in 0.01..1.0f64,
        lambda in 0.05..2.0f64,
        h in 0.1..4.0f64,
        u in 0.05..0.95f64,
    ) {
        let params = ReducedParams::new(vec![mu1, mu2], lambda, h).unwrap();
        let model = constant_model(&[mu1, mu2], lambda, h);
        let diag = model.copula_diagonal(u).unwrap();
        let implied = diag.ln() / u.ln();
        prop_assert!((implied - params.beta()).abs() <= 1e-9,
            "implied exponent {implied} vs beta {}", params.beta());
    }
}
