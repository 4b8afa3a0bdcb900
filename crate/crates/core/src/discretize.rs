//! Zero-order-hold discretization through the matrix exponential.

use nalgebra::{DMatrix, DVector};

use crate::error::{contract, Error, Result};
use crate::model::{ContinuousModel, DiscreteModel};
use crate::scalar::Real;

// Largest 1-norms for which the [m/m] Padé approximant reaches double
// precision without scaling (Higham, 2005).
const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

const PADE_3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE_9: [f64; 10] = [
    17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0, 2162160.0, 110880.0,
    3960.0, 90.0, 1.0,
];
const PADE_13: [f64; 14] = [
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0, 10559470521600.0, 670442572800.0, 33522128640.0, 1323241920.0,
    40840800.0, 960960.0, 16380.0, 182.0, 1.0,
];

fn norm1<T: Real>(a: &DMatrix<T>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|v| v.abs().to_f64_lossy()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(A·t)` by scaling and squaring with a diagonal Padé approximant.
pub fn matrix_exponential<T: Real>(a: &DMatrix<T>, t: T) -> Result<DMatrix<T>> {
    if !a.is_square() {
        return Err(contract(format!(
            "matrix exponential needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if !t.is_finite_value() || a.iter().any(|v| !v.is_finite_value()) {
        return Err(Error::NonFinite("matrix exponential input".into()));
    }
    let n = a.nrows();
    let at = a * t;
    let norm = norm1(&at);
    let ident = DMatrix::<T>::identity(n, n);
    let a2 = &at * &at;

    let (u, v, squarings) = if norm <= THETA_3 {
        let (u, v) = pade_low(&at, &a2, &ident, &PADE_3);
        (u, v, 0)
    } else if norm <= THETA_5 {
        let (u, v) = pade_low(&at, &a2, &ident, &PADE_5);
        (u, v, 0)
    } else if norm <= THETA_7 {
        let (u, v) = pade_low(&at, &a2, &ident, &PADE_7);
        (u, v, 0)
    } else if norm <= THETA_9 {
        let (u, v) = pade_low(&at, &a2, &ident, &PADE_9);
        (u, v, 0)
    } else {
        let s = (norm / THETA_13).log2().ceil().max(0.0) as i32;
        let scale = T::lit(2f64.powi(-s));
        let scaled = &at * scale;
        let scaled2 = &a2 * (scale * scale);
        let (u, v) = pade_13(&scaled, &scaled2, &ident);
        (u, v, s)
    };

    let lu = (&v - &u).lu();
    let mut r = lu
        .solve(&(&v + &u))
        .ok_or_else(|| Error::NonFinite("singular Padé denominator".into()))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}

/// Odd/even Padé parts for degrees 3..9 from successive even powers.
fn pade_low<T: Real>(a: &DMatrix<T>, a2: &DMatrix<T>, ident: &DMatrix<T>, b: &[f64]) -> (DMatrix<T>, DMatrix<T>) {
    let mut odd = ident * T::lit(b[1]);
    let mut even = ident * T::lit(b[0]);
    let mut power = ident.clone();
    for k in 1..b.len() / 2 {
        power = &power * a2;
        odd += &power * T::lit(b[2 * k + 1]);
        even += &power * T::lit(b[2 * k]);
    }
    (a * odd, even)
}

fn pade_13<T: Real>(a: &DMatrix<T>, a2: &DMatrix<T>, ident: &DMatrix<T>) -> (DMatrix<T>, DMatrix<T>) {
    let b = |i: usize| T::lit(PADE_13[i]);
    let a4 = a2 * a2;
    let a6 = &a4 * a2;
    let inner_u = &a6 * b(13) + &a4 * b(11) + a2 * b(9);
    let u = a * (&a6 * inner_u + &a6 * b(7) + &a4 * b(5) + a2 * b(3) + ident * b(1));
    let inner_v = &a6 * b(12) + &a4 * b(10) + a2 * b(8);
    let v = &a6 * inner_v + &a6 * b(6) + &a4 * b(4) + a2 * b(2) + ident * b(0);
    (u, v)
}

/// Discretizes at sample time `dt` under zero-order hold on `u` and `f`.
///
/// `B_d` and `D_d` come from the top-right block of
/// `exp([[A, [B D]], [0, 0]]·dt)`, which equals `∫₀^dt e^{Aτ} dτ · [B D]` and
/// stays well defined when `A` is singular.
#[allow(non_snake_case)]
pub fn discretize<T: Real>(model: &ContinuousModel<T>, dt: T) -> Result<DiscreteModel<T>> {
    if !(dt > T::zero()) || !dt.is_finite_value() {
        return Err(contract(format!("sample time must be > 0, got {dt}")));
    }
    let m = model.zone_count;
    let p = model.B.ncols();
    if model.A.nrows() != m || model.A.ncols() != m || model.B.nrows() != m || model.D.len() != m {
        return Err(contract("continuous model matrices are inconsistent with zone_count"));
    }
    let n = m + p + 1;
    let mut aug = DMatrix::<T>::zeros(n, n);
    aug.view_mut((0, 0), (m, m)).copy_from(&model.A);
    aug.view_mut((0, m), (m, p)).copy_from(&model.B);
    aug.view_mut((0, m + p), (m, 1)).copy_from(&model.D);

    let e = matrix_exponential(&aug, dt)?;
    let A_d = e.view((0, 0), (m, m)).into_owned();
    let B_d = e.view((0, m), (m, p)).into_owned();
    let D_d: DVector<T> = e.view((0, m + p), (m, 1)).column(0).into_owned();
    Ok(DiscreteModel { A_d, B_d, D_d, dt, occupant_coeffs: model.occupant_coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::OccupantHeatCoefficients;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel_err(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn zero_matrix_gives_identity() {
        let e = matrix_exponential(&DMatrix::<f64>::zeros(4, 4), 3600.0).unwrap();
        assert_eq!(e, DMatrix::identity(4, 4));
    }

    #[test]
    fn diagonal_decay() {
        let tau = 5000.0;
        let a = DMatrix::from_diagonal_element(3, 3, -1.0 / tau);
        let e = matrix_exponential(&a, tau).unwrap();
        for i in 0..3 {
            assert!((e[(i, i)] - (-1.0f64).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn non_square_rejected() {
        assert!(matches!(
            matrix_exponential(&DMatrix::<f64>::zeros(2, 3), 1.0),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn symmetric_matches_eigendecomposition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let r = DMatrix::from_fn(5, 5, |_, _| rng.random_range(-1.0..1.0) / 3600.0);
            let a = (&r + r.transpose()) * 0.5;
            let eig = a.clone().symmetric_eigen();
            let exp_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(|l: f64| (l * 3600.0).exp()));
            let oracle = &eig.eigenvectors * exp_diag * eig.eigenvectors.transpose();
            let e = matrix_exponential(&a, 3600.0).unwrap();
            assert!(rel_err(&e, &oracle) < 1e-10, "{}", rel_err(&e, &oracle));
        }
    }

    #[test]
    fn accurate_across_pade_degrees() {
        // Nilpotent-plus-diagonal matrix with a closed form: exp([[a, b], [0, a]]) = e^a [[1, b], [0, 1]].
        for &a in &[1e-3f64, 0.1, 0.5, 1.5, 4.0, 10.0] {
            let m = DMatrix::from_row_slice(2, 2, &[-a, a, 0.0, -a]);
            let e = matrix_exponential(&m, 1.0).unwrap();
            let exact = DMatrix::from_row_slice(2, 2, &[1.0, a, 0.0, 1.0]) * (-a).exp();
            assert!(rel_err(&e, &exact) < 1e-13, "a = {a}: {}", rel_err(&e, &exact));
        }
    }

    fn scalar_model(r: f64, c: f64) -> ContinuousModel<f64> {
        // One zone, exterior wall only; inputs [T_G, T_E, Q^z, Q_ghi].
        ContinuousModel {
            A: DMatrix::from_element(1, 1, -1.0 / (r * c)),
            B: DMatrix::from_row_slice(1, 4, &[0.0, 1.0 / (r * c), 1.0 / c, 0.0]),
            D: DVector::zeros(1),
            occupant_coeffs: OccupantHeatCoefficients::zero(),
            zone_count: 1,
        }
    }

    #[test]
    fn single_zone_analytic() {
        let d = discretize(&scalar_model(2.0, 1800.0), 3600.0).unwrap();
        let e = (-1.0f64).exp();
        assert!((d.A_d[(0, 0)] - e).abs() < 1e-15);
        assert!((d.B_d[(0, 1)] - (1.0 - e)).abs() < 1e-15);
        // heater column: R·(1 − e^{-1})
        assert!((d.B_d[(0, 2)] - 2.0 * (1.0 - e)).abs() < 1e-14);
    }

    #[test]
    fn bad_sample_time_rejected() {
        assert!(discretize(&scalar_model(2.0, 1800.0), 0.0).is_err());
        assert!(discretize(&scalar_model(2.0, 1800.0), -1.0).is_err());
    }

    fn random_model(rng: &mut ChaCha8Rng, m: usize) -> ContinuousModel<f64> {
        let mut a = DMatrix::from_fn(m, m, |_, _| rng.random_range(0.0..1.0) / 5000.0);
        for i in 0..m {
            a[(i, i)] = -(a.row(i).sum() + rng.random_range(1e-5..1e-3));
        }
        ContinuousModel {
            A: a,
            B: DMatrix::from_fn(m, m + 3, |_, _| rng.random_range(-1e-3..1e-3)),
            D: DVector::from_fn(m, |_, _| rng.random_range(0.0..1e-4)),
            occupant_coeffs: OccupantHeatCoefficients::zero(),
            zone_count: m,
        }
    }

    #[test]
    fn augmented_matches_inverse_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let model = random_model(&mut rng, 3);
            let d = discretize(&model, 3600.0).unwrap();
            let a_inv = model.A.clone().try_inverse().unwrap();
            let ident = DMatrix::<f64>::identity(3, 3);
            let b_oracle = &a_inv * (&d.A_d - &ident) * &model.B;
            let d_oracle = &a_inv * (&d.A_d - &ident) * &model.D;
            assert!(rel_err(&d.B_d, &b_oracle) < 1e-10);
            assert!((&d.D_d - d_oracle).norm() / d.D_d.norm() < 1e-10);
        }
    }

    #[test]
    fn singular_state_matrix_is_fine() {
        // Two zones coupled only to each other: A has a zero eigenvalue.
        let g = 1.0 / 1000.0;
        let model = ContinuousModel {
            A: DMatrix::from_row_slice(2, 2, &[-g, g, g, -g]),
            B: DMatrix::from_row_slice(2, 5, &[0.0, 0.0, 1e-3, 0.0, 0.0, 0.0, 0.0, 0.0, 1e-3, 0.0]),
            D: DVector::zeros(2),
            occupant_coeffs: OccupantHeatCoefficients::zero(),
            zone_count: 2,
        };
        let d = discretize(&model, 3600.0).unwrap();
        // heat injected in zone 1 is conserved: column sums of the heater block equal 1e-3·dt
        let injected: f64 = d.B_d[(0, 2)] + d.B_d[(1, 2)];
        assert!((injected - 3.6).abs() < 1e-12);
    }

    #[test]
    fn short_step_is_near_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let model = random_model(&mut rng, 4);
        let d = discretize(&model, 1e-6).unwrap();
        let ident = DMatrix::<f64>::identity(4, 4);
        assert!((&d.A_d - ident).norm() < 1e-6 * model.A.norm() * 2.0);
        assert!(d.B_d.norm() < 1e-6 * model.B.norm() * 2.0);
    }

    proptest! {
        #[test]
        fn semigroup(seed in 0u64..1000, m in 1usize..6, dt in 60.0f64..7200.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let model = random_model(&mut rng, m);
            let one = discretize(&model, dt).unwrap();
            let two = discretize(&model, 2.0 * dt).unwrap();
            prop_assert!((&one.A_d * &one.A_d - &two.A_d).norm() < 1e-9);
        }

        #[test]
        fn stable_network_contracts(seed in 0u64..1000, m in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let model = random_model(&mut rng, m);
            let d = discretize(&model, 3600.0).unwrap();
            let radius = d.A_d.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
            prop_assert!(radius < 1.0);
        }
    }
}
