use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quadnorm::linalg::{determinant, inverse, mat_cos_sin, mat_exp, symplectic_eigenvalues, CMatrix, RMatrix, SymplecticStructure};
use quadnorm::mehler::{abs_sinh_2t_sq, davies_mehler, mehler_symbol, region_report};
use quadnorm::norms::{davies_norm, embedding_norm_ab, general_gaussian_norm, general_gaussian_norm_report};
use quadnorm::oracles::{
    compose_kernels, embedding_ratio, fock_norm_quadrature, gaussian_scan_embedding, kernel_from_weyl, random_elliptic,
    random_integrable, GaussianState,
};
use quadnorm::norms::HolomorphicWeight;
use quadnorm::sharp::{davies_gram_symbol, gram_symbol, sharp_product};
use quadnorm::symbols::{fundamental_matrix, ho_reduce_1d, mobius_transport, CanonicalMap2x2, QuadraticForm};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_complex(r: &mut ChaCha8Rng, n: usize, scale: f64) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).scale_re(scale)
}

/// Product of shears `[[I, S], [0, I]]`, `[[I, 0], [S, I]]` and a block `diag(G, G^{-T})`.
fn random_symplectic(r: &mut ChaCha8Rng, n: usize) -> RMatrix {
    let sym = |r: &mut ChaCha8Rng| {
        let m = RMatrix::from_fn(n, n, |_, _| r.gen_range(-0.7..0.7));
        (&m + &m.transpose()).scale(0.5)
    };
    let (id, zero) = (RMatrix::identity(n), RMatrix::zeros(n, n));
    let upper = RMatrix::from_blocks(&id, &sym(r), &zero, &id);
    let lower = RMatrix::from_blocks(&id, &zero, &sym(r), &id);
    let g = &RMatrix::identity(n) + &RMatrix::from_fn(n, n, |_, _| r.gen_range(-0.3..0.3));
    let g_inv_t = inverse(&g).unwrap().transpose();
    let block = RMatrix::from_blocks(&g, &zero, &zero, &g_inv_t);
    &(&upper * &lower) * &block
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn exp_of_negation_is_inverse(seed in any::<u64>(), n in 1usize..7, norm in 0.1f64..5.0) {
        let mut r = rng(seed);
        let m = random_complex(&mut r, n, 1.0);
        let m = m.scale_re(norm / m.norm_fro().max(1e-300));
        let prod = &mat_exp(&m) * &mat_exp(&m.scale_re(-1.0));
        prop_assert!(prod.approx_eq(&CMatrix::identity(n), 1e-10));
    }

    #[test]
    fn cos_squared_plus_sin_squared(seed in any::<u64>(), n in 1usize..9) {
        let mut r = rng(seed);
        let f = random_complex(&mut r, n, 0.8);
        let (cs, sn) = mat_cos_sin(&f);
        let sum = &(&cs * &cs) + &(&sn * &sn);
        prop_assert!(sum.approx_eq(&CMatrix::identity(n), 1e-10));
    }

    #[test]
    fn symplectic_eigenvalues_product_and_invariance(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let m = 2 * n;
        let g = RMatrix::from_fn(m, m, |_, _| r.gen_range(-1.0..1.0));
        let b = &(&g.transpose() * &g) + &RMatrix::identity(m).scale(0.3);
        let s = symplectic_eigenvalues(&b).unwrap();
        let prod: f64 = s.iter().map(|x| x * x).product();
        let det = determinant(&b);
        prop_assert!((prod - det).abs() <= 1e-9 * det);
        let sm = random_symplectic(&mut r, n);
        let j: RMatrix = SymplecticStructure::new(n).matrix();
        prop_assert!((&(&sm.transpose() * &j) * &sm).approx_eq(&j, 1e-12));
        let moved = symplectic_eigenvalues(&(&(&sm.transpose() * &b) * &sm).symmetrize()).unwrap();
        for (x, y) in s.iter().zip(&moved) {
            prop_assert!((x - y).abs() <= 1e-8 * x.max(1.0), "{s:?} vs {moved:?}");
        }
    }

    #[test]
    fn determinant_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (random_complex(&mut r, 6, 1.0), random_complex(&mut r, 6, 1.0));
        let lhs = determinant(&(&a * &b));
        let rhs = determinant(&a) * determinant(&b);
        prop_assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm());
    }

    #[test]
    fn fundamental_matrix_is_sigma_antisymmetric(seed in any::<u64>(), n in 1usize..3) {
        let mut r = rng(seed);
        let q = random_elliptic(&mut r, n);
        let f = fundamental_matrix(&q);
        let sigma = SymplecticStructure::new(n);
        let probe = |r: &mut ChaCha8Rng| (0..2 * n).map(|_| c(r.gen_range(-1.0..1.0), 0.0)).collect::<Vec<_>>();
        let (z, w) = (probe(&mut r), probe(&mut r));
        let lhs = sigma.sigma(&f.mul_vec(&z), &w);
        let rhs = -sigma.sigma(&z, &f.mul_vec(&w));
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn real_canonical_maps_preserve_the_half_plane(a in -3.0f64..3.0, b in -3.0f64..3.0, d0 in -3.0f64..3.0, g_re in 1e-3f64..5.0, g_im in -5.0f64..5.0) {
        // build a real matrix of determinant 1 from (a, b, d0)
        prop_assume!(a.abs() > 0.05);
        let cc = (a * d0 - 1.0) / b.max(0.05);
        let k = CanonicalMap2x2::real(a, b.max(0.05), cc, d0).unwrap();
        if let Ok(v) = mobius_transport(&k, c(g_re, g_im)) {
            prop_assert!(v.re > 0.0);
        }
    }

    #[test]
    fn oscillator_ground_state_is_an_eigenvector(a in 0.3f64..3.0, b in -1.0f64..1.0, cc in 0.3f64..3.0, t in 0.1f64..1.0, x in -1.5f64..1.5) {
        prop_assume!(a * cc - b * b > 0.05);
        let q = QuadraticForm::from_coefficients(c(a, 0.0), c(b, 0.0), c(cc, 0.0));
        let red = ho_reduce_1d(&q).unwrap();
        let k = kernel_from_weyl(&mehler_symbol(&q, t).unwrap()).unwrap();
        let u = |y: f64| (-0.5 * red.gamma * y * y).exp();
        let h = 0.01;
        let applied: Complex64 = (-1500..=1500).map(|i| {
            let y = i as f64 * h;
            k.eval(&[x], &[y]) * u(y) * h
        }).sum();
        let expected = (-t * red.sqrt_delta).exp() * u(x);
        prop_assert!((applied - expected).norm() <= 1e-8, "{applied} vs {expected}");
    }

    #[test]
    fn davies_mehler_matches_generic_mehler(theta in -1.5f64..1.5, t in 0.01f64..3.0) {
        let a = davies_mehler(theta, c(t, 0.0)).unwrap();
        let b = mehler_symbol(&QuadraticForm::davies(theta), t).unwrap();
        prop_assert!(a.distance(&b) <= 1e-12);
    }

    #[test]
    fn region_characterizations_agree(theta in -1.5f64..1.5, r in 0.001f64..1.5, s in -PI..PI) {
        let rep = region_report(theta, c(r, s));
        let rep = rep.as_ref();
        prop_assert!(rep.is_ok());
        let phi = (2.0 * s).sin().atan2((2.0 * r).sinh());
        let geometric = FRAC_PI_2 - phi.abs() - theta.abs();
        if geometric.abs() > 1e-10 && rep.unwrap().margin.abs() > 1e-10 {
            prop_assert_eq!(rep.unwrap().bounded, geometric > 0.0);
        }
    }

    #[test]
    fn sinh_identity(r in -3.0f64..3.0, s in -5.0f64..5.0) {
        let t = c(r, s);
        let direct = (2.0 * t).sinh().norm_sqr();
        prop_assert!((abs_sinh_2t_sq(t) - direct).abs() <= 1e-12 * direct.max(1.0));
    }

    #[test]
    fn mehler_semigroup(seed in any::<u64>(), n in 1usize..3, s in 0.05f64..1.0, t in 0.05f64..1.0) {
        let mut r = rng(seed);
        let q = random_elliptic(&mut r, n);
        let lhs = mehler_symbol(&q, s + t).unwrap();
        let rhs = sharp_product(&mehler_symbol(&q, s).unwrap(), &mehler_symbol(&q, t).unwrap()).unwrap();
        prop_assert!(lhs.distance(&rhs) <= 1e-9);
    }

    #[test]
    fn sharp_product_is_kernel_composition(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let (g1, g2) = (random_integrable(&mut r, n), random_integrable(&mut r, n));
        let lhs = kernel_from_weyl(&sharp_product(&g1, &g2).unwrap()).unwrap();
        let rhs = compose_kernels(&kernel_from_weyl(&g1).unwrap(), &kernel_from_weyl(&g2).unwrap()).unwrap();
        prop_assert!(rhs.distance(&lhs) <= 1e-9);
    }

    #[test]
    fn sharp_product_is_associative(seed in any::<u64>(), n in 1usize..3) {
        let mut r = rng(seed);
        let (a, b, d) = (random_integrable(&mut r, n), random_integrable(&mut r, n), random_integrable(&mut r, n));
        let left = sharp_product(&sharp_product(&a, &b).unwrap(), &d).unwrap();
        let right = sharp_product(&a, &sharp_product(&b, &d).unwrap()).unwrap();
        prop_assert!(left.distance(&right) <= 1e-8);
    }

    #[test]
    fn gram_symbol_is_positive(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let g = random_integrable(&mut r, n);
        let (gram, _) = gram_symbol(&g).unwrap();
        prop_assert!(gram.prefactor().im == 0.0 && gram.prefactor().re > 0.0);
        prop_assert!(gram.exponent().im().max_abs() <= 1e-8 * gram.exponent().max_abs());
        let b = gram.exponent().re().symmetrize();
        prop_assert!(symplectic_eigenvalues(&b).is_ok());
    }

    #[test]
    fn gram_f_identity(theta in -1.5f64..1.5, r in 0.05f64..2.0, s in -1.5f64..1.5) {
        let t = c(r, s);
        prop_assume!(region_report(theta, t).unwrap().bounded);
        let g = davies_gram_symbol(theta, t).unwrap();
        let m = t.tanh().norm();
        let lhs = g.coefficients.f_val.norm_sqr();
        let rhs = m * m + 1.0 / (m * m) + 2.0 * (2.0 * theta).cos();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn davies_norm_decreases_in_real_time(theta in -1.5f64..1.5) {
        let mut prev = 1.0;
        for k in 1..=100 {
            let v = davies_norm(theta, c(0.03 * k as f64, 0.0)).unwrap().norm;
            prop_assert!(v <= prev + 1e-15);
            prev = v;
        }
    }

    #[test]
    fn boundary_has_norm_one(theta in -1.4f64..1.4, r in 0.05f64..2.0, sign in prop::bool::ANY) {
        // on |phi| + |theta| = pi/2 choose s with arg tanh t = +-(pi/2 - |theta|)
        let phi = (FRAC_PI_2 - theta.abs()) * if sign { 1.0 } else { -1.0 };
        let sin2s = phi.tan() * (2.0 * r).sinh();
        prop_assume!(sin2s.abs() < 1.0);
        let t = c(r, 0.5 * sin2s.asin());
        let d = davies_norm(theta, t).unwrap();
        prop_assert!((d.norm - 1.0).abs() <= 1e-9, "{}", d.norm);
        prop_assert_eq!(d.classification.as_str(), "heat_type");
    }

    #[test]
    fn general_norm_below_prefactor(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let g = random_integrable(&mut r, n);
        prop_assert!(general_gaussian_norm(&g).unwrap() < g.prefactor().norm() * (1.0 - 1e-12));
    }

    #[test]
    fn general_norm_matches_product_route(seed in any::<u64>(), n in 1usize..3) {
        let mut r = rng(seed);
        let g = random_integrable(&mut r, n);
        let rep = general_gaussian_norm_report(&g).unwrap();
        let (gram, _) = gram_symbol(&g).unwrap();
        let prod: f64 = rep.symplectic_eigenvalues.iter().map(|s| 1.0 / (1.0 + 0.5 * s)).product();
        let rhs = gram.prefactor().norm() * prod;
        prop_assert!((rep.norm.powi(2) - rhs).abs() <= 1e-10 * rhs);
    }

    #[test]
    fn fock_quadrature_matches_closed_form(alpha in 0.3f64..2.0, beta_frac in 0.0f64..0.9, beta_arg in -PI..PI, g_abs in 0.0f64..0.95, g_arg in -PI..PI) {
        let w = HolomorphicWeight::new(alpha, Complex64::from_polar(beta_frac * alpha, beta_arg)).unwrap();
        let gamma = Complex64::from_polar(g_abs, g_arg);
        if let Ok(q) = fock_norm_quadrature(gamma, &w) {
            prop_assume!(q.points_per_axis < 4001);
            prop_assert!((q.value - q.closed_form).abs() <= 1e-7 * q.closed_form);
        }
    }

    #[test]
    fn scan_stays_on_the_real_axis(b in 0.0f64..4.0, gap in 1.0f64..5.0) {
        let a = b + gap;
        let s = gaussian_scan_embedding(a, b).unwrap();
        prop_assert!(s.grid_max <= s.norm + 1e-8);
        let exact = embedding_norm_ab(a, b);
        prop_assert!((s.gamma_star - exact.gamma_star.unwrap()).abs() <= 1e-6);
        prop_assert!((embedding_ratio(a, b, c(s.gamma_star, 0.0)) - exact.norm.unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn gaussian_states_are_normalized(re in 0.1f64..3.0, im in -3.0f64..3.0) {
        let s = GaussianState::new(c(re, im)).unwrap();
        let h = 0.005;
        let l2: f64 = (-8000..=8000).map(|i| s.eval(i as f64 * h).norm_sqr() * h).sum();
        prop_assert!((l2 - 1.0).abs() <= 1e-9);
    }
}
