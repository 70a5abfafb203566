use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};
use std::io::Write;

use clap::ValueEnum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::linalg::{CMatrix, RMatrix};
use crate::mehler::davies_mehler;
use crate::norms::davies::davies_norm_perturbed;
use crate::norms::{
    davies_to_embedding, embedding_norm_ab, general_gaussian_norm, semigroup_norm, supersymmetric_norm,
};
use crate::oracles::{
    compose_kernels, fock_norm_quadrature, gaussian_scan_embedding, hermite_galerkin_norm, kernel_from_weyl, kernel_svd_norm,
    random_elliptic, random_integrable, reduced_weights, SvdGrid,
};
use crate::sharp::{davies_gram_symbol, sharp_product};
use crate::symbols::{adjoint_symbol, GaussianSymbol, QuadraticForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Davies,
    Sharp,
    Embedding,
    General,
}

/// One measured-vs-expected comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub measured: f64,
    pub expected: f64,
    pub tol: f64,
    pub relative: bool,
    /// Error message when the measurement itself failed.
    pub failure: Option<String>,
}

impl Check {
    pub fn error(&self) -> f64 {
        let d = (self.measured - self.expected).abs();
        if self.relative {
            d / self.expected.abs().max(f64::MIN_POSITIVE)
        } else {
            d
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.error() <= self.tol
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }

    pub fn write(&self, out: &mut dyn Write) -> std::io::Result<()> {
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            let kind = if c.relative { "rel" } else { "abs" };
            match &c.failure {
                Some(msg) => writeln!(out, "{status} {}/{}: error: {msg}", c.suite, c.name)?,
                None => writeln!(
                    out,
                    "{status} {}/{}: measured {:.15e} expected {:.15e} {kind} err {:.2e} tol {:.0e}",
                    c.suite,
                    c.name,
                    c.measured,
                    c.expected,
                    c.error(),
                    c.tol
                )?,
            }
        }
        writeln!(out, "{} checks, {} failed", self.checks.len(), self.failures())
    }

    fn push(&mut self, suite: &'static str, name: impl Into<String>, measured: Result<f64>, expected: f64, tol: f64, relative: bool) {
        let (measured, failure) = match measured {
            Ok(m) => (m, None),
            Err(e) => (f64::NAN, Some(e.to_string())),
        };
        self.checks.push(Check { suite, name: name.into(), measured, expected, tol, relative, failure });
    }
}

/// Run the checks of `suite`. `perturb_a` is added to the Davies constant `A`
/// wherever the closed form is evaluated; any nonzero value should make checks fail.
pub fn run_verify(suite: Suite, perturb_a: f64) -> VerifyReport {
    let mut r = VerifyReport::default();
    if matches!(suite, Suite::All | Suite::Davies) {
        davies_suite(&mut r, perturb_a);
    }
    if matches!(suite, Suite::All | Suite::Sharp) {
        sharp_suite(&mut r, perturb_a);
    }
    if matches!(suite, Suite::All | Suite::Embedding) {
        embedding_suite(&mut r, perturb_a);
    }
    if matches!(suite, Suite::All | Suite::General) {
        general_suite(&mut r, perturb_a);
    }
    r
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn fmt_t(t: Complex64) -> String {
    if t.im == 0.0 {
        format!("{}", t.re)
    } else {
        format!("{}{:+}i", t.re, t.im)
    }
}

fn davies_suite(r: &mut VerifyReport, p: f64) {
    let norm = |theta: f64, t: Complex64| davies_norm_perturbed(theta, t, p).map(|d| d.norm);

    for t in [c(0.7, 2.0), c(0.3, 0.0), c(1.5, -0.4)] {
        r.push("davies", format!("theta=0 t={} self-adjoint e^-Re t", fmt_t(t)), norm(0.0, t), (-t.re).exp(), 1e-12, true);
    }
    for (theta, t) in [(FRAC_PI_3, c(0.0, FRAC_PI_2)), (FRAC_PI_4, c(0.0, PI)), (0.2, c(0.0, -FRAC_PI_2))] {
        r.push("davies", format!("theta={theta:.4} t={} unitary", fmt_t(t)), norm(theta, t), 1.0, 1e-15, false);
    }
    for theta in [FRAC_PI_6, FRAC_PI_4, 5.0 * PI / 12.0] {
        for t in [0.25, 1.0] {
            let t = c(t, 0.0);
            let oracle = davies_mehler(theta, t).and_then(|g| general_gaussian_norm(&g));
            match oracle {
                Ok(o) => r.push("davies", format!("theta={theta:.4} t={} vs general Gaussian norm", fmt_t(t)), norm(theta, t), o, 1e-12, true),
                Err(e) => r.push("davies", format!("theta={theta:.4} t={} vs general Gaussian norm", fmt_t(t)), Err(e), 0.0, 0.0, false),
            }
        }
    }
    for (theta, t) in [(FRAC_PI_4, c(1.0, 0.0)), (FRAC_PI_6, c(0.5, 0.0)), (FRAC_PI_6, c(1.0, 0.5))] {
        let oracle = davies_mehler(theta, t).and_then(|g| kernel_from_weyl(&g)).and_then(|k| kernel_svd_norm(&k, SvdGrid::default(), 1));
        match oracle {
            Ok(o) => r.push("davies", format!("theta={theta:.4} t={} vs kernel SVD", fmt_t(t)), norm(theta, t), o.norm, 1e-6, true),
            Err(e) => r.push("davies", format!("theta={theta:.4} t={} vs kernel SVD", fmt_t(t)), Err(e), 0.0, 0.0, false),
        }
    }
    let sv = davies_mehler(FRAC_PI_6, c(0.5, 0.0)).and_then(|g| kernel_from_weyl(&g)).and_then(|k| kernel_svd_norm(&k, SvdGrid::default(), 6));
    let ratio = davies_norm_perturbed(FRAC_PI_6, c(0.5, 0.0), p).map(|d| d.sv_ratio.unwrap_or(f64::NAN));
    match sv {
        Ok(s) => {
            for k in 0..5 {
                let measured = s.singular_values[k + 1] / s.singular_values[k];
                r.push("davies", format!("theta=pi/6 t=0.5 singular value ratio {k}"), Ok(measured), *ratio.as_ref().unwrap_or(&f64::NAN), 1e-5, true);
            }
        }
        Err(e) => r.push("davies", "theta=pi/6 t=0.5 singular values", Err(e), 0.0, 0.0, false),
    }
    let galerkin = hermite_galerkin_norm(&QuadraticForm::davies(FRAC_PI_6), 0.5, 64);
    match galerkin {
        Ok(g) => r.push("davies", "theta=pi/6 t=0.5 vs Hermite Galerkin N=64", norm(FRAC_PI_6, c(0.5, 0.0)), g, 1e-7, true),
        Err(e) => r.push("davies", "theta=pi/6 t=0.5 vs Hermite Galerkin N=64", Err(e), 0.0, 0.0, false),
    }
    for theta in [0.0, FRAC_PI_6, FRAC_PI_4] {
        let scaled = norm(theta, c(10.0, 0.0)).map(|n| n * 10f64.exp());
        r.push("davies", format!("theta={theta:.4} e^Re t norm at Re t=10"), scaled, 1.0 / theta.cos().sqrt(), 1e-6, true);
    }
}

fn sharp_suite(r: &mut VerifyReport, p: f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..15 {
        let n = 1 + k % 3;
        let (g1, g2) = (random_integrable(&mut rng, n), random_integrable(&mut rng, n));
        let dist = (|| {
            let via_symbol = kernel_from_weyl(&sharp_product(&g1, &g2)?)?;
            let via_kernels = compose_kernels(&kernel_from_weyl(&g1)?, &kernel_from_weyl(&g2)?)?;
            Ok(via_kernels.distance(&via_symbol))
        })();
        r.push("sharp", format!("pair {k} (n={n}) kernel of product vs composed kernels"), dist, 0.0, 1e-9, false);
    }
    for k in 0..6 {
        let n = 1 + k % 2;
        let (a, b, d) = (random_integrable(&mut rng, n), random_integrable(&mut rng, n), random_integrable(&mut rng, n));
        let dist = (|| {
            let left = sharp_product(&sharp_product(&a, &b)?, &d)?;
            let right = sharp_product(&a, &sharp_product(&b, &d)?)?;
            Ok(left.distance(&right))
        })();
        r.push("sharp", format!("triple {k} (n={n}) associativity"), dist, 0.0, 1e-8, false);
    }
    for (theta, t) in [(0.3, c(0.4, 0.1)), (FRAC_PI_4, c(1.0, 0.0)), (-0.8, c(0.7, -0.2)), (1.2, c(2.0, 0.05))] {
        let dist = (|| {
            let g = davies_mehler(theta, t)?;
            let generic = sharp_product(&adjoint_symbol(&g), &g)?;
            Ok(davies_gram_symbol(theta, t)?.symbol()?.distance(&generic))
        })();
        r.push("sharp", format!("theta={theta:.4} t={} Gram closed form vs generic product", fmt_t(t)), dist, 0.0, 1e-12, false);
        let det = davies_gram_symbol(theta, t).map(|g| g.det_f);
        match davies_norm_perturbed(theta, t, p) {
            Ok(d) => r.push("sharp", format!("theta={theta:.4} t={} det F = A/(1+A)", fmt_t(t)), det, d.a / (1.0 + d.a), 1e-12, false),
            Err(e) => r.push("sharp", format!("theta={theta:.4} t={} det F = A/(1+A)", fmt_t(t)), Err(e), 0.0, 0.0, false),
        }
    }
}

fn embedding_suite(r: &mut VerifyReport, p: f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for k in 0..10 {
        let b = rng.gen_range(0.01..3.0);
        let a = b + rng.gen_range(1.0..5.0);
        let exact = embedding_norm_ab(a, b);
        match gaussian_scan_embedding(a, b) {
            Ok(s) => {
                r.push("embedding", format!("case {k} a={a:.4} b={b:.4} norm vs Gaussian scan"), Ok(exact.norm.unwrap_or(f64::NAN)), s.norm, 1e-6, false);
                r.push("embedding", format!("case {k} a={a:.4} b={b:.4} gamma* vs Gaussian scan"), Ok(exact.gamma_star.unwrap_or(f64::NAN)), s.gamma_star, 1e-6, false);
            }
            Err(e) => r.push("embedding", format!("case {k} Gaussian scan"), Err(e), 0.0, 0.0, false),
        }
    }
    r.push("embedding", "a=4 b=0 norm a^-1/2", Ok(embedding_norm_ab(4.0, 0.0).norm.unwrap_or(f64::NAN)), 0.5, 0.0, false);
    r.push("embedding", "a=2 b=1 norm a^-1/4", Ok(embedding_norm_ab(2.0, 1.0).norm.unwrap_or(f64::NAN)), 2f64.powf(-0.25), 1e-15, false);
    r.push("embedding", "a=2 b=1/2 gamma*", Ok(embedding_norm_ab(2.0, 0.5).gamma_star.unwrap_or(f64::NAN)), -2.75 + 6.5625f64.sqrt(), 1e-14, false);
    for (theta, t) in [(0.3, c(0.5, 0.2)), (FRAC_PI_4, c(1.0, -0.3)), (-1.0, c(1.5, 0.1)), (0.1, c(0.2, 2.5))] {
        let embedded = davies_to_embedding(theta, t).map(|(a, b)| t.re.exp() * embedding_norm_ab(a, b).norm.unwrap_or(f64::NAN));
        match embedded {
            Ok(e) => r.push("embedding", format!("theta={theta:.4} t={} Davies norm vs embedding norm", fmt_t(t)), davies_norm_perturbed(theta, t, p).map(|d| d.norm), e, 1e-10, true),
            Err(err) => r.push("embedding", format!("theta={theta:.4} t={} Davies norm vs embedding norm", fmt_t(t)), Err(err), 0.0, 0.0, false),
        }
    }
    for (a, b, gamma) in [(2.0, 0.5, c(0.3, 0.2)), (3.0, 1.5, c(-0.6, 0.1)), (1.5, 0.2, c(0.0, -0.5))] {
        let ratio = (|| {
            let (p1, p2) = reduced_weights(a, b)?;
            Ok((fock_norm_quadrature(gamma, &p2)?.value / fock_norm_quadrature(gamma, &p1)?.value).sqrt())
        })();
        let expected = ((1.0 - gamma.norm_sqr()) / (a * a - (b - gamma).norm_sqr())).powf(0.25);
        r.push("embedding", format!("a={a} b={b} gamma={} quadrature norm ratio", fmt_t(gamma)), ratio, expected, 1e-7, true);
    }
}

fn scalar_symbol(r: Complex64, n: usize) -> Result<GaussianSymbol> {
    GaussianSymbol::new(c(1.0, 0.0), CMatrix::identity(2 * n).scale(r * 2.0))
}

fn general_suite(r: &mut VerifyReport, p: f64) {
    for rr in [c(0.3, 0.0), c(1.0, 0.0), c(0.5, 0.5), c(1.0, -2.0)] {
        let v = scalar_symbol(rr, 1).and_then(|g| general_gaussian_norm(&g));
        r.push("general", format!("A=2rI r={} norm 1/|1+r|", fmt_t(rr)), v, 1.0 / (1.0 + rr).norm(), 1e-12, true);
    }
    let tensor = GaussianSymbol::new(c(1.0, 0.0), CMatrix::diag(&[c(0.6, 0.0), c(3.4, 0.0), c(0.6, 0.0), c(3.4, 0.0)])).and_then(|g| general_gaussian_norm(&g));
    r.push("general", "n=2 tensor product", tensor, 1.0 / (1.3 * 2.7), 1e-12, true);
    for (theta, t) in [(0.4, 0.6), (-1.0, 1.5), (FRAC_PI_6, 0.4)] {
        let v = semigroup_norm(&QuadraticForm::davies(theta), t);
        r.push("general", format!("theta={theta:.4} t={t} semigroup norm vs Davies closed form"), v, davies_norm_perturbed(theta, c(t, 0.0), p).map(|d| d.norm).unwrap_or(f64::NAN), 1e-10, true);
    }
    let fp = CMatrix::from_real(&RMatrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 1.0]]).expect("2x2"));
    for t in [0.5, 1.0, 2.0] {
        r.push("general", format!("Fokker-Planck t={t} supersymmetric norm"), supersymmetric_norm(&fp, c(t, 0.0)), (-0.5 * t).exp(), 1e-14, true);
    }
    let m = CMatrix::from_real(&RMatrix::from_rows(&[vec![1.0, -0.4], vec![0.6, 0.8]]).expect("2x2"));
    for t in [0.3, 1.0] {
        let susy = supersymmetric_norm(&m, c(t, 0.0));
        let generic = QuadraticForm::supersymmetric(&m).and_then(|q| semigroup_norm(&q, t));
        match generic {
            Ok(g) => r.push("general", format!("supersymmetric t={t} vs semigroup norm"), susy, g, 1e-8, true),
            Err(e) => r.push("general", format!("supersymmetric t={t} vs semigroup norm"), Err(e), 0.0, 0.0, false),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for k in 0..2 {
        let q = random_elliptic(&mut rng, 2);
        match hermite_galerkin_norm(&q, 0.5, 40) {
            Ok(g) => r.push("general", format!("random coupled n=2 form {k} vs Galerkin N=40"), semigroup_norm(&q, 0.5), g, 1e-5, true),
            Err(e) => r.push("general", format!("random coupled n=2 form {k} vs Galerkin N=40"), Err(e), 0.0, 0.0, false),
        }
    }
}
