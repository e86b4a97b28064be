use num_complex::Complex64;
use zetamass_core::greens::{constant_term_extract, ewald_kernel};
use zetamass_core::models::{torus_spectrum, TorusOperator, TorusSpec};
use zetamass_core::zeta::{zeta_continued, MellinConfig};

fn main() {
    let spec = TorusSpec::unit_cubic(3, TorusOperator::LaplaceShift(0.0));
    let kernel = ewald_kernel(&spec);
    let grid: Vec<f64> = (0..6).map(|i| 0.2 * 0.5f64.powi(i)).collect();
    let phi = |j: usize, _d: f64| if j == 0 { 1.0 } else { 0.0 };
    let t0 = std::time::Instant::now();
    let ext = constant_term_extract(&kernel, Complex64::new(1.0, 0.0), 1, 3, &phi, &grid).unwrap();
    println!("ewald robin: {:.12} err_est {:.3e} fitted_exp {:.3} ({:?})",
        ext.constant, ext.error_estimate, ext.fitted_exponent, t0.elapsed());
    let model = torus_spectrum(&spec, 14000.0).unwrap();
    let cfg = MellinConfig::default();
    let t0 = std::time::Instant::now();
    let z = zeta_continued(&model, Complex64::new(1.0, 0.0), &cfg).unwrap();
    println!("zeta fp at 1: {:.12} ({:?})", z.value.finite_part.re, t0.elapsed());
    println!("difference: {:.3e}", (ext.constant - z.value.finite_part.re).abs());
    println!("known lattice constant check: -2.8372974794806/(4 pi) = {:.12}",
        -2.8372974794806 / (4.0 * std::f64::consts::PI));
}
