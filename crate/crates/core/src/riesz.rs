//! The meromorphic Riesz family I_alpha(r) = C(alpha, n) r^(alpha - n) in
//! dimension n: coefficient Laurent data, radial evaluation, residues at the
//! pole set alpha in n + 2N_0, expansion-term weights, and the distributional
//! continuation on radial test functions.
//!
//! Residue sign: expanding Gamma((n - alpha)/2) at alpha = n + 2k gives the
//! residue (-1)^(k+1) * 2 / (k! 2^(2k) (4 pi)^(n/2) Gamma(n/2 + k)) * r^(2k).
//! This sign is the one consistent with both the finite-part formula at
//! alpha = n and the positive residue of the diagonal zeta function at
//! s = n/(2m); the cross-checks live in the test suite.

use num_complex::Complex64;

use crate::num::adaptive_gk;
use crate::specfun::{digamma, inv_gamma, inv_gamma_with_deriv, LaurentValue, EULER_GAMMA};
use crate::{Error, Result};

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// One term of the near-diagonal expansion: Laurent data of the coefficient
/// together with the distance power and log flag.
#[derive(Clone, Debug)]
pub struct RieszTerm {
    pub alpha: Complex64,
    pub n: u32,
    pub coefficient: LaurentValue,
    pub power: Complex64,
    pub has_log: bool,
}

impl RieszTerm {
    pub fn new(alpha: Complex64, n: u32) -> Self {
        let coefficient = riesz_coeff(alpha, n);
        let has_log = pole_index(alpha, n).is_some();
        RieszTerm {
            alpha,
            n,
            coefficient,
            power: alpha - n as f64,
            has_log,
        }
    }
}

/// Returns k when alpha = n + 2k for some k >= 0 (within 1e-9), else None.
pub fn pole_index(alpha: Complex64, n: u32) -> Option<u32> {
    if alpha.im.abs() > 1e-9 {
        return None;
    }
    let t = (alpha.re - n as f64) / 2.0;
    let k = t.round();
    if k >= -1e-9 && (t - k).abs() < 1e-9 / 2.0 {
        Some(k as u32)
    } else {
        None
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k as u64).fold(1.0, |a, b| a * b as f64)
}

/// Residue of C(., n) at alpha = n + 2k.
fn coeff_residue(n: u32, k: u32) -> f64 {
    let nf = n as f64;
    let sign = if k % 2 == 0 { -1.0 } else { 1.0 }; // (-1)^(k+1)
    let gamma_half = crate::specfun::gamma(c64(nf / 2.0 + k as f64))
        .expect("positive argument")
        .re;
    sign * 2.0
        / (factorial(k) * 2f64.powi(2 * k as i32) * (4.0 * std::f64::consts::PI).powf(nf / 2.0) * gamma_half)
}

/// Finite part of C(., n) at alpha = n + 2k.
fn coeff_finite_part(n: u32, k: u32) -> f64 {
    let nf = n as f64;
    let psi_k1 = digamma(c64(k as f64 + 1.0)).expect("positive").re;
    let psi_nk = digamma(c64(nf / 2.0 + k as f64)).expect("positive").re;
    coeff_residue(n, k) * (-0.5) * (psi_k1 + psi_nk + 2.0 * std::f64::consts::LN_2)
}

/// Laurent data of the coefficient C(alpha, n) = Gamma((n-alpha)/2) /
/// (2^alpha pi^(n/2) Gamma(alpha/2)) at the point alpha.
pub fn riesz_coeff(alpha: Complex64, n: u32) -> LaurentValue {
    assert!(n >= 2, "riesz_coeff requires n >= 2");
    if let Some(k) = pole_index(alpha, n) {
        return LaurentValue::new(c64(coeff_residue(n, k)), c64(coeff_finite_part(n, k)), alpha);
    }
    let nf = n as f64;
    let top = crate::specfun::gamma((c64(nf) - alpha) / 2.0).expect("pole case handled above");
    let inv_bottom = inv_gamma(alpha / 2.0);
    let value = top * inv_bottom
        * (-alpha * std::f64::consts::LN_2).exp()
        * std::f64::consts::PI.powf(-nf / 2.0);
    LaurentValue::regular(value, alpha)
}

/// d/dalpha of C(alpha, n) at a regular point.
fn riesz_coeff_deriv(alpha: Complex64, n: u32) -> Complex64 {
    let nf = n as f64;
    let c = riesz_coeff(alpha, n).finite_part;
    // dlnC = -(1/2) psi((n-alpha)/2) - ln 2 - (1/2) psi(alpha/2)
    let psi_top = digamma((c64(nf) - alpha) / 2.0).expect("regular point");
    // psi(alpha/2) may sit on a pole exactly where C vanishes; use
    // C' = C * dlnC except there, where C = 0 and the product form applies.
    let (invg, invg_d) = inv_gamma_with_deriv(alpha / 2.0);
    if invg.norm() < 1e-13 {
        // C = Gamma((n-a)/2) 2^-a pi^-n/2 * invGamma(a/2); only the invGamma
        // factor varies to first order
        let top = crate::specfun::gamma((c64(nf) - alpha) / 2.0).expect("regular");
        return top
            * (-alpha * std::f64::consts::LN_2).exp()
            * std::f64::consts::PI.powf(-nf / 2.0)
            * invg_d
            * 0.5;
    }
    let dln = -0.5 * psi_top - std::f64::consts::LN_2 - 0.5 * (-invg_d / invg);
    // note: psi(alpha/2) = -d/dz ln invGamma(z) = -invg_d/invg... with chain rule 1/2
    // assembled directly below instead to avoid double-counting the 1/2:
    let _ = dln;
    let psi_bottom = -invg_d / invg;
    c * (-0.5 * psi_top - std::f64::consts::LN_2 - 0.5 * psi_bottom)
}

/// Laurent data at alpha of alpha -> C(alpha, n) r^(alpha - n).
///
/// At a pole alpha = n + 2k the finite part picks up the logarithmic term
/// res(C) r^(2k) ln r coming from expanding the distance power.
pub fn riesz_eval(alpha: Complex64, n: u32, r: f64) -> Result<LaurentValue> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("riesz_eval: r = {r} must be positive")));
    }
    if let Some(k) = pole_index(alpha, n) {
        let rc = coeff_residue(n, k);
        let fc = coeff_finite_part(n, k);
        let r2k = r.powi(2 * k as i32);
        return Ok(LaurentValue::new(
            c64(rc * r2k),
            c64((fc + rc * r.ln()) * r2k),
            alpha,
        ));
    }
    let coeff = riesz_coeff(alpha, n).finite_part;
    let value = coeff * (alpha - n as f64).exp_r_pow(r);
    Ok(LaurentValue::regular(value, alpha))
}

trait ExpRPow {
    fn exp_r_pow(self, r: f64) -> Complex64;
}
impl ExpRPow for Complex64 {
    /// r^self for r > 0
    fn exp_r_pow(self, r: f64) -> Complex64 {
        (self * r.ln()).exp()
    }
}

/// d/dalpha of I_alpha(r) at a regular point.
fn riesz_eval_deriv(alpha: Complex64, n: u32, r: f64) -> Complex64 {
    let c = riesz_coeff(alpha, n).finite_part;
    let cd = riesz_coeff_deriv(alpha, n);
    let rp = (alpha - n as f64).exp_r_pow(r);
    (cd + c * r.ln()) * rp
}

/// Residue of I_alpha at alpha = n + 2k evaluated at distance r.
pub fn riesz_residue(n: u32, k: u32, r: f64) -> f64 {
    if k >= 1 && r == 0.0 {
        return 0.0;
    }
    coeff_residue(n, k) * r.powi(2 * k as i32)
}

/// Finite part of the expansion weight times Riesz value,
/// f.p._(alpha=s) { binom(alpha - 1 + j/m, j/m) I_(2 m alpha + 2j)(r) }.
///
/// When 2ms + 2j lands on the pole set the Laurent product rule applies; the
/// j = n/2 - ms, k = 0 case reproduces the closed logarithmic form with the
/// digamma corrections.
pub fn riesz_fp_expansion_term(
    s: Complex64,
    j: u32,
    m: u32,
    n: u32,
    r: f64,
) -> Result<Complex64> {
    if !(r > 0.0) {
        return Err(Error::Domain("riesz_fp_expansion_term: r must be positive".into()));
    }
    let jm = j as f64 / m as f64;
    let two_m = 2.0 * m as f64;
    let beta = two_m * s + 2.0 * j as f64;

    // weight A(alpha) = Gamma(alpha + j/m) invGamma(alpha) / Gamma(j/m + 1)
    let inv_gjm1 = inv_gamma(c64(jm + 1.0));
    let arg_top = s + jm;
    let top_pole = arg_top.im.abs() < 1e-9
        && arg_top.re < 0.5
        && (arg_top.re - arg_top.re.round()).abs() < 1e-9;
    let (invg_s, invg_s_d) = inv_gamma_with_deriv(s);

    // Riesz factor B(alpha) = I_(2 m alpha + 2 j)(r) as a Laurent series in
    // alpha at s; the chain rule divides the beta-residue by 2m.
    let beta_pole = pole_index(c64(beta.re).into(), n).filter(|_| beta.im.abs() < 1e-9);

    match (top_pole, beta_pole) {
        (false, None) => {
            let a = crate::specfun::gamma(arg_top)? * invg_s * inv_gjm1;
            let b = riesz_eval(Complex64::new(beta.re, beta.im), n, r)?.finite_part;
            Ok(a * b)
        }
        (false, Some(k)) => {
            let g_top = crate::specfun::gamma(arg_top)?;
            let a_val = g_top * invg_s * inv_gjm1;
            // A'(s) = A(s) (psi(s + j/m) - psi(s)); the second term comes from
            // the derivative of invGamma
            let a_deriv = g_top * inv_gjm1 * (digamma(arg_top)? * invg_s + invg_s_d);
            let lau = riesz_eval(Complex64::new(beta.re, beta.im), n, r)?;
            let res_alpha = lau.residue / two_m;
            let _ = k;
            Ok(a_val * lau.finite_part + a_deriv * res_alpha)
        }
        (true, None) => {
            // weight has a simple pole; pair it with the derivative of the
            // regular Riesz factor
            let p = (-arg_top.re.round()) as u32;
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            let res_top = sign / factorial(p);
            let psi_p1 = digamma(c64(p as f64 + 1.0))?;
            if invg_s.norm() < 1e-12 {
                return Err(Error::Unsupported(
                    "riesz_fp_expansion_term: doubly degenerate weight".into(),
                ));
            }
            let res_a = c64(res_top) * invg_s * inv_gjm1;
            let fp_a = c64(res_top) * (psi_p1 * invg_s + invg_s_d) * inv_gjm1;
            let b_val = riesz_eval(Complex64::new(beta.re, beta.im), n, r)?.finite_part;
            let b_deriv = two_m * riesz_eval_deriv(Complex64::new(beta.re, beta.im), n, r);
            Ok(fp_a * b_val + res_a * b_deriv)
        }
        (true, Some(_)) => Err(Error::Pole(
            "riesz_fp_expansion_term: weight and Riesz factor both singular".into(),
        )),
    }
}

/// Closed logarithmic form of the critical expansion term (k = 0 case),
/// kept separate so tests can pit the product rule against it.
pub fn critical_term_closed_form(s: Complex64, m: u32, n: u32, r: f64) -> Result<Complex64> {
    let nf = n as f64;
    let mf = m as f64;
    let n2m = nf / (2.0 * mf);
    let binom = crate::specfun::gen_binomial(c64(n2m - 1.0), c64(n2m) - s)?;
    let psi_s = digamma(s)?;
    let psi_n2m = digamma(c64(n2m))?;
    let psi_n2 = digamma(c64(nf / 2.0))?;
    let gamma_n2 = crate::specfun::gamma(c64(nf / 2.0))?.re;
    let pref = 1.0 / ((4.0 * std::f64::consts::PI).powf(nf / 2.0) * gamma_n2);
    Ok(pref
        * binom
        * ((psi_s - psi_n2m) / mf + psi_n2 - EULER_GAMMA - 2.0 * (r / 2.0).ln()))
}

// ---------------------------------------------------------------------------
// Radial test functions and the distributional continuation
// ---------------------------------------------------------------------------

/// A compactly supported radial test function given through a derivative
/// oracle: `derivative(r, p)` returns the p-th radial derivative at r.
/// Smoothness at the origin means all odd derivatives vanish at r = 0.
pub struct RadialTestFunction {
    deriv: Box<dyn Fn(f64, usize) -> f64 + Send + Sync>,
    pub support: f64,
}

impl RadialTestFunction {
    pub fn new<F>(deriv: F, support: f64) -> Self
    where
        F: Fn(f64, usize) -> f64 + Send + Sync + 'static,
    {
        RadialTestFunction {
            deriv: Box::new(deriv),
            support,
        }
    }

    /// poly(r^2) * exp(-r^2) with polynomial coefficients in r^2. Truncated at
    /// the radius where exp(-r^2) is below machine precision, which stands in
    /// for a smooth cutoff to working accuracy.
    pub fn gaussian_poly(coeffs_r2: Vec<f64>) -> Self {
        // represent p-th derivative of q(r) e^{-r^2} with q a polynomial in r:
        // iterate q -> q' - 2 r q
        let base: Vec<f64> = {
            // expand coefficients in r^2 to coefficients in r
            let mut v = vec![0.0; coeffs_r2.len() * 2 - 1];
            for (i, c) in coeffs_r2.iter().enumerate() {
                v[2 * i] = *c;
            }
            v
        };
        let support = 6.5;
        RadialTestFunction::new(
            move |r: f64, p: usize| {
                if r >= support {
                    return 0.0;
                }
                let mut q = base.clone();
                for _ in 0..p {
                    let mut next = vec![0.0; q.len() + 1];
                    for (k, c) in q.iter().enumerate() {
                        if k >= 1 {
                            next[k - 1] += *c * k as f64;
                        }
                        next[k + 1] -= 2.0 * *c;
                    }
                    q = next;
                }
                let mut acc = 0.0;
                for c in q.iter().rev() {
                    acc = acc * r + c;
                }
                acc * (-r * r).exp()
            },
            support,
        )
    }

    pub fn gaussian() -> Self {
        Self::gaussian_poly(vec![1.0])
    }

    pub fn value(&self, r: f64) -> f64 {
        (self.deriv)(r, 0)
    }

    pub fn derivative(&self, r: f64, p: usize) -> f64 {
        (self.deriv)(r, p)
    }
}

/// Derivatives 0..=order of the geometer's radial Laplacian
/// (Delta psi)(r) = -(psi'' + (n-1) psi'/r) given derivatives of psi.
fn laplace_derivative(phi: &dyn Fn(f64, usize) -> f64, n: u32, r: f64, q: usize) -> f64 {
    // d^q [ psi'' ] = psi^(q+2)
    let lead = phi(r, q + 2);
    // d^q [ psi' / r ] by Leibniz against r^-1
    let mut mixed = 0.0;
    let mut binom = 1.0;
    for i in 0..=q {
        if i > 0 {
            binom = binom * (q - i + 1) as f64 / i as f64;
        }
        let pow = (q - i) as i32;
        let sign = if pow % 2 == 0 { 1.0 } else { -1.0 };
        let fall = (1..=pow as u64).fold(1.0, |a, b| a * b as f64);
        mixed += binom * phi(r, 1 + i) * sign * fall * r.powi(-1 - pow);
    }
    -(lead + (n as f64 - 1.0) * mixed)
}

/// Delta^k phi evaluated at r. For small r the iterated Laplacian is applied
/// symbolically to the even Taylor polynomial of phi at 0, which avoids the
/// 1/r cancellations of the direct composition.
fn laplace_power_at(phi: &RadialTestFunction, n: u32, k: usize, r: f64) -> f64 {
    let r_switch = 0.1;
    if r >= r_switch || k == 0 {
        if k == 0 {
            return phi.value(r);
        }
        // build nested closures level by level
        fn level(
            phi: &RadialTestFunction,
            n: u32,
            k: usize,
            r: f64,
            q: usize,
        ) -> f64 {
            if k == 0 {
                return phi.derivative(r, q);
            }
            laplace_derivative(&|rr, qq| level(phi, n, k - 1, rr, qq), n, r, q)
        }
        return level(phi, n, k, r, 0);
    }
    // even Taylor route: phi(r) ~ sum_j c_j r^(2j), c_j = phi^(2j)(0)/(2j)!
    let terms = k + 7;
    let mut coeffs: Vec<f64> = (0..terms)
        .map(|j| {
            let fact = (1..=(2 * j) as u64).fold(1.0, |a, b| a * b as f64);
            phi.derivative(0.0, 2 * j) / fact
        })
        .collect();
    for _ in 0..k {
        // Delta(r^(2j)) = -2j (2j + n - 2) r^(2j-2)
        let mut next = vec![0.0; coeffs.len() - 1];
        for (j, c) in coeffs.iter().enumerate().skip(1) {
            let jj = 2.0 * j as f64;
            next[j - 1] = -c * jj * (jj + n as f64 - 2.0);
        }
        coeffs = next;
    }
    let r2 = r * r;
    let mut acc = 0.0;
    for c in coeffs.iter().rev() {
        acc = acc * r2 + c;
    }
    acc
}

pub fn surface_area(n: u32) -> f64 {
    // vol(S^(n-1)) = 2 pi^(n/2) / Gamma(n/2)
    2.0 * std::f64::consts::PI.powf(n as f64 / 2.0)
        / crate::specfun::gamma(c64(n as f64 / 2.0)).expect("positive").re
}

/// The distributional pairing I_alpha[phi] on a radial test function via the
/// continuation I_alpha[phi] = I_(alpha+2k)[Delta^k phi] with minimal k.
pub fn riesz_distributional(
    alpha: Complex64,
    n: u32,
    phi: &RadialTestFunction,
) -> Result<Complex64> {
    if pole_index(alpha, n).is_some() {
        return Err(Error::Pole(format!(
            "riesz_distributional: alpha = {alpha} lies on the pole set"
        )));
    }
    // even non-positive integers: I_alpha = Delta^(|alpha|/2) delta_0
    if alpha.im.abs() < 1e-12 {
        let a = alpha.re;
        if a <= 1e-12 && (a / 2.0 - (a / 2.0).round()).abs() < 1e-12 {
            let k = (-a / 2.0).round() as usize;
            return Ok(c64(laplace_power_at(phi, n, k, 0.0)));
        }
    }
    let mut k = 0usize;
    while alpha.re + 2.0 * k as f64 <= 1e-9 {
        k += 1;
    }
    riesz_distributional_with_depth(alpha, n, phi, k)
}

/// Same pairing with an explicit continuation depth; the result must not
/// depend on k for admissible choices, which the tests exercise.
pub fn riesz_distributional_with_depth(
    alpha: Complex64,
    n: u32,
    phi: &RadialTestFunction,
    k: usize,
) -> Result<Complex64> {
    let shifted = alpha + 2.0 * k as f64;
    if shifted.re <= 0.0 {
        return Err(Error::Domain(format!(
            "riesz_distributional: depth k = {k} leaves Re(alpha) + 2k <= 0"
        )));
    }
    if pole_index(shifted, n).is_some() {
        return Err(Error::Pole(format!(
            "riesz_distributional: alpha + 2k = {shifted} hits the pole set"
        )));
    }
    if k > 3 {
        return Err(Error::Unsupported(
            "riesz_distributional: continuation depth beyond 3 loses accuracy".into(),
        ));
    }
    let coeff = riesz_coeff(shifted, n).finite_part;
    let area = surface_area(n);
    let power = shifted - n as f64 + (n as f64 - 1.0); // exponent of r in the full integrand
    let s = phi.support;
    // geometric panels toward the r = 0 singularity
    let mut total = Complex64::new(0.0, 0.0);
    let mut hi = s;
    let tol = 1e-12;
    for level in 0..60 {
        let lo = if level < 59 { hi * 0.5 } else { 0.0 };
        let seg = if lo == 0.0 {
            // closing segment: integrand ~ psi(lo) r^power, power > -1
            let psi0 = laplace_power_at(phi, n, k, hi * 0.5);
            psi0 * hi.powf(power.re + 1.0) / (power + 1.0)
        } else {
            adaptive_gk(
                |r| power.exp_r_ln(r) * laplace_power_at(phi, n, k, r),
                lo,
                hi,
                tol,
            )?
        };
        total += seg;
        if lo == 0.0 || (seg.norm() < tol && level > 6) {
            break;
        }
        hi = lo;
    }
    Ok(coeff * area * total)
}

trait ExpRLn {
    fn exp_r_ln(self, r: f64) -> Complex64;
}
impl ExpRLn for Complex64 {
    fn exp_r_ln(self, r: f64) -> Complex64 {
        (self * r.ln()).exp()
    }
}
