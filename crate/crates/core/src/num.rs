//! Shared numerical kernels: compensated summation, Gauss rules, adaptive
//! quadrature, series acceleration and small Bessel helpers.

use num_complex::Complex64;

use crate::{Error, Result};

/// Compensated (Kahan) accumulator. Shell reductions use a fixed summation
/// order, so results are reproducible across runs.
#[derive(Clone, Copy, Debug, Default)]
pub struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 2, "gauss_legendre order must be >= 2");
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_deriv(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss-Legendre integral of `f` over `[a, b]` split into `panels`
/// equal panels.
pub fn gauss_panels<F>(f: F, a: f64, b: f64, panels: usize, order: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let (xs, ws) = gauss_legendre(order);
    let mut acc = Complex64::new(0.0, 0.0);
    let h = (b - a) / panels as f64;
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        for (x, w) in xs.iter().zip(ws.iter()) {
            acc += f(mid + half * x) * (w * half);
        }
    }
    acc
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK constants).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn gk15<F>(f: &F, a: f64, b: f64) -> (Complex64, f64)
where
    F: Fn(f64) -> Complex64,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        kron += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    kron *= h;
    gauss *= h;
    (kron, (kron - gauss).norm())
}

/// Adaptive Gauss-Kronrod quadrature with interval bisection.
pub fn adaptive_gk<F>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("adaptive_gk: non-finite interval".into()));
    }
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut stack = vec![(a, b, 0u32)];
    let mut total = Complex64::new(0.0, 0.0);
    let mut err_total = 0.0;
    let mut evals = 0usize;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gk15(&f, lo, hi);
        evals += 15;
        if evals > 4_000_000 {
            return Err(Error::Accuracy("adaptive_gk: evaluation budget exceeded".into()));
        }
        // local tolerance scaled by interval fraction
        let local_tol = abs_tol * ((hi - lo) / (b - a)).abs().max(1e-3);
        if err < local_tol || depth >= 48 {
            if depth >= 48 && err > abs_tol {
                return Err(Error::Accuracy(format!(
                    "adaptive_gk: no convergence on [{lo:.3e},{hi:.3e}], err {err:.3e}"
                )));
            }
            total += val;
            err_total += err;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    if err_total > 10.0 * abs_tol.max(1e-300) {
        return Err(Error::Accuracy(format!(
            "adaptive_gk: accumulated error {err_total:.3e} above tolerance {abs_tol:.3e}"
        )));
    }
    Ok(total)
}

/// Real-valued adaptive quadrature wrapper.
pub fn adaptive_gk_real<F>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    adaptive_gk(|x| Complex64::new(f(x), 0.0), a, b, abs_tol).map(|v| v.re)
}

/// Wynn epsilon acceleration of a sequence of partial sums. Returns the
/// deepest even-row estimate, eps_(k+1)^(i) = eps_(k-1)^(i+1) + 1/(eps_k^(i+1) - eps_k^(i)).
pub fn wynn_epsilon(partial: &[f64]) -> f64 {
    let n = partial.len();
    if n == 0 {
        return 0.0;
    }
    if n == 1 {
        return partial[0];
    }
    let mut rows: Vec<Vec<f64>> = vec![partial.to_vec()];
    let mut best = partial[n - 1];
    for k in 1..n {
        let prev = &rows[k - 1];
        let len = prev.len() - 1;
        let mut row = vec![0.0; len];
        let mut bad = false;
        for i in 0..len {
            let d = prev[i + 1] - prev[i];
            if d.abs() < 1e-300 || !d.is_finite() {
                bad = true;
                break;
            }
            let below = if k >= 2 { rows[k - 2][i + 1] } else { 0.0 };
            row[i] = below + 1.0 / d;
        }
        if bad || row.is_empty() {
            break;
        }
        if k % 2 == 0 {
            best = *row.last().unwrap();
        }
        rows.push(row);
    }
    best
}

/// Least-squares solve of an overdetermined system via normal equations
/// (columns are assumed well scaled by the caller).
pub fn least_squares(rows: &[Vec<f64>], rhs: &[f64]) -> Result<Vec<f64>> {
    let m = rows.len();
    if m == 0 {
        return Err(Error::Domain("least_squares: empty system".into()));
    }
    let k = rows[0].len();
    if rhs.len() != m {
        return Err(Error::Domain("least_squares: shape mismatch".into()));
    }
    let a = nalgebra::DMatrix::from_fn(m, k, |i, j| rows[i][j]);
    let b = nalgebra::DVector::from_column_slice(rhs);
    let svd = a.svd(true, true);
    let sol = svd
        .solve(&b, 1e-13)
        .map_err(|e| Error::Accuracy(format!("least_squares: {e}")))?;
    Ok(sol.iter().copied().collect())
}

// ---------------------------------------------------------------------------
// Bessel functions of the first kind for the radial Fourier reductions.
// Orders 0 and 1 via series / Hankel asymptotics, half-integer orders closed.
// ---------------------------------------------------------------------------

fn j0_small(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-3) {
            break;
        }
    }
    sum
}

fn j1_small(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    for k in 1..60 {
        let kf = k as f64;
        term *= -q / (kf * (kf + 1.0));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-3) {
            break;
        }
    }
    sum
}

/// Hankel asymptotic P/Q sums for J_nu: with a_j = prod_(i<=j) (4 nu^2 - (2i-1)^2) / (j! 8^j),
/// P ~ sum (-1)^k a_2k x^(-2k) and Q ~ sum (-1)^k a_(2k+1) x^(-2k-1),
/// truncated at the smallest term.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut t = 1.0; // a_j / x^j
    let mut prev = f64::MAX;
    for j in 1..24 {
        let jf = j as f64;
        t *= (mu - (2.0 * jf - 1.0) * (2.0 * jf - 1.0)) / (8.0 * jf * x);
        if t.abs() > prev || t.abs() < 1e-18 {
            if t.abs() < 1e-18 {
                let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
                if j % 2 == 1 {
                    q += sign * t;
                } else {
                    p += sign * t;
                }
            }
            break;
        }
        prev = t.abs();
        let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if j % 2 == 1 {
            q += sign * t;
        } else {
            p += sign * t;
        }
    }
    (p, q)
}

fn j_asymptotic(nu: f64, x: f64) -> f64 {
    let (p, q) = hankel_pq(nu, x);
    let chi = x - (0.5 * nu + 0.25) * std::f64::consts::PI;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 9.0 {
        j0_small(ax)
    } else {
        j_asymptotic(0.0, ax)
    }
}

pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= 9.0 { j1_small(ax) } else { j_asymptotic(1.0, ax) };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

fn j_half(x: f64) -> f64 {
    if x < 1e-4 {
        // series of sqrt(2/(pi x)) sin x
        (2.0 / (std::f64::consts::PI * x)).sqrt() * (x - x * x * x / 6.0)
    } else {
        (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sin()
    }
}

fn j_three_half(x: f64) -> f64 {
    if x < 1e-2 {
        // leading series terms of sqrt(2/(pi x)) (sin x / x - cos x)
        let x2 = x * x;
        (2.0 / (std::f64::consts::PI * x)).sqrt() * (x2 / 3.0 - x2 * x2 / 30.0 + x2 * x2 * x2 / 840.0)
    } else {
        (2.0 / (std::f64::consts::PI * x)).sqrt() * (x.sin() / x - x.cos())
    }
}

/// J_nu for the orders needed by radial transforms in dimensions 2..=5,
/// i.e. nu = n/2 - 1 with n in {2,3,4,5}.
pub fn bessel_j_halforder(two_nu: i32, x: f64) -> Result<f64> {
    match two_nu {
        0 => Ok(bessel_j0(x)),
        1 => Ok(j_half(x)),
        2 => Ok(bessel_j1(x)),
        3 => Ok(j_three_half(x)),
        _ => Err(Error::Unsupported(format!(
            "bessel order {}/2 not supported",
            two_nu
        ))),
    }
}

/// Approximate k-th positive zero of J_nu (McMahon expansion); used only to
/// segment oscillatory integrals, so modest accuracy is fine.
pub fn bessel_zero_approx(nu: f64, k: usize) -> f64 {
    let beta = (k as f64 + 0.5 * nu - 0.25) * std::f64::consts::PI;
    let mu = 4.0 * nu * nu;
    beta - (mu - 1.0) / (8.0 * beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (xs, ws) = gauss_legendre(8);
        // degree 15 exact
        let val: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.powi(14)).sum();
        assert!((val - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_gk_exponential() {
        let v = adaptive_gk_real(|x| (-x).exp(), 0.0, 30.0, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-11);
    }

    #[test]
    fn bessel_reference_values() {
        assert!((bessel_j0(1.0) - 0.7651976865579666).abs() < 1e-12);
        assert!((bessel_j0(10.0) - (-0.2459357644513483)).abs() < 1e-10);
        assert!((bessel_j1(1.0) - 0.4400505857449335).abs() < 1e-12);
        assert!((bessel_j1(10.0) - 0.04347274616886144).abs() < 1e-10);
        // half-integer small-x series joins the closed form continuously
        let closed = |x: f64| (2.0 / (std::f64::consts::PI * x)).sqrt() * (x.sin() / x - x.cos());
        assert!((j_three_half(0.02) - closed(0.02)).abs() < 1e-12);
        assert!((j_half(1.3) - bessel_j_halforder(1, 1.3).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        // ln 2 = 1 - 1/2 + 1/3 - ...
        let mut partial = Vec::new();
        let mut s = 0.0;
        for k in 1..=12 {
            s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            partial.push(s);
        }
        let v = wynn_epsilon(&partial);
        assert!((v - std::f64::consts::LN_2).abs() < 5e-9);
    }
}
