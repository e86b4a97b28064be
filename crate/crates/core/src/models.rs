//! Model geometries and operators with exact spectral data: flat tori with
//! shifted and powered Laplacians, round spheres with product-form conformal
//! operators, and spherical space forms acting by free isometry groups.

use num_complex::Complex64;

use crate::specfun::gamma;
use crate::{Error, Result};

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub const SHELL_MERGE_REL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum TorusOperator {
    /// Laplacian plus a constant c >= 0 (c = 0 is the plain Laplacian).
    LaplaceShift(f64),
    /// m-th power of the Laplacian.
    LaplacePower(u32),
    /// Laplacian minus a constant c > 0, producing finitely many negative modes.
    LaplaceShiftNegative(f64),
}

impl TorusOperator {
    pub fn shift(&self) -> Option<f64> {
        match self {
            TorusOperator::LaplaceShift(c) => Some(*c),
            TorusOperator::LaplaceShiftNegative(c) => Some(-c),
            TorusOperator::LaplacePower(_) => None,
        }
    }

    pub fn half_order(&self) -> u32 {
        match self {
            TorusOperator::LaplacePower(m) => *m,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct TorusSpec {
    pub n: u32,
    /// Rows generate the period lattice.
    pub basis: Vec<Vec<f64>>,
    pub operator: TorusOperator,
}

impl TorusSpec {
    pub fn unit_cubic(n: u32, operator: TorusOperator) -> Self {
        let basis = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        TorusSpec { n, basis, operator }
    }

    pub fn gram(&self) -> Vec<Vec<f64>> {
        let n = self.n as usize;
        let mut g = vec![vec![0.0; n]; n];
        for (i, gi) in g.iter_mut().enumerate() {
            for (j, gij) in gi.iter_mut().enumerate() {
                *gij = (0..n).map(|k| self.basis[i][k] * self.basis[j][k]).sum();
            }
        }
        g
    }

    pub fn volume(&self) -> f64 {
        let n = self.n as usize;
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| self.basis[i][j]);
        m.determinant().abs()
    }

    /// Gram matrix of the dual lattice 2 pi B^{-1} Z^n.
    pub fn dual_gram(&self) -> Vec<Vec<f64>> {
        let n = self.n as usize;
        let b = nalgebra::DMatrix::from_fn(n, n, |i, j| self.basis[i][j]);
        let g = (&b * b.transpose())
            .try_inverse()
            .expect("lattice basis must be nonsingular");
        let mut out = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                out[i][j] = 4.0 * std::f64::consts::PI * std::f64::consts::PI * g[(i, j)];
            }
        }
        out
    }
}

/// Enumerate the values z^T G z over z in Z^n with value <= cutoff, merged
/// into shells. The zero vector is included.
pub fn quadratic_shells(gram: &[Vec<f64>], cutoff: f64) -> Vec<(f64, u64)> {
    let n = gram.len();
    let g = nalgebra::DMatrix::from_fn(n, n, |i, j| gram[i][j]);
    let ginv = g.clone().try_inverse().expect("gram must be invertible");
    let bounds: Vec<i64> = (0..n)
        .map(|i| (cutoff * ginv[(i, i)]).max(0.0).sqrt().floor() as i64 + 1)
        .collect();
    let mut values = Vec::new();
    let mut z = vec![0i64; n];
    enumerate_rec(&g, &bounds, 0, &mut z, cutoff, &mut values);
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    merge_shells(&values)
}

fn enumerate_rec(
    g: &nalgebra::DMatrix<f64>,
    bounds: &[i64],
    dim: usize,
    z: &mut Vec<i64>,
    cutoff: f64,
    out: &mut Vec<f64>,
) {
    let n = bounds.len();
    if dim == n {
        let mut q = 0.0;
        for i in 0..n {
            for j in 0..n {
                q += z[i] as f64 * g[(i, j)] * z[j] as f64;
            }
        }
        if q <= cutoff * (1.0 + 1e-12) {
            out.push(q);
        }
        return;
    }
    for v in -bounds[dim]..=bounds[dim] {
        z[dim] = v;
        enumerate_rec(g, bounds, dim + 1, z, cutoff, out);
    }
    z[dim] = 0;
}

fn merge_shells(sorted: &[f64]) -> Vec<(f64, u64)> {
    let mut shells: Vec<(f64, u64)> = Vec::new();
    for &v in sorted {
        match shells.last_mut() {
            Some((lam, mult)) if (v - *lam).abs() <= SHELL_MERGE_REL_TOL * lam.abs().max(1.0) => {
                *mult += 1;
            }
            _ => shells.push((v, 1)),
        }
    }
    shells
}

/// How the full diagonal heat kernel is evaluated for this model.
#[derive(Clone, Debug)]
pub enum HeatDiagonal {
    /// exp(-tc) times the periodized Gaussian; image norms |gamma|^2 and raw
    /// dual shells |k|^2 are both kept so the evaluation can cross over.
    TorusShift {
        shift: f64,
        image_norms2: Vec<(f64, u64)>,
        dual_shells: Vec<(f64, u64)>,
        shortest_lattice2: f64,
    },
    /// (1/vol) sum over the dual lattice of exp(-t |k|^(2m)).
    TorusPower {
        m: u32,
        dual_shells: Vec<(f64, u64)>,
    },
    /// Eigen-sum only; spheres use the series continuation route instead of
    /// the heat-coefficient formula.
    SphereShells,
    None,
}

/// The geometry a spectrum was generated from, kept for off-diagonal kernel
/// evaluation.
#[derive(Clone, Debug)]
pub enum Geometry {
    Torus(TorusSpec),
    Sphere(SphereSpec),
    SpaceForm(SpaceFormSpec),
    Abstract,
}

/// A model geometry + operator reduced to spectral data. The local density
/// rule is homogeneous: the eigenfunctions of one shell square-sum to
/// multiplicity / volume at every point.
#[derive(Clone, Debug)]
pub struct SpectrumModel {
    pub n: u32,
    pub m: u32,
    pub volume: f64,
    /// (eigenvalue, multiplicity), ascending.
    pub shells: Vec<(f64, u64)>,
    pub heat_coeffs: Vec<f64>,
    pub label: String,
    pub diag: HeatDiagonal,
    pub geometry: Geometry,
}

impl SpectrumModel {
    /// Count of eigenvalues <= lam (with multiplicity), divided by volume.
    pub fn counting_local(&self, lam: f64) -> f64 {
        let mut count = 0u64;
        for (l, mult) in &self.shells {
            if *l <= lam {
                count += mult;
            } else {
                break;
            }
        }
        count as f64 / self.volume
    }

    pub fn max_shell(&self) -> f64 {
        self.shells.last().map(|s| s.0).unwrap_or(0.0)
    }

    /// Weyl ratio N(lam) (2 pi)^n / (omega_n vol lam^(n/2m)) at the cutoff edge.
    pub fn weyl_ratio(&self) -> f64 {
        let lam = self.max_shell();
        let nf = self.n as f64;
        let omega = std::f64::consts::PI.powf(nf / 2.0)
            / gamma(c64(nf / 2.0 + 1.0)).expect("positive").re;
        let count: u64 = self.shells.iter().map(|s| s.1).sum();
        count as f64 * (2.0 * std::f64::consts::PI).powf(nf)
            / (omega * self.volume * lam.powf(nf / (2.0 * self.m as f64)))
    }
}

/// Exact eigendata of the chosen operator on the torus: shells with
/// |dual vector|^2 <= cutoff, aggregated by eigenvalue.
pub fn torus_spectrum(spec: &TorusSpec, cutoff: f64) -> Result<SpectrumModel> {
    if !(cutoff > 0.0) {
        return Err(Error::Domain("torus_spectrum: cutoff must be positive".into()));
    }
    let dual = spec.dual_gram();
    let raw = quadratic_shells(&dual, cutoff);
    if raw.is_empty() {
        return Err(Error::Domain(
            "torus_spectrum: cutoff excludes even the zero mode".into(),
        ));
    }
    let vol = spec.volume();
    let (shells, heat_coeffs, diag, label) = match spec.operator {
        TorusOperator::LaplaceShift(_) | TorusOperator::LaplaceShiftNegative(_) => {
            let c = spec.operator.shift().unwrap();
            let shells: Vec<(f64, u64)> = raw.iter().map(|(q, m)| (q + c, *m)).collect();
            let coeffs: Vec<f64> = (0..10).map(|j| (-c).powi(j)).collect();
            let images = quadratic_shells(&spec.gram(), 420.0);
            let shortest = images
                .iter()
                .find(|(q, _)| *q > 1e-12)
                .map(|(q, _)| *q)
                .unwrap_or(1.0);
            (
                shells,
                coeffs,
                HeatDiagonal::TorusShift {
                    shift: c,
                    image_norms2: images,
                    dual_shells: raw.clone(),
                    shortest_lattice2: shortest,
                },
                format!("torus{}(shift {c})", spec.n),
            )
        }
        TorusOperator::LaplacePower(m) => {
            let shells: Vec<(f64, u64)> = raw.iter().map(|(q, mult)| (q.powi(m as i32), *mult)).collect();
            let mut coeffs = vec![0.0; 10];
            coeffs[0] = 1.0;
            (
                shells,
                coeffs,
                HeatDiagonal::TorusPower {
                    m,
                    dual_shells: raw.clone(),
                },
                format!("torus{}(Laplacian^{m})", spec.n),
            )
        }
    };
    // eigenvalues of LaplacePower stay sorted since q >= 0; shifts preserve order
    Ok(SpectrumModel {
        n: spec.n,
        m: spec.operator.half_order(),
        volume: vol,
        shells,
        heat_coeffs,
        label,
        diag,
        geometry: Geometry::Torus(spec.clone()),
    })
}

/// Dimension of the degree-l eigenspace of the Laplacian on S^n,
/// eigenvalue l(l + n - 1).
pub fn sphere_multiplicity(n: u32, l: u32) -> u64 {
    if l == 0 {
        return 1;
    }
    // (2l + n - 1)/(n - 1) * C(l + n - 2, n - 2)
    let nn = n as u64;
    let ll = l as u64;
    let mut binom: u64 = 1;
    for i in 1..=(nn - 2) {
        binom = binom * (ll + i) / i;
    }
    binom * (2 * ll + nn - 1) / (nn - 1)
}

/// The product-form shift c_k = (n + 2k - 2)(n - 2k)/4.
pub fn gjms_shift(n: u32, m: u32, k: u32) -> Result<f64> {
    if k < 1 || k > m {
        return Err(Error::Domain(format!("gjms_shift: need 1 <= k <= m, got k={k}")));
    }
    let nf = n as f64;
    let kf = k as f64;
    Ok((nf + 2.0 * kf - 2.0) * (nf - 2.0 * kf) / 4.0)
}

#[derive(Clone, Copy, Debug, serde::Serialize, serde::Deserialize)]
pub struct SphereSpec {
    pub n: u32,
    /// conformal operator of order 2m in product form prod_k (Laplacian + c_k)
    pub m: u32,
}

pub fn sphere_volume(n: u32) -> f64 {
    let nf = n as f64;
    2.0 * std::f64::consts::PI.powf((nf + 1.0) / 2.0)
        / gamma(c64((nf + 1.0) / 2.0)).expect("positive").re
}

pub fn sphere_eigenvalue(spec: &SphereSpec, l: u32) -> f64 {
    let lf = l as f64;
    let nf = spec.n as f64;
    let base = lf * (lf + nf - 1.0);
    (1..=spec.m)
        .map(|k| base + gjms_shift(spec.n, spec.m, k).unwrap())
        .product()
}

pub fn sphere_spectrum(spec: &SphereSpec, l_max: u32) -> SpectrumModel {
    let mut shells: Vec<(f64, u64)> = (0..=l_max)
        .map(|l| (sphere_eigenvalue(spec, l), sphere_multiplicity(spec.n, l)))
        .collect();
    shells.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    SpectrumModel {
        n: spec.n,
        m: spec.m,
        volume: sphere_volume(spec.n),
        shells,
        heat_coeffs: Vec::new(),
        label: format!("sphere{}(order {})", spec.n, 2 * spec.m),
        diag: HeatDiagonal::SphereShells,
        geometry: Geometry::Sphere(*spec),
    }
}

/// A free cyclic quotient of an odd sphere: generator acts on C^((n+1)/2) by
/// rotations with angles 2 pi a_j / q.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct SpaceFormSpec {
    pub base: SphereSpec,
    pub q: u32,
    pub angles: Vec<u32>,
}

impl SpaceFormSpec {
    pub fn projective(n: u32, m: u32) -> Result<Self> {
        if n % 2 == 0 {
            return Err(Error::Domain("projective space form requires odd n".into()));
        }
        Ok(SpaceFormSpec {
            base: SphereSpec { n, m },
            q: 2,
            angles: vec![1; ((n + 1) / 2) as usize],
        })
    }

    pub fn lens(q: u32, angles: Vec<u32>, m: u32) -> Result<Self> {
        let n = 2 * angles.len() as u32 - 1;
        let spec = SpaceFormSpec {
            base: SphereSpec { n, m },
            q,
            angles,
        };
        if !spec.fixed_point_free() {
            return Err(Error::Domain("lens parameters do not act freely".into()));
        }
        Ok(spec)
    }

    pub fn fixed_point_free(&self) -> bool {
        if self.q < 2 {
            return false;
        }
        // every nontrivial power must rotate every complex plane nontrivially
        for g in 1..self.q {
            for a in &self.angles {
                if (a * g) % self.q == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Rotation images of a point under the full deck group (identity first).
    pub fn orbit(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let planes = self.angles.len();
        assert_eq!(x.len(), 2 * planes);
        (0..self.q)
            .map(|g| {
                let mut y = vec![0.0; 2 * planes];
                for (j, a) in self.angles.iter().enumerate() {
                    let th = 2.0 * std::f64::consts::PI * (*a as f64) * (g as f64) / self.q as f64;
                    let (s, c) = th.sin_cos();
                    y[2 * j] = c * x[2 * j] - s * x[2 * j + 1];
                    y[2 * j + 1] = s * x[2 * j] + c * x[2 * j + 1];
                }
                y
            })
            .collect()
    }
}

pub fn geodesic_distance_sphere(x: &[f64], y: &[f64]) -> f64 {
    let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    dot.clamp(-1.0, 1.0).acos()
}

/// Invariant spectrum of the quotient; the spectral route only supports the
/// antipodal quotient (q = 2), where exactly the even-degree harmonics
/// descend with full multiplicity.
pub fn spaceform_spectrum(spec: &SpaceFormSpec, l_max: u32) -> Result<SpectrumModel> {
    if !spec.fixed_point_free() {
        return Err(Error::Domain("spaceform_spectrum: the action must be free".into()));
    }
    if spec.q != 2 {
        return Err(Error::Unsupported(
            "spaceform_spectrum: spectral route supports only q = 2; use the image-sum kernels for general lens spaces".into(),
        ));
    }
    let base = sphere_spectrum(&spec.base, l_max);
    let shells: Vec<(f64, u64)> = (0..=l_max)
        .filter(|l| l % 2 == 0)
        .map(|l| (sphere_eigenvalue(&spec.base, l), sphere_multiplicity(spec.base.n, l)))
        .collect();
    Ok(SpectrumModel {
        volume: base.volume / spec.q as f64,
        shells,
        label: format!("RP{}(order {})", spec.base.n, 2 * spec.base.m),
        geometry: Geometry::SpaceForm(spec.clone()),
        ..base
    })
}

/// Green's kernel of the m-th Laplacian power on flat R^n,
/// Gamma((n-2m)/2) / (2^(2m) pi^(n/2) (m-1)!) r^(2m-n). This is the value of
/// the Riesz family at alpha = 2m, which the tests cross-check.
pub fn flat_green_euclidean(n: u32, m: u32, r: f64) -> Result<f64> {
    if 2 * m >= n {
        return Err(Error::Domain(format!(
            "flat_green_euclidean: need 2m < n, got m={m}, n={n}"
        )));
    }
    if !(r > 0.0) {
        return Err(Error::Domain("flat_green_euclidean: r must be positive".into()));
    }
    let nf = n as f64;
    let mf = m as f64;
    let g = gamma(c64((nf - 2.0 * mf) / 2.0)).expect("2m < n").re;
    let fact = (1..m as u64).fold(1.0, |a, b| a * b as f64);
    Ok(g / (2f64.powi(2 * m as i32) * std::f64::consts::PI.powf(nf / 2.0) * fact)
        * r.powf(2.0 * mf - nf))
}

/// Closed-form Green's function of the product operator on the round sphere.
pub fn sphere_green(n: u32, m: u32, d: f64) -> Result<f64> {
    if 2 * m >= n {
        return Err(Error::Domain(format!(
            "sphere_green: need 2m < n, got m={m}, n={n}"
        )));
    }
    if !(d > 0.0 && d <= std::f64::consts::PI) {
        return Err(Error::Domain(format!(
            "sphere_green: distance {d} outside (0, pi]"
        )));
    }
    let nf = n as f64;
    let mf = m as f64;
    let g = gamma(c64((nf - 2.0 * mf) / 2.0)).expect("2m < n").re;
    let fact = (1..m as u64).fold(1.0, |a, b| a * b as f64);
    let constant =
        g / ((2.0 * std::f64::consts::PI).powf(nf / 2.0) * 2f64.powi(m as i32) * fact);
    Ok(constant * (1.0 - d.cos()).powf((2.0 * mf - nf) / 2.0))
}

/// Stereographic projection from the antipode of the base point: image radius
/// and conformal factor u with (pullback of the flat metric) = u^2 (round metric).
pub fn stereographic(d: f64) -> Result<(f64, f64)> {
    if !(0.0..std::f64::consts::PI).contains(&d) {
        return Err(Error::Domain(format!(
            "stereographic: distance {d} outside [0, pi)"
        )));
    }
    let radius = d.sin() / (1.0 + d.cos());
    let u = 1.0 / (1.0 + d.cos());
    Ok((radius, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn unit_cubic_torus_shells() {
        let spec = TorusSpec::unit_cubic(3, TorusOperator::LaplaceShift(0.0));
        let model = torus_spectrum(&spec, 4.0 * PI * PI * 2.0 + 1e-9).unwrap();
        // shells at |z|^2 in {0, 1, 2}: multiplicities 1, 6, 12
        assert_eq!(model.shells[0], (0.0, 1));
        assert!((model.shells[1].0 - 4.0 * PI * PI).abs() < 1e-9);
        assert_eq!(model.shells[1].1, 6);
        assert!((model.shells[2].0 - 8.0 * PI * PI).abs() < 1e-9);
        assert_eq!(model.shells[2].1, 12);
    }

    #[test]
    fn shift_operator_modes() {
        let spec = TorusSpec::unit_cubic(3, TorusOperator::LaplaceShift(2.5));
        let model = torus_spectrum(&spec, 100.0).unwrap();
        assert!((model.shells[0].0 - 2.5).abs() < 1e-12);
        assert_eq!(model.heat_coeffs[1], -2.5);
        // negative shift: exactly one negative mode for c = 1 on the unit cube
        let spec = TorusSpec::unit_cubic(3, TorusOperator::LaplaceShiftNegative(1.0));
        let model = torus_spectrum(&spec, 100.0).unwrap();
        let neg: Vec<_> = model.shells.iter().filter(|(l, _)| *l < 0.0).collect();
        assert_eq!(neg.len(), 1);
        assert!((neg[0].0 + 1.0).abs() < 1e-12);
        assert_eq!(neg[0].1, 1);
        assert!(model.shells[1].0 > 0.0);
    }

    #[test]
    fn sphere_multiplicities() {
        for l in 0..6 {
            assert_eq!(sphere_multiplicity(2, l), (2 * l + 1) as u64);
            assert_eq!(sphere_multiplicity(3, l), ((l + 1) * (l + 1)) as u64);
        }
        assert_eq!(sphere_multiplicity(5, 1), 6);
        assert_eq!(sphere_multiplicity(4, 0), 1);
    }

    #[test]
    fn gjms_shifts() {
        assert!((gjms_shift(3, 1, 1).unwrap() - 0.75).abs() < 1e-15);
        assert!(gjms_shift(4, 2, 2).unwrap().abs() < 1e-15);
        assert!((gjms_shift(5, 2, 1).unwrap() - 15.0 / 4.0).abs() < 1e-15);
        assert!(gjms_shift(3, 1, 2).is_err());
    }

    #[test]
    fn yamabe_sphere_spectrum() {
        let spec = SphereSpec { n: 3, m: 1 };
        let model = sphere_spectrum(&spec, 10);
        // lambda_l = (l + 1/2)(l + 3/2), all positive
        for (l, (lam, _)) in model.shells.iter().enumerate() {
            let lf = l as f64;
            assert!((lam - (lf + 0.5) * (lf + 1.5)).abs() < 1e-12);
            assert!(*lam > 0.0);
        }
        assert!((model.volume - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn projective_space_spectrum() {
        let spec = SpaceFormSpec::projective(3, 1).unwrap();
        let model = spaceform_spectrum(&spec, 8).unwrap();
        assert!((model.volume - PI * PI).abs() < 1e-12);
        assert_eq!(model.shells[0], (0.75, 1));
        // next surviving shell is l = 2 with multiplicity 9
        assert!((model.shells[1].0 - 2.5 * 3.5).abs() < 1e-12);
        assert_eq!(model.shells[1].1, 9);
    }

    #[test]
    fn lens_space_freeness() {
        assert!(SpaceFormSpec::lens(3, vec![1, 1], 1).is_ok());
        // angle divisible by q gives a fixed point
        assert!(SpaceFormSpec::lens(4, vec![2, 1], 1).is_err());
        let l31 = SpaceFormSpec::lens(3, vec![1, 1], 1).unwrap();
        let x = vec![1.0, 0.0, 0.0, 0.0];
        let orbit = l31.orbit(&x);
        assert_eq!(orbit.len(), 3);
        for y in &orbit[1..] {
            assert!(geodesic_distance_sphere(&x, y) > 0.5);
        }
    }

    #[test]
    fn flat_green_values() {
        assert!((flat_green_euclidean(3, 1, 2.0).unwrap() - 1.0 / (8.0 * PI)).abs() < 1e-15);
        // cross-module identity with the Riesz family at alpha = 2m
        for (n, m, r) in [(3u32, 1u32, 0.7), (5, 1, 1.3), (5, 2, 0.4)] {
            let lhs = flat_green_euclidean(n, m, r).unwrap();
            let rhs = crate::riesz::riesz_eval(c64(2.0 * m as f64), n, r)
                .unwrap()
                .finite_part
                .re;
            assert!((lhs - rhs).abs() < 1e-14 * lhs.abs(), "n={n} m={m}");
        }
        assert!(flat_green_euclidean(3, 2, 1.0).is_err());
    }

    #[test]
    fn sphere_green_values() {
        // antipodal Yamabe value on S^3: 1/(8 pi)
        let v = sphere_green(3, 1, PI).unwrap();
        assert!((v - 1.0 / (8.0 * PI)).abs() < 1e-15);
        // short-distance limit 1/(4 pi d)
        for &d in &[1e-3, 1e-4] {
            let v = sphere_green(3, 1, d).unwrap();
            assert!((v * 4.0 * PI * d - 1.0).abs() < 1e-5, "d={d}");
        }
        // (5, 2, pi/2): constant with (1 - cos)^0... = Gamma(1/2)/((2 pi)^(5/2) 4)
        let v = sphere_green(5, 2, PI / 2.0).unwrap();
        let expect = gamma(c64(0.5)).unwrap().re / ((2.0 * PI).powf(2.5) * 4.0);
        assert!((v - expect).abs() < 1e-15);
    }

    #[test]
    fn stereographic_values() {
        let (r, u) = stereographic(0.0).unwrap();
        assert!(r == 0.0 && (u - 0.5).abs() < 1e-15);
        let (r, u) = stereographic(PI / 2.0).unwrap();
        assert!((r - 1.0).abs() < 1e-15 && (u - 1.0).abs() < 1e-15);
        // radius identity r^2 = (1 - cos d)/(1 + cos d)
        for &d in &[0.3, 1.1, 2.7] {
            let (r, _) = stereographic(d).unwrap();
            assert!((r * r - (1.0 - d.cos()) / (1.0 + d.cos())).abs() < 1e-13);
        }
        assert!(stereographic(PI).is_err());
    }

    #[test]
    fn pullback_identity_symmetric_weights() {
        // sphere_green(n, m, d) = u(x)^((n-2m)/2) u(y)^((n-2m)/2)
        //                         * flat_green(|sigma x - sigma y|)
        // with x at the pole (u = 1/2, sigma x = 0).
        for (n, m) in [(3u32, 1u32), (5, 1), (5, 2)] {
            let w = (n as f64 - 2.0 * m as f64) / 2.0;
            let mut d = 0.05;
            while d < PI {
                let (radius, u) = stereographic(d).unwrap();
                let rhs = 0.5f64.powf(w) * u.powf(w) * flat_green_euclidean(n, m, radius).unwrap();
                let lhs = sphere_green(n, m, d).unwrap();
                assert!(
                    ((lhs - rhs) / lhs).abs() < 1e-12,
                    "n={n} m={m} d={d}: {lhs} vs {rhs}"
                );
                d += 0.37;
            }
        }
    }

    #[test]
    fn weyl_ratio_near_one() {
        let spec = TorusSpec::unit_cubic(3, TorusOperator::LaplaceShift(0.0));
        let model = torus_spectrum(&spec, 4.0 * PI * PI * 400.0).unwrap();
        let ratio = model.weyl_ratio();
        assert!((ratio - 1.0).abs() < 0.1, "weyl ratio {ratio}");
        let sphere = sphere_spectrum(&SphereSpec { n: 3, m: 1 }, 60);
        let ratio = sphere.weyl_ratio();
        assert!((ratio - 1.0).abs() < 0.1, "sphere weyl ratio {ratio}");
    }

    #[test]
    fn torus_heat_coefficient_limit() {
        // t^(n/2) e^(tc) sum e^(-t lam) mult / vol -> (4 pi)^(-n/2)
        let c = 1.7;
        let spec = TorusSpec::unit_cubic(3, TorusOperator::LaplaceShift(c));
        let model = torus_spectrum(&spec, 4.0 * PI * PI * 900.0).unwrap();
        let t = 0.012; // image remainder below 1e-12 here
        let mut sum = crate::num::Kahan::new();
        for (lam, mult) in &model.shells {
            sum.add((-t * lam).exp() * *mult as f64);
        }
        let lhs = t.powf(1.5) * (t * c).exp() * sum.value() / model.volume;
        assert!(
            (lhs - (4.0 * PI).powf(-1.5)).abs() < 1e-8,
            "{lhs} vs {}",
            (4.0 * PI).powf(-1.5)
        );
    }
}
