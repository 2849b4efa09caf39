//! The bi-orthogonal pair of Riesz bases on [0, 1] attached to the nonlocal
//! boundary conditions u(1) = 0, u_x(0) = u_x(1):
//!
//! ```text
//! phi_{1,0} = 2(1-x)   phi_{1,n} = 4(1-x) cos(l_n x)   phi_{2,n} = 4 sin(l_n x)
//! psi_{1,0} = 1        psi_{1,n} = cos(l_n x)          psi_{2,n} = x sin(l_n x)
//! ```
//!
//! with l_n = 2 pi n and <phi_i, psi_j> = delta_ij. Trig values go through
//! sinpi/cospi so that every basis function vanishes *exactly* at x = 1.
//!
//! Analysis (coefficient extraction against Psi) uses adaptive quadrature
//! with the panel count scaled by the mode frequency, or closed-form
//! x^m-times-trig integrals when the data is polynomial.

use crate::error::{Error, Result};
use crate::gamma::{cospi, sinpi};
use crate::quad;
use crate::sampled::SampledFunction;

/// Default absolute tolerance for one analysis coefficient.
pub const QUAD_TOL: f64 = 1e-11;

/// Index (k, n) into either basis; k = 1 is the cosine-type family (with the
/// principal mode n = 0), k = 2 the sine-type family (n >= 1 only).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModeIndex {
    k: u8,
    n: u32,
}

impl ModeIndex {
    pub fn new(k: u8, n: u32) -> Result<ModeIndex> {
        match (k, n) {
            (1, _) | (2, 1..) => Ok(ModeIndex { k, n }),
            _ => Err(Error::InvalidIndex { k, n }),
        }
    }

    pub fn principal() -> ModeIndex {
        ModeIndex { k: 1, n: 0 }
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The frequency l_n = 2 pi n (l_0 = 0 for the principal mode).
    pub fn lambda(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.n as f64
    }
}

/// phi_{k,n}(x).
pub fn phi(idx: ModeIndex, x: f64) -> f64 {
    match (idx.k, idx.n) {
        (1, 0) => 2.0 * (1.0 - x),
        (1, n) => 4.0 * (1.0 - x) * cospi(2.0 * n as f64 * x),
        (_, n) => 4.0 * sinpi(2.0 * n as f64 * x),
    }
}

/// psi_{k,n}(x).
pub fn psi(idx: ModeIndex, x: f64) -> f64 {
    match (idx.k, idx.n) {
        (1, 0) => 1.0,
        (1, n) => cospi(2.0 * n as f64 * x),
        (_, n) => x * sinpi(2.0 * n as f64 * x),
    }
}

/// A truncated expansion in the Phi basis: one principal coefficient plus N
/// coefficient pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesField {
    /// Coefficient of phi_{1,0}.
    pub c10: f64,
    /// Coefficients of phi_{1,n}, n = 1..=N.
    pub c1: Vec<f64>,
    /// Coefficients of phi_{2,n}, n = 1..=N.
    pub c2: Vec<f64>,
}

impl SeriesField {
    pub fn new(c10: f64, c1: Vec<f64>, c2: Vec<f64>) -> Result<SeriesField> {
        if c1.len() != c2.len() {
            return Err(Error::Format(format!(
                "coefficient families differ in length: {} vs {}",
                c1.len(),
                c2.len()
            )));
        }
        Ok(SeriesField { c10, c1, c2 })
    }

    pub fn zeros(n: usize) -> SeriesField {
        SeriesField {
            c10: 0.0,
            c1: vec![0.0; n],
            c2: vec![0.0; n],
        }
    }

    /// Truncation order N.
    pub fn truncation(&self) -> usize {
        self.c1.len()
    }

    pub fn coef(&self, idx: ModeIndex) -> f64 {
        match (idx.k, idx.n) {
            (1, 0) => self.c10,
            (1, n) => self.c1[n as usize - 1],
            (_, n) => self.c2[n as usize - 1],
        }
    }

    /// Deterministic coefficient order: (1,0), then (1,n), (2,n) ascending n.
    pub fn iter(&self) -> impl Iterator<Item = (ModeIndex, f64)> + '_ {
        std::iter::once((ModeIndex::principal(), self.c10)).chain((1..=self.truncation()).flat_map(
            move |n| {
                [
                    (ModeIndex { k: 1, n: n as u32 }, self.c1[n - 1]),
                    (ModeIndex { k: 2, n: n as u32 }, self.c2[n - 1]),
                ]
            },
        ))
    }

    pub fn norm_l1(&self) -> f64 {
        self.c10.abs()
            + self.c1.iter().map(|c| c.abs()).sum::<f64>()
            + self.c2.iter().map(|c| c.abs()).sum::<f64>()
    }

    pub fn max_abs_diff(&self, other: &SeriesField) -> f64 {
        let mut worst = (self.c10 - other.c10).abs();
        for (a, b) in self.c1.iter().zip(&other.c1) {
            worst = worst.max((a - b).abs());
        }
        for (a, b) in self.c2.iter().zip(&other.c2) {
            worst = worst.max((a - b).abs());
        }
        worst
    }
}

/// Closed-form C_m = int_0^1 x^m cos(l_n x) dx and S_m = int_0^1 x^m sin(l_n x) dx
/// at l_n = 2 pi n, where sin(l_n) = 0 and cos(l_n) = 1 exactly. Upward
/// recurrences in m are stable here: every step divides by l_n >= 2 pi.
fn poly_trig_integrals(n: u32, max_m: usize) -> (Vec<f64>, Vec<f64>) {
    let lambda = 2.0 * std::f64::consts::PI * n as f64;
    let mut c = vec![0.0f64; max_m + 1];
    let mut s = vec![0.0f64; max_m + 1];
    for m in 1..=max_m {
        c[m] = -(m as f64 / lambda) * s[m - 1];
        s[m] = -1.0 / lambda + (m as f64 / lambda) * c[m - 1];
    }
    (c, s)
}

/// Inner product <g, psi_{k,n}> for polynomial g, exact up to rounding.
fn poly_coefficient(coeffs: &[f64], idx: ModeIndex) -> f64 {
    match (idx.k, idx.n) {
        (1, 0) => coeffs
            .iter()
            .enumerate()
            .map(|(m, &a)| a / (m as f64 + 1.0))
            .sum(),
        (1, n) => {
            let (c, _) = poly_trig_integrals(n, coeffs.len().saturating_sub(1));
            coeffs.iter().enumerate().map(|(m, &a)| a * c[m]).sum()
        }
        (_, n) => {
            // <g, x sin> = sum a_m S_{m+1}
            let (_, s) = poly_trig_integrals(n, coeffs.len());
            coeffs.iter().enumerate().map(|(m, &a)| a * s[m + 1]).sum()
        }
    }
}

fn quad_coefficient(g: &SampledFunction, idx: ModeIndex, tol: f64) -> Result<f64> {
    let panels = (4 * idx.n as usize).max(8);
    let f = |x: f64| g.eval(x) * psi(idx, x);
    let (v, _) = quad::integrate(&f, 0.0, 1.0, tol, panels)?;
    Ok(v)
}

/// One coefficient <g, psi_{k,n}>.
pub fn coefficient(g: &SampledFunction, idx: ModeIndex, tol: f64) -> Result<f64> {
    if let Some(p) = g.as_polynomial() {
        Ok(poly_coefficient(p.coeffs(), idx))
    } else {
        quad_coefficient(g, idx, tol)
    }
}

/// Extract all Psi-coefficients of g up to truncation N.
pub fn analyze(g: &SampledFunction, n: usize) -> Result<SeriesField> {
    analyze_with_tol(g, n, QUAD_TOL)
}

pub fn analyze_with_tol(g: &SampledFunction, n: usize, tol: f64) -> Result<SeriesField> {
    if n < 1 {
        return Err(Error::Domain("truncation N must be >= 1".into()));
    }
    let c10 = coefficient(g, ModeIndex::principal(), tol)?;
    let mut c1 = Vec::with_capacity(n);
    let mut c2 = Vec::with_capacity(n);
    for m in 1..=n as u32 {
        c1.push(coefficient(g, ModeIndex::new(1, m)?, tol)?);
        c2.push(coefficient(g, ModeIndex::new(2, m)?, tol)?);
    }
    SeriesField::new(c10, c1, c2)
}

/// Evaluate the Phi-expansion at x. Terms are summed in a fixed order
/// (principal, then k = 1 before k = 2 for each ascending n) so outputs are
/// bit-stable. Every phi vanishes identically at x = 1, so the synthesis is
/// exactly zero there.
pub fn synthesize(field: &SeriesField, x: f64) -> f64 {
    let mut sum = field.c10 * 2.0 * (1.0 - x);
    for n in 1..=field.truncation() {
        let two_nx = 2.0 * n as f64 * x;
        sum += field.c1[n - 1] * 4.0 * (1.0 - x) * cospi(two_nx);
        sum += field.c2[n - 1] * 4.0 * sinpi(two_nx);
    }
    sum
}

/// Gram matrix G[i][j] = <phi_i, psi_j> over the 2N+1 indices ordered
/// (1,0), (1,1), (2,1), (1,2), (2,2), ... ; bi-orthogonality means G is the
/// identity up to quadrature error.
pub fn biorthogonality_matrix(n: usize) -> Result<Vec<Vec<f64>>> {
    let indices = index_range(n)?;
    let dim = indices.len();
    let mut g = vec![vec![0.0f64; dim]; dim];
    for (i, &idx_phi) in indices.iter().enumerate() {
        for (j, &idx_psi) in indices.iter().enumerate() {
            let freq = (idx_phi.n + idx_psi.n) as usize;
            let panels = (4 * freq).max(8);
            let f = |x: f64| phi(idx_phi, x) * psi(idx_psi, x);
            let (v, _) = quad::integrate(&f, 0.0, 1.0, QUAD_TOL, panels)?;
            g[i][j] = v;
        }
    }
    Ok(g)
}

/// The standard index ordering for matrices: (1,0), then (1,n), (2,n).
pub fn index_range(n: usize) -> Result<Vec<ModeIndex>> {
    if n < 1 {
        return Err(Error::Domain("truncation N must be >= 1".into()));
    }
    let mut v = Vec::with_capacity(2 * n + 1);
    v.push(ModeIndex::principal());
    for m in 1..=n as u32 {
        v.push(ModeIndex::new(1, m)?);
        v.push(ModeIndex::new(2, m)?);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invalid_sine_mode_zero() {
        assert!(matches!(
            ModeIndex::new(2, 0),
            Err(Error::InvalidIndex { k: 2, n: 0 })
        ));
    }

    #[test]
    fn basis_point_values() {
        let p10 = ModeIndex::principal();
        assert_eq!(phi(p10, 0.0), 2.0);
        // phi_{2,3}(0.25) = 4 sin(3 pi / 2) = -4, exactly
        assert_eq!(phi(ModeIndex::new(2, 3).unwrap(), 0.25), -4.0);
        // phi_{1,1}(0.5) = 4 * 0.5 * cos(pi) = -2
        assert_eq!(phi(ModeIndex::new(1, 1).unwrap(), 0.5), -2.0);
        assert_eq!(psi(p10, 0.77), 1.0);
        // psi_{1,2}(0.25) = cos(pi) = -1
        assert_eq!(psi(ModeIndex::new(1, 2).unwrap(), 0.25), -1.0);
        // psi_{2,1}(0.25) = 0.25 sin(pi/2) = 0.25
        assert_eq!(psi(ModeIndex::new(2, 1).unwrap(), 0.25), 0.25);
    }

    #[test]
    fn all_phi_vanish_at_one_exactly() {
        let field = SeriesField::new(1.25, vec![0.5, -2.0, 3.0], vec![1.0, -1.5, 0.25]).unwrap();
        assert_eq!(synthesize(&field, 1.0), 0.0);
    }

    #[test]
    fn analyze_principal_mode_data() {
        // z(x) = 2(1-x) = phi_{1,0}: its Psi-coefficients are exactly the
        // unit vector.
        let g = SampledFunction::polynomial(vec![2.0, -2.0]);
        let field = analyze(&g, 3).unwrap();
        assert!((field.c10 - 1.0).abs() < 1e-14);
        for n in 0..3 {
            assert!(field.c1[n].abs() < 1e-14, "c1[{n}] = {}", field.c1[n]);
            assert!(field.c2[n].abs() < 1e-14, "c2[{n}] = {}", field.c2[n]);
        }
    }

    #[test]
    fn analyze_pure_sine_mode() {
        // g = 4 sin(2 pi x) = phi_{2,1}
        let g = SampledFunction::from_fn(|x| 4.0 * (2.0 * std::f64::consts::PI * x).sin());
        let field = analyze(&g, 2).unwrap();
        assert!((field.c2[0] - 1.0).abs() < 1e-11);
        for &c in [field.c10, field.c1[0], field.c1[1], field.c2[1]].iter() {
            assert!(c.abs() < 1e-11);
        }
        // synthesis reproduces the function
        let mut worst: f64 = 0.0;
        for i in 0..=200 {
            let x = i as f64 / 200.0;
            worst = worst.max((synthesize(&field, x) - g.eval(x)).abs());
        }
        assert!(worst <= 1e-10, "worst = {worst:e}");
    }

    #[test]
    fn analyze_cubic_exact_coefficients() {
        // z(x) = (1/10)(1 - (2x-1)^3) = 0.2 - 0.6x + 1.2x^2 - 0.8x^3.
        // Closed-form: <z, psi_{1,0}> = 1/10, <z, psi_{1,n}> = 0 exactly
        // (the quadratic and cubic contributions cancel), and
        // <z, psi_{2,n}> = -2.4 / l_n^3.
        let z = SampledFunction::polynomial(vec![0.2, -0.6, 1.2, -0.8]);
        let field = analyze(&z, 6).unwrap();
        assert!((field.c10 - 0.1).abs() < 1e-15);
        for n in 1..=6usize {
            let l = 2.0 * std::f64::consts::PI * n as f64;
            assert!(
                field.c1[n - 1].abs() < 1e-16,
                "c1[{n}] = {:e}",
                field.c1[n - 1]
            );
            let want = -2.4 / (l * l * l);
            assert!(
                (field.c2[n - 1] - want).abs() < 1e-16,
                "c2[{n}] = {:e} want {want:e}",
                field.c2[n - 1]
            );
        }
    }

    #[test]
    fn analyze_quartic_exact_coefficients() {
        // h(x) = 1 - 6x^2 + 8x^3 - 3x^4: <h, psi_{1,0}> = 2/5,
        // <h, psi_{1,n}> = 72/l^4, <h, psi_{2,n}> = 360/l^5.
        let h = SampledFunction::polynomial(vec![1.0, 0.0, -6.0, 8.0, -3.0]);
        let field = analyze(&h, 4).unwrap();
        assert!((field.c10 - 0.4).abs() < 1e-15);
        for n in 1..=4usize {
            let l = 2.0 * std::f64::consts::PI * n as f64;
            let want1 = 72.0 / l.powi(4);
            let want2 = 360.0 / l.powi(5);
            assert!((field.c1[n - 1] - want1).abs() < 1e-15);
            assert!((field.c2[n - 1] - want2).abs() < 1e-15);
        }
    }

    #[test]
    fn quadrature_path_matches_polynomial_path() {
        let coeffs = vec![0.2, -0.6, 1.2, -0.8];
        let p = SampledFunction::polynomial(coeffs.clone());
        let c = SampledFunction::from_fn(move |x| {
            coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a)
        });
        let fp = analyze(&p, 5).unwrap();
        let fc = analyze(&c, 5).unwrap();
        assert!(fp.max_abs_diff(&fc) < 1e-11);
    }

    #[test]
    fn small_biorthogonality_matrix_is_identity() {
        let g = biorthogonality_matrix(2).unwrap();
        for (i, row) in g.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (v - want).abs() < 1e-10,
                    "G[{i}][{j}] = {v} (want {want})"
                );
            }
        }
    }

    #[test]
    fn series_field_requires_matching_lengths() {
        assert!(SeriesField::new(0.0, vec![1.0], vec![]).is_err());
    }
}
