//! Polynomial multipliers `M_phi` on the Hardy space and their adjoints.
//!
//! On Taylor coefficients the adjoint acts as a banded backward operator,
//! `(M_phi^* f)_n = sum_j conj(c_j) f_{n+j}`. The reproducing kernel `k_z`
//! is an eigenvector with eigenvalue `conj(phi(z))`, which ties recurrence of
//! `M_phi^*` to how `phi(D)` sits against the unit circle.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dyadic::{sum_cmp, DyadicComplex, DyadicReal};
use crate::error::{LabError, Result};
use crate::logscalar::LogScalar;
use crate::text::{self, de_complex_vec};
use crate::vector::{CoefVec, Side};

pub const DEFAULT_GRID: usize = 1 << 12;
pub const DEFAULT_WITNESS_TOL: f64 = 1e-9;
/// `|a|` within this of 1 counts as unimodular for constant symbols.
pub const CONSTANT_UNIMODULAR_TOL: f64 = 1e-12;

/// Interior radii probed for an Intersects witness.
const PROBE_RADII: [f64; 16] = [
    0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.999, 0.9999, 0.99999, 0.999999,
];

/// `phi(z) = sum_j c_j z^j`, coefficients low-degree first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolySymbol {
    #[serde(deserialize_with = "de_complex_vec")]
    coeffs: Vec<Complex64>,
}

impl PolySymbol {
    /// Trailing zero coefficients are dropped; the zero polynomial is the
    /// constant 0.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(LabError::arg("symbol needs at least one coefficient"));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(LabError::arg("symbol coefficients must be finite"));
        }
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && *coeffs.last().unwrap() == Complex64::new(0.0, 0.0) {
            coeffs.pop();
        }
        Ok(PolySymbol { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(a: Complex64) -> Self {
        PolySymbol { coeffs: vec![a] }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `phi / s` coefficientwise.
    pub fn scaled(&self, s: Complex64) -> Result<Self> {
        if s == Complex64::new(0.0, 0.0) {
            return Err(LabError::arg("cannot divide a symbol by zero"));
        }
        Self::new(self.coeffs.iter().map(|&c| c / s).collect())
    }

    /// `sum_j j |c_j|`, a bound for `|phi'|` on the closed disk.
    pub fn lipschitz(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| j as f64 * c.norm())
            .sum()
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl fmt::Display for PolySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|c| format!("[{},{}]", c.re, c.im))
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for PolySymbol {
    type Err = LabError;

    /// Accepts a coefficient list such as `[[0.8,0],[1,0]]` or `[0.8, 1]`.
    fn from_str(s: &str) -> Result<Self> {
        PolySymbol::new(text::parse_complex_list(s)?)
    }
}

/// `M_phi^* x` on Hardy coefficients.
pub fn apply_adjoint(phi: &PolySymbol, x: &CoefVec, trunc: u64) -> Result<CoefVec> {
    if x.side() != Side::HardyCoef {
        return Err(LabError::SideMismatch {
            left: Side::HardyCoef,
            right: x.side(),
        });
    }
    if let Some((_, hi)) = x.support_bounds() {
        if hi > trunc as i64 {
            return Err(LabError::pre(format!(
                "vector support reaches {hi}, beyond trunc {trunc}"
            )));
        }
    }
    let conj: Vec<LogScalar> = phi
        .coeffs
        .iter()
        .map(|c| LogScalar::from_complex(c.conj()))
        .collect();
    let mut acc: std::collections::BTreeMap<i64, LogScalar> = std::collections::BTreeMap::new();
    for (m, v) in x.iter() {
        for (j, c) in conj.iter().enumerate() {
            let n = m - j as i64;
            if n < 0 || c.is_zero() {
                continue;
            }
            let e = acc.entry(n).or_insert(LogScalar::ZERO);
            *e = e.add(&(*c * v));
        }
    }
    CoefVec::from_log(Side::HardyCoef, acc)
}

/// Truncated reproducing kernel `k_z^{(N)}` with its discarded tail.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelVector {
    pub z: Complex64,
    pub trunc: u64,
    pub vector: CoefVec,
    /// `ln(|z|^{2(N+1)} / (1 - |z|^2))`, `-inf` for `z = 0`.
    pub log_tail_norm_sq: f64,
}

impl KernelVector {
    pub fn tail_norm_sq(&self) -> f64 {
        self.log_tail_norm_sq.exp()
    }
}

pub const KERNEL_MAX_MODULUS: f64 = 0.95;

fn check_kernel_point(z: Complex64) -> Result<()> {
    let r = z.norm();
    if !(r < 1.0) {
        return Err(LabError::arg(format!("kernel point |z| = {r} is not inside the unit disk")));
    }
    if r > KERNEL_MAX_MODULUS {
        return Err(LabError::pre(format!(
            "|z| = {r} exceeds {KERNEL_MAX_MODULUS}; the tail bound would be meaningless"
        )));
    }
    Ok(())
}

fn log_tail(z: Complex64, trunc: u64) -> f64 {
    let r = z.norm();
    if r == 0.0 {
        return f64::NEG_INFINITY;
    }
    2.0 * (trunc + 1) as f64 * r.ln() - (-r * r).ln_1p()
}

pub fn kernel_vector(z: Complex64, trunc: u64) -> Result<KernelVector> {
    check_kernel_point(z)?;
    let zc = LogScalar::from_complex(z.conj());
    let vector = CoefVec::from_log(Side::HardyCoef, (0..=trunc).map(|n| (n as i64, zc.powi(n))))?;
    Ok(KernelVector {
        z,
        trunc,
        vector,
        log_tail_norm_sq: log_tail(z, trunc),
    })
}

/// Outcome of the truncated eigen-identity check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenCheck {
    pub residual: f64,
    /// `ln residual`, finite even when `residual` underflows.
    pub log_residual: f64,
    pub log_bound: f64,
    pub within_bound: bool,
}

/// Relative residual `||M^* k - conj(phi(z)) k|| / ||k||` of the truncated
/// kernel, computed exactly so that values far below `1e-16` are resolved.
pub fn eigen_check(phi: &PolySymbol, z: Complex64, trunc: u64) -> Result<EigenCheck> {
    check_kernel_point(z)?;
    let zc = DyadicComplex::from_complex(z.conj());
    let mut powers = Vec::with_capacity(trunc as usize + 1);
    let mut p = DyadicComplex::one();
    for _ in 0..=trunc {
        powers.push(p.clone());
        p = p.mul(&zc);
    }
    let coeffs: Vec<DyadicComplex> = phi
        .coeffs
        .iter()
        .map(|c| DyadicComplex::from_complex(c.conj()))
        .collect();
    // conj(phi(z)) = sum_j conj(c_j) conj(z)^j, also exact.
    let mut eig = DyadicComplex::zero();
    let mut zp = DyadicComplex::one();
    for c in &coeffs {
        eig = eig.add(&c.mul(&zp));
        zp = zp.mul(&zc);
    }

    let mut res_sq = DyadicReal::zero();
    let mut k_sq = DyadicReal::zero();
    for n in 0..=trunc as usize {
        k_sq = k_sq.add(&powers[n].norm_sqr());
        let mut r = eig.mul(&powers[n]);
        for (j, c) in coeffs.iter().enumerate() {
            if let Some(kp) = powers.get(n + j) {
                r = r.sub(&c.mul(kp));
            }
        }
        res_sq = res_sq.add(&r.norm_sqr());
    }
    let log_residual = 0.5 * (res_sq.ln() - k_sq.ln());

    let d = phi.degree() as f64;
    let c = (d + 1.0) * phi.max_coeff_abs() * (1.0 + phi.eval(z).norm());
    let log_bound = c.ln() + 0.5 * log_tail(z, trunc);
    Ok(EigenCheck {
        residual: log_residual.exp(),
        log_residual,
        log_bound,
        within_bound: log_residual <= log_bound,
    })
}

/// How a disjointness certificate was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertRoute {
    /// Sampled boundary extremum plus Lipschitz slack.
    BoundaryGrid,
    /// Triangle inequality on the coefficients.
    Coefficients,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RangeCertificate {
    Intersects {
        witness: Complex64,
        value: Complex64,
    },
    DisjointInside {
        route: CertRoute,
        boundary_max: f64,
        slack: f64,
        samples: usize,
    },
    DisjointOutside {
        route: CertRoute,
        winding: i64,
        boundary_min: f64,
        slack: f64,
        samples: usize,
    },
    /// `margin < 0` is how far the best disjointness bound fell short.
    Uncertain {
        margin: f64,
        boundary_min: f64,
        boundary_max: f64,
    },
}

impl RangeCertificate {
    pub fn is_intersects(&self) -> bool {
        matches!(self, RangeCertificate::Intersects { .. })
    }

    pub fn is_disjoint(&self) -> bool {
        matches!(
            self,
            RangeCertificate::DisjointInside { .. } | RangeCertificate::DisjointOutside { .. }
        )
    }

    /// Re-derives the certificate's evidence from `phi`.
    pub fn reverify(&self, phi: &PolySymbol, tol: f64) -> bool {
        match *self {
            RangeCertificate::Intersects { witness, .. } => {
                witness.norm() < 1.0 && (phi.eval(witness).norm() - 1.0).abs() <= tol
            }
            RangeCertificate::DisjointInside { route, samples, .. } => match route {
                CertRoute::Coefficients => coefficients_inside(phi),
                CertRoute::BoundaryGrid => {
                    let s = boundary_scan(phi, samples);
                    s.max + s.slack < 1.0
                }
            },
            RangeCertificate::DisjointOutside {
                route,
                samples,
                winding,
                ..
            } => match route {
                CertRoute::Coefficients => coefficients_outside(phi),
                CertRoute::BoundaryGrid => {
                    let s = boundary_scan(phi, samples);
                    s.winding_valid && s.winding == winding && winding == 0 && s.min - s.slack > 1.0
                }
            },
            RangeCertificate::Uncertain { .. } => true,
        }
    }
}

/// Net number of turns of `phi(e^{i theta})` around 0, by accumulating
/// principal argument increments over `samples` equally spaced points.
pub fn winding_number(phi: &PolySymbol, samples: usize) -> i64 {
    boundary_scan(phi, samples.max(3)).winding
}

struct BoundaryScan {
    min: f64,
    max: f64,
    slack: f64,
    winding: i64,
    /// Each sampling step moves `phi` by less than its distance to 0, so no
    /// turn can be missed.
    winding_valid: bool,
}

fn boundary_scan(phi: &PolySymbol, samples: usize) -> BoundaryScan {
    let lip = phi.lipschitz();
    let mut min = f64::INFINITY;
    let mut max: f64 = 0.0;
    let mut turn = 0.0;
    let first = phi.eval(Complex64::new(1.0, 0.0));
    let mut prev = first;
    for k in 1..=samples {
        let v = if k == samples {
            first
        } else {
            phi.eval(Complex64::from_polar(1.0, TAU * k as f64 / samples as f64))
        };
        let m = prev.norm();
        min = min.min(m);
        max = max.max(m);
        turn += (v / prev).arg();
        prev = v;
    }
    BoundaryScan {
        min,
        max,
        slack: lip * PI / samples as f64,
        winding: (turn / TAU).round() as i64,
        winding_valid: lip * TAU / (samples as f64) < min,
    }
}

/// `sum_j |c_j| <= 1`, decided exactly when every coefficient is real or
/// purely imaginary.
fn coefficients_inside(phi: &PolySymbol) -> bool {
    if phi.is_constant() {
        return false;
    }
    match axis_moduli(phi) {
        Some(m) => sum_cmp(&m, &[], 1.0) != std::cmp::Ordering::Greater,
        None => {
            let s: f64 = phi.coeffs.iter().map(|c| c.norm()).sum();
            s * (1.0 + rounding_margin(phi)) <= 1.0
        }
    }
}

/// `|c_0| - sum_{j>=1} |c_j| >= 1`.
fn coefficients_outside(phi: &PolySymbol) -> bool {
    if phi.is_constant() {
        return false;
    }
    match axis_moduli(phi) {
        Some(m) => sum_cmp(&m[..1], &m[1..], 1.0) != std::cmp::Ordering::Less,
        None => {
            let e = rounding_margin(phi);
            let rest: f64 = phi.coeffs[1..].iter().map(|c| c.norm()).sum();
            phi.coeffs[0].norm() * (1.0 - e) - rest * (1.0 + e) >= 1.0
        }
    }
}

fn axis_moduli(phi: &PolySymbol) -> Option<Vec<f64>> {
    phi.coeffs
        .iter()
        .map(|c| match (c.re == 0.0, c.im == 0.0) {
            (_, true) => Some(c.re.abs()),
            (true, false) => Some(c.im.abs()),
            _ => None,
        })
        .collect()
}

fn rounding_margin(phi: &PolySymbol) -> f64 {
    4.0 * (phi.coeffs.len() as f64 + 2.0) * f64::EPSILON
}

/// Locates `phi(D)` relative to the unit circle.
pub fn range_circle_test(phi: &PolySymbol, grid: usize, tol: f64) -> Result<RangeCertificate> {
    if grid < 256 {
        return Err(LabError::pre(format!("grid {grid} below 256 boundary samples")));
    }
    if !(tol > 0.0) {
        return Err(LabError::arg("tol must be positive"));
    }
    if phi.is_constant() {
        return Ok(constant_range(phi.coeffs[0], tol));
    }
    let mut last = None;
    for samples in [grid, 4 * grid] {
        if let Some(w) = intersect_witness(phi, samples, tol) {
            return Ok(w);
        }
        let s = boundary_scan(phi, samples);
        if coefficients_inside(phi) {
            return Ok(RangeCertificate::DisjointInside {
                route: CertRoute::Coefficients,
                boundary_max: s.max,
                slack: s.slack,
                samples,
            });
        }
        if s.max + s.slack < 1.0 {
            return Ok(RangeCertificate::DisjointInside {
                route: CertRoute::BoundaryGrid,
                boundary_max: s.max,
                slack: s.slack,
                samples,
            });
        }
        if s.winding_valid && s.winding == 0 {
            let route = if coefficients_outside(phi) {
                Some(CertRoute::Coefficients)
            } else if s.min - s.slack > 1.0 {
                Some(CertRoute::BoundaryGrid)
            } else {
                None
            };
            if let Some(route) = route {
                return Ok(RangeCertificate::DisjointOutside {
                    route,
                    winding: 0,
                    boundary_min: s.min,
                    slack: s.slack,
                    samples,
                });
            }
        }
        last = Some(s);
    }
    let s = last.expect("at least one scan");
    Ok(RangeCertificate::Uncertain {
        margin: (1.0 - s.max - s.slack).max(s.min - s.slack - 1.0),
        boundary_min: s.min,
        boundary_max: s.max,
    })
}

fn constant_range(a: Complex64, tol: f64) -> RangeCertificate {
    let m = a.norm();
    if (m - 1.0).abs() <= tol {
        RangeCertificate::Intersects {
            witness: Complex64::new(0.0, 0.0),
            value: a,
        }
    } else if m < 1.0 {
        RangeCertificate::DisjointInside {
            route: CertRoute::Coefficients,
            boundary_max: m,
            slack: 0.0,
            samples: 0,
        }
    } else {
        RangeCertificate::DisjointOutside {
            route: CertRoute::Coefficients,
            winding: 0,
            boundary_min: m,
            slack: 0.0,
            samples: 0,
        }
    }
}

/// Probes interior circles for a point with `||phi| - 1| <= tol`, bisecting
/// between an inside and an outside sample when none lands directly.
fn intersect_witness(phi: &PolySymbol, angles: usize, tol: f64) -> Option<RangeCertificate> {
    let g = |z: Complex64| phi.eval(z).norm() - 1.0;
    let mut below: Option<(Complex64, f64)> = None;
    let mut above: Option<(Complex64, f64)> = None;
    for &r in &PROBE_RADII {
        let count = if r == 0.0 { 1 } else { angles };
        for k in 0..count {
            let z = if k == 0 {
                Complex64::new(r, 0.0)
            } else {
                Complex64::from_polar(r, TAU * k as f64 / count as f64)
            };
            let v = g(z);
            if v.abs() <= tol {
                return Some(RangeCertificate::Intersects {
                    witness: z,
                    value: phi.eval(z),
                });
            }
            if v < 0.0 && below.map_or(true, |(_, b)| v > b) {
                below = Some((z, v));
            }
            if v > 0.0 && above.map_or(true, |(_, a)| v < a) {
                above = Some((z, v));
            }
        }
    }
    let (mut lo, _) = below?;
    let (mut hi, _) = above?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = g(mid);
        if v.abs() <= tol && mid.norm() < 1.0 {
            return Some(RangeCertificate::Intersects {
                witness: mid,
                value: phi.eval(mid),
            });
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjointClass {
    FrequentlyHypercyclicMultiplyRecurrent,
    NotRecurrent,
    ConstantRecurrent,
    ConstantNotRecurrent,
    Uncertain,
}

impl fmt::Display for AdjointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AdjointClass::FrequentlyHypercyclicMultiplyRecurrent => {
                "FrequentlyHypercyclic-and-MultiplyRecurrent"
            }
            AdjointClass::NotRecurrent => "NotRecurrent",
            AdjointClass::ConstantRecurrent => "ConstantRecurrent",
            AdjointClass::ConstantNotRecurrent => "ConstantNotRecurrent",
            AdjointClass::Uncertain => "Uncertain",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdjointVerdict {
    pub class: AdjointClass,
    /// Absent for constant symbols.
    pub certificate: Option<RangeCertificate>,
}

pub fn classify_adjoint(phi: &PolySymbol) -> Result<AdjointVerdict> {
    if phi.is_constant() {
        let unimodular = (phi.coeffs[0].norm() - 1.0).abs() <= CONSTANT_UNIMODULAR_TOL;
        return Ok(AdjointVerdict {
            class: if unimodular {
                AdjointClass::ConstantRecurrent
            } else {
                AdjointClass::ConstantNotRecurrent
            },
            certificate: None,
        });
    }
    let cert = range_circle_test(phi, DEFAULT_GRID, DEFAULT_WITNESS_TOL)?;
    let class = match cert {
        RangeCertificate::Intersects { .. } => AdjointClass::FrequentlyHypercyclicMultiplyRecurrent,
        RangeCertificate::DisjointInside { .. } | RangeCertificate::DisjointOutside { .. } => {
            AdjointClass::NotRecurrent
        }
        RangeCertificate::Uncertain { .. } => AdjointClass::Uncertain,
    };
    Ok(AdjointVerdict {
        class,
        certificate: Some(cert),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::{ShiftOp, WeightSeq};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn dense_adjoint(phi: &PolySymbol, x: &[Complex64]) -> Vec<Complex64> {
        // (M_phi)_{n,m} = c_{n-m}; the adjoint is its conjugate transpose.
        let size = x.len();
        let mut out = vec![c(0.0, 0.0); size];
        for (m, o) in out.iter_mut().enumerate() {
            for (n, xn) in x.iter().enumerate() {
                if n >= m && n - m <= phi.degree() {
                    *o += phi.coeffs()[n - m].conj() * xn;
                }
            }
        }
        out
    }

    #[test]
    fn adjoint_of_z_is_backward_shift() {
        let phi = PolySymbol::from_real(&[0.0, 1.0]).unwrap();
        let y = apply_adjoint(&phi, &CoefVec::basis(Side::HardyCoef, 5).unwrap(), 10).unwrap();
        assert_eq!(y, CoefVec::basis(Side::HardyCoef, 4).unwrap());
        assert!(apply_adjoint(&phi, &CoefVec::basis(Side::HardyCoef, 0).unwrap(), 10)
            .unwrap()
            .is_empty());

        // Hardy index n corresponds to unilateral index n + 1.
        let b = ShiftOp::new(Side::Unilateral, WeightSeq::ConstantW { c: 1.0 }).unwrap();
        let hardy = CoefVec::from_complex(Side::HardyCoef, (0..30).map(|n| (n, c(n as f64 - 3.5, 0.25 * n as f64)))).unwrap();
        let uni = CoefVec::from_complex(Side::Unilateral, hardy.iter().map(|(n, v)| (n + 1, v.to_complex()))).unwrap();
        let a = apply_adjoint(&phi, &hardy, 40).unwrap();
        let s = b.apply(&uni).unwrap();
        assert_eq!(a.len(), s.len());
        for (n, v) in a.iter() {
            let (p, q) = (v.to_complex(), s.get(n + 1).to_complex());
            assert!((p - q).norm() <= 1e-15 * p.norm(), "{p} vs {q}");
        }
    }

    #[test]
    fn constant_adjoint_conjugates() {
        let a = c(0.3, -1.2);
        let phi = PolySymbol::constant(a);
        let x = CoefVec::from_complex(Side::HardyCoef, vec![(0, c(1.0, 1.0)), (3, c(-2.0, 0.5))]).unwrap();
        let y = apply_adjoint(&phi, &x, 5).unwrap();
        for (n, v) in x.iter() {
            assert!((y.get(n).to_complex() - a.conj() * v.to_complex()).norm() < 1e-14);
        }
    }

    #[test]
    fn adjoint_matches_dense_matrix() {
        let phi = PolySymbol::new(vec![c(0.8, 0.0), c(1.0, 0.0)]).unwrap();
        let x = CoefVec::from_complex(Side::HardyCoef, vec![(0, c(1.0, 0.0)), (1, c(1.0, 0.0))]).unwrap();
        let y = apply_adjoint(&phi, &x, 50).unwrap();
        let mut dense = vec![c(0.0, 0.0); 51];
        dense[0] = c(1.0, 0.0);
        dense[1] = c(1.0, 0.0);
        let want = dense_adjoint(&phi, &dense);
        for (n, w) in want.iter().enumerate() {
            assert!((y.get(n as i64).to_complex() - w).norm() < 1e-14, "n = {n}");
        }

        let phi = PolySymbol::new(vec![c(0.1, 0.4), c(-0.7, 0.2), c(0.0, 0.0), c(0.5, -0.5)]).unwrap();
        let xs: Vec<Complex64> = (0..51).map(|n| c((n as f64 * 0.37).sin(), (n as f64 * 0.11).cos())).collect();
        let x = CoefVec::from_complex(Side::HardyCoef, xs.iter().enumerate().map(|(n, &v)| (n as i64, v))).unwrap();
        let y = apply_adjoint(&phi, &x, 50).unwrap();
        for (n, w) in dense_adjoint(&phi, &xs).iter().enumerate() {
            assert!((y.get(n as i64).to_complex() - w).norm() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn support_must_fit_truncation() {
        let phi = PolySymbol::from_real(&[0.0, 1.0]).unwrap();
        let x = CoefVec::basis(Side::HardyCoef, 12).unwrap();
        assert!(apply_adjoint(&phi, &x, 10).is_err());
        let u = CoefVec::basis(Side::Unilateral, 2).unwrap();
        assert!(apply_adjoint(&phi, &u, 10).is_err());
    }

    #[test]
    fn kernel_vectors() {
        let k = kernel_vector(c(0.0, 0.0), 30).unwrap();
        assert_eq!(k.vector, CoefVec::basis(Side::HardyCoef, 0).unwrap());
        assert_eq!(k.tail_norm_sq(), 0.0);

        let k = kernel_vector(c(0.5, 0.0), 200).unwrap();
        let want = 402.0 * 0.5f64.ln() - 0.75f64.ln();
        assert!((k.log_tail_norm_sq - want).abs() < 1e-12);
        assert!(k.tail_norm_sq() < 1e-120);
        let n2 = crate::vector::norm(&k.vector).unwrap().powi(2);
        assert!((n2 - 1.0 / 0.75).abs() <= k.tail_norm_sq() + 1e-15);

        assert!(matches!(kernel_vector(c(1.0, 0.0), 5), Err(LabError::InvalidArgument(_))));
        assert!(matches!(kernel_vector(c(0.0, 0.97), 5), Err(LabError::Precondition(_))));
    }

    #[test]
    fn eigen_identity_examples() {
        let z_sym = PolySymbol::from_real(&[0.0, 1.0]).unwrap();
        let e = eigen_check(&z_sym, c(0.5, 0.0), 200).unwrap();
        assert!(e.log_residual <= (1e-50f64).ln());
        assert!(e.within_bound);

        let e = eigen_check(&PolySymbol::constant(c(0.3, 0.4)), c(0.2, -0.6), 50).unwrap();
        assert_eq!(e.residual, 0.0);
        assert_eq!(e.log_residual, f64::NEG_INFINITY);

        let sq = PolySymbol::from_real(&[0.0, 0.0, 1.0]).unwrap();
        let e = eigen_check(&sq, c(0.9, 0.0), 500).unwrap();
        assert!(e.within_bound, "{e:?}");
        assert!(e.log_residual.is_finite());
    }

    #[test]
    fn eigen_residual_within_bound_on_grid() {
        let symbols = [
            vec![c(0.0, 1.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.8, 0.0), c(1.0, 0.0)],
            vec![c(2.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.5, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.1, 0.2), c(-0.3, 0.4), c(0.5, -0.6)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.5)],
            vec![c(-0.2, 0.0), c(0.3, 0.3), c(0.0, -0.7), c(0.25, 0.0)],
            vec![c(3.0, -1.0), c(0.0, 2.0)],
        ];
        for coeffs in symbols {
            let phi = PolySymbol::new(coeffs).unwrap();
            for k in 0..10 {
                let r = 0.09 * (k + 1) as f64;
                let z = Complex64::from_polar(r.min(0.9), 0.7 * k as f64);
                let e = eigen_check(&phi, z, 120).unwrap();
                assert!(e.within_bound, "{phi} at {z}: {e:?}");
            }
        }
    }

    #[test]
    fn exact_route_agrees_with_float_adjoint() {
        let phi = PolySymbol::new(vec![c(0.8, 0.0), c(1.0, 0.0)]).unwrap();
        let z = c(0.3, 0.2);
        let k = kernel_vector(z, 40).unwrap();
        let y = apply_adjoint(&phi, &k.vector, 40).unwrap();
        let eig = LogScalar::from_complex(phi.eval(z).conj());
        let r = crate::vector::axpy(-eig, &k.vector, &y).unwrap();
        let float_res = crate::vector::norm(&r).unwrap() / crate::vector::norm(&k.vector).unwrap();
        let exact = eigen_check(&phi, z, 40).unwrap();
        // both are ~|z|^41; the float route carries about 1e-16 noise
        assert!((float_res - exact.residual).abs() < 1e-15);
    }

    #[test]
    fn range_examples() {
        let half = PolySymbol::from_real(&[0.0, 0.5]).unwrap();
        match range_circle_test(&half, DEFAULT_GRID, DEFAULT_WITNESS_TOL).unwrap() {
            RangeCertificate::DisjointInside { boundary_max, .. } => {
                assert!((boundary_max - 0.5).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }

        let plus2 = PolySymbol::from_real(&[2.0, 1.0]).unwrap();
        let cert = range_circle_test(&plus2, DEFAULT_GRID, DEFAULT_WITNESS_TOL).unwrap();
        match cert {
            RangeCertificate::DisjointOutside { winding, boundary_min, .. } => {
                assert_eq!(winding, 0);
                assert!((boundary_min - 1.0).abs() < 1e-6);
            }
            ref other => panic!("{other:?}"),
        }
        assert!(cert.reverify(&plus2, DEFAULT_WITNESS_TOL));

        let p08 = PolySymbol::from_real(&[0.8, 1.0]).unwrap();
        let cert = range_circle_test(&p08, DEFAULT_GRID, DEFAULT_WITNESS_TOL).unwrap();
        match cert {
            RangeCertificate::Intersects { witness, value } => {
                assert!(witness.norm() < 1.0);
                assert!((value.norm() - 1.0).abs() <= DEFAULT_WITNESS_TOL);
                assert!((witness - c(0.2, 0.0)).norm() < 1e-12);
            }
            ref other => panic!("{other:?}"),
        }
        assert!(cert.reverify(&p08, DEFAULT_WITNESS_TOL));

        // |phi| = 1 on the whole circle but < 1 inside: the coefficient test decides.
        let z = PolySymbol::from_real(&[0.0, 1.0]).unwrap();
        assert!(matches!(
            range_circle_test(&z, DEFAULT_GRID, DEFAULT_WITNESS_TOL).unwrap(),
            RangeCertificate::DisjointInside { route: CertRoute::Coefficients, .. }
        ));
        assert!(range_circle_test(&z, 100, 1e-9).is_err());
    }

    #[test]
    fn winding_numbers() {
        for d in 1..=6usize {
            let mut zd = vec![0.0; d + 1];
            zd[d] = 1.0;
            let phi = PolySymbol::from_real(&zd).unwrap();
            assert_eq!(winding_number(&phi, 1 << 14), d as i64);
            zd[0] = 2.0;
            let phi = PolySymbol::from_real(&zd).unwrap();
            assert_eq!(winding_number(&phi, 1 << 14), 0);
        }
    }

    #[test]
    fn scaled_symbol_reaches_the_circle() {
        // psi = phi / conj(a) intersects T whenever 1 sits strictly between the
        // extreme moduli of psi over the disk.
        let phi = PolySymbol::new(vec![c(0.5, 0.5), c(2.0, 0.0), c(0.0, -0.5)]).unwrap();
        let a = c(1.5, 1.0);
        let psi = phi.scaled(a.conj()).unwrap();
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for i in 0..=50 {
            for k in 0..256 {
                let z = Complex64::from_polar(i as f64 / 50.0, TAU * k as f64 / 256.0);
                let m = psi.eval(z).norm();
                lo = lo.min(m);
                hi = hi.max(m);
            }
        }
        assert!(lo < 1.0 && 1.0 < hi);
        let cert = range_circle_test(&psi, DEFAULT_GRID, DEFAULT_WITNESS_TOL).unwrap();
        assert!(cert.is_intersects());
        assert!(cert.reverify(&psi, DEFAULT_WITNESS_TOL));
    }

    #[test]
    fn classification() {
        let v = classify_adjoint(&PolySymbol::from_real(&[0.8, 1.0]).unwrap()).unwrap();
        assert_eq!(v.class, AdjointClass::FrequentlyHypercyclicMultiplyRecurrent);
        let v = classify_adjoint(&PolySymbol::from_real(&[0.0, 0.5]).unwrap()).unwrap();
        assert_eq!(v.class, AdjointClass::NotRecurrent);
        let v = classify_adjoint(&PolySymbol::constant(c(0.0, 1.0))).unwrap();
        assert_eq!(v.class, AdjointClass::ConstantRecurrent);
        let v = classify_adjoint(&PolySymbol::constant(c(0.0, 1.1))).unwrap();
        assert_eq!(v.class, AdjointClass::ConstantNotRecurrent);
    }

    #[test]
    fn parse_and_display() {
        let phi: PolySymbol = "[[0.8,0],[1,0],[0,0]]".parse().unwrap();
        assert_eq!(phi.degree(), 1);
        let back: PolySymbol = phi.to_string().parse().unwrap();
        assert_eq!(back, phi);
        let json = serde_json::to_string(&phi).unwrap();
        assert_eq!(serde_json::from_str::<PolySymbol>(&json).unwrap(), phi);
    }
}
