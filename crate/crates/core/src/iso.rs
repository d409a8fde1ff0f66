//! Principal axes of a layout and the Isometric Viewpoint Deviation score.
//!
//! The score rewards views that foreshorten the principal axes evenly, and
//! only penalizes uneven views to the extent that the layout actually has
//! dominant axes:
//!
//! ```text
//! a      = |Eᵀ v|                       absolute projections on the axes
//! a_norm = a / Σ a
//! w      = λ / Σ λ                      eigenvalue weights
//! μ      = Σ w_i a_norm_i
//! σ_w    = sqrt(Σ w_i (a_norm_i - μ)²)
//! α      = std(w) / σ_max               std with n-1 denominator
//! ISO    = 1 - α σ_w / σ_max,           σ_max = 1/√3
//! ```

use nalgebra::{Matrix3, SymmetricEigen};

use crate::error::{Error, Result};
use crate::measures::{MeasureId, RawMeasure};
use crate::model::{Layout3D, Vec3};

/// Normalization constant of the anisotropy factor and of σ_w.
pub const SIGMA_MAX: f64 = 0.577_350_269_189_625_8; // 1/√3

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalAxes {
    /// Orthonormal eigenvectors, ordered by descending eigenvalue.
    pub vectors: [Vec3; 3],
    /// Eigenvalues of the population covariance, descending, nonnegative.
    pub values: [f64; 3],
}

/// Flips `v` so its largest-magnitude component (earliest on ties) is
/// nonnegative.
pub fn canonical_sign<const N: usize>(v: &mut [f64; N]) {
    let mut lead = 0;
    for i in 1..N {
        if v[i].abs() > v[lead].abs() {
            lead = i;
        }
    }
    if v[lead] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

pub fn pca_axes(layout: &Layout3D) -> PrincipalAxes {
    let positions = layout.positions();
    let n = positions.len() as f64;
    let mean = positions.iter().fold(Vec3::zeros(), |acc, p| acc + p) / n;
    let cov = positions.iter().fold(Matrix3::zeros(), |acc, p| {
        let d = p - mean;
        acc + d * d.transpose()
    }) / n;
    if cov.iter().all(|&c| c == 0.0) {
        return PrincipalAxes {
            vectors: [Vec3::x(), Vec3::y(), Vec3::z()],
            values: [0.0; 3],
        };
    }
    let eig = SymmetricEigen::new(cov);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]).then(i.cmp(&j)));
    let mut vectors = [Vec3::zeros(); 3];
    let mut values = [0.0; 3];
    for (slot, &k) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(k).normalize();
        let mut c = [col[0], col[1], col[2]];
        canonical_sign(&mut c);
        vectors[slot] = Vec3::from(c);
        values[slot] = eig.eigenvalues[k].max(0.0);
    }
    PrincipalAxes { vectors, values }
}

/// Intermediate quantities of the score, exposed for inspection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoInputs {
    pub a: [f64; 3],
    pub a_norm: [f64; 3],
    pub w: [f64; 3],
    pub mu: f64,
    pub sigma_w: f64,
    pub alpha: f64,
    pub sigma_max: f64,
}

/// Computes the score inputs; `None` when all eigenvalues vanish.
pub fn iso_inputs(view: &Vec3, axes: &PrincipalAxes) -> Result<Option<IsoInputs>> {
    if (view.norm() - 1.0).abs() > 1e-6 {
        return Err(Error::Domain(format!("view vector has norm {}, expected 1", view.norm())));
    }
    let total: f64 = axes.values.iter().sum();
    if !(total > 0.0) {
        return Ok(None);
    }
    let w = axes.values.map(|l| l / total);
    let a = axes.vectors.map(|e| e.dot(view).abs());
    let sum_a: f64 = a.iter().sum();
    let a_norm = a.map(|x| x / sum_a);
    let mu: f64 = (0..3).map(|i| w[i] * a_norm[i]).sum();
    let sigma_w = (0..3).map(|i| w[i] * (a_norm[i] - mu).powi(2)).sum::<f64>().sqrt();
    let w_mean = w.iter().sum::<f64>() / 3.0;
    let w_std = (w.iter().map(|x| (x - w_mean).powi(2)).sum::<f64>() / 2.0).sqrt();
    Ok(Some(IsoInputs {
        a,
        a_norm,
        w,
        mu,
        sigma_w,
        alpha: w_std / SIGMA_MAX,
        sigma_max: SIGMA_MAX,
    }))
}

pub fn iso_score(view: &Vec3, axes: &PrincipalAxes) -> Result<RawMeasure> {
    let value = match iso_inputs(view, axes)? {
        None => 1.0,
        Some(inp) => (1.0 - inp.alpha * inp.sigma_w / inp.sigma_max).clamp(0.0, 1.0),
    };
    Ok(RawMeasure::new(MeasureId::ISO, value))
}
