use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Smallest eigenvalue accepted as positive definite.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// Symmetric positive definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdMatrix(DMatrix<f64>);

fn check_symmetric(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !m.is_square() {
        return Err(Error::arg(format!("{}x{} matrix is not square", m.nrows(), m.ncols())));
    }
    let scale = m.amax().max(1.0);
    let asym = (m - m.transpose()).amax();
    if !(asym <= 1e-12 * scale) {
        return Err(Error::NotSymmetric(asym));
    }
    Ok((m + m.transpose()) * 0.5)
}

/// `V f(Λ) Vᵀ` from an eigendecomposition.
fn map_eigen(e: &SymmetricEigen<f64, nalgebra::Dyn>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let v = &e.eigenvectors;
    let mut scaled = v.clone();
    for (j, &l) in e.eigenvalues.iter().enumerate() {
        let fl = f(l);
        scaled.column_mut(j).scale_mut(fl);
    }
    let out = scaled * v.transpose();
    (&out + out.transpose()) * 0.5
}

impl SpdMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<SpdMatrix> {
        let m = check_symmetric(&m)?;
        let min = SymmetricEigen::new(m.clone()).eigenvalues.min();
        if !(min > EIGEN_FLOOR) {
            return Err(Error::NotPositiveDefinite(min));
        }
        Ok(SpdMatrix(m))
    }

    pub fn identity(n: usize) -> SpdMatrix {
        SpdMatrix(DMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    fn eigen(&self) -> SymmetricEigen<f64, nalgebra::Dyn> {
        SymmetricEigen::new(self.0.clone())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigen().eigenvalues.min()
    }

    pub fn sqrt(&self) -> DMatrix<f64> {
        map_eigen(&self.eigen(), f64::sqrt)
    }

    pub fn inv_sqrt(&self) -> DMatrix<f64> {
        map_eigen(&self.eigen(), |l| 1.0 / l.sqrt())
    }

    /// `S^{1/2}` and `S^{-1/2}` from one factorization.
    pub fn sqrt_pair(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let e = self.eigen();
        (map_eigen(&e, f64::sqrt), map_eigen(&e, |l| 1.0 / l.sqrt()))
    }

    pub fn inverse(&self) -> DMatrix<f64> {
        map_eigen(&self.eigen(), |l| 1.0 / l)
    }

    pub fn log(&self) -> DMatrix<f64> {
        map_eigen(&self.eigen(), f64::ln)
    }

    /// `A S Aᵀ`.
    pub fn congruence(&self, a: &DMatrix<f64>) -> Result<SpdMatrix> {
        SpdMatrix::new(a * &self.0 * a.transpose())
    }
}

pub fn spd_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    Ok(SpdMatrix::new(m.clone())?.sqrt())
}

pub fn spd_log(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    Ok(SpdMatrix::new(m.clone())?.log())
}

/// Exponential of a symmetric matrix.
pub fn spd_exp(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let m = check_symmetric(m)?;
    Ok(map_eigen(&SymmetricEigen::new(m), f64::exp))
}

/// Eigenvalues of `S1^{-1/2} S2 S1^{-1/2}`.
fn relative_eigenvalues(s1: &SpdMatrix, s2: &SpdMatrix) -> nalgebra::DVector<f64> {
    let r = s1.inv_sqrt();
    let x = &r * s2.matrix() * &r;
    SymmetricEigen::new((&x + x.transpose()) * 0.5).eigenvalues
}

/// `sqrt(½ tr log²(S1^{-1/2} S2 S1^{-1/2}))`.
pub fn spd_distance(s1: &SpdMatrix, s2: &SpdMatrix) -> f64 {
    spd_sq_distance(s1, s2).sqrt()
}

pub fn spd_sq_distance(s1: &SpdMatrix, s2: &SpdMatrix) -> f64 {
    0.5 * relative_eigenvalues(s1, s2).iter().map(|l| l.ln().powi(2)).sum::<f64>()
}

/// Point at proportion `t` along the geodesic: `S1^{1/2} exp(t U) S1^{1/2}`
/// with `U = log(S1^{-1/2} S2 S1^{-1/2})`.
pub fn spd_geodesic(s1: &SpdMatrix, s2: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
    let (h, r) = s1.sqrt_pair();
    let x = &r * s2.matrix() * &r;
    let x = (&x + x.transpose()) * 0.5;
    let e = SymmetricEigen::new(x);
    let m = map_eigen(&e, |l| (t * l.ln()).exp());
    SpdMatrix::new(&h * m * &h)
}

/// Point at proportion `num / den` along the geodesic, always computed from the
/// lexicographically smaller endpoint. Swapping the endpoints and replacing
/// `num` by `den - num` gives a bit-identical result.
pub fn spd_geodesic_symmetric(s1: &SpdMatrix, s2: &SpdMatrix, num: u64, den: u64) -> Result<SpdMatrix> {
    if den == 0 || num > den {
        return Err(Error::arg(format!("{num}/{den} is not a proportion")));
    }
    let order = s1
        .matrix()
        .iter()
        .zip(s2.matrix().iter())
        .map(|(a, b)| a.total_cmp(b))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal);
    if order.is_gt() {
        spd_geodesic(s2, s1, (den - num) as f64 / den as f64)
    } else {
        spd_geodesic(s1, s2, num as f64 / den as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitives() {
        let i = DMatrix::<f64>::identity(3, 3);
        assert!(spd_log(&i).unwrap().amax() < 1e-15);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![4.0, 9.0]));
        let r = spd_sqrt(&d).unwrap();
        assert!((r[(0, 0)] - 2.0).abs() < 1e-14 && (r[(1, 1)] - 3.0).abs() < 1e-14);
        assert!(SpdMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0])).is_err());
        assert!(SpdMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0])).is_err());
    }

    #[test]
    fn scaled_identity_distance() {
        let c = 2f64.exp();
        let d = spd_distance(
            &SpdMatrix::identity(2),
            &SpdMatrix::new(DMatrix::identity(2, 2) * c).unwrap(),
        );
        assert!((d - 2.0).abs() < 1e-12);
    }
}
