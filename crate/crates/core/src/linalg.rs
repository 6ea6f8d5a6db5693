//! Small dense helpers: a partial-pivot LU solve and a closed-form 4×4
//! determinant.

use nalgebra::{Matrix4, SMatrix, SVector};

use crate::error::{Error, Result};

/// Solves `a·x = b` by LU with partial pivoting.
pub fn lu_solve<const N: usize>(
    mut a: SMatrix<f64, N, N>,
    mut b: SVector<f64, N>,
) -> Result<SVector<f64, N>> {
    let scale = a.amax().max(f64::MIN_POSITIVE);
    for k in 0..N {
        let (offset, pivot) =
            a.view((k, k), (N - k, 1))
                .iter()
                .enumerate()
                .fold((0, 0.0_f64), |best, (i, v)| {
                    if v.abs() > best.1.abs() {
                        (i, *v)
                    } else {
                        best
                    }
                });
        if pivot.abs() <= scale * 1e-14 {
            return Err(Error::Singular { column: k, pivot });
        }
        let p = k + offset;
        if p != k {
            a.swap_rows(k, p);
            b.swap_rows(k, p);
        }
        for i in (k + 1)..N {
            let factor = a[(i, k)] / a[(k, k)];
            if factor == 0.0 {
                continue;
            }
            a[(i, k)] = 0.0;
            for j in (k + 1)..N {
                a[(i, j)] -= factor * a[(k, j)];
            }
            b[i] -= factor * b[k];
        }
    }
    // back substitution
    let mut x = SVector::<f64, N>::zeros();
    for i in (0..N).rev() {
        let mut acc = b[i];
        for j in (i + 1)..N {
            acc -= a[(i, j)] * x[j];
        }
        x[i] = acc / a[(i, i)];
    }
    Ok(x)
}

/// Determinant of a 4×4 matrix by Laplace expansion over complementary 2×2
/// minors of the first two rows. Exact on dyadic inputs, unlike LU.
pub fn det4(m: &Matrix4<f64>) -> f64 {
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
        m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)]
    };
    minor(0, 1, 0, 1) * minor(2, 3, 2, 3) - minor(0, 1, 0, 2) * minor(2, 3, 1, 3)
        + minor(0, 1, 0, 3) * minor(2, 3, 1, 2)
        + minor(0, 1, 1, 2) * minor(2, 3, 0, 3)
        - minor(0, 1, 1, 3) * minor(2, 3, 0, 2)
        + minor(0, 1, 2, 3) * minor(2, 3, 0, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Matrix3, Vector3};

    #[test]
    fn solves_permuted_system() {
        let a = Matrix3::new(0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0);
        let x = Vector3::new(1.0, -2.0, 0.5);
        let b = a * x;
        let got = lu_solve(a, b).unwrap();
        assert!((got - x).amax() < 1e-14);
    }

    #[test]
    fn singular_is_reported() {
        let a = Matrix3::new(1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 1.0);
        assert!(matches!(
            lu_solve(a, Vector3::new(1.0, 1.0, 1.0)),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn det4_matches_lu() {
        #[rustfmt::skip]
        let m = Matrix4::new(
            2.0, -1.0, 0.5, 3.0,
            0.3, 4.0, -2.0, 1.0,
            1.5, 0.0, 1.0, -1.0,
            -0.7, 2.2, 0.1, 0.9,
        );
        assert!((det4(&m) - m.determinant()).abs() < 1e-12);
        assert_eq!(det4(&Matrix4::identity()), 1.0);
    }
}
