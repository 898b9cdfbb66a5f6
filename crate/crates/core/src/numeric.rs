//! Small dense linear-algebra and polynomial helpers used by the
//! fitting routines. Systems here are tiny (≤ 8 unknowns), so plain
//! Gaussian elimination with partial pivoting is adequate.

use crate::{Error, Result};

/// Solve `a x = b` in place for a small square system.
pub fn solve_linear(a: &mut [Vec<f64>], b: &mut [f64]) -> Result<Vec<f64>> {
    let n = b.len();
    assert!(a.len() == n && a.iter().all(|r| r.len() == n));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col].abs() < 1e-300 {
            return Err(Error::Conditioning("singular linear system".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in col + 1..n {
            s -= a[col][k] * x[k];
        }
        x[col] = s / a[col][col];
    }
    Ok(x)
}

/// Least-squares solve of an overdetermined system via normal equations.
///
/// `design[i]` is the row of basis-function values for sample `i`.
pub fn least_squares(design: &[Vec<f64>], rhs: &[f64]) -> Result<Vec<f64>> {
    let m = design.len();
    let n = design.first().map_or(0, |r| r.len());
    if m < n || n == 0 {
        return Err(Error::InsufficientData(format!(
            "{m} samples for {n} parameters"
        )));
    }
    let mut ata = vec![vec![0.0; n]; n];
    let mut atb = vec![0.0; n];
    for (row, &y) in design.iter().zip(rhs) {
        for i in 0..n {
            atb[i] += row[i] * y;
            for j in 0..n {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    solve_linear(&mut ata, &mut atb)
}

/// Fit `y = Σ c_k x^k` (degree `deg`) by least squares.
///
/// The abscissa should be pre-centered/scaled by the caller when the
/// raw values are large (e.g. optical frequencies).
pub fn polyfit(x: &[f64], y: &[f64], deg: usize) -> Result<Vec<f64>> {
    if x.len() != y.len() || x.len() < deg + 1 {
        return Err(Error::InsufficientData(format!(
            "{} samples for degree-{deg} polynomial",
            x.len()
        )));
    }
    let design: Vec<Vec<f64>> = x
        .iter()
        .map(|&xi| {
            let mut row = Vec::with_capacity(deg + 1);
            let mut p = 1.0;
            for _ in 0..=deg {
                row.push(p);
                p *= xi;
            }
            row
        })
        .collect();
    least_squares(&design, y)
}

/// Evaluate a polynomial given coefficients in ascending order.
pub fn polyval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Derivative of a polynomial, coefficients in ascending order.
pub fn polyder(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

/// Trapezoidal integration over uniformly spaced samples.
pub fn trapz(y: &[f64], dx: f64) -> f64 {
    if y.len() < 2 {
        return 0.0;
    }
    let interior: f64 = y[1..y.len() - 1].iter().sum();
    dx * (0.5 * (y[0] + y[y.len() - 1]) + interior)
}

/// FWHM of a sampled, single-peaked curve on a uniform grid, with
/// linear interpolation at the half-maximum crossings.
pub fn fwhm(x: &[f64], y: &[f64]) -> Option<f64> {
    let (imax, &ymax) = y
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))?;
    let half = ymax / 2.0;
    let mut left = None;
    for i in (1..=imax).rev() {
        if y[i - 1] <= half && y[i] > half {
            let t = (half - y[i - 1]) / (y[i] - y[i - 1]);
            left = Some(x[i - 1] + t * (x[i] - x[i - 1]));
            break;
        }
    }
    let mut right = None;
    for i in imax..y.len() - 1 {
        if y[i] > half && y[i + 1] <= half {
            let t = (y[i] - half) / (y[i] - y[i + 1]);
            right = Some(x[i] + t * (x[i + 1] - x[i]));
            break;
        }
    }
    Some(right? - left?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn solves_small_system() {
        let mut a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let mut b = vec![5.0, 10.0];
        let x = solve_linear(&mut a, &mut b).unwrap();
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(x[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn polyfit_roundtrip() {
        let x: Vec<f64> = (0..20).map(|i| i as f64 * 0.1 - 1.0).collect();
        let y: Vec<f64> = x.iter().map(|&v| 2.0 - v + 0.5 * v * v * v).collect();
        let c = polyfit(&x, &y, 3).unwrap();
        assert_relative_eq!(c[0], 2.0, epsilon = 1e-9);
        assert_relative_eq!(c[1], -1.0, epsilon = 1e-9);
        assert_relative_eq!(c[3], 0.5, epsilon = 1e-9);
        let d = polyder(&c);
        assert_relative_eq!(polyval(&d, 1.0), -1.0 + 1.5, epsilon = 1e-9);
    }

    #[test]
    fn fwhm_of_triangle() {
        let x: Vec<f64> = (0..101).map(|i| i as f64 * 0.01).collect();
        let y: Vec<f64> = x.iter().map(|&v| 1.0 - (v - 0.5).abs() * 2.0).collect();
        assert_relative_eq!(fwhm(&x, &y).unwrap(), 0.5, epsilon = 1e-6);
    }
}
