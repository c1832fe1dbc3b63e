//! Small dense linear algebra used by the kernels and solvers.
//!
//! Everything here is sized for the problems at hand (3x3 saddle systems,
//! shooting Jacobians of a few dozen columns, collocation systems up to a few
//! thousand), so plain dense routines with partial pivoting / Cholesky are
//! the right tool.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

pub fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Solve `a * x = b` in place by Gaussian elimination with partial pivoting.
/// `a` is row-major `n x n`; on success `b` holds the solution.
pub fn solve_gauss(a: &mut [f64], b: &mut [f64], n: usize) -> bool {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    for col in 0..n {
        let mut piv = col;
        let mut best = math::abs(a[col * n + col]);
        for row in col + 1..n {
            let v = math::abs(a[row * n + col]);
            if v > best {
                best = v;
                piv = row;
            }
        }
        if best == 0.0 || !best.is_finite() {
            return false;
        }
        if piv != col {
            for k in col..n {
                a.swap(col * n + k, piv * n + k);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for row in col + 1..n {
            let f = a[row * n + col] / d;
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= f * a[col * n + k];
            }
            b[row] -= f * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in col + 1..n {
            s -= a[col * n + k] * b[k];
        }
        b[col] = s / a[col * n + col];
    }
    true
}

/// Cholesky solve for a symmetric positive-definite `a` (row-major, modified
/// in place). Returns false when a pivot degenerates.
pub fn cholesky_solve(a: &mut [f64], b: &mut [f64], n: usize) -> bool {
    debug_assert_eq!(a.len(), n * n);
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if !(d > 0.0) || !d.is_finite() {
            return false;
        }
        let d = math::sqrt(d);
        a[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
    }
    // Forward substitution L y = b.
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= a[i * n + k] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    // Back substitution L^T x = y.
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= a[k * n + i] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    true
}

/// Ridge-regularized least-squares solve of `a * x ~ b` (row-major `n x n`):
/// `(a^T a + mu I) x = a^T b` with `mu` scaled to the matrix. Near-singular
/// systems get the minimum-norm solution restricted to the well-posed part,
/// which is exactly the behaviour the degenerate dynamics rely on.
pub fn solve_tikhonov(a: &[f64], b: &[f64], n: usize, eps: f64) -> Vec<f64> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let mut ata = vec![0.0; n * n];
    let mut atb = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for k in 0..n {
                s += a[k * n + i] * a[k * n + j];
            }
            ata[i * n + j] = s;
        }
        let mut s = 0.0;
        for k in 0..n {
            s += a[k * n + i] * b[k];
        }
        atb[i] = s;
    }
    let mut trace = 0.0;
    for i in 0..n {
        trace += ata[i * n + i];
    }
    let mu = eps * if trace > f64::from(n as u32) { trace / n as f64 } else { 1.0 };
    for i in 0..n {
        ata[i * n + i] += mu;
    }
    solve_normal_equations(ata, atb, n)
}

/// Solve ridged normal equations, preferring Cholesky and falling back to
/// pivoted elimination when a pivot degenerates despite the ridge.
fn solve_normal_equations(ata: Vec<f64>, atb: Vec<f64>, n: usize) -> Vec<f64> {
    let mut a = ata.clone();
    let mut b = atb.clone();
    if cholesky_solve(&mut a, &mut b, n) {
        return b;
    }
    let mut a = ata;
    let mut b = atb;
    if solve_gauss(&mut a, &mut b, n) {
        b
    } else {
        vec![0.0; n]
    }
}

/// Ridge-regularized least squares for a rectangular system `a * x ~ b`
/// (row-major `rows x cols`): normal equations with a trace-scaled ridge,
/// so rank-deficient problems return the minimum-norm fit.
pub fn solve_least_squares(a: &[f64], b: &[f64], rows: usize, cols: usize, eps: f64) -> Vec<f64> {
    debug_assert_eq!(a.len(), rows * cols);
    debug_assert_eq!(b.len(), rows);
    let mut ata = vec![0.0; cols * cols];
    let mut atb = vec![0.0; cols];
    for k in 0..rows {
        let row = &a[k * cols..(k + 1) * cols];
        for i in 0..cols {
            if row[i] == 0.0 {
                continue;
            }
            for j in i..cols {
                ata[i * cols + j] += row[i] * row[j];
            }
            atb[i] += row[i] * b[k];
        }
    }
    for i in 0..cols {
        for j in 0..i {
            ata[i * cols + j] = ata[j * cols + i];
        }
    }
    let mut trace = 0.0;
    for i in 0..cols {
        trace += ata[i * cols + i];
    }
    let mu = eps * if trace > cols as f64 { trace / cols as f64 } else { 1.0 };
    for i in 0..cols {
        ata[i * cols + i] += mu;
    }
    solve_normal_equations(ata, atb, cols)
}

/// Finite-difference weights on arbitrary nodes (Fornberg's recursion).
///
/// Returns `w[node][order]` such that the `m`-th derivative at `z` is
/// approximated by `sum_i w[i][m] f(x[i])` for every order `0..=m_max`.
pub fn fd_weights(z: f64, x: &[f64], m_max: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    debug_assert!(n > m_max);
    let mut c = vec![vec![0.0; m_max + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m_max);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn det3_known_values() {
        let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert_eq!(det3(&id), 1.0);
        let m = [[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]];
        assert_relative_eq!(det3(&m), 2.0 * (12.0 - 1.0) - 1.0 * 4.0, epsilon = 1e-14);
    }

    #[test]
    fn gauss_solves_a_pivoting_case() {
        // First pivot is zero, forcing a row swap.
        let mut a = [0.0, 2.0, 1.0, 1.0, 1.0, 1.0, 2.0, 1.0, 3.0];
        let x_true = [1.0, -2.0, 3.0];
        let mut b = [0.0; 3];
        for i in 0..3 {
            for j in 0..3 {
                b[i] += a[i * 3 + j] * x_true[j];
            }
        }
        assert!(solve_gauss(&mut a, &mut b, 3));
        for i in 0..3 {
            assert_relative_eq!(b[i], x_true[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn gauss_reports_singular() {
        let mut a = [1.0, 2.0, 2.0, 4.0];
        let mut b = [1.0, 2.0];
        assert!(!solve_gauss(&mut a, &mut b, 2));
    }

    #[test]
    fn cholesky_solves_spd() {
        // a = l l^T with l = [[2,0],[1,3]]; rhs chosen so x = (1, 2).
        let mut a = [4.0, 2.0, 2.0, 10.0];
        let mut b = [4.0 + 2.0 * 2.0, 2.0 + 10.0 * 2.0];
        assert!(cholesky_solve(&mut a, &mut b, 2));
        assert_relative_eq!(b[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(b[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn tikhonov_matches_exact_solve_when_regular() {
        let a = [3.0, 1.0, 0.5, 1.0, 4.0, 1.0, 0.5, 1.0, 5.0];
        let b = [1.0, 2.0, 3.0];
        let z = solve_tikhonov(&a, &b, 3, 1e-14);
        let mut a2 = a;
        let mut b2 = b;
        assert!(solve_gauss(&mut a2, &mut b2, 3));
        for i in 0..3 {
            assert_relative_eq!(z[i], b2[i], epsilon = 1e-9);
        }
    }

    #[test]
    fn tikhonov_picks_minimum_norm_on_singular_consistent_system() {
        // Rank-1 system: x + y = 2 (twice). Minimum-norm solution is (1, 1, 0).
        let a = [1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        let b = [2.0, 2.0, 0.0];
        let z = solve_tikhonov(&a, &b, 3, 1e-12);
        assert_relative_eq!(z[0], 1.0, epsilon = 1e-6);
        assert_relative_eq!(z[1], 1.0, epsilon = 1e-6);
        assert_relative_eq!(z[2], 0.0, epsilon = 1e-9);
    }

    #[test]
    fn fornberg_reproduces_central_stencils() {
        let h = 0.5;
        let nodes = [-2.0 * h, -h, 0.0, h, 2.0 * h];
        let w = fd_weights(0.0, &nodes, 2);
        let d1 = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
        let d2 = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
        for i in 0..5 {
            assert_relative_eq!(w[i][1], d1[i] / h, epsilon = 1e-12);
            assert_relative_eq!(w[i][2], d2[i] / (h * h), epsilon = 1e-12);
        }
        // Order-0 weights interpolate: they must sum to 1 and reproduce x^3.
        let mut s0 = 0.0;
        let mut s3 = 0.0;
        for i in 0..5 {
            s0 += w[i][0];
            s3 += w[i][0] * nodes[i] * nodes[i] * nodes[i];
        }
        assert_relative_eq!(s0, 1.0, epsilon = 1e-12);
        assert_relative_eq!(s3, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn fornberg_one_sided_first_derivative() {
        // Nodes 0..4h, derivative at 0: weights (-25, 48, -36, 16, -3)/(12h).
        let h = 0.1;
        let nodes = [0.0, h, 2.0 * h, 3.0 * h, 4.0 * h];
        let w = fd_weights(0.0, &nodes, 1);
        let expect = [-25.0, 48.0, -36.0, 16.0, -3.0];
        for i in 0..5 {
            assert_relative_eq!(w[i][1], expect[i] / (12.0 * h), epsilon = 1e-10);
        }
    }
}
