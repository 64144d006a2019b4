//! Probabilists' Hermite polynomials `He_n`.

use nalgebra::DMatrix;

/// `He_n(x)` by the three-term recurrence `He_{n+1} = x He_n − n He_{n−1}`.
pub fn hermite_value(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = x;
    for k in 1..n {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Monomial coefficients `h_j` with `He_n(x) = Σ_j h_j x^j`.
pub fn hermite_coefficients(n: usize) -> Vec<f64> {
    let mut prev = vec![0.0; n + 1];
    prev[0] = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0.0; n + 1];
    cur[1] = 1.0;
    for k in 1..n {
        let mut next = vec![0.0; n + 1];
        for j in 0..n {
            next[j + 1] += cur[j];
        }
        for j in 0..=n {
            next[j] -= k as f64 * prev[j];
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Roots of `He_n`, ascending, as eigenvalues of the Jacobi matrix with
/// off-diagonal entries `√k`, polished by a few Newton steps.
pub fn roots(n: usize) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            ((i.max(j)) as f64).sqrt()
        } else {
            0.0
        }
    });
    let mut roots: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    for r in roots.iter_mut() {
        for _ in 0..3 {
            // He_n' = n He_{n-1}
            let d = n as f64 * hermite_value(n - 1, *r);
            if d != 0.0 {
                *r -= hermite_value(n, *r) / d;
            }
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

/// Largest root of `He_n` (zero for `n ≤ 1`).
pub fn largest_root(n: usize) -> f64 {
    roots(n).last().copied().unwrap_or(0.0).max(0.0)
}
