//! Thomas algorithm for the constant-coefficient symmetric tridiagonal
//! systems produced by implicit heat steps.

/// Pre-factored `tridiag(off, diag, off)` of size `n`.
#[derive(Debug, Clone)]
pub(crate) struct SymmetricToeplitzTridiag {
    off: f64,
    /// Modified super-diagonal `c'_i` of the forward sweep.
    c_prime: Vec<f64>,
    /// Reciprocal pivots.
    inv_pivot: Vec<f64>,
}

impl SymmetricToeplitzTridiag {
    /// Requires diagonal dominance, `|diag| > 2 |off|`, so no pivoting is needed.
    pub(crate) fn new(n: usize, diag: f64, off: f64) -> Self {
        debug_assert!(diag.abs() > 2.0 * off.abs());
        let mut c_prime = vec![0.0; n];
        let mut inv_pivot = vec![0.0; n];
        let mut prev_c = 0.0;
        for i in 0..n {
            let pivot = diag - off * prev_c;
            inv_pivot[i] = 1.0 / pivot;
            c_prime[i] = off * inv_pivot[i];
            prev_c = c_prime[i];
        }
        Self {
            off,
            c_prime,
            inv_pivot,
        }
    }

    /// Overwrites `rhs` with the solution.
    pub(crate) fn solve_in_place(&self, rhs: &mut [f64]) {
        let n = rhs.len();
        debug_assert_eq!(n, self.c_prime.len());
        if n == 0 {
            return;
        }
        rhs[0] *= self.inv_pivot[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.off * rhs[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= self.c_prime[i] * rhs[i + 1];
        }
    }
}
