//! Fair random walks on the tape, absorbed at the end-markers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::real::Real;
use crate::{Error, Result};

/// Walk from square 1 between absorbing squares 0 and `n + 1`: probability of
/// ending on the right and expected number of moves, in closed form.
pub fn walk_absorption(n: usize) -> Result<(Real, Real)> {
    if n == 0 {
        return Err(Error::contract("walk_absorption needs a nonempty tape"));
    }
    Ok((Real::ratio(1, n as i64 + 1), Real::int(n as i64)))
}

/// The same quantities from the absorbing chain's linear equations,
/// `h_i = (h_{i-1} + h_{i+1})/2` and `T_i = 1 + (T_{i-1} + T_{i+1})/2`.
pub fn walk_absorption_linear(n: usize) -> Result<(Real, Real)> {
    if n == 0 {
        return Err(Error::contract("walk_absorption needs a nonempty tape"));
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    // row i: x_i - x_{i-1}/2 - x_{i+1}/2 = d_i
    let mut h_rhs = vec![BigRational::zero(); n];
    h_rhs[n - 1] = half.clone();
    let t_rhs = vec![BigRational::one(); n];
    let h = tridiagonal(n, &half, h_rhs);
    let t = tridiagonal(n, &half, t_rhs);
    Ok((Real::Exact(h[0].clone()), Real::Exact(t[0].clone())))
}

/// Thomas algorithm for the symmetric system with unit diagonal and `-off`
/// beside it.
fn tridiagonal(n: usize, off: &BigRational, mut d: Vec<BigRational>) -> Vec<BigRational> {
    let mut c = vec![BigRational::zero(); n];
    let mut diag = BigRational::one();
    c[0] = -off / &diag;
    d[0] = &d[0] / &diag;
    for i in 1..n {
        diag = BigRational::one() + off * &c[i - 1];
        if i + 1 < n {
            c[i] = -off / &diag;
        }
        d[i] = (&d[i] + off * &d[i - 1]) / &diag;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        let next = x[i + 1].clone();
        x[i] = &x[i] - &c[i] * next;
    }
    x
}

/// Probability that two walks on a tape of `len` symbols both end on the right
/// and two fair coins then both show heads.
pub fn two_walk_gate_probability(len: usize) -> Result<Real> {
    let (p, _) = walk_absorption(len)?;
    Ok(&p * &p * Real::ratio(1, 4))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tapes() {
        assert_eq!(walk_absorption(1).unwrap().0, Real::ratio(1, 2));
        assert_eq!(walk_absorption_linear(3).unwrap().0, Real::ratio(1, 4));
        assert_eq!(walk_absorption_linear(1).unwrap().1, Real::int(1));
    }

    #[test]
    fn closed_form_matches_linear_solve() {
        for n in [1, 2, 5, 17, 64] {
            let a = walk_absorption(n).unwrap();
            let b = walk_absorption_linear(n).unwrap();
            assert_eq!(a.0, b.0, "n = {n}");
            assert_eq!(a.1, b.1, "n = {n}");
        }
    }

    #[test]
    fn gate() {
        assert_eq!(two_walk_gate_probability(3).unwrap(), Real::ratio(1, 64));
    }
}
