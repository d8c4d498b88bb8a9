//! Dense univariate polynomials over ℤ and ℚ.
//!
//! Coefficients are stored low degree first and kept trimmed (no trailing
//! zeros), so the zero polynomial is the empty vector.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntPoly = Vec<BigInt>;
pub type RatPoly = Vec<BigRational>;

pub fn trim<T: Zero>(p: &mut Vec<T>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub fn int_from(coeffs: &[i64]) -> IntPoly {
    let mut p: IntPoly = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    trim(&mut p);
    p
}

pub fn int_mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub fn int_add(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    trim(&mut out);
    out
}

pub fn int_sub(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let neg: IntPoly = b.iter().map(|c| -c).collect();
    int_add(a, &neg)
}

pub fn int_scale(a: &[BigInt], k: &BigInt) -> IntPoly {
    let mut out: IntPoly = a.iter().map(|c| c * k).collect();
    trim(&mut out);
    out
}

/// Exact division by a polynomial with leading coefficient ±1.
/// Returns `None` when the remainder is nonzero.
pub fn int_div_exact(a: &[BigInt], b: &[BigInt]) -> Option<IntPoly> {
    let lead = b.last()?;
    if !lead.abs().is_one() {
        return None;
    }
    let mut rem: IntPoly = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return if rem.is_empty() { Some(Vec::new()) } else { None };
    }
    let mut quot = vec![BigInt::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let q = rem.last().unwrap() * lead; // lead = ±1, so this is division
        for (i, c) in b.iter().enumerate() {
            rem[shift + i] -= &q * c;
        }
        quot[shift] = q;
        trim(&mut rem);
    }
    if rem.is_empty() {
        trim(&mut quot);
        Some(quot)
    } else {
        None
    }
}

/// `x^k` modulo a monic polynomial, for every `k` in `lo..=hi`, each as a
/// vector of exactly `deg(m)` coefficients.
pub fn power_residues(monic: &[BigInt], lo: usize, hi: usize) -> Vec<IntPoly> {
    let d = monic.len() - 1;
    let mut cur = vec![BigInt::zero(); d];
    // start at x^0 and walk up
    if d > 0 {
        cur[0] = BigInt::one();
    }
    let mut out = Vec::new();
    for k in 0..=hi {
        if k >= lo {
            out.push(cur.clone());
        }
        if d == 0 {
            continue;
        }
        // multiply by x
        let top = cur[d - 1].clone();
        for i in (1..d).rev() {
            cur[i] = cur[i - 1].clone();
        }
        cur[0] = BigInt::zero();
        if !top.is_zero() {
            for i in 0..d {
                cur[i] -= &top * &monic[i];
            }
        }
    }
    out
}

/// The Chebyshev-type polynomial with `P_k(2cos t) = 2cos(kt)`.
pub fn two_cos_multiple(k: u64) -> IntPoly {
    let x = int_from(&[0, 1]);
    let mut prev = int_from(&[2]);
    if k == 0 {
        return prev;
    }
    let mut cur = x.clone();
    for _ in 1..k {
        let next = int_sub(&int_mul(&x, &cur), &prev);
        prev = cur;
        cur = next;
    }
    cur
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn cyclotomic_memo(n: u64, memo: &mut BTreeMap<u64, IntPoly>) -> IntPoly {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d < n {
            let phi_d = cyclotomic_memo(d, memo);
            p = int_div_exact(&p, &phi_d).expect("cyclotomic factor divides z^n - 1");
        }
    }
    memo.insert(n, p.clone());
    p
}

/// The `n`-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> IntPoly {
    cyclotomic_memo(n, &mut BTreeMap::new())
}

/// Minimal polynomial of `2cos(2π/d)` over ℚ, obtained from the palindromic
/// cyclotomic polynomial by the substitution `x = z + 1/z`.
pub fn real_cyclotomic(d: u64) -> IntPoly {
    match d {
        1 => return int_from(&[-2, 1]),
        2 => return int_from(&[2, 1]),
        _ => {}
    }
    let phi = cyclotomic(d);
    let k = (phi.len() - 1) / 2;
    let mut out = int_from(&[0]);
    out = int_add(&out, &[phi[k].clone()]);
    for j in 1..=k {
        let term = int_scale(&two_cos_multiple(j as u64), &phi[k + j]);
        out = int_add(&out, &term);
    }
    out
}

pub fn to_rat(p: &[BigInt]) -> RatPoly {
    p.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

pub fn rat_eval(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn sign_of<T: Signed>(v: &T) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

pub fn rat_derivative(p: &[BigRational]) -> RatPoly {
    let mut out: RatPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut out);
    out
}

/// Division with remainder over ℚ; `b` must be nonzero.
pub fn rat_divrem(a: &[BigRational], b: &[BigRational]) -> (RatPoly, RatPoly) {
    let mut rem: RatPoly = a.to_vec();
    trim(&mut rem);
    let lead = b.last().expect("division by the zero polynomial");
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    while !rem.is_empty() && rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let q = rem.last().unwrap() / lead;
        for (i, c) in b.iter().enumerate() {
            rem[shift + i] -= &q * c;
        }
        // the leading term cancels exactly; drop it even if trim misses it
        rem.pop();
        quot[shift] = q;
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

/// Solves `A x = b` over ℚ for a square integer matrix given by rows,
/// using Bareiss elimination and rational back substitution. `None` if `A`
/// is singular.
pub fn int_solve(mut a: Vec<Vec<BigInt>>, b: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = a.len();
    for (row, v) in a.iter_mut().zip(b) {
        row.push(v.clone());
    }
    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero())?;
        a.swap(k, p);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let mut x = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        let mut acc = BigRational::from_integer(a[k][n].clone());
        for j in k + 1..n {
            acc -= BigRational::from_integer(a[k][j].clone()) * &x[j];
        }
        x[k] = acc / BigRational::from_integer(a[k][k].clone());
    }
    Some(x)
}

/// Sturm chain of a square-free polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<RatPoly>,
}

impl SturmChain {
    pub fn new(p: &[BigRational]) -> Self {
        let mut chain = vec![p.to_vec(), rat_derivative(p)];
        loop {
            let n = chain.len();
            if chain[n - 1].is_empty() {
                chain.pop();
                break;
            }
            let (_, r) = rat_divrem(&chain[n - 2], &chain[n - 1]);
            if r.is_empty() {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        SturmChain { chain }
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let s = sign_of(&rat_eval(p, x));
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count_roots(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    /// Shrinks `(lo, hi]`, assumed to contain the largest real root and no
    /// root above `hi`, until `hi - lo <= width`.
    pub fn refine_largest(
        &self,
        mut lo: BigRational,
        mut hi: BigRational,
        width: &BigRational,
    ) -> (BigRational, BigRational) {
        let two = BigRational::from_integer(BigInt::from(2));
        while &(&hi - &lo) > width {
            let mid = (&lo + &hi) / &two;
            if self.count_roots(&mid, &hi) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }
}

/// A power of two bounding every root's absolute value (Cauchy bound).
pub fn root_bound(p: &[BigRational]) -> BigRational {
    let lead = p.last().expect("nonzero polynomial").abs();
    let mut max = BigRational::zero();
    for c in &p[..p.len() - 1] {
        let r = c.abs() / &lead;
        if r > max {
            max = r;
        }
    }
    let bound = max + BigRational::one();
    let mut b = BigRational::one();
    while b < bound {
        b *= BigRational::from_integer(BigInt::from(2));
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), int_from(&[-1, 1]));
        assert_eq!(cyclotomic(6), int_from(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), int_from(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn real_cyclotomic_of_ten_is_golden() {
        // 2cos(π/5) is the golden ratio
        assert_eq!(real_cyclotomic(10), int_from(&[-1, -1, 1]));
        assert_eq!(real_cyclotomic(8), int_from(&[-2, 0, 1]));
    }

    #[test]
    fn chebyshev_recurrence() {
        // P_3 = x^3 - 3x
        assert_eq!(two_cos_multiple(3), int_from(&[0, -3, 0, 1]));
    }

    #[test]
    fn sturm_counts_roots() {
        // (x - 1)(x - 2)(x + 3)
        let p = to_rat(&int_mul(&int_mul(&int_from(&[-1, 1]), &int_from(&[-2, 1])), &int_from(&[3, 1])));
        let s = SturmChain::new(&p);
        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        assert_eq!(s.count_roots(&q(-10), &q(10)), 3);
        assert_eq!(s.count_roots(&q(0), &q(10)), 2);
        assert_eq!(s.count_roots(&q(-10), &q(0)), 1);
    }

    #[test]
    fn solves_integer_systems() {
        let z = |v: &[i64]| v.iter().map(|&k| BigInt::from(k)).collect::<Vec<_>>();
        let x = int_solve(vec![z(&[2, 1]), z(&[1, 3])], &z(&[1, 0])).unwrap();
        let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(x, vec![q(3, 5), q(-1, 5)]);
        assert!(int_solve(vec![z(&[1, 2]), z(&[2, 4])], &z(&[1, 0])).is_none());
    }
}
