//! Exact arithmetic in the real cyclotomic field ℚ(θ), θ = 2cos(π/N).
//!
//! An element is stored as `(a_0 + a_1 θ + … + a_{d-1} θ^{d-1}) / q` with
//! integer `a_i`, a positive integer `q`, and `gcd(a_0, …, a_{d-1}, q) = 1`.
//! That normal form is unique, so structural equality is field equality.
//!
//! Signs are decided by evaluating the integer numerator on a dyadic
//! enclosure of θ. The enclosure is isolated with a Sturm chain of the
//! minimal polynomial and refined on demand; refinement never changes a
//! result, only how many bits are spent getting it.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::{self, IntPoly, SturmChain};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("field parameter must be positive, got {0}")]
    InvalidParameter(u32),
    #[error("operands belong to different fields (N={left} and N={right})")]
    MixedFields { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("2cos(pi/{m}) does not lie in the field with N={n}")]
    NotInField { m: u32, n: u32 },
    #[error("expected {expected} coefficients, got {got}")]
    WrongLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    fn from_i8(s: i8) -> Sign {
        match s.signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }
}

impl core::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_i8(self.as_i8() * rhs.as_i8())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

/// An element of some [`Field`]. The derived ordering is structural (useful
/// as a map key); it is not the numerical order of real numbers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    field: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl FieldElement {
    pub fn field_parameter(&self) -> u32 {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// Whether the element lies in ℚ.
    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        (self.den.is_one() && self.is_rational()).then(|| &self.num[0])
    }

    /// Coefficients in the power basis `1, θ, …, θ^{d-1}`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|a| BigRational::new(a.clone(), self.den.clone()))
            .collect()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Negation needs no field context.
    pub fn neg(&self) -> FieldElement {
        FieldElement {
            field: self.field,
            num: self.num.iter().map(|a| -a).collect(),
            den: self.den.clone(),
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        write!(f, "[")?;
        for (i, c) in self.coeffs().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Dyadic bounds `lo[i] / 2^bits <= θ^i <= hi[i] / 2^bits`.
#[derive(Clone, Debug)]
struct PowerBounds {
    bits: u32,
    lo: Vec<BigInt>,
    hi: Vec<BigInt>,
}

impl PowerBounds {
    fn new(lo: &BigRational, hi: &BigRational, bits: u32, degree: usize) -> PowerBounds {
        let scale = BigInt::one() << bits;
        let l = (lo * BigRational::from_integer(scale.clone())).floor().to_integer();
        let h = (hi * BigRational::from_integer(scale.clone())).ceil().to_integer();
        debug_assert!(!l.is_negative());
        let mut plo = vec![scale.clone()];
        let mut phi = vec![scale];
        let (mut lp, mut hp) = (BigInt::one(), BigInt::one());
        for i in 1..degree {
            lp *= &l;
            hp *= &h;
            let shift = bits as usize * (i - 1);
            plo.push(&lp >> shift);
            let round = (BigInt::one() << shift) - BigInt::one();
            phi.push((&hp + round) >> shift);
        }
        PowerBounds { bits, lo: plo, hi: phi }
    }

    fn sign(&self, num: &[BigInt]) -> Option<Sign> {
        let mut lower = BigInt::zero();
        let mut upper = BigInt::zero();
        for ((a, l), h) in num.iter().zip(&self.lo).zip(&self.hi) {
            if a.is_zero() {
                continue;
            }
            if a.is_positive() {
                lower += a * l;
                upper += a * h;
            } else {
                lower += a * h;
                upper += a * l;
            }
        }
        if lower.is_positive() {
            Some(Sign::Positive)
        } else if upper.is_negative() {
            Some(Sign::Negative)
        } else {
            None
        }
    }
}

const INITIAL_BITS: u32 = 128;

/// The field ℚ(2cos(π/N)).
#[derive(Clone, Debug)]
pub struct Field {
    n: u32,
    minpoly: IntPoly,
    /// `x^(d + k) mod minpoly` for `k = 0..d-1`.
    reduction: Vec<IntPoly>,
    /// Closed interval containing θ.
    enclosure: (BigRational, BigRational),
    sturm: Option<SturmChain>,
    bounds: Option<PowerBounds>,
}

impl Field {
    pub fn new(n: u32) -> Result<Field, FieldError> {
        if n == 0 {
            return Err(FieldError::InvalidParameter(n));
        }
        let (minpoly, enclosure, sturm) = match n {
            1 | 2 => {
                let r = BigRational::from_integer(BigInt::from(if n == 1 { -2 } else { 0 }));
                let p = poly::int_from(if n == 1 { &[2, 1] } else { &[0, 1] });
                (p, (r.clone(), r), None)
            }
            _ => {
                let (p, lo, hi) = select_minpoly(n as u64);
                let chain = SturmChain::new(&poly::to_rat(&p));
                (p, (lo, hi), Some(chain))
            }
        };
        let d = minpoly.len() - 1;
        let reduction = if d >= 2 {
            poly::power_residues(&minpoly, d, 2 * d - 2)
        } else {
            Vec::new()
        };
        let mut field = Field {
            n,
            minpoly,
            reduction,
            enclosure,
            sturm,
            bounds: None,
        };
        if field.degree() >= 2 {
            field.enclosure = field.refined(INITIAL_BITS);
            field.bounds = Some(PowerBounds::new(
                &field.enclosure.0,
                &field.enclosure.1,
                INITIAL_BITS,
                field.degree(),
            ));
        }
        Ok(field)
    }

    pub fn parameter(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    /// Monic minimal polynomial of θ, low degree first.
    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    /// A closed rational interval containing θ.
    pub fn enclosure(&self) -> (BigRational, BigRational) {
        self.enclosure.clone()
    }

    /// An enclosure of θ of width at most `2^-bits`.
    pub fn refined(&self, bits: u32) -> (BigRational, BigRational) {
        match &self.sturm {
            None => self.enclosure.clone(),
            Some(chain) => {
                let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
                chain.refine_largest(self.enclosure.0.clone(), self.enclosure.1.clone(), &width)
            }
        }
    }

    fn make(&self, mut num: Vec<BigInt>, mut den: BigInt) -> FieldElement {
        debug_assert_eq!(num.len(), self.degree());
        if den.is_negative() {
            den = -den;
            for a in &mut num {
                *a = -&*a;
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for a in &num {
                if g.is_one() {
                    break;
                }
                g = g.gcd(a);
            }
            if num.iter().all(Zero::is_zero) {
                g = den.clone();
            }
            if !g.is_one() {
                for a in &mut num {
                    *a = &*a / &g;
                }
                den /= g;
            }
        }
        FieldElement { field: self.n, num, den }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.n,
            num: vec![BigInt::zero(); self.degree()],
            den: BigInt::one(),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_integer(BigInt::one())
    }

    pub fn from_integer(&self, k: BigInt) -> FieldElement {
        let mut num = vec![BigInt::zero(); self.degree()];
        num[0] = k;
        FieldElement { field: self.n, num, den: BigInt::one() }
    }

    pub fn from_i64(&self, k: i64) -> FieldElement {
        self.from_integer(BigInt::from(k))
    }

    pub fn from_rational(&self, q: &BigRational) -> FieldElement {
        let mut num = vec![BigInt::zero(); self.degree()];
        num[0] = q.numer().clone();
        self.make(num, q.denom().clone())
    }

    /// The element `Σ c_i θ^i` for an integer polynomial of any degree.
    pub fn from_int_poly(&self, coeffs: &[BigInt]) -> FieldElement {
        let d = self.degree();
        let mut rem: IntPoly = coeffs.to_vec();
        poly::trim(&mut rem);
        // long division by the monic minimal polynomial
        while rem.len() > d {
            let shift = rem.len() - 1 - d;
            let q = rem.last().unwrap().clone();
            for (i, c) in self.minpoly.iter().enumerate() {
                rem[shift + i] -= &q * c;
            }
            rem.pop();
            poly::trim(&mut rem);
        }
        rem.resize(d, BigInt::zero());
        FieldElement { field: self.n, num: rem, den: BigInt::one() }
    }

    /// The element with the given power-basis coefficients.
    pub fn from_coeffs(&self, coeffs: &[BigRational]) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.degree() {
            return Err(FieldError::WrongLength { expected: self.degree(), got: coeffs.len() });
        }
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(self.make(num, den))
    }

    pub fn theta(&self) -> FieldElement {
        self.from_int_poly(&poly::int_from(&[0, 1]))
    }

    fn check(&self, a: &FieldElement) -> Result<(), FieldError> {
        if a.field != self.n {
            return Err(FieldError::MixedFields { left: self.n, right: a.field });
        }
        Ok(())
    }

    /// Checked arithmetic. Operands from another field are rejected.
    pub fn arith(&self, a: &FieldElement, b: &FieldElement, op: Op) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        if a.field != b.field {
            return Err(FieldError::MixedFields { left: a.field, right: b.field });
        }
        match op {
            Op::Add => Ok(self.add(a, b)),
            Op::Sub => Ok(self.sub(a, b)),
            Op::Mul => Ok(self.mul(a, b)),
            Op::Div => self.div(a, b),
        }
    }

    // The unchecked operations below assume both operands come from `self`.

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert!(a.field == self.n && b.field == self.n);
        if a.den.is_one() && b.den.is_one() {
            let num = a.num.iter().zip(&b.num).map(|(x, y)| x + y).collect();
            return FieldElement { field: self.n, num, den: BigInt::one() };
        }
        if a.den == b.den {
            let num = a.num.iter().zip(&b.num).map(|(x, y)| x + y).collect();
            return self.make(num, a.den.clone());
        }
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| x * &b.den + y * &a.den)
            .collect();
        self.make(num, &a.den * &b.den)
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &b.neg())
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert!(a.field == self.n && b.field == self.n);
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        if a.is_rational() {
            return self.scale(b, &a.num[0], &a.den);
        }
        if b.is_rational() {
            return self.scale(a, &b.num[0], &b.den);
        }
        let d = self.degree();
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut num: Vec<BigInt> = prod[..d].to_vec();
        for (k, row) in self.reduction.iter().enumerate() {
            let c = &prod[d + k];
            if c.is_zero() {
                continue;
            }
            for (i, r) in row.iter().enumerate() {
                if !r.is_zero() {
                    num[i] += c * r;
                }
            }
        }
        let den = &a.den * &b.den;
        if den.is_one() {
            FieldElement { field: self.n, num, den }
        } else {
            self.make(num, den)
        }
    }

    fn scale(&self, a: &FieldElement, p: &BigInt, q: &BigInt) -> FieldElement {
        let num = a.num.iter().map(|x| x * p).collect();
        let den = &a.den * q;
        if den.is_one() {
            FieldElement { field: self.n, num, den }
        } else {
            self.make(num, den)
        }
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        // column k of the multiplication matrix is num * θ^k
        let d = self.degree();
        let theta = self.theta();
        let mut col = FieldElement { field: self.n, num: a.num.clone(), den: BigInt::one() };
        let mut rows = vec![Vec::with_capacity(d); d];
        for _ in 0..d {
            for (row, c) in rows.iter_mut().zip(&col.num) {
                row.push(c.clone());
            }
            col = self.mul(&col, &theta);
        }
        let mut e0 = vec![BigInt::zero(); d];
        e0[0] = BigInt::one();
        let x = poly::int_solve(rows, &e0).expect("nonzero elements are invertible");
        let den = BigRational::from_integer(a.den.clone());
        let coeffs: Vec<BigRational> = x.into_iter().map(|c| c * &den).collect();
        self.from_coeffs(&coeffs)
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Exact sign of the real number obtained by substituting θ = 2cos(π/N).
    pub fn sign(&self, a: &FieldElement) -> Sign {
        if a.is_zero() {
            return Sign::Zero;
        }
        if a.is_rational() {
            return Sign::from_i8(poly::sign_of(&a.num[0]));
        }
        // den > 0, so the numerator decides
        let bounds = self.bounds.as_ref().expect("irrational elements need degree >= 2");
        if let Some(s) = bounds.sign(&a.num) {
            return s;
        }
        let mut bits = bounds.bits;
        loop {
            bits *= 2;
            let (lo, hi) = self.refined(bits);
            let b = PowerBounds::new(&lo, &hi, bits, self.degree());
            if let Some(s) = b.sign(&a.num) {
                return s;
            }
        }
    }

    /// `2cos(π/m)` expressed in this field; requires `m | N`.
    ///
    /// The candidates are `P_{k j}(θ)` with `k = N/m`, `j` odd and coprime
    /// to `m`: each is a Galois conjugate of `2cos(π/m)`. Every candidate is
    /// checked to be a root of the minimal polynomial of `2cos(π/m)`, and the
    /// largest one (by exact sign comparison) is returned.
    pub fn two_cos_pi_over(&self, m: u32) -> Result<FieldElement, FieldError> {
        if m == 0 || self.n % m != 0 {
            return Err(FieldError::NotInField { m, n: self.n });
        }
        if m <= 2 {
            return Ok(self.from_i64(if m == 1 { -2 } else { 0 }));
        }
        let k = (self.n / m) as u64;
        let target = poly::real_cyclotomic(2 * m as u64);
        let mut best: Option<FieldElement> = None;
        for j in (1..m as u64).step_by(2) {
            if j.gcd(&(m as u64)) != 1 {
                continue;
            }
            let cand = self.from_int_poly(&poly::two_cos_multiple(k * j));
            assert!(
                self.eval_int_poly(&target, &cand).is_zero(),
                "Chebyshev candidate is not a conjugate of 2cos(pi/{m})"
            );
            best = match best {
                Some(b) if self.sign(&self.sub(&cand, &b)) != Sign::Positive => Some(b),
                _ => Some(cand),
            };
        }
        debug_assert!(m != self.n || best.as_ref() == Some(&self.theta()));
        Ok(best.expect("at least j = 1 is a candidate"))
    }

    /// Evaluates an integer polynomial at a field element.
    pub fn eval_int_poly(&self, p: &[BigInt], x: &FieldElement) -> FieldElement {
        let mut acc = self.zero();
        for c in p.iter().rev() {
            acc = self.add(&self.mul(&acc, x), &self.from_integer(c.clone()));
        }
        acc
    }

    /// Precision of the cached enclosure used by [`Field::sign`].
    pub fn cached_bits(&self) -> u32 {
        self.bounds.as_ref().map_or(0, |b| b.bits)
    }
}

/// Factors the relation `P_N(x) + 2 = 0` satisfied by `2cos(π/N)` into the
/// real-cyclotomic candidates `Ψ_d` (`d | 2N`, `d ∤ N`), checks that they
/// multiply back to the relation, and keeps the factor whose largest root is
/// largest: that root is `2cos(π/N)`. Returns the factor with an isolating
/// enclosure of its largest root.
fn select_minpoly(n: u64) -> (IntPoly, BigRational, BigRational) {
    let mut relation = poly::two_cos_multiple(n);
    relation = poly::int_add(&relation, &poly::int_from(&[2]));
    let candidates: Vec<(u64, IntPoly)> = poly::divisors(2 * n)
        .into_iter()
        .filter(|d| n % d != 0)
        .map(|d| (d, poly::real_cyclotomic(d)))
        .collect();
    let mut product = poly::int_from(&[1]);
    for (d, p) in &candidates {
        product = poly::int_mul(&product, p);
        if *d > 2 {
            product = poly::int_mul(&product, p);
        }
    }
    assert_eq!(product, relation, "factorization of the Chebyshev relation is incomplete");

    // largest-root enclosures, refined until one candidate dominates
    struct Cand {
        poly: IntPoly,
        chain: Option<SturmChain>,
        lo: BigRational,
        hi: BigRational,
    }
    let mut cands: Vec<Cand> = candidates
        .into_iter()
        .map(|(_, p)| {
            if p.len() == 2 {
                let r = BigRational::from_integer(-p[0].clone());
                Cand { poly: p, chain: None, lo: r.clone(), hi: r }
            } else {
                let rp = poly::to_rat(&p);
                let b = poly::root_bound(&rp);
                Cand { poly: p, chain: Some(SturmChain::new(&rp)), lo: -b.clone(), hi: b }
            }
        })
        .collect();
    let mut bits = 4u32;
    loop {
        let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
        for c in cands.iter_mut() {
            if let Some(chain) = &c.chain {
                let (lo, hi) = chain.refine_largest(c.lo.clone(), c.hi.clone(), &width);
                c.lo = lo;
                c.hi = hi;
            }
        }
        for (i, c) in cands.iter().enumerate() {
            if cands
                .iter()
                .enumerate()
                .all(|(j, other)| i == j || c.lo > other.hi)
            {
                let c = &cands[i];
                return (c.poly.clone(), c.lo.clone(), c.hi.clone());
            }
        }
        bits *= 2;
    }
}
