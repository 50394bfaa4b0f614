use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{Field, Scalar};
use super::matrix::Matrix;

/// Univariate polynomial in λ, coefficients lowest degree first. The zero
/// polynomial has no coefficients; otherwise the leading coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Polynomial { field, coeffs }
    }

    pub fn zero(field: Field) -> Self {
        Polynomial { field, coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(c.field(), vec![c])
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field.one())
    }

    /// `λ - c`.
    pub fn linear(c: &Scalar) -> Self {
        let field = c.field();
        Self::new(field, vec![-c, field.one()])
    }

    /// `∏ (λ - r)` over the given roots; the empty product is 1.
    pub fn from_roots(field: Field, roots: &[Scalar]) -> Self {
        roots
            .iter()
            .fold(Self::one(field), |acc, r| acc.mul(&Self::linear(r)))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lead) => self.scale(&lead.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::new(self.field, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = self.field.zero();
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                a + b
            })
            .collect();
        Self::new(self.field, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-&self.field.one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(self.field, out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let n = rem.len();
        if n <= d {
            return (Self::zero(self.field), self.clone());
        }
        let mut quot = vec![self.field.zero(); n - d];
        for k in (0..n - d).rev() {
            let c = &rem[k + d] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * b);
            }
            quot[k] = c;
        }
        rem.truncate(d);
        (Self::new(self.field, quot), Self::new(self.field, rem))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| &self.field.from_i64(i as i64) * c)
            .collect();
        Self::new(self.field, coeffs)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        assert!(m.is_square(), "polynomial evaluated at a non-square matrix");
        assert_eq!(m.field(), self.field, "field mismatch");
        let n = m.rows();
        self.coeffs.iter().rev().fold(Matrix::zeros(self.field, n, n), |acc, c| {
            acc.mul(m).shift(&-c)
        })
    }

    /// True iff the polynomial has no repeated factor.
    pub fn is_square_free(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// The distinct roots lying in the ground field, in canonical order.
    ///
    /// Over GF(p) every element is tried. Over Q the square-free part is
    /// isolated with a Sturm sequence; a rational root of a monic polynomial
    /// whose denominators have lcm `L` lies in `Z/L`, so an isolating interval
    /// narrower than `1/L` holds at most one candidate to test.
    pub fn roots(&self) -> Vec<Scalar> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        match self.field {
            Field::Prime(_) => self
                .field
                .elements()
                .expect("finite field")
                .filter(|x| self.eval(x).is_zero())
                .collect(),
            Field::Rationals => {
                let square_free = self.div_rem(&self.gcd(&self.derivative())).0.monic();
                let mut roots = rational_roots(&square_free);
                roots.sort_by(|a, b| a.canonical_cmp(b));
                roots
            }
        }
    }
}

fn to_q(p: &Polynomial) -> Vec<BigRational> {
    p.coeffs()
        .iter()
        .map(|c| c.as_rational().expect("rational coefficient").clone())
        .collect()
}

fn eval_q(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn sign_changes(sturm: &[Vec<BigRational>], x: &BigRational) -> usize {
    let mut changes = 0;
    let mut last = 0i8;
    for s in sturm {
        let v = eval_q(s, x);
        let sign = if v.is_zero() {
            continue;
        } else if v.is_positive() {
            1
        } else {
            -1
        };
        if last != 0 && sign != last {
            changes += 1;
        }
        last = sign;
    }
    changes
}

fn rational_roots(monic: &Polynomial) -> Vec<Scalar> {
    let Some(deg) = monic.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let coeffs = to_q(monic);
    let denom_lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let bound = coeffs[..deg]
        .iter()
        .map(|c| c.abs())
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a })
        + BigRational::one();

    let field = monic.field();
    let f = monic.clone();
    let mut sturm = vec![f.clone(), f.derivative()];
    loop {
        let k = sturm.len();
        let (_, r) = sturm[k - 2].div_rem(&sturm[k - 1]);
        if r.is_zero() {
            break;
        }
        sturm.push(r.scale(&-&field.one()));
    }
    let sturm: Vec<Vec<BigRational>> = sturm.iter().map(to_q).collect();

    let mut roots = Vec::new();
    let lo = -bound.clone();
    let mut stack = vec![(lo.clone(), bound.clone(), sign_changes(&sturm, &lo), sign_changes(&sturm, &bound))];
    let grid = BigRational::from_integer(denom_lcm.clone());
    let width_limit = BigRational::new(BigInt::one(), denom_lcm);
    while let Some((lo, hi, v_lo, v_hi)) = stack.pop() {
        let count = v_lo.saturating_sub(v_hi);
        if count == 0 {
            continue;
        }
        if count == 1 && &hi - &lo < width_limit {
            // unique candidate k/L with L*lo < k <= L*hi
            let k = (&hi * &grid).floor();
            let candidate = k / &grid;
            if candidate > lo && eval_q(&coeffs, &candidate).is_zero() {
                roots.push(Scalar::Rational(candidate));
            }
            continue;
        }
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        let v_mid = sign_changes(&sturm, &mid);
        stack.push((lo, mid.clone(), v_lo, v_mid));
        stack.push((mid, hi, v_mid, v_hi));
    }
    roots
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "λ")?,
                1 => write!(f, "({c})λ")?,
                _ if c.is_one() => write!(f, "λ^{i}")?,
                _ => write!(f, "({c})λ^{i}")?,
            }
        }
        Ok(())
    }
}
