//! Scalar rings.
//!
//! Two rings are supported: approximate complex numbers, and formal power
//! series in `h` with complex coefficients truncated modulo `h^(order+1)`.
//! Every computation in the crate is carried out over one [`ScalarRing`];
//! mixing scalars from different rings is an error (checked variants) or a
//! panic (operator overloads).
//!
//! The q-symbols use `q = e^{h/2}`. `[m]_q` is evaluated through the
//! division-free sum `q^{m-1} + q^{m-3} + ... + q^{1-m}`, because
//! `q - q^{-1}` has zero constant term and cannot be inverted as a series.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_ORDER: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    ApproxComplex,
    HSeries,
}

/// Ground ring of a computation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarRing {
    kind: RingKind,
    tolerance: f64,
    order: usize,
}

impl ScalarRing {
    /// Approximate complex numbers with the default tolerance.
    pub fn complex() -> Self {
        ScalarRing {
            kind: RingKind::ApproxComplex,
            tolerance: DEFAULT_TOLERANCE,
            order: 0,
        }
    }

    /// Power series in `h` kept modulo `h^(order+1)`.
    pub fn series(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument(
                "series order must be at least 1".into(),
            ));
        }
        Ok(ScalarRing {
            kind: RingKind::HSeries,
            tolerance: DEFAULT_TOLERANCE,
            order,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive and finite, got {tolerance}"
            )));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Truncation order, `None` for the complex ring.
    pub fn series_order(&self) -> Option<usize> {
        match self.kind {
            RingKind::ApproxComplex => None,
            RingKind::HSeries => Some(self.order),
        }
    }

    /// Two rings are compatible when their scalars can be combined.
    /// Tolerance is a comparison setting and does not affect compatibility.
    pub fn is_compatible(&self, other: &ScalarRing) -> bool {
        self.kind == other.kind && self.series_order() == other.series_order()
    }

    pub(crate) fn ensure_compatible(&self, other: &ScalarRing, context: &str) -> Result<()> {
        if self.is_compatible(other) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{context}: {self} vs {other}")))
        }
    }

    pub fn zero(&self) -> Scalar {
        self.constant(Complex64::new(0.0, 0.0))
    }

    pub fn one(&self) -> Scalar {
        self.constant(Complex64::new(1.0, 0.0))
    }

    /// Embeds a complex constant (a constant series for the series ring).
    pub fn constant(&self, z: Complex64) -> Scalar {
        match self.kind {
            RingKind::ApproxComplex => Scalar::Complex(z),
            RingKind::HSeries => Scalar::Series(HSeries::constant(z, self.order)),
        }
    }

    pub fn real(&self, x: f64) -> Scalar {
        self.constant(Complex64::new(x, 0.0))
    }

    /// The formal variable `h`.
    pub fn h(&self) -> Result<Scalar> {
        self.require_series("h")?;
        Ok(Scalar::Series(HSeries::monomial(
            Complex64::new(1.0, 0.0),
            1,
            self.order,
        )))
    }

    /// `q^x = e^{x h / 2}` for a real (possibly fractional) exponent.
    pub fn q_power(&self, exponent: f64) -> Result<Scalar> {
        self.require_series("q-power")?;
        Ok(Scalar::Series(HSeries::exp_linear(
            Complex64::new(exponent / 2.0, 0.0),
            self.order,
        )))
    }

    fn require_series(&self, what: &str) -> Result<()> {
        match self.kind {
            RingKind::HSeries => Ok(()),
            RingKind::ApproxComplex => Err(Error::RingMismatch(format!(
                "{what} requires the h-series ring"
            ))),
        }
    }
}

impl fmt::Display for ScalarRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::ApproxComplex => write!(f, "complex(tol={:e})", self.tolerance),
            RingKind::HSeries => {
                write!(f, "hseries(order={}, tol={:e})", self.order, self.tolerance)
            }
        }
    }
}

/// Truncated power series `c_0 + c_1 h + ... + c_N h^N`.
///
/// The coefficient vector always has exactly `N + 1` entries.
#[derive(Clone, Debug, PartialEq)]
pub struct HSeries {
    coeffs: Vec<Complex64>,
}

impl HSeries {
    /// Builds a series from its coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidArgument(
                "a series needs at least two coefficients (order >= 1)".into(),
            ));
        }
        Ok(HSeries { coeffs })
    }

    pub fn zero(order: usize) -> Self {
        HSeries {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    pub fn constant(z: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = z;
        s
    }

    pub fn monomial(z: Complex64, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = z;
        }
        s
    }

    /// `e^{slope * h}`; coefficient `k` is `slope^k / k!`.
    pub fn exp_linear(slope: Complex64, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = Complex64::new(1.0, 0.0);
        coeffs.push(term);
        for k in 1..=order {
            term = term * slope / k as f64;
            coeffs.push(term);
        }
        HSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeffs[0]
    }

    fn check_order(&self, other: &HSeries) -> Result<()> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!(
                "series of order {} combined with order {}",
                self.order(),
                other.order()
            )))
        }
    }

    pub fn try_add(&self, other: &HSeries) -> Result<HSeries> {
        self.check_order(other)?;
        Ok(HSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &HSeries) -> Result<HSeries> {
        self.check_order(other)?;
        Ok(HSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Cauchy product truncated beyond `h^order`.
    pub fn try_mul(&self, other: &HSeries) -> Result<HSeries> {
        self.check_order(other)?;
        let n = self.coeffs.len();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(HSeries { coeffs })
    }

    pub fn scale(&self, z: Complex64) -> HSeries {
        HSeries {
            coeffs: self.coeffs.iter().map(|c| c * z).collect(),
        }
    }

    /// `e^{c_0} * sum_k (x - c_0)^k / k!`, exact modulo truncation.
    pub fn exp(&self) -> HSeries {
        let order = self.order();
        let mut nilpotent = self.clone();
        nilpotent.coeffs[0] = Complex64::new(0.0, 0.0);
        let mut sum = HSeries::constant(Complex64::new(1.0, 0.0), order);
        let mut power = sum.clone();
        for k in 1..=order {
            power = power
                .try_mul(&nilpotent)
                .expect("same order")
                .scale(Complex64::new(1.0 / k as f64, 0.0));
            sum = sum.try_add(&power).expect("same order");
        }
        sum.scale(self.coeffs[0].exp())
    }

    /// Multiplicative inverse; requires `|c_0| > tolerance`.
    pub fn invert(&self, tolerance: f64) -> Result<HSeries> {
        let a0 = self.coeffs[0];
        if a0.norm() <= tolerance {
            return Err(Error::NotInvertible(format!(
                "series with constant term {a0} (|c0| <= {tolerance:e})"
            )));
        }
        let inv0 = a0.inv();
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        out[0] = inv0;
        for k in 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * out[k - j];
            }
            out[k] = -acc * inv0;
        }
        Ok(HSeries { coeffs: out })
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// An element of a [`ScalarRing`].
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Complex(Complex64),
    Series(HSeries),
}

impl Scalar {
    pub fn kind(&self) -> RingKind {
        match self {
            Scalar::Complex(_) => RingKind::ApproxComplex,
            Scalar::Series(_) => RingKind::HSeries,
        }
    }

    /// Whether this scalar lives in `ring` (kind and truncation order agree).
    pub fn belongs_to(&self, ring: &ScalarRing) -> bool {
        match self {
            Scalar::Complex(_) => ring.kind == RingKind::ApproxComplex,
            Scalar::Series(s) => ring.series_order() == Some(s.order()),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Complex(a), Scalar::Complex(b)) => Ok(Scalar::Complex(a + b)),
            (Scalar::Series(a), Scalar::Series(b)) => a.try_add(b).map(Scalar::Series),
            _ => Err(mismatch(self, other)),
        }
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Complex(a), Scalar::Complex(b)) => Ok(Scalar::Complex(a - b)),
            (Scalar::Series(a), Scalar::Series(b)) => a.try_sub(b).map(Scalar::Series),
            _ => Err(mismatch(self, other)),
        }
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Complex(a), Scalar::Complex(b)) => Ok(Scalar::Complex(a * b)),
            (Scalar::Series(a), Scalar::Series(b)) => a.try_mul(b).map(Scalar::Series),
            _ => Err(mismatch(self, other)),
        }
    }

    /// Multiplies by a complex constant; valid in either ring.
    pub fn scale(&self, z: Complex64) -> Scalar {
        match self {
            Scalar::Complex(a) => Scalar::Complex(a * z),
            Scalar::Series(s) => Scalar::Series(s.scale(z)),
        }
    }

    /// True when every coefficient is below `tolerance` in absolute value.
    pub fn is_zero(&self, tolerance: f64) -> bool {
        self.max_abs() < tolerance
    }

    /// Exactly zero, coefficient by coefficient. Used to skip work.
    pub fn is_exact_zero(&self) -> bool {
        match self {
            Scalar::Complex(z) => z.re == 0.0 && z.im == 0.0,
            Scalar::Series(s) => s.coeffs.iter().all(|z| z.re == 0.0 && z.im == 0.0),
        }
    }

    /// Largest coefficient modulus (complex modulus for the complex ring).
    pub fn max_abs(&self) -> f64 {
        match self {
            Scalar::Complex(z) => z.norm(),
            Scalar::Series(s) => s.max_abs(),
        }
    }

    pub fn approx_eq(&self, other: &Scalar, tolerance: f64) -> bool {
        match self.try_sub(other) {
            Ok(d) => d.is_zero(tolerance),
            Err(_) => false,
        }
    }

    pub fn constant_term(&self) -> Complex64 {
        match self {
            Scalar::Complex(z) => *z,
            Scalar::Series(s) => s.constant_term(),
        }
    }

    /// Exponential; for series this is [`HSeries::exp`].
    pub fn exp(&self) -> Scalar {
        match self {
            Scalar::Complex(z) => Scalar::Complex(z.exp()),
            Scalar::Series(s) => Scalar::Series(s.exp()),
        }
    }

    pub fn try_invert(&self, tolerance: f64) -> Result<Scalar> {
        match self {
            Scalar::Complex(z) => {
                if z.norm() <= tolerance {
                    Err(Error::NotInvertible(format!("complex scalar {z}")))
                } else {
                    Ok(Scalar::Complex(z.inv()))
                }
            }
            Scalar::Series(s) => s.invert(tolerance).map(Scalar::Series),
        }
    }

    pub fn pow(&self, exponent: u32) -> Scalar {
        let mut acc = match self {
            Scalar::Complex(_) => Scalar::Complex(Complex64::new(1.0, 0.0)),
            Scalar::Series(s) => {
                Scalar::Series(HSeries::constant(Complex64::new(1.0, 0.0), s.order()))
            }
        };
        for _ in 0..exponent {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficients `c_0..c_N` (a single entry for a complex scalar).
    pub fn coefficients(&self) -> Vec<Complex64> {
        match self {
            Scalar::Complex(z) => vec![*z],
            Scalar::Series(s) => s.coeffs.clone(),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> Error {
    let describe = |s: &Scalar| match s {
        Scalar::Complex(_) => "complex".to_string(),
        Scalar::Series(s) => format!("hseries(order={})", s.order()),
    };
    Error::RingMismatch(format!("{} vs {}", describe(a), describe(b)))
}

// Operator overloads panic on ring mismatch. Entry points that accept
// user data validate rings up front, so inner loops can use them freely.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$checked(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Complex(z) => write!(f, "{z}"),
            Scalar::Series(s) => {
                let mut first = true;
                for (k, c) in s.coeffs.iter().enumerate() {
                    if c.re == 0.0 && c.im == 0.0 {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    match k {
                        0 => write!(f, "({c})")?,
                        1 => write!(f, "({c})h")?,
                        _ => write!(f, "({c})h^{k}")?,
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                write!(f, " + O(h^{})", s.order() + 1)
            }
        }
    }
}

/// `e^{x}` for a series scalar.
pub fn series_exp(x: &Scalar) -> Result<Scalar> {
    match x {
        Scalar::Series(s) => Ok(Scalar::Series(s.exp())),
        Scalar::Complex(_) => Err(Error::RingMismatch(
            "series_exp requires an h-series scalar".into(),
        )),
    }
}

/// Series inverse; fails when the constant term is within tolerance of zero.
pub fn series_invert(x: &Scalar, ring: &ScalarRing) -> Result<Scalar> {
    match x {
        Scalar::Series(s) => s.invert(ring.tolerance()).map(Scalar::Series),
        Scalar::Complex(_) => Err(Error::RingMismatch(
            "series_invert requires an h-series scalar".into(),
        )),
    }
}

/// `[m]_q = sum_{j=0}^{m-1} q^{m-1-2j}` with `q = e^{h/2}`.
pub fn q_integer(m: u32, ring: &ScalarRing) -> Result<Scalar> {
    let mut acc = ring.zero();
    ring.require_series("q_integer")?;
    for j in 0..m {
        let exponent = m as f64 - 1.0 - 2.0 * j as f64;
        acc = acc + ring.q_power(exponent)?;
    }
    Ok(acc)
}

/// `[m]_q! = [m]_q [m-1]_q ... [1]_q`, with `[0]_q! = 1`.
pub fn q_factorial(m: u32, ring: &ScalarRing) -> Result<Scalar> {
    ring.require_series("q_factorial")?;
    let mut acc = ring.one();
    for j in 1..=m {
        acc = acc * q_integer(j, ring)?;
    }
    Ok(acc)
}

/// Gaussian binomial `[m]_q! / ([r]_q! [m-r]_q!)`.
pub fn q_binomial(m: u32, r: u32, ring: &ScalarRing) -> Result<Scalar> {
    if r > m {
        return Err(Error::InvalidArgument(format!(
            "q-binomial needs r <= m, got r={r}, m={m}"
        )));
    }
    let denominator = q_factorial(r, ring)? * q_factorial(m - r, ring)?;
    Ok(q_factorial(m, ring)? * series_invert(&denominator, ring)?)
}

/// `e^{2 pi i p / n}` in the complex ring.
pub fn root_of_unity(n: u32, p: i64, ring: &ScalarRing) -> Result<Scalar> {
    if n == 0 {
        return Err(Error::InvalidArgument("root of unity needs n >= 1".into()));
    }
    if ring.kind() != RingKind::ApproxComplex {
        return Err(Error::RingMismatch(
            "roots of unity live in the complex ring".into(),
        ));
    }
    let p = p.rem_euclid(n as i64);
    let theta = 2.0 * PI * p as f64 / n as f64;
    Ok(Scalar::Complex(Complex64::from_polar(1.0, theta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn series(ring: &ScalarRing, coeffs: &[f64]) -> Scalar {
        let order = ring.series_order().unwrap();
        let mut v = vec![c(0.0, 0.0); order + 1];
        for (k, x) in coeffs.iter().enumerate() {
            v[k] = c(*x, 0.0);
        }
        Scalar::Series(HSeries::new(v).unwrap())
    }

    fn assert_series(s: &Scalar, expected: &[f64]) {
        let coeffs = s.coefficients();
        assert_eq!(coeffs.len(), expected.len(), "{s}");
        for (got, want) in coeffs.iter().zip(expected) {
            assert!((got - c(*want, 0.0)).norm() < 1e-12, "{s} vs {expected:?}");
        }
    }

    #[test]
    fn unit_law() {
        let one = Scalar::Complex(c(1.0, 0.0));
        let i = Scalar::Complex(c(0.0, 1.0));
        assert_eq!(&one * &i, i);
    }

    #[test]
    fn monomial_product_truncates() {
        let ring = ScalarRing::series(2).unwrap();
        let h = ring.h().unwrap();
        assert_series(&(&h * &h), &[0.0, 0.0, 1.0]);
        let h3 = h.pow(3);
        assert!(h3.is_exact_zero());
    }

    #[test]
    fn difference_of_squares() {
        let ring = ScalarRing::series(3).unwrap();
        let a = series(&ring, &[1.0, 1.0]);
        let b = series(&ring, &[1.0, -1.0]);
        assert_series(&(a * b), &[1.0, 0.0, -1.0, 0.0]);
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = Scalar::Complex(c(1.0, 0.0));
        let b = ScalarRing::series(2).unwrap().one();
        assert!(matches!(a.try_add(&b), Err(Error::RingMismatch(_))));
        let d = ScalarRing::series(3).unwrap().one();
        assert!(matches!(b.try_mul(&d), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn exp_examples() {
        let ring = ScalarRing::series(2).unwrap();
        assert_series(&series_exp(&ring.zero()).unwrap(), &[1.0, 0.0, 0.0]);
        let half_h = ring.h().unwrap().scale(c(0.5, 0.0));
        assert_series(&series_exp(&half_h).unwrap(), &[1.0, 0.5, 0.125]);

        let ring = ScalarRing::series(6).unwrap();
        let quarter = ring.h().unwrap().scale(c(0.25, 0.0));
        let prod = series_exp(&quarter).unwrap() * series_exp(&-&quarter).unwrap();
        assert!(prod.approx_eq(&ring.one(), 1e-12));
    }

    #[test]
    fn exp_with_constant_term() {
        let ring = ScalarRing::series(3).unwrap();
        let x = series(&ring, &[2.0, 1.0]);
        let e2 = 2f64.exp();
        assert_series(&x.exp(), &[e2, e2, e2 / 2.0, e2 / 6.0]);
    }

    #[test]
    fn invert_examples() {
        let ring = ScalarRing::series(3).unwrap();
        assert_series(
            &series_invert(&ring.one(), &ring).unwrap(),
            &[1.0, 0.0, 0.0, 0.0],
        );
        let x = series(&ring, &[1.0, 1.0]);
        assert_series(&series_invert(&x, &ring).unwrap(), &[1.0, -1.0, 1.0, -1.0]);
        assert!(matches!(
            series_invert(&ring.h().unwrap(), &ring),
            Err(Error::NotInvertible(_))
        ));
    }

    #[test]
    fn q_integer_examples() {
        let ring = ScalarRing::series(2).unwrap();
        assert_series(&q_integer(0, &ring).unwrap(), &[0.0, 0.0, 0.0]);
        assert_series(&q_integer(1, &ring).unwrap(), &[1.0, 0.0, 0.0]);
        assert_series(&q_integer(2, &ring).unwrap(), &[2.0, 0.0, 0.25]);
        assert!(q_integer(2, &ScalarRing::complex()).is_err());
    }

    #[test]
    fn q_factorial_and_binomial() {
        let ring = ScalarRing::series(6).unwrap();
        assert!(q_factorial(0, &ring).unwrap().approx_eq(&ring.one(), 1e-14));
        let two = q_integer(2, &ring).unwrap();
        assert!(q_factorial(2, &ring).unwrap().approx_eq(&two, 1e-14));
        assert!(q_binomial(2, 1, &ring).unwrap().approx_eq(&two, 1e-12));
        assert!(matches!(
            q_binomial(2, 3, &ring),
            Err(Error::InvalidArgument(_))
        ));
    }

    /// Oracle: the quotient definition evaluated at a numeric h through
    /// closed-form sinh, compared with the truncated series evaluated there.
    /// Also checks the q-Pascal rule
    /// `[m, r] = q^{-r} [m-1, r] + q^{m-r} [m-1, r-1]`.
    #[test]
    fn q_binomial_matches_quotient_and_pascal() {
        let ring = ScalarRing::series(8).unwrap();
        for m in 0..=6u32 {
            for r in 0..=m {
                let b = q_binomial(m, r, &ring).unwrap();
                // numeric evaluation at small h
                let h = 0.05f64;
                let qint = |k: u32| {
                    if k == 0 {
                        0.0
                    } else {
                        ((k as f64) * h / 2.0).sinh() / (h / 2.0).sinh()
                    }
                };
                let qfact = |k: u32| (1..=k).map(qint).product::<f64>();
                let exact = qfact(m) / (qfact(r) * qfact(m - r));
                let approx: f64 = b
                    .coefficients()
                    .iter()
                    .enumerate()
                    .map(|(k, z)| z.re * h.powi(k as i32))
                    .sum();
                assert!((exact - approx).abs() < 1e-9, "m={m} r={r}");
                if r >= 1 && r < m {
                    let lhs = ring.q_power(-(r as f64)).unwrap()
                        * q_binomial(m - 1, r, &ring).unwrap()
                        + ring.q_power((m - r) as f64).unwrap()
                            * q_binomial(m - 1, r - 1, &ring).unwrap();
                    assert!(lhs.approx_eq(&b, 1e-9), "pascal m={m} r={r}");
                }
            }
        }
    }

    #[test]
    fn roots_of_unity() {
        let ring = ScalarRing::complex();
        let one = root_of_unity(1, 0, &ring).unwrap();
        assert!(one.approx_eq(&ring.one(), 1e-15));
        let i = root_of_unity(4, 1, &ring).unwrap();
        assert!(i.approx_eq(&Scalar::Complex(c(0.0, 1.0)), 1e-15));
        let w = root_of_unity(3, 1, &ring).unwrap();
        let expected = Scalar::Complex(c(-0.5, 3f64.sqrt() / 2.0));
        assert!(w.approx_eq(&expected, 1e-15));
        assert!(root_of_unity(3, 1, &ScalarRing::series(2).unwrap()).is_err());
    }

    #[test]
    fn ring_validation() {
        assert!(ScalarRing::series(0).is_err());
        assert!(ScalarRing::complex().with_tolerance(0.0).is_err());
        assert!(ScalarRing::complex().with_tolerance(1e-6).is_ok());
    }

    fn arb_series() -> impl Strategy<Value = Scalar> {
        prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 5).prop_map(|v| {
            Scalar::Series(HSeries::new(v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
        })
    }

    fn arb_poly() -> impl Strategy<Value = Scalar> {
        // zero constant term keeps exp well conditioned in the identity test
        prop::collection::vec(-1.0f64..1.0, 4).prop_map(|v| {
            let mut coeffs = vec![c(0.0, 0.0)];
            coeffs.extend(v.into_iter().map(|x| c(x, 0.0)));
            Scalar::Series(HSeries::new(coeffs).unwrap())
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_series(), b in arb_series(), d in arb_series()) {
            let tol = 1e-9;
            prop_assert!(((&a * &b) * &d).approx_eq(&(&a * &(&b * &d)), tol));
            prop_assert!((&a * &b).approx_eq(&(&b * &a), tol));
            prop_assert!((&a * &(&b + &d)).approx_eq(&(&a * &b + &a * &d), tol));
            prop_assert!((&(&a + &b) + &d).approx_eq(&(&a + &(&b + &d)), tol));
        }

        #[test]
        fn exp_is_a_homomorphism(a in arb_poly(), b in arb_poly()) {
            let lhs = series_exp(&(&a + &b)).unwrap();
            let rhs = series_exp(&a).unwrap() * series_exp(&b).unwrap();
            prop_assert!(lhs.approx_eq(&rhs, 1e-9));
        }

        #[test]
        fn inverse_is_inverse(a in arb_series()) {
            let ring = ScalarRing::series(4).unwrap();
            prop_assume!(a.constant_term().norm() > 0.1);
            let inv = series_invert(&a, &ring).unwrap();
            prop_assert!((&a * &inv).approx_eq(&ring.one(), 1e-7));
        }

        #[test]
        fn q_integer_constant_term(m in 0u32..12) {
            let ring = ScalarRing::series(4).unwrap();
            let z = q_integer(m, &ring).unwrap().constant_term();
            prop_assert!((z - c(m as f64, 0.0)).norm() < 1e-12);
        }
    }
}
