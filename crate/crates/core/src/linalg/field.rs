use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// The Mersenne prime 2^61 - 1, used for randomized evaluation by default.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;

/// The field every scalar of a computation lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

/// An exact field element.
///
/// Rationals are kept in lowest terms with a positive denominator (the
/// `BigRational` normal form). Residues are canonical, in `[0, p)`; the
/// modulus lives in the owning [`FieldSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue(u64),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue(r) => *r == 0,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => f.write_str(&format_rational(q)),
            Scalar::Residue(r) => write!(f, "{r}"),
        }
    }
}

/// `"a"` for integers, `"a/b"` with `b > 0` otherwise.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"a"` or `"a/b"` into a reduced rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        None => text.parse::<BigInt>().ok().map(BigRational::from_integer),
        Some((n, d)) => {
            let n = n.trim().parse::<BigInt>().ok()?;
            let d = d.trim().parse::<BigInt>().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for
/// every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl FieldSpec {
    /// A prime field, rejecting composite moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(Error::BadPrime(p))
        }
    }

    /// Zero for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::Prime(_) => Scalar::Residue(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::one()),
            FieldSpec::Prime(_) => Scalar::Residue(1),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(v.into())),
            FieldSpec::Prime(p) => Scalar::Residue((v as i128).rem_euclid(*p as i128) as u64),
        }
    }

    /// Maps a rational into this field. Fails over `F_p` when the
    /// denominator is divisible by `p`.
    pub fn from_rational(&self, q: &BigRational) -> Option<Scalar> {
        match self {
            FieldSpec::Rationals => Some(Scalar::Rational(q.clone())),
            FieldSpec::Prime(p) => {
                let m = BigInt::from(*p);
                let num = q.numer().mod_floor(&m).to_u64()?;
                let den = q.denom().mod_floor(&m).to_u64()?;
                if den == 0 {
                    return None;
                }
                Some(Scalar::Residue(mul_mod(num, pow_mod(den, p - 2, *p), *p)))
            }
        }
    }

    /// Re-expresses `s`, an element of `from`, in this field.
    pub fn convert(&self, s: &Scalar, from: FieldSpec) -> Result<Scalar> {
        match (from, s) {
            (FieldSpec::Rationals, Scalar::Rational(q)) => {
                self.from_rational(q).ok_or_else(|| Error::BadScalar {
                    path: "conversion".into(),
                    reason: format!("{} has no image in {self}", format_rational(q)),
                })
            }
            (FieldSpec::Prime(p), Scalar::Residue(r)) if *self == FieldSpec::Prime(p) => {
                Ok(Scalar::Residue(*r))
            }
            _ => Err(Error::MixedField(from.to_string(), self.to_string())),
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (FieldSpec::Rationals, Scalar::Rational(_)) => true,
            (FieldSpec::Prime(p), Scalar::Residue(r)) => r < p,
            _ => false,
        }
    }

    /// Parses a scalar text form. Prime-field input must already be a
    /// canonical residue.
    pub fn parse_scalar(&self, text: &str) -> Option<Scalar> {
        match self {
            FieldSpec::Rationals => parse_rational(text).map(Scalar::Rational),
            FieldSpec::Prime(p) => {
                let r: u64 = text.trim().parse().ok()?;
                (r < *p).then_some(Scalar::Residue(r))
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x + y)
            }
            (FieldSpec::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            _ => mixed(self, a, b),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x - y)
            }
            (FieldSpec::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(if x >= y { x - y } else { p - (y - x) })
            }
            _ => mixed(self, a, b),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x * y)
            }
            (FieldSpec::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(mul_mod(*x, *y, *p))
            }
            _ => mixed(self, a, b),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(x)) => Scalar::Rational(-x),
            (FieldSpec::Prime(p), Scalar::Residue(x)) => {
                Scalar::Residue(if *x == 0 { 0 } else { p - x })
            }
            _ => mixed(self, a, a),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(x)) => Some(Scalar::Rational(x.recip())),
            (FieldSpec::Prime(p), Scalar::Residue(x)) => {
                Some(Scalar::Residue(pow_mod(*x, p - 2, *p)))
            }
            _ => mixed(self, a, a),
        }
    }

    /// `a + b * c`, the elimination kernel.
    pub fn mul_add(&self, a: &Scalar, b: &Scalar, c: &Scalar) -> Scalar {
        self.add(a, &self.mul(b, c))
    }

    pub fn dot(&self, a: &[Scalar], b: &[Scalar]) -> Scalar {
        debug_assert_eq!(a.len(), b.len());
        a.iter()
            .zip(b)
            .fold(self.zero(), |acc, (x, y)| self.mul_add(&acc, x, y))
    }

    /// Uniform residue over `F_p`, or a uniform integer in `[-bound, bound]`
    /// over the rationals.
    pub fn sample<R: Rng + ?Sized>(&self, rational_bound: u64, rng: &mut R) -> Scalar {
        match self {
            FieldSpec::Rationals => {
                let b = rational_bound as i128;
                let v: i128 = rng.gen_range(-b..=b);
                Scalar::Rational(BigRational::from_integer(v.into()))
            }
            FieldSpec::Prime(p) => Scalar::Residue(rng.gen_range(0..*p)),
        }
    }
}

#[cold]
fn mixed(field: &FieldSpec, a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar/field mismatch: {a:?}, {b:?} in {field}")
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => f.write_str("Q"),
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// Sign helper used when building rationals from signed machine integers.
pub fn rational(numer: i64, denom: i64) -> BigRational {
    BigRational::new(numer.into(), denom.into())
}

/// Integer value of a rational, if it is one.
pub fn rational_to_i64(q: &BigRational) -> Option<i64> {
    if q.denom().is_one() {
        q.numer().to_i64()
    } else {
        None
    }
}

/// Whether `q <= 0`.
pub fn is_nonpositive(q: &BigRational) -> bool {
    !q.is_positive()
}
