//! Exact field elements: rationals with a machine-word fast path, and residues
//! modulo a prime.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::LinAlgError;

/// An arbitrary-precision rational number.
///
/// Values whose numerator and denominator fit in an `i64` are kept inline;
/// everything else spills to a heap-allocated [`BigRational`]. The
/// representation is canonical (lowest terms, positive denominator, inline
/// whenever possible), so derived equality and hashing are value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rational {
    Small(i64, i64),
    Big(Box<BigRational>),
}

impl Rational {
    pub fn zero() -> Self {
        Rational::Small(0, 1)
    }

    pub fn one() -> Self {
        Rational::Small(1, 1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_i128(n as i128, 1)
    }

    /// Builds `num/den`, reducing to lowest terms. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let g = num.gcd(&den);
        let (mut n, mut d) = if g == 0 { (0, 1) } else { (num / g, den / g) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (fits(n), fits(d)) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        // `r` is already reduced by num-rational.
        match (r.numer().to_i64().and_then(|n| fits(n as i128)), r.denom().to_i64().and_then(|d| fits(d as i128))) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(r)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(n, _) => BigInt::from(*n),
            Rational::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(_, d) => BigInt::from(*d),
            Rational::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rational::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small(n, _) => *n < 0,
            Rational::Big(b) => b.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small(_, d) => *d == 1,
            Rational::Big(b) => b.is_integer(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Option<Self> {
        match self {
            Rational::Small(0, _) => None,
            Rational::Small(n, d) => Some(Self::from_i128(*d as i128, *n as i128)),
            Rational::Big(b) => Some(Self::from_big(b.recip())),
        }
    }
}

/// Inline values exclude `i64::MIN` so that negation can never overflow.
fn fits(v: i128) -> Option<i64> {
    if v > i64::MIN as i128 && v <= i64::MAX as i128 {
        Some(v as i64)
    } else {
        None
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Rational::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = LinAlgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LinAlgError::BadScalar(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Self::from_big(BigRational::new(num, den)))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128))),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small(n, d) => Rational::Small(-n, *d),
            Rational::Big(b) => Rational::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        match (self, rhs) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    return Rational::from_i128(*a as i128 + *c as i128, 1);
                }
                Rational::from_i128(*a as i128 * *d as i128 + *c as i128 * *b as i128, *b as i128 * *d as i128)
            }
            _ => Rational::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        self + &(-rhs)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        match (self, rhs) {
            (Rational::Small(a, b), Rational::Small(c, d)) => Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128),
            _ => Rational::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Div for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        self * &rhs.recip().expect("division by zero")
    }
}

/// A residue class modulo a prime `p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModP {
    value: u64,
    modulus: u64,
}

impl ModP {
    pub fn new(value: i128, modulus: u64) -> Self {
        let m = modulus as i128;
        ModP { value: value.rem_euclid(m) as u64, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn check(&self, other: &ModP) {
        assert_eq!(self.modulus, other.modulus, "mixed prime fields");
    }

    fn pow(&self, mut e: u64) -> ModP {
        let mut base = self.value as u128;
        let m = self.modulus as u128;
        let mut acc: u128 = 1 % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        ModP { value: acc as u64, modulus: self.modulus }
    }

    pub fn inv(&self) -> Option<ModP> {
        if self.value == 0 {
            None
        } else {
            Some(self.pow(self.modulus - 2))
        }
    }
}

impl fmt::Debug for ModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

/// The coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Field {
    #[default]
    Rational,
    Prime(u64),
}

impl Field {
    /// Validates the field; prime moduli must be prime and below 2^62.
    pub fn prime(p: u64) -> Result<Field, LinAlgError> {
        if !(2..(1 << 62)).contains(&p) || !is_prime(p) {
            return Err(LinAlgError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(Rational::from_integer(n)),
            Field::Prime(p) => Scalar::P(ModP::new(n as i128, *p)),
        }
    }

    /// Maps an exact rational into this field. Fails when the denominator
    /// vanishes modulo `p`.
    pub fn from_rational(&self, r: &Rational) -> Result<Scalar, LinAlgError> {
        match self {
            Field::Rational => Ok(Scalar::Q(r.clone())),
            Field::Prime(p) => {
                let pm = BigInt::from(*p);
                let reduce = |x: BigInt| -> i128 { x.mod_floor(&pm).to_i128().expect("residue fits") };
                let num = ModP::new(reduce(r.numer()), *p);
                let den = ModP::new(reduce(r.denom()), *p);
                let inv = den.inv().ok_or_else(|| LinAlgError::DenominatorVanishes(r.to_string(), *p))?;
                Ok(Scalar::P(num * inv))
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = LinAlgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rational);
        }
        let digits = s.strip_prefix('F').ok_or_else(|| LinAlgError::BadField(s.to_string()))?;
        let p: u64 = digits.parse().map_err(|_| LinAlgError::BadField(s.to_string()))?;
        Field::prime(p)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    // Deterministic Miller-Rabin for 64-bit inputs.
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = ModP { value: a % n, modulus: n }.pow(d).value;
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// An element of the working field. Arithmetic between elements of different
/// fields is a logic error and panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(Rational),
    P(ModP),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::P(m) => Field::Prime(m.modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::P(m) => m.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::P(m) => m.value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Q(r) => r.recip().map(Scalar::Q),
            Scalar::P(m) => m.inv().map(Scalar::P),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Q(r) => Some(r),
            Scalar::P(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{r}"),
            Scalar::P(m) => write!(f, "{} mod {}", m.value, m.modulus),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for ModP {
    type Output = ModP;
    fn add(self, rhs: ModP) -> ModP {
        self.check(&rhs);
        let s = self.value as u128 + rhs.value as u128;
        ModP { value: (s % self.modulus as u128) as u64, modulus: self.modulus }
    }
}

impl Sub for ModP {
    type Output = ModP;
    fn sub(self, rhs: ModP) -> ModP {
        self.check(&rhs);
        let s = self.value as u128 + self.modulus as u128 - rhs.value as u128;
        ModP { value: (s % self.modulus as u128) as u64, modulus: self.modulus }
    }
}

impl Mul for ModP {
    type Output = ModP;
    fn mul(self, rhs: ModP) -> ModP {
        self.check(&rhs);
        let s = self.value as u128 * rhs.value as u128;
        ModP { value: (s % self.modulus as u128) as u64, modulus: self.modulus }
    }
}

impl Neg for ModP {
    type Output = ModP;
    fn neg(self) -> ModP {
        ModP { value: (self.modulus - self.value) % self.modulus, modulus: self.modulus }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a $op b),
                    (Scalar::P(a), Scalar::P(b)) => Scalar::P(*a $op *b),
                    _ => panic!("mixed fields in scalar arithmetic"),
                }
            }
        }

        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                &self $op &rhs
            }
        }

        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                &self $op rhs
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero")
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(r) => Scalar::Q(-r),
            Scalar::P(m) => Scalar::P(-*m),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::one()
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        &self + &rhs
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        &self * &rhs
    }
}
