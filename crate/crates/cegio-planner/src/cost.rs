//! Exact arithmetic for path lengths.
//!
//! A Euclidean path length is a sum of square roots of rationals, which is
//! irrational in general. [`Cost`] represents such values exactly as a
//! rational linear combination of square roots of distinct squarefree
//! integers: Σ qᵢ·√sᵢ. Terms with equal squarefree radicands merge, so a
//! value is zero if and only if it has no terms (square roots of distinct
//! squarefree integers are linearly independent over the rationals). Sign
//! determination for nonzero values uses a float filter backed by exact
//! interval refinement, so comparisons are precise: `a < b` answers the real
//! mathematical question, never a float approximation of it.
//!
//! This is what lets an optimality certificate be exact: a query bound equal
//! to the true grid optimum is decided UNSAT, while optimum plus any positive
//! amount is decided SAT.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact value of the form Σ qᵢ·√sᵢ with qᵢ rational and sᵢ distinct
/// squarefree positive integers (s = 1 carries the rational part).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cost {
    terms: BTreeMap<BigUint, BigRational>,
}

impl Cost {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(value: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(BigUint::one(), value);
        }
        Self { terms }
    }

    pub fn from_integer(value: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(value)))
    }

    /// Exact square root of a non-negative rational.
    ///
    /// √(a/b) = √(a·b)/b; the radicand is reduced to squarefree form so that
    /// equal values always share one representation.
    pub fn sqrt_rational(value: &BigRational) -> Self {
        assert!(!value.is_negative(), "square root of a negative rational");
        if value.is_zero() {
            return Self::zero();
        }
        let a = value.numer().magnitude().clone();
        let b = value.denom().magnitude().clone();
        let radicand = &a * &b;
        let (outside, inside) = squarefree_decompose(&radicand);
        let coeff = BigRational::new(BigInt::from(outside), BigInt::from(b));
        let mut terms = BTreeMap::new();
        terms.insert(inside, coeff);
        Self { terms }.normalized()
    }

    fn normalized(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The exact rational value, when the cost happens to be rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            let (rad, coeff) = self.terms.iter().next().unwrap();
            if rad.is_one() {
                return Some(coeff.clone());
            }
        }
        None
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(rad, coeff)| (rad.clone(), coeff * factor))
                .collect(),
        }
    }

    /// Sign of the exact value.
    pub fn sign(&self) -> Ordering {
        if self.terms.is_empty() {
            return Ordering::Equal;
        }
        if self.terms.len() == 1 {
            // √s > 0, so the sign is the coefficient's.
            let coeff = self.terms.values().next().unwrap();
            return if coeff.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
        if let Some(sign) = self.float_filter_sign() {
            return sign;
        }
        // The value is nonzero (structural zero was handled above), so
        // interval refinement separates it from zero in finitely many rounds.
        let mut bits = 64u32;
        loop {
            let (lo, hi) = self.bounds(bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    /// Fast sign check in floating point with a conservative error margin.
    /// Returns `None` when the estimate is too close to zero to be trusted.
    fn float_filter_sign(&self) -> Option<Ordering> {
        let mut est = 0.0f64;
        let mut mag = 0.0f64;
        for (rad, coeff) in &self.terms {
            let c = coeff.to_f64()?;
            let r = rad.to_f64()?.sqrt();
            est += c * r;
            mag += c.abs() * r;
        }
        if !est.is_finite() || !mag.is_finite() {
            return None;
        }
        let margin = mag * 1e-9;
        if est > margin {
            Some(Ordering::Greater)
        } else if est < -margin {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Exact rational enclosure of the value with √s bracketed to 2^-bits.
    fn bounds(&self, bits: u32) -> (BigRational, BigRational) {
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (rad, coeff) in &self.terms {
            let (sqrt_lo, sqrt_hi) = sqrt_bounds(rad, bits);
            if coeff.is_positive() {
                lo += coeff * &sqrt_lo;
                hi += coeff * &sqrt_hi;
            } else {
                lo += coeff * &sqrt_hi;
                hi += coeff * &sqrt_lo;
            }
        }
        (lo, hi)
    }

    /// Approximate value, for display and reporting only.
    pub fn to_f64(&self) -> f64 {
        // the explicit seed avoids f64 Sum's -0.0 identity showing up in
        // formatted output
        self.terms.iter().fold(0.0, |acc, (rad, coeff)| {
            acc + coeff.to_f64().unwrap_or(f64::NAN) * rad.to_f64().unwrap_or(f64::NAN).sqrt()
        })
    }

    /// Largest multiple of 10^-places that does not exceed the value; exact
    /// rationals are returned unchanged (no approximation at all).
    pub fn lower_bound_decimal(&self, places: u32) -> BigRational {
        if let Some(r) = self.as_rational() {
            return r;
        }
        let scale = BigInt::from(10u32).pow(places);
        let scale_rat = BigRational::from_integer(scale.clone());
        let mut bits = 64u32;
        loop {
            let (lo, hi) = self.bounds(bits);
            let lo_floor = (lo * &scale_rat).floor().to_integer();
            let hi_floor = (hi * &scale_rat).floor().to_integer();
            if lo_floor == hi_floor {
                return BigRational::new(lo_floor, scale);
            }
            // The scaled value is irrational, hence not an integer: the
            // enclosure eventually lands strictly inside one unit interval.
            bits *= 2;
        }
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        &self + &rhs
    }
}

impl Add for &Cost {
    type Output = Cost;
    fn add(self, rhs: &Cost) -> Cost {
        let mut terms = self.terms.clone();
        for (rad, coeff) in &rhs.terms {
            let entry = terms.entry(rad.clone()).or_insert_with(BigRational::zero);
            *entry += coeff;
        }
        Cost { terms }.normalized()
    }
}

impl Sub for Cost {
    type Output = Cost;
    fn sub(self, rhs: Cost) -> Cost {
        &self - &rhs
    }
}

impl Sub for &Cost {
    type Output = Cost;
    fn sub(self, rhs: &Cost) -> Cost {
        self + &(-rhs)
    }
}

impl Neg for Cost {
    type Output = Cost;
    fn neg(self) -> Cost {
        -&self
    }
}

impl Neg for &Cost {
    type Output = Cost;
    fn neg(self) -> Cost {
        Cost {
            terms: self
                .terms
                .iter()
                .map(|(rad, coeff)| (rad.clone(), -coeff))
                .collect(),
        }
    }
}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// √s enclosure: returns rationals lo ≤ √s ≤ hi with hi − lo = 2^-bits.
fn sqrt_bounds(s: &BigUint, bits: u32) -> (BigRational, BigRational) {
    let shifted = s << (2 * bits as usize);
    let root = shifted.sqrt();
    let den = BigInt::from(BigUint::one() << bits as usize);
    let lo = BigRational::new(BigInt::from(root.clone()), den.clone());
    let hi = BigRational::new(BigInt::from(root + BigUint::one()), den);
    (lo, hi)
}

/// Writes n = outside²·inside with inside squarefree.
///
/// Radicands that fit in a u64 (all of them, in practice: they are squared
/// grid distances) go through machine-word factorization with a per-thread
/// memo table, since the same radicands recur millions of times during
/// branch-and-bound search.
fn squarefree_decompose(n: &BigUint) -> (BigUint, BigUint) {
    use num_traits::ToPrimitive;
    if let Some(small) = n.to_u64() {
        let (outside, inside) = SQUAREFREE_CACHE.with(|cache| {
            if let Some(&hit) = cache.borrow().get(&small) {
                return hit;
            }
            let computed = squarefree_u64(small);
            cache.borrow_mut().insert(small, computed);
            computed
        });
        return (BigUint::from(outside), BigUint::from(inside));
    }
    let mut outside = BigUint::one();
    let mut inside = BigUint::one();
    for (prime, mut exp) in factorize(n.clone()) {
        if exp >= 2 {
            outside *= prime.pow(exp / 2);
            exp %= 2;
        }
        if exp == 1 {
            inside *= prime;
        }
    }
    (outside, inside)
}

thread_local! {
    static SQUAREFREE_CACHE: std::cell::RefCell<std::collections::HashMap<u64, (u64, u64)>> =
        std::cell::RefCell::new(std::collections::HashMap::new());
}

fn squarefree_u64(n: u64) -> (u64, u64) {
    let mut outside = 1u64;
    let mut inside = 1u64;
    for (prime, exp) in factorize_u64(n) {
        outside *= prime.pow(exp / 2);
        if exp % 2 == 1 {
            inside *= prime;
        }
    }
    (outside, inside)
}

fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut factors: BTreeMap<u64, u32> = BTreeMap::new();
    if n < 2 {
        return Vec::new();
    }
    for d in [2u64, 3, 5, 7, 11, 13] {
        while n.is_multiple_of(d) {
            n /= d;
            *factors.entry(d).or_insert(0) += 1;
        }
    }
    let mut stack = Vec::new();
    if n > 1 {
        stack.push(n);
    }
    while let Some(m) = stack.pop() {
        if is_prime_u64(m) {
            *factors.entry(m).or_insert(0) += 1;
            continue;
        }
        let f = pollard_rho_u64(m);
        stack.push(f);
        stack.push(m / f);
    }
    factors.into_iter().collect()
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all u64.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let trailing = (n - 1).trailing_zeros();
    let odd = (n - 1) >> trailing;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, odd, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..trailing {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent-style rho for odd composites with no factor ≤ 13.
fn pollard_rho_u64(n: u64) -> u64 {
    for c in 1u64.. {
        let step = |x: u64| (mulmod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = step(x);
            y = step(step(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Complete factorization: trial division for small primes, then
/// Miller–Rabin + Pollard's rho for what remains.
fn factorize(mut n: BigUint) -> Vec<(BigUint, u32)> {
    let mut factors: BTreeMap<BigUint, u32> = BTreeMap::new();
    if n.is_zero() || n.is_one() {
        return Vec::new();
    }
    let mut d = 2u64;
    while d <= 1000 {
        let divisor = BigUint::from(d);
        if (&divisor * &divisor) > n {
            break;
        }
        while (&n % &divisor).is_zero() {
            n /= &divisor;
            *factors.entry(divisor.clone()).or_insert(0) += 1;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = Vec::new();
    if !n.is_one() {
        stack.push(n);
    }
    while let Some(m) = stack.pop() {
        if is_prime(&m) {
            *factors.entry(m).or_insert(0) += 1;
            continue;
        }
        let f = pollard_rho(&m);
        stack.push(&m / &f);
        stack.push(f);
    }
    factors.into_iter().collect()
}

/// Miller–Rabin with the witness set that is deterministic below 2^64
/// (radicands here are far smaller).
fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = BigUint::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - BigUint::one();
    let trailing = n_minus_one.trailing_zeros().unwrap_or(0);
    let odd = &n_minus_one >> trailing as usize;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigUint::from(a).modpow(&odd, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..trailing {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard's rho (Brent variant) for odd composites with no factor ≤ 1000.
fn pollard_rho(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = one.clone();
        while d.is_one() {
            x = (&x * &x + &c) % n;
            y = (&y * &y + &c) % n;
            y = (&y * &y + &c) % n;
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if !d.is_one() && &d != n {
            return d;
        }
        c += &one;
    }
}
