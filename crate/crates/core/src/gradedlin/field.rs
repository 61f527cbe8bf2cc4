//! Coefficient fields: exact rationals with a machine-word fast path, and prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arithmetic shared by the elimination routines. Prime fields carry their
/// modulus in the context so that elements stay a single word.
pub trait Field: Clone + Send + Sync + std::fmt::Debug {
    type Ctx: Copy + Send + Sync;

    fn from_i64(v: i64, ctx: Self::Ctx) -> Self;
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self, ctx: Self::Ctx) -> Self;
    fn sub(&self, o: &Self, ctx: Self::Ctx) -> Self;
    fn mul(&self, o: &Self, ctx: Self::Ctx) -> Self;
    fn neg(&self, ctx: Self::Ctx) -> Self;
    /// Multiplicative inverse; callers never pass zero.
    fn inv(&self, ctx: Self::Ctx) -> Self;
    fn is_one(&self) -> bool;
}

/// A rational number, kept in two `i64`s until that stops fitting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Q {
    Small(i64, i64),
    Big(Box<BigRational>),
}

fn make_small(n: i128, d: i128) -> Q {
    let (mut n, mut d) = (n, d);
    if d < 0 {
        n = -n;
        d = -d;
    }
    let g = n.gcd(&d);
    if g > 1 {
        n /= g;
        d /= g;
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(a), Ok(b)) => Q::Small(a, b),
        _ => Q::Big(Box::new(BigRational::new(BigInt::from(n), BigInt::from(d)))),
    }
}

fn from_big(r: BigRational) -> Q {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(a), Some(b)) => Q::Small(a, b),
        _ => Q::Big(Box::new(r)),
    }
}

impl Q {
    pub fn to_big(&self) -> BigRational {
        match self {
            Q::Small(n, d) => BigRational::new(BigInt::from(*n), BigInt::from(*d)),
            Q::Big(b) => (**b).clone(),
        }
    }

    pub fn numer_denom(&self) -> (BigInt, BigInt) {
        match self {
            Q::Small(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Q::Big(b) => (b.numer().clone(), b.denom().clone()),
        }
    }

    fn binop(
        &self,
        o: &Q,
        small: impl Fn(i128, i128, i128, i128) -> Option<(i128, i128)>,
        big: impl Fn(BigRational, BigRational) -> BigRational,
    ) -> Q {
        if let (Q::Small(a, b), Q::Small(c, d)) = (self, o) {
            if let Some((n, m)) = small(*a as i128, *b as i128, *c as i128, *d as i128) {
                return make_small(n, m);
            }
        }
        from_big(big(self.to_big(), o.to_big()))
    }
}

impl Field for Q {
    type Ctx = ();

    fn from_i64(v: i64, _: ()) -> Self {
        Q::Small(v, 1)
    }
    fn zero() -> Self {
        Q::Small(0, 1)
    }
    fn is_zero(&self) -> bool {
        match self {
            Q::Small(n, _) => *n == 0,
            Q::Big(b) => b.is_zero(),
        }
    }
    fn is_one(&self) -> bool {
        matches!(self, Q::Small(1, 1))
    }
    fn add(&self, o: &Self, _: ()) -> Self {
        self.binop(
            o,
            |a, b, c, d| {
                if b == d {
                    Some((a.checked_add(c)?, b))
                } else {
                    Some((a.checked_mul(d)?.checked_add(c.checked_mul(b)?)?, b.checked_mul(d)?))
                }
            },
            |x, y| x + y,
        )
    }
    fn sub(&self, o: &Self, _: ()) -> Self {
        self.add(&o.neg(()), ())
    }
    fn mul(&self, o: &Self, _: ()) -> Self {
        self.binop(
            o,
            |a, b, c, d| Some((a.checked_mul(c)?, b.checked_mul(d)?)),
            |x, y| x * y,
        )
    }
    fn neg(&self, _: ()) -> Self {
        match self {
            Q::Small(n, d) if *n != i64::MIN => Q::Small(-n, *d),
            _ => from_big(-self.to_big()),
        }
    }
    fn inv(&self, _: ()) -> Self {
        match self {
            Q::Small(n, d) => make_small(*d as i128, *n as i128),
            Q::Big(b) => from_big(b.recip()),
        }
    }
}

/// Residue modulo the prime in the context.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp(pub u32);

impl Field for Fp {
    type Ctx = u32;

    fn from_i64(v: i64, p: u32) -> Self {
        Fp(v.rem_euclid(p as i64) as u32)
    }
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn is_one(&self) -> bool {
        self.0 == 1
    }
    fn add(&self, o: &Self, p: u32) -> Self {
        Fp(((self.0 as u64 + o.0 as u64) % p as u64) as u32)
    }
    fn sub(&self, o: &Self, p: u32) -> Self {
        Fp(((self.0 as u64 + p as u64 - o.0 as u64) % p as u64) as u32)
    }
    fn mul(&self, o: &Self, p: u32) -> Self {
        Fp(((self.0 as u64 * o.0 as u64) % p as u64) as u32)
    }
    fn neg(&self, p: u32) -> Self {
        Fp(if self.0 == 0 { 0 } else { p - self.0 })
    }
    fn inv(&self, p: u32) -> Self {
        // Fermat
        let (mut base, mut e, mut acc) = (self.0 as u64, p as u64 - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        Fp(acc as u32)
    }
}

/// Clears denominators of a rational vector and divides out the content.
/// Returns `None` if an entry does not fit in an `i64`.
pub fn integerize(v: &[(u32, Q)]) -> Option<Vec<(u32, i64)>> {
    let mut l = BigInt::one();
    for (_, q) in v {
        let (_, d) = q.numer_denom();
        l = l.lcm(&d);
    }
    let mut nums: Vec<(u32, BigInt)> = v
        .iter()
        .map(|(i, q)| {
            let (n, d) = q.numer_denom();
            (*i, n * (&l / d))
        })
        .collect();
    let mut g = BigInt::zero();
    for (_, n) in &nums {
        g = g.gcd(n);
    }
    if !g.is_zero() && !g.is_one() {
        for (_, n) in nums.iter_mut() {
            *n = &*n / &g;
        }
    }
    // leading entry positive, for reproducible output
    if nums.first().is_some_and(|(_, n)| n.is_negative()) {
        for (_, n) in nums.iter_mut() {
            *n = -&*n;
        }
    }
    nums.into_iter().map(|(i, n)| n.to_i64().map(|n| (i, n))).collect()
}
