//! Integer arithmetic shared by every other module: factoring, modular
//! helpers, power-free reduction, coprime factor splits and power-residue
//! tables.
//!
//! Everything here is exact. Values that can exceed 64 bits are carried in
//! `u128`/`i128` with checked operations; rational curve arithmetic lives in
//! [`crate::elliptic`] on top of `num-bigint`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// `n = k^4 * n_prime` with `n_prime` free of fourth powers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerFreeDecomp {
    pub k: u64,
    pub n_prime: u64,
}

/// Split off the largest fourth power dividing `n`.
pub fn fourth_power_free(n: u64) -> PowerFreeDecomp {
    assert!(n >= 1, "fourth_power_free needs n >= 1");
    let mut k = 1u64;
    let mut n_prime = 1u64;
    for (p, e) in factorize(n) {
        k *= p.pow(e / 4);
        n_prime *= p.pow(e % 4);
    }
    PowerFreeDecomp { k, n_prime }
}

/// True when no prime to the fourth power divides `n`.
pub fn is_fourth_power_free(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e < 4)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Least non-negative residue of a signed value.
pub fn reduce(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(mut n: i128, p: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let p = p as i128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Legendre symbol for odd prime `p`: 0, 1 or -1.
pub fn legendre(a: i128, p: u64) -> i32 {
    let r = reduce(a, p);
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// A square root of -1 modulo a prime `p ≡ 1 (mod 4)`.
pub fn sqrt_minus_one(p: u64) -> u64 {
    assert!(p % 4 == 1, "-1 is a square only modulo p = 1 mod 4");
    for g in 2..p {
        let r = pow_mod(g, (p - 1) / 4, p);
        if mul_mod(r, r, p) == p - 1 {
            return r;
        }
    }
    unreachable!("no square root of -1 modulo {p}")
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
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

fn pollard_brent(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
        let mut x = y;
        let mut ys = y;
        let m = 64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Prime factorization, sorted by prime. `factorize(1)` is empty.
///
/// Small primes are removed by trial division; whatever composite cofactor
/// remains is split with Pollard-Brent.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize needs n >= 1");
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p < 1000 && p * p <= n {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    split_into(n, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((r, e)) if *r == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

/// Distinct prime divisors.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// All primes `<= bound` in increasing order.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

/// Ordered pairs `(d, e)` with `d * e = n` and `gcd(d, e) = 1`, sorted by `d`.
pub fn coprime_split(n: u64) -> Vec<(u64, u64)> {
    assert!(n >= 1, "coprime_split needs n >= 1");
    let powers: Vec<u64> = factorize(n).into_iter().map(|(p, e)| p.pow(e)).collect();
    let mut out = Vec::with_capacity(1 << powers.len());
    for mask in 0u32..(1 << powers.len()) {
        let d: u64 = powers
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, q)| *q)
            .product();
        out.push((d, n / d));
    }
    out.sort_unstable();
    out
}

/// The coprime shapes `(d, e)` of `m = d U^4`, `n = e V^4` for coprime
/// solutions of `2mn = A u^4`.
///
/// For even `A` this is `coprime_split(A / 2)`. For odd `A` the variable `u`
/// must be even, which moves a factor 8 into the split: `coprime_split(8A)`.
pub fn two_monomial_split(a: u64) -> Vec<(u64, u64)> {
    assert!(a >= 1, "two_monomial_split needs A >= 1");
    if a % 2 == 0 {
        coprime_split(a / 2)
    } else {
        coprime_split(8 * a)
    }
}

/// Floor of the k-th root.
pub fn iroot(n: u128, k: u32) -> u128 {
    assert!(k >= 1);
    if n < 2 || k == 1 {
        return n;
    }
    // Initial guess from the bit length, then Newton from above.
    let bits = 128 - n.leading_zeros();
    let mut x: u128 = 1u128 << bits.div_ceil(k).min(127);
    loop {
        let xk1 = match x.checked_pow(k - 1) {
            Some(v) => v,
            None => {
                x >>= 1;
                continue;
            }
        };
        let y = ((k as u128 - 1) * x + n / xk1) / k as u128;
        if y >= x {
            break;
        }
        x = y;
    }
    while x.checked_pow(k).is_none_or(|v| v > n) {
        x -= 1;
    }
    while (x + 1).checked_pow(k).is_some_and(|v| v <= n) {
        x += 1;
    }
    x
}

/// `Some(r)` with `r^k = n` when `n` is a perfect k-th power.
pub fn is_kth_power(n: u128, k: u32) -> Option<u128> {
    let r = iroot(n, k);
    (r.checked_pow(k) == Some(n)).then_some(r)
}

/// Signed variant: negative values are k-th powers only for odd `k`.
pub fn is_kth_power_signed(n: i128, k: u32) -> Option<i128> {
    if n >= 0 {
        is_kth_power(n as u128, k).map(|r| r as i128)
    } else if k % 2 == 1 {
        is_kth_power(n.unsigned_abs(), k).map(|r| -(r as i128))
    } else {
        None
    }
}

/// Squarefree kernel of a positive integer (product of primes to odd power).
pub fn squarefree_part(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .filter(|(_, e)| e % 2 == 1)
        .map(|(p, _)| p)
        .product()
}

/// The set `{ x^e mod p^k : 0 <= x < p^k }` as a bitmap.
#[derive(Clone, Debug)]
pub struct ResidueTable {
    pub modulus: u64,
    pub exponent: u32,
    members: Vec<bool>,
}

impl ResidueTable {
    pub fn new(modulus: u64, exponent: u32) -> Self {
        Self::scaled(modulus, exponent, 1, false)
    }

    /// `{ c * x^e mod m }`, optionally with `x` restricted to units.
    pub fn scaled(modulus: u64, exponent: u32, coef: i128, units_only: bool) -> Self {
        let mut members = vec![false; modulus as usize];
        let c = reduce(coef, modulus);
        let mut seen = vec![false; modulus as usize];
        for x in 0..modulus {
            if units_only && x.gcd(&modulus) != 1 {
                continue;
            }
            let xe = pow_mod(x, exponent as u64, modulus);
            if seen[xe as usize] {
                continue;
            }
            seen[xe as usize] = true;
            members[mul_mod(c, xe, modulus) as usize] = true;
        }
        ResidueTable {
            modulus,
            exponent,
            members,
        }
    }

    pub fn contains(&self, r: u64) -> bool {
        self.members[(r % self.modulus) as usize]
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u64)
    }
}
