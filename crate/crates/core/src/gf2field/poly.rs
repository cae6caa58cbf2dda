//! Polynomials over F2 packed into `u128`, with the irreducibility and
//! primitivity tests used by modulus selection.

pub(crate) fn degree(p: u128) -> i32 {
    127 - p.leading_zeros() as i32
}

/// Carry-less product of two polynomials of degree below 64.
pub(crate) fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let a = a as u128;
    let mut b = b;
    while b != 0 {
        let j = b.trailing_zeros();
        acc ^= a << j;
        b &= b - 1;
    }
    acc
}

/// Remainder of `a` modulo `m` (`m` nonzero).
pub(crate) fn rem(mut a: u128, m: u128) -> u128 {
    let dm = degree(m);
    while a != 0 {
        let da = degree(a);
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

pub(crate) fn mulmod(a: u64, b: u64, m: u128) -> u64 {
    rem(clmul(a, b), m) as u64
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// `x^(2^k) mod f`.
fn x_pow_2k(k: u32, f: u128) -> u64 {
    let mut r = rem(2, f) as u64;
    for _ in 0..k {
        r = mulmod(r, r, f);
    }
    r
}

pub(crate) fn powmod(base: u64, mut e: u64, f: u128) -> u64 {
    let mut acc = rem(1, f) as u64;
    let mut b = base;
    while e != 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, f);
        }
        b = mulmod(b, b, f);
        e >>= 1;
    }
    acc
}

fn prime_divisors_small(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: `f` of degree `m` is irreducible iff `x^(2^m) = x mod f`
/// and `gcd(x^(2^(m/p)) - x, f) = 1` for every prime `p | m`.
pub fn is_irreducible(f: u128) -> bool {
    let m = degree(f);
    if m < 1 {
        return false;
    }
    let m = m as u32;
    if m == 1 {
        return true;
    }
    if f & 1 == 0 {
        return false;
    }
    if x_pow_2k(m, f) != 2 {
        return false;
    }
    for p in prime_divisors_small(m as u64) {
        let g = x_pow_2k(m / p as u32, f) ^ 2;
        if degree(gcd(f, g as u128)) > 0 {
            return false;
        }
    }
    true
}

/// Whether the residue of `x` has order `2^m - 1` modulo the irreducible `f`.
pub fn is_primitive(f: u128) -> bool {
    let m = degree(f) as u32;
    let order = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    if order == 1 {
        return true;
    }
    let x = rem(2, f) as u64;
    if powmod(x, order, f) != 1 {
        return false;
    }
    factor::prime_divisors(order)
        .into_iter()
        .all(|p| powmod(x, order / p, f) != 1)
}

/// Distinct prime divisors of 64-bit integers (trial division, then
/// Miller-Rabin and Pollard-Brent for large cofactors).
pub(crate) mod factor {
    fn mul(a: u64, b: u64, n: u64) -> u64 {
        ((a as u128 * b as u128) % n as u128) as u64
    }

    fn pow(mut b: u64, mut e: u64, n: u64) -> u64 {
        let mut r = 1 % n;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b, n);
            }
            b = mul(b, b, n);
            e >>= 1;
        }
        r
    }

    pub fn is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            if n.is_multiple_of(p) {
                return n == p;
            }
        }
        let mut d = n - 1;
        let mut s = 0;
        while d.is_multiple_of(2) {
            d /= 2;
            s += 1;
        }
        'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            let mut x = pow(a, d, n);
            if x == 1 || x == n - 1 {
                continue;
            }
            for _ in 1..s {
                x = mul(x, x, n);
                if x == n - 1 {
                    continue 'witness;
                }
            }
            return false;
        }
        true
    }

    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let r = a % b;
            a = b;
            b = r;
        }
        a
    }

    fn pollard_brent(n: u64) -> u64 {
        if n.is_multiple_of(2) {
            return 2;
        }
        let mut c = 1u64;
        loop {
            let f = |x: u64| (mul(x, x, n) + c) % n;
            let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
            while d == 1 {
                x = f(x);
                y = f(f(y));
                d = gcd(x.abs_diff(y), n);
            }
            if d != n {
                return d;
            }
            c += 1;
        }
    }

    fn split(n: u64, out: &mut Vec<u64>) {
        if n == 1 {
            return;
        }
        if is_prime(n) {
            out.push(n);
            return;
        }
        let d = pollard_brent(n);
        split(d, out);
        split(n / d, out);
    }

    pub fn prime_divisors(mut n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut p = 2u64;
        while p < 10_000 && p * p <= n {
            if n.is_multiple_of(p) {
                out.push(p);
                while n.is_multiple_of(p) {
                    n /= p;
                }
            }
            p += 1;
        }
        let mut big = Vec::new();
        split(n, &mut big);
        out.extend(big);
        out.sort_unstable();
        out.dedup();
        out
    }
}
