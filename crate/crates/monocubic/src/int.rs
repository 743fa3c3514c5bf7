//! Small exact-integer helpers shared by the enumeration and census loops:
//! floor square/cube roots, perfect-power tests, and deterministic
//! factorization of the 64-bit range.

use alloc::vec::Vec;

/// Floor of the square root of a nonnegative `i128`.
pub fn isqrt_i128(n: i128) -> i128 {
    assert!(n >= 0, "isqrt of negative");
    if n == 0 {
        return 0;
    }
    // f64 seed then exact Newton polish; f64 sqrt is correct to ~52 bits so
    // two corrections cover the full i128 range.
    let mut x = libm::sqrt(n as f64) as i128 + 1;
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            break;
        }
        x = y;
    }
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Floor of the cube root, any sign: icbrt(-28) = -4, icbrt(-27) = -3.
pub fn icbrt_i128(n: i128) -> i128 {
    if n < 0 {
        let x = icbrt_i128_nonneg(-n);
        return if x * x * x == -n { -x } else { -x - 1 };
    }
    icbrt_i128_nonneg(n)
}

fn icbrt_i128_nonneg(n: i128) -> i128 {
    if n == 0 {
        return 0;
    }
    let cube_fits = |x: i128| x.checked_mul(x).and_then(|s| s.checked_mul(x));
    let mut x = (libm::cbrt(n as f64) as i128 + 2).max(1);
    while cube_fits(x).map(|c| c > n).unwrap_or(true) {
        x -= 1;
    }
    while cube_fits(x + 1).map(|c| c <= n).unwrap_or(false) {
        x += 1;
    }
    x
}

/// Exact square test; returns the root when `n` is a perfect square.
pub fn perfect_square(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    // quadratic-residue rejection mod 64 kills 75% of non-squares cheaply
    const QR64: u64 = {
        let mut mask = 0u64;
        let mut i = 0u64;
        while i < 64 {
            mask |= 1 << ((i * i) % 64);
            i += 1;
        }
        mask
    };
    if QR64 & (1u64 << ((n as u64) & 63)) == 0 {
        return None;
    }
    let r = isqrt_i128(n);
    (r * r == n).then_some(r)
}

/// gcd on i64 without sign surprises.
pub fn gcd_i64(a: i64, b: i64) -> i64 {
    num_integer::Integer::gcd(&a, &b).abs()
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // this witness set is exact below 3.3 * 10^24
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Factorization failure: the budget ran out before the cofactor split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationLimit {
    pub remaining_cofactor: u64,
}

/// Factor a u64 into (prime, exponent) pairs, ascending. Trial division to
/// 10^6, then Pollard rho with Brent cycling; rho on a 64-bit composite with
/// Miller-Rabin certified inputs does not fail in practice, but the error is
/// surfaced rather than looping forever.
pub fn factor_u64(mut n: u64) -> Result<Vec<(u64, u32)>, FactorizationLimit> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |out: &mut Vec<(u64, u32)>, p: u64| {
        if let Some(last) = out.last_mut() {
            if last.0 == p {
                last.1 += 1;
                return;
            }
        }
        out.push((p, 1));
    };
    for p in [2u64, 3, 5] {
        while n % p == 0 {
            push(&mut out, p);
            n /= p;
        }
    }
    let mut d = 7u64;
    let wheel = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut wi = 0;
    while d <= 1_000_000 && d * d <= n {
        while n % d == 0 {
            push(&mut out, d);
            n /= d;
        }
        d += wheel[wi];
        wi = (wi + 1) % 8;
    }
    let mut stack: Vec<u64> = Vec::new();
    if n > 1 {
        stack.push(n);
    }
    let mut rho_budget = 64u32;
    let mut found: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            found.push(m);
            continue;
        }
        match pollard_rho(m, &mut rho_budget) {
            Some(f) => {
                stack.push(f);
                stack.push(m / f);
            }
            None => return Err(FactorizationLimit { remaining_cofactor: m }),
        }
    }
    found.sort_unstable();
    for p in found {
        push(&mut out, p);
    }
    out.sort_unstable();
    Ok(out)
}

fn pollard_rho(n: u64, budget: &mut u32) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let mut c = 1u64;
    while *budget > 0 {
        *budget -= 1;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let f = |v: u64| (mul_mod_u64(v, v, n) + c) % n;
        let mut steps = 0u64;
        while d == 1 && steps < 1 << 22 {
            x = f(x);
            y = f(f(y));
            d = num_integer::Integer::gcd(&x.abs_diff(y), &n);
            steps += 1;
        }
        if d != n && d != 1 {
            return Some(d);
        }
        c += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_and_squares() {
        for n in 0..2000i128 {
            let r = isqrt_i128(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
            let c = icbrt_i128(n);
            assert!(c * c * c <= n && (c + 1) * (c + 1) * (c + 1) > n);
            assert_eq!(perfect_square(n).is_some(), r * r == n);
        }
        assert_eq!(icbrt_i128(-27), -3);
        assert_eq!(icbrt_i128(-28), -4);
        let big = (1i128 << 100) - 1;
        let r = isqrt_i128(big);
        assert!(r * r <= big && (r + 1) * (r + 1) > big);
    }

    #[test]
    fn factoring() {
        assert_eq!(factor_u64(1).unwrap(), alloc::vec![]);
        assert_eq!(factor_u64(2 * 2 * 3 * 97).unwrap(), alloc::vec![(2, 2), (3, 1), (97, 1)]);
        let n = 1_000_003u64 * 998_117;
        assert_eq!(factor_u64(n).unwrap(), alloc::vec![(998_117, 1), (1_000_003, 1)]);
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(18_446_744_073_709_551_555));
    }
}
