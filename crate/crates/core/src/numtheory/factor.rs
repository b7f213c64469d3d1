use std::collections::BTreeMap;

use num_bigint::BigUint;

/// A positive integer with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredNat {
    pub value: BigUint,
    pub factors: BTreeMap<u128, u32>,
}

impl FactoredNat {
    /// Product of the distinct primes dividing the value.
    pub fn radical(&self) -> BigUint {
        self.factors.keys().map(|&p| BigUint::from(p)).product()
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.keys().copied()
    }

    /// Multiplies the factorization back out.
    pub fn expand(&self) -> BigUint {
        self.factors
            .iter()
            .map(|(&p, &e)| BigUint::from(p).pow(e))
            .product()
    }
}

const TRIAL_LIMIT: u128 = 1_000_000;

// Deterministic below 3.3e24; beyond that a strong-pseudoprime test to many bases.
const WITNESSES: [u128; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];
const DETERMINISTIC_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return a * b % m;
    }
    // double-and-add; every intermediate stays below 2m < 2^129 only if we
    // reduce with overflow checks
    let (mut a, mut b, mut acc) = (a % m, b, 0u128);
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
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

fn strong_probable_prime(n: u128, a: u128) -> bool {
    let d0 = n - 1;
    let s = d0.trailing_zeros();
    let d = d0 >> s;
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Miller–Rabin primality test.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let bases = if n < DETERMINISTIC_BOUND { &WITNESSES[..13] } else { &WITNESSES[..] };
    bases.iter().all(|&a| strong_probable_prime(n, a))
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's variant of Pollard's rho. `n` must be an odd composite.
fn pollard_brent(n: u128) -> u128 {
    let mut c = 1u128;
    loop {
        let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
        let (mut y, mut r, mut q, mut g) = (2u128, 1u64, 1u128, 1u128);
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn integer_root(n: u128, k: u32) -> u128 {
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u128;
    let pow_le = |r: u128| r.checked_pow(k).is_some_and(|v| v <= n);
    while r > 0 && !pow_le(r) {
        r -= 1;
    }
    while pow_le(r + 1) {
        r += 1;
    }
    r
}

/// Largest `k` with `n = r^k`, if `k >= 2`.
fn perfect_power(n: u128) -> Option<(u128, u32)> {
    (2..=127u32)
        .rev()
        .filter(|&k| k <= 128 - n.leading_zeros())
        .find_map(|k| {
            let r = integer_root(n, k);
            (r > 1 && r.pow(k) == n).then_some((r, k))
        })
}

fn split_into(n: u128, out: &mut BTreeMap<u128, u32>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    if let Some((root, k)) = perfect_power(n) {
        let mut inner = BTreeMap::new();
        split_into(root, &mut inner);
        for (p, e) in inner {
            *out.entry(p).or_insert(0) += e * k;
        }
        return;
    }
    let d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Full factorization: trial division up to 10^6, then Miller–Rabin and
/// Pollard–Brent on the remaining cofactor.
pub fn factor(n: u128) -> FactoredNat {
    assert!(n >= 1, "factor expects a positive integer");
    let mut factors = BTreeMap::new();
    let mut m = n;
    let mut push = |m: &mut u128, p: u128| {
        let mut e = 0;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            factors.insert(p, e);
        }
    };
    push(&mut m, 2);
    let mut p = 3u128;
    while p <= TRIAL_LIMIT && p * p <= m {
        push(&mut m, p);
        p += 2;
    }
    if m > 1 {
        if p * p > m {
            factors.insert(m, 1);
        } else {
            split_into(m, &mut factors);
        }
    }
    FactoredNat {
        value: BigUint::from(n),
        factors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn fixtures() {
        assert!(factor(1).factors.is_empty());
        assert_eq!(
            factor(360).factors,
            BTreeMap::from([(2, 3), (3, 2), (5, 1)])
        );
        assert_eq!(factor(1_000_003).factors, BTreeMap::from([(1_000_003, 1)]));
        assert_eq!(factor(97).radical(), BigUint::from(97u32));
    }

    #[test]
    fn large_semiprimes_and_primes() {
        // both factors above the trial-division range
        let (p, q) = (1_000_000_007u128, 998_244_353u128);
        assert_eq!(factor(p * q).factors, BTreeMap::from([(q, 1), (p, 1)]));
        let m61 = (1u128 << 61) - 1;
        assert!(is_prime(m61));
        assert_eq!(factor(m61 * m61).factors, BTreeMap::from([(m61, 2)]));
        let m89 = (1u128 << 89) - 1;
        assert!(is_prime(m89));
        assert!(!is_prime(m89 * 3));
        // 2^64 + 1 = 274177 · 67280421310721
        let f = factor((1u128 << 64) + 1);
        assert_eq!(f.factors, BTreeMap::from([(274_177, 1), (67_280_421_310_721, 1)]));
        // strong pseudoprime to bases 2..37 except the last ones
        assert!(!is_prime(3_825_123_056_546_413_051));
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n as u128), trial_is_prime(n), "{n}");
        }
    }

    proptest! {
        #[test]
        fn factorization_multiplies_back(n in 1u128..(1u128 << 80)) {
            let f = factor(n);
            prop_assert_eq!(f.expand(), f.value.clone());
            prop_assert_eq!(f.value, BigUint::from(n));
            for (&p, &e) in &f.factors {
                prop_assert!(is_prime(p));
                prop_assert!(e >= 1);
            }
        }
    }
}
