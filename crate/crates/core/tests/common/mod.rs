#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use padyn::{PadicNumber, PadicPolynomial, Prime, Radius};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const PREC: u32 = 64;
pub const POLY_PREC: u32 = 80;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qp(r: &BigRational, p: u64) -> PadicNumber {
    PadicNumber::from_rational(r, prime(p), POLY_PREC)
}

pub fn q(n: i64, d: i64, p: u64) -> PadicNumber {
    qp(&rat(n, d), p)
}

/// `v_p(n)` for a nonzero integer, by repeated division.
pub fn int_valuation(n: &BigInt, p: u64) -> i64 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

/// `v_p(r)`, `None` for zero.
pub fn valuation(r: &BigRational, p: u64) -> Option<i64> {
    if r.is_zero() {
        None
    } else {
        Some(int_valuation(r.numer(), p) - int_valuation(r.denom(), p))
    }
}

pub fn norm_oracle(r: &BigRational, p: u64) -> Radius {
    match valuation(r, p) {
        None => Radius::Zero,
        Some(v) => Radius::from_int_log(-v),
    }
}

/// A rational with numerator and denominator below `bound` in size.
pub fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> BigRational {
    let n = rng.gen_range(-bound + 1..bound);
    let d = rng.gen_range(1..bound);
    rat(n, d)
}

/// A nonzero rational whose valuation is spread over a few powers of `p`.
pub fn random_scaled(rng: &mut ChaCha8Rng, p: u64) -> BigRational {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-1_000_000i64..1_000_000);
    }
    let d = rng.gen_range(1..1_000_000i64);
    let shift = rng.gen_range(-4i32..=4);
    let pk = BigInt::from(p).pow(shift.unsigned_abs());
    let r = rat(n, d);
    if shift >= 0 {
        r * BigRational::from_integer(pk)
    } else {
        r / BigRational::from_integer(pk)
    }
}

/// A rational in `Z_(p)`: denominator prime to `p`.
pub fn random_integral(rng: &mut ChaCha8Rng, p: u64) -> BigRational {
    let n = rng.gen_range(-10_000i64..10_000);
    let mut d = rng.gen_range(1..10_000i64);
    while d % p as i64 == 0 {
        d += 1;
    }
    rat(n, d)
}

/// A unit of `Z_(p)`.
pub fn random_unit(rng: &mut ChaCha8Rng, p: u64) -> BigRational {
    loop {
        let r = random_integral(rng, p);
        if !r.is_zero() && valuation(&r, p) == Some(0) {
            return r;
        }
    }
}

pub fn p_power(p: u64, k: i64) -> BigRational {
    let pk = BigRational::from_integer(BigInt::from(p).pow(k.unsigned_abs() as u32));
    if k >= 0 {
        pk
    } else {
        pk.recip()
    }
}

/// A random point of `D(center, p^{-k})`.
pub fn random_in_disk(rng: &mut ChaCha8Rng, center: &PadicNumber, k: i64) -> PadicNumber {
    let p = center.prime().get();
    let t = random_integral(rng, p) * p_power(p, k);
    center.add(&qp(&t, p))
}

/// A random point with `|z| = p^{-v}`.
pub fn random_on_sphere(rng: &mut ChaCha8Rng, p: u64, v: i64) -> PadicNumber {
    qp(&(random_unit(rng, p) * p_power(p, v)), p)
}

/// `|x - y|` with exact zero for identical values.
pub fn gap(x: &PadicNumber, y: &PadicNumber) -> Radius {
    x.sub(y).norm_bound()
}

pub fn poly_from(coeffs: &[BigRational], p: u64) -> PadicPolynomial {
    PadicPolynomial::from_rationals(coeffs, prime(p), POLY_PREC)
}

/// Coefficients of `lead * prod (z - r_i)`.
pub fn expand_roots(lead: &BigRational, roots: &[BigRational]) -> Vec<BigRational> {
    let mut c = vec![lead.clone()];
    for r in roots {
        let mut next = vec![BigRational::zero(); c.len() + 1];
        for (k, a) in c.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        c = next;
    }
    c
}

/// Coefficients of `f(a + s t)` in `t`, by the binomial theorem.
pub fn substitute(f: &[BigRational], a: &BigRational, s: &BigRational) -> Vec<BigRational> {
    let d = f.len();
    let mut out = vec![BigRational::zero(); d];
    for (n, c) in f.iter().enumerate() {
        let mut binom = BigInt::one();
        for (k, slot) in out.iter_mut().enumerate().take(n + 1) {
            *slot += c
                * BigRational::from_integer(binom.clone())
                * num_traits::pow(a.clone(), n - k)
                * num_traits::pow(s.clone(), k);
            binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
        }
    }
    out
}

/// `x mod p` for `x` in `Z_(p)`.
fn reduce(x: &BigRational, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let num = x.numer().mod_floor(&pb);
    let den = x.denom().mod_floor(&pb);
    let mut inv = BigInt::one();
    for _ in 0..p - 2 {
        inv = (inv * &den).mod_floor(&pb);
    }
    let r = (num * inv).mod_floor(&pb);
    r.try_into().unwrap()
}

/// Order of vanishing of `g` at `a` over `F_p`.
fn multiplicity_mod_p(g: &[u64], a: u64, p: u64) -> usize {
    let mut g: Vec<u64> = g.to_vec();
    while g.last() == Some(&0) {
        g.pop();
    }
    let mut m = 0;
    loop {
        if g.is_empty() {
            return m;
        }
        // synthetic division by (t - a)
        let mut q = vec![0u64; g.len().saturating_sub(1)];
        let mut acc = 0u64;
        for k in (0..g.len()).rev() {
            acc = (acc * a + g[k]) % p;
            if k > 0 {
                q[k - 1] = acc;
            }
        }
        if acc != 0 {
            return m;
        }
        m += 1;
        g = q;
        while g.last() == Some(&0) {
            g.pop();
        }
    }
}

/// Zeros of `g` in the closed unit disk, counted through residue classes
/// mod `p`: unramified residues only, so valid when every zero reduces into
/// `F_p` (e.g. for polynomials split over Q).
fn lift_count(g: &[BigRational], p: u64, depth: u32) -> usize {
    let v = g
        .iter()
        .filter_map(|c| valuation(c, p))
        .min()
        .expect("nonzero polynomial");
    let scale = p_power(p, -v);
    let g: Vec<BigRational> = g.iter().map(|c| c * &scale).collect();
    let bar: Vec<u64> = g
        .iter()
        .map(|c| if c.is_zero() { 0 } else { reduce(c, p) })
        .collect();
    let mut total = 0;
    let pr = BigRational::from_integer(BigInt::from(p));
    for a in 0..p {
        let m = multiplicity_mod_p(&bar, a, p);
        total += match m {
            0 => 0,
            1 => 1,
            _ if depth == 0 => m,
            _ => {
                let ar = BigRational::from_integer(BigInt::from(a));
                lift_count(&substitute(&g, &ar, &pr), p, depth - 1)
            }
        };
    }
    total
}

/// Zeros of `f` in `D(center, p^{-m})` by residue lifting to depth `depth`.
pub fn residue_oracle(
    f: &[BigRational],
    center: &BigRational,
    m: i64,
    p: u64,
    depth: u32,
) -> usize {
    lift_count(&substitute(f, center, &p_power(p, m)), p, depth)
}
