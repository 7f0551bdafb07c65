//! Itinerary coding of the Julia set of `F(z) = z(z - 1)/p` by the full
//! one-sided 2-shift, and the chain `z^2 + c -> z^2 + gamma -> F -> Σ`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::conjugacy::{unicritical, ConjugacyProblem};
use crate::context::ExpansionContext;
use crate::disk::{Disk, Region};
use crate::error::{Error, Result};
use crate::padic::{PadicNumber, Prime, DEFAULT_PRECISION, GUARD_DIGITS};
use crate::poly::Polynomial;
use crate::radius::Radius;
use crate::roots::unique_root_in_disk;

/// A finite prefix `s_0 s_1 ... s_{n-1}` of a point of Σ.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ItineraryWord(Vec<u8>);

impl ItineraryWord {
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        if let Some(s) = symbols.iter().find(|&&s| s > 1) {
            return Err(Error::Parse(format!("symbol {s} is not 0 or 1")));
        }
        Ok(ItineraryWord(symbols))
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Drops the first symbol.
    pub fn shift(&self) -> Result<Self> {
        if self.0.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(ItineraryWord(self.0[1..].to_vec()))
    }

    pub fn prefix(&self, n: usize) -> Self {
        ItineraryWord(self.0[..n.min(self.0.len())].to_vec())
    }

    /// Length of the longest common prefix.
    pub fn agreement(&self, other: &Self) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .take_while(|(a, b)| a == b)
            .count()
    }
}

impl fmt::Display for ItineraryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for ItineraryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("'{c}' is not a binary symbol"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(ItineraryWord)
    }
}

impl Serialize for ItineraryWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `sum_k |s_k - t_k| / 2^k` over the common length.
///
/// The infinite-word distance differs from this by at most `2^{-(n-1)}`.
pub fn shift_metric(s: &ItineraryWord, t: &ItineraryWord) -> Result<BigRational> {
    if s.len() != t.len() {
        return Err(Error::LengthMismatch(s.len(), t.len()));
    }
    let mut sum = BigRational::zero();
    for (k, (a, b)) in s.0.iter().zip(&t.0).enumerate() {
        if a != b {
            sum += BigRational::new(BigInt::from(1), BigInt::from(2).pow(k as u32));
        }
    }
    Ok(sum)
}

fn odd_prime(p: Prime, operation: &'static str) -> Result<()> {
    if p.is_odd() {
        Ok(())
    } else {
        Err(Error::UnsupportedPrime {
            p: p.get(),
            operation,
        })
    }
}

fn int(k: i64, p: Prime) -> PadicNumber {
    PadicNumber::from_i64(k, p, DEFAULT_PRECISION + GUARD_DIGITS)
}

/// `F(z) = z(z - 1)/p`.
pub fn branch_map(p: Prime) -> Polynomial<PadicNumber> {
    let inv_p = int(p.get() as i64, p).inverse().expect("p is nonzero");
    Polynomial::new(vec![PadicNumber::zero(p), inv_p.neg(), inv_p])
}

/// The branch disks `D(0, 1/p)` and `D(1, 1/p)`.
pub fn branch_region(p: Prime) -> Region {
    let r = Radius::from_int_log(-1);
    Region::union_of_disks(vec![
        Disk::new(PadicNumber::zero(p), r),
        Disk::new(int(1, p), r),
    ])
    .expect("two disjoint branch disks")
}

fn apply_branch_map(z: &PadicNumber) -> Result<PadicNumber> {
    let p = z.prime();
    z.mul(&z.sub(&int(1, p)))
        .checked_div(&int(p.get() as i64, p))
}

/// The first `n` symbols: residues mod p of `z, F(z), ..., F^{n-1}(z)`.
pub fn itinerary(z: &PadicNumber, n: usize) -> Result<ItineraryWord> {
    let p = z.prime();
    odd_prime(p, "itinerary")?;
    let mut x = z.clone();
    let mut out = Vec::with_capacity(n);
    for step in 0..n {
        let r = x
            .residue()
            .map_err(|_| Error::PrecisionExhausted(format!("residue unknown at step {step}")))?;
        match r {
            None => {
                return Err(Error::EscapedJulia {
                    step,
                    reason: "iterate left Z_p".into(),
                })
            }
            Some(s @ (0 | 1)) => out.push(s as u8),
            Some(s) => {
                return Err(Error::EscapedJulia {
                    step,
                    reason: format!("residue {s} is not a branch symbol"),
                })
            }
        }
        if step + 1 < n {
            x = apply_branch_map(&x)?;
        }
    }
    Ok(ItineraryWord(out))
}

/// The root of `z^2 - z - p x` with residue `s`.
fn inverse_branch(s: u8, x: &PadicNumber) -> Result<PadicNumber> {
    let p = x.prime();
    let f = Polynomial::new(vec![
        x.mul(&int(p.get() as i64, p)).neg(),
        int(-1, p),
        int(1, p),
    ]);
    unique_root_in_disk(
        &f,
        &Disk::new(int(i64::from(s), p), Radius::from_int_log(-1)),
    )
}

/// All points whose itinerary starts with `word`: a disk of radius
/// `p^{-|word|}` for a nonempty word, both branch disks for the empty one.
pub fn decode(word: &ItineraryWord, p: Prime) -> Result<Region> {
    odd_prime(p, "decode")?;
    if word.is_empty() {
        return Ok(branch_region(p));
    }
    Region::union_of_disks(vec![decode_disk(word, p)?])
}

pub fn decode_disk(word: &ItineraryWord, p: Prime) -> Result<Disk> {
    odd_prime(p, "decode")?;
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut x = PadicNumber::zero(p);
    for &s in word.0.iter().rev() {
        x = inverse_branch(s, &x)?;
    }
    Ok(Disk::new(x, Radius::from_int_log(-(word.len() as i64))))
}

/// `gamma = -1/(2p) - 1/(4p^2)`, the parameter with `z^2 + gamma` affinely
/// conjugate to `F`.
pub fn gamma(p: Prime, precision: u32) -> PadicNumber {
    let pp = p.get() as i64;
    PadicNumber::from_fraction(
        &BigInt::from(-(2 * pp + 1)),
        &BigInt::from(4 * pp * pp),
        p,
        precision,
    )
    .expect("nonzero denominator")
}

/// `h2(z) = p z + 1/2`, with `h2 o (z^2 + gamma) = F o h2`.
pub fn h2(z: &PadicNumber) -> PadicNumber {
    let p = z.prime();
    let half = int(2, p).inverse().expect("p is odd");
    z.mul(&int(p.get() as i64, p)).add(&half)
}

pub fn h2_inverse(x: &PadicNumber) -> Result<PadicNumber> {
    let p = x.prime();
    let half = int(2, p).inverse().expect("p is odd");
    x.sub(&half).checked_div(&int(p.get() as i64, p))
}

/// A point of `J(z^2 + gamma)` whose `F`-itinerary after `h2` starts with
/// `word`.
pub fn julia_point(word: &ItineraryWord, p: Prime) -> Result<PadicNumber> {
    h2_inverse(decode_disk(word, p)?.center())
}

/// `J(z^2 + c) -> Σ` as `h3 o h2 o h1`, for `|c - gamma| < p`.
#[derive(Clone, Debug)]
pub struct QuadraticCoding {
    c: PadicNumber,
    problem: ConjugacyProblem,
}

impl QuadraticCoding {
    pub fn new(c: &PadicNumber) -> Result<Self> {
        let p = c.prime();
        odd_prime(p, "the quadratic pipeline")?;
        let n = c.relative_precision().max(DEFAULT_PRECISION);
        let g = gamma(p, n);
        let pr = Radius::from_int_log(1);
        let gap = c.sub(&g).norm_bound();
        if gap >= pr {
            return Err(Error::violation("|c - gamma| < p", gap, pr));
        }
        let f_c = unicritical(2, c);
        let f_gamma = unicritical(2, &g);
        let ctx = ExpansionContext::certify(&f_c, &Region::sphere(pr)?)?;
        let problem = ConjugacyProblem::from_drift(&ctx, &f_gamma)?;
        Ok(QuadraticCoding {
            c: c.clone(),
            problem,
        })
    }

    pub fn c(&self) -> &PadicNumber {
        &self.c
    }

    pub fn prime(&self) -> Prime {
        self.c.prime()
    }

    /// The `z^2 + c -> z^2 + gamma` conjugacy.
    pub fn problem(&self) -> &ConjugacyProblem {
        &self.problem
    }

    pub fn map(&self) -> &Polynomial<PadicNumber> {
        self.problem.f()
    }

    /// The first `n` symbols of `h(z)`. `target` may only tighten the
    /// accuracy the word itself needs.
    pub fn word(&self, z: &PadicNumber, n: usize, target: Radius) -> Result<ItineraryWord> {
        let needed = Radius::from_int_log(1 - n as i64);
        let h1 = self.problem.conjugate_point(z, needed.min(target))?;
        itinerary(&h2(&h1), n)
    }
}

/// The coding `J(z^2 + c) -> Σ` in one call.
pub fn pipeline(
    c: &PadicNumber,
    z: &PadicNumber,
    n: usize,
    target: Radius,
) -> Result<ItineraryWord> {
    QuadraticCoding::new(c)?.word(z, n, target)
}
