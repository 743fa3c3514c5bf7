//! Local behavior of a cubic form at a prime: the shape of the reduction
//! mod p, maximality of the attached cubic ring at p, sufficient
//! ramification, and exact local densities over the coefficient space.
//!
//! Maximality uses the translate criterion: the ring of f fails to be
//! maximal at p exactly when p divides the content, or some shift
//! f(x + ry, y) with 0 <= r < p has its xy^2 coefficient divisible by p and
//! its y^3 coefficient divisible by p^2, or (for the root at infinity)
//! p^2 | a and p | b. When p divides the xy^2 coefficient, the y^3
//! coefficient mod p^2 does not depend on the chosen lift of r, so the
//! finite loop is exhaustive.

use alloc::vec::Vec;

use num_rational::Rational64;

use crate::cubic::BinaryCubicForm;
use crate::int::{factor_u64, FactorizationLimit};

/// Multiset of root degrees and multiplicities of f mod p in P^1 over the
/// algebraic closure of F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PSplittingType {
    /// (111): three distinct rational roots.
    Split,
    /// (12): one rational root and an irreducible quadratic factor.
    Mixed,
    /// (3): irreducible cubic.
    Inert,
    /// (1^2 1): a rational double root and a distinct rational simple root.
    PartiallyRamified,
    /// (1^3): a rational triple root.
    TotallyRamified,
    /// f vanishes identically mod p.
    Zero,
}

impl core::fmt::Display for PSplittingType {
    fn fmt(&self, w: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            PSplittingType::Split => "(111)",
            PSplittingType::Mixed => "(12)",
            PSplittingType::Inert => "(3)",
            PSplittingType::PartiallyRamified => "(1^2 1)",
            PSplittingType::TotallyRamified => "(1^3)",
            PSplittingType::Zero => "(0)",
        };
        w.write_str(s)
    }
}

fn mod_p(x: i64, p: u64) -> u64 {
    debug_assert!(p <= i64::MAX as u64);
    x.rem_euclid(p as i64) as u64
}

fn mod_pp(x: i64, p: u64) -> u64 {
    let pp = (p as u128) * (p as u128);
    let r = (x as i128).rem_euclid(pp as i128);
    r as u64
}

/// Root multiplicities of f mod p over P^1(F_p-bar), via exhaustive root
/// search over P^1(F_p). Left-over root mass is accounted to irreducible
/// factors of degree 2 or 3.
pub fn splitting_type_p(f: &BinaryCubicForm, p: u64) -> PSplittingType {
    let (a, b, c, d) = (mod_p(f.a, p), mod_p(f.b, p), mod_p(f.c, p), mod_p(f.d, p));
    if a == 0 && b == 0 && c == 0 && d == 0 {
        return PSplittingType::Zero;
    }
    let mut mults: Vec<u32> = Vec::new();
    // root at infinity (1:0) has multiplicity = order of y dividing f
    if a == 0 {
        mults.push(if b != 0 {
            1
        } else if c != 0 {
            2
        } else {
            3
        });
    }
    // finite roots (r:1): expand f(x + r, y=1) and count the order of x;
    // the shifted coefficients are exact integer combinations, so this is
    // characteristic-free
    for r in 0..p {
        let r = r as u128;
        let (a, b, c, d) = (a as u128, b as u128, c as u128, d as u128);
        let p128 = p as u128;
        let e0 = (((a * r % p128) * r % p128) * r + ((b * r % p128) * r) % p128 + c * r + d) % p128;
        if e0 != 0 {
            continue;
        }
        let e1 = (3 * a % p128 * r % p128 * r + 2 * b * r + c) % p128;
        let e2 = (3 * a % p128 * r + b) % p128;
        let m = if e1 != 0 {
            1
        } else if e2 != 0 {
            2
        } else {
            3
        };
        mults.push(m);
    }
    let total: u32 = mults.iter().sum();
    match total {
        3 => match mults.len() {
            3 => PSplittingType::Split,
            2 => PSplittingType::PartiallyRamified,
            _ => PSplittingType::TotallyRamified,
        },
        1 => PSplittingType::Mixed,
        0 => PSplittingType::Inert,
        _ => unreachable!("rational root mass of a cubic is 0, 1 or 3"),
    }
}

/// Maximality kernel on residues: a mod p^2, (b, c, d) mod p^2.
pub(crate) fn maximal_from_residues(a: u64, b: u64, c: u64, d: u64, p: u64) -> bool {
    let pp = p * p;
    debug_assert!(a < pp && b < pp && c < pp && d < pp);
    // content
    if a % p == 0 && b % p == 0 && c % p == 0 && d % p == 0 {
        return false;
    }
    // root at infinity
    if a == 0 && b % p == 0 {
        return false;
    }
    // finite roots: shift by r and test p | c', p^2 | d'
    let (a, b, c, d) = (a as u128, b as u128, c as u128, d as u128);
    let pp = pp as u128;
    for r in 0..p as u128 {
        let c1 = (3 * a * r % pp * r + 2 * b * r + c) % pp;
        if c1 % (p as u128) != 0 {
            continue;
        }
        let d1 = (a * r % pp * r % pp * r + b * r % pp * r + c * r + d) % pp;
        if d1 == 0 {
            return false;
        }
    }
    true
}

/// Whether the cubic ring of f is maximal at p.
pub fn is_maximal_at(f: &BinaryCubicForm, p: u64) -> bool {
    assert!(f.disc() != 0, "maximality is about nondegenerate rings");
    maximal_from_residues(mod_pp(f.a, p), mod_pp(f.b, p), mod_pp(f.c, p), mod_pp(f.d, p), p)
}

/// Sufficient-ramification kernel on residues mod p, assuming p | a and the
/// form is maximal at p: either f mod p has a triple root in P^1(F_p), or
/// the residual quadratic b x^2 + c x + d has a double root in F_p.
pub(crate) fn suffram_from_residues(b: u64, c: u64, d: u64, p: u64) -> bool {
    debug_assert!(b < p && c < p && d < p);
    // triple root: with p | a this forces the root to sit at infinity
    if b == 0 && c == 0 && d != 0 {
        return true;
    }
    if b == 0 {
        return false;
    }
    if p == 2 {
        // x^2 + cx + d over F_2: square exactly when the linear term dies
        return c == 0;
    }
    // odd p: repeated root of a genuine quadratic
    let p = p as u128;
    let cc = (c as u128) * (c as u128) % p;
    let bd4 = 4 * (b as u128) % p * (d as u128) % p;
    (cc + p - bd4) % p == 0
}

/// Whether the maximal ring at p (p | a required) is sufficiently ramified:
/// the reduction has a triple root, or the residual quadratic has a double
/// root. Both clauses see only residues mod p.
pub fn is_sufficiently_ramified(f: &BinaryCubicForm, p: u64) -> bool {
    assert_eq!(mod_p(f.a, p), 0, "sufficient ramification requires p | a");
    assert!(is_maximal_at(f, p), "sufficient ramification requires maximality at p");
    suffram_from_residues(mod_p(f.b, p), mod_p(f.c, p), mod_p(f.d, p), p)
}

/// An exactly computed local density at p together with the closed-form
/// prediction it is checked against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalDensityReport {
    pub p: u64,
    pub n: i64,
    pub density: Rational64,
    pub prediction: Rational64,
    pub matches: bool,
    /// measure used for the (b, c, d) coordinates
    pub normalization: &'static str,
}

const ALL_RESIDUES: &str = "all (b,c,d) mod p^2";

fn density_report(n: i64, p: u64, density: Rational64, prediction: Rational64) -> LocalDensityReport {
    LocalDensityReport {
        p,
        n,
        density,
        prediction,
        matches: density == prediction,
        normalization: ALL_RESIDUES,
    }
}

/// Density of forms (n, b, c, d) maximal at p, computed by exhaustive
/// enumeration of (b, c, d) mod p^2 (the criterion only sees those
/// residues). Prediction: (p^2 - 1)/p^2 unless p^2 | n, where it drops to
/// (p - 1)^2 (p + 1)/p^3.
pub fn density_maximal(n: i64, p: u64) -> LocalDensityReport {
    assert!(n >= 1);
    assert!(p >= 2 && p <= 13, "density enumeration is sized for small p");
    let pp = p * p;
    let a = mod_pp(n, p);
    let mut hits: u64 = 0;
    for b in 0..pp {
        for c in 0..pp {
            for d in 0..pp {
                if maximal_from_residues(a, b, c, d, p) {
                    hits += 1;
                }
            }
        }
    }
    let density = Rational64::new(hits as i64, (pp * pp * pp) as i64);
    let p = p as i64;
    let prediction = if n % (p * p) == 0 {
        Rational64::new((p - 1) * (p - 1) * (p + 1), p * p * p)
    } else {
        Rational64::new(p * p - 1, p * p)
    };
    density_report(n, p as u64, density, prediction)
}

/// Density of forms (n, b, c, d) that are maximal and sufficiently ramified
/// at p (requires p | n). Prediction: (p - 1)/p^2 unless p^2 | n, where it
/// is (p - 1)^2/p^3. The ratio to the maximal density is 1/(p + 1) in both
/// cases.
pub fn density_max_suffram(n: i64, p: u64) -> LocalDensityReport {
    assert!(n >= 1 && n % (p as i64) == 0, "sufficient ramification needs p | n");
    assert!(p >= 2 && p <= 13, "density enumeration is sized for small p");
    let pp = p * p;
    let a = mod_pp(n, p);
    let mut hits: u64 = 0;
    for b in 0..pp {
        for c in 0..pp {
            for d in 0..pp {
                if maximal_from_residues(a, b, c, d, p)
                    && suffram_from_residues(b % p, c % p, d % p, p)
                {
                    hits += 1;
                }
            }
        }
    }
    let density = Rational64::new(hits as i64, (pp * pp * pp) as i64);
    let p = p as i64;
    let prediction = if n % (p * p) == 0 {
        Rational64::new((p - 1) * (p - 1), p * p * p)
    } else {
        Rational64::new(p - 1, p * p)
    };
    density_report(n, p as u64, density, prediction)
}

/// Global maximality: maximal at every prime whose square divides the
/// discriminant. Factoring is budgeted; an out-of-budget discriminant is a
/// first-class error, never a guess.
pub fn is_maximal(f: &BinaryCubicForm) -> Result<bool, FactorizationLimit> {
    let disc = f.disc();
    assert!(disc != 0, "maximality is about nondegenerate rings");
    let mag = disc.unsigned_abs();
    let mag_u64 = u64::try_from(mag).map_err(|_| FactorizationLimit { remaining_cofactor: u64::MAX })?;
    let factors = factor_u64(mag_u64)?;
    Ok(factors
        .into_iter()
        .filter(|&(_, e)| e >= 2)
        .all(|(p, _)| is_maximal_at(f, p)))
}

/// Same as is_maximal with a caller-supplied list of primes whose squares
/// divide the discriminant.
pub fn is_maximal_given_primes(f: &BinaryCubicForm, primes: &[u64]) -> bool {
    primes.iter().all(|&p| is_maximal_at(f, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_types() {
        let f = BinaryCubicForm::new(1, 0, 0, -1);
        assert_eq!(splitting_type_p(&f, 2), PSplittingType::Mixed);
        assert_eq!(splitting_type_p(&f, 3), PSplittingType::TotallyRamified);
        // x^3 - x y^2 - y^3 mod 2 is irreducible, mod 23 has a double root
        let f = BinaryCubicForm::new(1, 0, -1, -1);
        assert_eq!(splitting_type_p(&f, 2), PSplittingType::Inert);
        assert_eq!(splitting_type_p(&f, 23), PSplittingType::PartiallyRamified);
        // y (x + y)^2 pattern
        let f = BinaryCubicForm::new(3, 1, 2, 1);
        assert_eq!(splitting_type_p(&f, 3), PSplittingType::PartiallyRamified);
        // split example: x (x - y) (x + y) = x^3 - x y^2 mod 5
        let f = BinaryCubicForm::new(1, 0, -1, 0);
        assert_eq!(splitting_type_p(&f, 5), PSplittingType::Split);
        assert_eq!(splitting_type_p(&BinaryCubicForm::new(5, 10, 5, 5), 5), PSplittingType::Zero);
    }

    #[test]
    fn maximality_examples() {
        let f = BinaryCubicForm::new(1, 0, 0, -1);
        assert!(!is_maximal_at(&f, 3));
        assert!(is_maximal_at(&f, 2));
        let f = BinaryCubicForm::new(1, 0, -1, -1);
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23] {
            assert!(is_maximal_at(&f, p));
        }
        assert_eq!(is_maximal(&f), Ok(true));
        assert!(!is_maximal_at(&BinaryCubicForm::new(1, 0, 0, 4), 2));
        assert_eq!(is_maximal(&BinaryCubicForm::new(1, 0, 0, -1)), Ok(false));
        // content forms are never maximal
        assert!(!is_maximal_at(&BinaryCubicForm::new(3, 3, 6, 3), 3));
        // root at infinity: p^2 | a and p | b
        assert!(!is_maximal_at(&BinaryCubicForm::new(4, 2, 1, 1), 2));
    }

    #[test]
    fn maximality_is_translation_invariant() {
        use crate::cubic::GL2Element;
        let forms = [
            BinaryCubicForm::new(1, 0, 0, -1),
            BinaryCubicForm::new(1, 0, -1, -1),
            BinaryCubicForm::new(3, 1, 2, 1),
            BinaryCubicForm::new(2, 1, -3, 5),
            BinaryCubicForm::new(4, 2, 1, 1),
        ];
        for f in &forms {
            for p in [2u64, 3, 5] {
                for r in -3i64..4 {
                    let g = GL2Element { p: 1, q: 0, r, s: 1 };
                    assert_eq!(
                        is_maximal_at(f, p),
                        is_maximal_at(&f.act_gl2(&g), p),
                        "f={f:?} p={p} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn sufficient_ramification() {
        let f = BinaryCubicForm::new(3, 1, 2, 1);
        assert!(is_sufficiently_ramified(&f, 3));
        let f = BinaryCubicForm::new(3, 1, 0, 1);
        assert!(!is_sufficiently_ramified(&f, 3));
        // triple root at infinity
        let f = BinaryCubicForm::new(3, 3, 3, 1);
        assert!(is_maximal_at(&f, 3));
        assert_eq!(splitting_type_p(&f, 3), PSplittingType::TotallyRamified);
        assert!(is_sufficiently_ramified(&f, 3));
        // p = 2: x^2 + d is always a square
        let f = BinaryCubicForm::new(2, 1, 2, 1);
        if is_maximal_at(&f, 2) {
            assert!(is_sufficiently_ramified(&f, 2));
        }
    }

    #[test]
    fn densities_match_closed_forms_small() {
        for (n, p, expect) in [
            (1i64, 2u64, Rational64::new(3, 4)),
            (9, 3, Rational64::new(16, 27)),
            (4, 2, Rational64::new(3, 8)),
            (3, 3, Rational64::new(8, 9)),
        ] {
            let r = density_maximal(n, p);
            assert_eq!(r.density, expect, "n={n} p={p}");
            assert!(r.matches);
        }
        for (n, p, expect) in [
            (2i64, 2u64, Rational64::new(1, 4)),
            (9, 3, Rational64::new(4, 27)),
            (4, 2, Rational64::new(1, 8)),
        ] {
            let r = density_max_suffram(n, p);
            assert_eq!(r.density, expect, "n={n} p={p}");
            assert!(r.matches);
        }
        // ratio 1/(p+1)
        let max = density_maximal(2, 2).density;
        let both = density_max_suffram(2, 2).density;
        assert_eq!(both / max, Rational64::new(1, 3));
    }
}
