//! Mass combinatorics of etale cubic algebras over Q_p and their quadratic
//! etale extensions.
//!
//! A cubic algebra is a product of factors with residue degree f_i and
//! ramification index e_i, sum f_i e_i = 3. Each factor admits two
//! unramified quadratic etale extensions (split or inert), so a quadratic
//! extension of the whole algebra is a vector of k such choices with
//! automorphism group of order 2^k. Discriminant classes and the partial
//! masses below are pure parity combinatorics in these choices.

use alloc::string::String;
use alloc::vec::Vec;

use num_rational::Rational64;

use crate::cubic::BinaryCubicForm;
use crate::padic::{is_maximal_at, splitting_type_p, PSplittingType};

/// One local factor: residue degree f, ramification index e.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EtaleFactor {
    pub residue_degree: u32,
    pub ram_degree: u32,
}

/// An etale cubic algebra shape, optionally with one factor marked as the
/// algebra at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleCubicShape {
    factors: Vec<EtaleFactor>,
    infinity: Option<usize>,
}

impl EtaleCubicShape {
    pub fn new(factors: Vec<(u32, u32)>) -> Self {
        let factors: Vec<EtaleFactor> = factors
            .into_iter()
            .map(|(f, e)| EtaleFactor { residue_degree: f, ram_degree: e })
            .collect();
        let total: u32 = factors.iter().map(|x| x.residue_degree * x.ram_degree).sum();
        assert_eq!(total, 3, "factors of a cubic algebra must have total degree 3");
        Self { factors, infinity: None }
    }

    pub fn with_infinity(mut self, idx: usize) -> Self {
        assert!(idx < self.factors.len());
        self.infinity = Some(idx);
        self
    }

    pub fn factors(&self) -> &[EtaleFactor] {
        &self.factors
    }

    pub fn infinity_index(&self) -> Option<usize> {
        self.infinity
    }

    fn k(&self) -> usize {
        self.factors.len()
    }
}

impl core::fmt::Display for EtaleCubicShape {
    /// "(f^e)(f^e)..." with an asterisk inside the marked factor.
    fn fmt(&self, w: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for (i, x) in self.factors.iter().enumerate() {
            let star = if self.infinity == Some(i) { "*" } else { "" };
            write!(w, "({}^{}{})", x.residue_degree, x.ram_degree, star)?;
        }
        Ok(())
    }
}

/// A choice of split/inert per factor; bit i set means factor i is inert.
pub type InertPattern = u32;

fn patterns(k: usize) -> impl Iterator<Item = InertPattern> {
    0..(1u32 << k)
}

/// True iff the number of factors that are both inert and odd-ramified is
/// even; such extensions have square norm-class discriminant.
pub fn square_norm_disc(shape: &EtaleCubicShape, pattern: InertPattern) -> bool {
    assert!(pattern < (1u32 << shape.k()));
    let mut odd_inert = 0u32;
    for (i, x) in shape.factors.iter().enumerate() {
        if pattern >> i & 1 == 1 && x.ram_degree % 2 == 1 {
            odd_inert += 1;
        }
    }
    odd_inert % 2 == 0
}

/// Total mass of quadratic etale extensions: sum over all 2^k patterns of
/// 1/|Aut| with |Aut| = 2^k. Always 1; computed, not assumed.
pub fn mass_total(shape: &EtaleCubicShape) -> Rational64 {
    let k = shape.k();
    let weight = Rational64::new(1, 1i64 << k);
    patterns(k).map(|_| weight).sum()
}

/// Mass restricted to square-norm-discriminant extensions, weighted by the
/// index-two automorphism subgroup 1/2^(k-1). Always 1 for cubic shapes
/// (total degree 3 is odd, so some factor has odd ramification).
pub fn mass_r(shape: &EtaleCubicShape) -> Rational64 {
    let k = shape.k();
    let weight = Rational64::new(1, 1i64 << (k - 1));
    patterns(k)
        .filter(|&pat| square_norm_disc(shape, pat))
        .map(|_| weight)
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MassError {
    MissingInfinityMarker,
    /// the combinatorial masses disagree with the sufficiency flag
    MarkerFlagMismatch { computed: (Rational64, Rational64) },
}

impl core::fmt::Display for MassError {
    fn fmt(&self, w: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MassError::MissingInfinityMarker => w.write_str("shape has no infinity marker"),
            MassError::MarkerFlagMismatch { computed } => write!(
                w,
                "partial masses ({}, {}) contradict the sufficiency flag",
                computed.0, computed.1
            ),
        }
    }
}

impl core::error::Error for MassError {}

/// Masses of square-norm extensions split (mass_plus) or inert (mass_minus)
/// at the marked factor, each pattern weighted 1/2^(k-1). The result is
/// (1, 0) exactly when the marked factor is the unique odd-ramified one,
/// which is the sufficiently ramified situation; otherwise (1/2, 1/2). The
/// caller's flag is cross-checked against the combinatorics.
pub fn partial_masses(
    shape: &EtaleCubicShape,
    sufficiently_ramified: bool,
) -> Result<(Rational64, Rational64), MassError> {
    let j = shape.infinity.ok_or(MassError::MissingInfinityMarker)?;
    let k = shape.k();
    let weight = Rational64::new(1, 1i64 << (k - 1));
    let mut plus = Rational64::new(0, 1);
    let mut minus = Rational64::new(0, 1);
    for pat in patterns(k).filter(|&pat| square_norm_disc(shape, pat)) {
        if pat >> j & 1 == 1 {
            minus += weight;
        } else {
            plus += weight;
        }
    }
    let expected = if sufficiently_ramified {
        (Rational64::new(1, 1), Rational64::new(0, 1))
    } else {
        (Rational64::new(1, 2), Rational64::new(1, 2))
    };
    if (plus, minus) != expected {
        return Err(MassError::MarkerFlagMismatch { computed: (plus, minus) });
    }
    Ok((plus, minus))
}

/// Which factor of the local algebra carries the pole of the generator when
/// p | a: the unramified Q_p factor when the root at infinity of f mod p is
/// simple (p does not divide b), else the ramified factor there.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraAtInfinity {
    UnramifiedBase,
    RamifiedQuadratic,
    RamifiedCubic,
}

pub fn algebra_at_infinity(f: &BinaryCubicForm, p: u64) -> AlgebraAtInfinity {
    assert_eq!(f.a.rem_euclid(p as i64), 0, "algebra at infinity requires p | a");
    assert!(is_maximal_at(f, p), "algebra at infinity requires maximality at p");
    let b = f.b.rem_euclid(p as i64);
    let c = f.c.rem_euclid(p as i64);
    if b != 0 {
        AlgebraAtInfinity::UnramifiedBase
    } else if c != 0 {
        AlgebraAtInfinity::RamifiedQuadratic
    } else {
        AlgebraAtInfinity::RamifiedCubic
    }
}

/// Shape of the maximal cubic ring of f at p, inferred from the splitting
/// type; marks the factor at infinity when p | a.
pub fn shape_of_form(f: &BinaryCubicForm, p: u64) -> EtaleCubicShape {
    assert!(is_maximal_at(f, p), "shape inference is for maximal rings");
    let shape = match splitting_type_p(f, p) {
        PSplittingType::Split => EtaleCubicShape::new(alloc::vec![(1, 1), (1, 1), (1, 1)]),
        PSplittingType::Mixed => EtaleCubicShape::new(alloc::vec![(1, 1), (2, 1)]),
        PSplittingType::Inert => EtaleCubicShape::new(alloc::vec![(3, 1)]),
        PSplittingType::PartiallyRamified => EtaleCubicShape::new(alloc::vec![(1, 1), (1, 2)]),
        PSplittingType::TotallyRamified => EtaleCubicShape::new(alloc::vec![(1, 3)]),
        PSplittingType::Zero => unreachable!("maximal forms are nonzero mod p"),
    };
    if f.a.rem_euclid(p as i64) != 0 {
        return shape;
    }
    let idx = match algebra_at_infinity(f, p) {
        AlgebraAtInfinity::UnramifiedBase => {
            // first unramified degree-one factor
            shape
                .factors
                .iter()
                .position(|x| x.residue_degree == 1 && x.ram_degree == 1)
                .expect("simple infinite root forces a Q_p factor")
        }
        AlgebraAtInfinity::RamifiedQuadratic => shape
            .factors
            .iter()
            .position(|x| x.ram_degree == 2)
            .expect("double infinite root forces a ramified quadratic"),
        AlgebraAtInfinity::RamifiedCubic => 0,
    };
    shape.with_infinity(idx)
}

/// Serialize as the display form, for reports.
pub fn shape_string(shape: &EtaleCubicShape) -> String {
    alloc::format!("{shape}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_shapes() -> Vec<EtaleCubicShape> {
        alloc::vec![
            EtaleCubicShape::new(alloc::vec![(1, 1), (1, 1), (1, 1)]),
            EtaleCubicShape::new(alloc::vec![(1, 1), (2, 1)]),
            EtaleCubicShape::new(alloc::vec![(3, 1)]),
            EtaleCubicShape::new(alloc::vec![(1, 1), (1, 2)]),
            EtaleCubicShape::new(alloc::vec![(1, 3)]),
        ]
    }

    #[test]
    fn masses_are_one() {
        for shape in all_shapes() {
            assert_eq!(mass_total(&shape), Rational64::new(1, 1), "{shape}");
            assert_eq!(mass_r(&shape), Rational64::new(1, 1), "{shape}");
        }
    }

    #[test]
    fn square_norm_parity() {
        let split = EtaleCubicShape::new(alloc::vec![(1, 1), (1, 1), (1, 1)]);
        assert!(square_norm_disc(&split, 0b000));
        assert!(!square_norm_disc(&split, 0b001));
        assert!(square_norm_disc(&split, 0b011));
        let ram = EtaleCubicShape::new(alloc::vec![(1, 1), (1, 2)]);
        // inert at the even-ramified factor only: parity count 0
        assert!(square_norm_disc(&ram, 0b10));
        assert!(!square_norm_disc(&ram, 0b01));
    }

    #[test]
    fn partial_mass_split() {
        let split = EtaleCubicShape::new(alloc::vec![(1, 1), (1, 1), (1, 1)]).with_infinity(1);
        assert_eq!(
            partial_masses(&split, false),
            Ok((Rational64::new(1, 2), Rational64::new(1, 2)))
        );
        let tot = EtaleCubicShape::new(alloc::vec![(1, 3)]).with_infinity(0);
        assert_eq!(
            partial_masses(&tot, true),
            Ok((Rational64::new(1, 1), Rational64::new(0, 1)))
        );
        let ram = EtaleCubicShape::new(alloc::vec![(1, 1), (1, 2)]).with_infinity(0);
        assert_eq!(
            partial_masses(&ram, true),
            Ok((Rational64::new(1, 1), Rational64::new(0, 1)))
        );
        // marking the even-ramified factor is not a sufficiently ramified
        // situation
        let ram = EtaleCubicShape::new(alloc::vec![(1, 1), (1, 2)]).with_infinity(1);
        assert_eq!(
            partial_masses(&ram, false),
            Ok((Rational64::new(1, 2), Rational64::new(1, 2)))
        );
        assert!(matches!(
            partial_masses(&ram, true),
            Err(MassError::MarkerFlagMismatch { .. })
        ));
        let unmarked = EtaleCubicShape::new(alloc::vec![(1, 3)]);
        assert_eq!(partial_masses(&unmarked, true), Err(MassError::MissingInfinityMarker));
    }

    #[test]
    fn sums_always_total() {
        for shape in all_shapes() {
            for j in 0..shape.factors().len() {
                let marked = shape.clone().with_infinity(j);
                let suff = {
                    // combinatorial criterion: marked factor is the unique
                    // odd-ramified factor
                    let odd: Vec<usize> = marked
                        .factors()
                        .iter()
                        .enumerate()
                        .filter(|(_, x)| x.ram_degree % 2 == 1)
                        .map(|(i, _)| i)
                        .collect();
                    odd == alloc::vec![j]
                };
                let (plus, minus) = partial_masses(&marked, suff).unwrap();
                assert_eq!(plus + minus, Rational64::new(1, 1));
            }
        }
    }

    #[test]
    fn infinity_factors() {
        let f = BinaryCubicForm::new(3, 1, 2, 1);
        assert_eq!(algebra_at_infinity(&f, 3), AlgebraAtInfinity::UnramifiedBase);
        let f = BinaryCubicForm::new(3, 3, 3, 1);
        assert_eq!(algebra_at_infinity(&f, 3), AlgebraAtInfinity::RamifiedCubic);
        assert_eq!(shape_string(&shape_of_form(&f, 3)), "(1^3*)");
        let f = BinaryCubicForm::new(3, 1, 2, 1);
        assert_eq!(shape_string(&shape_of_form(&f, 3)), "(1^1*)(1^2)");
    }
}
