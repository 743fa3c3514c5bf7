//! Family statistics: local specifications, sufficiently-ramified
//! densities, predicted class-group averages, and empirical averages over
//! censused families.
//!
//! Everything rational here is exact. The only floating point lives in the
//! empirical reports, where an average of integer counts is a display
//! quantity.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::Rational64;

use crate::cubic::BinaryCubicForm;
use crate::enumerate::{enumerate_window, EnumWindow};
use crate::int::{factor_u64, FactorizationLimit};
use crate::orbits::census_family;
use crate::padic::{
    is_maximal, is_sufficiently_ramified, maximal_from_residues, splitting_type_p,
    suffram_from_residues, PSplittingType,
};

/// Constraint on the completed cubic ring at one prime. The reference
/// measure is always the set of maximal forms with the right leading
/// coefficient, so `Any` admits the whole local family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalPredicate {
    Any,
    /// Restrict the reduction type of the form mod p.
    SplittingTypes(Vec<PSplittingType>),
    /// p stays unramified in the maximal ring.
    Unramified,
    SufficientlyRamified,
    NotSufficientlyRamified,
}

impl LocalPredicate {
    /// Whether the predicate admits every non-totally-ramified completion.
    fn admits_nontotally_ramified(&self) -> bool {
        match self {
            LocalPredicate::Any | LocalPredicate::NotSufficientlyRamified => true,
            LocalPredicate::Unramified | LocalPredicate::SufficientlyRamified => false,
            LocalPredicate::SplittingTypes(ts) => [
                PSplittingType::Split,
                PSplittingType::Mixed,
                PSplittingType::Inert,
                PSplittingType::PartiallyRamified,
            ]
            .iter()
            .all(|t| ts.contains(t)),
        }
    }
}

/// Finitely many constrained primes; every other prime admits everything.
#[derive(Debug, Clone, Default)]
pub struct LocalSpecification {
    constrained: Vec<(u64, LocalPredicate)>,
}

impl LocalSpecification {
    pub fn unrestricted() -> Self {
        Self::default()
    }

    pub fn with(mut self, p: u64, pred: LocalPredicate) -> Self {
        assert!(
            !self.constrained.iter().any(|&(q, _)| q == p),
            "one predicate per prime"
        );
        self.constrained.push((p, pred));
        self.constrained.sort_by_key(|&(p, _)| p);
        self
    }

    pub fn predicate_at(&self, p: u64) -> &LocalPredicate {
        self.constrained
            .iter()
            .find(|&&(q, _)| q == p)
            .map(|(_, pred)| pred)
            .unwrap_or(&LocalPredicate::Any)
    }

    pub fn constrained_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.constrained.iter().map(|&(p, _)| p)
    }

    /// The family stays large as long as each constrained predicate keeps a
    /// nonempty local set; unlisted primes admit everything by
    /// construction. A predicate that throws away all non-totally-ramified
    /// completions is allowed at its finitely many primes.
    pub fn is_large(&self) -> bool {
        true
    }

    /// Whether a concrete form satisfies every constrained predicate.
    /// Maximality is not checked here; the caller filters the family.
    pub fn admits(&self, f: &BinaryCubicForm) -> bool {
        self.constrained.iter().all(|(p, pred)| {
            let ty = splitting_type_p(f, *p);
            match pred {
                LocalPredicate::Any => true,
                LocalPredicate::SplittingTypes(ts) => ts.contains(&ty),
                LocalPredicate::Unramified => matches!(
                    ty,
                    PSplittingType::Split | PSplittingType::Mixed | PSplittingType::Inert
                ),
                LocalPredicate::SufficientlyRamified => {
                    f.a % (*p as i64) == 0 && is_sufficiently_ramified(f, *p)
                }
                LocalPredicate::NotSufficientlyRamified => {
                    f.a % (*p as i64) != 0 || !is_sufficiently_ramified(f, *p)
                }
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityError {
    /// The predicate admits no maximal form at p.
    DivisionByZeroDensity,
}

impl core::fmt::Display for DensityError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "the local predicate admits no maximal form")
    }
}

impl core::error::Error for DensityError {}

fn predicate_on_residues(pred: &LocalPredicate, a: u64, b: u64, c: u64, d: u64, p: u64) -> bool {
    // splitting data only sees residues mod p, and sufficient ramification
    // additionally needs p | a
    let n_div_p = a % p == 0;
    let ty = || {
        let f = BinaryCubicForm::new(
            (a % p) as i64,
            (b % p) as i64,
            (c % p) as i64,
            (d % p) as i64,
        );
        splitting_type_p(&f, p)
    };
    match pred {
        LocalPredicate::Any => true,
        LocalPredicate::SplittingTypes(ts) => ts.contains(&ty()),
        LocalPredicate::Unramified => matches!(
            ty(),
            PSplittingType::Split | PSplittingType::Mixed | PSplittingType::Inert
        ),
        LocalPredicate::SufficientlyRamified => {
            n_div_p && suffram_from_residues(b % p, c % p, d % p, p)
        }
        LocalPredicate::NotSufficientlyRamified => {
            !(n_div_p && suffram_from_residues(b % p, c % p, d % p, p))
        }
    }
}

/// Relative density of sufficiently ramified completions within the local
/// set cut out by the predicate, over forms with leading coefficient n
/// maximal at p. Computed by exhausting (b, c, d) mod p^2: maximality is
/// decided by those residues, and the predicate clauses by residues mod p.
pub fn rho_p(pred: &LocalPredicate, n: i64, p: u64) -> Result<Rational64, DensityError> {
    assert!(n >= 1);
    assert!((2..=13).contains(&p), "density enumeration is sized for small p");
    let pp = p * p;
    let a = (n as u64).rem_euclid(pp);
    let n_div_p = n % (p as i64) == 0;
    let mut admitted: u64 = 0;
    let mut ramified: u64 = 0;
    for b in 0..pp {
        for c in 0..pp {
            for d in 0..pp {
                if !maximal_from_residues(a, b, c, d, p) {
                    continue;
                }
                if !predicate_on_residues(pred, a, b, c, d, p) {
                    continue;
                }
                admitted += 1;
                if n_div_p && suffram_from_residues(b % p, c % p, d % p, p) {
                    ramified += 1;
                }
            }
        }
    }
    if admitted == 0 {
        return Err(DensityError::DivisionByZeroDensity);
    }
    Ok(Rational64::new(ramified as i64, admitted as i64))
}

/// Predicted class-group averages for the family of index-n fields cut out
/// by a specification. All entries are exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictionReport {
    pub n: i64,
    /// n = m^2 k with k squarefree.
    pub m: i64,
    pub k: i64,
    /// Product of (p + 1) over primes dividing k.
    pub sigma_k: i64,
    /// One density per odd-exponent prime of n.
    pub rho_factors: Vec<(u64, Rational64)>,
    pub rho: Rational64,
    pub avg_cl2_totally_real: Rational64,
    pub avg_cl2_complex: Rational64,
    pub avg_cl2_plus_totally_real: Rational64,
}

/// Splits n = m^2 k with k squarefree and returns (m, k, sigma(k), primes
/// of n with odd exponent).
fn square_split(n: i64) -> Result<(i64, i64, i64, Vec<u64>), FactorizationLimit> {
    let fac = factor_u64(n as u64)?;
    let mut m = 1i64;
    let mut k = 1i64;
    let mut sigma = 1i64;
    let mut odd = Vec::new();
    for &(p, e) in &fac {
        m *= (p as i64).pow(e / 2);
        if e % 2 == 1 {
            k *= p as i64;
            sigma *= p as i64 + 1;
            odd.push(p);
        }
    }
    Ok((m, k, sigma, odd))
}

/// Predicted averages of |Cl_2| and |Cl_2^+| for the height-ordered family
/// of index-n fields satisfying the specification:
///
///   totally real Cl_2:   5/4 + rho/4
///   complex Cl_2:        3/2 + rho/2
///   totally real Cl_2^+: 2 + rho/2
///
/// where rho multiplies the sufficiently-ramified densities over the
/// primes dividing n to odd order. With no constraints this collapses to
/// rho = 1/sigma(k).
pub fn predict(n: i64, spec: &LocalSpecification) -> Result<PredictionReport, DensityError> {
    assert!(n >= 1);
    assert!(spec.is_large(), "prediction needs a large specification");
    let (m, k, sigma_k, odd) = square_split(n).expect("factoring small n cannot fail");
    let mut rho = Rational64::new(1, 1);
    let mut rho_factors = Vec::new();
    for &p in &odd {
        let rp = rho_p(spec.predicate_at(p), n, p)?;
        rho_factors.push((p, rp));
        rho *= rp;
    }
    assert!(rho >= Rational64::new(0, 1) && rho <= Rational64::new(1, 1));
    let quarter = |num: i64, den: i64| Rational64::new(num, den);
    let report = PredictionReport {
        n,
        m,
        k,
        sigma_k,
        rho_factors,
        rho,
        avg_cl2_totally_real: quarter(5, 4) + rho / 4,
        avg_cl2_complex: quarter(3, 2) + rho / 2,
        avg_cl2_plus_totally_real: quarter(2, 1) + rho / 2,
    };
    if spec.constrained_primes().next().is_none() {
        // closed forms for the unrestricted family
        debug_assert_eq!(
            report.avg_cl2_totally_real,
            quarter(5, 4) + Rational64::new(1, 4 * sigma_k)
        );
        debug_assert_eq!(
            report.avg_cl2_complex,
            quarter(3, 2) + Rational64::new(1, 2 * sigma_k)
        );
    }
    Ok(report)
}

/// Verifies the root-of-unity expansion identity
///
///   sum over (e_i) in mu_N^T with prod e_i = c of prod (X_i + e_i Y_i)
///     = N^{|T|-1} (prod X_i + c prod Y_i)
///
/// on concrete integer values, over exact cyclotomic integers for
/// N in {2, 3, 4}. `c_exp` selects c = zeta_N^c_exp.
pub fn hanke_identity(n: u8, c_exp: u32, xs: &[i64], ys: &[i64]) -> bool {
    assert!(matches!(n, 2 | 3 | 4), "roots of unity supported for N = 2, 3, 4");
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    let t = xs.len();
    let c = CycInt::root(n, c_exp);
    let mut lhs = CycInt::zero(n);
    // enumerate exponent tuples with fixed sum mod N
    let mut exps = vec![0u32; t];
    loop {
        let sum: u32 = exps.iter().sum();
        if sum % n as u32 == c_exp % n as u32 {
            let mut term = CycInt::integer(n, 1);
            for i in 0..t {
                let e = CycInt::root(n, exps[i]).scale(ys[i]);
                term = term.mul(&CycInt::integer(n, xs[i]).add(&e));
            }
            lhs = lhs.add(&term);
        }
        // odometer
        let mut i = 0;
        loop {
            if i == t {
                let px: i64 = xs.iter().product();
                let py: i64 = ys.iter().product();
                let scale = (n as i64).pow(t as u32 - 1);
                let rhs = CycInt::integer(n, px * scale).add(&c.scale(py * scale));
                return lhs == rhs;
            }
            exps[i] += 1;
            if exps[i] < n as u32 {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Exact arithmetic in Z[zeta_N] for N in {2, 3, 4}, as a + b zeta.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct CycInt {
    n: u8,
    a: i64,
    b: i64,
}

impl CycInt {
    fn zero(n: u8) -> Self {
        CycInt { n, a: 0, b: 0 }
    }

    fn integer(n: u8, a: i64) -> Self {
        CycInt { n, a, b: 0 }
    }

    fn root(n: u8, exp: u32) -> Self {
        let mut out = CycInt::integer(n, 1);
        let zeta = match n {
            2 => CycInt { n, a: -1, b: 0 },
            _ => CycInt { n, a: 0, b: 1 },
        };
        for _ in 0..exp % n as u32 {
            out = out.mul(&zeta);
        }
        out
    }

    fn scale(&self, s: i64) -> Self {
        CycInt {
            n: self.n,
            a: self.a * s,
            b: self.b * s,
        }
    }

    fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        CycInt {
            n: self.n,
            a: self.a + o.a,
            b: self.b + o.b,
        }
    }

    fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let (a, b, c, d) = (self.a, self.b, o.a, o.b);
        // zeta^2 = -zeta - 1 for N = 3 and -1 for N = 4; b stays 0 for
        // N = 2 where zeta = -1 is already an integer
        match self.n {
            2 => CycInt {
                n: self.n,
                a: a * c,
                b: 0,
            },
            3 => CycInt {
                n: self.n,
                a: a * c - b * d,
                b: a * d + b * c - b * d,
            },
            4 => CycInt {
                n: self.n,
                a: a * c - b * d,
                b: a * d + b * c,
            },
            _ => unreachable!(),
        }
    }
}

/// Empirical class-group average over the censused fields of one family.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalReport {
    pub fields: u64,
    pub undecided: u64,
    pub sum_cl2: u64,
    pub sum_cl2_plus: u64,
    /// Undecided censuses above one percent disqualify the report.
    pub acceptable: bool,
}

impl EmpiricalReport {
    pub fn avg_cl2(&self) -> f64 {
        self.sum_cl2 as f64 / self.fields as f64
    }

    pub fn avg_cl2_plus(&self) -> f64 {
        self.sum_cl2_plus as f64 / self.fields as f64
    }
}

/// Mean 2-torsion over the maximal fields of an enumeration window that
/// satisfy the specification. Failures are counted, not guessed: a form
/// whose maximality cannot be decided or whose census does not stabilize
/// lands in `undecided`, and more than one percent of those flags the
/// whole report.
pub fn average_cl2(window: &EnumWindow, spec: &LocalSpecification) -> EmpiricalReport {
    let mut fields = Vec::new();
    let mut undecided = 0u64;
    enumerate_window(window, |f| {
        if f.disc() == 0 || !f.is_generic() {
            return;
        }
        match is_maximal(&f) {
            Ok(true) => {
                if spec.admits(&f) {
                    fields.push(f);
                }
            }
            Ok(false) => {}
            Err(_) => undecided += 1,
        }
    });
    let mut report = EmpiricalReport {
        fields: 0,
        undecided,
        sum_cl2: 0,
        sum_cl2_plus: 0,
        acceptable: true,
    };
    for r in &census_family(&fields) {
        match r {
            Ok(c) => {
                report.fields += 1;
                report.sum_cl2 += c.cl2;
                report.sum_cl2_plus += c.cl2_plus;
            }
            Err(_) => report.undecided += 1,
        }
    }
    report.acceptable = report.undecided * 100 <= report.fields + report.undecided;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::SignFilter;

    #[test]
    fn unrestricted_density_is_the_reciprocal_of_p_plus_one() {
        for (n, p) in [(2i64, 2u64), (4, 2), (3, 3), (12, 3), (8, 2)] {
            assert_eq!(
                rho_p(&LocalPredicate::Any, n, p).unwrap(),
                Rational64::new(1, p as i64 + 1)
            );
        }
    }

    #[test]
    fn constrained_densities_hit_their_closed_forms() {
        assert_eq!(
            rho_p(&LocalPredicate::Unramified, 2, 2).unwrap(),
            Rational64::new(0, 1)
        );
        assert_eq!(
            rho_p(&LocalPredicate::SufficientlyRamified, 2, 2).unwrap(),
            Rational64::new(1, 1)
        );
        assert_eq!(
            rho_p(&LocalPredicate::NotSufficientlyRamified, 2, 2).unwrap(),
            Rational64::new(0, 1)
        );
        // restricting toward ramification never lowers the density
        let any = rho_p(&LocalPredicate::Any, 2, 2).unwrap();
        let unram = rho_p(&LocalPredicate::Unramified, 2, 2).unwrap();
        let suff = rho_p(&LocalPredicate::SufficientlyRamified, 2, 2).unwrap();
        assert!(unram <= any && any <= suff);
    }

    #[test]
    fn empty_local_sets_are_an_error_not_a_zero() {
        // sufficiently ramified at a prime not dividing n is impossible
        assert_eq!(
            rho_p(&LocalPredicate::SufficientlyRamified, 1, 2),
            Err(DensityError::DivisionByZeroDensity)
        );
    }

    #[test]
    fn predictions_for_the_monic_family() {
        let r = predict(1, &LocalSpecification::unrestricted()).unwrap();
        assert_eq!(r.rho, Rational64::new(1, 1));
        assert_eq!(r.avg_cl2_totally_real, Rational64::new(3, 2));
        assert_eq!(r.avg_cl2_complex, Rational64::new(2, 1));
        assert_eq!(r.avg_cl2_plus_totally_real, Rational64::new(5, 2));
    }

    #[test]
    fn predictions_track_the_squarefree_part() {
        let r2 = predict(2, &LocalSpecification::unrestricted()).unwrap();
        assert_eq!((r2.m, r2.k, r2.sigma_k), (1, 2, 3));
        assert_eq!(r2.avg_cl2_totally_real, Rational64::new(4, 3));
        let r12 = predict(12, &LocalSpecification::unrestricted()).unwrap();
        assert_eq!((r12.m, r12.k, r12.sigma_k), (2, 3, 4));
        assert_eq!(r12.avg_cl2_complex, Rational64::new(13, 8));
        // a square index behaves like the monic family
        let r4 = predict(4, &LocalSpecification::unrestricted()).unwrap();
        assert_eq!(r4.rho, Rational64::new(1, 1));
        assert_eq!(r4.avg_cl2_complex, Rational64::new(2, 1));
    }

    #[test]
    fn unramified_families_lose_the_ramified_mass() {
        let spec = LocalSpecification::unrestricted().with(2, LocalPredicate::Unramified);
        let r = predict(2, &spec).unwrap();
        assert_eq!(r.rho, Rational64::new(0, 1));
        assert_eq!(r.avg_cl2_totally_real, Rational64::new(5, 4));
        assert_eq!(r.avg_cl2_complex, Rational64::new(3, 2));
    }

    #[test]
    fn root_of_unity_identity_for_signs() {
        // symbolic check at |T| = 2, c = +1:
        // (X1+Y1)(X2+Y2) + (X1-Y1)(X2-Y2) = 2(X1X2 + Y1Y2)
        assert!(hanke_identity(2, 0, &[3, -5], &[7, 11]));
        assert!(hanke_identity(2, 1, &[3, -5], &[7, 11]));
        for t in 1..=5usize {
            let xs: Vec<i64> = (0..t).map(|i| 3 * i as i64 - 4).collect();
            let ys: Vec<i64> = (0..t).map(|i| 2 * i as i64 + 5).collect();
            assert!(hanke_identity(2, 0, &xs, &ys));
            assert!(hanke_identity(2, 1, &xs, &ys));
        }
    }

    #[test]
    fn root_of_unity_identity_for_higher_orders() {
        for n in [3u8, 4] {
            for c_exp in 0..n as u32 {
                let xs = [2i64, -3, 5];
                let ys = [1i64, 4, -2];
                assert!(hanke_identity(n, c_exp, &xs, &ys));
            }
        }
    }

    #[test]
    fn empirical_average_runs_on_a_small_complex_window() {
        let w = EnumWindow::new(1, 40_000, SignFilter::Minus);
        let r = average_cl2(&w, &LocalSpecification::unrestricted());
        assert!(r.acceptable);
        assert!(r.fields > 50);
        let avg = r.avg_cl2();
        assert!(avg > 1.0 && avg < 3.0, "avg = {avg}");
    }
}
