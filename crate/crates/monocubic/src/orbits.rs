//! Integral orbit censuses over a fixed binary cubic resolvent.
//!
//! For an index form f = (n, b, c, d) the fibers of the resolvent map on
//! pairs (A, B) of integral ternary quadratic forms split into finitely many
//! orbits under the stabilizer of A. Fixing A = x1 x3 - n x2^2 identifies the
//! fiber orbits with classes of binary quartics q whose coefficient vector
//! lies in the sublattice n | d, n^2 | e and whose invariants match those of
//! f; fixing a definite A there is no quartic model and the fiber is searched
//! directly. `orbit_census` assembles both parts, `census_family` amortizes
//! the quartic search over a large batch of resolvents, and `class_reps_qn`
//! produces the classes of A that have to be considered in the first place.
//!
//! Every search box here is a completeness heuristic, not a proof, except the
//! definite fiber box which is rigorous. Boxes grow by doubling until the
//! censused orbit set is unchanged through two consecutive doublings; a
//! census that fails to stabilize (or fails an internal consistency check)
//! comes back as `IncompleteCensus`, never as a number.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_integer::{div_ceil, div_floor};

use crate::cubic::{BinaryCubicForm, GL2Element};
use crate::int::{factor_u64, icbrt_i128, isqrt_i128, perfect_square};
use crate::quartic::BinaryQuarticForm;
use crate::ternary::{
    an_form, hasse_invariant, kappa_infty, kappa_p, resolvent, Kappa, PairTQF, Place,
    RealSplittingType, TernaryQuadraticForm,
};

/// A census that could not be completed honestly.
///
/// Callers must treat this as "undecided": the field (or class list) it
/// refers to carries no count at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CensusError {
    /// A growth ladder ran out of budget before stabilizing twice, or a
    /// stabilized result failed an internal consistency check.
    IncompleteCensus { stage: &'static str },
    /// The census engines only cover small leading coefficients.
    UnsupportedIndex { n: i64 },
}

impl core::fmt::Display for CensusError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CensusError::IncompleteCensus { stage } => {
                write!(f, "census did not stabilize: {stage}")
            }
            CensusError::UnsupportedIndex { n } => {
                write!(f, "orbit census not implemented for index {n}")
            }
        }
    }
}

impl core::error::Error for CensusError {}

const INCOMPLETE_FACTOR: CensusError = CensusError::IncompleteCensus {
    stage: "discriminant factorization",
};

// ---------------------------------------------------------------------------
// classes of the fixed form A with 4 det(A) = n
// ---------------------------------------------------------------------------

/// One SL3(Z)-class of integral ternary quadratic forms with 4 det = n.
#[derive(Debug, Clone)]
pub struct QnClassRep {
    pub form: TernaryQuadraticForm,
    /// (3,0) signature. Definite classes have no quartic model.
    pub definite: bool,
    /// Good at every prime dividing n (residual conic is a pair of distinct
    /// lines there).
    pub good: bool,
    /// Residual line classification at each prime dividing n.
    pub kappa: Vec<(u64, Kappa)>,
    /// +1 iff isotropic over the reals.
    pub kappa_infinity: i8,
    /// Hasse invariants at the primes dividing 2n.
    pub hasse: Vec<(u64, i8)>,
}

/// The full class list for one index n, with pairwise distinctness and
/// genus coverage certified during construction.
#[derive(Debug, Clone)]
pub struct QnClassSet {
    pub n: i64,
    pub reps: Vec<QnClassRep>,
}

/// Coefficient vector (a11, a22, a33, a12, a13, a23) of a ternary form.
type Tern6 = [i64; 6];

fn tern_to_form(c: &Tern6) -> TernaryQuadraticForm {
    TernaryQuadraticForm::new(c[0], c[1], c[2], c[3], c[4], c[5])
}

fn tern_det4(c: &Tern6) -> i128 {
    let [a11, a22, a33, a12, a13, a23] = c.map(|x| x as i128);
    4 * a11 * a22 * a33 - a11 * a23 * a23 - a12 * a12 * a33 + a12 * a13 * a23 - a13 * a13 * a22
}

/// Congruence action on coefficient vectors: Gram -> g Gram g^t for the row
/// substitution x -> x g. Returns None on i64 overflow.
fn tern_transform(c: &Tern6, g: &[[i64; 3]; 3]) -> Option<Tern6> {
    let two_gram: [[i128; 3]; 3] = [
        [2 * c[0] as i128, c[3] as i128, c[4] as i128],
        [c[3] as i128, 2 * c[1] as i128, c[5] as i128],
        [c[4] as i128, c[5] as i128, 2 * c[2] as i128],
    ];
    let mut gm = [[0i128; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0i128;
            for (k, row) in two_gram.iter().enumerate() {
                s += g[i][k] as i128 * row[j];
            }
            gm[i][j] = s;
        }
    }
    let mut out = [[0i128; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0i128;
            for k in 0..3 {
                s += gm[i][k] * g[j][k] as i128;
            }
            out[i][j] = s;
        }
    }
    debug_assert!(out[0][0] % 2 == 0 && out[1][1] % 2 == 0 && out[2][2] % 2 == 0);
    let conv = |v: i128| i64::try_from(v).ok();
    Some([
        conv(out[0][0] / 2)?,
        conv(out[1][1] / 2)?,
        conv(out[2][2] / 2)?,
        conv(out[0][1])?,
        conv(out[0][2])?,
        conv(out[1][2])?,
    ])
}

/// Walk generators for SL3(Z): elementary shears plus a few signed
/// permutations to speed up coefficient descent.
fn sl3_walk_generators() -> Vec<[[i64; 3]; 3]> {
    let mut gens = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            for t in [1i64, -1] {
                let mut g = [[0i64; 3]; 3];
                for (k, row) in g.iter_mut().enumerate() {
                    row[k] = 1;
                }
                g[i][j] = t;
                gens.push(g);
            }
        }
    }
    gens.push([[0, 1, 0], [0, 0, 1], [1, 0, 0]]);
    gens.push([[0, 0, 1], [1, 0, 0], [0, 1, 0]]);
    gens.push([[1, 0, 0], [0, -1, 0], [0, 0, -1]]);
    gens.push([[-1, 0, 0], [0, 1, 0], [0, 0, -1]]);
    gens.push([[-1, 0, 0], [0, -1, 0], [0, 0, 1]]);
    gens.push([[0, 1, 0], [1, 0, 0], [0, 0, -1]]);
    gens
}

fn tern_key(c: &Tern6) -> (i128, Tern6) {
    let ss: i128 = c.iter().map(|&x| (x as i128) * (x as i128)).sum();
    (ss, *c)
}

/// Greedy coefficient descent along the walk generators.
fn tern_descend(start: Tern6, gens: &[[[i64; 3]; 3]]) -> Tern6 {
    let mut cur = start;
    let mut key = tern_key(&cur);
    let mut steps = 0usize;
    loop {
        let mut moved = false;
        for g in gens {
            if let Some(img) = tern_transform(&cur, g) {
                let k = tern_key(&img);
                if k < key {
                    cur = img;
                    key = k;
                    moved = true;
                    break;
                }
            }
        }
        steps += 1;
        if !moved || steps > 10_000 {
            return cur;
        }
    }
}

/// Partition descended candidates into classes: walk with a tight
/// coefficient cap first and widen gradually, so the search region never
/// balloons to the full class graph.
///
/// Acceptance is two-tier. If every component carries a distinct invariant
/// tuple the split is provably correct (the tuple is a class invariant).
/// Forms that are not good can share a tuple, so for them the fallback is
/// the stabilization heuristic: the component count must survive a cap
/// widening unchanged. Duplicate tuples among good components always force
/// a wider walk, since a good class is pinned by its tuple.
fn tern_classes(
    n: i64,
    cands: &BTreeSet<Tern6>,
    gens: &[[[i64; 3]; 3]],
) -> Result<Vec<Vec<Tern6>>, CensusError> {
    let base = cands
        .iter()
        .flat_map(|c| c.iter().map(|x| x.abs()))
        .max()
        .unwrap_or(1);
    let mut any_walk_finished = false;
    let mut prev_count = usize::MAX;
    for extra in [2i64, 4, 8, 16] {
        let Ok(groups) = tern_components(cands, gens, base + extra, 4_000_000) else {
            continue;
        };
        any_walk_finished = true;
        let reps: Vec<QnClassRep> = groups
            .iter()
            .map(|g| {
                let c = g.iter().min_by_key(|c| tern_key(c)).unwrap();
                classify_rep(&tern_to_form(c), n)
            })
            .collect();
        let mut all_tuples: Vec<_> = reps.iter().map(rep_tuple).collect();
        all_tuples.sort();
        let all_distinct = all_tuples.windows(2).all(|w| w[0] != w[1]);
        if all_distinct {
            return Ok(groups);
        }
        let mut good_tuples: Vec<_> = reps
            .iter()
            .filter(|r| r.good)
            .map(rep_tuple)
            .collect();
        good_tuples.sort();
        let good_distinct = good_tuples.windows(2).all(|w| w[0] != w[1]);
        if good_distinct && groups.len() == prev_count {
            return Ok(groups);
        }
        prev_count = groups.len();
    }
    Err(CensusError::IncompleteCensus {
        stage: if any_walk_finished {
            "class separation"
        } else {
            "class walk budget"
        },
    })
}

/// Partition a candidate set into connected components under the walk, with
/// a node budget and a coefficient cap on intermediate forms.
fn tern_components(
    cands: &BTreeSet<Tern6>,
    gens: &[[[i64; 3]; 3]],
    cap: i64,
    budget: usize,
) -> Result<Vec<Vec<Tern6>>, CensusError> {
    let mut comp_of: BTreeMap<Tern6, u32> = BTreeMap::new();
    let mut parent: Vec<u32> = Vec::new();
    fn find(parent: &mut Vec<u32>, mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let up = parent[parent[x as usize] as usize];
            parent[x as usize] = up;
            x = up;
        }
        x
    }
    let mut nodes = 0usize;
    for start in cands {
        if comp_of.contains_key(start) {
            continue;
        }
        let id = parent.len() as u32;
        parent.push(id);
        comp_of.insert(*start, id);
        let mut queue = vec![*start];
        while let Some(cur) = queue.pop() {
            nodes += 1;
            if nodes > budget {
                return Err(CensusError::IncompleteCensus {
                    stage: "class walk budget",
                });
            }
            for g in gens {
                let img = match tern_transform(&cur, g) {
                    Some(v) => v,
                    None => continue,
                };
                if img.iter().any(|&x| x.abs() > cap) {
                    continue;
                }
                match comp_of.get(&img) {
                    Some(&other) => {
                        let (ra, rb) = (find(&mut parent, other), find(&mut parent, id));
                        if ra != rb {
                            parent[ra as usize] = rb;
                        }
                    }
                    None => {
                        comp_of.insert(img, id);
                        queue.push(img);
                    }
                }
            }
        }
    }
    let mut groups: BTreeMap<u32, Vec<Tern6>> = BTreeMap::new();
    for c in cands {
        let root = find(&mut parent, comp_of[c]);
        groups.entry(root).or_default().push(*c);
    }
    Ok(groups.into_values().collect())
}

/// All forms with 4 det = n and coefficients bounded by `bx`, found by
/// solving for a23 one tuple at a time.
fn qn_box_candidates(n: i64, bx: i64) -> Vec<Tern6> {
    let n128 = n as i128;
    let mut out = Vec::new();
    let mut push = |c: Tern6| {
        debug_assert_eq!(tern_det4(&c), n128);
        out.push(c);
    };
    for a11 in -bx..=bx {
        for a22 in -bx..=bx {
            for a33 in -bx..=bx {
                for a12 in -bx..=bx {
                    for a13 in -bx..=bx {
                        let (p, q, r) = (a11 as i128, a12 as i128 * a13 as i128, {
                            4 * a11 as i128 * a22 as i128 * a33 as i128
                                - a12 as i128 * a12 as i128 * a33 as i128
                                - a13 as i128 * a13 as i128 * a22 as i128
                        });
                        // det4 = -p t^2 + q t + r = n in t = a23
                        if p != 0 {
                            // p t^2 - q t + (n - r) = 0
                            let disc = q * q - 4 * p * (n128 - r);
                            if disc < 0 {
                                continue;
                            }
                            if let Some(s) = perfect_square(disc) {
                                for sg in [s, -s] {
                                    let num = q + sg;
                                    if num % (2 * p) == 0 {
                                        let t = num / (2 * p);
                                        if t.abs() <= bx as i128 && (sg != -s || s != 0) {
                                            push([a11, a22, a33, a12, a13, t as i64]);
                                        }
                                    }
                                    if s == 0 {
                                        break;
                                    }
                                }
                            }
                        } else if q != 0 {
                            let num = n128 - r;
                            if num % q == 0 {
                                let t = num / q;
                                if t.abs() <= bx as i128 {
                                    push([a11, a22, a33, a12, a13, t as i64]);
                                }
                            }
                        } else if r == n128 {
                            for t in -bx..=bx {
                                push([a11, a22, a33, a12, a13, t]);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
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

fn classify_rep(form: &TernaryQuadraticForm, n: i64) -> QnClassRep {
    let sig = form.signature();
    let definite = sig == (3, 0);
    let nprimes = prime_divisors(n as u64);
    let kappa: Vec<(u64, Kappa)> = nprimes.iter().map(|&p| (p, kappa_p(form, p))).collect();
    let good = kappa.iter().all(|&(_, k)| k != Kappa::NotGood);
    let mut hps = prime_divisors(2 * n as u64);
    if !hps.contains(&2) {
        hps.insert(0, 2);
    }
    let hasse = hps
        .iter()
        .map(|&p| (p, hasse_invariant(form, Place::Finite(p))))
        .collect();
    QnClassRep {
        definite,
        good,
        kappa,
        kappa_infinity: kappa_infty(form),
        hasse,
        form: form.clone(),
    }
}

fn rep_tuple(r: &QnClassRep) -> (bool, Vec<(u64, i8)>, i8, Vec<(u64, i8)>) {
    let ks = r
        .kappa
        .iter()
        .map(|&(p, k)| (p, k.sign().unwrap_or(0)))
        .collect();
    (r.definite, ks, r.kappa_infinity, r.hasse.clone())
}

/// Classes of integral ternary quadratic forms with 4 det = n, certified
/// three ways: box growth stabilizes twice, good classes are pinned by
/// their invariant tuples, and the good tuples realized are exactly the
/// admissible ones.
///
/// Admissibility: a good class carries a free sign at every prime dividing
/// n, the product of the odd-exponent signs forces the real isotropy, and
/// each full sign pattern belongs to exactly one good class.
pub fn class_reps_qn(n: i64) -> Result<QnClassSet, CensusError> {
    assert!(n >= 1, "class list needs n >= 1");
    let gens = sl3_walk_generators();
    let mut history: Vec<Vec<Tern6>> = Vec::new();
    let mut bx = 2i64;
    let groups = loop {
        let raw = qn_box_candidates(n, bx);
        let descended: BTreeSet<Tern6> =
            raw.iter().map(|c| tern_descend(*c, &gens)).collect();
        let groups = tern_classes(n, &descended, &gens)?;
        let mut reps: Vec<Tern6> = groups
            .iter()
            .map(|g| g.iter().min_by_key(|c| tern_key(c)).copied().unwrap())
            .collect();
        reps.sort_unstable();
        history.push(reps);
        let h = history.len();
        if h >= 3 && history[h - 1] == history[h - 2] && history[h - 2] == history[h - 3] {
            break groups;
        }
        if bx >= 16 {
            return Err(CensusError::IncompleteCensus {
                stage: "class box growth",
            });
        }
        bx *= 2;
    };
    let mut reps: Vec<QnClassRep> = groups
        .iter()
        .map(|g| {
            let c = g.iter().min_by_key(|c| tern_key(c)).unwrap();
            classify_rep(&tern_to_form(c), n)
        })
        .collect();
    reps.sort_by_key(|r| (r.definite, !r.good));

    // distinctness certificate: good classes must have distinct tuples
    let good: Vec<&QnClassRep> = reps.iter().filter(|r| r.good).collect();
    for i in 0..good.len() {
        for j in i + 1..good.len() {
            if rep_tuple(good[i]) == rep_tuple(good[j]) {
                return Err(CensusError::IncompleteCensus {
                    stage: "class separation",
                });
            }
        }
    }
    // the odd-exponent signs of a good class determine its real isotropy
    let odd_primes: Vec<u64> = prime_divisors(n as u64)
        .into_iter()
        .filter(|&p| {
            let mut v = 0u32;
            let mut m = n as u64;
            while m % p == 0 {
                v += 1;
                m /= p;
            }
            v % 2 == 1
        })
        .collect();
    for r in &good {
        let mut prod = 1i8;
        for &(p, k) in &r.kappa {
            let s = k.sign().unwrap();
            if odd_primes.contains(&p) {
                prod *= s;
            }
        }
        if prod != r.kappa_infinity {
            return Err(CensusError::IncompleteCensus {
                stage: "class sign product",
            });
        }
    }
    // coverage and uniqueness: each full sign pattern over the primes of n
    // belongs to exactly one good class
    let all_primes = prime_divisors(n as u64);
    for mask in 0..(1u32 << all_primes.len()) {
        let want: Vec<(u64, i8)> = all_primes
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, if mask >> i & 1 == 1 { -1 } else { 1 }))
            .collect();
        let realized = good
            .iter()
            .filter(|r| {
                want.iter().all(|&(p, s)| {
                    r.kappa
                        .iter()
                        .any(|&(q, k)| q == p && k.sign() == Some(s))
                })
            })
            .count();
        if realized != 1 {
            return Err(CensusError::IncompleteCensus {
                stage: "class coverage",
            });
        }
    }
    Ok(QnClassSet { n, reps })
}

/// All integral automorphs of A with determinant 1 and entries bounded by
/// `bound`, found by assembling rows from the vectors representing the
/// diagonal coefficients.
pub fn automorphs(a: &TernaryQuadraticForm, bound: i64) -> Vec<[[i64; 3]; 3]> {
    let conv = |v: &num_bigint::BigInt| -> i64 {
        i64::try_from(v.clone()).expect("automorph search needs i64 coefficients")
    };
    let c: Tern6 = [
        conv(&a.a11),
        conv(&a.a22),
        conv(&a.a33),
        conv(&a.a12),
        conv(&a.a13),
        conv(&a.a23),
    ];
    let two_gram: [[i128; 3]; 3] = [
        [2 * c[0] as i128, c[3] as i128, c[4] as i128],
        [c[3] as i128, 2 * c[1] as i128, c[5] as i128],
        [c[4] as i128, c[5] as i128, 2 * c[2] as i128],
    ];
    let bilin = |u: &[i64; 3], v: &[i64; 3]| -> i128 {
        let mut s = 0i128;
        for i in 0..3 {
            for j in 0..3 {
                s += u[i] as i128 * two_gram[i][j] * v[j] as i128;
            }
        }
        s
    };
    // rows by diagonal target: row i must satisfy A[v] = a_ii
    let mut rows: [Vec<[i64; 3]>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for x in -bound..=bound {
        for y in -bound..=bound {
            for z in -bound..=bound {
                let v = [x, y, z];
                let q2 = bilin(&v, &v);
                for i in 0..3 {
                    if q2 == 2 * c[i] as i128 {
                        rows[i].push(v);
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for r1 in &rows[0] {
        for r2 in &rows[1] {
            if bilin(r1, r2) != c[3] as i128 {
                continue;
            }
            for r3 in &rows[2] {
                if bilin(r1, r3) != c[4] as i128 || bilin(r2, r3) != c[5] as i128 {
                    continue;
                }
                let g = [*r1, *r2, *r3];
                if crate::ternary::det3_i64(&g) == 1 {
                    out.push(g);
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// quartic census: candidates, normalization, grouping
// ---------------------------------------------------------------------------

/// Generators of the subgroup of GL2(Z) preserving the coefficient lattice
/// n | d, n^2 | e. Shears on the first variable must move in steps of n;
/// everything else is unrestricted. For n = 2 the lattice has an extra
/// projective symmetry of determinant 2, applied through `act_scaled`.
enum CensusGen {
    Exact(GL2Element),
    Scaled(GL2Element),
}

fn census_generators(n: i64) -> Vec<CensusGen> {
    let mut gens = vec![
        CensusGen::Exact(GL2Element::translation(n)),
        CensusGen::Exact(GL2Element::translation(-n)),
        CensusGen::Exact(GL2Element { p: 1, q: 1, r: 0, s: 1 }),
        CensusGen::Exact(GL2Element { p: 1, q: -1, r: 0, s: 1 }),
        CensusGen::Exact(GL2Element { p: 1, q: 0, r: 0, s: -1 }),
    ];
    match n {
        1 => gens.push(CensusGen::Exact(GL2Element { p: 0, q: 1, r: 1, s: 0 })),
        2 => {
            gens.push(CensusGen::Scaled(GL2Element { p: 2, q: 1, r: 2, s: 2 }));
            gens.push(CensusGen::Scaled(GL2Element { p: 2, q: -1, r: -2, s: 2 }));
        }
        _ => panic!("census generators only known for n <= 2"),
    }
    gens
}

/// Canonical representative of a quartic under the lattice shears (and the
/// sign flip when the leading coefficient vanishes): a != 0 gets b reduced
/// into [0, 4|a|n); a = 0 gets b > 0 and c reduced into [0, 3bn).
fn norm_quartic(n: i64, q: &BinaryQuarticForm) -> BinaryQuarticForm {
    if q.a != 0 {
        let m = 4 * q.a.abs() * n;
        let t = (q.b.rem_euclid(m) - q.b) / (4 * q.a);
        debug_assert_eq!(t % n, 0);
        q.translate(t)
    } else {
        debug_assert!(q.b != 0, "degenerate quartic in census");
        let q = if q.b < 0 {
            BinaryQuarticForm::new(0, -q.b, q.c, -q.d, q.e)
        } else {
            *q
        };
        let m = 3 * q.b * n;
        let t = (q.c.rem_euclid(m) - q.c) / (3 * q.b);
        debug_assert_eq!(t % n, 0);
        q.translate(t)
    }
}

/// Quartics with a = 0, prescribed invariants, and b-slot in the coefficient
/// lattice. Complete independently of any search box: b must be a positive
/// integer whose square divides the quartic discriminant.
fn a0_candidates(
    n: i64,
    iv: i128,
    jv: i128,
    bfm: i64,
) -> Result<Vec<BinaryQuarticForm>, CensusError> {
    let dq = (4 * iv * iv * iv - jv * jv) / 27;
    debug_assert_eq!((4 * iv * iv * iv - jv * jv) % 27, 0);
    let m = u64::try_from(dq.abs()).map_err(|_| INCOMPLETE_FACTOR)?;
    let fac = factor_u64(m).map_err(|_| INCOMPLETE_FACTOR)?;
    // divisors of the square part
    let mut divs: Vec<u64> = vec![1];
    for (p, e) in fac {
        let reps = e / 2;
        if reps == 0 {
            continue;
        }
        let base = divs.clone();
        let mut pk = 1u64;
        for _ in 0..reps {
            pk *= p;
            divs.extend(base.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    let nn = n * n;
    let mut out = Vec::new();
    for b in divs {
        let b = i64::try_from(b).map_err(|_| INCOMPLETE_FACTOR)?;
        let b128 = b as i128;
        let mut c = bfm;
        while c < 3 * b * n {
            let c128 = c as i128;
            let dnum = c128 * c128 - iv;
            if dnum % (3 * b128) == 0 {
                let d = dnum / (3 * b128);
                if d % n as i128 == 0 {
                    let enum_ = 9 * b128 * c128 * d - 2 * c128 * c128 * c128 - jv;
                    if enum_ % (27 * b128 * b128) == 0 {
                        let e = enum_ / (27 * b128 * b128);
                        if e % nn as i128 == 0 {
                            let q = BinaryQuarticForm::new(
                                0,
                                b,
                                c,
                                i64::try_from(d).expect("a0 candidate overflow"),
                                i64::try_from(e).expect("a0 candidate overflow"),
                            );
                            debug_assert_eq!(q.i_invariant(), iv);
                            debug_assert_eq!(q.j_invariant(), jv);
                            out.push(q);
                        }
                    }
                }
            }
            c += 3 * n;
        }
    }
    Ok(out)
}

/// Window scan for quartics with a != 0 and prescribed invariants: for each
/// (a, b, c) in the box the seminvariant syzygy pins R^2, and d, e follow by
/// exact division. Level g doubles every box dimension.
fn scan_quartics_single(
    n: i64,
    iv: i128,
    jv: i128,
    bfm: i64,
    level: i64,
) -> Vec<BinaryQuarticForm> {
    let y = (4 * iv * iv * iv).abs().max(jv * jv);
    let abox = i64::try_from(level as i128 * (2 + isqrt_i128(icbrt_i128(y))))
        .expect("census window too wide");
    let wbox = level as i128 * (2 + isqrt_i128(3 * iv.abs()) + icbrt_i128(jv.abs()));
    let nn = (n * n) as i128;
    let mut out = Vec::new();
    for aa in 1..=abox {
        for a in [aa, -aa] {
            let a128 = a as i128;
            for b in 0..4 * aa * n {
                let b128 = b as i128;
                let hb = 4 * aa as i128 * wbox;
                let b23 = 3 * b128 * b128;
                // H = 8ac - 3b^2 ranges over [-hb, hb]
                let (e1, e2) = (
                    div_ceil(b23 - hb, 8 * a128),
                    div_floor(b23 + hb, 8 * a128),
                );
                let (clo, chi) = if e1 <= e2 { (e1, e2) } else { (e2 + 1, e1) };
                let mut c = {
                    let shift = (bfm as i128 - clo).rem_euclid(3 * n as i128);
                    clo + shift
                };
                while c <= chi {
                    let h = 8 * a128 * c - b23;
                    let num = 48 * a128 * a128 * iv * h - 64 * a128 * a128 * a128 * jv
                        - h * h * h;
                    if num >= 0 && num % 27 == 0 {
                        if let Some(r) = perfect_square(num / 27) {
                            for sg in [r, -r] {
                                let dnum = sg - b128 * b128 * b128 + 4 * a128 * b128 * c;
                                if dnum % (8 * a128 * a128) == 0 {
                                    let d = dnum / (8 * a128 * a128);
                                    if d % n as i128 == 0 {
                                        let enum_ = iv + 3 * b128 * d - c * c;
                                        if enum_ % (12 * a128) == 0 {
                                            let e = enum_ / (12 * a128);
                                            if e % nn == 0 {
                                                let q = BinaryQuarticForm::new(
                                                    a,
                                                    b,
                                                    i64::try_from(c).expect("census overflow"),
                                                    i64::try_from(d).expect("census overflow"),
                                                    i64::try_from(e).expect("census overflow"),
                                                );
                                                debug_assert_eq!(q.i_invariant(), iv);
                                                debug_assert_eq!(q.j_invariant(), jv);
                                                out.push(q);
                                            }
                                        }
                                    }
                                }
                                if r == 0 {
                                    break;
                                }
                            }
                        }
                    }
                    c += 3 * n as i128;
                }
            }
        }
    }
    out
}

/// Orbits of a candidate set under the lattice-preserving group, as
/// connected components of the generator graph on normalized forms.
struct GroupedOrbits {
    /// Minimal member of each component, sorted; doubles as the stabilization
    /// fingerprint.
    reps: Vec<BinaryQuarticForm>,
    types: Vec<RealSplittingType>,
    /// Index of the component containing the monic canary (0, 1, *, *, *).
    canary_at: usize,
}

/// Size-first ordering; component minima under this key stop changing once
/// the smallest member has entered the box, unlike plain lexicographic
/// order where ever larger boxes supply ever more negative leaders.
fn quartic_key(q: &BinaryQuarticForm) -> (i128, [i64; 5]) {
    let t = [q.a, q.b, q.c, q.d, q.e];
    (t.iter().map(|&x| (x as i128) * (x as i128)).sum(), t)
}

fn quartic_real_type(q: &BinaryQuarticForm) -> RealSplittingType {
    if q.disc() < 0 {
        RealSplittingType::T112
    } else {
        match q.real_root_count() {
            4 => RealSplittingType::T1111,
            0 if q.a > 0 => RealSplittingType::T22Plus,
            0 => RealSplittingType::T22Minus,
            _ => unreachable!("positive discriminant quartic with odd root count"),
        }
    }
}

fn group_candidates(
    n: i64,
    cands: &BTreeSet<BinaryQuarticForm>,
    canary: &BinaryQuarticForm,
    budget: usize,
) -> Result<GroupedOrbits, CensusError> {
    assert!(cands.contains(canary), "canary missing from candidate set");
    let gens = census_generators(n);
    // wander room: generous multiples of the candidate coefficient scale
    let mx = |f: fn(&BinaryQuarticForm) -> i64| -> i64 {
        cands.iter().map(|q| f(q).abs()).max().unwrap_or(1)
    };
    let caps = [
        16 * (mx(|q| q.a) + 2),
        16 * (mx(|q| q.b) + 2),
        32 * (mx(|q| q.c) + 4),
        32 * (mx(|q| q.d) + 4),
        32 * (mx(|q| q.e) + 4),
    ];
    let within = |q: &BinaryQuarticForm| {
        q.a.abs() <= caps[0]
            && q.b.abs() <= caps[1]
            && q.c.abs() <= caps[2]
            && q.d.abs() <= caps[3]
            && q.e.abs() <= caps[4]
    };
    let mut comp_of: BTreeMap<BinaryQuarticForm, u32> = BTreeMap::new();
    let mut parent: Vec<u32> = Vec::new();
    fn find(parent: &mut Vec<u32>, mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let up = parent[parent[x as usize] as usize];
            parent[x as usize] = up;
            x = up;
        }
        x
    }
    let mut nodes = 0usize;
    for start in cands {
        if comp_of.contains_key(start) {
            continue;
        }
        let id = parent.len() as u32;
        parent.push(id);
        comp_of.insert(*start, id);
        let mut queue = vec![*start];
        while let Some(cur) = queue.pop() {
            nodes += 1;
            if nodes > budget {
                return Err(CensusError::IncompleteCensus {
                    stage: "orbit walk budget",
                });
            }
            for g in &gens {
                let img = match g {
                    CensusGen::Exact(m) => Some(cur.act_gl2(m)),
                    CensusGen::Scaled(m) => cur.act_scaled(m),
                };
                let img = match img {
                    Some(v) => v,
                    None => {
                        debug_assert!(false, "scaled generator left the lattice");
                        continue;
                    }
                };
                debug_assert_eq!((img.c - cur.c).rem_euclid(3 * n), 0);
                let img = norm_quartic(n, &img);
                if !within(&img) {
                    continue;
                }
                match comp_of.get(&img) {
                    Some(&other) => {
                        let (ra, rb) = (find(&mut parent, other), find(&mut parent, id));
                        if ra != rb {
                            parent[ra as usize] = rb;
                        }
                    }
                    None => {
                        comp_of.insert(img, id);
                        queue.push(img);
                    }
                }
            }
        }
    }
    let mut groups: BTreeMap<u32, BinaryQuarticForm> = BTreeMap::new();
    for q in cands {
        let root = find(&mut parent, comp_of[q]);
        groups
            .entry(root)
            .and_modify(|m| {
                if quartic_key(q) < quartic_key(m) {
                    *m = *q;
                }
            })
            .or_insert(*q);
    }
    let canary_root = find(&mut parent, comp_of[canary]);
    let mut tagged: Vec<(BinaryQuarticForm, bool)> = groups
        .iter()
        .map(|(&root, &min)| (min, root == canary_root))
        .collect();
    tagged.sort_unstable_by_key(|&(q, _)| quartic_key(&q));
    let canary_at = tagged.iter().position(|&(_, t)| t).unwrap();
    let reps: Vec<BinaryQuarticForm> = tagged.iter().map(|&(q, _)| q).collect();
    let types = reps.iter().map(quartic_real_type).collect();
    Ok(GroupedOrbits {
        reps,
        types,
        canary_at,
    })
}

/// Data defining a census target: invariants and shear class of the
/// resolvent, all the engines need.
struct CensusKey {
    n: i64,
    iv: i128,
    jv: i128,
    /// b of the resolvent reduced mod 3n; the c-slot congruence class.
    bfm: i64,
}

impl CensusKey {
    fn of(f: &BinaryCubicForm) -> CensusKey {
        let inv = f.invariants();
        CensusKey {
            n: f.a,
            iv: inv.i,
            jv: inv.j,
            bfm: f.b.rem_euclid(3 * f.a),
        }
    }

    fn canary(&self) -> BinaryQuarticForm {
        // any a = 0 candidate with b = 1 is unique given its c residue
        let c = self.bfm;
        let d = (c as i128 * c as i128 - self.iv) / 3;
        let e = (9 * c as i128 * d - 2 * (c as i128).pow(3) - self.jv) / 27;
        let q = BinaryQuarticForm::new(
            0,
            1,
            c,
            i64::try_from(d).expect("canary overflow"),
            i64::try_from(e).expect("canary overflow"),
        );
        debug_assert_eq!(q.i_invariant(), self.iv);
        debug_assert_eq!(q.j_invariant(), self.jv);
        q
    }
}

/// Grow the single-field window by doubling until the grouped orbits agree
/// three levels in a row.
fn isotropic_ladder(key: &CensusKey, max_level: i64) -> Result<GroupedOrbits, CensusError> {
    let a0 = a0_candidates(key.n, key.iv, key.jv, key.bfm)?;
    let canary = key.canary();
    let mut history: Vec<Vec<BinaryQuarticForm>> = Vec::new();
    let mut level = 1i64;
    loop {
        let mut set: BTreeSet<BinaryQuarticForm> = a0.iter().copied().collect();
        set.extend(scan_quartics_single(key.n, key.iv, key.jv, key.bfm, level));
        let budget = 4_000 + 64 * set.len();
        let grouped = group_candidates(key.n, &set, &canary, budget)?;
        history.push(grouped.reps.clone());
        let h = history.len();
        if h >= 3 && history[h - 1] == history[h - 2] && history[h - 2] == history[h - 3] {
            return Ok(grouped);
        }
        if level >= max_level {
            return Err(CensusError::IncompleteCensus {
                stage: "census box growth",
            });
        }
        level *= 2;
    }
}

// ---------------------------------------------------------------------------
// assembling censuses
// ---------------------------------------------------------------------------

/// One orbit in the fiber over f.
#[derive(Debug, Clone)]
pub struct OrbitInfo {
    /// Representative pair; its resolvent is exactly f.
    pub pair: PairTQF,
    /// Minimal quartic representative when A is the split form; None for
    /// orbits over a definite A.
    pub quartic: Option<BinaryQuarticForm>,
    pub real_type: RealSplittingType,
    /// Order of the real stabilizer: 4 for positive, 2 for negative
    /// resolvent discriminant.
    pub real_stabilizer: u8,
    /// Marks the orbit of the monic section; exactly one orbit carries it.
    pub contains_section: bool,
}

/// Exact fiber census over one resolvent form.
#[derive(Debug, Clone)]
pub struct OrbitCensus {
    pub f: BinaryCubicForm,
    pub orbits: Vec<OrbitInfo>,
    /// Orbits with a real common zero.
    pub cl2: u64,
    /// All orbits.
    pub cl2_plus: u64,
}

/// Counting view of a census, used by the batched family driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusCounts {
    pub cl2: u64,
    pub cl2_plus: u64,
    pub orbits: u32,
}

fn quartic_orbit_info(
    f: &BinaryCubicForm,
    q: &BinaryQuarticForm,
    ty: RealSplittingType,
    is_canary: bool,
) -> OrbitInfo {
    let n = f.a;
    let nn = n * n;
    debug_assert_eq!(q.d % n, 0);
    debug_assert_eq!(q.e % nn, 0);
    // B from the quartic slots, plus a multiple of A to land exactly on f:
    // the resolvent's linear coefficient moves by -3n per added copy of A
    let s = (q.c - f.b) / (3 * n);
    debug_assert_eq!(q.c - 3 * n * s, f.b);
    let b = TernaryQuadraticForm::new(q.a, q.c - n * s, q.e / nn, q.b, s, q.d / n);
    let pair = PairTQF::new(an_form(n), b);
    debug_assert_eq!(&resolvent(&pair), f, "quartic orbit resolves off target");
    OrbitInfo {
        pair,
        quartic: Some(*q),
        real_type: ty,
        real_stabilizer: if f.disc() > 0 { 4 } else { 2 },
        contains_section: is_canary,
    }
}

fn counts_from_orbits(
    disc: i128,
    orbits: &[OrbitInfo],
) -> Result<(u64, u64), CensusError> {
    let total = orbits.len() as u64;
    let soluble = if disc < 0 {
        total
    } else {
        orbits
            .iter()
            .filter(|o| o.real_type == RealSplittingType::T1111)
            .count() as u64
    };
    let canaries = orbits.iter().filter(|o| o.contains_section).count();
    let canary_soluble = orbits
        .iter()
        .find(|o| o.contains_section)
        .map(|o| {
            matches!(
                o.real_type,
                RealSplittingType::T1111 | RealSplittingType::T112
            )
        })
        .unwrap_or(false);
    if canaries != 1
        || !canary_soluble
        || !soluble.is_power_of_two()
        || !total.is_power_of_two()
        || soluble > total
    {
        return Err(CensusError::IncompleteCensus {
            stage: "census validation",
        });
    }
    Ok((soluble, total))
}

/// Full orbit census of the fiber over f, for indices n = 1, 2.
///
/// f must be irreducible with nonsquare discriminant; the class list must
/// belong to the same n. The two-torsion reading of the counts additionally
/// assumes f is maximal, which is the caller's responsibility to check.
pub fn orbit_census(
    f: &BinaryCubicForm,
    classes: &QnClassSet,
) -> Result<OrbitCensus, CensusError> {
    let n = f.a;
    if !(1..=2).contains(&n) {
        return Err(CensusError::UnsupportedIndex { n });
    }
    assert_eq!(classes.n, n, "class list for the wrong index");
    assert!(f.is_generic(), "orbit census needs an irreducible form");
    let key = CensusKey::of(f);
    let grouped = isotropic_ladder(&key, 32)?;
    let mut orbits: Vec<OrbitInfo> = grouped
        .reps
        .iter()
        .zip(&grouped.types)
        .enumerate()
        .map(|(i, (q, &ty))| quartic_orbit_info(f, q, ty, i == grouped.canary_at))
        .collect();
    if f.disc() > 0 {
        for rep in classes.reps.iter().filter(|r| r.definite && r.good) {
            for b in definite_fiber_orbits(f, &rep.form)? {
                orbits.push(OrbitInfo {
                    pair: PairTQF::new(rep.form.clone(), b),
                    quartic: None,
                    real_type: RealSplittingType::T22Sharp,
                    real_stabilizer: 4,
                    contains_section: false,
                });
            }
        }
    }
    let (cl2, cl2_plus) = counts_from_orbits(f.disc(), &orbits)?;
    Ok(OrbitCensus {
        f: *f,
        orbits,
        cl2,
        cl2_plus,
    })
}

// ---------------------------------------------------------------------------
// definite fibers
// ---------------------------------------------------------------------------

/// Orbits of B over a positive definite A with resolvent exactly f, grouped
/// by the full (finite) integral automorph group of A.
///
/// The box is rigorous, not heuristic: B = G^{1/2} S G^{1/2} with S symmetric
/// whose eigenvalues are the roots of f(x, 1)/n, so every Gram entry of B is
/// bounded by the root bound times the corresponding Gram entries of A.
fn definite_fiber_orbits(
    f: &BinaryCubicForm,
    a: &TernaryQuadraticForm,
) -> Result<Vec<TernaryQuadraticForm>, CensusError> {
    let n = f.a;
    let conv = |v: &num_bigint::BigInt| -> i64 {
        i64::try_from(v.clone()).expect("definite fiber needs small class forms")
    };
    let ac: Tern6 = [
        conv(&a.a11),
        conv(&a.a22),
        conv(&a.a33),
        conv(&a.a12),
        conv(&a.a13),
        conv(&a.a23),
    ];
    let [a11, a22, a33, a12, a13, a23] = ac.map(|x| x as i128);
    // Cauchy bound on the roots of n x^3 + b x^2 + c x + d
    let tm = 1 + (f.b.abs().max(f.c.abs()).max(f.d.abs()) as i128 + n as i128 - 1) / n as i128;
    let bd = |v: i128| i64::try_from(v).expect("definite fiber box overflow");
    let d11 = bd(tm * a11);
    let d22 = bd(tm * a22);
    let d33 = bd(tm * a33);
    let d12 = bd(tm * (a11 + a22));
    let d13 = bd(tm * (a11 + a33));
    let d23 = bd(tm * (a22 + a33));
    // coefficients of the linear form c1(B) in the resolvent of (A, B)
    let k11 = a23 * a23 - 4 * a22 * a33;
    let k22 = a13 * a13 - 4 * a11 * a33;
    let k33 = a12 * a12 - 4 * a11 * a22;
    let k12 = 2 * a12 * a33 - a13 * a23;
    let k13 = 2 * a13 * a22 - a12 * a23;
    let k23 = 2 * a11 * a23 - a12 * a13;
    assert!(k33 < 0, "definite A must have a definite upper 2x2 block");
    let target_c1 = f.b as i128;
    // c2 and c3 of the resolvent as functions of B, for the exact filter
    let c2_of = |b: &Tern6| -> i128 {
        let [b11, b22, b33, b12, b13, b23] = b.map(|x| x as i128);
        4 * a11 * b22 * b33 - a11 * b23 * b23 - 2 * a12 * b12 * b33
            + a12 * b13 * b23
            + a13 * b12 * b23
            - 2 * a13 * b13 * b22
            + 4 * a22 * b11 * b33
            - a22 * b13 * b13
            - 2 * a23 * b11 * b23
            + a23 * b12 * b13
            + 4 * a33 * b11 * b22
            - a33 * b12 * b12
    };
    let mut found: Vec<Tern6> = Vec::new();
    for b11 in -d11..=d11 {
        for b22 in -d22..=d22 {
            for b12 in -d12..=d12 {
                let part =
                    k11 * b11 as i128 + k22 * b22 as i128 + k12 * b12 as i128 - target_c1;
                for b13 in -d13..=d13 {
                    let part13 = part + k13 * b13 as i128;
                    for b23 in -d23..=d23 {
                        let num = -(part13 + k23 * b23 as i128);
                        if num % k33 != 0 {
                            continue;
                        }
                        let b33 = num / k33;
                        if b33.abs() > d33 as i128 {
                            continue;
                        }
                        let b: Tern6 = [b11, b22, b33 as i64, b12, b13, b23];
                        if c2_of(&b) != f.c as i128 {
                            continue;
                        }
                        if -tern_det4(&b) != f.d as i128 {
                            continue;
                        }
                        found.push(b);
                    }
                }
            }
        }
    }
    // full automorph group from the proven row bound |v|^2 <= tr^3 / det
    let t2 = 2 * (a11 + a22 + a33);
    let rb = isqrt_i128(t2 * t2 * t2 / (2 * n as i128)) + 1;
    let autos = automorphs(a, bd(rb));
    debug_assert!(autos.iter().any(|g| *g == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
    let mut classes: BTreeSet<Tern6> = BTreeSet::new();
    for b in &found {
        let canon = autos
            .iter()
            .filter_map(|g| tern_transform(b, g))
            .min()
            .unwrap_or(*b);
        classes.insert(canon);
    }
    Ok(classes.into_iter().map(|c| tern_to_form(&c)).collect())
}

// ---------------------------------------------------------------------------
// batched family censuses
// ---------------------------------------------------------------------------

/// Censuses for a batch of resolvent forms of the same index, sharing one
/// coefficient scan per growth level instead of one scan per field.
///
/// Every form must be irreducible with nonsquare discriminant, and the batch
/// must be free of definite fiber classes: either n = 1, or all
/// discriminants negative. Fields whose shared-scan census fails to
/// stabilize fall back to their own window ladder.
pub fn census_family(fields: &[BinaryCubicForm]) -> Vec<Result<CensusCounts, CensusError>> {
    if fields.is_empty() {
        return Vec::new();
    }
    let n = fields[0].a;
    assert!((1..=2).contains(&n), "family census needs n in {{1, 2}}");
    assert!(
        n == 1 || fields.iter().all(|f| f.disc() < 0),
        "definite fiber classes exist; batch census needs negative discriminants"
    );
    let mut out: Vec<Option<Result<CensusCounts, CensusError>>> = vec![None; fields.len()];
    const CHUNK: usize = 40_000;
    for (ci, chunk) in fields.chunks(CHUNK).enumerate() {
        let res = census_family_chunk(n, chunk);
        for (i, r) in res.into_iter().enumerate() {
            out[ci * CHUNK + i] = Some(r);
        }
    }
    out.into_iter().map(|r| r.unwrap()).collect()
}

fn finalize_family_field(
    f: &BinaryCubicForm,
    grouped: &GroupedOrbits,
) -> Result<CensusCounts, CensusError> {
    let orbits: Vec<OrbitInfo> = grouped
        .reps
        .iter()
        .zip(&grouped.types)
        .enumerate()
        .map(|(i, (q, &ty))| quartic_orbit_info(f, q, ty, i == grouped.canary_at))
        .collect();
    let (cl2, cl2_plus) = counts_from_orbits(f.disc(), &orbits)?;
    Ok(CensusCounts {
        cl2,
        cl2_plus,
        orbits: orbits.len() as u32,
    })
}

fn census_family_chunk(
    n: i64,
    fields: &[BinaryCubicForm],
) -> Vec<Result<CensusCounts, CensusError>> {
    let keys: Vec<CensusKey> = fields.iter().map(CensusKey::of).collect();
    for (f, k) in fields.iter().zip(&keys) {
        assert_eq!(f.a, n, "family census requires a single index");
        assert!(f.is_generic(), "family census needs irreducible forms");
        let _ = k;
    }
    // lookup structures keyed by (I, J, b mod 3n)
    let imax = keys.iter().map(|k| k.iv.abs()).max().unwrap().max(1);
    let jmax = keys.iter().map(|k| k.jv.abs()).max().unwrap().max(1);
    let ymax = keys
        .iter()
        .map(|k| (4 * k.iv.pow(3)).abs().max(k.jv.pow(2)))
        .max()
        .unwrap();
    let size = usize::try_from(2 * imax + 1).expect("family invariant range too large");
    let mut bitmap = vec![false; size];
    let mut buckets: Vec<Vec<(i64, u16, u32)>> = vec![Vec::new(); size];
    for (idx, k) in keys.iter().enumerate() {
        let off = usize::try_from(k.iv + imax).unwrap();
        bitmap[off] = true;
        let jv = i64::try_from(k.jv).expect("family J exceeds i64");
        buckets[off].push((jv, k.bfm as u16, idx as u32));
    }
    for b in &mut buckets {
        b.sort_unstable();
        debug_assert!(b.windows(2).all(|w| (w[0].0, w[0].1) != (w[1].0, w[1].1)));
    }

    let a0_sets: Vec<Result<Vec<BinaryQuarticForm>, CensusError>> = keys
        .iter()
        .map(|k| a0_candidates(k.n, k.iv, k.jv, k.bfm))
        .collect();

    let mut results: Vec<Option<Result<CensusCounts, CensusError>>> =
        vec![None; fields.len()];
    let mut history: Vec<Vec<Vec<BinaryQuarticForm>>> = Vec::new();
    for level in [1i64, 2, 4] {
        let cands = scan_quartics_family(n, imax, jmax, ymax, level, &bitmap, &buckets);
        let mut fps: Vec<Vec<BinaryQuarticForm>> = Vec::with_capacity(fields.len());
        for (i, f) in fields.iter().enumerate() {
            if results[i].is_some() {
                fps.push(Vec::new());
                continue;
            }
            let a0 = match &a0_sets[i] {
                Ok(v) => v,
                Err(e) => {
                    results[i] = Some(Err(e.clone()));
                    fps.push(Vec::new());
                    continue;
                }
            };
            let mut set: BTreeSet<BinaryQuarticForm> = a0.iter().copied().collect();
            set.extend(cands[i].iter().copied());
            let canary = keys[i].canary();
            let budget = 4_000 + 64 * set.len();
            match group_candidates(n, &set, &canary, budget) {
                Ok(grouped) => {
                    if level == 4
                        && history[0][i] == grouped.reps
                        && history[1][i] == grouped.reps
                    {
                        results[i] = Some(finalize_family_field(f, &grouped));
                    }
                    fps.push(grouped.reps);
                }
                Err(_) => fps.push(Vec::new()),
            }
        }
        history.push(fps);
    }
    // stragglers: private ladders
    for (i, f) in fields.iter().enumerate() {
        if results[i].is_none() {
            results[i] = Some(
                isotropic_ladder(&keys[i], 32)
                    .and_then(|grouped| finalize_family_field(f, &grouped)),
            );
        }
    }
    results.into_iter().map(|r| r.unwrap()).collect()
}

/// One shared scan level: walk the (a, b, c, d, e) box once and hand every
/// lattice point to the field whose invariants it matches.
fn scan_quartics_family(
    n: i64,
    imax: i128,
    jmax: i128,
    ymax: i128,
    level: i64,
    bitmap: &[bool],
    buckets: &[Vec<(i64, u16, u32)>],
) -> Vec<Vec<BinaryQuarticForm>> {
    let mut out: Vec<Vec<BinaryQuarticForm>> = vec![Vec::new(); buckets.len().min(usize::MAX)];
    // out is indexed by field id, not bucket offset; resize to field count
    let nfields = buckets.iter().map(|b| b.len()).sum::<usize>();
    out.truncate(0);
    out.resize(nfields, Vec::new());
    let abox = i64::try_from(level as i128 * (2 + isqrt_i128(icbrt_i128(ymax))))
        .expect("family window too wide");
    let wbox = level as i128 * (2 + isqrt_i128(3 * imax) + icbrt_i128(jmax));
    let n128 = n as i128;
    let nn = n128 * n128;
    for aa in 1..=abox {
        for a in [aa, -aa] {
            let a128 = a as i128;
            let hb = 4 * aa as i128 * wbox;
            for b in 0..4 * aa * n {
                let b128 = b as i128;
                let b23 = 3 * b128 * b128;
                let (e1, e2) = (
                    div_ceil(b23 - hb, 8 * a128),
                    div_floor(b23 + hb, 8 * a128),
                );
                let (clo, chi) = if e1 <= e2 { (e1, e2) } else { (e2 + 1, e1) };
                for c in clo..=chi {
                    let h = 8 * a128 * c - b23;
                    let cm = c.rem_euclid(3 * n128) as u16;
                    // bound 27 R^2 over the whole invariant window
                    let nb = 48 * a128 * a128 * imax * h.abs()
                        + 64 * aa as i128 * aa as i128 * aa as i128 * jmax
                        + h.abs().pow(3);
                    let rb = isqrt_i128(nb / 27) + 1;
                    let den = 8 * a128 * a128;
                    let base = -b128 * b128 * b128 + 4 * a128 * b128 * c;
                    let mut d = {
                        let lo = div_ceil(-rb + base, den);
                        lo + (-lo).rem_euclid(n128)
                    };
                    let dhi = div_floor(rb + base, den);
                    while d <= dhi {
                        let s0 = c * c - 3 * b128 * d;
                        // e window from |I| <= imax, aligned to n^2
                        let (p, q) = (-imax - s0, imax - s0);
                        let den12 = 12 * a128;
                        let (elo, ehi) = if a > 0 {
                            (div_ceil(p, den12), div_floor(q, den12))
                        } else {
                            (div_ceil(q, den12), div_floor(p, den12))
                        };
                        let elo = elo + (-elo).rem_euclid(nn);
                        let jc = 72 * a128 * c - 27 * b128 * b128;
                        let j0 = 9 * b128 * c * d - 27 * a128 * d * d - 2 * c * c * c;
                        let mut e = elo;
                        let mut ival = den12 * e + s0;
                        let istep = den12 * nn;
                        let mut jval = jc * e + j0;
                        let jstep = jc * nn;
                        while e <= ehi {
                            debug_assert!(ival.abs() <= imax);
                            let off = (ival + imax) as usize;
                            if bitmap[off] && jval.abs() <= jmax {
                                let bucket = &buckets[off];
                                let jv = jval as i64;
                                if let Ok(pos) =
                                    bucket.binary_search_by(|e| (e.0, e.1).cmp(&(jv, cm)))
                                {
                                    let fid = bucket[pos].2 as usize;
                                    out[fid].push(BinaryQuarticForm::new(
                                        a,
                                        b,
                                        i64::try_from(c).expect("family scan overflow"),
                                        i64::try_from(d).expect("family scan overflow"),
                                        i64::try_from(e).expect("family scan overflow"),
                                    ));
                                }
                            }
                            e += nn;
                            ival += istep;
                            jval += jstep;
                        }
                        d += n128;
                    }
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// independent route for n = 1: binary quartic classes paired after the fact
// ---------------------------------------------------------------------------

/// Census of the fiber over a monic resolvent through plain binary quartic
/// classes: an independently shaped box, and grouping on the pair side by
/// numerically discovered automorphs of x1 x3 - x2^2 instead of the quartic
/// substitution action. Exists to cross-check `orbit_census`.
pub fn quartic_orbit_via_binary_quartics(
    f: &BinaryCubicForm,
) -> Result<OrbitCensus, CensusError> {
    if f.a != 1 {
        return Err(CensusError::UnsupportedIndex { n: f.a });
    }
    assert!(f.is_generic(), "census needs an irreducible form");
    let key = CensusKey::of(f);
    let autos: Vec<[[i64; 3]; 3]> = automorphs(&a1_local(), 3)
        .into_iter()
        .filter(|g| *g != [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        .collect();
    let mut history: Vec<Vec<Tern6>> = Vec::new();
    let mut level = 1i64;
    loop {
        let cands = quartic_box_candidates(&key, level)?;
        let grouped = pair_side_components(&key, &cands, &autos)?;
        let fp: Vec<Tern6> = grouped.iter().map(|g| g.rep).collect();
        history.push(fp);
        let h = history.len();
        if h >= 3 && history[h - 1] == history[h - 2] && history[h - 2] == history[h - 3] {
            let mut orbits = Vec::new();
            let mut canaries = 0;
            for g in &grouped {
                let q = g.witness;
                let ty = quartic_real_type(&q);
                if g.has_canary {
                    canaries += 1;
                }
                orbits.push(quartic_orbit_info(f, &norm_quartic(1, &q), ty, g.has_canary));
            }
            if canaries != 1 {
                return Err(CensusError::IncompleteCensus {
                    stage: "pair-side canary",
                });
            }
            let (cl2, cl2_plus) = counts_from_orbits(f.disc(), &orbits)?;
            return Ok(OrbitCensus {
                f: *f,
                orbits,
                cl2,
                cl2_plus,
            });
        }
        if level >= 32 {
            return Err(CensusError::IncompleteCensus {
                stage: "pair-side box growth",
            });
        }
        level *= 2;
    }
}

fn a1_local() -> TernaryQuadraticForm {
    an_form(1)
}

/// Independent box: centered b and c ranges, solving d, e per (a, b, c).
fn quartic_box_candidates(
    key: &CensusKey,
    level: i64,
) -> Result<Vec<BinaryQuarticForm>, CensusError> {
    let y = (4 * key.iv.pow(3)).abs().max(key.jv.pow(2));
    let abox = i64::try_from(level as i128 * (2 + isqrt_i128(icbrt_i128(y))))
        .expect("cross-check window too wide");
    let cbox = level as i128 * (2 + icbrt_i128(y));
    let mut out = Vec::new();
    for aa in 1..=abox {
        for a in [aa, -aa] {
            let a128 = a as i128;
            for b in -2 * aa..=2 * aa {
                let b128 = b as i128;
                let mut c = -cbox + (key.bfm as i128 + cbox).rem_euclid(3);
                while c <= cbox {
                    let h = 8 * a128 * c - 3 * b128 * b128;
                    let num = 48 * a128 * a128 * key.iv * h
                        - 64 * a128 * a128 * a128 * key.jv
                        - h * h * h;
                    if num >= 0 && num % 27 == 0 {
                        if let Some(r) = perfect_square(num / 27) {
                            for sg in [r, -r] {
                                let dnum = sg - b128.pow(3) + 4 * a128 * b128 * c;
                                if dnum % (8 * a128 * a128) == 0 {
                                    let d = dnum / (8 * a128 * a128);
                                    let enum_ = key.iv + 3 * b128 * d - c * c;
                                    if enum_ % (12 * a128) == 0 {
                                        let e = enum_ / (12 * a128);
                                        out.push(BinaryQuarticForm::new(
                                            a,
                                            b,
                                            i64::try_from(c).expect("box overflow"),
                                            i64::try_from(d).expect("box overflow"),
                                            i64::try_from(e).expect("box overflow"),
                                        ));
                                    }
                                }
                                if r == 0 {
                                    break;
                                }
                            }
                        }
                    }
                    c += 3;
                }
            }
        }
    }
    out.extend(a0_candidates(1, key.iv, key.jv, key.bfm)?);
    Ok(out)
}

struct PairComponent {
    rep: Tern6,
    witness: BinaryQuarticForm,
    has_canary: bool,
}

/// Group quartic candidates by walking their companion forms B with the
/// automorphs of A, reprojecting onto the slice b13 = 0 after each step.
fn pair_side_components(
    key: &CensusKey,
    cands: &[BinaryQuarticForm],
    autos: &[[[i64; 3]; 3]],
) -> Result<Vec<PairComponent>, CensusError> {
    // slice form of a quartic: B = (a, c, e, b, 0, d), shear-normalized so
    // the walk cannot drift along the unipotent part of the automorph group
    let slice_of = |q: &BinaryQuarticForm| -> Tern6 {
        let q = norm_quartic(1, q);
        [q.a, q.c, q.e, q.b, 0, q.d]
    };
    let unslice = |t: &Tern6| -> BinaryQuarticForm {
        debug_assert_eq!(t[4], 0);
        BinaryQuarticForm::new(t[0], t[3], t[1], t[5], t[2])
    };
    // reproject: kill the b13 slot by adding -b13 copies of A, whose slots
    // are a22 = -1, a13 = 1; the a22 slot gains +b13
    let reproject = |t: &Tern6| -> Tern6 {
        let s = t[4];
        [t[0], t[1] + s, t[2], t[3], 0, t[5]]
    };
    let canary = key.canary();
    let canary_slice = slice_of(&canary);
    let cap = cands
        .iter()
        .flat_map(|q| [q.a.abs(), q.b.abs(), q.c.abs(), q.d.abs(), q.e.abs()])
        .max()
        .unwrap_or(1)
        .saturating_mul(3)
        + 8;
    let cand_set: BTreeSet<Tern6> = cands
        .iter()
        .map(slice_of)
        .chain([canary_slice])
        .collect();
    let mut comp_of: BTreeMap<Tern6, u32> = BTreeMap::new();
    let mut parent: Vec<u32> = Vec::new();
    fn find(parent: &mut Vec<u32>, mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let up = parent[parent[x as usize] as usize];
            parent[x as usize] = up;
            x = up;
        }
        x
    }
    let budget = 50_000 + 256 * cand_set.len();
    let mut nodes = 0usize;
    for start in &cand_set {
        if comp_of.contains_key(start) {
            continue;
        }
        let id = parent.len() as u32;
        parent.push(id);
        comp_of.insert(*start, id);
        let mut queue = vec![*start];
        while let Some(cur) = queue.pop() {
            nodes += 1;
            if nodes > budget {
                return Err(CensusError::IncompleteCensus {
                    stage: "pair-side walk budget",
                });
            }
            for g in autos {
                let img = match tern_transform(&cur, g) {
                    Some(v) => {
                        let proj = reproject(&v);
                        slice_of(&unslice(&proj))
                    }
                    None => continue,
                };
                if img.iter().any(|&x| x.abs() > cap) {
                    continue;
                }
                match comp_of.get(&img) {
                    Some(&other) => {
                        let (ra, rb) = (find(&mut parent, other), find(&mut parent, id));
                        if ra != rb {
                            parent[ra as usize] = rb;
                        }
                    }
                    None => {
                        comp_of.insert(img, id);
                        queue.push(img);
                    }
                }
            }
        }
    }
    let mut groups: BTreeMap<u32, PairComponent> = BTreeMap::new();
    for t in &cand_set {
        let root = find(&mut parent, comp_of[t]);
        let q = unslice(t);
        let is_canary = *t == canary_slice;
        groups
            .entry(root)
            .and_modify(|g| {
                if tern_key(t) < tern_key(&g.rep) {
                    g.rep = *t;
                    g.witness = q;
                }
                g.has_canary |= is_canary;
            })
            .or_insert(PairComponent {
                rep: *t,
                witness: q,
                has_canary: is_canary,
            });
    }
    let mut comps: Vec<PairComponent> = groups.into_values().collect();
    comps.sort_unstable_by_key(|g| tern_key(&g.rep));
    Ok(comps)
}

// ---------------------------------------------------------------------------
// finite-level point counts for the local mass
// ---------------------------------------------------------------------------

/// |SL3(Z/p^k)| = p^{8(k-1)} p^3 (p^3 - 1)(p^2 - 1).
pub fn sl3_order_mod_pk(p: u64, k: u32) -> u128 {
    assert!(k >= 1);
    let p = p as u128;
    p.pow(8 * (k - 1)) * p.pow(3) * (p.pow(3) - 1) * (p.pow(2) - 1)
}

fn res_coeffs_mod(a: &[i64; 6], b: &[i64; 6], m: i64) -> [i64; 4] {
    let [a11, a22, a33, a12, a13, a23] = *a;
    let [b11, b22, b33, b12, b13, b23] = *b;
    let det4 = |x: &[i64; 6]| -> i64 {
        let [x11, x22, x33, x12, x13, x23] = *x;
        4 * x11 * x22 * x33 - x11 * x23 * x23 - x12 * x12 * x33 + x12 * x13 * x23
            - x13 * x13 * x22
    };
    let c0 = det4(a);
    let c1 = -4 * a11 * a22 * b33 + 2 * a11 * a23 * b23 - 4 * a11 * a33 * b22
        + a12 * a12 * b33
        - a12 * a13 * b23
        - a12 * a23 * b13
        + 2 * a12 * a33 * b12
        + a13 * a13 * b22
        + 2 * a13 * a22 * b13
        - a13 * a23 * b12
        - 4 * a22 * a33 * b11
        + a23 * a23 * b11;
    let c2 = 4 * a11 * b22 * b33 - a11 * b23 * b23 - 2 * a12 * b12 * b33
        + a12 * b13 * b23
        + a13 * b12 * b23
        - 2 * a13 * b13 * b22
        + 4 * a22 * b11 * b33
        - a22 * b13 * b13
        - 2 * a23 * b11 * b23
        + a23 * b12 * b13
        + 4 * a33 * b11 * b22
        - a33 * b12 * b12;
    let c3 = -det4(b);
    [
        c0.rem_euclid(m),
        c1.rem_euclid(m),
        c2.rem_euclid(m),
        c3.rem_euclid(m),
    ]
}

/// Solve L h = rhs over F_p for a 4 x 12 matrix; returns a particular
/// solution and a nullspace basis, or None if inconsistent.
#[allow(clippy::type_complexity)]
fn gauss_mod_p(
    l: &[[u8; 12]; 4],
    rhs: &[u8; 4],
    p: u8,
) -> Option<([u8; 12], Vec<[u8; 12]>)> {
    let mut m = [[0i32; 13]; 4];
    for r in 0..4 {
        for c in 0..12 {
            m[r][c] = l[r][c] as i32;
        }
        m[r][12] = rhs[r] as i32;
    }
    let p = p as i32;
    let inv = |x: i32| -> i32 {
        // p is 2 or 3
        let mut y = 1;
        while (x * y) % p != 1 {
            y += 1;
        }
        y
    };
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..12 {
        let Some(pr) = (row..4).find(|&r| m[r][col] % p != 0) else {
            continue;
        };
        m.swap(row, pr);
        let iv = inv(m[row][col].rem_euclid(p));
        for c in col..13 {
            m[row][c] = (m[row][c] * iv).rem_euclid(p);
        }
        for r in 0..4 {
            if r != row && m[r][col] % p != 0 {
                let f = m[r][col].rem_euclid(p);
                for c in col..13 {
                    m[r][c] = (m[r][c] - f * m[row][c]).rem_euclid(p);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == 4 {
            break;
        }
    }
    for r in row..4 {
        if m[r][12] % p != 0 {
            return None;
        }
    }
    let mut part = [0u8; 12];
    for (r, &col) in pivots.iter().enumerate() {
        part[col] = m[r][12].rem_euclid(p) as u8;
    }
    let mut basis = Vec::new();
    for free in 0..12 {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = [0u8; 12];
        v[free] = 1;
        for (r, &col) in pivots.iter().enumerate() {
            v[col] = (-m[r][free]).rem_euclid(p) as u8;
        }
        basis.push(v);
    }
    Some((part, basis))
}

/// Number of integral pairs (A, B) mod p^k whose resolvent is f mod p^k.
///
/// Counts by enumerating the fiber mod p and lifting level by level; each
/// lift count is exact because Res(x + p^j h) is linear in h mod p^{j+1}.
/// Supported: p in {2, 3}, k <= 3 for p = 2 and k <= 2 for p = 3 (the last
/// enumerated level must stay small enough to hold in memory).
pub fn pair_fiber_count_mod_pk(f: &BinaryCubicForm, p: u64, k: u32) -> u128 {
    assert!(
        (p == 2 && (1..=3).contains(&k)) || (p == 3 && (1..=2).contains(&k)),
        "unsupported modulus"
    );
    let pi = p as i64;
    let target = [f.a, f.b, f.c, f.d];
    let tmod = |m: i64| -> [i64; 4] { target.map(|t| t.rem_euclid(m)) };

    // level 1 by brute force, pruning on det4(A)
    let p6 = pi.pow(6);
    let decode = |mut x: i64| -> [i64; 6] {
        let mut out = [0i64; 6];
        for o in &mut out {
            *o = x % pi;
            x /= pi;
        }
        out
    };
    let t1 = tmod(pi);
    let mut level: Vec<[u8; 12]> = Vec::new();
    for ai in 0..p6 {
        let av = decode(ai);
        if res_coeffs_mod(&av, &[0; 6], pi)[0] != t1[0] {
            continue;
        }
        for bi in 0..p6 {
            let bv = decode(bi);
            if res_coeffs_mod(&av, &bv, pi) == t1 {
                let mut x = [0u8; 12];
                for i in 0..6 {
                    x[i] = av[i] as u8;
                    x[6 + i] = bv[i] as u8;
                }
                level.push(x);
            }
        }
    }
    if k == 1 {
        return level.len() as u128;
    }

    let res12 = |x: &[u8; 12], m: i64| -> [i64; 4] {
        let mut av = [0i64; 6];
        let mut bv = [0i64; 6];
        for i in 0..6 {
            av[i] = x[i] as i64;
            bv[i] = x[6 + i] as i64;
        }
        res_coeffs_mod(&av, &bv, m)
    };
    let mut count = 0u128;
    for lvl in 2..=k {
        let mhi = pi.pow(lvl);
        let mlo = mhi / pi;
        let thi = tmod(mhi);
        let mut next: Vec<[u8; 12]> = Vec::new();
        for x in &level {
            let base = res12(x, mhi);
            let mut l = [[0u8; 12]; 4];
            for i in 0..12 {
                let mut y = *x;
                y[i] += mlo as u8;
                let img = res12(&y, mhi);
                for r in 0..4 {
                    let diff = (img[r] - base[r]).rem_euclid(mhi);
                    debug_assert_eq!(diff % mlo, 0);
                    l[r][i] = ((diff / mlo) % pi) as u8;
                }
            }
            let mut rhs = [0u8; 4];
            let mut ok = true;
            for r in 0..4 {
                let diff = (thi[r] - base[r]).rem_euclid(mhi);
                if diff % mlo != 0 {
                    ok = false;
                    break;
                }
                rhs[r] = ((diff / mlo) % pi) as u8;
            }
            if !ok {
                continue;
            }
            let Some((part, basis)) = gauss_mod_p(&l, &rhs, p as u8) else {
                continue;
            };
            if lvl == k {
                count += (p as u128).pow(basis.len() as u32);
            } else {
                // enumerate all lifts of x to the next level
                let nb = basis.len() as u32;
                let mut combo = vec![0u8; basis.len()];
                loop {
                    let mut h = part;
                    for (ci, bv) in combo.iter().zip(&basis) {
                        for j in 0..12 {
                            h[j] = (h[j] + ci * bv[j]) % p as u8;
                        }
                    }
                    let mut y = *x;
                    for j in 0..12 {
                        y[j] += (h[j] as i64 * mlo) as u8;
                    }
                    debug_assert_eq!(res12(&y, mhi), thi);
                    next.push(y);
                    // odometer over F_p^nb
                    let mut pos = 0;
                    loop {
                        if pos == combo.len() {
                            break;
                        }
                        combo[pos] += 1;
                        if combo[pos] < p as u8 {
                            break;
                        }
                        combo[pos] = 0;
                        pos += 1;
                    }
                    if combo.iter().all(|&c| c == 0) {
                        break;
                    }
                }
                let _ = nb;
            }
        }
        if lvl < k {
            level = next;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ternary::real_splitting_type;

    fn form(a: i64, b: i64, c: i64, d: i64) -> BinaryCubicForm {
        BinaryCubicForm::new(a, b, c, d)
    }

    #[test]
    fn class_list_n1_is_the_split_form_alone() {
        let set = class_reps_qn(1).unwrap();
        assert_eq!(set.reps.len(), 1);
        let r = &set.reps[0];
        assert!(r.good && !r.definite);
        assert_eq!(r.kappa_infinity, 1);
        assert_eq!(r.form.det4(), 1.into());
    }

    #[test]
    fn class_list_n2_adds_one_definite_class() {
        let set = class_reps_qn(2).unwrap();
        assert_eq!(set.reps.len(), 2);
        let indef: Vec<_> = set.reps.iter().filter(|r| !r.definite).collect();
        let def: Vec<_> = set.reps.iter().filter(|r| r.definite).collect();
        assert_eq!(indef.len(), 1);
        assert_eq!(def.len(), 1);
        assert_eq!(indef[0].kappa[0].1, Kappa::Plus);
        assert_eq!(def[0].kappa[0].1, Kappa::Minus);
        assert_eq!(def[0].kappa_infinity, -1);
        assert!(def[0].good);
    }

    #[test]
    fn class_list_n3_has_the_definite_sum_of_squares() {
        let set = class_reps_qn(3).unwrap();
        let def: Vec<_> = set.reps.iter().filter(|r| r.definite && r.good).collect();
        assert_eq!(def.len(), 1);
        assert_eq!(def[0].kappa, vec![(3, Kappa::Minus)]);
        assert_eq!(def[0].kappa_infinity, -1);
        // x1^2 + x1 x2 + x2^2 + x3^2 lies in this class
        let w = TernaryQuadraticForm::new(1, 1, 1, 1, 0, 0);
        assert_eq!(w.det4(), 3.into());
        assert_eq!(kappa_p(&w, 3), Kappa::Minus);
    }

    #[test]
    fn class_list_n4_realizes_both_signs_at_the_even_prime() {
        let set = class_reps_qn(4).unwrap();
        assert_eq!(set.reps.len(), 4);
        let good: Vec<_> = set.reps.iter().filter(|r| r.good).collect();
        assert_eq!(good.len(), 2);
        // no odd-exponent prime, so every good class is isotropic over R
        for r in &good {
            assert!(!r.definite);
            assert_eq!(r.kappa_infinity, 1);
        }
        let signs: BTreeSet<i8> =
            good.iter().map(|r| r.kappa[0].1.sign().unwrap()).collect();
        assert_eq!(signs, BTreeSet::from([-1, 1]));
    }

    #[test]
    fn class_list_n9_keeps_good_classes_isotropic() {
        let set = class_reps_qn(9).unwrap();
        assert_eq!(set.reps.len(), 4);
        let good: Vec<_> = set.reps.iter().filter(|r| r.good).collect();
        assert_eq!(good.len(), 2);
        for r in &good {
            assert!(!r.definite);
            assert_eq!(r.kappa_infinity, 1);
        }
        // the definite class at 9 is not good
        let def: Vec<_> = set.reps.iter().filter(|r| r.definite).collect();
        assert_eq!(def.len(), 1);
        assert_eq!(def[0].kappa[0].1, Kappa::NotGood);
    }

    #[test]
    fn class_list_n12_covers_all_four_sign_patterns() {
        let set = class_reps_qn(12).unwrap();
        assert_eq!(set.reps.len(), 8);
        let good: Vec<_> = set.reps.iter().filter(|r| r.good).collect();
        assert_eq!(good.len(), 4);
        // 3 divides 12 to odd order, so kappa_3 alone decides the signature
        for r in &good {
            let k3 = r.kappa.iter().find(|&&(p, _)| p == 3).unwrap().1;
            assert_eq!(r.kappa_infinity, k3.sign().unwrap());
            assert_eq!(r.definite, k3 == Kappa::Minus);
        }
    }

    #[test]
    fn automorph_list_contains_the_standard_shear() {
        let autos = automorphs(&an_form(1), 2);
        assert!(autos.contains(&[[1, 0, 0], [2, 1, 0], [1, 1, 1]]));
        // closed under the group axioms spot check: identity present
        assert!(autos.contains(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
    }

    #[test]
    fn census_of_the_smallest_complex_monic_field() {
        let f = form(1, 0, -1, -1);
        assert_eq!(f.disc(), -23);
        let classes = class_reps_qn(1).unwrap();
        let census = orbit_census(&f, &classes).unwrap();
        assert_eq!(census.cl2, 1);
        assert_eq!(census.cl2_plus, 1);
        assert_eq!(census.orbits.len(), 1);
        assert!(census.orbits[0].contains_section);
        assert_eq!(census.orbits[0].real_type, RealSplittingType::T112);
        assert_eq!(
            real_splitting_type(&census.orbits[0].pair),
            RealSplittingType::T112
        );
    }

    #[test]
    fn census_of_a_totally_real_monic_field() {
        let f = form(1, 0, -4, 1);
        assert_eq!(f.disc(), 229);
        let classes = class_reps_qn(1).unwrap();
        let census = orbit_census(&f, &classes).unwrap();
        assert_eq!(census.cl2, 1);
        for o in &census.orbits {
            assert_eq!(real_splitting_type(&o.pair), o.real_type);
        }
    }

    #[test]
    fn dual_route_matches_on_monic_fields() {
        let classes = class_reps_qn(1).unwrap();
        for f in [form(1, 0, -1, -1), form(1, 0, -4, 1), form(1, 1, -3, -1)] {
            let a = orbit_census(&f, &classes).unwrap();
            let b = quartic_orbit_via_binary_quartics(&f).unwrap();
            assert_eq!(a.cl2, b.cl2, "{f:?}");
            assert_eq!(a.cl2_plus, b.cl2_plus, "{f:?}");
            let mut ta: Vec<_> = a.orbits.iter().map(|o| o.real_type).collect();
            let mut tb: Vec<_> = b.orbits.iter().map(|o| o.real_type).collect();
            ta.sort_by_key(|t| *t as u8);
            tb.sort_by_key(|t| *t as u8);
            assert_eq!(ta, tb, "{f:?}");
        }
    }

    #[test]
    fn family_census_agrees_with_single_censuses() {
        let classes = class_reps_qn(1).unwrap();
        let fields = [
            form(1, 0, -1, -1),
            form(1, 0, 1, -3),
            form(1, 1, 2, -1),
            form(1, 0, -4, 1),
            form(1, 0, -7, -5),
        ];
        let batch = census_family(&fields);
        for (f, r) in fields.iter().zip(&batch) {
            let single = orbit_census(f, &classes).unwrap();
            let counts = r.as_ref().unwrap();
            assert_eq!(counts.cl2, single.cl2, "{f:?}");
            assert_eq!(counts.cl2_plus, single.cl2_plus, "{f:?}");
        }
    }

    #[test]
    fn census_with_index_two() {
        // 2x^3 + x^2 + x + 1: discriminant -83, maximal, complex
        let f = form(2, 1, 1, 1);
        assert_eq!(f.disc(), -83);
        let classes = class_reps_qn(2).unwrap();
        let census = orbit_census(&f, &classes).unwrap();
        assert_eq!(census.cl2, census.cl2_plus);
        assert!(census.cl2.is_power_of_two());
        for o in &census.orbits {
            assert_eq!(&resolvent(&o.pair), &f);
        }
    }

    #[test]
    fn ramified_fiber_counts_stabilize_at_the_group_orders() {
        // x^3 + 2: disc -108, ramified at 2 and 3 yet maximal there. The
        // mod-p fiber is inflated by the singular reduction, but from the
        // second level on the count locks onto |SL3| exactly.
        let f = form(1, 0, 0, 2);
        assert_eq!(f.disc(), -108);
        assert_eq!(pair_fiber_count_mod_pk(&f, 2, 1), 280);
        assert_eq!(pair_fiber_count_mod_pk(&f, 3, 1), 7722);
        assert_eq!(pair_fiber_count_mod_pk(&f, 2, 2), sl3_order_mod_pk(2, 2));
        assert_eq!(pair_fiber_count_mod_pk(&f, 2, 3), sl3_order_mod_pk(2, 3));
        assert_eq!(pair_fiber_count_mod_pk(&f, 3, 2), sl3_order_mod_pk(3, 2));
    }

    #[test]
    fn nonmaximal_fiber_counts_exceed_the_group_orders() {
        // x^3 + 4: index 2 inside the maximal order, so the fiber over 2
        // keeps extra mass at every level; at 3 the ring is maximal and the
        // count still locks on.
        let f = form(1, 0, 0, 4);
        assert_eq!(f.disc(), -432);
        assert_eq!(pair_fiber_count_mod_pk(&f, 2, 2), 157_696);
        assert_eq!(pair_fiber_count_mod_pk(&f, 2, 3), 3 * sl3_order_mod_pk(2, 3));
        assert_eq!(pair_fiber_count_mod_pk(&f, 3, 2), sl3_order_mod_pk(3, 2));
    }

    #[test]
    fn unramified_fiber_counts_match_the_group_orders() {
        let f = form(1, 0, -1, -1); // disc -23, prime to 2 and 3
        assert_eq!(pair_fiber_count_mod_pk(&f, 2, 1), sl3_order_mod_pk(2, 1));
        assert_eq!(pair_fiber_count_mod_pk(&f, 3, 1), sl3_order_mod_pk(3, 1));
        assert_eq!(pair_fiber_count_mod_pk(&f, 2, 2), sl3_order_mod_pk(2, 2));
    }

    #[test]
    fn w_symmetry_of_the_even_lattice_preserves_everything() {
        let w = GL2Element { p: 2, q: 1, r: 2, s: 2 };
        for q in [
            BinaryQuarticForm::new(1, 3, -2, 4, 8),
            BinaryQuarticForm::new(2, -1, 5, 6, -12),
            BinaryQuarticForm::new(0, 1, 2, -4, 4),
        ] {
            let img = q.act_scaled(&w).unwrap();
            assert_eq!(img.i_invariant(), q.i_invariant());
            assert_eq!(img.j_invariant(), q.j_invariant());
            assert_eq!(img.d % 2, 0);
            assert_eq!(img.e % 4, 0);
            assert_eq!((img.c - q.c).rem_euclid(6), 0);
        }
    }
}
