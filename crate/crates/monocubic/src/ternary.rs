//! Integral ternary quadratic forms, pairs (A, B), the resolvent map
//! 4 det(Ax - By), and the genus-theoretic local invariants attached to A.
//!
//! Forms are stored by polynomial coefficients a_ij of
//! sum_{i <= j} a_ij x_i x_j, so the Gram matrix has halves off the
//! diagonal and n = 4 det(Gram) is always an integer. Everything here is
//! exact: real classifications go through rational diagonalization and
//! Sturm chains, p-adic ones through residue arithmetic.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cubic::{BinaryCubicForm, GL2Element};
use crate::int::pow_mod_u64;
use crate::quartic::BinaryQuarticForm;

/// Ternary quadratic form with integer polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TernaryQuadraticForm {
    pub a11: BigInt,
    pub a22: BigInt,
    pub a33: BigInt,
    pub a12: BigInt,
    pub a13: BigInt,
    pub a23: BigInt,
}

impl TernaryQuadraticForm {
    pub fn new(a11: i64, a22: i64, a33: i64, a12: i64, a13: i64, a23: i64) -> Self {
        Self {
            a11: BigInt::from(a11),
            a22: BigInt::from(a22),
            a33: BigInt::from(a33),
            a12: BigInt::from(a12),
            a13: BigInt::from(a13),
            a23: BigInt::from(a23),
        }
    }

    pub fn zero() -> Self {
        Self::new(0, 0, 0, 0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a11.is_zero()
            && self.a22.is_zero()
            && self.a33.is_zero()
            && self.a12.is_zero()
            && self.a13.is_zero()
            && self.a23.is_zero()
    }

    pub fn eval(&self, x1: &BigInt, x2: &BigInt, x3: &BigInt) -> BigInt {
        &self.a11 * x1 * x1
            + &self.a22 * x2 * x2
            + &self.a33 * x3 * x3
            + &self.a12 * x1 * x2
            + &self.a13 * x1 * x3
            + &self.a23 * x2 * x3
    }

    /// Twice the Gram matrix; integral for integral polynomial coefficients.
    pub fn gram2(&self) -> [[BigInt; 3]; 3] {
        [
            [2 * &self.a11, self.a12.clone(), self.a13.clone()],
            [self.a12.clone(), 2 * &self.a22, self.a23.clone()],
            [self.a13.clone(), self.a23.clone(), 2 * &self.a33],
        ]
    }

    /// n = 4 det(Gram), always an integer.
    pub fn det4(&self) -> BigInt {
        let (a11, a22, a33) = (&self.a11, &self.a22, &self.a33);
        let (a12, a13, a23) = (&self.a12, &self.a13, &self.a23);
        4 * a11 * a22 * a33 - a11 * a23 * a23 - a12 * a12 * a33 + a12 * a13 * a23
            - a13 * a13 * a22
    }

    /// Change of variables x -> x g (row vector), i.e. Gram -> g Gram g^t.
    pub fn transform(&self, g: &[[i64; 3]; 3]) -> Self {
        let m = self.gram2();
        let gm = mat_mul_ig(g, &m);
        let out = mat_mul_gt(&gm, g);
        Self::from_gram2(out)
    }

    pub(crate) fn from_gram2(m: [[BigInt; 3]; 3]) -> Self {
        debug_assert!(m[0][1] == m[1][0] && m[0][2] == m[2][0] && m[1][2] == m[2][1]);
        let half = |v: &BigInt| -> BigInt {
            debug_assert!((v % 2i64).is_zero(), "odd diagonal in doubled Gram matrix");
            v / 2
        };
        Self {
            a11: half(&m[0][0]),
            a22: half(&m[1][1]),
            a33: half(&m[2][2]),
            a12: m[0][1].clone(),
            a13: m[0][2].clone(),
            a23: m[1][2].clone(),
        }
    }

    /// Signature (positive, negative) of the real quadratic space; zero
    /// eigenvalues are excluded by the nonsingularity of callers' inputs.
    pub fn signature(&self) -> (u8, u8) {
        let g = self.gram_rational();
        let (_, d) = diagonalize_sym3(&g);
        let mut pos = 0;
        let mut neg = 0;
        for di in &d {
            if di.is_positive() {
                pos += 1;
            } else if di.is_negative() {
                neg += 1;
            }
        }
        (pos, neg)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature() == (3, 0)
    }

    fn gram_rational(&self) -> [[BigRational; 3]; 3] {
        let m = self.gram2();
        let two = BigInt::from(2);
        core::array::from_fn(|i| {
            core::array::from_fn(|j| BigRational::new(m[i][j].clone(), two.clone()))
        })
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        Self {
            a11: k * &self.a11,
            a22: k * &self.a22,
            a33: k * &self.a33,
            a12: k * &self.a12,
            a13: k * &self.a13,
            a23: k * &self.a23,
        }
    }

    fn linear_comb(u: &BigInt, a: &Self, v: &BigInt, b: &Self) -> Self {
        Self {
            a11: u * &a.a11 + v * &b.a11,
            a22: u * &a.a22 + v * &b.a22,
            a33: u * &a.a33 + v * &b.a33,
            a12: u * &a.a12 + v * &b.a12,
            a13: u * &a.a13 + v * &b.a13,
            a23: u * &a.a23 + v * &b.a23,
        }
    }
}

fn mat_mul_ig(g: &[[i64; 3]; 3], m: &[[BigInt; 3]; 3]) -> [[BigInt; 3]; 3] {
    core::array::from_fn(|i| {
        core::array::from_fn(|j| {
            (0..3).map(|k| g[i][k] * &m[k][j]).sum()
        })
    })
}

fn mat_mul_gt(m: &[[BigInt; 3]; 3], g: &[[i64; 3]; 3]) -> [[BigInt; 3]; 3] {
    core::array::from_fn(|i| {
        core::array::from_fn(|j| {
            (0..3).map(|k| &m[i][k] * g[j][k]).sum()
        })
    })
}

pub(crate) fn det3_i64(g: &[[i64; 3]; 3]) -> i64 {
    let m: [[i128; 3]; 3] = core::array::from_fn(|i| core::array::from_fn(|j| g[i][j] as i128));
    let d = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    i64::try_from(d).expect("3x3 determinant overflow")
}

/// The isotropic form x1 x3 - n x2^2 of determinant quarter n.
pub fn an_form(n: i64) -> TernaryQuadraticForm {
    TernaryQuadraticForm::new(0, -n, 0, 0, 1, 0)
}

/// x1 x3 - x2^2.
pub fn a1_form() -> TernaryQuadraticForm {
    an_form(1)
}

/// A pair of integral ternary quadratic forms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairTQF {
    pub a: TernaryQuadraticForm,
    pub b: TernaryQuadraticForm,
}

impl PairTQF {
    pub fn new(a: TernaryQuadraticForm, b: TernaryQuadraticForm) -> Self {
        Self { a, b }
    }
}

/// Orbit classification of a nondegenerate real pair with 4 det(A) > 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RealSplittingType {
    /// Four real intersection points: A = B = 0 has a nonzero real solution.
    T1111,
    /// Negative resolvent discriminant.
    T112,
    /// No common real zero; B positive on the real zeros of A.
    T22Plus,
    /// No common real zero; B negative on the real zeros of A.
    T22Minus,
    /// A anisotropic over the reals.
    T22Sharp,
}

/// Residual line classification of a conic A mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kappa {
    Plus,
    Minus,
    /// Double line or rank <= 1 reduction; the form is not good at p.
    NotGood,
}

impl Kappa {
    pub fn sign(self) -> Option<i8> {
        match self {
            Kappa::Plus => Some(1),
            Kappa::Minus => Some(-1),
            Kappa::NotGood => None,
        }
    }
}

/// A place of the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Place {
    Finite(u64),
    Infinity,
}

/// The binary cubic form 4 det(Ax - By).
pub fn resolvent(p: &PairTQF) -> BinaryCubicForm {
    let coeffs = resolvent_bigint(p);
    let conv = |v: BigInt| -> i64 {
        i64::try_from(v).expect("resolvent coefficient exceeds i64")
    };
    let [c0, c1, c2, c3] = coeffs;
    BinaryCubicForm::new(conv(c0), conv(c1), conv(c2), conv(c3))
}

/// Expanded coefficients of 4 det(Ax - By) in descending powers of x.
pub fn resolvent_bigint(p: &PairTQF) -> [BigInt; 4] {
    let (a11, a22, a33) = (&p.a.a11, &p.a.a22, &p.a.a33);
    let (a12, a13, a23) = (&p.a.a12, &p.a.a13, &p.a.a23);
    let (b11, b22, b33) = (&p.b.a11, &p.b.a22, &p.b.a33);
    let (b12, b13, b23) = (&p.b.a12, &p.b.a13, &p.b.a23);
    let c0 = p.a.det4();
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
    let c3 = -p.b.det4();
    [c0, c1, c2, c3]
}

/// Twisted action of (g2, g3) with det(g2) det(g3) = 1: g3 acts on each form
/// by congruence and g2 mixes the pair so that the resolvent transforms by
/// the twisted GL2 substitution. The mixing coefficients are fixed by the
/// identity 4 det(A(px+ry) - B(qx+sy)) = 4 det(A'x - B'y) with
/// (A', B') = det(g2) (pA - qB, sB - rA).
pub fn act_g(g2: &GL2Element, g3: &[[i64; 3]; 3], pair: &PairTQF) -> PairTQF {
    let d2 = g2.det();
    let d3 = det3_i64(g3);
    assert_eq!(
        (d2 as i128) * (d3 as i128),
        1,
        "pair action requires det(g2) det(g3) = 1"
    );
    let a3 = pair.a.transform(g3);
    let b3 = pair.b.transform(g3);
    let d2 = BigInt::from(d2);
    let a = TernaryQuadraticForm::linear_comb(
        &(&d2 * g2.p),
        &a3,
        &(-&d2 * g2.q),
        &b3,
    );
    let b = TernaryQuadraticForm::linear_comb(
        &(&d2 * g2.s),
        &b3,
        &(-&d2 * g2.r),
        &a3,
    );
    PairTQF::new(a, b)
}

/// Explicit section of the resolvent map:
/// A = x1 x3 - a x2^2, B = x1 x2 + b x2^2 + c x2 x3 + d x3^2.
pub fn section_t(f: &BinaryCubicForm) -> PairTQF {
    let a = TernaryQuadraticForm::new(0, -f.a, 0, 0, 1, 0);
    let b = TernaryQuadraticForm::new(0, f.b, f.d, 1, 0, f.c);
    let pair = PairTQF::new(a, b);
    debug_assert_eq!(&resolvent(&pair), f, "section round-trip");
    pair
}

/// Classification of the real orbit of a pair with 4 det(A) > 0 and
/// nondegenerate resolvent.
pub fn real_splitting_type(pair: &PairTQF) -> RealSplittingType {
    let n = pair.a.det4();
    assert!(n.is_positive(), "real splitting type needs 4 det(A) > 0");
    let f = resolvent(pair);
    let disc = f.disc();
    assert!(disc != 0, "real splitting type needs nonzero discriminant");
    if disc < 0 {
        return RealSplittingType::T112;
    }
    let ga = pair.a.gram_rational();
    let (s, mut d) = diagonalize_sym3(&ga);
    debug_assert!(d.iter().all(|x| !x.is_zero()));
    if d.iter().all(|x| x.is_positive()) {
        return RealSplittingType::T22Sharp;
    }
    // det > 0 and not definite forces signature (1,2); flip the sign of A
    // (same real zero set) to get (2,1) and move the negative entry last.
    let mut s = s;
    if d.iter().filter(|x| x.is_negative()).count() == 2 {
        for x in d.iter_mut() {
            *x = -x.clone();
        }
    }
    let neg_at = d.iter().position(|x| x.is_negative()).expect("mixed signature");
    if neg_at != 2 {
        d.swap(neg_at, 2);
        for row in s.iter_mut() {
            row.swap(neg_at, 2);
        }
    }
    let (alpha, beta, gamma) = (d[0].clone(), d[1].clone(), -d[2].clone());
    // B in the diagonalizing coordinates.
    let gb = pair.b.gram_rational();
    let bm = congruence(&gb, &s);
    // On the cone alpha u^2 + beta v^2 = gamma w^2 the form B becomes
    // Q(u,v) +- L(u,v) sqrt(s2(u,v)) over the two sheets, with
    // Q = B|_{w=0} + b33 s2, L = 2(b13 u + b23 v), s2 = (alpha u^2 + beta v^2)/gamma.
    let s2_u = &alpha / &gamma;
    let s2_v = &beta / &gamma;
    let q20 = &bm[0][0] + &bm[2][2] * &s2_u;
    let q11 = BigRational::from_integer(BigInt::from(2)) * &bm[0][1];
    let q02 = &bm[1][1] + &bm[2][2] * &s2_v;
    let l1 = BigRational::from_integer(BigInt::from(2)) * &bm[0][2];
    let l2 = BigRational::from_integer(BigInt::from(2)) * &bm[1][2];
    // G = Q^2 - L^2 s2 is the product of B over the two sheets; its real
    // projective roots are exactly the common real zeros of A and B.
    let mut g = [
        &q20 * &q20,
        BigRational::from_integer(BigInt::from(2)) * &q20 * &q11,
        &q11 * &q11 + BigRational::from_integer(BigInt::from(2)) * &q20 * &q02,
        BigRational::from_integer(BigInt::from(2)) * &q11 * &q02,
        &q02 * &q02,
    ];
    let l_sq = [&l1 * &l1, BigRational::from_integer(BigInt::from(2)) * &l1 * &l2, &l2 * &l2];
    // subtract (l_sq convolved with s2): s2 has coefficients (s2_u, 0, s2_v).
    g[0] -= &l_sq[0] * &s2_u;
    g[1] -= &l_sq[1] * &s2_u;
    g[2] -= &l_sq[2] * &s2_u + &l_sq[0] * &s2_v;
    g[3] -= &l_sq[1] * &s2_v;
    g[4] -= &l_sq[2] * &s2_v;
    debug_assert!(!g.iter().all(|x| x.is_zero()), "degenerate restriction");
    let root_at_infinity = g[0].is_zero();
    let univ: Vec<BigRational> = g.iter().rev().cloned().collect(); // ascending in t for G(t,1)
    if root_at_infinity || sturm_distinct_real_roots(&univ) > 0 {
        return RealSplittingType::T1111;
    }
    // No common real zero: B has constant sign on the conic, equal to the
    // sign of Q at any point (and Q cannot vanish there).
    for (u, v) in [(1i64, 0i64), (0, 1), (1, 1)] {
        let u = BigRational::from_integer(BigInt::from(u));
        let v = BigRational::from_integer(BigInt::from(v));
        let q = &q20 * &u * &u + &q11 * &u * &v + &q02 * &v * &v;
        if q.is_positive() {
            return RealSplittingType::T22Plus;
        }
        if q.is_negative() {
            return RealSplittingType::T22Minus;
        }
    }
    unreachable!("sign of B on the conic must resolve at a sample point")
}

/// Hilbert symbol (u, v)_p over Q_p, or over the reals for the infinite
/// place: +1 iff z^2 = u x^2 + v y^2 has a nontrivial solution.
pub fn hilbert_symbol(u: &BigInt, v: &BigInt, place: Place) -> i8 {
    assert!(!u.is_zero() && !v.is_zero(), "hilbert symbol needs nonzero arguments");
    match place {
        Place::Infinity => {
            if u.is_negative() && v.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Finite(2) => {
            let (alpha, u0) = split_valuation(u, 2);
            let (beta, v0) = split_valuation(v, 2);
            let eps = |m: &BigInt| -> u32 {
                // (m - 1)/2 mod 2 for odd m: 1 iff m = 3 mod 4
                if mod_u64(m, 4) == 3 {
                    1
                } else {
                    0
                }
            };
            let omega = |m: &BigInt| -> u32 {
                // (m^2 - 1)/8 mod 2 for odd m: 1 iff m = 3, 5 mod 8
                matches!(mod_u64(m, 8), 3 | 5) as u32
            };
            let e = eps(&u0) * eps(&v0) + alpha * omega(&v0) + beta * omega(&u0);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Finite(p) => {
            assert!(p > 2 && p % 2 == 1, "finite place must be prime");
            let (alpha, u0) = split_valuation(u, p);
            let (beta, v0) = split_valuation(v, p);
            let mut r: i8 = 1;
            if alpha % 2 == 1 && beta % 2 == 1 && (p - 1) / 2 % 2 == 1 {
                r = -r;
            }
            if beta % 2 == 1 {
                r *= legendre(&u0, p);
            }
            if alpha % 2 == 1 {
                r *= legendre(&v0, p);
            }
            r
        }
    }
}

fn split_valuation(x: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut v = 0u32;
    let mut x = x.clone();
    while (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    (v, x)
}

fn mod_u64(x: &BigInt, m: u64) -> u64 {
    use num_integer::Integer;
    let r = x.mod_floor(&BigInt::from(m));
    u64::try_from(r).expect("reduced residue fits")
}

fn legendre(x: &BigInt, p: u64) -> i8 {
    let r = mod_u64(x, p);
    if r == 0 {
        return 0;
    }
    let s = pow_mod_u64(r, (p - 1) / 2, p);
    if s == 1 {
        1
    } else {
        -1
    }
}

/// Resolvent-side local invariant of A at p: +1 when the mod-p conic is a
/// pair of distinct F_p-rational lines (or smooth, by convention), -1 when
/// the lines are conjugate over F_{p^2}, NotGood for a double line or worse.
pub fn kappa_p(a: &TernaryQuadraticForm, p: u64) -> Kappa {
    assert!(!a.det4().is_zero(), "kappa_p needs nonsingular A");
    if p == 2 {
        return kappa_two(a);
    }
    // diagonalize the Gram matrix over F_p
    let inv2 = (p + 1) / 2;
    let g2 = a.gram2();
    let m: [[u64; 3]; 3] = core::array::from_fn(|i| {
        core::array::from_fn(|j| mod_u64(&g2[i][j], p) * inv2 % p)
    });
    let d = diagonalize_sym3_mod_p(m, p);
    let nz: Vec<u64> = d.into_iter().filter(|&x| x != 0).collect();
    match nz.len() {
        3 => Kappa::Plus,
        2 => {
            // d0 u^2 + d1 v^2 factors iff -d0 d1 is a square mod p
            let prod = nz[0] * nz[1] % p;
            let neg = (p - prod % p) % p;
            match legendre(&BigInt::from(neg), p) {
                1 => Kappa::Plus,
                -1 => Kappa::Minus,
                _ => Kappa::NotGood,
            }
        }
        _ => Kappa::NotGood,
    }
}

fn kappa_two(a: &TernaryQuadraticForm) -> Kappa {
    let bit = |x: &BigInt| -> u8 { (mod_u64(x, 2)) as u8 };
    // coefficient vector mod 2, ordered (x1^2, x2^2, x3^2, x1x2, x1x3, x2x3)
    let target = [
        bit(&a.a11),
        bit(&a.a22),
        bit(&a.a33),
        bit(&a.a12),
        bit(&a.a13),
        bit(&a.a23),
    ];
    if target == [0; 6] {
        return Kappa::NotGood;
    }
    // F_4 arithmetic on {0, 1, w, w+1} encoded 0..3: addition is xor.
    let f4_mul = |x: u8, y: u8| -> u8 {
        const TBL: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
        TBL[x as usize][y as usize]
    };
    let f4_conj = |x: u8| -> u8 { [0u8, 1, 3, 2][x as usize] };
    let product_coeffs = |e: [u8; 3], f: [u8; 3]| -> [u8; 6] {
        let sq = |i: usize| f4_mul(e[i], f[i]);
        let cross = |i: usize, j: usize| f4_mul(e[i], f[j]) ^ f4_mul(e[j], f[i]);
        [sq(0), sq(1), sq(2), cross(0, 1), cross(0, 2), cross(1, 2)]
    };
    // rational lines: nonzero vectors over F_2
    let lines: Vec<[u8; 3]> = (1u8..8)
        .map(|m| [m & 1, (m >> 1) & 1, (m >> 2) & 1])
        .collect();
    for (i, &e) in lines.iter().enumerate() {
        for &f in &lines[i..] {
            if product_coeffs(e, f) == target {
                return if e == f { Kappa::NotGood } else { Kappa::Plus };
            }
        }
    }
    // conjugate line pairs over F_4: projective points with a coordinate
    // outside F_2, normalized to leading coordinate 1
    for c0 in 0..4u8 {
        for c1 in 0..4u8 {
            for c2 in 0..4u8 {
                let e = [c0, c1, c2];
                if e.iter().all(|&x| x < 2) {
                    continue;
                }
                match e.iter().find(|&&x| x != 0) {
                    Some(&lead) if lead == 1 => {}
                    _ => continue,
                }
                let f = [f4_conj(c0), f4_conj(c1), f4_conj(c2)];
                if product_coeffs(e, f) == target {
                    return Kappa::Minus;
                }
            }
        }
    }
    // not a product of lines: smooth reduction
    Kappa::Plus
}

/// +1 iff A is isotropic over the reals (requires 4 det(A) > 0, so the
/// signature is (3,0) or (1,2)).
pub fn kappa_infty(a: &TernaryQuadraticForm) -> i8 {
    assert!(a.det4().is_positive(), "kappa_infty needs 4 det(A) > 0");
    if a.is_positive_definite() {
        -1
    } else {
        1
    }
}

/// Hasse invariant c_v(A) = prod_{i<j} (d_i, d_j)_v over a rational
/// diagonalization <d_1, d_2, d_3> of A.
pub fn hasse_invariant(a: &TernaryQuadraticForm, place: Place) -> i8 {
    assert!(!a.det4().is_zero(), "hasse invariant needs nonsingular A");
    let g = a.gram_rational();
    let (_, d) = diagonalize_sym3(&g);
    let reps: Vec<BigInt> = d.iter().map(|x| x.numer() * x.denom()).collect();
    let mut c: i8 = 1;
    for i in 0..3 {
        for j in (i + 1)..3 {
            c *= hilbert_symbol(&reps[i], &reps[j], place);
        }
    }
    c
}

/// Covariant pair of a binary quartic form: (x1 x3 - x2^2, B(q)) where B(q)
/// carries the quartic coefficients on the Gram slots
/// (11, 12, 22, 23, 33) = (a, b, c, d, e).
pub fn phi_quartic(q: &BinaryQuarticForm) -> PairTQF {
    let b = TernaryQuadraticForm::new(q.a, q.c, q.e, q.b, 0, q.d);
    PairTQF::new(a1_form(), b)
}

/// The determinant-one 3x3 matrix attached to a unimodular g, stabilizing
/// x1 x3 - x2^2. For g = [[p,q],[r,s]] it is
/// (1/det) [[s^2, rs, r^2], [2qs, ps+qr, 2pr], [q^2, pq, p^2]].
pub fn tau_pgl2(g: &GL2Element) -> [[i64; 3]; 3] {
    let dt = g.det();
    assert!(dt == 1 || dt == -1, "tau needs |det| = 1");
    let (p, q, r, s) = (g.p, g.q, g.r, g.s);
    let m = [
        [s * s, r * s, r * r],
        [2 * q * s, p * s + q * r, 2 * p * r],
        [q * q, p * q, p * p],
    ];
    core::array::from_fn(|i| core::array::from_fn(|j| m[i][j] * dt))
}

// ---------------------------------------------------------------------------
// rational symmetric diagonalization and Sturm chains

/// Congruent diagonalization: returns (S, d) with S^t G S = diag(d).
fn diagonalize_sym3(g: &[[BigRational; 3]; 3]) -> ([[BigRational; 3]; 3], [BigRational; 3]) {
    let mut m: Vec<Vec<BigRational>> = g.iter().map(|r| r.to_vec()).collect();
    let mut s: Vec<Vec<BigRational>> = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for k in 0..3 {
        if m[k][k].is_zero() {
            // bring a nonzero diagonal entry into position k, or create one
            if let Some(j) = (k + 1..3).find(|&j| !m[j][j].is_zero()) {
                swap_basis(&mut m, &mut s, k, j);
            } else if let Some(j) = (k + 1..3).find(|&j| !m[k][j].is_zero()) {
                add_basis(&mut m, &mut s, k, j);
            } else {
                // row k is zero on the remaining block
                continue;
            }
        }
        let pivot = m[k][k].clone();
        for j in (k + 1)..3 {
            if m[k][j].is_zero() {
                continue;
            }
            let lam = &m[k][j] / &pivot;
            // col_j -= lam col_k; row_j -= lam row_k; S col_j -= lam S col_k
            for i in 0..3 {
                let t = &m[i][k] * &lam;
                m[i][j] -= t;
            }
            for i in 0..3 {
                let t = &m[k][i] * &lam;
                m[j][i] -= t;
            }
            for i in 0..3 {
                let t = &s[i][k] * &lam;
                s[i][j] -= t;
            }
        }
    }
    let d: [BigRational; 3] = core::array::from_fn(|i| m[i][i].clone());
    let s_arr: [[BigRational; 3]; 3] = core::array::from_fn(|i| {
        core::array::from_fn(|j| s[i][j].clone())
    });
    debug_assert!({
        let chk = congruence(g, &s_arr);
        (0..3).all(|i| (0..3).all(|j| if i == j { chk[i][j] == d[i] } else { chk[i][j].is_zero() }))
    });
    (s_arr, d)
}

fn swap_basis(m: &mut [Vec<BigRational>], s: &mut [Vec<BigRational>], k: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(k, j);
    }
    m.swap(k, j);
    for row in s.iter_mut() {
        row.swap(k, j);
    }
}

fn add_basis(m: &mut [Vec<BigRational>], s: &mut [Vec<BigRational>], k: usize, j: usize) {
    // x_k <- x_k + x_j: col_k += col_j, row_k += row_j
    for i in 0..3 {
        let t = m[i][j].clone();
        m[i][k] += t;
    }
    for i in 0..3 {
        let t = m[j][i].clone();
        m[k][i] += t;
    }
    for i in 0..3 {
        let t = s[i][j].clone();
        s[i][k] += t;
    }
}

/// S^t G S for rational matrices.
fn congruence(
    g: &[[BigRational; 3]; 3],
    s: &[[BigRational; 3]; 3],
) -> [[BigRational; 3]; 3] {
    let mut gs = [[BigRational::zero(), BigRational::zero(), BigRational::zero()],
        [BigRational::zero(), BigRational::zero(), BigRational::zero()],
        [BigRational::zero(), BigRational::zero(), BigRational::zero()]];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let t = &g[i][k] * &s[k][j];
                gs[i][j] += t;
            }
        }
    }
    let mut out = [[BigRational::zero(), BigRational::zero(), BigRational::zero()],
        [BigRational::zero(), BigRational::zero(), BigRational::zero()],
        [BigRational::zero(), BigRational::zero(), BigRational::zero()]];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let t = &s[k][i] * &gs[k][j];
                out[i][j] += t;
            }
        }
    }
    out
}

fn diagonalize_sym3_mod_p(mut m: [[u64; 3]; 3], p: u64) -> [u64; 3] {
    let addm = |x: u64, y: u64| (x + y) % p;
    let subm = |x: u64, y: u64| (x + p - y % p) % p;
    let mulm = |x: u64, y: u64| x * y % p;
    for k in 0..3 {
        if m[k][k] == 0 {
            if let Some(j) = (k + 1..3).find(|&j| m[j][j] != 0) {
                for row in m.iter_mut() {
                    row.swap(k, j);
                }
                m.swap(k, j);
            } else if let Some(j) = (k + 1..3).find(|&j| m[k][j] != 0) {
                for i in 0..3 {
                    m[i][k] = addm(m[i][k], m[i][j]);
                }
                for i in 0..3 {
                    m[k][i] = addm(m[k][i], m[j][i]);
                }
            } else {
                continue;
            }
        }
        let inv = pow_mod_u64(m[k][k], p - 2, p);
        for j in (k + 1)..3 {
            if m[k][j] == 0 {
                continue;
            }
            let lam = mulm(m[k][j], inv);
            for i in 0..3 {
                let t = mulm(m[i][k], lam);
                m[i][j] = subm(m[i][j], t);
            }
            for i in 0..3 {
                let t = mulm(m[k][i], lam);
                m[j][i] = subm(m[j][i], t);
            }
        }
    }
    [m[0][0], m[1][1], m[2][2]]
}

fn rat_sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn poly_trim(v: &mut Vec<BigRational>) {
    while v.last().map_or(false, |x| x.is_zero()) {
        v.pop();
    }
}

fn poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r: Vec<BigRational> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead = &b[db];
    while r.len() > db {
        let dr = r.len() - 1;
        let coef = &r[dr] / lead;
        for i in 0..=db {
            let t = &b[i] * &coef;
            r[dr - db + i] -= t;
        }
        r.pop();
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Number of distinct real roots of the polynomial with the given ascending
/// coefficients, counted over all of R by a Sturm chain evaluated at the two
/// infinities.
fn sturm_distinct_real_roots(coeffs: &[BigRational]) -> usize {
    let mut p0: Vec<BigRational> = coeffs.to_vec();
    poly_trim(&mut p0);
    if p0.len() <= 1 {
        // constants (the zero polynomial is rejected by callers)
        return 0;
    }
    let mut p1: Vec<BigRational> = p0
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i as i64)))
        .collect();
    poly_trim(&mut p1);
    let mut chain = alloc::vec![p0, p1];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        if chain[n - 1].len() == 1 {
            break;
        }
        let mut r = poly_rem(&chain[n - 2], &chain[n - 1]);
        for c in r.iter_mut() {
            *c = -c.clone();
        }
        chain.push(r);
    }
    let variations = |at_plus_infinity: bool| -> usize {
        let mut count = 0;
        let mut last: i8 = 0;
        for p in &chain {
            if p.is_empty() {
                continue;
            }
            let deg = p.len() - 1;
            let mut s = rat_sign(&p[deg]);
            if !at_plus_infinity && deg % 2 == 1 {
                s = -s;
            }
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    };
    variations(false) - variations(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::BinaryCubicForm;

    #[test]
    fn resolvent_examples() {
        // A = x1x3 - x2^2, B = x1^2 - x3^2 -> x^3 + 4xy^2
        let a = a1_form();
        let b = TernaryQuadraticForm::new(1, 0, -1, 0, 0, 0);
        let f = resolvent(&PairTQF::new(a.clone(), b));
        assert_eq!(f, BinaryCubicForm::new(1, 0, 4, 0));
        // B = 0 -> (4 det A, 0, 0, 0)
        let f = resolvent(&PairTQF::new(a.clone(), TernaryQuadraticForm::zero()));
        assert_eq!(f, BinaryCubicForm::new(1, 0, 0, 0));
        // flipping the sign of B flips the odd coefficients
        let b = TernaryQuadraticForm::new(3, -1, 2, 5, 0, -7);
        let f1 = resolvent(&PairTQF::new(a.clone(), b.clone()));
        let f2 = resolvent(&PairTQF::new(a, b.scaled(&BigInt::from(-1))));
        assert_eq!((f1.a, -f1.b, f1.c, -f1.d), (f2.a, f2.b, f2.c, f2.d));
    }

    #[test]
    fn section_round_trips() {
        for f in [
            BinaryCubicForm::new(1, 0, 4, 0),
            BinaryCubicForm::new(1, 1, 2, 3),
            BinaryCubicForm::new(0, 0, 0, 0),
            BinaryCubicForm::new(-2, 5, -1, 7),
        ] {
            let pair = section_t(&f);
            assert_eq!(resolvent(&pair), f);
        }
    }

    #[test]
    fn act_g_respects_resolvent() {
        let f = BinaryCubicForm::new(1, 1, 2, 3);
        let pair = section_t(&f);
        // unipotent g2 with identity g3
        let g2 = GL2Element { p: 1, q: 0, r: 2, s: 1 };
        let id3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let moved = act_g(&g2, &id3, &pair);
        assert_eq!(resolvent(&moved), f.act_gl2(&g2));
        // (A, B - kA) shape
        assert_eq!(moved.a, pair.a);
        assert_eq!(
            moved.b,
            TernaryQuadraticForm::linear_comb(
                &BigInt::from(1),
                &pair.b,
                &BigInt::from(-2),
                &pair.a
            )
        );
        // permutation g3 of determinant one with identity g2
        let g3 = [[0, 1, 0], [0, 0, 1], [1, 0, 0]];
        let moved = act_g(&GL2Element::IDENTITY, &g3, &pair);
        assert_eq!(resolvent(&moved), f);
        // det(g2) = det(g3) = -1
        let g2 = GL2Element { p: 0, q: 1, r: 1, s: 0 };
        let g3 = [[0, 0, 1], [0, 1, 0], [1, 0, 0]];
        let moved = act_g(&g2, &g3, &pair);
        assert_eq!(resolvent(&moved), f.act_gl2(&g2));
    }

    #[test]
    fn splitting_types() {
        // definite A with positive resolvent discriminant
        let a = TernaryQuadraticForm::new(1, 1, 1, 1, 0, 0);
        assert!(a.is_positive_definite());
        // pick B with disc(resolvent) > 0 by search over a small box
        let mut found = None;
        'outer: for b22 in -2i64..3 {
            for b23 in -2i64..3 {
                for b33 in -2i64..3 {
                    let b = TernaryQuadraticForm::new(0, b22, b33, 1, 0, b23);
                    let pair = PairTQF::new(a.clone(), b);
                    let f = resolvent(&pair);
                    if f.disc() > 0 {
                        found = Some(pair);
                        break 'outer;
                    }
                }
            }
        }
        let pair = found.expect("a definite pair with positive discriminant");
        assert_eq!(real_splitting_type(&pair), RealSplittingType::T22Sharp);

        // negative discriminant forces T112
        let f = BinaryCubicForm::new(1, 0, -1, -1);
        assert!(f.disc() < 0);
        assert_eq!(real_splitting_type(&section_t(&f)), RealSplittingType::T112);

        // the section of a totally real resolvent has a common zero
        let f = BinaryCubicForm::new(1, 0, -4, 1);
        assert!(f.disc() > 0);
        assert_eq!(real_splitting_type(&section_t(&f)), RealSplittingType::T1111);

        // split quartic with no real roots: B definite-positive on the conic
        let q = BinaryQuarticForm::new(1, 0, 5, 0, 4);
        let pair = phi_quartic(&q);
        assert!(resolvent(&pair).disc() > 0);
        assert_eq!(real_splitting_type(&pair), RealSplittingType::T22Plus);
        let qn = BinaryQuarticForm::new(-1, 0, -5, 0, -4);
        let pair = phi_quartic(&qn);
        assert_eq!(real_splitting_type(&pair), RealSplittingType::T22Minus);
    }

    #[test]
    fn hilbert_symbol_table() {
        let one = BigInt::from(1);
        let m1 = BigInt::from(-1);
        for p in [Place::Finite(2), Place::Finite(3), Place::Finite(5), Place::Infinity] {
            for v in [-7i64, -2, -1, 1, 2, 3, 5, 10] {
                assert_eq!(hilbert_symbol(&one, &BigInt::from(v), p), 1);
            }
        }
        assert_eq!(hilbert_symbol(&m1, &m1, Place::Finite(2)), -1);
        assert_eq!(hilbert_symbol(&m1, &m1, Place::Infinity), -1);
        assert_eq!(hilbert_symbol(&BigInt::from(2), &BigInt::from(3), Place::Finite(5)), 1);
        // product over all places is +1 (checked on a few pairs over the
        // places supporting a nontrivial symbol)
        for (u, v) in [(-1i64, -1i64), (2, 3), (-2, 15), (6, -10), (7, 11)] {
            let (u, v) = (BigInt::from(u), BigInt::from(v));
            let mut prod: i32 = hilbert_symbol(&u, &v, Place::Infinity) as i32;
            for p in [2u64, 3, 5, 7, 11, 13] {
                prod *= hilbert_symbol(&u, &v, Place::Finite(p)) as i32;
            }
            assert_eq!(prod, 1, "product formula fails for ({u}, {v})");
        }
    }

    #[test]
    fn kappa_examples() {
        // x1 x3 - n x2^2 splits into rational lines at every p | n
        for (n, p) in [(3i64, 3u64), (4, 2), (10, 5), (10, 2)] {
            assert_eq!(kappa_p(&an_form(n), p), Kappa::Plus);
        }
        // x1^2 + x1x2 + x2^2 + x3^2 at 3: conjugate lines
        let a = TernaryQuadraticForm::new(1, 1, 1, 1, 0, 0);
        assert_eq!(a.det4(), BigInt::from(3));
        assert_eq!(kappa_p(&a, 3), Kappa::Minus);
        assert_eq!(kappa_infty(&a), -1);
        // rank-1 reduction
        let a = TernaryQuadraticForm::new(3, 3, 1, 3, 0, 0);
        assert_eq!(kappa_p(&a, 3), Kappa::NotGood);
        // A1 is isotropic
        assert_eq!(kappa_infty(&a1_form()), 1);
    }

    #[test]
    fn hasse_examples() {
        // <1,1,1> has trivial symbols everywhere
        let a = TernaryQuadraticForm::new(1, 1, 1, 0, 0, 0);
        for p in [2u64, 3, 5, 7] {
            assert_eq!(hasse_invariant(&a, Place::Finite(p)), 1);
        }
        // A1 diagonalizes as <1,-1,-1>: c_2 = (-1,-1)_2 = -1
        assert_eq!(hasse_invariant(&a1_form(), Place::Finite(2)), -1);
        assert_eq!(hasse_invariant(&a1_form(), Place::Finite(3)), 1);
        // kappa-Hasse identity at p = 3, n = 3 for the definite example
        let a = TernaryQuadraticForm::new(1, 1, 1, 1, 0, 0);
        let lhs = hasse_invariant(&a, Place::Finite(3));
        let rhs = hilbert_symbol(&BigInt::from(-1), &BigInt::from(-3), Place::Finite(3))
            * kappa_p(&a, 3).sign().unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn tau_and_phi() {
        let t = tau_pgl2(&GL2Element { p: 1, q: 1, r: 0, s: 1 });
        assert_eq!(t, [[1, 0, 0], [2, 1, 0], [1, 1, 1]]);
        assert_eq!(det3_i64(&t), 1);
        // tau preserves A1 for assorted unimodular g
        for g in [
            GL2Element { p: 0, q: -1, r: 1, s: 0 },
            GL2Element { p: 2, q: 1, r: 1, s: 1 },
            GL2Element { p: 0, q: 1, r: 1, s: 0 },
            GL2Element { p: 3, q: 2, r: 1, s: 1 },
        ] {
            let t = tau_pgl2(&g);
            assert_eq!(det3_i64(&t), 1);
            assert_eq!(a1_form().transform(&t), a1_form());
        }
        // phi example: x^4 - y^4 -> (A1, x1^2 - x3^2)
        let pair = phi_quartic(&BinaryQuarticForm::new(1, 0, 0, 0, -1));
        assert_eq!(pair.a, a1_form());
        assert_eq!(pair.b, TernaryQuadraticForm::new(1, 0, -1, 0, 0, 0));
        assert_eq!(resolvent(&pair), BinaryCubicForm::new(1, 0, 4, 0));
    }

    #[test]
    fn tau_equivariance_mod_unipotent() {
        // with K the antidiagonal basis reversal, R = K tau(g) K satisfies
        // B(q.act(g)) = R B(q) R^t + t A1 for an integer t
        let k = [[0i64, 0, 1], [0, 1, 0], [1, 0, 0]];
        let qs = [
            BinaryQuarticForm::new(1, 2, 3, 4, 5),
            BinaryQuarticForm::new(2, -1, 0, 3, -2),
            BinaryQuarticForm::new(1, 0, -4, 1, 7),
        ];
        let gs = [
            GL2Element { p: 2, q: 1, r: 1, s: 1 },
            GL2Element { p: 3, q: 2, r: 1, s: 1 },
            GL2Element { p: 1, q: 2, r: 1, s: 1 },
            GL2Element { p: 0, q: 1, r: 1, s: 0 },
        ];
        for q in &qs {
            for g in &gs {
                let tau = tau_pgl2(g);
                let r = mat3_mul(&mat3_mul(&k, &tau), &k);
                let lhs = phi_quartic(&q.act_gl2(g)).b;
                // transform(r) conjugates the Gram matrix by r on the left
                let rb = phi_quartic(q).b.transform(&r);
                // difference must be an integer multiple of A1
                let t = -( &lhs.a22 - &rb.a22 );
                let shifted = TernaryQuadraticForm::linear_comb(
                    &BigInt::from(1),
                    &rb,
                    &t,
                    &a1_form(),
                );
                assert_eq!(lhs, shifted, "q={q:?} g={g:?}");
            }
        }
        fn mat3_mul(a: &[[i64; 3]; 3], b: &[[i64; 3]; 3]) -> [[i64; 3]; 3] {
            core::array::from_fn(|i| {
                core::array::from_fn(|j| (0..3).map(|l| a[i][l] * b[l][j]).sum())
            })
        }
    }

    #[test]
    fn sturm_counts() {
        let r = |x: i64| BigRational::from_integer(BigInt::from(x));
        // (t^2 - 1)(t^2 - 4): 4 distinct roots
        let p = alloc::vec![r(4), r(0), r(-5), r(0), r(1)];
        assert_eq!(sturm_distinct_real_roots(&p), 4);
        // t^2 + 1: none
        let p = alloc::vec![r(1), r(0), r(1)];
        assert_eq!(sturm_distinct_real_roots(&p), 0);
        // (t - 1)^2: one distinct root despite multiplicity
        let p = alloc::vec![r(1), r(-2), r(1)];
        assert_eq!(sturm_distinct_real_roots(&p), 1);
        // t^3 - t: 3
        let p = alloc::vec![r(0), r(-1), r(0), r(1)];
        assert_eq!(sturm_distinct_real_roots(&p), 3);
    }
}
