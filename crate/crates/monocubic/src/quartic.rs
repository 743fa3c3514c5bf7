//! Integral binary quartic forms and their invariant theory.
//!
//! A quartic q = a x^4 + b x^3 y + c x^2 y^2 + d x y^3 + e y^4 carries the
//! classical invariants I, J and the seminvariants H, R, tied by the syzygy
//! 27 R^2 = 48 a^2 I H - 64 a^3 J - H^3. The orbit censuses in `orbits` run
//! on these forms; this module only knows the forms themselves.

use crate::cubic::GL2Element;

/// Integral binary quartic form a x^4 + b x^3 y + c x^2 y^2 + d x y^3 + e y^4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryQuarticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub e: i64,
}

impl BinaryQuarticForm {
    pub const fn new(a: i64, b: i64, c: i64, d: i64, e: i64) -> Self {
        Self { a, b, c, d, e }
    }

    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        // Horner in x/y mixed to keep intermediates small.
        (((self.a as i128 * x + self.b as i128 * y) * x + self.c as i128 * y * y) * x
            + self.d as i128 * y * y * y)
            * x
            + self.e as i128 * y * y * y * y
    }

    /// Degree-2 invariant I = 12ae - 3bd + c^2.
    pub fn i_invariant(&self) -> i128 {
        let (a, b, c, d, e) = self.parts();
        12 * a * e - 3 * b * d + c * c
    }

    /// Degree-3 invariant J = 72ace + 9bcd - 27ad^2 - 27b^2 e - 2c^3.
    pub fn j_invariant(&self) -> i128 {
        let (a, b, c, d, e) = self.parts();
        72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * b * b * e - 2 * c * c * c
    }

    /// Discriminant, with the normalization 27 disc = 4I^3 - J^2.
    pub fn disc(&self) -> i128 {
        let i = self.i_invariant();
        let j = self.j_invariant();
        let num = 4 * i * i * i - j * j;
        debug_assert_eq!(num % 27, 0);
        num / 27
    }

    /// Leading seminvariant H = 8ac - 3b^2 (invariant under x -> x + ky).
    pub fn h_seminvariant(&self) -> i128 {
        let (a, b, c, _, _) = self.parts();
        8 * a * c - 3 * b * b
    }

    /// Cubic seminvariant R = b^3 + 8a^2 d - 4abc.
    /// Satisfies 27 R^2 = 48 a^2 I H - 64 a^3 J - H^3.
    pub fn r_seminvariant(&self) -> i128 {
        let (a, b, c, d, _) = self.parts();
        b * b * b + 8 * a * a * d - 4 * a * b * c
    }

    /// Substituted form det(g)^{-2} q((x,y)g) for |det g| = 1.
    pub fn act_gl2(&self, g: &GL2Element) -> Self {
        let dt = g.det();
        assert!(dt == 1 || dt == -1, "quartic action needs |det| = 1");
        let (p, q, r, s) = (g.p as i128, g.q as i128, g.r as i128, g.s as i128);
        let (a, b, c, d, e) = self.parts();
        // q(px+ry, qx+sy) expanded by powers of x. det^{-2} = 1.
        let a2 = a * p * p * p * p + b * p * p * p * q + c * p * p * q * q + d * p * q * q * q
            + e * q * q * q * q;
        let b2 = 4 * a * p * p * p * r
            + b * (3 * p * p * q * r + p * p * p * s)
            + c * (2 * p * q * q * r + 2 * p * p * q * s)
            + d * (q * q * q * r + 3 * p * q * q * s)
            + 4 * e * q * q * q * s;
        let c2 = 6 * a * p * p * r * r
            + 3 * b * (p * q * r * r + p * p * r * s)
            + c * (q * q * r * r + 4 * p * q * r * s + p * p * s * s)
            + 3 * d * (q * q * r * s + p * q * s * s)
            + 6 * e * q * q * s * s;
        let d2 = 4 * a * p * r * r * r
            + b * (q * r * r * r + 3 * p * r * r * s)
            + c * (2 * q * r * r * s + 2 * p * r * s * s)
            + d * (3 * q * r * s * s + p * s * s * s)
            + 4 * e * q * s * s * s;
        let e2 = a * r * r * r * r + b * r * r * r * s + c * r * r * s * s + d * r * s * s * s
            + e * s * s * s * s;
        let conv = |v: i128| -> i64 {
            i64::try_from(v).expect("quartic coefficient overflow under GL2 action")
        };
        Self::new(conv(a2), conv(b2), conv(c2), conv(d2), conv(e2))
    }

    /// Reversal q(y, x); the image of the swap element, kept separate from
    /// act_gl2 for use in reduction where the orientation matters.
    pub fn reverse(&self) -> Self {
        Self::new(self.e, self.d, self.c, self.b, self.a)
    }

    /// Substituted form det(g)^{-2} q((x,y)g) for any g with det != 0.
    /// Returns None when some coefficient of the substituted form is not
    /// divisible by det^2, i.e. when g does not act integrally on this form.
    pub fn act_scaled(&self, g: &GL2Element) -> Option<Self> {
        let dt = g.det() as i128;
        assert!(dt != 0, "scaled quartic action needs det != 0");
        let (p, q, r, s) = (g.p as i128, g.q as i128, g.r as i128, g.s as i128);
        let (a, b, c, d, e) = self.parts();
        let a2 = a * p * p * p * p + b * p * p * p * q + c * p * p * q * q + d * p * q * q * q
            + e * q * q * q * q;
        let b2 = 4 * a * p * p * p * r
            + b * (3 * p * p * q * r + p * p * p * s)
            + c * (2 * p * q * q * r + 2 * p * p * q * s)
            + d * (q * q * q * r + 3 * p * q * q * s)
            + 4 * e * q * q * q * s;
        let c2 = 6 * a * p * p * r * r
            + 3 * b * (p * q * r * r + p * p * r * s)
            + c * (q * q * r * r + 4 * p * q * r * s + p * p * s * s)
            + 3 * d * (q * q * r * s + p * q * s * s)
            + 6 * e * q * q * s * s;
        let d2 = 4 * a * p * r * r * r
            + b * (q * r * r * r + 3 * p * r * r * s)
            + c * (2 * q * r * r * s + 2 * p * r * s * s)
            + d * (3 * q * r * s * s + p * s * s * s)
            + 4 * e * q * s * s * s;
        let e2 = a * r * r * r * r + b * r * r * r * s + c * r * r * s * s + d * r * s * s * s
            + e * s * s * s * s;
        let det2 = dt * dt;
        let mut out = [a2, b2, c2, d2, e2];
        for v in out.iter_mut() {
            if *v % det2 != 0 {
                return None;
            }
            *v /= det2;
        }
        let conv = |v: i128| -> i64 {
            i64::try_from(v).expect("quartic coefficient overflow under scaled action")
        };
        Some(Self::new(
            conv(out[0]),
            conv(out[1]),
            conv(out[2]),
            conv(out[3]),
            conv(out[4]),
        ))
    }

    /// Number of real projective roots (0, 2, or 4), counting a vanishing
    /// leading coefficient as the root at infinity. Requires disc != 0, so
    /// all roots are simple and the count is a class invariant.
    pub fn real_root_count(&self) -> u8 {
        let disc = self.disc();
        assert!(disc != 0, "real root count needs nonzero discriminant");
        if disc < 0 {
            return 2;
        }
        if self.a == 0 {
            // y divides q; the cubic cofactor has positive discriminant here,
            // hence three real roots, plus the root at infinity.
            return 4;
        }
        let h = self.h_seminvariant();
        let a = self.a as i128;
        if h < 0 && h * h > 16 * a * a * self.i_invariant() {
            4
        } else {
            0
        }
    }

    /// Translation q(x + k y, y).
    pub fn translate(&self, k: i64) -> Self {
        self.act_gl2(&GL2Element { p: 1, q: 0, r: k, s: 1 })
    }

    /// True when q(x, 1) has a real root or the leading coefficient vanishes
    /// (a root at infinity). Exact integer test via the seminvariant
    /// criterion: for disc > 0 the roots are all real iff H <= 0 and
    /// H^2 >= 16 a^2 I; for disc < 0 there are exactly two real roots.
    pub fn has_real_root(&self) -> bool {
        if self.a == 0 {
            return true;
        }
        let disc = self.disc();
        assert!(disc != 0, "real-root test expects nonzero discriminant");
        if disc < 0 {
            return true;
        }
        let h = self.h_seminvariant();
        let a = self.a as i128;
        h <= 0 && h * h >= 16 * a * a * self.i_invariant()
    }

    fn parts(&self) -> (i128, i128, i128, i128, i128) {
        (
            self.a as i128,
            self.b as i128,
            self.c as i128,
            self.d as i128,
            self.e as i128,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_for_split_quartic() {
        let q = BinaryQuarticForm::new(1, 0, 0, 0, -1);
        assert_eq!(q.i_invariant(), -12);
        assert_eq!(q.j_invariant(), 0);
        // 27 disc = 4*(-12)^3 => disc = -256
        assert_eq!(q.disc(), -256);
    }

    #[test]
    fn seminvariant_syzygy() {
        // 27 R^2 = 48 a^2 I H - 64 a^3 J - H^3 on a few forms.
        for q in [
            BinaryQuarticForm::new(1, 2, 3, 4, 5),
            BinaryQuarticForm::new(2, -1, 0, 7, -3),
            BinaryQuarticForm::new(1, 0, -4, 1, 2),
            BinaryQuarticForm::new(-3, 5, 1, -2, 2),
        ] {
            let (a, h, r) = (q.a as i128, q.h_seminvariant(), q.r_seminvariant());
            let lhs = 27 * r * r;
            let rhs = 48 * a * a * q.i_invariant() * h - 64 * a * a * a * q.j_invariant()
                - h * h * h;
            assert_eq!(lhs, rhs, "syzygy fails on {q:?}");
        }
    }

    #[test]
    fn action_preserves_invariants() {
        let q = BinaryQuarticForm::new(1, -2, 0, 3, -1);
        let gens = [
            GL2Element { p: 1, q: 0, r: 1, s: 1 },
            GL2Element { p: 0, q: -1, r: 1, s: 0 },
            GL2Element { p: 0, q: 1, r: 1, s: 0 },
            GL2Element { p: 1, q: 0, r: 0, s: -1 },
        ];
        for g in &gens {
            let q2 = q.act_gl2(g);
            assert_eq!(q.i_invariant(), q2.i_invariant());
            assert_eq!(q.j_invariant(), q2.j_invariant());
        }
        // postfix right action: acting by g then h substitutes
        // (x,y) -> ((x,y)h)g, so the combined element is h*g.
        let g = gens[0];
        let h = gens[1];
        let hg = GL2Element {
            p: h.p * g.p + h.q * g.r,
            q: h.p * g.q + h.q * g.s,
            r: h.r * g.p + h.s * g.r,
            s: h.r * g.q + h.s * g.s,
        };
        assert_eq!(q.act_gl2(&hg), q.act_gl2(&g).act_gl2(&h));
    }

    #[test]
    fn real_root_criterion_matches_samples() {
        // (x^2-y^2)(x^2-4y^2): 4 real roots, disc > 0.
        let q = BinaryQuarticForm::new(1, 0, -5, 0, 4);
        assert!(q.disc() > 0);
        assert!(q.has_real_root());
        // (x^2+y^2)(x^2+4y^2): 0 real roots, disc > 0.
        let q = BinaryQuarticForm::new(1, 0, 5, 0, 4);
        assert!(q.disc() > 0);
        assert!(!q.has_real_root());
        // x^4 - y^4 has disc < 0: two real roots.
        assert!(BinaryQuarticForm::new(1, 0, 0, 0, -1).has_real_root());
    }
}
