//! Dynamic towers of algebraic extensions of the rationals.
//!
//! The blow-up resolution meets points and curves whose coordinates generate
//! algebraic extensions (conjugate singular points on an exceptional line,
//! conjugate line pairs in a rank-2 tangent cone). Rather than factoring
//! minimal polynomials up front, levels are adjoined with square-free moduli
//! and computations run over the resulting etale algebra. Whenever an
//! inversion meets a zero divisor the offending level splits into the two
//! cofactors and the caller restarts on each branch separately, so conjugate
//! objects with divergent behavior are separated exactly when a computation
//! first tells them apart.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Identity of a tower level, stable across resolution restarts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LevelKey {
    pub site_path: Vec<u32>,
    pub seq: u32,
}

/// A zero divisor was hit: the level's modulus factors as
/// `factor * cofactor`, and the computation must fork.
#[derive(Debug, Clone)]
pub struct SplitRequest {
    pub key: LevelKey,
    /// Monic proper factor of the level's modulus, coefficients at the
    /// level's base depth.
    pub factor: UPoly,
}

pub type TowerResult<T> = Result<T, SplitRequest>;

/// Element of the tower algebra: a rational at depth zero, otherwise a
/// reduced polynomial in the top generator with coefficients one level down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Elem {
    Q(BigRational),
    Ext(Vec<Elem>),
}

impl Elem {
    pub fn structurally_zero(&self) -> bool {
        match self {
            Elem::Q(r) => r.is_zero(),
            Elem::Ext(cs) => cs.iter().all(|c| c.structurally_zero()),
        }
    }

    /// True when the element is a constant rational viewed at any depth.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Elem::Q(r) => Some(r.clone()),
            Elem::Ext(cs) => {
                let mut it = cs.iter();
                let Some(head) = it.next() else {
                    return Some(BigRational::zero());
                };
                let first = head.as_rational()?;
                if it.all(|c| c.structurally_zero()) {
                    Some(first)
                } else {
                    None
                }
            }
        }
    }
}

/// Wrap a coefficient vector, trimming trailing zeros and collapsing
/// constants, so that equal elements are structurally equal. Rational
/// constants are always represented as bare `Q` values, valid at any depth.
fn ext(mut coeffs: Vec<Elem>) -> Elem {
    while let Some(last) = coeffs.last() {
        if last.structurally_zero() {
            coeffs.pop();
        } else {
            break;
        }
    }
    match coeffs.len() {
        0 => Elem::Q(BigRational::zero()),
        1 => match coeffs.pop().unwrap() {
            Elem::Q(r) => Elem::Q(r),
            other => Elem::Ext(vec![other]),
        },
        _ => Elem::Ext(coeffs),
    }
}

/// Dense univariate polynomial over the tower, ascending coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly(pub Vec<Elem>);

impl UPoly {
    pub fn zero() -> UPoly {
        UPoly(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.structurally_zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|c| !c.structurally_zero())
    }

    pub fn coeff(&self, k: usize) -> Elem {
        self.0.get(k).cloned().unwrap_or(Elem::Q(BigRational::zero()))
    }

    fn trim(mut self) -> UPoly {
        while let Some(last) = self.0.last() {
            if last.structurally_zero() {
                self.0.pop();
            } else {
                break;
            }
        }
        self
    }
}

/// One adjoined level: a monic square-free modulus over the tower below.
#[derive(Debug, Clone)]
pub struct Level {
    pub key: LevelKey,
    pub modulus: UPoly,
    pub degree: usize,
}

/// A tower of extensions of the rationals.
#[derive(Debug, Clone, Default)]
pub struct Tower {
    pub levels: Vec<Level>,
}

impl Tower {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Total degree over the rationals.
    pub fn total_degree(&self) -> usize {
        self.levels.iter().map(|l| l.degree).product::<usize>().max(1)
    }

    pub fn level_keys(&self) -> Vec<LevelKey> {
        self.levels.iter().map(|l| l.key.clone()).collect()
    }

    pub fn find_level(&self, key: &LevelKey) -> Option<usize> {
        self.levels.iter().position(|l| &l.key == key)
    }

    // ---- element construction ------------------------------------------

    pub fn zero(&self) -> Elem {
        self.from_rational(BigRational::zero())
    }

    pub fn one(&self) -> Elem {
        self.from_rational(BigRational::one())
    }

    pub fn from_rational(&self, r: BigRational) -> Elem {
        self.embed_at(r, self.depth())
    }

    fn embed_at(&self, r: BigRational, _depth: usize) -> Elem {
        Elem::Q(r)
    }

    /// Lift an element from the prefix tower of the given depth to the full
    /// depth (the element must not involve the removed generators).
    pub fn lift(&self, e: &Elem, from_depth: usize) -> Elem {
        match e {
            Elem::Q(_) => e.clone(),
            _ => {
                let mut out = e.clone();
                for _ in from_depth..self.depth() {
                    out = Elem::Ext(vec![out]);
                }
                out
            }
        }
    }

    /// The generator of the given level, viewed at full depth, reduced
    /// modulo the level modulus (a degree-one level collapses its generator
    /// to the negated constant term).
    pub fn generator(&self, level: usize) -> Elem {
        let modulus = &self.levels[level].modulus;
        // (own_depth, representation at that depth)
        let (own_depth, mut g) = if modulus.degree() == Some(1) {
            (level, self.neg(&modulus.coeff(0)))
        } else {
            (
                level + 1,
                Elem::Ext(vec![
                    Elem::Q(BigRational::zero()),
                    Elem::Q(BigRational::one()),
                ]),
            )
        };
        if matches!(g, Elem::Q(_)) {
            return g;
        }
        for _ in own_depth..self.depth() {
            g = Elem::Ext(vec![g]);
        }
        g
    }

    fn zero_at(&self, depth: usize) -> Elem {
        self.embed_at(BigRational::zero(), depth)
    }

    fn one_at(&self, depth: usize) -> Elem {
        self.embed_at(BigRational::one(), depth)
    }

    // ---- arithmetic ------------------------------------------------------

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.add_at(a, b, self.depth())
    }

    fn add_at(&self, a: &Elem, b: &Elem, depth: usize) -> Elem {
        match (a, b) {
            (Elem::Q(x), Elem::Q(y)) => Elem::Q(x + y),
            (Elem::Ext(xs), Elem::Q(_)) => {
                let mut out = xs.clone();
                if out.is_empty() {
                    out.push(b.clone());
                } else {
                    out[0] = self.add_at(&out[0], b, depth.saturating_sub(1));
                }
                ext(out)
            }
            (Elem::Q(_), Elem::Ext(_)) => self.add_at(b, a, depth),
            (Elem::Ext(xs), Elem::Ext(ys)) => {
                let len = xs.len().max(ys.len());
                let zero = Elem::Q(BigRational::zero());
                let mut out = Vec::with_capacity(len);
                for i in 0..len {
                    let x = xs.get(i).unwrap_or(&zero);
                    let y = ys.get(i).unwrap_or(&zero);
                    out.push(self.add_at(x, y, depth.saturating_sub(1)));
                }
                ext(out)
            }
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match a {
            Elem::Q(x) => Elem::Q(-x),
            Elem::Ext(xs) => ext(xs.iter().map(|x| self.neg(x)).collect()),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.mul_at(a, b, self.depth())
    }

    fn mul_at(&self, a: &Elem, b: &Elem, depth: usize) -> Elem {
        match (a, b) {
            (Elem::Q(x), Elem::Q(y)) => Elem::Q(x * y),
            (Elem::Ext(xs), Elem::Q(y)) => {
                if y.is_zero() {
                    return Elem::Q(BigRational::zero());
                }
                ext(xs
                    .iter()
                    .map(|x| self.mul_at(x, b, depth.saturating_sub(1)))
                    .collect())
            }
            (Elem::Q(_), Elem::Ext(_)) => self.mul_at(b, a, depth),
            (Elem::Ext(xs), Elem::Ext(ys)) => {
                if xs.is_empty() || ys.is_empty() {
                    return Elem::Q(BigRational::zero());
                }
                let zero = Elem::Q(BigRational::zero());
                let mut conv = vec![zero.clone(); xs.len() + ys.len() - 1];
                for (i, x) in xs.iter().enumerate() {
                    if x.structurally_zero() {
                        continue;
                    }
                    for (j, y) in ys.iter().enumerate() {
                        if y.structurally_zero() {
                            continue;
                        }
                        let prod = self.mul_at(x, y, depth.saturating_sub(1));
                        conv[i + j] = self.add_at(&conv[i + j], &prod, depth.saturating_sub(1));
                    }
                }
                self.reduce_mod_level(conv, depth)
            }
        }
    }

    /// Reduce a coefficient vector modulo the modulus of level `depth`
    /// (1-based from the bottom). The modulus is monic, so no inversion is
    /// needed.
    fn reduce_mod_level(&self, mut coeffs: Vec<Elem>, depth: usize) -> Elem {
        let modulus = &self.levels[depth - 1].modulus;
        let d = modulus.degree().expect("modulus is nonzero");
        while coeffs.len() > d {
            let lead = coeffs.pop().unwrap();
            if lead.structurally_zero() {
                continue;
            }
            let k = coeffs.len() - d;
            for i in 0..d {
                let m = self.mul_at(&lead, &modulus.0[i], depth - 1);
                coeffs[k + i] = self.sub_at(&coeffs[k + i], &m, depth - 1);
            }
        }
        ext(coeffs)
    }

    fn sub_at(&self, a: &Elem, b: &Elem, depth: usize) -> Elem {
        self.add_at(a, &self.neg(b), depth)
    }

    /// Multiplicative inverse; a zero divisor raises the split it witnesses.
    pub fn invert(&self, a: &Elem) -> TowerResult<Elem> {
        assert!(!a.structurally_zero(), "inverting zero");
        self.invert_at(a, self.depth())
    }

    fn invert_at(&self, a: &Elem, depth: usize) -> TowerResult<Elem> {
        match a {
            Elem::Q(x) => Ok(Elem::Q(BigRational::one() / x.clone())),
            Elem::Ext(coeffs) => {
                // Extended Euclid for gcd(rep, modulus) over the base.
                let modulus = self.levels[depth - 1].modulus.clone();
                let rep = UPoly(coeffs.clone()).trim();
                let (g, s) = self.half_ext_gcd(&rep, &modulus, depth - 1)?;
                let gd = g.degree().unwrap_or(0);
                if gd > 0 {
                    // Proper common factor: this level splits.
                    assert!(
                        gd < modulus.degree().unwrap_or(0),
                        "inverting an unreduced representation"
                    );
                    let monic_g = self.make_monic(&g, depth - 1)?;
                    return Err(SplitRequest {
                        key: self.levels[depth - 1].key.clone(),
                        factor: monic_g,
                    });
                }
                // g is a unit constant: inverse = s / g.
                let ginv = self.invert_at(&g.coeff(0), depth - 1)?;
                let mut out = Vec::with_capacity(s.0.len());
                for c in &s.0 {
                    out.push(self.mul_at(c, &ginv, depth - 1));
                }
                Ok(self.reduce_mod_level(out, depth))
            }
        }
    }

    /// Half-extended gcd: returns `(g, s)` with `s * a = g (mod b)` and `g`
    /// the gcd of `a` and `b`, working at the given coefficient depth.
    fn half_ext_gcd(&self, a: &UPoly, b: &UPoly, depth: usize) -> TowerResult<(UPoly, UPoly)> {
        let mut r0 = a.clone().trim();
        let mut r1 = b.clone().trim();
        let mut s0 = UPoly(vec![self.one_at(depth)]);
        let mut s1 = UPoly::zero();
        while !r1.is_zero() {
            let (q, r) = self.divrem_at(&r0, &r1, depth)?;
            let qs1 = self.upoly_mul_at(&q, &s1, depth);
            let s2 = self.upoly_sub_at(&s0, &qs1, depth);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        Ok((r0, s0))
    }

    /// Division with remainder at the given depth; the divisor's leading
    /// coefficient is inverted (splits propagate).
    fn divrem_at(&self, a: &UPoly, b: &UPoly, depth: usize) -> TowerResult<(UPoly, UPoly)> {
        let db = b.degree().expect("division by zero polynomial");
        let lead_inv = self.invert_at(&b.coeff(db), depth)?;
        let mut rem = a.clone().trim();
        let mut quot = vec![self.zero_at(depth); a.0.len().saturating_sub(db) + 1];
        loop {
            let Some(dr) = rem.degree() else { break };
            if dr < db {
                break;
            }
            let factor = self.mul_at(&rem.coeff(dr), &lead_inv, depth);
            let shift = dr - db;
            quot[shift] = self.add_at(&quot[shift], &factor, depth);
            for i in 0..=db {
                let sub = self.mul_at(&factor, &b.coeff(i), depth);
                let cur = rem.coeff(shift + i);
                let newc = self.sub_at(&cur, &sub, depth);
                if rem.0.len() <= shift + i {
                    rem.0.resize(shift + i + 1, self.zero_at(depth));
                }
                rem.0[shift + i] = newc;
            }
            rem = rem.trim();
        }
        Ok((UPoly(quot).trim(), rem))
    }

    fn upoly_mul_at(&self, a: &UPoly, b: &UPoly, depth: usize) -> UPoly {
        if a.is_zero() || b.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![self.zero_at(depth); a.0.len() + b.0.len() - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.structurally_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                let prod = self.mul_at(x, y, depth);
                out[i + j] = self.add_at(&out[i + j], &prod, depth);
            }
        }
        UPoly(out).trim()
    }

    fn upoly_sub_at(&self, a: &UPoly, b: &UPoly, depth: usize) -> UPoly {
        let len = a.0.len().max(b.0.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let x = if i < a.0.len() {
                a.0[i].clone()
            } else {
                self.zero_at(depth)
            };
            let y = if i < b.0.len() {
                b.0[i].clone()
            } else {
                self.zero_at(depth)
            };
            out.push(self.sub_at(&x, &y, depth));
        }
        UPoly(out).trim()
    }

    fn make_monic(&self, p: &UPoly, depth: usize) -> TowerResult<UPoly> {
        let d = p.degree().expect("monic of zero polynomial");
        let inv = self.invert_at(&p.coeff(d), depth)?;
        let mut out = Vec::with_capacity(d + 1);
        for i in 0..=d {
            out.push(self.mul_at(&p.coeff(i), &inv, depth));
        }
        Ok(UPoly(out).trim())
    }

    /// Decide vanishing in every branch of the algebra. A structural zero is
    /// zero; a unit is nonzero; a zero divisor splits.
    pub fn is_zero(&self, a: &Elem) -> TowerResult<bool> {
        if a.structurally_zero() {
            return Ok(true);
        }
        if a.as_rational().is_some() {
            return Ok(false);
        }
        self.invert(a).map(|_| false)
    }

    // ---- top-level univariate helpers (depth = full tower) ---------------

    pub fn upoly_mul(&self, a: &UPoly, b: &UPoly) -> UPoly {
        self.upoly_mul_at(a, b, self.depth())
    }

    pub fn upoly_sub(&self, a: &UPoly, b: &UPoly) -> UPoly {
        self.upoly_sub_at(a, b, self.depth())
    }

    pub fn upoly_add(&self, a: &UPoly, b: &UPoly) -> UPoly {
        self.upoly_sub_at(a, &self.upoly_neg(b), self.depth())
    }

    pub fn upoly_neg(&self, a: &UPoly) -> UPoly {
        UPoly(a.0.iter().map(|c| self.neg(c)).collect())
    }

    pub fn upoly_scale(&self, a: &UPoly, c: &Elem) -> UPoly {
        UPoly(a.0.iter().map(|x| self.mul(x, c)).collect()).trim()
    }

    pub fn upoly_divrem(&self, a: &UPoly, b: &UPoly) -> TowerResult<(UPoly, UPoly)> {
        self.divrem_at(a, b, self.depth())
    }

    pub fn upoly_monic(&self, p: &UPoly) -> TowerResult<UPoly> {
        self.make_monic(p, self.depth())
    }

    /// Monic gcd of two univariate polynomials over the tower.
    pub fn upoly_gcd(&self, a: &UPoly, b: &UPoly) -> TowerResult<UPoly> {
        let mut r0 = a.clone().trim();
        let mut r1 = b.clone().trim();
        while !r1.is_zero() {
            let (_, r) = self.upoly_divrem(&r0, &r1)?;
            r0 = r1;
            r1 = r;
        }
        if r0.is_zero() {
            Ok(r0)
        } else {
            self.upoly_monic(&r0)
        }
    }

    /// Square-free part `p / gcd(p, p')`, monic.
    pub fn upoly_square_free(&self, p: &UPoly) -> TowerResult<UPoly> {
        let dp = self.upoly_derivative(p);
        if dp.is_zero() {
            return self.upoly_monic(p);
        }
        let g = self.upoly_gcd(p, &dp)?;
        if g.degree().unwrap_or(0) == 0 {
            return self.upoly_monic(p);
        }
        let (q, r) = self.upoly_divrem(p, &g)?;
        debug_assert!(r.is_zero());
        self.upoly_monic(&q)
    }

    pub fn upoly_derivative(&self, p: &UPoly) -> UPoly {
        let mut out = Vec::new();
        for (i, c) in p.0.iter().enumerate().skip(1) {
            let k = self.from_rational(BigRational::from(BigInt::from(i)));
            out.push(self.mul(c, &k));
        }
        UPoly(out).trim()
    }

    pub fn upoly_eval(&self, p: &UPoly, x: &Elem) -> Elem {
        let mut acc = self.zero();
        for c in p.0.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    /// Try to take an exact square root of a rational-valued element.
    pub fn try_rational_sqrt(&self, a: &Elem) -> Option<Elem> {
        let r = a.as_rational()?;
        if r.is_negative() {
            return None;
        }
        let num = r.numer().sqrt();
        let den = r.denom().sqrt();
        if &(&num * &num) == r.numer() && &(&den * &den) == r.denom() {
            Some(self.from_rational(BigRational::new(num, den)))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn gauss_tower() -> Tower {
        // Adjoin a square root of -1.
        let t0 = Tower::default();
        let modulus = UPoly(vec![t0.from_rational(q(1)), t0.from_rational(q(0)), t0.from_rational(q(1))]);
        Tower {
            levels: vec![Level {
                key: LevelKey {
                    site_path: vec![],
                    seq: 0,
                },
                modulus,
                degree: 2,
            }],
        }
    }

    #[test]
    fn gaussian_arithmetic() {
        let t = gauss_tower();
        let i = t.generator(0);
        let ii = t.mul(&i, &i);
        assert_eq!(ii, t.from_rational(q(-1)));
        let inv = t.invert(&i).unwrap();
        assert_eq!(t.mul(&inv, &i), t.one());
        // (1 + i)(1 - i) = 2
        let a = t.add(&t.one(), &i);
        let b = t.sub(&t.one(), &i);
        assert_eq!(t.mul(&a, &b), t.from_rational(q(2)));
    }

    #[test]
    fn zero_divisor_splits() {
        // Adjoin a root of t^2 - 1 (reducible): t - 1 is a zero divisor.
        let t0 = Tower::default();
        let modulus = UPoly(vec![
            t0.from_rational(q(-1)),
            t0.from_rational(q(0)),
            t0.from_rational(q(1)),
        ]);
        let t = Tower {
            levels: vec![Level {
                key: LevelKey {
                    site_path: vec![7],
                    seq: 3,
                },
                modulus,
                degree: 2,
            }],
        };
        let g = t.generator(0);
        let zd = t.sub(&g, &t.one());
        let err = t.invert(&zd).unwrap_err();
        assert_eq!(err.key.site_path, vec![7]);
        assert_eq!(err.key.seq, 3);
        assert_eq!(err.factor.degree(), Some(1));
        // is_zero on the same element also reports the split.
        assert!(t.is_zero(&zd).is_err());
    }

    #[test]
    fn upoly_gcd_over_extension() {
        let t = gauss_tower();
        let i = t.generator(0);
        // (s - i)(s + i) = s^2 + 1 and (s - i): gcd = s - i.
        let p = UPoly(vec![t.one(), t.zero(), t.one()]);
        let d = UPoly(vec![t.neg(&i), t.one()]);
        let g = t.upoly_gcd(&p, &d).unwrap();
        assert_eq!(g.degree(), Some(1));
        assert!(t.is_zero(&t.upoly_eval(&g, &i)).unwrap());
    }

    #[test]
    fn square_free_part() {
        let t = Tower::default();
        // (s - 2)^2 (s + 1) -> (s - 2)(s + 1) = s^2 - s - 2.
        let p = UPoly(vec![
            t.from_rational(q(4)),
            t.from_rational(q(0)),
            t.from_rational(q(-3)),
            t.from_rational(q(1)),
        ]);
        let sf = t.upoly_square_free(&p).unwrap();
        assert_eq!(
            sf,
            UPoly(vec![
                t.from_rational(q(-2)),
                t.from_rational(q(-1)),
                t.from_rational(q(1))
            ])
        );
    }

    #[test]
    fn rational_sqrt() {
        let t = Tower::default();
        assert_eq!(
            t.try_rational_sqrt(&t.from_rational(q(9))),
            Some(t.from_rational(q(3)))
        );
        assert_eq!(t.try_rational_sqrt(&t.from_rational(q(2))), None);
        assert_eq!(t.try_rational_sqrt(&t.from_rational(q(-4))), None);
        let quarter = t.from_rational(BigRational::new(1.into(), 4.into()));
        assert_eq!(
            t.try_rational_sqrt(&quarter),
            Some(t.from_rational(BigRational::new(1.into(), 2.into())))
        );
    }
}
