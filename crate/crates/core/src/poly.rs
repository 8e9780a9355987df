//! Sparse multivariate polynomials over [`Rational`].
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is the
//! graded-lexicographic order with `x0 > x1 > x2 > ...`. The largest key is
//! therefore the leading term, and iterating the map in reverse yields the
//! canonical text order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Index of a symbolic variable, displayed as `x<index>`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VarId(pub u32);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl FromStr for VarId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.strip_prefix('x')
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|d| d.parse().ok())
            .map(VarId)
            .ok_or_else(|| Error::BadPolynomial(s.to_string()))
    }
}

impl Serialize for VarId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VarId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Hands out fresh variables `x0, x1, ...`; never reuses an index.
#[derive(Clone, Debug, Default)]
pub struct VarAllocator {
    next: u32,
}

impl VarAllocator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Allocator whose first variable is `start`.
    pub fn starting_at(start: u32) -> Self {
        VarAllocator { next: start }
    }

    pub fn fresh(&mut self) -> VarId {
        let v = VarId(self.next);
        self.next += 1;
        v
    }

    pub fn allocated(&self) -> u32 {
        self.next
    }
}

/// Variable binding used for limit evaluation.
pub type Binding = BTreeMap<VarId, Rational>;

/// A power product; exponents are positive and sorted by variable.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_exponents(exps: impl IntoIterator<Item = (VarId, u32)>) -> Self {
        let mut map: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in exps {
            *map.entry(v).or_default() += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn exponents(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let d = other.0[j].1;
                j += 1;
                match e.cmp(&d) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - d)),
                }
            } else {
                out.push((v, e));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // lex with x0 > x1 > ...: the first variable where exponents
            // differ decides, and a missing variable has exponent 0
            let (a, b) = (&self.0, &other.0);
            let (mut i, mut j) = (0, 0);
            loop {
                match (a.get(i), b.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => {
                            if ea != eb {
                                return ea.cmp(&eb);
                            }
                            i += 1;
                            j += 1;
                        }
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: VarId) -> Self {
        Self::term(Monomial::var(v), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    /// Exact structural zero test; no tolerance involved.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.last_key_value()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms
            .keys()
            .flat_map(|m| m.exponents().iter().map(|&(v, _)| v))
            .collect()
    }

    fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self -= c * m * other`
    fn sub_scaled(&mut self, other: &Polynomial, m: &Monomial, c: &Rational) {
        for (om, oc) in &other.terms {
            self.add_term(om.mul(m), &-(oc * c));
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Exact quotient `self / den`; any nonzero remainder is an error.
    ///
    /// Single-divisor multivariate division in graded-lex order: the
    /// leading term of the running remainder must always be divisible by
    /// the divisor's leading term.
    pub fn exact_div(&self, den: &Polynomial) -> Result<Polynomial> {
        let (lm, lc) = den.leading_term().ok_or(Error::DivisorZeroPoly)?;
        if lm.is_one() {
            let inv = lc.recip()?;
            return Ok(self.scale(&inv));
        }
        let inexact = || Error::InexactDivision {
            num: self.to_string(),
            den: den.to_string(),
        };
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.checked_div(lm).ok_or_else(inexact)?;
            let qc = rc.checked_div(lc)?;
            rem.sub_scaled(den, &qm, &qc);
            quot.add_term(qm, &qc);
        }
        Ok(quot)
    }

    pub fn eval(&self, point: &Binding) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.exponents() {
                let x = point.get(&v).ok_or(Error::UnboundVariable(v))?;
                t *= &x.pow(e);
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Replaces every bound variable by its value; unbound ones stay symbolic.
    pub fn substitute(&self, point: &Binding) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m.exponents() {
                match point.get(&v) {
                    Some(x) => coeff *= &x.pow(e),
                    None => rest.push((v, e)),
                }
            }
            out.add_term(Monomial(rest), &coeff);
        }
        out
    }
}

/// Exact quotient of `num` by `den`.
pub fn poly_exact_div(num: &Polynomial, den: &Polynomial) -> Result<Polynomial> {
    num.exact_div(den)
}

pub fn poly_eval(p: &Polynomial, point: &Binding) -> Result<Rational> {
    p.eval(point)
}

pub fn poly_is_zero(p: &Polynomial) -> bool {
    p.is_zero()
}

impl From<Rational> for Polynomial {
    fn from(c: Rational) -> Self {
        Polynomial::constant(c)
    }
}

impl From<i64> for Polynomial {
    fn from(c: i64) -> Self {
        Polynomial::constant(Rational::from(c))
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let c = ca * cb;
                acc.entry(ma.mul(mb)).and_modify(|x| *x += &c).or_insert(c);
            }
        }
        Polynomial {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mag = if k == 0 {
                c.clone()
            } else {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
                c.abs()
            };
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else if (-&mag).is_one() {
                write!(f, "-{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    /// Accepts the canonical text form, e.g. `-47/12*x0^2 + 267/4*x0 - 3`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadPolynomial(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        // split into signed terms at top-level '+' / '-' (a sign directly
        // after '^' or '*' is not allowed, so every sign starts a term)
        let mut pieces: Vec<(bool, &str)> = Vec::new();
        let bytes = compact.as_bytes();
        let mut start = 0;
        let mut negative = false;
        if matches!(bytes[0], b'+' | b'-') {
            negative = bytes[0] == b'-';
            start = 1;
        }
        for (i, &b) in bytes.iter().enumerate().skip(start) {
            if matches!(b, b'+' | b'-') {
                pieces.push((negative, &compact[start..i]));
                negative = b == b'-';
                start = i + 1;
            }
        }
        pieces.push((negative, &compact[start..]));

        let mut p = Polynomial::zero();
        for (neg, body) in pieces {
            if body.is_empty() {
                return Err(bad());
            }
            let mut coeff = Rational::one();
            let mut exps = Vec::new();
            for factor in body.split('*') {
                if factor.starts_with('x') {
                    let (name, exp) = match factor.split_once('^') {
                        Some((n, e)) => (n, e.parse::<u32>().map_err(|_| bad())?),
                        None => (factor, 1),
                    };
                    exps.push((name.parse::<VarId>()?, exp));
                } else {
                    coeff *= &factor.parse::<Rational>().map_err(|_| bad())?;
                }
            }
            if neg {
                coeff = -coeff;
            }
            p.add_term(Monomial::from_exponents(exps), &coeff);
        }
        Ok(p)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    fn x(i: u32) -> Polynomial {
        Polynomial::var(VarId(i))
    }

    fn c(v: i64) -> Polynomial {
        Polynomial::from(v)
    }

    #[test]
    fn grlex_order() {
        let m = |e: &[(u32, u32)]| Monomial::from_exponents(e.iter().map(|&(v, e)| (VarId(v), e)));
        assert!(m(&[(0, 2)]) > m(&[(0, 1), (1, 1)]));
        assert!(m(&[(0, 1), (1, 1)]) > m(&[(1, 2)]));
        assert!(m(&[(1, 2)]) > m(&[(0, 1)]));
        assert!(m(&[(0, 1)]) > m(&[(1, 1)]));
        assert!(m(&[(2, 1)]) > Monomial::one());
        assert_eq!(m(&[(0, 1), (0, 1)]), m(&[(0, 2)]));
    }

    #[test]
    fn product_from_condensation() {
        // (1 - x)(-x - 6) - 3(2x)
        let got = &(&(&c(1) - &x(0)) * &(&(-&x(0)) - &c(6))) - &(&c(3) * &(&c(2) * &x(0)));
        assert_eq!(got, p("x0^2 - x0 - 6"));
        assert_eq!(&got + &Polynomial::zero(), got);
        assert_eq!(&(&x(0) + &x(1)) * &(&x(0) - &x(1)), p("x0^2 - x1^2"));
    }

    #[test]
    fn exact_division_examples() {
        let q = p("x0^2 - x0 - 6").exact_div(&p("-x0 - 2")).unwrap();
        assert_eq!(q, p("3 - x0"));
        let q = p("267/4*x0 - 47/12*x0^2").exact_div(&x(0)).unwrap();
        assert_eq!(q, p("267/4 - 47/12*x0"));
        assert!(matches!(
            p("x0^2 + 1").exact_div(&x(0)),
            Err(Error::InexactDivision { .. })
        ));
        assert_eq!(
            p("x0").exact_div(&Polynomial::zero()),
            Err(Error::DivisorZeroPoly)
        );
        assert_eq!(p("6*x1").exact_div(&c(4)).unwrap(), p("3/2*x1"));
    }

    #[test]
    fn evaluation_examples() {
        let zero_at = |vars: &[u32]| -> Binding {
            vars.iter().map(|&v| (VarId(v), Rational::zero())).collect()
        };
        assert_eq!(
            p("213 - 55*x0").eval(&zero_at(&[0])).unwrap(),
            Rational::from(213)
        );
        let at3: Binding = [(VarId(0), Rational::from(3))].into();
        assert_eq!(p("40*x0 + 93").eval(&at3).unwrap(), Rational::from(213));
        let big = p("-24*x0*x3 + 184*x0 + 128*x3 + 24*x1*x2 - 136*x2 - 176*x1 + 16");
        assert_eq!(
            big.eval(&zero_at(&[0, 1, 2, 3])).unwrap(),
            Rational::from(16)
        );
        assert_eq!(
            big.eval(&zero_at(&[0, 1, 2])),
            Err(Error::UnboundVariable(VarId(3)))
        );
    }

    #[test]
    fn zero_detection() {
        assert!(Polynomial::zero().is_zero());
        assert!((&x(0) - &x(0)).is_zero());
        assert!(!p("4*x0").is_zero());
    }

    #[test]
    fn canonical_text() {
        assert_eq!(p("213 - 55*x0").to_string(), "-55*x0 + 213");
        assert_eq!(p("-x0 - 6 + x0^2").to_string(), "x0^2 - x0 - 6");
        assert_eq!(p("267/4 - 47/12*x0").to_string(), "-47/12*x0 + 267/4");
        assert_eq!(Polynomial::zero().to_string(), "0");
        assert_eq!(p("x1*x0").to_string(), "x0*x1");
        assert_eq!(p("-7/2").to_string(), "-7/2");
        for bad in ["", "x", "1 +", "2**x0", "x0^", "y0", "1/0*x0"] {
            assert!(bad.parse::<Polynomial>().is_err(), "{bad:?}");
        }
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        let term = (
            -6i64..=6,
            1i64..=3,
            proptest::collection::vec((0u32..3, 0u32..3), 0..3),
        );
        proptest::collection::vec(term, 0..4).prop_map(|ts| {
            Polynomial::from_terms(ts.into_iter().map(|(n, d, e)| {
                (
                    Monomial::from_exponents(e.into_iter().map(|(v, k)| (VarId(v), k))),
                    Rational::new(n, d).unwrap(),
                )
            }))
        })
    }

    fn arb_point() -> impl Strategy<Value = Binding> {
        proptest::collection::vec(-5i64..=5, 3).prop_map(|vals| {
            vals.into_iter()
                .enumerate()
                .map(|(i, v)| (VarId(i as u32), Rational::from(v)))
                .collect()
        })
    }

    fn no_stored_zero(q: &Polynomial) -> bool {
        q.terms()
            .all(|(m, c)| !c.is_zero() && m.exponents().iter().all(|&(_, e)| e > 0))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), d in arb_poly()) {
            prop_assert_eq!(&a * &(&b + &d), &(&a * &b) + &(&a * &d));
            prop_assert_eq!(&(&a * &b) * &d, &a * &(&b * &d));
            prop_assert_eq!(&(&a + &b) + &d, &a + &(&b + &d));
            prop_assert_eq!(&a - &a, Polynomial::zero());
        }

        #[test]
        fn division_round_trip(a in arb_poly(), d in arb_poly()) {
            prop_assume!(!d.is_zero());
            prop_assert_eq!((&a * &d).exact_div(&d).unwrap(), a);
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in arb_poly(), b in arb_poly(), pt in arb_point()) {
            let ea = a.eval(&pt).unwrap();
            let eb = b.eval(&pt).unwrap();
            prop_assert_eq!((&a * &b).eval(&pt).unwrap(), &ea * &eb);
            prop_assert_eq!((&a + &b).eval(&pt).unwrap(), &ea + &eb);
        }

        #[test]
        fn sparsity_is_maintained(a in arb_poly(), b in arb_poly()) {
            prop_assert!(no_stored_zero(&(&a + &b)));
            prop_assert!(no_stored_zero(&(&a - &b)));
            prop_assert!(no_stored_zero(&(&a * &b)));
            prop_assert!(no_stored_zero(&(-&a)));
        }

        #[test]
        fn text_round_trip(a in arb_poly()) {
            prop_assert_eq!(a.to_string().parse::<Polynomial>().unwrap(), a);
        }
    }
}
