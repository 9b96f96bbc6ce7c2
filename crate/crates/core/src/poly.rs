//! Sparse multivariate polynomials over [`Rational`] and their partial
//! derivatives.
//!
//! A [`MultiPoly`] is a map from exponent vectors to nonzero coefficients.
//! Every constructor and operation drops zero coefficients, so two
//! polynomials are equal exactly when their maps are equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{binomial, from_biguint, Rational};

/// Exponent vector `(a_1, ..., a_n)`.
///
/// Ordered graded-lexicographically: total degree first, then lexicographic
/// with `x1` most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit vector with a 1 in (0-based) position `i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// `|a| = a_1 + ... + a_n`.
    pub fn total(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; `None` unless `other <= self`.
    pub fn minus(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// `prod_i C(self_i, other_i)`.
    pub fn binomial(&self, other: &MultiIndex) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| from_biguint(&binomial(a as usize, b as usize)))
            .fold(Rational::one(), |acc, c| acc * c)
    }

    /// All `g` with `g <= self` componentwise.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.0.len())];
        for &bound in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=bound).map(move |e| {
                        let mut next = prefix.clone();
                        next.push(e);
                        next
                    })
                })
                .collect();
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// Every exponent vector in `n` variables with total degree `<= degree`,
    /// in ascending graded-lex order.
    pub fn up_to_degree(n: usize, degree: usize) -> Vec<MultiIndex> {
        let mut all = MultiIndex(vec![degree as u32; n])
            .sub_indices()
            .into_iter()
            .filter(|m| m.total() <= degree)
            .collect::<Vec<_>>();
        all.sort();
        all
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `n` variables with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    n: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

fn check_n(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::VariableCountMismatch { left, right })
    }
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        MultiPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::monomial(MultiIndex::zero(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    /// The coordinate function `x_i`, with `i` 1-based.
    pub fn var(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= n, "variable x{i} outside 1..={n}");
        Self::monomial(MultiIndex::unit(n, i - 1), Rational::one())
    }

    pub fn monomial(exponents: MultiIndex, c: Rational) -> Self {
        let n = exponents.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        MultiPoly { n, terms }
    }

    /// Builds a canonical polynomial, merging repeated exponents and dropping zeros.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Rational)>,
    {
        let mut p = MultiPoly::zero(n);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::IndexLength {
                    expected: n,
                    got: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &MultiIndex) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Maximum total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(MultiIndex::total).max()
    }

    pub(crate) fn add_term(&mut self, e: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Re-canonicalizes the term map. Operation results are already canonical,
    /// so this is the identity on them.
    pub fn normalized(&self) -> Self {
        MultiPoly::from_terms(self.n, self.terms.clone()).expect("lengths already checked")
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        check_n(self.n, other.n)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        check_n(self.n, other.n)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        check_n(self.n, other.n)?;
        let mut out = MultiPoly::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.plus(e2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.n);
        }
        MultiPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v * c))
                .collect(),
        }
    }

    /// Iterated partial derivative `d^alpha p`.
    pub fn partial(&self, alpha: &MultiIndex) -> Result<MultiPoly> {
        if alpha.len() != self.n {
            return Err(Error::IndexLength {
                expected: self.n,
                got: alpha.len(),
            });
        }
        let mut out = MultiPoly::zero(self.n);
        for (e, c) in &self.terms {
            let Some(rest) = e.minus(alpha) else {
                continue;
            };
            // d^a x^e = prod_i e_i (e_i - 1) ... (e_i - a_i + 1) x^(e - a)
            let mut factor = c.clone();
            for (&ei, &ai) in e.exponents().iter().zip(alpha.exponents()) {
                for k in 0..ai {
                    factor *= Rational::from_integer((ei - k).into());
                }
            }
            out.add_term(rest, factor);
        }
        Ok(out)
    }

    /// `d/dx_i`, with `i` 1-based.
    pub fn partial_i(&self, i: usize) -> MultiPoly {
        self.partial(&MultiIndex::unit(self.n, i - 1))
            .expect("unit index has the right length")
    }

    /// Value at the origin, i.e. the constant coefficient.
    pub fn eval_zero(&self) -> Rational {
        self.coeff(&MultiIndex::zero(self.n))
    }

    pub(crate) fn is_single_term(&self) -> bool {
        self.terms.len() == 1
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    /// Panics on a variable-count mismatch; use [`MultiPoly::try_add`] to get an error instead.
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

pub(crate) fn fmt_monomial(e: &MultiIndex, symbol: &str) -> String {
    e.exponents()
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("{symbol}{}", i + 1)
            } else {
                format!("{symbol}{}^{k}", i + 1)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Writes a signed sequence of `(coefficient, body)` terms as `a + b - c`.
/// An empty body means the term is a bare scalar.
pub(crate) fn write_signed_terms(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (Rational, String)>,
) -> fmt::Result {
    let mut first = true;
    for (c, body) in terms {
        let negative = c.is_negative();
        let mag = c.abs();
        match (first, negative) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        if body.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            write!(f, "{body}")?;
        } else {
            write!(f, "{mag}*{body}")?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Terms in descending graded-lex order, e.g. `x1^2*x2 - 1/2*x2 + 3`.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_signed_terms(
            f,
            self.terms
                .iter()
                .rev()
                .map(|(e, c)| (c.clone(), fmt_monomial(e, "x"))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(2, i)
    }

    fn mono(e: &[u32], c: Rational) -> MultiPoly {
        MultiPoly::monomial(MultiIndex::new(e.to_vec()), c)
    }

    #[test]
    fn add_cancels() {
        let p = &x(1) + &x(2);
        let q = &x(1) - &x(2);
        assert_eq!(&p + &q, x(1).scale(&int(2)));
        assert_eq!((&p - &p).len(), 0);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&x(1) * &x(1), mono(&[2, 0], int(1)));
        let one = MultiPoly::one(2);
        let lhs = &(&one + &x(1)) * &(&one - &x(1));
        // hand expansion: 1 - x1^2
        let expected = &one - &mono(&[2, 0], int(1));
        assert_eq!(lhs, expected);
    }

    #[test]
    fn mismatched_variable_counts() {
        let a = MultiPoly::var(1, 1);
        let b = MultiPoly::var(2, 1);
        assert_eq!(
            a.try_add(&b),
            Err(Error::VariableCountMismatch { left: 1, right: 2 })
        );
        assert!(a.try_mul(&b).is_err());
        assert!(a.partial(&MultiIndex::zero(2)).is_err());
    }

    #[test]
    fn partial_examples() {
        assert_eq!(
            MultiPoly::var(1, 1).try_mul(&MultiPoly::var(1, 1)).unwrap().partial_i(1),
            MultiPoly::var(1, 1).scale(&int(2))
        );
        let x1x2 = &x(1) * &x(2);
        assert_eq!(
            x1x2.partial(&MultiIndex::new(vec![1, 1])).unwrap(),
            MultiPoly::one(2)
        );
        // d^(2,0)(x1^3 x2): repeated single partials vs the closed form 3*2 x1 x2
        let p = mono(&[3, 1], int(1));
        let iterated = p.partial_i(1).partial_i(1);
        let direct = p.partial(&MultiIndex::new(vec![2, 0])).unwrap();
        assert_eq!(iterated, direct);
        assert_eq!(direct, mono(&[1, 1], int(6)));
        // annihilation
        assert!(p.partial(&MultiIndex::new(vec![4, 0])).unwrap().is_zero());
    }

    #[test]
    fn eval_zero_examples() {
        let p = &MultiPoly::constant(1, int(5)) + &MultiPoly::var(1, 1).scale(&int(3));
        assert_eq!(p.eval_zero(), int(5));
        assert_eq!((&x(1) * &x(2)).eval_zero(), int(0));
        let q = &MultiPoly::constant(2, rat(7, 3)) - &mono(&[0, 2], int(2));
        assert_eq!(q.eval_zero(), rat(7, 3));
    }

    #[test]
    fn graded_lex_order_and_rendering() {
        let mut idx = MultiIndex::up_to_degree(2, 2);
        assert_eq!(idx.len(), 6);
        idx.reverse();
        let rendered: Vec<_> = idx.iter().map(|e| fmt_monomial(e, "x")).collect();
        assert_eq!(rendered, ["x1^2", "x1*x2", "x2^2", "x1", "x2", ""]);

        let p = MultiPoly::from_terms(
            2,
            [
                (MultiIndex::new(vec![0, 0]), int(3)),
                (MultiIndex::new(vec![2, 1]), int(1)),
                (MultiIndex::new(vec![0, 1]), rat(-1, 2)),
            ],
        )
        .unwrap();
        assert_eq!(p.to_string(), "x1^2*x2 - 1/2*x2 + 3");
        assert_eq!(MultiPoly::zero(2).to_string(), "0");
        assert_eq!((-&x(1)).to_string(), "-x1");
    }

    #[test]
    fn from_terms_merges_and_drops_zeros() {
        let e = MultiIndex::new(vec![1, 0]);
        let p = MultiPoly::from_terms(2, [(e.clone(), int(1)), (e.clone(), int(-1))]).unwrap();
        assert!(p.is_zero());
        assert!(MultiPoly::from_terms(2, [(MultiIndex::zero(3), int(1))]).is_err());
    }
}
