//! Differential operators `sum_b u_b d^b` with polynomial coefficients and
//! the three products on them:
//!
//! * `diamond`: operator composition, `u d^a ⋄ v d^b = sum_{g <= a} C(a, g) u d^g(v) d^(a+b-g)`;
//! * `circ` (white): `u d^a ∘ v d^b = u d^a(v) d^b`;
//! * `bullet` (black): `u d^a • v d^b = u v d^(a+b)`.
//!
//! All three are extended bilinearly from generators. The module also builds
//! the subset and partition operators `L_A` and `L_π` used by the partition
//! expansion of a composition of vector fields.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use num_traits::{One, Zero};

use crate::combinatorics::SetPartition;
use crate::error::{Error, Result};
use crate::poly::{fmt_monomial, MultiIndex, MultiPoly};
use crate::rational::Rational;

/// Differential order of an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// The zero operator, which has every order.
    Any,
    /// Every stored `d^b` has `|b| = k`.
    Exactly(usize),
    Mixed,
}

/// `sum_b u_b d^b` in `n` variables. Canonical: no zero coefficient is stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiffOp {
    n: usize,
    terms: BTreeMap<MultiIndex, MultiPoly>,
}

fn check_n(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::VariableCountMismatch { left, right })
    }
}

impl DiffOp {
    pub fn zero(n: usize) -> Self {
        DiffOp {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// The identity operator `1 * d^0`.
    pub fn unit(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVariables);
        }
        Ok(Self::generator(MultiPoly::one(n), MultiIndex::zero(n)))
    }

    /// A single generator `u d^b`.
    pub fn generator(u: MultiPoly, b: MultiIndex) -> Self {
        assert_eq!(u.n(), b.len(), "coefficient and derivative index disagree on n");
        let mut op = DiffOp::zero(u.n());
        op.add_term(b, u);
        op
    }

    /// `d_i`, 1-based.
    pub fn partial(n: usize, i: usize) -> Self {
        Self::generator(MultiPoly::one(n), MultiIndex::unit(n, i - 1))
    }

    /// The vector field `sum_j u_j d_j`.
    pub fn vector_field(coeffs: Vec<MultiPoly>) -> Result<Self> {
        let n = coeffs.len();
        if n == 0 {
            return Err(Error::NoVariables);
        }
        let mut op = DiffOp::zero(n);
        for (j, u) in coeffs.into_iter().enumerate() {
            check_n(n, u.n())?;
            op.add_term(MultiIndex::unit(n, j), u);
        }
        Ok(op)
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, MultiPoly)>,
    {
        let mut op = DiffOp::zero(n);
        for (b, u) in terms {
            if b.len() != n {
                return Err(Error::IndexLength {
                    expected: n,
                    got: b.len(),
                });
            }
            check_n(n, u.n())?;
            op.add_term(b, u);
        }
        Ok(op)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: &MultiIndex) -> MultiPoly {
        self.terms
            .get(b)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(self.n))
    }

    pub fn order(&self) -> Order {
        let mut orders = self.terms.keys().map(MultiIndex::total);
        match orders.next() {
            None => Order::Any,
            Some(k) if orders.all(|o| o == k) => Order::Exactly(k),
            Some(_) => Order::Mixed,
        }
    }

    pub fn has_order(&self, k: usize) -> bool {
        matches!(self.order(), Order::Any) || self.order() == Order::Exactly(k)
    }

    /// True for vector fields, and vacuously for the zero operator.
    pub fn is_first_order(&self) -> bool {
        self.has_order(1)
    }

    /// Largest `|b|` present.
    pub fn max_order(&self) -> Option<usize> {
        self.terms.keys().map(MultiIndex::total).max()
    }

    fn add_term(&mut self, b: MultiIndex, u: MultiPoly) {
        if u.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(u);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &u;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn try_add(&self, other: &DiffOp) -> Result<DiffOp> {
        check_n(self.n, other.n)?;
        let mut out = self.clone();
        for (b, u) in &other.terms {
            out.add_term(b.clone(), u.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &DiffOp) -> Result<DiffOp> {
        check_n(self.n, other.n)?;
        let mut out = self.clone();
        for (b, u) in &other.terms {
            out.add_term(b.clone(), -u);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> DiffOp {
        if c.is_zero() {
            return DiffOp::zero(self.n);
        }
        DiffOp {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(b, u)| (b.clone(), u.scale(c)))
                .collect(),
        }
    }

    /// Composition `X ⋄ Y`: the operator `p -> X(Y(p))`.
    pub fn diamond(&self, other: &DiffOp) -> Result<DiffOp> {
        check_n(self.n, other.n)?;
        let mut out = DiffOp::zero(self.n);
        for (alpha, u) in &self.terms {
            let gammas = alpha.sub_indices();
            for (beta, v) in &other.terms {
                let ab = alpha.plus(beta);
                for gamma in &gammas {
                    let dv = v.partial(gamma)?;
                    if dv.is_zero() {
                        continue;
                    }
                    let coeff = (u * &dv).scale(&alpha.binomial(gamma));
                    let index = ab.minus(gamma).expect("gamma <= alpha <= alpha + beta");
                    out.add_term(index, coeff);
                }
            }
        }
        Ok(out)
    }

    /// White product `X ∘ Y`: `X` acts on the coefficients of `Y` only.
    pub fn circ(&self, other: &DiffOp) -> Result<DiffOp> {
        check_n(self.n, other.n)?;
        let mut out = DiffOp::zero(self.n);
        for (beta, v) in &other.terms {
            out.add_term(beta.clone(), self.apply(v)?);
        }
        Ok(out)
    }

    /// Black product `X • Y`: multiply coefficients, add derivative indices.
    pub fn bullet(&self, other: &DiffOp) -> Result<DiffOp> {
        check_n(self.n, other.n)?;
        let mut out = DiffOp::zero(self.n);
        for (alpha, u) in &self.terms {
            for (beta, v) in &other.terms {
                out.add_term(alpha.plus(beta), u * v);
            }
        }
        Ok(out)
    }

    /// `sum_b u_b d^b(p)`.
    pub fn apply(&self, p: &MultiPoly) -> Result<MultiPoly> {
        check_n(self.n, p.n())?;
        let mut out = MultiPoly::zero(self.n);
        for (beta, u) in &self.terms {
            let dp = p.partial(beta)?;
            if !dp.is_zero() {
                out = &out + &(u * &dp);
            }
        }
        Ok(out)
    }

    /// `L ⋄ ... ⋄ L` with `m` factors; the unit operator for `m = 0`.
    pub fn power_diamond(&self, m: usize) -> Result<DiffOp> {
        let mut acc = DiffOp::unit(self.n)?;
        for _ in 0..m {
            acc = self.diamond(&acc)?;
        }
        Ok(acc)
    }

    /// Left-nested white power `(...(L ∘ L) ...) ∘ L`, `m >= 1` factors.
    pub fn power_circ(&self, m: usize) -> Result<DiffOp> {
        assert!(m >= 1, "white power needs at least one factor");
        let mut acc = self.clone();
        for _ in 1..m {
            acc = acc.circ(self)?;
        }
        Ok(acc)
    }

    /// Black power `L • ... • L`; the unit operator for `m = 0`.
    pub fn power_bullet(&self, m: usize) -> Result<DiffOp> {
        let mut acc = DiffOp::unit(self.n)?;
        for _ in 0..m {
            acc = acc.bullet(self)?;
        }
        Ok(acc)
    }
}

impl Add for &DiffOp {
    type Output = DiffOp;
    /// Panics on a variable-count mismatch; see [`DiffOp::try_add`].
    fn add(self, rhs: &DiffOp) -> DiffOp {
        self.try_add(rhs).expect("operator addition")
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        self.try_sub(rhs).expect("operator subtraction")
    }
}

/// Terms by descending derivative index (graded-lex), e.g. `x1^2*d1^2 + x1*d1`.
/// Multi-term coefficients are parenthesized: `(x1 + 1)*d2`.
impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (beta, u) in self.terms.iter().rev() {
            let d = fmt_monomial(beta, "d");
            if u.is_single_term() {
                let (e, c) = u.terms().next().expect("single term");
                let body = [fmt_monomial(e, "x"), d]
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .collect::<Vec<_>>()
                    .join("*");
                let negative = c < &Rational::zero();
                let mag = if negative { -c.clone() } else { c.clone() };
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
            } else {
                if !first {
                    write!(f, " + ")?;
                }
                if d.is_empty() {
                    write!(f, "({u})")?;
                } else {
                    write!(f, "({u})*{d}")?;
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// Ordered first-order operators `L_1, ..., L_m` sharing one variable count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpList {
    n: usize,
    ops: Vec<DiffOp>,
}

impl OpList {
    pub fn new(ops: Vec<DiffOp>) -> Result<Self> {
        let n = ops.first().map(DiffOp::n).ok_or(Error::EmptySubset)?;
        for op in &ops {
            check_n(n, op.n())?;
            if !op.is_first_order() {
                return Err(Error::NotFirstOrder);
            }
        }
        Ok(OpList { n, ops })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// `L_i`, 1-based.
    pub fn get(&self, i: usize) -> &DiffOp {
        &self.ops[i - 1]
    }

    pub fn ops(&self) -> &[DiffOp] {
        &self.ops
    }

    /// Validates a 1-based subset of `[m]` and returns it sorted ascending.
    fn sorted_subset(&self, subset: &[usize]) -> Result<Vec<usize>> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        for (k, &i) in sorted.iter().enumerate() {
            if i == 0 || i > self.len() || (k > 0 && sorted[k - 1] == i) {
                return Err(Error::BadSubset {
                    element: i,
                    m: self.len(),
                });
            }
        }
        Ok(sorted)
    }

    /// `L_{i_s} ⋄ ... ⋄ L_{i_1}` for `A = {i_1 < ... < i_s}`.
    pub fn diamond_chain(&self, subset: &[usize]) -> Result<DiffOp> {
        let sorted = self.sorted_subset(subset)?;
        let mut acc = self.get(sorted[0]).clone();
        for &i in &sorted[1..] {
            acc = self.get(i).diamond(&acc)?;
        }
        Ok(acc)
    }

    /// `L_A = (L_{i_s} ⋄ ... ⋄ L_{i_2}) ∘ L_{i_1}`, where `i_1 = min A`.
    /// For a singleton the chain is empty and `L_A = L_{i_1}`.
    pub fn l_subset(&self, subset: &[usize]) -> Result<DiffOp> {
        let sorted = self.sorted_subset(subset)?;
        let head = self.get(sorted[0]);
        if sorted.len() == 1 {
            return DiffOp::unit(self.n)?.circ(head);
        }
        self.diamond_chain(&sorted[1..])?.circ(head)
    }

    /// `L_π = L_{A_1} • ... • L_{A_k}` over the blocks of `π`.
    pub fn l_partition(&self, partition: &SetPartition) -> Result<DiffOp> {
        if partition.m() != self.len() {
            return Err(Error::NotAPartition {
                m: self.len(),
                reason: format!("partition is of [{}]", partition.m()),
            });
        }
        let mut acc = DiffOp::unit(self.n)?;
        for block in partition.blocks() {
            acc = acc.bullet(&self.l_subset(block)?)?;
        }
        Ok(acc)
    }

    /// `L_m ⋄ ... ⋄ L_1`.
    pub fn compose_all(&self) -> Result<DiffOp> {
        let all: Vec<usize> = (1..=self.len()).collect();
        self.diamond_chain(&all)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn x(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    /// `x d` in one variable.
    fn xd() -> DiffOp {
        DiffOp::generator(x(1, 1), MultiIndex::new(vec![1]))
    }

    fn xk_dk(k: u32, c: i64) -> DiffOp {
        DiffOp::generator(
            MultiPoly::monomial(MultiIndex::new(vec![k]), int(c)),
            MultiIndex::new(vec![k]),
        )
    }

    fn x1d1() -> DiffOp {
        DiffOp::generator(x(2, 1), MultiIndex::new(vec![1, 0]))
    }

    #[test]
    fn unit_identities() {
        let u = DiffOp::unit(2).unwrap();
        let a = x1d1();
        assert_eq!(u.diamond(&a).unwrap(), a);
        assert_eq!(a.diamond(&u).unwrap(), a);
        assert_eq!(u.circ(&a).unwrap(), a);
        assert!(a.circ(&u).unwrap().is_zero());
        assert_eq!(u.bullet(&a).unwrap(), a);
        assert_eq!(DiffOp::unit(0), Err(Error::NoVariables));
    }

    #[test]
    fn diamond_by_hand() {
        // d1 ⋄ x1 d1 = d1 + x1 d1^2
        let d1 = DiffOp::partial(2, 1);
        let lhs = d1.diamond(&x1d1()).unwrap();
        let expected = &d1
            + &DiffOp::generator(x(2, 1), MultiIndex::new(vec![2, 0]));
        assert_eq!(lhs, expected);
        // semantic cross-check on a few monomials
        for e in MultiIndex::up_to_degree(2, 3) {
            let p = MultiPoly::monomial(e, int(1));
            let composed = d1.apply(&x1d1().apply(&p).unwrap()).unwrap();
            assert_eq!(lhs.apply(&p).unwrap(), composed);
        }
    }

    #[test]
    fn circ_examples() {
        assert_eq!(x1d1().circ(&x1d1()).unwrap(), x1d1());
        let x2d2 = DiffOp::generator(x(2, 2), MultiIndex::new(vec![0, 1]));
        assert!(DiffOp::partial(2, 1).circ(&x2d2).unwrap().is_zero());
    }

    #[test]
    fn bullet_examples() {
        let sq = x1d1().bullet(&x1d1()).unwrap();
        let expected = DiffOp::generator(
            MultiPoly::monomial(MultiIndex::new(vec![2, 0]), int(1)),
            MultiIndex::new(vec![2, 0]),
        );
        assert_eq!(sq, expected);
        assert_eq!(sq.to_string(), "x1^2*d1^2");
    }

    #[test]
    fn first_order_splitting() {
        let y = &DiffOp::generator(x(2, 2), MultiIndex::new(vec![2, 0]))
            + &DiffOp::partial(2, 2);
        let a = x1d1();
        let split = &a.circ(&y).unwrap() + &a.bullet(&y).unwrap();
        assert_eq!(a.diamond(&y).unwrap(), split);
    }

    #[test]
    fn apply_examples() {
        let x1sq = &x(2, 1) * &x(2, 1);
        assert_eq!(x1d1().apply(&x1sq).unwrap(), x1sq.scale(&int(2)));
        assert_eq!(DiffOp::unit(2).unwrap().apply(&x1sq).unwrap(), x1sq);
        assert!(x1d1().apply(&x(1, 1)).is_err());
    }

    #[test]
    fn mismatched_operators() {
        let a = xd();
        let b = x1d1();
        assert!(a.diamond(&b).is_err());
        assert!(a.circ(&b).is_err());
        assert!(a.bullet(&b).is_err());
    }

    #[test]
    fn powers_of_euler_operator() {
        let l = xd();
        assert_eq!(l.power_diamond(0).unwrap(), DiffOp::unit(1).unwrap());
        assert_eq!(l.power_diamond(2).unwrap(), &xd() + &xk_dk(2, 1));
        // S(4, k) = 1, 7, 6, 1
        let expected = [(1, 1), (2, 7), (3, 6), (4, 1)]
            .iter()
            .fold(DiffOp::zero(1), |acc, &(k, s)| &acc + &xk_dk(k, s));
        assert_eq!(l.power_diamond(4).unwrap(), expected);
        assert_eq!(l.power_diamond(4).unwrap().to_string(), "x1^4*d1^4 + 6*x1^3*d1^3 + 7*x1^2*d1^2 + x1*d1");
    }

    #[test]
    fn order_predicate() {
        assert_eq!(DiffOp::zero(2).order(), Order::Any);
        assert!(DiffOp::zero(2).is_first_order());
        assert_eq!(x1d1().order(), Order::Exactly(1));
        let mixed = &x1d1() + &DiffOp::unit(2).unwrap();
        assert_eq!(mixed.order(), Order::Mixed);
        assert!(!mixed.is_first_order());
    }

    fn three_fields() -> OpList {
        let l1 = DiffOp::vector_field(vec![&x(2, 1) * &x(2, 2), x(2, 1)]).unwrap();
        let l2 = DiffOp::vector_field(vec![x(2, 2), MultiPoly::constant(2, int(2))]).unwrap();
        let l3 = DiffOp::vector_field(vec![&x(2, 1) * &x(2, 1), &x(2, 2) - &x(2, 1)]).unwrap();
        OpList::new(vec![l1, l2, l3]).unwrap()
    }

    #[test]
    fn chains_and_subsets() {
        let ops = three_fields();
        let (l1, l2, l3) = (ops.get(1), ops.get(2), ops.get(3));
        assert_eq!(&ops.diamond_chain(&[2]).unwrap(), l2);
        assert_eq!(ops.diamond_chain(&[2, 1]).unwrap(), l2.diamond(l1).unwrap());
        assert_eq!(&ops.l_subset(&[3]).unwrap(), l3);
        assert_eq!(ops.l_subset(&[1, 2]).unwrap(), l2.circ(l1).unwrap());
        assert_eq!(
            ops.l_subset(&[1, 2, 3]).unwrap(),
            l3.diamond(l2).unwrap().circ(l1).unwrap()
        );
        assert_eq!(ops.diamond_chain(&[]), Err(Error::EmptySubset));
        assert_eq!(ops.l_subset(&[]), Err(Error::EmptySubset));
        assert!(ops.l_subset(&[4]).is_err());
        assert!(ops.l_subset(&[1, 1]).is_err());
    }

    #[test]
    fn chain_of_euler_operators() {
        let ops = OpList::new(vec![xd(), xd(), xd()]).unwrap();
        let expected = [(1, 1), (2, 3), (3, 1)]
            .iter()
            .fold(DiffOp::zero(1), |acc, &(k, s)| &acc + &xk_dk(k, s));
        assert_eq!(ops.diamond_chain(&[1, 2, 3]).unwrap(), expected);
    }

    #[test]
    fn partition_operators() {
        let ops = three_fields();
        let (l1, l2, l3) = (ops.get(1), ops.get(2), ops.get(3));
        let singles = SetPartition::from_blocks(3, vec![vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(
            ops.l_partition(&singles).unwrap(),
            l3.bullet(l2).unwrap().bullet(l1).unwrap()
        );
        let p13 = SetPartition::from_blocks(3, vec![vec![1, 3], vec![2]]).unwrap();
        assert_eq!(
            ops.l_partition(&p13).unwrap(),
            l2.bullet(&l3.circ(l1).unwrap()).unwrap()
        );
        let whole = SetPartition::from_blocks(3, vec![vec![1, 2, 3]]).unwrap();
        assert_eq!(
            ops.l_partition(&whole).unwrap(),
            l3.diamond(l2).unwrap().circ(l1).unwrap()
        );
        let wrong = SetPartition::from_blocks(2, vec![vec![1, 2]]).unwrap();
        assert!(ops.l_partition(&wrong).is_err());
    }

    #[test]
    fn oplist_rejects_higher_order() {
        let bad = DiffOp::generator(x(2, 1), MultiIndex::new(vec![2, 0]));
        assert_eq!(OpList::new(vec![x1d1(), bad]), Err(Error::NotFirstOrder));
        assert!(OpList::new(vec![x1d1(), xd()]).is_err());
    }

    #[test]
    fn rendering() {
        let op = DiffOp::vector_field(vec![&x(2, 1) + &MultiPoly::one(2), x(2, 2).scale(&int(-3))])
            .unwrap();
        assert_eq!(op.to_string(), "(x1 + 1)*d1 - 3*x2*d2");
        assert_eq!(DiffOp::unit(2).unwrap().to_string(), "1");
        assert_eq!(DiffOp::zero(2).to_string(), "0");
    }
}
