//! Set partitions, integer partitions, complete Bell polynomials and Stirling
//! numbers of the second kind.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::poly::{MultiIndex, MultiPoly};
use crate::rational::{factorial, from_biguint};

/// Largest ground set [`set_partitions`] will enumerate (B(12) = 4,213,597).
pub const SET_PARTITION_CAP: usize = 12;

/// A partition of `{1, ..., m}` into non-empty blocks.
///
/// Canonical form: every block sorted ascending, blocks sorted by their
/// minimum element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    m: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn from_blocks(m: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let fail = |reason: String| Error::NotAPartition { m, reason };
        let mut seen = vec![false; m + 1];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(fail("empty block".into()));
            }
            block.sort_unstable();
            for &e in block.iter() {
                if e == 0 || e > m {
                    return Err(fail(format!("element {e} out of range")));
                }
                if seen[e] {
                    return Err(fail(format!("element {e} appears twice")));
                }
                seen[e] = true;
            }
        }
        if let Some(missing) = (1..=m).find(|&e| !seen[e]) {
            return Err(fail(format!("element {missing} is not covered")));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { m, blocks })
    }

    /// From a restricted growth string: `labels[i]` is the block of element `i + 1`.
    pub fn from_rgs(labels: &[usize]) -> Self {
        let count = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
        let mut blocks = vec![Vec::new(); count];
        for (i, &l) in labels.iter().enumerate() {
            blocks[l].push(i + 1);
        }
        SetPartition {
            m: labels.len(),
            blocks,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block-size signature as an integer partition of `m`.
    pub fn signature(&self) -> IntPartition {
        let mut mult = vec![0; self.m];
        for block in &self.blocks {
            mult[block.len() - 1] += 1;
        }
        IntPartition {
            multiplicities: mult,
        }
    }
}

/// Dash notation: `13-2`. Elements are comma-separated once `m >= 10`.
impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.m >= 10 { "," } else { "" };
        let rendered: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(sep)
            })
            .collect();
        write!(f, "{}", rendered.join("-"))
    }
}

/// All partitions of `[m]`, in lexicographic order of their restricted
/// growth strings.
pub fn set_partitions(m: usize) -> Result<Vec<SetPartition>> {
    if m > SET_PARTITION_CAP {
        return Err(Error::CapExceeded {
            m,
            cap: SET_PARTITION_CAP,
        });
    }
    let mut out = Vec::new();
    let mut labels = vec![0usize; m];
    // maxes[i] = max(labels[0..=i])
    let mut maxes = vec![0usize; m];
    loop {
        out.push(SetPartition::from_rgs(&labels));
        // rightmost position that can still grow
        let Some(i) = (1..m).rev().find(|&i| labels[i] <= maxes[i - 1]) else {
            break;
        };
        labels[i] += 1;
        maxes[i] = maxes[i - 1].max(labels[i]);
        for j in i + 1..m {
            labels[j] = 0;
            maxes[j] = maxes[i];
        }
    }
    Ok(out)
}

/// An integer partition `1^{l_1} 2^{l_2} ... m^{l_m}` in multiplicity form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPartition {
    multiplicities: Vec<usize>,
}

impl IntPartition {
    /// `multiplicities[i - 1] = l_i`. Trailing entries may be omitted.
    pub fn new(m: usize, multiplicities: &[usize]) -> Result<Self> {
        let sum: usize = multiplicities
            .iter()
            .enumerate()
            .map(|(i, &l)| (i + 1) * l)
            .sum();
        if sum != m {
            return Err(Error::InconsistentMultiplicities { m, sum });
        }
        let mut mult = multiplicities.to_vec();
        mult.resize(m, 0);
        Ok(IntPartition {
            multiplicities: mult,
        })
    }

    pub fn m(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// `l_i` for 1-based part size `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.multiplicities.get(i - 1).copied().unwrap_or(0)
    }

    /// Number of parts.
    pub fn length(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// `k = m! / (prod_i l_i! (i!)^{l_i})`, the number of set partitions of
    /// `[m]` with this block-size signature.
    pub fn count_coeff(&self) -> BigUint {
        let mut denom = BigUint::one();
        for (i, &l) in self.multiplicities.iter().enumerate() {
            denom *= factorial(l) * factorial(i + 1).pow(l as u32);
        }
        factorial(self.m()) / denom
    }
}

/// Multiplicity form, e.g. `1^2 2^1`.
impl fmt::Display for IntPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .multiplicities
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 0)
            .map(|(i, &l)| format!("{}^{l}", i + 1))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Checked form of [`IntPartition::count_coeff`].
pub fn partition_count_coeff(m: usize, multiplicities: &[usize]) -> Result<BigUint> {
    Ok(IntPartition::new(m, multiplicities)?.count_coeff())
}

/// All partitions of `m` in multiplicity form, with the most 1-parts first.
pub fn integer_partitions(m: usize) -> Vec<IntPartition> {
    fn go(part: usize, remaining: usize, m: usize, acc: &mut Vec<usize>, out: &mut Vec<IntPartition>) {
        if remaining == 0 {
            let mut mult = acc.clone();
            mult.resize(m, 0);
            out.push(IntPartition {
                multiplicities: mult,
            });
            return;
        }
        if part > remaining {
            return;
        }
        for l in (0..=remaining / part).rev() {
            acc.push(l);
            go(part + 1, remaining - l * part, m, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(1, m, m, &mut Vec::new(), &mut out);
    out
}

/// Complete Bell polynomial `Y_m = sum_{λ ⊢ m} k_λ x_1^{l_1} ... x_m^{l_m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellPoly {
    m: usize,
    terms: BTreeMap<IntPartition, BigUint>,
}

impl BellPoly {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IntPartition, &BigUint)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, lambda: &IntPartition) -> BigUint {
        self.terms.get(lambda).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn coefficient_sum(&self) -> BigUint {
        self.terms.values().sum()
    }

    /// As a polynomial in `x_1, ..., x_m` (one variable when `m = 0`).
    pub fn to_multipoly(&self) -> MultiPoly {
        let n = self.m.max(1);
        let terms = self.terms.iter().map(|(lambda, k)| {
            let mut e: Vec<u32> = lambda.multiplicities().iter().map(|&l| l as u32).collect();
            e.resize(n, 0);
            (MultiIndex::new(e), from_biguint(k))
        });
        MultiPoly::from_terms(n, terms).expect("exponent vectors have length n")
    }

    /// `Y_m(x, x, ..., x)` as a univariate polynomial.
    pub fn diagonal(&self) -> MultiPoly {
        let terms = self.terms.iter().map(|(lambda, k)| {
            (MultiIndex::new(vec![lambda.length() as u32]), from_biguint(k))
        });
        MultiPoly::from_terms(1, terms).expect("univariate")
    }
}

impl fmt::Display for BellPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_multipoly())
    }
}

pub fn bell_polynomial(m: usize) -> BellPoly {
    let terms = integer_partitions(m)
        .into_iter()
        .map(|lambda| {
            let k = lambda.count_coeff();
            (lambda, k)
        })
        .collect();
    BellPoly { m, terms }
}

/// `Y_m` evaluated under the black product at `x_i = L^{i-1} ∘ L`.
pub fn bell_eval_bullet(m: usize, l: &DiffOp) -> Result<DiffOp> {
    if !l.is_first_order() {
        return Err(Error::NotFirstOrder);
    }
    // args[i - 1] = L^{i-1} ∘ L
    let args = (1..=m)
        .map(|i| l.power_diamond(i - 1)?.circ(l))
        .collect::<Result<Vec<_>>>()?;
    let mut total = DiffOp::zero(l.n());
    for (lambda, k) in bell_polynomial(m).terms() {
        let mut product = DiffOp::unit(l.n())?;
        for (i, arg) in args.iter().enumerate() {
            product = product.bullet(&arg.power_bullet(lambda.multiplicity(i + 1))?)?;
        }
        total = total.try_add(&product.scale(&from_biguint(k)))?;
    }
    Ok(total)
}

/// Stirling numbers of the second kind `S(m, 0..=m)` via
/// `S(m, k) = k S(m-1, k) + S(m-1, k-1)`.
pub fn stirling2_row(m: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for r in 1..=m {
        let mut next = vec![BigUint::zero(); r + 1];
        for k in 1..=r {
            let keep = if k < r { &row[k] * BigUint::from(k) } else { BigUint::zero() };
            next[k] = keep + &row[k - 1];
        }
        row = next;
    }
    row
}

/// `S(m, k)`; zero outside `0 <= k <= m`.
pub fn stirling2(m: usize, k: usize) -> BigUint {
    if k > m {
        return BigUint::zero();
    }
    stirling2_row(m).swap_remove(k)
}

/// Bell number `B(m) = sum_k S(m, k)`.
pub fn bell_number(m: usize) -> BigUint {
    stirling2_row(m).into_iter().sum()
}
