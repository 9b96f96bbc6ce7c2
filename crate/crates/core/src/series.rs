//! Truncated exponential generating functions `sum_{m <= N} b_m x^m / m!`
//! over [`Rational`], and four routes to the compositional inverse.
//!
//! Every series carries its valid order `N` explicitly. Binary operations
//! return the smaller of the two orders, `derivative` loses one order, and
//! nothing is ever zero-padded to fake a higher order.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{binomial_row, factorial, format_rational, from_biguint, parse_rational, Rational};

/// `coeffs[m]` is the coefficient of `x^m / m!`; `order = coeffs.len() - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EgfSeries {
    coeffs: Vec<Rational>,
}

impl EgfSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least its constant term");
        EgfSeries { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        EgfSeries::new((0..=order).map(f).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::from_fn(order, |_| Rational::zero())
    }

    pub fn constant(order: usize, c: Rational) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The identity function `x`.
    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |m| if m == 1 { Rational::one() } else { Rational::zero() })
    }

    /// `e^x`: every EGF coefficient is 1.
    pub fn exp_x(order: usize) -> Self {
        Self::from_fn(order, |_| Rational::one())
    }

    /// Converts ordinary coefficients (of `x^m`) to EGF coefficients.
    pub fn from_ogf(coeffs: &[Rational]) -> Self {
        EgfSeries::new(
            coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| c * from_biguint(&factorial(m)))
                .collect(),
        )
    }

    pub fn to_ogf(&self) -> Vec<Rational> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| c / from_biguint(&factorial(m)))
            .collect()
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> &Rational {
        &self.coeffs[m]
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    /// Keeps coefficients `0..=order`; panics if `order` exceeds the valid order.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a series by truncation");
        EgfSeries::new(self.coeffs[..=order].to_vec())
    }

    /// Equality of the coefficients both series know.
    pub fn agrees_with(&self, other: &EgfSeries) -> bool {
        let n = self.order().min(other.order());
        self.coeffs[..=n] == other.coeffs[..=n]
    }

    pub fn add(&self, other: &EgfSeries) -> EgfSeries {
        let n = self.order().min(other.order());
        Self::from_fn(n, |m| &self.coeffs[m] + &other.coeffs[m])
    }

    pub fn sub(&self, other: &EgfSeries) -> EgfSeries {
        let n = self.order().min(other.order());
        Self::from_fn(n, |m| &self.coeffs[m] - &other.coeffs[m])
    }

    pub fn scale(&self, c: &Rational) -> EgfSeries {
        EgfSeries::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Binomial convolution `(fg)_m = sum_k C(m, k) f_k g_{m-k}`.
    pub fn mul(&self, other: &EgfSeries) -> EgfSeries {
        let n = self.order().min(other.order());
        Self::from_fn(n, |m| {
            let row = binomial_row(m);
            (0..=m)
                .filter(|&k| !self.coeffs[k].is_zero() && !other.coeffs[m - k].is_zero())
                .map(|k| &row[k] * &self.coeffs[k] * &other.coeffs[m - k])
                .sum()
        })
    }

    pub fn pow(&self, k: usize) -> EgfSeries {
        (0..k).fold(EgfSeries::constant(self.order(), Rational::one()), |acc, _| acc.mul(self))
    }

    /// `f'`: shifts coefficients down, losing one order.
    pub fn derivative(&self) -> Result<EgfSeries> {
        if self.order() == 0 {
            return Err(Error::InsufficientOrder { need: 1, have: 0 });
        }
        Ok(EgfSeries::new(self.coeffs[1..].to_vec()))
    }

    /// `f / x` for `f` with zero constant term: `(f/x)_m = f_{m+1} / (m + 1)`.
    pub fn divide_by_x(&self) -> Result<EgfSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::ConstantTerm { expected: "zero" });
        }
        if self.order() == 0 {
            return Err(Error::InsufficientOrder { need: 1, have: 0 });
        }
        Ok(Self::from_fn(self.order() - 1, |m| {
            &self.coeffs[m + 1] / Rational::from_integer((m as i64 + 1).into())
        }))
    }

    /// `1/f` to the same order, by solving `f g = 1` term by term.
    pub fn reciprocal(&self) -> Result<EgfSeries> {
        let f0 = &self.coeffs[0];
        if f0.is_zero() {
            return Err(Error::ConstantTerm { expected: "nonzero" });
        }
        let inv0 = f0.recip();
        let mut g: Vec<Rational> = vec![inv0.clone()];
        for m in 1..=self.order() {
            let row = binomial_row(m);
            let s: Rational = (1..=m)
                .filter(|&k| !self.coeffs[k].is_zero())
                .map(|k| &row[k] * &self.coeffs[k] * &g[m - k])
                .sum();
            g.push(-s * &inv0);
        }
        Ok(EgfSeries::new(g))
    }

    /// `f(g(x))` for `g` with zero constant term, by Horner's rule.
    pub fn compose(&self, inner: &EgfSeries) -> Result<EgfSeries> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::ConstantTerm { expected: "zero" });
        }
        let n = self.order().min(inner.order());
        let g = inner.truncate(n);
        // f(g) = sum_k f_k g^k / k!
        let mut acc = EgfSeries::zero(n);
        for k in (0..=n).rev() {
            acc = acc.mul(&g);
            acc.coeffs[0] += &self.coeffs[k] / from_biguint(&factorial(k));
        }
        Ok(acc)
    }

    /// `exp(f)` for `f_0 = 0`, from `g' = f' g`, `g_0 = 1`.
    pub fn exp(&self) -> Result<EgfSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::ConstantTerm { expected: "zero" });
        }
        let mut g = vec![Rational::one()];
        for m in 0..self.order() {
            let row = binomial_row(m);
            let next: Rational = (0..=m)
                .filter(|&k| !self.coeffs[k + 1].is_zero())
                .map(|k| &row[k] * &self.coeffs[k + 1] * &g[m - k])
                .sum();
            g.push(next);
        }
        Ok(EgfSeries::new(g))
    }

    /// `ln(f)` for `f_0 = 1`, from `f g' = f'`, `g_0 = 0`.
    pub fn ln(&self) -> Result<EgfSeries> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTerm { expected: "one" });
        }
        // dg[m] is the m-th coefficient of g'
        let mut dg: Vec<Rational> = Vec::with_capacity(self.order());
        for m in 0..self.order() {
            let row = binomial_row(m);
            let s: Rational = (1..=m)
                .filter(|&k| !self.coeffs[k].is_zero())
                .map(|k| &row[k] * &self.coeffs[k] * &dg[m - k])
                .sum();
            dg.push(&self.coeffs[m + 1] - s);
        }
        let mut g = vec![Rational::zero()];
        g.extend(dg);
        Ok(EgfSeries::new(g))
    }

    pub fn to_json(&self, convention: Convention) -> SeriesJson {
        let coeffs = match convention {
            Convention::Egf => self.coeffs.clone(),
            Convention::Ogf => self.to_ogf(),
        };
        SeriesJson {
            convention,
            order: self.order(),
            coeffs: coeffs.iter().map(format_rational).collect(),
        }
    }

    pub fn from_json(json: &SeriesJson) -> Result<EgfSeries> {
        if json.coeffs.len() != json.order + 1 {
            return Err(Error::Parse {
                what: "series (order does not match coefficient count)",
                input: format!("order {} with {} coefficients", json.order, json.coeffs.len()),
            });
        }
        let raw = json
            .coeffs
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(match json.convention {
            Convention::Egf => EgfSeries::new(raw),
            Convention::Ogf => EgfSeries::from_ogf(&raw),
        })
    }

    /// Human-readable form `b1 x + b2 x^2/2! + ...`, zero terms omitted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = match m {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{m}/{m}!"),
            };
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if body.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&body);
            } else {
                out.push_str(&format!("{mag} {body}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        format!("{out} + O(x^{})", self.order() + 1)
    }
}

impl fmt::Display for EgfSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Coefficient convention of a serialized series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Egf,
    Ogf,
}

/// `{ "convention": "egf", "order": N, "coeffs": ["p/q", ...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesJson {
    pub convention: Convention,
    pub order: usize,
    pub coeffs: Vec<String>,
}

/// A series with `f_0 = 0` and `f_1 != 0`, i.e. an element of the
/// composition group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertibleSeries(EgfSeries);

impl InvertibleSeries {
    pub fn new(series: EgfSeries) -> Result<Self> {
        if !series.constant_term().is_zero() {
            return Err(Error::ConstantTerm { expected: "zero" });
        }
        if series.order() < 1 {
            return Err(Error::InsufficientOrder { need: 1, have: 0 });
        }
        if series.coeff(1).is_zero() {
            return Err(Error::ZeroLinearTerm);
        }
        Ok(InvertibleSeries(series))
    }

    pub fn series(&self) -> &EgfSeries {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.order()
    }

    fn require(&self, need: usize) -> Result<()> {
        if self.order() < need {
            Err(Error::InsufficientOrder {
                need,
                have: self.order(),
            })
        } else {
            Ok(())
        }
    }

    /// `1 / f'`, valid to order `f.order - 1`.
    fn reciprocal_derivative(&self) -> EgfSeries {
        self.0
            .derivative()
            .and_then(|d| d.reciprocal())
            .expect("f' has nonzero constant term a1")
    }

    /// One application of `s -> (1/f') s'`.
    fn step(recip_fp: &EgfSeries, s: &EgfSeries) -> Result<EgfSeries> {
        Ok(recip_fp.mul(&s.derivative()?))
    }

    /// Applies `(1/f') d/dx` to `start` `k` times. Each application costs one
    /// order, so the result has order `start.order - k`.
    pub fn operator_iterate(&self, start: &EgfSeries, k: usize) -> Result<EgfSeries> {
        if start.order() < k {
            return Err(Error::InsufficientOrder {
                need: k,
                have: start.order(),
            });
        }
        self.require(start.order())?;
        let recip_fp = self.reciprocal_derivative();
        let mut s = start.clone();
        for _ in 0..k {
            s = Self::step(&recip_fp, &s)?;
        }
        Ok(s)
    }

    /// Constant terms of `start, T start, ..., T^count start` for
    /// `T = (1/f') d/dx`.
    fn iterate_constants(&self, start: &EgfSeries, count: usize) -> Result<Vec<Rational>> {
        let recip_fp = self.reciprocal_derivative();
        let mut s = start.clone();
        let mut out = vec![s.constant_term().clone()];
        for _ in 0..count {
            s = Self::step(&recip_fp, &s)?;
            out.push(s.constant_term().clone());
        }
        Ok(out)
    }

    /// `b_n = d^{n-1}/dx^{n-1} (x / f)^n at 0`.
    pub fn inverse_classical(&self, order: usize) -> Result<EgfSeries> {
        self.require(order + 1)?;
        let x_over_f = self.0.divide_by_x()?.reciprocal()?.truncate(order);
        let mut b = vec![Rational::zero()];
        let mut power = x_over_f.clone();
        for n in 1..=order {
            b.push(power.coeff(n - 1).clone());
            power = power.mul(&x_over_f);
        }
        Ok(EgfSeries::new(b))
    }

    /// `b_n = ((1/f') d/dx)^{n-1} (1/f') at 0`.
    pub fn inverse_via_operator(&self, order: usize) -> Result<EgfSeries> {
        self.require(order + 1)?;
        if order == 0 {
            return Ok(EgfSeries::zero(0));
        }
        let start = self.reciprocal_derivative().truncate(order);
        let mut b = vec![Rational::zero()];
        b.extend(self.iterate_constants(&start, order - 1)?);
        Ok(EgfSeries::new(b))
    }

    /// Log form: `c_m = ((1/f') d/dx)^m (e^x) at 0` for `m = 0..=order`, and
    /// the inverse is `ln(sum c_m x^m / m!)`.
    pub fn inverse_log_form(&self, order: usize) -> Result<LogFormInverse> {
        self.require(order + 1)?;
        let inner = EgfSeries::new(self.iterate_constants(&EgfSeries::exp_x(order), order)?);
        let inverse = inner.ln()?;
        Ok(LogFormInverse { inner, inverse })
    }

    /// Solves `f(g(x)) = x` one coefficient at a time: the coefficient of
    /// `x^n/n!` in `f(g)` is `a_1 g_n` plus terms in `g_1..g_{n-1}` only.
    pub fn inverse_newton(&self, order: usize) -> Result<EgfSeries> {
        self.require(order)?;
        let f = self.0.truncate(order);
        let a1_inv = f.coeff(1).recip();
        let mut g = EgfSeries::zero(order);
        if order == 0 {
            return Ok(g);
        }
        g.coeffs[1] = a1_inv.clone();
        for n in 2..=order {
            let partial = f.truncate(n).compose(&g.truncate(n))?;
            g.coeffs[n] = -partial.coeff(n) * &a1_inv;
        }
        Ok(g)
    }
}

/// Result of the log-form inversion, keeping the inner sequence `c_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogFormInverse {
    pub inner: EgfSeries,
    pub inverse: EgfSeries,
}
