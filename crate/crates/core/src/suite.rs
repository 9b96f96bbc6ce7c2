//! Executable checks of the operator identities and inversion formulas.
//!
//! Each check expands both sides of an identity with the algebra in this
//! crate and compares canonical renderings, so a pass certifies exact
//! equality of the two operators (or series). Failures are reports, not
//! errors; errors are reserved for inputs that violate a precondition.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{bell_eval_bullet, set_partitions, stirling2_row};
use crate::diffop::{DiffOp, OpList};
use crate::error::{Error, Result};
use crate::poly::{MultiIndex, MultiPoly};
use crate::random::{
    random_diffop, random_fields, random_invertible_series, random_vector_field,
    random_vector_field_with, RandomSpec,
};
use crate::rational::{factorial, from_biguint, int, Rational};
use crate::series::{EgfSeries, InvertibleSeries};

/// Outcome of one identity check on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub theorem: String,
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    /// Number of summands assembled on the expanded side, where meaningful.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub summands: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<f64>,
}

impl VerifyReport {
    fn compare(
        theorem: &str,
        instance: String,
        seed: Option<u64>,
        lhs: String,
        rhs: String,
        started: Instant,
    ) -> Self {
        let pass = lhs == rhs;
        VerifyReport {
            theorem: theorem.to_string(),
            instance,
            seed,
            lhs,
            rhs,
            pass,
            summands: None,
            elapsed_ms: Some(started.elapsed().as_secs_f64() * 1e3),
        }
    }

    fn with_summands(mut self, count: usize) -> Self {
        self.summands = Some(count);
        self
    }

    /// Drops the timing so reports from identical inputs compare and
    /// serialize identically.
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = None;
        self
    }
}

/// Named suites runnable through [`run_theorem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    /// Associativity of ⋄ and •, commutativity of •, the ∘-associator,
    /// Leibniz rule and associator symmetry.
    Prop1,
    /// `X∘(Y∘Z) = (X⋄Y)∘Z` and `X⋄Y = X∘Y + X•Y` for first-order `X`.
    Corollary,
    /// `L_m ⋄ ... ⋄ L_1 = sum over set partitions of L_π`.
    Compos,
    /// `L^m = Y_m^•(L, L∘L, ..., L^{m-1}∘L)`.
    BellPower,
    /// The exponential generating function of `L^m` and its logarithm.
    ExpId,
    /// `(x d)^m = sum_k S(m, k) x^k d^k`.
    Stirling,
    /// Agreement of the four inversion algorithms.
    Inversion,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] = [
        TheoremId::Prop1,
        TheoremId::Corollary,
        TheoremId::Compos,
        TheoremId::BellPower,
        TheoremId::ExpId,
        TheoremId::Stirling,
        TheoremId::Inversion,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Prop1 => "prop1",
            TheoremId::Corollary => "corollary",
            TheoremId::Compos => "compos",
            TheoremId::BellPower => "bellpower",
            TheoremId::ExpId => "expid",
            TheoremId::Stirling => "stirling",
            TheoremId::Inversion => "inversion",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Parse {
                what: "theorem id",
                input: s.to_string(),
            })
    }
}

fn require_first_order(ops: &[&DiffOp]) -> Result<()> {
    if ops.iter().all(|op| op.is_first_order()) {
        Ok(())
    } else {
        Err(Error::NotFirstOrder)
    }
}

/// `(X, Y, Z)^∘ = X∘(Y∘Z) - (X∘Y)∘Z`.
pub fn circ_associator(x: &DiffOp, y: &DiffOp, z: &DiffOp) -> Result<DiffOp> {
    x.circ(&y.circ(z)?)?.try_sub(&x.circ(y)?.circ(z)?)
}

/// The first-order preconditions are checked and violations reported as errors.
pub fn check_proposition1(
    x: &DiffOp,
    y: &DiffOp,
    z: &DiffOp,
    vx: &DiffOp,
    vy: &DiffOp,
    seed: Option<u64>,
    instance: &str,
) -> Result<Vec<VerifyReport>> {
    require_first_order(&[vx, vy])?;
    let mut out = Vec::with_capacity(6);

    let t = Instant::now();
    let lhs = x.diamond(&y.diamond(z)?)?;
    let rhs = x.diamond(y)?.diamond(z)?;
    out.push(VerifyReport::compare("prop1.diamond_assoc", instance.into(), seed, lhs.to_string(), rhs.to_string(), t));

    let t = Instant::now();
    let lhs = x.bullet(&y.bullet(z)?)?;
    let rhs = x.bullet(y)?.bullet(z)?;
    out.push(VerifyReport::compare("prop1.bullet_assoc", instance.into(), seed, lhs.to_string(), rhs.to_string(), t));

    let t = Instant::now();
    let lhs = x.bullet(y)?;
    let rhs = y.bullet(x)?;
    out.push(VerifyReport::compare("prop1.bullet_comm", instance.into(), seed, lhs.to_string(), rhs.to_string(), t));

    let t = Instant::now();
    let lhs = circ_associator(vx, y, z)?;
    let rhs = vx.bullet(y)?.circ(z)?;
    out.push(VerifyReport::compare("prop1.associator", instance.into(), seed, lhs.to_string(), rhs.to_string(), t));

    let t = Instant::now();
    let lhs = vx.circ(&y.bullet(z)?)?;
    let rhs = vx.circ(y)?.bullet(z)?.try_add(&y.bullet(&vx.circ(z)?)?)?;
    out.push(VerifyReport::compare("prop1.leibniz", instance.into(), seed, lhs.to_string(), rhs.to_string(), t));

    let t = Instant::now();
    let lhs = circ_associator(vx, vy, z)?;
    let rhs = circ_associator(vy, vx, z)?;
    out.push(VerifyReport::compare("prop1.associator_symmetry", instance.into(), seed, lhs.to_string(), rhs.to_string(), t));

    Ok(out)
}

/// Highest differential order of the mixed-order operators drawn for
/// identities that allow arbitrary orders.
const MIXED_MAX_ORDER: usize = 2;

/// Runs every identity of the three-products proposition on `trials` fresh
/// draws. Trial `t` uses seed `spec.seed + t`.
pub fn verify_proposition1(spec: &RandomSpec, trials: usize) -> Vec<VerifyReport> {
    fan_out(spec, trials, |s| {
        let mut rng = s.rng();
        let x = random_diffop(&mut rng, s, MIXED_MAX_ORDER);
        let y = random_diffop(&mut rng, s, MIXED_MAX_ORDER);
        let z = random_diffop(&mut rng, s, MIXED_MAX_ORDER);
        let vx = random_vector_field_with(&mut rng, s);
        let vy = random_vector_field_with(&mut rng, s);
        check_proposition1(&x, &y, &z, &vx, &vy, Some(s.seed), &s.describe())
            .expect("generated instances satisfy the preconditions")
    })
}

/// Both corollary identities for a first-order `x`.
pub fn check_corollary(
    x: &DiffOp,
    y: &DiffOp,
    z: &DiffOp,
    seed: Option<u64>,
    instance: &str,
) -> Result<Vec<VerifyReport>> {
    require_first_order(&[x])?;
    let t = Instant::now();
    let lhs = x.circ(&y.circ(z)?)?;
    let rhs = x.diamond(y)?.circ(z)?;
    let first = VerifyReport::compare("corollary.right_symmetry", instance.into(), seed, lhs.to_string(), rhs.to_string(), t);

    let t = Instant::now();
    let lhs = x.diamond(y)?;
    let rhs = x.circ(y)?.try_add(&x.bullet(y)?)?;
    let second = VerifyReport::compare("corollary.diamond_split", instance.into(), seed, lhs.to_string(), rhs.to_string(), t);
    Ok(vec![first, second])
}

pub fn verify_corollary(spec: &RandomSpec, trials: usize) -> Vec<VerifyReport> {
    fan_out(spec, trials, |s| {
        let mut rng = s.rng();
        let x = random_vector_field_with(&mut rng, s);
        let y = random_diffop(&mut rng, s, MIXED_MAX_ORDER);
        let z = random_diffop(&mut rng, s, MIXED_MAX_ORDER);
        check_corollary(&x, &y, &z, Some(s.seed), &s.describe())
            .expect("x is a vector field")
    })
}

/// `L_m ⋄ ... ⋄ L_1` against `sum_{π ∈ Π(m)} L_π`. The report records how many
/// partition terms were summed.
pub fn verify_partition_expansion(ops: &OpList, seed: Option<u64>) -> Result<VerifyReport> {
    let t = Instant::now();
    let lhs = ops.compose_all()?;
    let partitions = set_partitions(ops.len())?;
    let mut rhs = DiffOp::zero(ops.n());
    for pi in &partitions {
        rhs = rhs.try_add(&ops.l_partition(pi)?)?;
    }
    let instance = format!("m={} n={}", ops.len(), ops.n());
    Ok(
        VerifyReport::compare("compos", instance, seed, lhs.to_string(), rhs.to_string(), t)
            .with_summands(partitions.len()),
    )
}

/// `L^m` by repeated composition against the Bell polynomial evaluated
/// under the black product.
pub fn verify_bell_power(l: &DiffOp, m: usize, seed: Option<u64>) -> Result<VerifyReport> {
    require_first_order(&[l])?;
    let t = Instant::now();
    let lhs = l.power_diamond(m)?;
    let rhs = bell_eval_bullet(m, l)?;
    Ok(VerifyReport::compare(
        "bellpower",
        format!("m={m} n={}", l.n()),
        seed,
        lhs.to_string(),
        rhs.to_string(),
        t,
    ))
}

/// A truncated power series in `z` whose coefficients are operators:
/// `terms[m]` multiplies `z^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct OpSeries {
    terms: Vec<DiffOp>,
}

impl OpSeries {
    fn zero(n: usize, order: usize) -> Self {
        OpSeries {
            terms: vec![DiffOp::zero(n); order + 1],
        }
    }

    fn one(n: usize, order: usize) -> Result<Self> {
        let mut s = Self::zero(n, order);
        s.terms[0] = DiffOp::unit(n)?;
        Ok(s)
    }

    fn order(&self) -> usize {
        self.terms.len() - 1
    }

    fn add(&self, other: &OpSeries) -> Result<OpSeries> {
        let terms = self
            .terms
            .iter()
            .zip(&other.terms)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_>>()?;
        Ok(OpSeries { terms })
    }

    fn scale(&self, c: &Rational) -> OpSeries {
        OpSeries {
            terms: self.terms.iter().map(|t| t.scale(c)).collect(),
        }
    }

    /// Cauchy product with • on the coefficients.
    fn bullet(&self, other: &OpSeries) -> Result<OpSeries> {
        let n = self.terms[0].n();
        let mut out = OpSeries::zero(n, self.order());
        for (i, a) in self.terms.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.terms.iter().enumerate().take(self.order() + 1 - i) {
                if !b.is_zero() {
                    out.terms[i + j] = out.terms[i + j].try_add(&a.bullet(b)?)?;
                }
            }
        }
        Ok(out)
    }

    fn render(&self) -> String {
        self.terms
            .iter()
            .enumerate()
            .map(|(m, t)| format!("z^{m}: {t}"))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn inv_factorial(k: usize) -> Rational {
    from_biguint(&factorial(k)).recip()
}

/// `exp^•(s) = sum_k s^{•k} / k!` for `s` without constant term.
fn exp_bullet(s: &OpSeries) -> Result<OpSeries> {
    let n = s.terms[0].n();
    let mut total = OpSeries::one(n, s.order())?;
    let mut power = OpSeries::one(n, s.order())?;
    for k in 1..=s.order() {
        power = power.bullet(s)?;
        total = total.add(&power.scale(&inv_factorial(k)))?;
    }
    Ok(total)
}

/// `ln^•(1 + t) = sum_{k>=1} (-1)^{k+1} t^{•k} / k` for `t` without constant term.
fn ln_bullet_one_plus(t: &OpSeries) -> Result<OpSeries> {
    let n = t.terms[0].n();
    let mut total = OpSeries::zero(n, t.order());
    let mut power = OpSeries::one(n, t.order())?;
    for k in 1..=t.order() {
        power = power.bullet(t)?;
        let sign = if k % 2 == 1 { Rational::one() } else { -Rational::one() };
        total = total.add(&power.scale(&(sign / int(k as i64))))?;
    }
    Ok(total)
}

/// Coefficientwise check, up to `z^order`, of
/// `sum_m L^m z^m/m! = exp^•(sum_{m>=1} (L^{m-1}∘L) z^m/m!)` together with
/// the equivalent statement `sum_{m>=1} (L^{m-1}∘L) z^m/m! = ln^•(1 + sum_{m>=1} L^m z^m/m!)`.
pub fn verify_exp_identity(l: &DiffOp, order: usize, seed: Option<u64>) -> Result<VerifyReport> {
    require_first_order(&[l])?;
    let t = Instant::now();
    let n = l.n();
    let mut powers = OpSeries::zero(n, order);
    let mut inner = OpSeries::zero(n, order);
    for m in 0..=order {
        let power = l.power_diamond(m)?;
        powers.terms[m] = power.scale(&inv_factorial(m));
        if m >= 1 {
            inner.terms[m] = l.power_diamond(m - 1)?.circ(l)?.scale(&inv_factorial(m));
        }
    }
    let exp_side = exp_bullet(&inner)?;
    let mut powers_no_const = powers.clone();
    powers_no_const.terms[0] = DiffOp::zero(n);
    let ln_side = ln_bullet_one_plus(&powers_no_const)?;

    let lhs = format!("exp: {} | ln: {}", powers.render(), inner.render());
    let rhs = format!("exp: {} | ln: {}", exp_side.render(), ln_side.render());
    Ok(VerifyReport::compare(
        "expid",
        format!("z-order={order} n={n}"),
        seed,
        lhs,
        rhs,
        t,
    ))
}

/// The exponential identity for `L = x d`, where it reads
/// `sum_m (x d)^m z^m/m! = sum_i x^i d^i (e^z - 1)^i / i!`; the right side is
/// assembled from scalar series in `z`.
pub fn verify_exp_identity_euler(order: usize) -> Result<VerifyReport> {
    let t = Instant::now();
    let xd = euler_operator();
    let mut lhs = OpSeries::zero(1, order);
    for m in 0..=order {
        lhs.terms[m] = xd.power_diamond(m)?.scale(&inv_factorial(m));
    }
    let e_minus_one = EgfSeries::exp_x(order).sub(&EgfSeries::constant(order, Rational::one()));
    let mut rhs = OpSeries::zero(1, order);
    for i in 0..=order {
        let xi_di = xd.power_bullet(i)?;
        let scalar = e_minus_one.pow(i);
        for m in 0..=order {
            // ordinary coefficient of z^m in (e^z - 1)^i / i!
            let c = scalar.coeff(m) * inv_factorial(m) * inv_factorial(i);
            if !c.is_zero() {
                rhs.terms[m] = rhs.terms[m].try_add(&xi_di.scale(&c))?;
            }
        }
    }
    Ok(VerifyReport::compare(
        "expid.euler",
        format!("z-order={order} L=x1*d1"),
        None,
        lhs.render(),
        rhs.render(),
        t,
    ))
}

/// `x d` in one variable.
pub fn euler_operator() -> DiffOp {
    DiffOp::generator(MultiPoly::var(1, 1), MultiIndex::new(vec![1]))
}

/// `(x d)^m` against `sum_k S(m, k) x^k d^k`.
pub fn verify_stirling_power(m: usize) -> Result<VerifyReport> {
    let t = Instant::now();
    let lhs = euler_operator().power_diamond(m)?;
    let mut rhs = DiffOp::zero(1);
    for (k, s) in stirling2_row(m).iter().enumerate() {
        let term = DiffOp::generator(
            MultiPoly::monomial(MultiIndex::new(vec![k as u32]), from_biguint(s)),
            MultiIndex::new(vec![k as u32]),
        );
        rhs = rhs.try_add(&term)?;
    }
    let terms = rhs.terms().count();
    Ok(
        VerifyReport::compare("stirling", format!("m={m}"), None, lhs.to_string(), rhs.to_string(), t)
            .with_summands(terms),
    )
}

/// The four inverses of `f`, in the order classical, operator, log-form,
/// coefficient elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseSet {
    pub classical: EgfSeries,
    pub operator: EgfSeries,
    pub log_form: EgfSeries,
    pub log_inner: EgfSeries,
    pub newton: EgfSeries,
}

impl InverseSet {
    pub fn compute(f: &InvertibleSeries, order: usize) -> Result<Self> {
        let log = f.inverse_log_form(order)?;
        Ok(InverseSet {
            classical: f.inverse_classical(order)?,
            operator: f.inverse_via_operator(order)?,
            log_form: log.inverse,
            log_inner: log.inner,
            newton: f.inverse_newton(order)?,
        })
    }

    pub fn agree(&self) -> bool {
        self.classical == self.operator
            && self.classical == self.log_form
            && self.classical == self.newton
    }
}

/// Runs all four inversion algorithms and checks that they agree and that
/// `f(g(x)) = x` and `g(f(x)) = x` to `order`.
pub fn verify_inversion(f: &InvertibleSeries, order: usize, seed: Option<u64>) -> Result<VerifyReport> {
    let t = Instant::now();
    let set = InverseSet::compute(f, order)?;
    let g = &set.classical;
    let fg = f.series().truncate(order).compose(g)?;
    let gf = g.compose(&f.series().truncate(order))?;
    let x = EgfSeries::identity(order);
    let render = |s: &EgfSeries| {
        s.coeffs()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    };
    let lhs = format!(
        "classical=[{c}] operator=[{c}] log=[{c}] newton=[{c}] f(g)=[{x}] g(f)=[{x}]",
        c = render(g),
        x = render(&x)
    );
    let rhs = format!(
        "classical=[{}] operator=[{}] log=[{}] newton=[{}] f(g)=[{}] g(f)=[{}]",
        render(&set.classical),
        render(&set.operator),
        render(&set.log_form),
        render(&set.newton),
        render(&fg),
        render(&gf)
    );
    Ok(VerifyReport::compare(
        "inversion",
        format!("N={order} input-order={}", f.order()),
        seed,
        lhs,
        rhs,
        t,
    ))
}

/// Maps `trial` over seeds `spec.seed .. spec.seed + trials` in parallel and
/// flattens the reports in seed order, so the output does not depend on
/// scheduling.
pub fn fan_out<F>(spec: &RandomSpec, trials: usize, trial: F) -> Vec<VerifyReport>
where
    F: Fn(&RandomSpec) -> Vec<VerifyReport> + Sync,
{
    let seeds: Vec<u64> = (0..trials as u64).map(|t| spec.seed.wrapping_add(t)).collect();
    seeds
        .par_iter()
        .map(|&seed| trial(&spec.with_seed(seed)))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Dispatches a named suite. `spec.size` is `m` for the operator
/// suites, the `z`-order for `expid` and `N` for `inversion`.
pub fn run_theorem(id: TheoremId, spec: &RandomSpec, trials: usize) -> Result<Vec<VerifyReport>> {
    if spec.n == 0 {
        return Err(Error::NoVariables);
    }
    let size = spec.size;
    Ok(match id {
        TheoremId::Prop1 => verify_proposition1(spec, trials),
        TheoremId::Corollary => verify_corollary(spec, trials),
        TheoremId::Compos => {
            if size == 0 {
                return Err(Error::EmptySubset);
            }
            if size > crate::combinatorics::SET_PARTITION_CAP {
                return Err(Error::CapExceeded { m: size, cap: crate::combinatorics::SET_PARTITION_CAP });
            }
            fan_out(spec, trials, |s| {
                let ops = OpList::new(random_fields(s)).expect("random fields are first-order");
                vec![verify_partition_expansion(&ops, Some(s.seed)).expect("validated size")]
            })
        }
        TheoremId::BellPower => fan_out(spec, trials, |s| {
            let l = random_vector_field(s);
            vec![verify_bell_power(&l, size, Some(s.seed)).expect("vector field")]
        }),
        TheoremId::ExpId => fan_out(spec, trials, |s| {
            let l = random_vector_field(s);
            vec![verify_exp_identity(&l, size, Some(s.seed)).expect("vector field")]
        }),
        TheoremId::Stirling => vec![verify_stirling_power(size)?],
        TheoremId::Inversion => fan_out(spec, trials, |s| {
            let f = random_invertible_series(&s.with_size(size + 1));
            vec![verify_inversion(&f, size, Some(s.seed)).expect("input order is size + 1")]
        }),
    })
}
