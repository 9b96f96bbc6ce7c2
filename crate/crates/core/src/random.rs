//! Seeded generators for random polynomials, operators and invertible series.
//!
//! Every generator is a pure function of its [`RandomSpec`]: the same spec
//! always yields the same instance.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diffop::DiffOp;
use crate::poly::{MultiIndex, MultiPoly};
use crate::rational::{format_rational, int, rat, Rational};
use crate::series::{EgfSeries, InvertibleSeries};

/// Parameters for drawing random instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub seed: u64,
    /// Number of variables.
    pub n: usize,
    /// Bound on the total degree of polynomial coefficients.
    pub max_degree: usize,
    /// Coefficients are drawn uniformly from this pool.
    #[serde(with = "rational_strings")]
    pub pool: Vec<Rational>,
    /// Instance size: `m` for operator tuples, `N` for series.
    pub size: usize,
}

/// `{0, ±1, ±2, 1/2}`.
pub fn default_pool() -> Vec<Rational> {
    vec![int(0), int(1), int(-1), int(2), int(-2), rat(1, 2)]
}

/// Values allowed for `a_1` in random invertible series: `{±1, ±2, 1/2}`.
pub fn linear_term_pool() -> Vec<Rational> {
    vec![int(1), int(-1), int(2), int(-2), rat(1, 2)]
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            seed: 0,
            n: 2,
            max_degree: 2,
            pool: default_pool(),
            size: 3,
        }
    }
}

impl RandomSpec {
    pub fn with_seed(&self, seed: u64) -> Self {
        RandomSpec {
            seed,
            ..self.clone()
        }
    }

    pub fn with_size(&self, size: usize) -> Self {
        RandomSpec {
            size,
            ..self.clone()
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub fn describe(&self) -> String {
        format!(
            "seed={} n={} degree<={} size={}",
            self.seed, self.n, self.max_degree, self.size
        )
    }
}

mod rational_strings {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::rational::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(pool: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(pool.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

fn pick(rng: &mut ChaCha8Rng, pool: &[Rational]) -> Rational {
    pool.choose(rng).cloned().unwrap_or_else(|| int(0))
}

/// Every monomial of total degree `<= max_degree` gets an independent pool draw.
pub fn random_poly(rng: &mut ChaCha8Rng, spec: &RandomSpec) -> MultiPoly {
    let terms = MultiIndex::up_to_degree(spec.n, spec.max_degree)
        .into_iter()
        .map(|e| (e, pick(rng, &spec.pool)))
        .collect::<Vec<_>>();
    MultiPoly::from_terms(spec.n, terms).expect("indices have length n")
}

pub fn random_vector_field_with(rng: &mut ChaCha8Rng, spec: &RandomSpec) -> DiffOp {
    let coeffs = (0..spec.n).map(|_| random_poly(rng, spec)).collect();
    DiffOp::vector_field(coeffs).expect("n >= 1")
}

/// A first-order operator `sum_j u_j d_j` drawn from `spec`.
pub fn random_vector_field(spec: &RandomSpec) -> DiffOp {
    random_vector_field_with(&mut spec.rng(), spec)
}

/// An operator of mixed order: each `d^b` with `|b| <= max_order` is present
/// with probability 1/2 and gets a random coefficient.
pub fn random_diffop(rng: &mut ChaCha8Rng, spec: &RandomSpec, max_order: usize) -> DiffOp {
    let mut terms = Vec::new();
    for b in MultiIndex::up_to_degree(spec.n, max_order) {
        if rng.gen_bool(0.5) {
            terms.push((b, random_poly(rng, spec)));
        }
    }
    DiffOp::from_terms(spec.n, terms).expect("consistent n")
}

/// `L_1, ..., L_size`, all first-order.
pub fn random_fields(spec: &RandomSpec) -> Vec<DiffOp> {
    let mut rng = spec.rng();
    (0..spec.size)
        .map(|_| random_vector_field_with(&mut rng, spec))
        .collect()
}

/// Random invertible series of order `size`: `a_1` from
/// [`linear_term_pool`], higher coefficients from the spec's pool.
pub fn random_invertible_series(spec: &RandomSpec) -> InvertibleSeries {
    let mut rng = spec.rng();
    let a1_pool = linear_term_pool();
    let order = spec.size.max(1);
    let series = EgfSeries::from_fn(order, |m| match m {
        0 => int(0),
        1 => pick(&mut rng, &a1_pool),
        _ => pick(&mut rng, &spec.pool),
    });
    InvertibleSeries::new(series).expect("a1 drawn from nonzero pool")
}

pub fn describe_pool(pool: &[Rational]) -> String {
    pool.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::Order;

    #[test]
    fn constant_coefficient_fields() {
        let spec = RandomSpec {
            max_degree: 0,
            ..RandomSpec::default()
        };
        for seed in 0..20 {
            let l = random_vector_field(&spec.with_seed(seed));
            assert!(l.is_first_order());
            for (_, u) in l.terms() {
                assert_eq!(u.degree(), Some(0));
            }
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let spec = RandomSpec::default().with_seed(42);
        assert_eq!(random_vector_field(&spec), random_vector_field(&spec));
        assert_eq!(random_fields(&spec.with_size(4)), random_fields(&spec.with_size(4)));
        assert_eq!(
            random_invertible_series(&spec.with_size(8)),
            random_invertible_series(&spec.with_size(8))
        );
        assert_ne!(
            random_vector_field(&spec),
            random_vector_field(&spec.with_seed(43))
        );
    }

    #[test]
    fn degree_bound_respected() {
        let spec = RandomSpec::default();
        for seed in 0..20 {
            let l = random_vector_field(&spec.with_seed(seed));
            assert!(matches!(l.order(), Order::Exactly(1) | Order::Any));
            for (_, u) in l.terms() {
                assert!(u.degree().unwrap() <= 2);
            }
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = RandomSpec::default();
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"1/2\""));
        assert_eq!(serde_json::from_str::<RandomSpec>(&text).unwrap(), spec);
    }
}
