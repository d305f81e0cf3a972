//! Generalized urn model over the four CHSH observables.
//!
//! A ball pair carries a two-valued assignment on `a, a′, b, b′` for the first
//! ball and its negation for the second. Observer A looks at the first ball
//! through eyeglasses that reveal either `a` or `a′`; observer B looks at the
//! second ball and sees `b` or `b′`.

use serde::Serialize;

use crate::band::Outcome;
use crate::error::{Error, Result};
use crate::peres::{Direction3, PeresShare};
use crate::rng::{tag, TrialStream};

const WEIGHT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Assignment {
    pub a: Outcome,
    pub a_prime: Outcome,
    pub b: Outcome,
    pub b_prime: Outcome,
}

impl Assignment {
    pub fn new(a: Outcome, a_prime: Outcome, b: Outcome, b_prime: Outcome) -> Self {
        Self {
            a,
            a_prime,
            b,
            b_prime,
        }
    }

    /// Index in the lexicographic enumeration (`−1 < +1`, `a` most significant).
    pub fn index(&self) -> usize {
        self.values()
            .iter()
            .fold(0, |acc, v| (acc << 1) | usize::from(*v == 1))
    }

    pub fn from_index(index: usize) -> Self {
        assert!(index < 16, "assignment index {index} out of range");
        let bit = |k: usize| {
            if index >> k & 1 == 1 {
                Outcome::Plus
            } else {
                Outcome::Minus
            }
        };
        Self::new(bit(3), bit(2), bit(1), bit(0))
    }

    pub fn values(&self) -> [i64; 4] {
        [self.a, self.a_prime, self.b, self.b_prime].map(Outcome::value)
    }

    pub fn negated(&self) -> Self {
        Self::new(
            self.a.negate(),
            self.a_prime.negate(),
            self.b.negate(),
            self.b_prime.negate(),
        )
    }

    /// The assignment a Peres share induces on four directions (fragment 1).
    pub fn induced_by(share: &PeresShare, dirs: [Direction3; 4]) -> Self {
        let r = dirs.map(|d| Outcome::from_value(d.dot(share.j)));
        Self::new(r[0], r[1], r[2], r[3])
    }

    /// Products of the two observables on the same ball, `(a·a′, b·b′)`.
    /// Both contexts of one side are never jointly observable; this exists
    /// for inspection only and is not used by any statistic.
    pub fn debug_cross_context(&self) -> (i64, i64) {
        (
            self.a.times(self.a_prime).value(),
            self.b.times(self.b_prime).value(),
        )
    }
}

/// The 16 assignments, `(−,−,−,−)` first and `(+,+,+,+)` last.
pub fn enumerate_assignments() -> Vec<Assignment> {
    (0..16).map(Assignment::from_index).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SingletPair {
    first: Assignment,
    second: Assignment,
}

impl SingletPair {
    pub fn from_first(first: Assignment) -> Self {
        Self {
            first,
            second: first.negated(),
        }
    }

    pub fn first(&self) -> Assignment {
        self.first
    }

    pub fn second(&self) -> Assignment {
        self.second
    }

    pub fn swapped(&self) -> Self {
        Self::from_first(self.second)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Context {
    Unprimed,
    Primed,
}

/// What an observer sees through the eyeglasses for `context`.
pub fn observe(pair: &SingletPair, side: Side, context: Context) -> Outcome {
    match (side, context) {
        (Side::A, Context::Unprimed) => pair.first.a,
        (Side::A, Context::Primed) => pair.first.a_prime,
        (Side::B, Context::Unprimed) => pair.second.b,
        (Side::B, Context::Primed) => pair.second.b_prime,
    }
}

/// The four CHSH terms in order `(ab, ab′, a′b, a′b′)`.
pub const TERMS: [(Context, Context); 4] = [
    (Context::Unprimed, Context::Unprimed),
    (Context::Unprimed, Context::Primed),
    (Context::Primed, Context::Unprimed),
    (Context::Primed, Context::Primed),
];

/// Observed products for the four terms on one pair.
pub fn pair_products(pair: &SingletPair) -> [i64; 4] {
    TERMS.map(|(ca, cb)| {
        observe(pair, Side::A, ca)
            .times(observe(pair, Side::B, cb))
            .value()
    })
}

/// Convex weights over the 16 assignments (indexed as
/// [`enumerate_assignments`]).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UrnDistribution {
    weights: [f64; 16],
}

impl UrnDistribution {
    pub fn new(weights: [f64; 16]) -> Result<Self> {
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(Error::InvalidWeights(format!(
                "weight {i} is {w}, expected a finite nonnegative number"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { weights })
    }

    pub fn uniform() -> Self {
        Self {
            weights: [1.0 / 16.0; 16],
        }
    }

    pub fn point_mass(state: Assignment) -> Self {
        let mut weights = [0.0; 16];
        weights[state.index()] = 1.0;
        Self { weights }
    }

    pub fn weights(&self) -> &[f64; 16] {
        &self.weights
    }

    /// `λ·self + (1 − λ)·other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        let mut w = [0.0; 16];
        for (k, slot) in w.iter_mut().enumerate() {
            *slot = lambda * self.weights[k] + (1.0 - lambda) * other.weights[k];
        }
        Self::new(w)
    }

    /// Inverse-CDF draw of one assignment.
    pub fn sample(&self, stream: &mut TrialStream) -> Assignment {
        let u = stream.unit(tag::URN_INDEX);
        let mut acc = 0.0;
        let last = self.weights.iter().rposition(|w| *w > 0.0).unwrap_or(15);
        for (i, w) in self.weights.iter().enumerate() {
            acc += w;
            if u < acc {
                return Assignment::from_index(i);
            }
        }
        Assignment::from_index(last)
    }
}

/// `(E_ab, E_ab′, E_a′b, E_a′b′)` as convex sums over the extreme cases.
pub fn urn_expectations(dist: &UrnDistribution) -> [f64; 4] {
    let mut e = [0.0; 4];
    for (state, w) in enumerate_assignments().iter().zip(dist.weights()) {
        let products = pair_products(&SingletPair::from_first(*state));
        for (acc, p) in e.iter_mut().zip(products) {
            *acc += w * p as f64;
        }
    }
    e
}
