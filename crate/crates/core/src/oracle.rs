//! Brute-force ground truth from transposition factorizations in `S_d`.
//!
//! A factorization of type `(g, μ, ν)` is a tuple `(σ₁, τ₁, …, τ_b, σ₂)`
//! with `σ₁` of cycle type μ, transpositions `τ_j`, `σ₂` of cycle type ν,
//! product `σ₁ τ₁ ⋯ τ_b σ₂ = id`, and a transitive generated group. The
//! Hurwitz number is `1/d!` times the number of such tuples with labelled
//! cycles.
//!
//! Enumeration fixes `σ₁` to one representative of its conjugacy class and
//! runs over transposition tuples; `σ₂` is then determined. The class size
//! and the number of cycle labellings are applied analytically, which gives
//! `H = N · |Aut ν| / ∏ μ_i` where `N` is the count with `σ₁` fixed.

use crate::budget::Budget;
use crate::error::Result;
use crate::partition::{HurwitzType, Partition, PrunedSide};
use crate::perm::{Permutation, UnionFind};
use crate::scalar::{factorial, Scalar};

/// Limits for exhaustive factorization searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest admissible degree.
    pub max_degree: u32,
    /// Largest admissible number of transpositions.
    pub max_branch: i64,
    /// Cap on elementary composition steps per query.
    pub max_steps: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_degree: 8, max_branch: 6, max_steps: 1_000_000_000 }
    }
}

/// Number of composition steps a full search of depth `b` over `t`
/// transpositions performs.
fn search_cost(t: u64, b: i64) -> u64 {
    let mut total = 0u64;
    let mut level = 1u64;
    for _ in 0..b {
        level = level.saturating_mul(t);
        total = total.saturating_add(level);
    }
    total
}

/// Counts transposition tuples with `σ₁` fixed to the standard
/// representative of μ, subject to the cycle type of `σ₂`, transitivity and,
/// if requested, the support condition on the chosen side.
pub fn count_fixed_sigma1(t: &HurwitzType, side: PrunedSide, config: &OracleConfig) -> Result<u64> {
    let b = t.branch_count();
    if b < 0 {
        return Ok(0);
    }
    let d = t.degree() as usize;
    let mut budget = Budget::new("symgroup_oracle", config.max_steps);
    if t.degree() > config.max_degree || b > config.max_branch {
        return Err(budget.exceeded(format!(
            "type {} is outside the exhaustive bound d <= {}, b <= {}",
            t.key(),
            config.max_degree,
            config.max_branch
        )));
    }
    let transpositions: Vec<(usize, usize)> =
        (0..d).flat_map(|a| (a + 1..d).map(move |c| (a, c))).collect();
    let cost = search_cost(transpositions.len() as u64, b);
    budget.spend(cost)?;

    let sigma1 = Permutation::standard(t.mu.parts());
    let target = t.nu.sorted_desc();
    let search = Search {
        d,
        b: b as usize,
        sigma1_cycles: sigma1.cycles(),
        target,
        side,
        transpositions,
    };
    let mut chosen = Vec::with_capacity(b as usize);
    Ok(search.run(&sigma1, &mut chosen))
}

struct Search {
    d: usize,
    b: usize,
    sigma1_cycles: Vec<Vec<usize>>,
    target: Vec<u32>,
    side: PrunedSide,
    transpositions: Vec<(usize, usize)>,
}

impl Search {
    fn run(&self, current: &Permutation, chosen: &mut Vec<(usize, usize)>) -> u64 {
        if chosen.len() == self.b {
            return u64::from(self.accepts(current, chosen));
        }
        let mut total = 0;
        for &(a, c) in &self.transpositions {
            let mut next = current.clone();
            next.then_swap(a, c);
            chosen.push((a, c));
            total += self.run(&next, chosen);
            chosen.pop();
        }
        total
    }

    /// `product` is `σ₁ τ₁ ⋯ τ_b`, so `σ₂` is its inverse and has the same
    /// cycles.
    fn accepts(&self, product: &Permutation, taus: &[(usize, usize)]) -> bool {
        if product.cycle_type() != self.target {
            return false;
        }
        let mut uf = UnionFind::new(self.d);
        for cycle in &self.sigma1_cycles {
            for w in cycle.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        for &(a, c) in taus {
            uf.union(a, c);
        }
        if uf.count() != 1 {
            return false;
        }
        match self.side {
            PrunedSide::None => true,
            PrunedSide::Left => all_touched_twice(&self.sigma1_cycles, taus),
            PrunedSide::Right => all_touched_twice(&product.cycles(), taus),
        }
    }
}

/// The support condition: every cycle meets the transpositions at least
/// twice, counted with multiplicity over the tuple.
fn all_touched_twice(cycles: &[Vec<usize>], taus: &[(usize, usize)]) -> bool {
    cycles.iter().all(|c| {
        let hits: usize = taus
            .iter()
            .map(|&(a, b)| usize::from(c.contains(&a)) + usize::from(c.contains(&b)))
            .sum();
        hits >= 2
    })
}

fn value_from_count<S: Scalar>(t: &HurwitzType, n: u64) -> S {
    let prod_mu: u64 = t.mu.parts().iter().map(|&p| p as u64).product();
    S::uint(n) * S::uint(t.nu.automorphisms()) / S::uint(prod_mu)
}

/// The double Hurwitz number `H_g(μ, ν)` under the default bounds.
pub fn double_hurwitz<S: Scalar>(t: &HurwitzType) -> Result<S> {
    double_hurwitz_with(t, &OracleConfig::default())
}

/// [`double_hurwitz`] with explicit bounds.
pub fn double_hurwitz_with<S: Scalar>(t: &HurwitzType, config: &OracleConfig) -> Result<S> {
    let n = count_fixed_sigma1(t, PrunedSide::None, config)?;
    Ok(value_from_count(t, n))
}

/// The pruned double Hurwitz number. The support condition is imposed on
/// the side named by `t.pruned_side`; `None` falls back to the μ side,
/// which is the form the factorization theorem is stated in.
pub fn pruned_double_hurwitz_oracle<S: Scalar>(t: &HurwitzType) -> Result<S> {
    pruned_double_hurwitz_oracle_with(t, &OracleConfig::default())
}

/// [`pruned_double_hurwitz_oracle`] with explicit bounds.
pub fn pruned_double_hurwitz_oracle_with<S: Scalar>(t: &HurwitzType, config: &OracleConfig) -> Result<S> {
    let side = match t.pruned_side {
        PrunedSide::None => PrunedSide::Left,
        s => s,
    };
    let n = count_fixed_sigma1(t, side, config)?;
    Ok(value_from_count(t, n))
}

/// The single Hurwitz number `H_g(μ) = H_g(μ, 1^d) / d!`, pruned on the
/// `1^d` side when requested.
pub fn single_hurwitz<S: Scalar>(g: u32, mu: &Partition, pruned: bool) -> Result<S> {
    single_hurwitz_with(g, mu, pruned, &OracleConfig::default())
}

/// [`single_hurwitz`] with explicit bounds.
pub fn single_hurwitz_with<S: Scalar>(g: u32, mu: &Partition, pruned: bool, config: &OracleConfig) -> Result<S> {
    let d = mu.degree();
    let t = HurwitzType::new(g, mu.clone(), Partition::ones(d))?;
    let value: S = if pruned {
        pruned_double_hurwitz_oracle_with(&t.pruned(PrunedSide::Right), config)?
    } else {
        double_hurwitz_with(&t, config)?
    };
    Ok(value / factorial::<S>(d as u64))
}

/// Checks that `d! · value` is a non-negative integer, which holds for every
/// oracle result because it is a cardinality.
pub fn is_cardinality_scaled(value: &num_rational::BigRational, d: u32) -> bool {
    let scaled = value * factorial::<num_rational::BigRational>(d as u64);
    crate::scalar::is_nonneg_integer(&scaled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::HurwitzError;
    use crate::scalar::{rat, rat2};
    use num_rational::BigRational;

    #[test]
    fn genus_one_reference_value() {
        let h: BigRational = double_hurwitz(&HurwitzType::of(1, &[5], &[4, 1])).unwrap();
        assert_eq!(h, rat(100));
    }

    #[test]
    fn trivial_identity_case() {
        let h: BigRational = double_hurwitz(&HurwitzType::of(0, &[1], &[1])).unwrap();
        assert_eq!(h, rat(1));
    }

    #[test]
    fn single_numbers() {
        assert_eq!(single_hurwitz::<BigRational>(0, &Partition::of(&[2]), false).unwrap(), rat2(1, 2));
        assert_eq!(single_hurwitz::<BigRational>(0, &Partition::of(&[1, 1]), false).unwrap(), rat(1));
        assert_eq!(single_hurwitz::<BigRational>(0, &Partition::of(&[2, 1]), false).unwrap(), rat(4));
    }

    #[test]
    fn pruned_examples() {
        let t = HurwitzType::of(0, &[2], &[2]).pruned(PrunedSide::Left);
        assert_eq!(pruned_double_hurwitz_oracle::<BigRational>(&t).unwrap(), rat(0));
        let t = HurwitzType::of(0, &[2, 1], &[2, 1]).pruned(PrunedSide::Left);
        assert_eq!(pruned_double_hurwitz_oracle::<BigRational>(&t).unwrap(), rat(2));
    }

    #[test]
    fn budget_is_enforced() {
        let config = OracleConfig { max_steps: 10, ..OracleConfig::default() };
        let r = double_hurwitz_with::<BigRational>(&HurwitzType::of(1, &[5], &[4, 1]), &config);
        assert!(matches!(r, Err(HurwitzError::BudgetExceeded { .. })));
    }
}
