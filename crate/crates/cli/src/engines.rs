//! Engine selection and evaluation with budget overrides.

use clap::ValueEnum;
use hurwitz_core::dyck::{enumerate_hurwitz_dyck_paths_with, is_pruned_dyck, DyckConfig};
use hurwitz_core::mobile::{enumerate_mobiles_with, MobileConfig};
use hurwitz_core::oracle::{double_hurwitz_with, pruned_double_hurwitz_oracle_with, OracleConfig};
use hurwitz_core::pruned_tropical::{enumerate_pruned_with, tropical_pruned_with, PrunedOptions};
use hurwitz_core::recursion::PrunedRecursion;
use hurwitz_core::scalar::factorial;
use hurwitz_core::tropical::{enumerate_monodromy_graphs_with, DEFAULT_STATE_CAP};
use hurwitz_core::{HurwitzError, HurwitzType, Partition, PrunedSide, Rational, Result, Scalar};

/// The available engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Engine {
    /// Transposition factorizations in the symmetric group.
    Oracle,
    /// Classical monodromy graphs.
    Tropical,
    /// The pruned cut-and-join recursion.
    Recursion,
    /// Pruned monodromy graphs.
    PrunedTropical,
    /// Genus-zero Hurwitz Dyck paths for types (μ, 1^d).
    Dyck,
    /// Genus-zero mobiles for types (μ, 1^d).
    Mobile,
}

impl Engine {
    /// The name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            Engine::Oracle => "oracle",
            Engine::Tropical => "tropical",
            Engine::Recursion => "recursion",
            Engine::PrunedTropical => "pruned-tropical",
            Engine::Dyck => "dyck",
            Engine::Mobile => "mobile",
        }
    }

    /// The side a bare `--pruned` flag refers to for this engine. Dyck
    /// paths encode pruning on the `1^d` side; everything else on μ.
    pub fn default_pruned_side(self) -> PrunedSide {
        match self {
            Engine::Dyck => PrunedSide::Right,
            _ => PrunedSide::Left,
        }
    }

    /// Engines that always compute pruned numbers.
    pub fn is_pruned_only(self) -> bool {
        matches!(self, Engine::Recursion | Engine::PrunedTropical)
    }
}

/// Step limits derived from an optional `--budget`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    pub budget: Option<u64>,
}

impl Limits {
    /// Oracle bounds. An explicit budget lifts the size caps and leaves
    /// only the step count.
    pub fn oracle(&self) -> OracleConfig {
        match self.budget {
            Some(steps) => OracleConfig { max_degree: u32::MAX, max_branch: i64::MAX, max_steps: steps },
            None => OracleConfig::default(),
        }
    }

    fn dyck(&self) -> DyckConfig {
        match self.budget {
            Some(steps) => DyckConfig { max_degree: u32::MAX, max_steps: steps },
            None => DyckConfig::default(),
        }
    }

    fn mobile(&self) -> MobileConfig {
        match self.budget {
            Some(steps) => MobileConfig { max_degree: u32::MAX, max_steps: steps },
            None => MobileConfig::default(),
        }
    }

    fn tropical_cap(&self) -> u64 {
        self.budget.unwrap_or(DEFAULT_STATE_CAP)
    }
}

/// A computed value with the number of enumerated objects, if any.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: Rational,
    pub objects: Option<usize>,
}

fn single_type(t: &HurwitzType, engine: Engine) -> Result<Partition> {
    let d = t.degree();
    if t.genus != 0 || t.nu.parts().iter().any(|&p| p != 1) {
        return Err(HurwitzError::Inapplicable(format!(
            "{} engine needs genus 0 and nu = 1^d, got {}",
            engine.name(),
            t.key()
        )));
    }
    Ok(Partition::ones(d))
}

/// Evaluates `t` with one engine. Pruning follows `t.pruned_side`.
pub fn evaluate(engine: Engine, t: &HurwitzType, limits: &Limits, rec: &PrunedRecursion<Rational>) -> Result<Evaluation> {
    let pruned = t.pruned_side != PrunedSide::None;
    match engine {
        Engine::Oracle => {
            let value = if pruned {
                pruned_double_hurwitz_oracle_with(t, &limits.oracle())?
            } else {
                double_hurwitz_with(t, &limits.oracle())?
            };
            Ok(Evaluation { value, objects: None })
        }
        Engine::Tropical => {
            if pruned {
                return Err(HurwitzError::Inapplicable("the tropical engine counts classical numbers; use pruned-tropical".into()));
            }
            let graphs = enumerate_monodromy_graphs_with(t, limits.tropical_cap())?;
            let (am, an) = (t.mu.automorphisms(), t.nu.automorphisms());
            let value = graphs.iter().fold(Rational::int(0), |acc, g| acc + g.multiplicity::<Rational>(am, an));
            Ok(Evaluation { value, objects: Some(graphs.len()) })
        }
        Engine::Recursion => Ok(Evaluation { value: rec.value(t)?, objects: None }),
        Engine::PrunedTropical => {
            let value = tropical_pruned_with(t, rec)?;
            let objects = match enumerate_pruned_with(t, rec, PrunedOptions::default()) {
                Ok(graphs) => Some(graphs.len()),
                Err(HurwitzError::Inapplicable(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(Evaluation { value, objects })
        }
        Engine::Dyck => {
            single_type(t, engine)?;
            if t.pruned_side == PrunedSide::Left {
                return Err(HurwitzError::Inapplicable("Dyck paths encode pruning on the nu = 1^d side only".into()));
            }
            let paths = enumerate_hurwitz_dyck_paths_with(&t.mu, &limits.dyck())?;
            let count = if pruned { paths.iter().filter(|p| is_pruned_dyck(p)).count() } else { paths.len() };
            // |D(μ)| = d·H_0(μ, 1^d)/d!, so the double number is |D|·(d−1)!.
            let d = t.degree() as u64;
            let value = Rational::uint(count as u64) * factorial::<Rational>(d - 1);
            Ok(Evaluation { value, objects: Some(paths.len()) })
        }
        Engine::Mobile => {
            let ones = single_type(t, engine)?;
            if pruned {
                return Err(HurwitzError::Inapplicable("the pruned mobile predicate needs standard forms, which are not intrinsic".into()));
            }
            let mobiles = enumerate_mobiles_with(&t.mu, &ones, &limits.mobile())?;
            let b = t.branch_count() as u64;
            // Shift classes have b+1 members and biject with Dyck paths.
            let d = t.degree() as u64;
            let value = Rational::uint(mobiles.len() as u64) * factorial::<Rational>(d - 1) / Rational::uint(b + 1);
            Ok(Evaluation { value, objects: Some(mobiles.len()) })
        }
    }
}
