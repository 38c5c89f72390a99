//! Individuals and populations.

use crate::error::{contract_error, Result};
use crate::position::PositionVector;

/// One member of a population: a position, its fitness, and the optional
/// velocity / personal-best state used by velocity-based algorithms.
#[derive(Debug, Clone)]
pub struct Individual {
    pub position: PositionVector,
    pub velocity: Option<PositionVector>,
    pub fitness: f64,
    pub personal_best_position: Option<PositionVector>,
    pub personal_best_fitness: Option<f64>,
}

impl Individual {
    pub fn new(position: PositionVector, fitness: f64) -> Self {
        Individual {
            position,
            velocity: None,
            fitness,
            personal_best_position: None,
            personal_best_fitness: None,
        }
    }

    /// Replace the personal best iff the current fitness strictly improves
    /// it (minimization); initializes the personal best when absent.
    pub fn update_personal_best(&mut self) {
        let improves = match self.personal_best_fitness {
            Some(pb) => self.fitness < pb,
            None => true,
        };
        if improves {
            self.personal_best_fitness = Some(self.fitness);
            self.personal_best_position = Some(self.position.clone());
        }
    }
}

/// A fixed-size set of individuals plus the index of the current best
/// (minimal fitness, ties broken by lowest index).
#[derive(Debug, Clone)]
pub struct Population {
    members: Vec<Individual>,
    best_index: usize,
}

impl Population {
    pub fn from_members(members: Vec<Individual>) -> Result<Self> {
        let mut pop = Population {
            members,
            best_index: 0,
        };
        pop.refresh_best()?;
        Ok(pop)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Individual {
        &self.members[i]
    }

    pub fn member_mut(&mut self, i: usize) -> &mut Individual {
        &mut self.members[i]
    }

    pub fn best_index(&self) -> usize {
        self.best_index
    }

    pub fn best(&self) -> &Individual {
        &self.members[self.best_index]
    }

    /// Recompute `best_index` after members changed.
    pub fn refresh_best(&mut self) -> Result<()> {
        let (idx, _) = select_best(&self.members)?;
        self.best_index = idx;
        Ok(())
    }

    pub fn mean_fitness(&self) -> f64 {
        self.members.iter().map(|m| m.fitness).sum::<f64>() / self.members.len() as f64
    }
}

/// Index and reference of the member with minimal fitness; ties broken by
/// lowest index. Errors on an empty slice.
pub fn select_best(members: &[Individual]) -> Result<(usize, &Individual)> {
    if members.is_empty() {
        return Err(contract_error("select_best on empty population"));
    }
    let mut best = 0;
    for (i, m) in members.iter().enumerate().skip(1) {
        if m.fitness < members[best].fitness {
            best = i;
        }
    }
    Ok((best, &members[best]))
}
