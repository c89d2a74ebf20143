//! First-finisher ordering selection: every ordering's 1-layered
//! computation races, the first to finish wins and the rest are cancelled
//! at their next stack boundary.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;
use std::sync::{Arc, Mutex};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cad::{complete, Cad, CadError, SectorLift};
use crate::order::VariableOrder;
use crate::poly::Polynomial;
use crate::projection::{build_projection, to_internal};

use super::{AdmissibleOrderings, HeuristicError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheduler {
    /// One thread per ordering, wall-clock completion order.
    Threads,
    /// Deterministic rounds: every live computation lifts one stack per
    /// round, in a seeded order, so cost is the number of stacks lifted.
    Simulated { seed: u64 },
}

/// Computations currently running, by candidate position.
#[derive(Clone, Debug, Default)]
pub struct TaskRegistry(Arc<Mutex<BTreeSet<usize>>>);

impl TaskRegistry {
    pub fn live(&self) -> usize {
        self.0.lock().expect("registry lock").len()
    }

    fn enter(&self, id: usize) -> TaskGuard {
        self.0.lock().expect("registry lock").insert(id);
        TaskGuard { registry: self.clone(), id }
    }
}

/// Deregisters its task when dropped, whatever path the task ends on.
struct TaskGuard {
    registry: TaskRegistry,
    id: usize,
}

impl Drop for TaskGuard {
    fn drop(&mut self) {
        if let Ok(mut live) = self.registry.0.lock() {
            live.remove(&self.id);
        }
    }
}

#[derive(Debug)]
pub struct ParallelOutcome {
    pub winner: VariableOrder,
    pub cad: Cad,
    /// Full-dimensional cells of the winner.
    pub fulldim: usize,
    /// Orderings whose 1-layered computation finished, in finishing order.
    pub finish_order: Vec<VariableOrder>,
    /// Stacks each ordering lifted before finishing or being cancelled.
    pub stacks: Vec<(VariableOrder, usize)>,
    pub failures: Vec<(VariableOrder, CadError)>,
    pub registry: TaskRegistry,
}

struct Race {
    finished: Vec<(usize, Cad)>,
    stacks: Vec<(usize, usize)>,
    failures: Vec<(usize, CadError)>,
}

fn race_simulated(ps: &[Polynomial], candidates: &[(usize, VariableOrder)], seed: u64, registry: &TaskRegistry) -> Race {
    let projections: Vec<_> = candidates.iter().map(|(_, v)| build_projection(ps, v)).collect();
    let mut lifts: Vec<Option<(SectorLift, TaskGuard)>> = projections
        .iter()
        .zip(candidates)
        .map(|(p, &(id, _))| Some((SectorLift::start(p), registry.enter(id))))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut race = Race { finished: Vec::new(), stacks: Vec::new(), failures: Vec::new() };
    loop {
        let mut live: Vec<usize> = (0..lifts.len()).filter(|&i| lifts[i].is_some()).collect();
        if live.is_empty() {
            return race;
        }
        live.shuffle(&mut rng);
        for i in live {
            let (lift, _) = lifts[i].as_mut().expect("live lift");
            let id = candidates[i].0;
            match lift.step() {
                Ok(true) => {}
                Ok(false) => {
                    let (lift, guard) = lifts[i].take().expect("live lift");
                    race.stacks.push((id, lift.stacks_lifted()));
                    let v = &candidates[i].1;
                    race.finished.push((id, lift.into_cad(v, to_internal(ps, v))));
                    drop(guard);
                    // cancel everyone else at this stack boundary
                    for (j, slot) in lifts.iter_mut().enumerate() {
                        if let Some((other, _)) = slot.take() {
                            race.stacks.push((candidates[j].0, other.stacks_lifted()));
                        }
                    }
                    return race;
                }
                Err(e) => {
                    let (lift, _) = lifts[i].take().expect("live lift");
                    race.stacks.push((id, lift.stacks_lifted()));
                    race.failures.push((id, e));
                }
            }
        }
    }
}

enum Message {
    Finished(usize, Cad, usize),
    Failed(usize, CadError, usize),
}

fn race_threads(ps: &[Polynomial], candidates: &[(usize, VariableOrder)], registry: &TaskRegistry) -> Race {
    let cancel = Arc::new(AtomicBool::new(false));
    let (tx, rx) = mpsc::channel();
    let mut race = Race { finished: Vec::new(), stacks: Vec::new(), failures: Vec::new() };
    std::thread::scope(|s| {
        for (id, v) in candidates {
            let guard = registry.enter(*id);
            let (tx, cancel) = (tx.clone(), cancel.clone());
            s.spawn(move || {
                let _guard = guard;
                let projection = build_projection(ps, v);
                let mut lift = SectorLift::start(&projection);
                let msg = loop {
                    if cancel.load(Ordering::Relaxed) {
                        break Message::Failed(*id, CadError::Cancelled, lift.stacks_lifted());
                    }
                    match lift.step() {
                        Ok(true) => {}
                        Ok(false) => {
                            let stacks = lift.stacks_lifted();
                            break Message::Finished(*id, lift.into_cad(v, to_internal(ps, v)), stacks);
                        }
                        Err(e) => break Message::Failed(*id, e, lift.stacks_lifted()),
                    }
                };
                // the receiver outlives the scope
                let _ = tx.send(msg);
            });
        }
        drop(tx);
        for msg in rx {
            match msg {
                Message::Finished(id, cad, stacks) => {
                    cancel.store(true, Ordering::Relaxed);
                    race.stacks.push((id, stacks));
                    race.finished.push((id, cad));
                }
                Message::Failed(id, e, stacks) => {
                    race.stacks.push((id, stacks));
                    if e != CadError::Cancelled {
                        race.failures.push((id, e));
                    }
                }
            }
        }
    });
    race
}

/// Races the admissible orderings and completes the first to finish. If the
/// winner fails while completing, the next finisher takes over; when no
/// finisher is left, the race is rerun among the remaining orderings.
pub fn parallel_layered_heuristic(
    ps: &[Polynomial],
    names: &[String],
    orderings: &AdmissibleOrderings,
    scheduler: Scheduler,
) -> Result<ParallelOutcome, HeuristicError> {
    if names.is_empty() {
        return Err(HeuristicError::AllOrderingsFailed(vec![(String::new(), CadError::NoVariables)]));
    }
    let candidates = orderings.expand(names.len())?;
    let registry = TaskRegistry::default();
    let mut remaining: Vec<(usize, VariableOrder)> = candidates.iter().cloned().enumerate().collect();
    let mut finish_order = Vec::new();
    let mut stacks = Vec::new();
    let mut failures: Vec<(usize, CadError)> = Vec::new();
    while !remaining.is_empty() {
        let race = match scheduler {
            Scheduler::Simulated { seed } => race_simulated(ps, &remaining, seed, &registry),
            Scheduler::Threads => race_threads(ps, &remaining, &registry),
        };
        debug_assert_eq!(registry.live(), 0, "race left tasks behind");
        stacks.extend(race.stacks);
        let mut out: Vec<usize> = race.failures.iter().map(|(id, _)| *id).collect();
        failures.extend(race.failures);
        for (id, mut cad) in race.finished {
            finish_order.push(candidates[id].clone());
            out.push(id);
            let fulldim = cad.cells.len();
            match complete(&mut cad) {
                Ok(()) => {
                    let by_id = |v: Vec<(usize, usize)>| v.into_iter().map(|(i, s)| (candidates[i].clone(), s)).collect();
                    return Ok(ParallelOutcome {
                        winner: candidates[id].clone(),
                        cad,
                        fulldim,
                        finish_order,
                        stacks: by_id(stacks),
                        failures: failures.into_iter().map(|(i, e)| (candidates[i].clone(), e)).collect(),
                        registry,
                    });
                }
                Err(e) => failures.push((id, e)),
            }
        }
        remaining.retain(|(id, _)| !out.contains(id));
    }
    Err(HeuristicError::AllOrderingsFailed(
        failures.into_iter().map(|(i, e)| (candidates[i].display(names), e)).collect(),
    ))
}
