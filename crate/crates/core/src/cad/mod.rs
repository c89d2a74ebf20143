//! Cylindrical algebraic decomposition: complete, 1-layered and
//! ℓ-layered.
//!
//! Cell indices use the usual convention: over a stack with `k` sections the
//! children are numbered `1..=2k+1`, odd entries for sectors and even ones
//! for sections, so a cell's dimension is its number of odd entries.

mod lift;
mod point;

pub use lift::{lift_stack, SectionRoot, Stack};
pub use point::{sign_at, Coordinate, FiberRoot};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;
use thiserror::Error;

use point::nonzero_sign_at;

use crate::combinatorics::DimensionDistribution;
use crate::order::VariableOrder;
use crate::poly::Polynomial;
use crate::projection::{build_projection, to_internal, ProjectionFactorSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CadError {
    #[error("factor {factor} vanishes identically over a cell at level {level}")]
    Nullification { level: usize, factor: String },
    #[error("no pending lifting tasks to extend")]
    NothingToExtend,
    #[error("a decomposition needs at least one variable")]
    NoVariables,
    #[error("cancelled")]
    Cancelled,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellIndex(pub Vec<u32>);

impl CellIndex {
    pub fn dimension(&self) -> usize {
        cell_dimension(self)
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for CellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Number of odd entries.
pub fn cell_dimension(index: &CellIndex) -> usize {
    index.0.iter().filter(|&&i| i % 2 == 1).count()
}

#[derive(Clone, Debug)]
pub struct SamplePoint(pub Vec<Coordinate>);

impl SamplePoint {
    pub fn is_rational(&self) -> bool {
        self.0.iter().all(Coordinate::is_rational)
    }

    /// Approximate coordinates, for display.
    pub fn approx(&self) -> Vec<f64> {
        (0..self.0.len()).map(|i| self.0[i].approx(&self.0[..i])).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub index: CellIndex,
    pub sample: SamplePoint,
    /// Sign of each input polynomial at the sample.
    pub signs: Vec<i32>,
}

impl Cell {
    pub fn dimension(&self) -> usize {
        self.index.dimension()
    }
}

/// Deferred construction of the section cells of one stack (and of
/// everything that lies over them).
#[derive(Clone, Debug)]
pub struct LiftingTask {
    /// Index of the base cell (`level - 1` entries).
    pub base_index: Vec<u32>,
    pub base_sample: Vec<Coordinate>,
    /// Level of the stack whose sections are pending.
    pub level: usize,
    pub sections: Vec<SectionRoot>,
    /// Factors vanishing on each section.
    pub owners: Vec<Vec<usize>>,
    /// Factors, as `(level - 1, factor)`, known to vanish on every section.
    pub vanishing: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
struct PartialCell {
    index: Vec<u32>,
    sample: Vec<Coordinate>,
    /// Projection factors `(level - 1, factor)` vanishing at the sample; all
    /// others are known to be nonzero there.
    vanishing: Vec<(usize, usize)>,
}

impl PartialCell {
    fn root() -> Self {
        PartialCell { index: Vec::new(), sample: Vec::new(), vanishing: Vec::new() }
    }
}

#[derive(Clone, Debug)]
pub struct Cad {
    pub order: VariableOrder,
    pub projection: ProjectionFactorSet,
    /// Inputs in internal variable positions.
    pub inputs: Vec<Polynomial>,
    /// Level-`n` cells, sorted by index.
    pub cells: Vec<Cell>,
    pub pending: Vec<LiftingTask>,
    /// Number of stacks lifted so far.
    pub stacks_lifted: usize,
    pub warnings: Vec<String>,
}

impl Cad {
    pub fn nvars(&self) -> usize {
        self.order.len()
    }

    pub fn is_complete(&self) -> bool {
        self.pending.is_empty()
    }

    pub fn full_dimensional_count(&self) -> usize {
        let n = self.nvars();
        self.cells.iter().filter(|c| c.dimension() == n).count()
    }

    pub fn dimension_histogram(&self) -> DimensionDistribution {
        dimension_histogram(self)
    }

    /// One line per cell: `index=(i1,…,in) dim=d sample=(…)`.
    pub fn dump(&self) -> Vec<String> {
        self.cells
            .iter()
            .map(|c| {
                let sample: Vec<String> = c.sample.0.iter().map(format_coordinate).collect();
                format!("index={} dim={} sample=({})", c.index, c.dimension(), sample.join(","))
            })
            .collect()
    }

    /// Checks that the level-`j` children of every level-`(j-1)` prefix are
    /// numbered `1..=2k+1` without gaps (complete decompositions only).
    pub fn check_cylindrical(&self) -> Result<(), String> {
        let n = self.nvars();
        for j in 1..=n {
            let mut children: BTreeMap<&[u32], Vec<u32>> = BTreeMap::new();
            for c in &self.cells {
                children.entry(&c.index.0[..j - 1]).or_default().push(c.index.0[j - 1]);
            }
            for (prefix, mut ks) in children {
                ks.sort_unstable();
                ks.dedup();
                let m = ks.len() as u32;
                if m.is_multiple_of(2) || ks != (1..=m).collect::<Vec<_>>() {
                    return Err(format!("stack over {prefix:?} at level {j} has children {ks:?}"));
                }
            }
        }
        Ok(())
    }

    /// Evaluates every pending task, adding the cells one dimension lower
    /// than the current minimum.
    pub fn extend_layer(&mut self) -> Result<(), CadError> {
        extend_layer(self)
    }
}

fn format_coordinate(x: &Coordinate) -> String {
    match x {
        Coordinate::Rational(r) => r.to_string(),
        Coordinate::Algebraic(a) => a.to_string(),
        Coordinate::Fiber(f) => format!("root[{:?}]", f.poly()),
    }
}

/// Dimension counts of the cells.
pub fn dimension_histogram(cad: &Cad) -> DimensionDistribution {
    let mut counts = vec![0u64; cad.nvars() + 1];
    for c in &cad.cells {
        counts[c.dimension()] += 1;
    }
    DimensionDistribution::new(counts)
}

fn prepare(ps: &[Polynomial], order: &VariableOrder) -> Result<(ProjectionFactorSet, Vec<Polynomial>), CadError> {
    if order.is_empty() {
        return Err(CadError::NoVariables);
    }
    let projection = build_projection(ps, order);
    Ok((projection, to_internal(ps, order)))
}

/// Each input as `sign(c)` and `(level - 1, factor, exponent)` with
/// `input = c * prod factor^exponent`, when it factors over the projection
/// factors.
type SignPlan = Vec<Option<(i32, Vec<(usize, usize, u32)>)>>;

fn sign_plan(projection: &ProjectionFactorSet, inputs: &[Polynomial]) -> SignPlan {
    inputs
        .iter()
        .map(|q| {
            if q.is_zero() {
                return Some((0, Vec::new()));
            }
            let mut rest = q.clone();
            let mut parts = Vec::new();
            for (level, factors) in projection.levels.iter().enumerate() {
                for (fi, f) in factors.iter().enumerate() {
                    let mut e = 0;
                    while let Ok(quot) = rest.div_exact(f) {
                        rest = quot;
                        e += 1;
                    }
                    if e > 0 {
                        parts.push((level, fi, e));
                    }
                }
            }
            let c = rest.constant_value()?;
            Some((if c.is_positive() { 1 } else { -1 }, parts))
        })
        .collect()
}

/// Input signs from factor signs: a factor vanishes only where the lifting
/// recorded it, so the remaining signs need no exact zero test.
fn finish_cell(p: PartialCell, inputs: &[Polynomial], projection: &ProjectionFactorSet, plan: &SignPlan) -> Cell {
    let signs = inputs
        .iter()
        .zip(plan)
        .map(|(q, how)| match how {
            None => sign_at(q, &p.sample),
            Some((c, parts)) => parts.iter().fold(*c, |acc, &(level, fi, e)| {
                if acc == 0 || p.vanishing.contains(&(level, fi)) {
                    return 0;
                }
                let s = nonzero_sign_at(&projection.levels[level][fi], &p.sample[..=level]);
                if e % 2 == 0 { acc } else { acc * s }
            }),
        })
        .collect();
    Cell { index: CellIndex(p.index), sample: SamplePoint(p.sample), signs }
}

fn finish_cells(done: Vec<PartialCell>, inputs: &[Polynomial], projection: &ProjectionFactorSet) -> Vec<Cell> {
    let plan = sign_plan(projection, inputs);
    let mut cells: Vec<Cell> = done.into_iter().map(|p| finish_cell(p, inputs, projection, &plan)).collect();
    cells.sort_by(|a, b| a.index.cmp(&b.index));
    cells
}

fn index_dimension(index: &[u32]) -> usize {
    index.iter().filter(|&&k| k % 2 == 1).count()
}

fn note_drops(stack: &Stack, level: usize, index: &[u32], warnings: &mut Vec<String>) {
    for &fi in &stack.degree_drops {
        warnings.push(format!(
            "level {level}: leading coefficient of factor #{fi} vanishes over cell {}",
            CellIndex(index.to_vec())
        ));
    }
    for &fi in &stack.nullified {
        warnings.push(format!(
            "level {level}: factor #{fi} vanishes identically over point cell {}",
            CellIndex(index.to_vec())
        ));
    }
}

/// Complete sign-invariant decomposition.
pub fn build_cad(ps: &[Polynomial], order: &VariableOrder) -> Result<Cad, CadError> {
    let (projection, inputs) = prepare(ps, order)?;
    let n = order.len();
    let mut warnings = Vec::new();
    let mut stacks = 0;
    let mut done = Vec::new();
    let mut work = vec![PartialCell::root()];
    while let Some(c) = work.pop() {
        let level = c.index.len() + 1;
        let stack = lift_stack(&c.sample, &projection.levels[level - 1], index_dimension(&c.index))?;
        stacks += 1;
        note_drops(&stack, level, &c.index, &mut warnings);
        let vanishing = stack_vanishing(&c.vanishing, level, &stack.nullified);
        for (i, s) in stack.sector_samples.iter().enumerate() {
            let child = child(&c, 2 * i as u32 + 1, Coordinate::Rational(s.clone()), vanishing.clone());
            route(child, n, &mut work, &mut done);
        }
        for (i, r) in stack.sections.iter().enumerate() {
            let child = child(&c, 2 * i as u32 + 2, r.to_coordinate(), with_owners(&vanishing, level, &stack.owners[i]));
            route(child, n, &mut work, &mut done);
        }
    }
    let cells = finish_cells(done, &inputs, &projection);
    warnings.extend(projection.warnings.iter().map(|w| w.to_string()));
    Ok(Cad { order: order.clone(), projection, inputs, cells, pending: Vec::new(), stacks_lifted: stacks, warnings })
}

/// Vanishing factors shared by the whole stack over `base` at `level`.
fn stack_vanishing(base: &[(usize, usize)], level: usize, nullified: &[usize]) -> Vec<(usize, usize)> {
    let mut v = base.to_vec();
    v.extend(nullified.iter().map(|&fi| (level - 1, fi)));
    v
}

fn with_owners(vanishing: &[(usize, usize)], level: usize, owners: &[usize]) -> Vec<(usize, usize)> {
    let mut v = vanishing.to_vec();
    v.extend(owners.iter().map(|&fi| (level - 1, fi)));
    v
}

fn child(parent: &PartialCell, k: u32, coord: Coordinate, vanishing: Vec<(usize, usize)>) -> PartialCell {
    let mut index = parent.index.clone();
    index.push(k);
    let mut sample = parent.sample.clone();
    sample.push(coord);
    PartialCell { index, sample, vanishing }
}

fn route(child: PartialCell, n: usize, work: &mut Vec<PartialCell>, done: &mut Vec<PartialCell>) {
    if child.index.len() == n {
        done.push(child);
    } else {
        work.push(child);
    }
}

/// Sector-only lifting, one stack per step, so that callers can interleave
/// or cancel it between stacks.
pub struct SectorLift<'a> {
    projection: &'a ProjectionFactorSet,
    work: Vec<PartialCell>,
    done: Vec<PartialCell>,
    tasks: Vec<LiftingTask>,
    stacks: usize,
    warnings: Vec<String>,
}

impl<'a> SectorLift<'a> {
    fn new(projection: &'a ProjectionFactorSet, seeds: Vec<PartialCell>) -> Self {
        let n = projection.nvars();
        let (done, work) = seeds.into_iter().partition(|c| c.index.len() == n);
        SectorLift { projection, work, done, tasks: Vec::new(), stacks: 0, warnings: Vec::new() }
    }

    /// Lifting from scratch: the root of the cell tree.
    pub fn start(projection: &'a ProjectionFactorSet) -> Self {
        SectorLift::new(projection, vec![PartialCell::root()])
    }

    pub fn is_done(&self) -> bool {
        self.work.is_empty()
    }

    pub fn stacks_lifted(&self) -> usize {
        self.stacks
    }

    /// Lifts one stack. Returns `false` once nothing is left.
    pub fn step(&mut self) -> Result<bool, CadError> {
        let Some(c) = self.work.pop() else {
            return Ok(false);
        };
        let n = self.projection.nvars();
        let level = c.index.len() + 1;
        let stack = lift_stack(&c.sample, &self.projection.levels[level - 1], index_dimension(&c.index))?;
        self.stacks += 1;
        note_drops(&stack, level, &c.index, &mut self.warnings);
        let vanishing = stack_vanishing(&c.vanishing, level, &stack.nullified);
        for (i, s) in stack.sector_samples.iter().enumerate().rev() {
            let child = child(&c, 2 * i as u32 + 1, Coordinate::Rational(s.clone()), vanishing.clone());
            route(child, n, &mut self.work, &mut self.done);
        }
        if !stack.sections.is_empty() {
            self.tasks.push(LiftingTask {
                base_index: c.index,
                base_sample: c.sample,
                level,
                sections: stack.sections,
                owners: stack.owners,
                vanishing,
            });
        }
        Ok(!self.work.is_empty())
    }

    pub fn run(mut self) -> Result<Self, CadError> {
        while self.step()? {}
        Ok(self)
    }

    /// Finishes a completed lift into a 1-layered decomposition.
    pub fn into_cad(self, order: &VariableOrder, inputs: Vec<Polynomial>) -> Cad {
        assert!(self.is_done(), "lift still has work");
        let mut warnings = self.projection.warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>();
        warnings.extend(self.warnings);
        let cells = finish_cells(self.done, &inputs, self.projection);
        Cad {
            order: order.clone(),
            projection: self.projection.clone(),
            inputs,
            cells,
            pending: self.tasks,
            stacks_lifted: self.stacks,
            warnings,
        }
    }
}

/// Full-dimensional cells only, with rational samples, plus the pending
/// tasks for everything else.
pub fn one_layered(ps: &[Polynomial], order: &VariableOrder) -> Result<Cad, CadError> {
    let (projection, inputs) = prepare(ps, order)?;
    let lift = SectorLift::start(&projection).run()?;
    Ok(lift.into_cad(order, inputs))
}

/// Evaluates all pending tasks of `cad`.
pub fn extend_layer(cad: &mut Cad) -> Result<(), CadError> {
    if cad.pending.is_empty() {
        return Err(CadError::NothingToExtend);
    }
    let tasks = std::mem::take(&mut cad.pending);
    let mut seeds = Vec::new();
    for task in tasks {
        for (i, r) in task.sections.iter().enumerate() {
            let mut index = task.base_index.clone();
            index.push(2 * i as u32 + 2);
            let mut sample = task.base_sample.clone();
            sample.push(r.to_coordinate());
            let vanishing = with_owners(&task.vanishing, task.level, &task.owners[i]);
            seeds.push(PartialCell { index, sample, vanishing });
        }
    }
    seeds.reverse();
    let lift = SectorLift::new(&cad.projection, seeds).run()?;
    let SectorLift { done, tasks, stacks, warnings, .. } = lift;
    cad.stacks_lifted += stacks;
    cad.warnings.extend(warnings);
    cad.cells.extend(finish_cells(done, &cad.inputs, &cad.projection));
    cad.cells.sort_by(|a, b| a.index.cmp(&b.index));
    cad.pending = tasks;
    Ok(())
}

/// ℓ-layered sub-decomposition: cells of the top `layers` dimensions.
pub fn layered(ps: &[Polynomial], order: &VariableOrder, layers: usize) -> Result<Cad, CadError> {
    let mut cad = one_layered(ps, order)?;
    for _ in 1..layers {
        if cad.pending.is_empty() {
            break;
        }
        extend_layer(&mut cad)?;
    }
    Ok(cad)
}

/// Completes a layered decomposition in place.
pub fn complete(cad: &mut Cad) -> Result<(), CadError> {
    while !cad.pending.is_empty() {
        extend_layer(cad)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests;
