//! Partition-indexed connecting morphisms and finite projective limits.
//!
//! Two families are built over a convolution system: the interval family
//! `T(I,J)` over the poset of partitions of a fixed window, defined by the
//! right-peeling recursion, and the global family `X(I,J)` over all finite
//! subsets of the time set, defined by projecting onto the window part of
//! the refinement and then applying `T`. Both are projective systems; since
//! every poset here is finite with a maximum element, their limits are
//! materialized as the top space with the connecting morphisms as
//! projections.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::convsys::ConvolutionSystem;
use crate::error::Error;
use crate::finprob::{coordinate_projection, pushforward, FinProbSpace, ProbMorphism, Rat};
use crate::order::{enumerate_global, enumerate_window, full_grid, Partition, PairWindow};
use crate::report::Report;

/// The connecting morphism `Omega_J -> Omega_I` of the interval family,
/// built by the defining recursion: identity when `I = J`, the single
/// multiplication when `J` has one interior point, right-peeling of the last
/// interior point otherwise, and a blockwise product for non-trivial `I`.
pub fn build_t(
    interval: &Partition,
    refinement: &Partition,
    sys: &ConvolutionSystem,
) -> Result<ProbMorphism, Error> {
    if !interval.refines(refinement)? {
        return Err(Error::Order(format!(
            "{refinement} does not refine {interval} within the same window"
        )));
    }
    if interval == refinement {
        return Ok(ProbMorphism::identity(&sys.partition_space(interval)));
    }
    if interval.is_trivial() {
        return build_t_trivial(refinement, sys);
    }
    let blocks = interval.decompose_blocks(refinement)?;
    let factors: Vec<ProbMorphism> = interval
        .cells()
        .zip(&blocks)
        .map(|((a, b), block)| {
            let cell = Partition::new(interval.times(), vec![a, b])?;
            build_t(&cell, block, sys)
        })
        .collect::<Result<_, _>>()?;
    ProbMorphism::product(&factors.iter().collect::<Vec<_>>())
}

/// `T({s,t}, J)` for a trivial target: peel the rightmost interior point.
fn build_t_trivial(refinement: &Partition, sys: &ConvolutionSystem) -> Result<ProbMorphism, Error> {
    let pts = refinement.points();
    let interior = pts.len() - 2;
    match interior {
        0 => Ok(ProbMorphism::identity(&sys.partition_space(refinement))),
        1 => Ok(sys.mult(pts[0], pts[1], pts[2]).clone()),
        _ => {
            let j0 = pts[0];
            let jn = pts[pts.len() - 2];
            let jn1 = pts[pts.len() - 1];
            let peeled = Partition::new(refinement.times(), pts[..pts.len() - 1].to_vec())?;
            let inner = build_t_trivial(&peeled, sys)?;
            let id_last = ProbMorphism::identity(sys.space(jn, jn1));
            ProbMorphism::product(&[&inner, &id_last])?.then(sys.mult(j0, jn, jn1))
        }
    }
}

/// The connecting morphism `Omega_J -> Omega_I` of the global family:
/// coordinate projection onto the window part of the decomposition, followed
/// by `T`. Coincides with [`build_t`] when both partitions share a window.
pub fn build_x(
    subset: &Partition,
    refinement: &Partition,
    sys: &ConvolutionSystem,
) -> Result<ProbMorphism, Error> {
    if !subset.subset_of(refinement) {
        return Err(Error::Order(format!("{subset} is not a subset of {refinement}")));
    }
    if subset.window() == refinement.window() {
        return build_t(subset, refinement, sys);
    }
    let proj = window_projection(subset, refinement, sys)?;
    let d = subset.decompose_lcr(refinement)?;
    proj.then(&build_t(subset, &d.window, sys)?)
}

/// Coordinate projection `Omega_J -> Omega_{J window-part}` dropping the
/// cells of `J` outside the window of `subset`.
pub fn window_projection(
    subset: &Partition,
    refinement: &Partition,
    sys: &ConvolutionSystem,
) -> Result<ProbMorphism, Error> {
    let (s, t) = (subset.first(), subset.last());
    let components: Vec<Arc<FinProbSpace>> = refinement
        .cells()
        .map(|(a, b)| Arc::clone(sys.space(a, b)))
        .collect();
    let keep: Vec<usize> = refinement
        .cells()
        .enumerate()
        .filter(|(_, (a, b))| s <= *a && *b <= t)
        .map(|(k, _)| k)
        .collect();
    if keep.is_empty() {
        return Err(Error::Order(format!(
            "no cell of {refinement} lies inside the window of {subset}"
        )));
    }
    coordinate_projection(&components, &keep)
}

/// Which poset a connecting family is indexed by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// Partitions of one window `[s,t]`, connected by `T(I,J)`.
    IntervalT(PairWindow),
    /// All subsets of the time set of size >= 2, connected by `X(I,J)`.
    GlobalX,
}

/// A partition-indexed family of connecting morphisms over a finite poset
/// with maximum element.
#[derive(Debug, Clone)]
pub struct ConnectingFamily {
    system: Arc<ConvolutionSystem>,
    kind: FamilyKind,
    index: Vec<Partition>,
    morphisms: BTreeMap<(Vec<usize>, Vec<usize>), ProbMorphism>,
}

impl ConnectingFamily {
    /// The `T(I,J)` family over the partitions of `[s,t]`.
    pub fn interval(sys: &Arc<ConvolutionSystem>, s: usize, t: usize) -> Result<Self, Error> {
        let index = enumerate_window(sys.times(), s, t);
        let mut morphisms = BTreeMap::new();
        for j in &index {
            for i in &index {
                if i.refines(j)? {
                    morphisms.insert(
                        (i.points().to_vec(), j.points().to_vec()),
                        build_t(i, j, sys)?,
                    );
                }
            }
        }
        Ok(ConnectingFamily {
            system: Arc::clone(sys),
            kind: FamilyKind::IntervalT(PairWindow::new(s, t)),
            index,
            morphisms,
        })
    }

    /// The `X(I,J)` family over all subsets of the time set of size >= 2.
    pub fn global(sys: &Arc<ConvolutionSystem>) -> Result<Self, Error> {
        let index = enumerate_global(sys.times());
        let mut morphisms = BTreeMap::new();
        for j in &index {
            for i in &index {
                if i.subset_of(j) {
                    morphisms.insert(
                        (i.points().to_vec(), j.points().to_vec()),
                        build_x(i, j, sys)?,
                    );
                }
            }
        }
        Ok(ConnectingFamily {
            system: Arc::clone(sys),
            kind: FamilyKind::GlobalX,
            index,
            morphisms,
        })
    }

    pub fn system(&self) -> &Arc<ConvolutionSystem> {
        &self.system
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    /// Index partitions, coarsest first; the last one is the maximum.
    pub fn index(&self) -> &[Partition] {
        &self.index
    }

    pub fn top(&self) -> &Partition {
        self.index.last().expect("index is nonempty")
    }

    pub fn morphism(&self, i: &Partition, j: &Partition) -> Option<&ProbMorphism> {
        self.morphisms.get(&(i.points().to_vec(), j.points().to_vec()))
    }

    fn leq(&self, i: &Partition, j: &Partition) -> bool {
        match self.kind {
            FamilyKind::IntervalT(_) => i.refines(j).unwrap_or(false),
            FamilyKind::GlobalX => i.subset_of(j),
        }
    }

    /// A copy with one connecting morphism redirected at one point; used by
    /// mutation testing.
    pub fn with_corrupted(
        &self,
        i: &Partition,
        j: &Partition,
        at: usize,
        to: usize,
    ) -> Result<Self, Error> {
        let mut copy = self.clone();
        let key = (i.points().to_vec(), j.points().to_vec());
        let m = copy
            .morphisms
            .get_mut(&key)
            .ok_or_else(|| Error::Order(format!("no morphism for {i} <= {j}")))?;
        let mut map = m.map().to_vec();
        if at >= map.len() || to >= m.codomain().len() {
            return Err(Error::Order("mutation index out of range".into()));
        }
        map[at] = to;
        *m = ProbMorphism::new(Arc::clone(m.domain()), Arc::clone(m.codomain()), map)?;
        Ok(copy)
    }
}

/// Verifies that a connecting family is a projective system: identities on
/// diagonal pairs, measure preservation of every morphism, and the
/// compatibility relation over every chain `I <= J <= K`.
pub fn verify_projective(fam: &ConnectingFamily) -> Report {
    let started = std::time::Instant::now();
    let mut report = Report::new(match fam.kind {
        FamilyKind::IntervalT(_) => "partitions",
        FamilyKind::GlobalX => "global",
    });

    for i in fam.index() {
        let m = fam.morphism(i, i).expect("diagonal morphism exists");
        let id = ProbMorphism::identity(&fam.system.partition_space(i));
        report.push(
            format!("identity({i})"),
            if m.equal_ae(&id) {
                Ok(())
            } else {
                Err(format!("morphism({i},{i}) is not the identity"))
            },
        );
    }

    for ((ip, jp), m) in &fam.morphisms {
        if ip == jp {
            continue;
        }
        let i = Partition::new(fam.system.times(), ip.clone()).unwrap();
        let j = Partition::new(fam.system.times(), jp.clone()).unwrap();
        report.push(
            format!("measure-preserving({i},{j})"),
            if m.is_measure_preserving() {
                Ok(())
            } else {
                Err(format!("morphism({i},{j}) does not push mu_J to mu_I"))
            },
        );
    }

    for k in fam.index() {
        for j in fam.index() {
            if !fam.leq(j, k) {
                continue;
            }
            for i in fam.index() {
                if !fam.leq(i, j) {
                    continue;
                }
                let direct = fam.morphism(i, k).expect("chain morphism exists");
                let via = fam
                    .morphism(j, k)
                    .unwrap()
                    .then(fam.morphism(i, j).unwrap())
                    .expect("chain morphisms compose");
                let name = format!("chain({i} <= {j} <= {k})");
                match direct.first_ae_difference(&via) {
                    None => report.push(name, Ok(())),
                    Some(x) => report.push(
                        name,
                        Err(format!(
                            "compatibility fails at point {} of Omega_{k}",
                            direct.domain().outcome(x)
                        )),
                    ),
                }
            }
        }
    }

    report.sort();
    report.elapsed_ms = started.elapsed().as_millis();
    report
}

/// The finite projective limit of a connecting family: the top space with
/// the connecting morphisms out of it as canonical projections.
#[derive(Debug, Clone)]
pub struct FiniteProjectiveLimit {
    pub limit_space: Arc<FinProbSpace>,
    pub top: Partition,
    projections: BTreeMap<Vec<usize>, ProbMorphism>,
}

impl FiniteProjectiveLimit {
    pub fn projection(&self, i: &Partition) -> &ProbMorphism {
        &self.projections[&i.points().to_vec()]
    }
}

/// Materializes the projective limit over the finite poset with maximum:
/// the limit space is the top space and the projection onto `I` is the
/// connecting morphism from the top. Compatibility is re-verified.
pub fn finite_projective_limit(fam: &ConnectingFamily) -> Result<FiniteProjectiveLimit, Error> {
    let report = verify_projective(fam);
    if let Some(fail) = report.first_failure() {
        return Err(Error::System(format!(
            "family is not projective: {} ({})",
            fail.name,
            fail.witness.as_deref().unwrap_or("no witness")
        )));
    }
    let top = fam.top().clone();
    let limit_space = fam.system.partition_space(&top);
    let mut projections = BTreeMap::new();
    for i in fam.index() {
        projections.insert(i.points().to_vec(), fam.morphism(i, &top).unwrap().clone());
    }
    let limit = FiniteProjectiveLimit {
        limit_space,
        top,
        projections,
    };
    // Re-verify the defining relation of the projections.
    for j in fam.index() {
        for i in fam.index() {
            if !fam.leq(i, j) {
                continue;
            }
            let via = limit
                .projection(j)
                .then(fam.morphism(i, j).unwrap())
                .expect("projection composes");
            if !limit.projection(i).equal_ae(&via) {
                return Err(Error::System(format!(
                    "projection compatibility fails for {i} <= {j}"
                )));
            }
        }
    }
    Ok(limit)
}

/// Simple maximality at finite scale: every projection from the limit is
/// surjective onto the support of its codomain. Zero-mass outcomes that are
/// never hit do not count against surjectivity.
pub fn check_simply_maximal(fam: &ConnectingFamily) -> Result<bool, Error> {
    let limit = finite_projective_limit(fam)?;
    for i in fam.index() {
        let proj = limit.projection(i);
        let mut hit = vec![false; proj.codomain().len()];
        for x in proj.domain().support() {
            hit[proj.apply(x)] = true;
        }
        if proj.codomain().support().any(|y| !hit[y]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Set-level threads of a connecting family: one outcome index per index
/// partition, compatible under every connecting morphism. Intended as a
/// cross-check of the top-space realization on tiny instances; the thread
/// count grows with the product of all index spaces.
pub fn enumerate_threads(fam: &ConnectingFamily) -> Vec<BTreeMap<Vec<usize>, usize>> {
    let top = fam.top();
    let top_space = fam.system.partition_space(top);
    let mut threads = Vec::new();
    // Every thread is determined by its top coordinate: extend each top
    // outcome downward and keep it if the extension is consistent.
    'outer: for x in 0..top_space.len() {
        let mut thread = BTreeMap::new();
        for i in fam.index() {
            let xi = fam.morphism(i, top).unwrap().apply(x);
            thread.insert(i.points().to_vec(), xi);
        }
        // Consistency under all connecting maps, not only those out of top.
        for j in fam.index() {
            for i in fam.index() {
                if !fam.leq(i, j) {
                    continue;
                }
                let m = fam.morphism(i, j).unwrap();
                if m.apply(thread[j.points()]) != thread[i.points()] {
                    continue 'outer;
                }
            }
        }
        threads.push(thread);
    }
    threads
}

/// Standalone verification of the commutation of window projections with
/// the interval connecting morphisms: for partitions `J <= J~` of a common
/// window and any sub-window `[q,r]` with endpoints in `J`,
/// `proj(J -> J cap [q,r]) . T(J, J~) = T(J cap [q,r], J~ cap [q,r]) .
/// proj(J~ -> J~ cap [q,r])`. This is the pivot step in the proof that the
/// global family is projective.
pub fn verify_window_commutation(sys: &Arc<ConvolutionSystem>) -> Report {
    let started = std::time::Instant::now();
    let mut report = Report::new("window-commutation");
    let times = sys.times();
    let n = times.len();
    for s in 0..n {
        for t in s + 1..n {
            let index = enumerate_window(times, s, t);
            for jt in &index {
                for j in &index {
                    if !j.refines(jt).unwrap_or(false) {
                        continue;
                    }
                    let pts = j.points();
                    for (qi, &q) in pts.iter().enumerate() {
                        for &r in &pts[qi + 1..] {
                            let name = format!("commute(J={j};J~={jt};[{q},{r}])");
                            let outcome = (|| -> Result<Option<usize>, Error> {
                                let sub = Partition::new(times, vec![q, r])?;
                                let i_t = Partition::new(
                                    times,
                                    pts.iter().copied().filter(|&p| q <= p && p <= r).collect(),
                                )?;
                                let i_tp = Partition::new(
                                    times,
                                    jt.points()
                                        .iter()
                                        .copied()
                                        .filter(|&p| q <= p && p <= r)
                                        .collect(),
                                )?;
                                let lhs = build_t(j, jt, sys)?
                                    .then(&window_projection(&sub, j, sys)?)?;
                                let rhs = window_projection(&sub, jt, sys)?
                                    .then(&build_t(&i_t, &i_tp, sys)?)?;
                                Ok(lhs.first_ae_difference(&rhs))
                            })();
                            match outcome {
                                Ok(None) => report.push(name, Ok(())),
                                Ok(Some(x)) => report
                                    .push(name, Err(format!("sides differ at index {x} of Omega_J~"))),
                                Err(e) => report.push(name, Err(e.to_string())),
                            }
                        }
                    }
                }
            }
        }
    }
    report.sort();
    report.elapsed_ms = started.elapsed().as_millis();
    report
}

/// One level-crossing event of a refinement tower: the mass of
/// `X(window) in outcomes` must match the interval law exactly at every
/// level (the finite form of the cylinder consistency equation).
#[derive(Debug, Clone)]
pub struct CylinderEvent {
    /// Window endpoints as labels shared by all levels.
    pub from: String,
    pub to: String,
    /// Outcome labels of the window space.
    pub outcomes: Vec<String>,
}

/// An increasing chain of time sets, each carrying a system produced by the
/// same generating rule, plus a list of cylinder events to track.
#[derive(Debug, Clone)]
pub struct CylinderTower {
    pub levels: Vec<Arc<ConvolutionSystem>>,
    pub events: Vec<CylinderEvent>,
}

impl CylinderTower {
    fn validate(&self) -> Result<(), Error> {
        if self.levels.is_empty() {
            return Err(Error::System("tower has no levels".into()));
        }
        for w in self.levels.windows(2) {
            let coarse = w[0].times();
            let fine = w[1].times();
            let mut last = None;
            for l in coarse.labels() {
                let idx = fine.index_of(l).ok_or_else(|| {
                    Error::System(format!("level label {l:?} missing from the next level"))
                })?;
                if let Some(prev) = last {
                    if idx <= prev {
                        return Err(Error::System("level embedding is not order-preserving".into()));
                    }
                }
                last = Some(idx);
            }
        }
        Ok(())
    }
}

/// Evaluates both sides of the cylinder consistency equation for every event
/// at every level, and across each adjacent pair of levels through the
/// level-embedding connecting map. All equalities are exact.
pub fn tower_consistency(tower: &CylinderTower) -> Result<Report, Error> {
    tower.validate()?;
    let started = std::time::Instant::now();
    let mut report = Report::new("tower");

    // Event mass through the full-grid base of one level.
    let level_mass = |level: &Arc<ConvolutionSystem>, ev: &CylinderEvent| -> Result<Rat, Error> {
        let times = level.times();
        let s = times
            .index_of(&ev.from)
            .ok_or_else(|| Error::System(format!("event endpoint {:?} not in level", ev.from)))?;
        let t = times
            .index_of(&ev.to)
            .ok_or_else(|| Error::System(format!("event endpoint {:?} not in level", ev.to)))?;
        let top = full_grid(times, 0, times.len() - 1);
        let window = Partition::new(times, vec![s, t])?;
        let x = build_x(&window, &top, level)?;
        let base = level.partition_space(&top);
        let law = pushforward(x.map(), &base, x.codomain().len());
        let mut mass = Rat::from_integer(0.into());
        for o in &ev.outcomes {
            let idx = x
                .codomain()
                .index_of(o)
                .ok_or_else(|| Error::System(format!("event outcome {o:?} not in Omega({},{})", ev.from, ev.to)))?;
            mass += &law[idx];
        }
        Ok(mass)
    };

    for (e_idx, ev) in tower.events.iter().enumerate() {
        let mut expected: Option<Rat> = None;
        for (l_idx, level) in tower.levels.iter().enumerate() {
            if level.times().index_of(&ev.from).is_none()
                || level.times().index_of(&ev.to).is_none()
            {
                continue;
            }
            let mass = level_mass(level, ev)?;

            // Direct side of the consistency equation: the interval law.
            let times = level.times();
            let s = times.index_of(&ev.from).unwrap();
            let t = times.index_of(&ev.to).unwrap();
            let mut direct = Rat::from_integer(0.into());
            for o in &ev.outcomes {
                let idx = level.space(s, t).index_of(o).ok_or_else(|| {
                    Error::System(format!("event outcome {o:?} not in Omega({},{})", ev.from, ev.to))
                })?;
                direct += level.space(s, t).weight(idx);
            }
            let name = format!("event{e_idx}-level{l_idx}-matches-interval-law");
            report.push(
                name,
                if mass == direct {
                    Ok(())
                } else {
                    Err(format!(
                        "flow mass {} differs from interval law {}",
                        crate::finprob::rat_to_string(&mass),
                        crate::finprob::rat_to_string(&direct)
                    ))
                },
            );

            let name = format!("event{e_idx}-level{l_idx}-consistent-with-previous");
            match &expected {
                None => report.push(name, Ok(())),
                Some(prev) => report.push(
                    name,
                    if *prev == mass {
                        Ok(())
                    } else {
                        Err(format!(
                            "mass {} at this level, {} at the previous one",
                            crate::finprob::rat_to_string(&mass),
                            crate::finprob::rat_to_string(prev)
                        ))
                    },
                ),
            }
            expected = Some(mass);
        }
    }

    // Cross-level check through the embedding connecting map: pushing the
    // finer level's full-grid measure down to the coarser grid reproduces
    // the coarser measure exactly.
    for (l_idx, w) in tower.levels.windows(2).enumerate() {
        let coarse = &w[0];
        let fine = &w[1];
        let fine_times = fine.times();
        let coarse_in_fine: Vec<usize> = coarse
            .times()
            .labels()
            .iter()
            .map(|l| fine_times.index_of(l).unwrap())
            .collect();
        let coarse_part = Partition::new(fine_times, coarse_in_fine)?;
        let fine_top = full_grid(fine_times, 0, fine_times.len() - 1);
        let connecting = build_x(&coarse_part, &fine_top, fine)?;
        let fine_base = fine.partition_space(&fine_top);
        let pushed = pushforward(connecting.map(), &fine_base, connecting.codomain().len());
        let coarse_top = full_grid(coarse.times(), 0, coarse.times().len() - 1);
        let coarse_base = coarse.partition_space(&coarse_top);
        let name = format!("levels{l_idx}-{}-embedding-measure", l_idx + 1);
        if coarse_base.len() != connecting.codomain().len() {
            report.push(
                name,
                Err("levels do not share the generating rule (grid shapes differ)".into()),
            );
        } else {
            report.push(
                name,
                if pushed == coarse_base.weights() {
                    Ok(())
                } else {
                    Err("embedding pushforward differs from the coarser grid measure".into())
                },
            );
        }
    }

    report.sort();
    report.elapsed_ms = started.elapsed().as_millis();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finprob::rat;
    use crate::fixtures::{fixture_a, fixture_b};
    use crate::order::TimeSet;

    /// Independent oracle for the connecting morphisms of trivial targets:
    /// a plain left fold of the multiplications, associating from the left
    /// instead of peeling from the right.
    fn left_fold_oracle(
        interval: &Partition,
        refinement: &Partition,
        sys: &ConvolutionSystem,
    ) -> ProbMorphism {
        let blocks = interval.decompose_blocks(refinement).unwrap();
        let factors: Vec<ProbMorphism> = blocks
            .iter()
            .map(|block| {
                let pts = block.points();
                let mut acc = ProbMorphism::identity(sys.space(pts[0], pts[1]));
                for k in 1..pts.len() - 1 {
                    let id = ProbMorphism::identity(sys.space(pts[k], pts[k + 1]));
                    acc = ProbMorphism::product(&[&acc, &id])
                        .unwrap()
                        .then(sys.mult(pts[0], pts[k], pts[k + 1]))
                        .unwrap();
                }
                acc
            })
            .collect();
        ProbMorphism::product(&factors.iter().collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn build_t_matches_the_left_fold_oracle_on_fixtures() {
        for sys in [fixture_a(), fixture_b()] {
            let times = sys.times().clone();
            let n = times.len();
            for s in 0..n {
                for t in s + 1..n {
                    for j in enumerate_window(&times, s, t) {
                        for i in enumerate_window(&times, s, t) {
                            if !i.refines(&j).unwrap() {
                                continue;
                            }
                            let built = build_t(&i, &j, &sys).unwrap();
                            let oracle = left_fold_oracle(&i, &j, &sys);
                            assert!(
                                built.equal_ae(&oracle),
                                "I={i} J={j} differs from the left fold"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn build_t_base_cases() {
        let sys = fixture_a();
        let times = sys.times().clone();
        let grid = full_grid(&times, 0, 1);
        let same = build_t(&grid, &grid, &sys).unwrap();
        assert!(same.equal_ae(&ProbMorphism::identity(&sys.partition_space(&grid))));

        let i = Partition::new(&times, vec![0, 2]).unwrap();
        let j = Partition::new(&times, vec![0, 1, 2]).unwrap();
        assert!(build_t(&i, &j, &sys).unwrap().equal_ae(sys.mult(0, 1, 2)));

        assert!(build_t(&j, &i, &sys).is_err()); // not a refinement
    }

    #[test]
    fn build_x_projects_then_applies_t() {
        let sys = fixture_a();
        let times = sys.times().clone();
        let top = full_grid(&times, 0, 3);
        let i = Partition::new(&times, vec![1, 2]).unwrap();
        let x = build_x(&i, &top, &sys).unwrap();
        // X({1,2}, top) is the middle-coordinate projection of the grid.
        for idx in 0..sys.partition_space(&top).len() {
            let mid = (idx / 2) % 2;
            assert_eq!(x.apply(idx), mid);
        }

        // Same window: X = T.
        let j = full_grid(&times, 0, 2);
        let i02 = Partition::new(&times, vec![0, 2]).unwrap();
        let x = build_x(&i02, &j, &sys).unwrap();
        assert!(x.equal_ae(&build_t(&i02, &j, &sys).unwrap()));
    }

    #[test]
    fn both_families_verify_on_fixtures() {
        for sys in [fixture_a(), fixture_b()] {
            let n = sys.times().len();
            for s in 0..n {
                for t in s + 1..n {
                    let fam = ConnectingFamily::interval(&sys, s, t).unwrap();
                    let report = verify_projective(&fam);
                    assert!(report.all_pass(), "{}", report.human_summary());
                }
            }
            let fam = ConnectingFamily::global(&sys).unwrap();
            let report = verify_projective(&fam);
            assert!(report.all_pass(), "{}", report.human_summary());
        }
    }

    #[test]
    fn corrupted_connecting_map_is_detected() {
        let sys = fixture_a();
        let fam = ConnectingFamily::interval(&sys, 0, 2).unwrap();
        let times = sys.times().clone();
        let i = Partition::new(&times, vec![0, 2]).unwrap();
        let j = Partition::new(&times, vec![0, 1, 2]).unwrap();
        let bad = fam.with_corrupted(&i, &j, 0, 1).unwrap();
        let report = verify_projective(&bad);
        assert!(!report.all_pass());
        assert!(report.first_failure().unwrap().witness.is_some());
    }

    #[test]
    fn limit_projections_agree_with_thread_enumeration() {
        let sys = fixture_b();
        let fam = ConnectingFamily::global(&sys).unwrap();
        let limit = finite_projective_limit(&fam).unwrap();
        let threads = enumerate_threads(&fam);
        // Every top outcome extends to exactly one thread, and the thread's
        // coordinates are the projections.
        assert_eq!(threads.len(), limit.limit_space.len());
        for (x, thread) in threads.iter().enumerate() {
            for i in fam.index() {
                assert_eq!(thread[i.points()], limit.projection(i).apply(x));
            }
        }
    }

    #[test]
    fn fixtures_are_simply_maximal() {
        for sys in [fixture_a(), fixture_b()] {
            let n = sys.times().len();
            for s in 0..n {
                for t in s + 1..n {
                    let fam = ConnectingFamily::interval(&sys, s, t).unwrap();
                    assert!(check_simply_maximal(&fam).unwrap());
                }
            }
            assert!(check_simply_maximal(&ConnectingFamily::global(&sys).unwrap()).unwrap());
        }
    }

    #[test]
    fn window_commutation_holds_on_fixtures() {
        for sys in [fixture_a(), fixture_b()] {
            let report = verify_window_commutation(&sys);
            assert!(report.all_pass(), "{}", report.human_summary());
        }
    }

    #[test]
    fn tower_consistency_on_fixture_b_levels() {
        let times_coarse = TimeSet::new(["0", "2"]).unwrap();
        let times_fine = TimeSet::new(["0", "1", "2"]).unwrap();
        let sg = crate::convsys::FiniteSemigroup::cyclic(3);
        let nu = vec![rat(1, 2), rat(1, 2), rat(0, 1)];
        let coarse = crate::convsys::ConvolutionSystem::from_semigroup_generator(
            &sg,
            nu.clone(),
            times_coarse,
        )
        .unwrap();
        let fine =
            crate::convsys::ConvolutionSystem::from_semigroup_generator(&sg, nu, times_fine)
                .unwrap();
        let tower = CylinderTower {
            levels: vec![coarse, fine],
            events: vec![CylinderEvent {
                from: "0".into(),
                to: "2".into(),
                outcomes: vec!["1".into()],
            }],
        };
        let report = tower_consistency(&tower).unwrap();
        assert!(report.all_pass(), "{}", report.human_summary());
    }

    #[test]
    fn tower_rejects_non_nested_levels() {
        let t1 = TimeSet::new(["0", "3"]).unwrap();
        let t2 = TimeSet::new(["0", "1", "2"]).unwrap();
        let sg = crate::convsys::FiniteSemigroup::cyclic(2);
        let mu = vec![rat(1, 2), rat(1, 2)];
        let a = crate::convsys::ConvolutionSystem::from_idempotent(&sg, mu.clone(), t1).unwrap();
        let b = crate::convsys::ConvolutionSystem::from_idempotent(&sg, mu, t2).unwrap();
        let tower = CylinderTower {
            levels: vec![a, b],
            events: vec![],
        };
        assert!(tower_consistency(&tower).is_err());
    }
}
