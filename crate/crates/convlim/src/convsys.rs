//! Convolution systems, their morphisms, flow systems, and the semigroup
//! constructors.
//!
//! A convolution system assigns a finite probability space to every interval
//! `(s,t)` and a multiplication morphism `Omega(r,s) x Omega(s,t) ->
//! Omega(r,t)` to every triple, associative up to null sets. Systems are
//! stored densely; the time sets are small and exhaustive verification is
//! the point.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::error::Error;
use crate::finprob::{
    atoms, convolve_weights, FinProbSpace, ProbMorphism, ProductShape, Rat,
};
use crate::order::{Partition, TimeSet};
use crate::report::Report;

/// A finite semigroup given by a total multiplication table. Associativity
/// is checked exhaustively at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemigroup {
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
}

impl FiniteSemigroup {
    pub fn new<S: Into<String>>(
        elements: impl IntoIterator<Item = S>,
        table: Vec<Vec<usize>>,
    ) -> Result<Self, Error> {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let n = elements.len();
        if n == 0 {
            return Err(Error::Semigroup("a semigroup needs at least one element".into()));
        }
        for (i, e) in elements.iter().enumerate() {
            if elements[i + 1..].contains(e) {
                return Err(Error::Semigroup(format!("duplicate element {e:?}")));
            }
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::Semigroup(format!("multiplication table must be {n}x{n}")));
        }
        if let Some(&bad) = table.iter().flatten().find(|&&v| v >= n) {
            return Err(Error::Semigroup(format!("table entry {bad} out of range")));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Semigroup(format!(
                            "non-associative triple ({}, {}, {})",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }
        Ok(FiniteSemigroup { elements, table })
    }

    /// The cyclic group Z/m with elements "0".."m-1".
    pub fn cyclic(m: usize) -> Self {
        let elements: Vec<String> = (0..m).map(|i| i.to_string()).collect();
        let table = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
        FiniteSemigroup { elements, table }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// Convolution of two weight vectors: pushforward of the product measure
    /// by the semigroup operation.
    pub fn convolve(&self, mu: &[Rat], nu: &[Rat]) -> Vec<Rat> {
        convolve_weights(mu, nu, |a, b| self.op(a, b))
    }

    /// n-fold convolution power (n >= 1).
    pub fn convolution_power(&self, nu: &[Rat], n: u64) -> Vec<Rat> {
        assert!(n >= 1, "convolution power needs n >= 1");
        let mut acc = nu.to_vec();
        for _ in 1..n {
            acc = self.convolve(&acc, nu);
        }
        acc
    }
}

/// The multiplication morphism of the semigroup acting on the product of two
/// copies of a space over the same element set.
fn semigroup_mult(
    sg: &FiniteSemigroup,
    left: &Arc<FinProbSpace>,
    right: &Arc<FinProbSpace>,
    target: &Arc<FinProbSpace>,
) -> Result<ProbMorphism, Error> {
    let domain = FinProbSpace::product(&[Arc::clone(left), Arc::clone(right)])?;
    let n = sg.len();
    let shape = ProductShape::new(vec![n, n]);
    let map = (0..shape.total())
        .map(|idx| {
            let c = shape.decode(idx);
            sg.op(c[0], c[1])
        })
        .collect();
    ProbMorphism::new(domain, Arc::clone(target), map)
}

/// A convolution system over a finite linearly ordered time set.
#[derive(Debug)]
pub struct ConvolutionSystem {
    times: Arc<TimeSet>,
    spaces: BTreeMap<(usize, usize), Arc<FinProbSpace>>,
    mults: BTreeMap<(usize, usize, usize), ProbMorphism>,
    partition_cache: Mutex<HashMap<Vec<usize>, Arc<FinProbSpace>>>,
}

impl Clone for ConvolutionSystem {
    fn clone(&self) -> Self {
        ConvolutionSystem {
            times: Arc::clone(&self.times),
            spaces: self.spaces.clone(),
            mults: self.mults.clone(),
            partition_cache: Mutex::new(HashMap::new()),
        }
    }
}

impl ConvolutionSystem {
    /// Assembles a system from explicit parts. Structural totality is
    /// enforced here; the probabilistic axioms are checked by
    /// [`check_system`], which reports witnesses instead of failing.
    pub fn from_parts(
        times: Arc<TimeSet>,
        spaces: BTreeMap<(usize, usize), Arc<FinProbSpace>>,
        mults: BTreeMap<(usize, usize, usize), ProbMorphism>,
    ) -> Result<Arc<Self>, Error> {
        let n = times.len();
        for s in 0..n {
            for t in s + 1..n {
                if !spaces.contains_key(&(s, t)) {
                    return Err(Error::System(format!(
                        "missing space for interval ({}, {})",
                        times.label(s),
                        times.label(t)
                    )));
                }
            }
        }
        for r in 0..n {
            for s in r + 1..n {
                for t in s + 1..n {
                    let m = mults.get(&(r, s, t)).ok_or_else(|| {
                        Error::System(format!(
                            "missing multiplication for triple ({}, {}, {})",
                            times.label(r),
                            times.label(s),
                            times.label(t)
                        ))
                    })?;
                    let expect = spaces[&(r, s)].len() * spaces[&(s, t)].len();
                    if m.domain().len() != expect || m.codomain().len() != spaces[&(r, t)].len() {
                        return Err(Error::System(format!(
                            "multiplication ({}, {}, {}) has wrong shape",
                            times.label(r),
                            times.label(s),
                            times.label(t)
                        )));
                    }
                }
            }
        }
        Ok(Arc::new(ConvolutionSystem {
            times,
            spaces,
            mults,
            partition_cache: Mutex::new(HashMap::new()),
        }))
    }

    /// Trivial system of an idempotent measure: every interval carries
    /// `(S, mu)` and every multiplication is the semigroup operation.
    pub fn from_idempotent(
        sg: &FiniteSemigroup,
        mu: Vec<Rat>,
        times: Arc<TimeSet>,
    ) -> Result<Arc<Self>, Error> {
        let square = sg.convolve(&mu, &mu);
        if square != mu {
            let bad = (0..sg.len()).find(|&i| square[i] != mu[i]).unwrap();
            return Err(Error::Semigroup(format!(
                "measure is not idempotent: (mu*mu)({e}) != mu({e})",
                e = sg.elements()[bad]
            )));
        }
        let space = FinProbSpace::new(sg.elements().to_vec(), mu)?;
        let n = times.len();
        let mut spaces = BTreeMap::new();
        for s in 0..n {
            for t in s + 1..n {
                spaces.insert((s, t), Arc::clone(&space));
            }
        }
        let mut mults = BTreeMap::new();
        for r in 0..n {
            for s in r + 1..n {
                for t in s + 1..n {
                    mults.insert((r, s, t), semigroup_mult(sg, &space, &space, &space)?);
                }
            }
        }
        ConvolutionSystem::from_parts(times, spaces, mults)
    }

    /// System generated by convolution powers of `nu`: the measure on
    /// `(s,t)` is `nu` convolved with itself `pos(t) - pos(s)` times, where
    /// positions are the integer values of the time labels.
    pub fn from_semigroup_generator(
        sg: &FiniteSemigroup,
        nu: Vec<Rat>,
        times: Arc<TimeSet>,
    ) -> Result<Arc<Self>, Error> {
        let positions = times.integer_positions()?;
        // Validate nu as a probability vector once.
        FinProbSpace::new(sg.elements().to_vec(), nu.clone())?;
        let n = times.len();
        let mut spaces: BTreeMap<(usize, usize), Arc<FinProbSpace>> = BTreeMap::new();
        for s in 0..n {
            for t in s + 1..n {
                let gap = (positions[t] - positions[s]) as u64;
                let weights = sg.convolution_power(&nu, gap);
                spaces.insert((s, t), FinProbSpace::new(sg.elements().to_vec(), weights)?);
            }
        }
        let mut mults = BTreeMap::new();
        for r in 0..n {
            for s in r + 1..n {
                for t in s + 1..n {
                    mults.insert(
                        (r, s, t),
                        semigroup_mult(sg, &spaces[&(r, s)], &spaces[&(s, t)], &spaces[&(r, t)])?,
                    );
                }
            }
        }
        ConvolutionSystem::from_parts(times, spaces, mults)
    }

    pub fn times(&self) -> &Arc<TimeSet> {
        &self.times
    }

    pub fn space(&self, s: usize, t: usize) -> &Arc<FinProbSpace> {
        &self.spaces[&(s, t)]
    }

    pub fn mult(&self, r: usize, s: usize, t: usize) -> &ProbMorphism {
        &self.mults[&(r, s, t)]
    }

    pub fn spaces(&self) -> &BTreeMap<(usize, usize), Arc<FinProbSpace>> {
        &self.spaces
    }

    pub fn mults(&self) -> &BTreeMap<(usize, usize, usize), ProbMorphism> {
        &self.mults
    }

    /// A copy with one multiplication table entry redirected; used by
    /// mutation testing.
    pub fn with_mult_entry(
        &self,
        triple: (usize, usize, usize),
        at: usize,
        to: usize,
    ) -> Result<Arc<Self>, Error> {
        let mut copy = self.clone();
        let m = copy
            .mults
            .get_mut(&triple)
            .ok_or_else(|| Error::System(format!("no multiplication for {triple:?}")))?;
        let mut map = m.map().to_vec();
        if at >= map.len() || to >= m.codomain().len() {
            return Err(Error::System("mutation index out of range".into()));
        }
        map[at] = to;
        *m = ProbMorphism::new(Arc::clone(m.domain()), Arc::clone(m.codomain()), map)?;
        Ok(Arc::new(copy))
    }

    /// The product space over the adjacent cells of a partition, cached.
    pub fn partition_space(&self, partition: &Partition) -> Arc<FinProbSpace> {
        let key = partition.points().to_vec();
        if let Some(found) = self.partition_cache.lock().unwrap().get(&key) {
            return Arc::clone(found);
        }
        let components: Vec<Arc<FinProbSpace>> = partition
            .cells()
            .map(|(a, b)| Arc::clone(self.space(a, b)))
            .collect();
        let space = FinProbSpace::product(&components).expect("partition has at least one cell");
        self.partition_cache
            .lock()
            .unwrap()
            .insert(key, Arc::clone(&space));
        space
    }
}

/// Verifies the convolution-system axioms: every multiplication is
/// measure-preserving and the associativity square commutes up to null sets
/// for every quadruple `r < s < t < u`.
pub fn check_system(sys: &ConvolutionSystem) -> Report {
    let started = std::time::Instant::now();
    let mut report = Report::new("axioms");
    let n = sys.times().len();
    let label = |i: usize| sys.times().label(i);

    for r in 0..n {
        for s in r + 1..n {
            for t in s + 1..n {
                let m = sys.mult(r, s, t);
                let name = format!("measure-preserving({},{},{})", label(r), label(s), label(t));
                if m.is_measure_preserving() {
                    report.push(name, Ok(()));
                } else {
                    report.push(
                        name,
                        Err(format!(
                            "pushforward of mu({},{}) x mu({},{}) differs from mu({},{})",
                            label(r),
                            label(s),
                            label(s),
                            label(t),
                            label(r),
                            label(t)
                        )),
                    );
                }
            }
        }
    }

    for r in 0..n {
        for s in r + 1..n {
            for t in s + 1..n {
                for u in t + 1..n {
                    let name = format!(
                        "associativity({},{},{},{})",
                        label(r),
                        label(s),
                        label(t),
                        label(u)
                    );
                    report.push(name, associativity_square(sys, r, s, t, u));
                }
            }
        }
    }

    report.sort();
    report.elapsed_ms = started.elapsed().as_millis();
    report
}

fn associativity_square(
    sys: &ConvolutionSystem,
    r: usize,
    s: usize,
    t: usize,
    u: usize,
) -> Result<(), String> {
    let id_rs = ProbMorphism::identity(sys.space(r, s));
    let id_tu = ProbMorphism::identity(sys.space(t, u));
    let via_rt = ProbMorphism::product(&[sys.mult(r, s, t), &id_tu])
        .and_then(|m| m.then(sys.mult(r, t, u)))
        .map_err(|e| e.to_string())?;
    let via_su = ProbMorphism::product(&[&id_rs, sys.mult(s, t, u)])
        .and_then(|m| m.then(sys.mult(r, s, u)))
        .map_err(|e| e.to_string())?;
    match via_rt.first_ae_difference(&via_su) {
        None => Ok(()),
        Some(x) => Err(format!(
            "routes differ at point {} of Omega({},{}) x Omega({},{}) x Omega({},{})",
            via_rt.domain().outcome(x),
            sys.times().label(r),
            sys.times().label(s),
            sys.times().label(s),
            sys.times().label(t),
            sys.times().label(t),
            sys.times().label(u)
        )),
    }
}

/// A morphism of convolution systems over a shared time set.
#[derive(Debug, Clone)]
pub struct SystemMorphism {
    pub source: Arc<ConvolutionSystem>,
    pub target: Arc<ConvolutionSystem>,
    pub components: BTreeMap<(usize, usize), ProbMorphism>,
}

impl SystemMorphism {
    pub fn identity(sys: &Arc<ConvolutionSystem>) -> Self {
        let components = sys
            .spaces()
            .iter()
            .map(|(&k, space)| (k, ProbMorphism::identity(space)))
            .collect();
        SystemMorphism {
            source: Arc::clone(sys),
            target: Arc::clone(sys),
            components,
        }
    }

    pub fn component(&self, s: usize, t: usize) -> &ProbMorphism {
        &self.components[&(s, t)]
    }

    /// Componentwise composition `self` then `other`.
    pub fn then(&self, other: &SystemMorphism) -> Result<SystemMorphism, Error> {
        let mut components = BTreeMap::new();
        for (&k, m) in &self.components {
            components.insert(k, m.then(other.component(k.0, k.1))?);
        }
        Ok(SystemMorphism {
            source: Arc::clone(&self.source),
            target: Arc::clone(&other.target),
            components,
        })
    }
}

/// Verifies the morphism square `theta(r,t) . T = T' . (theta(r,s) x
/// theta(s,t))` up to null sets, for every triple.
pub fn check_system_morphism(m: &SystemMorphism) -> Report {
    let started = std::time::Instant::now();
    let mut report = Report::new("morphism");
    let times = m.source.times();
    let n = times.len();
    if m.target.times() != times {
        report.push("shared-time-set", Err("source and target time sets differ".into()));
    }
    for r in 0..n {
        for s in r + 1..n {
            for t in s + 1..n {
                let name = format!(
                    "square({},{},{})",
                    times.label(r),
                    times.label(s),
                    times.label(t)
                );
                let outcome = (|| -> Result<Result<(), String>, Error> {
                    let lhs = m.source.mult(r, s, t).then(m.component(r, t))?;
                    let rhs = ProbMorphism::product(&[m.component(r, s), m.component(s, t)])?
                        .then(m.target.mult(r, s, t))?;
                    Ok(match lhs.first_ae_difference(&rhs) {
                        None => Ok(()),
                        Some(x) => Err(format!(
                            "square differs at point {}",
                            lhs.domain().outcome(x)
                        )),
                    })
                })();
                match outcome {
                    Ok(verdict) => report.push(name, verdict),
                    Err(e) => report.push(name, Err(e.to_string())),
                }
            }
        }
    }
    report.sort();
    report.elapsed_ms = started.elapsed().as_millis();
    report
}

/// A flow system: one base probability space with interval-indexed increment
/// variables compatible with the system's multiplication.
#[derive(Debug, Clone)]
pub struct FlowSystem {
    pub base: Arc<FinProbSpace>,
    pub system: Arc<ConvolutionSystem>,
    pub increments: BTreeMap<(usize, usize), ProbMorphism>,
}

impl FlowSystem {
    pub fn increment(&self, s: usize, t: usize) -> &ProbMorphism {
        &self.increments[&(s, t)]
    }
}

/// Verifies the three flow axioms: the increments generate the full
/// sigma-field on the support, consecutive increments along every increasing
/// chain are independent, and increments compose under the multiplication.
pub fn check_flow(flow: &FlowSystem) -> Report {
    let started = std::time::Instant::now();
    let mut report = Report::new("flow");
    let times = flow.system.times();
    let n = times.len();

    for (&(s, t), m) in &flow.increments {
        let name = format!("increment-measure-preserving({},{})", times.label(s), times.label(t));
        if m.is_measure_preserving() {
            report.push(name, Ok(()));
        } else {
            report.push(name, Err("law of the increment differs from mu".into()));
        }
    }

    // Condition 1: the joint fibers of all increments separate the support.
    let all: Vec<&ProbMorphism> = flow.increments.values().collect();
    let a = atoms(&flow.base, &all);
    if a.separates_support(&flow.base) {
        report.push("generates-sigma-field", Ok(()));
    } else {
        let bad = a
            .blocks()
            .iter()
            .find(|b| b.iter().filter(|&&x| !flow.base.weight(x).is_zero()).count() > 1)
            .unwrap();
        report.push(
            "generates-sigma-field",
            Err(format!(
                "outcomes {} and {} are not separated by any increment",
                flow.base.outcome(bad[0]),
                flow.base.outcome(bad[1])
            )),
        );
    }

    // Condition 2: independence of consecutive increments, for every
    // increasing chain of at least three times.
    for mask in 0u64..(1 << n) {
        if mask.count_ones() < 3 {
            continue;
        }
        let chain: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let incs: Vec<&ProbMorphism> = chain
            .windows(2)
            .map(|w| flow.increment(w[0], w[1]))
            .collect();
        let chain_labels: Vec<&str> = chain.iter().map(|&i| times.label(i)).collect();
        let name = format!("independence({})", chain_labels.join("<"));
        match crate::finprob::first_dependence_witness(&flow.base, &incs) {
            None => report.push(name, Ok(())),
            Some(cell) => {
                let targets: Vec<String> = cell
                    .iter()
                    .zip(&incs)
                    .map(|(&c, m)| m.codomain().outcome(c).to_string())
                    .collect();
                report.push(
                    name,
                    Err(format!("joint cell ({}) violates independence", targets.join(", "))),
                );
            }
        }
    }

    // Condition 3: increments compose under the multiplication.
    for r in 0..n {
        for s in r + 1..n {
            for t in s + 1..n {
                let name = format!(
                    "composition({},{},{})",
                    times.label(r),
                    times.label(s),
                    times.label(t)
                );
                let outcome = (|| -> Result<Result<(), String>, Error> {
                    let paired = pair_into_product(
                        &flow.base,
                        flow.increment(r, s),
                        flow.increment(s, t),
                    )?;
                    let composed = paired.then(flow.system.mult(r, s, t))?;
                    Ok(match composed.first_ae_difference(flow.increment(r, t)) {
                        None => Ok(()),
                        Some(x) => Err(format!(
                            "X({},{}) differs from T(X,X) at base point {}",
                            times.label(r),
                            times.label(t),
                            flow.base.outcome(x)
                        )),
                    })
                })();
                match outcome {
                    Ok(verdict) => report.push(name, verdict),
                    Err(e) => report.push(name, Err(e.to_string())),
                }
            }
        }
    }

    report.sort();
    report.elapsed_ms = started.elapsed().as_millis();
    report
}

/// The pairing `omega -> (f(omega), g(omega))` into the row-major product of
/// the two codomains.
pub fn pair_into_product(
    base: &Arc<FinProbSpace>,
    f: &ProbMorphism,
    g: &ProbMorphism,
) -> Result<ProbMorphism, Error> {
    let codomain = FinProbSpace::product(&[Arc::clone(f.codomain()), Arc::clone(g.codomain())])?;
    let shape = ProductShape::new(vec![f.codomain().len(), g.codomain().len()]);
    let map = (0..base.len())
        .map(|x| shape.encode(&[f.apply(x), g.apply(x)]))
        .collect();
    ProbMorphism::new(Arc::clone(base), codomain, map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finprob::rat;
    use crate::order::TimeSet;

    use crate::fixtures::{fixture_a, fixture_b};

    #[test]
    fn semigroup_rejects_non_associative_tables() {
        // 3-element magma with a broken triple
        let table = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        assert!(FiniteSemigroup::new(["a", "b", "c"], table).is_ok());
        let broken = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 2]];
        let err = FiniteSemigroup::new(["a", "b", "c"], broken).unwrap_err();
        assert!(err.to_string().contains("non-associative"));
    }

    #[test]
    fn convolve_examples() {
        let z3 = FiniteSemigroup::cyclic(3);
        let nu = vec![rat(1, 2), rat(1, 2), rat(0, 1)];
        assert_eq!(z3.convolve(&nu, &nu), vec![rat(1, 4), rat(1, 2), rat(1, 4)]);

        let z4 = FiniteSemigroup::cyclic(4);
        let u = vec![rat(1, 4); 4];
        assert_eq!(z4.convolve(&u, &u), u);

        // delta_a * delta_b = delta_{ab}
        let da = vec![rat(1, 1), rat(0, 1), rat(0, 1)];
        let db = vec![rat(0, 1), rat(1, 1), rat(0, 1)];
        assert_eq!(z3.convolve(&da, &db), db);
    }

    #[test]
    fn fixture_a_passes_axioms() {
        let report = check_system(&fixture_a());
        assert!(report.all_pass(), "{}", report.human_summary());
    }

    #[test]
    fn fixture_b_has_convolution_power_measures() {
        let sys = fixture_b();
        assert_eq!(
            sys.space(0, 2).weights(),
            &[rat(1, 4), rat(1, 2), rat(1, 4)]
        );
        let report = check_system(&sys);
        assert!(report.all_pass(), "{}", report.human_summary());
    }

    #[test]
    fn one_point_spaces_pass_axioms() {
        let times = TimeSet::new(["0", "1", "2"]).unwrap();
        let sg = FiniteSemigroup::new(["e"], vec![vec![0]]).unwrap();
        let sys = ConvolutionSystem::from_idempotent(&sg, vec![rat(1, 1)], times).unwrap();
        assert!(check_system(&sys).all_pass());
    }

    #[test]
    fn non_idempotent_measure_is_rejected_with_element() {
        let times = TimeSet::new(["0", "1"]).unwrap();
        let sg = FiniteSemigroup::cyclic(2);
        let err = ConvolutionSystem::from_idempotent(&sg, vec![rat(1, 1), rat(0, 1)], times.clone());
        assert!(err.is_ok(), "delta at identity is idempotent");
        let err =
            ConvolutionSystem::from_idempotent(&sg, vec![rat(1, 4), rat(3, 4)], times).unwrap_err();
        assert!(err.to_string().contains("not idempotent"));
    }

    #[test]
    fn generator_delta_identity_gives_delta_everywhere() {
        let times = TimeSet::new(["0", "1", "2"]).unwrap();
        let sg = FiniteSemigroup::cyclic(2);
        let sys =
            ConvolutionSystem::from_semigroup_generator(&sg, vec![rat(1, 1), rat(0, 1)], times)
                .unwrap();
        for (_, space) in sys.spaces() {
            assert_eq!(space.weights(), &[rat(1, 1), rat(0, 1)]);
        }
    }

    #[test]
    fn generator_delta_one_on_z2_gives_delta_zero_over_two_steps() {
        let times = TimeSet::new(["0", "1", "2"]).unwrap();
        let sg = FiniteSemigroup::cyclic(2);
        let sys =
            ConvolutionSystem::from_semigroup_generator(&sg, vec![rat(0, 1), rat(1, 1)], times)
                .unwrap();
        assert_eq!(sys.space(0, 2).weights(), &[rat(1, 1), rat(0, 1)]);
    }

    #[test]
    fn corrupting_a_mult_is_detected_with_witness() {
        let sys = fixture_a();
        // constant map destroys measure preservation
        let mut corrupted = (*sys).clone();
        let m = corrupted.mults.get_mut(&(0, 1, 2)).unwrap();
        *m = ProbMorphism::new(
            Arc::clone(m.domain()),
            Arc::clone(m.codomain()),
            vec![0; m.domain().len()],
        )
        .unwrap();
        let report = check_system(&corrupted);
        assert!(!report.all_pass());
        let failure = report.first_failure().unwrap();
        assert!(failure.witness.is_some());
    }

    #[test]
    fn identity_morphism_passes_and_shifted_fails() {
        let sys = fixture_a();
        assert!(check_system_morphism(&SystemMorphism::identity(&sys)).all_pass());

        // theta(x) = x + 1 is not multiplicative on Z/2
        let shift = |space: &Arc<FinProbSpace>| {
            ProbMorphism::new(Arc::clone(space), Arc::clone(space), vec![1, 0]).unwrap()
        };
        let components = sys
            .spaces()
            .iter()
            .map(|(&k, s)| (k, shift(s)))
            .collect();
        let theta = SystemMorphism {
            source: Arc::clone(&sys),
            target: Arc::clone(&sys),
            components,
        };
        let report = check_system_morphism(&theta);
        assert!(!report.all_pass());
        assert!(report.first_failure().unwrap().witness.is_some());
    }

    #[test]
    fn mod2_reduction_is_a_system_morphism() {
        let times = TimeSet::new(["0", "1", "2"]).unwrap();
        let z4 = FiniteSemigroup::cyclic(4);
        let z2 = FiniteSemigroup::cyclic(2);
        let src =
            ConvolutionSystem::from_idempotent(&z4, vec![rat(1, 4); 4], times.clone()).unwrap();
        let dst = ConvolutionSystem::from_idempotent(&z2, vec![rat(1, 2); 2], times).unwrap();
        let components = src
            .spaces()
            .iter()
            .map(|(&k, s)| {
                let m = ProbMorphism::new(
                    Arc::clone(s),
                    Arc::clone(dst.space(k.0, k.1)),
                    vec![0, 1, 0, 1],
                )
                .unwrap();
                (k, m)
            })
            .collect();
        let theta = SystemMorphism {
            source: src,
            target: dst,
            components,
        };
        let report = check_system_morphism(&theta);
        assert!(report.all_pass(), "{}", report.human_summary());
    }

    #[test]
    fn composite_of_system_morphisms_is_a_system_morphism() {
        let times = TimeSet::new(["0", "1", "2"]).unwrap();
        let z4 = FiniteSemigroup::cyclic(4);
        let z2 = FiniteSemigroup::cyclic(2);
        let top = ConvolutionSystem::from_idempotent(&z4, vec![rat(1, 4); 4], times.clone()).unwrap();
        let bot = ConvolutionSystem::from_idempotent(&z2, vec![rat(1, 2); 2], times.clone()).unwrap();
        let one = ConvolutionSystem::from_idempotent(
            &FiniteSemigroup::new(["e"], vec![vec![0]]).unwrap(),
            vec![rat(1, 1)],
            times,
        )
        .unwrap();
        let reduce = SystemMorphism {
            source: Arc::clone(&top),
            target: Arc::clone(&bot),
            components: top
                .spaces()
                .iter()
                .map(|(&k, s)| {
                    (
                        k,
                        ProbMorphism::new(
                            Arc::clone(s),
                            Arc::clone(bot.space(k.0, k.1)),
                            vec![0, 1, 0, 1],
                        )
                        .unwrap(),
                    )
                })
                .collect(),
        };
        let collapse = SystemMorphism {
            source: Arc::clone(&bot),
            target: Arc::clone(&one),
            components: bot
                .spaces()
                .iter()
                .map(|(&k, s)| {
                    (
                        k,
                        ProbMorphism::new(Arc::clone(s), Arc::clone(one.space(k.0, k.1)), vec![0, 0])
                            .unwrap(),
                    )
                })
                .collect(),
        };
        let composite = reduce.then(&collapse).unwrap();
        assert!(check_system_morphism(&composite).all_pass());
    }
}
