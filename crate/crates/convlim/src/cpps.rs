//! The projective continuous product attached to a convolution system, the
//! flow system over the global grid, and the window-restriction maps.
//!
//! Every projective limit in sight is over a finite poset with a maximum,
//! so the limit spaces are materialized as full-grid products: the flat
//! space over `(s,t)` is the product of the interval spaces over the
//! adjacent cells of the full grid on `[s,t]`, and the flat multiplication
//! is tuple concatenation. That realization is forced up to isomorphism; it
//! is not assumed but re-verified against the defining identities.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::convsys::{check_system, ConvolutionSystem, FlowSystem, SystemMorphism};
use crate::error::Error;
use crate::finprob::{FinProbSpace, ProbMorphism};
use crate::order::{enumerate_window, full_grid, Partition, PairWindow};
use crate::projective::{build_t, build_x, window_projection, ConnectingFamily};
use crate::report::Report;

/// The projective CPPS of a convolution system, realized on full grids.
#[derive(Debug, Clone)]
pub struct ProjectiveCpps {
    /// The underlying system.
    pub base: Arc<ConvolutionSystem>,
    /// The flat system: full-grid spaces with concatenation multiplications.
    pub flat: Arc<ConvolutionSystem>,
    /// The canonical epimorphism onto the base system; its component over
    /// `(s,t)` is the connecting morphism from the full grid to the trivial
    /// partition.
    pub tau: SystemMorphism,
}

impl ProjectiveCpps {
    pub fn flat_space(&self, s: usize, t: usize) -> &Arc<FinProbSpace> {
        self.flat.space(s, t)
    }

    /// Canonical epi `T-flat_I` from the flat space over `I`'s window onto
    /// `Omega_I`.
    pub fn flat_epi(&self, partition: &Partition) -> Result<ProbMorphism, Error> {
        let grid = full_grid(self.base.times(), partition.first(), partition.last());
        build_t(partition, &grid, &self.base)
    }
}

/// Builds the projective CPPS: flat spaces are full-grid products and flat
/// multiplications are tuple concatenations, which in the row-major
/// realization are index identities.
pub fn build_cpps(sys: &Arc<ConvolutionSystem>) -> Result<ProjectiveCpps, Error> {
    let axioms = check_system(sys);
    if let Some(fail) = axioms.first_failure() {
        return Err(Error::System(format!(
            "system fails its axioms: {} ({})",
            fail.name,
            fail.witness.as_deref().unwrap_or("no witness")
        )));
    }
    let times = sys.times();
    let n = times.len();
    let mut spaces = BTreeMap::new();
    for s in 0..n {
        for t in s + 1..n {
            spaces.insert((s, t), sys.partition_space(&full_grid(times, s, t)));
        }
    }
    let mut mults = BTreeMap::new();
    for r in 0..n {
        for s in r + 1..n {
            for t in s + 1..n {
                let domain = FinProbSpace::product(&[
                    Arc::clone(&spaces[&(r, s)]),
                    Arc::clone(&spaces[&(s, t)]),
                ])?;
                let codomain = Arc::clone(&spaces[&(r, t)]);
                // Concatenation of grid tuples: row-major flattening makes
                // the index map the identity.
                let map = (0..domain.len()).collect();
                mults.insert((r, s, t), ProbMorphism::new(domain, codomain, map)?);
            }
        }
    }
    let flat = ConvolutionSystem::from_parts(Arc::clone(times), spaces, mults)?;
    let mut components = BTreeMap::new();
    for s in 0..n {
        for t in s + 1..n {
            let trivial = Partition::new(times, vec![s, t])?;
            components.insert((s, t), build_t(&trivial, &full_grid(times, s, t), sys)?);
        }
    }
    let tau = SystemMorphism {
        source: Arc::clone(&flat),
        target: Arc::clone(sys),
        components,
    };
    Ok(ProjectiveCpps {
        base: Arc::clone(sys),
        flat,
        tau,
    })
}

/// Verifies that the flat system is a CPPS: every flat multiplication is a
/// mod-0 isomorphism, the factorization identity holds for every partition
/// containing the midpoint, the three-fold factorization of the
/// associativity proof holds, and the flat system satisfies the
/// convolution-system axioms.
pub fn verify_cpps(c: &ProjectiveCpps) -> Report {
    let started = std::time::Instant::now();
    let mut report = Report::new("cpps");
    let times = c.base.times();
    let n = times.len();

    for r in 0..n {
        for s in r + 1..n {
            for t in s + 1..n {
                let name = format!(
                    "flat-mult-isomorphism({},{},{})",
                    times.label(r),
                    times.label(s),
                    times.label(t)
                );
                report.push(
                    name,
                    if c.flat.mult(r, s, t).is_isomorphism() {
                        Ok(())
                    } else {
                        Err("flat multiplication is not a mod-0 isomorphism".into())
                    },
                );
            }
        }
    }

    let mut axioms = check_system(&c.flat);
    for check in &mut axioms.checks {
        check.name = format!("flat-{}", check.name);
    }
    report.merge(axioms);

    // Factorization: T-flat_I . T-flat_{r,s,t} = T-flat_{I left of s} x
    // T-flat_{I right of s}, for every partition of [r,t] containing s.
    for r in 0..n {
        for s in r + 1..n {
            for t in s + 1..n {
                for i in enumerate_window(times, r, t) {
                    if !i.points().contains(&s) {
                        continue;
                    }
                    let name = format!(
                        "factorization({},{},{};I={i})",
                        times.label(r),
                        times.label(s),
                        times.label(t)
                    );
                    report.push(name, factorization_identity(c, r, s, t, &i));
                }
            }
        }
    }

    // Three-fold factorization used by the associativity argument.
    for r in 0..n {
        for s in r + 1..n {
            for t in s + 1..n {
                for u in t + 1..n {
                    for i in enumerate_window(times, r, u) {
                        if !i.points().contains(&s) || !i.points().contains(&t) {
                            continue;
                        }
                        let name = format!(
                            "threefold({},{},{},{};I={i})",
                            times.label(r),
                            times.label(s),
                            times.label(t),
                            times.label(u)
                        );
                        report.push(name, threefold_identity(c, r, s, t, u, &i));
                    }
                }
            }
        }
    }

    report.sort();
    report.elapsed_ms = started.elapsed().as_millis();
    report
}

fn split_at(partition: &Partition, mid: usize) -> Result<(Partition, Partition), Error> {
    let left: Vec<usize> = partition.points().iter().copied().filter(|&p| p <= mid).collect();
    let right: Vec<usize> = partition.points().iter().copied().filter(|&p| p >= mid).collect();
    Ok((
        Partition::new(partition.times(), left)?,
        Partition::new(partition.times(), right)?,
    ))
}

fn factorization_identity(
    c: &ProjectiveCpps,
    r: usize,
    s: usize,
    t: usize,
    i: &Partition,
) -> Result<(), String> {
    let run = || -> Result<Option<usize>, Error> {
        let lhs = c.flat.mult(r, s, t).then(&c.flat_epi(i)?)?;
        let (left, right) = split_at(i, s)?;
        let rhs = ProbMorphism::product(&[&c.flat_epi(&left)?, &c.flat_epi(&right)?])?;
        Ok(lhs.first_ae_difference(&rhs))
    };
    match run() {
        Ok(None) => Ok(()),
        Ok(Some(x)) => Err(format!("sides differ at flat point index {x}")),
        Err(e) => Err(e.to_string()),
    }
}

fn threefold_identity(
    c: &ProjectiveCpps,
    r: usize,
    s: usize,
    t: usize,
    u: usize,
    i: &Partition,
) -> Result<(), String> {
    let run = || -> Result<Option<usize>, Error> {
        let id_rs = ProbMorphism::identity(c.flat_space(r, s));
        let lhs = ProbMorphism::product(&[&id_rs, c.flat.mult(s, t, u)])?
            .then(c.flat.mult(r, s, u))?
            .then(&c.flat_epi(i)?)?;
        let (left, rest) = split_at(i, s)?;
        let (mid, right) = split_at(&rest, t)?;
        let rhs = ProbMorphism::product(&[
            &c.flat_epi(&left)?,
            &c.flat_epi(&mid)?,
            &c.flat_epi(&right)?,
        ])?;
        Ok(lhs.first_ae_difference(&rhs))
    };
    match run() {
        Ok(None) => Ok(()),
        Ok(Some(x)) => Err(format!("sides differ at flat point index {x}")),
        Err(e) => Err(e.to_string()),
    }
}

/// Verifies that the canonical family is an epimorphism of convolution
/// systems: the morphism squares commute and every component is surjective
/// onto the support of its codomain.
pub fn check_tau(c: &ProjectiveCpps) -> Report {
    let started = std::time::Instant::now();
    let mut report = crate::convsys::check_system_morphism(&c.tau);
    report.suite = "tau".into();
    for (&(s, t), m) in &c.tau.components {
        let name = format!(
            "epi({},{})",
            c.base.times().label(s),
            c.base.times().label(t)
        );
        let mut hit = vec![false; m.codomain().len()];
        for x in m.domain().support() {
            hit[m.apply(x)] = true;
        }
        report.push(
            name,
            if m.codomain().support().all(|y| hit[y]) {
                Ok(())
            } else {
                Err("component misses a positive-mass outcome".into())
            },
        );
    }
    report.sort();
    report.elapsed_ms = started.elapsed().as_millis();
    report
}

/// Lifts a componentwise isomorphism of systems to their projective CPPSs:
/// the lifted component acts blockwise on the grid cells. Returns the lift
/// together with a report verifying the intertwining with the canonical
/// epimorphisms and that the lift is a CPPS isomorphism.
pub fn lift_isomorphism(theta: &SystemMorphism) -> Result<(SystemMorphism, Report), Error> {
    for (&(s, t), m) in &theta.components {
        if !m.is_isomorphism() {
            return Err(Error::System(format!(
                "component ({},{}) is not an isomorphism of probability spaces",
                theta.source.times().label(s),
                theta.source.times().label(t)
            )));
        }
    }
    let c1 = build_cpps(&theta.source)?;
    let c2 = build_cpps(&theta.target)?;
    let times = theta.source.times();
    let n = times.len();
    let mut components = BTreeMap::new();
    for s in 0..n {
        for t in s + 1..n {
            let factors: Vec<&ProbMorphism> =
                (s..t).map(|a| theta.component(a, a + 1)).collect();
            components.insert((s, t), ProbMorphism::product(&factors)?);
        }
    }
    let lifted = SystemMorphism {
        source: Arc::clone(&c1.flat),
        target: Arc::clone(&c2.flat),
        components,
    };

    let started = std::time::Instant::now();
    let mut report = crate::convsys::check_system_morphism(&lifted);
    report.suite = "lift".into();
    for s in 0..n {
        for t in s + 1..n {
            let name = format!("lift-isomorphism({},{})", times.label(s), times.label(t));
            report.push(
                name,
                if lifted.component(s, t).is_isomorphism() {
                    Ok(())
                } else {
                    Err("lifted component is not an isomorphism".into())
                },
            );
            // theta . tau_1 = tau_2 . theta-flat
            let name = format!("intertwines-tau({},{})", times.label(s), times.label(t));
            let lhs = c1.tau.component(s, t).then(theta.component(s, t))?;
            let rhs = lifted.component(s, t).then(c2.tau.component(s, t))?;
            report.push(
                name,
                match lhs.first_ae_difference(&rhs) {
                    None => Ok(()),
                    Some(x) => Err(format!("square differs at flat point index {x}")),
                },
            );
        }
    }
    report.sort();
    report.elapsed_ms = started.elapsed().as_millis();
    Ok((lifted, report))
}

/// Builds the flow system over the global grid: the base is the product
/// measure over all adjacent cells of the full time set and the increment
/// over `(s,t)` is the global connecting morphism from the grid.
pub fn build_flow(sys: &Arc<ConvolutionSystem>) -> Result<FlowSystem, Error> {
    let axioms = check_system(sys);
    if let Some(fail) = axioms.first_failure() {
        return Err(Error::System(format!(
            "system fails its axioms: {} ({})",
            fail.name,
            fail.witness.as_deref().unwrap_or("no witness")
        )));
    }
    let times = sys.times();
    let n = times.len();
    let top = full_grid(times, 0, n - 1);
    let base = sys.partition_space(&top);
    let mut increments = BTreeMap::new();
    for s in 0..n {
        for t in s + 1..n {
            let window = Partition::new(times, vec![s, t])?;
            increments.insert((s, t), build_x(&window, &top, sys)?);
        }
    }
    Ok(FlowSystem {
        base,
        system: Arc::clone(sys),
        increments,
    })
}

/// Restriction maps between nested flat windows, built literally by the
/// displayed composition: undo the outer concatenations on supports, then
/// project onto the middle factor.
#[derive(Debug, Clone)]
pub struct RestrictionMaps {
    maps: BTreeMap<(PairWindow, PairWindow), ProbMorphism>,
}

impl RestrictionMaps {
    pub fn get(&self, inner: PairWindow, outer: PairWindow) -> Option<&ProbMorphism> {
        self.maps.get(&(inner, outer))
    }

    pub fn windows(&self) -> impl Iterator<Item = (PairWindow, PairWindow)> + '_ {
        self.maps.keys().copied()
    }

    /// A copy with one restriction map redirected at one point; used by
    /// mutation testing.
    pub fn with_corrupted(
        &self,
        inner: PairWindow,
        outer: PairWindow,
        at: usize,
        to: usize,
    ) -> Result<Self, Error> {
        let mut copy = self.clone();
        let m = copy
            .maps
            .get_mut(&(inner, outer))
            .ok_or_else(|| Error::System(format!("no restriction {inner} in {outer}")))?;
        let mut map = m.map().to_vec();
        if at >= map.len() || to >= m.codomain().len() {
            return Err(Error::System("mutation index out of range".into()));
        }
        map[at] = to;
        *m = ProbMorphism::new(Arc::clone(m.domain()), Arc::clone(m.codomain()), map)?;
        Ok(copy)
    }
}

/// Builds every restriction map `(s,t) inside (u,v)` by the literal inverse
/// composition; degenerate overhangs (`u = s` and/or `t = v`) drop the
/// corresponding factor.
pub fn build_restrictions(c: &ProjectiveCpps) -> Result<RestrictionMaps, Error> {
    let n = c.base.times().len();
    let mut maps = BTreeMap::new();
    for u in 0..n {
        for v in u + 1..n {
            for s in u..v {
                for t in s + 1..=v {
                    let inner = PairWindow::new(s, t);
                    let outer = PairWindow::new(u, v);
                    maps.insert((inner, outer), restriction_map(c, inner, outer)?);
                }
            }
        }
    }
    Ok(RestrictionMaps { maps })
}

fn restriction_map(
    c: &ProjectiveCpps,
    inner: PairWindow,
    outer: PairWindow,
) -> Result<ProbMorphism, Error> {
    let (s, t) = (inner.s, inner.t);
    let (u, v) = (outer.s, outer.t);
    if (u, v) == (s, t) {
        return Ok(ProbMorphism::identity(c.flat_space(s, t)));
    }
    if u == s {
        // Only a right overhang: split at t and keep the left factor.
        let split = c.flat.mult(s, t, v).inverse_on_support()?;
        let components = [Arc::clone(c.flat_space(s, t)), Arc::clone(c.flat_space(t, v))];
        return split.then(&crate::finprob::coordinate_projection(&components, &[0])?);
    }
    if t == v {
        // Only a left overhang: split at s and keep the right factor.
        let split = c.flat.mult(u, s, v).inverse_on_support()?;
        let components = [Arc::clone(c.flat_space(u, s)), Arc::clone(c.flat_space(s, v))];
        return split.then(&crate::finprob::coordinate_projection(&components, &[1])?);
    }
    // Full composition: undo (u,s,v), then (s,t,v) inside the right factor,
    // then project onto the middle.
    let outer_split = c.flat.mult(u, s, v).inverse_on_support()?;
    let id_left = ProbMorphism::identity(c.flat_space(u, s));
    let inner_split = c.flat.mult(s, t, v).inverse_on_support()?;
    let step2 = ProbMorphism::product(&[&id_left, &inner_split])?;
    let components = [
        Arc::clone(c.flat_space(u, s)),
        Arc::clone(c.flat_space(s, t)),
        Arc::clone(c.flat_space(t, v)),
    ];
    let project = crate::finprob::coordinate_projection(&components, &[1])?;
    outer_split.then(&step2)?.then(&project)
}

/// Verifies the restriction maps against the direct grid projection, their
/// epimorphism property, and the lemma identity
/// `T-flat_I . restriction = X(I,J) . T-flat_J` over every nested pair of
/// partitions.
pub fn verify_ll1(c: &ProjectiveCpps, r: &RestrictionMaps) -> Report {
    let started = std::time::Instant::now();
    let mut report = Report::new("ll1");
    let times = c.base.times();

    for (inner, outer) in r.windows() {
        let m = r.get(inner, outer).unwrap();

        // Cross-check: the literal composition evaluates to the coordinate
        // projection onto the inner grid window.
        let inner_grid = full_grid(times, inner.s, inner.t);
        let outer_grid = full_grid(times, outer.s, outer.t);
        let direct = match window_projection(&inner_grid, &outer_grid, &c.base) {
            Ok(p) => p,
            Err(e) => {
                report.push(format!("grid-projection({inner} in {outer})"), Err(e.to_string()));
                continue;
            }
        };
        report.push(
            format!("grid-projection({inner} in {outer})"),
            match m.first_ae_difference(&direct) {
                None => Ok(()),
                Some(x) => Err(format!("differs from grid projection at flat index {x}")),
            },
        );

        report.push(
            format!("epimorphism({inner} in {outer})"),
            if m.is_measure_preserving() {
                Ok(())
            } else {
                Err("restriction is not measure-preserving".into())
            },
        );

        // Lemma identity over all nested partition pairs.
        for i in enumerate_window(times, inner.s, inner.t) {
            for j in enumerate_window(times, outer.s, outer.t) {
                if !i.subset_of(&j) {
                    continue;
                }
                let name = format!("lemma({inner} in {outer};I={i};J={j})");
                let outcome = (|| -> Result<Option<usize>, Error> {
                    let lhs = m.then(&c.flat_epi(&i)?)?;
                    let rhs = c.flat_epi(&j)?.then(&build_x(&i, &j, &c.base)?)?;
                    Ok(lhs.first_ae_difference(&rhs))
                })();
                match outcome {
                    Ok(None) => report.push(name, Ok(())),
                    Ok(Some(x)) => report.push(
                        name,
                        Err(format!("identity fails at flat point index {x}")),
                    ),
                    Err(e) => report.push(name, Err(e.to_string())),
                }
            }
        }
    }

    report.sort();
    report.elapsed_ms = started.elapsed().as_millis();
    report
}

/// Verifies that the restriction maps form a projective system over nested
/// windows: compatibility over every nested triple and exact marginalization
/// of the flat measures.
pub fn verify_projint(c: &ProjectiveCpps, r: &RestrictionMaps) -> Report {
    let started = std::time::Instant::now();
    let mut report = Report::new("projint");

    for (inner, outer) in r.windows() {
        let m = r.get(inner, outer).unwrap();
        report.push(
            format!("marginalization({inner} in {outer})"),
            if m.is_measure_preserving() {
                Ok(())
            } else {
                Err("flat measure does not marginalize exactly".into())
            },
        );
    }

    let windows: Vec<PairWindow> = {
        let n = c.base.times().len();
        (0..n)
            .flat_map(|s| (s + 1..n).map(move |t| PairWindow::new(s, t)))
            .collect()
    };
    for &outer in &windows {
        for &mid in &windows {
            if !outer.contains(&mid) {
                continue;
            }
            for &inner in &windows {
                if !mid.contains(&inner) {
                    continue;
                }
                let name = format!("compatibility({inner} in {mid} in {outer})");
                let outcome = (|| -> Result<Option<usize>, Error> {
                    let direct = r.get(inner, outer).unwrap();
                    let via = r.get(mid, outer).unwrap().then(r.get(inner, mid).unwrap())?;
                    Ok(direct.first_ae_difference(&via))
                })();
                match outcome {
                    Ok(None) => report.push(name, Ok(())),
                    Ok(Some(x)) => {
                        report.push(name, Err(format!("chains differ at flat point index {x}")))
                    }
                    Err(e) => report.push(name, Err(e.to_string())),
                }
            }
        }
    }

    report.sort();
    report.elapsed_ms = started.elapsed().as_millis();
    report
}

/// Verifies the equivalence mechanism between the two limit constructions:
/// the global-grid limit factors through every flat window, the
/// window-indexed limit satisfies the same factorizations, and the two
/// limits coincide via a canonical measure-preserving bijection.
pub fn verify_kimpa(sys: &Arc<ConvolutionSystem>) -> Result<Report, Error> {
    let started = std::time::Instant::now();
    let mut report = Report::new("kimpa");
    let c = build_cpps(sys)?;
    let restrictions = build_restrictions(&c)?;
    let times = sys.times();
    let n = times.len();
    let global_top = full_grid(times, 0, n - 1);
    let global_base = sys.partition_space(&global_top);

    // Simple maximality of the global family, recorded as its own verdict.
    let family = ConnectingFamily::global(sys)?;
    report.push(
        "simply-maximal",
        if crate::projective::check_simply_maximal(&family)? {
            Ok(())
        } else {
            Err("a projection from the global limit misses support".into())
        },
    );

    // Factorization of the global limit through each flat window:
    // T-flat_I . X-flat(s,t) = X_I.
    let mut window_epis: BTreeMap<PairWindow, ProbMorphism> = BTreeMap::new();
    for s in 0..n {
        for t in s + 1..n {
            let grid_st = full_grid(times, s, t);
            let x_flat = window_projection(&grid_st, &global_top, sys)?;
            for i in enumerate_window(times, s, t) {
                let name = format!("global-factorization(({s},{t});I={i})");
                let lhs = x_flat.then(&c.flat_epi(&i)?)?;
                let rhs = build_x(&i, &global_top, sys)?;
                report.push(
                    name,
                    match lhs.first_ae_difference(&rhs) {
                        None => Ok(()),
                        Some(x) => Err(format!("fails at global grid index {x}")),
                    },
                );
            }
            window_epis.insert(PairWindow::new(s, t), x_flat);
        }
    }

    // First upper-bound relation: restriction . X-flat(u,v) = X-flat(s,t).
    for (inner, outer) in restrictions.windows() {
        let name = format!("restriction-compatible({inner} in {outer})");
        let lhs = window_epis[&outer].then(restrictions.get(inner, outer).unwrap())?;
        report.push(
            name,
            match lhs.first_ae_difference(&window_epis[&inner]) {
                None => Ok(()),
                Some(x) => Err(format!("fails at global grid index {x}")),
            },
        );
    }

    // Second upper-bound relation, through the window-indexed limit realized
    // over the full window (0, n-1): T-flat_I . T'(s,t) = X(I,J) . T-flat_J
    // . T'(u,v), where T' are restrictions from the maximal window.
    let max_window = PairWindow::new(0, n - 1);
    for (inner, outer) in restrictions.windows() {
        for i in enumerate_window(times, inner.s, inner.t) {
            for j in enumerate_window(times, outer.s, outer.t) {
                if !i.subset_of(&j) {
                    continue;
                }
                let name = format!("window-limit(({inner}) in ({outer});I={i};J={j})");
                let t_inner = restrictions.get(inner, max_window).unwrap();
                let t_outer = restrictions.get(outer, max_window).unwrap();
                let lhs = t_inner.then(&c.flat_epi(&i)?)?;
                let rhs = t_outer
                    .then(&c.flat_epi(&j)?)?
                    .then(&build_x(&i, &j, sys)?)?;
                report.push(
                    name,
                    match lhs.first_ae_difference(&rhs) {
                        None => Ok(()),
                        Some(x) => Err(format!("fails at flat index {x}")),
                    },
                );
            }
        }
    }

    // Canonical bijection between the two limit realizations. Both are
    // carried by the global grid; the canonical map is the factorization of
    // the grid through the maximal window, and it must be a
    // measure-preserving bijection.
    let canonical = ProbMorphism::new(
        Arc::clone(&global_base),
        Arc::clone(c.flat_space(0, n - 1)),
        window_epis[&max_window].map().to_vec(),
    )?;
    report.push(
        "canonical-bijection",
        if canonical.is_isomorphism() {
            Ok(())
        } else {
            Err("the two limit spaces are not canonically isomorphic".into())
        },
    );

    report.sort();
    report.elapsed_ms = started.elapsed().as_millis();
    Ok(report)
}
