//! Finite probability spaces with exact rational weights.
//!
//! Everything downstream (systems, projective limits, Hilbert spaces) reduces
//! to finite spaces with power-set sigma-fields, so a space is just an ordered
//! outcome list with one rational weight per outcome. Morphisms are total
//! outcome maps; all comparisons quotient by the null set of zero-weight
//! outcomes ("up to a set of measure zero").

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Error;

/// Exact rational scalar used throughout the verification path.
pub type Rat = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` (q > 0 after reduction) or a plain integer string.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let make = |n: &str, d: &str| -> Result<Rat, Error> {
        let n: BigInt = n
            .parse()
            .map_err(|_| Error::Prob(format!("bad rational numerator in {s:?}")))?;
        let d: BigInt = d
            .parse()
            .map_err(|_| Error::Prob(format!("bad rational denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Prob(format!("zero denominator in {s:?}")));
        }
        Ok(Rat::new(n, d))
    };
    match s.split_once('/') {
        Some((n, d)) => make(n, d),
        None => make(s, "1"),
    }
}

pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Row-major index arithmetic for product spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductShape {
    sizes: Vec<usize>,
}

impl ProductShape {
    pub fn new(sizes: Vec<usize>) -> Self {
        ProductShape { sizes }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn encode(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.sizes.len());
        let mut idx = 0;
        for (c, n) in coords.iter().zip(&self.sizes) {
            debug_assert!(c < n);
            idx = idx * n + c;
        }
        idx
    }

    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut coords = vec![0; self.sizes.len()];
        for (k, n) in self.sizes.iter().enumerate().rev() {
            coords[k] = idx % n;
            idx /= n;
        }
        coords
    }
}

/// A finite probability space: ordered outcome labels with exact rational
/// weights summing to 1. Zero-weight outcomes are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinProbSpace {
    outcomes: Vec<String>,
    weights: Vec<Rat>,
}

impl fmt::Display for FinProbSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (o, w)) in self.outcomes.iter().zip(&self.weights).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{o}: {}", rat_to_string(w))?;
        }
        write!(f, "}}")
    }
}

impl FinProbSpace {
    pub fn new<S: Into<String>>(
        outcomes: impl IntoIterator<Item = S>,
        weights: Vec<Rat>,
    ) -> Result<Arc<Self>, Error> {
        let outcomes: Vec<String> = outcomes.into_iter().map(Into::into).collect();
        if outcomes.is_empty() {
            return Err(Error::Prob("a probability space needs at least one outcome".into()));
        }
        if outcomes.len() != weights.len() {
            return Err(Error::Prob(format!(
                "{} outcomes but {} weights",
                outcomes.len(),
                weights.len()
            )));
        }
        for (i, o) in outcomes.iter().enumerate() {
            if outcomes[i + 1..].contains(o) {
                return Err(Error::Prob(format!("duplicate outcome label {o:?}")));
            }
        }
        let mut total = Rat::zero();
        for (o, w) in outcomes.iter().zip(&weights) {
            if *w < Rat::zero() {
                return Err(Error::Prob(format!("negative weight for outcome {o:?}")));
            }
            total += w;
        }
        if !total.is_one() {
            return Err(Error::Prob(format!(
                "weights sum to {}, not 1",
                rat_to_string(&total)
            )));
        }
        Ok(Arc::new(FinProbSpace { outcomes, weights }))
    }

    pub fn uniform<S: Into<String>>(outcomes: impl IntoIterator<Item = S>) -> Arc<Self> {
        let outcomes: Vec<String> = outcomes.into_iter().map(Into::into).collect();
        let n = outcomes.len() as i64;
        let w = rat(1, n);
        FinProbSpace::new(outcomes, vec![w; n as usize]).expect("uniform weights are valid")
    }

    pub fn dirac<S: Into<String>>(outcomes: impl IntoIterator<Item = S>, at: usize) -> Arc<Self> {
        let outcomes: Vec<String> = outcomes.into_iter().map(Into::into).collect();
        let weights = (0..outcomes.len())
            .map(|i| if i == at { Rat::one() } else { Rat::zero() })
            .collect();
        FinProbSpace::new(outcomes, weights).expect("dirac weights are valid")
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn outcome(&self, idx: usize) -> &str {
        &self.outcomes[idx]
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn weight(&self, idx: usize) -> &Rat {
        &self.weights[idx]
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn index_of(&self, outcome: &str) -> Option<usize> {
        self.outcomes.iter().position(|o| o == outcome)
    }

    /// Indices of strictly positive weight.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| !self.weights[i].is_zero())
    }

    /// Row-major product space. Outcome labels are the component labels
    /// joined with `|`; the weight of a tuple is the product of the
    /// component weights.
    pub fn product(spaces: &[Arc<FinProbSpace>]) -> Result<Arc<FinProbSpace>, Error> {
        if spaces.is_empty() {
            return Err(Error::Prob("product of zero spaces".into()));
        }
        if spaces.len() == 1 {
            return Ok(Arc::clone(&spaces[0]));
        }
        let shape = ProductShape::new(spaces.iter().map(|s| s.len()).collect());
        let total = shape.total();
        let mut outcomes = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        for idx in 0..total {
            let coords = shape.decode(idx);
            let mut label = String::new();
            let mut w = Rat::one();
            for (k, &c) in coords.iter().enumerate() {
                if k > 0 {
                    label.push('|');
                }
                label.push_str(spaces[k].outcome(c));
                w *= spaces[k].weight(c);
            }
            outcomes.push(label);
            weights.push(w);
        }
        // The factors are already valid, so the tuple weights are
        // non-negative and sum to 1; skip re-validation.
        Ok(Arc::new(FinProbSpace { outcomes, weights }))
    }
}

/// Convolution of two weight vectors over a common index set: pushforward of
/// the product weights by a binary operation on indices.
pub fn convolve_weights(mu: &[Rat], nu: &[Rat], op: impl Fn(usize, usize) -> usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); mu.len()];
    for (a, wa) in mu.iter().enumerate() {
        if wa.is_zero() {
            continue;
        }
        for (b, wb) in nu.iter().enumerate() {
            if wb.is_zero() {
                continue;
            }
            out[op(a, b)] += wa * wb;
        }
    }
    out
}

/// Pushforward of `mu`'s weights along a total outcome map into a codomain
/// of `codomain_len` outcomes.
pub fn pushforward(map: &[usize], mu: &FinProbSpace, codomain_len: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); codomain_len];
    for (x, y) in map.iter().enumerate() {
        out[*y] += mu.weight(x);
    }
    out
}

pub fn is_measure_preserving(map: &[usize], mu: &FinProbSpace, nu: &FinProbSpace) -> bool {
    pushforward(map, mu, nu.len()) == nu.weights()
}

/// A total, measurable map between finite probability spaces. Whether it is
/// measure-preserving is a checkable property, not a construction invariant,
/// so that diagnostics can exhibit broken maps with witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbMorphism {
    domain: Arc<FinProbSpace>,
    codomain: Arc<FinProbSpace>,
    map: Vec<usize>,
}

impl ProbMorphism {
    pub fn new(
        domain: Arc<FinProbSpace>,
        codomain: Arc<FinProbSpace>,
        map: Vec<usize>,
    ) -> Result<Self, Error> {
        if map.len() != domain.len() {
            return Err(Error::Prob(format!(
                "map has {} entries for a domain of {} outcomes",
                map.len(),
                domain.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= codomain.len()) {
            return Err(Error::Prob(format!("map target {bad} out of codomain range")));
        }
        Ok(ProbMorphism { domain, codomain, map })
    }

    pub fn identity(space: &Arc<FinProbSpace>) -> Self {
        ProbMorphism {
            domain: Arc::clone(space),
            codomain: Arc::clone(space),
            map: (0..space.len()).collect(),
        }
    }

    pub fn domain(&self) -> &Arc<FinProbSpace> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FinProbSpace> {
        &self.codomain
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, idx: usize) -> usize {
        self.map[idx]
    }

    pub fn is_measure_preserving(&self) -> bool {
        is_measure_preserving(&self.map, &self.domain, &self.codomain)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &ProbMorphism) -> Result<ProbMorphism, Error> {
        if self.codomain.len() != other.domain.len() {
            return Err(Error::Prob("composition of incompatible morphisms".into()));
        }
        Ok(ProbMorphism {
            domain: Arc::clone(&self.domain),
            codomain: Arc::clone(&other.codomain),
            map: self.map.iter().map(|&y| other.map[y]).collect(),
        })
    }

    /// Equality on every outcome of strictly positive weight.
    pub fn equal_ae(&self, other: &ProbMorphism) -> bool {
        if self.domain.len() != other.domain.len() || self.codomain.len() != other.codomain.len() {
            return false;
        }
        self.domain
            .support()
            .all(|x| self.map[x] == other.map[x])
    }

    /// First positive-weight outcome where the two maps differ, if any.
    pub fn first_ae_difference(&self, other: &ProbMorphism) -> Option<usize> {
        self.domain.support().find(|&x| self.map[x] != other.map[x])
    }

    /// Mod-0 isomorphism: measure-preserving and a bijection between the
    /// supports. The inverse on supports is then automatically
    /// measure-preserving.
    pub fn is_isomorphism(&self) -> bool {
        if !self.is_measure_preserving() {
            return false;
        }
        let mut hit = vec![false; self.codomain.len()];
        for x in self.domain.support() {
            let y = self.map[x];
            if self.codomain.weight(y).is_zero() || hit[y] {
                return false;
            }
            hit[y] = true;
        }
        self.codomain.support().all(|y| hit[y])
    }

    /// Inverse on supports of a mod-0 isomorphism. Zero-weight outcomes of
    /// the codomain are sent to the first domain outcome, deterministically;
    /// this never affects `equal_ae` comparisons.
    pub fn inverse_on_support(&self) -> Result<ProbMorphism, Error> {
        if !self.is_isomorphism() {
            return Err(Error::Prob("inverse of a non-isomorphism".into()));
        }
        let mut inv = vec![0usize; self.codomain.len()];
        for x in self.domain.support() {
            inv[self.map[x]] = x;
        }
        Ok(ProbMorphism {
            domain: Arc::clone(&self.codomain),
            codomain: Arc::clone(&self.domain),
            map: inv,
        })
    }

    /// Product morphism between row-major product spaces.
    pub fn product(factors: &[&ProbMorphism]) -> Result<ProbMorphism, Error> {
        if factors.is_empty() {
            return Err(Error::Prob("product of zero morphisms".into()));
        }
        if factors.len() == 1 {
            return Ok(factors[0].clone());
        }
        let domain = FinProbSpace::product(
            &factors.iter().map(|f| Arc::clone(&f.domain)).collect::<Vec<_>>(),
        )?;
        let codomain = FinProbSpace::product(
            &factors.iter().map(|f| Arc::clone(&f.codomain)).collect::<Vec<_>>(),
        )?;
        let dom_shape = ProductShape::new(factors.iter().map(|f| f.domain.len()).collect());
        let cod_shape = ProductShape::new(factors.iter().map(|f| f.codomain.len()).collect());
        let map = (0..dom_shape.total())
            .map(|idx| {
                let coords = dom_shape.decode(idx);
                let image: Vec<usize> = coords
                    .iter()
                    .zip(factors)
                    .map(|(&c, f)| f.map[c])
                    .collect();
                cod_shape.encode(&image)
            })
            .collect();
        Ok(ProbMorphism { domain, codomain, map })
    }
}

/// Coordinate projection from the row-major product of `components` onto the
/// product of the components selected by `keep` (in order).
pub fn coordinate_projection(
    components: &[Arc<FinProbSpace>],
    keep: &[usize],
) -> Result<ProbMorphism, Error> {
    if keep.is_empty() {
        return Err(Error::Prob("projection onto zero coordinates".into()));
    }
    let domain = FinProbSpace::product(components)?;
    let kept: Vec<Arc<FinProbSpace>> = keep.iter().map(|&k| Arc::clone(&components[k])).collect();
    let codomain = FinProbSpace::product(&kept)?;
    let dom_shape = ProductShape::new(components.iter().map(|s| s.len()).collect());
    let cod_shape = ProductShape::new(kept.iter().map(|s| s.len()).collect());
    let map = (0..dom_shape.total())
        .map(|idx| {
            let coords = dom_shape.decode(idx);
            let image: Vec<usize> = keep.iter().map(|&k| coords[k]).collect();
            cod_shape.encode(&image)
        })
        .collect();
    ProbMorphism::new(domain, codomain, map)
}

/// Partition of a space's outcomes into joint fibers of a family of maps;
/// the finite stand-in for the generated sigma-field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomPartition {
    blocks: Vec<Vec<usize>>,
}

impl AtomPartition {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// The generated sigma-field is the full power set of the support iff
    /// every atom contains at most one positive-weight outcome.
    pub fn separates_support(&self, space: &FinProbSpace) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().filter(|&&x| !space.weight(x).is_zero()).count() <= 1)
    }
}

/// Joint-fiber atoms of a family of maps out of one space. An empty family
/// yields the single atom containing everything.
pub fn atoms(domain: &FinProbSpace, maps: &[&ProbMorphism]) -> AtomPartition {
    use std::collections::HashMap;
    let mut by_fiber: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for x in 0..domain.len() {
        let key: Vec<usize> = maps.iter().map(|m| m.map[x]).collect();
        by_fiber.entry(key).or_default().push(x);
    }
    let mut blocks: Vec<Vec<usize>> = by_fiber.into_values().collect();
    blocks.sort();
    AtomPartition { blocks }
}

/// Exact independence of a family of maps out of one space: every joint cell
/// has probability equal to the product of its marginals.
pub fn independent(domain: &FinProbSpace, maps: &[&ProbMorphism]) -> bool {
    first_dependence_witness(domain, maps).is_none()
}

/// Joint cell violating independence, as target indices per map.
pub fn first_dependence_witness(
    domain: &FinProbSpace,
    maps: &[&ProbMorphism],
) -> Option<Vec<usize>> {
    if maps.len() < 2 {
        return None;
    }
    let marginals: Vec<Vec<Rat>> = maps
        .iter()
        .map(|m| pushforward(&m.map, domain, m.codomain.len()))
        .collect();
    let shape = ProductShape::new(maps.iter().map(|m| m.codomain.len()).collect());
    let mut joint = vec![Rat::zero(); shape.total()];
    for x in 0..domain.len() {
        let cell: Vec<usize> = maps.iter().map(|m| m.map[x]).collect();
        joint[shape.encode(&cell)] += domain.weight(x);
    }
    for idx in 0..shape.total() {
        let cell = shape.decode(idx);
        let mut expected = Rat::one();
        for (k, &c) in cell.iter().enumerate() {
            expected *= &marginals[k][c];
        }
        if joint[idx] != expected {
            return Some(cell);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> Arc<FinProbSpace> {
        FinProbSpace::uniform(["0", "1"])
    }

    fn z3_half() -> Arc<FinProbSpace> {
        FinProbSpace::new(["0", "1", "2"], vec![rat(1, 2), rat(1, 2), rat(0, 1)]).unwrap()
    }

    #[test]
    fn rational_parsing_round_trips() {
        assert_eq!(parse_rat("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("3").unwrap(), rat(3, 1));
        assert_eq!(parse_rat("-2/4").unwrap(), rat(-1, 2));
        assert!(parse_rat("1/0").is_err());
        assert_eq!(rat_to_string(&rat(2, 4)), "1/2");
        assert_eq!(rat_to_string(&rat(3, 1)), "3");
    }

    #[test]
    fn space_validation() {
        assert!(FinProbSpace::new(["a"], vec![rat(9, 10)]).is_err());
        assert!(FinProbSpace::new(["a", "a"], vec![rat(1, 2), rat(1, 2)]).is_err());
        assert!(FinProbSpace::new(["a", "b"], vec![rat(3, 2), rat(-1, 2)]).is_err());
    }

    #[test]
    fn product_examples() {
        let p = FinProbSpace::product(&[z2(), z2()]).unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.weights().iter().all(|w| *w == rat(1, 4)));

        let d = FinProbSpace::dirac(["a"], 0);
        let p = FinProbSpace::product(&[d, z2()]).unwrap();
        assert_eq!(p.weights(), &[rat(1, 2), rat(1, 2)]);
        assert_eq!(p.outcome(0), "a|0");

        let nu = z3_half();
        let p = FinProbSpace::product(&[Arc::clone(&nu), nu]).unwrap();
        assert_eq!(p.len(), 9);
        assert_eq!(*p.weight(0), rat(1, 4)); // (0,0)
        assert_eq!(*p.weight(1), rat(1, 4)); // (0,1)
        assert_eq!(*p.weight(3), rat(1, 4)); // (1,0)
        assert_eq!(*p.weight(4), rat(1, 4)); // (1,1)
        assert_eq!(*p.weight(8), rat(0, 1));
    }

    #[test]
    fn product_is_associative_up_to_flattening() {
        let a = z2();
        let b = z3_half();
        let c = FinProbSpace::uniform(["x", "y", "z"]);
        let flat = FinProbSpace::product(&[a.clone(), b.clone(), c.clone()]).unwrap();
        let left = FinProbSpace::product(&[FinProbSpace::product(&[a.clone(), b.clone()]).unwrap(), c.clone()])
            .unwrap();
        let right =
            FinProbSpace::product(&[a, FinProbSpace::product(&[b, c]).unwrap()]).unwrap();
        // Row-major flattening makes the index bijection the identity.
        assert_eq!(flat.weights(), left.weights());
        assert_eq!(flat.weights(), right.weights());
    }

    #[test]
    fn pushforward_examples() {
        let s = z2();
        let id = ProbMorphism::identity(&s);
        assert_eq!(pushforward(id.map(), &s, 2), s.weights());

        // addition on Z/2 applied to uniform x uniform
        let p = FinProbSpace::product(&[z2(), z2()]).unwrap();
        let add: Vec<usize> = (0..4).map(|i| (i / 2 + i % 2) % 2).collect();
        assert_eq!(pushforward(&add, &p, 2), vec![rat(1, 2), rat(1, 2)]);

        // addition on Z/3 applied to nu x nu
        let nu = z3_half();
        let p = FinProbSpace::product(&[Arc::clone(&nu), Arc::clone(&nu)]).unwrap();
        let add: Vec<usize> = (0..9).map(|i| (i / 3 + i % 3) % 3).collect();
        assert_eq!(pushforward(&add, &p, 3), vec![rat(1, 4), rat(1, 2), rat(1, 4)]);
    }

    #[test]
    fn measure_preserving_examples() {
        let s = z2();
        assert!(is_measure_preserving(&[0, 1], &s, &s));
        assert!(!is_measure_preserving(&[0, 0], &s, &s));

        let z4 = FinProbSpace::uniform(["0", "1", "2", "3"]);
        assert!(is_measure_preserving(&[0, 1, 0, 1], &z4, &s));
    }

    #[test]
    fn equal_ae_ignores_null_outcomes() {
        let nu = z3_half();
        let a = ProbMorphism::new(nu.clone(), nu.clone(), vec![0, 1, 2]).unwrap();
        let b = ProbMorphism::new(nu.clone(), nu.clone(), vec![0, 1, 0]).unwrap();
        let c = ProbMorphism::new(nu.clone(), nu.clone(), vec![0, 0, 2]).unwrap();
        assert!(a.equal_ae(&a));
        assert!(a.equal_ae(&b)); // differ only on the weight-0 outcome
        assert!(!a.equal_ae(&c)); // differ on a weight-1/2 outcome
        assert_eq!(a.first_ae_difference(&c), Some(1));
    }

    #[test]
    fn isomorphism_examples() {
        let s = z2();
        assert!(ProbMorphism::identity(&s).is_isomorphism());

        // concatenation (Z/2)^2 x Z/2 -> (Z/2)^3 is the index identity
        let sq = FinProbSpace::product(&[z2(), z2()]).unwrap();
        let cube = FinProbSpace::product(&[z2(), z2(), z2()]).unwrap();
        let dom = FinProbSpace::product(&[sq, z2()]).unwrap();
        let concat = ProbMorphism::new(dom, cube, (0..8).collect()).unwrap();
        assert!(concat.is_isomorphism());

        // addition Z/2 x Z/2 -> Z/2 is 2-to-1
        let p = FinProbSpace::product(&[z2(), z2()]).unwrap();
        let add = ProbMorphism::new(p, s, vec![0, 1, 1, 0]).unwrap();
        assert!(add.is_measure_preserving());
        assert!(!add.is_isomorphism());
    }

    #[test]
    fn inverse_on_support_round_trips() {
        let nu = z3_half();
        let swap = ProbMorphism::new(nu.clone(), nu.clone(), vec![1, 0, 2]).unwrap();
        assert!(swap.is_isomorphism());
        let inv = swap.inverse_on_support().unwrap();
        assert!(swap.then(&inv).unwrap().equal_ae(&ProbMorphism::identity(&nu)));
        assert!(inv.then(&swap).unwrap().equal_ae(&ProbMorphism::identity(&nu)));
    }

    #[test]
    fn independence_examples() {
        let cube = FinProbSpace::product(&[z2(), z2(), z2()]).unwrap();
        let s = z2();
        let shape = ProductShape::new(vec![2, 2, 2]);
        let coord = |k: usize| {
            ProbMorphism::new(
                cube.clone(),
                s.clone(),
                (0..8).map(|i| shape.decode(i)[k]).collect(),
            )
            .unwrap()
        };
        let x0 = coord(0);
        let x1 = coord(1);
        let x2 = coord(2);
        assert!(independent(&cube, &[&x0, &x1, &x2]));
        assert!(!independent(&cube, &[&x0, &x0]));

        // omega -> omega_0 + omega_1 vs omega -> omega_2
        let sum01 = ProbMorphism::new(
            cube.clone(),
            s.clone(),
            (0..8)
                .map(|i| {
                    let c = shape.decode(i);
                    (c[0] + c[1]) % 2
                })
                .collect(),
        )
        .unwrap();
        assert!(independent(&cube, &[&sum01, &x2]));
    }

    #[test]
    fn atoms_examples() {
        let sq = FinProbSpace::product(&[z2(), z2()]).unwrap();
        let s = z2();
        let shape = ProductShape::new(vec![2, 2]);
        let sum = ProbMorphism::new(
            sq.clone(),
            s.clone(),
            (0..4)
                .map(|i| {
                    let c = shape.decode(i);
                    (c[0] + c[1]) % 2
                })
                .collect(),
        )
        .unwrap();
        let a = atoms(&sq, &[&sum]);
        assert_eq!(a.blocks(), &[vec![0, 3], vec![1, 2]]);
        assert!(!a.separates_support(&sq));

        let id = ProbMorphism::identity(&sq);
        assert!(atoms(&sq, &[&id]).separates_support(&sq));

        let trivial = atoms(&sq, &[]);
        assert_eq!(trivial.blocks(), &[vec![0, 1, 2, 3]]);
    }

    #[test]
    fn pushforward_preserves_total_mass() {
        let nu = z3_half();
        let maps: Vec<Vec<usize>> = vec![vec![0, 1, 2], vec![2, 2, 2], vec![1, 0, 1]];
        for m in maps {
            let total: Rat = pushforward(&m, &nu, 3).into_iter().sum();
            assert!(total.is_one());
        }
    }
}
