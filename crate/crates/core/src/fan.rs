//! Regular fans stored combinatorially: primitive rays plus cones as sorted
//! ray-index sets. For a regular cone the faces are exactly the subsets of its
//! generators, so polyhedral geometry is only needed to check the fan axiom.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{complete_to_basis, IntMatrix, LatticeVector};
use crate::laurent::{BinomialDivisor, LaurentPoly, Rational};
use crate::linalg::QMatrix;

/// Index of a cone in its fan's canonical cone list.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ConeId(pub usize);

/// `lower` is a facet of `upper`; `ray` is the generator in `upper` but not `lower`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CoveringPair {
    pub lower: ConeId,
    pub upper: ConeId,
    pub ray: usize,
}

/// Result of checking the fan axiom on all pairs of maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanCheck {
    pub ok: bool,
    /// A pair of maximal cones whose intersection is not a common face.
    pub witness: Option<(ConeId, ConeId)>,
    /// False when the fan is beyond the size the exact check is run on.
    pub fully_verified: bool,
}

/// Exact verification is run up to this rank and cone count.
pub const VERIFY_MAX_RANK: usize = 4;
pub const VERIFY_MAX_CONES: usize = 64;

#[derive(Clone, Debug)]
pub struct Fan {
    rank: usize,
    rays: Vec<LatticeVector>,
    /// Sorted by (dimension, lexicographic ray indices); index 0 is the zero cone.
    cones: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, ConeId>,
    maximal: Vec<bool>,
    divisors: Vec<BinomialDivisor>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.rays == other.rays && self.cones == other.cones
    }
}

impl Eq for Fan {}

impl Fan {
    /// Builds the face closure of the given cones after checking that the rays
    /// are primitive and distinct and that every cone is regular.
    pub fn build(rank: usize, rays: Vec<LatticeVector>, maximal_cones: &[Vec<usize>]) -> Result<Fan> {
        let mut divisors = Vec::with_capacity(rays.len());
        for (i, r) in rays.iter().enumerate() {
            if r.len() != rank {
                return Err(Error::InvalidFan(format!("ray {i} has length {}, rank is {rank}", r.len())));
            }
            if r.is_zero() {
                return Err(Error::InvalidFan(format!("ray {i} is zero")));
            }
            if !r.is_primitive() {
                return Err(Error::InvalidFan(format!("ray {i} = {r} is not primitive")));
            }
            if let Some(j) = rays[..i].iter().position(|s| s == r) {
                return Err(Error::InvalidFan(format!("rays {j} and {i} coincide")));
            }
            divisors.push(BinomialDivisor::new(r)?);
        }

        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        all.insert(Vec::new());
        for cone in maximal_cones {
            let mut c = cone.clone();
            c.sort_unstable();
            if c.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidFan(format!("cone {cone:?} repeats a ray")));
            }
            if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::InvalidFan(format!("cone {cone:?} refers to missing ray {bad}")));
            }
            let gens: Vec<LatticeVector> = c.iter().map(|&i| rays[i].clone()).collect();
            if complete_to_basis(rank, &gens).is_err() {
                return Err(Error::InvalidFan(format!("cone with rays {c:?} fails SNF test")));
            }
            let k = c.len();
            for mask in 0u64..(1u64 << k) {
                let face: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| c[b]).collect();
                all.insert(face);
            }
        }
        Ok(Self::from_cones(rank, rays, all.into_iter().collect(), divisors))
    }

    fn from_cones(
        rank: usize,
        rays: Vec<LatticeVector>,
        mut cones: Vec<Vec<usize>>,
        divisors: Vec<BinomialDivisor>,
    ) -> Fan {
        cones.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index = cones.iter().enumerate().map(|(i, c)| (c.clone(), ConeId(i))).collect();
        let maximal = cones
            .iter()
            .map(|c| !cones.iter().any(|d| d.len() > c.len() && is_subset(c, d)))
            .collect();
        Fan { rank, rays, cones, index, maximal, divisors }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn divisor(&self, ray: usize) -> &BinomialDivisor {
        &self.divisors[ray]
    }

    pub fn num_cones(&self) -> usize {
        self.cones.len()
    }

    pub fn cone_ids(&self) -> impl Iterator<Item = ConeId> {
        (0..self.cones.len()).map(ConeId)
    }

    pub fn cone(&self, id: ConeId) -> &[usize] {
        &self.cones[id.0]
    }

    pub fn dim(&self, id: ConeId) -> usize {
        self.cones[id.0].len()
    }

    pub fn zero_cone(&self) -> ConeId {
        ConeId(0)
    }

    pub fn cone_id(&self, rays: &[usize]) -> Option<ConeId> {
        let mut r = rays.to_vec();
        r.sort_unstable();
        self.index.get(&r).copied()
    }

    pub fn is_maximal(&self, id: ConeId) -> bool {
        self.maximal[id.0]
    }

    pub fn maximal_cones(&self) -> Vec<ConeId> {
        self.cone_ids().filter(|&c| self.is_maximal(c)).collect()
    }

    /// `tau` is a face of `sigma`.
    pub fn is_face(&self, tau: ConeId, sigma: ConeId) -> bool {
        is_subset(self.cone(tau), self.cone(sigma))
    }

    pub fn faces(&self, sigma: ConeId) -> Vec<ConeId> {
        self.cone_ids().filter(|&t| self.is_face(t, sigma)).collect()
    }

    pub fn intersection(&self, a: ConeId, b: ConeId) -> ConeId {
        let common: Vec<usize> = self.cone(a).iter().copied().filter(|r| self.cone(b).contains(r)).collect();
        self.index[&common]
    }

    /// Rays of `sigma` that are not in `tau`.
    pub fn difference(&self, sigma: ConeId, tau: ConeId) -> Vec<usize> {
        self.cone(sigma).iter().copied().filter(|r| !self.cone(tau).contains(r)).collect()
    }

    pub fn ray_vectors(&self, sigma: ConeId) -> Vec<LatticeVector> {
        self.cone(sigma).iter().map(|&i| self.rays[i].clone()).collect()
    }

    /// Product of `t^{v_i} - 1` over the rays in `sigma \ tau`.
    pub fn binomial_product(&self, sigma: ConeId, tau: ConeId) -> LaurentPoly {
        self.difference(sigma, tau)
            .iter()
            .fold(LaurentPoly::one(self.rank), |acc, &i| &acc * &LaurentPoly::binomial(&self.rays[i]))
    }

    /// Quotient of `f` by [`Fan::binomial_product`], if it divides.
    pub fn divide_for_pair(&self, f: &LaurentPoly, sigma: ConeId, tau: ConeId) -> Result<Option<LaurentPoly>> {
        let mut q = f.clone();
        for i in self.difference(sigma, tau) {
            match self.divisors[i].divide(&q)? {
                Some(next) => q = next,
                None => return Ok(None),
            }
        }
        Ok(Some(q))
    }

    /// Comma-joined sorted ray indices; empty for the zero cone.
    pub fn key(&self, id: ConeId) -> String {
        cone_key(self.cone(id))
    }

    pub fn parse_key(&self, key: &str) -> Result<ConeId> {
        let rays = parse_cone_key(key)?;
        self.cone_id(&rays).ok_or_else(|| Error::UnknownCone(key.to_string()))
    }

    pub fn covering_pairs(&self) -> Vec<CoveringPair> {
        let mut out = Vec::new();
        for upper in self.cone_ids() {
            for &ray in self.cone(upper) {
                let rest: Vec<usize> = self.cone(upper).iter().copied().filter(|&r| r != ray).collect();
                out.push(CoveringPair { lower: self.index[&rest], upper, ray });
            }
        }
        out.sort();
        out
    }

    pub fn covering_pair(&self, lower: ConeId, upper: ConeId) -> Option<CoveringPair> {
        let diff = self.difference(upper, lower);
        (self.dim(upper) == self.dim(lower) + 1 && diff.len() == 1 && self.is_face(lower, upper))
            .then(|| CoveringPair { lower, upper, ray: diff[0] })
    }

    /// A unimodular `beta` sending the rays of `sigma`, in order, to the first
    /// standard basis vectors.
    pub fn chart_normalization(&self, sigma: ConeId) -> Result<IntMatrix> {
        complete_to_basis(self.rank, &self.ray_vectors(sigma))?.inverse_unimodular()
    }

    /// The fan of faces of `sigma`, keeping the full ray list so cone keys agree.
    pub fn restrict_to(&self, sigma: ConeId) -> Fan {
        let cones = self.faces(sigma).into_iter().map(|c| self.cone(c).to_vec()).collect();
        Self::from_cones(self.rank, self.rays.clone(), cones, self.divisors.clone())
    }

    /// Cone ids of `self` as seen from a fan sharing its ray list.
    pub fn translate_cone(&self, other: &Fan, id: ConeId) -> Result<ConeId> {
        other.cone_id(self.cone(id)).ok_or_else(|| Error::UnknownCone(self.key(id)))
    }

    /// Same combinatorics, rays moved by the unimodular `beta`.
    pub fn image(&self, beta: &IntMatrix) -> Result<Fan> {
        if !beta.is_unimodular() || beta.rows() != self.rank {
            return Err(Error::NotUnimodular);
        }
        let rays = self.rays.iter().map(|r| beta.apply(r)).collect::<Result<Vec<_>>>()?;
        let divisors = rays.iter().map(BinomialDivisor::new).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_cones(self.rank, rays, self.cones.clone(), divisors))
    }

    /// The cone bijection induced by `beta` onto `target`.
    pub fn map_onto(&self, beta: &IntMatrix, target: &Fan) -> Result<Vec<ConeId>> {
        if beta.rows() != target.rank || beta.cols() != self.rank || !beta.is_unimodular() {
            return Err(Error::FanMap("matrix is not a lattice automorphism of the right size".into()));
        }
        if self.num_cones() != target.num_cones() {
            return Err(Error::FanMap(format!(
                "{} cones cannot map bijectively onto {}",
                self.num_cones(),
                target.num_cones()
            )));
        }
        let mut ray_image = HashMap::new();
        let mut out = Vec::with_capacity(self.num_cones());
        let mut seen = BTreeSet::new();
        for id in self.cone_ids() {
            let mut image = Vec::new();
            for &r in self.cone(id) {
                if let std::collections::hash_map::Entry::Vacant(e) = ray_image.entry(r) {
                    let w = beta.apply(&self.rays[r])?;
                    let j = target
                        .rays
                        .iter()
                        .position(|x| *x == w)
                        .ok_or_else(|| Error::FanMap(format!("image {w} of ray {r} is not a ray")))?;
                    e.insert(j);
                }
                image.push(ray_image[&r]);
            }
            let t = target
                .cone_id(&image)
                .ok_or_else(|| Error::FanMap(format!("image of cone {{{}}} is not a cone", self.key(id))))?;
            if !seen.insert(t) {
                return Err(Error::FanMap("cone map is not injective".into()));
            }
            out.push(t);
        }
        Ok(out)
    }

    /// Product fan on `Z^{n1} x Z^{n2}`; rays of `a` come first.
    pub fn product(a: &Fan, b: &Fan) -> Result<Fan> {
        let rank = a.rank + b.rank;
        let mut rays = Vec::new();
        for r in &a.rays {
            let mut v = r.0.clone();
            v.resize(rank, Zero::zero());
            rays.push(LatticeVector(v));
        }
        for r in &b.rays {
            let mut v = vec![Zero::zero(); a.rank];
            v.extend(r.0.iter().cloned());
            rays.push(LatticeVector(v));
        }
        let offset = a.rays.len();
        let mut maxes = Vec::new();
        for &x in &a.maximal_cones() {
            for &y in &b.maximal_cones() {
                let mut c = a.cone(x).to_vec();
                c.extend(b.cone(y).iter().map(|&i| i + offset));
                maxes.push(c);
            }
        }
        Fan::build(rank, rays, &maxes)
    }

    /// Checks that every two maximal cones meet in their common face.
    pub fn is_fan(&self) -> FanCheck {
        if self.rank > VERIFY_MAX_RANK || self.num_cones() > VERIFY_MAX_CONES {
            return FanCheck { ok: true, witness: None, fully_verified: false };
        }
        let maxes = self.maximal_cones();
        for (i, &a) in maxes.iter().enumerate() {
            for &b in &maxes[i + 1..] {
                if !separable(self.rank, &self.rays, self.cone(a), self.cone(b)) {
                    return FanCheck { ok: false, witness: Some((a, b)), fully_verified: true };
                }
            }
        }
        FanCheck { ok: true, witness: None, fully_verified: true }
    }
}

impl fmt::Display for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fan of rank {} with {} rays and {} cones", self.rank, self.rays.len(), self.cones.len())
    }
}

pub fn cone_key(rays: &[usize]) -> String {
    rays.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn parse_cone_key(key: &str) -> Result<Vec<usize>> {
    if key.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut rays = key
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| Error::MalformedKey(key.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let n = rays.len();
    rays.sort_unstable();
    rays.dedup();
    if rays.len() != n {
        return Err(Error::MalformedKey(key.to_string()));
    }
    Ok(rays)
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// Checks the fan axiom for raw cones given by ray indices, without requiring
/// regularity. Returns the first offending pair of cone positions.
pub fn fan_condition_witness(rank: usize, rays: &[LatticeVector], cones: &[Vec<usize>]) -> Option<(usize, usize)> {
    for i in 0..cones.len() {
        for j in i + 1..cones.len() {
            if !separable(rank, rays, &cones[i], &cones[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Looks for a functional vanishing on the common rays, positive on the rest
/// of `a` and negative on the rest of `b`. Such a functional exists exactly
/// when the simplicial cones meet along the cone on their common rays.
fn separable(rank: usize, rays: &[LatticeVector], a: &[usize], b: &[usize]) -> bool {
    let to_q = |v: &LatticeVector| -> Vec<Rational> { v.0.iter().map(|x| Rational::from_integer(x.clone())).collect() };
    let common: Vec<usize> = a.iter().copied().filter(|r| b.contains(r)).collect();
    let mut rows = Vec::new();
    for &r in &common {
        rows.extend(to_q(&rays[r]));
    }
    let kernel = if common.is_empty() {
        (0..rank)
            .map(|i| {
                let mut e = vec![Rational::zero(); rank];
                e[i] = Rational::one();
                e
            })
            .collect()
    } else {
        QMatrix::from_vec(common.len(), rank, rows).expect("shape").nullspace()
    };
    let dot = |x: &[Rational], y: &[Rational]| -> Rational { x.iter().zip(y).map(|(p, q)| p * q).sum() };

    let mut constraints = Vec::new();
    for (cone, sign) in [(a, Rational::one()), (b, -Rational::one())] {
        for &r in cone.iter().filter(|r| !common.contains(r)) {
            let v = to_q(&rays[r]);
            let g: Vec<Rational> = kernel.iter().map(|k| dot(k, &v) * &sign).collect();
            constraints.push((g, Rational::one()));
        }
    }
    fourier_motzkin_feasible(constraints, kernel.len())
}

/// Feasibility of `g . y >= h` over the rationals by Fourier-Motzkin elimination.
fn fourier_motzkin_feasible(constraints: Vec<(Vec<Rational>, Rational)>, vars: usize) -> bool {
    let mut cons: BTreeSet<(Vec<Rational>, Rational)> = constraints.into_iter().collect();
    for var in (0..vars).rev() {
        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), BTreeSet::new());
        for (mut g, h) in cons {
            let c = g.pop().expect("coefficient for every variable");
            debug_assert_eq!(g.len(), var);
            if c.is_positive() {
                pos.push((g, h, c));
            } else if c.is_negative() {
                neg.push((g, h, -c));
            } else {
                next.insert((g, h));
            }
        }
        for (gp, hp, cp) in &pos {
            for (gn, hn, cn) in &neg {
                let g: Vec<Rational> = gp.iter().zip(gn).map(|(x, y)| x / cp + y / cn).collect();
                let h = hp / cp + hn / cn;
                next.insert((g, h));
            }
        }
        cons = next;
    }
    cons.iter().all(|(_, h)| !h.is_positive())
}

/// Standard fans used throughout tests and demos.
pub mod standard {
    use super::*;

    fn v(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(x)
    }

    /// The cone on the first `k` basis vectors of `Z^n` with its faces.
    pub fn standard_cone(k: usize, n: usize) -> Fan {
        let rays = (0..k).map(|i| LatticeVector::unit(n, i)).collect();
        Fan::build(n, rays, &[(0..k).collect()]).expect("standard cone is regular")
    }

    /// `C^n` with its normal-crossings stratification.
    pub fn affine_space(n: usize) -> Fan {
        standard_cone(n, n)
    }

    /// The torus `(C^*)^n`: only the zero cone.
    pub fn torus(n: usize) -> Fan {
        Fan::build(n, Vec::new(), &[]).expect("zero fan")
    }

    pub fn projective_line() -> Fan {
        Fan::build(1, vec![v(&[1]), v(&[-1])], &[vec![0], vec![1]]).expect("P1")
    }

    pub fn projective_plane() -> Fan {
        Fan::build(2, vec![v(&[1, 0]), v(&[0, 1]), v(&[-1, -1])], &[vec![0, 1], vec![1, 2], vec![0, 2]])
            .expect("P2")
    }

    pub fn p1_times_p1() -> Fan {
        Fan::product(&projective_line(), &projective_line()).expect("P1xP1")
    }

    /// Hirzebruch surface `F_a`.
    pub fn hirzebruch(a: i64) -> Fan {
        Fan::build(
            2,
            vec![v(&[1, 0]), v(&[0, 1]), v(&[-1, a]), v(&[0, -1])],
            &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        )
        .expect("Hirzebruch surface")
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;

    fn v(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(x)
    }

    #[test]
    fn build_examples() {
        assert_eq!(projective_line().num_cones(), 3);
        let p2 = projective_plane();
        assert_eq!(p2.num_cones(), 7);
        assert_eq!(p2.maximal_cones().len(), 3);
        let err = Fan::build(2, vec![v(&[1, 0]), v(&[1, 2])], &[vec![0, 1]]).unwrap_err();
        assert_eq!(err, Error::InvalidFan("cone with rays [0, 1] fails SNF test".into()));
    }

    #[test]
    fn build_rejects_bad_rays() {
        assert!(Fan::build(1, vec![v(&[2])], &[vec![0]]).is_err());
        assert!(Fan::build(1, vec![v(&[1]), v(&[1])], &[vec![0]]).is_err());
        assert!(Fan::build(1, vec![v(&[0])], &[]).is_err());
        assert!(Fan::build(2, vec![v(&[1])], &[]).is_err());
    }

    #[test]
    fn cone_order_matches_paper_p1_layout() {
        let p1 = projective_line();
        let keys: Vec<String> = p1.cone_ids().map(|c| p1.key(c)).collect();
        assert_eq!(keys, vec!["", "0", "1"]);
    }

    #[test]
    fn is_fan_examples() {
        assert!(projective_plane().is_fan().ok);
        let line = Fan::build(1, vec![v(&[1])], &[vec![0]]).unwrap();
        assert!(line.is_fan().ok);
        assert!(hirzebruch(1).is_fan().ok);
        assert!(p1_times_p1().is_fan().ok);

        // Overlapping interiors; the second cone is not regular, so this goes
        // through the raw geometric check.
        let rays = vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1]), v(&[1, -1])];
        assert_eq!(fan_condition_witness(2, &rays, &[vec![0, 1], vec![2, 3]]), Some((0, 1)));

        // A regular overlapping pair rejected by is_fan itself.
        let overlap = Fan::build(2, vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1])], &[vec![0, 1], vec![1, 2]]).unwrap();
        let check = overlap.is_fan();
        assert!(!check.ok);
        assert!(check.fully_verified);
        assert!(check.witness.is_some());

        // Two opposite half-lines in the plane are fine; a ray inside a cone is not.
        let ok = Fan::build(2, vec![v(&[1, 0]), v(&[-1, 0])], &[vec![0], vec![1]]).unwrap();
        assert!(ok.is_fan().ok);
    }

    #[test]
    fn large_fans_are_flagged_unverified() {
        let big = affine_space(5);
        let check = big.is_fan();
        assert!(check.ok);
        assert!(!check.fully_verified);
    }

    #[test]
    fn covering_pair_examples() {
        let p1 = projective_line();
        let pairs: Vec<(String, String)> =
            p1.covering_pairs().iter().map(|p| (p1.key(p.lower), p1.key(p.upper))).collect();
        assert_eq!(pairs, vec![("".into(), "0".into()), ("".into(), "1".into())]);
        let p2 = projective_plane();
        assert_eq!(p2.covering_pairs().len(), 9);
        for p in p2.covering_pairs() {
            assert_eq!(p2.difference(p.upper, p.lower), vec![p.ray]);
        }
        assert!(torus(2).covering_pairs().is_empty());
    }

    #[test]
    fn chart_normalization_examples() {
        let c = affine_space(2);
        let top = c.maximal_cones()[0];
        assert_eq!(c.chart_normalization(top).unwrap(), IntMatrix::identity(2));

        let f = Fan::build(2, vec![v(&[0, 1])], &[vec![0]]).unwrap();
        let ray = f.cone_id(&[0]).unwrap();
        let beta = f.chart_normalization(ray).unwrap();
        assert_eq!(beta.apply(&v(&[0, 1])).unwrap(), v(&[1, 0]));
        assert!(beta.det().unwrap().abs().is_one());

        let g = Fan::build(2, vec![v(&[1, 1]), v(&[0, 1])], &[vec![0, 1]]).unwrap();
        let sigma = g.maximal_cones()[0];
        let beta = g.chart_normalization(sigma).unwrap();
        assert_eq!(beta.apply(&v(&[1, 1])).unwrap(), v(&[1, 0]));
        assert_eq!(beta.apply(&v(&[0, 1])).unwrap(), v(&[0, 1]));
    }

    #[test]
    fn chart_normalization_maps_charts_onto_standard_cones() {
        for fan in [projective_plane(), hirzebruch(1), p1_times_p1()] {
            for sigma in fan.maximal_cones() {
                let beta = fan.chart_normalization(sigma).unwrap();
                let chart = fan.restrict_to(sigma).image(&beta).unwrap();
                let map = fan.restrict_to(sigma).map_onto(&beta, &chart).unwrap();
                assert_eq!(map.len(), 4);
                for (j, r) in fan.cone(sigma).iter().enumerate() {
                    assert_eq!(beta.apply(fan.ray(*r)).unwrap(), LatticeVector::unit(2, j));
                }
            }
        }
    }

    #[test]
    fn keys_round_trip() {
        let p2 = projective_plane();
        for c in p2.cone_ids() {
            assert_eq!(p2.parse_key(&p2.key(c)).unwrap(), c);
        }
        assert!(matches!(p2.parse_key("0,x"), Err(Error::MalformedKey(_))));
        assert!(matches!(p2.parse_key("0,0"), Err(Error::MalformedKey(_))));
        assert!(matches!(p2.parse_key("5"), Err(Error::UnknownCone(_))));
    }

    #[test]
    fn product_fan_has_product_cones() {
        let f = p1_times_p1();
        assert_eq!(f.num_cones(), 9);
        assert_eq!(f.maximal_cones().len(), 4);
        assert_eq!(Fan::product(&affine_space(1), &affine_space(1)).unwrap(), affine_space(2));
    }
}
