//! The algebra `A(fan)`: cone-indexed matrices over `Q[N]` whose `(sigma, tau)`
//! entry is divisible by the product of `t^v - 1` over the rays of `sigma`
//! missing from `tau`.
//!
//! Generators are normalized with `t^v - 1` rather than `1 - t^v`; the two
//! give the same algebra, and with this sign the monodromy `1 + vu` is the
//! torus action of `t^v`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::fan::{ConeId, CoveringPair, Fan};
use crate::lattice::{IntMatrix, LatticeVector};
use crate::laurent::{rat, LaurentPoly, Rational};

pub type Entries = BTreeMap<(ConeId, ConeId), LaurentPoly>;

static VALIDATE: AtomicBool = AtomicBool::new(true);

/// Turns the post-operation membership re-check on or off. The check only
/// runs in builds with debug assertions.
pub fn set_validation(enabled: bool) {
    VALIDATE.store(enabled, Ordering::Relaxed);
}

fn validating() -> bool {
    cfg!(debug_assertions) && VALIDATE.load(Ordering::Relaxed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Member,
    NotMember { row: ConeId, col: ConeId },
}

impl Membership {
    pub fn is_member(self) -> bool {
        self == Membership::Member
    }
}

/// Checks the divisibility condition on every entry of a raw matrix.
pub fn is_member(fan: &Fan, entries: &Entries) -> Result<Membership> {
    for (&(row, col), p) in entries {
        if row.0 >= fan.num_cones() || col.0 >= fan.num_cones() {
            return Err(Error::UnknownCone(format!("({}, {})", row.0, col.0)));
        }
        if p.nvars() != fan.rank() {
            return Err(Error::DimensionMismatch { expected: fan.rank(), found: p.nvars() });
        }
        if fan.divide_for_pair(p, row, col)?.is_none() {
            return Ok(Membership::NotMember { row, col });
        }
    }
    Ok(Membership::Member)
}

#[derive(Clone, Debug)]
pub struct AlgebraElement {
    fan: Arc<Fan>,
    entries: Entries,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        same_fan(&self.fan, &other.fan) && self.entries == other.entries
    }
}

impl Eq for AlgebraElement {}

pub(crate) fn same_fan(a: &Arc<Fan>, b: &Arc<Fan>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl AlgebraElement {
    pub fn zero(fan: &Arc<Fan>) -> Self {
        AlgebraElement { fan: fan.clone(), entries: Entries::new() }
    }

    /// The identity matrix.
    pub fn unit(fan: &Arc<Fan>) -> Self {
        Self::scalar(fan, LaurentPoly::one(fan.rank()))
    }

    /// `f` times the identity; these are central.
    pub fn scalar(fan: &Arc<Fan>, f: LaurentPoly) -> Self {
        let entries = if f.is_zero() {
            Entries::new()
        } else {
            fan.cone_ids().map(|c| ((c, c), f.clone())).collect()
        };
        AlgebraElement { fan: fan.clone(), entries }
    }

    /// `E_{sigma,sigma}`.
    pub fn diagonal_unit(fan: &Arc<Fan>, sigma: ConeId) -> Self {
        let mut entries = Entries::new();
        entries.insert((sigma, sigma), LaurentPoly::one(fan.rank()));
        AlgebraElement { fan: fan.clone(), entries }
    }

    /// `e_sigma`, the sum of `E_{tau,tau}` over the faces of `sigma`.
    pub fn idempotent(fan: &Arc<Fan>, sigma: ConeId) -> Self {
        let entries = fan.faces(sigma).into_iter().map(|t| ((t, t), LaurentPoly::one(fan.rank()))).collect();
        AlgebraElement { fan: fan.clone(), entries }
    }

    /// `x E_{sigma,tau}`, rejected unless it lies in the algebra.
    pub fn matrix_unit(fan: &Arc<Fan>, sigma: ConeId, tau: ConeId, x: LaurentPoly) -> Result<Self> {
        let mut entries = Entries::new();
        if !x.is_zero() {
            entries.insert((sigma, tau), x);
        }
        Self::from_entries(fan, entries)
    }

    pub fn from_entries(fan: &Arc<Fan>, mut entries: Entries) -> Result<Self> {
        entries.retain(|_, p| !p.is_zero());
        match is_member(fan, &entries)? {
            Membership::Member => Ok(AlgebraElement { fan: fan.clone(), entries }),
            Membership::NotMember { row, col } => Err(Error::NotMember { row: fan.key(row), col: fan.key(col) }),
        }
    }

    fn from_trusted(fan: &Arc<Fan>, mut entries: Entries) -> Self {
        entries.retain(|_, p| !p.is_zero());
        let x = AlgebraElement { fan: fan.clone(), entries };
        x.debug_check();
        x
    }

    fn debug_check(&self) {
        if validating() {
            let m = is_member(&self.fan, &self.entries).expect("well-formed entries");
            assert!(m.is_member(), "algebra operation left the algebra: {m:?}");
        }
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn entry(&self, row: ConeId, col: ConeId) -> Option<&LaurentPoly> {
        self.entries.get(&(row, col))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn check_fan(&self, other: &Self) -> Result<()> {
        if same_fan(&self.fan, &other.fan) {
            Ok(())
        } else {
            Err(Error::FanMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_fan(other)?;
        let mut entries = self.entries.clone();
        for (k, p) in &other.entries {
            let sum = match entries.get(k) {
                Some(q) => q + p,
                None => p.clone(),
            };
            entries.insert(*k, sum);
        }
        Ok(Self::from_trusted(&self.fan, entries))
    }

    pub fn neg(&self) -> Self {
        let entries = self.entries.iter().map(|(k, p)| (*k, -p)).collect();
        AlgebraElement { fan: self.fan.clone(), entries }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_fan(other)?;
        let mut by_row: BTreeMap<ConeId, Vec<(ConeId, &LaurentPoly)>> = BTreeMap::new();
        for (&(r, c), p) in &other.entries {
            by_row.entry(r).or_default().push((c, p));
        }
        let mut entries = Entries::new();
        for (&(a, b), p) in &self.entries {
            let Some(row) = by_row.get(&b) else { continue };
            for &(c, q) in row {
                let prod = p * q;
                let sum = match entries.get(&(a, c)) {
                    Some(acc) => acc + &prod,
                    None => prod,
                };
                entries.insert((a, c), sum);
            }
        }
        Ok(Self::from_trusted(&self.fan, entries))
    }

    /// Multiplication by a central element `f * 1`.
    pub fn scale(&self, f: &LaurentPoly) -> Self {
        let entries = self.entries.iter().map(|(k, p)| (*k, p * f)).collect();
        Self::from_trusted(&self.fan, entries)
    }

    pub fn scalar_mul(&self, c: &Rational) -> Self {
        let entries = self.entries.iter().map(|(k, p)| (*k, p.scale(c))).collect();
        Self::from_trusted(&self.fan, entries)
    }

    /// `e_sigma x e_tau`.
    pub fn corner(&self, sigma: ConeId, tau: ConeId) -> Self {
        let entries = self
            .entries
            .iter()
            .filter(|((r, c), _)| self.fan.is_face(*r, sigma) && self.fan.is_face(*c, tau))
            .map(|(k, p)| (*k, p.clone()))
            .collect();
        AlgebraElement { fan: self.fan.clone(), entries }
    }

    /// Rows within faces of `sigma`, columns within faces of `tau`.
    pub fn supported_in(&self, sigma: ConeId, tau: ConeId) -> bool {
        self.entries.keys().all(|&(r, c)| self.fan.is_face(r, sigma) && self.fan.is_face(c, tau))
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for (i, ((r, c), p)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({p})E[{{{}}},{{{}}}]", self.fan.key(*r), self.fan.key(*c))?;
        }
        Ok(())
    }
}

/// Names of the algebra generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorLabel {
    /// `E_{sigma,sigma}`.
    Idempotent(ConeId),
    /// `t^{+-e_axis}` times the unit.
    Central { axis: usize, inverse: bool },
    /// `(t^v - 1) E_{upper,lower}`: the map `u` from the smaller cone to the larger.
    Up(CoveringPair),
    /// `E_{lower,upper}`: the map `v` back down.
    Down(CoveringPair),
}

impl GeneratorLabel {
    pub fn describe(&self, fan: &Fan) -> String {
        match *self {
            GeneratorLabel::Idempotent(s) => format!("E[{{{}}}]", fan.key(s)),
            GeneratorLabel::Central { axis, inverse } => {
                format!("t{}^{}", axis + 1, if inverse { "-1" } else { "1" })
            }
            GeneratorLabel::Up(p) => format!("u[{{{}}}->{{{}}}]", fan.key(p.lower), fan.key(p.upper)),
            GeneratorLabel::Down(p) => format!("v[{{{}}}->{{{}}}]", fan.key(p.upper), fan.key(p.lower)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: GeneratorLabel,
    pub element: AlgebraElement,
}

pub fn generator_element(fan: &Arc<Fan>, label: GeneratorLabel) -> AlgebraElement {
    let n = fan.rank();
    let mut entries = Entries::new();
    match label {
        GeneratorLabel::Idempotent(s) => return AlgebraElement::diagonal_unit(fan, s),
        GeneratorLabel::Central { axis, inverse } => {
            let mut e = LatticeVector::unit(n, axis);
            if inverse {
                e = e.neg();
            }
            return AlgebraElement::scalar(fan, LaurentPoly::monomial(&e));
        }
        GeneratorLabel::Up(p) => {
            entries.insert((p.upper, p.lower), LaurentPoly::binomial(fan.ray(p.ray)));
        }
        GeneratorLabel::Down(p) => {
            entries.insert((p.lower, p.upper), LaurentPoly::one(n));
        }
    }
    AlgebraElement::from_trusted(fan, entries)
}

/// Diagonal idempotents, central monomials `t^{+-e_j}`, and a `u`/`v` pair for
/// every covering pair of cones.
pub fn generators(fan: &Arc<Fan>) -> Vec<Generator> {
    let mut labels: Vec<GeneratorLabel> = fan.cone_ids().map(GeneratorLabel::Idempotent).collect();
    for axis in 0..fan.rank() {
        labels.push(GeneratorLabel::Central { axis, inverse: false });
        labels.push(GeneratorLabel::Central { axis, inverse: true });
    }
    let pairs = fan.covering_pairs();
    labels.extend(pairs.iter().map(|&p| GeneratorLabel::Up(p)));
    labels.extend(pairs.iter().map(|&p| GeneratorLabel::Down(p)));
    labels.into_iter().map(|label| Generator { label, element: generator_element(fan, label) }).collect()
}

/// `central * E_{start,start} * factors[0] * factors[1] * ...`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub central: LaurentPoly,
    pub start: ConeId,
    pub factors: Vec<GeneratorLabel>,
}

impl Word {
    pub fn to_element(&self, fan: &Arc<Fan>) -> AlgebraElement {
        let mut acc = AlgebraElement::diagonal_unit(fan, self.start).scale(&self.central);
        for &f in &self.factors {
            acc = acc.mul(&generator_element(fan, f)).expect("same fan");
        }
        acc
    }

    pub fn describe(&self, fan: &Fan) -> String {
        let mut parts = vec![format!("({})", self.central), GeneratorLabel::Idempotent(self.start).describe(fan)];
        parts.extend(self.factors.iter().map(|f| f.describe(fan)));
        parts.join(" * ")
    }
}

/// Writes each entry `x E_{sigma,tau}` as `y * (u-chain up from sigma∩tau to
/// sigma) * (v-chain down from tau to sigma∩tau)`, using covering chains that
/// add rays in increasing index order.
pub fn factorize(x: &AlgebraElement) -> Result<Vec<Word>> {
    factorize_with(x, &mut |rays: Vec<usize>| rays)
}

/// As [`factorize`], with the order of rays along each chain shuffled.
pub fn factorize_shuffled<R: Rng>(x: &AlgebraElement, rng: &mut R) -> Result<Vec<Word>> {
    use rand::seq::SliceRandom;
    factorize_with(x, &mut |mut rays: Vec<usize>| {
        rays.shuffle(rng);
        rays
    })
}

fn factorize_with(x: &AlgebraElement, order: &mut dyn FnMut(Vec<usize>) -> Vec<usize>) -> Result<Vec<Word>> {
    let fan = &x.fan;
    let mut words = Vec::with_capacity(x.entries.len());
    for (&(sigma, tau), p) in &x.entries {
        let meet = fan.intersection(sigma, tau);
        let central = fan
            .divide_for_pair(p, sigma, tau)?
            .ok_or_else(|| Error::NotMember { row: fan.key(sigma), col: fan.key(tau) })?;
        let mut ups = chain(fan, meet, order(fan.difference(sigma, meet)), GeneratorLabel::Up);
        ups.reverse();
        let downs = chain(fan, meet, order(fan.difference(tau, meet)), GeneratorLabel::Down);
        ups.extend(downs);
        let word = Word { central, start: sigma, factors: ups };
        if validating() {
            let back = word.to_element(fan);
            assert_eq!(back.entries.len(), 1);
            assert_eq!(back.entry(sigma, tau), Some(p), "factorization does not multiply back");
        }
        words.push(word);
    }
    Ok(words)
}

fn chain(fan: &Fan, from: ConeId, rays: Vec<usize>, make: fn(CoveringPair) -> GeneratorLabel) -> Vec<GeneratorLabel> {
    let mut cur = fan.cone(from).to_vec();
    let mut out = Vec::with_capacity(rays.len());
    for ray in rays {
        let lower = fan.cone_id(&cur).expect("face");
        cur.push(ray);
        let upper = fan.cone_id(&cur).expect("face");
        out.push(make(CoveringPair { lower, upper, ray }));
    }
    out
}

/// Normal form of an element of `e_sigma A e_meet (x)_{A_meet} e_meet A e_tau`
/// with `meet = sigma ∩ tau`: the sum over `(alpha, beta)` of
/// `n E_{alpha, alpha∩beta} (x) E_{alpha∩beta, beta}`, stored as `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorWord {
    fan: Arc<Fan>,
    sigma: ConeId,
    tau: ConeId,
    terms: Entries,
}

impl TensorWord {
    pub fn sigma(&self) -> ConeId {
        self.sigma
    }

    pub fn tau(&self) -> ConeId {
        self.tau
    }

    pub fn meet(&self) -> ConeId {
        self.fan.intersection(self.sigma, self.tau)
    }

    pub fn terms(&self) -> &Entries {
        &self.terms
    }

    /// The simple tensors `(n E_{alpha, alpha∩beta}, E_{alpha∩beta, beta})`.
    pub fn simple_tensors(&self) -> Vec<(AlgebraElement, AlgebraElement)> {
        self.terms
            .iter()
            .map(|(&(alpha, beta), n)| {
                let gamma = self.fan.intersection(alpha, beta);
                let mut l = Entries::new();
                l.insert((alpha, gamma), n.clone());
                let mut r = Entries::new();
                r.insert((gamma, beta), LaurentPoly::one(self.fan.rank()));
                (AlgebraElement::from_trusted(&self.fan, l), AlgebraElement::from_trusted(&self.fan, r))
            })
            .collect()
    }

    /// The class of `left (x) right`, reduced to normal form with
    /// `n E_{alpha,gamma} (x) m E_{gamma,beta} = nm E_{alpha,beta∩alpha} (x) E_{beta∩alpha,beta}`.
    pub fn tensor(left: &AlgebraElement, right: &AlgebraElement, sigma: ConeId, tau: ConeId) -> Result<Self> {
        left.check_fan(right)?;
        let fan = &left.fan;
        let meet = fan.intersection(sigma, tau);
        if !left.supported_in(sigma, meet) {
            return Err(Error::Support("left factor must lie in e_sigma A e_(sigma∩tau)".into()));
        }
        if !right.supported_in(meet, tau) {
            return Err(Error::Support("right factor must lie in e_(sigma∩tau) A e_tau".into()));
        }
        let mut terms = Entries::new();
        for (&(alpha, gamma), n) in &left.entries {
            for (&(g2, beta), m) in &right.entries {
                if g2 != gamma {
                    continue;
                }
                let prod = n * m;
                let sum = match terms.get(&(alpha, beta)) {
                    Some(acc) => acc + &prod,
                    None => prod,
                };
                terms.insert((alpha, beta), sum);
            }
        }
        terms.retain(|_, p| !p.is_zero());
        Ok(TensorWord { fan: fan.clone(), sigma, tau, terms })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !same_fan(&self.fan, &other.fan) || self.sigma != other.sigma || self.tau != other.tau {
            return Err(Error::FanMismatch);
        }
        let mut terms = self.terms.clone();
        for (k, p) in &other.terms {
            let sum = match terms.get(k) {
                Some(q) => q + p,
                None => p.clone(),
            };
            terms.insert(*k, sum);
        }
        terms.retain(|_, p| !p.is_zero());
        Ok(TensorWord { fan: self.fan.clone(), sigma: self.sigma, tau: self.tau, terms })
    }
}

/// The splitting `n E_{alpha,beta} -> n E_{alpha,beta∩alpha} (x) E_{beta∩alpha,beta}`.
pub fn delta(x: &AlgebraElement, sigma: ConeId, tau: ConeId) -> Result<TensorWord> {
    if !x.supported_in(sigma, tau) {
        return Err(Error::Support(format!(
            "element is not in e_{{{}}} A e_{{{}}}",
            x.fan.key(sigma),
            x.fan.key(tau)
        )));
    }
    Ok(TensorWord { fan: x.fan.clone(), sigma, tau, terms: x.entries.clone() })
}

/// Multiplication `a (x) b -> ab`.
pub fn mu(w: &TensorWord) -> AlgebraElement {
    let mut acc = AlgebraElement::zero(&w.fan);
    for (l, r) in w.simple_tensors() {
        acc = acc.add(&l.mul(&r).expect("same fan")).expect("same fan");
    }
    acc
}

/// Runs `mu(delta(x)) == x` on `trials` random members of `e_sigma A e_tau`
/// for every ordered pair of maximal cones. Trial `i` of the `k`-th pair uses
/// seed `seed + k * trials + i`.
pub fn mu_delta_check(fan: &Arc<Fan>, trials: usize, seed: u64, cfg: &RandomElementConfig) -> Result<Report> {
    let mut report = Report::new();
    let maximal = fan.maximal_cones();
    let pairs = maximal.iter().flat_map(|&s| maximal.iter().map(move |&t| (s, t)));
    for (k, (sigma, tau)) in pairs.enumerate() {
        for i in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add((k * trials + i) as u64));
            let x = random_corner_member(fan, sigma, tau, &mut rng, cfg);
            if mu(&delta(&x, sigma, tau)?) != x {
                report.push("MUDELTA", format!("{{{}}} {{{}}}", fan.key(sigma), fan.key(tau)), format!("trial {i}"));
            }
        }
    }
    Ok(report)
}

/// Applies the lattice automorphism `beta` to every entry and relabels rows
/// and columns by the induced cone bijection onto `target`.
pub fn transport(x: &AlgebraElement, beta: &IntMatrix, target: &Arc<Fan>) -> Result<AlgebraElement> {
    let map = x.fan.map_onto(beta, target)?;
    let mut entries = Entries::new();
    for (&(r, c), p) in &x.entries {
        entries.insert((map[r.0], map[c.0]), p.monomial_map(beta)?);
    }
    AlgebraElement::from_entries(target, entries)
}

/// Shape of random elements used by property checks.
#[derive(Clone, Copy, Debug)]
pub struct RandomElementConfig {
    pub max_terms: usize,
    pub exponent_bound: i64,
    pub coeff_bound: i64,
    /// Probability that a given entry is nonzero.
    pub density: f64,
}

impl Default for RandomElementConfig {
    fn default() -> Self {
        RandomElementConfig { max_terms: 3, exponent_bound: 2, coeff_bound: 3, density: 0.35 }
    }
}

pub fn random_poly<R: Rng>(nvars: usize, rng: &mut R, cfg: &RandomElementConfig) -> LaurentPoly {
    let terms = rng.gen_range(1..=cfg.max_terms.max(1));
    let mut p = LaurentPoly::zero(nvars);
    for _ in 0..terms {
        let c = rng.gen_range(-cfg.coeff_bound..=cfg.coeff_bound);
        let e: Vec<i64> = (0..nvars).map(|_| rng.gen_range(-cfg.exponent_bound..=cfg.exponent_bound)).collect();
        p = &p + &LaurentPoly::from_i64(nvars, &[(c, &e)]);
    }
    p
}

/// A random member supported on the given rows and columns.
pub fn random_member<R: Rng>(
    fan: &Arc<Fan>,
    rows: &[ConeId],
    cols: &[ConeId],
    rng: &mut R,
    cfg: &RandomElementConfig,
) -> AlgebraElement {
    let mut entries = Entries::new();
    for &r in rows {
        for &c in cols {
            if rng.gen_bool(cfg.density) {
                let p = &random_poly(fan.rank(), rng, cfg) * &fan.binomial_product(r, c);
                entries.insert((r, c), p);
            }
        }
    }
    AlgebraElement::from_trusted(fan, entries)
}

/// A random member of `e_sigma A e_tau`.
pub fn random_corner_member<R: Rng>(
    fan: &Arc<Fan>,
    sigma: ConeId,
    tau: ConeId,
    rng: &mut R,
    cfg: &RandomElementConfig,
) -> AlgebraElement {
    random_member(fan, &fan.faces(sigma), &fan.faces(tau), rng, cfg)
}

/// A random element of the whole algebra.
pub fn random_element<R: Rng>(fan: &Arc<Fan>, rng: &mut R, cfg: &RandomElementConfig) -> AlgebraElement {
    let all: Vec<ConeId> = fan.cone_ids().collect();
    random_member(fan, &all, &all, rng, cfg)
}

/// `t - 1` in one variable; handy in examples.
pub fn t_minus_one() -> LaurentPoly {
    &LaurentPoly::from_i64(1, &[(1, &[1])]) - &LaurentPoly::one(1)
}

/// Sum of a list of elements.
pub fn sum(fan: &Arc<Fan>, xs: &[AlgebraElement]) -> Result<AlgebraElement> {
    xs.iter().try_fold(AlgebraElement::zero(fan), |acc, x| acc.add(x))
}

/// `c * 1`, a rational scalar matrix.
pub fn rational_scalar(fan: &Arc<Fan>, c: i64) -> AlgebraElement {
    AlgebraElement::scalar(fan, LaurentPoly::constant(fan.rank(), rat(c)))
}

/// True when `x` is `f * 1` for some `f`.
pub fn is_scalar_matrix(x: &AlgebraElement) -> Option<LaurentPoly> {
    let fan = x.fan();
    let first = x.entry(fan.zero_cone(), fan.zero_cone())?.clone();
    let expected = AlgebraElement::scalar(fan, first.clone());
    (expected == *x).then_some(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::standard;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line() -> Arc<Fan> {
        Arc::new(standard::affine_space(1))
    }

    #[test]
    fn affine_line_generators() {
        let fan = line();
        let (zero, ray) = (fan.zero_cone(), fan.cone_id(&[0]).unwrap());
        let pair = fan.covering_pair(zero, ray).unwrap();
        let u = generator_element(&fan, GeneratorLabel::Up(pair));
        let v = generator_element(&fan, GeneratorLabel::Down(pair));
        assert_eq!(u.entry(ray, zero), Some(&t_minus_one()));
        assert_eq!(v.entry(zero, ray), Some(&LaurentPoly::one(1)));
        // 1 + vu + uv is t times the identity.
        let one = AlgebraElement::unit(&fan);
        let total = one.add(&v.mul(&u).unwrap()).unwrap().add(&u.mul(&v).unwrap()).unwrap();
        assert_eq!(total, AlgebraElement::scalar(&fan, LaurentPoly::from_i64(1, &[(1, &[1])])));
    }

    #[test]
    fn membership_witness() {
        let fan = line();
        let (zero, ray) = (fan.zero_cone(), fan.cone_id(&[0]).unwrap());
        let err = AlgebraElement::matrix_unit(&fan, ray, zero, LaurentPoly::one(1));
        assert!(matches!(err, Err(Error::NotMember { .. })));
        let mut e = Entries::new();
        e.insert((ray, zero), LaurentPoly::from_i64(1, &[(1, &[2])]));
        assert_eq!(is_member(&fan, &e).unwrap(), Membership::NotMember { row: ray, col: zero });
        assert!(AlgebraElement::matrix_unit(&fan, zero, ray, LaurentPoly::one(1)).is_ok());
    }

    #[test]
    fn factorization_multiplies_back() {
        let fan = Arc::new(standard::projective_plane());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cfg = RandomElementConfig::default();
        for _ in 0..10 {
            let x = random_element(&fan, &mut rng, &cfg);
            let words = factorize(&x).unwrap();
            let back = sum(&fan, &words.iter().map(|w| w.to_element(&fan)).collect::<Vec<_>>()).unwrap();
            assert_eq!(back, x);
            let shuffled = factorize_shuffled(&x, &mut rng).unwrap();
            let back = sum(&fan, &shuffled.iter().map(|w| w.to_element(&fan)).collect::<Vec<_>>()).unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn mu_after_delta_is_identity() {
        let fan = Arc::new(standard::projective_line());
        let maxes = fan.maximal_cones();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_corner_member(&fan, maxes[0], maxes[1], &mut rng, &RandomElementConfig::default());
        assert_eq!(mu(&delta(&x, maxes[0], maxes[1]).unwrap()), x);
    }

    #[test]
    fn delta_rejects_wrong_support() {
        let fan = Arc::new(standard::projective_line());
        let maxes = fan.maximal_cones();
        let x = AlgebraElement::diagonal_unit(&fan, maxes[1]);
        assert!(delta(&x, maxes[0], maxes[0]).is_err());
    }
}
