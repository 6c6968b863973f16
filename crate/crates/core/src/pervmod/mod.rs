//! Finite-dimensional modules over `A(fan)` in diagram form: a vector space
//! per cone, commuting torus matrices, and `u`/`v` arrows on covering pairs.
//!
//! Axioms checked by [`DiagramModule::validate`]:
//! - A1: the torus matrices on each cone commute and are invertible;
//! - A2: arrows intertwine the torus matrices;
//! - A3: the `uu`, `vv` and mixed squares commute;
//! - A4: `T_tau(v) = id + vu` and `T_sigma(v) = id + uv` for each covering
//!   pair with new ray `v`, where `T(w)` is the torus action of `t^w`.

pub mod construct;
pub mod hom;
pub mod relations;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    factorize, factorize_shuffled, random_element, same_fan, AlgebraElement, GeneratorLabel, RandomElementConfig,
    Word,
};
use crate::error::{Error, Result};
use crate::fan::{ConeId, CoveringPair, Fan};
use crate::lattice::LatticeVector;
use crate::laurent::LaurentPoly;
use crate::linalg::QMatrix;
use crate::report::Report;

pub use hom::BlockMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramModule {
    fan: Arc<Fan>,
    dims: Vec<usize>,
    /// Per cone, one matrix per torus coordinate.
    torus: Vec<Vec<QMatrix>>,
    /// `V_lower -> V_upper`.
    u: BTreeMap<CoveringPair, QMatrix>,
    /// `V_upper -> V_lower`.
    v: BTreeMap<CoveringPair, QMatrix>,
}

pub(crate) fn cone_label(fan: &Fan, c: ConeId) -> String {
    format!("{{{}}}", fan.key(c))
}

pub(crate) fn pair_label(fan: &Fan, p: CoveringPair) -> String {
    format!("{}<{}", cone_label(fan, p.lower), cone_label(fan, p.upper))
}

impl DiagramModule {
    /// Checks shapes; missing arrows are zero.
    pub fn new(
        fan: &Arc<Fan>,
        dims: Vec<usize>,
        torus: Vec<Vec<QMatrix>>,
        u: BTreeMap<CoveringPair, QMatrix>,
        v: BTreeMap<CoveringPair, QMatrix>,
    ) -> Result<Self> {
        Self::with_torus_rank(fan, fan.rank(), dims, torus, u, v)
    }

    /// As [`DiagramModule::new`] with `ntorus` torus matrices per cone.
    pub fn with_torus_rank(
        fan: &Arc<Fan>,
        ntorus: usize,
        dims: Vec<usize>,
        torus: Vec<Vec<QMatrix>>,
        mut u: BTreeMap<CoveringPair, QMatrix>,
        mut v: BTreeMap<CoveringPair, QMatrix>,
    ) -> Result<Self> {
        let n = fan.num_cones();
        if dims.len() != n {
            return Err(Error::Shape(format!("{} spaces for {n} cones", dims.len())));
        }
        if torus.len() != n {
            return Err(Error::Shape(format!("torus data for {} cones, expected {n}", torus.len())));
        }
        for c in fan.cone_ids() {
            let d = dims[c.0];
            if torus[c.0].len() != ntorus {
                return Err(Error::Shape(format!(
                    "cone {}: {} torus matrices, expected {ntorus}",
                    cone_label(fan, c),
                    torus[c.0].len()
                )));
            }
            for (j, s) in torus[c.0].iter().enumerate() {
                if s.shape() != (d, d) {
                    return Err(Error::Shape(format!(
                        "cone {}: torus matrix {} is {:?}, space has dimension {d}",
                        cone_label(fan, c),
                        j + 1,
                        s.shape()
                    )));
                }
            }
        }
        let pairs = fan.covering_pairs();
        for (name, arrows) in [("u", &u), ("v", &v)] {
            if let Some(p) = arrows.keys().find(|p| fan.covering_pair(p.lower, p.upper) != Some(**p)) {
                return Err(Error::Shape(format!("{name} arrow on {:?}, which is not a covering pair", p)));
            }
        }
        for &p in &pairs {
            let (dl, du) = (dims[p.lower.0], dims[p.upper.0]);
            let a = u.entry(p).or_insert_with(|| QMatrix::zeros(du, dl));
            if a.shape() != (du, dl) {
                return Err(Error::Shape(format!("u on {} is {:?}, expected {:?}", pair_label(fan, p), a.shape(), (du, dl))));
            }
            let b = v.entry(p).or_insert_with(|| QMatrix::zeros(dl, du));
            if b.shape() != (dl, du) {
                return Err(Error::Shape(format!("v on {} is {:?}, expected {:?}", pair_label(fan, p), b.shape(), (dl, du))));
            }
        }
        Ok(DiagramModule { fan: fan.clone(), dims, torus, u, v })
    }

    /// The zero module.
    pub fn zero(fan: &Arc<Fan>) -> Self {
        let n = fan.num_cones();
        Self::new(fan, vec![0; n], vec![vec![QMatrix::zeros(0, 0); fan.rank()]; n], BTreeMap::new(), BTreeMap::new())
            .expect("zero module is well formed")
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn dim(&self, c: ConeId) -> usize {
        self.dims[c.0]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Start of each cone's block in the total space.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.dims
            .iter()
            .map(|d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }

    pub fn torus_rank(&self) -> usize {
        self.torus.first().map_or(0, Vec::len)
    }

    pub fn torus(&self, c: ConeId) -> &[QMatrix] {
        &self.torus[c.0]
    }

    pub fn u(&self, p: CoveringPair) -> &QMatrix {
        &self.u[&p]
    }

    pub fn v(&self, p: CoveringPair) -> &QMatrix {
        &self.v[&p]
    }

    pub fn u_arrows(&self) -> &BTreeMap<CoveringPair, QMatrix> {
        &self.u
    }

    pub fn v_arrows(&self) -> &BTreeMap<CoveringPair, QMatrix> {
        &self.v
    }

    /// `id + vu` on `V_lower`.
    pub fn monodromy_below(&self, p: CoveringPair) -> QMatrix {
        QMatrix::identity(self.dim(p.lower)).add(&self.v(p).mul(self.u(p)))
    }

    /// `id + uv` on `V_upper`.
    pub fn monodromy_above(&self, p: CoveringPair) -> QMatrix {
        QMatrix::identity(self.dim(p.upper)).add(&self.u(p).mul(self.v(p)))
    }

    /// `prod_j S_c(j)^{e_j}`, or `None` if a needed inverse does not exist.
    pub fn torus_element(&self, c: ConeId, exps: &[i64]) -> Option<QMatrix> {
        let mut acc = QMatrix::identity(self.dim(c));
        for (s, &e) in self.torus[c.0].iter().zip(exps) {
            if e != 0 {
                acc = acc.mul(&s.pow(e)?);
            }
        }
        Some(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn validate(&self) -> Report {
        let exps = |w: &LatticeVector| w.to_i64().ok();
        self.validate_with(&exps)
    }

    /// Axiom check with `T_c(w) = torus_element(c, exps(w))`.
    pub(crate) fn validate_with(&self, exps: &dyn Fn(&LatticeVector) -> Option<Vec<i64>>) -> Report {
        let fan = &self.fan;
        let mut report = Report::new();
        let mut invertible = vec![true; fan.num_cones()];

        for c in fan.cone_ids() {
            let ss = &self.torus[c.0];
            for (j, s) in ss.iter().enumerate() {
                if !s.is_invertible() {
                    invertible[c.0] = false;
                    report.push("A1", cone_label(fan, c), format!("S{} is not invertible", j + 1));
                }
            }
            for i in 0..ss.len() {
                for j in i + 1..ss.len() {
                    if ss[i].mul(&ss[j]) != ss[j].mul(&ss[i]) {
                        report.push("A1", cone_label(fan, c), format!("S{} and S{} do not commute", i + 1, j + 1));
                    }
                }
            }
        }

        for p in fan.covering_pairs() {
            let (u, v) = (self.u(p), self.v(p));
            for j in 0..self.torus_rank() {
                let (sl, su) = (&self.torus[p.lower.0][j], &self.torus[p.upper.0][j]);
                if u.mul(sl) != su.mul(u) {
                    report.push("A2", pair_label(fan, p), format!("u does not intertwine S{}", j + 1));
                }
                if v.mul(su) != sl.mul(v) {
                    report.push("A2", pair_label(fan, p), format!("v does not intertwine S{}", j + 1));
                }
            }
        }

        for sigma in fan.cone_ids() {
            let rays = fan.cone(sigma);
            for (ia, &a) in rays.iter().enumerate() {
                for &b in &rays[ia + 1..] {
                    self.check_square(sigma, a, b, &mut report);
                }
            }
        }

        for p in fan.covering_pairs() {
            let below = self.monodromy_below(p);
            let above = self.monodromy_above(p);
            if !below.is_invertible() {
                report.push("INV", pair_label(fan, p), "id + vu is not invertible");
            }
            if !above.is_invertible() {
                report.push("INV", pair_label(fan, p), "id + uv is not invertible");
            }
            let ray = fan.ray(p.ray);
            let Some(e) = exps(ray) else {
                report.push("A4", pair_label(fan, p), format!("exponent of ray {ray} out of range"));
                continue;
            };
            if invertible[p.lower.0] && self.torus_element(p.lower, &e) != Some(below) {
                report.push("A4", pair_label(fan, p), format!("T(v) != id + vu on {}", cone_label(fan, p.lower)));
            }
            if invertible[p.upper.0] && self.torus_element(p.upper, &e) != Some(above) {
                report.push("A4", pair_label(fan, p), format!("T(v) != id + uv on {}", cone_label(fan, p.upper)));
            }
        }
        report
    }

    /// The square `tau < rho, rho' < sigma` with `rho = tau + a`, `rho' = tau + b`.
    fn check_square(&self, sigma: ConeId, a: usize, b: usize, report: &mut Report) {
        let fan = &self.fan;
        let without = |x: usize| -> ConeId {
            let rest: Vec<usize> = fan.cone(sigma).iter().copied().filter(|&r| r != x).collect();
            fan.cone_id(&rest).expect("face")
        };
        let rho = without(b);
        let rho2 = without(a);
        let tau = fan.intersection(rho, rho2);
        let pair = |lo, hi| fan.covering_pair(lo, hi).expect("covering pair");
        let (t_r, t_r2, r_s, r2_s) = (pair(tau, rho), pair(tau, rho2), pair(rho, sigma), pair(rho2, sigma));
        let loc = format!(
            "square {}<{},{}<{}",
            cone_label(fan, tau),
            cone_label(fan, rho),
            cone_label(fan, rho2),
            cone_label(fan, sigma)
        );
        if self.u(r_s).mul(self.u(t_r)) != self.u(r2_s).mul(self.u(t_r2)) {
            report.push("A3", loc.clone(), "u squares differ");
        }
        if self.v(t_r).mul(self.v(r_s)) != self.v(t_r2).mul(self.v(r2_s)) {
            report.push("A3", loc.clone(), "v squares differ");
        }
        if self.v(r_s).mul(self.u(r2_s)) != self.u(t_r).mul(self.v(t_r2)) {
            report.push("A3", loc.clone(), format!("mixed square {} -> {} differs", cone_label(fan, rho2), cone_label(fan, rho)));
        }
        if self.v(r2_s).mul(self.u(r_s)) != self.u(t_r2).mul(self.v(t_r)) {
            report.push("A3", loc, format!("mixed square {} -> {} differs", cone_label(fan, rho), cone_label(fan, rho2)));
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// The sub-diagram on the faces of `sigma`, over the restricted fan.
    pub fn restrict(&self, sigma: ConeId) -> Result<DiagramModule> {
        if sigma.0 >= self.fan.num_cones() {
            return Err(Error::UnknownCone(format!("#{}", sigma.0)));
        }
        let sub = Arc::new(self.fan.restrict_to(sigma));
        let to_global = |c: ConeId| sub.translate_cone(&self.fan, c).expect("face of sigma");
        let dims = sub.cone_ids().map(|c| self.dim(to_global(c))).collect();
        let torus = sub.cone_ids().map(|c| self.torus(to_global(c)).to_vec()).collect();
        let mut u = BTreeMap::new();
        let mut v = BTreeMap::new();
        for p in sub.covering_pairs() {
            let g = CoveringPair { lower: to_global(p.lower), upper: to_global(p.upper), ray: p.ray };
            u.insert(p, self.u(g).clone());
            v.insert(p, self.v(g).clone());
        }
        DiagramModule::with_torus_rank(&sub, self.torus_rank(), dims, torus, u, v)
    }

    #[cfg(test)]
    pub(crate) fn torus_mut(&mut self) -> &mut Vec<Vec<QMatrix>> {
        &mut self.torus
    }
}

/// Evaluates algebra elements on a validated module.
pub struct Evaluator<'a> {
    m: &'a DiagramModule,
    offsets: Vec<usize>,
}

impl<'a> Evaluator<'a> {
    /// Fails with [`Error::InvalidModule`] unless `m` passes validation.
    pub fn new(m: &'a DiagramModule) -> Result<Self> {
        if m.torus_rank() != m.fan.rank() {
            return Err(Error::InvalidModule("torus data does not match the fan rank".into()));
        }
        let report = m.validate();
        if let Some(f) = report.findings.first() {
            return Err(Error::InvalidModule(f.to_string().replace('\t', " ")));
        }
        Ok(Evaluator { m, offsets: m.offsets() })
    }

    fn monomial(&self, c: ConeId, e: &[BigInt]) -> Result<QMatrix> {
        let exps = e
            .iter()
            .map(|x| x.to_i64().ok_or_else(|| Error::Overflow(format!("exponent {x}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.m.torus_element(c, &exps).expect("validated module has invertible torus"))
    }

    /// Action of a Laurent polynomial on `V_c` through the torus.
    pub fn central(&self, c: ConeId, y: &LaurentPoly) -> Result<QMatrix> {
        let d = self.m.dim(c);
        let mut acc = QMatrix::zeros(d, d);
        if d == 0 {
            return Ok(acc);
        }
        for (e, coeff) in y.terms() {
            acc = acc.add(&self.monomial(c, e)?.scale(coeff));
        }
        Ok(acc)
    }

    /// The word as a map `V_end -> V_start`, with its end cone.
    pub fn word_block(&self, w: &Word) -> Result<(QMatrix, ConeId)> {
        let mut block = self.central(w.start, &w.central)?;
        let mut cur = w.start;
        for f in &w.factors {
            match *f {
                GeneratorLabel::Idempotent(s) => {
                    if s != cur {
                        return Ok((QMatrix::zeros(self.m.dim(w.start), self.m.dim(s)), s));
                    }
                }
                GeneratorLabel::Central { axis, inverse } => {
                    let mut e = vec![0i64; self.m.fan.rank()];
                    e[axis] = if inverse { -1 } else { 1 };
                    block = block.mul(&self.m.torus_element(cur, &e).expect("invertible torus"));
                }
                GeneratorLabel::Up(p) => {
                    if p.upper != cur {
                        return Ok((QMatrix::zeros(self.m.dim(w.start), self.m.dim(p.lower)), p.lower));
                    }
                    block = block.mul(self.m.u(p));
                    cur = p.lower;
                }
                GeneratorLabel::Down(p) => {
                    if p.lower != cur {
                        return Ok((QMatrix::zeros(self.m.dim(w.start), self.m.dim(p.upper)), p.upper));
                    }
                    block = block.mul(self.m.v(p));
                    cur = p.upper;
                }
            }
        }
        Ok((block, cur))
    }

    pub fn evaluate_words(&self, words: &[Word]) -> Result<QMatrix> {
        let n = self.m.total_dim();
        let mut total = QMatrix::zeros(n, n);
        for w in words {
            let (block, end) = self.word_block(w)?;
            let (r0, c0) = (self.offsets[w.start.0], self.offsets[end.0]);
            for i in 0..block.rows() {
                for j in 0..block.cols() {
                    total[(r0 + i, c0 + j)] += &block[(i, j)];
                }
            }
        }
        Ok(total)
    }

    /// The action of `x` on the total space.
    pub fn evaluate(&self, x: &AlgebraElement) -> Result<QMatrix> {
        if !same_fan(x.fan(), &self.m.fan) {
            return Err(Error::FanMismatch);
        }
        self.evaluate_words(&factorize(x)?)
    }

    /// As [`Evaluator::evaluate`] but through randomly ordered covering chains.
    pub fn evaluate_shuffled<R: rand::Rng>(&self, x: &AlgebraElement, rng: &mut R) -> Result<QMatrix> {
        if !same_fan(x.fan(), &self.m.fan) {
            return Err(Error::FanMismatch);
        }
        self.evaluate_words(&factorize_shuffled(x, rng)?)
    }
}

/// The action of `x` on `m` as a total square matrix.
pub fn evaluate(x: &AlgebraElement, m: &DiagramModule) -> Result<QMatrix> {
    Evaluator::new(m)?.evaluate(x)
}

#[derive(Clone, Debug)]
pub struct RepFailure {
    pub trial: usize,
    pub property: &'static str,
    pub a: AlgebraElement,
    pub b: AlgebraElement,
}

#[derive(Clone, Debug)]
pub struct RepCheck {
    pub trials: usize,
    pub failure: Option<RepFailure>,
}

impl RepCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks additivity, multiplicativity and chain independence of
/// [`evaluate`] on `trials` random pairs. Trial `i` uses seed `seed + i`.
pub fn rep_check(m: &DiagramModule, trials: usize, seed: u64) -> Result<RepCheck> {
    rep_check_with(m, trials, seed, &RandomElementConfig::default())
}

pub fn rep_check_with(m: &DiagramModule, trials: usize, seed: u64, cfg: &RandomElementConfig) -> Result<RepCheck> {
    let ev = Evaluator::new(m)?;
    let fan = m.fan();
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
        let a = random_element(fan, &mut rng, cfg);
        let b = random_element(fan, &mut rng, cfg);
        let (ea, eb) = (ev.evaluate(&a)?, ev.evaluate(&b)?);
        let fail = |property| Ok(RepCheck { trials, failure: Some(RepFailure { trial, property, a: a.clone(), b: b.clone() }) });
        if ev.evaluate(&a.add(&b)?)? != ea.add(&eb) {
            return fail("additive");
        }
        if ev.evaluate(&a.mul(&b)?)? != ea.mul(&eb) {
            return fail("multiplicative");
        }
        if ev.evaluate_shuffled(&a, &mut rng)? != ea {
            return fail("chain independence");
        }
    }
    Ok(RepCheck { trials, failure: None })
}

#[cfg(test)]
mod tests {
    use super::construct::*;
    use super::*;
    use crate::algebra::generator_element;
    use crate::fan::standard;
    use crate::laurent::rat;

    #[test]
    fn line_module_with_monodromy_two() {
        let m = c1_module(&QMatrix::from_i64(&[vec![1]]), &QMatrix::from_i64(&[vec![1]])).unwrap();
        assert!(m.validate().is_ok());
        assert_eq!(m.torus(m.fan().zero_cone())[0], QMatrix::from_i64(&[vec![2]]));
        let fan = m.fan().clone();
        let p = fan.covering_pairs()[0];
        let ev = Evaluator::new(&m).unwrap();
        let u = ev.evaluate(&generator_element(&fan, GeneratorLabel::Up(p))).unwrap();
        assert_eq!(u, QMatrix::from_i64(&[vec![0, 0], vec![1, 0]]));
        let t = AlgebraElement::scalar(&fan, LaurentPoly::from_i64(1, &[(1, &[1])]));
        assert_eq!(ev.evaluate(&t).unwrap(), QMatrix::scalar(2, rat(2)));
        assert!(ev.evaluate(&AlgebraElement::unit(&fan)).unwrap().is_identity());
    }

    #[test]
    fn broken_monodromy_is_reported() {
        let m = c1_module(&QMatrix::from_i64(&[vec![1]]), &QMatrix::from_i64(&[vec![1]])).unwrap();
        let mut bad = m.clone();
        bad.torus_mut()[0][0] = QMatrix::from_i64(&[vec![1]]);
        let report = bad.validate();
        assert!(report.has_code("A4"));
        assert!(matches!(rep_check(&bad, 1, 0), Err(Error::InvalidModule(_))));
    }

    #[test]
    fn point_module_on_plane() {
        let fan = Arc::new(standard::projective_plane());
        let m = point_module(&fan, fan.cone_id(&[0, 1]).unwrap());
        assert!(m.validate().is_ok());
        assert!(rep_check(&m, 5, 1).unwrap().passed());
    }
}
