//! The equivariant algebra `A_G(fan) = A(fan) (x)_{k[N]} k[N']` for a closed
//! subgroup `G` of the torus, where `Q: N -> N'` presents `T -> T/G` on
//! cocharacters.
//!
//! `A(fan)` is free over `k[N]` on `f_{s,t} = prod_{s \ t}(t^v - 1) E_{s,t}`,
//! so `A_G` is free over `k[N']` on the images of these, with
//! `f_{s,t} f_{t,r} = c(s,t,r) f_{s,r}` and `c` the image under `Q` of the
//! product of `t^v - 1` over `(s ∩ r \ t) ⊔ (t \ (r ∪ s))`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fan::{ConeId, Fan};
use crate::lattice::{smith_full, IntMatrix, LatticeVector, SmithForm};
use crate::laurent::LaurentPoly;
use crate::linalg::QMatrix;
use crate::pervmod::construct::character_module_with;
use crate::pervmod::DiagramModule;
use crate::report::Report;

/// Associativity is checked on every basis quadruple up to this many cones.
pub const EXHAUSTIVE_MAX_CONES: usize = 7;

#[derive(Clone, Debug)]
pub struct QuotientData {
    q: IntMatrix,
    smith: SmithForm,
}

impl PartialEq for QuotientData {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl QuotientData {
    /// From `Q` directly; rejected unless `Q` has full row rank.
    pub fn from_matrix(q: IntMatrix) -> Result<Self> {
        let smith = smith_full(&q);
        let rank = smith.rank();
        if rank != q.rows() {
            return Err(Error::RankDeficient { rank, rows: q.rows() });
        }
        Ok(QuotientData { q, smith })
    }

    /// `G` is the common kernel of the given characters of `T` (rows, `k x n`).
    /// Characters of `T/G` are the span `L` of the rows; with `U C V = D` the
    /// rows `d_i (V^{-1})_i` are a basis of `L`, and `Q` pairs `N` against it.
    pub fn from_characters(n: usize, characters: &IntMatrix) -> Result<Self> {
        if characters.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: characters.cols() });
        }
        let s = smith_full(characters);
        let d = s.diagonal();
        let r = s.rank();
        let mut data = Vec::with_capacity(r * n);
        for (i, di) in d.iter().enumerate().take(r) {
            for j in 0..n {
                data.push(di * &s.v_inv[(i, j)]);
            }
        }
        Self::from_matrix(IntMatrix::from_vec(r, n, data)?)
    }

    /// The whole torus: `T/G` is trivial.
    pub fn whole_torus(n: usize) -> Self {
        Self::from_matrix(IntMatrix::zeros(0, n)).expect("empty matrix has full row rank")
    }

    pub fn trivial(n: usize) -> Self {
        Self::from_matrix(IntMatrix::identity(n)).expect("identity has full rank")
    }

    pub fn q(&self) -> &IntMatrix {
        &self.q
    }

    /// Rank `n'` of the quotient torus.
    pub fn quotient_rank(&self) -> usize {
        self.q.rows()
    }

    pub fn source_rank(&self) -> usize {
        self.q.cols()
    }

    /// `d_1 | ... | d_{n'}`: in the coordinates of [`QuotientData::smith`] the
    /// map is `z_i -> u_i^{d_i}`.
    pub fn divisors(&self) -> Vec<BigInt> {
        self.smith.diagonal()
    }

    /// `U Q V = D`.
    pub fn smith(&self) -> &SmithForm {
        &self.smith
    }

    /// `Q w` as machine integers.
    pub fn apply(&self, w: &LatticeVector) -> Result<Vec<i64>> {
        self.q.apply(w)?.to_i64()
    }

    /// Order of the finite part of `G`, the product of the `d_i`.
    pub fn finite_order(&self) -> BigInt {
        self.divisors().iter().product()
    }
}

impl fmt::Display for QuotientData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.divisors().iter().map(ToString::to_string).collect();
        writeln!(f, "Q = {} ({}x{})", self.q, self.q.rows(), self.q.cols())?;
        writeln!(f, "d = ({})", d.join(", "))?;
        writeln!(f, "U = {}", self.smith.u)?;
        write!(f, "V = {}", self.smith.v)
    }
}

/// The ray set `(s ∩ r \ t) ⊔ (t \ (r ∪ s))` as ray indices.
pub fn structure_rays(fan: &Fan, s: ConeId, t: ConeId, r: ConeId) -> Vec<usize> {
    let (cs, ct, cr) = (fan.cone(s), fan.cone(t), fan.cone(r));
    let mut out: Vec<usize> = cs.iter().copied().filter(|x| cr.contains(x) && !ct.contains(x)).collect();
    out.extend(ct.iter().copied().filter(|x| !cr.contains(x) && !cs.contains(x)));
    out.sort_unstable();
    out
}

#[derive(Clone, Debug)]
pub struct EqStructure {
    fan: Arc<Fan>,
    quotient: QuotientData,
    table: BTreeMap<(ConeId, ConeId, ConeId), LaurentPoly>,
}

impl EqStructure {
    pub fn new(fan: &Arc<Fan>, quotient: &QuotientData) -> Result<Self> {
        if quotient.source_rank() != fan.rank() {
            return Err(Error::DimensionMismatch { expected: fan.rank(), found: quotient.source_rank() });
        }
        let mut table = BTreeMap::new();
        for s in fan.cone_ids() {
            for t in fan.cone_ids() {
                for r in fan.cone_ids() {
                    let p = structure_rays(fan, s, t, r)
                        .iter()
                        .fold(LaurentPoly::one(fan.rank()), |acc, &i| &acc * &LaurentPoly::binomial(fan.ray(i)));
                    table.insert((s, t, r), p.monomial_map(quotient.q())?);
                }
            }
        }
        Ok(EqStructure { fan: fan.clone(), quotient: quotient.clone(), table })
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn quotient(&self) -> &QuotientData {
        &self.quotient
    }

    /// `c(s,t,r)` with `f_{s,t} f_{t,r} = c f_{s,r}`.
    pub fn constant(&self, s: ConeId, t: ConeId, r: ConeId) -> &LaurentPoly {
        &self.table[&(s, t, r)]
    }

    pub fn table(&self) -> &BTreeMap<(ConeId, ConeId, ConeId), LaurentPoly> {
        &self.table
    }

    fn quad(&self, a: ConeId, b: ConeId, c: ConeId, d: ConeId) -> bool {
        let left = self.constant(a, b, c) * self.constant(a, c, d);
        let right = self.constant(b, c, d) * self.constant(a, b, d);
        left == right
    }

    /// `(f_ab f_bc) f_cd = f_ab (f_bc f_cd)` on every quadruple when the fan
    /// has at most [`EXHAUSTIVE_MAX_CONES`] cones, else on `samples` random ones.
    pub fn check_associativity(&self, samples: usize, seed: u64) -> Report {
        let mut report = Report::new();
        let ids: Vec<ConeId> = self.fan.cone_ids().collect();
        let mut fail = |a: ConeId, b: ConeId, c: ConeId, d: ConeId| {
            let keys: Vec<String> = [a, b, c, d].iter().map(|x| format!("{{{}}}", self.fan.key(*x))).collect();
            report.push("ASSOC", keys.join(" "), "products differ");
        };
        if ids.len() <= EXHAUSTIVE_MAX_CONES {
            for &a in &ids {
                for &b in &ids {
                    for &c in &ids {
                        for &d in &ids {
                            if !self.quad(a, b, c, d) {
                                fail(a, b, c, d);
                            }
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let pick = |rng: &mut ChaCha8Rng| ids[rng.gen_range(0..ids.len())];
                let (a, b, c, d) = (pick(&mut rng), pick(&mut rng), pick(&mut rng), pick(&mut rng));
                if !self.quad(a, b, c, d) {
                    fail(a, b, c, d);
                }
            }
        }
        report
    }

    pub fn is_exhaustive(&self) -> bool {
        self.fan.num_cones() <= EXHAUSTIVE_MAX_CONES
    }

    /// The basis element `f_{s,t}`.
    pub fn basis(&self, s: ConeId, t: ConeId) -> EqElement {
        let mut entries = BTreeMap::new();
        entries.insert((s, t), LaurentPoly::one(self.quotient.quotient_rank()));
        EqElement { entries }
    }

    pub fn mul(&self, a: &EqElement, b: &EqElement) -> EqElement {
        let mut out: BTreeMap<(ConeId, ConeId), LaurentPoly> = BTreeMap::new();
        for (&(s, t), x) in &a.entries {
            for (&(t2, r), y) in &b.entries {
                if t != t2 {
                    continue;
                }
                let term = &(x * y) * self.constant(s, t, r);
                let sum = match out.get(&(s, r)) {
                    Some(acc) => acc + &term,
                    None => term,
                };
                out.insert((s, r), sum);
            }
        }
        out.retain(|_, p| !p.is_zero());
        EqElement { entries: out }
    }
}

/// Element of `A_G` as `k[N']`-coefficients on the basis `f_{s,t}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EqElement {
    pub entries: BTreeMap<(ConeId, ConeId), LaurentPoly>,
}

impl EqElement {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A diagram module whose torus matrices are indexed by the coordinates of
/// the quotient torus; `T(w) = prod_j S(j)^{(Q w)_j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EqDiagramModule {
    module: DiagramModule,
    quotient: QuotientData,
}

impl EqDiagramModule {
    pub fn new(module: DiagramModule, quotient: QuotientData) -> Result<Self> {
        if quotient.source_rank() != module.fan().rank() {
            return Err(Error::DimensionMismatch { expected: module.fan().rank(), found: quotient.source_rank() });
        }
        if module.torus_rank() != quotient.quotient_rank() && module.fan().num_cones() > 0 {
            return Err(Error::Shape(format!(
                "{} torus matrices per cone, quotient torus has rank {}",
                module.torus_rank(),
                quotient.quotient_rank()
            )));
        }
        Ok(EqDiagramModule { module, quotient })
    }

    pub fn module(&self) -> &DiagramModule {
        &self.module
    }

    pub fn quotient(&self) -> &QuotientData {
        &self.quotient
    }

    pub fn validate(&self) -> Report {
        let exps = |w: &LatticeVector| self.quotient.apply(w).ok();
        self.module.validate_with(&exps)
    }

    /// The plain module with `S'(j) = prod_{j'} S(j')^{Q_{j' j}}`.
    pub fn inflate(&self) -> Result<DiagramModule> {
        if let Some(f) = self.validate().findings.first() {
            return Err(Error::InvalidModule(f.to_string().replace('\t', " ")));
        }
        let m = &self.module;
        let fan = m.fan();
        let q = self.quotient.q();
        let mut torus = Vec::with_capacity(fan.num_cones());
        for c in fan.cone_ids() {
            let mut s = Vec::with_capacity(fan.rank());
            for j in 0..fan.rank() {
                let col = q.column(j).to_i64()?;
                s.push(m.torus_element(c, &col).expect("validated torus is invertible"));
            }
            torus.push(s);
        }
        DiagramModule::new(fan, m.dims().to_vec(), torus, m.u_arrows().clone(), m.v_arrows().clone())
    }
}

pub fn validate_equivariant(m: &EqDiagramModule) -> Report {
    m.validate()
}

pub fn inflate(m: &EqDiagramModule) -> Result<DiagramModule> {
    m.inflate()
}

/// The equivariant module on the affine line with `V_0 = V_r = k^d`, arrows
/// `u`, `v` and the same quotient-torus matrices `s` on both cones.
pub fn line_module(q: &QuotientData, u: QMatrix, v: QMatrix, s: Vec<QMatrix>) -> Result<EqDiagramModule> {
    let fan = Arc::new(crate::fan::standard::affine_space(1));
    let d = u.rows();
    let p = fan.covering_pairs()[0];
    let module = DiagramModule::with_torus_rank(
        &fan,
        q.quotient_rank(),
        vec![d, d],
        vec![s.clone(), s],
        BTreeMap::from([(p, u)]),
        BTreeMap::from([(p, v)]),
    )?;
    EqDiagramModule::new(module, q.clone())
}

/// A random equivariant module with `V_c = k^d` on every cone, built like
/// [`crate::pervmod::construct::character_module`] on the quotient torus.
pub fn character_eq_module<R: Rng>(fan: &Arc<Fan>, q: &QuotientData, d: usize, rng: &mut R) -> Result<EqDiagramModule> {
    let exps = |w: &LatticeVector| q.apply(w).expect("small ray");
    let module = character_module_with(fan, q.quotient_rank(), &exps, d, rng);
    EqDiagramModule::new(module, q.clone())
}

/// Whether `s^p = id + vu` for the scalar data of a one-dimensional line module.
pub fn is_pth_root(s: &QMatrix, p: i64, monodromy: &QMatrix) -> bool {
    s.pow(p).is_some_and(|x| x == *monodromy)
}

/// The divisors as machine integers, for reports.
pub fn small_divisors(q: &QuotientData) -> Vec<i64> {
    q.divisors().iter().map(|d| d.to_i64().unwrap_or(i64::MAX)).collect()
}
