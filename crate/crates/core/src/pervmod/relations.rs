//! Monodromy operators at each cone and the relations forced on them by the
//! lattice, plus the projective-plane module showing that the relation
//! `M12 M13 = id` on `V_1` fails once `N_1` is nontrivial.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{cone_label, DiagramModule};
use crate::error::{Error, Result};
use crate::fan::{standard, ConeId, CoveringPair, Fan};
use crate::lattice::{IntMatrix, LatticeVector};
use crate::laurent::{ratio, Rational};
use crate::linalg::QMatrix;
use crate::report::Report;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    /// `id + vu` for a pair above the cone.
    M,
    /// `id + uv` for a pair below the cone.
    N,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyOperator {
    pub kind: OperatorKind,
    pub pair: CoveringPair,
    /// Rays of the lower cone, then the new ray, numbered from 1.
    pub label: Vec<usize>,
    pub vector: LatticeVector,
}

impl MonodromyOperator {
    pub fn name(&self) -> String {
        let k = match self.kind {
            OperatorKind::M => "M",
            OperatorKind::N => "N",
        };
        format!("{k}{}", subscript(&self.label))
    }

    /// The operator's matrix on `m`.
    pub fn matrix(&self, m: &DiagramModule) -> QMatrix {
        match self.kind {
            OperatorKind::M => m.monodromy_below(self.pair),
            OperatorKind::N => m.monodromy_above(self.pair),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeRelations {
    pub cone: ConeId,
    pub space: String,
    pub operators: Vec<MonodromyOperator>,
    /// Integer coefficient vectors, one per generating lattice relation.
    pub relations: Vec<Vec<BigInt>>,
}

impl ConeRelations {
    pub fn relation_text(&self, coeffs: &[BigInt]) -> String {
        let mut s = String::new();
        for (op, c) in self.operators.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            s.push_str(&op.name());
            if !c.is_one() {
                s.push_str(&superscript(c));
            }
        }
        format!("{s} = id on {}", self.space)
    }

    pub fn texts(&self) -> Vec<String> {
        self.relations.iter().map(|r| self.relation_text(r)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub cones: Vec<ConeRelations>,
}

impl RelationReport {
    pub fn relations(&self) -> Vec<String> {
        self.cones.iter().flat_map(ConeRelations::texts).collect()
    }
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cones {
            let ops: Vec<String> = c.operators.iter().map(|o| format!("{} = T{}", o.name(), o.vector)).collect();
            writeln!(f, "{}: {}", c.space, if ops.is_empty() { "no operators".to_string() } else { ops.join(", ") })?;
            for t in c.texts() {
                writeln!(f, "  {t}")?;
            }
        }
        Ok(())
    }
}

const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];

fn digits(n: &str, table: &[char; 10]) -> String {
    n.chars().map(|c| c.to_digit(10).map_or(c, |d| table[d as usize])).collect()
}

/// Subscript of 1-based ray numbers, comma-separated when any exceeds 9.
fn subscript(label: &[usize]) -> String {
    let sep = if label.iter().any(|&x| x > 9) { "," } else { "" };
    label.iter().map(|x| digits(&x.to_string(), &SUB)).collect::<Vec<_>>().join(sep)
}

fn superscript(c: &BigInt) -> String {
    let mut s = String::new();
    if c.is_negative() {
        s.push('⁻');
    }
    s + &digits(&c.abs().to_string(), &SUP)
}

fn space_name(fan: &Fan, c: ConeId) -> String {
    if fan.dim(c) == 0 {
        "V_∅".to_string()
    } else {
        let label: Vec<usize> = fan.cone(c).iter().map(|r| r + 1).collect();
        format!("V{}", subscript(&label))
    }
}

/// Operators on each `V_tau` and a basis of the integer relations among their
/// lattice vectors; each relation `sum c_i w_i = 0` gives `prod op_i^{c_i} = id`.
pub fn relation_report(fan: &Fan) -> RelationReport {
    let pairs = fan.covering_pairs();
    let mut cones = Vec::new();
    for tau in fan.cone_ids() {
        let mut ops = Vec::new();
        let label = |p: &CoveringPair| {
            let mut l: Vec<usize> = fan.cone(p.lower).iter().map(|r| r + 1).collect();
            l.push(p.ray + 1);
            l
        };
        for p in pairs.iter().filter(|p| p.upper == tau) {
            ops.push(MonodromyOperator { kind: OperatorKind::N, pair: *p, label: label(p), vector: fan.ray(p.ray).clone() });
        }
        let mut above: Vec<&CoveringPair> = pairs.iter().filter(|p| p.lower == tau).collect();
        above.sort_by_key(|p| p.ray);
        for p in above {
            ops.push(MonodromyOperator { kind: OperatorKind::M, pair: *p, label: label(p), vector: fan.ray(p.ray).clone() });
        }
        let relations = if ops.is_empty() {
            Vec::new()
        } else {
            let cols: Vec<LatticeVector> = ops.iter().map(|o| o.vector.clone()).collect();
            let m = IntMatrix::from_columns(fan.rank(), &cols).expect("ray length matches rank");
            m.kernel_basis()
                .into_iter()
                .map(|k| {
                    let mut c = k.0;
                    if c.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                        c = c.into_iter().map(|x| -x).collect();
                    }
                    c
                })
                .collect()
        };
        cones.push(ConeRelations { cone: tau, space: space_name(fan, tau), operators: ops, relations });
    }
    RelationReport { cones }
}

/// Verifies every relation of [`relation_report`] on the arrows of `m`.
pub fn check_relations(m: &DiagramModule) -> Result<Report> {
    let fan = m.fan();
    let mut report = Report::new();
    for c in relation_report(fan).cones {
        for coeffs in &c.relations {
            let d = m.dim(c.cone);
            let mut acc = QMatrix::identity(d);
            for (op, k) in c.operators.iter().zip(coeffs) {
                let e = k.to_i64().ok_or_else(|| Error::Overflow(k.to_string()))?;
                let Some(p) = op.matrix(m).pow(e) else {
                    report.push("REL", cone_label(fan, c.cone), format!("{} is not invertible", op.name()));
                    continue;
                };
                acc = acc.mul(&p);
            }
            if !acc.is_identity() {
                report.push("REL", cone_label(fan, c.cone), format!("{} fails", c.relation_text(coeffs)));
            }
        }
    }
    Ok(report)
}

/// The monodromy operators on `V_1` of a module on the projective plane
/// (rays `(1,0), (0,1), (-1,-1)`).
pub struct PlaneRayOperators {
    pub n1: QMatrix,
    pub m12: QMatrix,
    pub m13: QMatrix,
}

impl PlaneRayOperators {
    pub fn of(m: &DiagramModule) -> Result<Self> {
        let fan = m.fan();
        let cone = |r: &[usize]| fan.cone_id(r).ok_or_else(|| Error::UnknownCone(format!("{r:?}")));
        let (zero, r1, s12, s13) = (fan.zero_cone(), cone(&[0])?, cone(&[0, 1])?, cone(&[0, 2])?);
        let pair = |lo, hi| fan.covering_pair(lo, hi).ok_or_else(|| Error::Shape("not a covering pair".into()));
        Ok(PlaneRayOperators {
            n1: m.monodromy_above(pair(zero, r1)?),
            m12: m.monodromy_below(pair(r1, s12)?),
            m13: m.monodromy_below(pair(r1, s13)?),
        })
    }

    /// `N1 M12 M13 = id`.
    pub fn corrected_holds(&self) -> bool {
        self.n1.mul(&self.m12).mul(&self.m13).is_identity()
    }

    /// `M12 M13 = id`.
    pub fn dupont_holds(&self) -> bool {
        self.m12.mul(&self.m13).is_identity()
    }
}

pub struct DupontDemo {
    pub module: DiagramModule,
    pub characters: (Rational, Rational),
    pub attempts: usize,
    pub operators: PlaneRayOperators,
    pub valid: bool,
}

impl DupontDemo {
    pub fn corrected_holds(&self) -> bool {
        self.operators.corrected_holds()
    }

    pub fn dupont_holds(&self) -> bool {
        self.operators.dupont_holds()
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

impl fmt::Display for DupontDemo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ops = &self.operators;
        let pair = self.module.fan().covering_pairs()[0];
        writeln!(f, "projective plane, rays v1=(1,0) v2=(0,1) v3=(-1,-1), all spaces one-dimensional")?;
        writeln!(f, "torus characters: S1 = {}, S2 = {} (found after {} attempts)", self.characters.0, self.characters.1, self.attempts)?;
        writeln!(f, "u1 = {}, v1 = {}", self.module.u(pair), self.module.v(pair))?;
        writeln!(f, "N1 = {}, M12 = {}, M13 = {}", ops.n1, ops.m12, ops.m13)?;
        writeln!(f, "module axioms: {}", verdict(self.valid))?;
        writeln!(f, "corrected relation: {} (N1·M12·M13 = id on V1)", verdict(self.corrected_holds()))?;
        writeln!(f, "Dupont relation M12·M13 = id: {}", verdict(self.dupont_holds()))?;
        write!(f, "M12·M13 = {} = N1^-1", ops.m12.mul(&ops.m13))
    }
}

fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let (p, q) = (rng.gen_range(-4i64..=4), rng.gen_range(1i64..=3));
        if p != 0 {
            return ratio(p, q);
        }
    }
}

/// One-dimensional modules on the projective plane with torus characters
/// `(a, b)` on every cone. Each ray's `u v = T(v) - 1` is split with `u`
/// random; the search accepts the first module that validates and has
/// `u1, v1 != 0` and `N1 != 1`.
pub fn dupont_demo(seed: u64) -> Result<DupontDemo> {
    let fan = Arc::new(standard::projective_plane());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=1000 {
        let (a, b) = (small_rational(&mut rng), small_rational(&mut rng));
        let character = |w: &LatticeVector| -> Rational {
            let e = w.to_i64().expect("small");
            a.pow(e[0] as i32) * b.pow(e[1] as i32)
        };
        let mut split = BTreeMap::new();
        for r in 0..3 {
            let c = character(fan.ray(r)) - Rational::one();
            let x = if c.is_zero() && rng.gen_bool(0.5) { Rational::zero() } else { small_rational(&mut rng) };
            let y = if x.is_zero() { Rational::zero() } else { &c / &x };
            split.insert(r, (x, y));
        }
        let mut us = BTreeMap::new();
        let mut vs = BTreeMap::new();
        for p in fan.covering_pairs() {
            let (x, y) = &split[&p.ray];
            us.insert(p, QMatrix::scalar(1, x.clone()));
            vs.insert(p, QMatrix::scalar(1, y.clone()));
        }
        let torus = vec![vec![QMatrix::scalar(1, a.clone()), QMatrix::scalar(1, b.clone())]; fan.num_cones()];
        let module = DiagramModule::new(&fan, vec![1; fan.num_cones()], torus, us, vs)?;
        if !module.validate().is_ok() {
            continue;
        }
        let (x1, y1) = &split[&0];
        if x1.is_zero() || y1.is_zero() {
            continue;
        }
        let operators = PlaneRayOperators::of(&module)?;
        if operators.n1.is_identity() {
            continue;
        }
        return Ok(DupontDemo { module, characters: (a, b), attempts: attempt, operators, valid: true });
    }
    Err(Error::InvalidModule("no suitable module found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_relations() {
        let rel = relation_report(&standard::projective_plane());
        let all = rel.relations();
        assert!(all.contains(&"M₁M₂M₃ = id on V_∅".to_string()), "{all:?}");
        assert!(all.contains(&"N₁M₁₂M₁₃ = id on V₁".to_string()), "{all:?}");
        assert_eq!(all.len(), 4);
    }

    #[test]
    fn affine_space_has_no_relations() {
        assert!(relation_report(&standard::affine_space(3)).relations().is_empty());
    }

    #[test]
    fn demo_separates_the_relations() {
        let demo = dupont_demo(0).unwrap();
        assert!(demo.module.validate().is_ok());
        assert!(demo.corrected_holds());
        assert!(!demo.dupont_holds());
        let text = demo.to_string();
        assert!(text.contains("corrected relation: PASS"));
        assert!(text.contains("Dupont relation M12·M13 = id: FAIL"));
    }
}
