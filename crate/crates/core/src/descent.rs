//! Descent data over the affine charts of a fan: a module on the faces of each
//! maximal cone, gluing isomorphisms on overlaps, the cocycle check, and
//! gluing back to a global module.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fan::{ConeId, CoveringPair, Fan};
use crate::linalg::QMatrix;
use crate::pervmod::construct::{conjugate, random_automorphism};
use crate::pervmod::{cone_label, BlockMap, DiagramModule};
use crate::report::Report;

/// Blocks of a gluing map, keyed by global cone.
pub type GlueMap = BTreeMap<ConeId, QMatrix>;

#[derive(Clone, Debug)]
pub struct DescentDatum {
    fan: Arc<Fan>,
    charts: BTreeMap<ConeId, DiagramModule>,
    /// `(sigma, tau) -> phi_sigma^tau`, from chart `sigma` to chart `tau`.
    glue: BTreeMap<(ConeId, ConeId), GlueMap>,
}

/// Which containing maximal cone supplies each space when gluing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ChartChoice {
    #[default]
    LeastContaining,
    GreatestContaining,
}

impl DescentDatum {
    /// Checks that the charts live on the faces of the maximal cones and that
    /// every gluing block has the shape its charts require. A missing
    /// `phi_sigma^sigma` means the identity.
    pub fn new(
        fan: &Arc<Fan>,
        charts: BTreeMap<ConeId, DiagramModule>,
        glue: BTreeMap<(ConeId, ConeId), GlueMap>,
    ) -> Result<Self> {
        let maxes = fan.maximal_cones();
        for &s in &maxes {
            let chart = charts.get(&s).ok_or_else(|| Error::Descent(format!("no chart for {}", cone_label(fan, s))))?;
            if **chart.fan() != fan.restrict_to(s) {
                return Err(Error::Descent(format!("chart {} is not over the faces of its cone", cone_label(fan, s))));
            }
            if chart.torus_rank() != fan.rank() {
                return Err(Error::Descent(format!("chart {} has the wrong torus rank", cone_label(fan, s))));
            }
        }
        if let Some(k) = charts.keys().find(|k| !maxes.contains(k)) {
            return Err(Error::Descent(format!("chart for non-maximal cone {}", cone_label(fan, *k))));
        }
        let d = DescentDatum { fan: fan.clone(), charts, glue };
        for (&(s, t), map) in &d.glue {
            if !maxes.contains(&s) || !maxes.contains(&t) {
                return Err(Error::Descent(format!("gluing map {}|{} between non-maximal cones", fan.key(s), fan.key(t))));
            }
            let meet = fan.intersection(s, t);
            if let Some(r) = map.keys().find(|r| !fan.is_face(**r, meet)) {
                return Err(Error::Descent(format!(
                    "gluing map {}|{} has a block on {}, outside the overlap",
                    fan.key(s),
                    fan.key(t),
                    cone_label(fan, *r)
                )));
            }
        }
        for &s in &maxes {
            for &t in &maxes {
                if s == t && !d.glue.contains_key(&(s, t)) {
                    continue;
                }
                let map = d.glue.get(&(s, t)).ok_or_else(|| {
                    Error::Descent(format!("missing gluing map {}|{}", fan.key(s), fan.key(t)))
                })?;
                for r in fan.faces(fan.intersection(s, t)) {
                    let b = map.get(&r).ok_or_else(|| {
                        Error::Descent(format!("gluing map {}|{} has no block on {}", fan.key(s), fan.key(t), cone_label(fan, r)))
                    })?;
                    let want = (d.chart_dim(t, r), d.chart_dim(s, r));
                    if b.shape() != want {
                        return Err(Error::Descent(format!(
                            "gluing block {}|{} on {} is {:?}, charts need {:?}",
                            fan.key(s),
                            fan.key(t),
                            cone_label(fan, r),
                            b.shape(),
                            want
                        )));
                    }
                }
            }
        }
        Ok(d)
    }

    /// Restrictions of `m` to each chart glued by identities.
    pub fn tautological(m: &DiagramModule) -> Result<Self> {
        let fan = m.fan();
        let mut charts = BTreeMap::new();
        let maxes = fan.maximal_cones();
        for &s in &maxes {
            charts.insert(s, m.restrict(s)?);
        }
        let mut glue = BTreeMap::new();
        for &s in &maxes {
            for &t in &maxes {
                let map = fan.faces(fan.intersection(s, t)).into_iter().map(|r| (r, QMatrix::identity(m.dim(r)))).collect();
                glue.insert((s, t), map);
            }
        }
        Self::new(fan, charts, glue)
    }

    /// Restrictions of `m` with each chart in a random basis `g^sigma`, glued by
    /// `phi_sigma^tau = g^tau (g^sigma)^{-1}`.
    pub fn conjugated<R: Rng>(m: &DiagramModule, rng: &mut R) -> Result<Self> {
        let fan = m.fan();
        let maxes = fan.maximal_cones();
        let mut charts = BTreeMap::new();
        let mut changes: BTreeMap<ConeId, BlockMap> = BTreeMap::new();
        for &s in &maxes {
            let chart = m.restrict(s)?;
            let g = random_automorphism(&chart, rng);
            charts.insert(s, conjugate(&chart, &g)?);
            changes.insert(s, g);
        }
        let d0 = DescentDatum { fan: fan.clone(), charts, glue: BTreeMap::new() };
        let mut glue = BTreeMap::new();
        for &s in &maxes {
            for &t in &maxes {
                let mut map = GlueMap::new();
                for r in fan.faces(fan.intersection(s, t)) {
                    let gs = changes[&s].block(d0.chart_cone(s, r));
                    let gt = changes[&t].block(d0.chart_cone(t, r));
                    map.insert(r, gt.mul(&gs.inverse().expect("invertible")));
                }
                glue.insert((s, t), map);
            }
        }
        Self::new(fan, d0.charts, glue)
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn charts(&self) -> &BTreeMap<ConeId, DiagramModule> {
        &self.charts
    }

    pub fn chart(&self, sigma: ConeId) -> Option<&DiagramModule> {
        self.charts.get(&sigma)
    }

    pub fn glue_maps(&self) -> &BTreeMap<(ConeId, ConeId), GlueMap> {
        &self.glue
    }

    /// Replaces one gluing block.
    pub fn set_glue_block(&mut self, sigma: ConeId, tau: ConeId, rho: ConeId, block: QMatrix) {
        self.glue.entry((sigma, tau)).or_default().insert(rho, block);
    }

    /// The id of global cone `rho` inside chart `sigma`.
    pub fn chart_cone(&self, sigma: ConeId, rho: ConeId) -> ConeId {
        self.fan.translate_cone(self.charts[&sigma].fan(), rho).expect("face of the chart cone")
    }

    fn chart_dim(&self, sigma: ConeId, rho: ConeId) -> usize {
        self.charts[&sigma].dim(self.chart_cone(sigma, rho))
    }

    /// `phi_sigma^tau` on `rho`.
    pub fn phi(&self, sigma: ConeId, tau: ConeId, rho: ConeId) -> QMatrix {
        match self.glue.get(&(sigma, tau)).and_then(|m| m.get(&rho)) {
            Some(b) => b.clone(),
            None if sigma == tau => QMatrix::identity(self.chart_dim(sigma, rho)),
            None => panic!("gluing map checked at construction"),
        }
    }

    /// Isomorphism, compatibility with the chart structure, inverse pairs and
    /// the cocycle condition on every triple of maximal cones.
    pub fn check_cocycle(&self) -> Report {
        let fan = &self.fan;
        let maxes = fan.maximal_cones();
        let mut report = Report::new();
        let name = |s: ConeId, t: ConeId| format!("{}|{}", cone_label(fan, s), cone_label(fan, t));
        for &s in &maxes {
            for &t in &maxes {
                let meet = fan.intersection(s, t);
                let faces = fan.faces(meet);
                let (cs, ct) = (&self.charts[&s], &self.charts[&t]);
                for &r in &faces {
                    let (rs, rt) = (self.chart_cone(s, r), self.chart_cone(t, r));
                    let f = self.phi(s, t, r);
                    if cs.dim(rs) != ct.dim(rt) {
                        report.push("DIM", name(s, t), format!("dimensions differ on {}", cone_label(fan, r)));
                        continue;
                    }
                    if !f.is_invertible() {
                        report.push("ISO", name(s, t), format!("block on {} is not invertible", cone_label(fan, r)));
                    }
                    if s == t && !f.is_identity() {
                        report.push("IDENTITY", name(s, t), format!("block on {} is not the identity", cone_label(fan, r)));
                    }
                    for (j, (a, b)) in cs.torus(rs).iter().zip(ct.torus(rt)).enumerate() {
                        if f.mul(a) != b.mul(&f) {
                            report.push("MORPH", name(s, t), format!("S{} on {} not intertwined", j + 1, cone_label(fan, r)));
                        }
                    }
                    let back = self.phi(t, s, r);
                    if back.shape() == (f.cols(), f.rows()) && !back.mul(&f).is_identity() {
                        report.push("INVERSE", name(s, t), format!("phi_t^s phi_s^t != id on {}", cone_label(fan, r)));
                    }
                }
                for p in fan.covering_pairs() {
                    if !fan.is_face(p.upper, meet) {
                        continue;
                    }
                    let ps = local_pair(fan, cs.fan(), p);
                    let pt = local_pair(fan, ct.fan(), p);
                    let (fl, fu) = (self.phi(s, t, p.lower), self.phi(s, t, p.upper));
                    let ok_u = fu.try_mul(cs.u(ps)).ok() == ct.u(pt).try_mul(&fl).ok();
                    let ok_v = fl.try_mul(cs.v(ps)).ok() == ct.v(pt).try_mul(&fu).ok();
                    if !ok_u || !ok_v {
                        report.push(
                            "MORPH",
                            name(s, t),
                            format!("arrows on {}<{} not intertwined", cone_label(fan, p.lower), cone_label(fan, p.upper)),
                        );
                    }
                }
            }
        }
        for &s in &maxes {
            for &t in &maxes {
                for &w in &maxes {
                    let meet = fan.intersection(fan.intersection(s, t), w);
                    for r in fan.faces(meet) {
                        let direct = self.phi(s, w, r);
                        let via = self.phi(t, w, r).try_mul(&self.phi(s, t, r));
                        if via.ok().as_ref() != Some(&direct) {
                            report.push(
                                "COCYCLE",
                                format!("{} {} {}", cone_label(fan, s), cone_label(fan, t), cone_label(fan, w)),
                                format!("fails on {}", cone_label(fan, r)),
                            );
                        }
                    }
                }
            }
        }
        report
    }

    /// Glues with [`ChartChoice::LeastContaining`].
    pub fn glue(&self) -> Result<DiagramModule> {
        self.glue_with(ChartChoice::LeastContaining)
    }

    pub fn glue_with(&self, choice: ChartChoice) -> Result<DiagramModule> {
        let fan = &self.fan;
        let report = self.check_cocycle();
        if let Some(f) = report.findings.first() {
            return Err(Error::Descent(format!("cocycle check failed: {}", f.to_string().replace('\t', " "))));
        }
        for (s, chart) in &self.charts {
            if let Some(f) = chart.validate().findings.first() {
                return Err(Error::Descent(format!(
                    "chart {} is invalid: {}",
                    cone_label(fan, *s),
                    f.to_string().replace('\t', " ")
                )));
            }
        }
        let mut maxes = fan.maximal_cones();
        maxes.sort_by(|a, b| fan.cone(*a).cmp(fan.cone(*b)));
        if choice == ChartChoice::GreatestContaining {
            maxes.reverse();
        }
        let home: Vec<ConeId> = fan
            .cone_ids()
            .map(|r| *maxes.iter().find(|&&s| fan.is_face(r, s)).expect("every cone lies in a maximal cone"))
            .collect();

        let dims = fan.cone_ids().map(|r| self.chart_dim(home[r.0], r)).collect();
        let torus = fan
            .cone_ids()
            .map(|r| self.charts[&home[r.0]].torus(self.chart_cone(home[r.0], r)).to_vec())
            .collect();
        let mut us = BTreeMap::new();
        let mut vs = BTreeMap::new();
        for p in fan.covering_pairs() {
            let k = home[p.upper.0];
            let chart = &self.charts[&k];
            let local = local_pair(fan, chart.fan(), p);
            let to_k = self.phi(home[p.lower.0], k, p.lower);
            let from_k = self.phi(k, home[p.lower.0], p.lower);
            us.insert(p, chart.u(local).mul(&to_k));
            vs.insert(p, from_k.mul(chart.v(local)));
        }
        let glued = DiagramModule::new(fan, dims, torus, us, vs)?;

        for (&s, chart) in &self.charts {
            let restricted = glued.restrict(s)?;
            let blocks = chart
                .fan()
                .cone_ids()
                .map(|c| {
                    let r = chart.fan().translate_cone(fan, c).expect("face");
                    self.phi(home[r.0], s, r)
                })
                .collect();
            let g = BlockMap { blocks };
            if !g.is_isomorphism() || !g.is_morphism(&restricted, chart) {
                return Err(Error::Descent(format!("glued module does not restrict to chart {}", cone_label(fan, s))));
            }
        }
        Ok(glued)
    }
}

fn local_pair(global: &Fan, local: &Fan, p: CoveringPair) -> CoveringPair {
    CoveringPair {
        lower: global.translate_cone(local, p.lower).expect("face"),
        upper: global.translate_cone(local, p.upper).expect("face"),
        ray: p.ray,
    }
}

pub fn restrict(m: &DiagramModule, sigma: ConeId) -> Result<DiagramModule> {
    m.restrict(sigma)
}

pub fn check_cocycle(d: &DescentDatum) -> Report {
    d.check_cocycle()
}

pub fn glue(d: &DescentDatum) -> Result<DiagramModule> {
    d.glue()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::standard;
    use crate::laurent::rat;
    use crate::pervmod::construct::{p1_module, point_module, random_module};
    use crate::pervmod::hom::find_isomorphism;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip_on_the_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let fan = Arc::new(standard::projective_plane());
        let m = random_module(&fan, &mut rng);
        let d = DescentDatum::conjugated(&m, &mut rng).unwrap();
        assert!(d.check_cocycle().is_ok(), "{}", d.check_cocycle());
        let g = d.glue().unwrap();
        assert!(g.validate().is_ok());
        assert!(find_isomorphism(&m, &g, &mut rng, 20).unwrap().is_some());
        let g2 = d.glue_with(ChartChoice::GreatestContaining).unwrap();
        assert!(find_isomorphism(&g, &g2, &mut rng, 20).unwrap().is_some());
    }

    #[test]
    fn scaled_block_breaks_the_cocycle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fan = Arc::new(standard::projective_plane());
        let m = random_module(&fan, &mut rng);
        let mut d = DescentDatum::tautological(&m).unwrap();
        let maxes = fan.maximal_cones();
        let zero = fan.zero_cone();
        let b = d.phi(maxes[0], maxes[1], zero).scale(&rat(2));
        d.set_glue_block(maxes[0], maxes[1], zero, b);
        let report = d.check_cocycle();
        assert!(report.has_code("COCYCLE"));
        assert!(d.glue().is_err());
    }

    #[test]
    fn single_chart_and_point_restriction() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let fan = Arc::new(standard::affine_space(2));
        let m = random_module(&fan, &mut rng);
        let d = DescentDatum::tautological(&m).unwrap();
        assert_eq!(d.glue().unwrap(), m);

        let plane = Arc::new(standard::projective_plane());
        let p = point_module(&plane, plane.cone_id(&[0, 1]).unwrap());
        assert!(p.restrict(plane.cone_id(&[0, 2]).unwrap()).unwrap().is_zero());

        let line = p1_module(2, &mut rng);
        let g = DescentDatum::tautological(&line).unwrap().glue().unwrap();
        assert_eq!(g, line);
    }
}
