//! Morphisms of diagram modules and the exact solver for Hom spaces.

use num_traits::Zero;
use rand::Rng;

use super::DiagramModule;
use crate::algebra::same_fan;
use crate::error::{Error, Result};
use crate::fan::ConeId;
use crate::laurent::{rat, Rational};
use crate::linalg::QMatrix;

/// One block `f_c: V_c -> V'_c` per cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMap {
    pub blocks: Vec<QMatrix>,
}

impl BlockMap {
    pub fn identity(m: &DiagramModule) -> Self {
        BlockMap { blocks: m.dims().iter().map(|&d| QMatrix::identity(d)).collect() }
    }

    pub fn zero(source: &DiagramModule, target: &DiagramModule) -> Self {
        BlockMap { blocks: source.dims().iter().zip(target.dims()).map(|(&s, &t)| QMatrix::zeros(t, s)).collect() }
    }

    pub fn block(&self, c: ConeId) -> &QMatrix {
        &self.blocks[c.0]
    }

    pub fn is_isomorphism(&self) -> bool {
        self.blocks.iter().all(QMatrix::is_invertible)
    }

    pub fn inverse(&self) -> Option<BlockMap> {
        Some(BlockMap { blocks: self.blocks.iter().map(QMatrix::inverse).collect::<Option<Vec<_>>>()? })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &BlockMap) -> Result<BlockMap> {
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.try_mul(b)).collect::<Result<Vec<_>>>()?;
        Ok(BlockMap { blocks })
    }

    pub fn add(&self, other: &BlockMap) -> Result<BlockMap> {
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.try_add(b)).collect::<Result<Vec<_>>>()?;
        Ok(BlockMap { blocks })
    }

    pub fn scale(&self, c: &Rational) -> BlockMap {
        BlockMap { blocks: self.blocks.iter().map(|b| b.scale(c)).collect() }
    }

    /// Whether the blocks commute with torus matrices and arrows.
    pub fn is_morphism(&self, source: &DiagramModule, target: &DiagramModule) -> bool {
        let fan = source.fan();
        if !same_fan(fan, target.fan()) || self.blocks.len() != fan.num_cones() {
            return false;
        }
        for c in fan.cone_ids() {
            if self.blocks[c.0].shape() != (target.dim(c), source.dim(c)) {
                return false;
            }
            for (s, t) in source.torus(c).iter().zip(target.torus(c)) {
                if self.blocks[c.0].mul(s) != t.mul(&self.blocks[c.0]) {
                    return false;
                }
            }
        }
        fan.covering_pairs().into_iter().all(|p| {
            let (fl, fu) = (&self.blocks[p.lower.0], &self.blocks[p.upper.0]);
            fu.mul(source.u(p)) == target.u(p).mul(fl) && fl.mul(source.v(p)) == target.v(p).mul(fu)
        })
    }
}

struct System {
    offsets: Vec<usize>,
    shapes: Vec<(usize, usize)>,
    nvars: usize,
    rows: Vec<Vec<Rational>>,
}

impl System {
    fn var(&self, c: usize, i: usize, j: usize) -> usize {
        self.offsets[c] + i * self.shapes[c].1 + j
    }

    /// Equations `f_x p - p' f_y = 0`.
    fn intertwine(&mut self, x: usize, y: usize, p: &QMatrix, p2: &QMatrix) {
        let (tx, sx) = self.shapes[x];
        let (ty, sy) = self.shapes[y];
        debug_assert_eq!(p.shape(), (sx, sy));
        debug_assert_eq!(p2.shape(), (tx, ty));
        for i in 0..tx {
            for k in 0..sy {
                let mut row = vec![Rational::zero(); self.nvars];
                for l in 0..sx {
                    if !p[(l, k)].is_zero() {
                        row[self.var(x, i, l)] += &p[(l, k)];
                    }
                }
                for l in 0..ty {
                    if !p2[(i, l)].is_zero() {
                        row[self.var(y, l, k)] -= &p2[(i, l)];
                    }
                }
                if row.iter().any(|r| !r.is_zero()) {
                    self.rows.push(row);
                }
            }
        }
    }
}

/// A basis of the space of morphisms `a -> b`.
pub fn hom(a: &DiagramModule, b: &DiagramModule) -> Result<Vec<BlockMap>> {
    let fan = a.fan();
    if !same_fan(fan, b.fan()) || a.torus_rank() != b.torus_rank() {
        return Err(Error::FanMismatch);
    }
    let shapes: Vec<(usize, usize)> = fan.cone_ids().map(|c| (b.dim(c), a.dim(c))).collect();
    let mut offsets = Vec::with_capacity(shapes.len());
    let mut nvars = 0;
    for &(r, c) in &shapes {
        offsets.push(nvars);
        nvars += r * c;
    }
    let mut sys = System { offsets, shapes, nvars, rows: Vec::new() };
    for c in fan.cone_ids() {
        for (s, t) in a.torus(c).iter().zip(b.torus(c)) {
            sys.intertwine(c.0, c.0, s, t);
        }
    }
    for p in fan.covering_pairs() {
        sys.intertwine(p.upper.0, p.lower.0, a.u(p), b.u(p));
        sys.intertwine(p.lower.0, p.upper.0, a.v(p), b.v(p));
    }
    let basis = if sys.rows.is_empty() {
        (0..nvars)
            .map(|k| {
                let mut e = vec![Rational::zero(); nvars];
                e[k] = rat(1);
                e
            })
            .collect()
    } else {
        let data: Vec<Rational> = sys.rows.iter().flatten().cloned().collect();
        QMatrix::from_vec(sys.rows.len(), nvars, data)?.nullspace()
    };
    Ok(basis
        .into_iter()
        .map(|x| BlockMap {
            blocks: fan
                .cone_ids()
                .map(|c| {
                    let (r, k) = sys.shapes[c.0];
                    let start = sys.offsets[c.0];
                    QMatrix::from_vec(r, k, x[start..start + r * k].to_vec()).expect("sized")
                })
                .collect(),
        })
        .collect())
}

/// Looks for an invertible morphism among random combinations of a Hom basis.
pub fn find_isomorphism<R: Rng>(
    a: &DiagramModule,
    b: &DiagramModule,
    rng: &mut R,
    attempts: usize,
) -> Result<Option<BlockMap>> {
    if a.dims() != b.dims() {
        return Ok(None);
    }
    let basis = hom(a, b)?;
    if a.total_dim() == 0 {
        return Ok(Some(BlockMap::zero(a, b)));
    }
    if basis.is_empty() {
        return Ok(None);
    }
    for _ in 0..attempts {
        let mut f = BlockMap::zero(a, b);
        for g in &basis {
            f = f.add(&g.scale(&rat(rng.gen_range(-9..=9))))?;
        }
        if f.is_isomorphism() {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::super::construct::*;
    use super::*;
    use crate::fan::standard;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    #[test]
    fn endomorphisms_contain_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = random_c1_module(2, 2, &mut rng);
        let basis = hom(&m, &m).unwrap();
        assert!(!basis.is_empty());
        assert!(basis.iter().all(|f| f.is_morphism(&m, &m)));
        assert!(BlockMap::identity(&m).is_morphism(&m, &m));
    }

    #[test]
    fn disjoint_points_have_no_maps() {
        let fan = Arc::new(standard::projective_plane());
        let a = point_module(&fan, fan.cone_id(&[0, 1]).unwrap());
        let b = point_module(&fan, fan.cone_id(&[0, 2]).unwrap());
        assert!(hom(&a, &b).unwrap().is_empty());
        let line = Arc::new(standard::affine_space(1));
        let constant = point_module(&line, line.zero_cone());
        let point = point_module(&line, line.cone_id(&[0]).unwrap());
        assert!(hom(&constant, &point).unwrap().is_empty());
    }

    #[test]
    fn conjugates_are_isomorphic() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let fan = Arc::new(standard::projective_plane());
        let m = random_module(&fan, &mut rng);
        let g = random_automorphism(&m, &mut rng);
        let n = conjugate(&m, &g).unwrap();
        let f = find_isomorphism(&m, &n, &mut rng, 20).unwrap().expect("isomorphic");
        assert!(f.is_morphism(&m, &n));
    }
}
