//! Constructions of valid modules: point modules, modules on the affine line,
//! character modules, tensor products, direct sums, conjugates and transports.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use super::{BlockMap, DiagramModule};
use crate::algebra::same_fan;
use crate::error::{Error, Result};
use crate::fan::{standard, ConeId, CoveringPair, Fan};
use crate::lattice::{IntMatrix, LatticeVector};
use crate::laurent::{rat, Rational};
use crate::linalg::QMatrix;

/// `k` on `sigma`, zero elsewhere, trivial torus action.
pub fn point_module(fan: &Arc<Fan>, sigma: ConeId) -> DiagramModule {
    let dims: Vec<usize> = fan.cone_ids().map(|c| usize::from(c == sigma)).collect();
    let torus = dims.iter().map(|&d| vec![QMatrix::identity(d); fan.rank()]).collect();
    DiagramModule::new(fan, dims, torus, BTreeMap::new(), BTreeMap::new()).expect("well formed")
}

/// The module on the affine line with `u: V_0 -> V_r`, `v: V_r -> V_0` and
/// torus action determined by the monodromies.
pub fn c1_module(u: &QMatrix, v: &QMatrix) -> Result<DiagramModule> {
    let fan = Arc::new(standard::affine_space(1));
    let (d1, d0) = u.shape();
    if v.shape() != (d0, d1) {
        return Err(Error::Shape(format!("u is {:?} but v is {:?}", u.shape(), v.shape())));
    }
    let below = QMatrix::identity(d0).add(&v.mul(u));
    let above = QMatrix::identity(d1).add(&u.mul(v));
    if !below.is_invertible() {
        return Err(Error::InvalidModule("id + vu is not invertible".into()));
    }
    let pair = fan.covering_pairs()[0];
    let mut us = BTreeMap::new();
    us.insert(pair, u.clone());
    let mut vs = BTreeMap::new();
    vs.insert(pair, v.clone());
    DiagramModule::new(&fan, vec![d0, d1], vec![vec![below], vec![above]], us, vs)
}

pub fn random_qmatrix<R: Rng>(rows: usize, cols: usize, bound: i64, rng: &mut R) -> QMatrix {
    let data = (0..rows * cols).map(|_| rat(rng.gen_range(-bound..=bound))).collect();
    QMatrix::from_vec(rows, cols, data).expect("sized")
}

pub fn random_invertible<R: Rng>(d: usize, bound: i64, rng: &mut R) -> QMatrix {
    loop {
        let m = random_qmatrix(d, d, bound, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

/// A random module on the affine line with the given dimensions.
pub fn random_c1_module<R: Rng>(d0: usize, d1: usize, rng: &mut R) -> DiagramModule {
    loop {
        let u = random_qmatrix(d1, d0, 2, rng);
        let v = random_qmatrix(d0, d1, 2, rng);
        if let Ok(m) = c1_module(&u, &v) {
            return m;
        }
    }
}

/// A random module on the projective line with all spaces of dimension `d`.
pub fn p1_module<R: Rng>(d: usize, rng: &mut R) -> DiagramModule {
    let fan = Arc::new(standard::projective_line());
    let (zero, plus, minus) = (fan.zero_cone(), fan.cone_id(&[0]).unwrap(), fan.cone_id(&[1]).unwrap());
    let id = QMatrix::identity(d);
    let (up, vp, m) = loop {
        let up = random_qmatrix(d, d, 2, rng);
        let vp = random_qmatrix(d, d, 2, rng);
        let m = id.add(&vp.mul(&up));
        if m.is_invertible() {
            break (up, vp, m);
        }
    };
    let um = random_invertible(d, 2, rng);
    let vm = m.inverse().unwrap().sub(&id).mul(&um.inverse().unwrap());
    let s_plus = id.add(&up.mul(&vp));
    // The ray of the second chart is -1, so T(v) there is the inverse of S.
    let s_minus = id.add(&um.mul(&vm)).inverse().expect("conjugate of an invertible matrix");
    let mut us = BTreeMap::new();
    let mut vs = BTreeMap::new();
    for (upper, u, v) in [(plus, up, vp), (minus, um, vm)] {
        let p = fan.covering_pair(zero, upper).unwrap();
        us.insert(p, u);
        vs.insert(p, v);
    }
    let mut torus = vec![Vec::new(); 3];
    torus[zero.0] = vec![m];
    torus[plus.0] = vec![s_plus];
    torus[minus.0] = vec![s_minus];
    DiagramModule::new(&fan, vec![d; 3], torus, us, vs).expect("well formed")
}

fn random_polynomial_in<R: Rng>(a: &QMatrix, rng: &mut R) -> QMatrix {
    let d = a.rows();
    loop {
        let c0 = [1, 2, -1, 3, -2][rng.gen_range(0..5)];
        let c1 = rng.gen_range(-1..=1);
        let m = QMatrix::scalar(d, rat(c0)).add(&a.scale(&rat(c1)));
        if m.is_invertible() {
            return m;
        }
    }
}

/// A module with `V_c = k^d` on every cone and the same torus action
/// everywhere, given by polynomials in one random matrix. On each ray the
/// monodromy minus the identity is split as `u v` with `u` invertible.
pub fn character_module<R: Rng>(fan: &Arc<Fan>, d: usize, rng: &mut R) -> DiagramModule {
    character_module_with(fan, fan.rank(), &|w| w.to_i64().expect("small ray"), d, rng)
}

/// As [`character_module`] with `ntorus` torus matrices per cone; the
/// monodromy along a ray `w` is the torus element at `exps(w)`.
pub(crate) fn character_module_with<R: Rng>(
    fan: &Arc<Fan>,
    ntorus: usize,
    exps: &dyn Fn(&LatticeVector) -> Vec<i64>,
    d: usize,
    rng: &mut R,
) -> DiagramModule {
    let a = random_qmatrix(d, d, 2, rng);
    let s: Vec<QMatrix> = (0..ntorus).map(|_| random_polynomial_in(&a, rng)).collect();
    let build = |us, vs| {
        DiagramModule::with_torus_rank(fan, ntorus, vec![d; fan.num_cones()], vec![s.clone(); fan.num_cones()], us, vs)
            .expect("well formed")
    };
    let tmp = build(BTreeMap::new(), BTreeMap::new());
    let mut split: BTreeMap<usize, (QMatrix, QMatrix)> = BTreeMap::new();
    let mut us = BTreeMap::new();
    let mut vs = BTreeMap::new();
    for p in fan.covering_pairs() {
        let (x, y) = split
            .entry(p.ray)
            .or_insert_with(|| {
                let t = tmp.torus_element(fan.zero_cone(), &exps(fan.ray(p.ray))).expect("invertible");
                let c = t.sub(&QMatrix::identity(d));
                let x = random_polynomial_in(&a, rng);
                let y = c.mul(&x.inverse().unwrap());
                (x, y)
            })
            .clone();
        us.insert(p, x);
        vs.insert(p, y);
    }
    build(us, vs)
}

fn same_shape(a: &DiagramModule, b: &DiagramModule) -> Result<()> {
    if !same_fan(a.fan(), b.fan()) || a.torus_rank() != b.torus_rank() {
        return Err(Error::FanMismatch);
    }
    Ok(())
}

pub fn direct_sum(a: &DiagramModule, b: &DiagramModule) -> Result<DiagramModule> {
    same_shape(a, b)?;
    let fan = a.fan();
    let dims = fan.cone_ids().map(|c| a.dim(c) + b.dim(c)).collect();
    let torus = fan
        .cone_ids()
        .map(|c| a.torus(c).iter().zip(b.torus(c)).map(|(x, y)| QMatrix::block_diag(x, y)).collect())
        .collect();
    let mut us = BTreeMap::new();
    let mut vs = BTreeMap::new();
    for p in fan.covering_pairs() {
        us.insert(p, QMatrix::block_diag(a.u(p), b.u(p)));
        vs.insert(p, QMatrix::block_diag(a.v(p), b.v(p)));
    }
    DiagramModule::with_torus_rank(fan, a.torus_rank(), dims, torus, us, vs)
}

/// The module on the product fan with `V_(alpha,beta) = V_alpha (x) V_beta`.
pub fn external_tensor(a: &DiagramModule, b: &DiagramModule) -> Result<DiagramModule> {
    let (fa, fb) = (a.fan(), b.fan());
    let fan = Arc::new(Fan::product(fa, fb)?);
    let offset = fa.rays().len();
    let split = |c: ConeId| -> (ConeId, ConeId) {
        let rays = fan.cone(c);
        let left: Vec<usize> = rays.iter().copied().filter(|&r| r < offset).collect();
        let right: Vec<usize> = rays.iter().copied().filter(|&r| r >= offset).map(|r| r - offset).collect();
        (fa.cone_id(&left).expect("factor cone"), fb.cone_id(&right).expect("factor cone"))
    };
    let mut dims = Vec::new();
    let mut torus = Vec::new();
    for c in fan.cone_ids() {
        let (x, y) = split(c);
        let (ia, ib) = (QMatrix::identity(a.dim(x)), QMatrix::identity(b.dim(y)));
        dims.push(a.dim(x) * b.dim(y));
        let mut s: Vec<QMatrix> = a.torus(x).iter().map(|m| m.kron(&ib)).collect();
        s.extend(b.torus(y).iter().map(|m| ia.kron(m)));
        torus.push(s);
    }
    let mut us = BTreeMap::new();
    let mut vs = BTreeMap::new();
    for p in fan.covering_pairs() {
        let ((xl, yl), (xu, yu)) = (split(p.lower), split(p.upper));
        if p.ray < offset {
            let q = CoveringPair { lower: xl, upper: xu, ray: p.ray };
            let ib = QMatrix::identity(b.dim(yl));
            us.insert(p, a.u(q).kron(&ib));
            vs.insert(p, a.v(q).kron(&ib));
        } else {
            let q = CoveringPair { lower: yl, upper: yu, ray: p.ray - offset };
            let ia = QMatrix::identity(a.dim(xl));
            us.insert(p, ia.kron(b.u(q)));
            vs.insert(p, ia.kron(b.v(q)));
        }
    }
    DiagramModule::new(&fan, dims, torus, us, vs)
}

/// The isomorphic module obtained by changing basis on each `V_c` by `g_c`.
pub fn conjugate(m: &DiagramModule, g: &BlockMap) -> Result<DiagramModule> {
    let fan = m.fan();
    if g.blocks.len() != fan.num_cones() {
        return Err(Error::Shape("block map has the wrong number of blocks".into()));
    }
    let mut inv = Vec::with_capacity(g.blocks.len());
    for c in fan.cone_ids() {
        let b = &g.blocks[c.0];
        if b.shape() != (m.dim(c), m.dim(c)) {
            return Err(Error::Shape(format!("block on {} has shape {:?}", super::cone_label(fan, c), b.shape())));
        }
        inv.push(b.inverse().ok_or_else(|| Error::Shape("conjugating block is not invertible".into()))?);
    }
    let torus =
        fan.cone_ids().map(|c| m.torus(c).iter().map(|s| g.blocks[c.0].mul(s).mul(&inv[c.0])).collect()).collect();
    let mut us = BTreeMap::new();
    let mut vs = BTreeMap::new();
    for p in fan.covering_pairs() {
        us.insert(p, g.blocks[p.upper.0].mul(m.u(p)).mul(&inv[p.lower.0]));
        vs.insert(p, g.blocks[p.lower.0].mul(m.v(p)).mul(&inv[p.upper.0]));
    }
    DiagramModule::with_torus_rank(fan, m.torus_rank(), m.dims().to_vec(), torus, us, vs)
}

/// Random invertible blocks sized for `m`.
pub fn random_automorphism<R: Rng>(m: &DiagramModule, rng: &mut R) -> BlockMap {
    BlockMap { blocks: m.fan().cone_ids().map(|c| random_invertible(m.dim(c), 2, rng)).collect() }
}

/// Moves `m` along the lattice automorphism `beta` onto `target`:
/// `T'(beta w) = T(w)`.
pub fn transport_module(m: &DiagramModule, beta: &IntMatrix, target: &Arc<Fan>) -> Result<DiagramModule> {
    let fan = m.fan();
    let map = fan.map_onto(beta, target)?;
    let beta_inv = beta.inverse_unimodular()?;
    let n = fan.rank();
    let mut dims = vec![0; target.num_cones()];
    let mut torus = vec![Vec::new(); target.num_cones()];
    for c in fan.cone_ids() {
        let t = map[c.0];
        dims[t.0] = m.dim(c);
        for j in 0..n {
            let col = beta_inv.column(j).to_i64()?;
            torus[t.0].push(m.torus_element(c, &col).ok_or_else(|| Error::InvalidModule("torus matrix not invertible".into()))?);
        }
    }
    let mut us = BTreeMap::new();
    let mut vs = BTreeMap::new();
    for p in fan.covering_pairs() {
        let q = target.covering_pair(map[p.lower.0], map[p.upper.0]).ok_or_else(|| Error::FanMap("covering pair lost".into()))?;
        us.insert(q, m.u(p).clone());
        vs.insert(q, m.v(p).clone());
    }
    DiagramModule::new(target, dims, torus, us, vs)
}

/// A random valid module: a character module, possibly plus a point module,
/// in a random basis.
pub fn random_module<R: Rng>(fan: &Arc<Fan>, rng: &mut R) -> DiagramModule {
    let d = rng.gen_range(1..=2);
    let mut m = character_module(fan, d, rng);
    if rng.gen_bool(0.5) {
        let maxes = fan.maximal_cones();
        let sigma = maxes[rng.gen_range(0..maxes.len())];
        m = direct_sum(&m, &point_module(fan, sigma)).expect("same fan");
    }
    let g = random_automorphism(&m, rng);
    conjugate(&m, &g).expect("invertible blocks")
}

/// Scalar `c` as a `1x1` matrix.
pub fn scalar1(c: Rational) -> QMatrix {
    QMatrix::scalar(1, c)
}
