//! Classification of `B_u(Q)` for parameters with `Q·conj(Q)` a real
//! scalar: the `(c, mu, U)` descriptor and the orbit equivalence decision
//! `Q' = z·S^t·Q·S`.
//!
//! When the canonical diagonal of `|Q|` has distinct entries the stabilizer
//! is the diagonal unitary group and equivalence reduces to a phase-gauge
//! feasibility problem solved exactly on the support graph. Degenerate
//! diagonals fall back to a seeded random-restart search over the block
//! stabilizer and may come back undecided.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{eigh, polar_decompose, ComplexMatrix, Tolerance, C64};
use crate::normal_form::{mu_signature, normalize_bu, MuSignature};
use crate::sampling::{random_complex_gaussian, rng_from_seed};

/// Classifying data of `B_u(Q)`: a representative of the orbit with `|Q|`
/// in canonical descending diagonal form.
///
/// `u_part` is some representative of the class, not a canonical form;
/// equality of classes is decided by [`bu_isomorphic`], not by comparing
/// `u_part` entries.
#[derive(Debug, Clone)]
pub struct BuDescriptor {
    pub n: usize,
    pub c: i32,
    pub mu: MuSignature,
    pub u_part: ComplexMatrix,
    /// Eigenvector basis that carried `|Qn|` to the canonical diagonal.
    pub basis: ComplexMatrix,
    /// The normalized parameter the descriptor was built from.
    pub qn: ComplexMatrix,
}

impl BuDescriptor {
    /// Canonical descending diagonal `D` of `|Q|`.
    pub fn d_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&self.mu.full_spectrum())
    }

    /// The orbit representative `u_part · D`; itself a normalized parameter.
    pub fn representative(&self) -> ComplexMatrix {
        self.u_part.matmul(&self.d_matrix())
    }
}

/// Builds the descriptor: normalize, polar decompose, conjugate `|Qn|` to
/// the canonical descending diagonal, transport the polar unitary.
pub fn bu_descriptor(q: &ComplexMatrix, tol: &Tolerance) -> Result<BuDescriptor> {
    let bn = normalize_bu(q, tol)?;
    let mu = mu_signature(&bn.qn, tol)?;
    let (unitary, positive) = polar_decompose(&bn.qn, tol)?;
    let (_, v) = eigh(&positive, tol)?;
    let u_part = v.transpose().matmul(&unitary).matmul(&v);
    let desc = BuDescriptor { n: q.n(), c: bn.c, mu, u_part, basis: v, qn: bn.qn };
    let d = desc.d_matrix();
    let d_inv = ComplexMatrix::from_real_diagonal(
        &desc.mu.full_spectrum().iter().map(|m| 1.0 / m).collect::<Vec<_>>(),
    );
    let lhs = desc.u_part.matmul(&d);
    let rhs = d_inv.matmul(&desc.u_part.transpose()).scale(C64::new(desc.c as f64, 0.0));
    if lhs.sub(&rhs).norm() > 1e3 * tol.eq * d.norm().max(1.0) {
        return Err(Error::EquationResidual);
    }
    Ok(desc)
}

/// Unit-modulus ratios indexed by matrix position; feasibility means the
/// ratios factor as `r_ij = w_i·w_j` for unit phases `w`.
#[derive(Debug, Clone, Default)]
pub struct PhaseProfile {
    pub ratios: BTreeMap<(usize, usize), C64>,
}

impl PhaseProfile {
    pub fn support(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.ratios.keys().copied()
    }
}

fn angle_distance(a: C64, b: C64) -> f64 {
    // both unit modulus; distance of phases on the circle
    (a / b).arg().abs()
}

/// Solves `r_ij = w_i·w_j` on the support graph, or reports infeasibility.
///
/// Per connected component one unknown `t` is gauge-fixed and propagated
/// along a spanning tree with exponent ±1; every non-tree edge closes to a
/// constraint `t^2 = const` or `1 = const`, checked at `tol.cluster`.
pub fn phase_profile_solve(p: &PhaseProfile, n: usize, tol: &Tolerance) -> Option<Vec<C64>> {
    let one = C64::new(1.0, 0.0);
    for (_, r) in p.ratios.iter() {
        if (r.norm() - 1.0).abs() > 100.0 * tol.eq {
            return None;
        }
    }
    // undirected adjacency; self-loops kept as closure constraints
    let mut adj: Vec<Vec<(usize, C64)>> = vec![Vec::new(); n];
    let mut edges: Vec<(usize, usize, C64)> = Vec::new();
    for (&(i, j), &r) in p.ratios.iter() {
        if i >= n || j >= n {
            return None;
        }
        let r = r / r.norm();
        edges.push((i, j, r));
        if i != j {
            adj[i].push((j, r));
            adj[j].push((i, r));
        }
    }
    // coefficient and exponent per vertex: w_i = coeff_i * t^{exp_i}
    let mut coeff = vec![one; n];
    let mut exp = vec![0i8; n];
    let mut comp = vec![usize::MAX; n];
    let mut n_comp = 0usize;
    for root in 0..n {
        if comp[root] != usize::MAX {
            continue;
        }
        let id = n_comp;
        n_comp += 1;
        comp[root] = id;
        coeff[root] = one;
        exp[root] = 1;
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            for &(j, r) in &adj[i] {
                if comp[j] == usize::MAX {
                    comp[j] = id;
                    // w_i w_j = r  =>  w_j = r / w_i
                    coeff[j] = r / coeff[i];
                    exp[j] = -exp[i];
                    stack.push(j);
                }
            }
        }
    }
    // closure: every edge gives coeff_i*coeff_j * t^{exp_i+exp_j} = r
    let mut t_square: Vec<Option<C64>> = vec![None; n_comp];
    for (i, j, r) in edges {
        let base = coeff[i] * coeff[j];
        let e = exp[i] as i32 + exp[j] as i32;
        match e {
            0 => {
                if angle_distance(base, r) > tol.cluster {
                    return None;
                }
            }
            2 | -2 => {
                let mut target = r / base;
                if e == -2 {
                    target = target.conj() / target.norm_sqr();
                }
                let target = target / target.norm();
                match &t_square[comp[i]] {
                    Some(prev) => {
                        if angle_distance(*prev, target) > tol.cluster {
                            return None;
                        }
                    }
                    None => t_square[comp[i]] = Some(target),
                }
            }
            _ => unreachable!("exponents are ±1"),
        }
    }
    let t_values: Vec<C64> = t_square
        .iter()
        .map(|ts| match ts {
            Some(v) => v.sqrt(),
            None => one,
        })
        .collect();
    let mut w = vec![one; n];
    for i in 0..n {
        let t = t_values[comp[i]];
        let ti = if exp[i] >= 0 { t } else { t.conj() };
        let wi = coeff[i] * ti;
        w[i] = wi / wi.norm();
    }
    Some(w)
}

/// Outcome of the orbit decision.
#[derive(Debug, Clone)]
pub enum BuIso {
    /// Equivalent, with a witness `Q'_n = z·S^t·Q_n·S` and its residual
    /// relative to the normalized inputs.
    Yes { s: ComplexMatrix, z: C64, residual: f64 },
    No,
    Undecided,
}

impl BuIso {
    pub fn is_yes(&self) -> bool {
        matches!(self, BuIso::Yes { .. })
    }
}

fn structural_support(u: &ComplexMatrix, tol: &Tolerance) -> Vec<(usize, usize)> {
    let thr = tol.eq * u.norm().max(1.0);
    let n = u.n();
    let mut s = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if u.get(i, j).norm() > thr {
                s.push((i, j));
            }
        }
    }
    s
}

fn diagonal_is_distinct(d: &[f64], tol: &Tolerance) -> bool {
    d.windows(2).all(|w| (w[0] - w[1]).abs() > tol.eq * w[0].abs().max(1.0))
}

/// Decides whether `B_u(Q) ≅ B_u(Q')` for parameters with scalar
/// `Q·conj(Q)`. Exact on the generic (distinct canonical diagonal) case;
/// degenerate diagonals use a seeded stabilizer search and may return
/// `Undecided`.
pub fn bu_isomorphic(q: &ComplexMatrix, q2: &ComplexMatrix, tol: &Tolerance, seed: u64) -> Result<BuIso> {
    let d1 = bu_descriptor(q, tol)?;
    let d2 = bu_descriptor(q2, tol)?;
    if d1.n != d2.n || d1.c != d2.c || !d1.mu.approx_eq(&d2.mu, tol) {
        return Ok(BuIso::No);
    }
    let spec = d1.mu.full_spectrum();
    if diagonal_is_distinct(&spec, tol) {
        decide_distinct(&d1, &d2, tol)
    } else {
        decide_degenerate(&d1, &d2, tol, seed)
    }
}

fn witness_from_stabilizer(
    d1: &BuDescriptor,
    d2: &BuDescriptor,
    stab: &ComplexMatrix,
    z: C64,
) -> (ComplexMatrix, f64) {
    // Q2n = S^t Q1n S with S = V1 · stab · V2^H, the phase z folded into stab
    let s = d1.basis.matmul(stab).matmul(&d2.basis.adjoint());
    let moved = s.transpose().matmul(&d1.qn).matmul(&s).scale(z);
    let residual = d2.qn.sub(&moved).norm() / d1.qn.norm().max(1.0);
    (s, residual)
}

fn decide_distinct(d1: &BuDescriptor, d2: &BuDescriptor, tol: &Tolerance) -> Result<BuIso> {
    let u1 = &d1.u_part;
    let u2 = &d2.u_part;
    let s1 = structural_support(u1, tol);
    let s2 = structural_support(u2, tol);
    if s1 != s2 {
        return Ok(BuIso::No);
    }
    let mod_tol = 1e3 * tol.eq * (d1.n as f64).sqrt().max(1.0);
    let mut profile = PhaseProfile::default();
    for &(i, j) in &s1 {
        let a = u1.get(i, j);
        let b = u2.get(i, j);
        if (a.norm() - b.norm()).abs() > mod_tol {
            return Ok(BuIso::No);
        }
        profile.ratios.insert((i, j), b / a);
    }
    match phase_profile_solve(&profile, d1.n, tol) {
        None => Ok(BuIso::No),
        Some(w) => {
            let stab = ComplexMatrix::from_diagonal(&w);
            let (s, residual) = witness_from_stabilizer(d1, d2, &stab, C64::new(1.0, 0.0));
            if residual <= 1e4 * tol.eq {
                Ok(BuIso::Yes { s, z: C64::new(1.0, 0.0), residual })
            } else {
                // feasible phases but a bad witness signals numerical trouble
                Ok(BuIso::Undecided)
            }
        }
    }
}

fn blocks_of_diagonal(d: &[f64], tol: &Tolerance) -> Vec<(usize, usize)> {
    let mut blocks = Vec::new();
    let mut start = 0usize;
    for i in 1..=d.len() {
        if i == d.len() || (d[i - 1] - d[i]).abs() > tol.eq * d[i - 1].abs().max(1.0) {
            blocks.push((start, i - start));
            start = i;
        }
    }
    blocks
}

fn random_block_unitary<R: Rng>(blocks: &[(usize, usize)], n: usize, rng: &mut R) -> DMatrix<C64> {
    let mut s = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
    for &(start, len) in blocks {
        let g = random_complex_gaussian(len, rng);
        let qr = g.qr();
        let u = qr.q();
        for i in 0..len {
            for j in 0..len {
                s[(start + i, start + j)] = u[(i, j)];
            }
        }
    }
    s
}

/// Nearest unitary (polar factor); used as the retraction in the
/// stabilizer search.
fn project_unitary(m: &DMatrix<C64>) -> DMatrix<C64> {
    let svd = m.clone().svd(true, true);
    svd.u.as_ref().unwrap() * svd.v_t.as_ref().unwrap()
}

fn best_phase(moved: &DMatrix<C64>, target: &DMatrix<C64>) -> C64 {
    let mut inner = C64::new(0.0, 0.0);
    for (a, b) in moved.iter().zip(target.iter()) {
        inner += a.conj() * b;
    }
    if inner.norm() < 1e-14 {
        C64::new(1.0, 0.0)
    } else {
        inner / inner.norm()
    }
}

fn search_cost(s: &DMatrix<C64>, u1: &DMatrix<C64>, u2: &DMatrix<C64>) -> (f64, C64) {
    let moved = s.transpose() * u1 * s;
    let z = best_phase(&moved, u2);
    ((u2 - moved.map(|x| x * z)).norm(), z)
}

fn project_block_unitary(m: &DMatrix<C64>, blocks: &[(usize, usize)]) -> DMatrix<C64> {
    let n = m.nrows();
    let mut s = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
    for &(start, len) in blocks {
        let block = DMatrix::from_fn(len, len, |i, j| m[(start + i, start + j)]);
        let u = project_unitary(&block);
        for i in 0..len {
            for j in 0..len {
                s[(start + i, start + j)] = u[(i, j)];
            }
        }
    }
    s
}

/// One-sided exact solve of `t^t u1 s = z̄ u2` followed by phase alignment
/// with `s`, averaging, and projection back onto the block-diagonal
/// unitaries. A solution of the congruence is a fixed point.
fn procrustes_step(
    s: &DMatrix<C64>,
    u1: &DMatrix<C64>,
    u2: &DMatrix<C64>,
    z: C64,
    blocks: &[(usize, usize)],
) -> DMatrix<C64> {
    let t = u1.map(|x| x.conj()) * s.map(|x| x.conj()) * u2.transpose() * z.conj();
    // the stabilizer is only determined up to a global phase: align before mixing
    let mut inner = C64::new(0.0, 0.0);
    for (a, b) in t.iter().zip(s.iter()) {
        inner += a.conj() * b;
    }
    let phase = if inner.norm() < 1e-14 { C64::new(1.0, 0.0) } else { inner / inner.norm() };
    let mix = (t.map(|x| x * phase) + s) * C64::new(0.5, 0.0);
    project_block_unitary(&mix, blocks)
}

fn decide_degenerate(d1: &BuDescriptor, d2: &BuDescriptor, tol: &Tolerance, seed: u64) -> Result<BuIso> {
    let n = d1.n;
    let spec = d1.mu.full_spectrum();
    let blocks = blocks_of_diagonal(&spec, tol);
    let u1 = d1.u_part.inner().clone();
    let u2 = d2.u_part.inner().clone();
    let mut rng = rng_from_seed(seed);
    let target = tol.eq * n as f64;

    let mut best: Option<(f64, DMatrix<C64>, C64)> = None;
    'restarts: for restart in 0..16 {
        let mut s = if restart == 0 {
            DMatrix::identity(n, n)
        } else {
            random_block_unitary(&blocks, n, &mut rng)
        };
        let (mut cost, mut z) = search_cost(&s, &u1, &u2);
        for _ in 0..400 {
            if cost < target {
                break;
            }
            let next = procrustes_step(&s, &u1, &u2, z, &blocks);
            let (ncost, nz) = search_cost(&next, &u1, &u2);
            if ncost >= cost - 1e-16 {
                break;
            }
            s = next;
            cost = ncost;
            z = nz;
        }
        // hill-climb polish for the last digits when the fixed point stalls
        let mut step = (cost * 0.5).min(0.5);
        for _ in 0..1500 {
            if cost < target || step < 1e-13 {
                break;
            }
            let proposal = {
                let mut p = s.clone();
                let &(start, len) = &blocks[rng.gen_range(0..blocks.len())];
                let noise = random_complex_gaussian(len, &mut rng).map(|x| x * step);
                let mut block = DMatrix::from_fn(len, len, |i, j| p[(start + i, start + j)]);
                block += noise;
                let u = project_unitary(&block);
                for i in 0..len {
                    for j in 0..len {
                        p[(start + i, start + j)] = u[(i, j)];
                    }
                }
                p
            };
            let (pcost, pz) = search_cost(&proposal, &u1, &u2);
            if pcost < cost {
                s = proposal;
                cost = pcost;
                z = pz;
                step = (step * 1.3).min(0.5);
            } else {
                step *= 0.7;
            }
        }
        match &best {
            Some((b, _, _)) if *b <= cost => {}
            _ => best = Some((cost, s.clone(), z)),
        }
        if cost < target {
            break 'restarts;
        }
    }

    if let Some((cost, s_blocks, z)) = best {
        if cost < target {
            let stab = ComplexMatrix::from_raw(s_blocks);
            let (s, residual) = witness_from_stabilizer(d1, d2, &stab, z);
            if residual <= 1e4 * tol.eq {
                return Ok(BuIso::Yes { s, z, residual });
            }
        }
    }
    Ok(BuIso::Undecided)
}
