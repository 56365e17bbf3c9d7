//! Completely positive semigroups at matrix scale.
//!
//! A generator in Lindblad form,
//!
//! ```text
//! L(x) = i[H, x] + sum_j (v_j^* x v_j - (v_j^* v_j x + x v_j^* v_j) / 2),
//! ```
//!
//! is unital by construction (`L(1) = 0`), and `phi_t = exp(t L)` is a
//! unital CP semigroup on `B(C^r)`. Both the Heisenberg picture and its
//! predual act through explicit `r^2 x r^2` superoperator matrices in the
//! row-major vectorization, exponentiated by scaling and squaring, so the
//! two pictures can be checked against each other through the duality
//! `trace(rho_t x) = trace(rho phi_t(x))`.
//!
//! `build_detailed_balance_generator` produces a semigroup with a
//! prescribed faithful diagonal state `omega` as its absorbing state: jump
//! operators `sqrt(g_ij) e_ij` whose rates satisfy the classical balance
//! `g_ij omega_j = g_ji omega_i`, plus optional dephasing jumps on the
//! diagonal. With all rates positive and dephasing on, every initial state
//! relaxes to `omega` in trace norm.
//!
//! `compress_unital_cp` cuts a unital CP map with invariant state `omega`
//! down to the support projection `P` of `omega`: monotonicity
//! `phi(P) >= P` makes the corner map `x -> P phi(x) P` unital on the
//! corner and the corner identity `P phi(A) P = P phi(P A P) P` exact, so
//! nothing of the `omega`-dynamics is lost by passing to the corner.

use rand_chacha::ChaCha8Rng;

use crate::densop::{support_projection, DensityOperator, HermitianMatrix};
use crate::eigenlist::EigenvalueList;
use crate::linalg::{
    cr, expm, hermitize, max_abs, operator_norm, trace_norm_hermitian, unvec_rm, vec_rm, CMat,
};
use crate::{tol, Error, Result};
use num_complex::Complex64;

/// Largest base dimension the dense semigroup routines accept. The
/// superoperators are `r^2 x r^2`.
pub const GENERATOR_DIM_CAP: usize = 8;

/// A generator in Lindblad form.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    hamiltonian: HermitianMatrix,
    jumps: Vec<CMat>,
}

impl LindbladGenerator {
    /// Validate dimensions and the structural unitality `L(1) = 0`.
    pub fn new(hamiltonian: HermitianMatrix, jumps: Vec<CMat>) -> Result<Self> {
        let r = hamiltonian.dim();
        if r > GENERATOR_DIM_CAP {
            return Err(Error::BadDim {
                dim: r,
                reason: format!("generator dimension exceeds cap {GENERATOR_DIM_CAP}"),
            });
        }
        for v in &jumps {
            if v.nrows() != r || v.ncols() != r {
                return Err(Error::DimMismatch {
                    left: v.nrows().max(v.ncols()),
                    right: r,
                });
            }
        }
        let gen = Self { hamiltonian, jumps };
        let dev = gen.unitality_deviation();
        debug_assert!(dev <= 1e-12, "Lindblad form lost unitality: {dev}");
        Ok(gen)
    }

    /// Base space dimension `r`.
    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// The Hamiltonian part.
    pub fn hamiltonian(&self) -> &HermitianMatrix {
        &self.hamiltonian
    }

    /// The jump operators.
    pub fn jumps(&self) -> &[CMat] {
        &self.jumps
    }

    /// `L(x)` in the Heisenberg picture, computed directly from the form.
    pub fn apply_heisenberg(&self, x: &CMat) -> CMat {
        let h = self.hamiltonian.matrix();
        let i = Complex64::i();
        let mut out = (h * x - x * h) * i;
        for v in &self.jumps {
            let vv = v.adjoint() * v;
            out += v.adjoint() * x * v - (&vv * x + x * &vv).scale(0.5);
        }
        out
    }

    /// Predual action on states: `L_*(rho) = -i[H, rho] +
    /// sum_j (v_j rho v_j^* - {v_j^* v_j, rho} / 2)`.
    pub fn apply_predual(&self, rho: &CMat) -> CMat {
        let h = self.hamiltonian.matrix();
        let i = Complex64::i();
        let mut out = (h * rho - rho * h) * (-i);
        for v in &self.jumps {
            let vv = v.adjoint() * v;
            out += v * rho * v.adjoint() - (&vv * rho + rho * &vv).scale(0.5);
        }
        out
    }

    /// `max |L(1)|`; zero up to rounding for any Lindblad form.
    pub fn unitality_deviation(&self) -> f64 {
        let id = CMat::identity(self.dim(), self.dim());
        max_abs(&self.apply_heisenberg(&id))
    }

    /// Trace-norm of `L_*(rho)`; zero exactly when `rho` is invariant.
    pub fn invariance_deviation(&self, rho: &DensityOperator) -> f64 {
        trace_norm_hermitian(&hermitize(&self.apply_predual(rho.matrix())))
    }

    /// Superoperator matrix of the Heisenberg action, row-major vec.
    pub fn heisenberg_superop(&self) -> CMat {
        let r = self.dim();
        let h = self.hamiltonian.matrix();
        let id = CMat::identity(r, r);
        let i = Complex64::i();
        let mut s = (h.kronecker(&id) - id.kronecker(&h.transpose())) * i;
        for v in &self.jumps {
            let vv = v.adjoint() * v;
            s += v.adjoint().kronecker(&v.transpose());
            s -= (vv.kronecker(&id) + id.kronecker(&vv.transpose())).scale(0.5);
        }
        s
    }

    /// Superoperator matrix of the predual action, row-major vec.
    pub fn predual_superop(&self) -> CMat {
        let r = self.dim();
        let h = self.hamiltonian.matrix();
        let id = CMat::identity(r, r);
        let i = Complex64::i();
        let mut s = (h.kronecker(&id) - id.kronecker(&h.transpose())) * (-i);
        for v in &self.jumps {
            let vv = v.adjoint() * v;
            s += v.kronecker(&v.conjugate());
            s -= (vv.kronecker(&id) + id.kronecker(&vv.transpose())).scale(0.5);
        }
        s
    }
}

/// The semigroup `phi_t = exp(t L)` with both pictures precomputed as
/// superoperator matrices.
#[derive(Debug, Clone)]
pub struct CpSemigroup {
    gen: LindbladGenerator,
    s_heis: CMat,
    s_pre: CMat,
}

impl CpSemigroup {
    /// Precompute the superoperators of a generator.
    pub fn new(gen: LindbladGenerator) -> Self {
        let s_heis = gen.heisenberg_superop();
        let s_pre = gen.predual_superop();
        Self { gen, s_heis, s_pre }
    }

    /// The underlying generator.
    pub fn generator(&self) -> &LindbladGenerator {
        &self.gen
    }

    /// Base space dimension.
    pub fn dim(&self) -> usize {
        self.gen.dim()
    }

    fn check_time(t: f64) -> Result<()> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::BadArgs {
                reason: format!("semigroup time must be finite and nonnegative, got {t}"),
            });
        }
        Ok(())
    }

    /// `phi_t(x)` in the Heisenberg picture.
    pub fn heisenberg_apply(&self, x: &HermitianMatrix, t: f64) -> Result<HermitianMatrix> {
        Self::check_time(t)?;
        if x.dim() != self.dim() {
            return Err(Error::DimMismatch {
                left: x.dim(),
                right: self.dim(),
            });
        }
        let e = expm(&self.s_heis.map(|z| z * cr(t)));
        let out = unvec_rm(&(e * vec_rm(x.matrix())), self.dim(), self.dim());
        // phi_t preserves adjoints; drift is rounding noise.
        HermitianMatrix::new(hermitize(&out))
    }

    /// `rho_t` in the Schroedinger picture; stays a valid state.
    pub fn evolve_state(&self, rho: &DensityOperator, t: f64) -> Result<DensityOperator> {
        Self::check_time(t)?;
        if rho.dim() != self.dim() {
            return Err(Error::DimMismatch {
                left: rho.dim(),
                right: self.dim(),
            });
        }
        let e = expm(&self.s_pre.map(|z| z * cr(t)));
        let out = unvec_rm(&(e * vec_rm(rho.matrix())), self.dim(), self.dim());
        DensityOperator::from_matrix(hermitize(&out))
    }

    /// `|trace(rho_t x) - trace(rho phi_t(x))|` for one triple.
    pub fn duality_deviation(
        &self,
        rho: &DensityOperator,
        x: &HermitianMatrix,
        t: f64,
    ) -> Result<f64> {
        let lhs = (self.evolve_state(rho, t)?.matrix() * x.matrix()).trace();
        let rhs = (rho.matrix() * self.heisenberg_apply(x, t)?.matrix()).trace();
        Ok((lhs - rhs).norm())
    }

    /// Max operator-norm deviation of `phi_s phi_t = phi_{s+t}` over pairs.
    pub fn semigroup_property_deviation(&self, pairs: &[(f64, f64)]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &(s, t) in pairs {
            Self::check_time(s)?;
            Self::check_time(t)?;
            let es = expm(&self.s_heis.map(|z| z * cr(s)));
            let et = expm(&self.s_heis.map(|z| z * cr(t)));
            let est = expm(&self.s_heis.map(|z| z * cr(s + t)));
            worst = worst.max(operator_norm(&(es * et - est)));
        }
        Ok(worst)
    }

    /// Minimum eigenvalue of the Choi matrix of `phi_t`; nonnegative up to
    /// rounding exactly when the map is completely positive.
    pub fn choi_min_eigenvalue(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        let r = self.dim();
        let e = expm(&self.s_heis.map(|z| z * cr(t)));
        let mut choi = CMat::zeros(r * r, r * r);
        for i in 0..r {
            for j in 0..r {
                let mut unit = CMat::zeros(r, r);
                unit[(i, j)] = cr(1.0);
                let image = unvec_rm(&(&e * vec_rm(&unit)), r, r);
                for a in 0..r {
                    for b in 0..r {
                        choi[(i * r + a, j * r + b)] = image[(a, b)];
                    }
                }
            }
        }
        let vals = crate::linalg::eigvalsh_desc(&hermitize(&choi));
        Ok(vals.last().copied().unwrap_or(0.0))
    }
}

/// Build a generator whose unique absorbing state is the faithful diagonal
/// state `omega` on dimension `dim`.
///
/// Jumps are weighted matrix units `sqrt(g_ij) e_ij` (moving weight from
/// level `j` to level `i`) with `g_ij = rate_scale * omega_i`, so the
/// balance `g_ij omega_j = g_ji omega_i` holds exactly and `diag(omega)`
/// is stationary. `dephasing > 0` adds `sqrt(dephasing) e_ii` jumps that
/// kill off-diagonal sectors without moving any population.
pub fn build_detailed_balance_generator(
    omega: &EigenvalueList,
    dim: usize,
    rate_scale: f64,
    dephasing: f64,
) -> Result<LindbladGenerator> {
    if dim < 2 {
        return Err(Error::BadDim {
            dim,
            reason: "detailed balance needs at least two levels".into(),
        });
    }
    if omega.len() < dim {
        // A zero weight would disconnect its level from the dynamics.
        return Err(Error::NotFaithful { index: omega.len() });
    }
    if omega.len() > dim {
        return Err(Error::BadSpectrum {
            reason: format!("support {} exceeds dimension {}", omega.len(), dim),
        });
    }
    if !omega.is_unit_sum(tol::UNIT_SUM) {
        return Err(Error::NotAState { sum: omega.sum() });
    }
    if !rate_scale.is_finite() || rate_scale <= 0.0 || !dephasing.is_finite() || dephasing < 0.0 {
        return Err(Error::BadArgs {
            reason: "rate_scale must be positive and dephasing nonnegative".into(),
        });
    }
    let mut jumps = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                let g = rate_scale * omega.get(i);
                let mut v = CMat::zeros(dim, dim);
                v[(i, j)] = cr(g.sqrt());
                jumps.push(v);
            }
        }
    }
    if dephasing > 0.0 {
        for i in 0..dim {
            let mut v = CMat::zeros(dim, dim);
            v[(i, i)] = cr(dephasing.sqrt());
            jumps.push(v);
        }
    }
    LindbladGenerator::new(HermitianMatrix::from_real_diagonal(&vec![0.0; dim])?, jumps)
}

/// Serializable recipe for a detailed-balance generator; round-trips
/// through JSON so runs can be reproduced from their reports.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GeneratorSpec {
    /// Number of levels.
    pub dim: usize,
    /// Stationary weights, nonincreasing, summing to one.
    pub omega: Vec<f64>,
    /// Overall jump-rate scale.
    pub rate_scale: f64,
    /// Diagonal dephasing strength.
    pub dephasing: f64,
}

impl GeneratorSpec {
    /// Build the generator this spec describes.
    pub fn build(&self) -> Result<LindbladGenerator> {
        build_detailed_balance_generator(
            &EigenvalueList::from_values(&self.omega)?,
            self.dim,
            self.rate_scale,
            self.dephasing,
        )
    }
}

/// Distances of one evolved trial state to the absorbing state.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AbsorbingTrialRow {
    /// Trace-norm distance to `omega` at each grid time.
    pub distances: Vec<f64>,
    /// The distance at the last grid time.
    pub final_distance: f64,
}

/// Outcome of the absorbing-state sweep.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AbsorbingReport {
    /// Whether the jump support graph is strongly connected.
    pub ergodic: bool,
    /// Grid times used for every trial.
    pub t_grid: Vec<f64>,
    /// One row per random initial state.
    pub trials: Vec<AbsorbingTrialRow>,
    /// Whether every trial ended within [`tol::ABSORB_FINAL`] of `omega`.
    pub all_absorbed: bool,
}

/// Evolve random initial states and record their trace-norm distance to
/// `omega` along `t_grid`. Fails with `NotInvariant` if `omega` itself
/// moves; a disconnected jump graph is reported, not fatal.
pub fn verify_absorbing(
    sg: &CpSemigroup,
    omega: &DensityOperator,
    trials: usize,
    t_grid: &[f64],
    seed: u64,
) -> Result<AbsorbingReport> {
    if omega.dim() != sg.dim() {
        return Err(Error::DimMismatch {
            left: omega.dim(),
            right: sg.dim(),
        });
    }
    let dev = sg.generator().invariance_deviation(omega);
    if dev > tol::SEMIGROUP_DEV {
        return Err(Error::NotInvariant { deviation: dev });
    }
    let ergodic = jump_graph_strongly_connected(sg.generator());
    let mut rows = Vec::with_capacity(trials);
    for trial in 0..trials {
        let rho = crate::densop::random_density(sg.dim(), None, seed.wrapping_add(trial as u64))?;
        let mut distances = Vec::with_capacity(t_grid.len());
        for &t in t_grid {
            let evolved = sg.evolve_state(&rho, t)?;
            distances.push(evolved.distance(omega)?);
        }
        let final_distance = distances.last().copied().unwrap_or(f64::NAN);
        rows.push(AbsorbingTrialRow {
            distances,
            final_distance,
        });
    }
    let all_absorbed = rows.iter().all(|r| r.final_distance <= tol::ABSORB_FINAL);
    Ok(AbsorbingReport {
        ergodic,
        t_grid: t_grid.to_vec(),
        trials: rows,
        all_absorbed,
    })
}

/// Strong connectivity of the directed graph with an edge `j -> i` for
/// every jump entry `v[(i, j)] != 0`, `i != j`. Reachability both ways
/// from node 0 suffices.
fn jump_graph_strongly_connected(gen: &LindbladGenerator) -> bool {
    let r = gen.dim();
    let mut fwd = vec![vec![false; r]; r];
    let mut bwd = vec![vec![false; r]; r];
    for v in gen.jumps() {
        for i in 0..r {
            for j in 0..r {
                if i != j && v[(i, j)].norm() > 1e-12 {
                    fwd[j][i] = true;
                    bwd[i][j] = true;
                }
            }
        }
    }
    let reach_all = |adj: &Vec<Vec<bool>>| {
        let mut seen = vec![false; r];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(n) = stack.pop() {
            for m in 0..r {
                if adj[n][m] && !seen[m] {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach_all(&fwd) && reach_all(&bwd)
}

/// A CP map given by Kraus operators, acting as `x -> sum_i a_i^* x a_i`
/// in the Heisenberg picture.
#[derive(Debug, Clone)]
pub struct KrausMap {
    ops: Vec<CMat>,
}

impl KrausMap {
    /// Validate a nonempty family of square operators of equal dimension.
    pub fn new(ops: Vec<CMat>) -> Result<Self> {
        let Some(first) = ops.first() else {
            return Err(Error::BadArgs {
                reason: "a Kraus family needs at least one operator".into(),
            });
        };
        let r = first.nrows();
        if r == 0 {
            return Err(Error::BadDim {
                dim: 0,
                reason: "Kraus operators need positive dimension".into(),
            });
        }
        for a in &ops {
            if a.nrows() != r || a.ncols() != r {
                return Err(Error::DimMismatch {
                    left: a.nrows().max(a.ncols()),
                    right: r,
                });
            }
        }
        Ok(Self { ops })
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.ops[0].nrows()
    }

    /// The Kraus operators.
    pub fn ops(&self) -> &[CMat] {
        &self.ops
    }

    /// Heisenberg action `sum_i a_i^* x a_i`.
    pub fn heisenberg(&self, x: &CMat) -> CMat {
        let mut out = CMat::zeros(self.dim(), self.dim());
        for a in &self.ops {
            out += a.adjoint() * x * a;
        }
        out
    }

    /// Predual action `sum_i a_i rho a_i^*`.
    pub fn predual(&self, rho: &CMat) -> CMat {
        let mut out = CMat::zeros(self.dim(), self.dim());
        for a in &self.ops {
            out += a * rho * a.adjoint();
        }
        out
    }

    /// `max |phi(1) - 1|`.
    pub fn unitality_deviation(&self) -> f64 {
        let id = CMat::identity(self.dim(), self.dim());
        max_abs(&(self.heisenberg(&id) - id))
    }
}

/// Compression of a unital CP map to the support corner of its invariant
/// state.
#[derive(Debug, Clone)]
pub struct Compression {
    /// Support projection of the invariant state on the ambient space.
    pub projection: HermitianMatrix,
    /// Isometry from the corner into the ambient space (columns span the
    /// support).
    pub isometry: CMat,
    /// The compressed map on the corner, `x -> V^* phi(V x V^*) V`.
    pub compressed: KrausMap,
    /// The invariant state compressed to the corner.
    pub corner_state: DensityOperator,
    /// Min eigenvalue of `phi(P) - P`; monotone when above `-SEMIGROUP_DEV`.
    pub monotone_min_eig: f64,
    /// Whether `phi(P) >= P` within tolerance.
    pub monotone: bool,
    /// Max deviation of `P phi(A) P = P phi(P A P) P` over sampled `A`.
    pub corner_identity_deviation: f64,
    /// Unitality deviation of the compressed map.
    pub corner_unitality_deviation: f64,
    /// Trace-norm motion of the corner state under the compressed predual.
    pub corner_invariance_deviation: f64,
}

/// Compress a unital CP map `phi` with invariant state `omega` to the
/// support corner of `omega`.
///
/// Requires `phi` unital and `omega phi = omega` within tolerance. Reports
/// the monotonicity `phi(P) >= P` of the support projection, the corner
/// identity it implies, and the invariance of the compressed state under
/// the compressed map.
pub fn compress_unital_cp(phi: &KrausMap, omega: &DensityOperator) -> Result<Compression> {
    if phi.dim() != omega.dim() {
        return Err(Error::DimMismatch {
            left: phi.dim(),
            right: omega.dim(),
        });
    }
    let unital_dev = phi.unitality_deviation();
    if unital_dev > tol::SEMIGROUP_DEV {
        return Err(Error::NotUnital {
            deviation: unital_dev,
        });
    }
    let moved = hermitize(&phi.predual(omega.matrix())) - omega.matrix();
    let inv_dev = trace_norm_hermitian(&moved);
    if inv_dev > tol::SEMIGROUP_DEV {
        return Err(Error::NotInvariant { deviation: inv_dev });
    }
    let p = support_projection(omega, tol::PSD_EIG);
    let n = omega.dim();
    let (vals, u) = omega.hermitian().eigh();
    let corner_dim = vals.iter().filter(|&&v| v > tol::PSD_EIG).count();
    let mut isometry = CMat::zeros(n, corner_dim);
    let mut col = 0;
    for (i, &v) in vals.iter().enumerate() {
        if v > tol::PSD_EIG {
            isometry.set_column(col, &u.column(i));
            col += 1;
        }
    }
    let phi_p = phi.heisenberg(p.matrix());
    let monotone_min_eig = crate::linalg::eigvalsh_desc(&hermitize(&(&phi_p - p.matrix())))
        .last()
        .copied()
        .unwrap_or(0.0);
    let monotone = monotone_min_eig >= -tol::SEMIGROUP_DEV;
    // Corner identity on a deterministic sample of Hermitian inputs.
    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0x5eed);
    let mut corner_identity_deviation: f64 = 0.0;
    for _ in 0..16 {
        let a = crate::linalg::random_hermitian(&mut rng, n);
        let lhs = p.matrix() * phi.heisenberg(&a) * p.matrix();
        let pap = p.matrix() * &a * p.matrix();
        let rhs = p.matrix() * phi.heisenberg(&pap) * p.matrix();
        corner_identity_deviation = corner_identity_deviation.max(max_abs(&(lhs - rhs)));
    }
    let compressed = KrausMap::new(
        phi.ops()
            .iter()
            .map(|a| isometry.adjoint() * a * &isometry)
            .collect(),
    )?;
    let corner_unitality_deviation = compressed.unitality_deviation();
    let corner_raw = isometry.adjoint() * omega.matrix() * &isometry;
    let corner_trace = corner_raw.trace().re;
    let corner_state = DensityOperator::from_matrix(corner_raw.scale(1.0 / corner_trace))?;
    let corner_moved =
        hermitize(&compressed.predual(corner_state.matrix())) - corner_state.matrix();
    let corner_invariance_deviation = trace_norm_hermitian(&corner_moved);
    Ok(Compression {
        projection: p,
        isometry,
        compressed,
        corner_state,
        monotone_min_eig,
        monotone,
        corner_identity_deviation,
        corner_unitality_deviation,
        corner_invariance_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densop::random_density;
    use crate::linalg::{ginibre, random_hermitian};
    use approx::assert_relative_eq;
    use rand::SeedableRng;

    fn list(raw: &[f64]) -> EigenvalueList {
        EigenvalueList::from_values(raw).unwrap()
    }

    fn random_generator(seed: u64, r: usize, jumps: usize) -> LindbladGenerator {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = HermitianMatrix::new(random_hermitian(&mut rng, r)).unwrap();
        let vs = (0..jumps)
            .map(|_| ginibre(&mut rng, r, r).scale(0.5))
            .collect();
        LindbladGenerator::new(h, vs).unwrap()
    }

    #[test]
    fn generator_is_unital_and_superops_match_direct_action() {
        let gen = random_generator(1, 3, 2);
        assert!(gen.unitality_deviation() < 1e-13);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = ginibre(&mut rng, 3, 3);
        let via_superop = unvec_rm(&(gen.heisenberg_superop() * vec_rm(&x)), 3, 3);
        assert!(max_abs(&(via_superop - gen.apply_heisenberg(&x))) < 1e-12);
        let rho = ginibre(&mut rng, 3, 3);
        let via_pre = unvec_rm(&(gen.predual_superop() * vec_rm(&rho)), 3, 3);
        assert!(max_abs(&(via_pre - gen.apply_predual(&rho))) < 1e-12);
    }

    #[test]
    fn predual_is_trace_adjoint_of_heisenberg() {
        let gen = random_generator(3, 3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = ginibre(&mut rng, 3, 3);
        let y = ginibre(&mut rng, 3, 3);
        let lhs = (gen.apply_predual(&y) * &x).trace();
        let rhs = (&y * gen.apply_heisenberg(&x)).trace();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn purely_hamiltonian_semigroup_is_unitary_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = HermitianMatrix::new(random_hermitian(&mut rng, 3)).unwrap();
        let gen = LindbladGenerator::new(h.clone(), vec![]).unwrap();
        let sg = CpSemigroup::new(gen);
        let x = HermitianMatrix::new(random_hermitian(&mut rng, 3)).unwrap();
        let t = 0.7;
        let got = sg.heisenberg_apply(&x, t).unwrap();
        let u = expm(&(h.matrix() * (Complex64::i() * cr(t))));
        let want = &u * x.matrix() * u.adjoint();
        assert!(max_abs(&(got.matrix() - want)) < 1e-10);
    }

    #[test]
    fn amplitude_damping_matches_closed_form() {
        let gamma: f64 = 0.8;
        let mut v = CMat::zeros(2, 2);
        v[(0, 1)] = cr(gamma.sqrt());
        let gen = LindbladGenerator::new(
            HermitianMatrix::from_real_diagonal(&[0.0, 0.0]).unwrap(),
            vec![v],
        )
        .unwrap();
        let sg = CpSemigroup::new(gen);
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = cr(0.4);
        m[(1, 1)] = cr(0.6);
        m[(0, 1)] = Complex64::new(0.2, 0.1);
        m[(1, 0)] = Complex64::new(0.2, -0.1);
        let rho = DensityOperator::from_matrix(m).unwrap();
        for &t in &[0.3, 1.0, 4.0] {
            let out = sg.evolve_state(&rho, t).unwrap();
            let decay = (-gamma * t).exp();
            assert_relative_eq!(out.matrix()[(1, 1)].re, 0.6 * decay, epsilon = 1e-10);
            assert_relative_eq!(
                out.matrix()[(0, 1)].re,
                0.2 * (-gamma * t / 2.0).exp(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn semigroup_property_and_identity_at_zero() {
        let sg = CpSemigroup::new(random_generator(6, 3, 2));
        let pairs = [(0.1, 0.9), (1.0, 2.5), (3.0, 7.0)];
        assert!(sg.semigroup_property_deviation(&pairs).unwrap() < 1e-9);
        let x = HermitianMatrix::from_real_diagonal(&[1.0, -2.0, 0.5]).unwrap();
        let at_zero = sg.heisenberg_apply(&x, 0.0).unwrap();
        assert!(max_abs(&(at_zero.matrix() - x.matrix())) < 1e-13);
        assert!(sg.heisenberg_apply(&x, -1.0).is_err());
    }

    #[test]
    fn duality_holds_along_the_flow() {
        let sg = CpSemigroup::new(random_generator(7, 3, 3));
        let rho = random_density(3, None, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = HermitianMatrix::new(random_hermitian(&mut rng, 3)).unwrap();
        for &t in &[0.2, 1.0, 5.0] {
            assert!(sg.duality_deviation(&rho, &x, t).unwrap() < 1e-9);
        }
    }

    #[test]
    fn choi_matrix_stays_psd_along_the_flow() {
        let sg = CpSemigroup::new(random_generator(10, 3, 2));
        for &t in &[0.0, 0.3, 1.7] {
            assert!(sg.choi_min_eigenvalue(t).unwrap() > -1e-8, "t = {t}");
        }
    }

    #[test]
    fn detailed_balance_construction_gates() {
        assert!(matches!(
            build_detailed_balance_generator(&list(&[1.0]), 1, 1.0, 0.0),
            Err(Error::BadDim { .. })
        ));
        assert!(matches!(
            build_detailed_balance_generator(&list(&[1.0]), 2, 1.0, 0.0),
            Err(Error::NotFaithful { index: 1 })
        ));
        assert!(matches!(
            build_detailed_balance_generator(&list(&[0.4, 0.3]), 2, 1.0, 0.0),
            Err(Error::NotAState { .. })
        ));
        assert!(matches!(
            build_detailed_balance_generator(&list(&[0.75, 0.25]), 2, 0.0, 0.0),
            Err(Error::BadArgs { .. })
        ));
    }

    #[test]
    fn generator_spec_round_trips_through_json() {
        let spec = GeneratorSpec {
            dim: 2,
            omega: vec![0.75, 0.25],
            rate_scale: 1.0,
            dephasing: 0.5,
        };
        let text = serde_json::to_string(&spec).unwrap();
        let back: GeneratorSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        let gen = back.build().unwrap();
        let stationary = DensityOperator::diagonal(&[0.75, 0.25]).unwrap();
        assert!(gen.invariance_deviation(&stationary) < 1e-14);
    }

    #[test]
    fn detailed_balance_rates_balance_and_fix_omega() {
        let omega = list(&[0.75, 0.25]);
        let gen = build_detailed_balance_generator(&omega, 2, 1.3, 0.5).unwrap();
        // Extract g_ij from the off-diagonal jumps and check the balance
        // g_ij omega_j = g_ji omega_i exactly.
        let mut g = [[0.0f64; 2]; 2];
        for v in gen.jumps() {
            for i in 0..2 {
                for j in 0..2 {
                    if i != j && v[(i, j)].norm() > 0.0 {
                        g[i][j] = v[(i, j)].norm_sqr();
                    }
                }
            }
        }
        assert_relative_eq!(g[0][1] * 0.25, g[1][0] * 0.75, epsilon = 1e-15);
        let stationary = DensityOperator::diagonal(&[0.75, 0.25]).unwrap();
        assert!(gen.invariance_deviation(&stationary) < 1e-14);
        // Any other diagonal state moves.
        let other = DensityOperator::diagonal(&[0.5, 0.5]).unwrap();
        assert!(gen.invariance_deviation(&other) > 1e-3);
    }

    #[test]
    fn absorbing_state_attracts_random_states() {
        let omega = list(&[0.75, 0.25]);
        let gen = build_detailed_balance_generator(&omega, 2, 1.0, 0.5).unwrap();
        let sg = CpSemigroup::new(gen);
        let target = DensityOperator::diagonal(&[0.75, 0.25]).unwrap();
        let grid = [1.0, 5.0, 10.0, 25.0, 50.0];
        let report = verify_absorbing(&sg, &target, 5, &grid, 0xabc).unwrap();
        assert!(report.ergodic);
        assert!(report.all_absorbed);
        for row in &report.trials {
            assert!(crate::intertwiner::is_nonincreasing(
                &row.distances,
                tol::MONOTONE_JITTER
            ));
        }
    }

    #[test]
    fn absorbing_gates_and_ergodicity_flag() {
        let omega = list(&[0.75, 0.25]);
        let gen = build_detailed_balance_generator(&omega, 2, 1.0, 0.5).unwrap();
        let sg = CpSemigroup::new(gen);
        let wrong = DensityOperator::diagonal(&[0.5, 0.5]).unwrap();
        assert!(matches!(
            verify_absorbing(&sg, &wrong, 1, &[1.0], 1),
            Err(Error::NotInvariant { .. })
        ));
        // Dephasing alone has no off-diagonal jumps: not ergodic, and the
        // maximally mixed state is invariant but not absorbing.
        let mut d0 = CMat::zeros(2, 2);
        d0[(0, 0)] = cr(1.0);
        let gen = LindbladGenerator::new(
            HermitianMatrix::from_real_diagonal(&[0.0, 0.0]).unwrap(),
            vec![d0],
        )
        .unwrap();
        let sg = CpSemigroup::new(gen);
        let mixed = DensityOperator::maximally_mixed(2);
        let report = verify_absorbing(&sg, &mixed, 3, &[1.0, 50.0], 2).unwrap();
        assert!(!report.ergodic);
        assert!(!report.all_absorbed);
    }

    #[test]
    fn compression_of_amplitude_damping_to_ground_state() {
        let gamma: f64 = 0.6;
        let mut a1 = CMat::identity(2, 2);
        a1[(1, 1)] = cr((1.0 - gamma).sqrt());
        let mut a2 = CMat::zeros(2, 2);
        a2[(0, 1)] = cr(gamma.sqrt());
        let phi = KrausMap::new(vec![a1, a2]).unwrap();
        let ground = DensityOperator::diagonal(&[1.0, 0.0]).unwrap();
        let comp = compress_unital_cp(&phi, &ground).unwrap();
        assert_eq!(comp.compressed.dim(), 1);
        assert!(comp.monotone);
        assert!(comp.corner_identity_deviation < 1e-12);
        assert!(comp.corner_unitality_deviation < 1e-12);
        assert!(comp.corner_invariance_deviation < 1e-12);
    }

    #[test]
    fn compression_of_block_unitary_average() {
        // Mixture of block-diagonal unitaries fixing omega = diag(.5,.5,0):
        // the corner is two dimensional and carries the whole dynamics.
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let mut us = Vec::new();
        for _ in 0..3 {
            let u2 = crate::linalg::random_unitary(&mut rng, 2);
            let mut u = CMat::identity(3, 3);
            for i in 0..2 {
                for j in 0..2 {
                    u[(i, j)] = u2[(i, j)];
                }
            }
            us.push(u);
        }
        let p = [0.5f64, 0.3, 0.2];
        let kraus: Vec<CMat> = us.iter().zip(p).map(|(u, w)| u.scale(w.sqrt())).collect();
        let phi = KrausMap::new(kraus).unwrap();
        assert!(phi.unitality_deviation() < 1e-12);
        let omega = DensityOperator::diagonal(&[0.5, 0.5, 0.0]).unwrap();
        let comp = compress_unital_cp(&phi, &omega).unwrap();
        assert_eq!(comp.compressed.dim(), 2);
        assert!(comp.monotone);
        assert!(comp.corner_identity_deviation < 1e-10);
        assert!(comp.corner_unitality_deviation < 1e-10);
        assert!(comp.corner_invariance_deviation < 1e-10);
    }

    #[test]
    fn compression_gates() {
        let mut a = CMat::zeros(2, 2);
        a[(0, 1)] = cr(1.0);
        let not_unital = KrausMap::new(vec![a]).unwrap();
        let ground = DensityOperator::diagonal(&[1.0, 0.0]).unwrap();
        assert!(matches!(
            compress_unital_cp(&not_unital, &ground),
            Err(Error::NotUnital { .. })
        ));
        let gamma: f64 = 0.6;
        let mut a1 = CMat::identity(2, 2);
        a1[(1, 1)] = cr((1.0 - gamma).sqrt());
        let mut a2 = CMat::zeros(2, 2);
        a2[(0, 1)] = cr(gamma.sqrt());
        let phi = KrausMap::new(vec![a1, a2]).unwrap();
        let mixed = DensityOperator::maximally_mixed(2);
        assert!(matches!(
            compress_unital_cp(&phi, &mixed),
            Err(Error::NotInvariant { .. })
        ));
    }
}
