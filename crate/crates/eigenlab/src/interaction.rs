//! A two-sided chain model of an interaction between past and future.
//!
//! Sites are indexed by the integers. A model carries a past site state
//! `omega_minus`, a future site state `omega_plus`, and a core block: the
//! global state is `omega_minus` on every site left of the core, the core
//! density on its sites, and `omega_plus` on every site to the right. The
//! shift moves local observables along the chain, so expectations far to
//! the left and right of the core are pure product expectations.
//!
//! The interaction strength of the pair is the supremum over symmetric
//! windows of the trace-norm distance between the two product
//! restrictions `omega_minus^{(x) 2n}` and `omega_plus^{(x) 2n}`. Three
//! exact quantities bracket it:
//!
//! - per window, the sorted-spectrum distance is a floor:
//!   `lhs_n >= l1(Lambda_-^{(x)2n}, Lambda_+^{(x)2n})`;
//! - the two-site tensor-square distance
//!   `l1(Lambda_- (x) Lambda_-, Lambda_+ (x) Lambda_+)` is a floor for
//!   the supremum;
//! - the fidelity bound `lhs_n >= 2(1 - F^{2n})` certifies that the
//!   supremum is exactly 2 whenever the site states differ at all.
//!
//! For a pair of uniform spectra with `p < q` atoms the tensor-square
//! distance has the closed form `2 - 2 p^2 / q^2`, which
//! [`uniform_pair_crosscheck`] verifies against the list arithmetic.

use serde::Serialize;

use crate::densop::{
    fidelity, partial_trace_matrix, trace_norm_distance, DensityOperator, FactorShape,
    HermitianMatrix,
};
use crate::eigenlist::{tensor_square_report, EigenvalueList};
use crate::linalg::CMat;
use crate::{tol, Error, Result};

/// Cap on the ambient dimension of any dense window matrix.
pub const DENSE_DIM_CAP: usize = 1 << 14;

/// Cap on the number of product terms the combinatorial path visits.
pub const PRODUCT_TERM_CAP: usize = 1 << 20;

/// Half-extent of the modeled chain; observables must stay within
/// `[-extent, extent]` after shifting.
pub const DEFAULT_EXTENT: i64 = 1 << 30;

/// Which invariant product state to restrict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The product of `omega_minus` over the whole chain.
    Past,
    /// The product of `omega_plus` over the whole chain.
    Future,
}

/// A density operator occupying a contiguous block of sites.
#[derive(Debug, Clone)]
struct CoreBlock {
    state: DensityOperator,
    start: i64,
    sites: usize,
}

/// The chain model: site dimension, the two site states, and a core block
/// that interpolates between them.
#[derive(Debug, Clone)]
pub struct ChainInteractionModel {
    site_dim: usize,
    past_site: DensityOperator,
    future_site: DensityOperator,
    core: CoreBlock,
    extent: i64,
}

impl ChainInteractionModel {
    /// Model from two site states of equal dimension. The core defaults
    /// to the single site `0` carrying the past state, so the global
    /// state is a plain product.
    pub fn new(past_site: DensityOperator, future_site: DensityOperator) -> Result<Self> {
        if past_site.dim() != future_site.dim() {
            return Err(Error::DimMismatch {
                left: past_site.dim(),
                right: future_site.dim(),
            });
        }
        let core = CoreBlock {
            state: past_site.clone(),
            start: 0,
            sites: 1,
        };
        Ok(Self {
            site_dim: past_site.dim(),
            past_site,
            future_site,
            core,
            extent: DEFAULT_EXTENT,
        })
    }

    /// Diagonal model: site states are the given spectra laid out on the
    /// diagonal, zero-padded to `site_dim`.
    pub fn diagonal(
        site_dim: usize,
        minus: &EigenvalueList,
        plus: &EigenvalueList,
    ) -> Result<Self> {
        let past = DensityOperator::from_list(minus, site_dim)?;
        let future = DensityOperator::from_list(plus, site_dim)?;
        Self::new(past, future)
    }

    /// Replace the core block. The state must occupy a whole number of
    /// sites: its dimension a positive power of the site dimension.
    pub fn with_core(mut self, state: DensityOperator, start: i64) -> Result<Self> {
        let mut sites = 0usize;
        let mut dim = 1usize;
        while dim < state.dim() {
            dim *= self.site_dim;
            sites += 1;
        }
        if dim != state.dim() || sites == 0 {
            return Err(Error::BadDim {
                dim: state.dim(),
                reason: format!(
                    "core dimension must be a positive power of the site dimension {}",
                    self.site_dim
                ),
            });
        }
        self.core = CoreBlock {
            state,
            start,
            sites,
        };
        self.check_core_in_extent()?;
        Ok(self)
    }

    /// Shrink or grow the modeled chain extent.
    pub fn with_extent(mut self, extent: i64) -> Result<Self> {
        if extent < 1 {
            return Err(Error::BadArgs {
                reason: format!("extent must be at least 1, got {extent}"),
            });
        }
        self.extent = extent;
        self.check_core_in_extent()?;
        Ok(self)
    }

    fn check_core_in_extent(&self) -> Result<()> {
        let (lo, hi) = self.core_range();
        if lo < -self.extent || hi > self.extent {
            return Err(Error::WindowOutOfRange { lo, hi });
        }
        Ok(())
    }

    /// Dimension of one site.
    pub fn site_dim(&self) -> usize {
        self.site_dim
    }

    /// The past site state.
    pub fn past_site(&self) -> &DensityOperator {
        &self.past_site
    }

    /// The future site state.
    pub fn future_site(&self) -> &DensityOperator {
        &self.future_site
    }

    /// Inclusive site interval occupied by the core.
    pub fn core_range(&self) -> (i64, i64) {
        (
            self.core.start,
            self.core.start + self.core.sites as i64 - 1,
        )
    }

    /// Modeled half-extent of the chain.
    pub fn extent(&self) -> i64 {
        self.extent
    }

    /// Spectrum of the requested site state.
    pub fn site_list(&self, side: Side) -> Result<EigenvalueList> {
        match side {
            Side::Past => self.past_site.eigenlist(),
            Side::Future => self.future_site.eigenlist(),
        }
    }

    fn side_state(&self, side: Side) -> &DensityOperator {
        match side {
            Side::Past => &self.past_site,
            Side::Future => &self.future_site,
        }
    }

    fn window_dim(&self, sites: usize) -> Result<usize> {
        let dim = (self.site_dim.max(1) as u128).saturating_pow(sites as u32);
        if dim > DENSE_DIM_CAP as u128 {
            return Err(Error::SizeCapExceeded {
                size: dim.min(usize::MAX as u128) as usize,
                cap: DENSE_DIM_CAP,
            });
        }
        Ok(dim as usize)
    }

    /// Restriction of the invariant product state `omega_bar_side` to a
    /// symmetric window of `2n` sites: the `2n`-fold tensor power of the
    /// site state.
    pub fn local_restriction(&self, side: Side, n: usize) -> Result<DensityOperator> {
        if n == 0 {
            return Err(Error::BadArgs {
                reason: "window half-width must be at least 1".into(),
            });
        }
        self.window_dim(2 * n)?;
        let site = self.side_state(side).matrix();
        let mut out = site.clone();
        for _ in 1..2 * n {
            out = out.kronecker(site);
        }
        Ok(DensityOperator::from_trusted(out))
    }

    /// Whether both site states are diagonal in the standard basis.
    pub fn is_diagonal_model(&self) -> bool {
        let off = |m: &CMat| {
            let mut worst: f64 = 0.0;
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    if r != c {
                        worst = worst.max(m[(r, c)].norm());
                    }
                }
            }
            worst
        };
        off(self.past_site.matrix()) <= 1e-12 && off(self.future_site.matrix()) <= 1e-12
    }

    /// Trace-norm distance between the two `2n`-site restrictions.
    ///
    /// Diagonal models take the combinatorial path: the distance of
    /// commuting product states is the l1 distance of their product
    /// probability vectors, summed term by term without materializing any
    /// matrix. Other models build the dense restrictions.
    pub fn local_norm_distance(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::BadArgs {
                reason: "window half-width must be at least 1".into(),
            });
        }
        if !self.is_diagonal_model() {
            return self.local_norm_distance_dense(n);
        }
        let terms = (self.site_dim as u128).saturating_pow(2 * n as u32);
        if terms > PRODUCT_TERM_CAP as u128 {
            return Err(Error::SizeCapExceeded {
                size: terms.min(usize::MAX as u128) as usize,
                cap: PRODUCT_TERM_CAP,
            });
        }
        let p: Vec<f64> = (0..self.site_dim)
            .map(|i| self.past_site.matrix()[(i, i)].re)
            .collect();
        let q: Vec<f64> = (0..self.site_dim)
            .map(|i| self.future_site.matrix()[(i, i)].re)
            .collect();
        Ok(product_vector_l1(&p, &q, 2 * n))
    }

    /// The same distance through dense matrices; the cross-check target
    /// for the combinatorial path.
    pub fn local_norm_distance_dense(&self, n: usize) -> Result<f64> {
        let a = self.local_restriction(Side::Past, n)?;
        let b = self.local_restriction(Side::Future, n)?;
        trace_norm_distance(a.hermitian(), b.hermitian())
    }

    /// Density operator of the global state on the inclusive site window
    /// `[lo, hi]`: side states outside the core, the core density (partial
    /// traced if the window cuts it) on its sites.
    pub fn window_state(&self, lo: i64, hi: i64) -> Result<DensityOperator> {
        if lo > hi {
            return Err(Error::BadArgs {
                reason: format!("window [{lo}, {hi}] is empty"),
            });
        }
        if lo < -self.extent || hi > self.extent {
            return Err(Error::WindowOutOfRange { lo, hi });
        }
        let len = (hi - lo + 1) as usize;
        self.window_dim(len)?;
        let (core_lo, core_hi) = self.core_range();
        let cut_lo = lo.max(core_lo);
        let cut_hi = hi.min(core_hi);
        let mut out = CMat::identity(1, 1);
        let mut site = lo;
        while site <= hi {
            if site < core_lo {
                out = out.kronecker(self.past_site.matrix());
                site += 1;
            } else if site > core_hi {
                out = out.kronecker(self.future_site.matrix());
                site += 1;
            } else {
                // The core overlap [cut_lo, cut_hi] enters as one block.
                let keep: Vec<usize> = (cut_lo..=cut_hi).map(|s| (s - core_lo) as usize).collect();
                let shape = FactorShape::new(vec![self.site_dim; self.core.sites])?;
                let piece = if keep.len() == self.core.sites {
                    self.core.state.matrix().clone()
                } else {
                    partial_trace_matrix(self.core.state.matrix(), &shape, &keep)?
                };
                out = out.kronecker(&piece);
                site = cut_hi + 1;
            }
        }
        Ok(DensityOperator::from_trusted(out))
    }

    /// Expectation of a local observable shifted `t` sites along the
    /// chain, in the global state. Far to the right of the core this is
    /// the pure `omega_plus` product expectation, far to the left the
    /// `omega_minus` one, exactly.
    pub fn shifted_expectation(&self, x: &LocalObservable, t: i64) -> Result<f64> {
        let (lo, hi) = x.window();
        let (lo, hi) = (lo + t, hi + t);
        if lo < -self.extent || hi > self.extent {
            return Err(Error::WindowOutOfRange { lo, hi });
        }
        let expected = self.window_dim((hi - lo + 1) as usize)?;
        if x.matrix().dim() != expected {
            return Err(Error::DimMismatch {
                left: x.matrix().dim(),
                right: expected,
            });
        }
        let rho = self.window_state(lo, hi)?;
        Ok((rho.matrix() * x.matrix().matrix()).trace().re)
    }

    /// Per-window distances, floors, and limit certificate for the
    /// interaction bound.
    pub fn verify_interaction_bound(&self, n_max: usize) -> Result<InteractionBoundReport> {
        if n_max == 0 {
            return Err(Error::BadArgs {
                reason: "need at least one window".into(),
            });
        }
        let lambda_minus = self.past_site.eigenlist()?;
        let lambda_plus = self.future_site.eigenlist()?;
        let rhs = interaction_lower_bound(&lambda_minus, &lambda_plus)?;
        let mut rows = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let lhs = self.local_norm_distance(n)?;
            let floor = lambda_minus
                .tensor_power(2 * n)?
                .l1_distance(&lambda_plus.tensor_power(2 * n)?);
            rows.push(InteractionRow { n, lhs, floor });
        }
        let fid = fidelity(&self.past_site, &self.future_site)?;
        let certified_limit = if fid < 1.0 - 1e-9 { 2.0 } else { 0.0 };
        let lhs_monotone = rows
            .windows(2)
            .all(|w| w[1].lhs >= w[0].lhs - tol::MONOTONE_JITTER);
        let floors_hold = rows.iter().all(|r| r.lhs >= r.floor - tol::WEYL_SLACK);
        let sup = rows
            .last()
            .map(|r| r.lhs.max(certified_limit))
            .unwrap_or(certified_limit);
        let inequality_at_sup = sup >= rhs - tol::WEYL_SLACK;
        let verdict = if lhs_monotone && floors_hold && inequality_at_sup {
            "holds"
        } else {
            "violated"
        };
        Ok(InteractionBoundReport {
            d: self.site_dim,
            lambda_minus,
            lambda_plus,
            rows,
            rhs,
            fidelity: fid,
            certified_limit,
            lhs_monotone,
            floors_hold,
            inequality_at_sup,
            verdict: verdict.into(),
        })
    }

    /// Spectral witness of nontriviality: distinct site spectra force a
    /// nonzero interaction; equal spectra decide nothing.
    pub fn triviality_witness(&self) -> Result<TrivialityWitness> {
        let report =
            tensor_square_report(&self.past_site.eigenlist()?, &self.future_site.eigenlist()?)?;
        let verdict = if report.lists_equal {
            "inconclusive"
        } else {
            "nontrivial"
        };
        Ok(TrivialityWitness {
            lists_equal: report.lists_equal,
            tensor_squares_equal: report.squares_equal,
            verdict: verdict.into(),
        })
    }
}

/// `sum over multi-indices |prod p - prod q|` for `sites` independent
/// slots, pruning branches that are dead in both vectors.
fn product_vector_l1(p: &[f64], q: &[f64], sites: usize) -> f64 {
    fn walk(p: &[f64], q: &[f64], left: usize, pa: f64, qa: f64) -> f64 {
        if pa == 0.0 && qa == 0.0 {
            return 0.0;
        }
        if left == 0 {
            return (pa - qa).abs();
        }
        let mut sum = 0.0;
        for i in 0..p.len() {
            sum += walk(p, q, left - 1, pa * p[i], qa * q[i]);
        }
        sum
    }
    walk(p, q, sites, 1.0, 1.0)
}

/// One window row of the bound report.
#[derive(Debug, Clone, Serialize)]
pub struct InteractionRow {
    /// Window half-width; the window spans `2n` sites.
    pub n: usize,
    /// Trace-norm distance of the two restrictions.
    pub lhs: f64,
    /// Sorted-spectrum distance of the same restrictions.
    pub floor: f64,
}

/// Outcome of the interaction-bound sweep.
#[derive(Debug, Clone, Serialize)]
pub struct InteractionBoundReport {
    /// Site dimension.
    pub d: usize,
    /// Past site spectrum.
    pub lambda_minus: EigenvalueList,
    /// Future site spectrum.
    pub lambda_plus: EigenvalueList,
    /// Per-window distances and floors.
    pub rows: Vec<InteractionRow>,
    /// Tensor-square distance `l1(L- (x) L-, L+ (x) L+)`.
    pub rhs: f64,
    /// Single-site fidelity between the two states.
    pub fidelity: f64,
    /// Established limit of `lhs_n`: 2 when the fidelity is below one,
    /// else 0.
    pub certified_limit: f64,
    /// Whether `lhs_n` was nondecreasing across the sweep.
    pub lhs_monotone: bool,
    /// Whether every window satisfied its sorted-spectrum floor.
    pub floors_hold: bool,
    /// Whether `sup_n lhs_n` (including the certified limit) dominates
    /// `rhs`.
    pub inequality_at_sup: bool,
    /// `"holds"` when all three checks pass.
    pub verdict: String,
}

/// Spectral nontriviality witness.
#[derive(Debug, Clone, Serialize)]
pub struct TrivialityWitness {
    /// Whether the two site spectra agree as lists.
    pub lists_equal: bool,
    /// Whether their tensor squares agree moment by moment.
    pub tensor_squares_equal: bool,
    /// `"nontrivial"` or `"inconclusive"`.
    pub verdict: String,
}

/// Tensor-square distance `l1(minus (x) minus, plus (x) plus)`: the
/// computable floor for the interaction strength of the pair.
pub fn interaction_lower_bound(minus: &EigenvalueList, plus: &EigenvalueList) -> Result<f64> {
    for list in [minus, plus] {
        if !list.is_unit_sum(tol::UNIT_SUM) {
            return Err(Error::NotAState { sum: list.sum() });
        }
    }
    Ok(minus.tensor(minus)?.l1_distance(&plus.tensor(plus)?))
}

/// Closed form against list arithmetic for a uniform pair.
#[derive(Debug, Clone, Serialize)]
pub struct UniformPairReport {
    /// `2 - 2 p^2 / q^2`.
    pub formula_value: f64,
    /// The same number through [`interaction_lower_bound`].
    pub eigenlist_value: f64,
    /// Agreement within `1e-12`.
    pub matches: bool,
}

/// For uniform spectra with `p` and `q > p` atoms the tensor-square
/// distance collapses to `2 - 2 p^2 / q^2`; compute both sides.
pub fn uniform_pair_crosscheck(p: usize, q: usize) -> Result<UniformPairReport> {
    if p < 1 || q <= p {
        return Err(Error::BadArgs {
            reason: format!("need 1 <= p < q, got p = {p}, q = {q}"),
        });
    }
    let formula_value = 2.0 - 2.0 * (p * p) as f64 / (q * q) as f64;
    let eigenlist_value =
        interaction_lower_bound(&EigenvalueList::uniform(p), &EigenvalueList::uniform(q))?;
    Ok(UniformPairReport {
        formula_value,
        eigenlist_value,
        matches: (formula_value - eigenlist_value).abs() <= 1e-12,
    })
}

/// A Hermitian observable supported on a contiguous site window.
#[derive(Debug, Clone)]
pub struct LocalObservable {
    lo: i64,
    hi: i64,
    matrix: HermitianMatrix,
}

impl LocalObservable {
    /// Observable on the inclusive window `[lo, hi]`.
    pub fn new(lo: i64, hi: i64, matrix: HermitianMatrix) -> Result<Self> {
        if lo > hi {
            return Err(Error::BadArgs {
                reason: format!("window [{lo}, {hi}] is empty"),
            });
        }
        Ok(Self { lo, hi, matrix })
    }

    /// The inclusive site window.
    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    /// Number of sites under the observable.
    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    /// Whether the window is a single site.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The matrix acting on the window.
    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    /// The same observable translated by `t` sites.
    pub fn shift(&self, t: i64) -> Self {
        Self {
            lo: self.lo + t,
            hi: self.hi + t,
            matrix: self.matrix.clone(),
        }
    }
}
