//! Eigenvalue lists: nonincreasing, nonnegative, conceptually padded with an
//! infinite tail of zeros.
//!
//! A list stands for the spectrum of a positive trace-class operator, so two
//! lists are "the same state up to unitaries" exactly when they are equal
//! entry by entry after padding. The operations here mirror that calculus:
//!
//! - `l1_distance` is the metric `sum_k |a_k - b_k|` over the padded lists.
//! - `direct_sum` merges two lists, `tensor` multiplies them pairwise; both
//!   return canonical (sorted, trimmed) lists.
//! - `tensor_top_k` produces the `k` largest products *lazily*, together
//!   with a certified bound on the mass it did not enumerate, so distances
//!   between huge products can be bracketed without materializing them.
//! - `moment(n) = sum_k a_k^n` determines a list with finite support: power
//!   sums up to the support size pin down the multiset. This is what makes
//!   tensor squares injective: `moment_n(a (x) a) = moment_n(a)^2`, so equal
//!   squares force equal moments and hence equal lists.
//!
//! Canonical form trims entries below [`tol::ZERO_TRIM`] and clamps tiny
//! negative eigensolver noise (down to `-`[`tol::NEG_CLAMP`]) to zero;
//! anything more negative is rejected rather than hidden.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use crate::{tol, Error, Result};

/// Hard cap on the number of products an eager tensor may materialize.
pub const TENSOR_EAGER_CAP: usize = 1 << 20;

/// Tolerance on `|moment_n(a)^2 - moment_n(b)^2|` when comparing tensor
/// squares through their moments.
pub const MOMENT_GAP: f64 = 1e-10;

/// l1 threshold under which two canonical lists are reported equal.
pub const LIST_EQ: f64 = 1e-8;

/// A canonical eigenvalue list. Entries are finite, nonnegative, and
/// nonincreasing; trailing entries below the zero-trim threshold are absent.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EigenvalueList {
    values: Vec<f64>,
}

impl EigenvalueList {
    /// The empty list, i.e. the zero operator's spectrum.
    pub fn empty() -> Self {
        Self { values: Vec::new() }
    }

    /// Canonicalize raw values: clamp entries in `[-NEG_CLAMP, 0)` to zero,
    /// sort nonincreasing, trim everything below `ZERO_TRIM`. Entries more
    /// negative than the clamp tolerance are rejected.
    pub fn from_values(raw: &[f64]) -> Result<Self> {
        let mut values = Vec::with_capacity(raw.len());
        for (index, &v) in raw.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::BadArgs {
                    reason: format!("entry {index} is not finite"),
                });
            }
            if v < -tol::NEG_CLAMP {
                return Err(Error::NegativeEntry { index, value: v });
            }
            let v = v.max(0.0);
            if v >= tol::ZERO_TRIM {
                values.push(v);
            }
        }
        values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(Self { values })
    }

    /// The uniform list `{1/n, ..., 1/n}` with `n` entries; sums to one.
    pub fn uniform(n: usize) -> Self {
        Self {
            values: vec![1.0 / n as f64; n],
        }
    }

    /// Entries in canonical order. The conceptual zero tail is not stored.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of stored (nonzero) entries.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True when no entry survives trimming.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entry at `i`, reading the infinite zero padding beyond the end.
    pub fn get(&self, i: usize) -> f64 {
        self.values.get(i).copied().unwrap_or(0.0)
    }

    /// Sum of all entries (the trace of the represented operator).
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Whether the list sums to one within `tol`.
    pub fn is_unit_sum(&self, tol: f64) -> bool {
        (self.sum() - 1.0).abs() <= tol
    }

    /// Metric: `sum_k |a_k - b_k|` over zero-padded lists. Symmetric,
    /// nonnegative, and zero exactly on equal canonical lists.
    pub fn l1_distance(&self, other: &Self) -> f64 {
        let n = self.len().max(other.len());
        (0..n).map(|i| (self.get(i) - other.get(i)).abs()).sum()
    }

    /// Direct sum: the multiset union, re-sorted. Models the spectrum of a
    /// block-diagonal operator.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut values = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.values, &other.values);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] >= b[j] {
                values.push(a[i]);
                i += 1;
            } else {
                values.push(b[j]);
                j += 1;
            }
        }
        values.extend_from_slice(&a[i..]);
        values.extend_from_slice(&b[j..]);
        Self { values }
    }

    /// Eager tensor product: all pairwise products, sorted and trimmed.
    /// Refuses to materialize more than [`TENSOR_EAGER_CAP`] products.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let size = self
            .len()
            .checked_mul(other.len())
            .ok_or(Error::SizeCapExceeded {
                size: usize::MAX,
                cap: TENSOR_EAGER_CAP,
            })?;
        if size > TENSOR_EAGER_CAP {
            return Err(Error::SizeCapExceeded {
                size,
                cap: TENSOR_EAGER_CAP,
            });
        }
        let mut values = Vec::with_capacity(size);
        for &x in &self.values {
            for &y in &other.values {
                let p = x * y;
                if p >= tol::ZERO_TRIM {
                    values.push(p);
                }
            }
        }
        values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(Self { values })
    }

    /// `p`-fold tensor power; `p = 0` gives the scalar list `{1}`.
    pub fn tensor_power(&self, p: usize) -> Result<Self> {
        let mut acc = Self { values: vec![1.0] };
        for _ in 0..p {
            acc = acc.tensor(self)?;
        }
        Ok(acc)
    }

    /// The `k` largest entries of `self (x) other` without materializing the
    /// full product, plus a certified bound on the mass left out.
    ///
    /// A max-heap walks the product grid from the top-left corner; a cell
    /// `(i, j)` enters the frontier only after a dominating neighbor is
    /// emitted, so pops come out nonincreasing. Ties in the product value
    /// are emitted in lexicographic `(i, j)` order. The bound is
    /// `sum(self) * sum(other) - sum(prefix)`, clamped at zero; it is exact
    /// up to float rounding because the total mass of a tensor product is
    /// the product of the masses.
    pub fn tensor_top_k(&self, other: &Self, k: usize) -> CertifiedPrefix {
        let total = self.sum() * other.sum();
        let mut values = Vec::with_capacity(k.min(self.len() * other.len().max(1)));
        let mut heap: BinaryHeap<Cell> = BinaryHeap::new();
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        if !self.is_empty() && !other.is_empty() && k > 0 {
            heap.push(Cell {
                value: self.values[0] * other.values[0],
                i: 0,
                j: 0,
            });
            seen.insert((0, 0));
        }
        while values.len() < k {
            let Some(cell) = heap.pop() else { break };
            if cell.value >= tol::ZERO_TRIM {
                values.push(cell.value);
            } else {
                // Everything below the current cell is smaller still and
                // would be trimmed from the canonical product anyway.
                break;
            }
            let mut push = |i: usize, j: usize, heap: &mut BinaryHeap<Cell>| {
                if i < self.len() && j < other.len() && seen.insert((i, j)) {
                    heap.push(Cell {
                        value: self.values[i] * other.values[j],
                        i,
                        j,
                    });
                }
            };
            push(cell.i + 1, cell.j, &mut heap);
            push(cell.i, cell.j + 1, &mut heap);
        }
        let emitted: f64 = values.iter().sum();
        CertifiedPrefix {
            prefix: Self { values },
            tail_mass_bound: (total - emitted).max(0.0),
        }
    }

    /// Power sum `sum_k a_k^n` for `n >= 1`. Finite lists are determined by
    /// their power sums up to the support size.
    pub fn moment(&self, n: u32) -> f64 {
        debug_assert!(n >= 1, "moments are defined for n >= 1");
        self.values.iter().map(|&v| v.powi(n as i32)).sum()
    }

    /// Whether all moments up to `n_max` agree within `tol`. Sound as an
    /// equality test when `n_max` is at least both support sizes.
    pub fn equal_by_moments(&self, other: &Self, n_max: u32, tol: f64) -> bool {
        (1..=n_max).all(|n| (self.moment(n) - other.moment(n)).abs() <= tol)
    }
}

impl serde::Serialize for EigenvalueList {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.values.iter())
    }
}

impl<'de> serde::Deserialize<'de> for EigenvalueList {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<f64>::deserialize(d)?;
        EigenvalueList::from_values(&raw).map_err(serde::de::Error::custom)
    }
}

/// Heap cell for the lazy product walk: greatest value first, lexicographic
/// `(i, j)` first among equal values.
struct Cell {
    value: f64,
    i: usize,
    j: usize,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Cell {}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        // Values are finite and nonnegative, so total_cmp is a plain order.
        self.value
            .total_cmp(&other.value)
            .then_with(|| (other.i, other.j).cmp(&(self.i, self.j)))
    }
}

/// A leading segment of a (possibly never materialized) eigenvalue list with
/// a certified upper bound on the mass of the entries left out.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedPrefix {
    /// The known leading entries, in canonical order.
    pub prefix: EigenvalueList,
    /// Upper bound on the total mass beyond the prefix; never negative.
    pub tail_mass_bound: f64,
}

impl CertifiedPrefix {
    /// Wrap a fully known list as a prefix with zero tail bound.
    pub fn complete(list: EigenvalueList) -> Self {
        Self {
            prefix: list,
            tail_mass_bound: 0.0,
        }
    }
}

/// Bracket the l1 distance of the two underlying full lists.
///
/// Entries up to the shorter prefix length compare exactly. Beyond it, each
/// list has a known suffix mass plus an unknown tail mass within its bound;
/// the absolute-difference sum over that region lies between the gap of the
/// possible mass ranges and their total. For prefixes of equal length the
/// width of the returned interval is exactly the sum of the two tail bounds,
/// and it degenerates to a point when both bounds are zero.
pub fn l1_distance_certified(a: &CertifiedPrefix, b: &CertifiedPrefix) -> (f64, f64) {
    let m = a.prefix.len().min(b.prefix.len());
    let base: f64 = (0..m)
        .map(|i| (a.prefix.get(i) - b.prefix.get(i)).abs())
        .sum();
    let suffix_a: f64 = a.prefix.values()[m..].iter().sum();
    let suffix_b: f64 = b.prefix.values()[m..].iter().sum();
    let lo_tail = (suffix_a - suffix_b - b.tail_mass_bound)
        .max(suffix_b - suffix_a - a.tail_mass_bound)
        .max(0.0);
    let hi_tail = suffix_a + a.tail_mass_bound + suffix_b + b.tail_mass_bound;
    (base + lo_tail, base + hi_tail)
}

/// Verdict of the tensor-square comparison of two states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct TensorSquareReport {
    /// Whether `Lambda(a (x) a) = Lambda(b (x) b)` judged through moments.
    pub squares_equal: bool,
    /// Whether the lists themselves are equal within [`LIST_EQ`].
    pub lists_equal: bool,
}

/// Compare the tensor squares of two unit-sum lists through their moments.
///
/// Uses `moment_n(a (x) a) = moment_n(a)^2` and compares those squares for
/// `n` up to the larger support size squared, which determines the square
/// lists. Equal squares force equal moments of `a` and `b` (power sums are
/// nonnegative here), hence equal lists: the report never shows
/// `squares_equal` without `lists_equal` outside of degenerate near-ties at
/// the tolerance boundary.
pub fn tensor_square_report(a: &EigenvalueList, b: &EigenvalueList) -> Result<TensorSquareReport> {
    for list in [a, b] {
        if !list.is_unit_sum(tol::UNIT_SUM) {
            return Err(Error::NotAState { sum: list.sum() });
        }
    }
    // Power sums up to the square of the support size determine the square
    // lists; beyond a few thousand powers the terms underflow anyway.
    let support = a.len().max(b.len()).max(1);
    let n_max = (support * support).min(4096) as u32;
    let squares_equal = (1..=n_max).all(|n| {
        let ma = a.moment(n);
        let mb = b.moment(n);
        (ma * ma - mb * mb).abs() <= MOMENT_GAP
    });
    let lists_equal = a.l1_distance(b) <= LIST_EQ;
    Ok(TensorSquareReport {
        squares_equal,
        lists_equal,
    })
}
