use crate::completion::PartialSymMatrix;
use crate::dense;
use crate::error::{Error, Result};
use crate::sparse::{SparseSymPattern, PIVOT_TOL};

/// Upper-triangular `R` with `RᵀR` equal to a principal block of some matrix, updated
/// as rows/columns leave from the front and arrive at the back.
///
/// Rows have stride `2·cap` and logical column `j` lives at `off + j`, so dropping the
/// leading column only advances `off`; the block is moved back to the left edge once
/// every `cap` deletions.
#[derive(Debug, Clone)]
pub struct UpperFactor {
    cap: usize,
    stride: usize,
    off: usize,
    k: usize,
    r: Vec<f64>,
    col: Vec<f64>,
}

impl UpperFactor {
    /// Empty factor able to hold blocks of order up to `cap`.
    pub fn with_capacity(cap: usize) -> Self {
        let stride = 2 * cap.max(1);
        Self { cap, stride, off: 0, k: 0, r: vec![0.0; cap * stride], col: vec![0.0; cap] }
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.r[i * self.stride + self.off + j]
    }

    /// `ln det(RᵀR)`.
    pub fn logdet(&self) -> f64 {
        2.0 * (0..self.k).map(|i| self.get(i, i).ln()).sum::<f64>()
    }

    /// Drops the leading `count` variables. Removing column 0 leaves an upper-Hessenberg
    /// block whose subdiagonal is zeroed by Givens rotations, keeping the diagonal positive.
    pub fn delete_leading(&mut self, count: usize) {
        for _ in 0..count.min(self.k) {
            self.delete_first();
        }
    }

    fn delete_first(&mut self) {
        let (stride, k) = (self.stride, self.k);
        self.r[self.off] = 0.0;
        self.off += 1;
        let base = self.off;
        let r = &mut self.r;
        for j in 0..k - 1 {
            let (top, bot) = (j * stride + base, (j + 1) * stride + base);
            let (a, b) = (r[top + j], r[bot + j]);
            let h = (a * a + b * b).sqrt();
            if h == 0.0 {
                continue;
            }
            let (c, s) = (a / h, b / h);
            r[top + j] = h;
            r[bot + j] = 0.0;
            let (upper, lower) = r.split_at_mut(bot);
            for (x, y) in upper[top + j + 1..top + k - 1].iter_mut().zip(&mut lower[j + 1..k - 1]) {
                let (u, v) = (*x, *y);
                *x = c * u + s * v;
                *y = -s * u + c * v;
            }
        }
        let last = (k - 1) * stride + base;
        r[last..last + k - 1].iter_mut().for_each(|v| *v = 0.0);
        self.k = k - 1;
        if self.off + self.cap > stride {
            for i in 0..self.k {
                let row = i * stride;
                r.copy_within(row + base..row + base + self.k, row);
                r[row + self.k..row + stride].iter_mut().for_each(|v| *v = 0.0);
            }
            self.off = 0;
        }
    }

    /// Appends one variable with cross terms `cross` (against the current block) and
    /// diagonal `diag`. Returns the new pivot `d = diag − ‖R⁻ᵀ cross‖²`, which must be
    /// positive; on failure the factor is unchanged.
    pub fn append(&mut self, cross: &[f64], diag: f64, tol: f64) -> Option<f64> {
        let (stride, off, k) = (self.stride, self.off, self.k);
        assert!(k < self.cap && cross.len() == k);
        let w = &mut self.col[..k];
        w.copy_from_slice(cross);
        // Rᵀ w = cross, sweeping rows of R
        for t in 0..k {
            let row = &self.r[t * stride + off..t * stride + off + k];
            let wt = w[t] / row[t];
            w[t] = wt;
            for (wi, rti) in w[t + 1..].iter_mut().zip(&row[t + 1..]) {
                *wi -= rti * wt;
            }
        }
        let d = diag - dense::dot(w, w);
        if !(d > tol) || !d.is_finite() {
            return None;
        }
        for i in 0..k {
            self.r[i * stride + off + k] = w[i];
        }
        self.r[k * stride + off + k] = d.sqrt();
        self.k = k + 1;
        Some(d)
    }
}

/// Bandwidth of `pattern` if it is exactly the band pattern of that width.
fn exact_bandwidth(pattern: &SparseSymPattern) -> Option<usize> {
    let n = pattern.n();
    let p = (0..n).map(|j| pattern.col(j).last().map_or(0, |&i| i - j)).max().unwrap_or(0);
    (0..n)
        .all(|j| pattern.col(j).len() == (n - 1 - j).min(p) && pattern.col(j).first().is_none_or(|&i| i == j + 1))
        .then_some(p)
}

/// Interleaved lanes for [`sequential`] on long bands.
const LANES: usize = 8;

/// Range kept by the per-lane pivot products; one more in-range factor cannot overflow.
const PROD_MIN: f64 = 1e-100;
const PROD_MAX: f64 = 1e100;

/// `ln det X̂` for a band pattern in natural order, in `O(n p²)`.
///
/// Consecutive cliques `{r..r+p}` and `{r+1..r+p+1}` share `p` variables, so
/// `ln det X̂ = ln det X̄_{0..p−1} + Σ_r ln d_r` where `d_r` is the pivot produced when
/// `r + p` is appended to the factor of `{r..r+p−1}`. Long bands are cut into segments
/// that each start from a fresh factor and slide in lockstep.
pub fn logdet_completion_banded(x: &PartialSymMatrix) -> Result<f64> {
    let p = exact_bandwidth(x.pattern()).ok_or(Error::PatternMismatch)?;
    let n = x.n();
    if n == 0 {
        return Ok(0.0);
    }
    if p + 1 >= n {
        let mut a = dense::gather(&(0..n).collect::<Vec<_>>(), |i, j| x.get(i, j));
        dense::cholesky_in_place(&mut a, n).map_err(|_| Error::NotCompletable(0))?;
        return Ok(dense::logdet_from_factor(&a, n));
    }
    let band = Band::new(x, p);
    if n - p >= 4 * LANES * (p + 1) {
        interleaved(&band)
    } else {
        sequential(&band)
    }
}

struct Band<'a> {
    diag: &'a [f64],
    off: &'a [f64],
    /// First storage slot of each column.
    starts: Vec<usize>,
    n: usize,
    p: usize,
    tol: f64,
}

impl<'a> Band<'a> {
    fn new(x: &'a PartialSymMatrix, p: usize) -> Self {
        let v = x.values();
        let max_diag = v.diag.iter().copied().fold(0.0, f64::max);
        let starts = (0..x.n()).map(|j| v.pattern().col_range(j).start).collect();
        Self { diag: &v.diag, off: &v.off, starts, n: x.n(), p, tol: PIVOT_TOL * max_diag }
    }

    fn diag(&self, i: usize) -> f64 {
        self.diag[i]
    }

    /// Entry `(i, j)` with `0 < i − j ≤ p`.
    fn at(&self, i: usize, j: usize) -> f64 {
        self.off[self.starts[j] + (i - j - 1)]
    }
}

fn sequential(b: &Band) -> Result<f64> {
    let (n, p) = (b.n, b.p);
    let mut f = UpperFactor::with_capacity(p + 1);
    let mut cross = Vec::with_capacity(p);
    let mut sum = 0.0;
    for j in 0..=p {
        cross.clear();
        cross.extend((0..j).map(|i| b.at(j, i)));
        sum += f.append(&cross, b.diag(j), b.tol).ok_or(Error::NotCompletable(0))?.ln();
    }
    for r in 1..n - p {
        f.delete_leading(1);
        let new = r + p;
        cross.clear();
        cross.extend((r..new).map(|i| b.at(new, i)));
        sum += f.append(&cross, b.diag(new), b.tol).ok_or(Error::NotCompletable(r))?.ln();
    }
    Ok(sum)
}

/// [`UpperFactor`] for `LANES` independent blocks stored lane-innermost, so each
/// rotation and solve step runs across all lanes at once.
struct LaneFactor {
    stride: usize,
    off: usize,
    k: usize,
    r: Vec<[f64; LANES]>,
    /// `1 / R_ii` per row.
    inv_diag: Vec<[f64; LANES]>,
    w: Vec<[f64; LANES]>,
}

impl LaneFactor {
    fn new(cap: usize) -> Self {
        let stride = 2 * cap;
        Self {
            stride,
            off: 0,
            k: 0,
            r: vec![[0.0; LANES]; cap * stride],
            inv_diag: vec![[0.0; LANES]; cap],
            w: vec![[0.0; LANES]; cap],
        }
    }

    fn delete_first(&mut self) {
        let (stride, k) = (self.stride, self.k);
        self.off += 1;
        let base = self.off;
        let r = &mut self.r;
        for j in 0..k - 1 {
            let (top, bot) = (j * stride + base, (j + 1) * stride + base);
            // b is a diagonal entry of a valid factor, so h > 0 in every lane that matters
            let (a, b) = (r[top + j], r[bot + j]);
            let (mut c, mut s, mut h) = ([0.0; LANES], [0.0; LANES], [0.0; LANES]);
            for l in 0..LANES {
                h[l] = (a[l] * a[l] + b[l] * b[l]).sqrt();
                let inv = 1.0 / h[l];
                c[l] = a[l] * inv;
                s[l] = b[l] * inv;
                self.inv_diag[j][l] = inv;
            }
            r[top + j] = h;
            r[bot + j] = [0.0; LANES];
            let (upper, lower) = r.split_at_mut(bot);
            for (x, y) in upper[top + j + 1..top + k - 1].iter_mut().zip(&mut lower[j + 1..k - 1]) {
                for l in 0..LANES {
                    let (u, v) = (x[l], y[l]);
                    x[l] = c[l] * u + s[l] * v;
                    y[l] = -s[l] * u + c[l] * v;
                }
            }
        }
        self.k = k - 1;
        if self.off + self.k + 1 > stride {
            for i in 0..self.k {
                let row = i * stride;
                r.copy_within(row + base..row + base + self.k, row);
            }
            self.off = 0;
        }
    }

    /// Appends one variable per lane; returns the pivots. A lane whose pivot is not above
    /// `tol` gets pivot 1 so the others can continue, and is flagged in the second array.
    fn append(&mut self, cross: &[[f64; LANES]], diag: [f64; LANES], tol: f64) -> ([f64; LANES], [bool; LANES]) {
        let (stride, off, k) = (self.stride, self.off, self.k);
        let w = &mut self.w[..k];
        w.copy_from_slice(cross);
        for t in 0..k {
            let row = &self.r[t * stride + off..t * stride + off + k];
            let mut wt = w[t];
            for l in 0..LANES {
                wt[l] *= self.inv_diag[t][l];
            }
            w[t] = wt;
            for (wi, rti) in w[t + 1..].iter_mut().zip(&row[t + 1..]) {
                for l in 0..LANES {
                    wi[l] -= rti[l] * wt[l];
                }
            }
        }
        let (mut d, mut bad) = (diag, [false; LANES]);
        for wi in w.iter() {
            for l in 0..LANES {
                d[l] -= wi[l] * wi[l];
            }
        }
        for l in 0..LANES {
            if !(d[l] > tol) || !d[l].is_finite() {
                bad[l] = true;
                d[l] = 1.0;
            }
        }
        for i in 0..k {
            self.r[i * stride + off + k] = self.w[i];
        }
        for l in 0..LANES {
            let root = d[l].sqrt();
            self.r[k * stride + off + k][l] = root;
            self.inv_diag[k][l] = 1.0 / root;
        }
        self.k = k + 1;
        (d, bad)
    }
}

fn interleaved(b: &Band) -> Result<f64> {
    let (n, p) = (b.n, b.p);
    let total = n - p;
    let seg = total.div_ceil(LANES);
    // lane l owns cliques [l·seg, (l+1)·seg) and walks seg cliques from `start[l]`
    let start: [usize; LANES] = std::array::from_fn(|l| (l * seg).min(total - seg));
    let owns = |l: usize, r: usize| r >= l * seg && r < ((l + 1) * seg).min(total);

    let mut f = LaneFactor::new(p + 1);
    let mut cross = vec![[0.0; LANES]; p];
    let mut failed: Option<usize> = None;
    let mut fail = |r: usize| failed = Some(failed.map_or(r, |f| f.min(r)));
    let mut sum = 0.0;
    // running pivot products per lane; a logarithm is taken only when one leaves range
    let mut prod = [1.0; LANES];

    for j in 0..p {
        for (i, c) in cross[..j].iter_mut().enumerate() {
            *c = std::array::from_fn(|l| b.at(start[l] + j, start[l] + i));
        }
        let (d, bad) = f.append(&cross[..j], std::array::from_fn(|l| b.diag(start[l] + j)), b.tol);
        sum += d[0].ln();
        for l in 0..LANES {
            if bad[l] {
                fail(start[l]);
            }
        }
    }
    for step in 0..seg {
        for (i, c) in cross.iter_mut().enumerate() {
            *c = std::array::from_fn(|l| b.at(start[l] + step + p, start[l] + step + i));
        }
        let (d, bad) = f.append(&cross, std::array::from_fn(|l| b.diag(start[l] + step + p)), b.tol);
        for l in 0..LANES {
            let r = start[l] + step;
            if owns(l, r) {
                if bad[l] {
                    fail(r);
                }
                if (PROD_MIN..=PROD_MAX).contains(&d[l]) {
                    prod[l] *= d[l];
                } else {
                    sum += d[l].ln();
                }
            }
        }
        for q in prod.iter_mut() {
            if !(PROD_MIN..=PROD_MAX).contains(q) {
                sum += q.ln();
                *q = 1.0;
            }
        }
        f.delete_first();
    }
    sum += prod.iter().map(|q| q.ln()).sum::<f64>();
    match failed {
        Some(r) => Err(Error::NotCompletable(r)),
        None => Ok(sum),
    }
}
