//! Adaptive one-dimensional quadrature: globally adaptive Gauss–Kronrod
//! (7/15 points) on finite intervals, and the trapezoid rule with node
//! doubling for smooth periodic integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of integrand evaluations.
    pub max_evals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-14, rel_tol: 1e-10, max_evals: 200_000 }
    }
}

impl QuadOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadOptions { rel_tol, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for k in 0..7 {
        let x = h * XGK[k];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[k] * s;
        if k % 2 == 1 {
            gauss += WG[k / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// `∫_a^b f` to `max(abs_tol, rel_tol·|I|)`, bisecting the segment with the
/// largest error estimate until the total estimate meets the target.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0, evals: 0 });
    }
    let mut heap = BinaryHeap::new();
    let (v, e) = gk15(&mut f, a, b);
    let mut evals = 15;
    let (mut total, mut err) = (v, e);
    heap.push(Segment { a, b, value: v, error: e });
    loop {
        if !total.is_finite() {
            return Err(Error::QuadratureBudgetExceeded(format!("non-finite integrand on [{a}, {b}]")));
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            return Ok(QuadResult { value: total, error: err, evals });
        }
        if evals + 30 > opts.max_evals {
            return Err(Error::QuadratureBudgetExceeded(format!(
                "{evals} evaluations on [{a}, {b}], error estimate {err:e} for value {total:e}"
            )));
        }
        let seg = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (seg.a + seg.b);
        let (v1, e1) = gk15(&mut f, seg.a, mid);
        let (v2, e2) = gk15(&mut f, mid, seg.b);
        evals += 30;
        total += v1 + v2 - seg.value;
        err += e1 + e2 - seg.error;
        heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2 });
        if heap.len() % 64 == 0 {
            // re-sum to keep the running totals from drifting
            total = heap.iter().map(|s| s.value).sum();
            err = heap.iter().map(|s| s.error).sum();
        }
    }
}

/// `∫_0^period f` for a smooth periodic `f` by the trapezoid rule, doubling
/// the node count from `start` until two successive values agree to `tol`
/// (relative, with `abs_floor` as absolute floor).
pub fn integrate_periodic<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    period: f64,
    start: usize,
    tol: f64,
    abs_floor: f64,
    max_nodes: usize,
) -> Result<QuadResult> {
    let mut nodes = start.max(2);
    let mut sum = 0.0;
    for k in 0..nodes {
        sum += f(period * k as f64 / nodes as f64)?;
    }
    let mut value = sum * period / nodes as f64;
    loop {
        if 2 * nodes > max_nodes {
            return Err(Error::QuadratureBudgetExceeded(format!("periodic rule needs more than {max_nodes} nodes")));
        }
        for k in 0..nodes {
            sum += f(period * (2 * k + 1) as f64 / (2 * nodes) as f64)?;
        }
        nodes *= 2;
        let next = sum * period / nodes as f64;
        let diff = (next - value).abs();
        value = next;
        if diff <= (tol * value.abs()).max(abs_floor) {
            return Ok(QuadResult { value, error: diff, evals: nodes });
        }
    }
}
