//! One-dimensional nonuniform transforms.
//!
//! * Type II, [`Plan2`]: `f_j = Σ_k c_k exp(-2πi x_j k)`, `x_j ∈ [0, 1)`.
//! * Type I, [`Plan1`]: `f_j = Σ_k c_k exp(-2πi j ω_k / N)`, the transpose of
//!   type II with samples `ω_k / N`.
//! * Type III, [`Plan3`]: `f_j = Σ_k c_k exp(-2πi x_j ω_k)`, `ω_k ∈ [0, N)`.
//!
//! Planning computes the grid assignment, the rank and the low-rank factors.
//! Execution costs `K` FFTs of length `N` plus `O(KN)` diagonal work. The `K`
//! per-term buffers are always merged in ascending `r`, so [`Plan2::execute`]
//! and [`Plan2::execute_par`] return bit-identical results.

mod samples;
mod type1;
mod type2;
mod type3;

use std::borrow::Cow;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::approx::LowRankFactors;
use crate::fft::FftPlan;

pub use samples::{grid_assign, normalize_samples, SampleSet};
pub use type1::Plan1;
pub use type2::Plan2;
pub use type3::Plan3;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// `Σ_r D(u_r) F(t,:) D(v_r) c`
    Forward,
    /// `Σ_r D(v_r) Fᵀ Scatter_t D(u_r) c`
    Transpose,
    /// `Σ_r D(conj v_r) F* Scatter_t D(conj u_r) c`
    Adjoint,
}

/// Terms merged per pass over the output.
const BLOCK: usize = 4;

/// `t`, the factors and a length-`N` FFT: everything needed to apply the
/// low-rank sum and its transpose.
///
/// Sample-indexed data is kept sorted by node, so the gathers and scatters
/// against the FFT buffer walk it in order. The `v_r` of a type-II plan are
/// real and stored as such.
#[derive(Debug, Clone)]
struct Engine {
    fft: FftPlan,
    /// `order[i]` is the sample at sorted position `i`.
    order: Vec<usize>,
    t_sorted: Vec<usize>,
    u_sorted: Vec<Vec<Complex64>>,
    v: Vec<Vec<f64>>,
}

impl Engine {
    fn new(t: &[usize], factors: &LowRankFactors, fft: FftPlan) -> Self {
        let mut order: Vec<usize> = (0..t.len()).collect();
        order.sort_by_key(|&j| t[j]);
        let t_sorted = order.iter().map(|&j| t[j]).collect();
        let u_sorted = (0..factors.rank())
            .map(|r| {
                let u = factors.u(r);
                order.iter().map(|&j| u[j]).collect()
            })
            .collect();
        let v = (0..factors.rank())
            .map(|r| {
                factors
                    .v(r)
                    .iter()
                    .map(|z| {
                        debug_assert_eq!(z.im, 0.0);
                        z.re
                    })
                    .collect()
            })
            .collect();
        Self {
            fft,
            order,
            t_sorted,
            u_sorted,
            v,
        }
    }

    /// The factors in original sample order.
    fn factors(&self) -> LowRankFactors {
        let u = self
            .u_sorted
            .iter()
            .map(|col| {
                let mut out = vec![ZERO; col.len()];
                for (&j, z) in self.order.iter().zip(col) {
                    out[j] = *z;
                }
                out
            })
            .collect();
        let v = self
            .v
            .iter()
            .map(|col| col.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        LowRankFactors::from_columns(u, v).expect("engine factors are consistent")
    }

    fn grid(&self) -> usize {
        self.fft.len()
    }

    fn rank(&self) -> usize {
        self.v.len()
    }

    fn output_len(&self, mode: Mode) -> usize {
        match mode {
            Mode::Forward => self.order.len(),
            _ => self.grid(),
        }
    }

    /// Frequency-indexed input as is, sample-indexed input in sorted order.
    fn prepare<'a>(&self, mode: Mode, input: &'a [Complex64]) -> Cow<'a, [Complex64]> {
        match mode {
            Mode::Forward => Cow::Borrowed(input),
            _ => Cow::Owned(self.order.iter().map(|&j| input[j]).collect()),
        }
    }

    /// Forward output comes out in sorted sample order.
    fn finish(&self, mode: Mode, acc: Vec<Complex64>) -> Vec<Complex64> {
        match mode {
            Mode::Forward => {
                let mut out = vec![ZERO; acc.len()];
                for (&j, a) in self.order.iter().zip(acc) {
                    out[j] = a;
                }
                out
            }
            _ => acc,
        }
    }

    /// Length-`N` buffer holding the FFT stage of term `r`.
    fn term(&self, mode: Mode, r: usize, input: &[Complex64], buf: &mut [Complex64], scratch: &mut [Complex64]) {
        match mode {
            Mode::Forward => {
                for ((b, &v), c) in buf.iter_mut().zip(&self.v[r]).zip(input) {
                    *b = c * v;
                }
                self.fft.forward_with_scratch(buf, scratch);
            }
            Mode::Transpose => {
                buf.fill(ZERO);
                for ((&t, u), c) in self.t_sorted.iter().zip(&self.u_sorted[r]).zip(input) {
                    buf[t] += u * c;
                }
                self.fft.forward_with_scratch(buf, scratch);
            }
            Mode::Adjoint => {
                buf.fill(ZERO);
                for ((&t, u), c) in self.t_sorted.iter().zip(&self.u_sorted[r]).zip(input) {
                    buf[t] += u.conj() * c;
                }
                self.fft.conj_forward_with_scratch(buf, scratch);
            }
        }
    }

    /// Add terms `r0, r0 + 1, ...` held in `bufs` to `out`, in ascending `r`
    /// for every entry.
    fn merge(&self, mode: Mode, r0: usize, bufs: &[Vec<Complex64>], out: &mut [Complex64]) {
        match mode {
            Mode::Forward => {
                for (i, (o, &t)) in out.iter_mut().zip(&self.t_sorted).enumerate() {
                    let mut acc = *o;
                    for (u, buf) in self.u_sorted[r0..].iter().zip(bufs) {
                        acc += u[i] * buf[t];
                    }
                    *o = acc;
                }
            }
            Mode::Transpose | Mode::Adjoint => {
                for (k, o) in out.iter_mut().enumerate() {
                    let mut acc = *o;
                    for (v, buf) in self.v[r0..].iter().zip(bufs) {
                        acc += buf[k] * v[k];
                    }
                    *o = acc;
                }
            }
        }
    }

    fn run(&self, mode: Mode, input: &[Complex64]) -> Vec<Complex64> {
        let input = self.prepare(mode, input);
        let mut out = vec![ZERO; self.output_len(mode)];
        let mut bufs = vec![vec![ZERO; self.grid()]; BLOCK.min(self.rank())];
        let mut scratch = self.fft.make_scratch();
        for r0 in (0..self.rank()).step_by(BLOCK) {
            let count = BLOCK.min(self.rank() - r0);
            for (b, buf) in bufs[..count].iter_mut().enumerate() {
                self.term(mode, r0 + b, &input, buf, &mut scratch);
            }
            self.merge(mode, r0, &bufs[..count], &mut out);
        }
        self.finish(mode, out)
    }

    fn run_par(&self, mode: Mode, input: &[Complex64]) -> Vec<Complex64> {
        let input = self.prepare(mode, input);
        let buffers: Vec<Vec<Complex64>> = (0..self.rank())
            .into_par_iter()
            .map_init(
                || self.fft.make_scratch(),
                |scratch, r| {
                    let mut buf = vec![ZERO; self.grid()];
                    self.term(mode, r, &input, &mut buf, scratch);
                    buf
                },
            )
            .collect();
        let mut out = vec![ZERO; self.output_len(mode)];
        self.merge(mode, 0, &buffers, &mut out);
        self.finish(mode, out)
    }
}
