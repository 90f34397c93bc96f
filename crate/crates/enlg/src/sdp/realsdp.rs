//! Real-symmetric form of an SDP.
//!
//! Hermitian blocks embed as `H -> [[Re H, -Im H], [Im H, Re H]]`. The
//! embedding doubles traces, so objective and constraint matrices are
//! halved to keep all values identical. Problems whose data is entirely
//! real skip the embedding and are solved at their original size.

use alloc::vec::Vec;

use num_complex::Complex;

use super::{HermEntry, SdpProblem};
use crate::linalg::{ComplexMat, HermMat};

/// Entry of a sparse real symmetric matrix, upper triangle (`row <= col`).
#[derive(Clone, Copy, Debug)]
pub struct RealEntry {
    pub block: u32,
    pub row: u32,
    pub col: u32,
    pub value: f64,
}

pub type RealSymSparse = Vec<RealEntry>;

#[derive(Clone, Debug)]
pub struct RealConstraint {
    pub entries: RealSymSparse,
    pub gamma: f64,
}

/// Standard-form SDP over real symmetric PSD blocks.
#[derive(Clone, Debug)]
pub struct RealSdp {
    pub block_dims: Vec<usize>,
    pub objective: RealSymSparse,
    pub constraints: Vec<RealConstraint>,
    /// Whether blocks are doubled embeddings of complex blocks.
    pub embedded: bool,
}

fn is_real_problem(p: &SdpProblem) -> bool {
    let all_real = |entries: &[HermEntry]| entries.iter().all(|e| e.value.im == 0.0);
    all_real(&p.objective) && p.constraints.iter().all(|c| all_real(&c.entries))
}

fn embed_entries(entries: &[HermEntry], dims: &[usize], halve: bool) -> RealSymSparse {
    let scale = if halve { 0.5 } else { 1.0 };
    let mut out = Vec::with_capacity(entries.len() * 4);
    for e in entries {
        let n = dims[e.block as usize] as u32;
        let (r, c, v) = (e.row, e.col, e.value * scale);
        if r == c {
            out.push(RealEntry { block: e.block, row: r, col: r, value: v.re });
            out.push(RealEntry { block: e.block, row: n + r, col: n + r, value: v.re });
        } else {
            if v.re != 0.0 {
                out.push(RealEntry { block: e.block, row: r, col: c, value: v.re });
                out.push(RealEntry { block: e.block, row: n + r, col: n + c, value: v.re });
            }
            if v.im != 0.0 {
                out.push(RealEntry { block: e.block, row: r, col: n + c, value: -v.im });
                out.push(RealEntry { block: e.block, row: c, col: n + r, value: v.im });
            }
        }
    }
    out
}

fn copy_entries(entries: &[HermEntry]) -> RealSymSparse {
    entries
        .iter()
        .map(|e| RealEntry { block: e.block, row: e.row, col: e.col, value: e.value.re })
        .collect()
}

/// Converts a (possibly complex) Hermitian SDP into real-symmetric form.
pub fn embed_real(p: &SdpProblem) -> RealSdp {
    if is_real_problem(p) {
        return RealSdp {
            block_dims: p.block_dims.clone(),
            objective: copy_entries(&p.objective),
            constraints: p
                .constraints
                .iter()
                .map(|c| RealConstraint { entries: copy_entries(&c.entries), gamma: c.gamma })
                .collect(),
            embedded: false,
        };
    }
    RealSdp {
        block_dims: p.block_dims.iter().map(|&d| 2 * d).collect(),
        objective: embed_entries(&p.objective, &p.block_dims, true),
        constraints: p
            .constraints
            .iter()
            .map(|c| RealConstraint {
                entries: embed_entries(&c.entries, &p.block_dims, true),
                gamma: c.gamma,
            })
            .collect(),
        embedded: true,
    }
}

/// Maps a real solution back to Hermitian blocks. For embedded problems
/// this projects onto the embedding subalgebra, which preserves
/// positivity as well as all objective and constraint values.
pub(super) fn extract_complex(
    p: &SdpProblem,
    real: &RealSdp,
    x: &[Vec<f64>],
) -> Vec<HermMat> {
    let mut out = Vec::with_capacity(p.block_dims.len());
    for (b, &n) in p.block_dims.iter().enumerate() {
        let data = &x[b];
        let m = if real.embedded { 2 * n } else { n };
        debug_assert_eq!(data.len(), m * m);
        let mat = if real.embedded {
            ComplexMat::from_fn(n, n, |r, c| {
                let re = 0.5 * (data[r * m + c] + data[(n + r) * m + (n + c)]);
                let im = 0.5 * (data[(n + r) * m + c] - data[r * m + (n + c)]);
                Complex::new(re, im)
            })
        } else {
            ComplexMat::from_fn(n, n, |r, c| Complex::new(data[r * m + c], 0.0))
        };
        out.push(HermMat::symmetrize(&mat));
    }
    out
}
