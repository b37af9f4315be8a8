//! Higher limits over orbit categories and Ext between functors.
//!
//! Two independent pipelines are provided: the normalized cobar complex of
//! chains of non-identity morphisms, and a resolution by sums of
//! representable functors followed by the Yoneda identification
//! `Nat(F_p[Hom(−, x)], M) = M(x)`.

use std::collections::HashMap;

use serde::Serialize;

use crate::orbit::{constant_functor, FunctorModule, OrbitCategory};

use super::linalg::{add_mod, mul_mod, neg_mod, FpMatrix, RowReducer};
use super::HomalgError;

/// A sparse matrix stored as row lists of `(column, value)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<(u32, u8)>>,
}

impl SparseMatrix {
    pub fn from_dense(m: &FpMatrix) -> Self {
        let entries = (0..m.rows())
            .map(|i| m.row(i).iter().enumerate().filter(|(_, &v)| v != 0).map(|(j, &v)| (j as u32, v)).collect())
            .collect();
        SparseMatrix { p: m.p(), rows: m.rows(), cols: m.cols(), entries }
    }

    pub fn to_dense(&self) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.p, self.rows, self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            for &(j, v) in row {
                m.add_at(i, j as usize, v);
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        let mut r = RowReducer::new(self.p, self.cols);
        let full = self.rows.min(self.cols);
        for row in &self.entries {
            if row.is_empty() {
                continue;
            }
            let e: Vec<(usize, u8)> = row.iter().map(|&(j, v)| (j as usize, v)).collect();
            r.insert_sparse(&e);
            if r.rank() == full {
                break;
            }
        }
        r.rank()
    }

    /// Whether `self · other` vanishes.
    pub fn product_is_zero(&self, other: &SparseMatrix) -> bool {
        let p = self.p;
        let mut acc = vec![0u8; other.cols];
        for row in &self.entries {
            acc.iter_mut().for_each(|x| *x = 0);
            for &(k, a) in row {
                for &(j, b) in &other.entries[k as usize] {
                    acc[j as usize] = add_mod(acc[j as usize], mul_mod(a, b, p), p);
                }
            }
            if acc.iter().any(|&x| x != 0) {
                return false;
            }
        }
        true
    }
}

/// Terms `C^0, C^1, …` with `d^n: C^n → C^{n+1}` as `dim C^{n+1} × dim C^n`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub p: u32,
    pub dims: Vec<usize>,
    pub differentials: Vec<SparseMatrix>,
}

impl CochainComplex {
    /// Whether `d^{n+1} d^n = 0` for every stored pair.
    pub fn check_d_squared(&self) -> bool {
        self.differentials.windows(2).all(|w| w[1].product_is_zero(&w[0]))
    }

    /// `dim H^n` for every `n` with `d^n` stored.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.differentials.iter().map(SparseMatrix::rank).collect();
        (0..self.differentials.len()).map(|n| self.dims[n] - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 }).collect()
    }
}

/// Which pipeline computed a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Cobar,
    Resolution,
    Auto,
}

#[derive(Clone, Debug)]
pub struct LimitCaps {
    pub cobar_max_degree: usize,
    /// Largest cochain space the cobar pipeline may build.
    pub cobar_max_columns: usize,
    /// Largest total dimension of one term of a resolution.
    pub resolution_max_dim: usize,
}

impl Default for LimitCaps {
    fn default() -> Self {
        LimitCaps { cobar_max_degree: 5, cobar_max_columns: 20_000, resolution_max_dim: 200_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitTable {
    /// `dims[n]` for `n = 0..=n_max`.
    pub dims: Vec<usize>,
    pub engine: Engine,
}

impl LimitTable {
    pub fn vanishes_above_zero(&self) -> bool {
        self.dims.iter().skip(1).all(|&d| d == 0)
    }
}

/// Chains of `k` composable non-identity morphisms, `φ_1` first.
struct Chains {
    by_len: Vec<Vec<Vec<u32>>>,
    index: Vec<HashMap<Vec<u32>, usize>>,
    /// Column offset of each chain inside `C^k`.
    offsets: Vec<Vec<usize>>,
    dims: Vec<usize>,
}

/// Sizes of `C^k` for `k = 0..=top`, without building the chains.
pub fn cobar_term_sizes(m: &FunctorModule, top: usize) -> Vec<usize> {
    let cat = m.category();
    let n = cat.object_count();
    let mut count = vec![1u128; n];
    let mut sizes = Vec::with_capacity(top + 1);
    for k in 0..=top {
        if k > 0 {
            let mut next = vec![0u128; n];
            for (x, slot) in next.iter_mut().enumerate() {
                *slot = cat
                    .out_of(x)
                    .filter(|&g| !cat.is_identity(g))
                    .map(|g| count[cat.morphism(g).target])
                    .sum();
            }
            count = next;
        }
        let size: u128 = (0..n).map(|x| count[x] * m.dim(x) as u128).sum();
        sizes.push(size.min(usize::MAX as u128) as usize);
    }
    sizes
}

fn build_chains(m: &FunctorModule, top: usize) -> Chains {
    let cat = m.category();
    let n = cat.object_count();
    let mut by_len: Vec<Vec<Vec<u32>>> = vec![(0..n as u32).map(|x| vec![x]).collect()];
    for k in 1..=top {
        let prev = &by_len[k - 1];
        let mut next = Vec::new();
        // prepend φ_1 to chains starting at its target
        let mut starting_at: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, c) in prev.iter().enumerate() {
            let s = if k == 1 { c[0] as usize } else { cat.morphism(c[0] as usize).source };
            starting_at[s].push(i);
        }
        for g in 0..cat.morphism_count() {
            if cat.is_identity(g) {
                continue;
            }
            let t = cat.morphism(g).target;
            for &i in &starting_at[t] {
                let mut c = vec![g as u32];
                if k > 1 {
                    c.extend_from_slice(&prev[i]);
                }
                next.push(c);
            }
        }
        next.sort();
        by_len.push(next);
    }
    let mut index = Vec::new();
    let mut offsets = Vec::new();
    let mut dims = Vec::new();
    for (k, list) in by_len.iter().enumerate() {
        let mut off = Vec::with_capacity(list.len());
        let mut total = 0;
        let mut idx = HashMap::with_capacity(list.len());
        for (i, c) in list.iter().enumerate() {
            off.push(total);
            let src = if k == 0 { c[0] as usize } else { cat.morphism(c[0] as usize).source };
            total += m.dim(src);
            idx.insert(c.clone(), i);
        }
        index.push(idx);
        offsets.push(off);
        dims.push(total);
    }
    Chains { by_len, index, offsets, dims }
}

/// The normalized cobar complex `C^0 … C^{n_max+1}` of `m`.
pub fn cobar_complex(m: &FunctorModule, n_max: usize, caps: &LimitCaps) -> Result<CochainComplex, HomalgError> {
    if n_max > caps.cobar_max_degree {
        return Err(HomalgError::DegreeCap { order: 0, degree: n_max, cap: caps.cobar_max_degree });
    }
    let sizes = cobar_term_sizes(m, n_max + 1);
    if let Some(&big) = sizes.iter().find(|&&s| s > caps.cobar_max_columns) {
        return Err(HomalgError::DimensionCap { what: "cobar cochains".into(), size: big, cap: caps.cobar_max_columns });
    }
    let cat = m.category();
    let p = m.p();
    let chains = build_chains(m, n_max + 1);
    let mut differentials = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let rows_total = chains.dims[n + 1];
        let mut entries: Vec<Vec<(u32, u8)>> = Vec::with_capacity(rows_total);
        for sigma in &chains.by_len[n + 1] {
            let p0 = cat.morphism(sigma[0] as usize).source;
            let d0 = m.dim(p0);
            let mut block: Vec<HashMap<u32, u8>> = vec![HashMap::new(); d0];
            let mut add = |b: usize, col: usize, v: u8| {
                if v != 0 {
                    let e = block[b].entry(col as u32).or_insert(0);
                    *e = add_mod(*e, v, p);
                }
            };
            // M(φ_1) c(φ_2, …)
            let phi1 = sigma[0] as usize;
            let tail: Vec<u32> = if n == 0 { vec![cat.morphism(phi1).target as u32] } else { sigma[1..].to_vec() };
            let t_off = chains.offsets[n][chains.index[n][&tail]];
            let act = m.action(phi1);
            for b in 0..d0 {
                for k in 0..act.cols() {
                    add(b, t_off + k, act.get(b, k));
                }
            }
            // composite faces
            for i in 1..=n {
                let g = sigma[i] as usize;
                let f = sigma[i - 1] as usize;
                let c = cat.compose(g, f).expect("chain is composable");
                if cat.is_identity(c) {
                    continue;
                }
                let mut face: Vec<u32> = Vec::with_capacity(n);
                face.extend_from_slice(&sigma[..i - 1]);
                face.push(c as u32);
                face.extend_from_slice(&sigma[i + 1..]);
                let off = chains.offsets[n][chains.index[n][&face]];
                let sign = if i % 2 == 1 { neg_mod(1, p) } else { 1 };
                for b in 0..d0 {
                    add(b, off + b, sign);
                }
            }
            // last face
            let last: Vec<u32> = if n == 0 { vec![p0 as u32] } else { sigma[..n].to_vec() };
            let off = chains.offsets[n][chains.index[n][&last]];
            let sign = if (n + 1) % 2 == 1 { neg_mod(1, p) } else { 1 };
            for b in 0..d0 {
                add(b, off + b, sign);
            }
            for row in block {
                let mut r: Vec<(u32, u8)> = row.into_iter().filter(|&(_, v)| v != 0).collect();
                r.sort_unstable();
                entries.push(r);
            }
        }
        differentials.push(SparseMatrix { p, rows: rows_total, cols: chains.dims[n], entries });
    }
    Ok(CochainComplex { p, dims: chains.dims[..=n_max + 1].to_vec(), differentials })
}

/// A projective resolution `… → F_1 → F_0 → A` by sums of representables.
pub struct Resolution {
    /// Generator objects of each `F_k`.
    pub generators: Vec<Vec<usize>>,
    /// `images[k][j]`: image of generator `j` of `F_{k+1}` in `F_k(y_j)`.
    pub images: Vec<Vec<Vec<u8>>>,
    /// Images of the generators of `F_0` in `A`.
    pub augmentation: Vec<Vec<u8>>,
}

struct HomIndex {
    /// position of each morphism in its hom list
    position: Vec<usize>,
}

impl HomIndex {
    fn new(cat: &OrbitCategory) -> Self {
        let mut position = vec![0usize; cat.morphism_count()];
        for s in 0..cat.object_count() {
            for t in 0..cat.object_count() {
                for (i, &m) in cat.hom(s, t).iter().enumerate() {
                    position[m] = i;
                }
            }
        }
        HomIndex { position }
    }
}

/// Offsets of the summands of `⊕ F_p[Hom(P, x_i)]`.
fn free_offsets(cat: &OrbitCategory, gens: &[usize], object: usize) -> (Vec<usize>, usize) {
    let mut off = Vec::with_capacity(gens.len());
    let mut total = 0;
    for &x in gens {
        off.push(total);
        total += cat.hom(object, x).len();
    }
    (off, total)
}

/// `F(g)(v)` for `g: P' → P` and `v ∈ F(P)` of a free module.
fn free_apply(cat: &OrbitCategory, hi: &HomIndex, gens: &[usize], g: usize, v: &[u8]) -> Vec<u8> {
    let mor = cat.morphism(g);
    let (off_src, total_src) = free_offsets(cat, gens, mor.source);
    let (off_dst, _) = free_offsets(cat, gens, mor.target);
    let mut out = vec![0u8; total_src];
    for (i, &x) in gens.iter().enumerate() {
        for (k, &h) in cat.hom(mor.target, x).iter().enumerate() {
            let c = v[off_dst[i] + k];
            if c != 0 {
                let hg = cat.compose(h, g).unwrap();
                out[off_src[i] + hi.position[hg]] = c;
            }
        }
    }
    out
}

/// Objects from largest subgroup to smallest.
fn objects_descending(cat: &OrbitCategory) -> Vec<usize> {
    let u = cat.universe();
    let mut order: Vec<usize> = (0..cat.object_count()).collect();
    order.sort_by_key(|&x| (std::cmp::Reverse(u.order(cat.objects()[x])), std::cmp::Reverse(x)));
    order
}

/// Greedy generators of a functor given objectwise by subspaces, with the
/// action supplied as a closure `act(g, v)`.
fn choose_generators(
    cat: &OrbitCategory,
    p: u32,
    dims: &[usize],
    bases: &[Vec<Vec<u8>>],
    act: &dyn Fn(usize, &[u8]) -> Vec<u8>,
) -> Vec<(usize, Vec<u8>)> {
    let mut gens: Vec<(usize, Vec<u8>)> = Vec::new();
    for x in objects_descending(cat) {
        let mut span = RowReducer::new(p, dims[x]);
        let target = bases[x].len();
        for (z, a) in &gens {
            for &g in cat.hom(x, *z) {
                span.insert(act(g, a));
            }
        }
        for b in &bases[x] {
            if span.rank() == target {
                break;
            }
            if span.contains(b) {
                continue;
            }
            gens.push((x, b.clone()));
            for &g in cat.hom(x, x) {
                span.insert(act(g, b));
            }
        }
    }
    gens
}

impl Resolution {
    pub fn build(a: &FunctorModule, length: usize, caps: &LimitCaps) -> Result<Resolution, HomalgError> {
        let cat = a.category().clone();
        let p = a.p();
        let n = cat.object_count();
        let hi = HomIndex::new(&cat);
        let std_basis = |d: usize| -> Vec<Vec<u8>> {
            (0..d)
                .map(|i| {
                    let mut e = vec![0u8; d];
                    e[i] = 1;
                    e
                })
                .collect()
        };
        let a_bases: Vec<Vec<Vec<u8>>> = (0..n).map(|x| std_basis(a.dim(x))).collect();
        let gens0 = choose_generators(&cat, p, a.dims(), &a_bases, &|g, v| a.action(g).apply(v));
        let mut generators = vec![gens0.iter().map(|(x, _)| *x).collect::<Vec<_>>()];
        let augmentation: Vec<Vec<u8>> = gens0.into_iter().map(|(_, v)| v).collect();
        let mut images: Vec<Vec<Vec<u8>>> = Vec::new();
        for k in 0..length {
            let gens = generators[k].clone();
            // kernel of the map out of F_k at every object
            let mut kernel: Vec<Vec<Vec<u8>>> = Vec::with_capacity(n);
            let mut dims = Vec::with_capacity(n);
            for obj in 0..n {
                let (_, total) = free_offsets(&cat, &gens, obj);
                if total > caps.resolution_max_dim {
                    return Err(HomalgError::DimensionCap {
                        what: "resolution term".into(),
                        size: total,
                        cap: caps.resolution_max_dim,
                    });
                }
                dims.push(total);
                let mut columns = Vec::with_capacity(total);
                for (j, &y) in gens.iter().enumerate() {
                    for &g in cat.hom(obj, y) {
                        let col = if k == 0 {
                            a.action(g).apply(&augmentation[j])
                        } else {
                            free_apply(&cat, &hi, &generators[k - 1], g, &images[k - 1][j])
                        };
                        columns.push(col);
                    }
                }
                let rows = if k == 0 { a.dim(obj) } else { free_offsets(&cat, &generators[k - 1], obj).1 };
                let mat = FpMatrix::from_columns(p, rows, &columns)?;
                kernel.push(mat.kernel_basis());
            }
            let next = choose_generators(&cat, p, &dims, &kernel, &|g, v| free_apply(&cat, &hi, &gens, g, v));
            generators.push(next.iter().map(|(x, _)| *x).collect());
            images.push(next.into_iter().map(|(_, v)| v).collect());
        }
        Ok(Resolution { generators, images, augmentation })
    }

    /// `Nat(F_•, M)` as a cochain complex, via Yoneda.
    pub fn hom_complex(&self, cat: &OrbitCategory, m: &FunctorModule) -> Result<CochainComplex, HomalgError> {
        let p = m.p();
        let dims: Vec<usize> = self.generators.iter().map(|g| g.iter().map(|&x| m.dim(x)).sum()).collect();
        let mut differentials = Vec::new();
        for k in 0..self.images.len() {
            let src = &self.generators[k];
            let dst = &self.generators[k + 1];
            let mut col_off = Vec::with_capacity(src.len());
            let mut c = 0;
            for &x in src {
                col_off.push(c);
                c += m.dim(x);
            }
            let mut mat = FpMatrix::zeros(p, dims[k + 1], dims[k]);
            let mut r0 = 0;
            for (j, &y) in dst.iter().enumerate() {
                let (off, _) = free_offsets(cat, src, y);
                let e = &self.images[k][j];
                for (i, &x) in src.iter().enumerate() {
                    for (pos, &h) in cat.hom(y, x).iter().enumerate() {
                        let coeff = e[off[i] + pos];
                        if coeff != 0 {
                            mat.add_block(r0, col_off[i], m.action(h), coeff);
                        }
                    }
                }
                r0 += m.dim(y);
            }
            differentials.push(SparseMatrix::from_dense(&mat));
        }
        Ok(CochainComplex { p, dims, differentials })
    }
}

/// `dim Ext^n(A, M)` for `n = 0..=n_max`.
pub fn ext_groups(a: &FunctorModule, m: &FunctorModule, n_max: usize, caps: &LimitCaps) -> Result<Vec<usize>, HomalgError> {
    if !a.same_category(m) {
        return Err(HomalgError::Invariant("functors over different categories".into()));
    }
    let res = Resolution::build(a, n_max + 1, caps)?;
    let complex = res.hom_complex(a.category(), m)?;
    if !complex.check_d_squared() {
        return Err(HomalgError::Invariant("resolution hom complex has d² ≠ 0".into()));
    }
    Ok(complex.cohomology_dims())
}

/// `dim lim^n M` for `n = 0..=n_max`.
pub fn higher_limits(m: &FunctorModule, n_max: usize, engine: Engine, caps: &LimitCaps) -> Result<LimitTable, HomalgError> {
    let chosen = match engine {
        Engine::Auto => {
            let sizes = cobar_term_sizes(m, n_max + 1);
            if n_max <= caps.cobar_max_degree && sizes.iter().all(|&s| s <= caps.cobar_max_columns) {
                Engine::Cobar
            } else {
                Engine::Resolution
            }
        }
        e => e,
    };
    let dims = match chosen {
        Engine::Cobar => {
            let c = cobar_complex(m, n_max, caps)?;
            if !c.check_d_squared() {
                return Err(HomalgError::Invariant("cobar complex has d² ≠ 0".into()));
            }
            c.cohomology_dims()
        }
        _ => {
            let k = constant_functor(m.category(), m.p());
            ext_groups(&k, m, n_max, caps)?
        }
    };
    Ok(LimitTable { dims, engine: chosen })
}

/// Basis of `lim^0 M` inside `⊕_x M(x)`, from the kernel of `d^0`.
pub fn limit_zero_basis(m: &FunctorModule) -> Result<Vec<Vec<u8>>, HomalgError> {
    let cat = m.category();
    let p = m.p();
    let n = cat.object_count();
    let mut offsets = vec![0usize; n + 1];
    for x in 0..n {
        offsets[x + 1] = offsets[x] + m.dim(x);
    }
    let mut r = RowReducer::new(p, offsets[n]);
    for &g in cat.generators() {
        let mor = cat.morphism(g);
        let act = m.action(g);
        for b in 0..m.dim(mor.source) {
            let mut e: Vec<(usize, u8)> = (0..act.cols()).map(|k| (offsets[mor.target] + k, act.get(b, k))).collect();
            e.push((offsets[mor.source] + b, neg_mod(1, p)));
            r.insert_sparse(&e);
        }
    }
    Ok(r.null_space())
}

#[cfg(test)]
mod tests;
