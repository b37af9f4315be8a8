//! Mod-p cohomology of finite groups from normalized bar cochains.
//!
//! A j-cochain is a function on j-tuples of non-identity elements; it is
//! stored as a vector indexed by those tuples in mixed radix.  Each degree
//! keeps a fixed list of cocycle representatives, and classes are read off
//! by reducing modulo coboundaries.

use crate::group::TableGroup;

use super::linalg::{add_mod, neg_mod, Coordinates, FpMatrix, RowReducer};
use super::HomalgError;

/// Largest degree allowed for a group of at most the given order.
#[derive(Clone, Debug)]
pub struct CohomologyCaps {
    pub by_order: Vec<(usize, usize)>,
    /// Bound on the number of cochains the top differential acts on.
    pub max_columns: usize,
}

impl Default for CohomologyCaps {
    fn default() -> Self {
        CohomologyCaps { by_order: vec![(16, 4), (32, 3), (64, 2)], max_columns: 8192 }
    }
}

impl CohomologyCaps {
    pub fn check(&self, order: usize, degree: usize) -> Result<(), HomalgError> {
        let cap = self.by_order.iter().find(|(n, _)| order <= *n).map(|(_, j)| *j);
        match cap {
            Some(c) if degree <= c => {}
            _ => return Err(HomalgError::DegreeCap { order, degree, cap: cap.unwrap_or(0) }),
        }
        let cols = cochain_count(order, degree);
        if cols > self.max_columns {
            return Err(HomalgError::DimensionCap { what: format!("degree-{degree} bar cochains of a group of order {order}"), size: cols, cap: self.max_columns });
        }
        Ok(())
    }
}

pub fn cochain_count(order: usize, degree: usize) -> usize {
    (order - 1).saturating_pow(degree as u32)
}

/// Tuple of non-identity elements (positions `1..n`) to cochain index.
#[inline]
fn encode(t: &[usize], n: usize) -> usize {
    t.iter().fold(0, |acc, &g| acc * (n - 1) + (g - 1))
}

fn decode(mut idx: usize, len: usize, n: usize, out: &mut [usize]) {
    for k in (0..len).rev() {
        out[k] = idx % (n - 1) + 1;
        idx /= n - 1;
    }
}

/// Sparse row of the bar differential at the tuple `t` of length `j + 1`.
fn differential_row(g: &TableGroup, t: &[usize], p: u32, scratch: &mut Vec<usize>) -> Vec<(usize, u8)> {
    let n = g.order();
    let j = t.len() - 1;
    let mut out: Vec<(usize, u8)> = Vec::with_capacity(j + 2);
    out.push((encode(&t[1..], n), 1));
    for i in 1..=j {
        let prod = g.mul(t[i - 1], t[i]);
        if prod == 0 {
            continue;
        }
        scratch.clear();
        scratch.extend_from_slice(&t[..i - 1]);
        scratch.push(prod);
        scratch.extend_from_slice(&t[i + 1..]);
        let sign = if i % 2 == 1 { neg_mod(1, p) } else { 1 };
        out.push((encode(scratch, n), sign));
    }
    let sign = if (j + 1) % 2 == 1 { neg_mod(1, p) } else { 1 };
    out.push((encode(&t[..j], n), sign));
    out
}

fn accumulate(len: usize, entries: &[(usize, u8)], p: u32) -> Vec<u8> {
    let mut v = vec![0u8; len];
    for &(c, x) in entries {
        v[c] = add_mod(v[c], x, p);
    }
    v
}

/// `H^j(G; F_p)` with a fixed basis of cocycle representatives.
#[derive(Clone)]
pub struct GroupCohomology {
    p: u32,
    order: usize,
    degree: usize,
    reps: Vec<Vec<u8>>,
    coords: Coordinates,
}

impl GroupCohomology {
    pub fn compute(g: &TableGroup, p: u32, degree: usize, caps: &CohomologyCaps) -> Result<Self, HomalgError> {
        super::linalg::check_prime(p)?;
        let n = g.order();
        caps.check(n, degree)?;
        if n == 1 {
            let reps = if degree == 0 { vec![vec![1]] } else { Vec::new() };
            let width = if degree == 0 { 1 } else { 0 };
            let coords = Coordinates::new(p, width, &reps);
            return Ok(GroupCohomology { p, order: n, degree, reps, coords });
        }
        let cols = cochain_count(n, degree);
        // cocycles
        let mut red = RowReducer::new(p, cols);
        let mut t = vec![0usize; degree + 1];
        let mut scratch = Vec::new();
        for r in 0..cochain_count(n, degree + 1) {
            decode(r, degree + 1, n, &mut t);
            let row = differential_row(g, &t, p, &mut scratch);
            red.insert_sparse(&row);
        }
        let cocycles = red.null_space();
        // coboundaries: images of the basis of C^{j-1}
        let mut boundaries = Vec::new();
        if degree > 0 {
            let prev = cochain_count(n, degree - 1);
            let mut columns: Vec<Vec<(usize, u8)>> = vec![Vec::new(); prev];
            let mut s = vec![0usize; degree];
            for r in 0..cols {
                decode(r, degree, n, &mut s);
                for (c, x) in differential_row(g, &s, p, &mut scratch) {
                    columns[c].push((r, x));
                }
            }
            let mut bred = RowReducer::new(p, cols);
            for col in columns {
                let v = accumulate(cols, &col, p);
                if bred.insert(v.clone()) {
                    boundaries.push(v);
                }
            }
        }
        let mut span = RowReducer::new(p, cols);
        for b in &boundaries {
            span.insert(b.clone());
        }
        let mut reps = Vec::new();
        for z in cocycles {
            if span.insert(z.clone()) {
                reps.push(z);
            }
        }
        let coords = Coordinates::modulo(p, cols, &boundaries, &reps);
        Ok(GroupCohomology { p, order: n, degree, reps, coords })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group_order(&self) -> usize {
        self.order
    }

    pub fn representatives(&self) -> &[Vec<u8>] {
        &self.reps
    }

    /// Coordinates of the class of a cocycle, `None` if it is not one.
    pub fn class_of(&self, cocycle: &[u8]) -> Option<Vec<u8>> {
        self.coords.of(cocycle)
    }

    fn cochain_len(&self) -> usize {
        if self.order == 1 {
            usize::from(self.degree == 0)
        } else {
            cochain_count(self.order, self.degree)
        }
    }
}

/// Map `H^j(target) → H^j(source)` induced by an injective homomorphism
/// `source → target`, given as positions (`map[0] == 0`).
pub fn induced_cohomology_map(
    map: &[usize],
    target: &GroupCohomology,
    source: &GroupCohomology,
) -> Result<FpMatrix, HomalgError> {
    let p = source.p;
    let j = source.degree;
    let n = source.order;
    let m = target.order;
    if map.len() != n || target.degree != j {
        return Err(HomalgError::Invariant("induced map between mismatched cohomology data".into()));
    }
    let len = source.cochain_len();
    let mut columns = Vec::with_capacity(target.dim());
    let mut s = vec![0usize; j];
    let mut img = vec![0usize; j];
    for rep in &target.reps {
        let pulled: Vec<u8> = if n == 1 {
            if j == 0 { vec![rep[0]] } else { Vec::new() }
        } else if m == 1 {
            // only degree 0 survives
            vec![rep.first().copied().unwrap_or(0); len]
        } else {
            (0..len)
                .map(|r| {
                    decode(r, j, n, &mut s);
                    for k in 0..j {
                        img[k] = map[s[k]];
                    }
                    rep[encode(&img, m)]
                })
                .collect()
        };
        let c = source
            .class_of(&pulled)
            .ok_or_else(|| HomalgError::Invariant("pulled back cocycle is not a cocycle".into()))?;
        columns.push(c);
    }
    Ok(FpMatrix::from_columns(p, source.dim(), &columns)?)
}

/// Restriction to a subgroup given by its sorted positions in `g`.
pub fn restriction_map(
    h_positions: &[usize],
    coh_g: &GroupCohomology,
    coh_h: &GroupCohomology,
) -> Result<FpMatrix, HomalgError> {
    induced_cohomology_map(h_positions, coh_g, coh_h)
}

/// Cochain-level transfer `H^j(H) → H^j(G)` built from a right transversal.
pub fn transfer_map(
    g: &TableGroup,
    h_positions: &[usize],
    coh_g: &GroupCohomology,
    coh_h: &GroupCohomology,
) -> Result<FpMatrix, HomalgError> {
    let p = coh_g.p;
    let j = coh_g.degree;
    let n = g.order();
    let hn = h_positions.len();
    if coh_h.order != hn || coh_h.degree != j || coh_g.order != n {
        return Err(HomalgError::Invariant("transfer between mismatched cohomology data".into()));
    }
    let mut pos_in_h = vec![usize::MAX; n];
    for (k, &x) in h_positions.iter().enumerate() {
        pos_in_h[x] = k;
    }
    if pos_in_h[0] != 0 || !n.is_multiple_of(hn) {
        return Err(HomalgError::Invariant("transfer needs a subgroup".into()));
    }
    // right cosets H x, with a representative for each element
    let mut rep_of = vec![usize::MAX; n];
    let mut transversal = Vec::new();
    for x in 0..n {
        if rep_of[x] != usize::MAX {
            continue;
        }
        transversal.push(x);
        for &h in h_positions {
            rep_of[g.mul(h, x)] = x;
        }
    }
    let h_part = |x: usize| -> usize {
        let hx = g.mul(x, g.inv(rep_of[x]));
        pos_in_h[hx]
    };
    let tab_h = |a: usize, b: usize| -> usize {
        // a⁻¹ b inside H, via G
        pos_in_h[g.mul(g.inv(h_positions[a]), h_positions[b])]
    };
    let len = coh_g.cochain_len();
    let mut columns = Vec::with_capacity(coh_h.dim());
    let mut s = vec![0usize; j];
    let mut ys = vec![0usize; j + 1];
    let mut args = vec![0usize; j];
    for rep in &coh_h.reps {
        let mut out = vec![0u8; len];
        for (r, slot) in out.iter_mut().enumerate() {
            if j > 0 {
                decode(r, j, n, &mut s);
            }
            let mut acc = 0u8;
            for &t in &transversal {
                let mut x = t;
                ys[0] = h_part(x);
                for k in 0..j {
                    x = g.mul(x, s[k]);
                    ys[k + 1] = h_part(x);
                }
                let mut degenerate = false;
                for k in 0..j {
                    args[k] = tab_h(ys[k], ys[k + 1]);
                    degenerate |= args[k] == 0;
                }
                if degenerate {
                    continue;
                }
                let v = if j == 0 { rep[0] } else { rep[encode(&args, hn)] };
                acc = add_mod(acc, v, p);
            }
            *slot = acc;
        }
        let c = coh_g
            .class_of(&out)
            .ok_or_else(|| HomalgError::Invariant("transferred cochain is not a cocycle".into()))?;
        columns.push(c);
    }
    Ok(FpMatrix::from_columns(p, coh_g.dim(), &columns)?)
}
