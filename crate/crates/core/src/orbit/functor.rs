//! Contravariant functors `O → F_p-mod` and natural transformations.

use std::sync::Arc;

use serde::Serialize;

use crate::homalg::linalg::{neg_mod, Coordinates, FpMatrix, RowReducer, Subspace};

use super::{OrbitCategory, OrbitError};

/// `M(φ): M(Q) → M(P)` for `φ: P → Q`, stored as a `dim P × dim Q` matrix.
#[derive(Clone, Debug)]
pub struct FunctorModule {
    category: Arc<OrbitCategory>,
    p: u32,
    dims: Vec<usize>,
    action: Vec<FpMatrix>,
}

impl PartialEq for FunctorModule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.category, &other.category) && self.dims == other.dims && self.action == other.action
    }
}

impl FunctorModule {
    pub fn new(category: Arc<OrbitCategory>, p: u32, dims: Vec<usize>, action: Vec<FpMatrix>) -> Result<Self, OrbitError> {
        if dims.len() != category.object_count() || action.len() != category.morphism_count() {
            return Err(OrbitError::Shape("one dimension per object and one matrix per morphism expected".into()));
        }
        for (m, mat) in action.iter().enumerate() {
            let mor = category.morphism(m);
            if mat.rows() != dims[mor.source] || mat.cols() != dims[mor.target] || mat.p() != p {
                return Err(OrbitError::Shape(format!(
                    "matrix of morphism {m} is {}x{}, expected {}x{}",
                    mat.rows(),
                    mat.cols(),
                    dims[mor.source],
                    dims[mor.target]
                )));
            }
        }
        Ok(FunctorModule { category, p, dims, action })
    }

    pub fn zero(category: Arc<OrbitCategory>, p: u32) -> Self {
        let dims = vec![0; category.object_count()];
        let action = (0..category.morphism_count()).map(|_| FpMatrix::zeros(p, 0, 0)).collect();
        FunctorModule { category, p, dims, action }
    }

    pub fn category(&self) -> &Arc<OrbitCategory> {
        &self.category
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, object: usize) -> usize {
        self.dims[object]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn action(&self, morphism: usize) -> &FpMatrix {
        &self.action[morphism]
    }

    pub fn actions(&self) -> &[FpMatrix] {
        &self.action
    }

    /// Replace the category by the same one behind another handle.
    pub fn same_category(&self, other: &FunctorModule) -> bool {
        Arc::ptr_eq(&self.category, &other.category)
    }

    /// `M(id) = id` and `M(g∘f) = M(f)·M(g)` on every composable pair.
    pub fn check_functoriality(&self) -> Result<(), OrbitError> {
        let cat = &self.category;
        for x in 0..cat.object_count() {
            if !self.action[cat.identity(x)].is_identity() {
                return Err(OrbitError::NotFunctorial(format!("identity of object {x} acts nontrivially")));
            }
        }
        for f in 0..cat.morphism_count() {
            for g in cat.out_of(cat.morphism(f).target) {
                let gf = cat.compose(g, f).unwrap();
                let prod = self.action[f].mul(&self.action[g])?;
                if prod != self.action[gf] {
                    return Err(OrbitError::NotFunctorial(format!("composite of morphisms {g} and {f}")));
                }
            }
        }
        Ok(())
    }

    pub fn direct_sum(parts: &[&FunctorModule]) -> Result<FunctorModule, OrbitError> {
        let first = parts.first().ok_or_else(|| OrbitError::Shape("empty direct sum".into()))?;
        if parts.iter().any(|m| !m.same_category(first)) {
            return Err(OrbitError::CategoryMismatch);
        }
        let cat = first.category.clone();
        let p = first.p;
        let dims: Vec<usize> = (0..cat.object_count()).map(|x| parts.iter().map(|m| m.dims[x]).sum()).collect();
        let action = (0..cat.morphism_count())
            .map(|m| FpMatrix::block_diagonal(p, &parts.iter().map(|part| &part.action[m]).collect::<Vec<_>>()))
            .collect();
        FunctorModule::new(cat, p, dims, action)
    }

    /// Subfunctor spanned objectwise by independent vectors that the action
    /// preserves, with its inclusion.
    pub fn subfunctor(&self, bases: &[Vec<Vec<u8>>]) -> Result<(FunctorModule, NaturalTransformation), OrbitError> {
        let cat = &self.category;
        let coords: Vec<Coordinates> =
            (0..cat.object_count()).map(|x| Coordinates::new(self.p, self.dims[x], &bases[x])).collect();
        let mut action = Vec::with_capacity(cat.morphism_count());
        for m in 0..cat.morphism_count() {
            let mor = cat.morphism(m);
            let cols: Result<Vec<Vec<u8>>, OrbitError> = bases[mor.target]
                .iter()
                .map(|v| {
                    coords[mor.source]
                        .of(&self.action[m].apply(v))
                        .ok_or_else(|| OrbitError::NotFunctorial(format!("subspace not preserved by morphism {m}")))
                })
                .collect();
            action.push(FpMatrix::from_columns(self.p, bases[mor.source].len(), &cols?)?);
        }
        let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
        let sub = FunctorModule::new(cat.clone(), self.p, dims, action)?;
        let components = (0..cat.object_count())
            .map(|x| FpMatrix::from_columns(self.p, self.dims[x], &bases[x]))
            .collect::<Result<Vec<_>, _>>()?;
        let incl = NaturalTransformation { p: self.p, components };
        Ok((sub, incl))
    }

    /// Quotient by a subfunctor spanned objectwise by `bases`, with the
    /// projection.
    pub fn quotient(&self, bases: &[Vec<Vec<u8>>]) -> Result<(FunctorModule, NaturalTransformation), OrbitError> {
        let cat = &self.category;
        let n = cat.object_count();
        let mut complements = Vec::with_capacity(n);
        let mut coords = Vec::with_capacity(n);
        for x in 0..n {
            let mut r = RowReducer::new(self.p, self.dims[x]);
            for v in &bases[x] {
                r.insert(v.clone());
            }
            let mut comp = Vec::new();
            for i in 0..self.dims[x] {
                let mut e = vec![0u8; self.dims[x]];
                e[i] = 1;
                if r.insert(e.clone()) {
                    comp.push(e);
                }
            }
            coords.push(Coordinates::modulo(self.p, self.dims[x], &bases[x], &comp));
            complements.push(comp);
        }
        let mut action = Vec::with_capacity(cat.morphism_count());
        for m in 0..cat.morphism_count() {
            let mor = cat.morphism(m);
            let cols: Vec<Vec<u8>> = complements[mor.target]
                .iter()
                .map(|v| coords[mor.source].of(&self.action[m].apply(v)).expect("complement spans the quotient"))
                .collect();
            action.push(FpMatrix::from_columns(self.p, complements[mor.source].len(), &cols)?);
        }
        let dims: Vec<usize> = complements.iter().map(Vec::len).collect();
        let q = FunctorModule::new(cat.clone(), self.p, dims.clone(), action)?;
        let components = (0..n)
            .map(|x| {
                let cols: Vec<Vec<u8>> = (0..self.dims[x])
                    .map(|i| {
                        let mut e = vec![0u8; self.dims[x]];
                        e[i] = 1;
                        coords[x].of(&e).unwrap()
                    })
                    .collect();
                FpMatrix::from_columns(self.p, dims[x], &cols)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((q, NaturalTransformation { p: self.p, components }))
    }

    /// A copy with the object dimensions and matrices replaced verbatim;
    /// used to build deliberately broken inputs.
    pub fn with_raw_parts(&self, dims: Vec<usize>, action: Vec<FpMatrix>) -> Result<FunctorModule, OrbitError> {
        FunctorModule::new(self.category.clone(), self.p, dims, action)
    }

    pub fn dump(&self) -> FunctorDump {
        let cat = &self.category;
        let u = cat.universe();
        FunctorDump {
            p: self.p,
            objects: cat.objects().iter().map(|&s| u.subgroup(s).members().to_vec()).collect(),
            dims: self.dims.clone(),
            morphisms: cat
                .morphisms()
                .iter()
                .zip(&self.action)
                .map(|(m, a)| MorphismDump {
                    source: m.source,
                    target: m.target,
                    images: m.rep.images.to_vec(),
                    matrix: a.row_vectors(),
                })
                .collect(),
        }
    }
}

/// JSON shape of a functor: dense row-major matrices with entries mod p.
#[derive(Clone, Debug, Serialize)]
pub struct FunctorDump {
    pub p: u32,
    pub objects: Vec<Vec<u32>>,
    pub dims: Vec<usize>,
    pub morphisms: Vec<MorphismDump>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MorphismDump {
    pub source: usize,
    pub target: usize,
    pub images: Vec<u32>,
    pub matrix: Vec<Vec<u8>>,
}

/// Components `η_x: A(x) → B(x)`, as `dim B(x) × dim A(x)` matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalTransformation {
    pub p: u32,
    pub components: Vec<FpMatrix>,
}

impl NaturalTransformation {
    pub fn zero(a: &FunctorModule, b: &FunctorModule) -> Self {
        let components = (0..a.dims.len()).map(|x| FpMatrix::zeros(a.p, b.dims[x], a.dims[x])).collect();
        NaturalTransformation { p: a.p, components }
    }

    pub fn identity(a: &FunctorModule) -> Self {
        NaturalTransformation { p: a.p, components: a.dims.iter().map(|&d| FpMatrix::identity(a.p, d)).collect() }
    }

    pub fn component(&self, x: usize) -> &FpMatrix {
        &self.components[x]
    }

    /// Whether `B(φ)·η_Q = η_P·A(φ)` for every morphism `φ: P → Q`.
    pub fn is_natural(&self, a: &FunctorModule, b: &FunctorModule) -> Result<bool, OrbitError> {
        let cat = a.category();
        for (m, mor) in cat.morphisms().iter().enumerate() {
            let left = b.action(m).mul(&self.components[mor.target])?;
            let right = self.components[mor.source].mul(a.action(m))?;
            if left != right {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &NaturalTransformation) -> Result<NaturalTransformation, OrbitError> {
        let components =
            self.components.iter().zip(&other.components).map(|(a, b)| a.mul(b)).collect::<Result<Vec<_>, _>>()?;
        Ok(NaturalTransformation { p: self.p, components })
    }

    pub fn add(&self, other: &NaturalTransformation) -> Result<NaturalTransformation, OrbitError> {
        let components =
            self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect::<Result<Vec<_>, _>>()?;
        Ok(NaturalTransformation { p: self.p, components })
    }

    pub fn scale(&self, c: u8) -> NaturalTransformation {
        NaturalTransformation { p: self.p, components: self.components.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.components.iter().map(FpMatrix::rank).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(FpMatrix::is_zero)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.components.iter().all(|c| c.rows() == c.cols() && c.rank() == c.rows())
    }

    /// Flattened coordinates of all components, object by object and row
    /// by row.
    pub fn flatten(&self) -> Vec<u8> {
        self.components.iter().flat_map(|c| c.row_vectors().into_iter().flatten()).collect()
    }

    /// Kernel of `self: a → b` as a subfunctor of `a`.
    pub fn kernel(&self, a: &FunctorModule) -> Result<(FunctorModule, NaturalTransformation), OrbitError> {
        let bases: Vec<Vec<Vec<u8>>> = self.components.iter().map(FpMatrix::kernel_basis).collect();
        a.subfunctor(&bases)
    }

    /// Image of `self: a → b` as a subfunctor of `b`.
    pub fn image(&self, b: &FunctorModule) -> Result<(FunctorModule, NaturalTransformation), OrbitError> {
        b.subfunctor(&self.image_bases())
    }

    pub fn image_bases(&self) -> Vec<Vec<Vec<u8>>> {
        self.components
            .iter()
            .map(|c| {
                let mut s = Subspace::new(self.p, c.rows());
                for j in 0..c.cols() {
                    s.add(c.column(j));
                }
                s.basis().to_vec()
            })
            .collect()
    }

    /// Cokernel of `self: a → b` as a quotient of `b`.
    pub fn cokernel(&self, b: &FunctorModule) -> Result<(FunctorModule, NaturalTransformation), OrbitError> {
        b.quotient(&self.image_bases())
    }
}

/// Basis of `Nat(A, B)`, solved from the naturality equations on a
/// generating set of morphisms.
pub fn nat_space(a: &FunctorModule, b: &FunctorModule) -> Result<Vec<NaturalTransformation>, OrbitError> {
    if !a.same_category(b) || a.p != b.p {
        return Err(OrbitError::CategoryMismatch);
    }
    let p = a.p;
    let cat = a.category();
    let n = cat.object_count();
    let mut offsets = vec![0usize; n + 1];
    for x in 0..n {
        offsets[x + 1] = offsets[x] + a.dims[x] * b.dims[x];
    }
    let vars = offsets[n];
    let var = |x: usize, r: usize, c: usize| offsets[x] + r * a.dims[x] + c;
    let mut reducer = RowReducer::new(p, vars);
    for &m in cat.generators() {
        let mor = cat.morphism(m);
        let (s, t) = (mor.source, mor.target);
        let bm = b.action(m);
        let am = a.action(m);
        // (B(φ)·η_t − η_s·A(φ))[r][c] = 0
        for r in 0..b.dims[s] {
            for c in 0..a.dims[t] {
                let mut entries: Vec<(usize, u8)> = Vec::new();
                for k in 0..b.dims[t] {
                    let v = bm.get(r, k);
                    if v != 0 {
                        entries.push((var(t, k, c), v));
                    }
                }
                for k in 0..a.dims[s] {
                    let v = am.get(k, c);
                    if v != 0 {
                        entries.push((var(s, r, k), neg_mod(v, p)));
                    }
                }
                if !entries.is_empty() {
                    reducer.insert_sparse(&entries);
                }
            }
        }
    }
    let basis = reducer.null_space();
    Ok(basis
        .into_iter()
        .map(|v| {
            let components = (0..n)
                .map(|x| {
                    let mut mat = FpMatrix::zeros(p, b.dims[x], a.dims[x]);
                    for r in 0..b.dims[x] {
                        for c in 0..a.dims[x] {
                            mat.set(r, c, v[var(x, r, c)]);
                        }
                    }
                    mat
                })
                .collect();
            NaturalTransformation { p, components }
        })
        .collect())
}
