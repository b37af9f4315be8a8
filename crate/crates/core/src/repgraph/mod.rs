//! Bipartite graphs of `Rep_F(P, -)` classes for a triple `(F_1, F_2, F_e)`,
//! the two-term complex `f: CX_1 → CX_0` of induced constant functors, and
//! tree criteria for the kernel of `f`.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

use crate::fusion::{self, FusionError, FusionSystem, Morphism, RepSet, SubId, Triple, Universe};
use crate::homalg::linalg::{neg_mod, FpMatrix};
use crate::orbit::{
    constant_functor, induce_functor, FunctorModule, InducedFunctor, NaturalTransformation, OrbitCategory, OrbitError,
    SubgroupFamily,
};
use crate::verdict::ScenarioVerdict;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepGraphError {
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error("subgroup #{0} is not in the family")]
    NotInFamily(SubId),
    #[error("map does not land in the chosen subgroup")]
    BadMap,
    #[error("kernel dimension {kernel} differs from the graph's first Betti number {h1} at {subgroup}")]
    BettiMismatch { subgroup: String, kernel: usize, h1: usize },
}

/// Which member of the triple a class is taken modulo.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Member {
    F1,
    F2,
    Fe,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepClass {
    /// Smallest element map of the class.
    pub representative: Morphism,
    pub tag: Member,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepEdge {
    /// Index into the F_2-vertices.
    pub f2_end: usize,
    /// Index into the F_1-vertices.
    pub f1_end: usize,
}

/// `Rep_F(P, Λ)`: vertices `Rep_F(P, F_1) ⊔ Rep_F(P, F_2)`, edges
/// `Rep_F(P, F_e)`, the edge `[φ]_{F_e}` joining `[φ]_{F_2}` and `[φ]_{F_1}`.
#[derive(Clone, Debug)]
pub struct RepGraph {
    pub subgroup: SubId,
    pub f1: RepSet,
    pub f2: RepSet,
    pub fe: RepSet,
    pub edges: Vec<RepEdge>,
}

pub fn build_rep_graph(t: &Triple, p: SubId) -> Result<RepGraph, RepGraphError> {
    if !t.f.contains_subgroup(p) {
        return Err(FusionError::NotSubgroup(format!("#{p} is not in the base")).into());
    }
    let f1 = fusion::rep_set(&t.f, p, &t.f1);
    let f2 = fusion::rep_set(&t.f, p, &t.f2);
    let fe = fusion::rep_set(&t.f, p, &t.fe);
    let edges = fe
        .classes()
        .iter()
        .map(|phi| {
            let f2_end = f2.class_of(phi).ok_or(RepGraphError::BadMap)?;
            let f1_end = f1.class_of(phi).ok_or(RepGraphError::BadMap)?;
            Ok(RepEdge { f2_end, f1_end })
        })
        .collect::<Result<_, RepGraphError>>()?;
    Ok(RepGraph { subgroup: p, f1, f2, fe, edges })
}

impl RepGraph {
    pub fn vertex_count(&self) -> usize {
        self.f1.len() + self.f2.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertex numbering: F_1-vertices first, then F_2-vertices.
    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        let edge = &self.edges[e];
        (self.f1.len() + edge.f2_end, edge.f1_end)
    }

    pub fn components(&self) -> usize {
        let n = self.vertex_count();
        let mut uf = UnionFind::<usize>::new(n);
        let mut count = n;
        for e in 0..self.edges.len() {
            let (a, b) = self.edge_endpoints(e);
            if uf.union(a, b) {
                count -= 1;
            }
        }
        count
    }

    /// `|E| − |V| + components`.
    pub fn h1_dim(&self) -> usize {
        self.edge_count() + self.components() - self.vertex_count()
    }

    pub fn is_connected(&self) -> bool {
        self.components() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.h1_dim() == 0
    }

    pub fn classes(&self, tag: Member) -> Vec<RepClass> {
        let set = match tag {
            Member::F1 => &self.f1,
            Member::F2 => &self.f2,
            Member::Fe => &self.fe,
        };
        set.classes().iter().map(|m| RepClass { representative: m.clone(), tag }).collect()
    }

    pub fn dump(&self, u: &Universe) -> RepGraphDump {
        let label = |m: &Morphism| m.images.to_vec();
        RepGraphDump {
            subgroup: u.describe(self.subgroup),
            f1_vertices: self.f1.classes().iter().map(label).collect(),
            f2_vertices: self.f2.classes().iter().map(label).collect(),
            edges: self
                .fe
                .classes()
                .iter()
                .zip(&self.edges)
                .map(|(m, e)| EdgeDump { images: label(m), f2_end: e.f2_end, f1_end: e.f1_end })
                .collect(),
            components: self.components(),
            h1_dim: self.h1_dim(),
            is_tree: self.is_tree(),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph rep {\n");
        for (i, m) in self.f1.classes().iter().enumerate() {
            let _ = writeln!(s, "  a{i} [label=\"F1 {:?}\"];", &*m.images);
        }
        for (i, m) in self.f2.classes().iter().enumerate() {
            let _ = writeln!(s, "  b{i} [label=\"F2 {:?}\", shape=box];", &*m.images);
        }
        for e in &self.edges {
            let _ = writeln!(s, "  b{} -- a{};", e.f2_end, e.f1_end);
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RepGraphDump {
    pub subgroup: String,
    pub f1_vertices: Vec<Vec<u32>>,
    pub f2_vertices: Vec<Vec<u32>>,
    pub edges: Vec<EdgeDump>,
    pub components: usize,
    pub h1_dim: usize,
    pub is_tree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeDump {
    pub images: Vec<u32>,
    pub f2_end: usize,
    pub f1_end: usize,
}

/// Vertex and edge maps of a graph morphism, as index lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMap {
    pub f1: Vec<usize>,
    pub f2: Vec<usize>,
    pub edges: Vec<usize>,
}

impl GraphMap {
    pub fn identity(g: &RepGraph) -> GraphMap {
        GraphMap { f1: (0..g.f1.len()).collect(), f2: (0..g.f2.len()).collect(), edges: (0..g.edges.len()).collect() }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GraphMap) -> GraphMap {
        let through = |a: &[usize], b: &[usize]| a.iter().map(|&i| b[i]).collect();
        GraphMap { f1: through(&self.f1, &other.f1), f2: through(&self.f2, &other.f2), edges: through(&self.edges, &other.edges) }
    }

    /// Whether edge endpoints are carried to edge endpoints.
    pub fn respects_incidence(&self, from: &RepGraph, to: &RepGraph) -> bool {
        from.edges.iter().enumerate().all(|(e, edge)| {
            let image = &to.edges[self.edges[e]];
            image.f2_end == self.f2[edge.f2_end] && image.f1_end == self.f1[edge.f1_end]
        })
    }
}

/// For `φ: Q → P` in F, the map `Rep_F(P, Λ) → Rep_F(Q, Λ)`, `[ψ] ↦ [ψφ]`.
pub fn graph_map(t: &Triple, phi: &Morphism, from: &RepGraph, to: &RepGraph) -> Result<GraphMap, RepGraphError> {
    let u = t.f.universe();
    if phi.domain != to.subgroup || !u.leq(phi.image, from.subgroup) || !t.f.contains(phi) {
        return Err(RepGraphError::BadMap);
    }
    let map_set = |a: &RepSet, b: &RepSet| -> Result<Vec<usize>, RepGraphError> {
        a.classes().iter().map(|psi| b.class_of(&u.compose(psi, phi)).ok_or(RepGraphError::BadMap)).collect()
    };
    Ok(GraphMap { f1: map_set(&from.f1, &to.f1)?, f2: map_set(&from.f2, &to.f2)?, edges: map_set(&from.fe, &to.fe)? })
}

/// `f: CX_1 → CX_0` over `O^C(F)`, with `CX_0 = Ind(F_p over O^C(F_1)) ⊕
/// Ind(F_p over O^C(F_2))` and `CX_1 = Ind(F_p over O^C(F_e))`.
pub struct CxComplex {
    pub category: Arc<OrbitCategory>,
    pub cx1: InducedFunctor,
    pub cx0_f1: InducedFunctor,
    pub cx0_f2: InducedFunctor,
    pub cx0: FunctorModule,
    pub f: NaturalTransformation,
}

fn induced_constant(h: &Arc<FusionSystem>, family: &SubgroupFamily, cat: &Arc<OrbitCategory>) -> Result<InducedFunctor, OrbitError> {
    let sub = OrbitCategory::build(h.clone(), &family.restricted_to(h))?;
    induce_functor(&constant_functor(&sub, cat.p()), cat)
}

/// The family must be closed in F and contain the base of `F_2`.
pub fn build_cx_complex(t: &Triple, family: &SubgroupFamily) -> Result<CxComplex, RepGraphError> {
    if !family.contains(t.small_base()) {
        return Err(RepGraphError::NotInFamily(t.small_base()));
    }
    build_cx_complex_over(t, &OrbitCategory::build(t.f.clone(), family)?)
}

/// `f: CX_1 → CX_0` over an existing orbit category of `F`, so that the
/// result can be paired with other functors on the same category.
pub fn build_cx_complex_over(t: &Triple, category: &Arc<OrbitCategory>) -> Result<CxComplex, RepGraphError> {
    let family = category.family();
    if !family.contains(t.small_base()) {
        return Err(RepGraphError::NotInFamily(t.small_base()));
    }
    if !fusion::fusion_subsystem_eq(category.fusion(), &t.f) {
        return Err(FusionError::Inconsistent("category is not built over the join".into()).into());
    }
    let category = category.clone();
    let p = category.p();
    let cx1 = induced_constant(&t.fe, family, &category)?;
    let cx0_f1 = induced_constant(&t.f1, family, &category)?;
    let cx0_f2 = induced_constant(&t.f2, family, &category)?;
    let cx0 = FunctorModule::direct_sum(&[&cx0_f1.module, &cx0_f2.module])?;
    let minus_one = neg_mod(1, p);
    let mut components = Vec::with_capacity(category.object_count());
    for x in 0..category.object_count() {
        let p_sub = category.objects()[x];
        let rs1 = fusion::rep_set(&t.f, p_sub, &t.f1);
        let rs2 = fusion::rep_set(&t.f, p_sub, &t.f2);
        let block_index = |blocks: &[crate::orbit::InducedBlock], rs: &RepSet, m: &Morphism| {
            let class = rs.class_of(m)?;
            blocks.iter().position(|b| rs.class_of(&b.rep) == Some(class))
        };
        let split = cx0_f1.module.dim(x);
        let mut mat = FpMatrix::zeros(p, cx0.dim(x), cx1.module.dim(x));
        for (col, blk) in cx1.blocks[x].iter().enumerate() {
            let a = block_index(&cx0_f1.blocks[x], &rs1, &blk.rep).ok_or(RepGraphError::BadMap)?;
            let b = block_index(&cx0_f2.blocks[x], &rs2, &blk.rep).ok_or(RepGraphError::BadMap)?;
            mat.set(a, col, minus_one);
            mat.set(split + b, col, 1);
        }
        components.push(mat);
    }
    let f = NaturalTransformation { p, components };
    if !f.is_natural(&cx1.module, &cx0)? {
        return Err(OrbitError::NotFunctorial("f is not natural".into()).into());
    }
    Ok(CxComplex { category, cx1, cx0_f1, cx0_f2, cx0, f })
}

impl CxComplex {
    /// `ker f` with its inclusion into `CX_1`.
    pub fn kernel(&self) -> Result<(FunctorModule, NaturalTransformation), OrbitError> {
        self.f.kernel(&self.cx1.module)
    }

    /// `coker f` with its projection from `CX_0`.
    pub fn cokernel(&self) -> Result<(FunctorModule, NaturalTransformation), OrbitError> {
        self.f.cokernel(&self.cx0)
    }

    /// Whether `coker f` has dimension one everywhere with identity actions.
    pub fn cokernel_is_constant(&self) -> Result<bool, OrbitError> {
        let (q, _) = self.cokernel()?;
        Ok(q.dims().iter().all(|&d| d == 1) && q.actions().iter().all(FpMatrix::is_identity))
    }
}

/// `C_{F,Λ} = ker f`, checked objectwise against the first Betti number of
/// the Rep graphs.
pub fn c_functor(t: &Triple, family: &SubgroupFamily) -> Result<FunctorModule, RepGraphError> {
    let cx = build_cx_complex(t, family)?;
    let (k, _) = cx.kernel()?;
    for (x, &p) in cx.category.objects().iter().enumerate() {
        let h1 = build_rep_graph(t, p)?.h1_dim();
        if k.dim(x) != h1 {
            return Err(RepGraphError::BettiMismatch { subgroup: t.f.universe().describe(p), kernel: k.dim(x), h1 });
        }
    }
    Ok(k)
}

/// Maps `Q → S'` lying in `h`, or nothing when `Q` is outside its base.
fn homs_into(h: &FusionSystem, q: SubId, target: SubId) -> Vec<Morphism> {
    if !h.contains_subgroup(q) {
        return Vec::new();
    }
    let u = h.universe();
    h.homs_to_base(q).iter().filter(|m| u.leq(m.image, target)).cloned().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TreeCondition {
    /// `Hom_F(P, S') = Hom_H(P, S')` for the named member.
    HomsMatch(Member),
    /// `Aut_F(P) = Aut_{F_2}(P)`, and `F_e`, `F_2` agree on the other
    /// F-conjugates.
    AutomorphismsMatch,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeCriteriaVerdict {
    pub subgroup: String,
    /// `Hom_{F_e}(Q,S') = Hom_{F_1}(Q,S') ∩ Hom_{F_2}(Q,S')` on the F-class.
    pub base_hypothesis: bool,
    /// Every condition that holds.
    pub conditions: Vec<TreeCondition>,
    pub is_tree: bool,
    pub h1_dim: usize,
}

impl TreeCriteriaVerdict {
    pub fn applicable(&self) -> bool {
        self.base_hypothesis && !self.conditions.is_empty()
    }

    /// The criteria predict a tree whenever they apply.
    pub fn consistent(&self) -> bool {
        !self.applicable() || self.is_tree
    }

    pub fn summary(&self) -> &'static str {
        match (self.base_hypothesis, self.conditions.first()) {
            (false, _) => "criteria inapplicable",
            (true, None) => "no condition holds",
            (true, Some(TreeCondition::HomsMatch(_))) => "homsets match",
            (true, Some(TreeCondition::AutomorphismsMatch)) => "automorphisms match",
        }
    }
}

pub fn tree_criteria_check(t: &Triple, p: SubId) -> Result<TreeCriteriaVerdict, RepGraphError> {
    let u = t.f.universe();
    let small = t.small_base();
    let graph = build_rep_graph(t, p)?;
    let class = t.f.conjugacy_class(p);
    let base_hypothesis = class.iter().all(|&q| {
        let in2: HashSet<Morphism> = homs_into(&t.f2, q, small).into_iter().collect();
        let meet: Vec<Morphism> = homs_into(&t.f1, q, small).into_iter().filter(|m| in2.contains(m)).collect();
        homs_into(&t.fe, q, small) == meet
    });
    let all = homs_into(&t.f, p, small);
    let mut conditions = Vec::new();
    if homs_into(&t.f1, p, small) == all {
        conditions.push(TreeCondition::HomsMatch(Member::F1));
    }
    if homs_into(&t.f2, p, small) == all {
        conditions.push(TreeCondition::HomsMatch(Member::F2));
    }
    let auts_match = t.f2.contains_subgroup(p) && t.f.aut(p) == t.f2.aut(p);
    let others = class
        .iter()
        .filter(|&&q| !(t.fe.contains_subgroup(q) && t.fe.contains_subgroup(p) && t.fe.are_conjugate(p, q)))
        .all(|&q| homs_into(&t.fe, q, small) == homs_into(&t.f2, q, small));
    if auts_match && others {
        conditions.push(TreeCondition::AutomorphismsMatch);
    }
    Ok(TreeCriteriaVerdict {
        subgroup: u.describe(p),
        base_hypothesis,
        conditions,
        is_tree: graph.is_tree(),
        h1_dim: graph.h1_dim(),
    })
}

/// Whether some F-conjugate of `q` is a proper subgroup of `p`.
pub fn conjugate_into_proper(f: &FusionSystem, q: SubId, p: SubId) -> bool {
    let u = f.universe();
    f.homs_to_base(q).iter().any(|m| u.lt(m.image, p))
}

/// For `H ⊆ F` saturated over `S` with `F = ⟨H, Aut_F(P)⟩` and `P` fully
/// normalized, the triple `(H, N_F(P), N_H(P))` has tree Rep graphs at
/// every `Q ∈ C` not F-conjugate into a proper subgroup of `P`, and a zero
/// kernel functor when `P` is minimal in `C`.
pub fn pruning_vanishing_check(
    f: &Arc<FusionSystem>,
    h: &Arc<FusionSystem>,
    p: SubId,
    family: &SubgroupFamily,
) -> Result<ScenarioVerdict, RepGraphError> {
    let mut v = ScenarioVerdict::new();
    let u = f.universe();
    v.require("same universe and base", **u == **h.universe() && f.base() == h.base(), None);
    if !v.hypotheses_hold() {
        return Ok(v);
    }
    v.require("H is a subsystem of F", fusion::fusion_subsystem_leq(h, f), None);
    v.require("family closed in F", family.is_certified(), None);
    v.require("P in the family", family.contains(p), Some(u.describe(p)));
    if !v.hypotheses_hold() {
        return Ok(v);
    }
    let fs = fusion::is_saturated(f);
    v.require("F saturated", fs.saturated, fs.witness.map(|w| format!("{w:?}")));
    let hs = fusion::is_saturated(h);
    v.require("H saturated", hs.saturated, hs.witness.map(|w| format!("{w:?}")));
    v.require("P fully F-normalized", f.is_fully_normalized(p), Some(u.describe(p)));
    let generated = fusion::join_with(h, &f.aut(p))?;
    v.require("F generated by H and Aut_F(P)", fusion::fusion_subsystem_eq(&generated, f), None);
    v.conclude(|details| {
        let nf = Arc::new(fusion::normalizer_subsystem(f, p)?);
        let nh = Arc::new(fusion::normalizer_subsystem(h, p)?);
        let t = Triple::with_join(h.clone(), nf, nh, f.clone())?;
        let mut ok = true;
        for &q in family.members() {
            if conjugate_into_proper(f, q, p) {
                continue;
            }
            let g = build_rep_graph(&t, q)?;
            if !g.is_tree() {
                details.push(format!("Rep graph at {} is not a tree (h1 = {})", u.describe(q), g.h1_dim()));
                ok = false;
            }
        }
        let minimal = family.members().iter().all(|&q| !u.lt(q, p));
        if minimal {
            let k = c_functor(&t, family)?;
            if !k.is_zero() {
                details.push(format!("kernel functor has dimensions {:?}", k.dims()));
                ok = false;
            }
        } else {
            details.push("P is not minimal in the family; kernel functor not asserted".into());
        }
        Ok::<bool, RepGraphError>(ok)
    })?;
    Ok(v)
}
