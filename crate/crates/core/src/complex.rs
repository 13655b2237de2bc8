//! Local exploration of the square complex: canonical vertices, 2x2 squares
//! around type III vertices, galleries spelled by words, the oriented graph
//! on type I vertices, and square-level inequality checks.

use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;

use crate::error::{Error, Result};
use crate::poly::{Monomial, QPoly, QuadExt, Rational, Var};
use crate::ring::{QElem, Ring};
use crate::tame::{TameAut, Word};
use crate::valuation::{Valuation, Value};

/// A vertex of the complex in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    /// A component up to scalars; leading coefficient 1.
    I(QPoly),
    /// Span of two components; reduced row-echelon basis.
    II([QPoly; 2]),
    /// Span of the four components; reduced row-echelon basis.
    III([QPoly; 4]),
}

/// Reduced row-echelon form of the coefficient vectors of `rows`.
fn rref(rows: &[QPoly]) -> Vec<QPoly> {
    let monos: BTreeSet<Reverse<Monomial>> =
        rows.iter().flat_map(|r| r.terms().iter().map(|(m, _)| Reverse(*m))).collect();
    let cols: Vec<Monomial> = monos.into_iter().map(|r| r.0).collect();
    let mut mat: Vec<Vec<Rational>> = rows.iter().map(|r| cols.iter().map(|m| r.coeff(*m)).collect()).collect();
    let mut rank = 0;
    for c in 0..cols.len() {
        let Some(piv) = (rank..mat.len()).find(|&r| !mat[r][c].is_zero()) else {
            continue;
        };
        mat.swap(rank, piv);
        let inv = mat[rank][c].recip().expect("nonzero pivot");
        for x in mat[rank].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..mat.len() {
            if r != rank && !mat[r][c].is_zero() {
                let f = mat[r][c].clone();
                for k in 0..cols.len() {
                    let d = &mat[rank][k] * &f;
                    mat[r][k] -= &d;
                }
            }
        }
        rank += 1;
        if rank == mat.len() {
            break;
        }
    }
    mat.iter().take(rank).map(|row| QPoly::from_terms(cols.iter().copied().zip(row.iter().cloned()))).collect()
}

/// Edges of a 2x2 square as slot pairs; `x-t` and `y-z` are diagonals.
pub const SQUARE_EDGES: [(usize, usize); 4] = [(0, 1), (0, 2), (1, 3), (2, 3)];

fn is_edge(i: usize, j: usize) -> bool {
    let (a, b) = (i.min(j), i.max(j));
    SQUARE_EDGES.contains(&(a, b))
}

impl Vertex {
    /// `[f]`; scalar-normalised.
    pub fn type_i(f: &QElem) -> Vertex {
        let p = f.nf();
        match p.leading_term() {
            Some((_, c)) => Vertex::I(p.scale(&c.recip().expect("nonzero"))),
            None => Vertex::I(QPoly::zero()),
        }
    }

    /// `[f1, f2]` for two arbitrary classes; canonical span basis.
    pub fn type_ii(f1: &QElem, f2: &QElem) -> Vertex {
        let b = rref(&[f1.nf().clone(), f2.nf().clone()]);
        let mut it = b.into_iter();
        Vertex::II([it.next().unwrap_or_default(), it.next().unwrap_or_default()])
    }

    /// `[f_i, f_j]` for an automorphism; only square edges are admissible.
    pub fn type_ii_slots(f: &TameAut, i: Var, j: Var) -> Result<Vertex> {
        if i == j || !is_edge(i.index(), j.index()) {
            return Err(Error::InadmissiblePair);
        }
        Ok(Vertex::type_ii(f.component(i), f.component(j)))
    }

    /// `[f]` for an automorphism: the span of its components.
    pub fn type_iii(f: &TameAut) -> Vertex {
        let b = rref(&f.components().clone().map(QElem::into_nf));
        let mut it = b.into_iter();
        Vertex::III(core::array::from_fn(|_| it.next().unwrap_or_default()))
    }

    pub fn basis(&self) -> &[QPoly] {
        match self {
            Vertex::I(p) => core::slice::from_ref(p),
            Vertex::II(b) => b,
            Vertex::III(b) => b,
        }
    }

    pub fn kind(&self) -> u8 {
        match self {
            Vertex::I(_) => 1,
            Vertex::II(_) => 2,
            Vertex::III(_) => 3,
        }
    }

    /// Representative class of a type I vertex.
    pub fn rep(&self, ring: &Ring) -> QElem {
        ring.reduce(&self.basis()[0])
    }

    /// `g . v = [v o g^-1]`, for the automorphism `g` spelled by `w`.
    pub fn act(&self, w: &Word, ring: &Ring) -> Result<Vertex> {
        let ginv = w.inverse().evaluate(ring)?;
        self.act_by_inverse(&ginv, ring)
    }

    /// `[v o ginv]`.
    pub fn act_by_inverse(&self, ginv: &TameAut, ring: &Ring) -> Result<Vertex> {
        let moved: Vec<QElem> =
            self.basis().iter().map(|b| ring.substitute(b, ginv.components())).collect::<Result<_>>()?;
        Ok(match self {
            Vertex::I(_) => Vertex::type_i(&moved[0]),
            Vertex::II(_) => Vertex::type_ii(&moved[0], &moved[1]),
            Vertex::III(_) => {
                let b = rref(&moved.into_iter().map(QElem::into_nf).collect::<Vec<_>>());
                let mut it = b.into_iter();
                Vertex::III(core::array::from_fn(|_| it.next().unwrap_or_default()))
            }
        })
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, b) in self.basis().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The 2x2 square centred at `[h]`, with corners `[h_x], [h_y], [h_z], [h_t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigSquare {
    pub center: Vertex,
    pub corners: [Vertex; 4],
    pub components: [QElem; 4],
    /// Edges `x-y` and `z-t` are horizontal exactly when `eps = +1`.
    pub eps: i8,
}

impl BigSquare {
    pub fn of(h: &TameAut) -> BigSquare {
        BigSquare {
            center: Vertex::type_iii(h),
            corners: core::array::from_fn(|i| Vertex::type_i(&h.components()[i])),
            components: h.components().clone(),
            eps: h.eps(),
        }
    }

    /// Type II midpoint of the edge between slots `i` and `j`.
    pub fn midpoint(&self, i: usize, j: usize) -> Vertex {
        Vertex::type_ii(&self.components[i], &self.components[j])
    }

    /// Whether the edge between slots `i` and `j` is horizontal.
    pub fn is_horizontal(&self, i: usize, j: usize) -> bool {
        let xy_like = matches!((i.min(j), i.max(j)), (0, 1) | (2, 3));
        xy_like == (self.eps == 1)
    }

    pub fn slot_of(&self, v: &Vertex) -> Option<usize> {
        self.corners.iter().position(|c| c == v)
    }
}

/// How consecutive squares of a gallery meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Link {
    /// Same centre.
    Same,
    /// Share an edge; slots of the shared corners in the first square.
    Adjacent {
        shared: (usize, usize),
    },
    /// Share exactly one corner.
    Adherent {
        shared: usize,
    },
    Disjoint,
}

/// Squares centred at the prefix compositions `g_k o ... o g_1`, starting at
/// the standard square.
#[derive(Clone, Debug)]
pub struct Gallery {
    pub squares: Vec<BigSquare>,
    /// `links[k]` relates `squares[k]` and `squares[k + 1]`.
    pub links: Vec<Link>,
    pub word: Word,
}

fn link(a: &BigSquare, b: &BigSquare) -> Link {
    if a.center == b.center {
        return Link::Same;
    }
    let shared: Vec<usize> = (0..4).filter(|&i| b.slot_of(&a.corners[i]).is_some()).collect();
    match shared.as_slice() {
        [i] => Link::Adherent { shared: *i },
        [i, j] if is_edge(*i, *j) => {
            let (si, sj) = (b.slot_of(&a.corners[*i]).expect("shared"), b.slot_of(&a.corners[*j]).expect("shared"));
            if is_edge(si, sj) {
                Link::Adjacent { shared: (*i, *j) }
            } else {
                Link::Disjoint
            }
        }
        _ => Link::Disjoint,
    }
}

impl Gallery {
    pub fn from_word(w: &Word, ring: &Ring) -> Result<Gallery> {
        let mut h = TameAut::identity();
        let mut squares = alloc::vec![BigSquare::of(&h)];
        for l in w.letters().iter().rev() {
            h = h.compose_outer(&w.generator(l), ring)?;
            squares.push(BigSquare::of(&h));
        }
        let links = squares.windows(2).map(|p| link(&p[0], &p[1])).collect();
        Ok(Gallery { squares, links, word: w.clone() })
    }

    /// Every explored type I vertex, in first-seen order.
    pub fn type_i_vertices(&self) -> Vec<Vertex> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for s in &self.squares {
            for c in &s.corners {
                if seen.insert(c.clone()) {
                    out.push(c.clone());
                }
            }
        }
        out
    }
}

/// Kinds of edges in the oriented graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Side,
    Diagonal,
}

/// Strict minimum and maximum corner slots of a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareOrientation {
    pub values: [QuadExt; 4],
    pub min: Option<usize>,
    pub max: Option<usize>,
    /// `nu(x1) + nu(t1) = nu(y1) + nu(z1)`.
    pub sum_identity: bool,
}

fn strict_extreme(values: &[QuadExt; 4], want_min: bool) -> Option<usize> {
    let best = if want_min { values.iter().min() } else { values.iter().max() }?;
    let hits: Vec<usize> = (0..4).filter(|&i| &values[i] == best).collect();
    (hits.len() == 1).then(|| hits[0])
}

/// Orientation of a square under `nu`; every corner value must be negative.
pub fn orientation_report(s: &BigSquare, nu: &Valuation, ring: &Ring) -> Result<SquareOrientation> {
    let mut values: [QuadExt; 4] = Default::default();
    for (i, c) in s.components.iter().enumerate() {
        match nu.eval(c, ring)? {
            Value::Finite(v) if v.is_negative() => values[i] = v,
            _ => return Err(Error::NonNegativeCorner),
        }
    }
    let sum_identity = &values[0] + &values[3] == &values[1] + &values[2];
    Ok(SquareOrientation {
        min: strict_extreme(&values, true),
        max: strict_extreme(&values, false),
        values,
        sum_identity,
    })
}

/// Graph on explored type I vertices with side edges and min-max diagonals.
#[derive(Clone, Debug, Default)]
pub struct CnuGraph {
    nodes: Vec<Vertex>,
    values: Vec<Value>,
    index: BTreeMap<Vertex, usize>,
    edges: BTreeSet<(usize, usize, EdgeKind)>,
}

impl CnuGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_gallery(g: &Gallery, nu: &Valuation, ring: &Ring) -> Result<CnuGraph> {
        let mut out = CnuGraph::new();
        for s in &g.squares {
            out.add_square(s, nu, ring)?;
        }
        Ok(out)
    }

    fn node(&mut self, v: &Vertex, f: &QElem, nu: &Valuation, ring: &Ring) -> Result<usize> {
        if let Some(&i) = self.index.get(v) {
            return Ok(i);
        }
        let i = self.nodes.len();
        self.nodes.push(v.clone());
        self.values.push(nu.eval(f, ring)?);
        self.index.insert(v.clone(), i);
        Ok(i)
    }

    fn add_edge(&mut self, a: usize, b: usize, k: EdgeKind) {
        self.edges.insert((a.min(b), a.max(b), k));
    }

    /// Adds the corners and edges of one square.
    pub fn add_square(&mut self, s: &BigSquare, nu: &Valuation, ring: &Ring) -> Result<()> {
        let mut ids = [0; 4];
        for i in 0..4 {
            ids[i] = self.node(&s.corners[i], &s.components[i], nu, ring)?;
        }
        for (i, j) in SQUARE_EDGES {
            self.add_edge(ids[i], ids[j], EdgeKind::Side);
        }
        let vals: Vec<QuadExt> = ids.iter().filter_map(|&i| self.values[i].finite().cloned()).collect();
        if let Ok(vals) = <[QuadExt; 4]>::try_from(vals) {
            if let (Some(lo), Some(hi)) = (strict_extreme(&vals, true), strict_extreme(&vals, false)) {
                self.add_edge(ids[lo], ids[hi], EdgeKind::Diagonal);
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[Vertex] {
        &self.nodes
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn value_of(&self, v: &Vertex) -> Option<&Value> {
        self.index.get(v).map(|&i| &self.values[i])
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Vertex, &Vertex, EdgeKind)> {
        self.edges.iter().map(|(a, b, k)| (&self.nodes[*a], &self.nodes[*b], *k))
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.index.contains_key(v)
    }

    /// Breadth-first distance; `Ok(None)` when unreachable in the explored set.
    pub fn distance(&self, a: &Vertex, b: &Vertex) -> Result<Option<usize>> {
        let (&s, &t) = (self.index.get(a).ok_or(Error::VertexAbsent)?, self.index.get(b).ok_or(Error::VertexAbsent)?);
        let mut adj = alloc::vec![Vec::new(); self.nodes.len()];
        for (u, v, _) in &self.edges {
            adj[*u].push(*v);
            adj[*v].push(*u);
        }
        let mut dist = alloc::vec![usize::MAX; self.nodes.len()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                return Ok(Some(dist[u]));
            }
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        Ok(None)
    }

    /// Graphviz rendering.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph cnu {\n");
        for (i, (v, val)) in self.nodes.iter().zip(&self.values).enumerate() {
            s.push_str(&format!("  n{i} [label=\"{v}\\n{val}\"];\n"));
        }
        for (a, b, k) in &self.edges {
            let style = match k {
                EdgeKind::Side => "solid",
                EdgeKind::Diagonal => "dashed",
            };
            s.push_str(&format!("  n{a} -- n{b} [style={style}];\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Upper bound on the complex distance between two explored vertices, via
/// paths through explored squares: unit edges between corners, edge
/// midpoints and centres, and `sqrt 2` from corners to centres.
pub fn skeleton_distance_upper(g: &Gallery, a: &Vertex, b: &Vertex) -> Result<Option<QuadExt>> {
    let mut index: BTreeMap<Vertex, usize> = BTreeMap::new();
    let mut adj: Vec<Vec<(usize, QuadExt)>> = Vec::new();
    let mut id = |v: Vertex, adj: &mut Vec<Vec<(usize, QuadExt)>>| -> usize {
        *index.entry(v).or_insert_with(|| {
            adj.push(Vec::new());
            adj.len() - 1
        })
    };
    let one = QuadExt::from_int(1);
    let r2 = QuadExt::sqrt2();
    for s in &g.squares {
        let c = id(s.center.clone(), &mut adj);
        let k: Vec<usize> = s.corners.iter().map(|v| id(v.clone(), &mut adj)).collect();
        for &ki in &k {
            adj[c].push((ki, r2.clone()));
            adj[ki].push((c, r2.clone()));
        }
        for (i, j) in SQUARE_EDGES {
            let m = id(s.midpoint(i, j), &mut adj);
            for u in [c, k[i], k[j]] {
                adj[m].push((u, one.clone()));
                adj[u].push((m, one.clone()));
            }
        }
    }
    let (&s, &t) = (index.get(a).ok_or(Error::VertexAbsent)?, index.get(b).ok_or(Error::VertexAbsent)?);
    let mut dist: Vec<Option<QuadExt>> = alloc::vec![None; adj.len()];
    dist[s] = Some(QuadExt::zero());
    let mut heap = BinaryHeap::from([Reverse((QuadExt::zero(), s))]);
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u].as_ref().is_some_and(|best| *best < d) {
            continue;
        }
        if u == t {
            return Ok(Some(d));
        }
        for (v, w) in &adj[u] {
            let nd = &d + w;
            if dist[*v].as_ref().is_none_or(|old| nd < *old) {
                dist[*v] = Some(nd.clone());
                heap.push(Reverse((nd, *v)));
            }
        }
    }
    Ok(None)
}

/// Two adjacent moves at a type I vertex (`P` in `x, y`, `R` in `x, z`)
/// span a flat square exactly when one of them only involves `x`.
pub fn flatness_predicate(p: &QPoly, r: &QPoly) -> bool {
    p.partial(Var::Y).is_zero() || r.partial(Var::Z).is_zero()
}

/// Whether `c o f o c^-1` (with `f`, `c` spelled by `w`, `conjugator`) has the
/// shape `(a x, b (y + x P(x)), b^-1 (z + x S(x)), ...)` with `P, S` in `k[x]`.
pub fn a_subgroup_member(w: &Word, conjugator: &Word, ring: &Ring) -> Result<bool> {
    let conj = conjugator.concat(w).concat(&conjugator.inverse());
    let f = conj.evaluate(ring)?;
    let fx = f.component(Var::X).nf();
    let x = Monomial::var(Var::X);
    if !matches!(fx.terms(), [(m, _)] if *m == x) {
        return Err(Error::ConjugatorInvalid);
    }
    let shape = |p: &QPoly, lead: Var| -> Option<Rational> {
        let lead_m = Monomial::var(lead);
        let b = p.coeff(lead_m);
        if b.is_zero() {
            return None;
        }
        let ok = p.terms().iter().all(|(m, _)| *m == lead_m || (m.exp(Var::X) >= 1 && m.degree() == m.exp(Var::X)));
        ok.then_some(b)
    };
    let (Some(b), Some(binv)) = (shape(f.component(Var::Y).nf(), Var::Y), shape(f.component(Var::Z).nf(), Var::Z))
    else {
        return Ok(false);
    };
    Ok(&b * &binv == Rational::one())
}

/// Outcome of an individual check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// Hypotheses not met or not certifiable.
    Skipped,
    /// A one-sided check whose failure may be due to over-estimated distances.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct SquareCheck {
    pub index: usize,
    pub min: Option<usize>,
    pub max: Option<usize>,
    pub sum_identity: bool,
    /// A strict maximum exists exactly when a strict minimum does.
    pub duality: bool,
    pub outcome: Outcome,
}

#[derive(Clone, Debug)]
pub struct PairCheck {
    /// Index of the first square of the adjacent pair.
    pub index: usize,
    pub vertex: Vertex,
    pub outcome: Outcome,
}

#[derive(Clone, Debug)]
pub struct VertexBound {
    pub vertex: Vertex,
    pub value: Value,
    pub distance: Option<usize>,
    pub bound: Option<QuadExt>,
    pub outcome: Outcome,
}

#[derive(Clone, Debug)]
pub struct Section5Report {
    pub squares: Vec<SquareCheck>,
    pub propagation: Vec<PairCheck>,
    pub drops: Vec<PairCheck>,
    pub growth_bound: Vec<VertexBound>,
}

impl Section5Report {
    fn outcomes(&self) -> impl Iterator<Item = Outcome> + '_ {
        self.squares
            .iter()
            .map(|c| c.outcome)
            .chain(self.propagation.iter().map(|c| c.outcome))
            .chain(self.drops.iter().map(|c| c.outcome))
            .chain(self.growth_bound.iter().map(|c| c.outcome))
    }

    pub fn failures(&self) -> usize {
        self.outcomes().filter(|o| *o == Outcome::Fail).count()
    }

    pub fn inconclusive(&self) -> usize {
        self.outcomes().filter(|o| *o == Outcome::Inconclusive).count()
    }

    pub fn all_pass(&self) -> bool {
        self.failures() == 0 && self.inconclusive() == 0
    }
}

/// `max(nu(y)+nu(t), nu(z)+nu(t)) < nu(x) < min(nu(y), nu(z), nu(t))`.
pub fn weight_asymmetry(nu: &Valuation, ring: &Ring) -> Result<bool> {
    let v: Vec<Value> = Var::ALL.iter().map(|u| nu.eval(&QElem::var(*u), ring)).collect::<Result<_>>()?;
    let Some(v) = v.iter().map(Value::finite).collect::<Option<Vec<_>>>() else {
        return Ok(false);
    };
    let (x, y, z, t) = (v[0], v[1], v[2], v[3]);
    let upper = (y + t).max(z + t);
    Ok(upper < *x && x < y.min(z).min(t))
}

/// Checks along a gallery: corner identity and min/max duality per square,
/// propagation of the minimal corner across adjacencies, the 4/3 drop, and
/// the global growth bound in terms of the explored oriented distance to `[t]`.
pub fn verify_section5(g: &Gallery, nu: &Valuation, ring: &Ring) -> Result<Section5Report> {
    if !weight_asymmetry(nu, ring)? {
        return Err(Error::ConditionSevenViolated);
    }
    let mut orient = Vec::new();
    let mut squares = Vec::new();
    for (index, s) in g.squares.iter().enumerate() {
        match orientation_report(s, nu, ring) {
            Ok(o) => {
                let duality = o.min.is_some() == o.max.is_some();
                let ok = o.sum_identity && duality;
                squares.push(SquareCheck {
                    index,
                    min: o.min,
                    max: o.max,
                    sum_identity: o.sum_identity,
                    duality,
                    outcome: if ok { Outcome::Pass } else { Outcome::Fail },
                });
                orient.push(Some(o));
            }
            Err(Error::NonNegativeCorner) => {
                squares.push(SquareCheck {
                    index,
                    min: None,
                    max: None,
                    sum_identity: false,
                    duality: false,
                    outcome: Outcome::Skipped,
                });
                orient.push(None);
            }
            Err(e) => return Err(e),
        }
    }

    let mut propagation = Vec::new();
    let mut drops = Vec::new();
    let four_thirds = Rational::new(4, 3);
    for (k, l) in g.links.iter().enumerate() {
        let Link::Adjacent { shared: (i, j) } = l else { continue };
        let (s, s2) = (&g.squares[k], &g.squares[k + 1]);
        let (Some(o), Some(o2)) = (&orient[k], &orient[k + 1]) else { continue };
        let Some(m) = o.min else { continue };
        if m != *i && m != *j {
            continue;
        }
        let other = if m == *i { *j } else { *i };
        let v1 = &s.corners[m];
        let m2 = s2.slot_of(v1).expect("shared corner");
        let new_slots: Vec<usize> = (0..4).filter(|&c| s.slot_of(&s2.corners[c]).is_none()).collect();
        // New corner of S' joined to the minimal corner by a square edge.
        if let Some(&vp) = new_slots.iter().find(|&&c| is_edge(c, m2)) {
            let outcome = if o2.min == Some(vp) { Outcome::Pass } else { Outcome::Fail };
            propagation.push(PairCheck { index: k, vertex: s2.corners[vp].clone(), outcome });
        }
        let critical = match nu.resonance(&s.components[m], &s.components[other], ring) {
            Ok(c) => Some(c.is_critically_resonant()),
            Err(Error::ConstantArgument) => None,
            Err(e) => return Err(e),
        };
        for &c in &new_slots {
            let outcome = match critical {
                Some(false) => {
                    let bound = o.values[other].scale(&four_thirds);
                    if o2.values[c] < bound {
                        Outcome::Pass
                    } else {
                        Outcome::Fail
                    }
                }
                _ => Outcome::Skipped,
            };
            drops.push(PairCheck { index: k, vertex: s2.corners[c].clone(), outcome });
        }
    }

    let graph = CnuGraph::from_gallery(g, nu, ring)?;
    let t = Vertex::type_i(&QElem::var(Var::T));
    let coords: Vec<QuadExt> = Var::ALL
        .iter()
        .map(|u| nu.eval(&QElem::var(*u), ring).map(|v| v.finite().cloned().expect("coordinates are nonconstant")))
        .collect::<Result<_>>()?;
    let top = coords.iter().max().cloned().expect("four coordinates");
    let mut growth_bound = Vec::new();
    for (v, value) in graph.nodes().iter().zip(graph.values()) {
        let distance = graph.distance(&t, v)?;
        let (bound, outcome) = match (distance, value.finite()) {
            (Some(d), Some(val)) => {
                let b = top.scale(&four_thirds.powi(d as i32 - 1));
                let o = if *val <= b { Outcome::Pass } else { Outcome::Inconclusive };
                (Some(b), o)
            }
            _ => (None, Outcome::Skipped),
        };
        growth_bound.push(VertexBound { vertex: v.clone(), value: value.clone(), distance, bound, outcome });
    }
    Ok(Section5Report { squares, propagation, drops, growth_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tame::{Generator, Letter};

    fn e(s: &str) -> QElem {
        Ring::default().parse(s).unwrap()
    }

    fn q(s: &str) -> QuadExt {
        s.parse().unwrap()
    }

    fn asymmetric() -> Valuation {
        Valuation::from_parts(Default::default(), ["-1", "-4/5", "-3/4", "-11/20"].map(q)).unwrap()
    }

    fn word(entries: &[(&str, Generator)], letters: &[&str]) -> Word {
        let t = entries.iter().map(|(n, g)| (String::from(*n), g.clone())).collect();
        Word::new(t, letters.iter().map(|s| Letter::parse(s)).collect()).unwrap()
    }

    fn ev(p: &str) -> Generator {
        Generator::ev(Rational::one(), Rational::one(), p.parse().unwrap()).unwrap()
    }

    fn eh(p: &str) -> Generator {
        Generator::eh(Rational::one(), Rational::one(), p.parse().unwrap()).unwrap()
    }

    #[test]
    fn canonical_vertices() {
        assert_eq!(Vertex::type_i(&e("x")), Vertex::type_i(&e("2*x")));
        assert_eq!(Vertex::type_ii(&e("x"), &e("y")), Vertex::type_ii(&e("x + y"), &e("y")));
        let ring = Ring::default();
        let s = word(&[("s", Generator::sigma())], &["s"]).evaluate(&ring).unwrap();
        assert_eq!(Vertex::type_iii(&TameAut::identity()), Vertex::type_iii(&s));
        let v = Vertex::type_ii(&e("3*x + y"), &e("x - y"));
        assert_eq!(Vertex::type_ii(&e("x"), &e("y")), v);
        let id = TameAut::identity();
        assert_eq!(Vertex::type_ii_slots(&id, Var::Y, Var::Z), Err(Error::InadmissiblePair));
        assert_eq!(Vertex::type_ii_slots(&id, Var::X, Var::T), Err(Error::InadmissiblePair));
        assert!(Vertex::type_ii_slots(&id, Var::Z, Var::T).is_ok());
    }

    #[test]
    fn action_examples() {
        let ring = Ring::default();
        let x = Vertex::type_i(&e("x"));
        assert_eq!(x.act(&Word::identity(), &ring).unwrap(), x);
        let w = word(&[("e", ev("x*y + y^2"))], &["e"]);
        assert_eq!(x.act(&w, &ring).unwrap(), x);
        let y = Vertex::type_i(&e("y"));
        assert_eq!(y.act(&w, &ring).unwrap(), y);
        let s = word(&[("s", Generator::sigma())], &["s"]);
        assert_eq!(y.act(&s, &ring).unwrap(), Vertex::type_i(&e("z")));
        // A nontrivial elementary map moves [z].
        assert_ne!(Vertex::type_i(&e("z")).act(&w, &ring).unwrap(), Vertex::type_i(&e("z")));
    }

    #[test]
    fn action_is_a_group_action() {
        let ring = Ring::default();
        let t = [("e", ev("y^2")), ("h", eh("x*z")), ("s", Generator::sigma())];
        let u = word(&t, &["e", "s"]);
        let v = word(&t, &["h'", "e"]);
        for vert in
            [Vertex::type_i(&e("z + x*y")), Vertex::type_ii(&e("x"), &e("z")), Vertex::type_iii(&TameAut::identity())]
        {
            let lhs = vert.act(&u.concat(&v), &ring).unwrap();
            let rhs = vert.act(&v, &ring).unwrap().act(&u, &ring).unwrap();
            assert_eq!(lhs, rhs);
            assert_eq!(lhs.kind(), vert.kind());
        }
    }

    #[test]
    fn galleries() {
        let ring = Ring::default();
        let g = Gallery::from_word(&Word::identity(), &ring).unwrap();
        assert_eq!(g.squares.len(), 1);
        assert_eq!(g.squares[0].corners[3], Vertex::type_i(&e("t")));
        let g = Gallery::from_word(&word(&[("e", ev("x"))], &["e"]), &ring).unwrap();
        assert_eq!(g.links, [Link::Adjacent { shared: (0, 1) }]);
        let g = Gallery::from_word(
            &word(&[("e", ev("y^2")), ("s", Generator::sigma()), ("f", ev("x*y"))], &["e", "s", "f"]),
            &ring,
        )
        .unwrap();
        assert_eq!(g.squares.len(), 4);
        assert_eq!(g.links[1], Link::Same);
        assert!(matches!(g.links[0], Link::Adjacent { .. }));
        assert!(matches!(g.links[2], Link::Adjacent { .. }));
        assert!(g.squares[0].is_horizontal(0, 1));
        assert!(!g.squares[2].is_horizontal(0, 1));
    }

    #[test]
    fn cnu_graph_examples() {
        let ring = Ring::default();
        let g = Gallery::from_word(&Word::identity(), &ring).unwrap();
        let c = CnuGraph::from_gallery(&g, &asymmetric(), &ring).unwrap();
        let kinds: Vec<EdgeKind> = c.edges().map(|e| e.2).collect();
        assert_eq!(kinds.iter().filter(|k| **k == EdgeKind::Side).count(), 4);
        assert_eq!(kinds.iter().filter(|k| **k == EdgeKind::Diagonal).count(), 1);
        let (x, t) = (Vertex::type_i(&e("x")), Vertex::type_i(&e("t")));
        assert_eq!(c.distance(&t, &x).unwrap(), Some(1));
        assert_eq!(c.distance(&x, &x).unwrap(), Some(0));
        assert_eq!(c.distance(&x, &Vertex::type_i(&e("y")),).unwrap(), Some(1));
        assert_eq!(c.distance(&x, &Vertex::type_i(&e("x + y"))), Err(Error::VertexAbsent));
        let d = CnuGraph::from_gallery(&g, &Valuation::minus_degree(), &ring).unwrap();
        assert!(d.edges().all(|e| e.2 == EdgeKind::Side));
        assert_eq!(d.distance(&t, &x).unwrap(), Some(2));
        assert!(c.to_dot().contains("dashed"));
    }

    #[test]
    fn two_square_distances() {
        let ring = Ring::default();
        let g = Gallery::from_word(&word(&[("e", ev("x"))], &["e"]), &ring).unwrap();
        let c = CnuGraph::from_gallery(&g, &asymmetric(), &ring).unwrap();
        let far = g.squares[1].corners[3].clone();
        assert!(c.distance(&Vertex::type_i(&e("t")), &far).unwrap().unwrap() <= 2);
    }

    #[test]
    fn skeleton_distances() {
        let ring = Ring::default();
        let g = Gallery::from_word(&Word::identity(), &ring).unwrap();
        let (x, y, t) = (Vertex::type_i(&e("x")), Vertex::type_i(&e("y")), Vertex::type_i(&e("t")));
        assert_eq!(skeleton_distance_upper(&g, &x, &x).unwrap(), Some(QuadExt::zero()));
        assert_eq!(skeleton_distance_upper(&g, &x, &t).unwrap(), Some(q("2*r2")));
        assert_eq!(skeleton_distance_upper(&g, &x, &y).unwrap(), Some(q("2")));
        // Sandwich between the oriented distance and the complex distance,
        // exact inside the standard square.
        let c = CnuGraph::from_gallery(&g, &asymmetric(), &ring).unwrap();
        for (a, b) in [(&x, &t), (&x, &y), (&y, &t)] {
            let dc = skeleton_distance_upper(&g, a, b).unwrap().unwrap();
            let dn = QuadExt::from_int(c.distance(a, b).unwrap().unwrap() as i64);
            assert!(dc.scale(&Rational::new(1, 2)) <= &dn * &QuadExt::sqrt2());
            assert!(dn <= dc.scale(&Rational::from_int(3)));
        }
    }

    #[test]
    fn orientation_examples() {
        let ring = Ring::default();
        let s0 = BigSquare::of(&TameAut::identity());
        let o = orientation_report(&s0, &asymmetric(), &ring).unwrap();
        assert_eq!((o.min, o.max, o.sum_identity), (Some(0), Some(3), true));
        let o = orientation_report(&s0, &Valuation::minus_degree(), &ring).unwrap();
        assert_eq!((o.min, o.max), (None, None));
    }

    #[test]
    fn flatness_examples() {
        let p = |s: &str| s.parse::<QPoly>().unwrap();
        assert!(flatness_predicate(&p("x"), &p("z^2")));
        assert!(!flatness_predicate(&p("x*y"), &p("x*z")));
        assert!(flatness_predicate(&p("1"), &p("x*z^3 + z")));
    }

    #[test]
    fn a_subgroup_examples() {
        let ring = Ring::default();
        let d = word(&[("d", Generator::diag(Rational::from_int(2), Rational::new(-1, 3)).unwrap())], &["d"]);
        assert_eq!(a_subgroup_member(&d, &Word::identity(), &ring), Ok(true));
        assert_eq!(a_subgroup_member(&word(&[("e", ev("x"))], &["e"]), &Word::identity(), &ring), Ok(true));
        assert_eq!(a_subgroup_member(&word(&[("e", ev("y"))], &["e"]), &Word::identity(), &ring), Ok(false));
        // EH(P = x) conjugated by sigma becomes an EV move: still in the group.
        let w = word(&[("h", eh("x")), ("s", Generator::sigma())], &["h"]);
        let c = word(&[("h", eh("x")), ("s", Generator::sigma())], &["s"]);
        assert_eq!(a_subgroup_member(&w, &c, &ring), Ok(true));
        // Sending [x] elsewhere is rejected.
        let bad = word(&[("e", eh("z"))], &["e"]);
        let swap = word(&[("m", swap_xt())], &["m"]);
        assert_eq!(a_subgroup_member(&bad, &swap, &ring), Err(Error::ConjugatorInvalid));
    }

    /// `(t, y, z, x)`, an orthogonal map moving `[x]`.
    fn swap_xt() -> Generator {
        let mut m: [[Rational; 4]; 4] = Default::default();
        for (i, j) in [(0, 3), (1, 1), (2, 2), (3, 0)] {
            m[i][j] = Rational::one();
        }
        Generator::orth(m).unwrap()
    }

    #[test]
    fn square_check_examples() {
        let ring = Ring::default();
        let w = word(&[("e", ev("y^2")), ("s", Generator::sigma()), ("f", ev("x*y"))], &["e", "s", "f"]);
        let g = Gallery::from_word(&w, &ring).unwrap();
        let rep = verify_section5(&g, &asymmetric(), &ring).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
        assert!(!rep.propagation.is_empty());
        assert!(rep.drops.iter().any(|d| d.outcome == Outcome::Pass));
        let g0 = Gallery::from_word(&Word::identity(), &ring).unwrap();
        let rep = verify_section5(&g0, &asymmetric(), &ring).unwrap();
        assert!(rep.all_pass() && rep.propagation.is_empty());
        assert_eq!(verify_section5(&g0, &Valuation::minus_degree(), &ring).unwrap_err(), Error::ConditionSevenViolated);
    }
}
