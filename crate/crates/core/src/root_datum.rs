//! Split root data, their finite Weyl groups and parabolic coset
//! decompositions.
//!
//! Characters and cocharacters are integer vectors in dual bases, so the
//! pairing is the dot product. Named Cartan types use the simple coroots
//! as the basis of the cocharacter lattice; `GL_n` uses the standard
//! diagonal torus with `X = Y = Z^n`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HeckeError, Result};

/// Default cap on Weyl group enumeration (the order of W(F_4)).
pub const DEFAULT_WEYL_CAP: usize = 10_080;

const ROOT_CAP: usize = 1_000;

pub type IntMatrix = Vec<Vec<i64>>;

/// A cocharacter, i.e. an element of X_*(T).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coweight(pub Vec<i64>);

impl Coweight {
    pub fn zero(rank: usize) -> Self {
        Coweight(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Coweight(v)
    }

    pub fn sup_norm(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Coweight {
        Coweight(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Root {
    /// Coordinates in X^*(T).
    pub weight: Vec<i64>,
    /// The associated coroot in X_*(T).
    pub coroot: Vec<i64>,
    /// Coefficients in the basis of simple roots.
    pub simple_coords: Vec<i64>,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        self.simple_coords.iter().all(|&c| c >= 0)
    }

    pub fn height(&self) -> i64 {
        self.simple_coords.iter().sum()
    }
}

/// JSON description of a datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DatumSpec {
    Named {
        #[serde(rename = "type")]
        kind: String,
        n: usize,
        #[serde(default)]
        central_rank: usize,
    },
    Cartan {
        cartan: IntMatrix,
        #[serde(default)]
        central_rank: usize,
    },
}

impl DatumSpec {
    /// Parses short names like `a2`, `b2`, `gl3`, `a1xa1`, or a JSON object.
    pub fn parse(s: &str) -> Result<DatumSpec> {
        let t = s.trim();
        if t.starts_with('{') {
            return serde_json::from_str(t).map_err(|e| HeckeError::Parse(format!("datum JSON: {e}")));
        }
        let lower = t.to_ascii_lowercase();
        if lower == "a1xa1" {
            return Ok(DatumSpec::Cartan { cartan: vec![vec![2, 0], vec![0, 2]], central_rank: 0 });
        }
        let split = lower.find(|c: char| c.is_ascii_digit()).ok_or_else(|| HeckeError::UnknownDatum(s.to_string()))?;
        let (kind, n) = lower.split_at(split);
        let n: usize = n.parse().map_err(|_| HeckeError::UnknownDatum(s.to_string()))?;
        Ok(DatumSpec::Named { kind: kind.trim_end_matches('_').to_ascii_uppercase(), n, central_rank: 0 })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RootDatum {
    pub name: String,
    pub rank: usize,
    pub roots: Vec<Root>,
    pub simple: Vec<usize>,
    /// Coordinates spanning a complement that the Weyl group fixes; grids
    /// over the apartment hold these at zero.
    pub central_coords: Vec<usize>,
    is_gl: bool,
    #[serde(skip)]
    coroot_index: HashMap<Vec<i64>, usize>,
}

pub fn cartan_matrix(kind: &str, n: usize) -> Result<IntMatrix> {
    let bad = || HeckeError::UnknownDatum(format!("{kind}_{n}"));
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let chain = |c: &mut IntMatrix, upto: usize| {
        for i in 0..upto.saturating_sub(1) {
            c[i][i + 1] = -1;
            c[i + 1][i] = -1;
        }
    };
    match kind {
        "A" if n >= 1 => chain(&mut c, n),
        "B" if n >= 2 => {
            chain(&mut c, n);
            c[n - 1][n - 2] = -2;
        }
        "C" if n >= 2 => {
            chain(&mut c, n);
            c[n - 2][n - 1] = -2;
        }
        "D" if n >= 3 => {
            chain(&mut c, n - 1);
            c[n - 1][n - 3] = -1;
            c[n - 3][n - 1] = -1;
        }
        "G" if n == 2 => {
            c[0][1] = -3;
            c[1][0] = -1;
        }
        _ => return Err(bad()),
    }
    Ok(c)
}

fn validate_cartan(c: &IntMatrix) -> Result<()> {
    let n = c.len();
    for (i, row) in c.iter().enumerate() {
        if row.len() != n {
            return Err(HeckeError::Parse(format!("Cartan matrix row {i} has length {}", row.len())));
        }
        for (j, &a) in row.iter().enumerate() {
            let err = |reason| Err(HeckeError::InvalidCartan { row: i, col: j, value: a, reason });
            if i == j {
                if a != 2 {
                    return err("diagonal entries must be 2");
                }
                continue;
            }
            if a > 0 {
                return err("off-diagonal entries must be non-positive");
            }
            if (a == 0) != (c[j][i] == 0) {
                return err("a_ij = 0 must match a_ji = 0");
            }
            if !(0..=3).contains(&(a * c[j][i])) {
                return err("a_ij * a_ji must lie in {0, 1, 2, 3} (crystallographic)");
            }
        }
    }
    Ok(())
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RootDatum {
    pub fn from_spec(spec: &DatumSpec) -> Result<RootDatum> {
        match spec {
            DatumSpec::Named { kind, n, central_rank } if kind == "GL" => {
                if *n == 0 {
                    return Err(HeckeError::UnknownDatum("GL_0".into()));
                }
                Self::general_linear(*n, *central_rank)
            }
            DatumSpec::Named { kind, n, central_rank } => {
                let c = cartan_matrix(kind, *n)?;
                Self::from_cartan(&format!("{kind}{n}"), &c, *central_rank)
            }
            DatumSpec::Cartan { cartan, central_rank } => Self::from_cartan("cartan", cartan, *central_rank),
        }
    }

    pub fn named(s: &str) -> Result<RootDatum> {
        Self::from_spec(&DatumSpec::parse(s)?)
    }

    /// Semisimple datum with cocharacter basis the simple coroots, plus a
    /// free central summand of rank `central_rank`.
    pub fn from_cartan(name: &str, cartan: &IntMatrix, central_rank: usize) -> Result<RootDatum> {
        validate_cartan(cartan)?;
        let n = cartan.len();
        let rank = n + central_rank;
        let simple_weights: Vec<Vec<i64>> = (0..n)
            .map(|j| {
                let mut v: Vec<i64> = (0..n).map(|i| cartan[i][j]).collect();
                v.resize(rank, 0);
                v
            })
            .collect();
        let simple_coroots: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; rank];
                v[i] = 1;
                v
            })
            .collect();
        let name = if central_rank > 0 { format!("{name}+T{central_rank}") } else { name.to_string() };
        Self::generate(name, rank, simple_weights, simple_coroots, (n..rank).collect(), false)
    }

    /// GL_n with the diagonal torus, optionally times an extra central torus.
    pub fn general_linear(n: usize, central_rank: usize) -> Result<RootDatum> {
        let rank = n + central_rank;
        let e = |i: usize, j: usize| {
            let mut v = vec![0; rank];
            v[i] = 1;
            v[j] = -1;
            v
        };
        let simple: Vec<Vec<i64>> = (0..n.saturating_sub(1)).map(|i| e(i, i + 1)).collect();
        let mut central = vec![n - 1];
        central.extend(n..rank);
        let name = if central_rank > 0 { format!("GL{n}+T{central_rank}") } else { format!("GL{n}") };
        Self::generate(name, rank, simple.clone(), simple, central, true)
    }

    fn generate(
        name: String,
        rank: usize,
        simple_weights: Vec<Vec<i64>>,
        simple_coroots: Vec<Vec<i64>>,
        central_coords: Vec<usize>,
        is_gl: bool,
    ) -> Result<RootDatum> {
        let l = simple_weights.len();
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut roots: Vec<Root> = Vec::new();
        let mut queue = VecDeque::new();
        for i in 0..l {
            let mut coords = vec![0; l];
            coords[i] = 1;
            queue.push_back(Root {
                weight: simple_weights[i].clone(),
                coroot: simple_coroots[i].clone(),
                simple_coords: coords,
            });
        }
        while let Some(r) = queue.pop_front() {
            if seen.contains_key(&r.weight) {
                continue;
            }
            if roots.len() >= ROOT_CAP {
                return Err(HeckeError::NotFiniteType(ROOT_CAP));
            }
            seen.insert(r.weight.clone(), roots.len());
            for i in 0..l {
                let k = dot(&r.weight, &simple_coroots[i]);
                let m = dot(&simple_weights[i], &r.coroot);
                let weight: Vec<i64> = r.weight.iter().zip(&simple_weights[i]).map(|(a, b)| a - k * b).collect();
                let coroot: Vec<i64> = r.coroot.iter().zip(&simple_coroots[i]).map(|(a, b)| a - m * b).collect();
                let mut coords = r.simple_coords.clone();
                coords[i] -= k;
                if !seen.contains_key(&weight) {
                    queue.push_back(Root { weight, coroot, simple_coords: coords });
                }
            }
            roots.push(r);
        }
        // positive roots by height, then their negatives
        roots.retain(|r| r.is_positive());
        roots.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.simple_coords.cmp(&a.simple_coords)));
        let negatives: Vec<Root> = roots
            .iter()
            .map(|r| Root {
                weight: r.weight.iter().map(|x| -x).collect(),
                coroot: r.coroot.iter().map(|x| -x).collect(),
                simple_coords: r.simple_coords.iter().map(|x| -x).collect(),
            })
            .collect();
        roots.extend(negatives);
        let simple = (0..l).map(|i| roots.iter().position(|r| r.weight == simple_weights[i]).unwrap()).collect();
        let coroot_index = roots.iter().enumerate().map(|(i, r)| (r.coroot.clone(), i)).collect();
        let datum = RootDatum { name, rank, roots, simple, central_coords, is_gl, coroot_index };
        datum.check_invariants()?;
        Ok(datum)
    }

    fn check_invariants(&self) -> Result<()> {
        for r in &self.roots {
            if dot(&r.weight, &r.coroot) != 2 {
                return Err(HeckeError::InvalidModel(format!("<a, a^v> != 2 for root {:?}", r.weight)));
            }
            let pos = r.simple_coords.iter().all(|&c| c >= 0);
            let neg = r.simple_coords.iter().all(|&c| c <= 0);
            if !(pos || neg) {
                return Err(HeckeError::InvalidModel(format!("root {:?} has mixed signs", r.weight)));
            }
        }
        Ok(())
    }

    pub fn is_gl(&self) -> bool {
        self.is_gl
    }

    /// Semisimple rank (number of simple roots).
    pub fn semisimple_rank(&self) -> usize {
        self.simple.len()
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.roots.len()).filter(|&i| self.roots[i].is_positive())
    }

    pub fn root_index_by_weight(&self, weight: &[i64]) -> Option<usize> {
        self.roots.iter().position(|r| r.weight == weight)
    }

    pub fn root_index_by_coroot(&self, coroot: &[i64]) -> Option<usize> {
        self.coroot_index.get(coroot).copied()
    }

    pub fn negate_root(&self, a: usize) -> usize {
        let neg: Vec<i64> = self.roots[a].coroot.iter().map(|x| -x).collect();
        self.root_index_by_coroot(&neg).unwrap()
    }

    /// ⟨a, λ⟩ for a root index.
    pub fn pair(&self, a: usize, lambda: &Coweight) -> i64 {
        dot(&self.roots[a].weight, &lambda.0)
    }

    /// s_a(λ) = λ − ⟨a, λ⟩ a^∨.
    pub fn reflect(&self, a: usize, lambda: &Coweight) -> Coweight {
        let k = self.pair(a, lambda);
        Coweight(lambda.0.iter().zip(&self.roots[a].coroot).map(|(x, c)| x - k * c).collect())
    }

    /// Matrix of the simple reflection `s_i` on the cocharacter lattice.
    pub fn simple_reflection_matrix(&self, i: usize) -> IntMatrix {
        let a = self.simple[i];
        let cols: Vec<Coweight> = (0..self.rank).map(|j| self.reflect(a, &Coweight::unit(self.rank, j))).collect();
        (0..self.rank).map(|r| (0..self.rank).map(|c| cols[c].0[r]).collect()).collect()
    }

    /// Matrix of `s_i` on the character lattice.
    pub fn simple_reflection_matrix_on_weights(&self, i: usize) -> IntMatrix {
        let a = &self.roots[self.simple[i]];
        (0..self.rank).map(|r| (0..self.rank).map(|c| (r == c) as i64 - a.coroot[c] * a.weight[r]).collect()).collect()
    }

    /// Whether the W-orbit of every coweight in the sup-norm box of radius
    /// `r` stays inside the box.
    pub fn box_is_weyl_stable(&self, r: i64) -> bool {
        box_points(self.rank, r)
            .iter()
            .all(|p| (0..self.semisimple_rank()).all(|i| self.reflect(self.simple[i], p).sup_norm() <= r))
    }
}

/// All integer vectors of the given length with entries in [-r, r].
pub fn box_points(rank: usize, r: i64) -> Vec<Coweight> {
    let mut out = vec![Vec::with_capacity(rank)];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-r..=r).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(Coweight).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

pub fn mat_vec(a: &IntMatrix, v: &[i64]) -> Vec<i64> {
    a.iter().map(|row| dot(row, v)).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

/// A finite Weyl group element. Equality is by the cocharacter action;
/// the word is one reduced expression.
#[derive(Clone, Debug, Serialize)]
pub struct WeylElement {
    pub word: Vec<usize>,
    pub action: IntMatrix,
    pub weight_action: IntMatrix,
}

impl PartialEq for WeylElement {
    fn eq(&self, o: &Self) -> bool {
        self.action == o.action
    }
}

impl Eq for WeylElement {}

impl std::hash::Hash for WeylElement {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.action.hash(h)
    }
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement { word: vec![], action: identity(rank), weight_action: identity(rank) }
    }

    pub fn act(&self, lambda: &Coweight) -> Coweight {
        Coweight(mat_vec(&self.action, &lambda.0))
    }

    pub fn act_on_weight(&self, x: &[i64]) -> Vec<i64> {
        mat_vec(&self.weight_action, x)
    }

    pub fn compose(&self, o: &WeylElement) -> WeylElement {
        let mut word = self.word.clone();
        word.extend(&o.word);
        WeylElement {
            word,
            action: mat_mul(&self.action, &o.action),
            weight_action: mat_mul(&self.weight_action, &o.weight_action),
        }
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }
}

/// The finite Weyl group with lookup tables.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    index: HashMap<IntMatrix, usize>,
    /// `left_simple[i][w]` is the index of `s_i w`.
    pub left_simple: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
}

impl WeylGroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, w: &WeylElement) -> usize {
        self.index[&w.action]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&mat_mul(&self.elements[a].action, &self.elements[b].action)]
    }

    pub fn length(&self, w: usize) -> usize {
        self.elements[w].word.len()
    }

    pub fn identity(&self) -> usize {
        0
    }
}

/// Enumerates W_0 breadth-first, so the stored words are reduced.
pub fn enumerate_weyl(datum: &RootDatum) -> Result<Vec<WeylElement>> {
    enumerate_weyl_capped(datum, DEFAULT_WEYL_CAP)
}

pub fn enumerate_weyl_capped(datum: &RootDatum, cap: usize) -> Result<Vec<WeylElement>> {
    let gens: Vec<WeylElement> = (0..datum.semisimple_rank())
        .map(|i| WeylElement {
            word: vec![i],
            action: datum.simple_reflection_matrix(i),
            weight_action: datum.simple_reflection_matrix_on_weights(i),
        })
        .collect();
    let mut seen: HashMap<IntMatrix, usize> = HashMap::new();
    let start = WeylElement::identity(datum.rank);
    seen.insert(start.action.clone(), 0);
    let mut out = vec![start];
    let mut head = 0;
    while head < out.len() {
        let w = out[head].clone();
        head += 1;
        for g in &gens {
            let next = w.compose(g);
            if !seen.contains_key(&next.action) {
                if out.len() >= cap {
                    return Err(HeckeError::WeylCapExceeded { cap });
                }
                seen.insert(next.action.clone(), out.len());
                out.push(next);
            }
        }
    }
    Ok(out)
}

impl RootDatum {
    pub fn weyl_group(&self) -> Result<WeylGroup> {
        let elements = enumerate_weyl(self)?;
        let index: HashMap<IntMatrix, usize> =
            elements.iter().enumerate().map(|(i, w)| (w.action.clone(), i)).collect();
        let left_simple = (0..self.semisimple_rank())
            .map(|i| {
                let s = self.simple_reflection_matrix(i);
                elements.iter().map(|w| index[&mat_mul(&s, &w.action)]).collect()
            })
            .collect();
        let id = identity(self.rank);
        let inverse = elements
            .iter()
            .map(|w| {
                elements
                    .iter()
                    .position(|u| mat_mul(&w.action, &u.action) == id)
                    .expect("Weyl group not closed under inverses")
            })
            .collect();
        Ok(WeylGroup { elements, index, left_simple, inverse })
    }

    /// Index of the root w(a).
    pub fn act_on_root(&self, w: &WeylElement, a: usize) -> usize {
        let c = mat_vec(&w.action, &self.roots[a].coroot);
        self.root_index_by_coroot(&c).expect("Weyl element does not permute the roots")
    }

    /// Subgroup W_θ generated by the simple reflections indexed by `theta`
    /// (indices into the list of simple roots).
    pub fn parabolic_subgroup(&self, theta: &[usize]) -> Vec<WeylElement> {
        let mut seen: HashMap<IntMatrix, ()> = HashMap::new();
        let start = WeylElement::identity(self.rank);
        seen.insert(start.action.clone(), ());
        let mut out = vec![start];
        let mut head = 0;
        while head < out.len() {
            let w = out[head].clone();
            head += 1;
            for &i in theta {
                let g = WeylElement {
                    word: vec![i],
                    action: self.simple_reflection_matrix(i),
                    weight_action: self.simple_reflection_matrix_on_weights(i),
                };
                let next = w.compose(&g);
                if seen.insert(next.action.clone(), ()).is_none() {
                    out.push(next);
                }
            }
        }
        out
    }

    fn simple_element(&self, i: usize) -> WeylElement {
        WeylElement {
            word: vec![i],
            action: self.simple_reflection_matrix(i),
            weight_action: self.simple_reflection_matrix_on_weights(i),
        }
    }

    /// The product of simple reflections spelled by `word`.
    pub fn weyl_element(&self, word: &[usize]) -> WeylElement {
        word.iter().fold(WeylElement::identity(self.rank), |acc, &i| acc.compose(&self.simple_element(i)))
    }

    /// Inverse of a Weyl element via its reversed word.
    pub fn inverse(&self, w: &WeylElement) -> WeylElement {
        w.word.iter().rev().fold(WeylElement::identity(self.rank), |acc, &i| acc.compose(&self.simple_element(i)))
    }

    /// Splits `w = w1 * w2` with `w1 ∈ W_θ` and `w2^{-1}(a) > 0` for all
    /// `a ∈ θ`. Peels simple reflections from θ off the left until the
    /// remainder is the minimal coset representative.
    pub fn coset_decompose(&self, w: &WeylElement, theta: &[usize]) -> (WeylElement, WeylElement) {
        let mut w1 = WeylElement::identity(self.rank);
        let mut w2 = w.clone();
        loop {
            let w2_inv = self.inverse(&w2);
            let bad =
                theta.iter().copied().find(|&i| !self.roots[self.act_on_root(&w2_inv, self.simple[i])].is_positive());
            match bad {
                None => break,
                Some(i) => {
                    let s = self.simple_element(i);
                    w1 = w1.compose(&s);
                    w2 = s.compose(&w2);
                    w2.word = reduced_word_of(self, &w2);
                }
            }
        }
        (w1, w2)
    }

    /// Full W_0-orbit of λ.
    pub fn weyl_orbit(&self, lambda: &Coweight) -> BTreeSet<Coweight> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([lambda.clone()]);
        while let Some(mu) = queue.pop_front() {
            if !seen.insert(mu.clone()) {
                continue;
            }
            for i in 0..self.semisimple_rank() {
                let nu = self.reflect(self.simple[i], &mu);
                if !seen.contains(&nu) {
                    queue.push_back(nu);
                }
            }
        }
        seen
    }

    /// Dominant representative of the orbit of λ.
    pub fn dominant(&self, lambda: &Coweight) -> Coweight {
        let mut mu = lambda.clone();
        loop {
            match (0..self.semisimple_rank()).find(|&i| self.pair(self.simple[i], &mu) < 0) {
                Some(i) => mu = self.reflect(self.simple[i], &mu),
                None => return mu,
            }
        }
    }

    pub fn is_dominant(&self, lambda: &Coweight) -> bool {
        (0..self.semisimple_rank()).all(|i| self.pair(self.simple[i], lambda) >= 0)
    }
}

/// A reduced word of `w`, found by repeatedly stripping left descents.
pub fn reduced_word_of(datum: &RootDatum, w: &WeylElement) -> Vec<usize> {
    let mut cur = WeylElement { word: vec![], action: w.action.clone(), weight_action: w.weight_action.clone() };
    let mut word = Vec::new();
    loop {
        // s_i is a left descent iff w^{-1}(α_i^∨) is a negative coroot
        let inv_action = invert_unimodular(&cur.action);
        let desc = (0..datum.semisimple_rank()).find(|&i| {
            let c = mat_vec(&inv_action, &datum.roots[datum.simple[i]].coroot);
            let idx = datum.root_index_by_coroot(&c).unwrap();
            !datum.roots[idx].is_positive()
        });
        match desc {
            None => return word,
            Some(i) => {
                word.push(i);
                let s = datum.simple_element(i);
                cur = WeylElement {
                    word: vec![],
                    action: mat_mul(&s.action, &cur.action),
                    weight_action: mat_mul(&s.weight_action, &cur.weight_action),
                };
            }
        }
    }
}

/// Inverse of an integer matrix with determinant ±1 (Weyl actions only).
pub fn invert_unimodular(m: &IntMatrix) -> IntMatrix {
    let n = m.len();
    let mut a: Vec<Vec<num_rational::Rational64>> =
        m.iter().map(|r| r.iter().map(|&x| num_rational::Rational64::from_integer(x)).collect()).collect();
    let mut inv: Vec<Vec<num_rational::Rational64>> =
        identity(n).into_iter().map(|r| r.into_iter().map(num_rational::Rational64::from_integer).collect()).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| a[r][col] != 0.into()).expect("singular matrix");
        a.swap(col, p);
        inv.swap(col, p);
        let piv = a[col][col];
        for j in 0..n {
            a[col][j] /= piv;
            inv[col][j] /= piv;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0.into() {
                let f = a[r][col];
                for j in 0..n {
                    let (ac, ic) = (a[col][j], inv[col][j]);
                    a[r][j] -= f * ac;
                    inv[r][j] -= f * ic;
                }
            }
        }
    }
    inv.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| {
                    assert!(x.is_integer(), "matrix is not unimodular");
                    x.to_integer()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts_and_weyl_orders() {
        for (name, roots, order) in [
            ("a1", 2, 2),
            ("a2", 6, 6),
            ("a1xa1", 4, 4),
            ("b2", 8, 8),
            ("c3", 18, 48),
            ("d4", 24, 192),
            ("g2", 12, 12),
            ("gl3", 6, 6),
        ] {
            let d = RootDatum::named(name).unwrap();
            assert_eq!(d.num_roots(), roots, "{name}");
            assert_eq!(enumerate_weyl(&d).unwrap().len(), order, "{name}");
        }
    }

    #[test]
    fn b2_weyl_order_by_brute_force_closure() {
        // close the set of all reflection matrices under products
        let d = RootDatum::named("b2").unwrap();
        let mut set: BTreeSet<IntMatrix> = BTreeSet::new();
        set.insert(identity(2));
        let refl: Vec<IntMatrix> = (0..d.num_roots())
            .map(|a| {
                let cols: Vec<Coweight> = (0..2).map(|j| d.reflect(a, &Coweight::unit(2, j))).collect();
                (0..2).map(|r| (0..2).map(|c| cols[c].0[r]).collect()).collect()
            })
            .collect();
        loop {
            let mut next = set.clone();
            for m in &set {
                for r in &refl {
                    next.insert(mat_mul(m, r));
                }
            }
            if next.len() == set.len() {
                break;
            }
            set = next;
        }
        assert_eq!(set.len(), 8);
    }

    #[test]
    fn gl3_roots_are_differences_of_unit_vectors() {
        let d = RootDatum::named("gl3").unwrap();
        for r in &d.roots {
            let ones = r.weight.iter().filter(|&&x| x == 1).count();
            let minus = r.weight.iter().filter(|&&x| x == -1).count();
            assert_eq!((ones, minus), (1, 1));
            assert_eq!(r.weight, r.coroot);
        }
    }

    #[test]
    fn reflection_examples() {
        let a1 = RootDatum::named("a1").unwrap();
        let alpha = a1.simple[0];
        assert_eq!(a1.reflect(alpha, &Coweight(vec![1])), Coweight(vec![-1]));
        let gl3 = RootDatum::named("gl3").unwrap();
        let e12 = gl3.root_index_by_weight(&[1, -1, 0]).unwrap();
        assert_eq!(gl3.reflect(e12, &Coweight(vec![1, 0, 0])), Coweight(vec![0, 1, 0]));
        let a2 = RootDatum::named("a2").unwrap();
        assert_eq!(a2.reflect(a2.simple[0], &Coweight::zero(2)), Coweight::zero(2));
    }

    #[test]
    fn invalid_cartan_is_rejected_with_entry() {
        let err = RootDatum::from_spec(&DatumSpec::Cartan { cartan: vec![vec![2, -4], vec![-1, 2]], central_rank: 0 })
            .unwrap_err();
        assert!(matches!(err, HeckeError::InvalidCartan { row: 0, col: 1, value: -4, .. }));
        // affine A_1~ passes the local checks but is not of finite type
        let err = RootDatum::from_spec(&DatumSpec::Cartan { cartan: vec![vec![2, -2], vec![-2, 2]], central_rank: 0 })
            .unwrap_err();
        assert!(matches!(err, HeckeError::InvalidCartan { .. } | HeckeError::NotFiniteType(_)));
    }

    #[test]
    fn weyl_cap_is_enforced() {
        let d = RootDatum::named("d4").unwrap();
        assert_eq!(enumerate_weyl_capped(&d, 100).unwrap_err(), HeckeError::WeylCapExceeded { cap: 100 });
    }

    #[test]
    fn coset_decomposition_examples() {
        let a2 = RootDatum::named("a2").unwrap();
        let w = a2.weyl_group().unwrap();
        let s1 = w.elements.iter().find(|e| e.word == vec![0]).unwrap();
        let s2 = w.elements.iter().find(|e| e.word == vec![1]).unwrap();
        let (w1, w2) = a2.coset_decompose(s2, &[1]);
        assert_eq!((&w1, &w2), (s2, &WeylElement::identity(2)));
        let (w1, w2) = a2.coset_decompose(s1, &[1]);
        assert_eq!((&w1, &w2), (&WeylElement::identity(2), s1));
        for x in &w.elements {
            let (w1, w2) = a2.coset_decompose(x, &[0, 1]);
            assert_eq!((&w1, &w2), (x, &WeylElement::identity(2)));
        }
    }

    #[test]
    fn orbit_examples() {
        let a1 = RootDatum::named("a1").unwrap();
        assert_eq!(a1.weyl_orbit(&Coweight(vec![1])).len(), 2);
        let gl3 = RootDatum::named("gl3").unwrap();
        let orb: Vec<Coweight> = gl3.weyl_orbit(&Coweight(vec![1, 0, 0])).into_iter().collect();
        assert_eq!(orb, vec![Coweight(vec![0, 0, 1]), Coweight(vec![0, 1, 0]), Coweight(vec![1, 0, 0])]);
        let a2 = RootDatum::named("a2").unwrap();
        assert_eq!(a2.weyl_orbit(&Coweight::zero(2)).len(), 1);
    }

    #[test]
    fn json_specs() {
        let d =
            RootDatum::from_spec(&DatumSpec::parse(r#"{"type": "A", "n": 2, "central_rank": 1}"#).unwrap()).unwrap();
        assert_eq!((d.rank, d.num_roots()), (3, 6));
        assert_eq!(d.central_coords, vec![2]);
        let d = RootDatum::from_spec(&DatumSpec::parse(r#"{"cartan": [[2,-1],[-1,2]], "central_rank": 0}"#).unwrap())
            .unwrap();
        assert_eq!(d.num_roots(), 6);
    }
}
