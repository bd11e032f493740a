//! Self-similar generators (Mealy automata), their unfolding to portraits,
//! and the built-in catalog of test groups.

use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;
use crate::tree::{Portrait, TreeShape, Vertex};

/// Largest number of vertices on the deepest level of a default shape
/// (3^8, so ternary groups reach depth 8 while binary ones stop at 12).
pub const DEFAULT_MAX_LEAVES: usize = 6561;

/// Maximum depth for constant degree `m` (12 for the binary tree, 8 for the ternary one).
pub fn default_max_depth(m: usize) -> usize {
    let mut d = 0;
    let mut leaves = 1usize;
    while leaves * m <= DEFAULT_MAX_LEAVES {
        leaves *= m;
        d += 1;
    }
    d
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Section {
    Identity,
    State(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub name: String,
    pub perm: Perm,
    pub sections: Vec<Section>,
}

/// A self-similar group given by a finite automaton over a constant alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomatonGroup {
    pub name: String,
    pub shape: TreeShape,
    pub states: Vec<State>,
}

impl AutomatonGroup {
    /// `states` lists `(name, root permutation, section names)`; `"e"` is the identity.
    pub fn from_spec(
        name: &str,
        degree: usize,
        max_depth: usize,
        states: &[(&str, Vec<usize>, Vec<&str>)],
    ) -> Result<Self> {
        let shape = TreeShape::constant(degree, max_depth)?;
        let names: Vec<&str> = states.iter().map(|s| s.0).collect();
        let resolve = |s: &str| -> Result<Section> {
            if s == "e" {
                return Ok(Section::Identity);
            }
            names
                .iter()
                .position(|&n| n == s)
                .map(Section::State)
                .ok_or_else(|| Error::Definition(format!("unresolved state reference `{s}`")))
        };
        let mut out = vec![];
        for (n, perm, sections) in states {
            if *n == "e" {
                return Err(Error::Definition("`e` is reserved for the identity".into()));
            }
            let perm = Perm::from_images(perm.clone())?;
            if perm.degree() != degree {
                return Err(Error::Definition(format!(
                    "state `{n}` has a root permutation of degree {}, expected {degree}",
                    perm.degree()
                )));
            }
            if sections.len() != degree {
                return Err(Error::Definition(format!(
                    "state `{n}` has {} sections, expected {degree}",
                    sections.len()
                )));
            }
            let sections = sections.iter().map(|s| resolve(s)).collect::<Result<Vec<_>>>()?;
            out.push(State {
                name: n.to_string(),
                perm,
                sections,
            });
        }
        Ok(AutomatonGroup {
            name: name.to_string(),
            shape,
            states: out,
        })
    }

    /// Parses the TOML automaton document (`shape`, `[[states]]` with `name`, `perm`, `sections`).
    pub fn parse_toml(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            name: Option<String>,
            shape: Vec<usize>,
            max_depth: Option<usize>,
            states: Vec<StateDoc>,
        }
        #[derive(Deserialize)]
        struct StateDoc {
            name: String,
            perm: Vec<usize>,
            sections: Vec<String>,
        }
        let doc: Doc = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let degree = *doc
            .shape
            .first()
            .ok_or_else(|| Error::Definition("empty shape".into()))?;
        if doc.shape.iter().any(|&m| m != degree) {
            return Err(Error::Definition(
                "self-similar automata need a constant degree".into(),
            ));
        }
        let max_depth = doc.max_depth.unwrap_or(default_max_depth(degree).max(doc.shape.len()));
        let states: Vec<(&str, Vec<usize>, Vec<&str>)> = doc
            .states
            .iter()
            .map(|s| {
                (
                    s.name.as_str(),
                    s.perm.clone(),
                    s.sections.iter().map(String::as_str).collect(),
                )
            })
            .collect();
        Self::from_spec(doc.name.as_deref().unwrap_or("automaton"), degree, max_depth, &states)
    }

    /// Each state as a depth-`depth` portrait.
    pub fn unfold(&self, depth: usize) -> Result<TreeGroup> {
        self.shape.check_depth(depth)?;
        let gens = (0..self.states.len())
            .map(|s| self.state_portrait(s, depth))
            .collect::<Result<Vec<_>>>()?;
        TreeGroup::new(&self.name, &self.shape, depth, gens)
    }

    fn state_portrait(&self, state: usize, depth: usize) -> Result<Portrait> {
        let m = self.shape.degree(0);
        let mut labels = Vec::with_capacity(depth);
        let mut current: Vec<Option<usize>> = vec![Some(state)];
        for _ in 0..depth {
            labels.push(
                current
                    .iter()
                    .map(|s| match s {
                        Some(s) => self.states[*s].perm.clone(),
                        None => Perm::identity(m),
                    })
                    .collect(),
            );
            current = current
                .iter()
                .flat_map(|s| {
                    (0..m).map(move |c| match s {
                        Some(s) => match self.states[*s].sections[c] {
                            Section::Identity => None,
                            Section::State(t) => Some(t),
                        },
                        None => None,
                    })
                })
                .collect();
        }
        Portrait::from_labels(&self.shape, depth, labels)
    }
}

/// Which labelled-portrait family generates a wreath-type catalog group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WreathKind {
    /// All of `Aut T` truncated: a transposition and a full cycle at each leftmost vertex.
    Full,
    /// Iterated wreath product of a cycle of prime length: one cycle per leftmost vertex.
    Sylow,
}

/// A catalog or user group definition, unfoldable to any supported depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupDef {
    Automaton(AutomatonGroup),
    Wreath {
        name: String,
        shape: TreeShape,
        kind: WreathKind,
    },
}

impl GroupDef {
    pub fn name(&self) -> &str {
        match self {
            GroupDef::Automaton(a) => &a.name,
            GroupDef::Wreath { name, .. } => name,
        }
    }

    pub fn shape(&self) -> &TreeShape {
        match self {
            GroupDef::Automaton(a) => &a.shape,
            GroupDef::Wreath { shape, .. } => shape,
        }
    }

    pub fn unfold(&self, depth: usize) -> Result<TreeGroup> {
        match self {
            GroupDef::Automaton(a) => a.unfold(depth),
            GroupDef::Wreath { name, shape, kind } => {
                shape.check_depth(depth)?;
                let mut gens = vec![];
                for k in 0..depth {
                    let m = shape.degree(k);
                    let v = Vertex::leftmost(k);
                    let cycle = Perm::cycle(m, &(0..m).collect::<Vec<_>>())?;
                    if *kind == WreathKind::Full && m > 2 {
                        gens.push(Portrait::vertex_label(shape, depth, &v, Perm::cycle(m, &[0, 1])?)?);
                    }
                    gens.push(Portrait::vertex_label(shape, depth, &v, cycle)?);
                }
                TreeGroup::new(name, shape, depth, gens)
            }
        }
    }
}

/// Catalog entries used by sweeps over "every catalog group".
pub const CATALOG: &[&str] = &[
    "full",
    "sylow_2",
    "sylow_3",
    "odometer",
    "grigorchuk",
    "gupta_sidki_3",
    "abelian_diagonal",
];

/// Looks up a catalog group. Besides [`CATALOG`], `full_<m>` (constant
/// degree `m`) and `sylow_<p>` for any prime `p` are accepted.
pub fn catalog(name: &str) -> Result<GroupDef> {
    let wreath = |shape: TreeShape, kind| GroupDef::Wreath {
        name: name.to_string(),
        shape,
        kind,
    };
    let automaton = |m: usize, states: &[(&str, Vec<usize>, Vec<&str>)]| {
        AutomatonGroup::from_spec(name, m, default_max_depth(m), states).map(GroupDef::Automaton)
    };
    match name {
        "full" => Ok(wreath(TreeShape::constant(2, default_max_depth(2))?, WreathKind::Full)),
        "odometer" => automaton(2, &[("a", vec![1, 0], vec!["e", "a"])]),
        "grigorchuk" => automaton(
            2,
            &[
                ("a", vec![1, 0], vec!["e", "e"]),
                ("b", vec![0, 1], vec!["a", "c"]),
                ("c", vec![0, 1], vec!["a", "d"]),
                ("d", vec![0, 1], vec!["e", "b"]),
            ],
        ),
        "gupta_sidki_3" => automaton(
            3,
            &[
                ("a", vec![1, 2, 0], vec!["e", "e", "e"]),
                ("A", vec![2, 0, 1], vec!["e", "e", "e"]),
                ("t", vec![0, 1, 2], vec!["a", "A", "t"]),
            ],
        ),
        // The ternary odometer together with its diagonal copy (a, a, a): abelian
        // and level-transitive, with trivial rigid stabilizers.
        "abelian_diagonal" => automaton(
            3,
            &[
                ("a", vec![1, 2, 0], vec!["e", "e", "a"]),
                ("b", vec![0, 1, 2], vec!["a", "a", "a"]),
            ],
        ),
        _ => {
            if let Some(m) = name.strip_prefix("full_").and_then(|s| s.parse::<usize>().ok()) {
                return Ok(wreath(TreeShape::constant(m, default_max_depth(m))?, WreathKind::Full));
            }
            if let Some(p) = name.strip_prefix("sylow_").and_then(|s| s.parse::<usize>().ok()) {
                if p >= 2 && (2..p).all(|d| p % d != 0) {
                    return Ok(wreath(TreeShape::constant(p, default_max_depth(p))?, WreathKind::Sylow));
                }
            }
            Err(Error::UnknownGroup(name.to_string()))
        }
    }
}

/// Explicit full group on an arbitrary bounded shape.
pub fn full_on(shape: &TreeShape) -> GroupDef {
    GroupDef::Wreath {
        name: format!("full[{}]", shape.to_header()),
        shape: shape.clone(),
        kind: WreathKind::Full,
    }
}

/// A finitely generated group of tree automorphisms truncated at `depth`.
#[derive(Debug)]
pub struct TreeGroup {
    name: String,
    shape: TreeShape,
    depth: usize,
    generators: Vec<Portrait>,
    vertex_group: OnceLock<PermGroup>,
}

impl Clone for TreeGroup {
    fn clone(&self) -> Self {
        let vertex_group = OnceLock::new();
        if let Some(g) = self.vertex_group.get() {
            let _ = vertex_group.set(g.clone());
        }
        TreeGroup {
            name: self.name.clone(),
            shape: self.shape.clone(),
            depth: self.depth,
            generators: self.generators.clone(),
            vertex_group,
        }
    }
}

impl TreeGroup {
    pub fn new(name: &str, shape: &TreeShape, depth: usize, generators: Vec<Portrait>) -> Result<Self> {
        shape.check_depth(depth)?;
        let shape = shape.truncate(depth);
        for g in &generators {
            if g.depth() != depth || g.shape().truncate(depth) != shape {
                return Err(Error::Incompatible(format!(
                    "generator of depth {} does not match the group depth {depth}",
                    g.depth()
                )));
            }
        }
        let generators = generators
            .into_iter()
            .map(|g| g.reshaped(&shape))
            .collect();
        Ok(TreeGroup {
            name: name.to_string(),
            shape,
            depth,
            generators,
            vertex_group: OnceLock::new(),
        })
    }

    /// Builds the group from breadth-first vertex permutations.
    pub fn from_vertex_perms(name: &str, shape: &TreeShape, depth: usize, perms: &[Perm]) -> Result<Self> {
        let gens = perms
            .iter()
            .map(|p| Portrait::from_vertex_perm(&shape.truncate(depth), depth, p))
            .collect::<Result<Vec<_>>>()?;
        TreeGroup::new(name, shape, depth, gens)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn shape(&self) -> &TreeShape {
        &self.shape
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn generators(&self) -> &[Portrait] {
        &self.generators
    }

    pub fn truncate(&self, depth: usize) -> Result<TreeGroup> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.truncate(depth))
            .collect::<Result<Vec<_>>>()?;
        TreeGroup::new(&self.name, &self.shape, depth, gens)
    }

    pub fn with_generators(&self, extra: &[Portrait]) -> Result<TreeGroup> {
        let mut gens = self.generators.clone();
        gens.extend_from_slice(extra);
        TreeGroup::new(&self.name, &self.shape, self.depth, gens)
    }

    /// Number of non-root vertices (the degree of the vertex action).
    pub fn vertex_count(&self) -> usize {
        self.shape.vertex_count(self.depth)
    }

    pub fn vertex_perms(&self) -> Vec<Perm> {
        self.generators.iter().map(Portrait::vertex_perm).collect()
    }

    /// The action on all non-root vertices, with the stabilizer chain based
    /// on every vertex in breadth-first order.
    pub fn vertex_group(&self) -> &PermGroup {
        self.vertex_group.get_or_init(|| {
            let n = self.vertex_count();
            let base: Vec<usize> = (0..n).collect();
            PermGroup::with_base_prefix(n, self.vertex_perms(), &base).expect("valid vertex action")
        })
    }

    /// `|G : St_G(n)|`, read off the breadth-first stabilizer chain.
    pub fn level_order(&self, n: usize) -> Result<BigUint> {
        self.shape.check_depth(n)?;
        if n > self.depth {
            return Err(Error::DepthExceeded {
                requested: n,
                available: self.depth,
            });
        }
        let g = self.vertex_group();
        let sizes = g.basic_orbit_sizes();
        let points = self.shape.vertex_count(n);
        Ok(sizes[..points.min(sizes.len())]
            .iter()
            .fold(BigUint::from(1u32), |acc, &s| acc * BigUint::from(s)))
    }

    /// Generators of `St_G(n)` as vertex permutations.
    pub fn level_stabilizer_perms(&self, n: usize) -> Vec<Perm> {
        self.vertex_group()
            .chain_stabilizer_generators(self.shape.vertex_count(n))
    }

    pub fn contains(&self, g: &Portrait) -> bool {
        g.depth() == self.depth && self.vertex_group().contains(&g.vertex_perm())
    }

    pub fn to_portrait(&self, perm: &Perm) -> Result<Portrait> {
        Portrait::from_vertex_perm(&self.shape, self.depth, perm)
    }
}
