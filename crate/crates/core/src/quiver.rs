//! Finite quivers and their paths.
//!
//! Paths compose left to right: `p.q` traverses `p` first, then `q`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` has unknown endpoint `{vertex}`")]
    UnknownEndpoint { arrow: String, vertex: String },
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("arrows `{0}` and `{1}` do not compose")]
    NotComposable(String, String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
}

impl Quiver {
    pub fn new<V, A, S>(vertices: V, arrows: A) -> Result<Self, QuiverError>
    where
        V: IntoIterator<Item = S>,
        A: IntoIterator<Item = (S, S, S)>,
        S: Into<String>,
    {
        let mut q = Quiver { vertices: Vec::new(), arrows: Vec::new(), vertex_index: HashMap::new(), arrow_index: HashMap::new() };
        for v in vertices {
            let v = v.into();
            if q.vertex_index.contains_key(&v) {
                return Err(QuiverError::DuplicateVertex(v));
            }
            q.vertex_index.insert(v.clone(), q.vertices.len());
            q.vertices.push(v);
        }
        for (name, s, t) in arrows {
            let (name, s, t) = (name.into(), s.into(), t.into());
            if q.arrow_index.contains_key(&name) {
                return Err(QuiverError::DuplicateArrow(name));
            }
            let lookup = |v: &String| q.vertex_index.get(v).copied().ok_or_else(|| QuiverError::UnknownEndpoint { arrow: name.clone(), vertex: v.clone() });
            let (source, target) = (lookup(&s)?, lookup(&t)?);
            q.arrow_index.insert(name.clone(), q.arrows.len());
            q.arrows.push(Arrow { name, source, target });
        }
        Ok(q)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, index: usize) -> &Arrow {
        &self.arrows[index]
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertex_index.get(name).copied()
    }

    pub fn arrow_id(&self, name: &str) -> Option<usize> {
        self.arrow_index.get(name).copied()
    }

    pub fn stationary(&self, vertex: usize) -> Path {
        assert!(vertex < self.vertices.len());
        Path::stationary(vertex)
    }

    /// The path traversing the named arrows in order.
    pub fn path<S: AsRef<str>>(&self, names: &[S]) -> Result<Path, QuiverError> {
        let mut ids = Vec::with_capacity(names.len());
        for n in names {
            ids.push(self.arrow_id(n.as_ref()).ok_or_else(|| QuiverError::UnknownArrow(n.as_ref().to_string()))?);
        }
        self.path_from_ids(&ids)
    }

    pub fn path_from_ids(&self, ids: &[usize]) -> Result<Path, QuiverError> {
        let (first, rest) = ids.split_first().expect("nonempty arrow list");
        let mut p = Path::arrow(*first, &self.arrows[*first]);
        let mut prev = *first;
        for &a in rest {
            let next = Path::arrow(a, &self.arrows[a]);
            p = p.compose(&next).ok_or_else(|| QuiverError::NotComposable(self.arrows[prev].name.clone(), self.arrows[a].name.clone()))?;
            prev = a;
        }
        Ok(p)
    }

    /// All paths of length at most `max_len`, ordered by length, then by the
    /// sequence of arrow declaration indices (stationary paths by vertex).
    pub fn enumerate_paths(&self, max_len: usize) -> Vec<Path> {
        let mut out: Vec<Path> = (0..self.vertices.len()).map(Path::stationary).collect();
        let mut frontier: Vec<Path> = Vec::new();
        for len in 1..=max_len {
            let next: Vec<Path> = if len == 1 {
                self.arrows.iter().enumerate().map(|(i, a)| Path::arrow(i, a)).collect()
            } else {
                let mut v = Vec::new();
                for p in &frontier {
                    for (i, a) in self.arrows.iter().enumerate() {
                        if a.source == p.target {
                            v.push(p.compose(&Path::arrow(i, a)).expect("composable"));
                        }
                    }
                }
                v
            };
            if next.is_empty() {
                break;
            }
            let mut sorted = next.clone();
            sorted.sort();
            out.extend(sorted);
            frontier = next;
        }
        out
    }

    /// Paths of length exactly `len`, in canonical order.
    pub fn paths_of_length(&self, len: usize) -> Vec<Path> {
        self.enumerate_paths(len).into_iter().filter(|p| p.len() == len).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        // Kahn's algorithm; loops and multi-edges are handled naturally.
        let n = self.vertices.len();
        let mut indegree = vec![0usize; n];
        for a in &self.arrows {
            indegree[a.target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indegree[a.target] -= 1;
                if indegree[a.target] == 0 {
                    stack.push(a.target);
                }
            }
        }
        seen == n
    }

    pub fn display_path(&self, p: &Path) -> String {
        if p.is_stationary() {
            format!("e_{}", self.vertices[p.source])
        } else {
            p.arrows.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join(".")
        }
    }
}

/// A path in a quiver: a stationary path at a vertex, or a nonempty
/// composable arrow sequence (arrows referenced by declaration index).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    source: usize,
    target: usize,
    arrows: Vec<usize>,
}

impl Path {
    pub fn stationary(vertex: usize) -> Self {
        Path { source: vertex, target: vertex, arrows: Vec::new() }
    }

    pub fn arrow(index: usize, arrow: &Arrow) -> Self {
        Path { source: arrow.source, target: arrow.target, arrows: vec![index] }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_stationary(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_stationary()
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn contains_arrow(&self, arrow: usize) -> bool {
        self.arrows.contains(&arrow)
    }

    /// `self` followed by `other`, when the endpoints match.
    pub fn compose(&self, other: &Path) -> Option<Path> {
        if self.target != other.source {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path { source: self.source, target: other.target, arrows })
    }

    /// Sub-path made of arrows `from..to`; empty ranges give the stationary
    /// path at the appropriate vertex.
    pub fn subpath(&self, from: usize, to: usize, quiver: &Quiver) -> Path {
        if from == to {
            let v = if from == 0 { self.source } else { quiver.arrow(self.arrows[from - 1]).target };
            return Path::stationary(v);
        }
        let arrows = self.arrows[from..to].to_vec();
        Path { source: quiver.arrow(arrows[0]).source, target: quiver.arrow(arrows[arrows.len() - 1]).target, arrows }
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows.len().cmp(&other.arrows.len()).then_with(|| self.arrows.cmp(&other.arrows)).then_with(|| self.source.cmp(&other.source))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_stationary() {
            write!(f, "e[{}]", self.source)
        } else {
            let parts: Vec<String> = self.arrows.iter().map(|a| a.to_string()).collect();
            write!(f, "[{}]", parts.join("."))
        }
    }
}
