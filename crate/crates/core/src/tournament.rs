//! Tournaments on dense vertex labels `0..n` with full bit-matrix adjacency.
//!
//! Both the out-row ("beaten by x") and the in-row ("beat x") of every vertex
//! are stored, so that sign-constrained witness scans can intersect rows of
//! either direction word by word.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Vertices beaten by `x`.
    Out,
    /// Vertices that beat `x`.
    In,
}

/// A complete oriented graph. Immutable once built.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "EdgeList", into = "EdgeList")]
pub struct Tournament {
    order: usize,
    words: usize,
    out_rows: Vec<u64>,
    in_rows: Vec<u64>,
}

/// Serialized form: order plus the list of `(winner, loser)` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeList {
    pub order: usize,
    pub edges: Vec<(usize, usize)>,
}

impl TryFrom<EdgeList> for Tournament {
    type Error = Error;

    fn try_from(list: EdgeList) -> Result<Self> {
        Tournament::build(list.order, &list.edges)
    }
}

impl From<Tournament> for EdgeList {
    fn from(t: Tournament) -> Self {
        EdgeList { order: t.order, edges: t.edges().collect() }
    }
}

impl std::fmt::Debug for Tournament {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Tournament")
            .field("order", &self.order)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Tournament {
    fn empty(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::EmptyTournament);
        }
        let words = bits::words_for(order);
        Ok(Tournament {
            order,
            words,
            out_rows: vec![0; order * words],
            in_rows: vec![0; order * words],
        })
    }

    #[inline]
    fn set_edge(&mut self, winner: usize, loser: usize) {
        let w = self.words;
        bits::set(&mut self.out_rows[winner * w..(winner + 1) * w], loser);
        bits::set(&mut self.in_rows[loser * w..(loser + 1) * w], winner);
    }

    /// Build a tournament from an explicit edge list, `(x, y)` meaning x beat y.
    pub fn build(order: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut t = Self::empty(order)?;
        for &(x, y) in edges {
            for v in [x, y] {
                if v >= order {
                    return Err(Error::VertexOutOfRange { vertex: v, order });
                }
            }
            if x == y {
                return Err(Error::SelfLoop(x));
            }
            if t.has_edge(y, x) {
                return Err(Error::ConflictingPair(x.min(y), x.max(y)));
            }
            t.set_edge(x, y);
        }
        for x in 0..order {
            for y in x + 1..order {
                if !t.has_edge(x, y) && !t.has_edge(y, x) {
                    return Err(Error::MissingPair(x, y));
                }
            }
        }
        Ok(t)
    }

    /// Build from a closure deciding, for every `x < y`, whether x beats y.
    pub fn from_fn(order: usize, mut x_beats_y: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut t = Self::empty(order)?;
        for x in 0..order {
            for y in x + 1..order {
                if x_beats_y(x, y) {
                    t.set_edge(x, y);
                } else {
                    t.set_edge(y, x);
                }
            }
        }
        Ok(t)
    }

    /// Orientation given by a bitmask over the pairs `(x, y)`, `x < y`, in
    /// lexicographic order: bit `i` set means the i-th pair's smaller vertex wins.
    pub fn from_orientation_mask(order: usize, mask: u64) -> Result<Self> {
        let mut bit = 0;
        Self::from_fn(order, |_, _| {
            let b = mask >> bit & 1 == 1;
            bit += 1;
            b
        })
    }

    /// Uniformly random orientation.
    ///
    /// Each pair `(x, y)`, `x < y`, taken in lexicographic order, gets one
    /// `bool` draw from a `ChaCha8Rng` seeded with `seed_from_u64(seed)`;
    /// `true` means x beats y. The stream is stable across runs and platforms.
    pub fn random(order: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(order, &mut rng)
    }

    pub fn random_with<R: Rng + ?Sized>(order: usize, rng: &mut R) -> Result<Self> {
        Self::from_fn(order, |_, _| rng.gen::<bool>())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    /// Words per adjacency row.
    #[inline]
    pub fn row_words(&self) -> usize {
        self.words
    }

    #[inline]
    fn has_edge(&self, x: usize, y: usize) -> bool {
        bits::get(self.out_row(x), y)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.order {
            Err(Error::VertexOutOfRange { vertex: v, order: self.order })
        } else {
            Ok(())
        }
    }

    /// Whether `x` beat `y`.
    pub fn beats(&self, x: usize, y: usize) -> Result<bool> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        if x == y {
            return Err(Error::SameVertex(x));
        }
        Ok(self.has_edge(x, y))
    }

    /// Bit row of the vertices beaten by `x`. Panics if `x` is out of range.
    #[inline]
    pub fn out_row(&self, x: usize) -> &[u64] {
        &self.out_rows[x * self.words..(x + 1) * self.words]
    }

    /// Bit row of the vertices that beat `x`. Panics if `x` is out of range.
    #[inline]
    pub fn in_row(&self, x: usize) -> &[u64] {
        &self.in_rows[x * self.words..(x + 1) * self.words]
    }

    pub fn neighborhood(&self, x: usize, direction: Direction) -> Result<Vec<usize>> {
        self.check_vertex(x)?;
        let row = match direction {
            Direction::Out => self.out_row(x),
            Direction::In => self.in_row(x),
        };
        Ok(bits::ones(row).collect())
    }

    pub fn out_degree(&self, x: usize) -> usize {
        bits::count(self.out_row(x))
    }

    pub fn in_degree(&self, x: usize) -> usize {
        bits::count(self.in_row(x))
    }

    /// All edges `(winner, loser)`, ordered by winner then loser.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order).flat_map(move |x| bits::ones(self.out_row(x)).map(move |y| (x, y)))
    }

    /// Re-check both structural invariants from the stored rows.
    pub fn check_invariants(&self) -> bool {
        (0..self.order).all(|x| {
            !bits::get(self.out_row(x), x)
                && !bits::get(self.in_row(x), x)
                && (0..self.order).filter(|&y| y != x).all(|y| {
                    let xy = self.has_edge(x, y);
                    xy != self.has_edge(y, x) && xy == bits::get(self.in_row(y), x)
                })
        })
    }

    /// Edge-list text: the order on the first line, then one `x y` line per
    /// edge (x beats y).
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{}\n", self.order);
        for (x, y) in self.edges() {
            let _ = writeln!(s, "{x} {y}");
        }
        s
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing order line".into() })?;
        let order = parse_usize(header, line)?;
        let mut edges = Vec::new();
        for (line, l) in lines {
            let mut it = l.split_whitespace();
            let (Some(x), Some(y), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::Parse { line, msg: format!("expected `x y`, got `{l}`") });
            };
            edges.push((parse_usize(x, line)?, parse_usize(y, line)?));
        }
        Self::build(order, &edges)
    }

    /// Graphviz rendering, one `x -> y` line per edge.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph tournament {\n");
        for v in 0..self.order {
            let _ = writeln!(s, "  {v};");
        }
        for (x, y) in self.edges() {
            let _ = writeln!(s, "  {x} -> {y};");
        }
        s.push_str("}\n");
        s
    }
}

pub(crate) fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("not a non-negative integer: `{tok}`") })
}
