//! Planar diagrams of plats and their closures: crossing/edge incidence,
//! strand traversal, alternation, the nugatory-crossing test, and writhe.
//!
//! A crossing stores its four incident edges in counterclockwise slot order
//! 0 = SW, 1 = SE, 2 = NE, 3 = NW. The two strands through a crossing occupy
//! opposite slot pairs {3,1} and {2,0}; a letter of sign +1 puts the strand
//! entering at the left top position (slot 3) on top, sign -1 the mirror.
//!
//! Diagrams are built only internally, from braid words: plats cap the
//! bottom with a basis matching, closures additionally cap the top. The
//! boundary of an open tangle is modelled as a single virtual vertex whose
//! rotation follows the disk, so face computations (for the nugatory test)
//! work uniformly for tangles and links.

use std::fmt;

use thiserror::Error;

use crate::braid::BraidWord;
use crate::tl::{enumerate_matchings, Matching, TlError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("writhe requires a closed diagram; this one has {0} open endpoints")]
    OpenDiagram(usize),
    #[error("bottom matching index {index} invalid for {pairs} strand pairs")]
    BadBottom { index: usize, pairs: usize },
    #[error("closure index {index} invalid for {pairs} strand pairs")]
    BadClosure { index: usize, pairs: usize },
    #[error(transparent)]
    Tl(#[from] TlError),
}

/// One end of an edge: a crossing slot or a boundary endpoint position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attach {
    Cross { crossing: usize, slot: u8 },
    Boundary { pos: u8 },
}

#[derive(Debug, Clone)]
pub struct Crossing {
    /// Incident edge ids in ccw slot order [SW, SE, NE, NW].
    pub slots: [usize; 4],
    /// True when the over-strand occupies slots {3, 1} (NW-SE).
    pub over_nw_se: bool,
}

/// A tangle or link diagram.
#[derive(Clone)]
pub struct PlanarDiagram {
    crossings: Vec<Crossing>,
    /// Each edge's two attachments.
    edges: Vec<[Attach; 2]>,
    /// Edge at each open boundary position, in boundary order; empty for links.
    endpoints: Vec<usize>,
    /// Crossing-free circle components.
    free_loops: usize,
}

/// A plat-presented tangle: a braid word over 2n strands whose bottom is
/// capped by basis matching `bottom` (1-based; always 2, the standard caps,
/// for 4-plats).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlatTangle {
    pub word: BraidWord,
    pub bottom: usize,
}

impl PlatTangle {
    pub fn new(word: BraidWord, bottom: usize) -> Result<Self, DiagramError> {
        let pairs = word.mode.pairs();
        let basis = enumerate_matchings(pairs)?;
        if bottom == 0 || bottom > basis.len() || (pairs == 2 && bottom != 2) {
            return Err(DiagramError::BadBottom {
                index: bottom,
                pairs,
            });
        }
        Ok(PlatTangle { word, bottom })
    }

    /// Standard 4-plat over the usual bottom caps.
    pub fn four_plat(word: BraidWord) -> Result<Self, DiagramError> {
        Self::new(word, 2)
    }

    pub fn bottom_matching(&self) -> Matching {
        enumerate_matchings(self.word.mode.pairs()).unwrap()[self.bottom - 1].clone()
    }
}

/// Union-find used while gluing caps onto dangling edges.
struct EdgeMerge {
    parent: Vec<usize>,
}

impl EdgeMerge {
    fn new(size: usize) -> Self {
        EdgeMerge {
            parent: (0..size).collect(),
        }
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut p = x;
        while self.parent[p] != r {
            let next = self.parent[p];
            self.parent[p] = r;
            p = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            false
        } else {
            self.parent[ra] = rb;
            true
        }
    }
}

/// Fixed-size attachment buffer used while building edges.
#[derive(Clone, Copy)]
struct EndBuf {
    ends: [Attach; 2],
    n: u8,
}

impl EndBuf {
    fn new() -> Self {
        EndBuf {
            ends: [Attach::Boundary { pos: 0 }; 2],
            n: 0,
        }
    }
    fn with(first: Attach) -> Self {
        let mut b = Self::new();
        b.push(first);
        b
    }
    fn push(&mut self, a: Attach) {
        self.ends[self.n as usize] = a;
        self.n += 1;
    }
}

impl PlanarDiagram {
    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_attachments(&self, edge: usize) -> [Attach; 2] {
        self.edges[edge]
    }

    pub fn endpoints(&self) -> &[usize] {
        &self.endpoints
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn is_closed(&self) -> bool {
        self.endpoints.is_empty()
    }

    /// Builds the open plat diagram: word applied top to bottom, bottom
    /// capped by the tangle's matching, 2n open endpoints on top.
    pub fn build_plat(plat: &PlatTangle) -> Result<Self, DiagramError> {
        let strands = plat.word.mode.strands();
        let word_len = plat.word.letters.len();
        let mut edges: Vec<EndBuf> = Vec::with_capacity(strands as usize + 2 * word_len);
        let mut crossings: Vec<Crossing> = Vec::with_capacity(word_len);
        let mut endpoints = Vec::with_capacity(strands as usize);
        let mut current: Vec<usize> = Vec::with_capacity(strands as usize);
        for pos in 1..=strands {
            edges.push(EndBuf::with(Attach::Boundary { pos }));
            endpoints.push((pos - 1) as usize);
            current.push((pos - 1) as usize);
        }
        for &letter in &plat.word.letters {
            let (left, right) = plat.word.twist_positions(letter);
            let (li, ri) = (left as usize - 1, right as usize - 1);
            let c = crossings.len();
            let e_left_out = edges.len();
            edges.push(EndBuf::with(Attach::Cross {
                crossing: c,
                slot: 0,
            }));
            let e_right_out = edges.len();
            edges.push(EndBuf::with(Attach::Cross {
                crossing: c,
                slot: 1,
            }));
            edges[current[li]].push(Attach::Cross {
                crossing: c,
                slot: 3,
            });
            edges[current[ri]].push(Attach::Cross {
                crossing: c,
                slot: 2,
            });
            crossings.push(Crossing {
                slots: [e_left_out, e_right_out, current[ri], current[li]],
                over_nw_se: letter.sign > 0,
            });
            current[li] = e_left_out;
            current[ri] = e_right_out;
        }
        let mut d = PlanarDiagram {
            crossings,
            edges: Vec::new(),
            endpoints,
            free_loops: 0,
        };
        let caps: Vec<(usize, usize)> = plat
            .bottom_matching()
            .pairs()
            .iter()
            .map(|&(a, b)| (current[a as usize - 1], current[b as usize - 1]))
            .collect();
        d.finish_edges(edges, &caps);
        Ok(d)
    }

    /// Builds the closed diagram: the plat with its top capped by basis
    /// matching `closure` (the 0_i-closure; plat closure for 4-plats).
    pub fn close(plat: &PlatTangle, closure: usize) -> Result<Self, DiagramError> {
        let pairs = plat.word.mode.pairs();
        let basis = enumerate_matchings(pairs)?;
        if closure == 0 || closure > basis.len() || (pairs == 2 && closure != 2) {
            return Err(DiagramError::BadClosure {
                index: closure,
                pairs,
            });
        }
        let open = Self::build_plat(plat)?;
        Ok(open.glue_top(&basis[closure - 1]))
    }

    /// Caps this diagram's open endpoints with `matching` (positions refer
    /// to boundary order).
    pub fn glue_top(&self, matching: &Matching) -> PlanarDiagram {
        assert_eq!(self.endpoints.len(), matching.points() as usize);
        let mut edges: Vec<EndBuf> = Vec::with_capacity(self.edges.len());
        // boundary attachments disappear into the caps
        for ends in &self.edges {
            let mut buf = EndBuf::new();
            for a in ends {
                if !matches!(a, Attach::Boundary { .. }) {
                    buf.push(*a);
                }
            }
            edges.push(buf);
        }
        let caps: Vec<(usize, usize)> = matching
            .pairs()
            .iter()
            .map(|&(a, b)| {
                (
                    self.endpoints[a as usize - 1],
                    self.endpoints[b as usize - 1],
                )
            })
            .collect();
        let mut d = PlanarDiagram {
            crossings: self.crossings.clone(),
            edges: Vec::new(),
            endpoints: Vec::new(),
            free_loops: self.free_loops,
        };
        d.finish_edges(edges, &caps);
        d
    }

    /// Merges partially-built edges across cap joins, renumbers them, and
    /// rewrites crossing slots. Self-joins close crossing-free circles.
    fn finish_edges(&mut self, edges: Vec<EndBuf>, caps: &[(usize, usize)]) {
        let mut merge = EdgeMerge::new(edges.len());
        for &(a, b) in caps {
            if !merge.union(a, b) {
                self.free_loops += 1;
            }
        }
        let mut class_attach: Vec<EndBuf> = vec![EndBuf::new(); edges.len()];
        for (e, ends) in edges.iter().enumerate() {
            let root = merge.find(e);
            for k in 0..ends.n as usize {
                class_attach[root].push(ends.ends[k]);
            }
        }
        let mut new_id = vec![usize::MAX; edges.len()];
        let mut final_edges: Vec<[Attach; 2]> = Vec::with_capacity(edges.len());
        for (root, attach) in class_attach.iter().enumerate() {
            if attach.n == 0 {
                continue;
            }
            assert_eq!(attach.n, 2, "every surviving edge has two ends");
            new_id[root] = final_edges.len();
            final_edges.push(attach.ends);
        }
        for c in self.crossings.iter_mut() {
            for s in c.slots.iter_mut() {
                *s = new_id[merge.find(*s)];
            }
        }
        for e in self.endpoints.iter_mut() {
            *e = new_id[merge.find(*e)];
        }
        self.edges = final_edges;
    }

    fn passage_is_over(&self, crossing: usize, slot: u8) -> bool {
        let on_nw_se = slot % 2 == 1;
        on_nw_se == self.crossings[crossing].over_nw_se
    }

    /// Follows the strand onto the next edge after entering `crossing` at
    /// `slot`. Returns the next edge and the end index to head toward.
    fn step_through(&self, crossing: usize, slot: u8) -> (usize, usize) {
        let out_slot = (slot + 2) % 4;
        let next_edge = self.crossings[crossing].slots[out_slot as usize];
        let depart = Attach::Cross {
            crossing,
            slot: out_slot,
        };
        let head_end = if self.edges[next_edge][0] == depart {
            1
        } else {
            0
        };
        (next_edge, head_end)
    }

    /// Walks every strand once. Each strand yields (is_closed, over/under
    /// flags of its crossing passages in traversal order).
    fn trace_strands(&self) -> Vec<(bool, Vec<bool>)> {
        let mut visited = vec![false; self.edges.len()];
        let mut strands = Vec::new();
        // open arcs, traced end to end from their boundary endpoints
        for (k, &e) in self.endpoints.iter().enumerate() {
            if visited[e] {
                continue;
            }
            visited[e] = true;
            let here = Attach::Boundary {
                pos: (k + 1) as u8,
            };
            let mut head_end = if self.edges[e][0] == here { 1 } else { 0 };
            let mut edge = e;
            let mut passages = Vec::new();
            loop {
                match self.edges[edge][head_end] {
                    Attach::Boundary { .. } => break,
                    Attach::Cross { crossing, slot } => {
                        passages.push(self.passage_is_over(crossing, slot));
                        let (next_edge, next_end) = self.step_through(crossing, slot);
                        visited[next_edge] = true;
                        edge = next_edge;
                        head_end = next_end;
                    }
                }
            }
            strands.push((false, passages));
        }
        // closed components
        for start in 0..self.edges.len() {
            if visited[start] {
                continue;
            }
            visited[start] = true;
            let mut edge = start;
            let mut head_end = 1usize;
            let mut passages = Vec::new();
            loop {
                match self.edges[edge][head_end] {
                    Attach::Boundary { .. } => unreachable!("boundary edges were traced above"),
                    Attach::Cross { crossing, slot } => {
                        passages.push(self.passage_is_over(crossing, slot));
                        let (next_edge, next_end) = self.step_through(crossing, slot);
                        edge = next_edge;
                        head_end = next_end;
                        if edge == start {
                            break;
                        }
                        visited[edge] = true;
                    }
                }
            }
            strands.push((true, passages));
        }
        strands
    }

    /// Strand components (closed curves plus open arcs) including free loops.
    pub fn component_count(&self) -> usize {
        self.trace_strands().len() + self.free_loops
    }

    /// True when over/under passages alternate along every strand
    /// (cyclically for closed components). Crossing-free diagrams are
    /// alternating.
    pub fn is_alternating(&self) -> bool {
        for (is_closed, passages) in self.trace_strands() {
            if passages.windows(2).any(|w| w[0] == w[1]) {
                return false;
            }
            if is_closed && passages.len() >= 2 && passages[0] == passages[passages.len() - 1] {
                return false;
            }
        }
        true
    }

    /// The dart departing from the given attachment. Dart 2e+k runs along
    /// edge e from attachment k toward attachment 1-k.
    fn dart_leaving(&self, from: Attach) -> usize {
        let edge = match from {
            Attach::Cross { crossing, slot } => self.crossings[crossing].slots[slot as usize],
            Attach::Boundary { pos } => self.endpoints[pos as usize - 1],
        };
        if self.edges[edge][0] == from {
            2 * edge
        } else {
            2 * edge + 1
        }
    }

    /// Faces of the map (disk boundary included for open tangles), as
    /// (face count, face id per dart).
    fn faces(&self) -> (usize, Vec<usize>) {
        let dart_count = 2 * self.edges.len();
        let strands = self.endpoints.len() as u8;
        let mut face = vec![usize::MAX; dart_count];
        let mut faces = 0;
        // next dart in a face orbit: cross the edge, then turn one slot
        // clockwise at the head attachment; boundary endpoints route along
        // the disk boundary to the previous endpoint
        let next = |dart: usize| -> usize {
            let (edge, tail) = (dart / 2, dart % 2);
            let head = self.edges[edge][1 - tail];
            let leave_from = match head {
                Attach::Cross { crossing, slot } => Attach::Cross {
                    crossing,
                    slot: (slot + 3) % 4,
                },
                Attach::Boundary { pos } => Attach::Boundary {
                    pos: if pos == 1 { strands } else { pos - 1 },
                },
            };
            self.dart_leaving(leave_from)
        };
        for d in 0..dart_count {
            if face[d] != usize::MAX {
                continue;
            }
            let mut cur = d;
            loop {
                face[cur] = faces;
                cur = next(cur);
                if cur == d {
                    break;
                }
            }
            faces += 1;
        }
        (faces, face)
    }

    /// True when no crossing is nugatory: a crossing is nugatory exactly
    /// when two of its opposite corner regions coincide.
    pub fn is_reduced(&self) -> bool {
        if self.crossings.is_empty() {
            return true;
        }
        let (_, face) = self.faces();
        // corner k of a crossing (between slots k and k+1) is the face of
        // the dart leaving via slot k
        let corner = |c: usize, k: u8| -> usize {
            face[self.dart_leaving(Attach::Cross {
                crossing: c,
                slot: k,
            })]
        };
        for c in 0..self.crossings.len() {
            if corner(c, 0) == corner(c, 2) || corner(c, 1) == corner(c, 3) {
                return false;
            }
        }
        true
    }

    #[cfg(test)]
    pub(crate) fn face_count(&self) -> usize {
        self.faces().0
    }

    /// True when the diagram is not split: one piece, no detached circles.
    pub fn is_connected(&self) -> bool {
        if self.edges.is_empty() {
            return self.free_loops == 1;
        }
        if self.free_loops > 0 {
            return false;
        }
        let mut merge = EdgeMerge::new(self.edges.len());
        for c in &self.crossings {
            for s in 1..4 {
                merge.union(c.slots[0], c.slots[s]);
            }
        }
        let root = merge.find(0);
        (1..self.edges.len()).all(|e| merge.find(e) == root)
    }

    /// Writhe under the canonical orientation (each component oriented by
    /// first traversal from its lowest-numbered edge). Closed diagrams only.
    pub fn writhe(&self) -> Result<i64, DiagramError> {
        if !self.endpoints.is_empty() {
            return Err(DiagramError::OpenDiagram(self.endpoints.len()));
        }
        // exit slot of each oriented strand passage: [over_exit, under_exit]
        let mut exits: Vec<[Option<u8>; 2]> = vec![[None, None]; self.crossings.len()];
        let mut visited = vec![false; self.edges.len()];
        for start in 0..self.edges.len() {
            if visited[start] {
                continue;
            }
            visited[start] = true;
            let mut edge = start;
            let mut head_end = 1usize;
            loop {
                match self.edges[edge][head_end] {
                    Attach::Boundary { .. } => unreachable!("closed diagram"),
                    Attach::Cross { crossing, slot } => {
                        let out_slot = (slot + 2) % 4;
                        let over = self.passage_is_over(crossing, slot);
                        exits[crossing][if over { 0 } else { 1 }] = Some(out_slot);
                        let (next_edge, next_end) = self.step_through(crossing, slot);
                        edge = next_edge;
                        head_end = next_end;
                        if edge == start {
                            break;
                        }
                        visited[edge] = true;
                    }
                }
            }
        }
        let mut w = 0i64;
        for [over_exit, under_exit] in exits {
            let (p, q) = (
                over_exit.expect("both strands traversed"),
                under_exit.expect("both strands traversed"),
            );
            // +1 when the under-strand exits one slot clockwise of the over
            w += if q == (p + 3) % 4 { 1 } else { -1 };
        }
        Ok(w)
    }

    /// PD-code-style export: one line per crossing with its four edge ids in
    /// ccw slot order (SW, SE, NE, NW) and the over-strand slot pair.
    pub fn pd_lines(&self) -> Vec<String> {
        self.crossings
            .iter()
            .map(|c| {
                let over = if c.over_nw_se { "3-1" } else { "2-0" };
                format!(
                    "X[{},{},{},{}] over {}",
                    c.slots[0], c.slots[1], c.slots[2], c.slots[3], over
                )
            })
            .collect()
    }
}

impl fmt::Debug for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PlanarDiagram({} crossings, {} edges, {} endpoints, {} loops)",
            self.crossings.len(),
            self.edges.len(),
            self.endpoints.len(),
            self.free_loops
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{BraidWord, Mode};

    fn plat(word: &str, mode: Mode, bottom: usize) -> PlatTangle {
        PlatTangle::new(BraidWord::parse(word, mode).unwrap(), bottom).unwrap()
    }

    #[test]
    fn empty_plat_shapes() {
        let d = PlanarDiagram::build_plat(&plat("e", Mode::B6, 3)).unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.endpoints().len(), 6);
        assert_eq!(d.edge_count(), 3);
        assert_eq!(d.component_count(), 3);
        let d = PlanarDiagram::build_plat(&plat("s1", Mode::B4Standard, 2)).unwrap();
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.endpoints().len(), 4);
        let d = PlanarDiagram::build_plat(&plat("s1 s2^-1 s1 s2", Mode::B4Standard, 2)).unwrap();
        assert_eq!(d.crossing_count(), 4);
    }

    #[test]
    fn closing_empty_plat_gives_unlink() {
        let d = PlanarDiagram::close(&plat("e", Mode::B6, 3), 3).unwrap();
        assert!(d.is_closed());
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.free_loops(), 3);
        assert_eq!(d.component_count(), 3);
        assert_eq!(d.writhe().unwrap(), 0);
        // gluing 0_1 = {(1,6),(2,3),(4,5)} onto bottom 3 gives one circle
        let d = PlanarDiagram::close(&plat("e", Mode::B6, 3), 1).unwrap();
        assert_eq!(d.component_count(), 1);
    }

    #[test]
    fn trefoil_closure() {
        let d = PlanarDiagram::close(&plat("s1 s2^-1 s1", Mode::B4Standard, 2), 2).unwrap();
        assert!(d.is_closed());
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.component_count(), 1);
        assert!(d.is_alternating());
        assert!(d.is_reduced());
        assert_eq!(d.writhe().unwrap().abs(), 3);
        // Euler: connected, V=3, E=6 gives F=5
        assert_eq!(d.face_count(), 5);
    }

    #[test]
    fn alternation_from_traversal() {
        let alt = PlanarDiagram::build_plat(&plat("s1 s2^-1 s1", Mode::B4Standard, 2)).unwrap();
        assert!(alt.is_alternating());
        let not_alt = PlanarDiagram::build_plat(&plat("s1 s2", Mode::B4Standard, 2)).unwrap();
        assert!(!not_alt.is_alternating());
        let zero = PlanarDiagram::build_plat(&plat("e", Mode::B6, 3)).unwrap();
        assert!(zero.is_alternating());
    }

    #[test]
    fn kinks_are_not_reduced() {
        // s2 over the standard 4-plat caps twists two capped points: a kink
        let d = PlanarDiagram::build_plat(&plat("s2", Mode::B4Standard, 2)).unwrap();
        assert!(!d.is_reduced());
        // word ending in s2 keeps the kink in the closure as well
        let d = PlanarDiagram::close(&plat("s1 s2^-1 s1 s2", Mode::B4Standard, 2), 2).unwrap();
        assert!(!d.is_reduced());
        let d = PlanarDiagram::close(&plat("s1 s2^-1 s1", Mode::B4Standard, 2), 2).unwrap();
        assert!(d.is_reduced());
    }

    #[test]
    fn writhe_mirror_negates() {
        let d = PlanarDiagram::close(&plat("s1 s2^-1 s1", Mode::B4Standard, 2), 2).unwrap();
        let m = PlanarDiagram::close(&plat("s1^-1 s2 s1^-1", Mode::B4Standard, 2), 2).unwrap();
        assert_eq!(d.writhe().unwrap(), -m.writhe().unwrap());
        let open = PlanarDiagram::build_plat(&plat("s1", Mode::B4Standard, 2)).unwrap();
        assert!(matches!(open.writhe(), Err(DiagramError::OpenDiagram(4))));
    }

    #[test]
    fn wraparound_letter_builds_consistently() {
        let d = PlanarDiagram::build_plat(&plat("s6", Mode::B6Extended, 3)).unwrap();
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.endpoints().len(), 6);
        let closed = PlanarDiagram::close(&plat("s6", Mode::B6Extended, 3), 3).unwrap();
        // s6 ties the (1,2) and (5,6) caps into one component; (3,4) splits off
        assert_eq!(closed.component_count(), 2);
    }

    #[test]
    fn plat_validation() {
        let e6 = BraidWord::parse("e", Mode::B6).unwrap();
        assert!(PlatTangle::new(e6, 6).is_err());
        let e4 = BraidWord::parse("e", Mode::B4Standard).unwrap();
        assert!(PlatTangle::new(e4.clone(), 1).is_err());
        assert!(PlatTangle::new(e4, 2).is_ok());
    }
}
