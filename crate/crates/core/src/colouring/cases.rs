//! Candidate plans for one component, following the case split on the
//! special configurations A_ℓ, A_{ℓ−1} and B_j.
//!
//! Wherever the argument picks "w.l.o.g." a start cycle, an orientation or a
//! path, every admissible choice becomes a candidate, in a fixed order. The
//! caller keeps the first candidate that passes [`super::plan::execute`].
//! Structural claims that fail are recorded as notes and drop the candidate.

use std::collections::BTreeSet;

use crate::cycles::{
    enumerate_cycles, paths_between, Census, Configuration, ConstructionSequence, Cycle,
    SequenceBuilder,
};
use crate::graph::{Edge, EdgeSet, Graph};

use super::plan::Plan;

const MAX_DEPTH: usize = 4;

fn e(a: usize, b: usize) -> Edge {
    Edge::new(a, b)
}

/// The two alternating classes of an even cycle.
fn alternate(c: &Cycle) -> (Vec<Edge>, Vec<Edge>) {
    let edges = c.edges();
    let even = edges.iter().step_by(2).copied().collect();
    let odd = edges.iter().skip(1).step_by(2).copied().collect();
    (even, odd)
}

fn path_edges(p: &[usize]) -> Vec<Edge> {
    p.windows(2).map(|w| e(w[0], w[1])).collect()
}

fn set(edges: &[Edge]) -> BTreeSet<Edge> {
    edges.iter().copied().collect()
}

fn skip(qs: &[usize]) -> BTreeSet<usize> {
    qs.iter().copied().collect()
}

pub(crate) struct Planner<'a> {
    ell: usize,
    bound: usize,
    members: &'a [Cycle],
    notes: Vec<String>,
    seen: BTreeSet<Vec<Cycle>>,
}

/// Multiplicities of the special configurations.
fn shape(seq: &ConstructionSequence) -> [usize; 4] {
    let c = Census::of(seq);
    [
        c.a_ell.len(),
        c.a_ell_minus_1.len(),
        c.b.len(),
        c.unclassified.len(),
    ]
}

impl<'a> Planner<'a> {
    pub fn new(ell: usize, bound: usize, members: &'a [Cycle]) -> Self {
        Planner {
            ell,
            bound,
            members,
            notes: Vec::new(),
            seen: BTreeSet::new(),
        }
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    fn note(&mut self, s: impl Into<String>) {
        let s = s.into();
        if !self.notes.contains(&s) {
            self.notes.push(s);
        }
    }

    /// Candidate plans for `seq`, dispatched on its configuration census.
    /// A reordered sequence whose census differs from that of `seq` is
    /// dispatched again.
    pub fn plans(&mut self, seq: &ConstructionSequence, depth: usize) -> Vec<Plan> {
        if depth > MAX_DEPTH {
            self.note("re-dispatch depth exceeded");
            return Vec::new();
        }
        if !self.seen.insert(seq.cycles().cloned().collect()) {
            return Vec::new();
        }
        let mut out = self.dispatch(seq, depth);
        let here = shape(seq);
        let moved: Vec<ConstructionSequence> = out
            .iter()
            .filter(|p| shape(&p.seq) != here)
            .map(|p| p.seq.clone())
            .collect();
        for s in moved {
            out.extend(self.plans(&s, depth + 1));
        }
        out
    }

    fn dispatch(&mut self, seq: &ConstructionSequence, depth: usize) -> Vec<Plan> {
        if seq.steps.is_empty() {
            return vec![Plan::default_rule("single cycle", seq.clone())];
        }
        let census = Census::of(seq);
        if !census.unclassified.is_empty() {
            self.note(format!(
                "steps {:?} match no configuration",
                census.unclassified
            ));
            return Vec::new();
        }
        let violations = census.violations(self.ell);
        if !violations.is_empty() {
            violations
                .into_iter()
                .for_each(|v| self.note(format!("census bound violated: {v}")));
            return Vec::new();
        }
        if let Some(&q) = census.b.first() {
            return self.case_b(seq, q, depth);
        }
        if let Some(&q) = census.a_ell.first() {
            return self.case_a_ell(seq, q);
        }
        match census.a_ell_minus_1[..] {
            [q1, q2] => self.case_two_a_ell_minus_1(seq, q1, q2, depth),
            [q] => self.case_a_ell_minus_1(seq, q),
            _ => vec![Plan::default_rule("default", seq.clone())],
        }
    }

    fn labelling(seq: &ConstructionSequence, q: usize) -> Vec<usize> {
        seq.config(q).expect("classified step").labelling().to_vec()
    }

    /// H_q: the union of the cycles before index `q`.
    fn before(&self, seq: &ConstructionSequence, q: usize) -> Graph {
        seq.prefix_graph(self.bound, q - 1)
    }

    fn within(&self, h: &Graph) -> Vec<Cycle> {
        self.members
            .iter()
            .filter(|c| c.is_subgraph_of(h))
            .cloned()
            .collect()
    }

    fn graph_of(&self, edges: &[Edge]) -> Graph {
        Graph::spanned_by(self.bound, edges.iter())
    }

    /// Same H_q built from `leading` first, followed by the original cycles
    /// from index `q` on. Returns the new sequence and the new index of the
    /// cycle that was at `q`.
    fn rebuild_prefix(
        &self,
        seq: &ConstructionSequence,
        q: usize,
        leading: &[Cycle],
    ) -> Option<(ConstructionSequence, usize)> {
        let target = self.before(seq, q);
        if !leading.iter().all(|c| c.is_subgraph_of(&target)) {
            return None;
        }
        let mut b = SequenceBuilder::new(self.bound, leading[0].clone());
        for c in &leading[1..] {
            b.push(c.clone()).ok()?;
        }
        b.complete_from(&self.within(&target), |_| true);
        if b.edges() != target.edges() {
            return None;
        }
        let new_q = b.cycle_count();
        for r in q..seq.cycle_count() {
            b.push_if_new(seq.cycle(r)).ok()?;
        }
        Some((b.finish(), new_q))
    }

    /// A sequence starting with `leading`, completed greedily.
    fn rebuild_front(
        &self,
        seq: &ConstructionSequence,
        leading: &[Cycle],
    ) -> Option<ConstructionSequence> {
        let mut b = SequenceBuilder::new(self.bound, leading[0].clone());
        for c in &leading[1..] {
            b.push(c.clone()).ok()?;
        }
        b.complete_from(self.members, |_| true);
        let out = b.finish();
        (out.union_edges() == seq.union_edges()).then_some(out)
    }

    /// Sequences opening with D1, D2: first with C right after them, then
    /// with the rest of H_q in between. Each comes with the index of C.
    fn theta_orders(
        &self,
        seq: &ConstructionSequence,
        q: usize,
        d1: &Cycle,
        d2: &Cycle,
        c: &Cycle,
    ) -> Vec<(ConstructionSequence, usize)> {
        let mut out = Vec::new();
        if let Some(s) = self.rebuild_front(seq, &[d1.clone(), d2.clone(), c.clone()]) {
            out.push((s, 2));
        }
        if let Some(found) = self.rebuild_prefix(seq, q, &[d1.clone(), d2.clone()]) {
            if !out.contains(&found) {
                out.push(found);
            }
        }
        out
    }

    fn tag_is(&mut self, seq: &ConstructionSequence, q: usize, want: &str, context: &str) -> bool {
        let got = seq
            .config(q)
            .map(|c| c.tag())
            .unwrap_or_else(|| "none".into());
        if got != want {
            self.note(format!(
                "{context}: expected configuration {want} at step {q}, found {got}"
            ));
            return false;
        }
        true
    }

    /// Ordered pairs (D1, D2) of member cycles inside `h` sharing exactly
    /// `shared` edges whose symmetric difference is `target`.
    fn theta_pairs(&self, h: &Graph, target: &EdgeSet, shared: usize) -> Vec<(Cycle, Cycle)> {
        let inside = self.within(h);
        let mut out = Vec::new();
        for a in &inside {
            for b in &inside {
                if a == b || a.edge_set().intersection(b.edge_set()).count() != shared {
                    continue;
                }
                let diff: EdgeSet = a
                    .edge_set()
                    .symmetric_difference(b.edge_set())
                    .copied()
                    .collect();
                if &diff == target {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    /// Cycles of each requested length inside P ∪ P' over all pairs of
    /// distinct paths, each with the overlaps |E(P) ∩ E(C')| and |E(P') ∩ E(C')|.
    fn cycles_in_path_unions(
        &self,
        paths: &[Vec<usize>],
        lengths: &[usize],
    ) -> Vec<Vec<(Cycle, [usize; 2])>> {
        let mut out: Vec<Vec<(Cycle, [usize; 2])>> = vec![Vec::new(); lengths.len()];
        for (i, p) in paths.iter().enumerate() {
            for other in &paths[i + 1..] {
                let (a, b) = (set(&path_edges(p)), set(&path_edges(other)));
                let union: Vec<Edge> = a.union(&b).copied().collect();
                let union = self.graph_of(&union);
                for (slot, &len) in lengths.iter().enumerate() {
                    for c in enumerate_cycles(&union, len).expect("length at least 3") {
                        if !out[slot].iter().any(|(d, _)| *d == c) {
                            let overlap = [
                                c.edge_set().intersection(&a).count(),
                                c.edge_set().intersection(&b).count(),
                            ];
                            out[slot].push((c, overlap));
                        }
                    }
                }
            }
        }
        out
    }

    /// One A_ℓ step at cycle index `q`.
    fn case_a_ell(&mut self, seq: &ConstructionSequence, q: usize) -> Vec<Plan> {
        let ell = self.ell;
        let u = Self::labelling(seq, q);
        let h = self.before(seq, q);
        let e_star = e(u[ell - 1], u[0]);
        let paths = paths_between(&h, u[0], u[ell - 1], ell);
        if !paths.contains(&u) {
            self.note("A_ell labelling path missing from H");
            return Vec::new();
        }
        let mut plans = Vec::new();
        if paths.len() == 1 {
            let mirrored: Vec<usize> = u.iter().rev().copied().collect();
            for lab in [&u, &mirrored] {
                let f = e(lab[1], lab[2]);
                for start in self
                    .within(&h)
                    .into_iter()
                    .filter(|c| c.edge_set().contains(&f))
                {
                    if let Some((s, nq)) = self.rebuild_prefix(seq, q, &[start]) {
                        plans.push(Plan {
                            label: "A_ell, unique path".into(),
                            seq: s,
                            groups: vec![vec![e_star, f]],
                            skip: skip(&[nq]),
                            reserved: set(&[f]),
                        });
                    }
                }
            }
            return plans;
        }
        let found = self.cycles_in_path_unions(&paths, &[2 * ell - 2, 2 * ell - 4, ell]);
        if found.iter().all(|f| f.is_empty()) {
            self.note("A_ell: no cycle of length 2l-2, 2l-4 or l in P and another path");
        }
        let c = seq.cycle(q).clone();
        for (slot, shared, want) in [(0, 1, "A2"), (1, 2, "A3")] {
            for (outer, _) in &found[slot] {
                for (d1, d2) in self.theta_pairs(&h, outer.edge_set(), shared) {
                    for (s, nq) in self.theta_orders(seq, q, &d1, &d2, &c) {
                        if !self.tag_is(&s, 1, want, "A_ell theta") {
                            continue;
                        }
                        let (x, y) = alternate(outer);
                        let groups = if slot == 0 { vec![x] } else { vec![x, y] };
                        plans.push(Plan {
                            label: format!("A_ell, {}-cycle", outer.len()),
                            seq: s,
                            groups,
                            skip: skip(&[1, nq]),
                            reserved: EdgeSet::new(),
                        });
                    }
                }
            }
        }
        for (outer, overlap) in &found[2] {
            if ell % 2 == 1 || overlap.iter().any(|&o| o != ell / 2) {
                self.note(format!(
                    "A_ell: l-cycle {outer} in P and P' with l = {ell}, overlaps {overlap:?}"
                ));
                continue;
            }
            if let Some((s, nq)) = self.rebuild_prefix(seq, q, std::slice::from_ref(outer)) {
                let (x, y) = alternate(outer);
                plans.push(Plan {
                    label: "A_ell, l-cycle".into(),
                    seq: s,
                    groups: vec![x, y],
                    skip: skip(&[nq]),
                    reserved: EdgeSet::new(),
                });
            }
        }
        plans
    }

    /// Exactly one A_{ℓ−1} step at cycle index `q`.
    fn case_a_ell_minus_1(&mut self, seq: &ConstructionSequence, q: usize) -> Vec<Plan> {
        let ell = self.ell;
        let u = Self::labelling(seq, q);
        let p = u[..ell - 1].to_vec();
        let h = self.before(seq, q);
        let paths = paths_between(&h, u[0], u[ell - 2], ell - 1);
        if !paths.contains(&p) {
            self.note("A_(l-1) labelling path missing from H");
            return Vec::new();
        }
        let mut plans = Vec::new();
        if paths.len() == 1 {
            let mut mirrored: Vec<usize> = p.iter().rev().copied().collect();
            mirrored.push(u[ell - 1]);
            for lab in [&u, &mirrored] {
                let f = e(lab[1], lab[2]);
                let closing = e(lab[ell - 1], lab[0]);
                for start in self
                    .within(&h)
                    .into_iter()
                    .filter(|c| c.edge_set().contains(&f))
                {
                    if let Some((s, nq)) = self.rebuild_prefix(seq, q, &[start]) {
                        plans.push(Plan {
                            label: "A_(l-1), unique path".into(),
                            seq: s,
                            groups: vec![vec![closing, f]],
                            skip: skip(&[nq]),
                            reserved: set(&[f]),
                        });
                    }
                }
            }
            return plans;
        }
        let found = self.cycles_in_path_unions(&paths, &[2 * ell - 4, 2 * ell - 6, ell]);
        if found.iter().all(|f| f.is_empty()) {
            self.note("A_(l-1): no cycle of length 2l-4, 2l-6 or l in P and another path");
        }
        let c = seq.cycle(q).clone();
        for (slot, shared, want) in [(0, 2, "A3"), (1, 3, "A4")] {
            for (outer, _) in &found[slot] {
                for (d1, d2) in self.theta_pairs(&h, outer.edge_set(), shared) {
                    let spine: Vec<Edge> =
                        d1.edge_set().intersection(d2.edge_set()).copied().collect();
                    for (s, nq) in self.theta_orders(seq, q, &d1, &d2, &c) {
                        if !self.tag_is(&s, 1, want, "A_(l-1) theta") {
                            continue;
                        }
                        let (x, y) = alternate(outer);
                        let mut variants = vec![vec![x.clone(), y.clone()]];
                        if slot == 1 {
                            // end edges of the shared 3-edge path get a third colour
                            let ends: Vec<Edge> = spine
                                .iter()
                                .copied()
                                .filter(|a| {
                                    spine.iter().filter(|b| a.is_adjacent_to(**b)).count() == 1
                                })
                                .collect();
                            variants.insert(0, vec![x, y, ends]);
                        }
                        for groups in variants {
                            plans.push(Plan {
                                label: format!("A_(l-1), {}-cycle", outer.len()),
                                seq: s.clone(),
                                groups,
                                skip: skip(&[1, nq]),
                                reserved: EdgeSet::new(),
                            });
                        }
                    }
                }
            }
        }
        for (outer, _) in &found[2] {
            if ell % 2 == 1 {
                self.note(format!("A_(l-1): odd l-cycle {outer} in P and P'"));
                continue;
            }
            if let Some((s, nq)) = self.rebuild_prefix(seq, q, std::slice::from_ref(outer)) {
                let (x, y) = alternate(outer);
                plans.push(Plan {
                    label: "A_(l-1), l-cycle".into(),
                    seq: s,
                    groups: vec![x, y],
                    skip: skip(&[nq]),
                    reserved: EdgeSet::new(),
                });
            }
        }
        plans
    }

    /// One B_j step at cycle index `q`.
    fn case_b(&mut self, seq: &ConstructionSequence, q: usize, depth: usize) -> Vec<Plan> {
        let ell = self.ell;
        let Some(Configuration::B { j, labelling: u }) = seq.config(q).cloned() else {
            unreachable!()
        };
        let h = self.before(seq, q);
        let mut bypasses: Vec<(Cycle, usize, usize)> = Vec::new();
        for p in paths_between(&h, u[0], u[j - 1], j) {
            let mut vs = p;
            vs.extend_from_slice(&u[j..]);
            bypasses.push((Cycle::new(vs), j, ell - j + 3));
        }
        for p in paths_between(&h, u[1], u[j - 1], ell - j + 3) {
            let mut vs = p;
            vs.extend(u[2..j - 1].iter().rev());
            bypasses.push((Cycle::new(vs), ell - j + 3, j));
        }
        if bypasses.is_empty() {
            return vec![Plan {
                label: format!("B{j}"),
                seq: seq.clone(),
                groups: vec![vec![e(u[1], u[2]), e(u[ell - 1], u[0])]],
                skip: skip(&[q]),
                reserved: EdgeSet::new(),
            }];
        }
        let mut plans = Vec::new();
        for (d, k_d, k_c) in bypasses {
            if !self.members.contains(&d) {
                self.note(format!("B{j}: bypass cycle {d} is not a member"));
                continue;
            }
            let mut b = SequenceBuilder::new(self.bound, seq.start.clone());
            let built = (1..q)
                .try_for_each(|r| b.push(seq.cycle(r).clone()))
                .is_ok()
                && b.push(d).is_ok()
                && b.push(seq.cycle(q).clone()).is_ok()
                && (q + 1..seq.cycle_count())
                    .try_for_each(|r| b.push_if_new(seq.cycle(r)))
                    .is_ok();
            if !built {
                self.note(format!(
                    "B{j}: bypass does not yield a construction sequence"
                ));
                continue;
            }
            let s = b.finish();
            if !self.tag_is(&s, q, &format!("A{k_d}"), "B bypass")
                || !self.tag_is(&s, q + 1, &format!("A{k_c}"), "B bypass")
            {
                continue;
            }
            plans.extend(self.plans(&s, depth + 1));
        }
        plans
    }

    /// Two A_4 steps (ℓ = 5) at cycle indices `q1 < q2`.
    fn case_two_a_ell_minus_1(
        &mut self,
        seq: &ConstructionSequence,
        q1: usize,
        q2: usize,
        depth: usize,
    ) -> Vec<Plan> {
        if self.ell != 5 {
            self.note(format!("two A_(l-1) steps with l = {}", self.ell));
            return Vec::new();
        }
        let u = Self::labelling(seq, q1);
        let h1 = self.before(seq, q1);
        let p = path_edges(&u[..4]);
        let inside = self.within(&h1);
        let holds = |c: &Cycle, es: &[Edge]| es.iter().all(|x| c.edge_set().contains(x));
        let all_three: Vec<Cycle> = inside.iter().filter(|c| holds(c, &p)).cloned().collect();
        if !all_three.is_empty() {
            return self.two_a4_all_in_one(seq, q1, &u, &all_three, depth);
        }
        let two: Vec<Cycle> = inside
            .iter()
            .filter(|c| holds(c, &p[..2]) || holds(c, &p[1..]))
            .cloned()
            .collect();
        if !two.is_empty() {
            return self.two_a4_two_in_one(seq, q1, &u, &two, depth);
        }
        let _ = q2;
        self.two_a4_spread(seq, q1, &u, &inside, depth)
    }

    /// Re-derives the pair of A_4 indices after a rebuild, or re-dispatches.
    fn a4_pair(
        &mut self,
        s: &ConstructionSequence,
        depth: usize,
        plans: &mut Vec<Plan>,
    ) -> Option<(usize, usize)> {
        let census = Census::of(s);
        match census.a_ell_minus_1[..] {
            [a, b] if census.unclassified.is_empty() => Some((a, b)),
            _ => {
                plans.extend(self.plans(s, depth + 1));
                None
            }
        }
    }

    /// All three edges of P lie in one 5-cycle X.
    fn two_a4_all_in_one(
        &mut self,
        seq: &ConstructionSequence,
        q1: usize,
        u: &[usize],
        xs: &[Cycle],
        depth: usize,
    ) -> Vec<Plan> {
        let mut plans = Vec::new();
        let c = seq.cycle(q1).clone();
        for x in xs {
            let x5 = *x
                .vertices()
                .iter()
                .find(|v| !u[..4].contains(v))
                .expect("fifth vertex");
            let Some(s) = self.rebuild_front(seq, &[x.clone(), c.clone()]) else {
                continue;
            };
            if !self.tag_is(&s, 1, "A4", "two A4 (a)") {
                continue;
            }
            let Some((a, b)) = self.a4_pair(&s, depth, &mut plans) else {
                continue;
            };
            let q2 = if a == 1 { b } else { a };
            let v = Self::labelling(&s, q2);
            let h2 = self.before(&s, 2);
            let p2 = path_edges(&v[..4]);
            if p2.iter().all(|&x| h2.contains_edge(x)) {
                let Some(s2) = self.rebuild_front(&s, &[x.clone(), c.clone(), s.cycle(q2).clone()])
                else {
                    continue;
                };
                if !self.tag_is(&s2, 2, "A4", "two A4 (a)") {
                    continue;
                }
                let v = Self::labelling(&s2, 2);
                for groups in self.two_a4_inside_h2(u, x5, &v) {
                    plans.push(Plan {
                        label: "two A4 (a), P' in H_2".into(),
                        seq: s2.clone(),
                        groups,
                        skip: skip(&[1, 2]),
                        reserved: EdgeSet::new(),
                    });
                }
            } else {
                let c1 = vec![e(u[0], u[1]), e(u[2], u[3])];
                for w in [v.clone(), vec![v[3], v[2], v[1], v[0], v[4]]] {
                    let tail = e(w[2], w[3]);
                    if h2.contains_edge(tail) {
                        continue;
                    }
                    plans.push(Plan {
                        label: "two A4 (a), P' outside H_2".into(),
                        seq: s.clone(),
                        groups: vec![c1.clone(), vec![tail, e(w[4], w[0])]],
                        skip: skip(&[1, q2]),
                        reserved: set(&[tail]),
                    });
                }
            }
        }
        plans
    }

    /// Colour classes when P' lies in H_2 = X ∪ C, by the ends of P'.
    fn two_a4_inside_h2(&mut self, u: &[usize], x5: usize, v: &[usize]) -> Vec<Vec<Vec<Edge>>> {
        let ends: BTreeSet<usize> = [v[0], v[3]].into_iter().collect();
        let is = |a: usize, b: usize| ends == [a, b].into_iter().collect();
        let v5 = v[4];
        let crossing = |w: &[usize]| {
            vec![
                vec![e(w[3], x5), e(w[0], w[1]), e(w[2], v5)],
                vec![e(w[1], w[2]), e(w[3], w[4]), e(v5, w[0])],
            ]
        };
        if is(u[0], u[2]) {
            return vec![crossing(u)];
        }
        if is(u[1], u[3]) {
            return vec![crossing(&[u[3], u[2], u[1], u[0], u[4]])];
        }
        let c1 = vec![e(u[0], u[1]), e(u[2], u[3])];
        let c4 = [u[0], x5, u[3], u[4]];
        if (0..4).any(|i| is(c4[i], c4[(i + 1) % 4])) {
            let cp = Cycle::new(v.to_vec()).edges();
            let mut out = Vec::new();
            for (i, &a) in cp.iter().enumerate() {
                for &b in &cp[i + 1..] {
                    if !a.is_adjacent_to(b) && !c1.contains(&a) && !c1.contains(&b) {
                        out.push(vec![c1.clone(), vec![a, b]]);
                    }
                }
            }
            return out;
        }
        if is(u[0], u[3]) {
            return vec![vec![c1]];
        }
        for mid in [u[1], u[2]] {
            if is(x5, mid) {
                return vec![vec![c1, vec![e(v5, x5), e(u[1], u[2])]]];
            }
            if is(u[4], mid) {
                return vec![vec![c1, vec![e(v5, u[4]), e(u[1], u[2])]]];
            }
        }
        self.note(format!("two A4 (a): unexpected ends {:?} of P'", ends));
        Vec::new()
    }

    /// Exactly two consecutive edges of P lie in one 5-cycle X.
    fn two_a4_two_in_one(
        &mut self,
        seq: &ConstructionSequence,
        q1: usize,
        u: &[usize],
        xs: &[Cycle],
        depth: usize,
    ) -> Vec<Plan> {
        let mut plans = Vec::new();
        for x in xs {
            let w: Vec<usize> = if x.edge_set().contains(&e(u[0], u[1])) {
                u.to_vec()
            } else {
                vec![u[3], u[2], u[1], u[0], u[4]]
            };
            let xv = x.vertices();
            let at = |v: usize| xv.iter().position(|&y| y == v).unwrap();
            let nbrs = |v: usize| [xv[(at(v) + 1) % 5], xv[(at(v) + 4) % 5]];
            let x4 = *nbrs(w[2]).iter().find(|&&y| y != w[1]).unwrap();
            let x5 = *nbrs(w[0]).iter().find(|&&y| y != w[1]).unwrap();
            if !x.edge_set().contains(&e(x4, x5)) {
                self.note("two A4 (b): X is not u1 u2 u3 x4 x5");
                continue;
            }
            let Some((s, nq1)) = self.rebuild_prefix(seq, q1, std::slice::from_ref(x)) else {
                continue;
            };
            let Some((a, b)) = self.a4_pair(&s, depth, &mut plans) else {
                continue;
            };
            if a != nq1 {
                self.note("two A4 (b): first A4 moved");
                continue;
            }
            let v = Self::labelling(&s, b);
            let p2 = path_edges(&v[..4]);
            let hexagon = Cycle::new(vec![w[0], x5, x4, w[2], w[3], w[4]]);
            let steps = skip(&[a, b]);
            if p2.iter().all(|y| hexagon.edge_set().contains(y)) {
                let (even, odd) = alternate(&hexagon);
                plans.push(Plan {
                    label: "two A4 (b), P' in C''".into(),
                    seq: s.clone(),
                    groups: vec![even, odd],
                    skip: steps.clone(),
                    reserved: set(&[e(w[2], w[3])]),
                });
            } else if p2.iter().all(|y| x.edge_set().contains(y)) {
                plans.push(Plan {
                    label: "two A4 (b), P' in H_1".into(),
                    seq: s.clone(),
                    groups: vec![vec![e(w[3], w[4]), p2[0], p2[2]]],
                    skip: steps.clone(),
                    reserved: EdgeSet::new(),
                });
            } else {
                for jj in 0..3 {
                    let out = p2[jj];
                    if x.edge_set().contains(&out) {
                        continue;
                    }
                    let mut firsts = vec![e(w[4], w[0]), e(w[4], w[3])];
                    firsts.sort();
                    for e1 in firsts.into_iter().filter(|&y| y != out) {
                        for e2 in [e(v[4], v[0]), e(v[4], v[3])] {
                            if e2.touches(v[jj]) || e2.touches(v[jj + 1]) {
                                continue;
                            }
                            plans.push(Plan {
                                label: "two A4 (b), P' leaves H_1".into(),
                                seq: s.clone(),
                                groups: vec![vec![e(w[1], w[2]), e(x4, x5), e1], vec![out, e2]],
                                skip: steps.clone(),
                                reserved: EdgeSet::new(),
                            });
                        }
                    }
                }
            }
        }
        plans
    }

    /// Every 5-cycle of H meets P in at most one edge.
    fn two_a4_spread(
        &mut self,
        seq: &ConstructionSequence,
        q1: usize,
        u: &[usize],
        inside: &[Cycle],
        depth: usize,
    ) -> Vec<Plan> {
        let mut plans = Vec::new();
        let mid = e(u[1], u[2]);
        let p_set = set(&path_edges(&u[..4]));
        for x in inside.iter().filter(|c| c.edge_set().contains(&mid)) {
            let Some((s, nq1)) = self.rebuild_prefix(seq, q1, std::slice::from_ref(x)) else {
                continue;
            };
            let Some((a, b)) = self.a4_pair(&s, depth, &mut plans) else {
                continue;
            };
            if a != nq1 {
                self.note("two A4 (c): first A4 moved");
                continue;
            }
            let v = Self::labelling(&s, b);
            let h2 = self.before(&s, b);
            if paths_between(&h2, v[0], v[3], 4).len() != 1 {
                self.note("two A4 (c): P' is not the only 4-path between its ends");
                continue;
            }
            let steps = skip(&[a, b]);
            if set(&path_edges(&v[..4])) == p_set {
                plans.push(Plan {
                    label: "two A4 (c), P' = P".into(),
                    seq: s.clone(),
                    groups: vec![vec![mid, e(u[4], u[0]), e(v[4], u[3])]],
                    skip: steps,
                    reserved: EdgeSet::new(),
                });
                continue;
            }
            for w in [v.clone(), vec![v[3], v[2], v[1], v[0], v[4]]] {
                if [u[0], u[1], u[3]].contains(&w[0]) {
                    continue;
                }
                let mut c1 = vec![mid, e(u[4], u[0])];
                let f = e(w[1], w[2]);
                let groups = if c1.contains(&f) {
                    c1.push(e(w[4], w[0]));
                    vec![c1]
                } else {
                    vec![c1, vec![f, e(w[4], w[0])]]
                };
                plans.push(Plan {
                    label: "two A4 (c)".into(),
                    seq: s.clone(),
                    groups,
                    skip: steps.clone(),
                    reserved: set(&[f]),
                });
            }
        }
        plans
    }
}
