//! A colouring plan for one component and its runtime check.

use std::collections::{BTreeMap, BTreeSet};

use crate::cycles::{ConstructionSequence, Cycle};
use crate::graph::{Edge, EdgeSet};

/// Explicit colour classes from a case, plus the default rule elsewhere:
/// H_1 and every step not in `skip` get a fresh colour on two non-adjacent
/// new edges avoiding `reserved`.
#[derive(Clone, Debug)]
pub(crate) struct Plan {
    pub label: String,
    pub seq: ConstructionSequence,
    pub groups: Vec<Vec<Edge>>,
    /// Cycle indices (1 = first step) that get no default pair.
    pub skip: BTreeSet<usize>,
    pub reserved: EdgeSet,
}

impl Plan {
    pub fn default_rule(label: impl Into<String>, seq: ConstructionSequence) -> Self {
        Plan {
            label: label.into(),
            seq,
            groups: Vec::new(),
            skip: BTreeSet::new(),
            reserved: EdgeSet::new(),
        }
    }
}

fn has_repeat(c: &Cycle, class_of: &BTreeMap<Edge, usize>) -> bool {
    let mut seen = BTreeSet::new();
    c.edge_set()
        .iter()
        .filter_map(|e| class_of.get(e))
        .any(|&k| !seen.insert(k))
}

fn pick_pair(
    candidates: &[Edge],
    class_of: &BTreeMap<Edge, usize>,
    reserved: &EdgeSet,
) -> Option<[Edge; 2]> {
    let free: Vec<Edge> = candidates
        .iter()
        .copied()
        .filter(|e| !class_of.contains_key(e) && !reserved.contains(e))
        .collect();
    for (i, &a) in free.iter().enumerate() {
        for &b in &free[i + 1..] {
            if !a.is_adjacent_to(b) {
                return Some([a, b]);
            }
        }
    }
    None
}

/// Realises the plan and checks it: every class a matching and every member
/// cycle holding two edges of one class. Returns the colour classes.
pub(crate) fn execute(plan: &Plan, members: &[Cycle]) -> Result<Vec<Vec<Edge>>, String> {
    let union = plan.seq.union_edges();
    let mut classes: Vec<Vec<Edge>> = Vec::new();
    let mut class_of: BTreeMap<Edge, usize> = BTreeMap::new();
    for group in &plan.groups {
        let k = classes.len();
        for &e in group {
            if !union.contains(&e) {
                return Err(format!("edge {e} is outside the component"));
            }
            if class_of.insert(e, k).is_some() {
                return Err(format!("edge {e} placed in two colour classes"));
            }
        }
        classes.push(group.clone());
    }
    let add =
        |pair: [Edge; 2], classes: &mut Vec<Vec<Edge>>, class_of: &mut BTreeMap<Edge, usize>| {
            let k = classes.len();
            pair.iter().for_each(|&e| {
                class_of.insert(e, k);
            });
            classes.push(pair.to_vec());
        };
    if !has_repeat(&plan.seq.start, &class_of) {
        let mut edges = plan.seq.start.edges();
        edges.sort();
        let pair = pick_pair(&edges, &class_of, &plan.reserved)
            .ok_or("no free non-adjacent pair in H_1")?;
        add(pair, &mut classes, &mut class_of);
    }
    for (i, step) in plan.seq.steps.iter().enumerate() {
        if plan.skip.contains(&(i + 1)) {
            continue;
        }
        let pair = pick_pair(&step.new_edges, &class_of, &plan.reserved).ok_or_else(|| {
            format!(
                "no free non-adjacent pair among the new edges of step {}",
                i + 1
            )
        })?;
        add(pair, &mut classes, &mut class_of);
    }
    for class in &classes {
        let mut ends = BTreeSet::new();
        for e in class {
            for x in e.endpoints() {
                if !ends.insert(x) {
                    return Err(format!(
                        "colour class {:?} is not a matching at vertex {x}",
                        class
                    ));
                }
            }
        }
    }
    if let Some(c) = members.iter().find(|c| !has_repeat(c, &class_of)) {
        return Err(format!("cycle {c} stays rainbow"));
    }
    Ok(classes)
}
