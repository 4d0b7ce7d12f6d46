//! Ordered labeled rooted forests recording resampling phases.
//!
//! Nodes are stored in depth-first order (roots and siblings in the order
//! they were created), which is exactly the label sequence a validation
//! replay walks.

use serde::{Deserialize, Serialize};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node<L> {
    pub label: L,
    pub parent: Option<NodeId>,
    pub depth: usize,
    pub children: Vec<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessForest<L> {
    nodes: Vec<Node<L>>,
    roots: Vec<NodeId>,
}

impl<L> Default for WitnessForest<L> {
    fn default() -> Self {
        WitnessForest {
            nodes: Vec::new(),
            roots: Vec::new(),
        }
    }
}

impl<L> WitnessForest<L> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a node as the last child of `parent` (or as the last root).
    /// Appending keeps depth-first order only if `parent` is on the current
    /// rightmost branch; builders in this crate always append that way.
    pub fn push(&mut self, label: L, parent: Option<NodeId>) -> NodeId {
        let id = self.nodes.len();
        let depth = match parent {
            Some(p) => {
                self.nodes[p].children.push(id);
                self.nodes[p].depth + 1
            }
            None => {
                self.roots.push(id);
                0
            }
        };
        self.nodes.push(Node {
            label,
            parent,
            depth,
            children: Vec::new(),
        });
        id
    }

    /// Rebuilds a forest from `(depth, label)` pairs in depth-first order.
    pub fn from_depth_sequence(items: impl IntoIterator<Item = (usize, L)>) -> Result<Self, String> {
        let mut forest = WitnessForest::new();
        let mut spine: Vec<NodeId> = Vec::new();
        for (i, (depth, label)) in items.into_iter().enumerate() {
            if depth > spine.len() {
                return Err(format!("node {i} at depth {depth} has no parent"));
            }
            spine.truncate(depth);
            let id = forest.push(label, spine.last().copied());
            spine.push(id);
        }
        Ok(forest)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node<L>] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node<L> {
        &self.nodes[id]
    }

    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    /// The label sequence in depth-first order.
    pub fn labels(&self) -> impl Iterator<Item = &L> {
        self.nodes.iter().map(|n| &n.label)
    }

    pub fn map<M>(&self, mut f: impl FnMut(&L) -> M) -> WitnessForest<M> {
        WitnessForest {
            nodes: self
                .nodes
                .iter()
                .map(|n| Node {
                    label: f(&n.label),
                    parent: n.parent,
                    depth: n.depth,
                    children: n.children.clone(),
                })
                .collect(),
            roots: self.roots.clone(),
        }
    }

    /// Checks the two feasibility conditions given an anchor extractor and
    /// a scope for each label: roots and siblings carry distinct anchors,
    /// and every child's anchor lies in its parent's scope.
    pub fn check_feasible<A: PartialEq + std::fmt::Debug>(
        &self,
        anchor: impl Fn(&L) -> A,
        scope: impl Fn(&L) -> Vec<A>,
    ) -> Result<(), String> {
        let distinct = |ids: &[NodeId], what: &str| -> Result<(), String> {
            for (i, &x) in ids.iter().enumerate() {
                for &y in &ids[..i] {
                    if anchor(&self.nodes[x].label) == anchor(&self.nodes[y].label) {
                        return Err(format!(
                            "{what} {y} and {x} share anchor {:?}",
                            anchor(&self.nodes[x].label)
                        ));
                    }
                }
            }
            Ok(())
        };
        distinct(&self.roots, "roots")?;
        for (id, node) in self.nodes.iter().enumerate() {
            distinct(&node.children, "siblings")?;
            if node.children.is_empty() {
                continue;
            }
            let sc = scope(&node.label);
            for &child in &node.children {
                let a = anchor(&self.nodes[child].label);
                if !sc.contains(&a) {
                    return Err(format!(
                        "child {child} anchor {a:?} is outside the scope of node {id}"
                    ));
                }
            }
        }
        Ok(())
    }
}
