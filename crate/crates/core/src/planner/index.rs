use rustc_hash::FxHashMap;

use crate::domain::{Condition, Lit};

#[derive(Default)]
struct TrieNode {
    terminal: bool,
    children: FxHashMap<Lit, u32>,
}

/// Expanded conditions stored as a set-trie over their sorted literals,
/// answering "is `c` a superset of some expanded condition" by walking only
/// the branches whose literals all occur in `c`.
pub(super) struct SupersetIndex {
    nodes: Vec<TrieNode>,
    stack: Vec<(u32, usize)>,
}

impl SupersetIndex {
    pub fn new() -> Self {
        Self {
            nodes: vec![TrieNode::default()],
            stack: Vec::new(),
        }
    }

    pub fn insert(&mut self, c: &Condition) {
        let mut at = 0usize;
        for l in c {
            at = match self.nodes[at].children.get(&l) {
                Some(&n) => n as usize,
                None => {
                    let n = self.nodes.len();
                    self.nodes.push(TrieNode::default());
                    self.nodes[at].children.insert(l, n as u32);
                    n
                }
            };
        }
        self.nodes[at].terminal = true;
    }

    pub fn covers(&mut self, c: &Condition) -> bool {
        if self.nodes[0].terminal {
            return true;
        }
        let lits = c.lits();
        self.stack.clear();
        self.stack.push((0, 0));
        while let Some((n, from)) = self.stack.pop() {
            let node = &self.nodes[n as usize];
            let rest = &lits[from..];
            if node.children.len() < rest.len() {
                for (l, &child) in &node.children {
                    if let Ok(j) = rest.binary_search(l) {
                        if self.nodes[child as usize].terminal {
                            return true;
                        }
                        self.stack.push((child, from + j + 1));
                    }
                }
            } else {
                for (j, l) in rest.iter().enumerate() {
                    if let Some(&child) = node.children.get(l) {
                        if self.nodes[child as usize].terminal {
                            return true;
                        }
                        self.stack.push((child, from + j + 1));
                    }
                }
            }
        }
        false
    }
}
