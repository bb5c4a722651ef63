//! AND/OR tree over labelled configurations, explored by proof-number
//! search.
//!
//! An AND node holds a configuration and a distinguished inverted,
//! inclusion-minimal triangle; its children are all ways one more line can
//! cut that triangle. It is TRUE when every child is, in particular when no
//! such line can exist. An OR node holds the configuration after an
//! insertion; it is TRUE when one of the new inverted minimal triangles
//! leads to a TRUE AND node. An OR node without such triangles is FALSE and
//! reported as a candidate counterexample.

use std::sync::Arc;

use super::config::{Closest, Configuration, Profile};
use super::root_configurations;

const INF: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    And,
    Or,
}

/// Coefficients of the node weight
/// `blocked · blocked_fraction − unknown · unknown_labels + depth · depth`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Weights {
    pub blocked: f64,
    pub unknown: f64,
    pub depth: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            blocked: 4.0,
            unknown: 1.0,
            depth: 0.25,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub profile: Profile,
    pub node_limit: usize,
    /// AND nodes whose configuration already has this many lines are not
    /// expanded and count as unprovable.
    pub max_lines: usize,
    pub closest: Closest,
    pub weights: Weights,
}

impl SearchOptions {
    pub fn new(profile: Profile) -> Self {
        SearchOptions {
            profile,
            node_limit: 200_000,
            max_lines: 12,
            closest: Closest::default(),
            weights: Weights::default(),
        }
    }
}

#[derive(Clone, Debug)]
struct Node {
    kind: NodeKind,
    parent: Option<u32>,
    config: Arc<Configuration>,
    tri: Option<[usize; 3]>,
    children: Vec<u32>,
    expanded: bool,
    cutoff: bool,
    pn: u64,
    dn: u64,
    weight: f64,
    depth: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Every root evaluated TRUE.
    Proved,
    /// Some root evaluated FALSE.
    Refuted,
    /// The node budget ran out first.
    Open,
}

/// One node of an extracted proof, numbered in depth-first order.
#[derive(Clone, Debug, PartialEq)]
pub struct ProofNode {
    pub id: usize,
    pub kind: NodeKind,
    pub parent: Option<usize>,
    pub config: Arc<Configuration>,
    pub tri: Option<[usize; 3]>,
}

/// A TRUE subtree: every child of each AND node, one TRUE child of each OR
/// node.
#[derive(Clone, Debug, PartialEq)]
pub struct Proof {
    pub profile: Profile,
    pub closest: Closest,
    pub nodes: Vec<ProofNode>,
}

impl Proof {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// AND nodes without children.
    pub fn leaf_count(&self) -> usize {
        let mut has_child = vec![false; self.nodes.len()];
        for n in &self.nodes {
            if let Some(p) = n.parent {
                has_child[p] = true;
            }
        }
        self.nodes.iter().filter(|n| !has_child[n.id]).count()
    }

    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.nodes.len()];
        for n in &self.nodes {
            if let Some(p) = n.parent {
                depth[n.id] = depth[p] + 1;
            }
        }
        depth.into_iter().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub outcome: Outcome,
    pub expansions: usize,
    pub nodes: usize,
    pub proof: Option<Proof>,
    /// Configurations of FALSE OR leaves met during the search.
    pub candidates: Vec<Configuration>,
}

pub struct ProofSearch {
    options: SearchOptions,
    nodes: Vec<Node>,
    roots: Vec<u32>,
    candidates: Vec<Configuration>,
    expansions: usize,
}

impl ProofSearch {
    pub fn new(options: SearchOptions) -> Self {
        let mut s = ProofSearch {
            options,
            nodes: Vec::new(),
            roots: Vec::new(),
            candidates: Vec::new(),
            expansions: 0,
        };
        for (config, tri) in root_configurations(&s.options.profile) {
            let id = s.push(NodeKind::And, None, Arc::new(config), Some(tri), 0);
            s.roots.push(id);
        }
        s
    }

    fn push(
        &mut self,
        kind: NodeKind,
        parent: Option<u32>,
        config: Arc<Configuration>,
        tri: Option<[usize; 3]>,
        depth: u32,
    ) -> u32 {
        let w = self.options.weights;
        let weight = w.blocked * config.blocked_fraction(self.options.profile.bundles())
            - w.unknown * config.unknown_labels() as f64
            + w.depth * depth as f64;
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            kind,
            parent,
            config,
            tri,
            children: Vec::new(),
            expanded: false,
            cutoff: false,
            pn: 1,
            dn: 1,
            weight,
            depth,
        });
        id
    }

    fn top(&self) -> (u64, u64) {
        let pn = self
            .roots
            .iter()
            .fold(0u64, |acc, &r| acc.saturating_add(self.nodes[r as usize].pn));
        let dn = self
            .roots
            .iter()
            .map(|&r| self.nodes[r as usize].dn)
            .min()
            .unwrap_or(INF);
        (pn, dn)
    }

    /// Child to descend into: smallest proof number below an OR node,
    /// smallest disproof number below an AND node; heavier nodes first, then
    /// creation order.
    fn select(&self, children: &[u32], kind: NodeKind) -> u32 {
        let key = |c: &&u32| {
            let c = **c;
            let n = &self.nodes[c as usize];
            let num = match kind {
                NodeKind::Or => n.pn,
                NodeKind::And => n.dn,
            };
            (num, std::cmp::Reverse(OrdF64(n.weight)), c)
        };
        *children.iter().min_by_key(key).expect("unsolved node has children")
    }

    fn expand(&mut self, id: u32) {
        self.expansions += 1;
        let node = &self.nodes[id as usize];
        if node.kind == NodeKind::And && node.config.line_count() >= self.options.max_lines {
            let node = &mut self.nodes[id as usize];
            node.expanded = true;
            node.cutoff = true;
            return;
        }
        let (config, depth) = (node.config.clone(), node.depth + 1);
        let mut kids = Vec::new();
        match node.kind {
            NodeKind::And => {
                let tri = node.tri.expect("AND node has a triangle");
                for child in config.insertions(tri, &self.options.profile, self.options.closest) {
                    kids.push(self.push(NodeKind::Or, Some(id), Arc::new(child), None, depth));
                }
            }
            NodeKind::Or => {
                for tri in config.new_inverted_minimal() {
                    kids.push(self.push(NodeKind::And, Some(id), config.clone(), Some(tri), depth));
                }
                if kids.is_empty() {
                    self.candidates.push((*config).clone());
                }
            }
        }
        let node = &mut self.nodes[id as usize];
        node.children = kids;
        node.expanded = true;
    }

    fn refresh(&mut self, id: u32) {
        let node = &self.nodes[id as usize];
        let kids = &node.children;
        let (pn, dn) = match (node.kind, kids.is_empty()) {
            _ if node.cutoff => (INF, INF),
            (NodeKind::And, true) => (0, INF),
            (NodeKind::Or, true) => (INF, 0),
            (NodeKind::And, false) => (
                kids.iter()
                    .fold(0u64, |a, &c| a.saturating_add(self.nodes[c as usize].pn)),
                kids.iter().map(|&c| self.nodes[c as usize].dn).min().unwrap(),
            ),
            (NodeKind::Or, false) => (
                kids.iter().map(|&c| self.nodes[c as usize].pn).min().unwrap(),
                kids.iter()
                    .fold(0u64, |a, &c| a.saturating_add(self.nodes[c as usize].dn)),
            ),
        };
        let node = &mut self.nodes[id as usize];
        node.pn = pn;
        node.dn = dn;
    }

    pub fn run(mut self) -> SearchResult {
        while self.expansions < self.options.node_limit {
            let (pn, dn) = self.top();
            if pn == 0 || dn == 0 || pn == INF {
                break;
            }
            let mut cur = self.select(&self.roots.clone(), NodeKind::And);
            while self.nodes[cur as usize].expanded {
                let n = &self.nodes[cur as usize];
                cur = self.select(&n.children, n.kind);
            }
            self.expand(cur);
            let mut at = Some(cur);
            while let Some(i) = at {
                self.refresh(i);
                at = self.nodes[i as usize].parent;
            }
        }
        let (pn, dn) = self.top();
        let outcome = if pn == 0 {
            Outcome::Proved
        } else if dn == 0 {
            Outcome::Refuted
        } else {
            Outcome::Open
        };
        let proof = (outcome == Outcome::Proved).then(|| self.extract());
        SearchResult {
            outcome,
            expansions: self.expansions,
            nodes: self.nodes.len(),
            proof,
            candidates: self.candidates,
        }
    }

    fn extract(&self) -> Proof {
        let mut nodes = Vec::new();
        let mut stack: Vec<(u32, Option<usize>)> = self.roots.iter().rev().map(|&r| (r, None)).collect();
        while let Some((id, parent)) = stack.pop() {
            let n = &self.nodes[id as usize];
            let new_id = nodes.len();
            nodes.push(ProofNode {
                id: new_id,
                kind: n.kind,
                parent,
                config: n.config.clone(),
                tri: n.tri,
            });
            match n.kind {
                NodeKind::And => {
                    for &c in n.children.iter().rev() {
                        stack.push((c, Some(new_id)));
                    }
                }
                NodeKind::Or => {
                    let c = *n
                        .children
                        .iter()
                        .find(|&&c| self.nodes[c as usize].pn == 0)
                        .expect("TRUE OR node has a TRUE child");
                    stack.push((c, Some(new_id)));
                }
            }
        }
        Proof {
            profile: self.options.profile.clone(),
            closest: self.options.closest,
            nodes,
        }
    }
}

#[derive(Clone, Copy)]
struct OrdF64(f64);

impl PartialEq for OrdF64 {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

pub fn search(options: SearchOptions) -> SearchResult {
    ProofSearch::new(options).run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::{validate_proof, write_proof};

    #[test]
    fn four_bundle_search_closes_and_validates() {
        let r = search(SearchOptions::new(Profile::unbounded(4)));
        assert_eq!(r.outcome, Outcome::Proved);
        let proof = r.proof.unwrap();
        assert!(proof.node_count() <= 720);
        let stats = validate_proof(&write_proof(&proof)).unwrap();
        assert_eq!(stats.nodes, proof.node_count());
        assert_eq!(stats.leaves, proof.leaf_count());
    }

    #[test]
    fn search_is_deterministic() {
        let a = search(SearchOptions::new(Profile::unbounded(4)));
        let b = search(SearchOptions::new(Profile::unbounded(4)));
        assert_eq!(a.expansions, b.expansions);
        assert_eq!(write_proof(&a.proof.unwrap()), write_proof(&b.proof.unwrap()));
    }

    #[test]
    fn line_cap_makes_the_run_open() {
        let mut o = SearchOptions::new(Profile::unbounded(4));
        o.max_lines = 5;
        let r = search(o);
        assert_eq!(r.outcome, Outcome::Open);
        assert!(r.proof.is_none());
    }

    #[test]
    fn tampered_proof_is_rejected() {
        let r = search(SearchOptions::new(Profile::unbounded(4)));
        let text = write_proof(&r.proof.unwrap());
        // drop the last OR subtree line
        let mut lines: Vec<&str> = text.lines().collect();
        let last_or = lines.iter().rposition(|l| l.starts_with("or ")).unwrap();
        lines.truncate(last_or);
        assert!(validate_proof(&(lines.join("\n") + "\n")).is_err());
        let relabelled = text.replacen("closest root-outer", "closest inner", 1);
        assert!(validate_proof(&relabelled).is_err());
    }
}
