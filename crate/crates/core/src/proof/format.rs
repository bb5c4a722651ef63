//! Line-oriented proof files and their validator.
//!
//! ```text
//! rhombus-proof 1
//! profile *,*,*,*
//! closest root-outer
//! and 0 - 0,1,2 lines=0.0,1.0,2.0 signs=- labels=I blocks=-
//! or 1 0 lines=... signs=... labels=... blocks=...
//! and 2 1 0,1,3
//! ```
//!
//! Root AND nodes carry their configuration; other AND nodes inherit it
//! from their OR parent.

use std::collections::HashMap;
use std::sync::Arc;

use super::config::{Closest, Configuration, Label, Profile};
use super::root_configurations;
use super::search::{NodeKind, Proof, ProofNode};
use crate::error::{Error, Result};

const HEADER: &str = "rhombus-proof 1";

pub fn write_proof(proof: &Proof) -> String {
    let mut out = format!("{HEADER}\nprofile {}\nclosest {}\n", proof.profile, proof.closest);
    for n in &proof.nodes {
        let parent = n.parent.map_or("-".to_string(), |p| p.to_string());
        match n.kind {
            NodeKind::And => {
                let [a, b, c] = n.tri.expect("AND node has a triangle");
                out.push_str(&format!("and {} {parent} {a},{b},{c}", n.id));
                if n.parent.is_none() {
                    out.push_str(&format!(" {}", n.config));
                }
            }
            NodeKind::Or => out.push_str(&format!("or {} {parent} {}", n.id, n.config)),
        }
        out.push('\n');
    }
    out
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidProof(msg.into())
}

pub fn read_proof(text: &str) -> Result<Proof> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
    if lines.next().map(str::trim) != Some(HEADER) {
        return Err(invalid("missing header"));
    }
    let profile: Profile = lines
        .next()
        .and_then(|l| l.strip_prefix("profile "))
        .ok_or_else(|| invalid("missing profile"))?
        .trim()
        .parse()?;
    let closest: Closest = lines
        .next()
        .and_then(|l| l.strip_prefix("closest "))
        .ok_or_else(|| invalid("missing closest-line rule"))?
        .parse()?;
    let mut nodes: Vec<ProofNode> = Vec::new();
    for line in lines {
        let mut f = line.splitn(4, ' ');
        let (kind, id, parent) = (f.next(), f.next(), f.next());
        let rest = f.next().unwrap_or("");
        let kind = match kind {
            Some("and") => NodeKind::And,
            Some("or") => NodeKind::Or,
            _ => return Err(invalid(format!("bad node line {line:?}"))),
        };
        let id: usize = id
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| invalid(format!("bad node id in {line:?}")))?;
        if id != nodes.len() {
            return Err(invalid(format!("node {id} out of order")));
        }
        let parent = match parent {
            Some("-") => None,
            Some(p) => {
                let p: usize = p.parse().map_err(|_| invalid(format!("bad parent in {line:?}")))?;
                if p >= id {
                    return Err(invalid(format!("node {id} has a later parent {p}")));
                }
                Some(p)
            }
            None => return Err(invalid(format!("missing parent in {line:?}"))),
        };
        let node = match kind {
            NodeKind::Or => {
                parent.ok_or_else(|| invalid(format!("OR node {id} has no parent")))?;
                ProofNode {
                    id,
                    kind,
                    parent,
                    config: Arc::new(rest.parse()?),
                    tri: None,
                }
            }
            NodeKind::And => {
                let (tri, cfg) = rest.split_once(' ').unwrap_or((rest, ""));
                let t: Vec<usize> = tri
                    .split(',')
                    .map(|x| x.parse().map_err(|_| invalid(format!("bad triangle in {line:?}"))))
                    .collect::<Result<_>>()?;
                let [a, b, c] = t[..] else {
                    return Err(invalid(format!("bad triangle in {line:?}")));
                };
                let config = match parent {
                    None => Arc::new(cfg.parse()?),
                    Some(p) => nodes[p].config.clone(),
                };
                ProofNode {
                    id,
                    kind,
                    parent,
                    config,
                    tri: Some([a, b, c]),
                }
            }
        };
        nodes.push(node);
    }
    Ok(Proof {
        profile,
        closest,
        nodes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProofStats {
    pub nodes: usize,
    pub leaves: usize,
    pub depth: usize,
    pub roots: usize,
}

fn key(config: &Configuration) -> String {
    config.to_string()
}

/// Rebuilds every node from the file and checks it is a complete proof:
/// the roots cover every symmetry class, each AND node lists exactly the
/// admissible insertions, and each OR node keeps a new inverted minimal
/// triangle whose subtree is again a proof.
pub fn validate_proof(text: &str) -> Result<ProofStats> {
    let proof = read_proof(text)?;
    let nodes = &proof.nodes;
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for n in nodes {
        if let Some(p) = n.parent {
            if nodes[p].kind == n.kind {
                return Err(invalid(format!("node {} has a parent of the same kind", n.id)));
            }
            children[p].push(n.id);
        } else if n.kind != NodeKind::And {
            return Err(invalid(format!("root {} is not an AND node", n.id)));
        }
    }

    let mut expected: Vec<String> = root_configurations(&proof.profile)
        .iter()
        .map(|(c, t)| format!("{t:?} {}", key(c)))
        .collect();
    let mut found: Vec<String> = nodes
        .iter()
        .filter(|n| n.parent.is_none())
        .map(|n| format!("{:?} {}", n.tri.unwrap(), key(&n.config)))
        .collect();
    expected.sort();
    found.sort();
    if expected != found {
        return Err(invalid("root nodes do not match the symmetry classes of the profile"));
    }

    for n in nodes {
        match n.kind {
            NodeKind::And => {
                let tri = n.tri.expect("parsed AND node");
                let config = &n.config;
                if tri.iter().any(|&i| i >= config.line_count())
                    || !(tri[0] < tri[1] && tri[1] < tri[2])
                    || !config.is_triangle(tri)
                {
                    return Err(invalid(format!("node {}: {tri:?} is not a triangle", n.id)));
                }
                if config.label(tri) != Label::Inverted || !config.is_minimal(tri) {
                    return Err(invalid(format!("node {}: triangle is not inverted and minimal", n.id)));
                }
                if n.parent.is_some() && tri[2] != config.line_count() - 1 {
                    return Err(invalid(format!("node {}: triangle misses the new line", n.id)));
                }
                let mut want: HashMap<String, usize> = HashMap::new();
                for c in config.insertions(tri, &proof.profile, proof.closest) {
                    *want.entry(key(&c)).or_default() += 1;
                }
                for &c in &children[n.id] {
                    match want.get_mut(&key(&nodes[c].config)) {
                        Some(k) if *k > 0 => *k -= 1,
                        _ => return Err(invalid(format!("node {c}: not an admissible insertion"))),
                    }
                }
                if want.values().any(|&k| k > 0) {
                    return Err(invalid(format!("node {}: insertions missing", n.id)));
                }
            }
            NodeKind::Or => {
                if !n.config.is_consistent_arrangement() || !n.config.relaxed_consistency() {
                    return Err(invalid(format!("node {}: inconsistent configuration", n.id)));
                }
                if children[n.id].is_empty() {
                    return Err(invalid(format!("node {}: OR node without a TRUE child", n.id)));
                }
            }
        }
    }
    let leaves = nodes.iter().filter(|n| children[n.id].is_empty()).count();
    Ok(ProofStats {
        nodes: nodes.len(),
        leaves,
        depth: proof.depth(),
        roots: nodes.iter().filter(|n| n.parent.is_none()).count(),
    })
}
