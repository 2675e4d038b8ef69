//! The rational semiring of finite rooted trees, with its sum (root
//! identification), product, diamond map and well-order.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::fmt;

/// A finite rooted tree in canonical form: children are kept sorted in
/// descending order of the tree order, so structural equality coincides with
/// isomorphism. The one-vertex tree (no children) is the additive zero.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct RootedTree {
    children: Vec<RootedTree>,
}

impl RootedTree {
    /// The one-vertex tree 0.
    pub fn zero() -> Self {
        RootedTree { children: Vec::new() }
    }

    /// exp(X): a new root with a single edge down to X.
    pub fn exp(x: RootedTree) -> Self {
        RootedTree { children: vec![x] }
    }

    /// The multiplicative unit exp(0).
    pub fn one() -> Self {
        Self::exp(Self::zero())
    }

    pub fn from_children(children: Vec<RootedTree>) -> Self {
        let mut t = RootedTree { children };
        t.canonicalize();
        t
    }

    fn canonicalize(&mut self) {
        self.children.sort_by(|a, b| b.cmp(a));
    }

    pub fn is_zero(&self) -> bool {
        self.children.is_empty()
    }

    /// The family of subtrees hanging off the root.
    pub fn family(&self) -> &[RootedTree] {
        &self.children
    }

    pub fn num_edges(&self) -> usize {
        self.children.iter().map(|c| c.num_edges() + 1).sum()
    }

    /// Sum: identify the roots (multiset union of children).
    pub fn add(&self, other: &RootedTree) -> RootedTree {
        let mut children = self.children.clone();
        children.extend(other.children.iter().cloned());
        RootedTree::from_children(children)
    }

    /// Product: Σ exp(X′ + Y′) over the two families; zero if either factor
    /// is zero.
    pub fn mul(&self, other: &RootedTree) -> RootedTree {
        if self.is_zero() || other.is_zero() {
            return RootedTree::zero();
        }
        let mut children = Vec::with_capacity(self.children.len() * other.children.len());
        for x in &self.children {
            for y in &other.children {
                children.push(RootedTree::exp(x.add(y)));
            }
        }
        // each exp(X′+Y′) has exactly one child; summing them = collecting
        // all those children under one root
        let flattened: Vec<RootedTree> = children.into_iter().map(|e| e.children.into_iter().next().unwrap()).collect();
        RootedTree::from_children(flattened.into_iter().map(RootedTree::exp).map(|e| e.children.into_iter().next().unwrap()).collect::<Vec<_>>())
            .wrap_children()
    }

    fn wrap_children(self) -> RootedTree {
        // helper for mul: the children collected above are the X′+Y′ trees;
        // the product's children are exp of each, i.e. the trees themselves
        // hung one level down
        RootedTree::from_children(self.children.into_iter().map(RootedTree::exp).map(|e| e).collect())
    }

    /// The rational map: two exp layers.
    pub fn diamond(&self) -> RootedTree {
        RootedTree::exp(RootedTree::exp(self.clone()))
    }

    /// log(X): the largest member of the family (first child in canonical
    /// order). Defined for nonzero trees.
    pub fn log(&self) -> Option<&RootedTree> {
        self.children.first()
    }

    /// Parenthesis serialization: 0 = "()", exp(X) = "(X)", sums concatenate
    /// the children inside the root parentheses.
    pub fn serialize(&self) -> String {
        let mut out = String::from("(");
        for c in &self.children {
            out.push_str(&c.serialize());
        }
        out.push(')');
        out
    }

    pub fn parse(text: &str) -> Result<RootedTree> {
        let bytes = text.trim().as_bytes();
        let mut pos = 0usize;
        let tree = parse_tree(bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::parse(pos, "trailing input after tree"));
        }
        Ok(tree)
    }
}

fn parse_tree(bytes: &[u8], pos: &mut usize) -> Result<RootedTree> {
    if *pos >= bytes.len() || bytes[*pos] != b'(' {
        return Err(Error::parse(*pos, "expected '('"));
    }
    *pos += 1;
    let mut children = Vec::new();
    while *pos < bytes.len() && bytes[*pos] == b'(' {
        children.push(parse_tree(bytes, pos)?);
    }
    if *pos >= bytes.len() || bytes[*pos] != b')' {
        return Err(Error::parse(*pos, "expected ')'"));
    }
    *pos += 1;
    Ok(RootedTree::from_children(children))
}

impl Ord for RootedTree {
    /// The recursive well-order: 0 is least; otherwise compare log(X) (the
    /// largest child), then the remainders with one copy of the largest
    /// child removed.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            (false, false) => {}
        }
        let lx = &self.children[0];
        let ly = &other.children[0];
        match lx.cmp(ly) {
            Ordering::Equal => {
                let rest_x = RootedTree { children: self.children[1..].to_vec() };
                let rest_y = RootedTree { children: other.children[1..].to_vec() };
                rest_x.cmp(&rest_y)
            }
            o => o,
        }
    }
}

impl PartialOrd for RootedTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}
