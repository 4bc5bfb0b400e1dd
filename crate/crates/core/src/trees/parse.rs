//! Text form of trees.
//!
//! ```text
//! tree  := "(" "a" "," node "," node { "," node } ")"
//! node  := leaf | "(" node "," node { "," node } ")" [ ":" integer ]
//! leaf  := "b" | "c" | integer
//! ```
//!
//! Slide trees always read `(a,b,<node>)`. The optional `:label` after an
//! internal vertex records the label of the edge above it. Whitespace is
//! ignored.

use super::{LeafLabel, Node, StableTree, TreeError};

/// A parsed tree together with any edge labels written in the text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledText {
    pub tree: StableTree,
    /// Indexed by [`TreeGraph`](super::TreeGraph) node id of `tree`.
    pub edge_labels: Vec<Option<u32>>,
}

impl LabeledText {
    pub fn has_labels(&self) -> bool {
        self.edge_labels.iter().any(Option::is_some)
    }
}

/// Parses a tree; edge labels, if present, are accepted and dropped.
pub fn parse_tree(text: &str) -> Result<StableTree, TreeError> {
    parse_labeled_tree(text).map(|p| p.tree)
}

pub fn parse_labeled_tree(text: &str) -> Result<LabeledText, TreeError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, labels: vec![None] };
    p.expect(b'(')?;
    p.skip_ws();
    if p.peek() != Some(b'a') {
        return Err(p.error("expected leaf a first"));
    }
    p.pos += 1;
    let mut children = Vec::new();
    loop {
        p.skip_ws();
        match p.peek() {
            Some(b',') => {
                p.pos += 1;
                children.push(p.node()?);
            }
            Some(b')') => {
                p.pos += 1;
                break;
            }
            _ => return Err(p.error("expected ',' or ')'")),
        }
    }
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    let tree = StableTree::new(children)?;
    Ok(LabeledText { tree, edge_labels: p.labels })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    labels: Vec<Option<u32>>,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> TreeError {
        TreeError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<(), TreeError> {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", b as char)))
        }
    }

    fn integer(&mut self) -> Result<u32, TreeError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(TreeError::Syntax { pos: start, msg: "expected an integer".into() })
    }

    fn node(&mut self) -> Result<Node, TreeError> {
        self.skip_ws();
        let id = self.labels.len();
        self.labels.push(None);
        match self.peek() {
            Some(b'a') => Err(TreeError::DuplicateLeaf(LeafLabel::A)),
            Some(b'b') => {
                self.pos += 1;
                Ok(Node::Leaf(LeafLabel::B))
            }
            Some(b'c') => {
                self.pos += 1;
                Ok(Node::Leaf(LeafLabel::C))
            }
            Some(b) if b.is_ascii_digit() => Ok(Node::Leaf(LeafLabel::Num(self.integer()?))),
            Some(b'(') => {
                self.pos += 1;
                let mut children = vec![self.node()?];
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                            children.push(self.node()?);
                        }
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.error("expected ',' or ')'")),
                    }
                }
                self.skip_ws();
                if self.peek() == Some(b':') {
                    self.pos += 1;
                    self.skip_ws();
                    self.labels[id] = Some(self.integer()?);
                }
                Ok(Node::Internal(children))
            }
            _ => Err(self.error("expected a leaf or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_caterpillar() {
        let t = parse_tree("(a,b,(2,(1,c)))").unwrap();
        assert_eq!(t.leaves(), vec![LeafLabel::B, LeafLabel::Num(2), LeafLabel::Num(1), LeafLabel::C]);
        assert_eq!(t.to_string(), "(a,b,(2,(1,c)))");
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(parse_tree(" ( a , b ,( 2 ,(1 , c) ) ) ").unwrap().to_string(), "(a,b,(2,(1,c)))");
    }

    #[test]
    fn syntax_errors_report_position() {
        match parse_tree("(a,b,(2,(1,c))") {
            Err(TreeError::Syntax { pos, .. }) => assert_eq!(pos, 14),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_tree("(b,a,c)"), Err(TreeError::Syntax { pos: 1, .. })));
        assert!(matches!(parse_tree("(a,b,x)"), Err(TreeError::Syntax { .. })));
        assert!(matches!(parse_tree("(a,b,c) extra"), Err(TreeError::Syntax { .. })));
    }

    #[test]
    fn edge_labels_are_indexed_by_preorder() {
        let p = parse_labeled_tree("(a,b,((6,1):6,(5,(c,(4,(3,2):3):4):3):5):6)").unwrap();
        let g = p.tree.graph();
        let six = g.node_of(LeafLabel::Num(6)).unwrap();
        let above_six = g.parent(six).unwrap();
        assert_eq!(p.edge_labels[above_six], Some(6));
        assert_eq!(p.edge_labels.len(), g.len());
        assert!(p.has_labels());
        let labeled: Vec<u32> = g.internal_edges().filter_map(|id| p.edge_labels[id]).collect();
        assert_eq!(labeled.len(), 6);
    }

    #[test]
    fn a_only_at_the_root() {
        assert_eq!(parse_tree("(a,b,(a,c))"), Err(TreeError::DuplicateLeaf(LeafLabel::A)));
    }
}
