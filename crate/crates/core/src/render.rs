//! Plain-text syntax trees.
//!
//! Arrow vertices are drawn as `->` with an edge to each child; elementary
//! types are leaves printed as their word. The layout is deterministic, so
//! renderings can be golden-tested.

use crate::types::Type;

struct Block {
    lines: Vec<String>,
    width: usize,
    /// Column of the root anchor: the `-` of `->` for arrows, the middle of
    /// the word for leaves.
    root: usize,
}

const CHILD_GAP: usize = 3;

fn leaf(word: String) -> Block {
    let width = word.chars().count();
    Block {
        root: (width.max(1) - 1) / 2,
        width,
        lines: vec![word],
    }
}

fn place(line: &mut String, col: usize, text: &str) {
    let have = line.chars().count();
    if have < col {
        line.push_str(&" ".repeat(col - have));
    }
    line.push_str(text);
}

fn node(left: Block, right: Block) -> Block {
    let offset = left.width + CHILD_GAP;
    let lx = left.root;
    let rx = offset + right.root;
    let root = (lx + rx) / 2;

    let mut lines = Vec::new();
    let mut top = String::new();
    place(&mut top, root, "->");
    lines.push(top);

    let mut edges = String::new();
    place(&mut edges, (lx + root).div_ceil(2), "/");
    place(&mut edges, (root + 1 + rx) / 2, "\\");
    lines.push(edges);

    let height = left.lines.len().max(right.lines.len());
    for row in 0..height {
        let mut line = left.lines.get(row).cloned().unwrap_or_default();
        if let Some(r) = right.lines.get(row) {
            place(&mut line, offset, r);
        }
        lines.push(line);
    }

    let width = lines.iter().map(|l| l.chars().count()).max().unwrap_or(0);
    Block { lines, width, root }
}

fn block(t: &Type) -> Block {
    match t {
        Type::Elementary(_) => leaf(t.to_string()),
        Type::Arrow(a, b) => node(block(a), block(b)),
    }
}

/// Render `t` as a multi-line monospace tree (no trailing newline).
pub fn render_tree(t: &Type) -> String {
    let b = block(t);
    let mut out = String::new();
    for (i, line) in b.lines.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(line.trim_end());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> Type {
        s.parse().unwrap()
    }

    #[test]
    fn single_leaf_is_one_line() {
        assert_eq!(render_tree(&ty("I")), "I");
        assert_eq!(render_tree(&ty("AABCB")), "AABCB");
    }

    #[test]
    fn simple_arrow_is_three_lines() {
        let drawing = render_tree(&ty("A->B"));
        assert_eq!(drawing, "  ->\n / \\\nA   B");
        assert_eq!(drawing.lines().count(), 3);
    }

    #[test]
    fn nested_arrow_layout_is_stable() {
        let drawing = render_tree(&ty("A->(B->C)"));
        let expected = [
            "   ->",
            "  /  \\",
            "A     ->",
            "     / \\",
            "    B   C",
        ]
        .join("\n");
        assert_eq!(drawing, expected);
    }

    #[test]
    fn product_type_tree_has_arrow_root_over_two_arrow_subtrees() {
        // the product of the mixed-structure worked example
        let drawing = render_tree(&ty("(D->AE)->(B->CF)"));
        let lines: Vec<&str> = drawing.lines().collect();
        assert!(lines[0].trim() == "->");
        // both children are arrows, so `->` appears twice on the third line
        assert_eq!(lines[2].matches("->").count(), 2);
        let expected = [
            "      ->",
            "    /    \\",
            "  ->       ->",
            " / \\      / \\",
            "D   AE   B   CF",
        ]
        .join("\n");
        assert_eq!(drawing, expected);
    }
}
