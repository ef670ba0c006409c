//! The type language: elementary words over system labels, arrow types, and
//! the algebra on them (order, structure, parallel product, padding, overlay).
//!
//! A type is either an elementary word of system labels (the empty word is the
//! trivial type `I`) or an arrow `a -> b` between two types. Every value is
//! exactly one of the two, and an arrow decomposes into a unique pair, so all
//! operations here are plain structural recursions.

use std::fmt;

use crate::error::{Error, Result};

/// A system label: the name of one physical system.
///
/// Default labels are single uppercase letters other than `I`; registries may
/// introduce longer alphanumeric names (still starting with an uppercase
/// letter, still never `I`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(String);

impl Label {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name == "I" {
            return Err(Error::ReservedTrivialLabel);
        }
        let mut chars = name.chars();
        let valid = match chars.next() {
            Some(c) if c.is_ascii_uppercase() => chars.all(|c| c.is_ascii_alphanumeric()),
            _ => false,
        };
        if !valid {
            return Err(Error::InvalidLabel(name));
        }
        Ok(Label(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Label({})", self.0)
    }
}

impl std::str::FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Label::new(s)
    }
}

/// A type: an elementary word of labels or an arrow between two types.
///
/// `Elementary(vec![])` is the trivial type `I`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Type {
    Elementary(Vec<Label>),
    Arrow(Box<Type>, Box<Type>),
}

/// The unlabeled tree underlying a type. Two types describe the same kind of
/// object exactly when their shapes coincide.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

impl Shape {
    /// Compact one-line rendering: `*` for a leaf, `(l r)` for a node.
    pub fn notation(&self) -> String {
        match self {
            Shape::Leaf => "*".to_string(),
            Shape::Node(l, r) => format!("({} {})", l.notation(), r.notation()),
        }
    }

    /// Tree height; equals the order of any type with this shape.
    pub fn height(&self) -> u32 {
        match self {
            Shape::Leaf => 0,
            Shape::Node(l, r) => 1 + l.height().max(r.height()),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Node(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// All shapes of height at most `h`.
    pub fn enumerate_up_to(h: u32) -> Vec<Shape> {
        let mut out = vec![Shape::Leaf];
        for height in 1..=h {
            out.extend(Shape::enumerate_exact(height));
        }
        out
    }

    /// All shapes of height exactly `h`.
    pub fn enumerate_exact(h: u32) -> Vec<Shape> {
        if h == 0 {
            return vec![Shape::Leaf];
        }
        let shorter = Shape::enumerate_up_to(h - 1);
        let mut out = Vec::new();
        for l in &shorter {
            for r in &shorter {
                if l.height().max(r.height()) == h - 1 {
                    out.push(Shape::Node(Box::new(l.clone()), Box::new(r.clone())));
                }
            }
        }
        out
    }

    /// Rebuild a type of this shape by drawing one label per leaf from
    /// `labels`. Returns `None` if `labels` runs out.
    pub fn instantiate<I>(&self, labels: &mut I) -> Option<Type>
    where
        I: Iterator<Item = Label>,
    {
        match self {
            Shape::Leaf => labels.next().map(|l| Type::Elementary(vec![l])),
            Shape::Node(l, r) => {
                let left = l.instantiate(labels)?;
                let right = r.instantiate(labels)?;
                Some(Type::arrow(left, right))
            }
        }
    }

    /// The type of this shape whose every leaf is the trivial type.
    pub fn trivial_type(&self) -> Type {
        match self {
            Shape::Leaf => Type::trivial(),
            Shape::Node(l, r) => Type::arrow(l.trivial_type(), r.trivial_type()),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.notation())
    }
}

/// Which clause of the parallel product applied at one recursion step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductCase {
    /// Both operands elementary: word concatenation.
    Elementary,
    /// Left operand of lower order: it is carried under the right arrow.
    AsymmetricLeft,
    /// Both operands arrows of equal order: componentwise product.
    Symmetric,
    /// Right operand of lower order: it is carried under the left arrow.
    AsymmetricRight,
}

impl fmt::Display for ProductCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ProductCase::Elementary => "elementary",
            ProductCase::AsymmetricLeft => "asymmetric-left",
            ProductCase::Symmetric => "symmetric",
            ProductCase::AsymmetricRight => "asymmetric-right",
        };
        f.write_str(name)
    }
}

/// One recursion step of `partype`, for trace output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductStep {
    pub left: Type,
    pub right: Type,
    pub case: ProductCase,
    pub result: Type,
}

impl Type {
    /// The trivial type `I` (the empty word).
    pub fn trivial() -> Type {
        Type::Elementary(Vec::new())
    }

    pub fn arrow(input: Type, output: Type) -> Type {
        Type::Arrow(Box::new(input), Box::new(output))
    }

    pub fn elementary(labels: Vec<Label>) -> Type {
        Type::Elementary(labels)
    }

    pub fn is_elementary(&self) -> bool {
        matches!(self, Type::Elementary(_))
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Type::Elementary(labels) if labels.is_empty())
    }

    /// The input and output of an arrow type; an error on elementary types.
    pub fn decompose_arrow(&self) -> Result<(&Type, &Type)> {
        match self {
            Type::Arrow(a, b) => Ok((a, b)),
            Type::Elementary(_) => Err(Error::NotAnArrow(self.clone())),
        }
    }

    /// Nesting depth of arrows: 0 for elementary types, `1 + max` otherwise.
    /// Equals the height of the syntax tree.
    pub fn order(&self) -> u32 {
        match self {
            Type::Elementary(_) => 0,
            Type::Arrow(a, b) => 1 + a.order().max(b.order()),
        }
    }

    /// The unlabeled tree of the type. All elementary types share `Leaf`.
    pub fn structure(&self) -> Shape {
        match self {
            Type::Elementary(_) => Shape::Leaf,
            Type::Arrow(a, b) => Shape::Node(Box::new(a.structure()), Box::new(b.structure())),
        }
    }

    pub fn same_structure(&self, other: &Type) -> bool {
        match (self, other) {
            (Type::Elementary(_), Type::Elementary(_)) => true,
            (Type::Arrow(a, b), Type::Arrow(c, d)) => a.same_structure(c) && b.same_structure(d),
            _ => false,
        }
    }

    /// Every label occurring in the type, left to right.
    pub fn labels(&self) -> Vec<&Label> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels<'a>(&'a self, out: &mut Vec<&'a Label>) {
        match self {
            Type::Elementary(labels) => out.extend(labels.iter()),
            Type::Arrow(a, b) => {
                a.collect_labels(out);
                b.collect_labels(out);
            }
        }
    }

    /// Which product clause governs the pair `(self, other)`.
    pub fn product_case(&self, other: &Type) -> ProductCase {
        match (self, other) {
            (Type::Elementary(_), Type::Elementary(_)) => ProductCase::Elementary,
            _ => {
                let (lo, ro) = (self.order(), other.order());
                if lo < ro {
                    ProductCase::AsymmetricLeft
                } else if lo > ro {
                    ProductCase::AsymmetricRight
                } else {
                    ProductCase::Symmetric
                }
            }
        }
    }

    /// The parallel product on types.
    ///
    /// Elementary words concatenate (so `I` is neutral among words); an
    /// operand of lower order is carried under the other's arrow on the
    /// output side; equal-order arrows multiply componentwise.
    pub fn partype(&self, other: &Type) -> Type {
        match self.product_case(other) {
            ProductCase::Elementary => match (self, other) {
                (Type::Elementary(u), Type::Elementary(v)) => {
                    let mut word = u.clone();
                    word.extend(v.iter().cloned());
                    Type::Elementary(word)
                }
                _ => unreachable!(),
            },
            ProductCase::AsymmetricLeft => {
                // other = c -> d with ord(self) < ord(other)
                let (c, d) = other.decompose_arrow().expect("higher order implies arrow");
                Type::arrow(c.clone(), self.partype(d))
            }
            ProductCase::Symmetric => {
                let (a, b) = self.decompose_arrow().expect("equal nonzero order implies arrow");
                let (c, d) = other.decompose_arrow().expect("equal nonzero order implies arrow");
                Type::arrow(a.partype(c), b.partype(d))
            }
            ProductCase::AsymmetricRight => {
                let (a, b) = self.decompose_arrow().expect("higher order implies arrow");
                Type::arrow(a.clone(), b.partype(other))
            }
        }
    }

    /// `partype` while recording each recursion step, outermost first.
    pub fn partype_traced(&self, other: &Type) -> (Type, Vec<ProductStep>) {
        let mut steps = Vec::new();
        let result = self.partype_walk(other, &mut steps);
        (result, steps)
    }

    fn partype_walk(&self, other: &Type, steps: &mut Vec<ProductStep>) -> Type {
        let case = self.product_case(other);
        let result = self.partype(other);
        steps.push(ProductStep {
            left: self.clone(),
            right: other.clone(),
            case,
            result: result.clone(),
        });
        match case {
            ProductCase::Elementary => {}
            ProductCase::AsymmetricLeft => {
                let (_, d) = other.decompose_arrow().expect("higher order implies arrow");
                self.partype_walk(d, steps);
            }
            ProductCase::Symmetric => {
                let (a, b) = self.decompose_arrow().expect("equal nonzero order implies arrow");
                let (c, d) = other.decompose_arrow().expect("equal nonzero order implies arrow");
                a.partype_walk(c, steps);
                b.partype_walk(d, steps);
            }
            ProductCase::AsymmetricRight => {
                let (_, b) = self.decompose_arrow().expect("higher order implies arrow");
                b.partype_walk(other, steps);
            }
        }
        result
    }

    /// Equalize the structures of two types by adding trivial-type vertices,
    /// each under a new arrow and only on the left. Nothing changes where
    /// structures already agree, and the parallel product is invariant:
    /// `overlay(pad(x, y)) = partype(x, y)`.
    ///
    /// The insertions mirror the product recursion. Where an operand has
    /// lower order than an arrow `c -> d` it meets, the product carries it
    /// into the `d` slot, so the padding does the same: the lower operand is
    /// padded against `d` and gains an all-trivial copy of `c`'s tree as its
    /// new input side (grown by left-insertions, and absorbed leaf-wise by
    /// `c` under overlay).
    ///
    /// The rule provably equalizes every pair; the final check exists so a
    /// failure would be reported instead of silently patched.
    pub fn pad(&self, other: &Type) -> Result<(Type, Type)> {
        let (x, y) = self.pad_inner(other);
        if !x.same_structure(&y) {
            return Err(Error::PaddingFailure(self.clone(), other.clone()));
        }
        Ok((x, y))
    }

    fn pad_inner(&self, other: &Type) -> (Type, Type) {
        match self.product_case(other) {
            ProductCase::Elementary => (self.clone(), other.clone()),
            ProductCase::AsymmetricLeft => {
                let (c, d) = other.decompose_arrow().expect("higher order implies arrow");
                let (x1, d1) = self.pad_inner(d);
                (
                    Type::arrow(c.structure().trivial_type(), x1),
                    Type::arrow(c.clone(), d1),
                )
            }
            ProductCase::Symmetric => {
                let (a, b) = self.decompose_arrow().expect("equal nonzero order implies arrow");
                let (c, d) = other.decompose_arrow().expect("equal nonzero order implies arrow");
                let (a1, c1) = a.pad_inner(c);
                let (b1, d1) = b.pad_inner(d);
                (Type::arrow(a1, b1), Type::arrow(c1, d1))
            }
            ProductCase::AsymmetricRight => {
                let (a, b) = self.decompose_arrow().expect("higher order implies arrow");
                let (b1, y1) = b.pad_inner(other);
                (
                    Type::arrow(a.clone(), b1),
                    Type::arrow(a.structure().trivial_type(), y1),
                )
            }
        }
    }

    /// Label-wise parallel product of two same-structure types: matched
    /// leaves concatenate, matched arrows recurse. Agrees with `partype` on
    /// its domain.
    pub fn overlay(&self, other: &Type) -> Result<Type> {
        match (self, other) {
            (Type::Elementary(u), Type::Elementary(v)) => {
                let mut word = u.clone();
                word.extend(v.iter().cloned());
                Ok(Type::Elementary(word))
            }
            (Type::Arrow(a, b), Type::Arrow(c, d)) => {
                Ok(Type::arrow(a.overlay(c)?, b.overlay(d)?))
            }
            _ => Err(Error::StructureMismatch(self.clone(), other.clone())),
        }
    }
}

impl fmt::Display for Type {
    /// Canonical form: brackets around a sub-expression exactly when it
    /// contains an arrow.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Elementary(labels) => {
                if labels.is_empty() {
                    f.write_str("I")
                } else {
                    for l in labels {
                        f.write_str(l.as_str())?;
                    }
                    Ok(())
                }
            }
            Type::Arrow(a, b) => {
                let side = |t: &Type| {
                    if t.is_elementary() {
                        t.to_string()
                    } else {
                        format!("({t})")
                    }
                };
                write!(f, "{}->{}", side(a), side(b))
            }
        }
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Type({self})")
    }
}

impl std::str::FromStr for Type {
    type Err = crate::error::ParseError;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        crate::parse::parse_type(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> Type {
        s.parse().unwrap()
    }

    #[test]
    fn order_of_elementary_and_nested_arrows() {
        assert_eq!(ty("I").order(), 0);
        assert_eq!(ty("AABCB").order(), 0);
        assert_eq!(ty("A->(B->C)").order(), 2);
        // the worked paper example of height three
        assert_eq!(ty("(AB->C)->(DEF->(GH->K))").order(), 3);
    }

    #[test]
    fn structure_erases_labels() {
        assert_eq!(ty("AABCB").structure(), Shape::Leaf);
        assert_eq!(ty("I").structure(), Shape::Leaf);
        assert!(ty("AABCB").same_structure(&ty("I")));
        assert!(!ty("A->(B->C)").same_structure(&ty("(D->E)->F")));
        assert!(ty("(I->A)->(B->C)").same_structure(&ty("(D->E)->(I->F)")));
        assert_eq!(ty("A->B").structure().notation(), "(* *)");
    }

    #[test]
    fn decompose_arrow_returns_the_unique_pair() {
        let (a, b) = ty("(A->B)->(C->D)").decompose_arrow().map(|(a, b)| (a.clone(), b.clone())).unwrap();
        assert_eq!(a, ty("A->B"));
        assert_eq!(b, ty("C->D"));
        let (a, b) = ty("I->I").decompose_arrow().map(|(a, b)| (a.clone(), b.clone())).unwrap();
        assert_eq!(a, ty("I"));
        assert_eq!(b, ty("I"));
        let (a, b) = ty("AB->C").decompose_arrow().map(|(a, b)| (a.clone(), b.clone())).unwrap();
        assert_eq!(a, ty("AB"));
        assert_eq!(b, ty("C"));
        assert!(matches!(ty("AB").decompose_arrow(), Err(Error::NotAnArrow(_))));
    }

    #[test]
    fn partype_four_cases() {
        // symmetric channel pair
        assert_eq!(ty("A->B").partype(&ty("C->D")), ty("AC->BD"));
        // state against channel: carried under the arrow, appended left
        assert_eq!(ty("A").partype(&ty("C->D")), ty("C->AD"));
        // the mixed-structure worked example
        assert_eq!(ty("A->(B->C)").partype(&ty("(D->E)->F")), ty("(D->AE)->(B->CF)"));
        // the trivial type is the empty word
        assert_eq!(ty("I").partype(&ty("A")), ty("A"));
        assert_eq!(ty("A").partype(&ty("I")), ty("A"));
    }

    #[test]
    fn partype_trace_labels_cases_outermost_first() {
        let (result, steps) = ty("A->(B->C)").partype_traced(&ty("(D->E)->F"));
        assert_eq!(result, ty("(D->AE)->(B->CF)"));
        let first = &steps[0];
        assert_eq!(first.case, ProductCase::Symmetric);
        assert_eq!(first.result, result);
        // the two mixed-order recursions of the worked example
        assert!(steps.iter().any(|s| {
            s.case == ProductCase::AsymmetricLeft && s.result == ty("D->AE")
        }));
        assert!(steps.iter().any(|s| {
            s.case == ProductCase::AsymmetricRight && s.result == ty("B->CF")
        }));
        assert!(steps.iter().any(|s| s.case == ProductCase::Elementary));
    }

    #[test]
    fn pad_equalizes_structures_left_only() {
        let (x1, y1) = ty("A->(B->C)").pad(&ty("(D->E)->F")).unwrap();
        assert_eq!(x1, ty("(I->A)->(B->C)"));
        assert_eq!(y1, ty("(D->E)->(I->F)"));

        let (x1, y1) = ty("A").pad(&ty("A")).unwrap();
        assert_eq!((x1, y1), (ty("A"), ty("A")));

        let (x1, y1) = ty("A").pad(&ty("C->D")).unwrap();
        assert_eq!((x1, y1), (ty("I->A"), ty("C->D")));

        // word lengths differ but the structure already matches: no padding
        let (x1, y1) = ty("AAB").pad(&ty("C")).unwrap();
        assert_eq!((x1, y1), (ty("AAB"), ty("C")));
    }

    #[test]
    fn pad_mirrors_the_product_when_the_gap_sits_on_the_input_side() {
        // the order-2 gap is against the arrow's input, so the trivial copy
        // must reproduce that input's whole tree
        let (x1, y1) = ty("A").pad(&ty("(B->C)->D")).unwrap();
        assert_eq!(x1, ty("(I->I)->A"));
        assert_eq!(y1, ty("(B->C)->D"));
        assert_eq!(x1.overlay(&y1).unwrap(), ty("A").partype(&ty("(B->C)->D")));
        assert_eq!(x1.overlay(&y1).unwrap(), ty("(B->C)->AD"));

        // regression: deep trivial-type nesting must stay product-invariant
        let x = ty("I");
        let y = ty("(I->(I->I))->I");
        let (x1, y1) = x.pad(&y).unwrap();
        assert!(x1.same_structure(&y1));
        assert_eq!(x1.overlay(&y1).unwrap(), x.partype(&y));
    }

    #[test]
    fn overlay_matches_partype_on_same_structure() {
        let (x1, y1) = ty("A->(B->C)").pad(&ty("(D->E)->F")).unwrap();
        assert_eq!(x1.overlay(&y1).unwrap(), ty("(D->AE)->(B->CF)"));
        assert_eq!(ty("I").overlay(&ty("I")).unwrap(), ty("I"));
        assert_eq!(ty("A->B").overlay(&ty("C->D")).unwrap(), ty("AC->BD"));
        assert!(matches!(
            ty("A").overlay(&ty("C->D")),
            Err(Error::StructureMismatch(..))
        ));
    }

    #[test]
    fn shape_enumeration_counts_trees_by_exact_height() {
        assert_eq!(Shape::enumerate_exact(0).len(), 1);
        assert_eq!(Shape::enumerate_exact(1).len(), 1);
        // children drawn from {leaf, node}, minus the all-short combination
        assert_eq!(Shape::enumerate_exact(2).len(), 3);
        assert_eq!(Shape::enumerate_exact(3).len(), 21);
        for s in Shape::enumerate_exact(3) {
            assert_eq!(s.height(), 3);
        }
    }

    #[test]
    fn shape_instantiation_rebuilds_the_shape() {
        let shape = ty("(A->B)->C").structure();
        let mut labels = ["D", "E", "F"].iter().map(|s| Label::new(*s).unwrap());
        let t = shape.instantiate(&mut labels).unwrap();
        assert_eq!(t, ty("(D->E)->F"));
        assert_eq!(t.structure(), shape);
    }

    #[test]
    fn labels_cannot_be_trivial_or_lowercase() {
        assert!(Label::new("I").is_err());
        assert!(Label::new("a").is_err());
        assert!(Label::new("").is_err());
        assert!(Label::new("Alice").is_ok());
        assert!(Label::new("Q2").is_ok());
    }
}
