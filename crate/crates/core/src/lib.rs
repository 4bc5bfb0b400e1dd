//! Slide rules for stable trees and their bijections with words.

pub mod bijection;
pub mod caterpillar;
pub mod compositions;
pub mod ones_case;
pub mod parking;
pub mod patterns;
pub mod slide_rules;
pub mod trees;
pub mod verify;
pub mod word;

pub use compositions::{Composition, CompositionError, Maxzero};
pub use slide_rules::{enumerate_slide_set, is_member, slide_labeling, SlideError, SlideRule};
pub use trees::{parse_tree, LeafLabel, Node, StableTree, TreeError};
pub use word::{Word, WordError};

/// The guide's chapters, compiled so their snippets run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/compositions.md")]
    mod compositions {}
    #[doc = include_str!("../../../book/src/trees.md")]
    mod trees {}
    #[doc = include_str!("../../../book/src/slide-rules.md")]
    mod slide_rules {}
    #[doc = include_str!("../../../book/src/bijection.md")]
    mod bijection {}
    #[doc = include_str!("../../../book/src/parking.md")]
    mod parking {}
    #[doc = include_str!("../../../book/src/patterns.md")]
    mod patterns {}
    #[doc = include_str!("../../../book/src/caterpillars.md")]
    mod caterpillars {}
    #[doc = include_str!("../../../book/src/permutations.md")]
    mod permutations {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
