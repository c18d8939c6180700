//! Fuzzy record linkage.
//!
//! Links records of two tabular datasets that describe the same entity:
//! candidate pairs are chosen by crisp or fuzzy blocking, compared column by
//! column, combined into a total linkage score in `[0, 1]` using weights
//! derived from linguistic relevance terms, and labelled Match, Possible
//! Match or Non-match by fuzzy c-means.
//!
//! ```
//! use fuzzylink::dataset::Dataset;
//! use fuzzylink::pipeline::{run_linkage, LinkageConfig};
//!
//! let left = Dataset::new(
//!     vec!["name".into(), "city".into()],
//!     vec![vec!["ST MARY HOSPITAL".into(), "OCALA".into()]],
//! )?;
//! let right = Dataset::new(
//!     vec!["name".into(), "city".into()],
//!     vec![vec!["ST MARYS HOSPITAL".into(), "OCALA".into()]],
//! )?;
//! let config = LinkageConfig::from_toml_str(
//!     "[[link_columns]]\nfield = \"name\"\n\n[[link_columns]]\nfield = \"city\"\n",
//! )?;
//! let run = run_linkage(&config, &left, &right)?;
//! assert_eq!(run.label_of(&run.pairs[0]), "Match");
//! # Ok::<(), fuzzylink::Error>(())
//! ```
//!
//! The guide in `book/` covers each stage in depth.

pub mod baselines;
pub mod blocking;
pub mod clustering;
pub mod dataset;
pub mod error;
pub mod fahp;
pub mod fuzzy;
pub mod fwa;
pub mod inference;
pub mod pipeline;
pub mod similarity;

pub use error::{Error, Result};

macro_rules! guide {
    ($($name:ident => $file:literal),* $(,)?) => {
        $(
            #[cfg(doctest)]
            #[doc = include_str!(concat!("../../../book/src/", $file))]
            mod $name {}
        )*
    };
}

guide! {
    guide_introduction => "introduction.md",
    guide_fuzzy_numbers => "fuzzy-numbers.md",
    guide_string_matching => "string-matching.md",
    guide_blocking => "blocking.md",
    guide_fahp => "fahp.md",
    guide_fwa => "fwa.md",
    guide_inference => "inference.md",
    guide_clustering => "clustering.md",
    guide_baselines => "baselines.md",
    guide_pipeline => "pipeline.md",
}
