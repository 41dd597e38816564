//! Contextual affective analysis of entities in news text.
//!
//! Verb-level connotation labels for sentiment, power, and agency are
//! learned from seed lexicons and contextual verb embeddings, predicted for
//! every verb occurrence in a corpus, and transferred to the entities that
//! are the verbs' agents and themes.
//!
//! The usual flow is [`corpus::load_corpus`] → [`induction::train`] per
//! dimension → [`scoring::score_corpus`] → [`scoring::build_profiles`] and
//! the functions in [`analysis`].

pub mod analysis;
pub mod corpus;
mod error;
pub mod eval;
pub mod induction;
mod label;
pub mod lexicon;
pub mod scoring;
pub mod synth;

pub use error::{Error, Result};
pub use label::{EntityDimension, FrameDimension, Label, Role};
