//! Closed-form operator norms: the Davies semigroup, embeddings between
//! weighted spaces of entire functions, and general Gaussian Weyl symbols.

pub mod davies;
pub mod embedding;
pub mod gaussian;

pub use davies::{davies_norm, davies_singular_values, ho_action, Classification, DaviesResult};
pub use embedding::{
    davies_to_embedding, embedding_norm, embedding_norm_ab, embedding_to_davies, weight_reduce, EmbeddingResult,
    HolomorphicWeight,
};
pub use gaussian::{general_gaussian_norm, general_gaussian_norm_report, semigroup_norm, supersymmetric_norm, GaussianNormReport};
