/*!
Exact intersection theory on moduli spaces of flexible polygons.

A *flexible polygon* is a closed chain of `n` rigid bars with lengths
`l_1, …, l_n`, free to rotate at the joints. Its moduli space — shapes modulo
rotations and translations — is a smooth manifold for generic lengths, and its
topology changes only when the length vector crosses a *wall* where some
signed sum `±l_1 ± l_2 ± … ± l_n` vanishes. This crate computes top-degree
intersection numbers of natural cohomology classes on these spaces (the Euler
class of the planar moduli space over ℤ₂ and Chern classes of the spatial one
over ℤ) by two independent routes:

* an exact cocycle algebra on *nice* cell labels `(I J̄)` — formal products of
  codirected/antidirected edge groups with explicit multiplication rules — and
* a signed count of *triangular configurations*, where the edges collapse
  into three straight groups forming a triangle.

Both routes work in exact rational arithmetic and must agree; the test suite
holds them against each other and against closed forms for equilateral
polygons.

Modules: [`lengths`] (length vectors, genericity, perturbation, chambers),
[`algebra`] (nice factors/terms/cocycles, cup product, evaluation),
[`classes`] (Euler and Chern representatives and their monomials),
[`oracle`] (independent triangle-counting evaluators and closed forms).
*/

pub mod algebra;
pub mod classes;
pub mod lengths;
pub mod oracle;

/// Errors shared by every layer of the crate.
///
/// `NonGeneric` is raised lazily: an operation fails only when a sign or
/// comparison it actually needs is an exact tie (a wall crossing), never
/// merely because the input *could* sit on some wall elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A needed comparison of length sums is an exact tie.
    #[error("length vector lies on a wall: {0}")]
    NonGeneric(String),
    /// A length vector failed validation (size, positivity, flags).
    #[error("invalid length vector: {0}")]
    BadLengths(String),
    /// The two sides of a factor label overlap.
    #[error("factor sides overlap: {0}")]
    OverlappingSides(String),
    /// Two factors share two or more edges and no rewrite applies.
    #[error("non-transversal product: {0}")]
    NonTransversal(String),
    /// The ℤ₂ square rewrite ran out of unused edge indices.
    #[error("no fresh edge indices left for the square rewrite")]
    FreshIndexExhausted,
    /// Operands live over different coefficient rings.
    #[error("coefficient rings differ")]
    RingMismatch,
    /// Evaluation requires a homogeneous cocycle of top degree.
    #[error("cocycle is not homogeneous of top degree")]
    NotTopDegree,
    /// A monomial's total degree does not fit the polygon.
    #[error("monomial degree mismatch: {0}")]
    BadDegree(String),
    /// A monomial or class index is malformed.
    #[error("invalid monomial: {0}")]
    BadMonomial(String),
    /// Textual input (lengths, monomials, cocycles) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
