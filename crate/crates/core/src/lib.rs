//! Exact computations in a planar algebra of cleaved links over
//! Z[q^{1/2}, q^{-1/2}].
//!
//! The library builds, for each planar diagram in a multi-holed disc, an
//! exact linear map (the partition map) between free modules whose bases are
//! cleaved links: circles crossing a marked equator, each decorated with a
//! sign. Tangle diagrams with crossings get partition maps through the cube
//! of resolutions, specializing to the Khovanov-normalized Jones polynomial
//! on closed diagrams; braid words on 2n strands act on I_{2n} through
//! annular tangles; and the Temperley-Lieb planar algebra at
//! delta = q + q^{-1} maps into the whole construction for comparison.
//!
//! Module map:
//! - [`ring`]: the coefficient ring Z[q^{1/2}, q^{-1/2}]
//! - [`combinatorics`]: noncrossing matchings and circle tracing
//! - [`cleaved`]: cleaved links, the bases of the modules I_{2n}
//! - [`diagram`]: planar diagrams, validation, composition, text format
//! - [`partition`]: weights, boundary maps, partition matrices, the pairing
//! - [`tangle`]: crossings, resolutions, skein identities, Jones values
//! - [`braid`]: braid words as annular tangles and their representations
//! - [`tlcompare`]: the Temperley-Lieb side and exact rank computations
//! - [`cli`]: the `cleaved` command-line interface

pub mod braid;
pub mod cleaved;
pub mod cli;
pub mod combinatorics;
pub mod diagram;
pub mod partition;
pub mod ring;
pub mod tangle;
pub mod tlcompare;

pub use ring::HalfLaurent;
