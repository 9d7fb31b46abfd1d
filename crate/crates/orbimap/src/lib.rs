//! Counting maps on closed surfaces up to all homeomorphisms.

pub mod assembly;
pub mod brute_oracle;
pub mod epimorphisms;
pub mod error;
pub mod numtheory;
pub mod orbifold_census;
pub mod quotient_dp;
pub mod reference;

pub use error::OrbimapError;

// Book chapters compile and run as doctests.
#[cfg(doctest)]
mod booktest {
    macro_rules! booktest {
        ($i:ident) => {
            #[doc = include_str!(concat!("../../../book/src/", stringify!($i), ".md"))]
            mod $i {}
        };
    }
    booktest!(introduction);
    booktest!(counting);
    booktest!(orbifolds);
    booktest!(quotient_maps);
    booktest!(oracle);
    booktest!(cli);
}
