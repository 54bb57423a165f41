pub mod bounds;
pub mod cache;
pub mod charsums;
pub mod cli;
pub mod curves;
pub mod diophantine;
pub mod fields;
pub mod mobius;
pub mod mp;
pub mod zeta;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields-and-curves.md")]
    mod fields_and_curves {}
    #[doc = include_str!("../../../book/src/zeta.md")]
    mod zeta {}
    #[doc = include_str!("../../../book/src/mobius.md")]
    mod mobius {}
    #[doc = include_str!("../../../book/src/diophantine.md")]
    mod diophantine {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/charsums.md")]
    mod charsums {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
