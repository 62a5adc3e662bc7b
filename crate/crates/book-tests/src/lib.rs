//! Compiles and runs the code blocks of the guide under `book/src` and of the
//! README as doctests.

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/periodic.md")]
    pub struct Periodic;
    #[doc = include_str!("../../../book/src/diffeomorphisms.md")]
    pub struct Diffeomorphisms;
    #[doc = include_str!("../../../book/src/fragmentation.md")]
    pub struct Fragmentation;
    #[doc = include_str!("../../../book/src/loops.md")]
    pub struct Loops;
    #[doc = include_str!("../../../book/src/cocycles.md")]
    pub struct Cocycles;
    #[doc = include_str!("../../../book/src/verma.md")]
    pub struct Verma;
    #[doc = include_str!("../../../book/src/verification.md")]
    pub struct Verification;
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
}
