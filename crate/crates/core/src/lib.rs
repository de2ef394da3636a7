pub mod builtins;
pub mod chartab;
pub mod clifford;
pub mod cyclo;
pub mod error;
pub mod fakegal;
pub mod gf;
pub mod goursat;
pub mod group;
pub mod io;
pub mod linalg;
pub mod modrep;
pub mod perm;
pub mod projrep;
pub mod snf;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/brauer.md")]
    mod brauer {}
    #[doc = include_str!("../../../book/src/projective.md")]
    mod projective {}
    #[doc = include_str!("../../../book/src/fake_galois.md")]
    mod fake_galois {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
