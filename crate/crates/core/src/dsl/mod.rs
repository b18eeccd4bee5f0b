//! Text formats: policies, realization profiles, universe files and normal forms.

mod lexer;
mod normal_text;
mod policy;
mod profile;
mod universe_file;

pub use normal_text::{parse_normal_form, print_normal_form};
pub use policy::{parse_policy, print_policy, resolve, ParseOptions, PolicyDocument, PolicyExpr, PredExpr};
pub use profile::{parse_profile, print_profile};
pub use universe_file::{parse_universe, print_universe};
