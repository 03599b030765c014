//! Instance files shipped with the crate.

use crate::format::load_instance;
use crate::model::Instance;

pub const HOFFMAN9: &str = include_str!("../instances/hoffman9.alb");
pub const HOFFMAN9_PAPER_ADJUSTED: &str = include_str!("../instances/hoffman9-paper-adjusted.alb");
pub const SHIRT15: &str = include_str!("../instances/shirt15.alb");

/// `(file name, contents)` for every bundled instance.
pub const ALL: [(&str, &str); 3] = [
    ("hoffman9.alb", HOFFMAN9),
    ("hoffman9-paper-adjusted.alb", HOFFMAN9_PAPER_ADJUSTED),
    ("shirt15.alb", SHIRT15),
];

/// Look up a bundled file by name, with or without the `.alb` suffix.
pub fn source(name: &str) -> Option<&'static str> {
    let stem = name.strip_suffix(".alb").unwrap_or(name);
    ALL.iter()
        .find(|(file, _)| file.strip_suffix(".alb") == Some(stem))
        .map(|(_, text)| *text)
}

pub fn hoffman9() -> Instance {
    load_instance(HOFFMAN9).expect("bundled instance is valid")
}

pub fn hoffman9_paper_adjusted() -> Instance {
    load_instance(HOFFMAN9_PAPER_ADJUSTED).expect("bundled instance is valid")
}

pub fn shirt15() -> Instance {
    load_instance(SHIRT15).expect("bundled instance is valid")
}
