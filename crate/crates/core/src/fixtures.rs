//! The named posets shipped under `fixtures/`.

use crate::poset::{parse_poset, Poset};

macro_rules! fixture {
    ($name:ident, $file:literal) => {
        pub fn $name() -> Poset {
            parse_poset(include_str!(concat!("../../../fixtures/", $file)))
                .expect(concat!("fixture ", $file, " parses"))
        }
    };
}

fixture!(fig1, "fig1.poset");
fixture!(ex33, "ex33.poset");
fixture!(p1, "p1.poset");
fixture!(p2, "p2.poset");
fixture!(p3, "p3.poset");
fixture!(forb1, "forb1.poset");
fixture!(forb2, "forb2.poset");
fixture!(forb3, "forb3.poset");
fixture!(bowtie, "bowtie.poset");
fixture!(chain3, "chain3.poset");

/// Name and poset for every fixture.
pub fn all() -> Vec<(&'static str, Poset)> {
    vec![
        ("fig1", fig1()),
        ("ex33", ex33()),
        ("p1", p1()),
        ("p2", p2()),
        ("p3", p3()),
        ("forb1", forb1()),
        ("forb2", forb2()),
        ("forb3", forb3()),
        ("bowtie", bowtie()),
        ("chain3", chain3()),
    ]
}
