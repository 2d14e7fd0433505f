//! Built-in cycles as cycle-file text.

use crate::parse::{parse_cycle_file, NamedCycle};
use intreg_core::Result;

pub struct Fixture {
    pub name: &'static str,
    pub about: &'static str,
    pub text: &'static str,
}

pub const FIXTURES: [Fixture; 5] = [
    Fixture {
        name: "z1_totaro",
        about: "(1-1/t, 1-t, 1/t) over Q; value pi^2/6, 24-torsion",
        text: "field cyclotomic(1)\ncycle z1_totaro n=3 p=2\ncomponent mult=1 1-1/t ; 1-t ; 1/t\n",
    },
    Fixture {
        name: "petras_zeta5",
        about: "three components over Q(zeta_5); value 7 pi^2/30, 120-torsion",
        text: "field cyclotomic(5)\ncycle petras_zeta5 n=3 p=2\n\
               component mult=1 1-1/t ; 1-t ; 1/t\n\
               component mult=1 1-zeta/t ; 1-t ; 1/t^5\n\
               component mult=1 1-zeta^4/t ; 1-t ; 1/t^5\n",
    },
    Fixture {
        name: "mccarthy_counterexample",
        about: "(F, G, H) over Q(i); equal phases meet at t = tan(eps)",
        text: "field cyclotomic(4)\ncycle mccarthy_counterexample n=3 p=2\n\
               component mult=1 i*t-1 ; -(1+t)*(1+3*t)/((1+i*t)*(1-2*t)) ; (i*t-1)/(3+t)\n",
    },
    Fixture {
        name: "graph_4_2",
        about: "(t, (t-4)/(t-2)) in the 2-cube; boundary {4} - 2{2}",
        text: "field cyclotomic(1)\ncycle graph_4_2 n=2 p=1\ncomponent mult=1 t ; (t-4)/(t-2)\n",
    },
    Fixture {
        name: "z_minus1",
        about: "(1+1/t, 1-t, 1/t) over Q; not closed, line integral -Li2(-1)",
        text: "field cyclotomic(1)\ncycle z_minus1 n=3 p=2\ncomponent mult=1 1+1/t ; 1-t ; 1/t\n",
    },
];

pub fn fixture_text(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|f| f.name == name).map(|f| f.text)
}

pub fn load_fixture(name: &str) -> Option<Result<NamedCycle>> {
    let text = fixture_text(name)?;
    Some(parse_cycle_file(text).map(|mut f| f.cycles.remove(0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use intreg_core::fixtures;

    #[test]
    fn text_matches_library_fixtures() {
        assert_eq!(FIXTURES.len(), fixtures::NAMES.len());
        for (f, name) in FIXTURES.iter().zip(fixtures::NAMES) {
            assert_eq!(f.name, name);
            let c = load_fixture(name).unwrap().unwrap();
            assert_eq!(c.name, name);
            assert_eq!(c.cycle, fixtures::by_name(name).unwrap(), "{}", name);
        }
    }
}
