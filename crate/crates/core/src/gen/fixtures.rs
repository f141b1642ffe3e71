//! The automata, transducers and machines of the worked examples, loadable
//! by name.

use crate::automaton::{ChoiceTransducer, Dmda, Nfa, Nmda};
use crate::cli::format::{parse_document, Document};
use crate::gen::counter::CounterMachine;

macro_rules! fixture_table {
    ($($name:literal => $file:literal),* $(,)?) => {
        const TABLE: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../../fixtures/", $file)))),*
        ];
    };
}

fixture_table! {
    "fig2" => "fig2.nmda",
    "fig3" => "fig3.nmda",
    "fig4_a" => "fig4_a.nmda",
    "fig4_b" => "fig4_b.nmda",
    "fig5_a" => "fig5_a.nmda",
    "fig5_b" => "fig5_b.nmda",
    "fig6_cm" => "fig6_cm.cm",
    "fig7_nda" => "fig7_nda.nmda",
    "fig7_dmda" => "fig7_dmda.nmda",
    "fig8" => "fig8.nmda",
    "fig9" => "fig9.nmda",
    "fig10_nda" => "fig10_nda.nmda",
    "fig10_dmda" => "fig10_dmda.nmda",
    "fig11" => "fig11.nmda",
    "fig12" => "fig12.nmda",
    "fig13_transducer" => "fig13_transducer.tr",
    "fig14_nmda" => "fig14_nmda.nmda",
    "fig14_transducer" => "fig14_transducer.tr",
    "fig15_nfa" => "fig15_nfa.nfa",
}

/// A named fixture and its source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fixture {
    /// The fixture's name.
    pub name: &'static str,
    /// The document in the text format.
    pub text: &'static str,
}

impl Fixture {
    /// The parsed document.
    pub fn document(&self) -> Document {
        parse_document(self.text).unwrap_or_else(|e| panic!("fixture {} is malformed: {e}", self.name))
    }

    /// The fixture as an automaton.
    ///
    /// # Panics
    /// When the fixture is not an NMDA or DMDA.
    pub fn nmda(&self) -> Nmda {
        match self.document() {
            Document::Nmda(a) => a,
            Document::Dmda(d) => d.into_nmda(),
            other => panic!("fixture {} is a {}", self.name, other.kind()),
        }
    }

    /// The fixture as a deterministic automaton.
    ///
    /// # Panics
    /// When the fixture is not deterministic.
    pub fn dmda(&self) -> Dmda {
        Dmda::new(self.nmda()).unwrap_or_else(|e| panic!("fixture {} is not deterministic: {e}", self.name))
    }

    /// The fixture as a transducer.
    ///
    /// # Panics
    /// When the fixture is not a transducer.
    pub fn transducer(&self) -> ChoiceTransducer {
        match self.document() {
            Document::Transducer(t) => t,
            other => panic!("fixture {} is a {}", self.name, other.kind()),
        }
    }

    /// The fixture as an NFA.
    ///
    /// # Panics
    /// When the fixture is not an NFA.
    pub fn nfa(&self) -> Nfa {
        match self.document() {
            Document::Nfa(n) => n,
            other => panic!("fixture {} is a {}", self.name, other.kind()),
        }
    }

    /// The fixture as a counter machine.
    ///
    /// # Panics
    /// When the fixture is not a counter machine.
    pub fn machine(&self) -> CounterMachine {
        match self.document() {
            Document::Machine(m) => m,
            other => panic!("fixture {} is a {}", self.name, other.kind()),
        }
    }
}

/// Every fixture, in a fixed order.
pub fn fixtures() -> Vec<Fixture> {
    TABLE.iter().map(|&(name, text)| Fixture { name, text }).collect()
}

/// The fixture with the given name, if any.
pub fn try_fixture(name: &str) -> Option<Fixture> {
    TABLE
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(name, text)| Fixture { name, text })
}

/// The fixture with the given name.
///
/// # Panics
/// When no fixture has that name.
pub fn fixture(name: &str) -> Fixture {
    try_fixture(name).unwrap_or_else(|| panic!("no fixture named {name}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_parses() {
        for f in fixtures() {
            f.document();
        }
        assert!(try_fixture("nope").is_none());
    }

    #[test]
    fn fig3_shape() {
        let a = fixture("fig3").nmda();
        assert_eq!((a.num_states(), a.transitions().len()), (3, 9));
    }

    #[test]
    fn deterministic_fixtures() {
        for name in ["fig4_a", "fig4_b", "fig5_a", "fig5_b", "fig7_dmda", "fig10_dmda"] {
            fixture(name).dmda();
        }
    }
}
