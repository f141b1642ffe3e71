//! Tidiness, compliance with a given choice transducer, and extraction of a
//! minimal choice transducer.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::automaton::{ChoiceTransducer, Letter, Nmda, State, Word};
use crate::decide::{Verdict, Witness};
use crate::error::{Error, Result};
use crate::rational::as_u64;

/// Breadth-first parent and letter of every visited state pair.
type PairParents = HashMap<(State, State), Option<((State, State), Letter)>>;

fn path_to<K: Copy + Eq + std::hash::Hash>(parent: &HashMap<K, Option<(K, Letter)>>, mut k: K) -> Word {
    let mut word = Vec::new();
    while let Some(Some((p, l))) = parent.get(&k) {
        word.push(*l);
        k = *p;
    }
    word.reverse();
    word
}

/// Decides whether all runs on every word agree on the last discount factor.
/// When they do not, the witness is a shortest word on which two runs end
/// with different factors.
pub fn is_tidy(a: &Nmda) -> Verdict {
    let mut parent: PairParents = HashMap::new();
    let mut queue = VecDeque::new();
    for &p in a.initial() {
        for &q in a.initial() {
            parent.insert((p, q), None);
            queue.push_back((p, q));
        }
    }
    while let Some((p, q)) = queue.pop_front() {
        for l in 0..a.alphabet().len() {
            for t1 in a.out_transitions(p, l) {
                for t2 in a.out_transitions(q, l) {
                    if t1.discount != t2.discount {
                        let mut word = path_to(&parent, (p, q));
                        word.push(l);
                        return Verdict::refuted(Witness::Finite(word));
                    }
                    let next = (t1.target, t2.target);
                    if let Entry::Vacant(e) = parent.entry(next) {
                        e.insert(Some(((p, q), l)));
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    Verdict::proved()
}

fn check_alphabet(a: &Nmda, t: &ChoiceTransducer) -> Result<()> {
    if a.alphabet() == t.alphabet() {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch)
    }
}

/// Decides whether every reachable transition of `a` carries the discount
/// factor that `t` outputs on the same word.
pub fn is_compliant(a: &Nmda, t: &ChoiceTransducer) -> Result<Verdict> {
    check_alphabet(a, t)?;
    let mut parent: PairParents = HashMap::new();
    let mut queue = VecDeque::new();
    for &q in a.initial() {
        parent.insert((q, t.initial()), None);
        queue.push_back((q, t.initial()));
    }
    while let Some((q, s)) = queue.pop_front() {
        for l in 0..a.alphabet().len() {
            let (s_next, output) = t.step(s, l);
            for tr in a.out_transitions(q, l) {
                if as_u64(&tr.discount) != Some(output) {
                    let mut word = path_to(&parent, (q, s));
                    word.push(l);
                    return Ok(Verdict::refuted(Witness::Finite(word)));
                }
                let next = (tr.target, s_next);
                if let Entry::Vacant(e) = parent.entry(next) {
                    e.insert(Some(((q, s), l)));
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(Verdict::proved())
}

/// Extracts the minimal transducer of the choice function of a tidy
/// integral automaton.
///
/// The discount factor of a step depends only on the set of states reachable
/// on the prefix, so the subset construction yields a transducer, which is
/// then minimized by partition refinement.
pub fn choice_transducer_of(a: &Nmda) -> Result<ChoiceTransducer> {
    a.require_integral()?;
    if let Some(w) = is_tidy(a).witness {
        return Err(Error::NotTidy {
            witness: w.render(a.alphabet()),
        });
    }
    let letters = a.alphabet().len();
    let start: BTreeSet<State> = a.initial().iter().copied().collect();
    let mut index = HashMap::from([(start.clone(), 0usize)]);
    let mut subsets = vec![start];
    let mut delta: Vec<Vec<(State, u64)>> = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        let mut row = Vec::with_capacity(letters);
        for l in 0..letters {
            let mut next = BTreeSet::new();
            let mut output = None;
            for &q in &subsets[i] {
                for t in a.out_transitions(q, l) {
                    next.insert(t.target);
                    output.get_or_insert_with(|| as_u64(&t.discount));
                }
            }
            let output = output.flatten().ok_or(Error::NotIntegral)?;
            let j = *index.entry(next.clone()).or_insert_with(|| {
                subsets.push(next);
                subsets.len() - 1
            });
            row.push((j, output));
        }
        delta.push(row);
        i += 1;
    }
    Ok(minimize(a, &delta))
}

/// Moore partition refinement of a complete Mealy table rooted at state 0.
fn minimize(a: &Nmda, delta: &[Vec<(State, u64)>]) -> ChoiceTransducer {
    let n = delta.len();
    let mut block: Vec<usize> = vec![0; n];
    let mut count = 1;
    loop {
        let mut keys: HashMap<Vec<(usize, u64)>, usize> = HashMap::new();
        let mut next_block = vec![0; n];
        for q in 0..n {
            let mut key: Vec<(usize, u64)> = vec![(block[q], 0)];
            key.extend(delta[q].iter().map(|&(p, o)| (block[p], o)));
            let len = keys.len();
            next_block[q] = *keys.entry(key).or_insert(len);
        }
        let new_count = keys.len();
        block = next_block;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let mut rep = vec![usize::MAX; count];
    for q in 0..n {
        if rep[block[q]] == usize::MAX {
            rep[block[q]] = q;
        }
    }
    let table = rep
        .iter()
        .map(|&q| delta[q].iter().map(|&(p, o)| (block[p], o)).collect())
        .collect();
    ChoiceTransducer::new(
        a.alphabet().clone(),
        (0..count).map(|i| format!("s{i}")).collect(),
        block[0],
        table,
    )
    .expect("minimized transducer is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::fixtures::fixture;
    use crate::gen::subfamilies::letter_oriented;

    #[test]
    fn fig2_is_not_tidy() {
        let a = fixture("fig2").nmda();
        let v = is_tidy(&a);
        assert!(!v.holds);
        assert_eq!(v.witness.unwrap().render(a.alphabet()), "a");
    }

    #[test]
    fn tidy_fixtures() {
        for name in ["fig7_nda", "fig8", "fig9", "fig14_nmda", "fig10_nda"] {
            assert!(is_tidy(&fixture(name).nmda()).holds, "{name}");
        }
    }

    #[test]
    fn compliance_with_given_transducers() {
        let a = fixture("fig14_nmda").nmda();
        let t = fixture("fig14_transducer").transducer();
        assert!(is_compliant(&a, &t).unwrap().holds);
        let a9 = fixture("fig9").nmda();
        let t13 = fixture("fig13_transducer").transducer();
        assert!(is_compliant(&a9, &t13).unwrap().holds);
        let a8 = fixture("fig8").nmda();
        let two = letter_oriented(a8.alphabet(), &[2, 2]).unwrap();
        let v = is_compliant(&a8, &two).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness.unwrap().render(a8.alphabet()), "a");
    }

    #[test]
    fn extracted_transducers_are_minimal() {
        let t7 = choice_transducer_of(&fixture("fig7_nda").nmda()).unwrap();
        assert_eq!(t7.num_states(), 1);
        assert_eq!(t7.step(0, 0), (0, 2));
        let t8 = choice_transducer_of(&fixture("fig8").nmda()).unwrap();
        assert_eq!(t8.num_states(), 1);
        assert_eq!((t8.step(0, 0).1, t8.step(0, 1).1), (3, 2));
        let a9 = fixture("fig9").nmda();
        let t9 = choice_transducer_of(&a9).unwrap();
        assert_eq!(t9.num_states(), 2);
        assert!(is_compliant(&a9, &t9).unwrap().holds);
    }
}
