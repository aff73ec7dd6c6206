//! Qualitative parity: steer into a strongly connected part whose least
//! edge rank is even.

use automata_core::{EdgeId, Quatomaton};
use graph_analysis::{accepting_parts, shortest_path_over, shortest_path_to_targets};

use crate::{components, internal_letters, letters_of, Built, LetterSet, Mode, Strength};

pub(crate) fn build(a: &Quatomaton, mode: Mode) -> Built {
    let c = components(a);
    let parts: Vec<(Vec<EdgeId>, i64)> = c.msccs.iter().flat_map(|m| accepting_parts(a, &m.edges)).collect();
    let mut targets = vec![false; a.edges().len()];
    for (part, _) in &parts {
        for &e in part {
            targets[e] = true;
        }
    }
    let paths = shortest_path_to_targets(a, &targets, None);
    let dead: Vec<bool> = paths.iter().map(|p| p.distance.is_none()).collect();
    let all_out = |s| letters_of(a, a.out_edges(s).iter().copied());
    let sets = match mode {
        Mode::Any => (0..a.num_states()).map(|s| if dead[s] { all_out(s) } else { paths[s].first_letters.clone() }).collect(),
        Mode::Cyclic => {
            let mut sets: Vec<Option<LetterSet>> = vec![None; a.num_states()];
            for (part, d) in &parts {
                let in_part = |e: EdgeId| part.binary_search(&e).is_ok();
                let least: Vec<bool> = (0..a.edges().len()).map(|e| in_part(e) && a.edge_rank(e) == Some(*d)).collect();
                let toward = shortest_path_over(a, &least, in_part);
                let mut members: Vec<usize> = part.iter().flat_map(|&e| [a.edge(e).from, a.edge(e).to]).collect();
                members.sort_unstable();
                members.dedup();
                for s in members {
                    // every return into s through the part crosses a least-rank edge
                    let closes = part.iter().all(|&e| a.edge(e).to != s || least[e]);
                    sets[s] = Some(if closes {
                        letters_of(a, a.out_edges(s).iter().copied().filter(|&e| in_part(e)))
                    } else {
                        toward[s].first_letters.clone()
                    });
                }
            }
            (0..a.num_states())
                .map(|s| sets[s].take().unwrap_or_else(|| if c.component[s].is_some() { internal_letters(a, &c, s) } else { LetterSet::new() }))
                .collect()
        }
    };
    Built { dead: Some(dead), ..Built::simple(Strength::Weak, sets) }
}
