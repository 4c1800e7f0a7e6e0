//! Graphviz rendering of a conjugacy quadrilateral.

use std::collections::BTreeMap;
use std::fmt::Write;

use ggc_core::{Alphabet, QuadrilateralTrace, Word};

/// One node per distinct vertex label; the four sides as labelled edges and
/// the `v_i - v'_i` gaps as dashed edges annotated with their length.
pub fn quadrilateral(trace: &QuadrilateralTrace, alphabet: &Alphabet) -> String {
    let mut ids: BTreeMap<Word, usize> = BTreeMap::new();
    let mut nodes = String::new();
    let mut id = |w: &Word, nodes: &mut String| -> usize {
        let next = ids.len();
        *ids.entry(w.clone()).or_insert_with(|| {
            let label = if w.is_empty() {
                "1".to_string()
            } else {
                alphabet.render(w)
            };
            writeln!(nodes, "  n{next} [label=\"{label}\"];").unwrap();
            next
        })
    };
    let mut edges = String::new();
    let sides: [(&str, &[Word], &Word); 4] = [
        ("p", &trace.p, &trace.g),
        ("p'", &trace.p_prime, &trace.g),
        ("p_h", &trace.p_h, &trace.h),
        ("p_k", &trace.p_k, &trace.k),
    ];
    for (name, path, label) in sides {
        for (i, pair) in path.windows(2).enumerate() {
            let a = id(&pair[0], &mut nodes);
            let b = id(&pair[1], &mut nodes);
            let letter = alphabet.letter_char(label.letters()[i]);
            writeln!(
                edges,
                "  n{a} -> n{b} [label=\"{letter}\", tooltip=\"{name}\"];"
            )
            .unwrap();
        }
    }
    for (i, d) in trace.distances.iter().enumerate() {
        let a = id(&trace.p[i], &mut nodes);
        let b = id(&trace.p_prime[i], &mut nodes);
        if a != b {
            writeln!(
                edges,
                "  n{a} -> n{b} [style=dashed, arrowhead=none, label=\"{d}\"];"
            )
            .unwrap();
        }
    }
    format!("digraph quadrilateral {{\n  rankdir=LR;\n{nodes}{edges}}}\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ggc_core::{build_quadrilateral, GroupContext, Presentation};

    #[test]
    fn dot_output_mentions_every_side() {
        let ctx = GroupContext::new(Presentation::free("ab").unwrap(), 0).unwrap();
        let a = ctx.presentation().alphabet();
        let t = build_quadrilateral(
            &ctx,
            &a.parse_word("b").unwrap(),
            &a.parse_word("a").unwrap(),
        )
        .unwrap();
        let dot = quadrilateral(&t, a);
        assert!(dot.starts_with("digraph"));
        for side in ["\"p\"", "\"p'\"", "\"p_h\"", "\"p_k\""] {
            assert!(dot.contains(side), "{side}");
        }
        assert!(dot.contains("style=dashed"));
    }
}
