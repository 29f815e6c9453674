use crate::error::Result;
use crate::family::SetFamily;
use crate::height::HeightDecomposition;

/// All covering pairs `(i, j)`: member `i` is a strict subset of member `j`
/// with no member strictly between them. These are exactly the edges of the
/// family's Hasse diagram.
pub fn covering_pairs(f: &SetFamily) -> Vec<(usize, usize)> {
    let members = f.members();
    let mut pairs = Vec::new();
    for (i, &a) in members.iter().enumerate() {
        for (j, &b) in members.iter().enumerate() {
            if !a.is_proper_subset_of(b) {
                continue;
            }
            let covered = members
                .iter()
                .enumerate()
                .any(|(k, &c)| k != i && k != j && a.is_proper_subset_of(c) && c.is_proper_subset_of(b));
            if !covered {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Renders the family as a DOT digraph: one box per member, covering edges
/// pointing from subset to superset, and one same-rank group per peel layer
/// so the drawing stacks the layers bottom-up.
pub fn render_dot(f: &SetFamily, d: &HeightDecomposition) -> Result<String> {
    d.check_describes(f)?;
    let mut out = String::from("digraph family {\n");
    out.push_str("    rankdir=BT;\n");
    out.push_str("    node [shape=box];\n");
    for i in 0..f.member_count() {
        out.push_str(&format!("    s{i} [label=\"{}\"];\n", f.member_display(i)));
    }
    for p in 1..=d.h() {
        out.push_str("    { rank=same;");
        for &i in d.layer(p) {
            out.push_str(&format!(" s{i};"));
        }
        out.push_str(" }\n");
    }
    for (sub, sup) in covering_pairs(f) {
        out.push_str(&format!("    s{sub} -> s{sup};\n"));
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::height::height_decomposition;

    fn family(doc: &str) -> SetFamily {
        doc.parse().unwrap()
    }

    #[test]
    fn two_member_chain() {
        let f = family("1\n1 2\n");
        let d = height_decomposition(&f).unwrap();
        assert_eq!(covering_pairs(&f), vec![(0, 1)]);
        let dot = render_dot(&f, &d).unwrap();
        assert_eq!(
            dot,
            "digraph family {\n\
             \x20   rankdir=BT;\n\
             \x20   node [shape=box];\n\
             \x20   s0 [label=\"{1}\"];\n\
             \x20   s1 [label=\"{1,2}\"];\n\
             \x20   { rank=same; s0; }\n\
             \x20   { rank=same; s1; }\n\
             \x20   s0 -> s1;\n\
             }\n"
        );
    }

    #[test]
    fn power_set_counts() {
        let f = family("1\n2\n3\n1 2\n1 3\n2 3\n1 2 3\n");
        let d = height_decomposition(&f).unwrap();
        let pairs = covering_pairs(&f);
        assert_eq!(pairs.len(), 9);
        let dot = render_dot(&f, &d).unwrap();
        assert_eq!(dot.matches("[label=").count(), 7);
        assert_eq!(dot.matches(" -> ").count(), 9);
        assert_eq!(dot.matches("rank=same").count(), 3);
    }

    #[test]
    fn single_member_family() {
        let f = family("1 2 3\n");
        let d = height_decomposition(&f).unwrap();
        assert!(covering_pairs(&f).is_empty());
        let dot = render_dot(&f, &d).unwrap();
        assert_eq!(dot.matches("[label=").count(), 1);
        assert_eq!(dot.matches(" -> ").count(), 0);
    }

    #[test]
    fn skip_level_edges_are_not_covering() {
        // {1} is inside {1,2,3} but {1,2} sits between them.
        let f = family("1\n1 2\n1 2 3\n");
        assert_eq!(covering_pairs(&f), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn braces_balance_on_every_small_family() {
        for f in crate::oracle::enumerate_all_families(3).unwrap() {
            let d = height_decomposition(&f).unwrap();
            let dot = render_dot(&f, &d).unwrap();
            assert_eq!(dot.matches('{').count(), dot.matches('}').count());
        }
    }
}
