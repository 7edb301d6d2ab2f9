//! Smooth and transitive representation through `U,x`-trees.
//!
//! A node `(V,y)` has `y in f(V)`. Its children answer every family set `Y`
//! that holds `y` and escapes `H(V)`: the child is `(V|Y, z)` with `z` the
//! first point of `f(V|Y) - H(V)`. Every descendant of `(V,y)` then lies
//! outside `H(V)`. The attack relation is "is a proper descendant of".
//!
//! Points outside the kernel are never chosen. They either get a root `({},x)`
//! whose children are `(U, first of f(U))` for every `U` holding `x`, or no
//! copy at all when the structure is restricted to the kernel.

use std::collections::HashMap;

use super::{hull, kernel, smooth_preconditions};
use crate::choice::ChoiceFunction;
use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::structure::PreferentialStructure;

pub fn construct_smooth_transitive(
    f: &ChoiceFunction,
    restrict_to_kernel: bool,
) -> Result<PreferentialStructure> {
    smooth_preconditions(f)?;
    let d = f.domain();
    let k = kernel(f);
    let outside = d.base() - k;

    let mut nodes: Vec<(PointSet, usize)> = Vec::new();
    let mut index: HashMap<(PointSet, usize), usize> = HashMap::new();
    let mut children: Vec<Vec<usize>> = Vec::new();
    let mut intern = |key: (PointSet, usize), nodes: &mut Vec<_>, children: &mut Vec<Vec<usize>>| {
        *index.entry(key).or_insert_with(|| {
            nodes.push(key);
            children.push(Vec::new());
            nodes.len() - 1
        })
    };

    if !restrict_to_kernel {
        for x in outside {
            let root = intern((PointSet::EMPTY, x), &mut nodes, &mut children);
            for (u, fu) in f.entries() {
                if !u.contains(x) {
                    continue;
                }
                let z = fu.first().ok_or_else(|| Error::Precondition {
                    condition: "nonempty-choice".into(),
                    witness: format!("U={} x={} (restrict to the kernel instead)", d.show(u), d.name(x)),
                })?;
                let c = intern((u, z), &mut nodes, &mut children);
                children[root].push(c);
            }
        }
    }
    for (v, fv) in f.entries() {
        for y in fv {
            intern((v, y), &mut nodes, &mut children);
        }
    }

    // Expand breadth-first; V strictly grows along every edge.
    let mut next = 0;
    while next < nodes.len() {
        let (v, y) = nodes[next];
        if v.is_empty() && outside.contains(y) && !restrict_to_kernel {
            next += 1;
            continue;
        }
        let h = hull(f, v);
        for ys in f.family().iter().copied() {
            if !ys.contains(y) || ys.is_subset(h) {
                continue;
            }
            let w = v | ys;
            let fw = f
                .get(w)
                .ok_or_else(|| Error::Invariant(format!("{} is not in the family", d.show(w))))?;
            let z = (fw - h).first().ok_or_else(|| {
                Error::Invariant(format!("choice of {} lies inside H({})", d.show(w), d.show(v)))
            })?;
            let c = intern((w, z), &mut nodes, &mut children);
            children[next].push(c);
        }
        next += 1;
    }

    let mut s = PreferentialStructure::new(d.names().to_vec())?;
    for &(v, y) in &nodes {
        s.add_copy(y, format!("{}/{}", d.show(v), d.name(y)));
    }
    for (parent, kids) in children.iter().enumerate() {
        for &c in kids {
            s.insert_edge(c, parent);
        }
    }
    let s = s.transitive_closure();
    if let Some(c) = s.self_attacking().first() {
        return Err(Error::Invariant(format!("copy {} lies below itself", s.copy_name(*c))));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::super::tests::s1;
    use super::*;
    use crate::choice::Domain;
    use crate::general::tests::{names, ps};
    use crate::structure::verify_representation;
    use std::sync::Arc;

    #[test]
    fn s1_trees() {
        let (f, _) = s1();
        let s = construct_smooth_transitive(&f, false).unwrap();
        assert!(verify_representation(&s, &f).holds);
        assert!(s.is_smooth(f.domain()).holds);
        assert!(s.is_transitive().holds);
        assert!(s.is_cycle_free().holds);
        assert_eq!(s.copy(0).label, "{a}/a");
    }

    #[test]
    fn non_kernel_point() {
        // c is never chosen: {c} -> {} is excluded by using a family without it
        let n = names(&["a", "b", "c"]);
        let fam = vec![ps(0b001), ps(0b011), ps(0b101), ps(0b111), ps(0b010), ps(0b110)];
        let d = Arc::new(Domain::new(n, fam).unwrap());
        let f = ChoiceFunction::from_fn(d, |y| PointSet::singleton(y.first().unwrap())).unwrap();
        assert_eq!(kernel(&f), ps(0b011));
        let full = construct_smooth_transitive(&f, false).unwrap();
        assert!(full.copies().iter().any(|c| c.label == "{}/c"));
        assert!(verify_representation(&full, &f).holds);
        assert!(full.is_smooth(f.domain()).holds);
        let kern = construct_smooth_transitive(&f, true).unwrap();
        assert!(kern.copies_of(2).is_empty());
        assert!(verify_representation(&kern, &f).holds);
    }
}
