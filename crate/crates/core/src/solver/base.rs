use super::broken;
use super::SolveError;
use crate::groupflow::{Solution, Z2, Z3};
use crate::multigraph::Multigraph;

/// Two nonzero pairs summing to each target `(phi2, phi3)` residual.
const CLOSING_PAIRS: [((u8, u8), [(u8, u8); 2]); 6] = [
    ((0, 0), [(1, 1), (1, 2)]),
    ((1, 0), [(1, 1), (0, 2)]),
    ((0, 1), [(0, 2), (0, 2)]),
    ((0, 2), [(0, 1), (0, 1)]),
    ((1, 1), [(1, 0), (0, 1)]),
    ((1, 2), [(1, 0), (0, 2)]),
];

fn pair((a, b): (u8, u8)) -> (Z2, Z3) {
    (Z2::new(a.into()), Z3::new(b.into()))
}

/// Loopless instances on at most two vertices.
///
/// All edges are treated as oriented `0 -> 1`. The first `m - 2` edges alternate
/// `(1, 1), (1, 2)`, and the last two come from [`CLOSING_PAIRS`] so that the total at
/// vertex 0 is `([0 in T], 1)` when U is nonempty and `([0 in T], 0)` otherwise. A single
/// edge takes the target itself.
pub(super) fn solve_base(g: &Multigraph, t: &[bool], u: &[bool]) -> Result<Solution, SolveError> {
    let m = g.edge_count();
    match g.vertex_count() {
        0 => Ok(Solution::default()),
        1 if m == 0 && !t[0] && !u[0] => Ok(Solution::default()),
        1 => Err(broken("base: one vertex with edges or a prescribed boundary")),
        2 => {
            if g.has_loops() || t[0] != t[1] || u[0] != u[1] || m == 0 || (!u[0] && m < 2) {
                return Err(broken("base: two-vertex instance outside the admissible shapes"));
            }
            let target = (Z2::new(i64::from(t[0])), if u[0] { Z3::ONE } else { Z3::ZERO });
            let mut values: Vec<(Z2, Z3)> =
                (0..m.saturating_sub(2)).map(|i| if i % 2 == 0 { pair((1, 1)) } else { pair((1, 2)) }).collect();
            let (sum2, sum3) = values.iter().fold((Z2::ZERO, Z3::ZERO), |(x, y), &(a, b)| (x + a, y + b));
            let residual = (target.0 - sum2, target.1 - sum3);
            if m == 1 {
                values.push(residual);
            } else {
                let key = (residual.0.value(), residual.1.value());
                let (_, closing) = CLOSING_PAIRS.iter().find(|(r, _)| *r == key).expect("table covers Z2 x Z3");
                values.extend(closing.iter().copied().map(pair));
            }
            let mut s = Solution::with_len(m);
            for (e, (a, b)) in values.into_iter().enumerate() {
                s.set(e, (a, b.signed(g.edge(e).0 == 0)));
            }
            Ok(s)
        }
        _ => Err(broken("base: more than two vertices")),
    }
}
