use super::{bipartite_length_ok, length_budget, parity_threshold, Hub, Side};
use crate::bitset::BitSet;
use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, Path};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Pairs `(s_i, t_i)` to join by vertex-disjoint paths of lengths `ℓ_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionRequest {
    pub pairs: Vec<(usize, usize)>,
    pub lengths: Vec<usize>,
}

impl ConnectionRequest {
    pub fn new(pairs: Vec<(usize, usize)>, lengths: Vec<usize>) -> Self {
        ConnectionRequest { pairs, lengths }
    }

    fn check(&self, hub: &Hub, pair_cap: usize, n: usize) -> Result<BitSet> {
        let m = self.pairs.len();
        if m != self.lengths.len() {
            return invalid(format!("{m} pairs but {} lengths", self.lengths.len()));
        }
        if m > pair_cap {
            return invalid(format!("{m} pairs exceed ⌊u^(1-ε)⌋ = {pair_cap}"));
        }
        let total: usize = self.lengths.iter().map(|l| l + 1).sum();
        if total > length_budget(hub.u, hub.eps) {
            return invalid(format!(
                "Σ(ℓ_i + 1) = {total} exceeds ⌊2(1-ε)u⌋ = {}",
                length_budget(hub.u, hub.eps)
            ));
        }
        let mut ends = BitSet::new(n);
        for (&(s, t), &l) in self.pairs.iter().zip(&self.lengths) {
            if l < 2 {
                return invalid(format!("length {l} below 2"));
            }
            for v in [s, t] {
                if hub.side(v).is_none() {
                    return invalid(format!("endpoint {v} not in A ∪ B"));
                }
                if !ends.insert(v) {
                    return invalid(format!("endpoint {v} repeated"));
                }
            }
        }
        Ok(ends)
    }
}

fn exhausted(what: &str) -> Error {
    Error::GuaranteeViolated(format!("hub resources exhausted: {what}"))
}

/// Vertex-disjoint `s_i t_i`-paths of exactly the requested lengths inside `A ∪ B ∪ D`.
pub fn hub_connect(g: &Graph, hub: &Hub, req: &ConnectionRequest) -> Result<Vec<Path>> {
    let ends = req.check(hub, hub.max_pairs(), g.order())?;
    for (&(s, t), &l) in req.pairs.iter().zip(&req.lengths) {
        if !bipartite_length_ok(hub, s, t, l)? {
            return invalid(format!("{l} is not a bipartite length for {{{s},{t}}}"));
        }
    }
    let paths = route(g, hub, &req.pairs, &req.lengths, &ends)?;
    check_connection(g, hub, req, &paths)?;
    Ok(paths)
}

/// Long path `R` through the backbone avoiding the endpoints, built on demand.
///
/// The backbone minus the endpoints falls into fragments; each is trimmed to
/// start and end in `A`, and consecutive fragments are linked through unused
/// common neighbours in `D`.
struct Reservoir {
    runs: std::vec::IntoIter<Vec<usize>>,
    r: Vec<usize>,
}

impl Reservoir {
    fn new(hub: &Hub, ends: &BitSet) -> Self {
        let c = &hub.backbone.vertices;
        let k = c.len();
        let mut runs = Vec::new();
        match (0..k).find(|&i| ends.contains(c[i])) {
            None => runs.push(c.clone()),
            Some(cut) => {
                let mut cur = Vec::new();
                for j in 1..=k {
                    let v = c[(cut + j) % k];
                    if ends.contains(v) {
                        if !cur.is_empty() {
                            runs.push(std::mem::take(&mut cur));
                        }
                    } else {
                        cur.push(v);
                    }
                }
            }
        }
        let runs: Vec<Vec<usize>> = runs
            .into_iter()
            .filter_map(|mut run| {
                if hub.side(run[0]) == Some(Side::B) {
                    run.remove(0);
                }
                if run.last().is_some_and(|&v| hub.side(v) == Some(Side::B)) {
                    run.pop();
                }
                (!run.is_empty()).then_some(run)
            })
            .collect();
        Reservoir {
            runs: runs.into_iter(),
            r: Vec::new(),
        }
    }

    /// Extends `R` until it has at least `len` vertices.
    fn ensure(&mut self, g: &Graph, dfree: &mut BitSet, len: usize) -> Result<()> {
        while self.r.len() < len {
            let run = self
                .runs
                .next()
                .ok_or_else(|| exhausted("backbone path R too short"))?;
            if let Some(&last) = self.r.last() {
                let mut cand = g.neighbors(last).intersection(g.neighbors(run[0]));
                cand.intersect_with(dfree);
                let d = cand
                    .first()
                    .ok_or_else(|| exhausted("no reserve vertex to link fragments"))?;
                dfree.remove(d);
                self.r.push(d);
            }
            self.r.extend(run);
        }
        Ok(())
    }
}

fn common_free(g: &Graph, x: usize, y: usize, free: &BitSet) -> BitSet {
    let mut c = g.neighbors(x).intersection(g.neighbors(y));
    c.intersect_with(free);
    c
}

/// The routing itself: no request-size checks, only endpoint distinctness assumed.
fn route(
    g: &Graph,
    hub: &Hub,
    pairs: &[(usize, usize)],
    lengths: &[usize],
    ends: &BitSet,
) -> Result<Vec<Path>> {
    let mut dfree = BitSet::from_iter_with(g.order(), hub.d.iter().copied());
    let mut res = Reservoir::new(hub, ends);
    let mut pos = 0;
    let mut paths = Vec::with_capacity(pairs.len());
    for (&(s, t), &l) in pairs.iter().zip(lengths) {
        let p = match l {
            2 => {
                let d = common_free(g, s, t, &dfree)
                    .first()
                    .ok_or_else(|| exhausted("N(s) ∩ N(t) ∩ D"))?;
                dfree.remove(d);
                vec![s, d, t]
            }
            3 => {
                let mut found = None;
                for x in g.neighbors(s).intersection(&dfree).iter() {
                    if let Some(y) = common_free(g, t, x, &dfree).first() {
                        found = Some((x, y));
                        break;
                    }
                }
                let (x, y) = found.ok_or_else(|| exhausted("no reserve bridge of length 3"))?;
                dfree.remove(x);
                dfree.remove(y);
                vec![s, x, y, t]
            }
            _ => {
                // a window of ℓ−3 consecutive vertices of R, bridged to s and t through D
                let w = l - 3;
                let mut found = None;
                let mut p = pos;
                while found.is_none() {
                    res.ensure(g, &mut dfree, p + w)?;
                    let (x, y) = (res.r[p], res.r[p + w - 1]);
                    if let Some(bs) = common_free(g, s, x, &dfree).first() {
                        let mut ct = common_free(g, t, y, &dfree);
                        ct.remove(bs);
                        if let Some(bt) = ct.first() {
                            found = Some((p, bs, bt));
                            break;
                        }
                    }
                    p += 1;
                }
                let (p, bs, bt) = found.expect("loop exits with a window");
                dfree.remove(bs);
                dfree.remove(bt);
                pos = p + w;
                let mut v = Vec::with_capacity(l + 1);
                v.push(s);
                v.push(bs);
                v.extend_from_slice(&res.r[p..p + w]);
                v.push(bt);
                v.push(t);
                v
            }
        };
        paths.push(Path::unchecked(p));
    }
    Ok(paths)
}

/// Checks endpoints, exact lengths, containment in `A ∪ B ∪ D` and pairwise disjointness.
pub fn check_connection(
    g: &Graph,
    hub: &Hub,
    req: &ConnectionRequest,
    paths: &[Path],
) -> Result<()> {
    let bad = |m: String| Err(Error::GuaranteeViolated(format!("connection check: {m}")));
    if paths.len() != req.pairs.len() {
        return bad(format!(
            "{} paths for {} pairs",
            paths.len(),
            req.pairs.len()
        ));
    }
    let inside = hub.vertex_set(g.order());
    let mut used = BitSet::new(g.order());
    for ((p, &(s, t)), &l) in paths.iter().zip(&req.pairs).zip(&req.lengths) {
        if let Err(e) = p.validate(g) {
            return bad(e.to_string());
        }
        if p.start() != s || p.end() != t {
            return bad(format!(
                "path runs {}..{}, wanted {s}..{t}",
                p.start(),
                p.end()
            ));
        }
        if p.len() != l {
            return bad(format!("path {s}..{t} has length {}, wanted {l}", p.len()));
        }
        for &v in &p.vertices {
            if !inside.contains(v) {
                return bad(format!("vertex {v} outside A ∪ B ∪ D"));
            }
            if !used.insert(v) {
                return bad(format!("vertex {v} shared by two paths"));
            }
        }
    }
    Ok(())
}

/// Greedy maximal matching in `G[A]`, returned when it reaches `⌈2u^{1−ε}⌉` edges.
pub fn find_parity_matching(g: &Graph, hub: &Hub) -> Option<Vec<(usize, usize)>> {
    let aset = BitSet::from_iter_with(g.order(), hub.a.iter().copied());
    let mut free = aset.clone();
    let mut m = Vec::new();
    for &x in &hub.a {
        if !free.contains(x) {
            continue;
        }
        free.remove(x);
        if let Some(y) = g.neighbors(x).intersection(&free).first() {
            free.remove(y);
            m.push((x, y));
        } else {
            free.insert(x);
        }
    }
    (m.len() >= parity_threshold(hub.u, hub.eps)).then_some(m)
}

/// As [`hub_connect`], but a pair whose length has the wrong parity (and is
/// at least 7) is routed as `s … x`, the matching edge `xy`, then `y … t`,
/// with both pieces of correct parity.
pub fn hub_connect_parity_broken(
    g: &Graph,
    hub: &Hub,
    req: &ConnectionRequest,
) -> Result<Vec<Path>> {
    let Some(matching) = &hub.parity_matching else {
        return Err(Error::GuaranteeUnavailable(
            "hub is not parity broken".into(),
        ));
    };
    let ends = req.check(hub, hub.max_pairs(), g.order())?;
    let mut spare = matching
        .iter()
        .filter(|&&(x, y)| !ends.contains(x) && !ends.contains(y));
    let mut sub_pairs = Vec::new();
    let mut sub_lengths = Vec::new();
    let mut split = Vec::with_capacity(req.pairs.len());
    for (&(s, t), &l) in req.pairs.iter().zip(&req.lengths) {
        if bipartite_length_ok(hub, s, t, l)? {
            split.push(false);
            sub_pairs.push((s, t));
            sub_lengths.push(l);
            continue;
        }
        if l < 7 {
            return invalid(format!(
                "length {l} for {{{s},{t}}} is neither bipartite nor at least 7"
            ));
        }
        let &(x, y) = spare
            .next()
            .ok_or_else(|| exhausted("parity matching edges"))?;
        let l1 = if hub.side(s) == Some(Side::A) { 2 } else { 3 };
        split.push(true);
        sub_pairs.extend([(s, x), (y, t)]);
        sub_lengths.extend([l1, l - 1 - l1]);
    }
    let mut sub_ends = ends;
    for &(x, y) in &sub_pairs {
        sub_ends.insert(x);
        sub_ends.insert(y);
    }
    let pieces = route(g, hub, &sub_pairs, &sub_lengths, &sub_ends)?;
    let mut pieces = pieces.into_iter();
    let mut paths = Vec::with_capacity(req.pairs.len());
    for is_split in split {
        let first = pieces.next().expect("one piece per sub-pair");
        if is_split {
            let mut v = first.vertices;
            v.extend(pieces.next().expect("split pairs have two pieces").vertices);
            paths.push(Path::unchecked(v));
        } else {
            paths.push(first);
        }
    }
    check_connection(g, hub, req, &paths)?;
    Ok(paths)
}

/// A random request satisfying the size and budget invariants with bipartite
/// lengths, or `None` when the hub admits no request at all.
pub fn random_request<R: Rng + ?Sized>(hub: &Hub, rng: &mut R) -> Option<ConnectionRequest> {
    let cap = hub.max_pairs().min(hub.u);
    let budget = hub.length_budget();
    if cap == 0 || budget < 3 {
        return None;
    }
    let mut m = rng.gen_range(1..=cap);
    let mut pool: Vec<usize> = hub.a.iter().chain(&hub.b).copied().collect();
    pool.shuffle(rng);
    let base = |s: usize, t: usize| if hub.side(s) == hub.side(t) { 2 } else { 3 };
    let mut pairs: Vec<(usize, usize)> = (0..m).map(|i| (pool[2 * i], pool[2 * i + 1])).collect();
    let mut lengths: Vec<usize> = pairs.iter().map(|&(s, t)| base(s, t)).collect();
    while lengths.iter().map(|l| l + 1).sum::<usize>() > budget {
        pairs.pop();
        lengths.pop();
        m -= 1;
    }
    if m == 0 {
        return None;
    }
    let spent: usize = lengths.iter().map(|l| l + 1).sum();
    let extra = rng.gen_range(0..=(budget - spent) / 2);
    for _ in 0..extra {
        let i = rng.gen_range(0..m);
        lengths[i] += 2;
    }
    Some(ConnectionRequest { pairs, lengths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hubs::{build_hub, HubParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k_hub(u: usize, eps: f64) -> (Graph, Hub) {
        let g = Graph::complete_bipartite(4 * u, 4 * u);
        let hub = build_hub(&g, u, eps, 5, &HubParams::default()).unwrap();
        (g, hub)
    }

    #[test]
    fn short_branches() {
        let (g, hub) = k_hub(100, 0.6);
        let req = ConnectionRequest::new(vec![(hub.a[0], hub.a[1])], vec![2]);
        let p = hub_connect(&g, &hub, &req).unwrap();
        assert!(hub.d.contains(&p[0].vertices[1]));
        let req = ConnectionRequest::new(vec![(hub.a[0], hub.b[1])], vec![3]);
        let p = hub_connect(&g, &hub, &req).unwrap();
        assert!(p[0].vertices[1..3].iter().all(|v| hub.d.contains(v)));
    }

    #[test]
    fn three_pairs() {
        let (g, hub) = k_hub(100, 0.6);
        let req = ConnectionRequest::new(
            vec![
                (hub.a[0], hub.a[5]),
                (hub.b[3], hub.b[7]),
                (hub.a[9], hub.b[9]),
            ],
            vec![4, 6, 5],
        );
        let paths = hub_connect(&g, &hub, &req).unwrap();
        check_connection(&g, &hub, &req, &paths).unwrap();
    }

    #[test]
    fn rejects_bad_requests() {
        let (g, hub) = k_hub(100, 0.6);
        let wrong_parity = ConnectionRequest::new(vec![(hub.a[0], hub.a[1])], vec![5]);
        assert!(matches!(
            hub_connect(&g, &hub, &wrong_parity),
            Err(Error::InvalidArgument(_))
        ));
        let over_budget = ConnectionRequest::new(vec![(hub.a[0], hub.a[1])], vec![80]);
        assert!(matches!(
            hub_connect(&g, &hub, &over_budget),
            Err(Error::InvalidArgument(_))
        ));
        let repeated =
            ConnectionRequest::new(vec![(hub.a[0], hub.a[1]), (hub.a[1], hub.a[2])], vec![2, 2]);
        assert!(matches!(
            hub_connect(&g, &hub, &repeated),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn random_requests_hold() {
        for (u, eps) in [(100, 0.6), (60, 0.7), (60, 0.6)] {
            let (g, hub) = k_hub(u, eps);
            let mut rng = ChaCha8Rng::seed_from_u64(u as u64);
            for _ in 0..200 {
                let req = random_request(&hub, &mut rng).unwrap();
                let paths = hub_connect(&g, &hub, &req).unwrap();
                check_connection(&g, &hub, &req, &paths).unwrap();
            }
        }
    }

    /// `K_{4u,4u}` plus a clique on the `A`-side.
    fn clique_side_hub(u: usize, eps: f64) -> (Graph, Hub) {
        let base = Graph::complete_bipartite(4 * u, 4 * u);
        let hub = build_hub(&base, u, eps, 5, &HubParams::default()).unwrap();
        let mut edges = base.edge_list();
        for (i, &x) in hub.a.iter().enumerate() {
            for &y in &hub.a[i + 1..] {
                edges.push((x, y));
            }
        }
        let g = Graph::from_edges(8 * u, &edges).unwrap();
        let mut hub = hub;
        assert!(hub.try_break_parity(&g));
        hub.verify(&g).unwrap();
        (g, hub)
    }

    #[test]
    fn parity_matching_threshold() {
        let (g, hub) = k_hub(100, 0.6);
        assert_eq!(find_parity_matching(&g, &hub), None);
        // exactly ⌈2u^{1−ε}⌉ = 13 disjoint edges inside A
        let mut edges = g.edge_list();
        edges.extend((0..13).map(|i| (hub.a[2 * i], hub.a[2 * i + 1])));
        let h = Graph::from_edges(g.order(), &edges).unwrap();
        assert_eq!(find_parity_matching(&h, &hub).unwrap().len(), 13);
        edges.pop();
        let h = Graph::from_edges(g.order(), &edges).unwrap();
        assert_eq!(find_parity_matching(&h, &hub), None);
    }

    #[test]
    fn parity_broken_splits() {
        let (g, hub) = clique_side_hub(100, 0.6);
        let (a, b) = (&hub.a, &hub.b);
        let req = ConnectionRequest::new(vec![(a[0], a[1]), (a[2], b[3])], vec![7, 8]);
        let paths = hub_connect_parity_broken(&g, &hub, &req).unwrap();
        check_connection(&g, &hub, &req, &paths).unwrap();
        let short = ConnectionRequest::new(vec![(a[0], a[1])], vec![5]);
        assert!(matches!(
            hub_connect_parity_broken(&g, &hub, &short),
            Err(Error::InvalidArgument(_))
        ));
        let (g2, plain) = k_hub(100, 0.6);
        let req = ConnectionRequest::new(vec![(plain.a[0], plain.a[1])], vec![4]);
        assert!(matches!(
            hub_connect_parity_broken(&g2, &plain, &req),
            Err(Error::GuaranteeUnavailable(_))
        ));
    }

    #[test]
    fn parity_broken_random() {
        let (g, hub) = clique_side_hub(100, 0.6);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let mut req = random_request(&hub, &mut rng).unwrap();
            // flip parity of pairs long enough to stay within budget
            let slack = hub.length_budget() - req.lengths.iter().map(|l| l + 1).sum::<usize>();
            let long = req.lengths.iter().position(|&l| l >= 6);
            if let (Some(i), true) = (long, slack >= 1) {
                req.lengths[i] += 1;
            } else if slack >= 5 {
                req.lengths[0] += 5;
            }
            let paths = hub_connect_parity_broken(&g, &hub, &req).unwrap();
            check_connection(&g, &hub, &req, &paths).unwrap();
        }
    }
}
