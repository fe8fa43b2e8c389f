//! `verify-paper`: every bundled example checked against its stated values.

use std::collections::BTreeSet;
use std::time::Instant;

use anyhow::{anyhow, Result};
use serde::Serialize;
use serde_json::json;
use symrig::connectivity::{edge_connectivity, find_k_block, is_n_mixed_connected};
use symrig::covering::strip_fixed;
use symrig::fixtures::{self, Fixture};
use symrig::matroid::{
    count, forced_threshold, full_rigidity_characters, is_independent, is_iota_rigid_with, iota_regime,
    partition_value, CountFamily,
};
use symrig::numeric::{is_rigid_numeric_tol, motion_space_tol};
use symrig::symcover::cover_from_partition;
use symrig::{BalanceKind, CoveringGraph, GainGraph, GroupSpec, SubgroupClass};

use crate::Report;

#[derive(Serialize)]
struct Row {
    name: String,
    expected: String,
    actual: String,
    pass: bool,
    seconds: f64,
}

struct Suite {
    rows: Vec<Row>,
}

impl Suite {
    /// Runs `f`, which returns `(expected, actual)`; the check passes when the
    /// two agree.
    fn check(&mut self, name: &str, f: impl FnOnce() -> Result<(String, String)>) {
        let start = Instant::now();
        let (expected, actual, pass) = match f() {
            Ok((e, a)) => {
                let pass = e == a;
                (e, a, pass)
            }
            Err(e) => ("-".to_string(), format!("error: {e:#}"), false),
        };
        self.rows.push(Row {
            name: name.to_string(),
            expected,
            actual,
            pass,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
}

fn s(x: impl ToString) -> String {
    x.to_string()
}

fn verdict_word(rigid: bool) -> String {
    if rigid { "rigid" } else { "flexible" }.to_string()
}

pub fn run(seeds: &[u64], tol: f64) -> Result<Report> {
    let mut suite = Suite { rows: Vec::new() };
    let all = fixtures::all()?;
    let get = |name: &str| -> Result<&Fixture> {
        all.iter().find(|f| f.name == name).ok_or_else(|| anyhow!("missing fixture {name}"))
    };

    groups_and_balance(&mut suite, &get);
    coverings(&mut suite, &get);
    for f in &all {
        fixture_expectations(&mut suite, f, seeds, tol);
    }
    connectivity(&mut suite, &get);
    counts(&mut suite, &get);
    rigidity(&mut suite, &get, seeds, tol);

    let passed = suite.rows.iter().filter(|r| r.pass).count();
    let total = suite.rows.len();
    let width = suite.rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut text = String::new();
    for r in &suite.rows {
        text += &format!(
            "{} {:width$}  expected {:<22} got {:<22} {:.2}s\n",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.expected,
            r.actual,
            r.seconds
        );
    }
    text += &format!("{passed}/{total} checks passed\n");
    Ok(Report {
        json: json!({ "passed": passed, "total": total, "checks": suite.rows }),
        text,
        positive: passed == total,
    })
}

type Get<'a> = dyn Fn(&str) -> Result<&'a Fixture> + 'a;

fn groups_and_balance<'a>(suite: &mut Suite, get: &Get<'a>) {
    suite.check("C_3v is generated by s and C_3", || {
        let d3 = GroupSpec::dihedral(3)?;
        let h = d3.subgroup_generated([d3.reflection_element(0)?, d3.rotation(1)]);
        Ok((s("6 Dihedral"), format!("{} {:?}", h.order(), h.classify(&d3))))
    });
    suite.check("fig1b loop C_3 generates C_3", || {
        let g = &get("fig1b")?.graph;
        let h = g.induced_subgroup(&[2], 0)?;
        Ok((s("3 CyclicNontrivial"), format!("{} {:?}", h.order(), h.classify(g.group()))))
    });
    suite.check("fig1b edge set generates C_3v", || {
        let g = &get("fig1b")?.graph;
        let h = g.induced_subgroup(&g.edge_ids(), 0)?;
        let class = h.classify(g.group());
        Ok((s("6 true"), format!("{} {}", h.order(), class == SubgroupClass::Dihedral)))
    });
    suite.check("fig2a K_5 part is balanced", || {
        let f = get("fig2a")?;
        let part = &f.partition("witness")?[0];
        let c = f.graph.classify(part)?;
        Ok((s("Balanced beta 0"), format!("{:?} beta {}", c.kind, c.beta())))
    });
    suite.check("fig2b loop triple is unbalanced cyclic", || {
        let f = get("fig2b")?;
        let part = &f.partition("witness")?[0];
        let c = f.graph.classify(part)?;
        Ok((s("UnbalancedCyclic beta 2"), format!("{:?} beta {}", c.kind, c.beta())))
    });
    suite.check("spanning-tree switching gives identity gains", || {
        let f = get("fig2a")?;
        let part = &f.partition("witness")?[0];
        let span = f.graph.span(part);
        let switched = f.graph.switch(&span.potential)?;
        let identity = part.iter().all(|&e| switched.edges()[e].gain.is_identity());
        let balanced = switched.classify(part)?.kind == BalanceKind::Balanced;
        Ok((s("true true"), format!("{identity} {balanced}")))
    });
}

fn coverings<'a>(suite: &mut Suite, get: &Get<'a>) {
    suite.check("fig1b quotient round trip", || {
        let g = &get("fig1b")?.graph;
        let cov = CoveringGraph::expand(g)?;
        let back = CoveringGraph::expand(&cov.quotient_of()?)?;
        let set = |c: &CoveringGraph| c.edges().iter().map(|&(a, b)| (a.min(b), a.max(b))).collect::<BTreeSet<_>>();
        Ok((s("true"), s(set(&back) == set(&cov))))
    });
    suite.check("Z_2 loop s lifts to one fixed edge", || {
        let cs = GroupSpec::reflection();
        let mut g = GainGraph::new(cs, ["v"])?;
        g.add_edge(0, 0, cs.reflection_element(0)?)?;
        let cov = CoveringGraph::expand(&g)?;
        Ok((s("1 edge, 1 fixed"), format!("{} edge, {} fixed", cov.edge_count(), cov.fixed_edges().fixed_edges.len())))
    });
    suite.check("fixed matching between two K_4 is removed", || {
        let cs = GroupSpec::reflection();
        let mut g = GainGraph::new(cs, ["a", "b", "c", "d"])?;
        for a in 0..4 {
            for b in a + 1..4 {
                g.add_edge(a, b, cs.identity())?;
            }
            g.add_edge(a, a, cs.reflection_element(0)?)?;
        }
        let cov = CoveringGraph::expand(&g)?;
        let (stripped, gl) = strip_fixed(&cov, &g);
        Ok((
            s("16 -> 12 edges, 6 quotient edges"),
            format!("{} -> {} edges, {} quotient edges", cov.edge_count(), stripped.edge_count(), gl.edge_count()),
        ))
    });
}

fn fixture_expectations(suite: &mut Suite, f: &Fixture, seeds: &[u64], tol: f64) {
    let e = &f.expected;
    let g = &f.graph;
    let name = &f.name;
    if let (Some(nv), Some(ne)) = (e.covering_vertices, e.covering_edges) {
        suite.check(&format!("{name} covering size"), || {
            let cov = CoveringGraph::expand(g)?;
            Ok((format!("{nv}/{ne}"), format!("{}/{}", cov.vertex_count(), cov.edge_count())))
        });
    }
    if let Some(n) = e.mixed_connected {
        suite.check(&format!("{name} covering {n}-mixed-connected"), || {
            let cov = CoveringGraph::expand(g)?;
            Ok((s(true), s(is_n_mixed_connected(&cov, n)?.connected)))
        });
    }
    if let Some(n) = e.not_mixed_connected {
        suite.check(&format!("{name} covering not {n}-mixed-connected"), || {
            let cov = CoveringGraph::expand(g)?;
            Ok((s(false), s(is_n_mixed_connected(&cov, n)?.connected)))
        });
    }
    if let Some(two) = e.two_edge_connected {
        suite.check(&format!("{name} quotient 2-edge-connected"), || {
            Ok((s(two), s(edge_connectivity(g).is_none_or(|l| l >= 2))))
        });
    }
    if let Some(p) = &e.partition {
        suite.check(&format!("{name} {} partition sum < threshold", p.family), || {
            let fam = p.family()?;
            let parts = f.partition(&p.name)?;
            let value = partition_value(fam, g, &g.edge_ids(), parts)?;
            let threshold = match fam {
                CountFamily::Rho => forced_threshold(g.group(), g.vertex_count())?,
                _ => iota_regime(g.group(), 1, g.vertex_count())?.1,
            };
            Ok((format!("{} < {}", p.value, p.threshold), format!("{value} < {threshold}")))
        });
    }
    for v in &e.verdicts {
        let t = v.t;
        suite.check(&format!("{name} {} t={t} combinatorial", v.mode), || {
            let cands: Vec<_> = f.partitions.values().cloned().collect();
            let r = is_iota_rigid_with(g, t, &cands)?;
            Ok((verdict_word(v.rigid), verdict_word(r.rigid)))
        });
        suite.check(&format!("{name} {} t={t} numeric", v.mode), || {
            let r = motion_space_tol(g, t, seeds, tol)?;
            Ok((verdict_word(v.rigid), verdict_word(r.rigid)))
        });
    }
    if !e.cover.is_empty() {
        suite.check(&format!("{name} symmetric cover"), || {
            let gr = g.group();
            let n = g.vertex_count();
            let sc = cover_from_partition(g, f.partition("cover")?)?;
            let mut want = Vec::new();
            for set in &e.cover {
                let mut xs = Vec::new();
                for (elem, v) in set {
                    xs.push(gr.index_of(gr.parse_element(elem)?) * n + g.vertex_id(v)?);
                }
                xs.sort_unstable();
                want.push(xs);
            }
            let got: Vec<Vec<usize>> = sc.sets.iter().map(|x| x.vertices.clone()).collect();
            let same = got.len() == want.len()
                && got.iter().collect::<BTreeSet<_>>() == want.iter().collect::<BTreeSet<_>>();
            Ok((format!("{} sets", want.len()), if same { format!("{} sets", got.len()) } else { format!("{got:?}") }))
        });
    }
}

fn connectivity<'a>(suite: &mut Suite, get: &Get<'a>) {
    suite.check("fig2b quotient edge connectivity", || {
        Ok((s("Some(1)"), format!("{:?}", edge_connectivity(&get("fig2b")?.graph))))
    });
    suite.check("fig2a has no block of cost <= 4", || {
        Ok((s("none"), block_word(&get("fig2a")?.graph, 4)))
    });
    suite.check("fig2b has no block of cost <= 5", || {
        Ok((s("none"), block_word(&get("fig2b")?.graph, 5)))
    });
    suite.check("loop trace on a trivial lift", || {
        let z2 = GroupSpec::cyclic(2)?;
        let mut h = GainGraph::new(z2, ["u", "v"])?;
        h.add_edge(0, 1, z2.identity())?;
        h.add_edge(0, 0, z2.rotation(1))?;
        Ok((s(1), s(symrig::connectivity::edge_trace(&h, 1, &[0], &[])?.len())))
    });
    suite.check("chord trace enlarging an order-3 lift", || {
        let z6 = GroupSpec::cyclic(6)?;
        let mut h = GainGraph::new(z6, ["a", "b"])?;
        h.add_edge(0, 1, z6.identity())?;
        h.add_edge(0, 0, z6.rotation(2))?;
        h.add_edge(0, 1, z6.rotation(1))?;
        Ok((s(6), s(symrig::connectivity::edge_trace(&h, 2, &[0, 1], &[0, 1])?.len())))
    });
}

fn block_word(g: &GainGraph, k_max: usize) -> String {
    match find_k_block(g, k_max) {
        None => "none".to_string(),
        Some(b) => format!("{}-block", b.k),
    }
}

fn counts<'a>(suite: &mut Suite, get: &Get<'a>) {
    suite.check("rho of the balanced K_5", || {
        let f = get("fig2a")?;
        Ok((s(7), s(count(CountFamily::Rho, &f.graph, &f.partition("witness")?[0])?)))
    });
    suite.check("rho of three loops at one vertex", || {
        let f = get("fig2b")?;
        Ok((s(1), s(count(CountFamily::Rho, &f.graph, &f.partition("witness")?[0])?)))
    });
    suite.check("mu of K_6 plus two s-edges", || {
        let f = get("fig4")?;
        Ok((s(10), s(count(CountFamily::Mu, &f.graph, &f.partition("witness")?[0])?)))
    });
    suite.check("single Z_2 loop under mu", || {
        let cs = GroupSpec::reflection();
        let mut g = GainGraph::new(cs, ["v"])?;
        g.add_edge(0, 0, cs.reflection_element(0)?)?;
        let mu = count(CountFamily::Mu, &g, &[0])?;
        let ind = is_independent(CountFamily::Mu, &g, &[0])?.independent;
        Ok((s("0 dependent"), format!("{mu} {}", if ind { "independent" } else { "dependent" })))
    });
}

fn rigidity<'a>(suite: &mut Suite, get: &Get<'a>, seeds: &[u64], tol: f64) {
    suite.check("fig2a forced numeric kernel", || {
        let r = motion_space_tol(&get("fig2a")?.graph, 0, seeds, tol)?;
        let ok = r.kernel_dim >= 2 && r.kernel_dim > r.trivial_dim;
        Ok((s("flexible, kernel >= 2"), format!("{}, kernel {}", verdict_word(r.rigid), if ok { ">= 2" } else { "too small" })))
    });
    for name in ["fig2a", "fig4"] {
        suite.check(&format!("{name} full rigidity"), || {
            let f = get(name)?;
            let g = &f.graph;
            let cands: Vec<_> = f.partitions.values().cloned().collect();
            let mut comb = true;
            for t in full_rigidity_characters(g.group())? {
                comb &= is_iota_rigid_with(g, t, &cands)?.rigid;
            }
            let num = is_rigid_numeric_tol(g, seeds, tol)?.rigid;
            Ok((s("flexible flexible"), format!("{} {}", verdict_word(comb), verdict_word(num))))
        });
    }
}
