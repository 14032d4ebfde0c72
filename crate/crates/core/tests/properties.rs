mod common;

use common::*;
use episolve_core::agents::Agent;
use episolve_core::equivalence::{
    complex_to_frame, frame_to_complex, model_to_simplicial, simplicial_to_model, transport_chromatic_map,
    transport_frame_morphism,
};
use episolve_core::iso::{complexes_isomorphic, frames_isomorphic};
use episolve_core::kripke::{frame_product, is_model_morphism, is_morphism, model_product, KripkeModel};
use episolve_core::logic::{product_update, ActionLibrary, ActionModel, CommonKnowledgeMode, Evaluator, Formula};
use episolve_core::protocol::protocol_complex;
use episolve_core::simplicial::{complex_product, is_chromatic_map, ChromaticMap, SimplicialModel};
use episolve_core::tasks::standard::binary_inputs;
use episolve_core::tasks::{check_solvability, check_witness, SearchOptions, SimplicialTask, TaskSpec};
use episolve_core::topology::{
    betti_numbers, complex_components, frame_components, obstruction_report, ChainComplex, Gf2, ObstructionVerdict,
};
use proptest::prelude::*;
use rand::Rng;

fn seeds() -> impl Strategy<Value = u64> {
    any::<u64>()
}

fn knows_everywhere(ev: &Evaluator, m: &KripkeModel, f: &Formula) -> Vec<bool> {
    ev.extension(m, f).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_universal_property(seed in seeds()) {
        let mut r = rng(seed);
        let u = random_local_model(&mut r, 3, 5);
        let (m, f) = random_coarsening(&mut r, &u);
        let (n, g) = random_coarsening(&mut r, &u);
        let (prod, pi_m, pi_n) = frame_product(m.frame(), n.frame()).unwrap();
        prop_assert!(is_morphism(&pi_m.map, &prod, m.frame()).unwrap());
        prop_assert!(is_morphism(&pi_n.map, &prod, n.frame()).unwrap());
        let h: Vec<usize> = (0..u.len()).map(|x| f.apply(x) * n.len() + g.apply(x)).collect();
        prop_assert!(is_morphism(&h, u.frame(), &prod).unwrap());
        for (x, &hx) in h.iter().enumerate() {
            prop_assert_eq!(pi_m.apply(hx), f.apply(x));
            prop_assert_eq!(pi_n.apply(hx), g.apply(x));
            let candidates = (0..prod.len())
                .filter(|&w| pi_m.apply(w) == f.apply(x) && pi_n.apply(w) == g.apply(x))
                .count();
            prop_assert_eq!(candidates, 1);
        }
    }

    #[test]
    fn knowledge_only_decreases_along_morphisms(seed in seeds()) {
        let mut r = rng(seed);
        let m = random_local_model(&mut r, 3, 6);
        let (n, f) = random_coarsening(&mut r, &m);
        prop_assert!(is_model_morphism(&f.map, &m, &n).unwrap());
        let ev = Evaluator::new();
        for _ in 0..8 {
            let a = r.gen_range(0..m.agents().len());
            let phi = Formula::knows(m.agents().name(Agent(a)), positive_formula(&mut r, n.agents(), n.vocab().names(), 2));
            let src = knows_everywhere(&ev, &m, &phi);
            let tgt = knows_everywhere(&ev, &n, &phi);
            for s in 0..m.len() {
                prop_assert!(!tgt[f.apply(s)] || src[s], "{} at {}", phi, s);
            }
        }
    }

    #[test]
    fn equivalence_round_trips(seed in seeds()) {
        let mut r = rng(seed);
        let m = random_proper_model(&mut r, 3, 6);
        let c = frame_to_complex(m.frame()).unwrap();
        prop_assert!(frames_isomorphic(&complex_to_frame(&c), m.frame()).is_some());
        let sm = model_to_simplicial(&m).unwrap();
        let back = simplicial_to_model(&sm);
        prop_assert_eq!(back.valuations(), m.valuations());
        let k = random_complex(&mut r, 3, 8);
        prop_assert!(complexes_isomorphic(&frame_to_complex(&complex_to_frame(&k)).unwrap(), &k).is_some());
    }

    #[test]
    fn transport_composes(seed in seeds()) {
        let mut r = rng(seed);
        let l = random_proper_model(&mut r, 3, 6);
        let (m, f) = random_coarsening(&mut r, &l);
        let (m, q) = m.quotient().unwrap();
        let f = f.then(&q);
        let (n, g) = random_coarsening(&mut r, &m);
        let (n, q2) = n.quotient().unwrap();
        let g = g.then(&q2);
        let tf = transport_frame_morphism(&f, l.frame(), m.frame()).unwrap();
        let tg = transport_frame_morphism(&g, m.frame(), n.frame()).unwrap();
        let tgf = transport_frame_morphism(&f.then(&g), l.frame(), n.frame()).unwrap();
        prop_assert_eq!(tf.then(&tg), tgf.clone());
        let (cl, cm, cn) = (frame_to_complex(l.frame()).unwrap(), frame_to_complex(m.frame()).unwrap(), frame_to_complex(n.frame()).unwrap());
        prop_assert!(is_chromatic_map(&tgf.map, &cl, &cn).unwrap());
        // and back: F of the transported maps are the original facet maps
        prop_assert_eq!(transport_chromatic_map(&tf, &cl, &cm).unwrap(), f.clone());
        let back = transport_chromatic_map(&tf, &cl, &cm).unwrap().then(&transport_chromatic_map(&tg, &cm, &cn).unwrap());
        prop_assert_eq!(back, transport_chromatic_map(&tgf, &cl, &cn).unwrap());
    }

    #[test]
    fn chromatic_maps_commute_with_intersection(seed in seeds()) {
        let mut r = rng(seed);
        let l = random_proper_model(&mut r, 3, 5);
        let (m, f) = random_coarsening(&mut r, &l);
        let (m, q) = m.quotient().unwrap();
        let g = transport_frame_morphism(&f.then(&q), l.frame(), m.frame()).unwrap();
        let (c, d) = (frame_to_complex(l.frame()).unwrap(), frame_to_complex(m.frame()).unwrap());
        let image = |xs: &[usize]| {
            let mut v: Vec<usize> = xs.iter().map(|&x| g.apply(x)).collect();
            v.sort_unstable();
            v
        };
        for x in c.facets() {
            for y in c.facets() {
                let common: Vec<usize> = x.iter().copied().filter(|v| y.contains(v)).collect();
                let (ix, iy) = (image(x), image(y));
                let both: Vec<usize> = ix.iter().copied().filter(|v| iy.contains(v)).collect();
                // equality holds on the colors of X ∩ Y; images may also meet elsewhere
                prop_assert!(image(&common).iter().all(|v| both.contains(v)));
                let common_colors: Vec<Agent> = common.iter().map(|&v| c.color(v)).collect();
                let both_on_those: Vec<usize> = both.iter().copied().filter(|&v| common_colors.contains(&d.color(v))).collect();
                prop_assert_eq!(image(&common), both_on_those);
            }
        }
    }

    #[test]
    fn complex_products(seed in seeds()) {
        let mut r = rng(seed);
        let k = random_complex(&mut r, 2, 6);
        let mut l = random_complex(&mut r, 2, 6);
        while l.agents() != k.agents() {
            l = random_complex(&mut r, 2, 6);
        }
        let (p, pk, pl) = complex_product(&k, &l).unwrap();
        prop_assert_eq!(p.num_facets(), k.num_facets() * l.num_facets());
        prop_assert!(is_chromatic_map(&pk.map, &p, &k).unwrap());
        prop_assert!(is_chromatic_map(&pl.map, &p, &l).unwrap());
    }

    #[test]
    fn common_knowledge_two_ways(seed in seeds()) {
        let mut r = rng(seed);
        let m = random_proper_model(&mut r, 3, 6);
        let comp = Evaluator::new().with_mode(CommonKnowledgeMode::Components);
        let fix = Evaluator::new().with_mode(CommonKnowledgeMode::Fixpoint);
        let c = frame_to_complex(m.frame()).unwrap();
        for group in nonempty_groups(m.agents()) {
            let names: Vec<String> = group.iter().map(|&a| m.agents().name(a).to_string()).collect();
            let body = any_formula(&mut r, m.agents(), m.vocab().names(), 2);
            let f = Formula::common(names, body);
            prop_assert_eq!(comp.extension(&m, &f).unwrap(), fix.extension(&m, &f).unwrap());
            prop_assert_eq!(frame_components(m.frame(), Some(&group)), complex_components(&c, Some(&group)));
        }
    }

    #[test]
    fn action_box_sanity(seed in seeds()) {
        let mut r = rng(seed);
        let m = random_model(&mut r, 2, 5);
        let act_frame = random_frame(&mut r, 2, 3);
        prop_assume!(act_frame.agents() == m.agents());
        let pre = (0..act_frame.len()).map(|_| any_formula(&mut r, m.agents(), m.vocab().names(), 0)).collect();
        let act = ActionModel::new(act_frame.clone(), pre).unwrap();
        let mut lib = ActionLibrary::new();
        lib.insert("act", act.clone());
        let ev = Evaluator::new().with_actions(&lib);
        prop_assert!(ev.extension(&m, &Formula::parse("[act] true").unwrap()).unwrap().iter().all(|&b| b));
        let phi = any_formula(&mut r, m.agents(), m.vocab().names(), 1);
        let psi = any_formula(&mut r, m.agents(), m.vocab().names(), 1);
        let lhs = ev.extension(&m, &Formula::after("act", phi.clone().and(psi.clone()))).unwrap();
        let rhs = ev.extension(&m, &Formula::after("act", phi).and(Formula::after("act", psi))).unwrap();
        prop_assert_eq!(lhs, rhs);
        // precondition-free update is the product with the bare action frame
        let up = product_update(&m, &ActionModel::uniform(act_frame.clone())).unwrap();
        let prod = model_product(&m, &KripkeModel::bare(act_frame)).unwrap();
        prop_assert!(frames_isomorphic(up.model.frame(), prod.frame()).is_some());
        // projection of any update only loses knowledge
        if let Ok(up) = product_update(&m, &act) {
            prop_assert!(is_model_morphism(&up.projection.map, &up.model, &m).unwrap());
            let a = m.agents().names()[0].clone();
            let f = Formula::knows(a, positive_formula(&mut r, m.agents(), m.vocab().names(), 2));
            let before = ev.extension(&m, &f).unwrap();
            let after = ev.extension(&up.model, &f).unwrap();
            for (w, &s) in up.projection.map.iter().enumerate() {
                prop_assert!(!before[s] || after[w]);
            }
        }
    }

    #[test]
    fn protocol_complex_laws(seed in seeds(), rounds in 1usize..=2) {
        let mut r = rng(seed);
        let m = random_proper_model(&mut r, 2, 4);
        let sm = model_to_simplicial(&m).unwrap();
        let pc = protocol_complex(&sm, rounds).unwrap();
        let p = pc.model.complex();
        prop_assert!(is_chromatic_map(&pc.projection.map, p, sm.complex()).unwrap());
        prop_assert!(episolve_core::kripke::is_proper(&complex_to_frame(p)));
        prop_assert_eq!(betti_numbers(p).unwrap(), betti_numbers(sm.complex()).unwrap());
        let pm = simplicial_to_model(&pc.model);
        let pi = transport_chromatic_map(&pc.projection, p, sm.complex()).unwrap();
        prop_assert!(is_model_morphism(&pi.map, &pm, &simplicial_to_model(&sm)).unwrap());
    }

    #[test]
    fn chain_complex_laws(seed in seeds()) {
        let mut r = rng(seed);
        let c = random_complex(&mut r, 3, 8);
        let sub = protocol_complex(&SimplicialModel::bare(c.clone()), 1).unwrap();
        for k in [&c, sub.model.complex()] {
            let ch = ChainComplex::<Gf2>::from_complex(k).unwrap();
            prop_assert!(ch.is_chain_complex());
            prop_assert_eq!(ch.betti().0, complex_components(k, None).num_blocks());
        }
    }

    #[test]
    fn solver_laws(seed in seeds()) {
        let mut r = rng(seed);
        let input = binary_inputs(2);
        let output = random_complex(&mut r, 2, 4);
        prop_assume!(output.agents().len() == 2);
        let output = SimplicialModel::bare(output);
        let nout = output.complex().num_facets();
        let delta: Vec<Vec<usize>> = (0..4)
            .map(|_| {
                let mut d: Vec<usize> = (0..nout).filter(|_| r.gen_bool(0.5)).collect();
                if d.is_empty() {
                    d.push(r.gen_range(0..nout));
                }
                d
            })
            .collect();
        let task = TaskSpec::from_simplicial(&input, &output, delta.clone()).unwrap();
        let st = SimplicialTask::new(&task).unwrap();
        let pc = protocol_complex(&st.input, 1).unwrap();
        let p = pc.model.complex();
        let v = check_solvability(p, &pc.projection, &st.delta, &st.delta_to_input, SearchOptions::default()).unwrap();
        if let Some(h) = &v.witness {
            prop_assert!(check_witness(h, p, &pc.projection, &st.delta, &st.delta_to_input));
        }
        let shuffled = check_solvability(p, &pc.projection, &st.delta, &st.delta_to_input, SearchOptions { seed: Some(seed) }).unwrap();
        prop_assert_eq!(v.solvable, shuffled.solvable);
        let ob = obstruction_report(p, &pc.projection, st.input.complex(), &st.delta).unwrap();
        if ob.verdict == ObstructionVerdict::Obstructed {
            prop_assert!(!v.solvable);
        }
        // enlarging Δ keeps solvability
        let bigger: Vec<Vec<usize>> = delta.iter().map(|d| {
            let mut d = d.clone();
            d.push(r.gen_range(0..nout));
            d
        }).collect();
        let t2 = TaskSpec::from_simplicial(&input, &output, bigger).unwrap();
        let st2 = SimplicialTask::new(&t2).unwrap();
        let v2 = check_solvability(p, &pc.projection, &st2.delta, &st2.delta_to_input, SearchOptions::default()).unwrap();
        prop_assert!(!v.solvable || v2.solvable);
    }
}

/// Facet maps between small complexes are frame morphisms of the F-images
/// exactly when some chromatic vertex map induces them.
#[test]
fn reflecting_morphisms_on_small_complexes() {
    let mut r = rng(11);
    for _ in 0..40 {
        let c = random_complex(&mut r, 2, 4);
        let d = random_complex(&mut r, 2, 3);
        if c.agents() != d.agents() {
            continue;
        }
        let (fc, fd) = (complex_to_frame(&c), complex_to_frame(&d));
        let mut phi = vec![0usize; c.num_facets()];
        loop {
            let is_frame_morphism = is_morphism(&phi, &fc, &fd).unwrap();
            // a vertex map inducing phi exists iff phi is a frame morphism
            let mut g = vec![usize::MAX; c.num_vertices()];
            let mut consistent = true;
            for (x, &y) in phi.iter().enumerate() {
                for (col, &v) in c.facet(x).iter().enumerate() {
                    let w = d.facet(y)[col];
                    if g[v] != usize::MAX && g[v] != w {
                        consistent = false;
                    }
                    g[v] = w;
                }
            }
            assert_eq!(is_frame_morphism, consistent);
            if consistent {
                assert!(is_chromatic_map(&g, &c, &d).unwrap());
                assert_eq!(transport_chromatic_map(&ChromaticMap::new(g), &c, &d).unwrap().map, phi);
            }
            let mut i = 0;
            while i < phi.len() {
                phi[i] += 1;
                if phi[i] < d.num_facets() {
                    break;
                }
                phi[i] = 0;
                i += 1;
            }
            if i == phi.len() {
                break;
            }
        }
    }
}

/// Only `f(X ∩ Y) ⊆ f(X) ∩ f(Y)` holds in general: the two end edges of a
/// 3-edge path are disjoint but fold onto the same edge.
#[test]
fn images_of_disjoint_facets_can_meet() {
    let sub = protocol_complex(&SimplicialModel::bare(single_edge()), 1).unwrap();
    let p = sub.model.complex();
    let (x, y) = (0..p.num_facets())
        .flat_map(|x| (0..p.num_facets()).map(move |y| (x, y)))
        .find(|&(x, y)| p.facet(x).iter().all(|v| !p.facet(y).contains(v)))
        .unwrap();
    let fx: Vec<usize> = p.facet(x).iter().map(|&v| sub.projection.apply(v)).collect();
    let fy: Vec<usize> = p.facet(y).iter().map(|&v| sub.projection.apply(v)).collect();
    assert_eq!(fx, fy);
}

fn single_edge() -> episolve_core::simplicial::ChromaticComplex {
    use episolve_core::simplicial::{ChromaticComplex, Vertex};
    ChromaticComplex::new(
        episolve_core::agents::AgentSet::indexed(2),
        vec![
            Vertex {
                name: "x".into(),
                color: Agent(0),
            },
            Vertex {
                name: "y".into(),
                color: Agent(1),
            },
        ],
        vec![vec![0, 1]],
    )
    .unwrap()
}
