// Experiment: measure the enumerated order of the double-group
// presentation under different compatibility-relator conjugator sets.

use tensorsq_core::catalog;
use tensorsq_core::fp::{
    self, commutator_word, invert, presentation_from_table, regular_rep, Letter, Presentation,
    Word,
};
use tensorsq_core::group::GroupTable;

fn nu_with_conjugators(g: &GroupTable, conjugators: &[Word]) -> Presentation {
    let (base, _gens) = presentation_from_table(g).unwrap();
    let k = base.num_generators();
    let mut names = base.generator_names.clone();
    names.extend(base.generator_names.iter().map(|n| format!("{n}_phi")));
    let shift = |w: &Word, by: usize| -> Word {
        w.iter()
            .map(|l| Letter {
                gen: l.gen + by as u16,
                inv: l.inv,
            })
            .collect()
    };
    let mut relators: Vec<Word> = base.relators.clone();
    relators.extend(base.relators.iter().map(|r| shift(r, k)));
    for zw in conjugators {
        let zpw = shift(zw, k);
        for x in 0..k {
            for y in 0..k {
                let xw = vec![Letter::new(x)];
                let ypw = vec![Letter::new(y + k)];
                let lhs = commutator_word(&xw, &ypw);
                let conj_x = fp::conjugate(&xw, zw);
                let conj_yp = fp::conjugate(&ypw, &zpw);
                let rhs = commutator_word(&conj_x, &conj_yp);
                for conj_by in [zw, &zpw] {
                    let mut rel = fp::conjugate(&lhs, conj_by);
                    rel.extend(invert(&rhs));
                    relators.push(fp::reduce(&rel));
                }
            }
        }
    }
    Presentation::new(names, relators).unwrap()
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let spec = args.get(1).map(String::as_str).unwrap_or("E1_3");
    let g = catalog::parse_group_spec(spec).unwrap();
    let n = g.order();
    let (_, gens) = presentation_from_table(&g).unwrap();
    let k = gens.len();
    println!("{spec}: order {n}, {k} generators");

    let gen_words: Vec<Word> = (0..k).map(|i| vec![Letter::new(i)]).collect();
    let mut gen_and_inv = gen_words.clone();
    gen_and_inv.extend((0..k).map(|i| vec![Letter::new(i).inverse()]));

    // all nonidentity elements as BFS words
    let words = fp::bfs_words(&g, &gens);
    let all_elems: Vec<Word> = (1..n).map(|e| words[e].clone()).collect();

    // products of up to two generators/inverses
    let mut len2 = gen_and_inv.clone();
    for a in &gen_and_inv {
        for b in &gen_and_inv {
            let mut w = a.clone();
            w.extend(b.iter().copied());
            let w = fp::reduce(&w);
            if !w.is_empty() && !len2.contains(&w) {
                len2.push(w);
            }
        }
    }

    for (name, conj) in [
        ("generators only", &gen_words),
        ("generators + inverses", &gen_and_inv),
        ("len<=2 products", &len2),
        ("all elements", &all_elems),
    ] {
        let pres = nu_with_conjugators(&g, conj);
        let t0 = std::time::Instant::now();
        match regular_rep(&pres, 4_000_000) {
            Ok(rep) => {
                let nu = rep.group_order;
                println!(
                    "  {name:24} -> |nu~| = {nu:>9}  (|T~| = {}), {:.1?}",
                    nu / (n * n),
                    t0.elapsed()
                );
            }
            Err(e) => println!("  {name:24} -> error: {e}"),
        }
    }
}
