//! Regenerates the bundled task corpus under `corpus/`.
//!
//! cargo run -p lff --example gen_corpus [-- OUT_DIR]

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;
const TRAIN: usize = 10;
const TEST: usize = 5;

struct Pred {
    name: &'static str,
    types: &'static [&'static str],
    dirs: &'static [&'static str],
}

const fn p(name: &'static str, types: &'static [&'static str], dirs: &'static [&'static str]) -> Pred {
    Pred { name, types, dirs }
}

const COMMON: [Pred; 9] = [
    p("head", &["list", "element"], &["in", "out"]),
    p("tail", &["list", "list"], &["in", "out"]),
    p("decrement", &["element", "element"], &["in", "out"]),
    p("geq", &["element", "element"], &["in", "in"]),
    p("empty", &["list"], &["in"]),
    p("zero", &["element"], &["out"]),
    p("one", &["element"], &["out"]),
    p("even", &["element"], &["in"]),
    p("odd", &["element"], &["in"]),
];

struct Task {
    dir: &'static str,
    head: Pred,
    extra: Vec<Pred>,
    max_clause: usize,
    bk: &'static str,
    pos: fn(&mut ChaCha8Rng) -> String,
    neg: fn(&mut ChaCha8Rng) -> String,
}

fn list(xs: &[i64]) -> String {
    let items: Vec<String> = xs.iter().map(i64::to_string).collect();
    format!("[{}]", items.join(","))
}

fn ints(r: &mut ChaCha8Rng, lo: usize, hi: usize) -> Vec<i64> {
    let n = r.gen_range(lo..=hi);
    (0..n).map(|_| r.gen_range(0..10)).collect()
}

fn last_pos(r: &mut ChaCha8Rng) -> String {
    let xs = ints(r, 1, 6);
    format!("last({},{})", list(&xs), xs[xs.len() - 1])
}

fn last_neg(r: &mut ChaCha8Rng) -> String {
    loop {
        let xs = ints(r, 2, 6);
        let l = xs[xs.len() - 1];
        if let Some(x) = xs.iter().filter(|x| **x != l).collect::<Vec<_>>().choose(r) {
            return format!("last({},{})", list(&xs), x);
        }
    }
}

fn evens_pos(r: &mut ChaCha8Rng) -> String {
    let n = r.gen_range(0..=5);
    let xs: Vec<i64> = (0..n).map(|_| 2 * r.gen_range(0..5)).collect();
    format!("evens({})", list(&xs))
}

fn evens_neg(r: &mut ChaCha8Rng) -> String {
    let n = r.gen_range(2..=5);
    let mut xs: Vec<i64> = (0..n).map(|_| 2 * r.gen_range(0..5)).collect();
    // mostly an even head with an odd element further on
    let at = if r.gen_bool(0.2) { 0 } else { r.gen_range(1..n) };
    xs[at] = 2 * r.gen_range(0..5) + 1;
    format!("evens({})", list(&xs))
}

fn distinct(r: &mut ChaCha8Rng, n: usize, avoid: &[i64]) -> Vec<i64> {
    let mut pool: Vec<i64> = (0..10).filter(|x| !avoid.contains(x)).collect();
    pool.shuffle(r);
    pool.truncate(n);
    pool
}

fn finddup_pos(r: &mut ChaCha8Rng) -> String {
    let n = r.gen_range(3..=6);
    let x = r.gen_range(0..10);
    let mut xs = distinct(r, n - 2, &[x]);
    let i = r.gen_range(0..=xs.len());
    xs.insert(i, x);
    let j = r.gen_range(i + 1..=xs.len());
    xs.insert(j, x);
    format!("finddup({},{})", list(&xs), x)
}

fn finddup_neg(r: &mut ChaCha8Rng) -> String {
    let n = r.gen_range(3..=6);
    let mut xs = distinct(r, n - 1, &[]);
    let y = xs[r.gen_range(0..xs.len())];
    let at = r.gen_range(0..=xs.len());
    xs.insert(at, y);
    let x = *xs.iter().filter(|v| **v != y).collect::<Vec<_>>().choose(r).unwrap();
    format!("finddup({},{})", list(&xs), x)
}

fn len_pos(r: &mut ChaCha8Rng) -> String {
    let xs = ints(r, 0, 7);
    format!("len({},{})", list(&xs), xs.len())
}

fn len_neg(r: &mut ChaCha8Rng) -> String {
    let xs = ints(r, 0, 7);
    let wrong: Vec<i64> = [-2, -1, 1, 2, 3].iter().map(|d| xs.len() as i64 + d).filter(|n| *n >= 0).collect();
    format!("len({},{})", list(&xs), wrong.choose(r).unwrap())
}

fn sorted_pos(r: &mut ChaCha8Rng) -> String {
    let mut xs = ints(r, 1, 6);
    xs.sort();
    format!("sorted({})", list(&xs))
}

fn sorted_neg(r: &mut ChaCha8Rng) -> String {
    loop {
        let mut xs = ints(r, 3, 6);
        xs.sort();
        // a single descent, usually after a sorted prefix
        let at = if r.gen_bool(0.2) { 0 } else { r.gen_range(1..xs.len() - 1) };
        xs.swap(at, at + 1);
        if xs[at] > xs[at + 1] {
            return format!("sorted({})", list(&xs));
        }
    }
}

fn sumlist_pos(r: &mut ChaCha8Rng) -> String {
    let xs = ints(r, 1, 5);
    format!("sumlist({},{})", list(&xs), xs.iter().sum::<i64>())
}

fn sumlist_neg(r: &mut ChaCha8Rng) -> String {
    loop {
        let xs = ints(r, 1, 5);
        let prefix: BTreeSet<i64> = (1..=xs.len()).map(|k| xs[..k].iter().sum()).collect();
        let s: i64 = r.gen_range(0..=xs.iter().sum::<i64>() + 5);
        if !prefix.contains(&s) {
            return format!("sumlist({},{})", list(&xs), s);
        }
    }
}

fn dropk_pos(r: &mut ChaCha8Rng) -> String {
    let k = r.gen_range(1..=3);
    let xs = ints(r, k, 6);
    format!("dropk({},{},{})", list(&xs), k, list(&xs[k..]))
}

fn dropk_neg(r: &mut ChaCha8Rng) -> String {
    loop {
        let k = r.gen_range(1..=3);
        let xs = ints(r, k, 6);
        let j = r.gen_range(0..=xs.len());
        if xs[j..] != xs[k..] {
            return format!("dropk({},{},{})", list(&xs), k, list(&xs[j..]));
        }
    }
}

fn droplast_pos(r: &mut ChaCha8Rng) -> String {
    let xs = ints(r, 1, 6);
    format!("droplast({},{})", list(&xs), list(&xs[..xs.len() - 1]))
}

fn droplast_neg(r: &mut ChaCha8Rng) -> String {
    loop {
        let xs = ints(r, 1, 6);
        let ys = match r.gen_range(0..3) {
            0 => xs[1..].to_vec(),
            1 => xs.clone(),
            _ => xs[..xs.len().saturating_sub(2)].to_vec(),
        };
        if ys != xs[..xs.len() - 1] {
            return format!("droplast({},{})", list(&xs), list(&ys));
        }
    }
}

fn contains_pos(r: &mut ChaCha8Rng) -> String {
    let mut xs: Vec<i64> = ints(r, 1, 6).into_iter().map(|x| if x == 6 || x == 9 { 0 } else { x }).collect();
    let at = r.gen_range(0..xs.len());
    xs[at] = *[6, 9].choose(r).unwrap();
    format!("contains({})", list(&xs))
}

fn contains_neg(r: &mut ChaCha8Rng) -> String {
    let xs: Vec<i64> = ints(r, 0, 6).into_iter().map(|x| if x == 6 || x == 9 { x - 1 } else { x }).collect();
    format!("contains({})", list(&xs))
}

fn reverse_pos(r: &mut ChaCha8Rng) -> String {
    let xs = ints(r, 0, 5);
    let ys: Vec<i64> = xs.iter().rev().copied().collect();
    format!("reverse({},{})", list(&xs), list(&ys))
}

fn reverse_neg(r: &mut ChaCha8Rng) -> String {
    loop {
        let n = r.gen_range(2..=5);
        let xs = distinct(r, n, &[]);
        let mut ys = xs.clone();
        ys.shuffle(r);
        if ys.iter().rev().ne(xs.iter()) {
            return format!("reverse({},{})", list(&xs), list(&ys));
        }
    }
}

fn tasks() -> Vec<Task> {
    vec![
        Task {
            dir: "contains",
            head: p("contains", &["list"], &["in"]),
            extra: vec![p("c_6", &["element"], &["in"]), p("c_9", &["element"], &["in"])],
            max_clause: 3,
            bk: "c_6(6).\nc_9(9).\n",
            pos: contains_pos,
            neg: contains_neg,
        },
        Task {
            dir: "dropk",
            head: p("dropk", &["list", "element", "list"], &["in", "in", "out"]),
            extra: vec![p("cons", &["element", "list", "list"], &["in", "in", "out"])],
            max_clause: 2,
            bk: "",
            pos: dropk_pos,
            neg: dropk_neg,
        },
        Task {
            dir: "droplast",
            head: p("droplast", &["list", "list"], &["in", "out"]),
            extra: vec![p("cons", &["element", "list", "list"], &["in", "in", "out"])],
            max_clause: 2,
            bk: "",
            pos: droplast_pos,
            neg: droplast_neg,
        },
        Task { dir: "evens", head: p("evens", &["list"], &["in"]), extra: vec![], max_clause: 2, bk: "", pos: evens_pos, neg: evens_neg },
        Task {
            dir: "finddup",
            head: p("finddup", &["list", "element"], &["in", "out"]),
            extra: vec![p("element", &["list", "element"], &["in", "out"])],
            max_clause: 2,
            bk: "",
            pos: finddup_pos,
            neg: finddup_neg,
        },
        Task {
            dir: "last",
            head: p("last", &["list", "element"], &["in", "out"]),
            extra: vec![],
            max_clause: 2,
            bk: "",
            pos: last_pos,
            neg: last_neg,
        },
        Task {
            dir: "len",
            head: p("len", &["list", "element"], &["in", "out"]),
            extra: vec![p("increment", &["element", "element"], &["in", "out"])],
            max_clause: 2,
            bk: "",
            pos: len_pos,
            neg: len_neg,
        },
        Task {
            dir: "reverse-lite",
            head: p("reverse", &["list", "list"], &["in", "out"]),
            extra: vec![
                p("append", &["list", "element", "list"], &["in", "in", "out"]),
                p("eq", &["list", "list"], &["in", "out"]),
            ],
            max_clause: 2,
            bk: "",
            pos: reverse_pos,
            neg: reverse_neg,
        },
        Task { dir: "sorted", head: p("sorted", &["list"], &["in"]), extra: vec![], max_clause: 2, bk: "", pos: sorted_pos, neg: sorted_neg },
        Task {
            dir: "sumlist",
            head: p("sumlist", &["list", "element"], &["in", "out"]),
            extra: vec![p("sum", &["element", "element", "element"], &["in", "in", "out"])],
            max_clause: 2,
            bk: "",
            pos: sumlist_pos,
            neg: sumlist_neg,
        },
    ]
}

fn tuple(items: &[&str]) -> String {
    if items.len() == 1 {
        format!("({},)", items[0])
    } else {
        format!("({})", items.join(","))
    }
}

fn bias(t: &Task) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "max_clause({}).\nmax_vars(5).\nmax_body(5).\n", t.max_clause);
    let _ = writeln!(s, "head_pred({},{}).", t.head.name, t.head.types.len());
    let body: Vec<&Pred> = COMMON.iter().chain(&t.extra).collect();
    for b in &body {
        let _ = writeln!(s, "body_pred({},{}).", b.name, b.types.len());
    }
    s.push('\n');
    for b in std::iter::once(&&t.head).chain(&body) {
        let _ = writeln!(s, "type({},{}).", b.name, tuple(b.types));
    }
    s.push('\n');
    for b in std::iter::once(&&t.head).chain(&body) {
        let _ = writeln!(s, "direction({},{}).", b.name, tuple(b.dirs));
    }
    s
}

/// `n` distinct examples from `f` that are not in `seen`.
fn draw(r: &mut ChaCha8Rng, f: fn(&mut ChaCha8Rng) -> String, n: usize, seen: &mut BTreeSet<String>) -> Vec<String> {
    let mut out = Vec::new();
    while out.len() < n {
        let e = f(r);
        if seen.insert(e.clone()) {
            out.push(e);
        }
    }
    out
}

fn examples(pos: &[String], neg: &[String]) -> String {
    let mut s = String::new();
    for e in pos {
        let _ = writeln!(s, "pos({e}).");
    }
    for e in neg {
        let _ = writeln!(s, "neg({e}).");
    }
    s
}

fn main() -> std::io::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus"));
    for t in tasks() {
        let mut r = ChaCha8Rng::seed_from_u64(SEED ^ t.dir.bytes().fold(0u64, |h, b| h.wrapping_mul(31) ^ b as u64));
        let mut seen = BTreeSet::new();
        let pos = draw(&mut r, t.pos, TRAIN + TEST, &mut seen);
        let neg = draw(&mut r, t.neg, TRAIN + TEST, &mut seen);
        let dir = out.join(t.dir);
        std::fs::create_dir_all(&dir)?;
        std::fs::write(dir.join("bias.pl"), bias(&t))?;
        std::fs::write(dir.join("bk.pl"), t.bk)?;
        std::fs::write(dir.join("exs.pl"), examples(&pos[..TRAIN], &neg[..TRAIN]))?;
        std::fs::write(dir.join("test.pl"), examples(&pos[TRAIN..], &neg[TRAIN..]))?;
        println!("{}", dir.display());
    }
    Ok(())
}
