//! Regenerates data/catalog.json.
//!
//! Rank-2 groups are found as reflection subgroups of the maximal groups
//! (binary polyhedral group times scalars); higher-rank groups come from
//! root systems or classical matrix models. Every group except G34 is checked
//! by closure against its order.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use reflectia::exactnum::{rat, Cyclotomic};
use reflectia::groups::modp::{powmod, ModField};
use reflectia::groups::{generate, Catalog, CatalogEntry, CycMatrix, GroupSpec};

type Mat = Vec<u64>;

fn c(m: u32, k: i64) -> Cyclotomic {
    Cyclotomic::from_int(m, k)
}

fn z(m: u32, k: i64) -> Cyclotomic {
    Cyclotomic::root(m, k)
}

fn spec(name: &str, n: usize, m: u32, gens: Vec<CycMatrix>, order: Option<u64>) -> GroupSpec {
    GroupSpec {
        name: name.to_string(),
        n,
        m,
        generators: gens.into_iter().map(|g| g.embed(m)).collect(),
        expected_order: order,
        expected_degrees: None,
        expected_coexponents: None,
        unitary: true,
        irreducible: true,
    }
}

/// x ↦ x − (1 − λ)⟨x, v⟩/⟨v, v⟩ · v.
fn reflection(v: &[Cyclotomic], lambda: &Cyclotomic, m: u32) -> CycMatrix {
    let n = v.len();
    let norm = v.iter().fold(c(m, 0), |acc, x| &acc + &(x * &x.conj()));
    let f = (&c(m, 1) - lambda).div(&norm).unwrap();
    CycMatrix::from_fn(n, m, |i, j| {
        let d = c(m, (i == j) as i64);
        &d - &(&f * &(&v[i] * &v[j].conj()))
    })
}

fn mat(m: u32, rows: Vec<Vec<Cyclotomic>>) -> CycMatrix {
    let n = rows.len();
    CycMatrix::from_entries(n, m, rows.into_iter().flatten().collect())
}

struct Modp {
    f: ModField,
    n: usize,
}

impl Modp {
    fn mul(&self, a: &[u64], b: &[u64]) -> Mat {
        let mut out = vec![0; self.n * self.n];
        self.f.mat_mul(a, b, self.n, &mut out);
        out
    }

    fn closure(&self, gens: &[Mat], cap: usize) -> Option<HashSet<Mat>> {
        let mut id = vec![0u64; self.n * self.n];
        for i in 0..self.n {
            id[i * self.n + i] = 1;
        }
        let mut seen: HashSet<Mat> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = vec![id];
        while let Some(x) = queue.pop() {
            for g in gens {
                let y = self.mul(&x, g);
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    queue.push(y);
                }
            }
        }
        Some(seen)
    }

    fn det2(&self, a: &[u64]) -> u64 {
        self.f.sub(self.f.mul(a[0], a[3]), self.f.mul(a[1], a[2]))
    }

    fn is_scalar(&self, a: &[u64]) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|j| if i == j { a[i * n + i] == a[0] } else { a[i * n + j] == 0 }))
    }

    fn mult_order(&self, x: u64) -> u64 {
        let m = self.f.m as u64;
        (1..=m).find(|&k| m % k == 0 && powmod(x, k, self.f.p) == 1).unwrap()
    }

    /// Normalized line spanned by the image of (r − I), for a reflection r.
    fn root_line(&self, r: &[u64]) -> Mat {
        let n = self.n;
        for j in 0..n {
            let col: Vec<u64> = (0..n).map(|i| self.f.sub(r[i * n + j], (i == j) as u64)).collect();
            if col.iter().any(|&x| x != 0) {
                return self.normalize(&col);
            }
        }
        panic!("not a reflection");
    }

    fn normalize(&self, v: &[u64]) -> Mat {
        let lead = *v.iter().find(|&&x| x != 0).unwrap();
        let inv = self.f.inv(lead);
        v.iter().map(|&x| self.f.mul(x, inv)).collect()
    }

    fn apply(&self, g: &[u64], v: &[u64]) -> Mat {
        let n = self.n;
        let w: Vec<u64> = (0..n)
            .map(|i| (0..n).fold(0, |acc, j| self.f.add(acc, self.f.mul(g[i * n + j], v[j]))))
            .collect();
        self.normalize(&w)
    }

    fn line_orbit(&self, gens: &[Mat], start: &[Mat]) -> HashSet<Mat> {
        let mut seen: HashSet<Mat> = start.iter().cloned().collect();
        let mut queue: Vec<Mat> = start.to_vec();
        while let Some(v) = queue.pop() {
            for g in gens {
                let w = self.apply(g, &v);
                if seen.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
        seen
    }
}

fn field_for(m: u32, mats: &[CycMatrix]) -> ModField {
    let mut avoid = BigInt::from(1);
    for g in mats {
        for e in g.entries() {
            avoid = num_integer::Integer::lcm(&avoid, &e.denominator_lcm());
        }
    }
    ModField::new(m, &avoid)
}

/// Adds reflections until their root lines sweep out every line in `roots`.
fn greedy_by_lines(m: u32, refls: &[CycMatrix]) -> Vec<CycMatrix> {
    let n = refls[0].n();
    let f = field_for(m, refls);
    let mp = Modp { f, n };
    let mods: Vec<Mat> = refls.iter().map(|r| f.matrix(&r.embed(m)).unwrap()).collect();
    let lines: Vec<Mat> = mods.iter().map(|r| mp.root_line(r)).collect();
    let all: HashSet<Mat> = lines.iter().cloned().collect();
    assert_eq!(all.len(), refls.len(), "duplicate root lines");
    // the root lines must be permuted by every reflection
    for r in &mods {
        for l in &lines {
            assert!(all.contains(&mp.apply(r, l)), "root system not closed");
        }
    }
    let mut chosen: Vec<usize> = vec![0];
    loop {
        let gens: Vec<Mat> = chosen.iter().map(|&i| mods[i].clone()).collect();
        let start: Vec<Mat> = chosen.iter().map(|&i| lines[i].clone()).collect();
        let orbit = mp.line_orbit(&gens, &start);
        if orbit.len() == all.len() {
            break;
        }
        // prefer a root whose line is not yet reached and which keeps the orbit growing most
        let mut best: Option<(usize, usize)> = None;
        for (i, l) in lines.iter().enumerate() {
            if orbit.contains(l) {
                continue;
            }
            let mut g2 = gens.clone();
            g2.push(mods[i].clone());
            let mut s2 = start.clone();
            s2.push(l.clone());
            let size = mp.line_orbit(&g2, &s2).len();
            if best.map_or(true, |(_, b)| size > b) {
                best = Some((i, size));
            }
        }
        chosen.push(best.unwrap().0);
    }
    chosen.iter().map(|&i| refls[i].clone()).collect()
}

/// Greedy reflection generators for a group given by an ambient generating set.
fn greedy_by_closure(mp: &Modp, pool: &[(Mat, usize)], target: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut current = 1usize;
    while current < target {
        let mut best: Option<(usize, usize)> = None;
        for (k, (r, _)) in pool.iter().enumerate() {
            if chosen.contains(&k) {
                continue;
            }
            let mut gens: Vec<Mat> = chosen.iter().map(|&i| pool[i].0.clone()).collect();
            gens.push(r.clone());
            let size = mp.closure(&gens, target).map_or(0, |s| s.len());
            if best.map_or(true, |(_, b)| size > b) {
                best = Some((k, size));
            }
            if size == target {
                break;
            }
        }
        let (k, size) = best.unwrap();
        assert!(size > current, "greedy stalled");
        chosen.push(k);
        current = size;
    }
    chosen.iter().map(|&k| pool[k].1).collect()
}

struct Rank2Target {
    name: &'static str,
    order: usize,
    degrees: [u32; 2],
    order4: Option<bool>,
}

fn rank2_family(big: GroupSpec, image: usize, targets: &[Rank2Target]) -> Vec<(GroupSpec, String)> {
    let ge = generate(&big, 100_000).expect("ambient group");
    let f = *ge.field();
    let mp = Modp { f, n: 2 };
    let refl = ge.reflection_indices();
    let refl_set: HashSet<usize> = refl.iter().copied().collect();
    let gens: Vec<Mat> = big.generators.iter().map(|g| f.matrix(g).unwrap()).collect();
    let invs: Vec<Mat> = big.generators.iter().map(|g| f.matrix(&g.inverse().unwrap()).unwrap()).collect();
    // conjugacy classes of reflections
    let mut class_of: HashMap<usize, usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &r in &refl {
        if class_of.contains_key(&r) {
            continue;
        }
        let id = classes.len();
        let mut members = vec![r];
        class_of.insert(r, id);
        let mut k = 0;
        while k < members.len() {
            let x = ge.element_modp(members[k]).to_vec();
            for (g, gi) in gens.iter().zip(&invs) {
                let y = mp.mul(&mp.mul(g, &x), gi);
                let idx = ge.index_of(&y).unwrap();
                if let std::collections::hash_map::Entry::Vacant(e) = class_of.entry(idx) {
                    e.insert(id);
                    members.push(idx);
                }
            }
            k += 1;
        }
        classes.push(members);
    }
    eprintln!("{}: {} elements, {} reflections in {} classes", big.name, ge.order(), refl.len(), classes.len());
    let mut found: HashMap<&str, (GroupSpec, String)> = HashMap::new();
    for mask in 1u32..(1 << classes.len()) {
        let members: Vec<usize> =
            (0..classes.len()).filter(|i| mask >> i & 1 == 1).flat_map(|i| classes[i].iter().copied()).collect();
        let mgens: Vec<Mat> = members.iter().map(|&i| ge.element_modp(i).to_vec()).collect();
        let set = mp.closure(&mgens, 100_000).unwrap();
        let order = set.len();
        let scalars = set.iter().filter(|x| mp.is_scalar(x)).count();
        if order / scalars != image {
            continue;
        }
        let sub_refl: Vec<usize> = set.iter().map(|x| ge.index_of(x).unwrap()).filter(|i| refl_set.contains(i)).collect();
        let has4 = sub_refl.iter().any(|&i| mp.mult_order(mp.det2(ge.element_modp(i))) == 4);
        let Some(t) = targets.iter().find(|t| t.order == order && t.order4.map_or(true, |b| b == has4)) else {
            continue;
        };
        if found.contains_key(t.name) {
            continue;
        }
        // reflections of the subgroup, higher reflection order first
        let mut pool: Vec<(Mat, usize)> = sub_refl.iter().map(|&i| (ge.element_modp(i).to_vec(), i)).collect();
        pool.sort_by_key(|(x, i)| (std::cmp::Reverse(mp.mult_order(mp.det2(x))), *i));
        let chosen = greedy_by_closure(&mp, &pool, order);
        let exact: Vec<CycMatrix> = chosen.iter().map(|&i| ge.exact_element(i)).collect();
        let lines: HashSet<Mat> = sub_refl.iter().map(|&i| mp.root_line(ge.element_modp(i))).collect();
        let mut s = spec(t.name, 2, big.m, exact, Some(order as u64));
        s.expected_degrees = Some(t.degrees.to_vec());
        s.expected_coexponents = Some(vec![1, lines.len() as u32 - 1]);
        let src = format!(
            "reflection subgroup of {} generated by {} of its {} reflection classes; {} reflecting lines",
            big.name,
            mask.count_ones(),
            classes.len(),
            lines.len()
        );
        eprintln!("  {} order {} gens {} lines {}", t.name, order, chosen.len(), lines.len());
        found.insert(t.name, (s, src));
    }
    targets
        .iter()
        .map(|t| found.remove(t.name).unwrap_or_else(|| panic!("{} not found", t.name)))
        .collect()
}

fn tetrahedral_gens(m: u32) -> Vec<CycMatrix> {
    let i = z(m, m as i64 / 4);
    let half = c(m, 1).scale(&rat(1, 2));
    let one = c(m, 1);
    let p = &half * &(&one + &i);
    let q = &half * &(&i - &one);
    let r = &half * &(&one - &i);
    vec![
        mat(m, vec![vec![i.clone(), c(m, 0)], vec![c(m, 0), -&i]]),
        mat(m, vec![vec![c(m, 0), c(m, 1)], vec![c(m, -1), c(m, 0)]]),
        mat(m, vec![vec![p.clone(), p], vec![q, r]]),
    ]
}

fn scalar(m: u32, k: i64) -> CycMatrix {
    CycMatrix::scalar(2, &z(m, k))
}

fn rank2_all() -> Vec<(GroupSpec, String)> {
    let t = |name, order, d1, d2, order4| Rank2Target { name, order, degrees: [d1, d2], order4 };
    let mut out = Vec::new();

    let m = 12;
    let mut g = tetrahedral_gens(m);
    g.push(scalar(m, 1));
    let big = spec("tetrahedral x mu12", 2, m, g, Some(144));
    out.extend(rank2_family(
        big,
        12,
        &[t("G4", 24, 4, 6, None), t("G5", 72, 6, 12, None), t("G6", 48, 4, 12, None), t("G7", 144, 12, 12, None)],
    ));

    let m = 24;
    let mut g = tetrahedral_gens(m);
    g.push(mat(m, vec![vec![z(m, 3), c(m, 0)], vec![c(m, 0), z(m, -3)]]));
    g.push(scalar(m, 1));
    let big = spec("octahedral x mu24", 2, m, g, Some(576));
    out.extend(rank2_family(
        big,
        24,
        &[
            t("G8", 96, 8, 12, Some(true)),
            t("G9", 192, 8, 24, None),
            t("G10", 288, 12, 24, Some(true)),
            t("G11", 576, 24, 24, None),
            t("G12", 48, 6, 8, None),
            t("G13", 96, 8, 12, Some(false)),
            t("G14", 144, 6, 24, None),
            t("G15", 288, 12, 24, Some(false)),
        ],
    ));

    let m = 60;
    let zz = |k: i64| z(m, 12 * k);
    let sqrt5 = &(&(&zz(1) - &zz(2)) - &zz(3)) + &zz(4);
    let inv5 = sqrt5.inv().unwrap();
    let a = mat(m, vec![vec![zz(3), c(m, 0)], vec![c(m, 0), zz(2)]]);
    let u = &zz(1) - &zz(4);
    let v = &zz(2) - &zz(3);
    let b = mat(m, vec![vec![-&(&u * &inv5), &v * &inv5], vec![&v * &inv5, &u * &inv5]]);
    let big = spec("icosahedral x mu60", 2, m, vec![a, b, scalar(m, 1)], Some(3600));
    out.extend(rank2_family(
        big,
        60,
        &[
            t("G16", 600, 20, 30, None),
            t("G17", 1200, 20, 60, None),
            t("G18", 1800, 30, 60, None),
            t("G19", 3600, 60, 60, None),
            t("G20", 360, 12, 30, None),
            t("G21", 720, 12, 60, None),
            t("G22", 240, 12, 20, None),
        ],
    ));
    out
}

fn verify(s: &GroupSpec) {
    let ge = generate(s, 4_000_000).unwrap_or_else(|e| panic!("{}: {e}", s.name));
    eprintln!("{}: order {} ok", s.name, ge.order());
}

fn finish(mut s: GroupSpec, degrees: &[u32], coexps: &[u32]) -> GroupSpec {
    s.expected_degrees = Some(degrees.to_vec());
    s.expected_coexponents = Some(coexps.to_vec());
    s.expected_order = Some(degrees.iter().map(|&d| d as u64).product());
    s
}

fn chain_group(name: &str, m: u32, roots: &[(Vec<Cyclotomic>, Cyclotomic)]) -> GroupSpec {
    let n = roots[0].0.len();
    let gens = roots.iter().map(|(v, l)| reflection(v, l, m)).collect();
    spec(name, n, m, gens, None)
}

fn ints(m: u32, v: &[i64]) -> Vec<Cyclotomic> {
    v.iter().map(|&k| c(m, k)).collect()
}

/// Reflection subgroup of an ambient finite group: all its reflections, then greedy generators.
fn reflections_of(ambient: &GroupSpec, target: usize) -> Vec<CycMatrix> {
    let ge = generate(ambient, 1_000_000).unwrap_or_else(|e| panic!("{}: {e}", ambient.name));
    eprintln!("{}: ambient order {}", ambient.name, ge.order());
    let f = *ge.field();
    let mp = Modp { f, n: ambient.n };
    let pool: Vec<(Mat, usize)> = ge.reflection_indices().into_iter().map(|i| (ge.element_modp(i).to_vec(), i)).collect();
    let chosen = greedy_by_closure(&mp, &pool, target);
    chosen.iter().map(|&i| ge.exact_element(i)).collect()
}

fn exceptional() -> Vec<(GroupSpec, String)> {
    let mut out = Vec::new();

    // G24: Klein's PSL(2,7) model over Q(ζ7) times ±I
    let m = 7;
    let zeta = |k: i64| z(m, k);
    let s7 = &(&(&zeta(1) + &zeta(2)) + &zeta(4)) - &(&(&zeta(3) + &zeta(5)) + &zeta(6));
    let k = (-&s7).inv().unwrap();
    let e = |a: i64, b: i64| &(&zeta(a) - &zeta(b)) * &k;
    let t = mat(m, vec![ints(m, &[0, 1, 0]), ints(m, &[0, 0, 1]), ints(m, &[1, 0, 0])]);
    let r = mat(
        m,
        vec![vec![e(1, 6), e(2, 5), e(4, 3)], vec![e(2, 5), e(4, 3), e(1, 6)], vec![e(4, 3), e(1, 6), e(2, 5)]],
    );
    let minus = CycMatrix::scalar(3, &c(m, -1));
    let diag = |a: i64, b: i64, cc: i64| {
        mat(m, vec![vec![zeta(a), c(m, 0), c(m, 0)], vec![c(m, 0), zeta(b), c(m, 0)], vec![c(m, 0), c(m, 0), zeta(cc)]])
    };
    let amb = [[1, 2, 4], [4, 2, 1], [2, 4, 1], [1, 4, 2], [4, 1, 2], [2, 1, 4]]
        .iter()
        .map(|p| spec("Klein x ±1", 3, m, vec![diag(p[0], p[1], p[2]), t.clone(), r.clone(), minus.clone()], Some(336)))
        .find(|s| generate(s, 400).is_ok())
        .expect("Klein model");
    let g = spec("G24", 3, m, reflections_of(&amb, 336), None);
    out.push((finish(g, &[4, 6, 14], &[1, 9, 11]), "Klein's PSL(2,7) model times ±I over Q(ζ7); greedy reflection generators".to_string()));

    // G25: Hessian group, three order-3 reflections in a chain
    let m = 3;
    let w = z(m, 1);
    let g = chain_group(
        "G25",
        m,
        &[(ints(m, &[1, 0, 0]), w.clone()), (ints(m, &[1, 1, 1]), w.clone()), (ints(m, &[0, 1, 0]), w.clone())],
    );
    out.push((finish(g, &[6, 9, 12], &[1, 4, 7]), "order-3 reflections with roots e1, (1,1,1), e2 over Q(ζ3)".to_string()));

    // G26: order-2 root joined by a 4-bond to the G25 chain end
    let g = chain_group(
        "G26",
        m,
        &[(ints(m, &[1, -1, 0]), c(m, -1)), (ints(m, &[1, 0, 0]), w.clone()), (ints(m, &[1, 1, 1]), w.clone())],
    );
    out.push((
        finish(g, &[6, 12, 18], &[1, 7, 13]),
        "order-2 reflection with root (1,-1,0) and order-3 reflections with roots e1, (1,1,1) over Q(ζ3)".to_string(),
    ));

    // G27: icosahedral rotations, a diagonal element of order 3, and −I over Q(ζ15)
    out.push(g27());

    // G29 and G31 from roots over Q(i)
    let m = 4;
    let i = |k: i64| z(m, k);
    let mut base: Vec<Vec<Cyclotomic>> = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            for k in 0..4 {
                let mut v = ints(m, &[0, 0, 0, 0]);
                v[a] = c(m, 1);
                v[b] = -&i(k);
                base.push(v);
            }
        }
    }
    let sign_vecs = |cond: &dyn Fn(i64) -> bool| -> Vec<Vec<Cyclotomic>> {
        let mut out = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for cc in 0..4 {
                    if cond(a + b + cc) {
                        out.push(vec![c(m, 1), i(a), i(b), i(cc)]);
                    }
                }
            }
        }
        out
    };
    let mut found29 = None;
    for (label, residue) in [("0 mod 4", 0), ("2 mod 4", 2), ("1 mod 4", 1), ("3 mod 4", 3)] {
        let mut roots = base.clone();
        roots.extend(sign_vecs(&|s| s.rem_euclid(4) == residue));
        let refls: Vec<CycMatrix> = roots.iter().map(|v| reflection(v, &c(m, -1), m)).collect();
        if std::panic::catch_unwind(|| greedy_by_lines(m, &refls)).map(|gens| {
            let s = spec("G29", 4, m, gens, Some(7680));
            generate(&s, 100_000).ok().map(|_| s)
        }).ok().flatten().map(|s| found29 = Some((s, label))).is_some() {
            break;
        }
    }
    let (g, label) = found29.expect("G29 root system");
    verify(&g);
    out.push((
        finish(g, &[4, 8, 12, 20], &[1, 9, 13, 17]),
        format!("roots e_a - i^k e_b and (1, i^a, i^b, i^c) with a+b+c = {label}, over Q(i)"),
    ));

    let mut roots = base.clone();
    for a in 0..4 {
        let mut v = ints(m, &[0, 0, 0, 0]);
        v[a] = c(m, 1);
        roots.push(v);
    }
    roots.extend(sign_vecs(&|s| s % 2 == 0));
    let refls: Vec<CycMatrix> = roots.iter().map(|v| reflection(v, &c(m, -1), m)).collect();
    let g = spec("G31", 4, m, greedy_by_lines(m, &refls), Some(46080));
    verify(&g);
    out.push((
        finish(g, &[8, 12, 20, 24], &[1, 13, 17, 29]),
        "roots e_a - i^k e_b, e_a and (1, i^a, i^b, i^c) with a+b+c even, over Q(i)".to_string(),
    ));

    // G32: four order-3 reflections in a chain
    let m = 3;
    let g = chain_group(
        "G32",
        m,
        &[
            (ints(m, &[1, 0, 0, 0]), w.clone()),
            (ints(m, &[1, 1, 1, 0]), w.clone()),
            (ints(m, &[0, 1, 0, 0]), w.clone()),
            (ints(m, &[0, 1, -1, 1]), w.clone()),
        ],
    );
    out.push((
        finish(g, &[12, 18, 24, 30], &[1, 7, 13, 19]),
        "order-3 reflections with roots e1, (1,1,1,0), e2, (0,1,-1,1) over Q(ζ3)".to_string(),
    ));

    // G33 and G34 from roots in C^6 over Q(ζ3)
    let om = |k: i64| z(m, k);
    let mut roots33: Vec<Vec<Cyclotomic>> = Vec::new();
    for a in 0..6 {
        for b in a + 1..6 {
            let mut v = ints(m, &[0; 6]);
            v[a] = c(m, 1);
            v[b] = c(m, -1);
            roots33.push(v);
        }
    }
    let mut seen = HashSet::new();
    for code in 0..729 {
        let digits: Vec<i64> = (0..6).map(|k| (code / 3i64.pow(k)) % 3).collect();
        let mut counts = [0; 3];
        for &d in &digits {
            counts[d as usize] += 1;
        }
        if counts != [2, 2, 2] || digits[0] != 0 {
            continue;
        }
        if seen.insert(digits.clone()) {
            roots33.push(digits.iter().map(|&d| om(d)).collect());
        }
    }
    let refls: Vec<CycMatrix> = roots33.iter().map(|v| reflection(v, &c(m, -1), m)).collect();
    let gens6 = greedy_by_lines(m, &refls);
    // restrict to the hyperplane Σx = 0 with basis u_k = e_k − e_{k+1}
    let restrict = |g: &CycMatrix| {
        CycMatrix::from_fn(5, m, |row, col| {
            let mut u = ints(m, &[0; 6]);
            u[col] = c(m, 1);
            u[col + 1] = c(m, -1);
            let img = g.apply(&u);
            img[..=row].iter().fold(c(m, 0), |acc, x| &acc + x)
        })
    };
    let mut g = spec("G33", 5, m, gens6.iter().map(restrict).collect(), Some(51840));
    g.unitary = false;
    verify(&g);
    out.push((
        finish(g, &[4, 6, 10, 12, 18], &[1, 7, 9, 13, 15]),
        "roots e_a - e_b and (ω^{a_1},…,ω^{a_6}) with each exponent used twice, on Σx = 0 in the basis e_k - e_{k+1}"
            .to_string(),
    ));

    let mut roots34: Vec<Vec<Cyclotomic>> = Vec::new();
    for a in 0..6 {
        for b in a + 1..6 {
            for k in 0..3 {
                let mut v = ints(m, &[0; 6]);
                v[a] = c(m, 1);
                v[b] = -&om(k);
                roots34.push(v);
            }
        }
    }
    for code in 0..243i64 {
        let mut digits: Vec<i64> = vec![0];
        digits.extend((0..5).map(|k| (code / 3i64.pow(k)) % 3));
        if digits.iter().sum::<i64>() % 3 == 0 {
            roots34.push(digits.iter().map(|&d| om(d)).collect());
        }
    }
    assert_eq!(roots34.len(), 126);
    let refls: Vec<CycMatrix> = roots34.iter().map(|v| reflection(v, &c(m, -1), m)).collect();
    let g = spec("G34", 6, m, greedy_by_lines(m, &refls), None);
    out.push((
        finish(g, &[6, 12, 18, 24, 30, 42], &[1, 13, 19, 25, 31, 37]),
        "roots e_a - ω^k e_b and (ω^{a_1},…,ω^{a_6}) with Σa ≡ 0 mod 3; order not checked by closure".to_string(),
    ));
    out
}

fn g27() -> (GroupSpec, String) {
    let m = 15;
    let z5 = |k: i64| z(m, 3 * k);
    let sqrt5 = &(&(&z5(1) - &z5(2)) - &z5(3)) + &z5(4);
    let phi = (&c(m, 1) + &sqrt5).scale(&rat(1, 2));
    let phim = &phi - &c(m, 1);
    // H3 from its 15 root lines: e_i and cyclic shifts of (±1, ±φ, ±φ⁻¹)
    let h3 = vec![
        reflection(&ints(m, &[1, 0, 0]), &c(m, -1), m),
        reflection(&[c(m, 1), phi.clone(), phim.clone()], &c(m, -1), m),
        reflection(&ints(m, &[0, 1, 0]), &c(m, -1), m),
    ];
    let h3_spec = spec("H3", 3, m, h3.clone(), Some(120));
    generate(&h3_spec, 200).expect("H3 model");
    let mut gens = h3;
    gens.push(reflection(&[c(m, 1), c(m, 0), z(m, 5)], &c(m, -1), m));
    let s = spec("G27", 3, m, gens, Some(2160));
    generate(&s, 2200).expect("G27 model");
    let f = field_for(m, &s.generators);
    let mp = Modp { f, n: 3 };
    let pool: Vec<(Mat, usize)> = s.generators.iter().enumerate().map(|(i, g)| (f.matrix(g).unwrap(), i)).collect();
    let chosen = greedy_by_closure(&mp, &pool, 2160);
    let s = spec("G27", 3, m, chosen.iter().map(|&i| s.generators[i].clone()).collect(), None);
    (
        finish(s, &[6, 12, 30], &[1, 19, 25]),
        "H3 with roots e1, (1, φ, φ-1), e2 plus the reflection with root (1, 0, ω), over Q(ζ15)".to_string(),
    )
}

fn main() {
    let mut entries: Vec<(GroupSpec, String)> = rank2_all();
    entries.extend(exceptional());
    let mut groups = Vec::new();
    for (s, src) in &entries {
        if s.name != "G34" {
            let ge = generate(s, 4_000_000).unwrap_or_else(|e| panic!("{}: {e}", s.name));
            assert_eq!(Some(ge.order()), s.expected_order, "{}", s.name);
        }
        groups.push(CatalogEntry::from_spec(s, src));
    }
    let cat = Catalog { groups };
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/catalog.json");
    std::fs::write(&path, serde_json::to_string_pretty(&cat).unwrap() + "\n").unwrap();
    eprintln!("wrote {} groups to {}", cat.groups.len(), path.display());
}
