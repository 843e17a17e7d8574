use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::Cyclotomic;

use super::matrix::CycMatrix;
use super::modp::ModField;

/// Default element cap for closure.
pub const DEFAULT_CAP: usize = 4_000_000;

/// Groups larger than this need an explicit opt-in.
pub const LARGE_ORDER: u64 = 3_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub name: String,
    pub n: usize,
    pub m: u32,
    pub generators: Vec<CycMatrix>,
    pub expected_order: Option<u64>,
    pub expected_degrees: Option<Vec<u32>>,
    pub expected_coexponents: Option<Vec<u32>>,
    pub unitary: bool,
    pub irreducible: bool,
}

impl GroupSpec {
    /// Generator sanity: right size, invertible, and unitary when flagged.
    pub fn self_check(&self) -> Result<()> {
        for (i, g) in self.generators.iter().enumerate() {
            if g.n() != self.n {
                return Err(Error::Catalog(format!("{}: generator {i} has wrong size", self.name)));
            }
            let inv = g.inverse().map_err(|_| Error::Catalog(format!("{}: generator {i} is singular", self.name)))?;
            if self.unitary && inv != g.conj_transpose().embed(inv.m()) {
                return Err(Error::Catalog(format!("{}: generator {i} is not unitary", self.name)));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct EigenBucket {
    /// det(x·I − w), lowest degree first.
    pub key: Vec<Cyclotomic>,
    pub representative: CycMatrix,
    pub count: u64,
}

/// An enumerated group: all elements reduced mod p, a BFS spanning tree
/// giving each element as a word in the generators, and eigenvalue buckets.
pub struct GroupElements {
    pub spec: GroupSpec,
    field: ModField,
    elems: Vec<u64>,
    parents: Vec<(u32, u8)>,
    buckets: Vec<EigenBucket>,
    bucket_of: Vec<u32>,
    table: ElementTable,
}

struct ElementTable {
    slots: Vec<u32>,
    mask: usize,
}

fn slice_hash(v: &[u64]) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    v.hash(&mut h);
    h.finish()
}

impl ElementTable {
    fn new() -> Self {
        ElementTable { slots: vec![u32::MAX; 1024], mask: 1023 }
    }

    fn find(&self, elems: &[u64], sz: usize, v: &[u64]) -> std::result::Result<u32, usize> {
        let mut i = slice_hash(v) as usize & self.mask;
        loop {
            let s = self.slots[i];
            if s == u32::MAX {
                return Err(i);
            }
            let k = s as usize * sz;
            if &elems[k..k + sz] == v {
                return Ok(s);
            }
            i = (i + 1) & self.mask;
        }
    }

    fn grow(&mut self, elems: &[u64], sz: usize, count: usize) {
        let len = self.slots.len() * 2;
        self.slots = vec![u32::MAX; len];
        self.mask = len - 1;
        for idx in 0..count {
            let v = &elems[idx * sz..(idx + 1) * sz];
            if let Err(slot) = self.find(elems, sz, v) {
                self.slots[slot] = idx as u32;
            }
        }
    }
}

pub fn generate(spec: &GroupSpec, cap: usize) -> Result<GroupElements> {
    spec.self_check()?;
    let n = spec.n;
    let sz = n * n;
    let mut avoid = BigInt::from(1);
    for g in &spec.generators {
        for e in g.entries() {
            avoid = avoid.lcm(&e.denominator_lcm());
        }
    }
    let field = ModField::new(spec.m, &avoid);
    let gens: Vec<Vec<u64>> = spec.generators.iter().map(|g| field.matrix(&g.embed(spec.m))).collect::<Result<_>>()?;
    if gens.len() > u8::MAX as usize {
        return Err(Error::Catalog("too many generators".into()));
    }

    let mut elems: Vec<u64> = Vec::with_capacity(sz * spec.expected_order.unwrap_or(64).min(cap as u64) as usize);
    let mut parents: Vec<(u32, u8)> = Vec::new();
    let mut table = ElementTable::new();
    let mut id = vec![0u64; sz];
    for i in 0..n {
        id[i * n + i] = 1;
    }
    let slot = table.find(&elems, sz, &id).unwrap_err();
    table.slots[slot] = 0;
    elems.extend_from_slice(&id);
    parents.push((u32::MAX, 0));

    let mut prod = vec![0u64; sz];
    let mut head = 0usize;
    let mut count = 1usize;
    while head < count {
        for (gi, g) in gens.iter().enumerate() {
            field.mat_mul(&elems[head * sz..(head + 1) * sz], g, n, &mut prod);
            if let Err(slot) = table.find(&elems, sz, &prod) {
                if count >= cap {
                    return Err(Error::TooLarge { cap });
                }
                table.slots[slot] = count as u32;
                elems.extend_from_slice(&prod);
                parents.push((head as u32, gi as u8));
                count += 1;
                if count * 2 > table.slots.len() {
                    table.grow(&elems, sz, count);
                }
            }
        }
        head += 1;
    }
    if let Some(o) = spec.expected_order {
        if o != count as u64 {
            return Err(Error::Integrity(format!("{}: closure has {count} elements, expected {o}", spec.name)));
        }
    }

    let polys: Vec<Vec<u64>> =
        elems.par_chunks(sz).map(|e| field.char_poly(e, n)).collect();
    let mut index: HashMap<&[u64], u32> = HashMap::new();
    let mut firsts: Vec<(usize, u64)> = Vec::new();
    let mut bucket_of = Vec::with_capacity(count);
    for (i, cp) in polys.iter().enumerate() {
        let b = *index.entry(cp.as_slice()).or_insert_with(|| {
            firsts.push((i, 0));
            (firsts.len() - 1) as u32
        });
        firsts[b as usize].1 += 1;
        bucket_of.push(b);
    }
    let mut ge = GroupElements { spec: spec.clone(), field, elems, parents, buckets: Vec::new(), bucket_of, table };
    let buckets = firsts
        .par_iter()
        .map(|&(i, cnt)| {
            let rep = ge.exact_element(i);
            let key = rep.char_poly();
            let reduced: Vec<u64> = key.iter().map(|c| ge.field.cyc(c)).collect::<Result<_>>()?;
            if reduced != polys[i] {
                return Err(Error::Integrity(format!("{}: word replay disagrees with reduction", spec.name)));
            }
            Ok(EigenBucket { key, representative: rep, count: cnt })
        })
        .collect::<Result<Vec<_>>>()?;
    ge.buckets = buckets;
    Ok(ge)
}

impl GroupElements {
    pub fn order(&self) -> u64 {
        self.parents.len() as u64
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn buckets(&self) -> &[EigenBucket] {
        &self.buckets
    }

    pub fn field(&self) -> &ModField {
        &self.field
    }

    /// Element i reduced mod p, row-major.
    pub fn element_modp(&self, i: usize) -> &[u64] {
        let sz = self.spec.n * self.spec.n;
        &self.elems[i * sz..(i + 1) * sz]
    }

    pub fn index_of(&self, v: &[u64]) -> Option<usize> {
        self.table.find(&self.elems, self.spec.n * self.spec.n, v).ok().map(|i| i as usize)
    }

    pub fn bucket_of(&self, i: usize) -> usize {
        self.bucket_of[i] as usize
    }

    /// Generator indices whose left-to-right product is element i.
    pub fn word(&self, mut i: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while self.parents[i].0 != u32::MAX {
            w.push(self.parents[i].1 as usize);
            i = self.parents[i].0 as usize;
        }
        w.reverse();
        w
    }

    pub fn exact_element(&self, i: usize) -> CycMatrix {
        let mut acc = CycMatrix::identity(self.spec.n, self.spec.m);
        for g in self.word(i) {
            acc = acc.mul(&self.spec.generators[g]);
        }
        acc
    }

    /// Every element in exact form, built along the BFS tree.
    pub fn all_exact(&self) -> Vec<CycMatrix> {
        let mut out: Vec<CycMatrix> = Vec::with_capacity(self.parents.len());
        for (i, &(par, g)) in self.parents.iter().enumerate() {
            if i == 0 {
                out.push(CycMatrix::identity(self.spec.n, self.spec.m));
            } else {
                let e = out[par as usize].mul(&self.spec.generators[g as usize]);
                out.push(e);
            }
        }
        out
    }

    /// Indices of elements fixing a hyperplane pointwise.
    pub fn reflection_indices(&self) -> Vec<usize> {
        let n = self.spec.n;
        let refl: Vec<bool> = self.buckets.iter().map(|b| is_reflection_poly(&b.key, n)).collect();
        (0..self.parents.len()).filter(|&i| refl[self.bucket_of[i] as usize]).collect()
    }
}

/// det(xI − w) = (x − 1)^{n−1}(x − λ) with λ ≠ 1.
pub fn is_reflection_poly(key: &[Cyclotomic], n: usize) -> bool {
    if n == 0 {
        return false;
    }
    let m = key[0].order();
    // λ = trace − (n − 1), and trace = −coefficient of x^{n−1}
    let trace = -&key[n - 1];
    let lambda = &trace - &Cyclotomic::from_int(m, n as i64 - 1);
    if lambda.is_one() {
        return false;
    }
    let mut p = vec![Cyclotomic::one(m)];
    let roots: Vec<Cyclotomic> = std::iter::repeat(Cyclotomic::one(m)).take(n - 1).chain(std::iter::once(lambda)).collect();
    for r in roots {
        let mut next = vec![Cyclotomic::zero(m); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(c * &r);
        }
        p = next;
    }
    p.iter().zip(key).all(|(a, b)| a == b)
}
