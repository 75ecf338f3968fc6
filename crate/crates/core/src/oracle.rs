//! Structure-constant realizations of small algebras with involution
//! (dimension at most 16), used to cross-check the symbolic layer by brute force.

use crate::error::{Error, Result};
use crate::field::{in_span, kernel, row_reduce, Field};
use crate::involution::TDInvolution;
use crate::par;
use rand::RngCore;

/// Largest supported dimension.
pub const MAX_DIM: usize = 16;

/// A finite-dimensional algebra given by its multiplication table.
#[derive(Clone, Debug)]
pub struct StructAlg<E: Field> {
    pub field: E,
    pub dim: usize,
    /// table[i * dim + j] holds the coordinates of e_i e_j.
    pub table: Vec<Vec<E::Elem>>,
    pub labels: Vec<String>,
}

/// A linear map given by the images of the basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinInvolution<T> {
    pub images: Vec<Vec<T>>,
}

impl<E: Field> StructAlg<E> {
    pub fn basis(&self, i: usize) -> Vec<E::Elem> {
        let mut v = vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        v
    }

    pub fn one(&self) -> Vec<E::Elem> {
        self.basis(0)
    }

    pub fn scalar(&self, c: &E::Elem) -> Vec<E::Elem> {
        self.scale(&self.one(), c)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn add(&self, x: &[E::Elem], y: &[E::Elem]) -> Vec<E::Elem> {
        x.iter().zip(y).map(|(a, b)| self.field.add(a, b)).collect()
    }

    pub fn scale(&self, x: &[E::Elem], c: &E::Elem) -> Vec<E::Elem> {
        x.iter().map(|a| self.field.mul(a, c)).collect()
    }

    pub fn is_zero(&self, x: &[E::Elem]) -> bool {
        x.iter().all(|a| self.field.is_zero(a))
    }

    pub fn mul(&self, x: &[E::Elem], y: &[E::Elem]) -> Vec<E::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim];
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !f.is_zero(c)) {
            for (j, yj) in y.iter().enumerate().filter(|(_, c)| !f.is_zero(c)) {
                let c = f.mul(xi, yj);
                for (o, t) in out.iter_mut().zip(&self.table[i * self.dim + j]) {
                    if !f.is_zero(t) {
                        *o = f.add(o, &f.mul(&c, t));
                    }
                }
            }
        }
        out
    }

    /// Checks (e_i e_j) e_k = e_i (e_j e_k) on all basis triples.
    pub fn is_associative(&self) -> bool {
        let triples: Vec<(usize, usize)> = (0..self.dim).flat_map(|i| (0..self.dim).map(move |j| (i, j))).collect();
        par::map(&triples, |&(i, j)| {
            let (ei, ej) = (self.basis(i), self.basis(j));
            let eij = self.mul(&ei, &ej);
            (0..self.dim).all(|k| {
                let ek = self.basis(k);
                self.mul(&eij, &ek) == self.mul(&ei, &self.mul(&ej, &ek))
            })
        })
        .into_iter()
        .all(|b| b)
    }

    pub fn is_unital(&self) -> bool {
        let one = self.one();
        (0..self.dim).all(|i| {
            let e = self.basis(i);
            self.mul(&one, &e) == e && self.mul(&e, &one) == e
        })
    }
}

impl<T: Clone + PartialEq> LinInvolution<T> {
    pub fn apply<E: Field<Elem = T>>(&self, field: &E, x: &[T]) -> Vec<T> {
        let n = x.len();
        let mut out = vec![field.zero(); n];
        for (xi, img) in x.iter().zip(&self.images) {
            if field.is_zero(xi) {
                continue;
            }
            for (o, c) in out.iter_mut().zip(img) {
                *o = field.add(o, &field.mul(xi, c));
            }
        }
        out
    }

    pub fn is_involutive<E: Field<Elem = T>>(&self, alg: &StructAlg<E>) -> bool {
        (0..alg.dim).all(|i| self.apply(&alg.field, &self.images[i]) == alg.basis(i))
    }

    /// sigma(e_i e_j) = sigma(e_j) sigma(e_i) on all basis pairs.
    pub fn is_anti_multiplicative<E: Field<Elem = T>>(&self, alg: &StructAlg<E>) -> bool {
        (0..alg.dim).all(|i| {
            (0..alg.dim).all(|j| {
                let lhs = self.apply(&alg.field, &alg.mul(&alg.basis(i), &alg.basis(j)));
                lhs == alg.mul(&self.images[j], &self.images[i])
            })
        })
    }

    pub fn fixes_scalars<E: Field<Elem = T>>(&self, alg: &StructAlg<E>) -> bool {
        self.images[0] == alg.one()
    }
}

/// Basis 1, u, v, w = uv with u^2 = a + u, v^2 = b, vu = uv + v. Labels carry
/// the factor index.
pub fn build_quaternion<E: Field>(field: &E, a: &E::Elem, b: &E::Elem, index: usize) -> StructAlg<E> {
    let z = field.zero();
    let o = field.one();
    let ab = field.mul(a, b);
    let v = |c: [&E::Elem; 4]| c.iter().map(|x| (*x).clone()).collect::<Vec<_>>();
    #[rustfmt::skip]
    let table = vec![
        v([&o, &z, &z, &z]), v([&z, &o, &z, &z]), v([&z, &z, &o, &z]), v([&z, &z, &z, &o]),
        v([&z, &o, &z, &z]), v([a, &o, &z, &z]), v([&z, &z, &z, &o]), v([&z, &z, a, &o]),
        v([&z, &z, &o, &z]), v([&z, &z, &o, &o]), v([b, &z, &z, &z]), v([b, b, &z, &z]),
        v([&z, &z, &z, &o]), v([&z, &z, a, &z]), v([&z, b, &z, &z]), v([&ab, &z, &z, &z]),
    ];
    StructAlg {
        field: field.clone(),
        dim: 4,
        table,
        labels: vec!["1".into(), format!("u{index}"), format!("v{index}"), format!("w{index}")],
    }
}

/// Fixes 1, u, v and sends w to w + v.
pub fn build_sigma0<E: Field>(field: &E) -> LinInvolution<E::Elem> {
    let (z, o) = (field.zero(), field.one());
    LinInvolution {
        images: vec![
            vec![o.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), o.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), o.clone(), z.clone()],
            vec![z.clone(), z.clone(), o.clone(), o],
        ],
    }
}

fn join_label(a: &str, b: &str) -> String {
    match (a, b) {
        ("1", _) => b.to_string(),
        (_, "1") => a.to_string(),
        _ => format!("{a}*{b}"),
    }
}

/// Tensor product with basis e_i x f_j at index i * dim(B) + j.
pub fn tensor<E: Field>(a: &StructAlg<E>, b: &StructAlg<E>) -> StructAlg<E> {
    let f = &a.field;
    let dim = a.dim * b.dim;
    let mut table = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let pa = &a.table[(i / b.dim) * a.dim + j / b.dim];
            let pb = &b.table[(i % b.dim) * b.dim + j % b.dim];
            table.push(pa.iter().flat_map(|x| pb.iter().map(move |y| f.mul(x, y))).collect());
        }
    }
    let labels = a.labels.iter().flat_map(|x| b.labels.iter().map(move |y| join_label(x, y))).collect();
    StructAlg { field: f.clone(), dim, table, labels }
}

pub fn tensor_involution<E: Field>(field: &E, s: &LinInvolution<E::Elem>, t: &LinInvolution<E::Elem>) -> LinInvolution<E::Elem> {
    let images = s
        .images
        .iter()
        .flat_map(|x| t.images.iter().map(move |y| x.iter().flat_map(|a| y.iter().map(move |b| field.mul(a, b))).collect()))
        .collect();
    LinInvolution { images }
}

/// The tensor product of the quaternion factors with sigma_0 on each.
pub fn build_algebra<E: Field>(field: &E, a: &TDInvolution<E::Elem>) -> Result<(StructAlg<E>, LinInvolution<E::Elem>)> {
    if a.n() == 0 {
        return Err(Error::Precondition("an algebra needs at least one factor".into()));
    }
    if 1usize << (2 * a.n()) > MAX_DIM {
        return Err(Error::TooManyFactors(a.n(), 2));
    }
    let mut alg = build_quaternion(field, &a.factors[0].0, &a.factors[0].1, 1);
    let mut inv = build_sigma0(field);
    for (i, (x, b)) in a.factors.iter().enumerate().skip(1) {
        alg = tensor(&alg, &build_quaternion(field, x, b, i + 1));
        inv = tensor_involution(field, &inv, &build_sigma0(field));
    }
    Ok((alg, inv))
}

/// Rows of id + sigma as a matrix acting on coordinate columns.
fn id_plus_sigma<E: Field>(alg: &StructAlg<E>, inv: &LinInvolution<E::Elem>) -> Vec<Vec<E::Elem>> {
    let f = &alg.field;
    (0..alg.dim)
        .map(|r| (0..alg.dim).map(|c| f.add(&inv.images[c][r], &alg.basis(c)[r])).collect())
        .collect()
}

/// Echelon basis of Alt = {x - sigma(x)}.
pub fn alt_space<E: Field>(alg: &StructAlg<E>, inv: &LinInvolution<E::Elem>) -> Vec<Vec<E::Elem>> {
    let f = &alg.field;
    let mut rows: Vec<Vec<E::Elem>> =
        (0..alg.dim).map(|c| alg.add(&alg.basis(c), &inv.apply(f, &alg.basis(c)))).collect();
    row_reduce(f, &mut rows);
    rows.retain(|r| !alg.is_zero(r));
    rows
}

/// Basis of Sym = {x : sigma(x) = x}.
pub fn sym_space<E: Field>(alg: &StructAlg<E>, inv: &LinInvolution<E::Elem>) -> Vec<Vec<E::Elem>> {
    kernel(&alg.field, &id_plus_sigma(alg, inv), alg.dim)
}

fn in_space<E: Field>(field: &E, basis: &[Vec<E::Elem>], x: &[E::Elem]) -> bool {
    basis.is_empty() && x.iter().all(|c| field.is_zero(c)) || !basis.is_empty() && in_span(field, basis, x)
}

fn random_in<E: Field>(alg: &StructAlg<E>, basis: &[Vec<E::Elem>], height: usize, rng: &mut dyn RngCore) -> Vec<E::Elem> {
    let mut x = vec![alg.field.zero(); alg.dim];
    for b in basis {
        if rng.next_u32() & 1 == 1 {
            x = alg.add(&x, &alg.scale(b, &alg.field.random(height, rng)));
        }
    }
    x
}

/// Counts of checked samples and violations for each structural claim, with
/// the first violating element rendered.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaReport {
    pub usym_checked: usize,
    pub usym_violations: usize,
    pub sa_checked: usize,
    pub sa_violations: usize,
    pub zero_checked: usize,
    pub zero_violations: usize,
    pub direct_checked: usize,
    pub direct_violations: usize,
    pub witness: Option<String>,
}

impl LemmaReport {
    pub fn violations(&self) -> usize {
        self.usym_violations + self.sa_violations + self.zero_violations + self.direct_violations
    }
}

fn render_vec<E: Field>(alg: &StructAlg<E>, x: &[E::Elem]) -> String {
    let terms: Vec<String> = x
        .iter()
        .zip(&alg.labels)
        .filter(|(c, _)| !alg.field.is_zero(c))
        .map(|(c, l)| format!("({})*{l}", alg.field.render(c)))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Samples the structural lemmas. The anisotropic-only claims are checked only
/// when `anisotropic` is set.
pub fn check_lemma_suite<E: Field>(
    alg: &StructAlg<E>,
    inv: &LinInvolution<E::Elem>,
    anisotropic: bool,
    samples: usize,
    height: usize,
    rng: &mut dyn RngCore,
) -> LemmaReport {
    let f = &alg.field;
    let alt = alt_space(alg, inv);
    let sym = sym_space(alg, inv);
    let mut rep = LemmaReport::default();
    let note = |rep: &mut LemmaReport, x: &[E::Elem]| {
        if rep.witness.is_none() {
            rep.witness = Some(render_vec(alg, x));
        }
    };
    for i in 1.. {
        let (Some(u), Some(v)) = (alg.index_of(&format!("u{i}")), alg.index_of(&format!("v{i}"))) else {
            break;
        };
        if in_space(f, &alt, &alg.basis(v)) {
            rep.usym_checked += 1;
            if inv.apply(f, &alg.basis(u)) != alg.basis(u) {
                rep.usym_violations += 1;
                note(&mut rep, &alg.basis(u));
            }
        }
    }
    // A functional vanishing on Alt but not on 1 isolates the scalar part.
    let phi = kernel(f, &alt, alg.dim).into_iter().find(|p| !f.is_zero(&p[0]));
    for _ in 0..samples {
        let x = random_in(alg, &sym, height, rng);
        let y = random_in(alg, &alt, height, rng);
        rep.sa_checked += 1;
        let xyx = alg.mul(&alg.mul(&x, &y), &x);
        if !in_space(f, &alt, &xyx) {
            rep.sa_violations += 1;
            note(&mut rep, &x);
        }
        if !anisotropic {
            continue;
        }
        let x2 = alg.mul(&x, &x);
        if let Some(p) = &phi {
            let val = f.sum(p.iter().zip(&x2).map(|(a, b)| f.mul(a, b)).collect::<Vec<_>>().iter());
            let alpha = f.div(&val, &p[0]).expect("functional is nonzero on 1");
            if in_space(f, &alt, &alg.add(&x2, &alg.scalar(&alpha))) {
                rep.zero_checked += 1;
                if x2 != alg.scalar(&alpha) {
                    rep.zero_violations += 1;
                    note(&mut rep, &x);
                }
            }
        }
        let z = random_in(alg, &(0..alg.dim).map(|i| alg.basis(i)).collect::<Vec<_>>(), height, rng);
        if !alg.is_zero(&z) {
            rep.direct_checked += 1;
            if in_space(f, &alt, &alg.mul(&inv.apply(f, &z), &z)) {
                rep.direct_violations += 1;
                note(&mut rep, &z);
            }
        }
    }
    rep
}

/// Some x != 0 with sigma(x) x = 0 whose coordinates have height at most the
/// bound. The search is exhaustive when the coordinate space is small and
/// otherwise runs over vectors with at most two nonzero coordinates.
pub fn isotropic_search<E: Field>(
    alg: &StructAlg<E>,
    inv: &LinInvolution<E::Elem>,
    height_bound: usize,
) -> Result<Option<Vec<E::Elem>>> {
    if alg.dim == 0 {
        return Err(Error::Precondition("the algebra has dimension 0".into()));
    }
    let f = &alg.field;
    let coords: Vec<E::Elem> = f.enumerate(height_bound).into_iter().filter(|c| !f.is_zero(c)).collect();
    let isotropic = |x: &Vec<E::Elem>| alg.is_zero(&alg.mul(&inv.apply(f, x), x)).then(|| x.clone());
    let full = (coords.len() + 1).checked_pow(alg.dim as u32).is_some_and(|n| n <= 200_000);
    let candidates: Vec<Vec<E::Elem>> = if full {
        let mut all = vec![vec![f.zero(); alg.dim]];
        for i in 0..alg.dim {
            let mut next = Vec::with_capacity(all.len() * (coords.len() + 1));
            for x in &all {
                next.push(x.clone());
                for c in &coords {
                    let mut y = x.clone();
                    y[i] = c.clone();
                    next.push(y);
                }
            }
            all = next;
        }
        all.into_iter().filter(|x| !alg.is_zero(x)).collect()
    } else {
        let mut out = Vec::new();
        for i in 0..alg.dim {
            for c in &coords {
                let mut x = vec![f.zero(); alg.dim];
                x[i] = c.clone();
                out.push(x.clone());
                for j in i + 1..alg.dim {
                    for d in &coords {
                        let mut y = x.clone();
                        y[j] = d.clone();
                        out.push(y);
                    }
                }
            }
        }
        out
    };
    Ok(par::find_map_first(&candidates, isotropic))
}

/// Brute-force splitting witness for [a, b): b a square, or a = d^2 + d + e^2 b
/// with d, e of height at most the bound.
pub fn split_witness_search<E: Field>(
    field: &E,
    a: &E::Elem,
    b: &E::Elem,
    height_bound: usize,
) -> Option<(E::Elem, E::Elem)> {
    if field.sqrt(b).is_some() {
        return Some((field.zero(), field.zero()));
    }
    let elems = field.enumerate(height_bound);
    par::find_map_first(&elems, |e| {
        let rest = field.add(a, &field.mul(&field.square(e), b));
        elems.iter().find(|d| field.wp(d) == rest).map(|d| (d.clone(), e.clone()))
    })
}
