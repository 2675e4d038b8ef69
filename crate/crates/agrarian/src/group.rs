//! Finitely presented groups: words, presentations, abelianization via Smith
//! normal form, integral characters, exact matrix representations over ℚ(i),
//! Fox calculus and Nielsen adaptation of presentations.

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Monomial};
use crate::lattice::{self, IntMat};
use crate::matrix::Matrix;
use crate::scalar::GaussianRational;
use num::bigint::BigInt;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A freely reduced word in the generators: letters are
/// (generator index, exponent ±1) with no adjacent inverse pairs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word {
    letters: Vec<(usize, i8)>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn generator(index: usize) -> Self {
        Word { letters: vec![(index, 1)] }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = (usize, i8)>) -> Self {
        let mut w = Word::identity();
        for (g, e) in letters {
            assert!(e == 1 || e == -1, "letter exponent must be ±1");
            w.push(g, e);
        }
        w
    }

    fn push(&mut self, gen: usize, exp: i8) {
        if let Some(&(lg, le)) = self.letters.last() {
            if lg == gen && le == -exp {
                self.letters.pop();
                return;
            }
        }
        self.letters.push((gen, exp));
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(g, e) in &other.letters {
            w.push(g, e);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    /// Exponent-sum vector over `num_gens` generators.
    pub fn exponent_sums(&self, num_gens: usize) -> Vec<i64> {
        let mut v = vec![0i64; num_gens];
        for &(g, e) in &self.letters {
            v[g] += i64::from(e);
        }
        v
    }

    /// Rewrites every occurrence of generator `target` by the given word,
    /// leaving other letters in place.
    pub fn substitute(&self, target: usize, replacement: &Word) -> Word {
        let mut out = Word::identity();
        let inv = replacement.inverse();
        for &(g, e) in &self.letters {
            if g == target {
                let rep = if e == 1 { replacement } else { &inv };
                for &(h, f) in &rep.letters {
                    out.push(h, f);
                }
            } else {
                out.push(g, e);
            }
        }
        out
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        // run-length collect powers for readability
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let (g, e) = self.letters[i];
            let mut run = i64::from(e);
            let mut j = i + 1;
            while j < self.letters.len() && self.letters[j].0 == g && self.letters[j].1 == e {
                run += i64::from(e);
                j += 1;
            }
            let name = &names[g];
            if run == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{run}"));
            }
            i = j;
        }
        parts.join(" ")
    }
}

/// A finite presentation: distinct generator names plus freely reduced
/// relator words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn num_gens(&self) -> usize {
        self.generators.len()
    }

    /// Deficiency-one check: one fewer relator than generators.
    pub fn is_deficiency_one(&self) -> bool {
        self.relators.len() + 1 == self.generators.len()
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Parses `<a,b | a b a b^-1 a^-1 b^-1, ...>`. Relators separated by
    /// commas; letters are whitespace-separated names with optional `^k`.
    pub fn parse(text: &str) -> Result<Presentation> {
        let s = text;
        let open = s.find('<').ok_or_else(|| Error::parse(0, "expected '<'"))?;
        let close = s.rfind('>').ok_or_else(|| Error::parse(s.len(), "expected '>'"))?;
        if close <= open {
            return Err(Error::parse(close, "mismatched angle brackets"));
        }
        let inner = &s[open + 1..close];
        let bar = inner
            .find('|')
            .ok_or_else(|| Error::parse(open + 1, "expected '|' separating generators from relators"))?;
        let gen_part = &inner[..bar];
        let rel_part = &inner[bar + 1..];
        let mut generators = Vec::new();
        for raw in gen_part.split(',') {
            let name = raw.trim();
            if name.is_empty() {
                continue;
            }
            if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::parse(open + 1, format!("bad generator name '{name}'")));
            }
            if generators.iter().any(|g| g == name) {
                return Err(Error::validation(format!("duplicate generator '{name}'")));
            }
            generators.push(name.to_string());
        }
        if generators.is_empty() {
            return Err(Error::parse(open + 1, "no generators"));
        }
        let mut relators = Vec::new();
        let rel_offset = open + 1 + bar + 1;
        for chunk in rel_part.split(',') {
            let trimmed = chunk.trim();
            if trimmed.is_empty() {
                continue;
            }
            let pres_stub = Presentation { generators: generators.clone(), relators: vec![] };
            let w = pres_stub.parse_word_at(trimmed, rel_offset)?;
            relators.push(w);
        }
        Ok(Presentation { generators, relators })
    }

    /// Parses a single word in this presentation's generators.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        self.parse_word_at(text, 0)
    }

    fn parse_word_at(&self, text: &str, offset: usize) -> Result<Word> {
        let mut w = Word::identity();
        for token in text.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                None => (token, 1i64),
                Some((n, e)) => {
                    let exp: i64 = e
                        .parse()
                        .map_err(|_| Error::parse(offset, format!("bad exponent '{e}'")))?;
                    (n, exp)
                }
            };
            let idx = self
                .gen_index(name)
                .ok_or_else(|| Error::parse(offset, format!("unknown generator '{name}'")))?;
            let sign: i8 = if exp >= 0 { 1 } else { -1 };
            for _ in 0..exp.unsigned_abs() {
                w.push(idx, sign);
            }
        }
        Ok(w)
    }

    pub fn display(&self) -> String {
        let rels: Vec<String> = self.relators.iter().map(|r| r.display_with(&self.generators)).collect();
        format!("<{} | {}>", self.generators.join(","), rels.join(", "))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

/// An element of the integral group ring ℤF on the presentation's
/// generators: a finite map from freely reduced words to nonzero integers.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, BigInt>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        GroupRingElement::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::identity())
    }

    pub fn from_word(w: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, BigInt::one());
        GroupRingElement { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, i64)>) -> Self {
        let mut e = GroupRingElement::zero();
        for (w, c) in terms {
            e.add_term(w, BigInt::from(c));
        }
        e
    }

    /// `1 − w`, the ubiquitous boundary coefficient.
    pub fn one_minus(w: Word) -> Self {
        let mut e = GroupRingElement::one();
        e.add_term(w, -BigInt::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    fn add_term(&mut self, w: Word, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> GroupRingElement {
        GroupRingElement { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c.clone())).collect() }
    }

    pub fn mul(&self, other: &GroupRingElement) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.mul(w2), c1 * c2);
            }
        }
        out
    }

    pub fn mul_word(&self, w: &Word) -> GroupRingElement {
        GroupRingElement { terms: self.terms.iter().map(|(u, c)| (u.mul(w), c.clone())).collect() }
    }

    /// Rewrites each word through a generator substitution.
    pub fn substitute(&self, target: usize, replacement: &Word) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        for (w, c) in &self.terms {
            out.add_term(w.substitute(target, replacement), c.clone());
        }
        out
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let word_str = w.display_with(names);
            let piece = if w.is_empty() {
                format!("{c}")
            } else if c.is_one() {
                word_str
            } else if (-c).is_one() {
                format!("-{word_str}")
            } else {
                format!("{c} {word_str}")
            };
            if i == 0 {
                out.push_str(&piece);
            } else if let Some(rest) = piece.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&piece);
            }
        }
        out
    }
}

/// Fox derivative ∂w/∂x: ∂(uv) = ∂u + u·∂v with ∂x/∂x = 1,
/// ∂x⁻¹/∂x = −x⁻¹ and ∂y/∂x = 0.
pub fn fox_derivative(w: &Word, gen: usize) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    let mut prefix = Word::identity();
    for &(g, e) in w.letters() {
        if g == gen {
            if e == 1 {
                out = out.add(&GroupRingElement::from_word(prefix.clone()));
            } else {
                let mut p = prefix.clone();
                p = p.mul(&Word::from_letters([(g, -1)]));
                out = out.sub(&GroupRingElement::from_word(p));
            }
        }
        prefix = prefix.mul(&Word::from_letters([(g, e)]));
    }
    out
}

/// The natural map onto the maximal free abelian quotient, realized by the
/// Smith normal form of the relator exponent matrix. `images[g]` is the
/// image of generator `g` in ℤᵏ; torsion invariants are kept as diagnostics.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelianizationMap {
    pub rank: usize,
    pub images: Vec<Vec<i64>>,
    pub torsion: Vec<BigInt>,
}

impl AbelianizationMap {
    pub fn image_of_word(&self, w: &Word) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        for &(g, e) in w.letters() {
            for (slot, img) in v.iter_mut().zip(&self.images[g]) {
                *slot += img * i64::from(e);
            }
        }
        v
    }

    pub fn monomial_of_word(&self, w: &Word) -> Monomial {
        Monomial(self.image_of_word(w))
    }

    pub fn is_zero_on(&self, w: &Word) -> bool {
        self.image_of_word(w).iter().all(|x| *x == 0)
    }
}

/// Computes the free-abelianization data of a presentation.
pub fn abelianize(p: &Presentation) -> AbelianizationMap {
    let g = p.num_gens();
    let r = p.relators.len();
    // rows: relators' exponent sums
    let mut m: IntMat = Vec::with_capacity(r);
    for rel in &p.relators {
        m.push(rel.exponent_sums(g).into_iter().map(BigInt::from).collect());
    }
    if r == 0 {
        return AbelianizationMap {
            rank: g,
            images: (0..g)
                .map(|i| (0..g).map(|j| i64::from(i == j)).collect())
                .collect(),
            torsion: Vec::new(),
        };
    }
    let (_, d, v) = lattice::smith_normal_form(&m);
    // nonzero diagonal entries of d are the elementary divisors
    let mut divisors: Vec<BigInt> = Vec::new();
    for i in 0..r.min(g) {
        if !d[i][i].is_zero() {
            divisors.push(d[i][i].clone());
        }
    }
    let rank = g - divisors.len();
    let torsion: Vec<BigInt> = divisors.iter().filter(|x| !x.is_one()).cloned().collect();
    // in transformed coordinates x·V, the quotient's free part is the last
    // `rank` coordinates; generator e_g has image = last coords of row g of V
    let images: Vec<Vec<i64>> = (0..g)
        .map(|gen| {
            (g - rank..g)
                .map(|col| i64::try_from(v[gen][col].clone()).expect("image fits i64"))
                .collect()
        })
        .collect();
    AbelianizationMap { rank, images, torsion }
}

/// An integral character: one value per generator, vanishing on relators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Character {
    pub values: Vec<i64>,
}

impl Character {
    pub fn new(p: &Presentation, values: Vec<i64>) -> Result<Character> {
        if values.len() != p.num_gens() {
            return Err(Error::validation(format!(
                "character has {} values but the presentation has {} generators",
                values.len(),
                p.num_gens()
            )));
        }
        let c = Character { values };
        for (i, rel) in p.relators.iter().enumerate() {
            if c.eval(rel) != 0 {
                return Err(Error::validation(format!(
                    "character does not vanish on relator {i}"
                )));
            }
        }
        Ok(c)
    }

    pub fn eval(&self, w: &Word) -> i64 {
        w.letters().iter().map(|&(g, e)| self.values[g] * i64::from(e)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0)
    }

    pub fn gcd(&self) -> i64 {
        self.values.iter().fold(0i64, |acc, v| num::integer::gcd(acc, v.abs()))
    }

    pub fn is_primitive(&self) -> bool {
        self.gcd() == 1
    }

    /// The induced covector on G_fab under the given abelianization: the
    /// unique row `phi_bar` with `phi = phi_bar ∘ q`.
    pub fn covector(&self, ab: &AbelianizationMap, p: &Presentation) -> Result<Vec<i64>> {
        // solve phi_bar · images = values over the integers
        let k = ab.rank;
        if k == 0 {
            return if self.is_zero() {
                Ok(Vec::new())
            } else {
                Err(Error::validation("nonzero character on a group with trivial free abelianization".into()))
            };
        }
        // images generate ℤᵏ, so the system is solvable over ℚ with an
        // integral solution; set it up as a rational solve
        use crate::matrix::{solve_ratfun, Matrix as Mx};
        use crate::ratfun::RatFun;
        let g = p.num_gens();
        let a = Mx::from_fn(g, k, |i, j| {
            RatFun::constant(0, GaussianRational::from_int(ab.images[i][j]))
        });
        let rhs = Mx::from_fn(g, 1, |i, _| {
            RatFun::constant(0, GaussianRational::from_int(self.values[i]))
        });
        let x = solve_ratfun(&a, &rhs)
            .ok_or_else(|| Error::validation("character does not factor through the free abelianization".into()))?;
        let mut out = Vec::with_capacity(k);
        for j in 0..k {
            let f = x.at(j, 0);
            if !f.is_polynomial() {
                return Err(Error::validation("character covector is not integral".into()));
            }
            let c = f.num().coeff(&Monomial::unit(0));
            if !c.im.is_zero() || !c.re.is_integer() {
                return Err(Error::validation("character covector is not integral".into()));
            }
            out.push(i64::try_from(c.re.to_integer()).expect("covector entry fits i64"));
        }
        Ok(out)
    }
}

/// A validated representation: invertible matrices over ℚ(i), one per
/// generator, with σ(r) = Id for every relator, plus the explicit inverses.
#[derive(Clone, Debug)]
pub struct Representation {
    pub dim: usize,
    pub mats: Vec<Matrix<GaussianRational>>,
    pub invs: Vec<Matrix<GaussianRational>>,
}

pub fn scalar_identity(n: usize) -> Matrix<GaussianRational> {
    Matrix::identity_with(n, GaussianRational::zero(), GaussianRational::one())
}

pub fn scalar_mat_mul(a: &Matrix<GaussianRational>, b: &Matrix<GaussianRational>) -> Matrix<GaussianRational> {
    assert_eq!(a.cols(), b.rows());
    Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut acc = GaussianRational::zero();
        for k in 0..a.cols() {
            acc += &(a.at(i, k) * b.at(k, j));
        }
        acc
    })
}

/// Exact inverse of a square ℚ(i)-matrix, `None` when singular.
pub fn invert_scalar_matrix(m: &Matrix<GaussianRational>) -> Option<Matrix<GaussianRational>> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut a = m.clone();
    let mut inv = scalar_identity(n);
    for col in 0..n {
        let p = (col..n).find(|&r| !a.at(r, col).is_zero())?;
        a.swap_rows(col, p);
        inv.swap_rows(col, p);
        let piv = a.at(col, col).clone().inv().unwrap();
        for j in 0..n {
            let v = a.at(col, j) * &piv;
            a.set(col, j, v);
            let v = inv.at(col, j) * &piv;
            inv.set(col, j, v);
        }
        for r in 0..n {
            if r != col && !a.at(r, col).is_zero() {
                let f = a.at(r, col).clone();
                for j in 0..n {
                    let v = a.at(r, j) - &(&f * a.at(col, j));
                    a.set(r, j, v);
                    let v = inv.at(r, j) - &(&f * inv.at(col, j));
                    inv.set(r, j, v);
                }
            }
        }
    }
    Some(inv)
}

impl Representation {
    /// Validates and builds a representation. Inverses are computed when not
    /// supplied and verified either way; σ must kill every relator exactly.
    pub fn new(
        p: &Presentation,
        dim: usize,
        mats: Vec<Matrix<GaussianRational>>,
        invs: Option<Vec<Matrix<GaussianRational>>>,
    ) -> Result<Representation> {
        if mats.len() != p.num_gens() {
            return Err(Error::validation("one matrix per generator required".into()));
        }
        for (i, m) in mats.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::validation(format!("matrix for generator {i} is not {dim}×{dim}")));
            }
        }
        let invs = match invs {
            Some(given) => {
                if given.len() != mats.len() {
                    return Err(Error::validation("one inverse per generator required".into()));
                }
                for (i, (m, inv)) in mats.iter().zip(&given).enumerate() {
                    if scalar_mat_mul(m, inv) != scalar_identity(dim) {
                        return Err(Error::validation(format!(
                            "supplied inverse for generator {i} fails verification"
                        )));
                    }
                }
                given
            }
            None => {
                let mut out = Vec::with_capacity(mats.len());
                for (i, m) in mats.iter().enumerate() {
                    out.push(invert_scalar_matrix(m).ok_or_else(|| {
                        Error::validation(format!("matrix for generator {i} is singular"))
                    })?);
                }
                out
            }
        };
        let rep = Representation { dim, mats, invs };
        for (i, rel) in p.relators.iter().enumerate() {
            if rep.eval_word(rel) != scalar_identity(dim) {
                return Err(Error::validation(format!(
                    "representation does not kill relator {i} exactly"
                )));
            }
        }
        Ok(rep)
    }

    /// The trivial one-dimensional representation.
    pub fn trivial(p: &Presentation) -> Representation {
        let id = scalar_identity(1);
        Representation {
            dim: 1,
            mats: vec![id.clone(); p.num_gens()],
            invs: vec![id; p.num_gens()],
        }
    }

    pub fn eval_word(&self, w: &Word) -> Matrix<GaussianRational> {
        let mut acc = scalar_identity(self.dim);
        for &(g, e) in w.letters() {
            let m = if e == 1 { &self.mats[g] } else { &self.invs[g] };
            acc = scalar_mat_mul(&acc, m);
        }
        acc
    }

    /// Applies a generator substitution: the matrices of the new generating
    /// set after the Nielsen move x_target ← word.
    fn with_generator_matrix(&self, target: usize, m: Matrix<GaussianRational>) -> Representation {
        let mut mats = self.mats.clone();
        let inv = invert_scalar_matrix(&m).expect("product of invertibles");
        mats[target] = m;
        let mut invs = self.invs.clone();
        invs[target] = inv;
        Representation { dim: self.dim, mats, invs }
    }
}

/// The rationalization σ⊗q applied to a group-ring element: an n×n matrix
/// of Laurent polynomials, where each word contributes σ(w) times the
/// monomial of its abelianized image.
pub fn rationalize(
    e: &GroupRingElement,
    rep: &Representation,
    ab: &AbelianizationMap,
) -> Matrix<LaurentPoly> {
    let n = rep.dim;
    let k = ab.rank;
    let mut out = Matrix::new(n, n, LaurentPoly::zero(k));
    for (w, c) in e.terms() {
        let m = rep.eval_word(w);
        let mono = ab.monomial_of_word(w);
        let coeff = GaussianRational {
            re: num::rational::BigRational::from_integer(c.clone()),
            im: num::rational::BigRational::zero(),
        };
        for i in 0..n {
            for j in 0..n {
                let scalar = m.at(i, j) * &coeff;
                let term = LaurentPoly::term(mono.clone(), scalar);
                let v = out.at(i, j).add(&term);
                out.set(i, j, v);
            }
        }
    }
    out
}

/// One Nielsen move on the generating set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NielsenMove {
    /// exchange generators i and j
    Swap(usize, usize),
    /// replace x_i by x_i⁻¹
    Invert(usize),
    /// replace x_i by x_i·x_j^exp (j ≠ i)
    Mul { target: usize, other: usize, exp: i64 },
}

/// The result of adapting a presentation to a primitive character.
#[derive(Clone, Debug)]
pub struct AdaptedPresentation {
    pub presentation: Presentation,
    pub representation: Representation,
    pub character: Character,
    pub moves: Vec<NielsenMove>,
    pub abelianization: AbelianizationMap,
}

struct AdaptState {
    pres: Presentation,
    rep: Representation,
    q_cols: Vec<Vec<i64>>, // one column (length k) per generator
    phi: Vec<i64>,
    moves: Vec<NielsenMove>,
}

impl AdaptState {
    fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.pres.generators.swap(i, j);
        for rel in &mut self.pres.relators {
            let letters: Vec<(usize, i8)> = rel
                .letters()
                .iter()
                .map(|&(g, e)| {
                    let g = if g == i { j } else if g == j { i } else { g };
                    (g, e)
                })
                .collect();
            *rel = Word::from_letters(letters);
        }
        self.rep.mats.swap(i, j);
        self.rep.invs.swap(i, j);
        self.q_cols.swap(i, j);
        self.phi.swap(i, j);
        self.moves.push(NielsenMove::Swap(i, j));
    }

    fn invert(&mut self, i: usize) {
        // new x_i is old x_i⁻¹, so occurrences of x_i in relators flip sign
        let replacement = Word::from_letters([(i, -1)]);
        for rel in &mut self.pres.relators {
            *rel = rel.substitute(i, &replacement);
        }
        let m = self.rep.invs[i].clone();
        self.rep = self.rep.with_generator_matrix(i, m);
        for v in &mut self.q_cols[i] {
            *v = -*v;
        }
        self.phi[i] = -self.phi[i];
        self.moves.push(NielsenMove::Invert(i));
    }

    fn mul(&mut self, target: usize, other: usize, exp: i64) {
        assert_ne!(target, other);
        if exp == 0 {
            return;
        }
        // new y = x_target · x_other^exp; in old letters, x_target = y · x_other^{−exp}
        let sign: i8 = if exp > 0 { 1 } else { -1 };
        let mut repl = Word::generator(target);
        for _ in 0..exp.unsigned_abs() {
            repl = repl.mul(&Word::from_letters([(other, -sign)]));
        }
        for rel in &mut self.pres.relators {
            *rel = rel.substitute(target, &repl);
        }
        // matrix of the new generator: σ(x_target)·σ(x_other)^exp
        let mut m = self.rep.mats[target].clone();
        let step = if exp > 0 { self.rep.mats[other].clone() } else { self.rep.invs[other].clone() };
        for _ in 0..exp.unsigned_abs() {
            m = scalar_mat_mul(&m, &step);
        }
        self.rep = self.rep.with_generator_matrix(target, m);
        let add: Vec<i64> = self.q_cols[other].iter().map(|v| v * exp).collect();
        for (slot, a) in self.q_cols[target].iter_mut().zip(add) {
            *slot += a;
        }
        self.phi[target] += exp * self.phi[other];
        self.moves.push(NielsenMove::Mul { target, other, exp });
    }
}

fn is_adapted(q_cols: &[Vec<i64>], phi: &[i64], k: usize) -> bool {
    let g = q_cols.len();
    if phi.first().copied() != Some(1) || phi.iter().skip(1).any(|v| *v != 0) {
        return false;
    }
    if q_cols.iter().skip(k).any(|c| c.iter().any(|v| *v != 0)) {
        return false;
    }
    if k == 0 {
        return g == 0;
    }
    // first k columns unimodular
    let m: IntMat = (0..k)
        .map(|row| (0..k).map(|col| BigInt::from(q_cols[col][row])).collect())
        .collect();
    let (_, d, _) = lattice::smith_normal_form(&m);
    (0..k).all(|i| d[i][i].is_one() || d[i][i] == -BigInt::one())
}

/// Nielsen-adapts a presentation to a primitive character: afterwards the
/// first k generators map to a basis of G_fab, the rest map to zero, the
/// first generator has character value 1 and all others 0. The move list is
/// an audit trail; replaying it reproduces the returned presentation.
pub fn nielsen_adapt(
    p: &Presentation,
    rep: &Representation,
    phi: &Character,
) -> Result<AdaptedPresentation> {
    if !phi.is_primitive() {
        return Err(Error::validation("character must be primitive for adaptation".into()));
    }
    let ab = abelianize(p);
    let k = ab.rank;
    if k == 0 {
        return Err(Error::validation(
            "free abelianization is trivial; no character can be primitive".into(),
        ));
    }
    let q_cols: Vec<Vec<i64>> = ab.images.clone();
    let mut st = AdaptState {
        pres: p.clone(),
        rep: rep.clone(),
        q_cols,
        phi: phi.values.clone(),
        moves: Vec::new(),
    };
    if is_adapted(&st.q_cols, &st.phi, k) {
        return Ok(AdaptedPresentation {
            presentation: st.pres,
            representation: st.rep,
            character: Character { values: st.phi },
            moves: Vec::new(),
            abelianization: ab,
        });
    }
    let g = p.num_gens();
    // phase 1: column-reduce the image matrix to [B | 0] with B unimodular
    for row in 0..k {
        loop {
            // smallest |entry| among columns ≥ row in this row
            let mut best: Option<usize> = None;
            for c in row..g {
                let v = st.q_cols[c][row];
                if v != 0 && best.map(|b| st.q_cols[b][row].abs() > v.abs()).unwrap_or(true) {
                    best = Some(c);
                }
            }
            let pivot = best.expect("surjective image matrix has a pivot in every row");
            st.swap(row, pivot);
            let mut clean = true;
            for c in row + 1..g {
                let v = st.q_cols[c][row];
                if v != 0 {
                    let q = v.div_euclid(st.q_cols[row][row]);
                    if q != 0 {
                        st.mul(c, row, -q);
                    }
                    if st.q_cols[c][row] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
    }
    // phase 2: within the basis block, drive the character vector to e₁
    loop {
        let nonzero: Vec<usize> = (0..k).filter(|&i| st.phi[i] != 0).collect();
        assert!(!nonzero.is_empty(), "primitive character cannot vanish on a basis");
        if nonzero.len() == 1 {
            let i = nonzero[0];
            st.swap(0, i);
            if st.phi[0] < 0 {
                st.invert(0);
            }
            debug_assert_eq!(st.phi[0], 1, "gcd of a primitive character is 1");
            break;
        }
        // reduce the largest entry by the smallest
        let &imin = nonzero
            .iter()
            .min_by_key(|&&i| st.phi[i].abs())
            .unwrap();
        for &i in &nonzero {
            if i != imin {
                let q = st.phi[i].div_euclid(st.phi[imin]);
                if q != 0 {
                    st.mul(i, imin, -q);
                }
            }
        }
    }
    // verify against a fresh abelianization of the rewritten presentation
    let new_ab = abelianize(&st.pres);
    if new_ab.rank != k {
        return Err(Error::cross_check("Nielsen moves changed the free rank".into()));
    }
    if !is_adapted(&new_ab.images, &st.phi, k) {
        return Err(Error::cross_check(
            "adapted presentation failed re-abelianization audit".into(),
        ));
    }
    let character = Character::new(&st.pres, st.phi.clone())?;
    // revalidate the transported representation on the rewritten relators
    let rep2 = Representation::new(&st.pres, st.rep.dim, st.rep.mats.clone(), Some(st.rep.invs.clone()))?;
    Ok(AdaptedPresentation {
        presentation: st.pres,
        representation: rep2,
        character,
        moves: st.moves,
        abelianization: new_ab,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn trefoil() -> Presentation {
        Presentation::parse("<a,b | a b a b^-1 a^-1 b^-1>").unwrap()
    }

    fn f2_semidirect_z() -> Presentation {
        Presentation::parse("<x,y,t | t x t^-1 x^-1 y^-1, t y t^-1 x^-1>").unwrap()
    }

    #[test]
    fn parse_and_print_round_trip() {
        for text in [
            "<a,b | a b a b^-1 a^-1 b^-1>",
            "<t | >",
            "<x,y,t | t x t^-1 x^-1 y^-1, t y t^-1 x^-1>",
        ] {
            let p = Presentation::parse(text).unwrap();
            let q = Presentation::parse(&p.display()).unwrap();
            assert_eq!(p, q);
        }
    }

    #[test]
    fn parse_errors_have_positions() {
        assert!(Presentation::parse("no brackets").is_err());
        assert!(Presentation::parse("<a,a | >").is_err());
        match Presentation::parse("<a,b | a c>") {
            Err(Error::Parse { .. }) => {}
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn words_reduce_freely() {
        let p = trefoil();
        let w = p.parse_word("a b b^-1 a^-1 b").unwrap();
        assert_eq!(w, Word::generator(1));
        let empty = p.parse_word("a a^-1").unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn exponent_sugar() {
        let p = trefoil();
        let w = p.parse_word("a^3 b^-2").unwrap();
        assert_eq!(w.exponent_sums(2), vec![3, -2]);
    }

    #[test]
    fn fox_rules() {
        let p = trefoil();
        let ab = p.parse_word("a b").unwrap();
        assert_eq!(fox_derivative(&ab, 0), GroupRingElement::one());
        let ainv = p.parse_word("a^-1").unwrap();
        let mut expected = GroupRingElement::zero();
        expected = expected.sub(&GroupRingElement::from_word(ainv.clone()));
        assert_eq!(fox_derivative(&ainv, 0), expected);
        assert!(fox_derivative(&ab, 1).terms().count() == 1);
        let y_only = p.parse_word("b").unwrap();
        assert!(fox_derivative(&y_only, 0).is_zero());
    }

    #[test]
    fn fundamental_fox_identity() {
        // Σᵢ ∂r/∂xᵢ·(xᵢ−1) = r − 1 in ℤF for every relator
        for p in [trefoil(), f2_semidirect_z()] {
            for rel in &p.relators {
                let mut acc = GroupRingElement::zero();
                for g in 0..p.num_gens() {
                    let d = fox_derivative(rel, g);
                    let xm1 = GroupRingElement::one_minus(Word::generator(g)).neg();
                    acc = acc.add(&d.mul(&xm1));
                }
                let rm1 = GroupRingElement::one_minus(rel.clone()).neg();
                assert_eq!(acc, rm1, "Fox identity failed for {}", rel.display_with(&p.generators));
            }
        }
    }

    #[test]
    fn abelianize_trefoil() {
        let ab = abelianize(&trefoil());
        assert_eq!(ab.rank, 1);
        assert_eq!(ab.images[0], ab.images[1]);
        assert_ne!(ab.images[0], vec![0]);
        assert!(ab.torsion.is_empty());
    }

    #[test]
    fn abelianize_free_group() {
        let p = Presentation::parse("<a,b | >").unwrap();
        let ab = abelianize(&p);
        assert_eq!(ab.rank, 2);
        assert_eq!(ab.images, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn abelianize_f2_semidirect() {
        let ab = abelianize(&f2_semidirect_z());
        assert_eq!(ab.rank, 1);
        // x, y die; t survives
        assert_eq!(ab.images[0], vec![0]);
        assert_eq!(ab.images[1], vec![0]);
        assert_eq!(ab.images[2].iter().map(|v| v.abs()).max(), Some(1));
    }

    #[test]
    fn character_validation() {
        let p = trefoil();
        let phi = Character::new(&p, vec![1, 1]).unwrap();
        assert!(phi.is_primitive());
        assert!(Character::new(&p, vec![1, 0]).is_err());
        let scaled = Character::new(&p, vec![3, 3]).unwrap();
        assert!(!scaled.is_primitive());
        assert_eq!(scaled.gcd(), 3);
    }

    #[test]
    fn representation_validation() {
        let p = trefoil();
        // sign representation a,b ↦ −1 kills the relator
        let neg = Matrix::from_rows(vec![vec![GaussianRational::from_int(-1)]]);
        let rep = Representation::new(&p, 1, vec![neg.clone(), neg.clone()], None).unwrap();
        assert_eq!(rep.eval_word(&p.relators[0]), scalar_identity(1));
        // a ↦ 2, b ↦ 1 does not
        let two = Matrix::from_rows(vec![vec![GaussianRational::from_int(2)]]);
        let one = Matrix::from_rows(vec![vec![GaussianRational::one()]]);
        assert!(Representation::new(&p, 1, vec![two, one], None).is_err());
    }

    #[test]
    fn rationalize_trefoil_fox_column() {
        let p = trefoil();
        let rep = Representation::trivial(&p);
        let ab = abelianize(&p);
        let d = fox_derivative(&p.relators[0], 1);
        let m = rationalize(&d, &rep, &ab);
        // −(s² − s + 1) up to the sign of the chosen basis direction
        let entry = m.at(0, 0);
        assert_eq!(entry.deg_in(0), Some(2));
        assert_eq!(entry.num_terms(), 3);
    }

    #[test]
    fn rationalize_kills_relators() {
        let p = f2_semidirect_z();
        let rep = Representation::trivial(&p);
        let ab = abelianize(&p);
        for rel in &p.relators {
            let e = GroupRingElement::one_minus(rel.clone());
            let m = rationalize(&e, &rep, &ab);
            assert!(m.at(0, 0).is_zero());
        }
    }

    #[test]
    fn nielsen_adapt_trefoil() {
        let p = trefoil();
        let rep = Representation::trivial(&p);
        let phi = Character::new(&p, vec![1, 1]).unwrap();
        let adapted = nielsen_adapt(&p, &rep, &phi).unwrap();
        assert!(!adapted.moves.is_empty());
        assert_eq!(adapted.character.values[0], 1);
        assert!(adapted.character.values[1..].iter().all(|v| *v == 0));
        let ab = abelianize(&adapted.presentation);
        assert_eq!(ab.rank, 1);
        assert!(ab.images[1].iter().all(|v| *v == 0));
    }

    #[test]
    fn nielsen_adapt_noop_when_adapted() {
        let p = f2_semidirect_z();
        // reorder so the basis generator comes first
        let adapted_p = Presentation::parse("<t,x,y | t x t^-1 x^-1 y^-1, t y t^-1 x^-1>").unwrap();
        let rep = Representation::trivial(&adapted_p);
        let phi = Character::new(&adapted_p, vec![1, 0, 0]).unwrap();
        let adapted = nielsen_adapt(&adapted_p, &rep, &phi).unwrap();
        assert!(adapted.moves.is_empty());
        assert_eq!(adapted.presentation, adapted_p);
        let _ = p;
    }

    #[test]
    fn nielsen_adapt_rejects_imprimitive() {
        let p = trefoil();
        let rep = Representation::trivial(&p);
        let phi = Character::new(&p, vec![2, 2]).unwrap();
        assert!(nielsen_adapt(&p, &rep, &phi).is_err());
    }
}
