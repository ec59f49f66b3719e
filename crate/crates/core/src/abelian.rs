//! Finite abelian groups presented by generators and a relation matrix,
//! canonicalised through Smith normal form. Elements are exponent vectors
//! against the SNF basis, which makes character evaluation, kernels and
//! quotients mechanical.

use crate::matrix::{hnf_basis, hnf_solve, snf, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("relations do not present a finite group")]
    InfiniteGroup,
    #[error("element does not lie in the target group/subgroup")]
    NotInGroup,
    #[error("discrete log enumeration exceeded bound {0}")]
    SearchExhausted(u64),
}

/// Element of a [`FiniteAbelianGroup`]: exponent vector against the SNF
/// basis, each coordinate reduced modulo the corresponding factor order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElt {
    coords: Vec<BigInt>,
}

impl fmt::Debug for GroupElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{:?}", self.coords)
    }
}

impl GroupElt {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }
}

/// Finite abelian group with canonical cyclic decomposition d_1 | d_2 | ...
#[derive(Clone)]
pub struct FiniteAbelianGroup {
    labels: Vec<String>,
    /// Orders of the nontrivial cyclic factors (each > 1), d_i | d_{i+1}.
    orders: Vec<BigInt>,
    /// Transform from original-generator exponent vectors to SNF coordinates:
    /// the rows of `u` matching nontrivial factors.
    to_canonical: IntMatrix,
    num_gens: usize,
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteAbelianGroup{:?}", self.orders)
    }
}

impl FiniteAbelianGroup {
    /// Present a group on `labels.len()` generators with each column of
    /// `relations` a vanishing combination of them.
    pub fn from_relations(labels: Vec<String>, relations: &IntMatrix) -> Result<Self, GroupError> {
        let g = labels.len();
        assert_eq!(relations.rows(), g, "relation matrix rows must match generators");
        let out = snf(relations);
        let diag = out.diagonal();
        if diag.len() < g || diag.iter().any(|d| d.is_zero()) {
            return Err(GroupError::InfiniteGroup);
        }
        let keep: Vec<usize> = (0..g).filter(|&i| diag[i] > BigInt::one()).collect();
        let mut to_canonical = IntMatrix::zero(keep.len(), g);
        for (new_r, &old_r) in keep.iter().enumerate() {
            for c in 0..g {
                to_canonical.set(new_r, c, out.u.get(old_r, c).clone());
            }
        }
        let orders = keep.iter().map(|&i| diag[i].clone()).collect();
        Ok(FiniteAbelianGroup { labels, orders, to_canonical, num_gens: g })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup {
            labels: vec![],
            orders: vec![],
            to_canonical: IntMatrix::zero(0, 0),
            num_gens: 0,
        }
    }

    pub fn cyclic(n: u64) -> Self {
        let rel = IntMatrix::new(1, 1, vec![BigInt::from(n)]);
        Self::from_relations(vec!["g".into()], &rel).expect("finite")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_generators(&self) -> usize {
        self.num_gens
    }

    /// Orders of the canonical cyclic factors, each dividing the next.
    pub fn factor_orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn order(&self) -> BigInt {
        self.orders.iter().fold(BigInt::one(), |a, b| a * b)
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn identity(&self) -> GroupElt {
        GroupElt { coords: vec![BigInt::zero(); self.orders.len()] }
    }

    fn reduce(&self, mut coords: Vec<BigInt>) -> GroupElt {
        for (c, d) in coords.iter_mut().zip(&self.orders) {
            *c = c.mod_floor(d);
        }
        GroupElt { coords }
    }

    /// Canonical basis element of the j-th cyclic factor.
    pub fn basis_elt(&self, j: usize) -> GroupElt {
        let mut coords = vec![BigInt::zero(); self.orders.len()];
        coords[j] = BigInt::one();
        GroupElt { coords }
    }

    pub fn basis(&self) -> Vec<GroupElt> {
        (0..self.orders.len()).map(|j| self.basis_elt(j)).collect()
    }

    /// Image of the i-th original generator.
    pub fn generator(&self, i: usize) -> GroupElt {
        let mut exps = vec![BigInt::zero(); self.num_gens];
        exps[i] = BigInt::one();
        self.from_gen_exponents(&exps)
    }

    /// Map an exponent vector over the original generators into the group.
    pub fn from_gen_exponents(&self, exps: &[BigInt]) -> GroupElt {
        assert_eq!(exps.len(), self.num_gens);
        let coords = (0..self.orders.len())
            .map(|r| (0..self.num_gens).map(|c| self.to_canonical.get(r, c) * &exps[c]).sum())
            .collect();
        self.reduce(coords)
    }

    pub fn mul(&self, a: &GroupElt, b: &GroupElt) -> GroupElt {
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        self.reduce(coords)
    }

    pub fn inv(&self, a: &GroupElt) -> GroupElt {
        let coords = a.coords.iter().map(|x| -x).collect();
        self.reduce(coords)
    }

    pub fn pow(&self, a: &GroupElt, e: &BigInt) -> GroupElt {
        let coords = a.coords.iter().map(|x| x * e).collect();
        self.reduce(coords)
    }

    pub fn element_order(&self, a: &GroupElt) -> BigInt {
        let mut ord = BigInt::one();
        for (x, d) in a.coords.iter().zip(&self.orders) {
            let g = x.gcd(d);
            ord = ord.lcm(&(d / g));
        }
        ord
    }

    /// Every element, in lexicographic coordinate order. Only sensible for
    /// small groups; the enumeration oracle in tests relies on this.
    pub fn elements(&self) -> Vec<GroupElt> {
        let mut out = vec![self.identity()];
        for (j, d) in self.orders.iter().enumerate() {
            let mut next = Vec::new();
            let mut k = BigInt::zero();
            while &k < d {
                for e in &out {
                    let mut coords = e.coords.clone();
                    coords[j] = k.clone();
                    next.push(GroupElt { coords });
                }
                k += 1;
            }
            out = next;
        }
        out.sort();
        out
    }

    /// Discrete log of `target` against an arbitrary list of elements by
    /// bounded enumeration of the exponent box.
    pub fn discrete_log(
        &self,
        target: &GroupElt,
        basis: &[GroupElt],
        bound: u64,
    ) -> Result<Vec<BigInt>, GroupError> {
        let orders: Vec<BigInt> = basis.iter().map(|b| self.element_order(b)).collect();
        let mut total = BigInt::one();
        for o in &orders {
            total *= o;
        }
        if total > BigInt::from(bound) {
            return Err(GroupError::SearchExhausted(bound));
        }
        let mut exps = vec![BigInt::zero(); basis.len()];
        loop {
            let mut acc = self.identity();
            for (e, b) in exps.iter().zip(basis) {
                acc = self.mul(&acc, &self.pow(b, e));
            }
            if &acc == target {
                return Ok(exps);
            }
            // increment mixed-radix counter
            let mut i = 0;
            loop {
                if i == exps.len() {
                    return Err(GroupError::NotInGroup);
                }
                exps[i] += 1;
                if exps[i] < orders[i] {
                    break;
                }
                exps[i] = BigInt::zero();
                i += 1;
            }
        }
    }

    /// The subgroup generated by the given elements.
    pub fn subgroup(&self, gens: &[GroupElt]) -> Subgroup {
        let k = self.orders.len();
        let mut cols: Vec<Vec<BigInt>> = gens.iter().map(|g| g.coords.clone()).collect();
        for (i, d) in self.orders.iter().enumerate() {
            let mut col = vec![BigInt::zero(); k];
            col[i] = d.clone();
            cols.push(col);
        }
        let lattice = hnf_basis(&IntMatrix::from_columns(k, &cols));
        let order = if k == 0 {
            BigInt::one()
        } else {
            // |subgroup| = [L : D Z^k] = det(D) / det(L)
            let det_l = (0..k).fold(BigInt::one(), |acc, i| {
                // lattice is square upper-staircase of full rank k here
                acc * lattice.get(i, i)
            });
            self.order() / det_l
        };
        Subgroup { gens: gens.to_vec(), lattice, order }
    }

    pub fn subgroup_contains(&self, sub: &Subgroup, elt: &GroupElt) -> bool {
        if self.orders.is_empty() {
            return true;
        }
        hnf_solve(&sub.lattice, &elt.coords).is_some()
    }

    /// Quotient by the subgroup generated by `gens`; returns the quotient
    /// group together with the projection data (quotient is presented on the
    /// same canonical generators).
    pub fn quotient(&self, gens: &[GroupElt]) -> (FiniteAbelianGroup, GroupHom) {
        let k = self.orders.len();
        let mut cols: Vec<Vec<BigInt>> = Vec::new();
        for (i, d) in self.orders.iter().enumerate() {
            let mut col = vec![BigInt::zero(); k];
            col[i] = d.clone();
            cols.push(col);
        }
        for g in gens {
            cols.push(g.coords.clone());
        }
        let rel = IntMatrix::from_columns(k, &cols);
        let labels = (0..k).map(|i| format!("q{i}")).collect();
        let q = FiniteAbelianGroup::from_relations(labels, &rel).expect("quotient of finite is finite");
        let images = (0..k).map(|i| q.generator(i)).collect();
        let hom = GroupHom::new(self.clone(), q.clone(), images).expect("projection is a hom");
        (q, hom)
    }
}

/// Subgroup, stored as its preimage lattice in the exponent space.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub gens: Vec<GroupElt>,
    lattice: IntMatrix,
    pub order: BigInt,
}

/// Homomorphism between two finite abelian groups, given by the images of
/// the source's canonical basis elements.
#[derive(Clone)]
pub struct GroupHom {
    pub src: FiniteAbelianGroup,
    pub dst: FiniteAbelianGroup,
    images: Vec<GroupElt>,
}

impl GroupHom {
    /// Checks the defining relations d_i * image_i = 0.
    pub fn new(
        src: FiniteAbelianGroup,
        dst: FiniteAbelianGroup,
        images: Vec<GroupElt>,
    ) -> Result<Self, GroupError> {
        assert_eq!(images.len(), src.factor_orders().len());
        for (img, d) in images.iter().zip(src.factor_orders()) {
            if dst.pow(img, d) != dst.identity() {
                return Err(GroupError::NotInGroup);
            }
        }
        Ok(GroupHom { src, dst, images })
    }

    pub fn apply(&self, x: &GroupElt) -> GroupElt {
        let mut acc = self.dst.identity();
        for (e, img) in x.coords().iter().zip(&self.images) {
            acc = self.dst.mul(&acc, &self.dst.pow(img, e));
        }
        acc
    }

    pub fn is_trivial_on(&self, gens: &[GroupElt]) -> bool {
        gens.iter().all(|g| self.apply(g) == self.dst.identity())
    }

    /// Generators of the kernel subgroup.
    pub fn kernel_gens(&self) -> Vec<GroupElt> {
        let s = self.src.factor_orders().len();
        let t = self.dst.factor_orders().len();
        if s == 0 {
            return vec![];
        }
        // x in ker iff M x ≡ 0 mod dst orders, i.e. exists y with M x = D_t y.
        // Integer kernel of [M | -D_t], projected to the x block, plus src
        // order relations (already inside).
        let mut m = IntMatrix::zero(t.max(1), s + t);
        for (j, img) in self.images.iter().enumerate() {
            for i in 0..t {
                m.set(i, j, img.coords()[i].clone());
            }
        }
        for i in 0..t {
            m.set(i, s + i, -self.dst.factor_orders()[i].clone());
        }
        let out = snf(&m);
        let diag = out.diagonal();
        let rank = diag.iter().filter(|d| !d.is_zero()).count();
        let mut gens = Vec::new();
        for j in rank..s + t {
            let col = out.v.column(j);
            let x: Vec<BigInt> = col[..s].to_vec();
            let elt = self.src.reduce(x);
            if elt != self.src.identity() {
                gens.push(elt);
            }
        }
        // also include the source relations' contribution (d_i e_i trivially in kernel)
        gens.sort();
        gens.dedup();
        gens
    }

    pub fn image_subgroup(&self) -> Subgroup {
        self.dst.subgroup(&self.images)
    }

    /// A preimage of `target`, when one exists.
    pub fn solve(&self, target: &GroupElt) -> Option<GroupElt> {
        let s = self.src.factor_orders().len();
        let t = self.dst.factor_orders().len();
        if t == 0 {
            return Some(self.src.identity());
        }
        // Solve M x - D_t y = target over Z with additional unknowns for the
        // source orders folded in: x only matters mod src orders.
        let mut m = IntMatrix::zero(t, s + t + s);
        for (j, img) in self.images.iter().enumerate() {
            for i in 0..t {
                m.set(i, j, img.coords()[i].clone());
            }
        }
        for i in 0..t {
            m.set(i, s + i, -self.dst.factor_orders()[i].clone());
        }
        for (j, d) in self.src.factor_orders().iter().enumerate() {
            // columns mapping src relations through M: M*(d_j e_j)
            for i in 0..t {
                m.set(i, s + t + j, self.images[j].coords()[i] * d);
            }
        }
        let sol = integer_solve(&m, target.coords())?;
        let x: Vec<BigInt> = sol[..s].to_vec();
        Some(self.src.reduce(x))
    }
}

/// Solve `A x = b` over the integers. Returns any solution.
pub fn integer_solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len());
    let out = snf(a);
    let diag = out.diagonal();
    // w = U b; need s_i | w_i for pivot rows, w_i = 0 beyond.
    let w: Vec<BigInt> = (0..a.rows())
        .map(|i| (0..a.rows()).map(|j| out.u.get(i, j) * &b[j]).sum())
        .collect();
    let mut y = vec![BigInt::zero(); a.cols()];
    for i in 0..a.rows() {
        let d = if i < diag.len() { diag[i].clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !w[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = w[i].div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            if i < a.cols() {
                y[i] = q;
            }
        }
    }
    // x = V y
    let x: Vec<BigInt> = (0..a.cols())
        .map(|i| (0..a.cols()).map(|j| out.v.get(i, j) * &y[j]).sum())
        .collect();
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn c_n(n: i64) -> IntMatrix {
        IntMatrix::from_i64(1, 1, &[n])
    }

    #[test]
    fn cyclic_two() {
        let g = FiniteAbelianGroup::from_relations(vec!["a".into()], &c_n(2)).unwrap();
        assert_eq!(g.order(), BigInt::from(2));
        assert_eq!(g.element_order(&g.generator(0)), BigInt::from(2));
    }

    #[test]
    fn c2_times_c3_is_c6() {
        let rel = IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]);
        let g = FiniteAbelianGroup::from_relations(vec!["a".into(), "b".into()], &rel).unwrap();
        assert_eq!(g.factor_orders(), &[BigInt::from(6)]);
        // discrete_log(g1*g2) against (g1, g2) = (1, 1), via enumeration oracle
        let prod = g.mul(&g.generator(0), &g.generator(1));
        let dl = g.discrete_log(&prod, &[g.generator(0), g.generator(1)], 1000).unwrap();
        let rebuilt = g.mul(&g.pow(&g.generator(0), &dl[0]), &g.pow(&g.generator(1), &dl[1]));
        assert_eq!(rebuilt, prod);
    }

    #[test]
    fn quotient_c4_by_order_two() {
        let g = FiniteAbelianGroup::from_relations(vec!["a".into()], &c_n(4)).unwrap();
        let two = g.pow(&g.generator(0), &BigInt::from(2));
        let (q, proj) = g.quotient(&[two]);
        assert_eq!(q.order(), BigInt::from(2));
        assert_eq!(proj.apply(&g.pow(&g.generator(0), &BigInt::from(2))), q.identity());
        assert_ne!(proj.apply(&g.generator(0)), q.identity());
    }

    #[test]
    fn infinite_group_rejected() {
        let rel = IntMatrix::from_i64(2, 1, &[2, 0]);
        let err = FiniteAbelianGroup::from_relations(vec!["a".into(), "b".into()], &rel);
        assert_eq!(err.err(), Some(GroupError::InfiniteGroup));
    }

    #[test]
    fn subgroup_order_and_membership() {
        let rel = IntMatrix::from_i64(2, 2, &[4, 0, 0, 2]);
        let g = FiniteAbelianGroup::from_relations(vec!["a".into(), "b".into()], &rel).unwrap();
        assert_eq!(g.order(), BigInt::from(8));
        let sub = g.subgroup(&[g.pow(&g.generator(0), &BigInt::from(2))]);
        assert_eq!(sub.order, BigInt::from(2));
        assert!(g.subgroup_contains(&sub, &g.pow(&g.generator(0), &BigInt::from(2))));
        assert!(!g.subgroup_contains(&sub, &g.generator(0)));
    }

    // Exponent-vector arithmetic agrees with an exhaustive multiplication
    // table oracle on a mid-sized group.
    #[test]
    fn table_oracle_agreement() {
        let rel = IntMatrix::from_i64(3, 3, &[4, 0, 0, 0, 6, 0, 0, 0, 2]);
        let g = FiniteAbelianGroup::from_relations(
            vec!["a".into(), "b".into(), "c".into()],
            &rel,
        )
        .unwrap();
        let elts = g.elements();
        assert_eq!(BigInt::from(elts.len() as u64), g.order());
        let set: BTreeSet<_> = elts.iter().cloned().collect();
        assert_eq!(set.len(), elts.len());
        for a in elts.iter().take(12) {
            for b in elts.iter().take(12) {
                let ab = g.mul(a, b);
                assert!(set.contains(&ab));
                assert_eq!(g.mul(&ab, &g.inv(b)), *a);
            }
        }
    }

    #[test]
    fn hom_kernel_and_solve() {
        // C4 -> C2, x -> x mod 2
        let src = FiniteAbelianGroup::from_relations(vec!["a".into()], &c_n(4)).unwrap();
        let dst = FiniteAbelianGroup::from_relations(vec!["b".into()], &c_n(2)).unwrap();
        let hom = GroupHom::new(src.clone(), dst.clone(), vec![dst.generator(0)]).unwrap();
        let ker = hom.kernel_gens();
        let sub = src.subgroup(&ker);
        assert_eq!(sub.order, BigInt::from(2));
        let pre = hom.solve(&dst.generator(0)).unwrap();
        assert_eq!(hom.apply(&pre), dst.generator(0));
    }
}
