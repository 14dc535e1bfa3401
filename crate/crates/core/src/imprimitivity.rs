//! The imprimitivity bimodule `X₀ = Γ_c(𝒟 × G)` between
//! `B₀ = Γ_c(q*𝒟 × G)` and `C₀ = Γ_c(𝒟 × G/N)`, with its actions, inner
//! products and the `G`-action `γ`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;
use thiserror::Error;

use crate::bundle::{pullback, pullback_element, BundleError, GradedBundle};
use crate::group::Quotient;
use crate::matrix::{Matrix, MatrixError, MatrixSubspace};
use crate::scalar::{cx, seeded, Cx, Real};
use crate::sectional::{CrossedProduct, SectionalError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ImprimitivityError {
    #[error("coefficient bundle is not graded over G/N")]
    GroupMismatch,
    #[error("coefficient bundle fails the Fell axioms: {0}")]
    AxiomViolation(String),
    #[error("coefficient at {0:?} is not in its fiber")]
    FiberMismatch((usize, usize)),
    #[error("unit fiber has no unit")]
    NonUnitalUnitFiber,
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Sectional(#[from] SectionalError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

macro_rules! section_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, Debug, PartialEq)]
        pub struct $name<T> {
            terms: BTreeMap<(usize, usize), Matrix<T>>,
        }

        impl<T: Real> $name<T> {
            pub fn zero() -> Self {
                $name { terms: BTreeMap::new() }
            }

            pub fn generator(a: usize, b: usize, d: Matrix<T>) -> Self {
                let mut x = Self::zero();
                x.add_term((a, b), d);
                x
            }

            pub fn terms(&self) -> &BTreeMap<(usize, usize), Matrix<T>> {
                &self.terms
            }

            pub fn add_term(&mut self, key: (usize, usize), d: Matrix<T>) {
                match self.terms.get_mut(&key) {
                    Some(m) => *m = &*m + &d,
                    None => {
                        self.terms.insert(key, d);
                    }
                }
            }

            pub fn plus(&self, other: &Self) -> Self {
                let mut out = self.clone();
                for (k, d) in &other.terms {
                    out.add_term(*k, d.clone());
                }
                out
            }

            pub fn scale(&self, c: Cx<T>) -> Self {
                $name { terms: self.terms.iter().map(|(k, d)| (*k, d.scale(c))).collect() }
            }

            pub fn minus(&self, other: &Self) -> Self {
                self.plus(&other.scale(cx(-1.0, 0.0)))
            }

            /// Largest entry of any coefficient.
            pub fn max_abs(&self) -> T {
                self.terms.values().map(Matrix::max_abs).fold(T::zero(), T::max)
            }
        }
    };
}

section_type!(
    /// Element of `X₀`: coefficients `d ∈ D_k` at `(k, t) ∈ G/N × G`.
    BimoduleElement
);
section_type!(
    /// Element of `B₀`: coefficients `d ∈ D_{sN}` at `(s, t) ∈ G × G`.
    AlgebraElementB
);
section_type!(
    /// Element of `C₀`: coefficients `d ∈ D_k` at `(k, l) ∈ G/N × G/N`.
    AlgebraElementC
);

type Involution<T> = Arc<dyn Fn(&Matrix<T>) -> Matrix<T> + Send + Sync>;

/// The bimodule data for a bundle `D` over `G/N`.
#[derive(Clone)]
pub struct Imprimitivity<T> {
    q: Quotient,
    d: GradedBundle<T>,
    star: Involution<T>,
    realization_b: CrossedProduct<T>,
    realization_c: CrossedProduct<T>,
    tol: T,
}

impl<T: Real> fmt::Debug for Imprimitivity<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Imprimitivity").field("group", self.q.group()).field("d", &self.d).finish()
    }
}

/// One checklist item with its largest residual.
#[derive(Clone, Debug, PartialEq)]
pub struct ItemResult {
    pub item: &'static str,
    pub description: &'static str,
    pub passed: bool,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImprimitivityReport {
    pub items: Vec<ItemResult>,
}

impl ImprimitivityReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn item(&self, name: &str) -> Option<&ItemResult> {
        self.items.iter().find(|i| i.item == name)
    }
}

/// Residuals of the two `γ`-equivariance identities over all generators and
/// all `r ∈ G`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivarianceReport {
    pub left_inner: f64,
    pub right_action: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoritaReport {
    pub dim_b: usize,
    pub dim_c: usize,
    pub dim_x: usize,
    pub blocks_b: usize,
    pub blocks_c: usize,
    pub equivalent: bool,
}

fn rel<T: Real>(x: T, scale: T) -> f64 {
    (x / scale.max(T::one())).to_f64().unwrap_or(f64::INFINITY)
}

impl<T: Real> Imprimitivity<T> {
    pub fn new(q: Quotient, d: GradedBundle<T>, tol: T) -> Result<Self, ImprimitivityError> {
        if **d.group() != **q.quotient_group() {
            return Err(ImprimitivityError::GroupMismatch);
        }
        let report = d.verify(tol);
        if !report.passed() {
            let names: Vec<&str> = report.violations.iter().map(|v| v.axiom.name()).collect();
            return Err(ImprimitivityError::AxiomViolation(names.join(", ")));
        }
        let realization_b = CrossedProduct::new(&pullback(&d, &q, tol)?, tol)?;
        let realization_c = CrossedProduct::new(&d, tol)?;
        Ok(Imprimitivity { q, d, star: Arc::new(|m: &Matrix<T>| m.adjoint()), realization_b, realization_c, tol })
    }

    /// Replaces the involution used on coefficients, for fault injection.
    pub fn with_involution(mut self, star: impl Fn(&Matrix<T>) -> Matrix<T> + Send + Sync + 'static) -> Self {
        self.star = Arc::new(star);
        self
    }

    pub fn quotient(&self) -> &Quotient {
        &self.q
    }

    pub fn coefficients(&self) -> &GradedBundle<T> {
        &self.d
    }

    fn star(&self, m: &Matrix<T>) -> Matrix<T> {
        (self.star)(m)
    }

    pub fn check_bimodule_element(&self, x: &BimoduleElement<T>) -> Result<(), ImprimitivityError> {
        for (&(k, t), d) in &x.terms {
            if k >= self.q.index() || t >= self.q.group().order() || !self.d.fiber(k).contains(d, self.tol.sqrt())? {
                return Err(ImprimitivityError::FiberMismatch((k, t)));
            }
        }
        Ok(())
    }

    pub fn generators_x(&self) -> Vec<BimoduleElement<T>> {
        let mut out = Vec::new();
        for k in 0..self.q.index() {
            for t in self.q.group().elements() {
                for d in self.d.fiber(k).basis() {
                    out.push(BimoduleElement::generator(k, t, d.clone()));
                }
            }
        }
        out
    }

    pub fn generators_b(&self) -> Vec<AlgebraElementB<T>> {
        let g = self.q.group();
        let mut out = Vec::new();
        for s in g.elements() {
            for t in g.elements() {
                for d in self.d.fiber(self.q.q(s)).basis() {
                    out.push(AlgebraElementB::generator(s, t, d.clone()));
                }
            }
        }
        out
    }

    pub fn generators_c(&self) -> Vec<AlgebraElementC<T>> {
        let mut out = Vec::new();
        for k in 0..self.q.index() {
            for l in 0..self.q.index() {
                for d in self.d.fiber(k).basis() {
                    out.push(AlgebraElementC::generator(k, l, d.clone()));
                }
            }
        }
        out
    }

    /// `(d, s, t)(d', u, v) = (dd', su, v)` when `t = uv`.
    pub fn b_mul(&self, a: &AlgebraElementB<T>, b: &AlgebraElementB<T>) -> AlgebraElementB<T> {
        let g = self.q.group();
        let mut out = AlgebraElementB::zero();
        for (&(s, t), d) in &a.terms {
            for (&(u, v), e) in &b.terms {
                if t == g.mul(u, v) {
                    out.add_term((g.mul(s, u), v), d * e);
                }
            }
        }
        out
    }

    /// `(d, s, t)* = (d*, s⁻¹, st)`.
    pub fn b_adjoint(&self, a: &AlgebraElementB<T>) -> AlgebraElementB<T> {
        let g = self.q.group();
        let mut out = AlgebraElementB::zero();
        for (&(s, t), d) in &a.terms {
            out.add_term((g.inv(s), g.mul(s, t)), self.star(d));
        }
        out
    }

    /// `(d, k, l)(d', k', l') = (dd', kk', l')` when `l = k'l'`.
    pub fn c_mul(&self, a: &AlgebraElementC<T>, b: &AlgebraElementC<T>) -> AlgebraElementC<T> {
        let h = self.q.quotient_group();
        let mut out = AlgebraElementC::zero();
        for (&(k, l), d) in &a.terms {
            for (&(k2, l2), e) in &b.terms {
                if l == h.mul(k2, l2) {
                    out.add_term((h.mul(k, k2), l2), d * e);
                }
            }
        }
        out
    }

    /// `(d, k, l)* = (d*, k⁻¹, kl)`.
    pub fn c_adjoint(&self, a: &AlgebraElementC<T>) -> AlgebraElementC<T> {
        let h = self.q.quotient_group();
        let mut out = AlgebraElementC::zero();
        for (&(k, l), d) in &a.terms {
            out.add_term((h.inv(k), h.mul(k, l)), self.star(d));
        }
        out
    }

    /// `(d_{sN}, t)·(d_{uN}, vN) = (d_{sN} d_{uN}, t)` at coset `suN` when `s⁻¹tN = uvN`.
    pub fn right_action(&self, x: &BimoduleElement<T>, c: &AlgebraElementC<T>) -> BimoduleElement<T> {
        let h = self.q.quotient_group();
        let mut out = BimoduleElement::zero();
        for (&(k, t), d) in &x.terms {
            let lhs = h.mul(h.inv(k), self.q.q(t));
            for (&(k2, l), e) in &c.terms {
                if lhs == h.mul(k2, l) {
                    out.add_term((h.mul(k, k2), t), d * e);
                }
            }
        }
        out
    }

    /// `(d_{pN}, p, r)·(d_{sN}, t) = (d_{pN} d_{sN}, pt)` at coset `psN` when `r = t`.
    pub fn left_action(&self, b: &AlgebraElementB<T>, x: &BimoduleElement<T>) -> BimoduleElement<T> {
        let g = self.q.group();
        let h = self.q.quotient_group();
        let mut out = BimoduleElement::zero();
        for (&(p, r), d) in &b.terms {
            for (&(k, t), e) in &x.terms {
                if r == t {
                    out.add_term((h.mul(self.q.q(p), k), g.mul(p, t)), d * e);
                }
            }
        }
        out
    }

    /// `⟨(d_{sN}, t), (d_{uN}, v)⟩_C = (d_{sN}* d_{uN}, u⁻¹vN)` when `t = v`.
    pub fn rinner(&self, x: &BimoduleElement<T>, y: &BimoduleElement<T>) -> AlgebraElementC<T> {
        let h = self.q.quotient_group();
        let mut out = AlgebraElementC::zero();
        for (&(k, t), d) in &x.terms {
            let ds = self.star(d);
            for (&(k2, v), e) in &y.terms {
                if t == v {
                    out.add_term((h.mul(h.inv(k), k2), h.mul(h.inv(k2), self.q.q(v))), &ds * e);
                }
            }
        }
        out
    }

    /// `⟨(d_{sN}, t), (d_{uN}, v)⟩_B = (d_{sN} d_{uN}*, tv⁻¹, v)` when `su⁻¹N = tv⁻¹N`.
    pub fn linner(&self, x: &BimoduleElement<T>, y: &BimoduleElement<T>) -> AlgebraElementB<T> {
        let g = self.q.group();
        let h = self.q.quotient_group();
        let mut out = AlgebraElementB::zero();
        for (&(k, t), d) in &x.terms {
            for (&(k2, v), e) in &y.terms {
                let tv = g.mul(t, g.inv(v));
                if h.mul(k, h.inv(k2)) == self.q.q(tv) {
                    out.add_term((tv, v), d * &self.star(e));
                }
            }
        }
        out
    }

    /// `γ_r(d, t) = (d, tr⁻¹)`.
    pub fn gamma(&self, r: usize, x: &BimoduleElement<T>) -> BimoduleElement<T> {
        let g = self.q.group();
        let mut out = BimoduleElement::zero();
        for (&(k, t), d) in &x.terms {
            out.add_term((k, g.mul(t, g.inv(r))), d.clone());
        }
        out
    }

    /// Dual action on `B₀`: `(d, s, t) ↦ (d, s, tr⁻¹)`.
    pub fn dual_b(&self, r: usize, b: &AlgebraElementB<T>) -> AlgebraElementB<T> {
        let g = self.q.group();
        let mut out = AlgebraElementB::zero();
        for (&(s, t), d) in &b.terms {
            out.add_term((s, g.mul(t, g.inv(r))), d.clone());
        }
        out
    }

    /// Inflated dual action on `C₀`: `(d, k, l) ↦ (d, k, l q(r)⁻¹)`.
    pub fn inflated_dual_c(&self, r: usize, c: &AlgebraElementC<T>) -> AlgebraElementC<T> {
        let h = self.q.quotient_group();
        let qr = self.q.q(r);
        let mut out = AlgebraElementC::zero();
        for (&(k, l), d) in &c.terms {
            out.add_term((k, h.mul(l, h.inv(qr))), d.clone());
        }
        out
    }

    /// Units of `B₀` and `C₀`: `Σ_t (1, e, t)` and `Σ_l (1, eN, l)`.
    pub fn unit_elements(&self) -> Result<(AlgebraElementB<T>, AlgebraElementC<T>), ImprimitivityError> {
        let one = self.d.unit(self.tol).ok_or(ImprimitivityError::NonUnitalUnitFiber)?;
        let mut b = AlgebraElementB::zero();
        for t in self.q.group().elements() {
            b.add_term((0, t), one.clone());
        }
        let mut c = AlgebraElementC::zero();
        for l in 0..self.q.index() {
            c.add_term((0, l), one.clone());
        }
        Ok((b, c))
    }

    /// `(d, s, t) ↦ (d ⊗ λ_s) ⊗ E_{st,t}` in the crossed product of the pull-back.
    pub fn realize_b(&self, b: &AlgebraElementB<T>) -> Matrix<T> {
        let n = self.realization_b.ambient_dim();
        let mut m = Matrix::zeros(n, n);
        for (&(s, t), d) in &b.terms {
            let x = self.realization_b.embed(s, t, &pullback_element(d, self.q.group(), s));
            m = &m + &x;
        }
        m
    }

    /// `(d, k, l) ↦ d ⊗ E_{kl,l}` in the crossed product of `D`.
    pub fn realize_c(&self, c: &AlgebraElementC<T>) -> Matrix<T> {
        let n = self.realization_c.ambient_dim();
        let mut m = Matrix::zeros(n, n);
        for (&(k, l), d) in &c.terms {
            m = &m + &self.realization_c.embed(k, l, d);
        }
        m
    }

    pub fn realization_b(&self) -> &CrossedProduct<T> {
        &self.realization_b
    }

    pub fn realization_c(&self) -> &CrossedProduct<T> {
        &self.realization_c
    }

    fn random_x(&self, rng: &mut impl rand::Rng, gens: &[BimoduleElement<T>]) -> BimoduleElement<T> {
        combine(rng, gens)
    }

    /// The checklist (i)–(viii) over all generators plus seeded random elements.
    pub fn verify(&self, tol: T) -> ImprimitivityReport {
        let xs = self.generators_x();
        let bs = self.generators_b();
        let cs = self.generators_c();
        let mut rng = seeded(0x1a9);
        let tol64 = tol.to_f64().unwrap_or(0.0);
        let mut items = Vec::new();
        let mut push = |item, description, residual: f64, passed: bool| {
            items.push(ItemResult { item, description, passed: passed && residual <= tol64, residual })
        };

        // (i) module associativity and commuting actions
        let mut r1 = 0.0f64;
        for x in &xs {
            for b in &bs {
                let bx = self.left_action(b, x);
                for c in &cs {
                    let lhs = self.right_action(&bx, c);
                    let rhs = self.left_action(b, &self.right_action(x, c));
                    r1 = r1.max(rel(lhs.minus(&rhs).max_abs(), T::one()));
                }
                for b2 in &bs {
                    let lhs = self.left_action(&self.b_mul(b2, b), x);
                    let rhs = self.left_action(b2, &bx);
                    r1 = r1.max(rel(lhs.minus(&rhs).max_abs(), T::one()));
                }
            }
            for c in &cs {
                let xc = self.right_action(x, c);
                for c2 in &cs {
                    let lhs = self.right_action(x, &self.c_mul(c, c2));
                    let rhs = self.right_action(&xc, c2);
                    r1 = r1.max(rel(lhs.minus(&rhs).max_abs(), T::one()));
                }
            }
        }
        push("i", "bimodule associativity and commuting actions", r1, true);

        // (ii) inner products are module maps
        let mut r2 = 0.0f64;
        for x in &xs {
            for y in &xs {
                let lxy = self.linner(x, y);
                for b in &bs {
                    let lhs = self.linner(&self.left_action(b, x), y);
                    let rhs = self.b_mul(b, &lxy);
                    r2 = r2.max(rel(lhs.minus(&rhs).max_abs(), T::one()));
                }
                let rxy = self.rinner(x, y);
                for c in &cs {
                    let lhs = self.rinner(x, &self.right_action(y, c));
                    let rhs = self.c_mul(&rxy, c);
                    r2 = r2.max(rel(lhs.minus(&rhs).max_abs(), T::one()));
                }
            }
        }
        push("ii", "inner products respect the module actions", r2, true);

        // (iii) adjoint symmetry
        let mut r3 = 0.0f64;
        for x in &xs {
            for y in &xs {
                let l = self.b_adjoint(&self.linner(x, y)).minus(&self.linner(y, x));
                let r = self.c_adjoint(&self.rinner(x, y)).minus(&self.rinner(y, x));
                r3 = r3.max(rel(l.max_abs().max(r.max_abs()), T::one()));
            }
        }
        push("iii", "adjoint symmetry of both inner products", r3, true);

        // (iv) linearity: ⟨·,·⟩_B linear on the left, ⟨·,·⟩_C linear on the right
        let mut r4 = 0.0f64;
        for _ in 0..16 {
            let (x, y, z) = (self.random_x(&mut rng, &xs), self.random_x(&mut rng, &xs), self.random_x(&mut rng, &xs));
            let lambda: Cx<T> = cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let yz = y.scale(lambda).plus(&z);
            let c_side = self.rinner(&x, &yz).minus(&self.rinner(&x, &y).scale(lambda).plus(&self.rinner(&x, &z)));
            let b_side = self.linner(&yz, &x).minus(&self.linner(&y, &x).scale(lambda).plus(&self.linner(&z, &x)));
            r4 = r4.max(rel(c_side.max_abs().max(b_side.max_abs()), T::one()));
        }
        push("iv", "linearity of inner products in the module-linear slot", r4, true);

        // (v) x·⟨y,z⟩_C = ⟨x,y⟩_B·z
        let mut r5 = 0.0f64;
        for x in &xs {
            for y in &xs {
                let lxy = self.linner(x, y);
                for z in &xs {
                    let lhs = self.right_action(x, &self.rinner(y, z));
                    let rhs = self.left_action(&lxy, z);
                    r5 = r5.max(rel(lhs.minus(&rhs).max_abs(), T::one()));
                }
            }
        }
        push("v", "compatibility x<y,z>_C = <x,y>_B z", r5, true);

        // (vi) fullness by rank
        let ambient_b = self.realization_b.ambient_dim();
        let ambient_c = self.realization_c.ambient_dim();
        let mut span_b = Vec::new();
        let mut span_c = Vec::new();
        for x in &xs {
            for y in &xs {
                span_b.push(self.realize_b(&self.linner(x, y)));
                span_c.push(self.realize_c(&self.rinner(x, y)));
            }
        }
        let full = match (
            MatrixSubspace::orthonormalize(ambient_b, &span_b, tol),
            MatrixSubspace::orthonormalize(ambient_c, &span_c, tol),
        ) {
            (Ok(sb), Ok(sc)) => {
                sb.dim() == self.realization_b.dim()
                    && sc.dim() == self.realization_c.dim()
                    && self.realization_b.algebra().contains_subspace(&sb, tol.sqrt())
                    && self.realization_c.algebra().contains_subspace(&sc, tol.sqrt())
            }
            _ => false,
        };
        push("vi", "fullness of both inner products", 0.0, full);

        // (vii) positivity in the concrete realizations
        let mut samples: Vec<BimoduleElement<T>> = xs.clone();
        for _ in 0..8 {
            samples.push(self.random_x(&mut rng, &xs));
        }
        let mut r7 = 0.0f64;
        let mut positive = true;
        for x in &samples {
            let pb = self.realize_b(&self.linner(x, x));
            let pc = self.realize_c(&self.rinner(x, x));
            positive &= pb.is_psd(tol) && pc.is_psd(tol);
            r7 = r7.max(rel((&pb - &pb.adjoint()).max_abs(), pb.max_abs()));
            r7 = r7.max(rel((&pc - &pc.adjoint()).max_abs(), pc.max_abs()));
        }
        push("vii", "positivity of both inner products", r7, positive);

        // (viii) boundedness of the actions
        let mut bounded = true;
        for i in 0..8 {
            let x = &samples[xs.len() + i];
            let b = combine(&mut rng, &bs);
            let c = combine(&mut rng, &cs);
            let nb = self.realize_b(&b).op_norm();
            let nc = self.realize_c(&c).op_norm();
            let bx = self.left_action(&b, x);
            let xc = self.right_action(x, &c);
            let gap_c = &self.realize_c(&self.rinner(x, x)).scale_real(nb * nb) - &self.realize_c(&self.rinner(&bx, &bx));
            let gap_b = &self.realize_b(&self.linner(x, x)).scale_real(nc * nc) - &self.realize_b(&self.linner(&xc, &xc));
            bounded &= gap_c.is_psd(tol) && gap_b.is_psd(tol);
        }
        push("viii", "bounded actions: <bx,bx>_C <= |b|^2 <x,x>_C, <xc,xc>_B <= |c|^2 <x,x>_B", 0.0, bounded);

        ImprimitivityReport { items }
    }

    /// `⟨γ_r x, γ_r y⟩_B = δ̂_r(⟨x, y⟩_B)` and `γ_r(x·c) = γ_r(x)·δ̂ʳ(c)` on all generators.
    pub fn equivariance(&self) -> EquivarianceReport {
        let xs = self.generators_x();
        let cs = self.generators_c();
        let mut report = EquivarianceReport { left_inner: 0.0, right_action: 0.0 };
        for r in self.q.group().elements() {
            for x in &xs {
                let gx = self.gamma(r, x);
                for y in &xs {
                    let lhs = self.linner(&gx, &self.gamma(r, y));
                    let rhs = self.dual_b(r, &self.linner(x, y));
                    report.left_inner = report.left_inner.max(rel(lhs.minus(&rhs).max_abs(), T::one()));
                }
                for c in &cs {
                    let lhs = self.gamma(r, &self.right_action(x, c));
                    let rhs = self.right_action(&gx, &self.inflated_dual_c(r, c));
                    report.right_action = report.right_action.max(rel(lhs.minus(&rhs).max_abs(), T::one()));
                }
            }
        }
        report
    }

    /// Dimensions and Wedderburn block counts of `B₀`, `C₀` and `X₀`.
    pub fn morita_report(&self, tol: T) -> Result<MoritaReport, ImprimitivityError> {
        let verified = self.verify(tol).passed();
        let blocks_b = self.realization_b.block_count(tol)?;
        let blocks_c = self.realization_c.block_count(tol)?;
        let dim_x = self.q.group().order() * self.d.total_dim();
        Ok(MoritaReport {
            dim_b: self.realization_b.dim(),
            dim_c: self.realization_c.dim(),
            dim_x,
            blocks_b,
            blocks_c,
            equivalent: verified && blocks_b == blocks_c,
        })
    }
}

fn combine<E, T>(rng: &mut impl rand::Rng, gens: &[E]) -> E
where
    E: Scalable<T>,
    T: Real,
{
    let mut out = E::empty();
    for g in gens {
        let c: Cx<T> = cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if !c.is_zero() {
            out = out.sum_with(&g.times(c));
        }
    }
    out
}

trait Scalable<T>: Sized {
    fn empty() -> Self;
    fn sum_with(&self, other: &Self) -> Self;
    fn times(&self, c: Cx<T>) -> Self;
}

macro_rules! scalable {
    ($name:ident) => {
        impl<T: Real> Scalable<T> for $name<T> {
            fn empty() -> Self {
                $name::zero()
            }
            fn sum_with(&self, other: &Self) -> Self {
                self.plus(other)
            }
            fn times(&self, c: Cx<T>) -> Self {
                self.scale(c)
            }
        }
    };
}

scalable!(BimoduleElement);
scalable!(AlgebraElementB);
scalable!(AlgebraElementC);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::matrix::pauli_x;

    const TOL: f64 = 1e-9;

    fn pauli_setup() -> Imprimitivity<f64> {
        let q = Quotient::new(Arc::new(FiniteGroup::cyclic(4).unwrap()), &[0, 2]).unwrap();
        let d = GradedBundle::from_spanning(q.quotient_group().clone(), 2, &[vec![Matrix::identity(2)], vec![pauli_x()]], TOL).unwrap();
        Imprimitivity::new(q, d, TOL).unwrap()
    }

    #[test]
    fn pauli_checklist_passes() {
        let imp = pauli_setup();
        let report = imp.verify(1e-8);
        assert!(report.passed(), "{report:#?}");
        assert_eq!(report.items.len(), 8);
    }

    #[test]
    fn pauli_morita_numbers() {
        let m = pauli_setup().morita_report(TOL).unwrap();
        assert_eq!((m.dim_c, m.dim_b, m.dim_x, m.blocks_b, m.blocks_c), (4, 16, 8, 1, 1));
        assert!(m.equivalent);
    }

    #[test]
    fn case_clauses_give_zero() {
        let imp = pauli_setup();
        let one = Matrix::identity(2);
        let x = BimoduleElement::generator(0, 1, one.clone());
        let y = BimoduleElement::generator(0, 2, one.clone());
        assert!(imp.rinner(&x, &y).terms().is_empty());
        let b = AlgebraElementB::generator(0, 3, one.clone());
        assert!(imp.left_action(&b, &x).terms().is_empty());
        // s⁻¹tN = uvN fails: s = e, t = 1 (coset 1), u = e, v = eN
        let c = AlgebraElementC::generator(0, 0, one);
        assert!(imp.right_action(&x, &c).terms().is_empty());
    }

    #[test]
    fn units_act_trivially() {
        let imp = pauli_setup();
        let (ub, uc) = imp.unit_elements().unwrap();
        assert_eq!(uc.terms().len(), 2);
        for x in imp.generators_x() {
            assert!(imp.right_action(&x, &uc).minus(&x).max_abs() < 1e-12);
            assert!(imp.left_action(&ub, &x).minus(&x).max_abs() < 1e-12);
        }
        for c in imp.generators_c() {
            assert!(imp.c_mul(&uc, &c).minus(&c).max_abs() < 1e-12);
        }
    }

    #[test]
    fn realizations_are_star_homomorphisms() {
        let imp = pauli_setup();
        let bs = imp.generators_b();
        for a in &bs {
            let ra = imp.realize_b(a);
            assert!((&imp.realize_b(&imp.b_adjoint(a)) - &ra.adjoint()).max_abs() < 1e-12);
            for b in &bs {
                assert!((&imp.realize_b(&imp.b_mul(a, b)) - &(&ra * &imp.realize_b(b))).max_abs() < 1e-12);
            }
        }
        let cs = imp.generators_c();
        for a in &cs {
            for b in &cs {
                assert!((&imp.realize_c(&imp.c_mul(a, b)) - &(&imp.realize_c(a) * &imp.realize_c(b))).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn corrupted_involution_breaks_symmetry() {
        let imp = pauli_setup().with_involution(|m| m.adjoint().scale_real(2.0));
        let report = imp.verify(1e-8);
        assert!(!report.item("iii").unwrap().passed);
    }

    #[test]
    fn equivariance_holds() {
        let e = pauli_setup().equivariance();
        assert!(e.left_inner <= 1e-10 && e.right_action <= 1e-10);
    }

    #[test]
    fn foreign_coefficient_rejected() {
        let imp = pauli_setup();
        let x = BimoduleElement::generator(1, 0, Matrix::identity(2));
        assert_eq!(imp.check_bimodule_element(&x).unwrap_err(), ImprimitivityError::FiberMismatch((1, 0)));
    }
}
