//! Evaluation of terms in a model.
//!
//! The evaluator threads a labelled partial result through the diagram
//! instead of composing full-width tensors. Each open wire carries a label;
//! identities and braidings only permute labels, and a generator is contracted
//! against the wires it touches. Wires that pass straight through never get
//! materialized, so a term like `id[V] @ id[V] @ id[V] @ wedge` never builds an
//! identity on `V⊗V⊗V`.
//!
//! Braid and BraidInv both act as the symmetry: every model here lives in a
//! symmetric category.

use std::collections::HashSet;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::model::Model;
use crate::tensor::{strides, unflatten, RationalTensor, TensorError};
use crate::term::{typecheck, Term, TermError};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Type(#[from] TermError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

type Label = u32;

/// Dense tensor whose axes carry wire labels.
#[derive(Clone, Debug)]
struct LTensor {
    labels: Vec<Label>,
    ext: Vec<usize>,
    data: Vec<Rational>,
}

impl LTensor {
    fn one() -> Self {
        LTensor { labels: vec![], ext: vec![], data: vec![Rational::one()] }
    }

    fn zeros(labels: Vec<Label>, ext: Vec<usize>) -> Self {
        let n = ext.iter().product();
        LTensor { labels, ext, data: vec![Rational::zero(); n] }
    }

    fn position(&self, l: Label) -> Option<usize> {
        self.labels.iter().position(|&x| x == l)
    }

    fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Nonzero entries as (multi-index, value).
    fn nonzeros(&self) -> impl Iterator<Item = (Vec<usize>, &Rational)> {
        let ext = &self.ext;
        self.data.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(move |(o, v)| {
            let mut idx = vec![0; ext.len()];
            unflatten(o, ext, &mut idx);
            (idx, v)
        })
    }

    /// Sums `a ⊗ b` over shared labels not listed in `out`; labels in `out`
    /// keep their diagonal.
    fn contract(a: &LTensor, b: &LTensor, out: &[Label], extent: &[usize]) -> LTensor {
        let out_ext: Vec<usize> = out.iter().map(|&l| extent[l as usize]).collect();
        let os = strides(&out_ext);
        let shared: Vec<(usize, usize)> = a
            .labels
            .iter()
            .enumerate()
            .filter_map(|(i, l)| b.position(*l).map(|j| (i, j)))
            .collect();
        let key_ext: Vec<usize> = shared.iter().map(|&(i, _)| a.ext[i]).collect();
        let ks = strides(&key_ext);
        let nkeys: usize = key_ext.iter().product();

        // Output offset contributed by a label: taken from `a` when present there.
        let a_out: Vec<(usize, usize)> =
            a.labels.iter().enumerate().filter_map(|(i, l)| out.iter().position(|x| x == l).map(|k| (i, os[k]))).collect();
        let b_out: Vec<(usize, usize)> = b
            .labels
            .iter()
            .enumerate()
            .filter(|(_, l)| a.position(**l).is_none())
            .filter_map(|(j, l)| out.iter().position(|x| x == l).map(|k| (j, os[k])))
            .collect();

        let mut buckets: Vec<Vec<(usize, &Rational)>> = vec![Vec::new(); nkeys];
        for (idx, v) in b.nonzeros() {
            let key: usize = shared.iter().zip(&ks).map(|(&(_, j), s)| idx[j] * s).sum();
            let off: usize = b_out.iter().map(|&(j, s)| idx[j] * s).sum();
            buckets[key].push((off, v));
        }

        let mut res = LTensor::zeros(out.to_vec(), out_ext);
        for (idx, va) in a.nonzeros() {
            let key: usize = shared.iter().zip(&ks).map(|(&(i, _), s)| idx[i] * s).sum();
            let off: usize = a_out.iter().map(|&(i, s)| idx[i] * s).sum();
            for (boff, vb) in &buckets[key] {
                res.data[off + boff] += va * *vb;
            }
        }
        res
    }

    /// Reorders axes to `order`, which must list the same labels. An all-zero
    /// tensor may be reshaped to any label set.
    fn reordered(&self, order: &[Label], extent: &[usize]) -> LTensor {
        let same_set = order.len() == self.labels.len() && order.iter().all(|l| self.position(*l).is_some());
        if !same_set {
            assert!(self.is_zero(), "internal: label sets diverged for a nonzero partial result");
            return LTensor::zeros(order.to_vec(), order.iter().map(|&l| extent[l as usize]).collect());
        }
        if order == self.labels.as_slice() {
            return self.clone();
        }
        let ext: Vec<usize> = order.iter().map(|&l| extent[l as usize]).collect();
        let os = strides(&ext);
        let place: Vec<usize> = self.labels.iter().map(|l| os[order.iter().position(|x| x == l).unwrap()]).collect();
        let mut res = LTensor::zeros(order.to_vec(), ext);
        for (idx, v) in self.nonzeros() {
            let o: usize = idx.iter().zip(&place).map(|(i, s)| i * s).sum();
            res.data[o] = v.clone();
        }
        res
    }
}

#[derive(Clone, Debug)]
struct State {
    t: LTensor,
    dom: Vec<Label>,
    wires: Vec<Label>,
}

struct Ctx<'m> {
    model: &'m Model,
    extent: Vec<usize>,
}

impl Ctx<'_> {
    fn fresh(&mut self, ext: usize) -> Label {
        self.extent.push(ext);
        (self.extent.len() - 1) as Label
    }

    fn arity(&self, t: &Term) -> (usize, usize) {
        match t {
            Term::Id(o) => (o.len(), o.len()),
            Term::Gen(n) => {
                let g = self.model.gen(n).expect("typechecked generator");
                (g.dom.len(), g.cod.len())
            }
            Term::Compose(a, b) => (self.arity(b).0, self.arity(a).1),
            Term::Tensor(a, b) => {
                let (x, y) = (self.arity(a), self.arity(b));
                (x.0 + y.0, x.1 + y.1)
            }
            Term::Braid(x, y) | Term::BraidInv(x, y) => (x.len() + y.len(), x.len() + y.len()),
            Term::ScalarMul(_, t) => self.arity(t),
            Term::Sum(a, _) => self.arity(a),
            Term::Zero(d, c) => (d.len(), c.len()),
        }
    }

    /// Labels kept after replacing `wires[off..off+k]` by `outputs`.
    fn keep_order(&self, s: &State, inputs: &[Label], new_wires: &[Label], outputs: &[Label]) -> Vec<Label> {
        let needed: HashSet<Label> = s.dom.iter().chain(new_wires).copied().collect();
        let mut out: Vec<Label> = s.t.labels.iter().copied().filter(|l| needed.contains(l)).collect();
        for l in inputs {
            if needed.contains(l) && !out.contains(l) {
                out.push(*l);
            }
        }
        out.extend_from_slice(outputs);
        out
    }

    fn replace(&mut self, s: &State, off: usize, k: usize, cod_ext: &[usize]) -> (Vec<Label>, Vec<Label>, Vec<Label>) {
        let inputs = s.wires[off..off + k].to_vec();
        let outputs: Vec<Label> = cod_ext.iter().map(|&e| self.fresh(e)).collect();
        let mut new_wires = s.wires[..off].to_vec();
        new_wires.extend_from_slice(&outputs);
        new_wires.extend_from_slice(&s.wires[off + k..]);
        (inputs, outputs, new_wires)
    }

    fn apply(&mut self, t: &Term, s: State, off: usize) -> State {
        match t {
            Term::Id(_) => s,
            Term::Gen(name) => {
                let g = self.model.gen(name).expect("typechecked generator");
                let k = g.dom.len();
                let (inputs, outputs, new_wires) = self.replace(&s, off, k, g.tensor.cod());
                let mut labels = inputs.clone();
                labels.extend_from_slice(&outputs);
                let gl = LTensor { labels, ext: g.tensor.extents(), data: g.tensor.entries().to_vec() };
                let keep = self.keep_order(&s, &inputs, &new_wires, &outputs);
                let t = LTensor::contract(&s.t, &gl, &keep, &self.extent);
                State { t, dom: s.dom, wires: new_wires }
            }
            Term::Zero(d, c) => {
                let cod_ext: Vec<usize> = c.labels().iter().map(|l| self.model.dim(l).expect("typechecked")).collect();
                let (inputs, outputs, new_wires) = self.replace(&s, off, d.len(), &cod_ext);
                let keep = self.keep_order(&s, &inputs, &new_wires, &outputs);
                let ext = keep.iter().map(|&l| self.extent[l as usize]).collect();
                State { t: LTensor::zeros(keep, ext), dom: s.dom, wires: new_wires }
            }
            Term::Compose(after, before) => {
                let s = self.apply(before, s, off);
                self.apply(after, s, off)
            }
            Term::Tensor(l, r) => {
                let (_, lc) = self.arity(l);
                let s = self.apply(l, s, off);
                self.apply(r, s, off + lc)
            }
            Term::Braid(x, y) => {
                let mut s = s;
                s.wires[off..off + x.len() + y.len()].rotate_left(x.len());
                s
            }
            Term::BraidInv(x, y) => {
                let mut s = s;
                s.wires[off..off + x.len() + y.len()].rotate_left(y.len());
                s
            }
            Term::ScalarMul(c, inner) => {
                let mut s = self.apply(inner, s, off);
                for v in &mut s.t.data {
                    *v *= c;
                }
                s
            }
            Term::Sum(a, b) => {
                let (_, l) = self.arity(t);
                let sa = self.apply(a, s.clone(), off);
                let sb = self.apply(b, s, off);
                let exts: Vec<usize> = sa.wires[off..off + l].iter().map(|&w| self.extent[w as usize]).collect();
                let targets: Vec<Label> = exts.into_iter().map(|e| self.fresh(e)).collect();
                let sa = self.normalize(sa, off, &targets);
                let sb = self.normalize(sb, off, &targets);
                let (mut ta, tb) = if sa.t.is_zero() {
                    (sa.t.reordered(&sb.t.labels, &self.extent), sb.t)
                } else {
                    let tb = sb.t.reordered(&sa.t.labels, &self.extent);
                    (sa.t, tb)
                };
                for (x, y) in ta.data.iter_mut().zip(tb.data) {
                    *x += y;
                }
                State { t: ta, dom: sa.dom, wires: sa.wires }
            }
        }
    }

    /// Moves the wires `off..off+targets.len()` onto the labels `targets`.
    fn normalize(&mut self, mut s: State, off: usize, targets: &[Label]) -> State {
        for (j, &z) in targets.iter().enumerate() {
            let u = s.wires[off + j];
            if s.dom.contains(&u) {
                let e = self.extent[u as usize];
                let delta = LTensor { labels: vec![u, z], ext: vec![e, e], data: RationalTensor::identity(e).entries().to_vec() };
                let mut keep = s.t.labels.clone();
                if !keep.contains(&u) {
                    keep.push(u);
                }
                keep.push(z);
                s.t = LTensor::contract(&s.t, &delta, &keep, &self.extent);
            } else if let Some(p) = s.t.position(u) {
                s.t.labels[p] = z;
            } else {
                let mut keep = s.t.labels.clone();
                keep.push(z);
                let ext = keep.iter().map(|&l| self.extent[l as usize]).collect();
                debug_assert!(s.t.is_zero());
                s.t = LTensor::zeros(keep, ext);
            }
            s.wires[off + j] = z;
        }
        s
    }
}

/// Evaluates a term that typechecks against the model's signature.
pub fn evaluate(t: &Term, m: &Model) -> Result<RationalTensor, EvalError> {
    let (dom, cod) = typecheck(t, &m.signature())?;
    let dim = |l: &String| m.dim(l).expect("typechecked label");
    let dom_ext: Vec<usize> = dom.labels().iter().map(dim).collect();
    let cod_ext: Vec<usize> = cod.labels().iter().map(dim).collect();
    let mut ctx = Ctx { model: m, extent: Vec::new() };
    let dom_labels: Vec<Label> = dom_ext.iter().map(|&e| ctx.fresh(e)).collect();
    let s = State { t: LTensor::one(), dom: dom_labels.clone(), wires: dom_labels.clone() };
    let s = ctx.apply(t, s, 0);
    let targets: Vec<Label> = cod_ext.iter().map(|&e| ctx.fresh(e)).collect();
    let s = ctx.normalize(s, 0, &targets);
    let order = [dom_labels, targets].concat();
    let t = s.t.reordered(&order, &ctx.extent);
    Ok(RationalTensor::new(dom_ext, cod_ext, t.data)?)
}

/// Evaluates a closed term to its scalar value.
pub fn evaluate_scalar(t: &Term, m: &Model) -> Result<Rational, EvalError> {
    let v = evaluate(t, m)?;
    v.as_scalar()
        .cloned()
        .ok_or_else(|| TensorError::ShapeMismatch(format!("term is not closed: {:?} -> {:?}", v.dom(), v.cod())).into())
}

/// Feeds coordinate vectors into the domain axes of `f`; returns codomain coordinates.
pub fn apply(f: &RationalTensor, args: &[Vec<Rational>]) -> Result<Vec<Rational>, TensorError> {
    let dom = f.dom();
    if args.len() != dom.len() || args.iter().zip(dom).any(|(a, &n)| a.len() != n) {
        let got: Vec<usize> = args.iter().map(Vec::len).collect();
        return Err(TensorError::ShapeMismatch(format!("arguments of lengths {got:?} for domain {dom:?}")));
    }
    let cols: usize = f.cod().iter().product();
    let mut out = vec![Rational::zero(); cols];
    for (idx, v) in f.nonzeros() {
        let mut w = v.clone();
        for (k, a) in args.iter().enumerate() {
            w *= &a[idx[k]];
        }
        let col: usize = idx[dom.len()..].iter().zip(strides(f.cod())).map(|(i, s)| i * s).sum();
        out[col] += w;
    }
    Ok(out)
}
