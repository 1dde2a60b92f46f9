use std::sync::Arc;

use serde_json::{json, Value};

use super::{K2Model, MilnorError, UnitSource};
use crate::bar::BarChain;
use crate::exactlinalg::{kron, IntScalar};
use crate::groups::FiniteGroup;
use crate::torus::{coinvariant_equal, compile_to_bar, l_class, phi_class, Assignment, UnitLattice, WedgeClass};

/// Units `(a, b, c)`: decimal field elements, or words in formal units.
pub type Triple = (String, String, String);

#[derive(Clone, Debug)]
pub struct KernelElement<T: IntScalar> {
    pub model: String,
    pub triples: Vec<Triple>,
    /// `sum l_{a,b,c}` in the `GL_2` lattice
    pub symbolic: WedgeClass<T>,
    /// `sum Phi(a x {b,c}) + Phi(b x {a,c})`
    pub phi_sum: WedgeClass<T>,
    /// `2 sum l + sum Phi` vanishes in coinvariants
    pub theorem31_holds: bool,
    /// field value of each lattice unit, for field models
    pub assignment: Option<Assignment>,
}

impl<T: IntScalar> KernelElement<T> {
    /// `sum l_{a,b,c}` as a chain in a matrix group over the model's field.
    pub fn compile(&self, ambient: &Arc<FiniteGroup>) -> Result<BarChain<T>, MilnorError> {
        self.compile_class(&self.symbolic, ambient)
    }

    pub fn compile_class(&self, w: &WedgeClass<T>, ambient: &Arc<FiniteGroup>) -> Result<BarChain<T>, MilnorError> {
        let a = self
            .assignment
            .as_ref()
            .ok_or_else(|| MilnorError::UnknownUnit("formal units carry no field values".to_string()))?;
        Ok(compile_to_bar(w, a, ambient)?)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "model": self.model,
            "triples": self.triples.iter().map(|(a, b, c)| json!([a, b, c])).collect::<Vec<_>>(),
            "accepted": true,
            "symbolic": self.symbolic.to_json(),
            "symbolic_terms": self.symbolic.len(),
            "phi_sum": self.phi_sum.to_json(),
            "theorem31_holds": self.theorem31_holds,
            "assignment": self.assignment,
        })
    }
}

/// Emits `sum l_{a,b,c}` after checking `sum a (x) {b,c} + b (x) {a,c} = 0` in `U (x) K_2`.
///
/// For field models the lattice has one formal unit per position (`a1, b1, c1, a2, ...`)
/// with the field element as its assigned value; the element `1` becomes the trivial word.
pub fn kernel_element_builder<T: IntScalar>(model: &K2Model<T>, triples: &[Triple]) -> Result<KernelElement<T>, MilnorError> {
    let g = model.unit_generators();
    let mut residue = vec![T::zero(); g * g * g];
    for (a, b, c) in triples {
        let (va, vb, vc) = (model.unit_vector(a)?, model.unit_vector(b)?, model.unit_vector(c)?);
        for term in [kron(&va, &kron(&vb, &vc)), kron(&vb, &kron(&va, &vc))] {
            for (r, x) in residue.iter_mut().zip(term) {
                *r = r.clone() + x;
            }
        }
    }
    let c1 = model.units().tensor(model.module());
    let reduced = c1.reduce(&residue);
    if !reduced.iter().all(|x| x.is_zero()) {
        return Err(MilnorError::Rejected {
            residue: reduced.iter().map(ToString::to_string).collect(),
        });
    }

    let (lattice, words, assignment) = match model.source() {
        UnitSource::Field(_) => {
            let mut names = Vec::new();
            let mut words = Vec::new();
            let mut assignment = Assignment::new();
            for (k, (a, b, c)) in triples.iter().enumerate() {
                let mut w = Vec::new();
                for (p, v) in [("a", a), ("b", b), ("c", c)] {
                    let name = format!("{p}{}", k + 1);
                    let value: u32 = v.trim().parse().map_err(|_| MilnorError::UnknownUnit(v.clone()))?;
                    w.push(if value == 1 { "1".to_string() } else { name.clone() });
                    assignment.insert(name.clone(), value);
                    names.push(name);
                }
                words.push(w);
            }
            (UnitLattice::new(&names, 2)?, words, Some(assignment))
        }
        UnitSource::Formal(names) => {
            let words = triples.iter().map(|(a, b, c)| vec![a.clone(), b.clone(), c.clone()]).collect();
            (UnitLattice::new(names, 2)?, words, None)
        }
    };
    let mut symbolic = WedgeClass::zero(lattice.clone(), 3);
    let mut phi_sum = WedgeClass::zero(lattice.clone(), 3);
    for w in &words {
        let (a, b, c) = (w[0].as_str(), w[1].as_str(), w[2].as_str());
        symbolic = symbolic.add(&l_class(&lattice, a, b, c)?)?;
        phi_sum = phi_sum.add(&phi_class(&lattice, a, b, c)?)?.add(&phi_class(&lattice, b, a, c)?)?;
    }
    let residual = symbolic.scale(&T::from_i64_exact(2)).add(&phi_sum)?;
    let theorem31_holds = coinvariant_equal(&residual, &WedgeClass::zero(lattice, 3))?.equal;
    Ok(KernelElement {
        model: model.label.clone(),
        triples: triples.to_vec(),
        symbolic,
        phi_sum,
        theorem31_holds,
        assignment,
    })
}
