use std::collections::VecDeque;
use std::sync::Arc;

use super::{FiniteGroup, GroupError};

/// A homomorphism between finite groups, stored as a full image table.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    images: Vec<u32>,
}

impl GroupHom {
    /// Extends `generator_images` (one per `source.generators()`) along a
    /// breadth-first spanning tree, then checks `f(xy) = f(x) f(y)` on all pairs.
    pub fn from_generators(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        generator_images: &[u32],
    ) -> Result<Self, GroupError> {
        let gens = source.generators();
        if gens.len() != generator_images.len() {
            return Err(GroupError::NotAHomomorphism(format!(
                "{} generators but {} images",
                gens.len(),
                generator_images.len()
            )));
        }
        if generator_images.iter().any(|&y| y as usize >= target.order()) {
            return Err(GroupError::NotAHomomorphism("image outside target".into()));
        }
        let mut images = vec![u32::MAX; source.order()];
        images[0] = 0;
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(generator_images) {
                let y = source.mul(x, g);
                let fy = target.mul(images[x as usize], img);
                if images[y as usize] == u32::MAX {
                    images[y as usize] = fy;
                    queue.push_back(y);
                } else if images[y as usize] != fy {
                    return Err(GroupError::NotAHomomorphism(format!("element {y} gets two images")));
                }
            }
        }
        if images.contains(&u32::MAX) {
            return Err(GroupError::NotAHomomorphism("generators do not generate the source".into()));
        }
        Self::from_table(source, target, images)
    }

    /// Checks the homomorphism law exhaustively.
    pub fn from_table(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, images: Vec<u32>) -> Result<Self, GroupError> {
        if images.len() != source.order() || images.iter().any(|&y| y as usize >= target.order()) {
            return Err(GroupError::NotAHomomorphism("image table has the wrong shape".into()));
        }
        for x in source.elements() {
            for y in source.elements() {
                let lhs = images[source.mul(x, y) as usize];
                let rhs = target.mul(images[x as usize], images[y as usize]);
                if lhs != rhs {
                    return Err(GroupError::NotAHomomorphism(format!("f({x} {y}) != f({x}) f({y})")));
                }
            }
        }
        Ok(Self { source, target, images })
    }

    pub fn identity(g: Arc<FiniteGroup>) -> Self {
        let images = g.elements().collect();
        Self {
            source: g.clone(),
            target: g,
            images,
        }
    }

    /// Projection of `left x right` onto factor `0` or `1`.
    pub fn projection(left: &Arc<FiniteGroup>, right: &Arc<FiniteGroup>, factor: usize) -> Self {
        let product = Arc::new(left.direct_product(right));
        let m = right.order() as u32;
        let (target, images) = match factor {
            0 => (left.clone(), product.elements().map(|x| x / m).collect()),
            1 => (right.clone(), product.elements().map(|x| x % m).collect()),
            _ => panic!("a product has two factors"),
        };
        Self {
            source: product,
            target,
            images,
        }
    }

    /// Inclusion of a matrix group into another over the same field, matched by labels.
    pub fn matrix_inclusion(sub: Arc<FiniteGroup>, sup: Arc<FiniteGroup>) -> Result<Self, GroupError> {
        let labels = sub
            .matrices()
            .ok_or_else(|| GroupError::NotAHomomorphism("source has no matrix labels".into()))?;
        let images = labels
            .matrices
            .iter()
            .map(|m| {
                sup.element_of_matrix(m)
                    .ok_or_else(|| GroupError::NotAHomomorphism(format!("{:?} not in target", m.rows())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_table(sub, sup, images)
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        self.images.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true))
    }
}
