//! JSON descriptors for the built-in slice functions, used by the CLI and
//! anywhere a function has to cross a serialization boundary.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::kernels::{eval_kernel, KernelId};
use crate::quat::Quaternion;
use crate::slicefn::{MonomialSum, SliceFunction};
use crate::Result;

/// A serializable description of a slice function.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionDescriptor {
    /// `f(q) = sum_n q^n coeffs[n]`.
    MonomialSum { coeffs: Vec<Quaternion> },
    /// A named Cauchy-type kernel in its second (evaluation) variable, with
    /// the singularity variable pinned at `p`.
    Kernel { name: String, p: Quaternion },
}

/// A kernel viewed as a slice function of `q`. Evaluating on the singular
/// sphere of `p` returns a quiet NaN quaternion rather than panicking; the
/// quadrature and sampling code guards against landing there.
pub struct KernelFn {
    pub id: KernelId,
    pub p: Quaternion,
}

impl SliceFunction for KernelFn {
    fn components(&self, u: f64, v: f64) -> (Quaternion, Quaternion) {
        let i = Quaternion::E1;
        let ev = |q| {
            eval_kernel(self.id, self.p, q)
                .unwrap_or(Quaternion::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN))
        };
        let fp = ev(Quaternion::real(u) + i * v);
        let fm = ev(Quaternion::real(u) - i * v);
        let a = (fp + fm) * 0.5;
        let b = -(i * (fp - a));
        (a, b)
    }
}

impl FunctionDescriptor {
    /// Instantiate the described function.
    pub fn build(&self) -> Result<Box<dyn SliceFunction>> {
        match self {
            Self::MonomialSum { coeffs } => Ok(Box::new(MonomialSum::new(coeffs.clone()))),
            Self::Kernel { name, p } => {
                let id = KernelId::parse(name)?;
                Ok(Box::new(KernelFn { id, p: *p }))
            }
        }
    }
}

/// Parse a function argument: a JSON descriptor (starts with `{`), the
/// shorthand `q^n`, `q`, or a bare real constant.
pub fn parse_function(arg: &str) -> Result<Box<dyn SliceFunction>> {
    let arg = arg.trim();
    if arg.starts_with('{') {
        let desc: FunctionDescriptor = serde_json::from_str(arg)?;
        return desc.build();
    }
    if arg == "q" {
        return Ok(Box::new(MonomialSum::monomial(1)));
    }
    if let Some(exp) = arg.strip_prefix("q^") {
        let n: usize = exp
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad exponent in `{arg}`")))?;
        return Ok(Box::new(MonomialSum::monomial(n)));
    }
    if let Ok(c) = arg.parse::<f64>() {
        return Ok(Box::new(MonomialSum::constant(Quaternion::real(c))));
    }
    Err(Error::InvalidArgument(format!(
        "cannot parse function `{arg}`: expected a JSON descriptor, `q^n`, or a constant"
    )))
}
