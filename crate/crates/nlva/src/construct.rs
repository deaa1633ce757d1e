//! Building new algebra files from old ones.

use nlva_core::constructions::{cocycle_twist, cross_product, from_assoc_with_derivation, matrix_algebra, tensor_product};
use nlva_core::modules_rep::{wn_module, ModuleStructure};

use crate::error::{CliError, CliResult};
use crate::format::{AlgebraFile, RMapSpec};

/// `V1 x ... x Vn` on the lexicographic basis `u*v`.
pub fn tensor(files: &[AlgebraFile]) -> CliResult<AlgebraFile> {
    let algs = files.iter().map(AlgebraFile::algebra).collect::<CliResult<Vec<_>>>()?;
    Ok(AlgebraFile::from_algebra(&tensor_product(&algs)?))
}

/// `M(n, V)` with the swap R map on the matrix factor. With `with_module`
/// the output also carries `W^n` for the file's module (the adjoint one
/// when there is none).
pub fn matrix(file: &AlgebraFile, n: usize, with_module: bool) -> CliResult<AlgebraFile> {
    let alg = file.algebra()?;
    let mut out = AlgebraFile::from_algebra(&matrix_algebra(&alg, n)?);
    out.rmap = Some(RMapSpec::TensorSwap { inner: n * n });
    if with_module {
        let m = file.module()?.unwrap_or_else(|| ModuleStructure::adjoint(&alg));
        out.set_module(&wn_module(&m, n)?);
    }
    Ok(out)
}

/// Twist by the file's grading and cocycle; the output keeps both and
/// carries the cocycle R map.
pub fn twist(file: &AlgebraFile) -> CliResult<AlgebraFile> {
    let alg = file.algebra()?;
    let grading = file.grading()?.ok_or_else(|| CliError::Usage("twist needs a grading section".into()))?;
    let eps = file.cocycle()?.ok_or_else(|| CliError::Usage("twist needs a cocycle section".into()))?;
    let mut out = AlgebraFile::from_algebra(&cocycle_twist(&alg, &grading, &eps)?);
    out.set_grading(&grading, &eps);
    out.rmap = Some(RMapSpec::Cocycle);
    Ok(out)
}

/// Cross product with the file's group action; the output records the
/// action on the original basis and carries the cross R map.
pub fn cross(file: &AlgebraFile) -> CliResult<AlgebraFile> {
    let alg = file.algebra()?;
    let act = file.group_action()?.ok_or_else(|| CliError::Usage("cross needs a group section".into()))?;
    let mut out = AlgebraFile::from_algebra(&cross_product(&alg, &act)?);
    out.set_group_action(&act, Some(alg.basis().to_vec()));
    out.rmap = Some(RMapSpec::Cross);
    Ok(out)
}

/// Algebra of an associative algebra with a derivation; the assoc section is kept.
pub fn from_assoc(file: &AlgebraFile) -> CliResult<AlgebraFile> {
    let data = file.assoc()?.ok_or_else(|| CliError::Usage("from-assoc needs an assoc section".into()))?;
    let mut out = AlgebraFile::from_algebra(&from_assoc_with_derivation(&data)?);
    out.set_assoc(&data);
    Ok(out)
}
