"""Per-setup lattice figures for the verification report."""

from __future__ import annotations

from .lattice import gram_and_volume, lattice_basis, normalized_metrics
from .search import DESK_LIMIT, min_determinant


def default_mode(setup) -> str:
    return "symmetric" if setup.L is setup.F else "block"


def setup_metrics(setup, bound: int = 1, sample: int = 20000, seed: int = 0, disc_over_L=None) -> dict:
    """Gram volume, minimum determinant and normalized metrics of the natural-order lattice.

    The search is exhaustive when the point count is within the desk limit and
    a seeded sample otherwise (then ``certified`` is false).
    """
    mode = default_mode(setup)
    basis = lattice_basis(setup, mode)
    gv = gram_and_volume(basis)
    total = (2 * bound + 1) ** basis.k - 1
    res = min_determinant(basis, bound=bound, sample=None if total <= DESK_LIMIT else sample, seed=seed)
    m = normalized_metrics(res.delta_min, gv.nu, basis.k, basis.n, gv.gram, res.exact)
    if disc_over_L is not None:
        m.volume_ratio = gv.nu / float(disc_over_L)
    return {
        "mode": mode,
        "flags": basis.flags,
        "k": basis.k,
        "n": basis.n,
        "gram_positive_definite": bool(gv.positive_definite),
        "volume_squared_matches_det": bool(gv.volume_consistent()),
        "min_eigenvalue": float(gv.min_eigenvalue),
        "metrics": m.to_json(),
        "min_determinant": res.to_json(),
    }
