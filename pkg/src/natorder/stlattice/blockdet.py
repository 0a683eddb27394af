"""Exact determinant of the block-diagonal codeword ``diag(rho(c), tau rho(c), ...)``."""

from __future__ import annotations

from dataclasses import dataclass

from ..cda.algebra import left_representation, reduced_norm
from ..exactfield.field import QQ, is_integral, relative_norm
from ..exactfield.linalg import det
from ..exactfield.parse import format_element
from .numeric import Embedding, working_precision
from .lattice import embedded_representation


@dataclass
class BlockDetRecord:
    element: str
    block_det: object  # product of the exact block determinants, in F
    norm: object  # N_{L/F}(nr(c))
    equal: bool
    integral: bool
    numeric_agrees: bool | None
    degenerate: bool

    @property
    def ok(self) -> bool:
        return self.equal and self.integral and self.numeric_agrees is not False

    def to_json(self) -> dict:
        return {
            "element": self.element,
            "block_det": _text(self.block_det),
            "norm_L_to_F": _text(self.norm),
            "equal": self.equal,
            "in_O_F": self.integral,
            "numeric_agrees": self.numeric_agrees,
            "degenerate": self.degenerate,
        }


def _text(x):
    return format_element(x) if hasattr(x, "field") else str(x)


def block_determinant_identity(setup, c, embedding: Embedding | None = None) -> BlockDetRecord:
    """Check ``prod_i det(tau^i rho(c)) = N_{L/F}(nr(c))`` exactly, and that it lies in ``O_F``.

    The left side applies ``tau^i`` entrywise to ``rho(c)`` and takes each
    determinant separately; the right side never forms a block. With an
    embedding the ball determinant of the embedded block is also compared.
    """
    rep = left_representation(c)
    E, L, F = setup.E, setup.L, setup.F
    acc = E.one
    tau_i = None
    for i in range(setup.n):
        block = rep if i == 0 else [[tau_i(x) for x in row] for row in rep]
        acc = acc * E.coerce(det(block))
        tau_i = setup.tau if tau_i is None else tau_i.compose(setup.tau)
    block_det = acc.descend(F)
    nr = reduced_norm(c)
    norm = relative_norm(nr, F) if L is not F else nr
    equal = block_det == norm
    integral = is_integral(block_det, F) if F is not QQ else block_det.denominator == 1
    agrees = None
    if embedding is not None:
        mode = "block" if setup.n > 1 else "symmetric"
        with working_precision(embedding.precision):
            ball = embedded_representation(setup, c, mode, embedding).det()
            agrees = ball.overlaps(embedding(norm))
    return BlockDetRecord(str(c), block_det, norm, equal, integral, agrees, setup.n == 1)
