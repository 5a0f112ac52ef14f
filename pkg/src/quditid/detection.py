"""Detection states and the optimal identification measurement.

The register is one probe qudit (position 0) followed by d reference
qudits (positions 1..d).  The conclusive outcome "probe matches
reference n" is detected through states that are totally antisymmetric
over the d qudits other than n: any product input whose probe factor
repeats one of the other reference factors is annihilated, which is
exactly the no-misidentification requirement.

Because the detection amplitudes form a Slater determinant, overlaps
with product states reduce to a d x d determinant (`overlap_with_product`)
instead of a contraction over the full d**(d+1)-dimensional space.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .state_ops import DENSE_DIM_LIMIT, HermitianOperator
from .tensor_core import (
    StateVector,
    check_dim,
    encode_index,
    state_from_dict,
    state_to_dict,
    total_dim,
)

ORTHONORMALITY_TOL = 1e-12


def _perm_sign(perm):
    """Parity (+1/-1) of a permutation given as a tuple of 0..len-1."""
    inversions = 0
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                inversions += 1
    return -1.0 if inversions % 2 else 1.0


def build_detection_core(d, n):
    """Totally antisymmetric detection state for outcome n.

    Assigns the digit values 0..d-1 to the d qudit slots other than n
    (slots in ascending label order) in all d! ways, weighting each
    assignment by the permutation sign relative to the ascending
    reference assignment, with an overall (-1)**n phase.  Qudit n's
    digit is held at 0 in the returned amplitudes; build_povm_vector
    relocates it.  Unit norm.
    """
    d = check_dim(d)
    if not 1 <= n <= d:
        raise ValueError(f"outcome index {n} out of range 1..{d}")
    slots = [j for j in range(d + 1) if j != n]
    amps = np.zeros(total_dim(d), dtype=np.complex128)
    weight = (-1.0 if n % 2 else 1.0) / math.sqrt(math.factorial(d))
    digits = [0] * (d + 1)
    for perm in itertools.permutations(range(d)):
        for slot, value in zip(slots, perm):
            digits[slot] = value
        amps[encode_index(digits, d)] = weight * _perm_sign(perm)
    return StateVector(d, amps)


def build_povm_vector(d, n, k):
    """Basis vector of the conclusive element for outcome n, branch k.

    Puts qudit n in basis state |k> and the remaining d qudits in the
    antisymmetric detection state.  Every nonzero amplitude sits in the
    total-excitation sector k + d(d-1)/2, which makes different-k
    vectors orthogonal regardless of the outcome indices.
    """
    d = check_dim(d)
    if not 0 <= k <= d - 1:
        raise ValueError(f"branch index {k} out of range 0..{d - 1}")
    core = build_detection_core(d, n)
    if k == 0:
        return core
    shift = k * d ** (d - n)
    amps = np.zeros_like(core.amps)
    support = np.nonzero(core.amps)[0]
    amps[support + shift] = core.amps[support]
    return StateVector(d, amps)


@dataclass(frozen=True)
class LowRankPovmElement:
    """Conclusive measurement operator scale * sum_k |v_k><v_k|.

    Stored as its scale and the d orthonormal vectors rather than as a
    full matrix, so it stays usable at dimensions where a dense operator
    would not fit.
    """

    label: int
    scale: float
    vectors: tuple

    def __post_init__(self):
        vectors = tuple(self.vectors)
        if not vectors:
            raise ValueError("element needs at least one vector")
        d = vectors[0].d
        if any(v.d != d for v in vectors):
            raise ValueError("mixed dimensions in element vectors")
        if not 1 <= self.label <= d:
            raise ValueError(f"outcome label {self.label} out of range 1..{d}")
        if not 0.0 < self.scale <= 1.0:
            raise ValueError(f"scale {self.scale} outside (0, 1]")
        mat = np.stack([v.amps for v in vectors])
        gram = mat.conj() @ mat.T
        if np.max(np.abs(gram - np.eye(len(vectors)))) > ORTHONORMALITY_TOL:
            raise ValueError("element vectors are not orthonormal")
        mat.setflags(write=False)
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "_matrix", mat)

    @property
    def d(self):
        return self.vectors[0].d

    @property
    def matrix(self):
        """Vectors stacked as a read-only (rank, D) array."""
        return self._matrix

    def apply(self, vec):
        coeffs = self._matrix.conj() @ vec
        return self.scale * (self._matrix.T @ coeffs)

    def expectation(self, vec):
        """<vec| element |vec> — real and nonnegative by construction."""
        coeffs = self._matrix.conj() @ vec
        return self.scale * float(np.real(np.vdot(coeffs, coeffs)))

    def trace(self):
        return self.scale * len(self.vectors)

    def as_operator(self):
        """Materialize as a sparse Hermitian operator."""
        vs = sp.csr_matrix(self._matrix)
        return HermitianOperator(self.d, (vs.T @ vs.conjugate()) * self.scale)


@dataclass(frozen=True)
class Povm:
    """The d conclusive elements plus the inconclusive remainder.

    `inconclusive` is the materialized identity-complement for small
    dimensions and None when only the low-rank elements are carried.
    """

    d: int
    elements: tuple
    inconclusive: object

    def __post_init__(self):
        d = check_dim(self.d)
        elements = tuple(self.elements)
        if len(elements) != d:
            raise ValueError(f"expected {d} conclusive elements, got {len(elements)}")
        if [e.label for e in elements] != list(range(1, d + 1)):
            raise ValueError("elements must be labeled 1..d in order")
        if any(e.d != d for e in elements):
            raise ValueError("element dimension mismatch")
        if self.inconclusive is not None and self.inconclusive.d != d:
            raise ValueError("inconclusive-element dimension mismatch")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "elements", elements)

    @property
    def scale(self):
        return self.elements[0].scale


def _inconclusive_complement(d, elements):
    D = total_dim(d)
    acc = sp.identity(D, dtype=np.complex128, format="csr")
    for elem in elements:
        acc = acc - elem.as_operator().mat
    return HermitianOperator(d, acc)


def build_povm(d):
    """Optimal unambiguous-identification measurement for dimension d.

    Each conclusive element carries scale d/(d+1) — the largest value
    for which the inconclusive remainder stays positive semidefinite.
    The remainder is materialized only when the full space is small
    enough to densify downstream (d <= 4).
    """
    d = check_dim(d)
    scale = d / (d + 1)
    elements = tuple(
        LowRankPovmElement(
            n, scale, tuple(build_povm_vector(d, n, k) for k in range(d))
        )
        for n in range(1, d + 1)
    )
    inconclusive = None
    if total_dim(d) <= DENSE_DIM_LIMIT:
        inconclusive = _inconclusive_complement(d, elements)
    return Povm(d, elements, inconclusive)


def overlap_with_product(d, n, factors):
    """Overlap of the detection state for outcome n with a product state.

    `factors` holds the d+1 single-qudit amplitude vectors of the
    product state in register order; the factor at position n does not
    enter (the detection state ignores that qudit).  Evaluates the
    Slater determinant of the matrix whose columns are the remaining
    factors in ascending slot order, at O(d**3) cost:

        overlap = (-1)**n / sqrt(d!) * det M,   M[v, s] = factors[slot s][v]

    Repeated factors among the active slots duplicate a column, so the
    overlap collapses to floating-point cancellation noise (~1e-16) —
    the per-trial face of the no-misidentification guarantee.
    """
    d = check_dim(d)
    if not 1 <= n <= d:
        raise ValueError(f"outcome index {n} out of range 1..{d}")
    if len(factors) != d + 1:
        raise ValueError(f"expected {d + 1} factors, got {len(factors)}")
    cols = []
    for j in range(d + 1):
        if j == n:
            continue
        f = np.asarray(factors[j], dtype=np.complex128)
        if f.shape != (d,):
            raise ValueError(f"factor {j} has shape {f.shape}, expected ({d},)")
        cols.append(f)
    m = np.column_stack(cols)
    sign = -1.0 if n % 2 else 1.0
    return complex(sign * np.linalg.det(m) / math.sqrt(math.factorial(d)))


def povm_to_dict(povm):
    """JSON-ready form: scale plus the raw vectors of each element."""
    return {
        "d": povm.d,
        "scale": float(povm.scale),
        "elements": [
            {"n": elem.label, "vectors": [state_to_dict(v) for v in elem.vectors]}
            for elem in povm.elements
        ],
    }


def povm_from_dict(obj):
    d = check_dim(int(obj["d"]))
    scale = float(obj["scale"])
    elements = []
    for entry in obj["elements"]:
        vectors = tuple(state_from_dict(v) for v in entry["vectors"])
        elements.append(LowRankPovmElement(int(entry["n"]), scale, vectors))
    elements = tuple(sorted(elements, key=lambda e: e.label))
    inconclusive = None
    if total_dim(d) <= DENSE_DIM_LIMIT:
        inconclusive = _inconclusive_complement(d, elements)
    return Povm(d, elements, inconclusive)
