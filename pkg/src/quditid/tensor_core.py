"""Index arithmetic and product-state assembly for a (d+1)-qudit register.

The register holds one probe qudit (position 0) and d reference qudits
(positions 1..d), each of local dimension d, so the total Hilbert space
has dimension D = d**(d+1).  Flat basis indices are big-endian with the
probe digit most significant:

    flat = sum_j digits[j] * d**(d - j)
"""

import math
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12


def check_dim(d):
    """Validate the single-qudit dimension (= number of reference states)."""
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)):
        raise ValueError(f"dimension must be an integer, got {d!r}")
    d = int(d)
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    if d ** (d + 1) >= 2**62:
        raise ValueError(f"total dimension d**(d+1) overflows the index range for d={d}")
    return d


def total_dim(d):
    """Dimension D = d**(d+1) of the full (d+1)-qudit space."""
    d = check_dim(d)
    return d ** (d + 1)


def encode_index(digits, d):
    """Flat index of the basis vector with the given per-qudit digits.

    `digits` has length d+1; position 0 is the probe qudit and is the most
    significant digit.
    """
    d = check_dim(d)
    if len(digits) != d + 1:
        raise ValueError(f"expected {d + 1} digits, got {len(digits)}")
    flat = 0
    for x in digits:
        if not 0 <= x < d:
            raise ValueError(f"digit {x} out of range for dimension {d}")
        flat = flat * d + int(x)
    return flat


def decode_index(flat, d):
    """Per-qudit digits of a flat basis index (inverse of encode_index)."""
    D = total_dim(d)
    if not 0 <= flat < D:
        raise ValueError(f"flat index {flat} out of range for dimension {D}")
    digits = [0] * (d + 1)
    rest = int(flat)
    for j in range(d, -1, -1):
        rest, digits[j] = divmod(rest, d)
    return tuple(digits)


def total_excitation(digits):
    """Sum of the basis-label digits of a multi-qudit basis state."""
    return int(sum(digits))


def basis_ket(d, i):
    """Single-qudit computational basis state |i> as an amplitude vector."""
    d = check_dim(d)
    if not 0 <= i < d:
        raise ValueError(f"basis label {i} out of range for dimension {d}")
    v = np.zeros(d, dtype=np.complex128)
    v[i] = 1.0
    return v


def haar_state(d, rng):
    """Haar-random single-qudit pure state.

    Drawn as an i.i.d. standard complex Gaussian vector, normalized; the
    real parts are drawn before the imaginary parts.  Linear independence
    of repeated draws holds with probability 1 and is not checked.
    """
    d = check_dim(d)
    while True:
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        norm = np.linalg.norm(v)
        if norm > 0.0:
            return v / norm


@dataclass(frozen=True)
class StateVector:
    """Normalized pure state of the full (d+1)-qudit register.

    Immutable after construction; the amplitude buffer is copied and
    marked read-only so instances are safe to share across threads.
    """

    d: int
    amps: np.ndarray

    def __post_init__(self):
        d = check_dim(self.d)
        amps = np.array(self.amps, dtype=np.complex128, copy=True).reshape(-1)
        D = d ** (d + 1)
        if amps.shape != (D,):
            raise ValueError(f"expected {D} amplitudes for d={d}, got {amps.shape}")
        if abs(np.linalg.norm(amps) - 1.0) > NORM_TOL:
            raise ValueError("state vector is not normalized")
        amps.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self):
        return self.amps.shape[0]


def product_state(factors):
    """Tensor product of d+1 single-qudit states, probe factor first.

    Each factor must be a unit-norm amplitude vector of length d, where
    d+1 is the number of factors.
    """
    factors = [np.asarray(f, dtype=np.complex128) for f in factors]
    d = len(factors) - 1
    check_dim(d)
    for j, f in enumerate(factors):
        if f.shape != (d,):
            raise ValueError(f"factor {j} has shape {f.shape}, expected ({d},)")
        if abs(np.linalg.norm(f) - 1.0) > NORM_TOL:
            raise ValueError(f"factor {j} is not normalized")
    amps = factors[0]
    for f in factors[1:]:
        amps = np.kron(amps, f)
    return StateVector(d, amps)


def inner_product(a, b):
    """<a|b> with the first argument conjugated."""
    if a.d != b.d:
        raise ValueError(f"dimension mismatch: d={a.d} vs d={b.d}")
    return complex(np.vdot(a.amps, b.amps))


def state_to_dict(state):
    """JSON-ready form: {"d": int, "amps": [[re, im], ...]} in flat order."""
    return {
        "d": state.d,
        "amps": [[float(a.real), float(a.imag)] for a in state.amps],
    }


def state_from_dict(obj):
    """Rebuild a StateVector from its JSON form (validates normalization)."""
    amps = np.array([complex(re, im) for re, im in obj["amps"]], dtype=np.complex128)
    return StateVector(int(obj["d"]), amps)
