"""Scalar diagnostics of the identification measurement.

Everything here reduces to traces against the averaged density
operators: the confusion matrix, the overall success probability (by
two independent routes), the symmetric-pair block trace that underlies
the closed form, and a bundled verification report for the CLI.

Traces against the low-rank conclusive elements are computed as
scale * sum_k <v_k| rho |v_k> — no dense operator products.
"""

from dataclasses import dataclass

import numpy as np

from .detection import build_povm
from .state_ops import DENSE_DIM_LIMIT, build_rho
from .tensor_core import check_dim, total_dim

# Eigenvalues below this count as zero in rank/kernel decisions.
ZERO_EIG_TOL = 1e-8

EXACT_TOL = 1e-12
EIG_TOL = 1e-10


def closed_form_success(d):
    """Known optimum 1/((d+1) d**(d-1)) for the average success probability."""
    d = check_dim(d)
    return 1.0 / ((d + 1) * d ** (d - 1))


def _pair_sym_projector(d):
    """Dense symmetric-subspace projector on a single pair of qudits."""
    p = np.zeros((d * d, d * d))
    for i in range(d):
        p[i * d + i, i * d + i] = 1.0
    for i in range(d):
        for j in range(i + 1, d):
            a = i * d + j
            b = j * d + i
            p[a, a] += 0.5
            p[b, b] += 0.5
            p[a, b] += 0.5
            p[b, a] += 0.5
    return p


def sym_block_trace(d, k, kp):
    """Partial trace over the probe of a symmetric-projector block.

    Returns sum_i <i, k| P_sym |i, kp> on a qudit pair — the quantity
    that collapses the success-probability trace to a closed form.
    Equals (d+1)/2 when k == kp and 0 otherwise, independently of which
    reference qudit forms the pair with the probe.
    """
    d = check_dim(d)
    if not (0 <= k < d and 0 <= kp < d):
        raise ValueError(f"branch indices ({k}, {kp}) out of range 0..{d - 1}")
    p = _pair_sym_projector(d)
    return float(sum(p[i * d + k, i * d + kp] for i in range(d)))


@dataclass(frozen=True)
class ConfusionMatrix:
    """Outcome probabilities per prepared state.

    entries[n-1, m-1] = Tr(rho_n Pi_m) for conclusive outcomes m = 1..d;
    the last column is the inconclusive probability.  Rows sum to one;
    for the optimal measurement the off-diagonal conclusive entries
    vanish.
    """

    d: int
    entries: np.ndarray

    def __post_init__(self):
        d = check_dim(self.d)
        entries = np.array(self.entries, dtype=np.float64)
        if entries.shape != (d, d + 1):
            raise ValueError(f"expected shape {(d, d + 1)}, got {entries.shape}")
        entries.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "entries", entries)

    def row_sums(self):
        return self.entries.sum(axis=1)

    def diagonal(self):
        return np.diagonal(self.entries[:, : self.d]).copy()

    def inconclusive_column(self):
        return self.entries[:, self.d].copy()

    def max_offdiagonal(self):
        conclusive = self.entries[:, : self.d]
        off = conclusive[~np.eye(self.d, dtype=bool)]
        return float(np.max(np.abs(off)))


def confusion(povm, d):
    """Confusion matrix of the measurement against the averaged states."""
    d = check_dim(d)
    if povm.d != d:
        raise ValueError(f"measurement built for d={povm.d}, asked for d={d}")
    rhos = [build_rho(d, n) for n in range(1, d + 1)]
    entries = np.zeros((d, d + 1))
    for n, rho in enumerate(rhos, start=1):
        for elem in povm.elements:
            acc = 0.0
            for v in elem.vectors:
                acc += float(np.real(np.vdot(v.amps, rho.apply(v.amps))))
            entries[n - 1, elem.label - 1] = elem.scale * acc
        if povm.inconclusive is not None:
            prod = rho.mat @ povm.inconclusive.mat
            entries[n - 1, d] = float(prod.diagonal().sum().real)
        else:
            entries[n - 1, d] = 1.0 - entries[n - 1, :d].sum()
    return ConfusionMatrix(d, entries)


def success_probability(povm, d):
    """Average probability of a correct conclusive outcome, equal priors."""
    d = check_dim(d)
    if povm.d != d:
        raise ValueError(f"measurement built for d={povm.d}, asked for d={d}")
    total = 0.0
    for elem in povm.elements:
        rho = build_rho(d, elem.label)
        acc = 0.0
        for v in elem.vectors:
            acc += float(np.real(np.vdot(v.amps, rho.apply(v.amps))))
        total += elem.scale * acc
    return total / d


def success_from_weights(povm):
    """Success probability recomputed from per-branch element weights.

    Extracts each weight as <v| element |v> over the element's own
    vectors and normalizes by d**(d+2).  Independent of the trace route
    through the density operators, so the two serve as mutual checks on
    the low-rank bookkeeping.
    """
    d = povm.d
    total = 0.0
    for elem in povm.elements:
        for v in elem.vectors:
            total += elem.expectation(v.amps)
    return total / d ** (d + 2)


def _gram_deviation(povm):
    """Max deviation of the basis-vector Gram matrix from its target.

    Target: identity within each element, -1/d between same-branch
    vectors of different elements, zero across branches.
    """
    d = povm.d
    stacked = np.vstack([elem.matrix for elem in povm.elements])
    gram = stacked.conj() @ stacked.T
    cross = np.eye(d) + (-1.0 / d) * (np.ones((d, d)) - np.eye(d))
    target = np.kron(cross, np.eye(d))
    return float(np.max(np.abs(gram - target)))


def conclusive_sum_spectrum(d):
    """Exact eigenvalues (ascending) of the summed conclusive elements.

    Within each of the d excitation sectors the d basis vectors have the
    -1/d overlap family as their Gram matrix, whose eigenvalues are 1/d
    (on the sum of the vectors) and (d+1)/d (d-1 times); scaling by
    d/(d+1) gives 1/(d+1) once and 1 repeated d-1 times per sector, and
    zero on everything outside the sectors.
    """
    d = check_dim(d)
    return np.concatenate(
        [
            np.zeros(total_dim(d) - d * d),
            np.full(d, 1.0 / (d + 1)),
            np.ones(d * (d - 1)),
        ]
    )


def verify_report(d, povm=None):
    """Run the full battery of algebraic checks and bundle the results.

    Returns a JSON-ready dict; "failed_checks" lists the names of any
    checks that did not hold, and "ok" is their conjunction.  Requires
    a dimension small enough for dense eigensolves (d <= 4).
    """
    d = check_dim(d)
    if total_dim(d) > DENSE_DIM_LIMIT:
        raise ValueError(f"verification needs dense eigensolves; d={d} is too large")
    if povm is None:
        povm = build_povm(d)
    if povm.d != d:
        raise ValueError(f"measurement built for d={povm.d}, asked for d={d}")

    conf = confusion(povm, d)
    p_succ = success_probability(povm, d)
    p_closed = closed_form_success(d)
    p_weights = success_from_weights(povm)
    max_offdiag = conf.max_offdiagonal()
    max_row_dev = float(np.max(np.abs(conf.row_sums() - 1.0)))

    conclusive = np.zeros((total_dim(d), total_dim(d)), dtype=np.complex128)
    for elem in povm.elements:
        conclusive += elem.as_operator().to_dense()
    unknown = povm.inconclusive.to_dense()
    completeness_dev = float(
        np.max(np.abs(conclusive + unknown - np.eye(total_dim(d))))
    )
    min_eig_unknown = float(np.linalg.eigvalsh(unknown)[0])
    spectrum_dev = float(
        np.max(np.abs(np.linalg.eigvalsh(conclusive) - conclusive_sum_spectrum(d)))
    )

    gram_dev = _gram_deviation(povm)

    block_dev = 0.0
    half = (d + 1) / 2
    for k in range(d):
        for kp in range(d):
            want = half if k == kp else 0.0
            block_dev = max(block_dev, abs(sym_block_trace(d, k, kp) - want))

    checks = {
        "success_matches_closed_form": abs(p_succ - p_closed) <= EXACT_TOL,
        "success_weight_route_agrees": abs(p_succ - p_weights) <= EXACT_TOL,
        "no_misidentification": max_offdiag <= EXACT_TOL,
        "confusion_rows_normalized": max_row_dev <= EIG_TOL,
        "povm_completeness": completeness_dev <= EIG_TOL,
        "inconclusive_psd": min_eig_unknown >= -EIG_TOL,
        "conclusive_spectrum": spectrum_dev <= EIG_TOL,
        "gram_structure": gram_dev <= EXACT_TOL,
        "pair_block_trace": block_dev <= EXACT_TOL,
    }
    failed = sorted(name for name, ok in checks.items() if not ok)
    return {
        "d": d,
        "p_succ": p_succ,
        "p_succ_closed_form": p_closed,
        "p_succ_weight_route": p_weights,
        "max_offdiag": max_offdiag,
        "max_row_sum_dev": max_row_dev,
        "completeness_max_dev": completeness_dev,
        "min_eig_pi_unknown": min_eig_unknown,
        "conclusive_spectrum_dev": spectrum_dev,
        "gram_max_dev": gram_dev,
        "pair_block_trace_dev": block_dev,
        "gram_ok": checks["gram_structure"],
        "checks": checks,
        "failed_checks": failed,
        "ok": not failed,
    }
