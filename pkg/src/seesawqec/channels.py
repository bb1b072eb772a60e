"""Quantum channels in Kraus and Choi form, and the channel fidelity.

A :class:`Channel` is a completely positive trace-preserving map stored
as Kraus operators.  The Choi matrix uses the unnormalized convention
``C = sum_ij T(|i><j|) (x) |i><j|`` with the *output* factor first, so
``tr C = d_in`` and trace preservation reads "partial trace over the
output factor equals the identity".

With row-major flattening of a Kraus operator ``K`` (output index most
significant) the Choi matrix is simply ``sum_k ravel(K_k) ravel(K_k)^dag``,
which is what the constructors below use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from .linalg import as_matrix, herm_eig, kron_all, partial_trace

COMPLETENESS_TOL = 1e-9
CHOI_TOL = 1e-9


@dataclass(frozen=True)
class Channel:
    """A CPTP map held as a nonempty tuple of Kraus operators.

    Every Kraus operator has shape ``(d_out, d_in)`` and the set
    satisfies the completeness relation ``sum_k K_k^dag K_k = I`` within
    ``COMPLETENESS_TOL``.
    """

    kraus: Tuple[np.ndarray, ...]

    def __init__(self, kraus: Sequence[np.ndarray]):
        ops = tuple(as_matrix(k) for k in kraus)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        for k in ops:
            if k.shape != shape:
                raise ValueError(f"Kraus shapes differ: {k.shape} vs {shape}")
        s = sum(k.conj().T @ k for k in ops)
        dev = np.max(np.abs(s - np.eye(shape[1])))
        if dev > COMPLETENESS_TOL:
            raise ValueError(f"Kraus completeness violated: deviation {dev:.3e}")
        object.__setattr__(self, "kraus", ops)

    @property
    def d_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def d_out(self) -> int:
        return self.kraus[0].shape[0]


@dataclass(frozen=True)
class ChoiMatrix:
    """Choi matrix of a channel, unnormalized (trace = d_in), output factor first."""

    matrix: np.ndarray
    d_in: int
    d_out: int

    def validate(self, tol: float = CHOI_TOL) -> None:
        m = self.matrix
        side = self.d_in * self.d_out
        if m.shape != (side, side):
            raise ValueError(f"Choi side {m.shape} inconsistent with dims "
                             f"({self.d_out}, {self.d_in})")
        dev = np.max(np.abs(m - m.conj().T))
        if dev > tol:
            raise ValueError(f"Choi matrix not Hermitian: deviation {dev:.3e}")
        w = np.linalg.eigvalsh((m + m.conj().T) / 2)
        if w[0] < -tol:
            raise ValueError(f"Choi matrix not PSD: eigenvalue {w[0]:.3e}")
        pt = partial_trace(m, (self.d_out, self.d_in), keep=(1,))
        dev = np.max(np.abs(pt - np.eye(self.d_in)))
        if dev > tol:
            raise ValueError(f"Choi trace-preservation violated: deviation {dev:.3e}")


def identity_channel(d: int) -> Channel:
    return Channel([np.eye(d)])


def amplitude_damping(gamma: float) -> Channel:
    """Qubit damping channel with decay probability ``gamma``.

    Kraus operators: ``K0 = diag(1, sqrt(1-gamma))`` and ``K1`` with the
    single entry ``sqrt(gamma)`` at (0, 1).
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"damping parameter must lie in [0, 1], got {gamma}")
    k0 = np.diag([1.0, np.sqrt(1.0 - gamma)]).astype(complex)
    k1 = np.zeros((2, 2), dtype=complex)
    k1[0, 1] = np.sqrt(gamma)
    return Channel([k0, k1])


def compose(first: Channel, then: Channel) -> Channel:
    """Sequential composition: ``first`` is applied first.

    The Kraus set is all products ``B_j A_i``; nothing is pruned.
    """
    if first.d_out != then.d_in:
        raise ValueError(f"cannot compose: first output dim {first.d_out} "
                         f"!= then input dim {then.d_in}")
    return Channel([b @ a for a in first.kraus for b in then.kraus])


def tensor_power(c: Channel, n: int) -> Channel:
    """n-fold tensor product of a channel with itself.

    Kraus operators are all n-fold Kronecker products of ``c``'s Kraus
    set, enumerated lexicographically with the first factor most
    significant.
    """
    if n < 1:
        raise ValueError(f"tensor power needs n >= 1, got {n}")
    if n == 1:
        return c
    import itertools
    ops = [kron_all(combo) for combo in itertools.product(c.kraus, repeat=n)]
    return Channel(ops)


def apply(c: Channel, rho) -> np.ndarray:
    """Act with the channel on a density matrix: sum_k K rho K^dag."""
    rho = as_matrix(rho)
    if rho.shape != (c.d_in, c.d_in):
        raise ValueError(f"state shape {rho.shape} does not match input dim {c.d_in}")
    out = np.zeros((c.d_out, c.d_out), dtype=complex)
    for k in c.kraus:
        out += k @ rho @ k.conj().T
    return out


def to_choi(c: Channel) -> ChoiMatrix:
    side = c.d_in * c.d_out
    m = np.zeros((side, side), dtype=complex)
    for k in c.kraus:
        u = k.ravel()
        m += np.outer(u, u.conj())
    return ChoiMatrix(m, d_in=c.d_in, d_out=c.d_out)


def from_choi(x: ChoiMatrix, rank_tol: float | None = None) -> Channel:
    """Extract a Kraus decomposition from a Choi matrix.

    Eigenvalues below ``rank_tol`` (default ``1e-12`` times the leading
    eigenvalue) are dropped.  The roundtrip ``to_choi(from_choi(x))``
    reproduces ``x`` within the dropped weight.
    """
    w, v = herm_eig(x.matrix)
    if w[-1] < -CHOI_TOL:
        raise ValueError(f"Choi matrix not PSD: eigenvalue {w[-1]:.3e}")
    if rank_tol is None:
        rank_tol = 1e-12 * max(w[0], 0.0)
    ops = []
    for lam, col in zip(w, v.T):
        if lam > rank_tol:
            ops.append(np.sqrt(lam) * col.reshape(x.d_out, x.d_in))
    if not ops:
        raise ValueError("Choi matrix has no eigenvalue above the rank tolerance")
    return Channel(ops)


def max_entangled_vector(d: int) -> np.ndarray:
    """Unit vector (1/sqrt(d)) sum_i |ii>."""
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0 / np.sqrt(d)
    return v


def channel_fidelity(c: Channel) -> float:
    """Overlap of the channel with the identity.

    Equals ``<Omega| (T (x) id)(|Omega><Omega|) |Omega>`` for a unit-norm
    maximally entangled ``Omega``; computed through the equivalent Kraus
    form ``(1/d^2) sum_k |tr K_k|^2``.
    """
    if c.d_in != c.d_out:
        raise ValueError(f"channel fidelity needs d_in == d_out, got "
                         f"{c.d_in} and {c.d_out}")
    d = c.d_in
    total = sum(abs(np.trace(k)) ** 2 for k in c.kraus)
    return float(total) / (d * d)
