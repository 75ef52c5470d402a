"""Running supremum of ``|cos(na) - cos(nb)|`` over integers ``n``.

When ``a``, ``b`` and ``2 pi`` are rationally independent the points
``(na, nb) mod 2 pi`` are dense in the torus, so the records climb to 2.

Phases are reduced in turns (units of ``2 pi``). Each frequency is carried
as a double-double ``x_hi + x_lo`` computed at high precision, and
``n * x_hi`` is split so that its leading part is an exact integer product.
The reduced phase of every ``n`` is then accurate to a few ulps for all
``n < 2**27``, with no accumulated drift.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DomainError
from .omega import convergents

N_MAX_LIMIT = 10**8
_SPLIT_BITS = 26
_CHUNK = 1 << 20


@dataclass
class RecordSequence:
    pairs: list  # (n, record) with strictly increasing record
    final_sup: float

    def to_tsv(self):
        lines = ["n\trecord_value"]
        lines += [f"{n}\t{v!r}" for n, v in self.pairs]
        return "\n".join(lines) + "\n"


def _turns(freq):
    """``freq / (2 pi) mod 1`` as a double-double ``(hi, lo)``."""
    with mpmath.workdps(60):
        x = mpmath.mpf(freq) / (2 * mpmath.pi)
        x -= mpmath.floor(x)
        hi = float(x)
        lo = float(x - hi)
    if hi >= 1.0:
        hi, lo = 0.0, 0.0
    return hi, lo


class _PhaseReducer:
    def __init__(self, freq):
        hi, lo = _turns(freq)
        scale = float(1 << _SPLIT_BITS)
        self.head = int(math.floor(hi * scale))  # hi = head / 2**26 + tail
        self.tail = hi - self.head / scale
        self.lo = lo

    def phase(self, n):
        """Fractional turns of ``n * freq / (2 pi)`` for an int64 array ``n``."""
        mask = (1 << _SPLIT_BITS) - 1
        exact = ((n * self.head) & mask).astype(float) / float(1 << _SPLIT_BITS)
        rest = n.astype(float) * self.tail + n.astype(float) * self.lo
        total = exact + (rest - np.floor(rest))
        return total - np.floor(total)


def phases(freq, n):
    """Reduced phases ``n * freq mod 2 pi`` in radians, in ``[0, 2 pi)``."""
    return 2.0 * np.pi * _PhaseReducer(freq).phase(np.asarray(n, dtype=np.int64))


def running_sup(a, b, n_max):
    """Records of ``max_{1<=k<=n} |cos(ka) - cos(kb)|`` for ``n <= n_max``."""
    if not (a > 0 and b > 0):
        raise DomainError("running_sup needs a > 0 and b > 0")
    if not 1 <= n_max <= N_MAX_LIMIT:
        raise DomainError(f"n_max must lie in [1, {N_MAX_LIMIT}]")
    ra, rb = _PhaseReducer(a), _PhaseReducer(b)
    pairs = []
    best = -1.0
    for start in range(1, n_max + 1, _CHUNK):
        n = np.arange(start, min(start + _CHUNK, n_max + 1), dtype=np.int64)
        vals = np.abs(np.cos(2.0 * np.pi * ra.phase(n)) - np.cos(2.0 * np.pi * rb.phase(n)))
        run = np.maximum.accumulate(vals)
        if run[-1] <= best:
            continue
        # first index of each strict increase of the running max above `best`
        prev = np.concatenate(([best], run[:-1]))
        for i in np.flatnonzero((run > prev) & (run > best)):
            pairs.append((int(n[i]), float(run[i])))
        best = float(run[-1])
    return RecordSequence(pairs, pairs[-1][1] if pairs else 0.0)


def convergent_boost(a, b, depth):
    """Candidate ``n`` values from the continued fraction of ``b / a``.

    Returns convergent denominators, numerators and the neighbouring sums
    and differences of consecutive denominators, sorted. Only an
    acceleration hint: :func:`running_sup` does not depend on it.
    """
    if not (a > 0 and b > 0):
        raise DomainError("convergent_boost needs a > 0 and b > 0")
    if not 1 <= depth <= 30:
        raise DomainError("depth must lie in [1, 30]")
    terms = list(convergents(b / a, depth))
    # drop the zeroth convergent unless the expansion ends there
    if len(terms) > 1:
        terms = terms[1:]
    qs = [q for _, _, q in terms]
    out = set(qs) | {p for _, p, _ in terms}
    out |= {q1 + q2 for q1, q2 in zip(qs, qs[1:])}
    out |= {abs(q2 - q1) for q1, q2 in zip(qs, qs[1:])}
    out.discard(0)
    return sorted(out)
