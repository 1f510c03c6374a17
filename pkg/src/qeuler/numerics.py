"""Compensated accumulation helpers.

Alternating q-series lose digits under naive forward summation, so every
series loop in this package funnels through :class:`KahanSum`
(Neumaier-style compensation, valid for float and complex terms alike).
"""

from __future__ import annotations


class KahanSum:
    """Running compensated sum; ``value`` returns the corrected total."""

    __slots__ = ("_s", "_c")

    def __init__(self, value=0.0):
        self._s = value
        self._c = value * 0

    def add(self, term) -> "KahanSum":
        s = self._s
        t = s + term
        if abs(s) >= abs(term):
            self._c += (s - t) + term
        else:
            self._c += (term - t) + s
        self._s = t
        return self

    @property
    def value(self):
        return self._s + self._c


def kahan_sum(terms):
    acc = KahanSum()
    for t in terms:
        acc.add(t)
    return acc.value
