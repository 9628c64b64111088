"""Sparse multivariate Laurent polynomials with valued coefficients."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._validation import check_int
from .errors import ConfigError, DimensionError

__all__ = ["Coefficient", "LaurentPolynomial"]


@dataclass(frozen=True)
class Coefficient:
    """A complex coefficient with a rational valuation (0 for plain constants).

    The valuation plays the role of the lowest exponent of a Puiseux series
    in t; ``norm`` is the induced non-archimedean absolute value.
    """

    value: complex
    valuation: Fraction = Fraction(0)

    @property
    def norm(self):
        return float(np.exp(-float(self.valuation)))


def _as_coefficient(c):
    if isinstance(c, Coefficient):
        return Coefficient(complex(c.value), Fraction(c.valuation))
    if isinstance(c, tuple) and len(c) == 2:
        return Coefficient(complex(c[0]), Fraction(c[1]))
    return Coefficient(complex(c))


class LaurentPolynomial:
    """P(z) = sum_I a_I z^I over finitely many integer exponent vectors I.

    Parameters
    ----------
    k : int
        Number of variables.
    terms : mapping
        Exponent vector (tuple of ints, or an int when k == 1) to a
        coefficient.  Coefficients may be numbers, ``(value, valuation)``
        pairs or :class:`Coefficient`.  Zero coefficients are dropped.
    """

    def __init__(self, k, terms):
        self.k = check_int(k, "k", minimum=1)
        clean = {}
        for exp, c in dict(terms).items():
            key = (int(exp),) if np.isscalar(exp) else tuple(int(e) for e in exp)
            if len(key) != self.k:
                raise DimensionError(f"exponent {exp!r} has length {len(key)}, expected {self.k}")
            coef = _as_coefficient(c)
            if not np.isfinite(coef.value):
                raise ConfigError(f"coefficient at {key} is not finite")
            if key in clean:
                coef = Coefficient(clean[key].value + coef.value, min(clean[key].valuation, coef.valuation))
            clean[key] = coef
        self.terms = {e: c for e, c in sorted(clean.items()) if c.value != 0}
        self._exps = np.array(list(self.terms), dtype=int).reshape(-1, self.k)
        self._coefs = np.array([c.value for c in self.terms.values()], dtype=complex)

    @classmethod
    def monomial(cls, exponent, coefficient=1.0):
        exponent = tuple(np.atleast_1d(exponent).astype(int))
        return cls(len(exponent), {exponent: coefficient})

    @property
    def exponents(self):
        return self._exps.copy()

    @property
    def coefficients(self):
        return self._coefs.copy()

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.k == other.k and self.terms == other.terms

    def __repr__(self):
        body = " + ".join(f"({c.value:g})*z^{list(e)}" for e, c in self.terms.items()) or "0"
        return f"LaurentPolynomial(k={self.k}: {body})"

    def __call__(self, z):
        """Evaluate at points ``z`` of shape (..., k) (nonzero complex)."""
        z = np.asarray(z, dtype=complex)
        if z.shape[-1] != self.k:
            raise DimensionError(f"points must have last axis {self.k}")
        return self.evaluate_log(np.log(z))

    def evaluate_log(self, w):
        """P at z = exp(w) for complex log-coordinates ``w`` of shape (..., k)."""
        w = np.asarray(w, dtype=complex)
        if self.is_zero():
            return np.zeros(w.shape[:-1], dtype=complex)
        return np.exp(w @ self._exps.T.astype(float)) @ self._coefs

    def on_torus(self, x, theta):
        """P(e^{x_1 + i theta_1}, ...) for a fixed radius vector and angles (m, k)."""
        return self.evaluate_log(np.asarray(x, dtype=float)[None, :] + 1j * np.asarray(theta, dtype=float))

    def translated(self, t):
        """Q with Q(e^{x}z) = P(e^{x+t}z): each a_I multiplied by e^{<I, t>}."""
        t = np.asarray(t, dtype=float)
        return LaurentPolynomial(
            self.k,
            {e: Coefficient(c.value * np.exp(np.dot(e, t)), c.valuation) for e, c in self.terms.items()},
        )

    def scaled(self, factor):
        return LaurentPolynomial(self.k, {e: Coefficient(c.value * factor, c.valuation) for e, c in self.terms.items()})

    def last_variable_span(self):
        """(min, max) exponent of the last variable over the support."""
        col = self._exps[:, -1]
        return int(col.min()), int(col.max())

    def last_variable_coefficients(self, w_outer):
        """Coefficients of P as a polynomial in the last variable.

        ``w_outer`` holds log-coordinates of the first k-1 variables, shape
        (m, k-1).  Returns ``(m_lo, C)`` where ``C[:, i]`` is the coefficient
        of z_k^(m_lo + i) at each outer point.
        """
        w_outer = np.asarray(w_outer, dtype=complex)
        m_lo, m_hi = self.last_variable_span()
        out = np.zeros((w_outer.shape[0], m_hi - m_lo + 1), dtype=complex)
        if self.k == 1:
            for e, c in zip(self._exps[:, 0], self._coefs):
                out[:, e - m_lo] += c
            return m_lo, out
        mono = np.exp(w_outer @ self._exps[:, :-1].T.astype(float)) * self._coefs
        for j, e in enumerate(self._exps[:, -1]):
            out[:, e - m_lo] += mono[:, j]
        return m_lo, out

    def to_json(self):
        terms = []
        for e, c in self.terms.items():
            item = {"exp": list(e), "re": float(c.value.real), "im": float(c.value.imag)}
            if c.valuation != 0:
                item["val"] = str(c.valuation)
            terms.append(item)
        return {"k": self.k, "terms": terms}

    @classmethod
    def from_json(cls, obj):
        try:
            terms = {}
            for t in obj["terms"]:
                terms[tuple(t["exp"])] = Coefficient(complex(t.get("re", 0.0), t.get("im", 0.0)), Fraction(t.get("val", "0")))
            return cls(obj["k"], terms)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed Laurent polynomial JSON: {exc}") from None
