"""Grothendieck classes of the braid operators on the matrix models.

``T_i 1_k`` is the class of the Rickard complex of the ``(E_i, F_i)`` pair,
for every ``i`` in ``0..n-1`` (``T_0`` uses the rotated ``E_0, F_0`` pair):

* ``lam = <k, alpha_i> >= 0``: ``sum_s (-1)^s v^s E^(s) F^(lam+s)``
* ``lam <= 0``: ``(-1)^lam v^-lam sum_s (-1)^s v^s F^(s) E^(-lam+s)``

where ``v`` is the class of ``<1>``. ``T'_i 1_k = T_i 1_k [k_i]<-k_i>``,
reading ``k_0`` as ``k_n``.
"""

from __future__ import annotations

from .kmodel import KModel, ModelConfig, Operator
from .qlaurent import ONE, LaurentPoly
from .weightlat import ConfigMismatch, Weight, eta, pairing, reflect, root, rotate

__all__ = ["BraidModel", "PreconditionViolated"]


class PreconditionViolated(ValueError):
    pass


class BraidModel:
    """Braid, rotation and highest-weight loop operators on top of a :class:`KModel`."""

    def __init__(self, model: KModel | ModelConfig):
        self.k = model if isinstance(model, KModel) else KModel(model)
        self.cfg = self.k.cfg
        self.unit = self.k.unit
        self._cache: dict = {}

    @property
    def n(self) -> int:
        return self.cfg.n

    def _sign_unit(self, cohom: int, grade: int) -> LaurentPoly:
        """Class of ``[cohom]<grade>``."""
        u = self.unit ** grade
        return -u if cohom % 2 else u

    def lam(self, i: int, k: Weight) -> int:
        return pairing(k, root(i, self.n))

    def T(self, i: int, k: Weight) -> Operator:
        key = ("T", i, k.entries)
        op = self._cache.get(key)
        if op is not None:
            return op
        K = self.k
        lam = self.lam(i, k)
        target = reflect(k, i)
        out = K.zero(k, target)
        N = self.cfg.N
        for s in range(0, N + abs(lam) + 1):
            if lam >= 0:
                first = K.F(i, k, lam + s)
                if first.shape[0] == 0:
                    break
                term = K.E(i, first.target, s) @ first
            else:
                first = K.E(i, k, -lam + s)
                if first.shape[0] == 0:
                    break
                term = K.F(i, first.target, s) @ first
            out = out + term.scale(self._sign_unit(s, s))
        if lam < 0:
            out = out.scale(self._sign_unit(lam, -lam))
        self._cache[key] = out
        return out

    def T_inv(self, i: int, k: Weight) -> Operator:
        """``T_i^-1 1_k``: the exact inverse of ``T_i 1_{s_i k}``."""
        key = ("Tinv", i, k.entries)
        op = self._cache.get(key)
        if op is None:
            op = self.T(i, reflect(k, i)).inverse()
            assert op.source == k
            self._cache[key] = op
        return op

    def prime_unit(self, i: int, k: Weight) -> LaurentPoly:
        """Class of ``[k_i]<-k_i>`` with ``k_0 = k_n``."""
        ki = k[i - 1] if i > 0 else k[self.n - 1]
        return self._sign_unit(ki, -ki)

    def Tprime(self, i: int, k: Weight) -> Operator:
        return self.T(i, k).scale(self.prime_unit(i, k))

    def Tprime_inv(self, i: int, k: Weight) -> Operator:
        # inverse of T'_i 1_{s_i k}
        src = reflect(k, i)
        return self.T_inv(i, k).scale(self.prime_unit(i, src) ** -1)

    def word(self, letters: list[tuple[str, int]], k: Weight) -> Operator:
        """Compose braid letters right-to-left; letters are ``("T"|"Ti"|"Tp"|"Tpi", i)``."""
        op = self.k.identity(k)
        cur = k
        for name, i in reversed(letters):
            fn = {"T": self.T, "Ti": self.T_inv, "Tp": self.Tprime, "Tpi": self.Tprime_inv}[name]
            step = fn(i, cur)
            op = step @ op
            cur = step.target
        return op

    # -- rotation ----------------------------------------------------------------

    def canonical_identification(self, k: Weight) -> tuple[Operator, Weight]:
        """Move a zero into the last slot with shifted braids ``T'_i``.

        The smallest-index zero is moved rightward one slot at a time. Returns
        the composite ``K(k) -> K(k')`` and ``k'``; the identity when ``k_n = 0``.
        """
        n = self.n
        op = self.k.identity(k)
        cur = k
        if cur[n - 1] == 0:
            return op, cur
        zeros = [s for s in range(n) if cur[s] == 0]
        if not zeros:
            raise PreconditionViolated(f"weight {k} has no zero entry to move into the last slot")
        s = zeros[0]
        # swap slots (s, s+1) via T'_{s+1}
        while s < n - 1:
            step = self.Tprime(s + 1, cur)
            op = step @ op
            cur = step.target
            s += 1
        return op, cur

    def Rprime(self, k: Weight) -> Operator:
        """``R' 1_k = T'_{n-2} ... T'_1 T'_0 1_k`` (requires ``k_n = 0``)."""
        if k[self.n - 1] != 0:
            raise PreconditionViolated(f"R' needs a zero in the last slot of {k}; use canonical_identification")
        key = ("R", k.entries)
        op = self._cache.get(key)
        if op is None:
            op = self.word([("Tp", i) for i in range(self.n - 2, 0, -1)] + [("Tp", 0)], k)
            assert op.target == rotate(k), (op.target, rotate(k))
            self._cache[key] = op
        return op

    # -- loops at the highest weight ---------------------------------------------

    def A(self, ell: int) -> Operator:
        """``A^(ell) 1_eta``: ``F_0^(l) F_1^(l) ... F_{n-1}^(l)`` or ``E_{n-1}^(-l) ... E_0^(-l)``."""
        n, N = self.n, self.cfg.N
        if not -N <= ell <= N:
            raise ValueError(f"A^({ell}) needs -N <= ell <= N")
        key = ("A", ell)
        op = self._cache.get(key)
        if op is not None:
            return op
        h = eta(n, N)
        op = self.k.identity(h)
        cur = h
        if ell > 0:
            order = [("F", i) for i in range(n - 1, 0, -1)] + [("F", 0)]
        elif ell < 0:
            order = [("E", 0)] + [("E", i) for i in range(1, n)]
        else:
            order = []
        for kind, i in order:
            step = self.k.divided_power(kind, i, abs(ell), cur)
            op = step @ op
            cur = step.target
        if cur != h:
            raise ConfigMismatch(f"A^({ell}) does not return to eta")
        self._cache[key] = op
        return op
