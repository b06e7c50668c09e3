"""The Boolean algebra of idempotents and evaluation of Boolean formulas.

The finite algebra is atomic, so the map sending an idempotent to the set
of atoms below it is an isomorphism onto the powerset of the atoms.
eval_bool_formula works on that powerset picture (bitmask per element);
tests pin it against the ring-operation reading of the same formulas.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .formula import (And, BAnd, BEq, BExists, BForall, BImplies, BNot, BOr,
                      Bot, BoolFormula, BoolTerm, BVar, Complement, Eq, Exists,
                      Forall, Implies, Join, Meet, Mul, Not, ONE, Or,
                      RingFormula, Top, Var, ZERO, free_variables, leq,
                      max_var_index, partition_conditions, substitute_bool,
                      Add, Sub)
from .rings import FiniteRing, atoms, idempotents
from .semantics import UnboundVariableError

_MISSING = object()


class IdempotentAlgebra:
    """The algebra B of idempotents of a ring, with the derived operations."""

    def __init__(self, ring: FiniteRing):
        self.ring = ring
        self.carrier = idempotents(ring)
        self.atoms = atoms(ring)
        self.bot = ring.zero
        self.top = ring.one
        mask_of = {}
        for f in self.carrier:
            m = 0
            for i, e in enumerate(self.atoms):
                if ring.mul(e, f) == e:
                    m |= 1 << i
            mask_of[f] = m
        if len(set(mask_of.values())) != len(self.carrier) or \
                len(self.carrier) != 1 << len(self.atoms):
            raise ValueError(f"idempotents of {ring.label} do not form "
                             "an atomic Boolean algebra")  # unreachable for genuine rings
        self._mask_of = mask_of
        self._of_mask = {m: f for f, m in mask_of.items()}

    @property
    def size(self) -> int:
        return len(self.carrier)

    def meet(self, e, f):
        return self.ring.mul(e, f)

    def join(self, e, f):
        return self.ring.join_idempotents(e, f)

    def complement(self, e):
        return self.ring.complement_idempotent(e)

    def below(self, e, f) -> bool:
        return self.ring.mul(e, f) == e

    def atom_mask(self, e) -> int:
        try:
            return self._mask_of[e]
        except KeyError:
            raise ValueError(f"{e} is not an idempotent of {self.ring.label}") from None

    def element_of_mask(self, mask: int):
        return self._of_mask[mask]

    def __repr__(self):
        return f"<IdempotentAlgebra of {self.ring.label}, {self.size} elements>"


@functools.lru_cache(maxsize=None)
def idempotent_algebra(ring: FiniteRing) -> IdempotentAlgebra:
    return IdempotentAlgebra(ring)


def boolean_ring_ops(algebra: IdempotentAlgebra, x, y) -> tuple:
    """The equivalent Boolean ring structure: (x xor y, x and y)."""
    xor = algebra.join(algebra.meet(x, algebra.complement(y)),
                       algebra.meet(algebra.complement(x), y))
    return xor, algebra.meet(x, y)


def _term_mask(t, menv, full):
    if isinstance(t, BVar):
        try:
            return menv[t.index]
        except KeyError:
            raise UnboundVariableError(f"unbound variable y{t.index}") from None
    if isinstance(t, Bot):
        return 0
    if isinstance(t, Top):
        return full
    if isinstance(t, Complement):
        return full ^ _term_mask(t.body, menv, full)
    l = _term_mask(t.left, menv, full)
    r = _term_mask(t.right, menv, full)
    if isinstance(t, Meet):
        return l & r
    if isinstance(t, Join):
        return l | r
    raise TypeError(f"not a Boolean term: {t!r}")


def _beval(f, menv, full):
    if isinstance(f, BEq):
        return _term_mask(f.left, menv, full) == _term_mask(f.right, menv, full)
    if isinstance(f, BNot):
        return not _beval(f.body, menv, full)
    if isinstance(f, BAnd):
        return _beval(f.left, menv, full) and _beval(f.right, menv, full)
    if isinstance(f, BOr):
        return _beval(f.left, menv, full) or _beval(f.right, menv, full)
    if isinstance(f, BImplies):
        return not _beval(f.left, menv, full) or _beval(f.right, menv, full)
    if isinstance(f, (BExists, BForall)):
        want = isinstance(f, BExists)
        var, body = f.var, f.body
        saved = menv.get(var, _MISSING)
        result = not want
        for mask in range(full + 1):
            menv[var] = mask
            if _beval(body, menv, full) == want:
                result = want
                break
        if saved is _MISSING:
            del menv[var]
        else:
            menv[var] = saved
        return result
    raise TypeError(f"not a Boolean formula: {f!r}")


def eval_bool_formula(algebra: IdempotentAlgebra, formula: BoolFormula, env=None) -> bool:
    """Satisfaction in B; quantifiers range over the whole finite carrier."""
    env = env or {}
    missing = free_variables(formula) - env.keys()
    if missing:
        raise UnboundVariableError(f"unbound variable(s): y{sorted(missing)[0]} ...")
    full = (1 << len(algebra.atoms)) - 1
    menv = {i: algebra.atom_mask(v) for i, v in env.items()}
    return _beval(formula, menv, full)


def make_partition_formula(m: int) -> BoolFormula:
    """Part_{m+1}(y_0..y_m): the join is 1 and the pairwise meets are 0."""
    if m < 0:
        raise ValueError("m must be >= 0")
    return partition_conditions([BVar(i) for i in range(m + 1)])


def phi_star(phi: BoolFormula, m: int = None) -> BoolFormula:
    """The patching transform phi*(v_0..v_m).

    Asserts that some partition w_0..w_m refines the arguments cellwise
    (w_j <= v_j) with phi holding at the w's.  The w's get fresh indices
    above everything in phi.  m defaults to the largest free variable of
    phi; translate passes it explicitly because a cell sequence may be
    longer than the variables psi happens to mention.
    """
    fv = free_variables(phi)
    if m is None:
        if not fv:
            raise ValueError("phi is closed; pass m explicitly")
        m = max(fv)
    if any(v > m for v in fv):
        raise ValueError(f"free variables of phi exceed v0..v{m}")
    base = max(max_var_index(phi) + 1, m + 1)
    ws = [BVar(base + j) for j in range(m + 1)]
    body = partition_conditions(ws)
    for j, w in enumerate(ws):
        body = BAnd(body, leq(w, BVar(j)))
    body = BAnd(body, substitute_bool(phi, {j: w for j, w in enumerate(ws)}))
    for w in reversed(ws):
        body = BExists(w.index, body)
    return body


def _idempotence_guard(index: int) -> RingFormula:
    return Eq(Mul(Var(index), Var(index)), Var(index))


def _ring_term(t: BoolTerm):
    if isinstance(t, BVar):
        return Var(t.index)
    if isinstance(t, Bot):
        return ZERO
    if isinstance(t, Top):
        return ONE
    if isinstance(t, Complement):
        return Sub(ONE, _ring_term(t.body))
    l = _ring_term(t.left)
    r = _ring_term(t.right)
    if isinstance(t, Meet):
        return Mul(l, r)
    if isinstance(t, Join):
        return Sub(Add(l, r), Mul(l, r))
    raise TypeError(f"not a Boolean term: {t!r}")


def bool_to_ring_formula(f: BoolFormula) -> RingFormula:
    """Interpret a B-formula inside the ring language.

    Boolean operations expand to their ring definitions and every
    quantifier is relativized to idempotents by an x*x = x guard.
    """
    if isinstance(f, BEq):
        return Eq(_ring_term(f.left), _ring_term(f.right))
    if isinstance(f, BNot):
        return Not(bool_to_ring_formula(f.body))
    if isinstance(f, BAnd):
        return And(bool_to_ring_formula(f.left), bool_to_ring_formula(f.right))
    if isinstance(f, BOr):
        return Or(bool_to_ring_formula(f.left), bool_to_ring_formula(f.right))
    if isinstance(f, BImplies):
        return Implies(bool_to_ring_formula(f.left), bool_to_ring_formula(f.right))
    if isinstance(f, BExists):
        return Exists(f.var, And(_idempotence_guard(f.var), bool_to_ring_formula(f.body)))
    if isinstance(f, BForall):
        return Forall(f.var, Implies(_idempotence_guard(f.var), bool_to_ring_formula(f.body)))
    raise TypeError(f"not a Boolean formula: {f!r}")


@dataclass(frozen=True)
class Partition:
    """An ordered finite partition of the algebra; cells may be 0."""

    cells: tuple

    @classmethod
    def of(cls, algebra: IdempotentAlgebra, cells):
        cells = tuple(cells)
        if not is_partition(algebra, cells):
            raise ValueError(f"not a partition of {algebra.ring.label}: {cells}")
        return cls(cells)

    def to_json(self) -> list:
        return [c if isinstance(c, int) else str(c) for c in self.cells]


def is_partition(algebra: IdempotentAlgebra, cells) -> bool:
    """Join of the cells is 1 and pairwise meets are 0."""
    masks = [algebra.atom_mask(c) for c in cells]
    full = (1 << len(algebra.atoms)) - 1
    joined = 0
    for m in masks:
        if joined & m:
            return False
        joined |= m
    return joined == full
