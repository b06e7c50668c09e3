"""The effective translation of ring formulas into Boolean-algebra conditions.

translate() turns a first-order ring formula into a pair (psi; theta_0 ..
theta_m): a Boolean-algebra formula plus a partition sequence of ring
formulas, such that satisfaction of the source formula in a ring R is
equivalent to B satisfying psi at the Boolean values of the cells.  The
recursion handles equations, negation, conjunction and the existential
quantifier; everything else is erased by canonicalize() first.

The construction is uniform: it depends only on the source formula, never
on a ring, so results are cached and reused across rings.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from .boolalg import _beval, idempotent_algebra, phi_star
from .formula import (And, BAnd, BEq, BNot, BVar, Eq, Exists, Join, Not,
                      RingFormula, TOP, canonicalize, format_ring_formula,
                      free_variables, quantifier_depth, substitute_bool)
from .rings import FiniteRing
from .semantics import StalkValueCache, eval_direct


def _cell_report(estimate: int) -> str:
    if estimate > 10**9:
        return f"2^{estimate.bit_length() - 1}"
    return str(estimate)


class TranslationDepthError(ValueError):
    def __init__(self, formula, depth, max_depth, estimate):
        super().__init__(
            f"quantifier depth {depth} exceeds the cap {max_depth}; "
            f"translation would have about {_cell_report(estimate)} cells")
        self.depth = depth
        self.max_depth = max_depth
        self.estimated_cells = estimate


class TranslationSizeError(ValueError):
    """Depth alone does not bound the blowup: an existential over an
    n-cell core yields 2^n cells, and conjunction multiplies cell counts
    before the exponentiation, so a separate cell cap is enforced."""

    def __init__(self, formula, max_cells, estimate):
        super().__init__(
            f"translation would have about {_cell_report(estimate)} cells, "
            f"beyond the cap {max_cells}")
        self.max_cells = max_cells
        self.estimated_cells = estimate


@dataclass(frozen=True)
class TraceStep:
    op: str
    cell_count: int


@dataclass(frozen=True)
class AcceptableSequence:
    """A Boolean-algebra formula read at the Boolean values of ring cells."""

    bool_formula: object
    cells: tuple

    def __post_init__(self):
        fv = free_variables(self.bool_formula)
        if any(v >= len(self.cells) for v in fv):
            raise ValueError("arity mismatch: psi mentions variables beyond the cells")

    @property
    def arity(self) -> int:
        return len(self.cells)

    @property
    def standard(self) -> bool:
        """Whether the cells' free variables are exactly x0..xk for some k."""
        fv = set()
        for c in self.cells:
            fv |= free_variables(c)
        return bool(fv) and fv == set(range(max(fv) + 1))


@dataclass(frozen=True)
class TranslationResult:
    source: RingFormula
    sequence: AcceptableSequence
    trace: tuple

    @property
    def bool_formula(self):
        return self.sequence.bool_formula

    @property
    def cells(self) -> tuple:
        return self.sequence.cells

    def to_json(self) -> dict:
        return {
            "source": format_ring_formula(self.source),
            "psi": str(self.bool_formula),
            "cells": [format_ring_formula(c) for c in self.cells],
            "cell_count": len(self.cells),
            "trace": [{"op": s.op, "cells": s.cell_count} for s in self.trace],
        }


def _estimate_cells(f) -> int:
    if isinstance(f, Eq):
        return 2
    if isinstance(f, Not):
        return _estimate_cells(f.body)
    if isinstance(f, And):
        return _estimate_cells(f.left) * _estimate_cells(f.right)
    return 1 << _estimate_cells(f.body)  # Exists


def normalize_to_partition(bool_formula, cells) -> AcceptableSequence:
    """Repair an acceptable sequence into one whose cells form a partition.

    This is the disjunctive-normal-form construction with the input cells
    as the propositional variables: output cell k is the sign pattern of
    the inputs given by the bits of k (bit l set means cell l positive),
    and the formula is rewritten over the joins of the matching patterns.
    The output cells are pairwise contradictory and jointly exhaustive by
    propositional logic alone, hence a partition sequence.
    """
    cells = tuple(cells)
    m = len(cells) - 1
    if m < 0:
        raise ValueError("need at least one cell")
    if any(v > m for v in free_variables(bool_formula)):
        raise ValueError(f"arity mismatch: psi mentions variables beyond v0..v{m}")
    out = []
    for k in range(1 << (m + 1)):
        conj = None
        for l in range(m + 1):
            lit = cells[l] if k >> l & 1 else Not(cells[l])
            conj = lit if conj is None else And(conj, lit)
        out.append(conj)
    mapping = {}
    for l in range(m + 1):
        ks = [k for k in range(1 << (m + 1)) if k >> l & 1]
        mapping[l] = _balanced_join(ks)
    return AcceptableSequence(substitute_bool(bool_formula, mapping), tuple(out))


def _balanced_join(indices):
    # balanced, not left-nested: the joins can span thousands of variables
    if len(indices) == 1:
        return BVar(indices[0])
    half = len(indices) // 2
    return Join(_balanced_join(indices[:half]), _balanced_join(indices[half:]))


def _translate(f):
    if isinstance(f, Eq):
        return BEq(BVar(0), TOP), (f, Not(f)), (TraceStep("atomic", 2),)
    if isinstance(f, Not):
        psi, cells, trace = _translate(f.body)
        return BNot(psi), cells, trace + (TraceStep("not", len(cells)),)
    if isinstance(f, And):
        psi_l, cl, tl = _translate(f.left)
        psi_r, cr, tr = _translate(f.right)
        a, b = len(cl), len(cr)
        cells = tuple(And(x, y) for x in cl for y in cr)
        rows = {}
        for i in range(a):
            join = None
            for j in range(b):
                v = BVar(i * b + j)
                join = v if join is None else Join(join, v)
            rows[i] = join
        cols = {}
        for j in range(b):
            join = None
            for i in range(a):
                v = BVar(i * b + j)
                join = v if join is None else Join(join, v)
            cols[j] = join
        psi = BAnd(substitute_bool(psi_l, rows), substitute_bool(psi_r, cols))
        return psi, cells, tl + tr + (TraceStep("and", a * b),)
    if isinstance(f, Exists):
        psi0, cells0, trace0 = _translate(f.body)
        candidates = tuple(Exists(f.var, c) for c in cells0)
        seq = normalize_to_partition(phi_star(psi0, len(cells0) - 1), candidates)
        return seq.bool_formula, seq.cells, trace0 + (TraceStep("exists", len(seq.cells)),)
    raise TypeError(f"not a canonical ring formula: {f!r}")


DEFAULT_MAX_CELLS = 4096


@functools.lru_cache(maxsize=None)
def translate(formula: RingFormula, max_quantifier_depth: int = 3,
              max_cells: int = DEFAULT_MAX_CELLS) -> TranslationResult:
    """Translate a ring formula; canonicalizes first, size-guarded."""
    canonical = canonicalize(formula)
    depth = quantifier_depth(canonical)
    estimate = _estimate_cells(canonical)
    if depth > max_quantifier_depth:
        raise TranslationDepthError(formula, depth, max_quantifier_depth, estimate)
    if estimate > max_cells:
        raise TranslationSizeError(formula, max_cells, estimate)
    psi, cells, trace = _translate(canonical)
    return TranslationResult(formula, AcceptableSequence(psi, cells), trace)


class FvEvaluator:
    """Evaluates one translation on one ring, with transparent caching.

    Cell values go through a StalkValueCache; psi verdicts are memoized
    per tuple of cell values.  Results are identical to composing
    boolean_value_batch with eval_bool_formula; a test pins that.
    """

    def __init__(self, ring: FiniteRing, translation: TranslationResult):
        self.ring = ring
        self.translation = translation
        self.algebra = idempotent_algebra(ring)
        self._cache = StalkValueCache(ring, translation.cells)
        self.full = self._cache.full
        self._psi_memo = {}

    def cell_masks(self, env) -> tuple:
        """Boolean values of all cells at env, as atom masks."""
        return self._cache.masks(env)

    def evaluate_masks(self, masks) -> bool:
        hit = self._psi_memo.get(masks)
        if hit is None:
            hit = _beval(self.translation.bool_formula, dict(enumerate(masks)), self.full)
            self._psi_memo[masks] = hit
        return hit

    def evaluate(self, env) -> bool:
        return self.evaluate_masks(self.cell_masks(env))

    def masks_form_partition(self, masks) -> bool:
        return self._cache.masks_form_partition(masks)


def eval_via_fv(ring: FiniteRing, formula: RingFormula, env=None,
                max_quantifier_depth: int = 3) -> bool:
    """Satisfaction computed through the translation instead of directly."""
    evaluator = FvEvaluator(ring, translate(formula, max_quantifier_depth))
    return evaluator.evaluate(dict(env) if env else {})


@dataclass(frozen=True)
class SweepMismatch:
    formula: str
    assignment: dict
    direct: bool
    via_fv: bool


@dataclass(frozen=True)
class SweepReport:
    ring: str
    formulas: int
    instances: int
    mismatches: tuple
    partition_failures: tuple

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.partition_failures

    def to_json(self) -> dict:
        return {
            "ring": self.ring,
            "formulas": self.formulas,
            "instances": self.instances,
            "mismatches": [vars(m) | {"assignment": {f"x{k}": repr(v) for k, v in m.assignment.items()}}
                           for m in self.mismatches],
            "partition_failures": list(self.partition_failures),
            "ok": self.ok,
        }


def oracle_sweep(ring: FiniteRing, formulas, max_quantifier_depth: int = 3,
                 collect_limit: int = 20) -> SweepReport:
    """Compare eval_via_fv against eval_direct over all assignments.

    Also checks, on every instance, that the Boolean values of the
    translation's cells form a partition of the algebra.
    """
    mismatches = []
    partition_failures = []
    instances = 0
    formulas = tuple(formulas)
    for f in formulas:
        ev = FvEvaluator(ring, translate(f, max_quantifier_depth))
        fv = sorted(free_variables(f))
        for vals in itertools.product(ring.elements, repeat=len(fv)):
            env = dict(zip(fv, vals))
            instances += 1
            masks = ev.cell_masks(env)
            via = ev.evaluate_masks(masks)
            direct = eval_direct(ring, f, env)
            if via != direct and len(mismatches) < collect_limit:
                mismatches.append(SweepMismatch(format_ring_formula(f), env, direct, via))
            if not ev.masks_form_partition(masks) and len(partition_failures) < collect_limit:
                partition_failures.append(f"{format_ring_formula(f)} at {env}")
    return SweepReport(ring.label, len(formulas), instances,
                       tuple(mismatches), tuple(partition_failures))
