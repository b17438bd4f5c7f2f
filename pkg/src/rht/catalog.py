"""Catalogs of fibrations over a fixed base, enumeration, and their posets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import AlgElement, GenSet, Monomial, basis_in_degree
from .errors import CombinatorialBlowup, FiberMismatch, NotClosed, NotFiniteAtBound
from .invariants import fibre_gottlieb, finiteness_window
from .model import RelativeModel, SullivanModel, _reexpress
from .poset import Poset, poset_of_subspaces


@dataclass
class Catalog:
    """A family of fibrations sharing one fiber model."""

    fiber: SullivanModel
    entries: list[tuple[str, RelativeModel]] = field(default_factory=list)
    source_paths: list[str] = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        for key, entry in self.entries:
            if key in seen:
                raise ValueError(f"duplicate catalog id {key!r}")
            seen.add(key)
            if (
                entry.fiber.gens != self.fiber.gens
                or entry.fiber.diff != self.fiber.diff
            ):
                raise FiberMismatch(f"catalog entry {key!r} has a different fiber")

    def realized_subspaces(
        self, window: int = 6, require_finite: bool = True
    ):
        """fibre_gottlieb total subspace per entry, after the finiteness gate."""
        offenders = []
        out = {}
        for key, entry in self.entries:
            if require_finite:
                finite, _, _ = finiteness_window(entry, window)
                if not finite:
                    offenders.append(key)
                    continue
            out[key] = fibre_gottlieb(entry).total()
        if offenders:
            raise NotFiniteAtBound(
                "total spaces failed the finiteness gate: " + ", ".join(offenders)
            )
        return out


def build_poset(
    c: Catalog, window: int = 6, require_finite: bool = True
) -> Poset:
    """Distinct realized fibre-restricted subspaces under inclusion, reduced."""
    return poset_of_subspaces(c.realized_subspaces(window, require_finite))


def enumerate_fibrations(
    fiber: SullivanModel,
    base: SullivanModel,
    coeff_set: Sequence = (0, 1),
    require_finite: bool = False,
    window: int = 6,
    cap: int = 10**6,
) -> Catalog:
    """All relative models D(w) = d(w) + sum c_m m over the given coefficients.

    Candidate monomials m have degree |w| + 1 and contain at least one base
    generator (base exponents are thereby forced by degree); assignments with
    D.D != 0 are discarded, and the finiteness gate is applied on request.
    """
    combined = GenSet(
        [(g.name, g.degree) for g in base.gens] + [(g.name, g.degree) for g in fiber.gens]
    )
    n_base = len(base.gens)
    slots: list[tuple[str, Monomial]] = []
    for w in fiber.gens:
        for mono in basis_in_degree(combined, w.degree + 1):
            if any(i < n_base for i, _ in mono.exponents):
                slots.append((w.name, mono))
    coeffs = sorted({Fraction(c) for c in coeff_set}, key=lambda c: (c != 0, c))
    if 0 not in [c for c in coeffs]:
        coeffs = [Fraction(0)] + coeffs
    total = len(coeffs) ** len(slots)
    if total > cap:
        raise CombinatorialBlowup(
            f"{total} candidate differentials exceed the cap of {cap}"
        )
    entries: list[tuple[str, RelativeModel]] = []
    for assignment in itertools.product(coeffs, repeat=len(slots)):
        total_diff: dict[str, AlgElement] = {
            g.name: _reexpress(fiber.diff[g.name], combined) for g in fiber.gens
            if g.name in fiber.diff
        }
        added: list[str] = []
        for (wname, mono), c in zip(slots, assignment):
            if not c:
                continue
            term = AlgElement.monomial(combined, mono, c)
            total_diff[wname] = total_diff.get(wname, AlgElement.zero(combined)) + term
        for (wname, mono), c in zip(slots, assignment):
            if c:
                coeff = "" if c == 1 else f"{c}*"
                added.append(f"D{wname}+={coeff}{mono.format(combined)}")
        key = "; ".join(added) if added else "trivial"
        try:
            entry = RelativeModel(
                base, fiber.gens, total_diff, fiber_diff=dict(fiber.diff), name=key,
                bound=fiber.bound,
            )
        except NotClosed:
            continue
        if require_finite:
            finite, _, _ = finiteness_window(entry, window)
            if not finite:
                continue
        entries.append((key, entry))
    return Catalog(fiber, entries)
