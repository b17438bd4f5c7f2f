"""Gottlieb-type invariants assembled from the derivation complexes.

Everything here reduces to exact linear algebra: homology of the derivation
complexes, images of evaluation/restriction maps inside the dual coordinate
space Hom(W^n, Q), long-exact-sequence checks, bounded finiteness
certificates for torus actions, and depth of chains of realized subspaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .algebra import AlgElement
from .derivations import (
    ABSOLUTE,
    IDEAL,
    RELATIVE,
    ComplexSlice,
    Derivation,
    augmentation_matrix,
    boundary_matrix,
    der_basis,
    dual_frame,
    inclusion_matrix,
    restriction_matrix,
)
from .errors import BaseNotDegreeTwo, FiberMismatch, NotFiniteAtBound
from .linalg import HomologySlice, RatMatrix, Subspace, kernel
from .model import (
    RelativeModel,
    SullivanModel,
    cohomology,
    formal_dimension_estimate,
)

ModelLike = Union[SullivanModel, RelativeModel]


def _fiber_of(m: ModelLike) -> SullivanModel:
    return m.fiber if isinstance(m, RelativeModel) else m


def top_shift(m: ModelLike) -> int:
    """Largest shift with a possibly nonzero slice: the top generator degree."""
    return max(g.degree for g in _fiber_of(m).gens)


# ----------------------------------------------------------------------
# derivation homology


@dataclass
class DerHomology:
    dim: int
    slice: ComplexSlice
    representatives: list[tuple]  # coordinate vectors in the slice basis

    def derivations(self) -> list[Derivation]:
        out = []
        for vec in self.representatives:
            values: dict[int, AlgElement] = {}
            for i, c in enumerate(vec):
                if not c:
                    continue
                g, mono = self.slice.pairs[i]
                term = AlgElement.monomial(self.slice.value_gens, mono, c)
                values[g.index] = values.get(g.index, AlgElement.zero(self.slice.value_gens)) + term
            out.append(Derivation(self.slice.value_gens, self.slice.degree, values))
        return out


def _homology_at(m: ModelLike, n: int, scope: str) -> HomologySlice:
    return HomologySlice(boundary_matrix(m, n + 1, scope), boundary_matrix(m, n, scope))


def der_homology(m: ModelLike, n: int, scope: str = ABSOLUTE) -> DerHomology:
    """H_n of the chosen derivation complex, with representative cycles."""
    if n < 1:
        raise ValueError("derivation homology is computed for n >= 1")
    h = _homology_at(m, n, scope)
    return DerHomology(h.dim, der_basis(m, n, scope), list(h.representatives))


# ----------------------------------------------------------------------
# Gottlieb subspaces


@dataclass
class GottliebResult:
    """Per-degree subspaces of Hom(W^n, Q), with a joint graded ambient."""

    fiber: SullivanModel
    per_degree: dict[int, Subspace]
    provenance: str  # "absolute" or a fibration id

    def degree(self, n: int) -> Subspace:
        if n in self.per_degree:
            return self.per_degree[n]
        return Subspace(dual_frame(self.fiber, n))

    def dims(self) -> dict[int, int]:
        return {n: s.dim for n, s in self.per_degree.items() if s.dim}

    def total(self) -> Subspace:
        """Direct sum over degrees inside the full dual frame Hom(W, Q)."""
        frame = tuple(f"{g.name}*" for g in self.fiber.gens)
        pos = {f"{g.name}*": i for i, g in enumerate(self.fiber.gens)}
        vectors = []
        for n in sorted(self.per_degree):
            sub = self.per_degree[n]
            for row in sub.rows:
                vec = [0] * len(frame)
                for label, c in zip(sub.ambient, row):
                    vec[pos[label]] = c
                vectors.append(vec)
        return Subspace(frame, vectors)

    def basis_labels(self) -> list[str]:
        return self.total().basis_labels()


def _image_on_cycles(
    eval_matrix: RatMatrix,
    cycles: Subspace,
    boundaries_in: RatMatrix,
    frame: Sequence[str],
) -> Subspace:
    # the evaluation must kill boundaries, otherwise the image on cycles is
    # not well defined on homology; asserted on every run
    assert (eval_matrix @ boundaries_in).is_zero(), "evaluation does not kill boundaries"
    return Subspace(frame, [eval_matrix.apply(row) for row in cycles.rows])


def gottlieb(m: ModelLike, max_degree: Optional[int] = None) -> GottliebResult:
    """Image of evaluation on absolute derivation homology, per degree."""
    fiber = _fiber_of(m)
    top = max_degree if max_degree is not None else top_shift(m)
    per: dict[int, Subspace] = {}
    for n in range(1, top + 1):
        frame = dual_frame(fiber, n)
        if not frame:
            continue
        aug = augmentation_matrix(fiber, n)
        cycles = kernel(boundary_matrix(fiber, n, ABSOLUTE))
        per[n] = _image_on_cycles(aug, cycles, boundary_matrix(fiber, n + 1, ABSOLUTE), frame)
    return GottliebResult(fiber, per, "absolute")


def fibre_gottlieb(f: RelativeModel, max_degree: Optional[int] = None) -> GottliebResult:
    """Image of evaluation . restriction on relative derivation cycles."""
    top = max_degree if max_degree is not None else top_shift(f)
    per: dict[int, Subspace] = {}
    for n in range(1, top + 1):
        frame = dual_frame(f.fiber, n)
        if not frame:
            continue
        eval_res = augmentation_matrix(f, n) @ restriction_matrix(f, n)
        cycles = kernel(boundary_matrix(f, n, RELATIVE))
        per[n] = _image_on_cycles(
            eval_res, cycles, boundary_matrix(f, n + 1, RELATIVE), frame
        )
    return GottliebResult(f.fiber, per, f.name or "fibration")


def connecting_image(f: RelativeModel, n: int) -> Subspace:
    """Dual image of the linear base-generator part of D in Hom(W^n, Q).

    The linear part is the sum of length-one base-generator monomials in
    D(w); its transpose spans the rational image of the connecting map.
    """
    frame = dual_frame(f.fiber, n)
    fiber_gens_n = [g for g in f.fiber.gens if g.degree == n]
    vectors = []
    for v in f.base.gens:
        if v.degree != n + 1:
            continue
        total_v = f.total.gens.get(v.name)
        row = []
        for w in fiber_gens_n:
            dw = f.total.diff_of(w.name)
            coeff = 0
            for mono, c in dw.terms.items():
                if mono.exponents == ((total_v.index, 1),):
                    coeff = c
            row.append(coeff)
        vectors.append(row)
    return Subspace(frame, vectors)


def connecting_images(f: RelativeModel) -> dict[int, Subspace]:
    out = {}
    for n in range(1, top_shift(f) + 1):
        if dual_frame(f.fiber, n):
            out[n] = connecting_image(f, n)
    return out


# ----------------------------------------------------------------------
# long exact sequence of Remark-style ideal/relative/absolute complexes


@dataclass
class LesNodeReport:
    node: str  # e.g. "H_3(relative)"
    dim: int
    rank_in: int
    rank_out: int
    exact: bool


@dataclass
class LesReport:
    nodes: list[LesNodeReport] = field(default_factory=list)
    chain_level_ok: bool = True

    @property
    def exact(self) -> bool:
        return self.chain_level_ok and all(nd.exact for nd in self.nodes)


def _section_matrix(f: RelativeModel, n: int) -> RatMatrix:
    """Splitting of the restriction: absolute pairs seen as relative pairs."""
    src = der_basis(f, n, ABSOLUTE)
    tgt = der_basis(f, n, RELATIVE)
    tgt_index = tgt.index()
    entries = {}
    for j, (w, mono) in enumerate(src.pairs):
        total_mono = mono
        lifted = tuple((i + f.base_size, e) for i, e in mono.exponents)
        tw = f.total.gens.get(w.name)
        entries[(tgt_index[(tw.index, type(mono)(lifted))], j)] = 1
    return RatMatrix(tgt.dim, src.dim, entries)


def _induced(map_matrix: RatMatrix, h_src: HomologySlice, h_tgt: HomologySlice) -> RatMatrix:
    cols = [h_tgt.coords(map_matrix.apply(rep)) for rep in h_src.representatives]
    return RatMatrix(
        h_tgt.dim,
        h_src.dim,
        {
            (r, c): v
            for c, col in enumerate(cols)
            for r, v in enumerate(col)
            if v
        },
    )


def _rank(m: RatMatrix) -> int:
    from .linalg import rref

    return rref(m)[1]


def les_check(f: RelativeModel, degrees: Sequence[int]) -> LesReport:
    """Verify exactness of the ideal -> relative -> absolute homology sequence.

    Checks the degreewise short exact sequence of slices and, at every
    homology node inside the requested range, that the image of the incoming
    map equals the kernel of the outgoing one (composite zero + ranks add up).
    """
    degrees = sorted(degrees)
    lo, hi = degrees[0], degrees[-1]
    if lo < 1:
        raise ValueError("les_check needs degrees >= 1")
    report = LesReport()
    H = {}  # (scope, n) -> HomologySlice
    for n in range(max(1, lo - 1), hi + 2):
        for scope in (IDEAL, RELATIVE, ABSOLUTE):
            H[(scope, n)] = _homology_at(f, n, scope)
    # chain-level short exactness per degree
    for n in range(max(0, lo - 1), hi + 2):
        inc = inclusion_matrix(f, n)
        res = restriction_matrix(f, n)
        ok = (
            (res @ inc).is_zero()
            and _rank(res) == der_basis(f, n, ABSOLUTE).dim
            and der_basis(f, n, IDEAL).dim + der_basis(f, n, ABSOLUTE).dim
            == der_basis(f, n, RELATIVE).dim
        )
        report.chain_level_ok = report.chain_level_ok and ok

    def connecting(n: int) -> RatMatrix:
        """H_n(absolute) -> H_{n-1}(ideal) via lift, boundary, pull back."""
        h_abs = H[(ABSOLUTE, n)]
        h_id = H[(IDEAL, n - 1)]
        section = _section_matrix(f, n)
        delta = boundary_matrix(f, n, RELATIVE)
        inc = inclusion_matrix(f, n - 1)
        ideal_index = {
            (w.index, m): i for i, (w, m) in enumerate(der_basis(f, n - 1, IDEAL).pairs)
        }
        rel_pairs = der_basis(f, n - 1, RELATIVE).pairs
        cols = []
        for rep in h_abs.representatives:
            chain = delta.apply(section.apply(rep))
            ideal_vec = [0] * len(ideal_index)
            for i, c in enumerate(chain):
                if not c:
                    continue
                w, m = rel_pairs[i]
                key = (w.index, m)
                assert key in ideal_index, "boundary of a lifted cycle left the ideal"
                ideal_vec[ideal_index[key]] = c
            cols.append(h_id.coords(ideal_vec))
        return RatMatrix(
            h_id.dim,
            h_abs.dim,
            {(r, c): v for c, col in enumerate(cols) for r, v in enumerate(col) if v},
        )

    for n in degrees:
        i_star = _induced(inclusion_matrix(f, n), H[(IDEAL, n)], H[(RELATIVE, n)])
        j_star = _induced(restriction_matrix(f, n), H[(RELATIVE, n)], H[(ABSOLUTE, n)])
        # node H_n(relative): image(i) = kernel(j)
        dim_r = H[(RELATIVE, n)].dim
        exact_r = (j_star @ i_star).is_zero() and _rank(i_star) + _rank(j_star) == dim_r
        report.nodes.append(
            LesNodeReport(f"H_{n}(relative)", dim_r, _rank(i_star), _rank(j_star), exact_r)
        )
        # node H_n(ideal): image(connecting from n+1) = kernel(i)
        if n + 1 <= hi + 1:
            d_in = connecting(n + 1)
            dim_i = H[(IDEAL, n)].dim
            exact_i = (i_star @ d_in).is_zero() and _rank(d_in) + _rank(i_star) == dim_i
            report.nodes.append(
                LesNodeReport(f"H_{n}(ideal)", dim_i, _rank(d_in), _rank(i_star), exact_i)
            )
        # node H_n(absolute): image(j) = kernel(connecting to n-1)
        if n >= 2:
            d_out = connecting(n)
            dim_a = H[(ABSOLUTE, n)].dim
            exact_a = (d_out @ j_star).is_zero() and _rank(j_star) + _rank(d_out) == dim_a
            report.nodes.append(
                LesNodeReport(f"H_{n}(absolute)", dim_a, _rank(j_star), _rank(d_out), exact_a)
            )
    return report


# ----------------------------------------------------------------------
# toral-rank certificates


@dataclass
class ToralCertificate:
    r: int
    finite_through: int
    verdict: str  # "certified" | "refuted-at-bound" | "inconclusive"
    top_nonzero: Optional[int] = None


def finiteness_window(
    model: ModelLike, window: int = 6
) -> tuple[bool, Optional[int], dict[int, tuple[int, list[AlgElement]]]]:
    """Bounded finiteness test: does H vanish on (fd, fd + window]?"""
    total = model.total if isinstance(model, RelativeModel) else model
    fd = formal_dimension_estimate(total.gens)
    if fd is None:
        return False, None, {}
    coh = cohomology(total, fd + window)
    finite = all(coh[n][0] == 0 for n in range(fd + 1, fd + window + 1))
    return finite, fd, coh


def toral_certificate(f: RelativeModel, window: int = 6) -> ToralCertificate:
    """Bounded certificate that the fiber admits an almost-free torus action.

    Needs every base generator in degree 2 and D congruent to d modulo the
    base ideal (the latter is enforced by the RelativeModel invariants).
    """
    for g in f.base.gens:
        if g.degree != 2:
            raise BaseNotDegreeTwo(
                f"base generator {g.name} has degree {g.degree}, expected 2"
            )
    r = len(f.base.gens)
    finite, fd, coh = finiteness_window(f, window)
    if fd is None:
        return ToralCertificate(r, -1, "inconclusive")
    top = fd + window
    if finite:
        return ToralCertificate(r, top, "certified")
    # nonvanishing persists: refute (at this bound) when the top classes are
    # base-polynomial multiples, the signature of surviving t-powers
    top_nonzero = max(n for n in range(0, top + 1) if coh[n][0])
    for rep in coh[top_nonzero][1]:
        for mono in rep.terms:
            if mono.exponents and all(f.is_base_index(i) for i, _ in mono.exponents):
                return ToralCertificate(r, top, "refuted-at-bound", top_nonzero)
    return ToralCertificate(r, top, "inconclusive", top_nonzero)


# ----------------------------------------------------------------------
# depth


@dataclass
class DepthResult:
    depth: int
    witness: list[str]  # ids of a longest strictly decreasing chain


def depth_of_subspaces(subspaces: dict[str, Subspace]) -> DepthResult:
    """Longest strictly decreasing inclusion chain among realized subspaces.

    The count is the number of strict steps; a single realized subspace has
    depth 0 and an empty family depth -1.
    """
    distinct: list[tuple[Subspace, str]] = []
    seen = {}
    for key, sub in subspaces.items():
        if sub not in seen:
            seen[sub] = key
            distinct.append((sub, key))
    if not distinct:
        return DepthResult(-1, [])
    n = len(distinct)
    children = {
        i: [
            j
            for j in range(n)
            if i != j and distinct[i][0].includes(distinct[j][0])
        ]
        for i in range(n)
    }
    best: dict[int, tuple[int, list[int]]] = {}

    def longest(i: int) -> tuple[int, list[int]]:
        if i in best:
            return best[i]
        result = (0, [i])
        for j in children[i]:
            length, path = longest(j)
            if length + 1 > result[0]:
                result = (length + 1, [i] + path)
        best[i] = result
        return result

    depth, path = max((longest(i) for i in range(n)), key=lambda t: t[0])
    return DepthResult(depth, [distinct[i][1] for i in path])


def depth_over_catalog(
    fiber: SullivanModel,
    catalog: Sequence[tuple[str, RelativeModel]],
    window: int = 6,
    require_finite: bool = True,
) -> DepthResult:
    """Depth of the realized fibre-restricted Gottlieb subspaces of a catalog."""
    subspaces: dict[str, Subspace] = {}
    offenders = []
    for key, entry in catalog:
        if entry.fiber.gens != fiber.gens or entry.fiber.diff != fiber.diff:
            raise FiberMismatch(f"catalog entry {key!r} has a different fiber")
        if require_finite:
            finite, _, _ = finiteness_window(entry, window)
            if not finite:
                offenders.append(key)
                continue
        subspaces[key] = fibre_gottlieb(entry).total()
    if offenders:
        raise NotFiniteAtBound(
            "total spaces failed the finiteness gate: " + ", ".join(offenders)
        )
    return depth_of_subspaces(subspaces)
