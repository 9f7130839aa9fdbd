"""
Signature calculus on interlaced Auslander-Reiten components.

Coordinates (i, j) sit on a diamond lattice with row j = 0 at the bottom. The
diamond with left and right corners (i-1, j) and (i+1, j) has bottom (i, j-1) and
top (i, j+1), and signatures satisfy

    sig(i, j+1) + sig(i, j-1) = sig(i-1, j) + sig(i+1, j)

with row -1 empty. A signature is a multiset of formal symbols x^s; shifting by k
adds k to every s. Row 0 at i is the seed signature shifted by i. Everything
here is formal: no module is computed except by ``signatures_from_restriction``.
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

from src.config import DEFAULT_CONFIG, RunConfig
from src.errors import GreenRingError, ModuleFormatError, SignatureInconsistencyError

logger = logging.getLogger(__name__)

TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\^(-?\d+)$")


class Signature:
    """Multiset of (symbol, shift) pairs."""

    __slots__ = ("_items",)

    def __init__(self, items=()):
        counts = Counter()
        if isinstance(items, Counter):
            counts.update(items)
        else:
            for item in items:
                counts[(str(item[0]), int(item[1]))] += 1
        self._items = counts

    @classmethod
    def of(cls, *symbols: str, shift: int = 0) -> "Signature":
        return cls((s, shift) for s in symbols)

    def counts(self) -> Counter:
        return Counter(self._items)

    def __len__(self) -> int:
        return sum(self._items.values())

    def __bool__(self) -> bool:
        return bool(self._items)

    def __eq__(self, other) -> bool:
        return isinstance(other, Signature) and +self._items == +other._items

    def __hash__(self) -> int:
        return hash(frozenset((+self._items).items()))

    def __add__(self, other: "Signature") -> "Signature":
        return Signature(self._items + other._items)

    def __sub__(self, other: "Signature") -> "Signature":
        out = Counter(self._items)
        for key, count in other._items.items():
            out[key] -= count
            if out[key] < 0:
                raise SignatureInconsistencyError(f"negative multiplicity for {key[0]}^{key[1]}")
        return Signature(+out)

    def shifted(self, k: int) -> "Signature":
        return Signature(Counter({(s, shift + k): c for (s, shift), c in self._items.items()}))

    def shifts(self) -> dict[str, set[int]]:
        out: dict[str, set[int]] = {}
        for s, shift in self._items:
            out.setdefault(s, set()).add(shift)
        return out

    def tokens(self) -> list[str]:
        return [f"{s}^{shift}" for (s, shift), c in sorted(self._items.items()) for _ in range(c)]

    def __str__(self) -> str:
        return "[" + ", ".join(self.tokens()) + "]"

    __repr__ = __str__


@dataclass(frozen=True)
class InterlacedGrid:
    i_range: tuple[int, int]
    j_max: int
    row0: Signature
    cells: dict[tuple[int, int], Signature] = field(default_factory=dict)

    def __getitem__(self, ij: tuple[int, int]) -> Signature:
        return self.cells[ij]

    def coordinates(self) -> list[tuple[int, int]]:
        return sorted(self.cells, key=lambda ij: (ij[1], ij[0]))


class DiamondFailure(NamedTuple):
    i: int
    j: int
    top_plus_bottom: Signature
    left_plus_right: Signature


def signature_formula(i: int, j: int, row0: Signature) -> Signature:
    """Union of row0 shifted by i+j, i+j-2, ..., i-j."""
    if j < 0:
        raise ValueError("row index must be non-negative")
    out = Signature()
    for s in range(i - j, i + j + 1, 2):
        out = out + row0.shifted(s)
    return out


def propagate(row0: Signature, i_range: tuple[int, int], j_max: int) -> InterlacedGrid:
    """Fill rows 0..j_max over i_range from the seed by repeated diamond subtraction."""
    if not row0:
        raise SignatureInconsistencyError("the seed signature must be non-empty")
    lo, hi = i_range
    width = range(lo - j_max - 1, hi + j_max + 2)
    rows: list[dict[int, Signature]] = [{i: row0.shifted(i) for i in width}]
    if j_max >= 1:
        rows.append({i: rows[0][i - 1] + rows[0][i + 1] for i in width[1:-1]})
    for j in range(2, j_max + 1):
        below, current = rows[j - 2], rows[j - 1]
        rows.append({i: current[i - 1] + current[i + 1] - below[i] for i in current if i - 1 in current and i + 1 in current})
    cells = {(i, j): rows[j][i] for j in range(j_max + 1) for i in range(lo, hi + 1)}
    return InterlacedGrid((lo, hi), j_max, row0, cells)


def formula_grid(row0: Signature, i_range: tuple[int, int], j_max: int) -> InterlacedGrid:
    lo, hi = i_range
    cells = {(i, j): signature_formula(i, j, row0) for j in range(j_max + 1) for i in range(lo, hi + 1)}
    return InterlacedGrid((lo, hi), j_max, row0, cells)


def diamond_check(grid: InterlacedGrid) -> DiamondFailure | None:
    """First diamond (row-major from the bottom) where top + bottom != left + right."""
    for (i, j) in grid.coordinates():
        top = grid.cells.get((i, j + 1))
        left = grid.cells.get((i - 1, j))
        right = grid.cells.get((i + 1, j))
        bottom = grid.cells.get((i, j - 1)) if j else Signature()
        if top is None or left is None or right is None or bottom is None:
            continue
        if top + bottom != left + right:
            return DiamondFailure(i, j, top + bottom, left + right)
    return None


def algebraic_positions(grid: InterlacedGrid, designated: int | None = None) -> set[tuple[int, int]]:
    """Cells whose signature holds at most one shift of each symbol (all equal to ``designated`` if given)."""
    out = set()
    for ij, sig in grid.cells.items():
        shifts = sig.shifts()
        if any(len(s) > 1 for s in shifts.values()):
            continue
        if designated is not None and any(s != {designated} for s in shifts.values()):
            continue
        out.add(ij)
    return out


def shift_grid(grid: InterlacedGrid, k: int) -> InterlacedGrid:
    return InterlacedGrid(
        grid.i_range, grid.j_max, grid.row0.shifted(k), {ij: sig.shifted(k) for ij, sig in grid.cells.items()}
    )


def reorigin(grid: InterlacedGrid, di: int) -> InterlacedGrid:
    """The same component with (di, 0) taken as the origin."""
    lo, hi = grid.i_range
    return InterlacedGrid(
        (lo - di, hi - di),
        grid.j_max,
        grid.row0.shifted(di),
        {(i - di, j): sig for (i, j), sig in grid.cells.items()},
    )


def write_grid(grid: InterlacedGrid) -> str:
    lo, hi = grid.i_range
    lines = [f"# interlaced grid i={lo}..{hi} j=0..{grid.j_max} seed {' '.join(grid.row0.tokens())}"]
    for i, j in grid.coordinates():
        lines.append(" ".join([str(i), str(j), *grid.cells[(i, j)].tokens()]))
    return "\n".join(lines) + "\n"


def read_grid(text: str) -> InterlacedGrid:
    """Parse the one-cell-per-line table; the seed is cell (0, 0) unshifted."""
    cells: dict[tuple[int, int], Signature] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        parts = line.split()
        if not parts:
            continue
        if len(parts) < 2:
            raise ModuleFormatError("a cell line starts with i and j", lineno, 1)
        col = 0
        coords = []
        for part in parts[:2]:
            col = line.index(part, col)
            try:
                coords.append(int(part))
            except ValueError:
                raise ModuleFormatError(f"expected an integer coordinate, found {part!r}", lineno, col + 1) from None
            col += len(part)
        items = []
        for part in parts[2:]:
            col = line.index(part, col)
            match = TOKEN.match(part)
            if not match:
                raise ModuleFormatError(f"expected symbol^shift, found {part!r}", lineno, col + 1)
            items.append((match.group(1), int(match.group(2))))
            col += len(part)
        key = (coords[0], coords[1])
        if key in cells:
            raise ModuleFormatError(f"cell {key} listed twice", lineno, 1)
        if key[1] < 0:
            raise ModuleFormatError("row index must be non-negative", lineno, 1)
        cells[key] = Signature(items)
    if not cells:
        raise ModuleFormatError("grid has no cells", 1)
    row0_cells = [i for (i, j) in cells if j == 0]
    if not row0_cells:
        raise ModuleFormatError("grid has no row 0", 1)
    anchor = 0 if (0, 0) in cells else min(row0_cells)
    row0 = cells[(anchor, 0)].shifted(-anchor)
    i_values = [i for i, _ in cells]
    return InterlacedGrid((min(i_values), max(i_values)), max(j for _, j in cells), row0, cells)


def signatures_from_restriction(m, subgroup, config: RunConfig = DEFAULT_CONFIG, window: int | None = None) -> Signature:
    """Non-periodic summands of m restricted to ``subgroup`` as formal symbols.

    Summands that are Heller translates of an earlier summand share its symbol with
    the matching shift; the rest get fresh symbols x1, x2, ... at shift 0.
    """
    from src.algcheck.closure import TranslateCache
    from src.algcheck.rankvariety import periodicity
    from src.decomp import decompose, strip_projectives
    from src.modules import find_isomorphism, restrict

    window = window or config.budgets.omega_window
    core, _ = strip_projectives(restrict(m, subgroup), config)
    symbols: list[tuple[str, TranslateCache]] = []
    items = []
    for block in decompose(core, config).blocks:
        try:
            if periodicity(block, config).verdict != "NonPeriodic":
                continue
        except GreenRingError as exc:
            logger.info("summand of dim %d left out of the signature: %s", block.dim, exc)
            continue
        found = None
        for name, cache in symbols:
            for shift in range(-window, window + 1):
                target = cache.get("M", shift)
                if target.dim == block.dim and find_isomorphism(block, target, config) is not None:
                    found = (name, shift)
                    break
            if found:
                break
        if found is None:
            name = f"x{len(symbols) + 1}"
            symbols.append((name, TranslateCache(block, config)))
            found = (name, 0)
        items.append(found)
    return Signature(items)
