"""
Module files and conversions between modules and their pydantic records.

A module file is line oriented; blank lines and ``#`` comments are ignored::

    p 3
    rank 2
    e 1
    dim 3
    gen 1
    0 1 0
    0 0 1
    0 0 0
    gen 2
    0 0 0
    0 0 0
    0 0 0

``e`` is optional and must be 1. Each ``gen i`` header is followed by ``dim``
rows of ``dim`` residues mod p, the A-form matrix A_i in row-major order.
``write_module`` emits exactly this layout, so reading its output reproduces the
same file.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from pydantic import ValidationError

from src import fields as fl
from src.errors import GreenRingError, ModuleFormatError
from src.modules import GroupSpec, Module, validate
from src.output_pydantic import ModuleData

HEADERS = ("p", "rank", "e", "dim")


def matrix_rows(mat) -> list[list[int]]:
    return fl.as_int(mat).tolist()


def _tokens(line: str) -> list[tuple[int, str]]:
    """Whitespace-separated tokens with their 1-based columns."""
    out = []
    col = 0
    for part in line.split():
        col = line.index(part, col)
        out.append((col + 1, part))
        col += len(part)
    return out


def _integer(token: tuple[int, str], lineno: int) -> int:
    col, text = token
    try:
        return int(text)
    except ValueError:
        raise ModuleFormatError(f"expected an integer, found {text!r}", lineno, col) from None


def read_module(text: str, check: bool = True) -> Module:
    """Parse a module file; with ``check=False`` the module invariants are left to the caller."""
    header: dict[str, int] = {}
    gens: dict[int, list[list[int]]] = {}
    current: int | None = None
    last_line = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = _tokens(line)
        if not tokens:
            continue
        last_line = lineno
        col, word = tokens[0]
        if word in HEADERS:
            if current is not None:
                raise ModuleFormatError(f"header {word!r} after generator data", lineno, col)
            if len(tokens) != 2:
                raise ModuleFormatError(f"{word!r} takes exactly one value", lineno, col)
            if word in header:
                raise ModuleFormatError(f"duplicate header {word!r}", lineno, col)
            header[word] = _integer(tokens[1], lineno)
            continue
        if word == "gen":
            missing = [h for h in ("p", "rank", "dim") if h not in header]
            if missing:
                raise ModuleFormatError(f"missing header {missing[0]!r} before generators", lineno, col)
            if len(tokens) != 2:
                raise ModuleFormatError("'gen' takes the generator index", lineno, col)
            index = _integer(tokens[1], lineno)
            if index != len(gens) + 1:
                raise ModuleFormatError(f"expected gen {len(gens) + 1}, found gen {index}", lineno, tokens[1][0])
            if index > header["rank"]:
                raise ModuleFormatError(f"gen {index} exceeds rank {header['rank']}", lineno, tokens[1][0])
            if current is not None and len(gens[current]) != header["dim"]:
                raise ModuleFormatError(
                    f"gen {current} has {len(gens[current])} rows, expected {header['dim']}", lineno, col
                )
            current = index
            gens[index] = []
            continue
        if current is None:
            raise ModuleFormatError(f"unexpected token {word!r}", lineno, col)
        row = [_integer(tok, lineno) for tok in tokens]
        if len(row) != header["dim"]:
            raise ModuleFormatError(f"row has {len(row)} entries, expected {header['dim']}", lineno, col)
        if len(gens[current]) == header["dim"]:
            raise ModuleFormatError(f"gen {current} has more than {header['dim']} rows", lineno, col)
        p = header["p"]
        for (tcol, _), value in zip(tokens, row):
            if not 0 <= value < p:
                raise ModuleFormatError(f"entry {value} is not a residue mod {p}", lineno, tcol)
        gens[current].append(row)

    missing = [h for h in ("p", "rank", "dim") if h not in header]
    if missing:
        raise ModuleFormatError(f"missing header {missing[0]!r}", last_line or 1)
    if header.get("e", 1) != 1:
        raise ModuleFormatError("module data must be over the prime field (e = 1)", last_line or 1)
    if len(gens) != header["rank"]:
        raise ModuleFormatError(f"expected {header['rank']} generators, found {len(gens)}", last_line or 1)
    if current is not None and len(gens[current]) != header["dim"]:
        raise ModuleFormatError(f"gen {current} has {len(gens[current])} rows, expected {header['dim']}", last_line)

    try:
        data = ModuleData(p=header["p"], rank=header["rank"], dim=header["dim"], gens=[gens[i] for i in sorted(gens)])
        return from_data(data, check)
    except (GreenRingError, ValidationError) as exc:
        raise ModuleFormatError(str(exc)) from exc


def write_module(m: Module) -> str:
    lines = [f"p {m.p}", f"rank {m.group.rank}", "e 1", f"dim {m.dim}"]
    for i, a in enumerate(m.gens, start=1):
        lines.append(f"gen {i}")
        lines.extend(" ".join(str(x) for x in row) for row in matrix_rows(a))
    return "\n".join(lines) + "\n"


def load_module(path: str | Path, check: bool = True) -> Module:
    with open(path, "r") as file:
        return read_module(file.read(), check)


def save_module(m: Module, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(write_module(m))
    return path


def to_data(m: Module) -> ModuleData:
    return ModuleData(p=m.p, rank=m.group.rank, dim=m.dim, gens=[matrix_rows(a) for a in m.gens])


def from_data(data: ModuleData, check: bool = True) -> Module:
    """Module from its record; raises ModuleFormatError unless it passes validate."""
    if data.e != 1:
        raise ModuleFormatError("module data must be over the prime field (e = 1)")
    field = fl.prime_field(data.p)
    GF = fl.gf(field)
    mats = []
    for i, rows in enumerate(data.gens, start=1):
        if len(rows) != data.dim or any(len(row) != data.dim for row in rows):
            raise ModuleFormatError(f"gen {i} is not a {data.dim}x{data.dim} matrix")
        arr = np.asarray(rows, dtype=np.int64).reshape(data.dim, data.dim) if data.dim else np.zeros((0, 0), np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= data.p):
            raise ModuleFormatError(f"gen {i} has entries outside 0..{data.p - 1}")
        mats.append(GF(arr))
    m = Module(GroupSpec(p=data.p, rank=data.rank), field, tuple(mats))
    problems = validate(m) if check else []
    if problems:
        raise ModuleFormatError(problems[0])
    return m
