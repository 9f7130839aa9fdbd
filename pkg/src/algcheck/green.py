"""Consequences of closure verdicts inside the Green ring."""

from __future__ import annotations

import sympy

from src.output_pydantic import ClosureCertificate, ClosureResult, GreenPolynomial, PeriodicityReport, TranslateVerdict

x = sympy.Symbol("x")


def multiplication_matrix(cert: ClosureCertificate) -> sympy.Matrix:
    """Integer matrix of [c] -> M [c] on the closure classes, M the sum of the base classes with multiplicity."""
    labels = list(cert.classes)
    index = {label: k for k, label in enumerate(labels)}
    entries = {}
    for entry in cert.table:
        entries[(entry.left, entry.right)] = entry.multiplicities
        entries[(entry.right, entry.left)] = entry.multiplicities
    mat = sympy.zeros(len(labels), len(labels))
    for b in cert.base:
        weight = cert.base_multiplicities.get(b, 1)
        for c in labels:
            for label, count in entries.get((b, c), {}).items():
                mat[index[label], index[c]] += weight * count
    return mat


def green_polynomial(cert: ClosureCertificate) -> GreenPolynomial:
    """f with f(M) = 0 modulo projectives: x times the characteristic polynomial of M acting on the closure."""
    if not cert.classes:
        poly = sympy.Poly(x, x)
    else:
        poly = sympy.Poly(x * multiplication_matrix(cert).charpoly(x).as_expr(), x)
    return GreenPolynomial(coefficients=[int(c) for c in poly.all_coeffs()], text=str(poly.as_expr()))


def translate_verdicts(
    report: PeriodicityReport,
    closure: ClosureResult,
    window: int,
    self_dual: bool = False,
) -> list[TranslateVerdict]:
    """What the verdicts for M say about Omega^i(M), |i| <= window."""
    out = []
    own = {"Algebraic": True, "NonAlgebraic": False}.get(closure.verdict)
    for i in range(-window, window + 1):
        if report.verdict == "Projective":
            out.append(TranslateVerdict(shift=i, algebraic=True, rule="projective modules are algebraic"))
        elif closure.verdict == "NonAlgebraic" and closure.nonalgebraic is not None:
            out.append(
                TranslateVerdict(shift=i, algebraic=False, rule="an Omega-translate summand makes every translate non-algebraic")
            )
        elif report.verdict == "Periodic" and own:
            out.append(TranslateVerdict(shift=i, algebraic=True, rule="periodic algebraic modules have algebraic translates"))
        elif i == 0:
            out.append(TranslateVerdict(shift=0, algebraic=own, rule="closure verdict" if own is not None else "no verdict"))
        elif report.verdict == "NonPeriodic" and own:
            out.append(
                TranslateVerdict(shift=i, algebraic=False, rule="translates of a non-periodic algebraic module are non-algebraic")
            )
        elif report.verdict == "NonPeriodic" and self_dual:
            out.append(
                TranslateVerdict(shift=i, algebraic=False, rule="translates of a self-dual non-periodic module are non-algebraic")
            )
        else:
            out.append(TranslateVerdict(shift=i, algebraic=None, rule="no rule applies"))
    return out
