from src.algcheck.closure import (
    tensor_closure,
    translate_scan,
    verify_closure_certificate,
    verify_nonalgebraic_certificate,
)
from src.algcheck.green import green_polynomial, translate_verdicts
from src.algcheck.harness import conjecture_harness
from src.algcheck.rankvariety import periodicity, shifted_unit_free_test, verify_periodicity
from src.algcheck.registry import IsoClassRegistry

__all__ = [
    "IsoClassRegistry",
    "conjecture_harness",
    "green_polynomial",
    "periodicity",
    "shifted_unit_free_test",
    "tensor_closure",
    "translate_scan",
    "translate_verdicts",
    "verify_closure_certificate",
    "verify_nonalgebraic_certificate",
    "verify_periodicity",
]
