from pydantic import BaseModel, Field
from typing import List, Optional, Dict, Literal


Rows = List[List[int]]


class ModuleData(BaseModel):
    p: int = Field(..., description="Characteristic of the prime field.")
    rank: int = Field(..., description="Number of generators of the elementary abelian group.")
    e: int = Field(1, description="Extension degree of the coefficient field.")
    dim: int = Field(..., description="Dimension of the module.")
    gens: List[Rows] = Field(
        ...,
        description="A-form generator matrices, one dim x dim row-major integer matrix per group generator.",
    )


class LineSample(BaseModel):
    point: List[int] = Field(..., description="Shifted-unit direction (lambda_1, lambda_2) in the integer representation of GF(p^e).")
    free: bool = Field(..., description="Whether the module restricts freely to the shifted cyclic subgroup.")


class PeriodicityReport(BaseModel):
    verdict: Literal["Periodic", "NonPeriodic", "Projective", "Unknown"] = Field(
        ..., description="Periodicity verdict."
    )
    period: Optional[int] = Field(None, description="Heller period when Periodic (1 or 2).")
    complexity: Optional[int] = Field(None, description="0 projective, 1 periodic, 2 maximal for rank-2 groups.")
    witness: Optional[Rows] = Field(
        None, description="Invertible module map from Omega^period(M) to M, when Periodic."
    )
    sampling_degree: Optional[int] = Field(None, description="Extension degree e of the field the lines were drawn from.")
    lines: List[LineSample] = Field(default_factory=list, description="Rank-variety sample log.")
    note: str = Field("", description="Budget or review notes.")
    assumption: str = Field("", description="Assumption under which a NonPeriodic verdict is certified.")


class TableEntry(BaseModel):
    left: str = Field(..., description="Label of the left tensor factor.")
    right: str = Field(..., description="Label of the right tensor factor.")
    multiplicities: Dict[str, int] = Field(..., description="Class label to multiplicity in the non-projective part.")
    free_rank: int = Field(..., description="Number of free summands KG split off.")


class ClosureCertificate(BaseModel):
    classes: List[str] = Field(..., description="Labels of the indecomposable classes in the tensor closure.")
    modules: Dict[str, ModuleData] = Field(..., description="Representative module of each class.")
    base: List[str] = Field(..., description="Labels of the non-projective summands of the input.")
    base_multiplicities: Dict[str, int] = Field(
        default_factory=dict, description="How often each base class occurs in the input; empty means once each."
    )
    powers: Dict[str, int] = Field(..., description="Smallest tensor power of the input in which each class was found.")
    table: List[TableEntry] = Field(..., description="Decomposition of every pairwise tensor product of classes.")


class SummandWitness(BaseModel):
    inclusion: Rows = Field(..., description="Module map iota from the summand into the tensor power.")
    projection: Rows = Field(..., description="Module map pi back onto the summand with pi . iota = id.")


class NonAlgebraicCertificate(BaseModel):
    base: ModuleData = Field(..., description="The module M shown non-algebraic.")
    n: int = Field(..., description="Tensor power of M containing the translate.")
    i: int = Field(..., description="Nonzero Heller shift of the translate.")
    direction: Literal["M", "M*"] = Field(..., description="Whether the translate is of M or of its dual.")
    summand: ModuleData = Field(..., description="The indecomposable summand found in the tensor power.")
    witness: SummandWitness = Field(..., description="Split inclusion of the summand into M^n.")
    translate_iso: Rows = Field(..., description="Invertible module map from the summand to Omega^i of M or M*.")
    nonperiodicity: PeriodicityReport = Field(..., description="Evidence that M is non-periodic.")


class ClosureResult(BaseModel):
    verdict: Literal["Algebraic", "NonAlgebraic", "Inconclusive"] = Field(..., description="Closure verdict.")
    certificate: Optional[ClosureCertificate] = Field(None, description="Closed tensor table when Algebraic.")
    nonalgebraic: Optional[NonAlgebraicCertificate] = Field(None, description="Omega-translate certificate when NonAlgebraic.")
    progress: Optional[str] = Field(None, description="Budget that tripped, when Inconclusive.")
    partial: Optional[ClosureCertificate] = Field(None, description="Registry and table reached before a budget tripped.")
    steps: int = Field(0, description="Tensor-decompose steps performed.")
    absolutely_indecomposable: Optional[bool] = Field(None, description="Flag for the input's core.")
    config: Dict = Field(default_factory=dict, description="Seed and budgets used.")


class TranslateVerdict(BaseModel):
    shift: int = Field(..., description="Heller shift i of Omega^i(M).")
    algebraic: Optional[bool] = Field(None, description="Inferred verdict; None when no rule applies.")
    rule: str = Field(..., description="The rule the verdict follows from.")


class GreenPolynomial(BaseModel):
    coefficients: List[int] = Field(..., description="Integer coefficients, highest degree first.")
    text: str = Field(..., description="Human-readable polynomial in x.")
    modulo: str = Field("projectives", description="Ideal of the Green ring the relation holds modulo.")


class HarnessRow(BaseModel):
    label: str = Field(..., description="Row label.")
    dim: int = Field(..., description="Module dimension.")
    in_scope: bool = Field(..., description="p divides the dimension and the module is absolutely indecomposable.")
    absolutely_indecomposable: bool = Field(..., description="dim End/rad End = 1.")
    periodicity: PeriodicityReport = Field(..., description="Periodicity report.")
    closure: ClosureResult = Field(..., description="Tensor-closure verdict.")
    counterexample: bool = Field(False, description="Candidate that survived two reseeded re-verifications.")


class HarnessReport(BaseModel):
    rows: List[HarnessRow] = Field(..., description="One row per input module.")
    periodic_algebraic: int = Field(..., description="Rows both periodic and algebraic.")
    nonperiodic_nonalgebraic: int = Field(..., description="Rows both non-periodic and non-algebraic.")
    projective: int = Field(0, description="Projective rows (algebraic).")
    inconclusive: int = Field(0, description="Rows without a definitive verdict.")
    counterexamples: List[str] = Field(default_factory=list, description="Labels of confirmed counterexample candidates.")
    discarded_candidates: List[str] = Field(default_factory=list, description="Candidates that did not survive re-verification.")
    config: Dict = Field(default_factory=dict, description="Seed and budgets used.")


class CensusClass(BaseModel):
    label: str = Field(..., description="Class label in discovery order.")
    module: ModuleData = Field(..., description="Lexicographically least representative.")
    orbit_size: Optional[int] = Field(None, description="Size of the simultaneous-conjugation orbit.")
    indecomposable: bool = Field(..., description="End is local.")
    absolutely_indecomposable: bool = Field(..., description="End/rad End is the ground field.")
    swap_label: str = Field(..., description="Label of the class of the generator-swapped module.")
    periodic: Optional[bool] = Field(None, description="Periodicity, filled in by the harness.")
    algebraic: Optional[str] = Field(None, description="Closure verdict, filled in by the harness.")


class CensusResult(BaseModel):
    p: int = Field(..., description="Characteristic.")
    dim: int = Field(..., description="Dimension enumerated.")
    mode: Literal["exhaustive", "stretch"] = Field(..., description="Exhaustive orbit walk or sampled observation.")
    total_pairs: Optional[int] = Field(None, description="Number of commuting nilpotent generator pairs.")
    total_classes: int = Field(..., description="Isomorphism classes of all modules of this dimension seen.")
    classes: List[CensusClass] = Field(..., description="Listed classes (indecomposable only when filtered).")
    indecomposable_count: int = Field(..., description="Indecomposable classes.")
    abs_indecomposable_count: int = Field(..., description="Absolutely indecomposable classes.")
    swap_classes: int = Field(..., description="Listed classes counted up to swapping the two generators.")
    partial: bool = Field(False, description="A budget stopped the enumeration early.")
    note: str = Field("", description="Budget notes.")


class CertificateFile(BaseModel):
    kind: Literal["closure", "nonalgebraic", "periodicity"] = Field(..., description="Certificate type.")
    subject: ModuleData = Field(..., description="The module the verdict is about.")
    config: Dict = Field(default_factory=dict, description="Seed and budgets used.")
    closure: Optional[ClosureCertificate] = Field(None, description="Payload of a closure certificate.")
    nonalgebraic: Optional[NonAlgebraicCertificate] = Field(None, description="Payload of a non-algebraicity certificate.")
    periodicity: Optional[PeriodicityReport] = Field(None, description="Payload of a periodicity certificate.")


class VerificationResult(BaseModel):
    ok: bool = Field(..., description="Whether every check passed.")
    failures: List[str] = Field(default_factory=list, description="Failed checks, naming the entry.")
