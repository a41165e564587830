"""Invariant reports: the analysis pipeline and its pydantic models."""

import logging
from typing import List, Literal, Optional, Union

from pydantic import BaseModel

from heegaard.classify_odd import seifert_invariants
from heegaard.classify_two import phase_vector, wall_decompose
from heegaard.errors import InputParseError
from heegaard.inputs import InputFile, LinkedGroupInput, SplittingInput, input_digest
from heegaard.linked_group import (
    LinkedGroup,
    Verdict,
    compare_invariants,
    linking_from_normal_form,
    primary_decompose,
    stable_equivalence,
    stable_invariants,
)
from heegaard.minimal_class import class_count, det_invariant, minimal_equivalence, reidemeister_symbols
from heegaard.symplectic import partial_normal_form

logger = logging.getLogger(__name__)

PhaseEntry = Union[int, str]

STABILIZED_QUALIFIER = "det invariant undefined for stabilized splittings"


class OddPrimeSection(BaseModel):
    prime: int
    exponents: List[int]
    multiplicities: List[int]
    characters: List[int]


class TwoPrimarySection(BaseModel):
    exponents: List[int]
    summands: List[str]
    phase_vector: List[PhaseEntry]


class ReidemeisterEntry(BaseModel):
    index: int
    prime: int
    value: int


class ComparisonSection(BaseModel):
    mode: Literal["stable", "minimal"]
    other_digest: str
    equivalent: bool
    reasons: List[str] = []
    qualifiers: List[str] = []
    notes: List[str] = []

    @classmethod
    def from_verdict(cls, mode: str, other_digest: str, verdict: Verdict):
        return cls(
            mode=mode,
            other_digest=other_digest,
            equivalent=verdict.equivalent,
            reasons=list(verdict.reasons),
            qualifiers=list(verdict.qualifiers),
            notes=list(verdict.notes),
        )


class InvariantReport(BaseModel):
    name: Optional[str] = None
    digest: str
    kind: Literal["splitting", "linked_group"]
    genus: Optional[int] = None
    stab_index: Optional[int] = None
    minimal_genus: Optional[int] = None
    free_rank: int
    torsion: List[int]
    linking: List[List[str]]
    odd_primes: List[OddPrimeSection] = []
    two_primary: Optional[TwoPrimarySection] = None
    parity: Optional[Literal["even", "odd"]] = None
    tau_bar: Optional[int] = None
    det_invariant: Optional[int] = None
    class_count: int = 1
    reidemeister: List[ReidemeisterEntry] = []
    comparison: Optional[ComparisonSection] = None
    qualifiers: List[str] = []

    @classmethod
    def from_dict(cls, data: dict):
        return cls.model_validate(data)


def _group_sections(G: LinkedGroup) -> dict:
    odd, two = [], None
    for component in primary_decompose(G):
        if component.prime == 2:
            decomposition = wall_decompose(component)
            two = TwoPrimarySection(
                exponents=list(component.exponents),
                summands=[str(form) for form in decomposition.summands],
                phase_vector=[_phase_entry(x) for x in phase_vector(component).as_strings()],
            )
        else:
            invariants = seifert_invariants(component)
            odd.append(
                OddPrimeSection(
                    prime=invariants.prime,
                    exponents=[b.exponent for b in invariants.blocks],
                    multiplicities=[b.multiplicity for b in invariants.blocks],
                    characters=invariants.characters(),
                )
            )
    sections = {
        "free_rank": G.free_rank,
        "torsion": list(G.torsion),
        "linking": G.linking_strings(),
        "odd_primes": odd,
        "two_primary": two,
        "class_count": class_count(G),
    }
    if G.torsion:
        invariant = det_invariant(G)
        sections.update(parity=invariant.parity, tau_bar=invariant.tau_bar, det_invariant=invariant.det_value)
    return sections


def analyze_splitting(model: SplittingInput) -> InvariantReport:
    """
    Report on a splitting. The determinant invariant is a property of minimal
    splittings only: for a stabilized input the three determinant fields stay
    empty and the report carries a qualifier instead.
    """
    H = model.to_symplectic()
    nf = partial_normal_form(H)
    G = linking_from_normal_form(nf)
    symbols = reidemeister_symbols(nf)
    logger.debug("analyzing genus %d splitting", H.genus)
    sections = _group_sections(G)
    qualifiers = []
    if nf.stab_index and G.torsion:
        sections.update(parity=None, tau_bar=None, det_invariant=None)
        qualifiers.append(STABILIZED_QUALIFIER)
    return InvariantReport(
        name=model.name,
        digest=input_digest(model),
        kind="splitting",
        genus=H.genus,
        stab_index=nf.stab_index,
        minimal_genus=nf.minimal_genus,
        reidemeister=[ReidemeisterEntry(index=s.index, prime=s.prime, value=s.value) for s in symbols.symbols],
        qualifiers=qualifiers,
        **sections,
    )


def analyze_linked_group(model: LinkedGroupInput) -> InvariantReport:
    G = model.to_linked_group()
    return InvariantReport(name=model.name, digest=input_digest(model), kind="linked_group", **_group_sections(G))


def analyze(model: InputFile) -> InvariantReport:
    """Full invariant report of a splitting or linked-group input."""
    if isinstance(model, SplittingInput):
        return analyze_splitting(model)
    if isinstance(model, LinkedGroupInput):
        return analyze_linked_group(model)
    raise InputParseError("analysis needs a splitting or a linked-group input, got a bare matrix")


def _group_of(model: InputFile) -> LinkedGroup:
    if isinstance(model, SplittingInput):
        return linking_from_normal_form(partial_normal_form(model.to_symplectic()))
    if isinstance(model, LinkedGroupInput):
        return model.to_linked_group()
    raise InputParseError("comparison needs a splitting or a linked-group input, got a bare matrix")


def _is_stabilized(model: InputFile) -> bool:
    return isinstance(model, SplittingInput) and partial_normal_form(model.to_symplectic()).stab_index > 0


def compare(first: InputFile, second: InputFile, mode: str = "stable") -> InvariantReport:
    """
    Report on the first input with the verdict against the second.

    Splittings are compared with stable_equivalence or minimal_equivalence;
    linked groups by their invariants, plus the determinant invariant in
    minimal mode.
    """
    report = analyze(first)
    if isinstance(first, SplittingInput) and isinstance(second, SplittingInput):
        decide = minimal_equivalence if mode == "minimal" else stable_equivalence
        verdict = decide(first.to_symplectic(), second.to_symplectic())
    else:
        G1, G2 = _group_of(first), _group_of(second)
        reasons = compare_invariants(stable_invariants(G1), stable_invariants(G2))
        notes: tuple[str, ...] = ()
        if not reasons and mode == "minimal" and G1.torsion:
            if _is_stabilized(first) or _is_stabilized(second):
                notes = ("stabilized input: decided up to stabilization",)
            else:
                d1, d2 = det_invariant(G1), det_invariant(G2)
                if d1.det_value != d2.det_value:
                    reasons.append(f"det {d1.det_value} vs {d2.det_value} mod {d1.tau_bar}")
        verdict = Verdict(not reasons, tuple(reasons), notes=notes)
    report.comparison = ComparisonSection.from_verdict(mode, input_digest(second), verdict)
    report.qualifiers = sorted(set(report.qualifiers) | set(verdict.qualifiers))
    return report


def _phase_entry(value: PhaseEntry) -> PhaseEntry:
    return value if value == "inf" else int(value)


def render_text(report: InvariantReport) -> str:
    """Human-readable rendering, one fact per line."""
    lines = []
    if report.name:
        lines.append(f"name: {report.name}")
    lines.append(f"digest: {report.digest}")
    if report.kind == "splitting":
        lines.append(f"genus: {report.genus}")
        lines.append(f"stabilization index: {report.stab_index}")
        lines.append(f"minimal genus: {report.minimal_genus}")
    lines.append(f"free rank: {report.free_rank}")
    lines.append(f"torsion: {report.torsion}")
    for row in report.linking:
        lines.append("linking: " + " ".join(row))
    for section in report.odd_primes:
        blocks = ", ".join(
            f"Z/{section.prime}^{e} x{m}: {'+' if c > 0 else '-'}1"
            for e, m, c in zip(section.exponents, section.multiplicities, section.characters)
        )
        lines.append(f"p={section.prime}: {blocks}")
    if report.two_primary is not None:
        lines.append("p=2 summands: " + " + ".join(report.two_primary.summands))
        lines.append("p=2 phase vector: (" + ", ".join(str(x) for x in report.two_primary.phase_vector) + ")")
    if report.det_invariant is not None:
        lines.append(f"parity: {report.parity}")
        lines.append(f"det invariant: {report.det_invariant} mod {report.tau_bar}")
    lines.append(f"minimal classes: {report.class_count}")
    for entry in report.reidemeister:
        lines.append(f"reidemeister symbol (i={entry.index}, p={entry.prime}): {entry.value}")
    if report.comparison is not None:
        c = report.comparison
        verdict = "equivalent" if c.equivalent else "inequivalent"
        lines.append(f"{c.mode} comparison: {verdict}")
        lines.extend(f"  reason: {reason}" for reason in c.reasons)
        lines.extend(f"  note: {note}" for note in c.notes)
    if report.qualifiers:
        lines.append("qualifiers: " + ", ".join(report.qualifiers))
    return "\n".join(lines)

