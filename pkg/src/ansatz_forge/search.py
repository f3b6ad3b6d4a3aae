"""The iterative architecture-search loop: prompt construction, proposal
parsing, candidate evaluation, history normalization, and human feedback."""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field

from . import circuit as circuit_mod
from . import vqe
from .circuit import AnsatzGenome, N_BLOCK_TEMPLATES, decode, format_genome, gate_count
from .errors import FormatError, TransportError, ValidationError
from .pauli import Hamiltonian

SYSTEM_PROMPT = (
    "You are an expert in the field of quantum computing, especially for "
    "quantum architecture design.")

DESIGN_SPACE_DESCRIPTIONS = (
    "(1) U3+CU3 -- One block has a U3 layer with one U3 gate on each qubit "
    "and a CU3 layer.",
    "(2) ZZ+RY -- One block contains one layer of ZZ gate and one RY layer.",
    "(3) RXYZ -- One block has four layers: RX, RY, RZ, and CZ.",
    "(4) ZX+XX -- Based on their MNIST circuit design, one block has two "
    "layers: ZX and XX.",
    "(5) RXYZ+U1+CU3 -- Based on their random circuit basis gate set, we "
    "propose a design space in which one block has six layers in the order "
    "of RX, RY, RZ, CZ, U1, and CU3.",
    "(6) IBMQ Basis -- One block with the basis gate set of IBMQ devices, in "
    "which one block has six layers in the order of RZ, X, RZ, SX, RZ, and "
    "CNOT.",
)

_EXAMPLE_SENTENCE = (
    "For example: [1, (0,1)], [2, (1,2)], ...., [0,(4,5)] means we use "
    "operation 1 for block1 and the block1 is on qubits(0,1), operation2 for "
    "block2 and block2 is on qubits(1,2), ...,operation 0 for block6 and the "
    "block6 is on qubits(4,5).")

_PROPOSAL_RE = re.compile(r"\[\s*(\d+)\s*,\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*\]")


@dataclass(frozen=True)
class SearchConfig:
    n_qubits: int
    n_blocks: int = 6
    max_iterations: int = 10
    task_description: str = "the target problem"

    def __post_init__(self):
        if self.n_blocks < 1:
            raise ValidationError("n_blocks must be >= 1")
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be >= 1")
        if self.n_qubits < 2:
            raise ValidationError("need >= 2 qubits for two-qubit blocks")


@dataclass(frozen=True)
class PromptBundle:
    system: str
    user: str


@dataclass
class HistoryEntry:
    iteration: int
    genome: AnsatzGenome
    raw_value: float
    gate_count: int
    epochs: int
    normalized: float = 0.0
    rejected: bool = False
    best_params: tuple[float, ...] = ()
    trajectory: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        return {
            "iteration": self.iteration,
            "genome": format_genome(self.genome),
            "raw_value": self.raw_value,
            "gate_count": self.gate_count,
            "epochs": self.epochs,
            "normalized": self.normalized,
            "rejected": self.rejected,
            "best_params": list(self.best_params),
        }


@dataclass
class SearchHistory:
    entries: list[HistoryEntry] = field(default_factory=list)
    feedback_notes: list[tuple[int, str]] = field(default_factory=list)

    def add(self, entry: HistoryEntry) -> None:
        self.entries.append(entry)
        normalize(self)

    def to_dict(self) -> dict:
        return {
            "entries": [e.to_dict() for e in self.entries],
            "feedback_notes": [[i, t] for i, t in self.feedback_notes],
        }


def normalize(history: SearchHistory) -> SearchHistory:
    """Min-max normalize raw values in place: best (lowest) -> 0, worst -> 1."""
    if not history.entries:
        return history
    raws = [e.raw_value for e in history.entries]
    lo, hi = min(raws), max(raws)
    for e in history.entries:
        e.normalized = 0.0 if hi == lo else (e.raw_value - lo) / (hi - lo)
    return history


def rank_key(entry: HistoryEntry) -> tuple[float, int]:
    """Lexicographic ranking: value ascending, then gate count ascending."""
    return (entry.raw_value, entry.gate_count)


def best_entry(history: SearchHistory) -> HistoryEntry | None:
    candidates = [e for e in history.entries if not e.rejected]
    return min(candidates, key=rank_key) if candidates else None


def build_prompt(history: SearchHistory, cfg: SearchConfig,
                 design_space=DESIGN_SPACE_DESCRIPTIONS) -> PromptBundle:
    """Instantiate the user prompt with the task, qubit/block counts, the six
    design-space descriptions, the output-format example, the explored-design
    history, and any human feedback notes (newest last)."""
    parts = [
        f"Your task is to help select the best ansatz for variational quantum "
        f"eigensolver to compute the ground state energy of "
        f"{cfg.task_description}. The ansatz works on {cfg.n_qubits} qubits "
        f"and contains {cfg.n_blocks} blocks. For each block, there are "
        f"{N_BLOCK_TEMPLATES} types of operations to choose from:",
    ]
    parts.extend(design_space)
    parts.append(
        "Please output an ID list for the ansatz as well as the selected "
        "qubits for each block.")
    parts.append(_EXAMPLE_SENTENCE)
    if history.entries:
        parts.append("Explored designs and their performance so far "
                     "(lower value is better, 0 is the best normalized score):")
        for e in history.entries:
            line = (f"design: {format_genome(e.genome)} -> "
                    f"value: {e.raw_value!r}, gates: {e.gate_count}, "
                    f"normalized: {e.normalized!r}")
            if e.rejected:
                line += " (rejected by human review)"
            parts.append(line)
    if history.feedback_notes:
        parts.append("Human feedback:")
        for _, text in history.feedback_notes:
            parts.append(text)
    return PromptBundle(system=SYSTEM_PROMPT, user="\n".join(parts))


def parse_proposal(text: str, cfg: SearchConfig) -> AnsatzGenome:
    """Extract `[id, (a,b)]` patterns from a reply; requires exactly
    cfg.n_blocks matches with valid ids and distinct in-range qubits."""
    matches = _PROPOSAL_RE.findall(text)
    if len(matches) != cfg.n_blocks:
        raise FormatError(
            f"expected {cfg.n_blocks} blocks, found {len(matches)}",
            raw_text=text)
    genome = AnsatzGenome.of(
        (int(bid), (int(a), int(b))) for bid, a, b in matches)
    circuit_mod.validate_genome(genome, cfg.n_qubits)
    return genome


@dataclass
class SkippedIteration:
    iteration: int
    error: str


@dataclass
class SearchReport:
    config: SearchConfig
    history: SearchHistory
    skipped: list[SkippedIteration] = field(default_factory=list)
    timestamps: list[float] = field(default_factory=list)
    prompt_trail: list[str] = field(default_factory=list)
    status: str = "running"  # running | finished | aborted | no-candidate

    @property
    def best(self) -> HistoryEntry | None:
        return best_entry(self.history)

    def to_dict(self) -> dict:
        best = self.best
        return {
            "config": {
                "n_qubits": self.config.n_qubits,
                "n_blocks": self.config.n_blocks,
                "max_iterations": self.config.max_iterations,
                "task_description": self.config.task_description,
            },
            "status": self.status,
            "history": self.history.to_dict(),
            "skipped": [
                {"iteration": s.iteration, "error": s.error} for s in self.skipped],
            "timestamps": list(self.timestamps),
            "prompt_trail": list(self.prompt_trail),
            "best": best.to_dict() if best else None,
        }


MAX_PARSE_RETRIES = 3


def run_search(h: Hamiltonian, proposer, train_cfg: vqe.TrainConfig,
               cfg: SearchConfig, feedback_source=None,
               on_iteration=None, clock=time.time) -> SearchReport:
    """One full search: per iteration build prompt -> propose -> parse (with
    up to 3 re-prompts on parse failure) -> decode -> train -> record ->
    drain human feedback. Deterministic given deterministic collaborators."""
    report = SearchReport(config=cfg, history=SearchHistory())
    for iteration in range(cfg.max_iterations):
        bundle = build_prompt(report.history, cfg)
        genome = None
        last_error = None
        try:
            for attempt in range(MAX_PARSE_RETRIES + 1):
                report.prompt_trail.append(bundle.user)
                reply = proposer.propose(bundle)
                try:
                    genome = parse_proposal(reply, cfg)
                    break
                except (FormatError, ValidationError) as exc:
                    last_error = str(exc)
                    bundle = PromptBundle(
                        system=bundle.system,
                        user=(bundle.user
                              + f"\nYour previous reply could not be used: "
                                f"{last_error}. Please answer with exactly "
                                f"{cfg.n_blocks} blocks in the bracket format."))
        except TransportError:
            report.status = "aborted"
            report.timestamps.append(clock())
            if on_iteration:
                on_iteration(report)
            return report
        if genome is None:
            report.skipped.append(SkippedIteration(iteration, last_error or "no reply"))
        else:
            c = decode(genome, cfg.n_qubits)
            train_report = vqe.train(c, h, train_cfg)
            report.history.add(HistoryEntry(
                iteration=iteration,
                genome=genome,
                raw_value=train_report.final_energy,
                gate_count=train_report.gate_count,
                epochs=train_report.epochs_to_converge or train_report.epochs_run,
                best_params=train_report.best_params,
                trajectory=train_report.trajectory,
            ))
        if feedback_source is not None:
            for event in feedback_source.drain():
                apply_feedback(report, iteration, event)
        report.timestamps.append(clock())
        if on_iteration:
            on_iteration(report)
    report.status = "finished" if report.history.entries else "no-candidate"
    if on_iteration:
        on_iteration(report)
    return report


@dataclass(frozen=True)
class FeedbackNote:
    text: str


@dataclass(frozen=True)
class FeedbackDecision:
    iteration: int
    accept: bool


def apply_feedback(report: SearchReport, iteration: int, event) -> None:
    if isinstance(event, FeedbackNote):
        report.history.feedback_notes.append((iteration, event.text))
    elif isinstance(event, FeedbackDecision):
        for entry in report.history.entries:
            if entry.iteration == event.iteration:
                entry.rejected = not event.accept
    else:
        raise ValidationError(f"unknown feedback event {event!r}")
