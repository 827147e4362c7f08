"""Bayesian knowledge assessment over enumerated states.

Likelihood of a state = prior x one term per logged answer, the term
depending on whether the tested concept lies in the state.  A single
depth-first pass accumulates per-concept likelihood sums by attributing
each subtree total to its most recently added concept.  Arithmetic is in
log space; products of hundreds of answer terms underflow otherwise.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from . import _kernels
from .core import PriorFunction, State, ValidationError
from .sequence_space import (
    SequenceSpace,
    mex as seq_mex,
    project,
    up as seq_up,
)

NEG_INF = float("-inf")


class AssessmentError(ValidationError):
    """Numerical failure: every state's likelihood vanished."""


@dataclass(frozen=True)
class ResponseModel:
    """Careless-mistake rate beta, lucky-guess rate eta."""

    beta: float = 0.1
    eta: float = 0.01

    def __post_init__(self):
        if not (0.0 <= self.beta < 0.5 and 0.0 <= self.eta < 0.5):
            raise ValidationError("response rates must lie in [0, 0.5)")


@dataclass(frozen=True)
class ResponseLog:
    """Sequence of (concept, answered_correctly) pairs."""

    entries: tuple[tuple[str, bool], ...] = ()

    @property
    def asked(self) -> frozenset[str]:
        return frozenset(c for c, _ in self.entries)

    def record(self, concept: str, correct: bool) -> "ResponseLog":
        return ResponseLog(self.entries + ((concept, bool(correct)),))


@dataclass(frozen=True)
class Marginals:
    """Per-concept knowledge probabilities plus the likelihood normalizer."""

    p: dict[str, float]
    normalizer: float

    def closest_to_half(self, exclude: frozenset[str] = frozenset()) -> str | None:
        best = None
        best_gap = 2.0
        for c, prob in self.p.items():
            if c in exclude:
                continue
            gap = abs(prob - 0.5)
            if gap < best_gap - 1e-15:
                best, best_gap = c, gap
        return best


@dataclass(frozen=True)
class AssessmentConfig:
    """Knobs of the assessment loop; rates and thresholds have no single
    right value, so all four are configuration."""

    model: ResponseModel = ResponseModel()
    prior: PriorFunction | None = None  # None = uniform
    theta_lo: float = 0.2
    theta_hi: float = 0.8
    collection_size: int = 8
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.theta_lo < 0.5 < self.theta_hi < 1.0):
            raise ValidationError("need 0 < theta_lo < 0.5 < theta_hi < 1")
        if self.collection_size < 1:
            raise ValidationError("collection_size must be at least 1")


def answer_term(model: ResponseModel, s: State, concept: str, correct: bool) -> float:
    """P(answer | state): 1-beta / beta when known, eta / 1-eta when not."""
    if concept in s:
        return 1.0 - model.beta if correct else model.beta
    return model.eta if correct else 1.0 - model.eta


def _log(x: float) -> float:
    return math.log(x) if x > 0.0 else NEG_INF


def _logaddexp(a: float, b: float) -> float:
    if a == NEG_INF:
        return b
    if b == NEG_INF:
        return a
    if a < b:
        a, b = b, a
    return a + math.log1p(math.exp(b - a))


def assess(sp: SequenceSpace, log: ResponseLog, cfg: AssessmentConfig) -> Marginals:
    """Marginal probability that each concept is known, given the log.

    One depth-first enumeration: stepping to a child state multiplies the
    likelihood by the answer terms of the concept just added (divided by
    its not-known terms, which the root already carries), and each
    subtree's likelihood total is added to that concept's sum.  Zero terms
    (noiseless models) are tracked as counts so log space stays exact.
    """
    dom = sp.domain
    model = cfg.model
    # per-concept log answer terms, inside and outside the state
    log_in = [0.0] * dom.n
    log_out = [0.0] * dom.n
    for concept, correct in log.entries:
        c = dom.index(concept)
        log_in[c] += _log(1.0 - model.beta if correct else model.beta)
        log_out[c] += _log(model.eta if correct else 1.0 - model.eta)

    prior = cfg.prior

    def log_prior(mask: int) -> float:
        if prior is None:
            return 0.0
        w = prior(State(dom, mask))
        if w < 0.0:
            raise ValidationError("prior weight must be non-negative")
        return _log(w)

    base_finite = 0.0
    base_zeros = 0
    for c in range(dom.n):
        if log_out[c] == NEG_INF:
            base_zeros += 1
        else:
            base_finite += log_out[c]

    # running term sum of the current state, as (finite part, -inf count)
    finite = base_finite
    zeros = base_zeros
    concept_total = [NEG_INF] * dom.n
    # stack of (added concept, subtree log-likelihood total so far)
    stack: list[list] = []
    root_total = NEG_INF

    def enter(mask: int, added: int) -> None:
        nonlocal finite, zeros
        if added >= 0:
            if log_out[added] == NEG_INF:
                zeros -= 1
            else:
                finite -= log_out[added]
            if log_in[added] == NEG_INF:
                zeros += 1
            else:
                finite += log_in[added]
        loglik = NEG_INF if zeros else finite + log_prior(mask)
        stack.append([added, loglik])

    def leave(mask: int) -> None:
        nonlocal finite, zeros, root_total
        added, subtree = stack.pop()
        if added >= 0:
            concept_total[added] = _logaddexp(concept_total[added], subtree)
            if log_in[added] == NEG_INF:
                zeros -= 1
            else:
                finite -= log_in[added]
            if log_out[added] == NEG_INF:
                zeros += 1
            else:
                finite += log_out[added]
            stack[-1][1] = _logaddexp(stack[-1][1], subtree)
        else:
            root_total = subtree

    _kernels.traverse(dom.n, sp.k, sp.seqs, sp.pos, enter=enter, leave=leave)

    if root_total == NEG_INF:
        raise AssessmentError("all state likelihoods are zero")
    p = {
        dom.concepts[c]: math.exp(concept_total[c] - root_total)
        for c in range(dom.n)
    }
    return Marginals(p=p, normalizer=math.exp(root_total))


def select_question(
    marginals: Marginals,
    asked: frozenset[str],
    theta_lo: float = 0.2,
    theta_hi: float = 0.8,
) -> str | None:
    """The unasked concept nearest 50%, or None when every concept settled.

    Ties break to the concept listed first in the marginals (domain
    order).  Also returns None when no unasked concept remains.
    """
    if all(p <= theta_lo or p >= theta_hi for p in marginals.p.values()):
        return None
    return marginals.closest_to_half(exclude=asked)


@dataclass
class Transcript:
    """Ordered record of an assessment run."""

    events: list[tuple] = field(default_factory=list)

    def ask(self, concept: str) -> None:
        self.events.append(("ask", concept))

    def answer(self, concept: str, correct: bool) -> None:
        self.events.append(("answer", concept, int(correct)))

    def marginal(self, concept: str, p: float) -> None:
        self.events.append(("marginal", concept, p))

    def final(self, state: State) -> None:
        self.events.append(("final", state))

    def render(self) -> str:
        lines = []
        for ev in self.events:
            if ev[0] == "final":
                lines.append(f"final {ev[1]}")
            elif ev[0] == "marginal":
                lines.append(f"marginal {ev[1]} {ev[2]!r}")
            else:
                lines.append(" ".join(str(x) for x in ev))
        return "\n".join(lines) + "\n"


@dataclass
class AssessmentResult:
    state: State
    transcript: Transcript
    questions_asked: int
    forced_termination: bool


class ProjectionAssessment:
    """Stepwise driver of the projection-based assessment loop.

    Each round partitions the not-yet-asked concepts randomly into
    collections, assesses each collection's projection (asked concepts ride
    along in every projection), and either finishes — every marginal
    settled past the thresholds — or asks the concept nearest 50%.  A hard
    cap of one question per concept forces termination with a diagnostic
    flag if settling never happens.

    Drive it via :attr:`current_question` / :meth:`submit_answer`, or use
    :func:`run_projection_assessment` with an answer oracle.
    """

    def __init__(self, sp: SequenceSpace, cfg: AssessmentConfig | None = None):
        self.space = sp
        self.cfg = cfg or AssessmentConfig()
        self.rng = random.Random(self.cfg.seed)
        self.log = ResponseLog()
        self.transcript = Transcript()
        self.marginals: dict[str, float] = {}
        self.current_question: str | None = None
        self.done = False
        self.forced = False
        self._final: State | None = None
        self._round()

    @property
    def asked(self) -> frozenset[str]:
        return self.log.asked

    def _assess_round(self) -> dict[str, float]:
        dom = self.space.domain
        asked = [c for c in dom.concepts if c in self.log.asked]
        unresolved = [c for c in dom.concepts if c not in self.log.asked]
        self.rng.shuffle(unresolved)
        size = self.cfg.collection_size
        collections = [
            unresolved[i : i + size] for i in range(0, len(unresolved), size)
        ]
        marg: dict[str, float] = {}
        if not collections:
            sub = project(self.space, asked) if len(asked) < dom.n else self.space
            m = assess(sub, self.log, self.cfg)
            marg.update(m.p)
            return marg
        for count, coll in enumerate(collections):
            keep = asked + coll
            sub = self.space if len(keep) == dom.n else project(self.space, keep)
            m = assess(sub, self.log, self.cfg)
            for c in coll:
                marg[c] = m.p[c]
            if count == 0:
                for c in asked:
                    marg[c] = m.p[c]
        return marg

    def _round(self) -> None:
        cfg = self.cfg
        marg = self._assess_round()
        self.marginals = marg
        for c in self.space.domain.concepts:
            self.transcript.marginal(c, marg[c])
        settled = all(
            p <= cfg.theta_lo or p >= cfg.theta_hi for p in marg.values()
        )
        unasked = [c for c in self.space.domain.concepts if c not in self.log.asked]
        if settled or not unasked:
            self.done = True
            self.forced = not settled
            high = [c for c in self.space.domain.concepts if marg[c] >= cfg.theta_hi]
            # snap the thresholded concept set to the nearest member state
            mask = self.space.domain.mask_of(high)
            self._final = seq_up(self.space, seq_mex(self.space, mask))
            self.transcript.final(self._final)
            self.current_question = None
            return
        fake = Marginals(p={c: marg[c] for c in self.space.domain.concepts}, normalizer=1.0)
        q = fake.closest_to_half(exclude=self.log.asked)
        self.current_question = q
        self.transcript.ask(q)

    def submit_answer(self, concept: str, correct: bool) -> None:
        if self.done or concept != self.current_question:
            raise ValidationError("answer does not match the current question")
        self.log = self.log.record(concept, correct)
        self.transcript.answer(concept, correct)
        self._round()

    def result(self) -> AssessmentResult:
        if not self.done:
            raise ValidationError("assessment still running")
        return AssessmentResult(
            state=self._final,
            transcript=self.transcript,
            questions_asked=len(self.log.entries),
            forced_termination=self.forced,
        )


def run_projection_assessment(
    sp: SequenceSpace,
    student: Callable[[str], bool],
    cfg: AssessmentConfig | None = None,
) -> AssessmentResult:
    """Drive the loop against an answer oracle until termination."""
    session = ProjectionAssessment(sp, cfg)
    while not session.done:
        q = session.current_question
        session.submit_answer(q, bool(student(q)))
    return session.result()


def simulated_student(true_state: State, model: ResponseModel, seed: int) -> Callable[[str], bool]:
    """Answer oracle for a fixed true state with the model's error rates."""
    rng = random.Random(seed)

    def answer(concept: str) -> bool:
        if concept in true_state:
            return rng.random() >= model.beta
        return rng.random() < model.eta

    return answer


def augment_with_random_sample(
    sp: SequenceSpace,
    q: Iterable[str],
    target_concept: str,
    sample_size: int,
    seed: int,
) -> SequenceSpace:
    """Projection onto Q, the target, and a random sample of other concepts.

    The sample counters the information loss of tiny projections: it keeps
    the projected state counts representative of the full space.
    """
    if sample_size < 0:
        raise ValidationError("sample_size must be non-negative")
    keep = set(q) | {target_concept}
    rest = [c for c in sp.domain.concepts if c not in keep]
    rng = random.Random(seed)
    sample = rng.sample(rest, min(sample_size, len(rest)))
    return project(sp, keep | set(sample))
