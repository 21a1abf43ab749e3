"""Empirical min-entropy diagnostics for prover outputs.

For each fresh context (pk, ct) the second-round answer d' at challenge
b' = 0 is sampled repeatedly; the guessing probability is the mean over
contexts of the per-context maximum outcome frequency, and
h_min = -log2(guessing_prob).  A score/entropy report flags the combination
(success well above 3/4, h_min near 0) that is excluded for sound classical
strategies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .params import Params
from .protocol_q import (honest_prover_round1, honest_prover_round2,
                         run_experiment, verifier_round1)
from .sampling import RngStream
from .stats import Stats

MIN_REPLAYS = 10


@dataclass(frozen=True)
class EntropyEstimate:
    guessing_prob: float
    worst_context_prob: float
    contexts: int
    samples_per_context: int
    rewound: bool   # True when round 2 was replayed from stored state

    @property
    def h_min(self) -> float:
        if self.guessing_prob >= 1.0:
            return 0.0
        return -math.log2(self.guessing_prob)


def estimate_minentropy(prover, params: Params, contexts: int, replays: int,
                        stream: RngStream) -> EntropyEstimate:
    """Classical provers are rewound: one first response per context, then
    `replays` fresh second responses at b' = 0.  The quantum simulator
    cannot be rewound (measuring consumes the qubit), so it is re-run from
    scratch per replay and the estimate is flagged accordingly."""
    if replays < MIN_REPLAYS:
        raise ValueError(f"need at least {MIN_REPLAYS} replays per context")
    if contexts < 1:
        raise ValueError("contexts must be >= 1")
    quantum = getattr(prover, "quantum", False)
    probs = []
    for c in range(contexts):
        ctx = stream.derive("entropy-context", c)
        vstate, (pk, ct) = verifier_round1(params, ctx.derive("verifier"))
        witness = (vstate.keypair.s, vstate.keypair.e)
        ones = 0
        if quantum:
            for r in range(replays):
                ps = ctx.derive("full-run", r)
                pstate, _ = honest_prover_round1(params, pk, ct, witness, ps)
                ones += honest_prover_round2(pstate, 0, ps)
        else:
            y, u, mem = prover.first_response(pk, ct, ctx.derive("prover"))
            for r in range(replays):
                ones += int(prover.second_response(0, mem,
                                                   ctx.derive("replay", r)))
        probs.append(max(ones, replays - ones) / replays)
    return EntropyEstimate(
        guessing_prob=sum(probs) / len(probs),
        worst_context_prob=min(probs),
        contexts=contexts,
        samples_per_context=replays,
        rewound=not quantum,
    )


WARN_SCORE_MARGIN = 0.02
WARN_HMIN_FLOOR = 0.05


@dataclass(frozen=True)
class ScoreEntropyReport:
    stats: Stats
    entropy: EntropyEstimate
    warning: bool

    def lines(self) -> list[str]:
        out = [
            f"success rate: {self.stats.summary()}",
            (f"h_min(d' | context, b'=0) = {self.entropy.h_min:.4f} bits "
             f"(guessing prob {self.entropy.guessing_prob:.4f}, "
             f"{self.entropy.contexts} contexts x "
             f"{self.entropy.samples_per_context} replays, "
             f"{'rewound' if self.entropy.rewound else 'independent full runs'})"),
        ]
        if self.warning:
            out.append(
                "WARNING: success exceeds 3/4 while d' carries almost no "
                "fresh randomness; no sound classical strategy can do this."
            )
        return out


def warning_rule(stats: Stats, entropy: EntropyEstimate) -> bool:
    return (stats.estimate - 0.75 > WARN_SCORE_MARGIN
            and entropy.h_min < WARN_HMIN_FLOOR)


def build_report(stats: Stats, entropy: EntropyEstimate) -> ScoreEntropyReport:
    return ScoreEntropyReport(stats=stats, entropy=entropy,
                              warning=warning_rule(stats, entropy))


def score_entropy_report(prover, params: Params, trials: int,
                         stream: RngStream, contexts: int = 50,
                         replays: int = 100) -> ScoreEntropyReport:
    stats = run_experiment(params, prover, trials, stream.derive("score"))
    entropy = estimate_minentropy(prover, params, contexts, replays,
                                  stream.derive("entropy"))
    return build_report(stats, entropy)
