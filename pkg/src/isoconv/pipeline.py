"""Framing, erasure channels and the ground-truth experiment runner.

Randomness comes from SplitMix64, a 64-bit counter-based generator: output
number ``i`` (0-based) of the stream with seed ``s`` is
``mix64(s + (i + 1) * 0x9E3779B97F4A7C15 mod 2^64)`` where ``mix64`` is

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2^64
    z = z ^ (z >> 31)

A uniform float is ``(out >> 11) / 2^53``.  A field element of a field with
``q`` elements is drawn by rejection: take ``ceil(log2 q)`` bits from
consecutive outputs (least significant word first), retry when the value is
at least ``q``.  Trial ``i`` of an experiment with seed ``s`` draws its channel
from the stream with seed ``s + i`` and its message from the stream with seed
``mix64(s + i) ^ MESSAGE_TAG``.  The erasure decision for symbol ``c`` of
block ``t`` is made in order ``t`` then ``c``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Sequence, Union

from .algebra.field import Field
from .convcode import PolyGenerator, encode
from .decoder import Decoder, DecodeReport, ReceivedStream
from .errors import PatternError, ShapeError, SoundnessError
from .sysrep import StateSpace

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MESSAGE_TAG = 0x6D657373616765  # "message"


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Counter-based 64-bit generator; see the module docstring."""

    def __init__(self, seed: int) -> None:
        self.seed = seed & MASK64
        self.counter = 0

    def at(self, i: int) -> int:
        return mix64(self.seed + (i + 1) * GOLDEN)

    def next_u64(self) -> int:
        v = self.at(self.counter)
        self.counter += 1
        return v

    def random(self) -> float:
        return (self.next_u64() >> 11) / float(1 << 53)

    def bits(self, nbits: int) -> int:
        v, got = 0, 0
        while got < nbits:
            v |= self.next_u64() << got
            got += 64
        return v & ((1 << nbits) - 1)

    def below(self, bound: int) -> int:
        if bound <= 0:
            raise ValueError("bound must be positive")
        nbits = max(1, (bound - 1).bit_length())
        while True:
            v = self.bits(nbits)
            if v < bound:
                return v

    def field_element(self, F: Field) -> int:
        # elements are coded as integers 0..q-1 for every field representation
        return self.below(F.order)


def message_rng(seed: int) -> SplitMix64:
    return SplitMix64(mix64(seed) ^ MESSAGE_TAG)


# -- frames -------------------------------------------------------------------


@dataclass(frozen=True)
class Frame:
    """A message of degree ``gamma`` and its encoding ``v_0..v_{gamma+mu}``."""

    gamma: int
    message: tuple[tuple[int, ...], ...]
    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def encode(cls, G: PolyGenerator, message: Sequence[Sequence[int]]) -> "Frame":
        blocks = encode(G, message)
        return cls(len(message) - 1, tuple(map(tuple, message)), tuple(map(tuple, blocks)))

    @classmethod
    def random(cls, G: PolyGenerator, gamma: int, rng: SplitMix64) -> "Frame":
        msg = [[rng.field_element(G.field) for _ in range(G.k)] for _ in range(gamma + 1)]
        return cls.encode(G, msg)

    @property
    def n(self) -> int:
        return len(self.blocks[0])

    @property
    def symbols(self) -> int:
        return sum(len(b) for b in self.blocks)


# -- channels -----------------------------------------------------------------


def _check_prob(name: str, p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class IID:
    """Independent erasures; ``p_y``/``p_u`` override the rate per block part."""

    p_erase: float
    seed: int = 0
    p_y: float | None = None
    p_u: float | None = None

    def __post_init__(self) -> None:
        _check_prob("p_erase", self.p_erase)
        for name in ("p_y", "p_u"):
            v = getattr(self, name)
            if v is not None:
                _check_prob(name, v)

    def mask(self, frame: Frame, k: int, rng: SplitMix64) -> list[list[bool]]:
        py = self.p_erase if self.p_y is None else self.p_y
        pu = self.p_erase if self.p_u is None else self.p_u
        n = frame.n
        return [[rng.random() < (py if c < n - k else pu) for c in range(n)] for _ in frame.blocks]


@dataclass(frozen=True)
class Burst:
    """Gilbert-Elliott channel; starts in the good state."""

    p_good_to_bad: float
    p_bad_to_good: float
    p_bad: float = 1.0
    p_good: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("p_good_to_bad", "p_bad_to_good", "p_bad", "p_good"):
            _check_prob(name, getattr(self, name))

    def mask(self, frame: Frame, k: int, rng: SplitMix64) -> list[list[bool]]:
        bad = False
        out = []
        for b in frame.blocks:
            row = []
            for _ in b:
                row.append(rng.random() < (self.p_bad if bad else self.p_good))
                flip = rng.random() < (self.p_bad_to_good if bad else self.p_good_to_bad)
                bad = bad != flip
            out.append(row)
        return out


@dataclass(frozen=True)
class PatternChannel:
    """A fixed erasure mask, one row of booleans per block."""

    pattern: tuple[tuple[bool, ...], ...]
    seed: int = 0

    def mask(self, frame: Frame, k: int, rng: SplitMix64) -> list[list[bool]]:
        if len(self.pattern) != len(frame.blocks) or any(
            len(r) != len(b) for r, b in zip(self.pattern, frame.blocks)
        ):
            raise PatternError(
                f"pattern has {sum(map(len, self.pattern))} symbols in {len(self.pattern)} blocks, "
                f"frame has {frame.symbols} in {len(frame.blocks)}"
            )
        return [list(r) for r in self.pattern]


ChannelModel = Union[IID, Burst, PatternChannel]


def apply_channel(
    frame: Frame, model: ChannelModel, k: int, rng: SplitMix64 | None = None
) -> tuple[ReceivedStream, list[list[bool]]]:
    """Erase symbols of ``frame``; returns the stream and the mask used."""
    if rng is None:
        rng = SplitMix64(model.seed)
    mask = model.mask(frame, k, rng)
    return ReceivedStream.from_codeword(k, frame.gamma, frame.blocks, mask), mask


# -- statistics ---------------------------------------------------------------


@dataclass
class DecoderTrial:
    erasures: int
    lost: int
    recovered: int
    delay_sum: int
    max_delay: int | None
    negative: int
    mult_count: int
    terminal: bool

    @classmethod
    def from_report(cls, report: DecodeReport, mask: Sequence[Sequence[bool]]) -> "DecoderTrial":
        delays = []
        lost = 0
        for t, row in enumerate(mask):
            for c, erased in enumerate(row):
                if not erased:
                    continue
                d = report.delay(t, c)
                if d is None:
                    lost += 1
                else:
                    delays.append(d)
        return cls(
            erasures=sum(map(sum, mask)),
            lost=lost,
            recovered=len(delays),
            delay_sum=sum(delays),
            max_delay=max(delays) if delays else None,
            negative=sum(1 for d in delays if d < 0),
            mult_count=report.mult_count,
            terminal=report.termination_used,
        )

    @property
    def mean_delay(self) -> float | None:
        return self.delay_sum / self.recovered if self.recovered else None

    def to_dict(self) -> dict:
        return {
            "erasures": self.erasures,
            "lost": self.lost,
            "recovered": self.recovered,
            "mean_delay": self.mean_delay,
            "max_delay": self.max_delay,
            "negative_delays": self.negative,
            "mult_count": self.mult_count,
            "termination_used": self.terminal,
        }


@dataclass
class Aggregate:
    trials: int = 0
    erasures: int = 0
    lost: int = 0
    recovered: int = 0
    delay_sum: int = 0
    negative: int = 0
    mult_count: int = 0
    terminal: int = 0
    histogram: Counter = dc_field(default_factory=Counter)

    def add(self, trial: DecoderTrial, delays: Sequence[int]) -> None:
        self.trials += 1
        self.erasures += trial.erasures
        self.lost += trial.lost
        self.recovered += trial.recovered
        self.delay_sum += trial.delay_sum
        self.negative += trial.negative
        self.mult_count += trial.mult_count
        self.terminal += trial.terminal
        self.histogram.update(delays)

    @property
    def mean_delay(self) -> float | None:
        """Mean delay over all recovered erased symbols."""
        return self.delay_sum / self.recovered if self.recovered else None

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "erasures": self.erasures,
            "lost": self.lost,
            "recovered": self.recovered,
            "mean_delay": self.mean_delay,
            "negative_delays": self.negative,
            "mult_count": self.mult_count,
            "mean_mult_count": self.mult_count / self.trials if self.trials else None,
            "termination_used": self.terminal,
            "delay_histogram": {str(d): self.histogram[d] for d in sorted(self.histogram)},
        }


@dataclass
class TrialStats:
    """Per-trial records and aggregates for the low-delay decoder and the baseline."""

    T: int
    seed: int
    per_trial: list[dict[str, DecoderTrial]] = dc_field(default_factory=list)
    totals: dict[str, Aggregate] = dc_field(default_factory=lambda: {"decode": Aggregate(), "baseline": Aggregate()})
    symbols: int = 0

    def add(self, trial: dict[str, DecoderTrial], delays: dict[str, list[int]]) -> None:
        self.per_trial.append(trial)
        for name, rec in trial.items():
            self.totals[name].add(rec, delays[name])

    def to_dict(self, include_trials: bool = False) -> dict:
        d = {
            "T": self.T,
            "seed": self.seed,
            "trials": len(self.per_trial),
            "symbols_per_trial": self.symbols,
            "decode": self.totals["decode"].to_dict(),
            "baseline": self.totals["baseline"].to_dict(),
        }
        if include_trials:
            d["per_trial"] = [{k: v.to_dict() for k, v in t.items()} for t in self.per_trial]
        return d


def _erased_delays(report: DecodeReport, mask: Sequence[Sequence[bool]]) -> list[int]:
    out = []
    for t, row in enumerate(mask):
        for c, erased in enumerate(row):
            if erased:
                d = report.delay(t, c)
                if d is not None:
                    out.append(d)
    return out


def check_soundness(report: DecodeReport, frame: Frame, seed: int | None = None) -> None:
    for t, (got, want) in enumerate(zip(report.values, frame.blocks)):
        for c, (a, b) in enumerate(zip(got, want)):
            if a is not None and a != b:
                raise SoundnessError(f"symbol ({t},{c}) decoded as {a}, transmitted {b}", seed)


def run_experiment(
    sys: StateSpace,
    G: PolyGenerator,
    model: ChannelModel,
    trials: int,
    T: int,
    *,
    gamma: int = 3,
    L: int | None = None,
) -> TrialStats:
    """Encode random messages, erase, decode with both decoders and check every value.

    The experiment seed is ``model.seed``; trial ``i`` uses ``model.seed + i``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if (G.n, G.k) != (sys.n, sys.k):
        raise ShapeError("generator and system describe codes of different shapes")
    last = gamma + G.mu
    dec = Decoder(sys, T, last, L, generator=G)
    stats = TrialStats(T=T, seed=model.seed, symbols=(last + 1) * G.n)
    for i in range(trials):
        seed = (model.seed + i) & MASK64
        frame = Frame.random(G, gamma, message_rng(seed))
        stream, mask = apply_channel(frame, model, G.k, SplitMix64(seed))
        rec: dict[str, DecoderTrial] = {}
        delays: dict[str, list[int]] = {}
        for name, report in (("decode", dec.decode(stream)), ("baseline", dec.baseline(stream))):
            check_soundness(report, frame, seed)
            rec[name] = DecoderTrial.from_report(report, mask)
            delays[name] = _erased_delays(report, mask)
        stats.add(rec, delays)
    return stats
