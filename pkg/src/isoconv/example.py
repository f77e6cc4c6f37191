"""End-to-end check of the (5,3,2) worked example.

The received table erases ``y_0``, ``y_1``, ``u_1[0]``, ``y_2`` and all of
``v_4`` of a frame with ``gamma = 3``; with ``T = 1`` the decoder must

* recover ``y_0`` from the first window at delay 0,
* fail on ``v_1`` with both windows, recover ``x_2`` and ``y_2`` with
  ``i = l = 1``, and declare the rest of ``v_1`` lost,
* recover the lost symbols and all of ``v_4`` from the termination step at
  time 3, so ``v_4`` gets delay -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .algebra.field import Field, FieldSpec
from .algebra.linalg import Matrix
from .algebra.structure import classify_minors
from .convcode import PolyGenerator, column_degrees_and_reduced, encode
from .decoder import RECOVERED, Decoder, DecodeReport, ReceivedStream
from .pipeline import SplitMix64
from .sysrep import StateSpace, construct_example_532, example_superregular_matrix, generator_of, is_mdp_system

T = 1
GAMMA = 3
MESSAGE_SEED = 532
E, K = True, False
MASK = (
    (E, E, K, K, K),
    (E, E, E, K, K),
    (E, E, K, K, K),
    (K, K, K, K, K),
    (E, E, E, E, E),
)
# exponents of a in [C D 0; CA CB D], None for the structural zeros
DISPLAY = (
    (8, 16, 1, 2, 4, None, None, None),
    (16, 32, 2, 4, 8, None, None, None),
    (64, 128, 8, 16, 32, 1, 2, 4),
    (128, 256, 16, 32, 64, 2, 4, 8),
)
TRIVIAL_MINORS = 5  # the three right-hand columns plus any one of the other five


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ExampleResult:
    checks: list[Check] = dc_field(default_factory=list)
    report: DecodeReport | None = None
    baseline: DecodeReport | None = None
    field: Field | None = None

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(ok), detail))

    def summary(self) -> str:
        lines = [f"{'PASS' if c.ok else 'FAIL'} {c.name}" + (f": {c.detail}" if c.detail else "") for c in self.checks]
        lines.append("PASS" if self.ok else "FAIL")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.checks]}


def example_frame(G: PolyGenerator, seed: int = MESSAGE_SEED) -> tuple[list[list[int]], list[list[int]]]:
    rng = SplitMix64(seed)
    msg = [[rng.field_element(G.field) for _ in range(G.k)] for _ in range(GAMMA + 1)]
    return msg, encode(G, msg)


def _status(report: DecodeReport, t: int, c: int):
    return report.status[t][c]


def _check_matrices(res: ExampleResult, sys: StateSpace) -> None:
    F = sys.field
    a = F.spec.generator
    M, pattern = example_superregular_matrix(sys)
    want = Matrix(F, [[0 if e is None else F.pow(a, e) for e in row] for row in DISPLAY])
    res.add("matrices", M == want, "[C D 0; CA CB D] equals the displayed powers of a")
    rep = classify_minors(M, pattern, sizes="full")
    res.add("minors-total", rep.total == math.comb(8, 4), f"{rep.total} full-size minors")
    res.add("minors-trivial", rep.trivially_zero == TRIVIAL_MINORS, f"{rep.trivially_zero} trivially zero")
    res.add("superregular", rep.ok and rep.nonzero == rep.total - TRIVIAL_MINORS,
            f"{rep.nonzero} nontrivial minors, all nonzero")
    res.add("mdp", is_mdp_system(sys), "every nontrivial minor of F_1 is nonzero")


def _check_narrative(res: ExampleResult, r: DecodeReport, codeword: list[list[int]]) -> None:
    st = lambda t, c: _status(r, t, c)  # noqa: E731
    y0 = all(st(0, c).kind == RECOVERED and st(0, c).delay(0) == 0 and st(0, c).method == "window" for c in (0, 1))
    res.add("y_0", y0, "recovered by the j=0 window at delay 0")
    windows = [e for e in r.events if e["step"] == "window" and e.get("i") == 1]
    res.add("v_1 windows", [(e["j"], e["success"]) for e in windows] == [(0, False), (1, False)],
            "j=0 and j=1 both fail")
    state = [e for e in r.events if e["step"] == "state" and e["success"]]
    ok = (
        len(state) == 1
        and (state[0]["i"], state[0]["l"]) == (1, 1)
        and state[0]["backfill"] == "lost"
        and all(st(2, c).method == "state" and st(2, c).delay(2) == 1 for c in (0, 1))
    )
    res.add("x_2,y_2", ok, "state recovery with i=l=1 yields y_2 at delay 1")
    lost_then = all(
        st(1, c).kind == RECOVERED and st(1, c).was_lost and st(1, c).lost_reason == "step10"
        and st(1, c).method == "terminal"
        for c in (0, 1, 2)
    )
    res.add("y_1,u_1[0]", lost_then, "lost at step 10, then recovered by termination at time 3")
    future = all(st(4, c).kind == RECOVERED and st(4, c).method == "terminal" and st(4, c).time == 3
                 and st(4, c).delay(4) == -1 for c in range(5))
    res.add("u_4,y_4", future, "recovered at time 3, delay -1")
    res.add("termination", r.termination_used and r.termination_time == 3, "termination step used at time 3")
    res.add("complete", not r.lost() and r.values == codeword, "every symbol equals the transmitted one")


def verify_example(spec: FieldSpec | None = None, seed: int = MESSAGE_SEED) -> ExampleResult:
    res = ExampleResult()
    sys = construct_example_532(spec)
    res.field = sys.field
    _check_matrices(res, sys)
    G = generator_of(sys)
    degs, reduced = column_degrees_and_reduced(G)
    res.add("generator", sorted(degs, reverse=True) == [1, 1, 0] and reduced and G.mu == 1,
            f"column degrees {degs}, mu = {G.mu}")
    _, codeword = example_frame(G, seed)
    stream = ReceivedStream.from_codeword(G.k, GAMMA, codeword, MASK)
    dec = Decoder(sys, T, GAMMA + G.mu, generator=G)
    res.report = dec.decode(stream)
    _check_narrative(res, res.report, codeword)
    res.baseline = dec.baseline(stream)
    b0 = [res.baseline.delay(0, c) for c in (0, 1)]
    res.add("baseline y_0", b0 == [1, 1], f"baseline recovers y_0 at delay {b0}")
    return res
