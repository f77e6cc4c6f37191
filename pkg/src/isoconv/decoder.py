"""Low-delay erasure decoding through the ISO representation, plus a baseline.

Timing model: block ``v_t`` arrives at time ``t``.  The decoder clock ``tau``
is the newest block any computation so far has needed, so a symbol resolved
by a computation at clock ``tau`` has delay ``tau - t``; symbols obtained from
the termination equations before they are sent get negative delays.

Blocks after the last one of the frame are known to be zero; windows that
run past the end of the frame use them as received blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

from .algebra.linalg import Matrix, inverse, mat_vec, solve_rows
from .convcode import PolyGenerator, compute_L
from .errors import DivisionByZero, IntegrityError, PrefixUnknown, ShapeError
from .sysrep import StateSpace, StructuralCache, TerminationMatrix

CLEAN = "clean"
PENDING = "pending"
RECOVERED = "recovered"
LOST = "lost"


@dataclass(frozen=True)
class ReceivedStream:
    """Blocks ``v_0..v_{gamma+mu}``, ``None`` marking an erasure."""

    n: int
    k: int
    gamma: int
    blocks: tuple[tuple[int | None, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(tuple(b) for b in self.blocks))
        for t, b in enumerate(self.blocks):
            if len(b) != self.n:
                raise ShapeError(f"block {t} has {len(b)} symbols, expected {self.n}")
        if not self.blocks:
            raise ShapeError("a stream needs at least one block")

    @property
    def last(self) -> int:
        return len(self.blocks) - 1

    @property
    def erasures(self) -> int:
        return sum(1 for b in self.blocks for v in b if v is None)

    @classmethod
    def from_codeword(cls, k: int, gamma: int, blocks: Sequence[Sequence[int]], mask: Sequence[Sequence[bool]] | None = None) -> "ReceivedStream":
        """Erase the positions where ``mask`` is True."""
        if mask is None:
            return cls(len(blocks[0]), k, gamma, tuple(tuple(b) for b in blocks))
        return cls(len(blocks[0]), k, gamma,
                   tuple(tuple(None if e else v for v, e in zip(b, m)) for b, m in zip(blocks, mask)))


@dataclass
class SymbolStatus:
    kind: str
    time: int | None = None
    method: str | None = None
    was_lost: bool = False
    lost_reason: str | None = None

    def delay(self, t: int) -> int | None:
        if self.kind == CLEAN:
            return 0
        if self.kind == RECOVERED:
            return self.time - t
        return None

    def to_dict(self, t: int) -> dict:
        d: dict = {"status": self.kind}
        if self.kind == RECOVERED:
            d.update(time=self.time, delay=self.time - t, method=self.method)
        if self.was_lost or self.kind == LOST:
            d["lost_reason"] = self.lost_reason
        return d


@dataclass
class DecodeReport:
    n: int
    k: int
    gamma: int
    T: int
    status: list[list[SymbolStatus]]
    values: list[list[int | None]]
    mult_count: int = 0
    windows_solved: int = 0
    state_attempts: int = 0
    state_recoveries: int = 0
    termination_used: bool = False
    termination_time: int | None = None
    events: list[dict] = dc_field(default_factory=list)

    @property
    def last(self) -> int:
        return len(self.status) - 1

    def symbols(self) -> Iterator[tuple[int, int, SymbolStatus]]:
        for t, row in enumerate(self.status):
            for c, st in enumerate(row):
                yield t, c, st

    def lost(self) -> list[tuple[int, int]]:
        return [(t, c) for t, c, st in self.symbols() if st.kind == LOST]

    def recovered(self) -> list[tuple[int, int]]:
        return [(t, c) for t, c, st in self.symbols() if st.kind == RECOVERED]

    def delay(self, t: int, c: int) -> int | None:
        return self.status[t][c].delay(t)

    @property
    def complete(self) -> bool:
        return not self.lost()

    def to_dict(self, hexify=None) -> dict:
        fmt = hexify or (lambda v: v)
        return {
            "n": self.n,
            "k": self.k,
            "gamma": self.gamma,
            "T": self.T,
            "symbols": [[st.to_dict(t) for st in row] for t, row in enumerate(self.status)],
            "values": [[None if v is None else fmt(v) for v in row] for row in self.values],
            "mult_count": self.mult_count,
            "windows_solved": self.windows_solved,
            "state_attempts": self.state_attempts,
            "state_recoveries": self.state_recoveries,
            "termination_used": self.termination_used,
            "termination_time": self.termination_time,
            "lost": len(self.lost()),
            "events": self.events,
        }


@dataclass(frozen=True)
class DecoderConfig:
    T: int
    L: int | None = None
    baseline: bool = False

    def __post_init__(self) -> None:
        if self.T < 0:
            raise ValueError("the delay bound T must be nonnegative")


@dataclass
class WindowOutcome:
    """Solution of one sliding-window system."""

    variables: list[tuple]
    values: list[int | None]
    state: list[int] | None = None

    def determined(self) -> dict[tuple[int, int], int]:
        return {v: x for v, x in zip(self.variables, self.values) if v[0] != "x" and x is not None}

    def covers_block(self, t: int) -> bool:
        return all(x is not None for v, x in zip(self.variables, self.values) if v[0] == t)

    def covers_all(self) -> bool:
        return all(x is not None for v, x in zip(self.variables, self.values) if v[0] != "x")


def state_from_prefix(sys: StateSpace, inputs: Sequence[Sequence[int | None]]) -> list[int]:
    """``x_i`` from fully known ``u_0..u_{i-1}``."""
    x = [0] * sys.s
    for t, u in enumerate(inputs):
        if any(v is None for v in u):
            raise PrefixUnknown(f"input u_{t} is not fully known")
        x, _ = sys.step(x, u)
    return x


def _inverse_series(G: PolyGenerator, terms: int) -> list[Matrix]:
    """Coefficients ``Q_0..Q_terms`` of ``U(z)^{-1}``, where ``U(z)`` is the
    input part of ``G(z)``, so that ``m_t = sum_r Q_{t-r} u_r``."""
    p = G.n - G.k
    U = [c.submatrix(range(p, G.n), range(G.k)) for c in G.coeffs]
    try:
        q0 = inverse(U[0])
    except DivisionByZero as exc:
        raise ShapeError("the input part of G(0) is singular") from exc
    Q = [q0]
    for t in range(1, terms + 1):
        acc = Matrix.zeros(G.field, G.k, G.k)
        for i in range(1, min(t, G.mu) + 1):
            acc = acc + U[i] @ Q[t - i]
        Q.append(-(q0 @ acc))
    return Q


class Decoder:
    """Structural data for one system, delay bound and frame length.

    Instances are read-only after construction and can decode any number of
    streams of the matching length.
    """

    def __init__(
        self,
        sys: StateSpace,
        T: int,
        last: int,
        L: int | None = None,
        generator: PolyGenerator | None = None,
    ) -> None:
        if T < 0:
            raise ValueError("the delay bound T must be nonnegative")
        self.sys = sys
        self.T = T
        self.last = last
        if L is None:
            L = compute_L(sys.n, sys.k, sys.s)
        self.L = 0 if L is None else L
        self.cache = StructuralCache(sys, max(T, self.L))
        self.term = TerminationMatrix(self.cache, last, max(sys.s - 1, 0))
        self.tail = self.cache.obs(self.term.w_max) if sys.s else None
        self.out_obs = self.cache.obs(last)
        for t in range(last + 1):
            self.cache.power(last + 1 - t)
            self.cache.markov(t)
        self.generator = generator
        self.inverse_series = _inverse_series(generator, last) if generator is not None else None
    def session(self, stream: ReceivedStream) -> "DecodeSession":
        return DecodeSession(self, stream)

    def decode(self, stream: ReceivedStream) -> DecodeReport:
        s = self.session(stream)
        s.run()
        return s.report()

    def baseline(self, stream: ReceivedStream) -> DecodeReport:
        s = self.session(stream)
        s.run_baseline()
        return s.report()


def decode(
    sys: StateSpace, stream: ReceivedStream, config: DecoderConfig, generator: PolyGenerator | None = None
) -> DecodeReport:
    """Low-delay decoding, or the baseline when ``config.baseline`` is set.

    ``generator`` is the matrix the message was encoded with; when given, the
    termination step also uses that the message has degree ``gamma``.
    """
    dec = Decoder(sys, config.T, stream.last, config.L, generator)
    return dec.baseline(stream) if config.baseline else dec.decode(stream)


def baseline_decode(sys: StateSpace, stream: ReceivedStream, config: DecoderConfig) -> DecodeReport:
    return Decoder(sys, config.T, stream.last, config.L).baseline(stream)


class DecodeSession:
    """Mutable decoding state for one stream."""

    def __init__(self, dec: Decoder, stream: ReceivedStream) -> None:
        sys = dec.sys
        if stream.n != sys.n or stream.k != sys.k:
            raise ShapeError("stream dimensions do not match the system")
        if stream.last != dec.last:
            raise ShapeError(f"stream has {stream.last + 1} blocks, decoder expects {dec.last + 1}")
        self.dec = dec
        self.sys = sys
        self.F = sys.field
        self.stream = stream
        self.n, self.k, self.p, self.s = sys.n, sys.k, sys.n - sys.k, sys.s
        self.last = stream.last
        self.val: list[list[int | None]] = [list(b) for b in stream.blocks]
        self.erased = [[v is None for v in b] for b in stream.blocks]
        self.status = [[SymbolStatus(PENDING if v is None else CLEAN) for v in b] for b in stream.blocks]
        self.tau = 0
        self.complete = False
        self.states: dict[int, list[int]] = {0: [0] * self.s}
        self.mults = 0
        self.windows_solved = 0
        self.state_attempts = 0
        self.state_recoveries = 0
        self.termination_time: int | None = None
        self.events: list[dict] = []
        self._terminal_key: tuple[int, int] | None = None

    # -- bookkeeping --------------------------------------------------------
    def advance(self, t: int) -> None:
        self.tau = max(self.tau, min(t, self.last))

    def known(self, t: int, c: int) -> int | None:
        if t > self.last:
            return 0
        if t > self.tau and not self.complete:
            return None
        return self.val[t][c]

    def pending(self, t: int) -> list[int]:
        return [c for c in range(self.n) if self.status[t][c].kind == PENDING]

    def outstanding(self) -> bool:
        """Whether some symbol has been declared lost and is still unknown."""
        return any(
            st.kind == LOST and self.val[t][c] is None
            for t in range(self.last + 1)
            for c, st in enumerate(self.status[t])
        )

    def _mv(self, M: Matrix, v: Sequence[int]) -> list[int]:
        out, m = mat_vec(M, v)
        self.mults += m
        return out

    def state(self, t: int) -> list[int] | None:
        """``x_t`` propagated from the nearest known earlier state, if possible."""
        if t in self.states:
            return self.states[t]
        t0 = max(q for q in self.states if q <= t)
        x = self.states[t0]
        F = self.F
        for r in range(t0, t):
            u = [self.known(r, self.p + c) for c in range(self.k)]
            if any(v is None for v in u):
                return None
            ax = self._mv(self.sys.A, x)
            bu = self._mv(self.sys.B, u)
            x = [F.add(a, b) for a, b in zip(ax, bu)]
            self.states[r + 1] = x
        return x

    def _set(self, t: int, c: int, value: int, method: str) -> None:
        if t > self.last:
            return
        if not self.erased[t][c]:
            if self.val[t][c] != value:
                raise IntegrityError(f"predicted symbol ({t},{c}) disagrees with the received one")
            return
        if self.val[t][c] is not None:
            if self.val[t][c] != value:
                raise IntegrityError(f"symbol ({t},{c}) recovered twice with different values")
            return
        self.val[t][c] = value
        st = self.status[t][c]
        self.status[t][c] = SymbolStatus(RECOVERED, self.tau, method, was_lost=st.kind == LOST,
                                         lost_reason=st.lost_reason)

    def _mark_lost(self, t: int, c: int, reason: str) -> None:
        if self.status[t][c].kind == PENDING:
            self.status[t][c] = SymbolStatus(LOST, lost_reason=reason)

    def _commit(self, outcome: WindowOutcome, method: str) -> list[list[int]]:
        done = []
        for (t, c), v in outcome.determined().items():
            if t <= self.last and self.val[t][c] is None:
                self._set(t, c, v, method)
                done.append([t, c])
        return done

    # -- linear systems -------------------------------------------------------
    def _window(self, start: int, j: int, state_unknown: bool) -> WindowOutcome:
        """Solve the window ``v_start..v_{start+j}`` for its unknown symbols.

        Row ``r*p + i`` encodes ``-y_t[i] + (C A^r x_start)[i] + sum_q (M_{r-q} u_{start+q})[i] = 0``.
        """
        F, p, k, n, s = self.F, self.p, self.k, self.n, self.s
        cache = self.dec.cache
        O = cache.obs(j)
        Fj = cache.F(j)
        nrows = p * (j + 1)
        variables: list[tuple] = [("x", q) for q in range(s)] if state_unknown else []
        for r in range(j + 1):
            t = start + r
            for c in range(n):
                if self.known(t, c) is None:
                    variables.append((t, c))
        kp = [0] * nrows
        if not state_unknown:
            x = self.state(start)
            if x is None:
                raise PrefixUnknown(f"state x_{start} is not available")
            if s:
                kp = self._mv(O, x)
        uvec = []
        for r in range(j + 1):
            for c in range(k):
                v = self.known(start + r, p + c)
                uvec.append(0 if v is None else v)
        fu = self._mv(Fj, uvec)
        kp = [F.add(a, b) for a, b in zip(kp, fu)]
        for r in range(j + 1):
            for i in range(p):
                y = self.known(start + r, i)
                if y is not None and y:
                    kp[r * p + i] = F.sub(kp[r * p + i], y)
        minus_one = F.neg(1)
        rows = []
        for e in range(nrows):
            r = e // p
            row = []
            for var in variables:
                if var[0] == "x":
                    row.append(O[e, var[1]])
                else:
                    t, c = var
                    q = t - start
                    if c < p:
                        row.append(minus_one if (q == r and c == e % p) else 0)
                    else:
                        row.append(Fj[e, q * k + c - p])
            row.append(F.neg(kp[e]))
            rows.append(row)
        self.windows_solved += 1
        out = solve_rows(F, rows, len(variables))
        self.mults += out.mult_count
        if not out.consistent:
            raise IntegrityError(f"window at {start} of length {j + 1} is inconsistent")
        state = None
        if state_unknown:
            xs = out.values[:s]
            if all(v is not None for v in xs):
                state = list(xs)
        return WindowOutcome(variables, list(out.values), state)

    def recover_window(self, i: int, j: int) -> WindowOutcome:
        """Window recovery for ``v_i`` using ``v_i..v_{i+j}``; nothing is committed."""
        self.advance(i + j)
        return self._window(i, j, False)

    def recover_state(self, i: int, l: int, j: int) -> WindowOutcome:
        """Solve for ``x_{i+l}`` and the erasures of ``v_{i+l}..v_{i+l+j}``."""
        self.advance(i + l + j)
        self.state_attempts += 1
        return self._window(i + l, j, True)

    def backfill_inputs(self, i: int, l: int) -> str:
        """Use ``x_{i+l} - A^l x_i = R_l (u_i..u_{i+l-1})``.

        Returns ``"recovered"`` when ``l <= ell``; otherwise the still-erased
        symbols of ``v_i..v_{i+l-1}`` are declared lost and ``"lost"`` returned.
        """
        F, p, k = self.F, self.p, self.k
        cache = self.dec.cache
        if l > cache.ell:
            for t in range(i, i + l):
                for c in range(self.n):
                    self._mark_lost(t, c, "step10")
            return "lost"
        x_i = self.state(i)
        x_il = self.states[i + l]
        R = cache.R(l)
        variables = [(t, c) for t in range(i, i + l) for c in range(k) if self.known(t, p + c) is None]
        uvec = [self.known(t, p + c) or 0 for t in range(i, i + l) for c in range(k)]
        kp = self._mv(cache.power(l), x_i)
        ru = self._mv(R, uvec)
        kp = [F.sub(F.add(a, b), x) for a, b, x in zip(kp, ru, x_il)]
        rows = [[R[e, (t - i) * k + c] for t, c in variables] + [F.neg(kp[e])] for e in range(self.s)]
        out = solve_rows(F, rows, len(variables))
        self.mults += out.mult_count
        if not out.consistent:
            raise IntegrityError("state difference is inconsistent with the received inputs")
        for (t, c), v in zip(variables, out.values):
            self._set(t, p + c, v, "backfill")
        self._fill_outputs(range(i, i + l), "backfill")
        return "recovered"

    def _fill_outputs(self, blocks: Iterator[int] | range, method: str) -> list[list[int]]:
        """Compute unresolved erased outputs from states and inputs."""
        F, p = self.F, self.p
        done = []
        for t in blocks:
            todo = [c for c in range(p) if self.erased[t][c] and self.val[t][c] is None]
            if not todo:
                continue
            x = self.state(t)
            u = [self.known(t, p + c) for c in range(self.k)]
            if x is None or any(v is None for v in u):
                continue
            y = [F.add(a, b) for a, b in zip(self._mv(self.sys.C, x), self._mv(self.sys.D, u))]
            for c in todo:
                self._set(t, c, y[c], method)
                done.append([t, c])
        return done

    def terminal_check_and_solve(self) -> bool:
        """Recover every input at once from the zero tail of the frame.

        Unknowns are the unresolved inputs received so far together with every
        input not yet received.  The equations are the termination rows
        ``E_w u = 0`` (``w = delta - 1``, which contains all smaller ``w``), the
        output equations from the first unknown input up to the clock (unknown
        outputs enter as extra unknowns), and, when the encoding generator is
        known, the vanishing of the message coefficients beyond ``gamma``.
        Known inputs before the first unknown are folded into that time's
        state.  Success means every input is determined.  Once the whole frame
        has been received a failed attempt still commits what it determines.
        """
        F, p, k, s = self.F, self.p, self.k, self.s
        cache = self.dec.cache
        tau, last = self.tau, self.last
        final = tau == last
        unknown = [(t, c) for t in range(last + 1) for c in range(k)
                   if t > tau or self.val[t][p + c] is None]
        if unknown and not final and not self._terminal_system_ok(unknown):
            self.events.append({"step": "terminal", "time": tau, "success": False, "unknowns": len(unknown)})
            return False
        values: list[int | None] = []
        outputs: list[tuple[int, int]] = []
        out_values: list[int | None] = []
        success = True
        if unknown:
            t1 = unknown[0][0]
            horizon = range(t1, min(tau, last) + 1)
            outputs = [(t, i) for t in horizon for i in range(p) if self.val[t][i] is None]
            col = {v: q for q, v in enumerate(unknown)}
            ycol = {v: len(unknown) + q for q, v in enumerate(outputs)}
            width = len(unknown) + len(outputs)
            x1 = self.state(t1)
            rows: list[list[int]] = []
            minus_one = F.neg(1)

            def add_rows(coef_blocks: list[tuple[int, Matrix]], const: list[int], keep: list[int],
                         out_time: int | None = None) -> None:
                # coef_blocks pairs input time r with the matrix multiplying u_r
                const = list(const)
                for r, M in coef_blocks:
                    u = [self.val[r][p + c] if (r, c) not in col else 0 for c in range(k)]
                    if any(u):
                        const = [F.add(a, b) for a, b in zip(const, self._mv(M, u))]
                for e in keep:
                    row = [0] * (width + 1)
                    for r, M in coef_blocks:
                        for c in range(k):
                            q = col.get((r, c))
                            if q is not None:
                                row[q] = M[e, c]
                    if out_time is not None and (out_time, e) in ycol:
                        row[ycol[(out_time, e)]] = minus_one
                    row[-1] = F.neg(const[e])
                    rows.append(row)

            # zero tail
            if s:
                term = self.dec.term
                w = term.w_max
                E = term.E(w)
                nrows = p * (w + 1)
                x_end = self._mv(cache.power(last + 1 - t1), x1)
                const = self._mv(self.dec.tail, x_end)
                blocks = [(r, E.submatrix(range(nrows), range(r * k, (r + 1) * k))) for r in range(t1, last + 1)]
                add_rows(blocks, const, list(range(nrows)))
            # outputs up to the clock
            for t in horizon:
                cx = self._mv(cache.sys.C @ cache.power(t - t1), x1) if s else [0] * p
                const = [F.sub(a, self.val[t][i] or 0) for i, a in enumerate(cx)]
                add_rows([(r, cache.markov(t - r)) for r in range(t1, t + 1)], const, list(range(p)), t)
            # message degree
            Q = self.dec.inverse_series
            if Q is not None:
                for t in range(self.stream.gamma + 1, last + 1):
                    add_rows([(r, Q[t - r]) for r in range(t + 1)], [0] * k, list(range(k)))
            out = solve_rows(F, rows, width)
            self.mults += out.mult_count
            if not out.consistent:
                raise IntegrityError("received symbols violate the termination equations")
            values = list(out.values[:len(unknown)])
            out_values = list(out.values[len(unknown):])
            success = all(v is not None for v in values)
            if not success and not final:
                self.events.append({"step": "terminal", "time": tau, "success": False, "unknowns": len(unknown)})
                return False
        done = []
        for (t, c), v in zip(unknown, values):
            if v is None:
                continue
            if self.erased[t][p + c] and self.val[t][p + c] is None:
                done.append([t, p + c])
            self._set(t, p + c, v, "terminal")
        for (t, i), v in zip(outputs, out_values):
            if v is not None and self.val[t][i] is None:
                done.append([t, i])
                self._set(t, i, v, "terminal")
        if success:
            self.complete = True
            self.termination_time = tau
        done += self._fill_outputs(range(last + 1), "terminal")
        self.events.append({"step": "terminal", "time": tau, "success": success,
                            "unknowns": len(unknown), "recovered": sorted(done)})
        return success

    def _terminal_system_ok(self, unknown: list[tuple[int, int]]) -> bool:
        """Cheap necessary condition: at least as many equations as unknowns."""
        p, k = self.p, self.k
        t1 = unknown[0][0]
        count = p * (self.dec.term.w_max + 1) if self.s else 0
        for t in range(t1, min(self.tau, self.last) + 1):
            count += sum(1 for i in range(p) if self.val[t][i] is not None)
        if self.dec.inverse_series is not None:
            count += k * max(0, self.last - self.stream.gamma)
        return count >= len(unknown)

    # -- the low-delay algorithm ----------------------------------------------
    def _try_terminal(self) -> bool:
        if not self.outstanding():
            return False
        # a failed attempt is only worth repeating once something new is known
        key = (self.tau, sum(v is not None for b in self.val for v in b))
        if key == self._terminal_key:
            return False
        self._terminal_key = key
        return self.terminal_check_and_solve()

    def run(self) -> None:
        i = -1
        while True:
            if self._try_terminal():
                return
            if i >= 0 and self.pending(i):
                nxt = self._recover_at(i)
                if nxt is None:
                    self._try_terminal()
                    return
                i = nxt
                continue
            i += 1
            if i > self.last:
                return
            self.advance(i)

    def _jmax(self, start: int) -> int:
        # padded blocks beyond last + s carry no information
        return min(self.dec.T, self.last + self.s - start)

    def _recover_at(self, i: int) -> int | None:
        """Steps 3 to 11 for the first unresolved block ``v_i``."""
        outcome = None
        for j in range(self._jmax(i) + 1):
            outcome = self.recover_window(i, j)
            if outcome.covers_block(i):
                done = self._commit(outcome, "window")
                self.events.append({"step": "window", "i": i, "j": j, "time": self.tau, "success": True,
                                    "recovered": done})
                return i
            self.events.append({"step": "window", "i": i, "j": j, "time": self.tau, "success": False})
        if outcome is not None:
            done = self._commit(outcome, "window")
            if done:
                self.events.append({"step": "window-partial", "i": i, "time": self.tau, "recovered": done})
        for l in range(1, self.last + 2 - i):
            for j in range(self._jmax(i + l) + 1):
                outcome = self.recover_state(i, l, j)
                if outcome.state is None:
                    self.events.append({"step": "state", "i": i, "l": l, "j": j, "time": self.tau,
                                        "success": False})
                    continue
                self.state_recoveries += 1
                self.states[i + l] = outcome.state
                done = self._commit(outcome, "state")
                result = self.backfill_inputs(i, l)
                self.events.append({"step": "state", "i": i, "l": l, "j": j, "time": self.tau, "success": True,
                                    "recovered": done, "backfill": result})
                return i + l - 1
        for t in range(i, self.last + 1):
            for c in range(self.n):
                self._mark_lost(t, c, "exhausted")
        self.advance(self.last)
        self.events.append({"step": "exhausted", "i": i, "time": self.tau})
        return None

    # -- baseline ---------------------------------------------------------------
    def run_baseline(self) -> None:
        """Largest window first, shrinking only on failure; no state or tail steps."""
        L = self.dec.L
        for i in range(self.last + 1):
            self.advance(i)
            if not self.pending(i):
                continue
            jmax = min(L, self.last + self.s - i)
            self.advance(i + jmax)
            big = None
            solved = False
            for j in range(jmax, -1, -1):
                outcome = self._window(i, j, False)
                if big is None:
                    big = outcome
                if outcome.covers_all():
                    done = self._commit(outcome, "window")
                    self.events.append({"step": "window", "i": i, "j": j, "time": self.tau, "success": True,
                                        "recovered": done})
                    solved = True
                    break
            if solved:
                continue
            if big.covers_block(i):
                done = self._commit(big, "window")
                self.events.append({"step": "window-partial", "i": i, "j": jmax, "time": self.tau,
                                    "recovered": done})
                continue
            for t in range(i, self.last + 1):
                for c in range(self.n):
                    self._mark_lost(t, c, "exhausted")
            self.events.append({"step": "exhausted", "i": i, "time": self.tau})
            return

    def report(self) -> DecodeReport:
        return DecodeReport(
            n=self.n,
            k=self.k,
            gamma=self.stream.gamma,
            T=self.dec.T,
            status=self.status,
            values=[list(r) for r in self.val],
            mult_count=self.mults,
            windows_solved=self.windows_solved,
            state_attempts=self.state_attempts,
            state_recoveries=self.state_recoveries,
            termination_used=self.termination_time is not None,
            termination_time=self.termination_time,
            events=self.events,
        )
