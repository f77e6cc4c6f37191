"""File formats: code specs and reports as JSON, streams/messages/masks as text.

Code spec (JSON, keys sorted, two-space indent, trailing newline)::

    {"format": "isoconv-code/1", "field": {...}, "n": 5, "k": 3, "delta": 2,
     "generator": [G_0, G_1, ...], "system": {"A": ..., "B": ..., "C": ..., "D": ...},
     "T": 1, "L": 1}

Matrices are lists of rows of hex elements.  Either ``generator`` or
``system`` may be omitted; ``T`` and ``L`` are optional.

Stream and frame files::

    isoconv-stream n=5 k=3 gamma=3 p=2 m=331 modulus=<hex>
    <n tokens per block: hex element or *>

Message files use the header ``isoconv-message k=.. gamma=.. p=.. m=.. modulus=..``
and ``k`` tokens per line.  Mask files use ``isoconv-mask n=..`` and one line
per block of ``*`` (erased) or ``.`` (received) tokens.

Element hex is the big-endian hex of the packed element (bit ``i`` is the
coefficient of ``x^i`` in characteristic 2), zero-padded to a fixed width.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Sequence

from .algebra.field import Field, FieldSpec, get_field
from .algebra.linalg import Matrix
from .convcode import PolyGenerator, code_degree, encode
from .decoder import DecodeReport, ReceivedStream
from .errors import IsoconvError, ParseError
from .sysrep import StateSpace, generator_of, membership_check, realize

CODE_FORMAT = "isoconv-code/1"
_HEX = re.compile(r"[0-9a-fA-F]+\Z")


def dump_json(obj: Any) -> str:
    """Canonical JSON text used for every structured output."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- code specs ---------------------------------------------------------------


def _matrix_hex(M: Matrix) -> list[list[str]]:
    F = M.field
    return [[F.to_hex(v) for v in row] for row in M.tolist()]


def _matrix_from_hex(F: Field, rows: Any, where: str, shape: tuple[int, int] | None = None) -> Matrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"{where}: expected a list of rows")
    cols = len(rows[0]) if rows else (shape[1] if shape else 0)
    if shape is not None and (len(rows), cols) != shape:
        raise ParseError(f"{where}: expected shape {shape}, got {(len(rows), cols)}")
    data = []
    for i, r in enumerate(rows):
        if len(r) != cols:
            raise ParseError(f"{where}: row {i} has {len(r)} entries, expected {cols}")
        data.append([parse_element(F, x, f"{where}[{i}]") for x in r])
    return Matrix(F, data, cols)


def parse_element(F: Field, token: Any, where: str = "", line: int | None = None, column: int | None = None) -> int:
    if not isinstance(token, str) or not _HEX.match(token):
        raise ParseError(f"{where}malformed field element {token!r}".strip(), line, column)
    v = int(token, 16)
    if v >= F.order:
        raise ParseError(f"{where}value {token!r} is not an element of {F.name}".strip(), line, column)
    return v


@dataclass
class CodeSpec:
    field: Field
    n: int
    k: int
    delta: int
    generator: PolyGenerator | None = None
    system: StateSpace | None = None
    T: int | None = None
    L: int | None = None

    def get_system(self) -> StateSpace:
        return self.system if self.system is not None else realize(self.get_generator())

    def get_generator(self) -> PolyGenerator:
        if self.generator is None:
            self.generator = generator_of(self.get_system())
        return self.generator

    def to_dict(self) -> dict:
        d: dict[str, Any] = {
            "format": CODE_FORMAT,
            "field": self.field.spec.to_dict(),
            "n": self.n,
            "k": self.k,
            "delta": self.delta,
        }
        if self.generator is not None:
            d["generator"] = [_matrix_hex(c) for c in self.generator.coeffs]
        if self.system is not None:
            S = self.system
            d["system"] = {"A": _matrix_hex(S.A), "B": _matrix_hex(S.B), "C": _matrix_hex(S.C), "D": _matrix_hex(S.D)}
        if self.T is not None:
            d["T"] = self.T
        if self.L is not None:
            d["L"] = self.L
        return d

    def dumps(self) -> str:
        return dump_json(self.to_dict())

    @classmethod
    def from_parts(
        cls,
        *,
        generator: PolyGenerator | None = None,
        system: StateSpace | None = None,
        T: int | None = None,
        L: int | None = None,
    ) -> "CodeSpec":
        if generator is None and system is None:
            raise ValueError("a code spec needs a generator or a system")
        F = generator.field if generator is not None else system.field
        n, k = (generator.n, generator.k) if generator is not None else (system.n, system.k)
        delta = code_degree(generator) if generator is not None else system.s
        return cls(F, n, k, delta, generator, system, T, L)

    @classmethod
    def loads(cls, text: str) -> "CodeSpec":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
        if not isinstance(d, dict) or d.get("format") != CODE_FORMAT:
            raise ParseError(f"not an {CODE_FORMAT} document")
        try:
            F = get_field(FieldSpec.from_dict(d["field"]))
            n, k, delta = int(d["n"]), int(d["k"]), int(d["delta"])
        except (KeyError, TypeError, ValueError, IsoconvError) as exc:
            raise ParseError(f"bad header field: {exc}") from exc
        p = n - k
        G = S = None
        try:
            if "generator" in d:
                coeffs = [_matrix_from_hex(F, c, f"generator[{t}]", (n, k)) for t, c in enumerate(d["generator"])]
                G = PolyGenerator(coeffs)
            if "system" in d:
                sd = d["system"]
                s = len(sd["A"])
                S = StateSpace(
                    _matrix_from_hex(F, sd["A"], "system.A", (s, s)),
                    _matrix_from_hex(F, sd["B"], "system.B", (s, k)),
                    _matrix_from_hex(F, sd["C"], "system.C", (p, s)),
                    _matrix_from_hex(F, sd["D"], "system.D", (p, k)),
                )
        except ParseError:
            raise
        except (KeyError, TypeError, IsoconvError) as exc:
            raise ParseError(f"bad matrix data: {exc}") from exc
        if G is None and S is None:
            raise ParseError("a code spec needs a generator or a system")
        spec = cls(F, n, k, delta, G, S, d.get("T"), d.get("L"))
        if G is not None and S is not None and not cross_validate(G, S):
            raise ParseError("generator and system describe different codes")
        return spec


def cross_validate(G: PolyGenerator, S: StateSpace) -> bool:
    """Every column of ``G`` (and its shifts) must be a terminated trajectory of ``S``."""
    if (G.n, G.k) != (S.n, S.k):
        return False
    for j in range(G.k):
        for shift in range(2):
            msg = [[0] * G.k for _ in range(shift + 1)]
            msg[shift][j] = 1
            if not membership_check(S, encode(G, msg)):
                return False
    return code_degree(G) == S.s


# -- line formats -------------------------------------------------------------


def _field_header(F: Field) -> str:
    d = F.spec.to_dict()
    return f"p={d['characteristic']} m={d['degree']} modulus={d['modulus']}"


def _parse_header(line: str, magic: str, keys: Sequence[str]) -> dict[str, str]:
    parts = line.split()
    if not parts or parts[0] != magic:
        raise ParseError(f"expected a {magic!r} header", 1, 1)
    out: dict[str, str] = {}
    for part in parts[1:]:
        key, sep, value = part.partition("=")
        if not sep or not value:
            raise ParseError(f"malformed header item {part!r}", 1, line.find(part) + 1)
        out[key] = value
    missing = [k for k in keys if k not in out]
    if missing:
        raise ParseError(f"header lacks {', '.join(missing)}", 1)
    return out


def _header_int(h: dict[str, str], key: str) -> int:
    try:
        v = int(h[key])
    except ValueError:
        raise ParseError(f"header value {key}={h[key]!r} is not an integer", 1) from None
    if v < 0:
        raise ParseError(f"header value {key} must be nonnegative", 1)
    return v


def _header_field(h: dict[str, str], F: Field | None) -> Field:
    try:
        spec = FieldSpec.from_dict({"characteristic": int(h["p"]), "degree": int(h["m"]), "modulus": h["modulus"]})
    except (ValueError, IsoconvError) as exc:
        raise ParseError(f"bad field in header: {exc}", 1) from None
    if F is not None:
        if (spec.characteristic, spec.degree, spec.modulus) != (F.spec.characteristic, F.spec.degree, F.spec.modulus):
            raise ParseError(f"file field {spec.describe()} does not match the code's field {F.name}", 1)
        return F
    return get_field(spec)


def _tokens(line: str) -> list[tuple[str, int]]:
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _body(text: str) -> tuple[str, list[tuple[int, str]]]:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty file", 1)
    body = [(i + 2, ln) for i, ln in enumerate(lines[1:]) if ln.strip()]
    return lines[0], body


def _parse_rows(F: Field, body: list[tuple[int, str]], width: int, allow_erasure: bool) -> list[list[int | None]]:
    rows = []
    for lineno, ln in body:
        toks = _tokens(ln)
        if len(toks) != width:
            raise ParseError(f"expected {width} tokens, found {len(toks)}", lineno, toks[-1][1] if toks else 1)
        row: list[int | None] = []
        for tok, col in toks:
            if tok == "*":
                if not allow_erasure:
                    raise ParseError("erasure symbol not allowed here", lineno, col)
                row.append(None)
            else:
                row.append(parse_element(F, tok, line=lineno, column=col))
        rows.append(row)
    return rows


def format_stream(F: Field, stream: ReceivedStream) -> str:
    lines = [f"isoconv-stream n={stream.n} k={stream.k} gamma={stream.gamma} {_field_header(F)}"]
    for b in stream.blocks:
        lines.append(" ".join("*" if v is None else F.to_hex(v) for v in b))
    return "\n".join(lines) + "\n"


def parse_stream(text: str, F: Field | None = None, *, allow_erasure: bool = True) -> tuple[Field, ReceivedStream]:
    head, body = _body(text)
    h = _parse_header(head, "isoconv-stream", ("n", "k", "gamma", "p", "m", "modulus"))
    n, k, gamma = _header_int(h, "n"), _header_int(h, "k"), _header_int(h, "gamma")
    if not 0 < k <= n:
        raise ParseError("header needs 0 < k <= n", 1)
    F = _header_field(h, F)
    rows = _parse_rows(F, body, n, allow_erasure)
    if not rows:
        raise ParseError("stream has no blocks", len(text.splitlines()) + 1)
    return F, ReceivedStream(n, k, gamma, tuple(tuple(r) for r in rows))


def format_message(F: Field, message: Sequence[Sequence[int]]) -> str:
    k = len(message[0])
    lines = [f"isoconv-message k={k} gamma={len(message) - 1} {_field_header(F)}"]
    lines += [" ".join(F.to_hex(v) for v in m) for m in message]
    return "\n".join(lines) + "\n"


def parse_message(text: str, F: Field | None = None) -> tuple[Field, list[list[int]]]:
    head, body = _body(text)
    h = _parse_header(head, "isoconv-message", ("k", "p", "m", "modulus"))
    k = _header_int(h, "k")
    F = _header_field(h, F)
    rows = _parse_rows(F, body, k, False)
    if "gamma" in h and _header_int(h, "gamma") != len(rows) - 1:
        raise ParseError(f"header declares gamma={h['gamma']} but the file has {len(rows)} blocks", 1)
    if not rows:
        raise ParseError("message has no blocks", 2)
    return F, rows  # type: ignore[return-value]


def format_mask(mask: Sequence[Sequence[bool]]) -> str:
    n = len(mask[0]) if mask else 0
    lines = [f"isoconv-mask n={n}"] + [" ".join("*" if e else "." for e in row) for row in mask]
    return "\n".join(lines) + "\n"


def parse_mask(text: str) -> list[list[bool]]:
    head, body = _body(text)
    h = _parse_header(head, "isoconv-mask", ("n",))
    n = _header_int(h, "n")
    out = []
    for lineno, ln in body:
        toks = _tokens(ln)
        if len(toks) != n:
            raise ParseError(f"expected {n} tokens, found {len(toks)}", lineno, toks[-1][1] if toks else 1)
        row = []
        for tok, col in toks:
            if tok not in ("*", "."):
                raise ParseError(f"mask token must be '*' or '.', got {tok!r}", lineno, col)
            row.append(tok == "*")
        out.append(row)
    return out


# -- reports ------------------------------------------------------------------


def report_dict(report: DecodeReport, F: Field) -> dict:
    return report.to_dict(hexify=F.to_hex)
