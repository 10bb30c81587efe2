"""Incremental SAT sessions: an in-process native backend and a DIMACS
subprocess fallback, behind one small session contract.

The native backend is a CaDiCaL build exposed through a tiny C ABI shim
(bundled as ``_native/libsatbridge.so``; rebuild with
``scripts/build_native.py``).  It is deterministic for a fixed clause
sequence; the configured seed is advisory and recorded for reporting only.

Budgets are cooperative: a conflict budget or wall-clock timeout makes the
backend give up and report "unknown", it is never killed mid-solve.
"""

from __future__ import annotations

import ctypes
import shlex
import subprocess
import tempfile
import time
from array import array
from dataclasses import dataclass
from pathlib import Path

from .encoder import Cnf, VarMap

__all__ = [
    "SolverError", "SolverConfig", "SolveOutcome", "SolverSession",
    "NativeSession", "DimacsSession", "make_session",
    "export_dimacs", "parse_dimacs",
]

SAT = "sat"
UNSAT = "unsat"
UNKNOWN = "unknown"


class SolverError(RuntimeError):
    """Backend failure: missing library, bad subprocess output, misuse."""


@dataclass(frozen=True)
class SolverConfig:
    backend: str = "native"        # "native" or "dimacs:<command>"
    seed: int = 0
    conflict_budget: int | None = None
    timeout: float | None = None   # seconds, wall clock


@dataclass(frozen=True)
class SolveOutcome:
    status: str                    # sat / unsat / unknown
    model: tuple[bool, ...] | None  # indexed by variable id; [0] unused
    time: float
    conflicts: int | None = None   # not exposed by the bundled backend

    @property
    def is_sat(self) -> bool:
        return self.status == SAT

    @property
    def is_unsat(self) -> bool:
        return self.status == UNSAT


class SolverSession:
    """Shared bookkeeping for both backends."""

    def __init__(self, config: SolverConfig):
        self.config = config
        self.num_vars = 0
        self.num_clauses = 0

    def _track(self, lits) -> None:
        for lit in lits:
            v = lit if lit > 0 else -lit
            if v > self.num_vars:
                self.num_vars = v

    def declare_vars(self, n: int) -> None:
        """Reserve variable ids up to n even if no clause mentions them."""
        if n > self.num_vars:
            self.num_vars = n

    def add_clause(self, lits) -> None:
        raise NotImplementedError

    def add_cnf(self, cnf: Cnf) -> None:
        raise NotImplementedError

    def solve(self, assumptions=(), conflict_budget: int | None = None,
              timeout: float | None = None) -> SolveOutcome:
        raise NotImplementedError

    def close(self) -> None:
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False


# ---------------------------------------------------------------------------
# native backend

_LIB: ctypes.CDLL | None = None


def _load_library() -> ctypes.CDLL:
    global _LIB
    if _LIB is not None:
        return _LIB
    root = Path(__file__).resolve().parent / "_native"
    for name in ("libsatbridge.so", "libsatbridge.dylib", "satbridge.dll"):
        path = root / name
        if path.exists():
            lib = ctypes.CDLL(str(path))
            break
    else:
        raise SolverError(
            f"no native solver library under {root}; "
            "run scripts/build_native.py or use a dimacs:<cmd> backend")
    lib.satbridge_new.restype = ctypes.c_void_p
    lib.satbridge_free.argtypes = [ctypes.c_void_p]
    lib.satbridge_add_clause.argtypes = [
        ctypes.c_void_p, ctypes.POINTER(ctypes.c_int32), ctypes.c_size_t]
    lib.satbridge_add_clauses.argtypes = [
        ctypes.c_void_p, ctypes.POINTER(ctypes.c_int32), ctypes.c_size_t]
    lib.satbridge_add_clauses.restype = ctypes.c_int64
    lib.satbridge_solve.argtypes = [
        ctypes.c_void_p, ctypes.POINTER(ctypes.c_int32), ctypes.c_size_t,
        ctypes.c_int64, ctypes.c_double]
    lib.satbridge_solve.restype = ctypes.c_int32
    lib.satbridge_value.argtypes = [ctypes.c_void_p, ctypes.c_int32]
    lib.satbridge_value.restype = ctypes.c_int32
    lib.satbridge_max_variable.argtypes = [ctypes.c_void_p]
    lib.satbridge_max_variable.restype = ctypes.c_int32
    lib.satbridge_signature.argtypes = [ctypes.c_void_p]
    lib.satbridge_signature.restype = ctypes.c_void_p
    lib.satbridge_string_free.argtypes = [ctypes.c_void_p]
    _LIB = lib
    return lib


def _as_i32_array(lits) -> tuple:
    buf = array("i", lits)
    addr, count = buf.buffer_info()
    return buf, ctypes.cast(addr, ctypes.POINTER(ctypes.c_int32)), count


class NativeSession(SolverSession):
    def __init__(self, config: SolverConfig = SolverConfig()):
        super().__init__(config)
        self._lib = _load_library()
        self._ptr = self._lib.satbridge_new()
        if not self._ptr:
            raise SolverError("could not create native solver instance")

    def add_clause(self, lits) -> None:
        lits = list(lits)
        if not lits:
            raise SolverError("empty clause")
        self._track(lits)
        keep, ptr, count = _as_i32_array(lits)
        self._lib.satbridge_add_clause(self._ptr, ptr, count)
        self.num_clauses += 1

    def add_cnf(self, cnf: Cnf) -> None:
        if not cnf.store:
            raise SolverError("cannot solve a counted-only clause set")
        if cnf.num_vars > self.num_vars:
            self.num_vars = cnf.num_vars
        if not cnf.lits:
            return
        addr, count = cnf.lits.buffer_info()
        ptr = ctypes.cast(addr, ctypes.POINTER(ctypes.c_int32))
        added = self._lib.satbridge_add_clauses(self._ptr, ptr, count)
        self.num_clauses += added

    def solve(self, assumptions=(), conflict_budget: int | None = None,
              timeout: float | None = None) -> SolveOutcome:
        if conflict_budget is None:
            conflict_budget = self.config.conflict_budget
        if timeout is None:
            timeout = self.config.timeout
        assumptions = list(assumptions)
        self._track(assumptions)
        keep, ptr, count = _as_i32_array(assumptions)
        start = time.perf_counter()
        rc = self._lib.satbridge_solve(
            self._ptr, ptr, count,
            -1 if conflict_budget is None else conflict_budget,
            0.0 if timeout is None else timeout)
        elapsed = time.perf_counter() - start
        if rc == 10:
            value = self._lib.satbridge_value
            model = tuple(
                False if v == 0 else value(self._ptr, v) > 0
                for v in range(self.num_vars + 1))
            return SolveOutcome(SAT, model, elapsed)
        if rc == 20:
            return SolveOutcome(UNSAT, None, elapsed)
        return SolveOutcome(UNKNOWN, None, elapsed)

    def signature(self) -> str:
        raw = self._lib.satbridge_signature(self._ptr)
        try:
            return ctypes.cast(raw, ctypes.c_char_p).value.decode()
        finally:
            self._lib.satbridge_string_free(raw)

    def close(self) -> None:
        if self._ptr:
            self._lib.satbridge_free(self._ptr)
            self._ptr = None


# ---------------------------------------------------------------------------
# DIMACS pipeline

def export_dimacs(cnf: Cnf, vm: VarMap | None = None) -> str:
    """Standard DIMACS text; with a variable map, `c <id> = <tag>` comments
    document the encoding (stable across runs for identical inputs)."""
    if not cnf.store:
        raise SolverError("cannot export a counted-only clause set")
    out: list[str] = []
    if vm is not None:
        out.extend(vm.comment_lines())
    # hand-built Cnf instances may never declare their variables
    seen = max(map(abs, cnf.lits), default=0)
    out.append(f"p cnf {max(cnf.num_vars, seen, vm.num_vars if vm else 0)} "
               f"{cnf.num_clauses}")
    line: list[str] = []
    for lit in cnf.lits:
        line.append(str(lit))
        if lit == 0:
            out.append(" ".join(line))
            line = []
    return "\n".join(out) + "\n"


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    num_vars = 0
    clauses: list[list[int]] = []
    current: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise SolverError(f"bad DIMACS header: {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(current)
    return num_vars, clauses


class DimacsSession(SolverSession):
    """One-shot subprocess backend: each solve writes the accumulated
    clauses (assumptions appended as units) to a fresh DIMACS file and runs
    the configured command on it.  Exit code 10 or an `s SATISFIABLE` line
    means sat, 20 / `s UNSATISFIABLE` unsat, anything else unknown."""

    def __init__(self, command: str, config: SolverConfig = SolverConfig()):
        super().__init__(config)
        self._argv = shlex.split(command)
        if not self._argv:
            raise SolverError("empty DIMACS backend command")
        self._lits = array("i")
        self.num_clauses = 0

    def add_clause(self, lits) -> None:
        lits = list(lits)
        if not lits:
            raise SolverError("empty clause")
        self._track(lits)
        self._lits.extend(lits)
        self._lits.append(0)
        self.num_clauses += 1

    def add_cnf(self, cnf: Cnf) -> None:
        if not cnf.store:
            raise SolverError("cannot solve a counted-only clause set")
        if cnf.num_vars > self.num_vars:
            self.num_vars = cnf.num_vars
        self._lits.extend(cnf.lits)
        self.num_clauses += cnf.num_clauses

    def solve(self, assumptions=(), conflict_budget: int | None = None,
              timeout: float | None = None) -> SolveOutcome:
        if timeout is None:
            timeout = self.config.timeout
        assumptions = list(assumptions)
        self._track(assumptions)
        total = self.num_clauses + len(assumptions)
        lines = [f"p cnf {self.num_vars} {total}"]
        clause: list[str] = []
        for lit in self._lits:
            clause.append(str(lit))
            if lit == 0:
                lines.append(" ".join(clause))
                clause = []
        lines.extend(f"{lit} 0" for lit in assumptions)
        start = time.perf_counter()
        with tempfile.NamedTemporaryFile(
                mode="w", suffix=".cnf", prefix="alcfit-", delete=False) as fh:
            fh.write("\n".join(lines) + "\n")
            path = Path(fh.name)
        try:
            proc = subprocess.run(
                self._argv + [str(path)], capture_output=True, text=True,
                timeout=timeout)
        except subprocess.TimeoutExpired:
            return SolveOutcome(UNKNOWN, None, time.perf_counter() - start)
        except OSError as exc:
            raise SolverError(f"cannot run {self._argv[0]!r}: {exc}") from exc
        finally:
            path.unlink(missing_ok=True)
        elapsed = time.perf_counter() - start
        status = UNKNOWN
        if proc.returncode == 10:
            status = SAT
        elif proc.returncode == 20:
            status = UNSAT
        values: dict[int, bool] = {}
        for raw in proc.stdout.splitlines():
            line = raw.strip()
            if line.startswith("s "):
                verdict = line[2:].strip().upper()
                if verdict == "SATISFIABLE":
                    status = SAT
                elif verdict == "UNSATISFIABLE":
                    status = UNSAT
            elif line.startswith("v "):
                for tok in line[2:].split():
                    lit = int(tok)
                    if lit:
                        values[abs(lit)] = lit > 0
        if status == SAT:
            model = tuple(values.get(v, False)
                          for v in range(self.num_vars + 1))
            return SolveOutcome(SAT, model, elapsed)
        return SolveOutcome(status, None, elapsed)


def make_session(config: SolverConfig = SolverConfig()) -> SolverSession:
    backend = config.backend
    if backend == "native":
        return NativeSession(config)
    if backend.startswith("dimacs:"):
        return DimacsSession(backend[len("dimacs:"):], config)
    raise SolverError(f"unknown backend {backend!r}; "
                      "use 'native' or 'dimacs:<command>'")
