from __future__ import annotations

import shutil
import sys
from pathlib import Path

import pytest

from alcfit.concepts import O_ALL, fits
from alcfit.encoder import Cnf, decode_model
from alcfit.solver import (DimacsSession, NativeSession, SolverConfig,
                           SolverError, export_dimacs, make_session,
                           parse_dimacs)

from helpers import build_encoding

DIMACS_SOLVER = (f"{sys.executable} "
                 f"{Path(__file__).parent.parent / 'scripts' / 'dimacs_solve.py'}")


def pigeonhole(holes: int) -> Cnf:
    """holes+1 pigeons into `holes` holes: classic unsatisfiable instance."""
    pigeons = holes + 1
    var = lambda p, h: p * holes + h + 1
    cnf = Cnf()
    for p in range(pigeons):
        cnf.add("php", [var(p, h) for h in range(holes)])
    for h in range(holes):
        for p1 in range(pigeons):
            for p2 in range(p1 + 1, pigeons):
                cnf.add("php", [-var(p1, h), -var(p2, h)])
    return cnf


def test_native_sat_unsat_and_model():
    session = NativeSession()
    try:
        session.add_clause([1, 2])
        session.add_clause([-1])
        out = session.solve()
        assert out.status == "sat" and out.is_sat
        assert out.model[0] is False  # index 0 is padding
        assert out.model[1] is False and out.model[2] is True
        session.add_clause([-2])
        out = session.solve()
        assert out.status == "unsat" and out.is_unsat
    finally:
        session.close()


def test_native_assumptions_do_not_stick():
    session = NativeSession()
    try:
        session.add_clause([1, 2])
        assert session.solve(assumptions=[-1, -2]).status == "unsat"
        assert session.solve().status == "sat"
    finally:
        session.close()


def test_native_signature_names_underlying_solver():
    session = NativeSession()
    try:
        assert "cadical" in session.signature().lower()
    finally:
        session.close()


def test_add_cnf_bulk_matches_per_clause(fig1_sample):
    cnf, _ = build_encoding(fig1_sample, 3, O_ALL)
    bulk = NativeSession()
    single = NativeSession()
    try:
        bulk.add_cnf(cnf)
        for clause in cnf.clauses():
            single.add_clause(clause)
        assert bulk.num_clauses == single.num_clauses == cnf.num_clauses
        assert bulk.solve().status == single.solve().status == "unsat"
    finally:
        bulk.close()
        single.close()


def test_conflict_budget_zero_gives_unknown():
    session = NativeSession()
    try:
        session.add_cnf(pigeonhole(5))
        out = session.solve(conflict_budget=0)
        assert out.status == "unknown"
        assert out.model is None
        # and without the budget the instance is genuinely unsat
        assert session.solve().status == "unsat"
    finally:
        session.close()


def test_wall_clock_timeout_gives_unknown():
    session = NativeSession()
    try:
        session.add_cnf(pigeonhole(11))
        out = session.solve(timeout=0.05)
        assert out.status == "unknown"
        assert out.time < 5.0
    finally:
        session.close()


def test_declare_vars_reserves_ids():
    session = NativeSession()
    try:
        session.add_clause([1])
        session.declare_vars(5)
        assert session.num_vars == 5
        assert len(session.solve().model) == 6
    finally:
        session.close()


# -- DIMACS

def test_export_dimacs_minimal_example():
    cnf = Cnf()
    cnf.add("t", [1, -2])
    assert export_dimacs(cnf) == "p cnf 2 1\n1 -2 0\n"


def test_export_dimacs_with_varmap_comments(fig1_sample):
    cnf, vm = build_encoding(fig1_sample, 2, O_ALL)
    text = export_dimacs(cnf, vm)
    lines = text.splitlines()
    assert lines[0].startswith("c 1 = x[1,")
    header = next(l for l in lines if l.startswith("p "))
    assert header == f"p cnf {vm.num_vars} {cnf.num_clauses}"


def test_parse_dimacs_round_trip(fig1_sample):
    cnf, vm = build_encoding(fig1_sample, 4, O_ALL)
    num_vars, clauses = parse_dimacs(export_dimacs(cnf, vm))
    assert num_vars == vm.num_vars
    assert len(clauses) == cnf.num_clauses
    session = NativeSession()
    try:
        for clause in clauses:
            session.add_clause(clause)
        assert session.solve().status == "sat"
    finally:
        session.close()


def test_parse_dimacs_rejects_bad_header():
    with pytest.raises(SolverError):
        parse_dimacs("p dnf 2 1\n1 0\n")


def test_subprocess_backend_on_encodings(fig1_sample):
    for k, expected in ((3, "unsat"), (4, "sat")):
        cnf, vm = build_encoding(fig1_sample, k, O_ALL)
        session = DimacsSession(DIMACS_SOLVER)
        try:
            session.add_cnf(cnf)
            out = session.solve()
            assert out.status == expected
            if expected == "sat":
                concept = decode_model(out.model, vm)
                assert fits(concept, fig1_sample)
        finally:
            session.close()


def test_make_session_backends():
    assert isinstance(make_session(SolverConfig(backend="native")),
                      NativeSession)
    assert isinstance(
        make_session(SolverConfig(backend=f"dimacs:{DIMACS_SOLVER}")),
        DimacsSession)
    with pytest.raises(SolverError):
        make_session(SolverConfig(backend="minisat"))
    with pytest.raises(SolverError):
        make_session(SolverConfig(backend="dimacs:"))


def test_missing_subprocess_command_raises():
    session = DimacsSession("definitely-not-a-real-solver-binary")
    session.add_clause([1])
    with pytest.raises(SolverError):
        session.solve()
