"""Denotational interpreter over partial density operators.

Statements denote positive linear trace-nonincreasing maps. Measurement
branching projects without renormalizing, which is exactly what makes
intermediate states sub-normalized: lost trace is mass parked on paths
that have not terminated. A while loop is evaluated as the supremum of
its Kleene approximants

    acc_0 = 0,   sigma_0 = rho
    acc_{n+1} = acc_n + P_exit sigma_n P_exit
    sigma_{n+1} = [[body]](P_guard sigma_n P_guard)

an increasing chain whose limit is detected by the trace gap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..density import (
    FixpointConfig,
    PartialDensityOperator,
    chain_supremum,
    nontermination_probability,
)
from ..errors import DimensionMismatchError
from .ast import ApplyUnitary, Branch, Program, Seq, Skip, Statement, While
from .gates import denote_unitary


@dataclass
class RunReport:
    """Result of one program run.

    ``iterations_per_loop`` lists the fixpoint iteration counts of every
    loop evaluation in completion order. ``chain_trace_log`` holds the
    nondecreasing accumulator traces of the final outermost loop (the
    chain whose supremum becomes the output); for loop-free programs it
    degenerates to the output trace alone.
    """

    output: PartialDensityOperator
    iterations_per_loop: list[int]
    residual: float
    converged: bool
    chain_trace_log: list[float]

    def to_json(self) -> dict:
        return {
            "output": self.output.to_json(),
            "iterations_per_loop": list(self.iterations_per_loop),
            "residual": self.residual,
            "converged": self.converged,
            "chain_trace_log": list(self.chain_trace_log),
        }


@dataclass
class _RunState:
    cfg: FixpointConfig
    iterations: list[int] = field(default_factory=list)
    converged: bool = True
    chain_trace_log: list[float] = field(default_factory=list)
    unitary_cache: dict[int, np.ndarray] = field(default_factory=dict)
    total_qubits: int = 0


def interpret(
    prog: Program, input_state: PartialDensityOperator, cfg: FixpointConfig | None = None
) -> RunReport:
    """Run a program on an input partial density operator.

    Nonconvergence of a loop within ``cfg.max_iterations`` is reported
    through ``converged=False``, not raised; a decreasing approximant
    chain (an interpreter bug, impossible for well-formed semantics)
    raises ``ChainMonotonicityError``.
    """
    cfg = cfg or FixpointConfig()
    if input_state.dim != prog.dim:
        raise DimensionMismatchError(
            f"input has dimension {input_state.dim}, program needs {prog.dim}"
        )
    state = _RunState(cfg=cfg, total_qubits=prog.total_qubits)
    out = _eval(prog.body, input_state.matrix, state, loop_depth=0)
    output = PartialDensityOperator(out)
    if not state.chain_trace_log:
        state.chain_trace_log = [output.trace]
    return RunReport(
        output=output,
        iterations_per_loop=state.iterations,
        residual=nontermination_probability(output),
        converged=state.converged,
        chain_trace_log=state.chain_trace_log,
    )


def _eval(stmt: Statement, rho: np.ndarray, state: _RunState, loop_depth: int) -> np.ndarray:
    if isinstance(stmt, Skip):
        return rho
    if isinstance(stmt, Seq):
        for inner in stmt.statements:
            rho = _eval(inner, rho, state, loop_depth)
        return rho
    if isinstance(stmt, ApplyUnitary):
        u = state.unitary_cache.get(id(stmt))
        if u is None:
            u = denote_unitary(stmt.gate, stmt.targets, state.total_qubits)
            state.unitary_cache[id(stmt)] = u
        return _validated(u @ rho @ u.conj().T)
    if isinstance(stmt, Branch):
        p = stmt.guard.projection
        q = np.eye(p.shape[0]) - p
        taken = _eval(stmt.then_body, _validated(p @ rho @ p), state, loop_depth)
        other = _eval(stmt.else_body, _validated(q @ rho @ q), state, loop_depth)
        return _validated(taken + other)
    if isinstance(stmt, While):
        return _eval_while(stmt, rho, state, loop_depth)
    raise TypeError(f"unknown statement node {stmt!r}")


def _eval_while(stmt: While, rho: np.ndarray, state: _RunState, loop_depth: int) -> np.ndarray:
    p = stmt.guard.projection
    p_exit = np.eye(p.shape[0]) - p
    trace_log: list[float] = []

    def approximants():
        acc = np.zeros_like(rho)
        sigma = rho
        while True:
            acc = acc + p_exit @ sigma @ p_exit
            approx = PartialDensityOperator(acc)
            trace_log.append(approx.trace)
            yield approx
            sigma = _eval(stmt.body, _validated(p @ sigma @ p), state, loop_depth + 1)

    sup, iterations, converged = chain_supremum(approximants(), state.cfg)
    state.iterations.append(iterations)
    state.converged = state.converged and converged
    if loop_depth == 0:
        state.chain_trace_log = trace_log
    return sup.matrix


def _validated(rho: np.ndarray) -> np.ndarray:
    return PartialDensityOperator(rho).matrix
