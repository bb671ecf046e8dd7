"""Plan/execute Poisson solver: forward transforms, eigenvalue division, backward transforms.

A :class:`SolverPlan` is built once from a :class:`SolverConfig` and then
executes any number of solves.  Supported configurations are

* uniform: every axis carries the same boundary-condition/grid row, or
* mixed: any number of periodic axes combined with non-periodic axes that all
  carry one identical row (the classic case: periodic streamwise directions
  with a wall-normal Dirichlet or Neumann axis).

Axis roles are free: periodic axes may sit anywhere; the plan records which
axes it treats as periodic.  Arrays use C (row-major) order throughout; the
last axis is the contiguous one.

Singular configurations (every axis periodic or Neumann) are handled by
zeroing the null-mode coefficient: the removed mean of the right-hand side is
reported and the returned solution is adjusted to have zero arithmetic mean,
i.e. zero projection onto the null space of the discrete operator.

Plans are immutable after construction; ``solve`` allocates its workspace per
call, so concurrent solves on one shared plan (with distinct buffers) are
safe.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field as dataclass_field

import numpy as np
from scipy import fft as _sfft

from .eigenvalues import combine_eigenvalues, eigenvalue_table
from .field import as_array
from .grid import (
    Approximation,
    BoundaryCondition,
    ConfigurationError,
    GridKind,
    GridSpec,
)
from .reorder import ReorderPlan, gather_lines, make_buffer, scatter_lines
from .transforms import TransformKind, TransformPlan, transform_pair_for

_PRECISION_DTYPES = {"double": np.float64, "single": np.float32}

# Small double-precision solves run their transform pipeline in extended
# precision (where the platform provides one) and round once at the end:
# high-index eigenmodes amplify transform roundoff by |lambda_max/lambda_min|,
# and at these sizes the extra accuracy is free.  Large solves keep the
# native-precision fast path.
_EXTENDED_LIMIT = 4096
_HAVE_EXTENDED = np.finfo(np.longdouble).eps < np.finfo(np.float64).eps

# forward transform of the all-ones line, evaluated at the null index; used to
# convert the removed null coefficient back into a mean value
_ONES_NULL_COEFF = {
    TransformKind.DFT: lambda n: 1.0,
    TransformKind.DCT1: lambda n: 2.0 * (n - 1),
    TransformKind.DCT2: lambda n: 2.0 * n,
}


@dataclass(frozen=True)
class SolverConfig:
    """Grid specification per axis plus the approximation to diagonalize."""

    grids: tuple
    approximation: Approximation
    precision: str = "double"

    def __post_init__(self):
        grids = tuple(self.grids)
        object.__setattr__(self, "grids", grids)
        if not 1 <= len(grids) <= 3:
            raise ConfigurationError(f"1 to 3 dimensions supported, got {len(grids)}")
        if not all(isinstance(g, GridSpec) for g in grids):
            raise ConfigurationError("grids must be GridSpec instances")
        if self.precision not in _PRECISION_DTYPES:
            raise ConfigurationError(
                f"precision must be one of {sorted(_PRECISION_DTYPES)}, got {self.precision!r}"
            )
        nonperiodic_rows = {
            (g.bc, g.kind) for g in grids if g.bc is not BoundaryCondition.PERIODIC
        }
        if len(nonperiodic_rows) > 1:
            raise ConfigurationError(
                "unsupported boundary pattern: non-periodic axes must all carry the "
                f"same condition and grid kind, got {sorted((b.value, k.value) for b, k in nonperiodic_rows)}"
            )

    @property
    def dims(self) -> int:
        return len(self.grids)

    @property
    def shape(self) -> tuple:
        return tuple(g.n for g in self.grids)

    @property
    def dtype(self):
        return np.dtype(_PRECISION_DTYPES[self.precision])

    @property
    def periodic_axes(self) -> tuple:
        return tuple(
            ax for ax, g in enumerate(self.grids) if g.bc is BoundaryCondition.PERIODIC
        )

    @property
    def mode(self) -> str:
        """"uniform" when all axes share one row, "mixed" otherwise."""
        return "uniform" if len({(g.bc, g.kind) for g in self.grids}) == 1 else "mixed"

    @property
    def singular(self) -> bool:
        """True when the constant mode lies in the operator's null space."""
        return all(g.bc is not BoundaryCondition.DIRICHLET for g in self.grids)


@dataclass
class SolveReport:
    """Outcome bookkeeping for one solve."""

    removed_mean: float = 0.0
    mode: str = "uniform"
    periodic_axes: tuple = ()
    timing: dict = dataclass_field(default_factory=dict)


class SolverPlan:
    """Immutable precomputation for one configuration: transform plans per axis,
    the combined eigenvalue array, and null-mode bookkeeping."""

    def __init__(self, config: SolverConfig, threads: int = 1):
        self.config = config
        self.threads = max(1, int(threads))
        self.shape = config.shape
        self.dtype = config.dtype
        small = math.prod(self.shape) <= _EXTENDED_LIMIT
        if small and _HAVE_EXTENDED and self.dtype == np.float64:
            self._work_dtype = np.dtype(np.longdouble)
        else:
            self._work_dtype = self.dtype

        self._pairs = [transform_pair_for(g.bc, g.kind) for g in config.grids]
        self.tables = [eigenvalue_table(g, config.approximation) for g in config.grids]
        combined = combine_eigenvalues(self.tables)
        lam = combined.values
        # the diagonal pass is a single multiply that divides by the
        # eigenvalue, projects out the null modes (exact zeros -> 0), and
        # carries the backward normalization of the real-transform pairs
        backward_scale = math.prod(
            pair.backward_scale(g.n) for g, pair in zip(config.grids, self._pairs)
        )
        inv = np.zeros_like(lam)
        np.divide(backward_scale, lam, out=inv, where=lam != 0.0)
        self._inv_lam = inv.astype(self._work_dtype)
        self.null_modes = combined.null_modes

        self._periodic_axes = config.periodic_axes
        self._real_axes = tuple(
            ax for ax in range(config.dims) if ax not in self._periodic_axes
        )
        last = config.dims - 1
        self._forward = {}
        self._backward = {}
        self._reorder = {}
        for ax, (g, pair) in enumerate(zip(config.grids, self._pairs)):
            self._forward[ax] = TransformPlan(pair.forward, g.n, axis=ax, workers=self.threads)
            self._backward[ax] = TransformPlan(pair.backward, g.n, axis=ax, workers=self.threads)
            # mixed solves run real transforms one axis at a time; lines along
            # a non-contiguous axis go through the gather/scatter reorder pass
            if config.mode == "mixed" and ax in self._real_axes and ax != last:
                self._reorder[ax] = ReorderPlan(self.shape, ax)
        if self.config.singular:
            self._null_scale = math.prod(
                _ONES_NULL_COEFF[pair.forward](g.n)
                for g, pair in zip(config.grids, self._pairs)
            )

    @property
    def mode(self) -> str:
        return self.config.mode

    @property
    def singular(self) -> bool:
        return self.config.singular

    def solve(self, rhs, out=None):
        """Solve the discrete Poisson problem for ``rhs``.

        ``rhs`` and ``out`` may be Fields or ndarrays, may be strided
        sub-blocks of larger allocations, and may alias each other.  Returns
        ``(solution, report)``; ``rhs`` is preserved unless ``out`` aliases it.
        """
        rhs_arr = as_array(rhs)
        if rhs_arr.shape != self.shape:
            raise ValueError(f"rhs extents {rhs_arr.shape} do not match plan extents {self.shape}")
        if not np.isfinite(rhs_arr).all():
            raise ValueError("rhs contains non-finite values")
        if out is None:
            out_arr = np.empty(self.shape, dtype=self.dtype)
        else:
            out_arr = as_array(out)
            if out_arr.shape != self.shape:
                raise ValueError(
                    f"solution extents {out_arr.shape} do not match plan extents {self.shape}"
                )

        report = SolveReport(mode=self.mode, periodic_axes=self._periodic_axes)
        work = np.array(rhs_arr, dtype=self._work_dtype, copy=True, order="C")

        t0 = time.perf_counter()
        work = self._forward_pass(work)
        t1 = time.perf_counter()
        if self.singular:
            coeff = work[tuple(self.null_modes[0])]
            report.removed_mean = float(np.real(coeff)) / self._null_scale
        work *= self._inv_lam
        t2 = time.perf_counter()
        work = self._backward_pass(work)
        if self.singular:
            work -= work.mean()
        t3 = time.perf_counter()

        report.timing = {"forward": t1 - t0, "diagonal": t2 - t1, "backward": t3 - t2}
        out_arr[...] = work
        return out_arr, report

    # -- internal passes ---------------------------------------------------

    def _forward_pass(self, work):
        for ax in self._real_axes:
            work = self._real_transform(work, ax, forward=True)
        if self._periodic_axes:
            scale = math.prod(self.shape[ax] for ax in self._periodic_axes)
            work = _sfft.fftn(work, axes=self._periodic_axes, workers=self.threads) / scale
        return work

    def _backward_pass(self, work):
        if self._periodic_axes:
            scale = math.prod(self.shape[ax] for ax in self._periodic_axes)
            work = _sfft.ifftn(work, axes=self._periodic_axes, workers=self.threads) * scale
            work = np.ascontiguousarray(work.real, dtype=self._work_dtype)
        for ax in reversed(self._real_axes):
            work = self._real_transform(work, ax, forward=False)
        return work

    def _real_transform(self, work, ax, forward):
        plan = self._forward[ax] if forward else self._backward[ax]
        rplan = self._reorder.get(ax)
        if rplan is None:
            return plan.execute_real(work)
        buf = make_buffer(rplan, dtype=work.dtype)
        gather_lines(rplan, work, buf)
        lines = TransformPlan(plan.kind, plan.n, axis=-1, workers=self.threads)
        buf = lines.execute_real(buf)
        scatter_lines(rplan, buf, work)
        return work


def plan_create(config: SolverConfig, threads: int = 1) -> SolverPlan:
    """Build the immutable plan for a configuration (validates it)."""
    return SolverPlan(config, threads=threads)


def solve(plan: SolverPlan, rhs, out=None):
    """Three-step solve on a prepared plan; see :meth:`SolverPlan.solve`."""
    return plan.solve(rhs, out)


def solve_mixed(plan: SolverPlan, rhs, out=None):
    """Mixed-boundary path; rejects plans that are not mixed.

    ``solve`` dispatches here implicitly for mixed plans; calling it with a
    uniform plan is a usage error (the normalization bookkeeping differs), so
    it raises instead of silently producing a wrong answer.
    """
    if plan.mode != "mixed":
        raise ConfigurationError("plan is not a mixed-boundary plan; use solve()")
    return plan.solve(rhs, out)


def apply_discrete_laplacian(config: SolverConfig, field, out=None) -> np.ndarray:
    """Apply the second-order central-difference Laplacian with the plan's
    boundary closures (verification aid; finite-difference approximation only).

    Closures per axis: periodic wrap; Dirichlet regular ghost = 0; Dirichlet
    staggered ghost = -phi_edge; Neumann regular ghost = phi_second (reflected
    node); Neumann staggered ghost = phi_edge.
    """
    if config.approximation is not Approximation.FINITE_DIFFERENCE_2:
        raise ConfigurationError("discrete Laplacian is defined for the fd2 approximation")
    arr = as_array(field)
    if arr.shape != config.shape:
        raise ValueError(f"field extents {arr.shape} do not match config extents {config.shape}")
    result = np.zeros(arr.shape, dtype=np.result_type(arr.dtype, np.float64))
    for ax, spec in enumerate(config.grids):
        result += _second_difference(arr, ax, spec)
    if out is not None:
        out_arr = as_array(out)
        out_arr[...] = result
        return out_arr
    return result


def _second_difference(arr, axis, spec: GridSpec):
    x = np.moveaxis(np.asarray(arr, dtype=np.float64), axis, 0)
    res = np.empty_like(x)
    n, bc, kind = spec.n, spec.bc, spec.kind
    if n == 1:
        if bc is BoundaryCondition.DIRICHLET:
            res[0] = -4.0 * x[0] if kind is GridKind.STAGGERED else -2.0 * x[0]
        else:
            res[0] = 0.0
    else:
        res[1:-1] = x[2:] - 2.0 * x[1:-1] + x[:-2]
        if bc is BoundaryCondition.PERIODIC:
            res[0] = x[1] - 2.0 * x[0] + x[-1]
            res[-1] = x[0] - 2.0 * x[-1] + x[-2]
        elif bc is BoundaryCondition.DIRICHLET:
            if kind is GridKind.REGULAR:
                res[0] = x[1] - 2.0 * x[0]
                res[-1] = x[-2] - 2.0 * x[-1]
            else:
                res[0] = x[1] - 3.0 * x[0]
                res[-1] = x[-2] - 3.0 * x[-1]
        else:
            if kind is GridKind.REGULAR:
                res[0] = 2.0 * x[1] - 2.0 * x[0]
                res[-1] = 2.0 * x[-2] - 2.0 * x[-1]
            else:
                res[0] = x[1] - x[0]
                res[-1] = x[-2] - x[-1]
    res /= spec.dx ** 2
    return np.moveaxis(res, 0, axis)
