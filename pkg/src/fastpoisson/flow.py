"""Incompressible-flow demo: projection method with low-storage RK3 on a 2D staggered grid.

This is the Poisson solver's original application: every Runge-Kutta stage
computes a predictor velocity and then projects it onto the divergence-free
space by solving a pressure-correction Poisson problem with the matching
second-order finite-difference operator.  "Matching" is the whole point: the
divergence of the discrete gradient of a cell-centered scalar is exactly the
FD2 Laplacian the solver diagonalizes, so the corrected velocity is discretely
divergence-free to roundoff.

Geometry: axes (x, z) with cells (nx, nz).  x is always periodic.  z is either
periodic (Taylor-Green) or closed by no-slip walls (channel); walls map to
staggered Neumann conditions for the pressure.  Arrangement:

    p, phi    cell centers   (nx, nz)
    u         x-faces        (nx, nz)            u[i,j] at (i dx, (j+1/2) dz)
    w         z-faces        (nx, nz) periodic   w[i,j] at ((i+1/2) dx, j dz)
                             (nx, nz+1) walls    boundary faces pinned to 0

Advective terms use second-order conservative central differences (the
divergence form of the momentum flux); viscosity is a constant and is treated
explicitly inside the RK3 stage weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .grid import Approximation, BoundaryCondition, GridKind, GridSpec
from .solver import SolverConfig, SolverPlan


@dataclass(frozen=True)
class RK3Coefficients:
    """Stage weights of the three-stage scheme; must satisfy
    sum(alpha) == 1 and gamma_k + zeta_k == alpha_k exactly."""

    alpha: tuple
    gamma: tuple
    zeta: tuple

    def __post_init__(self):
        if not (len(self.alpha) == len(self.gamma) == len(self.zeta) == 3):
            raise ValueError("three stages expected")
        if sum(self.alpha) != 1:
            raise ValueError(f"stage fractions must sum to 1, got {sum(self.alpha)}")
        for k in range(3):
            if self.gamma[k] + self.zeta[k] != self.alpha[k]:
                raise ValueError(
                    f"stage {k}: gamma + zeta = {self.gamma[k] + self.zeta[k]} != alpha = {self.alpha[k]}"
                )

    @classmethod
    def standard(cls) -> "RK3Coefficients":
        return cls(
            alpha=(Fraction(8, 15), Fraction(2, 15), Fraction(1, 3)),
            gamma=(Fraction(8, 15), Fraction(5, 12), Fraction(3, 4)),
            zeta=(Fraction(0), Fraction(-17, 60), Fraction(-5, 12)),
        )


@dataclass
class StaggeredVelocity:
    """Velocity components on the faces of a uniform cell grid."""

    u: np.ndarray
    w: np.ndarray
    lengths: tuple
    nu: float
    z_walls: bool = False

    def __post_init__(self):
        nx, nz = self.u.shape
        expected_w = (nx, nz + 1) if self.z_walls else (nx, nz)
        if self.w.shape != expected_w:
            raise ValueError(
                f"w shape {self.w.shape} inconsistent with u shape {self.u.shape} "
                f"({'walls' if self.z_walls else 'periodic'} in z; expected {expected_w})"
            )
        if self.nu < 0:
            raise ValueError("viscosity must be non-negative")

    @classmethod
    def zeros(cls, cells, lengths, nu, z_walls=False) -> "StaggeredVelocity":
        nx, nz = cells
        w_shape = (nx, nz + 1) if z_walls else (nx, nz)
        return cls(np.zeros((nx, nz)), np.zeros(w_shape), tuple(lengths), nu, z_walls)

    @property
    def cells(self) -> tuple:
        return self.u.shape

    @property
    def spacing(self) -> tuple:
        nx, nz = self.u.shape
        return (self.lengths[0] / nx, self.lengths[1] / nz)


@dataclass
class PressureField:
    """Cell-centered pressure (divided by density) and the last stage correction."""

    p: np.ndarray
    phi: np.ndarray = None

    @classmethod
    def zeros(cls, cells) -> "PressureField":
        return cls(np.zeros(cells), np.zeros(cells))


def divergence(vel: StaggeredVelocity) -> np.ndarray:
    """Cell-centered divergence: sum over axes of face differences / spacing."""
    dx, dz = vel.spacing
    div = (np.roll(vel.u, -1, axis=0) - vel.u) / dx
    if vel.z_walls:
        div += (vel.w[:, 1:] - vel.w[:, :-1]) / dz
    else:
        div += (np.roll(vel.w, -1, axis=1) - vel.w) / dz
    return div


def gradient(vel: StaggeredVelocity, scalar: np.ndarray):
    """Cell-centered scalar -> face-centered gradient components.

    Wall z-faces get gradient zero (Neumann pressure condition), which keeps
    pinned wall velocities untouched by the corrector.
    """
    dx, dz = vel.spacing
    gx = (scalar - np.roll(scalar, 1, axis=0)) / dx
    if vel.z_walls:
        nx, nz = scalar.shape
        gz = np.zeros((nx, nz + 1))
        gz[:, 1:-1] = (scalar[:, 1:] - scalar[:, :-1]) / dz
    else:
        gz = (scalar - np.roll(scalar, 1, axis=1)) / dz
    return gx, gz


def _corner_flux(vel: StaggeredVelocity) -> np.ndarray:
    """u*w interpolated to cell corners (where neither component lives)."""
    if vel.z_walls:
        nx, nz = vel.cells
        wc = (vel.w + np.roll(vel.w, 1, axis=0)) / 2.0  # (nx, nz+1) at corners
        uc = np.empty((nx, nz + 1))
        uc[:, 1:-1] = (vel.u[:, 1:] + vel.u[:, :-1]) / 2.0
        uc[:, 0] = 0.0  # wall values never used: w is 0 there
        uc[:, -1] = 0.0
        return uc * wc
    uc = (vel.u + np.roll(vel.u, 1, axis=1)) / 2.0
    wc = (vel.w + np.roll(vel.w, 1, axis=0)) / 2.0
    return uc * wc


def advective_term(vel: StaggeredVelocity):
    """-div(u (x) u) on each face grid, second-order conservative form."""
    dx, dz = vel.spacing
    corner = _corner_flux(vel)

    # u momentum: -(d(uu)/dx + d(wu)/dz) at x-faces
    uc = (vel.u + np.roll(vel.u, -1, axis=0)) / 2.0  # u at cell centers
    fxx = uc * uc
    au = -(fxx - np.roll(fxx, 1, axis=0)) / dx
    if vel.z_walls:
        au -= (corner[:, 1:] - corner[:, :-1]) / dz
    else:
        au -= (np.roll(corner, -1, axis=1) - corner) / dz

    # w momentum: -(d(uw)/dx + d(ww)/dz) at z-faces
    if vel.z_walls:
        wc = (vel.w[:, 1:] + vel.w[:, :-1]) / 2.0  # w at cell centers (nx, nz)
        fzz = wc * wc
        aw = np.zeros_like(vel.w)
        aw[:, 1:-1] = -(fzz[:, 1:] - fzz[:, :-1]) / dz
        aw -= (np.roll(corner, -1, axis=0) - corner) / dx
        aw[:, 0] = 0.0
        aw[:, -1] = 0.0
    else:
        wc = (vel.w + np.roll(vel.w, -1, axis=1)) / 2.0
        fzz = wc * wc
        aw = -(fzz - np.roll(fzz, 1, axis=1)) / dz
        aw -= (np.roll(corner, -1, axis=0) - corner) / dx
    return au, aw


def viscous_term(vel: StaggeredVelocity):
    """nu * Laplacian of each component on its own face grid.

    No-slip walls enter through mirrored ghosts for the tangential component
    (u = 0 on the wall midway between ghost and first face center) and the
    pinned zero wall values for the normal component.
    """
    dx, dz = vel.spacing
    u, w = vel.u, vel.w

    lu = (np.roll(u, -1, axis=0) - 2.0 * u + np.roll(u, 1, axis=0)) / dx ** 2
    if vel.z_walls:
        d2z = np.empty_like(u)
        d2z[:, 1:-1] = u[:, 2:] - 2.0 * u[:, 1:-1] + u[:, :-2]
        d2z[:, 0] = u[:, 1] - 3.0 * u[:, 0]
        d2z[:, -1] = u[:, -2] - 3.0 * u[:, -1]
        lu += d2z / dz ** 2
    else:
        lu += (np.roll(u, -1, axis=1) - 2.0 * u + np.roll(u, 1, axis=1)) / dz ** 2

    lw = (np.roll(w, -1, axis=0) - 2.0 * w + np.roll(w, 1, axis=0)) / dx ** 2
    if vel.z_walls:
        d2z = np.zeros_like(w)
        d2z[:, 1:-1] = w[:, 2:] - 2.0 * w[:, 1:-1] + w[:, :-2]
        lw += d2z / dz ** 2
        lw[:, 0] = 0.0
        lw[:, -1] = 0.0
    else:
        lw += (np.roll(w, -1, axis=1) - 2.0 * w + np.roll(w, 1, axis=1)) / dz ** 2
    return vel.nu * lu, vel.nu * lw


class ProjectionFlow:
    """Stepping driver: holds the velocity/pressure state and the pressure
    Poisson plan, and advances with the three-stage scheme.

    ``forcing`` is an optional constant body force per unit mass, (fx, fz).
    """

    def __init__(self, velocity: StaggeredVelocity, pressure: PressureField = None,
                 coefficients: RK3Coefficients = None, forcing=(0.0, 0.0), threads: int = 1):
        self.velocity = velocity
        self.pressure = pressure if pressure is not None else PressureField.zeros(velocity.cells)
        if self.pressure.p.shape != velocity.cells:
            raise ValueError("pressure extents must match the cell grid")
        self.coefficients = coefficients if coefficients is not None else RK3Coefficients.standard()
        self.forcing = (float(forcing[0]), float(forcing[1]))
        self.time = 0.0
        self.step_count = 0
        self.stage_divergence = []  # max |div| after each stage of the last step

        nx, nz = velocity.cells
        lx, lz = velocity.lengths
        zspec = (
            GridSpec(nz, lz, BoundaryCondition.NEUMANN, GridKind.STAGGERED)
            if velocity.z_walls
            else GridSpec(nz, lz, BoundaryCondition.PERIODIC, GridKind.REGULAR)
        )
        config = SolverConfig(
            (GridSpec(nx, lx, BoundaryCondition.PERIODIC, GridKind.REGULAR), zspec),
            Approximation.FINITE_DIFFERENCE_2,
        )
        self.poisson = SolverPlan(config, threads=threads)

    def rk3_step(self, dt: float) -> None:
        """Advance one full time step of size dt (three projection stages)."""
        if not dt > 0:
            raise ValueError(f"time step must be positive, got {dt}")
        vel, pres = self.velocity, self.pressure
        alpha = [float(a) for a in self.coefficients.alpha]
        gamma = [float(g) for g in self.coefficients.gamma]
        zeta = [float(z) for z in self.coefficients.zeta]
        fx, fz = self.forcing

        self.stage_divergence = []
        prev_hu = prev_hw = None
        for k in range(3):
            if not (np.isfinite(vel.u).all() and np.isfinite(vel.w).all()):
                raise FloatingPointError(
                    f"non-finite velocity entering stage {k + 1} of step {self.step_count + 1}"
                )
            au, aw = advective_term(vel)
            vu, vw = viscous_term(vel)
            hu = au + vu + fx
            hw = aw + vw + fz
            if vel.z_walls:
                hw[:, 0] = 0.0
                hw[:, -1] = 0.0

            gpx, gpz = gradient(vel, pres.p)
            ustar = vel.u + dt * (-alpha[k] * gpx + gamma[k] * hu)
            wstar = vel.w + dt * (-alpha[k] * gpz + gamma[k] * hw)
            if zeta[k] != 0.0:
                ustar += dt * zeta[k] * prev_hu
                wstar += dt * zeta[k] * prev_hw
            prev_hu, prev_hw = hu, hw

            if not (np.isfinite(ustar).all() and np.isfinite(wstar).all()):
                raise FloatingPointError(
                    f"non-finite predictor velocity in stage {k + 1} of step {self.step_count + 1}"
                )
            star = StaggeredVelocity(ustar, wstar, vel.lengths, vel.nu, vel.z_walls)
            rhs = divergence(star) / (alpha[k] * dt)
            phi, _ = self.poisson.solve(rhs)
            gfx, gfz = gradient(vel, phi)
            vel.u = ustar - alpha[k] * dt * gfx
            vel.w = wstar - alpha[k] * dt * gfz
            pres.p = pres.p + phi
            pres.phi = phi

            if not (np.isfinite(vel.u).all() and np.isfinite(vel.w).all()):
                raise FloatingPointError(
                    f"non-finite velocity after stage {k + 1} of step {self.step_count + 1}"
                )
            self.stage_divergence.append(float(np.abs(divergence(vel)).max()))

        self.time += dt
        self.step_count += 1

    def kinetic_energy(self) -> float:
        """0.5 * integral of |u|^2, one face volume per face value."""
        dx, dz = self.velocity.spacing
        cell = dx * dz
        ke = 0.5 * cell * float(np.sum(self.velocity.u ** 2))
        if self.velocity.z_walls:
            ke += 0.5 * cell * float(np.sum(self.velocity.w[:, 1:-1] ** 2))
        else:
            ke += 0.5 * cell * float(np.sum(self.velocity.w ** 2))
        return ke

    def max_divergence(self) -> float:
        return float(np.abs(divergence(self.velocity)).max())

    def velocity_scale(self) -> float:
        return max(
            float(np.abs(self.velocity.u).max()),
            float(np.abs(self.velocity.w).max()),
            1e-300,
        )

    def cfl_advisory(self, dt: float) -> float:
        """Advective CFL number for the given step (caller stability aid)."""
        dx, dz = self.velocity.spacing
        umax = float(np.abs(self.velocity.u).max())
        wmax = float(np.abs(self.velocity.w).max())
        return dt * (umax / dx + wmax / dz)


def taylor_green(n: int, nu: float = 0.01, amplitude: float = 1.0) -> ProjectionFlow:
    """Doubly periodic Taylor-Green vortex on [0, 2 pi]^2.

    The analytic solution decays as exp(-2 nu t) per component, so kinetic
    energy follows KE(t) = KE(0) * exp(-4 nu t).
    """
    L = 2.0 * np.pi
    dx = dz = L / n
    i = np.arange(n)
    xu = i * dx  # u faces
    zu = (i + 0.5) * dz
    xw = (i + 0.5) * dx  # w faces
    zw = i * dz
    u = amplitude * np.sin(xu)[:, None] * np.cos(zu)[None, :]
    w = -amplitude * np.cos(xw)[:, None] * np.sin(zw)[None, :]
    vel = StaggeredVelocity(u, w, (L, L), nu, z_walls=False)
    return ProjectionFlow(vel)


def taylor_green_energy(flow_or_ke0, nu: float, t: float) -> float:
    """Analytic kinetic-energy decay KE(0) * exp(-4 nu t)."""
    ke0 = flow_or_ke0 if np.isscalar(flow_or_ke0) else flow_or_ke0.kinetic_energy()
    return float(ke0 * np.exp(-4.0 * nu * t))


def channel(cells, lengths, nu: float, forcing_x: float = 0.0) -> ProjectionFlow:
    """Channel-like configuration: periodic in x, no-slip walls in z,
    optional constant streamwise forcing."""
    vel = StaggeredVelocity.zeros(cells, lengths, nu, z_walls=True)
    return ProjectionFlow(vel, forcing=(forcing_x, 0.0))
