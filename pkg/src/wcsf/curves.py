"""Discrete closed curves in a warped product and their geometric operators.

Curves are sampled at uniform parameter nodes u_j = 2 pi j / M and stored
through lifted (unreduced) coordinates, so spectral differentiation always
sees smooth periodic data: coords[:, c] = winding[c] * u + periodic part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spectral
from .fourier import FourierField
from .geometry import LEFT, TWO_PI, WarpedProduct

__all__ = [
    "GRAPH",
    "PARAMETRIC",
    "ImmersionError",
    "DiscreteCurve",
    "CurveFields",
    "make_graph_curve",
    "compute_fields",
    "unit_tangent",
    "mean_curvature",
    "angle_function",
    "length",
    "arc_derivative",
    "arc_laplacian",
    "graphicality",
    "resample",
]

GRAPH = "graph"
PARAMETRIC = "parametric"

_SPEED_FLOOR = 1e-10


class ImmersionError(ValueError):
    """Raised when a curve has a numerically degenerate tangent."""


def _validate_m(m: int) -> int:
    m = int(m)
    if m < 32 or (m & (m - 1)) != 0:
        raise ValueError(f"node count must be a power of two >= 32, got {m}")
    return m


@dataclass(frozen=True)
class DiscreteCurve:
    """Closed curve at nodes u_j = 2 pi j / M.

    mode "graph" fixes r_j = u_j exactly (winding starts with 1), so the
    curve is the graph x = f(r) wound once around the circle factor. Mode
    "parametric" leaves every coordinate free; winding entries record how
    many times each lifted coordinate gains 2 pi per loop.
    """

    mode: str
    coords: np.ndarray
    winding: tuple

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "winding", tuple(int(w) for w in self.winding))
        if self.mode not in (GRAPH, PARAMETRIC):
            raise ValueError(f"unknown curve mode {self.mode!r}")
        if coords.ndim != 2:
            raise ValueError("coords must have shape (M, 1 + base_dim)")
        _validate_m(coords.shape[0])
        if len(self.winding) != coords.shape[1]:
            raise ValueError("winding length must match the coordinate count")
        if self.mode == GRAPH and self.winding[0] != 1:
            raise ValueError("graph mode winds exactly once in r")

    @property
    def m(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        """Ambient coordinate count, 1 + base_dim."""
        return self.coords.shape[1]

    def periodic_part(self) -> np.ndarray:
        u = spectral.nodes(self.m)
        return self.coords - u[:, None] * np.asarray(self.winding, dtype=float)


def make_graph_curve(fields, m: int, x_winding=None,
                     allow_x_winding: bool = False) -> DiscreteCurve:
    """Sample the graph x = f(r) at m uniform nodes.

    fields: one FourierField per base coordinate (or a single field).
    x_winding adds an integer multiple of r to a base coordinate; such
    winding graphs are rejected unless explicitly allowed, because they
    break the plain torus-graph reading of the samples.
    """
    if isinstance(fields, FourierField):
        fields = [fields]
    fields = list(fields)
    if not fields:
        raise ValueError("need at least one graph coordinate field")
    m = _validate_m(m)
    n = len(fields)
    if x_winding is None:
        x_winding = (0,) * n
    x_winding = tuple(int(w) for w in x_winding)
    if len(x_winding) != n:
        raise ValueError("x_winding length must match the field count")
    if any(x_winding) and not allow_x_winding:
        raise ValueError("winding graph coordinates are disabled; "
                         "pass allow_x_winding=True to build ramps")
    u = spectral.nodes(m)
    coords = np.empty((m, n + 1))
    coords[:, 0] = u
    for i, f in enumerate(fields):
        coords[:, i + 1] = f(u) + x_winding[i] * u
    return DiscreteCurve(GRAPH, coords, (1,) + x_winding)


class CurveFields:
    """Per-node geometric data shared by the flow and the monitors.

    Attribute shapes (M nodes, d ambient dimensions):
      deriv            gamma' (M, d)
      speed            v = |gamma'|_G (M,)
      tangent          T = gamma' / v (M, d)
      curvature        H, projected normal (M, d)
      curvature_norm   |A| = |H|_G (M,)
      theta            <T, d_r>_G (M,)
      theta_hat        theta / |d_r|_G, clipped to [-1, 1] (M,)
      length           float
      pre_tangential   <H_pre, T>_G before the projection (M,)
      metric           G at the nodes (M, d, d)
      gamma            Christoffel symbols at the nodes (M, d, d, d)

    metric and gamma materialize on first access: the stepper never reads
    them, so the graph fast path defers building the two big arrays and
    hands over a closure instead.
    """

    __slots__ = ("deriv", "speed", "tangent", "curvature", "curvature_norm",
                 "theta", "theta_hat", "length", "pre_tangential",
                 "graph_velocity_x", "_metric", "_gamma", "_connection")

    def __init__(self, deriv, speed, tangent, curvature, curvature_norm,
                 theta, theta_hat, length, pre_tangential,
                 metric=None, gamma=None, connection=None,
                 graph_velocity_x=None):
        self.deriv = deriv
        self.speed = speed
        self.tangent = tangent
        self.curvature = curvature
        self.curvature_norm = curvature_norm
        self.theta = theta
        self.theta_hat = theta_hat
        self.length = length
        self.pre_tangential = pre_tangential
        self.graph_velocity_x = graph_velocity_x
        self._metric = metric
        self._gamma = gamma
        self._connection = connection

    @property
    def metric(self) -> np.ndarray:
        if self._metric is None:
            self._metric, self._gamma = self._connection()
        return self._metric

    @property
    def gamma(self) -> np.ndarray:
        if self._gamma is None:
            self._metric, self._gamma = self._connection()
        return self._gamma


def _fast_graph_fields(curve: DiscreteCurve,
                       manifold: WarpedProduct) -> CurveFields:
    # flat one dimensional base, graph parametrization: the metric is
    # diagonal and gamma' has r-component exactly 1, so every contraction
    # in the general path collapses to scalar node arrays. The speed
    # derivative comes from the exact chain rule instead of a second
    # spectral pass; the two paths agree to aliasing level and tests pin
    # that agreement on bandlimited curves.
    m = curve.m
    f = curve.coords[:, 1]
    wx = curve.winding[1]
    fper = f - wx * spectral.nodes(m) if wx else f
    fp, fpp = spectral.diff12(fper)
    if wx:
        fp = fp + wx
    left = manifold.kind == LEFT
    if left:
        psi, dpsi = manifold.warp.values_with_derivative(f)
        g00 = psi * psi
        v2 = g00 + fp * fp
        dlog = dpsi / psi
        pd = psi * dpsi
        gam0 = 2.0 * dlog * fp          # Gamma^0_{0x} gp^0 gp^x twice
        gamx = -pd                      # Gamma^x_{00} (gp^0)^2, flat base
        # v v' = psi psi' f' + f' f'' by the chain rule, exact at the nodes
        vvp = fp * (pd + fpp)
    else:
        phi, dphi, phi2, phidphi, dlog = manifold.circle_tables(m)
        v2 = 1.0 + phi2 * fp * fp
        gam0 = -phidphi * fp * fp       # Gamma^0_{xx} (gp^x)^2
        gamx = 2.0 * dlog * fp          # Gamma^x_{0x} gp^0 gp^x twice
        vvp = fp * (phidphi * fp + phi2 * fpp)
    v = np.sqrt(v2)
    if float(v.min()) <= _SPEED_FLOOR:
        raise ImmersionError("degenerate node: |gamma'| <= 1e-10")
    wq = vvp / (v2 * v2)                # v'/(v^2 v) with v v' substituted
    h0 = gam0 / v2 - wq                 # r'' is identically zero
    hx = (fpp + gamx) / v2 - fp * wq
    t0 = 1.0 / v
    tx = fp / v
    if left:
        gt0 = g00 / v                   # metric-weighted d_r, scale on x is 1
        gtx = tx
    else:
        gt0 = t0                        # scale on r is 1
        gtx = phi2 * tx
    pre_tan = gt0 * h0 + gtx * hx
    h0p = h0 - pre_tan * t0
    hxp = hx - pre_tan * tx
    theta = gt0
    if left:
        habs2 = g00 * h0p * h0p + hxp * hxp
        theta_hat = theta / psi         # |d_r|_G = psi
    else:
        habs2 = h0p * h0p + phi2 * hxp * hxp
        theta_hat = theta               # |d_r|_G = 1
    habs = np.sqrt(np.maximum(habs2, 0.0))
    theta_hat = np.minimum(np.maximum(theta_hat, -1.0), 1.0)
    total = float(v.sum() * (TWO_PI / m))
    gp = np.empty((m, 2))
    gp[:, 0] = 1.0
    gp[:, 1] = fp
    t = np.empty((m, 2))
    t[:, 0] = t0
    t[:, 1] = tx
    h = np.empty((m, 2))
    h[:, 0] = h0p
    h[:, 1] = hxp
    if left:
        def connection():
            g = np.zeros((m, 2, 2))
            g[:, 0, 0] = g00
            g[:, 1, 1] = 1.0
            gam = np.zeros((m, 2, 2, 2))
            gam[:, 0, 0, 1] = dlog
            gam[:, 0, 1, 0] = dlog
            gam[:, 1, 0, 0] = gamx
            return g, gam
    else:
        def connection():
            g = np.zeros((m, 2, 2))
            g[:, 0, 0] = 1.0
            g[:, 1, 1] = phi2
            gam = np.zeros((m, 2, 2, 2))
            gam[:, 1, 0, 1] = dlog
            gam[:, 1, 1, 0] = dlog
            gam[:, 0, 1, 1] = -phidphi
            return g, gam
    return CurveFields(
        deriv=gp,
        speed=v,
        tangent=t,
        curvature=h,
        curvature_norm=habs,
        theta=theta,
        theta_hat=theta_hat,
        length=total,
        pre_tangential=pre_tan,
        connection=connection,
        graph_velocity_x=hxp - h0p * fp,
    )


def compute_fields(curve: DiscreteCurve, manifold: WarpedProduct) -> CurveFields:
    """One pass over the curve: tangent, curvature, angle, length.

    The curvature vector is H = gamma''/v^2 - gamma' v'/v^3 + Gamma(gamma',
    gamma')/v^2 followed by an explicit projection orthogonal to T. The
    projection removes a tangential defect that is analytically zero; its
    pre-projection size is kept so tests can assert it stays O(M^-2).
    """
    if manifold.dim != curve.dim:
        raise ValueError("curve and manifold dimensions do not match")
    if (curve.mode == GRAPH and manifold.base_dim == 1
            and manifold.base_metric.is_flat):
        return _fast_graph_fields(curve, manifold)
    frame = manifold.frame(curve.coords)
    g = frame.metric
    d1, d2 = spectral.diff12(curve.periodic_part())
    gp = d1 + np.asarray(curve.winding, dtype=float)
    v2 = np.einsum("nab,na,nb->n", g, gp, gp)
    v = np.sqrt(v2)
    if not np.all(v > _SPEED_FLOOR):
        raise ImmersionError("degenerate node: |gamma'| <= 1e-10")
    vp = spectral.diff(v, 1)
    gam2 = np.einsum("nabc,nb,nc->na", frame.gamma, gp, gp)
    h_pre = (d2 + gam2) / v2[:, None] - gp * (vp / (v2 * v))[:, None]
    t = gp / v[:, None]
    gt = np.einsum("nab,nb->na", g, t)
    pre_tan = np.einsum("na,na->n", gt, h_pre)
    h = h_pre - pre_tan[:, None] * t
    habs = np.sqrt(np.maximum(np.einsum("nab,na,nb->n", g, h, h), 0.0))
    theta = gt[:, 0]
    theta_hat = np.clip(theta / np.sqrt(g[:, 0, 0]), -1.0, 1.0)
    total = float(v.sum() * (TWO_PI / curve.m))
    return CurveFields(
        deriv=gp,
        speed=v,
        tangent=t,
        curvature=h,
        curvature_norm=habs,
        theta=theta,
        theta_hat=theta_hat,
        length=total,
        pre_tangential=pre_tan,
        metric=g,
        gamma=frame.gamma,
    )


def unit_tangent(curve: DiscreteCurve, manifold: WarpedProduct) -> np.ndarray:
    """T_j = gamma'_j / |gamma'_j|_G, unit within 1e-12."""
    return compute_fields(curve, manifold).tangent


def mean_curvature(curve: DiscreteCurve, manifold: WarpedProduct):
    """Curvature vector H (normal to T by explicit projection) and |A| = |H|_G."""
    f = compute_fields(curve, manifold)
    return f.curvature, f.curvature_norm


def angle_function(curve: DiscreteCurve, manifold: WarpedProduct):
    """The angle Theta = <T, d_r>_G and its normalized variant
    Theta_hat = Theta / |d_r|_G in [-1, 1]."""
    f = compute_fields(curve, manifold)
    return f.theta, f.theta_hat


def length(curve: DiscreteCurve, manifold: WarpedProduct) -> float:
    """Trapezoidal length sum |gamma'_j|_G 2 pi / M (for periodic data the
    trapezoid rule is the plain node sum); spectrally accurate."""
    return compute_fields(curve, manifold).length


def arc_derivative(eta, curve: DiscreteCurve, manifold: WarpedProduct,
                   speed: np.ndarray | None = None) -> np.ndarray:
    """Arclength derivative T(eta) = eta'(u) / |gamma'(u)|."""
    if speed is None:
        speed = compute_fields(curve, manifold).speed
    return spectral.diff(np.asarray(eta, dtype=float), 1) / speed


def arc_laplacian(eta, curve: DiscreteCurve, manifold: WarpedProduct,
                  speed: np.ndarray | None = None) -> np.ndarray:
    """Curve Laplacian of eta: the arclength derivative applied twice."""
    if speed is None:
        speed = compute_fields(curve, manifold).speed
    inner = spectral.diff(np.asarray(eta, dtype=float), 1) / speed
    return spectral.diff(inner, 1) / speed


def graphicality(curve: DiscreteCurve, manifold: WarpedProduct):
    """(min Theta_hat, certified) where certified requires min Theta_hat > 0
    and a strictly monotone r-lift."""
    f = compute_fields(curve, manifold)
    min_that = float(f.theta_hat.min())
    r = curve.coords[:, 0]
    closure = r[0] + TWO_PI * curve.winding[0]
    increasing = bool(np.all(np.diff(np.append(r, closure)) > 0.0))
    return min_that, bool(min_that > 0.0 and increasing)


def resample(curve: DiscreteCurve, m_new: int) -> DiscreteCurve:
    """Trigonometric interpolation of a graph curve onto m_new nodes."""
    if curve.mode != GRAPH:
        raise ValueError("resample supports graph mode only")
    m_new = _validate_m(m_new)
    p_new = spectral.resample_periodic(curve.periodic_part(), m_new)
    u_new = spectral.nodes(m_new)
    coords = p_new + u_new[:, None] * np.asarray(curve.winding, dtype=float)
    return DiscreteCurve(GRAPH, coords, curve.winding)
