"""Discretized action functionals on symmetric loops.

The configuration of the whole system is the orbit of one generating
particle under the symmetry group, so the action reduces to a functional of
a single closed path u: [0, T] -> R^3 sampled on a uniform grid.  The
discretization is the classic broken-line action: forward-difference
velocities and trapezoidal (here: uniform periodic) quadrature of the
potential.  Gradients are exact derivatives of the discrete functional,
which is what makes the quasi-Newton minimization in choreo.minimize
reliable.

Symmetry reductions (time-shift and reflection constraints on the loop)
are represented as finite groups of loop transformations; the reduction
projects onto the invariant subspace and restricts the variables to a
fundamental set of nodes.
"""

from dataclasses import dataclass

import numpy as np

REFLECT_X2 = np.diag([1.0, -1.0, 1.0])
REFLECT_X3 = np.diag([1.0, 1.0, -1.0])

_COLLISION_FLOOR = 1e-13


class CollisionError(ValueError):
    """A loop node sits on the collision set (or at the origin)."""

    def __init__(self, node, message=None):
        self.node = int(node)
        super().__init__(message or f"loop node {node} lies on the collision set")


def rescale_parameter(alpha):
    """Exponent beta with u = m0^beta * v balancing kinetic and central terms.

    beta = 1/(2 + alpha); valid for alpha in [1, 2).
    """
    if not 1.0 <= alpha < 2.0:
        raise ValueError("alpha must lie in [1, 2)")
    return 1.0 / (2.0 + alpha)


@dataclass(frozen=True)
class SymmetryReduction:
    """A finite group of loop transformations (g u)(t) = A u(sigma(t)).

    kind selects the constraint family:
      * "italian":           u(t + T/2) = -u(t)
      * "klein_reflections": u(t) = REFLECT_X3 u(-t) and
                             u(t) = REFLECT_X2 u(T/2 - t)
      * "extra":             u(t + T/M) = R u(t)  (matrix R of order M)

    The klein kind additionally pins u(0) to the plane {x3 = 0} and
    u(T/4) to {x2 = 0}; membership of the open quadrants there is a
    property of the homotopy class, monitored by the optimizer rather
    than enforced here.
    """

    kind: str
    matrix: np.ndarray = None
    M: int = None

    def __post_init__(self):
        if self.kind not in ("italian", "klein_reflections", "extra"):
            raise ValueError(f"unknown reduction kind {self.kind!r}")
        if self.kind == "extra":
            if self.matrix is None or self.M is None:
                raise ValueError("extra reduction needs a matrix and its order M")
            P = np.linalg.matrix_power(np.asarray(self.matrix, float), int(self.M))
            if not np.allclose(P, np.eye(3), atol=1e-9):
                raise ValueError("extra reduction matrix must have order M")

    def divisor(self):
        """The sample count must be divisible by this."""
        if self.kind == "italian":
            return 2
        if self.kind == "klein_reflections":
            return 4
        return int(self.M)

    def transforms(self, n):
        """The group as a list of (shift, flip, matrix) acting by
        (g u)_j = matrix @ u_{(flip*j + shift) mod n}."""
        if n % self.divisor() != 0:
            raise ValueError(
                f"sample count {n} not divisible by {self.divisor()} "
                f"as required by the {self.kind} reduction"
            )
        if self.kind == "italian":
            return [(0, 1, np.eye(3)), (n // 2, 1, -np.eye(3))]
        if self.kind == "klein_reflections":
            return [
                (0, 1, np.eye(3)),
                (0, -1, REFLECT_X3),
                (n // 2, -1, REFLECT_X2),
                (n // 2, 1, REFLECT_X2 @ REFLECT_X3),
            ]
        R = np.asarray(self.matrix, float)
        out = []
        step = n // int(self.M)
        A = np.eye(3)
        for k in range(int(self.M)):
            # invariance u_{j+step} = R u_j gives u_j = R^k u_{j - k*step}
            out.append(((n - k * step) % n, 1, A.copy()))
            A = R @ A
        return out

    def free_nodes(self, n):
        """Indices of the fundamental nodes parametrizing the reduced loop."""
        if self.kind == "italian":
            return np.arange(n // 2)
        if self.kind == "klein_reflections":
            return np.arange(n // 4 + 1)
        return np.arange(n // int(self.M))

    def node_images(self, n):
        """For each node i, a representation u_i = A @ z_rep with rep a free
        node.  Returns (rep, mats) with rep an int array of length n and
        mats an (n, 3, 3) array.  Boundary nodes fixed by part of the group
        get the average over their stabilizer, so the lift is total."""
        free = self.free_nodes(n)
        free_set = set(int(j) for j in free)
        rep = -np.ones(n, dtype=int)
        mats = np.zeros((n, 3, 3))
        counts = np.zeros(n, dtype=int)
        for shift, flip, A in self.transforms(n):
            # invariance u_j = A u_{sigma(j)} with sigma(j) = flip*j + shift
            # reads backwards as u_{sigma(j)} = A^T u_j on invariant loops.
            for j in free_set:
                i = (flip * j + shift) % n
                if rep[i] == -1 or rep[i] == j:
                    rep[i] = j
                    mats[i] += A.T
                    counts[i] += 1
        if np.any(rep < 0):
            raise ValueError("fundamental nodes do not cover the loop")
        mats /= counts[:, None, None]
        return rep, mats

    def lift(self, z, n):
        """Reconstruct the full loop from values at the free nodes."""
        rep, mats = self.node_images(n)
        z = np.asarray(z, float).reshape(len(self.free_nodes(n)), 3)
        pos = {int(j): k for k, j in enumerate(self.free_nodes(n))}
        out = np.empty((n, 3))
        for i in range(n):
            out[i] = mats[i] @ z[pos[rep[i]]]
        return out

    def restrict(self, points):
        """Values of a (symmetric) loop at the free nodes."""
        n = len(points)
        return np.asarray(points, float)[self.free_nodes(n)]

    def project(self, points):
        """Group-average: the closest invariant loop; idempotent."""
        pts = np.asarray(points, float)
        n = len(pts)
        acc = np.zeros_like(pts)
        trs = self.transforms(n)
        for shift, flip, A in trs:
            idx = (flip * np.arange(n) + shift) % n
            # (g u)_j = A u_idx(j); averaging over the group projects.
            acc += pts[idx] @ A.T
        return acc / len(trs)

    def violation(self, points):
        """Max node-wise constraint violation of the loop."""
        pts = np.asarray(points, float)
        return float(np.max(np.abs(pts - self.project(pts))))

    def reduce_gradient(self, grad, n):
        """Chain rule: gradient with respect to the free-node values."""
        rep, mats = self.node_images(n)
        free = self.free_nodes(n)
        pos = {int(j): k for k, j in enumerate(free)}
        out = np.zeros((len(free), 3))
        for i in range(n):
            out[pos[rep[i]]] += mats[i].T @ grad[i]
        return out


@dataclass(frozen=True)
class LoopPath:
    """A closed path sampled at t_j = j*T/n, j = 0..n-1 (node n wraps to 0).

    points: (n, 3) array of positions of the generating particle.
    period: T.
    reduction: the symmetry constraints the samples satisfy, if any.
    """

    points: np.ndarray
    period: float
    reduction: SymmetryReduction = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError("points must be an (n, 3) array")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        if self.period <= 0:
            raise ValueError("period must be positive")
        if self.reduction is not None:
            v = self.reduction.violation(pts)
            if v > 1e-12 * max(1.0, float(np.max(np.abs(pts)))):
                raise ValueError(
                    f"loop violates its symmetry reduction by {v:.3e}"
                )

    @property
    def n(self):
        return len(self.points)

    @property
    def times(self):
        return np.arange(self.n) * (self.period / self.n)

    def with_points(self, points):
        return LoopPath(points=points, period=self.period, reduction=self.reduction)


def apply_symmetry_reduction(loop, reduction):
    """Replace the loop by its exact symmetrization under the reduction."""
    pts = reduction.project(loop.points if isinstance(loop, LoopPath) else loop)
    period = loop.period if isinstance(loop, LoopPath) else None
    if period is None:
        return pts
    return LoopPath(points=pts, period=period, reduction=reduction)


@dataclass(frozen=True)
class ActionBreakdown:
    """Action split into kinetic, central-mass and satellite-satellite parts."""

    kinetic: float
    central: float
    mutual: float

    @property
    def total(self):
        return self.kinetic + self.central + self.mutual

    def __float__(self):
        return self.total


def _difference_matrices(group):
    """The matrices R - I for the non-identity group elements."""
    out = []
    for R in group:
        if np.allclose(R, np.eye(3), atol=1e-9):
            continue
        out.append(np.asarray(R, float) - np.eye(3))
    return out


def _check_nodes(pts, bmats, need_origin):
    """Raise CollisionError at the first node on the collision set."""
    if need_origin:
        r = np.linalg.norm(pts, axis=1)
        bad = np.nonzero(r < _COLLISION_FLOOR)[0]
        if len(bad):
            raise CollisionError(bad[0], f"loop node {bad[0]} is at the origin")
    for B in bmats:
        d = np.linalg.norm(pts @ B.T, axis=1)
        bad = np.nonzero(d < _COLLISION_FLOOR)[0]
        if len(bad):
            raise CollisionError(bad[0])


def _kinetic(pts, period, factor):
    n = len(pts)
    h = period / n
    diff = np.roll(pts, -1, axis=0) - pts
    return factor * float(np.sum(diff * diff)) / (2.0 * h)


def action(loop, cone):
    """Action of the symmetric constellation generated by the loop.

    N * integral of |u'|^2/2 + m0/|u|^alpha + (1/2) sum_{R != I}
    |(R - I)u|^(-alpha), with N the group order.  Forward-difference
    velocities, uniform quadrature of the potential.  Raises
    CollisionError when a node sits on the collision set.
    """
    pts = np.asarray(loop.points, float)
    n = len(pts)
    h = loop.period / n
    alpha = cone.alpha
    m0 = cone.central_mass
    N = cone.group.order
    bmats = _difference_matrices(cone.group)
    _check_nodes(pts, bmats, need_origin=True)

    kinetic = _kinetic(pts, loop.period, N)
    r = np.linalg.norm(pts, axis=1)
    central = N * h * m0 * float(np.sum(r ** (-alpha)))
    mutual = 0.0
    for B in bmats:
        d = np.linalg.norm(pts @ B.T, axis=1)
        mutual += float(np.sum(d ** (-alpha)))
    mutual *= N * h * 0.5
    return ActionBreakdown(kinetic=kinetic, central=central, mutual=mutual)


def rescaled_action_eps(loop, cone, epsilon):
    """Action of the rescaled problem: |v'|^2/2 + |v|^(-alpha) + (eps/2) sum.

    No N factor and unit central mass: the physical action is
    N * m0^(2/(2+alpha)) times this value at eps = 1/m0.  At eps = 0 the
    mutual part is dropped entirely (pure central problem).
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    pts = np.asarray(loop.points, float)
    n = len(pts)
    h = loop.period / n
    alpha = cone.alpha
    bmats = _difference_matrices(cone.group) if epsilon > 0 else []
    _check_nodes(pts, bmats, need_origin=True)

    kinetic = _kinetic(pts, loop.period, 1.0)
    r = np.linalg.norm(pts, axis=1)
    central = h * float(np.sum(r ** (-alpha)))
    mutual = 0.0
    for B in bmats:
        d = np.linalg.norm(pts @ B.T, axis=1)
        mutual += float(np.sum(d ** (-alpha)))
    mutual *= epsilon * h * 0.5
    return ActionBreakdown(kinetic=kinetic, central=central, mutual=mutual)


def _full_gradient(pts, period, alpha, m0_coeff, mutual_coeff, prefactor, bmats):
    """Gradient of prefactor * sum_j h*(m0_coeff/|u|^a + mutual_coeff/2 *
    sum_B |Bu|^-a) plus the kinetic part, with respect to all nodes."""
    n = len(pts)
    h = period / n
    grad = prefactor / h * (2.0 * pts - np.roll(pts, -1, axis=0) - np.roll(pts, 1, axis=0))
    if m0_coeff != 0.0:
        r = np.linalg.norm(pts, axis=1)
        grad += (-prefactor * h * alpha * m0_coeff) * pts / (r ** (alpha + 2.0))[:, None]
    if mutual_coeff != 0.0:
        for B in bmats:
            w = pts @ B.T
            d = np.linalg.norm(w, axis=1)
            grad += (-prefactor * h * alpha * mutual_coeff / 2.0) * (
                w / (d ** (alpha + 2.0))[:, None]
            ) @ B
    return grad


def gradient(loop, cone, epsilon=None):
    """Exact gradient of the discretized action.

    With epsilon None this is the physical action; otherwise the rescaled
    functional at that epsilon.  If the loop carries a reduction the
    result is the chain-rule gradient with respect to the free nodes
    (shape (n_free, 3)); otherwise shape (n, 3).
    """
    pts = np.asarray(loop.points, float)
    alpha = cone.alpha
    if epsilon is None:
        bmats = _difference_matrices(cone.group)
        _check_nodes(pts, bmats, need_origin=True)
        grad = _full_gradient(
            pts, loop.period, alpha, cone.central_mass, 1.0, cone.group.order, bmats
        )
    else:
        bmats = _difference_matrices(cone.group) if epsilon > 0 else []
        _check_nodes(pts, bmats, need_origin=True)
        grad = _full_gradient(pts, loop.period, alpha, 1.0, epsilon, 1.0, bmats)
    if loop.reduction is None:
        return grad
    return loop.reduction.reduce_gradient(grad, len(pts))


def second_variation_vertical(m0, T):
    """Second variation of the action at the circular square solution along
    the vertical perturbation w = cos(w t) e3.

    Closed form (omega = 2 pi / T):
        (omega^2 T / 2) * (1 - (sqrt(2) + m0) / (1/sqrt(2) + 1/4 + m0))
    Strictly negative for every m0 >= 0: the planar solution is never a
    local minimizer against vertical perturbations.
    """
    if m0 < 0 or T <= 0:
        raise ValueError("need m0 >= 0 and T > 0")
    omega = 2.0 * np.pi / T
    ratio = (np.sqrt(2.0) + m0) / (1.0 / np.sqrt(2.0) + 0.25 + m0)
    return 0.5 * omega**2 * T * (1.0 - ratio)


def loop_to_csv(loop, path):
    """Write the generating particle as CSV with header t,x,y,z."""
    t = loop.times
    with open(path, "w") as fh:
        fh.write("t,x,y,z\n")
        for j in range(loop.n):
            x, y, z = loop.points[j]
            fh.write(f"{t[j]:.17g},{x:.17g},{y:.17g},{z:.17g}\n")


def constellation_to_csv(loop, group, path):
    """Write all bodies as CSV with header t,body,x,y,z.

    Body 0 is the central mass at the origin; bodies 1..N are the group
    images of the generating particle in the group's element order.
    """
    t = loop.times
    with open(path, "w") as fh:
        fh.write("t,body,x,y,z\n")
        for j in range(loop.n):
            fh.write(f"{t[j]:.17g},0,0,0,0\n")
            for b, R in enumerate(group, start=1):
                x, y, z = R @ loop.points[j]
                fh.write(f"{t[j]:.17g},{b},{x:.17g},{y:.17g},{z:.17g}\n")


def discrete_energy(loop, cone):
    """Node-wise first integral |u'|^2/2 - m0/|u|^a - (1/2) sum |Bu|^-a.

    Velocities are centered differences, so the drift of this quantity is
    O(1/n^2) on converged minimizers; used as a solution diagnostic.
    """
    pts = np.asarray(loop.points, float)
    n = len(pts)
    h = loop.period / n
    vel = (np.roll(pts, -1, axis=0) - np.roll(pts, 1, axis=0)) / (2.0 * h)
    kin = 0.5 * np.sum(vel * vel, axis=1)
    r = np.linalg.norm(pts, axis=1)
    pot = cone.central_mass * r ** (-cone.alpha)
    for B in _difference_matrices(cone.group):
        d = np.linalg.norm(pts @ B.T, axis=1)
        pot = pot + 0.5 * d ** (-cone.alpha)
    return kin - pot
