"""Exact primitives for the rotation group SO(3) and its Lie algebra so(3).

All functions are pure and operate on plain numpy arrays: vectors are
shape (3,), matrices shape (3, 3).  Conventions used throughout the
package are fixed here:

* ``hat(e3)`` carries +1 at entry (2, 1) (0-based: [1, 0]), i.e. the
  standard right-handed cross-product matrix, ``hat(v) @ w == cross(v, w)``.
* ``adstar(xi, mu) == cross(mu, xi)``, the sign that turns the reduced
  rigid-body equation into the classical Euler equation
  ``I dOmega/dt = (I Omega) x Omega``.  The free-spin conservation tests
  pin this choice.
"""

import math

import numpy as np

from .errors import DegenerateMatrixError, NotSkewError, SingularMetricError

_SMALL_ANGLE = 1e-8
_SKEW_TOL = 1e-12


def hat(v):
    """Map a 3-vector to its skew-symmetric (cross-product) matrix.

    Satisfies hat(v) @ w == np.cross(v, w) for any w.
    """
    x, y, z = v
    return np.array([[0.0, -z, y],
                     [z, 0.0, -x],
                     [-y, x, 0.0]])


def cross3(a, b):
    """Cross product of two 3-vectors.

    Same arithmetic as np.cross but without its axis bookkeeping, which
    dominates the integration hot path for single vectors.
    """
    a0, a1, a2 = a.tolist() if isinstance(a, np.ndarray) else \
        (float(a[0]), float(a[1]), float(a[2]))
    b0, b1, b2 = b.tolist() if isinstance(b, np.ndarray) else \
        (float(b[0]), float(b[1]), float(b[2]))
    return np.array([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])


def vee(m):
    """Inverse of ``hat``: extract the 3-vector from a skew matrix.

    Entries are read off directly, so ``vee(hat(v)) == v`` bit-exactly.

    Raises:
        NotSkewError: if ``m + m.T`` deviates from zero by more than 1e-12.
    """
    m = np.asarray(m, dtype=float)
    if np.abs(m + m.T).max() > _SKEW_TOL:
        raise NotSkewError(
            f"matrix is not skew-symmetric within {_SKEW_TOL:g}")
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def expm(v):
    """Exponential map so(3) -> SO(3) via the Rodrigues formula.

    A two-term Taylor branch below ||v|| < 1e-8 avoids the 0/0 in the
    Rodrigues coefficients.  Assembled entrywise (hat(v)^2 = v v^T - |v|^2)
    to keep the integration hot path cheap.
    """
    x, y, z = v.tolist() if isinstance(v, np.ndarray) else \
        (float(v[0]), float(v[1]), float(v[2]))
    theta2 = x * x + y * y + z * z
    theta = math.sqrt(theta2)
    if theta < _SMALL_ANGLE:
        a = 1.0 - theta2 / 6.0
        b = 0.5 - theta2 / 24.0
    else:
        a = math.sin(theta) / theta
        b = (1.0 - math.cos(theta)) / theta2
    d = 1.0 - b * theta2
    ax, ay, az = a * x, a * y, a * z
    bxy, byz, bxz = b * x * y, b * y * z, b * x * z
    return np.array([
        [d + b * x * x, bxy - az, bxz + ay],
        [bxy + az, d + b * y * y, byz - ax],
        [bxz - ay, byz + ax, d + b * z * z],
    ])


def logm(r):
    """Logarithm map SO(3) -> so(3), returned in vee form.

    The rotation angle comes from atan2 of the skew/symmetric parts, which
    stays well conditioned near 0 and near pi.  Output norm is <= pi.
    For angles at (or numerically indistinguishable from) pi the axis sign
    is arbitrary; either choice is a valid logarithm.
    """
    r = np.asarray(r, dtype=float)
    w = 0.5 * np.array([r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]])
    s = np.linalg.norm(w)                     # == sin(theta) for exact input
    c = 0.5 * (np.trace(r) - 1.0)             # == cos(theta)
    theta = np.arctan2(s, c)
    if s > 1e-6:
        return (theta / s) * w
    if c > 0.0:
        # Tiny rotation: w already equals sin(theta)*axis ~ theta*axis.
        return w * (1.0 + theta * theta / 6.0)
    # Angle near pi: recover the axis from the symmetric part,
    # n n^T = (sym(R) - cos(theta) I) / (1 - cos(theta)).
    nnt = (0.5 * (r + r.T) - c * np.eye(3)) / (1.0 - c)
    j = int(np.argmax(np.diag(nnt)))
    axis = nnt[:, j]
    axis = axis / np.linalg.norm(axis)
    if s > 0.0 and axis @ w < 0.0:
        axis = -axis
    return theta * axis


def project_so3(m):
    """Project a near-rotation matrix onto SO(3) (orthogonal polar factor).

    Used to repair orthogonality drift accumulated by the integrator.
    Idempotent on members of SO(3).

    Raises:
        DegenerateMatrixError: if a singular value falls below 1e-12 or the
            input has non-positive determinant.
    """
    u, sv, vt = np.linalg.svd(np.asarray(m, dtype=float))
    if sv[-1] < 1e-12:
        raise DegenerateMatrixError("matrix is numerically rank deficient")
    r = u @ vt
    if np.linalg.det(r) < 0.0:
        raise DegenerateMatrixError("input has negative determinant")
    return r


def adstar(xi, mu):
    """Coadjoint action ad*_xi mu on so(3)* ~ R^3.

    Sign convention: ad*_xi mu = mu x xi, so the forced Euler-Poincare
    equation reads I dOmega/dt = (I Omega) x Omega + torque.
    """
    return np.cross(mu, xi)


def connection_term(i_metric, a, b):
    """Levi-Civita connection of the left-invariant metric, trivialized.

    For the metric induced by an SPD tensor ``i_metric`` the connection on
    the algebra is

        nabla_a b = 1/2 ( [a, b] - I^{-1} ad*_a (I b) - I^{-1} ad*_b (I a) )

    so that geodesics satisfy the free rigid-body equation:
    ``connection_term(I, a, a) == -I^{-1}((I a) x a)``.

    Raises:
        SingularMetricError: if ``i_metric`` is not invertible.
    """
    i_metric = np.asarray(i_metric, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    bracket = np.cross(a, b)
    rhs = np.cross(i_metric @ b, a) + np.cross(i_metric @ a, b)
    try:
        corr = np.linalg.solve(i_metric, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularMetricError("metric tensor is singular") from exc
    return 0.5 * (bracket - corr)


def geodesic_distance(r1, r2):
    """Angle of the relative rotation between two attitudes, in [0, pi]."""
    return float(np.linalg.norm(logm(np.asarray(r1).T @ np.asarray(r2))))


def rotation_angle(r):
    """Rotation angle of a single matrix in [0, pi] (== ||logm(r)||)."""
    r = np.asarray(r, dtype=float)
    s = 0.5 * np.linalg.norm(
        [r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]])
    c = 0.5 * (np.trace(r) - 1.0)
    return float(np.arctan2(s, c))


def is_rotation(r, tol=1e-9):
    """True if ||R^T R - I||_F <= tol and det(R) > 0."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3):
        return False
    return (np.linalg.norm(r.T @ r - np.eye(3)) <= tol
            and np.linalg.det(r) > 0.0)
