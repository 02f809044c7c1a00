"""Distribution kernels: multivariate gamma, Wishart, matrix Beta type II.

Degrees-of-freedom convention
-----------------------------
All laws in this package are laws of Gram matrices ``G^H G`` of complex
Gaussian matrices with ``dof/2`` rows, and the stored ``dof`` counts *real*
degrees of freedom (two per complex sample).  Consequences:

* :func:`wishart_sample` draws ``dof/2`` complex Gaussian rows, so the
  sample mean is ``dof * scale / 2``.
* The scalar reduction used for CDF work (:class:`ScalarLaw` with kind
  ``"gamma_of_wishart"``) is a gamma distribution with shape ``dof / 2``
  and the Wishart scale, consistent with the sampler.
* :func:`wishart_logpdf` evaluates the real-form density with exponent
  ``(dof - dim - 1) / 2`` and normalizer ``2^{dof*dim/2} Gamma_dim(dof/2)
  det(scale)^{dof/2}``.  In one dimension this density has its mode at
  ``(dof - 2) * scale`` and unit total mass; it is the density of
  ``scale * chi^2_dof``, which carries a factor two in scale relative to
  the complex-Gram convention above.  Both conventions are exposed on
  purpose; each is internally validated by its own tests.

A non-central variant (rank-one mean offsets entering through a
non-centrality matrix) is deliberately not implemented: nothing downstream
consumes it.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import special

from . import linalg

__all__ = [
    "log_multivariate_gamma",
    "WishartParams",
    "wishart_logpdf",
    "wishart_sample",
    "BetaIIParams",
    "beta2_logpdf",
    "ScalarLaw",
    "gamma_law_from_wishart",
    "beta_prime_law",
]


def log_multivariate_gamma(p, x):
    """Log of the multivariate gamma function.

    ``Gamma_p(x) = pi^{p(p-1)/4} prod_{i=1..p} Gamma(x - (i-1)/2)``

    Parameters
    ----------
    p : int
        Dimension of the integration space, ``p >= 1``.
    x : float
        Argument; must satisfy ``x > (p - 1) / 2`` (otherwise a pole of
        one of the scalar gamma factors is hit).

    Returns
    -------
    float
        ``log Gamma_p(x)``, always finite on the valid domain.
    """
    p = int(p)
    if p < 1:
        raise ValueError(f"dimension p must be >= 1, got {p}")
    x = float(x)
    if x <= (p - 1) / 2.0:
        raise ValueError(
            f"log_multivariate_gamma pole: need x > (p-1)/2 = {(p - 1) / 2}, got {x}"
        )
    i = np.arange(p)
    return float(p * (p - 1) / 4.0 * np.log(np.pi) + special.gammaln(x - i / 2.0).sum())


@dataclass(frozen=True)
class WishartParams:
    """Parameters of a central Wishart law.

    Attributes
    ----------
    dim : int
        Matrix dimension ``p``.
    dof : float
        Real degrees of freedom ``n``; the pdf exists for ``n > p - 1``.
    scale : numpy.ndarray
        ``p x p`` Hermitian PSD scale matrix.
    """

    dim: int
    dof: float
    scale: np.ndarray = field(repr=False)

    def __post_init__(self):
        scale = np.asarray(self.scale, dtype=np.complex128)
        if scale.shape != (self.dim, self.dim):
            raise ValueError(
                f"scale shape {scale.shape} does not match dim {self.dim}"
            )
        if self.dof <= self.dim - 1:
            raise ValueError(
                f"dof must exceed dim - 1 = {self.dim - 1}, got {self.dof}"
            )
        if not linalg.is_hermitian(scale):
            raise ValueError("scale must be Hermitian")
        w = np.linalg.eigvalsh(scale)
        if w.size and w[0] < -linalg.HERM_TOL * max(1.0, float(w[-1])):
            raise ValueError("scale must be PSD")
        object.__setattr__(self, "scale", scale)

    def scalar_scale(self):
        """The (real) scale entry; defined only for dim == 1."""
        if self.dim != 1:
            raise ValueError("scalar_scale is only defined for dim == 1")
        return float(self.scale[0, 0].real)


def wishart_logpdf(x, params):
    """Log-density of the real-form Wishart law at a Hermitian PD point.

    ``log f(x) = (n-p-1)/2 log det(x) - tr(scale^{-1} x)/2
    - [np/2 log 2 + log Gamma_p(n/2) + n/2 log det(scale)]``

    Raises
    ------
    ValueError
        If ``x`` is not Hermitian positive definite, the dimensions do not
        match, the dof is at or below the existence threshold, or the
        scale is singular.
    """
    x = np.asarray(x, dtype=np.complex128)
    p, n = params.dim, float(params.dof)
    if x.shape != (p, p):
        raise ValueError(f"x shape {x.shape} does not match dim {p}")
    if not linalg.is_hermitian(x):
        raise ValueError("x must be Hermitian")
    wx = np.linalg.eigvalsh(x)
    if wx[0] <= 0.0:
        raise ValueError("x must be positive definite")
    logdet_x = float(np.sum(np.log(wx)))
    logdet_s = linalg.logdet_hermitian_psd(params.scale)
    if not np.isfinite(logdet_s):
        raise ValueError("scale must be positive definite for pdf evaluation")
    quad = float(np.trace(np.linalg.solve(params.scale, x)).real)
    log_norm = (
        0.5 * n * p * np.log(2.0)
        + log_multivariate_gamma(p, n / 2.0)
        + 0.5 * n * logdet_s
    )
    return 0.5 * (n - p - 1.0) * logdet_x - 0.5 * quad - log_norm


def wishart_sample(params, rng, size=None):
    """Draw Wishart samples as complex Grams ``S G^H G S``.

    ``G`` has ``dof/2`` rows of unit-variance circular complex Gaussians
    and ``S`` is the Hermitian square root of the scale, so the sample
    mean is ``dof * scale / 2``.  A zero scale returns zero matrices.

    Parameters
    ----------
    params : WishartParams
        ``dof`` must be an even integer (complex Gram construction).
    rng : numpy.random.Generator
    size : int, optional
        Number of samples; default one sample (2-D array).

    Returns
    -------
    numpy.ndarray
        ``(dim, dim)`` if ``size`` is None, else ``(size, dim, dim)``;
        Hermitian PSD throughout.
    """
    p = params.dim
    n = params.dof
    m = int(round(n / 2.0))
    if abs(n - 2 * m) > 1e-9 or m < 1:
        raise ValueError(
            f"complex Gram sampling needs an even integer dof >= 2, got {n}"
        )
    squeeze = size is None
    k = 1 if squeeze else int(size)
    s = linalg.psd_sqrt(params.scale)
    g = (
        rng.standard_normal((k, m, p)) + 1j * rng.standard_normal((k, m, p))
    ) / np.sqrt(2.0)
    gram = np.einsum("kmi,kmj->kij", g.conj(), g)
    out = s @ gram @ s
    out = 0.5 * (out + np.conj(np.swapaxes(out, -1, -2)))
    return out[0] if squeeze else out


@dataclass(frozen=True)
class BetaIIParams:
    """Parameters (N1, N2) of a matrix-variate Beta type II law.

    The density is normalizable when both parameters exceed
    ``(dim - 1) / 2``; invalid parameters are representable (the fit may
    be queried outside its validity region) but pdf evaluation refuses
    them.
    """

    n1: float
    n2: float
    dim: int

    @property
    def is_normalizable(self):
        bound = (self.dim - 1) / 2.0
        return self.n1 > bound and self.n2 > bound


def beta2_logpdf(x, params):
    """Log-density of the matrix-variate Beta type II law.

    ``log f(x) = (2 N1 - p - 1)/2 log det(x) - (N1 + N2) log det(I + x)
    - log beta_p(N1, N2)`` with
    ``beta_p(N1, N2) = Gamma_p(N1) Gamma_p(N2) / Gamma_p(N1 + N2)``.

    For ``dim == 1`` this is the scalar beta-prime density.
    """
    if not params.is_normalizable:
        raise ValueError(
            f"non-normalizable Beta II parameters (N1={params.n1}, N2={params.n2}, "
            f"dim={params.dim})"
        )
    p = params.dim
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (p, p):
        raise ValueError(f"x shape {x.shape} does not match dim {p}")
    if not linalg.is_hermitian(x):
        raise ValueError("x must be Hermitian")
    wx = np.linalg.eigvalsh(x)
    if wx[0] <= 0.0:
        raise ValueError("x must be positive definite")
    logdet_x = float(np.sum(np.log(wx)))
    logdet_ix = float(np.sum(np.log1p(wx)))
    log_beta = (
        log_multivariate_gamma(p, params.n1)
        + log_multivariate_gamma(p, params.n2)
        - log_multivariate_gamma(p, params.n1 + params.n2)
    )
    return (
        0.5 * (2.0 * params.n1 - p - 1.0) * logdet_x
        - (params.n1 + params.n2) * logdet_ix
        - log_beta
    )


@dataclass(frozen=True)
class ScalarLaw:
    """Scalar reduction of the matrix laws, used for CDF-level comparisons.

    kind = "gamma_of_wishart": gamma with ``shape = dof/2`` and the Wishart
    scale (params ``(shape, scale)``), matching :func:`wishart_sample`.

    kind = "beta_prime": beta prime with params ``(n1, n2)``; the scalar
    case of the Beta type II law.
    """

    kind: str
    params: tuple

    def __post_init__(self):
        if self.kind not in ("gamma_of_wishart", "beta_prime"):
            raise ValueError(f"unknown scalar law kind: {self.kind!r}")
        a, b = self.params
        if not (a > 0 and b > 0):
            raise ValueError(f"invalid {self.kind} parameters {self.params}")

    def cdf(self, x):
        """CDF at ``x`` (vectorized); 0 below the origin."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x, dtype=float)
        pos = x > 0
        if self.kind == "gamma_of_wishart":
            shape, scale = self.params
            out[pos] = special.gammainc(shape, x[pos] / scale)
        else:
            n1, n2 = self.params
            out[pos] = special.betainc(n1, n2, x[pos] / (1.0 + x[pos]))
        return out if out.ndim else float(out)

    def pdf(self, x):
        """Density at ``x`` (vectorized); 0 outside the support."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x, dtype=float)
        pos = x > 0
        xp = x[pos]
        if self.kind == "gamma_of_wishart":
            shape, scale = self.params
            out[pos] = np.exp(
                (shape - 1.0) * np.log(xp)
                - xp / scale
                - special.gammaln(shape)
                - shape * np.log(scale)
            )
        else:
            n1, n2 = self.params
            out[pos] = np.exp(
                (n1 - 1.0) * np.log(xp)
                - (n1 + n2) * np.log1p(xp)
                - special.betaln(n1, n2)
            )
        return out if out.ndim else float(out)

    def mean(self):
        """(mean, None) or (None, reason) when the moment does not exist."""
        if self.kind == "gamma_of_wishart":
            shape, scale = self.params
            return shape * scale, None
        n1, n2 = self.params
        if n2 <= 1.0:
            return None, f"beta_prime mean undefined for N2 <= 1 (N2={n2})"
        return n1 / (n2 - 1.0), None

    def var(self):
        """(variance, None) or (None, reason) when the moment does not exist."""
        if self.kind == "gamma_of_wishart":
            shape, scale = self.params
            return shape * scale**2, None
        n1, n2 = self.params
        if n2 <= 2.0:
            return None, f"beta_prime variance undefined for N2 <= 2 (N2={n2})"
        return n1 * (n1 + n2 - 1.0) / ((n2 - 2.0) * (n2 - 1.0) ** 2), None

    def median(self):
        if self.kind == "gamma_of_wishart":
            shape, scale = self.params
            return float(special.gammaincinv(shape, 0.5) * scale)
        n1, n2 = self.params
        t = float(special.betaincinv(n1, n2, 0.5))
        return t / (1.0 - t)

    def sample(self, rng, size):
        """Draw ``size`` iid samples (gamma directly, beta prime as a gamma ratio)."""
        if self.kind == "gamma_of_wishart":
            shape, scale = self.params
            return rng.gamma(shape, scale, size)
        n1, n2 = self.params
        return rng.gamma(n1, 1.0, size) / rng.gamma(n2, 1.0, size)


def gamma_law_from_wishart(params):
    """Scalar law of a dim-1 Wishart, consistent with :func:`wishart_sample`."""
    if params.dim != 1:
        raise ValueError("scalar reduction requires dim == 1 Wishart parameters")
    return ScalarLaw("gamma_of_wishart", (params.dof / 2.0, params.scalar_scale()))


def beta_prime_law(params):
    """Scalar law of a dim-1 Beta type II."""
    if params.dim != 1:
        raise ValueError("scalar reduction requires dim == 1 Beta II parameters")
    if not params.is_normalizable:
        raise ValueError("non-normalizable Beta II parameters")
    return ScalarLaw("beta_prime", (params.n1, params.n2))
