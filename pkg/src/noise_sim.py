"""Spectral synthesis of long-range correlated Gaussian noise and law-level estimators.

Fields live on a periodic lattice of shape grid_t x grid_x^dsim. The noise has
spectral density rho_hat(q) |q|_p^{-2s} with the parabolic magnitude
|q|_p = (q_0^2 + |q_sp|^4)^{1/4}; the zero mode is removed so every field is
exactly centred. dsim is independent of the algebraic dimension d.
"""

import logging
import math
import os
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp

from src.appell import AppellSequence, MomentSequence, hermite
from src.config import DEFAULT_SIM_CONFIG, DEFAULT_SIM_RUN, MOMENT_MAX_DENOMINATOR
from src.errors import ValidationError
from src.utils import format_rational, parse_rational, seed_override

logger = logging.getLogger(__name__)

REPORT_NOTE = ("dsim is the dimension of the simulation lattice and is independent of the "
               "algebraic dimension d: the law identities tested here do not depend on it")


@dataclass(frozen=True)
class SimConfig:
    dsim: int = DEFAULT_SIM_CONFIG['dsim']
    s: float = DEFAULT_SIM_CONFIG['s']
    grid_t: int = DEFAULT_SIM_CONFIG['grid_t']
    grid_x: int = DEFAULT_SIM_CONFIG['grid_x']
    dt: float = DEFAULT_SIM_CONFIG['dt']
    dx: float = DEFAULT_SIM_CONFIG['dx']
    cutoff_rho: float = DEFAULT_SIM_CONFIG['cutoff_rho']
    seed: int = DEFAULT_SIM_CONFIG['seed']

    def __post_init__(self):
        if not isinstance(self.dsim, int) or not 1 <= self.dsim <= 3:
            raise ValidationError(f"config.dsim must be 1, 2 or 3, got {self.dsim!r}")
        if not 0 < self.s < (self.dsim + 2) / 2:
            raise ValidationError(f"config.s must satisfy 0 < s < (dsim+2)/2, got {self.s}")
        for name in ('grid_t', 'grid_x'):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 2 or value % 2:
                raise ValidationError(f"config.{name} must be an even integer >= 2, got {value!r}")
        for name in ('dt', 'dx'):
            if not getattr(self, name) > 0:
                raise ValidationError(f"config.{name} must be positive")
        if self.cutoff_rho < 0:
            raise ValidationError("config.cutoff_rho must be nonnegative")

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.grid_t,) + (self.grid_x,) * self.dsim

    @classmethod
    def from_dict(cls, payload: Optional[dict] = None) -> 'SimConfig':
        """Merge over the defaults; MIRS_SEED overrides the seed."""
        merged = dict(DEFAULT_SIM_CONFIG)
        merged.update(payload or {})
        merged["seed"] = seed_override(merged["seed"])
        return cls(**merged)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RunSettings:
    n_seeds: int = DEFAULT_SIM_RUN['n_seeds']
    moment_order: int = DEFAULT_SIM_RUN['moment_order']
    block_count: int = DEFAULT_SIM_RUN['block_count']
    eps_list: Tuple[Fraction, ...] = tuple(Fraction(e) for e in DEFAULT_SIM_RUN['eps_list'])
    alpha: Fraction = Fraction(DEFAULT_SIM_RUN['alpha'])
    centredness_orders: Tuple[int, ...] = tuple(DEFAULT_SIM_RUN['centredness_orders'])
    hermite_max_degree: int = DEFAULT_SIM_RUN['hermite_max_degree']
    bootstrap_replicates: int = DEFAULT_SIM_RUN['bootstrap_replicates']
    slope_bins: int = DEFAULT_SIM_RUN['slope_bins']
    slope_min_rho_hat: float = DEFAULT_SIM_RUN['slope_min_rho_hat']

    def __post_init__(self):
        if self.n_seeds < 2:
            raise ValidationError("run.n_seeds must be >= 2 (split samples)")
        if not 1 <= self.moment_order <= 8:
            raise ValidationError("run.moment_order must be between 1 and 8")
        if max(self.centredness_orders, default=0) > self.moment_order \
                or self.hermite_max_degree > self.moment_order:
            raise ValidationError("run: polynomial degrees cannot exceed moment_order")

    @classmethod
    def from_dict(cls, payload: Optional[dict] = None) -> 'RunSettings':
        merged = dict(DEFAULT_SIM_RUN)
        merged.update(payload or {})
        merged['eps_list'] = tuple(parse_rational(e, "run.eps_list") for e in merged['eps_list'])
        merged['alpha'] = parse_rational(merged['alpha'], "run.alpha")
        merged['centredness_orders'] = tuple(merged['centredness_orders'])
        return cls(**merged)

    def to_dict(self) -> dict:
        out = asdict(self)
        out['eps_list'] = [format_rational(e) for e in self.eps_list]
        out['alpha'] = format_rational(self.alpha)
        out['centredness_orders'] = list(self.centredness_orders)
        return out


@dataclass
class LatticeField:
    values: np.ndarray
    config: SimConfig
    tag: str = "zeta"
    seed: Optional[int] = None

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise ValidationError(f"{self.tag} field has non-finite values")

    @property
    def mean(self) -> float:
        return float(self.values.mean())


FieldSource = Union[LatticeField, Sequence[LatticeField]]


# ---------------------------------------------------------------------------
# Synthesis
# ---------------------------------------------------------------------------

def frequency_grids(cfg: SimConfig) -> Tuple[np.ndarray, np.ndarray]:
    """(q_0, |q_sp|^2) on the FFT grid, broadcast to the field shape."""
    q0 = 2 * np.pi * np.fft.fftfreq(cfg.grid_t, d=cfg.dt)
    qx = 2 * np.pi * np.fft.fftfreq(cfg.grid_x, d=cfg.dx)
    axes = np.meshgrid(q0, *([qx] * cfg.dsim), indexing='ij')
    q_sp2 = sum(a ** 2 for a in axes[1:])
    return axes[0], q_sp2


def parabolic_magnitude(cfg: SimConfig) -> np.ndarray:
    q0, q_sp2 = frequency_grids(cfg)
    return (q0 ** 2 + q_sp2 ** 2) ** 0.25


def mollifier(cfg: SimConfig) -> np.ndarray:
    return np.exp(-(cfg.cutoff_rho * parabolic_magnitude(cfg)) ** 2)


def spectral_density(cfg: SimConfig) -> np.ndarray:
    """rho_hat(q) |q|_p^{-2s}, zero at q = 0."""
    qp = parabolic_magnitude(cfg)
    density = np.zeros_like(qp)
    nonzero = qp > 0
    density[nonzero] = mollifier(cfg)[nonzero] * qp[nonzero] ** (-2 * cfg.s)
    return density


def synthesize_noise(cfg: SimConfig, seed: Optional[int] = None) -> LatticeField:
    """Unit-variance Gaussian field with the configured spectral density.

    White noise is filtered by sqrt(S / mean(S)); since S(q) = S(-q) the
    filtered transform stays Hermitian and the field is real.
    """
    seed = cfg.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    white = rng.standard_normal(cfg.shape)
    density = spectral_density(cfg)
    amplitude = np.sqrt(density / density.mean())
    values = np.fft.ifftn(np.fft.fftn(white) * amplitude).real
    logger.debug(f"synthesize_noise(seed={seed}): shape={cfg.shape}, var={values.var():.4f}")
    return LatticeField(values, cfg, "zeta", seed)


def solve_linear(zeta: LatticeField) -> LatticeField:
    """Stationary periodic solution of (d_0 - Laplace) Z = zeta: Z_hat = zeta_hat / (i q_0 + |q_sp|^2)."""
    q0, q_sp2 = frequency_grids(zeta.config)
    symbol = 1j * q0 + q_sp2
    transform = np.fft.fftn(zeta.values)
    out = np.zeros_like(transform)
    nonzero = symbol != 0
    out[nonzero] = transform[nonzero] / symbol[nonzero]
    return LatticeField(np.fft.ifftn(out).real, zeta.config, "Z", zeta.seed)


def expected_variance(cfg: SimConfig) -> float:
    """Exact per-site Var(Z) of the lattice pipeline: mean of (S / mean S) / |i q_0 + |q_sp|^2|^2, zero mode as 0."""
    q0, q_sp2 = frequency_grids(cfg)
    symbol2 = q0 ** 2 + q_sp2 ** 2
    density = spectral_density(cfg)
    weights = np.zeros_like(density)
    nonzero = symbol2 > 0
    weights[nonzero] = density[nonzero] / density.mean() / symbol2[nonzero]
    return float(weights.mean())


# ---------------------------------------------------------------------------
# Block statistics
# ---------------------------------------------------------------------------

def _blocks(source: FieldSource, block_count: int) -> List[np.ndarray]:
    """One block per field for an ensemble, otherwise time slabs of a single field."""
    if isinstance(source, LatticeField):
        if block_count < 2:
            raise ValidationError("block_count must be >= 2 for error bars")
        return [b.ravel() for b in np.array_split(source.values, block_count, axis=0)]
    fields = list(source)
    if len(fields) < 2:
        raise ValidationError("an ensemble needs at least two fields")
    return [f.values.ravel() for f in fields]


def _block_power_means(blocks: List[np.ndarray], K: int) -> Tuple[np.ndarray, np.ndarray]:
    sizes = np.array([b.size for b in blocks], dtype=float)
    powers = np.empty((len(blocks), K + 1))
    for i, b in enumerate(blocks):
        acc = np.ones_like(b)
        for j in range(K + 1):
            powers[i, j] = acc.mean()
            acc = acc * b
    return powers, sizes


def _pooled(powers: np.ndarray, sizes: np.ndarray, idx: Optional[np.ndarray] = None) -> np.ndarray:
    """Size-weighted mean of block power means; idx has shape (replicates, blocks)."""
    if idx is None:
        return (sizes[:, None] * powers).sum(axis=0) / sizes.sum()
    w = sizes[idx]
    return (w[..., None] * powers[idx]).sum(axis=1) / w.sum(axis=1)[:, None]


def _round_moments(values: np.ndarray) -> MomentSequence:
    exact = [Fraction(1)]
    exact.extend(Fraction(float(v)).limit_denominator(MOMENT_MAX_DENOMINATOR) for v in values[1:])
    return MomentSequence(tuple(exact))


@dataclass
class MomentEstimate:
    values: np.ndarray
    stderr: np.ndarray
    block_count: int

    def to_moment_sequence(self) -> MomentSequence:
        """Rounded to rationals with bounded denominator for the exact pipeline."""
        return _round_moments(self.values)

    def to_dict(self) -> List[dict]:
        return [{'j': j, 'value': float(v), 'stderr': float(e)}
                for j, (v, e) in enumerate(zip(self.values, self.stderr))]


def estimate_moments(source: FieldSource, K: int, block_count: int = DEFAULT_SIM_RUN['block_count'],
                     replicates: int = DEFAULT_SIM_RUN['bootstrap_replicates'],
                     seed: int = 0) -> MomentEstimate:
    """m_j = E[Z^j] for j <= K with block-bootstrap standard errors."""
    if not 1 <= K <= 8:
        raise ValidationError(f"moment order must be between 1 and 8, got {K}")
    powers, sizes = _block_power_means(_blocks(source, block_count), K)
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, len(sizes), size=(replicates, len(sizes)))
    boot = _pooled(powers, sizes, idx)
    return MomentEstimate(_pooled(powers, sizes), boot.std(axis=0, ddof=1), len(sizes))


def _appell_coefficients(moments: np.ndarray, k: int) -> np.ndarray:
    """Float Appell coefficients for each row of moments (rows x (K+1)); returns rows x (k+1)."""
    moments = np.atleast_2d(moments)
    r = np.zeros((moments.shape[0], k + 1))
    r[:, 0] = 1.0
    for n in range(1, k + 1):
        r[:, n] = -sum(math.comb(n, i) * moments[:, i] * r[:, n - i] for i in range(1, n + 1))
    return np.stack([math.comb(k, j) * r[:, k - j] for j in range(k + 1)], axis=1)


def _hermite_coefficients(sigma2: np.ndarray, k: int) -> np.ndarray:
    sigma2 = np.atleast_1d(sigma2)
    prev = np.zeros((sigma2.size, k + 1))
    prev[:, 0] = 1.0
    if k == 0:
        return prev
    cur = np.zeros((sigma2.size, k + 1))
    cur[:, 1] = 1.0
    for n in range(1, k):
        nxt = np.zeros_like(cur)
        nxt[:, 1:] = cur[:, :-1]
        nxt -= n * sigma2[:, None] * prev
        prev, cur = cur, nxt
    return cur


def centredness_test(sample_a: FieldSource, sample_b: Optional[FieldSource], k: int,
                     block_count: int = DEFAULT_SIM_RUN['block_count'],
                     replicates: int = DEFAULT_SIM_RUN['bootstrap_replicates'],
                     seed: int = 0) -> dict:
    """z-score of mean W_k over sample_b, with W_k built from the moments of sample_a.

    Passing sample_b=None reuses sample_a, the tautological control whose mean
    cancels up to rounding.
    """
    same = sample_b is None
    sample_b = sample_a if same else sample_b
    powers_a, sizes_a = _block_power_means(_blocks(sample_a, block_count), k)
    powers_b, sizes_b = _block_power_means(_blocks(sample_b, block_count), k)

    moments = _round_moments(_pooled(powers_a, sizes_a))
    w = AppellSequence(moments, k).polynomial(k)
    coeffs = np.array([float(c) for c in w.coefficients])
    mean = float(coeffs @ _pooled(powers_b, sizes_b))

    rng = np.random.default_rng(seed)
    idx_a = rng.integers(0, len(sizes_a), size=(replicates, len(sizes_a)))
    idx_b = idx_a if same else rng.integers(0, len(sizes_b), size=(replicates, len(sizes_b)))
    boot_coeffs = _appell_coefficients(_pooled(powers_a, sizes_a, idx_a), k)
    boot_means = (boot_coeffs * _pooled(powers_b, sizes_b, idx_b)).sum(axis=1)
    stderr = float(boot_means.std(ddof=1))
    z = mean / stderr if stderr > 0 else 0.0
    return {'k': k, 'mean': mean, 'stderr': stderr, 'z': z, 'sameSample': same}


def variance_scaling(fields: Sequence[LatticeField], alpha, eps_list: Sequence) -> List[dict]:
    """Var(Z_eps)/Var(Z) per eps, with Z_eps(x) = eps^alpha Z(x_0/eps^2, x_sp/eps).

    On the lattice Z_eps is eps^alpha times Z read on the sublattice of stride
    (1/eps^2, 1/eps, ...); every eps must be 1/2^j with strides dividing the grid.
    """
    alpha = Fraction(alpha)
    fields = list(fields)
    if not fields:
        raise ValidationError("variance scaling needs at least one field")
    cfg = fields[0].config
    rows = []
    for eps in eps_list:
        eps = Fraction(eps)
        inv = 1 / eps
        if eps <= 0 or eps > 1 or inv.denominator != 1 or inv.numerator & (inv.numerator - 1):
            raise ValidationError(f"eps = {eps} is not of the form 1/2^j")
        stride_x = inv.numerator
        stride_t = stride_x ** 2
        if cfg.grid_t % stride_t or cfg.grid_x % stride_x:
            raise ValidationError(f"eps = {eps} is incompatible with grid {cfg.grid_t}x{cfg.grid_x}")
        factor = float(sp.Rational(eps.numerator, eps.denominator) ** (2 * sp.Rational(alpha.numerator, alpha.denominator)))
        slicer = (slice(None, None, stride_t),) + (slice(None, None, stride_x),) * cfg.dsim
        ratios = np.array([factor * f.values[slicer].var() / f.values.var() for f in fields])
        ratio = float(ratios.mean())
        stderr = float(ratios.std(ddof=1) / np.sqrt(len(ratios))) if len(ratios) > 1 else 0.0
        if stderr > 0:
            deviation = (ratio - factor) / stderr
        else:
            deviation = 0.0 if math.isclose(ratio, factor, rel_tol=1e-12) else float('inf')
        rows.append({'eps': format_rational(eps), 'ratio': ratio, 'expected': factor,
                     'stderr': stderr, 'deviation': deviation})
    return rows


def fit_spectral_slope(fields: Sequence[LatticeField], bins: int = DEFAULT_SIM_RUN['slope_bins'],
                       min_rho_hat: float = DEFAULT_SIM_RUN['slope_min_rho_hat']) -> dict:
    """Least-squares slope of log shell-averaged |zeta_hat|^2 / rho_hat against log |q|_p."""
    fields = list(fields)
    cfg = fields[0].config
    qp = parabolic_magnitude(cfg)
    rho_hat = mollifier(cfg)
    mask = (qp > 0) & (rho_hat >= min_rho_hat)
    power = np.zeros(int(mask.sum()))
    for f in fields:
        power += np.abs(np.fft.fftn(f.values)[mask]) ** 2
    power /= len(fields) * rho_hat[mask]

    logq = np.log(qp[mask])
    edges = np.linspace(logq.min(), logq.max(), bins + 1)
    which = np.clip(np.digitize(logq, edges) - 1, 0, bins - 1)
    xs, ys = [], []
    for b in range(bins):
        sel = which == b
        if sel.any():
            xs.append(logq[sel].mean())
            ys.append(np.log(power[sel].mean()))
    if len(xs) < 4:
        raise ValidationError("too few populated frequency shells for a slope fit")
    coeffs, cov = np.polyfit(np.array(xs), np.array(ys), 1, cov=True)
    return {'slope': float(coeffs[0]), 'stderr': float(np.sqrt(cov[0, 0])),
            'expected': -2 * cfg.s, 'shells': len(xs)}


def hermite_consistency(source: FieldSource, K: int, block_count: int = DEFAULT_SIM_RUN['block_count'],
                        replicates: int = DEFAULT_SIM_RUN['bootstrap_replicates'],
                        seed: int = 0) -> List[dict]:
    """Empirical Appell coefficients against hermite(k, m2_hat), per coefficient, for k <= K."""
    powers, sizes = _block_power_means(_blocks(source, block_count), K)
    moments = _round_moments(_pooled(powers, sizes))
    sequence = AppellSequence(moments, K)
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, len(sizes), size=(replicates, len(sizes)))
    boot = _pooled(powers, sizes, idx)
    rows = []
    for k in range(K + 1):
        appell = sequence.polynomial(k)
        herm = hermite(k, moments[2]) if K >= 2 else hermite(k, 0)
        diffs = _appell_coefficients(boot, k) - _hermite_coefficients(boot[:, 2], k)
        for j in range(k + 1):
            a = float(appell.coefficient(j))
            h = float(herm.coefficient(j))
            stderr = float(diffs[:, j].std(ddof=1))
            if stderr > 0:
                z = (a - h) / stderr
            else:
                z = 0.0 if math.isclose(a, h, abs_tol=1e-12) else float('inf')
            rows.append({'k': k, 'j': j, 'appell': a, 'hermite': h, 'stderr': stderr, 'z': z})
    return rows


def run_simulation(cfg: SimConfig, run: RunSettings, dump_dir: Optional[str] = None) -> dict:
    """Synthesize run.n_seeds fields and evaluate every law-level identity.

    Seeds are cfg.seed, cfg.seed + 1, ...; the first half of the Z fields
    estimates moments and the second half tests centredness.
    """
    seeds = [cfg.seed + i for i in range(run.n_seeds)]
    zetas = [synthesize_noise(cfg, s) for s in seeds]
    zs = [solve_linear(z) for z in zetas]
    logger.info(f"run_simulation: {len(seeds)} fields of shape {cfg.shape}")

    if dump_dir:
        from src.storage import dump_field
        dump_field(zetas[0], os.path.join(dump_dir, f"zeta_{seeds[0]}"))
        dump_field(zs[0], os.path.join(dump_dir, f"Z_{seeds[0]}"))

    half = len(zs) // 2
    moments = estimate_moments(zs, run.moment_order, run.block_count, run.bootstrap_replicates, cfg.seed)
    centredness = [centredness_test(zs[:half], zs[half:], k, run.block_count,
                                    run.bootstrap_replicates, cfg.seed + k)
                   for k in run.centredness_orders]
    report = {
        'header': {'tool': 'mirs', 'note': REPORT_NOTE, 'seeds': [seeds[0], seeds[-1]]},
        'config': cfg.to_dict(),
        'run': run.to_dict(),
        'slopeFit': fit_spectral_slope(zetas, run.slope_bins, run.slope_min_rho_hat),
        'moments': moments.to_dict(),
        'centredness': centredness,
        'varianceScaling': variance_scaling(zs, run.alpha, run.eps_list),
        'hermite': hermite_consistency(zs, run.hermite_max_degree, run.block_count,
                                       run.bootstrap_replicates, cfg.seed),
    }
    return report
