"""Quality metrics and the simulation driver.

A run builds a phantom, takes its linogram, adds noise and reconstructs it
twice: once with no threshold and once with the given rule. The report
is a flat key-value document. It is a deterministic function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .frame import FrameParams, build_masks
from .phantoms import PhantomSpec, make_phantom
from .radon import NoiseSpec, add_noise, radon_forward
from .reconstruction import ThresholdRule, reconstruct

__all__ = [
    "Metrics",
    "compute_metrics",
    "Report",
    "run_experiment",
    "noise_image_mse",
    "sigma_for_psnr",
]


@dataclass(frozen=True)
class Metrics:
    mse: float
    psnr: float
    rel_l2: float


def compute_metrics(a, b) -> Metrics:
    """Error of ``b`` against the reference ``a`` (peak value 1 for PSNR).

    ``rel_l2`` is ``||a - b|| / ||a||``; it is 0 when both are zero and
    ``inf`` when only ``a`` is zero. ``psnr`` is ``inf`` for identical images.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    diff = a - b
    mse = float(np.mean(diff**2)) if diff.size else 0.0
    psnr = math.inf if mse == 0 else -10.0 * math.log10(mse)
    na, nd = float(np.linalg.norm(a)), float(np.linalg.norm(diff))
    if na == 0:
        rel = 0.0 if nd == 0 else math.inf
    else:
        rel = nd / na
    return Metrics(mse, psnr, rel)


@dataclass(frozen=True)
class Report:
    phantom: str
    N: int
    J: int
    sigma: float
    seed: int
    rule: str
    threshold: float
    plain_mse: float
    plain_psnr: float
    plain_rel_l2: float
    plain_iterations: int
    plain_residual: float
    denoised_mse: float
    denoised_psnr: float
    denoised_rel_l2: float
    denoised_iterations: int
    denoised_residual: float

    @property
    def gain_db(self) -> float:
        return self.denoised_psnr - self.plain_psnr

    def to_text(self) -> str:
        """``key = value`` lines in field order, floats with ``repr`` precision."""
        lines = [f"{k} = {v!r}" if isinstance(v, float) else f"{k} = {v}"
                 for k, v in asdict(self).items()]
        lines.append(f"gain_db = {self.gain_db!r}")
        return "\n".join(lines) + "\n"


def _rule_text(rule: ThresholdRule) -> str:
    level = "universal" if rule.universal else f"t={rule.t!r}"
    return f"{rule.kind}:{level}"


def run_experiment(phantom: PhantomSpec, sigma: float, seed: int = 0,
                   rule: ThresholdRule | None = None, *, J: int | None = None,
                   tol: float = 1e-6, max_iter: int = 10,
                   images: dict | None = None) -> Report:
    """Phantom, linogram, noise, then plain and thresholded reconstructions.

    ``rule`` defaults to hard thresholding at the universal level with the
    known ``sigma``. When ``images`` is a dict it receives the arrays
    ``phantom``, ``plain`` and ``denoised``.
    """
    if rule is None:
        rule = ThresholdRule("hard", universal=True, sigma=sigma)
    x = make_phantom(phantom)
    ms = build_masks(FrameParams(phantom.N, J))
    lin = add_noise(radon_forward(x), NoiseSpec(sigma, seed))
    plain, pinfo = reconstruct(lin, ms, None, tol, max_iter, full_output=True)
    den, dinfo = reconstruct(lin, ms, rule, tol, max_iter, full_output=True)
    mp, md = compute_metrics(x, plain), compute_metrics(x, den)
    if images is not None:
        images.update(phantom=x, plain=plain, denoised=den)
    return Report(
        phantom=phantom.kind, N=phantom.N, J=ms.J, sigma=float(sigma), seed=int(seed),
        rule=_rule_text(rule), threshold=float(dinfo.threshold),
        plain_mse=mp.mse, plain_psnr=mp.psnr, plain_rel_l2=mp.rel_l2,
        plain_iterations=pinfo.solve.iterations, plain_residual=pinfo.solve.residual,
        denoised_mse=md.mse, denoised_psnr=md.psnr, denoised_rel_l2=md.rel_l2,
        denoised_iterations=dinfo.solve.iterations, denoised_residual=dinfo.solve.residual,
    )


def noise_image_mse(N: int, seed: int = 0, *, J: int | None = None,
                    tol: float = 1e-6, max_iter: int = 10) -> float:
    """Pixel MSE of the plain reconstruction of a unit-variance noise linogram.

    The plain reconstruction is linear, so noise of level ``sigma`` costs
    ``sigma**2`` times this value.
    """
    ms = build_masks(FrameParams(N, J))
    zero = radon_forward(np.zeros((N, N)))
    img = reconstruct(add_noise(zero, NoiseSpec(1.0, seed)), ms, None, tol, max_iter)
    return float(np.mean(img**2))


def sigma_for_psnr(target_db: float, N: int, seed: int = 0, **kw) -> float:
    """Linogram noise level whose plain reconstruction has PSNR ``target_db``.

    This is how the input PSNR of a denoising run is defined here.
    """
    return math.sqrt(10.0 ** (-target_db / 10.0) / noise_image_mse(N, seed, **kw))
