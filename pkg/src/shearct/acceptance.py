"""The twelve acceptance checks, shared by the test suite and ``shearct verify``.

Each check returns a :class:`CheckResult` holding the measured value, its
limit and the wall time. Random inputs come from fixed seeds, so results
repeat exactly up to timing.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .fourier import chirp_z, chirp_z_direct
from .frame import FrameParams, build_masks, check_partition
from .phantoms import PhantomSpec, make_phantom
from .ppfft import ppfft_adjoint, ppfft_direct_oracle, ppfft_forward, ppfft_inverse
from .radon import NoiseSpec, add_noise, radon_forward, radon_to_spectrum
from .reconstruction import invert_frame, keep_largest, reconstruct
from .shearlets import analyze, analyze_direct_oracle
from .testbench import run_experiment, sigma_for_psnr

__all__ = ["CheckResult", "CHECKS", "run_check", "run_all", "KEEP_FRACTIONS"]

KEEP_FRACTIONS = (0.01, 0.02, 0.05, 0.10, 0.20)
ROUNDS = 80  # timing rounds per size for the complexity check


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    value: float
    limit: float
    seconds: float
    detail: str = ""

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        text = (f"[{verdict}] criterion {self.number:2d} {self.name}: "
                f"value={self.value:.3e} limit={self.limit:.3e} time={self.seconds:.2f}s")
        return text + (f" ({self.detail})" if self.detail else "")


def _rel(a, b) -> float:
    return float(np.linalg.norm(np.ravel(a) - np.ravel(b)) / np.linalg.norm(np.ravel(b)))


def _crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def check_chirp_z() -> CheckResult:
    rng = np.random.default_rng(1)
    sizes = [(1, 1), (7, 13), (64, 64), (100, 37), (255, 511), (512, 512), (512, 1), (3, 512)]
    worst, elapsed = 0.0, 0.0
    for M, K in sizes:
        v = _crandn(rng, M)
        alpha = float(rng.uniform(-1, 1))
        t0 = time.perf_counter()
        fast = chirp_z(v, alpha, K)
        elapsed += time.perf_counter() - t0
        worst = max(worst, _rel(fast, chirp_z_direct(v, alpha, K)))
    ok = worst <= 1e-10 and elapsed < 1.0
    return CheckResult(1, "chirp-z vs direct sum", ok, worst, 1e-10, elapsed,
                       f"{len(sizes)} sizes up to 512x512")


def check_ppfft_oracle() -> CheckResult:
    rng = np.random.default_rng(2)
    worst = 0.0
    t0 = time.perf_counter()
    for N in (8, 16, 32):
        x = rng.standard_normal((N, N))
        worst = max(worst, _rel(ppfft_forward(x), ppfft_direct_oracle(x)))
    elapsed = time.perf_counter() - t0
    return CheckResult(2, "ppfft vs direct oracle", worst <= 1e-9 and elapsed < 30, worst,
                       1e-9, elapsed, "N = 8, 16, 32")


def check_adjoint() -> CheckResult:
    rng = np.random.default_rng(3)
    N, worst = 16, 0.0
    t0 = time.perf_counter()
    for _ in range(20):
        x = _crandn(rng, N, N)
        y = _crandn(rng, 2, N, 2 * N)
        lhs = np.vdot(y, ppfft_forward(x))
        rhs = np.vdot(ppfft_adjoint(y), x)
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
    return CheckResult(3, "ppfft adjoint identity", worst <= 1e-11, worst, 1e-11,
                       time.perf_counter() - t0, "N = 16, 20 pairs")


def check_inverse() -> CheckResult:
    rng = np.random.default_rng(4)
    x = rng.standard_normal((32, 32))
    t0 = time.perf_counter()
    rec, info = ppfft_inverse(ppfft_forward(x), tol=1e-9, max_iter=100, full_output=True)
    err = _rel(rec, x)
    return CheckResult(4, "ppfft inverse round trip", err <= 1e-6 and info.iterations <= 100,
                       err, 1e-6, time.perf_counter() - t0, f"{info.iterations} CG iterations")


def check_fourier_slice() -> CheckResult:
    x = np.random.default_rng(5).standard_normal((128, 128))
    t0 = time.perf_counter()
    err = _rel(radon_to_spectrum(radon_forward(x)), ppfft_forward(x))
    return CheckResult(5, "Fourier slice identity", err <= 1e-12, err, 1e-12,
                       time.perf_counter() - t0, "N = 128")


def check_partition_of_unity() -> CheckResult:
    t0 = time.perf_counter()
    worst = max(check_partition(build_masks(FrameParams(64, J))) for J in (1, 2, 3))
    return CheckResult(6, "mask partition of unity", worst <= 1e-12, worst, 1e-12,
                       time.perf_counter() - t0, "N = 64, J = 1, 2, 3")


def check_analysis_oracle() -> CheckResult:
    rng = np.random.default_rng(7)
    worst = 0.0
    t0 = time.perf_counter()
    for N in (8, 16, 32):
        spec = ppfft_forward(rng.standard_normal((N, N)))
        J = 1
        while N >= 4**J:
            ms = build_masks(FrameParams(N, J))
            fast, slow = analyze(spec, ms), analyze_direct_oracle(spec, ms)
            for a, b in zip(fast.arrays(), slow.arrays()):
                scale = max(np.linalg.norm(b), 1e-300)
                worst = max(worst, float(np.linalg.norm(a - b) / scale))
            J += 1
    elapsed = time.perf_counter() - t0
    return CheckResult(7, "analysis vs direct oracle", worst <= 1e-9 and elapsed < 60, worst,
                       1e-9, elapsed, "N = 8, 16, 32, every valid J, every subband")


def check_noiseless() -> CheckResult:
    x = make_phantom(PhantomSpec("shepp_logan", 128))
    ms = build_masks(FrameParams(128))
    t0 = time.perf_counter()
    rec = reconstruct(radon_forward(x), ms)
    elapsed = time.perf_counter() - t0
    err = _rel(rec, x)
    return CheckResult(8, "noiseless Shepp-Logan", err <= 1e-3 and elapsed < 30, err, 1e-3,
                       elapsed, f"N = 128, J = {ms.J}")


def check_homoscedastic() -> CheckResult:
    N = 128
    ms = build_masks(FrameParams(N))
    zero = radon_forward(np.zeros((N, N)))
    t0 = time.perf_counter()
    samples = {k: [] for k in ms.keys}
    for seed in range(10):
        cs = analyze(radon_to_spectrum(add_noise(zero, NoiseSpec(1.0, seed))), ms)
        for k in ms.keys:
            samples[k].append(cs.subbands[k])
    stds = np.array([np.std(np.concatenate(v)) for v in samples.values()])
    pooled = stds.mean()
    spread = float(np.max(np.abs(stds / pooled - 1)))
    return CheckResult(9, "homoscedastic subband noise", spread <= 0.10, spread, 0.10,
                       time.perf_counter() - t0,
                       f"{len(stds)} subbands, std {stds.min():.4f}..{stds.max():.4f}")


def check_denoising() -> CheckResult:
    N = 128
    t0 = time.perf_counter()
    sigma = sigma_for_psnr(20.0, N)
    reports = [run_experiment(PhantomSpec("shepp_logan", N), sigma, seed) for seed in range(5)]
    gain = float(np.mean([r.gain_db for r in reports]))
    plain = float(np.mean([r.plain_psnr for r in reports]))
    return CheckResult(10, "universal hard threshold gain (dB)", gain >= 2.0, gain, 2.0,
                       time.perf_counter() - t0,
                       f"sigma = {sigma:.2f}, mean plain PSNR {plain:.2f} dB, 5 seeds")


def _best_times(f, inputs, rounds: int) -> list[float]:
    """Best wall time of ``f`` on each input, with the inputs interleaved so
    every size sees the same machine load."""
    for x in inputs:
        f(x)
    best = [np.inf] * len(inputs)
    for _ in range(rounds):
        for i, x in enumerate(inputs):
            t0 = time.perf_counter()
            f(x)
            best[i] = min(best[i], time.perf_counter() - t0)
    return best


def check_complexity() -> CheckResult:
    rng = np.random.default_rng(11)
    t0 = time.perf_counter()
    t128, t256 = _best_times(ppfft_forward, [rng.standard_normal((n, n)) for n in (128, 256)], ROUNDS)
    ratio = t256 / t128
    return CheckResult(11, "ppfft time ratio t(256)/t(128)", ratio <= 5.0, ratio, 5.0,
                       time.perf_counter() - t0,
                       f"best of {ROUNDS}: {t128 * 1e3:.2f} ms vs {t256 * 1e3:.2f} ms")


def approximation_curve(N: int = 128, J: int | None = None,
                        fractions=KEEP_FRACTIONS) -> list[float]:
    """rel_l2 of the noiseless ellipses/rectangles image rebuilt from the
    largest ``fraction`` of its coefficients, for each fraction."""
    x = make_phantom(PhantomSpec("ellipses_rects", N))
    ms = build_masks(FrameParams(N, J))
    cs = analyze(ppfft_forward(x), ms)
    return [_rel(invert_frame(keep_largest(cs, ms, f), ms)[0], x) for f in fractions]


def check_approximation() -> CheckResult:
    t0 = time.perf_counter()
    errs = approximation_curve()
    monotone = all(b <= a for a, b in zip(errs, errs[1:]))
    at10 = errs[KEEP_FRACTIONS.index(0.10)]
    curve = ", ".join(f"{f:.0%}:{e:.3f}" for f, e in zip(KEEP_FRACTIONS, errs))
    return CheckResult(12, "top-K approximation (rel_l2 at 10% kept)", monotone and at10 <= 0.05,
                       at10, 0.05, time.perf_counter() - t0,
                       f"monotone={monotone}; {curve}")


CHECKS = (check_chirp_z, check_ppfft_oracle, check_adjoint, check_inverse,
          check_fourier_slice, check_partition_of_unity, check_analysis_oracle,
          check_noiseless, check_homoscedastic, check_denoising, check_complexity,
          check_approximation)


def run_check(number: int) -> CheckResult:
    return CHECKS[number - 1]()


def run_all(echo=print) -> list[CheckResult]:
    results = []
    for check in CHECKS:
        r = check()
        if echo is not None:
            echo(r.line())
        results.append(r)
    return results
