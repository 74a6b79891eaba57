"""Federated training over the simulated analog channel, plus the
closed-form convergence bound for strongly convex losses.

The learning task is synthetic ridge regression: per-point loss
0.5 (u.w - v)^2 + (reg_lambda/2) ||w||^2, which is exactly
reg_lambda-strongly convex with smoothness mu = lambda_max(cov) + reg_lambda
computed from the generated data.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.random import Generator

from .aircomp import clip_gradient, simulate_round
from .channel import ChannelConfig, sample_channel
from .pcran import PowerAllocation, compute_alignment, draw_secrets, form_pairs

DIVERGENCE_FACTOR = 1e6


@dataclass(frozen=True)
class SyntheticTask:
    """Ridge-regression task split across K users with equal data sizes.

    U has shape (K, n, d) and V shape (K, n).  mu is the smoothness constant
    of the global loss; reg_lambda its strong-convexity constant.
    """

    U: np.ndarray
    V: np.ndarray
    reg_lambda: float
    mu: float

    @property
    def K(self) -> int:
        return self.U.shape[0]

    @property
    def d(self) -> int:
        return self.U.shape[2]


@dataclass
class TrainState:
    """Trajectory of one training run."""

    w: np.ndarray
    t: int
    eta: float
    loss_history: list[float] = field(default_factory=list)
    gap_history: list[float] = field(default_factory=list)
    shat_sq_sum: float = 0.0


@dataclass(frozen=True)
class BoundInputs:
    """Inputs to the closed-form convergence bound.

    noise_power_sum is sum_k |h_k|^2 beta_k P_k.  g2 optionally records the
    empirical second moment E||s_hat||^2 for reporting; it does not enter
    the bound formula.
    """

    mu: float
    lam: float
    T: int
    L_s: float
    d: int
    m: float
    K: int
    noise_power_sum: float
    sigma_z2: float
    g2: float | None = None


def make_task(
    K: int,
    n_per_user: int,
    d: int,
    reg_lambda: float,
    rng: Generator,
    feature_scale: float = 1.0,
    label_noise: float = 1.0,
) -> SyntheticTask:
    """Generate a synthetic ridge task with a known planted model."""
    if reg_lambda <= 0:
        raise ValueError("reg_lambda must be positive for strong convexity")
    U = rng.normal(0.0, feature_scale / np.sqrt(d), size=(K, n_per_user, d))
    w_true = rng.normal(0.0, 1.0, size=d)
    V = U @ w_true + rng.normal(0.0, label_noise, size=(K, n_per_user))
    flat = U.reshape(-1, d)
    cov = flat.T @ flat / flat.shape[0]
    mu = float(np.linalg.eigvalsh(cov)[-1] + reg_lambda)
    return SyntheticTask(U=U, V=V, reg_lambda=reg_lambda, mu=mu)


def global_loss(w: np.ndarray, task: SyntheticTask) -> float:
    """Mean per-point regularized squared error over the pooled dataset."""
    resid = task.U @ w - task.V  # (K, n)
    reg = 0.5 * task.reg_lambda * float(w @ w)
    return float(0.5 * np.mean(resid**2) + reg)


def local_gradient(
    w: np.ndarray, U_k: np.ndarray, V_k: np.ndarray, reg_lambda: float
) -> np.ndarray:
    """Mean per-point gradient over one user's dataset."""
    resid = U_k @ w - V_k
    return resid @ U_k / U_k.shape[0] + reg_lambda * w


def all_local_gradients(w: np.ndarray, task: SyntheticTask) -> np.ndarray:
    """Stack of every user's local gradient, shape (K, d)."""
    resid = task.U @ w - task.V  # (K, n)
    n = task.U.shape[1]
    return np.einsum("kn,knd->kd", resid, task.U) / n + task.reg_lambda * w


def optimal_model(task: SyntheticTask) -> np.ndarray:
    """Exact minimizer of the global loss (normal equations)."""
    flat = task.U.reshape(-1, task.d)
    A = flat.T @ flat / flat.shape[0] + task.reg_lambda * np.eye(task.d)
    b = flat.T @ task.V.reshape(-1) / flat.shape[0]
    return np.linalg.solve(A, b)


def convergence_bound(inputs: BoundInputs) -> float:
    """Closed-form upper bound on the expected optimality gap at iteration T.

    (2 mu / (lam^2 T)) * (L_s^2 + (d / (m^2 K^2)) * (noise_power_sum + sigma_z2))
    """
    if inputs.T < 1:
        raise ValueError("T must be at least 1")
    if inputs.m <= 0:
        raise ValueError("alignment constant m must be positive")
    if inputs.K < 1:
        raise ValueError("K must be at least 1")
    if inputs.noise_power_sum < 0 or inputs.sigma_z2 < 0:
        raise ValueError("noise powers must be nonnegative")
    noise = (inputs.d / (inputs.m**2 * inputs.K**2)) * (
        inputs.noise_power_sum + inputs.sigma_z2
    )
    return (2.0 * inputs.mu / (inputs.lam**2 * inputs.T)) * (inputs.L_s**2 + noise)


@dataclass(frozen=True)
class TrainSettings:
    """Knobs of a training run over the air."""

    T: int
    L_s: float = 1.0
    power: float = 1000.0  # linear per-user transmit power
    alpha_cap: float = 0.5
    beta: float = 0.5
    eta: float | None = None  # None -> 1/(reg_lambda * t) schedule
    mu_range: tuple[float, float] = (0.5, 1.5)
    sigma2_range: tuple[float, float] = (1.0, 1.0)
    pre_equalized: bool = True


def centralized_gd(
    task: SyntheticTask, settings: TrainSettings, w0: np.ndarray | None = None
) -> TrainState:
    """Noise-free reference: per-user gradients clipped and averaged exactly.

    Uses the same learning-rate schedule as the over-the-air loop, so with a
    noiseless channel the two trajectories coincide.
    """
    w = np.zeros(task.d) if w0 is None else w0.astype(float).copy()
    state = TrainState(w=w, t=0, eta=0.0)
    for t in range(1, settings.T + 1):
        grads = all_local_gradients(state.w, task)
        clipped = np.stack([clip_gradient(g, settings.L_s) for g in grads])
        s_hat = clipped.mean(axis=0)
        eta = settings.eta if settings.eta is not None else 1.0 / (task.reg_lambda * t)
        state.w = state.w - eta * s_hat
        state.t, state.eta = t, eta
        state.loss_history.append(global_loss(state.w, task))
    return state


def train_over_air(
    task: SyntheticTask,
    channel_config: ChannelConfig,
    settings: TrainSettings,
    rng: Generator,
    w0: np.ndarray | None = None,
) -> tuple[TrainState, BoundInputs]:
    """Run T federated rounds over the simulated analog channel.

    The channel is sampled once (time-invariant link), pairs and secrets are
    formed once, and each round clips the local gradients, transmits them
    with PCR-AN, and applies the global update w <- w - eta_t * s_hat.
    Returns the trajectory plus the bound inputs matching the realized run.
    """
    K = task.K
    if K % 2 != 0:
        raise ValueError("pairwise noise scheme needs an even number of users")
    realization = sample_channel(channel_config, K, rng)
    P = np.full(K, settings.power)
    m, alpha = compute_alignment(
        realization.h2, P, settings.L_s, alpha_cap=settings.alpha_cap
    )
    beta = np.minimum(np.full(K, settings.beta), 1.0 - alpha)
    alloc = PowerAllocation(P=P, alpha=alpha, beta=beta, m=m, L_s=settings.L_s)
    pairing = form_pairs(K, rng)
    secrets = draw_secrets(K // 2, settings.mu_range, settings.sigma2_range, rng)

    w = np.zeros(task.d) if w0 is None else w0.astype(float).copy()
    state = TrainState(w=w, t=0, eta=0.0)
    w_star = optimal_model(task)
    f_star = global_loss(w_star, task)
    # the 1/(lam t) schedule makes a large t=1 step intrinsic, so the
    # divergence guard anchors at the post-first-step loss
    guard_ref = global_loss(state.w, task)

    for t in range(1, settings.T + 1):
        grads = all_local_gradients(state.w, task)
        est = simulate_round(
            grads, realization, alloc, pairing, secrets,
            channel_config.sigma_z2, rng, pre_equalized=settings.pre_equalized,
        )
        eta = settings.eta if settings.eta is not None else 1.0 / (task.reg_lambda * t)
        state.w = state.w - eta * est.s_hat
        state.t, state.eta = t, eta
        state.shat_sq_sum += float(est.s_hat @ est.s_hat)
        loss = global_loss(state.w, task)
        state.loss_history.append(loss)
        state.gap_history.append(loss - f_star)
        if not np.isfinite(loss):
            raise RuntimeError(f"training diverged at iteration {t} (loss {loss:.3e})")
        if t == 1:
            guard_ref = max(guard_ref, loss)
        elif loss > DIVERGENCE_FACTOR * max(guard_ref, 1e-12):
            raise RuntimeError(f"training diverged at iteration {t} (loss {loss:.3e})")

    bound_inputs = BoundInputs(
        mu=task.mu,
        lam=task.reg_lambda,
        T=settings.T,
        L_s=settings.L_s,
        d=task.d,
        m=m,
        K=K,
        noise_power_sum=float(np.sum(realization.h2 * beta * P)),
        sigma_z2=channel_config.sigma_z2,
        g2=state.shat_sq_sum / settings.T,
    )
    return state, bound_inputs
