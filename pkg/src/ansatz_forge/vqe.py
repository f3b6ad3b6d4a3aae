"""Gradients (parameter-shift and finite difference), the training loop, warm starts."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .circuit import SHIFT_RULE_GATES, Circuit, gate_count, prefix_sqrt_h
from .errors import DimensionError, NumericalError, ValidationError
from .pauli import Hamiltonian
from .simulator import expectation, expectation_batch, run, run_batch


@dataclass(frozen=True)
class TrainConfig:
    optimizer: str = "adam"  # adam | gradient_descent
    learning_rate: float = 0.05
    max_epochs: int = 200
    convergence_tol: float = 1e-6
    convergence_window: int = 10
    init_strategy: str = "random_uniform"  # random_uniform | constant | vqe_i
    init_value: float = 0.0  # used by the constant strategy
    seed: int = 0
    gradient_mode: str = "auto"  # auto | shift_only | finite_difference
    fd_step: float = 1e-4

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValidationError("learning_rate must be > 0")
        if self.max_epochs < 1:
            raise ValidationError("max_epochs must be >= 1")
        if self.fd_step <= 0:
            raise ValidationError("fd_step must be > 0")
        if self.optimizer not in ("adam", "gradient_descent"):
            raise ValidationError(f"unknown optimizer {self.optimizer!r}")
        if self.init_strategy not in ("random_uniform", "constant", "vqe_i"):
            raise ValidationError(f"unknown init strategy {self.init_strategy!r}")
        if self.gradient_mode not in ("auto", "shift_only", "finite_difference"):
            raise ValidationError(f"unknown gradient mode {self.gradient_mode!r}")


@dataclass(frozen=True)
class TrainReport:
    trajectory: tuple[float, ...]  # energy per epoch, epoch index = position
    epochs_run: int
    epochs_to_converge: int | None
    final_energy: float
    best_params: tuple[float, ...]
    gate_count: int

    def to_dict(self) -> dict:
        return {
            "trajectory": [[i, e] for i, e in enumerate(self.trajectory)],
            "epochs_run": self.epochs_run,
            "epochs_to_converge": self.epochs_to_converge,
            "final_energy": self.final_energy,
            "best_params": list(self.best_params),
            "gate_count": self.gate_count,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _energy(c: Circuit, params, h: Hamiltonian) -> float:
    return expectation(run(c, params), h)


def gradient(c: Circuit, params, h: Hamiltonian, mode: str = "auto",
             fd_step: float = 1e-4) -> np.ndarray:
    """d<h>/d(theta_k) for every flat parameter.

    `auto` uses the two-term shift rule for parameters bound exactly once by a
    shift-eligible gate (single-Pauli generator, +-1/2 convention) and central
    finite differences for everything else (U3/CU3, multiply-bound params).
    """
    params = np.asarray(params, dtype=float)
    if params.shape != (c.n_params,):
        raise DimensionError(f"expected {c.n_params} params, got {params.shape}")
    if c.n_qubits != h.n_qubits:
        raise DimensionError("circuit and Hamiltonian qubit counts differ")
    if c.n_params == 0:
        return np.zeros(0)

    bind_counts = c.param_bind_counts()
    gate_kinds = c.param_gate_kinds()
    if mode == "shift_only":
        use_shift = np.ones(c.n_params, dtype=bool)
    elif mode == "finite_difference":
        use_shift = np.zeros(c.n_params, dtype=bool)
    else:
        use_shift = np.array([
            bind_counts[k] == 1 and gate_kinds[k] <= SHIFT_RULE_GATES
            for k in range(c.n_params)])
    steps = np.where(use_shift, math.pi / 2, fd_step)

    # All 2P shifted evaluations are independent; run them as one batch.
    batch = np.tile(params, (2 * c.n_params, 1))
    rows = np.arange(c.n_params)
    batch[2 * rows, rows] += steps
    batch[2 * rows + 1, rows] -= steps
    energies = expectation_batch(run_batch(c, batch), h)
    deltas = energies[2 * rows] - energies[2 * rows + 1]
    return np.where(use_shift, deltas / 2.0, deltas / (2.0 * fd_step))


class _Adam:
    def __init__(self, lr, n, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = lr
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.m = np.zeros(n)
        self.v = np.zeros(n)
        self.t = 0

    def step(self, params, grad):
        self.t += 1
        self.m = self.beta1 * self.m + (1 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1 - self.beta2) * grad ** 2
        m_hat = self.m / (1 - self.beta1 ** self.t)
        v_hat = self.v / (1 - self.beta2 ** self.t)
        return params - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


class _GradientDescent:
    def __init__(self, lr, n):
        self.lr = lr

    def step(self, params, grad):
        return params - self.lr * grad


def initial_params(c: Circuit, cfg: TrainConfig) -> np.ndarray:
    if cfg.init_strategy == "constant":
        return np.full(c.n_params, cfg.init_value)
    rng = np.random.default_rng(cfg.seed)
    return rng.uniform(-math.pi, math.pi, size=c.n_params)


def train(c: Circuit, h: Hamiltonian, cfg: TrainConfig | None = None) -> TrainReport:
    """Minimize <h> over the circuit parameters.

    Records the energy at the current parameters each epoch, then takes one
    optimizer step. Convergence: max-min over the last convergence_window
    recorded energies < convergence_tol.
    """
    cfg = cfg or TrainConfig()
    if c.n_qubits != h.n_qubits:
        raise DimensionError("circuit and Hamiltonian qubit counts differ")
    if cfg.init_strategy == "vqe_i":
        c = prefix_sqrt_h(c)
    params = initial_params(c, cfg)
    opt_cls = _Adam if cfg.optimizer == "adam" else _GradientDescent
    opt = opt_cls(cfg.learning_rate, c.n_params)

    trajectory: list[float] = []
    best_energy = math.inf
    best_params = params.copy()
    epochs_to_converge = None
    for epoch in range(cfg.max_epochs):
        energy = _energy(c, params, h)
        if not math.isfinite(energy):
            raise NumericalError(f"non-finite energy at epoch {epoch}", epoch=epoch)
        trajectory.append(energy)
        if energy < best_energy:
            best_energy = energy
            best_params = params.copy()
        window = trajectory[-cfg.convergence_window:]
        if (len(window) == cfg.convergence_window
                and max(window) - min(window) < cfg.convergence_tol):
            epochs_to_converge = len(trajectory)
            break
        if c.n_params:
            grad = gradient(c, params, h, mode=cfg.gradient_mode, fd_step=cfg.fd_step)
            params = opt.step(params, grad)

    return TrainReport(
        trajectory=tuple(trajectory),
        epochs_run=len(trajectory),
        epochs_to_converge=epochs_to_converge,
        final_energy=trajectory[-1],
        best_params=tuple(best_params),
        gate_count=gate_count(c),
    )
