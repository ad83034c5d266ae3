"""Half-chain entanglement growth after a quench from a product state."""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from duhive.core.tensors import as_gate
from duhive.quench.states import apply_layer, random_product_state, renyi_entropy

SATURATION_FRACTION = 0.8
GUESS_FRACTION = 0.6
FIRST_FIT_LAYER = 2


@dataclass
class GrowthSeries:
    """Half-chain Rényi entropy per layer.

    Attributes:
        q (int): Local dimension.
        N (int): Chain length.
        alpha (int): Rényi index.
        entropies (list[float]): S(t) for ``t = 0 ... layers``.
        window (tuple[int, int]): First and last layer of the fit.
        slope (float): Fitted growth rate per layer.
        reference_slope (float): Slope of the dual-unitary reference run.
    """

    q: int
    N: int
    alpha: int
    entropies: List[float]
    window: Tuple[int, int]
    slope: float
    reference_slope: Optional[float] = None

    @property
    def times(self):
        return list(range(len(self.entropies)))

    @property
    def v_E(self):
        """Slope normalized by the dual-unitary reference."""
        if not self.reference_slope:
            return None
        return self.slope / self.reference_slope

    @property
    def saturation(self):
        return self.N / 2 * np.log(self.q)

    def oscillation(self, tail=None):
        """Peak-to-peak spread of S over the last `tail` layers."""
        tail = tail or max(2, len(self.entropies) // 2)
        values = self.entropies[-tail:]
        return float(max(values) - min(values))


def entropy_series(gate, N, layers, seed, alpha=2, translation_invariant=True):
    """S(t) after every layer, starting from a random product state."""
    gate = as_gate(gate)
    if N % 2:
        raise ValueError(f"periodic brickwork needs an even chain, got N={N}")
    state = random_product_state(gate.q, N, seed, translation_invariant)
    entropies = [renyi_entropy(state, alpha=alpha)]
    for layer in range(1, layers + 1):
        apply_layer(state, gate, (layer + 1) % 2)
        entropies.append(renyi_entropy(state, alpha=alpha))
    drift = abs(state.norm - 1)
    if drift > 1e-10:
        logging.warning("Norm drifted by %.3e over %d layers", drift, layers)
    return entropies


def _fit(entropies, start, stop):
    times = np.arange(start, stop + 1)
    slope, _ = np.polyfit(times, np.asarray(entropies)[start : stop + 1], 1)
    return float(slope)


def fit_window(entropies, q, N):
    """Two-pass least-squares fit of the early linear growth.

    The first window ends before S exceeds 80% of its maximum. The second one is
    cut at ``0.6 (N / 2) log q / slope`` using the first slope as a guess.

    Returns:
        (slope, (start, stop))
    """
    entropies = np.asarray(entropies)
    start = FIRST_FIT_LAYER
    if len(entropies) < start + 2:
        raise ValueError(f"need at least {start + 2} entropies to fit, got {len(entropies)}")
    peak = entropies.max()
    above = np.nonzero(entropies >= SATURATION_FRACTION * peak)[0]
    stop = int(above[0]) - 1 if len(above) else len(entropies) - 1
    stop = min(max(stop, start + 1), len(entropies) - 1)
    slope = _fit(entropies, start, stop)
    if slope > 0:
        guess = int(np.floor(GUESS_FRACTION * (N / 2) * np.log(q) / slope))
        stop = min(max(min(stop, guess), start + 1), len(entropies) - 1)
        slope = _fit(entropies, start, stop)
    return slope, (start, stop)


def entanglement_growth(
    gate,
    N,
    layers,
    seed,
    alpha=2,
    reference=None,
    translation_invariant=True,
    logger=None,
    prefix="quench",
):
    """Entropy growth and its slope, normalized by a reference circuit.

    Args:
        gate (UnitaryGate): Gate of the circuit.
        N (int): Chain length, even.
        layers (int): Number of layers.
        seed (int): Seed of the initial state.
        alpha (int): Rényi index.
        reference (UnitaryGate): Dual-unitary gate of the same q. No
            normalization when None.
        translation_invariant (bool): Initial state replicates one site vector.
    """
    gate = as_gate(gate)
    entropies = entropy_series(gate, N, layers, seed, alpha, translation_invariant)
    slope, window = fit_window(entropies, gate.q, N)
    reference_slope = None
    if reference is not None:
        reference_entropies = entropy_series(
            reference, N, layers, seed, alpha, translation_invariant
        )
        reference_slope, _ = fit_window(reference_entropies, gate.q, N)
        if slope > reference_slope * (1 + 1e-6):
            logging.warning(
                "Growth slope %.4f exceeds the dual-unitary reference %.4f",
                slope,
                reference_slope,
            )
    series = GrowthSeries(gate.q, N, alpha, entropies, window, slope, reference_slope)
    if logger is not None:
        for t, value in enumerate(entropies):
            logger.update_step(prefix)
            logger.log_metrics({"t": t, "S": value}, prefix)
    logging.info("Entanglement slope %.4f over layers %s, v_E %s", slope, window, series.v_E)
    return series
