"""Vectorised exhaustive sweeps over the full state space.

Costs are rescaled to integers: with ``D`` the common denominator of all
cost values and ``alpha_i = p_i / q_i``, player ``i``'s scaled cost is
``p_i * D * sum(l) + (q_i - p_i) * D * max(e)``, i.e. ``q_i * D`` times her
true cost. Comparisons between a player's own costs are therefore exact.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from mixedcongestion.errors import CapExceededError, CostEvaluationError
from mixedcongestion.game import Game

#: work budget (elements) per chunk of states
_CHUNK_ELEMENTS = 1 << 22


class StateSpace:
    def __init__(self, game: Game, cap: int):
        total = game.state_count()
        if total > cap:
            raise CapExceededError(f"{total} states exceed the enumeration cap {cap}")
        self.game = game
        self.total = total
        n, m = game.n, game.m
        self.strategies = [game.strategies(i) for i in range(n)]
        self.sizes = np.array([len(s) for s in self.strategies], dtype=np.int64)
        strides = np.ones(n, dtype=np.int64)
        for i in range(n - 2, -1, -1):
            strides[i] = strides[i + 1] * self.sizes[i + 1]
        self.strides = strides

        ridx = game.resource_index
        pad = m
        self.width = max(1, game.max_strategy_size)
        self.members = []
        self.incidence = []
        for strats in self.strategies:
            idx = np.full((len(strats), self.width), pad, dtype=np.int64)
            inc = np.zeros((len(strats), m + 1), dtype=np.int64)
            for k, s in enumerate(strats):
                cols = sorted(ridx[r] for r in s)
                idx[k, :len(cols)] = cols
                inc[k, cols] = 1
            self.members.append(idx)
            self.incidence.append(inc)

        values = []
        for r, x in game.reachable_loads():
            try:
                values.append(r.latency(x))
                values.append(r.bottleneck(x))
            except CostEvaluationError as exc:
                raise CostEvaluationError(f"resource {r.id}: {exc}") from None
        denom = math.lcm(*(v.denominator for v in values)) if values else 1
        lat = [[0] * (n + 2) for _ in range(m + 1)]
        bot = [[0] * (n + 2) for _ in range(m + 1)]
        for r, x in game.reachable_loads():
            lat[ridx[r.id]][x] = int(r.latency(x) * denom)
            bot[ridx[r.id]][x] = int(r.bottleneck(x) * denom)
        self.denom = denom
        self.alpha_num = [p.alpha.numerator for p in game.players]
        self.alpha_den = [p.alpha.denominator for p in game.players]
        biggest = max([max(map(max, lat)), max(map(max, bot)), 1])
        bound = max(q for q in self.alpha_den) * biggest * (self.width + 1)
        # ratios are compared by cross-multiplication, so squares must fit
        self.dtype = np.int64 if bound * bound < 2**62 else object
        self.lat = np.array(lat, dtype=self.dtype)
        self.bot = np.array(bot, dtype=self.dtype)
        self.rows = np.arange(m + 1)
        per_state = (m + 1) * n + sum(int(s) * self.width * 2 for s in self.sizes)
        self.chunk = max(1, _CHUNK_ELEMENTS // max(1, per_state))

    def decode(self, flat: np.ndarray) -> np.ndarray:
        return (flat[:, None] // self.strides[None, :]) % self.sizes[None, :]

    def chunks(self):
        for start in range(0, self.total, self.chunk):
            flat = np.arange(start, min(self.total, start + self.chunk), dtype=np.int64)
            choices = self.decode(flat)
            yield flat, choices, self.congestion(choices)

    def congestion(self, choices: np.ndarray) -> np.ndarray:
        cong = np.zeros((len(choices), self.game.m + 1), dtype=np.int64)
        for i, inc in enumerate(self.incidence):
            cong += inc[choices[:, i]]
        return cong

    def player_costs(self, i: int, choices: np.ndarray, cong: np.ndarray) -> np.ndarray:
        """Scaled cost of every strategy of player ``i`` (rows: states)."""
        others = cong - self.incidence[i][choices[:, i]]
        nxt = np.minimum(others + 1, self.lat.shape[1] - 1)
        lat = self.lat[self.rows, nxt]
        bot = self.bot[self.rows, nxt]
        members = self.members[i]
        lat_sum = lat[:, members].sum(axis=2)
        bot_max = bot[:, members].max(axis=2)
        p, q = self.alpha_num[i], self.alpha_den[i]
        return p * lat_sum + (q - p) * bot_max

    def state(self, choice_row) -> tuple:
        return tuple(self.strategies[i][int(c)] for i, c in enumerate(choice_row))

    def scaled_to_fraction(self, i: int, value) -> Fraction:
        return Fraction(int(value), self.alpha_den[i] * self.denom)

    # -- sweeps ------------------------------------------------------------
    def pne_indices(self, limit: int | None = None) -> list[int]:
        """Flat indices of all PNE (ascending), stopping after ``limit``."""
        order = sorted(range(self.game.n), key=lambda i: self.sizes[i])
        found: list[int] = []
        for flat, choices, cong in self.chunks():
            alive = np.arange(len(flat))
            for i in order:
                if not len(alive):
                    break
                costs = self.player_costs(i, choices[alive], cong[alive])
                cur = costs[np.arange(len(alive)), choices[alive, i]]
                alive = alive[cur <= costs.min(axis=1)]
            found.extend(int(x) for x in flat[alive])
            if limit is not None and len(found) >= limit:
                return found[:limit]
        return found

    def beta_extremes(self):
        """Min and max over states of the exact achieved approximation factor.

        Returns ``((min_beta, state), (max_beta, state))``. Infinite factors
        are represented by ``math.inf``.
        """
        lo = hi = None
        for flat, choices, cong in self.chunks():
            num = np.ones(len(flat), dtype=self.dtype)
            den = np.ones(len(flat), dtype=self.dtype)
            rows = np.arange(len(flat))
            for i in range(self.game.n):
                costs = self.player_costs(i, choices, cong)
                cur = costs[rows, choices[:, i]]
                low = costs.min(axis=1)
                # conventions: 0/0 -> 1, x/0 -> inf (encoded as 1/0)
                pn = np.where(low == 0, 1, cur)
                pd = np.where(low == 0, np.where(cur == 0, 1, 0), low)
                better = pn * den > num * pd
                num = np.where(better, pn, num)
                den = np.where(better, pd, den)
            for pick, keep in ((_argext(num, den, smallest=True), "lo"),
                               (_argext(num, den, smallest=False), "hi")):
                val = _as_value(num[pick], den[pick])
                cand = (val, self.state(choices[pick]))
                if keep == "lo" and (lo is None or val < lo[0]):
                    lo = cand
                if keep == "hi" and (hi is None or val > hi[0]):
                    hi = cand
        return lo, hi


def _as_value(num, den):
    return math.inf if den == 0 else Fraction(int(num), int(den))


def _argext(num: np.ndarray, den: np.ndarray, smallest: bool) -> int:
    """Exact arg-min/arg-max of ``num/den`` (den may be 0 meaning +inf)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        approx = np.where(den == 0, np.inf, num.astype(float) / np.where(den == 0, 1, den).astype(float))
    target = approx.min() if smallest else approx.max()
    if math.isinf(target):
        cands = np.flatnonzero(np.isinf(approx))
        return int(cands[0])
    close = np.flatnonzero(np.abs(approx - target) <= 1e-9 * max(1.0, abs(target)))
    best = int(close[0])
    for k in close[1:]:
        a = Fraction(int(num[k]), int(den[k]))
        b = Fraction(int(num[best]), int(den[best]))
        if (a < b) if smallest else (a > b):
            best = int(k)
    # exact confirmation against every state in the chunk
    bn, bd = num[best], den[best]
    if smallest:
        assert not np.any(num * bd < bn * den), "approximate arg-min was not exact"
    else:
        assert not np.any(num * bd > bn * den), "approximate arg-max was not exact"
    return best
