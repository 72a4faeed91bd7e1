"""Whitening with the 9-bit maximal-length LFSR x^9 + x^5 + 1"""

import typing
from functools import lru_cache

import numpy as np

from .bits import asBits

__all__ = ("WHITENING_POLY", "WHITENING_SEED", "whiteningSequence", "whiten", "dewhiten")

WHITENING_POLY = (9, 5, 0)
WHITENING_SEED = 0x1FF
_PERIOD = (1 << 9) - 1


@lru_cache(maxsize=None)
def _period(seed: int) -> np.ndarray:
	state = seed
	res = np.empty(_PERIOD, dtype=np.uint8)
	for i in range(_PERIOD):
		res[i] = state & 1
		feedback = (state ^ (state >> 5)) & 1
		state = (state >> 1) | (feedback << 8)
	res.flags.writeable = False
	return res


def whiteningSequence(count: int, seed: int = WHITENING_SEED) -> np.ndarray:
	if not 0 < seed < (1 << 9):
		raise ValueError("LFSR seed must be a nonzero 9-bit value", seed)
	per = _period(seed)
	return np.resize(per, count)


def whiten(data: typing.Iterable[int], seed: int = WHITENING_SEED) -> np.ndarray:
	data = asBits(data)
	return data ^ whiteningSequence(len(data), seed)


dewhiten = whiten
