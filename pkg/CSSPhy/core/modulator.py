"""Generation of CSS symbols and raw chirps"""

import typing
from enum import IntEnum
from functools import lru_cache

import numpy as np

from .iqBuffer import IqBuffer
from .params import LoraParams

__all__ = ("ChirpDirection", "ChirpSegment", "checkSymbol", "symbolCycles", "symbolSamples", "genSymbol", "genUpchirp", "genDownchirp", "modulateSymbols", "evalChirp", "chirpCycles", "synthesizeSegments", "segmentsChips", "foldIndex")


class ChirpDirection(IntEnum):
	up = 0
	down = 1


class ChirpSegment:
	"""A piece of a transmitted signal: `chips` chips of the chirp carrying `symbol`, a downchirp is the conjugate of the upchirp"""

	__slots__ = ("symbol", "direction", "chips")

	def __init__(self, symbol: int, direction: ChirpDirection = ChirpDirection.up, chips: typing.Optional[int] = None) -> None:
		self.symbol = symbol
		self.direction = direction
		self.chips = chips

	def __repr__(self):
		return self.__class__.__name__ + "(" + ", ".join(repr(k) + "=" + repr(getattr(self, k)) for k in __class__.__slots__) + ")"  # pylint:disable=undefined-variable


def checkSymbol(s: int, sf: int) -> int:
	s = int(s)
	if not 0 <= s < (1 << sf):
		raise ValueError("Symbol out of range for this spreading factor", s, sf)
	return s


def foldIndex(s: int, params: LoraParams) -> int:
	"""Sample index at which the instantaneous frequency wraps from +bw/2 to -bw/2"""
	return (params.chips - s) * params.os


def symbolCycles(s: typing.Union[int, np.ndarray], sf: int, os: int, n: np.ndarray) -> np.ndarray:
	"""Phase of the symbol in cycles, reduced to [0, 1).
	The exponent is scaled by 2 * 2^sf * os^2 to make it an exact integer, so the reduction introduces no rounding."""
	c = 1 << sf
	s = np.asarray(s, dtype=np.int64)
	n = np.asarray(n, dtype=np.int64)
	afterFold = n >= (c - s) * os
	num = n * n + (2 * s - c) * os * n - 2 * c * os * n * afterFold
	den = 2 * c * os * os
	return (num % den) / den


@lru_cache(maxsize=None)
def _symbolSamples(s: int, sf: int, os: int) -> np.ndarray:
	res = np.exp(2j * np.pi * symbolCycles(s, sf, os, np.arange((1 << sf) * os)))
	res.flags.writeable = False
	return res


def symbolSamples(s: int, params: LoraParams) -> np.ndarray:
	"""Read-only array of the samples of a symbol"""
	return _symbolSamples(checkSymbol(s, params.sf), params.sf, params.os)


def genSymbol(s: int, params: LoraParams) -> IqBuffer:
	return IqBuffer(symbolSamples(s, params), params.fs)


def genUpchirp(params: LoraParams) -> IqBuffer:
	return genSymbol(0, params)


def genDownchirp(params: LoraParams) -> IqBuffer:
	return IqBuffer(np.conj(symbolSamples(0, params)), params.fs)


def modulateSymbols(symbols: typing.Iterable[int], params: LoraParams) -> IqBuffer:
	blocks = [symbolSamples(s, params) for s in symbols]
	if not blocks:
		return IqBuffer(np.zeros(0, dtype=np.complex128), params.fs)
	return IqBuffer(np.concatenate(blocks), params.fs)


def chirpCycles(u: np.ndarray, s: typing.Union[int, np.ndarray], sf: int) -> np.ndarray:
	"""Phase in cycles of the upchirp carrying `s` at chip times `u` (time multiplied by bw) measured from the start of the symbol"""
	c = 1 << sf
	u = np.asarray(u, dtype=np.float64)
	s = np.asarray(s, dtype=np.float64)
	return u * u / (2 * c) + (s / c - 0.5) * u - u * (u >= c - s)


def evalChirp(u: np.ndarray, s: int, sf: int, direction: ChirpDirection = ChirpDirection.up) -> np.ndarray:
	"""Evaluates the continuous-time chirp at chip times `u`"""
	cycles = chirpCycles(u, s, sf)
	if direction == ChirpDirection.down:
		cycles = -cycles
	return np.exp(2j * np.pi * cycles)


def segmentsChips(segments: typing.Iterable[ChirpSegment], sf: int) -> typing.List[int]:
	c = 1 << sf
	return [c if seg.chips is None else seg.chips for seg in segments]


def synthesizeSegments(segments: typing.Sequence[ChirpSegment], params: LoraParams) -> IqBuffer:
	"""Nominal (impairment-free) synthesis of a signal plan"""
	pieces = []
	for seg, chips in zip(segments, segmentsChips(segments, params.sf)):
		samples = symbolSamples(seg.symbol, params)[: chips * params.os]
		if seg.direction == ChirpDirection.down:
			samples = np.conj(samples)
		pieces.append(samples)

	if not pieces:
		return IqBuffer(np.zeros(0, dtype=np.complex128), params.fs)
	return IqBuffer(np.concatenate(pieces), params.fs)
