"""Dechirp + DFT and matched-filter-bank demodulation with the argmax decision"""

import typing
from enum import IntEnum
from functools import lru_cache

import numpy as np

from .iqBuffer import IqBuffer
from .modulator import symbolCycles, symbolSamples
from .params import LoraParams

__all__ = ("DemodMethod", "DemodResult", "dechirp", "demodDft", "demodMatchedFilter", "demodBlocks", "demodSymbols", "sliceBlocks", "foldMagnitudes", "demodulatorsSelector")


class DemodMethod(IntEnum):
	dft = 0
	matchedFilter = 1


class DemodResult:
	"""Decision bin magnitudes |X_k| of one symbol and the argmax over them"""

	__slots__ = ("symbol", "magnitudes", "peakMagnitude")

	def __init__(self, symbol: int, magnitudes: np.ndarray, peakMagnitude: float) -> None:
		self.symbol = symbol
		self.magnitudes = magnitudes
		self.peakMagnitude = peakMagnitude

	@classmethod
	def fromMagnitudes(cls, magnitudes: np.ndarray) -> "DemodResult":
		s = int(np.argmax(magnitudes))  # the first maximum wins ties
		return cls(s, magnitudes, float(magnitudes[s]))

	def __repr__(self):
		return self.__class__.__name__ + "(symbol=" + repr(self.symbol) + ", peakMagnitude=" + repr(self.peakMagnitude) + ")"


def _checkLength(y: IqBuffer, params: LoraParams) -> None:
	if len(y) != params.samplesPerSymbol:
		raise ValueError("Buffer length must be os * 2^sf", len(y), params.samplesPerSymbol)


def dechirp(y: IqBuffer, params: LoraParams) -> IqBuffer:
	_checkLength(y, params)
	return y.withSamples(y.samples * np.conj(symbolSamples(0, params)))


def foldMagnitudes(magnitudes: np.ndarray, params: LoraParams) -> np.ndarray:
	"""Sums magnitudes of the aliased bins k + m * 2^sf (m < os) into the decision bin k"""
	if params.os == 1:
		return magnitudes
	return magnitudes.reshape(magnitudes.shape[:-1] + (params.os, params.chips)).sum(axis=-2)


def _dftMagnitudes(blocks: np.ndarray, params: LoraParams) -> np.ndarray:
	spectrum = np.fft.fft(blocks * np.conj(symbolSamples(0, params)), axis=-1)
	return foldMagnitudes(np.abs(spectrum), params)


MATCHED_FILTER_CACHED_ENTRIES = 1 << 18
MATCHED_FILTER_CHUNK = 256


def _candidates(start: int, stop: int, sf: int, os: int) -> np.ndarray:
	n = np.arange((1 << sf) * os)
	return np.exp(-2j * np.pi * symbolCycles(np.arange(start, stop)[:, None], sf, os, n[None, :]))


@lru_cache(maxsize=8)
def _cachedCandidates(sf: int, os: int) -> np.ndarray:
	res = _candidates(0, 1 << sf, sf, os)
	res.flags.writeable = False
	return res


def _matchedFilterMagnitudes(blocks: np.ndarray, params: LoraParams) -> np.ndarray:
	c = params.chips
	if c * params.samplesPerSymbol <= MATCHED_FILTER_CACHED_ENTRIES:
		return np.abs(blocks @ _cachedCandidates(params.sf, params.os).T)

	res = np.empty(blocks.shape[:-1] + (c,), dtype=np.float64)
	for start in range(0, c, MATCHED_FILTER_CHUNK):
		stop = min(c, start + MATCHED_FILTER_CHUNK)
		res[..., start:stop] = np.abs(blocks @ _candidates(start, stop, params.sf, params.os).T)
	return res


demodulatorsSelector = {
	DemodMethod.dft: _dftMagnitudes,
	DemodMethod.matchedFilter: _matchedFilterMagnitudes,
}


def demodDft(y: IqBuffer, params: LoraParams) -> DemodResult:
	_checkLength(y, params)
	return DemodResult.fromMagnitudes(_dftMagnitudes(y.samples, params))


def demodMatchedFilter(y: IqBuffer, params: LoraParams) -> DemodResult:
	_checkLength(y, params)
	return DemodResult.fromMagnitudes(_matchedFilterMagnitudes(y.samples, params))


def demodBlocks(blocks: np.ndarray, params: LoraParams, method: DemodMethod = DemodMethod.dft) -> typing.Tuple[np.ndarray, np.ndarray]:
	"""Demodulates a (count, os * 2^sf) matrix of symbol blocks at once. Returns the decisions and the decision-bin magnitudes."""
	blocks = np.asarray(blocks, dtype=np.complex128)
	if blocks.ndim != 2 or blocks.shape[1] != params.samplesPerSymbol:
		raise ValueError("Blocks must be a matrix with os * 2^sf columns", blocks.shape)
	magnitudes = demodulatorsSelector[method](blocks, params)
	return np.argmax(magnitudes, axis=-1), magnitudes


def sliceBlocks(samples: np.ndarray, start: int, count: int, blockLen: int) -> np.ndarray:
	"""`count` consecutive blocks starting at `start`, zero-filled where the stream is too short"""
	res = np.zeros(count * blockLen, dtype=np.complex128)
	start = int(start)
	lo = max(start, 0)
	hi = min(start + count * blockLen, len(samples))
	if hi > lo:
		res[lo - start : hi - start] = samples[lo:hi]
	return res.reshape(count, blockLen)


def demodSymbols(y: IqBuffer, params: LoraParams, method: DemodMethod = DemodMethod.dft, start: int = 0, count: typing.Optional[int] = None) -> typing.List[DemodResult]:
	"""Demodulates consecutive symbols of a stream. By default takes all whole symbols after `start`."""
	n = params.samplesPerSymbol
	if count is None:
		count = max(0, (len(y) - start) // n)
	elif start + count * n > len(y):
		raise ValueError("The stream is too short for this count of symbols", len(y), start, count)
	if not count:
		return []
	symbols, magnitudes = demodBlocks(sliceBlocks(y.samples, start, count, n), params, method)
	return [DemodResult(int(s), m, float(m[s])) for s, m in zip(symbols, magnitudes)]
