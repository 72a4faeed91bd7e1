"""Preamble detection and frame synchronization"""

import math
import typing
from warnings import warn

import numpy as np

from ..core.demodulator import DemodMethod, demodBlocks, sliceBlocks
from ..core.iqBuffer import IqBuffer
from ..core.modulator import symbolSamples
from ..core.params import LoraParams
from ..framing import DEFAULT_SYNC_WORD, FULL_DOWNCHIRPS, SYNC_WORD_SYMBOLS
from .cfo import estimateResidualCfo

__all__ = ("SyncState", "adaptiveThreshold", "detectionSpectrum", "detectPreamble", "synchronize", "THRESHOLD_FACTOR", "DETECTION_PADDING")

THRESHOLD_FACTOR = 4
DETECTION_CHUNK_BLOCKS = 64
DETECTION_PADDING = 2


class SyncState:
	"""Where a frame was found.

	`blockStart` is the first block of the run of matching peak bins, `preambleStart` the symbol boundary derived from it, `preambleEnd` the boundary of the first sync word symbol and `frameStart` the first data sample. All are indices into the stream. The boundaries absorb the CFO-induced time offset.
	"""

	__slots__ = ("sPreHat", "frameStart", "detected", "blockStart", "preambleStart", "preambleEnd", "peakMagnitude")

	def __init__(self, sPreHat: int = 0, frameStart: int = 0, detected: bool = False, blockStart: int = 0, preambleStart: int = 0, preambleEnd: int = 0, peakMagnitude: float = 0.0) -> None:
		self.sPreHat = sPreHat
		self.frameStart = frameStart
		self.detected = detected
		self.blockStart = blockStart
		self.preambleStart = preambleStart
		self.preambleEnd = preambleEnd
		self.peakMagnitude = peakMagnitude

	def __repr__(self):
		return self.__class__.__name__ + "(" + ", ".join(k + "=" + repr(getattr(self, k)) for k in __class__.__slots__) + ")"  # pylint:disable=undefined-variable


def adaptiveThreshold(magnitudes: np.ndarray, peakIndex: int, params: LoraParams) -> float:
	"""4 * sqrt(N) * sigma, sigma being the per-sample noise deviation recovered from the median of the non-peak bins (Rayleigh median is sigma * sqrt(N ln 2))"""
	rest = np.delete(magnitudes, peakIndex)
	n = params.samplesPerSymbol
	sigma = float(np.median(rest)) / math.sqrt(n * math.log(2))
	return THRESHOLD_FACTOR * math.sqrt(n) * sigma


def _detectionPadding(method: DemodMethod) -> int:
	return DETECTION_PADDING if method == DemodMethod.dft else 1


def detectionSpectrum(blocks: np.ndarray, params: LoraParams, method: DemodMethod = DemodMethod.dft) -> np.ndarray:
	"""Magnitudes of the dechirped blocks on a grid of `DETECTION_PADDING` points per bin, the DFT being zero-padded. A tone between two bins, as a CFO leaves it, keeps its full peak on this grid.
	The matched filter bank has no finer grid, with it this is just its magnitudes."""
	if method != DemodMethod.dft:
		return demodBlocks(blocks, params, method)[1]
	mags = np.abs(np.fft.fft(blocks * np.conj(symbolSamples(0, params)), n=DETECTION_PADDING * params.samplesPerSymbol, axis=-1))
	if params.os == 1:
		return mags
	return mags.reshape(mags.shape[:-1] + (params.os, DETECTION_PADDING * params.chips)).sum(axis=-2)


def detectPreamble(stream: IqBuffer, params: LoraParams, threshold: typing.Optional[float] = None, method: DemodMethod = DemodMethod.dft) -> SyncState:
	"""Slides over the stream one symbol at a time. A preamble is detected once the peak exceeds the threshold in n_pre - 1 consecutive blocks, every peak lying within one bin (circularly) of the run's mean.
	A CFO of a non-integer count of bins puts the tone between two bins, so the peaks of a run wander by a fraction of a bin.
	`threshold=None` selects the adaptive threshold, otherwise the value is an absolute magnitude."""
	n = params.samplesPerSymbol
	if len(stream) < params.nPre * n:
		raise ValueError("The stream must hold at least n_pre symbols", len(stream), params.nPre * n)

	padding = _detectionPadding(method)
	grid = padding * params.chips
	needed = params.nPre - 1
	totalBlocks = len(stream) // n
	runPeaks = []
	runMags = []
	runAnchor = -1
	runStart = 0

	for chunkStart in range(0, totalBlocks, DETECTION_CHUNK_BLOCKS):
		count = min(DETECTION_CHUNK_BLOCKS, totalBlocks - chunkStart)
		magnitudes = detectionSpectrum(sliceBlocks(stream.samples, chunkStart * n, count, n), params, method)
		for i, mags in enumerate(magnitudes):
			h = int(np.argmax(mags))
			peak = float(mags[h])
			thr = adaptiveThreshold(mags, h, params) if threshold is None else threshold
			if peak <= thr:
				runPeaks = []
				runMags = []
				continue

			if runPeaks and _isNear(h, runAnchor, grid, padding):
				runPeaks.append(h)
				runMags.append(mags)
			else:
				runPeaks = [h]
				runMags = [mags]
				runStart = chunkStart + i
			runAnchor = int(round(_circularMean(runPeaks, grid))) % grid

			if len(runPeaks) >= needed:
				return SyncState(sPreHat=_runSymbol(stream, runStart, runMags, padding, params), detected=True, blockStart=runStart * n, peakMagnitude=peak)

	return SyncState()


def _circularMean(points: typing.Sequence[int], period: int) -> float:
	ref = points[0]
	offsets = [(p - ref + period // 2) % period - period // 2 for p in points]
	return (ref + sum(offsets) / len(offsets)) % period


def _peakOffset(magnitudes: np.ndarray, peak: int) -> float:
	"""Vertex of the parabola through the peak and its two neighbours, in grid points from the peak"""
	g = len(magnitudes)
	lo = float(magnitudes[(peak - 1) % g])
	hi = float(magnitudes[(peak + 1) % g])
	den = lo - 2 * float(magnitudes[peak]) + hi
	if not den:
		return 0.0
	return 0.5 * (lo - hi) / den


def _runSymbol(stream: IqBuffer, runStart: int, runMags: typing.Sequence[np.ndarray], padding: int, params: LoraParams) -> int:
	"""The preamble bin s_pre_hat of a run.
	The tone sits at s_pre_hat minus the fractional CFO, which is measured across the run's blocks; adding it to the interpolated peak of the summed spectra rounds to s_pre_hat with half a bin of margin."""
	n = params.samplesPerSymbol
	summed = np.sum(runMags, axis=0)
	m = int(np.argmax(summed))
	tone = (m + _peakOffset(summed, m)) / padding
	if len(runMags) >= 2:
		tone += estimateResidualCfo(stream[runStart * n : (runStart + len(runMags)) * n], params).binOffset()
	return int(round(tone)) % params.chips


def _isNear(s: int, target: int, c: int, tolerance: int = 1) -> bool:
	d = (s - target) % c
	return d <= tolerance or d >= c - tolerance


def _refineBoundary(stream: IqBuffer, boundary: int, params: LoraParams, method: DemodMethod) -> int:
	"""With oversampling the peak bin resolves the boundary only to os samples; picks the sub-bin shift maximizing the bin-0 energy of the preamble"""
	os = params.os
	n = params.samplesPerSymbol
	shifts = np.arange(-(os // 2), os - os // 2)
	blocks = np.concatenate([sliceBlocks(stream.samples, boundary + int(r), 1, n) for r in shifts])
	_symbols, magnitudes = demodBlocks(blocks, params, method)
	return boundary + int(shifts[int(np.argmax(magnitudes[:, 0]))])


def synchronize(stream: IqBuffer, sync: SyncState, params: LoraParams, syncWord: typing.Tuple[int, int] = DEFAULT_SYNC_WORD, method: DemodMethod = DemodMethod.dft) -> int:
	"""Skips 2^sf - s_pre_hat samples to a symbol boundary, walks the remaining preamble, then skips the 4.25 delimiter symbols.
	The CFO-induced time offset is kept: every later block is read with it. Fills in the boundaries of `sync` and returns the index of the first data sample."""
	if not sync.detected:
		raise ValueError("Cannot synchronize to an undetected preamble", sync)

	c = params.chips
	n = params.samplesPerSymbol
	boundary = sync.blockStart + ((c - sync.sPreHat) % c) * params.os
	if params.os > 1:
		boundary = _refineBoundary(stream, boundary, params, method)

	padding = _detectionPadding(method)
	grid = padding * c
	idx = boundary
	h = 0
	for _ in range(params.nPre + 1):
		h = int(np.argmax(detectionSpectrum(sliceBlocks(stream.samples, idx, 1, n), params, method)[0]))
		if not _isNear(h, 0, grid, padding):
			break
		idx += n
	else:
		warn("No sync word after the preamble")

	if not _isNear(h, syncWord[0] * padding, grid, padding):
		warn("Sync word mismatch: got symbol " + str(round(h / padding) % c) + ", expected " + str(syncWord[0]))

	sync.preambleStart = boundary
	sync.preambleEnd = idx
	sync.frameStart = idx + (SYNC_WORD_SYMBOLS + FULL_DOWNCHIRPS) * n + n // 4
	return sync.frameStart
