"""Monte-Carlo BER estimation over frames passed through the simulated channel"""

import time
import typing
import warnings
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ..channel import ChannelImpairments, applyImpairments
from ..codec import dataBitsPerBlock, rxChain, txChain
from ..codec.hamming import codewordLength
from ..core.demodulator import DemodMethod
from ..core.iqBuffer import IqBuffer
from ..core.params import LoraParams
from ..framing import DEFAULT_SYNC_WORD, frameSegments, preambleAndDelimiterSamples
from ..receiver import SfoTracker, compensateCfo, demodFrom, detectPreamble, estimateResidualCfo, preambleRegion, realignSamples, synchronize
from .csvFormat import *
from .modes import *

__all__ = ("SweepSpec", "BerRecord", "runPoint", "runSweep", "iterSweep", "DEFAULT_MIN_BIT_ERRORS", "DEFAULT_MAX_FRAMES", "ReceiverMode", "receiverModeNames", "receiverModeFromName", "writeBerCsv", "readBerCsv", "CSV_COLUMNS")

DEFAULT_MIN_BIT_ERRORS = 100
DEFAULT_MAX_FRAMES = 100000


class SweepSpec:
	"""One BER curve: a receiver mode evaluated over SNR points with everything else fixed.
	`impairments` is a template, its `snrDb` and `seed` are replaced per point and per trial."""

	__slots__ = ("params", "cr", "frameLenSymbols", "snrPoints", "impairments", "receiverMode", "minBitErrors", "maxFrames", "seed", "threshold", "demod", "syncWord")

	def __init__(self, params: LoraParams, cr: int = 4, frameLenSymbols: int = 32, snrPoints: typing.Iterable[float] = (0.0,), impairments: typing.Optional[ChannelImpairments] = None, receiverMode: ReceiverMode = ReceiverMode.alignedNoComp, minBitErrors: int = DEFAULT_MIN_BIT_ERRORS, maxFrames: int = DEFAULT_MAX_FRAMES, seed: int = 0, threshold: typing.Optional[float] = None, demod: DemodMethod = DemodMethod.dft, syncWord: typing.Tuple[int, int] = DEFAULT_SYNC_WORD) -> None:
		snrPoints = tuple(float(s) for s in snrPoints)
		if not snrPoints:
			raise ValueError("At least one SNR point is needed")
		if minBitErrors < 1:
			raise ValueError("minBitErrors must be at least 1", minBitErrors)
		if maxFrames < 1:
			raise ValueError("maxFrames must be at least 1", maxFrames)
		n = codewordLength(cr)
		if frameLenSymbols < n or frameLenSymbols % n:
			raise ValueError("Frame length must be a positive multiple of 4 + cr symbols", frameLenSymbols, n)

		self.params = params
		self.cr = cr
		self.frameLenSymbols = frameLenSymbols
		self.snrPoints = snrPoints
		self.impairments = impairments if impairments is not None else ChannelImpairments()
		self.receiverMode = ReceiverMode(receiverMode)
		self.minBitErrors = minBitErrors
		self.maxFrames = maxFrames
		self.seed = seed
		self.threshold = threshold
		self.demod = DemodMethod(demod)
		self.syncWord = tuple(syncWord)

	@property
	def payloadBits(self) -> int:
		return self.frameLenSymbols // codewordLength(self.cr) * dataBitsPerBlock(self.params.sf)

	def replace(self, **kwargs) -> "SweepSpec":
		dic = {k: getattr(self, k) for k in __class__.__slots__}  # pylint:disable=undefined-variable
		dic.update(kwargs)
		return self.__class__(**dic)

	def __repr__(self):
		return self.__class__.__name__ + "(" + ", ".join(k + "=" + repr(getattr(self, k)) for k in __class__.__slots__) + ")"  # pylint:disable=undefined-variable


class BerRecord:
	"""One measured point. `converged` tells whether the point stopped on `minBitErrors` rather than on `maxFrames`."""

	__slots__ = ("snrDb", "frames", "bits", "bitErrors", "symbols", "symbolErrors", "frameErrors", "wallTime", "mode", "cfoHz", "sfoHz", "sf", "cr", "os", "seed", "converged")

	def __init__(self, snrDb: float, frames: int, bits: int, bitErrors: int, symbols: int, symbolErrors: int, frameErrors: int, wallTime: float, mode: ReceiverMode, cfoHz: float, sfoHz: float, sf: int, cr: int, os: int, seed: int, converged: bool) -> None:  # pylint:disable=too-many-arguments
		self.snrDb = snrDb
		self.frames = frames
		self.bits = bits
		self.bitErrors = bitErrors
		self.symbols = symbols
		self.symbolErrors = symbolErrors
		self.frameErrors = frameErrors
		self.wallTime = wallTime
		self.mode = mode
		self.cfoHz = cfoHz
		self.sfoHz = sfoHz
		self.sf = sf
		self.cr = cr
		self.os = os
		self.seed = seed
		self.converged = converged

	@property
	def ber(self) -> float:
		return self.bitErrors / self.bits if self.bits else 0.0

	@property
	def ser(self) -> float:
		return self.symbolErrors / self.symbols if self.symbols else 0.0

	def csvRow(self) -> typing.List[str]:
		return [repr(self.snrDb), str(self.frames), str(self.bits), str(self.bitErrors), str(self.symbolErrors), str(self.frameErrors), repr(self.ber), receiverModeNames[self.mode], repr(self.cfoHz), repr(self.sfoHz), str(self.sf), str(self.cr), str(self.os), str(self.seed)]

	def counts(self) -> typing.Tuple[int, ...]:
		return (self.frames, self.bits, self.bitErrors, self.symbols, self.symbolErrors, self.frameErrors)

	def __repr__(self):
		return self.__class__.__name__ + "(" + ", ".join(k + "=" + repr(getattr(self, k)) for k in __class__.__slots__ if k != "wallTime") + ")"  # pylint:disable=undefined-variable


def _payloadRng(trialSeed: int) -> np.random.Generator:
	# a separate stream from the channel noise, which is seeded with trialSeed alone
	return np.random.default_rng([trialSeed, 1])


def _receiveSymbols(samples: np.ndarray, spec: SweepSpec, imp: ChannelImpairments, count: int) -> np.ndarray:
	"""The receiver of each mode, reduced to what the mode needs. A frame that cannot be synchronized decodes as all-zero symbols."""
	params = spec.params
	mode = spec.receiverMode
	dataOffset = preambleAndDelimiterSamples(params)

	if mode in SYNC_MODES:
		stream = IqBuffer(samples, params.fs)
		sync = detectPreamble(stream, params, spec.threshold, spec.demod)
		if not sync.detected:
			return np.zeros(count, dtype=np.int64)
		start = synchronize(stream, sync, params, spec.syncWord, spec.demod)
		if mode == ReceiverMode.timeoffsetSyncCfoComp:
			region = preambleRegion(stream, sync, params)
			if len(region) >= 2 * params.samplesPerSymbol:
				samples = compensateCfo(stream, estimateResidualCfo(region, params), params).samples
		return demodFrom(samples, start, count, params, spec.demod)[0]

	origin = imp.delaySamples
	if mode == ReceiverMode.sfoRealign and imp.sfoHz:
		tracker = SfoTracker.fromParams(params, imp.sfoHz)
		samples, touched = realignSamples(samples[origin:], tracker)
		shift = sum(1 for g in touched if g < dataOffset)
		dataOffset += shift if tracker.inserts else -shift
		origin = 0
	return demodFrom(samples, origin + dataOffset, count, params, spec.demod)[0]


def runPoint(spec: SweepSpec, snrDb: float, seed: int) -> BerRecord:
	"""Frame trials at one SNR until `minBitErrors` bit errors or `maxFrames` frames. Trial t uses seed ^ t for both payload and noise, so the result depends on nothing but (spec, snrDb, seed)."""
	params = spec.params
	imp = spec.impairments.replace(snrDb=snrDb, seed=seed)
	nBits = spec.payloadBits
	nSymbols = spec.frameLenSymbols

	frames = bitErrors = symbolErrors = frameErrors = 0
	begin = time.perf_counter()
	with warnings.catch_warnings():
		warnings.simplefilter("ignore")
		while frames < spec.maxFrames and bitErrors < spec.minBitErrors:
			trialImp = imp.forTrial(frames)
			payload = _payloadRng(trialImp.seed).integers(0, 2, nBits, dtype=np.uint8)
			txSymbols = txChain(payload, params, spec.cr)
			rx = applyImpairments(frameSegments(txSymbols, params, spec.syncWord), params, trialImp)

			rxSymbols = _receiveSymbols(rx.samples, spec, trialImp, nSymbols)
			decoded, _corrected, _uncorrectable = rxChain(rxSymbols, params, spec.cr, nBits)

			errors = int(np.count_nonzero(decoded != payload))
			bitErrors += errors
			symbolErrors += int(np.count_nonzero(rxSymbols != txSymbols))
			frameErrors += int(errors > 0)
			frames += 1

	return BerRecord(
		snrDb=float(snrDb),
		frames=frames,
		bits=frames * nBits,
		bitErrors=bitErrors,
		symbols=frames * nSymbols,
		symbolErrors=symbolErrors,
		frameErrors=frameErrors,
		wallTime=time.perf_counter() - begin,
		mode=spec.receiverMode,
		cfoHz=spec.impairments.cfoHz,
		sfoHz=spec.impairments.sfoHz,
		sf=params.sf,
		cr=spec.cr,
		os=params.os,
		seed=seed,
		converged=bitErrors >= spec.minBitErrors,
	)


def iterSweep(spec: SweepSpec, workers: int = 1) -> typing.Iterator[BerRecord]:
	"""Records in the order of `spec.snrPoints`. Points are independent, with `workers > 1` they run in worker processes."""
	count = len(spec.snrPoints)
	if workers <= 1 or count == 1:
		for snr in spec.snrPoints:
			yield runPoint(spec, snr, spec.seed)
		return

	with ProcessPoolExecutor(max_workers=min(workers, count)) as ex:
		yield from ex.map(runPoint, [spec] * count, spec.snrPoints, [spec.seed] * count)


def runSweep(spec: SweepSpec, workers: int = 1) -> typing.List[BerRecord]:
	return list(iterSweep(spec, workers))
