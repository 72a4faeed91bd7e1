"""Receiver algorithms and the full frame reception pipeline"""

import typing
from warnings import warn

import numpy as np

from ..core.demodulator import DemodMethod, demodBlocks, sliceBlocks
from ..core.errors import PreambleNotFoundError
from ..core.iqBuffer import IqBuffer
from ..core.params import LoraParams
from ..framing import Frame, FrameConfig, parseFrame, payloadSymbolCount
from ..framing.header import PhyHeader, headerSymbolCount
from .cfo import *
from .preamble import *
from .sfo import *


class ReceiverConfig:
	"""`threshold=None` is the adaptive detection threshold. `sfoHz` is the offset the realignment assumes, it is known to the receiver rather than estimated."""

	__slots__ = ("demod", "threshold", "cfoCompensation", "sfoRealign", "sfoHz")

	def __init__(self, demod: DemodMethod = DemodMethod.dft, threshold: typing.Optional[float] = None, cfoCompensation: bool = True, sfoRealign: bool = False, sfoHz: float = 0.0) -> None:
		self.demod = DemodMethod(demod)
		self.threshold = threshold
		self.cfoCompensation = cfoCompensation
		self.sfoRealign = sfoRealign
		self.sfoHz = sfoHz

	def __repr__(self):
		return self.__class__.__name__ + "(" + ", ".join(k + "=" + repr(getattr(self, k)) for k in __class__.__slots__) + ")"  # pylint:disable=undefined-variable


class TraceRow:  # pylint: disable=too-few-public-methods
	__slots__ = ("symbolIndex", "sampleIndex", "symbol", "peakMagnitude")

	def __init__(self, symbolIndex: int, sampleIndex: int, symbol: int, peakMagnitude: float) -> None:
		self.symbolIndex = symbolIndex
		self.sampleIndex = sampleIndex
		self.symbol = symbol
		self.peakMagnitude = peakMagnitude


class ReceivedFrame:  # pylint: disable=too-few-public-methods
	__slots__ = ("frame", "crcOk", "sync", "cfo", "trace")

	def __init__(self, frame: Frame, crcOk: bool, sync: SyncState, cfo: typing.Optional[CfoEstimate], trace: typing.List[TraceRow]) -> None:
		self.frame = frame
		self.crcOk = crcOk
		self.sync = sync
		self.cfo = cfo
		self.trace = trace


def preambleRegion(stream: IqBuffer, sync: SyncState, params: LoraParams) -> IqBuffer:
	"""Samples between the synchronized preamble boundaries, trimmed by half a symbol on each side so the region stays clear of the time offset"""
	n = params.samplesPerSymbol
	lo, hi = sync.preambleStart, sync.preambleEnd
	if hi - lo - n >= 2 * n:
		lo += n // 2
		hi -= n // 2
	return stream[max(lo, 0) : hi]


def _compensate(stream: IqBuffer, sync: SyncState, params: LoraParams) -> typing.Tuple[IqBuffer, typing.Optional[CfoEstimate]]:
	region = preambleRegion(stream, sync, params)
	if len(region) < 2 * params.samplesPerSymbol:
		warn("Too few preamble upchirps for residual CFO estimation, skipping compensation")
		return stream, None
	est = estimateResidualCfo(region, params)
	return compensateCfo(stream, est, params), est


def _realign(samples: np.ndarray, sync: SyncState, params: LoraParams, sfoHz: float) -> typing.Tuple[np.ndarray, int]:
	"""Realigns from the preamble boundary on, returns the samples and the corrected first data sample"""
	origin = sync.preambleStart
	tracker = SfoTracker.fromParams(params, sfoHz)
	realigned, touched = realignSamples(samples[origin:], tracker)
	shift = sum(1 for g in touched if g + origin < sync.frameStart)
	if tracker.inserts:
		shift = -shift
	return np.concatenate((samples[:origin], realigned)), sync.frameStart - shift


def demodFrom(samples: np.ndarray, start: int, count: int, params: LoraParams, method: DemodMethod) -> typing.Tuple[np.ndarray, np.ndarray]:
	"""Demodulates `count` consecutive symbols starting at `start`, zero-filling past the end of the stream"""
	if not count:
		return np.zeros(0, dtype=np.int64), np.zeros(0)
	symbols, magnitudes = demodBlocks(sliceBlocks(samples, start, count, params.samplesPerSymbol), params, method)
	return symbols, magnitudes[np.arange(count), symbols]


def receiveFrame(stream: IqBuffer, params: LoraParams, frameCfg: FrameConfig, rxCfg: typing.Optional[ReceiverConfig] = None) -> ReceivedFrame:
	"""detect -> synchronize -> residual CFO estimation and compensation -> SFO realignment -> demodulation -> header -> payload"""
	if rxCfg is None:
		rxCfg = ReceiverConfig()

	if len(stream) < params.nPre * params.samplesPerSymbol:
		raise PreambleNotFoundError("The stream is shorter than a preamble", len(stream), params.nPre * params.samplesPerSymbol)
	sync = detectPreamble(stream, params, rxCfg.threshold, rxCfg.demod)
	if not sync.detected:
		raise PreambleNotFoundError("No preamble found in the stream")
	start = synchronize(stream, sync, params, frameCfg.syncWord, rxCfg.demod)

	cfo = None
	if rxCfg.cfoCompensation:
		stream, cfo = _compensate(stream, sync, params)

	samples = stream.samples
	if rxCfg.sfoRealign:
		if rxCfg.sfoHz:
			samples, start = _realign(samples, sync, params, rxCfg.sfoHz)
		else:
			warn("SFO realignment requested with zero SFO, nothing to do")

	n = params.samplesPerSymbol
	hCount = headerSymbolCount(params.sf) if frameCfg.hasHeader else 0
	cfg = frameCfg
	symbols, peaks = demodFrom(samples, start, hCount, params, rxCfg.demod)
	if frameCfg.hasHeader:
		header = PhyHeader.decode(symbols, params)
		cfg = frameCfg.replace(payloadLen=header.payloadLen, cr=header.cr, hasCrc=header.hasCrc)

	pSymbols, pPeaks = demodFrom(samples, start + hCount * n, payloadSymbolCount(cfg, params.sf), params, rxCfg.demod)
	symbols = np.concatenate((symbols, pSymbols))
	peaks = np.concatenate((peaks, pPeaks))

	frame, crcOk = parseFrame(symbols, frameCfg, params)
	trace = [TraceRow(i, start + i * n, int(s), float(p)) for i, (s, p) in enumerate(zip(symbols, peaks))]
	return ReceivedFrame(frame, crcOk, sync, cfo, trace)
