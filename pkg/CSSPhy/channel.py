"""Channel impairments: AWGN, block fading, CFO, SFO and time offset.

Impairments compose in a fixed order: synthesis (analytic when SFO is present) -> fading -> CFO -> delay -> AWGN.
Noise comes from numpy's PCG64 `Generator` seeded with `seed` (reduced to 64 bits); trial `i` of a Monte-Carlo run uses `seed ^ i`.
"""

import math
import typing

import numpy as np

from .core.iqBuffer import IqBuffer
from .core.modulator import ChirpDirection, ChirpSegment, chirpCycles, segmentsChips, synthesizeSegments
from .core.params import LoraParams

__all__ = ("ChannelImpairments", "applyAwgn", "applyFading", "applyCfo", "applyDelay", "synthesizeWithSfo", "applyImpairments", "receiverRate", "cfoTimeOffset", "cfoHalfBinLimit", "sfoPpm", "SEED_MASK")

SEED_MASK = (1 << 64) - 1


class ChannelImpairments:
	"""snrDb is per-sample SNR of unit-magnitude samples, so noise variance is 10^(-snrDb/10); inf means noiseless"""

	__slots__ = ("snrDb", "h", "cfoHz", "sfoHz", "delaySamples", "seed")

	def __init__(self, snrDb: typing.Optional[float] = math.inf, h: complex = 1 + 0j, cfoHz: float = 0.0, sfoHz: float = 0.0, delaySamples: int = 0, seed: int = 0) -> None:
		if snrDb is None:
			snrDb = math.inf
		if delaySamples < 0:
			raise ValueError("Delay must be non-negative", delaySamples)
		self.snrDb = float(snrDb)
		self.h = complex(h)
		self.cfoHz = float(cfoHz)
		self.sfoHz = float(sfoHz)
		self.delaySamples = int(delaySamples)
		self.seed = int(seed) & SEED_MASK

	@property
	def noiseVariance(self) -> float:
		if math.isinf(self.snrDb) and self.snrDb > 0:
			return 0.0
		return 10 ** (-self.snrDb / 10)

	def replace(self, **kwargs) -> "ChannelImpairments":
		dic = self.toDict()
		dic.update(kwargs)
		return self.__class__(**dic)

	def forTrial(self, trial: int) -> "ChannelImpairments":
		return self.replace(seed=self.seed ^ trial)

	def toDict(self) -> typing.Dict[str, typing.Any]:
		return {k: getattr(self, k) for k in __class__.__slots__}  # pylint:disable=undefined-variable

	def __eq__(self, other) -> bool:
		return isinstance(other, __class__) and self.toDict() == other.toDict()  # pylint:disable=undefined-variable

	def __repr__(self):
		return self.__class__.__name__ + "(" + ", ".join(k + "=" + repr(getattr(self, k)) for k in __class__.__slots__) + ")"  # pylint:disable=undefined-variable


def receiverRate(params: LoraParams, sfoHz: float) -> float:
	"""Sample rate f's of a receiver whose clock deviates by sfoHz at the chip rate"""
	return params.os * (params.bw + sfoHz)


def sfoPpm(sfoHz: float, bw: float) -> float:
	return sfoHz / bw * 1e6


def cfoHalfBinLimit(params: LoraParams) -> float:
	"""Largest |CFO| in Hz an aligned receiver without compensation tolerates: half a bin"""
	return params.bw / (1 << (params.sf + 1))


def cfoTimeOffset(cfoHz: float, params: LoraParams) -> int:
	"""Samples by which preamble-based synchronization lands after the true boundary: the CFO expressed in whole bins"""
	return round(cfoHz / params.bw * params.chips) * params.os


def applyAwgn(y: IqBuffer, imp: ChannelImpairments) -> IqBuffer:
	var = imp.noiseVariance
	if not var:
		return y.withSamples(y.samples.copy())
	rng = np.random.default_rng(imp.seed)
	n = len(y)
	noise = math.sqrt(var / 2) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
	return y.withSamples(y.samples + noise)


def applyFading(y: IqBuffer, imp: ChannelImpairments) -> IqBuffer:
	if imp.h == 0:
		raise ValueError("Fading coefficient must be nonzero", imp.h)
	return y.withSamples(y.samples * imp.h)


def applyCfo(y: IqBuffer, imp: ChannelImpairments, params: typing.Optional[LoraParams] = None) -> IqBuffer:  # pylint:disable=unused-argument
	"""Rotates sample n by exp(-j 2 pi n cfo / rate), n running over the whole buffer; a dechirped symbol S becomes the tone S / 2^sf - cfo / rate"""
	if not imp.cfoHz:
		return y.withSamples(y.samples.copy())
	cycles = np.mod(np.arange(len(y)) * (imp.cfoHz / y.rate), 1.0)
	return y.withSamples(y.samples * np.exp(-2j * np.pi * cycles))


def applyDelay(y: IqBuffer, imp: ChannelImpairments) -> IqBuffer:
	"""Prepends `delaySamples` zeros; noise is added over them by the AWGN stage"""
	return y.withSamples(np.concatenate((np.zeros(imp.delaySamples, dtype=np.complex128), y.samples)))


def synthesizeWithSfo(segments: typing.Sequence[typing.Union[ChirpSegment, int]], params: LoraParams, imp: ChannelImpairments) -> IqBuffer:
	"""Samples the continuous-time transmitted signal at the receiver instants t = g / f's.
	Symbol d therefore appears offset by d * (2^sf / f's - Ts) with no resampling filter involved. Plain integers are taken as upchirp-modulated symbols."""
	segments = [seg if isinstance(seg, ChirpSegment) else ChirpSegment(int(seg)) for seg in segments]
	if not imp.sfoHz:
		return synthesizeSegments(segments, params)

	fsRx = receiverRate(params, imp.sfoHz)
	chips = np.array(segmentsChips(segments, params.sf), dtype=np.int64)
	starts = np.concatenate(([0], np.cumsum(chips)))
	totalChips = int(starts[-1])

	chipsPerSample = params.bw / fsRx
	count = math.ceil(totalChips / chipsPerSample)
	u = np.arange(count) * chipsPerSample
	u = u[u < totalChips]

	idx = np.searchsorted(starts, u, side="right") - 1
	symbols = np.array([seg.symbol for seg in segments], dtype=np.int64)[idx]
	down = np.array([seg.direction == ChirpDirection.down for seg in segments], dtype=bool)[idx]

	cycles = chirpCycles(u - starts[idx], symbols, params.sf)
	cycles[down] = -cycles[down]
	return IqBuffer(np.exp(2j * np.pi * cycles), fsRx)


def applyImpairments(segments: typing.Sequence[ChirpSegment], params: LoraParams, imp: ChannelImpairments, tailSymbols: int = 1) -> IqBuffer:
	"""Full channel. `tailSymbols` zero symbols are appended before the noise so a late-synchronized receiver can still read the last symbol."""
	y = synthesizeWithSfo(segments, params, imp)
	y = applyFading(y, imp)
	y = applyCfo(y, imp, params)
	y = applyDelay(y, imp)
	if tailSymbols:
		y = y.withSamples(np.concatenate((y.samples, np.zeros(tailSymbols * params.samplesPerSymbol, dtype=np.complex128))))
	return applyAwgn(y, imp)
