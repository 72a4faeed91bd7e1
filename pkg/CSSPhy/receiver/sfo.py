"""Symbol boundary realignment under a sampling frequency offset.

Raw sample g lags its nominal position by g * (f's - f) / f samples, f = os * bw being the nominal rate. Each time the lag grows by another half sample one sample is discarded (f's > f) or duplicated (f's < f), so the realignment resolution is half a sample.
"""

import typing
from fractions import Fraction
from math import floor

import numpy as np

from ..core.iqBuffer import IqBuffer
from ..core.params import LoraParams

__all__ = ("SfoTracker", "sfoNextDrift", "realignSamples", "realignStream", "firstDriftSymbol")


def _exact(v: float) -> Fraction:
	return Fraction(v).limit_denominator(1 << 32)


class SfoTracker:
	"""Single-consumer state of the realignment of one stream. Sample indices count from the origin the tracker was started at."""

	__slots__ = ("bw", "fsRx", "os", "realignments", "nextDriftSample")

	def __init__(self, bw: float, fsRx: float, os: int = 1) -> None:  # pylint:disable=redefined-outer-name
		self.bw = bw
		self.fsRx = fsRx
		self.os = os
		self.realignments = 0
		self.nextDriftSample = self._driftSample(1)

	@classmethod
	def fromParams(cls, params: LoraParams, sfoHz: float) -> "SfoTracker":
		return cls(params.bw, params.os * (params.bw + sfoHz), params.os)

	@property
	def nominalRate(self) -> float:
		return self.os * self.bw

	@property
	def inserts(self) -> bool:
		"""The receiver is slower than nominal, so samples are duplicated instead of discarded"""
		return self.fsRx < self.nominalRate

	def _driftSample(self, k: int) -> typing.Optional[int]:
		"""Smallest g with |g * (f's - f)| > (k - 1/2) * f"""
		f = _exact(self.nominalRate)
		diff = abs(_exact(self.fsRx) - f)
		if not diff:
			return None
		return floor((k - Fraction(1, 2)) * f / diff) + 1

	def advance(self) -> None:
		self.realignments += 1
		self.nextDriftSample = self._driftSample(self.realignments + 1)

	def __repr__(self):
		return self.__class__.__name__ + "(" + ", ".join(k + "=" + repr(getattr(self, k)) for k in __class__.__slots__) + ")"  # pylint:disable=undefined-variable


def sfoNextDrift(tracker: SfoTracker, sf: int) -> typing.Optional[typing.Tuple[int, int]]:
	"""(d, n): symbol index and sample index within it of the next half-sample drift, None when the rates match"""
	g = tracker.nextDriftSample
	if g is None:
		return None
	return divmod(g, (1 << sf) * tracker.os)


def firstDriftSymbol(bw: float, sfoHz: float, sf: int, os: int = 1) -> typing.Optional[int]:
	res = sfoNextDrift(SfoTracker(bw, os * (bw + sfoHz), os), sf)
	return None if res is None else res[0]


def realignSamples(samples: np.ndarray, tracker: SfoTracker) -> typing.Tuple[np.ndarray, typing.List[int]]:
	"""Applies every realignment falling inside `samples` (index 0 being the tracker origin). Returns the realigned samples and the raw indices touched."""
	touched = []
	while tracker.nextDriftSample is not None and tracker.nextDriftSample < len(samples):
		touched.append(tracker.nextDriftSample)
		tracker.advance()

	if not touched:
		return samples, touched
	if tracker.inserts:
		return np.insert(samples, touched, samples[touched]), touched
	return np.delete(samples, touched), touched


def realignStream(samples: IqBuffer, tracker: SfoTracker, params: LoraParams, symbolCount: typing.Optional[int] = None) -> typing.Iterator[np.ndarray]:
	"""Per-symbol blocks of os * 2^sf realigned samples"""
	realigned, _touched = realignSamples(samples.samples, tracker)
	n = params.samplesPerSymbol
	available = len(realigned) // n
	if symbolCount is None:
		symbolCount = available
	elif symbolCount > available:
		raise ValueError("Stream exhausted mid-symbol", available, symbolCount)

	for i in range(symbolCount):
		yield realigned[i * n : (i + 1) * n]
