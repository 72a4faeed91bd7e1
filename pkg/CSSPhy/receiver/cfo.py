"""Residual CFO estimation from the preamble and its compensation"""

import math
import typing

import numpy as np

from ..core.iqBuffer import IqBuffer
from ..core.params import LoraParams

__all__ = ("CfoEstimate", "estimateResidualCfo", "compensateCfo", "wrapPhase")


def wrapPhase(phi: float) -> float:
	"""Into [-pi, pi)"""
	return (phi + math.pi) % (2 * math.pi) - math.pi


class CfoEstimate:
	"""Phase advance between samples one symbol apart, what remains of the CFO once whole bins are absorbed by synchronization"""

	__slots__ = ("deltaPhiHat", "pairs")

	def __init__(self, deltaPhiHat: float, pairs: int = 0) -> None:
		self.deltaPhiHat = wrapPhase(deltaPhiHat)
		self.pairs = pairs

	def binOffset(self) -> float:
		"""The residual CFO in DFT bins"""
		return self.deltaPhiHat / (2 * math.pi)

	def residualHz(self, params: LoraParams) -> float:
		return self.binOffset() * params.bw / params.chips

	def __repr__(self):
		return self.__class__.__name__ + "(deltaPhiHat=" + repr(self.deltaPhiHat) + ", pairs=" + repr(self.pairs) + ")"


def estimateResidualCfo(preambleSamples: IqBuffer, params: LoraParams) -> CfoEstimate:
	"""arg of sum y[n] * conj(y[n + N]) over every sample pair one symbol apart, N = os * 2^sf.
	For a channel rotating by exp(-j 2 pi n cfo / fs) this yields +2 pi N cfo / fs, wrapped."""
	n = params.samplesPerSymbol
	y = preambleSamples.samples
	if len(y) < 2 * n:
		raise ValueError("Residual CFO estimation needs at least two upchirps", len(y), 2 * n)
	acc = np.vdot(y[n:], y[:-n])
	return CfoEstimate(float(np.angle(acc)), len(y) - n)


def compensateCfo(samples: IqBuffer, est: CfoEstimate, params: LoraParams, startIndex: int = 0) -> IqBuffer:
	"""Multiplies sample n by exp(j n deltaPhiHat / N); `startIndex` is the running index of the first sample within the frame"""
	if not est.deltaPhiHat:
		return samples.withSamples(samples.samples.copy())
	idx = np.arange(startIndex, startIndex + len(samples))
	cycles = np.mod(idx * (est.binOffset() / params.samplesPerSymbol), 1.0)
	return samples.withSamples(samples.samples * np.exp(2j * np.pi * cycles))
