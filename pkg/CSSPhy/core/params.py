"""The PHY parameter set shared by everything sample-domain"""

import typing
from fractions import Fraction

__all__ = ("LoraParams", "makeParams", "ALLOWED_SF", "ALLOWED_BW", "DEFAULT_N_PRE")

ALLOWED_SF = range(6, 13)
ALLOWED_BW = (125000, 250000, 500000)
DEFAULT_N_PRE = 8


class LoraParams:
	"""Spreading factor, bandwidth, oversampling and preamble length. Immutable, validated on construction."""

	__slots__ = ("sf", "bw", "os", "nPre")

	def __init__(self, sf: int, bw: int, os: int = 1, nPre: int = DEFAULT_N_PRE) -> None:  # pylint:disable=redefined-outer-name
		if not isinstance(sf, int) or sf not in ALLOWED_SF:
			raise ValueError("Spreading factor must be within 6..12", sf)
		if bw not in ALLOWED_BW:
			raise ValueError("Bandwidth must be one of " + repr(ALLOWED_BW), bw)
		if not isinstance(os, int) or os < 1:
			raise ValueError("Oversampling factor must be an integer >= 1", os)
		if not isinstance(nPre, int) or nPre < 2:
			raise ValueError("At least 2 preamble upchirps are needed", nPre)

		object.__setattr__(self, "sf", sf)
		object.__setattr__(self, "bw", int(bw))
		object.__setattr__(self, "os", os)
		object.__setattr__(self, "nPre", nPre)

	def __setattr__(self, k, v):
		raise AttributeError("LoraParams is immutable", k)

	@property
	def chips(self) -> int:
		"""Chips per symbol, 2^sf"""
		return 1 << self.sf

	@property
	def fs(self) -> int:
		"""Receiver sample rate in Hz"""
		return self.os * self.bw

	@property
	def samplesPerSymbol(self) -> int:
		return self.os * self.chips

	@property
	def symbolDuration(self) -> Fraction:
		"""Ts in seconds, exact"""
		return Fraction(self.chips, self.bw)

	def replace(self, **kwargs) -> "LoraParams":
		dic = self.toDict()
		dic.update(kwargs)
		return self.__class__(**dic)

	def toDict(self) -> typing.Dict[str, int]:
		return {k: getattr(self, k) for k in __class__.__slots__}  # pylint:disable=undefined-variable

	def _key(self) -> typing.Tuple[int, int, int, int]:
		return (self.sf, self.bw, self.os, self.nPre)

	def __eq__(self, other) -> bool:
		return isinstance(other, __class__) and self._key() == other._key()  # pylint:disable=undefined-variable

	def __hash__(self) -> int:
		return hash(self._key())

	def __getstate__(self):
		return self._key()

	def __setstate__(self, state):
		for k, v in zip(__class__.__slots__, state):  # pylint:disable=undefined-variable
			object.__setattr__(self, k, v)

	def __repr__(self):
		return self.__class__.__name__ + "(" + ", ".join(k + "=" + repr(getattr(self, k)) for k in __class__.__slots__) + ")"  # pylint:disable=undefined-variable


def makeParams(sf: int, bw: int, os: int = 1, nPre: int = DEFAULT_N_PRE) -> LoraParams:  # pylint:disable=redefined-outer-name
	return LoraParams(sf, bw, os, nPre)
