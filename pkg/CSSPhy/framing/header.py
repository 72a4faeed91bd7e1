import typing

import numpy as np

from ..codec import rxChain, symbolCount, txChain
from ..codec.bits import bitsToWords, wordsToBits
from ..codec.hamming import CODE_RATES
from ..core.errors import HeaderError
from ..core.params import LoraParams

__all__ = ("PhyHeader", "HEADER_BITS", "HEADER_CR", "headerSymbolCount")

HEADER_BITS = 16
HEADER_CR = 4
MAX_PAYLOAD_LEN = 255

# (name, width) in transmission order, each field LSB first
_FIELDS = (("payloadLen", 8), ("cr", 3), ("hasCrc", 1), ("checksum", 4))


def headerSymbolCount(sf: int) -> int:
	return symbolCount(HEADER_BITS, sf, HEADER_CR)


class PhyHeader:
	"""Explicit header: payload length, code rate of the payload and CRC presence, protected by a 4-bit checksum"""

	__slots__ = ("payloadLen", "cr", "hasCrc")

	def __init__(self, payloadLen: int, cr: int, hasCrc: bool) -> None:
		if not 0 <= payloadLen <= MAX_PAYLOAD_LEN:
			raise ValueError("Payload length does not fit into the header", payloadLen)
		if cr not in CODE_RATES:
			raise ValueError("Code rate must be within 1..4", cr)
		self.payloadLen = payloadLen
		self.cr = cr
		self.hasCrc = bool(hasCrc)

	@property
	def checksum(self) -> int:
		return (self.payloadLen >> 4) ^ (self.payloadLen & 0xF) ^ ((self.cr << 1) | int(self.hasCrc))

	def toBits(self) -> np.ndarray:
		return np.concatenate([wordsToBits([int(getattr(self, name))], width)[0] for name, width in _FIELDS])

	@classmethod
	def fromBits(cls, bits: np.ndarray) -> "PhyHeader":
		if len(bits) != HEADER_BITS:
			raise HeaderError("Header must be exactly " + str(HEADER_BITS) + " bits", len(bits))
		fields = {}
		offset = 0
		for name, width in _FIELDS:
			fields[name] = int(bitsToWords(bits[offset : offset + width]))
			offset += width

		if fields["cr"] not in CODE_RATES:
			raise HeaderError("Invalid code rate in the header", fields["cr"])
		checksum = fields.pop("checksum")
		res = cls(**fields)
		if res.checksum != checksum:
			raise HeaderError("Header checksum mismatch", checksum, res.checksum)
		return res

	def encode(self, params: LoraParams) -> np.ndarray:
		return txChain(self.toBits(), params, HEADER_CR)

	@classmethod
	def decode(cls, symbols: typing.Sequence[int], params: LoraParams) -> "PhyHeader":
		bits, _corrected, uncorrectable = rxChain(symbols, params, HEADER_CR, HEADER_BITS)
		if uncorrectable:
			raise HeaderError("Uncorrectable header codeword")
		return cls.fromBits(bits)

	def __eq__(self, other) -> bool:
		return isinstance(other, __class__) and all(getattr(self, k) == getattr(other, k) for k in __class__.__slots__)  # pylint:disable=undefined-variable

	def __repr__(self):
		return self.__class__.__name__ + "(" + ", ".join(k + "=" + repr(getattr(self, k)) for k in __class__.__slots__) + ")"  # pylint:disable=undefined-variable
