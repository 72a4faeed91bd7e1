"""The bit-domain chain: Hamming coding, whitening, interleaving and Gray indexing"""

import typing

import numpy as np

from ..core.params import LoraParams
from .bits import *
from .gray import *
from .hamming import *
from .interleaving import *
from .whitening import *


def dataBitsPerBlock(sf: int) -> int:
	"""Payload bits carried by one interleaving block: sf codewords of 4 data bits"""
	return 4 * sf


def symbolCount(nBits: int, sf: int, cr: int) -> int:
	"""Symbols the chain emits for a payload of `nBits` bits"""
	blocks = -(-nBits // dataBitsPerBlock(sf))
	return blocks * codewordLength(cr)


def txChain(payload: typing.Iterable[int], params: LoraParams, cr: int) -> np.ndarray:
	"""Payload bits into symbols. The payload is zero-padded to whole interleaving blocks."""
	sf = params.sf
	bits = padBits(payload, dataBitsPerBlock(sf))
	coded = whiten(hammingEncode(bits, cr))
	perBlock = blockBits(sf, cr)
	words = [interleave(coded[i : i + perBlock], sf, cr) for i in range(0, len(coded), perBlock)]
	if not words:
		return np.zeros(0, dtype=np.int64)
	return grayDeindexArray(np.concatenate(words))


def rxChain(symbols: typing.Iterable[int], params: LoraParams, cr: int, nBits: typing.Optional[int] = None) -> typing.Tuple[np.ndarray, int, bool]:
	"""Inverse of `txChain`. Returns the payload bits (trimmed to `nBits` if given), the count of corrected codewords and the uncorrectable flag."""
	sf = params.sf
	n = codewordLength(cr)
	symbols = np.asarray(symbols, dtype=np.int64).reshape(-1)
	if len(symbols) % n:
		raise ValueError("Symbol count must be a multiple of 4 + cr", len(symbols), n)

	words = grayIndexArray(symbols)
	coded = [deinterleave(words[i : i + n], sf, cr) for i in range(0, len(words), n)]
	if not coded:
		return np.zeros(0, dtype=np.uint8), 0, False

	bits, corrected, uncorrectable = hammingDecode(dewhiten(np.concatenate(coded)), cr)
	if nBits is not None:
		if nBits > len(bits):
			raise ValueError("Fewer bits were received than requested", len(bits), nBits)
		bits = bits[:nBits]
	return bits, corrected, uncorrectable
