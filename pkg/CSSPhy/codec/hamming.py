"""Systematic Hamming codes of rate 4/(4+cr).

Codeword layout: d0 d1 d2 d3 followed by the parity bits
	p0 = d0 ^ d1 ^ d2
	p1 = d1 ^ d2 ^ d3
	p2 = d0 ^ d1 ^ d3
	p3 = parity of the other 7 bits (so the overall parity of a cr=4 codeword is even)

cr=4 is the extended Hamming(8,4) code decoded as SECDED, cr=3 is Hamming(7,4), cr=2 keeps p0 p1, cr=1 uses a single parity bit over the nibble. cr in {1, 2} only detect errors.
"""

import typing

import numpy as np

from .bits import asBits

__all__ = ("CODE_RATES", "checkCodeRate", "codewordLength", "hammingEncode", "hammingDecode", "PARITY_CHECK_7_4")

CODE_RATES = (1, 2, 3, 4)

# parity columns over d0..d3
_P7 = np.array(
	[
		[1, 0, 1],
		[1, 1, 1],
		[1, 1, 0],
		[0, 1, 1],
	],
	dtype=np.uint8,
)

PARITY_CHECK_7_4 = np.concatenate((_P7.T, np.eye(3, dtype=np.uint8)), axis=1)

_syndromeToPosition = np.full(8, -1, dtype=np.int64)
for _pos, _col in enumerate(PARITY_CHECK_7_4.T):
	_syndromeToPosition[int(_col[0]) | int(_col[1]) << 1 | int(_col[2]) << 2] = _pos
del _pos, _col


def checkCodeRate(cr: int) -> int:
	if cr not in CODE_RATES:
		raise ValueError("Code rate must be within 1..4", cr)
	return cr


def codewordLength(cr: int) -> int:
	return 4 + checkCodeRate(cr)


def _parityBits(nibbles: np.ndarray, cr: int) -> np.ndarray:
	nibbles = nibbles.astype(np.int64)
	if cr == 1:
		return (nibbles.sum(axis=1, keepdims=True) & 1).astype(np.uint8)
	p = (nibbles @ _P7[:, : min(cr, 3)]) & 1
	if cr == 4:
		p = np.concatenate((p, (nibbles.sum(axis=1, keepdims=True) + p.sum(axis=1, keepdims=True)) & 1), axis=1)
	return p.astype(np.uint8)


def hammingEncode(data: typing.Iterable[int], cr: int) -> np.ndarray:
	checkCodeRate(cr)
	data = asBits(data)
	if len(data) % 4:
		raise ValueError("Data length must be a multiple of 4", len(data))
	nibbles = data.reshape(-1, 4)
	return np.concatenate((nibbles, _parityBits(nibbles, cr)), axis=1).reshape(-1)


def hammingDecode(coded: typing.Iterable[int], cr: int) -> typing.Tuple[np.ndarray, int, bool]:
	"""Returns the data bits, the count of corrected codewords and whether any codeword had an error that could not be corrected"""
	n = codewordLength(cr)
	coded = asBits(coded)
	if len(coded) % n:
		raise ValueError("Coded length must be a multiple of " + str(n), len(coded))

	words = coded.reshape(-1, n).copy()
	if not len(words):
		return np.zeros(0, dtype=np.uint8), 0, False

	if cr < 3:
		bad = np.any(_parityBits(words[:, :4], cr) != words[:, 4:], axis=1)
		return words[:, :4].reshape(-1), 0, bool(bad.any())

	syndromes = (words[:, :7].astype(np.int64) @ PARITY_CHECK_7_4.T.astype(np.int64)) & 1
	syndromes = syndromes @ np.array([1, 2, 4])
	positions = _syndromeToPosition[syndromes]

	if cr == 3:
		flip = positions >= 0
		uncorrectable = np.zeros(len(words), dtype=bool)
		corrected = flip
	else:
		overallOdd = (words.astype(np.int64).sum(axis=1) & 1).astype(bool)
		flip = (positions >= 0) & overallOdd
		uncorrectable = (positions >= 0) & ~overallOdd
		corrected = flip | ((positions < 0) & overallOdd)  # only p3 was hit

	rows = np.nonzero(flip)[0]
	words[rows, positions[rows]] ^= 1
	return words[:, :4].reshape(-1), int(corrected.sum()), bool(uncorrectable.any())
