"""Diagonal interleaver: word i, bit (i + j) mod sf carries bit i of codeword j"""

import typing

import numpy as np

from .bits import asBits, bitsToWords, wordsToBits
from .hamming import codewordLength

__all__ = ("interleave", "deinterleave", "blockBits")


def blockBits(sf: int, cr: int) -> int:
	"""Coded bits in one interleaving block"""
	return sf * codewordLength(cr)


def interleave(block: typing.Iterable[int], sf: int, cr: int) -> np.ndarray:
	"""One block of sf codewords (codeword-major) into 4 + cr words of sf bits"""
	n = codewordLength(cr)
	block = asBits(block)
	if len(block) != sf * n:
		raise ValueError("Interleaving block must hold sf * (4 + cr) bits", len(block), sf * n)

	codewords = block.reshape(sf, n)
	i = np.arange(n)[:, None]
	j = np.arange(sf)[None, :]
	words = np.zeros((n, sf), dtype=np.uint8)
	words[i, (i + j) % sf] = codewords[j, i]
	return bitsToWords(words)


def deinterleave(words: typing.Iterable[int], sf: int, cr: int) -> np.ndarray:
	n = codewordLength(cr)
	words = np.asarray(words, dtype=np.int64).reshape(-1)
	if len(words) != n:
		raise ValueError("Interleaving block must hold 4 + cr words", len(words), n)
	if words.min() < 0 or words.max() >= (1 << sf):
		raise ValueError("Words must fit into sf bits", sf)

	wordBits = wordsToBits(words, sf)
	i = np.arange(n)[:, None]
	j = np.arange(sf)[None, :]
	codewords = np.zeros((sf, n), dtype=np.uint8)
	codewords[j, i] = wordBits[i, (i + j) % sf]
	return codewords.reshape(-1)
